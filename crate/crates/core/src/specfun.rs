//! Complex error function and its scaled complementary companion.
//!
//! Two regimes, split along Re z: a Maclaurin series in the strip near the
//! imaginary axis, where the alternating sum stays cancellation-free (its
//! round-off grows as ε·e^{(Re z)²}), and the Laplace continued fraction of
//! the Faddeeva function w(ζ) beyond, where ζ = iz sits far enough from
//! the real ζ-axis for the fraction to converge to machine precision.
//! Combined with the erfc(z)·e^{z²} identity this keeps every branch free
//! of overflow·underflow products.

use num_complex::Complex64;

use crate::error::{Error, Result};

const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const FRAC_1_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI / 2.0;
/// Hard domain guard: beyond this modulus the exp-scaled branches overflow.
const MAX_MODULUS: f64 = 50.0;
/// The Maclaurin terms themselves overflow past this modulus.
const SERIES_MAX_MODULUS: f64 = 26.0;
const SERIES_MAX_TERMS: usize = 4000;

/// Tuning knobs for [`erf_complex_with`].
#[derive(Debug, Clone, Copy)]
pub struct ErfConfig {
    /// Diameter of the series strip: the Maclaurin series handles
    /// Re z ≤ series_cutoff_radius/2 and the continued fraction the rest
    /// (default 4, so the split is at Re z = 2, where the series still has
    /// ~3 decimal digits of headroom and the fraction already converges).
    pub series_cutoff_radius: f64,
    /// Relative error targeted by the series truncation test (default 1e-12).
    pub target_relative_error: f64,
}

impl ErfConfig {
    pub fn new(series_cutoff_radius: f64, target_relative_error: f64) -> Result<Self> {
        if series_cutoff_radius <= 0.0 || series_cutoff_radius.is_nan() {
            return Err(Error::InvalidArgument("series cutoff radius must be positive".into()));
        }
        if target_relative_error.is_nan()
            || target_relative_error <= 0.0
            || target_relative_error > 1e-6
        {
            return Err(Error::InvalidArgument(
                "target relative error must lie in (0, 1e-6]".into(),
            ));
        }
        Ok(ErfConfig { series_cutoff_radius, target_relative_error })
    }
}

impl Default for ErfConfig {
    fn default() -> Self {
        ErfConfig { series_cutoff_radius: 4.0, target_relative_error: 1e-12 }
    }
}

/// erf(z) = (2/√π) ∫₀^z e^{−s²} ds with the default configuration.
pub fn erf_complex(z: Complex64) -> Result<Complex64> {
    erf_complex_with(&ErfConfig::default(), z)
}

pub fn erf_complex_with(cfg: &ErfConfig, z: Complex64) -> Result<Complex64> {
    let r = z.norm();
    if !r.is_finite() || r > MAX_MODULUS {
        return Err(Error::ErfOutOfRange { modulus: r });
    }
    // Odd symmetry maps everything onto Re z ≥ 0.
    if z.re < 0.0 {
        return erf_complex_with(cfg, -z).map(|w| -w);
    }
    let split = 0.5 * cfg.series_cutoff_radius;
    // On the real axis the complementary continued fraction sidesteps the
    // series cancellation entirely.
    if z.im == 0.0 {
        let x = z.re;
        let v = if x <= split {
            erf_series(z, cfg.target_relative_error).re
        } else {
            1.0 - (-x * x).exp() * erfcx_real_cf(x)
        };
        return Ok(Complex64::new(v, 0.0));
    }
    if z.re <= split {
        if r > SERIES_MAX_MODULUS {
            return Err(Error::ErfOutOfRange { modulus: r });
        }
        return Ok(erf_series(z, cfg.target_relative_error));
    }
    // erf(z) = 1 − e^{−z²}·w(iz); Im(iz) = Re z keeps ζ off the real axis.
    let m_re = (z.im - z.re) * (z.im + z.re); // Re(−z²), overflow-safe
    let m_im = -2.0 * z.re * z.im;
    if m_re > 709.0 {
        return Err(Error::ErfOutOfRange { modulus: r });
    }
    let exp_mz2 = Complex64::new(m_im.cos(), m_im.sin()) * m_re.exp();
    let w = faddeeva_cf(Complex64::new(-z.im, z.re));
    Ok(Complex64::ONE - exp_mz2 * w)
}

/// erfcx(z) = e^{z²} erfc(z) on the closed right half-plane.
///
/// This is the combination that appears in every decaying amplitude term:
/// the exponential never materializes on its own, so large arguments stay
/// finite.
pub fn erfcx_complex(z: Complex64) -> Result<Complex64> {
    let r = z.norm();
    if !r.is_finite() || r > MAX_MODULUS {
        return Err(Error::ErfOutOfRange { modulus: r });
    }
    if z.re < 0.0 {
        return Err(Error::InvalidArgument(
            "erfcx_complex is defined on the right half-plane Re z >= 0".into(),
        ));
    }
    let split = 0.5 * ErfConfig::default().series_cutoff_radius;
    if z.im == 0.0 && z.re > split {
        return Ok(Complex64::new(erfcx_real_cf(z.re), 0.0));
    }
    if z.re <= split {
        if r > SERIES_MAX_MODULUS {
            return Err(Error::ErfOutOfRange { modulus: r });
        }
        // e^{z²}(1 − erf(z)); both factors are representable here.
        let erf = erf_series(z, 1e-14);
        let z2 = z * z;
        return Ok(z2.exp() * (Complex64::ONE - erf));
    }
    Ok(faddeeva_cf(Complex64::new(-z.im, z.re)))
}

/// Compensated (Kahan) complex accumulator; the series terms grow to
/// e^{|z|²} before the alternating sum collapses, so naive summation walks
/// off by ~√n ulps of the largest term.
struct KahanSum {
    sum: Complex64,
    carry: Complex64,
}

impl KahanSum {
    fn new(initial: Complex64) -> Self {
        KahanSum { sum: initial, carry: Complex64::ZERO }
    }

    fn add(&mut self, value: Complex64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Maclaurin series erf(z) = (2/√π) Σ (−1)^n z^{2n+1} / (n! (2n+1)).
fn erf_series(z: Complex64, target_rel: f64) -> Complex64 {
    let mz2 = -z * z;
    let mut term = z; // z^{2n+1} (−1)^n / n!
    let mut acc = KahanSum::new(z);
    let r2 = z.norm_sqr();
    for n in 1..SERIES_MAX_TERMS {
        term *= mz2 / n as f64;
        let contrib = term / (2 * n + 1) as f64;
        acc.add(contrib);
        // Terms grow until n ≈ |z|²; only test convergence past the peak.
        if n as f64 >= r2 {
            let c = contrib.norm();
            if c <= target_rel * acc.sum.norm() || c < 1e-310 {
                break;
            }
        }
    }
    acc.sum * TWO_OVER_SQRT_PI
}

/// Scaled complementary error function on the real axis, x ≥ 2, by the
/// Laplace continued fraction. The depth rule comes from measured
/// convergence: ~90 levels suffice at x = 2 and far fewer beyond.
fn erfcx_real_cf(x: f64) -> f64 {
    let depth = ((360.0 / (x * x)).ceil() as usize).clamp(12, 120);
    let mut t = x;
    for k in (1..=depth).rev() {
        t = x + (0.5 * k as f64) / t;
    }
    1.0 / (std::f64::consts::PI.sqrt() * t)
}

/// Faddeeva function w(ζ) for Im ζ ≥ 0 by the Laplace continued fraction
///
///   w(ζ) = (i/√π) / (ζ − (1/2)/(ζ − 1/(ζ − (3/2)/(ζ − ···))))
///
/// evaluated downward. The depth rule is calibrated against the series in
/// the overlap strip and against quadrature on the real axis: ~95 levels at
/// |ζ| = 2 shrinking as 1/|ζ|². Arguments routed here have Im ζ ≥ 2, away
/// from the real-ζ axis where the fraction degrades.
fn faddeeva_cf(zeta: Complex64) -> Complex64 {
    let depth = ((380.0 / zeta.norm_sqr()).ceil() as usize).clamp(8, 150);
    let mut t = zeta;
    for k in (1..=depth).rev() {
        t = zeta - (0.5 * k as f64) / t;
    }
    Complex64::new(0.0, FRAC_1_SQRT_PI) / t
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 60-term Maclaurin oracle, independent of the adaptive truncation.
    fn erf_oracle_60(z: Complex64) -> Complex64 {
        let mz2 = -z * z;
        let mut term = z;
        let mut sum = z;
        for n in 1..60 {
            term *= mz2 / n as f64;
            sum += term / (2 * n + 1) as f64;
        }
        sum * TWO_OVER_SQRT_PI
    }

    fn rel_err(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn erf_of_zero_is_zero() {
        assert_eq!(erf_complex(Complex64::ZERO).unwrap(), Complex64::ZERO);
    }

    #[test]
    fn erf_of_one_matches_series_oracle() {
        let oracle = erf_oracle_60(Complex64::ONE);
        // Frozen from the oracle.
        assert!((oracle.re - 0.8427007929497149).abs() < 1e-15);
        let v = erf_complex(Complex64::ONE).unwrap();
        assert!(rel_err(v, Complex64::new(0.8427007929497149, 0.0)) < 1e-13);
    }

    #[test]
    fn erf_matches_oracle_at_sample_points() {
        // The oracle's own cancellation noise grows as ε·e^{(Re z)²}, so the
        // comparison loosens with the real part.
        let pts = [
            (Complex64::new(0.3, 0.7), 1e-13),
            (Complex64::new(2.1, -1.4), 1e-12),
            (Complex64::new(-1.7, 2.9), 1e-12),
            (Complex64::new(0.0, 3.5), 1e-12),
            (Complex64::new(3.9, 0.1), 1e-9),
        ];
        for &(z, tol) in &pts {
            let v = erf_complex(z).unwrap();
            let o = erf_oracle_60(z);
            assert!(rel_err(v, o) < tol, "mismatch at {z}: {v} vs {o}");
        }
    }

    #[test]
    fn continued_fraction_branch_agrees_with_series_in_overlap_strip() {
        // Points with Re z ∈ (1, 2]: the default config routes them to the
        // series, a narrower strip routes them to the continued fraction.
        let cfg_narrow = ErfConfig::new(2.0, 1e-12).unwrap(); // split at Re z = 1
        let pts = [
            Complex64::new(1.8, 1.4),
            Complex64::new(1.2, -2.0),
            Complex64::new(2.0, 0.4),
            Complex64::new(1.5, 3.1),
        ];
        for &z in &pts {
            let series = erf_complex(z).unwrap();
            let cf = erf_complex_with(&cfg_narrow, z).unwrap();
            assert!(rel_err(cf, series) < 1e-12, "branch mismatch at {z}");
        }
    }

    #[test]
    fn erf_rejects_large_arguments() {
        assert!(matches!(
            erf_complex(Complex64::new(60.0, 0.0)),
            Err(Error::ErfOutOfRange { .. })
        ));
        // Near-imaginary-axis argument whose value overflows f64.
        assert!(erf_complex(Complex64::new(0.5, 30.0)).is_err());
    }

    #[test]
    fn erfcx_of_zero_is_one() {
        let v = erfcx_complex(Complex64::ZERO).unwrap();
        assert!(rel_err(v, Complex64::ONE) < 1e-14);
    }

    #[test]
    fn erfcx_consistent_with_erf_where_both_converge() {
        // 1 − erf(z) cancels ~e^{(Re z)²} digits, so the achievable
        // agreement degrades with Re z; 1e-8 covers Re z ≤ 2.5.
        let pts = [
            Complex64::new(0.8, 0.3),
            Complex64::new(2.5, -1.0),
            Complex64::new(1.0, 3.0),
        ];
        for &z in &pts {
            let lhs = erfcx_complex(z).unwrap();
            let z2 = z * z;
            let rhs = z2.exp() * (Complex64::ONE - erf_complex(z).unwrap());
            assert!(rel_err(lhs, rhs) < 1e-8, "mismatch at {z}");
        }
    }

    #[test]
    fn erfcx_large_real_matches_asymptotics() {
        // erfcx(x) → 1/(x√π) for large real x.
        let x = 20.0;
        let v = erfcx_complex(Complex64::new(x, 0.0)).unwrap();
        let leading = 1.0 / (x * std::f64::consts::PI.sqrt());
        assert!((v.re - leading).abs() / leading < 2e-3);
        assert!(v.im.abs() < 1e-18);
    }

    #[test]
    fn erfcx_rejects_left_half_plane() {
        assert!(erfcx_complex(Complex64::new(-0.1, 1.0)).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(ErfConfig::new(0.0, 1e-12).is_err());
        assert!(ErfConfig::new(4.0, 1e-3).is_err());
        assert!(ErfConfig::new(4.0, 1e-12).is_ok());
    }
}
