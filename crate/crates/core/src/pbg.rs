//! Amplitude-damping channel of a two-level atom detuned into a photonic
//! band gap.
//!
//! The excited-state amplitude is assembled from the three roots of a
//! depressed cubic (they sum to zero) as
//!
//!   G(t) = 2v₁x₁ e^{βx₁²t + iδt} + v₂(x₂+y₂) e^{βx₂²t + iδt}
//!        − Σ_j a_j y_j [1 − erf(√(βx_j²t))] e^{βx_j²t + iδt},
//!
//! with v_j = x_j/((x_j−x_i)(x_j−x_k)) and y_j = √(x_j²) on the principal
//! branch. The bracketed factor times its exponential is evaluated jointly
//! as erfcx(√(βx_j²t)), which is bounded wherever the exponential explodes.
//! Population trapping inside the gap shows up as |G(t)| approaching a
//! nonzero plateau.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::erfcx_complex;

/// |G(0) − 1| must fall below this or the coefficient set is rejected.
pub const G0_VALIDATION_TOL: f64 = 1e-6;
/// |G(t)| may exceed 1 by at most this before the run aborts.
pub const G_MAGNITUDE_TOL: f64 = 1e-6;
/// Roots closer than this are treated as coincident.
const ROOT_SEPARATION_TOL: f64 = 1e-12;

/// Reservoir parameters: the characteristic frequency β and the detuning
/// δ = ω₀ − ω_e from the band edge (δ < 0 lies inside the gap).
#[derive(Debug, Clone, Copy)]
pub struct PbgParams {
    pub beta: f64,
    pub detuning: f64,
}

impl PbgParams {
    pub fn validate(&self) -> Result<()> {
        if self.beta <= 0.0 || self.beta.is_nan() {
            return Err(Error::InvalidArgument("beta must be positive".into()));
        }
        if !self.detuning.is_finite() {
            return Err(Error::InvalidArgument("detuning must be finite".into()));
        }
        Ok(())
    }
}

/// Root data feeding G(t). `a` defaults to `v`; the constructor validates
/// the choice through G(0) = 1, so a wrong assignment aborts instead of
/// producing plausible-looking garbage.
#[derive(Debug, Clone)]
pub struct PbgCoefficients {
    pub a_plus: Complex64,
    pub a_minus: Complex64,
    pub x: [Complex64; 3],
    pub v: [Complex64; 3],
    pub y: [Complex64; 3],
    pub a: [Complex64; 3],
}

/// Build the coefficient set from the parameters, principal branches
/// throughout.
pub fn pbg_coefficients(params: &PbgParams) -> Result<PbgCoefficients> {
    params.validate()?;
    let ratio = params.detuning / params.beta;
    let inner = Complex64::new(1.0 + (4.0 / 27.0) * ratio.powi(3), 0.0);
    let root = inner.sqrt();
    let a_plus = (0.5 * (Complex64::ONE + root)).cbrt();
    let a_minus = (0.5 * (Complex64::ONE - root)).cbrt();

    let phase = |angle: f64| Complex64::from_polar(1.0, angle);
    use std::f64::consts::PI;
    let x1 = (a_plus + a_minus) * phase(PI / 4.0);
    let x2 = (a_plus * phase(-PI / 6.0) - a_minus * phase(PI / 6.0)) * phase(-PI / 4.0);
    let x3 = (a_plus * phase(PI / 6.0) - a_minus * phase(-PI / 6.0)) * phase(3.0 * PI / 4.0);
    let x = [x1, x2, x3];

    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if (x[i] - x[j]).norm() <= ROOT_SEPARATION_TOL {
            return Err(Error::DegenerateParameters(format!(
                "coincident roots x{} and x{}",
                i + 1,
                j + 1
            )));
        }
    }

    let v = [
        x[0] / ((x[0] - x[1]) * (x[0] - x[2])),
        x[1] / ((x[1] - x[0]) * (x[1] - x[2])),
        x[2] / ((x[2] - x[0]) * (x[2] - x[1])),
    ];
    let y = [(x[0] * x[0]).sqrt(), (x[1] * x[1]).sqrt(), (x[2] * x[2]).sqrt()];
    Ok(PbgCoefficients { a_plus, a_minus, x, v, y, a: v })
}

/// The channel with validated coefficients; G evaluations are independent
/// per time point.
#[derive(Debug, Clone)]
pub struct PbgModel {
    params: PbgParams,
    coeffs: PbgCoefficients,
}

impl PbgModel {
    pub fn new(params: PbgParams) -> Result<Self> {
        let coeffs = pbg_coefficients(&params)?;
        Self::with_coefficients(params, coeffs)
    }

    /// Assemble from explicit coefficients; still subject to the G(0)
    /// normalization check.
    pub fn with_coefficients(params: PbgParams, coeffs: PbgCoefficients) -> Result<Self> {
        params.validate()?;
        let g0 = g_envelope(&coeffs, params.beta, 0.0)?;
        let dev = (g0 - Complex64::ONE).norm();
        if dev > G0_VALIDATION_TOL {
            return Err(Error::ModelViolation(format!(
                "G(0) deviates from 1 by {dev:.3e}; coefficient assignment is wrong"
            )));
        }
        Ok(PbgModel { params, coeffs })
    }

    pub fn params(&self) -> &PbgParams {
        &self.params
    }

    pub fn coefficients(&self) -> &PbgCoefficients {
        &self.coeffs
    }

    /// G(t); aborts with a model violation if |G| > 1 + 1e-6, which signals
    /// a wrong branch or coefficient choice rather than physics.
    pub fn g(&self, t: f64) -> Result<Complex64> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::InvalidArgument(format!("G requested at t = {t} < 0")));
        }
        let envelope = g_envelope(&self.coeffs, self.params.beta, t)?;
        let g = envelope * Complex64::from_polar(1.0, self.params.detuning * t);
        let mag = g.norm();
        if mag > 1.0 + G_MAGNITUDE_TOL {
            return Err(Error::ModelViolation(format!("|G({t})| = {mag} exceeds 1")));
        }
        Ok(g)
    }
}

/// G(t) without the e^{iδt} phase; real β and t enter only through βx_j²t,
/// so conjugating every coefficient conjugates the result.
pub(crate) fn g_envelope(coeffs: &PbgCoefficients, beta: f64, t: f64) -> Result<Complex64> {
    let exp_term = |xsq: Complex64| -> Result<Complex64> {
        let w = beta * t * xsq;
        if w.re > 700.0 {
            return Err(Error::ModelViolation(format!(
                "exponent Re(βx²t) = {:.3e} overflows; growing mode outside supported regime",
                w.re
            )));
        }
        Ok(w.exp())
    };

    let x = &coeffs.x;
    let mut g = 2.0 * coeffs.v[0] * x[0] * exp_term(x[0] * x[0])?;
    g += coeffs.v[1] * (x[1] + coeffs.y[1]) * exp_term(x[1] * x[1])?;
    for ((&xj, &aj), &yj) in x.iter().zip(&coeffs.a).zip(&coeffs.y) {
        // a_j y_j [1 − erf(z_j)] e^{z_j²} = a_j y_j erfcx(z_j) with
        // z_j = √(βx_j²t); principal sqrt keeps Re z_j ≥ 0.
        let z = (beta * t * xj * xj).sqrt();
        g -= aj * yj * erfcx_complex(z)?;
    }
    Ok(g)
}

/// Analytic entropies (H(S_t), H(Q), H(S_tQ)) in bits of the singlet with
/// amplitude damping |G| on the system:
///
///   H(S_t)  = h(½(2−|G|²), ½|G|²),   H(Q) = 1,
///   H(S_tQ) = h(½(1−|G|²), ½(1+|G|²)),
///
/// where h is the Shannon entropy of the listed eigenvalues.
pub fn pbg_entropies(g_abs: f64) -> Result<(f64, f64, f64)> {
    if !(-1e-12..=1.0 + 1e-12).contains(&g_abs) {
        return Err(Error::InvalidArgument(format!("|G| = {g_abs} outside [0, 1]")));
    }
    let g2 = (g_abs * g_abs).clamp(0.0, 1.0);
    let xlog = |x: f64| if x > 0.0 { x * x.log2() } else { 0.0 };
    let h_s = -xlog(0.5 * (2.0 - g2)) - xlog(0.5 * g2);
    let h_q = 1.0;
    let h_sq = -xlog(0.5 * (1.0 - g2)) - xlog(0.5 * (1.0 + g2));
    Ok((h_s, h_q, h_sq))
}
