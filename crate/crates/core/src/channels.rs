//! Time-parametrized qubit channels: Pauli maps built from decay rates,
//! amplitude damping built from a complex amplitude, and the divisibility
//! witnesses attached to them.
//!
//! A Pauli channel Φ_t(ρ) = Σ_α p_α(t) σ_α ρ σ_α is fixed by three rates
//! γ_k(t) through Γ_k(t) = ∫₀ᵗ γ_k, the map eigenvalues
//!
//!   λ₁ = e^{−2(Γ₂+Γ₃)},  λ₂ = e^{−2(Γ₁+Γ₃)},  λ₃ = e^{−2(Γ₁+Γ₂)},
//!
//! and the probabilities p₀ = (1+λ₁+λ₂+λ₃)/4, p_k = (1+λ_k−λ_i−λ_j)/4.
//! The channel stays completely positive iff every p_α ≥ 0, which can hold
//! even where individual rates diverge or turn negative.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{tensor, CMatrix, DensityMatrix, Subsystem, PAIR_DIM, QUBIT_DIM};
use crate::quad::{adaptive_simpson, DEFAULT_ABS_TOL};

/// Rates below this are treated as non-negative when classifying divisibility.
pub const DIVISIBILITY_RATE_TOL: f64 = 1e-12;
/// Probabilities below this flag a genuine CP violation.
pub const CP_VIOLATION_TOL: f64 = 1e-10;
/// Kraus completeness tolerance for subsystem application.
const KRAUS_COMPLETENESS_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
enum RateKind {
    /// γ(t) = value.
    Constant { value: f64 },
    /// γ(t) = (ω/2)·tan(ωt); divergent at ωt = π/2.
    Tan { omega: f64 },
    /// γ(t) = −(ω/2)·tanh(ωt); always negative for t > 0.
    Tanh { omega: f64 },
    /// Piecewise-linear interpolation of samples; Γ is its exact integral.
    Tabulated { times: Vec<f64>, rates: Vec<f64> },
}

/// One time-dependent decoherence rate γ(t) together with its integral.
#[derive(Debug, Clone)]
pub struct RateFunction {
    kind: RateKind,
    closed_form_integral: bool,
}

impl RateFunction {
    pub fn constant(value: f64) -> Self {
        RateFunction { kind: RateKind::Constant { value }, closed_form_integral: true }
    }

    /// The resonant dephasing rate of the tan family; `omega` must be > 0.
    pub fn tan(omega: f64) -> Result<Self> {
        if omega <= 0.0 || omega.is_nan() {
            return Err(Error::InvalidArgument("tan rate requires omega > 0".into()));
        }
        Ok(RateFunction { kind: RateKind::Tan { omega }, closed_form_integral: true })
    }

    /// The eternally negative tanh-family rate; `omega` must be > 0.
    pub fn tanh(omega: f64) -> Result<Self> {
        if omega <= 0.0 || omega.is_nan() {
            return Err(Error::InvalidArgument("tanh rate requires omega > 0".into()));
        }
        Ok(RateFunction { kind: RateKind::Tanh { omega }, closed_form_integral: true })
    }

    /// Samples (strictly increasing times starting at 0) interpolated linearly.
    pub fn tabulated(times: Vec<f64>, rates: Vec<f64>) -> Result<Self> {
        if times.len() != rates.len() || times.len() < 2 {
            return Err(Error::InvalidArgument(
                "tabulated rate needs at least two samples with matching lengths".into(),
            ));
        }
        if times[0] != 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "tabulated times must start at 0 and increase strictly".into(),
            ));
        }
        if rates.iter().any(|r| !r.is_finite()) {
            return Err(Error::InvalidArgument("tabulated rates must be finite".into()));
        }
        Ok(RateFunction { kind: RateKind::Tabulated { times, rates }, closed_form_integral: true })
    }

    /// Drop the closed-form integral so Γ falls back to adaptive quadrature.
    pub fn without_closed_form(mut self) -> Self {
        self.closed_form_integral = false;
        self
    }

    pub fn has_closed_form_integral(&self) -> bool {
        self.closed_form_integral
    }

    /// γ(t).
    pub fn eval(&self, t: f64) -> Result<f64> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::InvalidArgument(format!("rate evaluated at t = {t} < 0")));
        }
        match &self.kind {
            RateKind::Constant { value } => Ok(*value),
            RateKind::Tan { omega } => {
                let v = 0.5 * omega * (omega * t).tan();
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Singularity { t })
                }
            }
            RateKind::Tanh { omega } => Ok(-0.5 * omega * (omega * t).tanh()),
            RateKind::Tabulated { times, rates } => {
                let last = *times.last().expect("validated non-empty");
                if t > last {
                    return Err(Error::InvalidArgument(format!(
                        "t = {t} beyond tabulated range [0, {last}]"
                    )));
                }
                let idx = times.partition_point(|&x| x <= t).min(times.len() - 1);
                let (i0, i1) = (idx - 1, idx);
                let w = (t - times[i0]) / (times[i1] - times[i0]);
                Ok(rates[i0] + w * (rates[i1] - rates[i0]))
            }
        }
    }

    /// Γ(t) = ∫₀ᵗ γ(τ) dτ, exactly where a closed form exists and by
    /// adaptive Simpson quadrature (1e-10 absolute) otherwise.
    pub fn gamma_integral(&self, t: f64) -> Result<f64> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::InvalidArgument(format!("integral evaluated at t = {t} < 0")));
        }
        if let RateKind::Tan { omega } = self.kind {
            // The integral diverges at the first pole regardless of method.
            if omega * t >= std::f64::consts::FRAC_PI_2 {
                return Err(Error::Singularity { t: std::f64::consts::FRAC_PI_2 / omega });
            }
        }
        if self.closed_form_integral {
            match &self.kind {
                RateKind::Constant { value } => Ok(value * t),
                RateKind::Tan { omega } => Ok(-0.5 * (omega * t).cos().ln()),
                RateKind::Tanh { omega } => Ok(-0.5 * (omega * t).cosh().ln()),
                RateKind::Tabulated { times, rates } => {
                    self.eval(t)?; // range check
                    let mut acc = 0.0;
                    for i in 1..times.len() {
                        if times[i] <= t {
                            acc += 0.5 * (rates[i] + rates[i - 1]) * (times[i] - times[i - 1]);
                        } else {
                            let r_t = self.eval(t)?;
                            acc += 0.5 * (r_t + rates[i - 1]) * (t - times[i - 1]);
                            break;
                        }
                    }
                    Ok(acc)
                }
            }
        } else {
            use std::cell::Cell;
            let failed = Cell::new(false);
            let v = adaptive_simpson(
                |tau| match self.eval(tau) {
                    Ok(g) if g.is_finite() => g,
                    _ => {
                        failed.set(true);
                        0.0
                    }
                },
                0.0,
                t,
                DEFAULT_ABS_TOL,
            );
            if failed.get() || !v.is_finite() {
                Err(Error::Singularity { t })
            } else {
                Ok(v)
            }
        }
    }

    /// e^{−2Γ(t)} continued analytically through rate singularities.
    ///
    /// For the tan family this equals cos(ωt), which stays finite and
    /// continuous where Γ itself diverges; the composed map is well defined
    /// there even though the generator is not.
    fn exp_neg2_gamma(&self, t: f64) -> Result<f64> {
        match &self.kind {
            RateKind::Constant { value } => Ok((-2.0 * value * t).exp()),
            RateKind::Tan { omega } => Ok((omega * t).cos()),
            RateKind::Tanh { omega } => Ok((omega * t).cosh()),
            _ => Ok((-2.0 * self.gamma_integral(t)?).exp()),
        }
    }
}

/// The three rates (γ₁, γ₂, γ₃) driving a Pauli channel.
#[derive(Debug, Clone)]
pub struct PauliRateSet {
    pub g1: RateFunction,
    pub g2: RateFunction,
    pub g3: RateFunction,
}

impl PauliRateSet {
    pub fn new(g1: RateFunction, g2: RateFunction, g3: RateFunction) -> Self {
        PauliRateSet { g1, g2, g3 }
    }

    fn rates(&self) -> [&RateFunction; 3] {
        [&self.g1, &self.g2, &self.g3]
    }
}

/// The Pauli channel frozen at one time: integrals, map eigenvalues and
/// Pauli probabilities.
///
/// `gamma` entries are +∞ past an epoch where the corresponding integral
/// diverges; `lambda` and `p` remain finite there (see
/// [`RateFunction::gamma_integral`] vs the analytic continuation used for λ).
#[derive(Debug, Clone)]
pub struct PauliSnapshot {
    pub t: f64,
    pub gamma: [f64; 3],
    pub lambda: [f64; 3],
    pub p: [f64; 4],
}

impl PauliSnapshot {
    /// Map eigenvalues (λ₁, λ₂, λ₃) → probabilities (p₀, …, p₃).
    fn probabilities(lambda: [f64; 3]) -> [f64; 4] {
        let [l1, l2, l3] = lambda;
        [
            0.25 * (1.0 + l1 + l2 + l3),
            0.25 * (1.0 + l1 - l2 - l3),
            0.25 * (1.0 - l1 + l2 - l3),
            0.25 * (1.0 - l1 - l2 + l3),
        ]
    }

    /// Snapshot assembled directly from a probability vector (Σ p = 1).
    pub fn from_probabilities(t: f64, p: [f64; 4]) -> Result<Self> {
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!("probabilities sum to {sum}, not 1")));
        }
        let lambda = [
            p[0] + p[1] - p[2] - p[3],
            p[0] - p[1] + p[2] - p[3],
            p[0] - p[1] - p[2] + p[3],
        ];
        let gamma = gammas_from_lambdas(lambda);
        Ok(PauliSnapshot { t, gamma, lambda, p })
    }

    /// Pure dephasing along z with map eigenvalue `lambda12` on σ_x, σ_y.
    pub fn dephasing(t: f64, lambda12: f64) -> Self {
        let lambda = [lambda12, lambda12, 1.0];
        let p = Self::probabilities(lambda);
        PauliSnapshot { t, gamma: gammas_from_lambdas(lambda), lambda, p }
    }

    /// True when any probability is negative beyond round-off: the map at
    /// this time is not completely positive.
    pub fn cp_violation(&self) -> bool {
        self.p.iter().any(|&p| p < -CP_VIOLATION_TOL)
    }
}

/// Invert λ_k = e^{−2(Γ_i+Γ_j)} for the integrals; +∞/NaN-free only when all
/// λ_k > 0, otherwise the divergent entries are +∞.
fn gammas_from_lambdas([l1, l2, l3]: [f64; 3]) -> [f64; 3] {
    let g = |num: f64, den: f64| -> f64 {
        if num > 0.0 && den > 0.0 {
            -0.25 * (num / den).ln()
        } else {
            f64::INFINITY
        }
    };
    // λ₂λ₃/λ₁ = e^{−4Γ₁}, and cyclically.
    [g(l2 * l3, l1), g(l1 * l3, l2), g(l1 * l2, l3)]
}

/// Evaluate the Pauli channel defined by `rates` at time `t`.
pub fn pauli_snapshot(rates: &PauliRateSet, t: f64) -> Result<PauliSnapshot> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::InvalidArgument(format!("snapshot requested at t = {t} < 0")));
    }
    let mut e = [0.0f64; 3]; // e_k = e^{−2Γ_k}, analytically continued
    let mut gamma = [0.0f64; 3];
    for (k, rate) in rates.rates().into_iter().enumerate() {
        e[k] = rate.exp_neg2_gamma(t)?;
        gamma[k] = match rate.gamma_integral(t) {
            Ok(v) => v,
            Err(Error::Singularity { .. }) => f64::INFINITY,
            Err(other) => return Err(other),
        };
    }
    let lambda = [e[1] * e[2], e[0] * e[2], e[0] * e[1]];
    let p = PauliSnapshot::probabilities(lambda);
    Ok(PauliSnapshot { t, gamma, lambda, p })
}

/// Σ_α p_α σ_α ρ σ_α on a single qubit.
pub fn apply_pauli(snapshot: &PauliSnapshot, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != QUBIT_DIM {
        return Err(Error::InvalidArgument("apply_pauli expects a single-qubit state".into()));
    }
    let mut out = CMatrix::zeros(QUBIT_DIM);
    for (alpha, &p) in snapshot.p.iter().enumerate() {
        let sigma = CMatrix::pauli(alpha);
        out = out.add(&rho.mat().conjugate_by(&sigma).scale(Complex64::new(p, 0.0)));
    }
    DensityMatrix::with_tolerance(out, rho.tolerance())
}

/// The pair of amplitude-damping Kraus operators generated by G(t):
/// K₁ = diag(1, g), K₂ = √(1−|g|²)·|0⟩⟨1|.
#[derive(Debug, Clone)]
pub struct KrausPair {
    pub k1: CMatrix,
    pub k2: CMatrix,
    pub g: Complex64,
}

impl KrausPair {
    /// Largest entry of |K₁†K₁ + K₂†K₂ − I|.
    pub fn completeness_deviation(&self) -> f64 {
        let sum = self
            .k1
            .adjoint()
            .matmul(&self.k1)
            .add(&self.k2.adjoint().matmul(&self.k2));
        sum.max_abs_diff(&CMatrix::identity(QUBIT_DIM))
    }
}

pub fn amplitude_damping_kraus(g: Complex64) -> Result<KrausPair> {
    let mag = g.norm();
    if mag > 1.0 + 1e-12 || mag.is_nan() {
        return Err(Error::InvalidArgument(format!("|g| = {mag} exceeds 1")));
    }
    let o = Complex64::ZERO;
    let decay = (1.0 - g.norm_sqr()).max(0.0).sqrt();
    let k1 = CMatrix::from_rows_2([[Complex64::ONE, o], [o, g]]);
    let k2 = CMatrix::from_rows_2([[o, Complex64::new(decay, 0.0)], [o, o]]);
    Ok(KrausPair { k1, k2, g })
}

/// Apply a single-qubit Kraus set to one side of a two-qubit state:
/// Σ_i (K_i ⊗ 1) ρ (K_i ⊗ 1)† for the system, (1 ⊗ K_i) for the memory.
pub fn apply_to_subsystem(
    kraus: &[CMatrix],
    rho: &DensityMatrix,
    target: Subsystem,
) -> Result<DensityMatrix> {
    if rho.dim() != PAIR_DIM {
        return Err(Error::InvalidArgument("apply_to_subsystem expects a 4x4 state".into()));
    }
    if kraus.is_empty() || kraus.iter().any(|k| k.dim() != QUBIT_DIM) {
        return Err(Error::InvalidArgument("Kraus operators must be 2x2".into()));
    }
    let mut completeness = CMatrix::zeros(QUBIT_DIM);
    for k in kraus {
        completeness = completeness.add(&k.adjoint().matmul(k));
    }
    let dev = completeness.max_abs_diff(&CMatrix::identity(QUBIT_DIM));
    if dev > KRAUS_COMPLETENESS_TOL {
        return Err(Error::InvalidArgument(format!(
            "Kraus completeness violated by {dev:.3e}"
        )));
    }
    let id = CMatrix::identity(QUBIT_DIM);
    let mut out = CMatrix::zeros(PAIR_DIM);
    for k in kraus {
        let embedded = match target {
            Subsystem::System => tensor(k, &id)?,
            Subsystem::Memory => tensor(&id, k)?,
        };
        out = out.add(&rho.mat().conjugate_by(&embedded));
    }
    DensityMatrix::with_tolerance(out, rho.tolerance())
}

/// Choi matrix (Φ_t ⊗ 1)|Ω⟩⟨Ω| of the snapshot's Pauli channel, with
/// |Ω⟩ = (|00⟩ + |11⟩)/√2. Its eigenvalues are the p_α, so a negative
/// eigenvalue witnesses CP violation; the construction itself is linear and
/// works for negative probabilities too.
pub fn pauli_choi(snapshot: &PauliSnapshot) -> CMatrix {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let omega = CMatrix::outer(&[s, Complex64::ZERO, Complex64::ZERO, s]);
    let id = CMatrix::identity(QUBIT_DIM);
    let mut out = CMatrix::zeros(PAIR_DIM);
    for (alpha, &p) in snapshot.p.iter().enumerate() {
        let embedded = tensor(&CMatrix::pauli(alpha), &id).expect("2x2 factors");
        out = out.add(&omega.conjugate_by(&embedded).scale(Complex64::new(p, 0.0)));
    }
    out
}

/// Divisibility classification of the channel at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DivisibilityFlags {
    /// All rates non-negative: every intermediate map is CPTP.
    pub cp_divisible: bool,
    /// All pairwise rate sums non-negative: intermediate maps are positive
    /// (weak non-Markovianity at most).
    pub p_divisible: bool,
    /// Some probability went genuinely negative: the map itself is not CP.
    pub cp_violation: bool,
}

pub fn divisibility_flags(rates: &PauliRateSet, t: f64) -> Result<DivisibilityFlags> {
    let g: Vec<f64> = rates
        .rates()
        .into_iter()
        .map(|r| r.eval(t))
        .collect::<Result<_>>()?;
    let cp_divisible = g.iter().all(|&x| x >= -DIVISIBILITY_RATE_TOL);
    let p_divisible = g[0] + g[1] >= -DIVISIBILITY_RATE_TOL
        && g[0] + g[2] >= -DIVISIBILITY_RATE_TOL
        && g[1] + g[2] >= -DIVISIBILITY_RATE_TOL;
    let cp_violation = pauli_snapshot(rates, t)?.cp_violation();
    Ok(DivisibilityFlags { cp_divisible, p_divisible, cp_violation })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Fig. 2 tan scenario: γ₁ = γ₂ = λ/2, γ₃ = (ω/2)tan(ωt).
    pub(crate) fn tan_rates(lambda: f64, omega: f64) -> PauliRateSet {
        PauliRateSet::new(
            RateFunction::constant(0.5 * lambda),
            RateFunction::constant(0.5 * lambda),
            RateFunction::tan(omega).unwrap(),
        )
    }

    fn tanh_rates(lambda: f64, omega: f64) -> PauliRateSet {
        PauliRateSet::new(
            RateFunction::constant(0.5 * lambda),
            RateFunction::constant(0.5 * lambda),
            RateFunction::tanh(omega).unwrap(),
        )
    }

    #[test]
    fn constant_rate_integral_is_linear() {
        let r = RateFunction::constant(0.05);
        assert!((r.gamma_integral(3.0).unwrap() - 0.15).abs() < 1e-15);
    }

    #[test]
    fn tan_integral_matches_antiderivative_and_quadrature() {
        // Antiderivative oracle: −½ ln cos(ωt) at ω = 2, t = 0.5.
        let expected = -0.5 * 1.0f64.cos().ln();
        assert!((expected - 0.307_813_235_193_007).abs() < 1e-14);
        let r = RateFunction::tan(2.0).unwrap();
        assert!((r.gamma_integral(0.5).unwrap() - expected).abs() < 1e-12);
        let quad = r.clone().without_closed_form().gamma_integral(0.5).unwrap();
        assert!((quad - expected).abs() < 1e-9);
    }

    #[test]
    fn tanh_integral_matches_antiderivative_and_quadrature() {
        // Antiderivative oracle: −½ ln cosh(ωt) at ω = 0.5, t = 2.
        let expected = -0.5 * 1.0f64.cosh().ln();
        assert!((expected + 0.21689041524151618).abs() < 1e-14);
        let r = RateFunction::tanh(0.5).unwrap();
        assert!((r.gamma_integral(2.0).unwrap() - expected).abs() < 1e-12);
        let quad = r.clone().without_closed_form().gamma_integral(2.0).unwrap();
        assert!((quad - expected).abs() < 1e-9);
    }

    #[test]
    fn tan_integral_is_singular_at_and_past_the_pole() {
        let r = RateFunction::tan(2.0).unwrap();
        let pole = std::f64::consts::FRAC_PI_2 / 2.0;
        assert!(matches!(r.gamma_integral(pole), Err(Error::Singularity { .. })));
        assert!(matches!(r.gamma_integral(1.0), Err(Error::Singularity { .. })));
        let nf = r.without_closed_form();
        assert!(matches!(nf.gamma_integral(1.0), Err(Error::Singularity { .. })));
    }

    #[test]
    fn tabulated_rate_interpolates_and_integrates() {
        let r = RateFunction::tabulated(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 1.0]).unwrap();
        assert!((r.eval(0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!((r.gamma_integral(2.0).unwrap() - 1.5).abs() < 1e-15);
        assert!((r.gamma_integral(0.5).unwrap() - 0.125).abs() < 1e-15);
        assert!(r.eval(3.0).is_err());
    }

    #[test]
    fn snapshot_at_zero_is_identity_channel() {
        let snap = pauli_snapshot(&tan_rates(0.1, 2.0), 0.0).unwrap();
        assert_eq!(snap.gamma, [0.0, 0.0, 0.0]);
        assert_eq!(snap.lambda, [1.0, 1.0, 1.0]);
        assert!((snap.p[0] - 1.0).abs() < 1e-15);
        assert!(snap.p[1..].iter().all(|&p| p.abs() < 1e-15));
    }

    #[test]
    fn snapshot_matches_closed_form_lambdas() {
        // Fig. 2 tan scenario: λ₃ = e^{−0.2t}, λ₁ = λ₂ = e^{−0.1t} cos(2t),
        // including past the generator singularity at t = π/4.
        let rates = tan_rates(0.1, 2.0);
        for &t in &[0.3, 0.7, 1.2, 2.5, 4.9] {
            let snap = pauli_snapshot(&rates, t).unwrap();
            let expect_12 = (-0.1 * t).exp() * (2.0 * t).cos();
            let expect_3 = (-0.2 * t).exp();
            assert!((snap.lambda[0] - expect_12).abs() < 1e-12, "t = {t}");
            assert!((snap.lambda[1] - expect_12).abs() < 1e-12);
            assert!((snap.lambda[2] - expect_3).abs() < 1e-12);
            let sum: f64 = snap.p.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
            assert!(!snap.cp_violation(), "channel must stay CP at t = {t}");
        }
        // Past the pole the integral is divergent but the map is fine.
        let past = pauli_snapshot(&rates, 1.0).unwrap();
        assert!(past.gamma[2].is_infinite());
        assert!(past.lambda[0] < 0.0);
    }

    #[test]
    fn snapshot_lambda_gamma_consistency_where_finite() {
        let rates = tanh_rates(1.0, 0.5);
        for &t in &[0.2, 1.0, 3.7, 8.0] {
            let snap = pauli_snapshot(&rates, t).unwrap();
            let [g1, g2, g3] = snap.gamma;
            assert!((snap.lambda[0] - (-2.0 * (g2 + g3)).exp()).abs() < 1e-12);
            assert!((snap.lambda[1] - (-2.0 * (g1 + g3)).exp()).abs() < 1e-12);
            assert!((snap.lambda[2] - (-2.0 * (g1 + g2)).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn fully_depolarizing_probabilities() {
        let snap = PauliSnapshot::from_probabilities(0.0, [0.25; 4]).unwrap();
        assert_eq!(snap.lambda, [0.0, 0.0, 0.0]);
        let rho = apply_pauli(&snap, &DensityMatrix::maximally_mixed(2)).unwrap();
        let half = CMatrix::identity(2).scale(Complex64::new(0.5, 0.0));
        assert!(rho.mat().max_abs_diff(&half) < 1e-15);
    }

    #[test]
    fn identity_channel_preserves_any_state() {
        let snap = PauliSnapshot::from_probabilities(0.0, [1.0, 0.0, 0.0, 0.0]).unwrap();
        let rho = DensityMatrix::from_pure(&[
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.8),
        ])
        .unwrap();
        let out = apply_pauli(&snap, &rho).unwrap();
        assert!(out.mat().max_abs_diff(rho.mat()) < 1e-15);
    }

    #[test]
    fn pauli_channel_is_unital() {
        let snap = PauliSnapshot::from_probabilities(1.0, [0.4, 0.3, 0.2, 0.1]).unwrap();
        let out = apply_pauli(&snap, &DensityMatrix::maximally_mixed(2)).unwrap();
        let half = CMatrix::identity(2).scale(Complex64::new(0.5, 0.0));
        assert!(out.mat().max_abs_diff(&half) < 1e-12);
    }

    #[test]
    fn amplitude_damping_limits() {
        let no_decay = amplitude_damping_kraus(Complex64::ONE).unwrap();
        assert!(no_decay.k1.max_abs_diff(&CMatrix::identity(2)) < 1e-15);
        assert!(no_decay.k2.max_abs_diff(&CMatrix::zeros(2)) < 1e-15);
        assert!(no_decay.completeness_deviation() < 1e-15);

        let full = amplitude_damping_kraus(Complex64::ZERO).unwrap();
        assert!((full.k2[(0, 1)] - Complex64::ONE).norm() < 1e-15);
        assert!(full.completeness_deviation() < 1e-15);

        assert!(amplitude_damping_kraus(Complex64::new(1.1, 0.0)).is_err());
    }

    #[test]
    fn pure_phase_damping_keeps_populations() {
        // g = e^{iφ} is unitary: populations of any input are unchanged.
        let g = Complex64::from_polar(1.0, 0.8);
        let pair = amplitude_damping_kraus(g).unwrap();
        assert!(pair.completeness_deviation() < 1e-14);
        let rho = DensityMatrix::maximally_mixed(2);
        let k1 = pair.k1.clone();
        let out = DensityMatrix::new(rho.mat().conjugate_by(&k1)).unwrap();
        let half = CMatrix::identity(2).scale(Complex64::new(0.5, 0.0));
        assert!(out.mat().max_abs_diff(&half) < 1e-14);
    }

    #[test]
    fn apply_to_subsystem_identity_kraus() {
        let rho = DensityMatrix::singlet();
        let out = apply_to_subsystem(&[CMatrix::identity(2)], &rho, Subsystem::System).unwrap();
        assert!(out.mat().max_abs_diff(rho.mat()) < 1e-15);
    }

    #[test]
    fn apply_to_subsystem_rejects_incomplete_kraus() {
        let rho = DensityMatrix::singlet();
        let half = CMatrix::identity(2).scale(Complex64::new(0.5, 0.0));
        assert!(matches!(
            apply_to_subsystem(&[half], &rho, Subsystem::System),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn pauli_kraus_on_memory_keeps_reduced_memory_mixed() {
        let snap = PauliSnapshot::from_probabilities(1.0, [0.55, 0.2, 0.15, 0.1]).unwrap();
        let kraus: Vec<CMatrix> = snap
            .p
            .iter()
            .enumerate()
            .map(|(a, &p)| CMatrix::pauli(a).scale(Complex64::new(p.sqrt(), 0.0)))
            .collect();
        let out = apply_to_subsystem(&kraus, &DensityMatrix::singlet(), Subsystem::Memory).unwrap();
        let red = crate::linalg::partial_trace(&out, Subsystem::Memory).unwrap();
        let half = CMatrix::identity(2).scale(Complex64::new(0.5, 0.0));
        assert!(red.mat().max_abs_diff(&half) < 1e-12);
    }

    #[test]
    fn full_amplitude_decay_on_system_entropies() {
        // g = 0 on the system of the singlet: H(S_t) = 0, H(S_tQ) = 1.
        let pair = amplitude_damping_kraus(Complex64::ZERO).unwrap();
        let out = apply_to_subsystem(
            &[pair.k1.clone(), pair.k2.clone()],
            &DensityMatrix::singlet(),
            Subsystem::System,
        )
        .unwrap();
        let h_s = crate::linalg::von_neumann_entropy(
            &crate::linalg::partial_trace(&out, Subsystem::System).unwrap(),
        );
        let h_sq = crate::linalg::von_neumann_entropy(&out);
        assert!(h_s.abs() < 1e-12);
        assert!((h_sq - 1.0).abs() < 1e-12);
    }

    #[test]
    fn choi_of_identity_and_depolarizing() {
        let id = PauliSnapshot::from_probabilities(0.0, [1.0, 0.0, 0.0, 0.0]).unwrap();
        let eigs = crate::linalg::herm_eigvals(&pauli_choi(&id)).unwrap();
        assert!((eigs[3] - 1.0).abs() < 1e-12);
        assert!(eigs[..3].iter().all(|&x| x.abs() < 1e-12));

        let dep = PauliSnapshot::from_probabilities(0.0, [0.25; 4]).unwrap();
        let choi = pauli_choi(&dep);
        let quarter = CMatrix::identity(4).scale(Complex64::new(0.25, 0.0));
        assert!(choi.max_abs_diff(&quarter) < 1e-14);
    }

    #[test]
    fn choi_eigenvalues_are_probabilities() {
        let snap = PauliSnapshot::from_probabilities(0.7, [0.5, 0.25, 0.15, 0.1]).unwrap();
        let mut eigs = crate::linalg::herm_eigvals(&pauli_choi(&snap)).unwrap();
        let mut p = snap.p.to_vec();
        p.sort_by(|a, b| a.partial_cmp(b).unwrap());
        eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (e, q) in eigs.iter().zip(&p) {
            assert!((e - q).abs() < 1e-12);
        }
    }

    #[test]
    fn tan_scenario_divisibility_past_pole() {
        // ωt ∈ (π/2, π): γ₃ < 0 and γ₁ + γ₃ < 0 for λ = 0.1, ω = 2.
        let rates = tan_rates(0.1, 2.0);
        let flags = divisibility_flags(&rates, 1.0).unwrap();
        assert!(!flags.cp_divisible);
        assert!(!flags.p_divisible);
        assert!(!flags.cp_violation);
    }

    #[test]
    fn tanh_scenario_is_p_divisible_not_cp_divisible() {
        let rates = tanh_rates(1.0, 0.5);
        for &t in &[0.5, 2.0, 7.5] {
            let flags = divisibility_flags(&rates, t).unwrap();
            assert!(!flags.cp_divisible, "γ₃ < 0 at t = {t}");
            assert!(flags.p_divisible, "pairwise sums stay non-negative at t = {t}");
            assert!(!flags.cp_violation);
        }
    }

    #[test]
    fn constant_positive_rates_are_cp_divisible() {
        let rates = PauliRateSet::new(
            RateFunction::constant(0.2),
            RateFunction::constant(0.1),
            RateFunction::constant(0.3),
        );
        for &t in &[0.0, 1.0, 10.0] {
            let flags = divisibility_flags(&rates, t).unwrap();
            assert!(flags.cp_divisible && flags.p_divisible && !flags.cp_violation);
        }
    }
}
