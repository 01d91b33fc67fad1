//! Entropic observables and the Landauer extractable work.
//!
//! For a joint system–memory state the work extractable while erasing the
//! n-qubit system is W_ex = [n − H(S|Q)]·kT ln 2. With noise on the memory
//! this reads [n + I(S⟩Q_t)]; with noise on the system it can be recast as
//! [n − H(S_t) + I(S_t:Q)]. Both expressions reduce to n − H(S|Q) on the
//! same state, which the tests pin down. Work is kept dimensionless in
//! units of kT ln 2; a temperature converts it to joules on request.

use crate::channels::DivisibilityFlags;
use crate::error::{Error, Result};
use crate::linalg::{partial_trace, von_neumann_entropy, DensityMatrix, Subsystem, PAIR_DIM};

/// Boltzmann constant in J/K (exact SI).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// The six entropic quantities of a joint state, in bits.
#[derive(Debug, Clone, Copy)]
pub struct EntropicProfile {
    pub h_s: f64,
    pub h_q: f64,
    pub h_sq: f64,
    /// H(S|Q) = H(SQ) − H(Q).
    pub cond_entropy: f64,
    /// I(S⟩Q) = −H(S|Q).
    pub coherent_info: f64,
    /// I(S:Q) = H(S) + H(Q) − H(SQ).
    pub mutual_info: f64,
}

/// Entropies of the joint state and both reductions.
pub fn entropic_profile(rho_sq: &DensityMatrix) -> Result<EntropicProfile> {
    if rho_sq.dim() != PAIR_DIM {
        return Err(Error::InvalidArgument("entropic profile needs a 4x4 state".into()));
    }
    let h_sq = von_neumann_entropy(rho_sq);
    let h_s = von_neumann_entropy(&partial_trace(rho_sq, Subsystem::System)?);
    let h_q = von_neumann_entropy(&partial_trace(rho_sq, Subsystem::Memory)?);
    let cond_entropy = h_sq - h_q;
    Ok(EntropicProfile {
        h_s,
        h_q,
        h_sq,
        cond_entropy,
        coherent_info: -cond_entropy,
        mutual_info: h_s + h_q - h_sq,
    })
}

fn require_single_qubit(n: u32) -> Result<()> {
    if n != 1 {
        return Err(Error::Unsupported(format!(
            "only the single-qubit system (n = 1) is supported, got n = {n}"
        )));
    }
    Ok(())
}

/// W_ex/kT ln2 = n + I(S⟩Q_t) for noise acting on the memory.
pub fn work_memory_scenario(rho_sq: &DensityMatrix, n: u32) -> Result<f64> {
    require_single_qubit(n)?;
    let profile = entropic_profile(rho_sq)?;
    Ok(n as f64 + profile.coherent_info)
}

/// W_ex/kT ln2 = n − H(S_t) + I(S_t:Q) for noise acting on the system.
pub fn work_system_scenario(rho_sq: &DensityMatrix, n: u32) -> Result<f64> {
    require_single_qubit(n)?;
    let profile = entropic_profile(rho_sq)?;
    Ok(n as f64 - profile.h_s + profile.mutual_info)
}

/// Coherent information of a Pauli channel on half of the singlet,
/// analytically: I(S⟩Q_t) = 1 + Σ_α p_α log₂ p_α.
pub fn pauli_coherent_info_analytic(p: &[f64; 4]) -> Result<f64> {
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!("probabilities sum to {sum}, not 1")));
    }
    if let Some(&bad) = p.iter().find(|&&x| x < -1e-10) {
        return Err(Error::InvalidArgument(format!(
            "negative probability {bad:.3e}: CP violation must be handled upstream"
        )));
    }
    let info: f64 = p
        .iter()
        .map(|&x| if x > 0.0 { x * x.log2() } else { 0.0 })
        .sum();
    Ok(1.0 + info)
}

/// One time sample of a scenario run.
#[derive(Debug, Clone, Copy)]
pub struct WorkPoint {
    pub t: f64,
    pub h_s: f64,
    pub h_q: f64,
    pub h_sq: f64,
    pub cond_entropy: f64,
    pub coherent_info: f64,
    pub mutual_info: f64,
    /// Extractable work in units of kT ln 2.
    pub w_ex: f64,
    pub flags: Option<DivisibilityFlags>,
}

impl WorkPoint {
    pub fn new(t: f64, profile: EntropicProfile, w_ex: f64, flags: Option<DivisibilityFlags>) -> Self {
        WorkPoint {
            t,
            h_s: profile.h_s,
            h_q: profile.h_q,
            h_sq: profile.h_sq,
            cond_entropy: profile.cond_entropy,
            coherent_info: profile.coherent_info,
            mutual_info: profile.mutual_info,
            w_ex,
            flags,
        }
    }
}

/// Change of the extractable work between two ordered samples, with its
/// decomposition ΔW_ex = −ΔH(S_t) + ΔI(S_t:Q) (in kT ln 2 units).
#[derive(Debug, Clone, Copy)]
pub struct DeltaWork {
    pub delta_w_ex: f64,
    pub neg_delta_h_s: f64,
    pub delta_mutual_info: f64,
}

pub fn delta_work(w1: &WorkPoint, w2: &WorkPoint) -> Result<DeltaWork> {
    if w2.t < w1.t {
        return Err(Error::InvalidArgument(format!(
            "time ordering violated: t2 = {} < t1 = {}",
            w2.t, w1.t
        )));
    }
    Ok(DeltaWork {
        delta_w_ex: w2.w_ex - w1.w_ex,
        neg_delta_h_s: -(w2.h_s - w1.h_s),
        delta_mutual_info: w2.mutual_info - w1.mutual_info,
    })
}

/// Convert work in kT ln 2 units to joules at temperature `kelvin`.
pub fn work_in_joules(w_ex_kt_ln2: f64, kelvin: f64) -> f64 {
    w_ex_kt_ln2 * BOLTZMANN * kelvin * std::f64::consts::LN_2
}
