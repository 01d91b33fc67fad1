//! Dense complex-matrix algebra for one and two qubits.
//!
//! Everything downstream works with 2×2 single-qubit operators and 4×4
//! joint system–memory operators, so the matrix type is deliberately
//! restricted to those two dimensions. Eigenvalues come from cyclic
//! Jacobi rotations, which are foolproof at these sizes.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Basis ordering convention: |00⟩, |01⟩, |10⟩, |11⟩ with the system S the
/// left tensor factor, so the singlet |SQ⟩ = (|10⟩ − |01⟩)/√2 = (e₂ − e₁)/√2.
pub const QUBIT_DIM: usize = 2;
pub const PAIR_DIM: usize = 4;

/// Off-diagonal Frobenius norm below which Jacobi sweeps stop.
const JACOBI_OFFDIAG_TOL: f64 = 1e-14;
/// Hard cap on Jacobi sweeps (2–4 suffice at these dimensions).
const JACOBI_MAX_SWEEPS: usize = 100;
/// Hermiticity tolerance required by the eigen-solver.
const EIG_HERMITICITY_TOL: f64 = 1e-8;

/// Which qubit of a joint system–memory state an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    /// The left tensor factor S.
    System,
    /// The right tensor factor Q.
    Memory,
}

/// Square complex matrix of dimension 2 or 4, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// Zero matrix. Panics unless `dim` is 2 or 4.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim == QUBIT_DIM || dim == PAIR_DIM, "only dim 2 and 4 are supported");
        CMatrix { dim, data: vec![Complex64::ZERO; dim * dim] }
    }

    /// Identity matrix. Panics unless `dim` is 2 or 4.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn from_rows_2(rows: [[Complex64; 2]; 2]) -> Self {
        let mut m = Self::zeros(2);
        for (i, row) in rows.iter().enumerate() {
            for (j, &z) in row.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        m
    }

    pub fn from_rows_4(rows: [[Complex64; 4]; 4]) -> Self {
        let mut m = Self::zeros(4);
        for (i, row) in rows.iter().enumerate() {
            for (j, &z) in row.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        m
    }

    /// Outer product |ψ⟩⟨ψ| of an unnormalized state vector.
    pub fn outer(psi: &[Complex64]) -> Self {
        assert!(psi.len() == QUBIT_DIM || psi.len() == PAIR_DIM);
        let dim = psi.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = psi[i] * psi[j].conj();
            }
        }
        m
    }

    /// Pauli matrix σ_α for α ∈ {0, 1, 2, 3} (σ₀ = identity).
    pub fn pauli(alpha: usize) -> Self {
        let o = Complex64::ZERO;
        let l = Complex64::ONE;
        let i = Complex64::I;
        match alpha {
            0 => Self::identity(2),
            1 => Self::from_rows_2([[o, l], [l, o]]),
            2 => Self::from_rows_2([[o, -i], [i, o]]),
            3 => Self::from_rows_2([[l, o], [o, -l]]),
            _ => panic!("Pauli index must be 0..=3"),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for z in &mut out.data {
            *z *= s;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (z, w) in out.data.iter_mut().zip(&other.data) {
            *z += w;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (z, w) in out.data.iter_mut().zip(&other.data) {
            *z -= w;
        }
        out
    }

    /// Matrix product `self · other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        out
    }

    /// `K · self · K†` for channel terms.
    pub fn conjugate_by(&self, k: &Self) -> Self {
        k.matmul(self).matmul(&k.adjoint())
    }

    /// Largest |m[i][j] − conj(m[j][i])| over all entries.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let dev = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// Largest entry-wise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Kronecker product of two single-qubit operators; the first factor is the
/// system S, the second the memory Q.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.dim() != QUBIT_DIM || b.dim() != QUBIT_DIM {
        return Err(Error::InvalidArgument(format!(
            "tensor expects two 2x2 factors, got {}x{} and {}x{}",
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim()
        )));
    }
    let mut out = CMatrix::zeros(PAIR_DIM);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Validated quantum state: Hermitian, unit trace, positive semidefinite
/// within `tolerance`.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: CMatrix,
    tolerance: f64,
}

impl DensityMatrix {
    pub const DEFAULT_TOLERANCE: f64 = 1e-9;

    pub fn new(mat: CMatrix) -> Result<Self> {
        Self::with_tolerance(mat, Self::DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(mat: CMatrix, tolerance: f64) -> Result<Self> {
        if !mat.all_finite() {
            return Err(Error::InvalidState("matrix contains NaN or Inf".into()));
        }
        let herm = mat.hermiticity_deviation();
        if herm > tolerance {
            return Err(Error::NotHermitian { deviation: herm });
        }
        let tr = mat.trace();
        let tr_dev = (tr - Complex64::ONE).norm();
        if tr_dev > tolerance {
            return Err(Error::InvalidState(format!("trace deviates from 1 by {tr_dev:.3e}")));
        }
        let eigs = herm_eigvals(&mat)?;
        let min_eig = eigs[0];
        if min_eig < -tolerance {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(DensityMatrix { mat, tolerance })
    }

    /// Normalized pure state |ψ⟩⟨ψ|.
    pub fn from_pure(psi: &[Complex64]) -> Result<Self> {
        let norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq <= 0.0 || !norm_sq.is_finite() {
            return Err(Error::InvalidArgument("state vector has zero or non-finite norm".into()));
        }
        Self::new(CMatrix::outer(psi).scale(Complex64::new(1.0 / norm_sq, 0.0)))
    }

    /// The singlet |ψ⁻⟩ = (|10⟩ − |01⟩)/√2, the initial system–memory state
    /// of every scenario.
    pub fn singlet() -> Self {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::from_pure(&[Complex64::ZERO, -s, s, Complex64::ZERO])
            .expect("singlet is a valid state")
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let m = CMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0));
        DensityMatrix { mat: m, tolerance: Self::DEFAULT_TOLERANCE }
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Eigenvalues clamped to [0, 1]; round-off in [−tolerance, 0) maps to 0.
    pub fn spectrum(&self) -> Vec<f64> {
        herm_eigvals(&self.mat)
            .expect("validated state is Hermitian")
            .into_iter()
            .map(|x| x.clamp(0.0, 1.0))
            .collect()
    }
}

/// Reduced state of one qubit of a two-qubit state; the trace is preserved.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Result<DensityMatrix> {
    if rho.dim() != PAIR_DIM {
        return Err(Error::InvalidArgument(format!(
            "partial_trace expects a 4x4 state, got {}x{}",
            rho.dim(),
            rho.dim()
        )));
    }
    let m = rho.mat();
    let mut out = CMatrix::zeros(QUBIT_DIM);
    match keep {
        // index = 2s + q
        Subsystem::System => {
            for s in 0..2 {
                for sp in 0..2 {
                    out[(s, sp)] = m[(2 * s, 2 * sp)] + m[(2 * s + 1, 2 * sp + 1)];
                }
            }
        }
        Subsystem::Memory => {
            for q in 0..2 {
                for qp in 0..2 {
                    out[(q, qp)] = m[(q, qp)] + m[(2 + q, 2 + qp)];
                }
            }
        }
    }
    DensityMatrix::with_tolerance(out, rho.tolerance())
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// The input must be Hermitian within 1e-8; the solver diagonalizes the
/// Hermitized part (M + M†)/2 with cyclic complex Jacobi rotations until the
/// off-diagonal Frobenius norm drops below 1e-14 (at most 100 sweeps).
pub fn herm_eigvals(m: &CMatrix) -> Result<Vec<f64>> {
    let dev = m.hermiticity_deviation();
    if dev > EIG_HERMITICITY_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let n = m.dim();
    // Hermitize: h = (m + m†)/2.
    let mut h = m.add(&m.adjoint()).scale(Complex64::new(0.5, 0.0));

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += h[(i, j)].norm_sqr();
                }
            }
        }
        if off.sqrt() < JACOBI_OFFDIAG_TOL {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                jacobi_rotate(&mut h, p, q);
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| h[(i, i)].re).collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
    Ok(eigs)
}

/// One complex Jacobi rotation annihilating h[p][q].
///
/// The off-diagonal element is first made real by a phase, then removed by a
/// real plane rotation; both are combined into a single unitary U and applied
/// as h ← U† h U.
fn jacobi_rotate(h: &mut CMatrix, p: usize, q: usize) {
    let apq = h[(p, q)];
    let r = apq.norm();
    if r < 1e-300 {
        return;
    }
    let phase = apq / r; // e^{iθ}
    let app = h[(p, p)].re;
    let aqq = h[(q, q)].re;
    let tau = (aqq - app) / (2.0 * r);
    // Smaller-magnitude tangent root for stability.
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // U differs from the identity only in rows/columns p and q:
    //   U[p][p] = c              U[p][q] = s
    //   U[q][p] = −s·conj(phase) U[q][q] = c·conj(phase)
    let n = h.dim();
    let upp = Complex64::new(c, 0.0);
    let upq = Complex64::new(s, 0.0);
    let uqp = -s * phase.conj();
    let uqq = c * phase.conj();

    // h ← h · U (columns p, q change).
    for i in 0..n {
        let hip = h[(i, p)];
        let hiq = h[(i, q)];
        h[(i, p)] = hip * upp + hiq * uqp;
        h[(i, q)] = hip * upq + hiq * uqq;
    }
    // h ← U† · h (rows p, q change).
    for j in 0..n {
        let hpj = h[(p, j)];
        let hqj = h[(q, j)];
        h[(p, j)] = upp.conj() * hpj + uqp.conj() * hqj;
        h[(q, j)] = upq.conj() * hpj + uqq.conj() * hqj;
    }
    // Pin the annihilated pair against round-off drift.
    h[(p, q)] = Complex64::ZERO;
    h[(q, p)] = Complex64::ZERO;
}

/// Von Neumann entropy −Σ λ log₂ λ in bits, with 0·log₂ 0 = 0.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.spectrum()
        .iter()
        .filter(|&&lam| lam > 0.0)
        .map(|&lam| -lam * lam.log2())
        .sum()
}
