//! `nmwork verify`: every cross-module consistency property and oracle
//! cross-check, run with seeded randomness so the report is reproducible.

use std::io::{self, Write};

use nmwork_core::quad::adaptive_simpson;
use nmwork_core::{
    apply_pauli, apply_to_subsystem, coherent_info_from_echo, delta_work, divisibility_flags,
    entropic_profile, erf_complex, herm_eigvals, pauli_choi, pauli_coherent_info_analytic,
    pauli_snapshot, pbg_coefficients, pbg_entropies, tensor, von_neumann_entropy,
    work_memory_scenario, work_system_scenario, CMatrix, Complex64, DensityMatrix, IsingModel,
    IsingParams, PauliRateSet, PauliSnapshot, PbgModel, PbgParams, RateFunction, Subsystem,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::scenario::{self, Preset};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub max_deviation: f64,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &'static str, max_deviation: f64) -> Self {
        CheckResult { name, passed: true, max_deviation, detail: String::new() }
    }

    fn fail(name: &'static str, max_deviation: f64, detail: impl Into<String>) -> Self {
        CheckResult { name, passed: false, max_deviation, detail: detail.into() }
    }

    fn from_deviation(name: &'static str, max_deviation: f64, tol: f64) -> Self {
        if max_deviation <= tol {
            Self::pass(name, max_deviation)
        } else {
            Self::fail(name, max_deviation, format!("deviation exceeds tolerance {tol:.1e}"))
        }
    }
}

/// Print one line per check; returns true iff everything passed.
pub fn report<W: Write>(out: &mut W, results: &[CheckResult]) -> io::Result<bool> {
    let mut all = true;
    for r in results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        all &= r.passed;
        write!(out, "{status}\t{}\tmax_deviation={:.3e}", r.name, r.max_deviation)?;
        if !r.detail.is_empty() {
            write!(out, "\t{}", r.detail)?;
        }
        writeln!(out)?;
    }
    writeln!(out, "{}\t{} checks", if all { "OK" } else { "FAILED" }, results.len())?;
    Ok(all)
}

pub fn run_all() -> Vec<CheckResult> {
    vec![
        entropy_unitary_invariance(),
        partial_trace_tensor_roundtrip(),
        eigenvalue_sum_and_quadratic(),
        erf_symmetries(),
        erf_real_axis_reference(),
        erf_derivative(),
        pauli_cptp_sweep(),
        pauli_unitality(),
        rate_integral_crosscheck(),
        cp_implies_p(),
        ising_echo_range(),
        ising_dephasing_consistency(),
        ising_info_monotone_in_echo(),
        ising_uncoupled_work(),
        pbg_normalization_and_bound(),
        pbg_corrupted_coefficients_detected(),
        pbg_phase_invariance(),
        pbg_entropy_oracle(),
        pbg_continuity(),
        pbg_work_range(),
        scenario_equivalence(),
        unital_symmetry(),
        data_processing_monotonicity(),
        pauli_analytic_vs_eigen(),
        tanh_work_monotone(),
        tan_work_revival(),
        workpoint_row_invariants(),
        csv_determinism(),
        parallel_matches_serial(),
    ]
}

// ---------------------------------------------------------------- helpers

fn rng_for(salt: u64) -> StdRng {
    StdRng::seed_from_u64(0x6e6d_776f_726b ^ salt)
}

fn random_complex(rng: &mut StdRng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn random_unit_vector(dim: usize, rng: &mut StdRng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| random_complex(rng)).collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Random unitary by Gram–Schmidt on random complex columns.
fn random_unitary(dim: usize, rng: &mut StdRng) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v = random_unit_vector(dim, rng);
        for c in &cols {
            let overlap: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= overlap * ci;
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        for z in &mut v {
            *z /= norm;
        }
        cols.push(v);
    }
    let mut u = CMatrix::zeros(dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            u[(i, j)] = z;
        }
    }
    u
}

/// Random full-rank mixed state: weighted mixture of `dim` random pure states.
fn random_density(dim: usize, rng: &mut StdRng) -> DensityMatrix {
    let mut mat = CMatrix::zeros(dim);
    let weights: Vec<f64> = (0..dim).map(|_| -rng.random_range(1e-6..1.0f64).ln()).collect();
    let total: f64 = weights.iter().sum();
    for w in &weights {
        let psi = random_unit_vector(dim, rng);
        mat = mat.add(&CMatrix::outer(&psi).scale(Complex64::new(w / total, 0.0)));
    }
    DensityMatrix::new(mat).expect("mixture of pure states is a valid state")
}

/// Random legitimate Pauli snapshot (probabilities on the simplex).
fn random_snapshot(rng: &mut StdRng) -> PauliSnapshot {
    let raw: Vec<f64> = (0..4).map(|_| -rng.random_range(1e-9..1.0f64).ln()).collect();
    let total: f64 = raw.iter().sum();
    let p = [raw[0] / total, raw[1] / total, raw[2] / total, raw[3] / total];
    PauliSnapshot::from_probabilities(rng.random_range(0.0..10.0), p)
        .expect("normalized probabilities")
}

/// Evolve the singlet by the snapshot's channel acting on `target`.
fn evolve_singlet(snap: &PauliSnapshot, target: Subsystem) -> DensityMatrix {
    let kraus: Vec<CMatrix> = snap
        .p
        .iter()
        .enumerate()
        .map(|(a, &p)| CMatrix::pauli(a).scale(Complex64::new(p.max(0.0).sqrt(), 0.0)))
        .collect();
    apply_to_subsystem(&kraus, &DensityMatrix::singlet(), target)
        .expect("legitimate snapshot evolves to a valid state")
}

fn fig2a_rates() -> PauliRateSet {
    PauliRateSet::new(
        RateFunction::constant(0.05),
        RateFunction::constant(0.05),
        RateFunction::tan(2.0).expect("omega > 0"),
    )
}

fn fig2b_rates() -> PauliRateSet {
    PauliRateSet::new(
        RateFunction::constant(0.5),
        RateFunction::constant(0.5),
        RateFunction::tanh(0.5).expect("omega > 0"),
    )
}

// ----------------------------------------------------------------- linalg

fn entropy_unitary_invariance() -> CheckResult {
    let mut rng = rng_for(1);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        for dim in [2, 4] {
            let rho = random_density(dim, &mut rng);
            let u = random_unitary(dim, &mut rng);
            let rotated = DensityMatrix::new(rho.mat().conjugate_by(&u))
                .expect("unitary conjugation preserves validity");
            let dev = (von_neumann_entropy(&rotated) - von_neumann_entropy(&rho)).abs();
            worst = worst.max(dev);
        }
    }
    CheckResult::from_deviation("linalg.entropy_unitary_invariance", worst, 1e-9)
}

fn partial_trace_tensor_roundtrip() -> CheckResult {
    let mut rng = rng_for(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a = random_density(2, &mut rng);
        let b = random_density(2, &mut rng);
        let joint = DensityMatrix::new(tensor(a.mat(), b.mat()).expect("2x2 factors"))
            .expect("product state");
        let red = nmwork_core::partial_trace(&joint, Subsystem::System).expect("4x4 state");
        worst = worst.max(red.mat().max_abs_diff(a.mat()));
    }
    CheckResult::from_deviation("linalg.partial_trace_tensor_roundtrip", worst, 1e-12)
}

fn eigenvalue_sum_and_quadratic() -> CheckResult {
    let mut rng = rng_for(3);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        // Random 4x4 Hermitian.
        let mut h = CMatrix::zeros(4);
        for i in 0..4 {
            h[(i, i)] = Complex64::new(rng.random_range(-2.0..2.0), 0.0);
            for j in i + 1..4 {
                let z = random_complex(&mut rng);
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
        }
        let eigs = herm_eigvals(&h).expect("hermitian");
        let sum: f64 = eigs.iter().sum();
        worst = worst.max((sum - h.trace().re).abs());

        // 2x2 closed quadratic formula.
        let a = rng.random_range(-2.0..2.0);
        let d = rng.random_range(-2.0..2.0);
        let b = random_complex(&mut rng);
        let m = CMatrix::from_rows_2([
            [Complex64::new(a, 0.0), b],
            [b.conj(), Complex64::new(d, 0.0)],
        ]);
        let eigs2 = herm_eigvals(&m).expect("hermitian");
        let mean = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        worst = worst.max((eigs2[0] - (mean - disc)).abs().max((eigs2[1] - (mean + disc)).abs()));
    }
    CheckResult::from_deviation("linalg.eig_sum_trace_and_quadratic", worst, 1e-10)
}

// ---------------------------------------------------------------- specfun

fn erf_symmetries() -> CheckResult {
    let mut rng = rng_for(4);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let z = Complex64::new(rng.random_range(-8.0..8.0), rng.random_range(-8.0..8.0));
        if z.norm() > 8.0 {
            continue;
        }
        let f = erf_complex(z).expect("in range");
        let odd = erf_complex(-z).expect("in range");
        let conj = erf_complex(z.conj()).expect("in range");
        let scale = f.norm().max(1e-30);
        worst = worst.max((odd + f).norm() / scale);
        worst = worst.max((conj - f.conj()).norm() / scale);
    }
    CheckResult::from_deviation("specfun.erf_symmetries", worst, 1e-12)
}

fn erf_real_axis_reference() -> CheckResult {
    // Independent oracle: erf(x) = (2/√π) ∫₀ˣ e^{−s²} ds by quadrature.
    let mut worst = 0.0f64;
    for i in 0..=30 {
        let x = 6.0 * i as f64 / 30.0;
        let reference =
            2.0 / std::f64::consts::PI.sqrt() * adaptive_simpson(|s| (-s * s).exp(), 0.0, x, 1e-14);
        let v = erf_complex(Complex64::new(x, 0.0)).expect("in range").re;
        worst = worst.max((v - reference).abs() / reference.abs().max(1e-30));
    }
    CheckResult::from_deviation("specfun.erf_real_axis_reference", worst, 1e-12)
}

fn erf_derivative() -> CheckResult {
    let mut rng = rng_for(5);
    let mut worst = 0.0f64;
    let h = 1e-5;
    for _ in 0..20 {
        let z = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let plus = erf_complex(z + Complex64::new(h, 0.0)).expect("in range");
        let minus = erf_complex(z - Complex64::new(h, 0.0)).expect("in range");
        let numeric = (plus - minus) / (2.0 * h);
        let analytic = (-z * z).exp() * (2.0 / std::f64::consts::PI.sqrt());
        worst = worst.max((numeric - analytic).norm() / analytic.norm().max(1e-30));
    }
    CheckResult::from_deviation("specfun.erf_derivative", worst, 1e-6)
}

// --------------------------------------------------------------- channels

fn pauli_cptp_sweep() -> CheckResult {
    let mut worst_sum = 0.0f64;
    let mut worst_eig = 0.0f64;
    for (rates, t_max) in [(fig2a_rates(), 5.0), (fig2b_rates(), 10.0)] {
        for i in 0..200 {
            let t = i as f64 * t_max / 199.0;
            let snap = pauli_snapshot(&rates, t).expect("snapshot");
            let sum: f64 = snap.p.iter().sum();
            worst_sum = worst_sum.max((sum - 1.0).abs());
            let eigs = herm_eigvals(&pauli_choi(&snap)).expect("hermitian Choi");
            worst_eig = worst_eig.max(-eigs[0]);
        }
    }
    if worst_sum <= 1e-12 && worst_eig <= 1e-10 {
        CheckResult::pass("channels.fig2_cptp_sweep", worst_sum.max(worst_eig))
    } else {
        CheckResult::fail(
            "channels.fig2_cptp_sweep",
            worst_sum.max(worst_eig),
            format!("sum deviation {worst_sum:.3e}, min Choi eigenvalue deficit {worst_eig:.3e}"),
        )
    }
}

fn pauli_unitality() -> CheckResult {
    let mut rng = rng_for(6);
    let half = CMatrix::identity(2).scale(Complex64::new(0.5, 0.0));
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let snap = random_snapshot(&mut rng);
        let out = apply_pauli(&snap, &DensityMatrix::maximally_mixed(2)).expect("valid");
        worst = worst.max(out.mat().max_abs_diff(&half));
    }
    CheckResult::from_deviation("channels.unitality", worst, 1e-12)
}

fn rate_integral_crosscheck() -> CheckResult {
    let mut rng = rng_for(7);
    let mut worst = 0.0f64;
    for i in 0..50 {
        let (rate, t_cap) = match i % 3 {
            0 => (RateFunction::constant(rng.random_range(0.0..2.0)), 10.0),
            1 => {
                let omega = rng.random_range(0.5..3.0);
                // Stay clear of the pole.
                let cap = 0.9 * std::f64::consts::FRAC_PI_2 / omega;
                (RateFunction::tan(omega).expect("omega > 0"), cap)
            }
            _ => (RateFunction::tanh(rng.random_range(0.2..2.0)).expect("omega > 0"), 10.0),
        };
        let t = rng.random_range(0.01..t_cap);
        let closed = rate.gamma_integral(t).expect("closed form");
        let quad = rate.clone().without_closed_form().gamma_integral(t).expect("quadrature");
        worst = worst.max((closed - quad).abs());
    }
    CheckResult::from_deviation("channels.integral_closed_vs_quadrature", worst, 1e-9)
}

fn cp_implies_p() -> CheckResult {
    let mut rng = rng_for(8);
    let mut violations = 0u32;
    let mut samples = 0u32;
    for _ in 0..20 {
        let rates = PauliRateSet::new(
            RateFunction::constant(rng.random_range(-0.5..1.0)),
            RateFunction::constant(rng.random_range(-0.5..1.0)),
            RateFunction::constant(rng.random_range(-0.5..1.0)),
        );
        for i in 0..10 {
            let flags = divisibility_flags(&rates, i as f64).expect("flags");
            samples += 1;
            if flags.cp_divisible && !flags.p_divisible {
                violations += 1;
            }
        }
    }
    for i in 0..200 {
        let flags = divisibility_flags(&fig2a_rates(), i as f64 * 5.0 / 199.0).expect("flags");
        samples += 1;
        if flags.cp_divisible && !flags.p_divisible {
            violations += 1;
        }
    }
    if violations == 0 {
        CheckResult::pass("channels.cp_implies_p", 0.0)
    } else {
        CheckResult::fail(
            "channels.cp_implies_p",
            violations as f64,
            format!("{violations}/{samples} samples violate the implication"),
        )
    }
}

// ------------------------------------------------------------------ ising

fn fig3_model(field: f64) -> IsingModel {
    IsingModel::new(IsingParams { exchange: 1.0, field, coupling: 0.1, spins: 4000 })
        .expect("valid parameters")
}

fn ising_echo_range() -> CheckResult {
    let mut worst = 0.0f64;
    for field in [0.9, 0.0, 1.8] {
        let model = fig3_model(field);
        if (model.loschmidt_echo(0.0) - 1.0).abs() > 0.0 {
            return CheckResult::fail("ising.echo_range", 1.0, "L(0) must be exactly 1");
        }
        for i in 0..500 {
            let l = model.loschmidt_echo(0.02 * i as f64);
            worst = worst.max((-l).max(l - 1.0));
        }
    }
    CheckResult::from_deviation("ising.echo_range", worst.max(0.0), 0.0)
}

fn ising_dephasing_consistency() -> CheckResult {
    let model = fig3_model(0.9);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let t = 0.1 + i as f64 * 9.9 / 99.0;
        let from_echo = model.coherent_info(t);
        let snap = model.snapshot(t);
        let analytic = pauli_coherent_info_analytic(&snap.p).expect("p on simplex");
        let eigen = entropic_profile(&evolve_singlet(&snap, Subsystem::Memory))
            .expect("4x4")
            .coherent_info;
        worst = worst.max((from_echo - analytic).abs()).max((from_echo - eigen).abs());
        // λ₁ = λ₂ = √L with λ₃ = 1 is the dephasing embedding itself.
        let root = model.loschmidt_echo(t).sqrt();
        worst = worst.max((snap.lambda[0] - root).abs().max((snap.lambda[2] - 1.0).abs()));
    }
    CheckResult::from_deviation("ising.dephasing_as_pauli_consistency", worst, 1e-9)
}

fn ising_info_monotone_in_echo() -> CheckResult {
    let mut worst = 0.0f64;
    let mut prev = coherent_info_from_echo(0.0);
    for i in 1..=2000 {
        let l = i as f64 / 2000.0;
        let v = coherent_info_from_echo(l);
        worst = worst.max(prev - v);
        prev = v;
    }
    CheckResult::from_deviation("ising.info_monotone_in_echo", worst.max(0.0), 1e-12)
}

fn ising_uncoupled_work() -> CheckResult {
    let model = IsingModel::new(IsingParams {
        exchange: 1.0,
        field: 0.9,
        coupling: 0.0,
        spins: 4000,
    })
    .expect("valid parameters");
    let mut worst = 0.0f64;
    for i in 0..100 {
        let t = 0.1 * i as f64;
        let w = work_memory_scenario(&evolve_singlet(&model.snapshot(t), Subsystem::Memory), 1)
            .expect("valid state");
        worst = worst.max((w - 2.0).abs());
    }
    CheckResult::from_deviation("ising.uncoupled_work_is_two", worst, 1e-12)
}

// -------------------------------------------------------------------- pbg

const PBG_FIG4: PbgParams = PbgParams { beta: 1.0, detuning: -1.0 };

fn pbg_normalization_and_bound() -> CheckResult {
    let model = match PbgModel::new(PBG_FIG4) {
        Ok(m) => m,
        Err(e) => return CheckResult::fail("pbg.g0_and_bound", f64::NAN, e.to_string()),
    };
    let g0_dev = (model.g(0.0).expect("t = 0") - Complex64::ONE).norm();
    let mut worst_mag = 0.0f64;
    for i in 0..=1000 {
        let t = 10.0 * i as f64 / 1000.0;
        match model.g(t) {
            Ok(g) => worst_mag = worst_mag.max(g.norm() - 1.0),
            Err(e) => return CheckResult::fail("pbg.g0_and_bound", f64::NAN, e.to_string()),
        }
    }
    if g0_dev <= 1e-6 && worst_mag <= 1e-6 {
        CheckResult::pass("pbg.g0_and_bound", g0_dev.max(worst_mag))
    } else {
        CheckResult::fail(
            "pbg.g0_and_bound",
            g0_dev.max(worst_mag),
            format!("|G(0)−1| = {g0_dev:.3e}, max(|G|−1) = {worst_mag:.3e}"),
        )
    }
}

fn pbg_corrupted_coefficients_detected() -> CheckResult {
    let mut coeffs = pbg_coefficients(&PBG_FIG4).expect("valid parameters");
    for a in &mut coeffs.a {
        *a *= 2.0;
    }
    match PbgModel::with_coefficients(PBG_FIG4, coeffs) {
        Err(nmwork_core::Error::ModelViolation(_)) => {
            CheckResult::pass("pbg.corrupted_a_detected", 0.0)
        }
        Err(e) => CheckResult::fail(
            "pbg.corrupted_a_detected",
            f64::NAN,
            format!("wrong error kind: {e}"),
        ),
        Ok(_) => CheckResult::fail(
            "pbg.corrupted_a_detected",
            f64::NAN,
            "corrupted coefficients were accepted",
        ),
    }
}

fn evolve_amplitude_damping(g: Complex64, target: Subsystem) -> DensityMatrix {
    let pair = nmwork_core::amplitude_damping_kraus(g).expect("|g| <= 1");
    apply_to_subsystem(&[pair.k1, pair.k2], &DensityMatrix::singlet(), target)
        .expect("valid state")
}

fn pbg_phase_invariance() -> CheckResult {
    let mut rng = rng_for(9);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let mag = rng.random_range(0.0..1.0);
        let phi = rng.random_range(0.0..std::f64::consts::TAU);
        let plain = entropic_profile(&evolve_amplitude_damping(
            Complex64::new(mag, 0.0),
            Subsystem::System,
        ))
        .expect("4x4");
        let rotated = entropic_profile(&evolve_amplitude_damping(
            Complex64::from_polar(mag, phi),
            Subsystem::System,
        ))
        .expect("4x4");
        worst = worst
            .max((plain.h_s - rotated.h_s).abs())
            .max((plain.h_q - rotated.h_q).abs())
            .max((plain.h_sq - rotated.h_sq).abs());
    }
    CheckResult::from_deviation("pbg.entropy_phase_invariance", worst, 1e-12)
}

fn pbg_entropy_oracle() -> CheckResult {
    let mut rng = rng_for(10);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let mag = rng.random_range(0.0..1.0);
        let (h_s, h_q, h_sq) = pbg_entropies(mag).expect("in range");
        let profile = entropic_profile(&evolve_amplitude_damping(
            Complex64::from_polar(mag, rng.random_range(0.0..std::f64::consts::TAU)),
            Subsystem::System,
        ))
        .expect("4x4");
        worst = worst
            .max((h_s - profile.h_s).abs())
            .max((h_q - profile.h_q).abs())
            .max((h_sq - profile.h_sq).abs());
    }
    CheckResult::from_deviation("pbg.entropy_analytic_vs_eigen", worst, 1e-9)
}

fn pbg_continuity() -> CheckResult {
    let model = PbgModel::new(PBG_FIG4).expect("valid parameters");
    let h = 1e-4;
    // |dG/dt| is a few units at most here; C = 50 bounds it comfortably
    // while still catching any branch jump (which would be O(1) across h).
    let c = 50.0;
    let mut worst = 0.0f64;
    let mut prev = model.g(0.0).expect("t = 0");
    for i in 1..=5000 {
        let g = model.g(h * i as f64).expect("in range");
        worst = worst.max((g - prev).norm() / h);
        prev = g;
    }
    CheckResult::from_deviation("pbg.continuity", worst, c)
}

fn pbg_work_range() -> CheckResult {
    let model = PbgModel::new(PBG_FIG4).expect("valid parameters");
    let mut worst_range = 0.0f64;
    let mut worst_dev = 0.0f64;
    for i in 0..=500 {
        let t = 10.0 * i as f64 / 500.0;
        let g = model.g(t).expect("in range");
        let (h_s, h_q, h_sq) = pbg_entropies(g.norm().min(1.0)).expect("in range");
        let w_analytic = 1.0 - h_s + (h_s + h_q - h_sq);
        worst_range = worst_range.max((-w_analytic).max(w_analytic - 2.0));
        let w_eigen =
            work_system_scenario(&evolve_amplitude_damping(g, Subsystem::System), 1)
                .expect("valid state");
        worst_dev = worst_dev.max((w_analytic - w_eigen).abs());
    }
    if worst_range <= 1e-12 && worst_dev <= 1e-9 {
        CheckResult::pass("pbg.work_range_and_route", worst_dev)
    } else {
        CheckResult::fail(
            "pbg.work_range_and_route",
            worst_range.max(worst_dev),
            format!("range excess {worst_range:.3e}, route deviation {worst_dev:.3e}"),
        )
    }
}

// ----------------------------------------------------------------- thermo

fn scenario_equivalence() -> CheckResult {
    let mut rng = rng_for(11);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let rho = random_density(4, &mut rng);
        let mem = work_memory_scenario(&rho, 1).expect("valid state");
        let sys = work_system_scenario(&rho, 1).expect("valid state");
        worst = worst.max((mem - sys).abs());
    }
    CheckResult::from_deviation("thermo.scenario_equivalence", worst, 1e-12)
}

fn unital_symmetry() -> CheckResult {
    let mut rng = rng_for(12);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let snap = random_snapshot(&mut rng);
        let on_s = entropic_profile(&evolve_singlet(&snap, Subsystem::System)).expect("4x4");
        let on_q = entropic_profile(&evolve_singlet(&snap, Subsystem::Memory)).expect("4x4");
        for (a, b) in [
            (on_s.h_s, on_q.h_s),
            (on_s.h_q, on_q.h_q),
            (on_s.h_sq, on_q.h_sq),
            (on_s.cond_entropy, on_q.cond_entropy),
            (on_s.coherent_info, on_q.coherent_info),
            (on_s.mutual_info, on_q.mutual_info),
        ] {
            worst = worst.max((a - b).abs());
        }
    }
    CheckResult::from_deviation("thermo.unital_symmetry", worst, 1e-9)
}

fn data_processing_monotonicity() -> CheckResult {
    let rates = PauliRateSet::new(
        RateFunction::constant(0.15),
        RateFunction::constant(0.1),
        RateFunction::constant(0.25),
    );
    let mut worst = 0.0f64;
    let mut prev = f64::INFINITY;
    for i in 0..200 {
        let t = i as f64 * 10.0 / 199.0;
        let snap = pauli_snapshot(&rates, t).expect("snapshot");
        let info = entropic_profile(&evolve_singlet(&snap, Subsystem::Memory))
            .expect("4x4")
            .coherent_info;
        worst = worst.max(info - prev);
        prev = info;
    }
    CheckResult::from_deviation("thermo.data_processing_monotonicity", worst.max(0.0), 1e-9)
}

fn pauli_analytic_vs_eigen() -> CheckResult {
    let mut rng = rng_for(13);
    let mut worst = 0.0f64;
    for (rates, t_max) in [(fig2a_rates(), 5.0), (fig2b_rates(), 10.0)] {
        for _ in 0..100 {
            let t = rng.random_range(0.0..t_max);
            let snap = pauli_snapshot(&rates, t).expect("snapshot");
            let analytic = pauli_coherent_info_analytic(&snap.p).expect("CPTP here");
            let eigen = entropic_profile(&evolve_singlet(&snap, Subsystem::Memory))
                .expect("4x4")
                .coherent_info;
            worst = worst.max((analytic - eigen).abs());
        }
    }
    CheckResult::from_deviation("thermo.pauli_analytic_vs_eigen", worst, 1e-9)
}

fn tanh_work_monotone() -> CheckResult {
    let run = scenario::run_preset(Preset::Fig2b).expect("preset runs");
    let mut worst = f64::NEG_INFINITY;
    // ΔW_ex over every ordered pair: the running minimum is the worst t₁.
    let mut min_point = run.rows[0].point;
    for row in &run.rows {
        let d = delta_work(&min_point, &row.point).expect("rows are time-ordered");
        worst = worst.max(d.delta_w_ex);
        if row.point.w_ex < min_point.w_ex {
            min_point = row.point;
        }
    }
    CheckResult::from_deviation("thermo.tanh_work_monotone", worst.max(0.0), 1e-9)
}

fn tan_work_revival() -> CheckResult {
    let run = scenario::run_preset(Preset::Fig2a).expect("preset runs");
    let mut best = f64::NEG_INFINITY;
    let mut min_point = run.rows[0].point;
    for row in &run.rows {
        let d = delta_work(&min_point, &row.point).expect("rows are time-ordered");
        best = best.max(d.delta_w_ex);
        if row.point.w_ex < min_point.w_ex {
            min_point = row.point;
        }
    }
    if best > 0.01 {
        CheckResult::pass("thermo.tan_work_revival", best)
    } else {
        CheckResult::fail("thermo.tan_work_revival", best, "no revival above 0.01 found")
    }
}

fn workpoint_row_invariants() -> CheckResult {
    let mut worst = 0.0f64;
    for preset in Preset::ALL {
        let run = scenario::run_preset(preset).expect("preset runs");
        let mut prev: Option<nmwork_core::WorkPoint> = None;
        for row in &run.rows {
            let p = &row.point;
            worst = worst
                .max((p.mutual_info - (p.h_s + p.h_q - p.h_sq)).abs())
                .max((p.coherent_info + p.cond_entropy).abs())
                .max((-p.mutual_info).max(p.mutual_info - 2.0).max(0.0))
                .max((-1.0 - p.coherent_info).max(p.coherent_info - 1.0).max(0.0))
                .max((-p.w_ex).max(p.w_ex - 2.0).max(0.0));
            if let Some(q) = prev {
                // ΔW decomposition: ΔW_ex = −ΔH_S + ΔI(S:Q).
                let d = delta_work(&q, p).expect("rows are time-ordered");
                worst =
                    worst.max((d.delta_w_ex - (d.neg_delta_h_s + d.delta_mutual_info)).abs());
            }
            prev = Some(*p);
        }
    }
    CheckResult::from_deviation("thermo.workpoint_row_invariants", worst, 1e-12)
}

// -------------------------------------------------------------------- cli

fn csv_determinism() -> CheckResult {
    let a = scenario::csv_string(&scenario::run_preset(Preset::Fig2a).expect("preset runs"));
    let b = scenario::csv_string(&scenario::run_preset(Preset::Fig2a).expect("preset runs"));
    if a == b {
        CheckResult::pass("cli.csv_determinism", 0.0)
    } else {
        CheckResult::fail("cli.csv_determinism", f64::NAN, "repeated runs differ")
    }
}

fn parallel_matches_serial() -> CheckResult {
    let config = Preset::Fig4.config();
    let par = scenario::csv_string(&scenario::run_scenario(&config).expect("runs"));
    let ser = scenario::csv_string(&scenario::run_scenario_serial(&config).expect("runs"));
    if par == ser {
        CheckResult::pass("cli.parallel_matches_serial", 0.0)
    } else {
        CheckResult::fail("cli.parallel_matches_serial", f64::NAN, "parallel and serial differ")
    }
}
