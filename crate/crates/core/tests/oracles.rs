//! Oracle cross-checks: every closed-form quantity is compared against the
//! 4×4 eigendecomposition pipeline on the evolved joint state, and the
//! figure scenarios are validated for complete positivity along the way.

use nmwork_core::{
    amplitude_damping_kraus, apply_to_subsystem, entropic_profile, herm_eigvals, pauli_choi,
    pauli_coherent_info_analytic, pauli_snapshot, pbg_entropies, CMatrix, Complex64,
    DensityMatrix, IsingModel, IsingParams, PauliRateSet, PauliSnapshot, RateFunction, Subsystem,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn tan_rates() -> PauliRateSet {
    PauliRateSet::new(
        RateFunction::constant(0.05),
        RateFunction::constant(0.05),
        RateFunction::tan(2.0).unwrap(),
    )
}

fn tanh_rates() -> PauliRateSet {
    PauliRateSet::new(
        RateFunction::constant(0.5),
        RateFunction::constant(0.5),
        RateFunction::tanh(0.5).unwrap(),
    )
}

fn evolve_singlet(snap: &PauliSnapshot, target: Subsystem) -> DensityMatrix {
    let kraus: Vec<CMatrix> = snap
        .p
        .iter()
        .enumerate()
        .map(|(a, &p)| CMatrix::pauli(a).scale(Complex64::new(p.max(0.0).sqrt(), 0.0)))
        .collect();
    apply_to_subsystem(&kraus, &DensityMatrix::singlet(), target).unwrap()
}

#[test]
fn pauli_analytic_coherent_info_matches_eigen_pipeline() {
    let mut rng = StdRng::seed_from_u64(11);
    for (rates, t_max) in [(tan_rates(), 5.0), (tanh_rates(), 10.0)] {
        for _ in 0..100 {
            let t = rng.random_range(0.0..t_max);
            let snap = pauli_snapshot(&rates, t).unwrap();
            let analytic = pauli_coherent_info_analytic(&snap.p).unwrap();
            let eigen = entropic_profile(&evolve_singlet(&snap, Subsystem::Memory))
                .unwrap()
                .coherent_info;
            assert!(
                (analytic - eigen).abs() < 1e-9,
                "t = {t}: analytic {analytic} vs eigen {eigen}"
            );
        }
    }
}

#[test]
fn fig2_scenarios_stay_cptp() {
    for (rates, t_max) in [(tan_rates(), 5.0), (tanh_rates(), 10.0)] {
        for i in 0..200 {
            let t = i as f64 * t_max / 199.0;
            let snap = pauli_snapshot(&rates, t).unwrap();
            let sum: f64 = snap.p.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12, "Σp at t = {t}");
            let eigs = herm_eigvals(&pauli_choi(&snap)).unwrap();
            assert!(eigs[0] > -1e-10, "min Choi eigenvalue {} at t = {t}", eigs[0]);
        }
    }
}

#[test]
fn unital_noise_on_system_equals_noise_on_memory() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..100 {
        let raw: Vec<f64> = (0..4).map(|_| -rng.random_range(1e-9..1.0f64).ln()).collect();
        let total: f64 = raw.iter().sum();
        let p = [raw[0] / total, raw[1] / total, raw[2] / total, raw[3] / total];
        let snap = PauliSnapshot::from_probabilities(rng.random_range(0.0..5.0), p).unwrap();
        let on_s = entropic_profile(&evolve_singlet(&snap, Subsystem::System)).unwrap();
        let on_q = entropic_profile(&evolve_singlet(&snap, Subsystem::Memory)).unwrap();
        for (a, b) in [
            (on_s.h_s, on_q.h_s),
            (on_s.h_q, on_q.h_q),
            (on_s.h_sq, on_q.h_sq),
            (on_s.cond_entropy, on_q.cond_entropy),
            (on_s.coherent_info, on_q.coherent_info),
            (on_s.mutual_info, on_q.mutual_info),
        ] {
            assert!((a - b).abs() < 1e-9);
        }
    }
}

#[test]
fn divisible_channel_has_monotone_coherent_info() {
    let rates = PauliRateSet::new(
        RateFunction::constant(0.15),
        RateFunction::constant(0.1),
        RateFunction::constant(0.25),
    );
    let mut prev = f64::INFINITY;
    for i in 0..200 {
        let t = i as f64 * 10.0 / 199.0;
        let snap = pauli_snapshot(&rates, t).unwrap();
        let info = entropic_profile(&evolve_singlet(&snap, Subsystem::Memory))
            .unwrap()
            .coherent_info;
        assert!(info <= prev + 1e-9, "coherent info rose at t = {t}");
        prev = info;
    }
}

#[test]
fn ising_coherent_info_matches_channel_route() {
    let model = IsingModel::new(IsingParams {
        exchange: 1.0,
        field: 0.9,
        coupling: 0.1,
        spins: 4000,
    })
    .unwrap();
    for i in 0..100 {
        let t = 0.1 + i as f64 * 9.9 / 99.0;
        let from_echo = model.coherent_info(t);
        let snap = model.snapshot(t);
        // λ₁ = λ₂ = √L, λ₃ = 1 is the dephasing embedding.
        let root = model.loschmidt_echo(t).sqrt();
        assert!((snap.lambda[0] - root).abs() < 1e-12);
        assert!((snap.lambda[1] - root).abs() < 1e-12);
        assert!((snap.lambda[2] - 1.0).abs() < 1e-12);
        let analytic = pauli_coherent_info_analytic(&snap.p).unwrap();
        let eigen = entropic_profile(&evolve_singlet(&snap, Subsystem::Memory))
            .unwrap()
            .coherent_info;
        assert!((from_echo - analytic).abs() < 1e-9, "t = {t}");
        assert!((from_echo - eigen).abs() < 1e-9, "t = {t}");
    }
}

#[test]
fn ising_echo_grid_is_fast() {
    let model = IsingModel::new(IsingParams {
        exchange: 1.0,
        field: 0.9,
        coupling: 0.1,
        spins: 4000,
    })
    .unwrap();
    let start = std::time::Instant::now();
    let mut acc = 0.0;
    for i in 0..1000 {
        acc += model.loschmidt_echo(i as f64 * 0.01);
    }
    assert!(acc.is_finite());
    assert!(
        start.elapsed().as_secs_f64() < 1.0,
        "1000 echo evaluations took {:?}",
        start.elapsed()
    );
}

#[test]
fn pbg_analytic_entropies_match_eigen_pipeline() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..100 {
        let mag = rng.random_range(0.0..1.0);
        let phase = rng.random_range(0.0..std::f64::consts::TAU);
        let g = Complex64::from_polar(mag, phase);
        let pair = amplitude_damping_kraus(g).unwrap();
        let joint =
            apply_to_subsystem(&[pair.k1, pair.k2], &DensityMatrix::singlet(), Subsystem::System)
                .unwrap();
        let profile = entropic_profile(&joint).unwrap();
        let (h_s, h_q, h_sq) = pbg_entropies(mag).unwrap();
        assert!((h_s - profile.h_s).abs() < 1e-9, "|G| = {mag}");
        assert!((h_q - profile.h_q).abs() < 1e-9);
        assert!((h_sq - profile.h_sq).abs() < 1e-9);
    }
}

#[test]
fn pbg_entropies_ignore_the_phase_of_g() {
    let mut rng = StdRng::seed_from_u64(14);
    for _ in 0..100 {
        let mag = rng.random_range(0.0..1.0);
        let phase = rng.random_range(0.0..std::f64::consts::TAU);
        let evolve = |g: Complex64| {
            let pair = amplitude_damping_kraus(g).unwrap();
            entropic_profile(
                &apply_to_subsystem(
                    &[pair.k1, pair.k2],
                    &DensityMatrix::singlet(),
                    Subsystem::System,
                )
                .unwrap(),
            )
            .unwrap()
        };
        let plain = evolve(Complex64::new(mag, 0.0));
        let rotated = evolve(Complex64::from_polar(mag, phase));
        assert!((plain.h_s - rotated.h_s).abs() < 1e-12);
        assert!((plain.h_q - rotated.h_q).abs() < 1e-12);
        assert!((plain.h_sq - rotated.h_sq).abs() < 1e-12);
    }
}

#[test]
fn full_decay_on_system_gives_unit_residual_work() {
    // |G| → 0: H(S_t) = 0, I(S_t:Q) = 0, so W_ex = 1 kT ln2.
    let pair = amplitude_damping_kraus(Complex64::ZERO).unwrap();
    let joint =
        apply_to_subsystem(&[pair.k1, pair.k2], &DensityMatrix::singlet(), Subsystem::System)
            .unwrap();
    let w = nmwork_core::work_system_scenario(&joint, 1).unwrap();
    assert!((w - 1.0).abs() < 1e-12);
}
