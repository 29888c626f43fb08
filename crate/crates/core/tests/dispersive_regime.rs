//! Closed-form propagator against the exact engine: where the weak-partner
//! approximation holds, where it degrades, and the structural properties of
//! the assembled density.
//!
//! The closed-form coefficients attach the flopping frequency of the ladder
//! rung above each branch's starting photon number (mu_n is built from
//! (n+k)!/n! while the branch weighted by b_n exchanges on n!/(n-k)!), so
//! the engine dephases from the exact one on the scale of the rung spacing.
//! At large mean photon number the relative spacing shrinks like 1/(2 n),
//! which is where the approximation earns its keep; the measured budgets
//! below pin both the good and the bad regimes.

mod support;

use num_complex::Complex64;
use sim_core::{
    binomial_amplitudes, dispersive_coefficients, dispersive_density, evolve_exact,
    reduce_to_qubits, AtomPrep, Evolver, ModelParams,
};

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn max_two_qubit_deviation(
    params: &ModelParams,
    prep: &AtomPrep,
    eta: f64,
    m: usize,
    t_max: f64,
    samples: usize,
) -> f64 {
    let field = binomial_amplitudes(eta, m).unwrap();
    let evolver = Evolver::new(prep, &field, params).unwrap();
    let mut worst = 0.0f64;
    for i in 0..=samples {
        let t = t_max * i as f64 / samples as f64;
        let (disp, _) = dispersive_density(prep, &field, params, t).unwrap();
        let exact = evolver.evolve_at(t).unwrap();
        let dev = reduce_to_qubits(&disp)
            .matrix
            .max_abs_diff(&reduce_to_qubits(&exact).matrix);
        worst = worst.max(dev);
    }
    worst
}

#[test]
fn large_field_weak_partner_regime_tracks_exact_engine() {
    // gamma2/gamma1 = 0.01 on resonance with mean photon number 49: the
    // measured two-qubit deviation stays below 0.04 out to gamma1 t = 8
    // (0.0397 at its worst), so 0.05 is the recorded approximation budget.
    let params = ModelParams::new(1, re(1.0), re(0.01), 0.0);
    let prep = AtomPrep::new(0.0, std::f64::consts::FRAC_PI_4);
    let worst = max_two_qubit_deviation(&params, &prep, 0.7, 70, 5.0, 50);
    assert!(worst <= 0.05, "deviation {worst:.4} above budget");
}

#[test]
fn small_field_deviation_is_set_by_the_rung_shift() {
    // Same couplings on a five-photon field: the rung spacing is no longer
    // small against the frequency itself, and the measured deviation climbs
    // to 0.164 by gamma1 t = 10. Pinned as a characterization so a change
    // in the coefficient convention shows up here first.
    let params = ModelParams::new(1, re(1.0), re(0.01), 0.0);
    let prep = AtomPrep::new(0.0, std::f64::consts::FRAC_PI_4);
    let worst = max_two_qubit_deviation(&params, &prep, 0.5, 4, 10.0, 100);
    assert!(
        (0.10..=0.30).contains(&worst),
        "measured small-field deviation moved: {worst:.4}"
    );
}

#[test]
fn detuned_regime_deviation_is_large_and_documented() {
    // The closed form carries the detuning only as the phase g_n, never in
    // the flopping frequency mu_n. At Delta/gamma1 = 20 the exact dynamics
    // are frozen by the detuning (effective frequency ~ Delta) while the
    // closed form keeps full-amplitude exchange at mu_n, so the deviation
    // reaches the population scale: measured 0.479 for theta2 = pi/4 and
    // 0.958 for theta2 = 0 on this grid.
    let params = ModelParams::new(1, re(1.0), re(0.01), 20.0);
    let prep = AtomPrep::new(0.0, std::f64::consts::FRAC_PI_4);
    let worst = max_two_qubit_deviation(&params, &prep, 0.5, 4, 10.0, 100);
    assert!(
        worst > 0.3,
        "closed form unexpectedly matched the detuned exact dynamics: {worst:.4}"
    );
}

#[test]
fn ground_first_qubit_sector_dephases_within_one_period() {
    // Preparing the first qubit in the ground state exercises the
    // (Psi1, Psi2) coefficient pair on weights b_n, two rungs above the
    // exact transition g,n -> e,n-k. Measured deviation 0.956 by
    // gamma1 t = 10.
    let params = ModelParams::new(1, re(1.0), re(0.01), 0.0);
    let prep = AtomPrep::new(std::f64::consts::FRAC_PI_2, 0.0);
    let worst = max_two_qubit_deviation(&params, &prep, 0.5, 4, 10.0, 100);
    assert!(worst > 0.5, "ground-sector deviation shrank: {worst:.4}");
}

#[test]
fn zero_mixing_angles_populate_only_the_first_pair() {
    // theta1 = theta2 = 0: the density reduces to the three coefficients
    // Omega_11, Omega_12, Omega_22 (and the conjugate), all other entries
    // exactly zero.
    let params = ModelParams::new(1, re(1.0), re(0.2), 0.0);
    let field = binomial_amplitudes(0.4, 6).unwrap();
    let prep = AtomPrep::new(0.0, 0.0);
    let (rho, diag) = dispersive_density(&prep, &field, &params, 2.3).unwrap();
    assert!(diag.trace_deviation < 1e-12);
    for (_, omega) in rho.blocks() {
        for i in 0..4 {
            for j in 0..4 {
                if i >= 2 || j >= 2 {
                    assert_eq!(omega[(i, j)], Complex64::new(0.0, 0.0));
                }
            }
        }
    }
}

#[test]
fn coefficient_continuity_on_a_refinement_ladder() {
    let params = ModelParams::new(2, re(1.0), re(0.15), 0.7).with_stark([0.2, 0.1], [0.3, 0.4]);
    let n = 5;
    let t = 2.5;
    let base = dispersive_coefficients(&params, n, t).unwrap();
    // Lipschitz constant from the closed form: the phase runs at |g - mu|
    // and the envelope at 2 mu, plus coupling-scaled margins.
    let f = ((n + 1)..=(n + 2)).map(|j| j as f64).product::<f64>().sqrt();
    let lip = (base.g - base.mu).abs() + 2.0 * base.mu + 0.01 * f + 1.0;
    for exp in 2..=5 {
        let delta = 10f64.powi(-exp);
        let stepped = dispersive_coefficients(&params, n, t + delta).unwrap();
        assert!((stepped.a - base.a).norm() <= lip * delta);
        assert!((stepped.b - base.b).norm() <= lip * delta);
    }
}

#[test]
fn frequencies_match_hand_evaluation_at_the_revival_mean() {
    // k=1, gamma2/gamma1 = 0.2, Delta = 0, n = 14:
    // mu = sqrt(0.01 + 15), g = 0.2 * 14.5.
    let params = ModelParams::new(1, re(1.0), re(0.2), 0.0);
    let c = dispersive_coefficients(&params, 14, 1.0).unwrap();
    assert!((c.mu - (0.2f64 * 0.2 / 4.0 + 15.0).sqrt()).abs() < 1e-14);
    assert!((c.g - 2.9).abs() < 1e-14);
}

#[test]
fn assembled_density_concurrence_is_structurally_zero() {
    // The assembled coefficient table has no coherence between the
    // (Psi1, Psi2) and (Psi3, Psi4) sectors, so the two-qubit reduction is
    // block diagonal in the second qubit's level and therefore separable:
    // the pipeline concurrence vanishes identically even where the
    // closed-form expression built from the same coefficients does not.
    let params = ModelParams::new(1, re(1.0), re(0.2), 0.0);
    let field = binomial_amplitudes(0.5, 12).unwrap();
    let prep = AtomPrep::new(0.0, std::f64::consts::FRAC_PI_4);
    let mut analytic_peak = 0.0f64;
    for i in 1..=25 {
        let t = 0.5 * i as f64;
        let (rho, _) = dispersive_density(&prep, &field, &params, t).unwrap();
        let two = reduce_to_qubits(&rho);
        let c = sim_core::concurrence_mixed(&two).unwrap();
        assert!(c.value < 1e-12, "pipeline concurrence {} at t={t}", c.value);
        let a = sim_core::concurrence_analytic(
            &params,
            &field,
            std::f64::consts::FRAC_PI_4,
            t,
        )
        .unwrap();
        analytic_peak = analytic_peak.max(a);
    }
    assert!(analytic_peak > 0.05, "closed-form value never left zero");
}

#[test]
fn exact_engine_generates_entanglement_where_the_closed_form_cannot() {
    // Cavity-mediated entanglement is real physics: with both qubits
    // prepared excited the exact evolution entangles them through photon
    // exchange (peak concurrence 0.20 on this half-unit grid, 0.31 on a
    // finer one, for gamma2/gamma1 = 0.2, m = 20), while the closed form's
    // sector structure keeps its pipeline concurrence at zero for every
    // preparation.
    let params = ModelParams::new(1, re(1.0), re(0.2), 0.0);
    let field = binomial_amplitudes(0.5, 20).unwrap();
    let prep = AtomPrep::new(0.0, 0.0);
    let evolver = Evolver::new(&prep, &field, &params).unwrap();
    let mut exact_peak = 0.0f64;
    for i in 1..=50 {
        let t = 0.5 * i as f64;
        let rho = evolver.evolve_at(t).unwrap();
        let c = sim_core::concurrence_mixed(&reduce_to_qubits(&rho)).unwrap();
        exact_peak = exact_peak.max(c.value);

        let (disp, _) = dispersive_density(&prep, &field, &params, t).unwrap();
        let pipeline = sim_core::concurrence_mixed(&reduce_to_qubits(&disp)).unwrap();
        assert!(pipeline.value < 1e-12);
    }
    assert!(exact_peak > 0.15, "exact-engine peak moved: {exact_peak:.4}");
}
