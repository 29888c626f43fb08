//! Two-qubit entanglement measures: Wootters concurrence for mixed and pure
//! states, entanglement of formation, and the closed-form concurrence of the
//! strong-coupling reduced state.

use num_complex::Complex64;
use thiserror::Error;

use crate::dispersive::{dispersive_coefficients, DispersiveError};
use crate::field::FieldState;
use crate::linalg::{hermitian_eigen, psd_sqrt, ComplexMatrix, LinalgError};
use crate::model::ModelParams;
use crate::observables::TwoQubitDensity;

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-6;
pub const NEGATIVITY_TOL: f64 = 1e-10;
pub const DUAL_FORMULA_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum EntanglementError {
    #[error("density deviates from Hermitian by {deviation:.3e} at ({i}, {j})")]
    NotHermitian { i: usize, j: usize, deviation: f64 },
    #[error("density trace {trace} is not 1 within {tol}")]
    BadTrace { trace: f64, tol: f64 },
    #[error("density has eigenvalue {value:.3e} below -{tol:.0e}")]
    NegativeEigenvalue { value: f64, tol: f64 },
    #[error("concurrence {value} lies outside [0, 1]")]
    ConcurrenceOutOfRange { value: f64 },
    #[error("state norm {norm} is not 1 within {tol}")]
    NotNormalized { norm: f64, tol: f64 },
    #[error(
        "pure-state concurrence formulas disagree: trace form {trace_form}, \
         four-index form {four_index_form}"
    )]
    DualFormulaMismatch {
        trace_form: f64,
        four_index_form: f64,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Dispersive(#[from] DispersiveError),
}

/// Concurrence together with the square-rooted eigenvalues of
/// rho (sigma_y x sigma_y) rho* (sigma_y x sigma_y), descending.
#[derive(Debug, Clone, Copy)]
pub struct ConcurrenceResult {
    pub value: f64,
    pub lambdas: [f64; 4],
}

/// Spin-flipped density (sigma_y x sigma_y) rho* (sigma_y x sigma_y).
///
/// In the product basis (ee, eg, ge, gg) the flip reverses both indices and
/// applies the sign pattern y = (-1, 1, 1, -1).
pub fn spin_flip(rho: &ComplexMatrix) -> ComplexMatrix {
    const Y: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    ComplexMatrix::from_fn(4, 4, |i, j| Y[i] * Y[j] * rho[(3 - i, 3 - j)].conj())
}

fn validated(rho: &TwoQubitDensity) -> Result<ComplexMatrix, EntanglementError> {
    let m = &rho.matrix;
    let (i, j, dev) = m.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(EntanglementError::NotHermitian {
            i,
            j,
            deviation: dev,
        });
    }
    let trace = m.trace().re;
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(EntanglementError::BadTrace {
            trace,
            tol: TRACE_TOL,
        });
    }
    // Hermitize exactly so downstream eigensolves see a clean input.
    let adj = m.adjoint();
    Ok(m.add(&adj).scale(Complex64::new(0.5, 0.0)))
}

/// Project tiny negative eigenvalues (rounding debris) to zero, rejecting
/// anything genuinely indefinite.
fn clamp_to_psd(rho: &ComplexMatrix) -> Result<ComplexMatrix, EntanglementError> {
    let (mut values, vectors) = hermitian_eigen(rho)?;
    for v in &mut values {
        if *v < -NEGATIVITY_TOL {
            return Err(EntanglementError::NegativeEigenvalue {
                value: *v,
                tol: NEGATIVITY_TOL,
            });
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let n = rho.rows;
    let scaled = ComplexMatrix::from_fn(n, n, |i, j| vectors[(i, j)] * values[j]);
    Ok(scaled.mul(&vectors.adjoint()))
}

/// Wootters concurrence of a two-qubit density matrix.
///
/// C = max(0, l1 - l2 - l3 - l4) where l_i are the descending square roots
/// of the eigenvalues of rho rho~ with rho~ the spin flip of rho.
pub fn concurrence_mixed(rho: &TwoQubitDensity) -> Result<ConcurrenceResult, EntanglementError> {
    let clean = clamp_to_psd(&validated(rho)?)?;
    let flipped = spin_flip(&clean);
    // Wootters' eigenvalues come from the Hermitian sandwich
    // sqrt(rho) rho~ sqrt(rho), which shares the spectrum of rho rho~.
    let root = psd_sqrt(&clean)?;
    let sandwich = root.mul(&flipped).mul(&root);
    let (values, _) = hermitian_eigen(&sandwich)?;
    let mut lambdas = [0.0f64; 4];
    for (slot, v) in lambdas.iter_mut().zip(values.iter().rev()) {
        *slot = v.max(0.0).sqrt();
    }
    let value = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0);
    Ok(ConcurrenceResult { value, lambdas })
}

/// Binary entropy h(x) = -x log2 x - (1-x) log2 (1-x).
fn binary_entropy(x: f64) -> f64 {
    let mut h = 0.0;
    for p in [x, 1.0 - x] {
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    h
}

/// Entanglement of formation from a concurrence value:
/// E = h((1 + sqrt(1 - C^2)) / 2).
pub fn entanglement_of_formation(concurrence: f64) -> Result<f64, EntanglementError> {
    if !(-NEGATIVITY_TOL..=1.0 + NEGATIVITY_TOL).contains(&concurrence) {
        return Err(EntanglementError::ConcurrenceOutOfRange { value: concurrence });
    }
    let c = concurrence.clamp(0.0, 1.0);
    Ok(binary_entropy(0.5 * (1.0 + (1.0 - c * c).sqrt())))
}

/// Pure joint state of two qubits and the field, indexed as
/// `amplitudes[n][a1][a2]` with photon number n and qubit levels
/// a = 0 (excited), 1 (ground).
#[derive(Debug, Clone)]
pub struct PureBipartiteState {
    pub amplitudes: Vec<[[Complex64; 2]; 2]>,
}

impl PureBipartiteState {
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes
            .iter()
            .flatten()
            .flatten()
            .map(|c| c.norm_sqr())
            .sum()
    }
}

/// Concurrence of a pure state across the bipartition
/// (first qubit) | (second qubit, field), evaluated two independent ways
/// and cross-checked:
///
/// 1. sqrt(2 (1 - Tr rho_A^2)) with rho_A the first qubit's reduction,
/// 2. the sum of squared 2x2 minors of the amplitude matrix, with the
///    partner qubit and photon number fused into one column index.
///
/// The two are algebraically equal for any normalized state, so a mismatch
/// beyond tolerance flags numerical degradation and is reported as an error.
pub fn concurrence_pure(state: &PureBipartiteState) -> Result<f64, EntanglementError> {
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > TRACE_TOL {
        return Err(EntanglementError::NotNormalized {
            norm,
            tol: TRACE_TOL,
        });
    }

    // First qubit's reduced density: trace over the partner qubit and field.
    let mut red = [[Complex64::new(0.0, 0.0); 2]; 2];
    for slice in &state.amplitudes {
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    red[a][b] += slice[a][c] * slice[b][c].conj();
                }
            }
        }
    }
    let purity: f64 = (0..2)
        .flat_map(|a| (0..2).map(move |b| (red[a][b] * red[b][a]).re))
        .sum();
    let trace_form = (2.0 * (1.0 - purity)).max(0.0).sqrt();

    // Row index: first qubit. Column index: (partner level, photon).
    let columns: Vec<[Complex64; 2]> = state
        .amplitudes
        .iter()
        .flat_map(|slice| (0..2).map(move |c| [slice[0][c], slice[1][c]]))
        .collect();
    let minor_form = {
        let mut total = 0.0;
        for (u, cu) in columns.iter().enumerate() {
            for cv in &columns[u + 1..] {
                let det = cu[0] * cv[1] - cv[0] * cu[1];
                total += 4.0 * det.norm_sqr();
            }
        }
        total.sqrt()
    };

    if (trace_form - minor_form).abs() > DUAL_FORMULA_TOL {
        return Err(EntanglementError::DualFormulaMismatch {
            trace_form,
            four_index_form: minor_form,
        });
    }
    Ok(trace_form)
}

/// Closed-form concurrence of the reduced two-qubit state under the
/// strong-coupling evolution, for a first qubit prepared excited and the
/// second tilted by theta:
///
/// C(t) = |sin 2 theta| / 2 * sqrt(sum_n b_n^2 b_{n-k}^2
///        |A_n B*_{n+k} - B_n A*_{n+k}|^2)
pub fn concurrence_analytic(
    params: &ModelParams,
    field: &FieldState,
    theta: f64,
    t: f64,
) -> Result<f64, EntanglementError> {
    let k = params.k as i64;
    let mut sum = 0.0;
    for n in 0..=field.n_max as i64 {
        let bn = field.amp(n).norm_sqr();
        let bnk = field.amp(n - k).norm_sqr();
        if bn == 0.0 || bnk == 0.0 {
            continue;
        }
        let low = dispersive_coefficients(params, n, t)?;
        let high = dispersive_coefficients(params, n + k, t)?;
        let cross = low.a * high.b.conj() - low.b * high.a.conj();
        sum += bn * bnk * cross.norm_sqr();
    }
    Ok(0.5 * (2.0 * theta).sin().abs() * sum.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::binomial_amplitudes;
    use crate::linalg::eigvals_general_4x4;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn density(entries: [[f64; 4]; 4]) -> TwoQubitDensity {
        TwoQubitDensity::new(ComplexMatrix::from_fn(4, 4, |i, j| re(entries[i][j]))).unwrap()
    }

    fn bell_phi_plus() -> TwoQubitDensity {
        // (|ee> + |gg>) / sqrt(2)
        density([
            [0.5, 0.0, 0.0, 0.5],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.5, 0.0, 0.0, 0.5],
        ])
    }

    #[test]
    fn bell_state_has_unit_concurrence() {
        let c = concurrence_mixed(&bell_phi_plus()).unwrap();
        assert!((c.value - 1.0).abs() < 1e-12);
        assert!((c.lambdas[0] - 1.0).abs() < 1e-12);
        for l in &c.lambdas[1..] {
            assert!(l.abs() < 1e-7);
        }
    }

    #[test]
    fn product_state_has_zero_concurrence() {
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(1, 1)] = re(1.0); // |e g>
        let c = concurrence_mixed(&TwoQubitDensity::new(m).unwrap()).unwrap();
        assert!(c.value.abs() < 1e-12);
    }

    #[test]
    fn tilted_pure_state_concurrence_is_2ab() {
        // a|ee> + b|gg> has C = 2|a||b|.
        let a = 0.9f64;
        let b = (1.0 - a * a).sqrt();
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(0, 0)] = re(a * a);
        m[(0, 3)] = re(a * b);
        m[(3, 0)] = re(a * b);
        m[(3, 3)] = re(b * b);
        let c = concurrence_mixed(&TwoQubitDensity::new(m).unwrap()).unwrap();
        assert!((c.value - 2.0 * a * b).abs() < 1e-10);
    }

    #[test]
    fn werner_family_matches_closed_form() {
        // rho = p |psi-><psi-| + (1-p)/4 I: C = max(0, (3p - 1) / 2).
        for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
            let q = (1.0 - p) / 4.0;
            let rho = density([
                [q, 0.0, 0.0, 0.0],
                [0.0, q + p / 2.0, -p / 2.0, 0.0],
                [0.0, -p / 2.0, q + p / 2.0, 0.0],
                [0.0, 0.0, 0.0, q],
            ]);
            let c = concurrence_mixed(&rho).unwrap();
            let expect = (0.5 * (3.0 * p - 1.0)).max(0.0);
            assert!(
                (c.value - expect).abs() < 1e-10,
                "p = {p}: {} vs {expect}",
                c.value
            );
        }
    }

    #[test]
    fn sandwich_spectrum_matches_general_eigensolver() {
        // The lambdas equal the square-rooted eigenvalues of the
        // non-Hermitian product rho rho~, solved independently.
        let rho = density([
            [0.35, 0.0, 0.0, 0.21],
            [0.0, 0.20, 0.05, 0.0],
            [0.0, 0.05, 0.15, 0.0],
            [0.21, 0.0, 0.0, 0.30],
        ]);
        let c = concurrence_mixed(&rho).unwrap();
        let product = rho.matrix.mul(&spin_flip(&rho.matrix));
        let mut roots: Vec<f64> = eigvals_general_4x4(&product)
            .unwrap()
            .iter()
            .map(|z| z.re.max(0.0).sqrt())
            .collect();
        roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (l, r) in c.lambdas.iter().zip(roots.iter()) {
            assert!((l - r).abs() < 1e-8, "{l} vs {r}");
        }
    }

    #[test]
    fn rejects_invalid_densities() {
        let mut skew = ComplexMatrix::zeros(4, 4);
        skew[(0, 0)] = re(1.0);
        skew[(0, 1)] = re(0.3);
        assert!(matches!(
            concurrence_mixed(&TwoQubitDensity::new(skew).unwrap()),
            Err(EntanglementError::NotHermitian { .. })
        ));

        let half = density([
            [0.5, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ]);
        assert!(matches!(
            concurrence_mixed(&half),
            Err(EntanglementError::BadTrace { .. })
        ));

        let indefinite = density([
            [0.6, 0.0, 0.0, 0.0],
            [0.0, 0.5, 0.0, 0.0],
            [0.0, 0.0, -0.1, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ]);
        assert!(matches!(
            concurrence_mixed(&indefinite),
            Err(EntanglementError::NegativeEigenvalue { .. })
        ));
    }

    #[test]
    fn formation_entropy_values() {
        assert!(entanglement_of_formation(0.0).unwrap().abs() < 1e-15);
        assert!((entanglement_of_formation(1.0).unwrap() - 1.0).abs() < 1e-15);
        // C = 1/2 gives h((1 + sqrt(3)/2) / 2).
        let e = entanglement_of_formation(0.5).unwrap();
        let x = 0.5 * (1.0 + 0.75f64.sqrt());
        let expect = -x * x.log2() - (1.0 - x) * (1.0 - x).log2();
        assert!((e - expect).abs() < 1e-14);
        assert!(entanglement_of_formation(1.5).is_err());
        assert!(entanglement_of_formation(-0.2).is_err());
    }

    #[test]
    fn formation_is_monotone_in_concurrence() {
        let mut last = -1.0;
        for i in 0..=100 {
            let c = i as f64 / 100.0;
            let e = entanglement_of_formation(c).unwrap();
            assert!(e >= last);
            last = e;
        }
    }

    #[test]
    fn field_tagged_state_is_maximally_entangled_across_the_cut() {
        // (|ee, 0> + |gg, 1>) / sqrt(2): the first qubit is maximally
        // entangled with the rest, and both formulas agree on C = 1.
        let s = 0.5f64.sqrt();
        let mut amp0 = [[Complex64::new(0.0, 0.0); 2]; 2];
        let mut amp1 = amp0;
        amp0[0][0] = re(s);
        amp1[1][1] = re(s);
        let state = PureBipartiteState {
            amplitudes: vec![amp0, amp1],
        };
        let c = concurrence_pure(&state).unwrap();
        assert!((c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pure_state_formulas_agree_on_single_sector() {
        // (|ee> + |gg>) / sqrt(2) with the field in |3>.
        let s = 0.5f64.sqrt();
        let mut slice = [[Complex64::new(0.0, 0.0); 2]; 2];
        slice[0][0] = re(s);
        slice[1][1] = re(s);
        let zero = [[Complex64::new(0.0, 0.0); 2]; 2];
        let state = PureBipartiteState {
            amplitudes: vec![zero, zero, zero, slice],
        };
        let c = concurrence_pure(&state).unwrap();
        assert!((c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pure_product_state_is_unentangled() {
        let mut slice = [[Complex64::new(0.0, 0.0); 2]; 2];
        slice[0][1] = re(1.0); // |e g, 0>
        let state = PureBipartiteState {
            amplitudes: vec![slice],
        };
        assert!(concurrence_pure(&state).unwrap().abs() < 1e-15);
    }

    #[test]
    fn pure_state_rejects_unnormalized_input() {
        let mut slice = [[Complex64::new(0.0, 0.0); 2]; 2];
        slice[0][0] = re(0.6);
        let state = PureBipartiteState {
            amplitudes: vec![slice],
        };
        assert!(matches!(
            concurrence_pure(&state),
            Err(EntanglementError::NotNormalized { .. })
        ));
    }

    #[test]
    fn analytic_concurrence_theta_structure() {
        let params = ModelParams::new(1, re(1.0), re(0.2), 0.0);
        let field = binomial_amplitudes(0.7, 20).unwrap();
        let t = 3.7;
        let quarter = std::f64::consts::FRAC_PI_4;
        let at = |theta: f64| concurrence_analytic(&params, &field, theta, t).unwrap();
        let peak = at(quarter);
        assert!(peak > 0.0);
        // Zeros at theta = 0 and pi/2, symmetry under sign flip, and the
        // pi/4 peak dominating intermediate angles.
        assert!(at(0.0).abs() < 1e-15);
        assert!(at(std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!((at(-quarter) - peak).abs() < 1e-12);
        assert!(at(0.3) < peak);
        // Scaling in theta is exactly |sin 2 theta| / 2.
        assert!((at(0.3) - peak * (0.6f64).sin().abs()).abs() < 1e-12);
    }

    #[test]
    fn analytic_concurrence_vanishes_at_zero_time() {
        let params = ModelParams::new(2, re(1.0), re(0.1), 0.5);
        let field = binomial_amplitudes(0.4, 12).unwrap();
        let c = concurrence_analytic(&params, &field, 0.6, 0.0).unwrap();
        assert!(c.abs() < 1e-15);
    }
}
