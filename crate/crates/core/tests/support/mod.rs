//! Shared oracles for the integration tests. Everything here is built
//! directly on the full tensor space (qubit 1 x qubit 2 x truncated Fock
//! ladder) so that it shares no code path with the block-decomposed engine
//! it checks.

#![allow(dead_code)]

use num_complex::Complex64;
use sim_core::linalg::ComplexMatrix;
use sim_core::model::ModelParams;
use sim_core::{AtomPrep, FieldState};

/// Tiny deterministic generator (SplitMix64) so seeded tests never shift
/// with external crate versions.
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn complex(&mut self, scale: f64) -> Complex64 {
        Complex64::new(
            self.range(-scale, scale),
            self.range(-scale, scale),
        )
    }
}

/// Basis layout of the full tensor space: index = pair * (n_photon + 1) + p
/// with pair running over (ee, eg, ge, gg) and p over photon numbers. This
/// matches `JointDensity::assemble_full`.
pub fn full_dim(n_photon: usize) -> usize {
    4 * (n_photon + 1)
}

fn pair_levels(pair: usize) -> (usize, usize) {
    (pair / 2, pair % 2) // 0 = excited, 1 = ground
}

/// sqrt(p! / (p-k)!) as a float, zero when p < k.
fn ladder(p: i64, k: i64) -> f64 {
    if p < k {
        return 0.0;
    }
    let mut acc = 1.0f64;
    for j in (p - k + 1)..=p {
        acc *= j as f64;
    }
    acc.sqrt()
}

/// Interaction Hamiltonian assembled element by element on the tensor basis:
/// detuning +Delta per excited qubit and -Delta per ground qubit, Stark
/// shifts Theta(k) * p * (beta2 if excited, beta1 if ground) per qubit, and
/// the k-photon exchange gamma_i <e, p-k| .. |g, p> = gamma_i sqrt(p!/(p-k)!).
pub fn full_hamiltonian(params: &ModelParams, n_photon: usize) -> ComplexMatrix {
    let dim = full_dim(n_photon);
    let k = params.k as i64;
    let theta = params.theta_flag();
    let mut h = ComplexMatrix::zeros(dim, dim);

    for pair in 0..4 {
        let (a1, a2) = pair_levels(pair);
        for p in 0..=n_photon {
            let row = pair * (n_photon + 1) + p;
            let mut diag = 0.0;
            for (qubit, level) in [(0usize, a1), (1usize, a2)] {
                diag += if level == 0 {
                    params.delta + theta * p as f64 * params.beta2[qubit]
                } else {
                    -params.delta + theta * p as f64 * params.beta1[qubit]
                };
            }
            h[(row, row)] = Complex64::new(diag, 0.0);

            // Lowering qubit 1 or 2 while absorbing k photons:
            // <e.., p | H | g.., p+k> = gamma_i * ladder(p+k).
            for (qubit, level, gamma) in [(0usize, a1, params.gamma1), (1, a2, params.gamma2)] {
                if level != 0 {
                    continue;
                }
                let p_src = p as i64 + k;
                if p_src as usize > n_photon {
                    continue;
                }
                let col_pair = if qubit == 0 { pair + 2 } else { pair + 1 };
                let col = col_pair * (n_photon + 1) + p_src as usize;
                let f = ladder(p_src, k);
                h[(row, col)] = gamma * f;
                h[(col, row)] = gamma.conj() * f;
            }
        }
    }
    h
}

/// Matrix exponential exp(-i t H) by scaling and squaring a Taylor series.
pub fn expm_minus_i_t(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let dim = h.rows;
    let scaled_norm = h.max_abs() * t.abs() * dim as f64;
    let squarings = if scaled_norm > 0.5 {
        (scaled_norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let factor = Complex64::new(0.0, -t / f64::powi(2.0, squarings as i32));
    let a = h.scale(factor);

    let mut result = ComplexMatrix::identity(dim);
    let mut term = ComplexMatrix::identity(dim);
    for order in 1..=24 {
        term = term.mul(&a).scale(Complex64::new(1.0 / order as f64, 0.0));
        result = result.add(&term);
        if term.max_abs() < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.mul(&result);
    }
    result
}

/// Initial joint density on the full tensor space: the atomic preparation
/// is a classical mixture of the four level configurations with weights
/// cos^2/sin^2, tensored with the pure field state.
pub fn full_initial_density(
    prep: &AtomPrep,
    field: &FieldState,
    n_photon: usize,
) -> ComplexMatrix {
    let w1 = [prep.theta1.cos().powi(2), prep.theta1.sin().powi(2)];
    let w2 = [prep.theta2.cos().powi(2), prep.theta2.sin().powi(2)];
    let levels = n_photon + 1;
    let mut rho = ComplexMatrix::zeros(4 * levels, 4 * levels);
    for pair in 0..4 {
        let (a1, a2) = pair_levels(pair);
        let w = w1[a1] * w2[a2];
        for p in 0..=n_photon.min(field.n_max) {
            for q in 0..=n_photon.min(field.n_max) {
                rho[(pair * levels + p, pair * levels + q)] =
                    field.amplitudes[p] * field.amplitudes[q].conj() * w;
            }
        }
    }
    rho
}

pub fn outer_product(v: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
}

/// Brute-force density at time t: U rho(0) U^dagger on the full tensor space.
pub fn full_evolved_density(
    params: &ModelParams,
    prep: &AtomPrep,
    field: &FieldState,
    n_photon: usize,
    t: f64,
) -> ComplexMatrix {
    let h = full_hamiltonian(params, n_photon);
    let u = expm_minus_i_t(&h, t);
    let rho0 = full_initial_density(prep, field, n_photon);
    u.mul(&rho0).mul(&u.adjoint())
}

/// Naive qubit-pair reduction of a full-space density: trace out the photon
/// index, keeping the (ee, eg, ge, gg) pair order.
pub fn naive_reduce_to_qubits(rho_full: &ComplexMatrix, n_photon: usize) -> ComplexMatrix {
    let levels = n_photon + 1;
    ComplexMatrix::from_fn(4, 4, |a, b| {
        (0..levels)
            .map(|p| rho_full[(a * levels + p, b * levels + p)])
            .sum()
    })
}

/// Naive field reduction: trace out both qubits.
pub fn naive_reduce_to_field(rho_full: &ComplexMatrix, n_photon: usize) -> ComplexMatrix {
    let levels = n_photon + 1;
    ComplexMatrix::from_fn(levels, levels, |p, q| {
        (0..4)
            .map(|pair| rho_full[(pair * levels + p, pair * levels + q)])
            .sum()
    })
}

/// Random Hermitian matrix with entries of order `scale`.
pub fn random_hermitian(rng: &mut SplitMix64, dim: usize, scale: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] = Complex64::new(rng.range(-scale, scale), 0.0);
        for j in (i + 1)..dim {
            let z = rng.complex(scale);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Random normalized pure two-qubit density matrix.
pub fn random_pure_density(rng: &mut SplitMix64) -> ComplexMatrix {
    let mut v: Vec<Complex64> = (0..4).map(|_| rng.complex(1.0)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    outer_product(&v)
}

/// Random single-qubit unitary from two random phases and a rotation.
pub fn random_local_unitary(rng: &mut SplitMix64) -> [[Complex64; 2]; 2] {
    let alpha = rng.range(0.0, std::f64::consts::TAU);
    let beta = rng.range(0.0, std::f64::consts::TAU);
    let theta = rng.range(0.0, std::f64::consts::FRAC_PI_2);
    let (c, s) = (theta.cos(), theta.sin());
    let ea = Complex64::from_polar(1.0, alpha);
    let eb = Complex64::from_polar(1.0, beta);
    [
        [ea * c, eb * s],
        [-eb.conj() * s, ea.conj() * c],
    ]
}

/// Kronecker product of two square matrices given as nested arrays.
pub fn kron2(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 4, |i, j| a[i / 2][j / 2] * b[i % 2][j % 2])
}
