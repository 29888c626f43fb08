//! Two qubits exchanging k photons with a single cavity mode.
//!
//! The interaction conserves excitation number, so the joint Hilbert space
//! splits into small invariant blocks. Block label n collects the four
//! product states
//!
//! ```text
//!   Psi1 = |e1 e2, n-k>   Psi2 = |g1 e2, n>
//!   Psi3 = |e1 g2, n>     Psi4 = |g1 g2, n+k>
//! ```
//!
//! with members dropped when their photon index is negative. The label range
//! runs from -k (only Psi4 present, a 1x1 block whose phase still matters
//! for field coherences) up to the field support plus k. Dimensions are
//! always 1, 3 or 4: Psi2 and Psi3 share photon index n, so no block ever
//! has exactly two members.
//!
//! Time evolution is spectral: each block Hamiltonian is diagonalized once,
//! and density blocks propagate by unitary conjugation
//! Omega(n, v, t) = U(n, t) Omega(n, v, 0) U(v, t)^dagger.

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::field::FieldState;
use crate::linalg::{hermitian_eigen, ComplexMatrix, LinalgError};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("photon exchange order k must be at least 1")]
    InvalidK,
    #[error("coupling gamma1 must be nonzero")]
    ZeroGamma1,
    #[error("model parameter {name} is not finite")]
    NonFiniteParameter { name: &'static str },
    #[error("evolution time {t} is not finite")]
    NonFiniteTime { t: f64 },
    #[error("block label {n} is negative; public blocks start at 0")]
    NegativeBlockLabel { n: i64 },
    #[error("Stark ratio undefined: beta1 of qubit {qubit} is not positive")]
    StarkRatioUndefined { qubit: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Two-qubit index (in the ordering ee, eg, ge, gg) of each block member.
pub const PSI_TWO_QUBIT_INDEX: [usize; 4] = [0, 2, 1, 3];

/// Photon index carried by block member `i` of block `n`.
pub fn psi_photon(i: usize, n: i64, k: u32) -> i64 {
    match i {
        0 => n - k as i64,
        1 | 2 => n,
        3 => n + k as i64,
        _ => unreachable!("block member index out of range"),
    }
}

/// Whether block member `i` exists in block `n` (photon index nonnegative).
pub fn psi_present(i: usize, n: i64, k: u32) -> bool {
    psi_photon(i, n, k) >= 0
}

/// sqrt(n! / (n-k)!), the k-photon lowering amplitude <n-k| a^k |n>.
/// Zero when n < k. Exact integer product under the hood.
pub fn ladder_factor(n: i64, k: u32) -> f64 {
    if n < k as i64 {
        return 0.0;
    }
    let mut prod = 1.0f64;
    for j in 0..k as i64 {
        prod *= (n - j) as f64;
    }
    prod.sqrt()
}

/// Physical parameters of the coupled system.
///
/// `omega` is the mode frequency and `omega1`, `omega2` the qubit
/// transition frequencies; they only enter through the shared detuning
/// `delta = omega_i - k * omega` and are kept for bookkeeping. The Stark
/// shifts `beta1[i]` (ground level of qubit i+1) and `beta2[i]` (excited
/// level) act only for k > 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub omega: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub gamma1: Complex64,
    pub gamma2: Complex64,
    pub delta: f64,
    pub k: u32,
    pub beta1: [f64; 2],
    pub beta2: [f64; 2],
}

impl ModelParams {
    /// Resonant-reference constructor: omega = 1, qubit frequencies set
    /// consistently with the requested detuning, Stark shifts zero.
    pub fn new(k: u32, gamma1: Complex64, gamma2: Complex64, delta: f64) -> Self {
        let omega = 1.0;
        ModelParams {
            omega,
            omega1: k as f64 * omega + delta,
            omega2: k as f64 * omega + delta,
            gamma1,
            gamma2,
            delta,
            k,
            beta1: [0.0; 2],
            beta2: [0.0; 2],
        }
    }

    pub fn with_stark(mut self, beta1: [f64; 2], beta2: [f64; 2]) -> Self {
        self.beta1 = beta1;
        self.beta2 = beta2;
        self
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.k < 1 {
            return Err(ModelError::InvalidK);
        }
        if self.gamma1.norm() == 0.0 {
            return Err(ModelError::ZeroGamma1);
        }
        for (name, value) in [
            ("omega", self.omega),
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("delta", self.delta),
            ("gamma1.re", self.gamma1.re),
            ("gamma1.im", self.gamma1.im),
            ("gamma2.re", self.gamma2.re),
            ("gamma2.im", self.gamma2.im),
            ("beta1_1", self.beta1[0]),
            ("beta1_2", self.beta1[1]),
            ("beta2_1", self.beta2[0]),
            ("beta2_2", self.beta2[1]),
        ] {
            if !value.is_finite() {
                return Err(ModelError::NonFiniteParameter { name });
            }
        }
        Ok(())
    }

    /// Stark-shift switch: the shifts act only in multiphoton exchange.
    /// Returns 0 for k = 1 and 1 for k > 1. Derived, never stored.
    pub fn theta_flag(&self) -> f64 {
        if self.k == 1 {
            0.0
        } else {
            1.0
        }
    }

    /// Stark ratio r = sqrt(beta2 / beta1) of the given qubit (1 or 2).
    /// Defined only where beta1 is strictly positive.
    pub fn stark_ratio(&self, qubit: usize) -> Result<f64, ModelError> {
        assert!(qubit == 1 || qubit == 2, "qubit index must be 1 or 2");
        let b1 = self.beta1[qubit - 1];
        if b1 <= 0.0 {
            return Err(ModelError::StarkRatioUndefined { qubit });
        }
        Ok((self.beta2[qubit - 1] / b1).sqrt())
    }
}

/// Initial single-qubit preparations: qubit i starts in the diagonal mixture
/// cos^2(theta_i) |e><e| + sin^2(theta_i) |g><g|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomPrep {
    pub theta1: f64,
    pub theta2: f64,
}

impl AtomPrep {
    pub fn new(theta1: f64, theta2: f64) -> Self {
        AtomPrep { theta1, theta2 }
    }

    /// Branch weights (w_ee, w_ge, w_eg, w_gg) of the product preparation,
    /// indexed to match the block members Psi1..Psi4.
    pub fn weights(&self) -> [f64; 4] {
        let ce1 = self.theta1.cos().powi(2);
        let cg1 = self.theta1.sin().powi(2);
        let ce2 = self.theta2.cos().powi(2);
        let cg2 = self.theta2.sin().powi(2);
        [ce1 * ce2, cg1 * ce2, ce1 * cg2, cg1 * cg2]
    }
}

/// Block Hamiltonian embedded in the fixed 4x4 member frame; absent members
/// get zero rows and columns. Accepts labels down to -k.
pub(crate) fn block_hamiltonian_embedded(params: &ModelParams, n: i64) -> ComplexMatrix {
    let k = params.k;
    let theta = params.theta_flag();
    let delta = params.delta;
    let f_n = ladder_factor(n, k);
    let f_nk = ladder_factor(n + k as i64, k);

    let mut h = ComplexMatrix::zeros(4, 4);
    let diag = [
        2.0 * delta + theta * (n - k as i64) as f64 * (params.beta2[0] + params.beta2[1]),
        theta * n as f64 * (params.beta1[0] + params.beta2[1]),
        theta * n as f64 * (params.beta2[0] + params.beta1[1]),
        -2.0 * delta + theta * (n + k as i64) as f64 * (params.beta1[0] + params.beta1[1]),
    ];
    for (i, &d) in diag.iter().enumerate() {
        if psi_present(i, n, k) {
            h[(i, i)] = Complex64::new(d, 0.0);
        }
    }
    let mut couple = |a: usize, b: usize, g: Complex64, f: f64| {
        if psi_present(a, n, k) && psi_present(b, n, k) && f != 0.0 {
            h[(a, b)] = g * f;
            h[(b, a)] = g.conj() * f;
        }
    };
    couple(0, 1, params.gamma1, f_n);
    couple(0, 2, params.gamma2, f_n);
    couple(1, 3, params.gamma2, f_nk);
    couple(2, 3, params.gamma1, f_nk);
    h
}

/// Members of block `n`, in Psi order.
pub fn block_basis(n: i64, k: u32) -> Vec<usize> {
    (0..4).filter(|&i| psi_present(i, n, k)).collect()
}

/// Interaction block for label n >= 0, compressed to its present members
/// (dimension 3 for n < k, else 4). Rows and columns follow [`block_basis`].
pub fn build_block(params: &ModelParams, n: i64) -> Result<ComplexMatrix, ModelError> {
    params.validate()?;
    if n < 0 {
        return Err(ModelError::NegativeBlockLabel { n });
    }
    let basis = block_basis(n, params.k);
    let full = block_hamiltonian_embedded(params, n);
    Ok(ComplexMatrix::from_fn(basis.len(), basis.len(), |r, c| {
        full[(basis[r], basis[c])]
    }))
}

/// Eigensystem of one interaction block.
#[derive(Debug, Clone)]
pub struct BlockEigen {
    pub n: i64,
    pub dim: usize,
    /// Present members, as indices into the Psi1..Psi4 frame (0-based).
    pub basis: Vec<usize>,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are eigenvectors in the compressed basis.
    pub eigenvectors: ComplexMatrix,
}

/// Diagonalizes every block with label 0..=n_max.
pub fn eigen_blocks(params: &ModelParams, n_max: i64) -> Result<Vec<BlockEigen>, ModelError> {
    params.validate()?;
    (0..=n_max).map(|n| eigen_block(params, n)).collect()
}

fn eigen_block(params: &ModelParams, n: i64) -> Result<BlockEigen, ModelError> {
    let basis = block_basis(n, params.k);
    let full = block_hamiltonian_embedded(params, n);
    let compressed = ComplexMatrix::from_fn(basis.len(), basis.len(), |r, c| {
        full[(basis[r], basis[c])]
    });
    let (eigenvalues, eigenvectors) = hermitian_eigen(&compressed)?;
    Ok(BlockEigen {
        n,
        dim: basis.len(),
        basis,
        eigenvalues,
        eigenvectors,
    })
}

/// Joint qubit-qubit-field density operator stored blockwise.
///
/// `blocks[(n, v)]` holds the 4x4 coefficient matrix Omega(n, v) between
/// members of block n (rows) and block v (columns), embedded in the fixed
/// member frame with zeros at absent members. Only Hermitian-consistent
/// content is stored: Omega(v, n) = Omega(n, v)^dagger is kept explicitly
/// and preserved by evolution.
#[derive(Debug, Clone)]
pub struct JointDensity {
    k: u32,
    blocks: BTreeMap<(i64, i64), ComplexMatrix>,
}

impl JointDensity {
    pub fn empty(k: u32) -> Self {
        JointDensity {
            k,
            blocks: BTreeMap::new(),
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn block(&self, n: i64, v: i64) -> Option<&ComplexMatrix> {
        self.blocks.get(&(n, v))
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(i64, i64), &ComplexMatrix)> {
        self.blocks.iter()
    }

    pub(crate) fn block_mut(&mut self, n: i64, v: i64) -> &mut ComplexMatrix {
        self.blocks
            .entry((n, v))
            .or_insert_with(|| ComplexMatrix::zeros(4, 4))
    }

    /// Largest block label stored.
    pub fn n_max(&self) -> i64 {
        self.blocks.keys().map(|&(n, _)| n).max().unwrap_or(0)
    }

    /// Smallest block label stored (can be as low as -k).
    pub fn n_min(&self) -> i64 {
        self.blocks.keys().map(|&(n, _)| n).min().unwrap_or(0)
    }

    /// Highest photon index any stored member can carry.
    pub fn photon_max(&self) -> i64 {
        self.n_max() + self.k as i64
    }

    pub fn trace(&self) -> f64 {
        let mut t = 0.0;
        for (&(n, v), omega) in &self.blocks {
            if n != v {
                continue;
            }
            for i in 0..4 {
                if psi_present(i, n, self.k) {
                    t += omega[(i, i)].re;
                }
            }
        }
        t
    }

    /// Worst deviation from Omega(v, n) = Omega(n, v)^dagger over all pairs.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for (&(n, v), omega) in &self.blocks {
            match self.blocks.get(&(v, n)) {
                Some(partner) => {
                    worst = worst.max(partner.adjoint().max_abs_diff(omega));
                }
                None => {
                    worst = worst.max(omega.max_abs());
                }
            }
        }
        worst
    }

    /// Expectation value of the interaction Hamiltonian, Tr(rho H).
    /// Conserved exactly under the block evolution.
    pub fn interaction_energy(&self, params: &ModelParams) -> f64 {
        let mut e = Complex64::new(0.0, 0.0);
        for (&(n, v), omega) in &self.blocks {
            if n != v {
                continue;
            }
            let h = block_hamiltonian_embedded(params, n);
            e += omega.mul(&h).trace();
        }
        e.re
    }

    /// Dense matrix over (two-qubit basis) x (Fock ladder 0..=photon_max),
    /// global index = pair * (photon_max + 1) + q with the pair ordering
    /// (ee, eg, ge, gg). Intended for desk-scale validation.
    pub fn assemble_full(&self) -> ComplexMatrix {
        let q_dim = (self.photon_max() + 1) as usize;
        let dim = 4 * q_dim;
        let mut full = ComplexMatrix::zeros(dim, dim);
        for (&(n, v), omega) in &self.blocks {
            for i in 0..4 {
                if !psi_present(i, n, self.k) {
                    continue;
                }
                let qi = psi_photon(i, n, self.k) as usize;
                let row = PSI_TWO_QUBIT_INDEX[i] * q_dim + qi;
                for z in 0..4 {
                    if !psi_present(z, v, self.k) {
                        continue;
                    }
                    let qz = psi_photon(z, v, self.k) as usize;
                    let col = PSI_TWO_QUBIT_INDEX[z] * q_dim + qz;
                    full[(row, col)] += omega[(i, z)];
                }
            }
        }
        full
    }
}

/// Joint state at t = 0: independent qubits in their diagonal preparations,
/// field in the given pure state.
pub fn initial_joint(
    prep: &AtomPrep,
    field: &FieldState,
    params: &ModelParams,
) -> Result<JointDensity, ModelError> {
    params.validate()?;
    let k = params.k as i64;
    let w = prep.weights();
    let mut rho = JointDensity::empty(params.k);
    let top = field.n_max as i64;
    for q in 0..=top {
        let bq = field.amp(q);
        if bq.norm_sqr() == 0.0 {
            continue;
        }
        for qp in 0..=top {
            let bqp = field.amp(qp);
            if bqp.norm_sqr() == 0.0 {
                continue;
            }
            let pair = bq * bqp.conj();
            // Each branch lives on one member; block labels follow the
            // member's photon offset.
            if w[0] != 0.0 {
                rho.block_mut(q + k, qp + k)[(0, 0)] += pair * w[0];
            }
            if w[1] != 0.0 {
                rho.block_mut(q, qp)[(1, 1)] += pair * w[1];
            }
            if w[2] != 0.0 {
                rho.block_mut(q, qp)[(2, 2)] += pair * w[2];
            }
            if w[3] != 0.0 {
                rho.block_mut(q - k, qp - k)[(3, 3)] += pair * w[3];
            }
        }
    }
    Ok(rho)
}

/// Precomputed spectral data for repeated evolution of one initial state.
pub struct Evolver {
    initial: JointDensity,
    /// (eigenvalues, eigenvector matrix embedded 4x4) per block label.
    spectral: BTreeMap<i64, (Vec<f64>, ComplexMatrix)>,
}

impl Evolver {
    pub fn new(
        prep: &AtomPrep,
        field: &FieldState,
        params: &ModelParams,
    ) -> Result<Self, ModelError> {
        params.validate()?;
        let initial = initial_joint(prep, field, params)?;
        let mut labels: Vec<i64> = Vec::new();
        for &(n, v) in initial.blocks.keys() {
            labels.push(n);
            labels.push(v);
        }
        labels.sort_unstable();
        labels.dedup();
        let mut spectral = BTreeMap::new();
        for n in labels {
            let eig = eigen_block(params, n)?;
            // Embed eigenvectors back into the 4x4 member frame.
            let mut embedded = ComplexMatrix::zeros(4, 4);
            for (r, &ir) in eig.basis.iter().enumerate() {
                for c in 0..eig.dim {
                    embedded[(ir, c)] = eig.eigenvectors[(r, c)];
                }
            }
            spectral.insert(n, (eig.eigenvalues, embedded));
        }
        Ok(Evolver { initial, spectral })
    }

    pub fn initial(&self) -> &JointDensity {
        &self.initial
    }

    /// Embedded propagator U(n, t) = R exp(-i t diag) R^dagger.
    fn propagator(&self, n: i64, t: f64) -> ComplexMatrix {
        let (eigenvalues, r) = &self.spectral[&n];
        let dim = eigenvalues.len();
        let mut phased = ComplexMatrix::zeros(4, 4);
        for c in 0..dim {
            let phase = Complex64::from_polar(1.0, -t * eigenvalues[c]);
            for row in 0..4 {
                phased[(row, c)] = r[(row, c)] * phase;
            }
        }
        phased.mul(&r.adjoint())
    }

    /// Density at time t by blockwise unitary conjugation.
    pub fn evolve_at(&self, t: f64) -> Result<JointDensity, ModelError> {
        if !t.is_finite() {
            return Err(ModelError::NonFiniteTime { t });
        }
        let mut propagators: BTreeMap<i64, ComplexMatrix> = BTreeMap::new();
        for &n in self.spectral.keys() {
            propagators.insert(n, self.propagator(n, t));
        }
        let mut out = JointDensity::empty(self.initial.k);
        for (&(n, v), omega) in &self.initial.blocks {
            let un = &propagators[&n];
            let uv = &propagators[&v];
            out.blocks
                .insert((n, v), un.mul(omega).mul(&uv.adjoint()));
        }
        Ok(out)
    }
}

/// One-shot exact evolution; see [`Evolver`] for the time-series path.
pub fn evolve_exact(
    prep: &AtomPrep,
    field: &FieldState,
    params: &ModelParams,
    t: f64,
) -> Result<JointDensity, ModelError> {
    Evolver::new(prep, field, params)?.evolve_at(t)
}
