//! Single-mode field states: binomial, number and coherent preparations.
//!
//! The binomial state |eta, m> carries amplitudes b_n = sqrt(C(m,n) eta^n
//! (1-eta)^(m-n)) on the Fock ladder 0..=m. It interpolates between the
//! vacuum (eta = 0), a coherent-like state at fixed mean photon number
//! m*eta (small eta, large m) and the number state |m> (eta = 1). All
//! amplitude work runs in log space through ln_gamma so that m in the low
//! hundreds stays exact to double precision.

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::linalg::ComplexMatrix;

/// Largest truncation deficit 1 - sum |c_n|^2 a coherent preparation may
/// leave behind.
pub const COHERENT_DEFICIT_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("binomial parameter eta = {eta} outside [0, 1]")]
    EtaOutOfRange { eta: f64 },
    #[error("binomial parameter eta = {eta} is not finite")]
    EtaNotFinite { eta: f64 },
    #[error(
        "coherent truncation at n_max = {n_max} leaves deficit {deficit:.3e} > {tol:.0e}; use n_max >= {required}"
    )]
    TruncationDeficit {
        n_max: usize,
        deficit: f64,
        tol: f64,
        required: usize,
    },
}

/// How a field state was prepared.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldKind {
    Binomial { eta: f64, m: usize },
    Number { m: usize },
    Coherent { alpha: Complex64 },
}

/// Pure single-mode state on the truncated Fock ladder 0..=n_max.
#[derive(Debug, Clone)]
pub struct FieldState {
    /// Fock amplitudes, index n in 0..=n_max.
    pub amplitudes: Vec<Complex64>,
    /// Highest Fock index carried (amplitudes.len() - 1).
    pub n_max: usize,
    pub kind: FieldKind,
}

impl FieldState {
    /// Amplitude at Fock index q, zero outside the carried range. Accepts
    /// signed indices so shifted-ladder bookkeeping needs no branching.
    pub fn amp(&self, q: i64) -> Complex64 {
        if q < 0 || q as usize > self.n_max {
            Complex64::new(0.0, 0.0)
        } else {
            self.amplitudes[q as usize]
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn mean_photon(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(n, a)| n as f64 * a.norm_sqr())
            .sum()
    }

    pub fn photon_variance(&self) -> f64 {
        let mean = self.mean_photon();
        let second: f64 = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(n, a)| (n as f64) * (n as f64) * a.norm_sqr())
            .sum();
        second - mean * mean
    }
}

/// Binomial field state |eta, m>.
pub fn binomial_amplitudes(eta: f64, m: usize) -> Result<FieldState, FieldError> {
    if !eta.is_finite() {
        return Err(FieldError::EtaNotFinite { eta });
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(FieldError::EtaOutOfRange { eta });
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); m + 1];
    if eta == 0.0 {
        amplitudes[0] = Complex64::new(1.0, 0.0);
    } else if eta == 1.0 {
        amplitudes[m] = Complex64::new(1.0, 0.0);
    } else {
        let ln_eta = eta.ln();
        let ln_bar = (1.0 - eta).ln();
        let ln_m_fact = ln_gamma(m as f64 + 1.0);
        for (n, amp) in amplitudes.iter_mut().enumerate() {
            let ln_choose =
                ln_m_fact - ln_gamma(n as f64 + 1.0) - ln_gamma((m - n) as f64 + 1.0);
            let ln_prob = ln_choose + n as f64 * ln_eta + (m - n) as f64 * ln_bar;
            *amp = Complex64::new((0.5 * ln_prob).exp(), 0.0);
        }
    }
    Ok(FieldState {
        amplitudes,
        n_max: m,
        kind: FieldKind::Binomial { eta, m },
    })
}

/// Number state |m>.
pub fn number_state(m: usize) -> FieldState {
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); m + 1];
    amplitudes[m] = Complex64::new(1.0, 0.0);
    FieldState {
        amplitudes,
        n_max: m,
        kind: FieldKind::Number { m },
    }
}

/// Smallest n_max at which a coherent state |alpha> truncates with deficit
/// below [`COHERENT_DEFICIT_TOL`].
pub fn coherent_required_n_max(alpha: Complex64) -> usize {
    let lambda = alpha.norm_sqr();
    if lambda == 0.0 {
        return 0;
    }
    // Walk the Poisson weights until the remaining tail is small enough.
    let mut term = (-lambda).exp();
    let mut cumulative = term;
    let mut n = 0usize;
    while 1.0 - cumulative >= COHERENT_DEFICIT_TOL && n < 100_000 {
        n += 1;
        term *= lambda / n as f64;
        cumulative += term;
    }
    n
}

/// Coherent state |alpha> truncated at n_max.
///
/// The truncation must leave less than [`COHERENT_DEFICIT_TOL`] of the norm
/// behind; otherwise the call is rejected and the error names the smallest
/// acceptable n_max.
pub fn coherent_amplitudes(alpha: Complex64, n_max: usize) -> Result<FieldState, FieldError> {
    let lambda = alpha.norm_sqr();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); n_max + 1];
    if lambda == 0.0 {
        amplitudes[0] = Complex64::new(1.0, 0.0);
    } else {
        let ln_mod = alpha.norm().ln();
        let phase = alpha / alpha.norm();
        let mut rot = Complex64::new(1.0, 0.0);
        for (n, amp) in amplitudes.iter_mut().enumerate() {
            let ln_amp = -0.5 * lambda + n as f64 * ln_mod - 0.5 * ln_gamma(n as f64 + 1.0);
            *amp = rot * ln_amp.exp();
            rot *= phase;
        }
    }
    let deficit = 1.0 - amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>();
    if deficit >= COHERENT_DEFICIT_TOL {
        return Err(FieldError::TruncationDeficit {
            n_max,
            deficit,
            tol: COHERENT_DEFICIT_TOL,
            required: coherent_required_n_max(alpha),
        });
    }
    Ok(FieldState {
        amplitudes,
        n_max,
        kind: FieldKind::Coherent { alpha },
    })
}

/// Overlap fidelity |<a|b>|^2. States of different length are compared on
/// the union of their ladders.
pub fn fidelity(a: &FieldState, b: &FieldState) -> f64 {
    let len = a.amplitudes.len().min(b.amplitudes.len());
    let overlap: Complex64 = (0..len)
        .map(|n| a.amplitudes[n].conj() * b.amplitudes[n])
        .sum();
    overlap.norm_sqr()
}

/// Mixed state of the field mode, indexed by Fock number.
#[derive(Debug, Clone)]
pub struct FieldDensity {
    /// Density matrix in the Fock basis, (n_max + 1) square.
    pub matrix: ComplexMatrix,
}

impl FieldDensity {
    pub fn from_pure(state: &FieldState) -> Self {
        let n = state.amplitudes.len();
        let matrix = ComplexMatrix::from_fn(n, n, |r, c| {
            state.amplitudes[r] * state.amplitudes[c].conj()
        });
        FieldDensity { matrix }
    }

    pub fn n_max(&self) -> usize {
        self.matrix.rows.saturating_sub(1)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn mean_photon(&self) -> f64 {
        (0..self.matrix.rows)
            .map(|n| n as f64 * self.matrix[(n, n)].re)
            .sum()
    }
}
