//! Reductions of the joint density: two-qubit state, single-qubit
//! inversion, field mode and its Husimi Q distribution.

use num_complex::Complex64;
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::field::FieldDensity;
use crate::linalg::ComplexMatrix;
use crate::model::{psi_photon, psi_present, JointDensity, PSI_TWO_QUBIT_INDEX};

#[derive(Debug, Error)]
pub enum ObservablesError {
    #[error("two-qubit density must be 4x4, got {rows}x{cols}")]
    WrongShape { rows: usize, cols: usize },
    #[error("grid axis needs at least 2 points, got {points}")]
    DegenerateAxis { points: usize },
}

/// Two-qubit density matrix in the product basis
/// (|e1 e2>, |e1 g2>, |g1 e2>, |g1 g2>).
#[derive(Debug, Clone)]
pub struct TwoQubitDensity {
    pub matrix: ComplexMatrix,
}

impl TwoQubitDensity {
    pub fn new(matrix: ComplexMatrix) -> Result<Self, ObservablesError> {
        if matrix.rows != 4 || matrix.cols != 4 {
            return Err(ObservablesError::WrongShape {
                rows: matrix.rows,
                cols: matrix.cols,
            });
        }
        Ok(TwoQubitDensity { matrix })
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Partial trace onto one qubit (1 or 2), 2x2 in the (|e>, |g>) basis.
    pub fn reduce_to_qubit(&self, which: u8) -> ComplexMatrix {
        assert!(which == 1 || which == 2, "qubit index must be 1 or 2");
        let m = &self.matrix;
        let mut out = ComplexMatrix::zeros(2, 2);
        for a in 0..2 {
            for b in 0..2 {
                let mut sum = Complex64::new(0.0, 0.0);
                for c in 0..2 {
                    // Product index 2*q1 + q2 with e = 0, g = 1.
                    let (row, col) = if which == 1 {
                        (2 * a + c, 2 * b + c)
                    } else {
                        (2 * c + a, 2 * c + b)
                    };
                    sum += m[(row, col)];
                }
                out[(a, b)] = sum;
            }
        }
        out
    }
}

/// Field trace of the joint density: pairs equal photon indices across all
/// block pairs.
pub fn reduce_to_qubits(rho: &JointDensity) -> TwoQubitDensity {
    let k = rho.k();
    let mut m = ComplexMatrix::zeros(4, 4);
    for (&(n, v), omega) in rho.blocks() {
        for i in 0..4 {
            if !psi_present(i, n, k) {
                continue;
            }
            let qi = psi_photon(i, n, k);
            for z in 0..4 {
                if !psi_present(z, v, k) {
                    continue;
                }
                if psi_photon(z, v, k) == qi {
                    m[(PSI_TWO_QUBIT_INDEX[i], PSI_TWO_QUBIT_INDEX[z])] += omega[(i, z)];
                }
            }
        }
    }
    TwoQubitDensity { matrix: m }
}

/// Single-qubit reduction straight from the joint density.
pub fn reduce_to_qubit(rho: &JointDensity, which: u8) -> ComplexMatrix {
    reduce_to_qubits(rho).reduce_to_qubit(which)
}

/// Population inversion (1/2)(rho_ee - rho_gg) of one qubit.
pub fn inversion(rho: &JointDensity, which: u8) -> f64 {
    let r = reduce_to_qubit(rho, which);
    0.5 * (r[(0, 0)].re - r[(1, 1)].re)
}

/// Mean inversion of the two qubits.
pub fn total_inversion(rho: &JointDensity) -> f64 {
    0.5 * (inversion(rho, 1) + inversion(rho, 2))
}

/// Qubit trace of the joint density: Fock-basis field state.
pub fn reduce_to_field(rho: &JointDensity) -> FieldDensity {
    let k = rho.k();
    let dim = (rho.photon_max() + 1).max(1) as usize;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (&(n, v), omega) in rho.blocks() {
        for i in 0..4 {
            // Qubit components must match on both sides, so only the same
            // member index contributes.
            if !psi_present(i, n, k) || !psi_present(i, v, k) {
                continue;
            }
            let p = psi_photon(i, n, k) as usize;
            let q = psi_photon(i, v, k) as usize;
            m[(p, q)] += omega[(i, i)];
        }
    }
    FieldDensity { matrix: m }
}

/// Rectangular phase-space grid for Husimi Q evaluation.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub x_points: usize,
    pub y_min: f64,
    pub y_max: f64,
    pub y_points: usize,
}

impl Default for GridSpec {
    /// 201 x 201 points over [-12, 12]^2.
    fn default() -> Self {
        GridSpec {
            x_min: -12.0,
            x_max: 12.0,
            x_points: 201,
            y_min: -12.0,
            y_max: 12.0,
            y_points: 201,
        }
    }
}

impl GridSpec {
    pub fn square(half_extent: f64, points: usize) -> Self {
        GridSpec {
            x_min: -half_extent,
            x_max: half_extent,
            x_points: points,
            y_min: -half_extent,
            y_max: half_extent,
            y_points: points,
        }
    }

    fn axis(min: f64, max: f64, points: usize) -> Vec<f64> {
        let step = (max - min) / (points - 1) as f64;
        (0..points).map(|i| min + step * i as f64).collect()
    }
}

/// Husimi Q values on a grid, row-major over y then x:
/// `values[iy * x_axis.len() + ix]` is Q at (x_axis[ix], y_axis[iy]).
#[derive(Debug, Clone)]
pub struct QGrid {
    pub x_axis: Vec<f64>,
    pub y_axis: Vec<f64>,
    pub values: Vec<f64>,
    /// Set when the grid captures less than 99% of the state's mass
    /// (Riemann sum below 0.99).
    pub coverage_warning: bool,
}

impl QGrid {
    /// Riemann sum of the stored values; 1 for a grid that covers the state.
    pub fn riemann_sum(&self) -> f64 {
        if self.x_axis.len() < 2 || self.y_axis.len() < 2 {
            return 0.0;
        }
        let dx = self.x_axis[1] - self.x_axis[0];
        let dy = self.y_axis[1] - self.y_axis[0];
        self.values.iter().sum::<f64>() * dx * dy
    }
}

/// Coherent-state overlap vector <zeta|n> for n on the ladder, built in log
/// space so large grids and ladders stay finite.
fn coherent_row(zeta: Complex64, dim: usize) -> Vec<Complex64> {
    let mod_sq = zeta.norm_sqr();
    if mod_sq == 0.0 {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[0] = Complex64::new(1.0, 0.0);
        return v;
    }
    let ln_mod = zeta.norm().ln();
    let arg = zeta.arg();
    (0..dim)
        .map(|n| {
            let ln_amp = n as f64 * ln_mod - 0.5 * mod_sq - 0.5 * ln_gamma(n as f64 + 1.0);
            Complex64::from_polar(ln_amp.exp(), n as f64 * arg)
        })
        .collect()
}

/// Husimi Q(x, y) = <zeta| rho |zeta> / pi at zeta = x + i y over the grid.
///
/// The grid rows are evaluated in parallel; output ordering is fixed by the
/// grid alone, so results are deterministic.
pub fn husimi_q(rho: &FieldDensity, grid: &GridSpec) -> Result<QGrid, ObservablesError> {
    for points in [grid.x_points, grid.y_points] {
        if points < 2 {
            return Err(ObservablesError::DegenerateAxis { points });
        }
    }
    let x_axis = GridSpec::axis(grid.x_min, grid.x_max, grid.x_points);
    let y_axis = GridSpec::axis(grid.y_min, grid.y_max, grid.y_points);
    let dim = rho.matrix.rows;
    let inv_pi = 1.0 / std::f64::consts::PI;

    let values: Vec<f64> = y_axis
        .par_iter()
        .flat_map_iter(|&y| {
            let x_axis = &x_axis;
            x_axis.iter().map(move |&x| {
                let zeta = Complex64::new(x, y);
                let v = coherent_row(zeta, dim);
                // <zeta|rho|zeta> = v^dagger rho v, clamped against rounding.
                let mut q = 0.0;
                for r in 0..dim {
                    let vr = v[r].conj();
                    if vr.norm_sqr() == 0.0 {
                        continue;
                    }
                    let mut row_sum = Complex64::new(0.0, 0.0);
                    for c in 0..dim {
                        row_sum += rho.matrix[(r, c)] * v[c];
                    }
                    q += (vr * row_sum).re;
                }
                (q * inv_pi).max(0.0)
            })
        })
        .collect();

    let mut out = QGrid {
        x_axis,
        y_axis,
        values,
        coverage_warning: false,
    };
    out.coverage_warning = out.riemann_sum() < 0.99;
    Ok(out)
}
