//! Dense complex matrices and the small eigensolvers the rest of the crate
//! builds on.
//!
//! Storage is row-major `Vec<Complex64>`. The matrices involved are small
//! (4x4 coupling blocks, field densities up to a few hundred square), so the
//! solvers favour determinism and accuracy over asymptotics: a cyclic complex
//! Jacobi iteration for Hermitian eigenproblems, an eigendecomposition-based
//! positive semidefinite square root, and a polished Durand-Kerner iteration
//! for the eigenvalues of a general (non-Hermitian) 4x4 matrix.

use num_complex::Complex64;
use thiserror::Error;

/// Absolute Hermiticity tolerance accepted by [`hermitian_eigen`].
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Most negative eigenvalue [`psd_sqrt`] accepts before declaring the input
/// indefinite. Anything in `[-PSD_EIGENVALUE_TOL, 0)` is clamped to zero.
pub const PSD_EIGENVALUE_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: entry ({i},{j}) vs ({j},{i}) deviates by {deviation:.3e}")]
    NotHermitian { i: usize, j: usize, deviation: f64 },
    #[error("matrix is not positive semidefinite: eigenvalue {value:.6e} < -{tol:.0e}")]
    NotPositiveSemidefinite { value: f64, tol: f64 },
    #[error("expected a 4x4 matrix, got {rows}x{cols}")]
    Not4x4 { rows: usize, cols: usize },
    #[error("root iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix by evaluating `f(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Builds a square matrix from nested row slices; panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n_rows = rows.len();
        let n_cols = if n_rows == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zeros(n_rows, n_cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n_cols, "ragged row {r}");
            for (c, v) in row.iter().enumerate() {
                m[(r, c)] = *v;
            }
        }
        m
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)].conj())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)] + other[(r, c)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)] - other[(r, c)])
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)] * factor)
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut worst = 0.0f64;
        for (a, b) in self.data.iter().zip(other.data.iter()) {
            worst = worst.max((a - b).norm());
        }
        worst
    }

    /// Worst Hermiticity deviation together with the offending index pair.
    pub fn hermiticity_deviation(&self) -> (usize, usize, f64) {
        let mut worst = (0, 0, 0.0f64);
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                if d > worst.2 {
                    worst = (i, j, d);
                }
            }
        }
        worst
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// Returns eigenvalues in ascending order and a unitary `V` whose columns are
/// the matching eigenvectors, so `M = V diag(w) V^dagger`. Input must be
/// Hermitian to within [`HERMITICITY_TOL`] (absolute, per entry); the worst
/// offending pair is reported otherwise. The iteration runs fixed (p, q)
/// sweeps until the off-diagonal Frobenius norm drops below
/// `1e-14 * max(1, ||M||_F)`, capped at 100 sweeps, and is fully
/// deterministic: identical input gives bit-identical output. Eigenvector
/// phases are fixed by making the largest-magnitude component of each column
/// real and positive.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix), LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let (i, j, dev) = m.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(LinalgError::NotHermitian { i, j, deviation: dev });
    }

    let n = m.rows;
    // Work on the exactly Hermitian part; the validated deviation is noise.
    let mut a = ComplexMatrix::from_fn(n, n, |r, c| {
        (m[(r, c)] + m[(c, r)].conj()) * Complex64::new(0.5, 0.0)
    });
    let mut v = ComplexMatrix::identity(n);
    let tol = 1e-14 * a.frobenius_norm().max(1.0);

    for _sweep in 0..100 {
        let mut off_sq = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off_sq += a[(p, q)].norm_sqr();
            }
        }
        if (2.0 * off_sq).sqrt() < tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r; // e^{i phi}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Rotation angle from cot(2 theta) = (app - aqq) / (2 r).
                let tau = (app - aqq) / (2.0 * r);
                let t = if tau.abs() > 1e150 {
                    1.0 / (2.0 * tau)
                } else {
                    let sgn = if tau >= 0.0 { 1.0 } else { -1.0 };
                    sgn / (tau.abs() + (tau * tau + 1.0).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // A <- G^dagger A G with G[p][p]=G[q][q]=c,
                // G[p][q] = -s e^{i phi}, G[q][p] = s e^{-i phi}.
                let new_pp = c * c * app + 2.0 * s * c * r + s * s * aqq;
                let new_qq = s * s * app - 2.0 * s * c * r + c * c * aqq;
                a[(p, p)] = Complex64::new(new_pp, 0.0);
                a[(q, q)] = Complex64::new(new_qq, 0.0);
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    let new_ip = aip * c + aiq * s * phase.conj();
                    let new_iq = -aip * s * phase + aiq * c;
                    a[(i, p)] = new_ip;
                    a[(i, q)] = new_iq;
                    a[(p, i)] = new_ip.conj();
                    a[(q, i)] = new_iq.conj();
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c + viq * s * phase.conj();
                    v[(i, q)] = -vip * s * phase + viq * c;
                }
            }
        }
    }

    // Ascending sort with a stable permutation applied to the columns of V.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.partial_cmp(&a[(y, y)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);

    // Phase convention: largest-magnitude component of each column is made
    // real positive (first index wins ties), so repeated runs agree exactly.
    for c in 0..n {
        let mut best = 0usize;
        let mut best_norm = 0.0f64;
        for r in 0..n {
            let nr = vectors[(r, c)].norm();
            if nr > best_norm {
                best_norm = nr;
                best = r;
            }
        }
        if best_norm > 0.0 {
            let ph = vectors[(best, c)] / best_norm;
            let correction = ph.conj();
            for r in 0..n {
                vectors[(r, c)] = vectors[(r, c)] * correction;
            }
        }
    }

    Ok((eigenvalues, vectors))
}

/// Hermitian positive semidefinite square root via eigendecomposition.
///
/// Eigenvalues in `[-1e-12, 0)` are treated as rounding noise and clamped to
/// zero; anything more negative is rejected as an indefinite input.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let (w, v) = hermitian_eigen(m)?;
    if let Some(&worst) = w.first() {
        if worst < -PSD_EIGENVALUE_TOL {
            return Err(LinalgError::NotPositiveSemidefinite {
                value: worst,
                tol: PSD_EIGENVALUE_TOL,
            });
        }
    }
    let n = m.rows;
    let mut scaled = ComplexMatrix::zeros(n, n);
    for c in 0..n {
        let root = w[c].max(0.0).sqrt();
        for r in 0..n {
            scaled[(r, c)] = v[(r, c)] * root;
        }
    }
    let s = scaled.mul(&v.adjoint());
    // Symmetrize away the last rounding noise; the result must be usable as
    // a Hermitian factor downstream.
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        (s[(r, c)] + s[(c, r)].conj()) * Complex64::new(0.5, 0.0)
    }))
}

fn poly_eval(coeffs: &[Complex64; 5], z: Complex64) -> Complex64 {
    // coeffs[i] multiplies z^(4-i); coeffs[0] = 1.
    let mut acc = coeffs[0];
    for c in coeffs.iter().skip(1) {
        acc = acc * z + c;
    }
    acc
}

fn poly_eval_deriv(coeffs: &[Complex64; 5], z: Complex64) -> Complex64 {
    let mut acc = coeffs[0] * 4.0;
    for (i, c) in coeffs.iter().enumerate().skip(1).take(3) {
        acc = acc * z + *c * (4 - i) as f64;
    }
    acc
}

/// Eigenvalues of a general (not necessarily Hermitian) 4x4 complex matrix.
///
/// The characteristic polynomial is formed from Newton's identities on
/// tr(M^p) and solved by a Durand-Kerner iteration with a deterministic
/// starting ring, then each root is polished with a few Newton steps. The
/// four roots are returned sorted by descending real part, ties broken by
/// descending imaginary part.
pub fn eigvals_general_4x4(m: &ComplexMatrix) -> Result<[Complex64; 4], LinalgError> {
    if m.rows != 4 || m.cols != 4 {
        return Err(LinalgError::Not4x4 {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let scale = m.max_abs();
    if scale == 0.0 {
        return Ok([Complex64::new(0.0, 0.0); 4]);
    }
    let b = m.scale(Complex64::new(1.0 / scale, 0.0));

    let b2 = b.mul(&b);
    let b3 = b2.mul(&b);
    let b4 = b3.mul(&b);
    let m1 = b.trace();
    let m2 = b2.trace();
    let m3 = b3.trace();
    let m4 = b4.trace();
    let e1 = m1;
    let e2 = (e1 * m1 - m2) / 2.0;
    let e3 = (e2 * m1 - e1 * m2 + m3) / 3.0;
    let e4 = (e3 * m1 - e2 * m2 + e1 * m3 - m4) / 4.0;
    // p(z) = z^4 - e1 z^3 + e2 z^2 - e3 z + e4
    let coeffs = [
        Complex64::new(1.0, 0.0),
        -e1,
        e2,
        -e3,
        e4,
    ];

    if coeffs[1..].iter().all(|c| c.norm() < 1e-14) {
        // Nilpotent to working precision: all eigenvalues zero.
        return Ok([Complex64::new(0.0, 0.0); 4]);
    }

    let radius = 1.0 + coeffs[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots = [Complex64::new(0.0, 0.0); 4];
    let mut z = seed;
    for root in roots.iter_mut() {
        *root = z * radius;
        z *= seed;
    }

    let max_iter = 500;
    let mut converged = false;
    for _ in 0..max_iter {
        let mut max_step = 0.0f64;
        for j in 0..4 {
            let zj = roots[j];
            let mut denom = Complex64::new(1.0, 0.0);
            for (i, zi) in roots.iter().enumerate() {
                if i != j {
                    let mut diff = zj - zi;
                    if diff.norm() == 0.0 {
                        diff = Complex64::new(1e-30, 0.0);
                    }
                    denom *= diff;
                }
            }
            let step = poly_eval(&coeffs, zj) / denom;
            roots[j] = zj - step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-15 * radius {
            converged = true;
            break;
        }
    }
    if !converged {
        // Multiple roots stall Durand-Kerner at a small plateau; accept the
        // cluster if residuals are already tiny, otherwise report failure.
        let worst = roots
            .iter()
            .map(|&z| poly_eval(&coeffs, z).norm())
            .fold(0.0, f64::max);
        if worst > 1e-8 * radius.powi(4).max(1.0) {
            return Err(LinalgError::NoConvergence {
                iterations: max_iter,
            });
        }
    }

    for root in roots.iter_mut() {
        for _ in 0..3 {
            let d = poly_eval_deriv(&coeffs, *root);
            if d.norm() < 1e-12 {
                break;
            }
            *root -= poly_eval(&coeffs, *root) / d;
        }
    }

    let mut out: Vec<Complex64> = roots.iter().map(|&z| z * scale).collect();
    out.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap()
            .then(b.im.partial_cmp(&a.im).unwrap())
    });
    Ok([out[0], out[1], out[2], out[3]])
}
