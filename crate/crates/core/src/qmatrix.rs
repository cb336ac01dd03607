//! Dense square complex matrices and a cyclic Jacobi eigensolver for
//! Hermitian input.
//!
//! Everything here is sized for density matrices of at most a handful of
//! qubits, so storage is a flat row-major `Vec` with no sparsity tricks.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum entrywise deviation from `A = A†` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Off-diagonal Frobenius norm at which Jacobi sweeps stop.
const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Diagonal matrix with real entries.
    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from rows; every row must have as many entries as
    /// there are rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    /// Convenience constructor from real-valued rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Row-major flat data of length `dim * dim`.
    pub fn from_flat(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    /// Outer product `|a⟩⟨b|`.
    pub fn outer(a: &[Complex64], b: &[Complex64]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                found: b.len(),
            });
        }
        let dim = a.len();
        let mut data = Vec::with_capacity(dim * dim);
        for x in a {
            data.extend(b.iter().map(|y| x * y.conj()));
        }
        Ok(Self { dim, data })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Kronecker product: block `(i, j)` of the result is `self[i][j] * other`.
    pub fn tensor(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let (da, db) = (self.dim, other.dim);
        let dim = da * db;
        let mut out = Self::zeros(dim);
        for i in 0..da {
            for j in 0..da {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..db {
                    let row = (i * db + k) * dim + j * db;
                    for l in 0..db {
                        out.data[row + l] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj(&self) -> ComplexMatrix {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> ComplexMatrix {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// `U A U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<ComplexMatrix> {
        u.matmul(self)?.matmul(&u.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`; infinite on a
    /// dimension mismatch.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |A[i][j] - conj(A[j][i])|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_deviation() <= HERMITIAN_TOL
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        out
    }

    /// All eigenvalues of a Hermitian matrix, ascending, with multiplicity.
    ///
    /// The input is symmetrized before the sweeps start, so last-bit
    /// asymmetry from upstream arithmetic does not leak into the spectrum.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        let dev = self.hermitian_deviation();
        if !(dev <= HERMITIAN_TOL) {
            return Err(Error::NonHermitianInput(dev));
        }
        let mut a = self.hermitian_part();
        jacobi_diagonalize(&mut a)?;
        let mut eig: Vec<f64> = (0..a.dim).map(|i| a[(i, i)].re).collect();
        eig.sort_by(f64::total_cmp);
        Ok(eig)
    }

    /// Smallest eigenvalue of a Hermitian matrix.
    pub fn min_hermitian_eigenvalue(&self) -> Result<f64> {
        Ok(self
            .hermitian_eigenvalues()?
            .first()
            .copied()
            .unwrap_or(0.0))
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi: reduces a Hermitian matrix in place to (numerically)
/// diagonal form by a sequence of unitary plane rotations.
fn jacobi_diagonalize(a: &mut ComplexMatrix) -> Result<()> {
    let n = a.dim;
    let stop = JACOBI_OFF_TOL * a.frobenius_norm().max(1.0);
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(a) < stop {
            return Ok(());
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(a, p, q);
            }
        }
    }
    let off_norm = off_diagonal_norm(a);
    if off_norm < stop {
        Ok(())
    } else {
        Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
            off_norm,
        })
    }
}

/// Annihilates `a[p][q]` with `A <- U† A U`, where on the `(p, q)` plane
/// `U = [[c, s], [-s e*, c e*]]` and `e` is the phase of `a[p][q]`.
fn rotate(a: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag < f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / mag;
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let pc = phase.conj();
    let n = a.dim;

    // Columns: A <- A U.
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * pc * s;
        a[(k, q)] = akp * s + akq * pc * c;
    }
    // Rows: A <- U† A.
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * phase * s;
        a[(q, k)] = apk * s + aqk * phase * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix dimensions differ")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
