//! Dense complex linear algebra at desk scale.
//!
//! Everything above this module manipulates square operators on a few
//! dimensions; the kernel therefore keeps a single dense row-major storage
//! and uses a cyclic Jacobi eigensolver for every decomposition. Hermitian
//! (and skew-Hermitian) inputs take the specialized eigenvalue route; other
//! matrices fall back to singular values of `A†A`.
//!
//! Index convention: tensor products are first-factor-major, i.e. the
//! composite row index of `a ⊗ b` is `i_a * dim(b) + i_b`. The partial trace
//! and every reconstruction in the crate rely on this ordering.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

// Load-bearing on targets without std's inherent f64 math methods.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub type Complex64 = num_complex::Complex<f64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, ONE);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from rows, checking squareness.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                context: "from_rows",
                expected: 1,
                found: 0,
            });
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    context: "from_rows",
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i))
    }

    pub fn conjugate(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(i, j).conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        self.scale_complex(Complex64::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Max-entry distance to the adjoint; zero for Hermitian matrices.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// Hermitian part `(A + A†)/2`.
    pub fn hermitized(&self) -> Self {
        Self::from_fn(self.dim, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        })
    }

    /// Positive-semidefiniteness within `tol`, checked on the spectrum.
    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        let eig = eigh(self);
        eig.eigenvalues.iter().all(|&l| l >= -tol)
    }

    pub fn mat_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "mat_vec dimension mismatch");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    fn mat_mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.mat_mul(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(-1.0)
    }
}

/// `u v†` outer product of two equal-length vectors.
pub fn outer(u: &[Complex64], v: &[Complex64]) -> ComplexMatrix {
    assert_eq!(u.len(), v.len(), "outer product length mismatch");
    ComplexMatrix::from_fn(u.len(), |i, j| u[i] * v[j].conj())
}

/// `⟨u|v⟩` with the conjugation on the first argument.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
}

pub fn basis_ket(dim: usize, index: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; dim];
    v[index] = ONE;
    v
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![ZERO, ONE],
        vec![ONE, ZERO],
    ])
    .expect("static 2x2")
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![ZERO, Complex64::new(0.0, -1.0)],
        vec![Complex64::new(0.0, 1.0), ZERO],
    ])
    .expect("static 2x2")
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![ONE, ZERO],
        vec![ZERO, Complex64::new(-1.0, 0.0)],
    ])
    .expect("static 2x2")
}

/// Kronecker product with first-factor-major ordering: the composite index
/// of `a ⊗ b` is `i_a * dim(b) + i_b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    let mut out = ComplexMatrix::zeros(da * db);
    for ia in 0..da {
        for ja in 0..da {
            let f = a.get(ia, ja);
            if f == ZERO {
                continue;
            }
            for ib in 0..db {
                for jb in 0..db {
                    out.set(ia * db + ib, ja * db + jb, f * b.get(ib, jb));
                }
            }
        }
    }
    out
}

/// Trace over the first tensor factor: `out[i][j] = Σ_k m[(k,i),(k,j)]`.
pub fn partial_trace_first(m: &ComplexMatrix, da: usize, db: usize) -> Result<ComplexMatrix> {
    if m.dim() != da * db {
        return Err(Error::DimensionMismatch {
            context: "partial_trace_first",
            expected: da * db,
            found: m.dim(),
        });
    }
    let mut out = ComplexMatrix::zeros(db);
    for i in 0..db {
        for j in 0..db {
            let mut s = ZERO;
            for k in 0..da {
                s += m.get(k * db + i, k * db + j);
            }
            out.set(i, j, s);
        }
    }
    Ok(out)
}

/// `ab - ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            context: "commutator",
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(&(a * b) - &(b * a))
}

/// Eigendecomposition of a Hermitian matrix; eigenvalues ascending, columns
/// of `eigenvectors` are the matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Eigendecomposition {
    pub fn eigenvector(&self, t: usize) -> Vec<Complex64> {
        (0..self.eigenvectors.dim())
            .map(|i| self.eigenvectors.get(i, t))
            .collect()
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// The input is hermitized first, so tiny anti-Hermitian rounding noise is
/// tolerated. Deterministic: a fixed sweep order and no pivot search.
pub fn eigh(m: &ComplexMatrix) -> Eigendecomposition {
    let n = m.dim();
    let mut a = m.hermitized();
    let mut v = ComplexMatrix::identity(n);

    let fro = a.frobenius_norm();
    if fro > 0.0 {
        let threshold = fro * f64::EPSILON * n as f64;
        let skip = fro * 1e-18;
        for _sweep in 0..100 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a.get(p, q).norm_sqr();
                }
            }
            if (2.0 * off).sqrt() <= threshold {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    let mag = apq.norm();
                    if mag <= skip {
                        a.set(p, q, ZERO);
                        a.set(q, p, ZERO);
                        continue;
                    }
                    // Unitary pivot U: identity outside rows/cols (p, q) with
                    //   U[p][p] = c, U[p][q] = s,
                    //   U[q][p] = -s φ*, U[q][q] = c φ*,  φ = apq / |apq|.
                    // U† A U zeroes the (p, q) entry.
                    let phase = apq / mag;
                    let tau = (a.get(q, q).re - a.get(p, p).re) / (2.0 * mag);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let phase_conj = phase.conj();

                    // Right multiplication: columns p, q of A and V.
                    for r in 0..n {
                        let arp = a.get(r, p);
                        let arq = a.get(r, q);
                        a.set(r, p, arp * c - arq * (phase_conj * s));
                        a.set(r, q, arp * s + arq * (phase_conj * c));

                        let vrp = v.get(r, p);
                        let vrq = v.get(r, q);
                        v.set(r, p, vrp * c - vrq * (phase_conj * s));
                        v.set(r, q, vrp * s + vrq * (phase_conj * c));
                    }
                    // Left multiplication by U†: rows p, q of A.
                    for col in 0..n {
                        let apc = a.get(p, col);
                        let aqc = a.get(q, col);
                        a.set(p, col, apc * c - aqc * (phase * s));
                        a.set(q, col, apc * s + aqc * (phase * c));
                    }
                    a.set(p, q, ZERO);
                    a.set(q, p, ZERO);
                    let app = a.get(p, p);
                    let aqq = a.get(q, q);
                    a.set(p, p, Complex64::new(app.re, 0.0));
                    a.set(q, q, Complex64::new(aqq.re, 0.0));
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(i, i)
            .re
            .partial_cmp(&a.get(j, j).re)
            .expect("eigenvalues are finite")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, t| v.get(i, order[t]));
    Eigendecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Hermitian PSD square root via eigendecomposition.
///
/// Eigenvalues in `[-tol, 0]` are clamped to zero; anything below `-tol`
/// raises [`Error::NegativeEigenvalue`].
pub fn herm_sqrt(a: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let dev = a.hermiticity_deviation();
    if dev > tol.max(1e-12 * a.max_abs().max(1.0)) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let eig = eigh(a);
    let n = a.dim();
    let mut roots = Vec::with_capacity(n);
    for &l in &eig.eigenvalues {
        if l < -tol {
            return Err(Error::NegativeEigenvalue { value: l });
        }
        roots.push(l.max(0.0).sqrt());
    }
    let mut out = ComplexMatrix::zeros(n);
    for t in 0..n {
        if roots[t] == 0.0 {
            continue;
        }
        let col = eig.eigenvector(t);
        for i in 0..n {
            for j in 0..n {
                let v = out.get(i, j) + col[i] * col[j].conj() * roots[t];
                out.set(i, j, v);
            }
        }
    }
    Ok(out)
}

/// Column-orthonormal `rows × cols` map from a subspace into the full space.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>, // row-major
}

impl Isometry {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = ONE;
        }
        Self {
            rows: dim,
            cols: dim,
            data,
        }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Complex64>]) -> Self {
        let cols = columns.len();
        assert!(cols > 0 && columns.iter().all(|c| c.len() == rows));
        let mut data = vec![ZERO; rows * cols];
        for (t, col) in columns.iter().enumerate() {
            for i in 0..rows {
                data[i * cols + t] = col[i];
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, t: usize) -> Complex64 {
        self.data[i * self.cols + t]
    }

    /// `V† M V`: restricts a `rows × rows` operator to the subspace.
    pub fn compress(&self, m: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(m.dim(), self.rows, "compress dimension mismatch");
        ComplexMatrix::from_fn(self.cols, |s, t| {
            let mut acc = ZERO;
            for i in 0..self.rows {
                for j in 0..self.rows {
                    acc += self.get(i, s).conj() * m.get(i, j) * self.get(j, t);
                }
            }
            acc
        })
    }

    /// `V M V†`: embeds a `cols × cols` operator back into the full space.
    pub fn embed(&self, m: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(m.dim(), self.cols, "embed dimension mismatch");
        ComplexMatrix::from_fn(self.rows, |i, j| {
            let mut acc = ZERO;
            for s in 0..self.cols {
                for t in 0..self.cols {
                    acc += self.get(i, s) * m.get(s, t) * self.get(j, t).conj();
                }
            }
            acc
        })
    }

    /// `V x` for a subspace vector `x`.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols, "apply dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|t| self.get(i, t) * x[t]).sum())
            .collect()
    }
}

/// Inverse square root of a Hermitian PSD matrix on its support.
#[derive(Debug, Clone)]
pub struct SupportInverseSqrt {
    /// `support_dim × support_dim` inverse square root in support coordinates.
    pub inv_sqrt: ComplexMatrix,
    pub support_dim: usize,
    /// Columns are the support eigenvectors, largest eigenvalue first.
    pub isometry: Isometry,
    /// Support eigenvalues, descending.
    pub support_eigenvalues: Vec<f64>,
}

impl SupportInverseSqrt {
    /// Moore–Penrose inverse square root embedded in the full space.
    pub fn embedded(&self) -> ComplexMatrix {
        self.isometry.embed(&self.inv_sqrt)
    }
}

/// Pseudo-inverse square root with relative support threshold
/// `tol · λ_max`; eigenvalues at or below it count as zero.
pub fn pinv_sqrt(a: &ComplexMatrix, tol: f64) -> Result<SupportInverseSqrt> {
    let dev = a.hermiticity_deviation();
    if dev > tol.max(1e-12 * a.max_abs().max(1.0)) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let eig = eigh(a);
    let lambda_max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    if lambda_max <= 0.0 {
        return Err(Error::ZeroOperator);
    }
    let threshold = tol * lambda_max;
    if let Some(&min) = eig
        .eigenvalues
        .iter()
        .filter(|&&l| l < -threshold)
        .reduce(|a, b| if a < b { a } else { b })
    {
        return Err(Error::NegativeEigenvalue { value: min });
    }

    // Support columns, descending eigenvalue.
    let n = a.dim();
    let mut support: Vec<usize> = (0..n)
        .filter(|&t| eig.eigenvalues[t] > threshold)
        .collect();
    support.reverse();
    if support.is_empty() {
        return Err(Error::ZeroOperator);
    }
    let columns: Vec<Vec<Complex64>> = support.iter().map(|&t| eig.eigenvector(t)).collect();
    let support_eigenvalues: Vec<f64> = support.iter().map(|&t| eig.eigenvalues[t]).collect();
    let k = support.len();
    let mut inv_sqrt = ComplexMatrix::zeros(k);
    for (t, &l) in support_eigenvalues.iter().enumerate() {
        inv_sqrt.set(t, t, Complex64::new(1.0 / l.sqrt(), 0.0));
    }
    Ok(SupportInverseSqrt {
        inv_sqrt,
        support_dim: k,
        isometry: Isometry::from_columns(n, &columns),
        support_eigenvalues,
    })
}

/// Singular values, descending.
///
/// Hermitian inputs use `|eigenvalues|` directly, skew-Hermitian inputs the
/// same route on `iA`; everything else goes through the spectrum of `A†A`.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let scale = a.max_abs();
    let n = a.dim();
    if scale == 0.0 {
        return vec![0.0; n];
    }
    let detect = 1e-12 * scale;
    let mut vals: Vec<f64> = if a.hermiticity_deviation() <= detect {
        eigh(a).eigenvalues.iter().map(|l| l.abs()).collect()
    } else {
        let skew_dev = {
            let mut dev: f64 = 0.0;
            for i in 0..n {
                for j in i..n {
                    dev = dev.max((a.get(i, j) + a.get(j, i).conj()).norm());
                }
            }
            dev
        };
        if skew_dev <= detect {
            let rotated = a.scale_complex(Complex64::new(0.0, 1.0));
            eigh(&rotated).eigenvalues.iter().map(|l| l.abs()).collect()
        } else {
            let gram = &a.adjoint() * a;
            eigh(&gram)
                .eigenvalues
                .iter()
                .map(|l| l.max(0.0).sqrt())
                .collect()
        }
    };
    vals.sort_by(|x, y| y.partial_cmp(x).expect("finite singular values"));
    vals
}

/// Schatten p-norm over singular values; `p = ∞` gives the largest one.
pub fn schatten_norm(a: &ComplexMatrix, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidNormOrder { p });
    }
    let svals = singular_values(a);
    let top = svals[0];
    if top == 0.0 {
        return Ok(0.0);
    }
    if p.is_infinite() {
        return Ok(top);
    }
    let sum: f64 = svals.iter().map(|&s| (s / top).powf(p)).sum();
    Ok(top * sum.powf(1.0 / p))
}
