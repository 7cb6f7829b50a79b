//! Dense complex linear algebra for systems of at most a handful of qubits.
//!
//! Basis ordering is big-endian: subsystem 0 is the leftmost tensor factor
//! and the most significant digit of a basis index.

use std::ops::{Add, Index, IndexMut, Mul};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::Real;

/// Entrywise tolerance for the Hermitian check.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Allowed deviation of a density matrix trace from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_TOL, 0)` are treated as exact zeros.
pub const PSD_TOL: f64 = 1e-10;
/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// (relative to `max(1, ||A||_F)`).
pub const JACOBI_TOL: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Nonnegative eigenvalues at or below this (relative to the largest) are
/// rounding residue of an exact null space and are snapped to zero before
/// taking square roots.
pub const NULL_EIGEN_TOL: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        m
    }

    /// Builds a matrix from real row-major rows.
    pub fn from_real_rows(rows: &[&[T]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&v| Complex::new(v, T::zero())));
        Self::from_vec(r, c, data.collect())
    }

    /// `|a><b|`
    pub fn outer(a: &[Complex<T>], b: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(a.len(), b.len());
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                m[(i, j)] = ai * bj.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "{}x{} times {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Largest entrywise modulus of `self - self^dagger` (infinite if not square).
    pub fn hermitian_deviation(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut dev = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.matmul(rhs).expect("matrix shapes must agree")
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix shapes must agree"
        );
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a + b)
            .collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }
}

/// Kronecker product `a (x) b`.
pub fn tensor<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (ar, ac, br, bc) = (a.rows, a.cols, b.rows, b.cols);
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of two state vectors.
pub fn tensor_vec<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// Unit-trace Hermitian positive semidefinite matrix on a tensor product space.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    dims: Vec<usize>,
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity, unit trace and positivity (all within `1e-10`).
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix<T>) -> Result<Self> {
        let rho = Self::from_parts(dims, matrix)?;
        let dev = rho.matrix.hermitian_deviation();
        if dev > T::tol(HERMITIAN_TOL) {
            return Err(Error::NotHermitian {
                deviation: dev.as_f64(),
            });
        }
        let tr = rho.matrix.trace();
        if (tr.re - T::one()).abs() > T::tol(TRACE_TOL) || tr.im.abs() > T::tol(TRACE_TOL) {
            return Err(Error::Trace {
                trace: tr.re.as_f64(),
            });
        }
        let eig = hermitian_eig(&rho.matrix)?;
        if let Some(&min) = eig.values.last() {
            if min < -T::tol(PSD_TOL) {
                return Err(Error::NotPsd {
                    eigenvalue: min.as_f64(),
                });
            }
        }
        Ok(rho)
    }

    /// Shape checks only; callers guarantee the physical invariants.
    pub(crate) fn from_parts(dims: Vec<usize>, matrix: ComplexMatrix<T>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Dimension(format!(
                "invalid subsystem dimensions {dims:?}"
            )));
        }
        let side: usize = dims.iter().product();
        if matrix.rows != side || matrix.cols != side {
            return Err(Error::Dimension(format!(
                "dims {dims:?} need a {side}x{side} matrix, got {}x{}",
                matrix.rows, matrix.cols
            )));
        }
        Ok(Self { dims, matrix })
    }

    /// `|psi><psi|`; `psi` must be normalized within `1e-9`.
    pub fn from_pure(dims: Vec<usize>, psi: &[Complex<T>]) -> Result<Self> {
        let norm_sq: T = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - T::one()).abs() > T::tol(1e-9) {
            return Err(Error::Normalization {
                norm_sq: norm_sq.as_f64(),
            });
        }
        Self::from_parts(dims, ComplexMatrix::outer(psi, psi))
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let side: usize = dims.iter().product();
        let m = ComplexMatrix::identity(side).scale(T::one() / T::from_usize(side));
        Self::from_parts(dims, m)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn side(&self) -> usize {
        self.matrix.rows
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> T {
        // Hermitian: tr(rho^2) = sum |rho_ij|^2
        self.matrix.data.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Reduced state on the subsystems in `keep`, in their original relative order.
pub fn partial_trace<T: Real>(rho: &DensityMatrix<T>, keep: &[usize]) -> Result<DensityMatrix<T>> {
    let n = rho.dims.len();
    if keep.is_empty() {
        return Err(Error::Subsystems("keep set is empty".into()));
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    if kept.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Subsystems(format!("duplicate index in {keep:?}")));
    }
    if let Some(&bad) = kept.iter().find(|&&i| i >= n) {
        return Err(Error::Subsystems(format!(
            "index {bad} out of range for {n} subsystems"
        )));
    }
    let traced: Vec<usize> = (0..n).filter(|i| !kept.contains(i)).collect();

    // Row-major strides of the full space.
    let mut strides = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * rho.dims[i + 1];
    }
    let offsets = |subsystems: &[usize]| -> Vec<usize> {
        let mut out = vec![0usize];
        for &s in subsystems {
            let stride = strides[s];
            out = out
                .iter()
                .flat_map(|&base| (0..rho.dims[s]).map(move |d| base + d * stride))
                .collect();
        }
        out
    };
    let kept_off = offsets(&kept);
    let traced_off = offsets(&traced);

    let side = kept_off.len();
    let mut out = ComplexMatrix::zeros(side, side);
    for (a, &ka) in kept_off.iter().enumerate() {
        for (b, &kb) in kept_off.iter().enumerate() {
            out[(a, b)] = traced_off
                .iter()
                .map(|&t| rho.matrix[(ka + t, kb + t)])
                .sum();
        }
    }
    let dims = kept.iter().map(|&i| rho.dims[i]).collect();
    DensityMatrix::from_parts(dims, out)
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Eigen<T> {
    /// Eigenvalues, descending.
    pub values: Vec<T>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> Eigen<T> {
    /// `V diag(f(lambda)) V^dagger`.
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            if w == T::zero() {
                continue;
            }
            for i in 0..n {
                let vik = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
pub fn hermitian_eig<T: Real>(h: &ComplexMatrix<T>) -> Result<Eigen<T>> {
    let dev = h.hermitian_deviation();
    if dev > T::tol(HERMITIAN_TOL) {
        return Err(Error::NotHermitian {
            deviation: dev.as_f64(),
        });
    }
    let n = h.rows;
    let mut a = h.clone();
    // Symmetrize away the tolerated asymmetry; diagonal is real.
    for i in 0..n {
        a[(i, i)] = Complex::new(a[(i, i)].re, T::zero());
        for j in i + 1..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * T::lit(0.5);
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let threshold = T::tol(JACOBI_TOL) * a.frobenius_norm().max(T::one());

    let off_norm = |a: &ComplexMatrix<T>| -> T {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == T::zero() {
                    continue;
                }
                // Phase-rotate a_pq onto the positive real axis, then apply a
                // real Jacobi rotation annihilating it.
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (r + r);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                let cz = Complex::new(c, T::zero());
                let sz = Complex::new(s, T::zero());
                // J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on the (p, q) plane.
                let jpp = cz;
                let jpq = sz;
                let jqp = -sz * phase.conj();
                let jqq = cz * phase.conj();

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = Complex::new(T::zero(), T::zero());
                a[(q, p)] = Complex::new(T::zero(), T::zero());
                a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
                a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
        converged = off_norm(&a) <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(j, j)]
            .re
            .partial_cmp(&a[(i, i)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, new)] = v[(k, old)];
        }
    }
    Ok(Eigen { values, vectors })
}

/// Eigenvalues of a PSD matrix with rounding residue cleaned up: values in
/// `[-1e-10, 0)` and values within the null-space noise floor become 0.
pub(crate) fn psd_eig<T: Real>(rho: &ComplexMatrix<T>) -> Result<Eigen<T>> {
    let mut eig = hermitian_eig(rho)?;
    let top = eig
        .values
        .first()
        .copied()
        .unwrap_or_else(T::zero)
        .max(T::one());
    let floor = T::tol(NULL_EIGEN_TOL) * top;
    for lam in eig.values.iter_mut() {
        if *lam < -T::tol(PSD_TOL) {
            return Err(Error::NotPsd {
                eigenvalue: lam.as_f64(),
            });
        }
        if *lam <= floor {
            *lam = T::zero();
        }
    }
    Ok(eig)
}

/// Hermitian PSD square root `S` with `S S = rho`.
pub fn psd_sqrt<T: Real>(rho: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    Ok(psd_eig(rho)?.reconstruct_with(|l| l.sqrt()))
}
