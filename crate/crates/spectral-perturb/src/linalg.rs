//! Dense complex linear algebra: the kernel every other module builds on.
//!
//! Matrices are small-to-medium (n ≤ ~4096), dense, and always square for
//! spectral work. Eigenvalues, linear solves, and singular values delegate
//! to `faer`; the Hessenberg reduction and the shifted-Hessenberg smin
//! estimator used by grid sweeps are implemented here directly.
//!
//! Kernel calls are pinned to sequential execution inside `faer` so that
//! results are bit-identical regardless of how many worker threads the
//! caller uses for coarse-grained parallelism.

use faer::linalg::solvers::Solve;
use faer::{Mat, Par};
use num_complex::Complex64;
use std::sync::Once;

use crate::error::{Error, Result};

/// f64 unit roundoff.
pub const MACHINE_EPS: f64 = f64::EPSILON;

static KERNEL_INIT: Once = Once::new();

/// Pin faer to sequential mode. Coarse parallelism lives above the kernel.
fn ensure_sequential_kernel() {
    KERNEL_INIT.call_once(|| {
        faer::set_global_parallelism(Par::Seq);
    });
}

fn is_finite_c(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Dense square matrix of complex numbers, row-major storage.
///
/// Invariants: `n ≥ 1`, all entries finite. Constructors enforce both.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("matrix dimension must be at least 1"));
        }
        if data.len() != n * n {
            return Err(Error::input(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        if !data.iter().all(|&z| is_finite_c(z)) {
            return Err(Error::input("matrix entries must be finite"));
        }
        Ok(ComplexMatrix { n, data })
    }

    /// Build from a closure over (row, col). Entries must come out finite.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self::new(n, data)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(n, vec![Complex64::new(0.0, 0.0); n * n])
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn diagonal(entries: &[Complex64]) -> Result<Self> {
        let n = entries.len();
        Self::from_fn(n, |i, j| {
            if i == j {
                entries[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_conformal(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        ComplexMatrix::new(self.n, data)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_conformal(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        ComplexMatrix::new(self.n, data)
    }

    pub fn scale(&self, c: Complex64) -> Result<ComplexMatrix> {
        ComplexMatrix::new(self.n, self.data.iter().map(|a| a * c).collect())
    }

    /// `self * other`, cache-friendly ikj loop.
    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_conformal(other)?;
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row_b = &other.data[k * n..(k + 1) * n];
                let row_o = &mut out[i * n..(i + 1) * n];
                for j in 0..n {
                    row_o[j] += aik * row_b[j];
                }
            }
        }
        ComplexMatrix::new(n, out)
    }

    /// `self * v`.
    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if v.len() != self.n {
            return Err(Error::input("vector length does not match matrix dimension"));
        }
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += row[j] * v.entries()[j];
            }
            out[i] = acc;
        }
        ComplexVector::new(out)
    }

    /// `selfᵀ * v` (covector pushforward: (vᵀ·self)ᵀ).
    pub fn apply_transpose(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if v.len() != self.n {
            return Err(Error::input("vector length does not match matrix dimension"));
        }
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let vi = v.entries()[i];
            if vi == Complex64::new(0.0, 0.0) {
                continue;
            }
            let row = &self.data[i * n..(i + 1) * n];
            for j in 0..n {
                out[j] += vi * row[j];
            }
        }
        ComplexVector::new(out)
    }

    /// `λI − self`, the resolvent argument.
    pub fn shifted_from(&self, lambda: Complex64) -> ComplexMatrix {
        let n = self.n;
        let mut data: Vec<Complex64> = self.data.iter().map(|&z| -z).collect();
        for i in 0..n {
            data[i * n + i] += lambda;
        }
        ComplexMatrix { n, data }
    }

    pub fn transpose(&self) -> ComplexMatrix {
        let n = self.n;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        ComplexMatrix { n, data }
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        let n = self.n;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        ComplexMatrix { n, data }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max row sum of entry magnitudes.
    pub fn inf_norm(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                self.data[i * self.n..(i + 1) * self.n]
                    .iter()
                    .map(|z| z.norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn check_conformal(&self, other: &ComplexMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::input(format!(
                "dimension mismatch: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub(crate) fn to_faer(&self) -> Mat<Complex64> {
        Mat::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    fn validate_finite(&self) -> Result<()> {
        if self.data.iter().all(|&z| is_finite_c(z)) {
            Ok(())
        } else {
            Err(Error::input("matrix entries must be finite"))
        }
    }
}

/// Dense complex vector. Entries are kept finite by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(data: Vec<Complex64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::input("vector must have at least one entry"));
        }
        if !data.iter().all(|&z| is_finite_c(z)) {
            return Err(Error::input("vector entries must be finite"));
        }
        Ok(ComplexVector { data })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> Complex64) -> Result<Self> {
        Self::new((0..n).map(f).collect())
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn basis(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::input("basis index out of range"));
        }
        Self::from_fn(n, |i| {
            if i == k {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn ones(n: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(1.0, 0.0); n])
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> Complex64 {
        self.data[i]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn scale(&self, c: Complex64) -> ComplexVector {
        ComplexVector {
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Euclidean norm (conjugated inner product with itself).
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.norm() == 0.0)
    }
}

/// Bilinear pairing Σ φᵢ vᵢ — deliberately unconjugated.
///
/// Covectors act through the dual pairing, not the Hermitian inner
/// product, so τ-style functionals stay holomorphic in their argument.
pub fn pairing(phi: &ComplexVector, v: &ComplexVector) -> Result<Complex64> {
    if phi.len() != v.len() {
        return Err(Error::input("pairing length mismatch"));
    }
    Ok(phi
        .entries()
        .iter()
        .zip(v.entries())
        .map(|(a, b)| a * b)
        .sum())
}

/// Rank-one matrix u·φᵀ.
pub fn outer(u: &ComplexVector, phi: &ComplexVector) -> Result<ComplexMatrix> {
    if u.len() != phi.len() {
        return Err(Error::input("outer product length mismatch"));
    }
    let n = u.len();
    ComplexMatrix::from_fn(n, |i, j| u.get(i) * phi.get(j))
}

/// All eigenvalues of `m`, with algebraic multiplicity, in kernel order.
///
/// Backward-stable contract: each returned λ satisfies
/// `smin(λI − m) ≤ κ · ε · ‖m‖_F` with κ ≈ 100·n (checked in tests).
pub fn eig(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    ensure_sequential_kernel();
    m.validate_finite()?;
    m.to_faer()
        .eigenvalues()
        .map_err(|e| Error::numerical(format!("eigenvalue iteration failed: {e:?}")))
}

/// Solve `m · x = b` by partial-pivot LU.
///
/// Singularity rule: any pivot below `n · ε · ‖m‖_∞` raises
/// [`Error::Singular`]; a zero matrix is rejected outright.
pub fn solve(m: &ComplexMatrix, b: &ComplexVector) -> Result<ComplexVector> {
    ensure_sequential_kernel();
    m.validate_finite()?;
    if b.len() != m.dim() {
        return Err(Error::input("right-hand side length does not match matrix"));
    }
    let n = m.dim();
    let norm = m.inf_norm();
    if norm == 0.0 {
        return Err(Error::singular("zero matrix"));
    }
    let lu = m.to_faer().partial_piv_lu();
    let umat = lu.U();
    let pivot_min = (0..n).map(|i| umat[(i, i)].norm()).fold(f64::INFINITY, f64::min);
    let threshold = n as f64 * MACHINE_EPS * norm;
    if pivot_min < threshold {
        return Err(Error::singular(format!(
            "pivot {pivot_min:.3e} below threshold {threshold:.3e}"
        )));
    }
    let rhs = Mat::from_fn(n, 1, |i, _| b.get(i));
    let x = lu.solve(&rhs);
    ComplexVector::new((0..n).map(|i| x[(i, 0)]).collect())
}

/// Solve `m · X = B` column-wise for a matrix right-hand side.
pub fn solve_matrix(m: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_sequential_kernel();
    m.validate_finite()?;
    if b.dim() != m.dim() {
        return Err(Error::input("right-hand side dimension does not match matrix"));
    }
    let n = m.dim();
    let norm = m.inf_norm();
    if norm == 0.0 {
        return Err(Error::singular("zero matrix"));
    }
    let lu = m.to_faer().partial_piv_lu();
    let umat = lu.U();
    let pivot_min = (0..n).map(|i| umat[(i, i)].norm()).fold(f64::INFINITY, f64::min);
    let threshold = n as f64 * MACHINE_EPS * norm;
    if pivot_min < threshold {
        return Err(Error::singular(format!(
            "pivot {pivot_min:.3e} below threshold {threshold:.3e}"
        )));
    }
    let x = lu.solve(&b.to_faer());
    ComplexMatrix::from_fn(n, |i, j| x[(i, j)])
}

/// Smallest singular value of `m`; 0 iff `m` is singular within tolerance.
pub fn smin(m: &ComplexMatrix) -> Result<f64> {
    Ok(*singular_values(m)?
        .last()
        .expect("n >= 1 guarantees a singular value"))
}

/// All singular values of `m`, nonincreasing.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    ensure_sequential_kernel();
    m.validate_finite()?;
    m.to_faer()
        .singular_values()
        .map_err(|e| Error::numerical(format!("svd iteration failed: {e:?}")))
}

/// Matrix powers `[m⁰, m¹, …, m^n_max]`; `m⁰ = I`.
pub fn monomials(m: &ComplexMatrix, n_max: usize) -> Result<Vec<ComplexMatrix>> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(ComplexMatrix::identity(m.dim())?);
    for _ in 1..=n_max {
        let next = out.last().unwrap().matmul(m)?;
        out.push(next);
    }
    Ok(out)
}

/// Unitary reduction to upper Hessenberg form: `m = q · h · qᴴ`.
pub struct Hessenberg {
    pub h: ComplexMatrix,
    pub q: ComplexMatrix,
}

/// Householder reduction. O(n³) once; grid sweeps then pay O(n²) per point.
pub fn hessenberg(m: &ComplexMatrix) -> Result<Hessenberg> {
    m.validate_finite()?;
    let n = m.dim();
    let mut h = m.clone();
    let mut q = ComplexMatrix::identity(n)?;
    if n <= 2 {
        return Ok(Hessenberg { h, q });
    }
    let zero = Complex64::new(0.0, 0.0);
    for k in 0..n - 2 {
        // Reflector annihilating h[k+2.., k].
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h.get(i, k)).collect();
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let vnorm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sqr == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sqr;

        // Left: h ← (I − β v vᴴ) h on rows k+1.., columns k..n.
        for j in k..n {
            let mut dot = zero;
            for (t, vi) in v.iter().enumerate() {
                dot += vi.conj() * h.get(k + 1 + t, j);
            }
            dot *= beta;
            for (t, vi) in v.iter().enumerate() {
                let cur = h.get(k + 1 + t, j);
                h.set(k + 1 + t, j, cur - vi * dot);
            }
        }
        // Right: h ← h (I − β v vᴴ) on columns k+1.., all rows.
        for i in 0..n {
            let mut dot = zero;
            for (t, vi) in v.iter().enumerate() {
                dot += h.get(i, k + 1 + t) * vi;
            }
            dot *= beta;
            for (t, vi) in v.iter().enumerate() {
                let cur = h.get(i, k + 1 + t);
                h.set(i, k + 1 + t, cur - dot * vi.conj());
            }
        }
        // Accumulate q ← q (I − β v vᴴ).
        for i in 0..n {
            let mut dot = zero;
            for (t, vi) in v.iter().enumerate() {
                dot += q.get(i, k + 1 + t) * vi;
            }
            dot *= beta;
            for (t, vi) in v.iter().enumerate() {
                let cur = q.get(i, k + 1 + t);
                q.set(i, k + 1 + t, cur - dot * vi.conj());
            }
        }
        // Entries below the subdiagonal are now zero by construction.
        h.set(k + 1, k, alpha);
        for i in k + 2..n {
            h.set(i, k, zero);
        }
    }
    Ok(Hessenberg { h, q })
}

/// Solve `(λI − h)·x = rhs` for upper-Hessenberg `h` in O(n²) by
/// Givens QR with the rotations applied to the right-hand side.
pub fn solve_shifted_hessenberg(
    h: &ComplexMatrix,
    lambda: Complex64,
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let n = h.dim();
    if rhs.len() != n {
        return Err(Error::input("right-hand side length does not match matrix"));
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut r = vec![zero; n * n];
    for i in 0..n {
        for j in 0..n {
            r[i * n + j] = -h.get(i, j);
        }
        r[i * n + i] += lambda;
    }
    let mut b: Vec<Complex64> = rhs.to_vec();
    for k in 0..n.saturating_sub(1) {
        let a = r[k * n + k];
        let bb = r[(k + 1) * n + k];
        if bb.norm() == 0.0 {
            continue;
        }
        let rho = (a.norm_sqr() + bb.norm_sqr()).sqrt();
        let c = a / rho;
        let s = bb / rho;
        for j in k..n {
            let top = r[k * n + j];
            let bot = r[(k + 1) * n + j];
            r[k * n + j] = c.conj() * top + s.conj() * bot;
            r[(k + 1) * n + j] = -s * top + c * bot;
        }
        r[(k + 1) * n + k] = zero;
        let top = b[k];
        let bot = b[k + 1];
        b[k] = c.conj() * top + s.conj() * bot;
        b[k + 1] = -s * top + c * bot;
    }
    let scale = h.inf_norm() + lambda.norm();
    for i in 0..n {
        if r[i * n + i].norm() < n as f64 * MACHINE_EPS * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::singular("shifted Hessenberg matrix is numerically singular"));
        }
    }
    let mut x = vec![zero; n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        for j in i + 1..n {
            acc -= r[i * n + j] * x[j];
        }
        x[i] = acc / r[i * n + i];
    }
    Ok(x)
}

/// `smin(λI − h)` for an upper-Hessenberg `h`, in O(n²).
///
/// Givens QR of the shifted matrix followed by inverse iteration on
/// `RᴴR`. Accurate to a few digits, which is plenty for log₁₀ resolvent
/// fields; exactness is cross-checked against the SVD route in tests.
pub fn smin_shifted_hessenberg(h: &ComplexMatrix, lambda: Complex64) -> f64 {
    let n = h.dim();
    let zero = Complex64::new(0.0, 0.0);
    // r = λI − h, then Givens-triangularize in place.
    let mut r = vec![zero; n * n];
    for i in 0..n {
        for j in 0..n {
            r[i * n + j] = -h.get(i, j);
        }
        r[i * n + i] += lambda;
    }
    for k in 0..n.saturating_sub(1) {
        let a = r[k * n + k];
        let b = r[(k + 1) * n + k];
        let bn = b.norm();
        if bn == 0.0 {
            continue;
        }
        let rho = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let c = a / rho;
        let s = b / rho;
        for j in k..n {
            let top = r[k * n + j];
            let bot = r[(k + 1) * n + j];
            r[k * n + j] = c.conj() * top + s.conj() * bot;
            r[(k + 1) * n + j] = -s * top + c * bot;
        }
        r[(k + 1) * n + k] = zero;
    }

    let diag_min = (0..n).map(|i| r[i * n + i].norm()).fold(f64::INFINITY, f64::min);
    if diag_min < 1e-150 {
        return 0.0;
    }

    // Inverse iteration on RᴴR: each step solves Rᴴ y = v, R z = y.
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + 0.1 * ((i + 1) as f64).sin(), 0.0))
        .collect();
    let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= vn;
    }
    let mut est = f64::INFINITY;
    for _ in 0..32 {
        // Forward substitution with Rᴴ (lower triangular).
        let mut y = vec![zero; n];
        for i in 0..n {
            let mut acc = v[i];
            for j in 0..i {
                acc -= r[j * n + i].conj() * y[j];
            }
            y[i] = acc / r[i * n + i].conj();
        }
        // Back substitution with R.
        let mut z = vec![zero; n];
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= r[i * n + j] * z[j];
            }
            z[i] = acc / r[i * n + i];
        }
        let nu = z.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
        if !nu.is_finite() || nu == 0.0 {
            return 0.0;
        }
        let next = 1.0 / nu.sqrt();
        let done = (est - next).abs() <= 1e-10 * next;
        est = next;
        if done {
            break;
        }
        for (vi, zi) in v.iter_mut().zip(&z) {
            *vi = zi / nu;
        }
    }
    est
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn jordan_block(n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, |i, j| {
            if i == j + 1 {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        })
        .unwrap()
    }

    /// Plain Gaussian-elimination determinant, test-local oracle.
    fn det(m: &ComplexMatrix) -> Complex64 {
        let n = m.dim();
        let mut a: Vec<Complex64> = m.entries().to_vec();
        let mut det = c(1.0, 0.0);
        for k in 0..n {
            let (mut piv, mut pm) = (k, a[k * n + k].norm());
            for i in k + 1..n {
                if a[i * n + k].norm() > pm {
                    piv = i;
                    pm = a[i * n + k].norm();
                }
            }
            if pm == 0.0 {
                return c(0.0, 0.0);
            }
            if piv != k {
                for j in 0..n {
                    a.swap(k * n + j, piv * n + j);
                }
                det = -det;
            }
            det *= a[k * n + k];
            for i in k + 1..n {
                let f = a[i * n + k] / a[k * n + k];
                for j in k..n {
                    let sub = f * a[k * n + j];
                    a[i * n + j] -= sub;
                }
            }
        }
        det
    }

    #[test]
    fn eig_identity() {
        let m = ComplexMatrix::identity(3).unwrap();
        let evs = eig(&m).unwrap();
        assert_eq!(evs.len(), 3);
        for l in evs {
            assert!((l - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn eig_nilpotent_jordan() {
        let evs = eig(&jordan_block(4)).unwrap();
        for l in evs {
            assert!(l.norm() < 1e-10);
        }
    }

    #[test]
    fn eig_companion_of_z2_minus_1() {
        let m = ComplexMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let mut evs = eig(&m).unwrap();
        evs.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((evs[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((evs[1] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn eig_rejects_nonfinite() {
        assert!(ComplexMatrix::new(1, vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn eig_similarity_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let m = sample::gaussian_matrix(5, &mut rng).unwrap();
            // Well-conditioned similarity: identity plus a small Gaussian.
            let e = sample::gaussian_matrix(5, &mut rng).unwrap();
            let p = ComplexMatrix::identity(5)
                .unwrap()
                .add(&e.scale(c(0.2, 0.0)).unwrap())
                .unwrap();
            let pinv = solve_matrix(&p, &ComplexMatrix::identity(5).unwrap()).unwrap();
            let sim = p.matmul(&m).unwrap().matmul(&pinv).unwrap();
            let mut e1 = eig(&m).unwrap();
            let mut e2 = eig(&sim).unwrap();
            let key = |z: &Complex64| (z.re, z.im);
            e1.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
            e2.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
            for (a, b) in e1.iter().zip(&e2) {
                assert!((a - b).norm() < 1e-8 * (1.0 + m.frobenius_norm()));
            }
        }
    }

    #[test]
    fn eig_trace_and_det_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = sample::gaussian_matrix(6, &mut rng).unwrap();
            let evs = eig(&m).unwrap();
            let sum: Complex64 = evs.iter().sum();
            let prod: Complex64 = evs.iter().product();
            let scale = m.frobenius_norm();
            assert!((sum - m.trace()).norm() <= 6.0 * 1e-13 * scale.max(1.0));
            let d = det(&m);
            assert!((prod - d).norm() <= 1e-9 * d.norm().max(1.0));
        }
    }

    #[test]
    fn eig_backward_stability_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for &n in &[4usize, 16, 48] {
            let m = sample::gaussian_matrix(n, &mut rng).unwrap();
            let kappa = 100.0 * n as f64;
            for l in eig(&m).unwrap() {
                let s = smin(&m.shifted_from(l)).unwrap();
                assert!(
                    s <= kappa * MACHINE_EPS * m.frobenius_norm(),
                    "smin {s:.3e} too large at n={n}"
                );
            }
        }
    }

    #[test]
    fn solve_identity_and_diag() {
        let b = ComplexVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let x = solve(&ComplexMatrix::identity(2).unwrap(), &b).unwrap();
        assert!((x.get(0) - c(1.0, 0.0)).norm() < 1e-15);
        let d = ComplexMatrix::diagonal(&[c(2.0, 0.0), c(4.0, 0.0)]).unwrap();
        let x = solve(&d, &b).unwrap();
        assert!((x.get(0) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((x.get(1) - c(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn solve_zero_matrix_is_singular() {
        let m = ComplexMatrix::zeros(3).unwrap();
        let b = ComplexVector::ones(3).unwrap();
        assert!(matches!(solve(&m, &b), Err(Error::Singular(_))));
    }

    #[test]
    fn solve_residual_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let m = sample::gaussian_matrix(8, &mut rng).unwrap();
            let b = sample::gaussian_vector(8, &mut rng).unwrap();
            let x = solve(&m, &b).unwrap();
            let r: f64 = m
                .apply(&x)
                .unwrap()
                .entries()
                .iter()
                .zip(b.entries())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(r <= 1e-10 * m.frobenius_norm() * x.norm().max(1.0));
        }
    }

    #[test]
    fn smin_basics() {
        assert!((smin(&ComplexMatrix::identity(4).unwrap()).unwrap() - 1.0).abs() < 1e-14);
        let d = ComplexMatrix::diagonal(&[c(3.0, 0.0), c(0.5, 0.0)]).unwrap();
        assert!((smin(&d).unwrap() - 0.5).abs() < 1e-14);
        // rank-deficient e1 e2ᵀ
        let m = outer(
            &ComplexVector::basis(3, 0).unwrap(),
            &ComplexVector::basis(3, 1).unwrap(),
        )
        .unwrap();
        assert!(smin(&m).unwrap() < 1e-14);
    }

    #[test]
    fn smin_zero_iff_zero_eigenvalue_normal() {
        let d = ComplexMatrix::diagonal(&[c(0.0, 0.0), c(2.0, 0.0), c(-1.0, 3.0)]).unwrap();
        assert!(smin(&d).unwrap() < 1e-14);
        let evs = eig(&d).unwrap();
        assert!(evs.iter().any(|l| l.norm() < 1e-12));
        let d2 = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert!(smin(&d2).unwrap() > 0.5);
        assert!(eig(&d2).unwrap().iter().all(|l| l.norm() > 0.5));
    }

    #[test]
    fn monomials_basics() {
        let m = jordan_block(2);
        let ms = monomials(&m, 2).unwrap();
        assert_eq!(ms.len(), 3);
        assert_eq!(ms[0], ComplexMatrix::identity(2).unwrap());
        assert_eq!(ms[1], m);
        assert!(ms[2].frobenius_norm() == 0.0);

        let d = ComplexMatrix::diagonal(&[c(2.0, 0.0)]).unwrap();
        let ds = monomials(&d, 3).unwrap();
        let got: Vec<f64> = ds.iter().map(|p| p.get(0, 0).re).collect();
        assert_eq!(got, vec![1.0, 2.0, 4.0, 8.0]);

        let any = sample::gaussian_matrix(3, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let one = monomials(&any, 0).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0], ComplexMatrix::identity(3).unwrap());
    }

    #[test]
    fn hessenberg_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let m = sample::gaussian_matrix(12, &mut rng).unwrap();
        let hess = hessenberg(&m).unwrap();
        // structurally Hessenberg
        for i in 0..12 {
            for j in 0..i.saturating_sub(1) {
                assert_eq!(hess.h.get(i, j), c(0.0, 0.0));
            }
        }
        // q unitary
        let qtq = hess.q.adjoint().matmul(&hess.q).unwrap();
        let eye = ComplexMatrix::identity(12).unwrap();
        assert!(qtq.sub(&eye).unwrap().frobenius_norm() < 1e-12);
        // m = q h qᴴ
        let rec = hess.q.matmul(&hess.h).unwrap().matmul(&hess.q.adjoint()).unwrap();
        assert!(rec.sub(&m).unwrap().frobenius_norm() < 1e-12 * m.frobenius_norm());
    }

    #[test]
    fn smin_hessenberg_matches_svd() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..8 {
            let m = sample::gaussian_matrix(10, &mut rng).unwrap();
            let hess = hessenberg(&m).unwrap();
            let lambda = c(0.3, -0.7);
            let exact = smin(&m.shifted_from(lambda)).unwrap();
            let fast = smin_shifted_hessenberg(&hess.h, lambda);
            assert!(
                (fast - exact).abs() <= 1e-3 * exact.max(1e-12),
                "fast {fast:.6e} vs exact {exact:.6e}"
            );
        }
    }

    #[test]
    fn pairing_is_unconjugated() {
        let a = ComplexVector::new(vec![c(0.0, 1.0)]).unwrap();
        let b = ComplexVector::new(vec![c(0.0, 1.0)]).unwrap();
        assert!((pairing(&a, &b).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
    }
}
