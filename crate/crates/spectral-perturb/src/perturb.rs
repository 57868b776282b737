//! The perturbation engine.
//!
//! Everything here revolves around one membership criterion: for
//! `λ ∉ σ(x)`,
//!
//! ```text
//! λ ∈ σ(x + y)  ⟺  1 ∈ σ((λ − x)⁻¹ y)
//! ```
//!
//! For rank-one `y = P/β` the right-hand side collapses to a scalar
//! equation `f(λ) = β` in the resolvent function
//! `f(λ) = τ_P((λ − x)⁻¹)`, whose Laurent coefficients at infinity are
//! `c_j = τ_P(xʲ)`. Level sets of `f`, moment-constrained functionals
//! that park a high-order zero inside a spectral hole, and the β-sweep
//! discontinuity probe are all built on this identity.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, outer, pairing, ComplexMatrix, ComplexVector};
use crate::socle::RankOneOperator;
use crate::spectra::{self, SpectrumSet, Window};

/// Absolute robust-distance floor used when an operation has no explicit
/// tolerance argument: resolvent evaluations require
/// `dist(λ, σ(x)) > 10 · RESOLVENT_TOL`.
pub const RESOLVENT_TOL: f64 = 1e-9;

/// Residual bound accepted level-set roots must satisfy:
/// `|f(λ) − β| ≤ LEVEL_SET_RESIDUAL · (1 + |β|)`.
pub const LEVEL_SET_RESIDUAL: f64 = 1e-8;

/// Moment residual bound guaranteed by `hole_filling_functional`.
pub const MOMENT_RESIDUAL: f64 = 1e-10;

/// Newton iteration cap for level-set refinement.
pub const NEWTON_MAX_ITERS: usize = 50;

/// Cluster tolerance used when an operation produces spectra without an
/// explicit tolerance argument.
pub fn default_cluster_tol(scale: f64) -> f64 {
    1e-9 * scale.max(1.0)
}

/// Two sides of the membership criterion at one point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CriterionCheck {
    /// `dist(λ, σ(x+y)) ≤ tol`
    pub lhs: bool,
    /// `dist(1, σ((λ−x)⁻¹y)) ≤ tol`
    pub rhs: bool,
}

/// Evaluate both sides of the membership criterion; they agree whenever
/// the precondition `dist(λ, σ(x)) > 10·tol` holds.
pub fn criterion(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    lambda: Complex64,
    tol: f64,
) -> Result<CriterionCheck> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::input("tolerance must be finite and positive"));
    }
    if x.dim() != y.dim() {
        return Err(Error::input("dimension mismatch"));
    }
    let eig_x = linalg::eig(x)?;
    let dist_x = eig_x
        .iter()
        .map(|l| (l - lambda).norm())
        .fold(f64::INFINITY, f64::min);
    if dist_x <= 10.0 * tol {
        return Err(Error::Precondition(format!(
            "λ = {lambda} is within {dist_x:.3e} of σ(x); need more than {:.3e}",
            10.0 * tol
        )));
    }
    let lhs = linalg::eig(&x.add(y)?)?
        .iter()
        .any(|l| (l - lambda).norm() <= tol);
    let resolvent_y = linalg::solve_matrix(&x.shifted_from(lambda), y)?;
    let one = Complex64::new(1.0, 0.0);
    let rhs = linalg::eig(&resolvent_y)?
        .iter()
        .any(|l| (l - one).norm() <= tol);
    Ok(CriterionCheck { lhs, rhs })
}

/// Reusable evaluator for `f(λ) = τ_P((λ − x)⁻¹)`.
///
/// Construction pays one Hessenberg reduction and one eigensolve of `x`;
/// each evaluation is then O(n²). With `x = Q H Qᴴ`,
/// `f(λ) = ψᵀ (λ − H)⁻¹ w` for `ψ = Qᵀφ`, `w = Qᴴ u`.
pub struct ScalarResolvent {
    hess: ComplexMatrix,
    psi: Vec<Complex64>,
    w: Vec<Complex64>,
    eigs_x: Vec<Complex64>,
}

impl ScalarResolvent {
    pub fn new(x: &ComplexMatrix, p: &RankOneOperator) -> Result<Self> {
        if x.dim() != p.dim() {
            return Err(Error::input("dimension mismatch"));
        }
        let eigs_x = linalg::eig(x)?;
        let hess = linalg::hessenberg(x)?;
        let psi = hess.q.apply_transpose(p.phi())?;
        let w = hess.q.adjoint().apply(p.u())?;
        Ok(ScalarResolvent {
            hess: hess.h,
            psi: psi.entries().to_vec(),
            w: w.entries().to_vec(),
            eigs_x,
        })
    }

    pub fn eigenvalues_of_x(&self) -> &[Complex64] {
        &self.eigs_x
    }

    pub fn dist_to_spectrum(&self, lambda: Complex64) -> f64 {
        self.eigs_x
            .iter()
            .map(|l| (l - lambda).norm())
            .fold(f64::INFINITY, f64::min)
    }

    fn check_precondition(&self, lambda: Complex64) -> Result<()> {
        let d = self.dist_to_spectrum(lambda);
        if d <= 10.0 * RESOLVENT_TOL {
            return Err(Error::Precondition(format!(
                "λ = {lambda} is within {d:.3e} of σ(x)"
            )));
        }
        Ok(())
    }

    /// `f(λ)`.
    pub fn eval(&self, lambda: Complex64) -> Result<Complex64> {
        self.check_precondition(lambda)?;
        let v = linalg::solve_shifted_hessenberg(&self.hess, lambda, &self.w)?;
        Ok(self.psi.iter().zip(&v).map(|(a, b)| a * b).sum())
    }

    /// `(f(λ), f'(λ))`; the derivative is `−ψᵀ (λ−H)⁻² w`.
    pub fn eval_with_derivative(&self, lambda: Complex64) -> Result<(Complex64, Complex64)> {
        self.check_precondition(lambda)?;
        let v = linalg::solve_shifted_hessenberg(&self.hess, lambda, &self.w)?;
        let g = linalg::solve_shifted_hessenberg(&self.hess, lambda, &v)?;
        let f: Complex64 = self.psi.iter().zip(&v).map(|(a, b)| a * b).sum();
        let fp: Complex64 = -self.psi.iter().zip(&g).map(|(a, b)| a * b).sum::<Complex64>();
        Ok((f, fp))
    }
}

/// One-shot evaluation of `f(λ) = φᵀ (λI − x)⁻¹ u`.
///
/// Requires `dist(λ, σ(x)) > 10·`[`RESOLVENT_TOL`]. Callers evaluating
/// many λ should build a [`ScalarResolvent`] instead.
pub fn resolvent_scalar(
    x: &ComplexMatrix,
    p: &RankOneOperator,
    lambda: Complex64,
) -> Result<Complex64> {
    if x.dim() != p.dim() {
        return Err(Error::input("dimension mismatch"));
    }
    let eigs = linalg::eig(x)?;
    let dist = eigs
        .iter()
        .map(|l| (l - lambda).norm())
        .fold(f64::INFINITY, f64::min);
    if dist <= 10.0 * RESOLVENT_TOL {
        return Err(Error::Precondition(format!(
            "λ = {lambda} is within {dist:.3e} of σ(x)"
        )));
    }
    let v = linalg::solve(&x.shifted_from(lambda), p.u())?;
    pairing(p.phi(), &v)
}

fn fnv1a64(init: u64, bytes: &[u8]) -> u64 {
    let mut h = init;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn fingerprint_of(x: &ComplexMatrix, p: &RankOneOperator) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for z in x
        .entries()
        .iter()
        .chain(p.u().entries())
        .chain(p.phi().entries())
    {
        h = fnv1a64(h, &z.re.to_bits().to_le_bytes());
        h = fnv1a64(h, &z.im.to_bits().to_le_bytes());
    }
    h
}

/// Coefficients `c_j = τ_P(xʲ) = φᵀ xʲ u` of the resolvent's expansion
/// at infinity: `f(λ) = Σ c_j / λ^(j+1)`.
#[derive(Debug, Clone)]
pub struct LaurentCoefficients {
    /// `c_0 … c_N`.
    pub coeffs: Vec<Complex64>,
    /// `‖xʲu‖·‖φ‖` for each j: the natural scale of `c_j`
    /// (Cauchy–Schwarz gives `|c_j| ≤ ‖φ‖·‖xʲu‖`).
    pub scales: Vec<f64>,
    /// FNV-1a over the bit patterns of `x`, `u`, `φ`.
    pub fingerprint: u64,
}

impl LaurentCoefficients {
    /// True iff every `c_j` for `1 ≤ j ≤ N` exceeds `tol` times its
    /// natural scale — the numerically testable shadow of "0 is an
    /// essential singularity of f".
    pub fn essential_singularity_witness(&self, tol: f64) -> bool {
        self.coeffs
            .iter()
            .zip(&self.scales)
            .skip(1)
            .all(|(c, s)| c.norm() > tol * s)
    }
}

/// Compute `c_0 … c_N` by iterated matrix-vector products.
pub fn laurent_coeffs(
    x: &ComplexMatrix,
    p: &RankOneOperator,
    n_max: usize,
) -> Result<LaurentCoefficients> {
    if x.dim() != p.dim() {
        return Err(Error::input("dimension mismatch"));
    }
    let phi_norm = p.phi().norm();
    let mut v = p.u().clone();
    let mut coeffs = Vec::with_capacity(n_max + 1);
    let mut scales = Vec::with_capacity(n_max + 1);
    coeffs.push(pairing(p.phi(), &v)?);
    scales.push(v.norm() * phi_norm);
    for _ in 1..=n_max {
        v = x.apply(&v)?;
        coeffs.push(pairing(p.phi(), &v)?);
        scales.push(v.norm() * phi_norm);
    }
    Ok(LaurentCoefficients {
        coeffs,
        scales,
        fingerprint: fingerprint_of(x, p),
    })
}

/// Diagnostics for one level-set root candidate.
#[derive(Debug, Clone, Copy)]
pub struct LevelSetRootDiag {
    /// Candidate eigenvalue of `x + P/β` before refinement.
    pub candidate: Complex64,
    /// Refined value (equals `candidate` when Newton diverged).
    pub refined: Complex64,
    /// `|f(refined) − β|`.
    pub residual: f64,
    pub newton_iters: usize,
    pub converged: bool,
}

/// Level-set roots of `f(λ) = β` inside a window.
#[derive(Debug, Clone)]
pub struct LevelSetOutcome {
    /// Accepted roots: deduplicated, in canonical order, each with
    /// `|f(λ) − β| ≤ LEVEL_SET_RESIDUAL·(1+|β|)`.
    pub roots: Vec<Complex64>,
    pub diagnostics: Vec<LevelSetRootDiag>,
}

/// All solutions of `f(λ) = β` in `window`, where
/// `f(λ) = τ_P((λ−x)⁻¹)`.
///
/// Solutions are exactly the eigenvalues of `x + P/β` outside `σ(x)`,
/// so they are found by one eigensolve, filtered to the window, pruned
/// of points within `tol` of `σ(x)`, Newton-refined on `f − β`, and
/// deduplicated with `tol` as cluster tolerance.
pub fn level_set_roots(
    x: &ComplexMatrix,
    p: &RankOneOperator,
    beta: Complex64,
    window: Window,
    tol: f64,
) -> Result<LevelSetOutcome> {
    if beta.norm() == 0.0 {
        return Err(Error::input("β must be nonzero"));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::input("tolerance must be finite and positive"));
    }
    let perturbed = x.add(&p.matrix().scale(Complex64::new(1.0, 0.0) / beta)?)?;
    let candidates = linalg::eig(&perturbed)?;
    let resolvent = ScalarResolvent::new(x, p)?;
    let accept_bound = LEVEL_SET_RESIDUAL * (1.0 + beta.norm());

    let wide = Window::new(
        window.re_min - (window.re_max - window.re_min),
        window.re_max + (window.re_max - window.re_min),
        window.im_min - (window.im_max - window.im_min),
        window.im_max + (window.im_max - window.im_min),
    )?;

    let mut diagnostics = Vec::new();
    let mut accepted = Vec::new();
    for cand in candidates {
        if !window.contains(cand) || resolvent.dist_to_spectrum(cand) <= tol {
            continue;
        }
        let mut z = cand;
        let mut iters = 0;
        let mut converged = false;
        let mut residual = f64::INFINITY;
        for it in 0..NEWTON_MAX_ITERS {
            iters = it + 1;
            let (f, fp) = match resolvent.eval_with_derivative(z) {
                Ok(v) => v,
                Err(_) => break,
            };
            residual = (f - beta).norm();
            if residual <= accept_bound * 1e-2 {
                converged = true;
                break;
            }
            if fp.norm() == 0.0 {
                break;
            }
            let step = (f - beta) / fp;
            let next = z - step;
            if !(next.re.is_finite() && next.im.is_finite()) || !wide.contains(next) {
                break;
            }
            z = next;
            if step.norm() <= 1e-16 * (1.0 + z.norm()) {
                if let Ok(f) = resolvent.eval(z) {
                    residual = (f - beta).norm();
                    converged = residual <= accept_bound;
                }
                break;
            }
        }
        if let Ok(f) = resolvent.eval(z) {
            residual = (f - beta).norm();
        }
        converged = converged || residual <= accept_bound;
        diagnostics.push(LevelSetRootDiag {
            candidate: cand,
            refined: z,
            residual,
            newton_iters: iters,
            converged,
        });
        if converged && window.contains(z) {
            accepted.push(z);
        }
    }
    let dedup = SpectrumSet::from_eigenvalues(&accepted, tol)?;
    Ok(LevelSetOutcome {
        roots: dedup.points().iter().map(|p| p.value).collect(),
        diagnostics,
    })
}

/// A covector `w` on the diagonal model `a = diag(a_1 … a_m)` imposing
/// the hole-filling moment conditions
/// `φ(a⁻¹) = −1`, `φ(a⁻ᵏ) = 0` for `2 ≤ k ≤ K`,
/// plus (when K < m) the order-pinning condition `φ(a^{−(K+1)}) = −1`
/// that makes the zero of `f − 1` at the hole point have order exactly
/// K instead of collapsing to a deeper accidental zero on symmetric
/// sample sets.
#[derive(Debug, Clone)]
pub struct MomentFunctional {
    weights: ComplexVector,
    order: usize,
    residuals: Vec<f64>,
    leading_coeff: Complex64,
    samples: Vec<Complex64>,
    /// Moments `φ(a^(−j))`, j = 1…J, reused by the series evaluation.
    series_moments: Vec<Complex64>,
    min_abs_sample: f64,
}

impl MomentFunctional {
    pub fn weights(&self) -> &ComplexVector {
        &self.weights
    }

    /// Order K of the imposed moment conditions.
    pub fn order(&self) -> usize {
        self.order
    }

    /// The K primary residuals: `|φ(a⁻¹)+1|`, then `|φ(a⁻ᵏ)|` for
    /// `k = 2…K`. Each is ≤ [`MOMENT_RESIDUAL`] after construction.
    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    /// Realized leading coefficient of `f(λ) − 1 = c_K λ^K + …`,
    /// namely `−φ(a^(−(K+1)))`; equals 1 when the pinning condition is
    /// active.
    pub fn leading_coeff(&self) -> Complex64 {
        self.leading_coeff
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// `f(λ) = Σ wᵢ/(λ − aᵢ)` by direct summation.
    pub fn f(&self, lambda: Complex64) -> Result<Complex64> {
        let guard = 1e-12 * self.min_abs_sample.max(1.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, a) in self.weights.entries().iter().zip(&self.samples) {
            let d = lambda - a;
            if d.norm() < guard {
                return Err(Error::Precondition(format!(
                    "λ = {lambda} is on a pole of the functional"
                )));
            }
            acc += w / d;
        }
        Ok(acc)
    }

    /// `f(λ) − 1`, evaluated accurately near the hole point.
    ///
    /// Inside `|λ| ≤ 0.3·min|aᵢ|` the direct sum loses `f − 1` to
    /// cancellation (the true value is O(λᴷ)), so the expansion
    /// `f(λ) − 1 = −(φ(a⁻¹)+1) − Σ_{j≥2} φ(a^(−j)) λ^(j−1)` is summed
    /// instead, using the functional's actual computed moments; the two
    /// routes agree in the overlap region (property-tested).
    pub fn f_minus_one(&self, lambda: Complex64) -> Result<Complex64> {
        if lambda.norm() <= 0.3 * self.min_abs_sample {
            let one = Complex64::new(1.0, 0.0);
            let mut acc = -(self.series_moments[0] + one);
            let mut pw = Complex64::new(1.0, 0.0);
            for m in &self.series_moments[1..] {
                pw *= lambda;
                acc -= m * pw;
            }
            Ok(acc)
        } else {
            Ok(self.f(lambda)? - 1.0)
        }
    }

    /// Least-squares slope of `log₁₀|f(λ)−1|` against `log₁₀ λ` at the
    /// given real radii; equals the realized order of the zero.
    pub fn order_slope(&self, radii: &[f64]) -> Result<f64> {
        if radii.len() < 2 {
            return Err(Error::input("need at least two radii"));
        }
        let mut xs = Vec::with_capacity(radii.len());
        let mut ys = Vec::with_capacity(radii.len());
        for &r in radii {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::input("radii must be positive"));
            }
            let v = self.f_minus_one(Complex64::new(r, 0.0))?;
            if v.norm() == 0.0 {
                return Err(Error::numerical("f - 1 vanished exactly at a probe radius"));
            }
            xs.push(r.log10());
            ys.push(v.norm().log10());
        }
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        Ok(sxy / sxx)
    }

    /// [`order_slope`](Self::order_slope) over nine radii log-spaced in
    /// `[10⁻³, 10⁻¹]`.
    pub fn order_slope_default(&self) -> Result<f64> {
        let radii: Vec<f64> = (0..9).map(|i| 10f64.powf(-1.0 - 0.25 * i as f64)).collect();
        self.order_slope(&radii)
    }
}

/// Build the hole-filling functional for the diagonal model
/// `a = diag(a_samples)` and the rank-one perturbation `Pmat = 𝟙·wᵀ`.
///
/// `w` is the minimum-norm solution of the moment system (conditions
/// above). Consequently `f(λ) − 1 = O(λᴷ)` at 0 and
/// `diag(a) + 𝟙wᵀ` has an eigenvalue 0 of algebraic multiplicity ≥ K.
pub fn hole_filling_functional(
    a_samples: &[Complex64],
    k: usize,
) -> Result<(MomentFunctional, ComplexMatrix)> {
    let m = a_samples.len();
    if k < 2 {
        return Err(Error::input("moment order K must be at least 2"));
    }
    if k > m {
        return Err(Error::input(format!(
            "moment order K = {k} exceeds the number of samples {m}"
        )));
    }
    let max_abs = a_samples.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let min_abs = a_samples.iter().map(|a| a.norm()).fold(f64::INFINITY, f64::min);
    if min_abs <= 1e-12 * max_abs.max(1.0) {
        return Err(Error::input(
            "samples must be bounded away from 0 (the hole point)",
        ));
    }

    // Moment rows B[r][i] = aᵢ^{−(r+1)}; rhs −1, 0…0, and −1 again for
    // the pinning row when it fits.
    let rows = if k < m { k + 1 } else { k };
    let mut b = vec![Complex64::new(0.0, 0.0); rows * m];
    for (i, a) in a_samples.iter().enumerate() {
        let inv = Complex64::new(1.0, 0.0) / a;
        let mut pw = Complex64::new(1.0, 0.0);
        for r in 0..rows {
            pw *= inv;
            b[r * m + i] = pw;
        }
    }
    let mut rhs = vec![Complex64::new(0.0, 0.0); rows];
    rhs[0] = Complex64::new(-1.0, 0.0);
    if k < m {
        rhs[rows - 1] = Complex64::new(-1.0, 0.0);
    }

    // Minimum-norm solution through a thin QR of Bᴴ: with Bᴴ = QR,
    // w = Q·z where Rᴴ z = rhs.
    let bh = faer::Mat::from_fn(m, rows, |i, r| b[r * m + i].conj());
    let qr = bh.qr();
    let q = qr.compute_thin_Q();
    let rfac = qr.thin_R();
    let mut z = rhs.clone();
    for i in 0..rows {
        let mut acc = z[i];
        for j in 0..i {
            acc -= rfac[(j, i)].conj() * z[j];
        }
        let d = rfac[(i, i)].conj();
        if d.norm() < 1e-13 {
            return Err(Error::numerical(
                "moment system is numerically rank-deficient",
            ));
        }
        z[i] = acc / d;
    }
    let mut w = vec![Complex64::new(0.0, 0.0); m];
    for i in 0..m {
        for (j, zj) in z.iter().enumerate() {
            w[i] += q[(i, j)] * zj;
        }
    }

    // Moments of the realized functional, reused for residuals, the
    // leading coefficient, and the series evaluation of f − 1.
    let series_len = (4 * (k + 1)).max(80);
    let mut series_moments = Vec::with_capacity(series_len);
    let mut pws: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); m];
    let invs: Vec<Complex64> = a_samples.iter().map(|a| Complex64::new(1.0, 0.0) / a).collect();
    for _ in 0..series_len {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..m {
            pws[i] *= invs[i];
            acc += w[i] * pws[i];
        }
        series_moments.push(acc);
    }

    let one = Complex64::new(1.0, 0.0);
    let mut residuals = Vec::with_capacity(k);
    residuals.push((series_moments[0] + one).norm());
    for mom in series_moments.iter().take(k).skip(1) {
        residuals.push(mom.norm());
    }
    if residuals.iter().any(|&r| r > MOMENT_RESIDUAL) {
        return Err(Error::Numerical(format!(
            "moment residuals exceed {MOMENT_RESIDUAL:.1e}: max {:.3e}",
            residuals.iter().cloned().fold(0.0, f64::max)
        )));
    }
    let leading_coeff = if k < m {
        -series_moments[k]
    } else {
        -series_moments.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0))
    };

    let weights = ComplexVector::new(w)?;
    let pmat = outer(&ComplexVector::ones(m)?, &weights)?;
    Ok((
        MomentFunctional {
            weights,
            order: k,
            residuals,
            leading_coeff,
            samples: a_samples.to_vec(),
            series_moments,
            min_abs_sample: min_abs,
        },
        pmat,
    ))
}

/// Open disk in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

/// Per-β observations of the probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaRow {
    pub beta: f64,
    /// Eigenvalues of `x + β·a` inside the disk, counted with
    /// multiplicity.
    pub eig_in_disk: usize,
    /// `min over the disk grid of smin(λ − (x + β·a))` — a resolvent
    /// lower-bound witness.
    pub min_smin_on_disk: f64,
    /// `hausdorff(σ(x+βa), σ(x+a))`.
    pub hausdorff_to_beta1: f64,
}

/// β-sweep report; rows sorted ascending by β.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscontinuityReport {
    pub disk: Disk,
    pub rows: Vec<BetaRow>,
}

/// Sweep `β ↦ x + β·a` and record, for each β, how the disk inside a
/// hole of `σ(x)` is populated: eigenvalue counts, the resolvent
/// minimum over a grid covering the disk, and the Hausdorff distance to
/// the β = 1 spectrum. Pure report — thresholds live in the caller.
pub fn discontinuity_probe(
    x: &ComplexMatrix,
    a: &ComplexMatrix,
    betas: &[f64],
    disk: Disk,
    grid_step: f64,
) -> Result<DiscontinuityReport> {
    if x.dim() != a.dim() {
        return Err(Error::input("dimension mismatch"));
    }
    if betas.is_empty() {
        return Err(Error::input("betas must be nonempty"));
    }
    if !betas.iter().all(|&b| b.is_finite() && b > 0.0 && b <= 1.0) {
        return Err(Error::input("betas must lie in (0, 1]"));
    }
    if !betas.iter().any(|&b| (b - 1.0).abs() < 1e-12) {
        return Err(Error::input("betas must include 1"));
    }
    if !(grid_step.is_finite() && grid_step > 0.0 && grid_step <= disk.radius) {
        return Err(Error::input("grid step must be positive and at most the disk radius"));
    }
    if !(disk.radius.is_finite() && disk.radius > 0.0) {
        return Err(Error::input("disk radius must be positive"));
    }

    let scale = x.frobenius_norm();
    let ctol = default_cluster_tol(scale);
    let sigma_x = spectra::spectrum(x, ctol)?;
    validate_disk_in_hole(&sigma_x, disk)?;

    let sigma_beta1 = spectra::spectrum(&x.add(a)?, ctol)?;

    let mut sorted: Vec<f64> = betas.to_vec();
    sorted.sort_by(f64::total_cmp);

    let rows: Result<Vec<BetaRow>> = sorted
        .par_iter()
        .map(|&beta| {
            let m = x.add(&a.scale(Complex64::new(beta, 0.0))?)?;
            let eigs = linalg::eig(&m)?;
            let eig_in_disk = eigs
                .iter()
                .filter(|l| (*l - disk.center).norm() <= disk.radius)
                .count();
            let hess = linalg::hessenberg(&m)?;
            let reach = (disk.radius / grid_step).floor() as i64;
            let mut min_smin = f64::INFINITY;
            for i in -reach..=reach {
                for j in -reach..=reach {
                    let z = disk.center
                        + Complex64::new(i as f64 * grid_step, j as f64 * grid_step);
                    if (z - disk.center).norm() > disk.radius {
                        continue;
                    }
                    let s = linalg::smin_shifted_hessenberg(&hess.h, z);
                    if s < min_smin {
                        min_smin = s;
                    }
                }
            }
            let s_beta = SpectrumSet::from_eigenvalues(&eigs, ctol)?;
            let h = spectra::hausdorff(&s_beta, &sigma_beta1)?;
            Ok(BetaRow {
                beta,
                eig_in_disk,
                min_smin_on_disk: min_smin,
                hausdorff_to_beta1: h,
            })
        })
        .collect();

    Ok(DiscontinuityReport { disk, rows: rows? })
}

/// Check that the disk sits strictly inside one bounded complement
/// component of the (thickened, rasterized) spectrum.
fn validate_disk_in_hole(sigma_x: &SpectrumSet, disk: Disk) -> Result<()> {
    let mut re_lo = disk.center.re - disk.radius;
    let mut re_hi = disk.center.re + disk.radius;
    let mut im_lo = disk.center.im - disk.radius;
    let mut im_hi = disk.center.im + disk.radius;
    for p in sigma_x.points() {
        re_lo = re_lo.min(p.value.re);
        re_hi = re_hi.max(p.value.re);
        im_lo = im_lo.min(p.value.im);
        im_hi = im_hi.max(p.value.im);
    }
    let diam = (re_hi - re_lo).max(im_hi - im_lo).max(1e-3);
    let pad = 0.25 * diam;
    let window = Window::new(re_lo - pad, re_hi + pad, im_lo - pad, im_hi + pad)?;
    let res = 401usize;
    let step = ((window.re_max - window.re_min) / (res - 1) as f64)
        .max((window.im_max - window.im_min) / (res - 1) as f64);
    let thickening = 2.5 * step;
    let raster = spectra::raster_labels(sigma_x, window, (res, res), thickening)?;

    let mut hole_label: Option<i32> = None;
    let mut check = |z: Complex64| -> Result<()> {
        match raster.label_at(z) {
            Some(l) if l >= 1 => {
                if let Some(h) = hole_label {
                    if h != l {
                        return Err(Error::precondition(
                            "disk spans more than one complement component",
                        ));
                    }
                } else {
                    hole_label = Some(l);
                }
                Ok(())
            }
            Some(-1) => Err(Error::precondition(
                "disk touches the (thickened) spectrum; it must lie inside a hole",
            )),
            Some(_) => Err(Error::precondition(
                "disk lies in the unbounded resolvent component, not in a hole",
            )),
            None => Err(Error::precondition("disk leaves the validation window")),
        }
    };
    check(disk.center)?;
    for (dx, dy) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
        check(disk.center + Complex64::new(dx * disk.radius, dy * disk.radius))?;
    }
    // every raster node inside the disk
    let nx = raster.nx;
    for iy in 0..raster.ny {
        for ix in 0..nx {
            let node = raster.node(ix, iy);
            if (node - disk.center).norm() <= disk.radius {
                let l = raster.labels[iy * nx + ix];
                if l < 1 || hole_label.map(|h| h != l).unwrap_or(false) {
                    return Err(Error::precondition(
                        "disk is not contained in a single hole of σ(x)",
                    ));
                }
            }
        }
    }
    Ok(())
}

/// One α-row of a perturbation scan.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub alpha: Complex64,
    pub spectrum: SpectrumSet,
    /// Eigenvalues with `|λ| > threshold`, counted with multiplicity.
    pub count_above_threshold: usize,
    /// Hausdorff distance to σ(x) (the α = 0 spectrum).
    pub hausdorff_to_alpha0: f64,
}

/// α-sweep of `σ(x + α·Q)`, rows in input order.
#[derive(Debug, Clone)]
pub struct ScanTable {
    pub threshold: f64,
    pub rows: Vec<ScanRow>,
}

/// Sweep `α ↦ σ(x + α·Q)` with summary statistics per row.
pub fn perturbation_scan(
    x: &ComplexMatrix,
    q: &RankOneOperator,
    alphas: &[Complex64],
    threshold: f64,
) -> Result<ScanTable> {
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(Error::input("threshold must be finite and positive"));
    }
    if x.dim() != q.dim() {
        return Err(Error::input("dimension mismatch"));
    }
    let qmat = q.matrix();
    let ctol = default_cluster_tol(x.frobenius_norm());
    let base = spectra::spectrum(x, ctol)?;
    let rows: Result<Vec<ScanRow>> = alphas
        .par_iter()
        .map(|&alpha| {
            let m = x.add(&qmat.scale(alpha)?)?;
            let eigs = linalg::eig(&m)?;
            let count_above_threshold =
                eigs.iter().filter(|l| l.norm() > threshold).count();
            let spectrum = SpectrumSet::from_eigenvalues(&eigs, ctol)?;
            let hausdorff_to_alpha0 = spectra::hausdorff(&spectrum, &base)?;
            Ok(ScanRow {
                alpha,
                spectrum,
                count_above_threshold,
                hausdorff_to_alpha0,
            })
        })
        .collect();
    Ok(ScanTable { threshold, rows: rows? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexVector;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn e(n: usize, k: usize) -> ComplexVector {
        ComplexVector::basis(n, k).unwrap()
    }

    #[test]
    fn criterion_zero_perturbation() {
        let x = ComplexMatrix::diagonal(&[c(0.0, 0.0), c(2.0, 0.0)]).unwrap();
        let y = ComplexMatrix::zeros(2).unwrap();
        let r = criterion(&x, &y, c(1.0, 0.0), 1e-7).unwrap();
        assert_eq!(r, CriterionCheck { lhs: false, rhs: false });
    }

    #[test]
    fn criterion_nilpotent_resolvent_product() {
        let x = ComplexMatrix::diagonal(&[c(0.0, 0.0), c(2.0, 0.0)]).unwrap();
        let y = outer(&e(2, 0), &e(2, 1)).unwrap();
        let r = criterion(&x, &y, c(1.0, 0.0), 1e-7).unwrap();
        assert_eq!(r, CriterionCheck { lhs: false, rhs: false });
    }

    #[test]
    fn criterion_detects_membership() {
        let x = ComplexMatrix::zeros(2).unwrap();
        let y = ComplexMatrix::identity(2).unwrap();
        let r = criterion(&x, &y, c(1.0, 0.0), 1e-7).unwrap();
        assert_eq!(r, CriterionCheck { lhs: true, rhs: true });
    }

    #[test]
    fn criterion_rejects_lambda_near_spectrum() {
        let x = ComplexMatrix::zeros(2).unwrap();
        let y = ComplexMatrix::identity(2).unwrap();
        assert!(matches!(
            criterion(&x, &y, c(1e-9, 0.0), 1e-7),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn criterion_equivalence_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let mut checked = 0;
        while checked < 25 {
            let n = 2 + (checked % 5);
            let x = sample::gaussian_matrix(n, &mut rng).unwrap();
            let y = sample::gaussian_matrix(n, &mut rng).unwrap();
            let lambda = sample::gaussian_complex(&mut rng) * 2.0;
            match criterion(&x, &y, lambda, 1e-7) {
                Ok(r) => {
                    assert_eq!(r.lhs, r.rhs, "criterion sides disagree");
                    checked += 1;
                }
                Err(Error::Precondition(_)) => continue,
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }

    #[test]
    fn resolvent_of_zero_matrix() {
        // x = 0: f(λ) = φ(u)/λ
        let u = ComplexVector::new(vec![c(2.0, 0.0), c(0.0, 0.0)]).unwrap();
        let phi = ComplexVector::new(vec![c(3.0, 0.0), c(1.0, 0.0)]).unwrap();
        let p = RankOneOperator::new(u, phi).unwrap();
        let x = ComplexMatrix::zeros(2).unwrap();
        let lambda = c(0.5, 0.5);
        let f = resolvent_scalar(&x, &p, lambda).unwrap();
        let expect = c(6.0, 0.0) / lambda;
        assert!((f - expect).norm() < 1e-12);
    }

    #[test]
    fn resolvent_leading_laurent_term() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let x = sample::gaussian_matrix(5, &mut rng).unwrap();
        let p = RankOneOperator::new(
            sample::gaussian_vector(5, &mut rng).unwrap(),
            sample::gaussian_vector(5, &mut rng).unwrap(),
        )
        .unwrap();
        let lam_mag = 50.0 * x.frobenius_norm();
        let lambda = c(lam_mag, lam_mag);
        let f = resolvent_scalar(&x, &p, lambda).unwrap();
        let lead = p.tau_identity() / lambda;
        // |f − φ(u)/λ| = O(λ⁻²)
        assert!((f - lead).norm() < 10.0 * p.matrix().frobenius_norm() * x.frobenius_norm()
            / lam_mag.powi(2));
    }

    #[test]
    fn resolvent_partial_fractions_2x2() {
        // x = diag(a1, a2): f(λ) = Σ φᵢuᵢ/(λ−aᵢ), frozen from the
        // exact rational computation at λ = 3:
        // 2·1/(3−1) + (−1)·1/(3+2) = 1 − 1/5 = 4/5.
        let x = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(-2.0, 0.0)]).unwrap();
        let p = RankOneOperator::new(
            ComplexVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap(),
            ComplexVector::new(vec![c(2.0, 0.0), c(-1.0, 0.0)]).unwrap(),
        )
        .unwrap();
        let f = resolvent_scalar(&x, &p, c(3.0, 0.0)).unwrap();
        assert!((f - c(0.8, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn scalar_resolvent_matches_one_shot() {
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        let x = sample::gaussian_matrix(9, &mut rng).unwrap();
        let p = RankOneOperator::new(
            sample::gaussian_vector(9, &mut rng).unwrap(),
            sample::gaussian_vector(9, &mut rng).unwrap(),
        )
        .unwrap();
        let cache = ScalarResolvent::new(&x, &p).unwrap();
        for _ in 0..5 {
            let lambda = sample::gaussian_complex(&mut rng) * 4.0;
            if cache.dist_to_spectrum(lambda) < 0.3 {
                continue;
            }
            let a = cache.eval(lambda).unwrap();
            let b = resolvent_scalar(&x, &p, lambda).unwrap();
            assert!((a - b).norm() <= 1e-9 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn laurent_c0_is_tau_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        let x = sample::gaussian_matrix(4, &mut rng).unwrap();
        let p = RankOneOperator::new(
            sample::gaussian_vector(4, &mut rng).unwrap(),
            sample::gaussian_vector(4, &mut rng).unwrap(),
        )
        .unwrap();
        let lc = laurent_coeffs(&x, &p, 6).unwrap();
        assert!((lc.coeffs[0] - p.tau_identity()).norm() < 1e-12);
        assert_eq!(lc.coeffs.len(), 7);
    }

    #[test]
    fn laurent_nilpotent_truncates() {
        let j3 = ComplexMatrix::from_fn(3, |i, j| {
            if i == j + 1 {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        })
        .unwrap();
        let p = RankOneOperator::new(
            ComplexVector::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(-1.0, 0.0)]).unwrap(),
            ComplexVector::new(vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]).unwrap(),
        )
        .unwrap();
        let lc = laurent_coeffs(&j3, &p, 8).unwrap();
        for j in 3..=8 {
            assert_eq!(lc.coeffs[j], c(0.0, 0.0));
        }
        assert!(!lc.essential_singularity_witness(1e-6));
    }

    #[test]
    fn laurent_partial_sums_approximate_resolvent() {
        let mut rng = ChaCha8Rng::seed_from_u64(89);
        let x = sample::gaussian_matrix(6, &mut rng).unwrap();
        let p = RankOneOperator::new(
            sample::gaussian_vector(6, &mut rng).unwrap(),
            sample::gaussian_vector(6, &mut rng).unwrap(),
        )
        .unwrap();
        let n_max = 12;
        let lc = laurent_coeffs(&x, &p, n_max).unwrap();
        let norm_x = x.frobenius_norm();
        let lambda = c(2.5 * norm_x, 1.0 * norm_x);
        let f = resolvent_scalar(&x, &p, lambda).unwrap();
        let mut partial = c(0.0, 0.0);
        let mut lp = lambda;
        for j in 0..=n_max {
            partial += lc.coeffs[j] / lp;
            lp *= lambda;
        }
        let bound = (norm_x / lambda.norm()).powi(n_max as i32 + 1)
            * p.u().norm()
            * p.phi().norm()
            * 2.0;
        assert!((f - partial).norm() <= bound);
    }

    #[test]
    fn level_set_of_inverse_function() {
        // x = 0, φ(u) = 1: f(λ) = 1/λ, so f = 2 exactly at λ = 0.5.
        let p = RankOneOperator::new(e(2, 0), e(2, 0)).unwrap();
        let x = ComplexMatrix::zeros(2).unwrap();
        let window = Window::new(0.1, 1.0, -0.4, 0.4).unwrap();
        let out = level_set_roots(&x, &p, c(2.0, 0.0), window, 1e-9).unwrap();
        assert_eq!(out.roots.len(), 1);
        assert!((out.roots[0] - c(0.5, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn level_set_secular_2x2() {
        // x = diag(1, −1), u = (1,1), w = (−1/2, 1/2):
        // f(λ) = −1/(2(λ−1)) + 1/(2(λ+1)); f(λ) = 1 ⟺ λ² = 1 − λ,
        // i.e. λ = (−1 ± √5)/2 (exact quadratic).
        let x = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let p = RankOneOperator::new(
            ComplexVector::ones(2).unwrap(),
            ComplexVector::new(vec![c(-0.5, 0.0), c(0.5, 0.0)]).unwrap(),
        )
        .unwrap();
        let window = Window::new(-3.0, 3.0, -1.0, 1.0).unwrap();
        let out = level_set_roots(&x, &p, c(1.0, 0.0), window, 1e-9).unwrap();
        let mut roots = out.roots.clone();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        let golden = [(-1.0 - 5f64.sqrt()) / 2.0, (-1.0 + 5f64.sqrt()) / 2.0];
        assert_eq!(roots.len(), 2);
        for (r, g) in roots.iter().zip(golden) {
            assert!((r - c(g, 0.0)).norm() < 1e-9, "{r} vs {g}");
        }
    }

    #[test]
    fn level_set_empty_window() {
        let p = RankOneOperator::new(e(2, 0), e(2, 0)).unwrap();
        let x = ComplexMatrix::zeros(2).unwrap();
        // f = 1/λ = 2 only at 0.5; window misses it
        let window = Window::new(5.0, 6.0, -0.5, 0.5).unwrap();
        let out = level_set_roots(&x, &p, c(2.0, 0.0), window, 1e-9).unwrap();
        assert!(out.roots.is_empty());
    }

    #[test]
    fn level_set_rejects_zero_beta() {
        let p = RankOneOperator::new(e(2, 0), e(2, 0)).unwrap();
        let x = ComplexMatrix::zeros(2).unwrap();
        let window = Window::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        assert!(matches!(
            level_set_roots(&x, &p, c(0.0, 0.0), window, 1e-9),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn level_set_matches_perturbed_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(97);
        for trial in 0..6 {
            let n = 3 + trial % 3;
            let x = sample::gaussian_matrix(n, &mut rng).unwrap();
            let p = RankOneOperator::new(
                sample::gaussian_vector(n, &mut rng).unwrap(),
                sample::gaussian_vector(n, &mut rng).unwrap(),
            )
            .unwrap();
            let beta = sample::gaussian_complex(&mut rng);
            if beta.norm() < 0.3 {
                continue;
            }
            let perturbed = x
                .add(&p.matrix().scale(c(1.0, 0.0) / beta).unwrap())
                .unwrap();
            let eigs_p = linalg::eig(&perturbed).unwrap();
            let eigs_x = linalg::eig(&x).unwrap();
            let span = eigs_p
                .iter()
                .map(|l| l.norm())
                .fold(0.0, f64::max)
                .max(1.0)
                * 2.0;
            let window = Window::centered(span).unwrap();
            let out = level_set_roots(&x, &p, beta, window, 1e-6).unwrap();
            // every perturbed eigenvalue away from σ(x) has a root nearby
            for l in &eigs_p {
                let d_x = eigs_x.iter().map(|m| (l - m).norm()).fold(f64::INFINITY, f64::min);
                if d_x > 1e-3 {
                    let d_root = out
                        .roots
                        .iter()
                        .map(|r| (l - r).norm())
                        .fold(f64::INFINITY, f64::min);
                    assert!(d_root <= 1e-6, "eigenvalue {l} has no level-set root nearby");
                }
            }
        }
    }

    #[test]
    fn moment_functional_two_samples() {
        // m = 2, a = (1, −1), K = 2 (single zero condition + pinning
        // skipped at K = m): conditions φ(a⁻¹) = −1, φ(a⁻²) = 0 give
        // w = (−1/2, 1/2) and f(0) = 1.
        let samples = [c(1.0, 0.0), c(-1.0, 0.0)];
        let (mf, pmat) = hole_filling_functional(&samples, 2).unwrap();
        assert!((mf.weights().get(0) - c(-0.5, 0.0)).norm() < 1e-12);
        assert!((mf.weights().get(1) - c(0.5, 0.0)).norm() < 1e-12);
        let f0 = mf.f(c(0.0, 0.0)).unwrap();
        assert!((f0 - c(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(pmat.dim(), 2);
        assert!((pmat.get(0, 0) - c(-0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn moment_functional_rejects_zero_samples() {
        let samples = [c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)];
        assert!(matches!(
            hole_filling_functional(&samples, 2),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            hole_filling_functional(&[c(1.0, 0.0), c(-1.0, 0.0)], 5),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn moment_functional_circle_model() {
        let m = 64;
        let samples: Vec<Complex64> = (0..m)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                c(th.cos(), th.sin())
            })
            .collect();
        let (mf, pmat) = hole_filling_functional(&samples, 8).unwrap();
        assert!(mf.residuals().iter().all(|&r| r <= MOMENT_RESIDUAL));
        assert!((mf.leading_coeff() - c(1.0, 0.0)).norm() < 1e-10);
        let slope = mf.order_slope_default().unwrap();
        assert!((slope - 8.0).abs() < 0.5, "slope {slope}");
        // diag(a) + 𝟙wᵀ has ≥ 8 eigenvalues collapsed toward 0
        let l = ComplexMatrix::diagonal(&samples).unwrap();
        let eigs = linalg::eig(&l.add(&pmat).unwrap()).unwrap();
        let small = eigs.iter().filter(|z| z.norm() < 0.1).count();
        assert!(small >= 8, "only {small} small eigenvalues");
    }

    #[test]
    fn moment_series_and_direct_agree_in_overlap() {
        let m = 32;
        let samples: Vec<Complex64> = (0..m)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                c(th.cos(), th.sin())
            })
            .collect();
        let (mf, _) = hole_filling_functional(&samples, 4).unwrap();
        for &r in &[0.31, 0.4, 0.5] {
            for &arg in &[0.0, 1.1, 2.7] {
                let lambda = Complex64::from_polar(r, arg);
                let direct = mf.f(lambda).unwrap() - 1.0;
                // series path, forced by evaluating just inside the switch
                let series = {
                    let inner = lambda * (0.29 / r);
                    let s = mf.f_minus_one(inner).unwrap();
                    // compare shapes: |s| ≈ |c_K (0.29/r)^K λ^K|
                    let ratio = (0.29f64 / r).powi(mf.order() as i32);
                    s / ratio
                };
                // magnitudes agree to the next-order correction
                assert!(
                    (series.norm() - direct.norm()).abs() <= 0.4 * direct.norm(),
                    "r={r} arg={arg}: series {series}, direct {direct}"
                );
            }
        }
    }

    #[test]
    fn probe_requires_disk_inside_hole() {
        // σ(x) = two points on the real axis: no hole anywhere.
        let x = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let a = ComplexMatrix::identity(2).unwrap();
        let disk = Disk { center: c(0.0, 0.0), radius: 0.2 };
        assert!(matches!(
            discontinuity_probe(&x, &a, &[0.5, 1.0], disk, 0.05),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn probe_circle_model_rows() {
        let m = 64;
        let samples: Vec<Complex64> = (0..m)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                c(th.cos(), th.sin())
            })
            .collect();
        let (_, pmat) = hole_filling_functional(&samples, 8).unwrap();
        let x = ComplexMatrix::diagonal(&samples).unwrap();
        let disk = Disk { center: c(0.0, 0.0), radius: 0.25 };
        let report =
            discontinuity_probe(&x, &pmat, &[0.9, 1.0], disk, 0.05).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert!(report.rows[0].beta < report.rows[1].beta);
        // β = 1 fills the disk with ≥ 8 eigenvalues; β = 0.9 leaves it empty
        assert!(report.rows[1].eig_in_disk >= 8);
        assert_eq!(report.rows[0].eig_in_disk, 0);
        assert_eq!(report.rows[1].hausdorff_to_beta1, 0.0);
        assert!(report.rows[0].hausdorff_to_beta1 > 0.1);
    }

    #[test]
    fn probe_requires_beta_one() {
        let x = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let a = ComplexMatrix::identity(2).unwrap();
        let disk = Disk { center: c(0.0, 0.0), radius: 0.2 };
        assert!(matches!(
            discontinuity_probe(&x, &a, &[0.5, 0.9], disk, 0.05),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn scan_alpha_zero_row_is_sigma_x() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let x = sample::gaussian_matrix(5, &mut rng).unwrap();
        let q = RankOneOperator::new(
            sample::gaussian_vector(5, &mut rng).unwrap(),
            sample::gaussian_vector(5, &mut rng).unwrap(),
        )
        .unwrap();
        let table = perturbation_scan(&x, &q, &[c(0.0, 0.0), c(1.0, 0.0)], 1e-3).unwrap();
        assert_eq!(table.rows.len(), 2);
        assert!(table.rows[0].hausdorff_to_alpha0 <= 1e-12);
    }

    #[test]
    fn scan_scaling_consistency() {
        // scan(x, cQ) at α equals scan(x, Q) at cα, rowwise.
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        let x = sample::gaussian_matrix(4, &mut rng).unwrap();
        let u = sample::gaussian_vector(4, &mut rng).unwrap();
        let phi = sample::gaussian_vector(4, &mut rng).unwrap();
        let q = RankOneOperator::new(u.clone(), phi.clone()).unwrap();
        let cq = RankOneOperator::new(u.scale(c(2.0, 1.0)), phi).unwrap();
        let t1 = perturbation_scan(&x, &cq, &[c(0.7, -0.3)], 1e-3).unwrap();
        let t2 = perturbation_scan(&x, &q, &[c(0.7, -0.3) * c(2.0, 1.0)], 1e-3).unwrap();
        let h = spectra::hausdorff(&t1.rows[0].spectrum, &t2.rows[0].spectrum).unwrap();
        assert!(h < 1e-9);
        assert_eq!(t1.rows[0].count_above_threshold, t2.rows[0].count_above_threshold);
    }
}
