//! Finite-rank machinery: spectral rank, characteristic functionals of
//! rank-one elements, orthogonal idempotent families, and the bound on
//! how much a commuting finite-rank perturbation can move a spectrum.
//!
//! The spectral rank of `a` is the largest number of distinct nonzero
//! eigenvalues of `x·a` over all `x`. The supremum is generically
//! attained, so it is estimated as a max over seeded Gaussian probes;
//! tests certify agreement with the algebraic rank.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, outer, pairing, ComplexMatrix, ComplexVector};
use crate::sample;
use crate::spectra::SpectrumSet;

/// Scaled tolerance for validating idempotent families.
pub const IDEMPOTENT_TOL: f64 = 1e-8;

/// A rank-one operator `a = u·φᵀ` together with its characteristic
/// functional `τ_a(x) = φᵀ·x·u`, the unique functional with
/// `a·x·a = τ_a(x)·a`.
#[derive(Debug, Clone)]
pub struct RankOneOperator {
    u: ComplexVector,
    phi: ComplexVector,
}

impl RankOneOperator {
    pub fn new(u: ComplexVector, phi: ComplexVector) -> Result<Self> {
        if u.len() != phi.len() {
            return Err(Error::input("u and phi must have equal length"));
        }
        if u.is_zero() || phi.is_zero() {
            return Err(Error::input("rank-one factors must be nonzero"));
        }
        Ok(RankOneOperator { u, phi })
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    pub fn u(&self) -> &ComplexVector {
        &self.u
    }

    pub fn phi(&self) -> &ComplexVector {
        &self.phi
    }

    /// Dense matrix form `u·φᵀ`.
    pub fn matrix(&self) -> ComplexMatrix {
        outer(&self.u, &self.phi).expect("factors have equal length")
    }

    /// `τ_a(x) = φᵀ·x·u`.
    pub fn tau(&self, x: &ComplexMatrix) -> Result<Complex64> {
        if x.dim() != self.dim() {
            return Err(Error::input("dimension mismatch in characteristic functional"));
        }
        pairing(&self.phi, &x.apply(&self.u)?)
    }

    /// `τ_a(1) = φᵀ·u`, the trace of the matrix form.
    pub fn tau_identity(&self) -> Complex64 {
        pairing(&self.phi, &self.u).expect("factors have equal length")
    }
}

/// Characteristic functional evaluation, named as an operation.
pub fn char_functional(a: &RankOneOperator, x: &ComplexMatrix) -> Result<Complex64> {
    a.tau(x)
}

/// Spectral rank of `a`: max over seeded Gaussian probes `x` of the
/// number of distinct nonzero eigenvalues of `x·a`.
///
/// Both the distinctness and the nonzero cutoffs scale with `‖x·a‖_F`
/// (clusters merged at `tol·‖xa‖`, eigenvalues counted when
/// `|λ| > tol·‖xa‖`). Probe `i` draws from an RNG derived from
/// `(rng_seed, i)`, so results are independent of worker count.
pub fn spectral_rank(a: &ComplexMatrix, probes: usize, tol: f64, rng_seed: u64) -> Result<usize> {
    if probes == 0 {
        return Err(Error::input("at least one probe is required"));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::input("tolerance must be finite and positive"));
    }
    let counts: Result<Vec<usize>> = (0..probes)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample::derived_rng(rng_seed, i as u64);
            let x = sample::gaussian_matrix(a.dim(), &mut rng)?;
            let m = x.matmul(a)?;
            let scale = m.frobenius_norm();
            if scale == 0.0 {
                return Ok(0);
            }
            let s = SpectrumSet::from_eigenvalues(&linalg::eig(&m)?, tol * scale)?;
            Ok(s.points()
                .iter()
                .filter(|p| p.value.norm() > tol * scale)
                .count())
        })
        .collect();
    Ok(counts?.into_iter().max().unwrap_or(0))
}

/// Family of mutually orthogonal rank-one idempotents with nonzero
/// coefficients: the generalized-diagonalization data `a = Σ λⱼ pⱼ`.
#[derive(Debug, Clone)]
pub struct IdempotentFamily {
    items: Vec<(Complex64, ComplexMatrix)>,
}

impl IdempotentFamily {
    /// Validates idempotency, mutual orthogonality (both orders), rank
    /// one, and nonzero coefficients, all at [`IDEMPOTENT_TOL`] scaled
    /// by the matrix norms.
    pub fn new(items: Vec<(Complex64, ComplexMatrix)>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::validation("idempotent family must be nonempty"));
        }
        let n = items[0].1.dim();
        for (lambda, p) in &items {
            if p.dim() != n {
                return Err(Error::validation("idempotents must share a dimension"));
            }
            if lambda.norm() == 0.0 {
                return Err(Error::validation("coefficients must be nonzero"));
            }
            let pn = p.frobenius_norm();
            let residual = p.matmul(p)?.sub(p)?.frobenius_norm();
            if residual > IDEMPOTENT_TOL * (1.0 + pn * pn) {
                return Err(Error::Validation(format!(
                    "matrix is not idempotent (residual {residual:.3e})"
                )));
            }
            let sv = linalg::singular_values(p)?;
            if sv[0] == 0.0 || (sv.len() > 1 && sv[1] > IDEMPOTENT_TOL * sv[0]) {
                return Err(Error::validation("idempotents must have rank exactly one"));
            }
        }
        for i in 0..items.len() {
            for j in 0..items.len() {
                if i == j {
                    continue;
                }
                let (pi, pj) = (&items[i].1, &items[j].1);
                let prod = pi.matmul(pj)?.frobenius_norm();
                if prod > IDEMPOTENT_TOL * pi.frobenius_norm() * pj.frobenius_norm() {
                    return Err(Error::Validation(format!(
                        "idempotents {i} and {j} are not orthogonal (‖pᵢpⱼ‖ = {prod:.3e})"
                    )));
                }
            }
        }
        Ok(IdempotentFamily { items })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.items[0].1.dim()
    }

    pub fn items(&self) -> &[(Complex64, ComplexMatrix)] {
        &self.items
    }

    /// `a = Σ λⱼ pⱼ`.
    pub fn assemble(&self) -> Result<ComplexMatrix> {
        let mut a = ComplexMatrix::zeros(self.dim())?;
        for (lambda, p) in &self.items {
            a = a.add(&p.scale(*lambda)?)?;
        }
        Ok(a)
    }
}

/// Witness for generalized diagonalization: given `a = Σ λⱼ pⱼ` and
/// distinct nonzero targets `αⱼ`, build `y = Σ (αⱼ/λⱼ) pⱼ`, which
/// commutes with `a` and realizes `σ'(y·a) = {α₁, …, αₙ}`.
pub fn construct_commuting_witness(
    fam: &IdempotentFamily,
    alphas: &[Complex64],
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if alphas.len() != fam.len() {
        return Err(Error::input("need exactly one alpha per idempotent"));
    }
    let max_mag = alphas.iter().map(|a| a.norm()).fold(0.0, f64::max);
    for (i, alpha) in alphas.iter().enumerate() {
        if alpha.norm() == 0.0 {
            return Err(Error::input("alphas must be nonzero"));
        }
        for beta in alphas.iter().skip(i + 1) {
            if (alpha - beta).norm() <= 1e-12 * max_mag {
                return Err(Error::input("alphas must be pairwise distinct"));
            }
        }
    }
    let a = fam.assemble()?;
    let mut y = ComplexMatrix::zeros(fam.dim())?;
    for ((lambda, p), alpha) in fam.items().iter().zip(alphas) {
        y = y.add(&p.scale(alpha / lambda)?)?;
    }
    Ok((a, y))
}

/// Spectrum difference counts for a commuting perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommutingDiff {
    /// Points of σ(x+a) farther than `tol` from σ(x).
    pub new_count: usize,
    /// Points of σ(x) farther than `tol` from σ(x+a).
    pub lost_count: usize,
    /// Algebraic rank of `a` (singular values above `tol·σ_max`).
    pub rank_a: usize,
}

/// Count how many spectrum points appear and disappear under the
/// commuting perturbation `x ↦ x + a`.
///
/// Commutation is a precondition, not a repair: inputs whose commutator
/// exceeds `tol·‖x‖‖a‖` are rejected. Each reported count is checked
/// against the rank bound; a violation (which the theory rules out for
/// genuinely commuting pairs) is returned as [`Error::BoundViolation`].
pub fn commuting_diff_check(
    x: &ComplexMatrix,
    a: &ComplexMatrix,
    tol: f64,
) -> Result<CommutingDiff> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::input("tolerance must be finite and positive"));
    }
    if x.dim() != a.dim() {
        return Err(Error::input("dimension mismatch"));
    }
    let comm = x.matmul(a)?.sub(&a.matmul(x)?)?.frobenius_norm();
    let scale = x.frobenius_norm() * a.frobenius_norm();
    if comm > tol * scale {
        return Err(Error::Precondition(format!(
            "inputs do not commute: ‖xa−ax‖ = {comm:.3e} exceeds {:.3e}",
            tol * scale
        )));
    }

    let rank_a = {
        let sv = linalg::singular_values(a)?;
        if sv[0] == 0.0 {
            0
        } else {
            sv.iter().filter(|&&s| s > tol * sv[0]).count()
        }
    };

    let sx = SpectrumSet::from_eigenvalues(&linalg::eig(x)?, tol)?;
    let sxa = SpectrumSet::from_eigenvalues(&linalg::eig(&x.add(a)?)?, tol)?;
    let new_count = sxa
        .points()
        .iter()
        .filter(|p| sx.dist_to(p.value) > tol)
        .count();
    let lost_count = sx
        .points()
        .iter()
        .filter(|p| sxa.dist_to(p.value) > tol)
        .count();

    if new_count > rank_a || lost_count > rank_a {
        return Err(Error::BoundViolation(format!(
            "spectrum moved by ({new_count} new, {lost_count} lost) points, rank is {rank_a}"
        )));
    }
    Ok(CommutingDiff { new_count, lost_count, rank_a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn e(n: usize, k: usize) -> ComplexVector {
        ComplexVector::basis(n, k).unwrap()
    }

    #[test]
    fn tau_of_nilpotent_rank_one() {
        let a = RankOneOperator::new(e(3, 0), e(3, 1)).unwrap();
        let tau = char_functional(&a, &ComplexMatrix::identity(3).unwrap()).unwrap();
        assert!(tau.norm() < 1e-15);
        // nilpotent rank one: spectrum is {0}
        let evs = linalg::eig(&a.matrix()).unwrap();
        assert!(evs.iter().all(|l| l.norm() < 1e-12));
    }

    #[test]
    fn tau_of_idempotent_rank_one() {
        let a = RankOneOperator::new(e(3, 0), e(3, 0)).unwrap();
        let tau = char_functional(&a, &ComplexMatrix::identity(3).unwrap()).unwrap();
        assert!((tau - c(1.0, 0.0)).norm() < 1e-15);
        // σ(a) = {τ_a(1), 0} = {1, 0}
        let s = SpectrumSet::from_eigenvalues(&linalg::eig(&a.matrix()).unwrap(), 1e-10).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.points().iter().any(|p| (p.value - c(1.0, 0.0)).norm() < 1e-12));
        assert!(s.points().iter().any(|p| p.value.norm() < 1e-12));
    }

    #[test]
    fn tau_product_identity() {
        // a = e1 e2ᵀ, x = c·e2 e1ᵀ: τ_{ax}(1) = τ_a(x) = c, and the
        // trace of a·x recovers the same value.
        let a = RankOneOperator::new(e(2, 0), e(2, 1)).unwrap();
        let x = outer(&e(2, 1), &e(2, 0)).unwrap().scale(c(2.5, -1.0)).unwrap();
        let tau = a.tau(&x).unwrap();
        assert!((tau - c(2.5, -1.0)).norm() < 1e-15);
        let ax = a.matrix().matmul(&x).unwrap();
        assert!((ax.trace() - tau).norm() < 1e-15);
    }

    #[test]
    fn axa_equals_tau_a() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let n = 4;
            let u = sample::gaussian_vector(n, &mut rng).unwrap();
            let phi = sample::gaussian_vector(n, &mut rng).unwrap();
            let a = RankOneOperator::new(u, phi).unwrap();
            let x = sample::gaussian_matrix(n, &mut rng).unwrap();
            let tau = a.tau(&x).unwrap();
            let am = a.matrix();
            let lhs = am.matmul(&x).unwrap().matmul(&am).unwrap();
            let rhs = am.scale(tau).unwrap();
            let scale = am.frobenius_norm().powi(2) * x.frobenius_norm();
            assert!(lhs.sub(&rhs).unwrap().frobenius_norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn degenerate_rank_one_rejected() {
        let z = ComplexVector::zeros(3).unwrap();
        assert!(RankOneOperator::new(z.clone(), e(3, 0)).is_err());
        assert!(RankOneOperator::new(e(3, 0), z).is_err());
    }

    #[test]
    fn rank_of_zero_is_zero() {
        let a = ComplexMatrix::zeros(3).unwrap();
        assert_eq!(spectral_rank(&a, 20, 1e-8, 1).unwrap(), 0);
    }

    #[test]
    fn rank_of_rank_one_is_one() {
        let a = outer(&e(3, 0), &e(3, 1)).unwrap();
        assert_eq!(spectral_rank(&a, 50, 1e-8, 1).unwrap(), 1);
    }

    #[test]
    fn rank_of_diag_1_2_0() {
        let a = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]).unwrap();
        // algebraic-rank oracle through singular values
        let sv = linalg::singular_values(&a).unwrap();
        let algebraic = sv.iter().filter(|&&s| s > 1e-8 * sv[0]).count();
        assert_eq!(algebraic, 2);
        assert_eq!(spectral_rank(&a, 200, 1e-8, 7).unwrap(), 2);
    }

    #[test]
    fn rank_is_scale_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let a = sample::gaussian_matrix(4, &mut rng).unwrap();
        let r1 = spectral_rank(&a, 60, 1e-8, 5).unwrap();
        let r2 = spectral_rank(&a.scale(c(37.5, -2.0)).unwrap(), 60, 1e-8, 5).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn witness_single_idempotent() {
        let p = outer(&e(2, 0), &e(2, 0)).unwrap();
        let fam = IdempotentFamily::new(vec![(c(2.0, 0.0), p)]).unwrap();
        let (a, y) = construct_commuting_witness(&fam, &[c(3.0, 0.0)]).unwrap();
        assert!((y.get(0, 0) - c(1.5, 0.0)).norm() < 1e-15);
        let ya = y.matmul(&a).unwrap();
        let s = SpectrumSet::from_eigenvalues(&linalg::eig(&ya).unwrap(), 1e-9).unwrap();
        let nonzero: Vec<_> = s.points().iter().filter(|p| p.value.norm() > 1e-9).collect();
        assert_eq!(nonzero.len(), 1);
        assert!((nonzero[0].value - c(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn witness_diag_1_2_0() {
        let p1 = outer(&e(3, 0), &e(3, 0)).unwrap();
        let p2 = outer(&e(3, 1), &e(3, 1)).unwrap();
        let fam = IdempotentFamily::new(vec![(c(1.0, 0.0), p1), (c(2.0, 0.0), p2)]).unwrap();
        let (a, y) = construct_commuting_witness(&fam, &[c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let comm = y.matmul(&a).unwrap().sub(&a.matmul(&y).unwrap()).unwrap();
        assert!(comm.frobenius_norm() < 1e-12);
        let ya = y.matmul(&a).unwrap();
        let s = SpectrumSet::from_eigenvalues(&linalg::eig(&ya).unwrap(), 1e-9).unwrap();
        let count = s.points().iter().filter(|p| p.value.norm() > 1e-9).count();
        assert_eq!(count, 2);
    }

    #[test]
    fn non_orthogonal_family_rejected() {
        let p1 = outer(&e(2, 0), &e(2, 0)).unwrap();
        // p2 idempotent but p1·p2 ≠ 0
        let u = ComplexVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let p2 = outer(&u, &e(2, 1)).unwrap();
        let err = IdempotentFamily::new(vec![(c(1.0, 0.0), p1), (c(1.0, 0.0), p2)]);
        assert!(matches!(err, Err(Error::Validation(_))));
    }

    #[test]
    fn repeated_alphas_rejected() {
        let p1 = outer(&e(2, 0), &e(2, 0)).unwrap();
        let p2 = outer(&e(2, 1), &e(2, 1)).unwrap();
        let fam = IdempotentFamily::new(vec![(c(1.0, 0.0), p1), (c(2.0, 0.0), p2)]).unwrap();
        let err = construct_commuting_witness(&fam, &[c(3.0, 0.0), c(3.0, 0.0)]);
        assert!(matches!(err, Err(Error::Input(_))));
    }

    #[test]
    fn diff_check_zero_perturbation() {
        let x = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let a = ComplexMatrix::zeros(2).unwrap();
        let d = commuting_diff_check(&x, &a, 1e-6).unwrap();
        assert_eq!(d, CommutingDiff { new_count: 0, lost_count: 0, rank_a: 0 });
    }

    #[test]
    fn diff_check_adds_one_point() {
        let x = ComplexMatrix::zeros(3).unwrap();
        let a = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let d = commuting_diff_check(&x, &a, 1e-6).unwrap();
        assert_eq!(d, CommutingDiff { new_count: 1, lost_count: 0, rank_a: 1 });
    }

    #[test]
    fn diff_check_moves_one_point() {
        let x = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        let a = ComplexMatrix::diagonal(&[c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let d = commuting_diff_check(&x, &a, 1e-6).unwrap();
        assert_eq!(d, CommutingDiff { new_count: 1, lost_count: 1, rank_a: 1 });
    }

    #[test]
    fn diff_check_rejects_noncommuting() {
        let x = outer(&e(2, 0), &e(2, 1)).unwrap();
        let a = outer(&e(2, 1), &e(2, 0)).unwrap();
        assert!(matches!(
            commuting_diff_check(&x, &a, 1e-8),
            Err(Error::Precondition(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn tau_is_linear(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 4;
            let a = RankOneOperator::new(
                sample::gaussian_vector(n, &mut rng).unwrap(),
                sample::gaussian_vector(n, &mut rng).unwrap(),
            ).unwrap();
            let x = sample::gaussian_matrix(n, &mut rng).unwrap();
            let y = sample::gaussian_matrix(n, &mut rng).unwrap();
            let alpha = sample::gaussian_complex(&mut rng);
            let beta = sample::gaussian_complex(&mut rng);
            let combo = x.scale(alpha).unwrap().add(&y.scale(beta).unwrap()).unwrap();
            let lhs = a.tau(&combo).unwrap();
            let rhs = alpha * a.tau(&x).unwrap() + beta * a.tau(&y).unwrap();
            let scale = a.matrix().frobenius_norm()
                * (x.frobenius_norm() + y.frobenius_norm())
                * (alpha.norm() + beta.norm()).max(1.0);
            prop_assert!((lhs - rhs).norm() <= 1e-10 * scale.max(1.0));
        }
    }
}
