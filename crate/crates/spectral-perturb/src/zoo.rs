//! Stock operators behind one declarative spec type.
//!
//! Every CLI invocation names its operator as `kind:dim[:param=value,…]`,
//! e.g. `volterra:512`, `mult-circle:64:f=z`, `shift:64`. The same
//! constructors are available programmatically, plus the two composite
//! builders: the Volterra pair (quadrature operator + quasinilpotent
//! rank-one) and the circle model (diagonal multiplication operator +
//! hole-filling perturbation).

use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{outer, ComplexMatrix, ComplexVector};
use crate::perturb::{self, MomentFunctional};
use crate::socle::RankOneOperator;
use crate::spectra::{self, HoleReport, SpectrumSet, Window};

/// Symbol of a circle multiplication operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircleSymbol {
    /// `f(z) = z^p` (p may be negative).
    Power(i32),
    /// Constant function.
    Const(Complex64),
}

/// Named vector presets used by the CLI form of rank-one operators.
///
/// `sin`, `cos` and `trapz` refer to the uniform grid `t_i = i·h`,
/// `h = 2π/(n−1)`, matching the Volterra discretization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorSpec {
    Basis(usize),
    Ones,
    Sin,
    Cos,
    Trapezoid,
}

impl VectorSpec {
    pub fn realize(&self, n: usize) -> Result<ComplexVector> {
        let h = 2.0 * PI / (n as f64 - 1.0);
        match self {
            VectorSpec::Basis(k) => ComplexVector::basis(n, *k),
            VectorSpec::Ones => ComplexVector::ones(n),
            VectorSpec::Sin => {
                ComplexVector::from_fn(n, |i| Complex64::new((h * i as f64).sin(), 0.0))
            }
            VectorSpec::Cos => {
                ComplexVector::from_fn(n, |i| Complex64::new((h * i as f64).cos(), 0.0))
            }
            VectorSpec::Trapezoid => ComplexVector::from_fn(n, |i| {
                let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                Complex64::new(h * w, 0.0)
            }),
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "ones" => Ok(VectorSpec::Ones),
            "sin" => Ok(VectorSpec::Sin),
            "cos" => Ok(VectorSpec::Cos),
            "trapz" => Ok(VectorSpec::Trapezoid),
            _ => {
                if let Some(k) = s.strip_prefix('e') {
                    let idx: usize = k
                        .parse()
                        .map_err(|_| Error::input(format!("bad basis vector `{s}`")))?;
                    Ok(VectorSpec::Basis(idx))
                } else {
                    Err(Error::input(format!(
                        "unknown vector preset `{s}` (use e<k>, ones, sin, cos, trapz)"
                    )))
                }
            }
        }
    }
}

impl fmt::Display for VectorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VectorSpec::Basis(k) => write!(f, "e{k}"),
            VectorSpec::Ones => write!(f, "ones"),
            VectorSpec::Sin => write!(f, "sin"),
            VectorSpec::Cos => write!(f, "cos"),
            VectorSpec::Trapezoid => write!(f, "trapz"),
        }
    }
}

/// Operator kinds with their kind-specific parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorKind {
    /// Subdiagonal ones (nilpotent truncated shift).
    Shift,
    /// Subdiagonal entries from a weight list (length n−1).
    WeightedShift(Vec<Complex64>),
    /// `J_n(0)`: superdiagonal ones.
    Jordan,
    /// Composite-trapezoid quadrature of `(Vf)(t) = ∫₀ᵗ f` on `n`
    /// uniform nodes over `[0, T]`.
    Volterra { interval: f64 },
    /// `diag(f(z_i))` at the n-th roots of unity.
    MultCircle { symbol: CircleSymbol },
    /// `u · φᵀ` from named presets.
    RankOne { u: VectorSpec, phi: VectorSpec },
    /// Shift with corner entry 1: the cyclic shift, spectrum = n-th
    /// roots of unity.
    CirculantClosure,
}

/// Declarative description of a zoo operator: kind plus dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    pub dim: usize,
}

impl OperatorSpec {
    pub fn new(kind: OperatorKind, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("operator dimension must be at least 1"));
        }
        Ok(OperatorSpec { kind, dim })
    }

    /// Parse the canonical string form `kind:dim[:param=value,…]`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut parts = s.splitn(3, ':');
        let kind_str = parts
            .next()
            .ok_or_else(|| Error::input("empty operator spec"))?;
        let dim_str = parts
            .next()
            .ok_or_else(|| Error::input(format!("operator spec `{s}` is missing a dimension")))?;
        let dim: usize = dim_str
            .parse()
            .map_err(|_| Error::input(format!("bad dimension `{dim_str}` in `{s}`")))?;
        let params = parse_params(parts.next().unwrap_or(""))?;
        let get = |key: &str| params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        for (k, _) in &params {
            let known = match kind_str {
                "volterra" => k == "T",
                "mult-circle" | "mult_circle" => k == "f",
                "weighted-shift" | "weighted_shift" => k == "w",
                "rank-one" | "rank_one" => k == "u" || k == "phi",
                _ => false,
            };
            if !known {
                return Err(Error::input(format!(
                    "unknown parameter `{k}` for operator kind `{kind_str}`"
                )));
            }
        }
        let kind = match kind_str {
            "shift" => OperatorKind::Shift,
            "jordan" => OperatorKind::Jordan,
            "circulant-closure" | "circulant_closure" | "circulant" => {
                OperatorKind::CirculantClosure
            }
            "volterra" => {
                let interval = match get("T") {
                    Some(v) => v
                        .parse::<f64>()
                        .map_err(|_| Error::input(format!("bad interval length `{v}`")))?,
                    None => 2.0 * PI,
                };
                OperatorKind::Volterra { interval }
            }
            "mult-circle" | "mult_circle" => {
                let symbol = match get("f") {
                    None | Some("z") => CircleSymbol::Power(1),
                    Some(v) => {
                        if let Some(p) = v.strip_prefix("z^") {
                            CircleSymbol::Power(p.parse().map_err(|_| {
                                Error::input(format!("bad power in symbol `{v}`"))
                            })?)
                        } else if let Ok(cst) = v.parse::<f64>() {
                            CircleSymbol::Const(Complex64::new(cst, 0.0))
                        } else {
                            return Err(Error::input(format!(
                                "unknown circle symbol `{v}` (use z, z^<int>, or a real constant)"
                            )));
                        }
                    }
                };
                OperatorKind::MultCircle { symbol }
            }
            "weighted-shift" | "weighted_shift" => {
                let list = get("w").ok_or_else(|| {
                    Error::input("weighted-shift requires w=<comma-separated weights>")
                })?;
                let weights: Result<Vec<Complex64>> = list
                    .split(',')
                    .map(|t| {
                        t.parse::<f64>()
                            .map(|x| Complex64::new(x, 0.0))
                            .map_err(|_| Error::input(format!("bad weight `{t}`")))
                    })
                    .collect();
                OperatorKind::WeightedShift(weights?)
            }
            "rank-one" | "rank_one" => {
                let u = VectorSpec::parse(
                    get("u").ok_or_else(|| Error::input("rank-one requires u=<preset>"))?,
                )?;
                let phi = VectorSpec::parse(
                    get("phi").ok_or_else(|| Error::input("rank-one requires phi=<preset>"))?,
                )?;
                OperatorKind::RankOne { u, phi }
            }
            other => {
                return Err(Error::input(format!("unknown operator kind `{other}`")));
            }
        };
        OperatorSpec::new(kind, dim)
    }
}

/// Split `a=1,b=2,3,c=x` into pairs, letting list values keep their
/// commas: a bare segment (no `=`) extends the previous value.
fn parse_params(s: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    if s.is_empty() {
        return Ok(out);
    }
    for seg in s.split(',') {
        if let Some((k, v)) = seg.split_once('=') {
            out.push((k.trim().to_string(), v.trim().to_string()));
        } else if let Some(last) = out.last_mut() {
            last.1.push(',');
            last.1.push_str(seg.trim());
        } else {
            return Err(Error::input(format!("malformed parameter segment `{seg}`")));
        }
    }
    Ok(out)
}

impl fmt::Display for OperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            OperatorKind::Shift => write!(f, "shift:{}", self.dim),
            OperatorKind::Jordan => write!(f, "jordan:{}", self.dim),
            OperatorKind::CirculantClosure => write!(f, "circulant-closure:{}", self.dim),
            OperatorKind::Volterra { interval } => {
                if (*interval - 2.0 * PI).abs() < 1e-15 {
                    write!(f, "volterra:{}", self.dim)
                } else {
                    write!(f, "volterra:{}:T={}", self.dim, interval)
                }
            }
            OperatorKind::MultCircle { symbol } => match symbol {
                CircleSymbol::Power(1) => write!(f, "mult-circle:{}:f=z", self.dim),
                CircleSymbol::Power(p) => write!(f, "mult-circle:{}:f=z^{}", self.dim, p),
                CircleSymbol::Const(cst) => {
                    write!(f, "mult-circle:{}:f={}", self.dim, cst.re)
                }
            },
            OperatorKind::WeightedShift(w) => {
                write!(f, "weighted-shift:{}:w=", self.dim)?;
                for (i, x) in w.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", x.re)?;
                }
                Ok(())
            }
            OperatorKind::RankOne { u, phi } => {
                write!(f, "rank-one:{}:u={},phi={}", self.dim, u, phi)
            }
        }
    }
}

/// Materialize the spec as a dense matrix.
pub fn build(spec: &OperatorSpec) -> Result<ComplexMatrix> {
    let n = spec.dim;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    match &spec.kind {
        OperatorKind::Shift => {
            ComplexMatrix::from_fn(n, |i, j| if i == j + 1 { one } else { zero })
        }
        OperatorKind::Jordan => {
            ComplexMatrix::from_fn(n, |i, j| if j == i + 1 { one } else { zero })
        }
        OperatorKind::CirculantClosure => ComplexMatrix::from_fn(n, |i, j| {
            if i == j + 1 || (i == 0 && j == n - 1 && n > 1) {
                one
            } else {
                zero
            }
        }),
        OperatorKind::WeightedShift(w) => {
            if w.len() + 1 != n {
                return Err(Error::input(format!(
                    "weighted shift of dimension {n} needs {} weights, got {}",
                    n - 1,
                    w.len()
                )));
            }
            ComplexMatrix::from_fn(n, |i, j| if i == j + 1 { w[j] } else { zero })
        }
        OperatorKind::Volterra { interval } => {
            if n < 2 {
                return Err(Error::input("volterra discretization needs at least 2 nodes"));
            }
            if !(interval.is_finite() && *interval > 0.0) {
                return Err(Error::input("interval length must be positive"));
            }
            let h = interval / (n as f64 - 1.0);
            ComplexMatrix::from_fn(n, |i, j| {
                if i == 0 || j > i {
                    zero
                } else {
                    let w = if j == 0 || j == i { 0.5 } else { 1.0 };
                    Complex64::new(h * w, 0.0)
                }
            })
        }
        OperatorKind::MultCircle { symbol } => {
            let samples = circle_samples(n, *symbol);
            ComplexMatrix::diagonal(&samples)
        }
        OperatorKind::RankOne { u, phi } => {
            let uv = u.realize(n)?;
            let pv = phi.realize(n)?;
            outer(&uv, &pv)
        }
    }
}

/// Samples of a circle symbol at the n-th roots of unity.
pub fn circle_samples(n: usize, symbol: CircleSymbol) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let th = 2.0 * PI * k as f64 / n as f64;
            match symbol {
                CircleSymbol::Power(p) => Complex64::from_polar(1.0, th * p as f64),
                CircleSymbol::Const(cst) => cst,
            }
        })
        .collect()
}

/// The Volterra pair: quadrature operator `V` on `[0, 2π]` and the
/// quasinilpotent rank-one `Q = g⊗φ` with `g = sin` samples and `φ` the
/// trapezoid integration functional. `τ_Q(1) = ∫₀²π sin = 0` up to
/// quadrature error, so `Q² = τ_Q(1)·Q ≈ 0`.
pub fn volterra_pair(n: usize) -> Result<(ComplexMatrix, RankOneOperator)> {
    if n < 8 {
        return Err(Error::input("volterra pair needs at least 8 nodes"));
    }
    let spec = OperatorSpec::new(OperatorKind::Volterra { interval: 2.0 * PI }, n)?;
    let v = build(&spec)?;
    let u = VectorSpec::Sin.realize(n)?;
    let phi = VectorSpec::Trapezoid.realize(n)?;
    Ok((v, RankOneOperator::new(u, phi)?))
}

/// The circle model: multiplication operator `L = diag(f_samples)`, a
/// moment functional filling the hole of `σ(L)` at 0, the perturbation
/// matrix `𝟙·wᵀ`, and the hole report of `σ(L)` that justified it.
#[derive(Debug, Clone)]
pub struct CircleModel {
    pub multiplication: ComplexMatrix,
    pub perturbation: ComplexMatrix,
    pub functional: MomentFunctional,
    pub holes: HoleReport,
}

/// Build the circle model from symbol samples, with `K` moment
/// conditions. Errors when `σ(L)` has no hole containing 0.
pub fn circle_model(f_samples: &[Complex64], k: usize) -> Result<CircleModel> {
    if f_samples.is_empty() {
        return Err(Error::input("need at least one sample"));
    }
    let sigma = SpectrumSet::from_eigenvalues(f_samples, 0.0)?;

    // Raster σ(L) on a padded window and require the origin to sit in a
    // bounded complement component.
    let mut re_lo = 0.0f64;
    let mut re_hi = 0.0f64;
    let mut im_lo = 0.0f64;
    let mut im_hi = 0.0f64;
    for p in sigma.points() {
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
    let holes = spectra::detect_holes(&sigma, window, (res, res), thickening)?;
    let labels = spectra::raster_labels(&sigma, window, (res, res), thickening)?;
    match labels.label_at(Complex64::new(0.0, 0.0)) {
        Some(l) if l >= 1 => {}
        _ => {
            return Err(Error::Validation(
                "σ(L) has no hole containing 0; nothing to fill".into(),
            ))
        }
    }

    let (functional, perturbation) = perturb::hole_filling_functional(f_samples, k)?;
    Ok(CircleModel {
        multiplication: ComplexMatrix::diagonal(f_samples)?,
        perturbation,
        functional,
        holes,
    })
}
