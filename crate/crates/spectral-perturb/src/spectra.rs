//! The spectrum as a set-valued object.
//!
//! Eigenvalue lists become [`SpectrumSet`]s (deduplicated points with
//! multiplicities), and the plane-topology notions — holes of the
//! spectrum, polynomially convex hulls — are computed on a raster:
//! spectra are thickened onto a grid, the complement is flood-filled
//! from the window boundary, and every bounded complement component is
//! a hole. Resolvent-norm fields (pseudospectra) use the same grids.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};

/// Rectangular window in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let w = Window { re_min, re_max, im_min, im_max };
        if !(re_min.is_finite() && re_max.is_finite() && im_min.is_finite() && im_max.is_finite()) {
            return Err(Error::input("window bounds must be finite"));
        }
        if re_max <= re_min || im_max <= im_min {
            return Err(Error::input("window must be non-degenerate"));
        }
        Ok(w)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    /// Square window centered on the origin with half-width `r`.
    pub fn centered(r: f64) -> Result<Self> {
        Window::new(-r, r, -r, r)
    }
}

/// One deduplicated spectrum point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Finite multiset of complex eigenvalues with a clustering tolerance.
///
/// Distinct points are pairwise farther apart than `cluster_tol`;
/// multiplicities sum to the ambient dimension when the set came from a
/// matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSet {
    points: Vec<SpectrumPoint>,
    cluster_tol: f64,
}

fn canonical_order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.norm()
        .total_cmp(&b.norm())
        .then(a.arg().total_cmp(&b.arg()))
}

impl SpectrumSet {
    /// Build directly from points; enforces the pairwise-separation
    /// invariant but performs no clustering.
    pub fn from_points(points: Vec<(Complex64, usize)>, cluster_tol: f64) -> Result<Self> {
        if cluster_tol < 0.0 || !cluster_tol.is_finite() {
            return Err(Error::input("cluster tolerance must be finite and nonnegative"));
        }
        let mut pts: Vec<SpectrumPoint> = points
            .into_iter()
            .map(|(value, multiplicity)| SpectrumPoint { value, multiplicity })
            .collect();
        for p in &pts {
            if !(p.value.re.is_finite() && p.value.im.is_finite()) {
                return Err(Error::input("spectrum points must be finite"));
            }
            if p.multiplicity == 0 {
                return Err(Error::input("multiplicities must be at least 1"));
            }
        }
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if (pts[i].value - pts[j].value).norm() <= cluster_tol {
                    return Err(Error::Validation(format!(
                        "points {} and {} are within the cluster tolerance",
                        pts[i].value, pts[j].value
                    )));
                }
            }
        }
        pts.sort_by(|a, b| canonical_order(&a.value, &b.value));
        Ok(SpectrumSet { points: pts, cluster_tol })
    }

    /// Cluster a raw eigenvalue list. Used by [`spectrum`]; exposed for
    /// callers holding eigenvalues from elsewhere.
    pub fn from_eigenvalues(eigenvalues: &[Complex64], cluster_tol: f64) -> Result<Self> {
        if cluster_tol < 0.0 || !cluster_tol.is_finite() {
            return Err(Error::input("cluster tolerance must be finite and nonnegative"));
        }
        let mut evs: Vec<Complex64> = eigenvalues.to_vec();
        evs.sort_by(canonical_order);

        // Greedy pass: clusters of diameter ≤ cluster_tol, merge order
        // ascending by |λ| with ties broken by argument.
        let mut clusters: Vec<Vec<Complex64>> = Vec::new();
        'outer: for ev in evs {
            for cl in clusters.iter_mut() {
                if cl.iter().all(|m| (m - ev).norm() <= cluster_tol) {
                    cl.push(ev);
                    continue 'outer;
                }
            }
            clusters.push(vec![ev]);
        }
        let mut reps: Vec<SpectrumPoint> = clusters
            .into_iter()
            .map(|cl| {
                let mean = cl.iter().sum::<Complex64>() / cl.len() as f64;
                SpectrumPoint { value: mean, multiplicity: cl.len() }
            })
            .collect();

        // Representative pass: near-chain clusters can leave centroids
        // within tolerance of each other; merge until separation holds.
        loop {
            let mut merged = false;
            'scan: for i in 0..reps.len() {
                for j in i + 1..reps.len() {
                    if (reps[i].value - reps[j].value).norm() <= cluster_tol {
                        let (a, b) = (reps[i], reps[j]);
                        let total = a.multiplicity + b.multiplicity;
                        let mean = (a.value * a.multiplicity as f64
                            + b.value * b.multiplicity as f64)
                            / total as f64;
                        reps[i] = SpectrumPoint { value: mean, multiplicity: total };
                        reps.remove(j);
                        merged = true;
                        break 'scan;
                    }
                }
            }
            if !merged {
                break;
            }
        }
        reps.sort_by(|a, b| canonical_order(&a.value, &b.value));
        Ok(SpectrumSet { points: reps, cluster_tol })
    }

    pub fn points(&self) -> &[SpectrumPoint] {
        &self.points
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity).sum()
    }

    /// Distance from `z` to the nearest spectrum point.
    pub fn dist_to(&self, z: Complex64) -> f64 {
        self.points
            .iter()
            .map(|p| (p.value - z).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Spectrum of a matrix with eigenvalues merged at `cluster_tol`.
pub fn spectrum(m: &ComplexMatrix, cluster_tol: f64) -> Result<SpectrumSet> {
    let evs = linalg::eig(m)?;
    SpectrumSet::from_eigenvalues(&evs, cluster_tol)
}

/// Max modulus over the spectrum.
pub fn spectral_radius(s: &SpectrumSet) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::input("spectral radius of an empty spectrum"));
    }
    Ok(s.points().iter().map(|p| p.value.norm()).fold(0.0, f64::max))
}

/// Hausdorff distance between two spectra; multiplicities are ignored.
pub fn hausdorff(s1: &SpectrumSet, s2: &SpectrumSet) -> Result<f64> {
    if s1.is_empty() || s2.is_empty() {
        return Err(Error::input("hausdorff distance of an empty spectrum"));
    }
    let sup1 = s1
        .points()
        .iter()
        .map(|p| s2.dist_to(p.value))
        .fold(0.0, f64::max);
    let sup2 = s2
        .points()
        .iter()
        .map(|p| s1.dist_to(p.value))
        .fold(0.0, f64::max);
    Ok(sup1.max(sup2))
}

/// One bounded component of the complement of the thickened spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Hole {
    pub representative: Complex64,
    pub cell_count: usize,
    /// cell_count scaled by the grid cell area, in window units².
    pub area_estimate: f64,
}

/// Holes of a spectrum at one raster scale.
#[derive(Debug, Clone, PartialEq)]
pub struct HoleReport {
    pub holes: Vec<Hole>,
    pub unbounded_component_cells: usize,
}

/// Rectangular grid carrying a scalar field (resolvent magnitude or
/// membership). `field[iy * nx + ix]` with `ix` sweeping the real axis
/// and `iy` the imaginary axis, both ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRegion {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    pub field: Vec<f64>,
    /// Cells where the field was clipped at the cap or replaced after a
    /// per-cell kernel failure.
    pub clipped: Vec<bool>,
}

impl GridRegion {
    pub fn dx(&self) -> f64 {
        (self.window.re_max - self.window.re_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.window.im_max - self.window.im_min) / (self.ny - 1) as f64
    }

    pub fn node(&self, ix: usize, iy: usize) -> Complex64 {
        Complex64::new(
            self.window.re_min + ix as f64 * self.dx(),
            self.window.im_min + iy as f64 * self.dy(),
        )
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.field[iy * self.nx + ix]
    }
}

/// Field cap for resolvent portraits: log₁₀(1/smin) saturates here.
pub const PSEUDOSPECTRUM_CAP: f64 = 16.0;

/// Raster labeling shared by hole detection, hulls, and disk checks.
///
/// `labels[iy*nx+ix]`: -1 = thickened spectrum, 0 = unbounded component
/// of the complement, k ≥ 1 = k-th hole in scan order.
#[derive(Debug, Clone)]
pub(crate) struct RasterLabels {
    pub nx: usize,
    pub ny: usize,
    pub window: Window,
    pub labels: Vec<i32>,
    pub hole_count: usize,
}

impl RasterLabels {
    pub fn dx(&self) -> f64 {
        (self.window.re_max - self.window.re_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.window.im_max - self.window.im_min) / (self.ny - 1) as f64
    }

    pub fn node(&self, ix: usize, iy: usize) -> Complex64 {
        Complex64::new(
            self.window.re_min + ix as f64 * self.dx(),
            self.window.im_min + iy as f64 * self.dy(),
        )
    }

    pub fn label_at(&self, z: Complex64) -> Option<i32> {
        let ix = ((z.re - self.window.re_min) / self.dx()).round() as isize;
        let iy = ((z.im - self.window.im_min) / self.dy()).round() as isize;
        if ix < 0 || iy < 0 || ix as usize >= self.nx || iy as usize >= self.ny {
            return None;
        }
        Some(self.labels[iy as usize * self.nx + ix as usize])
    }
}

fn check_raster_inputs(
    s: &SpectrumSet,
    window: Window,
    resolution: (usize, usize),
    thickening: f64,
) -> Result<(f64, f64)> {
    let (nx, ny) = resolution;
    if nx < 2 || ny < 2 {
        return Err(Error::input("grid resolution must be at least 2x2"));
    }
    if !(thickening.is_finite() && thickening > 0.0) {
        return Err(Error::input("thickening must be finite and positive"));
    }
    let dx = (window.re_max - window.re_min) / (nx - 1) as f64;
    let dy = (window.im_max - window.im_min) / (ny - 1) as f64;
    let step = dx.max(dy);
    if thickening < 2.0 * step {
        return Err(Error::input(format!(
            "thickening {thickening} must be at least twice the grid step {step}"
        )));
    }
    for p in s.points() {
        let v = p.value;
        if v.re - window.re_min < 2.0 * thickening
            || window.re_max - v.re < 2.0 * thickening
            || v.im - window.im_min < 2.0 * thickening
            || window.im_max - v.im < 2.0 * thickening
        {
            return Err(Error::input(format!(
                "window must contain {v} with margin at least twice the thickening"
            )));
        }
    }
    Ok((dx, dy))
}

/// Mark grid nodes within `thickening` of any spectrum point.
fn rasterize(s: &SpectrumSet, window: Window, nx: usize, ny: usize, thickening: f64) -> Vec<bool> {
    let dx = (window.re_max - window.re_min) / (nx - 1) as f64;
    let dy = (window.im_max - window.im_min) / (ny - 1) as f64;
    let mut mask = vec![false; nx * ny];
    let t2 = thickening * thickening;
    for p in s.points() {
        let v = p.value;
        let ix_lo = (((v.re - thickening) - window.re_min) / dx).floor().max(0.0) as usize;
        let ix_hi = ((((v.re + thickening) - window.re_min) / dx).ceil() as usize).min(nx - 1);
        let iy_lo = (((v.im - thickening) - window.im_min) / dy).floor().max(0.0) as usize;
        let iy_hi = ((((v.im + thickening) - window.im_min) / dy).ceil() as usize).min(ny - 1);
        for iy in iy_lo..=iy_hi {
            let y = window.im_min + iy as f64 * dy;
            for ix in ix_lo..=ix_hi {
                let x = window.re_min + ix as f64 * dx;
                let dr = x - v.re;
                let di = y - v.im;
                if dr * dr + di * di <= t2 {
                    mask[iy * nx + ix] = true;
                }
            }
        }
    }
    mask
}

/// Label the complement of `mask`: 0 for the component reachable from
/// the window boundary, k ≥ 1 for each bounded component (4-connectivity,
/// components numbered in row-major scan order).
fn label_complement(mask: &[bool], nx: usize, ny: usize) -> (Vec<i32>, usize) {
    let mut labels = vec![i32::MIN; nx * ny];
    for (i, &m) in mask.iter().enumerate() {
        if m {
            labels[i] = -1;
        }
    }
    let mut queue = std::collections::VecDeque::new();

    // Unbounded component first, seeded from every boundary cell.
    for ix in 0..nx {
        for iy in [0, ny - 1] {
            let idx = iy * nx + ix;
            if labels[idx] == i32::MIN {
                labels[idx] = 0;
                queue.push_back(idx);
            }
        }
    }
    for iy in 0..ny {
        for ix in [0, nx - 1] {
            let idx = iy * nx + ix;
            if labels[idx] == i32::MIN {
                labels[idx] = 0;
                queue.push_back(idx);
            }
        }
    }
    flood(&mut labels, &mut queue, nx, ny, 0);

    // Remaining complement cells form the holes.
    let mut next = 1;
    for start in 0..nx * ny {
        if labels[start] == i32::MIN {
            labels[start] = next;
            queue.push_back(start);
            flood(&mut labels, &mut queue, nx, ny, next);
            next += 1;
        }
    }
    (labels, (next - 1) as usize)
}

fn flood(
    labels: &mut [i32],
    queue: &mut std::collections::VecDeque<usize>,
    nx: usize,
    ny: usize,
    label: i32,
) {
    while let Some(idx) = queue.pop_front() {
        let ix = idx % nx;
        let iy = idx / nx;
        let mut push = |jx: usize, jy: usize, labels: &mut [i32], queue: &mut std::collections::VecDeque<usize>| {
            let j = jy * nx + jx;
            if labels[j] == i32::MIN {
                labels[j] = label;
                queue.push_back(j);
            }
        };
        if ix > 0 {
            push(ix - 1, iy, labels, queue);
        }
        if ix + 1 < nx {
            push(ix + 1, iy, labels, queue);
        }
        if iy > 0 {
            push(ix, iy - 1, labels, queue);
        }
        if iy + 1 < ny {
            push(ix, iy + 1, labels, queue);
        }
    }
}

/// Number of bounded complement components of an arbitrary mask.
pub(crate) fn mask_hole_count(mask: &[bool], nx: usize, ny: usize) -> usize {
    label_complement(mask, nx, ny).1
}

pub(crate) fn raster_labels(
    s: &SpectrumSet,
    window: Window,
    resolution: (usize, usize),
    thickening: f64,
) -> Result<RasterLabels> {
    check_raster_inputs(s, window, resolution, thickening)?;
    let (nx, ny) = resolution;
    let mask = rasterize(s, window, nx, ny, thickening);
    let (labels, hole_count) = label_complement(&mask, nx, ny);
    Ok(RasterLabels { nx, ny, window, labels, hole_count })
}

/// Detect the holes of a spectrum on a raster.
///
/// Nodes within `thickening` of a spectrum point are "spectrum"; the
/// complement is flood-filled from the window boundary; every remaining
/// 4-connected component is a hole.
pub fn detect_holes(
    s: &SpectrumSet,
    window: Window,
    resolution: (usize, usize),
    thickening: f64,
) -> Result<HoleReport> {
    let raster = raster_labels(s, window, resolution, thickening)?;
    let (nx, ny) = (raster.nx, raster.ny);
    let cell_area = raster.dx() * raster.dy();

    let mut counts = vec![0usize; raster.hole_count + 1];
    let mut sums = vec![Complex64::new(0.0, 0.0); raster.hole_count + 1];
    for iy in 0..ny {
        for ix in 0..nx {
            let l = raster.labels[iy * nx + ix];
            if l >= 0 {
                counts[l as usize] += 1;
                sums[l as usize] += raster.node(ix, iy);
            }
        }
    }
    let mut holes = Vec::new();
    for k in 1..=raster.hole_count {
        let centroid = sums[k] / counts[k] as f64;
        // Representative: the component node nearest to the centroid,
        // guaranteed to lie inside the hole even for non-convex shapes.
        let mut best = Complex64::new(f64::INFINITY, f64::INFINITY);
        let mut best_d = f64::INFINITY;
        for iy in 0..ny {
            for ix in 0..nx {
                if raster.labels[iy * nx + ix] == k as i32 {
                    let node = raster.node(ix, iy);
                    let d = (node - centroid).norm();
                    if d < best_d {
                        best_d = d;
                        best = node;
                    }
                }
            }
        }
        holes.push(Hole {
            representative: best,
            cell_count: counts[k],
            area_estimate: counts[k] as f64 * cell_area,
        });
    }
    Ok(HoleReport { holes, unbounded_component_cells: counts[0] })
}

/// Polynomially convex hull on a raster: spectrum cells plus all hole
/// cells, as a 0/1 membership field. The complement is exactly the
/// unbounded component, so applying the operation again changes nothing.
pub fn polynomial_hull(
    s: &SpectrumSet,
    window: Window,
    resolution: (usize, usize),
    thickening: f64,
) -> Result<GridRegion> {
    let raster = raster_labels(s, window, resolution, thickening)?;
    let field: Vec<f64> = raster
        .labels
        .iter()
        .map(|&l| if l == 0 { 0.0 } else { 1.0 })
        .collect();
    Ok(GridRegion {
        window,
        nx: raster.nx,
        ny: raster.ny,
        clipped: vec![false; field.len()],
        field,
    })
}

/// Resolvent-norm portrait: `field(λ) = log₁₀(1/smin(λI − m))`, clipped
/// at [`PSEUDOSPECTRUM_CAP`].
///
/// The matrix is reduced to Hessenberg form once; each grid node then
/// costs O(n²). Rows are computed in parallel and assembled in index
/// order, so the output is identical for any worker count.
pub fn pseudospectrum(
    m: &ComplexMatrix,
    window: Window,
    resolution: (usize, usize),
) -> Result<GridRegion> {
    let (nx, ny) = resolution;
    if nx < 2 || ny < 2 {
        return Err(Error::input("grid resolution must be at least 2x2"));
    }
    let hess = linalg::hessenberg(m)?;
    let dx = (window.re_max - window.re_min) / (nx - 1) as f64;
    let dy = (window.im_max - window.im_min) / (ny - 1) as f64;

    let rows: Vec<(Vec<f64>, Vec<bool>)> = (0..ny)
        .into_par_iter()
        .map(|iy| {
            let y = window.im_min + iy as f64 * dy;
            let mut row = Vec::with_capacity(nx);
            let mut clip = Vec::with_capacity(nx);
            for ix in 0..nx {
                let x = window.re_min + ix as f64 * dx;
                let s = linalg::smin_shifted_hessenberg(&hess.h, Complex64::new(x, y));
                let (v, c) = if !s.is_finite() || s <= 0.0 {
                    (PSEUDOSPECTRUM_CAP, true)
                } else {
                    let f = -s.log10();
                    if f >= PSEUDOSPECTRUM_CAP {
                        (PSEUDOSPECTRUM_CAP, true)
                    } else {
                        (f, false)
                    }
                };
                row.push(v);
                clip.push(c);
            }
            (row, clip)
        })
        .collect();

    let mut field = Vec::with_capacity(nx * ny);
    let mut clipped = Vec::with_capacity(nx * ny);
    for (row, clip) in rows {
        field.extend(row);
        clipped.extend(clip);
    }
    Ok(GridRegion { window, nx, ny, field, clipped })
}
