//! Machine-readable output: JSON, CSV, and 8-bit PGM rasters.
//!
//! Everything is emitted through one float formatter using 17
//! significant digits, so round-tripping is exact and repeated runs are
//! byte-identical. Complex numbers always appear as separate `re`/`im`
//! fields.

use num_complex::Complex64;
use std::path::Path;

use crate::error::Result;
use crate::perturb::{DiscontinuityReport, LaurentCoefficients, LevelSetOutcome, MomentFunctional, ScanTable};
use crate::spectra::{GridRegion, HoleReport, SpectrumSet};

/// 17 significant digits: enough to reproduce any f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

pub fn fmt_usize(x: usize) -> String {
    x.to_string()
}

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

pub fn json_string(s: &str) -> String {
    format!("\"{}\"", esc(s))
}

fn complex_fields(z: Complex64) -> String {
    format!("\"re\":{},\"im\":{}", fmt_f64(z.re), fmt_f64(z.im))
}

/// `{"cluster_tol": t, "points": [{"re": …, "im": …, "mult": …}, …]}`
pub fn spectrum_to_json(s: &SpectrumSet) -> String {
    let points: Vec<String> = s
        .points()
        .iter()
        .map(|p| format!("{{{},\"mult\":{}}}", complex_fields(p.value), p.multiplicity))
        .collect();
    format!(
        "{{\"cluster_tol\":{},\"points\":[{}]}}",
        fmt_f64(s.cluster_tol()),
        points.join(",")
    )
}

pub fn holes_to_json(r: &HoleReport) -> String {
    let holes: Vec<String> = r
        .holes
        .iter()
        .map(|h| {
            format!(
                "{{{},\"cell_count\":{},\"area_estimate\":{}}}",
                complex_fields(h.representative),
                h.cell_count,
                fmt_f64(h.area_estimate)
            )
        })
        .collect();
    format!(
        "{{\"unbounded_component_cells\":{},\"holes\":[{}]}}",
        r.unbounded_component_cells,
        holes.join(",")
    )
}

/// `{"disk":{"re","im","radius"},"rows":[{"beta","eig_in_disk","min_smin","hausdorff"}]}`
pub fn discontinuity_to_json(r: &DiscontinuityReport) -> String {
    let rows: Vec<String> = r
        .rows
        .iter()
        .map(|row| {
            format!(
                "{{\"beta\":{},\"eig_in_disk\":{},\"min_smin\":{},\"hausdorff\":{}}}",
                fmt_f64(row.beta),
                row.eig_in_disk,
                fmt_f64(row.min_smin_on_disk),
                fmt_f64(row.hausdorff_to_beta1)
            )
        })
        .collect();
    format!(
        "{{\"disk\":{{{},\"radius\":{}}},\"rows\":[{}]}}",
        complex_fields(r.disk.center),
        fmt_f64(r.disk.radius),
        rows.join(",")
    )
}

pub fn scan_to_json(t: &ScanTable) -> String {
    let rows: Vec<String> = t
        .rows
        .iter()
        .map(|row| {
            format!(
                "{{\"alpha\":{{{}}},\"count_above_threshold\":{},\"hausdorff_to_alpha0\":{},\"spectrum\":{}}}",
                complex_fields(row.alpha),
                row.count_above_threshold,
                fmt_f64(row.hausdorff_to_alpha0),
                spectrum_to_json(&row.spectrum)
            )
        })
        .collect();
    format!(
        "{{\"threshold\":{},\"rows\":[{}]}}",
        fmt_f64(t.threshold),
        rows.join(",")
    )
}

pub fn levelset_to_json(beta: Complex64, out: &LevelSetOutcome) -> String {
    let roots: Vec<String> = out
        .roots
        .iter()
        .map(|r| format!("{{{}}}", complex_fields(*r)))
        .collect();
    let diags: Vec<String> = out
        .diagnostics
        .iter()
        .map(|d| {
            format!(
                "{{\"candidate\":{{{}}},\"refined\":{{{}}},\"residual\":{},\"newton_iters\":{},\"converged\":{}}}",
                complex_fields(d.candidate),
                complex_fields(d.refined),
                fmt_f64(d.residual),
                d.newton_iters,
                d.converged
            )
        })
        .collect();
    format!(
        "{{\"beta\":{{{}}},\"roots\":[{}],\"diagnostics\":[{}]}}",
        complex_fields(beta),
        roots.join(","),
        diags.join(",")
    )
}

pub fn moment_functional_to_json(mf: &MomentFunctional, slope: Option<f64>) -> String {
    let weights: Vec<String> = mf
        .weights()
        .entries()
        .iter()
        .map(|w| format!("{{{}}}", complex_fields(*w)))
        .collect();
    let residuals: Vec<String> = mf.residuals().iter().map(|&r| fmt_f64(r)).collect();
    let slope_field = match slope {
        Some(s) => format!(",\"order_slope\":{}", fmt_f64(s)),
        None => String::new(),
    };
    format!(
        "{{\"K\":{},\"residuals\":[{}],\"leading_coeff\":{{{}}}{},\"weights\":[{}]}}",
        mf.order(),
        residuals.join(","),
        complex_fields(mf.leading_coeff()),
        slope_field,
        weights.join(",")
    )
}

pub fn rank_to_json(rank: usize, probes: usize, tol: f64, seed: u64) -> String {
    format!(
        "{{\"rank\":{rank},\"probes\":{probes},\"tol\":{},\"seed\":{seed}}}",
        fmt_f64(tol)
    )
}

/// CSV for Laurent coefficients: `j,re,im` rows.
pub fn laurent_to_csv(lc: &LaurentCoefficients) -> String {
    let mut out = String::from("j,re,im\n");
    for (j, coeff) in lc.coeffs.iter().enumerate() {
        out.push_str(&format!("{j},{},{}\n", fmt_f64(coeff.re), fmt_f64(coeff.im)));
    }
    out
}

pub fn laurent_to_json(lc: &LaurentCoefficients, witness_tol: f64) -> String {
    let coeffs: Vec<String> = lc
        .coeffs
        .iter()
        .map(|c| format!("{{{}}}", complex_fields(*c)))
        .collect();
    format!(
        "{{\"fingerprint\":\"{:016x}\",\"essential_singularity_witness\":{},\"witness_tol\":{},\"coeffs\":[{}]}}",
        lc.fingerprint,
        lc.essential_singularity_witness(witness_tol),
        fmt_f64(witness_tol),
        coeffs.join(",")
    )
}

/// CSV for grids: a header line `re_min,re_max,im_min,im_max,nx,ny`,
/// then `ny` lines of `nx` comma-separated field values (row-major,
/// `iy` ascending).
pub fn grid_to_csv(g: &GridRegion) -> String {
    let mut out = format!(
        "{},{},{},{},{},{}\n",
        fmt_f64(g.window.re_min),
        fmt_f64(g.window.re_max),
        fmt_f64(g.window.im_min),
        fmt_f64(g.window.im_max),
        g.nx,
        g.ny
    );
    for iy in 0..g.ny {
        let row: Vec<String> = (0..g.nx).map(|ix| fmt_f64(g.value(ix, iy))).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Binary 8-bit PGM (P5). The field is mapped linearly from its own
/// [min, max] onto 0…255; rows run top-to-bottom (descending imaginary
/// part) so portraits display upright.
pub fn grid_to_pgm(g: &GridRegion) -> Vec<u8> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in &g.field {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut out = format!("P5\n{} {}\n255\n", g.nx, g.ny).into_bytes();
    for iy in (0..g.ny).rev() {
        for ix in 0..g.nx {
            let t = ((g.value(ix, iy) - lo) / span).clamp(0.0, 1.0);
            out.push((t * 255.0).round() as u8);
        }
    }
    out
}

pub fn write_text(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content)?;
    Ok(())
}

pub fn write_bytes(path: &Path, content: &[u8]) -> Result<()> {
    std::fs::write(path, content)?;
    Ok(())
}
