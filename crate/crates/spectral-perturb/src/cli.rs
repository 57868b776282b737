//! Batch command surface.
//!
//! One subcommand per analysis, reproducible by construction: a fixed
//! default seed, deterministic kernels, and worker-count-independent
//! parallel loops. Machine outputs go to `--json`/`--csv`/`--pgm`;
//! stdout carries a short human summary.
//!
//! Exit codes: 0 success, 1 analysis/assertion failure, 2 usage error.
//!
//! Flags (common): `--op <kind:dim[:p=v,…]>`, `--window a,b,c,d`,
//! `--res N[,M]`, `--tol t`, `--K k`, `--betas b1,…`, `--alphas a1,…`,
//! `--seed s`, `--json path`, `--csv path`, `--pgm path`,
//! `--threshold t`. Command-specific: `--perturb <opspec>` (the
//! perturbing operator; defaults to the sin⊗trapезoid pair for Volterra
//! operators and the hole-filling functional for circle models),
//! `--disk cre,cim,r` (probe), `--probes n` (rank), `--threads n`
//! (worker cap; also honored from `SPECTRAL_PERTURB_THREADS`).

use num_complex::Complex64;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::io;
use crate::linalg::ComplexMatrix;
use crate::perturb::{self, Disk};
use crate::socle::{self, RankOneOperator};
use crate::spectra::{self, Window};
use crate::verify;
use crate::zoo::{self, OperatorKind, OperatorSpec, VectorSpec};
use crate::DEFAULT_SEED;

const USAGE: &str = "\
usage: spectral-perturb <command> [flags]

commands:
  spectrum        eigenvalues merged into a SpectrumSet        (--op, [--tol --json])
  pseudospectrum  resolvent-norm portrait on a grid            (--op --window, [--res --csv --pgm])
  holes           bounded components of the complement         (--op, [--window --res --json])
  rank            spectral rank via Gaussian probes            (--op, [--probes --tol --seed --json])
  laurent         resolvent coefficients τ_P(xʲ)               (--op, [--perturb --K --tol --csv --json])
  levelset        roots of τ_P((λ−x)⁻¹) = β in a window        (--op --window --betas β, [--perturb --tol --json])
  holefill        moment functional filling the hole at 0      (--op, [--K --json])
  probe           β-sweep of x + βa over a disk in a hole      (--op --disk, [--perturb --K --betas --res --json])
  scan            α-sweep of σ(x + αQ)                         (--op --alphas, [--perturb --threshold --json])
  verify          run the full property suite                  ([--seed --json])

flags:
  --op kind:dim[:p=v,…]   operator (shift, weighted-shift, jordan, volterra,
                          mult-circle, rank-one, circulant-closure)
  --perturb kind:dim…     perturbing operator spec
  --window a,b,c,d        re_min,re_max,im_min,im_max
  --res N[,M]             grid resolution (probe: points across the disk)
  --tol t                 tolerance (meaning is per-command)
  --K k                   moment order / highest Laurent index
  --betas b1,b2,…         β values (levelset takes exactly one)
  --alphas a1,a2,…        complex α values (forms: 1.5, 2i, 1+2i)
  --threshold t           magnitude threshold for scan counts
  --seed s                RNG seed (default fixed for reproducibility)
  --disk cre,cim,r        probe disk center and radius
  --probes n              probe count for rank (default 200)
  --threads n             cap worker threads (env SPECTRAL_PERTURB_THREADS)
  --json/--csv/--pgm p    output files
";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Pseudospectrum,
    Holes,
    Rank,
    Laurent,
    Levelset,
    Holefill,
    Probe,
    Scan,
    Verify,
}

impl Command {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "spectrum" => Ok(Command::Spectrum),
            "pseudospectrum" => Ok(Command::Pseudospectrum),
            "holes" => Ok(Command::Holes),
            "rank" => Ok(Command::Rank),
            "laurent" => Ok(Command::Laurent),
            "levelset" => Ok(Command::Levelset),
            "holefill" => Ok(Command::Holefill),
            "probe" => Ok(Command::Probe),
            "scan" => Ok(Command::Scan),
            "verify" => Ok(Command::Verify),
            _ => Err(Error::input(format!("unknown command `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub op: Option<OperatorSpec>,
    pub perturb: Option<OperatorSpec>,
    pub window: Option<Window>,
    pub res: Option<(usize, usize)>,
    pub tol: Option<f64>,
    pub k: Option<usize>,
    pub betas: Option<Vec<Complex64>>,
    pub alphas: Option<Vec<Complex64>>,
    pub threshold: Option<f64>,
    pub seed: Option<u64>,
    pub disk: Option<Disk>,
    pub probes: Option<usize>,
    pub threads: Option<usize>,
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub pgm: Option<PathBuf>,
}

/// Parsed command line.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub flags: Flags,
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::input("empty complex literal"));
    }
    if let Some(rest) = t.strip_suffix(['i', 'I']) {
        let bytes = rest.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let ch = bytes[i] as char;
            if (ch == '+' || ch == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                split = Some(i);
                break;
            }
        }
        let bad = || Error::input(format!("bad complex literal `{s}`"));
        match split {
            Some(i) => {
                let re: f64 = rest[..i].parse().map_err(|_| bad())?;
                let im = match &rest[i..] {
                    "+" => 1.0,
                    "-" => -1.0,
                    im_str => im_str.parse().map_err(|_| bad())?,
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im = match rest {
                    "" => 1.0,
                    "-" => -1.0,
                    "+" => 1.0,
                    other => other.parse().map_err(|_| bad())?,
                };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = t
            .parse()
            .map_err(|_| Error::input(format!("bad number `{s}`")))?;
        Ok(Complex64::new(re, 0.0))
    }
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::input(format!("bad {what} `{s}`")))
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::input(format!("bad {what} `{s}`")))
}

impl RunConfig {
    /// Parse a full argv (including the program name).
    pub fn parse<I: IntoIterator<Item = String>>(argv: I) -> Result<RunConfig> {
        let args: Vec<String> = argv.into_iter().skip(1).collect();
        let command = Command::parse(
            args.first()
                .map(String::as_str)
                .ok_or_else(|| Error::input("missing command"))?,
        )?;
        let mut flags = Flags::default();
        let mut it = args[1..].iter();
        while let Some(flag) = it.next() {
            let mut value = || {
                it.next()
                    .ok_or_else(|| Error::input(format!("flag `{flag}` needs a value")))
            };
            match flag.as_str() {
                "--op" => flags.op = Some(OperatorSpec::parse(value()?)?),
                "--perturb" => flags.perturb = Some(OperatorSpec::parse(value()?)?),
                "--window" => {
                    let v = value()?;
                    let parts: Vec<&str> = v.split(',').collect();
                    if parts.len() != 4 {
                        return Err(Error::input("--window needs a,b,c,d"));
                    }
                    flags.window = Some(Window::new(
                        parse_f64(parts[0], "window bound")?,
                        parse_f64(parts[1], "window bound")?,
                        parse_f64(parts[2], "window bound")?,
                        parse_f64(parts[3], "window bound")?,
                    )?);
                }
                "--res" => {
                    let v = value()?;
                    let parts: Vec<&str> = v.split(',').collect();
                    let nx = parse_usize(parts[0], "resolution")?;
                    let ny = if parts.len() > 1 {
                        parse_usize(parts[1], "resolution")?
                    } else {
                        nx
                    };
                    if parts.len() > 2 {
                        return Err(Error::input("--res takes N or N,M"));
                    }
                    flags.res = Some((nx, ny));
                }
                "--tol" => flags.tol = Some(parse_f64(value()?, "tolerance")?),
                "--K" => flags.k = Some(parse_usize(value()?, "order")?),
                "--betas" => {
                    let v = value()?;
                    let betas: Result<Vec<Complex64>> =
                        v.split(',').map(parse_complex).collect();
                    flags.betas = Some(betas?);
                }
                "--alphas" => {
                    let v = value()?;
                    let alphas: Result<Vec<Complex64>> =
                        v.split(',').map(parse_complex).collect();
                    flags.alphas = Some(alphas?);
                }
                "--threshold" => flags.threshold = Some(parse_f64(value()?, "threshold")?),
                "--seed" => {
                    flags.seed = Some(
                        value()?
                            .parse()
                            .map_err(|_| Error::input("bad seed"))?,
                    )
                }
                "--disk" => {
                    let v = value()?;
                    let parts: Vec<&str> = v.split(',').collect();
                    if parts.len() != 3 {
                        return Err(Error::input("--disk needs cre,cim,r"));
                    }
                    flags.disk = Some(Disk {
                        center: Complex64::new(
                            parse_f64(parts[0], "disk center")?,
                            parse_f64(parts[1], "disk center")?,
                        ),
                        radius: parse_f64(parts[2], "disk radius")?,
                    });
                }
                "--probes" => flags.probes = Some(parse_usize(value()?, "probe count")?),
                "--threads" => flags.threads = Some(parse_usize(value()?, "thread count")?),
                "--json" => flags.json = Some(PathBuf::from(value()?)),
                "--csv" => flags.csv = Some(PathBuf::from(value()?)),
                "--pgm" => flags.pgm = Some(PathBuf::from(value()?)),
                other => return Err(Error::input(format!("unknown flag `{other}`"))),
            }
        }
        Ok(RunConfig { command, flags })
    }
}

/// Run the CLI: parse, execute, map errors onto exit codes.
pub fn run<I: IntoIterator<Item = String>>(argv: I) -> i32 {
    let cfg = match RunConfig::parse(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            eprint!("{USAGE}");
            return 2;
        }
    };
    let threads = cfg.flags.threads.or_else(|| {
        std::env::var("SPECTRAL_PERTURB_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    let body = || match execute(&cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    };
    match threads {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(body),
            Err(e) => {
                eprintln!("error: cannot build thread pool: {e}");
                1
            }
        },
        _ => body(),
    }
}

fn required_op(flags: &Flags) -> Result<&OperatorSpec> {
    flags
        .op
        .as_ref()
        .ok_or_else(|| Error::input("this command requires --op"))
}

fn build_op(flags: &Flags) -> Result<ComplexMatrix> {
    zoo::build(required_op(flags)?)
}

/// The rank-one perturbation for laurent/levelset/scan: an explicit
/// `--perturb rank-one:…`, or the sin⊗trapezoid pair for Volterra
/// operators.
fn rank_one_perturbation(flags: &Flags, op: &OperatorSpec) -> Result<RankOneOperator> {
    if let Some(p) = &flags.perturb {
        if p.dim != op.dim {
            return Err(Error::input("--perturb dimension must match --op"));
        }
        match &p.kind {
            OperatorKind::RankOne { u, phi } => {
                RankOneOperator::new(u.realize(p.dim)?, phi.realize(p.dim)?)
            }
            _ => Err(Error::input("--perturb must be a rank-one operator here")),
        }
    } else {
        match &op.kind {
            OperatorKind::Volterra { .. } => RankOneOperator::new(
                VectorSpec::Sin.realize(op.dim)?,
                VectorSpec::Trapezoid.realize(op.dim)?,
            ),
            _ => Err(Error::input(
                "specify --perturb rank-one:<dim>:u=…,phi=… for this operator",
            )),
        }
    }
}

fn execute(cfg: &RunConfig) -> Result<i32> {
    let flags = &cfg.flags;
    match cfg.command {
        Command::Spectrum => {
            let m = build_op(flags)?;
            let tol = flags
                .tol
                .unwrap_or_else(|| perturb::default_cluster_tol(m.frobenius_norm()));
            let s = spectra::spectrum(&m, tol)?;
            println!(
                "spectrum: {} distinct point(s), total multiplicity {}",
                s.len(),
                s.total_multiplicity()
            );
            for p in s.points().iter().take(12) {
                println!(
                    "  {} + {}i  (mult {})",
                    io::fmt_f64(p.value.re),
                    io::fmt_f64(p.value.im),
                    p.multiplicity
                );
            }
            if s.len() > 12 {
                println!("  … {} more", s.len() - 12);
            }
            if let Some(path) = &flags.json {
                io::write_text(path, &io::spectrum_to_json(&s))?;
            }
            Ok(0)
        }
        Command::Pseudospectrum => {
            let m = build_op(flags)?;
            let window = flags
                .window
                .ok_or_else(|| Error::input("pseudospectrum requires --window"))?;
            let res = flags.res.unwrap_or((200, 200));
            let g = spectra::pseudospectrum(&m, window, res)?;
            let lo = g.field.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = g.field.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            println!(
                "pseudospectrum: {}x{} grid, log10(1/smin) in [{}, {}]",
                g.nx,
                g.ny,
                io::fmt_f64(lo),
                io::fmt_f64(hi)
            );
            if let Some(path) = &flags.csv {
                io::write_text(path, &io::grid_to_csv(&g))?;
            }
            if let Some(path) = &flags.pgm {
                io::write_bytes(path, &io::grid_to_pgm(&g))?;
            }
            Ok(0)
        }
        Command::Holes => {
            let m = build_op(flags)?;
            let tol = flags
                .tol
                .unwrap_or_else(|| perturb::default_cluster_tol(m.frobenius_norm()));
            let s = spectra::spectrum(&m, tol)?;
            let window = match flags.window {
                Some(w) => w,
                None => auto_window(&s)?,
            };
            let res = flags.res.unwrap_or((400, 400));
            let step = ((window.re_max - window.re_min) / (res.0 - 1) as f64)
                .max((window.im_max - window.im_min) / (res.1 - 1) as f64);
            let report = spectra::detect_holes(&s, window, res, 3.0 * step)?;
            println!(
                "holes: {} (unbounded component: {} cells)",
                report.holes.len(),
                report.unbounded_component_cells
            );
            for h in &report.holes {
                println!(
                    "  representative {} + {}i, {} cells, area ≈ {}",
                    io::fmt_f64(h.representative.re),
                    io::fmt_f64(h.representative.im),
                    h.cell_count,
                    io::fmt_f64(h.area_estimate)
                );
            }
            if let Some(path) = &flags.json {
                io::write_text(path, &io::holes_to_json(&report))?;
            }
            Ok(0)
        }
        Command::Rank => {
            let m = build_op(flags)?;
            let probes = flags.probes.unwrap_or(200);
            let tol = flags.tol.unwrap_or(1e-8);
            let seed = flags.seed.unwrap_or(DEFAULT_SEED);
            let rank = socle::spectral_rank(&m, probes, tol, seed)?;
            println!("spectral rank: {rank} ({probes} probes, tol {})", io::fmt_f64(tol));
            if let Some(path) = &flags.json {
                io::write_text(path, &io::rank_to_json(rank, probes, tol, seed))?;
            }
            Ok(0)
        }
        Command::Laurent => {
            let op = required_op(flags)?;
            let m = zoo::build(op)?;
            let p = rank_one_perturbation(flags, op)?;
            let n_max = flags.k.unwrap_or(12);
            let witness_tol = flags.tol.unwrap_or(1e-6);
            let lc = perturb::laurent_coeffs(&m, &p, n_max)?;
            println!(
                "laurent: c_0 … c_{n_max}; essential-singularity witness at tol {}: {}",
                io::fmt_f64(witness_tol),
                lc.essential_singularity_witness(witness_tol)
            );
            for (j, coeff) in lc.coeffs.iter().enumerate().take(6) {
                println!(
                    "  c_{j} = {} + {}i",
                    io::fmt_f64(coeff.re),
                    io::fmt_f64(coeff.im)
                );
            }
            if let Some(path) = &flags.csv {
                io::write_text(path, &io::laurent_to_csv(&lc))?;
            }
            if let Some(path) = &flags.json {
                io::write_text(path, &io::laurent_to_json(&lc, witness_tol))?;
            }
            Ok(0)
        }
        Command::Levelset => {
            let op = required_op(flags)?;
            let m = zoo::build(op)?;
            let p = rank_one_perturbation(flags, op)?;
            let window = flags
                .window
                .ok_or_else(|| Error::input("levelset requires --window"))?;
            let betas = flags
                .betas
                .as_ref()
                .ok_or_else(|| Error::input("levelset requires --betas with one value"))?;
            if betas.len() != 1 {
                return Err(Error::input("levelset takes exactly one β"));
            }
            let tol = flags.tol.unwrap_or(1e-9);
            let out = perturb::level_set_roots(&m, &p, betas[0], window, tol)?;
            println!("levelset: {} root(s) of f(λ) = β in the window", out.roots.len());
            for r in out.roots.iter().take(16) {
                println!("  {} + {}i", io::fmt_f64(r.re), io::fmt_f64(r.im));
            }
            if let Some(path) = &flags.json {
                io::write_text(path, &io::levelset_to_json(betas[0], &out))?;
            }
            Ok(0)
        }
        Command::Holefill => {
            let op = required_op(flags)?;
            let samples = match &op.kind {
                OperatorKind::MultCircle { symbol } => zoo::circle_samples(op.dim, *symbol),
                _ => {
                    return Err(Error::input(
                        "holefill expects a mult-circle operator (diagonal model)",
                    ))
                }
            };
            let k = flags.k.unwrap_or(8);
            let model = zoo::circle_model(&samples, k)?;
            let slope = model.functional.order_slope_default()?;
            let max_resid = model
                .functional
                .residuals()
                .iter()
                .cloned()
                .fold(0.0, f64::max);
            println!(
                "holefill: K = {k}, max moment residual {}, order slope {}",
                io::fmt_f64(max_resid),
                io::fmt_f64(slope)
            );
            println!(
                "  leading coefficient {} + {}i; σ(L) has {} hole(s)",
                io::fmt_f64(model.functional.leading_coeff().re),
                io::fmt_f64(model.functional.leading_coeff().im),
                model.holes.holes.len()
            );
            if let Some(path) = &flags.json {
                io::write_text(
                    path,
                    &io::moment_functional_to_json(&model.functional, Some(slope)),
                )?;
            }
            Ok(0)
        }
        Command::Probe => {
            let op = required_op(flags)?;
            let m = zoo::build(op)?;
            let disk = flags
                .disk
                .ok_or_else(|| Error::input("probe requires --disk cre,cim,r"))?;
            let perturbation = match &flags.perturb {
                Some(p) => {
                    if p.dim != op.dim {
                        return Err(Error::input("--perturb dimension must match --op"));
                    }
                    zoo::build(p)?
                }
                None => match &op.kind {
                    OperatorKind::MultCircle { symbol } => {
                        let samples = zoo::circle_samples(op.dim, *symbol);
                        let k = flags.k.unwrap_or(8);
                        zoo::circle_model(&samples, k)?.perturbation
                    }
                    _ => {
                        return Err(Error::input(
                            "specify --perturb for non-circle operators",
                        ))
                    }
                },
            };
            let betas: Vec<f64> = match &flags.betas {
                Some(list) => {
                    let mut out = Vec::with_capacity(list.len());
                    for b in list {
                        if b.im != 0.0 {
                            return Err(Error::input("probe β values must be real"));
                        }
                        out.push(b.re);
                    }
                    out
                }
                None => vec![0.5, 0.9, 0.99, 1.0],
            };
            let across = flags.res.map(|(n, _)| n).unwrap_or(11).max(3);
            let grid_step = 2.0 * disk.radius / (across - 1) as f64;
            let report = perturb::discontinuity_probe(&m, &perturbation, &betas, disk, grid_step)?;
            println!(
                "probe: disk ({} + {}i, r = {}), {} β value(s)",
                io::fmt_f64(disk.center.re),
                io::fmt_f64(disk.center.im),
                io::fmt_f64(disk.radius),
                report.rows.len()
            );
            for row in &report.rows {
                println!(
                    "  β = {}: {} eigenvalue(s) in disk, min smin {}, hausdorff-to-β=1 {}",
                    io::fmt_f64(row.beta),
                    row.eig_in_disk,
                    io::fmt_f64(row.min_smin_on_disk),
                    io::fmt_f64(row.hausdorff_to_beta1)
                );
            }
            if let Some(path) = &flags.json {
                io::write_text(path, &io::discontinuity_to_json(&report))?;
            }
            Ok(0)
        }
        Command::Scan => {
            let op = required_op(flags)?;
            let m = zoo::build(op)?;
            let q = rank_one_perturbation(flags, op)?;
            let alphas = flags
                .alphas
                .as_ref()
                .ok_or_else(|| Error::input("scan requires --alphas"))?;
            let threshold = flags.threshold.unwrap_or(1e-3);
            let table = perturb::perturbation_scan(&m, &q, alphas, threshold)?;
            println!("scan: {} row(s), threshold {}", table.rows.len(), io::fmt_f64(threshold));
            for row in &table.rows {
                println!(
                    "  α = {} + {}i: {} point(s) above threshold, hausdorff-to-α=0 {}",
                    io::fmt_f64(row.alpha.re),
                    io::fmt_f64(row.alpha.im),
                    row.count_above_threshold,
                    io::fmt_f64(row.hausdorff_to_alpha0)
                );
            }
            if let Some(path) = &flags.json {
                io::write_text(path, &io::scan_to_json(&table))?;
            }
            Ok(0)
        }
        Command::Verify => {
            let seed = flags.seed.unwrap_or(DEFAULT_SEED);
            let report = verify::run_all(seed);
            for check in &report.checks {
                let status = if check.passed { "ok  " } else { "FAIL" };
                println!("{status} {} — {}", check.name, check.detail);
            }
            let passed = report.checks.iter().filter(|c| c.passed).count();
            println!("verify: {passed}/{} checks passed", report.checks.len());
            if let Some(path) = &flags.json {
                io::write_text(path, &report.to_json())?;
            }
            Ok(if report.all_passed() { 0 } else { 1 })
        }
    }
}

/// Bounding box of the spectrum, padded by 25% of the diameter (at
/// least 0.5), wide enough for the default thickening margins.
fn auto_window(s: &spectra::SpectrumSet) -> Result<Window> {
    if s.is_empty() {
        return Err(Error::input("cannot derive a window from an empty spectrum"));
    }
    let mut re_lo = f64::INFINITY;
    let mut re_hi = f64::NEG_INFINITY;
    let mut im_lo = f64::INFINITY;
    let mut im_hi = f64::NEG_INFINITY;
    for p in s.points() {
        re_lo = re_lo.min(p.value.re);
        re_hi = re_hi.max(p.value.re);
        im_lo = im_lo.min(p.value.im);
        im_hi = im_hi.max(p.value.im);
    }
    let pad = (0.25 * (re_hi - re_lo).max(im_hi - im_lo)).max(0.5);
    Window::new(re_lo - pad, re_hi + pad, im_lo - pad, im_hi + pad)
}
