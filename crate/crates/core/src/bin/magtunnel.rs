use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use magtunnel::config::RunConfig;
use magtunnel::degennes::HalfLineGrid;
use magtunnel::effective;
use magtunnel::geometry::Geometry;
use magtunnel::pipeline::{self, fmt_sig, Check, Model};
use magtunnel::splitting::{self, GapSeries, Normalization};
use magtunnel::validate::{self, Module};
use magtunnel::Error;

/// Magnetic tunneling in symmetric planar domains.
#[derive(Debug, Parser)]
#[command(name = "magtunnel", version)]
struct Cli {
    /// Run configuration (`key = value` with `[section]` headers).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory for CSV files.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Print structured JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Also report quantities in the sign conventions printed in the source text.
    #[arg(long, global = true)]
    strict_paper_signs: bool,
    /// Restrict `validate` to one module.
    #[arg(long, global = true, value_name = "MODULE")]
    only: Option<String>,
    /// Node count of the half-line grid.
    #[arg(long, global = true, value_name = "N")]
    grid_n: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// De Gennes constants and their identity checks.
    Constants,
    /// Boundary geometry, wells, actions and prefactors.
    Geometry,
    /// Splitting formula and oracle gaps over the configured h grid.
    Sweep {
        /// Fit alpha0 to the computed oracle gaps afterwards.
        #[arg(long)]
        fit_alpha0: bool,
    },
    /// Invariant suite of every module.
    Validate,
    /// Sweep, then fit the phase shift alpha0 to the oracle gaps.
    FitAlpha0,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load_config(cli: &Cli) -> magtunnel::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    if let Some(n) = cli.grid_n {
        cfg.grid_n = n;
    }
    cfg.strict_paper_signs |= cli.strict_paper_signs;
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> magtunnel::Result<u8> {
    let cfg = load_config(cli)?;
    if cli.only.is_some() && !matches!(cli.cmd, Cmd::Validate) {
        return Err(Error::Config("--only applies to validate".into()));
    }
    match &cli.cmd {
        Cmd::Constants => constants(cli, &cfg),
        Cmd::Geometry => geometry(cli, &cfg),
        Cmd::Sweep { fit_alpha0 } => sweep(cli, &cfg, *fit_alpha0),
        Cmd::Validate => validate(cli, &cfg),
        Cmd::FitAlpha0 => sweep(cli, &cfg, true),
    }
}

fn print_json<T: Serialize>(v: &T) -> magtunnel::Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn print_checks(checks: &[Check]) {
    for c in checks {
        println!(
            "  {:<44} {:>12}  tol {:<8} {}",
            c.name,
            fmt_sig(c.value, 4),
            fmt_sig(c.tolerance, 2),
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
}

fn failing(checks: &[Check]) -> Vec<&str> {
    checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
}

fn constants(cli: &Cli, cfg: &RunConfig) -> magtunnel::Result<u8> {
    let grid = HalfLineGrid::new(cfg.t_max, cfg.grid_n)?;
    let rep = pipeline::constants_report(&grid)?;
    let c = &rep.constants;
    if cli.json {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(flatten)]
            report: &'a pipeline::ConstantsReport,
            #[serde(skip_serializing_if = "Option::is_none")]
            c1_as_printed: Option<f64>,
        }
        print_json(&Out { report: &rep, c1_as_printed: cfg.strict_paper_signs.then(|| c.c1_as_printed()) })?;
    } else {
        println!("grid: t_max = {}, n = {}", grid.t_max, grid.n);
        for (k, v) in [("theta0", c.theta0), ("xi0", c.xi0), ("c1", c.c1), ("mu2", c.mu2), ("u0", c.u0)] {
            println!("  {k:<8} {}", fmt_sig(v, 12));
        }
        if cfg.strict_paper_signs {
            println!("  c1 with the printed normalization u0^2/6: {}", fmt_sig(c.c1_as_printed(), 12));
        }
        println!("identity checks:");
        print_checks(&rep.checks);
    }
    finish_checks(&rep.checks)
}

fn finish_checks(checks: &[Check]) -> magtunnel::Result<u8> {
    let bad = failing(checks);
    if bad.is_empty() {
        Ok(0)
    } else {
        eprintln!("check failed: {}", bad.join(", "));
        Ok(2)
    }
}

fn geometry(cli: &Cli, cfg: &RunConfig) -> magtunnel::Result<u8> {
    let curve = pipeline::curve_from(&cfg.domain)?;
    let geo = Geometry::new(&curve, cfg.samples)?;
    let rep = pipeline::geometry_report(&geo);
    let consts = magtunnel::degennes::constants(&HalfLineGrid::new(cfg.t_max, cfg.grid_n)?)?;
    let v = effective::potential(&geo.table, &geo.wells, &consts);
    let agmon = effective::agmon_data(&v)?;
    let plus_g = if cfg.strict_paper_signs {
        [1e-2, 1e-4, 1e-6]
            .iter()
            .map(|&eps| Ok((eps, effective::prefactor_plus_g_truncated(&v, eps)?)))
            .collect::<magtunnel::Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    if cli.json {
        #[derive(Serialize)]
        struct Out<'a> {
            geometry: &'a pipeline::GeometryReport,
            agmon: &'a effective::AgmonData,
            #[serde(skip_serializing_if = "Vec::is_empty")]
            a_u_plus_g_truncated: Vec<(f64, f64)>,
        }
        print_json(&Out { geometry: &rep, agmon: &agmon, a_u_plus_g_truncated: plus_g })?;
    } else {
        let rows = [
            ("perimeter", rep.perimeter),
            ("s_r", rep.s_r),
            ("s_l", rep.s_l),
            ("kappa_max", rep.kappa_max),
            ("kappa_min", rep.kappa_min),
            ("k2", rep.k2),
            ("area", rep.area),
            ("gamma0", rep.gamma0),
            ("turning - 2pi", rep.turning_defect),
            ("S_u", agmon.s_u),
            ("S_d", agmon.s_d),
            ("g", agmon.g),
            ("A_u", agmon.a_u),
            ("A_d", agmon.a_d),
            ("V(0)", agmon.v_top),
            ("V(L)", agmon.v_bottom),
        ];
        for (k, v) in rows {
            println!("  {k:<14} {}", fmt_sig(v, 12));
        }
        println!("  {:<14} {}", "symmetric", rep.symmetric);
        for (eps, a) in &plus_g {
            println!("  A_u with the printed +g sign, cut off at {eps:e}: {}", fmt_sig(*a, 6));
        }
    }
    Ok(0)
}

fn sweep(cli: &Cli, cfg: &RunConfig, fit: bool) -> magtunnel::Result<u8> {
    let model = Model::build(cfg)?;
    let hs = cfg.h_grid();
    let rows = pipeline::sweep(&model, cfg, &hs);
    std::fs::create_dir_all(&cfg.out)?;
    let csv = cfg.out.join("sweep.csv");
    pipeline::write_csv(&csv, &pipeline::sweep_comments(), &pipeline::SWEEP_COLUMNS, &pipeline::sweep_csv_rows(&rows))?;
    std::fs::write(cfg.out.join("config.txt"), cfg.to_text())?;
    let summary = pipeline::summarize(&model, &rows);
    let alpha = if fit { Some(fit_alpha0(&model, &rows)?) } else { None };
    if cli.json {
        #[derive(Serialize)]
        struct Out<'a> {
            csv: &'a Path,
            rows: usize,
            summary: &'a pipeline::SweepSummary,
            #[serde(skip_serializing_if = "Option::is_none")]
            alpha0: Option<(&'static str, splitting::Alpha0Fit)>,
        }
        print_json(&Out { csv: &csv, rows: rows.len(), summary: &summary, alpha0: alpha })?;
    } else {
        println!("wrote {} rows to {}", rows.len(), csv.display());
        println!("  S                      {}", fmt_sig(summary.s, 10));
        println!("  envelope rate slope    {}", fmt_sig(summary.slope_envelope, 10));
        println!("  predicted zero spacing {}", fmt_sig(summary.predicted_spacing, 10));
        if !summary.resolves_oscillation {
            println!("  grid too coarse in 1/h to locate zeros (step must stay below a quarter spacing)");
        }
        for (name, z) in [
            ("formula", &summary.zeros_formula),
            ("effective", &summary.zeros_effective),
            ("2d", &summary.zeros_2d),
        ] {
            if !z.is_empty() {
                let z: Vec<String> = z.iter().map(|x| fmt_sig(*x, 8)).collect();
                println!("  zeros in 1/h, {name}: {}", z.join(" "));
            }
        }
        let nan = rows.iter().filter(|r| !r.reason.is_empty()).count();
        if nan > 0 {
            println!("  {nan} rows carry NaN entries; see the reason column");
        }
        if let Some((src, a)) = alpha {
            println!(
                "  alpha0 = {} from the {src} gaps (rms log residual {}, {} points, {} zeros)",
                fmt_sig(a.alpha0, 10),
                fmt_sig(a.residual, 4),
                a.points_used,
                a.zeros_observed
            );
        }
    }
    Ok(0)
}

/// Fits to the 2D series when it is present, else to the effective one.
fn fit_alpha0(model: &Model, rows: &[pipeline::SweepRow]) -> magtunnel::Result<(&'static str, splitting::Alpha0Fit)> {
    let h: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let two_d: Vec<f64> = rows.iter().map(|r| r.gap_2d).collect();
    let eff: Vec<f64> = rows.iter().map(|r| r.gap_effective).collect();
    let inp = model.inputs.with_alpha0(0.0);
    let mut last = None;
    for (name, gap) in [("2d", two_d), ("effective", eff)] {
        if gap.iter().all(|g| !g.is_finite()) {
            continue;
        }
        let (hh, gg): (Vec<f64>, Vec<f64>) = h.iter().zip(&gap).filter(|p| p.1.is_finite()).map(|(a, b)| (*a, *b)).unzip();
        match splitting::fit_alpha0(&GapSeries::new(hh, gg, Normalization::Physical), &inp) {
            Ok(f) => return Ok((name, f)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::InsufficientData("no oracle gaps to fit; enable an oracle".into())))
}

fn validate(cli: &Cli, cfg: &RunConfig) -> magtunnel::Result<u8> {
    let only = cli.only.as_deref().map(str::parse::<Module>).transpose()?;
    let rep = validate::run(cfg, only)?;
    if cli.json {
        print_json(&rep)?;
    } else {
        for s in &rep.sections {
            println!("{}:", s.module.name());
            print_checks(&s.checks);
        }
    }
    let all: Vec<Check> = rep.sections.iter().flat_map(|s| s.checks.clone()).collect();
    finish_checks(&all)
}
