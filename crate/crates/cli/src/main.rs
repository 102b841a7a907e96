//! `coexist`: single solves, parameter sweeps, the optimized-CR table, rate
//! regions and Monte Carlo verification, written as CSV (and optional SVG).
//!
//! CSV goes to `--out` (or the config's own path) and otherwise to stdout;
//! the human-readable summary then moves to stderr so stdout stays parseable.

mod svg;

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use coexist::config::{Config, ModelName, RegionSection, VerifySection};
use coexist::experiments::{self, RegionRun, SweepRow};
use coexist::scenario::{linear_to_db, DesignOutcome, Scenario};
use coexist::{simulate, solvers, Error};

use svg::{Chart, Mark, Series};

#[derive(Parser, Debug)]
#[command(name = "coexist", version, about = "Radar/communication coexistence design experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML scenario file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// CSV destination; stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// SVG plot destination (sweep and region).
    #[arg(long, global = true, value_name = "PATH")]
    svg: Option<PathBuf>,

    /// Monte Carlo trials (verify).
    #[arg(long, global = true, value_name = "N")]
    trials: Option<usize>,

    /// Random seed (region and verify).
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Worker threads; all cores when omitted.
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,

    /// Override the cumulated radar SNR in dB, e.g. 19.4 for the rounded value.
    #[arg(long, global = true, value_name = "DB", allow_negative_numbers = true)]
    cum_radar_snr_db: Option<f64>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Solve the configured scenario once.
    Solve,
    /// Run the `[sweep]` section: one row per axis value and solver.
    Sweep,
    /// Optimized CR over N, beta and INR at rho_min = 10 dB.
    Table1,
    /// Rate-region boundary and random interior designs.
    Region,
    /// Monte Carlo check of the optimal design against closed forms.
    Verify,
}

enum Failure {
    Core(Error),
    Statistical(String),
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::Infeasible { .. }) => 2,
            Failure::Core(Error::Config(_) | Error::Validation { .. } | Error::Domain(_) | Error::Unsupported(_)) => 3,
            Failure::Core(_) | Failure::Io(_) => 1,
            Failure::Statistical(_) => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Statistical(m) => write!(f, "statistical verification failed: {m}"),
            Failure::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

/// Where the summary text goes: stdout if the CSV is going to a file.
struct Console {
    to_stdout: bool,
}

impl Console {
    fn say(&self, text: &str) {
        if self.to_stdout {
            println!("{text}");
        } else {
            eprintln!("{text}");
        }
    }
}

fn write_csv(path: Option<&Path>, header: &[&str], rows: &[Vec<String>]) -> Outcome {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(File::create(p).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

fn write_svg(path: &Path, chart: &Chart) -> Outcome {
    std::fs::write(path, chart.render()).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn load_config(cli: &Cli) -> Outcome<Config> {
    let path = cli.config.as_ref().ok_or_else(|| Error::Config("this command needs --config PATH".into()))?;
    let mut cfg = Config::load(path)?;
    if let Some(db) = cli.cum_radar_snr_db {
        cfg.scenario.cum_radar_snr_db = Some(db);
        cfg.scenario()?;
    }
    Ok(cfg)
}

fn echo_scenario(con: &Console, cfg: &Config, sc: &Scenario) {
    let d = cfg.db_spec();
    con.say(&format!(
        "scenario: N={} beta={} alpha={} model={} SNR={} dB INR={} dB SCR={} dB rho_min={} dB cum radar SNR={:.4} dB noise={}{}",
        sc.n,
        d.beta,
        d.alpha,
        sc.interference.name(),
        d.snr_comm_db,
        d.inr_db,
        d.scr_db,
        d.rho_min_db,
        d.cum_radar_snr_db,
        if sc.is_white_noise() { "white" } else { "colored" },
        sc.papr_delta.map(|p| format!(" PAPR<={p}")).unwrap_or_default(),
    ));
}

fn describe(o: &DesignOutcome, sc: &Scenario) -> String {
    let mut s = format!(
        "solver={} feasible={}\n  gamma_N*={:.6} epsilon*={:.6}\n  R0={:.6} R1={:.6} CR={:.6}",
        o.solver, o.feasible, o.gamma_n_star, o.epsilon_star, o.r0, o.r1, o.cr
    );
    if sc.alpha != sc.beta {
        s.push_str(&format!(" (at alpha={}: {:.6})", sc.alpha, o.cr_alpha));
    }
    s.push_str(&format!("\n  SINR={:.6} ({:.3} dB, required {:.3} dB)", o.sinr, linear_to_db(o.sinr), linear_to_db(sc.rho_min)));
    s
}

fn cmd_solve(cli: &Cli, con: &Console) -> Outcome {
    let cfg = load_config(cli)?;
    let sc = cfg.scenario()?;
    let tag = cfg.solver();
    echo_scenario(con, &cfg, &sc);
    let feas = solvers::feasibility_joint(&sc)?;
    con.say(&format!("rho_max={:.6} ({:.3} dB)", feas.rho_max, linear_to_db(feas.rho_max)));
    let result = solvers::solve(&sc, tag);
    let outcome = match &result {
        Ok(o) if o.feasible => Some(o),
        Ok(_) | Err(Error::Infeasible { .. }) => None,
        Err(_) => return result.map(|_| ()).map_err(Failure::from),
    };
    if let Some(o) = outcome {
        con.say(&describe(o, &sc));
    }
    write_csv(cli.out.as_deref(), &experiments::SWEEP_CSV_HEADER, &[experiments::outcome_record(outcome, tag)])?;
    match result {
        Ok(o) if o.feasible => Ok(()),
        Ok(_) => Err(Error::Infeasible {
            rho_max: feas.rho_max,
            reason: format!("the {tag} design misses the SINR or power constraints"),
        }
        .into()),
        Err(e) => Err(e.into()),
    }
}

fn cmd_sweep(cli: &Cli, con: &Console) -> Outcome {
    let cfg = load_config(cli)?;
    let spec = cfg.sweep_spec()?;
    let rows = experiments::run_sweep(&spec)?;
    let out = cli.out.clone().or(spec.out.as_ref().map(PathBuf::from));
    let con = Console { to_stdout: out.is_some() || con.to_stdout };
    let records: Vec<Vec<String>> = rows.iter().map(SweepRow::record).collect();
    write_csv(out.as_deref(), &experiments::SWEEP_CSV_HEADER, &records)?;
    let infeasible = rows.iter().filter(|r| r.outcome.is_none()).count();
    con.say(&format!("sweep over {}: {} rows, {} infeasible", spec.axis.as_str(), rows.len(), infeasible));

    if let Some(path) = cli.svg.clone().or(spec.svg.as_ref().map(PathBuf::from)) {
        let series = spec
            .solvers
            .iter()
            .map(|&tag| Series {
                label: tag.to_string(),
                mark: Mark::Line,
                points: rows
                    .iter()
                    .filter(|r| r.solver == tag)
                    .map(|r| r.outcome.as_ref().map(|o| (r.axis, o.cr_alpha)))
                    .collect(),
            })
            .collect();
        let chart = Chart {
            title: format!("Compound rate versus {}", spec.axis.as_str()),
            x_label: spec.axis.as_str().into(),
            y_label: "CR [bits/channel use]".into(),
            series,
        };
        write_svg(&path, &chart)?;
    }
    Ok(())
}

fn cmd_table1(cli: &Cli, con: &Console) -> Outcome {
    let cells = experiments::table1()?;
    con.say(experiments::format_table1(&cells).trim_end());
    let records: Vec<Vec<String>> = cells.iter().map(|c| c.record()).collect();
    write_csv(cli.out.as_deref(), &experiments::TABLE1_CSV_HEADER, &records)
}

fn region_chart(runs: &[RegionRun]) -> Chart {
    let mut series = Vec::new();
    for run in runs {
        let m = run.model.as_str();
        let line = |pts: &[(f64, coexist::metrics::RatePoint)]| pts.iter().map(|(_, p)| Some((p.r0, p.r1))).collect();
        series.push(Series { label: format!("{m} boundary"), mark: Mark::Line, points: line(&run.estimate.boundary) });
        if !run.white_boundary.is_empty() {
            series.push(Series { label: format!("{m} white noise"), mark: Mark::Line, points: line(&run.white_boundary) });
        }
        series.push(Series {
            label: format!("{m} samples"),
            mark: Mark::Dots,
            points: run.estimate.interior.iter().map(|s| Some((s.point.r0, s.point.r1))).collect(),
        });
    }
    Chart { title: "Achievable rate pairs".into(), x_label: "R0 [bits/channel use]".into(), y_label: "R1 [bits/channel use]".into(), series }
}

fn cmd_region(cli: &Cli, con: &Console) -> Outcome {
    let cfg = load_config(cli)?;
    let sc = cfg.scenario()?;
    let rs = cfg.region.clone().unwrap_or_else(RegionSection::default);
    let seed = cli.seed.unwrap_or(rs.seed);
    let models: Vec<ModelName> = rs.models.clone();
    let runs = experiments::run_region(&sc, &models, rs.samples, rs.betas, seed)?;
    write_csv(cli.out.as_deref(), &experiments::REGION_CSV_HEADER, &experiments::region_records(&runs))?;
    for run in &runs {
        let e = &run.estimate;
        con.say(&format!(
            "{}: {} boundary points, {} samples from {} attempts{}",
            run.model.as_str(),
            e.boundary.len(),
            e.interior.len(),
            e.attempts,
            if e.degenerate { " (degenerate: boundary collapses to a point)" } else { "" }
        ));
    }
    if let Some(path) = &cli.svg {
        write_svg(path, &region_chart(&runs))?;
    }
    Ok(())
}

fn cmd_verify(cli: &Cli, con: &Console) -> Outcome {
    let cfg = load_config(cli)?;
    let sc = cfg.scenario()?;
    let vs = cfg.verify.clone().unwrap_or_else(VerifySection::default);
    let trials = cli.trials.unwrap_or(vs.trials);
    let seed = cli.seed.unwrap_or(vs.seed);
    echo_scenario(con, &cfg, &sc);
    let outcome = solvers::solve(&sc, vs.solver)?;
    if !outcome.feasible {
        let rho_max = solvers::feasibility_joint(&sc)?.rho_max;
        return Err(Error::Infeasible { rho_max, reason: format!("the {} design is infeasible", vs.solver) }.into());
    }
    let rep = simulate::verify_design(&sc, &outcome.design, trials, seed)?;
    con.say(&format!("{} trials, seed {seed}, solver {}", rep.n_trials, vs.solver));
    for c in &rep.checks {
        con.say(&format!(
            "[{}] {:<16} empirical={:<14.8} analytic={:<14.8} tol={:.3e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.empirical,
            c.analytic,
            c.tolerance
        ));
    }
    write_csv(cli.out.as_deref(), &simulate::CSV_HEADER, &rep.records())?;
    if rep.passed() {
        Ok(())
    } else {
        let names: Vec<&str> = rep.failures().map(|c| c.name.as_str()).collect();
        Err(Failure::Statistical(format!("check(s) {} outside the {}-sigma band", names.join(", "), simulate::SIGMA_LEVEL)))
    }
}

fn run(cli: &Cli) -> Outcome {
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(Error::Config("--workers must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| Failure::Io(format!("thread pool: {e}")))?;
    }
    let con = Console { to_stdout: cli.out.is_some() };
    match cli.command {
        Command::Solve => cmd_solve(cli, &con),
        Command::Sweep => cmd_sweep(cli, &con),
        Command::Table1 => cmd_table1(cli, &con),
        Command::Region => cmd_region(cli, &con),
        Command::Verify => cmd_verify(cli, &con),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
