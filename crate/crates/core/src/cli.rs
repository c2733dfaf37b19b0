//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::comm;
use crate::config::make_pattern;
use crate::error::{Error, Result};
use crate::optim::{DesignOutcome, DesignStatus};
use crate::report::{self, int, num, Column, CsvTable, RunManifest, Series};
use crate::scenario::{load_scenario, Scenario};
use crate::sensing::{self, TargetState};
use crate::sim;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;
pub const EXIT_NUMERIC: u8 = 4;

/// Target used by the sensing validation suite.
pub const VALIDATION_TARGET: TargetState = TargetState {
    range_m: 60.0,
    velocity_mps: 15.0,
};

#[derive(Debug, Parser)]
#[command(name = "isac-rs", version, about = "RS interval design for OFDM sensing and communication")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Scenario JSON; the reference numerology with the default channel if omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory for CSV/SVG outputs and the run manifest.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override the range/velocity weight.
    #[arg(long)]
    pub eta: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sensing bounds of one RS pattern by both routes.
    Crb {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 6)]
        pc: usize,
        #[arg(long, default_value_t = 4)]
        ps: usize,
    },
    /// Relaxed, rounded and exhaustive designs for the configured rate floor.
    Optimize {
        #[command(flatten)]
        common: Common,
        /// Override the rate floor, bit/s.
        #[arg(long)]
        rate_floor: Option<f64>,
    },
    /// Trade-off curve over a grid of rate floors.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Rate-floor grid `min:max:steps`.
        #[arg(long)]
        cmin: String,
        /// Read min and max as fractions of the best rate over the search box.
        #[arg(long)]
        relative: bool,
    },
    /// Monte-Carlo checks of the sensing bounds and the channel MSE.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// RS intervals for the sensing suite (pc = ps = 8 by default).
        #[arg(long)]
        pc: Option<usize>,
        #[arg(long)]
        ps: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Sensing,
    Channel,
    All,
}

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Infeasible(_) => EXIT_INFEASIBLE,
        Error::Numeric(_) | Error::SingularFim { .. } => EXIT_NUMERIC,
        _ => EXIT_INPUT,
    }
}

/// Parses `min:max:steps` into an ascending list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidArgument(format!("grid `{spec}` is not min:max:steps"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo <= hi) || steps == 0 || (steps == 1 && lo != hi) {
        return Err(Error::InvalidArgument(format!(
            "grid `{spec}` needs 0 <= min <= max, steps >= 1 (and min = max for one step)"
        )));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect())
}

struct Session<'a, W: Write> {
    out: &'a mut W,
    manifest: Option<RunManifest>,
    started: Instant,
}

impl<W: Write> Session<'_, W> {
    fn emit(&mut self, name: &str, contents: &str) -> Result<()> {
        if let Some(m) = self.manifest.as_mut() {
            report::write_file(&m.output_dir.join(name), contents)?;
            m.outputs.push(name.to_string());
        }
        Ok(())
    }

    fn finish(mut self) -> Result<()> {
        if let Some(mut m) = self.manifest.take() {
            m.wall_time_s = self.started.elapsed().as_secs_f64();
            let path = m.write()?;
            self.say(format_args!("manifest: {}", path.display()))?;
        }
        Ok(())
    }

    fn say(&mut self, line: std::fmt::Arguments) -> Result<()> {
        writeln!(self.out, "{line}").map_err(|source| Error::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })
    }
}

fn load(common: &Common) -> Result<Scenario> {
    let mut s = match &common.config {
        Some(path) => load_scenario(path)?,
        None => Scenario::reference(),
    };
    if let Some(eta) = common.eta {
        s.config.weight_eta = eta;
        s.config.validate()?;
    }
    Ok(s)
}

/// Runs a parsed command, writing the human-readable report to `out`.
/// Returns the process exit code.
pub fn run<W: Write>(cli: Cli, args: Vec<String>, out: &mut W) -> u8 {
    match dispatch(cli, args, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch<W: Write>(cli: Cli, args: Vec<String>, out: &mut W) -> Result<u8> {
    let (name, common, seed) = match &cli.command {
        Command::Crb { common, .. } => ("crb", common.clone(), None),
        Command::Optimize { common, .. } => ("optimize", common.clone(), None),
        Command::Sweep { common, .. } => ("sweep", common.clone(), None),
        Command::Validate { common, seed, .. } => ("validate", common.clone(), Some(*seed)),
    };
    let scenario = load(&common)?;
    let mut session = Session {
        out,
        manifest: common
            .out
            .clone()
            .map(|dir| RunManifest::new(name, common.config.clone(), dir, seed, args)),
        started: Instant::now(),
    };
    let code = match cli.command {
        Command::Crb { pc, ps, .. } => cmd_crb(&mut session, &scenario, pc, ps)?,
        Command::Optimize { rate_floor, .. } => cmd_optimize(&mut session, &scenario, rate_floor)?,
        Command::Sweep { cmin, relative, .. } => cmd_sweep(&mut session, &scenario, &cmin, relative)?,
        Command::Validate {
            suite, trials, seed, pc, ps, ..
        } => cmd_validate(&mut session, &scenario, suite, trials, seed, pc, ps)?,
    };
    session.finish()?;
    Ok(code)
}

fn cmd_crb<W: Write>(s: &mut Session<W>, sc: &Scenario, pc: usize, ps: usize) -> Result<u8> {
    let cfg = &sc.config;
    let pattern = make_pattern(cfg, pc, ps)?;
    let closed = sensing::crb_closed_report(cfg, pc as f64, ps as f64)?;
    let fim = sensing::crb_from_fim(&sensing::fim_assemble(cfg, &pattern)?, cfg.weight_eta)?;
    let approx = sensing::crb_weighted_approx(cfg, pc as f64, ps as f64)?;
    let delta = |a: f64, b: f64| (a - b) / b;
    s.say(format_args!("pattern  pc={pc} ps={ps} N={} M={} eta={}", pattern.n_rs_freq, pattern.m_rs_time, cfg.weight_eta))?;
    s.say(format_args!("{:<10}{:>16}{:>16}{:>16}", "", "closed-form", "fim-inverted", "rel. delta"))?;
    s.say(format_args!("{:<10}{:>16.6e}{:>16.6e}{:>16.3e}", "crb_r", closed.crb_r, fim.crb_r, delta(closed.crb_r, fim.crb_r)))?;
    s.say(format_args!("{:<10}{:>16.6e}{:>16.6e}{:>16.3e}", "crb_v", closed.crb_v, fim.crb_v, delta(closed.crb_v, fim.crb_v)))?;
    s.say(format_args!(
        "{:<10}{:>16.6e}{:>16.6e}{:>16.3e}",
        "crb_s",
        closed.crb_weighted,
        fim.crb_weighted,
        delta(closed.crb_weighted, fim.crb_weighted)
    ))?;
    s.say(format_args!("approximate crb_s: {approx:.6e}"))?;

    let mut t = CsvTable::new(
        "crb",
        &[
            Column { name: "pc", unit: "RE" },
            Column { name: "ps", unit: "RE" },
            Column { name: "eta", unit: "1" },
            Column { name: "crb_r_closed", unit: "m^2" },
            Column { name: "crb_v_closed", unit: "m^2/s^2" },
            Column { name: "crb_s_closed", unit: "weighted" },
            Column { name: "crb_r_fim", unit: "m^2" },
            Column { name: "crb_v_fim", unit: "m^2/s^2" },
            Column { name: "crb_s_fim", unit: "weighted" },
            Column { name: "crb_s_approx", unit: "weighted" },
        ],
    );
    t.push(vec![
        pc.to_string(),
        ps.to_string(),
        num(Some(cfg.weight_eta)),
        num(Some(closed.crb_r)),
        num(Some(closed.crb_v)),
        num(Some(closed.crb_weighted)),
        num(Some(fim.crb_r)),
        num(Some(fim.crb_v)),
        num(Some(fim.crb_weighted)),
        num(Some(approx)),
    ]);
    s.emit("crb.csv", &t.render())?;
    Ok(EXIT_OK)
}

fn sweep_table(outcomes: &[DesignOutcome]) -> CsvTable {
    let mut t = CsvTable::new(
        "sweep",
        &[
            Column { name: "c_min", unit: "bit/s" },
            Column { name: "crb_exhaustive", unit: "weighted" },
            Column { name: "crb_rounded", unit: "weighted" },
            Column { name: "gap_rel", unit: "1" },
            Column { name: "pc_ex", unit: "RE" },
            Column { name: "ps_ex", unit: "RE" },
            Column { name: "pc_rd", unit: "RE" },
            Column { name: "ps_rd", unit: "RE" },
            Column { name: "pc_relaxed", unit: "RE" },
            Column { name: "ps_relaxed", unit: "RE" },
            Column { name: "rate_exhaustive", unit: "bit/s" },
        ],
    );
    for o in outcomes.iter().filter(|o| o.status != DesignStatus::Infeasible) {
        t.push(vec![
            num(Some(o.c_min)),
            num(o.exhaustive.map(|p| p.crb_weighted)),
            num(o.rounded.map(|p| p.crb_weighted)),
            num(o.gap_rel),
            int(o.exhaustive.map(|p| p.pattern.pc)),
            int(o.exhaustive.map(|p| p.pattern.ps)),
            int(o.rounded.map(|p| p.pattern.pc)),
            int(o.rounded.map(|p| p.pattern.ps)),
            num(o.relaxed.map(|r| r.design.pc)),
            num(o.relaxed.map(|r| r.design.ps)),
            num(o.exhaustive.map(|p| p.rate)),
        ]);
    }
    t
}

fn cmd_optimize<W: Write>(s: &mut Session<W>, sc: &Scenario, rate_floor: Option<f64>) -> Result<u8> {
    let mut problem = sc.problem()?;
    if let Some(c) = rate_floor {
        problem = problem.with_rate_floor(c)?;
    }
    let o = problem.solve()?;
    s.say(format_args!("c_min        {:.6e} bit/s", o.c_min))?;
    match o.relaxed {
        Some(r) => s.say(format_args!(
            "relaxed      pc={:.6} ps={:.6} approx_crb_s={:.6e} kkt={:.1e} ({:?})",
            r.design.pc, r.design.ps, r.objective, r.kkt_residual, r.active
        ))?,
        None => s.say(format_args!("relaxed      infeasible"))?,
    }
    for (label, p) in [("rounded", o.rounded), ("exhaustive", o.exhaustive)] {
        match p {
            Some(p) => s.say(format_args!(
                "{label:<12} pc={} ps={} crb_s={:.6e} rate={:.6e} bit/s",
                p.pattern.pc, p.pattern.ps, p.crb_weighted, p.rate
            ))?,
            None => s.say(format_args!("{label:<12} none"))?,
        }
    }
    if let Some(g) = o.gap_rel {
        s.say(format_args!("gap_rel      {g:.6e}"))?;
    }
    s.emit("optimize.csv", &sweep_table(std::slice::from_ref(&o)).render())?;
    s.emit("outcome.json", &(serde_json::to_string_pretty(&o)? + "\n"))?;
    if o.status == DesignStatus::Infeasible {
        s.say(format_args!("status       infeasible"))?;
        return Ok(EXIT_INFEASIBLE);
    }
    Ok(EXIT_OK)
}

fn cmd_sweep<W: Write>(s: &mut Session<W>, sc: &Scenario, grid: &str, relative: bool) -> Result<u8> {
    let problem = sc.problem()?;
    let mut cmins = parse_grid(grid)?;
    if relative {
        let top = problem.max_rate()?;
        cmins.iter_mut().for_each(|c| *c *= top);
    }
    let outcomes = problem.tradeoff_sweep(&cmins)?;
    s.say(format_args!(
        "{:>14} {:>14} {:>14} {:>11} {:>7} {:>7}",
        "c_min", "crb_exhaustive", "crb_rounded", "gap_rel", "ex", "rd"
    ))?;
    for o in &outcomes {
        let pair = |p: Option<crate::optim::DesignPoint>| {
            p.map_or("-".to_string(), |p| format!("({},{})", p.pattern.pc, p.pattern.ps))
        };
        s.say(format_args!(
            "{:>14.6e} {:>14} {:>14} {:>11} {:>7} {:>7}",
            o.c_min,
            o.exhaustive.map_or("-".into(), |p| format!("{:.6e}", p.crb_weighted)),
            o.rounded.map_or("-".into(), |p| format!("{:.6e}", p.crb_weighted)),
            o.gap_rel.map_or("-".into(), |g| format!("{g:.3e}")),
            pair(o.exhaustive),
            pair(o.rounded)
        ))?;
    }
    if let Some(o) = outcomes.iter().find(|o| o.status == DesignStatus::Infeasible) {
        s.say(format_args!("curve truncated: infeasible from c_min = {:.6e}", o.c_min))?;
    }
    s.emit("sweep.csv", &sweep_table(&outcomes).render())?;
    let feasible: Vec<&DesignOutcome> = outcomes.iter().filter(|o| o.status != DesignStatus::Infeasible).collect();
    let series = |label: &str, f: &dyn Fn(&DesignOutcome) -> Option<f64>| Series {
        label: label.to_string(),
        points: feasible.iter().filter_map(|o| f(o).map(|y| (o.c_min, y))).collect(),
    };
    let svg = report::line_plot(
        "Weighted CRB vs minimum rate",
        "C_min [bit/s]",
        "CRB_s",
        &[
            series("exhaustive", &|o| o.exhaustive.map(|p| p.crb_weighted)),
            series("relaxed + rounding", &|o| o.rounded.map(|p| p.crb_weighted)),
        ],
    );
    s.emit("sweep.svg", &svg)?;
    Ok(if outcomes.is_empty() || outcomes[0].status == DesignStatus::Infeasible {
        EXIT_INFEASIBLE
    } else {
        EXIT_OK
    })
}

/// Acceptance windows of the validation suites.
pub const SENSING_RATIO_WINDOW: (f64, f64) = (0.85, 2.0);
pub const CHANNEL_RATIO_WINDOW: (f64, f64) = (0.7, 1.3);

fn cmd_validate<W: Write>(
    s: &mut Session<W>,
    sc: &Scenario,
    suite: Suite,
    trials: usize,
    seed: u64,
    pc: Option<usize>,
    ps: Option<usize>,
) -> Result<u8> {
    let cfg = &sc.config;
    let mut table = CsvTable::new(
        "validate",
        &[
            Column { name: "criterion", unit: "name" },
            Column { name: "pc", unit: "RE" },
            Column { name: "ps", unit: "RE" },
            Column { name: "measured", unit: "1" },
            Column { name: "low", unit: "1" },
            Column { name: "high", unit: "1" },
            Column { name: "pass", unit: "bool" },
        ],
    );
    let mut failures = 0;
    let mut check = |s: &mut Session<W>, name: &str, pc: usize, ps: usize, value: f64, window: (f64, f64)| -> Result<()> {
        let pass = value >= window.0 && value <= window.1;
        failures += usize::from(!pass);
        s.say(format_args!(
            "{} {name} pc={pc} ps={ps} measured={value:.4} window=[{}, {}]",
            if pass { "PASS" } else { "FAIL" },
            window.0,
            window.1
        ))?;
        table.push(vec![
            name.to_string(),
            pc.to_string(),
            ps.to_string(),
            num(Some(value)),
            num(Some(window.0)),
            num(Some(window.1)),
            pass.to_string(),
        ]);
        Ok(())
    };

    if matches!(suite, Suite::Sensing | Suite::All) {
        let (pc, ps) = (pc.unwrap_or(8), ps.unwrap_or(8));
        let pattern = make_pattern(cfg, pc, ps)?;
        let rep = sim::run_sensing_mc(cfg, &pattern, &VALIDATION_TARGET, cfg.sensing_snr, trials, seed)?;
        s.say(format_args!(
            "sensing: rmse_r={:.4e} m rmse_v={:.4e} m/s; vs assembled-FIM bound: {:.4} / {:.4}",
            rep.rmse_range_m, rep.rmse_velocity_mps, rep.fim_ratio_range, rep.fim_ratio_velocity
        ))?;
        check(s, "sensing_ratio_range", pc, ps, rep.ratio_range, SENSING_RATIO_WINDOW)?;
        check(s, "sensing_ratio_velocity", pc, ps, rep.ratio_velocity, SENSING_RATIO_WINDOW)?;
    }
    if matches!(suite, Suite::Channel | Suite::All) {
        let sizes: Vec<usize> = match pc.or(ps) {
            Some(p) => vec![p],
            None => vec![2, 4],
        };
        let moments = comm::spectrum_moments(&sc.profile)?;
        for p in sizes {
            let pattern = make_pattern(cfg, p, p)?;
            let mc = sim::run_channel_mc(cfg, &sc.profile, &pattern, trials, seed)?;
            let taylor = comm::mse_taylor_with(&moments, sc.profile.noise_var, p as f64, p as f64).value;
            s.say(format_args!("channel: pc=ps={p} empirical={mc:.4e} taylor={taylor:.4e}"))?;
            check(s, "channel_mse_ratio", p, p, mc / taylor, CHANNEL_RATIO_WINDOW)?;
        }
    }
    s.emit("validate.csv", &table.render())?;
    Ok(if failures == 0 { EXIT_OK } else { EXIT_VALIDATION_FAILED })
}

/// Entry point shared by the binary: parses `args`, runs, returns the exit code.
pub fn main_with_args(args: Vec<String>) -> u8 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    run(cli, args, &mut lock)
}
