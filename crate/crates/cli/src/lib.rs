//! Command-line front end: parses flags or a JSON config, evaluates one
//! physics quantity over a grid and writes CSV or JSON records.

pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use optobessel::attractor::{self, AttractorParams};
use optobessel::cycles::{self, CycleParams, CycleSearch, DetuningMode};
use optobessel::verify::{self, Suite};

use config::{Axis, Format, ParamSet, RunConfig};
use output::{render, Cell, Table};

/// Failure of one invocation, mapped onto the process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<optobessel::Error> for CliError {
    fn from(e: optobessel::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

pub const UNIT_HELP: &str = "\
All inputs are dimensionless.
  attractor subcommands (force, power, attractor-sweep, stability-scan):
    frequencies and rates (kappa, detuning, mech-damping) in units of the
    mechanical frequency Omega_m; --kappa is the energy decay rate, so the
    scaled half width is c = kappa / (2 Omega_m) and the scaled detuning is
    r = (Delta + G xbar) / Omega_m. Displacements (xbar, amplitude) are in
    units of 1/G when --coupling 1; hbar = 1.
  cycle subcommands (drift, diffusion, wigner, cycles, delta-eff):
    rates in units of omega_m; --kappa is the amplitude decay rate;
    eta = 2 g0 / omega_m multiplies the amplitude r in every Bessel argument;
    --gamma-over-gamma0 gives the damping in units of g0 E^2 / omega_m^2.
";

#[derive(Debug, Parser)]
#[command(
    name = "optobessel",
    version,
    about = "Exact Bessel-series optomechanics"
)]
pub struct Cli {
    /// Print the unit conventions and exit.
    #[arg(long, global = true)]
    pub unit_help: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// JSON config file (schema 1); flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Sweep axis `name:start:stop:count[:linear|log]`, repeatable.
    #[arg(long = "grid", allow_hyphen_values = true)]
    pub grid: Vec<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[command(flatten)]
    pub params: ParamSet,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Time-averaged radiation force; axis `A`. Columns `A,force,photon_number`.
    Force(Common),
    /// Time-averaged power input; axis `A`. Columns `A,power`.
    Power(Common),
    /// Attractor diagram; axes `A` and `Delta`. Columns `A,Delta,xbar,ratio,force,power`.
    AttractorSweep(Common),
    /// Maximum of the small-amplitude stability ratio; axis `c`. Columns `c,r_max,f_max`.
    StabilityScan(Common),
    /// Drift coefficient; axis `r`. Columns `r,mu`.
    Drift(Common),
    /// Q-function diffusion; axis `r`. Columns `r,D`.
    Diffusion(Common),
    /// Wigner diffusion and its near-resonance form; axis `r`. Columns `r,D_W,D_W_approx`.
    Wigner(Common),
    /// Limit cycles on [r-min, r-max]. Columns `r0,slope,stable`.
    Cycles(Common),
    /// Effective detuning and its large-amplitude forms; axis `r`.
    /// Columns `r,delta_eff,asymptotic_general,asymptotic_small`.
    DeltaEff(Common),
    /// Exact against asymptotic form; axis `x` (|X| or eta r). Columns `x,exact,asymptotic`.
    Asymptote(Common),
    /// Closed forms against their oracles. Columns `quantity,point_id,closed,oracle,rel_err,n_terms`.
    Validate(Common),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Force(_) => "force",
            Command::Power(_) => "power",
            Command::AttractorSweep(_) => "attractor-sweep",
            Command::StabilityScan(_) => "stability-scan",
            Command::Drift(_) => "drift",
            Command::Diffusion(_) => "diffusion",
            Command::Wigner(_) => "wigner",
            Command::Cycles(_) => "cycles",
            Command::DeltaEff(_) => "delta-eff",
            Command::Asymptote(_) => "asymptote",
            Command::Validate(_) => "validate",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Force(c)
            | Command::Power(c)
            | Command::AttractorSweep(c)
            | Command::StabilityScan(c)
            | Command::Drift(c)
            | Command::Diffusion(c)
            | Command::Wigner(c)
            | Command::Cycles(c)
            | Command::DeltaEff(c)
            | Command::Asymptote(c)
            | Command::Validate(c) => c,
        }
    }
}

/// Merges the config file with the command-line flags.
pub fn resolve(cmd: &Command) -> Result<RunConfig, CliError> {
    let c = cmd.common();
    let mut cfg = match &c.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::empty(),
    };
    if let Some(mode) = &cfg.mode {
        if mode != cmd.name() {
            return Err(CliError::Config(format!(
                "config mode `{mode}` does not match subcommand `{}`",
                cmd.name()
            )));
        }
    }
    cfg.mode = Some(cmd.name().to_string());
    cfg.params = cfg.params.overlaid(&c.params);
    for spec in &c.grid {
        let axis = Axis::parse(spec)?;
        cfg.grid.retain(|a| a.name != axis.name);
        cfg.grid.push(axis);
    }
    if let Some(path) = &c.output {
        cfg.output.path = Some(path.clone());
    }
    if let Some(f) = c.format {
        cfg.output.format = f;
    }
    Ok(cfg)
}

/// Values along `name`: the grid axis if present, else the single `fallback`.
fn axis_values(cfg: &RunConfig, name: &str, fallback: Option<f64>, default: f64) -> Vec<f64> {
    match cfg.axis(name) {
        Some(a) => a.values(),
        None => vec![fallback.unwrap_or(default)],
    }
}

/// Rendered output of one run. `failure` is set when the output is complete
/// but some records failed; the process then exits with the numerical code.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub text: String,
    pub failure: Option<String>,
}

/// Evaluates `cmd` and returns the rendered output.
pub fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Rendered, CliError> {
    let table = build_table(cmd, cfg)?;
    Ok(Rendered {
        text: render(&table, cmd.name(), cfg),
        failure: table.failure.clone(),
    })
}

fn build_table(cmd: &Command, cfg: &RunConfig) -> Result<Table, CliError> {
    let ps = &cfg.params;
    match cmd {
        Command::Force(_) => {
            cfg.check_axes(&["A"])?;
            let p = ps.attractor()?;
            let mut t = Table::new(&["A", "force", "photon_number"]);
            for a in axis_values(cfg, "A", ps.amplitude, p.amplitude) {
                let q = p.with_amplitude(a);
                t.push(vec![
                    a.into(),
                    attractor::force_avg(&q)?.into(),
                    attractor::photon_number(&q)?.into(),
                ]);
            }
            Ok(t)
        }
        Command::Power(_) => {
            cfg.check_axes(&["A"])?;
            let p = ps.attractor()?;
            let mut t = Table::new(&["A", "power"]);
            for a in axis_values(cfg, "A", ps.amplitude, p.amplitude) {
                t.push(vec![
                    a.into(),
                    attractor::power_input(&p.with_amplitude(a))?.into(),
                ]);
            }
            Ok(t)
        }
        Command::AttractorSweep(_) => attractor_sweep(cfg),
        Command::StabilityScan(_) => {
            cfg.check_axes(&["c"])?;
            let g = ps.stability_coupling.unwrap_or(1.0);
            let cs = axis_values(cfg, "c", None, std::f64::consts::FRAC_1_SQRT_2);
            let mut t = Table::new(&["c", "r_max", "f_max"]);
            for e in attractor::stability_extrema_scan(g, &cs)? {
                t.push(vec![e.half_width.into(), e.r_max.into(), e.f_max.into()]);
            }
            Ok(t)
        }
        Command::Drift(_) | Command::Diffusion(_) | Command::Wigner(_) | Command::DeltaEff(_) => {
            cycle_table(cmd, cfg)
        }
        Command::Cycles(_) => {
            cfg.check_axes(&[])?;
            let p = ps.cycle()?;
            let search = CycleSearch {
                use_approx: ps.approx.unwrap_or(false),
                mode: mode(ps),
            };
            let lo = ps.r_min.unwrap_or(0.05);
            let hi = ps.r_max.unwrap_or(10.0);
            let roots =
                cycles::find_limit_cycles_with(&p, lo, hi, search).map_err(|e| match e {
                    optobessel::Error::InvalidInput(m) => CliError::Config(m),
                    other => other.into(),
                })?;
            let mut t = Table::new(&["r0", "slope", "stable"]);
            for c in roots {
                t.push(vec![c.r0.into(), c.slope.into(), c.stable.into()]);
            }
            Ok(t)
        }
        Command::Asymptote(_) => asymptote(cfg),
        Command::Validate(_) => validate(cfg),
    }
}

fn mode(ps: &ParamSet) -> DetuningMode {
    if ps.dynamical.unwrap_or(false) {
        DetuningMode::Dynamical
    } else {
        DetuningMode::Static
    }
}

fn attractor_sweep(cfg: &RunConfig) -> Result<Table, CliError> {
    cfg.check_axes(&["A", "Delta"])?;
    let ps = &cfg.params;
    let p = ps.attractor()?;
    if p.mech_damping == 0.0 {
        return Err(CliError::Config(
            "attractor-sweep needs mech_damping > 0 for the ratio".into(),
        ));
    }
    let amps = axis_values(cfg, "A", ps.amplitude, 1.0);
    let dets = axis_values(cfg, "Delta", ps.detuning, p.detuning);
    let rows = attractor::attractor_sweep(&amps, &dets, &p, ps.self_consistent.unwrap_or(false));
    let mut t = Table::new(&["A", "Delta", "xbar", "ratio", "force", "power"]);
    let mut failed = 0;
    for r in rows {
        if r.failure.is_some() {
            failed += 1;
        }
        t.push(vec![
            r.amplitude.into(),
            r.detuning.into(),
            r.xbar.into(),
            r.ratio.into(),
            r.force.into(),
            r.power.into(),
        ]);
    }
    if failed > 0 {
        t.notes.push(format!("failed cells (NaN): {failed}"));
        t.failure = Some(format!("{failed} sweep cells failed"));
    }
    Ok(t)
}

fn cycle_table(cmd: &Command, cfg: &RunConfig) -> Result<Table, CliError> {
    cfg.check_axes(&["r"])?;
    let ps = &cfg.params;
    let p = ps.cycle()?;
    let m = mode(ps);
    let rs = axis_values(cfg, "r", ps.r, 1.0);
    let mut t = match cmd {
        Command::Drift(_) => Table::new(&["r", "mu"]),
        Command::Diffusion(_) => Table::new(&["r", "D"]),
        Command::Wigner(_) => Table::new(&["r", "D_W", "D_W_approx"]),
        _ => Table::new(&["r", "delta_eff", "asymptotic_general", "asymptotic_small"]),
    };
    for r in rs {
        let row: Vec<Cell> = match cmd {
            Command::Drift(_) => vec![r.into(), cycles::drift_mu(r, &p.resolve(r, m)?)?.into()],
            Command::Diffusion(_) => {
                vec![r.into(), cycles::diffusion_d(r, &p.resolve(r, m)?)?.into()]
            }
            Command::Wigner(_) => {
                let q = p.resolve(r, m)?;
                let exact = if q.fluct_detuning == q.eff_detuning {
                    cycles::wigner_diffusion(r, &q)?
                } else {
                    cycles::wigner_diffusion_general(r, &q)?
                };
                vec![
                    r.into(),
                    exact.into(),
                    cycles::wigner_diffusion_resonant_approx(r, &q).into(),
                ]
            }
            _ => vec![
                r.into(),
                cycles::solve_delta_eff(r, &p)?.into(),
                cycles::delta_eff_asymptotic(r, &p, false).into(),
                cycles::delta_eff_asymptotic(r, &p, true).into(),
            ],
        };
        t.push(row);
    }
    Ok(t)
}

fn asymptote(cfg: &RunConfig) -> Result<Table, CliError> {
    cfg.check_axes(&["x"])?;
    let ps = &cfg.params;
    let quantity = ps.quantity.as_deref().unwrap_or("force");
    let xs = axis_values(cfg, "x", None, 40.0);
    let mut t = Table::new(&["x", "exact", "asymptotic"]);
    match quantity {
        "force" | "power" => {
            let p = ps.attractor()?;
            for x in xs {
                let q: AttractorParams = p.with_amplitude(x * p.mech_freq / p.coupling.abs());
                let (e, a) = if quantity == "force" {
                    (
                        attractor::force_avg(&q)?,
                        attractor::force_avg_asymptotic(&q),
                    )
                } else {
                    (
                        attractor::power_input(&q)?,
                        attractor::power_input_asymptotic(&q),
                    )
                };
                t.push(vec![x.into(), e.into(), a.into()]);
            }
        }
        "drift" | "delta-eff" => {
            let p: CycleParams = ps.cycle()?;
            for x in xs {
                let r = x / p.bessel_scale();
                let (e, a) = if quantity == "drift" {
                    (cycles::drift_mu(r, &p)?, cycles::drift_mu_asymptotic(r, &p))
                } else {
                    (
                        cycles::solve_delta_eff(r, &p)?,
                        cycles::delta_eff_asymptotic(r, &p, false),
                    )
                };
                t.push(vec![x.into(), e.into(), a.into()]);
            }
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown asymptote quantity `{other}` (force, power, drift, delta-eff)"
            )))
        }
    }
    Ok(t)
}

fn validate(cfg: &RunConfig) -> Result<Table, CliError> {
    cfg.check_axes(&[])?;
    let name = cfg.params.suite.as_deref().unwrap_or("standard");
    let suite =
        Suite::parse(name).ok_or_else(|| CliError::Config(format!("unknown suite `{name}`")))?;
    let mut rows = verify::run_validation_suite(suite);
    let tol = &cfg.tolerances;
    for r in &mut rows {
        let over = if r.quantity.starts_with("ode_") {
            tol.ode
        } else if r.quantity == "delta_eff" {
            tol.delta_eff
        } else {
            tol.series
        };
        if let Some(v) = over {
            r.tolerance = v;
        }
    }
    let failed = rows.iter().filter(|r| !r.passed()).count();
    let mut t = Table::new(&[
        "quantity", "point_id", "closed", "oracle", "rel_err", "n_terms",
    ]);
    for r in &rows {
        t.push(vec![
            r.quantity.as_str().into(),
            r.point_id.into(),
            r.closed_form.into(),
            r.oracle.into(),
            r.rel_err.into(),
            r.terms_or_steps.into(),
        ]);
    }
    t.notes.push(format!(
        "suite: {} rows: {} failed: {failed}",
        suite.name(),
        rows.len()
    ));
    if failed > 0 {
        t.failure = Some(format!("{failed} validation rows out of tolerance"));
    }
    Ok(t)
}

/// Parses `args`, runs the subcommand and writes its output. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if cli.unit_help {
        print!("{UNIT_HELP}");
        return 0;
    }
    let Some(cmd) = cli.command else {
        eprintln!("error: a subcommand is required (see --help)");
        return 2;
    };
    match run_command(&cmd) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("optobessel {}: {e}", cmd.name());
            e.exit_code()
        }
    }
}

fn run_command(cmd: &Command) -> Result<(), CliError> {
    let cfg = resolve(cmd)?;
    let out = execute(cmd, &cfg)?;
    match &cfg.output.path {
        Some(path) => std::fs::write(path, &out.text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{}", out.text),
    }
    match out.failure {
        Some(msg) => Err(CliError::Numerical(msg)),
        None => Ok(()),
    }
}
