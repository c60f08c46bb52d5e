//! `compdim`: command-line access to the dimensioning models, the M/M/1
//! simulator and the figure sweeps.
//!
//! Exit status: 0 on success, 1 for usage or configuration errors, 2 when the
//! model reports an infeasibility (the sentinel name is printed on stdout).

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use compdim::cran::{CranConfig, DEFAULT_KAPPA_A, DEFAULT_KAPPA_B};
use compdim::format::format_significant;
use compdim::mcc::{self, MccTask, PlanOptions, PlanWeights};
use compdim::sweep::{self, figure_spec, Figure, SweepSpec};
use compdim::{des, NormalDeadline, OutageSemantics, RngSeed, SdnScenario, SimConfig, Sojourn};
use serde_json::Value;

const SEED_ENV: &str = "COMPDIM_SEED";
const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "compdim", version, about = "Computation resource dimensioning for SDN, C-RAN and mobile cloud offloading")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Outage probability of an M/M/1 SDN controller against a normal deadline.
    SdnOutage(SdnArgs),
    /// Data rate a BBU compute budget can carry.
    CranRate(CranRateArgs),
    /// BBU compute for a target rate, or for the resource blocks of a bandwidth and MCS.
    CranGops(CranGopsArgs),
    /// Clone capacity that meets the task deadline.
    MccClone(MccCloneArgs),
    /// Joint BBU / clone allocation minimizing weighted GOPS.
    MccPlan(MccPlanArgs),
    /// Discrete-event simulation of the SDN controller queue.
    Simulate(SimulateArgs),
    /// Run a parameter sweep and write CSV.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ConfigArg {
    /// JSON file supplying symbol values (top-level numbers or a "fixed" map). Flags override it.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Controller capacity f^S (jobs/s).
    #[arg(long)]
    fs: Option<f64>,
    /// Switch packet arrival rate lambda (packets/s).
    #[arg(long)]
    lambda: Option<f64>,
    /// Flow-table miss probability p.
    #[arg(long)]
    p: Option<f64>,
    /// Northbound instruction rate mu (1/s).
    #[arg(long)]
    mu: Option<f64>,
    /// Deadline mean rho (s).
    #[arg(long)]
    rho: Option<f64>,
    /// Deadline variance sigma^2 (s^2).
    #[arg(long)]
    sigma2: Option<f64>,
}

#[derive(Args)]
struct SdnArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[command(flatten)]
    scenario: ScenarioArgs,
}

#[derive(Args)]
struct RadioArgs {
    /// Antenna count A.
    #[arg(long)]
    a: Option<f64>,
    /// Bandwidth B (Hz).
    #[arg(long)]
    b: Option<f64>,
    /// Hz per resource block (default 2e5).
    #[arg(long = "kappa-a")]
    kappa_a: Option<f64>,
    /// Rate constant per resource block (default 1.68e5).
    #[arg(long = "kappa-b")]
    kappa_b: Option<f64>,
}

#[derive(Args)]
struct CranRateArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// BBU compute f^B (GOPS).
    #[arg(long)]
    fb: Option<f64>,
    #[command(flatten)]
    radio: RadioArgs,
}

#[derive(Args)]
struct CranGopsArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Target data rate r (bit/s). Without it, compute is derived from --m/--c.
    #[arg(long)]
    r: Option<f64>,
    /// Modulation bits M.
    #[arg(long)]
    m: Option<f64>,
    /// Code rate C.
    #[arg(long)]
    c: Option<f64>,
    /// Resource blocks R (default B / kappa-a).
    #[arg(long)]
    blocks: Option<f64>,
    #[command(flatten)]
    radio: RadioArgs,
}

#[derive(Args)]
struct TaskArgs {
    /// Task size F (giga-operations).
    #[arg(long)]
    f: Option<f64>,
    /// Data volume D (bits).
    #[arg(long)]
    d: Option<f64>,
    /// Deadline tau (s).
    #[arg(long)]
    tau: Option<f64>,
}

#[derive(Args)]
struct MccCloneArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[command(flatten)]
    task: TaskArgs,
    /// Data rate r (bit/s); alternative to --fb.
    #[arg(long)]
    r: Option<f64>,
    /// BBU compute f^B (GOPS); needs --a and --b.
    #[arg(long)]
    fb: Option<f64>,
    #[command(flatten)]
    radio: RadioArgs,
}

#[derive(Args)]
struct MccPlanArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[command(flatten)]
    task: TaskArgs,
    #[command(flatten)]
    radio: RadioArgs,
    /// Cost per BBU GOPS (default 1).
    #[arg(long = "w-bbu")]
    w_bbu: Option<f64>,
    /// Cost per clone GOPS (default 1).
    #[arg(long = "w-clone")]
    w_clone: Option<f64>,
    /// Upper end of the BBU search interval (GOPS).
    #[arg(long = "fb-max")]
    fb_max: Option<f64>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Observed jobs per replication.
    #[arg(long)]
    jobs: Option<u64>,
    /// Warm-up jobs discarded per replication.
    #[arg(long)]
    warmup: Option<u64>,
    #[arg(long)]
    replications: Option<u32>,
    /// Random seed; falls back to $COMPDIM_SEED.
    #[arg(long)]
    seed: Option<u64>,
    /// Compare each job's own sojourn to its own deadline draw.
    #[arg(long = "per-job")]
    per_job: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep spec (JSON).
    #[arg(long, value_name = "PATH", conflicts_with = "figure", required_unless_present = "figure")]
    config: Option<PathBuf>,
    /// Built-in figure spec: fig2a, fig2b, fig4a, fig4b, fig5a, fig5b.
    #[arg(long)]
    figure: Option<String>,
    /// CSV destination; "-" for stdout. Overrides the spec's output.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Print the resolved spec as JSON instead of running it.
    #[arg(long = "print-spec")]
    print_spec: bool,
}

enum Failure {
    Usage(String),
    Model(compdim::Error),
}

impl From<compdim::Error> for Failure {
    fn from(e: compdim::Error) -> Self {
        if e.sentinel().is_some() {
            Failure::Model(e)
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, Failure>;

/// Symbol values from flags layered over a config file.
struct Symbols {
    values: BTreeMap<String, f64>,
}

impl Symbols {
    fn load(config: Option<&Path>, allowed: &[&str]) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        if let Some(path) = config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let doc: Value = serde_json::from_str(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let map = match doc.get("fixed") {
                Some(Value::Object(m)) => m.clone(),
                _ => doc.as_object().cloned().ok_or_else(|| Failure::Usage("config must be a JSON object".into()))?,
            };
            for (key, value) in map {
                if !allowed.contains(&key.as_str()) {
                    return Err(Failure::Usage(format!("unknown symbol '{key}' in {}", path.display())));
                }
                let v = value
                    .as_f64()
                    .ok_or_else(|| Failure::Usage(format!("symbol '{key}' must be a number")))?;
                values.insert(key, v);
            }
        }
        Ok(Self { values })
    }

    fn set(&mut self, symbol: &str, flag: Option<f64>) -> &mut Self {
        if let Some(v) = flag {
            self.values.insert(symbol.to_string(), v);
        }
        self
    }

    fn get(&self, symbol: &str) -> Option<f64> {
        self.values.get(symbol).copied()
    }

    fn req(&self, symbol: &str) -> CliResult<f64> {
        self.get(symbol).ok_or_else(|| Failure::Usage(format!("missing symbol '{symbol}'")))
    }

    fn integer(&self, symbol: &str) -> CliResult<Option<u64>> {
        match self.get(symbol) {
            None => Ok(None),
            Some(v) if v >= 0.0 && v.fract() == 0.0 && v <= 9_007_199_254_740_992.0 => Ok(Some(v as u64)),
            Some(v) => Err(Failure::Usage(format!("symbol '{symbol}' must be a non-negative integer, got {v}"))),
        }
    }

    fn with_scenario(&mut self, s: &ScenarioArgs) -> &mut Self {
        self.set("fs", s.fs)
            .set("lambda", s.lambda)
            .set("p", s.p)
            .set("mu", s.mu)
            .set("rho", s.rho)
            .set("sigma2", s.sigma2)
    }

    fn with_radio(&mut self, r: &RadioArgs) -> &mut Self {
        self.set("a", r.a).set("b", r.b).set("kappa_a", r.kappa_a).set("kappa_b", r.kappa_b)
    }

    fn with_task(&mut self, t: &TaskArgs) -> &mut Self {
        self.set("f", t.f).set("d", t.d).set("tau", t.tau)
    }

    fn scenario(&self) -> CliResult<SdnScenario> {
        let deadline = NormalDeadline::new(self.req("rho")?, self.req("sigma2")?)?;
        Ok(SdnScenario::new(self.req("fs")?, self.req("lambda")?, self.req("p")?, self.req("mu")?, deadline)?)
    }

    fn cran(&self, default_mcs: bool) -> CliResult<CranConfig> {
        let a = self.integer("a")?.ok_or_else(|| Failure::Usage("missing symbol 'a'".into()))?;
        let a = u32::try_from(a).map_err(|_| Failure::Usage("antenna count 'a' is too large".into()))?;
        let (m, c) = if default_mcs {
            (6, 1.0)
        } else {
            let m = self.integer("m")?.ok_or_else(|| Failure::Usage("missing symbol 'm'".into()))?;
            (u32::try_from(m).unwrap_or(0), self.req("c")?)
        };
        Ok(CranConfig::with_kappas(
            a,
            self.req("b")?,
            m,
            c,
            self.get("kappa_a").unwrap_or(DEFAULT_KAPPA_A),
            self.get("kappa_b").unwrap_or(DEFAULT_KAPPA_B),
        )?)
    }

    fn task(&self) -> CliResult<MccTask> {
        Ok(MccTask::new(self.req("f")?, self.req("d")?, self.req("tau")?)?)
    }
}

const SCENARIO: [&str; 6] = ["fs", "lambda", "p", "mu", "rho", "sigma2"];
const RADIO: [&str; 4] = ["a", "b", "kappa_a", "kappa_b"];
const TASK: [&str; 3] = ["f", "d", "tau"];

fn allowed(groups: &[&[&'static str]]) -> Vec<&'static str> {
    groups.iter().flat_map(|g| g.iter().copied()).collect()
}

fn num(v: f64) -> String {
    format_significant(v, 9, false)
}

fn run(command: Command, out: &mut dyn Write) -> CliResult<()> {
    let write_err = |e: io::Error| Failure::Usage(format!("write failed: {e}"));
    match command {
        Command::SdnOutage(args) => {
            let mut sym = Symbols::load(args.config.config.as_deref(), &SCENARIO)?;
            let s = sym.with_scenario(&args.scenario).scenario()?;
            writeln!(out, "{}", num(s.outage_probability())).map_err(write_err)?;
            if let Sojourn::Unstable = s.mean_sojourn_time() {
                eprintln!(
                    "note: UNSTABLE regime, offered load {} >= controller capacity {}",
                    num(s.offered_load()),
                    num(s.controller_capacity())
                );
            }
        }
        Command::CranRate(args) => {
            let mut sym = Symbols::load(args.config.config.as_deref(), &allowed(&[&RADIO, &["fb"]]))?;
            sym.with_radio(&args.radio).set("fb", args.fb);
            let rate = sym.cran(true)?.rate_from_compute(sym.req("fb")?)?;
            writeln!(out, "{}", num(rate)).map_err(write_err)?;
        }
        Command::CranGops(args) => {
            let mut sym = Symbols::load(args.config.config.as_deref(), &allowed(&[&RADIO, &["r", "m", "c", "blocks"]]))?;
            sym.with_radio(&args.radio).set("r", args.r).set("m", args.m).set("c", args.c).set("blocks", args.blocks);
            let gops = match sym.get("r") {
                Some(rate) => sym.cran(true)?.compute_from_rate(rate)?,
                None => {
                    let cfg = sym.cran(false)?;
                    let blocks = sym.get("blocks").unwrap_or_else(|| cfg.blocks_from_bandwidth());
                    cfg.required_gops(blocks)?
                }
            };
            writeln!(out, "{}", num(gops)).map_err(write_err)?;
        }
        Command::MccClone(args) => {
            let mut sym = Symbols::load(args.config.config.as_deref(), &allowed(&[&TASK, &RADIO, &["r", "fb"]]))?;
            sym.with_task(&args.task).with_radio(&args.radio).set("r", args.r).set("fb", args.fb);
            let task = sym.task()?;
            let fc = match (sym.get("r"), sym.get("fb")) {
                (Some(_), Some(_)) => return Err(Failure::Usage("give either 'r' or 'fb', not both".into())),
                (Some(rate), None) => mcc::clone_capacity_for_rate(&task, rate)?,
                (None, Some(fb)) => mcc::clone_capacity_for_qos(&task, &sym.cran(true)?, fb)?,
                (None, None) => return Err(Failure::Usage("missing symbol 'r' or 'fb'".into())),
            };
            writeln!(out, "{}", num(fc)).map_err(write_err)?;
        }
        Command::MccPlan(args) => {
            let mut sym = Symbols::load(
                args.config.config.as_deref(),
                &allowed(&[&TASK, &RADIO, &["w_bbu", "w_clone", "fb_max"]]),
            )?;
            sym.with_task(&args.task)
                .with_radio(&args.radio)
                .set("w_bbu", args.w_bbu)
                .set("w_clone", args.w_clone)
                .set("fb_max", args.fb_max);
            let weights = PlanWeights { bbu: sym.get("w_bbu").unwrap_or(1.0), clone: sym.get("w_clone").unwrap_or(1.0) };
            let options = PlanOptions { fb_max: sym.get("fb_max"), ..PlanOptions::default() };
            let plan = mcc::plan_joint(&sym.task()?, &sym.cran(true)?, &weights, &options)?;
            let lines = [
                ("bbu_gops", plan.bbu_gops),
                ("clone_gops", plan.clone_gops),
                ("achieved_rate", plan.achieved_rate),
                ("total_latency", plan.total_latency),
                ("objective_value", plan.objective_value),
            ];
            for (k, v) in lines {
                writeln!(out, "{k}={}", num(v)).map_err(write_err)?;
            }
        }
        Command::Simulate(args) => {
            let mut sym = Symbols::load(
                args.config.config.as_deref(),
                &allowed(&[&SCENARIO, &["jobs", "warmup", "replications", "seed"]]),
            )?;
            sym.with_scenario(&args.scenario);
            let scenario = sym.scenario()?;
            let seed = match args.seed {
                Some(s) => s,
                None => match sym.integer("seed")? {
                    Some(s) => s,
                    None => seed_from_env()?,
                },
            };
            let mut cfg = SimConfig::new(scenario, RngSeed(seed));
            if let Some(j) = args.jobs.or(sym.integer("jobs")?) {
                cfg = cfg.with_jobs(j);
            }
            if let Some(w) = args.warmup.or(sym.integer("warmup")?) {
                cfg = cfg.with_warmup(w);
            }
            if let Some(r) = args.replications.map(u64::from).or(sym.integer("replications")?) {
                let r = u32::try_from(r).map_err(|_| Failure::Usage("replications is too large".into()))?;
                cfg = cfg.with_replications(r);
            }
            if args.per_job {
                cfg = cfg.with_semantics(OutageSemantics::PerJob);
            }
            let r = des::simulate(&cfg)?;
            let analytic = scenario.require_stable()?;
            let lines = [
                ("seed", seed.to_string()),
                ("jobs_observed", r.jobs_observed.to_string()),
                ("mean_sojourn", num(r.mean_sojourn)),
                ("ci_halfwidth_sojourn", num(r.ci_halfwidth_sojourn)),
                ("analytic_sojourn", num(analytic)),
                ("outage_fraction", num(r.outage_fraction)),
                ("ci_halfwidth_outage", num(r.ci_halfwidth_outage)),
                ("analytic_outage", num(scenario.outage_probability())),
                ("mean_in_system", num(r.mean_in_system)),
                ("arrival_rate", num(r.arrival_rate)),
            ];
            for (k, v) in lines {
                writeln!(out, "{k}={v}").map_err(write_err)?;
            }
        }
        Command::Sweep(args) => {
            let spec = match (&args.config, &args.figure) {
                (Some(path), _) => SweepSpec::from_path(path)?,
                (None, Some(name)) => figure_spec(
                    Figure::from_name(name).ok_or_else(|| Failure::Usage(format!("unknown figure '{name}'")))?,
                ),
                (None, None) => return Err(Failure::Usage("sweep needs --config or --figure".into())),
            };
            if args.print_spec {
                writeln!(out, "{}", spec.to_json()).map_err(write_err)?;
                return Ok(());
            }
            let rows = sweep::run_sweep(&spec)?;
            let target = args.output.clone().or_else(|| spec.output.clone());
            match target {
                Some(path) if path.as_os_str() != "-" => {
                    let path = sweep::emit_csv(&rows, &spec, Some(&path))?;
                    eprintln!("wrote {} rows to {}", rows.len(), path.display());
                }
                _ => sweep::write_csv(&rows, &mut *out).map_err(write_err)?,
            }
        }
    }
    Ok(())
}

fn seed_from_env() -> CliResult<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{SEED_ENV} must be an unsigned integer, got '{v}'"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Model(e)) => {
            let _ = writeln!(out, "{}", e.sentinel().unwrap_or("INFEASIBLE"));
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
