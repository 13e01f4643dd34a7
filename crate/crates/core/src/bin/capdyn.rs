use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use capdyn::config::RunConfig;
use capdyn::dynamics::{classify_single, coefficients_single};
use capdyn::experiments::{build_tables, run_experiment, ExperimentKind, ExperimentSpec};
use capdyn::io::{load_matrix, save_matrix, write_trajectory, LabeledMatrix, Table};
use capdyn::kinematics::{
    closed_form_general, closed_form_weighted, uniform_grid, Rk4, Trajectory,
};
use capdyn::model::{output, output_grad_q, output_grad_r};
use capdyn::relatedness::{complementarity_matrix, growth_coupling_matrix, RelatednessWeights};
use capdyn::{Error, ModelParams, Result};

#[cfg(debug_assertions)]
const LONG_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (debug build)");
#[cfg(not(debug_assertions))]
const LONG_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (release build)");

#[derive(Parser)]
#[command(name = "capdyn", version, long_version = LONG_VERSION)]
#[command(about = "Weak-link production and capability accumulation dynamics")]
struct Cli {
    /// `key = value` run configuration; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed for all randomness. Falls back to the config file, then CAPDYN_SEED.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Output matrix and its first derivatives for given q and r matrices.
    Eval(Keys),
    /// Single trajectory: closed form, general closed form, RK4, or coupled RK4.
    Simulate {
        #[command(flatten)]
        keys: Keys,
        /// Closed form with weighted intensity `qbar` and rate `rate`.
        #[arg(long, conflicts_with_all = ["general", "coupled"])]
        closed_form: bool,
        /// Closed form with depreciation, from `gamma`, `delta`, `qbar`.
        #[arg(long, conflicts_with = "coupled")]
        general: bool,
        /// Integrate every endowment of `--r` under requirements `--q`.
        #[arg(long)]
        coupled: bool,
    },
    /// Regime at one mean intensity, or a sweep when `--out` is given.
    Phase(Keys),
    /// Growth-maximizing endowment against mean intensity.
    Bifurcation(Keys),
    /// Complementarity matrix of `--q` and, given `--r`, growth coupling.
    Relatedness {
        #[command(flatten)]
        keys: Keys,
        /// Comma-separated activity weights (default: all 1).
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
    },
    /// Figure datasets.
    Figures {
        #[command(flatten)]
        keys: Keys,
        /// growth-curves, bifurcation, trajectories, gap, or all.
        #[arg(long, default_value = "all")]
        name: String,
    },
    /// Coupled runs on random matrices.
    Ensemble(Keys),
}

/// Run configuration keys accepted as flags.
#[derive(Args, Default)]
struct Keys {
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    qbar: Option<f64>,
    #[arg(long)]
    r0: Option<f64>,
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    max_step: Option<f64>,
    #[arg(long)]
    r_points: Option<usize>,
    #[arg(long)]
    q_points: Option<usize>,
    #[arg(long)]
    ratio_points: Option<usize>,
    #[arg(long)]
    ratio_max: Option<f64>,
    #[arg(long)]
    members: Option<usize>,
    #[arg(long)]
    economies: Option<usize>,
    #[arg(long)]
    activities: Option<usize>,
    #[arg(long)]
    capabilities: Option<usize>,
    #[arg(long)]
    q_low: Option<f64>,
    #[arg(long)]
    q_high: Option<f64>,
    #[arg(long)]
    r_low: Option<f64>,
    #[arg(long)]
    r_high: Option<f64>,
    /// Requirements matrix CSV.
    #[arg(long)]
    q: Option<PathBuf>,
    /// Endowments matrix CSV.
    #[arg(long)]
    r: Option<PathBuf>,
    /// Output directory (a file for `simulate`); stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write SVG charts.
    #[arg(long)]
    svg: bool,
}

impl Keys {
    fn into_config(self, seed: Option<u64>) -> RunConfig {
        RunConfig {
            gamma: self.gamma,
            delta: self.delta,
            qbar: self.qbar,
            r0: self.r0,
            rate: self.rate,
            t_end: self.t_end,
            dt: self.dt,
            max_step: self.max_step,
            r_points: self.r_points,
            q_points: self.q_points,
            ratio_points: self.ratio_points,
            ratio_max: self.ratio_max,
            seed,
            members: self.members,
            economies: self.economies,
            activities: self.activities,
            capabilities: self.capabilities,
            q_low: self.q_low,
            q_high: self.q_high,
            r_low: self.r_low,
            r_high: self.r_high,
            q: self.q,
            r: self.r,
            out: self.out,
            svg: self.svg.then_some(true),
        }
    }
}

fn resolve_config(file: Option<&Path>, flags: RunConfig) -> Result<RunConfig> {
    let base = match file {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let mut cfg = base.merged(flags);
    if cfg.seed.is_none() {
        if let Ok(raw) = std::env::var("CAPDYN_SEED") {
            let seed = raw
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("CAPDYN_SEED = `{raw}` is not a u64")))?;
            cfg.seed = Some(seed);
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn required<T: Clone>(value: &Option<T>, key: &str) -> Result<T> {
    value.clone().ok_or_else(|| {
        Error::Config(format!(
            "missing `{key}` (flag --{} or config key)",
            key.replace('_', "-")
        ))
    })
}

fn params(cfg: &RunConfig) -> Result<ModelParams> {
    ModelParams::new(cfg.gamma.unwrap_or(1.0), cfg.delta.unwrap_or(0.0))
}

fn print_bytes(bytes: &[u8]) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(bytes)?;
    out.flush()?;
    Ok(())
}

fn emit_tables(spec: &ExperimentSpec, to_dir: bool) -> Result<()> {
    if to_dir {
        for path in run_experiment(spec)? {
            eprintln!("wrote {}", path.display());
        }
        return Ok(());
    }
    let tables = build_tables(spec)?;
    if tables.len() != 1 {
        return Err(Error::Config(format!(
            "`{}` writes {} tables; give --out DIR",
            spec.kind.name(),
            tables.len()
        )));
    }
    print_bytes(&tables[0].table.to_csv()?)
}

fn eval(cfg: &RunConfig) -> Result<()> {
    let q_file = load_matrix(&required(&cfg.q, "q")?)?;
    let r_file = load_matrix(&required(&cfg.r, "r")?)?;
    let (q, r) = (q_file.requirements()?, r_file.endowments()?);
    let y = LabeledMatrix {
        corner: r_file.corner.clone(),
        row_labels: r_file.row_labels.clone(),
        col_labels: q_file.row_labels.clone(),
        values: output(&q, &r)?,
    };
    let Some(dir) = &cfg.out else {
        return print_bytes(&y.to_csv()?);
    };
    std::fs::create_dir_all(dir)?;
    save_matrix(&dir.join("output.csv"), &y)?;
    let mut grads = Table::new(
        [
            "economy",
            "activity",
            "capability",
            "output",
            "dY_dr",
            "dY_dq",
        ]
        .map(String::from)
        .to_vec(),
    );
    for c in 0..r.n_economies() {
        for p in 0..q.n_activities() {
            for b in 0..q.n_capabilities() {
                grads.push(vec![
                    c as f64,
                    p as f64,
                    b as f64,
                    y.values[(c, p)],
                    output_grad_r(&q, &r, c, p, b)?,
                    output_grad_q(&q, &r, c, p, b)?,
                ]);
            }
        }
    }
    grads.write_csv(&dir.join("gradients.csv"))
}

fn simulate(cfg: &RunConfig, closed_form: bool, general: bool, coupled: bool) -> Result<()> {
    let grid = uniform_grid(cfg.t_end.unwrap_or(50.0), cfg.dt.unwrap_or(0.1))?;
    let rk = Rk4::new(cfg.max_step.unwrap_or(Rk4::default().max_step))?;
    let traj = if coupled {
        let q = load_matrix(&required(&cfg.q, "q")?)?.requirements()?;
        let r = load_matrix(&required(&cfg.r, "r")?)?.endowments()?;
        rk.integrate_coupled(&q, &r, params(cfg)?, &grid)?
    } else if closed_form {
        let (r0, q, rate) = (
            required(&cfg.r0, "r0")?,
            required(&cfg.qbar, "qbar")?,
            required(&cfg.rate, "rate")?,
        );
        Trajectory::sample("r", &grid, |t| closed_form_weighted(r0, q, rate, t))?
            .with_meta("r0", r0)
            .with_meta("qbar", q)
            .with_meta("rate", rate)
    } else {
        let r0 = required(&cfg.r0, "r0")?;
        let coeffs = coefficients_single(required(&cfg.qbar, "qbar")?, params(cfg)?)?;
        if general {
            let values = grid
                .iter()
                .map(|&t| closed_form_general(r0, coeffs, t))
                .collect::<Result<Vec<_>>>()?;
            Trajectory::new(
                grid.clone(),
                vec![capdyn::kinematics::Series {
                    name: "r".into(),
                    values,
                }],
            )?
        } else {
            rk.integrate_frozen(coeffs, r0, &grid)?
        }
    };
    match &cfg.out {
        Some(path) => write_trajectory(path, &traj),
        None => print_bytes(&Table::from(&traj).to_csv()?),
    }
}

fn phase(cfg: &RunConfig) -> Result<()> {
    if cfg.out.is_some() {
        let spec = ExperimentSpec::from_config(ExperimentKind::PhaseSweep, cfg)?;
        return emit_tables(&spec, true);
    }
    let class = classify_single(required(&cfg.qbar, "qbar")?, params(cfg)?)?;
    let q_crit = class
        .q_crit
        .map_or_else(|| "none".to_string(), |q| format!("{q:.4}"));
    print_bytes(
        format!(
            "regime: {}\nr_star: {:.4}\nq_crit: {q_crit}\n",
            class.regime.label(),
            class.r_star
        )
        .as_bytes(),
    )
}

fn relatedness(cfg: &RunConfig, weights: Option<Vec<f64>>) -> Result<()> {
    let q_file = load_matrix(&required(&cfg.q, "q")?)?;
    let q = q_file.requirements()?;
    let w = match weights {
        Some(w) => RelatednessWeights::new(w)?,
        None => RelatednessWeights::uniform(q.n_activities()),
    };
    let comp = LabeledMatrix {
        corner: "capability".into(),
        row_labels: q_file.col_labels.clone(),
        col_labels: q_file.col_labels.clone(),
        values: complementarity_matrix(&q, &w)?.matrix().clone(),
    };
    let Some(dir) = &cfg.out else {
        return print_bytes(&comp.to_csv()?);
    };
    std::fs::create_dir_all(dir)?;
    save_matrix(&dir.join("complementarity.csv"), &comp)?;
    if let Some(r_path) = &cfg.r {
        let r = load_matrix(r_path)?.endowments()?;
        let p = params(cfg)?;
        let mut table = Table::new(
            ["economy", "capability", "other", "coupling"]
                .map(String::from)
                .to_vec(),
        );
        for c in 0..r.n_economies() {
            let m = growth_coupling_matrix(&q, &r, p, c)?;
            for b in 0..m.nrows() {
                for b2 in (0..m.ncols()).filter(|&b2| b2 != b) {
                    table.push(vec![c as f64, b as f64, b2 as f64, m[(b, b2)]]);
                }
            }
        }
        table.write_csv(&dir.join("coupling.csv"))?;
    }
    Ok(())
}

fn figures(cfg: &RunConfig, name: &str) -> Result<()> {
    let kinds: Vec<ExperimentKind> = if name == "all" {
        ExperimentKind::FIGURES.to_vec()
    } else {
        let kind: ExperimentKind = name.parse()?;
        if !ExperimentKind::FIGURES.contains(&kind) {
            return Err(Error::UnknownExperiment(format!("{name} (not a figure)")));
        }
        vec![kind]
    };
    if cfg.out.is_none() && kinds.len() > 1 {
        return Err(Error::Config("`figures --name all` needs --out DIR".into()));
    }
    for kind in kinds {
        let spec = ExperimentSpec::from_config(kind, cfg)?;
        emit_tables(&spec, cfg.out.is_some())?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let cfg = |keys: Keys| resolve_config(cli.config.as_deref(), keys.into_config(cli.seed));
    match cli.command {
        Command::Eval(keys) => eval(&cfg(keys)?),
        Command::Simulate {
            keys,
            closed_form,
            general,
            coupled,
        } => simulate(&cfg(keys)?, closed_form, general, coupled),
        Command::Phase(keys) => phase(&cfg(keys)?),
        Command::Bifurcation(keys) => {
            let cfg = cfg(keys)?;
            let spec = ExperimentSpec::from_config(ExperimentKind::Bifurcation, &cfg)?;
            emit_tables(&spec, cfg.out.is_some())
        }
        Command::Relatedness { keys, weights } => relatedness(&cfg(keys)?, weights),
        Command::Figures { keys, name } => figures(&cfg(keys)?, &name),
        Command::Ensemble(keys) => {
            let cfg = cfg(keys)?;
            let spec = ExperimentSpec::from_config(ExperimentKind::Ensemble, &cfg)?;
            emit_tables(&spec, cfg.out.is_some())
        }
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
