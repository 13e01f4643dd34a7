//! Scripted, reproducible data tables.
//!
//! | experiment      | output                                                         |
//! |-----------------|----------------------------------------------------------------|
//! | `growth-curves` | `dr/dt` over an `r` grid below, at and above the threshold     |
//! | `bifurcation`   | growth-maximizing endowment against mean intensity             |
//! | `trajectories`  | closed-form kinematics for varying `r0` and varying complements |
//! | `gap`           | endowment differences between the `r0` trajectories            |
//! | `phase-sweep`   | regime over a (mean intensity, depreciation/investment) grid   |
//! | `ensemble`      | coupled runs on random matrices, endowment-growth correlation  |
//!
//! Kinematics figures use a fixed "figure step" of [`FIGURE_STEP`] model
//! time units, chosen so that the widest endowment gap peaks roughly 100
//! figure steps in.

use std::path::PathBuf;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::dynamics::{
    argmax_growth_single, classify_single, critical_intensity, growth_rate_single, Regime,
};
use crate::error::{Error, Result};
use crate::io::{line_chart_svg, write_atomic, Table};
use crate::kinematics::{closed_form_weighted, gap_curve, uniform_grid, Rk4, Trajectory};
use crate::model::{CapabilityRequirements, Endowments, ModelParams};

/// Model time per figure step.
pub const FIGURE_STEP: f64 = 0.025;

pub const KINEMATICS_INITIAL: [f64; 3] = [0.1, 0.3, 0.5];
pub const KINEMATICS_INTENSITY: f64 = 0.9;
pub const KINEMATICS_RATE_TERM: f64 = 0.25;

pub const COMPLEMENT_INITIAL: f64 = 0.5;
pub const COMPLEMENT_INTENSITY: f64 = 0.7;
pub const COMPLEMENT_RATE_TERMS: [f64; 3] = [0.1, 0.5, 0.9];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    GrowthCurves,
    Bifurcation,
    Trajectories,
    Gap,
    PhaseSweep,
    Ensemble,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::GrowthCurves,
        ExperimentKind::Bifurcation,
        ExperimentKind::Trajectories,
        ExperimentKind::Gap,
        ExperimentKind::PhaseSweep,
        ExperimentKind::Ensemble,
    ];

    /// The four figure datasets.
    pub const FIGURES: [ExperimentKind; 4] = [
        ExperimentKind::GrowthCurves,
        ExperimentKind::Bifurcation,
        ExperimentKind::Trajectories,
        ExperimentKind::Gap,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::GrowthCurves => "growth-curves",
            ExperimentKind::Bifurcation => "bifurcation",
            ExperimentKind::Trajectories => "trajectories",
            ExperimentKind::Gap => "gap",
            ExperimentKind::PhaseSweep => "phase-sweep",
            ExperimentKind::Ensemble => "ensemble",
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownExperiment(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grids {
    pub r_points: usize,
    pub q_points: usize,
    /// Explicit mean intensities for `growth-curves`; derived from the
    /// threshold when absent.
    pub intensities: Option<Vec<f64>>,
    pub ratio_points: usize,
    /// Largest `delta / gamma` in the phase sweep.
    pub ratio_max: f64,
    pub t_end: f64,
    pub dt: f64,
}

impl Default for Grids {
    fn default() -> Self {
        Self {
            r_points: 201,
            q_points: 401,
            intensities: None,
            ratio_points: 41,
            ratio_max: 2.0,
            t_end: 50.0,
            dt: FIGURE_STEP,
        }
    }
}

/// Random-matrix ensemble layout. Entries are i.i.d. uniform on the given
/// sub-intervals of `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSettings {
    pub members: usize,
    pub economies: usize,
    pub activities: usize,
    pub capabilities: usize,
    /// Requirement interval for the low-intensity sub-ensemble.
    pub low_band: (f64, f64),
    /// Requirement interval for the high-intensity sub-ensemble.
    pub high_band: (f64, f64),
    /// Initial endowment interval. Above the interior growth maximum the
    /// rate falls with `r` in either regime, so the default stays below it.
    pub endowment_band: (f64, f64),
    pub t_end: f64,
    pub dt: f64,
    pub max_step: f64,
}

impl Default for EnsembleSettings {
    fn default() -> Self {
        Self {
            members: 12,
            economies: 8,
            activities: 6,
            capabilities: 3,
            low_band: (0.0, 0.3),
            high_band: (0.8, 1.0),
            endowment_band: (0.0, 0.4),
            t_end: 100.0,
            dt: 0.1,
            max_step: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub params: ModelParams,
    pub grids: Grids,
    pub ensemble: EnsembleSettings,
    pub seed: Option<u64>,
    /// Directory receiving the tables.
    pub output_path: PathBuf,
    pub svg: bool,
}

impl ExperimentSpec {
    pub fn new(kind: ExperimentKind, params: ModelParams, output_path: impl Into<PathBuf>) -> Self {
        Self {
            kind,
            params,
            grids: Grids::default(),
            ensemble: EnsembleSettings::default(),
            seed: None,
            output_path: output_path.into(),
            svg: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.grids;
        if g.r_points < 2 || g.q_points < 2 || g.ratio_points < 2 {
            return Err(Error::InvalidArgument(
                "grids need at least two points".into(),
            ));
        }
        if !(g.ratio_max > 0.0 && g.ratio_max.is_finite()) {
            return Err(Error::InvalidArgument("ratio_max must be positive".into()));
        }
        if let Some(qs) = &g.intensities {
            if qs.is_empty() || qs.iter().any(|q| !(0.0..=1.0).contains(q)) {
                return Err(Error::InvalidArgument(
                    "intensities must be nonempty and inside [0, 1]".into(),
                ));
            }
        }
        uniform_grid(g.t_end, g.dt)?;
        if self.kind == ExperimentKind::Ensemble {
            let e = &self.ensemble;
            if self.seed.is_none() {
                return Err(Error::InvalidArgument(
                    "the ensemble experiment needs a seed".into(),
                ));
            }
            if e.members == 0 || e.economies == 0 || e.activities == 0 || e.capabilities == 0 {
                return Err(Error::InvalidArgument(
                    "ensemble sizes must be positive".into(),
                ));
            }
            for (lo, hi) in [e.low_band, e.high_band, e.endowment_band] {
                if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "sampling band [{lo}, {hi}] not inside [0, 1]"
                    )));
                }
            }
            uniform_grid(e.t_end, e.dt)?;
            Rk4::new(e.max_step)?;
        }
        Ok(())
    }
}

fn unit_grid(points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| i as f64 / (points - 1) as f64)
        .collect()
}

/// Mean intensities well below, at, and well above the threshold.
pub fn threshold_intensities(params: ModelParams) -> Vec<f64> {
    match critical_intensity(params) {
        Some(qc) if qc < 1.0 => vec![0.2 * qc, qc, qc + 0.8 * (1.0 - qc)],
        _ => vec![0.1, 0.5, 0.9],
    }
}

/// `dr/dt` (rescaled time) against `r` for each mean intensity.
pub fn growth_curves(params: ModelParams, intensities: &[f64], r_points: usize) -> Table {
    let mut columns = vec!["r".to_string()];
    columns.extend(intensities.iter().map(|q| format!("dr_dt[q={q}]")));
    let mut table = Table::new(columns);
    for r in unit_grid(r_points) {
        let mut row = vec![r];
        row.extend(
            intensities
                .iter()
                .map(|&q| growth_rate_single(r, q, params)),
        );
        table.push(row);
    }
    table
}

/// Growth-maximizing endowment over a mean-intensity grid. `regime` is 1
/// for conditional and 0 for unconditional convergence.
pub fn bifurcation(params: ModelParams, q_points: usize) -> Table {
    let mut table = Table::new(vec!["q_bar".into(), "r_star".into(), "regime".into()]);
    for q in unit_grid(q_points) {
        let r_star = argmax_growth_single(q, params);
        table.push(vec![q, r_star, f64::from(u8::from(r_star > 0.0))]);
    }
    table
}

/// Closed-form trajectories with varying initial endowment at fixed
/// intensity and complement term.
pub fn kinematics_by_initial(params: ModelParams, grid: &[f64]) -> Result<Trajectory> {
    let rate = params.gamma() * KINEMATICS_RATE_TERM;
    let parts = KINEMATICS_INITIAL
        .iter()
        .map(|&r0| {
            Trajectory::sample(format!("r0={r0}"), grid, |t| {
                closed_form_weighted(r0, KINEMATICS_INTENSITY, rate, t)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory::merge(parts)?
        .with_meta("q", KINEMATICS_INTENSITY)
        .with_meta("E", KINEMATICS_RATE_TERM)
        .with_meta("gamma", params.gamma()))
}

/// Closed-form trajectories with varying complement term at fixed initial
/// endowment and intensity.
pub fn kinematics_by_complement(params: ModelParams, grid: &[f64]) -> Result<Trajectory> {
    let parts = COMPLEMENT_RATE_TERMS
        .iter()
        .map(|&e| {
            let rate = params.gamma() * e;
            Trajectory::sample(format!("E={e}"), grid, |t| {
                closed_form_weighted(COMPLEMENT_INITIAL, COMPLEMENT_INTENSITY, rate, t)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory::merge(parts)?
        .with_meta("q", COMPLEMENT_INTENSITY)
        .with_meta("r0", COMPLEMENT_INITIAL)
        .with_meta("gamma", params.gamma()))
}

/// Top minus bottom and middle minus bottom of [`kinematics_by_initial`].
pub fn kinematics_gaps(params: ModelParams, grid: &[f64]) -> Result<Trajectory> {
    let traj = kinematics_by_initial(params, grid)?;
    let pick = |i: usize| Trajectory::new(traj.times.clone(), vec![traj.series[i].clone()]);
    let bottom = pick(0)?;
    Trajectory::merge(vec![
        gap_curve(&pick(2)?, &bottom)?,
        gap_curve(&pick(1)?, &bottom)?,
    ])
}

/// Regime classification over mean intensity and `delta / gamma`.
pub fn phase_sweep(
    gamma: f64,
    q_points: usize,
    ratio_points: usize,
    ratio_max: f64,
) -> Result<Table> {
    let mut table = Table::new(
        [
            "q_bar",
            "delta_over_gamma",
            "delta",
            "regime",
            "r_star",
            "q_crit",
        ]
        .map(String::from)
        .to_vec(),
    );
    let ratios: Vec<f64> = unit_grid(ratio_points)
        .into_iter()
        .map(|x| x * ratio_max)
        .collect();
    let rows: Vec<Vec<f64>> = ratios
        .par_iter()
        .map(|&ratio| -> Result<Vec<Vec<f64>>> {
            let params = ModelParams::new(gamma, ratio * gamma)?;
            unit_grid(q_points)
                .into_iter()
                .map(|q| {
                    let class = classify_single(q, params)?;
                    let regime = match class.regime {
                        Regime::ConditionalConvergence => 1.0,
                        Regime::UnconditionalConvergence => 0.0,
                    };
                    Ok(vec![
                        q,
                        ratio,
                        params.delta(),
                        regime,
                        class.r_star,
                        class.q_crit.unwrap_or(f64::NAN),
                    ])
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    table.rows = rows;
    Ok(table)
}

/// Spearman rank correlation with average ranks for ties. NaN when either
/// side is constant.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut out = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let rank = 0.5 * (i + j) as f64 + 1.0;
            for &k in &idx[i..=j] {
                out[k] = rank;
            }
            i = j + 1;
        }
        out
    }
    assert_eq!(x.len(), y.len());
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        f64::NAN
    } else {
        sxy / (sxx * syy).sqrt()
    }
}

/// One coupled run on random matrices.
#[derive(Debug, Clone)]
pub struct EnsembleMember {
    pub requirements: CapabilityRequirements,
    pub trajectory: Trajectory,
}

#[derive(Debug, Clone)]
pub struct BandSummary {
    pub band: (f64, f64),
    pub members: Vec<EnsembleMember>,
    /// Initial endowment of every (member, economy, capability) cell.
    pub initial: Vec<f64>,
    /// Growth of the same cells over `[0, t_small]`.
    pub early_growth: Vec<f64>,
    /// Time each cell first reaches 0.99 (infinite if never).
    pub time_to_99: Vec<f64>,
    pub median_time_to_99: f64,
    pub t_small: f64,
    pub rank_correlation: f64,
}

#[derive(Debug, Clone)]
pub struct EnsembleReport {
    pub low: BandSummary,
    pub high: BandSummary,
}

fn draw_matrix(
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
    (lo, hi): (f64, f64),
) -> DMatrix<f64> {
    if lo == hi {
        return DMatrix::from_element(rows, cols, lo);
    }
    let dist = Uniform::new_inclusive(lo, hi);
    DMatrix::from_fn(rows, cols, |_, _| dist.sample(rng))
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn run_band(
    settings: &EnsembleSettings,
    params: ModelParams,
    seed: u64,
    band_index: u64,
    band: (f64, f64),
) -> Result<BandSummary> {
    let grid = uniform_grid(settings.t_end, settings.dt)?;
    let rk = Rk4::new(settings.max_step)?;
    let members = (0..settings.members)
        .into_par_iter()
        .map(|m| -> Result<EnsembleMember> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((band_index << 32) | m as u64);
            let q = draw_matrix(&mut rng, settings.activities, settings.capabilities, band);
            let r0 = draw_matrix(
                &mut rng,
                settings.economies,
                settings.capabilities,
                settings.endowment_band,
            );
            let requirements = CapabilityRequirements::new(q)?;
            let trajectory =
                rk.integrate_coupled(&requirements, &Endowments::new(r0)?, params, &grid)?;
            Ok(EnsembleMember {
                requirements,
                trajectory,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let time_to_99: Vec<f64> = members
        .iter()
        .flat_map(|m| {
            (0..m.trajectory.series.len()).map(|s| {
                m.trajectory
                    .first_time_at_or_above(s, 0.99)
                    .unwrap_or(f64::INFINITY)
            })
        })
        .collect();
    let median_time_to_99 = median(&time_to_99);
    let horizon = if median_time_to_99.is_finite() {
        median_time_to_99
    } else {
        settings.t_end
    };
    let t_small = 0.1 * horizon;
    let at = grid
        .iter()
        .position(|&t| t >= t_small)
        .unwrap_or(grid.len() - 1);
    let (mut initial, mut early_growth) = (Vec::new(), Vec::new());
    for m in &members {
        for s in &m.trajectory.series {
            initial.push(s.values[0]);
            early_growth.push(s.values[at] - s.values[0]);
        }
    }
    let rank_correlation = spearman(&initial, &early_growth);
    Ok(BandSummary {
        band,
        members,
        initial,
        early_growth,
        time_to_99,
        median_time_to_99,
        t_small: grid[at],
        rank_correlation,
    })
}

/// Run the low- and high-intensity sub-ensembles.
pub fn ensemble(
    settings: &EnsembleSettings,
    params: ModelParams,
    seed: u64,
) -> Result<EnsembleReport> {
    Ok(EnsembleReport {
        low: run_band(settings, params, seed, 0, settings.low_band)?,
        high: run_band(settings, params, seed, 1, settings.high_band)?,
    })
}

impl EnsembleReport {
    pub fn summary_table(&self) -> Table {
        let mut t = Table::new(
            [
                "band",
                "q_low",
                "q_high",
                "rank_correlation",
                "t_small",
                "median_time_to_99",
                "mean_early_growth",
            ]
            .map(String::from)
            .to_vec(),
        );
        for (i, b) in [&self.low, &self.high].into_iter().enumerate() {
            let mean = b.early_growth.iter().sum::<f64>() / b.early_growth.len() as f64;
            t.push(vec![
                i as f64,
                b.band.0,
                b.band.1,
                b.rank_correlation,
                b.t_small,
                b.median_time_to_99,
                mean,
            ]);
        }
        t
    }

    pub fn cell_table(&self) -> Table {
        let mut t = Table::new(
            [
                "band",
                "member",
                "economy",
                "capability",
                "r0",
                "early_growth",
                "time_to_99",
            ]
            .map(String::from)
            .to_vec(),
        );
        for (i, b) in [&self.low, &self.high].into_iter().enumerate() {
            let mut k = 0;
            for (m, member) in b.members.iter().enumerate() {
                let n_b = member.requirements.n_capabilities();
                for s in 0..member.trajectory.series.len() {
                    t.push(vec![
                        i as f64,
                        m as f64,
                        (s / n_b) as f64,
                        (s % n_b) as f64,
                        b.initial[k],
                        b.early_growth[k],
                        b.time_to_99[k],
                    ]);
                    k += 1;
                }
            }
        }
        t
    }
}

/// One output table: file stem, contents, and the x column for a chart.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedTable {
    pub stem: &'static str,
    pub table: Table,
    pub chart_x: Option<&'static str>,
}

fn named(stem: &'static str, table: Table, chart_x: Option<&'static str>) -> NamedTable {
    NamedTable {
        stem,
        table,
        chart_x,
    }
}

/// Compute the experiment's tables without touching the filesystem.
pub fn build_tables(spec: &ExperimentSpec) -> Result<Vec<NamedTable>> {
    spec.validate()?;
    let g = &spec.grids;
    let p = spec.params;
    Ok(match spec.kind {
        ExperimentKind::GrowthCurves => {
            let qs = g
                .intensities
                .clone()
                .unwrap_or_else(|| threshold_intensities(p));
            vec![named(
                "growth_curves",
                growth_curves(p, &qs, g.r_points),
                Some("r"),
            )]
        }
        ExperimentKind::Bifurcation => {
            vec![named(
                "bifurcation",
                bifurcation(p, g.q_points),
                Some("q_bar"),
            )]
        }
        ExperimentKind::Trajectories => {
            let grid = uniform_grid(g.t_end, g.dt)?;
            vec![
                named(
                    "trajectories_initial",
                    Table::from(&kinematics_by_initial(p, &grid)?),
                    Some("t"),
                ),
                named(
                    "trajectories_complement",
                    Table::from(&kinematics_by_complement(p, &grid)?),
                    Some("t"),
                ),
            ]
        }
        ExperimentKind::Gap => {
            let grid = uniform_grid(g.t_end, g.dt)?;
            vec![named(
                "gap",
                Table::from(&kinematics_gaps(p, &grid)?),
                Some("t"),
            )]
        }
        ExperimentKind::PhaseSweep => vec![named(
            "phase_sweep",
            phase_sweep(p.gamma(), g.q_points, g.ratio_points, g.ratio_max)?,
            None,
        )],
        ExperimentKind::Ensemble => {
            let seed = spec.seed.expect("validated");
            let report = ensemble(&spec.ensemble, p, seed)?;
            vec![
                named("ensemble_summary", report.summary_table(), None),
                named("ensemble_cells", report.cell_table(), None),
            ]
        }
    })
}

/// Compute the experiment's tables and write them under
/// `spec.output_path`. Returns the written paths in a fixed order.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<PathBuf>> {
    let tables = build_tables(spec)?;
    let dir = spec.output_path.as_path();
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for t in tables {
        let csv_path = dir.join(format!("{}.csv", t.stem));
        t.table.write_csv(&csv_path)?;
        written.push(csv_path);
        if let (true, Some(x)) = (spec.svg, t.chart_x) {
            let svg_path = dir.join(format!("{}.svg", t.stem));
            write_atomic(&svg_path, line_chart_svg(&t.table, x, t.stem)?.as_bytes())?;
            written.push(svg_path);
        }
    }
    Ok(written)
}

impl ExperimentSpec {
    /// Spec for `kind` with every setting taken from `cfg` where present.
    /// Depreciation defaults to 0.2 for `bifurcation` and 0 otherwise.
    /// `q_low` caps the low ensemble band and `q_high` floors the high one.
    pub fn from_config(kind: ExperimentKind, cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        let default_delta = if kind == ExperimentKind::Bifurcation {
            0.2
        } else {
            0.0
        };
        let params =
            ModelParams::new(cfg.gamma.unwrap_or(1.0), cfg.delta.unwrap_or(default_delta))?;
        let mut spec = Self::new(kind, params, cfg.out.clone().unwrap_or_default());
        let g = &mut spec.grids;
        g.r_points = cfg.r_points.unwrap_or(g.r_points);
        g.q_points = cfg.q_points.unwrap_or(g.q_points);
        g.ratio_points = cfg.ratio_points.unwrap_or(g.ratio_points);
        g.ratio_max = cfg.ratio_max.unwrap_or(g.ratio_max);
        g.intensities = cfg.qbar.map(|q| vec![q]);
        let e = &mut spec.ensemble;
        e.members = cfg.members.unwrap_or(e.members);
        e.economies = cfg.economies.unwrap_or(e.economies);
        e.activities = cfg.activities.unwrap_or(e.activities);
        e.capabilities = cfg.capabilities.unwrap_or(e.capabilities);
        e.low_band.1 = cfg.q_low.unwrap_or(e.low_band.1);
        e.high_band.0 = cfg.q_high.unwrap_or(e.high_band.0);
        e.endowment_band = (
            cfg.r_low.unwrap_or(e.endowment_band.0),
            cfg.r_high.unwrap_or(e.endowment_band.1),
        );
        e.max_step = cfg.max_step.unwrap_or(e.max_step);
        if kind == ExperimentKind::Ensemble {
            e.t_end = cfg.t_end.unwrap_or(e.t_end);
            e.dt = cfg.dt.unwrap_or(e.dt);
        } else {
            g.t_end = cfg.t_end.unwrap_or(g.t_end);
            g.dt = cfg.dt.unwrap_or(g.dt);
        }
        spec.seed = cfg.seed;
        spec.svg = cfg.svg.unwrap_or(false);
        Ok(spec)
    }
}
