//! Trajectories of the accumulation law.
//!
//! With frozen complements the growth law is a scalar Riccati equation and
//! has closed-form solutions. [`Rk4`] integrates the same equations
//! numerically and serves as the reference for the closed forms; it also
//! integrates the fully coupled system where complements move with the
//! state.

use nalgebra::DMatrix;

use crate::dynamics::{growth_rate_matrix, weighted_sums, RiccatiCoefficients};
use crate::error::{Axis, Error, Result};
use crate::model::{
    check_cell, check_shared_capabilities, CapabilityRequirements, Endowments, ModelParams,
};

/// Largest excursion outside `[0, 1]` that integration silently clamps.
pub const OVERSHOOT_TOLERANCE: f64 = 1e-9;

/// Rates of `dr/dt = (1 - r)(alpha + beta r)`. The investment rate is
/// already folded into both, so `alpha + beta` is the exponential rate of
/// the solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticRiccatiParams {
    alpha: f64,
    beta: f64,
}

impl LogisticRiccatiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        for (name, value) in [("alpha", alpha), ("beta", beta)] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::OutOfDomain {
                    name,
                    value,
                    domain: "[0, inf)",
                });
            }
        }
        Ok(Self { alpha, beta })
    }

    /// Split a total rate by the weighted intensity: `alpha = rate (1 - q)`,
    /// `beta = rate q`.
    pub fn from_weighted(weighted_intensity: f64, rate: f64) -> Result<Self> {
        Self::new(rate * (1.0 - weighted_intensity), rate * weighted_intensity)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn coefficients(&self) -> RiccatiCoefficients {
        RiccatiCoefficients::new(-self.beta, self.beta - self.alpha, self.alpha)
    }
}

/// Solution of `dr/dt = (1 - r)(alpha + beta r)` from `r0`.
pub fn closed_form(r0: f64, p: LogisticRiccatiParams, t: f64) -> f64 {
    let k = p.alpha + p.beta;
    if t == 0.0 || k == 0.0 {
        return r0;
    }
    let gap = 1.0 - r0;
    1.0 - k * gap / (p.beta * gap + (p.alpha + p.beta * r0) * (k * t).exp())
}

/// Same solution written with the weighted intensity `<q>_QE` and the
/// total rate `gamma sum_p Q E`.
pub fn closed_form_weighted(r0: f64, weighted_intensity: f64, rate: f64, t: f64) -> f64 {
    debug_assert!(rate >= 0.0);
    if t == 0.0 {
        return r0;
    }
    let gap = 1.0 - r0;
    let q_gap = weighted_intensity * gap;
    1.0 - gap / (q_gap + (1.0 - q_gap) * (rate * t).exp())
}

/// Time at which the weighted closed form first reaches `level`, or
/// `None` if it never does.
pub fn time_to_reach(r0: f64, weighted_intensity: f64, rate: f64, level: f64) -> Option<f64> {
    if r0 >= level {
        return Some(0.0);
    }
    if level >= 1.0 || rate <= 0.0 {
        return None;
    }
    let gap = 1.0 - r0;
    let q_gap = weighted_intensity * gap;
    if q_gap >= 1.0 {
        // alpha = 0 and r0 = 0: pinned at zero
        return None;
    }
    let growth = (gap / (1.0 - level) - q_gap) / (1.0 - q_gap);
    Some(growth.ln() / rate)
}

/// Weighted intensity and total rate for the closed form of `r[c, b]` with
/// other endowments frozen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedRate {
    pub intensity: f64,
    pub rate: f64,
}

pub fn weighted_rate(
    q: &CapabilityRequirements,
    r: &Endowments,
    c: usize,
    b: usize,
    params: ModelParams,
) -> Result<WeightedRate> {
    check_cell(q, r, c, b)?;
    let s = weighted_sums(q, r, c, b);
    let total = s.demand + s.slack;
    Ok(WeightedRate {
        intensity: if total > 0.0 { s.demand / total } else { 0.0 },
        rate: params.gamma() * total,
    })
}

/// Solution of `dr/dt = a r^2 + b r + c` through its root factorization.
pub fn closed_form_general(r0: f64, coeffs: RiccatiCoefficients, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::OutOfDomain {
            name: "t",
            value: t,
            domain: "[0, inf)",
        });
    }
    let RiccatiCoefficients { a, b, c } = coeffs;
    let disc = coeffs.discriminant();
    if a != 0.0 && disc < 0.0 {
        return Err(Error::ComplexRoots(disc));
    }
    if t == 0.0 {
        return Ok(r0);
    }
    let value = if a == 0.0 {
        if b == 0.0 {
            r0 + c * t
        } else {
            let fixed = -c / b;
            fixed + (r0 - fixed) * (b * t).exp()
        }
    } else {
        let roots = coeffs.real_roots().ok_or(Error::ComplexRoots(disc))?;
        let (lo, hi) = (roots[0], roots[1]);
        let spread = hi - lo;
        if r0 == lo || r0 == hi {
            r0
        } else if spread <= 1e-12 * (1.0 + hi.abs()) {
            // repeated root: 1/(r - x) = 1/(r0 - x) - a t
            let x = 0.5 * (lo + hi);
            x + (r0 - x) / (1.0 - a * t * (r0 - x))
        } else {
            // (r - hi)/(r - lo) = (r0 - hi)/(r0 - lo) exp(a (hi - lo) t)
            let (u, v) = (r0 - lo, r0 - hi);
            let decay = (a * spread * t).exp();
            hi + spread * v * decay / (u - v * decay)
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidArgument(format!(
            "solution from r0 = {r0} escapes to infinity before t = {t}"
        )))
    }
}

/// One named sequence of values on a trajectory's time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub values: Vec<f64>,
}

/// Time-ordered samples of one or more series.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub series: Vec<Series>,
    /// Parameter record of the run that produced it.
    pub meta: Vec<(String, String)>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, series: Vec<Series>) -> Result<Self> {
        check_grid(&times)?;
        for s in &series {
            if s.values.len() != times.len() {
                return Err(Error::DimensionMismatch {
                    axis: Axis::Time,
                    expected: times.len(),
                    found: s.values.len(),
                });
            }
        }
        Ok(Self {
            times,
            series,
            meta: Vec::new(),
        })
    }

    /// Sample `f` on `times` as a single series.
    pub fn sample(name: impl Into<String>, times: &[f64], f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = times.iter().map(|&t| f(t)).collect();
        Self::new(
            times.to_vec(),
            vec![Series {
                name: name.into(),
                values,
            }],
        )
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.meta.push((key.into(), value.to_string()));
        self
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn values(&self, series: usize) -> &[f64] {
        &self.series[series].values
    }

    pub fn series_named(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }

    /// First grid time at which `series` reaches `level`.
    pub fn first_time_at_or_above(&self, series: usize, level: f64) -> Option<f64> {
        self.values(series)
            .iter()
            .position(|&v| v >= level)
            .map(|i| self.times[i])
    }

    /// Stack several single- or multi-series trajectories sharing one grid.
    pub fn merge(parts: Vec<Trajectory>) -> Result<Self> {
        let mut iter = parts.into_iter();
        let mut out = iter
            .next()
            .ok_or_else(|| Error::InvalidArgument("nothing to merge".into()))?;
        for part in iter {
            if part.times != out.times {
                return Err(Error::InvalidArgument("time grids differ".into()));
            }
            out.series.extend(part.series);
            out.meta.extend(part.meta);
        }
        Ok(out)
    }
}

fn check_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidArgument("empty time grid".into()));
    }
    if let Some(w) = times
        .windows(2)
        .find(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
    {
        return Err(Error::InvalidArgument(format!(
            "time grid not strictly increasing at {} -> {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// `0, dt, 2 dt, ...` up to and including `t_end`.
pub fn uniform_grid(t_end: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0 && t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need dt > 0 and t_end >= 0, got dt = {dt}, t_end = {t_end}"
        )));
    }
    let n = (t_end / dt + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=n).map(|i| i as f64 * dt).collect();
    if let Some(last) = grid.last_mut() {
        if (*last - t_end).abs() <= 1e-9 * dt.max(t_end) {
            *last = t_end;
        }
    }
    if *grid.last().unwrap() < t_end {
        grid.push(t_end);
    }
    Ok(grid)
}

/// Classical fourth-order Runge-Kutta with a fixed maximum step.
///
/// Each interval of the output grid is split into equal steps no longer
/// than `max_step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rk4 {
    pub max_step: f64,
}

impl Default for Rk4 {
    fn default() -> Self {
        Self { max_step: 1e-3 }
    }
}

fn clamp_unit(value: f64, time: f64) -> Result<f64> {
    if (-OVERSHOOT_TOLERANCE..=1.0 + OVERSHOOT_TOLERANCE).contains(&value) {
        Ok(value.clamp(0.0, 1.0))
    } else {
        Err(Error::Overshoot { time, value })
    }
}

impl Rk4 {
    pub fn new(max_step: f64) -> Result<Self> {
        if !(max_step > 0.0 && max_step.is_finite()) {
            return Err(Error::OutOfDomain {
                name: "max_step",
                value: max_step,
                domain: "(0, inf)",
            });
        }
        Ok(Self { max_step })
    }

    fn substeps(&self, span: f64) -> (usize, f64) {
        let n = (span / self.max_step).ceil().max(1.0) as usize;
        (n, span / n as f64)
    }

    /// Integrate `dr/dt = a r^2 + b r + c` and sample on `grid`.
    pub fn integrate_frozen(
        &self,
        coeffs: RiccatiCoefficients,
        r0: f64,
        grid: &[f64],
    ) -> Result<Trajectory> {
        check_start(grid)?;
        if !(0.0..=1.0).contains(&r0) {
            return Err(Error::OutOfDomain {
                name: "r0",
                value: r0,
                domain: "[0, 1]",
            });
        }
        let f = |r: f64| coeffs.rate(r);
        let mut values = Vec::with_capacity(grid.len());
        values.push(r0);
        let mut r = r0;
        for w in grid.windows(2) {
            let (n, h) = self.substeps(w[1] - w[0]);
            for i in 0..n {
                let k1 = f(r);
                let k2 = f(r + 0.5 * h * k1);
                let k3 = f(r + 0.5 * h * k2);
                let k4 = f(r + h * k3);
                r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                r = clamp_unit(r, w[0] + (i + 1) as f64 * h)?;
            }
            values.push(r);
        }
        Ok(Trajectory::new(
            grid.to_vec(),
            vec![Series {
                name: "r".into(),
                values,
            }],
        )?
        .with_meta("a", coeffs.a)
        .with_meta("b", coeffs.b)
        .with_meta("c", coeffs.c)
        .with_meta("r0", r0)
        .with_meta("max_step", self.max_step))
    }

    /// Integrate every endowment simultaneously, complements recomputed at
    /// every stage. Series are ordered economy-major and named `c{c}_b{b}`.
    pub fn integrate_coupled(
        &self,
        q: &CapabilityRequirements,
        r0: &Endowments,
        params: ModelParams,
        grid: &[f64],
    ) -> Result<Trajectory> {
        check_shared_capabilities(q, r0)?;
        check_start(grid)?;
        let (n_c, n_b) = (r0.n_economies(), r0.n_capabilities());
        let f = |r: &DMatrix<f64>| growth_rate_matrix(q, r, params);
        let mut state = r0.matrix().clone();
        let mut samples: Vec<Vec<f64>> = vec![Vec::with_capacity(grid.len()); n_c * n_b];
        let record = |state: &DMatrix<f64>, samples: &mut Vec<Vec<f64>>| {
            for c in 0..n_c {
                for b in 0..n_b {
                    samples[c * n_b + b].push(state[(c, b)]);
                }
            }
        };
        record(&state, &mut samples);
        for w in grid.windows(2) {
            let (n, h) = self.substeps(w[1] - w[0]);
            for i in 0..n {
                let k1 = f(&state);
                let k2 = f(&(&state + &k1 * (0.5 * h)));
                let k3 = f(&(&state + &k2 * (0.5 * h)));
                let k4 = f(&(&state + &k3 * h));
                state += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
                let time = w[0] + (i + 1) as f64 * h;
                for v in state.iter_mut() {
                    *v = clamp_unit(*v, time)?;
                }
            }
            record(&state, &mut samples);
        }
        let series = samples
            .into_iter()
            .enumerate()
            .map(|(k, values)| Series {
                name: format!("c{}_b{}", k / n_b, k % n_b),
                values,
            })
            .collect();
        Ok(Trajectory::new(grid.to_vec(), series)?
            .with_meta("gamma", params.gamma())
            .with_meta("delta", params.delta())
            .with_meta("max_step", self.max_step))
    }
}

fn check_start(grid: &[f64]) -> Result<()> {
    check_grid(grid)?;
    if grid[0] != 0.0 {
        return Err(Error::InvalidArgument(format!(
            "time grid must start at 0, starts at {}",
            grid[0]
        )));
    }
    Ok(())
}

/// [`Rk4::integrate_frozen`] with the default step.
pub fn integrate_frozen(coeffs: RiccatiCoefficients, r0: f64, grid: &[f64]) -> Result<Trajectory> {
    Rk4::default().integrate_frozen(coeffs, r0, grid)
}

/// [`Rk4::integrate_coupled`] with the default step.
pub fn integrate_coupled(
    q: &CapabilityRequirements,
    r0: &Endowments,
    params: ModelParams,
    grid: &[f64],
) -> Result<Trajectory> {
    Rk4::default().integrate_coupled(q, r0, params, grid)
}

/// Pointwise difference `a - b` of every series.
pub fn gap_curve(a: &Trajectory, b: &Trajectory) -> Result<Trajectory> {
    if a.times != b.times {
        return Err(Error::InvalidArgument("time grids differ".into()));
    }
    if a.series.len() != b.series.len() {
        return Err(Error::DimensionMismatch {
            axis: Axis::Time,
            expected: a.series.len(),
            found: b.series.len(),
        });
    }
    let series = a
        .series
        .iter()
        .zip(&b.series)
        .map(|(x, y)| Series {
            name: format!("{}-{}", x.name, y.name),
            values: x.values.iter().zip(&y.values).map(|(u, v)| u - v).collect(),
        })
        .collect();
    Trajectory::new(a.times.clone(), series)
}
