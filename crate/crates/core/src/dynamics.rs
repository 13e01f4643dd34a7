//! Capability accumulation law and its quadratic (Riccati) form.
//!
//! Capabilities grow through reinvested output and depreciate with use:
//!
//! ```text
//! dr[c,b]/dt = gamma (1 - r[c,b]) sum_p Q[p,b] Y[c,p] - delta r[c,b] sum_p q[p,b]
//! ```
//!
//! Holding every other endowment fixed, the right-hand side is a downward
//! parabola `A r^2 + B r + C` in `r[c,b]`. Its vertex decides whether
//! laggards grow fastest (vertex at or left of zero) or whether growth
//! peaks at an interior endowment.
//!
//! Single-capability functions use time rescaled by the number of
//! activities; the multi-capability functions use raw time. A
//! single-capability rate times `N_p` is the raw-time rate.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{
    availability, check_cell, check_shared_capabilities, complement_unchecked, output_unchecked,
    CapabilityRequirements, Endowments, ModelParams,
};

/// Coefficients of `dr/dt = a r^2 + b r + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl RiccatiCoefficients {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    #[inline]
    pub fn rate(&self, r: f64) -> f64 {
        (self.a * r + self.b) * r + self.c
    }

    pub fn discriminant(&self) -> f64 {
        self.b * self.b - 4.0 * self.a * self.c
    }

    /// Real roots in ascending order, computed without cancellation.
    /// `None` when the roots are complex or the polynomial is constant.
    pub fn real_roots(&self) -> Option<Vec<f64>> {
        let RiccatiCoefficients { a, b, c } = *self;
        if a == 0.0 {
            return if b == 0.0 { None } else { Some(vec![-c / b]) };
        }
        let disc = self.discriminant();
        if disc < 0.0 {
            return None;
        }
        let sign = if b >= 0.0 { 1.0 } else { -1.0 };
        let half = -0.5 * (b + sign * disc.sqrt());
        let x1 = half / a;
        let x2 = if half == 0.0 { x1 } else { c / half };
        Some(if x1 <= x2 { vec![x1, x2] } else { vec![x2, x1] })
    }

    fn scaled(self, k: f64) -> Self {
        Self::new(self.a * k, self.b * k, self.c * k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Growth is fastest at zero endowment.
    UnconditionalConvergence,
    /// Growth peaks at an interior endowment.
    ConditionalConvergence,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::UnconditionalConvergence => "unconditional",
            Regime::ConditionalConvergence => "conditional",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Location of maximum growth, the regime it implies, and the intensity
/// threshold separating the regimes.
///
/// For the single-capability model `q_crit` bounds the mean intensity. For
/// the multi-capability model it bounds the `Q E`-weighted mean intensity
/// `sum_p q Q E / sum_p Q E` of the capability in question.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeClassification {
    pub regime: Regime,
    pub r_star: f64,
    pub q_crit: Option<f64>,
}

impl RegimeClassification {
    fn from_argmax(r_star: f64, q_crit: Option<f64>) -> Self {
        let regime = if r_star > 0.0 {
            Regime::ConditionalConvergence
        } else {
            Regime::UnconditionalConvergence
        };
        Self {
            regime,
            r_star,
            q_crit,
        }
    }
}

fn check_mean_intensity(q_bar: f64) -> Result<()> {
    if (0.0..=1.0).contains(&q_bar) {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name: "q_bar",
            value: q_bar,
            domain: "[0, 1]",
        })
    }
}

/// Quadratic coefficients for one capability with mean intensity `q_bar`.
pub fn coefficients_single(q_bar: f64, params: ModelParams) -> Result<RiccatiCoefficients> {
    check_mean_intensity(q_bar)?;
    let (g, d) = (params.gamma(), params.delta());
    Ok(RiccatiCoefficients::new(
        -g * q_bar,
        g * (2.0 * q_bar - 1.0) - d * q_bar,
        g * (1.0 - q_bar),
    ))
}

/// Growth rate of a single capability in rescaled time.
pub fn growth_rate_single(r: f64, q_bar: f64, params: ModelParams) -> f64 {
    let (g, d) = (params.gamma(), params.delta());
    g * (1.0 - r) * ((1.0 - q_bar) + r * q_bar) - d * r * q_bar
}

/// `gamma / (2 gamma - delta)`, or `None` when depreciation is at least
/// twice the investment rate. Values at or above one mean no transition
/// is reachable for feasible intensities.
pub fn critical_intensity(params: ModelParams) -> Option<f64> {
    let denom = 2.0 * params.gamma() - params.delta();
    (denom > 0.0).then(|| params.gamma() / denom)
}

/// Endowment at which single-capability growth peaks on `[0, 1]`.
pub fn argmax_growth_single(q_bar: f64, params: ModelParams) -> f64 {
    if q_bar <= 0.0 {
        return 0.0;
    }
    match critical_intensity(params) {
        Some(q_crit) if q_bar > q_crit => {
            let vertex = 1.0 - 1.0 / (2.0 * q_bar) - params.delta() / (2.0 * params.gamma());
            vertex.clamp(0.0, 1.0)
        }
        _ => 0.0,
    }
}

pub fn classify_single(q_bar: f64, params: ModelParams) -> Result<RegimeClassification> {
    check_mean_intensity(q_bar)?;
    Ok(RegimeClassification::from_argmax(
        argmax_growth_single(q_bar, params),
        critical_intensity(params),
    ))
}

/// Growth rate of every endowment, `C x B`, in raw time.
pub fn growth_rate_multi(
    q: &CapabilityRequirements,
    r: &Endowments,
    params: ModelParams,
) -> Result<DMatrix<f64>> {
    check_shared_capabilities(q, r)?;
    Ok(growth_rate_matrix(q, r.matrix(), params))
}

/// Unchecked kernel shared with the coupled integrator; `r` need not be
/// a validated endowment matrix (intermediate RK stages may stray by
/// rounding).
pub(crate) fn growth_rate_matrix(
    q: &CapabilityRequirements,
    r: &DMatrix<f64>,
    params: ModelParams,
) -> DMatrix<f64> {
    let y = output_unchecked(q.matrix(), r);
    let invest = &y * q.normalized_matrix();
    let exposure: Vec<f64> = (0..r.ncols()).map(|b| q.column_sum(b)).collect();
    let (g, d) = (params.gamma(), params.delta());
    DMatrix::from_fn(r.nrows(), r.ncols(), |c, b| {
        let rcb = r[(c, b)];
        g * (1.0 - rcb) * invest[(c, b)] - d * rcb * exposure[b]
    })
}

/// The three complementarity-weighted sums that build the multi-capability
/// coefficients: `sum_p q Q E`, `sum_p (1 - q) Q E`, `sum_p q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct WeightedSums {
    pub demand: f64,
    pub slack: f64,
    pub exposure: f64,
}

pub(crate) fn weighted_sums(
    q: &CapabilityRequirements,
    r: &Endowments,
    c: usize,
    b: usize,
) -> WeightedSums {
    let mut sums = WeightedSums {
        demand: 0.0,
        slack: 0.0,
        exposure: 0.0,
    };
    for p in 0..q.n_activities() {
        let qpb = q.get(p, b);
        let qe = q.normalized(p, b) * complement_unchecked(q, r, c, p, b);
        sums.demand += qpb * qe;
        sums.slack += (1.0 - qpb) * qe;
        sums.exposure += qpb;
    }
    sums
}

/// Quadratic coefficients of `dr[c,b]/dt` in `r[c,b]` with every other
/// endowment frozen at its current value. Raw time.
pub fn coefficients_multi(
    q: &CapabilityRequirements,
    r: &Endowments,
    c: usize,
    b: usize,
    params: ModelParams,
) -> Result<RiccatiCoefficients> {
    check_cell(q, r, c, b)?;
    let s = weighted_sums(q, r, c, b);
    let g = params.gamma();
    Ok(RiccatiCoefficients::new(
        -g * s.demand,
        g * (s.demand - s.slack) - params.delta() * s.exposure,
        g * s.slack,
    ))
}

/// Growth-maximizing endowment for capability `b` of economy `c`, other
/// endowments frozen.
pub fn argmax_growth_multi(
    q: &CapabilityRequirements,
    r: &Endowments,
    c: usize,
    b: usize,
    params: ModelParams,
) -> Result<(f64, RegimeClassification)> {
    check_cell(q, r, c, b)?;
    let s = weighted_sums(q, r, c, b);
    let coeffs = coefficients_multi(q, r, c, b, params)?;
    let total = s.demand + s.slack;
    let q_crit =
        (total > 0.0).then(|| 0.5 + params.delta() * s.exposure / (2.0 * params.gamma() * total));
    let r_star = if coeffs.a < 0.0 && coeffs.b > 0.0 {
        (-coeffs.b / (2.0 * coeffs.a)).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok((r_star, RegimeClassification::from_argmax(r_star, q_crit)))
}

/// A zero of the growth law inside `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub value: f64,
    pub stable: bool,
}

/// Roots of `a r^2 + b r + c` lying in `[0, 1]`, ascending.
///
/// For a downward parabola the larger root attracts and the smaller one
/// repels; for an upward one the reverse. A linear law is stable iff its
/// slope is negative. Complex roots yield an empty list.
pub fn steady_states(coeffs: RiccatiCoefficients) -> Result<Vec<SteadyState>> {
    let RiccatiCoefficients { a, b, c } = coeffs;
    if a == 0.0 && b == 0.0 {
        return Err(Error::InvalidArgument(
            "constant growth law has no isolated steady states".into(),
        ));
    }
    let Some(roots) = coeffs.real_roots() else {
        debug_assert!(
            !(a < 0.0 && c >= 0.0),
            "downward parabola with c >= 0 must have real roots"
        );
        return Ok(Vec::new());
    };
    let n = roots.len();
    Ok(roots
        .into_iter()
        .enumerate()
        .filter(|(_, x)| (0.0..=1.0).contains(x))
        .map(|(i, value)| {
            let stable = if a < 0.0 {
                i == n - 1
            } else if a > 0.0 {
                i == 0 && n == 2
            } else {
                b < 0.0
            };
            SteadyState { value, stable }
        })
        .collect())
}

/// Single-capability coefficients expressed in raw time for `n_activities`
/// activities.
pub fn coefficients_single_raw_time(
    q_bar: f64,
    params: ModelParams,
    n_activities: usize,
) -> Result<RiccatiCoefficients> {
    Ok(coefficients_single(q_bar, params)?.scaled(n_activities as f64))
}

/// Growth of one capability from the separated form: own availability
/// factor split out of the output.
pub fn growth_rate_separated(
    q: &CapabilityRequirements,
    r: &Endowments,
    c: usize,
    b: usize,
    params: ModelParams,
) -> Result<f64> {
    check_cell(q, r, c, b)?;
    let rcb = r.get(c, b);
    let invest: f64 = (0..q.n_activities())
        .map(|p| {
            q.normalized(p, b)
                * availability(q.get(p, b), rcb)
                * complement_unchecked(q, r, c, p, b)
        })
        .sum();
    Ok(params.gamma() * (1.0 - rcb) * invest - params.delta() * q.column_sum(b) * rcb)
}
