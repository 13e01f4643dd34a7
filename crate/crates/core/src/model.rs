//! Weak-link production function.
//!
//! Economies `c` hold capabilities `b` with probability `r[c, b]`; activities
//! `p` require them with probability `q[p, b]`. Output of activity `p` in
//! economy `c` is the probability that no required capability is missing:
//! `Y[c, p] = prod_b (1 - q[p, b] (1 - r[c, b]))`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Axis, Error, Result};

/// Availability factor of one capability: `1 - q (1 - r)`.
#[inline]
pub fn availability(q: f64, r: f64) -> f64 {
    1.0 - q * (1.0 - r)
}

fn check_unit_interval(m: &DMatrix<f64>) -> Result<()> {
    let bad: Vec<_> = (0..m.nrows())
        .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
        .filter_map(|(i, j)| {
            let v = m[(i, j)];
            (!(0.0..=1.0).contains(&v)).then_some((i, j, v))
        })
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::CellsOutOfRange(bad))
    }
}

fn check_index(axis: Axis, index: usize, len: usize) -> Result<()> {
    if index < len {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { axis, index, len })
    }
}

/// Activity-by-capability requirement probabilities plus derived
/// normalizations.
#[derive(Debug, Clone, PartialEq)]
pub struct CapabilityRequirements {
    q: DMatrix<f64>,
    row_sums: DVector<f64>,
    normalized: DMatrix<f64>,
    support: Vec<usize>,
}

impl CapabilityRequirements {
    pub fn new(q: DMatrix<f64>) -> Result<Self> {
        check_unit_interval(&q)?;
        let row_sums = DVector::from_iterator(q.nrows(), q.row_iter().map(|row| row.sum()));
        let mut normalized = DMatrix::zeros(q.nrows(), q.ncols());
        for p in 0..q.nrows() {
            // An activity requiring nothing invests in nothing.
            if row_sums[p] > 0.0 {
                for b in 0..q.ncols() {
                    normalized[(p, b)] = q[(p, b)] / row_sums[p];
                }
            }
        }
        let support = q
            .row_iter()
            .map(|row| row.iter().filter(|&&v| v > 0.0).count())
            .collect();
        Ok(Self {
            q,
            row_sums,
            normalized,
            support,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(matrix_from_rows(rows)?)
    }

    /// Every activity requires every capability with the same probability.
    pub fn uniform(activities: usize, capabilities: usize, q: f64) -> Result<Self> {
        Self::new(DMatrix::from_element(activities, capabilities, q))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.q
    }

    #[inline]
    pub fn get(&self, p: usize, b: usize) -> f64 {
        self.q[(p, b)]
    }

    pub fn n_activities(&self) -> usize {
        self.q.nrows()
    }

    pub fn n_capabilities(&self) -> usize {
        self.q.ncols()
    }

    /// `q_p = sum_b q[p, b]`.
    pub fn row_sum(&self, p: usize) -> f64 {
        self.row_sums[p]
    }

    /// Share of activity `p`'s requirements that falls on capability `b`;
    /// zero for activities with no requirements.
    #[inline]
    pub fn normalized(&self, p: usize, b: usize) -> f64 {
        self.normalized[(p, b)]
    }

    pub fn normalized_matrix(&self) -> &DMatrix<f64> {
        &self.normalized
    }

    /// Number of capabilities with nonzero requirement in activity `p`.
    pub fn support_count(&self, p: usize) -> usize {
        self.support[p]
    }

    /// Column mean of requirements across activities.
    pub fn mean_intensity(&self, b: usize) -> f64 {
        if self.q.nrows() == 0 {
            return 0.0;
        }
        self.q.column(b).sum() / self.q.nrows() as f64
    }

    /// `sum_p q[p, b]`, the depreciation exposure of capability `b`.
    pub fn column_sum(&self, b: usize) -> f64 {
        self.q.column(b).sum()
    }
}

/// Economy-by-capability endowment probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Endowments {
    r: DMatrix<f64>,
}

impl Endowments {
    pub fn new(r: DMatrix<f64>) -> Result<Self> {
        check_unit_interval(&r)?;
        Ok(Self { r })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(matrix_from_rows(rows)?)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.r
    }

    #[inline]
    pub fn get(&self, c: usize, b: usize) -> f64 {
        self.r[(c, b)]
    }

    pub fn n_economies(&self) -> usize {
        self.r.nrows()
    }

    pub fn n_capabilities(&self) -> usize {
        self.r.ncols()
    }

    /// Copy with one entry replaced. Used by sensitivity checks.
    pub fn with_entry(&self, c: usize, b: usize, value: f64) -> Result<Self> {
        let mut r = self.r.clone();
        r[(c, b)] = value;
        Self::new(r)
    }
}

/// Investment rate and depreciation rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    gamma: f64,
    delta: f64,
}

impl ModelParams {
    pub fn new(gamma: f64, delta: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::OutOfDomain {
                name: "gamma",
                value: gamma,
                domain: "(0, 1]",
            });
        }
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::OutOfDomain {
                name: "delta",
                value: delta,
                domain: "[0, inf)",
            });
        }
        Ok(Self { gamma, delta })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

pub(crate) fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let ncols = rows.first().map_or(0, Vec::len);
    for row in rows {
        if row.len() != ncols {
            return Err(Error::InvalidArgument(format!(
                "ragged rows: expected {ncols} columns, found {}",
                row.len()
            )));
        }
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

pub(crate) fn check_shared_capabilities(q: &CapabilityRequirements, r: &Endowments) -> Result<()> {
    if q.n_capabilities() != r.n_capabilities() {
        return Err(Error::DimensionMismatch {
            axis: Axis::Capability,
            expected: q.n_capabilities(),
            found: r.n_capabilities(),
        });
    }
    Ok(())
}

pub(crate) fn check_cell(
    q: &CapabilityRequirements,
    r: &Endowments,
    c: usize,
    b: usize,
) -> Result<()> {
    check_shared_capabilities(q, r)?;
    check_index(Axis::Economy, c, r.n_economies())?;
    check_index(Axis::Capability, b, q.n_capabilities())
}

fn check_indices(
    q: &CapabilityRequirements,
    r: &Endowments,
    c: usize,
    p: usize,
    b: usize,
) -> Result<()> {
    check_shared_capabilities(q, r)?;
    check_index(Axis::Economy, c, r.n_economies())?;
    check_index(Axis::Activity, p, q.n_activities())?;
    check_index(Axis::Capability, b, q.n_capabilities())
}

/// Output matrix `Y[c, p]`.
pub fn output(q: &CapabilityRequirements, r: &Endowments) -> Result<DMatrix<f64>> {
    check_shared_capabilities(q, r)?;
    Ok(output_unchecked(q.matrix(), r.matrix()))
}

pub(crate) fn output_unchecked(q: &DMatrix<f64>, r: &DMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(r.nrows(), q.nrows(), |c, p| {
        (0..q.ncols()).fold(1.0, |acc, b| acc * availability(q[(p, b)], r[(c, b)]))
    })
}

fn product_excluding(
    q: &CapabilityRequirements,
    r: &Endowments,
    c: usize,
    p: usize,
    skip: impl Fn(usize) -> bool,
) -> f64 {
    (0..q.n_capabilities())
        .filter(|&b| !skip(b))
        .fold(1.0, |acc, b| acc * availability(q.get(p, b), r.get(c, b)))
}

/// Complementarity term `E[c, p, b]`: the product of every availability
/// factor except capability `b`'s.
pub fn complement(
    q: &CapabilityRequirements,
    r: &Endowments,
    c: usize,
    p: usize,
    b: usize,
) -> Result<f64> {
    check_indices(q, r, c, p, b)?;
    Ok(complement_unchecked(q, r, c, p, b))
}

#[inline]
pub(crate) fn complement_unchecked(
    q: &CapabilityRequirements,
    r: &Endowments,
    c: usize,
    p: usize,
    b: usize,
) -> f64 {
    product_excluding(q, r, c, p, |k| k == b)
}

/// Product of every availability factor except those of `b` and `b2`.
pub fn pair_complement(
    q: &CapabilityRequirements,
    r: &Endowments,
    c: usize,
    p: usize,
    b: usize,
    b2: usize,
) -> Result<f64> {
    check_indices(q, r, c, p, b)?;
    check_index(Axis::Capability, b2, q.n_capabilities())?;
    if b == b2 {
        return Err(Error::InvalidArgument(format!(
            "pair complement needs two distinct capabilities, got {b} twice"
        )));
    }
    Ok(product_excluding(q, r, c, p, |k| k == b || k == b2))
}

/// `dY[c, p] / dr[c, b] = q[p, b] E[c, p, b]`.
pub fn output_grad_r(
    q: &CapabilityRequirements,
    r: &Endowments,
    c: usize,
    p: usize,
    b: usize,
) -> Result<f64> {
    Ok(q.get(p, b) * complement(q, r, c, p, b)?)
}

/// `dY[c, p] / dq[p, b] = -(1 - r[c, b]) E[c, p, b]`.
pub fn output_grad_q(
    q: &CapabilityRequirements,
    r: &Endowments,
    c: usize,
    p: usize,
    b: usize,
) -> Result<f64> {
    Ok(-(1.0 - r.get(c, b)) * complement(q, r, c, p, b)?)
}

/// Rate of change of output given rates of change of endowments and of
/// requirements. Requirement drift is an exogenous input here.
pub fn output_growth(
    q: &CapabilityRequirements,
    r: &Endowments,
    dr_dt: &DMatrix<f64>,
    dq_dt: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    check_shared_capabilities(q, r)?;
    let (n_c, n_p, n_b) = (r.n_economies(), q.n_activities(), q.n_capabilities());
    if dr_dt.shape() != (n_c, n_b) {
        let (axis, expected, found) = if dr_dt.nrows() != n_c {
            (Axis::Economy, n_c, dr_dt.nrows())
        } else {
            (Axis::Capability, n_b, dr_dt.ncols())
        };
        return Err(Error::DimensionMismatch {
            axis,
            expected,
            found,
        });
    }
    if dq_dt.shape() != (n_p, n_b) {
        let (axis, expected, found) = if dq_dt.nrows() != n_p {
            (Axis::Activity, n_p, dq_dt.nrows())
        } else {
            (Axis::Capability, n_b, dq_dt.ncols())
        };
        return Err(Error::DimensionMismatch {
            axis,
            expected,
            found,
        });
    }
    Ok(DMatrix::from_fn(n_c, n_p, |c, p| {
        (0..n_b)
            .map(|b| {
                let e = complement_unchecked(q, r, c, p, b);
                e * (q.get(p, b) * dr_dt[(c, b)] - (1.0 - r.get(c, b)) * dq_dt[(p, b)])
            })
            .sum()
    }))
}
