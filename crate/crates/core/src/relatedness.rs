//! Capability complementarity and the coupling it induces between
//! capability growth rates.

use nalgebra::DMatrix;

use crate::error::{Axis, Error, Result};
use crate::model::{pair_complement, CapabilityRequirements, Endowments, ModelParams};

/// Nonnegative per-activity weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RelatednessWeights(Vec<f64>);

impl RelatednessWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(&w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
            return Err(Error::OutOfDomain {
                name: "weight",
                value: w,
                domain: "[0, inf)",
            });
        }
        if !weights.iter().any(|&w| w > 0.0) {
            return Err(Error::InvalidArgument(
                "at least one activity weight must be positive".into(),
            ));
        }
        Ok(Self(weights))
    }

    /// Unit weight on every activity.
    pub fn uniform(activities: usize) -> Self {
        Self(vec![1.0; activities])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// `C[b, b'] = sum_p W_p q[p, b] q[p, b']`.
///
/// The diagonal is filled in for completeness but carries no meaning as a
/// complementarity; use [`ComplementarityMatrix::off_diagonal`] or
/// [`ComplementarityMatrix::strongest_pair`] for the relational content.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplementarityMatrix {
    values: DMatrix<f64>,
}

impl ComplementarityMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn get(&self, b: usize, b2: usize) -> f64 {
        self.values[(b, b2)]
    }

    pub fn off_diagonal(&self, b: usize, b2: usize) -> Option<f64> {
        (b != b2).then(|| self.values[(b, b2)])
    }

    /// Most complementary distinct pair `(b, b', C)` with `b < b'`; ties go
    /// to the first pair in row-major order.
    pub fn strongest_pair(&self) -> Option<(usize, usize, f64)> {
        let n = self.values.nrows();
        let mut best: Option<(usize, usize, f64)> = None;
        for b in 0..n {
            for b2 in b + 1..n {
                let v = self.values[(b, b2)];
                if best.is_none_or(|(_, _, m)| v > m) {
                    best = Some((b, b2, v));
                }
            }
        }
        best
    }
}

pub fn complementarity_matrix(
    q: &CapabilityRequirements,
    w: &RelatednessWeights,
) -> Result<ComplementarityMatrix> {
    if w.0.len() != q.n_activities() {
        return Err(Error::DimensionMismatch {
            axis: Axis::Activity,
            expected: q.n_activities(),
            found: w.0.len(),
        });
    }
    let weighted = DMatrix::from_fn(q.n_activities(), q.n_capabilities(), |p, b| {
        w.0[p] * q.get(p, b)
    });
    let mut values = weighted.transpose() * q.matrix();
    // exact symmetry regardless of summation order
    for b in 0..values.nrows() {
        for b2 in b + 1..values.ncols() {
            values[(b2, b)] = values[(b, b2)];
        }
    }
    Ok(ComplementarityMatrix { values })
}

/// `d^2 Y[c, p] / dr[c, b] dr[c, b'] = E[c, p, b, b'] q[p, b] q[p, b']`.
pub fn cross_partial_output(
    q: &CapabilityRequirements,
    r: &Endowments,
    c: usize,
    p: usize,
    b: usize,
    b2: usize,
) -> Result<f64> {
    Ok(pair_complement(q, r, c, p, b, b2)? * q.get(p, b) * q.get(p, b2))
}

/// Sensitivity of capability `b`'s growth to the endowment of `b'`:
/// `gamma (1 - r[c, b]) sum_p E[c, p, b'] q[p, b] q[p, b'] / q_p`.
///
/// Activities with no requirements contribute nothing.
pub fn growth_coupling(
    q: &CapabilityRequirements,
    r: &Endowments,
    params: ModelParams,
    c: usize,
    b: usize,
    b2: usize,
) -> Result<f64> {
    crate::model::check_cell(q, r, c, b)?;
    crate::model::check_cell(q, r, c, b2)?;
    if b == b2 {
        return Err(Error::InvalidArgument(format!(
            "growth coupling needs two distinct capabilities, got {b} twice"
        )));
    }
    let sum: f64 = (0..q.n_activities())
        .filter(|&p| q.row_sum(p) > 0.0)
        .map(|p| {
            crate::model::complement_unchecked(q, r, c, p, b2) * q.get(p, b) * q.get(p, b2)
                / q.row_sum(p)
        })
        .sum();
    Ok(params.gamma() * (1.0 - r.get(c, b)) * sum)
}

/// Growth coupling for every ordered pair of distinct capabilities in
/// economy `c`; the diagonal is zero.
pub fn growth_coupling_matrix(
    q: &CapabilityRequirements,
    r: &Endowments,
    params: ModelParams,
    c: usize,
) -> Result<DMatrix<f64>> {
    let n = q.n_capabilities();
    let mut out = DMatrix::zeros(n, n);
    for b in 0..n {
        for b2 in 0..n {
            if b != b2 {
                out[(b, b2)] = growth_coupling(q, r, params, c, b, b2)?;
            }
        }
    }
    Ok(out)
}
