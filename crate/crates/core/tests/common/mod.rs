#![allow(dead_code)]

use capdyn::{CapabilityRequirements, Endowments};
use nalgebra::DMatrix;
use rand::Rng;

pub struct Instance {
    pub q: CapabilityRequirements,
    pub r: Endowments,
}

/// Random requirements and endowments with entries uniform on `[0, 1)`.
pub fn random_instance(
    rng: &mut impl Rng,
    max_economies: usize,
    max_activities: usize,
    min_capabilities: usize,
    max_capabilities: usize,
) -> Instance {
    let n_c = rng.gen_range(1..=max_economies);
    let n_p = rng.gen_range(1..=max_activities);
    let n_b = rng.gen_range(min_capabilities..=max_capabilities);
    let q = DMatrix::from_fn(n_p, n_b, |_, _| rng.gen::<f64>());
    let r = DMatrix::from_fn(n_c, n_b, |_, _| rng.gen::<f64>());
    Instance {
        q: CapabilityRequirements::new(q).unwrap(),
        r: Endowments::new(r).unwrap(),
    }
}

/// Difference quotient over `[x - h, x + h]` clipped to `[0, 1]`.
pub fn unit_bracket(x: f64, h: f64) -> (f64, f64) {
    ((x - h).max(0.0), (x + h).min(1.0))
}

pub fn with_q(q: &CapabilityRequirements, p: usize, b: usize, v: f64) -> CapabilityRequirements {
    let mut m = q.matrix().clone();
    m[(p, b)] = v;
    CapabilityRequirements::new(m).unwrap()
}

/// `|a - b| <= rel |a| + floor`.
pub fn close(a: f64, b: f64, rel: f64, floor: f64) -> bool {
    (a - b).abs() <= rel * a.abs() + floor
}
