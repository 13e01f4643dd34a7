mod common;

use capdyn::dynamics::{
    argmax_growth_single, coefficients_multi, growth_rate_multi, growth_rate_separated,
    growth_rate_single,
};
use capdyn::io::{load_matrix, save_matrix, LabeledMatrix};
use capdyn::kinematics::{closed_form_general, closed_form_weighted, uniform_grid, weighted_rate};
use capdyn::model::{complement, output, output_growth};
use capdyn::relatedness::{complementarity_matrix, growth_coupling, RelatednessWeights};
use capdyn::{CapabilityRequirements, Endowments, ModelParams};
use common::{random_instance, with_q};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64) -> common::Instance {
    random_instance(&mut ChaCha8Rng::seed_from_u64(seed), 4, 8, 1, 8)
}

fn unit_matrix(rows: usize, cols: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(0.0..=1.0f64, rows * cols)
        .prop_map(move |v| DMatrix::from_row_slice(rows, cols, &v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn output_in_unit_interval_and_monotone(seed in any::<u64>(), bump in 0.0..1.0f64) {
        let inst = instance(seed);
        let (q, r) = (&inst.q, &inst.r);
        let y = output(q, r).unwrap();
        prop_assert!(y.iter().all(|v| (0.0..=1.0).contains(v)));
        let (c, b) = (0, q.n_capabilities() - 1);
        let raised_r = r.get(c, b) + bump * (1.0 - r.get(c, b));
        let y_r = output(q, &r.with_entry(c, b, raised_r).unwrap()).unwrap();
        let raised_q = q.get(0, b) + bump * (1.0 - q.get(0, b));
        let y_q = output(&with_q(q, 0, b, raised_q), r).unwrap();
        for p in 0..q.n_activities() {
            prop_assert!(y_r[(c, p)] >= y[(c, p)]);
            for c2 in 0..r.n_economies() {
                prop_assert!(y_q[(c2, p)] <= y[(c2, p)]);
            }
        }
    }

    #[test]
    fn output_factorizes_through_complement(seed in any::<u64>()) {
        let inst = instance(seed);
        let (q, r) = (&inst.q, &inst.r);
        let y = output(q, r).unwrap();
        for c in 0..r.n_economies() {
            for p in 0..q.n_activities() {
                for b in 0..q.n_capabilities() {
                    let own = 1.0 - q.get(p, b) * (1.0 - r.get(c, b));
                    let e = complement(q, r, c, p, b).unwrap();
                    prop_assert!((own * e - y[(c, p)]).abs() <= 1e-14);
                }
            }
        }
    }

    #[test]
    fn output_growth_matches_time_derivative(seed in any::<u64>()) {
        let inst = instance(seed);
        let (q, r) = (&inst.q, &inst.r);
        let p = ModelParams::new(0.7, 0.1).unwrap();
        let dr = growth_rate_multi(q, r, p).unwrap();
        let dq = DMatrix::zeros(q.n_activities(), q.n_capabilities());
        let dy = output_growth(q, r, &dr, &dq).unwrap();
        // Y is a polynomial of degree B in the step; use a small symmetric step
        let h = 1e-6;
        let shifted = |s: f64| {
            let m = (r.matrix() + &dr * s).map(|v| v.clamp(0.0, 1.0));
            output(q, &Endowments::new(m).unwrap()).unwrap()
        };
        let interior = r.matrix().iter().zip(dr.iter()).all(|(x, d)| x + h * d.abs() <= 1.0 && x - h * d.abs() >= 0.0);
        prop_assume!(interior);
        let fd = (shifted(h) - shifted(-h)) / (2.0 * h);
        for (a, b) in dy.iter().zip(fd.iter()) {
            prop_assert!((a - b).abs() <= 1e-7, "{} vs {}", a, b);
        }
    }

    #[test]
    fn growth_coupling_nonnegative(seed in any::<u64>(), gamma in 0.01..=1.0f64, delta in 0.0..2.0f64) {
        let inst = random_instance(&mut ChaCha8Rng::seed_from_u64(seed), 3, 8, 2, 8);
        let p = ModelParams::new(gamma, delta).unwrap();
        let n_b = inst.q.n_capabilities();
        for c in 0..inst.r.n_economies() {
            for b in 0..n_b {
                for b2 in (0..n_b).filter(|&k| k != b) {
                    prop_assert!(growth_coupling(&inst.q, &inst.r, p, c, b, b2).unwrap() >= 0.0);
                }
            }
        }
    }

    #[test]
    fn complementarity_symmetric_nonnegative(seed in any::<u64>()) {
        let inst = instance(seed);
        let m = complementarity_matrix(&inst.q, &RelatednessWeights::uniform(inst.q.n_activities())).unwrap();
        let m = m.matrix();
        prop_assert!(m.iter().all(|&v| v >= 0.0));
        prop_assert_eq!(m, &m.transpose());
    }

    #[test]
    fn separated_form_matches_growth_law(seed in any::<u64>(), delta in 0.0..1.0f64) {
        let inst = instance(seed);
        let p = ModelParams::new(1.0, delta).unwrap();
        let rates = growth_rate_multi(&inst.q, &inst.r, p).unwrap();
        for c in 0..inst.r.n_economies() {
            for b in 0..inst.q.n_capabilities() {
                let sep = growth_rate_separated(&inst.q, &inst.r, c, b, p).unwrap();
                let quad = coefficients_multi(&inst.q, &inst.r, c, b, p).unwrap().rate(inst.r.get(c, b));
                prop_assert!((sep - rates[(c, b)]).abs() <= 1e-12);
                prop_assert!((quad - rates[(c, b)]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn argmax_dominates_grid(q in 0.0..=1.0f64, gamma in 0.05..=1.0f64, ratio in 0.0..3.0f64) {
        let p = ModelParams::new(gamma, ratio * gamma).unwrap();
        let r_star = argmax_growth_single(q, p);
        prop_assert!((0.0..=1.0).contains(&r_star));
        let best = growth_rate_single(r_star, q, p);
        for i in 0..=200 {
            prop_assert!(growth_rate_single(i as f64 / 200.0, q, p) <= best + 1e-12);
        }
    }

    #[test]
    fn trajectories_do_not_cross(
        a in 0.0..=1.0f64,
        b in 0.0..=1.0f64,
        q in 0.0..=1.0f64,
        rate in 0.0..3.0f64,
        t in 0.0..100.0f64,
    ) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (x, y) = (closed_form_weighted(lo, q, rate, t), closed_form_weighted(hi, q, rate, t));
        prop_assert!(x <= y + 1e-15);
        prop_assert!((0.0..=1.0 + 1e-15).contains(&x));
        prop_assert!(x >= lo - 1e-15);
    }

    #[test]
    fn general_closed_form_stays_in_unit_interval(
        r0 in 0.0..=1.0f64,
        q in 0.0..=1.0f64,
        gamma in 0.05..=1.0f64,
        delta in 0.0..2.0f64,
        t in 0.0..100.0f64,
    ) {
        let p = ModelParams::new(gamma, delta).unwrap();
        let coeffs = capdyn::dynamics::coefficients_single(q, p).unwrap();
        let r = closed_form_general(r0, coeffs, t).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&r), "{}", r);
    }

    #[test]
    fn frozen_closed_form_matches_weighted_rate(seed in any::<u64>(), t in 0.0..5.0f64) {
        // the weighted parametrization and the quadratic coefficients agree
        let inst = instance(seed);
        let p = ModelParams::new(0.9, 0.0).unwrap();
        let (c, b) = (0, 0);
        let w = weighted_rate(&inst.q, &inst.r, c, b, p).unwrap();
        let coeffs = coefficients_multi(&inst.q, &inst.r, c, b, p).unwrap();
        prop_assume!(w.rate > 1e-9);
        let r0 = inst.r.get(c, b);
        let via_general = closed_form_general(r0, coeffs, t).unwrap();
        prop_assert!((closed_form_weighted(r0, w.intensity, w.rate, t) - via_general).abs() <= 1e-9);
    }

    #[test]
    fn matrix_round_trip_is_bit_exact(m in unit_matrix(3, 4)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        let labeled = LabeledMatrix::with_default_labels("activity", "p", "b", m.clone());
        save_matrix(&path, &labeled).unwrap();
        let back = load_matrix(&path).unwrap();
        prop_assert_eq!(&back, &labeled);
        prop_assert!(back.values.iter().zip(m.iter()).all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn uniform_grid_hits_end(t_end in 0.0..100.0f64, dt in 0.001..10.0f64) {
        let g = uniform_grid(t_end, dt).unwrap();
        prop_assert_eq!(g[0], 0.0);
        prop_assert_eq!(*g.last().unwrap(), t_end.max(0.0));
        prop_assert!(g.windows(2).all(|w| w[1] > w[0] && w[1] - w[0] <= dt * (1.0 + 1e-9)));
    }
}

#[test]
fn requirements_reject_out_of_range() {
    let m = DMatrix::from_row_slice(1, 2, &[0.5, 1.5]);
    assert!(CapabilityRequirements::new(m).is_err());
    let m = DMatrix::from_row_slice(1, 2, &[f64::NAN, 0.5]);
    assert!(Endowments::new(m).is_err());
}
