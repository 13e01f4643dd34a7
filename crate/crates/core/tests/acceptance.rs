//! Acceptance checks, one line per criterion. Exits nonzero if any fails.

mod common;

use std::path::Path;
use std::process::Command;

use capdyn::dynamics::{
    argmax_growth_single, coefficients_single, critical_intensity, growth_rate_multi,
    growth_rate_single, steady_states,
};
use capdyn::experiments::{
    kinematics_by_complement, kinematics_by_initial, kinematics_gaps, FIGURE_STEP,
};
use capdyn::kinematics::{
    closed_form_general, closed_form_weighted, time_to_reach, uniform_grid, Rk4,
};
use capdyn::model::{output, output_grad_q, output_grad_r};
use capdyn::relatedness::{cross_partial_output, growth_coupling};
use capdyn::ModelParams;
use common::{close, random_instance, unit_bracket, with_q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn params(g: f64, d: f64) -> ModelParams {
    ModelParams::new(g, d).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn analytic_numeric() -> Outcome {
    let grid = uniform_grid(50.0, 0.1).unwrap();
    let rk = Rk4::new(1e-3).unwrap();
    let q_bars: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let (mut combos, mut worst_logistic, mut worst_general) = (0, 0.0f64, 0.0f64);
    for gamma in [0.5, 1.0] {
        for &q in &q_bars {
            for r0 in [0.0, 0.1, 0.5, 0.9] {
                combos += 1;
                let p = params(gamma, 0.0);
                let numeric = rk
                    .integrate_frozen(coefficients_single(q, p).unwrap(), r0, &grid)
                    .unwrap();
                for (i, &t) in grid.iter().enumerate() {
                    let d = (numeric.values(0)[i] - closed_form_weighted(r0, q, gamma, t)).abs();
                    worst_logistic = worst_logistic.max(d);
                }
                for delta in [0.1, 0.2] {
                    let coeffs = coefficients_single(q, params(gamma, delta)).unwrap();
                    let numeric = rk.integrate_frozen(coeffs, r0, &grid).unwrap();
                    for (i, &t) in grid.iter().enumerate() {
                        let exact =
                            closed_form_general(r0, coeffs, t).map_err(|e| e.to_string())?;
                        worst_general = worst_general.max((numeric.values(0)[i] - exact).abs());
                    }
                }
            }
        }
    }
    ensure(combos >= 50, || format!("only {combos} combinations"))?;
    ensure(worst_logistic <= 1e-6, || {
        format!("logistic max |dr| = {worst_logistic:e}")
    })?;
    ensure(worst_general <= 1e-8, || {
        format!("general max |dr| = {worst_general:e}")
    })?;
    Ok(format!(
        "{combos} combinations, max |dr| {worst_logistic:.1e} (delta = 0), {worst_general:.1e} (delta > 0)"
    ))
}

fn threshold() -> Outcome {
    let p = params(1.0, 0.2);
    let qc = critical_intensity(p).ok_or("no threshold")?;
    ensure((qc - 5.0 / 9.0).abs() <= 1e-12, || format!("q_c = {qc}"))?;
    let below = argmax_growth_single(qc - 1e-3, p);
    let above = argmax_growth_single(qc + 1e-3, p);
    ensure(below == 0.0, || format!("argmax below = {below}"))?;
    ensure(above > 0.0 && above < 2e-3, || {
        format!("argmax above = {above}")
    })?;
    Ok(format!(
        "q_c = {qc:.12}, argmax {below} below, {above:.2e} above"
    ))
}

fn argmax_oracle() -> Outcome {
    let n = 100_000;
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let mut worst = 0.0f64;
    for (g, d) in [(1.0, 0.0), (1.0, 0.2), (0.5, 0.3)] {
        let p = params(g, d);
        for i in 1..=99 {
            let q = i as f64 / 100.0;
            let best = grid
                .iter()
                .copied()
                .max_by(|a, b| {
                    growth_rate_single(*a, q, p).total_cmp(&growth_rate_single(*b, q, p))
                })
                .unwrap();
            worst = worst.max((best - argmax_growth_single(q, p)).abs());
        }
    }
    ensure(worst <= 2e-4, || format!("worst deviation {worst:e}"))?;
    let interior = argmax_growth_single(0.9, params(1.0, 0.2));
    ensure((interior - 31.0 / 90.0).abs() <= 1e-6, || {
        format!("interior value {interior}")
    })?;
    Ok(format!(
        "297 cases, worst deviation {worst:.1e}, interior {interior:.6}"
    ))
}

fn regime_semantics() -> Outcome {
    let n = 10_000;
    let grid: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
    let (mut below, mut above) = (0, 0);
    for (g, d) in [(1.0, 0.0), (1.0, 0.2), (0.5, 0.3)] {
        let p = params(g, d);
        let qc = critical_intensity(p).unwrap();
        for i in 1..=99 {
            let q = i as f64 / 100.0;
            let at_zero = growth_rate_single(0.0, q, p);
            if q < qc - 1e-9 {
                below += 1;
                if let Some(r) = grid
                    .iter()
                    .find(|&&r| growth_rate_single(r, q, p) >= at_zero)
                {
                    return Err(format!(
                        "q {q} (gamma {g}, delta {d}): r = {r} matches r = 0"
                    ));
                }
            } else if q > qc + 1e-9 {
                above += 1;
                ensure(
                    grid.iter().any(|&r| growth_rate_single(r, q, p) > at_zero),
                    || format!("q {q} (gamma {g}, delta {d}): no interior r beats r = 0"),
                )?;
            }
        }
    }
    Ok(format!(
        "{below} unconditional and {above} conditional cases"
    ))
}

fn gradients() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = 0.1;
    let p = params(0.8, 0.15);
    let mut worst = [0.0f64; 4];
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(1e-300);
    for _ in 0..100 {
        let inst = random_instance(&mut rng, 3, 8, 2, 8);
        let (q, r) = (&inst.q, &inst.r);
        let c = rng.gen_range(0..r.n_economies());
        let pp = rng.gen_range(0..q.n_activities());
        let b = rng.gen_range(0..q.n_capabilities());
        let b2 = (b + rng.gen_range(1..q.n_capabilities())) % q.n_capabilities();
        let y = |q: &capdyn::CapabilityRequirements, r: &capdyn::Endowments| {
            output(q, r).unwrap()[(c, pp)]
        };

        // Y is affine in each single entry, so clipped brackets are exact
        let (lo, hi) = unit_bracket(r.get(c, b), h);
        let fd = (y(q, &r.with_entry(c, b, hi).unwrap()) - y(q, &r.with_entry(c, b, lo).unwrap()))
            / (hi - lo);
        let a = output_grad_r(q, r, c, pp, b).unwrap();
        ensure(close(a, fd, 1e-6, 1e-13), || format!("dY/dr {a} vs {fd}"))?;
        worst[0] = worst[0].max(rel(a, fd));

        let (lo, hi) = unit_bracket(q.get(pp, b), h);
        let fd = (y(&with_q(q, pp, b, hi), r) - y(&with_q(q, pp, b, lo), r)) / (hi - lo);
        let a = output_grad_q(q, r, c, pp, b).unwrap();
        ensure(close(a, fd, 1e-6, 1e-13), || format!("dY/dq {a} vs {fd}"))?;
        worst[1] = worst[1].max(rel(a, fd));

        let (lo, hi) = unit_bracket(r.get(c, b), h);
        let (lo2, hi2) = unit_bracket(r.get(c, b2), h);
        let at = |x: f64, x2: f64| {
            y(
                q,
                &r.with_entry(c, b, x)
                    .unwrap()
                    .with_entry(c, b2, x2)
                    .unwrap(),
            )
        };
        let fd =
            (at(hi, hi2) - at(hi, lo2) - at(lo, hi2) + at(lo, lo2)) / ((hi - lo) * (hi2 - lo2));
        let a = cross_partial_output(q, r, c, pp, b, b2).unwrap();
        ensure(close(a, fd, 1e-5, 1e-12), || {
            format!("cross partial {a} vs {fd}")
        })?;
        worst[2] = worst[2].max(rel(a, fd));

        let rate = |r: &capdyn::Endowments| growth_rate_multi(q, r, p).unwrap()[(c, b)];
        let (lo, hi) = unit_bracket(r.get(c, b2), h);
        let fd = (rate(&r.with_entry(c, b2, hi).unwrap())
            - rate(&r.with_entry(c, b2, lo).unwrap()))
            / (hi - lo);
        let a = growth_coupling(q, r, p, c, b, b2).unwrap();
        ensure(close(a, fd, 1e-6, 1e-13), || {
            format!("growth coupling {a} vs {fd}")
        })?;
        worst[3] = worst[3].max(rel(a, fd));
    }
    Ok(format!(
        "100 instances, worst relative error dY/dr {:.1e}, dY/dq {:.1e}, cross {:.1e}, coupling {:.1e}",
        worst[0], worst[1], worst[2], worst[3]
    ))
}

fn relatedness_sign() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let p = params(1.0, 0.1);
    let (mut increases, mut third) = (0, 0);
    for _ in 0..1000 {
        let inst = random_instance(&mut rng, 2, 8, 3, 6);
        let (q, r) = (&inst.q, &inst.r);
        let n_b = q.n_capabilities();
        let c = rng.gen_range(0..r.n_economies());
        let b = rng.gen_range(0..n_b);
        let b2 = (b + rng.gen_range(1..n_b)) % n_b;
        let base = growth_coupling(q, r, p, c, b, b2).unwrap();
        ensure(base >= 0.0, || format!("negative coupling {base}"))?;

        let pp = rng.gen_range(0..q.n_activities());
        if q.get(pp, b) > 0.0 && q.get(pp, b2) > 0.0 && q.get(pp, b2) < 1.0 {
            let bumped = q.get(pp, b2) + 0.5 * (1.0 - q.get(pp, b2));
            let up = growth_coupling(&with_q(q, pp, b2, bumped), r, p, c, b, b2).unwrap();
            ensure(up > base, || {
                format!("raising shared q[{pp},{b2}] gave {up} <= {base}")
            })?;
            increases += 1;
        }

        let b3 = (0..n_b).find(|&k| k != b && k != b2).unwrap();
        let raised = r.get(c, b3) + rng.gen::<f64>() * (1.0 - r.get(c, b3));
        let up = growth_coupling(q, &r.with_entry(c, b3, raised).unwrap(), p, c, b, b2).unwrap();
        ensure(up >= base, || {
            format!("raising r[{c},{b3}] gave {up} < {base}")
        })?;
        third += 1;
    }
    Ok(format!(
        "1000 instances nonnegative, {increases} strict increases, {third} third-capability checks"
    ))
}

fn kinematics_initial() -> Outcome {
    let p = params(1.0, 0.0);
    let grid = uniform_grid(50.0, FIGURE_STEP).unwrap();
    let traj = kinematics_by_initial(p, &grid).map_err(|e| e.to_string())?;
    let mut reach = Vec::new();
    for (i, s) in traj.series.iter().enumerate() {
        let t = traj
            .first_time_at_or_above(i, 0.99)
            .ok_or_else(|| format!("{} never reaches 0.99", s.name))?;
        reach.push(format!("{:.1}", t));
    }
    let gaps = kinematics_gaps(p, &grid).map_err(|e| e.to_string())?;
    let mut peaks = Vec::new();
    for s in &gaps.series {
        let v = &s.values;
        ensure(v[1] > v[0], || {
            format!("{} does not rise from t = 0", s.name)
        })?;
        let k = (0..v.len()).max_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap();
        ensure(k > 0 && k < v.len() - 1, || {
            format!("{} peak not interior", s.name)
        })?;
        ensure(v[..=k].windows(2).all(|w| w[1] > w[0]), || {
            format!("{} not rising before peak", s.name)
        })?;
        ensure(v[k..].windows(2).all(|w| w[1] <= w[0]), || {
            format!("{} not falling after peak", s.name)
        })?;
        let last = *v.last().unwrap();
        ensure(last < 0.1 * v[k], || {
            format!("{} ends at {last}, peak {}", s.name, v[k])
        })?;
        peaks.push(format!(
            "{:.3} -> {:.3} at t = {:.2}",
            v[0], v[k], gaps.times[k]
        ));
    }
    Ok(format!(
        "time to 0.99: {}; gap peaks {}",
        reach.join(", "),
        peaks.join(", ")
    ))
}

fn kinematics_complement() -> Outcome {
    let p = params(1.0, 0.0);
    let times: Vec<f64> = [0.1, 0.5, 0.9]
        .iter()
        .map(|&e| time_to_reach(0.5, 0.7, p.gamma() * e, 0.99).unwrap_or(f64::INFINITY))
        .collect();
    ensure(times.windows(2).all(|w| w[1] < w[0]), || {
        format!("times {times:?}")
    })?;
    let t_late = 500.0 * FIGURE_STEP;
    let grid = uniform_grid(t_late, FIGURE_STEP).unwrap();
    let traj = kinematics_by_complement(p, &grid).map_err(|e| e.to_string())?;
    let slow = *traj.values(0).last().unwrap();
    ensure(slow < 1.0 - 1e-3, || {
        format!("E = 0.1 at t = {t_late}: {slow}")
    })?;
    Ok(format!(
        "time to 0.99 {:.2} > {:.2} > {:.2}; E = 0.1 at 500 figure steps: {slow:.4}",
        times[0], times[1], times[2]
    ))
}

fn steady_state_shift() -> Outcome {
    let mut checked = 0;
    for gamma in [0.5, 1.0] {
        for q in [0.2, 0.5, 0.7, 0.9] {
            let mut previous = f64::INFINITY;
            for delta in [0.05, 0.1, 0.2] {
                let coeffs = coefficients_single(q, params(gamma, delta)).unwrap();
                let larger = *coeffs.real_roots().ok_or("complex roots")?.last().unwrap();
                let stable: Vec<f64> = steady_states(coeffs)
                    .map_err(|e| e.to_string())?
                    .into_iter()
                    .filter(|s| s.stable)
                    .map(|s| s.value)
                    .collect();
                ensure(stable == [larger], || {
                    format!("stable {stable:?}, larger root {larger}")
                })?;
                ensure(larger < 1.0, || format!("equilibrium {larger} not below 1"))?;
                ensure(larger < previous, || {
                    format!("not decreasing at delta {delta}")
                })?;
                previous = larger;
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} cases, stable root is the larger root and falls with delta"
    ))
}

fn run_cli(args: &[&str], out: &Path) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_capdyn"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("CAPDYN_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.success(), || {
        format!(
            "{args:?} failed: {}",
            String::from_utf8_lossy(&status.stderr)
        )
    })
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = tmp.path().join("run.cfg");
    std::fs::write(
        &config,
        "seed = 99\nmembers = 3\neconomies = 4\nactivities = 3\ncapabilities = 3\nq_points = 101\nratio_points = 11\n",
    )
    .map_err(|e| e.to_string())?;
    let cfg = config.to_str().unwrap();
    let runs: [&[&str]; 4] = [
        &["figures", "--name", "all", "--config", cfg],
        &["phase", "--config", cfg],
        &["ensemble", "--config", cfg, "--t-end", "40"],
        &["bifurcation", "--config", cfg],
    ];
    let mut compared = 0;
    for (i, args) in runs.iter().enumerate() {
        let first = tmp.path().join(format!("a{i}"));
        let second = tmp.path().join(format!("b{i}"));
        run_cli(args, &first)?;
        run_cli(args, &second)?;
        let (a, b) = (csv_files(&first), csv_files(&second));
        ensure(!a.is_empty(), || format!("{args:?} wrote no CSV"))?;
        ensure(a == b, || format!("{args:?} output differs between runs"))?;
        compared += a.len();
    }
    Ok(format!("{compared} CSV files byte-identical across reruns"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("analytic-numeric equivalence", analytic_numeric),
        ("threshold formula", threshold),
        ("argmax oracle", argmax_oracle),
        ("regime semantics", regime_semantics),
        ("gradient suite", gradients),
        ("relatedness sign and monotonicity", relatedness_sign),
        ("kinematics, varying initial endowment", kinematics_initial),
        ("kinematics, varying complements", kinematics_complement),
        ("steady-state shift", steady_state_shift),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = std::time::Instant::now();
        match check() {
            Ok(detail) => println!(
                "PASS {:>2} {name}: {detail} [{:.1}s]",
                i + 1,
                started.elapsed().as_secs_f64()
            ),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
