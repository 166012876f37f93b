//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use barron_qha::numeric::compensated_sum;
use barron_qha::oracles::{random_operator, run_property_suite, Distribution, RandomSpec, SplitMix64};
use barron_qha::solver::{geometric_iteration_bound, solve_direct_detailed};
use barron_qha::spaces::{b0_norm_of, barron_norm_of, sobolev_embedding_constant, sobolev_norm_of};
use barron_qha::transformers::resolvent_bound_ratio;
use barron_qha::{
    gamma_euclid, iqft, operator_norm, qft_fast, qft_naive, solve_fixed_point, twisted_convolution,
    DiagonalTransformer, Group, Operator, PhaseFunction, SolveConfig, WeightFunction, WeylSystem, C64,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn gaussian(seed: u64, factors: &[usize]) -> Operator {
    random_operator(&RandomSpec::new(seed, factors, Distribution::ComplexGaussian)).expect("draw")
}

fn scaled(seed: u64, factors: &[usize], b0: f64) -> Operator {
    random_operator(&RandomSpec::new(seed, factors, Distribution::ComplexGaussian).with_b0_norm(b0)).expect("draw")
}

fn max_op_diff(a: &Operator, b: &Operator) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn system(factors: &[usize]) -> (WeylSystem, WeightFunction) {
    let g = Group::new(factors).expect("group");
    let w = gamma_euclid(&g);
    (WeylSystem::new(g), w)
}

fn transform_correctness() -> Outcome {
    let start = Instant::now();
    let mut worst = [0.0f64; 3];
    let mut rng = SplitMix64::new(1);
    for n in [2, 3, 4, 6, 8, 16] {
        let (sys, _) = system(&[n]);
        let haar = sys.group().haar_weight();
        for _ in 0..50 {
            let s = gaussian(rng.next_u64(), &[n]);
            let t = gaussian(rng.next_u64(), &[n]);
            let ft = qft_fast(&sys, &t).map_err(|e| e.to_string())?;
            let fs = qft_fast(&sys, &s).map_err(|e| e.to_string())?;
            let back = iqft(&sys, &ft).map_err(|e| e.to_string())?;
            worst[0] = worst[0].max(max_op_diff(&back, &t));

            let hs = compensated_sum(t.iter().map(|z| z.norm_sqr()));
            let pl = haar * compensated_sum(ft.values().iter().map(|v| v.norm_sqr()));
            worst[1] = worst[1].max((pl - hs).abs());

            let (g1, g2) = rng.next_gaussian_pair();
            let (alpha, beta) = (C64::new(g1, g2), C64::new(g2, -g1));
            let lhs = qft_fast(&sys, &(&s * alpha + &t * beta)).map_err(|e| e.to_string())?;
            let rhs = &(&fs * alpha) + &(&ft * beta);
            worst[2] = worst[2].max(lhs.max_abs_diff(&rhs));
        }
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "inversion {:.1e}, plancherel {:.1e}, linearity {:.1e}, {:.2} s",
        worst[0],
        worst[1],
        worst[2],
        elapsed.as_secs_f64()
    );
    if worst.iter().all(|&w| w <= 1e-10) && elapsed < Duration::from_secs(10) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn convolution_theorem() -> Outcome {
    let mut worst = 0.0f64;
    let mut rng = SplitMix64::new(2);
    let groups: [&[usize]; 5] = [&[2], &[3], &[5], &[2, 3], &[9]];
    for trial in 0..50 {
        let factors = groups[trial % groups.len()];
        let (sys, _) = system(factors);
        let s = gaussian(rng.next_u64(), factors);
        let t = gaussian(rng.next_u64(), factors);
        let fs = qft_fast(&sys, &s).map_err(|e| e.to_string())?;
        let ft = qft_fast(&sys, &t).map_err(|e| e.to_string())?;
        let lhs = qft_fast(&sys, &(&s * &t)).map_err(|e| e.to_string())?;
        let rhs = twisted_convolution(&sys, &fs, &ft).map_err(|e| e.to_string())?;
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    let detail = format!("max error {worst:.1e} over 50 pairs");
    if worst <= 1e-10 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Tracks the largest violation seen for each named inequality.
#[derive(Default)]
struct Violations(Vec<(&'static str, f64, f64)>);

impl Violations {
    fn check(&mut self, name: &'static str, excess: f64, tolerance: f64) {
        match self.0.iter_mut().find(|(n, _, _)| *n == name) {
            Some(entry) => entry.1 = entry.1.max(excess),
            None => self.0.push((name, excess, tolerance)),
        }
    }

    fn failures(&self) -> Vec<String> {
        self.0.iter().filter(|(_, e, t)| e > t).map(|(n, e, _)| format!("{n} {e:.1e}")).collect()
    }
}

fn barron_suite() -> Outcome {
    let mut v = Violations::default();
    let mut rng = SplitMix64::new(3);
    let orders = [0.0, 0.5, 1.0, 2.0];
    for n in [2, 4, 8] {
        let (sys, gamma) = system(&[n]);
        if !gamma.peetre_check(1.0).map_err(|e| e.to_string())?.satisfied {
            return Err(format!("peetre gate failed for n = {n}"));
        }
        for _ in 0..100 {
            let t = gaussian(rng.next_u64(), &[n]);
            let s_op = gaussian(rng.next_u64(), &[n]);
            let ft = qft_fast(&sys, &t).map_err(|e| e.to_string())?;
            let fs = qft_fast(&sys, &s_op).map_err(|e| e.to_string())?;
            let b = |f: &PhaseFunction, s: f64| barron_norm_of(f, s, &gamma).expect("norm");

            for (i, &s) in orders.iter().enumerate() {
                for &t2 in &orders[i..] {
                    v.check("monotone embedding", b(&ft, s) - b(&ft, t2), 1e-12);
                }
            }
            for a in [0.25, 0.5, 0.75] {
                let s = 2.0 * (1.0 - a);
                let bound = b(&ft, 0.0).powf(a) * b(&ft, 2.0).powf(1.0 - a);
                v.check("interpolation", b(&ft, s) / bound - 1.0, 1e-10);
            }
            v.check("compact embedding", operator_norm(&t) - b(&ft, 0.0), 1e-12);
            for &s in &orders {
                let q = DiagonalTransformer::q(&gamma, s).map_err(|e| e.to_string())?;
                let qt = q.apply(&sys, &t).map_err(|e| e.to_string())?;
                let lhs = b0_norm_of(&qft_fast(&sys, &qt).map_err(|e| e.to_string())?);
                let rhs = b(&ft, 2.0 * s);
                v.check("isometry", (lhs - rhs).abs(), 1e-10 * rhs.max(1.0));
                v.check("transformer bound", operator_norm(&qt) - rhs, 1e-12 * rhs.max(1.0));
            }
            let fst = qft_fast(&sys, &(&s_op * &t)).map_err(|e| e.to_string())?;
            for s in [0.0, 1.0, 2.0] {
                let bound = 2f64.powf(s / 2.0) * b(&fs, s) * b(&ft, s);
                v.check("submultiplicativity", b(&fst, s) / bound - 1.0, 1e-10);
            }
            for (s, t2) in [(0.0, 1.0), (0.0, 2.0), (1.0, 2.0)] {
                let k = sobolev_embedding_constant(&gamma, s, t2).map_err(|e| e.to_string())?;
                let bound = k * sobolev_norm_of(&ft, t2, &gamma).map_err(|e| e.to_string())?;
                v.check("sobolev embedding", b(&ft, s) / bound - 1.0, 1e-10);
            }
            for alpha in [0.5, 1.0, 2.0] {
                for s in [0.0, 1.0, 2.0] {
                    let ratio = resolvent_bound_ratio(&sys, &t, alpha, s, &gamma).map_err(|e| e.to_string())?;
                    v.check("resolvent bound", ratio - 1.0, 1e-10);
                }
            }
        }
    }
    let failures = v.failures();
    if failures.is_empty() {
        Ok(format!("{} inequalities, 300 operators, zero violations", v.0.len()))
    } else {
        Err(failures.join(", "))
    }
}

fn peetre_gate() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 2..=16 {
        let (_, gamma) = system(&[n]);
        let check = gamma.peetre_check(1.0).map_err(|e| e.to_string())?;
        if !check.satisfied || check.constant > 2.0 {
            return Err(format!("gamma_euclid fails at n = {n}: constant {}", check.constant));
        }
        worst = worst.max(check.constant);
    }
    let g = Group::cyclic(4).expect("group");
    let bad = WeightFunction::from_fn(g, |p| if p.a == [0] && p.b == [0] { 1e3 } else { 0.0 })
        .map_err(|e| e.to_string())?;
    let adversarial = bad.peetre_check(1.0).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let detail = format!(
        "euclid max constant {worst:.4}, adversarial constant {:.1e}, {:.2} s",
        adversarial.constant,
        elapsed.as_secs_f64()
    );
    if !adversarial.satisfied && elapsed < Duration::from_secs(30) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn solver() -> Outcome {
    let tol = 1e-10;
    let mut worst_disc = 0.0f64;
    let mut worst_res = 0.0f64;
    let mut rng = SplitMix64::new(5);
    let cfg = SolveConfig::with_tolerance(tol);
    for n in [2, 3, 4] {
        let (sys, gamma) = system(&[n]);
        for q in [0.25, 0.5, 0.9] {
            for _ in 0..20 {
                let v = scaled(rng.next_u64(), &[n], q);
                let t = scaled(rng.next_u64(), &[n], 1.0);
                let r = solve_fixed_point(&sys, &v, &t, &gamma, &cfg).map_err(|e| e.to_string())?;
                let allowed = geometric_iteration_bound(r.q, tol, r.first_step_b0) + 1;
                if !r.converged || r.iterations > allowed {
                    return Err(format!("n = {n}, q = {q}: {} iterations, bound {allowed}", r.iterations));
                }
                if r.b2_norm_of_solution > (1.0 + 1e-10) / (1.0 - r.q) {
                    return Err(format!("n = {n}, q = {q}: a-priori bound violated"));
                }
                let d = solve_direct_detailed(&sys, &v, &t, &gamma).map_err(|e| e.to_string())?;
                let disc = b0_norm_of(&qft_fast(&sys, &(&r.solution - &d.solution)).map_err(|e| e.to_string())?);
                worst_disc = worst_disc.max(disc);
                worst_res = worst_res.max(r.residual_b0);
            }
        }
    }
    let detail = format!("180 instances, discrepancy {worst_disc:.1e}, residual {worst_res:.1e}");
    if worst_disc <= 1e-8 && worst_res <= 1e-8 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn performance() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(|e| e.to_string())?;
    pool.install(|| {
        let n = 128;
        let (sys, _) = system(&[n]);
        let t = gaussian(6, &[n]);
        let start = Instant::now();
        let slow = qft_naive(&sys, &t).map_err(|e| e.to_string())?;
        let naive = start.elapsed().as_secs_f64();
        let mut fast = f64::INFINITY;
        let mut quick = None;
        for _ in 0..5 {
            let start = Instant::now();
            quick = Some(qft_fast(&sys, &t).map_err(|e| e.to_string())?);
            fast = fast.min(start.elapsed().as_secs_f64());
        }
        let diff = slow.max_abs_diff(&quick.expect("ran"));
        let speedup = naive / fast;
        let detail = format!("max diff {diff:.1e}, naive {:.1} ms, fast {:.3} ms, speedup {speedup:.0}x", naive * 1e3, fast * 1e3);
        if diff <= 1e-10 && speedup >= 5.0 {
            Ok(detail)
        } else {
            Err(detail)
        }
    })
}

fn determinism() -> Outcome {
    let (sys, gamma) = system(&[2]);
    let run = || {
        run_property_suite(&sys, &gamma, 50, 42).and_then(|r| r.to_json()).map_err(|e| e.to_string())
    };
    let (first, second) = (run()?, run()?);
    if first == second {
        Ok(format!("{} bytes identical across two runs", first.len()))
    } else {
        Err("reports differ".into())
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("transform correctness", transform_correctness),
        ("convolution theorem", convolution_theorem),
        ("Barron-space inequalities", barron_suite),
        ("Peetre gate", peetre_gate),
        ("fixed-point solver", solver),
        ("fast transform performance", performance),
        ("suite determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
