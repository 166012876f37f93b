//! Randomized property suite.
//!
//! Each property reduces a family of checks to a scalar *slack*: how far the observed quantity
//! exceeds what the invariant allows (negative or zero means the inequality holds exactly, an
//! equality reports its normalized deviation). A property passes when its worst slack over
//! all trials is at most its tolerance.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::random::{random_operator, random_phase_function, Distribution, RandomSpec};
use super::rng::SplitMix64;
use crate::error::{Error, Result};
use crate::numeric::compensated_sum;
use crate::qft::{iqft, qft_fast, qft_naive, twisted_convolution, PhaseFunction};
use crate::solver::{geometric_iteration_bound, solve_direct, solve_fixed_point, SchrodingerProblem, SolveConfig};
use crate::spaces::{
    b0_norm_of, barron_norm_of, operator_norm, sobolev_embedding_constant, sobolev_norm_of, WeightFunction,
    PEETRE_SCAN_LIMIT,
};
use crate::transformers::{laplacian_form, resolvent_bound_ratio, DiagonalTransformer};
use crate::weyl::WeylSystem;
use crate::{Operator, C64};

/// Property names, in report order.
pub const PROPERTY_NAMES: [&str; 22] = [
    "apriori-bound",
    "compact-embedding",
    "contraction",
    "convolution-theorem",
    "embeddings",
    "fast-naive-agreement",
    "interpolation",
    "inversion",
    "isometry",
    "iteration-bound",
    "laplacian-sign",
    "linearity",
    "peetre",
    "plancherel",
    "q-bijectivity",
    "resolvent-bound",
    "sobolev-embedding",
    "solver-oracle-agreement",
    "solver-residual",
    "submultiplicativity",
    "transformer-bound",
    "uniqueness",
];

/// Largest `N` for the `O(N⁴)` naive transform comparison.
const NAIVE_LIMIT: usize = 32;
/// Largest `N` for the `O(N⁴)` twisted convolution.
const CONVOLUTION_LIMIT: usize = 16;
/// Largest `N` for the dense `N² × N²` direct solve.
const DIRECT_LIMIT: usize = 8;

const SOLVER_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyOutcome {
    pub worst_slack: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub trials: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub skipped: Option<String>,
}

/// `{property: {worst_slack, tolerance, pass, trials}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SuiteReport {
    pub properties: BTreeMap<String, PropertyOutcome>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.properties.values().all(|p| p.pass)
    }

    pub fn get(&self, name: &str) -> Option<&PropertyOutcome> {
        self.properties.get(name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Debug)]
struct Tracker {
    tolerance: f64,
    worst: Option<f64>,
    saw_nan: bool,
    trials: usize,
    skipped: Option<String>,
}

impl Tracker {
    fn new(tolerance: f64) -> Self {
        Self { tolerance, worst: None, saw_nan: false, trials: 0, skipped: None }
    }

    fn observe(&mut self, slack: f64) {
        if slack.is_nan() {
            self.saw_nan = true;
        }
        self.worst = Some(self.worst.map_or(slack, |w| w.max(slack)));
    }

    fn finish(self) -> PropertyOutcome {
        if let Some(reason) = self.skipped {
            return PropertyOutcome {
                worst_slack: 0.0,
                tolerance: self.tolerance,
                pass: true,
                trials: 0,
                skipped: Some(reason),
            };
        }
        let worst = self.worst.unwrap_or(0.0);
        PropertyOutcome {
            worst_slack: worst,
            tolerance: self.tolerance,
            pass: !self.saw_nan && worst <= self.tolerance,
            trials: self.trials,
            skipped: None,
        }
    }
}

struct Suite {
    trackers: BTreeMap<&'static str, Tracker>,
}

impl Suite {
    fn new() -> Self {
        let tol = |name: &str| -> f64 {
            match name {
                "linearity" | "transformer-bound" | "embeddings" | "compact-embedding" => 1e-12,
                "solver-oracle-agreement" | "apriori-bound" => 1e-8,
                "solver-residual" => 10.0 * SOLVER_TOL,
                "peetre" | "laplacian-sign" | "iteration-bound" => 0.0,
                _ => 1e-10,
            }
        };
        let trackers = PROPERTY_NAMES.iter().map(|&n| (n, Tracker::new(tol(n)))).collect();
        Self { trackers }
    }

    fn tracker(&mut self, name: &'static str) -> &mut Tracker {
        self.trackers.get_mut(name).expect("known property name")
    }

    fn observe(&mut self, name: &'static str, slack: f64) {
        self.tracker(name).observe(slack);
    }

    /// Counts one trial for `name`.
    fn trial(&mut self, name: &'static str) {
        self.tracker(name).trials += 1;
    }

    fn skip(&mut self, name: &'static str, reason: &str) {
        self.tracker(name).skipped = Some(reason.to_string());
    }

    fn finish(self) -> SuiteReport {
        let properties = self.trackers.into_iter().map(|(k, t)| (k.to_string(), t.finish())).collect();
        SuiteReport { properties }
    }
}

/// `(lhs − rhs) / max(1, |rhs|)`.
fn excess(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs) / rhs.abs().max(1.0)
}

/// `lhs / rhs − 1`, with `0/0` read as equality.
fn ratio_excess(lhs: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        lhs / rhs - 1.0
    } else if lhs <= 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn max_abs(values: &[C64]) -> f64 {
    values.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn scaled_diff(a: &PhaseFunction, b: &PhaseFunction) -> f64 {
    a.max_abs_diff(b) / max_abs(b.values()).max(1.0)
}

fn max_op_diff(a: &Operator, b: &Operator) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Runs every property `trials` times on instances drawn from `seed`.
///
/// Failures are recorded in the report, never raised; only invalid arguments are errors.
pub fn run_property_suite(sys: &WeylSystem, gamma: &WeightFunction, trials: usize, seed: u64) -> Result<SuiteReport> {
    if trials == 0 {
        return Err(Error::param("trials", 0.0, ">= 1"));
    }
    if gamma.group() != sys.group() {
        return Err(Error::GroupMismatch {
            left: sys.group().factors().to_vec(),
            right: gamma.group().factors().to_vec(),
        });
    }
    let n = sys.dim();
    let mut suite = Suite::new();

    let peetre_ok = if n <= PEETRE_SCAN_LIMIT {
        let c = gamma.peetre_constant_forced();
        suite.trial("peetre");
        suite.observe("peetre", c - 2.0);
        c <= 2.0
    } else {
        suite.skip("peetre", "size gate");
        false
    };
    if !peetre_ok {
        suite.skip("submultiplicativity", "peetre gate");
    }
    if n > NAIVE_LIMIT {
        suite.skip("fast-naive-agreement", "size gate");
    }
    if n > CONVOLUTION_LIMIT {
        suite.skip("convolution-theorem", "size gate");
    }
    if n > DIRECT_LIMIT {
        suite.skip("solver-oracle-agreement", "size gate");
    }

    for trial in 0..trials {
        let mut rng = SplitMix64::derive(seed, trial as u64);
        run_trial(sys, gamma, &mut rng, trial, peetre_ok, &mut suite)?;
    }
    Ok(suite.finish())
}

fn run_trial(
    sys: &WeylSystem,
    gamma: &WeightFunction,
    rng: &mut SplitMix64,
    trial: usize,
    peetre_ok: bool,
    suite: &mut Suite,
) -> Result<()> {
    let group = sys.group();
    let factors = group.factors();
    let n = sys.dim();
    let haar = group.haar_weight();
    let mut draw = |dist: Distribution, b0: Option<f64>| -> Result<Operator> {
        let spec = RandomSpec { seed: rng.next_u64(), factors: factors.to_vec(), distribution: dist, target_b0_norm: b0 };
        random_operator(&spec)
    };
    let s_op = draw(Distribution::ComplexGaussian, None)?;
    let t_op = draw(Distribution::ComplexGaussian, None)?;
    let v_pot = draw(Distribution::ComplexGaussian, Some([0.25, 0.5, 0.9][trial % 3]))?;
    let t_src = draw(Distribution::ComplexGaussian, Some(1.0))?;
    let x_op = draw(Distribution::ComplexGaussian, None)?;
    let y_op = draw(Distribution::ComplexGaussian, None)?;
    let h_fn = random_phase_function(group, rng.next_u64());
    let (g1, g2) = rng.next_gaussian_pair();
    let (g3, g4) = rng.next_gaussian_pair();
    let (alpha, beta) = (C64::new(g1, g2), C64::new(g3, g4));

    let fs = qft_fast(sys, &s_op)?;
    let ft = qft_fast(sys, &t_op)?;

    // transform properties
    let hs_sq = compensated_sum(t_op.iter().map(|z| z.norm_sqr()));
    let pl = haar * compensated_sum(ft.values().iter().map(|v| v.norm_sqr()));
    suite.trial("plancherel");
    suite.observe("plancherel", (pl - hs_sq).abs() / hs_sq.max(f64::MIN_POSITIVE));

    suite.trial("inversion");
    suite.observe("inversion", max_op_diff(&iqft(sys, &ft)?, &t_op));
    suite.observe("inversion", qft_fast(sys, &iqft(sys, &h_fn)?)?.max_abs_diff(&h_fn));

    let combo = &s_op * alpha + &t_op * beta;
    let lin_rhs = &(&fs * alpha) + &(&ft * beta);
    suite.trial("linearity");
    suite.observe("linearity", scaled_diff(&qft_fast(sys, &combo)?, &lin_rhs));

    if n <= NAIVE_LIMIT {
        suite.trial("fast-naive-agreement");
        suite.observe("fast-naive-agreement", scaled_diff(&ft, &qft_naive(sys, &t_op)?));
    }
    if n <= CONVOLUTION_LIMIT {
        let product = qft_fast(sys, &(&s_op * &t_op))?;
        suite.trial("convolution-theorem");
        suite.observe("convolution-theorem", scaled_diff(&twisted_convolution(sys, &fs, &ft)?, &product));
    }

    // Barron-space properties
    let b = |f: &PhaseFunction, s: f64| barron_norm_of(f, s, gamma);
    let orders = [0.0, 0.5, 1.0, 2.0];
    suite.trial("isometry");
    suite.trial("transformer-bound");
    suite.trial("q-bijectivity");
    for &s in &orders {
        let q = DiagonalTransformer::q(gamma, s)?;
        let qt = q.apply(sys, &t_op)?;
        let fq = qft_fast(sys, &qt)?;
        let lhs = b0_norm_of(&fq);
        let rhs = b(&ft, 2.0 * s)?;
        suite.observe("isometry", (lhs - rhs).abs() / rhs.max(1.0));
        suite.observe("transformer-bound", excess(operator_norm(&qt), rhs));
        let back = q.reciprocal()?.apply(sys, &qt)?;
        suite.observe("q-bijectivity", max_op_diff(&back, &t_op));
    }

    suite.trial("embeddings");
    for (i, &s) in orders.iter().enumerate() {
        for &t in &orders[i + 1..] {
            suite.observe("embeddings", excess(b(&ft, s)?, b(&ft, t)?));
        }
    }
    suite.trial("compact-embedding");
    suite.observe("compact-embedding", excess(operator_norm(&t_op), b(&ft, 0.0)?));

    suite.trial("interpolation");
    let (r, t) = (0.0, 2.0);
    for a in [0.25, 0.5, 0.75] {
        let s = a * r + (1.0 - a) * t;
        let bound = b(&ft, r)?.powf(a) * b(&ft, t)?.powf(1.0 - a);
        suite.observe("interpolation", ratio_excess(b(&ft, s)?, bound));
    }

    if peetre_ok {
        let fst = qft_fast(sys, &(&s_op * &t_op))?;
        suite.trial("submultiplicativity");
        for s in [0.0, 1.0, 2.0] {
            let bound = 2f64.powf(s / 2.0) * b(&fs, s)? * b(&ft, s)?;
            suite.observe("submultiplicativity", ratio_excess(b(&fst, s)?, bound));
        }
    }

    suite.trial("sobolev-embedding");
    for (s, t) in [(0.0, 1.0), (0.0, 2.0), (0.5, 2.0), (1.0, 2.0)] {
        let k = sobolev_embedding_constant(gamma, s, t)?;
        let bound = k * sobolev_norm_of(&ft, t, gamma)?;
        suite.observe("sobolev-embedding", ratio_excess(b(&ft, s)?, bound));
    }

    suite.trial("resolvent-bound");
    for alpha in [0.5, 1.0, 2.0] {
        for s in [0.0, 1.0, 2.0] {
            suite.observe("resolvent-bound", resolvent_bound_ratio(sys, &t_op, alpha, s, gamma)? - 1.0);
        }
    }

    suite.trial("laplacian-sign");
    suite.observe("laplacian-sign", laplacian_form(sys, &t_op, gamma)? / hs_sq.max(1.0));

    // solver properties
    let problem = SchrodingerProblem::new(sys, &v_pot, &t_src, gamma)?;
    let q = problem.contraction_factor()?;
    let b0_of = |op: &Operator| -> Result<f64> { Ok(b0_norm_of(&qft_fast(sys, op)?)) };
    let lip = b0_of(&(problem.apply_map(&x_op)? - problem.apply_map(&y_op)?))?;
    suite.trial("contraction");
    suite.observe("contraction", ratio_excess(lip, q * b0_of(&(&x_op - &y_op))?));

    let cfg = SolveConfig::with_tolerance(SOLVER_TOL);
    let fixed = solve_fixed_point(sys, &v_pot, &t_src, gamma, &cfg)?;
    suite.trial("apriori-bound");
    suite.observe("apriori-bound", ratio_excess(fixed.b2_norm_of_solution, fixed.apriori_bound_b2));
    suite.trial("solver-residual");
    suite.observe("solver-residual", fixed.residual_b0);
    suite.trial("iteration-bound");
    let allowed = geometric_iteration_bound(fixed.q, SOLVER_TOL, fixed.first_step_b0) + 1;
    suite.observe("iteration-bound", fixed.iterations as f64 - allowed as f64);

    let restart = SolveConfig { initial_guess: Some(x_op.clone()), ..cfg };
    let other = solve_fixed_point(sys, &v_pot, &t_src, gamma, &restart)?;
    suite.trial("uniqueness");
    let spread = b0_of(&(&fixed.solution - &other.solution))?;
    suite.observe("uniqueness", spread - 2.0 * SOLVER_TOL / (1.0 - q));

    if n <= DIRECT_LIMIT {
        let direct = solve_direct(sys, &v_pot, &t_src, gamma)?;
        suite.trial("solver-oracle-agreement");
        suite.observe("solver-oracle-agreement", b0_of(&(&fixed.solution - &direct))?);
    }
    Ok(())
}
