use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use barron_qha::io::{JsonFile, OperatorFile, PhaseFunctionFile, WeightFile};
use barron_qha::oracles::{random_operator, run_property_suite, Distribution, RandomSpec};
use barron_qha::solver::{solve_direct_detailed, SolveConfig};
use barron_qha::spaces::b0_norm_of;
use barron_qha::{
    contraction_factor, gamma_euclid, qft_fast, qft_naive, solve_fixed_point, Error, Group, NormReport,
    Operator, SolveResult, WeightFunction, WeylSystem,
};
use serde_json::{json, Map, Value};

use crate::error::CliError;

/// Agreement required between the two transforms before `bench` times them.
const BENCH_AGREEMENT: f64 = 1e-10;

/// Round to 15 significant digits for printing.
fn sig15(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(sig15(x)).map_or(Value::Null, Value::Number)
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn print_json(v: &Value) -> Result<(), CliError> {
    emit(&serde_json::to_string_pretty(v)?, None)
}

fn read_operator(path: &Path) -> Result<(WeylSystem, Operator), CliError> {
    let (group, op) = OperatorFile::read(path)?.to_operator()?;
    Ok((WeylSystem::new(group), op))
}

fn load_gamma(spec: &str, group: &Group) -> Result<WeightFunction, CliError> {
    if spec == "euclid" {
        return Ok(gamma_euclid(group));
    }
    let w = WeightFile::read(spec)?.to_weight()?;
    if w.group() != group {
        return Err(Error::GroupMismatch { left: group.factors().to_vec(), right: w.group().factors().to_vec() }.into());
    }
    Ok(w)
}

pub fn qft(input: &Path, output: Option<&Path>, naive: bool) -> Result<(), CliError> {
    let (sys, op) = read_operator(input)?;
    let f = if naive { qft_naive(&sys, &op)? } else { qft_fast(&sys, &op)? };
    emit(&PhaseFunctionFile::from_phase_function(&f)?.to_json()?, output)
}

pub fn iqft(input: &Path, output: Option<&Path>) -> Result<(), CliError> {
    let f = PhaseFunctionFile::read(input)?.to_phase_function()?;
    let sys = WeylSystem::new(f.group().clone());
    let op = barron_qha::iqft(&sys, &f)?;
    emit(&OperatorFile::from_operator(sys.group(), &op)?.to_json()?, output)
}

enum NormKind {
    Barron,
    Sobolev,
    Schatten(f64),
    Op,
}

fn parse_norm(spec: &str) -> Result<NormKind, CliError> {
    match spec {
        "barron" => Ok(NormKind::Barron),
        "sobolev" => Ok(NormKind::Sobolev),
        "op" => Ok(NormKind::Op),
        _ => {
            let p = spec
                .strip_prefix("schatten:")
                .ok_or_else(|| CliError::Usage(format!("unknown norm {spec:?}; expected barron, sobolev, schatten:<p> or op")))?;
            let p = if p == "inf" { f64::INFINITY } else {
                p.parse::<f64>().map_err(|_| CliError::Usage(format!("bad Schatten exponent {p:?}")))?
            };
            Ok(NormKind::Schatten(p))
        }
    }
}

pub fn norm(input: &Path, s: f64, spec: &str, gamma: &str) -> Result<(), CliError> {
    let kind = parse_norm(spec)?;
    let (sys, op) = read_operator(input)?;
    let gamma = load_gamma(gamma, sys.group())?;
    let p = match kind {
        NormKind::Schatten(p) => Some(p),
        _ => None,
    };
    let report = NormReport::compute(&sys, &op, s, &gamma, p)?;
    let value = match kind {
        NormKind::Barron => report.barron,
        NormKind::Sobolev => report.sobolev,
        NormKind::Schatten(_) => report.schatten.map_or(f64::NAN, |v| v.value),
        NormKind::Op => report.op_norm,
    };
    let mut out = Map::new();
    out.insert("norm".into(), json!(spec));
    out.insert("s".into(), num(s));
    out.insert("value".into(), num(value));
    out.insert("barron".into(), num(report.barron));
    out.insert("sobolev".into(), num(report.sobolev));
    if let Some(sv) = report.schatten {
        out.insert("schatten".into(), json!({ "p": num(sv.p), "value": num(sv.value) }));
    }
    out.insert("op_norm".into(), num(report.op_norm));
    print_json(&Value::Object(out))
}

pub struct SolveRequest<'a> {
    pub potential: &'a Path,
    pub source: &'a Path,
    pub tol: f64,
    pub max_iter: usize,
    pub fixed: bool,
    pub direct: bool,
    pub gamma: &'a str,
    pub output: &'a Path,
}

fn fixed_point_json(r: &SolveResult) -> Value {
    json!({
        "iterations": r.iterations,
        "converged": r.converged,
        "residual_b0": num(r.residual_b0),
        "residual_op": num(r.residual_op),
        "aposteriori_bound": num(r.aposteriori_bound),
        "apriori_bound_b2": num(r.apriori_bound_b2),
        "b2_norm_of_solution": num(r.b2_norm_of_solution),
        "first_step_b0": num(r.first_step_b0),
    })
}

pub fn solve(req: &SolveRequest<'_>) -> Result<(), CliError> {
    let (sys, v) = read_operator(req.potential)?;
    let (sys_t, t) = read_operator(req.source)?;
    if sys.group() != sys_t.group() {
        return Err(Error::GroupMismatch {
            left: sys.group().factors().to_vec(),
            right: sys_t.group().factors().to_vec(),
        }
        .into());
    }
    let gamma = load_gamma(req.gamma, sys.group())?;
    let q = contraction_factor(&sys, &v, &gamma)?;
    let mut out = Map::new();
    let method = match (req.fixed, req.direct) {
        (true, true) => "both",
        (true, false) => "fixed",
        _ => "direct",
    };
    out.insert("method".into(), json!(method));
    out.insert("q".into(), num(q));

    let mut failure = None;
    let mut fixed_solution = None;
    if req.fixed {
        let cfg = SolveConfig { tolerance: req.tol, max_iterations: req.max_iter, ..SolveConfig::default() };
        match solve_fixed_point(&sys, &v, &t, &gamma, &cfg) {
            Ok(r) => {
                out.insert("fixed_point".into(), fixed_point_json(&r));
                fixed_solution = Some(r.solution);
            }
            Err(Error::MaxIterationsExceeded(r)) => {
                out.insert("fixed_point".into(), fixed_point_json(&r));
                failure = Some(CliError::Numeric(format!(
                    "no convergence within {} iterations (bound {:e})",
                    r.iterations, r.aposteriori_bound
                )));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let mut direct_solution = None;
    if req.direct && failure.is_none() {
        let d = solve_direct_detailed(&sys, &v, &t, &gamma)?;
        out.insert("direct".into(), json!({ "condition": num(d.condition) }));
        direct_solution = Some(d.solution);
    }
    if let (Some(a), Some(b)) = (&fixed_solution, &direct_solution) {
        let diff = qft_fast(&sys, &(a - b))?;
        out.insert("discrepancy_b0".into(), num(b0_norm_of(&diff)));
    }
    if let Some(e) = failure {
        print_json(&Value::Object(out))?;
        return Err(e);
    }
    let solution = fixed_solution.or(direct_solution).expect("at least one method ran");
    OperatorFile::from_operator(sys.group(), &solution)?.write(req.output)?;
    out.insert("solution_path".into(), json!(req.output.display().to_string()));
    print_json(&Value::Object(out))
}

pub fn verify(factors: &[usize], gamma: &str, trials: usize, seed: u64) -> Result<(), CliError> {
    let group = Group::new(factors)?;
    let gamma = load_gamma(gamma, &group)?;
    let report = run_property_suite(&WeylSystem::new(group), &gamma, trials, seed)?;
    emit(&report.to_json()?, None)?;
    if report.all_pass() {
        Ok(())
    } else {
        let failed: Vec<&str> =
            report.properties.iter().filter(|(_, o)| !o.pass).map(|(k, _)| k.as_str()).collect();
        Err(CliError::Verification(format!("failed properties: {}", failed.join(", "))))
    }
}

fn time_ms<T>(reps: usize, mut f: impl FnMut() -> T) -> f64 {
    let mut best = f64::INFINITY;
    for _ in 0..reps {
        let start = Instant::now();
        std::hint::black_box(f());
        best = best.min(start.elapsed().as_secs_f64() * 1e3);
    }
    best
}

pub fn bench(n_list: &[String], reps: usize, seed: u64) -> Result<(), CliError> {
    if reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    let ns = n_list
        .iter()
        .map(|s| {
            s.trim().parse::<usize>().map_err(|_| {
                CliError::Usage(format!("bench only times single cyclic factors; cannot use {s:?}"))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut csv = String::from("n,naive_ms,fast_ms,speedup\n");
    for n in ns {
        let group = Group::cyclic(n)?;
        let sys = WeylSystem::new(group);
        let op = random_operator(&RandomSpec::new(seed, &[n], Distribution::ComplexGaussian))?;
        let slow = qft_naive(&sys, &op)?;
        let fast = qft_fast(&sys, &op)?;
        let scale = slow.values().iter().map(|z| z.norm()).fold(1.0, f64::max);
        let diff = slow.max_abs_diff(&fast);
        if diff > BENCH_AGREEMENT * scale {
            return Err(CliError::Numeric(format!("n = {n}: fast and naive transforms differ by {diff:e}")));
        }
        let naive_ms = time_ms(reps, || qft_naive(&sys, &op));
        let fast_ms = time_ms(reps, || qft_fast(&sys, &op));
        let _ = writeln!(csv, "{n},{naive_ms:.6},{fast_ms:.6},{:.3}", naive_ms / fast_ms);
    }
    print!("{csv}");
    Ok(())
}

pub fn random(factors: &[usize], dist: &str, b0: Option<f64>, output: Option<&Path>, seed: u64) -> Result<(), CliError> {
    let distribution: Distribution = serde_json::from_value(json!(dist))
        .map_err(|_| CliError::Usage(format!("unknown distribution {dist:?}")))?;
    let group = Group::new(factors)?;
    let mut spec = RandomSpec::new(seed, factors, distribution);
    if let Some(x) = b0 {
        spec = spec.with_b0_norm(x);
    }
    let op = random_operator(&spec)?;
    emit(&OperatorFile::from_operator(&group, &op)?.to_json()?, output)
}
