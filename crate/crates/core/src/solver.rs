//! Solver for the operator equation `(I − Δ + V) S = T`.
//!
//! Writing `Q₁ = I − Δ` (symbol `1 + γ²`), the equation is the fixed-point problem
//! `S = E(S) := Q₁⁻¹(−V S + T)`. Since `‖Q₁⁻¹X‖_{B⁰} ≤ ‖X‖_{B⁰}` and
//! `‖V X‖_{B⁰} ≤ ‖V‖_{B⁰}‖X‖_{B⁰}`, `E` is a contraction on `B⁰` with factor `q = ‖V‖_{B⁰}`
//! whenever `q < 1`. Iteration stops on the a-posteriori bound `q/(1−q)·‖S_{k+1} − S_k‖_{B⁰}`.
//!
//! [`solve_direct`] assembles the same linear map as a dense `N² × N²` matrix and solves it
//! with LU; it shares no code path with the iteration beyond the Weyl matrices.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::qft::{check_operator, qft_fast};
use crate::spaces::{b0_norm_of, barron_norm, operator_norm, WeightFunction};
use crate::transformers::DiagonalTransformer;
use crate::weyl::WeylSystem;
use crate::{Operator, C64};

/// Direct solves above this condition estimate are reported as singular.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    /// Target for the a-posteriori `B⁰` error bound.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Starting point; zero when `None`.
    pub initial_guess: Option<Operator>,
    /// Keep the a-posteriori bound of every iteration.
    pub record_history: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self { tolerance: 1e-10, max_iterations: 10_000, initial_guess: None, record_history: false }
    }
}

impl SolveConfig {
    pub fn with_tolerance(tolerance: f64) -> Self {
        Self { tolerance, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::param("tolerance", self.tolerance, "a finite real > 0"));
        }
        if self.max_iterations == 0 {
            return Err(Error::param("max_iterations", 0.0, ">= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub solution: Operator,
    pub iterations: usize,
    /// Contraction factor `‖V‖_{B⁰}`.
    pub q: f64,
    /// `‖(I − Δ + V)S − T‖_{B⁰}`.
    pub residual_b0: f64,
    /// Same residual in operator norm, informational.
    pub residual_op: f64,
    /// `q/(1−q)·‖S_k − S_{k−1}‖_{B⁰}` at the last iteration.
    pub aposteriori_bound: f64,
    /// `(1−q)⁻¹ ‖T‖_{B⁰}`.
    pub apriori_bound_b2: f64,
    pub b2_norm_of_solution: f64,
    /// `‖S₁ − S₀‖_{B⁰}`, the first step length.
    pub first_step_b0: f64,
    pub converged: bool,
    /// A-posteriori bound per iteration when `record_history` is set.
    pub history: Vec<f64>,
}

/// `⌈log(tol(1−q)/d₁) / log q⌉`, at least 1: the iteration count after which the
/// a-posteriori bound of a `q`-contraction with first step `d₁` is below `tol`.
pub fn geometric_iteration_bound(q: f64, tolerance: f64, first_step: f64) -> usize {
    if q <= 0.0 || first_step <= 0.0 {
        return 1;
    }
    let k = ((tolerance * (1.0 - q) / first_step).ln() / q.ln()).ceil();
    if k.is_finite() && k >= 1.0 {
        k as usize
    } else {
        1
    }
}

/// The data `(V, T, γ)` of one equation together with the transformers it needs.
#[derive(Debug, Clone)]
pub struct SchrodingerProblem<'a> {
    sys: &'a WeylSystem,
    potential: &'a Operator,
    source: &'a Operator,
    gamma: &'a WeightFunction,
    q1: DiagonalTransformer,
    resolvent: DiagonalTransformer,
}

impl<'a> SchrodingerProblem<'a> {
    pub fn new(
        sys: &'a WeylSystem,
        potential: &'a Operator,
        source: &'a Operator,
        gamma: &'a WeightFunction,
    ) -> Result<Self> {
        check_operator(sys, potential)?;
        check_operator(sys, source)?;
        if gamma.group() != sys.group() {
            return Err(Error::GroupMismatch {
                left: sys.group().factors().to_vec(),
                right: gamma.group().factors().to_vec(),
            });
        }
        Ok(Self {
            sys,
            potential,
            source,
            gamma,
            q1: DiagonalTransformer::q(gamma, 1.0)?,
            resolvent: DiagonalTransformer::resolvent(gamma, 1.0)?,
        })
    }

    pub fn contraction_factor(&self) -> Result<f64> {
        contraction_factor(self.sys, self.potential, self.gamma)
    }

    /// `E(S) = Q₁⁻¹(−V S + T)`.
    pub fn apply_map(&self, s: &Operator) -> Result<Operator> {
        check_operator(self.sys, s)?;
        let rhs = self.source - self.potential * s;
        self.resolvent.apply(self.sys, &rhs)
    }

    /// `(I − Δ + V) S`.
    pub fn apply_operator(&self, s: &Operator) -> Result<Operator> {
        check_operator(self.sys, s)?;
        Ok(self.q1.apply(self.sys, s)? + self.potential * s)
    }

    pub fn residual(&self, s: &Operator) -> Result<Operator> {
        Ok(self.apply_operator(s)? - self.source)
    }

    pub fn residual_b0(&self, s: &Operator) -> Result<f64> {
        b0(self.sys, &self.residual(s)?)
    }

    fn finish(&self, solution: Operator, state: IterationState) -> Result<SolveResult> {
        let residual = self.residual(&solution)?;
        Ok(SolveResult {
            iterations: state.iterations,
            q: state.q,
            residual_b0: b0(self.sys, &residual)?,
            residual_op: operator_norm(&residual),
            aposteriori_bound: state.bound,
            apriori_bound_b2: b0(self.sys, self.source)? / (1.0 - state.q),
            b2_norm_of_solution: barron_norm(self.sys, &solution, 2.0, self.gamma)?,
            first_step_b0: state.first_step,
            converged: state.converged,
            history: state.history,
            solution,
        })
    }
}

struct IterationState {
    iterations: usize,
    q: f64,
    bound: f64,
    first_step: f64,
    converged: bool,
    history: Vec<f64>,
}

fn b0(sys: &WeylSystem, t: &Operator) -> Result<f64> {
    Ok(b0_norm_of(&qft_fast(sys, t)?))
}

/// `q = ‖V‖_{B⁰}`, the Lipschitz constant of the iteration map in `B⁰`.
pub fn contraction_factor(sys: &WeylSystem, v: &Operator, gamma: &WeightFunction) -> Result<f64> {
    barron_norm(sys, v, 0.0, gamma)
}

/// Picard iteration `S_{k+1} = Q₁⁻¹(−V S_k + T)`.
///
/// Fails with [`Error::NotAContraction`] when `‖V‖_{B⁰} ≥ 1`, and with
/// [`Error::MaxIterationsExceeded`] (carrying the last iterate) when the tolerance is not met.
pub fn solve_fixed_point(
    sys: &WeylSystem,
    v: &Operator,
    t: &Operator,
    gamma: &WeightFunction,
    cfg: &SolveConfig,
) -> Result<SolveResult> {
    cfg.validate()?;
    let problem = SchrodingerProblem::new(sys, v, t, gamma)?;
    let q = problem.contraction_factor()?;
    if q >= 1.0 {
        return Err(Error::NotAContraction(q));
    }
    let n = sys.dim();
    let mut current = match &cfg.initial_guess {
        Some(s0) => {
            check_operator(sys, s0)?;
            s0.clone()
        }
        None => Operator::zeros(n, n),
    };
    let mut state =
        IterationState { iterations: 0, q, bound: f64::INFINITY, first_step: 0.0, converged: false, history: Vec::new() };
    while state.iterations < cfg.max_iterations {
        let next = problem.apply_map(&current)?;
        let step = b0(sys, &(&next - &current))?;
        state.iterations += 1;
        if state.iterations == 1 {
            state.first_step = step;
        }
        state.bound = q / (1.0 - q) * step;
        if cfg.record_history {
            state.history.push(state.bound);
        }
        current = next;
        if state.bound <= cfg.tolerance {
            state.converged = true;
            break;
        }
    }
    let result = problem.finish(current, state)?;
    if result.converged {
        Ok(result)
    } else {
        Err(Error::MaxIterationsExceeded(Box::new(result)))
    }
}

/// Dense matrix of `S ↦ (I − Δ + V) S` acting on column-major `vec(S)`.
///
/// `vec(V S) = (I ⊗ V) vec(S)`, and `Q₁ = Σ_ξ (1+γ(ξ)²)/N · vec(U_ξ) vec(U_ξ)^H` because the
/// normalized Weyl matrices `U_ξ/√N` are an orthonormal basis for the trace inner product.
pub fn superoperator(sys: &WeylSystem, v: &Operator, gamma: &WeightFunction) -> Result<DMatrix<C64>> {
    check_operator(sys, v)?;
    let n = sys.dim();
    let big = n * n;
    let mut l = DMatrix::<C64>::zeros(big, big);
    for block in 0..n {
        let off = block * n;
        l.view_mut((off, off), (n, n)).copy_from(v);
    }
    let haar = sys.group().haar_weight();
    for xi in 0..sys.group().phase_card() {
        let u = sys.weyl_operator_at(xi);
        let w = haar * gamma.bracket_pow(xi, 1.0);
        // U_ξ has one nonzero per column: collect them as (vec index, value)
        let nz: Vec<(usize, C64)> = u
            .as_slice()
            .iter()
            .enumerate()
            .filter(|(_, z)| **z != C64::new(0.0, 0.0))
            .map(|(k, z)| (k, *z))
            .collect();
        for &(r, ur) in &nz {
            for &(c, uc) in &nz {
                l[(r, c)] += ur * uc.conj() * w;
            }
        }
    }
    Ok(l)
}

/// Solution of a direct solve with its 1-norm condition estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectSolution {
    pub solution: Operator,
    pub condition: f64,
}

/// Dense LU solve of `(I − Δ + V) S = T`; independent check on [`solve_fixed_point`].
pub fn solve_direct(sys: &WeylSystem, v: &Operator, t: &Operator, gamma: &WeightFunction) -> Result<Operator> {
    Ok(solve_direct_detailed(sys, v, t, gamma)?.solution)
}

pub fn solve_direct_detailed(
    sys: &WeylSystem,
    v: &Operator,
    t: &Operator,
    gamma: &WeightFunction,
) -> Result<DirectSolution> {
    check_operator(sys, t)?;
    if gamma.group() != sys.group() {
        return Err(Error::GroupMismatch {
            left: sys.group().factors().to_vec(),
            right: gamma.group().factors().to_vec(),
        });
    }
    let l = superoperator(sys, v, gamma)?;
    let norm1 = one_norm(&l);
    let inv = l.lu().try_inverse().ok_or(Error::Singular { condition: f64::INFINITY })?;
    let condition = norm1 * one_norm(&inv);
    if condition.is_nan() || condition > MAX_CONDITION {
        return Err(Error::Singular { condition });
    }
    let n = sys.dim();
    let x = inv * DVector::from_column_slice(t.as_slice());
    Ok(DirectSolution { solution: Operator::from_column_slice(n, n, x.as_slice()), condition })
}

fn one_norm(m: &DMatrix<C64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}
