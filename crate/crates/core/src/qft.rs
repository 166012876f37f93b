//! Quantum Fourier transform of operators and twisted convolution.
//!
//! `F(T)(ξ) = tr(T U_ξ*)`, inverted by `T = (1/N) Σ_ξ F(T)(ξ) U_ξ`. Because `U_{(a,b)}` has its
//! nonzero entries on the cyclic diagonal `row = col + a`, the transform at fixed shift `a` is
//! a discrete Fourier transform of that diagonal over the modulation index `b`. [`qft_fast`]
//! exploits this; [`qft_naive`] evaluates the trace against the explicit adjoint and serves as
//! the reference.

use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::phase_space::{Group, PhasePoint};
use crate::weyl::WeylSystem;
use crate::{Operator, C64};

/// A complex function on the dual phase space, indexed a-outer, b-inner.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFunction {
    group: Group,
    values: Vec<C64>,
}

impl PhaseFunction {
    pub fn new(group: Group, values: Vec<C64>) -> Result<Self> {
        if values.len() != group.phase_card() {
            return Err(Error::LengthMismatch {
                what: "phase function values",
                expected: group.phase_card(),
                got: values.len(),
            });
        }
        Ok(Self { group, values })
    }

    pub fn zeros(group: Group) -> Self {
        let values = vec![C64::new(0.0, 0.0); group.phase_card()];
        Self { group, values }
    }

    pub fn from_fn(group: Group, f: impl FnMut(usize) -> C64) -> Self {
        let values = (0..group.phase_card()).map(f).collect();
        Self { group, values }
    }

    /// `N·δ₀`, the unit of twisted convolution and the transform of the identity.
    pub fn delta(group: Group) -> Self {
        let mut out = Self::zeros(group);
        out.values[0] = C64::new(out.group.dim() as f64, 0.0);
        out
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn at(&self, p: &PhasePoint) -> C64 {
        self.values[self.group.index_of(p)]
    }

    /// Pointwise product with a symbol defined on the same index set.
    pub fn multiply_symbol(&self, symbol: &[C64]) -> PhaseFunction {
        debug_assert_eq!(symbol.len(), self.values.len());
        let values = self.values.iter().zip(symbol).map(|(v, s)| v * s).collect();
        PhaseFunction { group: self.group.clone(), values }
    }

    pub fn scale(&self, c: C64) -> PhaseFunction {
        PhaseFunction { group: self.group.clone(), values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn max_abs_diff(&self, other: &PhaseFunction) -> f64 {
        crate::numeric::max_abs_diff(&self.values, &other.values)
    }

    fn zip_with(&self, other: &PhaseFunction, f: impl Fn(C64, C64) -> C64) -> PhaseFunction {
        assert_eq!(self.group, other.group, "phase functions on different groups");
        let values = self.values.iter().zip(&other.values).map(|(&x, &y)| f(x, y)).collect();
        PhaseFunction { group: self.group.clone(), values }
    }
}

impl Add for &PhaseFunction {
    type Output = PhaseFunction;
    fn add(self, rhs: &PhaseFunction) -> PhaseFunction {
        self.zip_with(rhs, |x, y| x + y)
    }
}

impl Sub for &PhaseFunction {
    type Output = PhaseFunction;
    fn sub(self, rhs: &PhaseFunction) -> PhaseFunction {
        self.zip_with(rhs, |x, y| x - y)
    }
}

impl Mul<C64> for &PhaseFunction {
    type Output = PhaseFunction;
    fn mul(self, rhs: C64) -> PhaseFunction {
        self.scale(rhs)
    }
}

pub(crate) fn check_operator(sys: &WeylSystem, t: &Operator) -> Result<()> {
    let n = sys.dim();
    if t.nrows() != n || t.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, rows: t.nrows(), cols: t.ncols() });
    }
    Ok(())
}

fn check_group(sys: &WeylSystem, f: &PhaseFunction) -> Result<()> {
    if sys.group() != f.group() {
        return Err(Error::GroupMismatch {
            left: sys.group().factors().to_vec(),
            right: f.group().factors().to_vec(),
        });
    }
    Ok(())
}

/// `F(T)(ξ) = tr(T U_ξ*)` evaluated literally, one explicit adjoint per dual point.
/// `O(N⁴)`; this is the reference the fast path is checked against.
pub fn qft_naive(sys: &WeylSystem, t: &Operator) -> Result<PhaseFunction> {
    check_operator(sys, t)?;
    let n = sys.dim();
    let values = (0..sys.group().phase_card())
        .into_par_iter()
        .map(|xi| {
            let u_adj = sys.weyl_operator_at(xi).adjoint();
            // tr(T A) = Σ_{i,j} T[i,j] A[j,i]
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    acc += t[(i, j)] * u_adj[(j, i)];
                }
            }
            acc
        })
        .collect();
    PhaseFunction::new(sys.group().clone(), values)
}

/// Multidimensional DFT over the digit axes of a mixed-radix index.
struct DigitFft {
    factors: Vec<usize>,
    plans: Vec<Arc<dyn Fft<f64>>>,
}

impl DigitFft {
    fn new(group: &Group, direction: FftDirection) -> Self {
        let mut planner = FftPlanner::new();
        let factors = group.factors().to_vec();
        let plans = factors.iter().map(|&n| planner.plan_fft(n, direction)).collect();
        Self { factors, plans }
    }

    /// In-place transform of `buf` (length `N`, last axis contiguous).
    fn process(&self, buf: &mut [C64], scratch: &mut Vec<C64>) {
        let total = buf.len();
        if self.factors.len() == 1 {
            self.plans[0].process(buf);
            return;
        }
        let mut inner = total;
        for (axis, &n) in self.factors.iter().enumerate() {
            inner /= n;
            let outer = total / (n * inner);
            scratch.resize(n, C64::new(0.0, 0.0));
            for o in 0..outer {
                for i in 0..inner {
                    let base = o * n * inner + i;
                    for (k, slot) in scratch.iter_mut().enumerate() {
                        *slot = buf[base + k * inner];
                    }
                    self.plans[axis].process(scratch);
                    for (k, v) in scratch.iter().enumerate() {
                        buf[base + k * inner] = *v;
                    }
                }
            }
        }
    }
}

/// Same values as [`qft_naive`] in `O(N² log N)`: for each shift `a` the cyclic diagonal
/// `d_a(j) = T[j + a, j]` is gathered and transformed over `j`, giving every `b` at once.
/// Multi-factor groups use one FFT per digit axis.
pub fn qft_fast(sys: &WeylSystem, t: &Operator) -> Result<PhaseFunction> {
    check_operator(sys, t)?;
    let g = sys.group();
    let n = g.dim();
    let fft = DigitFft::new(g, FftDirection::Forward);
    let mut values = vec![C64::new(0.0, 0.0); g.phase_card()];
    let mut scratch = Vec::new();
    for (a, row) in values.chunks_mut(n).enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = t[(g.add_codes(j, a), j)];
        }
        fft.process(row, &mut scratch);
    }
    PhaseFunction::new(g.clone(), values)
}

/// `T = (1/N) Σ_ξ f(ξ) U_ξ`, computed diagonal by diagonal with inverse FFTs.
pub fn iqft(sys: &WeylSystem, f: &PhaseFunction) -> Result<Operator> {
    check_group(sys, f)?;
    let g = sys.group();
    let n = g.dim();
    let haar = g.haar_weight();
    let fft = DigitFft::new(g, FftDirection::Inverse);
    let mut t = Operator::zeros(n, n);
    let mut buf = vec![C64::new(0.0, 0.0); n];
    let mut scratch = Vec::new();
    for (a, row) in f.values().chunks(n).enumerate() {
        buf.copy_from_slice(row);
        fft.process(&mut buf, &mut scratch);
        for (j, v) in buf.iter().enumerate() {
            t[(g.add_codes(j, a), j)] = v * haar;
        }
    }
    Ok(t)
}

/// Literal inversion sum `(1/N) Σ_ξ f(ξ) U_ξ`; reference for [`iqft`].
pub fn iqft_naive(sys: &WeylSystem, f: &PhaseFunction) -> Result<Operator> {
    check_group(sys, f)?;
    let n = sys.dim();
    let haar = sys.group().haar_weight();
    let mut t = Operator::zeros(n, n);
    for (xi, &v) in f.values().iter().enumerate() {
        if v != C64::new(0.0, 0.0) {
            t += sys.weyl_operator_at(xi) * (v * haar);
        }
    }
    Ok(t)
}

/// `(f ∗_m g)(ξ) = (1/N) Σ_η f(ξ − η) g(η) m(ξ − η, η)`.
pub fn twisted_convolution(sys: &WeylSystem, f: &PhaseFunction, g: &PhaseFunction) -> Result<PhaseFunction> {
    check_group(sys, f)?;
    check_group(sys, g)?;
    let grp = sys.group();
    let haar = grp.haar_weight();
    let (fv, gv) = (f.values(), g.values());
    let values = (0..grp.phase_card())
        .into_par_iter()
        .map(|xi| {
            let mut acc = C64::new(0.0, 0.0);
            for (eta, &g_eta) in gv.iter().enumerate() {
                if g_eta == C64::new(0.0, 0.0) {
                    continue;
                }
                let d = grp.sub_index(xi, eta);
                acc += fv[d] * g_eta * sys.multiplier_index(d, eta);
            }
            acc * haar
        })
        .collect();
    PhaseFunction::new(grp.clone(), values)
}
