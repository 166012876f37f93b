//! Transformers (linear maps on operators) that act diagonally on transform coefficients.
//!
//! A [`DiagonalTransformer`] is stored as its symbol `σ(ξ)` and applied as
//! `T ↦ F⁻¹[σ · F(T)]`. The families used here:
//!
//! | kind            | symbol             |
//! |-----------------|--------------------|
//! | `Q(s)`          | `(1 + γ(ξ)²)^s`    |
//! | `Laplacian`     | `−γ(ξ)²`           |
//! | `Resolvent(α)`  | `1 / (α + γ(ξ)²)`  |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_space::Group;
use crate::qft::{iqft, qft_fast, PhaseFunction};
use crate::spaces::{barron_norm, barron_norm_of, WeightFunction};
use crate::weyl::WeylSystem;
use crate::{Operator, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TransformerKind {
    Q(f64),
    Laplacian,
    Resolvent(f64),
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalTransformer {
    group: Group,
    kind: TransformerKind,
    symbol: Vec<C64>,
}

impl DiagonalTransformer {
    /// `Q(s)`. Any real `s` is accepted; `Q(−s)` is the inverse of `Q(s)`.
    pub fn q(gamma: &WeightFunction, s: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::param("s", s, "finite"));
        }
        let symbol = gamma.bracket_pows(s).into_iter().map(|v| C64::new(v, 0.0)).collect();
        Ok(Self { group: gamma.group().clone(), kind: TransformerKind::Q(s), symbol })
    }

    pub fn laplacian(gamma: &WeightFunction) -> Self {
        let symbol = gamma.values().iter().map(|g| C64::new(-g * g, 0.0)).collect();
        Self { group: gamma.group().clone(), kind: TransformerKind::Laplacian, symbol }
    }

    /// `(α I − Δ)⁻¹` for `α > 0`.
    pub fn resolvent(gamma: &WeightFunction, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::param("alpha", alpha, "a finite real > 0"));
        }
        let symbol = gamma.values().iter().map(|g| C64::new(1.0 / (alpha + g * g), 0.0)).collect();
        Ok(Self { group: gamma.group().clone(), kind: TransformerKind::Resolvent(alpha), symbol })
    }

    pub fn custom(group: Group, symbol: Vec<C64>) -> Result<Self> {
        if symbol.len() != group.phase_card() {
            return Err(Error::LengthMismatch {
                what: "transformer symbol",
                expected: group.phase_card(),
                got: symbol.len(),
            });
        }
        Ok(Self { group, kind: TransformerKind::Custom, symbol })
    }

    pub fn kind(&self) -> TransformerKind {
        self.kind
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn symbol(&self) -> &[C64] {
        &self.symbol
    }

    /// The transformer with symbol `1/σ`. Fails if `σ` vanishes anywhere.
    pub fn reciprocal(&self) -> Result<Self> {
        if let Some(i) = self.symbol.iter().position(|v| *v == C64::new(0.0, 0.0)) {
            return Err(Error::SingularSymbol(i));
        }
        let symbol = self.symbol.iter().map(|v| v.inv()).collect();
        let kind = match self.kind {
            TransformerKind::Q(s) => TransformerKind::Q(-s),
            _ => TransformerKind::Custom,
        };
        Ok(Self { group: self.group.clone(), kind, symbol })
    }

    pub fn apply_coefficients(&self, f: &PhaseFunction) -> Result<PhaseFunction> {
        self.check_group(f.group())?;
        Ok(f.multiply_symbol(&self.symbol))
    }

    pub fn apply(&self, sys: &WeylSystem, t: &Operator) -> Result<Operator> {
        self.check_group(sys.group())?;
        iqft(sys, &self.apply_coefficients(&qft_fast(sys, t)?)?)
    }

    fn check_group(&self, g: &Group) -> Result<()> {
        if *g != self.group {
            return Err(Error::GroupMismatch { left: self.group.factors().to_vec(), right: g.factors().to_vec() });
        }
        Ok(())
    }
}

/// Both sides of `‖Q(s)T‖_{B⁰} = ‖T‖_{B^{2s}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometryPair {
    pub lhs: f64,
    pub rhs: f64,
}

impl IsometryPair {
    /// `|lhs − rhs| ≤ 1e−10 · max(1, rhs)`.
    pub fn holds(&self) -> bool {
        (self.lhs - self.rhs).abs() <= 1e-10 * self.rhs.max(1.0)
    }
}

pub fn q_isometry_pair(sys: &WeylSystem, t: &Operator, s: f64, gamma: &WeightFunction) -> Result<IsometryPair> {
    if s.is_nan() || s < 0.0 {
        return Err(Error::param("s", s, ">= 0"));
    }
    let q = DiagonalTransformer::q(gamma, s)?;
    let lhs = barron_norm(sys, &q.apply(sys, t)?, 0.0, gamma)?;
    let rhs = barron_norm(sys, t, 2.0 * s, gamma)?;
    Ok(IsometryPair { lhs, rhs })
}

/// `(α I − Δ)⁻¹ T`, which satisfies `‖·‖_{B^s} ≤ ‖T‖_{B^s} / α` for every `s ≥ 0`.
pub fn resolvent_apply(sys: &WeylSystem, t: &Operator, alpha: f64, gamma: &WeightFunction) -> Result<Operator> {
    DiagonalTransformer::resolvent(gamma, alpha)?.apply(sys, t)
}

/// `Σ (1/N)(−γ²)|F(T)|²`, the Laplacian's quadratic form on coefficients. Never positive.
pub fn laplacian_form(sys: &WeylSystem, t: &Operator, gamma: &WeightFunction) -> Result<f64> {
    let f = qft_fast(sys, t)?;
    let haar = sys.group().haar_weight();
    Ok(crate::numeric::compensated_sum(
        f.values().iter().zip(gamma.values()).map(|(v, g)| -haar * g * g * v.norm_sqr()),
    ))
}

/// Ratio `‖R_α T‖_{B^s} / (‖T‖_{B^s} / α)`; at most 1.
pub fn resolvent_bound_ratio(
    sys: &WeylSystem,
    t: &Operator,
    alpha: f64,
    s: f64,
    gamma: &WeightFunction,
) -> Result<f64> {
    let f = qft_fast(sys, t)?;
    let r = DiagonalTransformer::resolvent(gamma, alpha)?.apply_coefficients(&f)?;
    let num = barron_norm_of(&r, s, gamma)?;
    let den = barron_norm_of(&f, s, gamma)? / alpha;
    Ok(if den == 0.0 { 0.0 } else { num / den })
}
