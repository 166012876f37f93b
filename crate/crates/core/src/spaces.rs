//! Weight functions, spectral Barron and quantum Sobolev norms, Schatten norms.
//!
//! With `⟨ξ⟩_γ = (1 + γ(ξ)²)^{1/2}` and the Haar weight `1/N`:
//!
//! - `‖T‖_{B^s} = (1/N) Σ_ξ ⟨ξ⟩_γ^s |F(T)(ξ)|`
//! - `‖T‖_{H^s} = ((1/N) Σ_ξ ⟨ξ⟩_γ^{2s} |F(T)(ξ)|²)^{1/2}`
//!
//! All reductions use compensated summation.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;
use crate::phase_space::{symmetric_residue, Group, PhasePoint};
use crate::qft::{qft_fast, PhaseFunction};
use crate::weyl::WeylSystem;
use crate::Operator;

/// Largest dimension for which the `O(N⁴)` Peetre scan runs without being forced.
pub const PEETRE_SCAN_LIMIT: usize = 32;

/// Singular values below this fraction of the largest are treated as zero.
pub const RANK_THRESHOLD: f64 = 1e-12;

/// A nonnegative weight `γ` on the dual phase space.
///
/// `γ(0) = 0` is allowed; every formula uses `1 + γ²`.
#[derive(Debug, Clone)]
pub struct WeightFunction {
    group: Group,
    values: Vec<f64>,
    peetre: OnceLock<f64>,
}

impl PartialEq for WeightFunction {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.values == other.values
    }
}

impl WeightFunction {
    pub fn new(group: Group, values: Vec<f64>) -> Result<Self> {
        if values.len() != group.phase_card() {
            return Err(Error::LengthMismatch {
                what: "weight values",
                expected: group.phase_card(),
                got: values.len(),
            });
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidWeight(format!("value {v} at index {i} is not a finite nonnegative real")));
        }
        Ok(Self { group, values, peetre: OnceLock::new() })
    }

    pub fn from_fn(group: Group, mut f: impl FnMut(&PhasePoint) -> f64) -> Result<Self> {
        let values = group.points().map(|p| f(&p)).collect();
        Self::new(group, values)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(1 + γ(ξ)²)^e` at dual index `xi`.
    pub fn bracket_pow(&self, xi: usize, e: f64) -> f64 {
        let g = self.values[xi];
        (1.0 + g * g).powf(e)
    }

    /// The symbol `(1 + γ²)^e` over all dual points.
    pub fn bracket_pows(&self, e: f64) -> Vec<f64> {
        (0..self.values.len()).map(|i| self.bracket_pow(i, e)).collect()
    }

    /// Smallest `C` with `1+γ(ξ)² ≤ C (1+γ(ξ−η)²)(1+γ(η)²)` for all pairs. Refuses above
    /// [`PEETRE_SCAN_LIMIT`]; see [`WeightFunction::peetre_constant_forced`].
    pub fn peetre_constant(&self) -> Result<f64> {
        let dim = self.group.dim();
        if dim > PEETRE_SCAN_LIMIT {
            return Err(Error::TooLarge {
                what: "peetre scan",
                dim,
                limit: PEETRE_SCAN_LIMIT,
                cost: (self.group.phase_card() as u64).pow(2),
            });
        }
        Ok(self.peetre_constant_forced())
    }

    /// Exhaustive Peetre scan with no size gate. The result is cached.
    pub fn peetre_constant_forced(&self) -> f64 {
        *self.peetre.get_or_init(|| self.scan_peetre())
    }

    /// The cached constant, if a scan has already run.
    pub fn recorded_peetre_constant(&self) -> Option<f64> {
        self.peetre.get().copied()
    }

    fn scan_peetre(&self) -> f64 {
        let w: Vec<f64> = self.values.iter().map(|g| 1.0 + g * g).collect();
        let card = w.len();
        let mut worst = 0.0f64;
        for xi in 0..card {
            for eta in 0..card {
                let d = self.group.sub_index(xi, eta);
                worst = worst.max(w[xi] / (w[d] * w[eta]));
            }
        }
        worst
    }

    /// Peetre gate for order `s`.
    pub fn peetre_check(&self, s: f64) -> Result<PeetreCheck> {
        Ok(PeetreCheck::from_constant(self.peetre_constant()?, s))
    }

    pub fn peetre_check_forced(&self, s: f64) -> PeetreCheck {
        PeetreCheck::from_constant(self.peetre_constant_forced(), s)
    }
}

/// Outcome of the Peetre scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeetreCheck {
    pub constant: f64,
    /// `constant ≤ 2`, or `s = 0` where the weighted inequality is trivial.
    pub satisfied: bool,
}

impl PeetreCheck {
    fn from_constant(constant: f64, s: f64) -> Self {
        Self { constant, satisfied: s == 0.0 || constant <= 2.0 }
    }
}

/// `γ(a, b) = (Σᵢ r(aᵢ)² + r(bᵢ)²)^{1/2}` with `r` the symmetric residue; `γ(0) = 0`.
pub fn gamma_euclid(group: &Group) -> WeightFunction {
    let values = group
        .points()
        .map(|p| {
            let sq: i64 = p
                .a
                .iter()
                .chain(&p.b)
                .zip(group.factors().iter().chain(group.factors()))
                .map(|(&c, &n)| symmetric_residue(c, n).pow(2))
                .sum();
            (sq as f64).sqrt()
        })
        .collect();
    WeightFunction { group: group.clone(), values, peetre: OnceLock::new() }
}

fn check_order(s: f64) -> Result<()> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::param("s", s, "a finite real >= 0"));
    }
    Ok(())
}

fn check_weight(f: &PhaseFunction, gamma: &WeightFunction) -> Result<()> {
    if f.group() != gamma.group() {
        return Err(Error::GroupMismatch {
            left: f.group().factors().to_vec(),
            right: gamma.group().factors().to_vec(),
        });
    }
    Ok(())
}

/// `‖T‖_{B^s_γ}`.
pub fn barron_norm(sys: &WeylSystem, t: &Operator, s: f64, gamma: &WeightFunction) -> Result<f64> {
    check_order(s)?;
    barron_norm_of(&qft_fast(sys, t)?, s, gamma)
}

/// Barron norm from already computed transform coefficients.
pub fn barron_norm_of(f: &PhaseFunction, s: f64, gamma: &WeightFunction) -> Result<f64> {
    check_order(s)?;
    check_weight(f, gamma)?;
    let haar = f.group().haar_weight();
    let sum = if s == 0.0 {
        compensated_sum(f.values().iter().map(|v| v.norm()))
    } else {
        compensated_sum(f.values().iter().enumerate().map(|(i, v)| gamma.bracket_pow(i, s / 2.0) * v.norm()))
    };
    Ok(haar * sum)
}

/// `‖·‖_{B⁰}` of transform coefficients: the Haar-weighted L¹ norm, independent of `γ`.
pub fn b0_norm_of(f: &PhaseFunction) -> f64 {
    f.group().haar_weight() * compensated_sum(f.values().iter().map(|v| v.norm()))
}

/// `‖T‖_{H^s_γ}`.
pub fn sobolev_norm(sys: &WeylSystem, t: &Operator, s: f64, gamma: &WeightFunction) -> Result<f64> {
    check_order(s)?;
    sobolev_norm_of(&qft_fast(sys, t)?, s, gamma)
}

pub fn sobolev_norm_of(f: &PhaseFunction, s: f64, gamma: &WeightFunction) -> Result<f64> {
    check_order(s)?;
    check_weight(f, gamma)?;
    let haar = f.group().haar_weight();
    let sum = compensated_sum(f.values().iter().enumerate().map(|(i, v)| gamma.bracket_pow(i, s) * v.norm_sqr()));
    Ok((haar * sum).sqrt())
}

/// `‖(1+γ²)^{(s−t)/2}‖_{L²}`, the constant of the embedding `H^t ↪ B^s` for `t > s ≥ 0`.
pub fn sobolev_embedding_constant(gamma: &WeightFunction, s: f64, t: f64) -> Result<f64> {
    check_order(s)?;
    if !(t > s && t.is_finite()) {
        return Err(Error::param("t", t, "finite and strictly greater than s"));
    }
    let haar = gamma.group().haar_weight();
    let sum = compensated_sum((0..gamma.values().len()).map(|i| gamma.bracket_pow(i, s - t)));
    Ok((haar * sum).sqrt())
}

/// Singular values in nonincreasing order, with values below `RANK_THRESHOLD · σ_max` zeroed.
pub fn singular_values(t: &Operator) -> Vec<f64> {
    if t.is_empty() {
        return Vec::new();
    }
    let mut sv: Vec<f64> = t.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let cutoff = sv[0] * RANK_THRESHOLD;
    for v in &mut sv {
        if *v < cutoff {
            *v = 0.0;
        }
    }
    sv
}

/// `‖T‖_{S^p} = (Σ σᵢ^p)^{1/p}` for `p ≥ 1`; `p = ∞` gives the operator norm.
pub fn schatten_norm(t: &Operator, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::param("p", p, ">= 1"));
    }
    if p.is_infinite() {
        return Ok(operator_norm(t));
    }
    let sv = singular_values(t);
    let max = sv.first().copied().unwrap_or(0.0);
    if max == 0.0 {
        return Ok(0.0);
    }
    // scale by σ_max so large p does not overflow
    let sum = compensated_sum(sv.iter().map(|v| (v / max).powf(p)));
    Ok(max * sum.powf(1.0 / p))
}

pub fn operator_norm(t: &Operator) -> f64 {
    singular_values(t).first().copied().unwrap_or(0.0)
}

/// Norms of one operator at one order `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub s: f64,
    pub barron: f64,
    pub sobolev: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub schatten: Option<SchattenValue>,
    pub op_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchattenValue {
    pub p: f64,
    pub value: f64,
}

impl NormReport {
    pub fn compute(
        sys: &WeylSystem,
        t: &Operator,
        s: f64,
        gamma: &WeightFunction,
        schatten_p: Option<f64>,
    ) -> Result<Self> {
        check_order(s)?;
        let f = qft_fast(sys, t)?;
        let schatten = schatten_p.map(|p| schatten_norm(t, p).map(|value| SchattenValue { p, value })).transpose()?;
        Ok(Self {
            s,
            barron: barron_norm_of(&f, s, gamma)?,
            sobolev: sobolev_norm_of(&f, s, gamma)?,
            schatten,
            op_norm: operator_norm(t),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{random_operator, Distribution, RandomSpec};
    use crate::C64;

    fn setup(n: usize) -> (WeylSystem, WeightFunction) {
        let g = Group::cyclic(n).unwrap();
        (WeylSystem::new(g.clone()), gamma_euclid(&g))
    }

    fn projector(n: usize) -> Operator {
        let mut p = Operator::zeros(n, n);
        p[(0, 0)] = C64::new(1.0, 0.0);
        p
    }

    fn rand_op(n: usize, seed: u64) -> Operator {
        random_operator(&RandomSpec::new(seed, &[n], Distribution::ComplexGaussian)).unwrap()
    }

    /// Brute-force Barron norm straight from the trace definition.
    fn barron_brute(sys: &WeylSystem, t: &Operator, s: f64, gamma: &WeightFunction) -> f64 {
        let g = sys.group();
        (0..g.phase_card())
            .map(|xi| {
                let tr = (t * sys.weyl_operator_at(xi).adjoint()).trace();
                let w = (1.0 + gamma.values()[xi].powi(2)).powf(s / 2.0);
                g.haar_weight() * w * tr.norm()
            })
            .sum()
    }

    #[test]
    fn gamma_euclid_examples() {
        let g2 = Group::cyclic(2).unwrap();
        let w = gamma_euclid(&g2);
        assert_eq!(w.values()[g2.index_of(&g2.zero())], 0.0);
        assert_eq!(w.values()[g2.index_of(&g2.point(&[0], &[1]).unwrap())], 1.0);
        let g4 = Group::cyclic(4).unwrap();
        let w = gamma_euclid(&g4);
        assert_eq!(w.values()[g4.index_of(&g4.point(&[3], &[3]).unwrap())], 2f64.sqrt());
        assert_eq!(w.values()[g4.index_of(&g4.point(&[2], &[0]).unwrap())], 2.0);
    }

    #[test]
    fn weight_validation() {
        let g = Group::cyclic(2).unwrap();
        assert!(WeightFunction::new(g.clone(), vec![0.0, 1.0, 1.0]).is_err());
        assert!(WeightFunction::new(g.clone(), vec![0.0, 1.0, -1.0, 2.0]).is_err());
        assert!(WeightFunction::new(g.clone(), vec![0.0, 1.0, f64::NAN, 2.0]).is_err());
        assert!(WeightFunction::new(g, vec![0.0, 1.0, 1.0, 2.0]).is_ok());
    }

    #[test]
    fn barron_norm_examples() {
        let (s2, w2) = setup(2);
        for s in [0.0, 0.5, 1.0, 3.0] {
            let b = barron_norm(&s2, &Operator::identity(2, 2), s, &w2).unwrap();
            assert!((b - 1.0).abs() < 1e-15);
        }
        let (s4, w4) = setup(4);
        for eta in 0..16 {
            let b = barron_norm(&s4, &s4.weyl_operator_at(eta), 0.0, &w4).unwrap();
            assert!((b - 1.0).abs() < 1e-12);
        }
        let p = projector(2);
        let b0 = barron_norm(&s2, &p, 0.0, &w2).unwrap();
        let b1 = barron_norm(&s2, &p, 1.0, &w2).unwrap();
        assert!((b0 - 1.0).abs() < 1e-15);
        assert!((b1 - (1.0 + 2f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!((b1 - barron_brute(&s2, &p, 1.0, &w2)).abs() < 1e-15);
        assert!((b1 - 1.207_106_781_186_547_5).abs() < 1e-15);
    }

    #[test]
    fn barron_norm_matches_brute_force() {
        for n in [3, 4, 6] {
            let (sys, w) = setup(n);
            for seed in 0..5 {
                let t = rand_op(n, seed);
                for s in [0.0, 0.5, 2.0] {
                    let fast = barron_norm(&sys, &t, s, &w).unwrap();
                    let brute = barron_brute(&sys, &t, s, &w);
                    assert!((fast - brute).abs() <= 1e-10 * brute.max(1.0));
                }
            }
        }
    }

    #[test]
    fn negative_order_rejected() {
        let (sys, w) = setup(2);
        let id = Operator::identity(2, 2);
        assert!(matches!(barron_norm(&sys, &id, -0.5, &w), Err(Error::InvalidParameter { .. })));
        assert!(matches!(sobolev_norm(&sys, &id, -1.0, &w), Err(Error::InvalidParameter { .. })));
        assert!(barron_norm(&sys, &id, f64::NAN, &w).is_err());
    }

    #[test]
    fn weight_group_mismatch_rejected() {
        let (sys, _) = setup(2);
        let w3 = gamma_euclid(&Group::cyclic(3).unwrap());
        assert!(matches!(
            barron_norm(&sys, &Operator::identity(2, 2), 0.0, &w3),
            Err(Error::GroupMismatch { .. })
        ));
    }

    #[test]
    fn sobolev_norm_examples() {
        let (s2, w2) = setup(2);
        for s in [0.0, 1.0, 2.5] {
            let h = sobolev_norm(&s2, &Operator::identity(2, 2), s, &w2).unwrap();
            assert!((h - 2f64.sqrt()).abs() < 1e-15);
        }
        assert_eq!(sobolev_norm(&s2, &Operator::zeros(2, 2), 1.0, &w2).unwrap(), 0.0);
        let (s5, w5) = setup(5);
        let t = rand_op(5, 3);
        let hs = t.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((sobolev_norm(&s5, &t, 0.0, &w5).unwrap() - hs).abs() < 1e-12 * hs);
    }

    #[test]
    fn schatten_examples() {
        let (s4, _) = setup(4);
        let u = s4.weyl_operator_at(7);
        assert!((schatten_norm(&u, 2.0).unwrap() - 2.0).abs() < 1e-12);
        let d = Operator::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(3.0, 0.0),
            C64::new(0.0, 4.0),
        ]));
        assert!((schatten_norm(&d, 1.0).unwrap() - 7.0).abs() < 1e-12);
        assert!((schatten_norm(&d, 2.0).unwrap() - 5.0).abs() < 1e-12);
        assert!((operator_norm(&d) - 4.0).abs() < 1e-12);
        assert!((schatten_norm(&d, f64::INFINITY).unwrap() - 4.0).abs() < 1e-12);
        assert!(matches!(schatten_norm(&d, 0.5), Err(Error::InvalidParameter { .. })));
        assert_eq!(schatten_norm(&Operator::zeros(3, 3), 1.0).unwrap(), 0.0);
    }

    #[test]
    fn schatten_monotone_in_p() {
        for seed in 0..20 {
            let t = rand_op(6, seed);
            let op = operator_norm(&t);
            let s2 = schatten_norm(&t, 2.0).unwrap();
            let s1 = schatten_norm(&t, 1.0).unwrap();
            assert!(op <= s2 * (1.0 + 1e-12) && s2 <= s1 * (1.0 + 1e-12));
        }
    }

    #[test]
    fn rank_one_has_one_singular_value() {
        let sv = singular_values(&projector(4));
        assert_eq!(sv.iter().filter(|&&v| v > 0.0).count(), 1);
    }

    #[test]
    fn peetre_diagonal_pairs_bounded_by_one() {
        let (_, w) = setup(5);
        let g = w.group().clone();
        for xi in 0..g.phase_card() {
            let d = g.sub_index(xi, xi);
            assert_eq!(d, 0);
            let ratio = w.bracket_pow(xi, 1.0) / (w.bracket_pow(d, 1.0) * w.bracket_pow(xi, 1.0));
            assert!(ratio <= 1.0);
        }
    }

    #[test]
    fn peetre_euclid_passes_and_adversarial_fails() {
        for n in 2..=8 {
            let (_, w) = setup(n);
            let check = w.peetre_check(1.0).unwrap();
            assert!(check.satisfied && check.constant <= 2.0, "n={n}: {}", check.constant);
            assert_eq!(w.recorded_peetre_constant(), Some(check.constant));
            assert_eq!(w.peetre_constant().unwrap(), check.constant);
        }
        let g = Group::cyclic(3).unwrap();
        let bad = WeightFunction::from_fn(g, |p| if p.a == [0] && p.b == [0] { 1e3 } else { 0.0 }).unwrap();
        let check = bad.peetre_check(1.0).unwrap();
        assert!(!check.satisfied);
        assert!(check.constant > 1e5);
        assert!(bad.peetre_check(0.0).unwrap().satisfied);
    }

    #[test]
    fn peetre_scan_is_gated() {
        let w = gamma_euclid(&Group::cyclic(33).unwrap());
        assert!(matches!(w.peetre_constant(), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn sobolev_constant_validation() {
        let (_, w) = setup(3);
        assert!(sobolev_embedding_constant(&w, 1.0, 1.0).is_err());
        let k = sobolev_embedding_constant(&w, 0.0, 1.0).unwrap();
        assert!(k > 0.0 && k.is_finite());
    }

    #[test]
    fn norm_report_fields() {
        let (s2, w2) = setup(2);
        let r = NormReport::compute(&s2, &projector(2), 1.0, &w2, Some(2.0)).unwrap();
        assert!((r.barron - 1.207_106_781_186_547_5).abs() < 1e-15);
        assert!((r.op_norm - 1.0).abs() < 1e-12);
        assert_eq!(r.schatten.unwrap().p, 2.0);
        let r0 = NormReport::compute(&s2, &projector(2), 0.0, &w2, None).unwrap();
        assert!(r0.barron >= r0.op_norm);
    }
}
