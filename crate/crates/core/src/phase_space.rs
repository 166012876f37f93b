//! Finite abelian groups `G = Z_{n₁} × … × Z_{n_k}` and the doubled phase space `Λ = G × Ĝ`.
//!
//! Characters of `G` are identified with elements of `G` itself through the symplectic form
//! of the Weyl system, so dual phase-space points are stored as [`PhasePoint`]s too.
//!
//! Enumeration order: a tuple `(t₁,…,t_k)` is encoded in mixed radix with the first factor
//! most significant, and a phase point `(a, b)` has index `code(a)·N + code(b)`
//! (a-part outer, b-part inner).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Group factor orders are at least 2; nothing else is assumed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Group {
    factors: Vec<usize>,
    dim: usize,
}

impl Group {
    /// Builds `Z_{n₁} × … × Z_{n_k}`. Rejects an empty list and any factor below 2.
    pub fn new(factors: &[usize]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidGroup("at least one cyclic factor is required".into()));
        }
        if let Some(&bad) = factors.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidGroup(format!("factor order {bad} is below 2")));
        }
        let dim = factors
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .filter(|d| d.checked_mul(*d).is_some())
            .ok_or_else(|| Error::InvalidGroup(format!("dimension of {factors:?} overflows")))?;
        Ok(Self { factors: factors.to_vec(), dim })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(&[n])
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    /// True when the group is a single cyclic factor.
    pub fn is_cyclic(&self) -> bool {
        self.factors.len() == 1
    }

    /// `N = Π nᵢ`, the Hilbert space dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of phase-space points, `N²`.
    pub fn phase_card(&self) -> usize {
        self.dim * self.dim
    }

    /// Haar weight of a single dual point, `1/N`.
    pub fn haar_weight(&self) -> f64 {
        1.0 / self.dim as f64
    }

    pub fn zero(&self) -> PhasePoint {
        PhasePoint { a: vec![0; self.factors.len()], b: vec![0; self.factors.len()] }
    }

    /// Validates and wraps a point. Components must already be reduced.
    pub fn point(&self, a: &[usize], b: &[usize]) -> Result<PhasePoint> {
        let p = PhasePoint { a: a.to_vec(), b: b.to_vec() };
        self.check_point(&p)?;
        Ok(p)
    }

    pub fn check_point(&self, p: &PhasePoint) -> Result<()> {
        let k = self.factors.len();
        if p.a.len() != k || p.b.len() != k {
            return Err(Error::InvalidPoint(format!(
                "expected {k} components per part, got a:{} b:{}",
                p.a.len(),
                p.b.len()
            )));
        }
        for ((&x, &y), &n) in p.a.iter().zip(&p.b).zip(&self.factors) {
            if x >= n || y >= n {
                return Err(Error::InvalidPoint(format!("component out of range for Z_{n}: {p:?}")));
            }
        }
        Ok(())
    }

    pub fn add(&self, l: &PhasePoint, m: &PhasePoint) -> PhasePoint {
        let zip = |x: &[usize], y: &[usize]| -> Vec<usize> {
            x.iter().zip(y).zip(&self.factors).map(|((&u, &v), &n)| (u + v) % n).collect()
        };
        PhasePoint { a: zip(&l.a, &m.a), b: zip(&l.b, &m.b) }
    }

    pub fn neg(&self, l: &PhasePoint) -> PhasePoint {
        let flip = |x: &[usize]| -> Vec<usize> {
            x.iter().zip(&self.factors).map(|(&u, &n)| (n - u) % n).collect()
        };
        PhasePoint { a: flip(&l.a), b: flip(&l.b) }
    }

    pub fn sub(&self, l: &PhasePoint, m: &PhasePoint) -> PhasePoint {
        self.add(l, &self.neg(m))
    }

    /// Mixed-radix code of a tuple, first factor most significant.
    pub fn encode_tuple(&self, t: &[usize]) -> usize {
        t.iter().zip(&self.factors).fold(0, |acc, (&x, &n)| acc * n + x)
    }

    pub fn decode_tuple(&self, mut code: usize) -> Vec<usize> {
        let mut t = vec![0; self.factors.len()];
        for (slot, &n) in t.iter_mut().zip(&self.factors).rev() {
            *slot = code % n;
            code /= n;
        }
        t
    }

    /// Position of `p` in the a-outer, b-inner enumeration.
    pub fn index_of(&self, p: &PhasePoint) -> usize {
        self.encode_tuple(&p.a) * self.dim + self.encode_tuple(&p.b)
    }

    pub fn point_at(&self, index: usize) -> PhasePoint {
        debug_assert!(index < self.phase_card());
        PhasePoint {
            a: self.decode_tuple(index / self.dim),
            b: self.decode_tuple(index % self.dim),
        }
    }

    /// All phase points in enumeration order.
    pub fn points(&self) -> impl Iterator<Item = PhasePoint> + '_ {
        (0..self.phase_card()).map(|i| self.point_at(i))
    }

    /// Digitwise `x + y` on tuple codes.
    pub fn add_codes(&self, x: usize, y: usize) -> usize {
        self.combine_codes(x, y, |u, v, n| (u + v) % n)
    }

    /// Digitwise `x − y` on tuple codes.
    pub fn sub_codes(&self, x: usize, y: usize) -> usize {
        self.combine_codes(x, y, |u, v, n| (u + n - v) % n)
    }

    fn combine_codes(&self, mut x: usize, mut y: usize, f: impl Fn(usize, usize, usize) -> usize) -> usize {
        let mut out = 0;
        let mut stride = 1;
        for &n in self.factors.iter().rev() {
            out += f(x % n, y % n, n) * stride;
            x /= n;
            y /= n;
            stride *= n;
        }
        out
    }

    /// Index of `λ − μ` given the indices of `λ` and `μ`, without allocating.
    pub fn sub_index(&self, l: usize, m: usize) -> usize {
        let n = self.dim;
        self.sub_codes(l / n, m / n) * n + self.sub_codes(l % n, m % n)
    }

    /// Index of `λ + μ` given the indices of `λ` and `μ`.
    pub fn add_index(&self, l: usize, m: usize) -> usize {
        let n = self.dim;
        self.add_codes(l / n, m / n) * n + self.add_codes(l % n, m % n)
    }
}

impl TryFrom<Vec<usize>> for Group {
    type Error = Error;

    fn try_from(factors: Vec<usize>) -> Result<Self> {
        Group::new(&factors)
    }
}

impl From<Group> for Vec<usize> {
    fn from(g: Group) -> Self {
        g.factors
    }
}

/// A point `λ = (a, b)` of `G × Ĝ`; `a` is the shift part, `b` the modulation part.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhasePoint {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

/// Representative of `c mod n` in `[−⌊n/2⌋, ⌈n/2⌉−1]`; its magnitude is the circular distance to 0.
pub fn symmetric_residue(c: usize, n: usize) -> i64 {
    debug_assert!(n >= 1);
    let c = (c % n) as i64;
    let n = n as i64;
    if c >= n - n / 2 {
        c - n
    } else {
        c
    }
}
