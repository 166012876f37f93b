//! Clock-and-shift Weyl operators on `H = C^N`.
//!
//! For a single factor `Z_n`, `X e_j = e_{j+1}` and `Z e_j = ω^j e_j` with `ω = exp(2πi/n)`.
//! A phase point `(a, b)` maps to `U_{(a,b)} = X^a Z^b`, tensored over the factors in group
//! order. With this ordering `Z^b X^c = ω^{bc} X^c Z^b`, which fixes the multiplier
//! `m((a,b),(c,d)) = Π ωᵢ^{bᵢcᵢ}` and the symplectic form `σ = Π ωᵢ^{bᵢcᵢ − aᵢdᵢ}`.

use crate::numeric::root_of_unity;
use crate::phase_space::{Group, PhasePoint};
use crate::{Operator, C64};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylSystem {
    group: Group,
}

impl WeylSystem {
    /// Operator ordering tag: `U_{(a,b)} = X^a Z^b`.
    pub const CONVENTION: &'static str = "XaZb";

    pub fn new(group: Group) -> Self {
        Self { group }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    /// Primitive root `ωᵢ = exp(2πi/nᵢ)` of factor `i`.
    pub fn omega(&self, factor: usize) -> C64 {
        root_of_unity(1, self.group.factors()[factor])
    }

    /// Dense matrix of `U_λ`, assembled as a phased permutation: column `j` has a single
    /// nonzero entry `Π ωᵢ^{bᵢjᵢ}` in row `j + a`.
    pub fn weyl_operator(&self, p: &PhasePoint) -> Operator {
        debug_assert!(self.group.check_point(p).is_ok());
        let g = &self.group;
        let n = g.dim();
        let a_code = g.encode_tuple(&p.a);
        let mut u = Operator::zeros(n, n);
        for col in 0..n {
            let row = g.add_codes(col, a_code);
            u[(row, col)] = self.column_phase(&p.b, col);
        }
        u
    }

    pub fn weyl_operator_at(&self, index: usize) -> Operator {
        self.weyl_operator(&self.group.point_at(index))
    }

    /// `Π ωᵢ^{bᵢjᵢ}` where `j` is the basis index `code`.
    fn column_phase(&self, b: &[usize], mut code: usize) -> C64 {
        let mut phase = C64::new(1.0, 0.0);
        for (&bi, &ni) in b.iter().zip(self.group.factors()).rev() {
            let ji = code % ni;
            code /= ni;
            if bi != 0 && ji != 0 {
                phase *= root_of_unity(bi * ji, ni);
            }
        }
        phase
    }

    /// `m(λ, μ)` with `U_λ U_μ = m(λ, μ) U_{λ+μ}`.
    pub fn multiplier(&self, l: &PhasePoint, m: &PhasePoint) -> C64 {
        let mut phase = C64::new(1.0, 0.0);
        for ((&b, &c), &n) in l.b.iter().zip(&m.a).zip(self.group.factors()) {
            phase *= root_of_unity(b * c, n);
        }
        phase
    }

    /// `m(λ, μ)` from enumeration indices.
    pub fn multiplier_index(&self, l: usize, m: usize) -> C64 {
        let n = self.group.dim();
        self.column_phase_pair(l % n, m / n)
    }

    /// `Π ωᵢ^{bᵢcᵢ}` from the codes of `b` and `c`.
    fn column_phase_pair(&self, mut b_code: usize, mut c_code: usize) -> C64 {
        let mut phase = C64::new(1.0, 0.0);
        for &ni in self.group.factors().iter().rev() {
            let (bi, ci) = (b_code % ni, c_code % ni);
            b_code /= ni;
            c_code /= ni;
            if bi != 0 && ci != 0 {
                phase *= root_of_unity(bi * ci, ni);
            }
        }
        phase
    }

    /// `σ(λ, μ) = m(λ, μ) / m(μ, λ)`.
    pub fn symplectic(&self, l: &PhasePoint, m: &PhasePoint) -> C64 {
        let mut phase = C64::new(1.0, 0.0);
        for (i, &n) in self.group.factors().iter().enumerate() {
            let plus = l.b[i] * m.a[i] % n;
            let minus = l.a[i] * m.b[i] % n;
            phase *= root_of_unity(plus + n - minus, n);
        }
        phase
    }
}
