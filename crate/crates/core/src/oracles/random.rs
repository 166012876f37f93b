use serde::{Deserialize, Serialize};

use super::rng::SplitMix64;
use crate::error::{Error, Result};
use crate::phase_space::Group;
use crate::qft::{qft_fast, PhaseFunction};
use crate::spaces::b0_norm_of;
use crate::weyl::WeylSystem;
use crate::{Operator, C64};

const MAX_DRAW_ATTEMPTS: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    /// i.i.d. entries `(x + iy)/√2`, `x, y ~ N(0, 1)`, filled row-major.
    ComplexGaussian,
    /// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of `R`'s
    /// diagonal moved into `Q`.
    RandomUnitary,
    /// `u v*` with complex Gaussian `u` then `v`.
    RankOne,
    /// `(A + A*)/2` for complex Gaussian `A`.
    Hermitian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub seed: u64,
    pub factors: Vec<usize>,
    pub distribution: Distribution,
    /// Rescale the draw so that `‖·‖_{B⁰}` equals this value.
    pub target_b0_norm: Option<f64>,
}

impl RandomSpec {
    pub fn new(seed: u64, factors: &[usize], distribution: Distribution) -> Self {
        Self { seed, factors: factors.to_vec(), distribution, target_b0_norm: None }
    }

    pub fn with_b0_norm(mut self, target: f64) -> Self {
        self.target_b0_norm = Some(target);
        self
    }
}

fn gaussian_vec(rng: &mut SplitMix64, len: usize) -> Vec<C64> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    (0..len)
        .map(|_| {
            let (x, y) = rng.next_gaussian_pair();
            C64::new(x * scale, y * scale)
        })
        .collect()
}

fn gaussian_matrix(rng: &mut SplitMix64, n: usize) -> Operator {
    Operator::from_row_slice(n, n, &gaussian_vec(rng, n * n))
}

fn draw(rng: &mut SplitMix64, n: usize, dist: Distribution) -> Operator {
    match dist {
        Distribution::ComplexGaussian => gaussian_matrix(rng, n),
        Distribution::Hermitian => {
            let a = gaussian_matrix(rng, n);
            (&a + a.adjoint()) * C64::new(0.5, 0.0)
        }
        Distribution::RankOne => {
            let u = nalgebra::DVector::from_vec(gaussian_vec(rng, n));
            let v = nalgebra::DVector::from_vec(gaussian_vec(rng, n));
            &u * v.adjoint()
        }
        Distribution::RandomUnitary => {
            let qr = gaussian_matrix(rng, n).qr();
            let r = qr.r();
            let mut q = qr.q();
            for (j, mut col) in q.column_iter_mut().enumerate() {
                let d = r[(j, j)];
                let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
                col *= phase;
            }
            q
        }
    }
}

/// Deterministic draw: the same spec always yields the same matrix, bit for bit.
pub fn random_operator(spec: &RandomSpec) -> Result<Operator> {
    let group = Group::new(&spec.factors)?;
    let n = group.dim();
    let Some(target) = spec.target_b0_norm else {
        return Ok(draw(&mut SplitMix64::new(spec.seed), n, spec.distribution));
    };
    if !(target >= 0.0 && target.is_finite()) {
        return Err(Error::param("target_b0_norm", target, "a finite real >= 0"));
    }
    let sys = WeylSystem::new(group);
    for attempt in 0..MAX_DRAW_ATTEMPTS {
        let mut rng = if attempt == 0 {
            SplitMix64::new(spec.seed)
        } else {
            SplitMix64::derive(spec.seed, attempt as u64)
        };
        let op = draw(&mut rng, n, spec.distribution);
        let norm = b0_norm_of(&qft_fast(&sys, &op)?);
        if norm > 0.0 && norm.is_finite() {
            return Ok(op * C64::new(target / norm, 0.0));
        }
    }
    Err(Error::ZeroDraw { attempts: MAX_DRAW_ATTEMPTS })
}

/// Complex Gaussian values on the dual phase space.
pub fn random_phase_function(group: &Group, seed: u64) -> PhaseFunction {
    let mut rng = SplitMix64::new(seed);
    let values = gaussian_vec(&mut rng, group.phase_card());
    PhaseFunction::new(group.clone(), values).expect("length matches phase_card")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::singular_values;

    const ALL: [Distribution; 4] = [
        Distribution::ComplexGaussian,
        Distribution::RandomUnitary,
        Distribution::RankOne,
        Distribution::Hermitian,
    ];

    #[test]
    fn same_seed_same_matrix() {
        for dist in ALL {
            let spec = RandomSpec::new(77, &[2, 3], dist);
            assert_eq!(random_operator(&spec).unwrap(), random_operator(&spec).unwrap());
            let other = RandomSpec::new(78, &[2, 3], dist);
            assert_ne!(random_operator(&spec).unwrap(), random_operator(&other).unwrap());
        }
    }

    #[test]
    fn rescaled_to_target_b0_norm() {
        let sys = WeylSystem::new(Group::cyclic(5).unwrap());
        for dist in ALL {
            for target in [0.5, 1.0, 0.9] {
                let op = random_operator(&RandomSpec::new(3, &[5], dist).with_b0_norm(target)).unwrap();
                let got = b0_norm_of(&qft_fast(&sys, &op).unwrap());
                assert!((got - target).abs() <= 1e-14 * target, "{dist:?}: {got}");
            }
        }
        let bad = RandomSpec::new(3, &[5], Distribution::RankOne).with_b0_norm(-1.0);
        assert!(random_operator(&bad).is_err());
    }

    #[test]
    fn distribution_shapes() {
        let n = 6;
        let r1 = random_operator(&RandomSpec::new(1, &[n], Distribution::RankOne)).unwrap();
        assert_eq!(singular_values(&r1).iter().filter(|&&v| v > 0.0).count(), 1);
        let u = random_operator(&RandomSpec::new(1, &[n], Distribution::RandomUnitary)).unwrap();
        let id = Operator::identity(n, n);
        assert!((&u * u.adjoint() - id).iter().all(|z| z.norm() < 1e-12));
        let h = random_operator(&RandomSpec::new(1, &[n], Distribution::Hermitian)).unwrap();
        assert!((&h - h.adjoint()).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn invalid_factors_rejected() {
        assert!(random_operator(&RandomSpec::new(0, &[1], Distribution::ComplexGaussian)).is_err());
    }
}
