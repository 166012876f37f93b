//! Small numerical helpers shared by the norm and oracle code.

use crate::C64;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator of reals.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// `exp(2πi k/n)` with `k` reduced mod `n`. Quarter-turns are returned exactly.
pub fn root_of_unity(k: usize, n: usize) -> C64 {
    let k = k % n;
    if k == 0 {
        C64::new(1.0, 0.0)
    } else if 2 * k == n {
        C64::new(-1.0, 0.0)
    } else if 4 * k == n {
        C64::new(0.0, 1.0)
    } else if 4 * k == 3 * n {
        C64::new(0.0, -1.0)
    } else {
        let theta = std::f64::consts::TAU * (k as f64) / (n as f64);
        C64::new(theta.cos(), theta.sin())
    }
}

/// Largest entrywise modulus of `a - b`. Panics if lengths differ.
pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len(), "max_abs_diff: length mismatch");
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
