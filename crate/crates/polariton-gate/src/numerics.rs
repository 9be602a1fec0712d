//! Small numerical utilities: compensated summation and composite Simpson
//! weights on a uniform grid.
//!
//! All phase integrals in this crate run through [`KahanSum`] in ascending
//! sample order, so results are independent of scheduling and reproducible
//! bit for bit from dumped trajectories.

/// Kahan–Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Composite Simpson weight for sample `k` of `n` (unscaled: 1, 4, 2, …, 4, 1).
///
/// Requires an even interval count, i.e. odd `n`.
#[inline]
pub fn simpson_weight(k: usize, n: usize) -> f64 {
    debug_assert!(n >= 3 && n % 2 == 1);
    if k == 0 || k == n - 1 {
        1.0
    } else if k % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

/// Integrate samples on a uniform grid with composite Simpson.
pub fn simpson(samples: &[f64], dt: f64) -> f64 {
    let n = samples.len();
    let mut acc = KahanSum::new();
    for (k, &s) in samples.iter().enumerate() {
        acc.add(simpson_weight(k, n) * s);
    }
    acc.value() * dt / 3.0
}

/// Distance from `theta` to the nearest odd multiple of π, in [0, π].
pub fn odd_pi_residual(theta: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let x = (theta - std::f64::consts::PI).rem_euclid(two_pi);
    x.min(two_pi - x)
}

/// Wrap an angle into (−π, π].
pub fn wrap_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut x = theta.rem_euclid(two_pi);
    if x > std::f64::consts::PI {
        x -= two_pi;
    }
    x
}
