//! Sigmoidal current with a short delay, used as synthetic measured data.

use serde::Serialize;

/// `I(t) = 0` up to `t_delay`, then `i_max / (1 + (k / (t - t_delay))^n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrenchParams {
    pub t_delay: f64,
    pub n: f64,
    pub i_max: f64,
    pub k: f64,
}

impl Default for FrenchParams {
    /// Delay 30, exponent 2.2, plateau 150, half-rise 100.
    fn default() -> Self {
        Self {
            t_delay: 30.0,
            n: 2.2,
            i_max: 150.0,
            k: 100.0,
        }
    }
}

impl FrenchParams {
    pub fn current(&self, t: f64) -> f64 {
        if t <= self.t_delay {
            return 0.0;
        }
        self.i_max / (1.0 + (self.k / (t - self.t_delay)).powf(self.n))
    }
}
