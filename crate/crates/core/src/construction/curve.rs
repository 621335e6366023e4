use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Height of the first upper-row disc, `2 + √3`.
pub fn top_start() -> f64 {
    2.0 + 3f64.sqrt()
}

/// Asymptotic height of the unperturbed upper row, `2√3`.
pub fn top_limit() -> f64 {
    2.0 * 3f64.sqrt()
}

/// Default decay rate of the exponential base curve.
pub const DEFAULT_LAMBDA: f64 = 0.1;

type CurveFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Strictly convex, strictly decreasing base curve running from `2 + √3` at
/// `x = 0` down to the asymptote `2√3`.
#[derive(Clone)]
pub enum BaseCurve {
    /// `2√3 + (2 − √3)·e^(−λx)`.
    Exponential { lambda: f64 },
    /// Any other curve; admissibility is checked by sampling.
    Custom(CurveFn),
}

impl fmt::Debug for BaseCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseCurve::Exponential { lambda } => f.debug_struct("Exponential").field("lambda", lambda).finish(),
            BaseCurve::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl BaseCurve {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            // Written so that x = 0 returns top_start() bit for bit.
            BaseCurve::Exponential { lambda } => top_start() + (top_limit() - top_start()) * -(-lambda * x).exp_m1(),
            BaseCurve::Custom(f) => f(x),
        }
    }
}

/// The base curve together with its perturbation parameter `ε`. The
/// perturbed curve is `(1 + ε)·base(x) − ε·base(0)`, which keeps the starting
/// height and lowers the asymptote by `ε·(2 + √3 − 2√3)`.
#[derive(Debug, Clone)]
pub struct CurveFamily {
    pub base: BaseCurve,
    pub epsilon: f64,
}

impl Default for CurveFamily {
    fn default() -> Self {
        CurveFamily::exponential(DEFAULT_LAMBDA).expect("default lambda is admissible")
    }
}

impl CurveFamily {
    pub fn exponential(lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::param("lambda", "must be positive and finite"));
        }
        Ok(CurveFamily { base: BaseCurve::Exponential { lambda }, epsilon: 0.0 })
    }

    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        let fam = CurveFamily { base: BaseCurve::Custom(Arc::new(f)), epsilon: 0.0 };
        fam.check_admissible()?;
        Ok(fam)
    }

    pub fn lambda(&self) -> Option<f64> {
        match self.base {
            BaseCurve::Exponential { lambda } => Some(lambda),
            BaseCurve::Custom(_) => None,
        }
    }

    pub fn with_epsilon(&self, epsilon: f64) -> CurveFamily {
        CurveFamily { base: self.base.clone(), epsilon }
    }

    /// Perturbed curve value; `x` must be non-negative.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::param("x", format!("curve is defined for x >= 0, got {x}")));
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        let f0 = self.base.eval(0.0);
        f0 + (1.0 + self.epsilon) * (self.base.eval(x) - f0)
    }

    /// Sampled check that the base starts at `2 + √3`, strictly decreases and
    /// is convex on `[0, 200]`.
    pub fn check_admissible(&self) -> Result<()> {
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InadmissibleCurve(format!("epsilon must be >= 0, got {}", self.epsilon)));
        }
        let f0 = self.base.eval(0.0);
        if (f0 - top_start()).abs() > 1e-12 {
            return Err(Error::InadmissibleCurve(format!("base(0) = {f0}, expected 2 + sqrt(3)")));
        }
        let h = 0.05;
        let samples: Vec<f64> = (0..=4000).map(|k| self.base.eval(k as f64 * h)).collect();
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::InadmissibleCurve("base curve is not finite on [0, 200]".into()));
        }
        for (k, w) in samples.windows(2).enumerate() {
            if w[1] >= w[0] && w[0] - top_limit() > 1e-9 {
                return Err(Error::InadmissibleCurve(format!("base curve is not decreasing near x = {}", k as f64 * h)));
            }
        }
        for (k, w) in samples.windows(3).enumerate() {
            if w[0] - 2.0 * w[1] + w[2] < -1e-12 {
                return Err(Error::InadmissibleCurve(format!("base curve is not convex near x = {}", (k + 1) as f64 * h)));
            }
        }
        Ok(())
    }
}
