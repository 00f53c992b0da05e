//! Channel parameters, rate pairs and the pentagon shape shared by every
//! region family.
//!
//! All rates are in bits per channel use.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for algebraic identities between closed forms.
pub const ALGEBRAIC_TOL: f64 = 1e-9;

/// Default tolerance for comparisons limited by parameter/direction grids.
pub const GEOMETRIC_TOL: f64 = 1e-3;

/// `½·log₂(x)`, the Gaussian rate of a signal-plus-noise to noise ratio `x`.
#[inline]
pub fn half_log2(x: f64) -> f64 {
    0.5 * x.log2()
}

/// `1 - x`.
#[inline]
pub fn bar(x: f64) -> f64 {
    1.0 - x
}

/// Gaussian cognitive Z-interference channel
/// `Y₁ = X₁ + Z₁`, `Y₂ = X₂ + b·X₁ + Z₂` with unit-variance noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// Power of the cognitive transmitter.
    pub p1: f64,
    /// Power of the primary transmitter.
    pub p2: f64,
    /// Gain of the interference link from the cognitive transmitter to the
    /// primary receiver.
    pub b: f64,
}

impl ChannelParams {
    pub fn new(p1: f64, p2: f64, b: f64) -> Result<Self> {
        let ch = ChannelParams { p1, p2, b };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p1", self.p1), ("p2", self.p2), ("b", self.b)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidChannel(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// `b ≥ 1`.
    pub fn is_high_interference(&self) -> bool {
        self.b >= 1.0
    }
}

/// A rate pair `(R₁, R₂)`: cognitive rate first, primary rate second.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub const ORIGIN: RatePair = RatePair { r1: 0.0, r2: 0.0 };

    pub fn new(r1: f64, r2: f64) -> Self {
        RatePair { r1, r2 }
    }

    pub fn dot(&self, d: [f64; 2]) -> f64 {
        self.r1 * d[0] + self.r2 * d[1]
    }

    pub fn scaled(d: [f64; 2], t: f64) -> Self {
        RatePair::new(t * d[0], t * d[1])
    }
}

/// The polytope `{R₁ ≤ r1_max, R₂ ≤ r2_max, R₁+R₂ ≤ sum_max}` intersected
/// with the nonnegative quadrant.
///
/// A negative bound makes the pentagon empty; bounds are never clamped.
/// Two-constraint regions set `r2_max = sum_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pentagon {
    pub r1_max: f64,
    pub r2_max: f64,
    pub sum_max: f64,
}

impl Pentagon {
    pub fn new(r1_max: f64, r2_max: f64, sum_max: f64) -> Self {
        Pentagon {
            r1_max,
            r2_max,
            sum_max,
        }
    }

    /// Region with no individual `R₂` constraint.
    pub fn two_sided(r1_max: f64, sum_max: f64) -> Self {
        Pentagon::new(r1_max, sum_max, sum_max)
    }

    pub fn is_empty(&self) -> bool {
        self.r1_max < 0.0 || self.r2_max < 0.0 || self.sum_max < 0.0
    }

    pub fn contains(&self, pt: RatePair, tol: f64) -> bool {
        if self.is_empty() {
            return false;
        }
        pt.r1 >= -tol
            && pt.r2 >= -tol
            && pt.r1 <= self.r1_max + tol
            && pt.r2 <= self.r2_max + tol
            && pt.r1 + pt.r2 <= self.sum_max + tol
    }

    /// Same set with redundant bounds tightened, so that two descriptions of
    /// one set compare equal bound by bound.
    pub fn normalized(&self) -> Pentagon {
        if self.is_empty() {
            return *self;
        }
        let r1 = self.r1_max.min(self.sum_max);
        let r2 = self.r2_max.min(self.sum_max);
        Pentagon::new(r1, r2, self.sum_max.min(r1 + r2))
    }

    /// Pareto-optimal corners: maximal `R₁` first, then maximal `R₂`.
    /// Only meaningful for non-empty pentagons.
    pub fn corners(&self) -> [RatePair; 2] {
        let a = self.r1_max.min(self.sum_max);
        let b = self.r2_max.min(self.sum_max);
        [
            RatePair::new(a, b.min(self.sum_max - a)),
            RatePair::new(a.min(self.sum_max - b), b),
        ]
    }

    /// All distinct vertices, counterclockwise from the origin.
    pub fn vertices(&self) -> Vec<RatePair> {
        let [c1, c2] = self.corners();
        let mut out = vec![
            RatePair::ORIGIN,
            RatePair::new(c1.r1, 0.0),
            c1,
            c2,
            RatePair::new(0.0, c2.r2),
        ];
        out.dedup_by(|a, b| (a.r1 - b.r1).abs() < 1e-12 && (a.r2 - b.r2).abs() < 1e-12);
        out
    }
}

/// Sampling resolution for region sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grids {
    /// Points per scalar parameter (α, β, θ, ρ, λ).
    pub points: usize,
    /// Sampled support directions.
    pub directions: usize,
    /// Points per covariance-split dimension.
    pub cov_points: usize,
}

impl Default for Grids {
    fn default() -> Self {
        Grids {
            points: 201,
            directions: 721,
            cov_points: 41,
        }
    }
}

impl Grids {
    pub fn validate(&self) -> Result<()> {
        if self.points < 2 || self.cov_points < 2 {
            return Err(Error::InvalidGrid(format!(
                "parameter grids need at least 2 points (points = {}, cov_points = {})",
                self.points, self.cov_points
            )));
        }
        if self.directions < 3 {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 directions, got {}",
                self.directions
            )));
        }
        Ok(())
    }
}

/// `n` evenly spaced values from `lo` to `hi` inclusive; a single `lo` when
/// the interval is degenerate.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 || hi <= lo {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + i as f64 * step })
        .collect()
}

fn check_unit(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange {
            name,
            value: v,
            range: "[0, 1]",
        })
    }
}

/// Parameters for the Gaussian region families. Each family reads only the
/// fields it needs.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GaussianParamPoint {
    /// Power split of the cognitive transmitter between its own message and
    /// the primary message.
    pub alpha: f64,
    /// Common/private split of the cognitive message.
    pub beta: f64,
    /// Split of the primary-message power between coherent and
    /// dirty-paper-coded parts.
    pub theta: f64,
    /// Dirty-paper coding coefficient.
    pub lambda: f64,
    /// Correlation parameter of the outer bound.
    pub rho: f64,
}

impl GaussianParamPoint {
    pub fn validate(&self) -> Result<()> {
        check_unit("alpha", self.alpha)?;
        check_unit("beta", self.beta)?;
        check_unit("theta", self.theta)?;
        check_unit("rho", self.rho)?;
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return Err(Error::ParamOutOfRange {
                name: "lambda",
                value: self.lambda,
                range: "[0, inf)",
            });
        }
        Ok(())
    }

    pub fn alpha_bar(&self) -> f64 {
        bar(self.alpha)
    }

    pub fn beta_bar(&self) -> f64 {
        bar(self.beta)
    }

    pub fn theta_bar(&self) -> f64 {
        bar(self.theta)
    }
}

pub(crate) fn validate_unit(name: &'static str, v: f64) -> Result<()> {
    check_unit(name, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn emptiness() {
        assert!(!Pentagon::new(1.0, 1.0, 1.5).is_empty());
        assert!(Pentagon::new(-0.2, 1.0, 1.5).is_empty());
        assert!(!Pentagon::new(0.0, 0.0, 0.0).is_empty());
    }

    #[test]
    fn containment() {
        let p = Pentagon::new(1.0, 1.0, 1.5);
        assert!(p.contains(RatePair::new(0.7, 0.7), 0.0));
        assert!(!p.contains(RatePair::new(0.8, 0.8), 0.0));
        assert!(p.contains(RatePair::new(0.76, 0.76), 0.05));
    }

    #[test]
    fn empty_contains_nothing() {
        let p = Pentagon::new(-0.1, 1.0, 1.0);
        assert!(!p.contains(RatePair::ORIGIN, 0.0));
    }

    #[test]
    fn vertices_of_active_sum_face() {
        let v = Pentagon::new(1.0, 1.0, 1.5).vertices();
        assert_eq!(v.len(), 5);
        assert_eq!(v[2], RatePair::new(1.0, 0.5));
        assert_eq!(v[3], RatePair::new(0.5, 1.0));
        // inactive sum face collapses the two corners
        assert_eq!(Pentagon::new(1.0, 1.0, 3.0).vertices().len(), 4);
    }

    #[test]
    fn channel_validation() {
        assert!(ChannelParams::new(6.0, 6.0, 1.0).is_ok());
        assert!(ChannelParams::new(-1.0, 6.0, 1.0).is_err());
        assert!(ChannelParams::new(6.0, f64::NAN, 1.0).is_err());
        assert!(!ChannelParams::new(6.0, 6.0, 0.5).unwrap().is_high_interference());
    }

    #[test]
    fn param_point_validation() {
        let mut p = GaussianParamPoint {
            alpha: 0.3,
            ..Default::default()
        };
        assert!(p.validate().is_ok());
        assert!((p.alpha_bar() - 0.7).abs() < 1e-15);
        p.beta = 1.2;
        assert!(p.validate().is_err());
        p.beta = 0.0;
        p.lambda = -1.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(0.0, 1.0, 201);
        assert_eq!(g.len(), 201);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[200], 1.0);
        assert!((g[100] - 0.5).abs() < 1e-15);
        assert_eq!(linspace(0.0, 0.0, 41), vec![0.0]);
    }

    proptest! {
        #[test]
        fn membership_is_comprehensive(
            a in 0.0..3.0f64, b in 0.0..3.0f64, c in 0.0..5.0f64,
            x in 0.0..3.0f64, y in 0.0..3.0f64, s in 0.0..1.0f64, t in 0.0..1.0f64,
        ) {
            let p = Pentagon::new(a, b, c);
            if p.contains(RatePair::new(x, y), 0.0) {
                prop_assert!(p.contains(RatePair::new(s * x, t * y), 0.0));
            }
        }

        #[test]
        fn normalization_preserves_membership(
            a in -0.5..3.0f64, b in 0.0..3.0f64, c in 0.0..5.0f64,
            x in 0.0..3.0f64, y in 0.0..3.0f64,
        ) {
            let p = Pentagon::new(a, b, c);
            let pt = RatePair::new(x, y);
            prop_assert_eq!(p.contains(pt, 0.0), p.normalized().contains(pt, 0.0));
        }
    }
}
