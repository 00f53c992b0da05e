//! Outer bounds for the Gaussian channel in the high-interference regime.
//!
//! * `C°₁`: union over the correlation `ρ ∈ [0,1]` of the two-constraint
//!   regions `R₁ ≤ ½log₂(1+(1−ρ²)P₁)`, `R₁+R₂ ≤ ½log₂(1+b²P₁+P₂+2ρb√(P₁P₂))`.
//! * The degraded-message-set region of the two-antenna broadcast channel
//!   obtained by letting both transmitters cooperate. The cognitive message
//!   is the common message (decoded at both receivers), the primary message
//!   is private to receiver 2. It is evaluated with jointly Gaussian
//!   superposition: a common layer of covariance `Σ_tot − Σ_priv` and a
//!   private layer of covariance `Σ_priv`, with `diag(Σ_tot) = (P₁, P₂)`.
//! * `C°₂`: the intersection of the two.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{par_hull_of_union, quadrant_directions, ray_boundary, ConvexRegion};
use crate::model::{half_log2, linspace, validate_unit, ChannelParams, Grids, Pentagon, RatePair};

/// Two-constraint pentagon of `C°₁` at correlation `rho`.
pub fn co1_pentagon(ch: &ChannelParams, rho: f64) -> Result<Pentagon> {
    ch.validate()?;
    validate_unit("rho", rho)?;
    Ok(co1_unchecked(ch, rho))
}

fn co1_unchecked(ch: &ChannelParams, rho: f64) -> Pentagon {
    let ChannelParams { p1, p2, b } = *ch;
    Pentagon::two_sided(
        half_log2(1.0 + (1.0 - rho * rho) * p1),
        half_log2(1.0 + b * b * p1 + p2 + 2.0 * rho * b * (p1 * p2).sqrt()),
    )
}

/// Hull of [`co1_pentagon`] over a uniform `ρ` grid of `grids.points` values.
pub fn co1_region(ch: &ChannelParams, grids: &Grids) -> Result<ConvexRegion> {
    ch.validate()?;
    grids.validate()?;
    let pents: Vec<Pentagon> = linspace(0.0, 1.0, grids.points)
        .into_iter()
        .map(|r| co1_unchecked(ch, r))
        .collect();
    par_hull_of_union(
        pents,
        grids.directions,
        format!(
            "Co1 (P1={}, P2={}, b={}; {} rho pts, {} dirs)",
            ch.p1, ch.p2, ch.b, grids.points, grids.directions
        ),
    )
}

/// Covariance split of the cooperative two-antenna input.
///
/// `Σ_tot = [[P₁, c_tot], [c_tot, P₂]]` is the total input covariance and
/// `Σ_priv = [[p1_priv, c_priv], [c_priv, p2_priv]]` the covariance of the
/// private (primary-message) layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovSplit {
    pub c_tot: f64,
    pub p1_priv: f64,
    pub p2_priv: f64,
    pub c_priv: f64,
}

fn psd2(a: f64, c: f64, d: f64, eps: f64) -> bool {
    a >= -eps && d >= -eps && a * d - c * c >= -eps
}

impl CovSplit {
    /// All three of `Σ_priv`, `Σ_tot` and `Σ_tot − Σ_priv` are PSD.
    pub fn is_feasible(&self, ch: &ChannelParams) -> bool {
        let eps = 1e-12 * (1.0 + ch.p1.max(ch.p2)).powi(2);
        psd2(self.p1_priv, self.c_priv, self.p2_priv, eps)
            && psd2(ch.p1, self.c_tot, ch.p2, eps)
            && psd2(
                ch.p1 - self.p1_priv,
                self.c_tot - self.c_priv,
                ch.p2 - self.p2_priv,
                eps,
            )
    }

    /// Superposition rates with `h₁ = (1, 0)` and `h₂ = (b, 1)`.
    pub fn pentagon(&self, ch: &ChannelParams) -> Pentagon {
        let b = ch.b;
        let rx2 = |p1: f64, c: f64, p2: f64| b * b * p1 + 2.0 * b * c + p2;
        Pentagon::new(
            half_log2((ch.p1 + 1.0) / (self.p1_priv + 1.0)),
            half_log2(1.0 + rx2(self.p1_priv, self.c_priv, self.p2_priv)),
            half_log2(1.0 + rx2(ch.p1, self.c_tot, ch.p2)),
        )
    }
}

/// Enumerates the covariance-split grid: `cov_points` values for each of
/// `c_tot ∈ [−√(P₁P₂), √(P₁P₂)]`, `p1_priv ∈ [0, P₁]`, `p2_priv ∈ [0, P₂]`,
/// and `c_priv` across the range allowed by the private powers. Splits
/// violating the common-layer PSD constraint are dropped.
pub fn cov_split_grid(ch: &ChannelParams, cov_points: usize) -> Vec<CovSplit> {
    let m = cov_points;
    let cmax = (ch.p1 * ch.p2).sqrt();
    let c_tot = linspace(-cmax, cmax, m);
    let p1s = linspace(0.0, ch.p1, m);
    let p2s = linspace(0.0, ch.p2, m);
    c_tot
        .par_iter()
        .flat_map_iter(|&ct| {
            let p2s = &p2s;
            p1s.iter().flat_map(move |&a| {
                p2s.iter().flat_map(move |&d| {
                    let r = (a * d).sqrt();
                    linspace(-r, r, m).into_iter().map(move |cp| CovSplit {
                        c_tot: ct,
                        p1_priv: a,
                        p2_priv: d,
                        c_priv: cp,
                    })
                })
            })
        })
        .filter(|s| s.is_feasible(ch))
        .collect()
}

/// Hull of the superposition pentagons over the covariance-split grid.
pub fn bcdms_region(ch: &ChannelParams, grids: &Grids) -> Result<ConvexRegion> {
    ch.validate()?;
    grids.validate()?;
    let splits = cov_split_grid(ch, grids.cov_points);
    if splits.is_empty() {
        return Err(Error::NoFeasibleCovSplit);
    }
    let pents: Vec<Pentagon> = splits.par_iter().map(|s| s.pentagon(ch)).collect();
    par_hull_of_union(
        pents,
        grids.directions,
        format!(
            "BC-DMS (P1={}, P2={}, b={}; {} pts/cov dim, {} dirs)",
            ch.p1, ch.p2, ch.b, grids.cov_points, grids.directions
        ),
    )
}

/// `C°₁`, the broadcast region, and their intersection `C°₂`.
#[derive(Debug, Clone)]
pub struct OuterBounds {
    pub co1: ConvexRegion,
    pub bcdms: ConvexRegion,
    pub co2: ConvexRegion,
}

impl OuterBounds {
    pub fn compute(ch: &ChannelParams, grids: &Grids) -> Result<Self> {
        let co1 = co1_region(ch, grids)?;
        let bcdms = bcdms_region(ch, grids)?;
        let co2 = intersect(&co1, &bcdms, ch)?;
        Ok(OuterBounds { co1, bcdms, co2 })
    }

    /// Membership in `C°₂`: in both parents.
    pub fn co2_contains(&self, pt: RatePair, tol: f64) -> bool {
        self.co1.contains(pt, tol) && self.bcdms.contains(pt, tol)
    }
}

fn intersect(a: &ConvexRegion, b: &ConvexRegion, ch: &ChannelParams) -> Result<ConvexRegion> {
    let r_hi = 2.0 * a.support.iter().chain(&b.support).fold(0.0f64, |m, h| m.max(*h)) + 1.0;
    let dirs = quadrant_directions(a.len())?;
    let pts = ray_boundary(|p| a.contains(p, 0.0) && b.contains(p, 0.0), &dirs, r_hi)?;
    Ok(ConvexRegion::from_boundary_points(
        dirs,
        pts,
        format!(
            "Co2 (P1={}, P2={}, b={}; {} dirs)",
            ch.p1,
            ch.p2,
            ch.b,
            a.len()
        ),
    ))
}

/// `C°₂ = C°₁ ∩ BC-DMS`, with boundary found by bisection along rays.
pub fn co2_region(ch: &ChannelParams, grids: &Grids) -> Result<ConvexRegion> {
    OuterBounds::compute(ch, grids).map(|o| o.co2)
}
