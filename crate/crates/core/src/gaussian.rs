//! Closed-form Gaussian achievable regions and the high-interference
//! capacity region.
//!
//! Parameter roles:
//! * `alpha` splits the cognitive power between the cognitive message
//!   (`α·P₁`) and cooperation on the primary message (`ᾱ·P₁`);
//! * `beta` splits the cognitive-message power into a common part decoded at
//!   both receivers (`β`) and a private part (`β̄`);
//! * `theta` splits the cooperative power into a part sent coherently with
//!   the primary signal (`θ`) and a dirty-paper-coded part (`θ̄`);
//! * `lambda` is the dirty-paper coding coefficient of the `G₃` family.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{par_hull_of_union, ConvexRegion};
use crate::model::{bar, half_log2, linspace, validate_unit, ChannelParams, Grids, Pentagon};

// Every log argument of the G_a, G_b and G_2 families is at least one.
#[inline]
fn rate(arg: f64) -> f64 {
    debug_assert!(arg >= 1.0 - 1e-12, "log argument {arg} below one");
    half_log2(arg)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda >= 0.0 {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange {
            name: "lambda",
            value: lambda,
            range: "[0, inf)",
        })
    }
}

/// Region `G_a(α, β, θ)`: dirty-paper coding of the private cognitive layer
/// against the dirty-paper-coded primary layer.
pub fn ga_pentagon(ch: &ChannelParams, alpha: f64, beta: f64, theta: f64) -> Result<Pentagon> {
    ch.validate()?;
    validate_unit("alpha", alpha)?;
    validate_unit("beta", beta)?;
    validate_unit("theta", theta)?;
    Ok(ga_unchecked(ch, alpha, beta, theta))
}

fn ga_unchecked(ch: &ChannelParams, a: f64, be: f64, t: f64) -> Pentagon {
    let ChannelParams { p1, p2, b } = *ch;
    let (ab, bb, tb) = (bar(a), bar(be), bar(t));
    let b2 = b * b;

    let common_noise = a * bb * p1 + ab * p1 + 1.0;
    let private = rate(1.0 + a * bb * p1 / (ab * tb * p1 + 1.0));
    let rx2_noise = b2 * a * bb * p1 + b2 * ab * tb * p1 + 1.0;
    let coherent = (p2.sqrt() + b * (ab * t * p1).sqrt()).powi(2);
    let dpc = rate(1.0 + b2 * ab * tb * p1);

    let r1 = rate(1.0 + a * be * p1 / common_noise) + private;
    let r2 = rate(1.0 + coherent / rx2_noise) + dpc;
    let sum = rate(1.0 + (coherent + b2 * a * be * p1) / rx2_noise) + private + dpc;
    Pentagon::new(r1, r2, sum)
}

/// Region `G_b(α, β)`: the primary signal is dirty-paper coded against the
/// private cognitive layer.
pub fn gb_pentagon(ch: &ChannelParams, alpha: f64, beta: f64) -> Result<Pentagon> {
    ch.validate()?;
    validate_unit("alpha", alpha)?;
    validate_unit("beta", beta)?;
    Ok(gb_unchecked(ch, alpha, beta))
}

fn gb_unchecked(ch: &ChannelParams, a: f64, be: f64) -> Pentagon {
    let ChannelParams { p1, p2, b } = *ch;
    let (ab, bb) = (bar(a), bar(be));
    let b2 = b * b;

    let coherent = (b * (ab * p1).sqrt() + p2.sqrt()).powi(2);
    let rx2_noise = 1.0 + b2 * a * bb * p1;
    let private = rate(1.0 + a * bb * p1);

    let r1 = rate(1.0 + a * be * p1 / (1.0 + a * bb * p1 + ab * p1)) + private;
    let r2 = rate(1.0 + coherent / rx2_noise);
    let sum = rate(1.0 + (coherent + b2 * a * be * p1) / rx2_noise) + private;
    Pentagon::new(r1, r2, sum)
}

/// Region `G₂(α)`: superposition coding only.
pub fn g2_pentagon(ch: &ChannelParams, alpha: f64) -> Result<Pentagon> {
    ch.validate()?;
    validate_unit("alpha", alpha)?;
    Ok(g2_unchecked(ch, alpha))
}

fn g2_unchecked(ch: &ChannelParams, a: f64) -> Pentagon {
    let ChannelParams { p1, p2, b } = *ch;
    let ab = bar(a);
    let coherent = (b * (ab * p1).sqrt() + p2.sqrt()).powi(2);
    Pentagon::new(
        rate(1.0 + a * p1 / (1.0 + ab * p1)),
        rate(1.0 + coherent),
        rate(1.0 + coherent + b * b * a * p1),
    )
}

/// Total received power at the primary receiver for power split `α`,
/// excluding noise: `(b√(ᾱP₁)+√P₂)² + b²αP₁`.
fn rx2_power(ch: &ChannelParams, a: f64) -> f64 {
    let ChannelParams { p1, p2, b } = *ch;
    (b * (bar(a) * p1).sqrt() + p2.sqrt()).powi(2) + b * b * a * p1
}

// Primary-rate bound shared by G3 and G3'.
fn g3_r2(ch: &ChannelParams, a: f64, lambda: f64) -> f64 {
    let ChannelParams { p1, p2, b } = *ch;
    let ab = bar(a);
    let s = rx2_power(ch, a);
    let mixed = b * (a * p1).sqrt() + lambda * (p2.sqrt() + b * (ab * p1).sqrt());
    half_log2((1.0 + lambda * lambda) * (s + 1.0) - mixed * mixed)
}

/// Region `G₃(α, λ)`: superposition plus dirty-paper coding of the common
/// cognitive message against the primary message, with coefficient `λ`.
///
/// The first bound is negative (empty pentagon) for badly chosen `λ`.
pub fn g3_pentagon(ch: &ChannelParams, alpha: f64, lambda: f64) -> Result<Pentagon> {
    ch.validate()?;
    validate_unit("alpha", alpha)?;
    check_lambda(lambda)?;
    Ok(g3_unchecked(ch, alpha, lambda))
}

fn g3_unchecked(ch: &ChannelParams, a: f64, lambda: f64) -> Pentagon {
    let p1 = ch.p1;
    let c = (a * p1).sqrt() + lambda * (bar(a) * p1).sqrt();
    let r1 = half_log2((p1 + 1.0) / ((1.0 + lambda * lambda) * (p1 + 1.0) - c * c));
    Pentagon::new(r1, g3_r2(ch, a, lambda), half_log2(rx2_power(ch, a) + 1.0))
}

/// Dirty-paper coefficient maximizing the first `G₃` bound:
/// `√(αᾱ)·P₁ / (αP₁ + 1)`.
pub fn lambda_opt(ch: &ChannelParams, alpha: f64) -> Result<f64> {
    ch.validate()?;
    validate_unit("alpha", alpha)?;
    Ok(lambda_opt_unchecked(ch, alpha))
}

fn lambda_opt_unchecked(ch: &ChannelParams, a: f64) -> f64 {
    (a * bar(a)).sqrt() * ch.p1 / (a * ch.p1 + 1.0)
}

/// Region `G₃′(α)`: `G₃` at `λ = λ_o(α)`, with the first bound in its
/// simplified form `½log₂(1+αP₁)`.
pub fn g3p_pentagon(ch: &ChannelParams, alpha: f64) -> Result<Pentagon> {
    ch.validate()?;
    validate_unit("alpha", alpha)?;
    Ok(g3p_unchecked(ch, alpha))
}

fn g3p_unchecked(ch: &ChannelParams, a: f64) -> Pentagon {
    Pentagon::new(
        half_log2(1.0 + a * ch.p1),
        g3_r2(ch, a, lambda_opt_unchecked(ch, a)),
        half_log2(rx2_power(ch, a) + 1.0),
    )
}

/// `G₃′` primary bound minus the sum bound less the cognitive bound. The
/// primary constraint is inactive (and `G₃′` meets the outer bound at this
/// `α`) iff the slack is nonnegative.
pub fn g3p_r2_slack(ch: &ChannelParams, alpha: f64) -> Result<f64> {
    let p = g3p_pentagon(ch, alpha)?;
    Ok(p.r2_max - (p.sum_max - p.r1_max))
}

/// Capacity pentagon for `1 ≤ b ≤ b_star`: `R₁ ≤ ½log₂(1+αP₁)` and
/// `R₁+R₂ ≤ ½log₂((b√(ᾱP₁)+√P₂)² + b²αP₁ + 1)`.
///
/// Computed for any `b`; whether it is the capacity is reported by
/// [`b_star`] / [`in_capacity_regime`].
pub fn capacity_pentagon(ch: &ChannelParams, alpha: f64) -> Result<Pentagon> {
    ch.validate()?;
    validate_unit("alpha", alpha)?;
    Ok(capacity_unchecked(ch, alpha))
}

fn capacity_unchecked(ch: &ChannelParams, a: f64) -> Pentagon {
    Pentagon::two_sided(half_log2(1.0 + a * ch.p1), half_log2(rx2_power(ch, a) + 1.0))
}

/// Largest gain for which the capacity result holds:
/// `√((P₁+P₂+1)/(P₁+1))`.
pub fn b_star(ch: &ChannelParams) -> f64 {
    b_star_at(ch, 0.0)
}

/// Largest gain for which the `G₃′` primary constraint is loose at power
/// split `α`: `√((P₁+P₂+αP₁P₂+1)/(P₁+1))`. Increasing in `α`, so
/// [`b_star`] is its value at `α = 0`.
pub fn b_star_at(ch: &ChannelParams, alpha: f64) -> f64 {
    let ChannelParams { p1, p2, .. } = *ch;
    ((p1 + p2 + alpha * p1 * p2 + 1.0) / (p1 + 1.0)).sqrt()
}

/// `1 ≤ b ≤ b_star`.
pub fn in_capacity_regime(ch: &ChannelParams) -> bool {
    in_capacity_regime_within(ch, 0.0)
}

/// `1 − tol ≤ b ≤ b_star + tol`, for gains quoted to finite precision.
pub fn in_capacity_regime_within(ch: &ChannelParams, tol: f64) -> bool {
    ch.b >= 1.0 - tol && ch.b <= b_star(ch) + tol
}

fn grid_tag(ch: &ChannelParams, grids: &Grids) -> String {
    format!(
        "P1={}, P2={}, b={}; {} pts/param, {} dirs",
        ch.p1, ch.p2, ch.b, grids.points, grids.directions
    )
}

/// Convex hull of all `G_a(α,β,θ)` and `G_b(α,β)` over the grid. The θ
/// sweep is skipped at `α = 1` where θ has no effect.
pub fn g_region(ch: &ChannelParams, grids: &Grids) -> Result<ConvexRegion> {
    ch.validate()?;
    grids.validate()?;
    let g = linspace(0.0, 1.0, grids.points);
    let n = g.len();
    let ga = (0..n * n * n).into_par_iter().filter_map(|k| {
        let (i, j, l) = (k / (n * n), (k / n) % n, k % n);
        (g[i] < 1.0 || l == 0).then(|| ga_unchecked(ch, g[i], g[j], g[l]))
    });
    let gb = (0..n * n)
        .into_par_iter()
        .map(|k| gb_unchecked(ch, g[k / n], g[k % n]));
    par_hull_of_union(
        ga.chain(gb),
        grids.directions,
        format!("G ({})", grid_tag(ch, grids)),
    )
}

/// `β = 0` slice of [`g_region`]: no common cognitive layer.
pub fn g1_region(ch: &ChannelParams, grids: &Grids) -> Result<ConvexRegion> {
    ch.validate()?;
    grids.validate()?;
    let g = linspace(0.0, 1.0, grids.points);
    let n = g.len();
    let pents = (0..n * n)
        .into_par_iter()
        .filter_map(|k| {
            let (i, l) = (k / n, k % n);
            (g[i] < 1.0 || l == 0).then(|| ga_unchecked(ch, g[i], 0.0, g[l]))
        })
        .chain((0..n).into_par_iter().map(|i| gb_unchecked(ch, g[i], 0.0)));
    par_hull_of_union(pents, grids.directions, format!("G1 ({})", grid_tag(ch, grids)))
}

fn alpha_family(
    ch: &ChannelParams,
    grids: &Grids,
    name: &str,
    f: impl Fn(&ChannelParams, f64) -> Pentagon + Sync,
) -> Result<ConvexRegion> {
    ch.validate()?;
    grids.validate()?;
    let pents: Vec<Pentagon> = linspace(0.0, 1.0, grids.points)
        .into_par_iter()
        .map(|a| f(ch, a))
        .collect();
    par_hull_of_union(pents, grids.directions, format!("{name} ({})", grid_tag(ch, grids)))
}

pub fn g2_region(ch: &ChannelParams, grids: &Grids) -> Result<ConvexRegion> {
    alpha_family(ch, grids, "G2", g2_unchecked)
}

pub fn g3p_region(ch: &ChannelParams, grids: &Grids) -> Result<ConvexRegion> {
    alpha_family(ch, grids, "G3'", g3p_unchecked)
}

pub fn capacity_region(ch: &ChannelParams, grids: &Grids) -> Result<ConvexRegion> {
    alpha_family(ch, grids, "capacity", capacity_unchecked)
}

/// `G₃` over a bounded coefficient sweep `λ ∈ [0, 4λ_o(α)+1]` per `α`, with
/// `λ_o(α)` itself always included. Pentagons made empty by a poor `λ` are
/// skipped.
pub fn g3_region_swept(ch: &ChannelParams, grids: &Grids) -> Result<ConvexRegion> {
    ch.validate()?;
    grids.validate()?;
    let alphas = linspace(0.0, 1.0, grids.points);
    let n = grids.points;
    let pents: Vec<Pentagon> = alphas
        .par_iter()
        .flat_map_iter(|&a| {
            let lo = lambda_opt_unchecked(ch, a);
            linspace(0.0, 4.0 * lo + 1.0, n)
                .into_iter()
                .chain(std::iter::once(lo))
                .map(move |l| g3_unchecked(ch, a, l))
        })
        .collect();
    par_hull_of_union(
        pents,
        grids.directions,
        format!("G3 lambda-sweep ({})", grid_tag(ch, grids)),
    )
}
