//! Convex rate regions in the first quadrant, represented by sampled
//! support functions.
//!
//! The convex hull of a union of pentagons has support equal to the
//! pointwise maximum of the member supports, so a union over millions of
//! parameter points reduces to one running maximum per direction. The
//! boundary polyline is recovered afterwards as the intersection of the
//! sampled halfplanes `d·x ≤ h(d)` with the nonnegative quadrant.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Pentagon, RatePair};

/// Default number of sampled directions (eighth-degree steps).
pub const DEFAULT_DIRECTIONS: usize = 721;

/// Bisection steps used by [`ray_boundary`].
pub const RAY_ITERATIONS: usize = 50;

const DEDUP_TOL: f64 = 1e-9;

/// `n` unit vectors with angles uniformly spaced over `[0°, 90°]`. The end
/// points are exactly `(1, 0)` and `(0, 1)`.
pub fn quadrant_directions(n: usize) -> Result<Vec<[f64; 2]>> {
    if n < 3 {
        return Err(Error::InvalidGrid(format!(
            "need at least 3 directions, got {n}"
        )));
    }
    let step = std::f64::consts::FRAC_PI_2 / (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            if i == 0 {
                [1.0, 0.0]
            } else if i == n - 1 {
                [0.0, 1.0]
            } else {
                let t = i as f64 * step;
                [t.cos(), t.sin()]
            }
        })
        .collect())
}

/// `max d·x` over a non-empty pentagon.
pub fn pentagon_support(p: &Pentagon, d: [f64; 2]) -> Result<f64> {
    if p.is_empty() {
        return Err(Error::EmptyRegion);
    }
    Ok(support_unchecked(p, d))
}

// For d in the closed first quadrant the maximum sits on one of the two
// Pareto corners; the axis vertices are dominated by them.
#[inline]
fn support_unchecked(p: &Pentagon, d: [f64; 2]) -> f64 {
    let [c1, c2] = p.corners();
    c1.dot(d).max(c2.dot(d))
}

/// Running per-direction maximum of pentagon supports.
#[derive(Debug, Clone)]
pub struct HullAccumulator {
    directions: Arc<[[f64; 2]]>,
    support: Vec<f64>,
    members: usize,
    skipped: usize,
    non_finite: usize,
}

impl HullAccumulator {
    pub fn new(n_directions: usize) -> Result<Self> {
        let dirs = quadrant_directions(n_directions)?;
        Ok(Self::with_directions(dirs.into()))
    }

    pub fn with_directions(directions: Arc<[[f64; 2]]>) -> Self {
        let n = directions.len();
        HullAccumulator {
            directions,
            support: vec![f64::NEG_INFINITY; n],
            members: 0,
            skipped: 0,
            non_finite: 0,
        }
    }

    /// Adds a pentagon; empty ones are counted and skipped, non-finite ones
    /// make [`finish`](Self::finish) fail.
    pub fn add(&mut self, p: &Pentagon) {
        if ![p.r1_max, p.r2_max, p.sum_max].iter().all(|v| v.is_finite()) {
            self.non_finite += 1;
            return;
        }
        if p.is_empty() {
            self.skipped += 1;
            return;
        }
        self.members += 1;
        let [c1, c2] = p.corners();
        for (h, d) in self.support.iter_mut().zip(self.directions.iter()) {
            let v = c1.dot(*d).max(c2.dot(*d));
            if v > *h {
                *h = v;
            }
        }
    }

    pub fn merge(mut self, other: HullAccumulator) -> HullAccumulator {
        for (a, b) in self.support.iter_mut().zip(other.support) {
            *a = a.max(b);
        }
        self.members += other.members;
        self.skipped += other.skipped;
        self.non_finite += other.non_finite;
        self
    }

    pub fn members(&self) -> usize {
        self.members
    }

    pub fn finish(self, provenance: impl Into<String>) -> Result<ConvexRegion> {
        if self.non_finite > 0 {
            return Err(Error::NonFinite {
                count: self.non_finite,
            });
        }
        if self.members == 0 {
            return Err(Error::AllEmpty {
                count: self.skipped,
            });
        }
        Ok(ConvexRegion::from_support(
            self.directions.to_vec(),
            self.support,
            provenance,
        ))
    }
}

/// Convex hull of the union of the generated pentagons.
pub fn hull_of_union<I>(
    generator: I,
    n_directions: usize,
    provenance: impl Into<String>,
) -> Result<ConvexRegion>
where
    I: IntoIterator<Item = Pentagon>,
{
    let mut acc = HullAccumulator::new(n_directions)?;
    for p in generator {
        acc.add(&p);
    }
    acc.finish(provenance)
}

/// Parallel variant of [`hull_of_union`]. The result does not depend on the
/// thread count since `max` is associative and commutative.
pub fn par_hull_of_union<I>(
    generator: I,
    n_directions: usize,
    provenance: impl Into<String>,
) -> Result<ConvexRegion>
where
    I: IntoParallelIterator<Item = Pentagon>,
{
    let dirs: Arc<[[f64; 2]]> = quadrant_directions(n_directions)?.into();
    let acc = generator
        .into_par_iter()
        .fold(
            || HullAccumulator::with_directions(dirs.clone()),
            |mut acc, p| {
                acc.add(&p);
                acc
            },
        )
        .reduce(
            || HullAccumulator::with_directions(dirs.clone()),
            HullAccumulator::merge,
        );
    acc.finish(provenance)
}

/// A convex, comprehensive rate region described by support samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexRegion {
    /// Unit directions sorted by angle, from `(1, 0)` to `(0, 1)`.
    pub directions: Vec<[f64; 2]>,
    pub support: Vec<f64>,
    /// Outer boundary from the max-`R₁` axis point to the max-`R₂` axis
    /// point, counterclockwise.
    pub boundary: Vec<RatePair>,
    pub provenance: String,
}

impl ConvexRegion {
    /// Builds a region from support samples and extracts its boundary.
    pub fn from_support(
        directions: Vec<[f64; 2]>,
        support: Vec<f64>,
        provenance: impl Into<String>,
    ) -> ConvexRegion {
        let boundary = envelope(&directions, &support);
        ConvexRegion {
            directions,
            support,
            boundary,
            provenance: provenance.into(),
        }
    }

    /// Builds a region as the comprehensive convex hull of member points.
    /// The points themselves become the boundary.
    pub fn from_boundary_points(
        directions: Vec<[f64; 2]>,
        points: Vec<RatePair>,
        provenance: impl Into<String>,
    ) -> ConvexRegion {
        let support = directions
            .iter()
            .map(|d| points.iter().fold(0.0f64, |m, p| m.max(p.dot(*d))))
            .collect();
        ConvexRegion {
            directions,
            support,
            boundary: dedup_points(points),
            provenance: provenance.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn angle_deg(&self, i: usize) -> f64 {
        let [x, y] = self.directions[i];
        y.atan2(x).to_degrees()
    }

    /// `true` iff `d·pt ≤ h(d) + tol` for every sampled direction.
    pub fn contains(&self, pt: RatePair, tol: f64) -> bool {
        self.directions
            .iter()
            .zip(&self.support)
            .all(|(d, h)| pt.dot(*d) <= h + tol)
    }

    /// Largest value of `R₁ + R₂` over the boundary.
    pub fn max_sum_rate(&self) -> f64 {
        self.boundary
            .iter()
            .map(|p| p.r1 + p.r2)
            .fold(0.0, f64::max)
    }

    fn same_directions(&self, other: &ConvexRegion) -> bool {
        self.directions.len() == other.directions.len()
            && self
                .directions
                .iter()
                .zip(&other.directions)
                .all(|(a, b)| (a[0] - b[0]).abs() <= 1e-12 && (a[1] - b[1]).abs() <= 1e-12)
    }
}

/// Support difference at one direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapWitness {
    pub gap: f64,
    pub index: usize,
    pub direction: [f64; 2],
    pub direction_deg: f64,
}

/// `max_d (outer.h(d) - inner.h(d))` together with the maximizing direction.
pub fn directed_gap_witness(outer: &ConvexRegion, inner: &ConvexRegion) -> Result<GapWitness> {
    if !outer.same_directions(inner) || outer.is_empty() {
        return Err(Error::DirectionMismatch);
    }
    let (index, gap) = outer
        .support
        .iter()
        .zip(&inner.support)
        .map(|(o, i)| o - i)
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, g)| {
            if g > best.1 {
                (i, g)
            } else {
                best
            }
        });
    Ok(GapWitness {
        gap,
        index,
        direction: outer.directions[index],
        direction_deg: outer.angle_deg(index),
    })
}

/// `max_d (outer.h(d) - inner.h(d))`. Negative when `inner` pokes out of
/// `outer` at every direction.
pub fn directed_gap(outer: &ConvexRegion, inner: &ConvexRegion) -> Result<f64> {
    directed_gap_witness(outer, inner).map(|w| w.gap)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubsetReport {
    pub is_subset: bool,
    pub worst_direction: [f64; 2],
    pub worst_direction_deg: f64,
    pub worst_violation: f64,
}

/// Checks `inner.h(d) ≤ outer.h(d) + tol` at every sampled direction.
pub fn subset_within(inner: &ConvexRegion, outer: &ConvexRegion, tol: f64) -> Result<SubsetReport> {
    let w = directed_gap_witness(inner, outer)?;
    Ok(SubsetReport {
        is_subset: w.gap <= tol,
        worst_direction: w.direction,
        worst_direction_deg: w.direction_deg,
        worst_violation: w.gap,
    })
}

/// For each direction, the farthest point `t·d` with `t ∈ [0, r_hi]` that
/// passes `membership`, by bisection. The returned points always pass the
/// membership test themselves.
pub fn ray_boundary<F>(membership: F, directions: &[[f64; 2]], r_hi: f64) -> Result<Vec<RatePair>>
where
    F: Fn(RatePair) -> bool + Sync,
{
    if !membership(RatePair::ORIGIN) {
        return Err(Error::OriginNotMember);
    }
    Ok(directions
        .par_iter()
        .map(|&d| {
            let far = RatePair::scaled(d, r_hi);
            if membership(far) {
                return far;
            }
            let (mut lo, mut hi) = (0.0, r_hi);
            for _ in 0..RAY_ITERATIONS {
                let mid = 0.5 * (lo + hi);
                if membership(RatePair::scaled(d, mid)) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            RatePair::scaled(d, lo)
        })
        .collect())
}

fn close(a: RatePair, b: RatePair) -> bool {
    (a.r1 - b.r1).abs() <= DEDUP_TOL && (a.r2 - b.r2).abs() <= DEDUP_TOL
}

fn dedup_points(mut pts: Vec<RatePair>) -> Vec<RatePair> {
    pts.dedup_by(|a, b| close(*a, *b));
    pts
}

fn cross(o: RatePair, a: RatePair, b: RatePair) -> f64 {
    (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1)
}

/// Intersection of the sampled halfplanes with the nonnegative quadrant,
/// returned as the outer boundary chain (origin and axis legs removed).
fn envelope(directions: &[[f64; 2]], support: &[f64]) -> Vec<RatePair> {
    let n = directions.len();
    let h0 = support[0].max(0.0);
    let hn = support[n - 1].max(0.0);
    let mut poly = vec![
        RatePair::ORIGIN,
        RatePair::new(h0, 0.0),
        RatePair::new(h0, hn),
        RatePair::new(0.0, hn),
    ];
    for (d, &h) in directions[1..n - 1].iter().zip(&support[1..n - 1]) {
        poly = clip(&poly, *d, h.max(0.0));
    }
    // the origin satisfies every constraint and stays first
    let chain = dedup_points(poly[1..].to_vec());
    if chain.len() < 3 {
        return chain;
    }
    let mut out = Vec::with_capacity(chain.len());
    out.push(chain[0]);
    for i in 1..chain.len() - 1 {
        let prev = *out.last().unwrap();
        if cross(prev, chain[i], chain[i + 1]).abs() > 1e-12 {
            out.push(chain[i]);
        }
    }
    out.push(chain[chain.len() - 1]);
    out
}

fn clip(poly: &[RatePair], d: [f64; 2], h: f64) -> Vec<RatePair> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        let sp = p.dot(d) - h;
        let sq = q.dot(d) - h;
        if sp <= 0.0 {
            out.push(p);
        }
        if (sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0) {
            let t = sp / (sp - sq);
            out.push(RatePair::new(p.r1 + t * (q.r1 - p.r1), p.r2 + t * (q.r2 - p.r2)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn hull(ps: &[Pentagon]) -> ConvexRegion {
        hull_of_union(ps.iter().copied(), DEFAULT_DIRECTIONS, "test").unwrap()
    }

    #[test]
    fn directions_span_the_quadrant() {
        let d = quadrant_directions(721).unwrap();
        assert_eq!(d[0], [1.0, 0.0]);
        assert_eq!(d[720], [0.0, 1.0]);
        assert!((d[360][0] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(quadrant_directions(2).is_err());
    }

    #[test]
    fn support_examples() {
        let p = Pentagon::new(1.0, 1.0, 1.5);
        assert_eq!(pentagon_support(&p, [1.0, 0.0]).unwrap(), 1.0);
        let diag = [FRAC_1_SQRT_2, FRAC_1_SQRT_2];
        assert!((pentagon_support(&p, diag).unwrap() - 1.5 * FRAC_1_SQRT_2).abs() < 1e-12);
        let q = Pentagon::new(1.0, 1.0, 3.0);
        assert!((pentagon_support(&q, diag).unwrap() - 2.0 * FRAC_1_SQRT_2).abs() < 1e-12);
        assert_eq!(
            pentagon_support(&Pentagon::new(-1.0, 1.0, 1.0), diag),
            Err(Error::EmptyRegion)
        );
    }

    #[test]
    fn support_matches_vertex_enumeration() {
        let dirs = quadrant_directions(91).unwrap();
        for p in [
            Pentagon::new(1.0, 1.0, 1.5),
            Pentagon::new(2.0, 0.3, 1.0),
            Pentagon::new(0.1, 2.0, 5.0),
            Pentagon::new(0.0, 0.0, 0.0),
        ] {
            for d in &dirs {
                let brute = p.vertices().iter().map(|v| v.dot(*d)).fold(f64::MIN, f64::max);
                assert!((pentagon_support(&p, *d).unwrap() - brute).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn single_pentagon_boundary() {
        let r = hull(&[Pentagon::new(1.0, 1.0, 1.5)]);
        let expect = [(1.0, 0.0), (1.0, 0.5), (0.5, 1.0), (0.0, 1.0)];
        assert_eq!(r.boundary.len(), expect.len(), "{:?}", r.boundary);
        for (p, e) in r.boundary.iter().zip(expect) {
            assert!((p.r1 - e.0).abs() < 1e-9 && (p.r2 - e.1).abs() < 1e-9);
        }
    }

    #[test]
    fn time_sharing_witness() {
        let r = hull(&[Pentagon::new(1.0, 0.2, 1.2), Pentagon::new(0.2, 1.0, 1.2)]);
        assert!(r.contains(RatePair::new(0.6, 0.6), 1e-9));
        assert!(!Pentagon::new(1.0, 0.2, 1.2).contains(RatePair::new(0.6, 0.6), 0.0));
    }

    #[test]
    fn idempotent_union() {
        let p = Pentagon::new(0.7, 1.3, 1.6);
        let r = hull(&[p, p, p]);
        for (d, h) in r.directions.iter().zip(&r.support) {
            assert_eq!(*h, pentagon_support(&p, *d).unwrap());
        }
    }

    #[test]
    fn all_empty_is_error() {
        let e = hull_of_union([Pentagon::new(-1.0, 0.0, 0.0)], 11, "x");
        assert_eq!(e, Err(Error::AllEmpty { count: 1 }));
    }

    #[test]
    fn non_finite_is_error() {
        let ps = [Pentagon::new(1.0, f64::INFINITY, 2.0), Pentagon::new(1.0, 1.0, f64::NAN)];
        let e = hull_of_union(ps, 11, "x");
        assert_eq!(e, Err(Error::NonFinite { count: 2 }));
    }

    #[test]
    fn empty_members_are_skipped() {
        let r = hull(&[Pentagon::new(-1.0, 5.0, 5.0), Pentagon::new(1.0, 1.0, 1.5)]);
        assert_eq!(r.support[0], 1.0);
        assert_eq!(r.support[720], 1.0);
    }

    #[test]
    fn degenerate_regions() {
        let r = hull(&[Pentagon::new(0.0, 0.0, 0.0)]);
        assert_eq!(r.boundary, vec![RatePair::ORIGIN]);
        let s = hull(&[Pentagon::new(0.0, 1.4, 1.4)]);
        assert_eq!(s.boundary, vec![RatePair::ORIGIN, RatePair::new(0.0, 1.4)]);
    }

    #[test]
    fn contains_examples() {
        let r = hull(&[Pentagon::new(1.0, 1.0, 1.5)]);
        assert!(r.contains(RatePair::new(0.7, 0.7), 1e-9));
        assert!(!r.contains(RatePair::new(1.2, 0.0), 1e-9));
        for v in &r.boundary {
            assert!(r.contains(*v, 1e-9));
        }
    }

    #[test]
    fn gap_examples() {
        let outer = hull(&[Pentagon::new(1.0, 1.0, 2.0)]);
        let inner = hull(&[Pentagon::new(1.0, 1.0, 1.5)]);
        assert_eq!(directed_gap(&outer, &outer).unwrap(), 0.0);
        let w = directed_gap_witness(&outer, &inner).unwrap();
        assert!((w.gap - 0.5 * FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((w.direction_deg - 45.0).abs() < 1e-9);
        assert!(directed_gap(&inner, &outer).unwrap() <= 0.0);

        let rep = subset_within(&outer, &inner, 1e-3).unwrap();
        assert!(!rep.is_subset);
        assert!((rep.worst_violation - 0.5 * FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(subset_within(&outer, &inner, 0.4).unwrap().is_subset);
        let same = subset_within(&inner, &inner, 0.0).unwrap();
        assert!(same.is_subset && same.worst_violation == 0.0);

        let coarse = hull_of_union([Pentagon::new(1.0, 1.0, 1.0)], 11, "c").unwrap();
        assert_eq!(directed_gap(&outer, &coarse), Err(Error::DirectionMismatch));
    }

    #[test]
    fn ray_examples() {
        let p = Pentagon::new(1.0, 1.0, 1.5);
        let dirs = [[1.0, 0.0], [0.0, 1.0]];
        let pts = ray_boundary(|x| p.contains(x, 0.0), &dirs, 10.0).unwrap();
        assert!((pts[0].r1 - 1.0).abs() < 1e-6);
        assert!((pts[1].r2 - 1.0).abs() < 1e-6);

        let q = Pentagon::new(0.8, 1.0, 2.0);
        let both = ray_boundary(|x| p.contains(x, 0.0) && q.contains(x, 0.0), &dirs[..1], 10.0)
            .unwrap();
        assert!((both[0].r1 - 0.8).abs() < 1e-6);

        let bad = ray_boundary(|_| false, &dirs, 1.0);
        assert_eq!(bad, Err(Error::OriginNotMember));
    }

    #[test]
    fn ray_reproduces_support() {
        let p = Pentagon::new(1.2, 0.9, 1.7);
        let dirs = quadrant_directions(DEFAULT_DIRECTIONS).unwrap();
        let pts = ray_boundary(|x| p.contains(x, 0.0), &dirs, 5.0).unwrap();
        let r = ConvexRegion::from_boundary_points(dirs.clone(), pts, "ray");
        for (d, h) in dirs.iter().zip(&r.support) {
            assert!((pentagon_support(&p, *d).unwrap() - h).abs() < 1e-3);
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let ps: Vec<Pentagon> = (0..500)
            .map(|i| {
                let t = i as f64 / 499.0;
                Pentagon::new(t, 1.0 - t * t, 1.0 + 0.2 * t)
            })
            .collect();
        let a = hull_of_union(ps.clone(), 181, "s").unwrap();
        let b = par_hull_of_union(ps, 181, "s").unwrap();
        assert_eq!(a, b);
    }
}
