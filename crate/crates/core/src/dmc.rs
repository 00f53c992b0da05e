//! Exact evaluation of the discrete memoryless regions on finite alphabets.
//!
//! Every distribution is stored as the factor kernels of its admissible
//! factorization and materialized into one joint table over
//! `(U₁, W₁, V₂, W₂, X₁, X₂, Y₁, Y₂)`. Variables a variant does not use get
//! a singleton alphabet, so all mutual-information terms are read off the
//! same axis layout.
//!
//! Row conventions for conditional kernels (row-major, last index fastest):
//!
//! | kernel                    | row index                          | column           |
//! |---------------------------|------------------------------------|------------------|
//! | `p(w₁,w₂ \| v₂,u₁)`       | `v₂·|U₁| + u₁`                     | `w₁·|W₂| + w₂`   |
//! | `p(x₁ \| w₁,w₂,v₂,u₁)`    | `((w₁·|W₂| + w₂)·|V₂| + v₂)·|U₁| + u₁` | `x₁`        |
//! | `p(x₁ \| v₂,u₁)`          | `v₂·|U₁| + u₁`                     | `x₁`             |
//! | `p(u₁,v₂)` (one row)      | `0`                                | `u₁·|V₂| + v₂`   |
//! | `p(x₁,x₂ \| u)`           | `u`                                | `x₁·|X₂| + x₂`   |
//! | `p(y₂ \| x₁,x₂)`          | `x₁·|X₂| + x₂`                     | `y₂`             |

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{hull_of_union, ConvexRegion};
use crate::model::Pentagon;

/// Largest joint table that will be materialized.
pub const MAX_JOINT_ENTRIES: u128 = 100_000_000;

const ROW_TOL: f64 = 1e-12;
const TABLE_TOL: f64 = 1e-9;

/// Axis positions in the materialized joint.
pub mod axis {
    pub const U1: usize = 0;
    pub const W1: usize = 1;
    pub const V2: usize = 2;
    pub const W2: usize = 3;
    pub const X1: usize = 4;
    pub const X2: usize = 5;
    pub const Y1: usize = 6;
    pub const Y2: usize = 7;
    /// The outer bound's auxiliary shares the `U₁` slot.
    pub const U: usize = U1;
}
use axis::*;

/// Row-stochastic matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Kernel {
    pub fn new(name: &'static str, rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        let bad = |reason: String| Error::InvalidKernel { name, reason };
        if rows == 0 || cols == 0 {
            return Err(bad(format!("shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(bad(format!(
                "expected {} entries for {rows}x{cols}, got {}",
                rows * cols,
                data.len()
            )));
        }
        for (r, row) in data.chunks(cols).enumerate() {
            if row.iter().any(|&p| !p.is_finite() || p < 0.0) {
                return Err(bad(format!("row {r} has a negative or non-finite entry")));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > ROW_TOL {
                return Err(bad(format!("row {r} sums to {s}")));
            }
        }
        Ok(Kernel { rows, cols, data })
    }

    pub fn from_rows(name: &'static str, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidKernel {
                name,
                reason: "ragged rows".into(),
            });
        }
        Kernel::new(name, n, m, rows.concat())
    }

    /// Kernel putting all mass of row `r` on column `f(r)`.
    pub fn deterministic(rows: usize, cols: usize, f: impl Fn(usize) -> usize) -> Self {
        let mut data = vec![0.0; rows * cols];
        for r in 0..rows {
            data[r * cols + f(r)] = 1.0;
        }
        Kernel { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Kernel::deterministic(n, n, |r| r)
    }

    /// Single-row kernel, i.e. an unconditional distribution.
    pub fn distribution(name: &'static str, p: Vec<f64>) -> Result<Self> {
        let n = p.len();
        Kernel::new(name, 1, n, p)
    }

    pub fn uniform(rows: usize, cols: usize) -> Self {
        Kernel {
            rows,
            cols,
            data: vec![1.0 / cols as f64; rows * cols],
        }
    }

    /// Binary symmetric channel with crossover `p`.
    pub fn bsc(p: f64) -> Self {
        Kernel {
            rows: 2,
            cols: 2,
            data: vec![1.0 - p, p, p, 1.0 - p],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn random(rows: usize, cols: usize, rng: &mut impl Rng) -> Self {
        let data = (0..rows).flat_map(|_| random_row(rng, cols)).collect();
        Kernel { rows, cols, data }
    }

    fn random_marginal(cols: usize, rng: &mut impl Rng) -> Self {
        Kernel {
            rows: 1,
            cols,
            data: random_marginal_row(rng, cols),
        }
    }

    fn expect_shape(&self, name: &'static str, rows: usize, cols: usize) -> Result<()> {
        if self.rows != rows || self.cols != cols {
            return Err(Error::InvalidKernel {
                name,
                reason: format!(
                    "expected shape {rows}x{cols}, got {}x{}",
                    self.rows, self.cols
                ),
            });
        }
        Ok(())
    }
}

/// One draw from the flat Dirichlet distribution on the `n`-simplex.
pub fn dirichlet_row(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    let g: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = g.iter().sum();
    g.into_iter().map(|x| x / s).collect()
}

/// Search row for a conditional kernel: with probability ¾ a uniformly
/// chosen simplex vertex, otherwise a flat Dirichlet draw.
///
/// Extreme points of the regions are typically reached with deterministic
/// kernels, which a flat Dirichlet essentially never produces.
pub fn random_row(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    if n > 1 && rng.random_bool(0.75) {
        vertex(rng, n)
    } else {
        dirichlet_row(rng, n)
    }
}

/// Search row for an unconditional distribution: uniform, a vertex
/// (constant auxiliary) or a flat Dirichlet draw, each with probability ⅓.
pub fn random_marginal_row(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    match rng.random_range(0..3) {
        0 => vec![1.0 / n as f64; n],
        1 => vertex(rng, n),
        _ => dirichlet_row(rng, n),
    }
}

fn vertex(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut row = vec![0.0; n];
    row[rng.random_range(0..n)] = 1.0;
    row
}

/// Channel `p(y₁|x₁)·p(y₂|x₁,x₂)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmcChannel {
    pub nx1: usize,
    pub nx2: usize,
    pub ny1: usize,
    pub ny2: usize,
    /// `p(y₁|x₁)`, `nx1 × ny1`.
    pub k1: Kernel,
    /// `p(y₂|x₁,x₂)`, `(nx1·nx2) × ny2`.
    pub k2: Kernel,
}

impl DmcChannel {
    pub fn new(k1: Kernel, nx2: usize, k2: Kernel) -> Result<Self> {
        if nx2 == 0 || k2.rows != k1.rows * nx2 {
            return Err(Error::AlphabetMismatch(format!(
                "p(y2|x1,x2) has {} rows, expected {}·{}",
                k2.rows, k1.rows, nx2
            )));
        }
        Ok(DmcChannel {
            nx1: k1.rows,
            nx2,
            ny1: k1.cols,
            ny2: k2.cols,
            k1,
            k2,
        })
    }
}

/// Probability table over a product of finite alphabets, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    dims: Vec<usize>,
    probs: Vec<f64>,
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

impl JointTable {
    pub fn new(dims: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        let n: usize = dims.iter().product();
        if dims.is_empty() || n != probs.len() {
            return Err(Error::InvalidTable(format!(
                "dims {dims:?} do not match {} entries",
                probs.len()
            )));
        }
        if probs.iter().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(Error::InvalidTable("negative or non-finite entry".into()));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > TABLE_TOL {
            return Err(Error::NotNormalized(s));
        }
        Ok(JointTable { dims, probs })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Groups of axes, each flattened into one axis of the result (in the
    /// order listed within the group). Axes not mentioned are summed out.
    pub fn group(&self, groups: &[&[usize]]) -> JointTable {
        let out_dims: Vec<usize> = groups
            .iter()
            .map(|g| g.iter().map(|&a| self.dims[a]).product())
            .collect();
        // weight of each source axis in the flattened output index
        let mut weight = vec![0usize; self.dims.len()];
        let out_strides = strides(&out_dims);
        for (g, axes) in groups.iter().enumerate() {
            let mut w = out_strides[g];
            for &a in axes.iter().rev() {
                weight[a] = w;
                w *= self.dims[a];
            }
        }
        let mut out = vec![0.0; out_dims.iter().product()];
        let mut idx = vec![0usize; self.dims.len()];
        let mut pos = 0usize;
        for &p in &self.probs {
            out[pos] += p;
            // odometer increment, keeping `pos` in sync
            for a in (0..idx.len()).rev() {
                idx[a] += 1;
                pos += weight[a];
                if idx[a] < self.dims[a] {
                    break;
                }
                pos -= weight[a] * idx[a];
                idx[a] = 0;
            }
        }
        JointTable {
            dims: out_dims,
            probs: out,
        }
    }

    pub fn marginal(&self, axes: &[usize]) -> Vec<f64> {
        self.group(&[axes]).probs
    }

    /// `I(A;B)` between two groups of axes.
    pub fn mi(&self, a: &[usize], b: &[usize]) -> f64 {
        mi_2d(&self.group(&[a, b]))
    }

    /// `I(A;B|C)` between groups of axes.
    pub fn cmi(&self, a: &[usize], b: &[usize], c: &[usize]) -> f64 {
        cmi_3d(&self.group(&[a, b, c]))
    }
}

fn mi_2d(t: &JointTable) -> f64 {
    let (na, nb) = (t.dims[0], t.dims[1]);
    let mut pa = vec![0.0; na];
    let mut pb = vec![0.0; nb];
    #[allow(clippy::needless_range_loop)]
    for i in 0..na {
        for j in 0..nb {
            let p = t.probs[i * nb + j];
            pa[i] += p;
            pb[j] += p;
        }
    }
    let mut s = 0.0;
    #[allow(clippy::needless_range_loop)]
    for i in 0..na {
        for j in 0..nb {
            let p = t.probs[i * nb + j];
            if p > 0.0 {
                s += p * (p / (pa[i] * pb[j])).log2();
            }
        }
    }
    debug_assert!(s <= (na.min(nb) as f64).log2() + 1e-9, "I = {s} exceeds alphabet bound");
    s.max(0.0)
}

fn cmi_3d(t: &JointTable) -> f64 {
    let (na, nb, nc) = (t.dims[0], t.dims[1], t.dims[2]);
    let at = |i: usize, j: usize, k: usize| t.probs[(i * nb + j) * nc + k];
    let mut pc = vec![0.0; nc];
    let mut pac = vec![0.0; na * nc];
    let mut pbc = vec![0.0; nb * nc];
    #[allow(clippy::needless_range_loop)]
    for i in 0..na {
        for j in 0..nb {
            for k in 0..nc {
                let p = at(i, j, k);
                pc[k] += p;
                pac[i * nc + k] += p;
                pbc[j * nc + k] += p;
            }
        }
    }
    let mut s = 0.0;
    #[allow(clippy::needless_range_loop)]
    for i in 0..na {
        for j in 0..nb {
            for k in 0..nc {
                let p = at(i, j, k);
                if p > 0.0 {
                    s += p * (p * pc[k] / (pac[i * nc + k] * pbc[j * nc + k])).log2();
                }
            }
        }
    }
    debug_assert!(s <= (na.min(nb) as f64).log2() + 1e-9, "I = {s} exceeds alphabet bound");
    s.max(0.0)
}

/// `I(A;B)` of a two-axis table, in bits.
pub fn mutual_information(joint: &JointTable) -> Result<f64> {
    if joint.dims.len() != 2 {
        return Err(Error::InvalidTable(format!(
            "expected 2 axes, got {}",
            joint.dims.len()
        )));
    }
    Ok(mi_2d(joint))
}

/// `I(A;B|C)` of a three-axis table `(A, B, C)`, in bits.
pub fn conditional_mi(joint: &JointTable) -> Result<f64> {
    if joint.dims.len() != 3 {
        return Err(Error::InvalidTable(format!(
            "expected 3 axes, got {}",
            joint.dims.len()
        )));
    }
    Ok(cmi_3d(joint))
}

/// Auxiliary alphabet sizes. The outer-bound auxiliary `U` uses `u1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxSizes {
    pub u1: usize,
    pub w1: usize,
    pub v2: usize,
    pub w2: usize,
}

impl AuxSizes {
    pub fn uniform(n: usize) -> Self {
        AuxSizes {
            u1: n,
            w1: n,
            v2: n,
            w2: n,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.u1 == 0 || self.w1 == 0 || self.v2 == 0 || self.w2 == 0 {
            return Err(Error::AlphabetMismatch(format!(
                "auxiliary alphabets must be nonempty: {self:?}"
            )));
        }
        Ok(())
    }
}

/// Which region a distribution parameterizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    /// Rate splitting with Marton binning: `(U₁, W₁, V₂, W₂)`.
    Full,
    /// No common cognitive layer: `(W₁, V₂, W₂)`.
    R1,
    /// Superposition only: independent `(U₁, V₂)`.
    R2,
    /// Superposition with the common layer binned against `V₂`: correlated
    /// `(U₁, V₂)`.
    R3,
    /// Outer bound over `p(u, x₁, x₂)`.
    Outer,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Full => "R",
            Variant::R1 => "R1",
            Variant::R2 => "R2",
            Variant::R3 => "R3",
            Variant::Outer => "Co2",
        }
    }
}

/// `p(u₁)p(v₂)p(w₁,w₂|v₂,u₁)p(x₁|w₁,w₂,v₂,u₁)p(x₂|v₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullDist {
    pub aux: AuxSizes,
    pub pu1: Kernel,
    pub pv2: Kernel,
    pub pw: Kernel,
    pub px1: Kernel,
    pub px2: Kernel,
}

/// `p(v₂)p(w₁,w₂|v₂)p(x₁|w₁,w₂,v₂)p(x₂|v₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct R1Dist {
    pub w1: usize,
    pub v2: usize,
    pub w2: usize,
    pub pv2: Kernel,
    pub pw: Kernel,
    pub px1: Kernel,
    pub px2: Kernel,
}

/// `p(u₁)p(v₂)p(x₁|v₂,u₁)p(x₂|v₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct R2Dist {
    pub u1: usize,
    pub v2: usize,
    pub pu1: Kernel,
    pub pv2: Kernel,
    pub px1: Kernel,
    pub px2: Kernel,
}

/// `p(u₁,v₂)p(x₁|v₂,u₁)p(x₂|v₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct R3Dist {
    pub u1: usize,
    pub v2: usize,
    pub puv: Kernel,
    pub px1: Kernel,
    pub px2: Kernel,
}

/// `p(u)p(x₁,x₂|u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterDist {
    pub u: usize,
    pub pu: Kernel,
    pub px: Kernel,
}

impl FullDist {
    pub fn new(
        aux: AuxSizes,
        pu1: Kernel,
        pv2: Kernel,
        pw: Kernel,
        px1: Kernel,
        px2: Kernel,
    ) -> Result<Self> {
        aux.validate()?;
        let AuxSizes { u1, w1, v2, w2 } = aux;
        pu1.expect_shape("p(u1)", 1, u1)?;
        pv2.expect_shape("p(v2)", 1, v2)?;
        pw.expect_shape("p(w1,w2|v2,u1)", v2 * u1, w1 * w2)?;
        px1.expect_shape("p(x1|w1,w2,v2,u1)", w1 * w2 * v2 * u1, px1.cols)?;
        px2.expect_shape("p(x2|v2)", v2, px2.cols)?;
        Ok(FullDist {
            aux,
            pu1,
            pv2,
            pw,
            px1,
            px2,
        })
    }

    /// Embeds an `R₁` distribution with a singleton `U₁`.
    pub fn from_r1(d: &R1Dist) -> Self {
        FullDist {
            aux: AuxSizes {
                u1: 1,
                w1: d.w1,
                v2: d.v2,
                w2: d.w2,
            },
            pu1: Kernel::uniform(1, 1),
            pv2: d.pv2.clone(),
            pw: d.pw.clone(),
            px1: d.px1.clone(),
            px2: d.px2.clone(),
        }
    }

    /// Embeds an `R₂` distribution with a singleton `W₁` and `W₂ = V₂`.
    pub fn from_r2(d: &R2Dist) -> Self {
        let (nu, nv) = (d.u1, d.v2);
        // rows (v2, u1) -> column (w1 = 0, w2 = v2)
        let pw = Kernel::deterministic(nv * nu, nv, |r| r / nu);
        // rows (w1 = 0, w2, v2, u1): X1 depends only on (v2, u1)
        let nx1 = d.px1.cols;
        let mut data = Vec::with_capacity(nv * nv * nu * nx1);
        for _w2 in 0..nv {
            for v in 0..nv {
                for u in 0..nu {
                    data.extend_from_slice(d.px1.row(v * nu + u));
                }
            }
        }
        FullDist {
            aux: AuxSizes {
                u1: nu,
                w1: 1,
                v2: nv,
                w2: nv,
            },
            pu1: d.pu1.clone(),
            pv2: d.pv2.clone(),
            pw,
            px1: Kernel {
                rows: nv * nv * nu,
                cols: nx1,
                data,
            },
            px2: d.px2.clone(),
        }
    }
}

impl R1Dist {
    /// Embeds an `R₂` distribution with a singleton `U₁` by taking `W₁`
    /// constant and `W₂ = V₂`.
    pub fn from_r2(d: &R2Dist) -> Result<Self> {
        if !d.has_trivial_u1() {
            return Err(Error::AlphabetMismatch(format!(
                "R1 has no common layer, but |U1| = {}",
                d.u1
            )));
        }
        let nv = d.v2;
        let nx1 = d.px1.cols;
        let mut data = Vec::with_capacity(nv * nv * nx1);
        for _w2 in 0..nv {
            for v in 0..nv {
                data.extend_from_slice(d.px1.row(v));
            }
        }
        Ok(R1Dist {
            w1: 1,
            v2: nv,
            w2: nv,
            pv2: d.pv2.clone(),
            pw: Kernel::identity(nv),
            px1: Kernel {
                rows: nv * nv,
                cols: nx1,
                data,
            },
            px2: d.px2.clone(),
        })
    }

    #[allow(clippy::too_many_arguments)]
    pub fn new(
        w1: usize,
        v2: usize,
        w2: usize,
        pv2: Kernel,
        pw: Kernel,
        px1: Kernel,
        px2: Kernel,
    ) -> Result<Self> {
        AuxSizes { u1: 1, w1, v2, w2 }.validate()?;
        pv2.expect_shape("p(v2)", 1, v2)?;
        pw.expect_shape("p(w1,w2|v2)", v2, w1 * w2)?;
        px1.expect_shape("p(x1|w1,w2,v2)", w1 * w2 * v2, px1.cols)?;
        px2.expect_shape("p(x2|v2)", v2, px2.cols)?;
        Ok(R1Dist {
            w1,
            v2,
            w2,
            pv2,
            pw,
            px1,
            px2,
        })
    }
}

impl R2Dist {
    /// Whether the common layer is absent, i.e. `U₁` is a singleton.
    pub fn has_trivial_u1(&self) -> bool {
        self.u1 == 1
    }

    pub fn new(u1: usize, v2: usize, pu1: Kernel, pv2: Kernel, px1: Kernel, px2: Kernel) -> Result<Self> {
        AuxSizes { u1, w1: 1, v2, w2: 1 }.validate()?;
        pu1.expect_shape("p(u1)", 1, u1)?;
        pv2.expect_shape("p(v2)", 1, v2)?;
        px1.expect_shape("p(x1|v2,u1)", v2 * u1, px1.cols)?;
        px2.expect_shape("p(x2|v2)", v2, px2.cols)?;
        Ok(R2Dist {
            u1,
            v2,
            pu1,
            pv2,
            px1,
            px2,
        })
    }
}

impl R3Dist {
    pub fn new(u1: usize, v2: usize, puv: Kernel, px1: Kernel, px2: Kernel) -> Result<Self> {
        AuxSizes { u1, w1: 1, v2, w2: 1 }.validate()?;
        puv.expect_shape("p(u1,v2)", 1, u1 * v2)?;
        px1.expect_shape("p(x1|v2,u1)", v2 * u1, px1.cols)?;
        px2.expect_shape("p(x2|v2)", v2, px2.cols)?;
        Ok(R3Dist {
            u1,
            v2,
            puv,
            px1,
            px2,
        })
    }
}

impl OuterDist {
    pub fn new(u: usize, nx2: usize, pu: Kernel, px: Kernel) -> Result<Self> {
        AuxSizes::uniform(u.max(1)).validate()?;
        pu.expect_shape("p(u)", 1, u)?;
        if nx2 == 0 || !px.cols.is_multiple_of(nx2) {
            return Err(Error::AlphabetMismatch(format!(
                "p(x1,x2|u) has {} columns, not a multiple of |X2| = {nx2}",
                px.cols
            )));
        }
        px.expect_shape("p(x1,x2|u)", u, px.cols)?;
        Ok(OuterDist { u, pu, px })
    }
}

/// A distribution stored as the factors of one admissible factorization.
#[derive(Debug, Clone, PartialEq)]
pub enum FactoredDist {
    Full(FullDist),
    R1(R1Dist),
    R2(R2Dist),
    R3(R3Dist),
    Outer(OuterDist),
}

impl FactoredDist {
    pub fn variant(&self) -> Variant {
        match self {
            FactoredDist::Full(_) => Variant::Full,
            FactoredDist::R1(_) => Variant::R1,
            FactoredDist::R2(_) => Variant::R2,
            FactoredDist::R3(_) => Variant::R3,
            FactoredDist::Outer(_) => Variant::Outer,
        }
    }

    /// `(|U₁|, |W₁|, |V₂|, |W₂|)` in the joint layout.
    fn aux_dims(&self) -> [usize; 4] {
        match self {
            FactoredDist::Full(d) => [d.aux.u1, d.aux.w1, d.aux.v2, d.aux.w2],
            FactoredDist::R1(d) => [1, d.w1, d.v2, d.w2],
            FactoredDist::R2(d) => [d.u1, 1, d.v2, 1],
            FactoredDist::R3(d) => [d.u1, 1, d.v2, 1],
            FactoredDist::Outer(d) => [d.u, 1, 1, 1],
        }
    }

    /// `(|X₁|, |X₂|)` implied by the input kernels.
    fn input_dims(&self, nx2_hint: usize) -> (usize, usize) {
        match self {
            FactoredDist::Full(d) => (d.px1.cols, d.px2.cols),
            FactoredDist::R1(d) => (d.px1.cols, d.px2.cols),
            FactoredDist::R2(d) => (d.px1.cols, d.px2.cols),
            FactoredDist::R3(d) => (d.px1.cols, d.px2.cols),
            FactoredDist::Outer(d) => (d.px.cols / nx2_hint, nx2_hint),
        }
    }

    /// Probability of `(u₁, w₁, v₂, w₂, x₁, x₂)` from the factors.
    #[inline]
    fn input_weight(&self, i: &[usize; 8], nx2: usize) -> f64 {
        match self {
            FactoredDist::Full(d) => {
                let AuxSizes { u1: nu, w2: nw2, v2: nv, .. } = d.aux;
                let w = i[W1] * nw2 + i[W2];
                d.pu1.get(0, i[U1])
                    * d.pv2.get(0, i[V2])
                    * d.pw.get(i[V2] * nu + i[U1], w)
                    * d.px1.get((w * nv + i[V2]) * nu + i[U1], i[X1])
                    * d.px2.get(i[V2], i[X2])
            }
            FactoredDist::R1(d) => {
                let w = i[W1] * d.w2 + i[W2];
                d.pv2.get(0, i[V2])
                    * d.pw.get(i[V2], w)
                    * d.px1.get(w * d.v2 + i[V2], i[X1])
                    * d.px2.get(i[V2], i[X2])
            }
            FactoredDist::R2(d) => {
                d.pu1.get(0, i[U1])
                    * d.pv2.get(0, i[V2])
                    * d.px1.get(i[V2] * d.u1 + i[U1], i[X1])
                    * d.px2.get(i[V2], i[X2])
            }
            FactoredDist::R3(d) => {
                d.puv.get(0, i[U1] * d.v2 + i[V2])
                    * d.px1.get(i[V2] * d.u1 + i[U1], i[X1])
                    * d.px2.get(i[V2], i[X2])
            }
            FactoredDist::Outer(d) => d.pu.get(0, i[U]) * d.px.get(i[U], i[X1] * nx2 + i[X2]),
        }
    }

    /// Joint over `(U₁, W₁, V₂, W₂, X₁, X₂, Y₁, Y₂)` including the channel.
    pub fn materialize(&self, ch: &DmcChannel) -> Result<JointTable> {
        let (nx1, nx2) = self.input_dims(ch.nx2);
        if nx1 != ch.nx1 || nx2 != ch.nx2 {
            return Err(Error::AlphabetMismatch(format!(
                "distribution inputs {nx1}x{nx2}, channel inputs {}x{}",
                ch.nx1, ch.nx2
            )));
        }
        let [nu, nw1, nv, nw2] = self.aux_dims();
        let dims = vec![nu, nw1, nv, nw2, nx1, nx2, ch.ny1, ch.ny2];
        let entries: u128 = dims.iter().map(|&d| d as u128).product();
        if entries > MAX_JOINT_ENTRIES {
            return Err(Error::TableTooLarge {
                entries,
                limit: MAX_JOINT_ENTRIES,
            });
        }
        let mut probs = Vec::with_capacity(entries as usize);
        let mut i = [0usize; 8];
        for _ in 0..entries {
            let p = self.input_weight(&i, nx2)
                * ch.k1.get(i[X1], i[Y1])
                * ch.k2.get(i[X1] * nx2 + i[X2], i[Y2]);
            probs.push(p);
            for a in (0..8).rev() {
                i[a] += 1;
                if i[a] < dims[a] {
                    break;
                }
                i[a] = 0;
            }
        }
        let s: f64 = probs.iter().sum();
        debug_assert!((s - 1.0).abs() < TABLE_TOL, "joint sums to {s}");
        Ok(JointTable { dims, probs })
    }

    /// Draws every factor row independently: unconditional factors with
    /// [`random_marginal_row`], conditional ones with [`random_row`].
    pub fn random(variant: Variant, aux: AuxSizes, nx1: usize, nx2: usize, rng: &mut impl Rng) -> Self {
        let AuxSizes { u1, w1, v2, w2 } = aux;
        match variant {
            Variant::Full => FactoredDist::Full(FullDist {
                aux,
                pu1: Kernel::random_marginal(u1, rng),
                pv2: Kernel::random_marginal(v2, rng),
                pw: Kernel::random(v2 * u1, w1 * w2, rng),
                px1: Kernel::random(w1 * w2 * v2 * u1, nx1, rng),
                px2: Kernel::random(v2, nx2, rng),
            }),
            Variant::R1 => FactoredDist::R1(R1Dist {
                w1,
                v2,
                w2,
                pv2: Kernel::random_marginal(v2, rng),
                pw: Kernel::random(v2, w1 * w2, rng),
                px1: Kernel::random(w1 * w2 * v2, nx1, rng),
                px2: Kernel::random(v2, nx2, rng),
            }),
            Variant::R2 => FactoredDist::R2(R2Dist {
                u1,
                v2,
                pu1: Kernel::random_marginal(u1, rng),
                pv2: Kernel::random_marginal(v2, rng),
                px1: Kernel::random(v2 * u1, nx1, rng),
                px2: Kernel::random(v2, nx2, rng),
            }),
            Variant::R3 => FactoredDist::R3(R3Dist {
                u1,
                v2,
                puv: Kernel::random_marginal(u1 * v2, rng),
                px1: Kernel::random(v2 * u1, nx1, rng),
                px2: Kernel::random(v2, nx2, rng),
            }),
            Variant::Outer => FactoredDist::Outer(OuterDist {
                u: u1,
                pu: Kernel::random_marginal(u1, rng),
                px: Kernel::random(u1, nx1 * nx2, rng),
            }),
        }
    }
}

fn expect(d: &FactoredDist, v: Variant) -> Result<()> {
    if d.variant() != v {
        return Err(Error::VariantMismatch {
            expected: v.name(),
            got: d.variant().name(),
        });
    }
    Ok(())
}

/// Rate splitting with Marton binning:
/// `R₁ ≤ I(U₁,W₁;Y₁) − I(W₁;V₂|U₁)`, `R₂ ≤ I(V₂,W₂;Y₂|U₁)`, and the sum
/// bounded by the smaller of the two decoding orders.
pub fn eval_region_r(d: &FactoredDist, ch: &DmcChannel) -> Result<Pentagon> {
    expect(d, Variant::Full)?;
    Ok(full_bounds(&d.materialize(ch)?))
}

fn full_bounds(t: &JointTable) -> Pentagon {
    let i_uw_y1 = t.mi(&[U1, W1], &[Y1]);
    let i_w_v_u = t.cmi(&[W1], &[V2], &[U1]);
    let i_vw_y2_u = t.cmi(&[V2, W2], &[Y2], &[U1]);
    let i_w_wv_u = t.cmi(&[W1], &[W2, V2], &[U1]);
    let i_vwu_y2 = t.mi(&[V2, W2, U1], &[Y2]);
    let i_w_y1_u = t.cmi(&[W1], &[Y1], &[U1]);
    Pentagon::new(
        i_uw_y1 - i_w_v_u,
        i_vw_y2_u,
        (i_vw_y2_u + i_uw_y1 - i_w_wv_u).min(i_vwu_y2 + i_w_y1_u - i_w_wv_u),
    )
}

/// No common cognitive layer:
/// `R₁ ≤ I(W₁;Y₁) − I(W₁;V₂)`, `R₂ ≤ I(V₂,W₂;Y₂)`,
/// `R₁+R₂ ≤ I(V₂,W₂;Y₂) + I(W₁;Y₁) − I(W₁;W₂,V₂)`.
pub fn eval_region_r1(d: &FactoredDist, ch: &DmcChannel) -> Result<Pentagon> {
    expect(d, Variant::R1)?;
    let t = d.materialize(ch)?;
    let i_w_y1 = t.mi(&[W1], &[Y1]);
    let i_vw_y2 = t.mi(&[V2, W2], &[Y2]);
    Ok(Pentagon::new(
        i_w_y1 - t.mi(&[W1], &[V2]),
        i_vw_y2,
        i_vw_y2 + i_w_y1 - t.mi(&[W1], &[W2, V2]),
    ))
}

/// Superposition only:
/// `R₁ ≤ I(U₁;Y₁)`, `R₂ ≤ I(V₂;Y₂|U₁)`, `R₁+R₂ ≤ I(V₂,U₁;Y₂)`.
pub fn eval_region_r2(d: &FactoredDist, ch: &DmcChannel) -> Result<Pentagon> {
    expect(d, Variant::R2)?;
    let t = d.materialize(ch)?;
    Ok(Pentagon::new(
        t.mi(&[U1], &[Y1]),
        t.cmi(&[V2], &[Y2], &[U1]),
        t.mi(&[V2, U1], &[Y2]),
    ))
}

/// Superposition with the common cognitive layer binned against `V₂`:
/// `R₁ ≤ I(U₁;Y₁) − I(U₁;V₂)`, `R₂ ≤ I(V₂;U₁,Y₂)`, `R₁+R₂ ≤ I(U₁,V₂;Y₂)`.
pub fn eval_region_r3(d: &FactoredDist, ch: &DmcChannel) -> Result<Pentagon> {
    expect(d, Variant::R3)?;
    let t = d.materialize(ch)?;
    Ok(Pentagon::new(
        t.mi(&[U1], &[Y1]) - t.mi(&[U1], &[V2]),
        t.mi(&[V2], &[U1, Y2]),
        t.mi(&[U1, V2], &[Y2]),
    ))
}

/// Outer bound at one `p(u,x₁,x₂)`:
/// `R₁ ≤ min{I(X₁;Y₁|X₂), I(U;Y₁)}`, `R₂ ≤ I(X₁,X₂;Y₂|U)`,
/// `R₁+R₂ ≤ I(X₁,X₂;Y₂)`.
pub fn eval_outer_co2_dmc(d: &FactoredDist, ch: &DmcChannel) -> Result<Pentagon> {
    expect(d, Variant::Outer)?;
    let t = d.materialize(ch)?;
    Ok(Pentagon::new(
        t.cmi(&[X1], &[Y1], &[X2]).min(t.mi(&[U], &[Y1])),
        t.cmi(&[X1, X2], &[Y2], &[U]),
        t.mi(&[X1, X2], &[Y2]),
    ))
}

/// Dispatches on the distribution's variant.
pub fn eval_region(d: &FactoredDist, ch: &DmcChannel) -> Result<Pentagon> {
    match d.variant() {
        Variant::Full => eval_region_r(d, ch),
        Variant::R1 => eval_region_r1(d, ch),
        Variant::R2 => eval_region_r2(d, ch),
        Variant::R3 => eval_region_r3(d, ch),
        Variant::Outer => eval_outer_co2_dmc(d, ch),
    }
}

fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Outcome of sampling the high-interference condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HighInterferenceReport {
    /// No sampled distribution had a negative margin (beyond `1e-12`).
    pub holds_on_samples: bool,
    /// `min I(X₁;Y₂|X₂) − I(X₁;Y₁|X₂)` over the samples.
    pub worst_margin: f64,
    /// `p(x₁,x₂)` attaining the worst margin, flattened as `x₁·|X₂| + x₂`.
    pub witness: Vec<f64>,
    pub samples: usize,
}

/// Samples `p(x₁,x₂)` from the flat Dirichlet and evaluates
/// `I(X₁;Y₂|X₂) − I(X₁;Y₁|X₂)`.
///
/// A negative worst margin refutes the condition; a nonnegative one is only
/// evidence that it holds.
pub fn check_high_interference(ch: &DmcChannel, n_samples: usize, seed: u64) -> Result<HighInterferenceReport> {
    let n = n_samples.max(1);
    let results: Vec<(f64, Vec<f64>)> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let p = dirichlet_row(&mut rng, ch.nx1 * ch.nx2);
            let d = FactoredDist::Outer(OuterDist {
                u: 1,
                pu: Kernel::uniform(1, 1),
                px: Kernel {
                    rows: 1,
                    cols: p.len(),
                    data: p.clone(),
                },
            });
            let t = d.materialize(ch)?;
            let margin = t.cmi(&[X1], &[Y2], &[X2]) - t.cmi(&[X1], &[Y1], &[X2]);
            Ok((margin, p))
        })
        .collect::<Result<_>>()?;
    let (worst_margin, witness) = results
        .into_iter()
        .fold((f64::INFINITY, Vec::new()), |best, cur| {
            if cur.0 < best.0 {
                cur
            } else {
                best
            }
        });
    Ok(HighInterferenceReport {
        holds_on_samples: worst_margin >= -1e-12,
        worst_margin,
        witness,
        samples: n,
    })
}

/// Sampled inner approximation of a region: hull of the pentagons of
/// `n_samples` random distributions. Sample `i` uses its own stream of the
/// seeded generator, so the result is independent of thread scheduling.
pub fn random_search_region(
    ch: &DmcChannel,
    variant: Variant,
    aux: AuxSizes,
    n_samples: usize,
    seed: u64,
    n_directions: usize,
) -> Result<ConvexRegion> {
    aux.validate()?;
    if n_samples == 0 {
        return Err(Error::InvalidGrid("n_samples must be at least 1".into()));
    }
    let pents: Vec<Pentagon> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let d = FactoredDist::random(variant, aux, ch.nx1, ch.nx2, &mut rng);
            eval_region(&d, ch)
        })
        .collect::<Result<_>>()?;
    hull_of_union(
        pents,
        n_directions,
        format!(
            "{} random search ({n_samples} samples, seed {seed}, aux {}/{}/{}/{})",
            variant.name(),
            aux.u1,
            aux.w1,
            aux.v2,
            aux.w2
        ),
    )
}
