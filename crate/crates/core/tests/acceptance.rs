//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Each criterion also has a wall-clock budget.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cograte::bounds::{co1_pentagon, co1_region, OuterBounds};
use cograte::cli::{execute, Command, FigureArgs, FigureName, GridArgs};
use cograte::dmc::{
    axis::*, dirichlet_row, eval_region_r, eval_region_r1, eval_region_r2, mutual_information,
    AuxSizes, DmcChannel, FactoredDist, FullDist, JointTable, Kernel, R1Dist, Variant,
};
use cograte::gaussian::{
    b_star, g1_region, g2_region, g3p_pentagon, g3p_r2_slack, g3p_region, g_region,
};
use cograte::geometry::{directed_gap, hull_of_union, subset_within, ConvexRegion};
use cograte::model::{linspace, ChannelParams, Grids, Pentagon, RatePair};

type Outcome = Result<String, String>;
/// Name, check, wall-clock budget in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ch(p1: f64, p2: f64, b: f64) -> ChannelParams {
    ChannelParams::new(p1, p2, b).unwrap()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_threshold() -> Outcome {
    let bs = b_star(&ch(6.0, 6.0, 1.0));
    let exact = (13.0f64 / 7.0).sqrt();
    check(
        (bs - exact).abs() < 1e-15 && ((bs * 1e4).round() / 1e4 - 1.3628).abs() < 1e-12,
        format!("b_star = {bs:.9}"),
    )
}

fn c2_capacity_meets_bound() -> Outcome {
    let g = Grids::default();
    let mut detail = Vec::new();
    let mut ok = true;
    for (b, meets) in [(1.0, true), (1.3628, true), (3.3628, false)] {
        let c = ch(6.0, 6.0, b);
        let gap = directed_gap(&co1_region(&c, &g).unwrap(), &g3p_region(&c, &g).unwrap()).unwrap();
        ok &= if meets { gap <= 1e-3 } else { gap > 1e-2 };
        detail.push(format!("b={b}: gap {gap:.3e}"));
    }
    check(ok, detail.join(", "))
}

fn c3_algebraic_mechanism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let c = ch(
            rng.random_range(0.1..20.0),
            rng.random_range(0.1..20.0),
            rng.random_range(0.5..5.0),
        );
        for a in linspace(0.0, 1.0, 201) {
            let g = g3p_pentagon(&c, a).unwrap();
            let o = co1_pentagon(&c, (1.0 - a).sqrt()).unwrap();
            worst = worst
                .max((g.r1_max - o.r1_max).abs())
                .max((g.sum_max - o.sum_max).abs());
        }
    }
    check(worst <= 1e-9, format!("max deviation {worst:.2e} bits"))
}

fn c4_looseness_condition() -> Outcome {
    let alphas = linspace(0.0, 1.0, 201);
    let min_slack = |b: f64| {
        let c = ch(6.0, 6.0, b);
        alphas
            .iter()
            .map(|&a| g3p_r2_slack(&c, a).unwrap())
            .fold(f64::INFINITY, f64::min)
    };
    let bs = b_star(&ch(6.0, 6.0, 1.0));
    let inside = [1.0, 0.5 * (1.0 + bs), bs].map(min_slack);
    let outside = min_slack(3.3628);
    check(
        inside.iter().all(|&s| s >= -1e-9) && outside < 0.0,
        format!(
            "min slack for b in [1, b_star]: {:.2e}; at b=3.3628: {outside:.3}",
            inside.iter().copied().fold(f64::INFINITY, f64::min)
        ),
    )
}

fn c5_fig3() -> Outcome {
    let g = Grids {
        points: 101,
        ..Grids::default()
    };
    let mut ok = true;
    let mut detail = Vec::new();
    for b in [1.3628, 3.3628] {
        let c = ch(6.0, 6.0, b);
        let full = g_region(&c, &g).unwrap();
        let g1 = g1_region(&c, &g).unwrap();
        let g2 = g2_region(&c, &g).unwrap();
        let d2 = directed_gap(&full, &g2).unwrap();
        let d1 = directed_gap(&full, &g1).unwrap();
        ok &= d2 <= 5e-3 && d1 > 5e-3;
        detail.push(format!("b={b}: gap(G,G2) {d2:.2e}, gap(G,G1) {d1:.3}"));
    }
    check(ok, detail.join("; "))
}

fn c6_fig4() -> Outcome {
    let g = Grids::default();
    let c = ch(6.0, 6.0, 1.3628);
    let g3p = g3p_region(&c, &g).unwrap();
    let over_g1 = directed_gap(&g3p, &g1_region(&c, &g).unwrap()).unwrap();
    let over_g2 = directed_gap(&g3p, &g2_region(&c, &g).unwrap()).unwrap();
    let c = ch(6.0, 6.0, 3.3628);
    let g2_over = directed_gap(&g2_region(&c, &g).unwrap(), &g3p_region(&c, &g).unwrap()).unwrap();
    check(
        over_g1 > 5e-3 && over_g2 > 5e-3 && g2_over > 5e-3,
        format!(
            "b=1.3628: G3' beyond G1 {over_g1:.3}, beyond G2 {over_g2:.3}; b=3.3628: G2 beyond G3' {g2_over:.3}"
        ),
    )
}

fn c7_fig5() -> Outcome {
    let c = ch(6.0, 0.0, 2.0);
    let o = OuterBounds::compute(&c, &Grids::default()).unwrap();
    let sub = subset_within(&o.co2, &o.co1, 1e-9).unwrap();
    let gap = directed_gap(&o.co1, &o.co2).unwrap();
    let corner = RatePair::new(0.5 * 7f64.log2(), 0.918);
    let co1_in = o.co1.contains(corner, 0.0);
    let co2_in = o.co2_contains(corner, 0.0) || o.co2.contains(corner, 0.0);
    check(
        sub.is_subset && gap > 5e-2 && co1_in && !co2_in,
        format!(
            "Co2 in Co1: {}, gap {gap:.3}, corner in Co1: {co1_in}, in Co2: {co2_in}",
            sub.is_subset
        ),
    )
}

/// Andrew's monotone chain; returns hull vertices counterclockwise.
fn monotone_chain(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Largest violation of the counterclockwise polygon's edges by `p`; ≤ 0
/// when inside.
fn outside_by(hull: &[[f64; 2]], p: [f64; 2]) -> f64 {
    let n = hull.len();
    (0..n)
        .map(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % n]);
            let (ex, ey) = (b[0] - a[0], b[1] - a[1]);
            let len = (ex * ex + ey * ey).sqrt();
            // outward normal of a ccw edge is (ey, -ex)
            ((p[0] - a[0]) * ey - (p[1] - a[1]) * ex) / len
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn c8_geometry_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n = rng.random_range(1..40);
        let family: Vec<Pentagon> = (0..n)
            .map(|_| {
                let a = rng.random_range(0.0..3.0);
                let b = rng.random_range(0.0..3.0);
                Pentagon::new(a, b, rng.random_range(0.0..a + b + 0.5))
            })
            .collect();
        let region: ConvexRegion = hull_of_union(family.clone(), 721, "oracle").unwrap();
        let cloud: Vec<[f64; 2]> = family
            .iter()
            .flat_map(|p| p.vertices())
            .map(|v| [v.r1, v.r2])
            .collect();
        let hull = monotone_chain(cloud);
        // oracle hull inside the computed region
        for v in &hull {
            let excess = region
                .directions
                .iter()
                .zip(&region.support)
                .map(|(d, h)| d[0] * v[0] + d[1] * v[1] - h)
                .fold(f64::NEG_INFINITY, f64::max);
            worst = worst.max(excess);
        }
        // computed boundary inside the oracle hull
        if hull.len() >= 3 {
            for p in &region.boundary {
                worst = worst.max(outside_by(&hull, [p.r1, p.r2]));
            }
        }
    }
    check(worst <= 2e-3, format!("max two-way discrepancy {worst:.2e} bits"))
}

fn random_channel(rng: &mut ChaCha8Rng) -> DmcChannel {
    let kernel = |rng: &mut ChaCha8Rng, rows: usize, cols: usize| {
        let data = (0..rows).flat_map(|_| dirichlet_row(rng, cols)).collect();
        Kernel::new("k", rows, cols, data).unwrap()
    };
    let nx1 = rng.random_range(1..=3);
    let nx2 = rng.random_range(1..=3);
    let ny1 = rng.random_range(1..=3);
    let ny2 = rng.random_range(1..=3);
    let k1 = kernel(rng, nx1, ny1);
    let k2 = kernel(rng, nx1 * nx2, ny2);
    DmcChannel::new(k1, nx2, k2).unwrap()
}

fn same(a: Pentagon, b: Pentagon) -> f64 {
    (a.r1_max - b.r1_max)
        .abs()
        .max((a.r2_max - b.r2_max).abs())
        .max((a.sum_max - b.sum_max).abs())
}

fn c9_dmc() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut chain = 0.0f64;
    for i in 0..1000 {
        let c = random_channel(&mut rng);
        let variant = [Variant::Full, Variant::R2, Variant::R3][i % 3];
        let aux = AuxSizes {
            u1: rng.random_range(1..=3),
            w1: rng.random_range(1..=2),
            v2: rng.random_range(1..=3),
            w2: rng.random_range(1..=2),
        };
        let d = FactoredDist::random(variant, aux, c.nx1, c.nx2, &mut rng);
        let t = d.materialize(&c).unwrap();
        let lhs = t.mi(&[V2, U1], &[Y2]);
        let rhs = t.mi(&[U1], &[Y2]) + t.cmi(&[V2], &[Y2], &[U1]);
        chain = chain.max((lhs - rhs).abs());
    }

    let mut special = 0.0f64;
    for _ in 0..100 {
        let c = random_channel(&mut rng);
        // R with a singleton U₁ against R₁
        let d = FactoredDist::random(Variant::R1, AuxSizes::uniform(2), c.nx1, c.nx2, &mut rng);
        let FactoredDist::R1(r1) = &d else { unreachable!() };
        let full = FactoredDist::Full(FullDist::from_r1(r1));
        special = special.max(same(
            eval_region_r1(&d, &c).unwrap(),
            eval_region_r(&full, &c).unwrap(),
        ));
        // R₁ with a singleton W₁ and W₂ = V₂ against R₂
        let aux = AuxSizes { u1: 1, w1: 1, v2: 3, w2: 1 };
        let d = FactoredDist::random(Variant::R2, aux, c.nx1, c.nx2, &mut rng);
        let FactoredDist::R2(r2) = &d else { unreachable!() };
        let r1 = FactoredDist::R1(R1Dist::from_r2(r2).unwrap());
        special = special.max(same(
            eval_region_r2(&d, &c).unwrap(),
            eval_region_r1(&r1, &c).unwrap(),
        ));
    }

    let e = 0.11f64;
    let t = JointTable::new(
        vec![2, 2],
        vec![(1.0 - e) / 2.0, e / 2.0, e / 2.0, (1.0 - e) / 2.0],
    )
    .unwrap();
    let h2 = -e * e.log2() - (1.0 - e) * (1.0 - e).log2();
    let bsc = (mutual_information(&t).unwrap() - (1.0 - h2)).abs();
    check(
        chain <= 1e-12 && special <= 1e-12 && bsc <= 1e-9,
        format!("chain rule {chain:.1e}, specialization {special:.1e}, BSC {bsc:.1e}"),
    )
}

fn c10_determinism() -> Outcome {
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        let cmd = Command::Figure(FigureArgs {
            name: FigureName::Fig2,
            grid: GridArgs {
                points: 201,
                directions: 721,
                cov_points: 41,
                lambda_sweep: false,
                seed: 0,
            },
            b: None,
            out_dir: dir.path().to_path_buf(),
        });
        execute(&cmd).unwrap();
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|x| x == "csv"))
            .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
            .collect();
        files.sort();
        files
    };
    let (a, b) = (run(), run());
    check(
        a.len() == 6 && a == b,
        format!("{} CSVs, identical: {}", a.len(), a == b),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("threshold b_star(6,6) = 1.3628", c1_threshold, 1),
        ("G3' meets Co1 for b in {1, 1.3628}, not at 3.3628", c2_capacity_meets_bound, 5),
        ("G3' and Co1 pentagons coincide under rho = sqrt(1-alpha)", c3_algebraic_mechanism, 1),
        ("per-alpha looseness of the primary bound", c4_looseness_condition, 1),
        ("G coincides with G2, G1 strictly smaller", c5_fig3, 60),
        ("G3' vs G1/G2 ordering flips with b", c6_fig4, 60),
        ("Co2 strictly inside Co1 at (6,0,2)", c7_fig5, 120),
        ("support-function hull vs monotone-chain hull", c8_geometry_oracle, 10),
        ("DMC chain rule, specialization, BSC", c9_dmc, 30),
        ("fig2 CSVs byte-identical across runs", c10_determinism, 30),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let over = took > Duration::from_secs(*budget);
        let (verdict, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget} s budget")),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!(
            "{verdict} [{:>2}] {name}: {detail} ({:.2} s)",
            i + 1,
            took.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
