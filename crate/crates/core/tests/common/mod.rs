//! Independent oracles and random generators shared by the integration
//! suites. Nothing here calls the census, skeleton or SNF code it checks.
#![allow(dead_code)]

pub mod suites;

use fanifold_core::fan::Fan;
use fanifold_core::fanifold::Fanifold;
use fanifold_core::lattice::Vector;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, RngSeed};

pub const SEED: u64 = 0x5eed;

pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(SEED),
        rng_algorithm: RngAlgorithm::ChaCha,
        failure_persistence: None,
        ..Config::default()
    }
}

/// Rank over ℚ by plain Gaussian elimination.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Polynomials `f(x, y)` with exponents in `[0, D]²` and `f(t, 0) = f(0, t)`.
pub fn symmetric_restriction_count(d: i64) -> usize {
    let monos: Vec<(i64, i64)> = (0..=d).flat_map(|a| (0..=d).map(move |b| (a, b))).collect();
    let rows: Vec<Vec<i64>> = (0..=d)
        .map(|k| {
            monos
                .iter()
                .map(|&m| i64::from(m == (k, 0)) - i64::from(m == (0, k)))
                .collect()
        })
        .collect();
    monos.len() - rank(&rows)
}

/// Curve components glued at nodes: each component contributes the listed
/// exponents of a one-variable Laurent polynomial, and a node `(a, b)`
/// equates the values of components `a` and `b` at their common point.
pub fn glued_curve_count(components: &[Vec<i64>], nodes: &[(usize, usize)]) -> usize {
    let offsets: Vec<usize> = components.iter().scan(0, |acc, c| Some(std::mem::replace(acc, *acc + c.len()))).collect();
    let vars: usize = components.iter().map(Vec::len).sum();
    let value_at_origin = |c: usize| -> Vec<i64> {
        let mut row = vec![0; vars];
        if let Some(k) = components[c].iter().position(|&e| e == 0) {
            row[offsets[c] + k] = 1;
        }
        row
    };
    let rows: Vec<Vec<i64>> = nodes
        .iter()
        .map(|&(a, b)| value_at_origin(a).iter().zip(value_at_origin(b)).map(|(x, y)| x - y).collect())
        .collect();
    vars - rank(&rows)
}

pub fn affine_line(d: i64) -> Vec<i64> {
    (0..=d).collect()
}

pub fn projective_line(_d: i64) -> Vec<i64> {
    vec![0]
}

/// `{u : |uᵢ| ≤ D, ⟨u, v⟩ ≥ 0 for every ray v}`.
pub fn dual_point_count(rank: usize, rays: &[Vector], d: i64) -> usize {
    let mut count = 0;
    let mut u = vec![-d; rank];
    loop {
        if rays.iter().all(|v| v.iter().zip(&u).map(|(a, b)| a * b).sum::<i64>() >= 0) {
            count += 1;
        }
        let mut i = 0;
        while i < rank && u[i] == d {
            u[i] = -d;
            i += 1;
        }
        if i == rank {
            return count;
        }
        u[i] += 1;
    }
}

/// Integer points of the half-open parallelogram on two generators.
pub fn parallelogram_points(g: &[Vector; 2]) -> usize {
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let bound = g.iter().flatten().map(|x| x.abs()).sum::<i64>();
    let mut count = 0;
    for x in -bound..=bound {
        for y in -bound..=bound {
            // Cramer: x = a·g0 + b·g1, with a = num_a / det
            let num_a = x * g[1][1] - y * g[1][0];
            let num_b = g[0][0] * y - g[0][1] * x;
            let inside = |n: i64| if det > 0 { 0 <= n && n < det } else { det < n && n <= 0 };
            if inside(num_a) && inside(num_b) {
                count += 1;
            }
        }
    }
    count
}

/// χ_c of `⊔ F° × T^{codim F}` from the product cell structure: `F°` is a
/// union of open cells with total sign `χ_c(F)` and `T^k` has one cell per
/// subset of its circle factors.
pub fn cw_euler(phi: &Fanifold) -> i64 {
    let mut chi = 0;
    for s in phi.strata().iter().filter(|s| s.interior) {
        let k = s.codim();
        for subset in 0u32..(1 << k) {
            let sign = if subset.count_ones() % 2 == 0 { 1 } else { -1 };
            chi += s.chi_c * sign;
        }
    }
    chi
}

/// Pairs of cones `σ ⊆ τ`, compared as ray index sets.
pub fn flag_count(fan: &Fan) -> usize {
    let sets: Vec<&[usize]> = (0..fan.len()).map(|i| fan.cone_rays(i)).collect();
    sets.iter().map(|a| sets.iter().filter(|b| a.iter().all(|r| b.contains(r))).count()).sum()
}

/// Cells of `[0,1]^n` are words in `{0, 1, I}`; `F ≤ G` letterwise.
pub fn cube_flag_count(n: u32) -> usize {
    let below = |a: u8, b: u8| a == b || b == 2;
    let cells: Vec<Vec<u8>> = (0..3usize.pow(n)).map(|mut c| (0..n).map(|_| { let d = (c % 3) as u8; c /= 3; d }).collect()).collect();
    cells.iter().map(|f| cells.iter().filter(|g| f.iter().zip(g.iter()).all(|(&a, &b)| below(a, b))).count()).sum()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

fn primitive2() -> impl Strategy<Value = Vector> {
    (-3i64..=3, -3i64..=3).prop_filter_map("primitive", |(x, y)| (gcd(x, y) == 1).then(|| vec![x, y]))
}

/// Face-closed fans in rank 2: rays sorted by angle, adjacent pairs spanning
/// less than a half plane may form 2-cones.
pub fn fan2() -> impl Strategy<Value = Fan> {
    (proptest::collection::vec(primitive2(), 1..6), proptest::collection::vec(any::<bool>(), 6)).prop_map(|(mut rays, keep)| {
        rays.sort_by(|a, b| (a[1] as f64).atan2(a[0] as f64).partial_cmp(&(b[1] as f64).atan2(b[0] as f64)).unwrap());
        rays.dedup();
        let n = rays.len();
        let mut cones: Vec<Vec<usize>> = vec![vec![]];
        cones.extend((0..n).map(|i| vec![i]));
        if n >= 2 {
            for i in 0..n {
                let j = (i + 1) % n;
                if (n > 2 || i == 0) && keep[i] && rays[i][0] * rays[j][1] - rays[i][1] * rays[j][0] > 0 {
                    let mut c = vec![i, j];
                    c.sort_unstable();
                    cones.push(c);
                }
            }
        }
        Fan::new(2, rays, cones).expect("adjacent cones do not overlap")
    })
}

fn unimodular3() -> impl Strategy<Value = Vec<Vector>> {
    proptest::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..5).prop_map(|ops| {
        let mut m = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        for (i, j, f) in ops {
            if i != j {
                for c in 0..3 {
                    m[i][c] += f * m[j][c];
                }
            }
        }
        m
    })
}

/// Rank-3 fans: a rank-2 fan times a rank-1 fan, moved by a unimodular map.
pub fn fan3() -> impl Strategy<Value = Fan> {
    (fan2(), 0usize..3, unimodular3()).prop_map(|(f, which, g)| {
        let line = match which {
            0 => Fan::trivial(1),
            1 => Fan::new(1, vec![vec![1]], vec![vec![], vec![0]]).unwrap(),
            _ => Fan::new(1, vec![vec![1], vec![-1]], vec![vec![], vec![0], vec![1]]).unwrap(),
        };
        let p = f.product(&line);
        let rays = p.rays().iter().map(|r| g.iter().map(|row| row.iter().zip(r).map(|(a, b)| a * b).sum()).collect()).collect();
        Fan::new(3, rays, (0..p.len()).map(|i| p.cone_rays(i).to_vec()).collect()).expect("unimodular image of a fan")
    })
}

/// Fanifolds of dimension at most two.
pub fn small_fanifold() -> impl Strategy<Value = Fanifold> {
    prop_oneof![
        fan2().prop_map(|f| Fanifold::from_fan(&f).unwrap()),
        fan2().prop_filter("nonempty rank", |f| f.len() > 1).prop_map(|f| Fanifold::sphere_section(&f).unwrap()),
        fan3().prop_filter("has rays", |f| f.len() > 1).prop_map(|f| Fanifold::sphere_section(&f).unwrap()),
        (1usize..4).prop_map(fanifold_core::catalog::necklace),
        Just(fanifold_core::catalog::square()),
        Just(fanifold_core::catalog::three_a1()),
    ]
}

/// A fanifold together with a random subset of its strata.
pub fn fanifold_with_subsets() -> impl Strategy<Value = (Fanifold, Vec<bool>, Vec<bool>)> {
    small_fanifold().prop_flat_map(|phi| {
        let n = phi.strata().len();
        (Just(phi), proptest::collection::vec(any::<bool>(), n), proptest::collection::vec(any::<bool>(), n))
    })
}
