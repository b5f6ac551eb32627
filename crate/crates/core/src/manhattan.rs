//! Flow computations for the comparison city built on a rectilinear unit
//! grid: geodesic counting through the origin, the two routing
//! protocols, and the 4/π-rescaled comparisons against the line-process
//! city.

use crate::numerics::{log_choose, log_gamma};
use crate::{Error, Result};
use rayon::prelude::*;

/// Source at −(u,v), destination at (x,y), all coordinates nonnegative
/// lattice units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadrantPair {
    pub u: u32,
    pub v: u32,
    pub x: u32,
    pub y: u32,
}

impl QuadrantPair {
    pub fn new(u: u32, v: u32, x: u32, y: u32) -> Self {
        QuadrantPair { u, v, x, y }
    }

    fn total(&self) -> u64 {
        u64::from(self.u) + u64::from(self.v) + u64::from(self.x) + u64::from(self.y)
    }
}

/// Routing protocol for grid traffic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridProtocol {
    /// The geodesic is chosen uniformly among all monotone geodesics.
    UniformGeodesic,
    /// Traffic divides equally between the two extreme geodesics.
    ExtremeGeodesic,
}

/// Total flow through the origin under a protocol, with the component
/// the asymptotics track (one opposing-quadrant pair for the uniform
/// protocol, one axis case for the extreme protocol).
#[derive(Debug, Clone, Copy)]
pub struct GridFlowResult {
    pub n: u32,
    pub protocol: GridProtocol,
    pub total_flow: f64,
    /// total_flow / n³.
    pub scaled: f64,
    /// The single component the asymptotic statements refer to.
    pub component: f64,
}

/// Probability that a uniformly chosen monotone geodesic from −(u,v) to
/// (x,y) passes through the origin:
/// `C(u+v,u) C(x+y,x) / C(u+v+x+y, u+x)`, in log-gamma space.
pub fn through_origin_prob(pair: &QuadrantPair) -> Result<f64> {
    if pair.total() == 0 {
        return Err(Error::InvalidInput("through_origin_prob needs u+v+x+y >= 1".into()));
    }
    let (u, v, x, y) = (
        u64::from(pair.u),
        u64::from(pair.v),
        u64::from(pair.x),
        u64::from(pair.y),
    );
    let lg = log_choose(u + v, u)? + log_choose(x + y, x)? - log_choose(u + v + x + y, u + x)?;
    Ok(lg.exp())
}

/// Exact rational value of the binomial ratio as a reduced fraction
/// (num, den); valid while everything fits in u128 (totals ≤ 60 are
/// comfortably safe).
pub fn through_origin_prob_exact(pair: &QuadrantPair) -> Result<(u128, u128)> {
    if pair.total() > 60 {
        return Err(Error::TooLarge);
    }
    let c = |n: u64, k: u64| -> u128 {
        let k = k.min(n - k);
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        acc
    };
    let (u, v, x, y) = (
        u64::from(pair.u),
        u64::from(pair.v),
        u64::from(pair.x),
        u64::from(pair.y),
    );
    let num = c(u + v, u) * c(x + y, x);
    let den = c(u + v + x + y, u + x);
    let g = gcd(num, den);
    Ok((num / g, den / g))
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Oracle: enumerate every monotone lattice path from −(u,v) to (x,y)
/// and count those visiting the origin.
pub fn brute_force_prob(pair: &QuadrantPair) -> Result<f64> {
    if pair.total() > 24 {
        return Err(Error::TooLarge);
    }
    let (hits, total) = count_paths(
        -(i64::from(pair.u)),
        -(i64::from(pair.v)),
        i64::from(pair.x),
        i64::from(pair.y),
        false,
    );
    if total == 0 {
        return Err(Error::InvalidInput("degenerate pair".into()));
    }
    Ok(hits as f64 / total as f64)
}

fn count_paths(px: i64, py: i64, tx: i64, ty: i64, seen_origin: bool) -> (u64, u64) {
    let seen = seen_origin || (px == 0 && py == 0);
    if px == tx && py == ty {
        return (u64::from(seen), 1);
    }
    let mut hits = 0;
    let mut total = 0;
    if px < tx {
        let (h, t) = count_paths(px + 1, py, tx, ty, seen);
        hits += h;
        total += t;
    }
    if py < ty {
        let (h, t) = count_paths(px, py + 1, tx, ty, seen);
        hits += h;
        total += t;
    }
    (hits, total)
}

/// Stirling approximation to [`through_origin_prob`]:
/// `(u+v+x+y)^{3/2} / (√(2π) √((u+v)(x+y)(u+x)(v+y)))` times a Gaussian
/// factor in the cross-difference `uy − xv`.
pub fn stirling_prob(pair: &QuadrantPair) -> Result<f64> {
    let (u, v, x, y) = (
        f64::from(pair.u),
        f64::from(pair.v),
        f64::from(pair.x),
        f64::from(pair.y),
    );
    let margins = [(u + v), (x + y), (u + x), (v + y)];
    if margins.iter().any(|&m| m < 1.0) {
        return Err(Error::DomainError("stirling_prob needs all margins >= 1".into()));
    }
    let tot = u + v + x + y;
    let prod: f64 = margins.iter().product();
    let d = u * y - x * v;
    Ok(tot.powf(1.5) / ((2.0 * std::f64::consts::PI).sqrt() * prod.sqrt())
        * (-(tot * d * d) / (2.0 * prod)).exp())
}

/// Quadruple sum of [`through_origin_prob`] over one opposing-quadrant
/// pair, with quarter-disk pruning, a precomputed log-gamma table and
/// compensated summation; total flow doubles the sum (two opposing
/// pairs).
pub fn uniform_protocol_flow(n: u32) -> GridFlowResult {
    let sum = if n == 0 { 0.0 } else { quadrant_pair_sum(n) };
    let total = 2.0 * sum;
    GridFlowResult {
        n,
        protocol: GridProtocol::UniformGeodesic,
        total_flow: total,
        scaled: total / f64::from(n).powi(3).max(f64::MIN_POSITIVE),
        component: sum,
    }
}

fn quadrant_pair_sum(n: u32) -> f64 {
    let nn = u64::from(n) * u64::from(n);
    // lattice points of the closed quarter disk
    let mut pts: Vec<(u32, u32)> = Vec::new();
    for u in 0..=n {
        let rem = nn - u64::from(u) * u64::from(u);
        let vmax = (rem as f64).sqrt().floor() as u32;
        for v in 0..=vmax {
            pts.push((u, v));
        }
    }
    // lgamma table for 0! .. (4n)!
    let table: Vec<f64> = (0..=(4 * u64::from(n) + 2))
        .map(|k| log_gamma(k as f64 + 1.0))
        .collect();
    let lc = |a: u64, b: u64| table[a as usize] - table[b as usize] - table[(a - b) as usize];

    // one partial sum per source point, reduced in index order so the
    // result is independent of the thread partition
    let partials: Vec<f64> = pts
        .par_iter()
        .map(|&(u, v)| {
            let (u, v) = (u64::from(u), u64::from(v));
            let luv = lc(u + v, u);
            let mut sum = 0.0;
            let mut comp = 0.0; // Neumaier compensation
            for &(x, y) in &pts {
                let (x, y) = (u64::from(x), u64::from(y));
                let term = (luv + lc(x + y, x) - lc(u + v + x + y, u + x)).exp();
                let t = sum + term;
                comp += if sum.abs() >= term.abs() {
                    (sum - t) + term
                } else {
                    (term - t) + sum
                };
                sum = t;
            }
            sum + comp
        })
        .collect();
    let mut sum = 0.0;
    let mut comp = 0.0;
    for term in partials {
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
    }
    sum + comp
}

/// Same quadruple sum evaluated with the enumeration oracle (tiny n only).
pub fn uniform_protocol_flow_brute(n: u32) -> Result<f64> {
    let nn = u64::from(n) * u64::from(n);
    let mut sum = 0.0;
    for u in 0..=n {
        for v in 0..=n {
            if u64::from(u) * u64::from(u) + u64::from(v) * u64::from(v) > nn {
                continue;
            }
            for x in 0..=n {
                for y in 0..=n {
                    if u64::from(x) * u64::from(x) + u64::from(y) * u64::from(y) > nn {
                        continue;
                    }
                    if u + v + x + y == 0 {
                        sum += 1.0; // degenerate origin-to-origin term
                        continue;
                    }
                    sum += brute_force_prob(&QuadrantPair::new(u, v, x, y))?;
                }
            }
        }
    }
    Ok(sum)
}

/// Extreme-geodesic protocol: four axis-anchored contributions, each an
/// exact finite sum `2 Σ_{(x,y)>0, x²+y²≤n²} n/2`.
pub fn extreme_protocol_flow(n: u32) -> GridFlowResult {
    let nn = u64::from(n) * u64::from(n);
    let mut count = 0u64;
    for x in 1..=n {
        let rem = nn - u64::from(x) * u64::from(x);
        count += (rem as f64).sqrt().floor() as u64;
    }
    let single = count as f64 * f64::from(n); // 2 * count * n/2
    let total = 4.0 * single;
    GridFlowResult {
        n,
        protocol: GridProtocol::ExtremeGeodesic,
        total_flow: total,
        scaled: total / f64::from(n).powi(3).max(f64::MIN_POSITIVE),
        component: single,
    }
}

/// Rescaled comparison of the two cities.
#[derive(Debug, Clone, Copy)]
pub struct ComparisonReport {
    /// Grid segment length making network lengths match: 4/π.
    pub segment_length: f64,
    /// Extreme-protocol comparable flow coefficient of n³.
    pub extreme_comparable_flow: f64,
    /// Uniform-protocol comparable flow coefficient of n³: 8/π.
    pub uniform_comparable_flow: f64,
    /// Ratio of the uniform-protocol flow to the line-process flow.
    pub uniform_excess_ratio: f64,
    /// Mean network distance inflation of the grid: 4/π.
    pub network_distance_factor: f64,
    /// Mean grid network distance coefficient of n: (128/45π)·(4/π).
    pub mean_network_distance: f64,
}

pub fn comparison_report(n: f64) -> Result<ComparisonReport> {
    if !(n > 0.0) {
        return Err(Error::InvalidInput("comparison_report requires n > 0".into()));
    }
    let pi = std::f64::consts::PI;
    let uniform = 4.0 / pi * 2.0;
    Ok(ComparisonReport {
        segment_length: 4.0 / pi,
        extreme_comparable_flow: 2.0,
        uniform_comparable_flow: uniform,
        uniform_excess_ratio: uniform / 2.0,
        network_distance_factor: 4.0 / pi,
        mean_network_distance: 128.0 / (45.0 * pi) * (4.0 / pi) * n,
    })
}

/// CSV rows `n,protocol,total_flow,scaled`.
pub fn grid_csv(results: &[GridFlowResult]) -> String {
    let mut s = String::from("n,protocol,total_flow,scaled\n");
    for r in results {
        let p = match r.protocol {
            GridProtocol::UniformGeodesic => "uniform_geodesic",
            GridProtocol::ExtremeGeodesic => "extreme_geodesic",
        };
        s.push_str(&format!("{},{},{},{}\n", r.n, p, r.total_flow, r.scaled));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_examples() {
        // (1,1,1,1): 2·2/6 = 2/3 over the C(4,2)=6 geodesics
        let p = brute_force_prob(&QuadrantPair::new(1, 1, 1, 1)).unwrap();
        assert!((p - 2.0 / 3.0).abs() < 1e-15);
        let p = brute_force_prob(&QuadrantPair::new(2, 1, 1, 2)).unwrap();
        assert!((p - 9.0 / 20.0).abs() < 1e-15);
        let p = brute_force_prob(&QuadrantPair::new(1, 0, 0, 1)).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        let p = brute_force_prob(&QuadrantPair::new(0, 1, 1, 0)).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        assert!(brute_force_prob(&QuadrantPair::new(10, 10, 10, 10)).is_err());
    }

    #[test]
    fn formula_matches_brute_force() {
        for u in 0..=5u32 {
            for v in 0..=5u32 {
                for x in 0..=5u32 {
                    for y in 0..=5u32 {
                        if u + v + x + y == 0 {
                            continue;
                        }
                        let pair = QuadrantPair::new(u, v, x, y);
                        let a = through_origin_prob(&pair).unwrap();
                        let b = brute_force_prob(&pair).unwrap();
                        assert!((a - b).abs() < 1e-10, "{pair:?}: {a} vs {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn exact_rational_matches_brute_force_counts() {
        // over all totals ≤ 16 the reduced fraction reproduces the
        // enumeration exactly
        for u in 0..=4u32 {
            for v in 0..=4u32 {
                for x in 0..=4u32 {
                    for y in 0..=4u32 {
                        if u + v + x + y == 0 {
                            continue;
                        }
                        let pair = QuadrantPair::new(u, v, x, y);
                        let (num, den) = through_origin_prob_exact(&pair).unwrap();
                        let b = brute_force_prob(&pair).unwrap();
                        assert!((num as f64 / den as f64 - b).abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn source_at_origin_gives_one() {
        let p = through_origin_prob(&QuadrantPair::new(0, 0, 3, 4)).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn p_invariance_of_binomial_identity() {
        // computing through Binomial(p) pmf ratios gives the same value
        // for any p in (0,1)
        let pmf = |n: u64, k: u64, p: f64| -> f64 {
            (log_choose(n, k).unwrap() + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()).exp()
        };
        let pair = QuadrantPair::new(3, 2, 4, 1);
        let base = through_origin_prob(&pair).unwrap();
        for &p in &[0.3, 0.5, 0.7] {
            let v = pmf(5, 3, p) * pmf(5, 4, p) / pmf(10, 7, p);
            assert!((v - base).abs() < 1e-12, "p={p}: {v} vs {base}");
        }
    }

    #[test]
    fn stirling_accuracy_and_symmetry() {
        for &(u, v, x, y) in &[(25u32, 24u32, 26u32, 25u32), (40, 41, 39, 40), (30, 30, 30, 30)] {
            let pair = QuadrantPair::new(u, v, x, y);
            let exact = through_origin_prob(&pair).unwrap();
            let st = stirling_prob(&pair).unwrap();
            assert!((st / exact - 1.0).abs() < 0.05, "{pair:?}: {st} vs {exact}");
        }
        // uy = xv makes the Gaussian factor exactly 1
        let pair = QuadrantPair::new(6, 3, 4, 2);
        let st = stirling_prob(&pair).unwrap();
        let tot = 15.0f64;
        let prod: f64 = 9.0 * 6.0 * 10.0 * 5.0;
        assert!((st - tot.powf(1.5) / ((2.0 * std::f64::consts::PI).sqrt() * prod.sqrt())).abs() < 1e-12);
        // reflection symmetry
        let a = stirling_prob(&QuadrantPair::new(7, 3, 2, 9)).unwrap();
        let b = stirling_prob(&QuadrantPair::new(3, 7, 9, 2)).unwrap();
        assert!((a - b).abs() < 1e-15);
        assert!(stirling_prob(&QuadrantPair::new(0, 3, 0, 9)).is_err());
    }

    #[test]
    fn uniform_sum_matches_brute_force_at_n5() {
        let fast = uniform_protocol_flow(5).component;
        let brute = uniform_protocol_flow_brute(5).unwrap();
        assert!((fast - brute).abs() < 1e-8 * brute, "{fast} vs {brute}");
    }

    #[test]
    fn uniform_sum_stabilizes() {
        let a = uniform_protocol_flow(40);
        let b = uniform_protocol_flow(80);
        let c = uniform_protocol_flow(160);
        let d1 = (b.component / 80.0f64.powi(3) - a.component / 40.0f64.powi(3)).abs();
        let d2 = (c.component / 160.0f64.powi(3) - b.component / 80.0f64.powi(3)).abs();
        assert!(d2 < d1, "not stabilizing: {d1} then {d2}");
        assert!((a.component / 40.0f64.powi(3) - 2.0).abs() < 0.2);
    }

    #[test]
    fn extreme_flow_values() {
        let r = extreme_protocol_flow(300);
        assert!((r.scaled - std::f64::consts::PI).abs() < 0.15, "{}", r.scaled);
        assert!((r.component / 300.0f64.powi(3) - std::f64::consts::PI / 4.0).abs() < 0.05);
        // monotone in n
        assert!(extreme_protocol_flow(40).total_flow < extreme_protocol_flow(41).total_flow);
    }

    #[test]
    fn quadrant_reflection_symmetry() {
        // (u,v,x,y) -> (v,u,y,x) preserves each term, hence the sum
        let a = through_origin_prob(&QuadrantPair::new(2, 5, 3, 1)).unwrap();
        let b = through_origin_prob(&QuadrantPair::new(5, 2, 1, 3)).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn comparison_report_values() {
        let r = comparison_report(1.0).unwrap();
        assert!((r.uniform_comparable_flow - 2.54648).abs() < 1e-5);
        assert!((r.uniform_excess_ratio - 1.2732).abs() < 1e-4);
        assert!((r.segment_length - 4.0 / std::f64::consts::PI).abs() < 1e-12);
        assert!((r.extreme_comparable_flow - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rectilinear_metric_factor_by_quadrature() {
        use crate::numerics::{integrate, Domain, QuadratureSpec};
        let q = integrate(
            |t: f64| (t.sin().abs() + t.cos().abs()) / (2.0 * std::f64::consts::PI),
            Domain::Finite { a: 0.0, b: 2.0 * std::f64::consts::PI },
            &QuadratureSpec::with_rel_tol(1e-10),
        )
        .unwrap();
        assert!((q.value - 4.0 / std::f64::consts::PI).abs() < 1e-9);
    }
}
