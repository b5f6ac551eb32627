//! The acceptance suite: every headline identity and asymptotic the
//! library is supposed to reproduce, each as a deterministic seeded
//! check returning one pass/fail report.
//!
//! Three stated targets are kept verbatim even though they disagree
//! with exact computations: the intersection-point intensity is π/4
//! (π/2 is the length intensity), and the martingale quadratic
//! variation of the ξ subordinator is rate ½ times the jump second
//! moment 7/2, i.e. (7/4)t rather than (5/8)t, which propagates to a
//! first-passage variance slope of 56/27 rather than 20/27. Those
//! checks are reported honestly as failing, alongside
//! corrected-constant diagnostics that pass; `run_all` carries both.

use crate::flow;
use crate::geom::{crosses, Line, Point, Segment};
use crate::growth::{self, GrowthInitial, Horizon};
use crate::line_process::{pattern_csv, sample_pattern, ConvexBody, DiskWindow};
use crate::manhattan::{self, QuadrantPair};
use crate::numerics::{ks_test, mills_bounds, RngStream};
use crate::routes::{self, WindowPolicy};
use rayon::prelude::*;
use std::f64::consts::PI;

/// One measured quantity inside a criterion.
#[derive(Debug, Clone)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    pub target: f64,
    pub tolerance: String,
    pub pass: bool,
}

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u32,
    pub name: String,
    pub metrics: Vec<Metric>,
    pub pass: bool,
    pub note: Option<String>,
}

impl CriterionReport {
    fn new(id: u32, name: &str) -> Self {
        CriterionReport {
            id,
            name: name.to_string(),
            metrics: Vec::new(),
            pass: true,
            note: None,
        }
    }

    fn push(&mut self, name: &str, value: f64, target: f64, tolerance: String, pass: bool) {
        self.metrics.push(Metric {
            name: name.to_string(),
            value,
            target,
            tolerance,
            pass,
        });
        self.pass &= pass;
    }

    fn push_abs(&mut self, name: &str, value: f64, target: f64, tol: f64) {
        let pass = (value - target).abs() <= tol;
        self.push(name, value, target, format!("±{tol:.3e}"), pass);
    }

    /// Render the one-line-per-metric report.
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!(
            "criterion {:02} [{}] {}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name
        )];
        for m in &self.metrics {
            out.push(format!(
                "    {} {}: value {:.6} target {:.6} ({})",
                if m.pass { "ok  " } else { "FAIL" },
                m.name,
                m.value,
                m.target,
                m.tolerance
            ));
        }
        if let Some(n) = &self.note {
            out.push(format!("    note: {n}"));
        }
        out
    }
}

fn stream(seed: u64, criterion: u64, i: u64) -> RngStream {
    RngStream::new(seed, (criterion << 32) | i)
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

use crate::numerics::chi2_quantile;

/// 1. Mean lines crossing a length-5 segment equals 5.
pub fn criterion_01_hitting(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(1, "hitting calibration: length-5 segment");
    let window = DiskWindow::new(Point::new(0.0, 0.0), 4.0);
    let seg = Segment::new(Point::new(-2.5, 0.0), Point::new(2.5, 0.0));
    let reps: u64 = 10_000;
    let counts: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|i| {
            let pat = sample_pattern(&window, stream(seed, 1, i));
            pat.lines.iter().filter(|l| crosses(l, &seg)).count() as f64
        })
        .collect();
    let mean = counts.iter().sum::<f64>() / reps as f64;
    let var = counts.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>() / reps as f64;
    let se = (var / reps as f64).sqrt();
    rep.push_abs("mean crossings", mean, 5.0, 3.0 * se);
    let m = crate::line_process::hitting_measure(&ConvexBody::Segment(seg)).unwrap();
    rep.push_abs("hitting measure", m, 5.0, 1e-12);
    rep
}

/// 2. Intersection-point intensity in a unit window: the stated π/2
/// (fails) and the exact π/4 (passes).
pub fn criterion_02_intersections(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(2, "intersection intensity");
    let window = DiskWindow::new(Point::new(0.0, 0.0), 6.0);
    let reps: u64 = 10_000;
    let counts: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|i| {
            let pat = sample_pattern(&window, stream(seed, 2, i));
            let ls = &pat.lines;
            let mut c = 0u32;
            for a in 0..ls.len() {
                for b in (a + 1)..ls.len() {
                    if let Some(p) = intersect(&ls[a], &ls[b]) {
                        if p.x.abs() <= 0.5 && p.y.abs() <= 0.5 {
                            c += 1;
                        }
                    }
                }
            }
            f64::from(c)
        })
        .collect();
    let mean = counts.iter().sum::<f64>() / reps as f64;
    let var = counts.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>() / reps as f64;
    let se = (var / reps as f64).sqrt();
    rep.push_abs("intersections per unit area (stated pi/2)", mean, PI / 2.0, 3.0 * se);
    rep.push(
        "intersections per unit area (exact pi/4)",
        mean,
        PI / 4.0,
        format!("±{:.3e} (diagnostic)", 3.0 * se),
        (mean - PI / 4.0).abs() <= 3.0 * se,
    );
    rep.note = Some(
        "two lines of angle gap Δ intersect per unit area with density ¼|sinΔ|, \
         which integrates to π/4; π/2 is the length intensity, not the point intensity"
            .into(),
    );
    rep
}

fn intersect(a: &Line, b: &Line) -> Option<Point> {
    let (ax, ay) = a.normal();
    let (bx, by) = b.normal();
    let det = ax * by - ay * bx;
    if det.abs() < 1e-14 {
        return None;
    }
    Some(Point::new(
        (a.r * by - b.r * ay) / det,
        (ax * b.r - bx * a.r) / det,
    ))
}

/// 3. Empirical no-separator frequency against exp(−½(r+s−ρ)) for five
/// geometries.
pub fn criterion_03_separation(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(3, "separation-probability oracle");
    let geoms = [
        (1.0, 1.0, PI / 2.0),
        (1.0, 1.0, 0.3),
        (2.0, 1.0, 2.0),
        (3.0, 3.0, 1.0),
        (1.5, 0.5, 0.8),
    ];
    let reps: u64 = 10_000;
    for (g, (r, s, ang)) in geoms.iter().enumerate() {
        let o = Point::new(0.0, 0.0);
        let pm = Point::new(*r, 0.0);
        let pp = Point::new(s * ang.cos(), s * ang.sin());
        let seg = Segment::new(pm, pp);
        let window = DiskWindow::new(o, r.max(*s) * 1.01);
        let hits: u64 = (0..reps)
            .into_par_iter()
            .map(|i| {
                let pat = sample_pattern(&window, stream(seed, 3, (g as u64) * reps + i));
                let sep = pat.lines.iter().any(|l| crate::geom::separates(l, &o, &seg));
                u64::from(!sep)
            })
            .sum();
        let phat = hits as f64 / reps as f64;
        let p = routes::separation_probability(&pm, &pp, &o);
        let se = (p * (1.0 - p) / reps as f64).sqrt();
        rep.push_abs(&format!("geometry {} empirical vs formula", g + 1), phat, p, 3.0 * se);
    }
    rep
}

/// 4. Scaled peak location/height at n = 1000: U uniform by KS, and the
/// conditional second moment of V near u = 1/2 equal to 2.
pub fn criterion_04_lateral(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(4, "lateral displacement limit at n=1000");
    let n = 1000.0;
    let samples = routes::lateral_samples(n, 2000, stream(seed, 4, 0), &WindowPolicy::default())
        .expect("lateral sampling failed");
    let us: Vec<f64> = samples.iter().map(|(u, _)| *u).collect();
    let ks = ks_test(&us, |x| x.clamp(0.0, 1.0)).unwrap();
    rep.push(
        "KS p-value of U against Uniform[0,1]",
        ks.p_value,
        0.01,
        "p > 0.01".into(),
        ks.p_value > 0.01,
    );
    let v2: Vec<f64> = samples
        .iter()
        .filter(|(u, _)| (0.45..0.55).contains(u))
        .map(|(_, v)| v * v)
        .collect();
    let m = v2.iter().sum::<f64>() / v2.len() as f64;
    rep.push_abs("E[V^2 | U in (0.45,0.55)]", m, 2.0, 0.2);
    rep
}

/// 5. Mean route excess grows like (4/3) log n.
pub fn criterion_05_excess_slope(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(5, "route excess slope 4/3 log n");
    let ns = [128.0, 256.0, 512.0, 1024.0, 2048.0, 4096.0];
    let mut logs = Vec::new();
    let mut means = Vec::new();
    for (k, n) in ns.iter().enumerate() {
        let ex = routes::excess_samples(*n, 1000, stream(seed, 5, (k as u64) << 24, ), &WindowPolicy::default())
            .expect("excess sampling failed");
        logs.push(n.ln());
        means.push(ex.iter().sum::<f64>() / ex.len() as f64);
    }
    let slope = least_squares_slope(&logs, &means);
    let target = 4.0 / 3.0;
    rep.push(
        "least-squares slope of mean excess vs log n",
        slope,
        target,
        "±10%".into(),
        (slope - target).abs() <= 0.1 * target,
    );
    rep
}

/// 6. Growth-process first passage: mean slope 2/3 (holds) and the
/// stated variance slope 20/27 (fails; the exact rate gives 56/27).
pub fn criterion_06_growth(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(6, "growth first-passage slopes");
    let ns: Vec<f64> = (7..=13).map(|k| f64::from(1u32 << k)).collect();
    let reps: u64 = 10_000;
    let mut logs = Vec::new();
    let mut means = Vec::new();
    let mut vars = Vec::new();
    for (k, n) in ns.iter().enumerate() {
        let sigmas: Vec<f64> = (0..reps)
            .into_par_iter()
            .map(|i| {
                growth::simulate_growth(*n, GrowthInitial::Theta0Cosine, stream(seed, 6, ((k as u64) << 24) | i))
                    .unwrap()
                    .sigma
                    .unwrap()
            })
            .collect();
        let m = sigmas.iter().sum::<f64>() / reps as f64;
        let v = sigmas.iter().map(|s| (s - m) * (s - m)).sum::<f64>() / reps as f64;
        logs.push(n.ln());
        means.push(m);
        vars.push(v);
    }
    let mean_slope = least_squares_slope(&logs, &means);
    let var_slope = least_squares_slope(&logs, &vars);
    let t_mean = 2.0 / 3.0;
    rep.push(
        "slope of E[sigma(n)] vs log n",
        mean_slope,
        t_mean,
        "±10%".into(),
        (mean_slope - t_mean).abs() <= 0.1 * t_mean,
    );
    let t_var_stated = 20.0 / 27.0;
    rep.push(
        "slope of Var[sigma(n)] vs log n (stated)",
        var_slope,
        t_var_stated,
        "±20%".into(),
        (var_slope - t_var_stated).abs() <= 0.2 * t_var_stated,
    );
    let t_var_corrected = 56.0 / 27.0;
    rep.push(
        "slope of Var[sigma(n)] vs log n (corrected rate)",
        var_slope,
        t_var_corrected,
        "±20% (diagnostic)".into(),
        (var_slope - t_var_corrected).abs() <= 0.2 * t_var_corrected,
    );
    rep.note = Some(
        "the stated 20/27 uses rate·Var(jump)=5/8 as the martingale quadratic variation; \
         the exact rate is rate·E[jump²]=7/4, giving 56/27, which the measurement matches"
            .into(),
    );
    rep
}

/// 7. Subordinator identities: jump moments, Laplace exponent, the
/// martingale mean, and the stated M²−(5/8)t check (fails; 7/4 is the
/// exact quadratic-variation rate and passes).
pub fn criterion_07_subordinator(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(7, "subordinator identities");
    let t = 8.0;
    let reps: u64 = 200_000;
    let paths: Vec<(f64, usize, f64, f64)> = (0..reps)
        .into_par_iter()
        .map(|i| {
            let p = growth::simulate_subordinators(Horizon::Time(t), stream(seed, 7, i)).unwrap();
            let xi = p.xi_at(t);
            let xi4 = p.xi_at(4.0);
            (xi, p.xi_jumps.len(), p.xi_jumps.iter().sum::<f64>(), xi4)
        })
        .collect();

    // pooled jump moments
    let all_jumps: Vec<f64> = (0..reps)
        .into_par_iter()
        .flat_map_iter(|i| {
            growth::simulate_subordinators(Horizon::Time(2.0), stream(seed, 7, reps + i))
                .unwrap()
                .xi_jumps
        })
        .collect();
    let nj = all_jumps.len() as f64;
    let jm = all_jumps.iter().sum::<f64>() / nj;
    let jv = all_jumps.iter().map(|j| (j - jm) * (j - jm)).sum::<f64>() / nj;
    let se_m = (jv / nj).sqrt();
    rep.push_abs("xi-jump mean", jm, 1.5, 3.0 * se_m);
    let m4 = all_jumps.iter().map(|j| (j - jm).powi(4)).sum::<f64>() / nj;
    let se_v = ((m4 - jv * jv) / nj).sqrt();
    rep.push_abs("xi-jump variance", jv, 1.25, 3.0 * se_v);

    // empirical Laplace exponent at t = 4
    for q in [0.5, 1.0, 2.0] {
        let vals: Vec<f64> = paths.iter().map(|(_, _, _, xi4)| (-q * xi4).exp()).collect();
        let m = vals.iter().sum::<f64>() / reps as f64;
        let sd = (vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / reps as f64).sqrt();
        let phi_hat = -m.ln() / 4.0;
        let se = sd / (reps as f64).sqrt() / (4.0 * m);
        let phi = growth::laplace_exponent(q).unwrap();
        rep.push_abs(&format!("Laplace exponent at q={q}"), phi_hat, phi, 3.0 * se);
    }

    // martingale checks at t = 8
    let ms: Vec<f64> = paths.iter().map(|(xi, _, _, _)| xi - 0.75 * t).collect();
    let mm = ms.iter().sum::<f64>() / reps as f64;
    let msd = (ms.iter().map(|v| (v - mm) * (v - mm)).sum::<f64>() / reps as f64).sqrt();
    rep.push_abs("mean of M_t", mm, 0.0, 3.0 * msd / (reps as f64).sqrt());

    let m2: Vec<f64> = ms.iter().map(|m| m * m).collect();
    let m2m = m2.iter().sum::<f64>() / reps as f64;
    let m2sd = (m2.iter().map(|v| (v - m2m) * (v - m2m)).sum::<f64>() / reps as f64).sqrt();
    let se3 = 3.0 * m2sd / (reps as f64).sqrt();
    rep.push_abs("mean of M_t^2 - (5/8)t (stated)", m2m - 0.625 * t, 0.0, se3);
    rep.push(
        "mean of M_t^2 - (7/4)t (corrected rate)",
        m2m - 1.75 * t,
        0.0,
        format!("±{se3:.3e} (diagnostic)"),
        (m2m - 1.75 * t).abs() <= se3,
    );
    rep.note = Some(
        "Var(M_t) = t·rate·E[jump²] = (7/4)t for this compound Poisson martingale; \
         the stated (5/8)t uses the jump variance in place of the second moment"
            .into(),
    );
    rep
}

/// 8. The first-passage representation identity holds exactly on every
/// sampled path.
pub fn criterion_08_tau_representation(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(8, "tau-representation exact identity");
    let n = 50.0;
    let worst = (0..2000u64)
        .into_par_iter()
        .map(|i| {
            let p = growth::simulate_subordinators(Horizon::IntegralTarget(n), stream(seed, 8, i)).unwrap();
            let tau = growth::tau_first_passage(&p, n).unwrap();
            let xi = p.xi_at(tau);
            let m = xi - 0.75 * tau;
            let rhs = (2.0 / 3.0) * (n.ln() - 2.0 * m + (2.0 * xi - n.ln()));
            (tau - rhs).abs()
        })
        .reduce(|| 0.0, f64::max);
    rep.push("max |tau - representation| over 2000 paths", worst, 0.0, "≤1e-9".into(), worst <= 1e-9);
    rep
}

/// 9. Lamperti inverse moment at n ∈ {1,2,5}.
pub fn criterion_09_lamperti(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(9, "Lamperti inverse moment");
    for (k, n) in [1.0, 2.0, 5.0].iter().enumerate() {
        let r = growth::lamperti_inverse_moment(*n, 100_000, stream(seed, 9, (k as u64) << 32)).unwrap();
        rep.push_abs(
            &format!("n={n}: n·E[exp(-2 xi_tau)] vs formula"),
            r.mc_estimate,
            r.formula,
            3.0 * r.mc_std_error,
        );
    }
    rep
}

/// 10. Perpetuity mean against 1/(1−E[m]).
pub fn criterion_10_perpetuity(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(10, "perpetuity mean");
    let target = growth::perpetuity_analytic_mean().unwrap();
    let (mean, se) = growth::perpetuity_mc(200_000, stream(seed, 10, 0));
    rep.push_abs("MC mean of U_inf", mean, target, 3.0 * se);
    rep
}

/// 11. Centre flow at n = 1000: quadrature in [1.9, 2.1]·n³, nested MC
/// within 3 s.e. of the quadrature, both near the limit value 2.
pub fn criterion_11_center_flow(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(11, "centre flow at n=1000");
    let n = 1000.0;
    let quad = flow::mean_flow_quadrature(n).unwrap() / (n * n * n);
    rep.push(
        "quadrature E[T_n]/n^3",
        quad,
        2.0,
        "in [1.9, 2.1]".into(),
        (1.9..=2.1).contains(&quad),
    );
    let est = flow::simulate_center_flow(n, 200, 5000, stream(seed, 11, 0)).unwrap();
    rep.push_abs("nested MC vs quadrature", est.value, quad, 3.0 * est.std_error);
    rep.push_abs("quadrature vs limit 2 (10%)", quad, 2.0, 0.2);
    rep.push_abs("MC vs limit 2 (10%)", est.value, 2.0, 0.2 + 3.0 * est.std_error);
    rep
}

/// 12. Limit flow: quadrature mean exactly 2, simulation within
/// 3 s.e. + bias bound, variance significantly positive.
pub fn criterion_12_limit_flow(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(12, "improper limit flow");
    let quad = flow::limit_mean_quadrature().unwrap();
    rep.push_abs("limit mean quadrature", quad, 2.0, 1e-4);

    let reals: u64 = 400;
    let pairs: u64 = 4000;
    let est = flow::simulate_limit_flow(6.0, 48.0, reals, pairs, stream(seed, 12, 0)).unwrap();
    let tol = 3.0 * est.std_error + est.bias_bound.unwrap();
    rep.push_abs("simulated limit flow", est.value, 2.0, tol);

    // one-sided variance test: across-realization variance must exceed
    // what pair-sampling noise alone would produce
    let scale = 36.0f64; // h_max²
    let p_hat = est.value / scale;
    let within = scale * scale * p_hat * (1.0 - p_hat) / pairs as f64;
    let s2 = est.std_error * est.std_error * reals as f64;
    let stat = (reals as f64 - 1.0) * s2 / within;
    let q99 = chi2_quantile(reals as f64 - 1.0, 2.326348);
    rep.push(
        "variance chi-square statistic vs 1% quantile",
        stat,
        q99,
        "stat > q99".into(),
        stat > q99,
    );
    rep
}

/// 13. Excess lower bound: the constant log4 − 5/4 and the log-slope of
/// the bound itself.
pub fn criterion_13_lower_bound(_seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(13, "path-excess lower bound");
    let c = flow::lower_bound_constant().unwrap();
    rep.push_abs("constant", c, 4.0f64.ln() - 1.25, 1e-6);
    let ns: [f64; 4] = [1e2, 1e3, 1e4, 1e5];
    let mut logs = Vec::new();
    let mut vals = Vec::new();
    for n in ns {
        logs.push(n.ln());
        vals.push(flow::excess_lower_bound(n).unwrap());
    }
    let slope = least_squares_slope(&logs, &vals);
    rep.push(
        "slope of lower bound vs log n",
        slope,
        0.1363,
        "±5%".into(),
        (slope - 0.1363).abs() <= 0.05 * 0.1363,
    );
    rep
}

/// 14. Sampford/Birnbaum bracket of the Mills ratio on the grid.
pub fn criterion_14_mills(_seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(14, "Mills ratio bracket");
    let mut worst_low = f64::INFINITY;
    let mut worst_up = f64::INFINITY;
    let mut ok = true;
    for i in 0..=100 {
        let p = i as f64 * 0.1;
        let mb = mills_bounds(p);
        ok &= mb.lower <= mb.exact && mb.exact <= mb.upper;
        worst_low = worst_low.min(mb.exact - mb.lower);
        worst_up = worst_up.min(mb.upper - mb.exact);
    }
    rep.push("bracket holds on p = 0,0.1,…,10", f64::from(u8::from(ok)), 1.0, "exact".into(), ok);
    rep.push(
        "min slack (exact-lower)",
        worst_low,
        0.0,
        "> 0".into(),
        worst_low > 0.0,
    );
    rep.push("min slack (upper-exact)", worst_up, 0.0, "> 0".into(), worst_up > 0.0);
    rep
}

/// 15. Disk geometry: MC mean distance and the exact network length.
pub fn criterion_15_disk(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(15, "disk geometry");
    let (m, se) = flow::mean_disk_distance_mc(1_000_000, stream(seed, 15, 0));
    rep.push_abs("MC mean distance in unit disk", m, 128.0 / (45.0 * PI), 3.0 * se);
    let r = flow::disk_average_report(3.0).unwrap();
    rep.push_abs("network length formula at n=3", r.network_length, PI * PI * 9.0 / 2.0, 0.0);
    rep
}

/// 16. Grid exactness: formula ≡ enumeration as exact rationals for all
/// components ≤ 5.
pub fn criterion_16_grid_exact(_seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(16, "grid through-origin exactness");
    let mut all = true;
    let mut checked = 0u32;
    for u in 0..=5u32 {
        for v in 0..=5u32 {
            for x in 0..=5u32 {
                for y in 0..=5u32 {
                    if u + v + x + y == 0 {
                        continue;
                    }
                    let pair = QuadrantPair::new(u, v, x, y);
                    let (num, den) = manhattan::through_origin_prob_exact(&pair).unwrap();
                    let b = manhattan::brute_force_prob(&pair).unwrap();
                    // brute force returns hits/total of an exact count
                    all &= (num as f64 / den as f64 - b).abs() < 1e-13;
                    let f = manhattan::through_origin_prob(&pair).unwrap();
                    all &= (f - num as f64 / den as f64).abs() <= 1e-12;
                    checked += 1;
                }
            }
        }
    }
    rep.push(
        "formula == enumeration on all pairs ≤ 5",
        f64::from(checked),
        1295.0,
        "exact".into(),
        all && checked == 1295,
    );
    rep
}

/// 17. Grid asymptotics and the rescaled comparison.
pub fn criterion_17_grid_asymptotics(_seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(17, "grid asymptotics and comparison");
    let uni = manhattan::uniform_protocol_flow(150);
    let scaled = uni.component / 150.0f64.powi(3);
    rep.push(
        "uniform-protocol quadruple sum / n^3 at n=150",
        scaled,
        2.0,
        "in [1.8, 2.2]".into(),
        (1.8..=2.2).contains(&scaled),
    );
    let ext = manhattan::extreme_protocol_flow(300);
    rep.push_abs("extreme-protocol total / n^3 at n=300", ext.scaled, PI, 0.15);
    rep.push_abs(
        "single extreme contribution / n^3",
        ext.component / 300.0f64.powi(3),
        PI / 4.0,
        0.05,
    );
    let cmp = manhattan::comparison_report(1.0).unwrap();
    rep.push_abs("uniform comparable flow coefficient", cmp.uniform_comparable_flow, 2.54648, 5e-5);
    rep.push_abs("uniform/extreme flow ratio", cmp.uniform_excess_ratio, 1.2732, 5e-5);
    rep
}

/// 18. Determinism: identical seeds reproduce identical CSV bytes.
pub fn criterion_18_determinism(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new(18, "determinism of seeded experiments");
    let window = DiskWindow::new(Point::new(0.0, 0.0), 20.0);
    let a = pattern_csv(&sample_pattern(&window, stream(seed, 18, 0)), &[]);
    let b = pattern_csv(&sample_pattern(&window, stream(seed, 18, 0)), &[]);
    rep.push("pattern CSV bytes identical", 1.0, 1.0, "exact".into(), a == b);
    let g1 = growth::growth_csv(
        &growth::simulate_growth(100.0, GrowthInitial::Theta0Pi, stream(seed, 18, 1)).unwrap(),
    );
    let g2 = growth::growth_csv(
        &growth::simulate_growth(100.0, GrowthInitial::Theta0Pi, stream(seed, 18, 1)).unwrap(),
    );
    rep.push("growth CSV bytes identical", 1.0, 1.0, "exact".into(), g1 == g2);
    let f1 = flow::simulate_center_flow(50.0, 8, 200, stream(seed, 18, 2)).unwrap();
    let f2 = flow::simulate_center_flow(50.0, 8, 200, stream(seed, 18, 2)).unwrap();
    rep.push(
        "flow estimate identical across runs",
        1.0,
        1.0,
        "exact".into(),
        f1.value == f2.value && f1.std_error == f2.std_error,
    );
    rep
}

/// Default master seed of the acceptance suite.
pub const DEFAULT_SEED: u64 = 20260810;

/// Run the whole suite.
pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    vec![
        criterion_01_hitting(seed),
        criterion_02_intersections(seed),
        criterion_03_separation(seed),
        criterion_04_lateral(seed),
        criterion_05_excess_slope(seed),
        criterion_06_growth(seed),
        criterion_07_subordinator(seed),
        criterion_08_tau_representation(seed),
        criterion_09_lamperti(seed),
        criterion_10_perpetuity(seed),
        criterion_11_center_flow(seed),
        criterion_12_limit_flow(seed),
        criterion_13_lower_bound(seed),
        criterion_14_mills(seed),
        criterion_15_disk(seed),
        criterion_16_grid_exact(seed),
        criterion_17_grid_asymptotics(seed),
        criterion_18_determinism(seed),
    ]
}
