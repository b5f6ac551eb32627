//! Samplers and measure calculators for the unit-intensity isotropic
//! Poisson line process, for Slivnyak-conditioned variants, and for the
//! improper anisotropic process that arises as the scaling limit of flow
//! at the centre.
//!
//! Lines hitting a disk window are a Poisson process on the (r, θ)
//! rectangle about the window centre, so sampling is exact: draw a
//! Poisson(πR) count, then θ uniform on [0,π) and signed centre distance
//! uniform on (−R, R), and re-express `r` about the global origin.

use crate::geom::{Line, Point, Segment};
use crate::numerics::RngStream;
use crate::{Error, Result};
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use std::f64::consts::PI;

/// Disk observation window.
#[derive(Debug, Clone, Copy)]
pub struct DiskWindow {
    pub center: Point,
    pub radius: f64,
}

impl DiskWindow {
    pub fn new(center: Point, radius: f64) -> Self {
        debug_assert!(radius > 0.0);
        DiskWindow { center, radius }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.center.dist(p) <= self.radius
    }
}

/// Intensity model tag for a sampled pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternModel {
    IsotropicUnit,
    ImproperStrip,
}

/// A finite realization of a (possibly conditioned) Poisson line process
/// in a window. Conditioned lines are stored separately so flow
/// indicators can include or exclude them per experiment.
#[derive(Debug, Clone)]
pub struct LinePattern {
    pub lines: Vec<Line>,
    pub conditioned: Vec<Line>,
    pub window: DiskWindow,
    pub model: PatternModel,
    pub seed_record: RngStream,
}

/// Convex test bodies with closed-form hitting measure.
#[derive(Debug, Clone, Copy)]
pub enum ConvexBody {
    Segment(Segment),
    Disk(DiskWindow),
}

/// Invariant measure (intensity ½ dr dθ) of the set of lines hitting the
/// body: the length for a segment, half the perimeter (πR) for a disk.
pub fn hitting_measure(body: &ConvexBody) -> Result<f64> {
    match body {
        ConvexBody::Segment(s) => Ok(s.length()),
        ConvexBody::Disk(d) => {
            if d.radius <= 0.0 {
                return Err(Error::UnsupportedBody);
            }
            Ok(PI * d.radius)
        }
    }
}

/// Sample a unit-intensity isotropic pattern on the window.
pub fn sample_pattern(window: &DiskWindow, stream: RngStream) -> LinePattern {
    let mut rng = stream.rng();
    let mean = PI * window.radius;
    let count = Poisson::new(mean).unwrap().sample(&mut rng) as usize;
    let mut lines = Vec::with_capacity(count);
    for _ in 0..count {
        let theta = rng.gen::<f64>() * PI;
        let d = window.radius * (2.0 * rng.gen::<f64>() - 1.0);
        lines.push(rebase(theta, d, &window.center));
    }
    LinePattern {
        lines,
        conditioned: Vec::new(),
        window: *window,
        model: PatternModel::IsotropicUnit,
        seed_record: stream,
    }
}

/// Convert a line sampled relative to `center` (signed distance `d`,
/// angle `theta`) into global (r, θ) form.
fn rebase(theta: f64, d: f64, center: &Point) -> Line {
    let (nx, ny) = (-theta.sin(), theta.cos());
    Line::new(d + center.x * nx + center.y * ny, theta)
}

/// Direction law for a conditioned line.
#[derive(Debug, Clone, Copy)]
pub enum LineDirection {
    Fixed(f64),
    Uniform,
}

/// Append one conditioned line through `anchor` (Slivnyak: the residual
/// pattern stays Poisson, so the unconditioned lines are untouched).
pub fn add_line_through(pattern: &LinePattern, anchor: &Point, direction: LineDirection, stream: RngStream) -> LinePattern {
    let theta = match direction {
        LineDirection::Fixed(t) => t.rem_euclid(PI),
        LineDirection::Uniform => stream.rng().gen::<f64>() * PI,
    };
    let (nx, ny) = (-theta.sin(), theta.cos());
    let mut out = pattern.clone();
    out.conditioned.push(Line::new(anchor.x * nx + anchor.y * ny, theta));
    out
}

/// Append a conditioned pair through `anchor`: first direction uniform,
/// relative angle α with density ½ sin α on [0, π).
pub fn add_line_pair_through(pattern: &LinePattern, anchor: &Point, stream: RngStream) -> LinePattern {
    let mut rng = stream.rng();
    let t1 = rng.gen::<f64>() * PI;
    let alpha = (1.0 - 2.0 * rng.gen::<f64>()).acos();
    let t2 = (t1 + alpha).rem_euclid(PI);
    let mut out = pattern.clone();
    for theta in [t1, t2] {
        let (nx, ny) = (-theta.sin(), theta.cos());
        out.conditioned.push(Line::new(anchor.x * nx + anchor.y * ny, theta));
    }
    out
}

/// A line of the improper anisotropic process, recorded by its intercepts
/// on the vertical axes x = −1 and x = +1.
#[derive(Debug, Clone, Copy)]
pub struct StripLine {
    pub y_minus: f64,
    pub y_plus: f64,
}

impl StripLine {
    /// Height at abscissa x.
    pub fn height_at(&self, x: f64) -> f64 {
        0.5 * (self.y_minus + self.y_plus) + 0.5 * (self.y_plus - self.y_minus) * x
    }

    /// Slope of the line (rise per unit x).
    pub fn slope(&self) -> f64 {
        0.5 * (self.y_plus - self.y_minus)
    }

    /// The same line as a geometric [`Line`].
    pub fn to_line(&self) -> Line {
        Line::through(Point::new(-1.0, self.y_minus), Point::new(1.0, self.y_plus))
    }
}

/// Sample the improper process restricted to an intercept box: intensity
/// ¼ dy₊ dy₋, so the count is Poisson((y_max−y_min)²/4) and intercept
/// pairs are i.i.d. uniform on the square. The process has no global
/// realization; callers supply the truncation.
pub fn sample_improper_strip(y_min: f64, y_max: f64, stream: RngStream) -> Result<Vec<StripLine>> {
    if !(y_min < y_max) {
        if y_min == y_max {
            return Ok(Vec::new());
        }
        return Err(Error::InvalidInput("sample_improper_strip: y_min > y_max".into()));
    }
    let mut rng = stream.rng();
    let side = y_max - y_min;
    let mean = side * side / 4.0;
    let count = if mean > 0.0 {
        Poisson::new(mean).unwrap().sample(&mut rng) as usize
    } else {
        0
    };
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(StripLine {
            y_minus: y_min + side * rng.gen::<f64>(),
            y_plus: y_min + side * rng.gen::<f64>(),
        });
    }
    Ok(out)
}

/// Retention probability that couples the improper limit back to the
/// isotropic process at scale n: `(1 + tan²φ / n)^{-3/2}` for a line of
/// slope tan φ in scaled coordinates.
pub fn retention_probability(slope: f64, n: f64) -> f64 {
    (1.0 + slope * slope / n).powf(-1.5)
}

/// Thin box-sampled strip lines down to the isotropic process at scale n.
pub fn thin_to_isotropic(strip_lines: &[StripLine], n: f64, stream: RngStream) -> Result<Vec<StripLine>> {
    if n < 1.0 {
        return Err(Error::InvalidInput("thin_to_isotropic requires n >= 1".into()));
    }
    let mut rng = stream.rng();
    Ok(strip_lines
        .iter()
        .filter(|l| rng.gen::<f64>() < retention_probability(l.slope(), n))
        .copied()
        .collect())
}

/// CSV rows `kind,r,theta,y_minus,y_plus` for a pattern (isotropic and
/// conditioned lines fill r,theta; strip lines fill the intercepts).
pub fn pattern_csv(pattern: &LinePattern, strip: &[StripLine]) -> String {
    let mut s = String::from("kind,r,theta,y_minus,y_plus\n");
    for l in &pattern.lines {
        s.push_str(&format!("poisson,{},{},,\n", l.r, l.theta));
    }
    for l in &pattern.conditioned {
        s.push_str(&format!("conditioned,{},{},,\n", l.r, l.theta));
    }
    for l in strip {
        s.push_str(&format!("strip,,,{},{}\n", l.y_minus, l.y_plus));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::crosses;
    use crate::numerics::ks_test;

    #[test]
    fn hitting_measures() {
        let seg = ConvexBody::Segment(Segment::new(Point::new(0.0, 0.0), Point::new(3.0, 4.0)));
        assert!((hitting_measure(&seg).unwrap() - 5.0).abs() < 1e-12);
        let disk = ConvexBody::Disk(DiskWindow::new(Point::new(1.0, 1.0), 2.0));
        assert!((hitting_measure(&disk).unwrap() - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn pattern_count_and_segment_calibration() {
        // mean count ~ pi R; mean crossings of a fixed segment ~ its length
        let window = DiskWindow::new(Point::new(2.0, -1.0), 6.0);
        let seg = Segment::new(Point::new(0.0, -1.0), Point::new(4.0, -1.0));
        let reps = 4000;
        let mut count = 0usize;
        let mut hits = 0usize;
        for i in 0..reps {
            let pat = sample_pattern(&window, RngStream::new(101, i));
            count += pat.lines.len();
            hits += pat.lines.iter().filter(|l| crosses(l, &seg)).count();
        }
        let mean_count = count as f64 / reps as f64;
        let mean_hits = hits as f64 / reps as f64;
        assert!((mean_count - PI * 6.0).abs() < 0.3, "{mean_count}");
        // Poisson(4): sd 2, se 2/sqrt(4000) ~ 0.032
        assert!((mean_hits - 4.0).abs() < 0.1, "{mean_hits}");
    }

    #[test]
    fn hit_counts_are_poisson() {
        // chi-square goodness of fit of segment hit counts against
        // Poisson(4) over 10^4 patterns
        use crate::numerics::chi2_quantile;
        let window = DiskWindow::new(Point::new(0.0, 0.0), 5.0);
        let seg = Segment::new(Point::new(-2.0, 0.0), Point::new(2.0, 0.0));
        let reps = 10_000usize;
        let kmax = 13usize;
        let mut obs = vec![0.0f64; kmax + 1];
        for i in 0..reps {
            let pat = sample_pattern(&window, RngStream::new(404, i as u64));
            let hits = pat.lines.iter().filter(|l| crosses(l, &seg)).count();
            obs[hits.min(kmax)] += 1.0;
        }
        let lam = 4.0f64;
        let mut pmf = Vec::with_capacity(kmax + 1);
        let mut p = (-lam).exp();
        let mut cum = 0.0;
        for k in 0..kmax {
            pmf.push(p);
            cum += p;
            p *= lam / (k as f64 + 1.0);
        }
        pmf.push(1.0 - cum); // tail bucket
        let stat: f64 = obs
            .iter()
            .zip(&pmf)
            .map(|(o, q)| {
                let e = q * reps as f64;
                (o - e) * (o - e) / e
            })
            .sum();
        // 13 dof at the 99.9% level
        let crit = chi2_quantile(13.0, 3.090);
        assert!(stat < crit, "chi2 = {stat} vs crit {crit}");
    }

    #[test]
    fn translation_invariance_of_hits() {
        // shifting the window and a co-shifted test segment leaves the
        // hit distribution alone
        let reps = 4000;
        let mut m = [0.0f64; 2];
        for (j, shift) in [0.0, 17.0].iter().enumerate() {
            let window = DiskWindow::new(Point::new(*shift, 0.0), 5.0);
            let seg = Segment::new(Point::new(shift - 1.0, 0.5), Point::new(shift + 1.0, 0.5));
            let mut hits = 0usize;
            for i in 0..reps {
                let pat = sample_pattern(&window, RngStream::new(2002 + j as u64, i));
                hits += pat.lines.iter().filter(|l| crosses(l, &seg)).count();
            }
            m[j] = hits as f64 / reps as f64;
        }
        // both estimate 2.0, each with se ~ sqrt(2/4000) ~ 0.022
        assert!((m[0] - m[1]).abs() < 0.1, "{m:?}");
    }

    #[test]
    fn conditioned_lines() {
        let window = DiskWindow::new(Point::new(0.0, 0.0), 4.0);
        let pat = sample_pattern(&window, RngStream::new(7, 0));
        let anchor = Point::new(1.0, 2.0);
        let out = add_line_through(&pat, &anchor, LineDirection::Fixed(0.0), RngStream::new(7, 1));
        assert_eq!(out.conditioned.len(), 1);
        assert_eq!(out.lines.len(), pat.lines.len());
        let l = out.conditioned[0];
        assert!(l.signed_distance(&anchor).abs() < 1e-12);
        assert_eq!(l.theta, 0.0);

        // uniform direction: theta ~ U[0, pi)
        let thetas: Vec<f64> = (0..2000)
            .map(|i| {
                add_line_through(&pat, &anchor, LineDirection::Uniform, RngStream::new(8, i)).conditioned[0].theta / PI
            })
            .collect();
        let r = ks_test(&thetas, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(r.p_value > 0.001, "p={}", r.p_value);
    }

    #[test]
    fn sine_density_pair() {
        let window = DiskWindow::new(Point::new(0.0, 0.0), 2.0);
        let pat = sample_pattern(&window, RngStream::new(9, 0));
        let anchor = Point::new(0.0, 0.0);
        let alphas: Vec<f64> = (0..3000)
            .map(|i| {
                let two = add_line_pair_through(&pat, &anchor, RngStream::new(10, i));
                let k = two.conditioned.len();
                let a = (two.conditioned[k - 1].theta - two.conditioned[k - 2].theta).rem_euclid(PI);
                a
            })
            .collect();
        // CDF of the ½ sin α density on [0, π) is (1 − cos α)/2
        let r = ks_test(&alphas, |a| (1.0 - a.cos()) / 2.0).unwrap();
        assert!(r.p_value > 0.001, "p={}", r.p_value);
    }

    #[test]
    fn strip_sampler_counts() {
        assert!(sample_improper_strip(1.0, 1.0, RngStream::new(1, 0)).unwrap().is_empty());
        let reps = 3000;
        let mut total = 0usize;
        for i in 0..reps {
            total += sample_improper_strip(0.0, 2.0, RngStream::new(11, i)).unwrap().len();
        }
        let mean = total as f64 / reps as f64;
        assert!((mean - 1.0).abs() < 0.06, "{mean}"); // box [0,2]^2: mean 1
    }

    #[test]
    fn strip_disjoint_boxes_independent() {
        // counts over two disjoint intercept boxes: covariance ~ 0
        let reps = 4000;
        let mut a = Vec::with_capacity(reps);
        let mut b = Vec::with_capacity(reps);
        for i in 0..reps {
            let ls = sample_improper_strip(-4.0, 4.0, RngStream::new(12, i as u64)).unwrap();
            let ca = ls
                .iter()
                .filter(|l| l.y_minus < 0.0 && l.y_plus < 0.0)
                .count() as f64;
            let cb = ls
                .iter()
                .filter(|l| l.y_minus >= 0.0 && l.y_plus >= 0.0)
                .count() as f64;
            a.push(ca);
            b.push(cb);
        }
        let n = reps as f64;
        let ma = a.iter().sum::<f64>() / n;
        let mb = b.iter().sum::<f64>() / n;
        let cov = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / n;
        let va = a.iter().map(|x| (x - ma) * (x - ma)).sum::<f64>() / n;
        let vb = b.iter().map(|x| (x - mb) * (x - mb)).sum::<f64>() / n;
        let se = (va * vb / n).sqrt();
        assert!(cov.abs() < 3.0 * se.max(1e-3), "cov {cov} vs se {se}");
    }

    #[test]
    fn strip_angle_density() {
        // lines crossing a unit x-segment have angle density
        // ½ tanφ sec²φ: the intercept form ¼ dy₊dy₋ maps to ½ dc dm in
        // (centre height, slope) coordinates, and the x-crossing
        // constraint contributes the |tanφ| Jacobian
        use crate::numerics::chi2_quantile;
        let y = 40.0;
        let reps = 300u64;
        let lo = 0.15 * PI;
        let hi = 0.45 * PI;
        let bins = 6usize;
        let mut obs = vec![0.0f64; bins];
        for i in 0..reps {
            for l in sample_improper_strip(-y, y, RngStream::new(505, i)).unwrap() {
                let m = l.slope();
                if m == 0.0 {
                    continue;
                }
                let x0 = -0.5 * (l.y_minus + l.y_plus) / m;
                if !(0.0..1.0).contains(&x0) {
                    continue;
                }
                let phi = m.atan().rem_euclid(PI);
                if phi >= lo && phi < hi {
                    obs[((phi - lo) / (hi - lo) * bins as f64) as usize] += 1.0;
                }
            }
        }
        // expected per bin: reps * ∫ ½ tanφ sec²φ dφ = reps·¼·Δ(tan²φ)
        let mut stat = 0.0;
        for (k, o) in obs.iter().enumerate() {
            let a = lo + (hi - lo) * k as f64 / bins as f64;
            let b = lo + (hi - lo) * (k as f64 + 1.0) / bins as f64;
            let e = reps as f64 * 0.25 * (b.tan().powi(2) - a.tan().powi(2));
            stat += (o - e) * (o - e) / e;
        }
        let crit = chi2_quantile(bins as f64, 3.090);
        assert!(stat < crit, "chi2 = {stat} vs crit {crit}; obs = {obs:?}");
    }

    #[test]
    fn thinning_examples() {
        assert_eq!(retention_probability(0.0, 5.0), 1.0);
        assert!((retention_probability(1.0, 1.0) - 2.0f64.powf(-1.5)).abs() < 1e-15);
        assert!((retention_probability(3.0, 1e12) - 1.0).abs() < 1e-10);
        let lines = vec![
            StripLine { y_minus: 0.0, y_plus: 0.0 },
            StripLine { y_minus: -1.0, y_plus: 1.0 },
        ];
        // flat line always survives
        let kept = thin_to_isotropic(&lines, 4.0, RngStream::new(13, 0)).unwrap();
        assert!(kept.iter().any(|l| l.slope() == 0.0));
    }

    #[test]
    fn determinism_and_csv() {
        let window = DiskWindow::new(Point::new(0.0, 0.0), 3.0);
        let a = sample_pattern(&window, RngStream::new(99, 5));
        let b = sample_pattern(&window, RngStream::new(99, 5));
        let strip = sample_improper_strip(-1.0, 1.0, RngStream::new(99, 6)).unwrap();
        assert_eq!(pattern_csv(&a, &strip), pattern_csv(&b, &strip));
        assert!(pattern_csv(&a, &strip).starts_with("kind,r,theta,y_minus,y_plus\n"));
    }
}
