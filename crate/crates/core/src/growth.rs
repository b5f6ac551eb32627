//! Event-driven simulation of the boundary growth process in excess time
//! and of the coupled subordinators that sandwich its log-angle, plus the
//! first-passage functionals built on them.
//!
//! In excess time t the angle Θ jumps at a half-unit-rate Poisson clock;
//! between jumps progress and height grow linearly at rates
//! `cosΘ/(1−cosΘ)` and `sinΘ/(1−cosΘ)`. Every path functional here is
//! piecewise-analytic, so simulation is exact: no discretization error
//! anywhere in this module.

use crate::numerics::{integrate, Domain, QuadratureSpec, RngStream};
use crate::{Error, Result};
use rand::Rng;
use std::f64::consts::PI;

/// Event budget for a single growth run.
const MAX_EVENTS: usize = 1_000_000;

/// Below this angle the linear rates are evaluated in log space; the
/// rates grow like 2/Θ² and would otherwise lose the crossing time to
/// overflow before the closed-form interval integral can be taken.
const THETA_TINY: f64 = 1e-8;

/// Initial condition for [`simulate_growth`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthInitial {
    /// Full construction: Θ₀ = π at X = 0.
    Theta0Pi,
    /// Reduced start: Θ₀ has density cos θ on (0, π/2).
    Theta0Cosine,
}

/// State snapshot at a jump of the angle process.
#[derive(Debug, Clone, Copy)]
pub struct GrowthEvent {
    /// Excess time t = s − X_s.
    pub t: f64,
    /// Angle immediately after the jump.
    pub theta_after: f64,
    /// Progress toward the goal.
    pub x: f64,
    /// Height.
    pub h: f64,
}

impl GrowthEvent {
    /// Arc length along the path: s = t + X_s by the time change.
    pub fn arc_length(&self) -> f64 {
        self.t + self.x
    }
}

/// Jump record of one growth run.
#[derive(Debug, Clone)]
pub struct GrowthPath {
    pub events: Vec<GrowthEvent>,
    /// First excess time at which X reached the goal, if it did.
    pub sigma: Option<f64>,
    pub initial: GrowthInitial,
}

/// New angle after a jump from `theta` driven by uniform variate `v`:
/// the jump Δ has CDF (1−cos φ)/(1−cos θ) on [0, θ].
pub fn theta_jump_with(theta: f64, v: f64) -> f64 {
    if theta < THETA_TINY {
        // 1−cos φ = v(1−cos θ) collapses to φ = θ√v at this scale
        return theta * (1.0 - v.sqrt());
    }
    let one_minus_cos = 2.0 * (0.5 * theta).sin().powi(2);
    let delta = (1.0 - v * one_minus_cos).acos();
    (theta - delta).max(0.0)
}

/// Sample the post-jump angle.
pub fn sample_theta_jump(theta_before: f64, stream: RngStream) -> f64 {
    theta_jump_with(theta_before, stream.rng().gen::<f64>())
}

fn rates(theta: f64) -> (f64, f64) {
    let omc = 2.0 * (0.5 * theta).sin().powi(2);
    (theta.cos() / omc, theta.sin() / omc)
}

/// Crossing time of the level `gap` under progress rate cosΘ/(1−cosΘ),
/// computed in log space when Θ is tiny.
fn crossing_time(theta: f64, gap: f64) -> f64 {
    if theta < THETA_TINY {
        let ln_rate = theta.cos().ln() - (2.0f64).ln() - 2.0 * (0.5 * theta).sin().ln();
        (gap.ln() - ln_rate).exp()
    } else {
        gap / rates(theta).0
    }
}

/// Run the growth dynamics until X first reaches n, recording the jump
/// chain. σ(n) is solved exactly inside the final inter-jump interval.
pub fn simulate_growth(n: f64, initial: GrowthInitial, stream: RngStream) -> Result<GrowthPath> {
    if !(n > 0.0) {
        return Err(Error::InvalidInput("simulate_growth requires n > 0".into()));
    }
    let mut rng = stream.rng();
    let mut theta = match initial {
        GrowthInitial::Theta0Pi => PI,
        GrowthInitial::Theta0Cosine => rng.gen::<f64>().asin(),
    };
    let mut t = 0.0;
    let mut x = 0.0;
    let mut h = 0.0;
    let mut events = Vec::new();
    for _ in 0..MAX_EVENTS {
        let dt = -2.0 * (1.0 - rng.gen::<f64>()).ln(); // Exp(rate 1/2)
        if theta < 0.5 * PI && x < n {
            let need = crossing_time(theta, n - x);
            if need <= dt {
                return Ok(GrowthPath {
                    events,
                    sigma: Some(t + need),
                    initial,
                });
            }
        }
        let (rx, rh) = rates(theta);
        x += rx * dt;
        h += rh * dt;
        t += dt;
        theta = theta_jump_with(theta, rng.gen::<f64>());
        events.push(GrowthEvent {
            t,
            theta_after: theta,
            x,
            h,
        });
    }
    Err(Error::HorizonExceeded)
}

/// CSV rows `t,theta,x,h` at event times.
pub fn growth_csv(path: &GrowthPath) -> String {
    let mut s = String::from("t,theta,x,h\n");
    for e in &path.events {
        s.push_str(&format!("{},{},{},{}\n", e.t, e.theta_after, e.x, e.h));
    }
    s
}

/// Closed-form mean and second moment of the initial-segment length
/// bound `T₁ + T₂ + T₁ sec U` (T₁, T₂ ~ Exp(¼) and U with density
/// (2/√3)·cos u on (0, π/3), all independent).
pub fn initial_segment_moments() -> (f64, f64) {
    let mean = 8.0 * (1.0 + PI / (3.0 * 3.0f64.sqrt()));
    let second = 32.0 * (3.0 + (2.0 / 3.0f64.sqrt()) * (PI + (2.0 + 3.0f64.sqrt()).ln()));
    (mean, second)
}

/// One draw of the initial-segment bound, for the MC cross-check.
pub fn initial_segment_sample(rng: &mut impl Rng) -> f64 {
    let t1 = -4.0 * (1.0 - rng.gen::<f64>()).ln();
    let t2 = -4.0 * (1.0 - rng.gen::<f64>()).ln();
    // CDF of U is (2/√3) sin u on (0, π/3)
    let u = (rng.gen::<f64>() * 3.0f64.sqrt() / 2.0).asin();
    t1 + t2 + t1 / u.cos()
}

/// Horizon for [`simulate_subordinators`].
#[derive(Debug, Clone, Copy)]
pub enum Horizon {
    /// Simulate jumps up to this time.
    Time(f64),
    /// Simulate until ∫ exp(2ξ) ds reaches this value.
    IntegralTarget(f64),
}

/// Jump records of the coupled subordinators ξ ≥ η driven by shared unit
/// Exponential marks on a half-unit-rate Poisson clock.
#[derive(Debug, Clone)]
pub struct SubordinatorPath {
    pub jump_times: Vec<f64>,
    pub marks: Vec<f64>,
    pub xi_jumps: Vec<f64>,
    pub eta_jumps: Vec<f64>,
    /// Time up to which the path is simulated.
    pub horizon: f64,
}

/// ξ jump from mark J: −log(1 − e^{−J/2}); distributed as the maximum of
/// two unit Exponentials (mean 3/2, variance 5/4).
pub fn xi_jump_from_mark(j: f64) -> f64 {
    -(-(-0.5 * j).exp()).ln_1p()
}

/// η jump from mark J: −log(1 − e^{−2J/π}).
pub fn eta_jump_from_mark(j: f64) -> f64 {
    -(-(-2.0 * j / PI).exp()).ln_1p()
}

/// Simulate the coupled pair on the requested horizon.
pub fn simulate_subordinators(horizon: Horizon, stream: RngStream) -> Result<SubordinatorPath> {
    match horizon {
        Horizon::Time(t) if !(t > 0.0) => {
            return Err(Error::InvalidInput("horizon must be positive".into()))
        }
        Horizon::IntegralTarget(n) if !(n > 0.0) => {
            return Err(Error::InvalidInput("integral target must be positive".into()))
        }
        _ => {}
    }
    let mut rng = stream.rng();
    let mut path = SubordinatorPath {
        jump_times: Vec::new(),
        marks: Vec::new(),
        xi_jumps: Vec::new(),
        eta_jumps: Vec::new(),
        horizon: 0.0,
    };
    let mut t = 0.0;
    let mut xi: f64 = 0.0;
    let mut acc: f64 = 0.0;
    for _ in 0..MAX_EVENTS {
        let dt = -2.0 * (1.0 - rng.gen::<f64>()).ln();
        // accumulate with the stored cumulative times so that replaying
        // the path (tau_first_passage, integral_exp2xi) is bit-identical
        let t_next = t + dt;
        match horizon {
            Horizon::Time(tmax) => {
                if t_next > tmax {
                    path.horizon = tmax;
                    return Ok(path);
                }
            }
            Horizon::IntegralTarget(n) => {
                let g = (2.0 * xi).exp();
                if acc + g * (t_next - t) >= n {
                    path.horizon = t + (n - acc) / g;
                    return Ok(path);
                }
                acc += g * (t_next - t);
            }
        }
        t = t_next;
        let j = -(1.0 - rng.gen::<f64>()).ln();
        path.jump_times.push(t);
        path.marks.push(j);
        path.xi_jumps.push(xi_jump_from_mark(j));
        path.eta_jumps.push(eta_jump_from_mark(j));
        xi += xi_jump_from_mark(j);
    }
    Err(Error::HorizonExceeded)
}

impl SubordinatorPath {
    /// ξ at time t (càdlàg).
    pub fn xi_at(&self, t: f64) -> f64 {
        self.jump_times
            .iter()
            .zip(&self.xi_jumps)
            .take_while(|(&w, _)| w <= t)
            .map(|(_, &j)| j)
            .sum()
    }

    /// η at time t (càdlàg).
    pub fn eta_at(&self, t: f64) -> f64 {
        self.jump_times
            .iter()
            .zip(&self.eta_jumps)
            .take_while(|(&w, _)| w <= t)
            .map(|(_, &j)| j)
            .sum()
    }

    /// Exact ∫₀ᵗ exp(2ξ_s) ds: the integrand is piecewise constant, so
    /// every interval contributes in closed form.
    pub fn integral_exp2xi(&self, t: f64) -> f64 {
        let mut acc: f64 = 0.0;
        let mut xi: f64 = 0.0;
        let mut last = 0.0;
        for (&w, &j) in self.jump_times.iter().zip(&self.xi_jumps) {
            if w >= t {
                break;
            }
            acc += (2.0 * xi).exp() * (w - last);
            xi += j;
            last = w;
        }
        acc + (2.0 * xi).exp() * (t - last)
    }

    /// CSV rows `t,J,xi,eta` at jump times.
    pub fn csv(&self) -> String {
        let mut s = String::from("t,J,xi,eta\n");
        let mut xi: f64 = 0.0;
        let mut eta = 0.0;
        for i in 0..self.jump_times.len() {
            xi += self.xi_jumps[i];
            eta += self.eta_jumps[i];
            s.push_str(&format!("{},{},{},{}\n", self.jump_times[i], self.marks[i], xi, eta));
        }
        s
    }
}

/// Laplace exponent of ξ: `Φ(q) = q(3+q) / (2(1+q)(2+q))` for q > −1.
pub fn laplace_exponent(q: f64) -> Result<f64> {
    if q <= -1.0 {
        return Err(Error::DomainError(format!("laplace_exponent needs q > -1, got {q}")));
    }
    Ok(q * (3.0 + q) / (2.0 * (1.0 + q) * (2.0 + q)))
}

/// Exact first passage `τ(n) = inf{t : ∫₀ᵗ exp(2ξ_s) ds ≥ n}`, solved in
/// closed form inside the achieving interval.
pub fn tau_first_passage(path: &SubordinatorPath, n: f64) -> Result<f64> {
    let mut acc: f64 = 0.0;
    let mut xi: f64 = 0.0;
    let mut last = 0.0;
    for (&w, &j) in path.jump_times.iter().zip(&path.xi_jumps) {
        let g = (2.0 * xi).exp();
        if acc + g * (w - last) >= n {
            return Ok(last + (n - acc) / g);
        }
        acc += g * (w - last);
        xi += j;
        last = w;
    }
    let g = (2.0 * xi).exp();
    // round-off slack at the horizon: representing the crossing time
    // costs up to a few ulps of the horizon, amplified by the integrand
    let slack = 1e-12 * n + 4.0 * f64::EPSILON * g * path.horizon.abs().max(1.0);
    if acc + g * (path.horizon - last) >= n - slack {
        Ok((last + (n - acc) / g).min(path.horizon))
    } else {
        Err(Error::HorizonExceeded)
    }
}

/// Inverse-moment check: formula `(2/3)(1+(n−1)e^{−n/2})` against the MC
/// estimate of `n·E[exp(−2ξ_{τ(n)})]`.
#[derive(Debug, Clone, Copy)]
pub struct InverseMoment {
    pub formula: f64,
    pub mc_estimate: f64,
    pub mc_std_error: f64,
}

pub fn lamperti_inverse_moment(n: f64, mc_replicates: u64, stream: RngStream) -> Result<InverseMoment> {
    if n < 1.0 {
        return Err(Error::InvalidInput("lamperti_inverse_moment requires n >= 1".into()));
    }
    let formula = (2.0 / 3.0) * (1.0 + (n - 1.0) * (-n / 2.0).exp());
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for i in 0..mc_replicates {
        let path = simulate_subordinators(Horizon::IntegralTarget(n), stream.offset(i))?;
        let tau = path.horizon;
        let v = n * (-2.0 * path.xi_at(tau)).exp();
        sum += v;
        sumsq += v * v;
    }
    let m = sum / mc_replicates as f64;
    let var = (sumsq / mc_replicates as f64 - m * m).max(0.0);
    Ok(InverseMoment {
        formula,
        mc_estimate: m,
        mc_std_error: (var / mc_replicates as f64).sqrt(),
    })
}

/// Monte Carlo estimate of the perpetuity `U∞ = 1 + Σ_k Π_{m≤k} e^{−2Δ_mη}`.
#[derive(Debug, Clone, Copy)]
pub struct PerpetuityEstimate {
    pub value: f64,
    pub truncation_level: u32,
    /// Bound on the expected truncated tail.
    pub tail_bound: f64,
}

/// E[m] for the perpetuity multiplier m = (1−e^{−2J/π})², by quadrature
/// of its density (π/4)(1−√x)^{π/2−1} x^{−1/2} on (0,1); the x^{−1/2}
/// endpoint is removed exactly by x = w².
pub fn perpetuity_multiplier_mean() -> Result<f64> {
    let q = integrate(
        |x: f64| x * (PI / 4.0) * (1.0 - x.sqrt()).powf(PI / 2.0 - 1.0) / x.sqrt(),
        Domain::SqrtSingularLower { a: 0.0, b: 1.0 },
        &QuadratureSpec::with_rel_tol(1e-10),
    )?;
    Ok(q.value)
}

/// ∫ density = 1 check value for the multiplier density.
pub fn perpetuity_density_mass() -> Result<f64> {
    let q = integrate(
        |x: f64| (PI / 4.0) * (1.0 - x.sqrt()).powf(PI / 2.0 - 1.0) / x.sqrt(),
        Domain::SqrtSingularLower { a: 0.0, b: 1.0 },
        &QuadratureSpec::with_rel_tol(1e-10),
    )?;
    Ok(q.value)
}

/// Analytic mean 1/(1−E[m]) via the Vervaat fixed point U =ᵈ 1 + m·U′.
pub fn perpetuity_analytic_mean() -> Result<f64> {
    Ok(1.0 / (1.0 - perpetuity_multiplier_mean()?))
}

/// One sampled perpetuity value; the product series is truncated once the
/// running product drops below 1e−12.
pub fn perpetuity_sample(stream: RngStream) -> PerpetuityEstimate {
    let mut rng = stream.rng();
    let mut value = 1.0;
    let mut prod = 1.0;
    let mut level = 0u32;
    while prod >= 1e-12 {
        let j = -(1.0 - rng.gen::<f64>()).ln();
        let m = {
            let t = (-(-2.0 * j / PI).exp()).ln_1p(); // log(1 - e^{-2J/pi})
            (2.0 * t).exp()
        };
        prod *= m;
        value += prod;
        level += 1;
    }
    // E[tail | prod] = prod * E[m]/(1-E[m]) < prod * 0.28
    PerpetuityEstimate {
        value,
        truncation_level: level,
        tail_bound: prod * 0.28,
    }
}

/// MC mean and standard error of U∞ over replicates.
pub fn perpetuity_mc(replicates: u64, stream: RngStream) -> (f64, f64) {
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for i in 0..replicates {
        let v = perpetuity_sample(stream.offset(i)).value;
        sum += v;
        sumsq += v * v;
    }
    let m = sum / replicates as f64;
    let var = (sumsq / replicates as f64 - m * m).max(0.0);
    (m, (var / replicates as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{ks_test, ks_two_sample};

    #[test]
    fn theta_jump_examples() {
        // θ = π/2, V = 1/2: Δ = arccos(1/2) = π/3, new θ = π/6
        let t = theta_jump_with(PI / 2.0, 0.5);
        assert!((t - PI / 6.0).abs() < 1e-12);
        // V → 0 gives no jump
        let t = theta_jump_with(PI / 2.0, 1e-14);
        assert!((t - PI / 2.0).abs() < 1e-6);
    }

    #[test]
    fn theta_jump_cdf_at_pi() {
        // Δ given θ=π has CDF (1−cos φ)/2 on [0, π]
        let deltas: Vec<f64> = (0..3000)
            .map(|i| PI - sample_theta_jump(PI, RngStream::new(21, i)))
            .collect();
        let r = ks_test(&deltas, |phi| (1.0 - phi.cos()) / 2.0).unwrap();
        assert!(r.p_value > 0.001, "p={}", r.p_value);
    }

    #[test]
    fn rate_at_pi() {
        let (rx, _) = rates(PI);
        assert!((rx + 0.5).abs() < 1e-12); // cos π / (1−cos π) = −1/2
    }

    #[test]
    fn sigma_slopes_smoke() {
        // coarse check of E[σ(n)] ≈ (2/3) log n growth between two sizes
        let reps = 3000;
        let mut means = [0.0f64; 2];
        for (k, n) in [64.0, 1024.0].iter().enumerate() {
            let mut s = 0.0;
            for i in 0..reps {
                s += simulate_growth(*n, GrowthInitial::Theta0Cosine, RngStream::new(22 + k as u64, i))
                    .unwrap()
                    .sigma
                    .unwrap();
            }
            means[k] = s / reps as f64;
        }
        let slope = (means[1] - means[0]) / (1024.0f64.ln() - 64.0f64.ln());
        assert!((slope - 2.0 / 3.0).abs() < 0.12, "slope {slope}");
    }

    #[test]
    fn theta0_pi_dips_negative() {
        let path = simulate_growth(50.0, GrowthInitial::Theta0Pi, RngStream::new(23, 0)).unwrap();
        assert!(path.events.iter().any(|e| e.x < 0.0));
        assert!(path.sigma.is_some());
    }

    #[test]
    fn initial_segment_closed_forms() {
        let (mean, second) = initial_segment_moments();
        assert!((mean - 12.836798304624).abs() < 1e-9);
        assert!(mean >= 12.0); // sec U ≥ 1 bound
        let mut rng = RngStream::new(24, 0).rng();
        let n = 400_000;
        let mut s = 0.0;
        let mut s2 = 0.0;
        for _ in 0..n {
            let v = initial_segment_sample(&mut rng);
            s += v;
            s2 += v * v;
        }
        let m = s / n as f64;
        let m2 = s2 / n as f64;
        let se = ((m2 - m * m) / n as f64).sqrt();
        assert!((m - mean).abs() < 3.0 * se, "{m} vs {mean}");
        // second-moment se via rough fourth-moment bound
        assert!((m2 - second).abs() < 0.05 * second, "{m2} vs {second}");
    }

    #[test]
    fn subordinator_jump_moments_and_coupling() {
        let path = simulate_subordinators(Horizon::Time(40_000.0), RngStream::new(25, 0)).unwrap();
        let n = path.xi_jumps.len() as f64;
        let mean = path.xi_jumps.iter().sum::<f64>() / n;
        let var = path.xi_jumps.iter().map(|j| (j - mean) * (j - mean)).sum::<f64>() / n;
        assert!((mean - 1.5).abs() < 3.0 * (1.25f64 / n).sqrt() * 1.5, "mean {mean}");
        assert!((var - 1.25).abs() < 0.1, "var {var}");
        for (x, e) in path.xi_jumps.iter().zip(&path.eta_jumps) {
            assert!(e <= x, "coupling violated: eta jump {e} > xi jump {x}");
        }
    }

    #[test]
    fn laplace_exponent_values() {
        assert_eq!(laplace_exponent(0.0).unwrap(), 0.0);
        assert!((laplace_exponent(1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        // Φ'(0) = 3/4 (martingale drift)
        let d = (laplace_exponent(1e-6).unwrap() - laplace_exponent(-1e-6).unwrap()) / 2e-6;
        assert!((d - 0.75).abs() < 1e-6);
        assert!(laplace_exponent(-1.5).is_err());
    }

    #[test]
    fn tau_examples() {
        // a path with no jumps has integrand 1, so τ(n) = n
        let path = SubordinatorPath {
            jump_times: vec![],
            marks: vec![],
            xi_jumps: vec![],
            eta_jumps: vec![],
            horizon: 10.0,
        };
        assert!((tau_first_passage(&path, 7.0).unwrap() - 7.0).abs() < 1e-12);
        assert!(tau_first_passage(&path, 11.0).is_err());
        for i in 0..200 {
            let p = simulate_subordinators(Horizon::IntegralTarget(50.0), RngStream::new(26, i)).unwrap();
            let tau = tau_first_passage(&p, 50.0).unwrap();
            assert!(tau <= 50.0 + 1e-9); // trivial estimate τ(n) ≤ n
            assert!((tau - p.horizon).abs() < 1e-9);
        }
    }

    #[test]
    fn tau_representation_identity() {
        // τ(n) = (2/3)(log n − 2 M_{τ(n)} + log(exp(2 ξ_{τ(n)})/n)) exactly
        for i in 0..500 {
            let n = 25.0;
            let p = simulate_subordinators(Horizon::IntegralTarget(n), RngStream::new(27, i)).unwrap();
            let tau = tau_first_passage(&p, n).unwrap();
            let xi = p.xi_at(tau);
            let m = xi - 0.75 * tau;
            let rhs = (2.0 / 3.0) * (n.ln() - 2.0 * m + (2.0 * xi - n.ln()));
            assert!((tau - rhs).abs() < 1e-9, "{tau} vs {rhs}");
        }
    }

    #[test]
    fn lamperti_inverse_moment_examples() {
        let r = lamperti_inverse_moment(1.0, 4000, RngStream::new(28, 0)).unwrap();
        assert!((r.formula - 2.0 / 3.0).abs() < 1e-12);
        assert!((r.mc_estimate - r.formula).abs() < 3.0 * r.mc_std_error);
        // n → ∞ limit of the formula is 2/3
        let r = lamperti_inverse_moment(500.0, 1, RngStream::new(28, 1)).unwrap();
        assert!((r.formula - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn perpetuity_checks() {
        assert!((perpetuity_density_mass().unwrap() - 1.0).abs() < 1e-8);
        let em = perpetuity_multiplier_mean().unwrap();
        let closed = 1.0 - 2.0 / (1.0 + 2.0 / PI) + 1.0 / (1.0 + 4.0 / PI);
        assert!((em - closed).abs() < 1e-9, "{em} vs {closed}");
        let (mean, se) = perpetuity_mc(30_000, RngStream::new(29, 0));
        let target = perpetuity_analytic_mean().unwrap();
        assert!((mean - target).abs() < 3.0 * se + 1e-6, "{mean} vs {target}");
        let est = perpetuity_sample(RngStream::new(29, 777));
        assert!(est.value >= 1.0);
        assert!(est.tail_bound < 1e-11);
    }

    #[test]
    fn time_change_consistency() {
        // the embedded jump chain of Θ is the same whether events are
        // placed by the excess-time clock (rate 1/2) or by arc length
        // (rate (1−cosΘ)/2); compare Θ after 5 jumps
        let k = 5;
        let reps = 2000u64;
        let mut t_time = Vec::new();
        let mut s_time = Vec::new();
        for i in 0..reps {
            let mut rng = RngStream::new(30, i).rng();
            let mut th = PI / 2.0;
            for _ in 0..k {
                let _dt = -2.0 * (1.0 - rng.gen::<f64>()).ln();
                th = theta_jump_with(th, rng.gen::<f64>());
            }
            t_time.push(th);
            let mut rng = RngStream::new(31, i).rng();
            let mut th = PI / 2.0;
            for _ in 0..k {
                let rate = (1.0 - th.cos()) / 2.0;
                let _ds = -(1.0 - rng.gen::<f64>()).ln() / rate;
                th = theta_jump_with(th, rng.gen::<f64>());
            }
            s_time.push(th);
        }
        let r = ks_two_sample(&t_time, &s_time).unwrap();
        assert!(r.p_value > 0.001, "p = {}", r.p_value);
    }

    #[test]
    fn route_excess_matches_two_growth_excesses() {
        // total semi-perimeter excess decomposes into the excesses of
        // the two boundary growth processes meeting at a uniform split
        use crate::geom::Point;
        use crate::routes::{build_cell, semi_perimeter_routes, WindowPolicy};
        let n = 512.0;
        let reps = 400u64;
        let mut route_sum = 0.0;
        let mut count = 0.0;
        for i in 0..reps {
            let cell = build_cell(
                &Point::new(0.0, 0.0),
                &Point::new(n, 0.0),
                RngStream::new(33, i),
                &WindowPolicy::default(),
            )
            .unwrap();
            let (u, l) = semi_perimeter_routes(&cell).unwrap();
            route_sum += 0.5 * (u.excess + l.excess);
            count += 1.0;
        }
        let m_route = route_sum / count;

        let mut rng = RngStream::new(34, 0).rng();
        let pairs = 3000;
        let mut pair_sum = 0.0;
        for i in 0..pairs {
            let u: f64 = rng.gen::<f64>().clamp(1e-9, 1.0 - 1e-9);
            let a = simulate_growth(n * u, GrowthInitial::Theta0Pi, RngStream::new(34, 2 * i + 1))
                .unwrap()
                .sigma
                .unwrap();
            let b = simulate_growth(n * (1.0 - u), GrowthInitial::Theta0Pi, RngStream::new(34, 2 * i + 2))
                .unwrap()
                .sigma
                .unwrap();
            pair_sum += a + b;
        }
        let m_pair = pair_sum / pairs as f64;
        assert!(
            (m_pair - m_route).abs() <= 0.15 * m_route,
            "route {m_route} vs growth pair {m_pair}"
        );
    }

    #[test]
    fn printed_higher_moment_formula_disagrees_with_mc() {
        // the closed form quoted for E[Z₁^{-p}] (p > 1) does not survive
        // an MC comparison; the p = 1 Bertoin–Yor value does. Keep the
        // discrepancy pinned so nobody "fixes" code against that formula.
        let p = 2.0;
        let n: f64 = 2.0;
        let reps = 20_000u64;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for i in 0..reps {
            let path = simulate_subordinators(Horizon::IntegralTarget(n), RngStream::new(32, i)).unwrap();
            let v = n.powf(p) * (-2.0 * p * path.xi_at(path.horizon)).exp();
            sum += v;
            sumsq += v * v;
        }
        let m = sum / reps as f64;
        let se = ((sumsq / reps as f64 - m * m).max(0.0) / reps as f64).sqrt();
        let npow = n.powf(p);
        let inner = integrate(
            |v: f64| v.powf(p - 1.0) * (-v / 2.0).exp(),
            Domain::Finite { a: 0.0, b: npow / 2.0 },
            &QuadratureSpec::with_rel_tol(1e-10),
        )
        .unwrap()
        .value;
        let printed = (2.0 * p / (2.0 * p + 1.0))
            * (npow * (-npow / 2.0).exp() - (npow / 2.0).powf(1.0 - p) * inner);
        assert!(
            (m - printed).abs() > 10.0 * se,
            "printed formula unexpectedly matches MC: {m} vs {printed}"
        );
    }
}
