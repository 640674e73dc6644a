//! One-sided stable laws S(α, β=1, γ) with 0 < α < 1, under the
//! characteristic function
//!
//! φ(w) = exp(−γ|w|^α [1 − jβ sign(w) tan(πα/2)]).
//!
//! This is the Samorodnitsky–Taqqu form with dispersion γ = σ^α, so a draw of
//! S(α, 1, γ) equals γ^{1/α} times a draw of S(α, 1, 1).

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::distr::Open01;
use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{ensure, Error, Result};
use crate::quad::{integrate_with_breaks, QuadConfig, WynnEpsilon};
use crate::special::{gamma, q_function};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl StableParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        ensure(alpha > 0.0 && alpha <= 1.0, || format!("α must lie in (0, 1] (got {alpha})"))?;
        ensure((-1.0..=1.0).contains(&beta), || format!("β must lie in [−1, 1] (got {beta})"))?;
        ensure(gamma.is_finite() && gamma >= 0.0, || format!("γ must be finite and ≥ 0 (got {gamma})"))?;
        Ok(Self { alpha, beta, gamma })
    }

    /// Totally right-skewed law S(α, 1, γ).
    pub fn one_sided(alpha: f64, gamma: f64) -> Result<Self> {
        Self::new(alpha, 1.0, gamma)
    }

    fn require_one_sided(&self) -> Result<()> {
        ensure(self.beta == 1.0 && self.alpha < 1.0, || {
            format!("only β = 1 with 0 < α < 1 is supported (got α = {}, β = {})", self.alpha, self.beta)
        })
    }
}

/// Characteristic function at `w`.
pub fn cf(w: f64, p: &StableParams) -> Result<Complex64> {
    if p.alpha == 1.0 {
        return Err(Error::InvalidArgument("the α = 1 branch of the characteristic function is not supported".into()));
    }
    let a = p.gamma * w.abs().powf(p.alpha);
    let skew = p.beta * w.signum() * (FRAC_PI_2 * p.alpha).tan();
    Ok(Complex64::new(-a, a * skew).exp())
}

fn check_alpha(alpha: f64) -> Result<()> {
    ensure(alpha > 0.0 && alpha < 1.0, || format!("α must lie in (0, 1) (got {alpha})"))
}

/// Upper bound on F(x) for S(α, 1, 1), from the minimum of the Kanter
/// representation's kernel. Decays like exp(−c·x^{−α/(1−α)}) as x → 0.
pub fn left_tail_bound(x: f64, alpha: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let e = alpha / (1.0 - alpha);
    let a0 = (1.0 - alpha) * alpha.powf(e);
    let scaled = x * (FRAC_PI_2 * alpha).cos().powf(1.0 / alpha);
    (-a0 * scaled.powf(-e)).exp()
}

/// CDF of S(α, 1, 1). Uses the closed form 2Q(1/√x) at α = 1/2 and
/// characteristic-function inversion otherwise.
pub fn cdf_normalized(x: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if x.is_nan() {
        return Err(Error::InvalidArgument("x is NaN".into()));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    if alpha == 0.5 {
        return Ok(2.0 * q_function(1.0 / x.sqrt()));
    }
    cdf_normalized_inversion(x, alpha)
}

const TRUNCATION: f64 = 40.0;
const DIRECT_HALF_PERIODS: f64 = 400.0;
const LEFT_TAIL_FLOOR: f64 = 1e-18;

/// CDF of S(α, 1, 1) by Gil-Pelaez inversion, with no closed-form shortcut.
///
/// After substituting v = w^α the integral becomes
/// F(x) = 1/2 − (1/(πα)) ∫₀^∞ e^{−v} sin(τv − x v^{1/α}) / v dv, τ = tan(πα/2),
/// truncated at v = 40. When the phase has few half-periods the integral is
/// done by adaptive Gauss–Kronrod between its zeros; otherwise the tail is
/// summed half-period by half-period and the partial sums are accelerated
/// with Wynn's epsilon algorithm.
pub fn cdf_normalized_inversion(x: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if x.is_nan() {
        return Err(Error::InvalidArgument("x is NaN".into()));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    if left_tail_bound(x, alpha) < LEFT_TAIL_FLOOR {
        return Ok(0.0);
    }
    let integral = gil_pelaez_integral(x, alpha)?;
    let f = 0.5 - integral / (PI * alpha);
    Ok(f.clamp(0.0, 1.0))
}

struct Phase {
    tau: f64,
    x: f64,
    p: f64,
}

impl Phase {
    fn value(&self, v: f64) -> f64 {
        self.tau * v - self.x * v.powf(self.p)
    }

    fn slope(&self, v: f64) -> f64 {
        self.tau - self.p * self.x * v.powf(self.p - 1.0)
    }

    /// Root of value(v) = target in [lo, hi], where value is monotone there.
    fn solve(&self, target: f64, mut lo: f64, mut hi: f64) -> f64 {
        let increasing = self.value(hi) > self.value(lo);
        let mut v = 0.5 * (lo + hi);
        for _ in 0..200 {
            let g = self.value(v) - target;
            if (g > 0.0) == increasing {
                hi = v;
            } else {
                lo = v;
            }
            let d = self.slope(v);
            let newton = v - g / d;
            v = if d != 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if (hi - lo) <= 4.0 * f64::EPSILON * hi || g == 0.0 {
                break;
            }
        }
        v
    }
}

fn gil_pelaez_integral(x: f64, alpha: f64) -> Result<f64> {
    let tau = (FRAC_PI_2 * alpha).tan();
    let phase = Phase { tau, x, p: 1.0 / alpha };
    let mut integrand = |v: f64| {
        if v == 0.0 {
            tau
        } else {
            (-v).exp() * phase.value(v).sin() / v
        }
    };
    let cfg = QuadConfig { abs_tol: 1e-15, rel_tol: 1e-13, max_intervals: 20_000 };

    let v_star = (alpha * tau / x).powf(alpha / (1.0 - alpha));
    let peak = phase.value(v_star.min(TRUNCATION));
    let end_value = phase.value(TRUNCATION);

    // zeros of sin(ψ) on the increasing branch [0, min(v*, end)]
    let rising_end = v_star.min(TRUNCATION);
    let mut breaks = vec![0.0];
    let n_up = (peak / PI).floor() as i64;
    for k in 1..=n_up {
        breaks.push(phase.solve(k as f64 * PI, 0.0, rising_end));
    }
    if v_star >= TRUNCATION {
        breaks.push(TRUNCATION);
        return Ok(integrate_with_breaks(&mut integrand, &breaks, cfg)?.value);
    }
    breaks.push(v_star);

    let half_periods = (peak - end_value) / PI;
    let first_down = (peak / PI).floor(); // ψ level of the first zero after v*
    if half_periods <= DIRECT_HALF_PERIODS {
        let mut prev = v_star;
        let mut level = first_down;
        while level * PI > end_value {
            let v = phase.solve(level * PI, prev, TRUNCATION);
            if v > prev {
                breaks.push(v);
                prev = v;
            }
            level -= 1.0;
        }
        breaks.push(TRUNCATION);
        return Ok(integrate_with_breaks(&mut integrand, &breaks, cfg)?.value);
    }

    // head: up to the first zero past the peak
    let find_down = |target: f64, from: f64| -> f64 {
        let mut hi = from.max(1e-300) * 2.0;
        while phase.value(hi) > target && hi < TRUNCATION {
            hi *= 2.0;
        }
        phase.solve(target, from, hi.min(TRUNCATION))
    };
    let mut prev = find_down(first_down * PI, v_star);
    breaks.push(prev);
    let head = integrate_with_breaks(&mut integrand, &breaks, cfg)?.value;

    let mut wynn = WynnEpsilon::new();
    let mut partial = head;
    let mut last_estimate = wynn.push(partial);
    let mut stable_steps = 0;
    let mut level = first_down - 1.0;
    for term in 0..10_000 {
        let target = level * PI;
        let next = if phase.value(TRUNCATION) >= target { TRUNCATION } else { find_down(target, prev) };
        partial += integrate_with_breaks(&mut integrand, &[prev, next], cfg)?.value;
        if next >= TRUNCATION {
            return Ok(partial);
        }
        let estimate = wynn.push(partial);
        if term >= 8 && (estimate - last_estimate).abs() <= 1e-15 * estimate.abs().max(1.0) {
            stable_steps += 1;
            if stable_steps >= 3 {
                return Ok(estimate);
            }
        } else {
            stable_steps = 0;
        }
        last_estimate = estimate;
        prev = next;
        level -= 1.0;
    }
    Err(Error::Numeric(format!("stable CDF inversion did not converge at x = {x}, α = {alpha}")))
}

/// CDF of S(α, 1, γ).
pub fn cdf(x: f64, p: &StableParams) -> Result<f64> {
    p.require_one_sided()?;
    if p.gamma == 0.0 {
        return Ok(if x >= 0.0 { 1.0 } else { 0.0 });
    }
    cdf_normalized(x / p.gamma.powf(1.0 / p.alpha), p.alpha)
}

/// Chambers–Mallows–Stuck sampler for S(α, 1, γ), 0 < α < 1.
#[derive(Debug, Clone, Copy)]
pub struct StableSampler {
    alpha: f64,
    scale: f64,
}

impl StableSampler {
    pub fn new(p: &StableParams) -> Result<Self> {
        p.require_one_sided()?;
        let alpha = p.alpha;
        // cos(πα/2)^{−1/α} maps the CMS standard form to unit dispersion
        let scale = p.gamma.powf(1.0 / alpha) * (FRAC_PI_2 * alpha).cos().powf(-1.0 / alpha);
        Ok(Self { alpha, scale })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let a = self.alpha;
        let u: f64 = Open01.sample(rng);
        let v = PI * (u - 0.5);
        let w: f64 = Exp1.sample(rng);
        let shifted = a * (v + FRAC_PI_2);
        let x = shifted.sin() / v.cos().powf(1.0 / a) * ((v - shifted).cos() / w).powf((1.0 - a) / a);
        self.scale * x
    }
}

/// One draw from S(α, 1, γ).
pub fn sample<R: Rng + ?Sized>(p: &StableParams, rng: &mut R) -> Result<f64> {
    Ok(StableSampler::new(p)?.sample(rng))
}

/// E{X^{−α}} for X ~ S(α, 1, 1): cos(πα/2) / Γ(1+α).
pub fn mellin_neg_moment(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok((FRAC_PI_2 * alpha).cos() / gamma(1.0 + alpha))
}

/// Monotone cubic (PCHIP) interpolant of the normalized CDF in ln x, for
/// bulk evaluation. Queries outside the tabulated range fall back to
/// [`cdf_normalized`].
#[derive(Debug, Clone)]
pub struct StableCdfTable {
    alpha: f64,
    ln_x: Vec<f64>,
    f: Vec<f64>,
    slope: Vec<f64>,
}

impl StableCdfTable {
    /// Tabulates F on [x_lo, x_hi] with `per_decade` log-spaced nodes.
    pub fn new(alpha: f64, x_lo: f64, x_hi: f64, per_decade: usize) -> Result<Self> {
        check_alpha(alpha)?;
        ensure(x_lo > 0.0 && x_hi > x_lo, || format!("invalid table range [{x_lo}, {x_hi}]"))?;
        let (a, b) = (x_lo.ln(), x_hi.ln());
        let n = (((b - a) / std::f64::consts::LN_10) * per_decade as f64).ceil().max(4.0) as usize + 1;
        let ln_x: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
        let f = ln_x.iter().map(|&t| cdf_normalized(t.exp(), alpha)).collect::<Result<Vec<_>>>()?;
        let slope = pchip_slopes(&ln_x, &f);
        Ok(Self { alpha, ln_x, f, slope })
    }

    /// Table covering the region where 1e-12 < F and 1 − F > ~1e-7.
    pub fn covering(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let mut lo = 1.0;
        while left_tail_bound(lo, alpha) > 1e-12 {
            lo *= 0.5;
        }
        // right tail: 1 − F(x) ~ C_α x^{−α}
        let c = (1.0 - alpha) / (gamma(2.0 - alpha) * (FRAC_PI_2 * alpha).cos());
        let hi = (1e-7 / c).powf(-1.0 / alpha).clamp(10.0, 1e30);
        Self::new(alpha, lo, hi, 32)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        let t = x.ln();
        let n = self.ln_x.len();
        if !(t >= self.ln_x[0] && t <= self.ln_x[n - 1]) {
            return cdf_normalized(x, self.alpha);
        }
        let i = match self.ln_x.binary_search_by(|v| v.total_cmp(&t)) {
            Ok(i) => return Ok(self.f[i]),
            Err(i) => i - 1,
        };
        let h = self.ln_x[i + 1] - self.ln_x[i];
        let s = (t - self.ln_x[i]) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let v = h00 * self.f[i] + h10 * h * self.slope[i] + h01 * self.f[i + 1] + h11 * h * self.slope[i + 1];
        Ok(v.clamp(0.0, 1.0))
    }
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i])).collect();
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] > 0.0 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            let w1 = 2.0 * h1 + h0;
            let w2 = h1 + 2.0 * h0;
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    d[0] = delta[0];
    d[n - 1] = delta[n - 2];
    d
}
