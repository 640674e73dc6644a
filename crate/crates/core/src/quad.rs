//! Numerical integration: adaptive Gauss–Kronrod, tanh–sinh, and Wynn
//! epsilon acceleration for oscillatory tails.

use std::collections::BinaryHeap;
use std::cmp::Ordering;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-9, rel_tol: 1e-7, max_intervals: 2000 }
    }
}

impl QuadConfig {
    pub fn tight() -> Self {
        Self { abs_tol: 1e-13, rel_tol: 1e-11, max_intervals: 4000 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

/// Single 15-point Kronrod panel with embedded 7-point Gauss error estimate.
pub fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (value, err)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive Gauss–Kronrod integration over `[a, b]`, bisecting the
/// panel with the largest error estimate until the tolerance is met.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, cfg: QuadConfig) -> Result<QuadResult> {
    integrate_with_breaks(&mut f, &[a, b], cfg)
}

/// Like [`integrate`] but seeded with caller-supplied breakpoints (sorted).
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(
    f: &mut F,
    breaks: &[f64],
    cfg: QuadConfig,
) -> Result<QuadResult> {
    if breaks.len() < 2 {
        return Ok(QuadResult { value: 0.0, abs_error: 0.0, evaluations: 0 });
    }
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut evals = 0;
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (value, err) = gk15(f, w[0], w[1]);
        evals += 15;
        total += value;
        total_err += err;
        heap.push(Panel { a: w[0], b: w[1], value, err });
    }
    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::Numeric("non-finite integrand".into()));
        }
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        if heap.len() >= cfg.max_intervals {
            return Err(Error::Numeric(format!(
                "quadrature did not converge: estimate {total:e} ± {total_err:e} after {} panels",
                heap.len()
            )));
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // panel cannot be split further in floating point
            heap.push(Panel { err: 0.0, ..worst });
            total_err = heap.iter().map(|p| p.err).sum();
            continue;
        }
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        evals += 30;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Panel { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, err: e2 });
    }
    // re-sum to shed accumulated cancellation from the running updates
    let value = heap.iter().map(|p| p.value).sum();
    let abs_error = heap.iter().map(|p| p.err).sum();
    Ok(QuadResult { value, abs_error, evaluations: evals })
}

/// Integral over `[lower, ∞)` through the map `x = lower + t/(1-t)`.
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    mut f: F,
    lower: f64,
    cfg: QuadConfig,
) -> Result<QuadResult> {
    let mut g = |t: f64| {
        let s = 1.0 - t;
        let x = lower + t / s;
        let v = f(x) / (s * s);
        if v.is_finite() { v } else { 0.0 }
    };
    integrate_with_breaks(&mut g, &[0.0, 0.5, 0.9, 0.99, 1.0], cfg)
}

/// Tanh–sinh (double exponential) quadrature over `(a, b)`. Endpoint
/// singularities are tolerated since nodes never touch the endpoints.
pub fn tanh_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    use std::f64::consts::FRAC_PI_2;
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let t_max = 4.0;
    let mut h = 0.5;
    let mut evals = 1usize;
    let f0 = f(centre);

    // node at t: x = tanh(π/2 sinh t); distance to the endpoint computed
    // directly to avoid cancellation near ±1.
    let mut term = |t: f64, evals: &mut usize| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let ch = u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (ch * ch);
        let comp = 1.0 / (u.exp() * ch); // 1 - tanh(u)
        if comp == 0.0 || w == 0.0 {
            return 0.0;
        }
        let xr = b - half * comp;
        let xl = a + half * comp;
        *evals += 2;
        let mut s = 0.0;
        if xr > a && xr < b {
            let v = f(xr);
            if v.is_finite() {
                s += v;
            }
        }
        if xl > a && xl < b {
            let v = f(xl);
            if v.is_finite() {
                s += v;
            }
        }
        s * w
    };

    let mut sum = f0 * FRAC_PI_2;
    let mut k = 1;
    while (k as f64) * h <= t_max {
        sum += term(k as f64 * h, &mut evals);
        k += 1;
    }
    let mut estimate = sum * h * half;
    for _level in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while (k as f64) * h <= t_max {
            sum += term(k as f64 * h, &mut evals);
            k += 2;
        }
        let next = sum * h * half;
        let diff = (next - estimate).abs();
        estimate = next;
        if diff <= tol.max(tol * next.abs()) && _level >= 2 {
            return Ok(QuadResult { value: next, abs_error: diff, evaluations: evals });
        }
    }
    Err(Error::Numeric(format!("tanh-sinh did not converge (estimate {estimate:e})")))
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums. Returns
/// the accelerated limit estimate for the sequence seen so far.
#[derive(Debug, Default, Clone)]
pub struct WynnEpsilon {
    // previous diagonal of the epsilon table
    table: Vec<f64>,
}

impl WynnEpsilon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Pushes the next partial sum and returns the current best estimate.
    pub fn push(&mut self, partial: f64) -> f64 {
        let mut prev_diag = std::mem::take(&mut self.table);
        let n = prev_diag.len();
        let mut next = Vec::with_capacity(n + 1);
        next.push(partial);
        // next[k+1] = prev[k-1] + 1/(next[k] - prev[k])
        let mut below = 0.0; // epsilon_{-1} column is zero
        for k in 0..n {
            let delta = next[k] - prev_diag[k];
            let val = if delta == 0.0 || !delta.is_finite() {
                f64::INFINITY
            } else {
                below + 1.0 / delta
            };
            below = prev_diag[k];
            if !val.is_finite() {
                break;
            }
            next.push(val);
        }
        prev_diag.clear();
        self.table = next;
        // even columns hold the estimates; take the deepest one
        let last_even = (self.table.len() - 1) & !1;
        self.table[last_even]
    }
}

/// Neumaier-compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk_polynomial_exact() {
        let r = integrate(|x| x.powi(5) - 3.0 * x * x, 0.0, 2.0, QuadConfig::default()).unwrap();
        assert!((r.value - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn semi_infinite_exponential() {
        let r = integrate_semi_infinite(|x| (-x).exp(), 0.0, QuadConfig::tight()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-11);
        let r = integrate_semi_infinite(|x| x * (-2.0 * x).exp(), 1.0, QuadConfig::tight()).unwrap();
        // ∫_1^∞ x e^{-2x} dx = 3 e^{-2} / 4
        assert!((r.value - 0.75 * (-2.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        let r = tanh_sinh(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9, "{}", r.value);
        let r = tanh_sinh(|x| x.ln(), 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value + 1.0).abs() < 1e-9);
    }

    #[test]
    fn wynn_accelerates_alternating_harmonic() {
        let mut w = WynnEpsilon::new();
        let mut partial = 0.0;
        let mut est = 0.0;
        for k in 1..=20 {
            partial += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            est = w.push(partial);
        }
        assert!((est - std::f64::consts::LN_2).abs() < 1e-10, "{est}");
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let s: CompensatedSum = [1e16, 1.0, -1e16, 1.0].into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn non_convergence_is_an_error() {
        let cfg = QuadConfig { abs_tol: 0.0, rel_tol: 0.0, max_intervals: 4 };
        assert!(integrate(|x| x.sin() / x, 1e-9, 1e3, cfg).is_err());
    }
}
