//! Adaptive Gauss–Kronrod quadrature with endpoint substitutions.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Sub};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Value types the integrator can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn is_finite_value(&self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Fixed-size vector of reals, for integrating several integrands over shared nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vals<const N: usize>(pub [f64; N]);

impl<const N: usize> Add for Vals<N> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(o.0) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Sub for Vals<N> {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(o.0) {
            *a -= b;
        }
        self
    }
}

impl<const N: usize> Mul<f64> for Vals<N> {
    type Output = Self;
    fn mul(mut self, s: f64) -> Self {
        for a in self.0.iter_mut() {
            *a *= s;
        }
        self
    }
}

impl<const N: usize> QuadValue for Vals<N> {
    fn zero() -> Self {
        Vals([0.0; N])
    }
    fn magnitude(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
    fn is_finite_value(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// One 21-point Kronrod panel; returns (kronrod, |kronrod − gauss|).
pub fn gk21<V: QuadValue, F: FnMut(f64) -> V>(f: &mut F, a: f64, b: f64) -> (V, f64) {
    let (v, e, _) = gk21_abs(f, a, b);
    (v, e)
}

/// As [`gk21`], also returning the Kronrod estimate of ∫|f|.
fn gk21_abs<V: QuadValue, F: FnMut(f64) -> V>(f: &mut F, a: f64, b: f64) -> (V, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[10];
    let mut abs = fc.magnitude() * WGK[10];
    let mut rg = V::zero();
    for j in 0..10 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        abs += (f1.magnitude() + f2.magnitude()) * WGK[j];
        let s = f1 + f2;
        rk = rk + s * WGK[j];
        if j % 2 == 1 {
            rg = rg + s * WG[j / 2];
        }
    }
    let rk = rk * h;
    let rg = rg * h;
    (rk, (rk - rg).magnitude(), abs * h.abs())
}

/// Relative accuracy, measured against ∫|f|, below which cancellation makes refinement pointless.
const ROUNDOFF: f64 = 1e3 * f64::EPSILON;

/// Integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<V> {
    pub value: V,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadError {
    /// Subdivision budget exhausted before the tolerance was met.
    NotConverged { magnitude: f64, error: f64 },
    /// The integrand returned a non-finite value.
    NonFinite { at: f64 },
    /// Interval endpoints are not finite or reversed.
    BadInterval,
}

impl fmt::Display for QuadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadError::NotConverged { magnitude, error } => {
                write!(f, "quadrature did not converge (|value| {magnitude:e}, error estimate {error:e})")
            }
            QuadError::NonFinite { at } => write!(f, "integrand not finite at {at:e}"),
            QuadError::BadInterval => write!(f, "invalid integration interval"),
        }
    }
}

impl core::error::Error for QuadError {}

struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
    abs: f64,
}

impl<V> PartialEq for Panel<V> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<V> Eq for Panel<V> {}
impl<V> PartialOrd for Panel<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Panel<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive bisection driver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub epsabs: f64,
    pub epsrel: f64,
    pub max_intervals: usize,
}

impl Default for Quad {
    fn default() -> Self {
        Quad { epsabs: 0.0, epsrel: 1e-12, max_intervals: 4000 }
    }
}

impl Quad {
    pub fn new(epsabs: f64, epsrel: f64) -> Self {
        Quad { epsabs, epsrel, ..Quad::default() }
    }

    pub fn with_limit(mut self, max_intervals: usize) -> Self {
        self.max_intervals = max_intervals;
        self
    }

    /// Adaptive integration over the finite interval [a, b].
    pub fn integrate<V: QuadValue, F: FnMut(f64) -> V>(&self, mut f: F, a: f64, b: f64) -> Result<Estimate<V>, QuadError> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(QuadError::BadInterval);
        }
        if a == b {
            return Ok(Estimate { value: V::zero(), error: 0.0, intervals: 0 });
        }
        let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
        let mut heap = BinaryHeap::new();
        let (v, e, mut abs_total) = gk21_abs(&mut f, lo, hi);
        if !v.is_finite_value() {
            return Err(QuadError::NonFinite { at: 0.5 * (lo + hi) });
        }
        let mut total = v;
        let mut err = e;
        heap.push(Panel { a: lo, b: hi, value: v, error: e, abs: abs_total });
        let mut count = 1;
        loop {
            let target = self.epsabs.max(self.epsrel * total.magnitude()).max(ROUNDOFF * abs_total);
            if err <= target {
                break;
            }
            if count >= self.max_intervals {
                return Err(QuadError::NotConverged { magnitude: total.magnitude(), error: err });
            }
            let worst = match heap.pop() {
                Some(p) => p,
                None => break,
            };
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // Panel at machine resolution: keep its contribution and stop refining it.
                heap.push(Panel { error: 0.0, ..worst });
                err = heap.iter().map(|p| p.error).sum();
                if err <= target || heap.iter().all(|p| p.error == 0.0) {
                    break;
                }
                continue;
            }
            let (v1, e1, a1) = gk21_abs(&mut f, worst.a, mid);
            let (v2, e2, a2) = gk21_abs(&mut f, mid, worst.b);
            if !(v1.is_finite_value() && v2.is_finite_value()) {
                return Err(QuadError::NonFinite { at: mid });
            }
            total = total - worst.value + v1 + v2;
            err = err - worst.error + e1 + e2;
            abs_total += a1 + a2 - worst.abs;
            heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1, abs: a1 });
            heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2, abs: a2 });
            count += 1;
            if count % 64 == 0 {
                // Resum to stop drift from repeated subtraction.
                total = heap.iter().fold(V::zero(), |acc, p| acc + p.value);
                err = heap.iter().map(|p| p.error).sum();
            }
        }
        let value = heap.iter().fold(V::zero(), |acc, p| acc + p.value);
        let error = heap.iter().map(|p| p.error).sum();
        Ok(Estimate { value: value * sign, error, intervals: count })
    }

    /// Integrates over consecutive breakpoints, summing values and errors.
    pub fn integrate_pieces<V: QuadValue, F: FnMut(f64) -> V>(&self, mut f: F, points: &[f64]) -> Result<Estimate<V>, QuadError> {
        let mut value = V::zero();
        let mut error = 0.0;
        let mut intervals = 0;
        for w in points.windows(2) {
            let e = self.integrate(&mut f, w[0], w[1])?;
            value = value + e.value;
            error += e.error;
            intervals += e.intervals;
        }
        Ok(Estimate { value, error, intervals })
    }

    /// ∫_a^b f with f ~ (x−a)^beta at the left end (beta > −1).
    ///
    /// Uses x = a + (b−a)·u^{1/(1+beta)}, which makes the leading behaviour constant in u.
    pub fn integrate_left_power<V: QuadValue, F: FnMut(f64) -> V>(&self, mut f: F, a: f64, b: f64, beta: f64) -> Result<Estimate<V>, QuadError> {
        let p = 1.0 / (1.0 + beta);
        let w = b - a;
        self.integrate(
            |u: f64| {
                if u <= 0.0 {
                    return V::zero();
                }
                let x = a + w * u.powf(p);
                f(x) * (w * p * u.powf(p - 1.0))
            },
            0.0,
            1.0,
        )
    }

    /// ∫_a^b f with f ~ (b−x)^beta at the right end (beta > −1).
    pub fn integrate_right_power<V: QuadValue, F: FnMut(f64) -> V>(&self, mut f: F, a: f64, b: f64, beta: f64) -> Result<Estimate<V>, QuadError> {
        let p = 1.0 / (1.0 + beta);
        let w = b - a;
        self.integrate(
            |u: f64| {
                if u <= 0.0 {
                    return V::zero();
                }
                let x = b - w * u.powf(p);
                f(x) * (w * p * u.powf(p - 1.0))
            },
            0.0,
            1.0,
        )
    }

    /// ∫_a^∞ f for f decaying like x^{−1−alpha} (alpha > 0).
    ///
    /// Substitutes x = a + scale·(w^{−1/alpha} − 1) on w ∈ (0, 1].
    pub fn integrate_tail<V: QuadValue, F: FnMut(f64) -> V>(&self, mut f: F, a: f64, alpha: f64, scale: f64) -> Result<Estimate<V>, QuadError> {
        let inv = 1.0 / alpha;
        self.integrate(
            |w: f64| {
                if w <= 0.0 {
                    return V::zero();
                }
                let x = a + scale * (w.powf(-inv) - 1.0);
                if !x.is_finite() {
                    return V::zero();
                }
                f(x) * (scale * inv * w.powf(-inv - 1.0))
            },
            0.0,
            1.0,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_weights_sum_to_two() {
        let s: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        assert!((s - 2.0).abs() < 1e-14);
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((g - 2.0).abs() < 1e-14);
    }

    #[test]
    fn single_panel_is_exact_for_degree_29() {
        let mut f = |x: f64| x.powi(28) + x.powi(29);
        let (v, _) = gk21(&mut f, -1.0, 1.0);
        assert!((v - 2.0 / 29.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_smooth_and_oscillatory() {
        let q = Quad::new(0.0, 1e-13);
        let e = q.integrate(|x: f64| x.sin(), 0.0, core::f64::consts::PI).unwrap();
        assert!((e.value - 2.0).abs() < 1e-13);
        let e = q.integrate(|x: f64| (40.0 * x).cos(), 0.0, 1.0).unwrap();
        assert!((e.value - (40.0f64).sin() / 40.0).abs() < 1e-13);
    }

    #[test]
    fn endpoint_power_substitution() {
        let q = Quad::new(0.0, 1e-13);
        // ∫_0^1 x^{-0.7} dx = 1/0.3
        let e = q.integrate_left_power(|x: f64| x.powf(-0.7), 0.0, 1.0, -0.7).unwrap();
        assert!((e.value - 1.0 / 0.3).abs() < 1e-11);
        let e = q.integrate_right_power(|x: f64| (1.0 - x).powf(-0.5), 0.0, 1.0, -0.5).unwrap();
        assert!((e.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn algebraic_tail() {
        let q = Quad::new(0.0, 1e-12);
        // ∫_1^∞ x^{-4/3} dx = 3
        let e = q.integrate_tail(|x: f64| x.powf(-4.0 / 3.0), 1.0, 1.0 / 3.0, 1.0).unwrap();
        assert!((e.value - 3.0).abs() < 1e-10);
        let e = q.integrate_tail(|x: f64| (-x).exp(), 0.0, 1.0, 1.0).unwrap();
        assert!((e.value - 1.0).abs() < 1e-11);
    }

    #[test]
    fn complex_values_and_reversed_limits() {
        let q = Quad::new(0.0, 1e-13);
        let e = q.integrate(|x: f64| Complex64::new(x.cos(), x.sin()), 0.0, 1.0).unwrap();
        assert!((e.value.re - 1f64.sin()).abs() < 1e-13);
        assert!((e.value.im - (1.0 - 1f64.cos())).abs() < 1e-13);
        let r = q.integrate(|x: f64| x, 1.0, 0.0).unwrap();
        assert!((r.value + 0.5).abs() < 1e-15);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let q = Quad::new(0.0, 1e-15).with_limit(3);
        let r = q.integrate(|x: f64| (1.0 / (x + 1e-9)).sin(), 0.0, 1.0);
        assert!(matches!(r, Err(QuadError::NotConverged { .. })));
    }
}
