//! Cutoffs and the separable model amplitudes a(t)·b(r, q).
//!
//! Time profiles are described through â(v) = ∫ a(t) e^{itv} dt, which is what the
//! reduced integrals and the Mellin transforms consume.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::num::gauss::gauss_legendre;
use crate::num::jet::Jet;
use crate::num::quad::{Quad, QuadError};
use crate::num::special::{binomial, gamma, gamma_complex};

/// Half-line selector for Mellin transforms: M±(z) = ∫₀^∞ t^{z−1} â(±t) dt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

/// C^∞ step: 0 for t ≤ 0, 1 for t ≥ 1.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let (a, b) = ((-1.0 / t).exp(), (-1.0 / (1.0 - t)).exp());
    a / (a + b)
}

/// Radial cutoff: 1 on |x| ≤ inner, 0 on |x| ≥ outer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    pub inner: f64,
    pub outer: f64,
}

impl Cutoff {
    pub fn new(inner: f64, outer: f64) -> Self {
        assert!(0.0 < inner && inner < outer, "cutoff radii must satisfy 0 < inner < outer");
        Cutoff { inner, outer }
    }

    pub fn value(&self, x: f64) -> f64 {
        smooth_step((self.outer - x.abs()) / (self.outer - self.inner))
    }

    /// Normalized Taylor coefficients of the cutoff at x0 ≥ 0.
    pub fn taylor(&self, x0: f64, order: usize) -> Vec<f64> {
        let mut c = vec![0.0; order + 1];
        if x0 <= self.inner {
            c[0] = 1.0;
            return c;
        }
        if x0 >= self.outer {
            return c;
        }
        let w = self.outer - self.inner;
        let t0 = (self.outer - x0) / w;
        let t = Jet::from_coeffs(vec![t0, -1.0 / w], order);
        let s = t.scale(-1.0).add_const(1.0);
        // e^{−1/t} underflows long before its derivatives matter
        let f = |u: &Jet| {
            if u.value() < 1.0 / 700.0 {
                Jet::constant(0.0, order)
            } else {
                u.recip().scale(-1.0).exp()
            }
        };
        let (a, b) = (f(&t), f(&s));
        a.div(&a.add(&b)).c
    }

    /// The cutoff composed with a jet argument (x.value() ≥ 0).
    pub fn apply(&self, x: &Jet) -> Jet {
        x.compose(&self.taylor(x.value(), x.order()))
    }
}

/// b(r, q) = P(r, q)·χ(r)·χ(q) on r, q ≥ 0, with P a polynomial.
///
/// On the core r, q ≤ inner the amplitude is exactly the polynomial, which is what the
/// residue engine exploits for the finite parts at q = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialProfile {
    /// (power of r, power of q, coefficient)
    pub terms: Vec<(u32, u32, f64)>,
    pub cutoff: Cutoff,
}

impl SpatialProfile {
    pub fn new(terms: Vec<(u32, u32, f64)>, cutoff: Cutoff) -> Self {
        SpatialProfile { terms, cutoff }
    }

    /// Constant core b00.
    pub fn flat(b00: f64, cutoff: Cutoff) -> Self {
        SpatialProfile::new(vec![(0, 0, b00)], cutoff)
    }

    pub fn b00(&self) -> f64 {
        self.terms.iter().filter(|t| t.0 == 0 && t.1 == 0).map(|t| t.2).sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        SpatialProfile { terms: self.terms.iter().map(|&(a, b, v)| (a, b, v * c)).collect(), cutoff: self.cutoff }
    }

    pub fn polynomial(&self, r: f64, q: f64) -> f64 {
        self.terms.iter().map(|&(a, c, v)| v * r.powi(a as i32) * q.powi(c as i32)).sum()
    }

    pub fn value(&self, r: f64, q: f64) -> f64 {
        let (r, q) = (r.abs(), q.abs());
        if r >= self.cutoff.outer || q >= self.cutoff.outer {
            return 0.0;
        }
        self.polynomial(r, q) * self.cutoff.value(r) * self.cutoff.value(q)
    }

    /// b evaluated on jet arguments (both with nonnegative constant terms).
    pub fn eval_jet(&self, r: &Jet, q: &Jet) -> Jet {
        let order = r.order();
        let mut p = Jet::constant(0.0, order);
        for &(a, c, v) in &self.terms {
            p = p.add(&r.powi(a).mul(&q.powi(c)).scale(v));
        }
        p.mul(&self.cutoff.apply(r)).mul(&self.cutoff.apply(q))
    }

    /// Core polynomials in the blown-up variable: b(sq^k, q) = Σ_C q^C P_C(s) near q = 0.
    ///
    /// Entry C lists the (power of s, coefficient) pairs of P_C.
    pub fn blown_up_core(&self, k: u32) -> Vec<Vec<(u32, f64)>> {
        let top = self.terms.iter().map(|&(a, c, _)| k * a + c).max().unwrap_or(0) as usize;
        let mut out = vec![Vec::new(); top + 1];
        for &(a, c, v) in &self.terms {
            if v != 0.0 {
                out[(k * a + c) as usize].push((a, v));
            }
        }
        out
    }

    /// Coefficient of r^a q^c in the core polynomial.
    pub fn coeff(&self, a: u32, c: u32) -> f64 {
        self.terms.iter().filter(|t| t.0 == a && t.1 == c).map(|t| t.2).sum()
    }
}

/// Samples of a function on [0, v_max] stored as piecewise Chebyshev series.
#[derive(Debug, Clone, PartialEq)]
struct ChebCache {
    width: f64,
    v_max: f64,
    deg: usize,
    coeffs: Vec<f64>,
}

impl ChebCache {
    fn build<F: FnMut(f64) -> f64>(mut f: F, v_max: f64, width: f64, deg: usize) -> Self {
        let pieces = (v_max / width).ceil() as usize;
        let mut coeffs = Vec::with_capacity(pieces * deg);
        let nodes: Vec<f64> = (0..deg).map(|i| (PI * (i as f64 + 0.5) / deg as f64).cos()).collect();
        let mut vals = vec![0.0; deg];
        for p in 0..pieces {
            let a = p as f64 * width;
            for (v, x) in vals.iter_mut().zip(&nodes) {
                *v = f(a + 0.5 * width * (x + 1.0));
            }
            for kk in 0..deg {
                let mut s = 0.0;
                for (i, v) in vals.iter().enumerate() {
                    s += v * (PI * kk as f64 * (i as f64 + 0.5) / deg as f64).cos();
                }
                let s = 2.0 * s / deg as f64;
                coeffs.push(if kk == 0 { 0.5 * s } else { s });
            }
        }
        ChebCache { width, v_max: pieces as f64 * width, deg, coeffs }
    }

    fn eval(&self, v: f64) -> f64 {
        if !(0.0..self.v_max).contains(&v) {
            return 0.0;
        }
        let p = ((v / self.width) as usize).min(self.coeffs.len() / self.deg - 1);
        let x = 2.0 * (v - p as f64 * self.width) / self.width - 1.0;
        let c = &self.coeffs[p * self.deg..(p + 1) * self.deg];
        let (mut b1, mut b2) = (0.0, 0.0);
        for &a in c.iter().rev() {
            let b0 = a + 2.0 * x * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        b1 - x * b2
    }
}

/// Compactly supported bump a(t) = exp(−1/(1−(t/T)²)) on (−T, T), optionally modulated by e^{itc}.
///
/// The modulation shifts the transform: â(v) = â₀(v + c).
#[derive(Debug, Clone, PartialEq)]
pub struct BumpProfile {
    pub t_max: f64,
    pub shift: f64,
    taylor: Vec<f64>,
    cache: ChebCache,
}

const BUMP_TAYLOR_ORDER: usize = 60;

impl BumpProfile {
    pub fn new(t_max: f64) -> Self {
        assert!(t_max > 0.0);
        let u = Jet::variable(0.0, BUMP_TAYLOR_ORDER).scale(1.0 / t_max);
        let u = u.mul(&u);
        let taylor = u.scale(-1.0).add_const(1.0).recip().scale(-1.0).exp().c;

        // composite Gauss–Legendre for 2∫₀ᵀ a(t) cos(tv) dt, at most ~2 radians per panel at v_max
        let v_max = 800.0 / t_max;
        let panels = (v_max * t_max / 2.0).ceil() as usize;
        let (gx, gw) = gauss_legendre(16);
        let h = t_max / panels as f64;
        let mut nodes = Vec::with_capacity(panels * 16);
        for p in 0..panels {
            for (x, w) in gx.iter().zip(&gw) {
                let t = h * (p as f64 + 0.5 * (x + 1.0));
                nodes.push((t, 2.0 * 0.5 * h * w * bump(t, t_max)));
            }
        }
        let cache = ChebCache::build(|v| nodes.iter().map(|(t, w)| w * (t * v).cos()).sum(), v_max, 3.0 / t_max, 24);
        BumpProfile { t_max, shift: 0.0, taylor, cache }
    }

    /// The same bump with transform v ↦ â(v + c); shifts compose additively.
    pub fn shifted(&self, c: f64) -> Self {
        BumpProfile { shift: self.shift + c, ..self.clone() }
    }

    /// a(t) without the modulation.
    pub fn envelope(&self, t: f64) -> f64 {
        bump(t, self.t_max)
    }

    pub fn a(&self, t: f64) -> Complex64 {
        Complex64::from_polar(self.envelope(t), t * self.shift)
    }

    pub fn ahat(&self, v: f64) -> f64 {
        self.cache.eval((v + self.shift).abs())
    }

    /// â by direct quadrature, independent of the cache.
    pub fn ahat_direct(&self, v: f64) -> Result<f64, QuadError> {
        let w = v + self.shift;
        let t = self.t_max;
        Ok(2.0 * Quad::new(1e-16, 1e-13).with_limit(20000).integrate(|s| bump(s, t) * (s * w).cos(), 0.0, t)?.value)
    }

    /// Largest |v| at which the cached transform is nonzero, and a bound on |â| beyond it.
    pub fn decay_cutoff(&self) -> (f64, f64) {
        let v = self.cache.v_max;
        (v + self.shift.abs(), 4.0 * self.t_max * (-(2.0 * self.t_max * v).sqrt()).exp())
    }

    /// ∫ v^j â(v) dv = 2π i^j a^{(j)}(0).
    pub fn moment(&self, j: u32) -> f64 {
        // ∫ v^j â₀(v + c) dv = Σ_i C(j,i) (−c)^{j−i} μ_i
        (0..=j)
            .map(|i| {
                let mu = if i % 2 == 1 {
                    0.0
                } else {
                    let sign = if (i / 2) % 2 == 0 { 1.0 } else { -1.0 };
                    2.0 * PI * sign * crate::num::special::factorial(i) * self.taylor.get(i as usize).copied().unwrap_or(0.0)
                };
                binomial(j as f64, i) * (-self.shift).powi((j - i) as i32) * mu
            })
            .sum()
    }

    /// Real-z Mellin transform M±(z), analytic for z > 0.
    ///
    /// Uses M(z) = 2Γ(z) Re[e^{iπz/2} fp∫₀ᵀ a(t) e^{±itc} t^{−z} dt], with the finite part
    /// taken from the Taylor series of the integrand on [0, T/4].
    pub fn mellin(&self, side: Side, z: f64) -> Result<f64, QuadError> {
        assert!(z > 0.0);
        let c = side.sign() * self.shift;
        let ts = 0.25 * self.t_max;
        // Taylor coefficients γ_j = i^j g_j of a(t) e^{itc}, with g_j real
        let n = self.taylor.len();
        let mut sum = 0.0;
        let mut fact = vec![1.0; n];
        for i in 1..n {
            fact[i] = fact[i - 1] * i as f64;
        }
        for j in 0..n {
            let mut g = 0.0;
            for i in (j % 2..=j).step_by(2) {
                g += self.taylor[j - i] * c.powi(i as i32) / fact[i] * if ((j - i) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            }
            // γ_j = i^j g, so i^{j+1} γ_j = i^{2j+1} g = (−1)^j i g (purely imaginary)
            let w_im = if j % 2 == 0 { g } else { -g };
            let d = (j + 1) as f64 - z;
            let sinc = if d == 0.0 { 0.5 * PI } else { (0.5 * PI * d).sin() / d };
            sum += w_im * sinc * ts.powf(d);
        }
        let t = self.t_max;
        let tail = Quad::new(0.0, 1e-14).with_limit(20000).integrate(|s| Complex64::from_polar(bump(s, t) * s.powf(-z), s * c), ts, t)?.value;
        let tail = (Complex64::from_polar(1.0, 0.5 * PI * z) * tail).re;
        Ok(2.0 * gamma(z) * (sum + tail))
    }
}

fn bump(t: f64, t_max: f64) -> f64 {
    let u = t / t_max;
    if u.abs() >= 1.0 {
        return 0.0;
    }
    (-1.0 / (1.0 - u * u)).exp()
}

/// â(v) = Σ_p c_p v^p e^{−v²/2}.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussProfile {
    pub coeffs: Vec<f64>,
}

impl GaussProfile {
    /// Probabilists' Hermite polynomial He_m times the Gaussian; moments 0..m−1 vanish.
    pub fn hermite(m: usize) -> Self {
        let mut prev = vec![1.0];
        let mut cur = vec![0.0, 1.0];
        if m == 0 {
            return GaussProfile { coeffs: prev };
        }
        for j in 1..m {
            let mut next = vec![0.0; j + 2];
            for (i, v) in cur.iter().enumerate() {
                next[i + 1] += v;
            }
            for (i, v) in prev.iter().enumerate() {
                next[i] -= j as f64 * v;
            }
            prev = cur;
            cur = next;
        }
        GaussProfile { coeffs: cur }
    }

    /// Σ w_m He_m e^{−v²/2}.
    pub fn combination(parts: &[(usize, f64)]) -> Self {
        let mut coeffs = Vec::new();
        for &(m, w) in parts {
            let h = GaussProfile::hermite(m).coeffs;
            if coeffs.len() < h.len() {
                coeffs.resize(h.len(), 0.0);
            }
            for (c, v) in coeffs.iter_mut().zip(h) {
                *c += w * v;
            }
        }
        GaussProfile { coeffs }
    }

    pub fn ahat(&self, v: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * v + c) * (-0.5 * v * v).exp()
    }

    pub fn moment(&self, j: u32) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(p, _)| (*p as u32 + j) % 2 == 0)
            .map(|(p, c)| {
                let e = p as u32 + j;
                // ∫ v^e e^{−v²/2} = √(2π)(e−1)!!
                let dfact = (1..e).rev().step_by(2).fold(1.0, |a, i| a * i as f64);
                c * (2.0 * PI).sqrt() * dfact
            })
            .sum()
    }

    pub fn mellin(&self, side: Side, z: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(p, c)| {
                let sign = if p % 2 == 1 && side == Side::Minus { -1.0 } else { 1.0 };
                let x = 0.5 * (z + p as f64);
                sign * c * 2f64.powf(x - 1.0) * gamma(x)
            })
            .sum()
    }

    pub fn mellin_complex(&self, side: Side, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(p, c)| {
                let sign = if p % 2 == 1 && side == Side::Minus { -1.0 } else { 1.0 };
                let x = (z + p as f64) * 0.5;
                Complex64::new(2.0, 0.0).powc(x - 1.0) * gamma_complex(x) * (sign * c)
            })
            .sum()
    }
}

/// Time profile of a model amplitude, seen through its Fourier transform.
#[derive(Debug, Clone, PartialEq)]
pub enum TimeProfile {
    Bump(BumpProfile),
    Gauss(GaussProfile),
}

/// M(z₀) with its z-derivative by central differences at two step sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinPoint {
    pub value: f64,
    pub derivative: f64,
    /// |derivative(h) − derivative(2h)|
    pub step_discrepancy: f64,
}

pub const MELLIN_DIFF_STEP: f64 = 1e-5;

impl TimeProfile {
    pub fn ahat(&self, v: f64) -> f64 {
        match self {
            TimeProfile::Bump(b) => b.ahat(v),
            TimeProfile::Gauss(g) => g.ahat(v),
        }
    }

    pub fn moment(&self, j: u32) -> f64 {
        match self {
            TimeProfile::Bump(b) => b.moment(j),
            TimeProfile::Gauss(g) => g.moment(j),
        }
    }

    pub fn mellin(&self, side: Side, z: f64) -> Result<f64, QuadError> {
        match self {
            TimeProfile::Bump(b) => b.mellin(side, z),
            TimeProfile::Gauss(g) => Ok(g.mellin(side, z)),
        }
    }

    pub fn mellin_point(&self, side: Side, z: f64) -> Result<MellinPoint, QuadError> {
        let h = MELLIN_DIFF_STEP;
        let d = |h: f64| -> Result<f64, QuadError> { Ok((self.mellin(side, z + h)? - self.mellin(side, z - h)?) / (2.0 * h)) };
        let (d1, d2) = (d(h)?, d(2.0 * h)?);
        Ok(MellinPoint { value: self.mellin(side, z)?, derivative: d1, step_discrepancy: (d1 - d2).abs() })
    }

    /// Where |â| drops below roughly 1e−16 of its scale.
    pub fn effective_support(&self) -> f64 {
        match self {
            TimeProfile::Bump(b) => b.decay_cutoff().0,
            TimeProfile::Gauss(g) => 9.0 + (g.coeffs.len() as f64).sqrt() * 2.0,
        }
    }
}
