//! Truncated univariate Taylor series (normalized coefficients f⁽ⁱ⁾/i!).

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::special::factorial;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub c: Vec<f64>,
}

impl Jet {
    /// Constant series of the given truncation order.
    pub fn constant(v: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = v;
        Jet { c }
    }

    /// The independent variable expanded at x0.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut j = Jet::constant(x0, order);
        if order > 0 {
            j.c[1] = 1.0;
        }
        j
    }

    pub fn from_coeffs(mut c: Vec<f64>, order: usize) -> Self {
        c.resize(order + 1, 0.0);
        Jet { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// i-th derivative at the expansion point.
    pub fn derivative(&self, i: usize) -> f64 {
        self.c.get(i).copied().unwrap_or(0.0) * factorial(i as u32)
    }

    pub fn add(&self, o: &Jet) -> Jet {
        Jet { c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        Jet { c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet { c: self.c.iter().map(|a| a * s).collect() }
    }

    pub fn add_const(&self, s: f64) -> Jet {
        let mut r = self.clone();
        r.c[0] += s;
        r
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let n = self.c.len();
        let mut c = vec![0.0; n];
        for i in 0..n {
            if self.c[i] == 0.0 {
                continue;
            }
            for j in 0..n - i {
                c[i + j] += self.c[i] * o.c[j];
            }
        }
        Jet { c }
    }

    pub fn recip(&self) -> Jet {
        let n = self.c.len();
        let mut r = vec![0.0; n];
        r[0] = 1.0 / self.c[0];
        for k in 1..n {
            let mut s = 0.0;
            for j in 1..=k {
                s += self.c[j] * r[k - j];
            }
            r[k] = -s * r[0];
        }
        Jet { c: r }
    }

    pub fn div(&self, o: &Jet) -> Jet {
        self.mul(&o.recip())
    }

    pub fn exp(&self) -> Jet {
        let n = self.c.len();
        let mut r = vec![0.0; n];
        r[0] = self.c[0].exp();
        for k in 1..n {
            let mut s = 0.0;
            for j in 1..=k {
                s += j as f64 * self.c[j] * r[k - j];
            }
            r[k] = s / k as f64;
        }
        Jet { c: r }
    }

    pub fn ln(&self) -> Jet {
        let n = self.c.len();
        let mut r = vec![0.0; n];
        r[0] = self.c[0].ln();
        for k in 1..n {
            let mut s = k as f64 * self.c[k];
            for j in 1..k {
                s -= j as f64 * r[j] * self.c[k - j];
            }
            r[k] = s / (k as f64 * self.c[0]);
        }
        Jet { c: r }
    }

    /// self^p for a series with positive constant term.
    pub fn powf(&self, p: f64) -> Jet {
        let n = self.c.len();
        let a0 = self.c[0];
        let mut r = vec![0.0; n];
        r[0] = a0.powf(p);
        for k in 1..n {
            let mut s = 0.0;
            for j in 1..=k {
                s += (p * j as f64 - (k - j) as f64) * self.c[j] * r[k - j];
            }
            r[k] = s / (k as f64 * a0);
        }
        Jet { c: r }
    }

    pub fn powi(&self, e: u32) -> Jet {
        let mut r = Jet::constant(1.0, self.order());
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// outer ∘ self where `outer` holds normalized Taylor coefficients of the outer
    /// function at self.value().
    pub fn compose(&self, outer: &[f64]) -> Jet {
        let mut d = self.clone();
        d.c[0] = 0.0;
        let n = self.order();
        let mut acc = Jet::constant(0.0, n);
        for &a in outer.iter().take(n + 1).rev() {
            acc = acc.mul(&d).add_const(a);
        }
        acc
    }

    /// Evaluates the truncated series at displacement h.
    pub fn eval(&self, h: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, &a| acc * h + a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn exp_ln_roundtrip() {
        let x = Jet::variable(0.7, 8);
        let y = x.exp().ln();
        for i in 0..=8 {
            assert!(close(y.c[i], x.c[i], 1e-13));
        }
    }

    #[test]
    fn powf_matches_binomial_series() {
        let x = Jet::variable(2.0, 6).powf(-0.75);
        for i in 0..=6u32 {
            let exact = crate::num::special::binomial(-0.75, i) * 2f64.powf(-0.75 - i as f64);
            assert!(close(x.c[i as usize], exact, 1e-13));
        }
    }

    #[test]
    fn recip_and_derivatives() {
        // 1/(1+x) at 0: coefficients (−1)^i
        let j = Jet::variable(0.0, 5).add_const(1.0).recip();
        for i in 0..=5 {
            assert!(close(j.c[i], if i % 2 == 0 { 1.0 } else { -1.0 }, 1e-15));
        }
        let s = Jet::variable(1.0, 4).powi(3);
        assert_eq!(s.derivative(3), 6.0);
        assert_eq!(s.derivative(4), 0.0);
    }

    #[test]
    fn composition_chain_rule() {
        // exp(sin-like polynomial) checked through compose with exp's coefficients
        let inner = Jet::from_coeffs(vec![0.3, 1.0, 0.5], 5);
        let e = 0.3f64.exp();
        let outer: Vec<f64> = (0..=5).map(|i| e / factorial(i)).collect();
        let a = inner.compose(&outer);
        let b = inner.exp();
        for i in 0..=5 {
            assert!(close(a.c[i], b.c[i], 1e-14));
        }
    }
}
