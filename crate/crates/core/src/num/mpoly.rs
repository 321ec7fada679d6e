//! Sparse multivariate polynomials with real coefficients.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Monomial, f64>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate function x_i.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = MPoly::zero(nvars);
        p.add_term(e, 1.0);
        p
    }

    pub fn from_terms(nvars: usize, terms: &[(Monomial, f64)]) -> Self {
        let mut p = MPoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "monomial arity mismatch");
            p.add_term(e.clone(), *c);
        }
        p
    }

    pub fn add_term(&mut self, e: Monomial, c: f64) {
        if c == 0.0 {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    /// Lowest total degree among nonzero terms.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).min()
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), *c);
        }
        r
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), c * s);
        }
        r
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        self.mul_truncated(o, u32::MAX)
    }

    /// Product keeping only terms of total degree ≤ max_deg.
    pub fn mul_truncated(&self, o: &MPoly, max_deg: u32) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            let d1: u32 = e1.iter().sum();
            for (e2, c2) in &o.terms {
                let d2: u32 = e2.iter().sum();
                if d1.saturating_add(d2) > max_deg {
                    continue;
                }
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    pub fn truncate(&self, max_deg: u32) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() <= max_deg {
                r.add_term(e.clone(), *c);
            }
        }
        r
    }

    pub fn homogeneous_part(&self, d: u32) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() == d {
                r.add_term(e.clone(), *c);
            }
        }
        r
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(e, c)| c * e.iter().zip(x).map(|(&k, &xi)| xi.powi(k as i32)).product::<f64>()).sum()
    }

    pub fn partial(&self, i: usize) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                r.add_term(e2, c * e[i] as f64);
            }
        }
        r
    }

    pub fn gradient(&self) -> Vec<MPoly> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    /// p(x0 + y) as a polynomial in y.
    pub fn shift(&self, x0: &[f64]) -> MPoly {
        let subs: Vec<MPoly> = (0..self.nvars).map(|i| MPoly::var(self.nvars, i).add(&MPoly::constant(self.nvars, x0[i]))).collect();
        self.compose(&subs, u32::MAX)
    }

    /// Substitutes polynomial `subs[i]` (in possibly different variables) for x_i,
    /// truncating the result at max_deg.
    pub fn compose(&self, subs: &[MPoly], max_deg: u32) -> MPoly {
        let m = subs.first().map(|p| p.nvars).unwrap_or(0);
        let mut result = MPoly::zero(m);
        // cache powers of each substitution
        let mut powers: Vec<Vec<MPoly>> = subs.iter().map(|s| vec![MPoly::constant(m, 1.0), s.truncate(max_deg)]).collect();
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(m, *c);
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul_truncated(&subs[i], max_deg);
                    powers[i].push(next);
                }
                term = term.mul_truncated(&powers[i][k as usize], max_deg);
                if term.is_zero() {
                    break;
                }
            }
            result = result.add(&term);
        }
        result
    }

    /// Every term has total degree exactly d.
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    pub fn coeff(&self, e: &[u32]) -> f64 {
        self.terms.get(e).copied().unwrap_or(0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_and_eval_agree() {
        // p = x^2 y − 3y + 2
        let p = MPoly::from_terms(2, &[(vec![2, 1], 1.0), (vec![0, 1], -3.0), (vec![0, 0], 2.0)]);
        let s = p.shift(&[0.5, -1.0]);
        for &(a, b) in &[(0.1, 0.2), (-0.7, 1.3)] {
            assert!((s.eval(&[a, b]) - p.eval(&[0.5 + a, -1.0 + b])).abs() < 1e-13);
        }
    }

    #[test]
    fn truncated_compose() {
        // (1 + t)^3 truncated at degree 2 = 1 + 3t + 3t²
        let cube = MPoly::from_terms(1, &[(vec![3], 1.0)]);
        let sub = MPoly::from_terms(1, &[(vec![0], 1.0), (vec![1], 1.0)]);
        let r = cube.compose(&[sub], 2);
        assert_eq!(r.coeff(&[0]), 1.0);
        assert_eq!(r.coeff(&[1]), 3.0);
        assert_eq!(r.coeff(&[2]), 3.0);
        assert_eq!(r.coeff(&[3]), 0.0);
    }

    #[test]
    fn gradient_of_quartic() {
        let p = MPoly::from_terms(2, &[(vec![4, 0], -1.0), (vec![2, 2], -2.0)]);
        let g = p.gradient();
        assert_eq!(g[0].eval(&[1.0, 1.0]), -8.0);
        assert_eq!(g[1].eval(&[1.0, 1.0]), -4.0);
        assert!(p.is_homogeneous(4));
    }
}
