//! Dense univariate polynomials with exact rational coefficients.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Coefficients stored lowest degree first; trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct RPoly {
    c: Vec<Q>,
}

impl fmt::Debug for RPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("RPoly[")?;
        for (i, a) in self.c.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

impl RPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        RPoly { c }
    }

    pub fn constant(a: Q) -> Self {
        RPoly::new(vec![a])
    }

    pub fn one() -> Self {
        RPoly::constant(Q::one())
    }

    /// a + b·z
    pub fn linear(a: Q, b: Q) -> Self {
        RPoly::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn mul(&self, o: &RPoly) -> RPoly {
        if self.is_zero() || o.is_zero() {
            return RPoly::new(Vec::new());
        }
        let mut c = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RPoly::new(c)
    }

    pub fn add(&self, o: &RPoly) -> RPoly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.c.get(i).cloned().unwrap_or_else(Q::zero) + o.c.get(i).cloned().unwrap_or_else(Q::zero)).collect();
        RPoly::new(c)
    }

    pub fn eval(&self, z: &Q) -> Q {
        self.c.iter().rev().fold(Q::zero(), |acc, a| acc * z + a)
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, a| acc * z + to_f64(a))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + to_f64(a))
    }

    pub fn derivative(&self) -> RPoly {
        let c = self.c.iter().enumerate().skip(1).map(|(i, a)| a * qi(i as i64)).collect();
        RPoly::new(c)
    }

    /// Coefficients of ε ↦ p(z0 + ε), lowest first, exact.
    pub fn taylor_at(&self, z0: &Q) -> Vec<Q> {
        let mut work = self.c.clone();
        let n = work.len();
        let mut out = Vec::with_capacity(n);
        // Repeated synthetic division by (z − z0).
        for _ in 0..n {
            let m = work.len();
            for i in (0..m.saturating_sub(1)).rev() {
                let t = &work[i + 1] * z0;
                work[i] += t;
            }
            out.push(work.remove(0));
        }
        out
    }

    /// Multiplicity of z0 as a root (0 if p(z0) ≠ 0). Zero polynomial gives usize::MAX.
    pub fn root_multiplicity(&self, z0: &Q) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        self.taylor_at(z0).iter().take_while(|x| x.is_zero()).count()
    }

    /// Laurent coefficients of 1/p at z0: returns (pole order m, [d_{−m}, …, d_{−m+terms−1}]).
    pub fn reciprocal_laurent(&self, z0: &Q, terms: usize) -> (usize, Vec<Q>) {
        let t = self.taylor_at(z0);
        let m = t.iter().take_while(|x| x.is_zero()).count();
        let a: Vec<Q> = t[m..].to_vec();
        let mut r: Vec<Q> = Vec::with_capacity(terms);
        for k in 0..terms {
            if k == 0 {
                r.push(Q::one() / &a[0]);
                continue;
            }
            let mut s = Q::zero();
            for j in 1..=k {
                if let Some(aj) = a.get(j) {
                    s += aj * &r[k - j];
                }
            }
            r.push(-s / &a[0]);
        }
        (m, r)
    }

    /// Rational roots among the supplied candidates, with multiplicities, as a check helper.
    pub fn roots_among(&self, candidates: &[Q]) -> Vec<(Q, usize)> {
        candidates
            .iter()
            .filter_map(|z| {
                let m = self.root_multiplicity(z);
                (m > 0).then(|| (z.clone(), m))
            })
            .collect()
    }

    pub fn leading_sign(&self) -> i32 {
        match self.c.last() {
            None => 0,
            Some(x) if x.is_positive() => 1,
            Some(_) => -1,
        }
    }
}
