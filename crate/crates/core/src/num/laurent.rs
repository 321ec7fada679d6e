//! Truncated Laurent expansions in δ = z − z₀ with exponents −2..=1.

use super::rpoly::{to_f64, RPoly, Q};

const LO: i32 = -2;
const HI: i32 = 1;

/// Coefficients of δ^e for e in `lead..=top`; everything above `top` is unknown.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Laurent {
    c: [f64; 4],
    top: i32,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { c: [0.0; 4], top: HI }
    }

    /// A function analytic at z₀, known to first order.
    pub fn analytic(value: f64, derivative: f64) -> Self {
        let mut l = Laurent::zero();
        l.c[2] = value;
        l.c[3] = derivative;
        l
    }

    /// An analytic function known only through its value.
    pub fn value_only(value: f64) -> Self {
        let mut l = Laurent::analytic(value, 0.0);
        l.top = 0;
        l
    }

    /// a/δ + b, with the δ¹ term unknown.
    pub fn simple(residue: f64, regular: f64) -> Self {
        let mut l = Laurent::zero();
        l.c[1] = residue;
        l.c[2] = regular;
        l.top = 0;
        l
    }

    /// Expansion of 1/p at z₀ from exact rational arithmetic.
    pub fn reciprocal(p: &RPoly, z0: &Q) -> Self {
        let (m, d) = p.reciprocal_laurent(z0, 4);
        let mut l = Laurent::zero();
        for (i, v) in d.iter().enumerate() {
            let e = i as i32 - m as i32;
            if (LO..=HI).contains(&e) {
                l.c[(e - LO) as usize] = to_f64(v);
            }
        }
        assert!(m <= 2, "pole order {m} exceeds the supported range");
        l
    }

    /// Expansion of the polynomial p at z₀.
    pub fn polynomial(p: &RPoly, z0: &Q) -> Self {
        let t = p.taylor_at(z0);
        let at = |i: usize| t.get(i).map(to_f64).unwrap_or(0.0);
        Laurent::analytic(at(0), at(1))
    }

    pub fn coeff(&self, e: i32) -> f64 {
        assert!(e <= self.top, "coefficient of δ^{e} is not known");
        if e < LO {
            return 0.0;
        }
        self.c[(e - LO) as usize]
    }

    pub fn top(&self) -> i32 {
        self.top
    }

    /// Lowest exponent with a nonzero coefficient (HI + 1 for the zero series).
    pub fn lead(&self) -> i32 {
        (LO..=self.top).find(|&e| self.c[(e - LO) as usize] != 0.0).unwrap_or(HI + 1)
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        let top = self.top.min(o.top);
        let mut c = [0.0; 4];
        for e in LO..=top {
            let i = (e - LO) as usize;
            c[i] = self.c[i] + o.c[i];
        }
        Laurent { c, top }
    }

    pub fn scale(&self, s: f64) -> Laurent {
        let mut r = *self;
        for v in r.c.iter_mut() {
            *v *= s;
        }
        r
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        let (la, lb) = (self.lead(), o.lead());
        if la > HI || lb > HI {
            // one factor vanishes to every known order
            let top = (self.top + lb.min(o.top)).min(o.top + la.min(self.top)).min(HI);
            return Laurent { c: [0.0; 4], top: top.max(LO) };
        }
        assert!(la + lb >= LO, "product has a pole of order above two");
        let top = (self.top + lb).min(o.top + la).min(HI);
        let mut c = [0.0; 4];
        for e in LO..=top {
            let mut s = 0.0;
            for ea in la..=self.top {
                let eb = e - ea;
                if eb >= lb && eb <= o.top {
                    s += self.c[(ea - LO) as usize] * o.c[(eb - LO) as usize];
                }
            }
            c[(e - LO) as usize] = s;
        }
        Laurent { c, top }
    }
}
