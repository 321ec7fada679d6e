//! Pole bookkeeping in exact rational arithmetic.

use alloc::vec;
use alloc::vec::Vec;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::num::rpoly::{q, qi, to_f64, RPoly, Q};

/// z_min = n(k+1)/(2k).
pub fn z_min(n: u32, k: u32) -> Q {
    q((n * (k + 1)) as i64, (2 * k) as i64)
}

/// n(k+1) − 1, the q-exponent produced by the polar weights after blowing up r = s·q^k.
pub fn weight_exponent(n: u32, k: u32) -> i64 {
    (n * (k + 1)) as i64 - 1
}

pub fn is_integer(z: &Q) -> bool {
    z.denom().is_one()
}

/// ∏_{i=0}^{count−1} (a(z) − i).
pub fn falling_poly(a: &RPoly, count: u32) -> RPoly {
    let mut r = RPoly::one();
    for i in 0..count {
        r = r.mul(&a.add(&RPoly::constant(qi(-(i as i64)))));
    }
    r
}

/// p(z + c).
pub fn shift_poly(p: &RPoly, c: &Q) -> RPoly {
    let x = RPoly::linear(c.clone(), Q::one());
    let mut r = RPoly::new(vec![]);
    for a in p.coeffs().iter().rev() {
        r = r.mul(&x).add(&RPoly::constant(a.clone()));
    }
    r
}

/// 𝔟₀(z) = (1−z)·∂_q^{2k} q^{2k(1−z)} / q^{−2kz} = (1−z)∏_{j=1}^{2k}(j − 2kz).
pub fn b0(k: u32) -> RPoly {
    let kk = (2 * k) as i64;
    let exponent = RPoly::linear(qi(kk), qi(-kk));
    RPoly::linear(qi(1), qi(-1)).mul(&falling_poly(&exponent, 2 * k))
}

/// The unweighted factor with the product exactly as typeset, (1−z)∏_{j=1}^{2k}(j − 2k).
///
/// Kept only to document that it cannot produce the poles j/(2k).
pub fn b0_as_printed(k: u32) -> RPoly {
    let kk = (2 * k) as i64;
    let c = (1..=kk).fold(Q::one(), |acc, j| acc * qi(j - kk));
    RPoly::linear(c.clone(), -c)
}

/// 𝔟(z) = (z−1)∏_{j=1}^{2k}(j − 2kz + n(k+1) − 1).
pub fn b_weighted(n: u32, k: u32) -> RPoly {
    let kk = (2 * k) as i64;
    let exponent = RPoly::linear(qi(kk + weight_exponent(n, k)), qi(-kk));
    RPoly::linear(qi(-1), qi(1)).mul(&falling_poly(&exponent, 2 * k))
}

/// 𝔅_l(z) = ∏_{i=0}^{l−1} 𝔟(z − i).
pub fn big_b(n: u32, k: u32, l: u32) -> RPoly {
    let b = b_weighted(n, k);
    (0..l).fold(RPoly::one(), |acc, i| acc.mul(&shift_poly(&b, &qi(-(i as i64)))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pole {
    pub location: Q,
    pub order: u8,
}

impl Pole {
    pub fn location_f64(&self) -> f64 {
        to_f64(&self.location)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleCatalog {
    pub n: u32,
    pub k: u32,
    pub entries: Vec<Pole>,
}

/// Poles z_{p,j} = p + (j + n(k+1) − 1)/(2k) in [z_min, z_max], double at integers.
pub fn pole_catalog(n: u32, k: u32, z_max: &Q) -> PoleCatalog {
    let step = q(1, (2 * k) as i64);
    let mut z = z_min(n, k);
    let mut entries = Vec::new();
    while &z <= z_max {
        entries.push(Pole { order: if is_integer(&z) { 2 } else { 1 }, location: z.clone() });
        z += &step;
    }
    PoleCatalog { n, k, entries }
}

/// The first `count` catalog poles.
pub fn first_poles(n: u32, k: u32, count: usize) -> PoleCatalog {
    let zm = z_min(n, k);
    let z_max = zm + q(count as i64 - 1, (2 * k) as i64);
    pole_catalog(n, k, &z_max)
}

/// Smallest l with l > z, as the residue engine requires.
pub fn minimal_l(z: &Q) -> u32 {
    let f = z.numer().div_floor(z.denom());
    let f: i64 = f.try_into().unwrap_or(0);
    (f + 1).max(1) as u32
}

/// Checks each entry's order against its root multiplicity in 𝔅_l for the minimal l.
pub fn verify_catalog(cat: &PoleCatalog) -> Result<(), (Q, usize, u8)> {
    for p in &cat.entries {
        let l = minimal_l(&p.location);
        let mult = big_b(cat.n, cat.k, l).root_multiplicity(&p.location);
        if mult != p.order as usize {
            return Err((p.location.clone(), mult, p.order));
        }
    }
    Ok(())
}

/// Candidate points of the unweighted grid j/(2k) lying strictly below z_min.
pub fn unweighted_candidates_below(n: u32, k: u32) -> Vec<Q> {
    let zm = z_min(n, k);
    (1..).map(|j| q(j, (2 * k) as i64)).take_while(|z| z < &zm).filter(|z| !z.is_zero()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_factor_roots() {
        let b = b_weighted(1, 2);
        assert_eq!(b.root_multiplicity(&qi(1)), 2);
        for z in [q(3, 4), q(5, 4), q(3, 2)] {
            assert_eq!(b.root_multiplicity(&z), 1);
        }
        assert_eq!(b.degree(), Some(5));
        assert_eq!(big_b(1, 2, 1), b);
    }

    #[test]
    fn unweighted_factor_derives_from_differentiation() {
        let b = b0(2);
        for j in 1..=4 {
            assert_eq!(b.root_multiplicity(&q(j, 4)), if j == 4 { 2 } else { 1 });
        }
        let printed = b0_as_printed(2);
        // the j = 2k factor of the typeset product is zero
        assert!(printed.is_zero());
    }

    #[test]
    fn catalog_examples() {
        let c = pole_catalog(1, 2, &qi(2));
        let locs: Vec<Q> = c.entries.iter().map(|p| p.location.clone()).collect();
        assert_eq!(locs, vec![q(3, 4), qi(1), q(5, 4), q(3, 2), q(7, 4), qi(2)]);
        let orders: Vec<u8> = c.entries.iter().map(|p| p.order).collect();
        assert_eq!(orders, vec![1, 2, 1, 1, 1, 2]);
        assert_eq!(pole_catalog(3, 3, &qi(2)).entries, vec![Pole { location: qi(2), order: 2 }]);
        assert_eq!(z_min(4, 2), qi(3));
        for (n, k) in [(1, 2), (2, 2), (3, 3), (4, 2)] {
            verify_catalog(&pole_catalog(n, k, &qi(5))).unwrap();
        }
    }

    #[test]
    fn minimal_l_is_strict() {
        assert_eq!(minimal_l(&q(3, 4)), 1);
        assert_eq!(minimal_l(&qi(2)), 3);
        assert_eq!(unweighted_candidates_below(4, 2), vec![q(1, 4), q(1, 2), q(3, 4), qi(1), q(5, 4), q(3, 2), q(7, 4), qi(2), q(9, 4), q(5, 2), q(11, 4)]);
    }
}
