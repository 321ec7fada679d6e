//! Asymptotic series of J(λ) assembled from catalog residues.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::amplitude::ModelAmplitude;
use super::OscError;
use crate::mellin::catalog::{first_poles, minimal_l, z_min};
use crate::mellin::residue::{residue_at, residue_coefficient};
use crate::num::rpoly::{qi, to_f64, Q};

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTerm {
    pub exponent: Q,
    /// 1 for a λ^{−a} log λ term.
    pub log_power: u8,
    pub coefficient: f64,
}

impl SeriesTerm {
    pub fn eval(&self, lambda: f64) -> f64 {
        let p = self.coefficient * lambda.powf(-to_f64(&self.exponent));
        if self.log_power == 1 {
            p * lambda.ln()
        } else {
            p
        }
    }
}

/// Σ c·λ^{−a}(log λ)^m over catalog poles, plus the regular terms from integer points below
/// z_min (which vanish when â has the matching vanishing moments).
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticSeries {
    pub n: u32,
    pub k: u32,
    pub terms: Vec<SeriesTerm>,
    pub regular_terms: Vec<SeriesTerm>,
    pub valid_from: f64,
}

impl AsymptoticSeries {
    /// Distinct exponents of the catalog part, in order.
    pub fn exponents(&self) -> Vec<Q> {
        let mut e: Vec<Q> = self.terms.iter().map(|t| t.exponent.clone()).collect();
        e.dedup();
        e
    }

    /// Sum of the regular terms and the catalog terms at the first `poles` exponents.
    pub fn eval_truncated(&self, lambda: f64, poles: usize) -> f64 {
        let keep = self.exponents().into_iter().take(poles).collect::<Vec<_>>();
        let reg: f64 = self.regular_terms.iter().map(|t| t.eval(lambda)).sum();
        reg + self.terms.iter().filter(|t| keep.contains(&t.exponent)).map(|t| t.eval(lambda)).sum::<f64>()
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        self.eval_truncated(lambda, usize::MAX)
    }

    /// |power part| + |log part| of the contribution at the i-th exponent.
    pub fn term_magnitude(&self, i: usize, lambda: f64) -> f64 {
        let Some(e) = self.exponents().get(i).cloned() else { return 0.0 };
        self.terms.iter().filter(|t| t.exponent == e).map(|t| t.eval(lambda).abs()).sum()
    }

    /// Whether the leading exponent carries a log λ term with nonzero coefficient.
    pub fn leading_has_log(&self, rel_tol: f64) -> bool {
        let e = &self.terms[0].exponent;
        let scale: f64 = self.terms.iter().filter(|t| &t.exponent == e).map(|t| t.coefficient.abs()).fold(0.0, f64::max);
        self.terms.iter().any(|t| &t.exponent == e && t.log_power == 1 && t.coefficient.abs() > rel_tol * scale)
    }
}

/// Residue expansion through the first `order` catalog poles.
pub fn build_expansion(amp: &ModelAmplitude, order: usize) -> Result<AsymptoticSeries, OscError> {
    if order == 0 {
        return Err(OscError::Precondition("expansion order must be at least 1"));
    }
    let (n, k) = (amp.n, amp.k);
    let mut terms = Vec::new();
    for pole in first_poles(n, k, order).entries {
        let r = residue_coefficient(n, k, &pole, &amp.time, &amp.b, None)?;
        terms.push(SeriesTerm { exponent: pole.location.clone(), log_power: 0, coefficient: r.power });
        if pole.order == 2 {
            terms.push(SeriesTerm { exponent: pole.location.clone(), log_power: 1, coefficient: r.log });
        }
    }
    let zm = z_min(n, k);
    let mut regular_terms = Vec::new();
    let mut p = qi(1);
    while p < zm {
        let r = residue_at(n, k, &p, minimal_l(&p), &amp.time, &amp.b)?;
        regular_terms.push(SeriesTerm { exponent: p.clone(), log_power: 0, coefficient: r.power });
        p += qi(1);
    }
    let valid_from = amp.b.cutoff.inner.powi(-2 * k as i32);
    Ok(AsymptoticSeries { n, k, terms, regular_terms, valid_from })
}
