//! Closed-form identities against quadrature, and the structural checks of the residue engine.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use degentrace::mellin::catalog::{first_poles, minimal_l, unweighted_candidates_below, verify_catalog};
use degentrace::mellin::identities::{e_closed, e_numeric, q_identity_check, s_identity, s_identity_quadrature};
use degentrace::mellin::residue::residue_at;
use degentrace::mellin::transform::decay_ratio;
use degentrace::mellin::{MellinSide, Side};
use degentrace::profile::{BumpProfile, Cutoff, GaussProfile, SpatialProfile, TimeProfile};

use crate::config::ExperimentConfig;
use crate::report::{Comparison, Provenance, Record, RunReport};
use crate::CliError;

fn textured() -> SpatialProfile {
    SpatialProfile::new(vec![(0, 0, 1.0), (0, 1, 0.5), (0, 2, 0.25), (1, 0, -0.3)], Cutoff::new(0.5, 1.0))
}

pub fn run(cfg: &ExperimentConfig, _out: &Path) -> Result<RunReport, CliError> {
    let id = &cfg.identities;
    let mut recs: Vec<Record> = Vec::new();

    let mut e_cases: Vec<(u32, f64)> = id.e_cases.iter().map(|c| (c.n, c.alpha)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for &n in &id.random_dimensions {
        for _ in 0..id.random_alpha_checks {
            let t: f64 = rng.gen_range(0.1..0.9);
            e_cases.push((n, n as f64 / 2.0 + t * (n as f64 / 2.0 + 1.0)));
        }
    }
    let e_vals: Vec<(f64, f64)> = e_cases.par_iter().map(|&(n, a)| Ok::<_, CliError>((e_closed(n, a)?, e_numeric(n, a)?))).collect::<Result<_, _>>()?;
    for (&(n, a), &(closed, numeric)) in e_cases.iter().zip(&e_vals) {
        if n % 2 == 0 {
            recs.push(Record::new(format!("E(n={n}, alpha={a}) vanishes"), Provenance::PaperFormula, 0.0, numeric, Comparison::Abs { tol: id.even_tol }));
        } else {
            recs.push(Record::new(
                format!("E(n={n}, alpha={a}) closed vs numeric"),
                Provenance::PaperFormula,
                closed,
                numeric,
                Comparison::Rel { tol: id.e_tol },
            ));
        }
    }
    for c in &id.even_cases {
        let v = e_numeric(c.n, c.alpha)?;
        recs.push(Record::new(format!("E(n={}, alpha={}) vanishes", c.n, c.alpha), Provenance::PaperFormula, 0.0, v, Comparison::Abs { tol: id.even_tol }));
    }

    for &[n, p] in &id.s_cases {
        let closed = s_identity(p, n)?;
        let quad = s_identity_quadrature(p, n)?;
        recs.push(Record::new(format!("s(n={n}, p={p}) closed vs quadrature"), Provenance::PaperFormula, closed, quad, Comparison::Rel { tol: id.s_tol }));
    }
    for &[n, p] in &id.s_zero_cases {
        recs.push(Record::new(format!("s(n={n}, p={p}) is exactly zero"), Provenance::PaperFormula, 0.0, s_identity(p, n)?, Comparison::Equal));
    }

    let b = textured();
    for &[k, l] in &id.q_cases {
        let (lhs, rhs) = q_identity_check(&b, k, l, id.q_s)?;
        recs.push(Record::new(format!("q(k={k}, l={l}) integral vs (2kl-1)! b(0,0)"), Provenance::PaperFormula, rhs, lhs, Comparison::Rel { tol: id.q_tol }));
    }

    // an odd component keeps log coefficients at integer poles away from zero
    let mixed = TimeProfile::Gauss(GaussProfile::combination(&[(0, 1.0), (1, 0.5)]));
    let hermite6 = TimeProfile::Gauss(GaussProfile::hermite(6));
    for &[n, k] in &id.residue_pairs {
        let cat = first_poles(n, k, 8);
        let mismatches = match verify_catalog(&cat) {
            Ok(()) => 0.0,
            Err(_) => {
                cat.entries.iter().filter(|p| verify_catalog(&degentrace::mellin::PoleCatalog { n, k, entries: vec![(*p).clone()] }).is_err()).count() as f64
            }
        };
        recs.push(Record::new(format!("catalog (n={n}, k={k}) orders vs B_l multiplicities"), Provenance::Oracle, 0.0, mismatches, Comparison::Equal));

        let worst = cat
            .entries
            .par_iter()
            .take(2)
            .map(|pole| {
                let l0 = minimal_l(&pole.location);
                let a = residue_at(n, k, &pole.location, l0, &mixed, &b)?;
                let c = residue_at(n, k, &pole.location, l0 + 1, &mixed, &b)?;
                // relative to the residue's own size, so a vanishing log part is compared absolutely
                let scale = [a.power, a.log, c.power, c.log].iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
                Ok((a.power - c.power).abs().max((a.log - c.log).abs()) / scale)
            })
            .collect::<Result<Vec<f64>, CliError>>()?
            .into_iter()
            .fold(0.0, f64::max);
        recs.push(Record::new(format!("residue (n={n}, k={k}) independent of l"), Provenance::Oracle, 0.0, worst, Comparison::Abs { tol: id.residue_tol }));

        let below = unweighted_candidates_below(n, k)
            .par_iter()
            .map(|z| {
                let r = residue_at(n, k, z, minimal_l(z), &hermite6, &b)?;
                Ok(r.power.abs().max(r.log.abs()))
            })
            .collect::<Result<Vec<f64>, CliError>>()?
            .into_iter()
            .fold(0.0, f64::max);
        recs.push(Record::new(format!("residue (n={n}, k={k}) zero below z_min"), Provenance::Trivial, 0.0, below, Comparison::Abs { tol: id.zero_tol }));
    }

    let gauss = TimeProfile::Gauss(GaussProfile::hermite(4));
    let side = MellinSide::new(&gauss, Side::Plus);
    let samples = (-50..=50).map(|y| Ok((y as f64, side.on_line(3.0, y as f64)?.norm()))).collect::<Result<Vec<_>, CliError>>()?;
    recs.push(Record::new("Mellin decay, Gaussian profile on Re z = 3", Provenance::Oracle, 1.0, decay_ratio(&samples, 4, 10.0, 40.0), Comparison::AtMost));
    let bump = TimeProfile::Bump(BumpProfile::new(1.0));
    let side = MellinSide::new(&bump, Side::Plus);
    let w = |y: f64| -> Result<f64, CliError> { Ok(side.on_line(0.75, y)?.norm() * (1.0 + y.abs()).powi(4)) };
    let plateau = (w(50.0)? / w(40.0)?).max(w(-50.0)? / w(-40.0)?);
    recs.push(Record::new("Mellin decay, bump profile on Re z = 0.75", Provenance::Oracle, 1.05, plateau, Comparison::AtMost));

    if let Some(name) = &id.inject_sign_fault {
        let r = recs.iter_mut().find(|r| &r.name == name).ok_or_else(|| CliError::Config(format!("no record named {name:?} for fault injection")))?;
        *r = Record::new(r.name.clone(), r.provenance, -r.expected, r.observed, r.comparison);
    }

    let mut report = RunReport::new("verify-identities", cfg);
    for r in recs {
        report.push(r);
    }
    Ok(report)
}
