//! Oracle values of the model integral against the residue expansion.

use std::path::Path;

use rayon::prelude::*;

use degentrace::mellin::{classify_case, z_min};
use degentrace::num::rpoly::to_f64;
use degentrace::oscillatory::{amplitude_factory, build_expansion, fit_tail, lambda_grid, oracle_eval, AsymptoticSeries, ModelAmplitude, ProfileSpec};

use crate::config::{ExpandCase, ExperimentConfig, ProfileConfig, Tune};
use crate::output::Table;
use crate::report::{Comparison, Provenance, Record, RunReport};
use crate::{row, CliError};

pub const HEADER: &[&str] = &["lambda", "oracle", "oracle_error", "series", "residual"];

fn profile_spec(p: &ProfileConfig) -> ProfileSpec {
    match p {
        ProfileConfig::Bump { t_max, shift } => ProfileSpec::Bump { t_max: *t_max, shift: *shift },
        ProfileConfig::Hermite { terms } => ProfileSpec::GaussianWindowed { hermite: terms.iter().map(|t| (t.order, t.weight)).collect() },
    }
}

fn amplitude(c: &ExpandCase, extra: Option<(u32, u32, f64)>) -> Result<ModelAmplitude, CliError> {
    let mut core: Vec<(u32, u32, f64)> = c.core.iter().map(|t| (t.r, t.q, t.c)).collect();
    core.extend(extra);
    Ok(amplitude_factory(c.n, c.k, &profile_spec(&c.profile), core, c.inner, c.outer)?)
}

/// Power coefficient of λ^{−exponent}, regular and catalog parts together.
fn power_coefficient(s: &AsymptoticSeries, exponent: f64) -> f64 {
    s.terms.iter().chain(&s.regular_terms).filter(|t| t.log_power == 0 && (to_f64(&t.exponent) - exponent).abs() < 1e-12).map(|t| t.coefficient).sum()
}

/// The coefficient γ of r^r q^q for which the λ^{−exponent} power term vanishes; it is affine in γ.
pub fn tune_coefficient(c: &ExpandCase, tune: &Tune, order: usize) -> Result<f64, CliError> {
    let at = |g: f64| -> Result<f64, CliError> { Ok(power_coefficient(&build_expansion(&amplitude(c, Some((tune.r, tune.q, g)))?, order)?, tune.exponent)) };
    let (c0, c1) = (at(0.0)?, at(1.0)?);
    if c1 == c0 {
        return Err(CliError::Config(format!("tuning term r^{} q^{} does not reach exponent {}", tune.r, tune.q, tune.exponent)));
    }
    Ok(-c0 / (c1 - c0))
}

fn run_case(cfg: &ExperimentConfig, c: &ExpandCase, out: &Path, recs: &mut Vec<Record>) -> Result<(), CliError> {
    let e = &cfg.expand;
    let (n, k) = (c.n, c.k);
    let tag = format!("(n={n}, k={k})");
    let extra = match &c.tune {
        Some(t) => Some((t.r, t.q, tune_coefficient(c, t, e.order)?)),
        None => None,
    };
    let amp = amplitude(c, extra)?;
    let series = build_expansion(&amp, e.order)?;
    let grid = lambda_grid(e.lambda_min, e.lambda_max, e.per_decade);
    let oracle = grid.par_iter().map(|&l| oracle_eval(&amp, l)).collect::<Result<Vec<_>, _>>()?;

    let mut t = Table::new(HEADER);
    for (&l, o) in grid.iter().zip(&oracle) {
        let s = series.eval(l);
        t.push(row![l, o.value, o.error, s, o.value - s]);
    }
    t.write(&out.join(format!("expand_n{n}_k{k}.csv")))?;

    let samples: Vec<(f64, f64)> = grid.iter().zip(&oracle).map(|(&l, o)| (l, o.value)).collect();
    let power = fit_tail(&samples, false)?;
    let log = fit_tail(&samples, true)?;
    let case = classify_case(n, k);
    let detected = c.log_ratio * log.residual < power.residual;
    recs.push(Record::new(
        format!("{tag} log term present ({})", case.name()),
        Provenance::PaperFormula,
        case.has_log() as u8 as f64,
        detected as u8 as f64,
        Comparison::Equal,
    ));
    if case.has_log() {
        recs.push(Record::new(
            format!("{tag} power/log residual ratio"),
            Provenance::PaperFormula,
            c.log_ratio,
            power.residual / log.residual,
            Comparison::AtLeast,
        ));
    }
    let fit = if case.has_log() { log } else { power };
    let zm = to_f64(&z_min(n, k));
    recs.push(Record::new(
        format!("{tag} fitted decay exponent vs z_min"),
        Provenance::PaperFormula,
        zm,
        fit.exponent,
        Comparison::Abs { tol: c.exponent_tol },
    ));
    if let Some(tol) = c.coefficient_tol {
        let lp = case.has_log() as u8;
        let lead: f64 = series.terms.iter().filter(|t| to_f64(&t.exponent) == zm && t.log_power == lp).map(|t| t.coefficient).sum();
        recs.push(Record::new(format!("{tag} leading coefficient vs fit"), Provenance::PaperFormula, lead, fit.coefficient, Comparison::Rel { tol }));
    }
    Ok(())
}

pub fn run(cfg: &ExperimentConfig, nk: Option<(u32, u32)>, out: &Path) -> Result<RunReport, CliError> {
    let cases: Vec<&ExpandCase> = match nk {
        Some((n, k)) => vec![cfg.expand_case(n, k)?],
        None => cfg.expand.cases.iter().collect(),
    };
    if cases.is_empty() {
        return Err(CliError::Config("expand: no cases configured".into()));
    }
    let mut recs = Vec::new();
    for c in cases {
        run_case(cfg, c, out, &mut recs)?;
    }
    let mut report = RunReport::new("expand", cfg);
    for r in recs {
        report.push(r);
    }
    Ok(report)
}
