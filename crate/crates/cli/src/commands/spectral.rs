//! Windowed eigenvalue traces over an h grid, fitted against the predicted leading term.

use std::path::Path;

use rayon::prelude::*;

use degentrace::dynamics::{period_lower_bound, PeriodBoundOptions};
use degentrace::geometry::{check_admissible, AdmissibilityOptions};
use degentrace::spectral::{make_test_function, predicted_leading, scaling_fit, spectral_sample, FitModel, GridOptions, SpectralSample};

use crate::config::ExperimentConfig;
use crate::output::Table;
use crate::report::{Comparison, Provenance, Record, RunReport};
use crate::{row, CliError};

pub const SAMPLE_HEADER: &[&str] =
    &["h", "eigenvalue_count", "gamma", "tail_bound", "predicted", "max_estimate", "domain_lo", "domain_hi", "coarse_points", "fine_points"];
pub const EIGEN_HEADER: &[&str] = &["h", "rank", "eigenvalue", "estimate", "x", "phi"];

/// Test-function support from the config, refused unless below the period bound.
pub fn support(cfg: &ExperimentConfig, period_bound: f64) -> Result<f64, CliError> {
    let t = cfg.spectral.t.unwrap_or(cfg.spectral.t_factor * period_bound);
    if t >= period_bound {
        return Err(CliError::Refused(format!("T = {t} is not below the period lower bound {period_bound}")));
    }
    Ok(t)
}

pub fn run(cfg: &ExperimentConfig, out: &Path) -> Result<RunReport, CliError> {
    let s = &cfg.spectral;
    let p = cfg.potential.build()?;
    let adm = check_admissible(&p, s.eps, &AdmissibilityOptions::default())?;
    let bound = period_lower_bound(&p, &PeriodBoundOptions::default())?.bound;
    let t = support(cfg, bound)?;
    let phi = make_test_function(t);
    let mut report = RunReport::new("spectral", cfg);
    report.push(Record::new("potential admissible (sphere minimum of -V2k)", Provenance::Trivial, 0.0, adm.sphere_min, Comparison::AtLeast));
    report.push(Record::new("test-function support below period bound", Provenance::Trivial, bound, t, Comparison::AtMost));
    let inv = phi.inversion_error(&[0.0, 1.0, 2.5, 5.0, 10.0, 20.0]).map_err(degentrace::mellin::MellinError::from)?;
    report.push(Record::new("phi cache vs direct Fourier inversion", Provenance::Oracle, 0.0, inv, Comparison::Abs { tol: s.inversion_tol }));

    let opts = GridOptions {
        points_per_h: s.points_per_h,
        domain: None,
        wall_margin: s.wall_margin,
        wall_action: s.wall_action,
        boundary_mass_tol: s.boundary_mass_tol,
        max_points: s.max_points,
    };
    let hs = s.h_grid();
    let samples: Vec<SpectralSample> = hs.par_iter().map(|&h| spectral_sample(&p, p.e_c, s.eps, h, &phi, &opts)).collect::<Result<_, _>>()?;
    let preds = hs.iter().map(|&h| predicted_leading(&p, &phi, h)).collect::<Result<Vec<_>, _>>()?;

    let mut st = Table::new(SAMPLE_HEADER);
    let mut et = Table::new(EIGEN_HEADER);
    for (smp, pr) in samples.iter().zip(&preds) {
        let max_est = smp.estimates.iter().copied().fold(0.0, f64::max);
        st.push(row![smp.h, smp.eigenvalues.len(), smp.gamma, smp.tail_bound, pr.value, max_est, smp.domain.0, smp.domain.1, smp.points.0, smp.points.1]);
        for (i, (&e, &est)) in smp.eigenvalues.iter().zip(&smp.estimates).enumerate() {
            let x = (e - smp.e_c) / smp.h;
            et.push(row![smp.h, i, e, est, x, phi.phi(x)]);
        }
    }
    st.write(&out.join("spectral_samples.csv"))?;
    et.write(&out.join("spectral_eigenvalues.csv"))?;

    let worst = samples.iter().flat_map(|smp| smp.estimates.iter().map(move |e| e / smp.h)).fold(0.0, f64::max);
    report.push(Record::new("max Richardson estimate / h", Provenance::Trivial, 1e-3, worst, Comparison::AtMost));

    let pred = preds[0];
    let model = if pred.log_power == 1 { FitModel::PowerLog } else { FitModel::Power };
    let (exponent, ratio) = match scaling_fit(&samples, model) {
        Ok(f) => (f.exponent, f.coefficient / pred.coefficient),
        Err(_) => (f64::NAN, f64::NAN),
    };
    report.push(Record::new(
        "fitted exponent of gamma vs predicted",
        Provenance::PaperFormula,
        pred.exponent,
        exponent,
        Comparison::Abs { tol: s.exponent_tol },
    ));
    report.push(Record::new(
        "fitted coefficient / predicted coefficient",
        Provenance::PaperFormula,
        1.0,
        ratio,
        Comparison::Within { lo: s.ratio_range[0], hi: s.ratio_range[1] },
    ));
    let (i, _) = hs.iter().enumerate().fold((0, f64::INFINITY), |b, (i, &h)| if h < b.1 { (i, h) } else { b });
    report.push(Record::new(
        format!("gamma / predicted at h = {}", hs[i]),
        Provenance::PaperFormula,
        1.0,
        samples[i].gamma / preds[i].value,
        Comparison::Abs { tol: s.small_h_tol },
    ));
    Ok(report)
}
