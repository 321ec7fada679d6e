//! Flow jets, the generating-function structure and the period bound against detected orbits.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use degentrace::dynamics::action::{caustic_horizon, S2kOptions};
use degentrace::dynamics::periods::OrbitSearchOptions;
use degentrace::dynamics::{
    flow_jet_closed, flow_jet_oracle, linearized_flow, period_lower_bound, periodic_orbits_1d, verify_s2k_structure, PeriodBoundOptions, ShootingOptions,
};

use crate::config::ExperimentConfig;
use crate::output::Table;
use crate::report::{Comparison, Provenance, Record, RunReport};
use crate::{row, CliError};

pub const JET_HEADER: &[&str] = &["t", "direction", "component", "closed", "oracle"];
pub const ORBIT_HEADER: &[&str] = &["energy", "start", "opposite", "period", "period_bound"];

/// Seeded unit directions in R^dim.
pub fn directions(seed: u64, count: usize, dim: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let w: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let r = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if r > 0.1 {
                break w.iter().map(|x| x / r).collect();
            }
        })
        .collect()
}

fn max_rel(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().chain(b).fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}

pub fn run(cfg: &ExperimentConfig, out: &Path) -> Result<RunReport, CliError> {
    let d = &cfg.dynamics;
    let p = cfg.potential.build()?;
    let n = p.n;
    let top = 2 * p.k - 1;
    let mut report = RunReport::new("dynamics", cfg);

    let dirs = directions(cfg.seed, d.jet_directions, 2 * n);
    let jets = d.jet_times.par_iter().map(|&t| Ok((flow_jet_closed(&p, t), flow_jet_oracle(&p, t, top)?))).collect::<Result<Vec<_>, CliError>>()?;
    let mut jt = Table::new(JET_HEADER);
    for (&t, (closed, oracle)) in d.jet_times.iter().zip(&jets) {
        for (i, w) in dirs.iter().enumerate() {
            let (a, b) = (closed.eval(w), oracle.eval(w));
            for c in 0..a.len() {
                jt.push(row![t, i, c, a[c], b[c]]);
            }
            report.push(Record::new(
                format!("order-{top} jet at t={t}, direction {i}: closed vs transport"),
                Provenance::PaperFormula,
                0.0,
                max_rel(&a, &b),
                Comparison::Abs { tol: d.jet_tol },
            ));
        }
    }
    jt.write(&out.join("dynamics_jets.csv"))?;

    for &t in &d.jet_times {
        let lin = flow_jet_oracle(&p, t, 1)?;
        let m = linearized_flow(t, n);
        let mut dev = 0.0f64;
        for (i, comp) in lin.components.iter().enumerate() {
            for j in 0..2 * n {
                let mut e = vec![0u32; 2 * n];
                e[j] = 1;
                dev = dev.max((comp.coeff(&e) - m[i][j]).abs());
            }
        }
        report.push(Record::new(
            format!("linearized flow at t={t} is the free shear"),
            Provenance::PaperFormula,
            0.0,
            dev,
            Comparison::Abs { tol: d.linear_tol },
        ));
        for order in 2..top {
            let j = flow_jet_oracle(&p, t, order)?;
            let size = j.components.iter().map(|c| c.max_abs_coeff()).fold(0.0, f64::max);
            report.push(Record::new(
                format!("order-{order} jet at t={t} vanishes"),
                Provenance::PaperFormula,
                0.0,
                size,
                Comparison::Abs { tol: d.middle_tol },
            ));
        }
    }

    let bound = period_lower_bound(&p, &PeriodBoundOptions::default())?.bound;
    let opts = S2kOptions {
        shooting: ShootingOptions { horizon: Some(caustic_horizon(bound, d.horizon_factor)), ..ShootingOptions::default() },
        ..S2kOptions::default()
    };
    let s2k = verify_s2k_structure(&p, &d.s2k_times, &d.s2k_radii, &opts)?;
    for row in &s2k.rows {
        report.push(Record::new(
            format!("S_2k xi-free part at t={}", row.t),
            Provenance::Oracle,
            0.0,
            row.xi_free_deviation,
            Comparison::Abs { tol: d.s2k_tol },
        ));
        report.push(Record::new(
            format!("S_2k xi-linear part at t={}", row.t),
            Provenance::Oracle,
            0.0,
            row.xi_linear_deviation,
            Comparison::Abs { tol: d.s2k_tol },
        ));
    }

    let mut ot = Table::new(ORBIT_HEADER);
    if n == 1 {
        for &e in &d.orbit_energies {
            let orbits = periodic_orbits_1d(&p, p.e_c + e, &OrbitSearchOptions::default())?;
            let shortest = orbits.iter().map(|o| o.period).fold(f64::INFINITY, f64::min);
            for o in &orbits {
                ot.push(row![o.energy, o.start, o.opposite, o.period, bound]);
            }
            report.push(Record::new(format!("orbits found at E_c{e:+}"), Provenance::Trivial, 1.0, orbits.len() as f64, Comparison::AtLeast));
            report.push(Record::new(format!("shortest period at E_c{e:+} vs 2pi/M"), Provenance::PaperFormula, bound, shortest, Comparison::AtLeast));
        }
    }
    ot.write(&out.join("dynamics_orbits.csv"))?;
    Ok(report)
}
