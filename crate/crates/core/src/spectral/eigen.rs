//! Windowed eigenvalues of −h²d²/dx² + V(x) by finite differences and Sturm bisection.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::SpectralError;
use crate::geometry::HomogeneousPotential;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    /// Coarse grid step is h / points_per_h; the fine grid halves it.
    pub points_per_h: f64,
    /// Hard walls; None chooses them from the potential.
    pub domain: Option<(f64, f64)>,
    /// Walls sit where V ≥ top of window + wall_margin·(window width)/2 ...
    pub wall_margin: f64,
    /// ... and the barrier action ∫√(V − top)dx beyond the window exceeds this many h.
    pub wall_action: f64,
    /// Largest allowed eigenvector mass next to the walls, in the outer tenth of the forbidden
    /// zone beyond the window (at least 4 grid points).
    pub boundary_mass_tol: f64,
    pub max_points: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions { points_per_h: 16.0, domain: None, wall_margin: 9.0, wall_action: 30.0, boundary_mass_tol: 1e-10, max_points: 400_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    /// Position in the full (discrete) spectrum, from 0.
    pub index: usize,
    /// Richardson value from the two grids.
    pub value: f64,
    /// |fine − coarse|/3, an error estimate of the fine-grid value.
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolve {
    pub eigenvalues: Vec<Eigenvalue>,
    pub domain: (f64, f64),
    /// Interior points of the coarse and fine grids.
    pub points: (usize, usize),
}

/// Symmetric tridiagonal matrix with constant off-diagonal.
#[derive(Debug, Clone)]
pub struct FdOperator {
    pub diag: Vec<f64>,
    pub off: f64,
    pub x: Vec<f64>,
}

impl FdOperator {
    pub fn new(p: &HomogeneousPotential, h: f64, domain: (f64, f64), interior: usize) -> Self {
        let dx = (domain.1 - domain.0) / (interior + 1) as f64;
        let c = h * h / (dx * dx);
        let x: Vec<f64> = (1..=interior).map(|i| domain.0 + dx * i as f64).collect();
        let diag = x.iter().map(|&xi| 2.0 * c + p.v(&[xi])).collect();
        FdOperator { diag, off: -c, x }
    }

    /// Number of eigenvalues strictly below `e` (Sylvester inertia of T − e).
    pub fn count_below(&self, e: f64) -> usize {
        let o2 = self.off * self.off;
        let tiny = f64::MIN_POSITIVE.sqrt() * self.off.abs().max(1.0);
        let mut count = 0;
        let mut d = 1.0;
        for (i, &a) in self.diag.iter().enumerate() {
            d = if i == 0 { a - e } else { a - e - o2 / d };
            if d == 0.0 {
                d = -tiny;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn bounds(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let lo = self.diag.iter().fold(f64::INFINITY, |m, &a| m.min(a)) - r;
        let hi = self.diag.iter().fold(f64::NEG_INFINITY, |m, &a| m.max(a)) + r;
        (lo, hi)
    }

    /// The eigenvalue with the given index, by bisection.
    pub fn eigenvalue(&self, index: usize) -> f64 {
        let (mut lo, mut hi) = self.bounds();
        while hi - lo > 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1e-3) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Normalized eigenvector by inverse iteration.
    pub fn eigenvector(&self, e: f64) -> Vec<f64> {
        let n = self.diag.len();
        let shift = e + 1e-10 * e.abs().max(1.0);
        let mut y = vec![1.0; n];
        for _ in 0..3 {
            // Thomas algorithm for (T − shift)z = y
            let mut c = vec![0.0; n];
            let mut d = vec![0.0; n];
            let mut denom = self.diag[0] - shift;
            c[0] = self.off / denom;
            d[0] = y[0] / denom;
            for i in 1..n {
                denom = self.diag[i] - shift - self.off * c[i - 1];
                if denom == 0.0 {
                    denom = 1e-300;
                }
                c[i] = self.off / denom;
                d[i] = (y[i] - self.off * d[i - 1]) / denom;
            }
            for i in (0..n - 1).rev() {
                d[i] -= c[i] * d[i + 1];
            }
            let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
            y = d.into_iter().map(|v| v / norm).collect();
        }
        y
    }
}

/// Walls at the nearest points on either side of x0 where V is high enough and the barrier
/// beyond the window is thick enough.
pub fn choose_domain(p: &HomogeneousPotential, h: f64, window: (f64, f64), opts: &GridOptions) -> Result<(f64, f64), SpectralError> {
    let x0 = p.x0[0];
    let top = window.1;
    let target = top + opts.wall_margin * 0.5 * (window.1 - window.0);
    let walk = |dir: f64| -> Result<f64, SpectralError> {
        let mut x = x0;
        let mut action = 0.0;
        let mut step = 1e-3;
        while (x - x0).abs() < 1e3 {
            let xn = x + dir * step;
            let v = p.v(&[xn]);
            action += (v - top).max(0.0).sqrt() * step;
            x = xn;
            if v >= target && action >= opts.wall_action * h {
                return Ok(x);
            }
            step = 1e-3 * (1.0 + (x - x0).abs());
        }
        Err(SpectralError::NotConfining)
    };
    Ok((walk(-1.0)?, walk(1.0)?))
}

/// Grid points in the wall strips on each side.
fn wall_strips(op: &FdOperator, top: f64) -> (usize, usize) {
    let n = op.diag.len();
    let c = 2.0 * op.off.abs();
    let left = op.diag.iter().position(|&d| d - c <= top).unwrap_or(n);
    let right = op.diag.iter().rev().position(|&d| d - c <= top).unwrap_or(n);
    ((left / 10).max(4).min(n), (right / 10).max(4).min(n))
}

/// Eigenvalues in [window.0, window.1] with Richardson estimates from steps h/m and h/2m.
pub fn eigenvalues_in_window(p: &HomogeneousPotential, h: f64, window: (f64, f64), opts: &GridOptions) -> Result<EigenSolve, SpectralError> {
    if p.n != 1 {
        return Err(SpectralError::Dimension(p.n));
    }
    if !(h > 0.0) || !(window.0 < window.1) {
        return Err(SpectralError::Precondition("need h > 0 and a nonempty window"));
    }
    let domain = match opts.domain {
        Some(d) => d,
        None => choose_domain(p, h, window, opts)?,
    };
    let width = domain.1 - domain.0;
    let coarse_n = (width * opts.points_per_h / h).ceil() as usize - 1;
    let fine_n = 2 * (coarse_n + 1) - 1;
    if fine_n > opts.max_points {
        return Err(SpectralError::GridTooLarge(fine_n));
    }
    let coarse = FdOperator::new(p, h, domain, coarse_n);
    let fine = FdOperator::new(p, h, domain, fine_n);
    let first = fine.count_below(window.0).saturating_sub(1);
    let last = fine.count_below(window.1) + 1;
    let tol = 1e-3 * h;
    let (left, right) = wall_strips(&fine, window.1);
    let mut eigenvalues = Vec::new();
    for index in first..last.min(fine_n) {
        let ef = fine.eigenvalue(index);
        let ec = coarse.eigenvalue(index);
        let value = (4.0 * ef - ec) / 3.0;
        if value < window.0 || value > window.1 {
            continue;
        }
        let estimate = (ef - ec).abs() / 3.0;
        if estimate > tol {
            return Err(SpectralError::Unresolved { index, estimate });
        }
        let v = fine.eigenvector(ef);
        let mass = v[..left].iter().chain(&v[fine_n - right..]).map(|x| x * x).sum::<f64>();
        if mass > opts.boundary_mass_tol {
            return Err(SpectralError::DomainTooTight { index, mass });
        }
        eigenvalues.push(Eigenvalue { index, value, estimate });
    }
    Ok(EigenSolve { eigenvalues, domain, points: (coarse_n, fine_n) })
}
