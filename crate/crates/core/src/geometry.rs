//! Homogeneous potentials, admissibility checks, sphere measures and the angular factor.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
#[allow(unused_imports)]
use num_traits::Float;

use crate::num::gauss::gauss_legendre;
use crate::num::linalg::solve_dense;
use crate::num::mpoly::MPoly;
use crate::num::special::gamma;

/// Potential with a degenerate maximum of order 2k at x0.
///
/// `v2k` is a polynomial in the displacement y = x − x0; `full` is a polynomial in x.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPotential {
    pub n: usize,
    pub k: u32,
    pub v2k: MPoly,
    pub full: MPoly,
    pub e_c: f64,
    pub x0: Vec<f64>,
    /// Search box used by the compactness and critical-point checks, one (lo, hi) per axis.
    pub search_box: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeometryError {
    /// (a) the form is not negative definite: sampled max of v2k on the sphere.
    NotDefinite { sphere_max: f64 },
    /// (b) the potential does not exceed E_c + eps somewhere on the box boundary.
    NotCompact { point: Vec<f64>, value: f64 },
    /// (c) another critical point with value in the window.
    ExtraCriticalPoint { point: Vec<f64>, value: f64 },
    /// v2k is not homogeneous of degree 2k.
    NotHomogeneous { degree: u32 },
    /// full − E_c − v2k(x − x0) has terms of degree ≤ 2k.
    TaylorMismatch { degree: u32, size: f64 },
    /// Dimension or shape mismatch in the inputs.
    Shape(&'static str),
    /// Angular quadrature did not settle at the requested tolerance.
    AngularNotConverged { value: f64, error: f64 },
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::NotDefinite { sphere_max } => {
                write!(f, "(a) definiteness fails: max of V2k on the unit sphere is {sphere_max:e}")
            }
            GeometryError::NotCompact { point, value } => {
                write!(f, "(b) compactness check fails: V = {value:e} at boundary point {point:?}")
            }
            GeometryError::ExtraCriticalPoint { point, value } => {
                write!(f, "(c) extra critical point {point:?} with value {value:e} inside the window")
            }
            GeometryError::NotHomogeneous { degree } => write!(f, "V2k is not homogeneous of degree {degree}"),
            GeometryError::TaylorMismatch { degree, size } => {
                write!(f, "V − E_c − V2k has a degree-{degree} term of size {size:e}")
            }
            GeometryError::Shape(s) => write!(f, "shape mismatch: {s}"),
            GeometryError::AngularNotConverged { value, error } => {
                write!(f, "angular quadrature not converged: {value:e} ± {error:e}")
            }
        }
    }
}

impl core::error::Error for GeometryError {}

impl HomogeneousPotential {
    pub fn new(n: usize, k: u32, v2k: MPoly, full: MPoly, e_c: f64, x0: Vec<f64>, search_box: Vec<(f64, f64)>) -> Result<Self, GeometryError> {
        if n == 0 || k < 2 {
            return Err(GeometryError::Shape("need n ≥ 1 and k ≥ 2"));
        }
        if v2k.nvars != n || full.nvars != n || x0.len() != n || search_box.len() != n {
            return Err(GeometryError::Shape("dimension of v2k, full, x0 and box must equal n"));
        }
        Ok(HomogeneousPotential { n, k, v2k, full, e_c, x0, search_box })
    }

    /// Builds the potential taking V₂ₖ as the degree-2k Taylor part of `full` at x0.
    pub fn from_full(n: usize, k: u32, full: MPoly, e_c: f64, x0: Vec<f64>, search_box: Vec<(f64, f64)>) -> Result<Self, GeometryError> {
        if full.nvars != n || x0.len() != n {
            return Err(GeometryError::Shape("dimension of full and x0 must equal n"));
        }
        let v2k = full.shift(&x0).homogeneous_part(2 * k);
        HomogeneousPotential::new(n, k, v2k, full, e_c, x0, search_box)
    }

    /// The one-dimensional reference V(x) = −x⁴ + x⁶ with E_c = 0, x0 = 0 and box [−2, 2].
    pub fn reference_1d() -> Self {
        let full = MPoly::from_terms(1, &[(vec![4], -1.0), (vec![6], 1.0)]);
        HomogeneousPotential::from_full(1, 2, full, 0.0, vec![0.0], vec![(-2.0, 2.0)]).expect("reference potential")
    }

    pub fn degree(&self) -> u32 {
        2 * self.k
    }

    pub fn v2k_at(&self, y: &[f64]) -> f64 {
        self.v2k.eval(y)
    }

    pub fn v(&self, x: &[f64]) -> f64 {
        self.full.eval(x)
    }

    pub fn grad_v(&self, x: &[f64]) -> Vec<f64> {
        self.full.gradient().iter().map(|g| g.eval(x)).collect()
    }

    pub fn hessian_v(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let g = self.full.gradient();
        g.iter().map(|gi| (0..self.n).map(|j| gi.partial(j).eval(x)).collect()).collect()
    }

    /// Same potential with V₂ₖ (and the matching part of V) multiplied by c.
    pub fn scaled_form(&self, c: f64) -> Self {
        let shifted = self.full.shift(&self.x0);
        let rest = shifted.sub(&shifted.homogeneous_part(2 * self.k));
        let new_shifted = rest.add(&self.v2k.scale(c));
        let neg: Vec<f64> = self.x0.iter().map(|v| -v).collect();
        HomogeneousPotential { v2k: self.v2k.scale(c), full: new_shifted.shift(&neg), ..self.clone() }
    }

    /// Structural invariants: homogeneity of v2k and the Taylor match at x0.
    pub fn check_structure(&self) -> Result<(), GeometryError> {
        let d = 2 * self.k;
        if !self.v2k.is_homogeneous(d) || self.v2k.is_zero() {
            return Err(GeometryError::NotHomogeneous { degree: d });
        }
        let shifted = self.full.shift(&self.x0);
        let resid = shifted.sub(&self.v2k).sub(&MPoly::constant(self.n, self.e_c));
        let scale = self.full.max_abs_coeff().max(self.e_c.abs()).max(1.0);
        for deg in 0..=d {
            let part = resid.homogeneous_part(deg);
            let size = part.max_abs_coeff();
            if size > 1e-10 * scale {
                return Err(GeometryError::TaylorMismatch { degree: deg, size });
            }
        }
        Ok(())
    }
}

/// Sampling density for the admissibility checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibilityOptions {
    /// Points per angle for sphere sampling.
    pub sphere_points: usize,
    /// Points per axis for box-boundary and critical-point sampling.
    pub grid_points: usize,
}

impl Default for AdmissibilityOptions {
    fn default() -> Self {
        AdmissibilityOptions { sphere_points: 360, grid_points: 401 }
    }
}

/// Details of a passed admissibility check.
#[derive(Debug, Clone, PartialEq)]
pub struct Admissibility {
    /// Sampled minimum of −V₂ₖ on the unit sphere (strictly positive).
    pub sphere_min: f64,
    /// Smallest V − (E_c + eps) found on the box boundary (strictly positive).
    pub boundary_margin: f64,
    /// Critical points found in the box, with their values.
    pub critical_points: Vec<(Vec<f64>, f64)>,
}

pub fn is_admissible(p: &HomogeneousPotential, eps: f64) -> bool {
    check_admissible(p, eps, &AdmissibilityOptions::default()).is_ok()
}

/// Checks (a) definiteness, (b) compactness on the box, (c) uniqueness of the critical point.
pub fn check_admissible(p: &HomogeneousPotential, eps: f64, opts: &AdmissibilityOptions) -> Result<Admissibility, GeometryError> {
    assert!(eps > 0.0, "eps must be positive");
    let d = 2 * p.k;
    if !p.v2k.is_homogeneous(d) || p.v2k.is_zero() {
        return Err(GeometryError::NotHomogeneous { degree: d });
    }
    let (sphere_max, _) = sphere_extremum(p.n, opts.sphere_points, |y| p.v2k.eval(y));
    if sphere_max >= 0.0 {
        return Err(GeometryError::NotDefinite { sphere_max });
    }
    let level = p.e_c + eps;
    let mut margin = f64::INFINITY;
    for x in box_boundary_points(&p.search_box, opts.grid_points) {
        let v = p.v(&x);
        if v <= level {
            return Err(GeometryError::NotCompact { point: x, value: v });
        }
        margin = margin.min(v - level);
    }
    let crit = critical_points(p, opts.grid_points);
    let scale: f64 = p.search_box.iter().map(|(a, b)| b - a).fold(0.0, f64::max);
    for (x, v) in &crit {
        let dist = x.iter().zip(&p.x0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        if (v - p.e_c).abs() <= eps && dist > 1e-4 * scale {
            return Err(GeometryError::ExtraCriticalPoint { point: x.clone(), value: *v });
        }
    }
    Ok(Admissibility { sphere_min: -sphere_max, boundary_margin: margin, critical_points: crit })
}

/// Max of f on the unit sphere by angular sampling plus pattern-search refinement.
/// Returns (max value, maximizer).
pub fn sphere_extremum<F: Fn(&[f64]) -> f64>(n: usize, points: usize, f: F) -> (f64, Vec<f64>) {
    if n == 1 {
        let a = f(&[1.0]);
        let b = f(&[-1.0]);
        return if a >= b { (a, vec![1.0]) } else { (b, vec![-1.0]) };
    }
    let m = n - 1;
    let per = if m == 1 { points.max(8) } else { ((points as f64).powf(2.0 / m as f64) as usize).clamp(6, points.max(6)) };
    let mut best = f64::NEG_INFINITY;
    let mut best_ang = vec![0.0; m];
    let mut idx = vec![0usize; m];
    loop {
        let ang: Vec<f64> =
            idx.iter().enumerate().map(|(j, &i)| if j + 1 == m { 2.0 * PI * i as f64 / per as f64 } else { PI * (i as f64 + 0.5) / per as f64 }).collect();
        let v = f(&angles_to_point(&ang));
        if v > best {
            best = v;
            best_ang = ang;
        }
        if !advance(&mut idx, per) {
            break;
        }
    }
    // Local refinement in the angles.
    let mut step = PI / per as f64;
    while step > 1e-10 {
        let mut improved = false;
        for j in 0..m {
            for s in [-1.0, 1.0] {
                let mut trial = best_ang.clone();
                trial[j] += s * step;
                let v = f(&angles_to_point(&trial));
                if v > best {
                    best = v;
                    best_ang = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (best, angles_to_point(&best_ang))
}

// Odometer over a product grid; returns false after the last index.
fn advance(idx: &mut [usize], per: usize) -> bool {
    for i in idx.iter_mut() {
        *i += 1;
        if *i < per {
            return true;
        }
        *i = 0;
    }
    false
}

/// Hyperspherical coordinates (θ₁,…,θ_{n−2}, φ) ↦ unit vector in ℝⁿ.
pub fn angles_to_point(ang: &[f64]) -> Vec<f64> {
    let n = ang.len() + 1;
    let mut x = vec![0.0; n];
    let mut s = 1.0;
    for (i, &a) in ang.iter().enumerate() {
        if i + 1 == ang.len() {
            x[i] = s * a.cos();
            x[i + 1] = s * a.sin();
        } else {
            x[i] = s * a.cos();
            s *= a.sin();
        }
    }
    x
}

fn box_boundary_points(bx: &[(f64, f64)], m: usize) -> Vec<Vec<f64>> {
    let n = bx.len();
    if n == 1 {
        return vec![vec![bx[0].0], vec![bx[0].1]];
    }
    let per = if n == 2 { m } else { ((m as f64).powf(2.0 / (n - 1) as f64) as usize).max(5) };
    let mut pts = Vec::new();
    for face in 0..n {
        for side in [bx[face].0, bx[face].1] {
            let others: Vec<usize> = (0..n).filter(|&j| j != face).collect();
            let mut idx = vec![0usize; n - 1];
            loop {
                let mut x = vec![0.0; n];
                x[face] = side;
                for (t, &j) in others.iter().enumerate() {
                    let (lo, hi) = bx[j];
                    x[j] = lo + (hi - lo) * idx[t] as f64 / (per - 1) as f64;
                }
                pts.push(x);
                if !advance(&mut idx, per) {
                    break;
                }
            }
        }
    }
    pts
}

/// Critical points of V in the search box, located by grid seeding and Newton refinement.
pub fn critical_points(p: &HomogeneousPotential, grid_points: usize) -> Vec<(Vec<f64>, f64)> {
    let n = p.n;
    let grad = p.full.gradient();
    let hess: Vec<Vec<MPoly>> = grad.iter().map(|g| (0..n).map(|j| g.partial(j)).collect()).collect();
    let per = if n == 1 { grid_points } else { ((grid_points as f64).powf(1.0 / n as f64 * 1.5) as usize).clamp(9, grid_points) };
    let grid_x = |idx: &[usize]| -> Vec<f64> {
        idx.iter()
            .enumerate()
            .map(|(j, &i)| {
                let (lo, hi) = p.search_box[j];
                lo + (hi - lo) * i as f64 / (per - 1) as f64
            })
            .collect()
    };
    let gnorm = |x: &[f64]| grad.iter().map(|g| g.eval(x).powi(2)).sum::<f64>();
    let mut found: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut idx = vec![0usize; n];
    let spacing: f64 = p.search_box.iter().map(|(a, b)| (b - a) / (per - 1) as f64).fold(0.0, f64::max);
    loop {
        // seed: local minimum of |∇V|² over the immediate grid neighbours
        let x = grid_x(&idx);
        let g0 = gnorm(&x);
        let mut is_min = true;
        for j in 0..n {
            for s in [-1i64, 1] {
                let ni = idx[j] as i64 + s;
                if ni < 0 || ni >= per as i64 {
                    continue;
                }
                let mut nidx = idx.clone();
                nidx[j] = ni as usize;
                if gnorm(&grid_x(&nidx)) < g0 {
                    is_min = false;
                }
            }
        }
        if is_min {
            if let Some(z) = newton_critical(&grad, &hess, &x, spacing) {
                let inside = z.iter().zip(&p.search_box).all(|(v, (lo, hi))| *v >= *lo && *v <= *hi);
                let dup = found.iter().any(|(y, _)| y.iter().zip(&z).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) < 1e-6);
                if inside && !dup {
                    let v = p.v(&z);
                    found.push((z, v));
                }
            }
        }
        if !advance(&mut idx, per) {
            break;
        }
    }
    found.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(core::cmp::Ordering::Equal));
    found
}

fn newton_critical(grad: &[MPoly], hess: &[Vec<MPoly>], x0: &[f64], spacing: f64) -> Option<Vec<f64>> {
    let n = x0.len();
    let mut x = x0.to_vec();
    for _ in 0..200 {
        let g: Vec<f64> = grad.iter().map(|p| p.eval(&x)).collect();
        let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gn < 1e-13 {
            return Some(x);
        }
        let h: Vec<Vec<f64>> = hess.iter().map(|row| row.iter().map(|p| p.eval(&x)).collect()).collect();
        let step = match solve_dense(&h, &g) {
            Some(s) => s,
            // Degenerate Hessian (e.g. a flat critical point): fall back to gradient descent on |∇V|².
            None => g.iter().map(|v| v * 0.1).collect(),
        };
        let sn = step.iter().map(|v| v * v).sum::<f64>().sqrt();
        let lim = 2.0 * spacing;
        let f = if sn > lim { lim / sn } else { 1.0 };
        for i in 0..n {
            x[i] -= f * step[i];
        }
        if sn < 1e-15 {
            break;
        }
    }
    let gn = grad.iter().map(|p| p.eval(&x).powi(2)).sum::<f64>().sqrt();
    (gn < 1e-8).then_some(x)
}

/// Surface measure of the unit sphere S^{n−1}; S⁰ counts two points.
pub fn sphere_surface(n: usize) -> f64 {
    assert!(n >= 1, "dimension must be positive");
    2.0 * PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularEstimate {
    pub value: f64,
    pub error: f64,
}

/// ∫_{S^{n−1}} |V₂ₖ(η)|^{−n/(2k)} dη with the default tolerance 1e−9 (relative).
pub fn angular_factor(p: &HomogeneousPotential) -> Result<AngularEstimate, GeometryError> {
    angular_factor_tol(p, 1e-9)
}

pub fn angular_factor_tol(p: &HomogeneousPotential, rel_tol: f64) -> Result<AngularEstimate, GeometryError> {
    let e = -(p.n as f64) / (2.0 * p.k as f64);
    let f = |y: &[f64]| {
        let v = p.v2k.eval(y);
        if v >= 0.0 {
            f64::INFINITY
        } else {
            (-v).powf(e)
        }
    };
    match p.n {
        1 => {
            let value = f(&[1.0]) + f(&[-1.0]);
            if !value.is_finite() {
                return Err(GeometryError::NotDefinite { sphere_max: p.v2k.eval(&[1.0]).max(p.v2k.eval(&[-1.0])) });
            }
            Ok(AngularEstimate { value, error: 0.0 })
        }
        2 => {
            let trap = |m: usize| {
                (0..m)
                    .map(|i| {
                        let t = 2.0 * PI * i as f64 / m as f64;
                        f(&[t.cos(), t.sin()])
                    })
                    .sum::<f64>()
                    * 2.0
                    * PI
                    / m as f64
            };
            let mut m = 32;
            let mut prev = trap(m);
            while m <= 1 << 20 {
                m *= 2;
                let cur = trap(m);
                let err = (cur - prev).abs();
                if !cur.is_finite() {
                    return Err(GeometryError::NotDefinite { sphere_max: 0.0 });
                }
                if err <= rel_tol * cur.abs() {
                    return Ok(AngularEstimate { value: cur, error: err });
                }
                prev = cur;
            }
            Err(GeometryError::AngularNotConverged { value: prev, error: f64::NAN })
        }
        n => {
            let mut m = 8;
            let mut prev = product_rule(n, m, &f);
            while m <= 256 {
                m *= 2;
                let cur = product_rule(n, m, &f);
                if !cur.is_finite() {
                    return Err(GeometryError::NotDefinite { sphere_max: 0.0 });
                }
                let err = (cur - prev).abs();
                if err <= rel_tol * cur.abs() {
                    return Ok(AngularEstimate { value: cur, error: err });
                }
                prev = cur;
            }
            Err(GeometryError::AngularNotConverged { value: prev, error: f64::NAN })
        }
    }
}

// Gauss–Legendre in the polar angles (with sin^j weights), trapezoid in the azimuth.
fn product_rule<F: Fn(&[f64]) -> f64>(n: usize, m: usize, f: &F) -> f64 {
    let (gx, gw) = gauss_legendre(m);
    let polar = n - 2;
    let naz = 2 * m;
    let mut idx = vec![0usize; polar];
    let mut total = 0.0;
    loop {
        let mut w = 1.0;
        let mut ang = Vec::with_capacity(n - 1);
        for (j, &i) in idx.iter().enumerate() {
            let th = 0.5 * PI * (gx[i] + 1.0);
            w *= 0.5 * PI * gw[i] * th.sin().powi((n - 2 - j) as i32);
            ang.push(th);
        }
        let mut s = 0.0;
        for a in 0..naz {
            ang.push(2.0 * PI * a as f64 / naz as f64);
            s += f(&angles_to_point(&ang));
            ang.pop();
        }
        total += w * s * 2.0 * PI / naz as f64;
        if polar == 0 || !advance(&mut idx, m) {
            break;
        }
    }
    total
}
