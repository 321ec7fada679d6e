//! Experiment configuration, read from a TOML file. Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use degentrace::geometry::HomogeneousPotential;
use degentrace::num::mpoly::MPoly;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub out_dir: String,
    pub potential: PotentialConfig,
    pub identities: IdentitiesConfig,
    pub expand: ExpandConfig,
    pub spectral: SpectralConfig,
    pub dynamics: DynamicsConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 20240611,
            out_dir: "out".into(),
            potential: PotentialConfig::default(),
            identities: IdentitiesConfig::default(),
            expand: ExpandConfig::default(),
            spectral: SpectralConfig::default(),
            dynamics: DynamicsConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub exponent: Vec<u32>,
    pub coefficient: f64,
}

/// V as a coefficient table in absolute coordinates, with its critical point and search box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PotentialConfig {
    pub n: usize,
    pub k: u32,
    pub e_c: f64,
    pub x0: Vec<f64>,
    pub search_box: Vec<[f64; 2]>,
    pub terms: Vec<Term>,
}

impl Default for PotentialConfig {
    fn default() -> Self {
        PotentialConfig {
            n: 1,
            k: 2,
            e_c: 0.0,
            x0: vec![0.0],
            search_box: vec![[-2.0, 2.0]],
            terms: vec![Term { exponent: vec![4], coefficient: -1.0 }, Term { exponent: vec![6], coefficient: 1.0 }],
        }
    }
}

impl PotentialConfig {
    pub fn build(&self) -> Result<HomogeneousPotential, CliError> {
        if self.x0.len() != self.n || self.search_box.len() != self.n || self.terms.iter().any(|t| t.exponent.len() != self.n) {
            return Err(CliError::Config("potential: x0, search_box and exponents must have n entries".into()));
        }
        let terms: Vec<(Vec<u32>, f64)> = self.terms.iter().map(|t| (t.exponent.clone(), t.coefficient)).collect();
        let full = MPoly::from_terms(self.n, &terms);
        let boxes = self.search_box.iter().map(|b| (b[0], b[1])).collect();
        Ok(HomogeneousPotential::from_full(self.n, self.k, full, self.e_c, self.x0.clone(), boxes)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ECase {
    pub n: u32,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentitiesConfig {
    /// E_closed vs E_numeric, relative tolerance `e_tol`.
    pub e_cases: Vec<ECase>,
    pub e_tol: f64,
    /// Even n: |E_numeric| below `even_tol`.
    pub even_cases: Vec<ECase>,
    pub even_tol: f64,
    /// Extra seeded E checks per odd n in `random_dimensions`.
    pub random_alpha_checks: usize,
    pub random_dimensions: Vec<u32>,
    /// (n, p) pairs for the s-identity against quadrature.
    pub s_cases: Vec<[u32; 2]>,
    pub s_tol: f64,
    /// (n, p) pairs where the s-identity must be exactly zero.
    pub s_zero_cases: Vec<[u32; 2]>,
    /// (k, l) pairs for the q-identity.
    pub q_cases: Vec<[u32; 2]>,
    pub q_tol: f64,
    pub q_s: f64,
    /// (n, k) pairs for the catalog, l-independence and sub-z_min checks.
    pub residue_pairs: Vec<[u32; 2]>,
    pub residue_tol: f64,
    pub zero_tol: f64,
    /// Test mode: negate E_closed in the record with this name.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inject_sign_fault: Option<String>,
}

impl Default for IdentitiesConfig {
    fn default() -> Self {
        IdentitiesConfig {
            e_cases: vec![ECase { n: 1, alpha: 0.75 }, ECase { n: 1, alpha: 0.9 }, ECase { n: 3, alpha: 2.0 }, ECase { n: 3, alpha: 2.5 }],
            e_tol: 1e-6,
            even_cases: vec![ECase { n: 2, alpha: 1.5 }, ECase { n: 2, alpha: 2.5 }, ECase { n: 4, alpha: 2.5 }, ECase { n: 4, alpha: 4.0 }],
            even_tol: 1e-9,
            random_alpha_checks: 2,
            random_dimensions: vec![1, 3, 5],
            s_cases: vec![[1, 2], [1, 3], [3, 4]],
            s_tol: 1e-8,
            s_zero_cases: vec![[2, 2]],
            q_cases: vec![[2, 1], [3, 1]],
            q_tol: 1e-6,
            q_s: 0.7,
            residue_pairs: vec![[1, 2], [2, 2], [3, 3], [4, 2]],
            residue_tol: 1e-8,
            zero_tol: 1e-10,
            inject_sign_fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProfileConfig {
    /// Bump a(t) on (−t_max, t_max) modulated by e^{i·shift·t}.
    Bump { t_max: f64, shift: f64 },
    /// Σ weight·He_order(v)e^{−v²/2} as â.
    Hermite { terms: Vec<HermiteTerm> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HermiteTerm {
    pub order: usize,
    pub weight: f64,
}

/// Coefficient of r^r q^q in the core polynomial of b.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoreTerm {
    pub r: u32,
    pub q: u32,
    pub c: f64,
}

/// Solve for the coefficient of r^r q^q so that the λ^{−exponent} term vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tune {
    pub r: u32,
    pub q: u32,
    pub exponent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpandCase {
    pub n: u32,
    pub k: u32,
    pub profile: ProfileConfig,
    pub core: Vec<CoreTerm>,
    pub inner: f64,
    pub outer: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tune: Option<Tune>,
    pub exponent_tol: f64,
    /// Relative tolerance of leading coefficient against the fit; unchecked when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficient_tol: Option<f64>,
    /// Residual factor by which one model must beat the other to count as detected.
    pub log_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExpandConfig {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub per_decade: usize,
    pub order: usize,
    pub cases: Vec<ExpandCase>,
}

impl Default for ExpandConfig {
    fn default() -> Self {
        let bump = ProfileConfig::Bump { t_max: 0.5, shift: 0.0 };
        let hermite = |m| ProfileConfig::Hermite { terms: vec![HermiteTerm { order: m, weight: 1.0 }] };
        let flat = vec![CoreTerm { r: 0, q: 0, c: 1.0 }];
        let case = |n, k, profile, core, tune, exponent_tol, coefficient_tol| ExpandCase {
            n,
            k,
            profile,
            core,
            inner: 0.5,
            outer: 1.0,
            tune,
            exponent_tol,
            coefficient_tol,
            log_ratio: 5.0,
        };
        ExpandConfig {
            lambda_min: 1e2,
            lambda_max: 1e4,
            per_decade: 12,
            order: 3,
            cases: vec![
                case(1, 2, bump, flat.clone(), Some(Tune { r: 6, q: 0, exponent: 1.0 }), 0.03, Some(0.03)),
                case(2, 2, hermite(1), flat.clone(), None, 0.1, None),
                case(3, 2, hermite(2), flat.clone(), None, 0.1, None),
                case(3, 3, hermite(1), flat.clone(), None, 0.1, None),
                case(4, 2, hermite(2), flat, None, 0.1, None),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectralConfig {
    pub eps: f64,
    /// T = t_factor × period lower bound, unless `t` is given.
    pub t_factor: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    pub h_min: f64,
    pub h_max: f64,
    pub h_points: usize,
    pub points_per_h: f64,
    pub wall_margin: f64,
    pub wall_action: f64,
    pub boundary_mass_tol: f64,
    pub max_points: usize,
    pub inversion_tol: f64,
    pub exponent_tol: f64,
    pub ratio_range: [f64; 2],
    /// Tolerance of γ/prediction at the smallest h.
    pub small_h_tol: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            eps: 0.05,
            t_factor: 0.8,
            t: None,
            h_min: 1.0 / 400.0,
            h_max: 1.0 / 60.0,
            h_points: 12,
            points_per_h: 16.0,
            wall_margin: 9.0,
            wall_action: 30.0,
            boundary_mass_tol: 1e-10,
            max_points: 400_000,
            inversion_tol: 1e-8,
            exponent_tol: 0.05,
            ratio_range: [0.8, 1.25],
            small_h_tol: 0.05,
        }
    }
}

impl SpectralConfig {
    pub fn h_grid(&self) -> Vec<f64> {
        let m = self.h_points;
        (0..m).map(|i| if m == 1 { self.h_min } else { self.h_min * (self.h_max / self.h_min).powf(i as f64 / (m - 1) as f64) }).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DynamicsConfig {
    pub jet_times: Vec<f64>,
    /// Seeded random unit directions in phase space.
    pub jet_directions: usize,
    pub jet_tol: f64,
    pub middle_tol: f64,
    pub linear_tol: f64,
    pub s2k_times: Vec<f64>,
    pub s2k_radii: Vec<f64>,
    pub s2k_tol: f64,
    /// Shooting horizon as a multiple of the period lower bound.
    pub horizon_factor: f64,
    pub orbit_energies: Vec<f64>,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        DynamicsConfig {
            jet_times: vec![0.1, 0.3, 0.5, 1.0, 2.0],
            jet_directions: 3,
            jet_tol: 1e-6,
            middle_tol: 1e-10,
            linear_tol: 1e-10,
            s2k_times: vec![0.05, 0.1, 0.2],
            s2k_radii: vec![0.1, 0.07, 0.05, 0.035],
            s2k_tol: 1e-4,
            horizon_factor: 0.75,
            orbit_energies: vec![0.02, -0.02],
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical serialization.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.into()));
        let id = &self.identities;
        let s = &self.spectral;
        let d = &self.dynamics;
        let e = &self.expand;
        let tols = [
            id.e_tol,
            id.even_tol,
            id.s_tol,
            id.q_tol,
            id.residue_tol,
            id.zero_tol,
            s.boundary_mass_tol,
            s.inversion_tol,
            s.exponent_tol,
            s.small_h_tol,
            d.jet_tol,
            d.middle_tol,
            d.linear_tol,
            d.s2k_tol,
        ];
        if tols.iter().any(|t| !(*t > 0.0)) || e.cases.iter().any(|c| !(c.exponent_tol > 0.0) || c.coefficient_tol.is_some_and(|t| !(t > 0.0))) {
            return bad("tolerances must be positive");
        }
        if !(s.eps > 0.0) || !(s.t_factor > 0.0) || s.t.is_some_and(|t| !(t > 0.0)) {
            return bad("spectral: eps, t_factor and t must be positive");
        }
        if !(s.h_min > 0.0 && s.h_min <= s.h_max) || s.h_points == 0 {
            return bad("spectral: need 0 < h_min ≤ h_max and a nonempty h grid");
        }
        if !(s.ratio_range[0] < s.ratio_range[1]) {
            return bad("spectral: ratio_range must be increasing");
        }
        if !(e.lambda_min > 0.0 && e.lambda_min < e.lambda_max) || e.per_decade == 0 || e.order == 0 {
            return bad("expand: need 0 < lambda_min < lambda_max, per_decade ≥ 1 and order ≥ 1");
        }
        if d.jet_times.is_empty() || d.jet_directions == 0 || d.s2k_times.is_empty() || d.s2k_radii.len() < 2 {
            return bad("dynamics: grids must be nonempty (at least two radii)");
        }
        if id.e_cases.is_empty() && id.s_cases.is_empty() && id.q_cases.is_empty() && id.residue_pairs.is_empty() {
            return bad("identities: nothing to check");
        }
        Ok(())
    }

    pub fn expand_case(&self, n: u32, k: u32) -> Result<&ExpandCase, CliError> {
        self.expand.cases.iter().find(|c| c.n == n && c.k == k).ok_or_else(|| CliError::Config(format!("no expand case for (n, k) = ({n}, {k})")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips_bit_exactly() {
        let cfg = ExperimentConfig::default();
        let text = cfg.to_toml();
        let back = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_toml(), text);
        assert_eq!(back.spectral.h_max.to_bits(), (1.0f64 / 60.0).to_bits());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ExperimentConfig::parse("seed = 1\ncolour = 3\n").is_err());
        assert!(ExperimentConfig::parse("[spectral]\nepsilon = 0.1\n").is_err());
        let bad_profile = "[[expand.cases]]\nn = 1\nk = 2\ncore = []\ninner = 0.5\nouter = 1.0\nexponent_tol = 0.1\nlog_ratio = 5.0\nprofile = { kind = \"bump\", t_max = 0.5, shift = 0.0, extra = 1 }\n";
        assert!(ExperimentConfig::parse(bad_profile).is_err());
    }

    #[test]
    fn partial_files_fill_defaults() {
        let cfg = ExperimentConfig::parse("seed = 5\n[spectral]\neps = 0.04\n").unwrap();
        assert_eq!(cfg.seed, 5);
        assert_eq!(cfg.spectral.eps, 0.04);
        assert_eq!(cfg.spectral.h_points, 12);

        let cfg = ExperimentConfig::parse("[potential]\nterms = [{ exponent = [4], coefficient = -2.0 }, { exponent = [6], coefficient = 1.0 }]\n").unwrap();
        assert_eq!(cfg.potential.x0, vec![0.0]);
        assert!(cfg.potential.build().is_ok());
    }

    #[test]
    fn invalid_values_are_rejected() {
        assert!(ExperimentConfig::parse("[spectral]\nh_points = 0\n").is_err());
        assert!(ExperimentConfig::parse("[identities]\ne_tol = -1.0\n").is_err());
    }

    #[test]
    fn hash_tracks_content() {
        let a = ExperimentConfig::default();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.seed += 1;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn reference_potential_builds() {
        let p = ExperimentConfig::default().potential.build().unwrap();
        assert_eq!(p.v(&[1.0]), 0.0);
    }

    #[test]
    fn geometric_h_grid() {
        let g = SpectralConfig::default().h_grid();
        assert_eq!(g.len(), 12);
        assert_eq!(g[0], 1.0 / 400.0);
        assert!((g[11] - 1.0 / 60.0).abs() < 1e-15);
    }
}
