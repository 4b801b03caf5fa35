//! Config-driven experiments. Each writes its CSV files, snapshots and a
//! `summary.json` into the output directory and returns the summary.
//!
//! Config files are TOML; every key is optional:
//!
//! ```toml
//! experiment = "local_existence"  # picard_contraction | loss_of_smoothness | lemma_check | selfcheck
//! n = 8            # lattice cutoff N
//! nu = 0.1
//! sigma = 1.0
//! dt = 0.01
//! t_final = 0.5
//! delta = 0.5      # loss-of-smoothness parameter, in (0, 1]
//! c1 = 1e-3        # profile constants of ρ_s(n) = C1 / (C2 + |n|^{3+s})
//! c2 = 1.0
//! seed = 1
//! out_dir = "wmhd-out"
//! s_values = [0.0, 1.0, 2.0]   # X^s norms recorded per state
//! svg = false
//!
//! [initial]
//! random_amplitude = 0.01      # random low modes added to v₀, B₀, E₀
//! random_kmax = 2
//! v = [{ mode = [1, 0, 0], component = 1, re = 0.1, im = 0.0 }]
//! e_profile = { component = 0, c1 = 1e-3, c2 = 1.0, pattern = "alternating" }
//! ```
//!
//! plus the `[picard]`, `[loss]`, `[lemma]` and `[selfcheck]` tables
//! described on their settings types.

mod lemma;
mod local;
mod loss;
mod picard;
pub mod selfcheck;
mod svg;

pub use lemma::{run_lemma_check, LemmaSettings};
pub use local::run_local_existence;
pub use loss::{run_loss_of_smoothness, LossSettings};
pub use picard::{run_picard_contraction, PicardSettings};
pub use selfcheck::{run_selfcheck, SelfcheckSettings};

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::{SolverConfig, StateVector};
use crate::spectral::random::random_low_modes;
use crate::spectral::{seed_field_from_profile, DecayProfile, Lattice, Mode, SignPattern, SpectralField};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    #[default]
    LocalExistence,
    PicardContraction,
    LossOfSmoothness,
    LemmaCheck,
    Selfcheck,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::LocalExistence => "local_existence",
            Experiment::PicardContraction => "picard_contraction",
            Experiment::LossOfSmoothness => "loss_of_smoothness",
            Experiment::LemmaCheck => "lemma_check",
            Experiment::Selfcheck => "selfcheck",
        }
    }
}

/// One Fourier coefficient `û_c(n) = re + i·im`; the conjugate at `−n` is
/// set as well.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    pub mode: Mode,
    pub component: usize,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// Power-law seeding of one component of `E₀` with magnitudes `ρ_s(n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileSeed {
    #[serde(default)]
    pub component: usize,
    /// Defaults to `1 + δ/2`.
    #[serde(default)]
    pub s: Option<f64>,
    /// Default to the run's `c1`, `c2`.
    #[serde(default)]
    pub c1: Option<f64>,
    #[serde(default)]
    pub c2: Option<f64>,
    #[serde(default = "alternating")]
    pub pattern: SignPattern,
}

fn alternating() -> SignPattern {
    SignPattern::Alternating
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct InitialData {
    pub v: Vec<ModeSpec>,
    pub b: Vec<ModeSpec>,
    pub e: Vec<ModeSpec>,
    pub random_amplitude: f64,
    pub random_kmax: i64,
    pub e_profile: Option<ProfileSeed>,
}

impl Default for InitialData {
    fn default() -> Self {
        Self {
            v: Vec::new(),
            b: Vec::new(),
            e: Vec::new(),
            random_amplitude: 0.01,
            random_kmax: 2,
            e_profile: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub n: usize,
    pub nu: f64,
    pub sigma: f64,
    pub dt: f64,
    pub t_final: f64,
    pub delta: f64,
    pub c1: f64,
    pub c2: f64,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub s_values: Vec<f64>,
    pub svg: bool,
    pub initial: InitialData,
    pub picard: PicardSettings,
    pub loss: LossSettings,
    pub lemma: LemmaSettings,
    pub selfcheck: SelfcheckSettings,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::default(),
            n: 8,
            nu: 0.1,
            sigma: 1.0,
            dt: 0.01,
            t_final: 0.5,
            delta: 0.5,
            c1: 1e-3,
            c2: 1.0,
            seed: 1,
            out_dir: PathBuf::from("wmhd-out"),
            s_values: vec![0.0, 1.0, 2.0],
            svg: false,
            initial: InitialData::default(),
            picard: PicardSettings::default(),
            loss: LossSettings::default(),
            lemma: LemmaSettings::default(),
            selfcheck: SelfcheckSettings::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::InvalidConfig(format!("delta must lie in (0, 1], got {}", self.delta)));
        }
        if !(self.c1 > 0.0) || !(self.c2 >= 0.0) {
            return Err(Error::InvalidConfig(format!("need c1 > 0 and c2 ≥ 0, got {} and {}", self.c1, self.c2)));
        }
        self.solver_config().validate()
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::new(self.n)
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            nu: self.nu,
            sigma: self.sigma,
            dt: self.dt,
            t_final: self.t_final,
            picard_iters: self.picard.iterations,
            tol: self.picard.tol,
            t_max: self.picard.t_max,
            ..SolverConfig::default()
        }
    }

    /// `(v₀, B₀, E₀)` before projection.
    pub fn initial_fields(&self) -> Result<(SpectralField, SpectralField, SpectralField)> {
        self.build_initial(true)
    }

    /// The mode lists alone, without random modes or profile seeding.
    pub(crate) fn initial_fields_without_random(&self) -> Result<(SpectralField, SpectralField, SpectralField)> {
        self.build_initial(false)
    }

    fn build_initial(&self, extras: bool) -> Result<(SpectralField, SpectralField, SpectralField)> {
        let lat = self.lattice();
        let init = &self.initial;
        let build = |modes: &[ModeSpec], seed: u64| -> Result<SpectralField> {
            let mut f = if extras && init.random_amplitude > 0.0 {
                random_low_modes(lat, 3, seed, init.random_kmax, init.random_amplitude)
            } else {
                SpectralField::vector(lat)
            };
            for m in modes {
                if m.component > 2 || !lat.contains(m.mode) {
                    return Err(Error::InvalidConfig(format!("mode {:?} component {} is not on the lattice", m.mode, m.component)));
                }
                f.set_pair(m.mode, m.component, Complex64::new(m.re, m.im));
            }
            Ok(f)
        };
        let base = self.seed.wrapping_mul(3);
        let v = build(&init.v, base)?;
        let b = build(&init.b, base + 1)?;
        let mut e = build(&init.e, base + 2)?;
        if let (true, Some(p)) = (extras, &init.e_profile) {
            e += &self.seed_profile(p)?;
        }
        Ok((v, b, e))
    }

    pub(crate) fn seed_profile(&self, p: &ProfileSeed) -> Result<SpectralField> {
        if p.component > 2 {
            return Err(Error::InvalidConfig(format!("profile component {} out of range", p.component)));
        }
        let profile = DecayProfile::new(p.s.unwrap_or(1.0 + 0.5 * self.delta), p.c1.unwrap_or(self.c1), p.c2.unwrap_or(self.c2));
        Ok(seed_field_from_profile(self.lattice(), &profile, p.component, p.pattern))
    }

    pub fn initial_state(&self) -> Result<StateVector> {
        let (v, b, e) = self.initial_fields()?;
        StateVector::from_initial_data(&v, &b, &e)
    }
}

/// One pass/fail line of a summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    pub message: String,
}

impl Check {
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Self::new(name, value <= threshold, value, threshold, format!("{value:.3e} ≤ {threshold:.3e}"))
    }

    pub fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Self::new(name, value >= threshold, value, threshold, format!("{value:.3e} ≥ {threshold:.3e}"))
    }

    pub fn new(name: &str, passed: bool, value: f64, threshold: f64, message: String) -> Self {
        Self {
            name: name.into(),
            passed,
            value,
            threshold,
            message,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub experiment: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub values: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl Summary {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment: experiment.name().into(),
            passed: true,
            checks: Vec::new(),
            values: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn check(&mut self, c: Check) {
        self.passed &= c.passed;
        self.checks.push(c);
    }

    pub fn value(&mut self, key: &str, v: f64) {
        self.values.insert(key.into(), v);
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Fixed-width pass/fail table.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{mark}  {:<28} {}\n", c.name, c.message));
        }
        out
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::write(dir.join("summary.json"), serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}

pub(crate) fn prepare_out_dir(cfg: &RunConfig) -> Result<PathBuf> {
    fs::create_dir_all(&cfg.out_dir)?;
    Ok(cfg.out_dir.clone())
}

/// Runs the experiment named in the config.
pub fn run_experiment(cfg: &RunConfig) -> Result<Summary> {
    match cfg.experiment {
        Experiment::LocalExistence => run_local_existence(cfg),
        Experiment::PicardContraction => run_picard_contraction(cfg),
        Experiment::LossOfSmoothness => run_loss_of_smoothness(cfg),
        Experiment::LemmaCheck => run_lemma_check(cfg),
        Experiment::Selfcheck => run_selfcheck(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_roundtrip_and_defaults() {
        let cfg = RunConfig::from_toml(
            r#"
            experiment = "loss_of_smoothness"
            n = 16
            dt = 0.02
            [initial]
            random_amplitude = 0.0
            v = [{ mode = [1, 0, 0], component = 1, re = 0.1 }]
            e_profile = { component = 0 }
            [loss]
            m_lo = 4
            "#,
        )
        .unwrap();
        assert_eq!(cfg.experiment, Experiment::LossOfSmoothness);
        assert_eq!(cfg.n, 16);
        assert_eq!(cfg.nu, 0.1);
        assert_eq!(cfg.initial.v[0].im, 0.0);
        assert_eq!(cfg.initial.e_profile.as_ref().unwrap().pattern, SignPattern::Alternating);
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_toml(&text).unwrap(), cfg);
        assert!(RunConfig::from_toml("bogus = 1").is_err());
    }

    #[test]
    fn validation() {
        let mut cfg = RunConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.delta = 1.5;
        assert!(cfg.validate().is_err());
        cfg.delta = 0.5;
        cfg.sigma = 2.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn initial_data_recipe() {
        let mut cfg = RunConfig {
            n: 4,
            ..RunConfig::default()
        };
        cfg.initial.random_amplitude = 0.0;
        cfg.initial.b.push(ModeSpec {
            mode: [0, 1, 0],
            component: 0,
            re: 0.5,
            im: 0.25,
        });
        cfg.initial.e_profile = Some(ProfileSeed {
            component: 0,
            s: None,
            c1: None,
            c2: None,
            pattern: SignPattern::Alternating,
        });
        let (v, b, e) = cfg.initial_fields().unwrap();
        assert!(v.is_zero());
        assert_eq!(b.get([0, -1, 0], 0), Complex64::new(0.5, -0.25));
        let rho = DecayProfile::new(1.25, 1e-3, 1.0);
        assert!((e.get([0, 0, 3], 0).re + rho.eval([0, 0, 3])).abs() < 1e-18);
        cfg.initial.v.push(ModeSpec {
            mode: [9, 0, 0],
            component: 0,
            re: 1.0,
            im: 0.0,
        });
        assert!(cfg.initial_fields().is_err());
    }
}
