//! Scenario files: flat key-value text with section headers.
//!
//! ```text
//! # comment
//! [scenario]
//! kind = step_scattering
//! output = out/step
//!
//! [params]
//! energy = 2.0
//! v0 = 1.0
//! ...
//! ```
//!
//! The schema is strict: unknown sections, unknown keys, duplicate keys and
//! missing required keys are all fatal parse errors. Vectors are written as
//! whitespace-separated components (`k = 1 0 0`), complex numbers as
//! `re im`, quaternions as `z_re z_im zeta_re zeta_im`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use qqm_core::grid::Grid;
use qqm_core::quaternion::Quaternion;
use qqm_core::units::Units;

use crate::CliError;

type Q = Quaternion<f64>;

#[derive(Debug, Clone)]
pub struct Scenario {
    /// Output path prefix; artifacts are `<prefix>_summary.csv` and friends.
    pub output: PathBuf,
    /// Also write the sampled field table where the kind supports it.
    pub emit_field: bool,
    pub kind: ScenarioKind,
}

#[derive(Debug, Clone)]
pub enum ScenarioKind {
    TimePhase(TimePhaseScenario),
    FreeParticle(FreeParticleScenario),
    Separation(SeparationScenario),
    StepScattering(StepScatteringScenario),
    CurrentProfile(CurrentProfileScenario),
}

#[derive(Debug, Clone)]
pub struct TimePhaseScenario {
    pub lambda0: Q,
    pub xi: f64,
    pub energy: f64,
    pub tau0: f64,
    pub units: Units<f64>,
    pub dt: f64,
    pub samples: usize,
}

#[derive(Debug, Clone)]
pub struct WaveParams {
    pub a1: Complex64,
    pub a2: Complex64,
    pub k: [f64; 3],
    pub gamma: [f64; 3],
    pub omega: [f64; 3],
    pub theta: [f64; 3],
    pub gamma0: f64,
    pub omega0: f64,
    pub theta0: f64,
    pub rho: f64,
    pub energy: f64,
    pub units: Units<f64>,
}

#[derive(Debug, Clone)]
pub struct FreeParticleScenario {
    pub wave: WaveParams,
    pub q_weights: [Q; 4],
    /// Mixing angle and offset of the time phase used by the
    /// time-dependent check.
    pub xi: f64,
    pub tau0: f64,
    pub grid: Grid<f64>,
}

#[derive(Debug, Clone)]
pub struct SeparationScenario {
    pub wave: WaveParams,
    pub grid: Grid<f64>,
    /// Amplitude of the sin(x) perturbation for the negative control; 0
    /// disables the control rows.
    pub perturb: f64,
    pub l11_gamma: f64,
    pub l11_omega: f64,
    pub l11_theta0: f64,
    pub l11_slope: f64,
    pub l11_span: f64,
}

#[derive(Debug, Clone)]
pub struct StepScatteringScenario {
    pub energy: f64,
    pub v0: f64,
    pub theta_k: f64,
    pub gamma_perp: [f64; 3],
    pub omega_perp: [f64; 3],
    pub units: Units<f64>,
}

#[derive(Debug, Clone)]
pub struct CurrentProfileScenario {
    pub k: [f64; 3],
    pub theta_steps: usize,
    /// Representative Θ for the j₂ and expectation-value rows.
    pub theta_sample: f64,
    pub units: Units<f64>,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        Scenario::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut sections = split_sections(text)?;

        let mut scenario = sections
            .remove("scenario")
            .ok_or_else(|| CliError::Parse("missing [scenario] section".into()))?;
        let kind_name = scenario.require("kind")?;
        let output = PathBuf::from(scenario.require("output")?);
        let emit_field = scenario.take_bool("emit_field")?.unwrap_or(false);
        scenario.finish()?;

        let grid = sections.remove("grid");
        let params = sections
            .remove("params")
            .unwrap_or_else(|| KeyBag::empty("params"));

        if let Some(stray) = sections.keys().next() {
            return Err(CliError::Parse(format!("unknown section [{stray}]")));
        }

        let needs_grid = matches!(kind_name.as_str(), "free_particle" | "separation");
        if !needs_grid {
            if grid.is_some() {
                return Err(CliError::Parse(format!(
                    "[grid] section not allowed for kind {kind_name}"
                )));
            }
            if emit_field {
                return Err(CliError::Parse(format!(
                    "emit_field not supported for kind {kind_name}"
                )));
            }
        }

        let kind = match kind_name.as_str() {
            "time_phase" => ScenarioKind::TimePhase(TimePhaseScenario::from_params(params)?),
            "free_particle" => ScenarioKind::FreeParticle(FreeParticleScenario::from_params(
                params,
                require_grid(grid)?,
            )?),
            "separation" => ScenarioKind::Separation(SeparationScenario::from_params(
                params,
                require_grid(grid)?,
            )?),
            "step_scattering" => {
                ScenarioKind::StepScattering(StepScatteringScenario::from_params(params)?)
            }
            "current_profile" => {
                ScenarioKind::CurrentProfile(CurrentProfileScenario::from_params(params)?)
            }
            other => return Err(CliError::Parse(format!("unknown scenario kind `{other}`"))),
        };

        Ok(Scenario {
            output,
            emit_field,
            kind,
        })
    }
}

fn require_grid(grid: Option<KeyBag>) -> Result<Grid<f64>, CliError> {
    let mut bag = grid.ok_or_else(|| CliError::Parse("missing [grid] section".into()))?;
    let dims = bag.take_usize_list("dims")?;
    let origin = bag.take_floats("origin")?;
    let spacing = bag.take_floats("spacing")?;
    bag.finish()?;
    if dims.len() != origin.len() || dims.len() != spacing.len() {
        return Err(CliError::Parse(
            "grid dims, origin and spacing must have the same length".into(),
        ));
    }
    Grid::new(&origin, &spacing, &dims).map_err(|e| CliError::Parse(format!("grid: {e}")))
}

fn units_from(bag: &mut KeyBag) -> Result<Units<f64>, CliError> {
    let hbar = bag.take_f64("hbar")?.unwrap_or(1.0);
    let mass = bag.take_f64("mass")?.unwrap_or(1.0);
    if hbar <= 0.0 || mass <= 0.0 {
        return Err(CliError::Parse("hbar and mass must be positive".into()));
    }
    Ok(Units::new(hbar, mass))
}

impl TimePhaseScenario {
    fn from_params(mut bag: KeyBag) -> Result<Self, CliError> {
        let out = TimePhaseScenario {
            lambda0: bag.take_quat("lambda0")?.unwrap_or(Q::one()),
            xi: bag.require_f64("xi")?,
            energy: bag.require_f64("energy")?,
            tau0: bag.require_f64("tau0")?,
            units: units_from(&mut bag)?,
            dt: bag.take_f64("dt")?.unwrap_or(1e-4),
            samples: bag.take_usize("samples")?.unwrap_or(9),
        };
        if out.samples < 3 {
            return Err(CliError::Parse("samples must be at least 3".into()));
        }
        bag.finish()?;
        Ok(out)
    }
}

fn wave_params(bag: &mut KeyBag) -> Result<WaveParams, CliError> {
    let units = units_from(bag)?;
    Ok(WaveParams {
        a1: bag.take_complex("a1")?.unwrap_or(Complex64::new(1.0, 0.0)),
        a2: bag.take_complex("a2")?.unwrap_or(Complex64::new(0.0, 0.0)),
        k: bag.require_vec3("k")?,
        gamma: bag.require_vec3("gamma")?,
        omega: bag.require_vec3("omega")?,
        theta: bag.require_vec3("theta")?,
        gamma0: bag.take_f64("gamma0")?.unwrap_or(0.0),
        omega0: bag.take_f64("omega0")?.unwrap_or(0.0),
        theta0: bag.take_f64("theta0")?.unwrap_or(0.0),
        rho: bag.take_f64("rho")?.unwrap_or(1.0),
        energy: bag.require_f64("energy")?,
        units,
    })
}

impl FreeParticleScenario {
    fn from_params(mut bag: KeyBag, grid: Grid<f64>) -> Result<Self, CliError> {
        let wave = wave_params(&mut bag)?;
        let q_weights = [
            bag.take_quat("q1")?.unwrap_or(Q::one()),
            bag.take_quat("q2")?.unwrap_or(Q::zero()),
            bag.take_quat("q3")?.unwrap_or(Q::zero()),
            bag.take_quat("q4")?.unwrap_or(Q::zero()),
        ];
        let xi = bag.take_f64("xi")?.unwrap_or(0.4);
        let tau0 = bag.take_f64("tau0")?.unwrap_or(0.8);
        bag.finish()?;
        Ok(FreeParticleScenario {
            wave,
            q_weights,
            xi,
            tau0,
            grid,
        })
    }
}

impl SeparationScenario {
    fn from_params(mut bag: KeyBag, grid: Grid<f64>) -> Result<Self, CliError> {
        let wave = wave_params(&mut bag)?;
        let out = SeparationScenario {
            wave,
            grid,
            perturb: bag.take_f64("perturb")?.unwrap_or(0.0),
            l11_gamma: bag.take_f64("l11_gamma")?.unwrap_or(2.0),
            l11_omega: bag.take_f64("l11_omega")?.unwrap_or(1.0),
            l11_theta0: bag.take_f64("l11_theta0")?.unwrap_or(0.3),
            l11_slope: bag.take_f64("l11_slope")?.unwrap_or(1.0),
            l11_span: bag.take_f64("l11_span")?.unwrap_or(5.0),
        };
        bag.finish()?;
        Ok(out)
    }
}

impl StepScatteringScenario {
    fn from_params(mut bag: KeyBag) -> Result<Self, CliError> {
        let out = StepScatteringScenario {
            energy: bag.require_f64("energy")?,
            v0: bag.require_f64("v0")?,
            theta_k: bag.take_f64("theta_k")?.unwrap_or(0.0),
            gamma_perp: bag.take_vec3("gamma_perp")?.unwrap_or([0.0; 3]),
            omega_perp: bag.take_vec3("omega_perp")?.unwrap_or([0.0; 3]),
            units: units_from(&mut bag)?,
        };
        bag.finish()?;
        Ok(out)
    }
}

impl CurrentProfileScenario {
    fn from_params(mut bag: KeyBag) -> Result<Self, CliError> {
        let out = CurrentProfileScenario {
            k: bag.require_vec3("k")?,
            theta_steps: bag.take_usize("theta_steps")?.unwrap_or(33),
            theta_sample: bag.take_f64("theta_sample")?.unwrap_or(0.5),
            units: units_from(&mut bag)?,
        };
        if out.theta_steps < 3 {
            return Err(CliError::Parse("theta_steps must be at least 3".into()));
        }
        bag.finish()?;
        Ok(out)
    }
}

// ---------------------------------------------------------------------
// Low-level text handling.

struct KeyBag {
    section: String,
    entries: BTreeMap<String, String>,
}

fn split_sections(text: &str) -> Result<BTreeMap<String, KeyBag>, CliError> {
    let mut sections: BTreeMap<String, KeyBag> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| CliError::Parse(format!("line {}: malformed section", lineno + 1)))?
                .trim()
                .to_string();
            if sections.contains_key(&name) {
                return Err(CliError::Parse(format!("duplicate section [{name}]")));
            }
            sections.insert(name.clone(), KeyBag::empty(&name));
            current = Some(name);
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Parse(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        let section = current.as_ref().ok_or_else(|| {
            CliError::Parse(format!("line {}: key outside a section", lineno + 1))
        })?;
        let bag = sections.get_mut(section).expect("section exists");
        if bag.entries.insert(key.clone(), value).is_some() {
            return Err(CliError::Parse(format!(
                "duplicate key `{key}` in [{section}]"
            )));
        }
    }
    Ok(sections)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

impl KeyBag {
    fn empty(section: &str) -> Self {
        KeyBag {
            section: section.to_string(),
            entries: BTreeMap::new(),
        }
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key)
    }

    fn require(&mut self, key: &str) -> Result<String, CliError> {
        self.take(key)
            .ok_or_else(|| CliError::Parse(format!("missing key `{key}` in [{}]", self.section)))
    }

    fn finish(self) -> Result<(), CliError> {
        if let Some(key) = self.entries.keys().next() {
            return Err(CliError::Parse(format!(
                "unknown key `{key}` in [{}]",
                self.section
            )));
        }
        Ok(())
    }

    fn parse_floats(&self, key: &str, value: &str) -> Result<Vec<f64>, CliError> {
        value
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| {
                    CliError::Parse(format!(
                        "key `{key}` in [{}]: `{tok}` is not a number",
                        self.section
                    ))
                })
            })
            .collect()
    }

    fn floats_of_len(&self, key: &str, value: &str, n: usize) -> Result<Vec<f64>, CliError> {
        let v = self.parse_floats(key, value)?;
        if v.len() != n {
            return Err(CliError::Parse(format!(
                "key `{key}` in [{}]: expected {n} numbers, got {}",
                self.section,
                v.len()
            )));
        }
        Ok(v)
    }

    fn require_f64(&mut self, key: &str) -> Result<f64, CliError> {
        let value = self.require(key)?;
        Ok(self.floats_of_len(key, &value, 1)?[0])
    }

    fn take_f64(&mut self, key: &str) -> Result<Option<f64>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => Ok(Some(self.floats_of_len(key, &v, 1)?[0])),
        }
    }

    fn take_floats(&mut self, key: &str) -> Result<Vec<f64>, CliError> {
        let value = self.require(key)?;
        self.parse_floats(key, &value)
    }

    fn require_vec3(&mut self, key: &str) -> Result<[f64; 3], CliError> {
        let value = self.require(key)?;
        let v = self.floats_of_len(key, &value, 3)?;
        Ok([v[0], v[1], v[2]])
    }

    fn take_vec3(&mut self, key: &str) -> Result<Option<[f64; 3]>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some(value) => {
                let v = self.floats_of_len(key, &value, 3)?;
                Ok(Some([v[0], v[1], v[2]]))
            }
        }
    }

    fn take_complex(&mut self, key: &str) -> Result<Option<Complex64>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some(value) => {
                let v = self.floats_of_len(key, &value, 2)?;
                Ok(Some(Complex64::new(v[0], v[1])))
            }
        }
    }

    fn take_quat(&mut self, key: &str) -> Result<Option<Q>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some(value) => {
                let v = self.floats_of_len(key, &value, 4)?;
                Ok(Some(Q::from_components(v[0], v[1], v[2], v[3])))
            }
        }
    }

    fn take_usize(&mut self, key: &str) -> Result<Option<usize>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v.parse::<usize>().map(Some).map_err(|_| {
                CliError::Parse(format!(
                    "key `{key}` in [{}]: `{v}` is not a positive integer",
                    self.section
                ))
            }),
        }
    }

    fn take_usize_list(&mut self, key: &str) -> Result<Vec<usize>, CliError> {
        let value = self.require(key)?;
        value
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| {
                    CliError::Parse(format!(
                        "key `{key}` in [{}]: `{tok}` is not a positive integer",
                        self.section
                    ))
                })
            })
            .collect()
    }

    fn take_bool(&mut self, key: &str) -> Result<Option<bool>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => match v.as_str() {
                "true" => Ok(Some(true)),
                "false" => Ok(Some(false)),
                other => Err(CliError::Parse(format!(
                    "key `{key}` in [{}]: `{other}` is not true/false",
                    self.section
                ))),
            },
        }
    }
}
