//! Scenario construction, model-versus-truth error metrics and parameter
//! sweeps.
//!
//! Every model starts from the exact relative state at the epoch and is
//! scored by the largest RTN position error against Keplerian truth over a
//! uniform time grid.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{
    cartesian_from_spherical, dimensional_cartesian, nondim_cartesian, spherical_from_cartesian,
    NondimCartesian, NondimSpherical, RelStateCartesian, RelStateSpherical, StateVector,
};
use crate::kepler::{
    propagate_elements, truth_relative_state, Anomaly, ClassicalElements, GravContext, R_EARTH,
};
use crate::linear::{cw_propagate, j_from_time, ya_constants_from_state, ya_state_at, YaConstants};
use crate::roe::{elements_from_roe, propagate_roe_relative_state, DriftOrder, Roe};
use crate::second_order::{propagate_circular_qv, SecondOrderSolution};

/// Propagation models that can be scored against truth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelId {
    CwRect,
    CwCurv,
    YaRect,
    YaCurv,
    QvCurvCircular,
    SecondOrderCurv,
    RoeOrder1,
    RoeOrder2,
}

impl ModelId {
    pub const ALL: [ModelId; 8] = [
        ModelId::CwRect,
        ModelId::CwCurv,
        ModelId::YaRect,
        ModelId::YaCurv,
        ModelId::QvCurvCircular,
        ModelId::SecondOrderCurv,
        ModelId::RoeOrder1,
        ModelId::RoeOrder2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ModelId::CwRect => "cw_rect",
            ModelId::CwCurv => "cw_curv",
            ModelId::YaRect => "ya_rect",
            ModelId::YaCurv => "ya_curv",
            ModelId::QvCurvCircular => "qv_curv_circular",
            ModelId::SecondOrderCurv => "second_order_curv",
            ModelId::RoeOrder1 => "roe_order1",
            ModelId::RoeOrder2 => "roe_order2",
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelId::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown model '{s}'")))
    }
}

/// Parses a comma-separated model list.
pub fn parse_model_list(s: &str) -> Result<Vec<ModelId>> {
    let models = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(ModelId::from_str)
        .collect::<Result<Vec<_>>>()?;
    if models.is_empty() {
        return Err(Error::Config("model list is empty".into()));
    }
    Ok(models)
}

/// One benchmark scenario. Angles are held in radians; the JSON form uses
/// degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub scenario_id: String,
    /// Perigee altitude, km.
    pub h_p: f64,
    pub i: f64,
    pub raan: f64,
    pub argp: f64,
    /// Chief true anomaly at the epoch.
    pub f0: f64,
    pub e: f64,
    /// Relative orbital elements scaled by the chief semimajor axis, km.
    pub a_droe: [f64; 6],
    pub n_orbits: u32,
    pub samples_per_orbit: u32,
    pub models: Vec<ModelId>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioFile::default().into()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ScenarioFile {
    scenario_id: String,
    h_p: f64,
    i: f64,
    raan: f64,
    argp: f64,
    f0: f64,
    e: f64,
    a_droe: [f64; 6],
    n_orbits: u32,
    samples_per_orbit: u32,
    models: Vec<ModelId>,
}

impl Default for ScenarioFile {
    fn default() -> Self {
        Self {
            scenario_id: "default".into(),
            h_p: 750.0,
            i: 98.0,
            raan: 30.0,
            argp: 30.0,
            f0: 0.0,
            e: 0.0,
            a_droe: [0.0, 0.0, 0.0, 2.0, 0.0, 2.0],
            n_orbits: 10,
            samples_per_orbit: 1000,
            models: ModelId::ALL.to_vec(),
        }
    }
}

impl From<ScenarioFile> for ScenarioConfig {
    fn from(f: ScenarioFile) -> Self {
        let r = f64::to_radians;
        Self {
            scenario_id: f.scenario_id,
            h_p: f.h_p,
            i: r(f.i),
            raan: r(f.raan),
            argp: r(f.argp),
            f0: r(f.f0),
            e: f.e,
            a_droe: f.a_droe,
            n_orbits: f.n_orbits,
            samples_per_orbit: f.samples_per_orbit,
            models: f.models,
        }
    }
}

impl From<&ScenarioConfig> for ScenarioFile {
    fn from(c: &ScenarioConfig) -> Self {
        let d = f64::to_degrees;
        Self {
            scenario_id: c.scenario_id.clone(),
            h_p: c.h_p,
            i: d(c.i),
            raan: d(c.raan),
            argp: d(c.argp),
            f0: d(c.f0),
            e: c.e,
            a_droe: c.a_droe,
            n_orbits: c.n_orbits,
            samples_per_orbit: c.samples_per_orbit,
            models: c.models.clone(),
        }
    }
}

impl ScenarioConfig {
    /// Parses the JSON form (angles in degrees). Missing keys take the
    /// default scenario's values; unknown keys are rejected.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: ScenarioFile =
            serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        let cfg = ScenarioConfig::from(file);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let mut s = String::new();
        std::fs::File::open(path)
            .and_then(|mut f| f.read_to_string(&mut s))
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&s)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&ScenarioFile::from(self)).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.h_p > 0.0) {
            return bad(format!("h_p must be positive, got {}", self.h_p));
        }
        if !(0.0..1.0).contains(&self.e) {
            return bad(format!("e must lie in [0, 1), got {}", self.e));
        }
        if !(0.0..=std::f64::consts::PI).contains(&self.i) {
            return bad(format!(
                "i must lie in [0, 180] deg, got {}",
                self.i.to_degrees()
            ));
        }
        if ![self.raan, self.argp, self.f0]
            .iter()
            .chain(self.a_droe.iter())
            .all(|v| v.is_finite())
        {
            return bad("angles and a_droe must be finite".into());
        }
        if self.n_orbits < 1 {
            return bad("n_orbits must be at least 1".into());
        }
        if self.samples_per_orbit < 10 {
            return bad(format!(
                "samples_per_orbit must be at least 10, got {}",
                self.samples_per_orbit
            ));
        }
        if self.models.is_empty() {
            return bad("model list is empty".into());
        }
        Ok(())
    }

    /// Semimajor axis holding the perigee altitude fixed.
    pub fn semimajor_axis(&self) -> f64 {
        (R_EARTH + self.h_p) / (1.0 - self.e)
    }
}

/// A built scenario: chief and deputy at the epoch plus the sample grid.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub ctx: GravContext,
    pub chief: ClassicalElements,
    pub deputy: ClassicalElements,
    pub roe: Roe,
    /// Sample times, s, from 0 to n_orbits periods inclusive.
    pub times: Vec<f64>,
}

pub fn build_scenario(config: &ScenarioConfig) -> Result<Scenario> {
    config.validate()?;
    let ctx = GravContext::earth();
    let a = config.semimajor_axis();
    let chief = ClassicalElements::new(
        a,
        config.e,
        config.i,
        config.raan,
        config.argp,
        Anomaly::True(config.f0),
    )?;
    let roe = Roe::from_scaled(config.a_droe, a);
    let deputy = elements_from_roe(&chief, &roe)?;
    let count = config.n_orbits as usize * config.samples_per_orbit as usize;
    let span = config.n_orbits as f64 * chief.period(&ctx);
    let times = (0..=count)
        .map(|k| span * k as f64 / count as f64)
        .collect();
    Ok(Scenario {
        config: config.clone(),
        ctx,
        chief,
        deputy,
        roe,
        times,
    })
}

impl Scenario {
    pub fn chief_at(&self, t: f64) -> Result<ClassicalElements> {
        propagate_elements(&self.chief, t, &self.ctx)
    }

    pub fn truth_at(&self, t: f64) -> Result<RelStateCartesian> {
        let c = self.chief_at(t)?;
        let d = propagate_elements(&self.deputy, t, &self.ctx)?;
        truth_relative_state(&c, &d, &self.ctx)
    }

    pub fn initial_state(&self) -> Result<RelStateCartesian> {
        self.truth_at(0.0)
    }
}

/// A model initialized on a scenario's epoch state.
#[derive(Clone, Debug)]
enum Prepared {
    CwRect {
        x0: [f64; 6],
        n: f64,
    },
    CwCurv {
        x0: [f64; 6],
        n: f64,
        a: f64,
    },
    Qv {
        nd0: NondimSpherical,
        n: f64,
        a: f64,
    },
    YaRect {
        k: YaConstants,
    },
    YaCurv {
        k: YaConstants,
    },
    SecondOrder {
        sol: SecondOrderSolution,
    },
    Roe {
        order: DriftOrder,
    },
}

/// Model state with the epoch data it needs.
#[derive(Clone, Debug)]
pub struct PreparedModel<'a> {
    id: ModelId,
    scenario: &'a Scenario,
    inner: Prepared,
}

/// Curvilinear state scaled to lengths: (ρ, aθ, aφ) and their rates.
fn curvilinear_lengths(s: &RelStateSpherical, a: f64) -> [f64; 6] {
    [
        s.rho,
        a * s.theta,
        a * s.phi,
        s.rhodot,
        a * s.thetadot,
        a * s.phidot,
    ]
}

impl<'a> PreparedModel<'a> {
    pub fn new(id: ModelId, scenario: &'a Scenario) -> Result<Self> {
        let ctx = &scenario.ctx;
        let chief = &scenario.chief;
        let snap0 = chief.snapshot(ctx)?;
        let rel0 = scenario.initial_state()?;
        let n = chief.mean_motion(ctx);
        let a = chief.a;
        let inner = match id {
            ModelId::CwRect => Prepared::CwRect {
                x0: rel0.to_array(),
                n,
            },
            ModelId::CwCurv => {
                let s = spherical_from_cartesian(&rel0, &snap0)?;
                Prepared::CwCurv {
                    x0: curvilinear_lengths(&s, a),
                    n,
                    a,
                }
            }
            ModelId::QvCurvCircular => {
                let s = spherical_from_cartesian(&rel0, &snap0)?;
                let nd0 = NondimSpherical {
                    rho: s.rho / a,
                    theta: s.theta,
                    phi: s.phi,
                    rho_p: s.rhodot / (a * n),
                    theta_p: s.thetadot / n,
                    phi_p: s.phidot / n,
                };
                Prepared::Qv { nd0, n, a }
            }
            ModelId::YaRect => {
                let nd0 = nondim_cartesian(&rel0, &snap0);
                Prepared::YaRect {
                    k: ya_constants_from_state(&nd0, snap0.e, snap0.f)?,
                }
            }
            ModelId::YaCurv => {
                let nd0 = crate::frames::nondim_spherical(
                    &spherical_from_cartesian(&rel0, &snap0)?,
                    &snap0,
                );
                Prepared::YaCurv {
                    k: ya_constants_from_state(&nd0, snap0.e, snap0.f)?,
                }
            }
            ModelId::SecondOrderCurv => {
                let nd0 = crate::frames::nondim_spherical(
                    &spherical_from_cartesian(&rel0, &snap0)?,
                    &snap0,
                );
                Prepared::SecondOrder {
                    sol: SecondOrderSolution::new(&nd0, snap0.e, snap0.f)?,
                }
            }
            ModelId::RoeOrder1 => Prepared::Roe {
                order: DriftOrder::First,
            },
            ModelId::RoeOrder2 => Prepared::Roe {
                order: DriftOrder::Second,
            },
        };
        Ok(Self {
            id,
            scenario,
            inner,
        })
    }

    pub fn id(&self) -> ModelId {
        self.id
    }

    /// Relative state predicted at time `t` (s after the epoch). Models that
    /// only describe positions well still return their implied rates.
    pub fn state_at(&self, t: f64) -> Result<RelStateCartesian> {
        self.state_at_inner(t).map_err(|source| Error::Model {
            model: self.id.to_string(),
            time: t,
            source: Box::new(source),
        })
    }

    fn state_at_inner(&self, t: f64) -> Result<RelStateCartesian> {
        let sc = self.scenario;
        let ctx = &sc.ctx;
        let chief_t = sc.chief_at(t)?;
        let snap = chief_t.snapshot(ctx)?;
        let from_curvilinear = |x: [f64; 6], a: f64| {
            let s = RelStateSpherical {
                rho: x[0],
                theta: x[1] / a,
                phi: x[2] / a,
                rhodot: x[3],
                thetadot: x[4] / a,
                phidot: x[5] / a,
            };
            cartesian_from_spherical(&s, &snap)
        };
        let j = || j_from_time(ctx.mu(), sc.chief.semi_latus_rectum(), t);
        Ok(match &self.inner {
            Prepared::CwRect { x0, n } => RelStateCartesian::from_array(cw_propagate(x0, *n, t)),
            Prepared::CwCurv { x0, n, a } => from_curvilinear(cw_propagate(x0, *n, t), *a),
            Prepared::Qv { nd0, n, a } => {
                let s = propagate_circular_qv(nd0, *n, t)?;
                let x = [
                    s.rho * a,
                    s.theta * a,
                    s.phi * a,
                    s.rho_p * a * n,
                    s.theta_p * a * n,
                    s.phi_p * a * n,
                ];
                from_curvilinear(x, *a)
            }
            Prepared::YaRect { k } => {
                let nd: NondimCartesian = ya_state_at(k, snap.e, snap.f, j());
                dimensional_cartesian(&nd, &snap)
            }
            Prepared::YaCurv { k } => {
                let nd: NondimSpherical = ya_state_at(k, snap.e, snap.f, j());
                cartesian_from_spherical(&crate::frames::dimensional_spherical(&nd, &snap), &snap)
            }
            Prepared::SecondOrder { sol } => {
                let nd = sol.evaluate_with_j(snap.f, j());
                cartesian_from_spherical(&crate::frames::dimensional_spherical(&nd, &snap), &snap)
            }
            Prepared::Roe { order } => {
                propagate_roe_relative_state(&sc.chief, &sc.roe, t, *order, ctx)?
            }
        })
    }
}

/// Maximum position error of one model over a scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub scenario_id: String,
    pub model: ModelId,
    #[serde(rename = "sweep_param_name")]
    pub sweep_param: String,
    pub sweep_value: f64,
    pub e: f64,
    pub adlambda_km: f64,
    pub max_err_km: f64,
    pub t_max_s: f64,
}

fn position_distance(a: &RelStateCartesian, b: &RelStateCartesian) -> f64 {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2) + (a.z - b.z).powi(2)).sqrt()
}

/// Truth states on the scenario grid.
pub fn truth_series(scenario: &Scenario) -> Result<Vec<RelStateCartesian>> {
    scenario
        .times
        .iter()
        .map(|&t| scenario.truth_at(t))
        .collect()
}

/// (max error km, time of max s) of `model` against precomputed truth.
fn max_error_against(
    model: &PreparedModel,
    scenario: &Scenario,
    truth: &[RelStateCartesian],
) -> Result<(f64, f64)> {
    let mut best = (0.0, 0.0);
    for (&t, tr) in scenario.times.iter().zip(truth) {
        let err = position_distance(&model.state_at(t)?, tr);
        if !err.is_finite() {
            return Err(Error::Model {
                model: model.id().to_string(),
                time: t,
                source: Box::new(Error::Domain("non-finite position".into())),
            });
        }
        if err > best.0 {
            best = (err, t);
        }
    }
    Ok(best)
}

/// Scores each model on one scenario. `sweep` labels the records.
pub fn evaluate_models(
    scenario: &Scenario,
    models: &[ModelId],
    sweep: (&str, f64),
) -> Result<Vec<ErrorRecord>> {
    let truth = truth_series(scenario)?;
    models
        .iter()
        .map(|&id| {
            let prepared = PreparedModel::new(id, scenario).map_err(|source| Error::Model {
                model: id.to_string(),
                time: 0.0,
                source: Box::new(source),
            })?;
            let (max_err_km, t_max_s) = max_error_against(&prepared, scenario, &truth)?;
            Ok(ErrorRecord {
                scenario_id: scenario.config.scenario_id.clone(),
                model: id,
                sweep_param: sweep.0.to_string(),
                sweep_value: sweep.1,
                e: scenario.config.e,
                adlambda_km: scenario.config.a_droe[1],
                max_err_km,
                t_max_s,
            })
        })
        .collect()
}

pub fn max_position_error(model: ModelId, scenario: &Scenario) -> Result<ErrorRecord> {
    Ok(evaluate_models(scenario, &[model], ("none", 0.0))?.remove(0))
}

fn run_sweep(
    base: &ScenarioConfig,
    values: &[f64],
    models: &[ModelId],
    name: &str,
    apply: impl Fn(&mut ScenarioConfig, f64) + Sync,
) -> Result<Vec<ErrorRecord>> {
    if values.is_empty() {
        return Err(Error::Config(format!(
            "no values given for the {name} sweep"
        )));
    }
    let chunks = values
        .par_iter()
        .map(|&v| {
            let mut cfg = base.clone();
            apply(&mut cfg, v);
            let scenario = build_scenario(&cfg)?;
            evaluate_models(&scenario, models, (name, v))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut records: Vec<ErrorRecord> = chunks.into_iter().flatten().collect();
    records.sort_by(|a, b| {
        a.model
            .cmp(&b.model)
            .then(a.sweep_value.total_cmp(&b.sweep_value))
    });
    Ok(records)
}

pub fn sweep_eccentricity(
    base: &ScenarioConfig,
    values: &[f64],
    models: &[ModelId],
) -> Result<Vec<ErrorRecord>> {
    run_sweep(base, values, models, "e", |c, v| c.e = v)
}

/// Sweeps the scaled relative mean longitude a·δλ (km).
pub fn sweep_separation(
    base: &ScenarioConfig,
    values: &[f64],
    models: &[ModelId],
) -> Result<Vec<ErrorRecord>> {
    run_sweep(base, values, models, "adlambda_km", |c, v| c.a_droe[1] = v)
}

/// Sweeps the scaled semimajor-axis offset a·δa (km).
pub fn sweep_delta_a(
    base: &ScenarioConfig,
    values: &[f64],
    models: &[ModelId],
) -> Result<Vec<ErrorRecord>> {
    run_sweep(base, values, models, "ada_km", |c, v| c.a_droe[0] = v)
}

/// `count` logarithmically spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (l, h) = (lo.ln(), hi.ln());
            let mut v: Vec<f64> = (0..count)
                .map(|k| (l + (h - l) * k as f64 / (count - 1) as f64).exp())
                .collect();
            v[0] = lo;
            v[count - 1] = hi;
            v
        }
    }
}

pub const CSV_COLUMNS: [&str; 8] = [
    "scenario_id",
    "model",
    "sweep_param_name",
    "sweep_value",
    "e",
    "adlambda_km",
    "max_err_km",
    "t_max_s",
];

/// Writes records as CSV with one header row. Floats use the shortest
/// representation that parses back to the same value.
pub fn emit_csv<W: Write>(records: &[ErrorRecord], out: W) -> Result<()> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in records {
        w.write_record([
            r.scenario_id.clone(),
            r.model.to_string(),
            r.sweep_param.clone(),
            r.sweep_value.to_string(),
            r.e.to_string(),
            r.adlambda_km.to_string(),
            r.max_err_km.to_string(),
            r.t_max_s.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<ErrorRecord>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_COLUMNS {
        return Err(Error::Config(format!("unexpected CSV header {header:?}")));
    }
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

/// One row of a propagated time series.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesRow {
    pub model: ModelId,
    pub t_s: f64,
    pub position_km: [f64; 3],
    pub truth_km: [f64; 3],
    pub err_km: f64,
}

/// Model and truth positions on the scenario grid.
pub fn propagate_series(scenario: &Scenario, models: &[ModelId]) -> Result<Vec<SeriesRow>> {
    let truth = truth_series(scenario)?;
    let mut rows = Vec::with_capacity(models.len() * truth.len());
    for &id in models {
        let m = PreparedModel::new(id, scenario)?;
        for (&t, tr) in scenario.times.iter().zip(&truth) {
            let s = m.state_at(t)?;
            rows.push(SeriesRow {
                model: id,
                t_s: t,
                position_km: [s.x, s.y, s.z],
                truth_km: [tr.x, tr.y, tr.z],
                err_km: position_distance(&s, tr),
            });
        }
    }
    Ok(rows)
}

pub fn emit_series_csv<W: Write>(scenario_id: &str, rows: &[SeriesRow], out: W) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "scenario_id",
        "model",
        "t_s",
        "x_km",
        "y_km",
        "z_km",
        "truth_x_km",
        "truth_y_km",
        "truth_z_km",
        "err_km",
    ])?;
    for r in rows {
        let mut rec = vec![
            scenario_id.to_string(),
            r.model.to_string(),
            r.t_s.to_string(),
        ];
        rec.extend(
            r.position_km
                .iter()
                .chain(&r.truth_km)
                .map(|v| v.to_string()),
        );
        rec.push(r.err_km.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(e: f64) -> ScenarioConfig {
        ScenarioConfig {
            e,
            n_orbits: 1,
            samples_per_orbit: 50,
            ..Default::default()
        }
    }

    #[test]
    fn default_semimajor_axis() {
        assert!((ScenarioConfig::default().semimajor_axis() - 7128.137).abs() < 1e-9);
        assert!((quick(0.5).semimajor_axis() - 14256.274).abs() < 1e-9);
    }

    #[test]
    fn zero_roe_deputy_is_chief() {
        let cfg = ScenarioConfig {
            a_droe: [0.0; 6],
            ..quick(0.2)
        };
        let sc = build_scenario(&cfg).unwrap();
        assert!(sc
            .initial_state()
            .unwrap()
            .to_array()
            .iter()
            .all(|v| v.abs() < 1e-9));
        assert_eq!(sc.times.len(), 51);
    }

    #[test]
    fn every_model_is_exact_at_epoch() {
        let sc = build_scenario(&quick(0.1)).unwrap();
        let truth = sc.initial_state().unwrap();
        for id in ModelId::ALL {
            let m = PreparedModel::new(id, &sc).unwrap();
            let d = position_distance(&m.state_at(0.0).unwrap(), &truth);
            assert!(d < 1e-9, "{id}: {d}");
        }
    }

    #[test]
    fn model_names_round_trip() {
        for id in ModelId::ALL {
            assert_eq!(id.name().parse::<ModelId>().unwrap(), id);
        }
        assert!("ya".parse::<ModelId>().is_err());
        assert_eq!(
            parse_model_list("ya_curv, roe_order2").unwrap(),
            vec![ModelId::YaCurv, ModelId::RoeOrder2]
        );
    }

    #[test]
    fn json_angles_are_degrees() {
        let cfg = ScenarioConfig::from_json_str(r#"{"i": 90.0, "e": 0.1, "models": ["ya_curv"]}"#)
            .unwrap();
        assert!((cfg.i - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert_eq!(cfg.models, vec![ModelId::YaCurv]);
        assert!(ScenarioConfig::from_json_str(r#"{"incl": 90.0}"#)
            .unwrap_err()
            .is_config());
        assert!(ScenarioConfig::from_json_str(r#"{"e": 1.5}"#)
            .unwrap_err()
            .is_config());
        let back = ScenarioConfig::from_json_str(&cfg.to_json_string()).unwrap();
        assert!((back.i - cfg.i).abs() < 1e-15);
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-4, 0.9, 5);
        assert_eq!(g.len(), 5);
        assert_eq!((g[0], g[4]), (1e-4, 0.9));
    }
}
