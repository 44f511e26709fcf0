//! Two-body propagation, anomaly conversions and the truth relative state.
//!
//! Anomalies are kept unwrapped: a mean anomaly of 40 rad maps to an
//! eccentric and a true anomaly near 40 rad, never to a value folded back
//! into one revolution. The sweep error metrics rely on this continuity.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::frames::{ChiefSnapshot, RelStateCartesian};

/// Earth gravitational parameter, km³/s².
pub const MU_EARTH: f64 = 398_600.441_8;
/// Earth equatorial radius, km.
pub const R_EARTH: f64 = 6378.137;

const NEWTON_MAX_ITER: usize = 25;
const BISECTION_MAX_ITER: usize = 200;
const KEPLER_RESIDUAL_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GravContext {
    mu: f64,
}

impl GravContext {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gravitational parameter must be positive, got {mu}"
            )));
        }
        Ok(Self { mu })
    }

    pub fn earth() -> Self {
        Self { mu: MU_EARTH }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

impl Default for GravContext {
    fn default() -> Self {
        Self::earth()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AnomalyKind {
    Mean,
    Eccentric,
    True,
}

/// An anomaly value tagged with its kind, in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Anomaly {
    Mean(f64),
    Eccentric(f64),
    True(f64),
}

impl Anomaly {
    pub fn kind(&self) -> AnomalyKind {
        match self {
            Anomaly::Mean(_) => AnomalyKind::Mean,
            Anomaly::Eccentric(_) => AnomalyKind::Eccentric,
            Anomaly::True(_) => AnomalyKind::True,
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Anomaly::Mean(v) | Anomaly::Eccentric(v) | Anomaly::True(v) => v,
        }
    }

    /// Converts to the requested kind for an orbit of eccentricity `e`.
    pub fn to_kind(self, kind: AnomalyKind, e: f64) -> Result<Anomaly> {
        let eccentric = match self {
            Anomaly::Mean(m) if kind == AnomalyKind::Mean => return Ok(Anomaly::Mean(m)),
            Anomaly::True(f) if kind == AnomalyKind::True => return Ok(Anomaly::True(f)),
            Anomaly::Eccentric(ea) => ea,
            Anomaly::Mean(m) => solve_kepler(m, e)?,
            Anomaly::True(f) => true_to_eccentric(f, e),
        };
        Ok(match kind {
            AnomalyKind::Mean => Anomaly::Mean(eccentric_to_mean(eccentric, e)),
            AnomalyKind::Eccentric => Anomaly::Eccentric(eccentric),
            AnomalyKind::True => Anomaly::True(eccentric_to_true(eccentric, e)),
        })
    }
}

/// Osculating Keplerian elements of one spacecraft.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalElements {
    /// Semimajor axis, km.
    pub a: f64,
    pub e: f64,
    pub i: f64,
    pub raan: f64,
    pub argp: f64,
    pub anomaly: Anomaly,
}

impl ClassicalElements {
    pub fn new(a: f64, e: f64, i: f64, raan: f64, argp: f64, anomaly: Anomaly) -> Result<Self> {
        let el = Self {
            a,
            e,
            i,
            raan,
            argp,
            anomaly,
        };
        el.validate()?;
        Ok(el)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.a,
            self.e,
            self.i,
            self.raan,
            self.argp,
            self.anomaly.value(),
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidElements(format!(
                "non-finite element in {self:?}"
            )));
        }
        if self.a <= 0.0 {
            return Err(Error::InvalidElements(format!(
                "semimajor axis must be positive, got {}",
                self.a
            )));
        }
        if !(0.0..1.0).contains(&self.e) {
            return Err(Error::InvalidElements(format!(
                "eccentricity must lie in [0, 1), got {}",
                self.e
            )));
        }
        if !(0.0..=PI).contains(&self.i) {
            return Err(Error::InvalidElements(format!(
                "inclination must lie in [0, pi], got {}",
                self.i
            )));
        }
        Ok(())
    }

    /// Semi-latus rectum a(1 − e²).
    pub fn semi_latus_rectum(&self) -> f64 {
        self.a * (1.0 - self.e * self.e)
    }

    pub fn mean_motion(&self, ctx: &GravContext) -> f64 {
        (ctx.mu() / self.a.powi(3)).sqrt()
    }

    pub fn period(&self, ctx: &GravContext) -> f64 {
        2.0 * PI / self.mean_motion(ctx)
    }

    pub fn true_anomaly(&self) -> Result<f64> {
        Ok(self.anomaly.to_kind(AnomalyKind::True, self.e)?.value())
    }

    pub fn mean_anomaly(&self) -> Result<f64> {
        Ok(self.anomaly.to_kind(AnomalyKind::Mean, self.e)?.value())
    }

    pub fn eccentric_anomaly(&self) -> Result<f64> {
        Ok(self
            .anomaly
            .to_kind(AnomalyKind::Eccentric, self.e)?
            .value())
    }

    /// Argument of latitude ω + f.
    pub fn true_argument_of_latitude(&self) -> Result<f64> {
        Ok(self.argp + self.true_anomaly()?)
    }

    /// Mean argument of latitude ω + M.
    pub fn mean_argument_of_latitude(&self) -> Result<f64> {
        Ok(self.argp + self.mean_anomaly()?)
    }

    /// Chief quantities needed by the coordinate transforms.
    pub fn snapshot(&self, ctx: &GravContext) -> Result<ChiefSnapshot> {
        ChiefSnapshot::new(
            self.e,
            self.semi_latus_rectum(),
            self.true_anomaly()?,
            ctx.mu(),
        )
    }

    pub fn with_anomaly(&self, anomaly: Anomaly) -> Self {
        Self { anomaly, ..*self }
    }
}

/// Solves Kepler's equation E − e sin E = M for the eccentric anomaly.
///
/// Newton iteration seeded at M + e sin M; if that has not converged after
/// 25 iterations the root is bracketed in [M − e, M + e] and bisected.
pub fn solve_kepler(mean_anomaly: f64, e: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&e) || !mean_anomaly.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "solve_kepler requires 0 <= e < 1 and finite M, got M = {mean_anomaly}, e = {e}"
        )));
    }
    if e == 0.0 {
        return Ok(mean_anomaly);
    }
    let residual = |ea: f64| ea - e * ea.sin() - mean_anomaly;
    let tol = KEPLER_RESIDUAL_TOL;

    let mut ea = mean_anomaly + e * mean_anomaly.sin();
    for _ in 0..NEWTON_MAX_ITER {
        let step = residual(ea) / (1.0 - e * ea.cos());
        ea -= step;
        if step.abs() <= 4.0 * f64::EPSILON * ea.abs().max(1.0) {
            break;
        }
    }
    if ea.is_finite() && residual(ea).abs() < tol {
        return Ok(ea);
    }

    let (mut lo, mut hi) = (mean_anomaly - e, mean_anomaly + e);
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if residual(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 2.0 * f64::EPSILON * mid.abs().max(1.0) {
            break;
        }
    }
    let ea = 0.5 * (lo + hi);
    if residual(ea).abs() < tol {
        Ok(ea)
    } else {
        Err(Error::KeplerNonConvergence {
            mean_anomaly,
            eccentricity: e,
        })
    }
}

fn beta(e: f64) -> f64 {
    e / (1.0 + (1.0 - e * e).sqrt())
}

/// Eccentric anomaly from true anomaly, continuous across revolutions.
pub fn true_to_eccentric(f: f64, e: f64) -> f64 {
    let b = beta(e);
    f - 2.0 * (b * f.sin() / (1.0 + b * f.cos())).atan()
}

/// True anomaly from eccentric anomaly, continuous across revolutions.
pub fn eccentric_to_true(ea: f64, e: f64) -> f64 {
    let b = beta(e);
    ea + 2.0 * (b * ea.sin() / (1.0 - b * ea.cos())).atan()
}

pub fn eccentric_to_mean(ea: f64, e: f64) -> f64 {
    ea - e * ea.sin()
}

pub fn true_to_mean(f: f64, e: f64) -> f64 {
    eccentric_to_mean(true_to_eccentric(f, e), e)
}

pub fn mean_to_true(m: f64, e: f64) -> Result<f64> {
    Ok(eccentric_to_true(solve_kepler(m, e)?, e))
}

/// Re-expresses the anomaly of `elements` in the requested kind.
pub fn anomaly_convert(
    elements: &ClassicalElements,
    kind: AnomalyKind,
) -> Result<ClassicalElements> {
    elements.validate()?;
    Ok(elements.with_anomaly(elements.anomaly.to_kind(kind, elements.e)?))
}

/// Advances the mean anomaly by n·dt; every other element is copied.
/// The result carries the same anomaly kind as the input.
pub fn propagate_elements(
    elements: &ClassicalElements,
    dt: f64,
    ctx: &GravContext,
) -> Result<ClassicalElements> {
    elements.validate()?;
    if dt == 0.0 {
        return Ok(*elements);
    }
    let m = elements.mean_anomaly()? + elements.mean_motion(ctx) * dt;
    let anomaly = Anomaly::Mean(m).to_kind(elements.anomaly.kind(), elements.e)?;
    Ok(elements.with_anomaly(anomaly))
}

/// Position (km) and velocity (km/s) in the inertial frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InertialState {
    pub position: Vector3<f64>,
    pub velocity: Vector3<f64>,
}

impl InertialState {
    pub fn new(position: Vector3<f64>, velocity: Vector3<f64>) -> Result<Self> {
        if !(position.norm() > 0.0) {
            return Err(Error::InvalidParameter(
                "inertial position must be nonzero".into(),
            ));
        }
        Ok(Self { position, velocity })
    }

    /// Rotation taking inertial components to the RTN frame of this state.
    pub fn rtn_rotation(&self) -> Matrix3<f64> {
        let r_hat = self.position.normalize();
        let n_hat = self.position.cross(&self.velocity).normalize();
        let t_hat = n_hat.cross(&r_hat);
        Matrix3::from_rows(&[r_hat.transpose(), t_hat.transpose(), n_hat.transpose()])
    }

    pub fn specific_energy(&self, ctx: &GravContext) -> f64 {
        0.5 * self.velocity.norm_squared() - ctx.mu() / self.position.norm()
    }

    pub fn angular_momentum(&self) -> Vector3<f64> {
        self.position.cross(&self.velocity)
    }
}

fn perifocal_to_inertial(raan: f64, i: f64, argp: f64) -> Matrix3<f64> {
    let (so, co) = raan.sin_cos();
    let (si, ci) = i.sin_cos();
    let (sw, cw) = argp.sin_cos();
    Matrix3::new(
        co * cw - so * sw * ci,
        -co * sw - so * cw * ci,
        so * si,
        so * cw + co * sw * ci,
        -so * sw + co * cw * ci,
        -co * si,
        sw * si,
        cw * si,
        ci,
    )
}

pub fn elements_to_inertial(
    elements: &ClassicalElements,
    ctx: &GravContext,
) -> Result<InertialState> {
    elements.validate()?;
    let e = elements.e;
    let p = elements.semi_latus_rectum();
    let f = elements.true_anomaly()?;
    let (sf, cf) = f.sin_cos();
    let r = p / (1.0 + e * cf);
    let vs = (ctx.mu() / p).sqrt();
    let rot = perifocal_to_inertial(elements.raan, elements.i, elements.argp);
    let position = rot * Vector3::new(r * cf, r * sf, 0.0);
    let velocity = rot * Vector3::new(-vs * sf, vs * (e + cf), 0.0);
    InertialState::new(position, velocity)
}

/// Osculating elements (true anomaly) of an elliptic inertial state.
///
/// For equatorial orbits the node is placed on the reference x-axis, and for
/// circular orbits perigee is placed at the node.
pub fn inertial_to_elements(state: &InertialState, ctx: &GravContext) -> Result<ClassicalElements> {
    let mu = ctx.mu();
    let r = state.position;
    let v = state.velocity;
    let rn = r.norm();
    let h = r.cross(&v);
    let hn = h.norm();
    if !(hn > 0.0) {
        return Err(Error::InvalidElements(
            "rectilinear trajectory has no orbital plane".into(),
        ));
    }
    let energy = 0.5 * v.norm_squared() - mu / rn;
    if energy >= 0.0 {
        return Err(Error::InvalidElements(format!(
            "non-elliptic state, specific energy {energy}"
        )));
    }
    let a = -mu / (2.0 * energy);
    let e_vec = ((v.norm_squared() - mu / rn) * r - r.dot(&v) * v) / mu;
    let e = e_vec.norm();
    let h_hat = h / hn;
    let i = h_hat.xy().norm().atan2(h_hat.z);

    let node = Vector3::new(-h.y, h.x, 0.0);
    let node_hat = if node.norm() > 1e-12 * hn {
        node.normalize()
    } else {
        Vector3::x()
    };
    let raan = node_hat.y.atan2(node_hat.x);
    let in_plane = h_hat.cross(&node_hat);
    let u = r.dot(&in_plane).atan2(r.dot(&node_hat));
    let argp = if e > 1e-14 {
        e_vec.dot(&in_plane).atan2(e_vec.dot(&node_hat))
    } else {
        0.0
    };
    ClassicalElements::new(a, e, i, raan, argp, Anomaly::True(u - argp))
}

/// Exact relative state of `deputy` with respect to `chief`, in the chief's
/// RTN frame. The velocity is the rotating-frame derivative of position.
pub fn truth_relative_state(
    chief: &ClassicalElements,
    deputy: &ClassicalElements,
    ctx: &GravContext,
) -> Result<RelStateCartesian> {
    let c = elements_to_inertial(chief, ctx)?;
    let d = elements_to_inertial(deputy, ctx)?;
    Ok(relative_state_from_inertial(&c, &d))
}

pub fn relative_state_from_inertial(
    chief: &InertialState,
    deputy: &InertialState,
) -> RelStateCartesian {
    let rot = chief.rtn_rotation();
    let dr = rot * (deputy.position - chief.position);
    let dv = rot * (deputy.velocity - chief.velocity);
    let w = chief.angular_momentum().norm() / chief.position.norm_squared();
    RelStateCartesian {
        x: dr.x,
        y: dr.y,
        z: dr.z,
        xdot: dv.x + w * dr.y,
        ydot: dv.y - w * dr.x,
        zdot: dv.z,
    }
}

/// Inverse of [`relative_state_from_inertial`].
pub fn deputy_inertial_from_relative(
    chief: &InertialState,
    rel: &RelStateCartesian,
) -> Result<InertialState> {
    let rot_t = chief.rtn_rotation().transpose();
    let w = chief.angular_momentum().norm() / chief.position.norm_squared();
    let dr = Vector3::new(rel.x, rel.y, rel.z);
    let dv = Vector3::new(rel.xdot - w * rel.y, rel.ydot + w * rel.x, rel.zdot);
    InertialState::new(chief.position + rot_t * dr, chief.velocity + rot_t * dv)
}
