//! Relative-state descriptions and the exact maps between them.
//!
//! Cartesian rates are derivatives taken in the rotating RTN frame.
//! Spherical rates are plain time derivatives of the scalar coordinates
//! (ρ, θ, φ). Normalized states scale lengths by the chief radius and
//! differentiate with respect to the chief's true anomaly.

use crate::error::{Error, Result};

/// 1 + e cos f.
pub fn k_parameter(e: f64, f: f64) -> f64 {
    1.0 + e * f.cos()
}

/// Six-component states that can be flattened as (position triple, rate triple).
pub trait StateVector: Sized + Copy {
    fn to_array(&self) -> [f64; 6];
    fn from_array(a: [f64; 6]) -> Self;

    fn scaled(&self, s: f64) -> Self {
        Self::from_array(self.to_array().map(|v| v * s))
    }
}

macro_rules! state_vector {
    ($ty:ident { $($field:ident),* }) => {
        impl StateVector for $ty {
            fn to_array(&self) -> [f64; 6] {
                [$(self.$field),*]
            }
            fn from_array(a: [f64; 6]) -> Self {
                let [$($field),*] = a;
                Self { $($field),* }
            }
        }
    };
}

/// Dimensional relative state in the chief's RTN frame (km, km/s).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RelStateCartesian {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub xdot: f64,
    pub ydot: f64,
    pub zdot: f64,
}
state_vector!(RelStateCartesian {
    x,
    y,
    z,
    xdot,
    ydot,
    zdot
});

impl RelStateCartesian {
    pub fn position_norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// Dimensional spherical relative state: ρ (km), θ and φ (rad) and their
/// time derivatives.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RelStateSpherical {
    pub rho: f64,
    pub theta: f64,
    pub phi: f64,
    pub rhodot: f64,
    pub thetadot: f64,
    pub phidot: f64,
}
state_vector!(RelStateSpherical {
    rho,
    theta,
    phi,
    rhodot,
    thetadot,
    phidot
});

/// Normalized spherical state: ρ/r, θ, φ and their true-anomaly derivatives.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NondimSpherical {
    pub rho: f64,
    pub theta: f64,
    pub phi: f64,
    pub rho_p: f64,
    pub theta_p: f64,
    pub phi_p: f64,
}
state_vector!(NondimSpherical {
    rho,
    theta,
    phi,
    rho_p,
    theta_p,
    phi_p
});

/// Normalized Cartesian state: δr/r and its true-anomaly derivative.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NondimCartesian {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub x_p: f64,
    pub y_p: f64,
    pub z_p: f64,
}
state_vector!(NondimCartesian {
    x,
    y,
    z,
    x_p,
    y_p,
    z_p
});

/// The chief orbit quantities the transforms depend on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiefSnapshot {
    pub e: f64,
    /// Semi-latus rectum, km.
    pub p: f64,
    /// True anomaly, rad.
    pub f: f64,
    pub mu: f64,
}

impl ChiefSnapshot {
    pub fn new(e: f64, p: f64, f: f64, mu: f64) -> Result<Self> {
        if !(p > 0.0 && mu > 0.0 && (0.0..1.0).contains(&e) && f.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "chief snapshot needs p > 0, mu > 0, 0 <= e < 1 (p = {p}, mu = {mu}, e = {e}, f = {f})"
            )));
        }
        Ok(Self { e, p, f, mu })
    }

    pub fn k(&self) -> f64 {
        k_parameter(self.e, self.f)
    }

    /// Orbit radius p/k.
    pub fn r(&self) -> f64 {
        self.p / self.k()
    }

    /// Radial rate √(μ/p) e sin f.
    pub fn r_dot(&self) -> f64 {
        (self.mu / self.p).sqrt() * self.e * self.f.sin()
    }

    /// Angular rate of the RTN frame, √(μ/p³) k².
    pub fn theta_dot(&self) -> f64 {
        (self.mu / self.p.powi(3)).sqrt() * self.k().powi(2)
    }
}

pub fn spherical_from_cartesian(
    s: &RelStateCartesian,
    chief: &ChiefSnapshot,
) -> Result<RelStateSpherical> {
    let r = chief.r();
    let r_dot = chief.r_dot();
    let rx = r + s.x;
    let planar_sq = rx * rx + s.y * s.y;
    let dist = (planar_sq + s.z * s.z).sqrt();
    if !(dist > 0.0) {
        return Err(Error::Domain(
            "deputy coincides with the central body".into(),
        ));
    }
    if s.z.abs() > dist || planar_sq <= 0.0 {
        return Err(Error::Domain(format!(
            "|z| = {} reaches r + rho = {dist}",
            s.z.abs()
        )));
    }
    // dist − r without cancellation for close deputies
    let rho = (s.x * (2.0 * r + s.x) + s.y * s.y + s.z * s.z) / (dist + r);
    let theta = s.y.atan2(rx);
    let phi = (s.z / dist).asin();
    let rhodot = (rx * (r_dot + s.xdot) + s.y * s.ydot + s.z * s.zdot) / dist - r_dot;
    let thetadot = (rx * s.ydot - s.y * (r_dot + s.xdot)) / planar_sq;
    let phidot =
        (dist * s.zdot - s.z * (r_dot + rhodot)) / (dist * (dist * dist - s.z * s.z).sqrt());
    Ok(RelStateSpherical {
        rho,
        theta,
        phi,
        rhodot,
        thetadot,
        phidot,
    })
}

pub fn cartesian_from_spherical(s: &RelStateSpherical, chief: &ChiefSnapshot) -> RelStateCartesian {
    let r = chief.r();
    let r_dot = chief.r_dot();
    let dist = r + s.rho;
    let dist_dot = r_dot + s.rhodot;
    let (st, ct) = s.theta.sin_cos();
    let (sp, cp) = s.phi.sin_cos();
    // cos φ cos θ − 1, kept accurate for small angles
    let hp = (0.5 * s.phi).sin();
    let ht = (0.5 * s.theta).sin();
    let cc_m1 = -2.0 * (hp * hp * ct + ht * ht);
    RelStateCartesian {
        x: s.rho * cp * ct + r * cc_m1,
        y: dist * cp * st,
        z: dist * sp,
        xdot: s.rhodot * cp * ct + r_dot * cc_m1
            - dist * (s.phidot * sp * ct + s.thetadot * cp * st),
        ydot: dist_dot * cp * st - dist * (s.phidot * sp * st - s.thetadot * cp * ct),
        zdot: dist_dot * sp + dist * s.phidot * cp,
    }
}

pub fn nondim_spherical(s: &RelStateSpherical, chief: &ChiefSnapshot) -> NondimSpherical {
    let ChiefSnapshot { e, p, f, mu } = *chief;
    let k = chief.k();
    let rate = (p.powi(3) / mu).sqrt() / (k * k);
    NondimSpherical {
        rho: s.rho / chief.r(),
        theta: s.theta,
        phi: s.phi,
        rho_p: -(e / p) * s.rho * f.sin() + s.rhodot / k * (p / mu).sqrt(),
        theta_p: s.thetadot * rate,
        phi_p: s.phidot * rate,
    }
}

pub fn dimensional_spherical(s: &NondimSpherical, chief: &ChiefSnapshot) -> RelStateSpherical {
    let ChiefSnapshot { e, p, f, mu } = *chief;
    let k = chief.k();
    let rate = k * k * (mu / p.powi(3)).sqrt();
    RelStateSpherical {
        rho: chief.r() * s.rho,
        theta: s.theta,
        phi: s.phi,
        rhodot: (mu / p).sqrt() * (e * s.rho * f.sin() + k * s.rho_p),
        thetadot: s.theta_p * rate,
        phidot: s.phi_p * rate,
    }
}

pub fn nondim_cartesian(s: &RelStateCartesian, chief: &ChiefSnapshot) -> NondimCartesian {
    let ChiefSnapshot { e, p, f, mu } = *chief;
    let r = chief.r();
    let pos_coef = -(e / p) * f.sin();
    let vel_coef = (p / mu).sqrt() / chief.k();
    NondimCartesian {
        x: s.x / r,
        y: s.y / r,
        z: s.z / r,
        x_p: pos_coef * s.x + vel_coef * s.xdot,
        y_p: pos_coef * s.y + vel_coef * s.ydot,
        z_p: pos_coef * s.z + vel_coef * s.zdot,
    }
}

pub fn dimensional_cartesian(s: &NondimCartesian, chief: &ChiefSnapshot) -> RelStateCartesian {
    let ChiefSnapshot { e, p, f, mu } = *chief;
    let r = chief.r();
    let k = chief.k();
    let vs = (mu / p).sqrt();
    let es = e * f.sin();
    RelStateCartesian {
        x: r * s.x,
        y: r * s.y,
        z: r * s.z,
        xdot: vs * (es * s.x + k * s.x_p),
        ydot: vs * (es * s.y + k * s.y_p),
        zdot: vs * (es * s.z + k * s.z_p),
    }
}

/// A dimensional relative state with an exact map to and from the
/// normalized spherical description.
pub trait DimensionalState: StateVector {
    fn to_spherical(&self, chief: &ChiefSnapshot) -> Result<RelStateSpherical>;
    fn from_spherical(s: &RelStateSpherical, chief: &ChiefSnapshot) -> Self;

    fn to_nondim_spherical(&self, chief: &ChiefSnapshot) -> Result<NondimSpherical> {
        Ok(nondim_spherical(&self.to_spherical(chief)?, chief))
    }

    fn from_nondim_spherical(s: &NondimSpherical, chief: &ChiefSnapshot) -> Self {
        Self::from_spherical(&dimensional_spherical(s, chief), chief)
    }
}

impl DimensionalState for RelStateSpherical {
    fn to_spherical(&self, _chief: &ChiefSnapshot) -> Result<RelStateSpherical> {
        Ok(*self)
    }
    fn from_spherical(s: &RelStateSpherical, _chief: &ChiefSnapshot) -> Self {
        *s
    }
}

impl DimensionalState for RelStateCartesian {
    fn to_spherical(&self, chief: &ChiefSnapshot) -> Result<RelStateSpherical> {
        spherical_from_cartesian(self, chief)
    }
    fn from_spherical(s: &RelStateSpherical, chief: &ChiefSnapshot) -> Self {
        cartesian_from_spherical(s, chief)
    }
}
