//! Quasi-nonsingular relative orbital elements.
//!
//! The relative mean longitude uses the mean argument of latitude
//! u = M + ω, so that under Keplerian motion it drifts exactly at the
//! mean-motion difference while the other five elements stay fixed.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::frames::RelStateCartesian;
use crate::kepler::{
    propagate_elements, truth_relative_state, Anomaly, ClassicalElements, GravContext,
};

/// (δa, δλ, δex, δey, δix, δiy), dimensionless or rad.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Roe {
    pub da: f64,
    pub dlambda: f64,
    pub dex: f64,
    pub dey: f64,
    pub dix: f64,
    pub diy: f64,
}

impl Roe {
    pub fn from_array(a: [f64; 6]) -> Self {
        let [da, dlambda, dex, dey, dix, diy] = a;
        Self {
            da,
            dlambda,
            dex,
            dey,
            dix,
            diy,
        }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [
            self.da,
            self.dlambda,
            self.dex,
            self.dey,
            self.dix,
            self.diy,
        ]
    }

    /// From the scaled vector a·δα (km) and the chief semimajor axis.
    pub fn from_scaled(scaled_km: [f64; 6], a: f64) -> Self {
        Self::from_array(scaled_km.map(|v| v / a))
    }
}

/// Wraps an angle difference into (−π, π].
fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

fn check_inclination(i: f64) -> Result<f64> {
    let s = i.sin();
    if s.abs() < 1e-12 {
        return Err(Error::Singular(format!(
            "chief inclination {i} makes the inclination-vector ROE undefined"
        )));
    }
    Ok(s)
}

pub fn roe_from_elements(chief: &ClassicalElements, deputy: &ClassicalElements) -> Result<Roe> {
    chief.validate()?;
    deputy.validate()?;
    let sin_i = check_inclination(chief.i)?;
    let d_raan = wrap(deputy.raan - chief.raan);
    let du = wrap(deputy.mean_argument_of_latitude()? - chief.mean_argument_of_latitude()?);
    Ok(Roe {
        da: (deputy.a - chief.a) / chief.a,
        dlambda: du + d_raan * chief.i.cos(),
        dex: deputy.e * deputy.argp.cos() - chief.e * chief.argp.cos(),
        dey: deputy.e * deputy.argp.sin() - chief.e * chief.argp.sin(),
        dix: deputy.i - chief.i,
        diy: d_raan * sin_i,
    })
}

/// Deputy elements for a chief and a ROE vector. The deputy anomaly is
/// returned as a mean anomaly.
pub fn elements_from_roe(chief: &ClassicalElements, roe: &Roe) -> Result<ClassicalElements> {
    chief.validate()?;
    let sin_i = check_inclination(chief.i)?;
    let a = chief.a * (1.0 + roe.da);
    let ex = chief.e * chief.argp.cos() + roe.dex;
    let ey = chief.e * chief.argp.sin() + roe.dey;
    let e = ex.hypot(ey);
    if e >= 1.0 {
        return Err(Error::InvalidElements(format!(
            "relative eccentricity vector gives deputy e = {e}"
        )));
    }
    let argp = if e > 0.0 {
        chief.argp + wrap(ey.atan2(ex) - chief.argp)
    } else {
        chief.argp
    };
    let i = chief.i + roe.dix;
    let d_raan = roe.diy / sin_i;
    let raan = chief.raan + d_raan;
    let u = chief.mean_argument_of_latitude()? + roe.dlambda - d_raan * chief.i.cos();
    ClassicalElements::new(a, e, i, raan, argp, Anomaly::Mean(u - argp))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DriftOrder {
    First,
    Second,
}

/// Advances δλ by the along-track drift, expanded to the requested order
/// in δa; the other elements are unchanged.
pub fn propagate_dlambda(roe0: &Roe, n: f64, t: f64, order: DriftOrder) -> Roe {
    let nt = n * t;
    let da = roe0.da;
    let mut drift = -1.5 * da * nt;
    if order == DriftOrder::Second {
        drift += 15.0 / 8.0 * da * da * nt;
    }
    Roe {
        dlambda: roe0.dlambda + drift,
        ..*roe0
    }
}

/// Relative state obtained by building the deputy's elements and mapping
/// both spacecraft through the exact Keplerian geometry.
pub fn roe_to_relative_state_exact(
    chief: &ClassicalElements,
    roe: &Roe,
    ctx: &GravContext,
) -> Result<RelStateCartesian> {
    let deputy = elements_from_roe(chief, roe)?;
    truth_relative_state(chief, &deputy, ctx)
}

/// ROE propagation model: drift δλ to `dt`, then map exactly at the
/// propagated chief.
pub fn propagate_roe_relative_state(
    chief0: &ClassicalElements,
    roe0: &Roe,
    dt: f64,
    order: DriftOrder,
    ctx: &GravContext,
) -> Result<RelStateCartesian> {
    let chief = propagate_elements(chief0, dt, ctx)?;
    let roe = propagate_dlambda(roe0, chief0.mean_motion(ctx), dt, order);
    roe_to_relative_state_exact(&chief, &roe, ctx)
}
