//! First-order solutions: Yamanaka-Ankersen for eccentric chiefs and
//! Clohessy-Wiltshire for circular ones.
//!
//! The linearized equations have the same form in rectilinear and
//! curvilinear coordinates, so one kernel serves both: a [`NondimCartesian`]
//! state is read as (x̃, ỹ, z̃) and a [`NondimSpherical`] state as (ρ̃, θ, φ).

use nalgebra::{Matrix6, Vector6};

use crate::error::{Error, Result};
use crate::frames::{k_parameter, NondimCartesian, NondimSpherical, StateVector};
use crate::kepler::true_to_mean;

/// Integration constants K1..K6 of the YA solution.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct YaConstants(pub [f64; 6]);

impl YaConstants {
    pub fn k1(&self) -> f64 {
        self.0[0]
    }
    pub fn k2(&self) -> f64 {
        self.0[1]
    }
    pub fn k3(&self) -> f64 {
        self.0[2]
    }
    pub fn k4(&self) -> f64 {
        self.0[3]
    }
    pub fn k5(&self) -> f64 {
        self.0[4]
    }
    pub fn k6(&self) -> f64 {
        self.0[5]
    }
}

/// Normalized states accepted by the YA kernel.
pub trait NondimState: StateVector {}
impl NondimState for NondimSpherical {}
impl NondimState for NondimCartesian {}

pub(crate) fn check_eccentricity(e: f64) -> Result<()> {
    if (0.0..1.0).contains(&e) {
        Ok(())
    } else {
        Err(Error::Singular(format!(
            "eccentricity {e} outside [0, 1); 1 - e^2 denominators vanish"
        )))
    }
}

/// J = ∫ df/k² from f0 to f, evaluated through Kepler's equation as
/// (M(f) − M(f0)) / (1 − e²)^{3/2}. Both anomalies are taken unwrapped.
pub fn j_integral(e: f64, f0: f64, f: f64) -> f64 {
    if e == 0.0 {
        return f - f0;
    }
    (true_to_mean(f, e) - true_to_mean(f0, e)) / (1.0 - e * e).powf(1.5)
}

/// J = √(μ/p³)·(t − t0).
pub fn j_from_time(mu: f64, p: f64, dt: f64) -> f64 {
    (mu / p.powi(3)).sqrt() * dt
}

/// The fundamental matrix mapping K to the state at true anomaly `f`.
pub fn ya_matrix(e: f64, f: f64, j: f64) -> Matrix6<f64> {
    let (s, c) = f.sin_cos();
    let k = k_parameter(e, f);
    let ks_p = c + e * (2.0 * f).cos();
    let kc_p = -(s + e * (2.0 * f).sin());
    #[rustfmt::skip]
    let m = Matrix6::new(
        1.0 - 1.5 * e * k * j * s, k * s, k * c, 0.0, 0.0, 0.0,
        -1.5 * k * k * j, (1.0 + k) * c, -(1.0 + k) * s, 1.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, s, c,
        -1.5 * e * (ks_p * j + s / k), ks_p, kc_p, 0.0, 0.0, 0.0,
        1.5 * (2.0 * e * k * j * s - 1.0), -2.0 * k * s, e - 2.0 * k * c, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, c, -s,
    );
    m
}

/// Inverse of [`ya_matrix`] at the epoch (where J = 0).
pub fn ya_inverse_matrix(e: f64, f0: f64) -> Result<Matrix6<f64>> {
    check_eccentricity(e)?;
    let (s, c) = f0.sin_cos();
    let k = k_parameter(e, f0);
    let w = 1.0 - e * e;
    #[rustfmt::skip]
    let m = Matrix6::new(
        (6.0 * k + 2.0 * e * e - 2.0) / w, 0.0, 0.0, 2.0 * e * k * s / w, 2.0 * k * k / w, 0.0,
        -3.0 * (1.0 + e * e / k) * s / w, 0.0, 0.0, (k * c - 2.0 * e) / w, -(1.0 + k) * s / w, 0.0,
        -3.0 * (e + c) / w, 0.0, 0.0, -k * s / w, -(e + (1.0 + k) * c) / w, 0.0,
        -3.0 * e * (1.0 + 1.0 / k) * s / w, 1.0, 0.0, (e * k * c - 2.0) / w, -e * (1.0 + k) * s / w, 0.0,
        0.0, 0.0, s, 0.0, 0.0, c,
        0.0, 0.0, c, 0.0, 0.0, -s,
    );
    Ok(m)
}

pub fn ya_constants_from_state<S: NondimState>(state0: &S, e: f64, f0: f64) -> Result<YaConstants> {
    let k = ya_inverse_matrix(e, f0)? * Vector6::from(state0.to_array());
    Ok(YaConstants(k.into()))
}

/// State at true anomaly `f` for a given J(f).
pub fn ya_state_at<S: NondimState>(constants: &YaConstants, e: f64, f: f64, j: f64) -> S {
    let x = ya_matrix(e, f, j) * Vector6::from(constants.0);
    S::from_array(x.into())
}

pub fn ya_state_from_constants<S: NondimState>(
    constants: &YaConstants,
    e: f64,
    f0: f64,
    f: f64,
) -> Result<S> {
    check_eccentricity(e)?;
    Ok(ya_state_at(constants, e, f, j_integral(e, f0, f)))
}

/// YA propagation from `f0` to `f`. The coordinate interpretation follows
/// the state type.
pub fn ya_propagate<S: NondimState>(state0: &S, e: f64, f0: f64, f: f64) -> Result<S> {
    let k = ya_constants_from_state(state0, e, f0)?;
    ya_state_from_constants(&k, e, f0, f)
}

/// Clohessy-Wiltshire closed form for state (x, y, z, ẋ, ẏ, ż) with mean
/// motion `n`, after time `t`.
pub fn cw_propagate(state0: &[f64; 6], n: f64, t: f64) -> [f64; 6] {
    let [x0, y0, z0, vx0, vy0, vz0] = *state0;
    let nt = n * t;
    let (s, c) = nt.sin_cos();
    [
        (4.0 - 3.0 * c) * x0 + s / n * vx0 + 2.0 * (1.0 - c) / n * vy0,
        6.0 * (s - nt) * x0 + y0 - 2.0 * (1.0 - c) / n * vx0 + (4.0 * s - 3.0 * nt) / n * vy0,
        c * z0 + s / n * vz0,
        3.0 * n * s * x0 + c * vx0 + 2.0 * s * vy0,
        -6.0 * n * (1.0 - c) * x0 - 2.0 * s * vx0 + (4.0 * c - 3.0) * vy0,
        -n * s * z0 + c * vz0,
    ]
}
