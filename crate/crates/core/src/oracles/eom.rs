//! Right-hand sides of the relative equations of motion.
//!
//! Normalized systems use the state ordering (position triple, rate triple),
//! with rates taken with respect to the system's independent variable.

use crate::error::{Error, Result};
use crate::frames::{k_parameter, NondimSpherical};
use crate::linear::{ya_state_at, YaConstants};

use super::ode::{IndependentVariable, OdeSystem};

/// Chief radial state used by the exact curvilinear equations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiefRadial {
    pub r: f64,
    pub r_dot: f64,
    /// Orbital angular rate θ̇c.
    pub theta_dot: f64,
}

/// Time derivatives of (ρ, θ, φ, ρ̇, θ̇, φ̇) under exact Keplerian motion of
/// both spacecraft.
pub fn rhs_exact_curvilinear(rel: &[f64; 6], chief: &ChiefRadial, mu: f64) -> Result<[f64; 6]> {
    let [rho, _theta, phi, rhod, thd, phid] = *rel;
    let ChiefRadial {
        r,
        r_dot,
        theta_dot: thc,
    } = *chief;
    let dist = r + rho;
    if !(dist > 0.0) || !(phi.abs() < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain(format!("r + rho = {dist}, phi = {phi}")));
    }
    let r_dd = r * thc * thc - mu / (r * r);
    let thc_d = -2.0 * r_dot * thc / r;
    let w = thd + thc;
    let (sp, cp) = phi.sin_cos();
    let rho_dd = -r_dd - mu / (dist * dist) + dist * (phid * phid + w * w * cp * cp);
    let th_dd = -thc_d + 2.0 * w * phid * sp / cp - 2.0 * (r_dot + rhod) * w / dist;
    let phi_dd = -2.0 * (r_dot + rhod) * phid / dist - w * w * cp * sp;
    Ok([rhod, thd, phid, rho_dd, th_dd, phi_dd])
}

/// Exact curvilinear dynamics in time, carrying the chief's (r, ṙ, θ̇c) as
/// states 6..9.
#[derive(Clone, Copy, Debug)]
pub struct ExactCurvilinearSystem {
    pub mu: f64,
}

impl OdeSystem for ExactCurvilinearSystem {
    fn dimension(&self) -> usize {
        9
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
        let (r, r_dot, thc) = (y[6], y[7], y[8]);
        let rel: [f64; 6] = y[..6]
            .try_into()
            .expect("state length checked by integrator");
        let d = rhs_exact_curvilinear(
            &rel,
            &ChiefRadial {
                r,
                r_dot,
                theta_dot: thc,
            },
            self.mu,
        )?;
        dy[..6].copy_from_slice(&d);
        dy[6] = r_dot;
        dy[7] = r * thc * thc - self.mu / (r * r);
        dy[8] = -2.0 * r_dot * thc / r;
        Ok(())
    }
}

/// Which terms of the normalized equations to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    /// Linear terms only (Tschauner-Hempel).
    Linear,
    /// Linear plus quadratic terms.
    Quadratic,
}

fn th_linear(y: &[f64; 6], k: f64) -> [f64; 6] {
    let [x, _, z, xp, yp, zp] = *y;
    [xp, yp, zp, 2.0 * yp + 3.0 * x / k, -2.0 * xp, -z]
}

/// Tschauner-Hempel equations in true anomaly. The same system governs the
/// normalized rectilinear and curvilinear states.
pub fn rhs_th_linear(y: &[f64; 6], f: f64, e: f64) -> [f64; 6] {
    th_linear(y, k_parameter(e, f))
}

/// Normalized curvilinear equations to second order in (ρ̃, θ, φ).
pub fn rhs_second_order_curvilinear(y: &[f64; 6], f: f64, e: f64) -> [f64; 6] {
    let k = k_parameter(e, f);
    let mut d = th_linear(y, k);
    let [rho, _, phi, rp, tp, pp] = *y;
    d[3] += -3.0 * rho * rho / k + 2.0 * rho * tp + pp * pp + tp * tp - phi * phi;
    d[4] += -2.0 * rp * tp + 2.0 * pp * phi + 2.0 * rho * rp;
    d[5] += -2.0 * tp * phi - 2.0 * rp * pp;
    d
}

/// Normalized rectilinear equations to second order in (x̃, ỹ, z̃).
pub fn rhs_second_order_cartesian(y: &[f64; 6], f: f64, e: f64) -> [f64; 6] {
    let k = k_parameter(e, f);
    let mut d = th_linear(y, k);
    let [x, yy, z, ..] = *y;
    d[3] += (-3.0 * x * x + 1.5 * (yy * yy + z * z)) / k;
    d[4] += 3.0 * x * yy / k;
    d[5] += 3.0 * x * z / k;
    d
}

/// Normalized curvilinear dynamics with true anomaly as the independent
/// variable.
#[derive(Clone, Copy, Debug)]
pub struct CurvilinearSystem {
    pub e: f64,
    pub truncation: Truncation,
}

/// Normalized rectilinear dynamics with true anomaly as the independent
/// variable.
#[derive(Clone, Copy, Debug)]
pub struct CartesianSystem {
    pub e: f64,
    pub truncation: Truncation,
}

fn six(y: &[f64]) -> [f64; 6] {
    y[..6]
        .try_into()
        .expect("state length checked by integrator")
}

impl OdeSystem for CurvilinearSystem {
    fn dimension(&self) -> usize {
        6
    }
    fn independent_variable(&self) -> IndependentVariable {
        IndependentVariable::TrueAnomaly
    }
    fn rhs(&self, f: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
        let d = match self.truncation {
            Truncation::Linear => rhs_th_linear(&six(y), f, self.e),
            Truncation::Quadratic => rhs_second_order_curvilinear(&six(y), f, self.e),
        };
        dy.copy_from_slice(&d);
        Ok(())
    }
}

impl OdeSystem for CartesianSystem {
    fn dimension(&self) -> usize {
        6
    }
    fn independent_variable(&self) -> IndependentVariable {
        IndependentVariable::TrueAnomaly
    }
    fn rhs(&self, f: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
        let d = match self.truncation {
            Truncation::Linear => rhs_th_linear(&six(y), f, self.e),
            Truncation::Quadratic => rhs_second_order_cartesian(&six(y), f, self.e),
        };
        dy.copy_from_slice(&d);
        Ok(())
    }
}

/// Quadratic terms of the curvilinear equations evaluated on a given
/// first-order state, i.e. the forcing of the second-order perturbation
/// equations.
pub fn second_order_forcing(first: &NondimSpherical, k: f64) -> [f64; 3] {
    let NondimSpherical {
        rho,
        phi,
        rho_p: rp,
        theta_p: tp,
        phi_p: pp,
        ..
    } = *first;
    [
        -3.0 * rho * rho / k + 2.0 * rho * tp + pp * pp + tp * tp - phi * phi,
        -2.0 * rp * tp + 2.0 * pp * phi + 2.0 * rho * rp,
        -2.0 * tp * phi - 2.0 * rp * pp,
    ]
}

/// Linear equations for the second-order correction, forced by the YA
/// solution with constants K. State: (ρ2, θ2, φ2, ρ2′, θ2′, φ2′, J).
#[derive(Clone, Copy, Debug)]
pub struct ForcedPerturbationSystem {
    pub e: f64,
    pub constants: YaConstants,
}

impl OdeSystem for ForcedPerturbationSystem {
    fn dimension(&self) -> usize {
        7
    }
    fn independent_variable(&self) -> IndependentVariable {
        IndependentVariable::TrueAnomaly
    }
    fn rhs(&self, f: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
        let k = k_parameter(self.e, f);
        let first: NondimSpherical = ya_state_at(&self.constants, self.e, f, y[6]);
        let [g1, g2, g3] = second_order_forcing(&first, k);
        let d = th_linear(&six(y), k);
        dy[..6].copy_from_slice(&d);
        dy[3] += g1;
        dy[4] += g2;
        dy[5] += g3;
        dy[6] = 1.0 / (k * k);
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlightlyEccentricVariant {
    /// Uncorrected form, with −4e δr′ cos M in the δθ″ equation.
    Original,
    /// With the corrected −6e δr′ cos M.
    Corrected,
}

/// First-order relative equations expanded to first order in e, with mean
/// anomaly as the independent variable (unit mean motion) and δr scaled by
/// the chief semimajor axis. State: (δr, δθ, δφ, δr′, δθ′, δφ′).
pub fn rhs_slightly_eccentric(
    y: &[f64; 6],
    m: f64,
    e: f64,
    variant: SlightlyEccentricVariant,
) -> [f64; 6] {
    let [dr, _, dphi, drp, dthp, dphip] = *y;
    let (sm, cm) = m.sin_cos();
    let c = match variant {
        SlightlyEccentricVariant::Original => 4.0,
        SlightlyEccentricVariant::Corrected => 6.0,
    };
    [
        drp,
        dthp,
        dphip,
        2.0 * dthp + 3.0 * dr + e * cm * (10.0 * dr + 2.0 * dthp),
        -2.0 * drp + e * sm * (2.0 * dr - 2.0 * dthp) - c * e * drp * cm,
        -dphi - 4.0 * e * dphi * cm - 2.0 * e * dphip * sm,
    ]
}

#[derive(Clone, Copy, Debug)]
pub struct SlightlyEccentricSystem {
    pub e: f64,
    pub variant: SlightlyEccentricVariant,
}

impl OdeSystem for SlightlyEccentricSystem {
    fn dimension(&self) -> usize {
        6
    }
    fn independent_variable(&self) -> IndependentVariable {
        IndependentVariable::MeanAnomaly
    }
    fn rhs(&self, m: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
        dy.copy_from_slice(&rhs_slightly_eccentric(&six(y), m, self.e, self.variant));
        Ok(())
    }
}

/// Inertial two-body motion, state (r, v).
#[derive(Clone, Copy, Debug)]
pub struct TwoBodySystem {
    pub mu: f64,
}

impl OdeSystem for TwoBodySystem {
    fn dimension(&self) -> usize {
        6
    }
    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
        let r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
        if !(r2 > 0.0) {
            return Err(Error::Domain("two-body state at the origin".into()));
        }
        let g = -self.mu / (r2 * r2.sqrt());
        dy[..3].copy_from_slice(&y[3..6]);
        for i in 0..3 {
            dy[3 + i] = g * y[i];
        }
        Ok(())
    }
}
