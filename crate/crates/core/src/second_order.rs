//! Second-order solution of the curvilinear relative equations on an
//! eccentric chief orbit.
//!
//! The solution is the YA first-order solution plus a quadratic correction
//! in the integration constants K. The correction has zero initial value and
//! zero initial rate, so the combined solution is exact at the epoch. Rates
//! of the quadratic part are obtained by forward-mode differentiation of the
//! position formulas (dual numbers, with dJ/df = 1/k²), which is exact to
//! round-off.

use num_dual::{Dual64, DualNum};

use crate::error::Result;
use crate::frames::{k_parameter, ChiefSnapshot, DimensionalState, NondimSpherical, StateVector};
use crate::kepler::{propagate_elements, ClassicalElements, GravContext};
use crate::linear::{
    check_eccentricity, j_from_time, j_integral, ya_constants_from_state, ya_state_at, YaConstants,
};

/// The nine K-pair contributions to one of the coefficients c_ρj, c_ρs, c_ρc.
/// Each field already contains its K product.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PairTerms {
    pub k11: f64,
    pub k12: f64,
    pub k13: f64,
    pub k22: f64,
    pub k23: f64,
    pub k33: f64,
    pub k55: f64,
    pub k56: f64,
    pub k66: f64,
}

impl PairTerms {
    pub fn sum(&self) -> f64 {
        self.k11
            + self.k12
            + self.k13
            + self.k22
            + self.k23
            + self.k33
            + self.k55
            + self.k56
            + self.k66
    }
}

/// Coefficients of the quadratic correction fixed by the zero initial
/// conditions.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QuadCoeffs {
    pub c_rho_j: f64,
    pub c_rho_s: f64,
    pub c_rho_c: f64,
    /// First integral of the θ equation: 2θ′ρ̃ − φ² + ρ̃² at the epoch.
    pub c_theta1: f64,
}

struct Epoch {
    e: f64,
    w: f64,
    s0: f64,
    c0: f64,
    k0: f64,
    s2: f64,
    c2: f64,
}

impl Epoch {
    fn new(e: f64, f0: f64) -> Self {
        let (s0, c0) = f0.sin_cos();
        let (s2, c2) = (2.0 * f0).sin_cos();
        Epoch {
            e,
            w: 1.0 - e * e,
            s0,
            c0,
            k0: k_parameter(e, f0),
            s2,
            c2,
        }
    }
}

pub fn c_rho_j_terms(k: &YaConstants, e: f64, f0: f64) -> PairTerms {
    let [k1, k2, k3, _, k5, k6] = k.0;
    let Epoch {
        e,
        w,
        s0,
        c0,
        k0,
        s2,
        c2,
    } = Epoch::new(e, f0);
    let k0sq = k0 * k0;
    PairTerms {
        k11: 0.5 * k1 * k1 * (1.0 - 3.0 * k0 * (1.0 + 2.0 * k0) / w),
        k12: -k1 * k2 * (3.0 + 7.0 * k0) / w * k0sq * s0,
        k13: k1 * k3 * (2.0 * e - (3.0 + 7.0 * k0) * c0) / w * k0sq,
        k22: k2 * k2 * (k0 - 2.0 * (1.0 + 2.0 * k0) * s0 * s0) / w * k0sq * k0,
        k23: -2.0 * k2 * k3 * (1.0 + 2.0 * k0) / w * k0sq * k0 * s2,
        k33: k3 * k3 * (e * e + k0sq - 2.0 * k0 * (1.0 + 2.0 * k0) * c0 * c0) / w * k0sq,
        k55: k5 * k5 * k0sq / w * c2,
        k56: -2.0 * k5 * k6 * k0sq / w * s2,
        k66: -k6 * k6 * k0sq / w * c2,
    }
}

pub fn c_rho_s_terms(k: &YaConstants, e: f64, f0: f64) -> PairTerms {
    let [k1, k2, k3, _, k5, k6] = k.0;
    let Epoch {
        e,
        w,
        s0,
        c0,
        k0,
        s2,
        c2,
    } = Epoch::new(e, f0);
    let k0sq = k0 * k0;
    PairTerms {
        k11: 0.75 * k1 * k1 * (3.0 * k0 + 2.0 * k0sq + e * e) / (k0 * w) * s0,
        k12: k1 * k2 * (6.0 - 3.0 * k0 + (10.0 + 7.0 * k0) * s0 * s0) / (2.0 * w) * k0,
        k13: k1 * k3 * (e * (k0 - 5.0) + (10.0 + 7.0 * k0) * k0 * c0) / (2.0 * w) * s0,
        k22: k2 * k2 * (9.0 + k0 - 2.0 * (3.0 + 2.0 * k0) * c0 * c0) / (2.0 * w) * k0sq * s0,
        k23: k2
            * k3
            * (e * k0 * (k0 - 2.0) + (1.0 - k0 + 10.0 * k0sq + 2.0 * k0sq * k0) * c0
                - 2.0 * k0sq * (3.0 + 2.0 * k0) * c0.powi(3))
            / w,
        k33: k3
            * k3
            * (-2.0 - e * e * (k0 - 1.0) + 2.0 * k0 - 5.0 * k0sq
                + k0sq * k0
                + 2.0 * k0sq * (3.0 + 2.0 * k0) * c0 * c0)
            / (2.0 * w)
            * s0,
        k55: -k5 * k5 * c2 / (2.0 * w) * (1.0 + k0) * s0,
        k56: k5 * k6 * s2 / w * (1.0 + k0) * s0,
        k66: k6 * k6 * c2 / (2.0 * w) * (1.0 + k0) * s0,
    }
}

pub fn c_rho_c_terms(k: &YaConstants, e: f64, f0: f64) -> PairTerms {
    let [k1, k2, k3, _, k5, k6] = k.0;
    let Epoch {
        e,
        w,
        s0,
        c0,
        k0,
        s2,
        c2,
    } = Epoch::new(e, f0);
    let k0sq = k0 * k0;
    let g = e + (1.0 + k0) * c0;
    PairTerms {
        k11: 0.75 * k1 * k1 * ((3.0 + 2.0 * k0) * c0 + 3.0 * e) / w,
        k12: k1 * k2 * ((10.0 + 7.0 * k0) * c0 + 10.0 * e) / (2.0 * w) * k0 * s0,
        k13: k1 * k3 * (2.5 - (10.0 + 7.0 * k0) / (2.0 * w) * k0 * s0 * s0 + 7.5 / w * k0sq),
        k22: -k2
            * k2
            * (e.powi(3)
                + 2.0 * (3.0 + 2.0 * k0) * k0sq * c0.powi(3)
                + 2.0 * e * (1.0 - 3.0 * k0sq)
                + (1.0 + k0 - 11.0 * k0sq + 3.0 * k0sq * k0) * c0)
            / (2.0 * w),
        k23: 2.0 * k2 * k3 * (w - 3.0 * k0 * (1.0 - k0) + k0 * (3.0 + 2.0 * k0) * c0 * c0) / w
            * k0
            * s0,
        k33: k3
            * k3
            * (e * k0 * (4.0 - 5.0 * k0)
                + (-1.0 + 3.0 * k0 - 7.0 * k0sq + 5.0 * k0sq * k0) * c0
                + 2.0 * (3.0 + 2.0 * k0) * k0sq * c0.powi(3))
            / (2.0 * w),
        k55: -k5 * k5 * g / (2.0 * w) * c2,
        k56: k5 * k6 * g / w * s2,
        k66: k6 * k6 * g / (2.0 * w) * c2,
    }
}

pub fn quad_coeffs(k: &YaConstants, e: f64, f0: f64) -> Result<QuadCoeffs> {
    check_eccentricity(e)?;
    let x0: NondimSpherical = ya_state_at(k, e, f0, 0.0);
    Ok(QuadCoeffs {
        c_rho_j: c_rho_j_terms(k, e, f0).sum(),
        c_rho_s: c_rho_s_terms(k, e, f0).sum(),
        c_rho_c: c_rho_c_terms(k, e, f0).sum(),
        c_theta1: 2.0 * x0.theta_p * x0.rho - x0.phi * x0.phi + x0.rho * x0.rho,
    })
}

/// Quadratic parts of (ρ̃, θ, φ), generic so the same formulas yield
/// values (f64) or values with f-derivatives (dual numbers).
fn quadratic_positions<D: DualNum<f64> + Copy>(
    kc: &YaConstants,
    q: &QuadCoeffs,
    e: f64,
    f0: f64,
    f: D,
    j: D,
) -> [D; 3] {
    let [k1, k2, k3, _, k5, k6] = kc.0;
    let Epoch { w, s0, c0, k0, .. } = Epoch::new(e, f0);
    let (s, c) = f.sin_cos();
    let k = c * e + 1.0;
    let kk = k * k;
    let kkk = kk * k;
    let one = D::from(1.0);

    // ρ̃, line by line
    let rho = (one - k * j * s * (1.5 * e)) * q.c_rho_j
        + k * s * q.c_rho_s
        + k * c * q.c_rho_c
        + (kkk * j * j * c * (9.0 / 8.0 * e) + 0.25) * (k1 * k1)
        - kkk * j * (c * (k1 * k2) - s * (k1 * k3)) * 1.5
        + ((s * s * (-0.5 * e * e) + (k - 1.0) * 1.5 + 1.0 / w) * c * c
            + c * (e * (1.0 + e * e) / (2.0 * w)))
            * (k2 * k2)
        + (kk * e - (k + 1.0) * c) * k * s * (k2 * k3 / w)
        + k * (-k - kk + kkk + 3.0 - (k + 1.0) * (c * c + e * e)) * (k3 * k3 / (2.0 * w));

    // θ
    let g = |s: D, c: D, k: D| ((c + 2.0 * e) / (2.0 * w) + k * (k + 1.0) * c) * s;
    let g0 = ((c0 + 2.0 * e) / (2.0 * w) + k0 * (1.0 + k0) * c0) * s0;
    let h = |c: D, k: D| k * k + k * k / w - (k * 2.0 + k * k * 2.0 + 1.0) * c * c;
    let h0 = k0 * k0 + k0 * k0 / w - (1.0 + 2.0 * k0 + 2.0 * k0 * k0) * c0 * c0;
    let sin2 = s * c * 2.0;
    let theta = ((k + 1.0) * c - (1.0 + k0) * c0) * (q.c_rho_s - k1 * k2)
        + kk * j * (1.5 * (k1 * k1 - k1 * k3 * e - q.c_rho_j))
        + ((k + 1.0) * s - (1.0 + k0) * s0)
            * (k1 * k3 - k2 * k2 * e.powi(3) / (2.0 * w) - q.c_rho_c)
        - kkk * j * j * s * (2.25 * e * k1 * k1)
        + kkk * j * (s * (k1 * k2) + c * (k1 * k3)) * 3.0
        + (g(s, c, k) - g0) * (k3 * k3 - k2 * k2)
        + (h(c, k) - h0) * (k2 * k3)
        + (s - s0) * (k3 * k3 * e)
        + (sin2 - (2.0 * f0).sin()) * (0.25 * (k6 * k6 - k5 * k5))
        + (s * s - s0 * s0) * (k5 * k6);

    // φ
    let sin_df = s * c0 - c * s0;
    let ck = (k + 1.0) * c - (1.0 + k0) * c0;
    let phi = kk * j * (s * (k1 * k6) - c * (k1 * k5)) * 1.5
        + sin_df * (1.5 * (k1 * k5 * c0 - k1 * k6 * s0))
        + sin_df * (2.0 * ((k2 * k5 - k3 * k6) * c0 - (k2 * k6 + k3 * k5) * s0) * k0 * s0)
        + ck * c * (k2 * k5)
        - ck * s * (k2 * k6 + k3 * k5)
        + ((k + 1.0) * s * s - c * (e * s0 * s0) - s * (2.0 * s0)) * (k3 * k6);

    [rho, theta, phi]
}

/// Second-order solution for one initial state, ready to be evaluated at
/// any true anomaly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecondOrderSolution {
    constants: YaConstants,
    coeffs: QuadCoeffs,
    e: f64,
    f0: f64,
}

impl SecondOrderSolution {
    pub fn new(state0: &NondimSpherical, e: f64, f0: f64) -> Result<Self> {
        let constants = ya_constants_from_state(state0, e, f0)?;
        Self::from_constants(constants, e, f0)
    }

    pub fn from_constants(constants: YaConstants, e: f64, f0: f64) -> Result<Self> {
        let coeffs = quad_coeffs(&constants, e, f0)?;
        Ok(Self {
            constants,
            coeffs,
            e,
            f0,
        })
    }

    pub fn constants(&self) -> &YaConstants {
        &self.constants
    }

    pub fn coeffs(&self) -> &QuadCoeffs {
        &self.coeffs
    }

    pub fn eccentricity(&self) -> f64 {
        self.e
    }

    pub fn epoch_anomaly(&self) -> f64 {
        self.f0
    }

    /// The YA part alone.
    pub fn first_order(&self, f: f64, j: f64) -> NondimSpherical {
        ya_state_at(&self.constants, self.e, f, j)
    }

    /// The quadratic correction and its true-anomaly derivatives.
    pub fn quadratic_part(&self, f: f64, j: f64) -> NondimSpherical {
        let jp = 1.0 / k_parameter(self.e, f).powi(2);
        let [r, t, p] = quadratic_positions(
            &self.constants,
            &self.coeffs,
            self.e,
            self.f0,
            Dual64::new(f, 1.0),
            Dual64::new(j, jp),
        );
        NondimSpherical {
            rho: r.re,
            theta: t.re,
            phi: p.re,
            rho_p: r.eps,
            theta_p: t.eps,
            phi_p: p.eps,
        }
    }

    /// Positions of the quadratic correction only, without derivatives.
    pub fn quadratic_positions(&self, f: f64, j: f64) -> [f64; 3] {
        quadratic_positions(&self.constants, &self.coeffs, self.e, self.f0, f, j)
    }

    /// Full solution with an externally supplied J (for instance from
    /// elapsed time).
    pub fn evaluate_with_j(&self, f: f64, j: f64) -> NondimSpherical {
        let a = self.first_order(f, j).to_array();
        let b = self.quadratic_part(f, j).to_array();
        NondimSpherical::from_array(std::array::from_fn(|i| a[i] + b[i]))
    }

    /// Full solution at true anomaly `f`, unwrapped relative to the epoch.
    pub fn evaluate(&self, f: f64) -> NondimSpherical {
        self.evaluate_with_j(f, j_integral(self.e, self.f0, f))
    }
}

pub fn propagate_second_order(
    state0: &NondimSpherical,
    e: f64,
    f0: f64,
    f: f64,
) -> Result<NondimSpherical> {
    Ok(SecondOrderSolution::new(state0, e, f0)?.evaluate(f))
}

fn qv_positions<D: DualNum<f64> + Copy>(kc: &YaConstants, t: D) -> [D; 3] {
    let [k1, k2, k3, k4, k5, k6] = kc.0;
    let (s, c) = t.sin_cos();
    let (s2, c2) = (t * 2.0).sin_cos();
    let rho = s * k2 + c * k3 - t * c * (1.5 * k1 * k2)
        + t * s * (1.5 * k1 * k3)
        + (c2 - 1.0) * (0.5 * (k2 * k2 - k3 * k3))
        - s2 * (k2 * k3)
        + (c - 1.0)
            * (3.75 * k1 * k1 + 10.0 * k1 * k3 - 2.0 * k2 * k2 + 5.0 * k3 * k3 - k5 * k5 + k6 * k6)
        + s * (1.5 * k1 * k2 + 2.0 * k2 * k3)
        + k1;
    let theta = c * (2.0 * k2) - s * (2.0 * k3) - t * (1.5 * k1)
        + t * (7.5 * (k1 * k1 + 2.0 * k1 * k3 + k3 * k3) - 1.5 * (k2 * k2 + k5 * k5 - k6 * k6))
        + t * s * (3.0 * k1 * k2)
        + t * c * (3.0 * k1 * k3)
        + (c - 1.0) * (k1 * k2 + 4.0 * k2 * k3)
        + s * (-7.5 * k1 * k1 - 18.0 * k1 * k3 + 4.0 * k2 * k2 - 10.0 * k3 * k3 + 2.0 * k5 * k5
            - 2.0 * k6 * k6)
        + s2 * (0.25 * (5.0 * k3 * k3 - 5.0 * k2 * k2 + k6 * k6 - k5 * k5))
        - (c2 - 1.0) * (0.5 * (5.0 * k2 * k3 + k5 * k6))
        + k4;
    let phi = s * k5 + c * k6 + t * s * (1.5 * k1 * k6) - t * c * (1.5 * k1 * k5)
        + s * (1.5 * k1 * k5 + 2.0 * k2 * k6 + 2.0 * k3 * k5)
        - c * (2.0 * k2 * k5)
        - s2 * (k2 * k6 + k3 * k5)
        + c2 * (k2 * k5 - k3 * k6)
        + (k2 * k5 + k3 * k6);
    [rho, theta, phi]
}

/// Quadratic-Volterra solution for a circular chief, the e → 0 limit of the
/// second-order solution. Time is measured from the epoch; `state0` is
/// normalized with derivatives taken with respect to n·t. The returned
/// state uses the same normalization.
pub fn propagate_circular_qv(state0: &NondimSpherical, n: f64, t: f64) -> Result<NondimSpherical> {
    let k = ya_constants_from_state(state0, 0.0, 0.0)?;
    let [r, th, p] = qv_positions(&k, Dual64::new(n * t, 1.0));
    Ok(NondimSpherical {
        rho: r.re,
        theta: th.re,
        phi: p.re,
        rho_p: r.eps,
        theta_p: th.eps,
        phi_p: p.eps,
    })
}

/// Dimensional pipeline: normalize at the chief's epoch, evaluate the
/// second-order solution after `dt` seconds of Keplerian chief motion and
/// map back to the same state description.
pub fn propagate_second_order_dimensional<S: DimensionalState>(
    state0: &S,
    chief: &ClassicalElements,
    dt: f64,
    ctx: &GravContext,
) -> Result<S> {
    let snap0 = chief.snapshot(ctx)?;
    let nd0 = state0.to_nondim_spherical(&snap0)?;
    let sol = SecondOrderSolution::new(&nd0, snap0.e, snap0.f)?;
    let chief_t = propagate_elements(chief, dt, ctx)?;
    let f = chief_t.true_anomaly()?;
    let j = j_from_time(ctx.mu(), snap0.p, dt);
    let snap = ChiefSnapshot { f, ..snap0 };
    Ok(S::from_nondim_spherical(&sol.evaluate_with_j(f, j), &snap))
}

/// YA counterpart of [`propagate_second_order_dimensional`], sharing its
/// normalization and chief timing.
pub fn propagate_first_order_dimensional<S: DimensionalState>(
    state0: &S,
    chief: &ClassicalElements,
    dt: f64,
    ctx: &GravContext,
) -> Result<S> {
    let snap0 = chief.snapshot(ctx)?;
    let nd0 = state0.to_nondim_spherical(&snap0)?;
    let k = ya_constants_from_state(&nd0, snap0.e, snap0.f)?;
    let chief_t = propagate_elements(chief, dt, ctx)?;
    let f = chief_t.true_anomaly()?;
    let j = j_from_time(ctx.mu(), snap0.p, dt);
    let snap = ChiefSnapshot { f, ..snap0 };
    Ok(S::from_nondim_spherical(
        &ya_state_at(&k, snap0.e, f, j),
        &snap,
    ))
}
