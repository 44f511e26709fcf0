//! Relative motion of two spacecraft on eccentric Keplerian orbits.
//!
//! The crate centres on a closed-form, second-order solution of the relative
//! equations of motion written in spherical (curvilinear) coordinates, with
//! true anomaly as the independent variable. Around it sit the pieces needed
//! to use and to check that solution:
//!
//! - [`kepler`]: exact two-body propagation and the truth relative state,
//! - [`frames`]: Cartesian/spherical and dimensional/normalized transforms,
//! - [`linear`]: the Yamanaka-Ankersen and Clohessy-Wiltshire solutions,
//! - [`second_order`]: the second-order curvilinear solution and its circular limit,
//! - [`oracles`]: integrable equations of motion and an adaptive DOP853 integrator,
//! - [`roe`]: quasi-nonsingular relative orbital elements,
//! - [`sweep`]: error sweeps against the Keplerian truth and CSV output.
//!
//! Units are km, s and rad unless stated otherwise.
//!
//! ```
//! use relmotion::frames::{nondim_spherical, spherical_from_cartesian};
//! use relmotion::kepler::{propagate_elements, truth_relative_state};
//! use relmotion::{Anomaly, ClassicalElements, GravContext, SecondOrderSolution};
//!
//! # fn main() -> relmotion::Result<()> {
//! let ctx = GravContext::earth();
//! let chief = ClassicalElements::new(7500.0, 0.1, 1.7, 0.5, 0.5, Anomaly::True(0.0))?;
//! let deputy = ClassicalElements { a: 7501.0, ..chief };
//!
//! let snap = chief.snapshot(&ctx)?;
//! let rel = truth_relative_state(&chief, &deputy, &ctx)?;
//! let state0 = nondim_spherical(&spherical_from_cartesian(&rel, &snap)?, &snap);
//!
//! let sol = SecondOrderSolution::new(&state0, snap.e, snap.f)?;
//! let later = propagate_elements(&chief, 3600.0, &ctx)?;
//! let predicted = sol.evaluate(later.true_anomaly()?);
//! assert!(predicted.rho.abs() < 1e-3);
//! # Ok(())
//! # }
//! ```

// `!(x > 0.0)` is used deliberately so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod frames;
pub mod kepler;
pub mod linear;
pub mod oracles;
pub mod roe;
pub mod second_order;
pub mod sweep;

pub use error::{Error, Result};
pub use frames::{
    ChiefSnapshot, NondimCartesian, NondimSpherical, RelStateCartesian, RelStateSpherical,
};
pub use kepler::{Anomaly, AnomalyKind, ClassicalElements, GravContext, InertialState};
pub use linear::YaConstants;
pub use roe::Roe;
pub use second_order::{QuadCoeffs, SecondOrderSolution};
