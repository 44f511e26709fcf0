//! Reference dynamics for checking the analytic solutions: equations of
//! motion in several truncations and a high-order adaptive integrator.

pub mod eom;
pub mod ode;

pub use eom::{
    rhs_exact_curvilinear, rhs_second_order_cartesian, rhs_second_order_curvilinear,
    rhs_slightly_eccentric, rhs_th_linear, CartesianSystem, ChiefRadial, CurvilinearSystem,
    ExactCurvilinearSystem, ForcedPerturbationSystem, SlightlyEccentricSystem,
    SlightlyEccentricVariant, Truncation, TwoBodySystem,
};
pub use ode::{integrate, IndependentVariable, IntegratorSpec, OdeSystem, Trajectory};
