//! Exact-arithmetic engine for mini-walls of large-volume Bridgeland stability
//! conditions on surfaces, classical walls in the ample cone, and the resulting
//! moduli classification.
//!
//! All quantities are `BigRational`; floating point appears only in display helpers.

pub mod charge;
pub mod classical;
pub mod error;
pub mod lattice;
pub mod miniwalls;
pub mod moduli;
pub mod oracle;
pub mod rational;

pub use charge::{
    central_charge, eb2_sides, heart_admissible, imag_cross, phase_compare, slope_mu, CharVec, ChargeQuadratic,
    DisplayPhase, NumericalClass, Shadow, Slope, StabilityParams,
};
pub use classical::{
    dual_wall_equivalence, omega_on_wall, walls_through_region, xi_admissible, RegionWalls, Segment, WallXi,
};
pub use error::{EngineError, Result};
pub use lattice::{ClassVec, LatticeModel, Preset};
pub use miniwalls::{
    chamber_decomposition, destabilizers_at, enumerate_candidates, find_mini_walls, large_volume_threshold,
    wall_denominator_bound, wall_of_pair, CandidateShadow, ChamberCell, FilterLevel, Interval, MiniWall,
    SearchBounds, Threshold,
};
pub use moduli::{classify_moduli, dual_type, uhlenbeck_strata, ModuliClass, ModuliKind, Stratum, TorsionConvention};
pub use oracle::{crosscheck_walls, imag_pair_polynomial, scan_sign_changes, CrosscheckReport, ScanReport};
pub use rational::{parse_rational, Rational};
