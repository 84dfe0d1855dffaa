//! PES scans, geometry optimization, response properties, transition-state
//! search and excited-state derivative curves.

mod excited;
mod geometry;
mod pes;
mod response;
mod setup;
mod surface;
mod transition;

pub use excited::{excited_derivative_curves, excited_point, labelled_spectrum, ExcitedPoint, ExcitedSetup};
pub use geometry::{geometry_optimize, GeometryOptions, OptimizationTrajectory, StepMethod, TrajectoryStep};
pub use pes::{bond_scan, energy_landscape, pes_point, pes_scan, PesPoint};
pub use response::{response_properties, response_scan, ResponseReport};
pub use setup::{AnsatzKind, System, VqeSetup};
pub use surface::{sector_ground_energy, EnergySurface, ExactSurface, SurfacePoint, VqeSurface};
pub use transition::{
    mode_search, second_derivative_test, transition_state_search, ModeAttempt, ReactionSpec,
    SaddleTest, TransitionState,
};
