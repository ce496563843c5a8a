//! Quaternionic Heisenberg group, the boundary action of Sp(2,1), and
//! sufficient conditions for two Heisenberg translations to generate a free
//! discrete group.

pub mod bounds;
pub mod certifier;
pub mod error;
pub mod fans;
pub mod heisenberg;
pub mod quaternion;
pub mod spgroup;
pub mod tol;

pub use bounds::{BoundReport, Objective, SphereAngles};
pub use certifier::{Certificate, ComplexParams, Condition, CorollaryReport, KleinReport, WordReport};
pub use error::{Error, Result};
pub use fans::{Fan, Strip, StripCheck};
pub use heisenberg::{cygan_distance, CyganSphere, HeisPoint, KoranyiCoords};
pub use quaternion::{Quaternion, UnitQuaternion};
pub use spgroup::{BoundaryPoint, GroupMatrix};
