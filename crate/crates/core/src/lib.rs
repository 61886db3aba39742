//! Knot Floer homology (hat flavour, GF(2)) of the dual knot in positive
//! rational surgery on a knot in a homology sphere, computed from explicit
//! mapping cones built out of a finite model of the full knot complex.

pub mod cfk;
pub mod dcone;
pub mod error;
pub mod fcomplex;
pub mod gf2;
pub mod invariants;
pub mod surgery;

pub use cfk::{builtin, parse_cfk, staircase, KnotComplex};
pub use error::Error;
pub use fcomplex::{Complex, Label};
pub use invariants::TestDomain;
pub use surgery::{build_cone, ConeSpec, SurgeryCoefficient, TruncationParams};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
