//! Orlik–Solomon bi-complexes of bi-arrangements of hyperplanes, computed
//! exactly over the rationals.

pub mod arrangement;
pub mod bicomplex;
pub mod blowup;
pub mod exactness;
pub mod linalg;
pub mod mask;
pub mod os_algebra;
pub mod projective;
pub mod stratification;
pub mod tame;

pub use arrangement::{BiArrangement, Circuit, Coloring, LinearForm, StratumPoset};
pub use linalg::{Rational, RationalMatrix};
pub use stratification::{Color, Stratification};
