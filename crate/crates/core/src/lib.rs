//! Exact computations on the pinwheel tiling: substitution, collared
//! prototiles, Perron data, the frequency module and the simplicial
//! approximant complexes with their cohomology.

pub mod apcomplex;
pub mod corona;
pub mod error;
pub mod gaplabel;
pub mod geom;
pub mod linalg;
pub mod par;
pub mod perron;
pub mod rational;
pub mod snf;
pub mod spatial;
pub mod substitution;

pub use error::{Error, Result};
pub use rational::ExactRational;
