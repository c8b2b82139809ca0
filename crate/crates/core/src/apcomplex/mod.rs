//! Anderson–Putnam approximant complexes built from subdivided collared
//! supertiles, their cohomology, and the substitution action on it.

pub mod adjacency;
pub mod cellmap;
pub mod cohomology;
pub mod complex;
pub mod subdivide;
pub mod template;
pub mod tilecw;
mod uf;

pub use adjacency::{enumerate_pairs, Adjacency, PairType};
pub use cellmap::{substitution_on_cells, CellMap};
pub use cohomology::{cohomology_of, eventual_rank, induced_on_free_part, CohomologyReport, Degree};
pub use complex::{build_complex, CellComplex, ComplexDump, Templates};
pub use subdivide::{punctuation, subdivide, TileSubdivision};
pub use template::Template;
