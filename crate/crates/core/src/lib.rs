//! Exact arithmetic for the isotropy groups of complex symmetric canonical
//! matrices under orthogonal similarity.

pub mod acceptance;
pub mod canonical;
pub mod congruence;
pub mod error;
pub mod exec;
pub mod generators;
pub mod isotropy;
pub mod json;
pub mod linalg;
pub mod matrix;
pub mod orbit;
pub mod random;
pub mod scalar;
pub mod toeplitz;

pub use canonical::{MultiSegreStructure, SegreBlock, SegreStructure};
pub use error::{Error, ParseError, Result};
pub use matrix::ExactMatrix;
pub use scalar::{ExactScalar, Rational};
pub use toeplitz::{commutant_basis, CommutantBasis, OmegaDirection, ToeplitzForm};
pub use congruence::{solution_dimension, solve_congruence, verify_congruence, CongruenceData, FreeParams};
pub use generators::{factor_unipotent, gen_g, gen_two_block, gen_v, gen_w, Factorization, GeneratorSpec};
pub use exec::Execution;
pub use isotropy::{describe_isotropy, sample_isotropy_element, verify_isotropy, IsotropyDescription, IsotropyElement};
pub use orbit::{codim_formula, consistency_check, tangent_oracle, OrbitReport};
