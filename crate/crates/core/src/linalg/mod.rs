//! Exact linear algebra over Z/p^e.

pub mod finab;
pub mod howell;
pub mod matrix;
pub mod ring;
pub mod smith;
pub mod subgroup;

pub use finab::FinAb;
pub use howell::{free_kernel, free_solve, howell, howell_form, Howell};
pub use matrix::Matrix;
pub use ring::RingSpec;
pub use smith::{smith, Smith};
pub use subgroup::{kernel, solve, subquotient_invariants, Subgroup, Subquotient};
