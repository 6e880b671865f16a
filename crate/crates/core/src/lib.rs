pub mod cochain;
pub mod error;
pub mod group;
pub mod iwasawa;
pub mod compact;
pub mod complex;
pub mod linalg;
pub mod module;
pub mod random;

pub use error::{Error, Result};
pub use group::FiniteGroup;
pub use linalg::{FinAb, Matrix, RingSpec};
pub use module::{Character, GModule, LambdaAction, ModuleMap};
