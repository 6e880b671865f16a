//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use iwacoh_core::{FiniteGroup, GModule, RingSpec};

pub fn group(name: &str) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::builtin(name).expect("builtin group"))
}

/// The trivial module (Z/p^e)^rank over a builtin group.
pub fn trivial_module(name: &str, p: u64, e: u32, rank: usize) -> GModule {
    GModule::trivial(RingSpec::new(p, e).expect("valid ring"), group(name), vec![e; rank])
}
