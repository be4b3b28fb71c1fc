//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use coxcell::{CoxeterSystem, GroupBall, GroupConfig};

/// Groups of increasing growth rate, labelled for benchmark ids.
pub fn groups() -> Vec<(&'static str, GroupConfig)> {
    vec![
        ("inf22_121", GroupConfig::from_orders(0, 2, 2, [1, 2, 1]).unwrap()),
        ("333", GroupConfig::from_orders(3, 3, 3, [1, 1, 1]).unwrap()),
        ("inf32", GroupConfig::from_orders(0, 3, 2, [1, 1, 1]).unwrap()),
        ("infinfinf", GroupConfig::from_orders(0, 0, 0, [1, 1, 1]).unwrap()),
    ]
}

pub fn ball(config: GroupConfig, radius: usize) -> Arc<GroupBall> {
    Arc::new(GroupBall::enumerate(&CoxeterSystem::new(config), radius).unwrap())
}
