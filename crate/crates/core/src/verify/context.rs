use std::sync::Arc;

use crate::cells::CellAtlas;
use crate::error::Result;
use crate::hecke::HeckeAlgebra;
use crate::kl::KlTable;
use crate::word::{classify, ClassificationReport, CoxeterSystem, GroupBall, GroupConfig};

/// Default seed for sampled checks.
pub const DEFAULT_SEED: u64 = 0x5eed_c0de;

/// Everything the suites share: a ball large enough for products of
/// elements of length at most `radius`, its cell atlas and KL table.
pub struct Context {
    pub radius: usize,
    pub seed: u64,
    pub report: ClassificationReport,
    pub atlas: CellAtlas,
    pub kl: KlTable,
}

impl Context {
    /// Enumerate a ball of radius `outer` and set up the tables on it.
    pub fn new(config: GroupConfig, radius: usize, outer: usize, seed: u64) -> Result<Context> {
        let system = CoxeterSystem::new(config);
        let ball = Arc::new(GroupBall::enumerate(&system, outer.max(radius))?);
        Context::from_ball(&system, ball, radius, seed)
    }

    /// Reuse an existing ball, e.g. one loaded from a cache.
    pub fn from_ball(system: &CoxeterSystem, ball: Arc<GroupBall>, radius: usize, seed: u64) -> Result<Context> {
        let kl = KlTable::new(ball.clone());
        Context::from_parts(system, kl, radius, seed)
    }

    pub fn from_parts(system: &CoxeterSystem, kl: KlTable, radius: usize, seed: u64) -> Result<Context> {
        let report = classify(system)?;
        let atlas = CellAtlas::new(kl.algebra().ball_arc().clone(), &report)?;
        Ok(Context {
            radius,
            seed,
            report,
            atlas,
            kl,
        })
    }

    pub fn config(&self) -> &GroupConfig {
        self.ball().config()
    }

    pub fn ball(&self) -> &GroupBall {
        self.atlas.ball()
    }

    pub fn algebra(&self) -> &HeckeAlgebra {
        self.kl.algebra()
    }

    pub fn n(&self) -> u64 {
        self.report.n
    }
}
