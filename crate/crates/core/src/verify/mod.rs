//! Executable checks over a ball, each producing a [`SuiteReport`].

pub mod boundedness;
pub mod cellsuite;
pub mod context;
pub mod jsuite;
pub mod psuite;
pub mod report;

pub use boundedness::check_boundedness;
pub use cellsuite::{check_cell_structure, CellRadii};
pub use context::{Context, DEFAULT_SEED};
pub use jsuite::{check_jring, printed_indecomposables};
pub use psuite::{check_gamma_beta, check_p_suite};
pub use report::{Check, CheckItem, Status, SuiteReport};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Boundedness,
    P,
    Cells,
    JRing,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Boundedness, Suite::P, Suite::Cells, Suite::JRing];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Boundedness => "boundedness",
            Suite::P => "p",
            Suite::Cells => "cells",
            Suite::JRing => "jring",
        }
    }

    /// Radius of the ball the suite needs at check radius `r`.
    pub fn outer_radius(self, r: usize) -> usize {
        match self {
            Suite::Cells => 2 * CellRadii::for_radius(r).table,
            _ => 2 * r,
        }
    }

    pub fn run(self, ctx: &Context) -> Result<SuiteReport> {
        match self {
            Suite::Boundedness => check_boundedness(ctx),
            Suite::P => check_p_suite(ctx),
            Suite::Cells => check_cell_structure(ctx, CellRadii::for_radius(ctx.radius)),
            Suite::JRing => check_jring(ctx),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            Error::Config(format!(
                "unknown suite {s:?}; expected one of boundedness, p, cells, jring, all"
            ))
        })
    }
}
