//! Exact computations in rank-3 weighted Coxeter groups: the word problem,
//! the Hecke algebra in its standard and Kazhdan–Lusztig bases, the lowest
//! two-sided cell with its left cells, and the based ring on that cell.

pub mod cache;
pub mod cells;
pub mod error;
pub mod hecke;
pub mod int;
pub mod jring;
pub mod kl;
pub mod laurent;
pub mod verify;
pub mod word;

pub use cache::{Cache, CacheOutcome};
pub use cells::{CellAtlas, CellId, ExpectedCount, Factorization, Frame, LeftCellCensus};
pub use error::{Error, Result};
pub use hecke::{HeckeAlgebra, HeckeElement};
pub use int::Int;
pub use jring::{ClosedFormProduct, GlueReading, JElement, JRing};
pub use kl::{KlTable, ProductTable};
pub use laurent::{Degree, LaurentPoly};
pub use word::{
    classify, ClassificationReport, CoxeterSystem, Edge, ElemId, Element, Gen, GenSet, GroupBall, GroupConfig,
    GroupType, Order, Parabolic,
};
