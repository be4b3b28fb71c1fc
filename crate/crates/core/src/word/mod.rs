//! Generators, configurations, the word problem, balls and classification.

pub mod ball;
pub mod classify;
pub mod config;
pub mod gen;
pub mod system;

pub use ball::{Edge, ElemId, GroupBall};
pub use classify::{classify, group_type, ClassificationReport, GroupType, Parabolic};
pub use config::{GroupConfig, Order};
pub use gen::{parse_word, word_to_string, Gen, GenSet};
pub use system::{CoxeterSystem, Element, DEFAULT_NODE_CAP};
