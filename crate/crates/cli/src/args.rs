use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use coxcell::verify::DEFAULT_SEED;

/// Hecke algebras, Kazhdan–Lusztig bases and the lowest two-sided cell of
/// rank-3 weighted Coxeter groups.
///
/// Elements are words over r, s, t; `e` is the identity.
#[derive(Debug, Parser)]
#[command(name = "coxcell", version)]
pub struct Cli {
    #[command(flatten)]
    pub group: GroupArgs,

    /// Length cutoff; each subcommand documents its default.
    #[arg(long, global = true)]
    pub radius: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Directory for ball and KL caches.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,

    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Cap on nodes explored by one word-problem search.
    #[arg(long, global = true)]
    pub node_cap: Option<usize>,

    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// JSON or TOML group configuration.
    #[arg(long, global = true, conflicts_with_all = ["m_sr", "m_st", "m_rt", "weights"])]
    pub config: Option<PathBuf>,

    /// Order of sr: an integer >= 2 or "inf".
    #[arg(long, global = true)]
    pub m_sr: Option<String>,

    #[arg(long, global = true)]
    pub m_st: Option<String>,

    #[arg(long, global = true)]
    pub m_rt: Option<String>,

    /// Weights of r, s, t, e.g. 1,2,1. Defaults to 1,1,1.
    #[arg(long, global = true)]
    pub weights: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Reading {
    Amalgam,
    Literal,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the ball (radius default 4).
    Ball,
    /// Group type, finite parabolics, N and M.
    Classify,
    /// T_x T_y in the standard basis.
    Mult { x: String, y: String },
    /// The coefficient f_{x,y,z} of T_z in T_x T_y.
    F { x: String, y: String, z: String },
    /// C_w in the standard basis, i.e. the polynomials p_{x,w}.
    Kl { w: String },
    /// The coefficient h_{x,y,z} of C_z in C_x C_y.
    H { x: String, y: String, z: String },
    /// Lower bound for a(w) from pairs of length at most the radius (default 3).
    Afn { w: String },
    /// Membership in the lowest cell and the left cell of w.
    Lambda { w: String },
    /// Left cells of the lowest cell inside the ball (radius default 6).
    Cells,
    /// w = x·p·y through the frames of its left and right cells.
    Factorize { w: String },
    /// t_x t_y in the based ring of the lowest cell.
    J0 { x: String, y: String },
    /// Indecomposable elements inside the ball (radius default 8).
    Indecomposable {
        #[arg(long, value_enum, default_value_t = Reading::Amalgam)]
        reading: Reading,
    },
    /// Run a verification suite: boundedness, p, cells, jring or all (radius default 4).
    Verify { suite: String },
}
