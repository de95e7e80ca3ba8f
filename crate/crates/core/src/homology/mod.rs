//! Homology of the hyperelliptic cover from a chain of paths through the
//! finite branch points.
//!
//! Each edge `b_i -> b_{i+1}` lifts to a closed cycle `e_i` on the cover: out
//! along the edge on one sheet and back on the other. Consecutive cycles meet
//! once and all others are disjoint, so the intersection form is tridiagonal.

pub mod paths;
pub mod symplectic;

pub use paths::{Edge, PathSystem, Piece, DEFAULT_CLEARANCE};
pub use symplectic::{symplectic_reduce, IntMatrix, Reduction};

use crate::cover::DoubleCover;
use crate::error::{Error, Result};

pub fn build_path_system(cover: &DoubleCover, clearance: f64) -> Result<PathSystem> {
    PathSystem::build(&cover.finite_branch, clearance)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleBasis {
    /// Intersection matrix of the chain cycles.
    pub m: IntMatrix,
    /// Columns: symplectic `a_1..a_g, b_1..b_g` in chain-cycle coordinates,
    /// followed by the radical.
    pub s: IntMatrix,
    pub genus: usize,
}

impl CycleBasis {
    pub fn rank(&self) -> usize {
        2 * self.genus
    }

    pub fn cycle_count(&self) -> usize {
        self.m.len()
    }
}

pub fn chain_cycles(ps: &PathSystem, cover: &DoubleCover) -> Result<CycleBasis> {
    let m = symplectic::chain_form(ps.edges.len());
    let red = symplectic_reduce(&m)?;
    if red.rank() != 2 * cover.genus {
        return Err(Error::RankMismatch {
            rank: red.rank(),
            expected: 2 * cover.genus,
        });
    }
    Ok(CycleBasis {
        m,
        s: red.basis,
        genus: red.genus,
    })
}
