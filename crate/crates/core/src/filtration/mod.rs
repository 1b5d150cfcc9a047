//! Zigzag filtrations as sequences of elementary insertions and removals.
//!
//! Ops format, one arrow per line:
//!
//! ```text
//! i 0
//! i 1
//! i 0 1
//! d 0 1
//! ```
//!
//! `i` inserts, `d` removes; vertices are non-negative integers in any order.
//! Blank lines and lines starting with `#` are skipped.

mod points;
pub mod random;
mod rips;

use std::fmt;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::simplicial::{ComplexError, Simplex, SimplicialComplex};

pub use points::{parse_points, write_points, PointCloud};
pub use rips::{
    build_oscillating_rips, build_oscillating_rips_with, build_rips, farthest_point_order, PhaseOrder,
};

#[derive(Debug, Error)]
pub enum FiltrationError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("arrow {arrow}: {source}")]
    Replay {
        arrow: usize,
        #[source]
        source: ComplexError,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Insert,
    Delete,
}

/// One elementary arrow `K_{t-1} <-> K_t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArrowOp {
    pub direction: Direction,
    pub simplex: Simplex,
}

impl ArrowOp {
    pub fn insert(simplex: Simplex) -> Self {
        ArrowOp {
            direction: Direction::Insert,
            simplex,
        }
    }

    pub fn delete(simplex: Simplex) -> Self {
        ArrowOp {
            direction: Direction::Delete,
            simplex,
        }
    }

    pub fn is_insert(&self) -> bool {
        self.direction == Direction::Insert
    }
}

impl fmt::Display for ArrowOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.direction {
            Direction::Insert => 'i',
            Direction::Delete => 'd',
        };
        write!(f, "{c}")?;
        for v in self.simplex.vertices() {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

/// A validated zigzag filtration starting from the empty complex. Arrow `t`
/// (1-based) is `ops()[t - 1]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ZigzagFiltration {
    ops: Vec<ArrowOp>,
}

impl ZigzagFiltration {
    /// Validates that the ops replay from the empty complex.
    pub fn new(ops: Vec<ArrowOp>) -> Result<Self, FiltrationError> {
        let mut complex = SimplicialComplex::new();
        for (t, op) in ops.iter().enumerate() {
            apply(&mut complex, op).map_err(|source| FiltrationError::Replay {
                arrow: t + 1,
                source,
            })?;
        }
        Ok(ZigzagFiltration { ops })
    }

    /// Builds a filtration from `(insert?, vertices)` pairs. Panics on
    /// invalid input; meant for tests and literals.
    pub fn from_literal(ops: &[(bool, &[u32])]) -> Self {
        let ops = ops
            .iter()
            .map(|&(ins, v)| {
                let s = Simplex::from_slice(v);
                if ins {
                    ArrowOp::insert(s)
                } else {
                    ArrowOp::delete(s)
                }
            })
            .collect();
        ZigzagFiltration::new(ops).expect("valid literal filtration")
    }

    pub fn ops(&self) -> &[ArrowOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn is_forward_only(&self) -> bool {
        self.ops.iter().all(ArrowOp::is_insert)
    }

    /// The first `len` arrows.
    pub fn prefix(&self, len: usize) -> ZigzagFiltration {
        ZigzagFiltration {
            ops: self.ops[..len.min(self.ops.len())].to_vec(),
        }
    }

    /// Largest number of simplices held at any index.
    pub fn max_complex_size(&self) -> usize {
        let mut size = 0usize;
        let mut max = 0;
        for op in &self.ops {
            if op.is_insert() {
                size += 1;
                max = max.max(size);
            } else {
                size -= 1;
            }
        }
        max
    }

    /// Calls `visit(t, K_t)` for `t = 0..=n`, with `K_0` empty.
    pub fn replay<F: FnMut(usize, &SimplicialComplex)>(&self, mut visit: F) {
        let mut complex = SimplicialComplex::new();
        visit(0, &complex);
        for (t, op) in self.ops.iter().enumerate() {
            apply(&mut complex, op).expect("validated filtration");
            visit(t + 1, &complex);
        }
    }

    pub fn final_complex(&self) -> SimplicialComplex {
        let mut complex = SimplicialComplex::new();
        for op in &self.ops {
            apply(&mut complex, op).expect("validated filtration");
        }
        complex
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.ops.iter().map(|op| op.simplex.dim()).max()
    }

    pub fn write_ops<W: Write>(&self, mut w: W) -> io::Result<()> {
        for op in &self.ops {
            writeln!(w, "{op}")?;
        }
        Ok(())
    }

    pub fn to_ops_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_ops(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii")
    }
}

fn apply(complex: &mut SimplicialComplex, op: &ArrowOp) -> Result<(), ComplexError> {
    match op.direction {
        Direction::Insert => complex.insert(op.simplex.clone()).map(|_| ()),
        Direction::Delete => complex.remove(&op.simplex).map(|_| ()),
    }
}

/// Parses and validates a filtration in the ops format.
pub fn parse_ops<R: BufRead>(reader: R) -> Result<ZigzagFiltration, FiltrationError> {
    let mut ops = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut tokens = t.split_whitespace();
        let direction = match tokens.next() {
            Some("i") => Direction::Insert,
            Some("d") => Direction::Delete,
            Some(other) => {
                return Err(FiltrationError::Parse {
                    line: n + 1,
                    msg: format!("unknown arrow kind {other:?}, expected `i` or `d`"),
                })
            }
            None => unreachable!("blank lines are skipped"),
        };
        let vertices = tokens
            .map(|tok| {
                tok.parse::<u32>().map_err(|e| FiltrationError::Parse {
                    line: n + 1,
                    msg: format!("bad vertex {tok:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let simplex = Simplex::new(vertices).map_err(|e| FiltrationError::Parse {
            line: n + 1,
            msg: e.to_string(),
        })?;
        ops.push(ArrowOp { direction, simplex });
    }
    ZigzagFiltration::new(ops)
}
