//! Text transcriptions of the explicit R-matrices.
//!
//! Two formats are read. The sparse format lists `row col expr` with 1-based
//! flat indices. The block format has a header `block (i,j) (k,l) ... [* pref]`
//! followed by one row per label with cells separated by `|`; rows and columns
//! carry the same labels, and `(i,j)` stands for `e_i ⊗ e_j`.

use std::sync::Arc;

use crate::laurent::{MultiLaurent, VarContext};
use crate::tensorops::{SparseOp, TensorError};

pub const V1_FULL: &str = include_str!("data/v1.txt");
pub const V1_BLOCKS: &str = include_str!("data/v1_blocks.txt");
pub const LAMBDA1_FULL: &str = include_str!("data/lambda1.txt");
pub const LAMBDA_MINUS1_BLOCKS: &str = include_str!("data/lambda_minus1.txt");
pub const SL3_BLOCKS: &str = include_str!("data/sl3.txt");

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn bad(line: usize, msg: impl Into<String>) -> TensorError {
    TensorError::Shape(format!("line {line}: {}", msg.into()))
}

pub fn parse_sparse(text: &str, ctx: &Arc<VarContext>, dim: usize, bindings: &[(&str, MultiLaurent)]) -> Result<SparseOp, TensorError> {
    let mut entries = Vec::new();
    for (no, line) in content_lines(text) {
        let mut it = line.splitn(3, char::is_whitespace);
        let (Some(r), Some(c), Some(e)) = (it.next(), it.next(), it.next()) else {
            return Err(bad(no, "expected `row col expr`"));
        };
        let r: usize = r.parse().map_err(|_| bad(no, "bad row index"))?;
        let c: usize = c.parse().map_err(|_| bad(no, "bad column index"))?;
        if r == 0 || c == 0 {
            return Err(bad(no, "indices are 1-based"));
        }
        let v = MultiLaurent::parse_with(ctx, e.trim(), bindings)?;
        entries.push((r - 1, c - 1, v));
    }
    SparseOp::from_flat(ctx, dim, 2, entries)
}

/// One block: labels as 0-based flat indices and its cell values.
#[derive(Clone, Debug)]
pub struct Block {
    pub labels: Vec<(usize, usize)>,
    pub cells: Vec<Vec<MultiLaurent>>,
}

fn parse_labels(s: &str, no: usize) -> Result<Vec<(usize, usize)>, TensorError> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let open = rest.find('(').ok_or_else(|| bad(no, "expected `(`"))?;
        let close = rest.find(')').ok_or_else(|| bad(no, "expected `)`"))?;
        let inner = &rest[open + 1..close];
        let (a, b) = inner.split_once(',').ok_or_else(|| bad(no, "expected `(i,j)`"))?;
        let a: usize = a.trim().parse().map_err(|_| bad(no, "bad label"))?;
        let b: usize = b.trim().parse().map_err(|_| bad(no, "bad label"))?;
        out.push((a, b));
        rest = rest[close + 1..].trim();
    }
    Ok(out)
}

pub fn parse_block_list(text: &str, ctx: &Arc<VarContext>, bindings: &[(&str, MultiLaurent)]) -> Result<Vec<Block>, TensorError> {
    let mut blocks: Vec<Block> = Vec::new();
    let mut pref = MultiLaurent::one(ctx);
    for (no, line) in content_lines(text) {
        if let Some(rest) = line.strip_prefix("block") {
            let (labels, p) = match rest.rfind(')') {
                Some(end) if rest[end + 1..].trim_start().starts_with('*') => {
                    (&rest[..=end], Some(rest[end + 1..].trim_start()[1..].trim()))
                }
                _ => (rest, None),
            };
            pref = match p {
                Some(p) => MultiLaurent::parse_with(ctx, p, bindings)?,
                None => MultiLaurent::one(ctx),
            };
            blocks.push(Block { labels: parse_labels(labels, no)?, cells: Vec::new() });
            continue;
        }
        let block = blocks.last_mut().ok_or_else(|| bad(no, "row before any block header"))?;
        let cells: Vec<&str> = line.split('|').map(str::trim).collect();
        if cells.len() != block.labels.len() {
            return Err(bad(no, format!("{} cells for {} labels", cells.len(), block.labels.len())));
        }
        let mut row = Vec::with_capacity(cells.len());
        for c in cells {
            let v = if c == "." { MultiLaurent::zero(ctx) } else { MultiLaurent::parse_with(ctx, c, bindings)? };
            row.push(v.mul_ref(&pref));
        }
        block.cells.push(row);
    }
    for b in &blocks {
        if b.cells.len() != b.labels.len() {
            return Err(TensorError::Shape(format!("block {:?} has {} rows", b.labels, b.cells.len())));
        }
    }
    Ok(blocks)
}

pub fn assemble_blocks(blocks: &[Block], ctx: &Arc<VarContext>, dim: usize) -> Result<SparseOp, TensorError> {
    let mut entries = Vec::new();
    let mut seen = vec![false; dim * dim];
    for b in blocks {
        let idx: Vec<usize> = b
            .labels
            .iter()
            .map(|&(i, j)| {
                if i == 0 || j == 0 || i > dim || j > dim {
                    Err(TensorError::Index(format!("label ({i},{j}) out of range")))
                } else {
                    Ok((i - 1) * dim + (j - 1))
                }
            })
            .collect::<Result<_, _>>()?;
        for &x in &idx {
            if seen[x] {
                return Err(TensorError::Shape(format!("basis vector {x} appears in two blocks")));
            }
            seen[x] = true;
        }
        for (a, row) in b.cells.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    entries.push((idx[a], idx[c], v.clone()));
                }
            }
        }
    }
    if let Some(x) = seen.iter().position(|s| !s) {
        return Err(TensorError::Shape(format!("basis vector {x} is in no block")));
    }
    SparseOp::from_flat(ctx, dim, 2, entries)
}

pub fn parse_blocks(text: &str, ctx: &Arc<VarContext>, dim: usize, bindings: &[(&str, MultiLaurent)]) -> Result<SparseOp, TensorError> {
    assemble_blocks(&parse_block_list(text, ctx, bindings)?, ctx, dim)
}
