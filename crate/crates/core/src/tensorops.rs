//! Sparse endomorphisms of `V^⊗n` with Laurent-polynomial entries.
//!
//! Multi-indices are flattened row-major with the leftmost tensor factor most
//! significant. Public multi-index accessors are 1-based; flat indices are
//! 0-based.

use std::collections::BTreeMap;
use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::laurent::{ContextJson, LaurentError, MultiLaurent, TermJson, VarContext};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TensorError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("operation needs arity {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("inverse does not have Laurent-polynomial entries")]
    NotLaurent,
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// Sparse operator on `V^⊗arity`, `dim V = dim`, stored by columns.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOp {
    ctx: Arc<VarContext>,
    dim: usize,
    arity: usize,
    cols: Vec<Vec<(u32, MultiLaurent)>>,
}

fn ipow(d: usize, n: usize) -> usize {
    d.checked_pow(n as u32).expect("operator size overflow")
}

fn digits(mut x: usize, d: usize, n: usize) -> Vec<usize> {
    let mut v = vec![0; n];
    for k in (0..n).rev() {
        v[k] = x % d;
        x /= d;
    }
    v
}

fn flush(acc: FxHashMap<u32, MultiLaurent>) -> Vec<(u32, MultiLaurent)> {
    let mut v: Vec<(u32, MultiLaurent)> = acc.into_iter().filter(|(_, p)| !p.is_zero()).collect();
    v.sort_unstable_by_key(|e| e.0);
    v
}

impl SparseOp {
    pub fn zero(ctx: &Arc<VarContext>, dim: usize, arity: usize) -> Self {
        SparseOp { ctx: ctx.clone(), dim, arity, cols: vec![Vec::new(); ipow(dim, arity)] }
    }

    pub fn identity(ctx: &Arc<VarContext>, dim: usize, arity: usize) -> Self {
        Self::scalar(&MultiLaurent::one(ctx), dim, arity)
    }

    pub fn scalar(lambda: &MultiLaurent, dim: usize, arity: usize) -> Self {
        let mut op = Self::zero(lambda.ctx(), dim, arity);
        if !lambda.is_zero() {
            for (i, c) in op.cols.iter_mut().enumerate() {
                c.push((i as u32, lambda.clone()));
            }
        }
        op
    }

    pub fn diagonal(ctx: &Arc<VarContext>, dim: usize, arity: usize, diag: &[MultiLaurent]) -> Self {
        let mut op = Self::zero(ctx, dim, arity);
        assert_eq!(diag.len(), op.size(), "diagonal length");
        for (i, v) in diag.iter().enumerate() {
            if !v.is_zero() {
                op.cols[i].push((i as u32, v.clone()));
            }
        }
        op
    }

    /// Build from 0-based flat `(row, col, value)` triples; duplicates add up.
    pub fn from_flat(ctx: &Arc<VarContext>, dim: usize, arity: usize, entries: Vec<(usize, usize, MultiLaurent)>) -> Result<Self, TensorError> {
        let n = ipow(dim, arity);
        let mut acc: Vec<FxHashMap<u32, MultiLaurent>> = vec![FxHashMap::default(); n];
        for (r, c, v) in entries {
            if r >= n || c >= n {
                return Err(TensorError::Index(format!("({r},{c}) outside {n}x{n}")));
            }
            acc[c].entry(r as u32).or_insert_with(|| MultiLaurent::zero(ctx)).add_assign_ref(&v);
        }
        Ok(SparseOp { ctx: ctx.clone(), dim, arity, cols: acc.into_iter().map(flush).collect() })
    }

    /// Build from 1-based multi-index entries.
    pub fn from_entries(ctx: &Arc<VarContext>, dim: usize, arity: usize, entries: Vec<(Vec<usize>, Vec<usize>, MultiLaurent)>) -> Result<Self, TensorError> {
        let mut flat = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            flat.push((Self::flat_of(dim, arity, &r)?, Self::flat_of(dim, arity, &c)?, v));
        }
        Self::from_flat(ctx, dim, arity, flat)
    }

    fn flat_of(dim: usize, arity: usize, idx: &[usize]) -> Result<usize, TensorError> {
        if idx.len() != arity || idx.iter().any(|&x| x == 0 || x > dim) {
            return Err(TensorError::Index(format!("{idx:?} is not a multi-index in {{1..{dim}}}^{arity}")));
        }
        Ok(idx.iter().fold(0, |acc, &x| acc * dim + (x - 1)))
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Side length of the matrix, `dim^arity`.
    pub fn size(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn column(&self, c: usize) -> &[(u32, MultiLaurent)] {
        &self.cols[c]
    }

    pub fn get_flat(&self, r: usize, c: usize) -> MultiLaurent {
        match self.cols[c].binary_search_by_key(&(r as u32), |e| e.0) {
            Ok(i) => self.cols[c][i].1.clone(),
            Err(_) => MultiLaurent::zero(&self.ctx),
        }
    }

    /// Entry at 1-based multi-indices.
    pub fn get(&self, row: &[usize], col: &[usize]) -> Result<MultiLaurent, TensorError> {
        let r = Self::flat_of(self.dim, self.arity, row)?;
        let c = Self::flat_of(self.dim, self.arity, col)?;
        Ok(self.get_flat(r, c))
    }

    /// 0-based `(row, col, value)` triples sorted by column then row.
    pub fn entries_flat(&self) -> Vec<(usize, usize, MultiLaurent)> {
        let mut v = Vec::with_capacity(self.nnz());
        for (c, col) in self.cols.iter().enumerate() {
            for (r, x) in col {
                v.push((*r as usize, c, x.clone()));
            }
        }
        v
    }

    /// 1-based multi-index triples sorted by row then column.
    pub fn entries(&self) -> Vec<(Vec<usize>, Vec<usize>, MultiLaurent)> {
        let mut v: Vec<(usize, usize, MultiLaurent)> = self.entries_flat();
        v.sort_by_key(|e| (e.0, e.1));
        v.into_iter()
            .map(|(r, c, x)| {
                let rr = digits(r, self.dim, self.arity).into_iter().map(|a| a + 1).collect();
                let cc = digits(c, self.dim, self.arity).into_iter().map(|a| a + 1).collect();
                (rr, cc, x)
            })
            .collect()
    }

    fn same_shape(&self, o: &Self) -> Result<(), TensorError> {
        if self.dim != o.dim || self.arity != o.arity {
            return Err(TensorError::Shape(format!(
                "dim {} arity {} vs dim {} arity {}",
                self.dim, self.arity, o.dim, o.arity
            )));
        }
        if self.ctx.vars() != o.ctx.vars() {
            return Err(LaurentError::ContextMismatch(self.ctx.to_string(), o.ctx.to_string()).into());
        }
        Ok(())
    }

    pub fn compose(&self, b: &Self) -> Result<Self, TensorError> {
        self.same_shape(b)?;
        let cols = b
            .cols
            .iter()
            .map(|bcol| {
                let mut acc: FxHashMap<u32, MultiLaurent> = FxHashMap::default();
                for (k, bv) in bcol {
                    for (i, av) in &self.cols[*k as usize] {
                        acc.entry(*i).or_insert_with(|| MultiLaurent::zero(&self.ctx)).add_mul_assign(av, bv);
                    }
                }
                flush(acc)
            })
            .collect();
        Ok(SparseOp { ctx: self.ctx.clone(), dim: self.dim, arity: self.arity, cols })
    }

    fn zip_cols(&self, o: &Self, sub: bool) -> Result<Self, TensorError> {
        self.same_shape(o)?;
        let cols = self
            .cols
            .iter()
            .zip(&o.cols)
            .map(|(a, b)| {
                let mut m: BTreeMap<u32, MultiLaurent> = a.iter().cloned().collect();
                for (r, v) in b {
                    let e = m.entry(*r).or_insert_with(|| MultiLaurent::zero(&self.ctx));
                    if sub {
                        e.sub_assign_ref(v);
                    } else {
                        e.add_assign_ref(v);
                    }
                }
                m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Ok(SparseOp { ctx: self.ctx.clone(), dim: self.dim, arity: self.arity, cols })
    }

    pub fn add(&self, o: &Self) -> Result<Self, TensorError> {
        self.zip_cols(o, false)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, TensorError> {
        self.zip_cols(o, true)
    }

    pub fn scale(&self, c: &MultiLaurent) -> Self {
        self.map_entries(|x| x.mul_ref(c))
    }

    /// Apply `f` to every stored entry (zero results are dropped).
    pub fn map_entries(&self, f: impl Fn(&MultiLaurent) -> MultiLaurent) -> Self {
        let cols: Vec<Vec<(u32, MultiLaurent)>> = self
            .cols
            .iter()
            .map(|c| c.iter().map(|(r, x)| (*r, f(x))).filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        let ctx = cols
            .iter()
            .flat_map(|c| c.first())
            .map(|(_, x)| x.ctx().clone())
            .next()
            .unwrap_or_else(|| self.ctx.clone());
        SparseOp { ctx, dim: self.dim, arity: self.arity, cols }
    }

    /// Substitute variables in every entry, moving the operator into `target`.
    pub fn substitute(&self, target: &Arc<VarContext>, values: &[MultiLaurent]) -> Result<Self, TensorError> {
        let mut cols = Vec::with_capacity(self.cols.len());
        for c in &self.cols {
            let mut nc = Vec::with_capacity(c.len());
            for (r, x) in c {
                let y = x.substitute(target, values)?;
                if !y.is_zero() {
                    nc.push((*r, y));
                }
            }
            cols.push(nc);
        }
        Ok(SparseOp { ctx: target.clone(), dim: self.dim, arity: self.arity, cols })
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<Vec<(u32, MultiLaurent)>> = vec![Vec::new(); self.size()];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, x) in col {
                cols[*r as usize].push((c as u32, x.clone()));
            }
        }
        SparseOp { ctx: self.ctx.clone(), dim: self.dim, arity: self.arity, cols }
    }

    pub fn tensor(&self, b: &Self) -> Result<Self, TensorError> {
        if self.dim != b.dim {
            return Err(TensorError::Shape(format!("dim {} vs {}", self.dim, b.dim)));
        }
        if self.ctx.vars() != b.ctx.vars() {
            return Err(LaurentError::ContextMismatch(self.ctx.to_string(), b.ctx.to_string()).into());
        }
        let nb = b.size();
        let mut cols = vec![Vec::new(); self.size() * nb];
        for (ca, acol) in self.cols.iter().enumerate() {
            for (cb, bcol) in b.cols.iter().enumerate() {
                let mut col = Vec::with_capacity(acol.len() * bcol.len());
                for (ra, av) in acol {
                    for (rb, bv) in bcol {
                        let p = av.mul_ref(bv);
                        if !p.is_zero() {
                            col.push((*ra * nb as u32 + *rb, p));
                        }
                    }
                }
                cols[ca * nb + cb] = col;
            }
        }
        Ok(SparseOp { ctx: self.ctx.clone(), dim: self.dim, arity: self.arity + b.arity, cols })
    }

    /// `(f)_{ij}` on `V^⊗n`: `f` acts on factors `i < j` (1-based).
    pub fn embed_two_site(f: &SparseOp, i: usize, j: usize, n: usize) -> Result<Self, TensorError> {
        if f.arity != 2 {
            return Err(TensorError::Arity { expected: 2, got: f.arity });
        }
        if !(1 <= i && i < j && j <= n) {
            return Err(TensorError::Index(format!("need 1 <= i < j <= n, got i={i} j={j} n={n}")));
        }
        let d = f.dim;
        let size = ipow(d, n);
        let (wi, wj) = (ipow(d, n - i), ipow(d, n - j));
        let mut cols = Vec::with_capacity(size);
        for c in 0..size {
            let (ci, cj) = ((c / wi) % d, (c / wj) % d);
            let base = c - ci * wi - cj * wj;
            let mut col: Vec<(u32, MultiLaurent)> = f.cols[ci * d + cj]
                .iter()
                .map(|(r, x)| {
                    let (ri, rj) = (*r as usize / d, *r as usize % d);
                    ((base + ri * wi + rj * wj) as u32, x.clone())
                })
                .collect();
            col.sort_unstable_by_key(|e| e.0);
            cols.push(col);
        }
        Ok(SparseOp { ctx: f.ctx.clone(), dim: d, arity: n, cols })
    }

    /// `(f)_{k,k+1} ∘ self` without materialising the embedding (`k` 1-based).
    pub fn apply_two_site_left(&self, f: &SparseOp, k: usize) -> Result<Self, TensorError> {
        if f.arity != 2 || f.dim != self.dim {
            return Err(TensorError::Shape("two-site operator does not match".into()));
        }
        if k == 0 || k >= self.arity {
            return Err(TensorError::Index(format!("site {k} on arity {}", self.arity)));
        }
        let d = self.dim;
        let (wi, wj) = (ipow(d, self.arity - k), ipow(d, self.arity - k - 1));
        let cols = self
            .cols
            .iter()
            .map(|col| {
                let mut acc: FxHashMap<u32, MultiLaurent> = FxHashMap::default();
                for (r, x) in col {
                    let r = *r as usize;
                    let (a, b) = ((r / wi) % d, (r / wj) % d);
                    let base = r - a * wi - b * wj;
                    for (fr, fv) in &f.cols[a * d + b] {
                        let (a2, b2) = (*fr as usize / d, *fr as usize % d);
                        let nr = (base + a2 * wi + b2 * wj) as u32;
                        acc.entry(nr).or_insert_with(|| MultiLaurent::zero(&self.ctx)).add_mul_assign(fv, x);
                    }
                }
                flush(acc)
            })
            .collect();
        Ok(SparseOp { ctx: self.ctx.clone(), dim: d, arity: self.arity, cols })
    }

    /// `(f)_i ∘ self` for a one-site operator `f` (`i` 1-based).
    pub fn apply_one_site_left(&self, f: &SparseOp, i: usize) -> Result<Self, TensorError> {
        if f.arity != 1 || f.dim != self.dim {
            return Err(TensorError::Shape("one-site operator does not match".into()));
        }
        if i == 0 || i > self.arity {
            return Err(TensorError::Index(format!("site {i} on arity {}", self.arity)));
        }
        let d = self.dim;
        let w = ipow(d, self.arity - i);
        let cols = self
            .cols
            .iter()
            .map(|col| {
                let mut acc: FxHashMap<u32, MultiLaurent> = FxHashMap::default();
                for (r, x) in col {
                    let r = *r as usize;
                    let a = (r / w) % d;
                    let base = r - a * w;
                    for (fr, fv) in &f.cols[a] {
                        let nr = (base + *fr as usize * w) as u32;
                        acc.entry(nr).or_insert_with(|| MultiLaurent::zero(&self.ctx)).add_mul_assign(fv, x);
                    }
                }
                flush(acc)
            })
            .collect();
        Ok(SparseOp { ctx: self.ctx.clone(), dim: d, arity: self.arity, cols })
    }

    /// `self` with an identity tensor factor inserted so that it becomes factor
    /// `i` (1-based, `1 ≤ i ≤ arity + 1`).
    pub fn insert_identity(&self, i: usize) -> Result<Self, TensorError> {
        if i == 0 || i > self.arity + 1 {
            return Err(TensorError::Index(format!("insert position {i} on arity {}", self.arity)));
        }
        let d = self.dim;
        let w = ipow(d, self.arity + 1 - i);
        let size = self.size() * d;
        let split = |x: usize| (x / w, x % w);
        let mut cols = Vec::with_capacity(size);
        for c in 0..size {
            let (hi, lo) = split(c);
            let (hi, a) = (hi / d, hi % d);
            let old = hi * w + lo;
            let col: Vec<(u32, MultiLaurent)> = self.cols[old]
                .iter()
                .map(|(r, x)| {
                    let (rh, rl) = (*r as usize / w, *r as usize % w);
                    (((rh * d + a) * w + rl) as u32, x.clone())
                })
                .collect();
            cols.push(col);
        }
        Ok(SparseOp { ctx: self.ctx.clone(), dim: d, arity: self.arity + 1, cols })
    }

    /// Trace out factor `i` (1-based).
    pub fn partial_trace(&self, i: usize) -> Result<Self, TensorError> {
        if i == 0 || i > self.arity {
            return Err(TensorError::Index(format!("factor {i} of arity {}", self.arity)));
        }
        let d = self.dim;
        let n = self.arity;
        let w = ipow(d, n - i);
        let size = ipow(d, n - 1);
        let drop = |x: usize| -> (usize, usize) {
            let hi = x / (w * d);
            let mid = (x / w) % d;
            let lo = x % w;
            (hi * w + lo, mid)
        };
        let mut acc: Vec<FxHashMap<u32, MultiLaurent>> = vec![FxHashMap::default(); size];
        for (c, col) in self.cols.iter().enumerate() {
            let (nc, cm) = drop(c);
            for (r, x) in col {
                let (nr, rm) = drop(*r as usize);
                if rm == cm {
                    acc[nc].entry(nr as u32).or_insert_with(|| MultiLaurent::zero(&self.ctx)).add_assign_ref(x);
                }
            }
        }
        Ok(SparseOp { ctx: self.ctx.clone(), dim: d, arity: n - 1, cols: acc.into_iter().map(flush).collect() })
    }

    pub fn trace(&self) -> MultiLaurent {
        let mut acc = MultiLaurent::zero(&self.ctx);
        for (c, col) in self.cols.iter().enumerate() {
            if let Ok(i) = col.binary_search_by_key(&(c as u32), |e| e.0) {
                acc.add_assign_ref(&col[i].1);
            }
        }
        acc
    }

    fn permute_legs(&self, f: impl Fn(usize, usize, usize, usize) -> (usize, usize, usize, usize)) -> Result<Self, TensorError> {
        if self.arity != 2 {
            return Err(TensorError::Arity { expected: 2, got: self.arity });
        }
        let d = self.dim;
        let mut entries = Vec::with_capacity(self.nnz());
        for (c, col) in self.cols.iter().enumerate() {
            let (i, j) = (c / d, c % d);
            for (r, x) in col {
                let (k, l) = (*r as usize / d, *r as usize % d);
                let (a, b, p, q) = f(k, l, i, j);
                entries.push((a * d + b, p * d + q, x.clone()));
            }
        }
        Self::from_flat(&self.ctx, d, 2, entries)
    }

    /// Left rotation: the entry at row `(k,l)`, column `(i,j)` moves to row
    /// `(l,j)`, column `(k,i)`.
    pub fn rot_left(&self) -> Result<Self, TensorError> {
        self.permute_legs(|k, l, i, j| (l, j, k, i))
    }

    /// Right rotation: row `(k,l)`, column `(i,j)` moves to row `(i,k)`,
    /// column `(j,l)`.
    pub fn rot_right(&self) -> Result<Self, TensorError> {
        self.permute_legs(|k, l, i, j| (i, k, j, l))
    }

    /// Inverse of [`SparseOp::rot_left`] as a leg permutation.
    pub fn rot_left_inverse(&self) -> Result<Self, TensorError> {
        self.permute_legs(|l, j, k, i| (k, l, i, j))
    }

    /// Inverse of [`SparseOp::rot_right`] as a leg permutation.
    pub fn rot_right_inverse(&self) -> Result<Self, TensorError> {
        self.permute_legs(|i, k, j, l| (k, l, i, j))
    }

    /// `Some(λ)` iff the operator is exactly `λ·id`.
    pub fn as_scalar_multiple_of_identity(&self) -> Option<MultiLaurent> {
        if self.is_zero() {
            return Some(MultiLaurent::zero(&self.ctx));
        }
        let lambda = match self.cols[0].as_slice() {
            [(0, x)] => x,
            _ => return None,
        };
        for (c, col) in self.cols.iter().enumerate() {
            match col.as_slice() {
                [(r, x)] if *r as usize == c && x == lambda => {}
                _ => return None,
            }
        }
        Some(lambda.clone())
    }

    pub fn is_identity(&self) -> bool {
        self.as_scalar_multiple_of_identity().is_some_and(|l| l.is_one())
    }

    /// Diagonal entries, if the operator is diagonal.
    pub fn diagonal_entries(&self) -> Option<Vec<MultiLaurent>> {
        let mut out = Vec::with_capacity(self.size());
        for (c, col) in self.cols.iter().enumerate() {
            match col.as_slice() {
                [] => out.push(MultiLaurent::zero(&self.ctx)),
                [(r, x)] if *r as usize == c => out.push(x.clone()),
                _ => return None,
            }
        }
        Some(out)
    }

    /// Connected components of the sparsity pattern as `(rows, cols)`.
    pub fn blocks(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let n = self.size();
        let mut parent: Vec<usize> = (0..2 * n).collect();
        fn find(p: &mut Vec<usize>, mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (c, col) in self.cols.iter().enumerate() {
            for (r, _) in col {
                let (a, b) = (find(&mut parent, *r as usize), find(&mut parent, n + c));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let mut groups: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for x in 0..2 * n {
            let root = find(&mut parent, x);
            let g = groups.entry(root).or_default();
            if x < n {
                g.0.push(x);
            } else {
                g.1.push(x - n);
            }
        }
        let mut v: Vec<(Vec<usize>, Vec<usize>)> = groups.into_values().collect();
        v.sort_by_key(|g| g.0.first().or(g.1.first()).copied());
        v
    }

    /// Exact inverse, computed block by block with fraction-free
    /// Gauss–Jordan elimination; fails unless every entry of the inverse is a
    /// Laurent polynomial.
    pub fn invert(&self) -> Result<Self, TensorError> {
        let mut entries = Vec::new();
        for (rows, cols) in self.blocks() {
            if rows.len() != cols.len() {
                return Err(TensorError::Singular);
            }
            let m = rows.len();
            let rpos: FxHashMap<usize, usize> = rows.iter().enumerate().map(|(a, &r)| (r, a)).collect();
            let mut a = vec![vec![MultiLaurent::zero(&self.ctx); m]; m];
            for (b, &c) in cols.iter().enumerate() {
                for (r, x) in &self.cols[c] {
                    a[rpos[&(*r as usize)]][b] = x.clone();
                }
            }
            let inv = invert_dense(&self.ctx, a)?;
            for (b, &c) in cols.iter().enumerate() {
                for (a_, &r) in rows.iter().enumerate() {
                    let x = &inv[b][a_];
                    if !x.is_zero() {
                        entries.push((c, r, x.clone()));
                    }
                }
            }
        }
        Self::from_flat(&self.ctx, self.dim, self.arity, entries)
    }

    pub fn to_json(&self) -> OpJson {
        OpJson {
            context: Some(ContextJson::from_ctx(&self.ctx)),
            dim: self.dim,
            arity: self.arity,
            entries: self
                .entries()
                .into_iter()
                .map(|(row, col, v)| EntryJson { row, col, value: v.to_terms_json() })
                .collect(),
        }
    }

    /// Read an operator; `ctx` is used when the JSON carries no context header.
    pub fn from_json(j: &OpJson, ctx: Option<&Arc<VarContext>>) -> Result<Self, TensorError> {
        let ctx = match (&j.context, ctx) {
            (Some(c), _) => c.to_ctx()?,
            (None, Some(c)) => c.clone(),
            (None, None) => return Err(TensorError::Shape("operator JSON has no context".into())),
        };
        let mut entries = Vec::with_capacity(j.entries.len());
        for e in &j.entries {
            entries.push((e.row.clone(), e.col.clone(), MultiLaurent::from_terms_json(&ctx, &e.value)?));
        }
        Self::from_entries(&ctx, j.dim, j.arity, entries)
    }
}

/// Square dense inverse over the Laurent ring (fraction-free Gauss–Jordan,
/// then one exact division by the determinant).
pub(crate) fn invert_dense(ctx: &Arc<VarContext>, a: Vec<Vec<MultiLaurent>>) -> Result<Vec<Vec<MultiLaurent>>, TensorError> {
    let m = a.len();
    let zero = MultiLaurent::zero(ctx);
    let mut mat: Vec<Vec<MultiLaurent>> = a
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..m).map(|j| if i == j { MultiLaurent::one(ctx) } else { zero.clone() }));
            row
        })
        .collect();
    let mut prev = MultiLaurent::one(ctx);
    for k in 0..m {
        let p = (k..m)
            .filter(|&r| !mat[r][k].is_zero())
            .min_by_key(|&r| mat[r][k].num_terms())
            .ok_or(TensorError::Singular)?;
        mat.swap(k, p);
        let pivot = mat[k][k].clone();
        for i in 0..m {
            if i == k {
                continue;
            }
            let f = mat[i][k].clone();
            for j in 0..2 * m {
                if j == k {
                    continue;
                }
                let mut v = mat[i][j].mul_ref(&pivot);
                if !f.is_zero() && !mat[k][j].is_zero() {
                    v.sub_assign_ref(&f.mul_ref(&mat[k][j]));
                }
                mat[i][j] = v.div_exact(&prev).ok_or(TensorError::NotLaurent)?;
            }
            mat[i][k] = zero.clone();
        }
        prev = pivot;
    }
    let det = mat[m - 1][m - 1].clone();
    let mut inv = vec![vec![zero.clone(); m]; m];
    for i in 0..m {
        if mat[i][i] != det {
            return Err(TensorError::NotLaurent);
        }
        for j in 0..m {
            inv[i][j] = mat[i][m + j].div_exact(&det).ok_or(TensorError::NotLaurent)?;
        }
    }
    Ok(inv)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub row: Vec<usize>,
    pub col: Vec<usize>,
    pub value: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context: Option<ContextJson>,
    pub dim: usize,
    pub arity: usize,
    pub entries: Vec<EntryJson>,
}
