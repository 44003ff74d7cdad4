#![allow(dead_code)]

//! Independent Alexander oracle: Conway skein recursion on closed braid
//! diagrams. A crossing that is first met from below along a fixed traversal
//! is switched (`∇₊ − ∇₋ = z∇₀`, smoothing a braid crossing deletes the letter)
//! until the diagram is descending, hence an unlink.

use std::collections::HashMap;
use std::sync::Arc;

use knotpoly::laurent::{MultiLaurent, VarContext};

/// Conway polynomial as coefficients of `z⁰, z¹, …`.
pub type Conway = Vec<i64>;

fn add(a: &Conway, b: &Conway, shift: usize, sign: i64) -> Conway {
    let mut out = a.clone();
    if out.len() < b.len() + shift {
        out.resize(b.len() + shift, 0);
    }
    for (i, x) in b.iter().enumerate() {
        out[i + shift] += sign * x;
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn components(n: usize, letters: &[i32]) -> Vec<Vec<usize>> {
    let mut at: Vec<usize> = (0..n).collect();
    for &l in letters {
        let k = l.unsigned_abs() as usize - 1;
        at.swap(k, k + 1);
    }
    let mut perm = vec![0; n];
    for (pos, &s) in at.iter().enumerate() {
        perm[s] = pos;
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if !seen[i] {
            let mut cyc = Vec::new();
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                cyc.push(j);
                j = perm[j];
            }
            out.push(cyc);
        }
    }
    out
}

/// Index of the first crossing met as an under-crossing, if any.
fn first_bad_crossing(n: usize, letters: &[i32]) -> Option<usize> {
    let mut visited = vec![false; letters.len()];
    for comp in components(n, letters) {
        for &start in &comp {
            let mut pos = start;
            for (t, &l) in letters.iter().enumerate() {
                let k = l.unsigned_abs() as usize - 1;
                if pos != k && pos != k + 1 {
                    continue;
                }
                let rising = pos == k;
                // positive crossing: the strand moving right is over
                let over = if l > 0 { rising } else { !rising };
                if !visited[t] {
                    visited[t] = true;
                    if !over {
                        return Some(t);
                    }
                }
                pos = if rising { k + 1 } else { k };
            }
        }
    }
    None
}

pub struct ConwayOracle {
    memo: HashMap<(usize, Vec<i32>), Conway>,
}

impl Default for ConwayOracle {
    fn default() -> Self {
        Self::new()
    }
}

impl ConwayOracle {
    pub fn new() -> Self {
        ConwayOracle { memo: HashMap::new() }
    }

    pub fn conway(&mut self, n: usize, letters: &[i32]) -> Conway {
        let key = (n, letters.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let v = match first_bad_crossing(n, letters) {
            None => {
                if components(n, letters).len() == 1 {
                    vec![1]
                } else {
                    vec![]
                }
            }
            Some(t) => {
                let mut switched = letters.to_vec();
                switched[t] = -switched[t];
                let mut smoothed = letters.to_vec();
                smoothed.remove(t);
                let a = self.conway(n, &switched);
                let b = self.conway(n, &smoothed);
                // ∇(L₊) = ∇(L₋) + z∇(L₀),  ∇(L₋) = ∇(L₊) − z∇(L₀)
                add(&a, &b, 1, if letters[t] > 0 { 1 } else { -1 })
            }
        };
        self.memo.insert(key, v.clone());
        v
    }

    /// `Δ(t) = ∇(t^{-1/2} − t^{1/2})` in a square-root context for `t`.
    pub fn alexander(&mut self, ctx: &Arc<VarContext>, n: usize, letters: &[i32]) -> MultiLaurent {
        let c = self.conway(n, letters);
        let z = MultiLaurent::parse(ctx, "t^(-1/2) - t^(1/2)").unwrap();
        let mut acc = MultiLaurent::zero(ctx);
        let mut zp = MultiLaurent::one(ctx);
        for x in c {
            acc = acc.add_ref(&zp.mul_ref(&MultiLaurent::from_int(ctx, x)));
            zp = zp.mul_ref(&z);
        }
        acc
    }
}

/// Convenience: Alexander value of a braid in the standard `t` context.
pub fn oracle_alexander(ctx: &Arc<VarContext>, n: usize, letters: &[i32]) -> MultiLaurent {
    ConwayOracle::new().alexander(ctx, n, letters)
}
