use std::cmp::Ordering;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::context::{same_ctx, VarContext, MAX_VARS};
use super::gauss::GaussRational;
use super::rat::Rat;
use super::LaurentError;

/// Packed exponent vector: variable `i` occupies bits `48-16i .. 64-16i`,
/// stored with a bias of `2^15`. Integer order on keys is lexicographic order
/// on exponent vectors, and adding keys (minus the bias) multiplies monomials.
pub type Mono = u64;

const BIAS: i64 = 1 << 15;
pub const ONE_KEY: Mono = 0x8000_8000_8000_8000;

#[inline]
fn shift(i: usize) -> u32 {
    (48 - 16 * i) as u32
}

pub fn pack(exps: &[i32]) -> Mono {
    debug_assert!(exps.len() <= MAX_VARS);
    let mut k = ONE_KEY;
    for (i, &e) in exps.iter().enumerate() {
        assert!((e as i64).abs() < BIAS, "exponent {e} out of range");
        let field = (e as i64 + BIAS) as u64;
        k = (k & !(0xFFFFu64 << shift(i))) | (field << shift(i));
    }
    k
}

#[inline]
pub fn exponent(k: Mono, i: usize) -> i32 {
    (((k >> shift(i)) & 0xFFFF) as i64 - BIAS) as i32
}

pub fn unpack(k: Mono, n: usize) -> Vec<i32> {
    (0..n).map(|i| exponent(k, i)).collect()
}

#[inline]
pub fn mono_mul(a: Mono, b: Mono) -> Mono {
    a.wrapping_add(b).wrapping_sub(ONE_KEY)
}

#[inline]
pub fn mono_div(a: Mono, b: Mono) -> Mono {
    a.wrapping_sub(b).wrapping_add(ONE_KEY)
}

/// Exact multivariate Laurent polynomial with Gaussian-rational coefficients.
///
/// Terms are kept sorted by exponent vector (lexicographic, first variable most
/// significant) with no zero coefficients, so the representation is canonical.
#[derive(Clone, Debug)]
pub struct MultiLaurent {
    ctx: Arc<VarContext>,
    terms: Vec<(Mono, GaussRational)>,
}

impl PartialEq for MultiLaurent {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms && same_ctx(&self.ctx, &o.ctx)
    }
}

impl Eq for MultiLaurent {}

impl Hash for MultiLaurent {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

fn merge_sorted(a: &[(Mono, GaussRational)], b: &[(Mono, GaussRational)], negate_b: bool) -> Vec<(Mono, GaussRational)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                let c = if negate_b { b[j].1.neg() } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { a[i].1.sub(&b[j].1) } else { a[i].1.add(&b[j].1) };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for (k, c) in &b[j..] {
        out.push((*k, if negate_b { c.neg() } else { c.clone() }));
    }
    out
}

fn collapse(mut v: Vec<(Mono, GaussRational)>) -> Vec<(Mono, GaussRational)> {
    v.sort_unstable_by_key(|t| t.0);
    let mut out: Vec<(Mono, GaussRational)> = Vec::with_capacity(v.len());
    for (k, c) in v {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 = last.1.add(&c),
            _ => out.push((k, c)),
        }
    }
    out.retain(|t| !t.1.is_zero());
    out
}

impl MultiLaurent {
    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        MultiLaurent { ctx: ctx.clone(), terms: Vec::new() }
    }

    pub fn one(ctx: &Arc<VarContext>) -> Self {
        Self::constant(ctx, GaussRational::one())
    }

    pub fn constant(ctx: &Arc<VarContext>, c: GaussRational) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(ONE_KEY, c)] };
        MultiLaurent { ctx: ctx.clone(), terms }
    }

    pub fn from_int(ctx: &Arc<VarContext>, n: i64) -> Self {
        Self::constant(ctx, GaussRational::from_int(n))
    }

    pub fn zeta(ctx: &Arc<VarContext>) -> Self {
        Self::constant(ctx, GaussRational::zeta())
    }

    /// `c · x^exps` in internal variables.
    pub fn monomial(ctx: &Arc<VarContext>, c: GaussRational, exps: &[i32]) -> Self {
        assert_eq!(exps.len(), ctx.len(), "exponent vector length");
        let terms = if c.is_zero() { Vec::new() } else { vec![(pack(exps), c)] };
        MultiLaurent { ctx: ctx.clone(), terms }
    }

    /// Internal variable `i` to the first power.
    pub fn var(ctx: &Arc<VarContext>, i: usize) -> Self {
        let mut e = vec![0; ctx.len()];
        e[i] = 1;
        Self::monomial(ctx, GaussRational::one(), &e)
    }

    pub fn var_named(ctx: &Arc<VarContext>, name: &str) -> Result<Self, LaurentError> {
        let i = ctx.index_of(name).ok_or_else(|| LaurentError::UnknownVariable(name.to_string()))?;
        Ok(Self::var(ctx, i))
    }

    /// Build from `(exponents, coefficient)` pairs, combining duplicates.
    pub fn from_terms(ctx: &Arc<VarContext>, terms: Vec<(Vec<i32>, GaussRational)>) -> Result<Self, LaurentError> {
        let mut raw = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            if e.len() != ctx.len() {
                return Err(LaurentError::Context(format!(
                    "exponent vector of length {} in a context of {} variables",
                    e.len(),
                    ctx.len()
                )));
            }
            if e.iter().any(|x| (*x as i64).abs() >= BIAS) {
                return Err(LaurentError::Context("exponent out of range".into()));
            }
            raw.push((pack(&e), c));
        }
        Ok(MultiLaurent { ctx: ctx.clone(), terms: collapse(raw) })
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn raw_terms(&self) -> &[(Mono, GaussRational)] {
        &self.terms
    }

    /// Terms as `(exponent vector, coefficient)` in canonical order.
    pub fn terms(&self) -> Vec<(Vec<i32>, GaussRational)> {
        let n = self.ctx.len();
        self.terms.iter().map(|(k, c)| (unpack(*k, n), c.clone())).collect()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == ONE_KEY && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == ONE_KEY)
    }

    pub fn constant_value(&self) -> Option<GaussRational> {
        match self.terms.as_slice() {
            [] => Some(GaussRational::zero()),
            [(k, c)] if *k == ONE_KEY => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Coefficient of the given exponent vector.
    pub fn coeff(&self, exps: &[i32]) -> GaussRational {
        let k = pack(exps);
        match self.terms.binary_search_by_key(&k, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => GaussRational::zero(),
        }
    }

    pub fn leading(&self) -> Option<(Vec<i32>, GaussRational)> {
        self.terms.last().map(|(k, c)| (unpack(*k, self.ctx.len()), c.clone()))
    }

    fn check(&self, o: &Self) -> Result<(), LaurentError> {
        if same_ctx(&self.ctx, &o.ctx) {
            Ok(())
        } else {
            Err(LaurentError::ContextMismatch(self.ctx.to_string(), o.ctx.to_string()))
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, LaurentError> {
        self.check(o)?;
        Ok(self.add_ref(o))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, LaurentError> {
        self.check(o)?;
        Ok(self.sub_ref(o))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, LaurentError> {
        self.check(o)?;
        Ok(self.mul_ref(o))
    }

    fn assert_ctx(&self, o: &Self) {
        if let Err(e) = self.check(o) {
            panic!("{e}");
        }
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        self.assert_ctx(o);
        if self.terms.is_empty() {
            return o.clone();
        }
        if o.terms.is_empty() {
            return self.clone();
        }
        MultiLaurent { ctx: self.ctx.clone(), terms: merge_sorted(&self.terms, &o.terms, false) }
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.assert_ctx(o);
        if o.terms.is_empty() {
            return self.clone();
        }
        MultiLaurent { ctx: self.ctx.clone(), terms: merge_sorted(&self.terms, &o.terms, true) }
    }

    pub fn neg_ref(&self) -> Self {
        MultiLaurent { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect() }
    }

    pub fn add_assign_ref(&mut self, o: &Self) {
        self.assert_ctx(o);
        if o.terms.is_empty() {
            return;
        }
        if self.terms.is_empty() {
            self.terms = o.terms.clone();
            return;
        }
        self.terms = merge_sorted(&self.terms, &o.terms, false);
    }

    pub fn sub_assign_ref(&mut self, o: &Self) {
        self.assert_ctx(o);
        if o.terms.is_empty() {
            return;
        }
        self.terms = merge_sorted(&self.terms, &o.terms, true);
    }

    fn mul_terms(a: &[(Mono, GaussRational)], b: &[(Mono, GaussRational)]) -> Vec<(Mono, GaussRational)> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let (a, b) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        if a.len() == 1 {
            let (ka, ca) = &a[0];
            return b
                .iter()
                .filter_map(|(kb, cb)| {
                    let c = ca.mul(cb);
                    (!c.is_zero()).then(|| (mono_mul(*ka, *kb), c))
                })
                .collect();
        }
        let mut raw = Vec::with_capacity(a.len() * b.len());
        for (ka, ca) in a {
            for (kb, cb) in b {
                raw.push((mono_mul(*ka, *kb), ca.mul(cb)));
            }
        }
        collapse(raw)
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        self.assert_ctx(o);
        MultiLaurent { ctx: self.ctx.clone(), terms: Self::mul_terms(&self.terms, &o.terms) }
    }

    /// `self += a * b`.
    pub fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        self.assert_ctx(a);
        a.assert_ctx(b);
        let p = Self::mul_terms(&a.terms, &b.terms);
        if p.is_empty() {
            return;
        }
        if self.terms.is_empty() {
            self.terms = p;
        } else {
            self.terms = merge_sorted(&self.terms, &p, false);
        }
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        MultiLaurent { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(k, x)| (*k, x.mul(c))).collect() }
    }

    /// Multiply by `x^exps`.
    pub fn shift(&self, exps: &[i32]) -> Self {
        let m = pack(exps);
        MultiLaurent { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(k, c)| (mono_mul(*k, m), c.clone())).collect() }
    }

    pub fn pow(&self, e: i32) -> Result<Self, LaurentError> {
        if e < 0 {
            let inv = self.inverse().ok_or(LaurentError::NonMonomialNegativePower)?;
            return inv.pow(-e);
        }
        let mut base = self.clone();
        let mut k = e as u32;
        let mut acc = Self::one(&self.ctx);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_ref(&base);
            }
        }
        Ok(acc)
    }

    /// Inverse in the Laurent ring; exists exactly for nonzero monomials.
    pub fn inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = &self.terms[0];
        let ik = ONE_KEY.wrapping_mul(2).wrapping_sub(*k);
        Some(MultiLaurent { ctx: self.ctx.clone(), terms: vec![(ik, c.inv())] })
    }

    pub fn conj(&self) -> Self {
        MultiLaurent { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(k, c)| (*k, c.conj())).collect() }
    }

    /// Per-variable minimum and maximum exponents; `None` for zero.
    pub fn exponent_bounds(&self) -> Option<(Vec<i32>, Vec<i32>)> {
        let n = self.ctx.len();
        let mut it = self.terms.iter();
        let first = unpack(it.next()?.0, n);
        let (mut lo, mut hi) = (first.clone(), first);
        for (k, _) in it {
            for i in 0..n {
                let e = exponent(*k, i);
                lo[i] = lo[i].min(e);
                hi[i] = hi[i].max(e);
            }
        }
        Some((lo, hi))
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`
    /// in the Laurent ring.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        self.assert_ctx(d);
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        if let Some(inv) = d.inverse() {
            return Some(self.mul_ref(&inv));
        }
        let n = self.ctx.len();
        let (plo, phi) = self.exponent_bounds()?;
        let (dlo, dhi) = d.exponent_bounds()?;
        let qlo: Vec<i32> = (0..n).map(|i| plo[i] - dlo[i]).collect();
        let qhi: Vec<i32> = (0..n).map(|i| phi[i] - dhi[i]).collect();
        if (0..n).any(|i| qlo[i] > qhi[i]) {
            return None;
        }
        let (dk, dc) = d.terms.last().cloned()?;
        let dc_inv = dc.inv();
        let mut rem = self.terms.clone();
        let mut quot: Vec<(Mono, GaussRational)> = Vec::new();
        while let Some((rk, rc)) = rem.last().cloned() {
            let qk = mono_div(rk, dk);
            if (0..n).any(|i| {
                let e = exponent(qk, i);
                e < qlo[i] || e > qhi[i]
            }) {
                return None;
            }
            let qc = rc.mul(&dc_inv);
            let sub = Self::mul_terms(&[(qk, qc.clone())], &d.terms);
            rem = merge_sorted(&rem, &sub, true);
            quot.push((qk, qc));
        }
        quot.reverse();
        Some(MultiLaurent { ctx: self.ctx.clone(), terms: quot })
    }

    /// Evaluate at a point given per internal variable.
    pub fn eval(&self, point: &[GaussRational]) -> Result<GaussRational, LaurentError> {
        if point.len() != self.ctx.len() {
            return Err(LaurentError::Context("evaluation point has wrong length".into()));
        }
        let n = self.ctx.len();
        let mut cache: HashMap<(usize, i32), GaussRational> = HashMap::new();
        let mut acc = GaussRational::zero();
        for (k, c) in &self.terms {
            let mut v = c.clone();
            for (i, x) in point.iter().enumerate().take(n) {
                let e = exponent(*k, i);
                if e == 0 {
                    continue;
                }
                if x.is_zero() {
                    if e < 0 {
                        return Err(LaurentError::ZeroAtNegativeExponent(self.ctx.vars()[i].name.clone()));
                    }
                    v = GaussRational::zero();
                    break;
                }
                let p = cache.entry((i, e)).or_insert_with(|| x.pow(e));
                v = v.mul(p);
            }
            acc = acc.add(&v);
        }
        Ok(acc)
    }

    /// Evaluate at a point given by display-variable values (so `t = 4`
    /// requires the square-root variable to be `2`); convenience for integer
    /// powers only.
    pub fn eval_named(&self, assignments: &[(&str, GaussRational)]) -> Result<GaussRational, LaurentError> {
        let mut point = vec![GaussRational::zero(); self.ctx.len()];
        let mut seen = vec![false; self.ctx.len()];
        for (name, v) in assignments {
            let i = self
                .ctx
                .index_of(name)
                .ok_or_else(|| LaurentError::UnknownVariable(name.to_string()))?;
            point[i] = v.clone();
            seen[i] = true;
        }
        for (i, s) in seen.iter().enumerate() {
            if !s && self.terms.iter().any(|(k, _)| exponent(*k, i) != 0) {
                return Err(LaurentError::UnassignedVariable(self.ctx.vars()[i].name.clone()));
            }
        }
        self.eval(&point)
    }

    /// Replace each internal variable by a polynomial in `target`. Variables
    /// that occur with a negative exponent must map to monomials.
    pub fn substitute(&self, target: &Arc<VarContext>, values: &[MultiLaurent]) -> Result<Self, LaurentError> {
        if values.len() != self.ctx.len() {
            return Err(LaurentError::UnassignedVariable(format!(
                "{} assignments for {} variables",
                values.len(),
                self.ctx.len()
            )));
        }
        for v in values {
            if !same_ctx(v.ctx(), target) {
                return Err(LaurentError::ContextMismatch(v.ctx.to_string(), target.to_string()));
            }
        }
        let n = self.ctx.len();
        let mut cache: HashMap<(usize, i32), MultiLaurent> = HashMap::new();
        let mut acc = MultiLaurent::zero(target);
        for (k, c) in &self.terms {
            let mut term = MultiLaurent::constant(target, c.clone());
            for (i, val) in values.iter().enumerate().take(n) {
                let e = exponent(*k, i);
                if e == 0 {
                    continue;
                }
                if !cache.contains_key(&(i, e)) {
                    let p = val.pow(e).map_err(|_| LaurentError::NonMonomialNegativePower)?;
                    cache.insert((i, e), p);
                }
                term = term.mul_ref(&cache[&(i, e)]);
            }
            acc.add_assign_ref(&term);
        }
        Ok(acc)
    }

    /// Substitute by name: `(internal variable, value)`; unassigned variables
    /// are kept only if `target` has a variable with the same name.
    pub fn substitute_named(&self, target: &Arc<VarContext>, assignments: &[(&str, MultiLaurent)]) -> Result<Self, LaurentError> {
        let mut values = Vec::with_capacity(self.ctx.len());
        for v in self.ctx.vars() {
            if let Some((_, val)) = assignments.iter().find(|(n, _)| *n == v.name) {
                values.push(val.clone());
            } else if let Some(j) = target.index_of(&v.name) {
                values.push(MultiLaurent::var(target, j));
            } else if self.terms.iter().all(|(k, _)| exponent(*k, self.ctx.index_of(&v.name).unwrap()) == 0) {
                values.push(MultiLaurent::one(target));
            } else {
                return Err(LaurentError::UnassignedVariable(v.name.clone()));
            }
        }
        self.substitute(target, &values)
    }

    /// Coefficients all Gaussian integers.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_gauss_integer())
    }

    /// All exponents of internal variable `i` divisible by `m`.
    pub fn exponents_divisible(&self, i: usize, m: i32) -> bool {
        self.terms.iter().all(|(k, _)| exponent(*k, i).rem_euclid(m) == 0)
    }

    /// Canonical rescaling: leading coefficient one.
    pub fn monic(&self) -> (Self, GaussRational) {
        match self.terms.last() {
            None => (self.clone(), GaussRational::one()),
            Some((_, c)) => {
                let c = c.clone();
                (self.scale(&c.inv()), c)
            }
        }
    }

    /// Move the polynomial into another context with the same variables.
    pub fn with_ctx(&self, ctx: &Arc<VarContext>) -> Result<Self, LaurentError> {
        if ctx.vars() != self.ctx.vars() {
            return Err(LaurentError::ContextMismatch(self.ctx.to_string(), ctx.to_string()));
        }
        Ok(MultiLaurent { ctx: ctx.clone(), terms: self.terms.clone() })
    }
}

impl Add for &MultiLaurent {
    type Output = MultiLaurent;
    fn add(self, o: &MultiLaurent) -> MultiLaurent {
        self.add_ref(o)
    }
}

impl Sub for &MultiLaurent {
    type Output = MultiLaurent;
    fn sub(self, o: &MultiLaurent) -> MultiLaurent {
        self.sub_ref(o)
    }
}

impl Mul for &MultiLaurent {
    type Output = MultiLaurent;
    fn mul(self, o: &MultiLaurent) -> MultiLaurent {
        self.mul_ref(o)
    }
}

impl Neg for &MultiLaurent {
    type Output = MultiLaurent;
    fn neg(self) -> MultiLaurent {
        self.neg_ref()
    }
}

impl Add for MultiLaurent {
    type Output = MultiLaurent;
    fn add(self, o: MultiLaurent) -> MultiLaurent {
        self.add_ref(&o)
    }
}

impl Sub for MultiLaurent {
    type Output = MultiLaurent;
    fn sub(self, o: MultiLaurent) -> MultiLaurent {
        self.sub_ref(&o)
    }
}

impl Mul for MultiLaurent {
    type Output = MultiLaurent;
    fn mul(self, o: MultiLaurent) -> MultiLaurent {
        self.mul_ref(&o)
    }
}

impl Neg for MultiLaurent {
    type Output = MultiLaurent;
    fn neg(self) -> MultiLaurent {
        self.neg_ref()
    }
}

pub(crate) fn rat_pair_str(c: &GaussRational) -> (String, String) {
    (c.re.to_string(), c.im.to_string())
}

pub(crate) fn rat_from_str(s: &str) -> Result<Rat, LaurentError> {
    s.parse::<Rat>().map_err(|e| LaurentError::Parse { pos: 0, msg: e.to_string() })
}
