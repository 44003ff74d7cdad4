//! Rational functions over the Laurent ring and exact sparse linear solving.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::laurent::{GaussRational, LaurentError, MultiLaurent, Rat, VarContext};

/// `num / ∏ den`, where each denominator factor is normalised so that its
/// leading term is exactly `1`. Monomials are units and never appear in `den`.
#[derive(Clone, Debug)]
pub struct RationalFn {
    num: MultiLaurent,
    den: Vec<MultiLaurent>,
}

/// Split `p` as `unit · q` with `q` having leading term `1`.
fn normalize_factor(p: &MultiLaurent) -> (MultiLaurent, MultiLaurent) {
    let (exps, c) = p.leading().expect("nonzero factor");
    let unit = MultiLaurent::monomial(p.ctx(), c, &exps);
    let q = p.div_exact(&unit).expect("division by a unit");
    (unit, q)
}

impl RationalFn {
    pub fn from_poly(p: MultiLaurent) -> Self {
        RationalFn { num: p, den: Vec::new() }
    }

    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        Self::from_poly(MultiLaurent::zero(ctx))
    }

    pub fn one(ctx: &Arc<VarContext>) -> Self {
        Self::from_poly(MultiLaurent::one(ctx))
    }

    /// `num / den`; fails on a zero denominator.
    pub fn new(num: MultiLaurent, den: MultiLaurent) -> Result<Self, LaurentError> {
        if den.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        Ok(Self::from_poly(num).mul(&Self::from_poly(den).inv()))
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        self.num.ctx()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &MultiLaurent {
        &self.num
    }

    pub fn denominator(&self) -> MultiLaurent {
        self.den.iter().fold(MultiLaurent::one(self.num.ctx()), |acc, f| acc.mul_ref(f))
    }

    pub fn denominator_factors(&self) -> &[MultiLaurent] {
        &self.den
    }

    /// The value as a Laurent polynomial, if the denominator cancelled.
    pub fn as_laurent(&self) -> Option<&MultiLaurent> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    fn cancel(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let mut kept = Vec::with_capacity(self.den.len());
        for f in std::mem::take(&mut self.den) {
            match self.num.div_exact(&f) {
                Some(q) => self.num = q,
                None => kept.push(f),
            }
        }
        kept.sort_by_key(|a| a.to_string());
        self.den = kept;
        self
    }

    pub fn neg(&self) -> Self {
        RationalFn { num: self.num.neg_ref(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.ctx());
        }
        let mut den = self.den.clone();
        den.extend(o.den.iter().cloned());
        RationalFn { num: self.num.mul_ref(&o.num), den }.cancel()
    }

    pub fn scale(&self, p: &MultiLaurent) -> Self {
        RationalFn { num: self.num.mul_ref(p), den: self.den.clone() }.cancel()
    }

    fn combine(&self, o: &Self, sub: bool) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if sub { o.neg() } else { o.clone() };
        }
        let mut rest_a = self.den.clone();
        let mut extra_b = Vec::new();
        for f in &o.den {
            if let Some(i) = rest_a.iter().position(|g| g == f) {
                rest_a.swap_remove(i);
            } else {
                extra_b.push(f.clone());
            }
        }
        // lcm = self.den ∪ extra_b; self gets extra_b, o gets rest_a
        let mut a = self.num.clone();
        for f in &extra_b {
            a = a.mul_ref(f);
        }
        let mut b = o.num.clone();
        for f in &rest_a {
            b = b.mul_ref(f);
        }
        let num = if sub { a.sub_ref(&b) } else { a.add_ref(&b) };
        let mut den = self.den.clone();
        den.extend(extra_b);
        RationalFn { num, den }.cancel()
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, true)
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero rational function");
        let mut num = MultiLaurent::one(self.ctx());
        for f in &self.den {
            num = num.mul_ref(f);
        }
        if self.num.is_monomial() {
            return RationalFn { num: num.mul_ref(&self.num.inverse().expect("unit")), den: Vec::new() };
        }
        let (unit, q) = normalize_factor(&self.num);
        RationalFn { num: num.mul_ref(&unit.inverse().expect("unit")), den: vec![q] }.cancel()
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    pub fn eval(&self, point: &[GaussRational]) -> Result<GaussRational, LaurentError> {
        let n = self.num.eval(point)?;
        let mut d = GaussRational::one();
        for f in &self.den {
            d = d.mul(&f.eval(point)?);
        }
        if d.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        Ok(n.div(&d))
    }

    /// Substitute variables in numerator and denominator.
    pub fn substitute(&self, target: &Arc<VarContext>, values: &[MultiLaurent]) -> Result<Self, LaurentError> {
        let mut r = Self::from_poly(self.num.substitute(target, values)?);
        for f in &self.den {
            r = r.mul(&Self::from_poly(f.substitute(target, values)?).inv());
        }
        Ok(r)
    }
}

impl PartialEq for RationalFn {
    fn eq(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}

impl From<MultiLaurent> for RationalFn {
    fn from(p: MultiLaurent) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let d: Vec<String> = self.den.iter().map(|x| format!("({x})")).collect();
        write!(f, "({})/{}", self.num, d.join("*"))
    }
}

/// Sparse linear system `A x = b` with Laurent-polynomial coefficients.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub ctx: Arc<VarContext>,
    pub unknowns: Vec<String>,
    pub rows: Vec<(Vec<(usize, MultiLaurent)>, MultiLaurent)>,
}

/// `v` times the least common multiple of its stored denominator factors,
/// or `None` if some entry keeps a denominator.
pub fn clear_denominators(v: &[RationalFn]) -> Option<Vec<MultiLaurent>> {
    let mut lcm: Vec<MultiLaurent> = Vec::new();
    for x in v {
        let mut rest = lcm.clone();
        for f in x.denominator_factors() {
            match rest.iter().position(|g| g == f) {
                Some(i) => {
                    rest.swap_remove(i);
                }
                None => lcm.push(f.clone()),
            }
        }
    }
    let d = lcm.iter().fold(MultiLaurent::one(v.first()?.ctx()), |acc, f| acc.mul_ref(f));
    v.iter().map(|x| x.scale(&d).as_laurent().cloned()).collect()
}

/// Parametric solution `x = particular + Σ_k p_k · basis[k]`, one basis vector
/// per free unknown.
#[derive(Clone, Debug)]
pub struct Solution {
    pub rank: usize,
    pub consistent: bool,
    pub pivots: Vec<usize>,
    pub free: Vec<usize>,
    pub particular: Vec<RationalFn>,
    pub basis: Vec<Vec<RationalFn>>,
}

impl Solution {
    pub fn nullity(&self) -> usize {
        self.free.len()
    }
}

fn pivot_cost(x: &RationalFn) -> (usize, usize) {
    let unit = x.as_laurent().is_some_and(|p| p.is_monomial());
    (if unit { 0 } else { 1 + x.den.len() }, x.num.num_terms())
}

impl LinearSystem {
    pub fn new(ctx: &Arc<VarContext>, unknowns: Vec<String>) -> Self {
        LinearSystem { ctx: ctx.clone(), unknowns, rows: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.unknowns.len()
    }

    /// Add `Σ coeffs = rhs`; zero rows are kept only if `rhs ≠ 0`.
    pub fn push(&mut self, coeffs: Vec<(usize, MultiLaurent)>, rhs: MultiLaurent) {
        let mut m: BTreeMap<usize, MultiLaurent> = BTreeMap::new();
        for (j, c) in coeffs {
            let e = m.entry(j).or_insert_with(|| MultiLaurent::zero(&self.ctx));
            e.add_assign_ref(&c);
        }
        let coeffs: Vec<(usize, MultiLaurent)> = m.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if coeffs.is_empty() && rhs.is_zero() {
            return;
        }
        self.rows.push((coeffs, rhs));
    }

    /// Exact sparse elimination over the rational function field. Pivots are
    /// chosen by Markowitz cost among unit entries first; unknowns listed in
    /// `prefer_free` are pivoted on only when nothing else is left, so they
    /// become the free parameters when possible. Forward elimination is
    /// followed by back substitution.
    pub fn solve(&self, prefer_free: &[usize]) -> Solution {
        let n = self.nvars();
        // row: coefficients plus rhs stored at key n
        let mut rows: Vec<Option<BTreeMap<usize, RationalFn>>> = self
            .rows
            .iter()
            .map(|(c, b)| {
                let mut m: BTreeMap<usize, RationalFn> = c.iter().map(|(j, x)| (*j, RationalFn::from_poly(x.clone()))).collect();
                if !b.is_zero() {
                    m.insert(n, RationalFn::from_poly(b.clone()));
                }
                Some(m)
            })
            .collect();
        let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for (r, row) in rows.iter().enumerate() {
            for &j in row.as_ref().expect("fresh").keys() {
                if j < n {
                    col_rows[j].insert(r);
                }
            }
        }
        let mut pivot_rows: Vec<(usize, BTreeMap<usize, RationalFn>)> = Vec::new();
        let mut is_pivot = vec![false; n];
        loop {
            let mut best: Option<((bool, usize, usize, usize), usize, usize)> = None;
            for late in [false, true] {
                for c in (0..n).filter(|&c| !is_pivot[c] && prefer_free.contains(&c) == late) {
                    let cc = col_rows[c].len();
                    for &r in &col_rows[c] {
                        let row = rows[r].as_ref().expect("live row");
                        let (unit, terms) = pivot_cost(&row[&c]);
                        let key = (unit > 0, (row.len() - 1) * (cc - 1), unit, terms);
                        if best.as_ref().is_none_or(|b| key < b.0) {
                            best = Some((key, r, c));
                        }
                    }
                }
                if best.is_some() {
                    break;
                }
            }
            let Some((_, p, c)) = best else { break };
            let prow_raw = rows[p].take().expect("live row");
            for &j in prow_raw.keys() {
                if j < n {
                    col_rows[j].remove(&p);
                }
            }
            let inv = prow_raw[&c].inv();
            let prow: BTreeMap<usize, RationalFn> = prow_raw.iter().map(|(j, x)| (*j, if *j == c { RationalFn::one(&self.ctx) } else { x.mul(&inv) })).collect();
            let targets: Vec<usize> = col_rows[c].iter().copied().collect();
            for r in targets {
                let row = rows[r].as_mut().expect("live row");
                let f = row.remove(&c).expect("column entry");
                col_rows[c].remove(&r);
                for (j, x) in &prow {
                    if *j == c {
                        continue;
                    }
                    let v = match row.get(j) {
                        Some(y) => y.sub(&f.mul(x)),
                        None => f.mul(x).neg(),
                    };
                    if v.is_zero() {
                        row.remove(j);
                        if *j < n {
                            col_rows[*j].remove(&r);
                        }
                    } else {
                        if *j < n && !row.contains_key(j) {
                            col_rows[*j].insert(r);
                        }
                        row.insert(*j, v);
                    }
                }
                if row.is_empty() {
                    rows[r] = None;
                }
            }
            is_pivot[c] = true;
            pivot_rows.push((c, prow));
        }
        let consistent = rows.iter().flatten().all(|r| !(r.len() == 1 && r.contains_key(&n)));
        let free: Vec<usize> = (0..n).filter(|j| !is_pivot[*j]).collect();
        let zero = RationalFn::zero(&self.ctx);
        // value of each unknown: (constant, coefficient per free unknown)
        let mut value: Vec<Option<(RationalFn, Vec<RationalFn>)>> = vec![None; n];
        for (k, &f) in free.iter().enumerate() {
            let mut coeffs = vec![zero.clone(); free.len()];
            coeffs[k] = RationalFn::one(&self.ctx);
            value[f] = Some((zero.clone(), coeffs));
        }
        for (c, prow) in pivot_rows.iter().rev() {
            let mut constant = prow.get(&n).cloned().unwrap_or_else(|| zero.clone());
            let mut coeffs = vec![zero.clone(); free.len()];
            for (j, a) in prow {
                if *j == *c || *j == n {
                    continue;
                }
                let (vc, vf) = value[*j].as_ref().expect("later pivots and free unknowns are known");
                constant = constant.sub(&a.mul(vc));
                for (k, x) in vf.iter().enumerate() {
                    if !x.is_zero() {
                        coeffs[k] = coeffs[k].sub(&a.mul(x));
                    }
                }
            }
            value[*c] = Some((constant, coeffs));
        }
        let mut particular = vec![zero.clone(); n];
        let mut basis = vec![vec![zero.clone(); n]; free.len()];
        for (j, v) in value.into_iter().enumerate() {
            let (c, f) = v.expect("every unknown solved");
            particular[j] = c;
            for (k, x) in f.into_iter().enumerate() {
                basis[k][j] = x;
            }
        }
        let mut pivots: Vec<usize> = pivot_rows.iter().map(|(c, _)| *c).collect();
        pivots.sort_unstable();
        Solution { rank: pivots.len(), consistent, pivots, free, particular, basis }
    }

    /// Indices of a maximal set of rows that are linearly independent at the
    /// given point (rank computed modulo a prime); `None` if the point is a
    /// pole of some coefficient.
    pub fn independent_rows_at(&self, point: &[GaussRational]) -> Option<Vec<usize>> {
        let pt: Vec<u64> = point.iter().map(modp::gauss).collect::<Option<_>>()?;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.rows[r].0.len());
        // echelon rows keyed by leading column
        let mut echelon: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        let mut chosen = Vec::new();
        for r in order {
            let mut v = vec![0u64; self.nvars()];
            for (j, x) in &self.rows[r].0 {
                v[*j] = modp::eval(x, &pt)?;
            }
            for (&lead, e) in &echelon {
                let f = v[lead];
                if f != 0 {
                    for (x, &y) in v.iter_mut().zip(e) {
                        if y != 0 {
                            *x = modp::sub(*x, modp::mul(f, y));
                        }
                    }
                }
            }
            if let Some(lead) = v.iter().position(|&x| x != 0) {
                let iv = modp::inv(v[lead]).expect("nonzero");
                let v: Vec<u64> = v.iter().map(|&x| modp::mul(x, iv)).collect();
                for e in echelon.values_mut() {
                    let f = e[lead];
                    if f != 0 {
                        for (x, &y) in e.iter_mut().zip(&v) {
                            if y != 0 {
                                *x = modp::sub(*x, modp::mul(f, y));
                            }
                        }
                    }
                }
                echelon.insert(lead, v);
                chosen.push(r);
            }
        }
        chosen.sort_unstable();
        Some(chosen)
    }

    /// `true` if `particular + Σ pₖ basis[k]` satisfies every row exactly.
    pub fn verify(&self, sol: &Solution) -> bool {
        let zero = RationalFn::zero(&self.ctx);
        self.rows.iter().all(|(c, b)| {
            let lhs = c.iter().fold(zero.clone(), |acc, (j, x)| acc.add(&sol.particular[*j].scale(x)));
            if lhs != RationalFn::from_poly(b.clone()) {
                return false;
            }
            sol.basis.iter().all(|v| c.iter().fold(zero.clone(), |acc, (j, x)| acc.add(&v[*j].scale(x))).is_zero())
        })
    }

    /// Solve a row subset selected at a random point, then check the result
    /// against every row. Falls back to the full system if the check fails.
    pub fn solve_reduced(&self, prefer_free: &[usize], rng: &mut impl Rng) -> Solution {
        for _ in 0..3 {
            let point = random_point(rng, self.ctx.len());
            let Some(keep) = self.independent_rows_at(&point) else { continue };
            let sub = LinearSystem { ctx: self.ctx.clone(), unknowns: self.unknowns.clone(), rows: keep.iter().map(|&r| self.rows[r].clone()).collect() };
            let sol = sub.solve(prefer_free);
            if sol.consistent && self.verify(&sol) {
                return sol;
            }
        }
        self.solve(prefer_free)
    }

    /// Rank of the coefficient matrix at a rational point, computed modulo a
    /// 61-bit prime; `None` if the point makes some coefficient undefined.
    pub fn rank_at(&self, point: &[GaussRational]) -> Option<usize> {
        Some(modp::rank(self.dense_at(point)?))
    }

    fn dense_at(&self, point: &[GaussRational]) -> Option<Vec<Vec<u64>>> {
        let pt: Vec<u64> = point.iter().map(modp::gauss).collect::<Option<_>>()?;
        let mut m: Vec<Vec<u64>> = Vec::with_capacity(self.rows.len());
        for (c, _) in &self.rows {
            let mut row = vec![0u64; self.nvars()];
            for (j, x) in c {
                row[*j] = modp::eval(x, &pt)?;
            }
            m.push(row);
        }
        Some(m)
    }

    /// Supports of `want` kernel vectors, taken modulo a prime at `point`,
    /// that together with `known` raise the rank by `want`. Kernel bases in
    /// echelon form over `trials` random column orders are searched and the
    /// smallest supports are kept greedily. `None` if the point is bad or no
    /// such vectors were found.
    pub fn kernel_supports_extending(
        &self,
        point: &[GaussRational],
        known: &[Vec<MultiLaurent>],
        want: usize,
        trials: usize,
        rng: &mut impl Rng,
    ) -> Option<Vec<Vec<usize>>> {
        use rand::seq::SliceRandom;
        let n = self.nvars();
        let pt: Vec<u64> = point.iter().map(modp::gauss).collect::<Option<_>>()?;
        let mut span: Vec<Vec<u64>> = known.iter().map(|x| x.iter().map(|v| modp::eval(v, &pt)).collect::<Option<_>>()).collect::<Option<_>>()?;
        let (m, pivots) = modp::rref(self.dense_at(point)?, &(0..n).collect::<Vec<_>>());
        let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
        let kernel: Vec<Vec<u64>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![0u64; n];
                v[f] = 1;
                for (row, &c) in m.iter().zip(&pivots) {
                    v[c] = modp::sub(0, row[f]);
                }
                v
            })
            .collect();
        let mut found: BTreeMap<Vec<usize>, Vec<u64>> = BTreeMap::new();
        let mut order: Vec<usize> = (0..n).collect();
        for _ in 0..trials {
            order.shuffle(rng);
            for v in modp::rref(kernel.clone(), &order).0 {
                found.entry((0..n).filter(|&j| v[j] != 0).collect()).or_insert(v);
            }
        }
        let mut by_size: Vec<(Vec<usize>, Vec<u64>)> = found.into_iter().collect();
        by_size.sort_by_key(|(s, _)| s.len());
        let mut rank = modp::rank(span.clone());
        let mut out = Vec::new();
        for (support, v) in by_size {
            if out.len() == want {
                break;
            }
            span.push(v);
            let r = modp::rank(span.clone());
            if r > rank {
                rank = r;
                out.push(support);
            } else {
                span.pop();
            }
        }
        (out.len() == want).then_some(out)
    }

    /// The system with every unknown outside `keep` set to zero, unknowns
    /// renumbered in the order of `keep`.
    pub fn restrict(&self, keep: &[usize]) -> LinearSystem {
        let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &j)| (j, i)).collect();
        let mut out = LinearSystem::new(&self.ctx, keep.iter().map(|&j| self.unknowns[j].clone()).collect());
        for (c, b) in &self.rows {
            let coeffs: Vec<(usize, MultiLaurent)> = c.iter().filter_map(|(j, x)| index.get(j).map(|&i| (i, x.clone()))).collect();
            out.push(coeffs, b.clone());
        }
        out
    }

    /// Ranks at `samples` random rational points drawn from `rng`.
    pub fn probabilistic_ranks(&self, rng: &mut impl Rng, samples: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(samples);
        while out.len() < samples {
            let point = random_point(rng, self.ctx.len());
            if let Some(r) = self.rank_at(&point) {
                out.push(r);
            }
        }
        out
    }
}

/// A random point with rational coordinates avoiding `0` and `±1`.
pub fn random_point(rng: &mut impl Rng, n: usize) -> Vec<GaussRational> {
    (0..n)
        .map(|_| loop {
            let p: i64 = rng.gen_range(-97..=97);
            let q: i64 = rng.gen_range(1..=89);
            let r = Rat::new(p, q);
            if !r.is_zero() && r.abs() != Rat::one() {
                break GaussRational::real(r);
            }
        })
        .collect()
}

/// Arithmetic modulo the prime `P ≡ 1 (mod 4)`, so that `√-1` exists.
mod modp {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;

    use crate::laurent::{exponent, GaussRational, MultiLaurent, Rat};

    pub const P: u64 = 2305843009213693921;

    pub fn mul(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % P as u128) as u64
    }

    pub fn add(a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % P as u128) as u64
    }

    pub fn sub(a: u64, b: u64) -> u64 {
        add(a, P - b)
    }

    pub fn pow(mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(a: u64) -> Option<u64> {
        (a != 0).then(|| pow(a, P - 2))
    }

    fn sqrt_minus_one() -> u64 {
        (2..).map(|g| pow(g, (P - 1) / 4)).find(|&x| mul(x, x) == P - 1).expect("P = 1 mod 4")
    }

    fn big(n: &BigInt) -> u64 {
        let m: BigInt = ((n % P) + P) % P;
        m.to_u64().expect("reduced")
    }

    fn rat(r: &Rat) -> Option<u64> {
        Some(mul(big(&r.numer()), inv(big(&r.denom()))?))
    }

    pub fn gauss(x: &GaussRational) -> Option<u64> {
        let re = rat(&x.re)?;
        let im = rat(&x.im)?;
        Some(if im == 0 { re } else { add(re, mul(im, sqrt_minus_one())) })
    }

    pub fn eval(p: &MultiLaurent, pt: &[u64]) -> Option<u64> {
        let mut acc = 0;
        for (k, c) in p.raw_terms() {
            let mut term = gauss(c)?;
            for (i, &v) in pt.iter().enumerate() {
                let e = exponent(*k, i);
                let base = if e < 0 { inv(v)? } else { v };
                term = mul(term, pow(base, e.unsigned_abs() as u64));
            }
            acc = add(acc, term);
        }
        Some(acc)
    }

    /// Reduced row echelon form with columns visited in `order`; returns the
    /// nonzero rows and their pivot columns.
    pub fn rref(mut m: Vec<Vec<u64>>, order: &[usize]) -> (Vec<Vec<u64>>, Vec<usize>) {
        let mut rank = 0;
        let mut pivots = Vec::new();
        for &c in order {
            let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
            m.swap(rank, p);
            let iv = inv(m[rank][c]).expect("nonzero");
            let prow: Vec<u64> = m[rank].iter().map(|&x| mul(x, iv)).collect();
            for (r, row) in m.iter_mut().enumerate() {
                if r == rank || row[c] == 0 {
                    continue;
                }
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&prow) {
                    if y != 0 {
                        *x = sub(*x, mul(f, y));
                    }
                }
            }
            m[rank] = prow;
            pivots.push(c);
            rank += 1;
        }
        m.truncate(rank);
        (m, pivots)
    }

    pub fn rank(mut m: Vec<Vec<u64>>) -> usize {
        let ncols = m.first().map(|r| r.len()).unwrap_or(0);
        let mut rank = 0;
        for c in 0..ncols {
            let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
            m.swap(rank, p);
            let iv = inv(m[rank][c]).expect("nonzero");
            let prow: Vec<u64> = m[rank].iter().map(|&x| mul(x, iv)).collect();
            for (r, row) in m.iter_mut().enumerate() {
                if r == rank || row[c] == 0 {
                    continue;
                }
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&prow) {
                    if y != 0 {
                        *x = sub(*x, mul(f, y));
                    }
                }
            }
            m[rank] = prow;
            rank += 1;
        }
        rank
    }
}
