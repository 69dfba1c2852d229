//! Multigraded sparse polynomials over an exact field.
//!
//! A ring is described by [`RingSpec`]: an ordered list of variable blocks,
//! one block per projective factor of the source, so the grading group is
//! `Z^s` with `s` the number of blocks. Monomials carry one exponent per
//! variable; the multidegree of a monomial is its per-block degree vector.
//!
//! The monomial order is fixed once and for all: graded-lexicographic
//! within each block, blocks compared in declaration order, largest first.
//! [`RingSpec::graded_basis`] enumerates monomial bases in that order, which
//! pins down every matrix layout produced by the crate.

mod gcd;
pub mod parse;
pub mod univar;

pub use gcd::{gcd, gcd_many};
pub use parse::parse_polynomial;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{Field, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomial rings differ")]
    RingMismatch,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("bad coefficient: {0}")]
    BadCoefficient(#[from] FieldError),
    #[error("ring needs at least one block, every block needs >= 2 globally distinct variables")]
    BadRingSpec,
    #[error("map components must be homogeneous of one common multidegree")]
    InhomogeneousMap,
    #[error("map components must not all be zero")]
    ZeroMap,
    #[error("need at least two map components")]
    TooFewComponents,
}

/// Exponent vector of a monomial, one entry per ring variable.
pub type Expo = Vec<u32>;

/// An element of the grading group `Z^s`.
#[derive(
    Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub struct MultiDeg(pub Vec<i64>);

impl MultiDeg {
    pub fn zero(s: usize) -> Self {
        MultiDeg(vec![0; s])
    }

    pub fn scalar(d: i64) -> Self {
        MultiDeg(vec![d])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Componentwise partial order: `self <= other` in every coordinate.
    pub fn le(&self, other: &MultiDeg) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    pub fn add(&self, other: &MultiDeg) -> MultiDeg {
        MultiDeg(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &MultiDeg) -> MultiDeg {
        MultiDeg(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> MultiDeg {
        MultiDeg(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for MultiDeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            write!(
                f,
                "({})",
                self.0
                    .iter()
                    .map(|a| a.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        }
    }
}

/// A multigraded polynomial ring: variable blocks over an exact field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingSpec<K: Field> {
    blocks: Vec<Vec<String>>,
    field: K,
    // derived
    names: Vec<String>,
    starts: Vec<usize>, // block b occupies names[starts[b]..starts[b+1]]
}

impl<K: Field> RingSpec<K> {
    pub fn new(blocks: Vec<Vec<String>>, field: K) -> Result<Arc<Self>, PolyError> {
        if blocks.is_empty() || blocks.iter().any(|b| b.len() < 2) {
            return Err(PolyError::BadRingSpec);
        }
        let names: Vec<String> = blocks.iter().flatten().cloned().collect();
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if n.is_empty() || !seen.insert(n.clone()) {
                return Err(PolyError::BadRingSpec);
            }
        }
        let mut starts = Vec::with_capacity(blocks.len() + 1);
        let mut acc = 0usize;
        for b in &blocks {
            starts.push(acc);
            acc += b.len();
        }
        starts.push(acc);
        Ok(Arc::new(RingSpec {
            blocks,
            field,
            names,
            starts,
        }))
    }

    /// Ring `k[x_1..x_n]` for a single projective factor `P^{n-1}`.
    pub fn projective(names: &[&str], field: K) -> Result<Arc<Self>, PolyError> {
        RingSpec::new(vec![names.iter().map(|s| s.to_string()).collect()], field)
    }

    /// The coefficient ring `k[T_1..T_r]` of the target space.
    pub fn target(r: usize, field: K) -> Arc<Self> {
        let names: Vec<String> = (1..=r).map(|i| format!("T{i}")).collect();
        RingSpec::new(vec![names], field).expect("target ring is well-formed")
    }

    /// Extend by one more projective factor (used for `X x P^1` and `R[T]`).
    pub fn with_extra_block(&self, names: &[&str]) -> Result<Arc<Self>, PolyError> {
        let mut blocks = self.blocks.clone();
        blocks.push(names.iter().map(|s| s.to_string()).collect());
        RingSpec::new(blocks, self.field.clone())
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<String>] {
        &self.blocks
    }

    pub fn var_names(&self) -> &[String] {
        &self.names
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn block_range(&self, b: usize) -> std::ops::Range<usize> {
        self.starts[b]..self.starts[b + 1]
    }

    pub fn block_of_var(&self, v: usize) -> usize {
        (0..self.num_blocks())
            .find(|&b| self.block_range(b).contains(&v))
            .expect("variable index in range")
    }

    pub fn multideg_of_expo(&self, e: &Expo) -> MultiDeg {
        MultiDeg(
            (0..self.num_blocks())
                .map(|b| self.block_range(b).map(|v| e[v] as i64).sum())
                .collect(),
        )
    }

    /// Block-graded-lex comparison, `Greater` meaning "earlier in display".
    pub fn cmp_expo(&self, a: &Expo, b: &Expo) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        for blk in 0..self.num_blocks() {
            let r = self.block_range(blk);
            let da: u64 = a[r.clone()].iter().map(|&x| x as u64).sum();
            let db: u64 = b[r.clone()].iter().map(|&x| x as u64).sum();
            match da.cmp(&db) {
                Ordering::Equal => {}
                o => return o,
            }
            for v in r {
                match a[v].cmp(&b[v]) {
                    Ordering::Equal => {}
                    o => return o,
                }
            }
        }
        Ordering::Equal
    }

    /// All monomials of multidegree `nu`, largest first in the ring order.
    /// Empty when any component is negative.
    pub fn graded_basis(&self, nu: &MultiDeg) -> Vec<Expo> {
        assert_eq!(nu.len(), self.num_blocks(), "multidegree rank mismatch");
        if !nu.is_nonnegative() {
            return Vec::new();
        }
        let mut acc: Vec<Expo> = vec![vec![0; self.num_vars()]];
        for b in 0..self.num_blocks() {
            let r = self.block_range(b);
            let block_monos = compositions_desc(nu.0[b] as u32, r.len());
            let mut next = Vec::with_capacity(acc.len() * block_monos.len());
            for base in &acc {
                for bm in &block_monos {
                    let mut e = base.clone();
                    e[r.clone()].copy_from_slice(bm);
                    next.push(e);
                }
            }
            acc = next;
        }
        acc
    }

    /// `dim_k R_nu`, the product of per-block binomial counts.
    pub fn dim_graded_piece(&self, nu: &MultiDeg) -> usize {
        if !nu.is_nonnegative() {
            return 0;
        }
        (0..self.num_blocks())
            .map(|b| binomial(nu.0[b] as u64 + self.block_range(b).len() as u64 - 1, self.block_range(b).len() as u64 - 1))
            .product::<u64>() as usize
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Exponent tuples of `len` entries summing to `total`, lex-descending.
fn compositions_desc(total: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; len];
    fn rec(total: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = total;
            out.push(cur.clone());
            return;
        }
        for e in (0..=total).rev() {
            cur[pos] = e;
            rec(total - e, pos + 1, cur, out);
        }
    }
    if len == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, 0, &mut cur, &mut out);
    out
}

/// Global graded-lex order used by the division algorithm.
fn cmp_grlex(a: &Expo, b: &Expo) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let ta: u64 = a.iter().map(|&x| x as u64).sum();
    let tb: u64 = b.iter().map(|&x| x as u64).sum();
    match ta.cmp(&tb) {
        Ordering::Equal => a.cmp(b),
        o => o,
    }
}

/// A sparse multivariate polynomial tied to a [`RingSpec`].
#[derive(Clone)]
pub struct Poly<K: Field> {
    ring: Arc<RingSpec<K>>,
    terms: BTreeMap<Expo, K::Elem>,
}

impl<K: Field> PartialEq for Poly<K> {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other) && self.terms == other.terms
    }
}
impl<K: Field> Eq for Poly<K> {}

impl<K: Field> fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl<K: Field> Poly<K> {
    pub fn zero(ring: Arc<RingSpec<K>>) -> Self {
        Poly {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: Arc<RingSpec<K>>, c: K::Elem) -> Self {
        let mut p = Poly::zero(ring);
        if !p.ring.field().is_zero(&c) {
            p.terms.insert(vec![0; p.ring.num_vars()], c);
        }
        p
    }

    pub fn from_i64(ring: Arc<RingSpec<K>>, n: i64) -> Self {
        let c = ring.field().from_i64(n);
        Poly::constant(ring, c)
    }

    pub fn var(ring: Arc<RingSpec<K>>, v: usize) -> Self {
        let mut e = vec![0u32; ring.num_vars()];
        e[v] = 1;
        let c = ring.field().one();
        Poly::monomial(ring, e, c)
    }

    pub fn monomial(ring: Arc<RingSpec<K>>, e: Expo, c: K::Elem) -> Self {
        assert_eq!(e.len(), ring.num_vars());
        let mut p = Poly::zero(ring);
        if !p.ring.field().is_zero(&c) {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn from_terms(
        ring: Arc<RingSpec<K>>,
        it: impl IntoIterator<Item = (Expo, K::Elem)>,
    ) -> Self {
        let mut p = Poly::zero(ring);
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<RingSpec<K>> {
        &self.ring
    }

    pub fn field(&self) -> &K {
        self.ring.field()
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &K::Elem)> {
        self.terms.iter()
    }

    /// Terms sorted in the ring's display order, largest monomial first.
    pub fn terms_sorted(&self) -> Vec<(&Expo, &K::Elem)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| self.ring.cmp_expo(b.0, a.0));
        v
    }

    pub fn coeff(&self, e: &Expo) -> K::Elem {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(|| self.field().zero())
    }

    fn add_term(&mut self, e: Expo, c: K::Elem) {
        if self.field().is_zero(&c) {
            return;
        }
        let f = self.ring.field().clone();
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(o.get(), &c);
                if f.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &K::Elem) -> Self {
        let f = self.field();
        if f.is_zero(c) {
            return Poly::zero(self.ring.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, a)| (e.clone(), f.mul(a, c)))
            .collect();
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn mul_monomial(&self, e: &Expo, c: &K::Elem) -> Self {
        let f = self.field();
        if f.is_zero(c) {
            return Poly::zero(self.ring.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| {
                let me: Expo = m.iter().zip(e).map(|(x, y)| x + y).collect();
                (me, f.mul(a, c))
            })
            .collect();
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Poly::constant(self.ring.clone(), self.field().one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `Some(nu)` when every term has multidegree `nu`; `None` for zero or
    /// inhomogeneous polynomials (query [`Poly::is_zero`] to tell apart).
    pub fn homogeneous_multideg(&self) -> Option<MultiDeg> {
        let mut it = self.terms.keys();
        let first = self.ring.multideg_of_expo(it.next()?);
        for e in it {
            if self.ring.multideg_of_expo(e) != first {
                return None;
            }
        }
        Some(first)
    }

    /// Per-block maximum degree over the terms (total degree per block).
    pub fn max_multideg(&self) -> MultiDeg {
        let s = self.ring.num_blocks();
        let mut m = MultiDeg::zero(s);
        for e in self.terms.keys() {
            let d = self.ring.multideg_of_expo(e);
            for i in 0..s {
                m.0[i] = m.0[i].max(d.0[i]);
            }
        }
        m
    }

    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as i64).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn evaluate(&self, point: &[K::Elem]) -> K::Elem {
        assert_eq!(point.len(), self.ring.num_vars(), "point arity mismatch");
        let f = self.field();
        let mut acc = f.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = f.mul(&t, &pow_elem(f, &point[v], k));
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    pub fn partial(&self, v: usize) -> Self {
        let f = self.field().clone();
        let mut out = Poly::zero(self.ring.clone());
        for (e, c) in &self.terms {
            if e[v] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[v] -= 1;
            let k = f.from_i64(e[v] as i64);
            out.add_term(e2, f.mul(c, &k));
        }
        out
    }

    /// Substitute `images[v]` for variable `v`; images live in `target`.
    pub fn compose(&self, target: &Arc<RingSpec<K>>, images: &[Poly<K>]) -> Poly<K> {
        assert_eq!(images.len(), self.ring.num_vars());
        let mut acc = Poly::zero(target.clone());
        for (e, c) in &self.terms {
            let mut t = Poly::constant(target.clone(), c.clone());
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &images[v].pow(k);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Map variable `v` of `self` to variable `v + offset` of `bigger`.
    pub fn lift_to(&self, bigger: &Arc<RingSpec<K>>, offset: usize) -> Poly<K> {
        let n = bigger.num_vars();
        assert!(self.ring.num_vars() + offset <= n);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = vec![0u32; n];
                e2[offset..offset + e.len()].copy_from_slice(e);
                (e2, c.clone())
            })
            .collect();
        Poly {
            ring: bigger.clone(),
            terms,
        }
    }

    /// Substitute 1 for variable `v` (dehomogenize a chart variable).
    pub fn substitute_one(&self, v: usize) -> Poly<K> {
        let mut out = Poly::zero(self.ring.clone());
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[v] = 0;
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Multiply each term by `chart^k` so block `b` reaches degree `target`.
    /// `None` if some term already exceeds `target` in block `b`.
    pub fn homogenize_block(&self, b: usize, chart: usize, target: i64) -> Option<Poly<K>> {
        let r = self.ring.block_range(b);
        assert!(r.contains(&chart));
        let mut out = Poly::zero(self.ring.clone());
        for (e, c) in &self.terms {
            let d: i64 = e[r.clone()].iter().map(|&x| x as i64).sum();
            if d > target {
                return None;
            }
            let mut e2 = e.clone();
            e2[chart] += (target - d) as u32;
            out.add_term(e2, c.clone());
        }
        Some(out)
    }

    /// Leading exponent in the global graded-lex order (for division).
    pub fn leading_expo(&self) -> Option<&Expo> {
        self.terms.keys().max_by(|a, b| cmp_grlex(a, b))
    }

    pub fn leading_coeff(&self) -> Option<&K::Elem> {
        let e = self.leading_expo()?;
        self.terms.get(e)
    }

    /// Normalize so the leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> Poly<K> {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => {
                let inv = self
                    .field()
                    .inv(lc)
                    .expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
        }
    }

    /// Exact division: `Some(q)` with `self = q * d`, else `None`.
    pub fn exact_div(&self, d: &Poly<K>) -> Option<Poly<K>> {
        assert!(self.same_ring(d), "ring mismatch in division");
        if d.is_zero() {
            return None;
        }
        let f = self.field().clone();
        let dl = d.leading_expo().unwrap().clone();
        let dc = d.terms.get(&dl).unwrap().clone();
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.ring.clone());
        while !rem.is_zero() {
            let rl = rem.leading_expo().unwrap().clone();
            if !dl.iter().zip(&rl).all(|(a, b)| a <= b) {
                return None;
            }
            let me: Expo = rl.iter().zip(&dl).map(|(a, b)| a - b).collect();
            let mc = f.div(&rem.terms[&rl], &dc).expect("nonzero leading coeff");
            quot.add_term(me.clone(), mc.clone());
            rem = &rem - &d.mul_monomial(&me, &mc);
        }
        Some(quot)
    }

    pub fn divides(&self, other: &Poly<K>) -> bool {
        other.exact_div(self).is_some()
    }
}

fn pow_elem<K: Field>(f: &K, a: &K::Elem, mut k: u32) -> K::Elem {
    let mut base = a.clone();
    let mut acc = f.one();
    while k > 0 {
        if k & 1 == 1 {
            acc = f.mul(&acc, &base);
        }
        base = f.mul(&base, &base);
        k >>= 1;
    }
    acc
}

impl<K: Field> std::ops::Add for &Poly<K> {
    type Output = Poly<K>;
    fn add(self, rhs: &Poly<K>) -> Poly<K> {
        assert!(self.same_ring(rhs), "ring mismatch in +");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<K: Field> std::ops::Sub for &Poly<K> {
    type Output = Poly<K>;
    fn sub(self, rhs: &Poly<K>) -> Poly<K> {
        assert!(self.same_ring(rhs), "ring mismatch in -");
        let f = self.field().clone();
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), f.neg(c));
        }
        out
    }
}

impl<K: Field> std::ops::Neg for &Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        let f = self.field();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), f.neg(c)))
            .collect();
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }
}

impl<K: Field> std::ops::Mul for &Poly<K> {
    type Output = Poly<K>;
    fn mul(self, rhs: &Poly<K>) -> Poly<K> {
        assert!(self.same_ring(rhs), "ring mismatch in *");
        let f = self.field().clone();
        let mut out = Poly::zero(self.ring.clone());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Expo = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, f.mul(c1, c2));
            }
        }
        out
    }
}

/// A rational map `psi = (f_1 : ... : f_r)` with content removed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Parameterization<K: Field> {
    ring: Arc<RingSpec<K>>,
    maps: Vec<Poly<K>>,
    degree: MultiDeg,
    removed_content: Option<Poly<K>>,
}

impl<K: Field> Parameterization<K> {
    /// Validates homogeneity and a common multidegree, then divides out the
    /// iterated GCD of the components, recording what was removed.
    pub fn new(maps: Vec<Poly<K>>) -> Result<Self, PolyError> {
        if maps.len() < 2 {
            return Err(PolyError::TooFewComponents);
        }
        let ring = maps[0].ring().clone();
        if !maps.iter().all(|m| m.same_ring(&maps[0])) {
            return Err(PolyError::RingMismatch);
        }
        if maps.iter().all(|m| m.is_zero()) {
            return Err(PolyError::ZeroMap);
        }
        let mut degree: Option<MultiDeg> = None;
        for m in &maps {
            if m.is_zero() {
                continue;
            }
            match (m.homogeneous_multideg(), &degree) {
                (None, _) => return Err(PolyError::InhomogeneousMap),
                (Some(d), None) => degree = Some(d),
                (Some(d), Some(d0)) if &d == d0 => {}
                _ => return Err(PolyError::InhomogeneousMap),
            }
        }
        let h = gcd_many(&maps);
        let (maps, removed_content) = if h.total_degree() > 0 {
            let reduced: Vec<Poly<K>> = maps
                .iter()
                .map(|m| m.exact_div(&h).expect("gcd divides"))
                .collect();
            (reduced, Some(h))
        } else {
            (maps, None)
        };
        let degree = maps
            .iter()
            .find(|m| !m.is_zero())
            .and_then(|m| m.homogeneous_multideg())
            .expect("nonzero homogeneous component");
        Ok(Parameterization {
            ring,
            maps,
            degree,
            removed_content,
        })
    }

    pub fn ring(&self) -> &Arc<RingSpec<K>> {
        &self.ring
    }

    pub fn field(&self) -> &K {
        self.ring.field()
    }

    pub fn maps(&self) -> &[Poly<K>] {
        &self.maps
    }

    pub fn target_dim(&self) -> usize {
        self.maps.len()
    }

    pub fn degree(&self) -> &MultiDeg {
        &self.degree
    }

    pub fn removed_content(&self) -> Option<&Poly<K>> {
        self.removed_content.as_ref()
    }

    /// Coordinate ring `k[T_1..T_r]` of the target.
    pub fn target_ring(&self) -> Arc<RingSpec<K>> {
        RingSpec::target(self.target_dim(), self.field().clone())
    }

    /// The source ring extended by the target block `T_1..T_r`.
    pub fn extended_ring(&self) -> Arc<RingSpec<K>> {
        let names: Vec<String> = (1..=self.target_dim()).map(|i| format!("T{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        self.ring
            .with_extra_block(&refs)
            .expect("T names do not clash")
    }

    /// Evaluate the map at a source point.
    pub fn evaluate(&self, x: &[K::Elem]) -> Vec<K::Elem> {
        self.maps.iter().map(|m| m.evaluate(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn p1() -> Arc<RingSpec<Rationals>> {
        RingSpec::projective(&["x", "y"], Rationals).unwrap()
    }

    fn p2() -> Arc<RingSpec<Rationals>> {
        RingSpec::projective(&["x", "y", "z"], Rationals).unwrap()
    }

    #[test]
    fn graded_basis_sizes_and_order() {
        let r = p2();
        let b = r.graded_basis(&MultiDeg::scalar(1));
        assert_eq!(b.len(), 3);
        assert_eq!(b, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);

        let r1 = p1();
        let b3 = r1.graded_basis(&MultiDeg::scalar(3));
        assert_eq!(
            b3,
            vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]],
            "descending graded-lex"
        );
        assert_eq!(r1.dim_graded_piece(&MultiDeg::scalar(3)), 4);

        let r3 = RingSpec::new(
            vec![
                vec!["a".into(), "b".into()],
                vec!["c".into(), "d".into()],
                vec!["e".into(), "f".into()],
            ],
            Rationals,
        )
        .unwrap();
        let nu = MultiDeg(vec![1, 1, 0]);
        assert_eq!(r3.graded_basis(&nu).len(), 4);
        assert_eq!(r3.dim_graded_piece(&nu), 4);
        assert!(r3.graded_basis(&MultiDeg(vec![1, -1, 0])).is_empty());
    }

    #[test]
    fn binomial_count_property() {
        let r = p2();
        for nu in 0..7i64 {
            let n = r.graded_basis(&MultiDeg::scalar(nu)).len();
            assert_eq!(n, ((nu + 1) * (nu + 2) / 2) as usize);
            assert_eq!(n, r.dim_graded_piece(&MultiDeg::scalar(nu)));
        }
    }

    #[test]
    fn arithmetic_and_homogeneity() {
        let r = p1();
        let x = Poly::var(r.clone(), 0);
        let y = Poly::var(r.clone(), 1);
        let p = &(&x * &x) - &(&y * &y);
        assert_eq!(p.homogeneous_multideg(), Some(MultiDeg::scalar(2)));
        let q = &(&x * &y) + &Poly::from_i64(r.clone(), 1);
        assert_eq!(q.homogeneous_multideg(), None);
        assert!(!q.is_zero());
        let z = &p - &p;
        assert!(z.is_zero());
    }

    #[test]
    fn evaluate_examples() {
        let r = p1();
        let x = Poly::var(r.clone(), 0);
        let y = Poly::var(r.clone(), 1);
        let p = &(&x * &x) + &(&y * &y);
        let f = Rationals;
        assert_eq!(
            p.evaluate(&[f.from_i64(1), f.from_i64(1)]),
            f.from_i64(2)
        );
        let c = &p + &Poly::from_i64(r.clone(), 5);
        assert_eq!(
            c.evaluate(&[f.from_i64(0), f.from_i64(0)]),
            f.from_i64(5),
            "all-zero point picks the constant term"
        );
    }

    #[test]
    fn sphere_base_point_over_f13() {
        // 13 = 1 mod 4, so i = 5 is a square root of -1 and (0 : 1 : 5)
        // must kill all four components of the sphere parameterization.
        let f = PrimeField::new(13).unwrap();
        let r = RingSpec::projective(&["x1", "x2", "x3"], f).unwrap();
        let maps = [
            "x1^2 + x2^2 + x3^2",
            "2*x1*x3",
            "2*x1*x2",
            "x1^2 - x2^2 - x3^2",
        ];
        let pt = [f.from_i64(0), f.from_i64(1), f.from_i64(5)];
        for m in maps {
            let p = parse::parse_polynomial(m, &r).unwrap();
            assert_eq!(p.evaluate(&pt), 0, "{m} at the base point");
        }
    }

    #[test]
    fn exact_division() {
        let r = p1();
        let x = Poly::var(r.clone(), 0);
        let y = Poly::var(r.clone(), 1);
        let a = &(&x * &x) - &(&y * &y);
        let b = &x - &y;
        let q = a.exact_div(&b).unwrap();
        assert_eq!(q, &x + &y);
        assert!(a.exact_div(&(&x + &Poly::from_i64(r.clone(), 3))).is_none());
    }

    #[test]
    fn parameterization_content_removal() {
        let r = p1();
        let x = Poly::var(r.clone(), 0);
        let y = Poly::var(r.clone(), 1);
        // (x^2*y, x*y^2) has content x*y
        let p = Parameterization::new(vec![&(&x * &x) * &y, &(&y * &y) * &x]).unwrap();
        assert_eq!(p.degree(), &MultiDeg::scalar(1));
        let h = p.removed_content().unwrap();
        assert_eq!(h.total_degree(), 2);
        assert_eq!(p.maps()[0], x);
        assert_eq!(p.maps()[1], y);
    }

    #[test]
    fn lift_and_compose() {
        let r = p1();
        let big = r.with_extra_block(&["T1", "T2"]).unwrap();
        let x = Poly::var(r.clone(), 0);
        let lifted = x.lift_to(&big, 0);
        assert_eq!(lifted.ring().num_vars(), 4);
        // T1*T2 composed with (x^2, y^2) gives x^2*y^2
        let t = RingSpec::target(2, Rationals);
        let t1t2 = &Poly::var(t.clone(), 0) * &Poly::var(t.clone(), 1);
        let y = Poly::var(r.clone(), 1);
        let img = t1t2.compose(&r, &[&x * &x, &y * &y]);
        let expect = &(&x * &x) * &(&y * &y);
        assert_eq!(img, expect);
    }
}
