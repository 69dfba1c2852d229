//! Graded syzygies of a parameterization, mu-bases for a P^1 source,
//! Koszul cycles and first homology in prescribed degree, and upgrading of
//! syzygies to Rees-algebra equations of higher T-degree.
//!
//! Everything here is plain exact linear algebra on graded pieces: the
//! degree-`nu` syzygies are the kernel of the multiplication map
//! `(a_1..a_r) -> sum a_i f_i` from `(R_nu)^r` to `R_{nu+d}`, and the other
//! operations are assembled from such kernels and images.

use std::sync::Arc;

use thiserror::Error;

use crate::exactlinalg::{coeff_vector, subsets, DenseMatrix, PolyMatrix};
use crate::field::Field;
use crate::polyring::{Expo, MultiDeg, Parameterization, Poly, RingSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyzygyError {
    #[error("source must be P^1 (one block of two variables)")]
    NotCurveSource,
    #[error("mu-basis sweep did not close at {found} generators with degree sum {sum} (expected {expected} summing to {degree})")]
    MuBasisIncomplete {
        found: usize,
        expected: usize,
        sum: i64,
        degree: i64,
    },
    #[error("cycle components must be homogeneous of one common multidegree")]
    InhomogeneousCycle,
    #[error(
        "upgrade membership system infeasible in degree {degree}: \
         the requested degree is below the validity range of the layer correspondence"
    )]
    UpgradeInfeasible { degree: MultiDeg },
}

/// Basis of the degree-`nu` piece of the syzygy module.
#[derive(Clone, Debug)]
pub struct SyzygyPiece<K: Field> {
    pub degree: MultiDeg,
    /// Each entry is an r-tuple `(a_1..a_r)` with `sum a_i f_i = 0`.
    pub basis: Vec<Vec<Poly<K>>>,
}

/// A minimal syzygy generator found by the degree sweep.
#[derive(Clone, Debug)]
pub struct SyzygyGenerator<K: Field> {
    pub degree: MultiDeg,
    pub tuple: Vec<Poly<K>>,
}

/// Hilbert-Burch basis of the syzygy module of a curve parameterization.
#[derive(Clone, Debug)]
pub struct MuBasis<K: Field> {
    /// Columns `L_1..L_{r-1}`, degrees ascending.
    pub columns: Vec<Vec<Poly<K>>>,
    pub degrees: Vec<i64>,
}

/// Basis of cycles `Z_p(f;R)` whose coefficients have the given degree.
#[derive(Clone, Debug)]
pub struct KoszulPiece<K: Field> {
    pub index: usize,
    pub coeff_degree: MultiDeg,
    /// Exterior-basis subsets of `{0..r-1}`, in lexicographic order.
    pub subsets: Vec<Vec<usize>>,
    /// Each cycle assigns a coefficient polynomial to every subset.
    pub basis: Vec<Vec<Poly<K>>>,
}

/// Coset representatives of `H_1 = Z_1/B_1` in one (label) degree, with the
/// reduction data needed to take coordinates of arbitrary cycles.
#[derive(Clone, Debug)]
pub struct KoszulHomologyPiece<K: Field> {
    pub degree: MultiDeg,
    pub reps: Vec<Vec<Poly<K>>>,
    coeff_degree: MultiDeg,
    basis_expos: Vec<Expo>,
    b1_span: RowSpan<K>,
    reps_reduced: Vec<Vec<K::Elem>>,
}

/// Basis of `(P<l>/P<l-1>)_nu`: Rees equations of T-degree exactly `l`.
#[derive(Clone, Debug)]
pub struct ReesEquationLayer<K: Field> {
    pub t_degree: u32,
    pub degree: MultiDeg,
    /// Elements of the extended ring `R[T]`, bihomogeneous of degree
    /// `(nu, l)`.
    pub basis: Vec<Poly<K>>,
}

/// Incrementally maintained reduced row echelon span.
#[derive(Clone, Debug)]
pub struct RowSpan<K: Field> {
    field: K,
    rows: Vec<(usize, Vec<K::Elem>)>, // sorted by pivot column
}

impl<K: Field> RowSpan<K> {
    pub fn new(field: K) -> Self {
        RowSpan {
            field,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the span in place.
    pub fn reduce(&self, v: &mut [K::Elem]) {
        let f = &self.field;
        for (p, row) in &self.rows {
            if f.is_zero(&v[*p]) {
                continue;
            }
            let c = v[*p].clone();
            for (j, rv) in row.iter().enumerate() {
                v[j] = f.sub(&v[j], &f.mul(&c, rv));
            }
        }
    }

    /// Insert `v`; returns the normalized residue if it enlarged the span.
    pub fn insert(&mut self, mut v: Vec<K::Elem>) -> Option<Vec<K::Elem>> {
        let f = self.field.clone();
        self.reduce(&mut v);
        let p = v.iter().position(|x| !f.is_zero(x))?;
        let inv = f.inv(&v[p]).expect("pivot nonzero");
        for x in v.iter_mut() {
            *x = f.mul(x, &inv);
        }
        // keep earlier rows reduced against the new pivot
        for (_, row) in self.rows.iter_mut() {
            if f.is_zero(&row[p]) {
                continue;
            }
            let c = row[p].clone();
            for (j, x) in row.iter_mut().enumerate() {
                *x = f.sub(x, &f.mul(&c, &v[j]));
            }
        }
        let idx = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(idx, (p, v.clone()));
        Some(v)
    }
}

/// Flatten an r-tuple of degree-`nu` polynomials to coordinates over the
/// monomial basis, component-major.
pub fn tuple_to_vec<K: Field>(tuple: &[Poly<K>], basis: &[Expo]) -> Vec<K::Elem> {
    let mut out = Vec::with_capacity(tuple.len() * basis.len());
    for p in tuple {
        out.extend(coeff_vector(p, basis));
    }
    out
}

fn vec_to_tuple<K: Field>(
    ring: &Arc<RingSpec<K>>,
    v: &[K::Elem],
    basis: &[Expo],
    r: usize,
) -> Vec<Poly<K>> {
    let t = basis.len();
    (0..r)
        .map(|i| {
            Poly::from_terms(
                ring.clone(),
                basis
                    .iter()
                    .cloned()
                    .zip(v[i * t..(i + 1) * t].iter().cloned()),
            )
        })
        .collect()
}

/// Matrix of the multiplication map `(R_nu)^r -> R_{nu+d}`, columns indexed
/// component-major by `(i, monomial of R_nu)`.
fn multiplication_matrix<K: Field>(
    param: &Parameterization<K>,
    nu: &MultiDeg,
) -> (DenseMatrix<K>, Vec<Expo>, Vec<Expo>) {
    let ring = param.ring();
    let src = ring.graded_basis(nu);
    let dst = ring.graded_basis(&nu.add(param.degree()));
    let f = ring.field().clone();
    let r = param.target_dim();
    let mut m = DenseMatrix::zero(f.clone(), dst.len(), r * src.len());
    for (i, fi) in param.maps().iter().enumerate() {
        for (k, e) in src.iter().enumerate() {
            let col = fi.mul_monomial(e, &f.one());
            let cv = coeff_vector(&col, &dst);
            for (row, val) in cv.into_iter().enumerate() {
                m.set(row, i * src.len() + k, val);
            }
        }
    }
    (m, src, dst)
}

/// Basis of the degree-`nu` graded piece of `Syz(f)`.
pub fn syzygies_in_degree<K: Field>(param: &Parameterization<K>, nu: &MultiDeg) -> SyzygyPiece<K> {
    let (m, src, _) = multiplication_matrix(param, nu);
    let kernel = m.nullspace_basis();
    let basis = kernel
        .iter()
        .map(|v| vec_to_tuple(param.ring(), v, &src, param.target_dim()))
        .collect();
    SyzygyPiece {
        degree: nu.clone(),
        basis,
    }
}

/// All multidegrees `0 <= nu' <= nu_max`, sorted by total degree then lex.
fn degrees_up_to(nu_max: &MultiDeg) -> Vec<MultiDeg> {
    let mut out = vec![MultiDeg::zero(nu_max.len())];
    for b in 0..nu_max.len() {
        let mut next = Vec::new();
        for base in &out {
            for v in 0..=nu_max.0[b].max(0) {
                let mut d = base.clone();
                d.0[b] = v;
                next.push(d);
            }
        }
        out = next;
    }
    out.sort_by_key(|d| (d.total(), d.0.clone()));
    out
}

/// Minimal generators of the syzygy module in all degrees `<= nu_max`
/// componentwise: per degree, a basis of the new syzygies modulo
/// variable-multiples of the lower-degree generators.
pub fn minimal_generators_up_to<K: Field>(
    param: &Parameterization<K>,
    nu_max: &MultiDeg,
) -> Vec<SyzygyGenerator<K>> {
    let ring = param.ring();
    let f = ring.field().clone();
    let r = param.target_dim();
    let mut gens: Vec<SyzygyGenerator<K>> = Vec::new();
    for nu in degrees_up_to(nu_max) {
        let piece = syzygies_in_degree(param, &nu);
        if piece.basis.is_empty() {
            continue;
        }
        let basis_nu = ring.graded_basis(&nu);
        let mut span = RowSpan::new(f.clone());
        for g in &gens {
            let shift = nu.sub(&g.degree);
            if !shift.is_nonnegative() {
                continue;
            }
            for m in ring.graded_basis(&shift) {
                let shifted: Vec<Poly<K>> = g
                    .tuple
                    .iter()
                    .map(|p| p.mul_monomial(&m, &f.one()))
                    .collect();
                span.insert(tuple_to_vec(&shifted, &basis_nu));
            }
        }
        for v in &piece.basis {
            if let Some(res) = span.insert(tuple_to_vec(v, &basis_nu)) {
                gens.push(SyzygyGenerator {
                    degree: nu.clone(),
                    tuple: vec_to_tuple(ring, &res, &basis_nu, r),
                });
            }
        }
    }
    gens
}

/// Hilbert-Burch mu-basis of a curve parameterization: `r-1` generators of
/// degrees summing to `d`.
pub fn mu_basis<K: Field>(param: &Parameterization<K>) -> Result<MuBasis<K>, SyzygyError> {
    let ring = param.ring();
    if ring.num_blocks() != 1 || ring.num_vars() != 2 {
        return Err(SyzygyError::NotCurveSource);
    }
    let d = param.degree().total();
    let r = param.target_dim();
    let gens = minimal_generators_up_to(param, &MultiDeg::scalar(d));
    let degrees: Vec<i64> = gens.iter().map(|g| g.degree.total()).collect();
    let sum: i64 = degrees.iter().sum();
    if gens.len() != r - 1 || sum != d {
        return Err(SyzygyError::MuBasisIncomplete {
            found: gens.len(),
            expected: r - 1,
            sum,
            degree: d,
        });
    }
    Ok(MuBasis {
        columns: gens.into_iter().map(|g| g.tuple).collect(),
        degrees,
    })
}

impl<K: Field> MuBasis<K> {
    /// The Hilbert-Burch identity: signed maximal minors of the syzygy
    /// matrix reproduce the `f_i` up to one common nonzero scalar, which is
    /// returned. `None` when the identity fails.
    pub fn hilbert_burch_scalar(&self, param: &Parameterization<K>) -> Option<K::Elem> {
        let ring = param.ring().clone();
        let r = param.target_dim();
        let f = ring.field().clone();
        // Phi is r x (r-1) with columns the generators
        let entries: Vec<Poly<K>> = (0..r)
            .flat_map(|i| self.columns.iter().map(move |c| c[i].clone()))
            .collect();
        let phi = PolyMatrix::new(ring.clone(), r, r - 1, entries);
        let all_cols: Vec<usize> = (0..r - 1).collect();
        let mut lambda: Option<K::Elem> = None;
        for i in 0..r {
            let rows: Vec<usize> = (0..r).filter(|&k| k != i).collect();
            let mut minor = phi.minor(&rows, &all_cols);
            if i % 2 == 1 {
                minor = -&minor;
            }
            let fi = &param.maps()[i];
            match (&lambda, minor.is_zero(), fi.is_zero()) {
                (_, true, true) => continue,
                (_, true, false) | (_, false, true) => return None,
                (Some(l), false, false) => {
                    if fi.scale(l) != minor {
                        return None;
                    }
                }
                (None, false, false) => {
                    let lm = minor.leading_coeff()?.clone();
                    let lf = fi.leading_coeff()?.clone();
                    let l = f.div(&lm, &lf).ok()?;
                    if fi.scale(&l) != minor {
                        return None;
                    }
                    lambda = Some(l);
                }
            }
        }
        lambda
    }
}

/// Matrix of the Koszul differential `d_p` restricted to coefficient degree
/// `nu` (label degree `nu + p d`).
fn koszul_matrix<K: Field>(
    param: &Parameterization<K>,
    p: usize,
    nu: &MultiDeg,
) -> (DenseMatrix<K>, Vec<Vec<usize>>, Vec<Expo>) {
    let ring = param.ring();
    let f = ring.field().clone();
    let r = param.target_dim();
    let subs_p = subsets(r, p);
    let subs_q = subsets(r, p - 1);
    let src = ring.graded_basis(nu);
    let dst = ring.graded_basis(&nu.add(param.degree()));
    let mut m = DenseMatrix::zero(f.clone(), subs_q.len() * dst.len(), subs_p.len() * src.len());
    for (si, s) in subs_p.iter().enumerate() {
        for (pos, &j) in s.iter().enumerate() {
            let t: Vec<usize> = s.iter().copied().filter(|&x| x != j).collect();
            let ti = subs_q
                .iter()
                .position(|u| *u == t)
                .expect("subset present");
            let sign = pos % 2 == 1;
            for (k, e) in src.iter().enumerate() {
                let img = param.maps()[j].mul_monomial(e, &f.one());
                let cv = coeff_vector(&img, &dst);
                for (row, val) in cv.into_iter().enumerate() {
                    let val = if sign { f.neg(&val) } else { val };
                    let old = m.at(ti * dst.len() + row, si * src.len() + k).clone();
                    m.set(ti * dst.len() + row, si * src.len() + k, f.add(&old, &val));
                }
            }
        }
    }
    (m, subs_p, src)
}

/// Basis of the cycles `Z_p(f;R)` with coefficients of degree `nu`
/// (i.e. the degree-`nu + p d` piece of `Z_p`).
pub fn koszul_cycles<K: Field>(
    param: &Parameterization<K>,
    p: usize,
    nu: &MultiDeg,
) -> KoszulPiece<K> {
    assert!(p >= 1 && p <= param.target_dim());
    let (m, subs, src) = koszul_matrix(param, p, nu);
    let kernel = m.nullspace_basis();
    let basis = kernel
        .iter()
        .map(|v| vec_to_tuple(param.ring(), v, &src, subs.len()))
        .collect();
    KoszulPiece {
        index: p,
        coeff_degree: nu.clone(),
        subsets: subs,
        basis,
    }
}

/// `H_1 = Z_1/B_1` in label degree `delta` (coefficients of `Z_1` live in
/// degree `delta - d`), represented by reduced-echelon coset
/// representatives.
pub fn koszul_h1<K: Field>(
    param: &Parameterization<K>,
    delta: &MultiDeg,
) -> KoszulHomologyPiece<K> {
    let ring = param.ring();
    let f = ring.field().clone();
    let r = param.target_dim();
    let d = param.degree();
    let nu1 = delta.sub(d);
    let basis_expos = ring.graded_basis(&nu1);
    let mut b1_span = RowSpan::new(f.clone());
    let nu2 = nu1.sub(d);
    if nu2.is_nonnegative() {
        for pair in subsets(r, 2) {
            let (i, j) = (pair[0], pair[1]);
            for m in ring.graded_basis(&nu2) {
                // d2(e_i ^ e_j . m) = f_i m e_j - f_j m e_i
                let mut tuple = vec![Poly::zero(ring.clone()); r];
                tuple[j] = param.maps()[i].mul_monomial(&m, &f.one());
                tuple[i] = -&param.maps()[j].mul_monomial(&m, &f.one());
                b1_span.insert(tuple_to_vec(&tuple, &basis_expos));
            }
        }
    }
    let z1 = if nu1.is_nonnegative() {
        syzygies_in_degree(param, &nu1).basis
    } else {
        Vec::new()
    };
    let mut reps = Vec::new();
    let mut reps_reduced: Vec<Vec<K::Elem>> = Vec::new();
    let mut span = b1_span.clone();
    for cycle in &z1 {
        if let Some(res) = span.insert(tuple_to_vec(cycle, &basis_expos)) {
            reps.push(vec_to_tuple(ring, &res, &basis_expos, r));
            reps_reduced.push(res);
        }
    }
    KoszulHomologyPiece {
        degree: delta.clone(),
        reps,
        coeff_degree: nu1,
        basis_expos,
        b1_span,
        reps_reduced,
    }
}

impl<K: Field> KoszulHomologyPiece<K> {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of a cycle's class with respect to the representative
    /// basis; `None` when the input is not a cycle of this degree or falls
    /// outside the span.
    pub fn coordinates(&self, field: &K, cycle: &[Poly<K>]) -> Option<Vec<K::Elem>> {
        for p in cycle {
            if !p.is_zero() && p.homogeneous_multideg() != Some(self.coeff_degree.clone()) {
                return None;
            }
        }
        let mut v = tuple_to_vec(cycle, &self.basis_expos);
        self.b1_span.reduce(&mut v);
        if self.reps_reduced.is_empty() {
            return v.iter().all(|x| field.is_zero(x)).then(Vec::new);
        }
        let cols = self.reps_reduced.len();
        let rows = v.len();
        let mut m = DenseMatrix::zero(field.clone(), rows, cols);
        for (k, rep) in self.reps_reduced.iter().enumerate() {
            for (i, val) in rep.iter().enumerate() {
                m.set(i, k, val.clone());
            }
        }
        m.solve(&v)
    }
}

/// Compositions of `total` into `parts` nonnegative entries, lex-descending.
pub fn exponent_multiindices(total: u32, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; parts];
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
    if parts == 0 {
        return out;
    }
    rec(total, 0, &mut cur, &mut out);
    out
}

/// Power product `f^alpha`.
fn map_power<K: Field>(param: &Parameterization<K>, alpha: &[u32]) -> Poly<K> {
    let mut acc = Poly::constant(param.ring().clone(), param.field().one());
    for (i, &e) in alpha.iter().enumerate() {
        if e > 0 {
            acc = &acc * &param.maps()[i].pow(e);
        }
    }
    acc
}

/// Upgrade a syzygy with `deg h_i = nu + (l-1) d` to a Rees equation of
/// T-degree `l`: solve `h_i = sum_alpha c_{i,alpha} f^alpha` with
/// `c_{i,alpha}` of degree `nu` and return
/// `sum_i sum_alpha c_{i,alpha} T_i T^alpha` in the extended ring.
pub fn upgrade_syzygy<K: Field>(
    param: &Parameterization<K>,
    cycle: &[Poly<K>],
    l: u32,
) -> Result<Poly<K>, SyzygyError> {
    assert!(l >= 2, "layers start at T-degree 2");
    let ring = param.ring();
    let f = ring.field().clone();
    let r = param.target_dim();
    let d = param.degree();
    let h_deg = cycle
        .iter()
        .find(|p| !p.is_zero())
        .and_then(|p| p.homogeneous_multideg())
        .ok_or(SyzygyError::InhomogeneousCycle)?;
    for p in cycle {
        if !p.is_zero() && p.homogeneous_multideg() != Some(h_deg.clone()) {
            return Err(SyzygyError::InhomogeneousCycle);
        }
    }
    let nu = h_deg.sub(&d.scale((l - 1) as i64));
    let alphas = exponent_multiindices(l - 1, r);
    let powers: Vec<Poly<K>> = alphas.iter().map(|a| map_power(param, a)).collect();
    let basis_nu = ring.graded_basis(&nu);
    let basis_h = ring.graded_basis(&h_deg);
    if basis_nu.is_empty() {
        return Err(SyzygyError::UpgradeInfeasible { degree: nu });
    }
    // shared coefficient matrix: columns (alpha, monomial of R_nu)
    let mut m = DenseMatrix::zero(f.clone(), basis_h.len(), alphas.len() * basis_nu.len());
    for (ai, fa) in powers.iter().enumerate() {
        for (k, e) in basis_nu.iter().enumerate() {
            let col = fa.mul_monomial(e, &f.one());
            for (row, val) in coeff_vector(&col, &basis_h).into_iter().enumerate() {
                m.set(row, ai * basis_nu.len() + k, val);
            }
        }
    }
    let ext = param.extended_ring();
    let nx = ring.num_vars();
    let mut out = Poly::zero(ext.clone());
    for (i, hi) in cycle.iter().enumerate() {
        if hi.is_zero() {
            continue;
        }
        let rhs = coeff_vector(hi, &basis_h);
        let sol = m
            .solve(&rhs)
            .ok_or(SyzygyError::UpgradeInfeasible { degree: nu.clone() })?;
        for (ai, alpha) in alphas.iter().enumerate() {
            for (k, e) in basis_nu.iter().enumerate() {
                let c = &sol[ai * basis_nu.len() + k];
                if f.is_zero(c) {
                    continue;
                }
                let mut expo = vec![0u32; ext.num_vars()];
                expo[..nx].copy_from_slice(e);
                for (j, &a) in alpha.iter().enumerate() {
                    expo[nx + j] += a;
                }
                expo[nx + i] += 1;
                out = &out + &Poly::monomial(ext.clone(), expo, c.clone());
            }
        }
    }
    Ok(out)
}

/// Downgrade an element of positive T-degree back to a syzygy tuple: split
/// every T-monomial `T^beta` as `T_i T^alpha` with `i` the first index in
/// the support, and substitute `f^alpha` for the `T^alpha` part.
pub fn downgrade<K: Field>(param: &Parameterization<K>, elem: &Poly<K>) -> Vec<Poly<K>> {
    let ring = param.ring();
    let nx = ring.num_vars();
    let r = param.target_dim();
    let mut out = vec![Poly::zero(ring.clone()); r];
    for (e, c) in elem.terms() {
        let (xpart, tpart) = e.split_at(nx);
        let i = tpart
            .iter()
            .position(|&t| t > 0)
            .expect("element has positive T-degree");
        let mut alpha = tpart.to_vec();
        alpha[i] -= 1;
        let fa = map_power(param, &alpha);
        let term = fa.mul_monomial(&xpart.to_vec(), c);
        out[i] = &out[i] + &term;
    }
    out
}

/// Substitute `T_i -> f_i` in an element of the extended ring.
pub fn specialize_t_to_maps<K: Field>(param: &Parameterization<K>, elem: &Poly<K>) -> Poly<K> {
    let ring = param.ring().clone();
    let nx = ring.num_vars();
    let mut out = Poly::zero(ring.clone());
    for (e, c) in elem.terms() {
        let (xpart, tpart) = e.split_at(nx);
        let fa = map_power(param, tpart);
        out = &out + &fa.mul_monomial(&xpart.to_vec(), c);
    }
    out
}

/// The layer `(P<l>/P<l-1>)_nu`, built by upgrading a representative basis
/// of `H_1` in label degree `nu + l d`.
pub fn rees_layer<K: Field>(
    param: &Parameterization<K>,
    nu: &MultiDeg,
    l: u32,
) -> Result<ReesEquationLayer<K>, SyzygyError> {
    assert!(l >= 2);
    let delta = nu.add(&param.degree().scale(l as i64));
    let h1 = koszul_h1(param, &delta);
    let mut basis = Vec::with_capacity(h1.dim());
    for rep in &h1.reps {
        basis.push(upgrade_syzygy(param, rep, l)?);
    }
    Ok(ReesEquationLayer {
        t_degree: l,
        degree: nu.clone(),
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::polyring::parse_polynomial;

    fn curve_param(maps: &[&str]) -> Parameterization<Rationals> {
        let r = RingSpec::projective(&["x", "y"], Rationals).unwrap();
        Parameterization::new(
            maps.iter()
                .map(|m| parse_polynomial(m, &r).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn twisted_cubic() -> Parameterization<Rationals> {
        curve_param(&["x^3", "x^2*y", "x*y^2", "y^3"])
    }

    fn sphere() -> Parameterization<Rationals> {
        let r = RingSpec::projective(&["x1", "x2", "x3"], Rationals).unwrap();
        Parameterization::new(
            [
                "x1^2 + x2^2 + x3^2",
                "2*x1*x3",
                "2*x1*x2",
                "x1^2 - x2^2 - x3^2",
            ]
            .iter()
            .map(|m| parse_polynomial(m, &r).unwrap())
            .collect(),
        )
        .unwrap()
    }

    fn annihilates<K: Field>(param: &Parameterization<K>, tuple: &[Poly<K>]) -> bool {
        let mut acc = Poly::zero(param.ring().clone());
        for (a, f) in tuple.iter().zip(param.maps()) {
            acc = &acc + &(a * f);
        }
        acc.is_zero()
    }

    #[test]
    fn twisted_cubic_degree_one_syzygies() {
        let p = twisted_cubic();
        let s = syzygies_in_degree(&p, &MultiDeg::scalar(1));
        assert_eq!(s.basis.len(), 3);
        for t in &s.basis {
            assert!(annihilates(&p, t));
        }
        let s0 = syzygies_in_degree(&p, &MultiDeg::scalar(0));
        assert!(s0.basis.is_empty());
    }

    #[test]
    fn sphere_degree_one_syzygies() {
        let p = sphere();
        let s = syzygies_in_degree(&p, &MultiDeg::scalar(1));
        assert_eq!(s.basis.len(), 4, "the printed M_1 has four columns");
        for t in &s.basis {
            assert!(annihilates(&p, t));
        }
    }

    #[test]
    fn conic_syzygies_by_inspection() {
        let p = curve_param(&["x^2", "x*y", "y^2"]);
        let s = syzygies_in_degree(&p, &MultiDeg::scalar(1));
        assert_eq!(s.basis.len(), 2);
        for t in &s.basis {
            assert!(annihilates(&p, t));
        }
    }

    #[test]
    fn minimal_generator_examples() {
        let tc = twisted_cubic();
        let gens = minimal_generators_up_to(&tc, &MultiDeg::scalar(2));
        assert_eq!(gens.len(), 3, "no new generators appear in degree 2");
        assert!(gens.iter().all(|g| g.degree == MultiDeg::scalar(1)));

        let sph = sphere();
        let gens = minimal_generators_up_to(&sph, &MultiDeg::scalar(1));
        assert_eq!(gens.len(), 4);

        let ci = curve_param(&["x^2", "y^2"]);
        let gens = minimal_generators_up_to(&ci, &MultiDeg::scalar(2));
        assert_eq!(gens.len(), 1, "single Koszul generator");
        assert_eq!(gens[0].degree, MultiDeg::scalar(2));
        assert!(annihilates(&ci, &gens[0].tuple));
    }

    #[test]
    fn mu_basis_examples() {
        let tc = twisted_cubic();
        let mu = mu_basis(&tc).unwrap();
        assert_eq!(mu.degrees, vec![1, 1, 1]);
        assert!(mu.hilbert_burch_scalar(&tc).is_some());

        let circle = curve_param(&["x^2 - y^2", "2*x*y", "x^2 + y^2"]);
        let mu = mu_basis(&circle).unwrap();
        assert_eq!(mu.degrees, vec![1, 1]);
        assert!(mu.hilbert_burch_scalar(&circle).is_some());

        let line = curve_param(&["x", "y"]);
        let mu = mu_basis(&line).unwrap();
        assert_eq!(mu.degrees, vec![1]);
        assert!(annihilates(&line, &mu.columns[0]));
    }

    #[test]
    fn mu_degrees_sum_to_d_on_random_maps() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let ring = RingSpec::projective(&["x", "y"], Rationals).unwrap();
        let f = Rationals;
        for _ in 0..8 {
            let d = rng.gen_range(2..6);
            let r = rng.gen_range(3..5);
            let maps: Vec<Poly<Rationals>> = (0..r)
                .map(|_| {
                    Poly::from_terms(
                        ring.clone(),
                        ring.graded_basis(&MultiDeg::scalar(d))
                            .into_iter()
                            .map(|e| (e, f.from_i64(rng.gen_range(-5..=5)))),
                    )
                })
                .collect();
            let Ok(param) = Parameterization::new(maps) else {
                continue;
            };
            let d_eff = param.degree().total();
            let mu = mu_basis(&param).unwrap();
            assert_eq!(mu.degrees.iter().sum::<i64>(), d_eff);
            assert!(
                mu.hilbert_burch_scalar(&param).is_some(),
                "Hilbert-Burch identity"
            );
        }
    }

    #[test]
    fn koszul_p1_matches_syzygies() {
        let p = sphere();
        let nu = MultiDeg::scalar(2);
        let z1 = koszul_cycles(&p, 1, &nu);
        let syz = syzygies_in_degree(&p, &nu);
        assert_eq!(z1.basis.len(), syz.basis.len());
    }

    #[test]
    fn koszul_z2_for_regular_pair() {
        // (x, y) on P^1: Z_2 is generated by the Koszul relation
        // x e_2 - y e_1 wedged in, i.e. Z_2 in coefficient degree nu has
        // dimension dim R_{nu-?}; here we simply check against the kernel.
        let p = curve_param(&["x", "y"]);
        for nu in 0..4i64 {
            let z2 = koszul_cycles(&p, 2, &MultiDeg::scalar(nu));
            // d_2 is injective on K_2 for a regular sequence except via the
            // top wedge: Z_2 = ker d_2 should be zero since r = p = 2 means
            // K_3 = 0 and H_2 = 0.
            assert!(z2.basis.is_empty(), "Z_2 = 0 in coefficient degree {nu}");
        }
    }

    #[test]
    fn koszul_acyclic_for_regular_sequence() {
        let p = curve_param(&["x^3", "y^3"]);
        for delta in 0..10i64 {
            let h1 = koszul_h1(&p, &MultiDeg::scalar(delta));
            assert_eq!(h1.dim(), 0, "regular sequence has H1 = 0 (degree {delta})");
        }
    }

    #[test]
    fn conic_h1_dimension() {
        // f = (x^2, xy, y^2): Z_1 in coefficient degree 2 is 4-dimensional,
        // boundaries are 3-dimensional, so H1 in label degree 4 is a line.
        let p = curve_param(&["x^2", "x*y", "y^2"]);
        let nu = MultiDeg::scalar(2);
        let z1 = syzygies_in_degree(&p, &nu);
        assert_eq!(z1.basis.len(), 4);
        let h1 = koszul_h1(&p, &MultiDeg::scalar(4));
        assert_eq!(h1.dim(), 1);
        let h1_low = koszul_h1(&p, &MultiDeg::scalar(2));
        assert_eq!(h1_low.dim(), 0, "no syzygies in label degree 2");
    }

    #[test]
    fn upgrade_conic_koszul_relation() {
        let p = curve_param(&["x^2", "x*y", "y^2"]);
        // (f3, -f2, 0) is a syzygy; upgrading with l=2 gives T1 T3 - T2^2
        let cycle = vec![
            p.maps()[2].clone(),
            -&p.maps()[1],
            Poly::zero(p.ring().clone()),
        ];
        let up = upgrade_syzygy(&p, &cycle, 2).unwrap();
        let ext = up.ring().clone();
        let expect = parse_polynomial("T1*T3 - T2^2", &ext).unwrap();
        assert_eq!(up, expect);
        assert!(specialize_t_to_maps(&p, &up).is_zero());
    }

    #[test]
    fn upgrade_of_koszul_cycle_is_zero() {
        let p = curve_param(&["x^2", "x*y", "y^2"]);
        // f_2 e_1 - f_1 e_2 upgrades to T1 T2 - T2 T1 = 0
        let cycle = vec![
            p.maps()[1].clone(),
            -&p.maps()[0],
            Poly::zero(p.ring().clone()),
        ];
        let up = upgrade_syzygy(&p, &cycle, 2).unwrap();
        assert!(up.is_zero());
    }

    #[test]
    fn rees_layer_examples() {
        // regular sequence: all layers empty
        let reg = curve_param(&["x^2", "y^2"]);
        for nu in 0..4 {
            let layer = rees_layer(&reg, &MultiDeg::scalar(nu), 2).unwrap();
            assert!(layer.basis.is_empty());
        }
        // conic: layer at nu=0, l=2 contains T1 T3 - T2^2
        let p = curve_param(&["x^2", "x*y", "y^2"]);
        let layer = rees_layer(&p, &MultiDeg::scalar(0), 2).unwrap();
        assert_eq!(layer.basis.len(), 1);
        let ext = layer.basis[0].ring().clone();
        let expect = parse_polynomial("T1*T3 - T2^2", &ext).unwrap();
        assert_eq!(layer.basis[0].monic(), expect.monic());
    }

    #[test]
    fn downgrade_upgrade_identity_on_h1() {
        let p = curve_param(&["x^2", "x*y", "y^2"]);
        let delta = MultiDeg::scalar(4);
        let h1 = koszul_h1(&p, &delta);
        let f = Rationals;
        for (k, rep) in h1.reps.iter().enumerate() {
            let up = upgrade_syzygy(&p, rep, 2).unwrap();
            let down = downgrade(&p, &up);
            let coords = h1.coordinates(&f, &down).expect("downgrade lands in H1");
            let mut expect = vec![f.from_i64(0); h1.dim()];
            expect[k] = f.from_i64(1);
            assert_eq!(coords, expect, "downgrade(upgrade) = identity on H1");
        }
    }

    #[test]
    fn layer_over_prime_field_general_map() {
        use rand::{Rng, SeedableRng};
        let fp = PrimeField::new(101).unwrap();
        let ring = RingSpec::projective(&["x", "y", "z"], fp).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let maps: Vec<Poly<PrimeField>> = (0..4)
            .map(|_| {
                Poly::from_terms(
                    ring.clone(),
                    ring.graded_basis(&MultiDeg::scalar(2))
                        .into_iter()
                        .map(|e| (e, rng.gen_range(0..101))),
                )
            })
            .collect();
        let param = Parameterization::new(maps).unwrap();
        // nu0 for general quadrics is floor((n-1)(d-1)/2) = 1
        let nu = MultiDeg::scalar(1);
        let layer = rees_layer(&param, &nu, 2).unwrap();
        let h1 = koszul_h1(&param, &nu.add(&param.degree().scale(2)));
        assert_eq!(layer.basis.len(), h1.dim());
        for b in &layer.basis {
            assert!(specialize_t_to_maps(&param, b).is_zero());
        }
    }
}
