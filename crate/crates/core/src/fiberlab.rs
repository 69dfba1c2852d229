//! Fiber queries against a matrix representation: corank and fiber degree,
//! Fitting strata, fiber point extraction from the left kernel, Jacobian
//! detection of contracted curves, and base-locus classification.

use std::collections::HashMap;

use thiserror::Error;

use crate::exactlinalg::{DenseMatrix, PolyMatrix};
use crate::field::Field;
use crate::matrixrep::MatrixRep;
use crate::polyring::univar::{binary_form_roots, BinaryRoots};
use crate::polyring::{gcd_many, Expo, MultiDeg, Parameterization, Poly};
use crate::syzygy;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiberError {
    #[error("target point must not be the zero tuple")]
    ZeroPoint,
    #[error("target point arity {got} does not match the map (expected {expected})")]
    PointArity { got: usize, expected: usize },
    #[error("fiber form vanished identically; the input map is corrupt (components share a factor)")]
    CorruptInput,
    #[error("operation needs a P^2 source with four components, got {0}")]
    NotSurfaceShape(String),
    #[error("all Jacobian minors vanish: inseparability or characteristic issue")]
    JacobianVanishes,
    #[error("the fiber is not one-dimensional (the gcd of the l_i(f) is constant)")]
    NotOneDimFiber,
    #[error("normalizing form must evaluate to 1 at the point")]
    BadNormalizingForm,
    #[error("minor size {size} out of range 1..={max}")]
    MinorSizeOutOfRange { size: i64, max: usize },
    #[error("base locus window inconclusive: Hilbert function values {0:?}")]
    BaseLocusInconclusive(Vec<usize>),
}

/// Interpretation of a corank under the certificate contract.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum Interpretation {
    FiberDegree(usize),
    OffImage,
    Uncertified(usize),
}

#[derive(Debug, Clone)]
pub struct FiberReport<K: Field> {
    pub point: Vec<K::Elem>,
    pub nu: MultiDeg,
    pub corank: usize,
    pub certified: bool,
    pub interpretation: Interpretation,
}

impl<K: Field> FiberReport<K> {
    /// Largest `i` with `corank >= i+1`: the Fitting stratum. Off-image
    /// points get -1 (outside `V(Fitt^0)`).
    pub fn fitting_stratum(&self) -> i64 {
        self.corank as i64 - 1
    }
}

fn check_point<K: Field>(m: &MatrixRep<K>, p: &[K::Elem]) -> Result<(), FiberError> {
    let f = m.t_ring.field();
    if p.len() != m.param.target_dim() {
        return Err(FiberError::PointArity {
            got: p.len(),
            expected: m.param.target_dim(),
        });
    }
    if p.iter().all(|c| f.is_zero(c)) {
        return Err(FiberError::ZeroPoint);
    }
    Ok(())
}

/// Corank of the exact specialization `M_nu(p)` with its interpretation.
pub fn fiber_degree<K: Field>(
    m: &MatrixRep<K>,
    p: &[K::Elem],
) -> Result<FiberReport<K>, FiberError> {
    check_point(m, p)?;
    let corank = m.specialize(p).corank();
    let interpretation = if corank == 0 {
        Interpretation::OffImage
    } else if m.valid {
        Interpretation::FiberDegree(corank)
    } else {
        Interpretation::Uncertified(corank)
    };
    Ok(FiberReport {
        point: p.to_vec(),
        nu: m.nu.clone(),
        corank,
        certified: m.valid,
        interpretation,
    })
}

/// Fitting stratum index of `p`: `corank - 1`.
pub fn fitting_stratum<K: Field>(m: &MatrixRep<K>, p: &[K::Elem]) -> Result<i64, FiberError> {
    Ok(fiber_degree(m, p)?.fitting_stratum())
}

/// The scheme fiber of a curve parameterization over `p`, as the root
/// scheme of `h = gcd_{i<j}(p_i f_j - p_j f_i)`.
#[derive(Debug, Clone)]
pub struct P1Fiber<K: Field> {
    pub form: Poly<K>,
    pub degree: i64,
    pub roots: BinaryRoots<K>,
}

pub fn fiber_points_p1<K: Field>(
    param: &Parameterization<K>,
    p: &[K::Elem],
) -> Result<P1Fiber<K>, FiberError> {
    let f = param.field().clone();
    if p.iter().all(|c| f.is_zero(c)) {
        return Err(FiberError::ZeroPoint);
    }
    if p.len() != param.target_dim() {
        return Err(FiberError::PointArity {
            got: p.len(),
            expected: param.target_dim(),
        });
    }
    let mut forms = Vec::new();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let a = param.maps()[j].scale(&p[i]);
            let b = param.maps()[i].scale(&p[j]);
            forms.push(&a - &b);
        }
    }
    let h = gcd_many(&forms);
    if h.is_zero() {
        return Err(FiberError::CorruptInput);
    }
    let degree = h.total_degree();
    let roots = if degree > 0 {
        binary_form_roots(&h)
    } else {
        BinaryRoots {
            roots: Vec::new(),
            unfactored: None,
        }
    };
    Ok(P1Fiber {
        form: h,
        degree,
        roots,
    })
}

/// A source point recovered from the kernel; one coordinate tuple per block,
/// `None` for blocks the matrix degree cannot see (`nu_b = 0`).
#[derive(Debug, Clone)]
pub struct SourcePoint<K: Field> {
    pub blocks: Vec<Option<Vec<K::Elem>>>,
}

impl<K: Field> SourcePoint<K> {
    /// Flat coordinates when every block was recovered.
    pub fn full_coords(&self) -> Option<Vec<K::Elem>> {
        let mut out = Vec::new();
        for b in &self.blocks {
            out.extend(b.clone()?);
        }
        Some(out)
    }
}

/// Result of kernel-based point extraction.
#[derive(Debug, Clone)]
pub enum KernelPoints<K: Field> {
    Exact(Vec<SourcePoint<K>>),
    /// Numeric fallback, flagged approximate: flat coordinate tuples.
    Approximate(Vec<Vec<f64>>),
    DegreesOnly { corank: usize, diagnostic: String },
}

/// Read per-block coordinates off an evaluation vector.
fn read_point<K: Field>(
    m: &MatrixRep<K>,
    row_index: &HashMap<Expo, usize>,
    w: &[K::Elem],
) -> Option<SourcePoint<K>> {
    let ring = m.param.ring();
    let f = ring.field().clone();
    let pivot = (0..w.len()).find(|&i| !f.is_zero(&w[i]))?;
    let mstar = &m.rows[pivot];
    let mut blocks = Vec::new();
    for b in 0..ring.num_blocks() {
        let range = ring.block_range(b);
        if m.nu.0[b] == 0 {
            blocks.push(None);
            continue;
        }
        let jb = range.clone().find(|&v| mstar[v] > 0)?;
        let mut coords = Vec::new();
        for v in range.clone() {
            if v == jb {
                coords.push(f.one());
                continue;
            }
            let mut shifted = mstar.clone();
            shifted[jb] -= 1;
            shifted[v] += 1;
            let idx = row_index.get(&shifted)?;
            coords.push(f.div(&w[*idx], &w[pivot]).ok()?);
        }
        blocks.push(Some(coords));
    }
    let pt = SourcePoint { blocks };
    // verify w is proportional to the evaluation vector of the candidate
    let coords = flat_coords_with_default(&pt, ring.num_vars(), &f, ring);
    let scale = &w[pivot];
    for (i, e) in m.rows.iter().enumerate() {
        let mut ev = f.one();
        for (v, &k) in e.iter().enumerate() {
            for _ in 0..k {
                ev = f.mul(&ev, &coords[v]);
            }
        }
        if &f.mul(&ev, scale) != &w[i] {
            return None;
        }
    }
    Some(pt)
}

fn flat_coords_with_default<K: Field>(
    pt: &SourcePoint<K>,
    n: usize,
    f: &K,
    ring: &std::sync::Arc<crate::polyring::RingSpec<K>>,
) -> Vec<K::Elem> {
    let mut out = vec![f.zero(); n];
    for (b, coords) in pt.blocks.iter().enumerate() {
        if let Some(c) = coords {
            for (off, v) in ring.block_range(b).enumerate() {
                out[v] = c[off].clone();
            }
        }
    }
    out
}

/// Extract fiber points from the left kernel of `M_nu(p)`.
///
/// Corank 1 reads coordinates straight off the kernel vector. Corank >= 2
/// runs the multiplication-operator eigenvalue method in exact arithmetic;
/// when the characteristic polynomial does not split over the field the
/// points are approximated numerically and flagged as such.
pub fn fiber_points_from_kernel<K: Field>(
    m: &MatrixRep<K>,
    p: &[K::Elem],
) -> Result<KernelPoints<K>, FiberError> {
    check_point(m, p)?;
    let f = m.t_ring.field().clone();
    let spec = m.specialize(p);
    let kernel = spec.transpose().nullspace_basis();
    let c = kernel.len();
    if c == 0 {
        return Ok(KernelPoints::Exact(Vec::new()));
    }
    let row_index: HashMap<Expo, usize> = m
        .rows
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();
    if c == 1 {
        return Ok(match read_point(m, &row_index, &kernel[0]) {
            Some(pt) => {
                if verify_on_fiber(m, &pt, p) {
                    KernelPoints::Exact(vec![pt])
                } else {
                    KernelPoints::DegreesOnly {
                        corank: 1,
                        diagnostic: "kernel vector is of evaluation form but the candidate \
                                     does not map to the query point"
                            .into(),
                    }
                }
            }
            None => KernelPoints::DegreesOnly {
                corank: 1,
                diagnostic: "kernel vector is not of evaluation form (non-reduced fiber?)".into(),
            },
        });
    }
    eigen_extract(m, p, &row_index, &kernel)
}

fn verify_on_fiber<K: Field>(m: &MatrixRep<K>, pt: &SourcePoint<K>, p: &[K::Elem]) -> bool {
    // with missing blocks the map cannot be evaluated; accept
    let Some(coords) = pt.full_coords() else {
        return true;
    };
    let f = m.t_ring.field().clone();
    let fx = m.param.evaluate(&coords);
    if fx.iter().all(|v| f.is_zero(v)) {
        return false;
    }
    // rank([f(x); p]) <= 1
    let rows = vec![fx, p.to_vec()];
    DenseMatrix::from_rows(f, rows).rank() <= 1
}

fn eigen_extract<K: Field>(
    m: &MatrixRep<K>,
    p: &[K::Elem],
    row_index: &HashMap<Expo, usize>,
    kernel: &[Vec<K::Elem>],
) -> Result<KernelPoints<K>, FiberError> {
    let ring = m.param.ring();
    let f = ring.field().clone();
    let c = kernel.len();
    let Some(block) = (0..ring.num_blocks()).find(|&b| m.nu.0[b] >= 1) else {
        return Ok(KernelPoints::DegreesOnly {
            corank: c,
            diagnostic: "matrix degree sees no block with positive degree".into(),
        });
    };
    let range = ring.block_range(block);
    let mut nu_less = m.nu.clone();
    nu_less.0[block] -= 1;
    let bprime = ring.graded_basis(&nu_less);

    // operator matrices A_v[k][m'] = w_k[x_v * m']
    let op = |v: usize| -> DenseMatrix<K> {
        let mut a = DenseMatrix::zero(f.clone(), c, bprime.len());
        for (k, w) in kernel.iter().enumerate() {
            for (col, e) in bprime.iter().enumerate() {
                let mut shifted = e.clone();
                shifted[v] += 1;
                let idx = row_index[&shifted];
                a.set(k, col, w[idx].clone());
            }
        }
        a
    };
    let ops: Vec<DenseMatrix<K>> = range.clone().map(op).collect();

    // denominator operator: first variable whose matrix has full rank c
    let Some(jpos) = ops.iter().position(|a| a.rank() == c) else {
        return Ok(KernelPoints::DegreesOnly {
            corank: c,
            diagnostic: "no multiplication operator of full rank (non-reduced fiber?)".into(),
        });
    };
    let aj = &ops[jpos];
    let piv_cols = aj.rref().pivot_cols;
    let sub = |a: &DenseMatrix<K>| -> DenseMatrix<K> {
        let mut s = DenseMatrix::zero(f.clone(), c, c);
        for i in 0..c {
            for (jj, &col) in piv_cols.iter().enumerate() {
                s.set(i, jj, a.at(i, col).clone());
            }
        }
        s
    };
    let aj_s = sub(aj);
    let aj_inv = invert(&aj_s).expect("pivot submatrix is invertible");

    use rand::{Rng, SeedableRng};
    for seed in 0..6u64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xE16E + seed);
        // generic combination G = sum lambda_v A_v|S * inv(A_j|S)
        let mut g = DenseMatrix::zero(f.clone(), c, c);
        let mut lam_ok = false;
        for (vi, a) in ops.iter().enumerate() {
            let lam = f.from_i64(if vi == jpos {
                0
            } else {
                lam_ok = true;
                rng.gen_range(1..=13)
            });
            let a_s = sub(a);
            let prod = mat_mul(&a_s, &aj_inv);
            for i in 0..c {
                for j in 0..c {
                    let v = f.add(g.at(i, j), &f.mul(&lam, prod.at(i, j)));
                    g.set(i, j, v);
                }
            }
        }
        if !lam_ok {
            break;
        }
        // characteristic polynomial as a binary form det(th*I - G*w)
        let two = crate::polyring::RingSpec::projective(&["th", "w"], f.clone())
            .expect("eigen ring");
        let th = Poly::var(two.clone(), 0);
        let wv = Poly::var(two.clone(), 1);
        let mut entries = Vec::with_capacity(c * c);
        for i in 0..c {
            for j in 0..c {
                let mut e = -&wv.scale(g.at(i, j));
                if i == j {
                    e = &e + &th;
                }
                entries.push(e);
            }
        }
        let charpoly = PolyMatrix::new(two.clone(), c, c, entries).determinant();
        let roots = binary_form_roots(&charpoly);
        if roots.unfactored.is_some() {
            // eigenvalues outside the field: numeric fallback
            return Ok(approx::eigen_extract_numeric(m, p, kernel, &g));
        }
        if roots.roots.iter().any(|(_, mult)| *mult > 1)
            || roots.roots.iter().any(|(pt, _)| f.is_zero(&pt[1]))
        {
            continue; // unlucky combination, retry with a new seed
        }
        // each simple eigenvalue yields a left eigenvector, i.e. a fiber point
        let mut pts = Vec::new();
        let mut ok = true;
        for (root, _) in &roots.roots {
            let theta = f.div(&root[0], &root[1]).expect("finite eigenvalue");
            // kernel of (G - theta I)^T
            let mut gm = g.clone();
            for i in 0..c {
                let v = f.sub(gm.at(i, i), &theta);
                gm.set(i, i, v);
            }
            let ns = gm.transpose().nullspace_basis();
            if ns.len() != 1 {
                ok = false;
                break;
            }
            let u = &ns[0];
            // candidate evaluation vector u^T W
            let mut ev = vec![f.zero(); m.rows.len()];
            for (k, w) in kernel.iter().enumerate() {
                for (i, x) in w.iter().enumerate() {
                    ev[i] = f.add(&ev[i], &f.mul(&u[k], x));
                }
            }
            match read_point(m, row_index, &ev) {
                Some(pt) if verify_on_fiber(m, &pt, p) => pts.push(pt),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && pts.len() == c {
            return Ok(KernelPoints::Exact(pts));
        }
    }
    Ok(KernelPoints::DegreesOnly {
        corank: c,
        diagnostic: "eigenvalue separation failed after reseeding \
                     (non-reduced or coincident fiber points)"
            .into(),
    })
}

fn mat_mul<K: Field>(a: &DenseMatrix<K>, b: &DenseMatrix<K>) -> DenseMatrix<K> {
    let f = a.field().clone();
    assert_eq!(a.cols(), b.rows());
    let mut out = DenseMatrix::zero(f.clone(), a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut acc = f.zero();
            for k in 0..a.cols() {
                acc = f.add(&acc, &f.mul(a.at(i, k), b.at(k, j)));
            }
            out.set(i, j, acc);
        }
    }
    out
}

fn invert<K: Field>(a: &DenseMatrix<K>) -> Option<DenseMatrix<K>> {
    let f = a.field().clone();
    let n = a.rows();
    assert_eq!(n, a.cols());
    let mut out = DenseMatrix::zero(f.clone(), n, n);
    let id = DenseMatrix::identity(f.clone(), n);
    for j in 0..n {
        let col = a.solve(&(0..n).map(|i| id.at(i, j).clone()).collect::<Vec<_>>())?;
        for i in 0..n {
            out.set(i, j, col[i].clone());
        }
    }
    // solve() finds some preimage; confirm invertibility
    if a.rank() != n {
        return None;
    }
    Some(out)
}

/// The Jacobian matrix of the map: rows indexed by source variables,
/// columns by components.
pub fn jacobian_matrix<K: Field>(param: &Parameterization<K>) -> PolyMatrix<K> {
    let ring = param.ring().clone();
    let n = ring.num_vars();
    let r = param.target_dim();
    let entries: Vec<Poly<K>> = (0..n)
        .flat_map(|v| param.maps().iter().map(move |fj| fj.partial(v)))
        .collect();
    PolyMatrix::new(ring, n, r, entries)
}

/// GCD of the four maximal minors of the 3x4 Jacobian of a surface
/// parameterization, with the degree bound `3(d-1) - indeg(Syz(I))`.
pub fn jacobian_minor_gcd<K: Field>(
    param: &Parameterization<K>,
) -> Result<(Poly<K>, i64), FiberError> {
    let ring = param.ring();
    if ring.num_blocks() != 1 || ring.num_vars() != 3 || param.target_dim() != 4 {
        return Err(FiberError::NotSurfaceShape(format!(
            "{} variables, {} components",
            ring.num_vars(),
            param.target_dim()
        )));
    }
    let jac = jacobian_matrix(param);
    let minors = jac.maximal_minors();
    if minors.iter().all(|m| m.is_zero()) {
        return Err(FiberError::JacobianVanishes);
    }
    let f_gcd = gcd_many(&minors);
    let d = param.degree().total();
    let indeg = syzygy_initial_degree(param).unwrap_or(0);
    let bound = 3 * (d - 1) - indeg;
    Ok((f_gcd, bound))
}

/// Smallest total degree carrying a nonzero syzygy.
pub fn syzygy_initial_degree<K: Field>(param: &Parameterization<K>) -> Option<i64> {
    let d = param.degree().total();
    for nu in 0..=(4 * d.max(1)) {
        let piece = syzygy::syzygies_in_degree(param, &MultiDeg::scalar(nu));
        if !piece.basis.is_empty() {
            return Some(nu);
        }
    }
    None
}

/// Decomposition of the base ideal at a point with a one-dimensional fiber.
#[derive(Debug, Clone)]
pub struct OneDimFiberReport<K: Field> {
    pub point: Vec<K::Elem>,
    /// Coefficients of the normalizing linear form `l_p` in the `T_i`.
    pub ell_p: Vec<K::Elem>,
    /// Equation of the unmixed one-dimensional component of the fiber.
    pub h_p: Poly<K>,
    pub residuals: Vec<Poly<K>>,
}

/// `h_p = gcd(l_1(f), .., l_4(f))` with `l_i(T) = T_i - p_i l_p(T)`, plus
/// the residuals `g_i = l_i(f)/h_p`, so `I = (l_p(f)) + h_p (g_1..g_4)`.
pub fn one_dim_fiber_decomposition<K: Field>(
    param: &Parameterization<K>,
    p: &[K::Elem],
    ell_p: Option<Vec<K::Elem>>,
) -> Result<OneDimFiberReport<K>, FiberError> {
    let ring = param.ring();
    let f = ring.field().clone();
    if ring.num_blocks() != 1 || ring.num_vars() != 3 || param.target_dim() != 4 {
        return Err(FiberError::NotSurfaceShape(format!(
            "{} variables, {} components",
            ring.num_vars(),
            param.target_dim()
        )));
    }
    if p.len() != 4 {
        return Err(FiberError::PointArity {
            got: p.len(),
            expected: 4,
        });
    }
    let ell = match ell_p {
        Some(l) => l,
        None => {
            // first nonzero coordinate: l_p = T_j / p_j
            let j = p
                .iter()
                .position(|c| !f.is_zero(c))
                .ok_or(FiberError::ZeroPoint)?;
            let mut l = vec![f.zero(); 4];
            l[j] = f.inv(&p[j]).expect("nonzero coordinate");
            l
        }
    };
    // l_p(p) must be 1
    let mut lp_at_p = f.zero();
    for (a, b) in ell.iter().zip(p) {
        lp_at_p = f.add(&lp_at_p, &f.mul(a, b));
    }
    if lp_at_p != f.one() {
        return Err(FiberError::BadNormalizingForm);
    }
    let mut lp_f = Poly::zero(ring.clone());
    for (a, fi) in ell.iter().zip(param.maps()) {
        lp_f = &lp_f + &fi.scale(a);
    }
    let li_f: Vec<Poly<K>> = param
        .maps()
        .iter()
        .zip(p)
        .map(|(fi, pi)| fi - &lp_f.scale(pi))
        .collect();
    let h_p = gcd_many(&li_f);
    if h_p.total_degree() == 0 {
        return Err(FiberError::NotOneDimFiber);
    }
    let residuals: Vec<Poly<K>> = li_f
        .iter()
        .map(|l| l.exact_div(&h_p).expect("gcd divides"))
        .collect();
    // reconstruction identity f_i = p_i l_p(f) + h_p g_i
    for ((fi, pi), gi) in param.maps().iter().zip(p).zip(&residuals) {
        let rhs = &lp_f.scale(pi) + &(&h_p * gi);
        debug_assert_eq!(fi, &rhs);
        if fi != &rhs {
            return Err(FiberError::CorruptInput);
        }
    }
    Ok(OneDimFiberReport {
        point: p.to_vec(),
        ell_p: ell,
        h_p,
        residuals,
    })
}

/// Generators of the minor ideal `I_{m-r+2}(J(f))` cutting out candidate
/// loci contracted by `r` dimensions.
pub fn contracted_locus_generators<K: Field>(
    param: &Parameterization<K>,
    r_drop: i64,
) -> Result<Vec<Poly<K>>, FiberError> {
    let ring = param.ring();
    let m = ring.num_vars() as i64 - 1;
    let n_plus_1 = param.target_dim();
    let size = m - r_drop + 2;
    let max = (m as usize + 1).min(n_plus_1);
    if size < 1 || size as usize > max {
        return Err(FiberError::MinorSizeOutOfRange { size, max });
    }
    let jac = jacobian_matrix(param);
    Ok(jac.minors(size as usize))
}

/// Classification of the base locus by stabilization of the Hilbert
/// function of `R/I` in a window above `2d`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum BaseLocusDim {
    Empty,
    Dim0 { degree: usize },
    Dim1Plus,
}

pub fn dim_base_locus<K: Field>(param: &Parameterization<K>) -> Result<BaseLocusDim, FiberError> {
    let ring = param.ring();
    let d = param.degree();
    let ones = MultiDeg(vec![1; d.len()]);
    let mut values = Vec::new();
    for k in 0..4i64 {
        let nu = d.scale(2).add(&ones.scale(k));
        let total = ring.dim_graded_piece(&nu);
        let (m, _, _) = multiplication_matrix_public(param, &nu.sub(d));
        values.push(total - m.rank());
    }
    if values.iter().all(|&v| v == 0) {
        return Ok(BaseLocusDim::Empty);
    }
    if values.windows(2).all(|w| w[0] == w[1]) {
        return Ok(BaseLocusDim::Dim0 { degree: values[0] });
    }
    if values.windows(2).all(|w| w[0] < w[1]) {
        return Ok(BaseLocusDim::Dim1Plus);
    }
    Err(FiberError::BaseLocusInconclusive(values))
}

// the multiplication matrix is private to syzygy; rebuild it here
fn multiplication_matrix_public<K: Field>(
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
            for (row, val) in crate::exactlinalg::coeff_vector(&col, &dst)
                .into_iter()
                .enumerate()
            {
                m.set(row, i * src.len() + k, val);
            }
        }
    }
    (m, src, dst)
}

/// Numeric fallback paths, flagged approximate throughout.
pub mod approx {
    use super::*;

    /// Evaluate a polynomial at floating coordinates.
    pub fn eval_f64<K: Field>(p: &Poly<K>, x: &[f64]) -> f64 {
        let f = p.field();
        let mut acc = 0.0;
        for (e, c) in p.terms() {
            let mut t = f.to_f64(c);
            for (v, &k) in e.iter().enumerate() {
                t *= x[v].powi(k as i32);
            }
            acc += t;
        }
        acc
    }

    /// Singular values by one-sided Jacobi orthogonalization.
    pub fn singular_values(mut a: Vec<Vec<f64>>) -> Vec<f64> {
        if a.is_empty() {
            return Vec::new();
        }
        let rows = a.len();
        let cols = a[0].len();
        if rows < cols {
            // transpose: singular values are shared
            let mut t = vec![vec![0.0; rows]; cols];
            for (i, row) in a.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    t[j][i] = v;
                }
            }
            a = t;
        }
        let n = a[0].len();
        for _ in 0..60 {
            let mut off = 0.0;
            for p in 0..n {
                for q in p + 1..n {
                    let (mut app, mut aqq, mut apq) = (0.0, 0.0, 0.0);
                    for row in &a {
                        app += row[p] * row[p];
                        aqq += row[q] * row[q];
                        apq += row[p] * row[q];
                    }
                    off += apq.abs();
                    if apq.abs() < 1e-300 {
                        continue;
                    }
                    let tau = (aqq - app) / (2.0 * apq);
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let cs = 1.0 / (1.0 + t * t).sqrt();
                    let sn = cs * t;
                    for row in a.iter_mut() {
                        let (vp, vq) = (row[p], row[q]);
                        row[p] = cs * vp - sn * vq;
                        row[q] = sn * vp + cs * vq;
                    }
                }
            }
            if off < 1e-14 {
                break;
            }
        }
        let mut sv: Vec<f64> = (0..n)
            .map(|j| a.iter().map(|row| row[j] * row[j]).sum::<f64>().sqrt())
            .collect();
        sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
        sv
    }

    /// Numeric corank with relative singular-value threshold 1e-8.
    pub fn numeric_corank(a: Vec<Vec<f64>>, rows: usize) -> usize {
        let sv = singular_values(a);
        let max = sv.first().copied().unwrap_or(0.0);
        if max == 0.0 {
            return rows;
        }
        let rank = sv.iter().filter(|&&s| s > 1e-8 * max).count();
        rows - rank
    }

    /// Approximate fiber report for a floating query point.
    #[derive(Debug, Clone)]
    pub struct ApproxFiberReport {
        pub corank: usize,
        pub approximate: bool,
    }

    pub fn fiber_degree_approx<K: Field>(m: &MatrixRep<K>, p: &[f64]) -> ApproxFiberReport {
        let grid: Vec<Vec<f64>> = (0..m.n_rows())
            .map(|i| (0..m.n_cols()).map(|j| eval_f64(m.entry(i, j), p)).collect())
            .collect();
        ApproxFiberReport {
            corank: numeric_corank(grid, m.n_rows()),
            approximate: true,
        }
    }

    /// Roots of a complex polynomial by Durand-Kerner.
    pub fn poly_roots_complex(coeffs: &[f64]) -> Vec<(f64, f64)> {
        use num::complex::Complex64;
        let n = coeffs.len() - 1;
        if n == 0 {
            return Vec::new();
        }
        let lead = coeffs[n];
        let monic: Vec<Complex64> = coeffs
            .iter()
            .map(|&c| Complex64::new(c / lead, 0.0))
            .collect();
        let eval = |z: Complex64| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for &c in monic.iter().rev() {
                acc = acc * z + c;
            }
            acc
        };
        let mut roots: Vec<Complex64> = (0..n)
            .map(|k| Complex64::new(0.4, 0.9).powu(k as u32 + 1))
            .collect();
        for _ in 0..200 {
            let mut delta = 0.0;
            for i in 0..n {
                let mut denom = Complex64::new(1.0, 0.0);
                for j in 0..n {
                    if i != j {
                        denom *= roots[i] - roots[j];
                    }
                }
                if denom.norm() < 1e-300 {
                    continue;
                }
                let step = eval(roots[i]) / denom;
                roots[i] -= step;
                delta += step.norm();
            }
            if delta < 1e-13 {
                break;
            }
        }
        roots.into_iter().map(|z| (z.re, z.im)).collect()
    }

    /// Numeric eigen fallback for point extraction: returns flat coordinate
    /// tuples, flagged approximate.
    pub(super) fn eigen_extract_numeric<K: Field>(
        m: &MatrixRep<K>,
        _p: &[K::Elem],
        kernel: &[Vec<K::Elem>],
        g: &DenseMatrix<K>,
    ) -> KernelPoints<K> {
        let f = m.t_ring.field().clone();
        let c = kernel.len();
        // characteristic polynomial coefficients via Faddeev-LeVerrier on f64
        let gf: Vec<Vec<f64>> = (0..c)
            .map(|i| (0..c).map(|j| f.to_f64(g.at(i, j))).collect())
            .collect();
        let charpoly = charpoly_f64(&gf);
        let roots = poly_roots_complex(&charpoly);
        let ring = m.param.ring();
        let mut out = Vec::new();
        for (re, im) in roots {
            if im.abs() > 1e-6 {
                continue;
            }
            // inverse iteration for the left eigenvector
            let mut gt = vec![vec![0.0; c]; c];
            for (i, row) in gf.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    gt[j][i] = v - if i == j { re } else { 0.0 };
                }
            }
            let Some(u) = null_vector_f64(&gt) else {
                continue;
            };
            let mut ev = vec![0.0; m.rows.len()];
            for (k, w) in kernel.iter().enumerate() {
                for (i, x) in w.iter().enumerate() {
                    ev[i] += u[k] * f.to_f64(x);
                }
            }
            // read coordinates as in the exact path
            let Some(pivot) = ev
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
                .map(|(i, _)| i)
            else {
                continue;
            };
            if ev[pivot].abs() < 1e-9 {
                continue;
            }
            let mstar = &m.rows[pivot];
            let row_index: HashMap<&Expo, usize> =
                m.rows.iter().enumerate().map(|(i, e)| (e, i)).collect();
            let mut coords = vec![0.0; ring.num_vars()];
            let mut complete = true;
            for b in 0..ring.num_blocks() {
                let range = ring.block_range(b);
                if m.nu.0[b] == 0 {
                    complete = false;
                    continue;
                }
                let Some(jb) = range.clone().find(|&v| mstar[v] > 0) else {
                    complete = false;
                    continue;
                };
                for v in range.clone() {
                    if v == jb {
                        coords[v] = 1.0;
                        continue;
                    }
                    let mut shifted = mstar.clone();
                    shifted[jb] -= 1;
                    shifted[v] += 1;
                    match row_index.get(&shifted) {
                        Some(&idx) => coords[v] = ev[idx] / ev[pivot],
                        None => complete = false,
                    }
                }
            }
            if complete {
                out.push(coords);
            }
        }
        KernelPoints::Approximate(out)
    }

    fn charpoly_f64(a: &[Vec<f64>]) -> Vec<f64> {
        // Faddeev-LeVerrier: coefficients ascending in theta
        let n = a.len();
        let mut m = vec![vec![0.0; n]; n];
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        let mut c = 1.0;
        for k in 1..=n {
            // M = A*M + c*I
            let mut am = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = if i == j { c } else { 0.0 };
                    for l in 0..n {
                        acc += a[i][l] * m[l][j];
                    }
                    am[i][j] = acc;
                }
            }
            m = am;
            let mut tr = 0.0;
            for i in 0..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += a[i][l] * m[l][i];
                }
                tr += acc;
            }
            c = -tr / k as f64;
            coeffs[n - k] = c;
        }
        coeffs
    }

    fn null_vector_f64(a: &[Vec<f64>]) -> Option<Vec<f64>> {
        // least-singular right vector via a few inverse power iterations on
        // A^T A + eps I
        let n = a.len();
        let mut v = vec![1.0; n];
        for it in 0..50 {
            // solve (A + eps I) x = v by naive Gaussian elimination
            let eps = 1e-10;
            let mut aug: Vec<Vec<f64>> = a
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let mut r = row.clone();
                    r[i] += eps;
                    r.push(v[i]);
                    r
                })
                .collect();
            for col in 0..n {
                let piv = (col..n)
                    .max_by(|&x, &y| aug[x][col].abs().partial_cmp(&aug[y][col].abs()).unwrap())?;
                aug.swap(col, piv);
                if aug[col][col].abs() < 1e-300 {
                    return None;
                }
                for row in col + 1..n {
                    let fct = aug[row][col] / aug[col][col];
                    for j in col..=n {
                        aug[row][j] -= fct * aug[col][j];
                    }
                }
            }
            let mut x = vec![0.0; n];
            for i in (0..n).rev() {
                let mut acc = aug[i][n];
                for j in i + 1..n {
                    acc -= aug[i][j] * x[j];
                }
                x[i] = acc / aug[i][i];
            }
            let norm = x.iter().map(|t| t * t).sum::<f64>().sqrt();
            if norm < 1e-300 {
                return None;
            }
            for t in x.iter_mut() {
                *t /= norm;
            }
            let close = v
                .iter()
                .zip(&x)
                .map(|(a, b)| (a.abs() - b.abs()).abs())
                .sum::<f64>();
            v = x;
            if close < 1e-12 && it > 2 {
                break;
            }
        }
        Some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::matrixrep::{build_rep, ThresholdOverrides};
    use crate::polyring::{parse_polynomial, RingSpec};

    fn q(n: i64) -> num::BigRational {
        Rationals.from_i64(n)
    }

    fn curve_param(maps: &[&str]) -> Parameterization<Rationals> {
        let r = RingSpec::projective(&["x", "y"], Rationals).unwrap();
        Parameterization::new(
            maps.iter()
                .map(|m| parse_polynomial(m, &r).unwrap())
                .collect(),
        )
        .unwrap()
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

    fn planted() -> Parameterization<Rationals> {
        let r = RingSpec::projective(&["x", "y", "z"], Rationals).unwrap();
        Parameterization::new(
            ["x*y^2", "x*y*z", "x*z^2", "y^3"]
                .iter()
                .map(|m| parse_polynomial(m, &r).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn twisted_cubic_fiber_reports() {
        let tc = curve_param(&["x^3", "x^2*y", "x*y^2", "y^3"]);
        let m = build_rep(&tc, &MultiDeg::scalar(1), 1, &Default::default(), true).unwrap();
        let rep = fiber_degree(&m, &[q(1), q(1), q(1), q(1)]).unwrap();
        assert_eq!(rep.corank, 1);
        assert!(!rep.certified);
        let rep0 = fiber_degree(&m, &[q(1), q(0), q(0), q(1)]).unwrap();
        assert_eq!(rep0.corank, 0);
        assert_eq!(rep0.interpretation, Interpretation::OffImage);
        assert!(fiber_degree(&m, &[q(0), q(0), q(0), q(0)]).is_err());
    }

    #[test]
    fn sphere_strata() {
        let sph = sphere();
        let overrides = ThresholdOverrides {
            indeg_sat: Some(1),
            ..Default::default()
        };
        let m = build_rep(&sph, &MultiDeg::scalar(1), 1, &overrides, false).unwrap();
        // the embedded double point
        let rep = fiber_degree(&m, &[q(1), q(0), q(0), q(-1)]).unwrap();
        assert_eq!(rep.corank, 2);
        assert_eq!(rep.fitting_stratum(), 1);
        // a generic on-sphere point: (1:1:0:0)
        let rep = fiber_degree(&m, &[q(1), q(1), q(0), q(0)]).unwrap();
        assert_eq!(rep.corank, 1);
        assert_eq!(rep.fitting_stratum(), 0);
        // off-image
        let rep = fiber_degree(&m, &[q(2), q(1), q(0), q(0)]).unwrap();
        assert_eq!(rep.fitting_stratum(), -1);
    }

    #[test]
    fn circle_p1_fibers() {
        let circle = curve_param(&["x^2 - y^2", "2*x*y", "x^2 + y^2"]);
        let fib = fiber_points_p1(&circle, &[q(1), q(0), q(1)]).unwrap();
        assert_eq!(fib.degree, 1);
        assert_eq!(fib.roots.roots.len(), 1);
        let (pt, mult) = &fib.roots.roots[0];
        assert_eq!(*mult, 1);
        assert!(Rationals.is_zero(&pt[1]), "fiber point is (1:0)");

        let fib = fiber_points_p1(&circle, &[q(-1), q(0), q(1)]).unwrap();
        assert_eq!(fib.degree, 1);
        let (pt, _) = &fib.roots.roots[0];
        assert!(Rationals.is_zero(&pt[0]), "fiber point is (0:1)");

        let off = fiber_points_p1(&circle, &[q(1), q(1), q(1)]).unwrap();
        assert_eq!(off.degree, 0, "off-image point has empty fiber");
    }

    #[test]
    fn kernel_point_cubic() {
        let tc = curve_param(&["x^3", "x^2*y", "x*y^2", "y^3"]);
        let m = build_rep(&tc, &MultiDeg::scalar(2), 1, &Default::default(), false).unwrap();
        assert!(m.valid);
        let pts = fiber_points_from_kernel(&m, &[q(1), q(1), q(1), q(1)]).unwrap();
        match pts {
            KernelPoints::Exact(v) => {
                assert_eq!(v.len(), 1);
                let c = v[0].full_coords().unwrap();
                assert_eq!(c, vec![q(1), q(1)], "preimage (1:1)");
            }
            other => panic!("expected exact points, got {other:?}"),
        }
        // corank 0: empty list
        let pts = fiber_points_from_kernel(&m, &[q(1), q(0), q(0), q(1)]).unwrap();
        assert!(matches!(pts, KernelPoints::Exact(v) if v.is_empty()));
    }

    #[test]
    fn kernel_two_points_eigen() {
        // double conic: generic fibers have two reduced points
        let dc = curve_param(&["x^4", "x^2*y^2", "y^4"]);
        let m = build_rep(&dc, &MultiDeg::scalar(4), 1, &Default::default(), false).unwrap();
        assert!(m.valid);
        // p = psi(1:1) = (1:1:1); fiber = {(1:1), (1:-1)}
        let pts = fiber_points_from_kernel(&m, &[q(1), q(1), q(1)]).unwrap();
        match pts {
            KernelPoints::Exact(v) => {
                let mut coords: Vec<Vec<num::BigRational>> =
                    v.iter().map(|p| p.full_coords().unwrap()).collect();
                coords.sort_by_key(|c| Rationals.elem_to_string(&c[1]));
                assert_eq!(coords.len(), 2);
                assert_eq!(coords[0], vec![q(1), q(-1)]);
                assert_eq!(coords[1], vec![q(1), q(1)]);
            }
            other => panic!("expected two exact points, got {other:?}"),
        }
    }

    #[test]
    fn sphere_kernel_point_cross_check() {
        let sph = sphere();
        let overrides = ThresholdOverrides {
            indeg_sat: Some(1),
            ..Default::default()
        };
        let m = build_rep(&sph, &MultiDeg::scalar(1), 1, &overrides, false).unwrap();
        let pts = fiber_points_from_kernel(&m, &[q(1), q(1), q(0), q(0)]).unwrap();
        match pts {
            KernelPoints::Exact(v) => {
                assert_eq!(v.len(), 1);
                let x = v[0].full_coords().unwrap();
                let fx = sph.evaluate(&x);
                let rows = vec![fx, vec![q(1), q(1), q(0), q(0)]];
                assert!(DenseMatrix::from_rows(Rationals, rows).rank() <= 1);
            }
            other => panic!("expected exact point, got {other:?}"),
        }
    }

    #[test]
    fn jacobian_gcd_planted() {
        let p = planted();
        let (f_gcd, bound) = jacobian_minor_gcd(&p).unwrap();
        let x = parse_polynomial("x", p.ring()).unwrap();
        assert!(x.divides(&f_gcd), "plant x divides the Jacobian gcd");
        assert!(f_gcd.total_degree() <= bound);
        assert_eq!(bound, 3 * (3 - 1) - 1, "d=3 with indeg(Syz)=1");
    }

    #[test]
    fn one_dim_fiber_planted() {
        let p = planted();
        let rep =
            one_dim_fiber_decomposition(&p, &[q(0), q(0), q(0), q(1)], None).unwrap();
        let x = parse_polynomial("x", p.ring()).unwrap();
        assert_eq!(rep.h_p, x);
        // residuals are (y^2, yz, z^2, 0)
        assert_eq!(rep.residuals[3], Poly::zero(p.ring().clone()));
        // sphere: contracted line over (1:0:0:-1) has h_p = x1
        let sph = sphere();
        let rep = one_dim_fiber_decomposition(&sph, &[q(1), q(0), q(0), q(-1)], None).unwrap();
        let x1 = parse_polynomial("x1", sph.ring()).unwrap();
        assert_eq!(rep.h_p, x1);
        // a finite-fiber point is rejected
        assert!(matches!(
            one_dim_fiber_decomposition(&sph, &[q(1), q(1), q(0), q(0)], None),
            Err(FiberError::NotOneDimFiber)
        ));
    }

    #[test]
    fn contracted_locus_sizes() {
        let p = planted();
        let g3 = contracted_locus_generators(&p, 1).unwrap();
        assert_eq!(g3.len(), 4, "size-3 minors of a 3x4 Jacobian");
        let x = parse_polynomial("x", p.ring()).unwrap();
        for m in &g3 {
            if !m.is_zero() {
                assert!(x.divides(m), "the contracted line x=0 kills all 3-minors");
            }
        }
        let g2 = contracted_locus_generators(&p, 2).unwrap();
        assert_eq!(g2.len(), 18, "C(3,2)*C(4,2) two-minors");
        assert!(contracted_locus_generators(&p, 5).is_err());
    }

    #[test]
    fn base_locus_classification() {
        assert_eq!(dim_base_locus(&sphere()).unwrap(), BaseLocusDim::Dim0 { degree: 2 });
        let conic = curve_param(&["x^2", "x*y", "y^2"]);
        assert_eq!(dim_base_locus(&conic).unwrap(), BaseLocusDim::Empty);
        // the planted surface map has a fat but finite base locus: the
        // one-dimensional behavior lives in its fiber, not its base scheme
        assert_eq!(
            dim_base_locus(&planted()).unwrap(),
            BaseLocusDim::Dim0 { degree: 6 }
        );
        // a curve component needs a product source: maps vanishing on
        // {(0:0:1)} x P^1
        let ring = RingSpec::new(
            vec![
                vec!["x1".into(), "x2".into(), "x3".into()],
                vec!["t0".into(), "t1".into()],
            ],
            Rationals,
        )
        .unwrap();
        let m = |s: &str| parse_polynomial(s, &ring).unwrap();
        let p = Parameterization::new(vec![
            m("x1*t0"),
            m("x1*t1"),
            m("x2*t0"),
            m("x2*t1"),
        ])
        .unwrap();
        assert_eq!(dim_base_locus(&p).unwrap(), BaseLocusDim::Dim1Plus);
    }

    #[test]
    fn scaling_invariance() {
        let sph = sphere();
        let m = build_rep(&sph, &MultiDeg::scalar(2), 1, &Default::default(), false).unwrap();
        let p1 = [q(1), q(0), q(0), q(-1)];
        let p2 = [q(-7), q(0), q(0), q(7)];
        let r1 = fiber_degree(&m, &p1).unwrap();
        let r2 = fiber_degree(&m, &p2).unwrap();
        assert_eq!(r1.corank, r2.corank);
    }

    #[test]
    fn numeric_corank_matches_exact() {
        let sph = sphere();
        let m = build_rep(&sph, &MultiDeg::scalar(1), 1, &Default::default(), true).unwrap();
        let approx = approx::fiber_degree_approx(&m, &[1.0, 0.0, 0.0, -1.0]);
        assert!(approx.approximate);
        assert_eq!(approx.corank, 2);
        let approx = approx::fiber_degree_approx(&m, &[2.0, 1.0, 0.5, 0.0]);
        assert_eq!(approx.corank, 0);
    }
}
