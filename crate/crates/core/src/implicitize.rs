//! Implicit equations and map degrees from elimination matrices: the
//! Sylvester-type determinant for plane curves, the GCD of maximal minors
//! for hypersurfaces, and the regularity bound for rational curves.
//!
//! Every returned equation `F` carries the strongest certificate available
//! here: `F(f_1, .., f_r)` expands to the zero polynomial, checked exactly.

use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::exactlinalg::{subsets, PolyMatrix};
use crate::field::Field;
use crate::fiberlab;
use crate::matrixrep::{self, MatrixRep, MatrixRepError, ThresholdOverrides};
use crate::polyring::univar::squarefree_decomposition;
use crate::polyring::{gcd, MultiDeg, Parameterization, Poly, RingSpec};
use crate::syzygy;

#[derive(Debug, Error)]
pub enum ImplicitError {
    #[error("plane-curve implicitization needs a P^1 source and three components")]
    NotPlaneCurve,
    #[error("determinant vanished identically: the input map is corrupt (components share a factor)")]
    ZeroDeterminant,
    #[error("perfect-power extraction failed: {0}")]
    PowerExtraction(String),
    #[error("generic-fiber samples disagree: {0:?}")]
    InconsistentSamples(Vec<usize>),
    #[error("all sampled maximal minors vanish: the map is not generically finite onto a hypersurface")]
    DegenerateMinors,
    #[error("matrix has more rows than columns after pruning zero columns")]
    RowsExceedColumns,
    #[error("implicit identity check failed: the extracted equation does not vanish on the image")]
    IdentityCheckFailed,
    #[error(transparent)]
    MatrixRep(#[from] MatrixRepError),
    #[error(transparent)]
    Syzygy(#[from] syzygy::SyzygyError),
}

/// An implicit equation with its extracted power: the source determinant or
/// minor GCD equals `c * equation^power`.
#[derive(Debug, Clone)]
pub struct ImplicitResult<K: Field> {
    /// Monic polynomial in `T_1..T_r`.
    pub equation: Poly<K>,
    pub power: u32,
    pub method: String,
    pub caveats: Vec<String>,
}

impl<K: Field> ImplicitResult<K> {
    /// Exact check that the equation vanishes identically on the image.
    pub fn identity_holds(&self, param: &Parameterization<K>) -> bool {
        self.equation
            .compose(param.ring(), param.maps())
            .is_zero()
    }
}

/// Determine `e` with `g = c * F^e` by squarefree-decomposing the
/// restriction of `g` to a seeded random line, retrying on degenerate
/// restrictions.
fn power_by_line_restriction<K: Field>(g: &Poly<K>) -> Option<u32> {
    let ring = g.ring();
    let f = ring.field().clone();
    let two = RingSpec::projective(&["s_", "w_"], f.clone()).expect("line ring");
    let s = Poly::var(two.clone(), 0);
    let w = Poly::var(two.clone(), 1);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x11A3);
    for _ in 0..8 {
        let images: Vec<Poly<K>> = (0..ring.num_vars())
            .map(|_| {
                let a = f.from_i64(rng.gen_range(-7..=7));
                let b = f.from_i64(rng.gen_range(-7..=7));
                &s.scale(&a) + &w.scale(&b)
            })
            .collect();
        let line = g.compose(&two, &images);
        if line.total_degree() != g.total_degree() {
            continue;
        }
        let Some(dec) = squarefree_decomposition(&line) else {
            continue;
        };
        let mut e = 0u32;
        for (factor, mult) in &dec {
            if factor.total_degree() > 0 {
                e = gcd_u32(e, *mult);
            }
        }
        if e > 0 {
            return Some(e);
        }
    }
    None
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if a == 0 {
        b
    } else {
        gcd_u32(b % a, a)
    }
}

/// Write `g = c * F^e` with `F` monic and squarefree; verified by exact
/// division before returning. Falls back to `e = 1` when no deeper power
/// structure certifies.
pub fn extract_perfect_power<K: Field>(g: &Poly<K>) -> Result<(Poly<K>, u32), ImplicitError> {
    if g.is_zero() {
        return Err(ImplicitError::PowerExtraction("zero input".into()));
    }
    if g.total_degree() == 0 {
        return Ok((g.monic(), 1));
    }
    let ring = g.ring().clone();
    let partials: Vec<Poly<K>> = (0..ring.num_vars()).map(|v| g.partial(v)).collect();
    if partials.iter().all(|p| p.is_zero()) {
        return Err(ImplicitError::PowerExtraction(
            "all partial derivatives vanish (characteristic divides the exponent)".into(),
        ));
    }
    let mut d = g.monic();
    for p in &partials {
        d = gcd(&d, p);
        if d.total_degree() == 0 {
            break;
        }
    }
    let f_cand = g
        .exact_div(&d)
        .expect("gcd with partials divides")
        .monic();
    let e_line = power_by_line_restriction(g);
    let e_div = if f_cand.total_degree() > 0 && g.total_degree() % f_cand.total_degree() == 0 {
        Some((g.total_degree() / f_cand.total_degree()) as u32)
    } else {
        None
    };
    // prefer the degree quotient, cross-checked against the line profile
    let mut candidates: Vec<u32> = Vec::new();
    if let Some(e) = e_div {
        candidates.push(e);
    }
    if let Some(e) = e_line {
        if !candidates.contains(&e) {
            candidates.push(e);
        }
    }
    candidates.push(1);
    for e in candidates {
        if e == 0 {
            continue;
        }
        let target = if e == 1 { f_cand.clone() } else { f_cand.pow(e) };
        if let Some(q) = g.exact_div(&target) {
            if q.total_degree() == 0 {
                let base = if e == 1 { g.monic() } else { f_cand.clone() };
                return Ok((base, e));
            }
        }
    }
    Ok((g.monic(), 1))
}

/// Implicit equation of a plane curve from the determinant of the
/// Sylvester-type matrix `M_{d-1}`; returns `(F, e)` with `det = c F^e` and
/// `e deg F = d`.
pub fn plane_curve_implicit<K: Field>(
    param: &Parameterization<K>,
) -> Result<ImplicitResult<K>, ImplicitError> {
    let ring = param.ring();
    if ring.num_blocks() != 1 || ring.num_vars() != 2 || param.target_dim() != 3 {
        return Err(ImplicitError::NotPlaneCurve);
    }
    let d = param.degree().total();
    // M_{d-1} sits below the certified corank region; implicitization only
    // needs the determinant identity, so force the build
    let m = matrixrep::build_rep(
        param,
        &MultiDeg::scalar(d - 1),
        1,
        &ThresholdOverrides::default(),
        true,
    )?;
    if m.n_rows() != m.n_cols() {
        return Err(ImplicitError::ZeroDeterminant);
    }
    let pm = PolyMatrix::new(
        m.t_ring.clone(),
        m.n_rows(),
        m.n_cols(),
        m.grid().into_iter().flatten().collect(),
    );
    let det = pm.determinant();
    if det.is_zero() {
        return Err(ImplicitError::ZeroDeterminant);
    }
    let (equation, power) = extract_perfect_power(&det)?;
    let result = ImplicitResult {
        equation,
        power,
        method: format!("determinant of M_{}", d - 1),
        caveats: Vec::new(),
    };
    if !result.identity_holds(param) {
        return Err(ImplicitError::IdentityCheckFailed);
    }
    if result.power as i64 * result.equation.total_degree() != d {
        return Err(ImplicitError::PowerExtraction(format!(
            "e*deg F = {} does not match d = {d}",
            result.power as i64 * result.equation.total_degree()
        )));
    }
    Ok(result)
}

/// Degree of a curve parameterization onto its image: the determinant power
/// for plane curves, the generic-fiber corank for higher targets.
pub fn degree_of_map_curve<K: Field>(param: &Parameterization<K>) -> Result<u32, ImplicitError> {
    if param.target_dim() == 3 {
        return Ok(plane_curve_implicit(param)?.power);
    }
    let mu = syzygy::mu_basis(param)?;
    let cert = matrixrep::threshold_curve(&mu);
    let nu = cert.region.corners[0].clone();
    let m = matrixrep::build_rep_with_certificate(param, &nu, 1, cert, false)?;
    let f = param.field().clone();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xDE6);
    let mut samples = Vec::new();
    let mut tries = 0;
    while samples.len() < 5 && tries < 60 {
        tries += 1;
        let x = [
            f.from_i64(rng.gen_range(-20..=20)),
            f.from_i64(rng.gen_range(-20..=20)),
        ];
        let fx = param.evaluate(&x);
        if fx.iter().all(|v| f.is_zero(v)) {
            continue;
        }
        samples.push(m.specialize(&fx).corank());
    }
    if samples.is_empty() {
        return Err(ImplicitError::InconsistentSamples(samples));
    }
    if samples.windows(2).any(|w| w[0] != w[1]) {
        return Err(ImplicitError::InconsistentSamples(samples));
    }
    Ok(samples[0] as u32)
}

/// GCD of the maximal minors of a matrix representation, power-extracted to
/// `(H, delta)`. Column subsets are sampled until the GCD stabilizes twice;
/// the final `H(f) = 0` identity is the hard certificate.
pub fn hypersurface_implicit_gcd<K: Field>(
    m: &MatrixRep<K>,
) -> Result<ImplicitResult<K>, ImplicitError> {
    let t_ring = m.t_ring.clone();
    // prune zero columns
    let live_cols: Vec<usize> = (0..m.n_cols())
        .filter(|&j| (0..m.n_rows()).any(|i| !m.entry(i, j).is_zero()))
        .collect();
    let rows = m.n_rows();
    if rows > live_cols.len() {
        return Err(ImplicitError::RowsExceedColumns);
    }
    let entries: Vec<Poly<K>> = (0..rows)
        .flat_map(|i| live_cols.iter().map(move |&j| m.entry(i, j).clone()))
        .collect();
    let pm = PolyMatrix::new(t_ring.clone(), rows, live_cols.len(), entries);

    let all_subsets = subsets(live_cols.len(), rows);
    let mut order: Vec<usize> = (0..all_subsets.len()).collect();
    if all_subsets.len() > 40 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x91CD);
        for i in (1..order.len()).rev() {
            let j = rng.gen_range(0..=i);
            order.swap(i, j);
        }
        order.truncate(40);
    }
    let mut g: Option<Poly<K>> = None;
    let mut stable = 0;
    let mut used = 0;
    for &si in &order {
        let minor = pm.minor(&(0..rows).collect::<Vec<_>>(), &all_subsets[si]);
        if minor.is_zero() {
            continue;
        }
        used += 1;
        let next = match &g {
            None => minor.monic(),
            Some(prev) => gcd(prev, &minor),
        };
        if Some(&next) == g.as_ref() {
            stable += 1;
            if stable >= 2 && used >= 3 {
                break;
            }
        } else {
            stable = 0;
        }
        g = Some(next);
    }
    let g = g.ok_or(ImplicitError::DegenerateMinors)?;
    if g.total_degree() == 0 {
        return Err(ImplicitError::DegenerateMinors);
    }
    let (equation, power) = extract_perfect_power(&g)?;
    let mut caveats = Vec::new();
    let param = &m.param;
    let ring = param.ring();
    if ring.num_blocks() == 1 && ring.num_vars() == 3 && param.target_dim() == 4 {
        if let Ok((fj, _)) = fiberlab::jacobian_minor_gcd(param) {
            if fj.total_degree() > 0 {
                caveats.push(format!(
                    "contracted curves detected (Jacobian minor gcd has degree {}); \
                     extraneous linear factors from their images may divide the result",
                    fj.total_degree()
                ));
            }
        }
    }
    let result = ImplicitResult {
        equation,
        power,
        method: "gcd of maximal minors".into(),
        caveats,
    };
    if !result.identity_holds(param) {
        return Err(ImplicitError::IdentityCheckFailed);
    }
    Ok(result)
}

/// Specialization at `p` of the first nonzero syzygy: the hyperplane
/// containing the linear fiber at a non-lci point. Used to cross-check
/// candidate extraneous factors.
pub fn syzygy_hyperplane_at<K: Field>(
    param: &Parameterization<K>,
    p: &[K::Elem],
) -> Option<Poly<K>> {
    let f = param.field().clone();
    let indeg = fiberlab::syzygy_initial_degree(param)?;
    let t_ring = param.target_ring();
    for nu in indeg..=(indeg + 2) {
        let piece = syzygy::syzygies_in_degree(param, &MultiDeg::scalar(nu));
        for tuple in &piece.basis {
            let mut lin = Poly::zero(t_ring.clone());
            for (i, a) in tuple.iter().enumerate() {
                let c = a.evaluate(p);
                if !f.is_zero(&c) {
                    lin = &lin + &Poly::var(t_ring.clone(), i).scale(&c);
                }
            }
            if !lin.is_zero() {
                return Some(lin.monic());
            }
        }
    }
    None
}

/// The regularity bound for rational curves, with the second inequality
/// checked at the level of the computed bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityBound {
    pub bound: i64,
    pub all_mu_positive: bool,
    /// `bound - 1 <= d - (r-2)`, asserted when every `mu_i >= 1`.
    pub second_inequality_ok: Option<bool>,
    /// Whether the map was verified birational onto its image; the bound is
    /// flagged not-applicable otherwise.
    pub applicable: bool,
}

pub fn regularity_bound_curve<K: Field>(
    param: &Parameterization<K>,
) -> Result<RegularityBound, ImplicitError> {
    let mu = syzygy::mu_basis(param)?;
    let degs = &mu.degrees;
    let bound = if degs.len() >= 2 {
        let mut s = degs.clone();
        s.sort_unstable();
        s[s.len() - 1] + s[s.len() - 2]
    } else {
        2 * degs[0]
    };
    let d = param.degree().total();
    let r = param.target_dim() as i64;
    let all_mu_positive = degs.iter().all(|&m| m >= 1);
    let second_inequality_ok = all_mu_positive.then(|| bound - 1 <= d - (r - 2));
    let applicable = matches!(degree_of_map_curve(param), Ok(1));
    Ok(RegularityBound {
        bound,
        all_mu_positive,
        second_inequality_ok,
        applicable,
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

    #[test]
    fn circle_implicit() {
        let circle = curve_param(&["x^2 - y^2", "2*x*y", "x^2 + y^2"]);
        let res = plane_curve_implicit(&circle).unwrap();
        assert_eq!(res.power, 1);
        assert!(res.identity_holds(&circle));
        let t = res.equation.ring().clone();
        let expect = parse_polynomial("T1^2 + T2^2 - T3^2", &t).unwrap().monic();
        assert_eq!(res.equation, expect);
    }

    #[test]
    fn double_conic_extracts_square() {
        let dc = curve_param(&["x^4", "x^2*y^2", "y^4"]);
        let res = plane_curve_implicit(&dc).unwrap();
        assert_eq!(res.power, 2);
        let t = res.equation.ring().clone();
        let expect = parse_polynomial("T1*T3 - T2^2", &t).unwrap().monic();
        assert_eq!(res.equation, expect);
        assert_eq!(res.power as i64 * res.equation.total_degree(), 4);
    }

    #[test]
    fn linear_image() {
        let line = curve_param(&["x", "y", "x + y"]);
        let res = plane_curve_implicit(&line).unwrap();
        assert_eq!(res.power, 1);
        assert_eq!(res.equation.total_degree(), 1);
        assert!(res.identity_holds(&line));
    }

    #[test]
    fn map_degrees() {
        let circle = curve_param(&["x^2 - y^2", "2*x*y", "x^2 + y^2"]);
        assert_eq!(degree_of_map_curve(&circle).unwrap(), 1);
        let dc = curve_param(&["x^4", "x^2*y^2", "y^4"]);
        assert_eq!(degree_of_map_curve(&dc).unwrap(), 2);
        let tc = curve_param(&["x^3", "x^2*y", "x*y^2", "y^3"]);
        assert_eq!(degree_of_map_curve(&tc).unwrap(), 1, "isomorphism");
    }

    #[test]
    fn sphere_minor_gcd() {
        let r = RingSpec::projective(&["x1", "x2", "x3"], Rationals).unwrap();
        let sphere = Parameterization::new(
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
        .unwrap();
        let overrides = ThresholdOverrides {
            indeg_sat: Some(1),
            ..Default::default()
        };
        let m = matrixrep::build_rep(&sphere, &MultiDeg::scalar(1), 1, &overrides, false).unwrap();
        let res = hypersurface_implicit_gcd(&m).unwrap();
        assert_eq!(res.power, 1);
        let t = res.equation.ring().clone();
        let expect = parse_polynomial("T1^2 - T2^2 - T3^2 - T4^2", &t)
            .unwrap()
            .monic();
        assert_eq!(res.equation, expect);
        assert!(res.identity_holds(&sphere));
    }

    #[test]
    fn degenerate_image_shares_plane() {
        // f4 = f1 + f2 confines the image to a hyperplane
        let r = RingSpec::projective(&["x", "y", "z"], Rationals).unwrap();
        let p = Parameterization::new(
            ["x^2", "y^2", "z^2", "x^2 + y^2"]
                .iter()
                .map(|m| parse_polynomial(m, &r).unwrap())
                .collect(),
        )
        .unwrap();
        let m = matrixrep::build_rep(&p, &MultiDeg::scalar(2), 1, &Default::default(), true)
            .unwrap();
        let res = hypersurface_implicit_gcd(&m).unwrap();
        let t = res.equation.ring().clone();
        let plane = parse_polynomial("T1 + T2 - T4", &t).unwrap().monic();
        assert!(
            plane.divides(&res.equation) || res.equation == plane,
            "the plane factor shows up in the gcd: {}",
            res.equation
        );
        assert!(res.identity_holds(&p));
    }

    #[test]
    fn random_morphism_identity_f101() {
        use rand::{Rng, SeedableRng};
        let fp = PrimeField::new(101).unwrap();
        let ring = RingSpec::projective(&["x", "y", "z"], fp).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..2 {
            let maps: Vec<_> = (0..4)
                .map(|_| {
                    Poly::from_terms(
                        ring.clone(),
                        ring.graded_basis(&MultiDeg::scalar(2))
                            .into_iter()
                            .map(|e| (e, rng.gen_range(0..101))),
                    )
                })
                .collect();
            let Ok(param) = Parameterization::new(maps) else {
                continue;
            };
            if fiberlab::dim_base_locus(&param) != Ok(fiberlab::BaseLocusDim::Empty) {
                continue;
            }
            let m = matrixrep::build_rep(
                &param,
                &MultiDeg::scalar(2),
                1,
                &ThresholdOverrides {
                    assume_base_point_free: true,
                    ..Default::default()
                },
                false,
            )
            .unwrap();
            let res = hypersurface_implicit_gcd(&m).unwrap();
            assert!(res.identity_holds(&param));
        }
    }

    #[test]
    fn regularity_bounds() {
        let tc = curve_param(&["x^3", "x^2*y", "x*y^2", "y^3"]);
        let b = regularity_bound_curve(&tc).unwrap();
        assert_eq!(b.bound, 2);
        assert!(b.applicable);
        assert_eq!(b.second_inequality_ok, Some(true), "1 <= 3 - 1");

        // mu = (1,4) plane quintic: bound 5
        let quintic = curve_param(&["x^5", "x^4*y + x*y^4", "y^5"]);
        let mu = syzygy::mu_basis(&quintic).unwrap();
        if mu.degrees == vec![1, 4] {
            let b = regularity_bound_curve(&quintic).unwrap();
            assert_eq!(b.bound, 5);
        }
    }

    #[test]
    fn perfect_power_edge_cases() {
        let t = RingSpec::target(3, Rationals);
        let g = parse_polynomial("(T1 + T2)^3", &t).unwrap();
        let (f, e) = extract_perfect_power(&g).unwrap();
        assert_eq!(e, 3);
        assert_eq!(f, parse_polynomial("T1 + T2", &t).unwrap());
        let g = parse_polynomial("T1*T2 + T3^2", &t).unwrap();
        let (f, e) = extract_perfect_power(&g).unwrap();
        assert_eq!(e, 1);
        assert_eq!(f, g.monic());
    }
}
