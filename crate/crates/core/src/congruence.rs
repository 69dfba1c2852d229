//! Orthogonal projection onto a parameterized surface via the congruence
//! of its normal lines.
//!
//! Given a surface `sigma: X -> R^3` (first target coordinate the
//! homogenizing one), the family of lines `sigma + t * n`, with `n` the
//! cross product of the partials, is a rational map `Psi: X x P^1 -> P^3`.
//! The preimages of a query point under `Psi` are exactly its orthogonal
//! projections on the surface, so fiber degrees and fiber points of `Psi`
//! answer projection queries.

use thiserror::Error;

use crate::field::Field;
use crate::fiberlab::{self, BaseLocusDim, FiberError, KernelPoints};
use crate::matrixrep::{self, MatrixRepError, ThresholdOverrides};
use crate::polyring::{gcd_many, MultiDeg, Parameterization, Poly, PolyError};

#[derive(Debug, Error)]
pub enum CongruenceError {
    #[error("surface must be P^2 or P^1 x P^1 with four components, got {0}")]
    BadSurfaceShape(String),
    #[error("normal field vanishes identically: the parameterization is not a genuine surface")]
    DegenerateSurface,
    #[error("requested degree {0} is outside the certified region")]
    OutsideRegion(MultiDeg),
    #[error("degenerate query: the linear fiber is not finite (corank {lo} at {nu_lo} vs {hi} at {nu_hi})")]
    DegenerateQuery {
        lo: usize,
        nu_lo: MultiDeg,
        hi: usize,
        nu_hi: MultiDeg,
    },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    MatrixRep(#[from] MatrixRepError),
    #[error(transparent)]
    Fiber(#[from] FiberError),
}

/// Hypothesis backing the multigraded threshold certificate.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum HypothesisFlag {
    /// (a): the base locus is finite (verified by `dim_base_locus`).
    FiniteBaseLocus,
    /// (b): base curve present; no-section-in-negative-degree and local
    /// 3-generation are recorded as caller assertions, not verified.
    AssertedNegativeSections { justification: String },
    Unverified,
}

/// The congruence of normal lines of a parameterized surface.
#[derive(Debug, Clone)]
pub struct NormalCongruence<K: Field> {
    pub surface: Parameterization<K>,
    /// The map `Psi` on `X x P^1`.
    pub psi: Parameterization<K>,
    /// `t`-degree of the line family (1 for the `sigma + t n` construction).
    pub e: i64,
    pub base_locus: Option<BaseLocusDim>,
    pub hypothesis: HypothesisFlag,
}

fn surface_chart_vars<K: Field>(
    param: &Parameterization<K>,
) -> Result<Vec<usize>, CongruenceError> {
    let ring = param.ring();
    let sizes: Vec<usize> = (0..ring.num_blocks())
        .map(|b| ring.block_range(b).len())
        .collect();
    let ok = param.target_dim() == 4 && (sizes == [3] || sizes == [2, 2]);
    if !ok {
        return Err(CongruenceError::BadSurfaceShape(format!(
            "blocks {sizes:?}, {} components",
            param.target_dim()
        )));
    }
    Ok((0..ring.num_blocks())
        .map(|b| ring.block_range(b).start)
        .collect())
}

/// Build the congruence of normal lines. In the affine charts (first
/// variable of each source block and first target coordinate set to 1) the
/// normal direction `n` is the content-free cross product of the partials
/// of `sigma = g/h`; the line through `sigma` with direction `n` is spanned
/// by the surface point `(h : g)` and the point at infinity `(0 : n)`, so
/// `Psi = tbar (h : g) + t (0 : n)`, rehomogenized blockwise and stripped
/// of common content. Parameterizing by the two spanning points keeps the
/// source degree as low as the data allows.
pub fn build_normal_congruence<K: Field>(
    surface: &Parameterization<K>,
    classify_base_locus: bool,
) -> Result<NormalCongruence<K>, CongruenceError> {
    let chart = surface_chart_vars(surface)?;
    let ring = surface.ring();
    let f = ring.field().clone();
    let prod = ring.with_extra_block(&["t0_", "t1_"])?;
    let nx = ring.num_vars();

    // affine data in the product ring (chart variables substituted by 1)
    let dehom = |p: &Poly<K>| -> Poly<K> {
        let mut q = p.lift_to(&prod, 0);
        for &cv in &chart {
            q = q.substitute_one(cv);
        }
        q
    };
    let h = dehom(&surface.maps()[0]);
    let g: Vec<Poly<K>> = (1..4).map(|i| dehom(&surface.maps()[i])).collect();

    // the two affine directions: non-chart variables, one per dimension
    let affine_vars: Vec<usize> = (0..nx).filter(|v| !chart.contains(v)).collect();
    assert_eq!(affine_vars.len(), 2);
    let (va, vb) = (affine_vars[0], affine_vars[1]);
    let num_partial = |gi: &Poly<K>, v: usize| -> Poly<K> {
        // numerator of d(g/h): g_v h - g h_v
        &(&gi.partial(v) * &h) - &(gi * &h.partial(v))
    };
    let a: Vec<Poly<K>> = g.iter().map(|gi| num_partial(gi, va)).collect();
    let b: Vec<Poly<K>> = g.iter().map(|gi| num_partial(gi, vb)).collect();
    let cross = vec![
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ];
    if cross.iter().all(|c| c.is_zero()) {
        return Err(CongruenceError::DegenerateSurface);
    }
    let content = gcd_many(&cross);
    let n: Vec<Poly<K>> = cross
        .iter()
        .map(|c| c.exact_div(&content).expect("content divides"))
        .collect();

    // line family spanned by the surface point and the direction:
    // (h tbar : g_i tbar + n_i t)
    let tbar = Poly::var(prod.clone(), nx);
    let t = Poly::var(prod.clone(), nx + 1);
    let mut psi: Vec<Poly<K>> = Vec::with_capacity(4);
    psi.push(&h * &tbar);
    for i in 0..3 {
        psi.push(&(&g[i] * &tbar) + &(&n[i] * &t));
    }

    // rehomogenize every X block to the componentwise maximum degree
    let blocks_x = ring.num_blocks();
    for bidx in 0..blocks_x {
        let target = psi
            .iter()
            .map(|p| p.max_multideg().0[bidx])
            .max()
            .unwrap_or(0);
        for p in psi.iter_mut() {
            *p = p
                .homogenize_block(bidx, chart[bidx], target)
                .expect("homogenizing to the maximum degree");
        }
    }
    let psi = Parameterization::new(psi)?;
    let deg = psi.degree().clone();
    let e = *deg.0.last().unwrap();
    for m in psi.maps() {
        debug_assert!(m.homogeneous_multideg().is_some());
    }
    let _ = f;

    let base_locus = if classify_base_locus {
        fiberlab::dim_base_locus(&psi).ok()
    } else {
        None
    };
    let hypothesis = match &base_locus {
        Some(BaseLocusDim::Empty) | Some(BaseLocusDim::Dim0 { .. }) => {
            HypothesisFlag::FiniteBaseLocus
        }
        Some(BaseLocusDim::Dim1Plus) => HypothesisFlag::AssertedNegativeSections {
            justification: "base curve present; sections in negative degrees excluded by \
                            caller assertion (geometrically reduced base curve)"
                .into(),
        },
        None => HypothesisFlag::Unverified,
    };
    Ok(NormalCongruence {
        surface: surface.clone(),
        psi,
        e,
        base_locus,
        hypothesis,
    })
}

/// One orthogonal-projection foot.
#[derive(Debug, Clone)]
pub struct Foot<K: Field> {
    /// Source point on `X` (flat coordinates).
    pub source: Vec<K::Elem>,
    /// Affine coordinates of the foot on the surface.
    pub foot: Vec<K::Elem>,
    /// Parameter along the returned normal direction, when recoverable.
    pub parameter: Option<K::Elem>,
}

#[derive(Debug, Clone)]
pub struct ProjectionReport<K: Field> {
    pub query: Vec<K::Elem>,
    pub nu: MultiDeg,
    pub fiber_degree: usize,
    pub certified: bool,
    pub feet: Vec<Foot<K>>,
    pub approximate_feet: Vec<Vec<f64>>,
    pub diagnostics: Vec<String>,
}

/// Project an affine query point onto the surface: the fiber degree of the
/// congruence counts the critical feet, and the kernel of the specialized
/// matrix recovers them. Two region degrees are compared to detect
/// infinite linear fibers (e.g. the center of a sphere).
pub fn project_point<K: Field>(
    cong: &NormalCongruence<K>,
    query: &[K::Elem],
    nu: Option<MultiDeg>,
) -> Result<ProjectionReport<K>, CongruenceError> {
    assert_eq!(query.len(), 3, "affine query points have three coordinates");
    let f = cong.psi.field().clone();
    let mut p = vec![f.one()];
    p.extend(query.iter().cloned());

    let cert = matrixrep::choose_certificate(&cong.psi, &ThresholdOverrides::default())?;
    let nu1 = match nu {
        Some(v) => {
            if !cert.region.contains(&v) {
                return Err(CongruenceError::OutsideRegion(v));
            }
            v
        }
        None => MultiDeg(cert.region.corners[0].0.iter().map(|&c| c.max(0)).collect()),
    };
    let m1 = matrixrep::build_rep_with_certificate(&cong.psi, &nu1, 1, cert.clone(), false)?;
    let c1 = m1.specialize(&p).corank();

    // linear-fiber finiteness: the corank must be stable one step up
    let mut nu2 = nu1.clone();
    nu2.0[0] += 1;
    let m2 = matrixrep::build_rep_with_certificate(&cong.psi, &nu2, 1, cert, false)?;
    let c2 = m2.specialize(&p).corank();
    if c1 != c2 {
        return Err(CongruenceError::DegenerateQuery {
            lo: c1,
            nu_lo: nu1,
            hi: c2,
            nu_hi: nu2,
        });
    }

    let mut report = ProjectionReport {
        query: query.to_vec(),
        nu: nu1,
        fiber_degree: c1,
        certified: m1.valid,
        feet: Vec::new(),
        approximate_feet: Vec::new(),
        diagnostics: Vec::new(),
    };
    if c1 == 0 {
        report
            .diagnostics
            .push("query is not reached by any normal line".into());
        return Ok(report);
    }

    // direction field: B_i = d Psi_i / dt, free of the t block
    let prod = cong.psi.ring().clone();
    let t_var = prod.num_vars() - 1;
    let dirs: Vec<Poly<K>> = cong.psi.maps().iter().map(|m| m.partial(t_var)).collect();

    match fiberlab::fiber_points_from_kernel(&m1, &p)? {
        KernelPoints::Exact(points) => {
            for pt in points {
                // X coordinates (the t block is invisible at nu_t = 0)
                let n_x = cong.surface.ring().num_vars();
                let mut x = Vec::with_capacity(n_x);
                let mut complete = true;
                for (bi, blk) in pt.blocks.iter().enumerate() {
                    if bi >= cong.surface.ring().num_blocks() {
                        break;
                    }
                    match blk {
                        Some(c) => x.extend(c.iter().cloned()),
                        None => complete = false,
                    }
                }
                if !complete || x.len() != n_x {
                    report
                        .diagnostics
                        .push("kernel point does not determine all source blocks".into());
                    continue;
                }
                let fx = cong.surface.evaluate(&x);
                if f.is_zero(&fx[0]) {
                    report
                        .diagnostics
                        .push("foot at infinity discarded (first chart coordinate vanishes)".into());
                    continue;
                }
                let foot: Vec<K::Elem> = (1..4)
                    .map(|i| f.div(&fx[i], &fx[0]).expect("chart coordinate nonzero"))
                    .collect();
                // normality: query - foot is parallel to the line direction
                let mut xt = x.clone();
                xt.push(f.one());
                xt.push(f.one());
                let dir: Vec<K::Elem> = dirs[1..].iter().map(|d| d.evaluate(&xt)).collect();
                let diff: Vec<K::Elem> = query
                    .iter()
                    .zip(&foot)
                    .map(|(a, b)| f.sub(a, b))
                    .collect();
                let colinear = crate::exactlinalg::DenseMatrix::from_rows(
                    f.clone(),
                    vec![diff.clone(), dir.clone()],
                )
                .rank()
                    <= 1;
                if !colinear {
                    report.diagnostics.push(format!(
                        "candidate foot failed the normality check and was discarded \
                         (source {:?})",
                        x.iter().map(|c| f.elem_to_string(c)).collect::<Vec<_>>()
                    ));
                    continue;
                }
                let parameter = dir
                    .iter()
                    .position(|d| !f.is_zero(d))
                    .map(|j| f.div(&diff[j], &dir[j]).expect("nonzero direction"));
                report.feet.push(Foot {
                    source: x,
                    foot,
                    parameter,
                });
            }
        }
        KernelPoints::Approximate(pts) => {
            for x in pts {
                let n_x = cong.surface.ring().num_vars();
                if x.len() < n_x {
                    continue;
                }
                let fx: Vec<f64> = cong
                    .surface
                    .maps()
                    .iter()
                    .map(|m| fiberlab::approx::eval_f64(m, &x[..n_x]))
                    .collect();
                if fx[0].abs() < 1e-12 {
                    continue;
                }
                report
                    .approximate_feet
                    .push((1..4).map(|i| fx[i] / fx[0]).collect());
            }
            report
                .diagnostics
                .push("eigenvalues left the field; feet are numeric approximations".into());
        }
        KernelPoints::DegreesOnly { diagnostic, .. } => {
            report.diagnostics.push(diagnostic);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::polyring::{parse_polynomial, RingSpec};

    fn q(n: i64) -> num::BigRational {
        Rationals.from_i64(n)
    }

    fn plane() -> Parameterization<Rationals> {
        let r = RingSpec::projective(&["x1", "x2", "x3"], Rationals).unwrap();
        Parameterization::new(
            ["x1", "x2", "x3", "0"]
                .iter()
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

    #[test]
    fn plane_congruence_and_feet() {
        let cong = build_normal_congruence(&plane(), false).unwrap();
        assert_eq!(cong.e, 1);
        for m in cong.psi.maps() {
            assert_eq!(
                m.homogeneous_multideg().as_ref(),
                Some(cong.psi.degree()),
                "components are multihomogeneous"
            );
        }
        let rep = project_point(&cong, &[q(3), q(-2), q(7)], None).unwrap();
        assert_eq!(rep.fiber_degree, 1);
        assert!(rep.certified);
        assert_eq!(rep.feet.len(), 1);
        assert_eq!(rep.feet[0].foot, vec![q(3), q(-2), q(0)]);
    }

    #[test]
    fn bilinear_patch_congruence() {
        let r = RingSpec::new(
            vec![
                vec!["u0".into(), "u1".into()],
                vec!["v0".into(), "v1".into()],
            ],
            Rationals,
        )
        .unwrap();
        // affine surface (uv, u, v)
        let maps = ["u0*v0", "u1*v1", "u1*v0", "u0*v1"]
            .iter()
            .map(|m| parse_polynomial(m, &r).unwrap())
            .collect();
        let surf = Parameterization::new(maps).unwrap();
        let cong = build_normal_congruence(&surf, false).unwrap();
        assert_eq!(cong.e, 1);
        assert_eq!(cong.psi.ring().num_blocks(), 3);
        for m in cong.psi.maps() {
            assert_eq!(m.homogeneous_multideg().as_ref(), Some(cong.psi.degree()));
        }
    }

    #[test]
    fn sphere_projection_two_feet() {
        let cong = build_normal_congruence(&sphere(), false).unwrap();
        assert_eq!(cong.e, 1);
        let rep = project_point(&cong, &[q(2), q(0), q(0)], None).unwrap();
        assert_eq!(rep.fiber_degree, 2, "two antipodal feet");
        assert!(rep.certified);
        let mut feet: Vec<Vec<num::BigRational>> =
            rep.feet.iter().map(|f| f.foot.clone()).collect();
        feet.sort_by_key(|f| Rationals.elem_to_string(&f[0]));
        assert_eq!(
            feet,
            vec![
                vec![q(-1), q(0), q(0)],
                vec![q(1), q(0), q(0)],
            ]
        );
    }

    #[test]
    fn sphere_center_is_degenerate() {
        let cong = build_normal_congruence(&sphere(), false).unwrap();
        match project_point(&cong, &[q(0), q(0), q(0)], None) {
            Err(CongruenceError::DegenerateQuery { .. }) => {}
            other => panic!("expected a degenerate-query error, got {other:?}"),
        }
    }
}
