//! Independent brute-force references used by tests and the acceptance
//! suite: direct fiber solving on P^1, exhaustive finite-field enumeration,
//! identity-based implicitization checks and reproducible random instances.
//!
//! Nothing here goes through the elimination matrices; agreement between
//! these oracles and the matrix route is what the acceptance suite checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactlinalg::DenseMatrix;
use crate::field::Field;
use crate::polyring::{gcd_many, MultiDeg, Parameterization, Poly, PolyError, RingSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("source must be P^1 for the exact curve-fiber oracle")]
    NotCurveSource,
    #[error("field is not enumerable at desk scale")]
    NotEnumerable,
    #[error("{0} source points exceed the enumeration cap")]
    TooManyPoints(usize),
    #[error("the fiber form vanished identically; input map is corrupt")]
    CorruptInput,
    #[error("could not draw a nondegenerate instance after {0} retries")]
    DegenerateDraws(u32),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Exact scheme degree of the fiber of a curve parameterization:
/// `deg gcd_{i<j}(p_i f_j - p_j f_i)`.
pub fn fiber_degree_exact_p1<K: Field>(
    param: &Parameterization<K>,
    p: &[K::Elem],
) -> Result<i64, OracleError> {
    let ring = param.ring();
    if ring.num_blocks() != 1 || ring.num_vars() != 2 {
        return Err(OracleError::NotCurveSource);
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
        return Err(OracleError::CorruptInput);
    }
    Ok(h.total_degree())
}

/// All points of `P^{k-1}(F_q)` for a block of `k` variables, normalized so
/// the first nonzero coordinate is 1.
fn projective_points<K: Field>(field: &K, k: usize) -> Option<Vec<Vec<K::Elem>>> {
    let elems = field.enumerate_all()?;
    let mut out = Vec::new();
    for lead in 0..k {
        let free = k - lead - 1;
        let mut tails: Vec<Vec<K::Elem>> = vec![Vec::new()];
        for _ in 0..free {
            let mut next = Vec::with_capacity(tails.len() * elems.len());
            for t in &tails {
                for e in &elems {
                    let mut t2 = t.clone();
                    t2.push(e.clone());
                    next.push(t2);
                }
            }
            tails = next;
        }
        for t in tails {
            let mut pt = vec![field.zero(); lead];
            pt.push(field.one());
            pt.extend(t);
            out.push(pt);
        }
    }
    Some(out)
}

/// All source points over the (small) base field.
pub fn source_points<K: Field>(
    param: &Parameterization<K>,
) -> Result<Vec<Vec<K::Elem>>, OracleError> {
    let ring = param.ring();
    let field = ring.field();
    let mut blocks: Vec<Vec<Vec<K::Elem>>> = Vec::new();
    let mut count = 1usize;
    for b in 0..ring.num_blocks() {
        let k = ring.block_range(b).len();
        let pts = projective_points(field, k).ok_or(OracleError::NotEnumerable)?;
        count = count.saturating_mul(pts.len());
        if count > 70_000 {
            return Err(OracleError::TooManyPoints(count));
        }
        blocks.push(pts);
    }
    let mut out: Vec<Vec<K::Elem>> = vec![Vec::new()];
    for pts in blocks {
        let mut next = Vec::with_capacity(out.len() * pts.len());
        for base in &out {
            for p in &pts {
                let mut b2 = base.clone();
                b2.extend(p.clone());
                next.push(b2);
            }
        }
        out = next;
    }
    Ok(out)
}

/// Exhaustive fiber enumeration over a small finite field: the source
/// points `x` with `f(x)` a nonzero multiple of `p`.
pub fn enumerate_fiber_fq<K: Field>(
    param: &Parameterization<K>,
    p: &[K::Elem],
) -> Result<Vec<Vec<K::Elem>>, OracleError> {
    let field = param.field().clone();
    let mut out = Vec::new();
    for x in source_points(param)? {
        let fx = param.evaluate(&x);
        if fx.iter().all(|v| field.is_zero(v)) {
            continue;
        }
        let m = DenseMatrix::from_rows(field.clone(), vec![fx, p.to_vec()]);
        if m.rank() <= 1 {
            out.push(x);
        }
    }
    Ok(out)
}

/// Whether the fiber of `p` is reduced at the source point `x`: the
/// Jacobian of the proportionality equations `p_i f_j - p_j f_i`, in the
/// affine chart of `x` (one pivot variable dropped per block), has rank
/// equal to the source dimension.
pub fn fiber_point_is_reduced<K: Field>(
    param: &Parameterization<K>,
    p: &[K::Elem],
    x: &[K::Elem],
) -> bool {
    let ring = param.ring();
    let field = ring.field().clone();
    let mut equations: Vec<Poly<K>> = Vec::new();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let a = param.maps()[j].scale(&p[i]);
            let b = param.maps()[i].scale(&p[j]);
            equations.push(&a - &b);
        }
    }
    let mut chart_vars = Vec::new();
    for b in 0..ring.num_blocks() {
        let range = ring.block_range(b);
        let Some(pivot) = range.clone().find(|&v| !field.is_zero(&x[v])) else {
            return false;
        };
        chart_vars.extend(range.filter(|&v| v != pivot));
    }
    let dim_x = chart_vars.len();
    let rows: Vec<Vec<K::Elem>> = equations
        .iter()
        .map(|eq| {
            chart_vars
                .iter()
                .map(|&v| eq.partial(v).evaluate(x))
                .collect()
        })
        .collect();
    if rows.is_empty() {
        return false;
    }
    DenseMatrix::from_rows(field, rows).rank() == dim_x
}

/// `true` iff `F(f_1, .., f_r)` expands to zero.
pub fn implicit_identity_check<K: Field>(param: &Parameterization<K>, f_impl: &Poly<K>) -> bool {
    f_impl.compose(param.ring(), param.maps()).is_zero()
}

/// What to draw.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceKind {
    /// `P^1 -> P^{r-1}` of degree `d`.
    Curve { r: usize, d: i64 },
    /// `P^2 -> P^3` of degree `d`.
    SurfaceMap { d: i64 },
    /// `P^2 -> P^3` with a planted contracted line: three of the four
    /// components share the factor `x`.
    PlantedContractedLine { d: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceSpec {
    pub kind: InstanceKind,
    pub seed: u64,
}

fn random_form<K: Field>(
    ring: &std::sync::Arc<RingSpec<K>>,
    d: i64,
    rng: &mut ChaCha8Rng,
) -> Poly<K> {
    let f = ring.field().clone();
    Poly::from_terms(
        ring.clone(),
        ring.graded_basis(&MultiDeg::scalar(d))
            .into_iter()
            .map(|e| (e, f.from_i64(rng.gen_range(-9..=9)))),
    )
}

fn components_independent<K: Field>(param: &Parameterization<K>) -> bool {
    let ring = param.ring();
    let basis = ring.graded_basis(param.degree());
    let rows: Vec<Vec<K::Elem>> = param
        .maps()
        .iter()
        .map(|m| crate::exactlinalg::coeff_vector(m, &basis))
        .collect();
    let r = rows.len();
    DenseMatrix::from_rows(ring.field().clone(), rows).rank() == r
}

/// Reproducible random instance; degenerate draws are retried with an
/// incremented subseed and the retry count is reported.
pub fn random_instance<K: Field>(
    field: K,
    spec: &InstanceSpec,
) -> Result<(Parameterization<K>, u32), OracleError> {
    for retry in 0..64u32 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(retry as u64 * 0x9E37));
        let candidate: Result<Parameterization<K>, PolyError> = match spec.kind {
            InstanceKind::Curve { r, d } => {
                let ring = RingSpec::projective(&["x", "y"], field.clone())?;
                Parameterization::new((0..r).map(|_| random_form(&ring, d, &mut rng)).collect())
            }
            InstanceKind::SurfaceMap { d } => {
                let ring = RingSpec::projective(&["x", "y", "z"], field.clone())?;
                Parameterization::new((0..4).map(|_| random_form(&ring, d, &mut rng)).collect())
            }
            InstanceKind::PlantedContractedLine { d } => {
                let ring = RingSpec::projective(&["x", "y", "z"], field.clone())?;
                let x = Poly::var(ring.clone(), 0);
                let mut maps: Vec<Poly<K>> = (0..3)
                    .map(|_| &x * &random_form(&ring, d - 1, &mut rng))
                    .collect();
                maps.push(random_form(&ring, d, &mut rng));
                Parameterization::new(maps)
            }
        };
        let Ok(param) = candidate else {
            continue;
        };
        // a removed common factor would silently change the degree
        if param.removed_content().is_some() {
            continue;
        }
        if !components_independent(&param) {
            continue;
        }
        if let InstanceKind::PlantedContractedLine { .. } = spec.kind {
            let x = Poly::var(param.ring().clone(), 0);
            if x.divides(&param.maps()[3]) {
                continue;
            }
        }
        return Ok((param, retry));
    }
    Err(OracleError::DegenerateDraws(64))
}

/// Draw until the base locus is verifiably empty (a morphism).
pub fn random_base_point_free_surface_map<K: Field>(
    field: K,
    d: i64,
    seed: u64,
) -> Result<(Parameterization<K>, u32), OracleError> {
    for retry in 0..64u32 {
        let spec = InstanceSpec {
            kind: InstanceKind::SurfaceMap { d },
            seed: seed.wrapping_add(retry as u64 * 0x51DE),
        };
        let (param, _) = random_instance(field.clone(), &spec)?;
        if crate::fiberlab::dim_base_locus(&param) == Ok(crate::fiberlab::BaseLocusDim::Empty) {
            return Ok((param, retry));
        }
    }
    Err(OracleError::DegenerateDraws(64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::polyring::parse_polynomial;

    fn q(n: i64) -> num::BigRational {
        Rationals.from_i64(n)
    }

    fn circle() -> Parameterization<Rationals> {
        let r = RingSpec::projective(&["x", "y"], Rationals).unwrap();
        Parameterization::new(
            ["x^2 - y^2", "2*x*y", "x^2 + y^2"]
                .iter()
                .map(|m| parse_polynomial(m, &r).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn exact_p1_degrees() {
        let c = circle();
        assert_eq!(fiber_degree_exact_p1(&c, &[q(1), q(0), q(1)]).unwrap(), 1);
        assert_eq!(fiber_degree_exact_p1(&c, &[q(1), q(1), q(1)]).unwrap(), 0);
        let r = RingSpec::projective(&["x", "y"], Rationals).unwrap();
        let dc = Parameterization::new(
            ["x^4", "x^2*y^2", "y^4"]
                .iter()
                .map(|m| parse_polynomial(m, &r).unwrap())
                .collect(),
        )
        .unwrap();
        // generic image point psi(2:1) = (16:4:1)
        assert_eq!(fiber_degree_exact_p1(&dc, &[q(16), q(4), q(1)]).unwrap(), 2);
    }

    #[test]
    fn twisted_cubic_enumeration_f7() {
        let f = PrimeField::new(7).unwrap();
        let r = RingSpec::projective(&["x", "y"], f).unwrap();
        let tc = Parameterization::new(
            ["x^3", "x^2*y", "x*y^2", "y^3"]
                .iter()
                .map(|m| parse_polynomial(m, &r).unwrap())
                .collect(),
        )
        .unwrap();
        let x0 = vec![f.from_i64(2), f.from_i64(1)];
        let p = tc.evaluate(&x0);
        let fiber = enumerate_fiber_fq(&tc, &p).unwrap();
        assert_eq!(fiber.len(), 1);
        // representative is normalized with leading coordinate 1
        assert_eq!(fiber[0], vec![1, 4], "(2:1) = (1:4) mod 7");
        assert!(fiber_point_is_reduced(&tc, &p, &fiber[0]));
        let off = enumerate_fiber_fq(&tc, &[1, 0, 0, 1]).unwrap();
        assert!(off.is_empty());
    }

    #[test]
    fn sphere_enumeration_f101() {
        let f = PrimeField::new(101).unwrap();
        let r = RingSpec::projective(&["x1", "x2", "x3"], f).unwrap();
        let sph = Parameterization::new(
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
        // a point off the contracted line x1 = 0
        let x0 = vec![1, 5, 9];
        let p = sph.evaluate(&x0);
        let fiber = enumerate_fiber_fq(&sph, &p).unwrap();
        assert_eq!(fiber, vec![x0.clone()]);
        assert!(fiber_point_is_reduced(&sph, &p, &x0));
    }

    #[test]
    fn identity_checks() {
        let c = circle();
        let t = c.target_ring();
        let good = parse_polynomial("T1^2 + T2^2 - T3^2", &t).unwrap();
        let bad = parse_polynomial("T1^2 + T2^2 + T3^2", &t).unwrap();
        assert!(implicit_identity_check(&c, &good));
        assert!(!implicit_identity_check(&c, &bad));
    }

    #[test]
    fn seeded_instances_are_reproducible() {
        let spec = InstanceSpec {
            kind: InstanceKind::Curve { r: 3, d: 4 },
            seed: 1,
        };
        let (a, _) = random_instance(Rationals, &spec).unwrap();
        let (b, _) = random_instance(Rationals, &spec).unwrap();
        assert_eq!(a, b, "same seed, same instance");
        let mu = crate::syzygy::mu_basis(&a).unwrap();
        assert_eq!(mu.degrees.iter().sum::<i64>(), 4);
    }

    #[test]
    fn planted_line_instance() {
        let spec = InstanceSpec {
            kind: InstanceKind::PlantedContractedLine { d: 3 },
            seed: 5,
        };
        let (p, _) = random_instance(Rationals, &spec).unwrap();
        let (fj, _) = crate::fiberlab::jacobian_minor_gcd(&p).unwrap();
        let x = Poly::var(p.ring().clone(), 0);
        assert!(x.divides(&fj), "plant shows up in the jacobian gcd");
    }
}
