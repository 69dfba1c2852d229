//! The acceptance suite: every check the crate promises, runnable both as
//! an integration test and from the command line (`selftest`).
//!
//! Each criterion reports pass/fail with details; checks are exact (no
//! tolerances) and all randomness is seeded.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::congruence;
use crate::field::{Field, PrimeField, Rationals};
use crate::fiberlab::{self, BaseLocusDim};
use crate::implicitize;
use crate::matrixrep::{
    self, grid_equal_up_to_perm_sign, threshold_multigraded, MultigradedSource,
    ThresholdOverrides,
};
use crate::oracle::{self, InstanceKind, InstanceSpec};
use crate::polyring::{parse_polynomial, MultiDeg, Parameterization, Poly, RingSpec};
use crate::syzygy;

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
    pub millis: u128,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:2} [{}] {} ({} ms){}",
            self.index,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.millis,
            if self.details.is_empty() {
                String::new()
            } else {
                format!(" - {}", self.details)
            }
        )
    }
}

struct Checker {
    failures: Vec<String>,
}

impl Checker {
    fn new() -> Self {
        Checker {
            failures: Vec::new(),
        }
    }

    fn check(&mut self, cond: bool, msg: impl Into<String>) {
        if !cond {
            self.failures.push(msg.into());
        }
    }

    fn finish(self, index: usize, name: &'static str, start: Instant) -> CriterionResult {
        CriterionResult {
            index,
            name,
            passed: self.failures.is_empty(),
            details: self.failures.join("; "),
            millis: start.elapsed().as_millis(),
        }
    }
}

fn curve<K: Field>(field: K, maps: &[&str]) -> Parameterization<K> {
    let r = RingSpec::projective(&["x", "y"], field).expect("P1 ring");
    Parameterization::new(
        maps.iter()
            .map(|m| parse_polynomial(m, &r).expect("map parses"))
            .collect(),
    )
    .expect("valid parameterization")
}

fn sphere<K: Field>(field: K) -> Parameterization<K> {
    let r = RingSpec::projective(&["x1", "x2", "x3"], field).expect("P2 ring");
    Parameterization::new(
        [
            "x1^2 + x2^2 + x3^2",
            "2*x1*x3",
            "2*x1*x2",
            "x1^2 - x2^2 - x3^2",
        ]
        .iter()
        .map(|m| parse_polynomial(m, &r).expect("map parses"))
        .collect(),
    )
    .expect("valid parameterization")
}

fn random_point<K: Field>(field: &K, n: usize, rng: &mut ChaCha8Rng) -> Vec<K::Elem> {
    loop {
        let p: Vec<K::Elem> = (0..n).map(|_| field.from_i64(rng.gen_range(-9..=9))).collect();
        if p.iter().any(|c| !field.is_zero(c)) {
            return p;
        }
    }
}

/// Criterion 1: the twisted cubic reproduces the worked example.
pub fn criterion_1() -> CriterionResult {
    let start = Instant::now();
    let mut c = Checker::new();
    let tc = curve(Rationals, &["x^3", "x^2*y", "x*y^2", "y^3"]);
    match syzygy::mu_basis(&tc) {
        Ok(mu) => c.check(mu.degrees == vec![1, 1, 1], format!("mu = {:?}", mu.degrees)),
        Err(e) => c.check(false, format!("mu-basis failed: {e}")),
    }
    let m = matrixrep::build_rep(&tc, &MultiDeg::scalar(1), 1, &Default::default(), true)
        .expect("M_1 builds");
    let t = &m.t_ring;
    let parse = |s: &str| parse_polynomial(s, t).unwrap();
    let printed = vec![
        vec![parse("-T2"), parse("-T3"), parse("-T4")],
        vec![parse("T1"), parse("T2"), parse("T3")],
    ];
    c.check(
        grid_equal_up_to_perm_sign(&m.grid(), &printed),
        "M_1 does not match the printed matrix",
    );

    let q = Rationals;
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for k in 0..500 {
        let p = random_point(&q, 4, &mut rng);
        let corank = m.specialize(&p).corank();
        c.check(corank <= 1, format!("rational point {k}: corank {corank} > 1"));
        if corank > 1 {
            break;
        }
    }
    let fp = PrimeField::new(101).unwrap();
    let tcp = curve(fp, &["x^3", "x^2*y", "x*y^2", "y^3"]);
    let mp = matrixrep::build_rep(&tcp, &MultiDeg::scalar(1), 1, &Default::default(), true)
        .expect("M_1 over F101 builds");
    for k in 0..500 {
        let p = random_point(&fp, 4, &mut rng);
        let corank = mp.specialize(&p).corank();
        c.check(corank <= 1, format!("F101 point {k}: corank {corank} > 1"));
        if corank > 1 {
            break;
        }
    }
    for _ in 0..50 {
        let x = random_point(&q, 2, &mut rng);
        let p = tc.evaluate(&x);
        c.check(
            m.specialize(&p).corank() == 1,
            "image point must have corank exactly 1",
        );
        let xp = random_point(&fp, 2, &mut rng);
        let pp = tcp.evaluate(&xp);
        c.check(
            mp.specialize(&pp).corank() == 1,
            "image point over F101 must have corank exactly 1",
        );
    }
    c.finish(1, "twisted cubic worked example", start)
}

/// Criterion 2: the sphere reproduces the worked example.
pub fn criterion_2() -> CriterionResult {
    let start = Instant::now();
    let mut c = Checker::new();
    let sph = sphere(Rationals);
    let overrides = ThresholdOverrides {
        indeg_sat: Some(1),
        ..Default::default()
    };
    let m = matrixrep::build_rep(&sph, &MultiDeg::scalar(1), 1, &overrides, false)
        .expect("sphere M_1 builds");
    let t = &m.t_ring;
    let parse = |s: &str| parse_polynomial(s, t).unwrap();
    let printed = vec![
        vec![parse("0"), parse("T2"), parse("T3"), parse("-T1 + T4")],
        vec![parse("T2"), parse("0"), parse("-T1 - T4"), parse("T3")],
        vec![parse("-T3"), parse("-T1 - T4"), parse("0"), parse("T2")],
    ];
    c.check(
        grid_equal_up_to_perm_sign(&m.grid(), &printed),
        "M_1 does not match the printed matrix",
    );
    c.check(m.valid, "nu = 1 must be certified with indeg(I^sat) = 1");

    let q = Rationals;
    let emb = [q.from_i64(1), q.from_i64(0), q.from_i64(0), q.from_i64(-1)];
    c.check(
        m.specialize(&emb).corank() == 2,
        "embedded double point must have corank 2",
    );
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut tested = 0;
    while tested < 100 {
        let x = random_point(&q, 3, &mut rng);
        if q.is_zero(&x[0]) {
            continue; // the contracted line maps to the double point
        }
        let p = sph.evaluate(&x);
        let corank = m.specialize(&p).corank();
        c.check(
            corank == 1,
            format!("generic on-sphere point has corank {corank}, expected 1"),
        );
        tested += 1;
        if corank != 1 {
            break;
        }
    }
    match implicitize::hypersurface_implicit_gcd(&m) {
        Ok(res) => {
            let expect = parse("T1^2 - T2^2 - T3^2 - T4^2").monic();
            c.check(
                res.equation == expect && res.power == 1,
                format!("minor gcd gave ({}) ^ {}", res.equation, res.power),
            );
        }
        Err(e) => c.check(false, format!("minor gcd failed: {e}")),
    }
    match fiberlab::dim_base_locus(&sph) {
        Ok(BaseLocusDim::Dim0 { degree: 2 }) => {}
        other => c.check(false, format!("base locus classified as {other:?}")),
    }
    c.finish(2, "sphere worked example", start)
}

fn criterion_3_for_field<K: Field>(field: K, seed: u64, maps_count: usize, c: &mut Checker) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for idx in 0..maps_count {
        let r = [3, 4, 5][idx % 3];
        let d = 2 + (idx as i64 % 7); // degrees 2..8
        let spec = InstanceSpec {
            kind: InstanceKind::Curve { r, d },
            seed: seed.wrapping_add(idx as u64),
        };
        let (param, _) = match oracle::random_instance(field.clone(), &spec) {
            Ok(v) => v,
            Err(e) => {
                c.check(false, format!("instance {idx}: {e}"));
                continue;
            }
        };
        let mu = match syzygy::mu_basis(&param) {
            Ok(mu) => mu,
            Err(e) => {
                c.check(false, format!("instance {idx}: mu-basis failed: {e}"));
                continue;
            }
        };
        let cert = matrixrep::threshold_curve(&mu);
        let nu = cert.region.corners[0].clone();
        let m = matrixrep::build_rep_with_certificate(&param, &nu, 1, cert.clone(), false)
            .expect("certified build");
        let mut nu2 = nu.clone();
        nu2.0[0] += 1;
        let m2 = matrixrep::build_rep_with_certificate(&param, &nu2, 1, cert, false)
            .expect("stability build");
        for k in 0..20 {
            // half image points, half arbitrary
            let p = if k < 10 {
                let x = random_point(&field, 2, &mut rng);
                let fx = param.evaluate(&x);
                if fx.iter().all(|v| field.is_zero(v)) {
                    continue;
                }
                fx
            } else {
                random_point(&field, r, &mut rng)
            };
            let corank = m.specialize(&p).corank();
            let expect = oracle::fiber_degree_exact_p1(&param, &p).expect("oracle degree");
            c.check(
                corank as i64 == expect,
                format!("instance {idx}: corank {corank} != oracle degree {expect}"),
            );
            let corank2 = m2.specialize(&p).corank();
            c.check(
                corank == corank2,
                format!("instance {idx}: corank not stable across degrees ({corank} vs {corank2})"),
            );
            if corank as i64 != expect {
                return;
            }
        }
    }
}

/// Criteria 3 and 10 (curve half): corank equals the exact fiber degree at
/// the certified degree, stably across two region degrees.
pub fn criterion_3() -> CriterionResult {
    let start = Instant::now();
    let mut c = Checker::new();
    criterion_3_for_field(Rationals, 3001, 25, &mut c);
    criterion_3_for_field(PrimeField::new(101).unwrap(), 3002, 25, &mut c);
    c.finish(3, "curve corank = exact fiber degree (50 maps)", start)
}

/// Criteria 4 and 10 (morphism half): corank counts reduced enumerated
/// fibers over F101, and vanishes at verified off-image points.
pub fn criterion_4() -> CriterionResult {
    let start = Instant::now();
    let mut c = Checker::new();
    let fp = PrimeField::new(101).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for idx in 0..20usize {
        let d = 2 + (idx as i64 % 2); // degrees 2 and 3
        let (param, _) = match oracle::random_base_point_free_surface_map(
            fp,
            d,
            4000 + idx as u64,
        ) {
            Ok(v) => v,
            Err(e) => {
                c.check(false, format!("instance {idx}: {e}"));
                continue;
            }
        };
        let nu = MultiDeg::scalar(2 * (d - 1));
        let overrides = ThresholdOverrides {
            assume_base_point_free: true,
            ..Default::default()
        };
        let m = matrixrep::build_rep(&param, &nu, 1, &overrides, false).expect("morphism build");
        let mut nu2 = nu.clone();
        nu2.0[0] += 1;
        let m2 = matrixrep::build_rep(&param, &nu2, 1, &overrides, false).expect("stability");
        c.check(m.valid, "morphism matrix must be certified at (n-1)(d-1)");

        // the implicit equation certifies off-image points
        let implicit = implicitize::hypersurface_implicit_gcd(&m).ok();
        if let Some(res) = &implicit {
            c.check(
                oracle::implicit_identity_check(&param, &res.equation),
                format!("instance {idx}: implicit identity fails"),
            );
        }

        let mut image_checked = 0;
        let mut off_checked = 0;
        for _ in 0..40 {
            if image_checked >= 4 && off_checked >= 3 {
                break;
            }
            if image_checked < 4 {
                let x = random_point(&fp, 3, &mut rng);
                let p = param.evaluate(&x);
                if !p.iter().all(|v| fp.is_zero(v)) {
                    let corank = m.specialize(&p).corank();
                    let fiber = oracle::enumerate_fiber_fq(&param, &p).expect("enumeration");
                    let all_reduced = !fiber.is_empty()
                        && fiber
                            .iter()
                            .all(|pt| oracle::fiber_point_is_reduced(&param, &p, pt));
                    if all_reduced {
                        c.check(
                            corank == fiber.len(),
                            format!(
                                "instance {idx}: corank {corank} != {} reduced fiber points",
                                fiber.len()
                            ),
                        );
                        c.check(
                            m2.specialize(&p).corank() == corank,
                            format!("instance {idx}: corank unstable across degrees"),
                        );
                        image_checked += 1;
                    }
                }
            }
            if off_checked < 3 {
                if let Some(res) = &implicit {
                    let p = random_point(&fp, 4, &mut rng);
                    if !fp.is_zero(&res.equation.evaluate(&p)) {
                        let corank = m.specialize(&p).corank();
                        c.check(
                            corank == 0,
                            format!("instance {idx}: verified off-image point has corank {corank}"),
                        );
                        off_checked += 1;
                    }
                }
            }
        }
        c.check(
            image_checked >= 4,
            format!("instance {idx}: only {image_checked} verified image samples"),
        );
    }
    c.finish(4, "morphism corank = reduced enumeration (20 maps)", start)
}

/// Criterion 5: Rees layers vanish under T -> f, match H1 dimensions, and
/// downgrade(upgrade) is the identity on H1 coordinates.
pub fn criterion_5() -> CriterionResult {
    let start = Instant::now();
    let mut c = Checker::new();

    fn check_layers<K: Field>(
        label: &str,
        param: &Parameterization<K>,
        nus: &[i64],
        l_max: u32,
        c: &mut Checker,
    ) {
        let field = param.field().clone();
        for &nu0 in nus {
            let nu = MultiDeg::scalar(nu0);
            for l in 2..=l_max {
                let layer = match syzygy::rees_layer(param, &nu, l) {
                    Ok(layer) => layer,
                    Err(e) => {
                        c.check(false, format!("{label}: layer nu={nu0} l={l}: {e}"));
                        continue;
                    }
                };
                let delta = nu.add(&param.degree().scale(l as i64));
                let h1 = syzygy::koszul_h1(param, &delta);
                c.check(
                    layer.basis.len() == h1.dim(),
                    format!(
                        "{label}: layer nu={nu0} l={l} has {} elements, H1 has dim {}",
                        layer.basis.len(),
                        h1.dim()
                    ),
                );
                for b in &layer.basis {
                    c.check(
                        syzygy::specialize_t_to_maps(param, b).is_zero(),
                        format!("{label}: layer element does not vanish under T -> f"),
                    );
                }
                for (k, rep) in h1.reps.iter().enumerate() {
                    let up = syzygy::upgrade_syzygy(param, rep, l).expect("upgrade in range");
                    let down = syzygy::downgrade(param, &up);
                    match h1.coordinates(&field, &down) {
                        Some(coords) => {
                            let mut expect = vec![field.zero(); h1.dim()];
                            expect[k] = field.one();
                            c.check(
                                coords == expect,
                                format!("{label}: downgrade(upgrade) != id at nu={nu0} l={l}"),
                            );
                        }
                        None => c.check(
                            false,
                            format!("{label}: downgraded cycle left H1 at nu={nu0} l={l}"),
                        ),
                    }
                }
            }
        }
    }

    let conic = curve(Rationals, &["x^2", "x*y", "y^2"]);
    check_layers("conic", &conic, &[0, 1, 2], 2, &mut c);
    let sph = sphere(Rationals);
    check_layers("sphere", &sph, &[1, 2], 3, &mut c);
    let fp = PrimeField::new(101).unwrap();
    let (gen_map, _) = oracle::random_instance(
        fp,
        &InstanceSpec {
            kind: InstanceKind::SurfaceMap { d: 2 },
            seed: 505,
        },
    )
    .expect("general quadric map");
    check_layers("general d=2 map over F101", &gen_map, &[1, 2], 3, &mut c);
    c.finish(5, "nonlinear Rees layers", start)
}

/// Criterion 6: implicitization identities.
pub fn criterion_6() -> CriterionResult {
    let start = Instant::now();
    let mut c = Checker::new();
    let circle = curve(Rationals, &["x^2 - y^2", "2*x*y", "x^2 + y^2"]);
    match implicitize::plane_curve_implicit(&circle) {
        Ok(res) => {
            c.check(res.identity_holds(&circle), "circle identity");
            c.check(
                res.power as i64 * res.equation.total_degree() == 2,
                "circle e*deg F = d",
            );
        }
        Err(e) => c.check(false, format!("circle: {e}")),
    }
    let dc = curve(Rationals, &["x^4", "x^2*y^2", "y^4"]);
    match implicitize::plane_curve_implicit(&dc) {
        Ok(res) => {
            c.check(res.power == 2, format!("double conic e = {}", res.power));
            c.check(res.identity_holds(&dc), "double conic identity");
            c.check(
                res.power as i64 * res.equation.total_degree() == 4,
                "double conic e*deg F = d",
            );
        }
        Err(e) => c.check(false, format!("double conic: {e}")),
    }
    let sph = sphere(Rationals);
    let overrides = ThresholdOverrides {
        indeg_sat: Some(1),
        ..Default::default()
    };
    let m = matrixrep::build_rep(&sph, &MultiDeg::scalar(1), 1, &overrides, false).unwrap();
    match implicitize::hypersurface_implicit_gcd(&m) {
        Ok(res) => c.check(res.identity_holds(&sph), "sphere identity"),
        Err(e) => c.check(false, format!("sphere: {e}")),
    }
    for seed in 0..10u64 {
        let d = 2 + (seed as i64 % 4);
        let spec = InstanceSpec {
            kind: InstanceKind::Curve { r: 3, d },
            seed: 600 + seed,
        };
        let (param, _) = oracle::random_instance(Rationals, &spec).expect("plane curve instance");
        match implicitize::plane_curve_implicit(&param) {
            Ok(res) => {
                c.check(
                    res.identity_holds(&param),
                    format!("random instance {seed}: identity"),
                );
                c.check(
                    res.power as i64 * res.equation.total_degree() == d,
                    format!("random instance {seed}: e*deg F = d"),
                );
            }
            Err(e) => c.check(false, format!("random instance {seed}: {e}")),
        }
    }
    c.finish(6, "implicitization identities", start)
}

/// Criterion 7: Jacobian detection of one-dimensional fibers.
pub fn criterion_7() -> CriterionResult {
    let start = Instant::now();
    let mut c = Checker::new();
    let r = RingSpec::projective(&["x", "y", "z"], Rationals).unwrap();
    let planted = Parameterization::new(
        ["x*y^2", "x*y*z", "x*z^2", "y^3"]
            .iter()
            .map(|m| parse_polynomial(m, &r).unwrap())
            .collect(),
    )
    .unwrap();
    match fiberlab::jacobian_minor_gcd(&planted) {
        Ok((f_gcd, bound)) => {
            let x = parse_polynomial("x", &r).unwrap();
            c.check(x.divides(&f_gcd), "x divides the Jacobian minor gcd");
            c.check(
                f_gcd.total_degree() <= bound,
                format!("deg F = {} exceeds bound {bound}", f_gcd.total_degree()),
            );
        }
        Err(e) => c.check(false, format!("jacobian gcd: {e}")),
    }
    let q = Rationals;
    let p = [q.from_i64(0), q.from_i64(0), q.from_i64(0), q.from_i64(1)];
    match fiberlab::one_dim_fiber_decomposition(&planted, &p, None) {
        Ok(rep) => {
            let x = parse_polynomial("x", &r).unwrap();
            c.check(rep.h_p == x, format!("h_p = {}", rep.h_p));
            // reconstruction identity f_i = p_i l_p(f) + h_p g_i
            let mut lp_f = Poly::zero(r.clone());
            for (a, fi) in rep.ell_p.iter().zip(planted.maps()) {
                lp_f = &lp_f + &fi.scale(a);
            }
            for ((fi, pi), gi) in planted.maps().iter().zip(&p).zip(&rep.residuals) {
                let rhs = &lp_f.scale(pi) + &(&rep.h_p * gi);
                c.check(fi == &rhs, "reconstruction identity");
            }
        }
        Err(e) => c.check(false, format!("decomposition: {e}")),
    }
    c.finish(7, "Jacobian one-dimensional fibers", start)
}

/// Criterion 8: multigraded validity regions on an exhaustive grid.
pub fn criterion_8() -> CriterionResult {
    let start = Instant::now();
    let mut c = Checker::new();
    let p2 = threshold_multigraded(MultigradedSource::P2, &[2], 1);
    for mu in 0..=6i64 {
        for nu in 0..=6i64 {
            let inside = (mu >= 4 && nu >= 0) || (mu >= 2 && nu >= 2);
            c.check(
                p2.region.contains(&MultiDeg(vec![mu, nu])) == inside,
                format!("P2 region mismatch at ({mu},{nu})"),
            );
        }
    }
    let p11 = threshold_multigraded(MultigradedSource::P1xP1, &[1, 1], 1);
    for a in 0..=6i64 {
        for b in 0..=6i64 {
            for nu in 0..=6i64 {
                let inside = (a >= 2 && b >= 1 && nu >= 0)
                    || (a >= 1 && b >= 2 && nu >= 0)
                    || (a >= 1 && b >= 1 && nu >= 2);
                c.check(
                    p11.region.contains(&MultiDeg(vec![a, b, nu])) == inside,
                    format!("P1xP1 region mismatch at ({a},{b},{nu})"),
                );
            }
        }
    }
    c.finish(8, "multigraded validity regions", start)
}

/// Criterion 9: orthogonal projection through the normal congruence.
pub fn criterion_9() -> CriterionResult {
    let start = Instant::now();
    let mut c = Checker::new();
    let q = Rationals;
    let sph = sphere(Rationals);
    match congruence::build_normal_congruence(&sph, false) {
        Ok(cong) => {
            match congruence::project_point(&cong, &[q.from_i64(2), q.from_i64(0), q.from_i64(0)], None)
            {
                Ok(rep) => {
                    c.check(rep.fiber_degree == 2, format!("fiber degree {}", rep.fiber_degree));
                    let mut feet: Vec<Vec<num::BigRational>> =
                        rep.feet.iter().map(|f| f.foot.clone()).collect();
                    feet.sort_by_key(|f| q.elem_to_string(&f[0]));
                    c.check(
                        feet == vec![
                            vec![q.from_i64(-1), q.from_i64(0), q.from_i64(0)],
                            vec![q.from_i64(1), q.from_i64(0), q.from_i64(0)],
                        ],
                        format!("feet: {feet:?}"),
                    );
                }
                Err(e) => c.check(false, format!("sphere projection: {e}")),
            }
            match congruence::project_point(&cong, &[q.from_i64(0), q.from_i64(0), q.from_i64(0)], None)
            {
                Err(congruence::CongruenceError::DegenerateQuery { .. }) => {}
                other => c.check(false, format!("center query: expected degenerate, got {other:?}")),
            }
        }
        Err(e) => c.check(false, format!("sphere congruence: {e}")),
    }

    let r = RingSpec::projective(&["x1", "x2", "x3"], Rationals).unwrap();
    let plane = Parameterization::new(
        ["x1", "x2", "x3", "0"]
            .iter()
            .map(|m| parse_polynomial(m, &r).unwrap())
            .collect(),
    )
    .unwrap();
    match congruence::build_normal_congruence(&plane, false) {
        Ok(cong) => {
            let mut rng = ChaCha8Rng::seed_from_u64(909);
            for _ in 0..20 {
                let query = [
                    q.from_i64(rng.gen_range(-9..=9)),
                    q.from_i64(rng.gen_range(-9..=9)),
                    q.from_i64(rng.gen_range(-9..=9)),
                ];
                match congruence::project_point(&cong, &query, None) {
                    Ok(rep) => {
                        c.check(rep.fiber_degree == 1, "plane fiber degree 1");
                        c.check(
                            rep.feet.len() == 1
                                && rep.feet[0].foot
                                    == vec![query[0].clone(), query[1].clone(), q.from_i64(0)],
                            "closed-form plane foot",
                        );
                    }
                    Err(e) => c.check(false, format!("plane projection: {e}")),
                }
            }
        }
        Err(e) => c.check(false, format!("plane congruence: {e}")),
    }
    c.finish(9, "orthogonal projection", start)
}

/// Criterion 10 is the degree-stability property; it is exercised inside
/// criteria 3 and 4 (every instance is evaluated at two region degrees).
/// This entry re-states the outcome for the report.
pub fn criterion_10(c3: &CriterionResult, c4: &CriterionResult) -> CriterionResult {
    CriterionResult {
        index: 10,
        name: "degree stability (covered within criteria 3-4)",
        passed: c3.passed && c4.passed,
        details: if c3.passed && c4.passed {
            String::new()
        } else {
            "see criteria 3 and 4".into()
        },
        millis: 0,
    }
}

/// Run the whole acceptance suite.
pub fn run_all() -> Vec<CriterionResult> {
    let c1 = criterion_1();
    let c2 = criterion_2();
    let c3 = criterion_3();
    let c4 = criterion_4();
    let c5 = criterion_5();
    let c6 = criterion_6();
    let c7 = criterion_7();
    let c8 = criterion_8();
    let c9 = criterion_9();
    let c10 = criterion_10(&c3, &c4);
    vec![c1, c2, c3, c4, c5, c6, c7, c8, c9, c10]
}
