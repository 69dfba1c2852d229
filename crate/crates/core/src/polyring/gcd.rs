//! Multivariate GCD by primitive-part/content recursion, with a
//! subresultant pseudo-remainder sequence in the last active variable.
//! Results are normalized monic with respect to the global term order, so
//! `gcd` is a canonical representative of the ideal it generates.

use std::collections::BTreeMap;

use crate::field::Field;

use super::Poly;

impl<K: Field> Poly<K> {
    /// Highest exponent of variable `v`, `None` for the zero polynomial.
    pub fn deg_in(&self, v: usize) -> Option<u32> {
        self.terms().map(|(e, _)| e[v]).max()
    }

    /// View as a univariate polynomial in `v`: exponent of `v` mapped to the
    /// coefficient (a polynomial not involving `v`).
    pub fn uni_coeffs(&self, v: usize) -> BTreeMap<u32, Poly<K>> {
        let mut out: BTreeMap<u32, Poly<K>> = BTreeMap::new();
        for (e, c) in self.terms() {
            let k = e[v];
            let mut e2 = e.clone();
            e2[v] = 0;
            let entry = out
                .entry(k)
                .or_insert_with(|| Poly::zero(self.ring().clone()));
            *entry = &*entry + &Poly::monomial(self.ring().clone(), e2, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    fn mul_var_pow(&self, v: usize, k: u32) -> Poly<K> {
        let mut e = vec![0u32; self.ring().num_vars()];
        e[v] = k;
        self.mul_monomial(&e, &self.field().one())
    }
}

fn lead_uni<K: Field>(p: &Poly<K>, v: usize) -> (u32, Poly<K>) {
    let m = p.uni_coeffs(v);
    let (&d, c) = m.iter().next_back().expect("nonzero polynomial");
    (d, c.clone())
}

/// Pseudo-remainder of `a` by `b` in variable `v`:
/// `lc_v(b)^(deg a - deg b + 1) * a = q*b + prem`.
fn prem<K: Field>(a: &Poly<K>, b: &Poly<K>, v: usize) -> Poly<K> {
    let (db, lb) = lead_uni(b, v);
    let da = a.deg_in(v).unwrap_or(0);
    let mut e = da as i64 - db as i64 + 1;
    let mut r = a.clone();
    while !r.is_zero() {
        let (dr, lr) = lead_uni(&r, v);
        if dr < db {
            break;
        }
        r = &(&lb * &r) - &(&lr * &b.mul_var_pow(v, dr - db));
        e -= 1;
    }
    let mut scale = Poly::constant(a.ring().clone(), a.field().one());
    for _ in 0..e.max(0) {
        scale = &scale * &lb;
    }
    &scale * &r
}

/// Plain Euclid for polynomials in the single variable `v` with constant
/// coefficients.
fn gcd_univar_field<K: Field>(a: &Poly<K>, b: &Poly<K>, v: usize) -> Poly<K> {
    let f = a.field().clone();
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        // remainder of a by b
        let (db, lb) = lead_uni(&b, v);
        let lb = lb.leading_coeff().unwrap().clone();
        loop {
            if a.is_zero() {
                break;
            }
            let (da, la) = lead_uni(&a, v);
            if da < db {
                break;
            }
            let la = la.leading_coeff().unwrap().clone();
            let q = f.div(&la, &lb).expect("nonzero leading coefficient");
            let qb = b.mul_var_pow(v, da - db).scale(&q);
            a = &a - &qb;
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.monic()
}

fn active_vars<K: Field>(p: &Poly<K>, q: &Poly<K>) -> Vec<usize> {
    let n = p.ring().num_vars();
    (0..n)
        .filter(|&v| p.deg_in(v).unwrap_or(0) > 0 || q.deg_in(v).unwrap_or(0) > 0)
        .collect()
}

/// Content of `p` with respect to variable `v`: the GCD of its
/// `v`-coefficients.
fn content_in<K: Field>(p: &Poly<K>, v: usize) -> Poly<K> {
    let coeffs: Vec<Poly<K>> = p.uni_coeffs(v).into_values().collect();
    gcd_many(&coeffs)
}

fn gcd_inner<K: Field>(p: &Poly<K>, q: &Poly<K>) -> Poly<K> {
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    let vars = active_vars(p, q);
    if vars.is_empty() {
        return Poly::constant(p.ring().clone(), p.field().one());
    }
    let v = *vars.last().unwrap();
    if vars.len() == 1 {
        return gcd_univar_field(p, q, v);
    }
    // recurse on contents, run the subresultant PRS on primitive parts
    let cp = content_in(p, v);
    let cq = content_in(q, v);
    let pp = p.exact_div(&cp).expect("content divides");
    let qq = q.exact_div(&cq).expect("content divides");
    let c = gcd_inner(&cp, &cq);
    let g = subresultant_prs(&pp, &qq, v);
    let g = g.exact_div(&content_in(&g, v)).expect("content divides");
    (&c * &g).monic()
}

fn subresultant_prs<K: Field>(a0: &Poly<K>, b0: &Poly<K>, v: usize) -> Poly<K> {
    let one = Poly::constant(a0.ring().clone(), a0.field().one());
    let (mut a, mut b) = if a0.deg_in(v).unwrap_or(0) >= b0.deg_in(v).unwrap_or(0) {
        (a0.clone(), b0.clone())
    } else {
        (b0.clone(), a0.clone())
    };
    if b.deg_in(v).unwrap_or(0) == 0 {
        // primitive and v-free means unit: primitive parts are coprime
        return if b.is_zero() { a } else { one };
    }
    let mut g = one.clone();
    let mut h = one.clone();
    loop {
        let da = a.deg_in(v).unwrap();
        let db = b.deg_in(v).unwrap();
        let delta = da - db;
        let r = prem(&a, &b, v);
        if r.is_zero() {
            return b;
        }
        if r.deg_in(v).unwrap_or(0) == 0 {
            return one;
        }
        a = b;
        let mut div = g.clone();
        for _ in 0..delta {
            div = &div * &h;
        }
        b = r.exact_div(&div).expect("subresultant division is exact");
        g = lead_uni(&a, v).1;
        h = if delta == 0 {
            h
        } else {
            // h = g^delta / h^(delta-1)
            let mut num = one.clone();
            for _ in 0..delta {
                num = &num * &g;
            }
            let mut den = one.clone();
            for _ in 0..delta - 1 {
                den = &den * &h;
            }
            num.exact_div(&den).expect("subresultant h-update is exact")
        };
    }
}

/// A greatest common divisor, monic under the global term order.
/// `gcd(p, 0)` is the normalization of `p`.
pub fn gcd<K: Field>(p: &Poly<K>, q: &Poly<K>) -> Poly<K> {
    assert!(p.same_ring(q), "ring mismatch in gcd");
    let f = p.field().clone();
    let scale = |x: &Poly<K>| -> Poly<K> {
        let coeffs: Vec<&K::Elem> = x.terms().map(|(_, c)| c).collect();
        match f.integral_scale(&coeffs) {
            Some(s) => x.scale(&s),
            None => x.clone(),
        }
    };
    gcd_inner(&scale(p), &scale(q))
}

/// Iterated GCD of a list; zero entries are skipped, all-zero gives zero.
pub fn gcd_many<K: Field>(ps: &[Poly<K>]) -> Poly<K> {
    let mut it = ps.iter().filter(|p| !p.is_zero());
    let first = match it.next() {
        Some(p) => p.clone(),
        None => {
            return ps
                .first()
                .map(|p| Poly::zero(p.ring().clone()))
                .expect("gcd_many of empty list")
        }
    };
    let mut acc = first.monic();
    for p in it {
        if acc.total_degree() == 0 {
            break;
        }
        acc = gcd(&acc, p);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::polyring::parse::parse_polynomial;
    use crate::polyring::RingSpec;
    use rand::{Rng, SeedableRng};

    #[test]
    fn gcd_by_inspection() {
        let r = RingSpec::projective(&["x", "y"], Rationals).unwrap();
        let p = parse_polynomial("x^2 - y^2", &r).unwrap();
        let q = parse_polynomial("x^2 - x*y", &r).unwrap();
        let g = gcd(&p, &q);
        let expect = parse_polynomial("x - y", &r).unwrap();
        assert_eq!(g, expect);
    }

    #[test]
    fn gcd_with_zero_normalizes() {
        let r = RingSpec::projective(&["x", "y"], Rationals).unwrap();
        let p = parse_polynomial("2*x - 2*y", &r).unwrap();
        let z = Poly::zero(r.clone());
        assert_eq!(gcd(&p, &z), parse_polynomial("x - y", &r).unwrap());
        assert_eq!(gcd(&z, &z), z);
    }

    #[test]
    fn planted_factor_divides_products() {
        let r = RingSpec::projective(&["x", "y", "z"], Rationals).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut rand_poly = |deg: u32| {
            let basis = r.graded_basis(&crate::polyring::MultiDeg::scalar(deg as i64));
            let f = Rationals;
            Poly::from_terms(
                r.clone(),
                basis
                    .into_iter()
                    .map(|e| (e, f.from_i64(rng.gen_range(-5..=5)))),
            )
        };
        for _ in 0..5 {
            let h = rand_poly(2);
            if h.is_zero() {
                continue;
            }
            let a = &h * &rand_poly(2);
            let b = &h * &rand_poly(3);
            let g = gcd(&a, &b);
            assert!(
                h.divides(&g) || g.exact_div(&h).is_some(),
                "planted factor must divide the gcd"
            );
            assert!(g.divides(&a) && g.divides(&b), "gcd divides both inputs");
            let ra = a.exact_div(&g).unwrap();
            let rb = b.exact_div(&g).unwrap();
            assert_eq!(gcd(&ra, &rb).total_degree(), 0, "cofactors are coprime");
        }
    }

    #[test]
    fn gcd_over_prime_field() {
        let f = PrimeField::new(101).unwrap();
        let r = RingSpec::projective(&["x", "y"], f).unwrap();
        let p = parse_polynomial("x^3 - y^3", &r).unwrap();
        let q = parse_polynomial("x^2 - y^2", &r).unwrap();
        let g = gcd(&p, &q);
        assert_eq!(g, parse_polynomial("x - y", &r).unwrap());
    }

    #[test]
    fn trivariate_content_recursion() {
        let r = RingSpec::projective(&["x", "y", "z"], Rationals).unwrap();
        let p = parse_polynomial("x*y^2 - x*z^2", &r).unwrap();
        let q = parse_polynomial("x^2*y - x^2*z", &r).unwrap();
        let g = gcd(&p, &q);
        assert_eq!(g, parse_polynomial("x*y - x*z", &r).unwrap());
    }
}
