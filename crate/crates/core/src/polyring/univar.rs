//! Roots and squarefree structure of binary forms.
//!
//! A binary form of degree `m` in `k[x, y]` cuts out a length-`m` scheme on
//! `P^1`. Over the rationals, linear factors are found by a rational-root
//! search; over a small prime field, by exhaustive scan of `P^1(F_p)`.
//! Factors of degree at least 2 that resist this are reported unfactored
//! together with their degree.

use crate::field::Field;

use super::{gcd, Poly};

/// Point of `P^1` with multiplicity, plus any unsplit residual factor.
#[derive(Clone, Debug)]
pub struct BinaryRoots<K: Field> {
    pub roots: Vec<([K::Elem; 2], usize)>,
    pub unfactored: Option<Poly<K>>,
}

impl<K: Field> BinaryRoots<K> {
    pub fn total_with_multiplicity(&self) -> i64 {
        let m: usize = self.roots.iter().map(|(_, m)| m).sum();
        m as i64 + self.unfactored.as_ref().map_or(0, |p| p.total_degree())
    }
}

fn linear_form<K: Field>(h: &Poly<K>, a: &K::Elem, b: &K::Elem) -> Poly<K> {
    // b*x - a*y vanishes exactly at (a : b)
    let r = h.ring().clone();
    let x = Poly::var(r.clone(), 0);
    let y = Poly::var(r, 1);
    &x.scale(b) - &y.scale(a)
}

fn divide_out<K: Field>(h: &mut Poly<K>, l: &Poly<K>) -> usize {
    let mut m = 0;
    while let Some(q) = h.exact_div(l) {
        *h = q;
        m += 1;
    }
    m
}

/// Roots of a nonzero binary form, with multiplicities.
pub fn binary_form_roots<K: Field>(h: &Poly<K>) -> BinaryRoots<K> {
    assert_eq!(h.ring().num_vars(), 2, "binary forms only");
    assert!(!h.is_zero(), "zero form has no root scheme");
    let f = h.field().clone();
    let mut rest = h.clone();
    let mut roots = Vec::new();

    // (1:0) and (0:1) come from power-of-variable factors
    let k_inf = rest.terms().map(|(e, _)| e[1]).min().unwrap();
    if k_inf > 0 {
        let y = Poly::var(h.ring().clone(), 1);
        for _ in 0..k_inf {
            rest = rest.exact_div(&y).unwrap();
        }
        roots.push(([f.one(), f.zero()], k_inf as usize));
    }
    let k_zero = rest.terms().map(|(e, _)| e[0]).min().unwrap();
    if k_zero > 0 {
        let x = Poly::var(h.ring().clone(), 0);
        for _ in 0..k_zero {
            rest = rest.exact_div(&x).unwrap();
        }
        roots.push(([f.zero(), f.one()], k_zero as usize));
    }

    if rest.total_degree() == 0 {
        return BinaryRoots {
            roots,
            unfactored: None,
        };
    }

    if let Some(all) = f.enumerate_all() {
        for a in all {
            if f.is_zero(&a) {
                continue; // (0:1) already handled
            }
            if f.is_zero(&rest.evaluate(&[a.clone(), f.one()])) {
                let l = linear_form(&rest, &a, &f.one());
                let m = divide_out(&mut rest, &l);
                debug_assert!(m > 0);
                roots.push(([a, f.one()], m));
            }
            if rest.total_degree() == 0 {
                break;
            }
        }
    } else {
        // rational-root search on the integral form
        let coeffs: Vec<&K::Elem> = rest.terms().map(|(_, c)| c).collect();
        let scaled = match f.integral_scale(&coeffs) {
            Some(s) => rest.scale(&s),
            None => rest.clone(),
        };
        let c_lead = scaled.coeff(&vec![scaled.total_degree() as u32, 0]);
        let c_const = scaled.coeff(&vec![0, scaled.total_degree() as u32]);
        if let Some(cands) = f.rational_root_candidates(&c_const, &c_lead) {
            for a in cands {
                if rest.total_degree() == 0 {
                    break;
                }
                if f.is_zero(&rest.evaluate(&[a.clone(), f.one()])) {
                    let l = linear_form(&rest, &a, &f.one());
                    let m = divide_out(&mut rest, &l);
                    debug_assert!(m > 0);
                    roots.push(([a, f.one()], m));
                }
            }
        }
    }

    let unfactored = if rest.total_degree() > 0 {
        Some(rest.monic())
    } else {
        None
    };
    BinaryRoots { roots, unfactored }
}

/// Yun squarefree decomposition of a binary form: pairs `(a_i, i)` with
/// `h = lc * prod a_i^i` and the `a_i` squarefree and pairwise coprime.
/// `None` when the characteristic interferes (some derivative vanishes);
/// the reconstruction is verified before returning.
pub fn squarefree_decomposition<K: Field>(h: &Poly<K>) -> Option<Vec<(Poly<K>, u32)>> {
    assert_eq!(h.ring().num_vars(), 2, "binary forms only");
    assert!(!h.is_zero());
    let mut out: Vec<(Poly<K>, u32)> = Vec::new();
    let mut rest = h.monic();

    // variable powers split off as squarefree-linear pieces
    for v in [1usize, 0] {
        let k = rest.terms().map(|(e, _)| e[v]).min().unwrap();
        if k > 0 {
            let var = Poly::var(h.ring().clone(), v);
            for _ in 0..k {
                rest = rest.exact_div(&var).unwrap();
            }
            out.push((var, k));
        }
    }
    if rest.total_degree() == 0 {
        return Some(out);
    }

    // Yun in the first variable on the dehomogenized part
    let d = |p: &Poly<K>| p.partial(0);
    let fp = d(&rest);
    if fp.is_zero() {
        return None;
    }
    let g = gcd(&rest, &fp);
    let mut b = rest.exact_div(&g)?;
    let c = fp.exact_div(&g)?;
    let mut dd = &c - &d(&b);
    let mut i = 1u32;
    while b.total_degree() > 0 {
        let a = gcd(&b, &dd);
        if a.total_degree() > 0 {
            out.push((a.clone(), i));
        }
        b = b.exact_div(&a)?;
        let c2 = dd.exact_div(&a)?;
        dd = &c2 - &d(&b);
        i += 1;
        if i > h.total_degree() as u32 + 1 {
            return None;
        }
    }

    // verify the reconstruction, guarding against characteristic trouble
    let mut prod = Poly::constant(h.ring().clone(), h.field().one());
    for (a, m) in &out {
        prod = &prod * &a.pow(*m);
    }
    if prod == h.monic() {
        Some(out)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::polyring::parse::parse_polynomial;
    use crate::polyring::RingSpec;

    #[test]
    fn roots_with_multiplicity_over_q() {
        let r = RingSpec::projective(&["x", "y"], Rationals).unwrap();
        // (x - y)^2 * (x + 2y) * y
        let h = parse_polynomial("(x - y)^2 * (x + 2*y) * y", &r).unwrap();
        let roots = binary_form_roots(&h);
        assert!(roots.unfactored.is_none());
        assert_eq!(roots.total_with_multiplicity(), 4);
        let f = Rationals;
        let has = |a: i64, b: i64, m: usize| {
            roots.roots.iter().any(|(pt, mm)| {
                *mm == m && {
                    // compare projectively
                    let (x, y) = (&pt[0], &pt[1]);
                    let (aa, bb) = (f.from_i64(a), f.from_i64(b));
                    f.sub(&f.mul(x, &bb), &f.mul(y, &aa)) == f.zero()
                }
            })
        };
        assert!(has(1, 1, 2), "double root at (1:1)");
        assert!(has(-2, 1, 1));
        assert!(has(1, 0, 1), "root at infinity from the y factor");
    }

    #[test]
    fn irreducible_quadratic_reported_unfactored() {
        let r = RingSpec::projective(&["x", "y"], Rationals).unwrap();
        let h = parse_polynomial("x^2 + y^2", &r).unwrap();
        let roots = binary_form_roots(&h);
        assert!(roots.roots.is_empty());
        assert_eq!(roots.unfactored.unwrap().total_degree(), 2);
    }

    #[test]
    fn exhaustive_scan_over_f7() {
        let f = PrimeField::new(7).unwrap();
        let r = RingSpec::projective(&["x", "y"], f).unwrap();
        // x^2 + y^2 = (x - 3y²-ish...) over F7? -1 is not a QR mod 7, stays irreducible
        let h = parse_polynomial("x^2 + y^2", &r).unwrap();
        let roots = binary_form_roots(&h);
        assert!(roots.roots.is_empty());
        // x^2 - 2y^2 splits mod 7 (3^2 = 2)
        let h2 = parse_polynomial("x^2 - 2*y^2", &r).unwrap();
        let roots2 = binary_form_roots(&h2);
        assert_eq!(roots2.roots.len(), 2);
        assert!(roots2.unfactored.is_none());
    }

    #[test]
    fn squarefree_structure() {
        let r = RingSpec::projective(&["x", "y"], Rationals).unwrap();
        let h = parse_polynomial("(x^2 + y^2)^3 * (x - y)", &r).unwrap();
        let dec = squarefree_decomposition(&h).unwrap();
        let mut mults: Vec<u32> = dec.iter().map(|(_, m)| *m).collect();
        mults.sort();
        assert_eq!(mults, vec![1, 3]);
    }
}
