//! Complete factorization into irreducibles and the k-free predicate.
//!
//! In characteristic p, `gcd(f, f')` alone misses p-th powers, so the
//! squarefree decomposition separates the F_q[x^p] part via p-th roots and
//! recurses. The multiplicity profile that falls out of the decomposition is
//! all the k-free predicate needs; full factorization additionally splits the
//! squarefree parts by distinct degree and then by a deterministic element
//! sweep (no randomization, so factor order is stable across runs).

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::poly::{DigitCounter, Poly};

/// unit * prod P_i^(e_i) with the P_i monic irreducible, pairwise distinct,
/// sorted by (degree, canonical code).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationProfile {
    pub unit: FieldElement,
    pub factors: Vec<(Poly, u32)>,
}

impl FactorizationProfile {
    /// Re-multiplies the profile; equals the factored input exactly.
    pub fn product(&self) -> Poly {
        let field = self.unit.field();
        let mut acc = Poly::one(field).scale(&self.unit).expect("same field");
        for (p, e) in &self.factors {
            acc = acc.mul(&p.pow(*e));
        }
        acc
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).max().unwrap_or(0)
    }
}

/// Squarefree decomposition: pairwise-coprime monic squarefree g_i and
/// distinct multiplicities e_i with f = lc(f) * prod g_i^(e_i).
pub fn squarefree_decomposition(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    sqf_into(&f.monic(), 1, &mut out);
    out.sort_by_key(|&(_, e)| e);
    Ok(out)
}

fn sqf_into(f: &Poly, stride: u32, out: &mut Vec<(Poly, u32)>) {
    if f.is_constant() {
        return;
    }
    let deriv = f.derivative(1);
    if deriv.is_zero() {
        // f lies in F_q[x^p]: recurse on its p-th root with multiplicities
        // scaled by p.
        let root = f.pth_root().expect("zero derivative implies membership in F_q[x^p]");
        sqf_into(&root, stride * f.field().p(), out);
        return;
    }
    let mut c = f.gcd(&deriv);
    let mut w = f.divrem(&c).expect("gcd divides f").0;
    // Invariant: w = prod of the irreducibles whose multiplicity is >= i and
    // not divisible by p; c carries the rest.
    let mut i = 1u32;
    while !w.is_constant() {
        let y = w.gcd(&c);
        let fac = w.divrem(&y).expect("gcd divides w").0;
        if !fac.is_constant() {
            out.push((fac, i * stride));
        }
        c = c.divrem(&y).expect("y divides c").0;
        w = y;
        i += 1;
    }
    if !c.is_constant() {
        // Remaining multiplicities are all divisible by p.
        let root = c.pth_root().expect("leftover part lies in F_q[x^p]");
        sqf_into(&root, stride * f.field().p(), out);
    }
}

/// Distinct-degree split of a monic squarefree polynomial: returns pairs
/// (product of all irreducible factors of degree e, e).
fn distinct_degree_split(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field().clone();
    let x = Poly::x(&field);
    let mut out = Vec::new();
    let mut g = f.clone();
    let mut r = x.rem(&g).expect("nonzero modulus");
    let mut e = 1usize;
    while g.degree().map_or(false, |d| d >= 2 * e) {
        r = r.pow_mod(field.q() as u64, &g).expect("nonzero modulus");
        let part = g.gcd(&r.sub(&x));
        if !part.is_one() {
            g = g.divrem(&part).expect("part divides g").0;
            r = r.rem(&g).expect("nonzero modulus");
            out.push((part, e));
        }
        e += 1;
    }
    if !g.is_constant() {
        let d = g.degree().unwrap();
        out.push((g, d));
    }
    out
}

/// Equal-degree split: factors a monic squarefree product of irreducibles all
/// of degree e. Splitting elements are swept in canonical order, so the
/// result is deterministic.
fn equal_degree_split(f: &Poly, e: usize, out: &mut Vec<Poly>) {
    let d = f.degree().expect("nonzero input");
    if d == e {
        out.push(f.clone());
        return;
    }
    let field = f.field().clone();
    let q = field.q() as u64;
    // Candidates of degree >= 1 and < deg f, in code order.
    for width in 2..=d {
        for digits in DigitCounter::new(q, width) {
            if digits[width - 1] == 0 {
                continue;
            }
            let codes: Vec<u32> = digits.iter().map(|&c| c as u32).collect();
            let alpha = Poly::from_codes(&field, &codes).expect("codes in range");
            let split = if field.p() == 2 {
                // Absolute trace of alpha into F_2.
                let steps = e as u32 * field.f();
                let mut t = alpha.clone();
                let mut tr = alpha.clone();
                for _ in 1..steps {
                    t = t.mul(&t).rem(f).expect("nonzero modulus");
                    tr = tr.add(&t);
                }
                f.gcd(&tr)
            } else {
                // alpha^((q^e - 1) / 2) - 1 via the norm to the degree-e
                // subfield followed by a small power.
                let mut frob = alpha.clone();
                let mut norm = alpha.clone();
                for _ in 1..e {
                    frob = frob.pow_mod(q, f).expect("nonzero modulus");
                    norm = norm.mul(&frob).rem(f).expect("nonzero modulus");
                }
                let beta = norm.pow_mod((q - 1) / 2, f).expect("nonzero modulus");
                f.gcd(&beta.sub(&Poly::one(&field)))
            };
            let ds = split.degree().unwrap_or(0);
            if ds > 0 && ds < d {
                let rest = f.divrem(&split).expect("split divides f").0;
                equal_degree_split(&split, e, out);
                equal_degree_split(&rest, e, out);
                return;
            }
        }
    }
    unreachable!("every squarefree product of equal-degree irreducibles splits")
}

/// Exact factorization of a nonzero polynomial, deterministic factor order.
pub fn factorize(f: &Poly) -> Result<FactorizationProfile> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let unit = f.leading_coeff().expect("nonzero input");
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    for (part, mult) in squarefree_decomposition(f)? {
        for (prod, e) in distinct_degree_split(&part) {
            let mut irreducibles = Vec::new();
            equal_degree_split(&prod, e, &mut irreducibles);
            for p in irreducibles {
                factors.push((p, mult));
            }
        }
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(FactorizationProfile { unit, factors })
}

/// Largest multiplicity in the factorization; 0 for nonzero constants.
pub fn max_multiplicity(f: &Poly) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut best = 0;
    for (part, mult) in squarefree_decomposition(f)? {
        debug_assert!(!part.is_constant());
        best = best.max(mult);
    }
    Ok(best)
}

/// True iff no irreducible factor of f has multiplicity k or higher. The
/// zero polynomial is rejected rather than classified.
pub fn is_k_free(f: &Poly, k: u32) -> Result<bool> {
    if k < 2 {
        return Err(Error::invalid("k-free needs k >= 2"));
    }
    Ok(max_multiplicity(f)? < k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::poly::all_monic;

    fn gf(q: u32) -> Field {
        Field::of_order(q).unwrap()
    }

    fn poly(field: &Field, text: &str) -> Poly {
        Poly::parse(field, text).unwrap()
    }

    fn profile_text(p: &FactorizationProfile) -> Vec<(String, u32)> {
        p.factors.iter().map(|(f, e)| (f.to_text(), *e)).collect()
    }

    #[test]
    fn factorize_examples() {
        let f2 = gf(2);
        // x^2 + x = x(x+1)
        let prof = factorize(&poly(&f2, "011")).unwrap();
        assert_eq!(profile_text(&prof), vec![("01".into(), 1), ("11".into(), 1)]);
        // x^4 + x^2 = (x^2 + x)^2: exercises the p-th power path.
        let prof = factorize(&poly(&f2, "00101")).unwrap();
        assert_eq!(profile_text(&prof), vec![("01".into(), 2), ("11".into(), 2)]);
        // x^3 over GF(3)
        let f3 = gf(3);
        let prof = factorize(&poly(&f3, "0001")).unwrap();
        assert_eq!(profile_text(&prof), vec![("01".into(), 3)]);
    }

    #[test]
    fn zero_inputs_are_rejected() {
        let f2 = gf(2);
        let zero = Poly::zero(&f2);
        assert!(matches!(factorize(&zero), Err(Error::ZeroPolynomial)));
        assert!(matches!(is_k_free(&zero, 2), Err(Error::ZeroPolynomial)));
        assert!(matches!(max_multiplicity(&zero), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn k_free_examples() {
        let f2 = gf(2);
        // x^3 + x^2 = x^2 (x + 1)
        let f = poly(&f2, "0011");
        assert!(!is_k_free(&f, 2).unwrap());
        assert!(is_k_free(&f, 3).unwrap());
        // Irreducibles are k-free for every k.
        let irr = poly(&f2, "1101");
        assert!(crate::irreducibles::is_irreducible(&irr));
        for k in 2..6 {
            assert!(is_k_free(&irr, k).unwrap());
        }
        assert!(is_k_free(&f, 1).is_err());
    }

    #[test]
    fn max_multiplicity_examples() {
        let f3 = gf(3);
        assert_eq!(max_multiplicity(&poly(&f3, "001")).unwrap(), 2); // x^2
        let f2 = gf(2);
        let cube = poly(&f2, "111").pow(3);
        assert_eq!(max_multiplicity(&cube).unwrap(), 3);
        assert_eq!(max_multiplicity(&poly(&f3, "0001").mul(&poly(&f3, "11")).mul(&poly(&f3, "21"))).unwrap(), 3);
        let squarefree = poly(&f3, "01").mul(&poly(&f3, "11")).mul(&poly(&f3, "21"));
        assert_eq!(max_multiplicity(&squarefree).unwrap(), 1);
        // Nonzero constants have multiplicity 0 by convention.
        assert_eq!(max_multiplicity(&poly(&f3, "2")).unwrap(), 0);
    }

    #[test]
    fn round_trip_on_random_inputs() {
        let mut state = 0x6a09e667f3bcc908u64;
        let mut next = move |bound: u64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) % bound
        };
        for q in [2u32, 3, 4, 5, 7, 9] {
            let field = gf(q);
            for _ in 0..30 {
                let deg = 1 + next(24) as usize;
                let mut codes: Vec<u32> = (0..deg).map(|_| next(q as u64) as u32).collect();
                codes.push(1 + next(q as u64 - 1) as u32);
                let f = Poly::from_codes(&field, &codes).unwrap();
                let prof = factorize(&f).unwrap();
                assert_eq!(prof.product(), f, "q={q} f={}", f.to_text());
                for (p, _) in &prof.factors {
                    assert!(crate::irreducibles::is_irreducible(p));
                    assert!(p.is_monic());
                }
                // Factors are pairwise distinct and sorted.
                for w in prof.factors.windows(2) {
                    assert!(w[0].0.canonical_cmp(&w[1].0).is_lt());
                }
                // The cheap multiplicity path agrees with the full profile.
                assert_eq!(max_multiplicity(&f).unwrap(), prof.max_multiplicity());
            }
        }
    }

    #[test]
    fn squarefree_agrees_with_trial_division() {
        // Oracle: f is squarefree iff no g^2 divides f, checked by scanning
        // all monic g of degree 1..deg/2.
        for q in [2u32, 3] {
            let field = gf(q);
            for deg in 2..=7usize {
                for f in all_monic(&field, deg) {
                    let mut divisible_by_square = false;
                    'outer: for e in 1..=deg / 2 {
                        for g in all_monic(&field, e) {
                            if g.pow(2).divides(&f).unwrap() {
                                divisible_by_square = true;
                                break 'outer;
                            }
                        }
                    }
                    assert_eq!(
                        is_k_free(&f, 2).unwrap(),
                        !divisible_by_square,
                        "q={q} f={}",
                        f.to_text()
                    );
                }
            }
        }
    }

    #[test]
    fn squarefree_density_is_exact() {
        // Among monic polynomials of degree n >= 2, exactly q^n - q^(n-1) are
        // squarefree.
        for q in [2u32, 3] {
            let field = gf(q);
            for n in 2..=8usize {
                let total = (q as u64).pow(n as u32);
                let free = all_monic(&field, n).filter(|f| is_k_free(f, 2).unwrap()).count() as u64;
                assert_eq!(free, total - total / q as u64, "q={q} n={n}");
            }
        }
    }

    #[test]
    fn multiplicity_matches_is_k_free() {
        let f4 = gf(4);
        let g = poly(&f4, "21").pow(3).mul(&poly(&f4, "11"));
        for k in 2..=5 {
            assert_eq!(is_k_free(&g, k).unwrap(), max_multiplicity(&g).unwrap() < k);
        }
    }
}
