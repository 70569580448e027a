//! Dense univariate polynomials over GF(q).
//!
//! `Poly` stores coefficients in ascending degree order as packed element
//! codes. Invariant: the vector is either empty (the zero polynomial) or the
//! last coefficient is nonzero, so `degree()` is `None` exactly for zero and
//! the sentinel sorts below every integer.
//!
//! Beyond ring arithmetic this module carries the characteristic-p structure
//! used throughout the crate: iterated formal derivatives, p-th roots of
//! polynomials in F_q[x^p], the coefficient-pattern subspaces D_q^j (all
//! coefficients at indices = j mod p vanish), and the monomial-wise
//! antiderivative defined on D_q^(p-1).
//!
//! Text encoding: coefficients are written low-to-high. When q <= 10 each
//! coefficient is a single digit (its packed code), e.g. "1101" is x^3 + x + 1
//! over GF(2). Otherwise coefficients are comma-separated coordinate tuples
//! with '.' between coordinates, e.g. "2.1,0.0,2.2" over GF(25). The zero
//! polynomial is "0" in both encodings.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Code, Field, FieldElement};

/// A dense univariate polynomial over a [`Field`], in canonical form.
#[derive(Clone)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Code>,
}

/// The coefficient pattern D_q^j: membership means the coefficient of x^i
/// vanishes whenever i = j (mod p).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoeffPattern {
    j: u32,
}

impl CoeffPattern {
    pub fn new(j: u32) -> CoeffPattern {
        CoeffPattern { j }
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    /// The pattern D_q^(p-1) that every first derivative lands in.
    pub fn derivative_target(field: &Field) -> CoeffPattern {
        CoeffPattern { j: field.p() - 1 }
    }
}

impl Poly {
    // ---- Constructors ----

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: vec![1] }
    }

    pub fn x(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: vec![0, 1] }
    }

    /// c * x^deg; zero when c is zero.
    pub fn monomial(c: &FieldElement, deg: usize) -> Poly {
        let field = c.field().clone();
        if c.is_zero() {
            return Poly::zero(&field);
        }
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c.code();
        Poly { field, coeffs }
    }

    pub fn from_elements(field: &Field, coeffs: Vec<FieldElement>) -> Result<Poly> {
        let mut codes = Vec::with_capacity(coeffs.len());
        for c in &coeffs {
            if c.field() != field {
                return Err(Error::FieldMismatch);
            }
            codes.push(c.code());
        }
        Ok(Poly::from_raw(field.clone(), codes))
    }

    /// Coefficients given as packed codes, ascending degree.
    pub fn from_codes(field: &Field, codes: &[u32]) -> Result<Poly> {
        if let Some(&c) = codes.iter().find(|&&c| c >= field.q()) {
            return Err(Error::invalid(format!("coefficient code {c} is not below q")));
        }
        Ok(Poly::from_raw(field.clone(), codes.to_vec()))
    }

    pub(crate) fn from_raw(field: Field, mut coeffs: Vec<Code>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    // ---- Queries ----

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Degree, `None` for the zero polynomial. `Option`'s ordering puts the
    /// zero polynomial's degree below every integer.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.field.element_from_code(self.coeff_code(i)).expect("stored codes are in range")
    }

    /// Packed code of the coefficient of x^i (0 beyond the degree).
    pub fn coeff_code(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub(crate) fn codes(&self) -> &[Code] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<FieldElement> {
        self.coeffs.last().map(|&c| self.field.element_from_code(c).unwrap())
    }

    fn assert_same_field(&self, rhs: &Poly) {
        assert!(self.field == rhs.field, "polynomials over different fields");
    }

    /// Total order: by degree, then by coefficients compared high-to-low,
    /// which equals comparing the packed base-q digit encodings as integers.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.assert_same_field(other);
        match self.coeffs.len().cmp(&other.coeffs.len()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for i in (0..self.coeffs.len()).rev() {
            match self.coeffs[i].cmp(&other.coeffs[i]) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    // ---- Ring arithmetic ----

    pub fn add(&self, rhs: &Poly) -> Poly {
        self.assert_same_field(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.field.add_raw(self.coeff_code(i), rhs.coeff_code(i)));
        }
        Poly::from_raw(self.field.clone(), out)
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.assert_same_field(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.field.sub_raw(self.coeff_code(i), rhs.coeff_code(i)));
        }
        Poly::from_raw(self.field.clone(), out)
    }

    pub fn neg(&self) -> Poly {
        let out = self.coeffs.iter().map(|&c| self.field.neg_raw(c)).collect();
        Poly::from_raw(self.field.clone(), out)
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        self.assert_same_field(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![0 as Code; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                out[i + j] = self.field.add_raw(out[i + j], self.field.mul_raw(a, b));
            }
        }
        Poly::from_raw(self.field.clone(), out)
    }

    /// Multiplication by a scalar code.
    pub(crate) fn scale_raw(&self, c: Code) -> Poly {
        if c == 0 {
            return Poly::zero(&self.field);
        }
        let out = self.coeffs.iter().map(|&a| self.field.mul_raw(a, c)).collect();
        Poly::from_raw(self.field.clone(), out)
    }

    pub fn scale(&self, c: &FieldElement) -> Result<Poly> {
        if c.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        Ok(self.scale_raw(c.code()))
    }

    /// Scalar multiple making the polynomial monic; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&1) => self.clone(),
            Some(&lead) => self.scale_raw(self.field.inv_raw(lead).expect("nonzero lead")),
        }
    }

    /// Division with remainder: (quotient, remainder) with
    /// deg(remainder) < deg(divisor). The divisor need not be monic.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.assert_same_field(divisor);
        if divisor.is_zero() {
            return Err(Error::ZeroPolyDivision);
        }
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(&self.field), self.clone()));
        }
        let field = &self.field;
        let lead_inv = field.inv_raw(*divisor.coeffs.last().unwrap()).unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0 as Code; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = field.mul_raw(rem[top], lead_inv);
            if c == 0 {
                continue;
            }
            quot[top - dd] = c;
            for (i, &m) in divisor.coeffs.iter().enumerate() {
                let idx = top - dd + i;
                rem[idx] = field.sub_raw(rem[idx], field.mul_raw(c, m));
            }
        }
        rem.truncate(dd);
        Ok((Poly::from_raw(field.clone(), quot), Poly::from_raw(field.clone(), rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divrem(divisor)?.1)
    }

    pub fn divides(&self, other: &Poly) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// Monic greatest common divisor; gcd(f, 0) is the monic multiple of f.
    pub fn gcd(&self, rhs: &Poly) -> Poly {
        self.assert_same_field(rhs);
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, s, t) with s*self + t*rhs = g, g monic.
    pub fn xgcd(&self, rhs: &Poly) -> (Poly, Poly, Poly) {
        self.assert_same_field(rhs);
        let field = self.field.clone();
        let (mut r0, mut r1) = (self.clone(), rhs.clone());
        let (mut s0, mut s1) = (Poly::one(&field), Poly::zero(&field));
        let (mut t0, mut t1) = (Poly::zero(&field), Poly::one(&field));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if let Some(lead) = r0.coeffs.last().copied() {
            if lead != 1 {
                let inv = field.inv_raw(lead).unwrap();
                r0 = r0.scale_raw(inv);
                s0 = s0.scale_raw(inv);
                t0 = t0.scale_raw(inv);
            }
        }
        (r0, s0, t0)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// self^e mod m.
    pub fn pow_mod(&self, e: u64, m: &Poly) -> Result<Poly> {
        if m.is_zero() {
            return Err(Error::ZeroPolyDivision);
        }
        let mut acc = Poly::one(&self.field).rem(m)?;
        let mut base = self.rem(m)?;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m)?;
            }
            base = base.mul(&base).rem(m)?;
            e >>= 1;
        }
        Ok(acc)
    }

    // ---- Characteristic-p structure ----

    /// Formal derivative iterated `order` times.
    pub fn derivative(&self, order: usize) -> Poly {
        let mut cur = self.clone();
        for _ in 0..order {
            cur = cur.derivative_once();
        }
        cur
    }

    fn derivative_once(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(&self.field);
        }
        let field = &self.field;
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for i in 1..self.coeffs.len() {
            let scalar = field.from_int_raw(i as u64);
            out.push(field.mul_raw(self.coeffs[i], scalar));
        }
        Poly::from_raw(field.clone(), out)
    }

    /// True iff the coefficient of x^i vanishes whenever i = j (mod p).
    pub fn in_pattern(&self, pattern: CoeffPattern) -> bool {
        let p = self.field.p() as usize;
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, &c)| c == 0 || i % p != pattern.j as usize)
    }

    /// True iff every coefficient of x^i with p not dividing i is zero.
    pub fn in_pth_power_ring(&self) -> bool {
        let p = self.field.p() as usize;
        self.coeffs.iter().enumerate().all(|(i, &c)| c == 0 || i % p == 0)
    }

    /// For f in F_q[x^p], the unique H with H^p = f: the coefficient of x^i
    /// in H is the p-th root in GF(q) of the coefficient of x^(p*i) in f.
    pub fn pth_root(&self) -> Result<Poly> {
        if !self.in_pth_power_ring() {
            return Err(Error::NotAPthPower);
        }
        let p = self.field.p() as usize;
        let mut out = Vec::with_capacity(self.coeffs.len() / p + 1);
        let mut i = 0;
        while i < self.coeffs.len() {
            out.push(self.field.pth_root_raw(self.coeffs[i]));
            i += p;
        }
        Ok(Poly::from_raw(self.field.clone(), out))
    }

    /// The monomial-wise antiderivative a_i (i+1)^{-1} x^{i+1}, defined on
    /// D_q^(p-1); the general antiderivative differs by an element of
    /// F_q[x^p].
    pub fn obvious_antiderivative(&self) -> Result<Poly> {
        let target = CoeffPattern::derivative_target(&self.field);
        if !self.in_pattern(target) {
            return Err(Error::NotInPattern(target.j));
        }
        let field = &self.field;
        let mut out = vec![0 as Code; self.coeffs.len() + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let scalar = field.from_int_raw(i as u64 + 1);
            let inv = field.inv_raw(scalar).expect("i+1 is not divisible by p on D_q^(p-1)");
            out[i + 1] = field.mul_raw(c, inv);
        }
        Ok(Poly::from_raw(field.clone(), out))
    }

    // ---- Text encoding ----

    /// Canonical text encoding (see the module docs).
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        if self.field.q() <= 10 {
            self.coeffs.iter().map(|c| char::from_digit(*c, 10).unwrap()).collect()
        } else {
            let f = self.field.f();
            let p = self.field.p();
            self.coeffs
                .iter()
                .map(|&c| {
                    let mut coords = Vec::with_capacity(f as usize);
                    let mut c = c;
                    for _ in 0..f {
                        coords.push((c % p).to_string());
                        c /= p;
                    }
                    coords.join(".")
                })
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    pub fn parse(field: &Field, text: &str) -> Result<Poly> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty polynomial text".into()));
        }
        if text == "0" {
            return Ok(Poly::zero(field));
        }
        let mut codes = Vec::new();
        if field.q() <= 10 && !text.contains([',', '.']) {
            for ch in text.chars() {
                let d = ch
                    .to_digit(10)
                    .ok_or_else(|| Error::Parse(format!("bad digit {ch:?}")))?;
                if d >= field.q() {
                    return Err(Error::Parse(format!("digit {d} is not below q = {}", field.q())));
                }
                codes.push(d);
            }
        } else {
            for part in text.split(',') {
                let mut code = 0u64;
                let mut mul = 1u64;
                let mut count = 0;
                for coord in part.split('.') {
                    let c: u32 = coord
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad coordinate {coord:?}")))?;
                    if c >= field.p() {
                        return Err(Error::Parse(format!(
                            "coordinate {c} is not below p = {}",
                            field.p()
                        )));
                    }
                    code += c as u64 * mul;
                    mul *= field.p() as u64;
                    count += 1;
                }
                if count > field.f() {
                    return Err(Error::Parse(format!(
                        "coefficient {part:?} has more than f = {} coordinates",
                        field.f()
                    )));
                }
                if code >= field.q() as u64 {
                    return Err(Error::Parse(format!("coefficient {part:?} is out of range")));
                }
                codes.push(code as u32);
            }
        }
        Ok(Poly::from_raw(field.clone(), codes))
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl fmt::Display for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.to_text())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "Poly[{}]", self.to_text())
    }
}

// ---- Raw buffer helpers for hot scan loops ----

/// out = a * b on raw code slices, reusing the output buffer.
pub(crate) fn raw_mul_into(field: &Field, a: &[Code], b: &[Code], out: &mut Vec<Code>) {
    out.clear();
    if a.is_empty() || b.is_empty() {
        return;
    }
    out.resize(a.len() + b.len() - 1, 0);
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj == 0 {
                continue;
            }
            out[i + j] = field.add_raw(out[i + j], field.mul_raw(ai, bj));
        }
    }
}

/// Degree of f mod g for monic g (last code 1), or `None` for a zero
/// remainder; f is copied into the scratch buffer.
pub(crate) fn raw_rem_degree(
    field: &Field,
    f: &[Code],
    g: &[Code],
    scratch: &mut Vec<Code>,
) -> Option<usize> {
    debug_assert_eq!(g.last(), Some(&1), "raw remainder needs a monic divisor");
    let dg = g.len() - 1;
    scratch.clear();
    scratch.extend_from_slice(f);
    if scratch.len() > dg {
        for top in (dg..scratch.len()).rev() {
            let c = scratch[top];
            if c == 0 {
                continue;
            }
            scratch[top] = 0;
            for (i, &gi) in g[..dg].iter().enumerate() {
                if gi == 0 {
                    continue;
                }
                let idx = top - dg + i;
                scratch[idx] = field.sub_raw(scratch[idx], field.mul_raw(c, gi));
            }
        }
    }
    let upper = scratch.len().min(dg);
    scratch[..upper].iter().rposition(|&c| c != 0)
}

// ---- Enumeration helpers ----

/// All monic polynomials of degree d, in canonical (code) order.
pub fn all_monic(field: &Field, d: usize) -> impl Iterator<Item = Poly> + '_ {
    DigitCounter::new(field.q() as u64, d).map(move |digits| {
        let mut codes: Vec<Code> = digits.iter().map(|&c| c as Code).collect();
        codes.push(1);
        Poly::from_raw(field.clone(), codes)
    })
}

/// All polynomials of degree at most h (including zero), in canonical order.
pub fn all_of_degree_at_most(field: &Field, h: usize) -> impl Iterator<Item = Poly> + '_ {
    DigitCounter::new(field.q() as u64, h + 1).map(move |digits| {
        let codes: Vec<Code> = digits.iter().map(|&c| c as Code).collect();
        Poly::from_raw(field.clone(), codes)
    })
}

/// Counts through all base-q digit vectors of a fixed width, low digit
/// fastest, i.e. in increasing order of the packed integer value.
pub(crate) struct DigitCounter {
    q: u64,
    digits: Vec<u64>,
    started: bool,
    done: bool,
}

impl DigitCounter {
    pub(crate) fn new(q: u64, width: usize) -> DigitCounter {
        DigitCounter { q, digits: vec![0; width], started: false, done: false }
    }
}

impl Iterator for DigitCounter {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.digits.clone());
        }
        let mut i = 0;
        loop {
            if i == self.digits.len() {
                self.done = true;
                return None;
            }
            self.digits[i] += 1;
            if self.digits[i] < self.q {
                break;
            }
            self.digits[i] = 0;
            i += 1;
        }
        Some(self.digits.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, f: u32) -> Field {
        Field::new(p, f).unwrap()
    }

    fn poly(field: &Field, text: &str) -> Poly {
        Poly::parse(field, text).unwrap()
    }

    #[test]
    fn char2_factoring_identity() {
        let f2 = gf(2, 1);
        let sq = poly(&f2, "101"); // x^2 + 1
        let lin = poly(&f2, "11"); // x + 1
        assert_eq!(lin.mul(&lin), sq); // (x+1)^2 = x^2 + 1
        assert_eq!(sq.gcd(&lin), lin);
    }

    #[test]
    fn divrem_gf3_example() {
        // Long division oracle by hand: x^3 + 2x + 1 = x * (x^2 + 1) + (x + 1).
        let f3 = gf(3, 1);
        let num = poly(&f3, "1201");
        let den = poly(&f3, "101");
        let (q, r) = num.divrem(&den).unwrap();
        assert_eq!(q, poly(&f3, "01"));
        assert_eq!(r, poly(&f3, "11"));
        assert_eq!(den.mul(&q).add(&r), num);
    }

    #[test]
    fn gcd_with_zero_is_monic_input() {
        let f3 = gf(3, 1);
        let f = poly(&f3, "102"); // 2x^2 + 1, lead 2
        let zero = Poly::zero(&f3);
        let g = f.gcd(&zero);
        assert!(g.is_monic());
        assert_eq!(g, f.monic());
        assert_eq!(zero.gcd(&zero), zero);
    }

    #[test]
    fn division_by_zero_poly() {
        let f2 = gf(2, 1);
        let f = poly(&f2, "11");
        assert!(matches!(f.divrem(&Poly::zero(&f2)), Err(Error::ZeroPolyDivision)));
    }

    #[test]
    fn derivative_examples() {
        let f2 = gf(2, 1);
        // d/dx (x^3 + x^2 + 1) = 3x^2 + 2x = x^2 over GF(2).
        assert_eq!(poly(&f2, "1011").derivative(1), poly(&f2, "001"));
        let f3 = gf(3, 1);
        // d/dx x^3 = 0 over GF(3).
        assert_eq!(poly(&f3, "0001").derivative(1), Poly::zero(&f3));
        // d/dx (x^4 + x^3 + x) = x^2 + 1 over GF(2), which lies in D_2^1.
        let d = poly(&f2, "01011").derivative(1);
        assert_eq!(d, poly(&f2, "101"));
        assert!(d.in_pattern(CoeffPattern::new(1)));
    }

    #[test]
    fn pth_root_examples() {
        let f2 = gf(2, 1);
        assert_eq!(poly(&f2, "101").pth_root().unwrap(), poly(&f2, "11"));
        let f3 = gf(3, 1);
        // Cube root of x^6 + 2x^3 + 1: coefficientwise cube roots at 0, 3, 6.
        let f = poly(&f3, "1002001");
        let root = f.pth_root().unwrap();
        assert_eq!(root.pow(3), f);
        assert_eq!(root, poly(&f3, "121"));
        // Not in F_q[x^p]:
        assert!(matches!(poly(&f3, "11").pth_root(), Err(Error::NotAPthPower)));
    }

    #[test]
    fn antiderivative_examples() {
        let f3 = gf(3, 1);
        assert_eq!(Poly::zero(&f3).obvious_antiderivative().unwrap(), Poly::zero(&f3));
        // h = x over GF(3): antiderivative 2x^2, since inv(2) = 2.
        let h = poly(&f3, "01");
        let h0 = h.obvious_antiderivative().unwrap();
        assert_eq!(h0, poly(&f3, "002"));
        assert_eq!(h0.derivative(1), h);
        // h = x^2 over GF(2): antiderivative x^3.
        let f2 = gf(2, 1);
        assert_eq!(poly(&f2, "001").obvious_antiderivative().unwrap(), poly(&f2, "0001"));
        // x^2 over GF(3) is not in D_3^2.
        assert!(matches!(
            poly(&f3, "001").obvious_antiderivative(),
            Err(Error::NotInPattern(2))
        ));
    }

    #[test]
    fn pattern_membership_examples() {
        let f2 = gf(2, 1);
        let f3 = gf(3, 1);
        for j in 0..2 {
            assert!(Poly::zero(&f2).in_pattern(CoeffPattern::new(j)));
        }
        assert!(poly(&f2, "101").in_pattern(CoeffPattern::new(1)));
        assert!(!poly(&f3, "01001").in_pattern(CoeffPattern::new(1)));
    }

    #[test]
    fn product_rule_and_frobenius_properties() {
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = move |bound: u64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) % bound
        };
        for (p, f) in [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2), (2, 3)] {
            let fld = gf(p, f);
            let q = fld.q() as u64;
            for _ in 0..40 {
                let mut mk = || {
                    let deg = next(9) as usize;
                    let codes: Vec<u32> = (0..=deg).map(|_| next(q) as u32).collect();
                    Poly::from_raw(fld.clone(), codes)
                };
                let a = mk();
                let b = mk();
                // Product rule.
                assert_eq!(
                    a.mul(&b).derivative(1),
                    a.derivative(1).mul(&b).add(&a.mul(&b.derivative(1)))
                );
                // The (p-1)-st derivative lies in F_q[x^p].
                assert!(a.derivative(p as usize - 1).in_pth_power_ring());
                // First derivatives lie in D_q^(p-1).
                assert!(a.derivative(1).in_pattern(CoeffPattern::derivative_target(&fld)));
                // (a + b)^p = a^p + b^p and the p-th root inverts powers.
                let ap = a.pow(p);
                let bp = b.pow(p);
                assert_eq!(a.add(&b).pow(p), ap.add(&bp));
                assert_eq!(ap.pth_root().unwrap(), a);
                // Antiderivative inverts the derivative on D_q^(p-1).
                let d = a.derivative(1);
                assert_eq!(d.obvious_antiderivative().unwrap().derivative(1), d);
                // divrem contract.
                if !b.is_zero() {
                    let (quo, rem) = a.divrem(&b).unwrap();
                    assert_eq!(quo.mul(&b).add(&rem), a);
                    assert!(rem.degree() < b.degree() || rem.is_zero());
                }
            }
        }
    }

    #[test]
    fn canonical_form_is_preserved() {
        let f3 = gf(3, 1);
        let a = poly(&f3, "12");
        let b = a.neg();
        assert!(a.add(&b).is_zero());
        assert_eq!(a.add(&b).degree(), None);
        let c = poly(&f3, "1");
        assert_eq!(a.mul(&c), a);
    }

    #[test]
    fn text_encoding_round_trips() {
        let f2 = gf(2, 1);
        assert_eq!(poly(&f2, "1101").to_text(), "1101");
        assert_eq!(Poly::zero(&f2).to_text(), "0");
        let f25 = gf(5, 2);
        let p = Poly::from_codes(&f25, &[7, 0, 12]).unwrap();
        let text = p.to_text();
        assert_eq!(text, "2.1,0.0,2.2");
        assert_eq!(Poly::parse(&f25, &text).unwrap(), p);
        let f13 = gf(13, 1);
        let p = Poly::from_codes(&f13, &[3, 12, 1]).unwrap();
        assert_eq!(p.to_text(), "3,12,1");
        assert_eq!(Poly::parse(&f13, "3,12,1").unwrap(), p);
    }

    #[test]
    fn enumeration_order_and_count() {
        let f2 = gf(2, 1);
        let quad: Vec<String> = all_monic(&f2, 2).map(|p| p.to_text()).collect();
        assert_eq!(quad, vec!["001", "101", "011", "111"]);
        assert_eq!(all_of_degree_at_most(&f2, 2).count(), 8);
        let f3 = gf(3, 1);
        assert_eq!(all_monic(&f3, 3).count(), 27);
    }

    #[test]
    fn xgcd_bezout_identity() {
        let f5 = gf(5, 1);
        let a = poly(&f5, "141");
        let b = poly(&f5, "23");
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
        assert!(g.is_monic() || g.is_zero());
    }
}
