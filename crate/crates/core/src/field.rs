//! Arithmetic in GF(q), q = p^f <= 2^16, in a fixed polynomial-basis
//! representation.
//!
//! A [`Field`] is an immutable, cheaply clonable handle. Elements are vectors
//! of f residues mod p (the coordinates with respect to the basis 1, x, ...,
//! x^(f-1) of GF(p)[x] modulo the field's defining polynomial). Internally an
//! element is packed into a single integer code `sum coords[i] * p^i`, and
//! multiplication goes through discrete-log tables, but the public contract
//! is entirely in terms of coordinates.
//!
//! The defining modulus for f > 1 is the lexicographically smallest monic
//! irreducible of degree f over GF(p), coefficients compared low-to-high as
//! base-p digits. This makes every field, and hence every downstream
//! certificate and golden output, deterministic across runs.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Packed element code: `sum coords[i] * p^i`, always `< q`.
pub(crate) type Code = u32;

struct FieldRepr {
    p: u32,
    f: u32,
    q: u32,
    /// Coefficients of the defining polynomial over GF(p), ascending, length f+1.
    modulus: Vec<u32>,
    /// exp[i] = g^i for a fixed generator g, i in 0..2(q-1).
    exp: Vec<u32>,
    /// log[c] for c in 1..q; log[0] is a sentinel.
    log: Vec<u32>,
    /// Additive inverse per code.
    neg: Vec<u32>,
    /// Full addition table for small fields (q <= 256), flattened q x q;
    /// empty otherwise.
    add_table: Vec<u32>,
    /// Exponent p^(f-1) used to invert the Frobenius map.
    pth_root_exp: u64,
}

/// A finite field GF(p^f) with p^f <= 2^16.
#[derive(Clone)]
pub struct Field {
    repr: Arc<FieldRepr>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.repr, &other.repr)
            || (self.repr.p == other.repr.p && self.repr.f == other.repr.f)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "GF({}^{})", self.repr.p, self.repr.f)
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u32;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

// ---- GF(p)[x] helpers on raw digit vectors, used only during construction ----

fn ptrim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pmul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai as u64 * bj as u64) % p as u64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    ptrim(&mut out);
    out
}

fn prem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    debug_assert!(!m.is_empty());
    let mut r: Vec<u32> = a.to_vec();
    ptrim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = pinv_scalar(m[dm], p);
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = (r[dr] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &mi) in m.iter().enumerate() {
            let idx = dr - dm + i;
            let sub = c as u64 * mi as u64 % p as u64;
            r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        ptrim(&mut r);
    }
    r
}

fn pgcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    ptrim(&mut a);
    ptrim(&mut b);
    while !b.is_empty() {
        let r = prem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn pinv_scalar(c: u32, p: u32) -> u32 {
    // c^(p-2) mod p
    let mut base = c as u64 % p as u64;
    let mut e = p as u64 - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn ppow_mod(a: &[u32], e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut base = prem(a, m, p);
    let mut acc = vec![1u32];
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = prem(&pmul(&acc, &base, p), m, p);
        }
        base = prem(&pmul(&base, &base, p), m, p);
        e >>= 1;
    }
    acc
}

/// Irreducibility over GF(p) of a monic polynomial given as a digit vector.
fn pirreducible(m: &[u32], p: u32) -> bool {
    let d = m.len() - 1;
    if d == 1 {
        return true;
    }
    // x^(p^i) mod m, checking gcd(m, x^(p^i) - x) for i <= d/2.
    let mut r = vec![0u32, 1];
    for _ in 1..=d / 2 {
        r = ppow_mod(&r, p as u64, m, p);
        let mut diff = r.clone();
        while diff.len() < 2 {
            diff.push(0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        ptrim(&mut diff);
        let g = pgcd(m, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn code_to_digits(code: u32, p: u32, f: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(f as usize);
    let mut c = code;
    for _ in 0..f {
        v.push(c % p);
        c /= p;
    }
    v
}

fn digits_to_code(digits: &[u32], p: u32) -> u32 {
    let mut code = 0u32;
    for &d in digits.iter().rev() {
        code = code * p + d;
    }
    code
}

impl Field {
    /// Constructs GF(p^f). The defining modulus is the lexicographically
    /// smallest monic irreducible of degree f over GF(p); for f = 1 it is x.
    pub fn new(p: u32, f: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if f == 0 {
            return Err(Error::ZeroExtensionDegree);
        }
        let q = (0..f).try_fold(1u32, |acc, _| {
            acc.checked_mul(p).filter(|&v| v <= 1 << 16)
        });
        let q = q.ok_or(Error::FieldTooLarge { p, f })?;

        let modulus = if f == 1 {
            vec![0, 1]
        } else {
            Self::smallest_irreducible_modulus(p, f)
        };

        let mut repr = FieldRepr {
            p,
            f,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
            pth_root_exp: (p as u64).pow(f - 1),
        };
        repr.build_tables();
        Ok(Field { repr: Arc::new(repr) })
    }

    /// Constructs the field of order q, factoring q as p^f. Errors when q is
    /// not a prime power.
    pub fn of_order(q: u32) -> Result<Field> {
        if q < 2 {
            return Err(Error::invalid(format!("{q} is not a prime power")));
        }
        let mut p = 2;
        while !is_prime(p) || q % p != 0 {
            p += 1;
        }
        let mut f = 0;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            f += 1;
        }
        if rest != 1 {
            return Err(Error::invalid(format!("{q} is not a prime power")));
        }
        Field::new(p, f)
    }

    fn smallest_irreducible_modulus(p: u32, f: u32) -> Vec<u32> {
        let pf = (p as u64).pow(f);
        for t in 0..pf {
            let mut digits = Vec::with_capacity(f as usize + 1);
            let mut c = t;
            for _ in 0..f {
                digits.push((c % p as u64) as u32);
                c /= p as u64;
            }
            digits.push(1);
            if pirreducible(&digits, p) {
                return digits;
            }
        }
        unreachable!("an irreducible of every degree exists over GF(p)")
    }

    fn mul_codes_nolut(repr: &FieldRepr, a: u32, b: u32) -> u32 {
        let da = code_to_digits(a, repr.p, repr.f);
        let db = code_to_digits(b, repr.p, repr.f);
        let prod = prem(&pmul(&da, &db, repr.p), &repr.modulus, repr.p);
        digits_to_code(&prod, repr.p)
    }

    pub(crate) fn add_raw(&self, a: Code, b: Code) -> Code {
        let r = &self.repr;
        if r.p == 2 {
            return a ^ b;
        }
        if !r.add_table.is_empty() {
            return r.add_table[(a * r.q + b) as usize];
        }
        if r.f == 1 {
            let s = a + b;
            return if s >= r.p { s - r.p } else { s };
        }
        Self::add_digits(r.p, a, b)
    }

    fn add_digits(p: u32, a: Code, b: Code) -> Code {
        let mut out = 0u32;
        let mut mul = 1u32;
        let (mut a, mut b) = (a, b);
        while a != 0 || b != 0 {
            let s = a % p + b % p;
            let s = if s >= p { s - p } else { s };
            out += s * mul;
            mul *= p;
            a /= p;
            b /= p;
        }
        out
    }

    pub(crate) fn neg_raw(&self, a: Code) -> Code {
        self.repr.neg[a as usize]
    }

    pub(crate) fn sub_raw(&self, a: Code, b: Code) -> Code {
        self.add_raw(a, self.neg_raw(b))
    }

    pub(crate) fn mul_raw(&self, a: Code, b: Code) -> Code {
        if a == 0 || b == 0 {
            return 0;
        }
        let r = &self.repr;
        r.exp[(r.log[a as usize] + r.log[b as usize]) as usize]
    }

    pub(crate) fn inv_raw(&self, a: Code) -> Option<Code> {
        if a == 0 {
            return None;
        }
        let r = &self.repr;
        Some(r.exp[(r.q - 1 - r.log[a as usize]) as usize])
    }

    pub(crate) fn div_raw(&self, a: Code, b: Code) -> Option<Code> {
        self.inv_raw(b).map(|bi| self.mul_raw(a, bi))
    }

    /// a^e with the convention pow(0, 0) = 1.
    pub(crate) fn pow_raw(&self, a: Code, e: u64) -> Code {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let r = &self.repr;
        let ord = (r.q - 1) as u64;
        let e = e % ord;
        let idx = (r.log[a as usize] as u64 * e) % ord;
        r.exp[idx as usize]
    }

    /// The unique p-th root, i.e. the inverse of the Frobenius map.
    pub(crate) fn pth_root_raw(&self, a: Code) -> Code {
        self.pow_raw(a, self.repr.pth_root_exp)
    }

    /// Embeds an integer via m -> (m mod p) * 1.
    pub(crate) fn from_int_raw(&self, m: u64) -> Code {
        (m % self.repr.p as u64) as Code
    }

    pub fn p(&self) -> u32 {
        self.repr.p
    }

    pub fn f(&self) -> u32 {
        self.repr.f
    }

    pub fn q(&self) -> u32 {
        self.repr.q
    }

    /// Coefficients of the defining polynomial over GF(p), ascending degree.
    pub fn modulus_coeffs(&self) -> &[u32] {
        &self.repr.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), code: 0 }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { field: self.clone(), code: 1 }
    }

    /// Element from its f coordinates (each `< p`, ascending basis order).
    pub fn element_from_coords(&self, coords: &[u32]) -> Result<FieldElement> {
        if coords.len() != self.repr.f as usize {
            return Err(Error::invalid(format!(
                "expected {} coordinates, got {}",
                self.repr.f,
                coords.len()
            )));
        }
        if let Some(c) = coords.iter().find(|&&c| c >= self.repr.p) {
            return Err(Error::invalid(format!("coordinate {c} is not below p = {}", self.repr.p)));
        }
        Ok(FieldElement { field: self.clone(), code: digits_to_code(coords, self.repr.p) })
    }

    /// Element from its packed code `sum coords[i] * p^i`.
    pub fn element_from_code(&self, code: u32) -> Result<FieldElement> {
        if code >= self.repr.q {
            return Err(Error::invalid(format!("code {code} is not below q = {}", self.repr.q)));
        }
        Ok(FieldElement { field: self.clone(), code })
    }

    /// All q elements, in code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.repr.q).map(move |c| FieldElement { field: self.clone(), code: c })
    }
}

impl FieldRepr {
    fn build_tables(&mut self) {
        let q = self.q;
        self.neg = (0..q)
            .map(|c| {
                let mut out = 0u32;
                let mut mul = 1u32;
                let mut c = c;
                while c != 0 {
                    let d = c % self.p;
                    let nd = if d == 0 { 0 } else { self.p - d };
                    out += nd * mul;
                    mul *= self.p;
                    c /= self.p;
                }
                out
            })
            .collect();

        let ord = q - 1;
        self.log = vec![u32::MAX; q as usize];
        self.exp = vec![0u32; 2 * ord.max(1) as usize];
        'search: for cand in 1..q {
            let mut cur = cand;
            let mut seen = 0u32;
            loop {
                seen += 1;
                if cur == 1 {
                    break;
                }
                if seen > ord {
                    continue 'search;
                }
                cur = Field::mul_codes_nolut(self, cur, cand);
            }
            if seen == ord {
                let mut cur = 1u32;
                for i in 0..ord {
                    self.exp[i as usize] = cur;
                    self.log[cur as usize] = i;
                    cur = Field::mul_codes_nolut(self, cur, cand);
                }
                for i in 0..ord {
                    self.exp[(ord + i) as usize] = self.exp[i as usize];
                }
                return;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }
}

/// An element of a [`Field`], carrying its field for checked arithmetic.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    code: Code,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Coordinates with respect to the polynomial basis, length f.
    pub fn coords(&self) -> Vec<u32> {
        code_to_digits(self.code, self.field.p(), self.field.f())
    }

    /// Packed code `sum coords[i] * p^i`.
    pub fn code(&self) -> u32 {
        self.code
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    pub fn is_one(&self) -> bool {
        self.code == 1
    }

    fn same_field(&self, rhs: &Self) -> Result<()> {
        if self.field == rhs.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(Self { field: self.field.clone(), code: self.field.add_raw(self.code, rhs.code) })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(Self { field: self.field.clone(), code: self.field.sub_raw(self.code, rhs.code) })
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(Self { field: self.field.clone(), code: self.field.mul_raw(self.code, rhs.code) })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        let code = self.field.div_raw(self.code, rhs.code).ok_or(Error::DivisionByZero)?;
        Ok(Self { field: self.field.clone(), code })
    }

    pub fn inv(&self) -> Result<Self> {
        let code = self.field.inv_raw(self.code).ok_or(Error::DivisionByZero)?;
        Ok(Self { field: self.field.clone(), code })
    }

    pub fn neg(&self) -> Self {
        Self { field: self.field.clone(), code: self.field.neg_raw(self.code) }
    }

    /// a^e, with pow(0, 0) = 1.
    pub fn pow(&self, e: u64) -> Self {
        Self { field: self.field.clone(), code: self.field.pow_raw(self.code, e) }
    }

    /// The unique p-th root (inverse Frobenius), computed as a^(p^(f-1)).
    pub fn pth_root(&self) -> Self {
        Self { field: self.field.clone(), code: self.field.pth_root_raw(self.code) }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.code == other.code
    }
}

impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}@{:?}", self.code, self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.q() <= 10 {
            write!(out, "{}", self.code)
        } else {
            let coords = self.coords();
            let parts: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
            write!(out, "{}", parts.join("."))
        }
    }
}
