//! Short intervals I_q(F, h) = { Q : deg(F - Q) <= h } and the exhaustive
//! counts and scans defined on them.
//!
//! An interval is determined by the coefficients of its center above index h,
//! so the canonical representative has all low coefficients zeroed, and two
//! intervals are equal exactly when their canonical centers agree. Members
//! are enumerated in canonical (packed code) order, which makes every
//! counterexample and every "first k-free member" deterministic.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{raw_mul_into, raw_rem_degree, DigitCounter, Poly};
use crate::powerfree::{is_k_free, max_multiplicity};

/// The short interval I_q(F, h), with F monic of degree n and 0 <= h < n.
/// Contains q^(h+1) members, all monic of degree n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    center: Poly,
    h: usize,
}

impl Interval {
    pub fn new(center: Poly, h: usize) -> Result<Interval> {
        let n = center.degree().ok_or(Error::ZeroPolynomial)?;
        if !center.is_monic() {
            return Err(Error::invalid("interval centers must be monic"));
        }
        if h >= n {
            return Err(Error::invalid(format!("interval length {h} must be below deg F = {n}")));
        }
        Ok(Interval { center, h })
    }

    pub fn center(&self) -> &Poly {
        &self.center
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn degree(&self) -> usize {
        self.center.degree().expect("centers are nonzero")
    }

    pub fn field(&self) -> &Field {
        self.center.field()
    }

    /// q^(h+1).
    pub fn size(&self) -> u128 {
        (self.field().q() as u128).pow(self.h as u32 + 1)
    }

    /// The member with all coefficients at indices 0..=h zeroed; intervals
    /// coincide iff their canonical centers do.
    pub fn canonical_center(&self) -> Poly {
        let mut codes = self.center.codes().to_vec();
        for c in codes.iter_mut().take(self.h + 1) {
            *c = 0;
        }
        Poly::from_raw(self.field().clone(), codes)
    }

    pub fn contains(&self, q: &Poly) -> bool {
        if q.field() != self.field() {
            return false;
        }
        let diff = self.center.sub(q);
        diff.degree().map_or(true, |d| d <= self.h)
    }

    /// Members in canonical order.
    pub fn members(&self) -> impl Iterator<Item = Poly> + '_ {
        let base = self.canonical_center();
        let q = self.field().q() as u64;
        DigitCounter::new(q, self.h + 1).map(move |digits| {
            let mut codes = base.codes().to_vec();
            for (i, &d) in digits.iter().enumerate() {
                codes[i] = d as u32;
            }
            Poly::from_raw(base.field().clone(), codes)
        })
    }
}

/// Exact number of members divisible by a monic g of degree d: zero when no
/// multiple lies in the interval, otherwise q^(h-d+1) if d <= h and 1 if
/// d > h.
pub fn count_multiples(iv: &Interval, g: &Poly) -> Result<u128> {
    if !g.is_monic() {
        return Err(Error::invalid("count_multiples needs a monic divisor"));
    }
    let d = g.degree().expect("monic implies nonzero");
    if d <= iv.h {
        return Ok((iv.field().q() as u128).pow((iv.h - d + 1) as u32));
    }
    let r = iv.center.rem(g)?;
    Ok(if r.degree().map_or(true, |e| e <= iv.h) { 1 } else { 0 })
}

/// Exact counts from an exhaustive member scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntervalCounts {
    /// Members that are not k-free.
    pub non_k_free: u128,
    /// The complementary count of k-free members.
    pub k_free: u128,
}

pub fn count_non_k_free(iv: &Interval, k: u32) -> Result<IntervalCounts> {
    if k < 2 {
        return Err(Error::invalid("k-free needs k >= 2"));
    }
    let mut bad: u128 = 0;
    for member in iv.members() {
        if !is_k_free(&member, k)? {
            bad += 1;
        }
    }
    Ok(IntervalCounts { non_k_free: bad, k_free: iv.size() - bad })
}

/// The canonically smallest k-free member, or `None` when the interval
/// contains none.
pub fn find_k_free(iv: &Interval, k: u32) -> Result<Option<Poly>> {
    if k < 2 {
        return Err(Error::invalid("k-free needs k >= 2"));
    }
    for member in iv.members() {
        if is_k_free(&member, k)? {
            return Ok(Some(member));
        }
    }
    Ok(None)
}

/// Monic G of degree d whose k-th power divides some member of the interval.
#[derive(Debug, Clone)]
pub struct KthPowerDivisorSet {
    pub k: u32,
    pub d: usize,
    /// Sorted in canonical order.
    pub members: Vec<Poly>,
}

/// Enumeration guard: scanning M_q(d) is refused beyond this many candidates.
pub const ENUMERATION_LIMIT: u128 = 1 << 20;

/// Computes the divisor set by the remainder criterion
/// `deg(F mod G^k) <= h`, scanning all monic G of degree d.
pub fn kth_power_divisors(iv: &Interval, k: u32, d: usize) -> Result<KthPowerDivisorSet> {
    if k < 2 {
        return Err(Error::invalid("k-th power divisors need k >= 2"));
    }
    if d < 1 || k as usize * d > iv.degree() {
        return Err(Error::invalid(format!(
            "need 1 <= d and k*d <= n; got k={k} d={d} n={}",
            iv.degree()
        )));
    }
    let q = iv.field().q() as u128;
    if q.pow(d as u32) > ENUMERATION_LIMIT {
        return Err(Error::too_large(format!("q^d = {}^{d} candidates", iv.field().q())));
    }
    let field = iv.field().clone();
    let qq = field.q();
    let center_codes = iv.center.codes().to_vec();
    let mut members = Vec::new();
    // Tight loop over monic candidates with reusable buffers: build G^k by
    // repeated raw multiplication, then check the remainder degree in place.
    let mut g_codes = vec![0u32; d + 1];
    g_codes[d] = 1;
    let mut power = Vec::new();
    let mut power_next = Vec::new();
    let mut scratch = Vec::new();
    'candidates: loop {
        raw_mul_into(&field, &g_codes, &g_codes, &mut power);
        for _ in 2..k {
            raw_mul_into(&field, &power, &g_codes, &mut power_next);
            std::mem::swap(&mut power, &mut power_next);
        }
        let rem_degree = raw_rem_degree(&field, &center_codes, &power, &mut scratch);
        if rem_degree.map_or(true, |e| e <= iv.h) {
            members.push(Poly::from_raw(field.clone(), g_codes.clone()));
        }
        // Increment the low digits as a base-q counter.
        let mut i = 0;
        loop {
            if i == d {
                break 'candidates;
            }
            g_codes[i] += 1;
            if g_codes[i] < qq {
                break;
            }
            g_codes[i] = 0;
            i += 1;
        }
    }
    Ok(KthPowerDivisorSet { k, d, members })
}

/// Outcome of an exhaustive scan over every interval of shape (n, h).
#[derive(Debug, Clone)]
pub struct CertifyReport {
    pub q: u32,
    pub p: u32,
    pub f: u32,
    pub k: u32,
    pub n: usize,
    pub h: usize,
    pub pass: bool,
    /// Canonical center of the first interval with no k-free member.
    pub counterexample: Option<Poly>,
    pub intervals_scanned: u64,
    pub elapsed_ms: u128,
}

impl CertifyReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "q": self.q,
            "p": self.p,
            "f": self.f,
            "k": self.k,
            "n": self.n,
            "h": self.h,
            "pass": self.pass,
            "counterexample_center": self.counterexample.as_ref().map(|p| p.to_text()),
            "intervals_scanned": self.intervals_scanned,
            "elapsed_ms": self.elapsed_ms,
        })
    }
}

/// Scans the q^(n-h-1) canonical interval representatives (monic, degree n,
/// coefficients 0..=h zero), which partition the monic polynomials of degree
/// n. Passes iff every interval contains a k-free member; otherwise reports
/// the canonically smallest counterexample, independent of sharding.
pub fn certify_all_intervals(field: &Field, n: usize, h: usize, k: u32) -> Result<CertifyReport> {
    if k < 2 {
        return Err(Error::invalid("k-free needs k >= 2"));
    }
    if h < 1 || h + 2 > n {
        return Err(Error::invalid(format!("need 1 <= h <= n-2; got h={h} n={n}")));
    }
    let q = field.q() as u128;
    let reps = q.pow((n - h - 1) as u32);
    if reps > u64::MAX as u128 / 2 {
        return Err(Error::too_large(format!("{reps} interval representatives")));
    }
    let reps = reps as u64;
    let start = Instant::now();

    let chunk = 1024u64.max(reps / 256);
    let starts: Vec<u64> = (0..reps).step_by(chunk as usize).collect();
    let first_bad: Option<u64> = starts
        .par_iter()
        .filter_map(|&lo| {
            let hi = (lo + chunk).min(reps);
            scan_rep_range(field, n, h, k, lo, hi)
        })
        .min();

    let counterexample = first_bad.map(|idx| rep_center(field, n, h, idx));
    Ok(CertifyReport {
        q: field.q(),
        p: field.p(),
        f: field.f(),
        k,
        n,
        h,
        pass: counterexample.is_none(),
        counterexample,
        intervals_scanned: reps,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

fn rep_center(field: &Field, n: usize, h: usize, rep: u64) -> Poly {
    let q = field.q() as u64;
    let mut codes = vec![0u32; n + 1];
    codes[n] = 1;
    let mut rep = rep;
    for code in codes.iter_mut().take(n).skip(h + 1) {
        *code = (rep % q) as u32;
        rep /= q;
    }
    Poly::from_raw(field.clone(), codes)
}

/// Returns the first representative index in [lo, hi) whose interval has no
/// k-free member.
fn scan_rep_range(field: &Field, n: usize, h: usize, k: u32, lo: u64, hi: u64) -> Option<u64> {
    let q = field.q() as u64;
    for rep in lo..hi {
        let mut codes = rep_center(field, n, h, rep).codes().to_vec();
        codes.resize(n + 1, 0);
        let mut found = false;
        'offsets: for digits in DigitCounter::new(q, h + 1) {
            for (i, &d) in digits.iter().enumerate() {
                codes[i] = d as u32;
            }
            let member = Poly::from_raw(field.clone(), codes.clone());
            if max_multiplicity(&member).expect("members are nonzero") < k {
                found = true;
                break 'offsets;
            }
        }
        if !found {
            return Some(rep);
        }
    }
    None
}

/// Result of checking the packing hypothesis and its conclusion on a set of
/// monic degree-d polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PackingCheck {
    /// Every G has at most kappa elements H with deg(G - H) < delta.
    pub hypothesis_holds: bool,
    /// |S| <= kappa * q^(d - delta).
    pub conclusion_holds: bool,
}

impl PackingCheck {
    pub fn holds(&self) -> bool {
        self.hypothesis_holds && self.conclusion_holds
    }
}

/// Pairwise verification of the packing bound: if every G in S has at most
/// kappa elements H with deg(G - H) < delta (G itself included), then
/// |S| <= kappa * q^(d - delta).
pub fn packing_bound_check(set: &[Poly], kappa: u128, delta: f64) -> Result<PackingCheck> {
    let first = set.first().ok_or_else(|| Error::invalid("packing check needs a nonempty set"))?;
    let d = first.degree().ok_or(Error::ZeroPolynomial)?;
    if !(delta > 0.0 && delta <= d as f64) {
        return Err(Error::invalid("packing check needs 0 < delta <= d"));
    }
    for g in set {
        if g.degree() != Some(d) || !g.is_monic() {
            return Err(Error::invalid("packing check needs monic polynomials of equal degree"));
        }
    }
    let mut hypothesis_holds = true;
    'outer: for g in set {
        let mut close = 0u128;
        for h in set {
            let gap = g.sub(h).degree();
            if gap.map_or(true, |e| (e as f64) < delta) {
                close += 1;
                if close > kappa {
                    hypothesis_holds = false;
                    break 'outer;
                }
            }
        }
    }
    let q = first.field().q() as f64;
    let bound = kappa as f64 * q.powf(d as f64 - delta);
    let conclusion_holds = set.len() as f64 <= bound * (1.0 + 1e-12);
    Ok(PackingCheck { hypothesis_holds, conclusion_holds })
}
