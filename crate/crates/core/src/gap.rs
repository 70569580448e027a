//! Constructive intervals without k-free polynomials.
//!
//! The construction covers every offset R with deg R <= h by a congruence
//! class Q_j mod P_j^k (irreducibles of degree up to a small cutoff take the
//! zero class and soak up many offsets at once; each surviving offset gets
//! its own congruence), then CRT-solves F = -Q_j (mod P_j^k). Every member
//! of an interval around any monic lift of F is then divisible by some
//! P_j^k, so the interval contains no k-free polynomial. The certificate
//! records the congruence system and is verified independently of the
//! construction, ending in an exhaustive member scan.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::intervals::Interval;
use crate::irreducibles::{is_irreducible, IrreducibleTable};
use crate::poly::{all_of_degree_at_most, Poly};
use crate::powerfree::is_k_free;

/// A verifiable witness that an interval of length h contains no k-free
/// polynomial: congruence assignments (P_j, Q_j), their CRT solution F of
/// degree < deg M, and the modulus M = prod P_j^k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapCertificate {
    field: Field,
    pub k: u32,
    pub h: usize,
    /// (P_j, Q_j) with deg Q_j < k deg P_j.
    pub assignments: Vec<(Poly, Poly)>,
    /// Least-degree CRT representative.
    pub crt_solution: Poly,
    /// prod P_j^k.
    pub modulus: Poly,
}

impl GapCertificate {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// The monic lift of the CRT class used for interval semantics:
    /// (F mod M) + M x^(h+1), monic of degree deg M + h + 1, the smallest
    /// degree exceeding deg M + h. Divisibility by each P_j^k only depends
    /// on the class mod M, so any monic lift works; this is the canonical
    /// choice.
    pub fn promoted_center(&self) -> Poly {
        let reduced = self.crt_solution.rem(&self.modulus).expect("modulus is nonzero");
        let shift = Poly::monomial(&self.field.one(), self.h + 1);
        reduced.add(&self.modulus.mul(&shift))
    }

    /// The certified interval around the promoted center.
    pub fn interval(&self) -> Interval {
        Interval::new(self.promoted_center(), self.h).expect("promoted center is long enough")
    }

    pub fn to_json_string(&self) -> String {
        let file = CertificateFile {
            p: self.field.p(),
            f: self.field.f(),
            k: self.k,
            h: self.h,
            assignments: self
                .assignments
                .iter()
                .map(|(p, q)| [p.to_text(), q.to_text()])
                .collect(),
            crt_solution: self.crt_solution.to_text(),
            modulus: self.modulus.to_text(),
        };
        serde_json::to_string_pretty(&file).expect("certificate serialization cannot fail")
    }

    pub fn from_json_str(text: &str) -> Result<GapCertificate> {
        let file: CertificateFile = serde_json::from_str(text)?;
        let field = Field::new(file.p, file.f)?;
        let mut assignments = Vec::with_capacity(file.assignments.len());
        for [p, q] in &file.assignments {
            assignments.push((Poly::parse(&field, p)?, Poly::parse(&field, q)?));
        }
        Ok(GapCertificate {
            field: field.clone(),
            k: file.k,
            h: file.h,
            assignments,
            crt_solution: Poly::parse(&field, &file.crt_solution)?,
            modulus: Poly::parse(&field, &file.modulus)?,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct CertificateFile {
    p: u32,
    f: u32,
    k: u32,
    h: usize,
    assignments: Vec<[String; 2]>,
    crt_solution: String,
    modulus: String,
}

/// The small-degree cutoff: floor(log_q(h/k)) - 1 when h >= kq, else 0
/// (no small-degree congruences at all).
pub fn small_degree_cutoff(field: &Field, k: u32, h: usize) -> usize {
    let q = field.q() as u128;
    if (h as u128) < k as u128 * q {
        return 0;
    }
    // Largest e with q^e <= h/k, i.e. k q^e <= h.
    let mut e = 0usize;
    let mut power: u128 = 1;
    while k as u128 * power * q <= h as u128 {
        power *= q;
        e += 1;
    }
    e.saturating_sub(1)
}

/// Exact number of offsets R with deg R <= h covered by at least one of the
/// given congruence classes Q_j mod P_j^k, one class per irreducible P_j of
/// degree <= ell: q^(h+1) (1 - prod_{d<=ell} (1 - q^(-kd))^(pi_q(d))), which
/// does not depend on the chosen classes.
pub fn sieve_cover_count(
    field: &Field,
    k: u32,
    h: usize,
    ell: usize,
    residues: &[(Poly, Poly)],
) -> Result<u128> {
    if k < 2 {
        return Err(Error::invalid("sieve needs k >= 2"));
    }
    let q = field.q() as u128;
    if ell > 0 && (k as u128) * q.pow(ell as u32 + 1) > h as u128 {
        return Err(Error::invalid(format!("cutoff {ell} is out of range: need k q^(ell+1) <= h")));
    }
    let mut table = IrreducibleTable::new(field);
    // Validate the residue list: exactly one class per small irreducible.
    let mut expected: Vec<Poly> = Vec::new();
    for d in 1..=ell {
        expected.extend(table.enumerate(d).iter().cloned());
    }
    if residues.len() != expected.len() {
        return Err(Error::invalid(format!(
            "expected {} residue classes, got {}",
            expected.len(),
            residues.len()
        )));
    }
    for (p, r) in residues {
        if !expected.contains(p) {
            return Err(Error::invalid(format!(
                "{} is not an irreducible of degree <= {ell}",
                p.to_text()
            )));
        }
        let cap = p.degree().unwrap() * k as usize;
        if r.degree().map_or(false, |e| e >= cap) {
            return Err(Error::invalid("residue degree must be below k deg P"));
        }
    }

    let total = checked_q_pow(q, h + 1)?;
    // Covered = q^(h+1) - q^(h+1-deg M) * prod (q^(kd) - 1)^(pi_d); the
    // degree bound deg M <= h makes this an exact integer.
    let mut deg_m: usize = 0;
    let mut survivors: u128 = 1;
    for d in 1..=ell {
        let pi = table.count(d);
        deg_m += k as usize * d * pi as usize;
        let factor = q.pow((k as usize * d) as u32) - 1;
        for _ in 0..pi {
            survivors = survivors
                .checked_mul(factor)
                .ok_or_else(|| Error::too_large("sieve survivor product".to_string()))?;
        }
    }
    debug_assert!(deg_m <= h || ell == 0);
    let survivors = survivors
        .checked_mul(checked_q_pow(q, h + 1 - deg_m)?)
        .ok_or_else(|| Error::too_large("sieve survivor count".to_string()))?;
    Ok(total - survivors)
}

fn checked_q_pow(q: u128, e: usize) -> Result<u128> {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(q).ok_or_else(|| Error::too_large(format!("q^{e} exceeds 128 bits")))?;
    }
    Ok(acc)
}

/// Cost accounting for a gap construction: m0 small-degree congruences cover
/// all but m1 offsets, each surviving offset takes one congruence, and the
/// degree budget estimate is delta(m) = k m (log_q m + log_q log_q m +
/// log_q((q-1)/e)).
#[derive(Debug, Clone, Serialize)]
pub struct GapCostEstimate {
    pub q: u32,
    pub k: u32,
    pub h: usize,
    pub ell: usize,
    pub m0: u128,
    pub m1: u128,
    pub m: u128,
    /// Main-term degree budget; the exact bound asserted in tests is the sum
    /// k sum(deg P_j) of the actual construction.
    pub delta_m: f64,
}

impl GapCostEstimate {
    /// Whether the estimated degree budget fits a target degree n.
    pub fn fits_degree(&self, n: u64) -> bool {
        self.delta_m <= n as f64
    }

    /// Whether q^(h+1) <= c n / log_q n, the interval-length condition; the
    /// multiplier must satisfy k c < zeta_q(k).
    pub fn length_condition_holds(&self, n: u64, c: f64) -> Result<bool> {
        let field = Field::of_order(self.q)?;
        let zeta = crate::bounds::zeta_q(&field, self.k)?.to_f64();
        if self.k as f64 * c >= zeta {
            return Err(Error::invalid(format!("need k c < zeta_q(k) = {zeta}, got c = {c}")));
        }
        let qf = self.q as f64;
        let lhs = qf.powi(self.h as i32 + 1);
        Ok(lhs <= c * n as f64 / ((n as f64).ln() / qf.ln()))
    }
}

pub fn gap_cost(field: &Field, k: u32, h: usize) -> Result<GapCostEstimate> {
    let ell = small_degree_cutoff(field, k, h);
    let residues = zero_residues(field, ell);
    let covered = sieve_cover_count(field, k, h, ell, &residues)?;
    let table = IrreducibleTable::new(field);
    let m0: u128 = (1..=ell).map(|d| table.count(d) as u128).sum();
    let m1 = checked_q_pow(field.q() as u128, h + 1)? - covered;
    let m = m0 + m1;
    if m < 3 {
        return Err(Error::invalid("cost estimate needs at least 3 congruences"));
    }
    let q = field.q() as f64;
    let lq = q.ln();
    let mf = m as f64;
    let log_q_m = mf.ln() / lq;
    let delta_m =
        k as f64 * mf * (log_q_m + log_q_m.ln() / lq + ((q - 1.0) / std::f64::consts::E).ln() / lq);
    Ok(GapCostEstimate { q: field.q(), k, h, ell, m0, m1, m, delta_m })
}

fn zero_residues(field: &Field, ell: usize) -> Vec<(Poly, Poly)> {
    let mut table = IrreducibleTable::new(field);
    let mut out = Vec::new();
    for d in 1..=ell {
        for p in table.enumerate(d) {
            out.push((p.clone(), Poly::zero(field)));
        }
    }
    out
}

/// Greedy construction: zero classes for all irreducibles of degree <= ell,
/// one congruence per surviving offset (paired with the next unused
/// irreducible in global order), then a CRT solve for the least-degree F
/// with F = -Q_j (mod P_j^k).
pub fn build_gap_interval(table: &mut IrreducibleTable, k: u32, h: usize) -> Result<GapCertificate> {
    if k < 2 {
        return Err(Error::invalid("gap construction needs k >= 2"));
    }
    let field = table.field().clone();
    let q = field.q() as u128;
    checked_q_pow(q, h + 1)?;
    let ell = small_degree_cutoff(&field, k, h);

    let mut assignments: Vec<(Poly, Poly)> = Vec::new();
    let mut small_powers: Vec<Poly> = Vec::new();
    for d in 1..=ell {
        for p in table.enumerate(d).to_vec() {
            small_powers.push(p.pow(k));
            assignments.push((p, Poly::zero(&field)));
        }
    }
    let m0 = assignments.len() as u64;

    // Surviving offsets in canonical order, each paired with the next unused
    // irreducible.
    let mut next_index = m0 + 1;
    for offset in all_of_degree_at_most(&field, h) {
        let covered = small_powers.iter().any(|pk| pk.divides(&offset).expect("nonzero P^k"));
        if covered {
            continue;
        }
        let p = table.nth(next_index);
        next_index += 1;
        let pk = p.pow(k);
        let residue = offset.rem(&pk)?;
        assignments.push((p, residue));
    }

    // Incremental CRT for F = -Q_j (mod P_j^k).
    let mut solution = Poly::zero(&field);
    let mut modulus = Poly::one(&field);
    for (p, residue) in &assignments {
        let pk = p.pow(k);
        let target = residue.neg().rem(&pk)?;
        let (g, inv, _) = modulus.xgcd(&pk);
        debug_assert!(g.is_one(), "moduli are pairwise coprime");
        let delta = target.sub(&solution.rem(&pk)?).mul(&inv).rem(&pk)?;
        solution = solution.add(&modulus.mul(&delta));
        modulus = modulus.mul(&pk);
        solution = solution.rem(&modulus)?;
    }

    Ok(GapCertificate { field, k, h, assignments, crt_solution: solution, modulus })
}

/// Independent verification of all certificate invariants, ending in an
/// exhaustive scan of the certified interval. Failures are collected, not
/// thrown.
#[derive(Debug, Clone, Serialize)]
pub struct GapVerification {
    pub ok: bool,
    pub failures: Vec<String>,
}

pub fn verify_gap_certificate(cert: &GapCertificate) -> GapVerification {
    let mut failures = Vec::new();
    let field = cert.field.clone();

    // Assignments: monic irreducible moduli, pairwise distinct, residue
    // degrees in range.
    for (i, (p, residue)) in cert.assignments.iter().enumerate() {
        if !p.is_monic() || !is_irreducible(p) {
            failures
                .push(format!("assignment {i}: modulus {} is not monic irreducible", p.to_text()));
        }
        let cap = p.degree().unwrap_or(0) * cert.k as usize;
        if residue.degree().map_or(false, |e| e >= cap) {
            failures.push(format!("assignment {i}: residue degree is not below k deg P"));
        }
    }
    for i in 0..cert.assignments.len() {
        for j in i + 1..cert.assignments.len() {
            if cert.assignments[i].0 == cert.assignments[j].0 {
                failures.push(format!("assignments {i} and {j} share the modulus"));
            }
        }
    }

    // The modulus is the product of the P_j^k.
    let mut product = Poly::one(&field);
    for (p, _) in &cert.assignments {
        product = product.mul(&p.pow(cert.k));
    }
    if product != cert.modulus {
        failures.push("modulus does not equal the product of the P_j^k".to_string());
    }

    // F = -Q_j (mod P_j^k) for every j. F is only determined mod M, so any
    // representative of the class is accepted.
    for (i, (p, residue)) in cert.assignments.iter().enumerate() {
        let pk = p.pow(cert.k);
        let lhs = cert.crt_solution.add(residue);
        match lhs.rem(&pk) {
            Ok(r) if r.is_zero() => {}
            _ => failures.push(format!("assignment {i}: F + Q_j is not divisible by P_j^k")),
        }
    }

    // Cover property: every offset of degree <= h matches some class.
    'offsets: for offset in all_of_degree_at_most(&field, cert.h) {
        for (p, residue) in &cert.assignments {
            let pk = p.pow(cert.k);
            if offset.sub(residue).rem(&pk).map(|r| r.is_zero()).unwrap_or(false) {
                continue 'offsets;
            }
        }
        failures.push(format!("offset {} is covered by no congruence", offset.to_text()));
        break;
    }

    // Exhaustive confirmation on the promoted interval.
    if failures.is_empty() {
        let interval = cert.interval();
        for member in interval.members() {
            match is_k_free(&member, cert.k) {
                Ok(false) => {}
                Ok(true) => {
                    failures.push(format!("member {} is k-free", member.to_text()));
                    break;
                }
                Err(e) => {
                    failures.push(format!("member scan failed: {e}"));
                    break;
                }
            }
        }
    }

    GapVerification { ok: failures.is_empty(), failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intervals::find_k_free;

    fn gf(q: u32) -> Field {
        Field::of_order(q).unwrap()
    }

    #[test]
    fn sieve_count_example() {
        // q=2, k=2, h=8, ell=1: 512 (1 - (3/4)^2) = 224.
        let f2 = gf(2);
        let residues = zero_residues(&f2, 1);
        assert_eq!(sieve_cover_count(&f2, 2, 8, 1, &residues).unwrap(), 224);
        // ell = 0: nothing covered.
        assert_eq!(sieve_cover_count(&f2, 2, 3, 0, &[]).unwrap(), 0);
        // Out-of-range cutoff.
        assert!(sieve_cover_count(&f2, 2, 4, 1, &residues).is_err());
    }

    #[test]
    fn sieve_count_is_residue_independent_and_matches_enumeration() {
        let f2 = gf(2);
        let mut table = IrreducibleTable::new(&f2);
        let k = 2u32;
        let h = 8usize;
        let ell = 1usize;
        let smalls: Vec<Poly> = table.enumerate(1).to_vec();
        // Three different residue choices.
        let choices: Vec<Vec<(Poly, Poly)>> = vec![
            smalls.iter().map(|p| (p.clone(), Poly::zero(&f2))).collect(),
            smalls.iter().map(|p| (p.clone(), Poly::one(&f2))).collect(),
            smalls
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let r = Poly::parse(&f2, if i % 2 == 0 { "11" } else { "01" }).unwrap();
                    (p.clone(), r)
                })
                .collect(),
        ];
        for residues in &choices {
            let count = sieve_cover_count(&f2, k, h, ell, residues).unwrap();
            assert_eq!(count, 224);
            // Direct enumeration oracle.
            let mut covered = 0u128;
            for offset in all_of_degree_at_most(&f2, h) {
                let hit = residues.iter().any(|(p, r)| {
                    let pk = p.pow(k);
                    offset.sub(r).rem(&pk).unwrap().is_zero()
                });
                if hit {
                    covered += 1;
                }
            }
            assert_eq!(covered, count);
        }
    }

    #[test]
    fn build_gap_h0_matches_hand_crt() {
        // q=2, k=2, h=0: offsets {0, 1}; P = {x, x+1}; F = x^2.
        let f2 = gf(2);
        let mut table = IrreducibleTable::new(&f2);
        let cert = build_gap_interval(&mut table, 2, 0).unwrap();
        let ps: Vec<String> = cert.assignments.iter().map(|(p, _)| p.to_text()).collect();
        assert_eq!(ps, vec!["01", "11"]);
        assert_eq!(cert.crt_solution.to_text(), "001"); // x^2
        assert_eq!(cert.modulus.to_text(), "00101"); // x^4 + x^2
        let verdict = verify_gap_certificate(&cert);
        assert!(verdict.ok, "{:?}", verdict.failures);
        // Both members of the certified interval are non-squarefree.
        assert!(find_k_free(&cert.interval(), 2).unwrap().is_none());
    }

    #[test]
    fn build_gap_small_cases_verify() {
        for (q, k, h) in [(2u32, 2u32, 1usize), (3, 3, 0), (2, 3, 1), (3, 2, 1), (5, 2, 0)] {
            let field = gf(q);
            let mut table = IrreducibleTable::new(&field);
            let cert = build_gap_interval(&mut table, k, h).unwrap();
            let verdict = verify_gap_certificate(&cert);
            assert!(verdict.ok, "q={q} k={k} h={h}: {:?}", verdict.failures);
            assert!(find_k_free(&cert.interval(), k).unwrap().is_none());
            // Degree accounting: deg F < sum k deg P_j = deg M.
            let budget: usize =
                cert.assignments.iter().map(|(p, _)| k as usize * p.degree().unwrap()).sum();
            assert_eq!(cert.modulus.degree(), Some(budget));
            assert!(cert.crt_solution.degree() < Some(budget));
        }
    }

    #[test]
    fn tampered_certificates_fail() {
        let f2 = gf(2);
        let mut table = IrreducibleTable::new(&f2);
        let cert = build_gap_interval(&mut table, 2, 1).unwrap();
        assert!(verify_gap_certificate(&cert).ok);

        // Tamper with one residue: the cover property must break.
        let mut tampered = cert.clone();
        tampered.assignments[2].1 = tampered.assignments[2].1.add(&Poly::one(&f2));
        let verdict = verify_gap_certificate(&tampered);
        assert!(!verdict.ok);

        // Shifting F by the modulus stays in the CRT class and verifies.
        let mut shifted = cert.clone();
        shifted.crt_solution = shifted.crt_solution.add(&shifted.modulus);
        let verdict = verify_gap_certificate(&shifted);
        assert!(verdict.ok, "{:?}", verdict.failures);
    }

    #[test]
    fn certificate_json_round_trip() {
        let f3 = gf(3);
        let mut table = IrreducibleTable::new(&f3);
        let cert = build_gap_interval(&mut table, 3, 0).unwrap();
        let text = cert.to_json_string();
        let back = GapCertificate::from_json_str(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_json_string(), text);
    }

    #[test]
    fn cover_property_by_direct_enumeration() {
        for (q, k, h) in [(2u32, 2u32, 2usize), (3, 2, 1), (4, 2, 1), (5, 3, 1)] {
            let field = gf(q);
            let mut table = IrreducibleTable::new(&field);
            let cert = build_gap_interval(&mut table, k, h).unwrap();
            for offset in all_of_degree_at_most(&field, h) {
                let hit = cert
                    .assignments
                    .iter()
                    .any(|(p, r)| offset.sub(r).rem(&p.pow(k)).unwrap().is_zero());
                assert!(hit, "offset {} uncovered", offset.to_text());
            }
        }
    }

    #[test]
    fn cost_estimate_example() {
        // q=2, k=2, h=8: ell=1, m0=2, m1 = 512-224 = 288, m = 290.
        let f2 = gf(2);
        let cost = gap_cost(&f2, 2, 8).unwrap();
        assert_eq!(cost.ell, 1);
        assert_eq!(cost.m0, 2);
        assert_eq!(cost.m1, 288);
        assert_eq!(cost.m, 290);
        assert!(cost.delta_m > 0.0 && cost.delta_m.is_finite());
        // Monotonicity of m in h.
        let mut prev = 0u128;
        for h in 2..=12 {
            let c = gap_cost(&f2, 2, h).unwrap();
            assert!(c.m >= prev, "h={h}");
            prev = c.m;
        }
        // The length condition gate rejects c with k c >= zeta.
        assert!(cost.length_condition_holds(100, 2.0).is_err());
        assert!(cost.length_condition_holds(1 << 20, 0.9).is_ok());
    }

    #[test]
    fn cutoff_rule() {
        let f2 = gf(2);
        // h < kq = 4 gives ell = 0; h = 8 >= 4 gives floor(log2(4)) - 1 = 1.
        assert_eq!(small_degree_cutoff(&f2, 2, 3), 0);
        assert_eq!(small_degree_cutoff(&f2, 2, 4), 0);
        assert_eq!(small_degree_cutoff(&f2, 2, 8), 1);
        assert_eq!(small_degree_cutoff(&f2, 2, 16), 2);
        let f3 = gf(3);
        assert_eq!(small_degree_cutoff(&f3, 2, 17), 0);
        assert_eq!(small_degree_cutoff(&f3, 2, 18), 1);
    }
}
