//! Enumeration, counting, and ordering of monic irreducible polynomials.
//!
//! Counting goes through Moebius inversion of `sum_{d | n} d pi_q(d) = q^n`,
//! enumeration through an exhaustive scan with a distinct-degree gcd test,
//! and the global ordering is by (degree, canonical code). Enumerated lists
//! can be cached on disk, one file per (q, d):
//!
//! ```text
//! <cache root>/q<q>/irred_d<d>.tbl
//! ```
//!
//! The file starts with a single header line
//! `kfree-irreducibles v1 p=<p> f=<f> modulus=<digits> d=<d> count=<n> checksum=<hex>`
//! followed by `count` fixed-width records, one polynomial per line, each
//! coefficient zero-padded to the decimal width of q-1. A file that fails the
//! header, count, or checksum check is regenerated in place.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{all_monic, Poly};

/// Environment variable consulted for a default cache root.
pub const CACHE_ENV_VAR: &str = "KFREE_CACHE_DIR";

/// Cache root from the environment, if set.
pub fn env_cache_root() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV_VAR).map(PathBuf::from)
}

/// Deterministic irreducibility test: f is irreducible iff it shares no
/// factor with x^(q^i) - x for i up to deg(f)/2.
pub fn is_irreducible(f: &Poly) -> bool {
    let d = match f.degree() {
        None | Some(0) => return false,
        Some(d) => d,
    };
    if d == 1 {
        return true;
    }
    let f = f.monic();
    let field = f.field().clone();
    let x = Poly::x(&field);
    let mut r = x.rem(&f).expect("nonzero modulus");
    for _ in 1..=d / 2 {
        r = r.pow_mod(field.q() as u64, &f).expect("nonzero modulus");
        if !f.gcd(&r.sub(&x)).is_one() {
            return false;
        }
    }
    true
}

/// pi_q(d), the number of monic irreducibles of degree d, by Moebius
/// inversion of `sum_{e | d} e pi_q(e) = q^d`.
pub fn count_irreducibles(field: &Field, d: usize) -> u64 {
    assert!(d >= 1, "degree must be at least 1");
    let q = field.q() as i128;
    let mut total: i128 = 0;
    for e in 1..=d {
        if d % e != 0 {
            continue;
        }
        let mu = moebius((d / e) as u64);
        if mu == 0 {
            continue;
        }
        let mut power: i128 = 1;
        for _ in 0..e {
            power = power.checked_mul(q).expect("q^d overflows the counter");
        }
        total += mu as i128 * power;
    }
    debug_assert!(total > 0 && total % d as i128 == 0);
    (total / d as i128) as u64
}

fn moebius(n: u64) -> i64 {
    let mut n = n;
    let mut factors = 0;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            factors += 1;
        }
        d += 1;
    }
    if n > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Per-j slack of deg(P_j) against log_q j + log_q log_q j + log_q(q - 1).
#[derive(Debug, Clone, Serialize)]
pub struct SlackReport {
    pub q: u32,
    pub j_max: u64,
    /// (j, deg P_j, slack) for 3 <= j <= j_max.
    pub rows: Vec<(u64, usize, f64)>,
    pub max_slack: f64,
}

/// Ordered access to the monic irreducibles over a fixed field, with an
/// optional on-disk cache. Built single-threaded; immutable sharing is fine
/// once the needed degrees are populated.
pub struct IrreducibleTable {
    field: Field,
    cache_root: Option<PathBuf>,
    by_degree: BTreeMap<usize, Vec<Poly>>,
}

impl IrreducibleTable {
    pub fn new(field: &Field) -> IrreducibleTable {
        IrreducibleTable { field: field.clone(), cache_root: None, by_degree: BTreeMap::new() }
    }

    pub fn with_cache_root(field: &Field, root: impl Into<PathBuf>) -> IrreducibleTable {
        IrreducibleTable {
            field: field.clone(),
            cache_root: Some(root.into()),
            by_degree: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// pi_q(d).
    pub fn count(&self, d: usize) -> u64 {
        count_irreducibles(&self.field, d)
    }

    /// The sorted list of monic irreducibles of degree d.
    pub fn enumerate(&mut self, d: usize) -> &[Poly] {
        assert!(d >= 1, "degree must be at least 1");
        if !self.by_degree.contains_key(&d) {
            let list = self.load_or_generate(d);
            debug_assert_eq!(list.len() as u64, self.count(d));
            self.by_degree.insert(d, list);
        }
        &self.by_degree[&d]
    }

    fn generate(&self, d: usize) -> Vec<Poly> {
        all_monic(&self.field, d).filter(is_irreducible).collect()
    }

    fn load_or_generate(&self, d: usize) -> Vec<Poly> {
        let Some(root) = self.cache_root.clone() else {
            return self.generate(d);
        };
        let path = cache_path(&root, &self.field, d);
        if let Ok(list) = self.try_load(&path, d) {
            return list;
        }
        let list = self.generate(d);
        if let Err(err) = self.store(&path, d, &list) {
            // Cache writes are best-effort; the in-memory list is still good.
            eprintln!("warning: could not write {}: {err}", path.display());
        }
        list
    }

    fn record_width(&self, d: usize) -> usize {
        let coeff_width = (self.field.q() - 1).to_string().len();
        (d + 1) * coeff_width
    }

    fn encode_record(&self, p: &Poly, d: usize) -> String {
        let coeff_width = (self.field.q() - 1).to_string().len();
        let mut out = String::with_capacity(self.record_width(d));
        for i in 0..=d {
            out.push_str(&format!("{:0width$}", p.coeff_code(i), width = coeff_width));
        }
        out
    }

    fn decode_record(&self, line: &str, d: usize) -> Result<Poly> {
        let coeff_width = (self.field.q() - 1).to_string().len();
        if line.len() != self.record_width(d) {
            return Err(Error::Parse(format!("bad record width {}", line.len())));
        }
        let mut codes = Vec::with_capacity(d + 1);
        for i in 0..=d {
            let chunk = &line[i * coeff_width..(i + 1) * coeff_width];
            let code: u32 =
                chunk.parse().map_err(|_| Error::Parse(format!("bad record {line:?}")))?;
            codes.push(code);
        }
        Poly::from_codes(&self.field, &codes)
    }

    fn try_load(&self, path: &Path, d: usize) -> Result<Vec<Poly>> {
        let data = fs::read_to_string(path)?;
        let mut lines = data.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty cache file".into()))?;
        let fields = parse_header(header)?;
        if fields.p != self.field.p()
            || fields.f != self.field.f()
            || fields.modulus != modulus_encoding(&self.field)
            || fields.d != d
        {
            return Err(Error::Parse("cache header does not match the field".into()));
        }
        let records: Vec<&str> = lines.collect();
        if records.len() as u64 != fields.count || fields.count != self.count(d) {
            return Err(Error::Parse("cache record count mismatch".into()));
        }
        if fnv1a64(records.iter().flat_map(|l| l.bytes())) != fields.checksum {
            return Err(Error::Parse("cache checksum mismatch".into()));
        }
        let mut out = Vec::with_capacity(records.len());
        for line in records {
            let p = self.decode_record(line, d)?;
            if p.degree() != Some(d) || !p.is_monic() {
                return Err(Error::Parse("cache record is not monic of the right degree".into()));
            }
            out.push(p);
        }
        Ok(out)
    }

    fn store(&self, path: &Path, d: usize, list: &[Poly]) -> Result<()> {
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let records: Vec<String> = list.iter().map(|p| self.encode_record(p, d)).collect();
        let checksum = fnv1a64(records.iter().flat_map(|l| l.bytes()));
        let mut out = fs::File::create(path)?;
        writeln!(
            out,
            "kfree-irreducibles v1 p={} f={} modulus={} d={} count={} checksum={:016x}",
            self.field.p(),
            self.field.f(),
            modulus_encoding(&self.field),
            d,
            list.len(),
            checksum
        )?;
        for rec in &records {
            writeln!(out, "{rec}")?;
        }
        Ok(())
    }

    /// The j-th monic irreducible (1-indexed) in the (degree, code) order.
    pub fn nth(&mut self, j: u64) -> Poly {
        assert!(j >= 1, "irreducibles are 1-indexed");
        let mut skipped = 0u64;
        let mut d = 1usize;
        loop {
            let here = self.count(d);
            if skipped + here >= j {
                let list = self.enumerate(d);
                return list[(j - skipped - 1) as usize].clone();
            }
            skipped += here;
            d += 1;
        }
    }

    /// The first `count` irreducibles in global order.
    pub fn first_n(&mut self, count: u64) -> Vec<Poly> {
        (1..=count).map(|j| self.nth(j)).collect()
    }

    /// Empirical slack of deg(P_j) against the log_q j + log_q log_q j +
    /// log_q(q-1) estimate, for 3 <= j <= j_max. This is a report, not an
    /// assertion: the estimate carries an o(1) term with no explicit constant.
    pub fn slack_report(&mut self, j_max: u64) -> Result<SlackReport> {
        if j_max < 3 {
            return Err(Error::invalid("slack report needs j_max >= 3"));
        }
        let q = self.field.q() as f64;
        let lq = q.ln();
        let mut rows = Vec::with_capacity(j_max as usize - 2);
        let mut max_slack = f64::NEG_INFINITY;
        for j in 3..=j_max {
            let deg = self.nth(j).degree().expect("irreducibles are nonzero");
            let jf = j as f64;
            let estimate = jf.ln() / lq + (jf.ln() / lq).ln() / lq + (q - 1.0).ln() / lq;
            let slack = deg as f64 - estimate;
            max_slack = max_slack.max(slack);
            rows.push((j, deg, slack));
        }
        Ok(SlackReport { q: self.field.q(), j_max, rows, max_slack })
    }
}

fn modulus_encoding(field: &Field) -> String {
    field.modulus_coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(":")
}

fn cache_path(root: &Path, field: &Field, d: usize) -> PathBuf {
    root.join(format!("q{}", field.q())).join(format!("irred_d{d}.tbl"))
}

struct CacheHeader {
    p: u32,
    f: u32,
    modulus: String,
    d: usize,
    count: u64,
    checksum: u64,
}

fn parse_header(line: &str) -> Result<CacheHeader> {
    let mut parts = line.split_whitespace();
    if parts.next() != Some("kfree-irreducibles") || parts.next() != Some("v1") {
        return Err(Error::Parse("unrecognized cache header".into()));
    }
    let mut p = None;
    let mut f = None;
    let mut modulus = None;
    let mut d = None;
    let mut count = None;
    let mut checksum = None;
    for part in parts {
        let (key, value) =
            part.split_once('=').ok_or_else(|| Error::Parse(format!("bad header field {part:?}")))?;
        match key {
            "p" => p = value.parse().ok(),
            "f" => f = value.parse().ok(),
            "modulus" => modulus = Some(value.to_string()),
            "d" => d = value.parse().ok(),
            "count" => count = value.parse().ok(),
            "checksum" => checksum = u64::from_str_radix(value, 16).ok(),
            _ => return Err(Error::Parse(format!("unknown header field {key:?}"))),
        }
    }
    match (p, f, modulus, d, count, checksum) {
        (Some(p), Some(f), Some(modulus), Some(d), Some(count), Some(checksum)) => {
            Ok(CacheHeader { p, f, modulus, d, count, checksum })
        }
        _ => Err(Error::Parse("incomplete cache header".into())),
    }
}

fn fnv1a64(bytes: impl Iterator<Item = u8>) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}
