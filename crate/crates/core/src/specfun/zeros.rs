use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::{OnceLock, RwLock};

use super::bessel::{j_unchecked, jp_unchecked, MAX_ORDER};
use crate::error::{Error, Result};

/// Largest supported zero index.
pub const MAX_INDEX: u32 = 64;

/// First line of the on-disk zero table.
pub const ZERO_TABLE_HEADER: &str = "# crackspec bessel-zeros v1";

/// Target for `|J_ell(value)|` at a returned zero.
pub const ROOT_TOLERANCE: f64 = 1e-12;

/// `j_{ell,k}`, the k-th positive zero of `J_ell`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselZero {
    pub ell: u32,
    pub k: u32,
    pub value: f64,
}

fn cache() -> &'static RwLock<HashMap<(u32, u32), f64>> {
    static CACHE: OnceLock<RwLock<HashMap<(u32, u32), f64>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `j_{ell,k}` for `ell <= 64`, `1 <= k <= 64`. Values are memoised process-wide.
pub fn bessel_zero(ell: u32, k: u32) -> Result<BesselZero> {
    if ell > MAX_ORDER || k == 0 || k > MAX_INDEX {
        return Err(Error::Range(format!(
            "zero j_({ell},{k}) outside supported window ell<={MAX_ORDER}, 1<=k<={MAX_INDEX}"
        )));
    }
    if let Some(&value) = cache().read().expect("zero cache poisoned").get(&(ell, k)) {
        return Ok(BesselZero { ell, k, value });
    }
    let zeros = compute_zeros(ell, k)?;
    let mut guard = cache().write().expect("zero cache poisoned");
    for (i, &z) in zeros.iter().enumerate() {
        guard.insert((ell, i as u32 + 1), z);
    }
    Ok(BesselZero {
        ell,
        k,
        value: zeros[k as usize - 1],
    })
}

/// First `count` zeros of `J_ell`.
///
/// Zeros of integer-order `J` are more than 2.4 apart, so scanning in unit steps
/// from `x = ell` (below the first zero) sees each sign change in its own cell.
fn compute_zeros(ell: u32, count: u32) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(count as usize);
    let mut a = ell as f64;
    let mut fa = j_unchecked(ell, a);
    if ell == 0 {
        a = 0.0;
        fa = 1.0;
    }
    let limit = ell as f64 + 10.0 + 4.0 * count as f64 + 10.0 * (ell as f64).cbrt();
    while out.len() < count as usize {
        let b = a + 1.0;
        if b > limit {
            return Err(Error::Numeric(format!(
                "bracketing j_({ell},{}) failed: scanned up to x={b}",
                out.len() + 1
            )));
        }
        let fb = j_unchecked(ell, b);
        if fa == 0.0 {
            out.push(a);
        } else if fa * fb < 0.0 {
            out.push(refine(ell, a, b, fa));
        }
        a = b;
        fa = fb;
    }
    Ok(out)
}

/// Newton on `J_ell` kept inside `[lo, hi]`, bisection when a step leaves it.
fn refine(ell: u32, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let sign_lo = f_lo.signum();
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = j_unchecked(ell, x);
        if f == 0.0 {
            return x;
        }
        if f.signum() == sign_lo {
            lo = x;
        } else {
            hi = x;
        }
        let fp = jp_unchecked(ell, x);
        let newton = x - f / fp;
        let next = if fp != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 2.0 * f64::EPSILON * x && f.abs() <= ROOT_TOLERANCE {
            return next;
        }
        x = next;
        if hi - lo <= 4.0 * f64::EPSILON * x {
            break;
        }
    }
    x
}

/// Table of zeros `j_{ell,k}` for `ell <= max_ell`, `k <= max_k`, persisted as
/// text records `ell,k,value` with 15 significant digits.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    records: Vec<BesselZero>,
}

impl ZeroTable {
    pub fn compute(max_ell: u32, max_k: u32) -> Result<Self> {
        let mut records = Vec::new();
        for ell in 0..=max_ell {
            bessel_zero(ell, max_k)?;
            for k in 1..=max_k {
                records.push(bessel_zero(ell, k)?);
            }
        }
        Ok(ZeroTable { records })
    }

    pub fn records(&self) -> &[BesselZero] {
        &self.records
    }

    pub fn get(&self, ell: u32, k: u32) -> Option<f64> {
        self.records
            .iter()
            .find(|z| z.ell == ell && z.k == k)
            .map(|z| z.value)
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{ZERO_TABLE_HEADER}")?;
        for z in &self.records {
            writeln!(w, "{},{},{:.14e}", z.ell, z.k, z.value)?;
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        match lines.next() {
            Some(Ok(h)) if h.trim() == ZERO_TABLE_HEADER => {}
            Some(Ok(h)) => {
                return Err(Error::Parse(format!("unexpected zero-table header {h:?}")));
            }
            Some(Err(e)) => return Err(e.into()),
            None => return Err(Error::Parse("empty zero table".into())),
        }
        let mut records = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split(',').collect();
            let bad = || Error::Parse(format!("zero table line {}: {line:?}", lineno + 2));
            if parts.len() != 3 {
                return Err(bad());
            }
            let ell = parts[0].trim().parse().map_err(|_| bad())?;
            let k = parts[1].trim().parse().map_err(|_| bad())?;
            let value = parts[2].trim().parse().map_err(|_| bad())?;
            records.push(BesselZero { ell, k, value });
        }
        Ok(ZeroTable { records })
    }

    /// Seeds the process-wide memo with every record of this table.
    pub fn install(&self) {
        let mut guard = cache().write().expect("zero cache poisoned");
        for z in &self.records {
            guard.insert((z.ell, z.k), z.value);
        }
    }

    /// Reads `path` if it holds a valid table covering the window, otherwise
    /// computes the table and writes it there. The result is installed.
    pub fn load_or_compute(path: &Path, max_ell: u32, max_k: u32) -> Result<Self> {
        if let Ok(file) = std::fs::File::open(path) {
            if let Ok(table) = Self::read_from(std::io::BufReader::new(file)) {
                if table.get(max_ell, max_k).is_some() {
                    table.install();
                    return Ok(table);
                }
            }
        }
        let table = Self::compute(max_ell, max_k)?;
        let file = std::fs::File::create(path)?;
        table.write_to(std::io::BufWriter::new(file))?;
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        // The published table truncates to three decimals.
        let cases = [(0, 1, 2.404), (0, 2, 5.520), (2, 1, 5.135), (1, 1, 3.831), (8, 3, 19.554)];
        for (ell, k, v) in cases {
            let z = bessel_zero(ell, k).unwrap().value;
            assert!(z >= v && z - v < 1e-3, "j_({ell},{k}) = {z}, table {v}");
        }
    }

    #[test]
    fn typo_entry_reads_as_decimal() {
        // The published table prints j_{0,3} as "8,653".
        let z = bessel_zero(0, 3).unwrap().value;
        assert!(z >= 8.653 && z - 8.653 < 1e-3);
    }

    #[test]
    fn residual_below_root_tolerance() {
        for ell in [0, 1, 9, 33, 64] {
            for k in [1, 2, 17, 64] {
                let z = bessel_zero(ell, k).unwrap().value;
                assert!(j_unchecked(ell, z).abs() <= ROOT_TOLERANCE, "ell={ell} k={k}");
            }
        }
    }

    #[test]
    fn window_errors() {
        assert!(bessel_zero(0, 0).is_err());
        assert!(bessel_zero(65, 1).is_err());
        assert!(bessel_zero(0, 65).is_err());
    }

    #[test]
    fn table_roundtrip() {
        let t = ZeroTable::compute(2, 3).unwrap();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(ZERO_TABLE_HEADER));
        assert!(text.contains("0,1,2.40482555769577e0"));
        let back = ZeroTable::read_from(&buf[..]).unwrap();
        for (a, b) in t.records().iter().zip(back.records()) {
            assert_eq!((a.ell, a.k), (b.ell, b.k));
            assert!((a.value - b.value).abs() <= 1e-14 * a.value);
        }
    }

    #[test]
    fn rejects_wrong_header() {
        let err = ZeroTable::read_from(&b"# other v2\n0,1,2.4\n"[..]).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }
}
