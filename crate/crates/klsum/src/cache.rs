//! Append-only result cache for evaluated sums.
//!
//! Sweeps over the modulus are the dominant cost of every experiment, so
//! evaluated sums are persisted as plain-text lines and reloaded on the
//! next run; a crashed or truncated sweep resumes from what it already
//! wrote.
//!
//! # File format
//!
//! One record per line:
//!
//! ```text
//! fingerprint,m,n,c,re,im,term_count
//! ```
//!
//! where `fingerprint` is the canonical multiplier string (e.g.
//! `eta,conj=1,twist=3,k=-1/2,N=3`).  The fingerprint itself contains
//! commas, so lines are parsed from the right: the last six
//! comma-separated fields are `m,n,c,re,im,term_count` (none of which can
//! contain a comma) and everything before them is the fingerprint.
//! `re`/`im` are written with 17 significant digits, which round-trips
//! `f64` exactly — warm-cache reruns are bit-identical to cold runs.
//!
//! Corrupt lines abort loading with [`Error::CacheCorrupt`] naming the
//! 1-based line number; a later record for the same key replaces an
//! earlier one (recomputation appends).

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct CacheKey {
    fingerprint: String,
    m: i64,
    n: i64,
    c: u64,
}

/// A cached sum value: the complex value and the number of summed terms.
/// (Diagnostics that are cheap to recompute — skipped-term counts, phase
/// denominators — are not persisted.)
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CachedSum {
    pub value: Complex64,
    pub term_count: u64,
}

/// In-memory map of evaluated sums, optionally backed by an append-only
/// file.
///
/// Single writer (`&mut self` on [`ResultCache::insert`]); any number of
/// concurrent readers of the same file may load their own copies.
#[derive(Debug)]
pub struct ResultCache {
    map: HashMap<CacheKey, CachedSum>,
    writer: Option<BufWriter<File>>,
    path: Option<PathBuf>,
}

impl ResultCache {
    /// A cache that lives only in memory (tests, one-shot runs).
    pub fn in_memory() -> ResultCache {
        ResultCache {
            map: HashMap::new(),
            writer: None,
            path: None,
        }
    }

    /// Open (or create) a file-backed cache, loading every existing
    /// record.
    ///
    /// # Errors
    ///
    /// [`Error::CacheCorrupt`] on the first malformed line; I/O errors
    /// pass through.
    pub fn open(path: impl AsRef<Path>) -> Result<ResultCache> {
        let path = path.as_ref().to_path_buf();
        let mut map = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for (idx, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let (key, sum) = parse_line(&line).map_err(|detail| Error::CacheCorrupt {
                    path: path.display().to_string(),
                    line: idx + 1,
                    detail,
                })?;
                map.insert(key, sum);
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(ResultCache {
            map,
            writer: Some(BufWriter::new(file)),
            path: Some(path),
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Look up a cached sum.
    pub fn get(&self, fingerprint: &str, m: i64, n: i64, c: u64) -> Option<&CachedSum> {
        // Borrowed lookup without cloning the fingerprint would need a
        // custom key type; sweeps look up once per modulus, so a clone
        // per miss/hit is noise next to the sum evaluation itself.
        let key = CacheKey {
            fingerprint: fingerprint.to_owned(),
            m,
            n,
            c,
        };
        self.map.get(&key)
    }

    /// Record a sum, appending to the backing file (if any).  Re-inserting
    /// a key replaces the in-memory value and appends a superseding line.
    pub fn insert(
        &mut self,
        fingerprint: &str,
        m: i64,
        n: i64,
        c: u64,
        sum: CachedSum,
    ) -> Result<()> {
        let key = CacheKey {
            fingerprint: fingerprint.to_owned(),
            m,
            n,
            c,
        };
        if self.map.get(&key) == Some(&sum) {
            return Ok(()); // identical record already present
        }
        if let Some(w) = self.writer.as_mut() {
            writeln!(
                w,
                "{},{},{},{},{:.16e},{:.16e},{}",
                fingerprint, m, n, c, sum.value.re, sum.value.im, sum.term_count
            )?;
        }
        self.map.insert(key, sum);
        Ok(())
    }

    /// Largest cached modulus for a (fingerprint, m, n) triple — the
    /// resume point of an interrupted sweep.
    pub fn max_cached_c(&self, fingerprint: &str, m: i64, n: i64) -> Option<u64> {
        self.map
            .keys()
            .filter(|k| k.fingerprint == fingerprint && k.m == m && k.n == n)
            .map(|k| k.c)
            .max()
    }

    /// Flush buffered appends to disk.
    pub fn flush(&mut self) -> Result<()> {
        if let Some(w) = self.writer.as_mut() {
            w.flush()?;
        }
        Ok(())
    }
}

impl Drop for ResultCache {
    fn drop(&mut self) {
        if let Some(w) = self.writer.as_mut() {
            let _ = w.flush();
        }
    }
}

fn parse_line(line: &str) -> std::result::Result<(CacheKey, CachedSum), String> {
    // Split from the right: the record's own six numeric fields cannot
    // contain commas; whatever remains is the fingerprint.
    let mut fields: Vec<&str> = line.rsplitn(7, ',').collect();
    if fields.len() != 7 {
        return Err(format!(
            "expected 7 comma-separated fields (fingerprint,m,n,c,re,im,term_count), got {}",
            fields.len()
        ));
    }
    fields.reverse(); // now [fingerprint, m, n, c, re, im, term_count]
    let fingerprint = fields[0];
    if fingerprint.is_empty() {
        return Err("empty fingerprint".to_owned());
    }
    let m: i64 = fields[1]
        .parse()
        .map_err(|e| format!("bad m field {:?}: {e}", fields[1]))?;
    let n: i64 = fields[2]
        .parse()
        .map_err(|e| format!("bad n field {:?}: {e}", fields[2]))?;
    let c: u64 = fields[3]
        .parse()
        .map_err(|e| format!("bad c field {:?}: {e}", fields[3]))?;
    let re: f64 = fields[4]
        .parse()
        .map_err(|e| format!("bad re field {:?}: {e}", fields[4]))?;
    let im: f64 = fields[5]
        .parse()
        .map_err(|e| format!("bad im field {:?}: {e}", fields[5]))?;
    if !re.is_finite() || !im.is_finite() {
        return Err("non-finite value".to_owned());
    }
    let term_count: u64 = fields[6]
        .parse()
        .map_err(|e| format!("bad term_count field {:?}: {e}", fields[6]))?;
    Ok((
        CacheKey {
            fingerprint: fingerprint.to_owned(),
            m,
            n,
            c,
        },
        CachedSum {
            value: Complex64::new(re, im),
            term_count,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FP: &str = "eta,conj=1,twist=3,k=-1/2,N=3";

    #[test]
    fn round_trips_exact_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.txt");
        let v = Complex64::new(0.1234567890123456789, -1.0 / 3.0);
        {
            let mut cache = ResultCache::open(&path).unwrap();
            cache
                .insert(FP, 0, 5, 12, CachedSum { value: v, term_count: 4 })
                .unwrap();
            cache.flush().unwrap();
        }
        let cache = ResultCache::open(&path).unwrap();
        let got = cache.get(FP, 0, 5, 12).unwrap();
        // 17 significant digits round-trip f64 bit-exactly.
        assert_eq!(got.value.re.to_bits(), v.re.to_bits());
        assert_eq!(got.value.im.to_bits(), v.im.to_bits());
        assert_eq!(got.term_count, 4);
    }

    #[test]
    fn fingerprint_commas_parse_from_the_right() {
        let (key, sum) = parse_line("eta,conj=1,twist=3,k=-1/2,N=3,0,5,12,1.5e0,-2.5e0,4").unwrap();
        assert_eq!(key.fingerprint, FP);
        assert_eq!((key.m, key.n, key.c), (0, 5, 12));
        assert_eq!(sum.value, Complex64::new(1.5, -2.5));
    }

    #[test]
    fn corrupt_lines_name_the_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.txt");
        std::fs::write(&path, "eta,conj=0,twist=0,k=1/2,N=1,1,1,1,1.0e0,0.0e0,1\nbad line\n")
            .unwrap();
        match ResultCache::open(&path) {
            Err(Error::CacheCorrupt { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected CacheCorrupt, got {other:?}"),
        }
    }

    #[test]
    fn rejects_non_finite_values() {
        assert!(parse_line("fp,0,1,3,NaN,0.0,2").is_err());
        assert!(parse_line("fp,0,1,3,inf,0.0,2").is_err());
    }

    #[test]
    fn in_memory_and_resume_point() {
        let mut cache = ResultCache::in_memory();
        for c in [3u64, 6, 9] {
            cache
                .insert(
                    FP,
                    0,
                    1,
                    c,
                    CachedSum {
                        value: Complex64::new(c as f64, 0.0),
                        term_count: c,
                    },
                )
                .unwrap();
        }
        assert_eq!(cache.max_cached_c(FP, 0, 1), Some(9));
        assert_eq!(cache.max_cached_c(FP, 0, 2), None);
        assert_eq!(cache.len(), 3);
    }

    #[test]
    fn later_records_supersede_earlier_ones() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.txt");
        std::fs::write(
            &path,
            "fp,0,1,3,1.0e0,0.0e0,2\nfp,0,1,3,2.0e0,0.0e0,2\n",
        )
        .unwrap();
        let cache = ResultCache::open(&path).unwrap();
        assert_eq!(cache.get("fp", 0, 1, 3).unwrap().value.re, 2.0);
    }
}
