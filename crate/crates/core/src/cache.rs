//! Binary sample-cache files shared by the model and empirical pipelines.
//!
//! Layout (little-endian):
//!   magic  "ZRMC1"            5 bytes
//!   kind   u8                 0 = model records, 1 = empirical records
//!   sigma  f64
//!   param  u64                model: prime cutoff P; empirical: bits of T
//!   seed   u64
//!   count  u64
//! followed by `count` records: model records are two f64 (log_modulus,
//! argument); empirical records are three f64 (t, log_modulus, argument).

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{err, ErrorKind, Result};

const MAGIC: &[u8; 5] = b"ZRMC1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheKind {
    Model,
    Empirical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CacheHeader {
    pub kind: CacheKind,
    pub sigma: f64,
    pub param: u64,
    pub seed: u64,
    pub count: u64,
}

impl CacheHeader {
    fn record_len(&self) -> usize {
        match self.kind {
            CacheKind::Model => 16,
            CacheKind::Empirical => 24,
        }
    }
}

fn io_err(op: &'static str, e: impl std::fmt::Display) -> crate::error::Error {
    err!("random_model", "cache", ErrorKind::Cache(format!("{op}: {e}")))
}

/// Write a cache file; `records` is flat f64 data matching the header kind.
pub fn write_cache(path: &Path, header: &CacheHeader, records: &[f64]) -> Result<()> {
    let per = header.record_len() / 8;
    if records.len() != header.count as usize * per {
        return Err(err!(
            "random_model",
            "cache",
            ErrorKind::Cache(format!(
                "record data length {} does not match count {}",
                records.len(),
                header.count
            ))
        ));
    }
    let f = File::create(path).map_err(|e| io_err("create", e))?;
    let mut w = BufWriter::new(f);
    w.write_all(MAGIC).map_err(|e| io_err("write", e))?;
    let kind_byte = match header.kind {
        CacheKind::Model => 0u8,
        CacheKind::Empirical => 1u8,
    };
    w.write_all(&[kind_byte]).map_err(|e| io_err("write", e))?;
    w.write_all(&header.sigma.to_le_bytes()).map_err(|e| io_err("write", e))?;
    w.write_all(&header.param.to_le_bytes()).map_err(|e| io_err("write", e))?;
    w.write_all(&header.seed.to_le_bytes()).map_err(|e| io_err("write", e))?;
    w.write_all(&header.count.to_le_bytes()).map_err(|e| io_err("write", e))?;
    for v in records {
        w.write_all(&v.to_le_bytes()).map_err(|e| io_err("write", e))?;
    }
    w.flush().map_err(|e| io_err("flush", e))
}

/// Read a cache file back; validates magic and record payload length.
pub fn read_cache(path: &Path) -> Result<(CacheHeader, Vec<f64>)> {
    let f = File::open(path).map_err(|e| io_err("open", e))?;
    let mut r = BufReader::new(f);
    let mut head = [0u8; 5 + 1 + 8 + 8 + 8 + 8];
    r.read_exact(&mut head).map_err(|e| io_err("header", e))?;
    if &head[..5] != MAGIC {
        return Err(err!("random_model", "cache", ErrorKind::Cache("bad magic".into())));
    }
    let kind = match head[5] {
        0 => CacheKind::Model,
        1 => CacheKind::Empirical,
        k => {
            return Err(err!(
                "random_model",
                "cache",
                ErrorKind::Cache(format!("unknown kind byte {k}"))
            ))
        }
    };
    let f64_at = |i: usize| f64::from_le_bytes(head[i..i + 8].try_into().unwrap());
    let u64_at = |i: usize| u64::from_le_bytes(head[i..i + 8].try_into().unwrap());
    let header = CacheHeader {
        kind,
        sigma: f64_at(6),
        param: u64_at(14),
        seed: u64_at(22),
        count: u64_at(30),
    };
    let mut payload = Vec::new();
    r.read_to_end(&mut payload).map_err(|e| io_err("payload", e))?;
    let expect = header.count as usize * header.record_len();
    if payload.len() != expect {
        return Err(err!(
            "random_model",
            "cache",
            ErrorKind::Cache(format!("payload {} bytes, expected {expect}", payload.len()))
        ));
    }
    let records = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((header, records))
}
