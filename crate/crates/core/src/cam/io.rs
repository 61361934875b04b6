use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use super::{SaliencyMap, TensorStack};
use crate::error::{Error, Result};
use crate::imaging::write_gray8_png;

pub const ATNS_MAGIC: &[u8; 4] = b"ATNS";
pub const ATNS_VERSION: u16 = 1;
const HEADER_LEN: usize = 4 + 2 + 3 * 4;

pub fn write_atns<W: Write>(stack: &TensorStack, mut w: W) -> Result<()> {
    let mut buf = Vec::with_capacity(HEADER_LEN + 4 * stack.data.len());
    buf.extend_from_slice(ATNS_MAGIC);
    buf.extend_from_slice(&ATNS_VERSION.to_le_bytes());
    for dim in [stack.k, stack.h, stack.w] {
        let dim = u32::try_from(dim).map_err(|_| Error::Format("dimension exceeds u32".into()))?;
        buf.extend_from_slice(&dim.to_le_bytes());
    }
    for &v in &stack.data {
        buf.extend_from_slice(&(v as f32).to_le_bytes());
    }
    w.write_all(&buf).map_err(|e| Error::io("<atns>", e))
}

pub fn read_atns<R: Read>(mut r: R) -> Result<TensorStack> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)
        .map_err(|e| Error::io("<atns>", e))?;
    if bytes.len() < HEADER_LEN || &bytes[..4] != ATNS_MAGIC {
        return Err(Error::Format("missing ATNS header".into()));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != ATNS_VERSION {
        return Err(Error::Format(format!("unsupported ATNS version {version}")));
    }
    let dim =
        |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes")) as usize;
    let (k, h, w) = (dim(6), dim(10), dim(14));
    let expected = k
        .checked_mul(h)
        .and_then(|v| v.checked_mul(w))
        .and_then(|v| v.checked_mul(4))
        .ok_or_else(|| Error::Format("dimensions overflow".into()))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != expected {
        return Err(Error::Format(format!(
            "expected {expected} payload bytes for {k}x{h}x{w}, found {}",
            payload.len()
        )));
    }
    let data = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")) as f64)
        .collect();
    TensorStack::new(k, h, w, data)
}

pub fn read_atns_path(path: impl AsRef<Path>) -> Result<TensorStack> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_atns(BufReader::new(file)).map_err(|e| e.context(path.display().to_string()))
}

pub fn write_atns_path(stack: &TensorStack, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_atns(stack, file)
}

/// One weight per line; blank lines are ignored.
pub fn read_cic_weights<R: Read>(r: R) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(r).lines().enumerate() {
        let line = line.map_err(|e| Error::io("<weights>", e))?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::InvalidInput(format!("line {}: '{t}' is not a number", i + 1)))?;
        if !v.is_finite() {
            return Err(Error::InvalidInput(format!(
                "line {}: weight is not finite",
                i + 1
            )));
        }
        out.push(v);
    }
    Ok(out)
}

pub fn read_cic_weights_path(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_cic_weights(file).map_err(|e| e.context(path.display().to_string()))
}

/// Writes `<stem>.png` (8-bit) and `<stem>.atns` (float32, K = 1).
pub fn write_saliency(map: &SaliencyMap, dir: impl AsRef<Path>, stem: &str) -> Result<()> {
    let dir = dir.as_ref();
    write_gray8_png(
        dir.join(format!("{stem}.png")),
        map.w,
        map.h,
        &map.to_gray8(),
    )?;
    let stack = TensorStack::new(1, map.h, map.w, map.data.clone())?;
    write_atns_path(&stack, dir.join(format!("{stem}.atns")))
}
