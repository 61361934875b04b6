use std::fs;
use std::path::Path;

use radiocorr_core::{Error, Result};
use serde::Serialize;

/// Writes `bytes` to a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    fs::write(&tmp, bytes).map_err(|e| Error::io(path, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

/// Writes every `(path, bytes)` pair; nothing is written until all outputs
/// have been produced.
pub fn commit(outputs: Vec<(&Path, Vec<u8>)>) -> Result<()> {
    for (path, bytes) in outputs {
        write_atomic(path, &bytes)?;
        log::info!("wrote {}", path.display());
    }
    Ok(())
}
