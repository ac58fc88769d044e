//! On-disk cache of generated constraint files, keyed by the SHA-256 of the
//! network document plus the family tag.

use std::io::Write;
use std::path::{Path, PathBuf};

use bnalg_core::constraints::{ConstraintSet, Family};
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "BNALG_CACHE";

/// `BNALG_CACHE` when set and nonempty, otherwise the `--cache` flag.
pub fn cache_dir(flag: Option<PathBuf>) -> Option<PathBuf> {
    match std::env::var_os(CACHE_ENV) {
        Some(v) if !v.is_empty() => Some(PathBuf::from(v)),
        _ => flag,
    }
}

pub fn cache_path(dir: &Path, network: &[u8], family: Family, conjectural: bool) -> PathBuf {
    let digest = hex::encode(Sha256::digest(network));
    let suffix = if conjectural { "-conjectural" } else { "" };
    dir.join(format!("{digest}-{family}{suffix}.json"))
}

/// Cached text, if present and still a valid constraint document.
pub fn lookup(path: &Path) -> Option<String> {
    let text = std::fs::read_to_string(path).ok()?;
    ConstraintSet::from_json(&text).ok().map(|_| text)
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
