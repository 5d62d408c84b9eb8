//! All-or-nothing artifact writing: files go to temporaries and are
//! renamed once every one of them is on disk.

use std::fs;
use std::path::Path;

use crate::error::Result;

pub const FAILED_MARKER: &str = ".failed";

pub fn commit(dir: &Path, files: &[(&str, String)]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let tmp = |name: &str| dir.join(format!(".{name}.tmp"));
    let written: Result<()> = files.iter().try_for_each(|(name, body)| Ok(fs::write(tmp(name), body)?));
    if let Err(e) = written {
        for (name, _) in files {
            let _ = fs::remove_file(tmp(name));
        }
        return Err(e);
    }
    for (name, _) in files {
        fs::rename(tmp(name), dir.join(name))?;
    }
    let marker = dir.join(FAILED_MARKER);
    if marker.exists() {
        fs::remove_file(marker)?;
    }
    Ok(())
}

/// Removes stale artifacts named in `names` and leaves a marker holding `detail`.
pub fn mark_failed(dir: &Path, names: &[&str], detail: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    for name in names {
        let p = dir.join(name);
        if p.exists() {
            fs::remove_file(p)?;
        }
    }
    fs::write(dir.join(FAILED_MARKER), detail)?;
    Ok(())
}
