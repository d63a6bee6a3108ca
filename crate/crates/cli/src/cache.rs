//! Append-only scan cache: one immutable file per (k, window, engine
//! version). Concurrent sweep workers touch disjoint keys, so the
//! single-writer discipline is per file; stale or corrupt entries are
//! treated as misses.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use negafib_core::ZeroScan;

/// Bump the trailing revision when the scan semantics change.
const ENGINE_TAG: &str = concat!("v", env!("CARGO_PKG_VERSION"), "-r1");

fn scan_path(dir: &Path, k: u32, window: u64) -> PathBuf {
    dir.join(format!("zeros-k{k}-w{window}-{ENGINE_TAG}.json"))
}

pub fn load_scan(dir: &Path, k: u32, window: u64) -> Option<ZeroScan> {
    let text = fs::read_to_string(scan_path(dir, k, window)).ok()?;
    let scan: ZeroScan = serde_json::from_str(&text).ok()?;
    (scan.k == k && scan.window_end == window).then_some(scan)
}

pub fn store_scan(dir: &Path, scan: &ZeroScan) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating cache dir {}", dir.display()))?;
    let path = scan_path(dir, scan.k, scan.window_end);
    if path.exists() {
        return Ok(()); // immutable once written
    }
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    fs::write(&tmp, serde_json::to_string(scan)?)
        .with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, &path).with_context(|| format!("publishing {}", path.display()))?;
    Ok(())
}
