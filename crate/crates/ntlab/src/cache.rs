//! On-disk tables: `hurwitz.csv` and `ap_<p>.csv`, each starting with a
//! schema comment line.

use crate::classnumber::HurwitzTable;
use crate::ecurve::TraceTable;
use crate::error::{Error, Result};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const SCHEMA_LINE: &str = "# ntlab-schema v1";

pub fn cache_dir() -> PathBuf {
    std::env::var_os("NTLAB_CACHE")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("./.ntlab-cache"))
}

fn write_atomic(path: &Path, body: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::Cache(format!("{}: {e}", dir.display())))?;
    }
    let tmp = path.with_extension("tmp");
    let mut f =
        fs::File::create(&tmp).map_err(|e| Error::Cache(format!("{}: {e}", tmp.display())))?;
    f.write_all(body)?;
    f.sync_all()?;
    fs::rename(&tmp, path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
    Ok(())
}

fn reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
}

pub fn hurwitz_csv_bytes(t: &HurwitzTable) -> Result<Vec<u8>> {
    let mut out = format!("{SCHEMA_LINE}\n").into_bytes();
    let mut w = csv::Writer::from_writer(&mut out);
    w.write_record(["D", "h", "hstar12", "hfull"])?;
    for (d, h, s, f) in t.rows() {
        w.serialize((d, h, s, f))?;
    }
    w.flush()?;
    drop(w);
    Ok(out)
}

pub fn write_hurwitz(path: &Path, t: &HurwitzTable) -> Result<()> {
    write_atomic(path, &hurwitz_csv_bytes(t)?)
}

pub fn read_hurwitz(path: &Path) -> Result<HurwitzTable> {
    let mut r = reader(path)?;
    let rows = r
        .deserialize::<(u64, u32, i64, i64)>()
        .collect::<std::result::Result<Vec<_>, _>>()?;
    HurwitzTable::from_rows(rows)
}

/// Load `dir/hurwitz.csv` if it covers `bound`, otherwise rebuild and rewrite it.
pub fn load_or_build_hurwitz(dir: &Path, bound: u64) -> Result<HurwitzTable> {
    let path = dir.join("hurwitz.csv");
    if path.exists() {
        if let Ok(t) = read_hurwitz(&path) {
            if t.bound() >= bound {
                return Ok(t);
            }
        }
    }
    let t = HurwitzTable::build(bound);
    write_hurwitz(&path, &t)?;
    Ok(t)
}

pub fn ap_path(dir: &Path, p: u32) -> PathBuf {
    dir.join(format!("ap_{p}.csv"))
}

pub fn write_ap(dir: &Path, t: &TraceTable) -> Result<()> {
    let mut out = format!("{SCHEMA_LINE}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(["lambda", "ap"])?;
        for (l, a) in t.entries() {
            w.serialize((l, a))?;
        }
        w.flush()?;
    }
    write_atomic(&ap_path(dir, t.p()), &out)
}

pub fn read_ap(dir: &Path, p: u32) -> Result<TraceTable> {
    let mut r = reader(&ap_path(dir, p))?;
    let mut ap = vec![None; p as usize];
    for row in r.deserialize::<(u32, i32)>() {
        let (l, a) = row?;
        if l >= p {
            return Err(Error::Cache(format!("lambda {l} out of range for p = {p}")));
        }
        ap[l as usize] = Some(a);
    }
    Ok(TraceTable::from_values(p, ap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FieldCtx;

    #[test]
    fn hurwitz_roundtrip_and_idempotence() {
        let dir = tempfile::tempdir().unwrap();
        let t = load_or_build_hurwitz(dir.path(), 500).unwrap();
        let first = fs::read(dir.path().join("hurwitz.csv")).unwrap();
        assert!(first.starts_with(b"# ntlab-schema v1\nD,h,hstar12,hfull\n0,0,-1,0\n"));
        let again = load_or_build_hurwitz(dir.path(), 300).unwrap();
        assert_eq!(again, t);
        write_hurwitz(&dir.path().join("hurwitz.csv"), &HurwitzTable::build(500)).unwrap();
        assert_eq!(fs::read(dir.path().join("hurwitz.csv")).unwrap(), first);
        let bigger = load_or_build_hurwitz(dir.path(), 800).unwrap();
        assert_eq!(bigger.bound(), 800);
    }

    #[test]
    fn ap_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let c = FieldCtx::new(31).unwrap();
        let t = TraceTable::new(&c);
        write_ap(dir.path(), &t).unwrap();
        let back = read_ap(dir.path(), 31).unwrap();
        for l in 0..31 {
            assert_eq!(back.get(l), t.get(l));
        }
    }
}
