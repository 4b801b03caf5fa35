//! Field snapshot files.
//!
//! A record is one ASCII header line
//!
//! ```text
//! WMHD1 <N> <c> <t>\n
//! ```
//!
//! followed by `c·(2N+1)³` complex coefficients, each written as two
//! little-endian IEEE-754 `f64` values (real, imaginary). Coefficients are
//! component-major; within a component modes run over `n1`, then `n2`, then
//! `n3` (innermost), each from `-N` to `N`. A state file is four records in
//! the order `v`, `B`, `Ẽ`, `Ē`, all with the same `t`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use super::field::SpectralField;
use super::lattice::Lattice;
use crate::error::{Error, Result};

pub const MAGIC: &str = "WMHD1";

pub fn write_field<W: Write>(w: &mut W, field: &SpectralField, t: f64) -> Result<()> {
    writeln!(w, "{MAGIC} {} {} {}", field.lattice().cutoff(), field.comps(), t)?;
    for z in field.raw() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

fn malformed(reason: impl Into<String>) -> Error {
    Error::Snapshot {
        path: Default::default(),
        reason: reason.into(),
    }
}

pub fn read_field<R: BufRead>(r: &mut R) -> Result<(SpectralField, f64)> {
    let mut header = String::new();
    r.read_line(&mut header)?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != MAGIC {
        return Err(malformed(format!("bad header {:?}", header.trim_end())));
    }
    let cutoff: usize = parts[1].parse().map_err(|_| malformed("bad cutoff"))?;
    let comps: usize = parts[2].parse().map_err(|_| malformed("bad component count"))?;
    let t: f64 = parts[3].parse().map_err(|_| malformed("bad time"))?;
    if cutoff == 0 || !(comps == 1 || comps == 3) {
        return Err(malformed("unsupported cutoff or component count"));
    }
    let lattice = Lattice::new(cutoff);
    let count = comps * lattice.len();
    let mut bytes = vec![0u8; 16 * count];
    r.read_exact(&mut bytes).map_err(|_| malformed("truncated coefficient data"))?;
    let data = bytes
        .chunks_exact(16)
        .map(|b| {
            let re = f64::from_le_bytes(b[..8].try_into().unwrap());
            let im = f64::from_le_bytes(b[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect();
    Ok((SpectralField::from_raw(lattice, comps, data), t))
}

pub fn save_field(path: &Path, field: &SpectralField, t: f64) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_field(&mut w, field, t)?;
    w.flush()?;
    Ok(())
}

pub fn load_field(path: &Path) -> Result<(SpectralField, f64)> {
    let mut r = BufReader::new(File::open(path)?);
    read_field(&mut r).map_err(|e| with_path(e, path))
}

pub(crate) fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Snapshot { reason, .. } => Error::Snapshot {
            path: path.to_path_buf(),
            reason,
        },
        other => other,
    }
}
