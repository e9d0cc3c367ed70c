//! Grid field files.
//!
//! Binary layout, all little-endian:
//!
//! | offset | content                                   |
//! |--------|-------------------------------------------|
//! | 0      | origin x, y, z (`f64` ×3)                 |
//! | 24     | spacing (`f64`)                           |
//! | 32     | nx, ny, nz (`u64` ×3)                     |
//! | 56     | samples, x fastest, 3 × `f64` per node    |
//!
//! JSON uses the same field names (`origin`, `spacing`, `dims`, `samples`)
//! and is meant for small grids.

use std::fs;
use std::path::Path;

use super::grid::{GridVectorField, Lattice3};
use crate::error::{Error, Result};
use crate::vec3::Vec3;

pub const HEADER_BYTES: usize = 56;

pub fn to_bytes(field: &GridVectorField) -> Vec<u8> {
    let lat = field.lattice();
    let mut out = Vec::with_capacity(HEADER_BYTES + 24 * lat.len());
    for v in lat.origin.to_array() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&lat.spacing.to_le_bytes());
    for n in lat.dims {
        out.extend_from_slice(&(n as u64).to_le_bytes());
    }
    for s in field.samples() {
        for v in s.to_array() {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

fn f64_at(b: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(b[at..at + 8].try_into().expect("8-byte slice"))
}

fn u64_at(b: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(b[at..at + 8].try_into().expect("8-byte slice"))
}

pub fn from_bytes(bytes: &[u8]) -> Result<GridVectorField> {
    if bytes.len() < HEADER_BYTES {
        return Err(Error::invalid(format!(
            "grid file too short for header: {} bytes",
            bytes.len()
        )));
    }
    let origin = Vec3::new(f64_at(bytes, 0), f64_at(bytes, 8), f64_at(bytes, 16));
    let spacing = f64_at(bytes, 24);
    let dims = [u64_at(bytes, 32), u64_at(bytes, 40), u64_at(bytes, 48)];
    let nodes = dims
        .iter()
        .try_fold(1u64, |acc, &n| acc.checked_mul(n))
        .ok_or_else(|| Error::invalid("grid dims overflow"))?;
    let expected = nodes
        .checked_mul(24)
        .and_then(|b| b.checked_add(HEADER_BYTES as u64))
        .ok_or_else(|| Error::invalid("grid dims overflow"))?;
    if bytes.len() as u64 != expected {
        return Err(Error::invalid(format!(
            "grid file has {} bytes, header implies {expected}",
            bytes.len()
        )));
    }
    let lattice = Lattice3::new(origin, spacing, dims.map(|n| n as usize))?;
    let samples = bytes[HEADER_BYTES..]
        .chunks_exact(24)
        .map(|c| Vec3::new(f64_at(c, 0), f64_at(c, 8), f64_at(c, 16)))
        .collect();
    GridVectorField::new(lattice, samples)
}

pub fn write_binary(field: &GridVectorField, path: &Path) -> Result<()> {
    fs::write(path, to_bytes(field))?;
    Ok(())
}

pub fn read_binary(path: &Path) -> Result<GridVectorField> {
    from_bytes(&fs::read(path)?)
}

pub fn write_json(field: &GridVectorField, path: &Path) -> Result<()> {
    fs::write(path, serde_json::to_vec(field)?)?;
    Ok(())
}

pub fn read_json(path: &Path) -> Result<GridVectorField> {
    Ok(serde_json::from_slice(&fs::read(path)?)?)
}

/// Reads a grid, choosing the format from the extension (`.json` or binary).
pub fn read_any(path: &Path) -> Result<GridVectorField> {
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("json") => read_json(path),
        _ => read_binary(path),
    }
}
