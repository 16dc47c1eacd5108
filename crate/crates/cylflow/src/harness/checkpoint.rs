//! Binary checkpoints: a fixed header followed by the state payload as
//! little-endian IEEE-754 doubles.

use std::path::Path;

use crate::domain::grid::{CylinderSpec, StaggeredGrid};
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"CYLW0001";

/// Which representation the payload holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckpointMode {
    /// Galerkin coefficient vector.
    Coefficients,
    /// Homogenized face field, concatenated u then v then w.
    Faces,
}

#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub spec: CylinderSpec,
    pub mode: CheckpointMode,
    pub t: f64,
    pub payload: Vec<f64>,
}

pub fn write_checkpoint(path: &Path, ckpt: &Checkpoint) -> Result<()> {
    let mut buf = Vec::with_capacity(64 + ckpt.payload.len() * 8);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&(ckpt.spec.nx as u32).to_le_bytes());
    buf.extend_from_slice(&(ckpt.spec.ny as u32).to_le_bytes());
    buf.extend_from_slice(&(ckpt.spec.nz as u32).to_le_bytes());
    for v in [
        ckpt.spec.a,
        ckpt.spec.lx,
        ckpt.spec.ly,
        ckpt.spec.nu,
        ckpt.spec.gamma,
    ] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    buf.push(match ckpt.mode {
        CheckpointMode::Coefficients => 0,
        CheckpointMode::Faces => 1,
    });
    buf.extend_from_slice(&(ckpt.payload.len() as u64).to_le_bytes());
    buf.extend_from_slice(&ckpt.t.to_le_bytes());
    for v in &ckpt.payload {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    std::fs::write(path, buf)?;
    Ok(())
}

pub fn read_checkpoint(path: &Path) -> Result<Checkpoint> {
    let bytes = std::fs::read(path)?;
    let fail = |what: &str| Error::Parse(format!("checkpoint {}: {what}", path.display()));
    if bytes.len() < MAGIC.len() + 12 + 40 + 1 + 8 + 8 || &bytes[..8] != MAGIC {
        return Err(fail("bad magic or truncated header"));
    }
    let mut off = 8;
    let mut take_u32 = || -> u32 {
        let v = u32::from_le_bytes(bytes[off..off + 4].try_into().unwrap());
        off += 4;
        v
    };
    let nx = take_u32() as usize;
    let ny = take_u32() as usize;
    let nz = take_u32() as usize;
    let take_f64 = |off: &mut usize| -> f64 {
        let v = f64::from_le_bytes(bytes[*off..*off + 8].try_into().unwrap());
        *off += 8;
        v
    };
    let a = take_f64(&mut off);
    let lx = take_f64(&mut off);
    let ly = take_f64(&mut off);
    let nu = take_f64(&mut off);
    let gamma = take_f64(&mut off);
    let mode = match bytes[off] {
        0 => CheckpointMode::Coefficients,
        1 => CheckpointMode::Faces,
        m => return Err(fail(&format!("unknown payload mode {m}"))),
    };
    off += 1;
    let n = u64::from_le_bytes(bytes[off..off + 8].try_into().unwrap()) as usize;
    off += 8;
    let t = take_f64(&mut off);
    if bytes.len() != off + 8 * n {
        return Err(fail(&format!(
            "payload length mismatch: header says {n} doubles, file has {} bytes left",
            bytes.len() - off
        )));
    }
    let mut payload = Vec::with_capacity(n);
    for _ in 0..n {
        payload.push(take_f64(&mut off));
    }
    Ok(Checkpoint {
        spec: CylinderSpec {
            a,
            lx,
            ly,
            nx,
            ny,
            nz,
            nu,
            gamma,
        },
        mode,
        t,
        payload,
    })
}

/// Concatenates a face field into a checkpoint payload.
pub fn faces_payload(w: &crate::domain::field::VectorField) -> Vec<f64> {
    let mut out = Vec::with_capacity(w.u.len() + w.v.len() + w.w.len());
    out.extend_from_slice(&w.u);
    out.extend_from_slice(&w.v);
    out.extend_from_slice(&w.w);
    out
}

/// Rebuilds a face field from a checkpoint payload.
pub fn payload_to_faces(
    grid: &std::sync::Arc<StaggeredGrid>,
    payload: &[f64],
) -> Result<crate::domain::field::VectorField> {
    let (nu, nv, nw) = (grid.n_u(), grid.n_v(), grid.n_w());
    if payload.len() != nu + nv + nw {
        return Err(Error::Shape(format!(
            "face payload length {} does not match the grid ({})",
            payload.len(),
            nu + nv + nw
        )));
    }
    let mut f = crate::domain::field::VectorField::zeros(grid);
    f.u.copy_from_slice(&payload[..nu]);
    f.v.copy_from_slice(&payload[nu..nu + nv]);
    f.w.copy_from_slice(&payload[nu + nv..]);
    Ok(f)
}
