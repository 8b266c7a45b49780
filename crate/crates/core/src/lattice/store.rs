//! Binary ensemble store with a JSON provenance sidecar.
//!
//! Layout (little endian): magic `QGVENS1`, rank `u32`, extents `u32` each,
//! group code `u8`, `β f64`, matter flag `u8`, `κ f64`, `λ f64`, seed `u64`,
//! configuration count `u64`, SHA-256 of the body (32 bytes); then per
//! configuration the links site-major, direction-minor, each matrix
//! row-major as `(re, im)` pairs of `f64`, followed by the matter field.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use super::config::LatticeConfig;
use super::ensemble::{Ensemble, Provenance};
use super::geometry::Lattice;
use crate::error::{Error, Result};
use crate::symmetry::GroupKind;

pub const MAGIC: &[u8; 7] = b"QGVENS1";

fn body(configs: &[LatticeConfig]) -> Vec<u8> {
    let mut out = Vec::new();
    for c in configs {
        for z in c.links.iter().chain(c.matter.iter().flatten()) {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    out
}

pub fn content_hash(configs: &[LatticeConfig]) -> String {
    hex(&Sha256::digest(body(configs)))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".provenance.json");
    PathBuf::from(s)
}

pub fn write_ensemble(path: &Path, ens: &Ensemble) -> Result<()> {
    let first = ens.configs.first().ok_or_else(|| Error::Store("empty ensemble".into()))?;
    let p = &ens.provenance.params;
    let data = body(&ens.configs);
    let mut out = Vec::with_capacity(data.len() + 128);
    out.extend_from_slice(MAGIC);
    let dims = first.lattice.dims();
    out.extend_from_slice(&(dims.len() as u32).to_le_bytes());
    for &d in dims {
        out.extend_from_slice(&(d as u32).to_le_bytes());
    }
    out.push(first.group.code());
    out.extend_from_slice(&p.action.beta.to_le_bytes());
    let m = p.action.matter;
    out.push(u8::from(first.matter.is_some()));
    out.extend_from_slice(&m.map_or(0.0, |m| m.kappa).to_le_bytes());
    out.extend_from_slice(&m.map_or(0.0, |m| m.lambda).to_le_bytes());
    out.extend_from_slice(&p.seed.to_le_bytes());
    out.extend_from_slice(&(ens.configs.len() as u64).to_le_bytes());
    out.extend_from_slice(&Sha256::digest(&data));
    out.extend_from_slice(&data);
    fs::write(path, out)?;
    fs::write(sidecar_path(path), serde_json::to_vec_pretty(&ens.provenance)?)?;
    Ok(())
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(Error::Store("truncated file".into()));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

/// Header fields as stored.
#[derive(Clone, Debug, PartialEq)]
pub struct StoreHeader {
    pub dims: Vec<usize>,
    pub group: GroupKind,
    pub beta: f64,
    pub has_matter: bool,
    pub kappa: f64,
    pub lambda: f64,
    pub seed: u64,
    pub n_configs: u64,
    pub body_hash: [u8; 32],
}

pub fn read_ensemble(path: &Path) -> Result<Ensemble> {
    let mut buf = Vec::new();
    fs::File::open(path)?.read_to_end(&mut buf)?;
    let mut c = Cursor { buf: &buf, pos: 0 };
    if c.take(7)? != MAGIC {
        return Err(Error::Store("bad magic".into()));
    }
    let rank = c.u32()? as usize;
    if !(2..=4).contains(&rank) {
        return Err(Error::Store(format!("rank {rank}")));
    }
    let dims = (0..rank).map(|_| c.u32().map(|d| d as usize)).collect::<Result<Vec<_>>>()?;
    let group = GroupKind::from_code(c.u8()?).ok_or_else(|| Error::Store("unknown group code".into()))?;
    let header = StoreHeader {
        dims,
        group,
        beta: c.f64()?,
        has_matter: c.u8()? != 0,
        kappa: c.f64()?,
        lambda: c.f64()?,
        seed: c.u64()?,
        n_configs: c.u64()?,
        body_hash: c.take(32)?.try_into().expect("32 bytes"),
    };
    let data = &buf[c.pos..];
    if Sha256::digest(data).as_slice() != header.body_hash {
        return Err(Error::Store("content hash mismatch".into()));
    }
    let sidecar = fs::read(sidecar_path(path)).map_err(|e| Error::Store(format!("provenance sidecar: {e}")))?;
    let provenance: Provenance = serde_json::from_slice(&sidecar)?;
    let p = &provenance.params;
    if p.dims != header.dims || p.group != header.group || p.seed != header.seed || p.action.beta != header.beta {
        return Err(Error::Store("header disagrees with the provenance sidecar".into()));
    }
    let lattice = Lattice::new(&header.dims, p.spacing)?;
    let n2 = group.matrix_dim().pow(2);
    let per_config = lattice.links() * n2 + if header.has_matter { lattice.volume() } else { 0 };
    if data.len() != header.n_configs as usize * per_config * 16 {
        return Err(Error::Store("body length does not match the header".into()));
    }
    let values: Vec<Complex64> = data
        .chunks_exact(16)
        .map(|b| Complex64::new(f64::from_le_bytes(b[..8].try_into().expect("8")), f64::from_le_bytes(b[8..].try_into().expect("8"))))
        .collect();
    let configs = values
        .chunks_exact(per_config)
        .map(|chunk| {
            let (links, matter) = chunk.split_at(lattice.links() * n2);
            LatticeConfig { lattice: lattice.clone(), group, links: links.to_vec(), matter: header.has_matter.then(|| matter.to_vec()) }
        })
        .collect();
    Ok(Ensemble { provenance, configs })
}
