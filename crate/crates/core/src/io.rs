//! Nodal-sample files for conformal factors: a text grid or a binary blob,
//! cos-theta-major, on the implied Gauss-Legendre x uniform-azimuth grid.
//!
//! Text layout:
//! ```text
//! spinfield v1
//! L 16
//! grid 18 35
//! axisymmetric 0
//! <ntheta * nphi whitespace-separated values, theta rows>
//! ```
//! Binary layout: magic `SPNF1\n`, three little-endian u32 (L, ntheta,
//! nphi), one u8 axisymmetric flag, then ntheta*nphi little-endian f64.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::numerics::gauss_legendre;
use crate::spectral::{ConformalSphereMetric, SampledField};

const MAGIC: &[u8; 6] = b"SPNF1\n";

#[derive(Debug, Clone)]
pub struct FieldFile {
    pub truncation: usize,
    pub n_theta: usize,
    pub n_phi: usize,
    pub axisymmetric: bool,
    /// cos-theta-major: values[i * n_phi + q].
    pub values: Vec<f64>,
}

impl FieldFile {
    pub fn into_metric(self) -> Result<ConformalSphereMetric> {
        let (x, _) = gauss_legendre(self.n_theta);
        let field = SampledField::new(x, self.values, self.n_phi, self.axisymmetric)?;
        Ok(ConformalSphereMetric::from_samples(field))
    }
}

pub fn read_field(path: &Path) -> Result<FieldFile> {
    let mut raw = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut raw)?;
    if raw.starts_with(MAGIC) {
        parse_binary(&raw[MAGIC.len()..])
    } else {
        parse_text(std::str::from_utf8(&raw).map_err(|_| {
            Error::Parse("field file is neither valid UTF-8 text nor binary".into())
        })?)
    }
}

fn parse_binary(rest: &[u8]) -> Result<FieldFile> {
    if rest.len() < 13 {
        return Err(Error::Parse("binary field file truncated".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(rest[o..o + 4].try_into().unwrap()) as usize;
    let truncation = u32_at(0);
    let n_theta = u32_at(4);
    let n_phi = u32_at(8);
    let axisymmetric = rest[12] != 0;
    let body = &rest[13..];
    let need = n_theta * n_phi * 8;
    if body.len() != need {
        return Err(Error::Parse(format!(
            "binary field body has {} bytes, expected {need}",
            body.len()
        )));
    }
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(FieldFile {
        truncation,
        n_theta,
        n_phi,
        axisymmetric,
        values,
    })
}

fn parse_text(text: &str) -> Result<FieldFile> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty field file".into()))?;
    if header != "spinfield v1" {
        return Err(Error::Parse(format!(
            "unknown field-file header '{header}'"
        )));
    }
    let mut truncation = None;
    let mut grid = None;
    let mut axisymmetric = false;
    let mut values = Vec::new();
    for line in lines {
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("L") => {
                truncation = Some(
                    parts
                        .next()
                        .and_then(|v| v.parse().ok())
                        .ok_or_else(|| Error::Parse("bad L line".into()))?,
                )
            }
            Some("grid") => {
                let nt: usize = parts
                    .next()
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| Error::Parse("bad grid line".into()))?;
                let np: usize = parts
                    .next()
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| Error::Parse("bad grid line".into()))?;
                grid = Some((nt, np));
            }
            Some("axisymmetric") => {
                axisymmetric = parts.next() == Some("1");
            }
            Some(first) => {
                let v: f64 = first
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad value '{first}'")))?;
                values.push(v);
                for tok in parts {
                    values.push(
                        tok.parse()
                            .map_err(|_| Error::Parse(format!("bad value '{tok}'")))?,
                    );
                }
            }
            None => {}
        }
    }
    let truncation = truncation.ok_or_else(|| Error::Parse("field file missing L".into()))?;
    let (n_theta, n_phi) = grid.ok_or_else(|| Error::Parse("field file missing grid".into()))?;
    if values.len() != n_theta * n_phi {
        return Err(Error::Parse(format!(
            "field file has {} values, expected {}",
            values.len(),
            n_theta * n_phi
        )));
    }
    Ok(FieldFile {
        truncation,
        n_theta,
        n_phi,
        axisymmetric,
        values,
    })
}

pub fn write_field_text(path: &Path, field: &FieldFile) -> Result<()> {
    let mut out = String::new();
    out.push_str("spinfield v1\n");
    out.push_str(&format!("L {}\n", field.truncation));
    out.push_str(&format!("grid {} {}\n", field.n_theta, field.n_phi));
    out.push_str(&format!(
        "axisymmetric {}\n",
        if field.axisymmetric { 1 } else { 0 }
    ));
    for i in 0..field.n_theta {
        let row: Vec<String> = (0..field.n_phi)
            .map(|q| format!("{:.17e}", field.values[i * field.n_phi + q]))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn write_field_binary(path: &Path, field: &FieldFile) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(MAGIC)?;
    f.write_all(&(field.truncation as u32).to_le_bytes())?;
    f.write_all(&(field.n_theta as u32).to_le_bytes())?;
    f.write_all(&(field.n_phi as u32).to_le_bytes())?;
    f.write_all(&[u8::from(field.axisymmetric)])?;
    for v in &field.values {
        f.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Sample a metric's conformal exponent onto a grid for writing.
pub fn field_from_metric(
    metric: &ConformalSphereMetric,
    truncation: usize,
    n_theta: usize,
    n_phi: usize,
) -> FieldFile {
    let (x, _) = gauss_legendre(n_theta);
    let mut values = Vec::with_capacity(n_theta * n_phi);
    for &xi in &x {
        for q in 0..n_phi {
            let phi = 2.0 * std::f64::consts::PI * q as f64 / n_phi as f64;
            values.push(metric.u(xi, phi));
        }
    }
    FieldFile {
        truncation,
        n_theta,
        n_phi,
        axisymmetric: metric.is_axisymmetric(),
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn text_and_binary_round_trip() {
        let metric = ConformalSphereMetric::from_axisym_fn(|x| 0.1 * x + 0.3);
        let field = field_from_metric(&metric, 8, 12, 25);
        let dir = std::env::temp_dir().join("diraclab-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let t = dir.join("f.txt");
        let b = dir.join("f.bin");
        write_field_text(&t, &field).unwrap();
        write_field_binary(&b, &field).unwrap();
        for p in [&t, &b] {
            let back = read_field(p).unwrap();
            assert_eq!(back.truncation, 8);
            assert_eq!(back.n_theta, 12);
            assert_eq!(back.n_phi, 25);
            assert_eq!(back.values.len(), field.values.len());
            for (a, b) in back.values.iter().zip(&field.values) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-16);
            }
        }
        let m2 = read_field(&b).unwrap().into_metric().unwrap();
        assert_abs_diff_eq!(m2.u(0.4, 1.0), 0.1 * 0.4 + 0.3, epsilon = 1e-9);
    }

    #[test]
    fn rejects_malformed_text() {
        let dir = std::env::temp_dir().join("diraclab-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("bad.txt");
        std::fs::write(&p, "spinfield v1\nL 4\ngrid 2 3\n1 2 3 4 5\n").unwrap();
        assert!(read_field(&p).is_err());
        std::fs::write(&p, "wrong header\n").unwrap();
        assert!(read_field(&p).is_err());
    }
}
