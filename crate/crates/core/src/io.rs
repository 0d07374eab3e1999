//! CSV and JSON formats for grids, fields, reports and slices.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grids::{Family, GridPoint, GridWeight};
use crate::lie::AlgebraName;
use crate::models::Slice;
use crate::transforms::{SampledField, SpectralField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Samples,
    Spectral,
}

/// On-disk form shared by sampled and spectral fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldFile {
    pub kind: FieldKind,
    pub algebra: AlgebraName,
    pub family: Family,
    #[serde(rename = "M")]
    pub modulus: i64,
    pub index_order: String,
    pub data: Vec<[f64; 2]>,
}

fn pack(values: &[Complex64]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

fn unpack(data: &[[f64; 2]]) -> Vec<Complex64> {
    data.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
}

impl FieldFile {
    pub fn from_samples(f: &SampledField) -> Self {
        FieldFile {
            kind: FieldKind::Samples,
            algebra: f.algebra,
            family: f.family,
            modulus: f.modulus,
            index_order: "lex".into(),
            data: pack(&f.values),
        }
    }

    pub fn from_spectral(f: &SpectralField) -> Self {
        FieldFile {
            kind: FieldKind::Spectral,
            algebra: f.algebra,
            family: f.family,
            modulus: f.modulus,
            index_order: "lex".into(),
            data: pack(&f.coefficients),
        }
    }

    fn check(&self, kind: FieldKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Metadata(format!("expected a {kind:?} field, found {:?}", self.kind)));
        }
        if self.index_order != "lex" {
            return Err(Error::Metadata(format!("unsupported index order '{}'", self.index_order)));
        }
        Ok(())
    }

    pub fn into_samples(self) -> Result<SampledField> {
        self.check(FieldKind::Samples)?;
        SampledField::new(self.algebra, self.family, self.modulus, unpack(&self.data))
    }

    pub fn into_spectral(self) -> Result<SpectralField> {
        self.check(FieldKind::Spectral)?;
        SpectralField::new(self.algebra, self.family, self.modulus, unpack(&self.data))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_grid_csv<W: Write>(out: &mut W, points: &[GridPoint]) -> Result<()> {
    writeln!(out, "u0,u1,u2,u3,x1,x2,x3")?;
    for p in points {
        let [u0, u1, u2, u3] = p.barycentric;
        let x = p.orthonormal();
        writeln!(out, "{u0},{u1},{u2},{u3},{},{},{}", num(x[0]), num(x[1]), num(x[2]))?;
    }
    Ok(())
}

pub fn write_weights_csv<W: Write>(out: &mut W, weights: &[GridWeight]) -> Result<()> {
    writeln!(out, "t0,t1,t2,t3,a,b,c")?;
    for w in weights {
        let [t0, t1, t2, t3] = w.barycentric;
        writeln!(out, "{t0},{t1},{t2},{t3},{t1},{t2},{t3}")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct GridJson<'a, T: Serialize> {
    algebra: AlgebraName,
    family: Family,
    #[serde(rename = "M")]
    modulus: i64,
    count: usize,
    #[serde(rename = "points")]
    items: &'a [T],
}

#[derive(Serialize)]
struct PointJson {
    barycentric: [i64; 4],
    orthonormal: [f64; 3],
}

#[derive(Serialize)]
struct WeightJson {
    barycentric: [i64; 4],
    weight: [i64; 3],
}

pub fn grid_json(algebra: AlgebraName, family: Family, modulus: i64, points: &[GridPoint]) -> Result<String> {
    let items: Vec<PointJson> =
        points.iter().map(|p| PointJson { barycentric: p.barycentric, orthonormal: p.orthonormal() }).collect();
    Ok(serde_json::to_string_pretty(&GridJson { algebra, family, modulus, count: items.len(), items: &items })? + "\n")
}

pub fn weights_json(algebra: AlgebraName, family: Family, modulus: i64, weights: &[GridWeight]) -> Result<String> {
    let items: Vec<WeightJson> =
        weights.iter().map(|w| WeightJson { barycentric: w.barycentric, weight: w.weight().0 }).collect();
    Ok(serde_json::to_string_pretty(&GridJson { algebra, family, modulus, count: items.len(), items: &items })? + "\n")
}

/// Field values with their barycentric index columns.
pub fn write_field_csv<W: Write>(out: &mut W, index: &[[i64; 4]], values: &[Complex64]) -> Result<()> {
    if index.len() != values.len() {
        return Err(Error::LengthMismatch { expected: index.len(), found: values.len() });
    }
    writeln!(out, "i0,i1,i2,i3,re,im")?;
    for (b, z) in index.iter().zip(values) {
        writeln!(out, "{},{},{},{},{},{}", b[0], b[1], b[2], b[3], num(z.re), num(z.im))?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlicePart {
    Re,
    Im,
    Abs,
}

/// One matrix per part: rows follow the second free axis, columns the first.
pub fn write_slice_csv<W: Write>(out: &mut W, slice: &Slice, part: SlicePart) -> Result<()> {
    let n = slice.u.len();
    for row in slice.values.chunks(n) {
        let line: Vec<String> = row
            .iter()
            .map(|z| {
                num(match part {
                    SlicePart::Re => z.re,
                    SlicePart::Im => z.im,
                    SlicePart::Abs => z.norm(),
                })
            })
            .collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

/// The two coordinate axes of a slice as CSV columns.
pub fn write_slice_axes<W: Write>(out: &mut W, slice: &Slice) -> Result<()> {
    let (a, b) = Slice::free_axes(slice.axis);
    writeln!(out, "index,p{},p{}", a + 1, b + 1)?;
    for (i, (u, v)) in slice.u.iter().zip(&slice.v).enumerate() {
        writeln!(out, "{i},{},{}", num(*u), num(*v))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::enumerate_grid;
    use crate::lie::Algebra;

    #[test]
    fn field_json_round_trip() {
        let f = SampledField::new(
            AlgebraName::C3,
            Family::Long,
            3,
            vec![Complex64::new(0.1, -2.5e-300); crate::grids::grid_count(AlgebraName::C3, Family::Long, 3) as usize],
        )
        .unwrap();
        let text = FieldFile::from_samples(&f).to_json().unwrap();
        assert!(text.contains("\"index_order\": \"lex\""));
        let back = FieldFile::parse(&text).unwrap().into_samples().unwrap();
        assert_eq!(back, f);
        assert!(FieldFile::parse(&text).unwrap().into_spectral().is_err());
        assert!(FieldFile::parse("{ not json").is_err());
    }

    #[test]
    fn grid_csv_rows() {
        let pts = enumerate_grid(Algebra::get(AlgebraName::B3), Family::Short, 10).unwrap();
        let mut buf = Vec::new();
        write_grid_csv(&mut buf, &pts).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 56);
        assert!(text.starts_with("u0,u1,u2,u3,x1,x2,x3\n"));
    }
}
