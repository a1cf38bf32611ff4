//! Deterministic artifact writers: canonical JSON (sorted keys, 17 significant
//! digits, trailing newline) and plot-ready CSV.

use std::fmt::Write as _;
use std::path::Path;

use serde::ser::{self, Serialize};
use serde::Serialize as DeriveSerialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattice::LatticeFunction;
use crate::linalg::CMatrix;
use crate::spectral::{BandStructure, BandValues, FermiPoint};

/// Formats a float with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Canonical JSON text of `value`; refuses NaN and infinities anywhere.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    value.serialize(FiniteCheck {
        path: String::from("$"),
    })?;
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

/// Writes `value` to `path` as canonical JSON.
pub fn emit_report<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let text = to_canonical_json(value)?;
    std::fs::write(path, text)?;
    Ok(())
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                out.push_str(&format_float(n.as_f64().expect("number is representable")));
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("key serializes"));
                out.push_str(": ");
                write_value(out, &map[*k], indent + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

/// A serializer that only walks the value and fails on the first non-finite float.
struct FiniteCheck {
    path: String,
}

impl FiniteCheck {
    fn child(&self, key: impl std::fmt::Display) -> FiniteCheck {
        FiniteCheck {
            path: format!("{}.{key}", self.path),
        }
    }
}

impl ser::Error for Error {
    fn custom<T: std::fmt::Display>(msg: T) -> Self {
        Error::InvalidInput(msg.to_string())
    }
}

struct Seq {
    path: String,
    index: usize,
    key: String,
}

impl Seq {
    fn new(path: &str) -> Self {
        Seq {
            path: path.to_string(),
            index: 0,
            key: String::new(),
        }
    }

    fn next<T: Serialize + ?Sized>(&mut self, value: &T) -> Result<()> {
        let child = FiniteCheck {
            path: format!("{}[{}]", self.path, self.index),
        };
        self.index += 1;
        value.serialize(child)
    }

    fn field<T: Serialize + ?Sized>(&mut self, key: &str, value: &T) -> Result<()> {
        value.serialize(
            FiniteCheck {
                path: self.path.clone(),
            }
            .child(key),
        )
    }
}

macro_rules! ok_scalars {
    ($($name:ident: $ty:ty),*) => {
        $(fn $name(self, _v: $ty) -> Result<()> { Ok(()) })*
    };
}

impl ser::Serializer for FiniteCheck {
    type Ok = ();
    type Error = Error;
    type SerializeSeq = Seq;
    type SerializeTuple = Seq;
    type SerializeTupleStruct = Seq;
    type SerializeTupleVariant = Seq;
    type SerializeMap = Seq;
    type SerializeStruct = Seq;
    type SerializeStructVariant = Seq;

    ok_scalars!(serialize_bool: bool, serialize_i8: i8, serialize_i16: i16, serialize_i32: i32, serialize_i64: i64,
        serialize_u8: u8, serialize_u16: u16, serialize_u32: u32, serialize_u64: u64, serialize_char: char,
        serialize_str: &str, serialize_bytes: &[u8]);

    fn serialize_f32(self, v: f32) -> Result<()> {
        self.serialize_f64(v as f64)
    }

    fn serialize_f64(self, v: f64) -> Result<()> {
        if v.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite(self.path))
        }
    }

    fn serialize_none(self) -> Result<()> {
        Ok(())
    }

    fn serialize_some<T: Serialize + ?Sized>(self, value: &T) -> Result<()> {
        value.serialize(self)
    }

    fn serialize_unit(self) -> Result<()> {
        Ok(())
    }

    fn serialize_unit_struct(self, _name: &'static str) -> Result<()> {
        Ok(())
    }

    fn serialize_unit_variant(self, _name: &'static str, _index: u32, _variant: &'static str) -> Result<()> {
        Ok(())
    }

    fn serialize_newtype_struct<T: Serialize + ?Sized>(self, _name: &'static str, value: &T) -> Result<()> {
        value.serialize(self)
    }

    fn serialize_newtype_variant<T: Serialize + ?Sized>(
        self,
        _name: &'static str,
        _index: u32,
        variant: &'static str,
        value: &T,
    ) -> Result<()> {
        value.serialize(self.child(variant))
    }

    fn serialize_seq(self, _len: Option<usize>) -> Result<Seq> {
        Ok(Seq::new(&self.path))
    }

    fn serialize_tuple(self, _len: usize) -> Result<Seq> {
        Ok(Seq::new(&self.path))
    }

    fn serialize_tuple_struct(self, _name: &'static str, _len: usize) -> Result<Seq> {
        Ok(Seq::new(&self.path))
    }

    fn serialize_tuple_variant(
        self,
        _name: &'static str,
        _index: u32,
        variant: &'static str,
        _len: usize,
    ) -> Result<Seq> {
        Ok(Seq::new(&self.child(variant).path))
    }

    fn serialize_map(self, _len: Option<usize>) -> Result<Seq> {
        Ok(Seq::new(&self.path))
    }

    fn serialize_struct(self, _name: &'static str, _len: usize) -> Result<Seq> {
        Ok(Seq::new(&self.path))
    }

    fn serialize_struct_variant(
        self,
        _name: &'static str,
        _index: u32,
        variant: &'static str,
        _len: usize,
    ) -> Result<Seq> {
        Ok(Seq::new(&self.child(variant).path))
    }
}

impl ser::SerializeSeq for Seq {
    type Ok = ();
    type Error = Error;
    fn serialize_element<T: Serialize + ?Sized>(&mut self, value: &T) -> Result<()> {
        self.next(value)
    }
    fn end(self) -> Result<()> {
        Ok(())
    }
}

impl ser::SerializeTuple for Seq {
    type Ok = ();
    type Error = Error;
    fn serialize_element<T: Serialize + ?Sized>(&mut self, value: &T) -> Result<()> {
        self.next(value)
    }
    fn end(self) -> Result<()> {
        Ok(())
    }
}

impl ser::SerializeTupleStruct for Seq {
    type Ok = ();
    type Error = Error;
    fn serialize_field<T: Serialize + ?Sized>(&mut self, value: &T) -> Result<()> {
        self.next(value)
    }
    fn end(self) -> Result<()> {
        Ok(())
    }
}

impl ser::SerializeTupleVariant for Seq {
    type Ok = ();
    type Error = Error;
    fn serialize_field<T: Serialize + ?Sized>(&mut self, value: &T) -> Result<()> {
        self.next(value)
    }
    fn end(self) -> Result<()> {
        Ok(())
    }
}

impl ser::SerializeMap for Seq {
    type Ok = ();
    type Error = Error;
    fn serialize_key<T: Serialize + ?Sized>(&mut self, key: &T) -> Result<()> {
        self.key = serde_json::to_string(key)
            .map(|s| s.trim_matches('"').to_string())
            .unwrap_or_default();
        Ok(())
    }
    fn serialize_value<T: Serialize + ?Sized>(&mut self, value: &T) -> Result<()> {
        let key = std::mem::take(&mut self.key);
        self.field(&key, value)
    }
    fn end(self) -> Result<()> {
        Ok(())
    }
}

impl ser::SerializeStruct for Seq {
    type Ok = ();
    type Error = Error;
    fn serialize_field<T: Serialize + ?Sized>(&mut self, key: &'static str, value: &T) -> Result<()> {
        self.field(key, value)
    }
    fn end(self) -> Result<()> {
        Ok(())
    }
}

impl ser::SerializeStructVariant for Seq {
    type Ok = ();
    type Error = Error;
    fn serialize_field<T: Serialize + ?Sized>(&mut self, key: &'static str, value: &T) -> Result<()> {
        self.field(key, value)
    }
    fn end(self) -> Result<()> {
        Ok(())
    }
}

fn csv_row(cells: impl IntoIterator<Item = String>) -> String {
    let mut row = cells.into_iter().collect::<Vec<_>>().join(",");
    row.push('\n');
    row
}

/// `k_1..k_d, lambda_1..lambda_nc` rows; complex clouds carry `_re`/`_im` pairs.
pub fn bands_csv(bands: &BandStructure) -> String {
    let d = bands.grid.dim;
    let mut header: Vec<String> = (1..=d).map(|i| format!("k_{i}")).collect();
    let mut out = String::new();
    match &bands.values {
        BandValues::Real(vals) => {
            let nb = vals.first().map_or(0, Vec::len);
            header.extend((1..=nb).map(|j| format!("lambda_{j}")));
            out.push_str(&csv_row(header));
            for (k, v) in bands.points.iter().zip(vals) {
                out.push_str(&csv_row(k.iter().chain(v).map(|x| format_float(*x))));
            }
        }
        BandValues::Complex(vals) => {
            let nb = vals.first().map_or(0, Vec::len);
            header.extend((1..=nb).flat_map(|j| [format!("lambda_{j}_re"), format!("lambda_{j}_im")]));
            out.push_str(&csv_row(header));
            for (k, v) in bands.points.iter().zip(vals) {
                let cells = k
                    .iter()
                    .map(|x| format_float(*x))
                    .chain(v.iter().flat_map(|z| [format_float(z.re), format_float(z.im)]));
                out.push_str(&csv_row(cells));
            }
        }
    }
    out
}

/// One row per quasimomentum: `k_i`, then `re_ij, im_ij` in row-major order.
pub fn fiber_csv(samples: &[(Vec<f64>, CMatrix)]) -> String {
    let Some((k0, m0)) = samples.first() else {
        return String::new();
    };
    let n = m0.nrows();
    let mut header: Vec<String> = (1..=k0.len()).map(|i| format!("k_{i}")).collect();
    for i in 1..=n {
        for j in 1..=n {
            header.push(format!("re_{i}{j}"));
            header.push(format!("im_{i}{j}"));
        }
    }
    let mut out = csv_row(header);
    for (k, m) in samples {
        let mut cells: Vec<String> = k.iter().map(|x| format_float(*x)).collect();
        for i in 0..n {
            for j in 0..n {
                cells.push(format_float(m[(i, j)].re));
                cells.push(format_float(m[(i, j)].im));
            }
        }
        out.push_str(&csv_row(cells));
    }
    out
}

/// Window samples `g_1..g_d, c, re, im` in lattice order.
pub fn window_csv(f: &LatticeFunction, dim: usize) -> String {
    let mut header: Vec<String> = (1..=dim).map(|i| format!("g_{i}")).collect();
    header.extend(["c".to_string(), "re".to_string(), "im".to_string()]);
    let mut out = csv_row(header);
    for (p, v) in f.iter() {
        let cells =
            p.g.iter()
                .map(|x| x.to_string())
                .chain([p.c.to_string(), format_float(v.re), format_float(v.im)]);
        out.push_str(&csv_row(cells));
    }
    out
}

/// Serialized form of a spectral edge point.
#[derive(Clone, Debug, PartialEq, DeriveSerialize)]
pub struct FermiRecord {
    pub k: Vec<f64>,
    pub m: usize,
    pub ell0: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hessian: Option<Vec<Vec<f64>>>,
    pub det_leading_nonzero: bool,
}

impl From<&FermiPoint> for FermiRecord {
    fn from(p: &FermiPoint) -> Self {
        FermiRecord {
            k: p.coordinates(),
            m: p.multiplicity,
            ell0: p.ell0,
            hessian: p
                .hessian
                .as_ref()
                .map(|h| (0..h.nrows()).map(|i| h.row(i).iter().copied().collect()).collect()),
            det_leading_nonzero: p.det_leading_nonzero,
        }
    }
}

pub fn fermi_records(points: &[FermiPoint]) -> Vec<FermiRecord> {
    points.iter().map(FermiRecord::from).collect()
}
