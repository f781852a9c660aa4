//! JSON reports. Every float is written in scientific notation with 17
//! significant digits; non-finite values become the strings `"inf"`, `"-inf"`
//! and `"nan"`.

use std::collections::BTreeMap;
use std::io;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::geometry::HorizontalFaceReport;
use crate::linalg::{Direction2, ExtendedReal};
use crate::pencil::PencilSpectrum;
use crate::scale::{FaceDescriptor, ScaleBody3D, ScalePolygon2D, Segment2D};
use crate::verify::VerificationReport;

struct ExactFloats(PrettyFormatter<'static>);

impl ExactFloats {
    fn new() -> Self {
        Self(PrettyFormatter::new())
    }
}

impl Formatter for ExactFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        write!(w, "{value:.8e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty JSON with lossless floats and a trailing newline.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloats::new());
    value.serialize(&mut ser).expect("in-memory JSON serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// A report document as written by the command-line tool.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// SHA-256 of the input file bytes, when there is one.
    pub input_digest: Option<String>,
    pub seed: Option<u64>,
    pub tolerances: BTreeMap<String, Value>,
    pub passed: Option<bool>,
    pub payload: Value,
}

impl Report {
    pub fn new(command: &str, input_digest: Option<String>) -> Self {
        Self {
            tool: "specscale".into(),
            version: crate::VERSION.into(),
            command: command.into(),
            input_digest,
            seed: None,
            tolerances: BTreeMap::new(),
            passed: None,
            payload: Value::Null,
        }
    }

    pub fn tolerance(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.into(), num(value));
        self
    }

    pub fn to_json(&self) -> String {
        to_json_string(self)
    }
}

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

fn point<const N: usize>(p: &[f64; N]) -> Value {
    nums(p)
}

fn complex(z: Complex64) -> Value {
    json!({"re": num(z.re), "im": num(z.im)})
}

pub fn extended(r: ExtendedReal) -> Value {
    match r {
        ExtendedReal::Finite(x) => num(x),
        ExtendedReal::Infinity => json!("inf"),
    }
}

fn direction(t: Direction2) -> Value {
    json!([num(t.t1()), num(t.t2())])
}

pub fn spectrum_json(s: &PencilSpectrum) -> Value {
    json!({
        "method": s.method.as_str(),
        "regular": s.regular,
        "finite": s.finite.iter().map(|&z| complex(z)).collect::<Vec<_>>(),
        "clusters": s.clusters.iter().map(|c| json!({
            "value": complex(c.value),
            "multiplicity": c.multiplicity,
        })).collect::<Vec<_>>(),
        "real_subset": nums(&s.real_subset),
        "has_infinity": s.has_infinity,
        "infinite_count": s.infinite_count,
        "tol": num(s.tol),
    })
}

pub fn face_json(f: &FaceDescriptor) -> Value {
    json!({
        "u": point(&f.u),
        "base": point(&f.base),
        "far": point(&f.far),
        "x_extent": num(f.x_extent),
        "kernel_dim": f.kernel_dim,
        "dimension": f.dimension,
        "t": f.t.map(direction),
        "tan_theta": f.tan_theta.map(extended),
    })
}

pub fn faces_json(r: &HorizontalFaceReport) -> Value {
    json!({
        "consistent": r.is_consistent(),
        "faces": r.faces.iter().map(face_json).collect::<Vec<_>>(),
        "pencil_reals": nums(&r.pencil_reals),
        "has_infinity": r.has_infinity,
        "matched": r.matched.iter().map(|m| json!({
            "face": m.face,
            "tan_theta": r.faces[m.face].tan_theta.map(extended),
            "root": extended(m.root),
            "deviation": num(m.deviation),
            "x_extent": num(r.faces[m.face].x_extent),
        })).collect::<Vec<_>>(),
        "unmatched_faces": r.unmatched_faces,
        "unmatched_roots": r.unmatched_roots.iter().map(|&x| extended(x)).collect::<Vec<_>>(),
        "tol": num(r.tol),
        "match_tol": num(r.match_tol),
    })
}

fn segment_json(s: &Segment2D) -> Value {
    json!({
        "chain": format!("{:?}", s.chain).to_lowercase(),
        "start": point(&s.start),
        "end": point(&s.end),
        "slope": num(s.slope),
    })
}

pub fn polygon_json(p: &ScalePolygon2D, horizontal: &[Segment2D]) -> Value {
    json!({
        "lower_vertices": p.lower_vertices.iter().map(point).collect::<Vec<_>>(),
        "upper_vertices": p.upper_vertices.iter().map(point).collect::<Vec<_>>(),
        "segment_slopes": nums(&p.segment_slopes),
        "upper_slopes": nums(&p.upper_slopes),
        "horizontal_segments": horizontal.iter().map(segment_json).collect::<Vec<_>>(),
    })
}

pub fn body_json(b: &ScaleBody3D) -> Value {
    json!({
        "directions": b.samples.len(),
        "affine_dimension": b.affine_dimension,
        "hull_vertices": b.hull_vertices.iter().map(point).collect::<Vec<_>>(),
        "hull_triangles": b.hull_triangles,
    })
}

pub fn verification_json(r: &VerificationReport) -> Value {
    json!({
        "subject": r.subject.as_str(),
        "status": r.status.as_str(),
        "passed": r.passed(),
        "max_residual": num(r.max_residual),
        "tolerance": num(r.tolerance),
        "seed": r.seed,
        "details": r.details.iter().map(|c| json!({
            "label": c.label,
            "status": c.status.as_str(),
            "residual": num(c.residual),
            "note": c.note,
        })).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_with_17_digits() {
        let xs: [f64; 7] = [0.1, 1.0 / 3.0, -2.5e-310, 1e308, 0.0, -0.0, 12345.678901234567];
        let text = to_json_string(&xs.to_vec());
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        for (a, b) in xs.iter().zip(&back) {
            assert_eq!(a.to_bits(), b.to_bits(), "{text}");
        }
        assert!(text.contains("3.3333333333333331e-1"), "{text}");
    }

    #[test]
    fn non_finite_values_become_strings() {
        let v = json!([num(f64::INFINITY), num(f64::NEG_INFINITY), num(f64::NAN), extended(ExtendedReal::Infinity)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["inf","-inf","nan","inf"]"#);
    }

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }
}
