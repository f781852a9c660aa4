//! Wavefront OBJ export of a sampled scale body.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scale::ScaleBody3D;

fn coord(x: f64) -> String {
    // normalize negative zero so that output does not depend on rounding signs
    format!("{:.16e}", if x == 0.0 { 0.0 } else { x })
}

/// OBJ text: `v` lines, then 1-indexed `f` triangles (or an `l` segment).
/// Bodies of dimension ≤ 2 carry a `# degenerate: dim=D` comment.
pub fn write_obj(body: &ScaleBody3D) -> Result<String> {
    if body.samples.is_empty() || body.hull_vertices.is_empty() {
        return Err(Error::Validation("cannot export an empty body".into()));
    }
    let mut out = String::new();
    out.push_str("# spectral scale hull\n");
    if body.affine_dimension <= 2 {
        writeln!(out, "# degenerate: dim={}", body.affine_dimension).unwrap();
    }
    for v in &body.hull_vertices {
        writeln!(out, "v {} {} {}", coord(v[0]), coord(v[1]), coord(v[2])).unwrap();
    }
    if body.affine_dimension == 1 && body.hull_vertices.len() == 2 {
        out.push_str("l 1 2\n");
    }
    for t in &body.hull_triangles {
        writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1).unwrap();
    }
    Ok(out)
}

/// Writes [`write_obj`] output to `path`; nothing is written on error.
pub fn export_mesh(body: &ScaleBody3D, path: &Path) -> Result<()> {
    let text = write_obj(body)?;
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{CartesianPair, ComplexMatrix};
    use crate::scale::scale_body;

    #[test]
    fn empty_body_writes_nothing() {
        let body = ScaleBody3D {
            samples: Vec::new(),
            hull_vertices: Vec::new(),
            hull_triangles: Vec::new(),
            affine_dimension: 0,
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.obj");
        assert!(export_mesh(&body, &path).is_err());
        assert!(!path.exists());
    }

    #[test]
    fn full_body_is_a_closed_surface() {
        let a1 = ComplexMatrix::from_row_major(3, &[1., 0.5, 0., 0.5, -1., 0.2, 0., 0.2, 0.3], &[0., 0.1, -0.4, -0.1, 0., 0., 0.4, 0., 0.]).unwrap();
        let a2 = ComplexMatrix::from_real(3, &[0., 1., 0., 1., 2., 0., 0., 0., -1.]).unwrap();
        let body = scale_body(&CartesianPair::new(a1, a2).unwrap(), 2000).unwrap();
        assert_eq!(body.affine_dimension, 3);
        let text = write_obj(&body).unwrap();
        assert!(!text.contains("degenerate"));
        assert_eq!(write_obj(&body).unwrap(), text);
        let mesh = body.mesh();
        assert!(mesh.is_closed());
        assert_eq!(mesh.euler_characteristic(), 2);
        let faces = text.lines().filter(|l| l.starts_with("f ")).count();
        assert_eq!(faces, body.hull_triangles.len());
    }

    #[test]
    fn segment_body_gets_a_line() {
        let pair = CartesianPair::new(ComplexMatrix::identity(2), ComplexMatrix::identity(2)).unwrap();
        let body = scale_body(&pair, 50).unwrap();
        let text = write_obj(&body).unwrap();
        assert!(text.contains("# degenerate: dim=1\n") && text.contains("l 1 2\n"), "{text}");
    }
}
