//! File formats: JSON matrix input, JSON reports with lossless floats, and
//! Wavefront OBJ meshes.

mod matrix_file;
mod obj;
pub mod report;

pub use matrix_file::{
    parse_matrix_file, parse_matrix_str, read_matrix_file, MatrixFile, MatrixSource,
};
pub use obj::{export_mesh, write_obj};
pub use report::{sha256_hex, to_json_string, Report};
