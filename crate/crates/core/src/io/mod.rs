//! Text formats and file persistence. All formats are line-oriented UTF-8
//! with LF newlines and `#` comments, and serializers emit rows in a fixed
//! canonical order so equal values produce byte-identical files.

pub mod tri_format;

pub use tri_format::{
    format_triangulation, parse_triangulation, read_triangulation, write_triangulation,
};
