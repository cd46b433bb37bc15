//! Gluing-table text format. One row per tetrahedron:
//!
//! ```text
//! tet 0: 1.0(123) 1.1(023) 1.2(013) 1.3(012)
//! ```
//!
//! Entry k glues face k to `target.face(images)`, where the three digits are
//! the target-tet vertices carrying this face's vertices in ascending order.
//! Rows carry explicit indices and may appear in any order.

use crate::error::{Error, Result};
use crate::tricomplex::{GlueSpec, Triangulation};
use std::path::Path;

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(line_text: &'a str, line: usize) -> Self {
        Cursor {
            chars: line_text.chars().collect(),
            pos: 0,
            line,
            text: line_text,
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::ParseError {
            line: self.line,
            col: self.pos + 1,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c == ' ' || c == '\t') {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<()> {
        for c in w.chars() {
            self.expect(c)?;
        }
        Ok(())
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        self.chars[start..self.pos]
            .iter()
            .collect::<String>()
            .parse()
            .map_err(|_| self.err("number out of range"))
    }

    fn digit03(&mut self) -> Result<u8> {
        match self.peek() {
            Some(c @ '0'..='3') => {
                self.pos += 1;
                Ok(c as u8 - b'0')
            }
            _ => Err(self.err("expected a vertex digit 0-3")),
        }
    }

    fn at_end(&self) -> bool {
        self.pos == self.chars.len()
    }

    fn rest_is_ws(&self) -> bool {
        self.chars[self.pos..]
            .iter()
            .all(|&c| c == ' ' || c == '\t')
    }

    #[allow(dead_code)]
    fn source(&self) -> &str {
        self.text
    }
}

/// Parses a gluing table. Every tet index in `0..n` must appear exactly once,
/// where `n` is one more than the largest index mentioned.
pub fn parse_triangulation(text: &str) -> Result<Triangulation> {
    let mut rows: Vec<(usize, [Option<GlueSpec>; 4], usize)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let mut c = Cursor::new(content, line);
        c.skip_ws();
        c.expect_word("tet")?;
        c.skip_ws();
        let index = c.number()?;
        c.skip_ws();
        c.expect(':')?;
        let mut row: [Option<GlueSpec>; 4] = [None; 4];
        for slot in row.iter_mut() {
            c.skip_ws();
            let tet = c.number()?;
            c.expect('.')?;
            let face = c.digit03()?;
            c.expect('(')?;
            let images = [c.digit03()?, c.digit03()?, c.digit03()?];
            c.expect(')')?;
            *slot = Some(GlueSpec { tet, face, images });
        }
        c.skip_ws();
        if !c.at_end() && !c.rest_is_ws() {
            return Err(c.err("trailing content after four gluing entries"));
        }
        rows.push((index, row, line));
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = rows.iter().map(|&(i, _, _)| i).max().unwrap() + 1;
    let mut table: Vec<[Option<GlueSpec>; 4]> = vec![[None; 4]; n];
    let mut seen = vec![false; n];
    for (index, row, line) in rows {
        if seen[index] {
            return Err(Error::ParseError {
                line,
                col: 1,
                message: format!("duplicate row for tet {index}"),
            });
        }
        seen[index] = true;
        table[index] = row;
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::ValidationError(format!(
            "no row for tet {missing} (indices must cover 0..{n})"
        )));
    }
    Triangulation::build(&table)
}

/// Serializes in index order, one row per tet, LF newlines.
pub fn format_triangulation(t: &Triangulation) -> String {
    let mut out = String::new();
    for (i, row) in t.table().iter().enumerate() {
        out.push_str(&format!("tet {i}:"));
        for entry in row {
            let g = entry.expect("built triangulations have full tables");
            out.push_str(&format!(
                " {}.{}({}{}{})",
                g.tet, g.face, g.images[0], g.images[1], g.images[2]
            ));
        }
        out.push('\n');
    }
    out
}

pub fn read_triangulation(path: impl AsRef<Path>) -> Result<Triangulation> {
    parse_triangulation(&std::fs::read_to_string(path)?)
}

pub fn write_triangulation(path: impl AsRef<Path>, t: &Triangulation) -> Result<()> {
    std::fs::write(path, format_triangulation(t))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tricomplex::fixtures::{boundary_four_simplex, doubled_tetrahedron};

    #[test]
    fn round_trip_preserves_structure_and_hash() {
        for t in [boundary_four_simplex(), doubled_tetrahedron()] {
            let text = format_triangulation(&t);
            let back = parse_triangulation(&text).unwrap();
            assert_eq!(back.canonical_hash(), t.canonical_hash());
            assert_eq!(back.f_vector(), t.f_vector());
            assert_eq!(format_triangulation(&back), text);
        }
    }

    #[test]
    fn row_order_and_comments_do_not_matter() {
        let t = boundary_four_simplex();
        let text = format_triangulation(&t);
        let mut lines: Vec<&str> = text.lines().collect();
        lines.reverse();
        let shuffled = format!(
            "# reordered table\n{}\n  # trailing comment line\n",
            lines.join("\n")
        );
        let back = parse_triangulation(&shuffled).unwrap();
        assert_eq!(back.canonical_hash(), t.canonical_hash());
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse_triangulation("tet 0: 1.0(123) 1.1(023) 1.2(013)") {
            Err(Error::ParseError { line: 1, col, .. }) => assert!(col > 30),
            other => panic!("expected ParseError, got {other:?}"),
        }
        match parse_triangulation("tet 0: 1.0(123) 1.1(023) 1.2(013) 1.9(012)") {
            Err(Error::ParseError { line: 1, col, .. }) => assert_eq!(col, 37),
            other => panic!("expected ParseError, got {other:?}"),
        }
        match parse_triangulation("tray 0:") {
            Err(Error::ParseError { line: 1, .. }) => {}
            other => panic!("expected ParseError, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_and_missing_rows_rejected() {
        let t = doubled_tetrahedron();
        let text = format_triangulation(&t);
        let first = text.lines().next().unwrap();
        let dup = format!("{text}{first}\n");
        assert!(matches!(
            parse_triangulation(&dup),
            Err(Error::ParseError { line: 3, .. })
        ));
        let gap = text.lines().next().unwrap().replace("tet 0", "tet 2");
        let missing = format!("{gap}\n{}\n", text.lines().nth(1).unwrap());
        assert!(matches!(
            parse_triangulation(&missing),
            Err(Error::ValidationError(_))
        ));
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(
            parse_triangulation("# only comments\n\n"),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn file_round_trip() {
        let t = doubled_tetrahedron();
        let dir = std::env::temp_dir().join("heegaard-core-tri-format-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("doubled.tri");
        write_triangulation(&path, &t).unwrap();
        let back = read_triangulation(&path).unwrap();
        assert_eq!(back.canonical_hash(), t.canonical_hash());
        std::fs::remove_dir_all(&dir).ok();
    }
}
