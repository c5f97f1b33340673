//! Text format for generator matrices and code families.
//!
//! ```text
//! # comment
//! n=8 s=2          optional header, validated against the parsed family
//! ...11.11         one generator row per line: '1', '0', or '.' for zero
//! ..11.1.1
//!                  a blank line ends a code
//! 1.11...1
//! ---              a line of three dashes starts the second family
//! 111
//!
//! .11
//! 11.
//! ```
//!
//! Output always uses `0` and `1`.

use std::fmt::Write as _;

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::family::CodeFamily;
use crate::gf2::{BitMatrix, BitVector};

/// Optional `n=<int> s=<int>` header line.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct Header {
    pub n: Option<usize>,
    pub s: Option<usize>,
    pub line: usize,
}

/// One parsed family: its codes in order, with the line each code starts on.
#[derive(Clone, Debug)]
pub struct FamilyBlock {
    pub header: Option<Header>,
    pub codes: Vec<LinearCode>,
    pub code_lines: Vec<usize>,
    /// First line of the family section.
    pub line: usize,
}

impl FamilyBlock {
    pub fn into_family(self) -> Result<CodeFamily> {
        CodeFamily::new(self.codes).map_err(|e| Error::Parse {
            line: self.line,
            column: 1,
            message: e.to_string(),
        })
    }
}

/// A parsed file holding one or two families.
#[derive(Clone, Debug)]
pub struct FamilyFile {
    pub families: Vec<FamilyBlock>,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_header(text: &str, line: usize, indent: usize) -> Result<Header> {
    let mut header = Header {
        line,
        ..Header::default()
    };
    let mut search_from = 0;
    for field in text.split_whitespace() {
        let pos = text[search_from..].find(field).expect("field comes from text") + search_from;
        search_from = pos + field.len();
        let column = indent + pos + 1;
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| parse_error(line, column, format!("expected key=value, found {field:?}")))?;
        let value: usize = value
            .parse()
            .map_err(|_| parse_error(line, column, format!("invalid number in {field:?}")))?;
        match key {
            "n" => header.n = Some(value),
            "s" => header.s = Some(value),
            other => return Err(parse_error(line, column, format!("unknown header key {other:?}"))),
        }
    }
    Ok(header)
}

fn parse_row(text: &str, line: usize, indent: usize) -> Result<BitVector> {
    text.parse::<BitVector>().map_err(|e| match e {
        Error::Parse { column, message, .. } => parse_error(line, column + indent, message),
        other => other,
    })
}

/// `(line, indent, row)` for each generator row.
type Rows = Vec<(usize, usize, BitVector)>;

struct Section {
    header: Option<Header>,
    blocks: Vec<(usize, Rows)>,
    line: usize,
}

/// Parses a file holding one family, or two families separated by `---`.
pub fn parse_family_file(src: &str) -> Result<FamilyFile> {
    let mut sections = vec![Section {
        header: None,
        blocks: Vec::new(),
        line: 1,
    }];
    let mut open_block = false;

    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        let indent = raw.len() - raw.trim_start().len();
        let section = sections.last_mut().expect("at least one section");
        if trimmed.is_empty() || trimmed.starts_with('#') {
            if trimmed.is_empty() {
                open_block = false;
            }
            continue;
        }
        if trimmed == "---" {
            if sections.len() == 2 {
                return Err(parse_error(line, indent + 1, "at most two families per file"));
            }
            sections.push(Section {
                header: None,
                blocks: Vec::new(),
                line: line + 1,
            });
            open_block = false;
            continue;
        }
        if trimmed.contains('=') {
            if section.header.is_some() || !section.blocks.is_empty() {
                return Err(parse_error(line, indent + 1, "header must precede the generator rows"));
            }
            section.header = Some(parse_header(trimmed, line, indent)?);
            continue;
        }
        let row = parse_row(trimmed, line, indent)?;
        if !open_block {
            section.blocks.push((line, Vec::new()));
            open_block = true;
        }
        section
            .blocks
            .last_mut()
            .expect("block opened above")
            .1
            .push((line, indent, row));
    }

    let mut families = Vec::with_capacity(sections.len());
    for section in sections {
        let mut codes = Vec::new();
        let mut code_lines = Vec::new();
        let mut n_seen: Option<usize> = None;
        for (start, rows) in section.blocks {
            let n = rows[0].2.len();
            for (line, indent, row) in &rows {
                if row.len() != n {
                    return Err(parse_error(
                        *line,
                        indent + 1,
                        format!("row has length {} but the code has length {n}", row.len()),
                    ));
                }
            }
            if let Some(expected) = n_seen {
                if n != expected {
                    return Err(parse_error(
                        start,
                        1,
                        format!("code length {n} differs from {expected} earlier in the family"),
                    ));
                }
            }
            n_seen = Some(n);
            let rows = rows.into_iter().map(|(_, _, r)| r).collect();
            codes.push(LinearCode::from_matrix(&BitMatrix::from_rows(n, rows)?));
            code_lines.push(start);
        }
        if let Some(h) = section.header {
            if let (Some(n), Some(found)) = (h.n, n_seen) {
                if n != found {
                    return Err(parse_error(
                        h.line,
                        1,
                        format!("header n={n} but codes have length {found}"),
                    ));
                }
            }
            if let Some(s) = h.s {
                if s != codes.len() {
                    return Err(parse_error(
                        h.line,
                        1,
                        format!("header s={s} but {} codes follow", codes.len()),
                    ));
                }
            }
        }
        families.push(FamilyBlock {
            header: section.header,
            codes,
            code_lines,
            line: section.line,
        });
    }
    Ok(FamilyFile { families })
}

/// Parses a file expected to hold exactly one code. A file with only an
/// `n=<int>` header describes the zero code of that length.
pub fn parse_single_code(src: &str) -> Result<LinearCode> {
    let file = parse_family_file(src)?;
    if file.families.len() != 1 {
        return Err(parse_error(
            1,
            1,
            "expected a single generator block, found two families",
        ));
    }
    let block = file.families.into_iter().next().expect("one family");
    match block.codes.len() {
        0 => match block.header.and_then(|h| h.n) {
            Some(n) if n > 0 => Ok(LinearCode::zero(n)),
            _ => Err(parse_error(
                1,
                1,
                "empty file: give generator rows or an n=<int> header",
            )),
        },
        1 => Ok(block.codes.into_iter().next().expect("one code")),
        k => Err(parse_error(
            block.code_lines[1],
            1,
            format!("expected a single generator block, found {k}"),
        )),
    }
}

/// Writes a family in the text format, with a header line.
pub fn write_family(family: &CodeFamily) -> String {
    let mut out = String::new();
    writeln!(out, "n={} s={}", family.length(), family.size()).expect("string write");
    for (i, code) in family.codes().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for row in code.generator().rows() {
            writeln!(out, "{row}").expect("string write");
        }
    }
    out
}

/// Writes two families separated by `---`.
pub fn write_pair(c: &CodeFamily, d: &CodeFamily) -> String {
    format!("{}---\n{}", write_family(c), write_family(d))
}
