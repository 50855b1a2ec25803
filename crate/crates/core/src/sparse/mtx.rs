use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::coo::CooMatrix;
use super::csr::CsrMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MtxSymmetry {
    General,
    Symmetric,
}

/// Reads a `coordinate real {general|symmetric}` MatrixMarket file.
///
/// Symmetric files are expanded to full storage, indices become 0-based,
/// duplicates are summed and zero-valued off-diagonals are dropped (counted
/// in [`CooMatrix::dropped_zeros`]).
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<CooMatrix> {
    let file = File::open(path)?;
    parse_matrix_market(BufReader::new(file))
}

pub fn parse_matrix_market(reader: impl BufRead) -> Result<CooMatrix> {
    let mut lines = reader.lines().enumerate().map(|(k, l)| (k + 1, l));
    let (line_no, banner) = match lines.next() {
        Some((k, l)) => (k, l?),
        None => return Err(parse_err(1, "empty file")),
    };
    let symmetry = parse_banner(line_no, &banner)?;

    let mut size: Option<(usize, usize)> = None;
    let mut coo = CooMatrix::new(0);
    let mut seen = 0usize;
    for (line_no, line) in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(parse_err(line_no, "size line must be `rows cols entries`"));
                }
                let rows = parse_usize(line_no, fields[0])?;
                let cols = parse_usize(line_no, fields[1])?;
                let nnz = parse_usize(line_no, fields[2])?;
                if rows != cols {
                    return Err(parse_err(
                        line_no,
                        &format!("matrix is {rows}x{cols}; only square matrices are supported"),
                    ));
                }
                coo = CooMatrix::new(rows);
                size = Some((rows, nnz));
            }
            Some((n, nnz)) => {
                if fields.len() != 3 {
                    return Err(parse_err(line_no, "entry line must be `row col value`"));
                }
                let i = parse_usize(line_no, fields[0])?;
                let j = parse_usize(line_no, fields[1])?;
                let v: f64 = fields[2]
                    .parse()
                    .map_err(|_| parse_err(line_no, &format!("bad value `{}`", fields[2])))?;
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(parse_err(
                        line_no,
                        &format!("index ({i}, {j}) out of range for a {n}x{n} matrix"),
                    ));
                }
                seen += 1;
                if seen > nnz {
                    return Err(parse_err(line_no, "more entries than declared"));
                }
                let (r, c) = (i - 1, j - 1);
                coo.push(r, c, v)?;
                if symmetry == MtxSymmetry::Symmetric && r != c {
                    coo.push(c, r, v)?;
                }
            }
        }
    }
    match size {
        None => Err(parse_err(line_no + 1, "missing size line")),
        Some((_, nnz)) if seen != nnz => Err(parse_err(
            line_no,
            &format!("declared {nnz} entries but found {seen}"),
        )),
        Some(_) => {
            coo.normalize();
            Ok(coo)
        }
    }
}

fn parse_banner(line_no: usize, banner: &str) -> Result<MtxSymmetry> {
    let tokens: Vec<String> = banner
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(line_no, "missing `%%MatrixMarket matrix` banner"));
    }
    if tokens[2] != "coordinate" {
        return Err(parse_err(line_no, &format!("unsupported format `{}`", tokens[2])));
    }
    if tokens[3] != "real" {
        return Err(parse_err(
            line_no,
            &format!("unsupported field `{}`; only real is accepted", tokens[3]),
        ));
    }
    match tokens[4].as_str() {
        "general" => Ok(MtxSymmetry::General),
        "symmetric" => Ok(MtxSymmetry::Symmetric),
        other => Err(parse_err(line_no, &format!("unsupported symmetry `{other}`"))),
    }
}

fn parse_usize(line_no: usize, s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| parse_err(line_no, &format!("bad integer `{s}`")))
}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::Parse {
        line,
        msg: msg.to_string(),
    }
}

/// Writes `m` in coordinate real format. With [`MtxSymmetry::Symmetric`] only
/// the lower triangle is written; the caller is responsible for `m` actually
/// being symmetric.
pub fn write_matrix_market(
    path: impl AsRef<Path>,
    m: &CsrMatrix,
    symmetry: MtxSymmetry,
) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    let keep = |i: usize, j: usize| symmetry == MtxSymmetry::General || j <= i;
    let count = m.triplets().filter(|&(i, j, _)| keep(i, j)).count();
    let kind = match symmetry {
        MtxSymmetry::General => "general",
        MtxSymmetry::Symmetric => "symmetric",
    };
    writeln!(out, "%%MatrixMarket matrix coordinate real {kind}")?;
    writeln!(out, "{} {} {}", m.n(), m.n(), count)?;
    for (i, j, v) in m.triplets().filter(|&(i, j, _)| keep(i, j)) {
        // `{:?}` prints the shortest string that parses back to the same f64
        writeln!(out, "{} {} {:?}", i + 1, j + 1, v)?;
    }
    out.flush()?;
    Ok(())
}
