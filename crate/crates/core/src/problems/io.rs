//! Plain-text instance format:
//!
//! ```text
//! M N
//! a_11 ... a_1N      (M rows)
//! ...
//! b_1 ... b_M
//! ```
//!
//! Values are written with 17 significant digits so a round trip is exact.

use std::fmt::Write as _;
use std::path::Path;

use super::{Family, Matrix, ProblemInstance};
use crate::{Error, Result};

pub fn format_instance(problem: &ProblemInstance) -> String {
    let a = problem.matrix();
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", a.rows(), a.cols());
    let write_row = |out: &mut String, values: &mut dyn Iterator<Item = f64>| {
        let row: Vec<String> = values.map(|v| format!("{v:.16e}")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    };
    for i in 0..a.rows() {
        write_row(&mut out, &mut (0..a.cols()).map(|j| a.get(i, j)));
    }
    write_row(&mut out, &mut problem.b().iter().copied());
    out
}

pub fn write_instance(problem: &ProblemInstance, path: &Path) -> Result<()> {
    std::fs::write(path, format_instance(problem)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn parse_instance(text: &str, family: Family) -> Result<ProblemInstance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let parse_row = |line: usize, l: &str, expected: usize| -> Result<Vec<f64>> {
        let values = l
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>().map_err(|_| Error::Format {
                    line,
                    message: format!("'{t}' is not a number"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() != expected {
            return Err(Error::Format {
                line,
                message: format!("expected {expected} values, found {}", values.len()),
            });
        }
        Ok(values)
    };

    let (line, header) = lines.next().ok_or(Error::Format {
        line: 1,
        message: "missing 'M N' header".into(),
    })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Format {
            line,
            message: "header must be two positive integers".into(),
        })?;
    let [m, n] = dims[..] else {
        return Err(Error::Format {
            line,
            message: "header must be two positive integers".into(),
        });
    };
    if m == 0 || n == 0 {
        return Err(Error::Format {
            line,
            message: "M and N must be positive".into(),
        });
    }
    let mut a = Matrix::zeros(m, n);
    for i in 0..m {
        let (line, l) = lines.next().ok_or(Error::Format {
            line: line + i + 1,
            message: format!("missing row {} of A", i + 1),
        })?;
        for (j, v) in parse_row(line, l, n)?.into_iter().enumerate() {
            a.set(i, j, v);
        }
    }
    let (line, l) = lines.next().ok_or(Error::Format {
        line: line + m + 1,
        message: "missing b row".into(),
    })?;
    let b = parse_row(line, l, m)?;
    if let Some((line, _)) = lines.next() {
        return Err(Error::Format {
            line,
            message: "unexpected trailing data".into(),
        });
    }
    ProblemInstance::with_scalar_blocks(family, a, b)
}

pub fn read_instance(path: &Path, family: Family) -> Result<ProblemInstance> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_instance(&text, family)
}
