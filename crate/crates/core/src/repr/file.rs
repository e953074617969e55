//! Representation files.
//!
//! ```text
//! # comment
//! quiver bondal.quiver        # quiver spec path, relative to this file
//! dim 1 = 1
//! dim 2 = 1
//! arrow a1                    # then dim(target) rows of dim(source) rationals
//!   1
//! ```
//!
//! Vertices without a `dim` line have dimension 0. Arrows without a block, or
//! with a block of no rows, are zero maps.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{make_representation, Representation};
use crate::error::{Error, Result};
use crate::linalg::{QMatrix, Rational};
use crate::quiver::parse::{column_of, strip_comment};
use crate::quiver::Algebra;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationFile {
    pub quiver_ref: String,
    /// vertex name -> (dimension, line)
    pub dims: BTreeMap<String, (usize, usize)>,
    /// arrow name -> (rows, line of the `arrow` header)
    pub arrows: BTreeMap<String, (Vec<Vec<Rational>>, usize)>,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn parse_entry(tok: &str) -> Option<Rational> {
    let (n, d) = tok.split_once('/').unwrap_or((tok, "1"));
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    (!d.is_zero()).then(|| Rational::new(n, d))
}

pub fn parse_representation(text: &str) -> Result<RepresentationFile> {
    let mut quiver_ref: Option<String> = None;
    let mut dims = BTreeMap::new();
    let mut arrows: BTreeMap<String, (Vec<Vec<Rational>>, usize)> = BTreeMap::new();
    let mut current: Option<String> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col0 = line.len() - line.trim_start().len() + 1;
        let mut words = trimmed.split_whitespace();
        let head = words.next().unwrap_or_default();
        match head {
            "quiver" => {
                if quiver_ref.is_some() {
                    return Err(syntax(lineno, col0, "duplicate `quiver` header"));
                }
                let r: Vec<&str> = words.collect();
                if r.len() != 1 {
                    return Err(syntax(lineno, col0, "expected `quiver <spec path>`"));
                }
                quiver_ref = Some(r[0].to_string());
                current = None;
            }
            "dim" => {
                // dim <vertex> = <n>
                let rest: Vec<&str> = words.collect();
                if rest.len() != 3 || rest[1] != "=" {
                    return Err(syntax(lineno, col0, "expected `dim <vertex> = <n>`"));
                }
                let n: usize = rest[2].parse().map_err(|_| {
                    let off = line.rfind(rest[2]).unwrap_or(0);
                    syntax(
                        lineno,
                        column_of(line, off),
                        format!("invalid dimension `{}`", rest[2]),
                    )
                })?;
                if dims.insert(rest[0].to_string(), (n, lineno)).is_some() {
                    return Err(Error::Duplicate {
                        line: lineno,
                        what: "dimension for vertex",
                        name: rest[0].to_string(),
                    });
                }
                current = None;
            }
            "arrow" => {
                let rest: Vec<&str> = words.collect();
                if rest.len() != 1 {
                    return Err(syntax(lineno, col0, "expected `arrow <name>`"));
                }
                let name = rest[0].to_string();
                if arrows.insert(name.clone(), (Vec::new(), lineno)).is_some() {
                    return Err(Error::Duplicate {
                        line: lineno,
                        what: "matrix for arrow",
                        name,
                    });
                }
                current = Some(name);
            }
            _ => {
                let Some(name) = &current else {
                    return Err(syntax(lineno, col0, format!("unexpected line `{trimmed}`")));
                };
                let mut row = Vec::new();
                let mut search_from = 0;
                for tok in trimmed.split_whitespace() {
                    let off = line[search_from..].find(tok).map_or(0, |o| o + search_from);
                    search_from = off + tok.len();
                    let v = parse_entry(tok).ok_or_else(|| {
                        syntax(
                            lineno,
                            column_of(line, off),
                            format!("invalid rational `{tok}`"),
                        )
                    })?;
                    row.push(v);
                }
                arrows
                    .get_mut(name)
                    .expect("current arrow registered")
                    .0
                    .push(row);
            }
        }
    }
    let quiver_ref =
        quiver_ref.ok_or_else(|| syntax(1, 1, "missing `quiver <spec path>` header"))?;
    Ok(RepresentationFile {
        quiver_ref,
        dims,
        arrows,
    })
}

impl RepresentationFile {
    pub fn build(&self, alg: &Algebra) -> Result<Representation> {
        let q = alg.quiver();
        let mut dims = vec![0usize; q.vertex_count()];
        for (name, &(n, line)) in &self.dims {
            let v = q.vertex_index(name).ok_or_else(|| Error::UnknownVertex {
                line,
                name: name.clone(),
            })?;
            dims[v] = n;
        }
        for (name, (_, line)) in &self.arrows {
            if q.arrow_index(name).is_none() {
                return Err(Error::UnknownArrow {
                    line: *line,
                    name: name.clone(),
                });
            }
        }
        let mut maps = Vec::with_capacity(q.arrows().len());
        for a in q.arrows() {
            let (h, w) = (dims[a.target], dims[a.source]);
            let m = match self.arrows.get(&a.name) {
                None => QMatrix::zeros(h, w),
                Some((rows, _)) if rows.is_empty() => QMatrix::zeros(h, w),
                Some((rows, line)) => {
                    if rows.len() != h || rows.iter().any(|r| r.len() != w) {
                        return Err(Error::ShapeMismatch(format!(
                            "line {line}: arrow {} needs {h} rows of {w} entries",
                            a.name
                        )));
                    }
                    QMatrix::from_rows(rows.clone(), w)
                }
            };
            maps.push(m);
        }
        make_representation(alg, dims, maps)
    }
}

pub fn format_representation(alg: &Algebra, rep: &Representation, quiver_ref: &str) -> String {
    let q = alg.quiver();
    let mut s = format!("quiver {quiver_ref}\n");
    for (v, name) in q.vertices().iter().enumerate() {
        s.push_str(&format!("dim {name} = {}\n", rep.dim(v)));
    }
    for (ai, a) in q.arrows().iter().enumerate() {
        s.push_str(&format!("arrow {}\n", a.name));
        let m = rep.map(ai);
        if m.cols() == 0 {
            continue;
        }
        for row in m.to_string_rows() {
            s.push_str("  ");
            s.push_str(&row.join(" "));
            s.push('\n');
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repr::{bondal_thin_object, projective_rep};

    const THIN: &str = include_str!("../../data/bondal_P.rep");

    #[test]
    fn parses_shipped_thin_object() {
        let alg = Algebra::bondal();
        let f = parse_representation(THIN).unwrap();
        assert_eq!(f.quiver_ref, "bondal.quiver");
        assert_eq!(f.build(&alg).unwrap(), bondal_thin_object(&alg).unwrap());
    }

    #[test]
    fn format_then_parse() {
        let alg = Algebra::bondal();
        let p1 = projective_rep(&alg, 0).unwrap();
        let text = format_representation(&alg, &p1, "bondal.quiver");
        assert_eq!(
            parse_representation(&text).unwrap().build(&alg).unwrap(),
            p1
        );
    }

    #[test]
    fn errors_carry_lines() {
        let alg = Algebra::bondal();
        let e = parse_representation("quiver b\ndim 1 = x\n").unwrap_err();
        assert!(
            matches!(
                e,
                Error::Syntax {
                    line: 2,
                    column: 9,
                    ..
                }
            ),
            "{e}"
        );
        let e = parse_representation("quiver b\narrow a1\n 1 q\n").unwrap_err();
        assert!(
            matches!(
                e,
                Error::Syntax {
                    line: 3,
                    column: 4,
                    ..
                }
            ),
            "{e}"
        );
        let e = parse_representation("quiver b\ndim 9 = 1\n")
            .unwrap()
            .build(&alg)
            .unwrap_err();
        assert_eq!(
            e,
            Error::UnknownVertex {
                line: 2,
                name: "9".into()
            }
        );
        let e = parse_representation("quiver b\ndim 1 = 1\ndim 2 = 1\narrow a1\n 1 2\n")
            .unwrap()
            .build(&alg)
            .unwrap_err();
        assert!(matches!(e, Error::ShapeMismatch(_)));
        let e = parse_representation("1 2 3\n").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 1, .. }));
    }

    #[test]
    fn relation_check_applies() {
        let alg = Algebra::bondal();
        let text = "quiver b\ndim 1 = 1\ndim 2 = 1\ndim 3 = 1\narrow a1\n 1\narrow a2\n 1\narrow b1\n 1\narrow b2\n 1\n";
        let e = parse_representation(text).unwrap().build(&alg).unwrap_err();
        assert!(matches!(e, Error::RelationViolated { .. }));
    }
}
