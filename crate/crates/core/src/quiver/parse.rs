//! Reader and writer for the line-oriented quiver spec format.
//!
//! ```text
//! # comment
//! quiver bondal
//! vertices: 1 2 3
//! arrows:
//!   a1: 1 -> 2
//! relations:
//!   b1*a2 - 1/2 b2*a1
//! ```
//!
//! Paths are written in functional order: `b1*a2` applies `a2` first.
//! Coefficients are optional integers or fractions `p/q` separated from the
//! path by whitespace; the default coefficient is 1.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Arrow, BoundQuiver, Path, Quiver, RelationExpr};
use crate::error::{Error, Result};
use crate::linalg::Rational;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Arrows,
    Relations,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Strips a trailing `#` comment.
pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Column (1-based, in characters) of byte offset `offset` within `line`.
pub(crate) fn column_of(line: &str, offset: usize) -> usize {
    line[..offset].chars().count() + 1
}

pub fn parse_quiver_spec(text: &str) -> Result<BoundQuiver> {
    let mut name: Option<String> = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows: Vec<(usize, String, String, String)> = Vec::new();
    let mut relation_lines: Vec<(usize, String)> = Vec::new();
    let mut section = Section::Header;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();

        if let Some(rest) = trimmed.strip_prefix("quiver") {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                if name.is_some() {
                    return Err(syntax(lineno, indent + 1, "duplicate `quiver` header"));
                }
                let n = rest.trim();
                if n.is_empty() || n.contains(char::is_whitespace) {
                    return Err(syntax(lineno, indent + 1, "expected `quiver <name>`"));
                }
                name = Some(n.to_string());
                section = Section::Header;
                continue;
            }
        }
        if let Some(rest) = trimmed.strip_prefix("vertices:") {
            if !vertices.is_empty() {
                return Err(syntax(lineno, indent + 1, "duplicate `vertices:` line"));
            }
            let mut seen = BTreeSet::new();
            for v in rest.split_whitespace() {
                if v.contains(':') {
                    let off = line.find(v).unwrap_or(0);
                    return Err(syntax(
                        lineno,
                        column_of(line, off),
                        format!("invalid vertex name `{v}`"),
                    ));
                }
                if !seen.insert(v) {
                    return Err(Error::Duplicate {
                        line: lineno,
                        what: "vertex",
                        name: v.to_string(),
                    });
                }
                vertices.push(v.to_string());
            }
            section = Section::Header;
            continue;
        }
        if trimmed == "arrows:" {
            section = Section::Arrows;
            continue;
        }
        if trimmed == "relations:" {
            section = Section::Relations;
            continue;
        }

        match section {
            Section::Header => {
                return Err(syntax(
                    lineno,
                    indent + 1,
                    format!("unexpected line `{trimmed}`"),
                ));
            }
            Section::Arrows => {
                let Some(colon) = line.find(':') else {
                    return Err(syntax(
                        lineno,
                        indent + 1,
                        "expected `name: source -> target`",
                    ));
                };
                let aname = line[..colon].trim();
                if !is_identifier(aname) {
                    return Err(syntax(
                        lineno,
                        indent + 1,
                        format!("invalid arrow name `{aname}`"),
                    ));
                }
                let body = &line[colon + 1..];
                let Some(arrow_pos) = body.find("->") else {
                    return Err(syntax(lineno, column_of(line, colon + 1), "expected `->`"));
                };
                let src = body[..arrow_pos].trim();
                let tgt = body[arrow_pos + 2..].trim();
                if src.is_empty() || src.contains(char::is_whitespace) {
                    return Err(syntax(
                        lineno,
                        column_of(line, colon + 1),
                        "expected a single source vertex",
                    ));
                }
                if tgt.is_empty() || tgt.contains(char::is_whitespace) {
                    return Err(syntax(
                        lineno,
                        column_of(line, colon + 1 + arrow_pos + 2),
                        "expected a single target vertex",
                    ));
                }
                arrows.push((lineno, aname.to_string(), src.to_string(), tgt.to_string()));
            }
            Section::Relations => relation_lines.push((lineno, line.to_string())),
        }
    }

    if vertices.is_empty() {
        return Err(Error::NoVertices);
    }
    let name = name.ok_or_else(|| syntax(1, 1, "missing `quiver <name>` header"))?;

    let mut arrow_list = Vec::with_capacity(arrows.len());
    let mut names = BTreeSet::new();
    for (lineno, aname, src, tgt) in &arrows {
        if !names.insert(aname.clone()) {
            return Err(Error::Duplicate {
                line: *lineno,
                what: "arrow",
                name: aname.clone(),
            });
        }
        let lookup = |v: &str| {
            vertices
                .iter()
                .position(|x| x == v)
                .ok_or_else(|| Error::UnknownVertex {
                    line: *lineno,
                    name: v.to_string(),
                })
        };
        arrow_list.push(Arrow {
            name: aname.clone(),
            source: lookup(src)?,
            target: lookup(tgt)?,
        });
    }
    let quiver = Quiver::new(name, vertices, arrow_list)?;

    let mut relations = Vec::with_capacity(relation_lines.len());
    for (lineno, line) in &relation_lines {
        relations.push(parse_relation(&quiver, line, *lineno)?);
    }
    Ok(BoundQuiver::new(quiver, relations))
}

#[derive(Debug)]
enum Token {
    Plus,
    Minus,
    Number(Rational),
    Path(Vec<String>),
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<(usize, Token)>> {
    let bytes = line.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let col = column_of(line, start);
        match c {
            '+' => {
                out.push((col, Token::Plus));
                i += 1;
            }
            '-' => {
                out.push((col, Token::Minus));
                i += 1;
            }
            '0'..='9' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'/') {
                    i += 1;
                }
                let lit = &line[start..i];
                let value = parse_rational(lit)
                    .ok_or_else(|| syntax(lineno, col, format!("invalid coefficient `{lit}`")))?;
                out.push((col, Token::Number(value)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut names = Vec::new();
                loop {
                    let s = i;
                    while i < bytes.len()
                        && (bytes[i].is_ascii_alphanumeric()
                            || bytes[i] == b'_'
                            || bytes[i] == b'\'')
                    {
                        i += 1;
                    }
                    if s == i {
                        return Err(syntax(
                            lineno,
                            column_of(line, s),
                            "expected arrow name after `*`",
                        ));
                    }
                    names.push(line[s..i].to_string());
                    if i < bytes.len() && bytes[i] == b'*' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                out.push((col, Token::Path(names)));
            }
            _ => {
                let ch = line[start..].chars().next().unwrap_or('?');
                return Err(syntax(lineno, col, format!("unexpected character `{ch}`")));
            }
        }
    }
    Ok(out)
}

fn parse_rational(lit: &str) -> Option<Rational> {
    let (n, d) = match lit.split_once('/') {
        Some((n, d)) => (n, d),
        None => (lit, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

fn parse_relation(quiver: &Quiver, line: &str, lineno: usize) -> Result<RelationExpr> {
    let tokens = tokenize(line, lineno)?;
    let mut terms: Vec<(Rational, Path)> = Vec::new();
    let mut iter = tokens.into_iter().peekable();
    let mut first = true;
    while iter.peek().is_some() {
        let mut sign = Rational::one();
        let mut saw_sign = false;
        if let Some((_, Token::Plus | Token::Minus)) = iter.peek() {
            if let Some((_, Token::Minus)) = iter.next() {
                sign = -sign;
            }
            saw_sign = true;
        }
        if !first && !saw_sign {
            let col = iter.peek().map_or(1, |(c, _)| *c);
            return Err(syntax(lineno, col, "expected `+` or `-` between terms"));
        }
        let mut coeff = Rational::one();
        if let Some((_, Token::Number(_))) = iter.peek() {
            if let Some((_, Token::Number(v))) = iter.next() {
                coeff = v;
            }
        }
        match iter.next() {
            Some((col, Token::Path(names))) => {
                let mut idx = Vec::with_capacity(names.len());
                for n in &names {
                    idx.push(quiver.arrow_index(n).ok_or_else(|| Error::UnknownArrow {
                        line: lineno,
                        name: n.clone(),
                    })?);
                }
                let path = quiver.path_from_indices(&idx).map_err(|e| match e {
                    Error::CompositionMismatch { .. } => syntax(
                        lineno,
                        col,
                        format!("path `{}` does not compose: {e}", names.join("*")),
                    ),
                    other => other,
                })?;
                terms.push((sign * coeff, path));
            }
            Some((col, _)) => return Err(syntax(lineno, col, "expected a path")),
            None => {
                return Err(syntax(
                    lineno,
                    line.trim_end().chars().count() + 1,
                    "expected a path at end of line",
                ))
            }
        }
        first = false;
    }
    RelationExpr::new(terms).map_err(|message| Error::InvalidRelation {
        line: lineno,
        message,
    })
}

/// Renders a bound quiver back into spec text; parsing the output yields an equal value.
pub fn format_quiver_spec(bq: &BoundQuiver) -> String {
    let q = &bq.quiver;
    let mut s = format!(
        "quiver {}\nvertices: {}\n",
        q.name(),
        q.vertices().join(" ")
    );
    if !q.arrows().is_empty() {
        s.push_str("arrows:\n");
        for a in q.arrows() {
            s.push_str(&format!(
                "  {}: {} -> {}\n",
                a.name,
                q.vertex_name(a.source),
                q.vertex_name(a.target)
            ));
        }
    }
    if !bq.relations.is_empty() {
        s.push_str("relations:\n");
        for r in &bq.relations {
            s.push_str(&format!("  {}\n", r.display(q)));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, q_frac};

    #[test]
    fn parses_bondal() {
        let bq = BoundQuiver::bondal();
        assert_eq!(bq.quiver.name(), "bondal");
        assert_eq!(bq.quiver.vertex_count(), 3);
        assert_eq!(bq.quiver.arrows().len(), 4);
        assert_eq!(bq.relations.len(), 2);
        let shown: Vec<String> = bq.relations.iter().map(|r| r.display(&bq.quiver)).collect();
        assert_eq!(shown, vec!["b1*a2", "b2*a1"]);
    }

    #[test]
    fn single_vertex() {
        let bq = parse_quiver_spec("quiver pt\nvertices: x\n").unwrap();
        assert_eq!(bq.quiver.vertex_count(), 1);
        assert!(bq.quiver.arrows().is_empty());
    }

    #[test]
    fn linear_combination_relation() {
        let text = "quiver k\nvertices: 1 2 3\narrows:\n a1: 1 -> 2\n a2: 1 -> 2\n b1: 2 -> 3\n b2: 2 -> 3\nrelations:\n b1*a1 - b2*a2\n";
        let bq = parse_quiver_spec(text).unwrap();
        let r = &bq.relations[0];
        assert_eq!(r.terms.len(), 2);
        let coeffs: Vec<Rational> = r.terms.iter().map(|(c, _)| c.clone()).collect();
        assert!(coeffs.contains(&q(1)) && coeffs.contains(&q(-1)));
    }

    #[test]
    fn rational_coefficients() {
        let text = "quiver k\nvertices: 1 2 3\narrows:\n a: 1 -> 2\n b: 2 -> 3\n c: 1 -> 2\nrelations:\n -2/3 b*a + 4 b*c\n";
        let bq = parse_quiver_spec(text).unwrap();
        let r = &bq.relations[0];
        let a_term = r
            .terms
            .iter()
            .find(|(_, p)| bq.quiver.display_path(p) == "b*a")
            .unwrap();
        assert_eq!(a_term.0, q_frac(-2, 3));
    }

    #[test]
    fn roundtrip_through_formatter() {
        let bq = BoundQuiver::bondal();
        assert_eq!(parse_quiver_spec(&format_quiver_spec(&bq)).unwrap(), bq);
    }

    fn err(text: &str) -> Error {
        parse_quiver_spec(text).unwrap_err()
    }

    #[test]
    fn syntax_error_has_location() {
        let e = err("quiver q\nvertices: 1 2\narrows:\n a: 1 => 2\n");
        assert!(matches!(e, Error::Syntax { line: 4, .. }), "{e}");
        let e =
            err("quiver q\nvertices: 1 2 3\narrows:\n a: 1 -> 2\n b: 2 -> 3\nrelations:\n b*a $\n");
        assert_eq!(
            e,
            Error::Syntax {
                line: 7,
                column: 6,
                message: "unexpected character `$`".into()
            }
        );
    }

    #[test]
    fn unknown_names() {
        let e = err("quiver q\nvertices: 1 2\narrows:\n a: 1 -> 7\n");
        assert_eq!(
            e,
            Error::UnknownVertex {
                line: 4,
                name: "7".into()
            }
        );
        let e =
            err("quiver q\nvertices: 1 2 3\narrows:\n a: 1 -> 2\n b: 2 -> 3\nrelations:\n b*z\n");
        assert_eq!(
            e,
            Error::UnknownArrow {
                line: 7,
                name: "z".into()
            }
        );
    }

    #[test]
    fn non_parallel_relation() {
        let text = "quiver q\nvertices: 1 2 3 4\narrows:\n a: 1 -> 2\n b: 2 -> 3\n c: 2 -> 4\nrelations:\n b*a + c*a\n";
        assert!(matches!(err(text), Error::InvalidRelation { line: 8, .. }));
    }

    #[test]
    fn short_relation_rejected() {
        let text = "quiver q\nvertices: 1 2\narrows:\n a: 1 -> 2\nrelations:\n a\n";
        assert!(matches!(err(text), Error::InvalidRelation { line: 6, .. }));
    }

    #[test]
    fn cyclic_rejected() {
        let text = "quiver q\nvertices: 1 2\narrows:\n a: 1 -> 2\n b: 2 -> 1\n";
        assert!(matches!(err(text), Error::CyclicQuiver { .. }));
    }

    #[test]
    fn empty_spec_has_no_vertices() {
        assert_eq!(err("# nothing here\n"), Error::NoVertices);
        assert_eq!(err("quiver empty\n"), Error::NoVertices);
    }

    #[test]
    fn duplicate_arrow() {
        let text = "quiver q\nvertices: 1 2\narrows:\n a: 1 -> 2\n a: 1 -> 2\n";
        assert_eq!(
            err(text),
            Error::Duplicate {
                line: 5,
                what: "arrow",
                name: "a".into()
            }
        );
    }
}
