//! Quivers, paths, relations and the bound quiver algebra `kQ/I`.

mod basis;
pub(crate) mod parse;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Rational;

pub use basis::{Algebra, AlgebraBasis, AlgebraElement};
pub use parse::{format_quiver_spec, parse_quiver_spec};

/// Source text of the built-in Bondal quiver.
pub const BONDAL_SPEC: &str = include_str!("../../data/bondal.quiver");

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite acyclic quiver. Vertices and arrows are addressed by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    name: String,
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    topo: Vec<usize>,
}

impl Quiver {
    /// Validates names, endpoints and acyclicity.
    pub fn new(name: impl Into<String>, vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::NoVertices);
        }
        let mut seen = BTreeMap::new();
        for v in &vertices {
            if seen.insert(v.as_str(), ()).is_some() {
                return Err(Error::Duplicate {
                    line: 0,
                    what: "vertex",
                    name: v.clone(),
                });
            }
        }
        let mut seen = BTreeMap::new();
        for a in &arrows {
            if seen.insert(a.name.as_str(), ()).is_some() {
                return Err(Error::Duplicate {
                    line: 0,
                    what: "arrow",
                    name: a.name.clone(),
                });
            }
            if a.source >= vertices.len() || a.target >= vertices.len() {
                return Err(Error::UnknownVertex {
                    line: 0,
                    name: format!("#{}", a.source.max(a.target)),
                });
            }
        }
        let topo = topological_order(vertices.len(), &arrows).map_err(|v| Error::CyclicQuiver {
            vertex: vertices[v].clone(),
        })?;
        Ok(Quiver {
            name: name.into(),
            vertices,
            arrows,
            topo,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Vertices ordered so every arrow points forward; ties broken by declaration order.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn arrows_between(&self, source: usize, target: usize) -> usize {
        self.arrows
            .iter()
            .filter(|a| a.source == source && a.target == target)
            .count()
    }

    pub fn lazy_path(&self, v: usize) -> Path {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn arrow_path(&self, a: usize) -> Path {
        let arrow = &self.arrows[a];
        Path {
            source: arrow.source,
            target: arrow.target,
            arrows: vec![a],
        }
    }

    /// Builds a path from arrow names in functional order (`["b1", "a2"]` applies `a2` first).
    pub fn path(&self, names: &[&str]) -> Result<Path> {
        let mut indices = Vec::with_capacity(names.len());
        for n in names {
            indices.push(self.arrow_index(n).ok_or_else(|| Error::UnknownArrow {
                line: 0,
                name: n.to_string(),
            })?);
        }
        self.path_from_indices(&indices)
    }

    pub fn path_from_indices(&self, arrows: &[usize]) -> Result<Path> {
        let (first, rest) = arrows
            .split_last()
            .ok_or_else(|| Error::Unsupported("empty arrow list; use lazy_path".into()))?;
        let mut p = self.arrow_path(*first);
        for &a in rest.iter().rev() {
            p = self.compose_paths(&self.arrow_path(a), &p)?;
        }
        Ok(p)
    }

    /// `p ∘ q`: apply `q` first, then `p`. Lazy paths act as identities.
    pub fn compose_paths(&self, p: &Path, q: &Path) -> Result<Path> {
        if p.source != q.target {
            return Err(Error::CompositionMismatch {
                left: self.display_path(p),
                right: self.display_path(q),
                left_source: self.vertices[p.source].clone(),
                right_target: self.vertices[q.target].clone(),
            });
        }
        let mut arrows = p.arrows.clone();
        arrows.extend_from_slice(&q.arrows);
        Ok(Path {
            source: q.source,
            target: p.target,
            arrows,
        })
    }

    /// All paths starting at `source`, lazy path included, in no particular order.
    pub fn paths_from(&self, source: usize) -> Vec<Path> {
        let mut out = vec![self.lazy_path(source)];
        let mut frontier = vec![self.lazy_path(source)];
        while let Some(p) = frontier.pop() {
            for (ai, a) in self.arrows.iter().enumerate() {
                if a.source == p.target {
                    let mut arrows = vec![ai];
                    arrows.extend_from_slice(&p.arrows);
                    let ext = Path {
                        source: p.source,
                        target: a.target,
                        arrows,
                    };
                    frontier.push(ext.clone());
                    out.push(ext);
                }
            }
        }
        out
    }

    pub fn display_path(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            format!("e_{}", self.vertices[p.source])
        } else {
            p.arrows
                .iter()
                .map(|&a| self.arrows[a].name.as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }
}

/// Kahn's algorithm; on a cycle returns a vertex lying on it.
fn topological_order(n: usize, arrows: &[Arrow]) -> std::result::Result<Vec<usize>, usize> {
    let mut indeg = vec![0usize; n];
    for a in arrows {
        indeg[a.target] += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut done = vec![false; n];
    while order.len() < n {
        let Some(v) = (0..n).find(|&v| !done[v] && indeg[v] == 0) else {
            return Err((0..n).find(|&v| !done[v]).unwrap_or(0));
        };
        done[v] = true;
        order.push(v);
        for a in arrows.iter().filter(|a| a.source == v) {
            indeg[a.target] -= 1;
        }
    }
    Ok(order)
}

/// A path in functional order: `arrows[0]` is applied last.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_lazy(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_lazy()
    }

    /// Arrows in the order they are applied.
    pub fn application_order(&self) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().rev().copied()
    }

    /// Ordering used to pick leading terms: longer paths first, then larger arrow indices.
    pub(crate) fn term_order_key(&self) -> (usize, &[usize]) {
        (self.arrows.len(), &self.arrows)
    }
}

/// A linear combination of parallel paths, each of length at least two.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelationExpr {
    pub source: usize,
    pub target: usize,
    pub terms: Vec<(Rational, Path)>,
}

impl RelationExpr {
    /// Merges repeated paths, drops zero coefficients and checks the invariants.
    pub fn new(terms: Vec<(Rational, Path)>) -> std::result::Result<Self, String> {
        let mut merged: BTreeMap<Path, Rational> = BTreeMap::new();
        for (c, p) in terms {
            *merged.entry(p).or_insert_with(Rational::zero) += c;
        }
        let terms: Vec<(Rational, Path)> = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| (c, p))
            .collect();
        let Some((_, first)) = terms.first() else {
            return Err("relation has no nonzero term".into());
        };
        let (source, target) = (first.source, first.target);
        if terms
            .iter()
            .any(|(_, p)| p.source != source || p.target != target)
        {
            return Err("relation terms are not parallel".into());
        }
        if terms.iter().any(|(_, p)| p.len() < 2) {
            return Err("relation paths must have length at least 2".into());
        }
        Ok(RelationExpr {
            source,
            target,
            terms,
        })
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn display(&self, quiver: &Quiver) -> String {
        let mut s = String::new();
        for (i, (c, p)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            if !mag.is_one() {
                s.push_str(&mag.to_string());
                s.push(' ');
            }
            s.push_str(&quiver.display_path(p));
        }
        s
    }
}

/// A quiver together with its relations: the presentation `kQ/I`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoundQuiver {
    pub quiver: Quiver,
    pub relations: Vec<RelationExpr>,
}

impl BoundQuiver {
    pub fn new(quiver: Quiver, relations: Vec<RelationExpr>) -> Self {
        BoundQuiver { quiver, relations }
    }

    pub fn bondal() -> Self {
        parse_quiver_spec(BONDAL_SPEC).expect("built-in Bondal spec parses")
    }

    pub fn relations_between(&self, source: usize, target: usize) -> usize {
        self.relations
            .iter()
            .filter(|r| r.source == source && r.target == target)
            .count()
    }

    pub fn is_monomial(&self) -> bool {
        self.relations.iter().all(RelationExpr::is_monomial)
    }
}

impl fmt::Display for BoundQuiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_quiver_spec(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn bondal() -> BoundQuiver {
        BoundQuiver::bondal()
    }

    #[test]
    fn compose_two_arrows() {
        let bq = bondal();
        let qv = &bq.quiver;
        let b1 = qv.arrow_path(qv.arrow_index("b1").unwrap());
        let a1 = qv.arrow_path(qv.arrow_index("a1").unwrap());
        let p = qv.compose_paths(&b1, &a1).unwrap();
        assert_eq!(qv.display_path(&p), "b1*a1");
        assert_eq!(
            (qv.vertex_name(p.source), qv.vertex_name(p.target)),
            ("1", "3")
        );
    }

    #[test]
    fn lazy_path_is_identity() {
        let bq = bondal();
        let qv = &bq.quiver;
        let a1 = qv.path(&["a1"]).unwrap();
        let e2 = qv.lazy_path(qv.vertex_index("2").unwrap());
        assert_eq!(qv.compose_paths(&e2, &a1).unwrap(), a1);
        let e1 = qv.lazy_path(0);
        assert_eq!(qv.compose_paths(&a1, &e1).unwrap(), a1);
    }

    #[test]
    fn compose_mismatch_is_rejected() {
        let bq = bondal();
        let qv = &bq.quiver;
        let a1 = qv.path(&["a1"]).unwrap();
        let b1 = qv.path(&["b1"]).unwrap();
        let err = qv.compose_paths(&a1, &b1).unwrap_err();
        assert!(matches!(err, Error::CompositionMismatch { .. }), "{err}");
    }

    #[test]
    fn path_enumeration_counts() {
        let bq = bondal();
        let from1 = bq.quiver.paths_from(0);
        // e1, a1, a2, and four length-2 paths
        assert_eq!(from1.len(), 7);
    }

    #[test]
    fn cycle_detected() {
        let arrows = vec![
            Arrow {
                name: "x".into(),
                source: 0,
                target: 1,
            },
            Arrow {
                name: "y".into(),
                source: 1,
                target: 0,
            },
        ];
        let err = Quiver::new("c", vec!["u".into(), "v".into()], arrows).unwrap_err();
        assert!(matches!(err, Error::CyclicQuiver { .. }));
    }

    #[test]
    fn relation_merging() {
        let bq = bondal();
        let p = bq.quiver.path(&["b1", "a1"]).unwrap();
        assert!(RelationExpr::new(vec![(q(1), p.clone()), (q(-1), p.clone())]).is_err());
        let r = RelationExpr::new(vec![(q(1), p.clone()), (q(2), p)]).unwrap();
        assert_eq!(r.terms.len(), 1);
        assert_eq!(r.terms[0].0, q(3));
    }
}
