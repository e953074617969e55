//! Normal-form basis of `kQ/I` for acyclic `Q`.
//!
//! The ideal is spanned by all two-sided path extensions `u·r·w` of the
//! relations. Within each (source, target) slice those generators are brought
//! to reduced echelon form with columns sorted longest-path-first; pivot
//! columns are the reducible paths and the remaining columns are the normal
//! forms. Each echelon row is then a rewrite rule for its pivot path.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{BoundQuiver, Path};
use crate::linalg::{QMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraBasis {
    normal: Vec<Vec<Vec<Path>>>,
    // reducible path -> coordinates in the normal basis of its slice
    reductions: BTreeMap<Path, Vec<(usize, Rational)>>,
    index: BTreeMap<Path, usize>,
}

impl AlgebraBasis {
    pub fn compute(bq: &BoundQuiver) -> Self {
        let q = &bq.quiver;
        let n = q.vertex_count();
        let all: Vec<Vec<Path>> = (0..n).map(|s| q.paths_from(s)).collect();
        let mut normal = vec![vec![Vec::new(); n]; n];
        let mut reductions = BTreeMap::new();
        let mut index = BTreeMap::new();

        for s in 0..n {
            for t in 0..n {
                let mut slice: Vec<&Path> = all[s].iter().filter(|p| p.target == t).collect();
                if slice.is_empty() {
                    continue;
                }
                slice.sort_by(|a, b| b.term_order_key().cmp(&a.term_order_key()));
                let column: BTreeMap<&Path, usize> =
                    slice.iter().enumerate().map(|(i, p)| (*p, i)).collect();

                let gens = ideal_generators(bq, &all, s, t, |_, _| true);
                let rows: Vec<Vec<Rational>> = gens
                    .into_iter()
                    .map(|g| {
                        let mut row = vec![Rational::zero(); slice.len()];
                        for (p, c) in g {
                            row[column[&p]] += c;
                        }
                        row
                    })
                    .collect();
                let ech = QMatrix::from_rows(rows, slice.len()).rref();

                let mut free: Vec<usize> = (0..slice.len())
                    .filter(|c| !ech.pivots.contains(c))
                    .collect();
                free.reverse(); // ascending term order
                let normals: Vec<Path> = free.iter().map(|&c| slice[c].clone()).collect();
                for (i, p) in normals.iter().enumerate() {
                    index.insert(p.clone(), i);
                }
                for (r, &pc) in ech.pivots.iter().enumerate() {
                    let coords: Vec<(usize, Rational)> = free
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| !ech.matrix[(r, c)].is_zero())
                        .map(|(i, &c)| (i, -ech.matrix[(r, c)].clone()))
                        .collect();
                    reductions.insert(slice[pc].clone(), coords);
                }
                normal[s][t] = normals;
            }
        }
        AlgebraBasis {
            normal,
            reductions,
            index,
        }
    }

    /// Normal paths from `source` to `target`, ascending (shorter first).
    pub fn normal_paths(&self, source: usize, target: usize) -> &[Path] {
        &self.normal[source][target]
    }

    pub fn count(&self, source: usize, target: usize) -> usize {
        self.normal[source][target].len()
    }

    pub fn dimension(&self) -> usize {
        self.normal.iter().flatten().map(Vec::len).sum()
    }

    pub fn is_normal(&self, p: &Path) -> bool {
        self.index.contains_key(p)
    }

    /// Position of a normal path inside its slice.
    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Coordinates of `p` in the normal basis of its (source, target) slice.
    pub fn coordinates(&self, p: &Path) -> Vec<(usize, Rational)> {
        if let Some(&i) = self.index.get(p) {
            return vec![(i, Rational::one())];
        }
        self.reductions
            .get(p)
            .cloned()
            .unwrap_or_else(|| panic!("path {p:?} missing from rewrite table"))
    }

    /// Dense coordinate vector of `p` in its slice.
    pub fn coordinate_vector(&self, p: &Path) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.count(p.source, p.target)];
        for (i, c) in self.coordinates(p) {
            v[i] = c;
        }
        v
    }

    pub fn reducible_paths(&self) -> impl Iterator<Item = &Path> {
        self.reductions.keys()
    }
}

/// Generators `u·r·w` of the ideal inside the (s, t) slice, as sparse path combinations.
/// `keep(u_len, w_len)` filters by the lengths of the padding paths.
pub(crate) fn ideal_generators(
    bq: &BoundQuiver,
    all: &[Vec<Path>],
    s: usize,
    t: usize,
    keep: impl Fn(usize, usize) -> bool,
) -> Vec<Vec<(Path, Rational)>> {
    let q = &bq.quiver;
    let mut gens = Vec::new();
    for r in &bq.relations {
        for w in all[s].iter().filter(|w| w.target == r.source) {
            for u in all[r.target].iter().filter(|u| u.target == t) {
                if !keep(u.len(), w.len()) {
                    continue;
                }
                let g: Vec<(Path, Rational)> = r
                    .terms
                    .iter()
                    .map(|(c, p)| {
                        let up = q.compose_paths(u, p).expect("padding composes");
                        (
                            q.compose_paths(&up, w).expect("padding composes"),
                            c.clone(),
                        )
                    })
                    .collect();
                gens.push(g);
            }
        }
    }
    gens
}

/// An element of `kQ/I`, stored over normal paths.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<Path, Rational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &Path) -> Rational {
        self.terms.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, p: Path, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> AlgebraElement {
        if c.is_zero() {
            return Self::zero();
        }
        AlgebraElement {
            terms: self.terms.iter().map(|(p, x)| (p.clone(), x * c)).collect(),
        }
    }
}

/// A bound quiver together with its computed normal-form basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    bq: BoundQuiver,
    basis: AlgebraBasis,
}

impl Algebra {
    pub fn new(bq: BoundQuiver) -> Self {
        let basis = AlgebraBasis::compute(&bq);
        Algebra { bq, basis }
    }

    pub fn bondal() -> Self {
        Self::new(BoundQuiver::bondal())
    }

    pub fn bound_quiver(&self) -> &BoundQuiver {
        &self.bq
    }

    pub fn quiver(&self) -> &super::Quiver {
        &self.bq.quiver
    }

    pub fn basis(&self) -> &AlgebraBasis {
        &self.basis
    }

    pub fn vertex_count(&self) -> usize {
        self.bq.quiver.vertex_count()
    }

    pub fn dimension(&self) -> usize {
        self.basis.dimension()
    }

    /// Normal form of a single path.
    pub fn reduce(&self, p: &Path) -> AlgebraElement {
        let normals = self.basis.normal_paths(p.source, p.target);
        let mut out = AlgebraElement::zero();
        for (i, c) in self.basis.coordinates(p) {
            out.add_term(normals[i].clone(), c);
        }
        out
    }

    pub fn element(&self, terms: &[(Rational, Path)]) -> AlgebraElement {
        terms.iter().fold(AlgebraElement::zero(), |acc, (c, p)| {
            acc.add(&self.reduce(p).scale(c))
        })
    }

    /// Product `x·y` in functional order (`y` acts first). Non-composable terms vanish.
    pub fn multiply(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let q = &self.bq.quiver;
        let mut out = AlgebraElement::zero();
        for (p, c) in x.terms() {
            for (r, d) in y.terms() {
                if p.source != r.target {
                    continue;
                }
                let pr = q.compose_paths(p, r).expect("endpoints checked");
                out = out.add(&self.reduce(&pr).scale(&(c * d)));
            }
        }
        out
    }

    /// Whether the relations are linearly independent modulo `J·I + I·J`,
    /// `J` being the arrow ideal.
    pub fn relations_are_minimal(&self) -> bool {
        let q = &self.bq.quiver;
        let n = q.vertex_count();
        let all: Vec<Vec<Path>> = (0..n).map(|s| q.paths_from(s)).collect();
        for s in 0..n {
            for t in 0..n {
                let own: Vec<&super::RelationExpr> = self
                    .bq
                    .relations
                    .iter()
                    .filter(|r| r.source == s && r.target == t)
                    .collect();
                if own.is_empty() {
                    continue;
                }
                let slice: Vec<&Path> = all[s].iter().filter(|p| p.target == t).collect();
                let column: BTreeMap<&Path, usize> =
                    slice.iter().enumerate().map(|(i, p)| (*p, i)).collect();
                let to_row = |g: &[(Path, Rational)]| {
                    let mut row = vec![Rational::zero(); slice.len()];
                    for (p, c) in g {
                        row[column[p]] += c.clone();
                    }
                    row
                };
                let padded: Vec<Vec<Rational>> =
                    ideal_generators(&self.bq, &all, s, t, |u, w| u + w > 0)
                        .iter()
                        .map(|g| to_row(g))
                        .collect();
                let base_rank = QMatrix::from_rows(padded.clone(), slice.len()).rank();
                let mut with_rel = padded;
                for r in &own {
                    let g: Vec<(Path, Rational)> = r
                        .terms
                        .iter()
                        .map(|(c, p)| (p.clone(), c.clone()))
                        .collect();
                    with_rel.push(to_row(&g));
                }
                if QMatrix::from_rows(with_rel, slice.len()).rank() != base_rank + own.len() {
                    return false;
                }
            }
        }
        true
    }
}
