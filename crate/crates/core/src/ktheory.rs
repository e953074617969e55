//! The Grothendieck lattice in the basis of simple classes.
//!
//! Convention: `χ(d, e) = dᵀ G e`. A sequence `(v_1, …, v_n)` is exceptional
//! when `χ(v_i, v_i) = 1` and `χ(v_j, v_i) = 0` for `j > i`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{determinant, hermite_normal_form, integer_kernel};
use crate::linalg::Int;
use crate::repr::Representation;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KClass(pub Vec<Int>);

impl KClass {
    pub fn from_i64(v: &[i64]) -> Self {
        KClass(v.iter().map(|&x| Int::from(x)).collect())
    }

    pub fn zero(n: usize) -> Self {
        KClass(vec![Int::zero(); n])
    }

    pub fn basis_vector(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[i] = Int::one();
        v
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Int] {
        &self.0
    }

    pub fn add(&self, other: &KClass) -> KClass {
        KClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &KClass) -> KClass {
        KClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Int) -> KClass {
        KClass(self.0.iter().map(|a| a * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Parses `1,1,1` (whitespace tolerated).
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        text.split(',')
            .map(|t| {
                t.trim()
                    .parse::<Int>()
                    .map_err(|_| format!("invalid integer `{}` in class `{text}`", t.trim()))
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(KClass)
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for KClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(ToString::to_string))
    }
}

pub fn class_of(m: &Representation) -> KClass {
    KClass(m.dims().iter().map(|&d| Int::from(d)).collect())
}

/// Integer Gram matrix of the Euler form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramForm {
    matrix: Vec<Vec<Int>>,
}

impl GramForm {
    pub fn new(matrix: Vec<Vec<Int>>) -> Result<Self> {
        let n = matrix.len();
        if let Some(row) = matrix.iter().find(|r| r.len() != n) {
            return Err(Error::SizeMismatch {
                expected: n,
                actual: row.len(),
            });
        }
        Ok(GramForm { matrix })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Int::from(x)).collect())
                .collect(),
        )
    }

    pub fn bondal() -> Self {
        Self::from_i64(&[vec![1, -2, 2], vec![0, 1, -2], vec![0, 0, 1]]).expect("square")
    }

    pub fn matrix(&self) -> &[Vec<Int>] {
        &self.matrix
    }

    /// Rank of the ambient lattice.
    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    /// Unit diagonal and zero entries below it.
    pub fn is_unitriangular(&self) -> bool {
        self.matrix
            .iter()
            .enumerate()
            .all(|(i, row)| row[i].is_one() && row[..i].iter().all(Zero::is_zero))
    }

    fn check(&self, v: &KClass) -> Result<()> {
        if v.rank() != self.rank() {
            return Err(Error::SizeMismatch {
                expected: self.rank(),
                actual: v.rank(),
            });
        }
        Ok(())
    }

    pub fn chi(&self, v: &KClass, w: &KClass) -> Result<Int> {
        self.check(v)?;
        self.check(w)?;
        Ok(self.chi_unchecked(v, w))
    }

    pub(crate) fn chi_unchecked(&self, v: &KClass, w: &KClass) -> Int {
        let mut total = Int::zero();
        for (vi, row) in v.0.iter().zip(&self.matrix) {
            if vi.is_zero() {
                continue;
            }
            let rw: Int = row.iter().zip(&w.0).map(|(g, x)| g * x).sum();
            total += vi * rw;
        }
        total
    }

    /// `R[k][l] = χ(u_k, u_l)`.
    pub fn restrict(&self, basis: &[KClass]) -> Vec<Vec<Int>> {
        basis
            .iter()
            .map(|u| basis.iter().map(|w| self.chi_unchecked(u, w)).collect())
            .collect()
    }
}

pub fn chi(v: &KClass, w: &KClass, g: &GramForm) -> Result<Int> {
    g.chi(v, w)
}

pub fn is_exceptional_class(v: &KClass, g: &GramForm) -> Result<bool> {
    Ok(g.chi(v, v)?.is_one())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `{v : χ(v, s) = 0}`
    Left,
    /// `{v : χ(s, v) = 0}`
    Right,
    Bi,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::Bi => "bi",
        })
    }
}

/// Hermite-reduced basis of the orthogonal sublattice.
pub fn orthogonal_lattice(classes: &[KClass], g: &GramForm, side: Side) -> Result<Vec<KClass>> {
    let n = g.rank();
    let mut constraints = Vec::new();
    for s in classes {
        g.check(s)?;
        if matches!(side, Side::Left | Side::Bi) {
            constraints.push(
                (0..n)
                    .map(|i| (0..n).map(|j| &g.matrix[i][j] * &s.0[j]).sum())
                    .collect(),
            );
        }
        if matches!(side, Side::Right | Side::Bi) {
            constraints.push(
                (0..n)
                    .map(|j| (0..n).map(|i| &s.0[i] * &g.matrix[i][j]).sum())
                    .collect(),
            );
        }
    }
    Ok(integer_kernel(&constraints, n)
        .into_iter()
        .map(KClass)
        .collect())
}

/// Canonical basis of the sublattice spanned by `classes`.
pub fn span_lattice(classes: &[KClass], n: usize) -> Vec<KClass> {
    let rows: Vec<Vec<Int>> = classes.iter().map(|c| c.0.clone()).collect();
    hermite_normal_form(&rows, n)
        .into_iter()
        .map(KClass)
        .collect()
}

fn check_pair(v: &KClass, w: &KClass, g: &GramForm) -> Result<()> {
    g.check(v)?;
    g.check(w)?;
    if !g.chi_unchecked(v, v).is_one()
        || !g.chi_unchecked(w, w).is_one()
        || !g.chi_unchecked(w, v).is_zero()
    {
        return Err(Error::NotExceptionalPair(format!("{v}, {w}")));
    }
    Ok(())
}

/// `(v, w) ↦ (w − χ(v,w)·v, v)`.
pub fn mutate_left(v: &KClass, w: &KClass, g: &GramForm) -> Result<(KClass, KClass)> {
    check_pair(v, w, g)?;
    let c = g.chi_unchecked(v, w);
    Ok((w.sub(&v.scale(&c)), v.clone()))
}

/// `(v, w) ↦ (w, v − χ(v,w)·w)`.
pub fn mutate_right(v: &KClass, w: &KClass, g: &GramForm) -> Result<(KClass, KClass)> {
    check_pair(v, w, g)?;
    let c = g.chi_unchecked(v, w);
    Ok((w.clone(), v.sub(&w.scale(&c))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `σ_i`: left mutation of positions `i, i+1`.
    Left,
    /// `σ_i⁻¹`: right mutation.
    Right,
}

/// Ordered exceptional classes together with the ambient form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalSequence {
    classes: Vec<KClass>,
    gram: GramForm,
}

impl ExceptionalSequence {
    pub fn new(classes: Vec<KClass>, gram: GramForm) -> Result<Self> {
        for c in &classes {
            gram.check(c)?;
        }
        if !is_numerical_exceptional_sequence(&classes, &gram) {
            let shown: Vec<String> = classes.iter().map(ToString::to_string).collect();
            return Err(Error::NotExceptional(shown.join(" ")));
        }
        Ok(ExceptionalSequence { classes, gram })
    }

    pub fn classes(&self) -> &[KClass] {
        &self.classes
    }

    pub fn gram(&self) -> &GramForm {
        &self.gram
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Generator `i` is 0-based here: it mutates positions `i` and `i + 1`.
    pub fn braid_act(&self, i: usize, direction: Direction) -> Result<Self> {
        if i + 1 >= self.classes.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.classes.len(),
            });
        }
        let (v, w) = (&self.classes[i], &self.classes[i + 1]);
        let (x, y) = match direction {
            Direction::Left => mutate_left(v, w, &self.gram)?,
            Direction::Right => mutate_right(v, w, &self.gram)?,
        };
        let mut classes = self.classes.clone();
        classes[i] = x;
        classes[i + 1] = y;
        if !is_numerical_exceptional_sequence(&classes, &self.gram) {
            return Err(Error::InvariantViolation(format!(
                "mutation at {i} broke exceptionality"
            )));
        }
        Ok(ExceptionalSequence {
            classes,
            gram: self.gram.clone(),
        })
    }

    /// Applies a word of signed 1-based generators, left to right: `2` is `σ_2`, `-2` is `σ_2⁻¹`.
    pub fn apply_word(&self, word: &[i64]) -> Result<Self> {
        let mut seq = self.clone();
        for &g in word {
            if g == 0 {
                return Err(Error::IndexOutOfRange {
                    index: 0,
                    len: self.classes.len(),
                });
            }
            let dir = if g > 0 {
                Direction::Left
            } else {
                Direction::Right
            };
            let i = usize::try_from(g.unsigned_abs() - 1).unwrap_or(usize::MAX);
            seq = seq.braid_act(i, dir)?;
        }
        Ok(seq)
    }

    pub fn determinant(&self) -> Option<Int> {
        (self.classes.len() == self.gram.rank()).then(|| determinant(&rows_of(&self.classes)))
    }
}

fn rows_of(classes: &[KClass]) -> Vec<Vec<Int>> {
    classes.iter().map(|c| c.0.clone()).collect()
}

pub fn is_numerical_exceptional_sequence(classes: &[KClass], g: &GramForm) -> bool {
    if classes.iter().any(|c| c.rank() != g.rank()) {
        return false;
    }
    classes.iter().enumerate().all(|(i, vi)| {
        g.chi_unchecked(vi, vi).is_one()
            && classes[i + 1..]
                .iter()
                .all(|vj| g.chi_unchecked(vj, vi).is_zero())
    })
}

/// Determinant `±1`: the classes form a basis of the lattice.
pub fn spans_full_lattice(classes: &[KClass]) -> bool {
    let n = classes.first().map_or(0, KClass::rank);
    classes.len() == n
        && classes.iter().all(|c| c.rank() == n)
        && determinant(&rows_of(classes)).abs().is_one()
}

/// Classes of the indecomposable projectives, one row per vertex, from a Cartan matrix.
pub fn projective_classes(cartan: &[Vec<usize>]) -> Vec<KClass> {
    cartan
        .iter()
        .map(|row| KClass(row.iter().map(|&x| Int::from(x)).collect()))
        .collect()
}

/// Orders projective classes so that they form an exceptional sequence: reverse topological order.
pub fn semiorthogonal_projective_order(classes: &[KClass], topological: &[usize]) -> Vec<KClass> {
    topological
        .iter()
        .rev()
        .map(|&v| classes[v].clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(v: &[i64]) -> KClass {
        KClass::from_i64(v)
    }

    #[test]
    fn pairing_values() {
        let g = GramForm::bondal();
        assert_eq!(
            chi(&k(&[1, 1, 1]), &k(&[1, 1, 1]), &g).unwrap(),
            Int::from(1)
        );
        assert!(!is_exceptional_class(&k(&[1, 1, 0]), &g).unwrap());
        for i in 0..3 {
            let e = KClass::basis_vector(3, i);
            assert!(is_exceptional_class(&e, &g).unwrap());
        }
        assert!(matches!(
            chi(&k(&[1, 1]), &k(&[1, 1, 1]), &g),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn biorthogonal_of_thin_class() {
        let g = GramForm::bondal();
        let expected = vec![k(&[1, 0, -1]), k(&[0, 1, 1])];
        for side in [Side::Left, Side::Right, Side::Bi] {
            assert_eq!(
                orthogonal_lattice(&[k(&[1, 1, 1])], &g, side).unwrap(),
                expected
            );
        }
        assert_eq!(span_lattice(&[k(&[1, 1, 0]), k(&[0, 1, 1])], 3), expected);
        let r = g.restrict(&expected);
        assert_eq!(
            r,
            vec![
                vec![Int::from(0), Int::from(-1)],
                vec![Int::from(1), Int::from(0)]
            ]
        );
    }

    #[test]
    fn orthogonal_extremes() {
        let g = GramForm::bondal();
        let simples: Vec<KClass> = (0..3).map(|i| KClass::basis_vector(3, i)).collect();
        assert!(orthogonal_lattice(&simples, &g, Side::Bi)
            .unwrap()
            .is_empty());
        assert_eq!(orthogonal_lattice(&[], &g, Side::Bi).unwrap().len(), 3);
    }

    #[test]
    fn projective_sequence() {
        let g = GramForm::bondal();
        let p = vec![k(&[0, 0, 1]), k(&[0, 1, 2]), k(&[1, 2, 2])];
        assert!(is_numerical_exceptional_sequence(&p, &g));
        assert!(spans_full_lattice(&p));
        let rev: Vec<KClass> = p.iter().rev().cloned().collect();
        assert!(!is_numerical_exceptional_sequence(&rev, &g));
        let s: Vec<KClass> = (0..3).map(|i| KClass::basis_vector(3, i)).collect();
        assert!(is_numerical_exceptional_sequence(&s, &g));
        let srev: Vec<KClass> = s.iter().rev().cloned().collect();
        assert!(!is_numerical_exceptional_sequence(&srev, &g));
        assert!(is_numerical_exceptional_sequence(&[k(&[1, 1, 1])], &g));
    }

    #[test]
    fn mutations() {
        let g = GramForm::bondal();
        let (v, w) = (k(&[0, 0, 1]), k(&[0, 1, 2]));
        assert_eq!(g.chi(&v, &w).unwrap(), Int::from(2));
        let (x, y) = mutate_left(&v, &w, &g).unwrap();
        assert_eq!(x, k(&[0, 1, 0]));
        assert!(is_exceptional_class(&x, &g).unwrap());
        assert_eq!(mutate_right(&x, &y, &g).unwrap(), (v.clone(), w.clone()));
        let (a, b) = mutate_right(&v, &w, &g).unwrap();
        assert_eq!(mutate_left(&a, &b, &g).unwrap(), (v.clone(), w.clone()));
        assert!(matches!(
            mutate_left(&w, &v, &g),
            Err(Error::NotExceptionalPair(_))
        ));

        let id = GramForm::from_i64(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(
            mutate_left(&k(&[1, 0]), &k(&[0, 1]), &id).unwrap(),
            (k(&[0, 1]), k(&[1, 0]))
        );
    }

    #[test]
    fn braid_words() {
        let g = GramForm::bondal();
        let seq =
            ExceptionalSequence::new(vec![k(&[0, 0, 1]), k(&[0, 1, 2]), k(&[1, 2, 2])], g).unwrap();
        assert_eq!(seq.apply_word(&[1, -1]).unwrap(), seq);
        assert_eq!(
            seq.apply_word(&[1, 2, 1]).unwrap(),
            seq.apply_word(&[2, 1, 2]).unwrap()
        );
        let moved = seq.apply_word(&[1, 2, -1, 2]).unwrap();
        assert!(moved.determinant().unwrap().abs().is_one());
        assert!(matches!(
            seq.apply_word(&[3]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }
}
