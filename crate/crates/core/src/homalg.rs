//! Minimal projective resolutions and everything read off them: Ext
//! dimensions, Euler characteristics, the Gram matrix of the Euler form and
//! the global dimension.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ktheory::GramForm;
use crate::linalg::{QMatrix, Rational};
use crate::quiver::Algebra;
use crate::repr::{direct_sum, projective_rep, simple_rep, zero_rep, Representation};

/// A minimal projective resolution `… → Q_1 → Q_0 → M`, truncated at a length bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    /// Vertex of each indecomposable projective summand, per term.
    pub terms: Vec<Vec<usize>>,
    /// For each summand `P_w` of `Q_0`, the image of `e_w` in `M_w`.
    pub augmentation: Vec<Vec<Rational>>,
    /// `differentials[k-1]` describes `Q_k → Q_{k-1}`: for each summand `P_w`
    /// of `Q_k`, the image of `e_w` in `(Q_{k-1})_w`. Split by summand, that
    /// vector lists coefficients over normal paths, i.e. the matrix entries
    /// over the algebra basis.
    pub differentials: Vec<Vec<Vec<Rational>>>,
    /// Whether the last syzygy computed was zero.
    pub terminated: bool,
}

/// Direct sum of the projectives `P_w` for `w` in `summands`.
pub fn sum_of_projectives(alg: &Algebra, summands: &[usize]) -> Representation {
    let projectives: Vec<Representation> = (0..alg.vertex_count())
        .map(|v| projective_rep(alg, v).expect("valid vertex"))
        .collect();
    summands
        .iter()
        .fold(zero_rep(alg), |acc, &w| direct_sum(&acc, &projectives[w]))
}

/// Vertex-wise matrices of the map `⊕ P_{w_i} → T` sending `e_{w_i}` to `gens[i]`.
fn map_from_generators(
    alg: &Algebra,
    summands: &[usize],
    target: &Representation,
    gens: &[Vec<Rational>],
) -> Vec<QMatrix> {
    let basis = alg.basis();
    (0..alg.vertex_count())
        .map(|x| {
            let mut cols = Vec::new();
            for (&w, g) in summands.iter().zip(gens) {
                for p in basis.normal_paths(w, x) {
                    cols.push(target.path_matrix(p).mul_vec(g));
                }
            }
            QMatrix::from_columns(&cols, target.dim(x))
        })
        .collect()
}

/// Generators of a complement of the radical at every vertex, as standard basis vectors.
fn top_generators(alg: &Algebra, m: &Representation) -> (Vec<usize>, Vec<Vec<Rational>>) {
    let q = alg.quiver();
    let mut summands = Vec::new();
    let mut gens = Vec::new();
    for w in 0..q.vertex_count() {
        let d = m.dim(w);
        if d == 0 {
            continue;
        }
        let mut span = QMatrix::zeros(0, d);
        for (ai, a) in q.arrows().iter().enumerate() {
            if a.target == w {
                span = span.vstack(&m.map(ai).transpose());
            }
        }
        let mut rank = span.rank();
        for k in 0..d {
            if rank == d {
                break;
            }
            let mut e = vec![Rational::zero(); d];
            e[k] = Rational::from_integer(1.into());
            let trial = span.vstack(&QMatrix::from_rows(vec![e.clone()], d));
            let r = trial.rank();
            if r > rank {
                span = trial;
                rank = r;
                summands.push(w);
                gens.push(e);
            }
        }
    }
    (summands, gens)
}

/// Kernel of a vertex-wise map out of `source`, as a representation plus inclusion columns.
fn kernel_subrepresentation(
    alg: &Algebra,
    source: &Representation,
    map: &[QMatrix],
) -> (Representation, Vec<QMatrix>) {
    let q = alg.quiver();
    let incl: Vec<QMatrix> = map.iter().map(|m| m.kernel().transpose()).collect();
    let dims: Vec<usize> = incl.iter().map(QMatrix::cols).collect();
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let image = source.map(ai).mul(&incl[a.source]);
            let cols: Vec<Vec<Rational>> = (0..image.cols())
                .map(|j| {
                    incl[a.target]
                        .solve(&image.column(j))
                        .expect("kernel is a subrepresentation")
                })
                .collect();
            QMatrix::from_columns(&cols, dims[a.target])
        })
        .collect();
    let rep = Representation::from_parts(alg, dims, maps).expect("kernel shapes agree");
    (rep, incl)
}

pub fn minimal_resolution(alg: &Algebra, m: &Representation, length_bound: usize) -> Resolution {
    let mut terms = Vec::new();
    let mut augmentation = Vec::new();
    let mut differentials = Vec::new();
    let mut current = m.clone();
    let mut inclusion: Option<Vec<QMatrix>> = None;

    for k in 0..=length_bound {
        if current.is_zero() {
            break;
        }
        let (summands, gens) = top_generators(alg, &current);
        let in_previous: Vec<Vec<Rational>> = match &inclusion {
            None => gens.clone(),
            Some(incl) => summands
                .iter()
                .zip(&gens)
                .map(|(&w, g)| incl[w].mul_vec(g))
                .collect(),
        };
        if k == 0 {
            augmentation = in_previous;
        } else {
            differentials.push(in_previous);
        }
        let term = sum_of_projectives(alg, &summands);
        let cover = map_from_generators(alg, &summands, &current, &gens);
        let (kernel, incl) = kernel_subrepresentation(alg, &term, &cover);
        terms.push(summands);
        current = kernel;
        inclusion = Some(incl);
    }
    Resolution {
        terms,
        augmentation,
        differentials,
        terminated: current.is_zero(),
    }
}

impl Resolution {
    /// Index of the last nonzero term; `None` for the zero module.
    pub fn length(&self) -> Option<usize> {
        self.terms.len().checked_sub(1)
    }

    pub fn term(&self, alg: &Algebra, k: usize) -> Representation {
        sum_of_projectives(alg, &self.terms[k])
    }

    /// Vertex-wise matrices of `Q_0 → M`.
    pub fn augmentation_map(&self, alg: &Algebra, m: &Representation) -> Vec<QMatrix> {
        match self.terms.first() {
            Some(t0) => map_from_generators(alg, t0, m, &self.augmentation),
            None => (0..alg.vertex_count())
                .map(|x| QMatrix::zeros(m.dim(x), 0))
                .collect(),
        }
    }

    /// Vertex-wise matrices of `Q_k → Q_{k-1}` for `k ≥ 1`.
    pub fn differential_map(&self, alg: &Algebra, k: usize) -> Vec<QMatrix> {
        let target = self.term(alg, k - 1);
        map_from_generators(alg, &self.terms[k], &target, &self.differentials[k - 1])
    }

    /// Splits a generator image in `(Q_{k-1})_w` into per-summand coefficient vectors.
    pub fn differential_entries(&self, alg: &Algebra, k: usize, i: usize) -> Vec<Vec<Rational>> {
        let w = self.terms[k][i];
        let mut out = Vec::new();
        let mut offset = 0;
        for &wp in &self.terms[k - 1] {
            let n = alg.basis().count(wp, w);
            out.push(self.differentials[k - 1][i][offset..offset + n].to_vec());
            offset += n;
        }
        out
    }

    /// Checks the complex property, exactness by rank accounting, and minimality.
    pub fn verify(&self, alg: &Algebra, m: &Representation) -> Result<()> {
        let nv = alg.vertex_count();
        let mut maps: Vec<Vec<QMatrix>> = vec![self.augmentation_map(alg, m)];
        for k in 1..self.terms.len() {
            maps.push(self.differential_map(alg, k));
        }
        for k in 1..maps.len() {
            for x in 0..nv {
                if !maps[k - 1][x].mul(&maps[k][x]).is_zero() {
                    return Err(Error::InvariantViolation(format!(
                        "d{} d{} != 0 at vertex {x}",
                        k - 1,
                        k
                    )));
                }
            }
        }
        for x in 0..nv {
            if maps[0][x].rank() != m.dim(x) {
                return Err(Error::InvariantViolation(format!(
                    "augmentation not surjective at vertex {x}"
                )));
            }
            for k in 0..self.terms.len() {
                let dim = maps[k][x].cols();
                let next = maps.get(k + 1).map_or(0, |d| d[x].rank());
                let kernel = dim - maps[k][x].rank();
                let last = k + 1 == self.terms.len();
                if kernel != next && !(last && !self.terminated) {
                    return Err(Error::InvariantViolation(format!(
                        "not exact at term {k}, vertex {x}"
                    )));
                }
            }
        }
        let basis = alg.basis();
        for k in 1..self.terms.len() {
            for i in 0..self.terms[k].len() {
                for (j, coeffs) in self.differential_entries(alg, k, i).iter().enumerate() {
                    let (w, wp) = (self.terms[k][i], self.terms[k - 1][j]);
                    if w == wp {
                        let lazy = basis
                            .index_of(&alg.quiver().lazy_path(w))
                            .expect("lazy path normal");
                        if !coeffs[lazy].is_zero() {
                            return Err(Error::InvariantViolation(format!(
                                "invertible entry in d{k}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Matrix of `Hom(Q_{k-1}, N) → Hom(Q_k, N)`.
    fn hom_differential(&self, alg: &Algebra, n: &Representation, k: usize) -> QMatrix {
        let basis = alg.basis();
        let rows_of = |t: &[usize]| t.iter().map(|&w| n.dim(w)).sum::<usize>();
        let (rows, cols) = (rows_of(&self.terms[k]), rows_of(&self.terms[k - 1]));
        let mut out = QMatrix::zeros(rows, cols);
        let mut r0 = 0;
        for (i, &w) in self.terms[k].iter().enumerate() {
            let entries = self.differential_entries(alg, k, i);
            let mut c0 = 0;
            for (j, &wp) in self.terms[k - 1].iter().enumerate() {
                let mut block = QMatrix::zeros(n.dim(w), n.dim(wp));
                for (p, c) in basis.normal_paths(wp, w).iter().zip(&entries[j]) {
                    if !c.is_zero() {
                        block = block.add(&n.path_matrix(p).scale(c));
                    }
                }
                out.set_block(r0, c0, &block);
                c0 += n.dim(wp);
            }
            r0 += n.dim(w);
        }
        out
    }
}

/// `dim Ext^k(M, N)` for `k = 0..=max_degree`.
pub fn ext_dims(
    alg: &Algebra,
    m: &Representation,
    n: &Representation,
    max_degree: usize,
) -> Vec<usize> {
    let res = minimal_resolution(alg, m, max_degree + 1);
    let cochain_dim = |k: usize| {
        res.terms
            .get(k)
            .map_or(0, |t| t.iter().map(|&w| n.dim(w)).sum::<usize>())
    };
    let rank = |k: usize| {
        if k == 0 || k >= res.terms.len() {
            0
        } else {
            res.hom_differential(alg, n, k).rank()
        }
    };
    (0..=max_degree)
        .map(|k| cochain_dim(k) - rank(k) - rank(k + 1))
        .collect()
}

pub fn ext_dim(alg: &Algebra, m: &Representation, n: &Representation, k: usize) -> usize {
    ext_dims(alg, m, n, k)[k]
}

/// Upper bound on projective dimensions over an acyclic bound quiver.
pub fn projective_dimension_bound(alg: &Algebra) -> usize {
    alg.vertex_count()
}

/// `Σ (-1)^k dim Ext^k(M, N)`.
pub fn euler_char(alg: &Algebra, m: &Representation, n: &Representation) -> BigInt {
    let dims = ext_dims(alg, m, n, projective_dimension_bound(alg));
    dims.iter().enumerate().fold(
        BigInt::zero(),
        |acc, (k, &d)| if k % 2 == 0 { acc + d } else { acc - d },
    )
}

/// `C[i][j]` = number of normal paths from `i` to `j`; row `i` is the dimension vector of `P_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanMatrix {
    pub matrix: Vec<Vec<usize>>,
}

pub fn cartan_matrix(alg: &Algebra) -> CartanMatrix {
    let n = alg.vertex_count();
    CartanMatrix {
        matrix: (0..n)
            .map(|i| (0..n).map(|j| alg.basis().count(i, j)).collect())
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlobalDimension {
    Exact(usize),
    AtLeast(usize),
}

pub fn projective_dimension(alg: &Algebra, m: &Representation, bound: usize) -> GlobalDimension {
    let res = minimal_resolution(alg, m, bound);
    match (res.terminated, res.length()) {
        (true, len) => GlobalDimension::Exact(len.unwrap_or(0)),
        (false, _) => GlobalDimension::AtLeast(bound),
    }
}

/// Largest projective dimension of a simple module, or `AtLeast(bound)`.
pub fn global_dimension(alg: &Algebra, bound: usize) -> GlobalDimension {
    let mut best = 0;
    for v in 0..alg.vertex_count() {
        let s = simple_rep(alg, v).expect("valid vertex");
        match projective_dimension(alg, &s, bound) {
            GlobalDimension::Exact(d) => best = best.max(d),
            at_least => return at_least,
        }
    }
    GlobalDimension::Exact(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GramRoute {
    /// `δ_ij − #arrows(i→j) + #relations(i→j)`; valid for global dimension ≤ 2 with minimal relations.
    Combinatorial,
    /// Euler characteristics of all pairs of simples.
    ExtTable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramComputation {
    pub gram: GramForm,
    pub route: GramRoute,
}

/// Gram matrix of the Euler form in the basis of simple classes.
pub fn gram_matrix_simples(alg: &Algebra) -> GramComputation {
    let n = alg.vertex_count();
    let q = alg.quiver();
    let bq = alg.bound_quiver();
    let small = matches!(global_dimension(alg, projective_dimension_bound(alg)), GlobalDimension::Exact(d) if d <= 2);
    if small && alg.relations_are_minimal() {
        let g = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let delta = i64::from(i == j);
                        BigInt::from(
                            delta - q.arrows_between(i, j) as i64
                                + bq.relations_between(i, j) as i64,
                        )
                    })
                    .collect()
            })
            .collect();
        return GramComputation {
            gram: GramForm::new(g).expect("square"),
            route: GramRoute::Combinatorial,
        };
    }
    GramComputation {
        gram: gram_from_ext_table(alg),
        route: GramRoute::ExtTable,
    }
}

pub fn gram_from_ext_table(alg: &Algebra) -> GramForm {
    let n = alg.vertex_count();
    let simples: Vec<Representation> = (0..n)
        .map(|v| simple_rep(alg, v).expect("valid vertex"))
        .collect();
    let g = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| euler_char(alg, &simples[i], &simples[j]))
                .collect()
        })
        .collect();
    GramForm::new(g).expect("square")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::parse_quiver_spec;
    use crate::repr::{bondal_thin_object, hom_dim};

    fn z(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn projectives_resolve_themselves() {
        let alg = Algebra::bondal();
        for v in 0..3 {
            let p = projective_rep(&alg, v).unwrap();
            let res = minimal_resolution(&alg, &p, 4);
            assert_eq!(res.terms, vec![vec![v]]);
            assert!(res.terminated);
            res.verify(&alg, &p).unwrap();
        }
    }

    #[test]
    fn source_simple_resolution() {
        let alg = Algebra::bondal();
        let s1 = simple_rep(&alg, 0).unwrap();
        let res = minimal_resolution(&alg, &s1, 4);
        assert_eq!(res.terms, vec![vec![0], vec![1, 1], vec![2, 2]]);
        assert!(res.terminated);
        res.verify(&alg, &s1).unwrap();
    }

    #[test]
    fn truncated_resolution_reports_nontermination() {
        let alg = Algebra::bondal();
        let s1 = simple_rep(&alg, 0).unwrap();
        let res = minimal_resolution(&alg, &s1, 1);
        assert_eq!(res.terms.len(), 2);
        assert!(!res.terminated);
        res.verify(&alg, &s1).unwrap();
    }

    #[test]
    fn thin_object_is_exceptional() {
        let alg = Algebra::bondal();
        let p = bondal_thin_object(&alg).unwrap();
        let res = minimal_resolution(&alg, &p, 4);
        assert!(res.terminated);
        res.verify(&alg, &p).unwrap();
        assert_eq!(ext_dims(&alg, &p, &p, 3), vec![1, 0, 0, 0]);
    }

    #[test]
    fn ext_between_simples() {
        let alg = Algebra::bondal();
        let s: Vec<Representation> = (0..3).map(|v| simple_rep(&alg, v).unwrap()).collect();
        let ext1: Vec<Vec<usize>> = (0..3)
            .map(|i| (0..3).map(|j| ext_dim(&alg, &s[i], &s[j], 1)).collect())
            .collect();
        assert_eq!(ext1, vec![vec![0, 2, 0], vec![0, 0, 2], vec![0, 0, 0]]);
        assert_eq!(ext_dim(&alg, &s[0], &s[2], 2), 2);
        assert_eq!(euler_char(&alg, &s[0], &s[1]), BigInt::from(-2));
        assert_eq!(euler_char(&alg, &s[1], &s[1]), BigInt::from(1));
    }

    #[test]
    fn ext_zero_is_hom() {
        let alg = Algebra::bondal();
        let p = bondal_thin_object(&alg).unwrap();
        let p1 = projective_rep(&alg, 0).unwrap();
        let s3 = simple_rep(&alg, 2).unwrap();
        for (a, b) in [(&p, &p1), (&p1, &p), (&s3, &p), (&p, &s3)] {
            assert_eq!(ext_dim(&alg, a, b, 0), hom_dim(&alg, a, b));
        }
    }

    #[test]
    fn gram_and_cartan() {
        let alg = Algebra::bondal();
        let g = gram_matrix_simples(&alg);
        assert_eq!(g.route, GramRoute::Combinatorial);
        assert_eq!(
            g.gram.matrix(),
            &z(&[vec![1, -2, 2], vec![0, 1, -2], vec![0, 0, 1]])[..]
        );
        assert_eq!(gram_from_ext_table(&alg), g.gram);
        assert_eq!(
            cartan_matrix(&alg).matrix,
            vec![vec![1, 2, 2], vec![0, 1, 2], vec![0, 0, 1]]
        );
    }

    #[test]
    fn global_dimensions() {
        assert_eq!(
            global_dimension(&Algebra::bondal(), 5),
            GlobalDimension::Exact(2)
        );
        let a2 = Algebra::new(
            parse_quiver_spec("quiver a2\nvertices: 1 2\narrows:\n x: 1 -> 2\n").unwrap(),
        );
        assert_eq!(global_dimension(&a2, 5), GlobalDimension::Exact(1));
        let ss = Algebra::new(parse_quiver_spec("quiver ss\nvertices: 1 2\n").unwrap());
        assert_eq!(global_dimension(&ss, 5), GlobalDimension::Exact(0));
        assert_eq!(
            global_dimension(&Algebra::bondal(), 1),
            GlobalDimension::AtLeast(1)
        );
    }

    #[test]
    fn ext_table_route_for_long_monomial() {
        // overlapping monomial relations on A_4: S_1 has projective dimension 3
        let text = "quiver l\nvertices: 1 2 3 4\narrows:\n a: 1 -> 2\n b: 2 -> 3\n c: 3 -> 4\nrelations:\n b*a\n c*b\n";
        let alg = Algebra::new(parse_quiver_spec(text).unwrap());
        assert_eq!(global_dimension(&alg, 5), GlobalDimension::Exact(3));
        let g = gram_matrix_simples(&alg);
        assert_eq!(g.route, GramRoute::ExtTable);
        // Ext^3(S_1, S_4) = 1 contributes -1
        assert_eq!(g.gram.matrix()[0][3], BigInt::from(-1));
    }
}
