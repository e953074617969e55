//! Seeded random inputs for property suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ktheory::{ExceptionalSequence, GramForm, KClass};
use crate::linalg::{q, QMatrix, Rational};
use crate::quiver::{Algebra, Arrow, BoundQuiver, Quiver, RelationExpr};
use crate::repr::{make_representation, Representation};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small(rng: &mut impl Rng, bound: i64) -> Rational {
    q(rng.gen_range(-bound..=bound))
}

/// Random representation with the given dimension vector of an algebra with monomial relations.
///
/// Arrows are filled in topological order of their sources. The rows of an
/// arrow matrix are random combinations of a basis of the left null space
/// of every path it must annihilate, so every relation holds by construction.
pub fn random_representation(
    alg: &Algebra,
    dims: &[usize],
    rng: &mut impl Rng,
) -> Result<Representation> {
    let bq = alg.bound_quiver();
    if !bq.is_monomial() {
        return Err(Error::Unsupported(
            "random representations need monomial relations".into(),
        ));
    }
    let q = alg.quiver();
    if dims.len() != q.vertex_count() {
        return Err(Error::SizeMismatch {
            expected: q.vertex_count(),
            actual: dims.len(),
        });
    }
    let mut maps: Vec<Option<QMatrix>> = vec![None; q.arrows().len()];
    let mut order: Vec<usize> = (0..q.arrows().len()).collect();
    let rank_of: Vec<usize> = {
        let mut r = vec![0; q.vertex_count()];
        for (k, &v) in q.topological_order().iter().enumerate() {
            r[v] = k;
        }
        r
    };
    order.sort_by_key(|&a| rank_of[q.arrows()[a].source]);
    for a in order {
        let arrow = &q.arrows()[a];
        let (rows, cols) = (dims[arrow.target], dims[arrow.source]);
        // columns that this arrow must kill
        let mut killed = QMatrix::zeros(cols, 0);
        for rel in &bq.relations {
            let path = &rel.terms[0].1;
            if path.arrows[0] != a {
                continue;
            }
            let mut m = QMatrix::identity(cols);
            for &b in &path.arrows[1..] {
                let mb = maps[b].as_ref().expect("earlier arrow already sampled");
                m = m.mul(mb);
            }
            killed = killed.hstack(&m);
        }
        let allowed = killed.transpose().kernel();
        let mut data = Vec::with_capacity(rows);
        for _ in 0..rows {
            let mut row = vec![Rational::from_integer(0.into()); cols];
            for k in 0..allowed.rows() {
                let c = small(rng, 2);
                for (x, y) in row.iter_mut().zip(allowed.row(k)) {
                    *x += &c * y;
                }
            }
            data.push(row);
        }
        maps[a] = Some(QMatrix::from_rows(data, cols));
    }
    make_representation(
        alg,
        dims.to_vec(),
        maps.into_iter()
            .map(|m| m.expect("all arrows sampled"))
            .collect(),
    )
}

/// Random dimension vector with entries in `0..=max_dim`.
pub fn random_dims(n: usize, max_dim: usize, rng: &mut impl Rng) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..=max_dim)).collect()
}

/// Random upper unitriangular integer matrix with off-diagonal entries in `[-bound, bound]`.
pub fn random_unitriangular_gram(n: usize, bound: i64, rng: &mut impl Rng) -> GramForm {
    let m = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Equal => 1,
                    std::cmp::Ordering::Less => rng.gen_range(-bound..=bound),
                    std::cmp::Ordering::Greater => 0,
                })
                .collect()
        })
        .collect::<Vec<Vec<i64>>>();
    GramForm::from_i64(&m).expect("square")
}

/// Standard basis moved by a random braid word of length `word_len`.
pub fn random_exceptional_sequence(
    g: &GramForm,
    word_len: usize,
    rng: &mut impl Rng,
) -> ExceptionalSequence {
    let n = g.rank();
    let simples = (0..n).map(|i| KClass::basis_vector(n, i)).collect();
    let mut seq = ExceptionalSequence::new(simples, g.clone())
        .expect("simples are exceptional for a unitriangular form");
    if n < 2 {
        return seq;
    }
    for _ in 0..word_len {
        let i = rng.gen_range(1..n as i64);
        let s = if rng.gen_bool(0.5) { i } else { -i };
        seq = seq
            .apply_word(&[s])
            .expect("mutations preserve exceptionality");
    }
    seq
}

/// Random acyclic quiver on `n` vertices with up to `max_mult` arrows per forward pair
/// and a random set of length-2 zero relations.
pub fn random_monomial_algebra(n: usize, max_mult: usize, rng: &mut impl Rng) -> BoundQuiver {
    let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut arrows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mult = if j == i + 1 {
                rng.gen_range(1..=max_mult)
            } else {
                rng.gen_range(0..=max_mult.min(1))
            };
            for _ in 0..mult {
                arrows.push(Arrow {
                    name: format!("x{}", arrows.len() + 1),
                    source: i,
                    target: j,
                });
            }
        }
    }
    let quiver = Quiver::new("random", vertices, arrows).expect("forward arrows are acyclic");
    let mut composable = Vec::new();
    for (b, bb) in quiver.arrows().iter().enumerate() {
        for (a, aa) in quiver.arrows().iter().enumerate() {
            if aa.target == bb.source {
                composable.push(vec![b, a]);
            }
        }
    }
    composable.shuffle(rng);
    let keep = rng.gen_range(0..=composable.len());
    let relations = composable[..keep]
        .iter()
        .map(|p| {
            let path = quiver.path_from_indices(p).expect("composable");
            RelationExpr::new(vec![(q(1), path)]).expect("length two")
        })
        .collect();
    BoundQuiver::new(quiver, relations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ktheory::is_numerical_exceptional_sequence;

    #[test]
    fn random_bondal_reps_satisfy_relations() {
        let alg = Algebra::bondal();
        let mut r = rng(7);
        for _ in 0..30 {
            let dims = random_dims(3, 3, &mut r);
            let m = random_representation(&alg, &dims, &mut r).unwrap();
            assert_eq!(m.dims(), &dims[..]);
            assert!(m.relation_residual(&alg).is_none());
        }
    }

    #[test]
    fn seeded_output_is_reproducible() {
        let alg = Algebra::bondal();
        let a = random_representation(&alg, &[2, 2, 2], &mut rng(1)).unwrap();
        let b = random_representation(&alg, &[2, 2, 2], &mut rng(1)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_sequences_are_exceptional() {
        let mut r = rng(3);
        for n in 2..=5 {
            let g = random_unitriangular_gram(n, 3, &mut r);
            assert!(g.is_unitriangular());
            let s = random_exceptional_sequence(&g, 6, &mut r);
            assert!(is_numerical_exceptional_sequence(s.classes(), &g));
        }
    }

    #[test]
    fn random_algebras_build() {
        let mut r = rng(11);
        for _ in 0..5 {
            let bq = random_monomial_algebra(4, 2, &mut r);
            assert!(bq.is_monomial());
            Algebra::new(bq);
        }
    }
}
