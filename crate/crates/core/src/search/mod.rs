//! Searches over the Grothendieck lattice and the certificates they produce.

mod certificate;
pub mod check;
mod jh;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

pub use certificate::{
    certify_nonextendable, nonexistence_certificate, BoxCheck, CertificateKind,
    NonextendabilityCertificate, NonextendabilityReport, Verdict,
};
pub use jh::{
    certify_jh_violation, Candidate, CandidateReport, ClassScan, FullSequenceReport, JhOptions,
    JhReport, JhVerdict, ScanStatus,
};

use crate::ktheory::{GramForm, KClass};
use crate::linalg::Int;

/// Enumeration budget: boxes with more points are not searched exhaustively.
pub const BOX_POINT_LIMIT: u128 = 50_000_000;

pub fn box_size(rank: usize, bound: u64) -> u128 {
    let side = 2 * u128::from(bound) + 1;
    (0..rank)
        .try_fold(1u128, |acc, _| acc.checked_mul(side))
        .unwrap_or(u128::MAX)
}

/// Quadratic form `x ↦ xᵀ R x` with an `i128` path when no intermediate can overflow.
struct QuadForm {
    big: Vec<Vec<Int>>,
    small: Option<Vec<Vec<i128>>>,
}

impl QuadForm {
    fn new(r: &[Vec<Int>], bound: u64) -> Self {
        let n = r.len() as u128;
        let max = r
            .iter()
            .flatten()
            .map(|x| x.abs())
            .max()
            .unwrap_or_default();
        // |xᵀRx| ≤ n² · max|R| · B²
        let fits = max.to_u128().and_then(|m| {
            let b = u128::from(bound);
            m.checked_mul(n * n)?.checked_mul(b.checked_mul(b)?)
        });
        let small = fits.filter(|&v| v < i128::MAX as u128 / 2).map(|_| {
            r.iter()
                .map(|row| row.iter().map(|x| x.to_i128().expect("bounded")).collect())
                .collect()
        });
        QuadForm {
            big: r.to_vec(),
            small,
        }
    }

    fn is_one(&self, c: &[i64]) -> bool {
        match &self.small {
            Some(m) => {
                let mut total: i128 = 0;
                for (i, row) in m.iter().enumerate() {
                    let ci = i128::from(c[i]);
                    if ci == 0 {
                        continue;
                    }
                    let mut rw: i128 = 0;
                    for (g, &x) in row.iter().zip(c) {
                        rw += g * i128::from(x);
                    }
                    total += ci * rw;
                }
                total == 1
            }
            None => {
                let mut total = Int::zero();
                for (i, row) in self.big.iter().enumerate() {
                    let rw: Int = row.iter().zip(c).map(|(g, &x)| g * Int::from(x)).sum();
                    total += Int::from(c[i]) * rw;
                }
                total.is_one()
            }
        }
    }
}

/// Advances `c[from..]` through the box in lexicographic order; false when exhausted.
fn odometer(c: &mut [i64], from: usize, bound: i64) -> bool {
    for k in (from..c.len()).rev() {
        if c[k] < bound {
            c[k] += 1;
            return true;
        }
        c[k] = -bound;
    }
    false
}

fn shard(q: &QuadForm, rank: usize, lead: i64, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut c = vec![-bound; rank];
    c[0] = lead;
    loop {
        if q.is_one(&c) {
            out.push(c.clone());
        }
        if !odometer(&mut c, 1, bound) {
            break;
        }
    }
    out
}

/// Coefficient vectors `c` with `|c_k| ≤ bound` and `cᵀ R c = 1`, in lexicographic order.
pub fn exceptional_coefficients(restricted: &[Vec<Int>], bound: u64) -> Vec<Vec<i64>> {
    let rank = restricted.len();
    if rank == 0 {
        return Vec::new();
    }
    let q = QuadForm::new(restricted, bound);
    let b = i64::try_from(bound).expect("bound fits in i64");
    let shards: Vec<Vec<Vec<i64>>> = (-b..=b)
        .into_par_iter()
        .map(|lead| shard(&q, rank, lead, b))
        .collect();
    shards.into_iter().flatten().collect()
}

fn sup_norm(c: &[i64]) -> u64 {
    c.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
}

/// A solution of least sup-norm (ties broken lexicographically), searching boxes of doubling size up to `bound`.
pub fn smallest_exceptional_coefficients(restricted: &[Vec<Int>], bound: u64) -> Option<Vec<i64>> {
    if restricted.is_empty() {
        return None;
    }
    let mut b = 1;
    loop {
        let b_now = b.min(bound);
        let found = exceptional_coefficients(restricted, b_now);
        if let Some(best) = found
            .into_iter()
            .min_by(|x, y| sup_norm(x).cmp(&sup_norm(y)).then_with(|| x.cmp(y)))
        {
            return Some(best);
        }
        if b_now == bound {
            return None;
        }
        b = b.saturating_mul(2);
    }
}

pub fn combine(basis: &[KClass], coeffs: &[i64], n: usize) -> KClass {
    let mut v = KClass::zero(n);
    for (u, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            v = v.add(&u.scale(&Int::from(c)));
        }
    }
    v
}

/// All `v = Σ c_k u_k` with `|c_k| ≤ bound` and `χ(v, v) = 1`, in lexicographic order of `c`.
pub fn enumerate_exceptional_classes(basis: &[KClass], g: &GramForm, bound: u64) -> Vec<KClass> {
    let r = g.restrict(basis);
    exceptional_coefficients(&r, bound)
        .iter()
        .map(|c| combine(basis, c, g.rank()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ktheory::{orthogonal_lattice, Side};

    #[test]
    fn full_bondal_lattice_has_exceptional_classes() {
        let g = GramForm::bondal();
        let basis: Vec<KClass> = (0..3).map(|i| KClass::basis_vector(3, i)).collect();
        let found = enumerate_exceptional_classes(&basis, &g, 2);
        for c in [[1, 1, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1]] {
            assert!(found.contains(&KClass::from_i64(&c)));
        }
    }

    #[test]
    fn biorthogonal_box_is_empty() {
        let g = GramForm::bondal();
        let basis = orthogonal_lattice(&[KClass::from_i64(&[1, 1, 1])], &g, Side::Bi).unwrap();
        assert!(enumerate_exceptional_classes(&basis, &g, 100).is_empty());
        assert!(enumerate_exceptional_classes(&[], &g, 5).is_empty());
    }

    #[test]
    fn lexicographic_and_deterministic() {
        let r = vec![
            vec![Int::from(1), Int::from(-1)],
            vec![Int::from(0), Int::from(1)],
        ];
        let found = exceptional_coefficients(&r, 3);
        let mut sorted = found.clone();
        sorted.sort();
        assert_eq!(found, sorted);
        assert_eq!(found.len(), 6);
        assert_eq!(smallest_exceptional_coefficients(&r, 3), Some(vec![-1, -1]));
    }

    #[test]
    fn bigint_fallback_agrees() {
        let huge = Int::from(1u64 << 62) * Int::from(1u64 << 62);
        let r = vec![
            vec![Int::from(1), huge.clone()],
            vec![Int::from(0), Int::from(1)],
        ];
        let found = exceptional_coefficients(&r, 2);
        assert_eq!(
            found,
            vec![vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]]
        );
    }

    #[test]
    fn box_sizes() {
        assert_eq!(box_size(2, 100), 201 * 201);
        assert_eq!(box_size(0, 100), 1);
        assert_eq!(box_size(200, 100), u128::MAX);
    }
}
