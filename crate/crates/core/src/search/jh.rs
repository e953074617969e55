use num_traits::{One, Signed};
use serde::Serialize;

use super::certificate::{certify_nonextendable, NonextendabilityReport};
use super::{
    box_size, combine, enumerate_exceptional_classes, smallest_exceptional_coefficients,
    BOX_POINT_LIMIT,
};
use crate::error::Result;
use crate::homalg::{
    ext_dims, global_dimension, gram_matrix_simples, projective_dimension_bound, GlobalDimension,
    GramRoute,
};
use crate::ktheory::{
    class_of, is_numerical_exceptional_sequence, orthogonal_lattice, GramForm, KClass, Side,
};
use crate::lattice::determinant;
use crate::linalg::Int;
use crate::quiver::{Algebra, BoundQuiver};
use crate::report::{int, int_matrix};
use crate::repr::{bondal_thin_object, hom_dim, projective_rep, Representation};

#[derive(Debug, Clone)]
pub struct Candidate {
    pub name: String,
    pub rep: Representation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JhOptions {
    /// Box bound for certificate cross-checks and fallback searches.
    pub bound: u64,
    pub modulus_cap: u64,
    /// Box bound for the extension scan when no violation is found.
    pub scan_bound: u64,
}

impl Default for JhOptions {
    fn default() -> Self {
        JhOptions {
            bound: 100,
            modulus_cap: 16,
            scan_bound: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FullSequenceReport {
    pub objects: Vec<String>,
    pub classes: Vec<KClass>,
    pub length: usize,
    #[serde(serialize_with = "int")]
    pub determinant: Int,
    pub numerically_exceptional: bool,
    /// `hom_dims[i][j] = dim Hom(E_i, E_j)` for the projectives in sequence order.
    pub hom_dims: Vec<Vec<usize>>,
    pub backward_homs_vanish: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateReport {
    pub name: String,
    pub class: KClass,
    pub end_dim: usize,
    /// `dim Ext^k(E, E)` for `k = 1..`.
    pub higher_ext: Vec<usize>,
    pub exceptional_object: bool,
    pub certificate: Option<NonextendabilityReport>,
    pub remainder_rank: usize,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ScanStatus {
    Extends {
        side: Side,
        witness: KClass,
    },
    /// The class alone already spans the lattice.
    FullAlone,
    NoExtensionFound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassScan {
    pub class: KClass,
    #[serde(flatten)]
    pub status: ScanStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum JhVerdict {
    Violation {
        candidate: String,
        /// Lengths of the two maximal numerical exceptional sequences.
        sequence_lengths: [usize; 2],
        /// Number of components of the two semiorthogonal decompositions.
        component_counts: [usize; 2],
        remainder_rank: usize,
    },
    NoViolationWitnessed {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub bound: u64,
    pub searched: bool,
    pub classes: Vec<ClassScan>,
    pub all_extend: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JhReport {
    pub quiver: String,
    pub lattice_rank: usize,
    #[serde(serialize_with = "int_matrix")]
    pub gram: Vec<Vec<Int>>,
    pub gram_route: GramRoute,
    pub global_dimension: String,
    pub full_sequence: FullSequenceReport,
    pub candidates: Vec<CandidateReport>,
    pub scan: Option<ScanReport>,
    pub verdict: JhVerdict,
}

impl JhReport {
    pub fn is_violation(&self) -> bool {
        matches!(self.verdict, JhVerdict::Violation { .. })
    }
}

fn same_presentation(a: &BoundQuiver, b: &BoundQuiver) -> bool {
    a.quiver.vertex_count() == b.quiver.vertex_count()
        && a.quiver.arrows() == b.quiver.arrows()
        && a.relations == b.relations
}

/// Candidates known for a presentation: the thin object when the input is Bondal's quiver.
pub fn builtin_candidates(alg: &Algebra) -> Vec<Candidate> {
    if !same_presentation(alg.bound_quiver(), &BoundQuiver::bondal()) {
        return Vec::new();
    }
    bondal_thin_object(alg)
        .map(|rep| {
            vec![Candidate {
                name: "P".into(),
                rep,
            }]
        })
        .unwrap_or_default()
}

fn full_sequence(alg: &Algebra, g: &GramForm) -> FullSequenceReport {
    let q = alg.quiver();
    let order: Vec<usize> = q.topological_order().iter().rev().copied().collect();
    let reps: Vec<Representation> = order
        .iter()
        .map(|&v| projective_rep(alg, v).expect("valid vertex"))
        .collect();
    let classes: Vec<KClass> = reps.iter().map(class_of).collect();
    let hom_dims: Vec<Vec<usize>> = reps
        .iter()
        .map(|a| reps.iter().map(|b| hom_dim(alg, a, b)).collect())
        .collect();
    let backward_homs_vanish = (0..reps.len()).all(|i| (0..i).all(|j| hom_dims[i][j] == 0))
        && (0..reps.len()).all(|i| hom_dims[i][i] == 1);
    let rows: Vec<Vec<Int>> = classes.iter().map(|c| c.coords().to_vec()).collect();
    FullSequenceReport {
        objects: order
            .iter()
            .map(|&v| format!("P_{}", q.vertex_name(v)))
            .collect(),
        length: classes.len(),
        determinant: determinant(&rows),
        numerically_exceptional: is_numerical_exceptional_sequence(&classes, g),
        classes,
        hom_dims,
        backward_homs_vanish,
    }
}

fn examine(
    alg: &Algebra,
    g: &GramForm,
    c: &Candidate,
    ext_top: usize,
    opts: &JhOptions,
) -> CandidateReport {
    let class = class_of(&c.rep);
    let dims = ext_dims(alg, &c.rep, &c.rep, ext_top);
    let end_dim = dims[0];
    let higher_ext = dims[1..].to_vec();
    let exceptional_object = end_dim == 1 && higher_ext.iter().all(|&d| d == 0);
    let remainder_rank =
        orthogonal_lattice(std::slice::from_ref(&class), g, Side::Bi).map_or(0, |b| b.len());
    let (certificate, note) = if exceptional_object {
        match certify_nonextendable(&class, g, opts.bound, opts.modulus_cap) {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, Some("not an exceptional object".into()))
    };
    CandidateReport {
        name: c.name.clone(),
        class,
        end_dim,
        higher_ext,
        exceptional_object,
        certificate,
        remainder_rank,
        note,
    }
}

fn scan(g: &GramForm, bound: u64) -> ScanReport {
    let n = g.rank();
    if box_size(n, bound) > BOX_POINT_LIMIT {
        return ScanReport {
            bound,
            searched: false,
            classes: Vec::new(),
            all_extend: false,
        };
    }
    let simples: Vec<KClass> = (0..n).map(|i| KClass::basis_vector(n, i)).collect();
    let classes: Vec<ClassScan> = enumerate_exceptional_classes(&simples, g, bound)
        .into_iter()
        .map(|v| {
            if n == 1 {
                return ClassScan {
                    class: v,
                    status: ScanStatus::FullAlone,
                };
            }
            for side in [Side::Left, Side::Right] {
                let basis =
                    orthogonal_lattice(std::slice::from_ref(&v), g, side).expect("sizes agree");
                if let Some(c) = smallest_exceptional_coefficients(&g.restrict(&basis), bound) {
                    return ClassScan {
                        status: ScanStatus::Extends {
                            side,
                            witness: combine(&basis, &c, n),
                        },
                        class: v,
                    };
                }
            }
            ClassScan {
                class: v,
                status: ScanStatus::NoExtensionFound,
            }
        })
        .collect();
    let all_extend = classes
        .iter()
        .all(|c| matches!(c.status, ScanStatus::Extends { .. }));
    ScanReport {
        bound,
        searched: true,
        classes,
        all_extend,
    }
}

/// Compares the projective decomposition with each candidate's; reports a violation when one certifies.
pub fn certify_jh_violation(
    alg: &Algebra,
    extra: &[Candidate],
    opts: &JhOptions,
) -> Result<JhReport> {
    let gc = gram_matrix_simples(alg);
    let g = gc.gram;
    let n = g.rank();
    let gldim = global_dimension(alg, projective_dimension_bound(alg));
    let ext_top = match gldim {
        GlobalDimension::Exact(d) => d.max(1),
        GlobalDimension::AtLeast(d) => d,
    };
    let full = full_sequence(alg, &g);
    let full_ok = full.numerically_exceptional
        && full.backward_homs_vanish
        && full.length == n
        && full.determinant.abs().is_one();

    let mut candidates: Vec<Candidate> = builtin_candidates(alg);
    candidates.extend(extra.iter().cloned());
    let reports: Vec<CandidateReport> = candidates
        .iter()
        .map(|c| examine(alg, &g, c, ext_top, opts))
        .collect();

    let violating = reports.iter().find(|r| {
        r.exceptional_object
            && r.remainder_rank > 0
            && r.certificate
                .as_ref()
                .is_some_and(NonextendabilityReport::is_certified)
    });
    let mut verdict = match violating {
        Some(r) if full_ok => JhVerdict::Violation {
            candidate: r.name.clone(),
            sequence_lengths: [full.length, 1],
            component_counts: [full.length, 2],
            remainder_rank: r.remainder_rank,
        },
        _ => {
            let reason = if !full_ok {
                "the projective sequence does not verify".to_string()
            } else if n == 1 {
                "the lattice has rank 1, so every decomposition has one component".to_string()
            } else if candidates.is_empty() {
                "no candidate objects".to_string()
            } else {
                "no candidate is certified nonextendable".to_string()
            };
            JhVerdict::NoViolationWitnessed { reason }
        }
    };
    let scan = (!matches!(verdict, JhVerdict::Violation { .. })).then(|| scan(&g, opts.scan_bound));
    if let (Some(s), JhVerdict::NoViolationWitnessed { reason }) = (&scan, &mut verdict) {
        if s.searched && s.all_extend && !s.classes.is_empty() {
            reason.push_str(&format!(
                "; every exceptional class with coefficients up to {} extends",
                s.bound
            ));
        }
    }
    Ok(JhReport {
        quiver: alg.quiver().name().to_string(),
        lattice_rank: n,
        gram: g.matrix().to_vec(),
        gram_route: gc.route,
        global_dimension: match gldim {
            GlobalDimension::Exact(d) => d.to_string(),
            GlobalDimension::AtLeast(d) => format!(">= {d}"),
        },
        full_sequence: full,
        candidates: reports,
        scan,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::parse_quiver_spec;

    #[test]
    fn bondal_violation() {
        let r = certify_jh_violation(&Algebra::bondal(), &[], &JhOptions::default()).unwrap();
        let JhVerdict::Violation {
            sequence_lengths,
            component_counts,
            remainder_rank,
            ..
        } = &r.verdict
        else {
            panic!("{:?}", r.verdict)
        };
        assert_eq!(*sequence_lengths, [3, 1]);
        assert_eq!(*component_counts, [3, 2]);
        assert_eq!(*remainder_rank, 2);
        assert_eq!(r.full_sequence.objects, vec!["P_3", "P_2", "P_1"]);
        assert_eq!(
            r.full_sequence.hom_dims,
            vec![vec![1, 2, 2], vec![0, 1, 2], vec![0, 0, 1]]
        );
        assert!(r.scan.is_none());
    }

    #[test]
    fn a2_has_no_violation() {
        let alg = Algebra::new(
            parse_quiver_spec("quiver a2\nvertices: 1 2\narrows:\n x: 1 -> 2\n").unwrap(),
        );
        let r = certify_jh_violation(&alg, &[], &JhOptions::default()).unwrap();
        assert!(!r.is_violation());
        let scan = r.scan.unwrap();
        assert_eq!(scan.classes.len(), 6);
        assert!(scan.all_extend);
    }

    #[test]
    fn point_has_no_violation() {
        let alg = Algebra::new(parse_quiver_spec("quiver pt\nvertices: 1\n").unwrap());
        let r = certify_jh_violation(&alg, &[], &JhOptions::default()).unwrap();
        assert!(!r.is_violation());
        assert!(r
            .scan
            .unwrap()
            .classes
            .iter()
            .all(|c| c.status == ScanStatus::FullAlone));
    }
}
