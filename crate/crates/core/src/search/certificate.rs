use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{
    box_size, combine, exceptional_coefficients, smallest_exceptional_coefficients, BOX_POINT_LIMIT,
};
use crate::error::{Error, Result};
use crate::ktheory::{orthogonal_lattice, GramForm, KClass, Side};
use crate::linalg::Int;
use crate::report::{int, int_matrix};

/// Residue tables larger than this are not attempted.
const RESIDUE_POINT_LIMIT: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateKind {
    /// `R + Rᵀ = 0`, so `χ(v, v) = 0` on the whole lattice.
    ZeroForm,
    /// Every value of `χ(v, v)` mod `modulus` lies in `residues`, which omits 1.
    Modular { modulus: u64, residues: Vec<u64> },
    /// No solution with coefficients in `[-bound, bound]`. Bounded evidence only.
    Box { bound: u64 },
    /// An exceptional class in the lattice.
    Extension {
        coefficients: Vec<i64>,
        witness: KClass,
    },
}

impl CertificateKind {
    pub fn is_proof(&self) -> bool {
        matches!(
            self,
            CertificateKind::ZeroForm | CertificateKind::Modular { .. }
        )
    }

    pub fn strength(&self) -> &'static str {
        match self {
            CertificateKind::ZeroForm | CertificateKind::Modular { .. } => "proof",
            CertificateKind::Box { .. } => "bounded evidence only",
            CertificateKind::Extension { .. } => "refuted",
        }
    }
}

/// The orthogonal lattice of a class on one side, with the evidence about exceptional classes in it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonextendabilityCertificate {
    pub class: KClass,
    pub side: Side,
    pub basis: Vec<KClass>,
    #[serde(serialize_with = "int_matrix")]
    pub restricted_gram: Vec<Vec<Int>>,
    pub proof: CertificateKind,
    pub strength: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoxCheck {
    pub bound: u64,
    pub points: String,
    pub searched: bool,
    pub found: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    NumericallyNonextendable,
    NoExtensionFoundUpTo { bound: u64 },
    Extendable { side: Side, witness: KClass },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonextendabilityReport {
    pub class: KClass,
    #[serde(serialize_with = "int")]
    pub self_pairing: Int,
    pub left: NonextendabilityCertificate,
    pub right: NonextendabilityCertificate,
    pub left_box: BoxCheck,
    pub right_box: BoxCheck,
    pub biorthogonal_rank: usize,
    pub verdict: Verdict,
}

impl NonextendabilityReport {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::NumericallyNonextendable
    }
}

fn residue_table(r: &[Vec<Int>], m: u64) -> Option<BTreeSet<u64>> {
    let rank = r.len();
    let points = (0..rank).try_fold(1u64, |acc, _| acc.checked_mul(m))?;
    if points > RESIDUE_POINT_LIMIT {
        return None;
    }
    let mi = Int::from(m);
    let rm: Vec<Vec<u64>> = r
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| x.mod_floor(&mi).to_u64().expect("reduced"))
                .collect()
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut x = vec![0u64; rank];
    loop {
        let mut total: u128 = 0;
        for (i, row) in rm.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                total += u128::from(x[i]) * u128::from(*g) % u128::from(m) * u128::from(x[j]);
            }
        }
        seen.insert((total % u128::from(m)) as u64);
        let mut k = rank;
        loop {
            if k == 0 {
                return Some(seen);
            }
            k -= 1;
            x[k] += 1;
            if x[k] < m {
                break;
            }
            x[k] = 0;
        }
    }
}

/// Tries the zero-form test, then residue tables for `m = 2..=modulus_cap`.
pub fn nonexistence_certificate(
    basis: &[KClass],
    g: &GramForm,
    modulus_cap: u64,
) -> Option<CertificateKind> {
    let r = g.restrict(basis);
    let n = r.len();
    if (0..n).all(|i| (0..n).all(|j| (&r[i][j] + &r[j][i]).is_zero())) {
        return Some(CertificateKind::ZeroForm);
    }
    (2..=modulus_cap).find_map(|m| {
        let table = residue_table(&r, m)?;
        (!table.contains(&1)).then(|| CertificateKind::Modular {
            modulus: m,
            residues: table.into_iter().collect(),
        })
    })
}

fn side_certificate(
    v: &KClass,
    g: &GramForm,
    side: Side,
    bound: u64,
    modulus_cap: u64,
) -> Result<NonextendabilityCertificate> {
    let basis = orthogonal_lattice(std::slice::from_ref(v), g, side)?;
    let restricted_gram = g.restrict(&basis);
    let proof = match nonexistence_certificate(&basis, g, modulus_cap) {
        Some(p) => p,
        None => {
            let points = box_size(basis.len(), bound);
            if points > BOX_POINT_LIMIT {
                return Err(Error::Unsupported(format!(
                    "no proof found and a box of {points} points is beyond the search limit; lower the bound"
                )));
            }
            match smallest_exceptional_coefficients(&restricted_gram, bound) {
                Some(c) => CertificateKind::Extension {
                    witness: combine(&basis, &c, g.rank()),
                    coefficients: c,
                },
                None => CertificateKind::Box { bound },
            }
        }
    };
    let strength = proof.strength();
    Ok(NonextendabilityCertificate {
        class: v.clone(),
        side,
        basis,
        restricted_gram,
        proof,
        strength,
    })
}

fn box_check(cert: &NonextendabilityCertificate, bound: u64) -> BoxCheck {
    let points = box_size(cert.basis.len(), bound);
    let searched =
        points <= BOX_POINT_LIMIT && !matches!(cert.proof, CertificateKind::Extension { .. });
    let found = if searched {
        exceptional_coefficients(&cert.restricted_gram, bound).len()
    } else {
        0
    };
    BoxCheck {
        bound,
        points: points.to_string(),
        searched,
        found,
    }
}

/// Certificates for both one-sided orthogonals of an exceptional class.
pub fn certify_nonextendable(
    v: &KClass,
    g: &GramForm,
    bound: u64,
    modulus_cap: u64,
) -> Result<NonextendabilityReport> {
    let self_pairing = g.chi(v, v)?;
    if self_pairing != Int::from(1) {
        return Err(Error::NotExceptional(format!(
            "{v} with χ(v,v) = {self_pairing}"
        )));
    }
    let left = side_certificate(v, g, Side::Left, bound, modulus_cap)?;
    let right = side_certificate(v, g, Side::Right, bound, modulus_cap)?;
    let biorthogonal_rank = orthogonal_lattice(std::slice::from_ref(v), g, Side::Bi)?.len();
    let (left_box, right_box) = (box_check(&left, bound), box_check(&right, bound));
    let verdict = if let CertificateKind::Extension { witness, .. } = &left.proof {
        Verdict::Extendable {
            side: Side::Left,
            witness: witness.clone(),
        }
    } else if let CertificateKind::Extension { witness, .. } = &right.proof {
        Verdict::Extendable {
            side: Side::Right,
            witness: witness.clone(),
        }
    } else if left.proof.is_proof() && right.proof.is_proof() {
        Verdict::NumericallyNonextendable
    } else {
        Verdict::NoExtensionFoundUpTo { bound }
    };
    Ok(NonextendabilityReport {
        class: v.clone(),
        self_pairing,
        left,
        right,
        left_box,
        right_box,
        biorthogonal_rank,
        verdict,
    })
}
