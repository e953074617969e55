//! Independent replay of nonextendability certificates.
//!
//! Nothing here calls the lattice, Gram or enumeration code used to produce
//! certificates. Pairings are evaluated by direct summation, ranks by plain
//! rational elimination, and saturation by the gcd of maximal minors.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::Value;

use super::certificate::{CertificateKind, NonextendabilityCertificate};
use crate::ktheory::{KClass, Side};
use crate::linalg::Int;

/// Largest residue table or box the checker will replay.
const REPLAY_LIMIT: u128 = 20_000_000;

fn pair(g: &[Vec<Int>], x: &[Int], y: &[Int]) -> Int {
    let mut s = Int::zero();
    for i in 0..x.len() {
        for j in 0..y.len() {
            s += &x[i] * &g[i][j] * &y[j];
        }
    }
    s
}

fn rational_rank(rows: &[Vec<Int>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[rank][c];
            for j in c..cols {
                let d = &f * &m[rank][j];
                m[i][j] -= d;
            }
        }
        rank += 1;
    }
    rank
}

fn rational_det(rows: Vec<Vec<Int>>) -> Int {
    let n = rows.len();
    let mut m: Vec<Vec<BigRational>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Int::zero();
        };
        if p != c {
            m.swap(c, p);
            det = -det;
        }
        det *= &m[c][c];
        for i in c + 1..n {
            let f = &m[i][c] / &m[c][c];
            for j in c..n {
                let d = &f * &m[c][j];
                m[i][j] -= d;
            }
        }
    }
    det.to_integer()
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    if n < r {
        return Vec::new();
    }
    let mut out = subsets(n - 1, r);
    for mut s in subsets(n - 1, r - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// gcd of all maximal minors; 1 exactly when the rows span a saturated sublattice.
fn minor_gcd(rows: &[Vec<Int>], n: usize) -> Int {
    let r = rows.len();
    let mut g = Int::zero();
    for cols in subsets(n, r) {
        let minor: Vec<Vec<Int>> = rows
            .iter()
            .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
            .collect();
        g = g.gcd(&rational_det(minor));
        if g.is_one() {
            break;
        }
    }
    if r == 0 {
        Int::one()
    } else {
        g
    }
}

fn for_each_point(rank: usize, lo: i64, hi: i64, mut f: impl FnMut(&[i64]) -> bool) -> bool {
    let mut x = vec![lo; rank];
    loop {
        if !f(&x) {
            return false;
        }
        let mut k = rank;
        loop {
            if k == 0 {
                return true;
            }
            k -= 1;
            if x[k] < hi {
                x[k] += 1;
                break;
            }
            x[k] = lo;
        }
    }
}

fn quad(r: &[Vec<Int>], x: &[i64]) -> Int {
    let xs: Vec<Int> = x.iter().map(|&c| Int::from(c)).collect();
    pair(r, &xs, &xs)
}

fn points(rank: usize, side: u128) -> u128 {
    (0..rank)
        .try_fold(1u128, |a, _| a.checked_mul(side))
        .unwrap_or(u128::MAX)
}

/// Replays a certificate against a Gram matrix. Returns the reason for rejection.
pub fn check_certificate(
    cert: &NonextendabilityCertificate,
    gram: &[Vec<Int>],
) -> Result<(), String> {
    let n = gram.len();
    if gram.iter().any(|row| row.len() != n) {
        return Err("Gram matrix is not square".into());
    }
    let v = cert.class.coords();
    if v.len() != n {
        return Err(format!(
            "class has {} coordinates, lattice rank is {n}",
            v.len()
        ));
    }
    if !pair(gram, v, v).is_one() {
        return Err(format!("class {} is not exceptional", cert.class));
    }
    let basis: Vec<Vec<Int>> = cert.basis.iter().map(|u| u.coords().to_vec()).collect();
    if basis.iter().any(|u| u.len() != n) {
        return Err("basis vector of the wrong length".into());
    }

    // constraint rows cut out the orthogonal lattice
    let left: Vec<Int> = (0..n)
        .map(|i| (0..n).map(|j| &gram[i][j] * &v[j]).sum())
        .collect();
    let right: Vec<Int> = (0..n)
        .map(|j| (0..n).map(|i| &v[i] * &gram[i][j]).sum())
        .collect();
    let constraints = match cert.side {
        Side::Left => vec![left],
        Side::Right => vec![right],
        Side::Bi => vec![left, right],
    };
    for (k, u) in basis.iter().enumerate() {
        for c in &constraints {
            let dot: Int = c.iter().zip(u).map(|(a, b)| a * b).sum();
            if !dot.is_zero() {
                return Err(format!("basis vector {k} is not orthogonal to the class"));
            }
        }
    }
    let expected = n - rational_rank(&constraints);
    if basis.len() != expected {
        return Err(format!(
            "basis has {} vectors, orthogonal lattice has rank {expected}",
            basis.len()
        ));
    }
    if rational_rank(&basis) != expected {
        return Err("basis vectors are linearly dependent".into());
    }
    let g = minor_gcd(&basis, n);
    if !g.is_one() {
        return Err(format!("basis spans a sublattice of index {g}"));
    }

    let r: Vec<Vec<Int>> = basis
        .iter()
        .map(|x| basis.iter().map(|y| pair(gram, x, y)).collect())
        .collect();
    if r != cert.restricted_gram {
        return Err("restricted Gram matrix does not match".into());
    }
    let rank = r.len();
    let strength = match &cert.proof {
        CertificateKind::ZeroForm => {
            for i in 0..rank {
                for j in 0..rank {
                    if !(&r[i][j] + &r[j][i]).is_zero() {
                        return Err(format!("symmetrized form is nonzero at ({i},{j})"));
                    }
                }
            }
            "proof"
        }
        CertificateKind::Modular { modulus, residues } => {
            let m = *modulus;
            if m < 2 {
                return Err("modulus must be at least 2".into());
            }
            if points(rank, u128::from(m)) > REPLAY_LIMIT {
                return Err("residue table too large to replay".into());
            }
            let mi = Int::from(m);
            let mut seen = BTreeSet::new();
            let hi = i64::try_from(m - 1).map_err(|_| "modulus too large".to_string())?;
            for_each_point(rank, 0, hi, |x| {
                seen.insert(
                    quad(&r, x)
                        .mod_floor(&mi)
                        .to_u64()
                        .expect("reduced residue"),
                );
                true
            });
            let claimed: BTreeSet<u64> = residues.iter().copied().collect();
            if claimed != seen || claimed.len() != residues.len() {
                return Err(format!("residue table mod {m} does not match"));
            }
            if seen.contains(&1) {
                return Err(format!("1 is a value of the form mod {m}"));
            }
            "proof"
        }
        CertificateKind::Box { bound } => {
            let b = i64::try_from(*bound).map_err(|_| "bound too large".to_string())?;
            if points(rank, 2 * u128::from(*bound) + 1) > REPLAY_LIMIT {
                return Err("box too large to replay".into());
            }
            let mut hit = None;
            for_each_point(rank, -b, b, |x| {
                if quad(&r, x).is_one() {
                    hit = Some(x.to_vec());
                    return false;
                }
                true
            });
            if let Some(x) = hit {
                return Err(format!("box contains a solution {x:?}"));
            }
            "bounded evidence only"
        }
        CertificateKind::Extension {
            coefficients,
            witness,
        } => {
            if coefficients.len() != rank {
                return Err("witness coefficients have the wrong length".into());
            }
            let w: Vec<Int> = (0..n)
                .map(|i| {
                    basis
                        .iter()
                        .zip(coefficients)
                        .map(|(u, &c)| &u[i] * Int::from(c))
                        .sum()
                })
                .collect();
            if w != witness.coords() {
                return Err("witness does not match its coefficients".into());
            }
            if !pair(gram, &w, &w).is_one() {
                return Err("witness is not exceptional".into());
            }
            "refuted"
        }
    };
    if cert.strength != strength {
        return Err(format!(
            "strength `{}` does not match the certificate kind",
            cert.strength
        ));
    }
    Ok(())
}

fn int_of(v: &Value) -> Result<Int, String> {
    match v {
        Value::String(s) => s.parse().map_err(|_| format!("not an integer: {s}")),
        Value::Number(n) => n
            .to_string()
            .parse()
            .map_err(|_| format!("not an integer: {n}")),
        _ => Err(format!("expected an integer, found {v}")),
    }
}

fn u64_of(v: &Value) -> Result<u64, String> {
    int_of(v)?
        .to_u64()
        .ok_or_else(|| format!("out of range: {v}"))
}

fn i64_of(v: &Value) -> Result<i64, String> {
    int_of(v)?
        .to_i64()
        .ok_or_else(|| format!("out of range: {v}"))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, String> {
    v.as_array()
        .ok_or_else(|| format!("`{what}` must be an array"))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, String> {
    v.get(key).ok_or_else(|| format!("missing field `{key}`"))
}

fn class_of(v: &Value) -> Result<KClass, String> {
    array(v, "class")?
        .iter()
        .map(int_of)
        .collect::<Result<Vec<_>, _>>()
        .map(KClass)
}

/// Reads a certificate back from its JSON form.
pub fn certificate_from_json(v: &Value) -> Result<NonextendabilityCertificate, String> {
    let class = class_of(field(v, "class")?)?;
    let side = match field(v, "side")?.as_str() {
        Some("left") => Side::Left,
        Some("right") => Side::Right,
        Some("bi") => Side::Bi,
        _ => return Err("`side` must be left, right or bi".into()),
    };
    let basis = array(field(v, "basis")?, "basis")?
        .iter()
        .map(class_of)
        .collect::<Result<Vec<_>, _>>()?;
    let restricted_gram = array(field(v, "restricted_gram")?, "restricted_gram")?
        .iter()
        .map(|row| array(row, "restricted_gram")?.iter().map(int_of).collect())
        .collect::<Result<Vec<Vec<Int>>, String>>()?;
    let p = field(v, "proof")?;
    let proof = match field(p, "kind")?.as_str() {
        Some("zero_form") => CertificateKind::ZeroForm,
        Some("modular") => CertificateKind::Modular {
            modulus: u64_of(field(p, "modulus")?)?,
            residues: array(field(p, "residues")?, "residues")?
                .iter()
                .map(u64_of)
                .collect::<Result<_, _>>()?,
        },
        Some("box") => CertificateKind::Box {
            bound: u64_of(field(p, "bound")?)?,
        },
        Some("extension") => CertificateKind::Extension {
            coefficients: array(field(p, "coefficients")?, "coefficients")?
                .iter()
                .map(i64_of)
                .collect::<Result<_, _>>()?,
            witness: class_of(field(p, "witness")?)?,
        },
        _ => return Err("unknown proof kind".into()),
    };
    let strength = match field(v, "strength")?.as_str() {
        Some("proof") => "proof",
        Some("bounded evidence only") => "bounded evidence only",
        Some("refuted") => "refuted",
        _ => return Err("unknown strength".into()),
    };
    Ok(NonextendabilityCertificate {
        class,
        side,
        basis,
        restricted_gram,
        proof,
        strength,
    })
}

/// Every object in a JSON document that looks like a certificate, in document order.
pub fn find_certificates(v: &Value) -> Vec<&Value> {
    let mut out = Vec::new();
    fn walk<'a>(v: &'a Value, out: &mut Vec<&'a Value>) {
        match v {
            Value::Object(o) => {
                if ["class", "side", "basis", "restricted_gram", "proof"]
                    .iter()
                    .all(|k| o.contains_key(*k))
                {
                    out.push(v);
                }
                o.values().for_each(|x| walk(x, out));
            }
            Value::Array(a) => a.iter().for_each(|x| walk(x, out)),
            _ => {}
        }
    }
    walk(v, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ktheory::GramForm;
    use crate::report::to_value;
    use crate::search::certify_nonextendable;

    #[test]
    fn accepts_emitted_and_round_trips() {
        let g = GramForm::bondal();
        let rep = certify_nonextendable(&KClass::from_i64(&[1, 1, 1]), &g, 20, 16).unwrap();
        for c in [&rep.left, &rep.right] {
            check_certificate(c, g.matrix()).unwrap();
            let back = certificate_from_json(&to_value(c)).unwrap();
            assert_eq!(&back, c);
        }
        assert_eq!(find_certificates(&to_value(&rep)).len(), 2);
    }

    #[test]
    fn saturation_and_minors() {
        assert_eq!(
            minor_gcd(&[vec![Int::from(2), Int::from(0)]], 2),
            Int::from(2)
        );
        assert_eq!(
            minor_gcd(&[vec![Int::from(2), Int::from(3)]], 2),
            Int::from(1)
        );
        assert_eq!(
            rational_det(vec![
                vec![Int::from(0), Int::from(1)],
                vec![Int::from(1), Int::from(0)]
            ]),
            Int::from(-1)
        );
        assert_eq!(subsets(4, 2).len(), 6);
    }
}
