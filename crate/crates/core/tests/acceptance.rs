//! End-to-end acceptance checks, one line of output per criterion.
//!
//! Built without the libtest harness so the lines always reach stdout.

use std::time::{Duration, Instant};

use boundquiver::cli::{run_from, EXIT_NOT_VERIFIED, EXIT_OK};
use boundquiver::homalg::{cartan_matrix, euler_char, ext_dims, gram_matrix_simples};
use boundquiver::ktheory::{
    chi, class_of, mutate_left, mutate_right, orthogonal_lattice, projective_classes,
    ExceptionalSequence, GramForm, KClass, Side,
};
use boundquiver::repr::{
    compose_hom, hom_dim, kernel_of_composition, parse_representation, projective_rep,
    yoneda_element, yoneda_morphism, Representation,
};
use boundquiver::sample::{
    random_dims, random_exceptional_sequence, random_representation, random_unitriangular_gram, rng,
};
use boundquiver::search::check::check_certificate;
use boundquiver::search::{
    certify_nonextendable, enumerate_exceptional_classes, CertificateKind, Verdict,
};
use boundquiver::Algebra;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde_json::Value;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn bondal() -> Algebra {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/bondal.quiver"))
        .unwrap();
    Algebra::new(boundquiver::quiver::parse_quiver_spec(&text).unwrap())
}

fn thin(alg: &Algebra) -> Representation {
    let text =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/bondal_P.rep")).unwrap();
    parse_representation(&text).unwrap().build(alg).unwrap()
}

fn ints(rows: &[[i64; 3]; 3]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn run_cli(args: &[&str]) -> (i32, Value) {
    let out = run_from(std::iter::once("boundquiver").chain(args.iter().copied()));
    let doc = serde_json::from_str(&out.stdout)
        .map_err(|e| format!("{e}: {}", out.stderr))
        .unwrap();
    (out.code, doc)
}

fn c1_algebra() -> Outcome {
    let alg = bondal();
    let q = alg.quiver();
    ensure!(alg.dimension() == 9, "dimension {}", alg.dimension());
    let long: usize = (0..3)
        .flat_map(|s| (0..3).map(move |t| (s, t)))
        .map(|(s, t)| {
            alg.basis()
                .normal_paths(s, t)
                .iter()
                .filter(|p| p.len() == 2)
                .count()
        })
        .sum();
    ensure!(long == 2, "{long} normal paths of length 2");
    for killed in [["b1", "a2"], ["b2", "a1"]] {
        ensure!(
            alg.reduce(&q.path(&killed).unwrap()).is_zero(),
            "{killed:?} survives"
        );
    }
    for kept in [["b1", "a1"], ["b2", "a2"]] {
        ensure!(
            !alg.reduce(&q.path(&kept).unwrap()).is_zero(),
            "{kept:?} vanishes"
        );
    }
    Ok(())
}

fn c2_hom_algebra() -> Outcome {
    let alg = bondal();
    let q = alg.quiver();
    let p: Vec<Representation> = (0..3).map(|v| projective_rep(&alg, v).unwrap()).collect();
    // exceptional order <P_3, P_2, P_1>
    let order = [2, 1, 0];
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = (&p[order[i]], &p[order[j]]);
            let ext = ext_dims(&alg, a, b, 3);
            let expected_hom = match j.cmp(&i) {
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Greater => 2,
                std::cmp::Ordering::Less => 0,
            };
            ensure!(ext[0] == expected_hom, "Hom(E_{i}, E_{j}) = {}", ext[0]);
            ensure!(hom_dim(&alg, a, b) == ext[0], "Hom and Ext^0 disagree");
            ensure!(ext[1..].iter().all(|&d| d == 0), "higher Ext {ext:?}");
        }
    }
    let k = kernel_of_composition(&alg, &p[2], &p[1], &p[0]);
    ensure!(
        k.tensor_dim() == 4 && k.rank == 2,
        "tensor dim {}, rank {}",
        k.tensor_dim(),
        k.rank
    );
    let via = |v: usize, target: &Representation, name: &str| {
        let path = q.path(&[name]).unwrap();
        yoneda_morphism(&alg, v, target, &alg.basis().coordinate_vector(&path)).unwrap()
    };
    let (b1, b2) = (via(2, &p[1], "b1"), via(2, &p[1], "b2"));
    let (a1, a2) = (via(1, &p[0], "a1"), via(1, &p[0], "a2"));
    let spans = k.kernel_is_spanned_by(&[k.tensor(&b1, &a2).unwrap(), k.tensor(&b2, &a1).unwrap()]);
    ensure!(spans, "kernel is not spanned by b1(x)a2 and b2(x)a1");
    // image: the two surviving length-2 paths
    for (b, a, name) in [(&b1, &a1, ["b1", "a1"]), (&b2, &a2, ["b2", "a2"])] {
        let path = alg.basis().coordinate_vector(&q.path(&name).unwrap());
        ensure!(
            yoneda_element(&alg, 2, &compose_hom(b, a)) == path,
            "{name:?} composite"
        );
    }
    Ok(())
}

fn c3_thin_object() -> Outcome {
    let alg = bondal();
    let m = thin(&alg);
    let ext = ext_dims(&alg, &m, &m, 2);
    ensure!(ext == vec![1, 0, 0], "self Ext {ext:?}");
    let (code, doc) = run_cli(&["exceptional", "data/bondal.quiver", "data/bondal_P.rep"]);
    ensure!(
        code == EXIT_OK && doc["result"]["verdict"] == "exceptional",
        "cli verdict {}",
        doc["result"]["verdict"]
    );
    Ok(())
}

fn c4_gram() -> Outcome {
    let alg = bondal();
    let g = gram_matrix_simples(&alg).gram;
    let expected_g = ints(&[[1, -2, 2], [0, 1, -2], [0, 0, 1]]);
    ensure!(g.matrix() == expected_g.as_slice(), "G = {:?}", g.matrix());
    let d: Vec<Vec<BigInt>> = projective_classes(&cartan_matrix(&alg).matrix)
        .into_iter()
        .map(|c| c.0)
        .collect();
    ensure!(d == ints(&[[1, 2, 2], [0, 1, 2], [0, 0, 1]]), "D = {d:?}");
    for i in 0..3 {
        for j in 0..3 {
            let s: BigInt = (0..3).map(|k| &d[i][k] * &expected_g[k][j]).sum();
            ensure!(
                s == BigInt::from(i64::from(i == j)),
                "(D G)[{i}][{j}] = {s}"
            );
        }
    }
    let mut r = rng(4);
    for n in 0..20 {
        let m = random_representation(&alg, &random_dims(3, 3, &mut r), &mut r).unwrap();
        let e = random_representation(&alg, &random_dims(3, 3, &mut r), &mut r).unwrap();
        let by_ext = euler_char(&alg, &m, &e);
        let by_form = chi(&class_of(&m), &class_of(&e), &g).unwrap();
        ensure!(
            by_ext == by_form,
            "pair {n}: resolution {by_ext}, pairing {by_form}"
        );
    }
    Ok(())
}

fn c5_nonextendable() -> Outcome {
    let g = GramForm::bondal();
    let v = KClass::from_i64(&[1, 1, 1]);
    let bi =
        orthogonal_lattice(std::slice::from_ref(&v), &g, Side::Bi).map_err(|e| e.to_string())?;
    ensure!(bi.len() == 2, "bi-orthogonal rank {}", bi.len());
    let r = g.restrict(&bi);
    let expected = vec![
        vec![BigInt::zero(), -BigInt::one()],
        vec![BigInt::one(), BigInt::zero()],
    ];
    ensure!(r == expected, "restricted Gram {r:?}");
    for i in 0..2 {
        for j in 0..2 {
            ensure!((&r[i][j] + &r[j][i]).is_zero(), "symmetrization nonzero");
        }
    }
    ensure!(
        enumerate_exceptional_classes(&bi, &g, 100).is_empty(),
        "box at 100 is not empty"
    );
    let report = certify_nonextendable(&v, &g, 100, 16).map_err(|e| e.to_string())?;
    ensure!(
        report.verdict == Verdict::NumericallyNonextendable,
        "verdict {:?}",
        report.verdict
    );
    for cert in [&report.left, &report.right] {
        ensure!(
            cert.proof == CertificateKind::ZeroForm,
            "{:?} certificate is {:?}",
            cert.side,
            cert.proof
        );
        check_certificate(cert, g.matrix())?;
        ensure!(
            enumerate_exceptional_classes(&cert.basis, &g, 100).is_empty(),
            "box on {:?} side",
            cert.side
        );
    }
    ensure!(
        report.left_box.searched && report.left_box.found == 0,
        "left box"
    );
    ensure!(
        report.right_box.searched && report.right_box.found == 0,
        "right box"
    );
    Ok(())
}

fn c6_jh_report() -> Outcome {
    let (code, doc) = run_cli(&["certify-jh", "data/bondal.quiver"]);
    ensure!(code == EXIT_OK, "exit {code}");
    let verdict = &doc["result"]["verdict"];
    ensure!(
        verdict["status"] == "violation",
        "status {}",
        verdict["status"]
    );
    ensure!(
        verdict["sequence_lengths"] == serde_json::json!(["3", "1"]),
        "lengths {}",
        verdict["sequence_lengths"]
    );
    let det: i64 = doc["result"]["full_sequence"]["determinant"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    ensure!(det.abs() == 1, "determinant {det}");
    // the full sequence is independently exceptional
    let g = GramForm::bondal();
    let classes: Vec<KClass> = doc["result"]["full_sequence"]["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            KClass(
                c.as_array()
                    .unwrap()
                    .iter()
                    .map(|x| x.as_str().unwrap().parse().unwrap())
                    .collect(),
            )
        })
        .collect();
    ExceptionalSequence::new(classes, g).map_err(|e| e.to_string())?;
    Ok(())
}

fn pairing(m: &[Vec<BigInt>], v: &KClass, w: &KClass) -> BigInt {
    let mut s = BigInt::zero();
    for (i, a) in v.coords().iter().enumerate() {
        for (j, b) in w.coords().iter().enumerate() {
            s += a * &m[i][j] * b;
        }
    }
    s
}

fn exceptional_pair(g: &GramForm, v: &KClass, w: &KClass) -> bool {
    let m = g.matrix();
    pairing(m, v, v).is_one() && pairing(m, w, w).is_one() && pairing(m, w, v).is_zero()
}

fn c7_mutations() -> Outcome {
    let mut r = rng(7);
    for case in 0..50 {
        let n = 2 + case % 4;
        let g = random_unitriangular_gram(n, 3, &mut r);
        let len = r.gen_range(0..6);
        let seq = random_exceptional_sequence(&g, len, &mut r);
        let i = r.gen_range(0..n - 1);
        let (v, w) = (&seq.classes()[i], &seq.classes()[i + 1]);
        ensure!(exceptional_pair(&g, v, w), "case {case}: input pair");
        let l = mutate_left(v, w, &g).map_err(|e| e.to_string())?;
        let rr = mutate_right(v, w, &g).map_err(|e| e.to_string())?;
        ensure!(
            exceptional_pair(&g, &l.0, &l.1),
            "case {case}: left mutation"
        );
        ensure!(
            exceptional_pair(&g, &rr.0, &rr.1),
            "case {case}: right mutation"
        );
        ensure!(
            mutate_right(&l.0, &l.1, &g).unwrap() == (v.clone(), w.clone()),
            "case {case}: right after left"
        );
        ensure!(
            mutate_left(&rr.0, &rr.1, &g).unwrap() == (v.clone(), w.clone()),
            "case {case}: left after right"
        );
        if n >= 3 {
            let k = r.gen_range(1..n as i64 - 1);
            let a = seq.apply_word(&[k, k + 1, k]).map_err(|e| e.to_string())?;
            let b = seq
                .apply_word(&[k + 1, k, k + 1])
                .map_err(|e| e.to_string())?;
            ensure!(
                a.classes() == b.classes(),
                "case {case}: braid relation at {k}"
            );
        }
    }
    Ok(())
}

fn c8_negative_control() -> Outcome {
    let (code, doc) = run_cli(&["certify-jh", "data/a2.quiver", "--scan-bound", "10"]);
    ensure!(code == EXIT_NOT_VERIFIED, "exit {code}");
    let res = &doc["result"];
    ensure!(
        res["verdict"]["status"] == "no_violation_witnessed",
        "verdict {}",
        res["verdict"]
    );
    ensure!(
        res["scan"]["searched"] == true && res["scan"]["all_extend"] == true,
        "scan {}",
        res["scan"]
    );
    let reported: Vec<Vec<i64>> = res["scan"]["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            c["class"]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_str().unwrap().parse().unwrap())
                .collect()
        })
        .collect();
    // brute force on chi = [[1,-1],[0,1]]
    let chi = |v: (i64, i64), w: (i64, i64)| v.0 * w.0 - v.0 * w.1 + v.1 * w.1;
    let mut brute = Vec::new();
    for a in -10..=10 {
        for b in -10..=10 {
            if chi((a, b), (a, b)) != 1 {
                continue;
            }
            brute.push(vec![a, b]);
            let extends = (-10..=10)
                .flat_map(|x| (-10..=10).map(move |y| (x, y)))
                .any(|w| chi(w, w) == 1 && (chi(w, (a, b)) == 0 || chi((a, b), w) == 0));
            ensure!(extends, "({a},{b}) does not extend");
        }
    }
    ensure!(
        reported == brute,
        "scanned {reported:?}, brute force {brute:?}"
    );
    let point = run_cli(&["certify-jh", "data/point.quiver"]);
    ensure!(
        point.1["result"]["verdict"]["status"] == "no_violation_witnessed",
        "one-vertex quiver"
    );
    Ok(())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("algebra reconstruction", c1_algebra),
        ("Hom algebra of the projective collection", c2_hom_algebra),
        ("exceptionality of the thin object", c3_thin_object),
        ("Gram pipeline", c4_gram),
        ("numerical nonextendability certificate", c5_nonextendable),
        ("Jordan-Hoelder violation report", c6_jh_report),
        ("mutation laws", c7_mutations),
        ("A_2 negative control", c8_negative_control),
    ];
    let mut failed = Vec::new();
    let total = Instant::now();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        match &outcome {
            Ok(()) => println!(
                "criterion {}: PASS  {name} ({:.2}s)",
                i + 1,
                took.as_secs_f64()
            ),
            Err(why) => println!("criterion {}: FAIL  {name}: {why}", i + 1),
        }
        if outcome.is_err() {
            failed.push(i + 1);
        }
        if took > Duration::from_secs(5) {
            println!("criterion {}: note  took longer than 5s", i + 1);
        }
    }
    println!(
        "acceptance: {} of {} passed in {:.2}s",
        8 - failed.len(),
        8,
        total.elapsed().as_secs_f64()
    );
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
