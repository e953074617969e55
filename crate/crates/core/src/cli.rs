//! Command-line front end.
//!
//! Every subcommand prints one report, as JSON (default) or indented text.
//! Exit status: 0 verified, 1 not verified, 2 input error.

use std::ffi::OsString;
use std::path::{Path as FsPath, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::homalg::{
    cartan_matrix, euler_char, ext_dims, global_dimension, gram_matrix_simples,
    projective_dimension_bound, GlobalDimension,
};
use crate::ktheory::{
    class_of, is_numerical_exceptional_sequence, projective_classes,
    semiorthogonal_projective_order, spans_full_lattice, ExceptionalSequence, KClass,
};
use crate::linalg::Int;
use crate::quiver::{parse_quiver_spec, Algebra, BoundQuiver, BONDAL_SPEC};
use crate::report::{to_json, to_text, to_value};
use crate::repr::{hom_dim, parse_representation, projective_rep, Representation};
use crate::sample;
use crate::search::check::{certificate_from_json, check_certificate, find_certificates};
use crate::search::{certify_jh_violation, certify_nonextendable, Candidate, JhOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_VERIFIED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "boundquiver",
    version,
    about = "Exact Hom/Ext, Euler forms, mutations and nonextendability certificates for bound quiver algebras"
)]
pub struct Cli {
    /// Box bound B for coefficient searches.
    #[arg(short = 'B', long, default_value_t = 100, global = true)]
    pub bound: u64,
    /// Largest modulus tried for residue certificates.
    #[arg(short = 'M', long = "modulus-cap", default_value_t = 16, global = true)]
    pub modulus_cap: u64,
    #[arg(
        long,
        value_enum,
        env = "BOUNDQUIVER_FORMAT",
        default_value = "json",
        global = true
    )]
    pub format: Format,
    /// Seed for the randomized `laws` suite.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a quiver spec and print the normal-path basis.
    Check { quiver: PathBuf },
    /// Cartan matrix, Gram matrix of the Euler form and projective classes.
    Gram { quiver: PathBuf },
    /// Ext table between two representation files.
    Ext { m: PathBuf, n: PathBuf },
    /// End and self-Ext of a representation.
    Exceptional { quiver: PathBuf, rep: PathBuf },
    /// Apply a braid word to an exceptional sequence of classes.
    Mutate {
        quiver: PathBuf,
        /// Classes separated by `;`, coordinates by `,`: `0,0,1;0,1,2;1,2,2`.
        #[arg(long)]
        classes: String,
        /// Signed 1-based generators, applied left to right: `1 -2 1`.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        word: String,
    },
    /// Certify that a class extends to no longer exceptional sequence.
    CertifyNonext {
        quiver: PathBuf,
        #[arg(allow_hyphen_values = true)]
        class: String,
    },
    /// Report two maximal exceptional sequences of different lengths.
    CertifyJh {
        quiver: PathBuf,
        /// Additional candidate representation files.
        #[arg(long = "candidate")]
        candidates: Vec<PathBuf>,
        /// Box bound for the extension scan when no violation is found.
        #[arg(long, default_value_t = 10)]
        scan_bound: u64,
    },
    /// Replay every certificate in a JSON report.
    VerifyCert { quiver: PathBuf, report: PathBuf },
    /// Seeded randomized checks of the Euler pairing and the braid relations.
    Laws {
        quiver: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

/// Exit code plus the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Clone, Serialize)]
struct InputRecord {
    path: String,
    sha256: String,
}

struct Context {
    inputs: Vec<InputRecord>,
}

impl Context {
    fn record(&mut self, path: String, bytes: &[u8]) {
        let rec = InputRecord {
            path,
            sha256: sha256_hex(bytes),
        };
        if !self
            .inputs
            .iter()
            .any(|r| r.path == rec.path && r.sha256 == rec.sha256)
        {
            self.inputs.push(rec);
        }
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

fn read_input(ctx: &mut Context, path: &FsPath) -> Result<String, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    ctx.record(path.display().to_string(), text.as_bytes());
    Ok(text)
}

fn located(path: &FsPath, e: Error) -> Error {
    match e {
        Error::Io { .. } => e,
        other => Error::Io {
            path: path.display().to_string(),
            message: other.to_string(),
        },
    }
}

/// A spec file, or the built-in Bondal spec when `path` is `bondal` and no such file exists.
fn load_quiver(ctx: &mut Context, path: &FsPath) -> Result<BoundQuiver, Error> {
    if !path.exists() && path.as_os_str() == "bondal" {
        ctx.record("bondal (built-in)".into(), BONDAL_SPEC.as_bytes());
        return Ok(BoundQuiver::bondal());
    }
    let text = read_input(ctx, path)?;
    parse_quiver_spec(&text).map_err(|e| located(path, e))
}

fn load_rep(ctx: &mut Context, alg: &Algebra, path: &FsPath) -> Result<Representation, Error> {
    let text = read_input(ctx, path)?;
    let file = parse_representation(&text).map_err(|e| located(path, e))?;
    file.build(alg).map_err(|e| located(path, e))
}

/// Resolves the quiver named in a representation file's header, relative to that file.
fn load_rep_with_quiver(
    ctx: &mut Context,
    path: &FsPath,
) -> Result<(BoundQuiver, Representation), Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let file = parse_representation(&text).map_err(|e| located(path, e))?;
    let qpath = path
        .parent()
        .unwrap_or(FsPath::new(""))
        .join(&file.quiver_ref);
    let bq = if !qpath.exists() && file.quiver_ref == "bondal" {
        load_quiver(ctx, FsPath::new("bondal"))?
    } else {
        load_quiver(ctx, &qpath)?
    };
    let alg = Algebra::new(bq.clone());
    let rep = load_rep(ctx, &alg, path)?;
    Ok((bq, rep))
}

fn parse_class(text: &str, n: usize) -> Result<KClass, Error> {
    let c = KClass::parse(text).map_err(|m| Error::Syntax {
        line: 1,
        column: 1,
        message: m,
    })?;
    if c.rank() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            actual: c.rank(),
        });
    }
    Ok(c)
}

fn parse_word(text: &str) -> Result<Vec<i64>, Error> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i64>().map_err(|_| Error::Syntax {
                line: 1,
                column: 1,
                message: format!("invalid generator `{t}`"),
            })
        })
        .collect()
}

fn gldim_string(d: GlobalDimension) -> String {
    match d {
        GlobalDimension::Exact(d) => d.to_string(),
        GlobalDimension::AtLeast(d) => format!(">= {d}"),
    }
}

fn ext_top(alg: &Algebra) -> usize {
    match global_dimension(alg, projective_dimension_bound(alg)) {
        GlobalDimension::Exact(d) => d.max(1),
        GlobalDimension::AtLeast(d) => d,
    }
}

fn int_rows(m: &[Vec<Int>]) -> Value {
    to_value(
        &m.iter()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    )
}

struct Done {
    verified: bool,
    summary: String,
    result: Value,
}

fn cmd_check(ctx: &mut Context, quiver: &FsPath) -> Result<Done, Error> {
    let bq = load_quiver(ctx, quiver)?;
    let alg = Algebra::new(bq);
    let q = alg.quiver();
    let mut basis = Vec::new();
    for s in 0..q.vertex_count() {
        for t in 0..q.vertex_count() {
            let paths = alg.basis().normal_paths(s, t);
            if !paths.is_empty() {
                basis.push(json!({
                    "source": q.vertex_name(s),
                    "target": q.vertex_name(t),
                    "paths": paths.iter().map(|p| q.display_path(p)).collect::<Vec<_>>(),
                }));
            }
        }
    }
    let gldim = global_dimension(&alg, projective_dimension_bound(&alg));
    let result = json!({
        "name": q.name(),
        "vertices": q.vertices(),
        "arrows": q.arrows().iter().map(|a| json!({"name": a.name, "source": q.vertex_name(a.source), "target": q.vertex_name(a.target)})).collect::<Vec<_>>(),
        "relations": alg.bound_quiver().relations.iter().map(|r| r.display(q)).collect::<Vec<_>>(),
        "dimension": alg.dimension(),
        "basis": basis,
        "global_dimension": gldim_string(gldim),
        "relations_minimal": alg.relations_are_minimal(),
    });
    Ok(Done {
        verified: true,
        summary: format!("algebra of dimension {}", alg.dimension()),
        result: to_value(&result),
    })
}

fn cmd_gram(ctx: &mut Context, quiver: &FsPath) -> Result<Done, Error> {
    let alg = Algebra::new(load_quiver(ctx, quiver)?);
    let q = alg.quiver();
    let cartan = cartan_matrix(&alg);
    let gc = gram_matrix_simples(&alg);
    let g = gc.gram.matrix();
    let n = g.len();
    let d: Vec<Vec<Int>> = cartan
        .matrix
        .iter()
        .map(|r| r.iter().map(|&x| Int::from(x)).collect())
        .collect();
    let dg: Vec<Vec<Int>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &d[i][k] * &g[k][j]).sum())
                .collect()
        })
        .collect();
    let identity = (0..n).all(|i| {
        (0..n).all(|j| {
            if i == j {
                dg[i][j].is_one()
            } else {
                dg[i][j].is_zero()
            }
        })
    });
    let classes = projective_classes(&cartan.matrix);
    let ordered = semiorthogonal_projective_order(&classes, q.topological_order());
    let order_names: Vec<String> = q
        .topological_order()
        .iter()
        .rev()
        .map(|&v| format!("P_{}", q.vertex_name(v)))
        .collect();
    let exceptional = is_numerical_exceptional_sequence(&ordered, &gc.gram);
    let result = json!({
        "vertices": q.vertices(),
        "cartan": cartan.matrix,
        "gram": int_rows(g),
        "gram_route": gc.route,
        "cartan_times_gram_is_identity": identity,
        "gram_unitriangular": gc.gram.is_unitriangular(),
        "projective_classes": classes,
        "semiorthogonal_order": order_names,
        "semiorthogonal_classes": ordered,
        "projectives_exceptional": exceptional,
        "projectives_unimodular": spans_full_lattice(&ordered),
    });
    let rows: Vec<String> = g
        .iter()
        .map(|r| {
            format!(
                "[{}]",
                r.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            )
        })
        .collect();
    Ok(Done {
        verified: identity && exceptional,
        summary: format!("G = [{}]", rows.join(",")),
        result: to_value(&result),
    })
}

fn ext_table(alg: &Algebra, m: &Representation, n: &Representation) -> Value {
    let dims = ext_dims(alg, m, n, ext_top(alg));
    let (cm, cn) = (class_of(m), class_of(n));
    let chi_classes = gram_matrix_simples(alg)
        .gram
        .chi(&cm, &cn)
        .expect("same lattice");
    let euler = euler_char(alg, m, n);
    to_value(&json!({
        "class_m": cm,
        "class_n": cn,
        "ext_dims": dims,
        "euler_characteristic": euler.to_string(),
        "chi_of_classes": chi_classes.to_string(),
        "pairing_agrees": euler == chi_classes,
    }))
}

fn cmd_ext(ctx: &mut Context, m: &FsPath, n: &FsPath) -> Result<Done, Error> {
    let (bq, rm) = load_rep_with_quiver(ctx, m)?;
    let (bq2, rn) = load_rep_with_quiver(ctx, n)?;
    if bq.quiver.arrows() != bq2.quiver.arrows()
        || bq.relations != bq2.relations
        || bq.quiver.vertex_count() != bq2.quiver.vertex_count()
    {
        return Err(Error::QuiverMismatch);
    }
    let alg = Algebra::new(bq);
    let result = ext_table(&alg, &rm, &rn);
    let agrees = result["pairing_agrees"] == Value::Bool(true);
    Ok(Done {
        verified: agrees,
        summary: "Ext table".into(),
        result,
    })
}

fn cmd_exceptional(ctx: &mut Context, quiver: &FsPath, rep: &FsPath) -> Result<Done, Error> {
    let alg = Algebra::new(load_quiver(ctx, quiver)?);
    let m = load_rep(ctx, &alg, rep)?;
    let dims = ext_dims(&alg, &m, &m, ext_top(&alg));
    let exceptional = dims[0] == 1 && dims[1..].iter().all(|&d| d == 0);
    let verdict = if exceptional {
        "exceptional"
    } else {
        "not exceptional"
    };
    let result = json!({
        "class": class_of(&m),
        "end_dim": dims[0],
        "higher_ext": dims[1..].to_vec(),
        "verdict": verdict,
    });
    Ok(Done {
        verified: exceptional,
        summary: verdict.into(),
        result: to_value(&result),
    })
}

fn cmd_mutate(
    ctx: &mut Context,
    quiver: &FsPath,
    classes: &str,
    word: &str,
) -> Result<Done, Error> {
    let alg = Algebra::new(load_quiver(ctx, quiver)?);
    let g = gram_matrix_simples(&alg).gram;
    let n = g.rank();
    let input: Vec<KClass> = classes
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_class(s, n))
        .collect::<Result<_, _>>()?;
    let word = parse_word(word)?;
    let seq = match ExceptionalSequence::new(input.clone(), g.clone()) {
        Ok(s) => s,
        Err(e) => {
            return Ok(Done {
                verified: false,
                summary: e.to_string(),
                result: to_value(&json!({"input": input, "error": e.to_string()})),
            })
        }
    };
    let mut steps = Vec::new();
    let mut cur = seq.clone();
    for &s in &word {
        cur = cur.apply_word(&[s])?;
        steps.push(json!({"generator": s, "classes": cur.classes()}));
    }
    let det = |s: &ExceptionalSequence| {
        s.determinant()
            .map_or(Value::Null, |d| Value::String(d.to_string()))
    };
    let result = json!({
        "input": seq.classes(),
        "word": word,
        "steps": steps,
        "output": cur.classes(),
        "output_exceptional": is_numerical_exceptional_sequence(cur.classes(), &g),
        "determinant_before": det(&seq),
        "determinant_after": det(&cur),
    });
    Ok(Done {
        verified: true,
        summary: format!("{} generators applied", word.len()),
        result: to_value(&result),
    })
}

fn cmd_certify_nonext(
    ctx: &mut Context,
    quiver: &FsPath,
    class: &str,
    bound: u64,
    cap: u64,
) -> Result<Done, Error> {
    let alg = Algebra::new(load_quiver(ctx, quiver)?);
    let gc = gram_matrix_simples(&alg);
    let v = parse_class(class, gc.gram.rank())?;
    let report = match certify_nonextendable(&v, &gc.gram, bound, cap) {
        Ok(r) => r,
        Err(e @ Error::NotExceptional(_)) => {
            return Ok(Done {
                verified: false,
                summary: e.to_string(),
                result: to_value(&json!({"class": v, "error": e.to_string()})),
            })
        }
        Err(e) => return Err(e),
    };
    let summary = match &report.verdict {
        crate::search::Verdict::NumericallyNonextendable => {
            format!("{v} is numerically nonextendable")
        }
        crate::search::Verdict::NoExtensionFoundUpTo { bound } => {
            format!("no extension of {v} found up to bound {bound} (bounded evidence only)")
        }
        crate::search::Verdict::Extendable { witness, .. } => format!("{v} extends by {witness}"),
    };
    let mut result = to_value(&report);
    result["gram"] = int_rows(gc.gram.matrix());
    Ok(Done {
        verified: report.is_certified(),
        summary,
        result,
    })
}

fn cmd_certify_jh(
    ctx: &mut Context,
    quiver: &FsPath,
    candidates: &[PathBuf],
    opts: JhOptions,
) -> Result<Done, Error> {
    let alg = Algebra::new(load_quiver(ctx, quiver)?);
    let mut extra = Vec::new();
    for path in candidates {
        let rep = load_rep(ctx, &alg, path)?;
        let name = path.file_stem().map_or_else(
            || path.display().to_string(),
            |s| s.to_string_lossy().into_owned(),
        );
        extra.push(Candidate { name, rep });
    }
    let report = certify_jh_violation(&alg, &extra, &opts)?;
    let summary = match &report.verdict {
        crate::search::JhVerdict::Violation { sequence_lengths, .. } => format!(
            "Jordan-Hoelder property fails: maximal numerical exceptional sequences of lengths {} and {}",
            sequence_lengths[0], sequence_lengths[1]
        ),
        crate::search::JhVerdict::NoViolationWitnessed { reason } => format!("no violation witnessed: {reason}"),
    };
    Ok(Done {
        verified: report.is_violation(),
        summary,
        result: to_value(&report),
    })
}

fn cmd_verify_cert(ctx: &mut Context, quiver: &FsPath, report: &FsPath) -> Result<Done, Error> {
    let alg = Algebra::new(load_quiver(ctx, quiver)?);
    let g = gram_matrix_simples(&alg).gram;
    let text = read_input(ctx, report)?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Error::Io {
        path: report.display().to_string(),
        message: e.to_string(),
    })?;
    let mut results = Vec::new();
    let mut all = true;
    for c in find_certificates(&doc) {
        let outcome = certificate_from_json(c)
            .and_then(|cert| check_certificate(&cert, g.matrix()).map(|()| cert));
        match outcome {
            Ok(cert) => results.push(json!({"class": cert.class, "side": cert.side, "kind": to_value(&cert.proof)["kind"], "accepted": true})),
            Err(reason) => {
                all = false;
                results.push(json!({"side": c["side"], "accepted": false, "reason": reason}));
            }
        }
    }
    let verified = all && !results.is_empty();
    let summary = if results.is_empty() {
        "no certificates found".to_string()
    } else {
        format!("{} certificates checked", results.len())
    };
    Ok(Done {
        verified,
        summary,
        result: to_value(&json!({"certificates": results, "all_accepted": verified})),
    })
}

fn cmd_laws(ctx: &mut Context, quiver: &FsPath, samples: usize, seed: u64) -> Result<Done, Error> {
    let alg = Algebra::new(load_quiver(ctx, quiver)?);
    let g = gram_matrix_simples(&alg).gram;
    let n = g.rank();
    let mut rng = sample::rng(seed);
    let mut failures = Vec::new();
    let mut pairs_checked = 0;
    if alg.bound_quiver().is_monomial() {
        for i in 0..samples {
            let dm = sample::random_dims(n, 2, &mut rng);
            let dn = sample::random_dims(n, 2, &mut rng);
            let m = sample::random_representation(&alg, &dm, &mut rng)?;
            let nn = sample::random_representation(&alg, &dn, &mut rng)?;
            if euler_char(&alg, &m, &nn) != g.chi(&class_of(&m), &class_of(&nn))? {
                failures.push(format!("euler pairing, sample {i}"));
            }
            for v in 0..n {
                if hom_dim(&alg, &projective_rep(&alg, v)?, &m) != m.dim(v) {
                    failures.push(format!("yoneda at vertex {v}, sample {i}"));
                }
            }
            pairs_checked += 1;
        }
    }
    let mut braid_checked = 0;
    if n >= 3 {
        let simples: Vec<KClass> = alg
            .quiver()
            .topological_order()
            .iter()
            .map(|&i| KClass::basis_vector(n, i))
            .collect();
        if is_numerical_exceptional_sequence(&simples, &g) {
            let base = ExceptionalSequence::new(simples, g.clone())?;
            use rand::Rng;
            for i in 0..samples {
                let word: Vec<i64> = (0..4)
                    .map(|_| rng.gen_range(1..n as i64) * if rng.gen_bool(0.5) { 1 } else { -1 })
                    .collect();
                let s = base.apply_word(&word)?;
                for k in 1..(n as i64 - 1) {
                    if s.apply_word(&[k, k + 1, k])? != s.apply_word(&[k + 1, k, k + 1])?
                        || s.apply_word(&[k, -k])? != s
                    {
                        failures.push(format!("braid relation at {k}, sample {i}"));
                    }
                }
                braid_checked += 1;
            }
        }
    }
    let result = json!({
        "seed": seed,
        "euler_pairs_checked": pairs_checked,
        "braid_sequences_checked": braid_checked,
        "failures": failures,
    });
    Ok(Done {
        verified: failures.is_empty(),
        summary: format!("{} failures", failures.len()),
        result: to_value(&result),
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Gram { .. } => "gram",
        Command::Ext { .. } => "ext",
        Command::Exceptional { .. } => "exceptional",
        Command::Mutate { .. } => "mutate",
        Command::CertifyNonext { .. } => "certify-nonext",
        Command::CertifyJh { .. } => "certify-jh",
        Command::VerifyCert { .. } => "verify-cert",
        Command::Laws { .. } => "laws",
    }
}

pub fn run(cli: &Cli) -> Outcome {
    if cli.bound < 1 || cli.modulus_cap < 2 {
        return Outcome {
            code: EXIT_INPUT_ERROR,
            stdout: String::new(),
            stderr: "error: need --bound >= 1 and --modulus-cap >= 2\n".into(),
        };
    }
    let mut ctx = Context { inputs: Vec::new() };
    let mut params = json!({"bound": cli.bound, "modulus_cap": cli.modulus_cap, "seed": cli.seed});
    let done = match &cli.command {
        Command::Check { quiver } => cmd_check(&mut ctx, quiver),
        Command::Gram { quiver } => cmd_gram(&mut ctx, quiver),
        Command::Ext { m, n } => cmd_ext(&mut ctx, m, n),
        Command::Exceptional { quiver, rep } => cmd_exceptional(&mut ctx, quiver, rep),
        Command::Mutate {
            quiver,
            classes,
            word,
        } => cmd_mutate(&mut ctx, quiver, classes, word),
        Command::CertifyNonext { quiver, class } => {
            cmd_certify_nonext(&mut ctx, quiver, class, cli.bound, cli.modulus_cap)
        }
        Command::CertifyJh {
            quiver,
            candidates,
            scan_bound,
        } => {
            params["scan_bound"] = json!(scan_bound);
            let opts = JhOptions {
                bound: cli.bound,
                modulus_cap: cli.modulus_cap,
                scan_bound: (*scan_bound).max(1),
            };
            cmd_certify_jh(&mut ctx, quiver, candidates, opts)
        }
        Command::VerifyCert { quiver, report } => cmd_verify_cert(&mut ctx, quiver, report),
        Command::Laws { quiver, samples } => {
            params["samples"] = json!(samples);
            cmd_laws(&mut ctx, quiver, *samples, cli.seed)
        }
    };
    let done = match done {
        Ok(d) => d,
        Err(e) => {
            return Outcome {
                code: EXIT_INPUT_ERROR,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    let envelope = to_value(&json!({
        "tool": {"name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION")},
        "command": command_name(&cli.command),
        "inputs": ctx.inputs,
        "params": params,
        "status": if done.verified { "ok" } else { "not_verified" },
        "summary": done.summary,
        "result": done.result,
    }));
    let stdout = match cli.format {
        Format::Json => to_json(&envelope),
        Format::Text => format!(
            "{}: {}\n\n{}",
            envelope["status"].as_str().unwrap_or_default(),
            done.summary,
            to_text(&envelope)
        ),
    };
    let code = if done.verified {
        EXIT_OK
    } else {
        EXIT_NOT_VERIFIED
    };
    let stderr = if done.verified {
        String::new()
    } else {
        format!("not verified: {}\n", done.summary)
    };
    Outcome {
        code,
        stdout,
        stderr,
    }
}

/// Parses arguments and runs; usage errors map to exit code 2.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INPUT_ERROR
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}
