//! Command-line front end: parse and print object files, run the tensor /
//! Φ / group-ring / twisted-product constructions, evaluate words and
//! Clifford expressions, compute Smith normal forms, and run the named
//! verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quadpair::abelian::{smith_normal_form, IntMatrix};
use quadpair::error::QpError;
use quadpair::object_format::{parse_sections, parse_word, print_square_group, ObjectFile};
use quadpair::qpm::QpmTensor;
use quadpair::signgroup::{strict_monoidal_check, twisted_product, GroupRing};
use quadpair::sqgroup::SgTensor;
use quadpair::suites::{run_suite, SuiteParams, SUITES};

#[derive(Parser)]
#[command(name = "quadpair", version, about = "exact calculator for square groups, quadratic pair modules, sign groups and pin groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct VerifyArgs {
    /// one of: abelian, axioms, prop-3-7, monoidal, tracks, sign,
    /// group-ring, hg, clifford-K, clifford-L, all
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 8)]
    max_total: usize,
    /// write the JSON report here
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate an object file, printing a summary
    Parse { path: PathBuf },
    /// Canonically re-emit an object file (parse ∘ print is stable)
    Print { path: PathBuf },
    /// Tensor two named square groups or qpms from an object file
    Tensor {
        path: PathBuf,
        #[arg(long, default_value = "sg")]
        kind: String,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply the reflection functor Φ to a named square-group morphism
    Phi {
        path: PathBuf,
        #[arg(long)]
        morphism: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the group-ring quadratic pair algebra of a named sign group
    Groupring {
        path: PathBuf,
        #[arg(long)]
        sign: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Twisted product of two named sign groups
    Twisted {
        path: PathBuf,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        /// also check Prop "A is strict monoidal" on this pair
        #[arg(long, default_value_t = false)]
        check_monoidal: bool,
    },
    /// Evaluate a word in a named group from an object file
    Eval {
        path: PathBuf,
        /// name of a squaregroup (e-group) or qpm in the file
        #[arg(long)]
        group: String,
        /// which level of a qpm: 0 or 1
        #[arg(long, default_value_t = 0)]
        level: u8,
        word: String,
    },
    /// Exact verification suites
    Verify(VerifyArgs),
    /// Smith normal form of an integer matrix literal like [[2,4],[6,8]]
    Snf { matrix: String },
    /// Positive Clifford algebra and Õ(2) subcommands
    Clifford {
        #[command(subcommand)]
        cmd: CliffordCmd,
    },
    /// Hg-functional subcommands
    Hg {
        #[command(subcommand)]
        cmd: HgCmd,
    },
}

#[derive(Subcommand)]
enum CliffordCmd {
    /// Replay the Õ(2) chain computation (K(ν,ν) = 1)
    #[command(name = "verify-K")]
    VerifyK,
    /// Replay the shuffle-conjugation computation (L_{n,m}(ν,ν) = 0)
    #[command(name = "verify-L")]
    VerifyL {
        #[arg(long, default_value_t = 8)]
        max_total: usize,
    },
    /// Evaluate an exact C₊(n) expression, e.g. "(1/2)(e2-e1)(e3-e2)e3"
    Eval {
        expr: String,
        #[arg(long)]
        dim: Option<usize>,
        /// also print q(u) and det when the element is pin
        #[arg(long, default_value_t = false)]
        q: bool,
    },
}

#[derive(Subcommand)]
enum HgCmd {
    /// Check the six Hg laws on seeded random morphism pairs
    Check {
        /// K or L
        #[arg(long, default_value = "K")]
        functional: String,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn size_guard() -> usize {
    std::env::var("QUADPAIR_SIZE_GUARD")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(48)
}

fn read(path: &PathBuf) -> Result<String, QpError> {
    Ok(std::fs::read_to_string(path)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), QpError> {
    match out {
        Some(p) => {
            std::fs::write(p, text)?;
            println!("wrote {}", p.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn run() -> Result<bool, QpError> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Parse { path } => {
            let src = read(&path)?;
            let obj = ObjectFile::parse(&src)?;
            print!("{}", obj.summary());
            Ok(true)
        }
        Cmd::Print { path } => {
            let src = read(&path)?;
            let secs = parse_sections(&src)?;
            let obj = ObjectFile::parse(&src)?;
            print!("{}", obj.print(&secs));
            Ok(true)
        }
        Cmd::Tensor { path, kind, lhs, rhs, out } => {
            let src = read(&path)?;
            let obj = ObjectFile::parse(&src)?;
            match kind.as_str() {
                "sg" => {
                    let a = obj
                        .square_groups
                        .get(&lhs)
                        .ok_or_else(|| QpError::Semantic(format!("unknown square group '{lhs}'")))?;
                    let b = obj
                        .square_groups
                        .get(&rhs)
                        .ok_or_else(|| QpError::Semantic(format!("unknown square group '{rhs}'")))?;
                    if a.ngens() + b.ngens() > size_guard() {
                        return Err(QpError::SizeGuard(format!(
                            "combined generator count exceeds {}",
                            size_guard()
                        )));
                    }
                    let t = SgTensor::new(a, b)?;
                    t.result.check_axioms()?;
                    let text = print_square_group(&format!("{lhs}_tensor_{rhs}"), &t.result, "TBASE");
                    emit(&out, &text)?;
                }
                "qpm" => {
                    let a = obj
                        .qpms
                        .get(&lhs)
                        .ok_or_else(|| QpError::Semantic(format!("unknown qpm '{lhs}'")))?;
                    let b = obj
                        .qpms
                        .get(&rhs)
                        .ok_or_else(|| QpError::Semantic(format!("unknown qpm '{rhs}'")))?;
                    if a.c0.ngens() * b.c0.ngens() > size_guard() * 4 {
                        return Err(QpError::SizeGuard("tensor too large".into()));
                    }
                    let t = QpmTensor::new(a, b)?;
                    t.result.check_axioms()?;
                    let text = format!(
                        "# C⊙D for C = {lhs}, D = {rhs}\n# C0 gens {}, C1 gens {}, ee gens {} (υζ and υξ are the block injectors)\n",
                        t.result.c0.ngens(),
                        t.result.c1.ngens(),
                        t.result.cee.ngens
                    );
                    emit(&out, &text)?;
                }
                other => {
                    return Err(QpError::Semantic(format!("tensor kind must be sg or qpm, got '{other}'")))
                }
            }
            Ok(true)
        }
        Cmd::Phi { path, morphism, out } => {
            let src = read(&path)?;
            let obj = ObjectFile::parse(&src)?;
            let (sname, tname, m) = obj
                .sg_morphisms
                .get(&morphism)
                .ok_or_else(|| QpError::Semantic(format!("unknown morphism '{morphism}'")))?;
            let d = &obj.square_groups[sname];
            let c = &obj.square_groups[tname];
            let (q, _) = quadpair::qpm::phi_of_morphism(d, c, &m.fe, &m.fee);
            q.check_axioms()?;
            let text = format!(
                "# Φ({sname} -> {tname}): C0 gens {}, C1 gens {}, ee gens {}; 0-good: {}\n",
                q.c0.ngens(),
                q.c1.ngens(),
                q.cee.ngens,
                q.is_0good()
            );
            emit(&out, &text)?;
            Ok(true)
        }
        Cmd::Groupring { path, sign, out } => {
            let src = read(&path)?;
            let obj = ObjectFile::parse(&src)?;
            let sg = obj
                .sign_groups
                .get(&sign)
                .ok_or_else(|| QpError::Semantic(format!("unknown sign group '{sign}'")))?;
            if 2 * sg.g.order() > size_guard() {
                return Err(QpError::SizeGuard("sign group exceeds the size guard".into()));
            }
            let ring = GroupRing::new(sg)?;
            ring.check()?;
            let text = format!(
                "# A({sign}): 0-level Z_nil[G+] on {} generators, 1-level on {} generators; relations verified\n",
                ring.qpm.c0.ngens(),
                ring.qpm.c1.ngens()
            );
            emit(&out, &text)?;
            Ok(true)
        }
        Cmd::Twisted { path, lhs, rhs, check_monoidal } => {
            let src = read(&path)?;
            let obj = ObjectFile::parse(&src)?;
            let a = obj
                .sign_groups
                .get(&lhs)
                .ok_or_else(|| QpError::Semantic(format!("unknown sign group '{lhs}'")))?;
            let b = obj
                .sign_groups
                .get(&rhs)
                .ok_or_else(|| QpError::Semantic(format!("unknown sign group '{rhs}'")))?;
            let t = twisted_product(a, b)?;
            println!(
                "{lhs} ×̃ {rhs}: order {} = 2·{}·{} over G×L of order {}",
                t.sign.gv.order(),
                a.g.order(),
                b.g.order(),
                t.sign.g.order()
            );
            if check_monoidal {
                strict_monoidal_check(a, b, size_guard())?;
                println!("A({lhs})⊙A({rhs}) ≅ A({lhs}×̃{rhs}) verified");
            }
            Ok(true)
        }
        Cmd::Eval { path, group, level, word } => {
            let src = read(&path)?;
            let obj = ObjectFile::parse(&src)?;
            let w = parse_word(&word)?;
            if let Some(sg) = obj.square_groups.get(&group) {
                let x = w.eval(&sg.e.basis)?;
                println!("{}", sg.e.normal_form(&x).display());
            } else if let Some(q) = obj.qpms.get(&group) {
                let g = if level == 0 { &q.c0 } else { &q.c1 };
                let x = w.eval(&g.basis)?;
                println!("{}", g.normal_form(&x).display());
            } else {
                return Err(QpError::Semantic(format!("unknown group '{group}'")));
            }
            Ok(true)
        }
        Cmd::Verify(args) => {
            let params = SuiteParams {
                seed: args.seed,
                samples: args.samples,
                max_total: args.max_total,
                size_guard: size_guard(),
            };
            if !SUITES.contains(&args.suite.as_str()) {
                return Err(QpError::UnknownSuite(args.suite));
            }
            let report = run_suite(&args.suite, &params)?;
            print!("{}", report.render_text());
            if let Some(p) = args.json {
                std::fs::write(&p, report.render_json())?;
                println!("json report written to {}", p.display());
            }
            Ok(report.pass)
        }
        Cmd::Snf { matrix } => {
            let m = parse_matrix(&matrix)?;
            let (u, s, v) = smith_normal_form(&m);
            println!("U = {u:?}");
            println!("S = {s:?}");
            println!("V = {v:?}");
            Ok(true)
        }
        Cmd::Clifford { cmd } => match cmd {
            CliffordCmd::VerifyK => {
                let mut pass = true;
                for line in quadpair::clifford::verify_lemma_k() {
                    println!("[{}] {}: {}", if line.pass { "pass" } else { "FAIL" }, line.name, line.detail);
                    pass &= line.pass;
                }
                Ok(pass)
            }
            CliffordCmd::VerifyL { max_total } => {
                let mut pass = true;
                for line in quadpair::clifford::verify_identities_abc(8) {
                    println!("[{}] {}: {}", if line.pass { "pass" } else { "FAIL" }, line.name, line.detail);
                    pass &= line.pass;
                }
                for n in 1..max_total {
                    for m in 1..=max_total - n {
                        for line in quadpair::clifford::verify_lemma_l(n, m)? {
                            println!(
                                "[{}] {}: {}",
                                if line.pass { "pass" } else { "FAIL" },
                                line.name,
                                line.detail
                            );
                            pass &= line.pass;
                        }
                    }
                }
                Ok(pass)
            }
            CliffordCmd::Eval { expr, dim, q } => {
                let el = quadpair::clifford::parse_clifford_expr(&expr, dim)?;
                println!("{}", el.display());
                if q {
                    match quadpair::clifford::q_of_clifford(&el) {
                        Ok(mat) => {
                            for i in 0..mat.n {
                                let row: Vec<String> =
                                    (0..mat.n).map(|j| mat.get(i, j).display()).collect();
                                println!("q row {i}: [{}]", row.join(", "));
                            }
                            println!("det = {}", mat.det().display());
                        }
                        Err(e) => println!("q undefined: {e}"),
                    }
                }
                Ok(true)
            }
        },
        Cmd::Hg { cmd } => match cmd {
            HgCmd::Check { functional, samples, seed } => {
                use rand::SeedableRng;
                let chi = match functional.as_str() {
                    "K" => quadpair::hg::HgFunctional::KClosed,
                    "L" => quadpair::hg::HgFunctional::LClosed { n: 1, m: 2 },
                    other => {
                        return Err(QpError::Semantic(format!(
                            "functional must be K or L, got '{other}'"
                        )))
                    }
                };
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let mut pass = true;
                for line in quadpair::hg::check_hg_axioms(&chi, samples, &mut rng) {
                    println!(
                        "[{}] {}: {}",
                        if line.pass { "pass" } else { "FAIL" },
                        line.law,
                        line.detail
                    );
                    pass &= line.pass;
                }
                println!("seed {seed}, samples {samples}");
                Ok(pass)
            }
        },
    }
}

fn parse_matrix(src: &str) -> Result<IntMatrix, QpError> {
    let t = src.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| QpError::Syntax { line: 1, col: 1, msg: "matrix must be [[..],[..]]".into() })?;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        if rest.starts_with(',') {
            rest = rest[1..].trim_start();
        }
        let from = rest
            .strip_prefix('[')
            .ok_or_else(|| QpError::Syntax { line: 1, col: 1, msg: "expected '['".into() })?;
        let end = from
            .find(']')
            .ok_or_else(|| QpError::Syntax { line: 1, col: 1, msg: "expected ']'".into() })?;
        let body = &from[..end];
        let row: Result<Vec<i64>, _> = body
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<i64>())
            .collect();
        rows.push(row.map_err(|_| QpError::Syntax { line: 1, col: 1, msg: "bad integer".into() })?);
        rest = from[end + 1..].trim_start();
    }
    if rows.is_empty() {
        return Err(QpError::Syntax { line: 1, col: 1, msg: "empty matrix".into() });
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(QpError::Syntax { line: 1, col: 1, msg: "ragged matrix".into() });
    }
    Ok(IntMatrix::from_rows(rows))
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
