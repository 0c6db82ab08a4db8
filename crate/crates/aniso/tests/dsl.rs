use std::path::{Path, PathBuf};

use aniso::dsl::{self, Env, Method, Problem, Query, QueryLine, Report, TestFn};
use aniso_core::multiply::MultInstance;
use aniso_core::{AffineExpr, Anisotropy, Rational, Scale, SpaceDescr, TargetSpace};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

fn corpus_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> =
        std::fs::read_dir(corpus_dir()).unwrap().map(|e| e.unwrap().path()).filter(|p| p.extension().is_some_and(|e| e == "aq")).collect();
    files.sort();
    files
}

fn prelude_env() -> Env {
    let mut env = Env::default();
    dsl::load_prelude(&mut env, dsl::FREE_BOUNDARY_PRELUDE).unwrap();
    env
}

/// Parsed lines of a corpus file and the environment they were parsed in.
fn load(path: &Path) -> (Env, Vec<QueryLine>) {
    let mut env = prelude_env();
    let src = std::fs::read_to_string(path).unwrap();
    let lines = dsl::parse_program(&mut env, &src).unwrap_or_else(|e| panic!("{}: {}", path.display(), e));
    (env, lines.into_iter().map(|(_, q)| q).collect())
}

fn corpus_reports() -> Vec<(PathBuf, Vec<Report>)> {
    corpus_files()
        .into_iter()
        .map(|path| {
            let (_, lines) = load(&path);
            let reports = dsl::run_batch(&lines, false);
            (path, reports)
        })
        .collect()
}

#[test]
fn golden_reports() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut stale = Vec::new();
    for (path, reports) in corpus_reports() {
        let json = serde_json::to_string_pretty(&reports).unwrap() + "\n";
        let golden = path.with_extension("json");
        if update {
            std::fs::write(&golden, &json).unwrap();
            continue;
        }
        match std::fs::read_to_string(&golden) {
            Ok(expected) if expected == json => {}
            _ => stale.push(golden.display().to_string()),
        }
    }
    assert!(stale.is_empty(), "golden files differ (rerun with UPDATE_GOLDEN=1 after review): {:?}", stale);
}

#[test]
fn every_trace_line_has_an_anchor() {
    for (path, reports) in corpus_reports() {
        for r in &reports {
            for t in &r.trace {
                assert!(!t.anchor.is_empty(), "{}: {}: {:?}", path.display(), r.query, t);
            }
            if let Some(e) = &r.error {
                assert!(!e.anchor.is_empty());
            }
            for c in r.params.iter().flat_map(|p| &p.cells) {
                assert!(!c.anchor.is_empty());
            }
        }
    }
}

#[test]
fn not_covered_reports_name_the_failed_condition() {
    let mut seen = 0;
    for (_, reports) in corpus_reports() {
        for r in reports.iter().filter(|r| r.verdict.as_deref() == Some("NOT_COVERED")) {
            let failed = r.failed.as_ref().unwrap_or_else(|| panic!("{}", r.query));
            assert!(!failed.label.is_empty() && !failed.anchor.is_empty());
            if r.kind != "app" {
                let first = r.trace.iter().find(|t| t.status == "FAIL").unwrap();
                assert_eq!(first, failed);
            }
            seen += 1;
        }
    }
    assert!(seen >= 10, "corpus has only {} NOT_COVERED reports", seen);
}

#[test]
fn corpus_round_trips() {
    let mut count = 0;
    for path in corpus_files() {
        let (env, lines) = load(&path);
        for line in lines {
            let text = dsl::format_line(&line);
            assert_eq!(dsl::parse_query(&env, &text).unwrap(), line, "{}", text);
            count += 1;
        }
    }
    assert!(count >= 50, "{}", count);
}

// ---- random grammar samples ----

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn sample_env() -> Env {
    let mut env = prelude_env();
    for line in ["target E: umd, alpha, algebra, unital", "signature E * R -> E", "let D3 = (1,1,1)"] {
        dsl::parse_line(&mut env, line, 1).unwrap();
    }
    env
}

fn domain(rng: &mut ChaCha8Rng) -> (Anisotropy, String) {
    match rng.gen_range(0..4) {
        0 => {
            let n = rng.gen_range(1..=4);
            let a = Anisotropy::isotropic(n);
            let label = a.default_label();
            (a, label)
        }
        1 => {
            let n = rng.gen_range(1..=3);
            let a = Anisotropy::parabolic(n);
            let label = a.default_label();
            (a, label)
        }
        2 => (Anisotropy::parabolic(2), "JxSigma".into()),
        _ => (Anisotropy::new(vec![1, 1, 1], vec![*[1, 2, 3].choose(rng).unwrap(), 1, 2]).unwrap(), "D3".into()),
    }
}

fn rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    let d = *[1, 2, 3, 4, 6].choose(rng).unwrap();
    r(rng.gen_range(lo * d..=hi * d), d)
}

fn space(rng: &mut ChaCha8Rng, env: &Env) -> SpaceDescr {
    let (aniso, label) = domain(rng);
    let scale = *[Scale::B, Scale::H, Scale::W, Scale::L, Scale::C0].choose(rng).unwrap();
    let x = if rng.gen_bool(0.5) { AffineExpr::var() } else { AffineExpr::constant(r(1, rng.gen_range(1..=9))) };
    let s = AffineExpr::new(rational(rng, -1, 3), if rng.gen_bool(0.4) { -rational(rng, 0, 2) } else { Rational::zero() });
    let target = if rng.gen_bool(0.3) { env.target("E").unwrap() } else { TargetSpace::scalar() };
    let sp = match scale {
        Scale::C0 => SpaceDescr::new(Scale::C0, AffineExpr::zero(), AffineExpr::zero(), aniso),
        Scale::L => SpaceDescr::new(Scale::L, AffineExpr::zero(), x, aniso),
        Scale::B => {
            let y = match rng.gen_range(0..3) {
                0 => None,
                1 => Some(Rational::zero()),
                _ => Some(r(1, rng.gen_range(1..=5))),
            };
            SpaceDescr::new(scale, s, x, aniso).with_y(y)
        }
        _ => SpaceDescr::new(scale, s, x, aniso),
    };
    sp.with_target(target).with_domain(&label)
}

fn instance(env: &Env, factors: Vec<SpaceDescr>, target: SpaceDescr) -> MultInstance {
    match env.signature_for(&factors, &target) {
        Some(sig) => MultInstance::with_signature(factors, target, sig).unwrap(),
        None => MultInstance::new(factors, target),
    }
}

fn decision_query(rng: &mut ChaCha8Rng, env: &Env) -> Query {
    let spaces = |k: usize, rng: &mut ChaCha8Rng| (0..k).map(|_| space(rng, env)).collect::<Vec<_>>();
    match rng.gen_range(0..5) {
        0 => {
            let v = spaces(2, rng);
            Query::Embed { src: v[0].clone(), dst: v[1].clone() }
        }
        1 => {
            let m = rng.gen_range(2..=3);
            let mut v = spaces(m + 1, rng);
            let t = v.pop().unwrap();
            Query::Mult(instance(env, v, t))
        }
        2 => {
            let mut v = spaces(3, rng);
            let t = v.pop().unwrap();
            Query::Multiplier { inst: instance(env, v, t), ell: rng.gen_range(1..=2) }
        }
        3 => Query::Algebra(space(rng, env)),
        _ => {
            let mut v = spaces(rng.gen_range(2..=3), rng);
            let t = v.pop().unwrap();
            Query::Nemytskij { args: v, target: t, radius: rational(rng, 1, 3), vanishing: rng.gen_bool(0.5) }
        }
    }
}

fn random_line(rng: &mut ChaCha8Rng, env: &Env) -> QueryLine {
    let query = match rng.gen_range(0..10) {
        0..=3 => decision_query(rng, env),
        4 => Query::SolveP(Box::new(decision_query(rng, env))),
        5 => Query::Index(space(rng, env)),
        6 => {
            let method = match rng.gen_range(0..4) {
                0 => Method::Complex,
                1 => Method::Real(None),
                2 => Method::Real(Some(Rational::zero())),
                _ => Method::Real(Some(r(1, rng.gen_range(1..=6)))),
            };
            Query::Interp { method, theta: r(rng.gen_range(1..=5), 6), a: space(rng, env), b: space(rng, env) }
        }
        7 => {
            let m = rng.gen_range(2..=4);
            let sigma = (0..m).map(|_| rational(rng, 0, 3)).collect();
            let pi = (0..m).map(|_| rational(rng, -1, 1)).collect();
            if rng.gen_bool(0.5) {
                Query::Realize { sigma, pi, rho: rational(rng, 0, 1) }
            } else {
                Query::Minimize { sigma, pi, n: rng.gen_range(0..=6) }
            }
        }
        8 => {
            let k = rng.gen_range(1..=2);
            let func = TestFn {
                widths: (0..k).map(|_| rational(rng, 1, 2).abs() + r(1, 2)).collect(),
                amplitude: rational(rng, -2, 2),
                frequency: rational(rng, 0, 4),
                phase: rational(rng, -1, 1),
                ppw: rng.gen_range(4..=32),
            };
            Query::Seminorm { func, space: space(rng, env) }
        }
        _ => Query::App { problem: if rng.gen_bool(0.5) { Problem::Stefan } else { Problem::Nvs }, n: rng.gen_range(2..=5) },
    };
    let at_p = if !matches!(query, Query::SolveP(_)) && rng.gen_bool(0.3) { Some(r(rng.gen_range(4..=40), 4)) } else { None };
    QueryLine { at_p, query }
}

#[test]
fn random_queries_round_trip() {
    let env = sample_env();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let line = random_line(&mut rng, &env);
        let text = dsl::format_line(&line);
        let back = dsl::parse_query(&env, &text).unwrap_or_else(|e| panic!("{}: {}", text, e));
        assert_eq!(back, line, "{}", text);
        assert_eq!(dsl::format_line(&back), text);
    }
}

#[test]
fn parse_errors_carry_positions() {
    let env = prelude_env();
    let cases = [
        ("W^{1}_p(R^1) -> ?", "syntax"),
        ("index W^{1_p(R^1) ?", "malformed"),
        ("index W^{1/2q}_p(R^1) ?", "malformed"),
        ("index Q^{1}_p(R^1) ?", "alias"),
        ("index W^{1}_p(Gamma) ?", "alias"),
        ("index W^{1}_p(R^1;Banach) ?", "alias"),
        ("index W^{1,(2,1)}_p(R^1) ?", "syntax"),
        ("app heat(n=3) ?", "syntax"),
        ("app stefan(n=1) ?", "syntax"),
        ("L_2(R^1) * ?", "syntax"),
    ];
    for (text, kind) in cases {
        let err = dsl::parse_query(&env, text).expect_err(text);
        let ok = match (kind, &err) {
            ("syntax", dsl::DslError::Syntax { line: 1, col, .. }) => *col >= 1,
            ("malformed", dsl::DslError::MalformedExponent { line: 1, .. }) => true,
            ("alias", dsl::DslError::UnknownAlias { line: 1, .. }) => true,
            _ => false,
        };
        assert!(ok, "{}: {:?}", text, err);
    }
    let mut env = Env::default();
    let err = dsl::parse_program(&mut env, "let D = 2\n\nindex W^{1}_p(D) ?\nindex W^{1}_p(E) ?\n").unwrap_err();
    assert!(matches!(err, dsl::DslError::UnknownAlias { line: 4, col: 15, .. }), "{:?}", err);
}

#[test]
fn batch_preserves_order_and_matches_sequential() {
    let (_, lines) = load(&corpus_dir().join("multiplication.aq"));
    let seq: Vec<Report> = lines.iter().map(dsl::run).collect();
    assert_eq!(dsl::run_batch(&lines, false), seq);
}
