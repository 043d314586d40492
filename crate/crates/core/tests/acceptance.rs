//! Acceptance run: every criterion at full scale, exact arithmetic, one
//! PASS/FAIL line each. Exits nonzero when any criterion fails.
//!
//! Scale: fields GF(2), GF(5), GF(97), Q; n = 2..5; dim <= 12; 200 seeded
//! trials per property. `DIFFN_ACCEPT_TRIALS` overrides the trial count.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::Instant;

use diffn::category::{jordan_block, ses_inj, ses_proj, DiffMorphism, DiffObject, ShortExactSeq};
use diffn::harness::verify::brute_force_hom_k;
use diffn::harness::{run_verify, GenConfig, Selection};
use diffn::homotopy::{hom_k, les};
use diffn::{FieldSpec, Matrix};

const SEED: u64 = 20_251_018;
const MAX_DIM: usize = 12;

struct Criterion {
    id: usize,
    title: &'static str,
    properties: &'static [&'static str],
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, title: "adjunction round trips and naturality", properties: &["core.adjunction_phi", "core.adjunction_psi"] },
    Criterion { id: 2, title: "canonical short exact sequences", properties: &["core.ses_canonical"] },
    Criterion { id: 3, title: "idempotents on T(X) split", properties: &["core.split_idempotent"] },
    Criterion { id: 4, title: "projective = injective = free", properties: &["core.projective"] },
    Criterion { id: 5, title: "null-homotopic = factors through T", properties: &["homotopy.factorization"] },
    Criterion { id: 6, title: "cones and shifts", properties: &["homotopy.cone", "homotopy.shift_duality"] },
    Criterion { id: 7, title: "homology is homotopy invariant", properties: &["homotopy.homology_invariance"] },
    Criterion { id: 8, title: "six-term exact hexagon", properties: &["homotopy.les"] },
    Criterion { id: 9, title: "quasi-isomorphism characterizations agree", properties: &["derived.qiso_agree"] },
    Criterion { id: 10, title: "homotopy sections of quasi-isomorphisms", properties: &["derived.homotopy_section"] },
    Criterion { id: 11, title: "theta and the closed form for Hom_K(J_i, J_j)", properties: &["derived.theta", "derived.theta_closed_form"] },
    Criterion { id: 12, title: "zero-object criteria agree", properties: &["derived.zero_detection"] },
];

#[derive(Default)]
struct Tally {
    trials: u64,
    failures: Vec<String>,
}

impl Tally {
    fn fail(&mut self, msg: String) {
        self.failures.push(msg);
    }
}

fn fields() -> Vec<FieldSpec> {
    let mut v: Vec<FieldSpec> = [2, 5, 97].iter().map(|&p| FieldSpec::prime(p).unwrap()).collect();
    v.push(FieldSpec::rationals());
    v
}

fn m(field: FieldSpec, rows: &[Vec<i64>]) -> Matrix {
    Matrix::from_i64_rows(field, rows)
}

/// `[top; bottom]` and `(left, right)` for square blocks.
fn vcat(a: &Matrix, b: &Matrix) -> Matrix {
    a.vstack(b)
}

fn hcat(a: &Matrix, b: &Matrix) -> Matrix {
    a.hstack(b)
}

/// At n = 2 the canonical sequences must be exactly
/// `i' = [-eps; 1], p' = (1, eps), eps_X' = -eps` and
/// `i'' = [eps; 1], p'' = (1, -eps), eps_X'' = -eps`.
fn displayed_forms(tally: &mut Tally) {
    for field in fields() {
        let objects = [
            jordan_block(field, 2, 2).unwrap(),
            DiffObject::new(2, m(field, &[vec![0, 0, 0], vec![1, 0, 0], vec![0, 0, 0]])).unwrap(),
            DiffObject::new(2, m(field, &[vec![1, -1], vec![1, -1]])).unwrap(),
        ];
        for x in &objects {
            tally.trials += 1;
            let d = x.dim();
            let (id, eps) = (Matrix::identity(field, d), x.eps().clone());
            let sp = ses_proj(x).unwrap();
            let si = ses_inj(x).unwrap();
            let ok = *sp.i().matrix() == vcat(&eps.neg(), &id)
                && *sp.p().matrix() == hcat(&id, &eps)
                && *sp.a().eps() == eps.neg()
                && *si.i().matrix() == vcat(&eps, &id)
                && *si.p().matrix() == hcat(&id, &eps.neg())
                && *si.c().eps() == eps.neg();
            if !ok {
                tally.fail(format!("n = 2 displayed forms differ over {field} for eps = {eps:?}"));
            }
        }
    }
}

/// `0 -> J_1 -> J_2 -> J_1 -> 0` at n = 2: both connecting maps are isomorphisms.
fn connecting_iso(tally: &mut Tally) {
    for field in fields() {
        tally.trials += 1;
        let j1 = jordan_block(field, 1, 2).unwrap();
        let j2 = jordan_block(field, 2, 2).unwrap();
        let i = DiffMorphism::new(&j1, &j2, m(field, &[vec![0], vec![1]])).unwrap();
        let p = DiffMorphism::new(&j2, &j1, m(field, &[vec![1, 0]])).unwrap();
        let seq = ShortExactSeq::new(i, p).unwrap();
        let w = les(&seq, 1).unwrap();
        let ok = w.is_exact()
            && w.dims == [1, 0, 1, 1, 0, 1]
            && w.maps[2].is_invertible()
            && w.maps[5].is_invertible();
        if !ok {
            tally.fail(format!("J1 -> J2 -> J1 over {field}: dims {:?}, exact {:?}", w.dims, w.exact));
        }
    }
}

/// `dim Hom_K(J_i, J_j) = min(i, j) - max(i + j - n, 0)` for every pair of
/// blocks with n <= 5, checked against a rank-only oracle first.
fn closed_form_all_pairs(tally: &mut Tally) {
    for field in fields() {
        for n in 2..=5 {
            for i in 1..=n {
                for j in 1..=n {
                    tally.trials += 1;
                    let x = jordan_block(field, i, n).unwrap();
                    let y = jordan_block(field, j, n).unwrap();
                    let closed = i.min(j) - (i + j).saturating_sub(n);
                    let brute = brute_force_hom_k(&x, &y);
                    let computed = hom_k(&x, &y).unwrap().dim();
                    if brute != closed || computed != closed {
                        tally.fail(format!(
                            "{field} n = {n}, J_{i} -> J_{j}: closed {closed}, brute {brute}, hom_k {computed}"
                        ));
                    }
                }
            }
        }
    }
}

/// Two runs of the binary with the same arguments must print the same bytes.
fn determinism(tally: &mut Tally, trials: u64) {
    let args = ["verify", "--seed", "7", "--field", "5", "--n", "3", "--max-dim", "12"];
    let trials = trials.to_string();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_diffn"))
            .args(args)
            .args(["--trials", &trials])
            .output()
            .expect("spawn diffn")
    };
    let (a, b) = (run(), run());
    tally.trials += 2;
    if !a.status.success() || !b.status.success() {
        tally.fail(format!("verify exited with {:?} and {:?}", a.status.code(), b.status.code()));
    }
    if a.stdout != b.stdout {
        tally.fail("stdout differs between two identical runs".into());
    }
    if a.stdout.is_empty() {
        tally.fail("empty report".into());
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let trials: u64 = std::env::var("DIFFN_ACCEPT_TRIALS").ok().and_then(|s| s.parse().ok()).unwrap_or(200);
    let mut tallies: BTreeMap<usize, Tally> = BTreeMap::new();
    let only: Vec<String> =
        CRITERIA.iter().flat_map(|c| c.properties.iter().map(|p| p.to_string())).collect();

    for field in fields() {
        for n in 2..=5 {
            let cfg = GenConfig::new(SEED, field, n, MAX_DIM, trials).unwrap();
            let report = match run_verify(&cfg, &Selection { only: only.clone(), trial: None }) {
                Ok(r) => r,
                Err(e) => {
                    for c in CRITERIA {
                        tallies.entry(c.id).or_default().fail(format!("{field} n = {n}: {e}"));
                    }
                    continue;
                }
            };
            for c in CRITERIA {
                let tally = tallies.entry(c.id).or_default();
                for rec in report.records.iter().filter(|r| c.properties.contains(&r.name)) {
                    tally.trials += rec.trials;
                    for f in &rec.failures {
                        tally.fail(format!("{} {field} n = {n} trial {}: {}", rec.name, f.trial, f.reason));
                    }
                }
            }
        }
    }
    displayed_forms(tallies.entry(2).or_default());
    connecting_iso(tallies.entry(8).or_default());
    closed_form_all_pairs(tallies.entry(11).or_default());
    let mut det = Tally::default();
    determinism(&mut det, trials);

    let mut failed = 0;
    let mut line = |id: usize, title: &str, t: &Tally| {
        let verdict = if t.failures.is_empty() && t.trials > 0 { "PASS" } else { "FAIL" };
        println!("{verdict} AC{id:<2} {title}: checks={} failures={}", t.trials, t.failures.len());
        for f in t.failures.iter().take(5) {
            println!("       {f}");
        }
        if verdict == "FAIL" {
            failed += 1;
        }
    };
    for c in CRITERIA {
        line(c.id, c.title, &tallies[&c.id]);
    }
    line(13, "verify reports are byte-identical across runs", &det);
    println!("acceptance: {} of 13 criteria passed in {:.1}s", 13 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
