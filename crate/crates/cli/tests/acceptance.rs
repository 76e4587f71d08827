//! End-to-end acceptance criteria; prints one PASS/FAIL line per criterion
//! and exits non-zero when any criterion fails.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};

use num_bigint::BigInt;
use num_traits::Zero;
use padiccf_core::cf::{approx_defect, audit_identities, convergents, evaluate, expand, ConvergentTable, Termination};
use padiccf_core::criteria::{lemma_a2_check, tail_quadratic};
use padiccf_core::growth::golden_bound_check;
use padiccf_core::structure::{palindromic_prefixes, verify_matrix_symmetry};
use padiccf_core::{Branch, Evaluator, Mode, PadicContext, PadicValue, Rational, SurdElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const PRIMES: [u64; 4] = [3, 5, 7, 11];
const ALPHA_101: &str = "(-1/10 + 1/10*sqrt(101))";
const TOLERANCE: f64 = 1e-12;

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict { pass, detail: detail.into() }
    }
}

/// Every expansion produced by the suite, for the criteria quantified over all of them.
#[derive(Default)]
struct Suite {
    tables: Vec<(String, ConvergentTable)>,
}

impl Suite {
    fn add(&mut self, label: String, table: ConvergentTable) {
        self.tables.push((label, table));
    }
}

/// Stdout and exit code of every CLI invocation, keyed by its arguments.
#[derive(Default)]
struct Cli {
    runs: BTreeMap<Vec<String>, (String, i32)>,
}

impl Cli {
    fn exec(args: &[String]) -> (String, i32) {
        let out = Command::new(env!("CARGO_BIN_EXE_padiccf"))
            .args(args)
            .output()
            .expect("the padiccf binary runs");
        (String::from_utf8(out.stdout).expect("utf-8 output"), out.status.code().unwrap_or(-1))
    }

    /// Runs the command and returns its JSON report and exit code.
    fn json(&mut self, args: &[&str]) -> (Value, i32) {
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let (stdout, code) = Self::exec(&args);
        let report = serde_json::from_str(&stdout).unwrap_or(Value::Null);
        self.runs.insert(args, (stdout, code));
        (report, code)
    }
}

fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn symmetric_digit(rng: &mut ChaCha8Rng, p: u64, nonzero: bool) -> i64 {
    let half = (p as i64 - 1) / 2;
    loop {
        let d = rng.gen_range(-half..=half);
        if !nonzero || d != 0 {
            return d;
        }
    }
}

/// A Browkin partial quotient `d_0 + d_1/p + ... + d_j/p^j` with `d_j` nonzero.
fn quotient(rng: &mut ChaCha8Rng, p: u64) -> Rational {
    let depth = rng.gen_range(1..=2u32);
    let mut numer = BigInt::from(symmetric_digit(rng, p, false));
    for i in 0..depth {
        numer = numer * p + symmetric_digit(rng, p, i + 1 == depth);
    }
    Rational::new(numer, BigInt::from(p).pow(depth))
}

fn palindrome(rng: &mut ChaCha8Rng, p: u64, len: usize) -> Vec<Rational> {
    let half: Vec<Rational> = (0..len.div_ceil(2)).map(|_| quotient(rng, p)).collect();
    let mut seq = half.clone();
    seq.extend(half.iter().rev().skip(len % 2).cloned());
    seq
}

fn is_square(n: i64) -> bool {
    n >= 0 && num_integer::Roots::sqrt(&n).pow(2) == n
}

/// `r + sqrt(D)` for the first non-square `D` that is a nonzero square mod `p`.
fn surd_inputs() -> Vec<(u64, SurdElement)> {
    let shifts = [rational(0, 1), rational(1, 2), rational(-1, 3), rational(2, 1), rational(1, 7)];
    let mut out = Vec::new();
    for p in PRIMES {
        let radicands = (2i64..)
            .filter(|&d| !is_square(d) && d % p as i64 != 0 && (1..p as i64).any(|x| (x * x - d).rem_euclid(p as i64) == 0));
        for (d, r) in radicands.zip(shifts.iter()) {
            let z = SurdElement::new(r.clone(), rational(1, 1), d.into(), Branch::PlusRoot).unwrap();
            out.push((p, z));
        }
    }
    out
}

fn round_trip(suite: &mut Suite) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut failures = Vec::new();
    for i in 0..1000 {
        let p = PRIMES[rng.gen_range(0..4)];
        let x = rational(rng.gen_range(-1_000_000..=1_000_000), rng.gen_range(1..=1_000_000));
        let ctx = PadicContext::new(p, Mode::Browkin).unwrap();
        match expand(&PadicValue::Rational(x.clone()), &ctx, 200) {
            Ok(e) if e.termination == Termination::Finite && evaluate(&e.partial_quotients).ok() == Some(x.clone()) => {
                suite.add(format!("rational {x} in Q_{p}"), convergents(&e.partial_quotients, p));
            }
            other => failures.push(format!("#{i} {x} in Q_{p}: {:?}", other.map(|e| e.termination))),
        }
    }
    Verdict::new(
        failures.is_empty(),
        format!("{}/1000 rationals terminate within 200 terms and evaluate exactly{}", 1000 - failures.len(), first(&failures)),
    )
}

fn first(failures: &[String]) -> String {
    failures.first().map_or(String::new(), |f| format!("; first failure: {f}"))
}

fn identities(suite: &Suite) -> Verdict {
    let mut indices = 0;
    let mut failures = Vec::new();
    for (label, table) in &suite.tables {
        let audit = audit_identities(table);
        indices += audit.checked;
        if !audit.is_clean() {
            failures.push(format!("{label}: {audit:?}"));
        }
    }
    Verdict::new(
        failures.is_empty(),
        format!("determinant, v(B), v(A) with b_0 = 0 and |B|<=|B|_p at {indices} indices of {} expansions{}", suite.tables.len(), first(&failures)),
    )
}

fn approximation(suite: &mut Suite) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut inputs: Vec<(u64, Mode, PadicValue)> = (0..100)
        .map(|i| {
            let p = PRIMES[rng.gen_range(0..4)];
            let x = rational(rng.gen_range(-1_000_000..=1_000_000), rng.gen_range(1..=1_000_000));
            let mode = if i % 2 == 0 { Mode::Browkin } else { Mode::Ruban };
            (p, mode, PadicValue::Rational(x))
        })
        .collect();
    inputs.extend(surd_inputs().into_iter().map(|(p, z)| (p, Mode::Browkin, z.into())));
    let mut checked = 0;
    let mut failures = Vec::new();
    for (p, mode, x) in &inputs {
        let ctx = PadicContext::new(*p, *mode).unwrap().with_precision(16 * 40);
        let outcome = expand(x, &ctx, 40).and_then(|e| {
            let table = convergents(&e.partial_quotients, *p);
            let ev = Evaluator::for_value(x, &ctx)?;
            let mut bad = None;
            for pair in &table.pairs {
                let defect = approx_defect(x, pair, &ev)?;
                let bound = -2 * pair.vp_b.finite().unwrap();
                checked += 1;
                if !defect.exceeds(bound) && bad.is_none() {
                    bad = Some(pair.index);
                }
            }
            Ok((e.termination, table, bad))
        });
        match outcome {
            Ok((Termination::PrecisionExhausted { index }, _, _)) => failures.push(format!("{x} in Q_{p}: precision exhausted at {index}")),
            Ok((_, table, None)) => suite.add(format!("{x} in Q_{p} ({mode})"), table),
            Ok((_, _, Some(i))) => failures.push(format!("{x} in Q_{p}: index {i}")),
            Err(e) => failures.push(format!("{x} in Q_{p}: {e}")),
        }
    }
    Verdict::new(
        failures.is_empty(),
        format!("v(alpha - A_i/B_i) > -2 v(B_i) at {checked} indices of 100 rationals and 20 surds{}", first(&failures)),
    )
}

fn palindromes(suite: &mut Suite) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    let mut failures = Vec::new();
    for i in 0..50 {
        let p = PRIMES[rng.gen_range(0..4)];
        let len = rng.gen_range(1..=24);
        let mut seq = vec![Rational::zero()];
        seq.extend(palindrome(&mut rng, p, len));
        let report = palindromic_prefixes(&seq[1..]);
        let table = convergents(&seq, p);
        let checks = verify_matrix_symmetry(&table, &report);
        checked += checks.len();
        if !report.lengths.contains(&len) || checks.iter().any(|c| !c.holds) {
            failures.push(format!("sequence #{i} in Q_{p}"));
        }
        suite.add(format!("palindrome #{i} in Q_{p}"), table);
    }
    Verdict::new(
        failures.is_empty(),
        format!("A_n = B_(n-1) at {checked} palindromic prefixes of 50 sequences{}", first(&failures)),
    )
}

fn lemma_a2(suite: &mut Suite, cli: &mut Cli) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut surds, mut indices, mut attempts) = (0, 0, 0);
    let mut failures = Vec::new();
    while surds < 50 && attempts < 1000 {
        attempts += 1;
        let p = [3, 5, 7][rng.gen_range(0..3)];
        let len = rng.gen_range(1..5);
        let block = palindrome(&mut rng, p, len);
        let mut seq = vec![Rational::zero()];
        while seq.len() < 13 {
            seq.extend(block.iter().cloned());
        }
        let ctx = PadicContext::new(p, Mode::Browkin).unwrap().with_precision(256);
        let Ok(relation) = tail_quadratic(&seq, 1, block.len(), &ctx) else { continue };
        let Some(eta @ PadicValue::Surd(_)) = relation.eta else { continue };
        let table = convergents(&seq, p);
        let report = Evaluator::for_value(&eta, &ctx)
            .and_then(|ev| lemma_a2_check(&eta, &table, &palindromic_prefixes(&seq[1..]), &ev));
        match report {
            Ok(r) if r.holds_on_range => indices += r.ledger.len(),
            Ok(r) => failures.push(format!("{eta} in Q_{p}: {}", r.summary)),
            Err(e) => failures.push(format!("{eta} in Q_{p}: {e}")),
        }
        suite.add(format!("periodic palindrome {eta} in Q_{p}"), table);
        surds += 1;
    }
    let (report, code) = cli.json(&["check", "lemma-a2", "--p", "5", "--value", ALPHA_101, "--max-terms", "12"]);
    let n2 = report["results"]["report"]["ledger"]
        .as_array()
        .and_then(|l| l.iter().find(|e| e["n"] == 2))
        .cloned()
        .unwrap_or(Value::Null);
    let worked = code == 0 && n2["lhs_valuation"] == 4 && n2["rhs_valuation"] == 3 && n2["holds"] == true;
    if !worked {
        failures.push(format!("worked case at n = 2: {n2}"));
    }
    Verdict::new(
        failures.is_empty() && surds == 50,
        format!(
            "{surds} periodic palindromic surds, {indices} indices; alpha_101 at n = 2: |lhs|_5 = 5^-{} < 5^-{}{}",
            n2["lhs_valuation"], n2["rhs_valuation"], first(&failures)
        ),
    )
}

fn ridout_constants(cli: &mut Cli) -> Verdict {
    let (report, code) = cli.json(&["ridout-bound", "--minpoly", "1,0,-6", "--epsilon", "1/3", "--variant", "exact-kl"]);
    let params = &report["results"]["params"];
    let expected = (BigInt::from(3601) << 3601u32).to_string();
    let conditions = &params["conditions"];
    let all = ["delta_below_inverse_m", "ratio_below_two_plus_eps", "sqrt_term_below_m"]
        .iter()
        .all(|c| conditions[c] == true);
    let m_ok = params["m"] == "3601";
    let t_ok = params["log10_delta_inv"].as_str() == Some(expected.as_str());
    Verdict::new(
        code == 0 && m_ok && t_ok && all,
        format!(
            "m = {}, log10(1/delta) = 3601*2^3601 ({} digits) {}, conditions {}",
            plain(&params["m"]),
            expected.len(),
            if t_ok { "exactly" } else { "MISMATCH" },
            if all { "all hold" } else { "FAIL" }
        ),
    )
}

/// Re-checks `B_(i+1)^w > B_i^(w+u)` for consecutive solutions with `B_i >= 2`.
fn gap_pairs(solutions: &[Value], u: u32, w: u32) -> (usize, Option<String>) {
    let bs: Vec<BigInt> = solutions.iter().filter_map(|s| s["b"].as_str()?.parse().ok()).collect();
    let mut checked = 0;
    for pair in bs.windows(2) {
        if pair[0] < BigInt::from(2) {
            continue;
        }
        checked += 1;
        if pair[1].pow(w) <= pair[0].pow(w + u) {
            return (checked, Some(format!("B = {} then {}", pair[0], pair[1])));
        }
    }
    (checked, None)
}

fn gap_law(cli: &mut Cli) -> Verdict {
    let mut details = Vec::new();
    let mut pass = true;
    for (poly, p) in [("1,0,-6", "5"), ("1,0,-7", "3")] {
        for (eps, u, w) in [("1/2", 1, 2), ("2/3", 2, 3)] {
            let (report, code) = cli.json(&[
                "ridout-enumerate", "--minpoly", poly, "--p", p, "--branch", "+", "--epsilon", eps, "--hmax", "10000", "--variant", "half",
            ]);
            let results = &report["results"];
            let solutions = results["solutions"].as_array().cloned().unwrap_or_default();
            let (checked, violation) = gap_pairs(&solutions, u, w);
            let holds = code == 0 && results["gap_law"]["holds_on_range"] == true && violation.is_none() && results.is_object();
            pass &= holds;
            details.push(format!(
                "{poly} p={p} eps={eps}: {} solutions, {checked} pairs{}",
                solutions.len(),
                violation.map_or(String::new(), |v| format!(" VIOLATED at {v}"))
            ));
        }
    }
    Verdict::new(pass, details.join("; "))
}

fn liouville(cli: &mut Cli) -> Verdict {
    let mut details = Vec::new();
    let mut pass = true;
    for (poly, c) in [("1,0,-6", "1/7"), ("1,0,-101", "1/102")] {
        let (report, code) = cli.json(&["liouville", "--minpoly", poly, "--p", "5", "--branch", "+", "--hmax", "500"]);
        let r = &report["results"]["report"];
        let constant = &r["ledger"][0]["constant"]["c"];
        let holds = code == 0 && r["holds_on_range"] == true && r["first_violation"].is_null() && constant == c;
        pass &= holds;
        details.push(format!("{poly}: c = {}, violations {}", plain(constant), if r["holds_on_range"] == true { "none" } else { "found" }));
    }
    Verdict::new(pass, details.join("; "))
}

fn plain(v: &Value) -> String {
    v.as_str().map_or_else(|| v.to_string(), str::to_string)
}

fn golden(suite: &Suite) -> Verdict {
    let mut indices = 0;
    let mut min_margin = i64::MAX;
    let mut failures = Vec::new();
    for (label, table) in &suite.tables {
        let report = golden_bound_check(table);
        for entry in &report.ledger {
            indices += 1;
            if let Some(m) = entry["margin"].as_i64() {
                min_margin = min_margin.min(m);
            }
        }
        if !report.holds_on_range {
            failures.push(format!("{label}: {}", report.summary));
        }
    }
    Verdict::new(
        failures.is_empty(),
        format!("margin -v(B_n) - n >= 0 at {indices} indices of {} expansions, minimum {min_margin}{}", suite.tables.len(), first(&failures)),
    )
}

fn growth(cli: &mut Cli) -> Verdict {
    let (report, code) = cli.json(&["growth", "--p", "5", "--value", ALPHA_101, "--max-terms", "200"]);
    let entries = report["results"]["loglog"]["entries"].as_array().cloned().unwrap_or_default();
    let points: Vec<(usize, f64)> = entries
        .iter()
        .filter_map(|e| Some((e["k"].as_u64()? as usize, e["s"].as_f64()?)))
        .collect();
    let finite = !points.is_empty() && points.len() == entries.len() && points.iter().all(|(_, s)| s.is_finite());
    let s2 = points.iter().find(|(k, _)| *k == 2).map(|&(_, s)| s);
    let above: Vec<(usize, f64)> = match s2 {
        Some(s2) => points.iter().copied().filter(|&(_, s)| s - s2 > TOLERANCE).collect(),
        None => Vec::new(),
    };
    let bounded = s2.is_some() && above.is_empty();
    let rising = points
        .windows(2)
        .find(|w| w[0].0 >= 20 && w[1].1 - w[0].1 > TOLERANCE)
        .map(|w| w[1].0);
    let bound_note = match above.first() {
        None => "bounded by s_2".to_string(),
        Some(&(k, s)) => format!(
            "NOT bounded by s_2 = {:.6}: exceeded at {} indices, first s_{k} = {s:.6}, last k = {}",
            s2.unwrap_or(f64::NAN),
            above.len(),
            above.last().unwrap().0
        ),
    };
    let decrease_note = match rising {
        None => "decreasing for k >= 20".to_string(),
        Some(k) => format!("increases at k = {k}"),
    };
    Verdict::new(
        code == 0 && finite && bounded && rising.is_none(),
        format!("{} finite values; {bound_note}; {decrease_note}", points.len()),
    )
}

fn determinism(cli: &mut Cli) -> Verdict {
    let (report, _) = cli.json(&["expand", "--p", "5", "--mode", "browkin", "--value", "1/3"]);
    let expand_ok = report["results"]["quotients"] == serde_json::json!(["2", "-3/5"]) && report["results"]["termination"] == "finite";
    let mut differing = Vec::new();
    for (args, (stdout, code)) in &cli.runs {
        let (again, code_again) = Cli::exec(args);
        if &again != stdout || code_again != *code {
            differing.push(args.join(" "));
        }
    }
    Verdict::new(
        expand_ok && differing.is_empty(),
        format!(
            "{} commands rerun, {} differ{}",
            cli.runs.len(),
            differing.len(),
            differing.first().map_or(String::new(), |d| format!("; first: {d}"))
        ),
    )
}

fn main() -> ExitCode {
    let mut suite = Suite::default();
    let mut cli = Cli::default();
    let mut verdicts: Vec<(u32, &str, Verdict)> = vec![
        (1, "round-trip", round_trip(&mut suite)),
        (3, "approximation", approximation(&mut suite)),
        (4, "palindrome symmetry", palindromes(&mut suite)),
        (5, "squared approximation at palindromes", lemma_a2(&mut suite, &mut cli)),
        (6, "quantitative constants", ridout_constants(&mut cli)),
        (7, "gap law", gap_law(&mut cli)),
        (8, "liouville bound", liouville(&mut cli)),
        (10, "growth statistic", growth(&mut cli)),
    ];
    verdicts.push((2, "identities", identities(&suite)));
    verdicts.push((9, "golden bound", golden(&suite)));
    verdicts.push((11, "determinism", determinism(&mut cli)));
    verdicts.sort_by_key(|(id, _, _)| *id);
    let mut failed = 0;
    for (id, title, v) in &verdicts {
        if !v.pass {
            failed += 1;
        }
        println!("{} criterion {id:>2} ({title}): {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("{} of {} criteria pass", verdicts.len() - failed, verdicts.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
