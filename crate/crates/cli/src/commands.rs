use std::fmt::Write as _;
use std::fs;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use padiccf_core::cf::{
    audit_identities, convergents, decompose, evaluate, expand_with_retry, parse_sequence, validate_quotients,
    ConvergentTable, Termination,
};
use padiccf_core::criteria::{lemma_a2_check, subspace_product, tail_quadratic, theorem_a_margin, theorem_b_check};
use padiccf_core::growth::{golden_bound_check, growth_csv, liouville_scan, loglog_statistic};
use padiccf_core::ridout::{
    count_bound_for, enumerate_solutions, gap_law_check, ridout_params, BoundVariant, InequalityVariant,
    MinimalPolynomial,
};
use padiccf_core::structure::{
    detect_repetitions, growth_statistic, growth_statistic_value, palindromic_prefixes, verify_matrix_symmetry,
    PalindromeReport,
};
use padiccf_core::{
    parse_rational, Branch, CriterionReport, Error, Evaluator, PadicContext, PadicValue, Rational, Result,
    SurdElement,
};
use serde_json::{json, Map, Value};

use crate::output::{csv, plain, to_value, Outcome, Status};
use crate::{BoundArgs, CheckKind, EnumerateArgs, ExpandArgs, LiouvilleArgs, SourceArgs};

/// A rational literal, or a surd such as `sqrt(6)` or `(-1/10 + 1/10*sqrt(101))`.
pub fn parse_value(text: &str, branch: Branch) -> Result<PadicValue> {
    if text.contains("sqrt") {
        Ok(SurdElement::parse(text, branch)?.into())
    } else {
        Ok(PadicValue::Rational(parse_rational(text)?))
    }
}

/// Quotients `b_0, b_1, ...` with the value they came from.
struct Source {
    ctx: PadicContext,
    value: PadicValue,
    quotients: Vec<Rational>,
    termination: Option<Termination>,
    warnings: Vec<String>,
}

impl Source {
    fn status(&self) -> Status {
        match self.termination {
            Some(Termination::PrecisionExhausted { .. }) => Status::PrecisionExhausted,
            _ => Status::Ok,
        }
    }

    fn describe(&self) -> Value {
        json!({
            "p": self.ctx.p(),
            "mode": self.ctx.mode(),
            "precision": self.ctx.precision(),
            "value": self.value,
            "length": self.quotients.len(),
            "termination": self.termination,
        })
    }

    fn table(&self) -> ConvergentTable {
        convergents(&self.quotients, self.ctx.p())
    }

    fn evaluator(&self) -> Result<Evaluator> {
        Evaluator::for_value(&self.value, &self.ctx)
    }

    /// `b_1, b_2, ...`
    fn tail(&self) -> &[Rational] {
        self.quotients.get(1..).unwrap_or(&[])
    }

    fn finish(self, outcome: Outcome) -> Outcome {
        let status = self.status();
        outcome.with_status(status).with_warnings(self.warnings)
    }
}

fn context(p: u64, mode: padiccf_core::Mode, max_terms: usize, precision: Option<usize>) -> Result<PadicContext> {
    Ok(PadicContext::new(p, mode)?.with_precision(precision.unwrap_or(16 * max_terms.max(1))))
}

fn expand_value(x: PadicValue, ctx: &PadicContext, max_terms: usize) -> Result<Source> {
    let (expansion, warnings) = expand_with_retry(&x, ctx, max_terms)?;
    Ok(Source {
        ctx: expansion.context,
        value: x,
        quotients: expansion.partial_quotients,
        termination: Some(expansion.termination),
        warnings,
    })
}

fn load(args: &SourceArgs) -> Result<Source> {
    let ctx = context(args.p, args.mode, args.max_terms, args.precision)?;
    if let Some(text) = &args.value {
        return expand_value(parse_value(text, args.branch)?, &ctx, args.max_terms);
    }
    let path = args.sequence.as_ref().expect("clap requires one input source");
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let quotients = parse_sequence(&text)?;
    validate_quotients(&quotients, &ctx)?;
    Ok(Source {
        ctx,
        value: PadicValue::Rational(evaluate(&quotients)?),
        quotients,
        termination: None,
        warnings: Vec::new(),
    })
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

pub fn expand(args: &ExpandArgs) -> Result<Outcome> {
    let ctx = context(args.p, args.mode, args.max_terms, args.precision)?;
    let source = expand_value(parse_value(&args.value, args.branch)?, &ctx, args.max_terms)?;
    let quotients = strings(&source.quotients);
    let results = json!({
        "p": source.ctx.p(),
        "mode": source.ctx.mode(),
        "precision": source.ctx.precision(),
        "value": source.value,
        "quotients": quotients,
        "termination": source.termination,
    });
    let table = csv("index,quotient", quotients.iter().enumerate().map(|(i, q)| [i.to_string(), q.clone()]));
    let text = format!(
        "{} in Q_{} ({})\n[{}]\ntermination: {}\n",
        source.value,
        source.ctx.p(),
        source.ctx.mode(),
        quotients.join(", "),
        plain(&to_value(&source.termination)),
    );
    Ok(source.finish(Outcome::new(results, table, text)))
}

pub fn convergent_table(args: &SourceArgs) -> Result<Outcome> {
    let source = load(args)?;
    let table = source.table();
    let audit = audit_identities(&table);
    let p = table.p;
    let decompositions: Vec<Value> = table.pairs.iter().map(|c| to_value(&decompose(c, p))).collect();
    let rows = table.pairs.iter().map(|c| {
        [
            c.index.to_string(),
            table.quotients[c.index].to_string(),
            c.a.to_string(),
            c.b.to_string(),
            plain(&to_value(&c.vp_a)),
            plain(&to_value(&c.vp_b)),
        ]
    });
    let csv_out = csv("i,b,A,B,vpA,vpB", rows);
    let mut text = String::new();
    for c in &table.pairs {
        writeln!(text, "{:>4}  b = {:<12} A/B = {}/{}  vp(B) = {}", c.index, table.quotients[c.index].to_string(), c.a, c.b, plain(&to_value(&c.vp_b))).unwrap();
    }
    writeln!(text, "identities: {}", if audit.is_clean() { "clean" } else { "VIOLATED" }).unwrap();
    let results = json!({
        "source": source.describe(),
        "table": table,
        "audit": audit,
        "decompositions": decompositions,
    });
    let status = Status::from_holds(audit.is_clean());
    Ok(source.finish(Outcome::new(results, csv_out, text).with_status(status)))
}

pub fn analyze(args: &SourceArgs, min_lambda: usize) -> Result<Outcome> {
    let source = load(args)?;
    let palindromes = palindromic_prefixes(source.tail());
    let blocks = detect_repetitions(source.tail(), min_lambda);
    let statistic = growth_statistic(&blocks);
    let mut warnings = Vec::new();
    let symmetry = if source.quotients.first().is_some_and(|b0| b0.is_zero()) {
        Some(verify_matrix_symmetry(&source.table(), &palindromes))
    } else {
        warnings.push("symmetry check skipped: it applies to expansions with b_0 = 0".to_string());
        None
    };
    let holds = symmetry.as_ref().is_none_or(|s| s.iter().all(|c| c.holds));
    let rows = blocks.iter().map(|b| {
        let s = if b.n >= 2 { growth_statistic_value(b.n as f64, b.lambda as f64).to_string() } else { String::new() };
        [b.n.to_string(), b.k.to_string(), b.lambda.to_string(), s]
    });
    let csv_out = csv("n,k,lambda,s", rows);
    let mut text = format!("palindromic prefixes: {:?}\n", palindromes.lengths);
    for b in &blocks {
        writeln!(text, "block n = {}, k = {}, lambda = {}", b.n, b.k, b.lambda).unwrap();
    }
    if let Some(slope) = statistic.trend_slope {
        writeln!(text, "trend slope: {slope}").unwrap();
    }
    let results = json!({
        "source": source.describe(),
        "palindromes": palindromes.lengths,
        "symmetry": symmetry,
        "blocks": blocks,
        "statistic": statistic,
    });
    let outcome = Outcome::new(results, csv_out, text).with_status(Status::from_holds(holds)).with_warnings(warnings);
    Ok(source.finish(outcome))
}

/// Header from the union of ledger keys, in order of first appearance.
fn ledger_csv(ledger: &[Value]) -> String {
    let mut header: Vec<String> = Vec::new();
    for entry in ledger {
        if let Value::Object(map) = entry {
            for key in map.keys() {
                if !header.contains(key) {
                    header.push(key.clone());
                }
            }
        }
    }
    let rows = ledger.iter().map(|entry| {
        header.iter().map(|key| match entry.get(key) {
            Some(v @ (Value::Object(_) | Value::Array(_))) => v.to_string(),
            Some(v) => plain(v),
            None => String::new(),
        }).collect::<Vec<_>>()
    });
    csv(&header.join(","), rows)
}

fn criterion_outcome(source: Option<&Source>, report: CriterionReport) -> Outcome {
    let text = format!(
        "{}: {}\n{}\n",
        report.criterion,
        if report.holds_on_range { "holds on range" } else { "VIOLATED" },
        report.summary
    );
    let csv_out = ledger_csv(&report.ledger);
    let status = Status::from_holds(report.holds_on_range);
    let mut results = Map::new();
    if let Some(source) = source {
        results.insert("source".into(), source.describe());
    }
    results.insert("report".into(), to_value(&report));
    Outcome::new(Value::Object(results), csv_out, text).with_status(status)
}

fn object_csv(value: &Value) -> String {
    let rows = value.as_object().into_iter().flatten().map(|(k, v)| [k.clone(), plain(v)]);
    csv("field,value", rows)
}

pub fn check(kind: &CheckKind) -> Result<Outcome> {
    match kind {
        CheckKind::Identities(args) => {
            let source = load(args)?;
            let audit = audit_identities(&source.table());
            let holds = audit.is_clean();
            let ledger = vec![
                json!({"identity": "determinant", "failures": audit.determinant}),
                json!({"identity": "vp_b_sum", "failures": audit.vp_b_sum}),
                json!({"identity": "vp_a_sum", "failures": audit.vp_a_sum}),
                json!({"identity": "arch_vs_padic", "failures": audit.arch_vs_padic}),
            ];
            let first = [&audit.determinant, &audit.vp_b_sum, &audit.vp_a_sum, &audit.arch_vs_padic]
                .iter()
                .filter_map(|v| v.first().map(|&i| i as i64))
                .min();
            let summary = format!("checked {} indices; {}", audit.checked, if holds { "all identities hold" } else { "failures listed per identity" });
            let report = CriterionReport::new("identities", first, ledger, summary);
            let outcome = criterion_outcome(Some(&source), report);
            Ok(source.finish(outcome))
        }
        CheckKind::TheoremA { source, i0 } => {
            let source = load(source)?;
            let report = theorem_a_margin(&source.table(), *i0)?;
            let outcome = criterion_outcome(Some(&source), report);
            Ok(source.finish(outcome))
        }
        CheckKind::LemmaA2 { source, indices } => {
            let source = load(source)?;
            let table = source.table();
            let report = if indices.is_empty() {
                palindromic_prefixes(source.tail())
            } else {
                if let Some(&bad) = indices.iter().find(|&&n| n >= table.len()) {
                    return Err(Error::IndexOutOfRange { index: bad, available: table.len() - 1 });
                }
                PalindromeReport { lengths: indices.clone() }
            };
            let report = lemma_a2_check(&source.value, &table, &report, &source.evaluator()?)?;
            let outcome = criterion_outcome(Some(&source), report);
            Ok(source.finish(outcome))
        }
        CheckKind::Subspace { source, n, epsilon } => {
            let source = load(source)?;
            let diagnostic = subspace_product(&source.value, &source.table(), *n, epsilon, &source.evaluator()?)?;
            let value = to_value(&diagnostic);
            let text = format!(
                "n = {}, eps = {}: product below one = {}, log product = {}\n",
                diagnostic.n,
                diagnostic.epsilon,
                diagnostic.product_below_one,
                diagnostic.log_product.map_or("-inf".to_string(), |l| l.to_string())
            );
            let results = json!({"source": source.describe(), "diagnostic": value});
            let outcome = Outcome::new(results, object_csv(&value), text);
            Ok(source.finish(outcome))
        }
        CheckKind::TailQuadratic { source, h, k } => {
            let source = load(source)?;
            let relation = tail_quadratic(&source.quotients, *h, *k, &source.ctx)?;
            let holds = relation.height_holds && relation.eta_residual_zero != Some(false);
            let value = to_value(&relation);
            let text = format!(
                "{} eta^2 + {} eta + {} = 0\nheight {} <= {}: {}\n",
                relation.p_coeff, relation.q_coeff, relation.r_coeff, relation.height, relation.height_bound, relation.height_holds
            );
            let results = json!({"source": source.describe(), "relation": value});
            let outcome = Outcome::new(results, object_csv(&value), text).with_status(Status::from_holds(holds));
            Ok(source.finish(outcome))
        }
        CheckKind::TheoremB { source, c, i0, min_lambda } => {
            let source = load(source)?;
            let blocks = detect_repetitions(source.tail(), *min_lambda);
            let report = theorem_b_check(&source.table(), &blocks, c, *i0);
            let outcome = criterion_outcome(Some(&source), report);
            Ok(source.finish(outcome))
        }
        CheckKind::Golden(args) => {
            let source = load(args)?;
            let report = golden_bound_check(&source.table());
            let outcome = criterion_outcome(Some(&source), report);
            Ok(source.finish(outcome))
        }
    }
}

pub fn ridout_bound(args: &BoundArgs) -> Result<Outcome> {
    let (n, a_bar) = match &args.minpoly {
        Some(text) => {
            let mp = MinimalPolynomial::parse(text)?;
            (mp.degree(), mp.a_bar())
        }
        None => (args.degree.expect("clap requires --degree without --minpoly"), args.abar.clone().unwrap_or_else(BigInt::one)),
    };
    let eps = &args.epsilon;
    let variants: Vec<BoundVariant> = match &args.variant {
        Some(v) => vec![*v],
        None => {
            let all = [BoundVariant::TheoremHalf, BoundVariant::CorollaryFull, BoundVariant::RemarkSingleExp, BoundVariant::ExactKL];
            let admissible: Vec<_> = all.into_iter().filter(|v| eps <= &v.max_epsilon()).collect();
            if admissible.is_empty() { vec![BoundVariant::CorollaryFull] } else { admissible }
        }
    };
    let mut warnings = Vec::new();
    let third = Rational::new(1.into(), 3.into());
    let params = if eps <= &third {
        Some(ridout_params(n, eps, &a_bar)?)
    } else {
        warnings.push(format!("parameters m, delta, k, l need eps <= 1/3 (got {eps})"));
        None
    };
    let bounds = variants.iter().map(|&v| count_bound_for(n, &a_bar, eps, v)).collect::<Result<Vec<_>>>()?;
    let rows = bounds.iter().map(|b| [plain(&to_value(&b.variant)), b.value.log10_int.to_string(), b.value.log10_frac.to_string()]);
    let csv_out = csv("variant,log10_int,log10_frac", rows);
    let mut text = String::new();
    if let Some(p) = &params {
        writeln!(text, "m = {}, log10(1/delta) = {}, k = {}, l = {}", p.m, p.log10_delta_inv_size, p.k, p.l).unwrap();
        writeln!(text, "conditions hold: {}", p.conditions.all()).unwrap();
    }
    for b in &bounds {
        writeln!(text, "{}: {}", plain(&to_value(&b.variant)), b.value).unwrap();
    }
    let results = json!({
        "n": n,
        "a_bar": a_bar.to_string(),
        "epsilon": eps.to_string(),
        "params": params,
        "bounds": bounds,
    });
    let status = Status::from_holds(params.as_ref().is_none_or(|p| p.conditions.all()));
    Ok(Outcome::new(results, csv_out, text).with_status(status).with_warnings(warnings))
}

pub fn ridout_enumerate(args: &EnumerateArgs) -> Result<Outcome> {
    let mp = MinimalPolynomial::parse(&args.minpoly)?;
    let solutions = enumerate_solutions(&mp, args.p, args.branch, &args.epsilon, args.hmax, args.variant)?;
    let gap = gap_law_check(&solutions, &args.epsilon)?;
    // the gap law is a theorem only for the half inequality
    let status = match args.variant {
        InequalityVariant::Half => Status::from_holds(gap.holds_on_range),
        InequalityVariant::Full => Status::Ok,
    };
    let rows = solutions.iter().map(|s| [s.a.to_string(), s.b.to_string(), s.defect_valuation.to_string()]);
    let csv_out = csv("A,B,defect_valuation", rows);
    let mut text = String::new();
    for s in &solutions {
        writeln!(text, "{}/{}  v = {}", s.a, s.b, s.defect_valuation).unwrap();
    }
    writeln!(text, "solutions with B <= {}: {}; gap law: {}", args.hmax, solutions.len(), gap.summary).unwrap();
    let results = json!({
        "minpoly": strings(mp.coefficients()),
        "p": args.p,
        "branch": args.branch,
        "epsilon": args.epsilon.to_string(),
        "hmax": args.hmax,
        "variant": args.variant,
        "count": solutions.len(),
        "solutions": solutions,
        "gap_law": gap,
    });
    Ok(Outcome::new(results, csv_out, text).with_status(status))
}

pub fn liouville(args: &LiouvilleArgs) -> Result<Outcome> {
    let mp = MinimalPolynomial::parse(&args.minpoly)?;
    let report = liouville_scan(&mp, args.p, args.branch, args.hmax)?;
    let mut outcome = criterion_outcome(None, report);
    if let Value::Object(map) = &mut outcome.results {
        map.insert("minpoly".into(), json!(strings(mp.coefficients())));
        map.insert("p".into(), json!(args.p));
        map.insert("branch".into(), json!(args.branch));
        map.insert("hmax".into(), json!(args.hmax));
    }
    Ok(outcome)
}

pub fn growth(args: &SourceArgs) -> Result<Outcome> {
    let source = load(args)?;
    let table = source.table();
    let golden = golden_bound_check(&table);
    let statistic = loglog_statistic(&table);
    let mut text = String::new();
    for e in &statistic.entries {
        writeln!(text, "k = {:>4}  vp(B) = {:>5}  s = {}", e.k, e.vp_b, e.s).unwrap();
    }
    writeln!(text, "golden bound: {}", golden.summary).unwrap();
    let results = json!({
        "source": source.describe(),
        "loglog": statistic,
        "golden": golden,
    });
    let status = Status::from_holds(golden.holds_on_range);
    let outcome = Outcome::new(results, growth_csv(&statistic), text).with_status(status);
    Ok(source.finish(outcome))
}
