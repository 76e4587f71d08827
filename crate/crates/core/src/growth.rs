//! Liouville lower bound, growth of `|B_n|_p`, and the log-log statistic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::cf::{decompose, ConvergentTable};
use crate::context::{Mode, PadicContext};
use crate::error::{Error, Result};
use crate::hensel::Branch;
use crate::rational::{pow_p, Rational};
use crate::report::CriterionReport;
use crate::ridout::MinimalPolynomial;
use crate::structure::least_squares_slope;
use crate::surd::{SurdElement, SurdEmbedding};
use crate::valuation::ExtendedValuation;

/// `|alpha - a/b|_p >= c / max(|a|, |b|)^n` with `c = p^v / c_small_hat`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiouvilleConstant {
    pub degree: u32,
    /// `v_p(f'(alpha))`.
    pub derivative_valuation: i64,
    /// Sum of the absolute values of the coefficients.
    #[serde(serialize_with = "crate::report::as_string")]
    pub coefficient_norm: BigInt,
    #[serde(serialize_with = "crate::report::as_string")]
    pub c: Rational,
}

fn context_for(p: u64, precision: usize) -> Result<PadicContext> {
    Ok(PadicContext::new(p, Mode::Ruban)?.with_precision(precision))
}

fn root_and_embedding(mp: &MinimalPolynomial, p: u64, branch: Branch, precision: usize) -> Result<(SurdElement, SurdEmbedding)> {
    let alpha = mp.quadratic_root(branch)?;
    let embedding = SurdEmbedding::new(alpha.field(), &context_for(p, precision)?)?;
    Ok((alpha, embedding))
}

/// The constant for a quadratic with a root in Q_p on `branch`; `precision`
/// is the number of certified digits of the square root.
pub fn liouville_constant(mp: &MinimalPolynomial, p: u64, branch: Branch, precision: usize) -> Result<LiouvilleConstant> {
    let (alpha, embedding) = root_and_embedding(mp, p, branch, precision)?;
    // f'(alpha) = 2 alpha + a_1
    let derivative = alpha.mul_rational(&Rational::from_integer(2.into())).add_rational(&Rational::from_integer(mp.coefficients()[1].clone()));
    let v = match embedding.valuation(&derivative)? {
        ExtendedValuation::Finite(v) => v,
        ExtendedValuation::Infinity => return Err(Error::InvalidPolynomial("repeated root".into())),
    };
    if v > 0 {
        return Err(Error::InvalidPolynomial(format!(
            "f'(alpha) has positive {p}-adic valuation {v}; the discriminant must be prime to p"
        )));
    }
    let norm = mp.coefficient_norm();
    let c = Rational::new(BigInt::one(), norm.clone()) * Rational::new(BigInt::one(), pow_p(p, (-v) as usize));
    Ok(LiouvilleConstant {
        degree: mp.degree(),
        derivative_valuation: v,
        coefficient_norm: norm,
        c,
    })
}

/// Smallest slack of one denominator: `c_small_hat M^n / p^(v + v_f')`.
struct Slack {
    a: i64,
    b: i64,
    defect_valuation: i64,
    ratio: Rational,
}

/// Checks the lower bound for all coprime `(a, b)` with `|a| <= h_max` and
/// `1 <= b <= h_max`; negating both gives the same fraction.
pub fn liouville_scan(mp: &MinimalPolynomial, p: u64, branch: Branch, h_max: u64) -> Result<CriterionReport> {
    if h_max == 0 {
        return Err(Error::Parse("h_max must be at least 1".into()));
    }
    let n = mp.degree();
    // v(alpha - a/b) only matters up to log_p(c_small_hat h_max^n)
    let bound = mp.coefficient_norm() * BigInt::from(h_max).pow(n);
    let mut precision = bound.bits() as usize + 32;
    loop {
        match scan_at(mp, p, branch, h_max, precision) {
            Err(Error::PrecisionExhausted { .. }) => precision *= 2,
            other => return other,
        }
    }
}

fn scan_at(mp: &MinimalPolynomial, p: u64, branch: Branch, h_max: u64, precision: usize) -> Result<CriterionReport> {
    let constant = liouville_constant(mp, p, branch, precision)?;
    let (alpha, embedding) = root_and_embedding(mp, p, branch, precision)?;
    let n = mp.degree();
    let h = h_max as i64;
    let vf = constant.derivative_valuation;
    let per_b: Vec<Result<Option<Slack>>> = (1..=h)
        .into_par_iter()
        .map(|b| {
            let mut best: Option<Slack> = None;
            for a in -h..=h {
                if a.gcd(&b) != 1 {
                    continue;
                }
                let defect = alpha.add_rational(&-Rational::new(a.into(), b.into()));
                let v = match embedding.valuation(&defect)? {
                    ExtendedValuation::Finite(v) => v,
                    ExtendedValuation::Infinity => unreachable!("an irrational root is never rational"),
                };
                let height = BigInt::from(a.abs().max(b)).pow(n);
                let ratio = Rational::from_integer(&constant.coefficient_norm * height) / pow_p_signed(p, v + vf);
                if best.as_ref().is_none_or(|s| ratio < s.ratio) {
                    best = Some(Slack {
                        a,
                        b,
                        defect_valuation: v,
                        ratio,
                    });
                }
            }
            Ok(best)
        })
        .collect();
    let mut ledger = Vec::new();
    let mut first_violation = None;
    let mut overall: Option<Slack> = None;
    for slack in per_b {
        let Some(slack) = slack? else { continue };
        let holds = slack.ratio >= Rational::one();
        if !holds && first_violation.is_none() {
            first_violation = Some(slack.b);
        }
        ledger.push(json!({
            "b": slack.b,
            "a": slack.a,
            "defect_valuation": slack.defect_valuation,
            "slack": slack.ratio.to_string(),
            "holds": holds,
        }));
        if overall.as_ref().is_none_or(|o| slack.ratio < o.ratio) {
            overall = Some(slack);
        }
    }
    let tightest = overall.expect("h_max >= 1 gives at least the pair (0, 1)");
    let summary = format!(
        "c = {}; tightest pair ({}, {}) with v = {} and slack {}{}",
        constant.c,
        tightest.a,
        tightest.b,
        tightest.defect_valuation,
        tightest.ratio,
        match first_violation {
            None => String::new(),
            Some(b) => format!("; first violation at b = {b}"),
        }
    );
    ledger.insert(0, json!({"constant": constant}));
    Ok(CriterionReport::new("liouville", first_violation, ledger, summary))
}

fn pow_p_signed(p: u64, e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(pow_p(p, e as usize))
    } else {
        Rational::new(BigInt::one(), pow_p(p, (-e) as usize))
    }
}

/// `-v_p(B_n) >= n` at every index, with the margin `-v_p(B_n) - n`, and the
/// check that `-v_p(B_n)` equals the sum of `-v_p(b_j)` for `1 <= j <= n`.
pub fn golden_bound_check(table: &ConvergentTable) -> CriterionReport {
    let p = table.p;
    let mut ledger = Vec::new();
    let mut first_violation = None;
    let mut running = 0i64;
    for (n, pair) in table.pairs.iter().enumerate() {
        if n >= 1 {
            running += match crate::rational::vp(&table.quotients[n], p) {
                ExtendedValuation::Finite(v) => -v,
                ExtendedValuation::Infinity => 0,
            };
        }
        let neg_vb = match pair.vp_b {
            ExtendedValuation::Finite(v) => Some(-v),
            ExtendedValuation::Infinity => None,
        };
        let margin = neg_vb.map(|v| v - n as i64);
        let accounting = neg_vb == Some(running);
        let holds = margin.is_some_and(|m| m >= 0) && accounting;
        if !holds && first_violation.is_none() {
            first_violation = Some(n as i64);
        }
        ledger.push(json!({
            "n": n,
            "neg_vp_b": neg_vb,
            "margin": margin,
            "vb_accounting": accounting,
            "holds": holds,
        }));
    }
    let min_margin = ledger.iter().filter_map(|e| e["margin"].as_i64()).min();
    let summary = format!(
        "|B_n|_p >= p^n >= phi^(n-1) since p >= 3; minimum margin {}",
        min_margin.map_or("none".to_string(), |m| m.to_string())
    );
    CriterionReport::new("golden_bound", first_violation, ledger, summary)
}

/// `ln(-v_p(B_k) ln p) sqrt(ln k) / k`.
pub fn loglog_value(neg_vp_b: f64, ln_p: f64, k: f64) -> f64 {
    (neg_vp_b * ln_p).ln() * k.ln().sqrt() / k
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogLogEntry {
    pub k: usize,
    pub vp_b: i64,
    pub s: f64,
    pub f_ge_e: Option<bool>,
    pub arch: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    /// Natural logarithms throughout.
    pub entries: Vec<LogLogEntry>,
    /// Index and value of the largest statistic.
    pub max_observed: Option<(usize, f64)>,
    pub trend_slope: Option<f64>,
    /// Smallest `K` with `s` strictly decreasing from `K` to the last index.
    pub decreasing_from: Option<usize>,
}

pub fn loglog_statistic(table: &ConvergentTable) -> GrowthReport {
    let ln_p = (table.p as f64).ln();
    let entries: Vec<LogLogEntry> = table
        .pairs
        .iter()
        .filter(|pair| pair.index >= 2)
        .filter_map(|pair| {
            let vp_b = pair.vp_b.finite().filter(|&v| v < 0)?;
            let d = decompose(pair, table.p);
            Some(LogLogEntry {
                k: pair.index,
                vp_b,
                s: loglog_value(-vp_b as f64, ln_p, pair.index as f64),
                f_ge_e: d.f_ge_e,
                arch: d.arch_hypothesis,
            })
        })
        .collect();
    let max_observed = entries
        .iter()
        .map(|e| (e.k, e.s))
        .fold(None, |acc: Option<(usize, f64)>, x| match acc {
            Some(best) if best.1 >= x.1 => Some(best),
            _ => Some(x),
        });
    let points: Vec<(f64, f64)> = entries.iter().map(|e| (e.k as f64, e.s)).collect();
    let mut decreasing_from = entries.last().map(|e| e.k);
    for w in entries.windows(2).rev() {
        if w[1].s < w[0].s && w[1].k == w[0].k + 1 {
            decreasing_from = Some(w[0].k);
        } else {
            break;
        }
    }
    GrowthReport {
        max_observed,
        trend_slope: least_squares_slope(&points),
        decreasing_from,
        entries,
    }
}

fn flag(x: Option<bool>) -> &'static str {
    match x {
        Some(true) => "true",
        Some(false) => "false",
        None => "",
    }
}

/// Columns `k,vpB,s_k,flag_f_ge_e,flag_arch`.
pub fn growth_csv(report: &GrowthReport) -> String {
    let mut out = String::from("k,vpB,s_k,flag_f_ge_e,flag_arch\n");
    for e in &report.entries {
        out.push_str(&format!("{},{},{},{},{}\n", e.k, e.vp_b, e.s, flag(e.f_ge_e), flag(e.arch)));
    }
    out
}
