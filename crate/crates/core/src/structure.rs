//! Palindromic prefixes and repeated blocks in quotient sequences.
//!
//! Sequences here start at `b_1`: `pqs[0]` is `b_1`, and every reported
//! index is 1-based.

use serde::Serialize;

use crate::cf::ConvergentTable;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PalindromeReport {
    /// Every `n` with `(b_1, ..., b_n)` palindromic, increasing.
    pub lengths: Vec<usize>,
}

pub fn palindromic_prefixes(pqs: &[Rational]) -> PalindromeReport {
    let lengths = (1..=pqs.len())
        .filter(|&n| (0..n / 2).all(|j| pqs[j] == pqs[n - 1 - j]))
        .collect();
    PalindromeReport { lengths }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetryCheck {
    pub n: usize,
    pub holds: bool,
}

/// `A_n = B_{n-1}` at each palindromic `n`, for convergents of `[0, b_1, ...]`.
pub fn verify_matrix_symmetry(table: &ConvergentTable, report: &PalindromeReport) -> Vec<SymmetryCheck> {
    report
        .lengths
        .iter()
        .filter(|&&n| n < table.len())
        .map(|&n| SymmetryCheck {
            n,
            holds: table.a(n as i64) == table.b(n as i64 - 1),
        })
        .collect()
}

/// `b_{m+k} = b_m` for `n <= m <= n + (lambda-1)k - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RepetitionBlock {
    pub n: usize,
    pub k: usize,
    pub lambda: usize,
}

impl RepetitionBlock {
    /// Last index covered by the block.
    pub fn end(&self) -> usize {
        self.n + self.lambda * self.k - 1
    }

    fn contains(&self, other: &RepetitionBlock) -> bool {
        self.n <= other.n && self.end() >= other.end()
    }

    /// Checks the defining equalities against a sequence starting at `b_1`.
    pub fn verify(&self, pqs: &[Rational]) -> bool {
        self.lambda >= 2
            && self.end() <= pqs.len()
            && (self.n..=self.n + (self.lambda - 1) * self.k - 1).all(|m| pqs[m + self.k - 1] == pqs[m - 1])
    }
}

/// Maximal repeated blocks with `lambda >= min_lambda`, ordered by `(n, k)`.
///
/// For each period `k`, a start is kept when its block reaches further than
/// every earlier start in the same run of matches. A block is then dropped
/// when a block with a proper divisor of its period covers it.
pub fn detect_repetitions(pqs: &[Rational], min_lambda: usize) -> Vec<RepetitionBlock> {
    let len = pqs.len();
    let mut candidates = Vec::new();
    for k in 1..=len / 2 {
        let mut m = 1;
        while m + k <= len {
            if pqs[m + k - 1] != pqs[m - 1] {
                m += 1;
                continue;
            }
            let run_start = m;
            while m + k <= len && pqs[m + k - 1] == pqs[m - 1] {
                m += 1;
            }
            let run_end = m - 1;
            let mut reach = 0;
            for n in run_start..=run_end {
                let lambda = (run_end - n + 1) / k + 1;
                if lambda < 2 {
                    break;
                }
                let block = RepetitionBlock { n, k, lambda };
                if block.end() > reach {
                    reach = block.end();
                    candidates.push(block);
                }
            }
        }
    }
    let mut blocks: Vec<RepetitionBlock> = candidates
        .iter()
        .filter(|x| x.lambda >= min_lambda.max(2))
        .filter(|x| !candidates.iter().any(|y| y.k < x.k && x.k % y.k == 0 && y.contains(x)))
        .copied()
        .collect();
    blocks.sort_by_key(|b| (b.n, b.k));
    blocks
}

/// `log(lambda) * sqrt(log n) / n`.
pub fn growth_statistic_value(n: f64, lambda: f64) -> f64 {
    lambda.ln() * n.ln().sqrt() / n
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthEntry {
    pub n: usize,
    pub k: usize,
    pub lambda: usize,
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthStatistic {
    pub entries: Vec<GrowthEntry>,
    /// Blocks with `n = 1`, where `log n = 0`.
    pub not_evaluable: Vec<RepetitionBlock>,
    /// Least-squares slope of `s` against `n`; `None` with fewer than two points.
    pub trend_slope: Option<f64>,
}

pub fn growth_statistic(blocks: &[RepetitionBlock]) -> GrowthStatistic {
    let mut sorted = blocks.to_vec();
    sorted.sort_by_key(|b| (b.n, b.k));
    let (evaluable, not_evaluable): (Vec<_>, Vec<_>) = sorted.into_iter().partition(|b| b.n >= 2);
    let entries: Vec<GrowthEntry> = evaluable
        .iter()
        .map(|b| GrowthEntry {
            n: b.n,
            k: b.k,
            lambda: b.lambda,
            s: growth_statistic_value(b.n as f64, b.lambda as f64),
        })
        .collect();
    let points: Vec<(f64, f64)> = entries.iter().map(|e| (e.n as f64, e.s)).collect();
    GrowthStatistic {
        entries,
        not_evaluable,
        trend_slope: least_squares_slope(&points),
    }
}

pub(crate) fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let count = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / count;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    Some(sxy / sxx)
}
