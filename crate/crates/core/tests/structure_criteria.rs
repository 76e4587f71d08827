use num_bigint::BigInt;
use num_traits::Zero;
use padiccf_core::cf::convergents;
use padiccf_core::criteria::{lemma_a2_check, tail_quadratic};
use padiccf_core::structure::{detect_repetitions, palindromic_prefixes, verify_matrix_symmetry, RepetitionBlock};
use padiccf_core::{Evaluator, Mode, PadicContext, Rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A quotient `d_0 + d_1/p + ... + d_j/p^j`, `j` in `{1, 2}`, with `d_j` nonzero and symmetric digits.
fn quotient(rng: &mut ChaCha8Rng, p: u64) -> Rational {
    let depth = rng.gen_range(1..=2u32);
    let half = (p as i64 - 1) / 2;
    let mut numer = BigInt::from(rng.gen_range(-half..=half));
    for i in 0..depth {
        let d = loop {
            let d = rng.gen_range(-half..=half);
            if i + 1 < depth || d != 0 {
                break d;
            }
        };
        numer = numer * p + d;
    }
    Rational::new(numer, BigInt::from(p).pow(depth))
}

fn from_alphabet(symbols: &[u8]) -> Vec<Rational> {
    symbols
        .iter()
        .map(|&s| Rational::new(BigInt::from(s as i64 + 1), 5.into()))
        .collect()
}

fn palindrome(rng: &mut ChaCha8Rng, p: u64, len: usize) -> Vec<Rational> {
    let half: Vec<Rational> = (0..len.div_ceil(2)).map(|_| quotient(rng, p)).collect();
    let mut seq = half.clone();
    seq.extend(half.iter().rev().skip(len % 2).cloned());
    seq
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn palindromes_match_direct_check(symbols in prop::collection::vec(0u8..3, 1..40)) {
        let seq = from_alphabet(&symbols);
        let report = palindromic_prefixes(&seq);
        let oracle: Vec<usize> = (1..=seq.len())
            .filter(|&n| seq[..n].iter().eq(seq[..n].iter().rev()))
            .collect();
        prop_assert_eq!(report.lengths, oracle);
    }

    #[test]
    fn reported_blocks_verify(symbols in prop::collection::vec(0u8..3, 1..60)) {
        let seq = from_alphabet(&symbols);
        for block in detect_repetitions(&seq, 2) {
            // b_{m+k} = b_m for every m in the block, checked from scratch
            for m in block.n..=block.n + (block.lambda - 1) * block.k - 1 {
                prop_assert_eq!(&seq[m + block.k - 1], &seq[m - 1]);
            }
            prop_assert!(block.lambda >= 2 && block.end() <= seq.len());
        }
    }

    #[test]
    fn constructed_blocks_are_recovered(
        prefix in prop::collection::vec(0u8..4, 0..10),
        unit in prop::collection::vec(0u8..4, 1..5),
        lambda in 2usize..5,
        suffix in prop::collection::vec(0u8..4, 0..10),
    ) {
        let mut symbols = prefix.clone();
        for _ in 0..lambda {
            symbols.extend(&unit);
        }
        symbols.extend(&suffix);
        let seq = from_alphabet(&symbols);
        let target = RepetitionBlock { n: prefix.len() + 1, k: unit.len(), lambda };
        prop_assert!(target.verify(&seq));
        let blocks = detect_repetitions(&seq, 2);
        prop_assert!(
            blocks.iter().any(|b| b.n <= target.n && b.end() >= target.end()),
            "{:?} not covered by {:?}", target, blocks
        );
    }

    #[test]
    fn tail_heights_are_bounded(seed in any::<u64>(), len in 2usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = 5;
        let mut seq = vec![Rational::zero()];
        seq.extend((1..len).map(|_| quotient(&mut rng, p)));
        let h = rng.gen_range(1..len);
        let k = rng.gen_range(1..=len - h);
        let ctx = PadicContext::new(p, Mode::Browkin).unwrap().with_precision(256);
        let rel = tail_quadratic(&seq, h, k, &ctx).unwrap();
        prop_assert!(rel.height_holds, "{:?}", rel);
        if rel.eta.is_some() {
            prop_assert_eq!(rel.eta_residual_zero, Some(true));
        }
    }
}

#[test]
fn symmetry_at_palindromic_prefixes() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let p = [3, 5, 7][rng.gen_range(0..3)];
        let len = rng.gen_range(1..20);
        let mut seq = vec![Rational::zero()];
        seq.extend(palindrome(&mut rng, p, len));
        let report = palindromic_prefixes(&seq[1..]);
        assert!(report.lengths.contains(&len));
        let checks = verify_matrix_symmetry(&convergents(&seq, p), &report);
        assert!(checks.iter().all(|c| c.holds));
    }
}

#[test]
fn lemma_a2_on_periodic_palindromes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut tested = 0;
    while tested < 50 {
        let p = [3, 5, 7][rng.gen_range(0..3)];
        let len = rng.gen_range(1..5);
        let block = palindrome(&mut rng, p, len);
        let mut seq = vec![Rational::zero()];
        for _ in 0..(12 / block.len()).max(3) {
            seq.extend(block.iter().cloned());
        }
        let ctx = PadicContext::new(p, Mode::Browkin).unwrap().with_precision(256);
        let rel = tail_quadratic(&seq, 1, block.len(), &ctx).unwrap();
        let Some(x) = rel.eta else { continue };
        let table = convergents(&seq, p);
        let ev = Evaluator::for_value(&x, &ctx).unwrap();
        let report = lemma_a2_check(&x, &table, &palindromic_prefixes(&seq[1..]), &ev).unwrap();
        assert!(report.holds_on_range, "block {block:?}: {}", report.summary);
        tested += 1;
    }
}
