use crate::context::PadicContext;
use crate::digits::padic_floor_rational;
use crate::error::{Error, Result};
use crate::rational::{in_z_inv_p, parse_rational, vp, Rational};
use crate::valuation::ExtendedValuation;

/// Parses one quotient per line; `#` starts a comment and blank lines are skipped.
pub fn parse_sequence(text: &str) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let q = parse_rational(body)
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        out.push(q);
    }
    if out.is_empty() {
        return Err(Error::Parse("sequence file has no quotients".into()));
    }
    Ok(out)
}

/// Checks that `b_0, b_1, ...` could have been produced by the expansion
/// algorithm in this context: every `b_i` is its own floor and `v_p(b_i) < 0`
/// for `i >= 1`.
pub fn validate_quotients(quotients: &[Rational], ctx: &PadicContext) -> Result<()> {
    let p = ctx.p();
    for (index, b) in quotients.iter().enumerate() {
        let bad = |reason: &str| Error::InvalidQuotient {
            index,
            value: b.to_string(),
            reason: reason.to_string(),
        };
        if !in_z_inv_p(b, p) {
            return Err(bad("not in Z[1/p]"));
        }
        if index >= 1 && vp(b, p) >= ExtendedValuation::Finite(0) {
            return Err(bad("valuation must be negative after b_0"));
        }
        if &padic_floor_rational(b, ctx) != b {
            return Err(bad("digits outside the mode's digit set"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::Mode;

    #[test]
    fn parses_with_comments() {
        let seq = parse_sequence("# header\n0\n\n1/5   # b1\n\u{2212}2/5\n").unwrap();
        assert_eq!(seq.len(), 3);
        assert_eq!(seq[2], parse_rational("-2/5").unwrap());
        assert!(matches!(parse_sequence("1/0\n"), Err(Error::Parse(_))));
        assert!(parse_sequence("# nothing\n").is_err());
    }

    #[test]
    fn validates_quotients() {
        let ctx = PadicContext::new(5, Mode::Browkin).unwrap();
        let ok = parse_sequence("0\n1/5\n-3/5\n").unwrap();
        assert!(validate_quotients(&ok, &ctx).is_ok());
        for bad in ["0\n2\n", "0\n1/3\n", "0\n13/5\n"] {
            let seq = parse_sequence(bad).unwrap();
            assert!(matches!(validate_quotients(&seq, &ctx), Err(Error::InvalidQuotient { index: 1, .. })));
        }
        let ruban = PadicContext::new(5, Mode::Ruban).unwrap();
        assert!(validate_quotients(&parse_sequence("0\n13/5\n").unwrap(), &ruban).is_ok());
    }
}
