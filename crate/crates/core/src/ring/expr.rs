//! Integer combinations of generator names: `2*a - b + c`, or `0`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::RingError;

#[derive(Debug, PartialEq)]
enum Token {
    Plus,
    Minus,
    Star,
    Word(String),
}

fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut word = String::new();
    for c in text.chars() {
        let sym = match c {
            '+' => Some(Token::Plus),
            '-' => Some(Token::Minus),
            '*' => Some(Token::Star),
            _ => None,
        };
        if sym.is_some() || c.is_whitespace() {
            if !word.is_empty() {
                out.push(Token::Word(std::mem::take(&mut word)));
            }
            out.extend(sym);
        } else {
            word.push(c);
        }
    }
    if !word.is_empty() {
        out.push(Token::Word(word));
    }
    out
}

/// Returns `(coefficient, name)` terms in input order. `0` yields no terms.
pub fn parse_combination(text: &str) -> Result<Vec<(BigInt, String)>, RingError> {
    let tokens = tokenize(text);
    if tokens == [Token::Word("0".into())] {
        return Ok(Vec::new());
    }
    let err = |msg: &str| RingError::Expression(format!("{msg} in `{}`", text.trim()));
    if tokens.is_empty() {
        return Err(err("empty expression"));
    }
    let mut terms = Vec::new();
    let mut it = tokens.into_iter().peekable();
    let mut first = true;
    while it.peek().is_some() {
        let negative = match it.peek() {
            Some(Token::Minus) => {
                it.next();
                true
            }
            Some(Token::Plus) => {
                it.next();
                false
            }
            _ if first => false,
            _ => return Err(err("expected `+` or `-` between terms")),
        };
        first = false;
        let (c, n) = parse_term(&mut it, &err)?;
        if !c.is_zero() {
            terms.push((if negative { -c } else { c }, n));
        }
    }
    Ok(terms)
}

fn parse_term(
    it: &mut std::iter::Peekable<std::vec::IntoIter<Token>>,
    err: &dyn Fn(&str) -> RingError,
) -> Result<(BigInt, String), RingError> {
    let Some(Token::Word(w)) = it.next() else {
        return Err(err("expected a coefficient or generator name"));
    };
    if it.peek() == Some(&Token::Star) {
        it.next();
        let c: BigInt = w
            .parse()
            .map_err(|_| err(&format!("`{w}` is not an integer coefficient")))?;
        let Some(Token::Word(n)) = it.next() else {
            return Err(err("expected a generator name after `*`"));
        };
        if n == "0" {
            return Err(err("`0` cannot appear inside a combination"));
        }
        Ok((c, n))
    } else if w == "0" {
        Err(err("`0` cannot appear inside a combination"))
    } else {
        Ok((BigInt::one(), w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terms(text: &str) -> Vec<(i64, String)> {
        parse_combination(text)
            .unwrap()
            .into_iter()
            .map(|(c, n)| (i64::try_from(c).unwrap(), n))
            .collect()
    }

    #[test]
    fn accepted_forms() {
        assert_eq!(terms("0"), vec![]);
        assert_eq!(terms(" a "), vec![(1, "a".into())]);
        assert_eq!(
            terms("2*a - b + 3 * c#2"),
            vec![(2, "a".into()), (-1, "b".into()), (3, "c#2".into())]
        );
        assert_eq!(terms("-1"), vec![(-1, "1".into())]);
        assert_eq!(terms("0*a + s2⊗s3"), vec![(1, "s2⊗s3".into())]);
    }

    #[test]
    fn rejected_forms() {
        for bad in ["", "a b", "a +", "a + -b", "2*", "x*a", "a + 0", "* a", "2*0"] {
            assert!(parse_combination(bad).is_err(), "{bad:?} should be rejected");
        }
    }
}
