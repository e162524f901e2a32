//! The manifold expression language:
//!
//! ```text
//! expr := "sphere(" INT ")" | "product(" expr ("," expr)+ ")"
//!       | "connected_sum(" expr ("," expr)+ ")" | "cp(" INT ")" | "rp(" INT ")"
//!       | "wu" | "m0" | "load(" STRING ")"
//! ```
//!
//! Keywords are case-insensitive. Printing uses the `Display` of
//! [`ManifoldDescription`], which this parser reads back unchanged.

use std::fmt;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use sgm_core::builder::{CatalogEntry, ManifoldDescription};
use thiserror::Error;

const KEYWORDS: [&str; 8] = ["sphere", "product", "connected_sum", "cp", "rp", "wu", "m0", "load"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// Tokens that would have been accepted here; empty for argument errors.
    pub expected: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Str(String),
    LParen,
    RParen,
    Comma,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    let err = |line, column, message: String| ParseError {
        line,
        column,
        message,
        expected: Vec::new(),
    };
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let tok = match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '(' | ')' | ',' => {
                bump(&mut chars);
                match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => Tok::Comma,
                }
            }
            '"' => {
                bump(&mut chars);
                let mut s = String::new();
                loop {
                    match bump(&mut chars) {
                        None => return Err(err(l, col, "unterminated string".into())),
                        Some('"') => break,
                        Some('\\') => match bump(&mut chars) {
                            Some(e @ ('"' | '\\')) => s.push(e),
                            _ => return Err(err(l, col, "only \\\" and \\\\ escapes are allowed".into())),
                        },
                        Some(c) => s.push(c),
                    }
                }
                Tok::Str(s)
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    bump(&mut chars);
                }
                Tok::Int(s.parse().expect("digits"))
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !(d.is_ascii_alphanumeric() || d == '_') {
                        break;
                    }
                    s.push(d);
                    bump(&mut chars);
                }
                Tok::Ident(s)
            }
            c => return Err(err(l, col, format!("unexpected character {c:?}"))),
        };
        out.push(Spanned {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, at: &Spanned, expected: &[&str]) -> ParseError {
        let list: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
        ParseError {
            line: at.line,
            column: at.column,
            message: format!("expected {}, found {}", list.join(" or "), at.tok),
            expected: list,
        }
    }

    fn argument(&self, at: &Spanned, message: String) -> ParseError {
        ParseError {
            line: at.line,
            column: at.column,
            message,
            expected: Vec::new(),
        }
    }

    fn expect(&mut self, want: Tok, label: &str) -> Result<Spanned, ParseError> {
        let t = self.next();
        if t.tok == want {
            Ok(t)
        } else {
            Err(self.unexpected(&t, &[label]))
        }
    }

    fn int_arg(&mut self) -> Result<(usize, Spanned), ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let t = self.next();
        let Tok::Int(n) = &t.tok else {
            return Err(self.unexpected(&t, &["integer"]));
        };
        let n = n
            .to_usize()
            .ok_or_else(|| self.argument(&t, format!("{n} is too large")))?;
        self.expect(Tok::RParen, "`)`")?;
        Ok((n, t))
    }

    fn expr(&mut self) -> Result<ManifoldDescription, ParseError> {
        let t = self.next();
        let Tok::Ident(name) = &t.tok else {
            return Err(self.unexpected(&t, &KEYWORDS));
        };
        let lower = name.to_ascii_lowercase();
        match lower.as_str() {
            "sphere" => {
                let (n, at) = self.int_arg()?;
                if n == 0 {
                    return Err(self.argument(&at, "sphere dimension must be at least 1".into()));
                }
                Ok(ManifoldDescription::Sphere(n))
            }
            "cp" => {
                let (n, at) = self.int_arg()?;
                if n == 0 {
                    return Err(self.argument(&at, "cp needs complex dimension at least 1".into()));
                }
                Ok(ManifoldDescription::Catalog(CatalogEntry::ComplexProjective(n)))
            }
            "rp" => {
                let (n, at) = self.int_arg()?;
                if !(1..=7).contains(&n) {
                    return Err(self.argument(&at, "rp is available for dimensions 1 to 7".into()));
                }
                Ok(ManifoldDescription::Catalog(CatalogEntry::RealProjective(n)))
            }
            "wu" => Ok(ManifoldDescription::Catalog(CatalogEntry::Wu)),
            "m0" => Ok(ManifoldDescription::Catalog(CatalogEntry::M0)),
            "load" => {
                self.expect(Tok::LParen, "`(`")?;
                let s = self.next();
                let Tok::Str(path) = &s.tok else {
                    return Err(self.unexpected(&s, &["string"]));
                };
                self.expect(Tok::RParen, "`)`")?;
                Ok(ManifoldDescription::Explicit(PathBuf::from(path)))
            }
            "product" | "connected_sum" => {
                self.expect(Tok::LParen, "`(`")?;
                let mut xs = vec![self.expr()?];
                loop {
                    let t = self.next();
                    match t.tok {
                        Tok::Comma => xs.push(self.expr()?),
                        Tok::RParen if xs.len() >= 2 => break,
                        Tok::RParen => {
                            return Err(self.argument(&t, format!("{lower} needs at least two operands")));
                        }
                        _ => return Err(self.unexpected(&t, &["`,`", "`)`"])),
                    }
                }
                Ok(if lower == "product" {
                    ManifoldDescription::Product(xs)
                } else {
                    ManifoldDescription::ConnectedSum(xs)
                })
            }
            _ => Err(ParseError {
                line: t.line,
                column: t.column,
                message: format!("unknown name `{name}`; expected one of {}", KEYWORDS.join(", ")),
                expected: KEYWORDS.iter().map(|s| s.to_string()).collect(),
            }),
        }
    }
}

pub fn parse_expression(text: &str) -> Result<ManifoldDescription, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    let t = p.next();
    if t.tok != Tok::End {
        return Err(p.unexpected(&t, &["end of input"]));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ManifoldDescription as D;

    #[test]
    fn spec_examples() {
        assert_eq!(
            parse_expression("product(sphere(2), sphere(2), sphere(3))").unwrap(),
            D::Product(vec![D::Sphere(2), D::Sphere(2), D::Sphere(3)])
        );
        let s = "connected_sum(product(sphere(2),sphere(2),sphere(3)), product(sphere(2),sphere(2),sphere(3)))";
        assert!(matches!(parse_expression(s).unwrap(), D::ConnectedSum(xs) if xs.len() == 2));
        let e = parse_expression("product(sphere(0))").unwrap_err();
        assert_eq!((e.line, e.column), (1, 16));
    }

    #[test]
    fn keywords_ignore_case() {
        assert_eq!(
            parse_expression("PRODUCT(Cp(2), SPHERE(3))").unwrap(),
            D::Product(vec![D::Catalog(CatalogEntry::ComplexProjective(2)), D::Sphere(3)])
        );
        assert_eq!(parse_expression("Wu").unwrap(), D::Catalog(CatalogEntry::Wu));
    }

    #[test]
    fn errors_carry_positions_and_expectations() {
        let e = parse_expression("product(sphere(2),\n  sphere(3)").unwrap_err();
        assert_eq!((e.line, e.column), (2, 12));
        assert_eq!(e.expected, ["`,`", "`)`"]);
        let e = parse_expression("torus(2)").unwrap_err();
        assert!(e.message.contains("unknown name"));
        assert_eq!(e.expected.len(), KEYWORDS.len());
        let e = parse_expression("product(sphere(2))").unwrap_err();
        assert!(e.message.contains("at least two"));
        let e = parse_expression("sphere(2) wu").unwrap_err();
        assert_eq!(e.expected, ["end of input"]);
        let e = parse_expression("sphere(99999999999999999999999)").unwrap_err();
        assert!(e.message.contains("too large"));
        assert!(parse_expression("rp(8)").is_err());
        assert!(parse_expression("load(\"a").is_err());
        assert!(parse_expression("sphere(-1)").is_err());
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "sphere(5)",
            "product(cp(2), sphere(3))",
            "connected_sum(product(sphere(2), sphere(5)), product(sphere(3), sphere(4)))",
            "product(sphere(2), product(wu, m0), rp(3))",
            r#"load("dir/we\"ird\\name.sgm")"#,
        ] {
            let d = parse_expression(s).unwrap();
            assert_eq!(d.to_string(), s);
            assert_eq!(parse_expression(&d.to_string()).unwrap(), d);
        }
    }
}
