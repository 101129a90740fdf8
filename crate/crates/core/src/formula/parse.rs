//! Recursive-descent parser for the concrete formula syntax.
//!
//! ```text
//! formula  = conj ;
//! conj     = unary { "&" unary } ;
//! unary    = ("bplus"|"bminus"|"dplus"|"dminus") bound unary | "!" unary | atom ;
//! atom     = "true" | IDENT | "(" formula [ ("S"|"U") bound formula ] ")" ;
//! bound    = "[" rational "," rational "]" ;
//! rational = ["-"] INT [ "/" INT ] ;
//! ```
//!
//! Whitespace is insignificant and `#` starts a comment running to the end
//! of the line.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Bound, BoundError, Formula, FormulaError};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    True,
    BoxPlus,
    BoxMinus,
    DiaPlus,
    DiaMinus,
    Since,
    Until,
    Bang,
    Amp,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Minus,
    Slash,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::True => "`true`".into(),
            Tok::BoxPlus => "`bplus`".into(),
            Tok::BoxMinus => "`bminus`".into(),
            Tok::DiaPlus => "`dplus`".into(),
            Tok::DiaMinus => "`dminus`".into(),
            Tok::Since => "`S`".into(),
            Tok::Until => "`U`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> FormulaError {
    FormulaError::Syntax { line: pos.line, column: pos.column, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, FormulaError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = match word.as_str() {
                "true" => Tok::True,
                "bplus" => Tok::BoxPlus,
                "bminus" => Tok::BoxMinus,
                "dplus" => Tok::DiaPlus,
                "dminus" => Tok::DiaMinus,
                "S" => Tok::Since,
                "U" => Tok::Until,
                _ => Tok::Ident(word),
            };
            toks.push((tok, pos));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            col += i - start;
            toks.push((Tok::Int(digits.parse().expect("ascii digits")), pos));
            continue;
        }
        let tok = match c {
            '!' => Tok::Bang,
            '&' => Tok::Amp,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            ',' => Tok::Comma,
            '-' => Tok::Minus,
            '/' => Tok::Slash,
            other => return Err(syntax(pos, format!("unexpected character `{other}`"))),
        };
        toks.push((tok, pos));
        i += 1;
        col += 1;
    }
    toks.push((Tok::Eof, Pos { line, column: col }));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), FormulaError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(
                self.pos(),
                format!("expected {}, found {}", want.describe(), self.peek().describe()),
            ))
        }
    }

    fn formula(&mut self) -> Result<Formula, FormulaError> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            f = Formula::and(f, rhs);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek() {
            Tok::BoxPlus | Tok::BoxMinus | Tok::DiaPlus | Tok::DiaMinus => {
                let op = self.bump();
                let bound = self.bound()?;
                let body = self.unary()?;
                Ok(match op {
                    Tok::BoxPlus => Formula::box_plus(bound, body),
                    Tok::BoxMinus => Formula::box_minus(bound, body),
                    Tok::DiaPlus => Formula::dia_plus(bound, body),
                    _ => Formula::dia_minus(bound, body),
                })
            }
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        let pos = self.pos();
        match self.bump() {
            Tok::True => Ok(Formula::Top),
            Tok::Ident(name) => Ok(Formula::Pred(name)),
            Tok::LParen => {
                let lhs = self.formula()?;
                let f = match self.peek() {
                    Tok::Since | Tok::Until => {
                        let op = self.bump();
                        let bound = self.bound()?;
                        let rhs = self.formula()?;
                        if op == Tok::Since {
                            Formula::since(lhs, bound, rhs)
                        } else {
                            Formula::until(lhs, bound, rhs)
                        }
                    }
                    _ => lhs,
                };
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            other => Err(syntax(pos, format!("expected a formula, found {}", other.describe()))),
        }
    }

    fn bound(&mut self) -> Result<Bound, FormulaError> {
        let pos = self.pos();
        self.expect(Tok::LBrack)?;
        let i1 = self.rational()?;
        self.expect(Tok::Comma)?;
        let i2 = self.rational()?;
        self.expect(Tok::RBrack)?;
        Bound::new(i1, i2).map_err(|e| match e {
            BoundError::Negative(i1, i2) => {
                FormulaError::NegativeBound { i1, i2, line: pos.line, column: pos.column }
            }
            BoundError::Inverted(i1, i2) => {
                FormulaError::InvertedBound { i1, i2, line: pos.line, column: pos.column }
            }
        })
    }

    fn rational(&mut self) -> Result<Rational, FormulaError> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let numer = self.int()?;
        let denom = if *self.peek() == Tok::Slash {
            self.bump();
            let pos = self.pos();
            let d = self.int()?;
            if d.is_zero() {
                return Err(syntax(pos, "zero denominator"));
            }
            d
        } else {
            BigInt::from(1)
        };
        Ok(Rational::from_big(if neg { -numer } else { numer }, denom))
    }

    fn int(&mut self) -> Result<BigInt, FormulaError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => Ok(n),
            other => Err(syntax(pos, format!("expected an integer, found {}", other.describe()))),
        }
    }
}

/// Parses a formula in concrete syntax.
pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(syntax(p.pos(), format!("unexpected {}", p.peek().describe())));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn b(i1: Rational, i2: Rational) -> Bound {
        Bound::new(i1, i2).unwrap()
    }

    #[test]
    fn unary_box() {
        let f = parse_formula("bplus[1,2] p").unwrap();
        assert_eq!(f, Formula::box_plus(b(q(1, 1), q(2, 1)), Formula::pred("p")));
    }

    #[test]
    fn until_and_negation() {
        let f = parse_formula("(p U[1/2, 3] true) & !q").unwrap();
        let want = Formula::and(
            Formula::until(Formula::pred("p"), b(q(1, 2), q(3, 1)), Formula::Top),
            Formula::not(Formula::pred("q")),
        );
        assert_eq!(f, want);
    }

    #[test]
    fn inverted_bound() {
        assert!(matches!(parse_formula("bplus[2,1] p"), Err(FormulaError::InvertedBound { .. })));
    }

    #[test]
    fn negative_bound() {
        let err = parse_formula("dminus[-1,2] p").unwrap_err();
        assert!(matches!(err, FormulaError::NegativeBound { line: 1, column: 7, .. }));
    }

    #[test]
    fn unary_binds_tighter_than_and() {
        let f = parse_formula("dplus[0,1] p & q").unwrap();
        assert!(matches!(f, Formula::And(..)));
    }

    #[test]
    fn conjunction_is_left_associative() {
        let f = parse_formula("a & b & c").unwrap();
        let want = Formula::and(
            Formula::and(Formula::pred("a"), Formula::pred("b")),
            Formula::pred("c"),
        );
        assert_eq!(f, want);
    }

    #[test]
    fn comments_and_lines() {
        let f = parse_formula("# leading comment\n  (p S[0,1]\n q) # trailing").unwrap();
        assert!(matches!(f, Formula::Since(..)));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_formula("p &\n  & q") {
            Err(FormulaError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_formula("(p U[1,2] q"), Err(FormulaError::Syntax { .. })));
        assert!(matches!(parse_formula("p q"), Err(FormulaError::Syntax { .. })));
        assert!(matches!(parse_formula("bplus p"), Err(FormulaError::Syntax { .. })));
        assert!(matches!(parse_formula("bplus[1/0,2] p"), Err(FormulaError::Syntax { .. })));
        assert!(matches!(parse_formula("p $"), Err(FormulaError::Syntax { .. })));
        assert!(matches!(parse_formula(""), Err(FormulaError::Syntax { .. })));
    }

    #[test]
    fn printed_forms_reparse() {
        for text in [
            "(true U[1,1] (p U[2,2] true))",
            "((true U[1,2] (p U[2,3] true)) & (true U[4,5] (p S[2,3] true)))",
            "!bminus[0,1/3] (a & !b)",
            "dplus[2,2] dminus[0,0] x_1",
        ] {
            let f = parse_formula(text).unwrap();
            assert_eq!(f.to_string(), text);
        }
    }
}
