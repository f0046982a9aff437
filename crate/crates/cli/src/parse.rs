//! Curve expressions and cohomology polynomials.
//!
//! ```text
//! curve := poly "," poly
//! poly  := ["-"] term (("+" | "-") term)*
//! term  := [coef "*"] "t" ["^" int] | coef
//! coef  := int | "(" int "/" int ")"
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use semple_core::cohomology::Polynomial;
use semple_core::curves::{default_trunc, PlaneCurveGerm};
use semple_core::series::{Rational, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Character offset into the source text.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at position {}: {}",
            self.position, self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveError {
    Parse(ParseError),
    /// A coordinate has a nonzero constant term.
    ConstantTerm {
        coordinate: char,
    },
    /// The requested truncation would drop input terms.
    TruncBelowInput {
        trunc: u32,
        max_exponent: u32,
    },
}

impl fmt::Display for CurveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveError::Parse(e) => e.fmt(f),
            CurveError::ConstantTerm { coordinate } => write!(
                f,
                "coordinate {coordinate} has a nonzero constant term; the germ must vanish at t = 0"
            ),
            CurveError::TruncBelowInput {
                trunc,
                max_exponent,
            } => write!(
                f,
                "truncation {trunc} must exceed the largest input exponent {max_exponent}"
            ),
        }
    }
}

impl std::error::Error for CurveError {}

impl From<ParseError> for CurveError {
    fn from(e: ParseError) -> Self {
        CurveError::Parse(e)
    }
}

/// A parsed curve together with its source and precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveExpression {
    pub source: String,
    pub germ: PlaneCurveGerm,
    pub trunc: u32,
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    index: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            chars: text
                .chars()
                .enumerate()
                .filter(|(_, c)| !c.is_whitespace())
                .collect(),
            index: 0,
            text,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.index).map(|&(_, c)| c)
    }

    fn position(&self) -> usize {
        self.chars
            .get(self.index)
            .map_or_else(|| self.text.chars().count(), |&(p, _)| p)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.index += 1;
            true
        } else {
            false
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.position(),
            message: message.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.error(format!("expected '{c}', found '{found}'")),
                None => self.error(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn digits(&mut self) -> Result<String, ParseError> {
        let mut out = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            out.push(c);
            self.index += 1;
        }
        if out.is_empty() {
            return match self.peek() {
                Some(found) => self.error(format!("expected a number, found '{found}'")),
                None => self.error("expected a number, found end of input"),
            };
        }
        Ok(out)
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        Ok(self.digits()?.parse().expect("digits parse as an integer"))
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let at = self.position();
        self.digits()?.parse().map_err(|_| ParseError {
            position: at,
            message: "exponent out of range".into(),
        })
    }

    fn at_end(&self) -> bool {
        self.index == self.chars.len()
    }
}

fn coefficient(cur: &mut Cursor) -> Result<Rational, ParseError> {
    if cur.eat('(') {
        let negative = cur.eat('-');
        let p = cur.integer()?;
        cur.expect('/')?;
        let at = cur.position();
        let q = cur.integer()?;
        if q.is_zero() {
            return Err(ParseError {
                position: at,
                message: "zero denominator".into(),
            });
        }
        cur.expect(')')?;
        let p = if negative { -p } else { p };
        Ok(Rational::new(p, q))
    } else {
        Ok(Rational::from_integer(cur.integer()?))
    }
}

fn term(cur: &mut Cursor) -> Result<(u32, Rational), ParseError> {
    let coef = match cur.peek() {
        Some('t') => Rational::from_integer(1.into()),
        _ => {
            let c = coefficient(cur)?;
            if !cur.eat('*') {
                return Ok((0, c));
            }
            c
        }
    };
    cur.expect('t')?;
    let exp = if cur.eat('^') { cur.exponent()? } else { 1 };
    Ok((exp, coef))
}

fn poly(cur: &mut Cursor) -> Result<BTreeMap<u32, Rational>, ParseError> {
    let mut terms: BTreeMap<u32, Rational> = BTreeMap::new();
    let mut negative = cur.eat('-');
    loop {
        let (e, c) = term(cur)?;
        let c = if negative { -c } else { c };
        *terms.entry(e).or_insert_with(Rational::zero) += c;
        if cur.eat('+') {
            negative = false;
        } else if cur.eat('-') {
            negative = true;
        } else {
            break;
        }
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(terms)
}

/// Parses `x(t), y(t)`. The truncation defaults to four times the largest
/// exponent present.
pub fn parse_curve(text: &str, trunc: Option<u32>) -> Result<CurveExpression, CurveError> {
    let mut cur = Cursor::new(text);
    let x = poly(&mut cur)?;
    cur.expect(',')?;
    let y = poly(&mut cur)?;
    if !cur.at_end() {
        return Err(CurveError::Parse(ParseError {
            position: cur.position(),
            message: "unexpected trailing input".into(),
        }));
    }
    for (name, p) in [('x', &x), ('y', &y)] {
        if p.contains_key(&0) {
            return Err(CurveError::ConstantTerm { coordinate: name });
        }
    }
    let max_exponent = x.keys().chain(y.keys()).copied().max().unwrap_or(0);
    let trunc = match trunc {
        Some(t) if t <= max_exponent => {
            return Err(CurveError::TruncBelowInput {
                trunc: t,
                max_exponent,
            })
        }
        Some(t) => t,
        None => default_trunc(max_exponent),
    };
    let series = |p: BTreeMap<u32, Rational>| TruncatedSeries::from_terms(p, trunc);
    let germ = PlaneCurveGerm::new(series(x), series(y)).map_err(|_| {
        CurveError::Parse(ParseError {
            position: 0,
            message: "both coordinates are zero".into(),
        })
    })?;
    Ok(CurveExpression {
        source: text.to_string(),
        germ,
        trunc,
    })
}

/// Parses a polynomial in `x1, x2, ...` with `+ - * ^` and parentheses.
pub fn parse_polynomial(text: &str) -> Result<Polynomial, ParseError> {
    let mut cur = Cursor::new(text);
    let p = sum(&mut cur)?;
    if !cur.at_end() {
        return cur.error("unexpected trailing input");
    }
    Ok(p)
}

fn sum(cur: &mut Cursor) -> Result<Polynomial, ParseError> {
    let mut acc = if cur.eat('-') {
        -&product(cur)?
    } else {
        product(cur)?
    };
    loop {
        if cur.eat('+') {
            acc = &acc + &product(cur)?;
        } else if cur.eat('-') {
            acc = &acc - &product(cur)?;
        } else {
            return Ok(acc);
        }
    }
}

fn product(cur: &mut Cursor) -> Result<Polynomial, ParseError> {
    let mut acc = power(cur)?;
    while cur.eat('*') {
        acc = &acc * &power(cur)?;
    }
    Ok(acc)
}

fn power(cur: &mut Cursor) -> Result<Polynomial, ParseError> {
    let base = atom(cur)?;
    if cur.eat('^') {
        let n = cur.exponent()?;
        return Ok(base.pow(n));
    }
    Ok(base)
}

fn atom(cur: &mut Cursor) -> Result<Polynomial, ParseError> {
    match cur.peek() {
        Some('(') => {
            cur.index += 1;
            let inner = sum(cur)?;
            cur.expect(')')?;
            Ok(inner)
        }
        Some('x') => {
            cur.index += 1;
            let at = cur.position();
            let k = cur.exponent()?;
            if k == 0 {
                return Err(ParseError {
                    position: at,
                    message: "generators are numbered from x1".into(),
                });
            }
            Ok(Polynomial::generator(k as usize))
        }
        Some(c) if c.is_ascii_digit() => Ok(Polynomial::constant(cur.integer()?)),
        Some(c) => cur.error(format!("unexpected '{c}'")),
        None => cur.error("unexpected end of input"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, r: i64) -> Rational {
        Rational::new(p.into(), r.into())
    }

    #[test]
    fn curves() {
        let c = parse_curve("t^3, t^4", None).unwrap();
        assert_eq!(c.trunc, 16);
        assert_eq!(c.germ, PlaneCurveGerm::monomial(3, 4));
        let c = parse_curve("t^2, t^3 + (1/2)*t^5", None).unwrap();
        assert_eq!(c.germ.y().coeff(5), Some(&q(1, 2)));
        let c = parse_curve(" -3*t^2+t ,  (-2/3)*t^4 - t^4", Some(9)).unwrap();
        assert_eq!(c.germ.x().coeff(2), Some(&q(-3, 1)));
        assert_eq!(c.germ.y().coeff(4), Some(&q(-5, 3)));
        assert_eq!(c.trunc, 9);
    }

    #[test]
    fn curve_errors() {
        assert_eq!(
            parse_curve("t^2, 1 + t^3", None),
            Err(CurveError::ConstantTerm { coordinate: 'y' })
        );
        let err = |s| match parse_curve(s, None) {
            Err(CurveError::Parse(e)) => e.position,
            other => panic!("{other:?}"),
        };
        assert_eq!(err("t^2 t^3"), 4);
        assert_eq!(err("t^2, t^"), 7);
        assert_eq!(err("t^2, (1/0)*t"), 8);
        assert_eq!(err("t^2, t^3,"), 8);
        assert_eq!(err("0, 0"), 0);
        assert!(matches!(
            parse_curve("t^2, t^9", Some(9)),
            Err(CurveError::TruncBelowInput { .. })
        ));
    }

    #[test]
    fn display_round_trip() {
        for s in [
            "t^2, t^3 + (1/2)*t^5",
            "-3*t^2 + t, (2/3)*t^4 - t^7",
            "t, 0",
        ] {
            let c = parse_curve(s, None).unwrap();
            let again = parse_curve(&c.germ.to_string(), Some(c.trunc)).unwrap();
            assert_eq!(again.germ, c.germ);
        }
    }

    #[test]
    fn polynomials() {
        let p = parse_polynomial("(x1 + x2)*(x1 - x2)").unwrap();
        assert_eq!(p.to_string(), "-x2^2 + x1^2");
        assert_eq!(
            parse_polynomial("-x2^2 + 3").unwrap().to_string(),
            "3 - x2^2"
        );
        assert!(parse_polynomial("x0").is_err());
        assert_eq!(parse_polynomial("x1 +").unwrap_err().position, 4);
        assert_eq!(parse_polynomial("2 x1").unwrap_err().position, 2);
    }
}
