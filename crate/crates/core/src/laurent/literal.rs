//! Text literals for Laurent elements.
//!
//! ```text
//! laurent  := term (("+"|"-") term)* ("+" "O(" tpow ")")? | "0"
//! term     := coef ("*"? tpow)? | tpow
//! tpow     := "t" ("^" int)?
//! coef     := rat | "(" rat (("+"|"-") rat? "i")? ")"
//! rat      := int ("/" posint)?
//! ```
//! Whitespace is insignificant. The optional `O(t^N)` tail marks an element
//! known only modulo `t^N`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{GaussianRational, Laurent, Precision};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", b as char)))
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let begin = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if begin == self.pos {
            return Err(self.err("expected digits"));
        }
        let s = std::str::from_utf8(&self.src[begin..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digit run parses"))
    }

    fn signed_int(&mut self) -> Result<BigInt> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let v = self.digits()?;
        Ok(if neg { -v } else { v })
    }

    fn rat(&mut self, allow_sign: bool) -> Result<BigRational> {
        let num = if allow_sign { self.signed_int()? } else { self.digits()? };
        if self.eat(b'/') {
            let at = self.pos;
            let den = self.digits()?;
            if den.is_zero() {
                return Err(Error::Syntax { pos: at, msg: "zero denominator".into() });
            }
            return Ok(BigRational::new(num, den));
        }
        Ok(BigRational::from_integer(num))
    }

    fn coef(&mut self) -> Result<GaussianRational> {
        if !self.eat(b'(') {
            return Ok(GaussianRational::real(self.rat(false)?));
        }
        let re = self.rat(true)?;
        let mut im = BigRational::zero();
        if let Some(sign @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            im = if self.peek() == Some(b'i') { BigRational::one() } else { self.rat(false)? };
            self.expect(b'i')?;
            if sign == b'-' {
                im = -im;
            }
        }
        self.expect(b')')?;
        Ok(GaussianRational::new(re, im))
    }

    fn exponent(&mut self) -> Result<i64> {
        if !self.eat(b'^') {
            return Ok(1);
        }
        let at = self.pos;
        let v = self.signed_int()?;
        i64::try_from(v).map_err(|_| Error::Syntax { pos: at, msg: "exponent out of range".into() })
    }

    fn tpow(&mut self) -> Result<i64> {
        self.expect(b't')?;
        self.exponent()
    }

    fn term(&mut self) -> Result<(i64, GaussianRational)> {
        match self.peek() {
            Some(b't') => Ok((self.tpow()?, GaussianRational::one())),
            Some(b'(') | Some(b'0'..=b'9') => {
                let c = self.coef()?;
                if self.eat(b'*') {
                    return Ok((self.tpow()?, c));
                }
                if self.peek() == Some(b't') {
                    return Ok((self.tpow()?, c));
                }
                Ok((0, c))
            }
            Some(_) => Err(self.err("expected a term")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    /// `O(t^N)` after the leading `O` has been seen.
    fn big_o(&mut self) -> Result<i64> {
        self.expect(b'O')?;
        self.expect(b'(')?;
        let n = self.tpow()?;
        self.expect(b')')?;
        Ok(n)
    }
}

pub(super) fn parse(text: &str) -> Result<Laurent> {
    let mut cur = Cursor { src: text.as_bytes(), pos: 0 };
    let mut terms = Vec::new();
    let mut prec = Precision::Exact;
    let mut negate = cur.eat(b'-');
    if !negate {
        cur.eat(b'+');
    }
    loop {
        if cur.peek() == Some(b'O') {
            if negate {
                return Err(cur.err("an O(t^N) tail cannot be negated"));
            }
            prec = Precision::ModuloDegree(cur.big_o()?);
            if cur.peek().is_some() {
                return Err(cur.err("O(t^N) must be the last term"));
            }
            break;
        }
        let (e, c) = cur.term()?;
        terms.push((e, if negate { -c } else { c }));
        match cur.peek() {
            None => break,
            Some(b'+') => negate = false,
            Some(b'-') => negate = true,
            Some(_) => return Err(cur.err("expected '+', '-' or end of input")),
        }
        cur.pos += 1;
    }
    let exact = Laurent::from_terms(terms);
    Ok(match prec {
        Precision::Exact => exact,
        Precision::ModuloDegree(n) => exact.truncate(n),
    })
}

fn tpow_text(e: i64) -> String {
    if e == 1 {
        "t".to_string()
    } else {
        format!("t^{e}")
    }
}

pub(super) fn format(x: &Laurent) -> String {
    let mut out = String::new();
    for (e, c) in x.terms() {
        let (neg, body) = if c.is_real() {
            let mag = c.re().abs();
            let body = if e == 0 {
                mag.to_string()
            } else if mag.is_one() {
                tpow_text(e)
            } else {
                format!("{}*{}", mag, tpow_text(e))
            };
            (c.re().is_negative(), body)
        } else if e == 0 {
            (false, c.to_literal())
        } else {
            (false, format!("{}*{}", c.to_literal(), tpow_text(e)))
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    match x.precision() {
        Precision::Exact if out.is_empty() => "0".to_string(),
        Precision::Exact => out,
        Precision::ModuloDegree(n) if out.is_empty() => format!("O({})", tpow_text(n)),
        Precision::ModuloDegree(n) => format!("{out} + O({})", tpow_text(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
        GaussianRational::new(BigRational::new(re.0.into(), re.1.into()), BigRational::new(im.0.into(), im.1.into()))
    }

    #[test]
    fn parses_examples() {
        let a = parse("t^-2 + 3*t").unwrap();
        assert_eq!(a, Laurent::from_int_terms(&[(-2, 1), (1, 3)]));
        assert!(parse("0").unwrap().is_exact_zero());
        let c = parse("(1/2+3/4i)*t^5").unwrap();
        assert_eq!(c, Laurent::monomial(gr((1, 2), (3, 4)), 5));
        assert_eq!(parse("-t").unwrap(), Laurent::from_int_terms(&[(1, -1)]));
    }

    #[test]
    fn whitespace_and_optional_star() {
        assert_eq!(parse(" 2 t ^ -1-  t").unwrap(), Laurent::from_int_terms(&[(-1, 2), (1, -1)]));
        assert_eq!(parse("(2-i)t").unwrap(), Laurent::monomial(GaussianRational::from_parts(2, -1), 1));
        assert_eq!(parse("(-1/3)").unwrap(), Laurent::constant(GaussianRational::from_ratio(-1, 3)));
    }

    #[test]
    fn big_o_tail() {
        let x = parse("1 + t + O(t^3)").unwrap();
        assert_eq!(x.precision(), Precision::ModuloDegree(3));
        assert_eq!(format(&x), "1 + t + O(t^3)");
        assert_eq!(format(&parse("O(t^-2)").unwrap()), "O(t^-2)");
    }

    #[test]
    fn syntax_errors_report_position() {
        assert_eq!(parse("t^").unwrap_err(), Error::Syntax { pos: 2, msg: "expected digits".into() });
        assert!(matches!(parse("3 * * t"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse("1/0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse("t + "), Err(Error::Syntax { .. })));
        assert!(matches!(parse("x"), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse("O(t^2) + 1"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format(&parse("3*t + t^-2").unwrap()), "t^-2 + 3*t");
        assert_eq!(format(&parse("-1 - 1/2*t^4").unwrap()), "-1 - 1/2*t^4");
        assert_eq!(format(&parse("(0+i) - (1-2i)t").unwrap()), "(0+i) + (-1+2i)*t");
        assert_eq!(format(&parse("t - t").unwrap()), "0");
    }
}
