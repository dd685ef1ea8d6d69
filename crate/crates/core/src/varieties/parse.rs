//! Recursive-descent parser for polynomial expressions such as
//! `t^2+1` or `x*y - 2*z^2`, reduced modulo a prime.

use std::collections::BTreeMap;

/// Sparse polynomial: exponent vector (one entry per variable) to a
/// coefficient in `[0, p)`.
pub type Sparse = BTreeMap<Vec<u32>, u64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse polynomial at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    vars: &'a [char],
    p: u64,
}

fn add_into(p: u64, acc: &mut Sparse, other: &Sparse, sign: u64) {
    for (e, &c) in other {
        let entry = acc.entry(e.clone()).or_insert(0);
        *entry = (*entry + c * sign) % p;
        if *entry == 0 {
            acc.remove(e);
        }
    }
}

fn mul(p: u64, a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (ea, &ca) in a {
        for (eb, &cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let entry = out.entry(e).or_insert(0);
            *entry = (*entry + ca * cb) % p;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn constant(&self, c: u64) -> Sparse {
        let mut m = Sparse::new();
        if c % self.p != 0 {
            m.insert(vec![0; self.vars.len()], c % self.p);
        }
        m
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        match text.parse::<u64>() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("expected a number")
            }
        }
    }

    fn expr(&mut self) -> Result<Sparse, ParseError> {
        let mut acc = Sparse::new();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.p - 1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            add_into(self.p, &mut acc, &t, sign);
            sign = match self.peek() {
                Some(b'+') => 1,
                Some(b'-') => self.p - 1,
                _ => return Ok(acc),
            };
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Sparse, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                }
                // implicit multiplication, e.g. `2x` or `x(y+z)`
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() => {}
                _ => return Ok(acc),
            }
            let f = self.power()?;
            acc = mul(self.p, &acc, &f);
        }
    }

    fn power(&mut self) -> Result<Sparse, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.number()?;
            if e > 64 {
                return self.err("exponent too large");
            }
            let mut acc = self.constant(1);
            for _ in 0..e {
                acc = mul(self.p, &acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Sparse, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                Ok(self.constant(n))
            }
            Some(c) => match self.vars.iter().position(|&v| v as u8 == c) {
                Some(i) => {
                    self.pos += 1;
                    let mut e = vec![0; self.vars.len()];
                    e[i] = 1;
                    Ok(Sparse::from([(e, 1)]))
                }
                None => self.err(format!("unexpected character '{}'", c as char)),
            },
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text` as a polynomial in `vars` with coefficients mod `p`.
pub fn parse_poly(text: &str, vars: &[char], p: u64) -> Result<Sparse, ParseError> {
    let mut parser = Parser {
        s: text.as_bytes(),
        pos: 0,
        vars,
        p,
    };
    let out = parser.expr()?;
    if parser.peek().is_some() {
        return parser.err("trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn univariate() {
        let f = parse_poly("t^2 + 1", &['t'], 3).unwrap();
        assert_eq!(f, Sparse::from([(vec![2], 1), (vec![0], 1)]));
        let g = parse_poly("-(t+1)*(t-1)", &['t'], 5).unwrap();
        assert_eq!(g, Sparse::from([(vec![2], 4), (vec![0], 1)]));
        assert!(parse_poly("3", &['t'], 3).unwrap().is_empty());
    }

    #[test]
    fn trivariate() {
        let f = parse_poly("x*y - z^2", &['x', 'y', 'z'], 3).unwrap();
        assert_eq!(f, Sparse::from([(vec![1, 1, 0], 1), (vec![0, 0, 2], 2)]));
        let g = parse_poly("2x(y+z)", &['x', 'y', 'z'], 7).unwrap();
        assert_eq!(g, Sparse::from([(vec![1, 1, 0], 2), (vec![1, 0, 1], 2)]));
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_poly("x + w", &['x', 'y', 'z'], 3).unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(parse_poly("(x", &['x'], 3).is_err());
        assert!(parse_poly("x y)", &['x', 'y'], 3).is_err());
    }
}
