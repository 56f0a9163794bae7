//! Compact text form of distributions.
//!
//! ```text
//! model   := [number '+'] [number '*'] atom
//! atom    := name ['(' args ')']
//! args    := number {',' number} | weighted {',' weighted}   (mixture only)
//! weighted:= number '*' model
//! ```
//!
//! Names: `normal(mu, sigma)`, `t(nu[, loc, scale])`, `lomax(alpha, lambda)`,
//! `nig(alpha, beta)` (mean 0, variance 1), `nig(alpha, beta, mu, delta)`,
//! `logistic(loc, s)`, `laplace(loc, b)`, `uniform(a, b)`,
//! `exponential(rate)` and `mixture(w*model, ...)`. Parameters may be left
//! out for the standard member, e.g. `normal` or `logistic()`.

use super::ContinuousModel;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn peek_number(&self) -> bool {
        let r = self.rest().trim_start();
        r.starts_with(|c: char| c.is_ascii_digit() || c == '.' || c == '-' || c == '+')
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let bytes = self.rest().as_bytes();
        let mut end = 0;
        if end < bytes.len() && (bytes[end] == b'-' || bytes[end] == b'+') {
            end += 1;
        }
        let mut prev = 0u8;
        while end < bytes.len() {
            let b = bytes[end];
            let ok = b.is_ascii_digit()
                || b == b'.'
                || b == b'e'
                || b == b'E'
                || ((b == b'-' || b == b'+') && (prev == b'e' || prev == b'E'));
            if !ok {
                break;
            }
            prev = b;
            end += 1;
        }
        let text = &self.rest()[..end];
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                self.pos += end;
                Ok(v)
            }
            _ => self.err(format!("invalid number '{text}'")),
        }
    }

    fn name(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let r = self.rest();
        let end = r
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(r.len());
        if end == 0 || !r.starts_with(|c: char| c.is_ascii_alphabetic()) {
            return self.err("expected a distribution name");
        }
        self.pos += end;
        Ok(&r[..end])
    }

    fn model(&mut self) -> Result<ContinuousModel> {
        let start = self.pos;
        if self.peek_number() {
            let first = self.number()?;
            if self.eat('+') {
                let scale = if self.peek_number() {
                    let s = self.number()?;
                    self.expect('*')?;
                    s
                } else {
                    1.0
                };
                let base = self.atom()?;
                return base.affine(scale, first).map_err(|e| self.at(start, e));
            }
            self.expect('*')?;
            let base = self.atom()?;
            return base.affine(first, 0.0).map_err(|e| self.at(start, e));
        }
        self.atom()
    }

    fn at(&self, position: usize, e: Error) -> Error {
        match e {
            Error::Parse { .. } => e,
            other => Error::Parse {
                position,
                message: other.to_string(),
            },
        }
    }

    fn atom(&mut self) -> Result<ContinuousModel> {
        let start = self.pos;
        let name = self.name()?.to_ascii_lowercase();
        if name == "mixture" {
            self.expect('(')?;
            let mut parts = Vec::new();
            loop {
                let w = self.number()?;
                self.expect('*')?;
                parts.push((w, self.model()?));
                if !self.eat(',') {
                    break;
                }
            }
            self.expect(')')?;
            return ContinuousModel::mixture(parts).map_err(|e| self.at(start, e));
        }
        let mut args = Vec::new();
        if self.eat('(') && !self.eat(')') {
            loop {
                args.push(self.number()?);
                if !self.eat(',') {
                    break;
                }
            }
            self.expect(')')?;
        }
        let arity = |ok: &[usize]| -> Result<()> {
            if ok.contains(&args.len()) {
                Ok(())
            } else {
                Err(Error::Parse {
                    position: start,
                    message: format!("{name} takes {ok:?} parameters, got {}", args.len()),
                })
            }
        };
        let model = match name.as_str() {
            "normal" | "norm" | "gauss" => {
                arity(&[0, 2])?;
                if args.is_empty() {
                    Ok(ContinuousModel::standard_normal())
                } else {
                    ContinuousModel::normal(args[0], args[1])
                }
            }
            "t" | "student" | "studentt" => {
                arity(&[1, 3])?;
                if args.len() == 1 {
                    ContinuousModel::student_t(args[0])
                } else {
                    ContinuousModel::student_t_ls(args[0], args[1], args[2])
                }
            }
            "lomax" | "pareto2" => {
                arity(&[1, 2])?;
                ContinuousModel::lomax(args[0], args.get(1).copied().unwrap_or(1.0))
            }
            "nig" => {
                arity(&[2, 4])?;
                if args.len() == 2 {
                    ContinuousModel::nig_standardized(args[0], args[1])
                } else {
                    ContinuousModel::nig(args[0], args[1], args[2], args[3])
                }
            }
            "logistic" => {
                arity(&[0, 2])?;
                let (a, b) = if args.is_empty() { (0.0, 1.0) } else { (args[0], args[1]) };
                ContinuousModel::logistic(a, b)
            }
            "laplace" => {
                arity(&[0, 2])?;
                let (a, b) = if args.is_empty() { (0.0, 1.0) } else { (args[0], args[1]) };
                ContinuousModel::laplace(a, b)
            }
            "uniform" | "unif" => {
                arity(&[0, 2])?;
                let (a, b) = if args.is_empty() { (0.0, 1.0) } else { (args[0], args[1]) };
                ContinuousModel::uniform(a, b)
            }
            "exponential" | "exp" => {
                arity(&[0, 1])?;
                ContinuousModel::exponential(args.first().copied().unwrap_or(1.0))
            }
            _ => {
                self.pos = start;
                return self.err(format!("unknown distribution '{name}'"));
            }
        };
        model.map_err(|e| self.at(start, e))
    }
}

/// Parse a distribution from its text form, e.g. `lomax(3,1.7320508)`.
pub fn parse_model(text: &str) -> Result<ContinuousModel> {
    let mut p = Parser { src: text, pos: 0 };
    let m = p.model()?;
    p.skip_ws();
    if p.pos != text.len() {
        return p.err("unexpected trailing input");
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let l = parse_model("lomax(3,1.7320508)").unwrap();
        assert!((l.pdf(0.0) - 3.0 / 1.7320508).abs() < 1e-12);
        let t = parse_model("t(5)").unwrap();
        assert_eq!(t.mean().unwrap(), 0.0);
        let n = parse_model("nig(1,0.5)").unwrap();
        assert!(n.mean().unwrap().abs() < 1e-14);
        assert!((n.variance().unwrap() - 1.0).abs() < 1e-14);
        let e = parse_model(" exponential( 2 ) ").unwrap();
        assert!((e.mean().unwrap() - 0.5).abs() < 1e-15);
        let a = parse_model("1.5 + -2*lomax(4, 1)").unwrap();
        assert!((a.mean().unwrap() - (1.5 - 2.0 / 3.0)).abs() < 1e-15);
        let m = parse_model("mixture(0.5*normal(0, 1), 0.5*t(5))").unwrap();
        assert_eq!(m.mean().unwrap(), 0.0);
    }

    #[test]
    fn reports_positions() {
        match parse_model("lomax(3,)") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 8),
            other => panic!("{other:?}"),
        }
        match parse_model("wibble(1)") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 0),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_model("t(5) x"), Err(Error::Parse { position: 5, .. })));
        assert!(matches!(parse_model("nig(1, 2)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_model("t(1, 2)"), Err(Error::Parse { .. })));
    }
}
