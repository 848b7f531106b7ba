//! Text syntax for mappings and dilatations.
//!
//! ```text
//! map        = "identity" | "f0"
//!            | "fa" "(" "a" "=" num [ "," "gamma" "=" num ] ")"
//!            | "shear" "(" [ "gamma" "=" num "," ] [ "a" "=" num "," ] dilatation ")"
//!            | "strip" "(" "beta" "=" num "," dilatation ")"
//!            | "conv" "(" map "," map ")"
//! dilatation = "mobius" "(" "a" "=" num "," "theta" "=" num "," "gamma" "=" num ")"
//!            | "monomial" "(" "theta" "=" num "," "n" "=" int ")"
//!            | "reflected" "(" "a" "=" num "," "gamma" "=" num ")"
//! num        = term { ("+" | "-") term }
//! term       = factor { ("*" | "/") factor }
//! factor     = ["-" | "+"] ( number | "pi" | "(" num ")" )
//! ```
//!
//! Keyword arguments may appear in any order and default to 0 when omitted
//! (except `n`, which defaults to 1). Whitespace is ignored.
//!
//! ```
//! use harmconv::mapspec::MapExpr;
//! let m: MapExpr = "conv(f0, shear(gamma=pi/4, a=0, monomial(theta=0, n=2)))".parse().unwrap();
//! let f = m.build(64).unwrap();
//! assert_eq!(f.order(), 64);
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::convolution::harmonic_convolve;
use crate::error::{Error, Result};
use crate::mappings::{self, DilatationSpec, HarmonicMap};

/// Parsed `--map` expression.
#[derive(Debug, Clone, PartialEq)]
pub enum MapExpr {
    Identity,
    F0,
    Fa {
        a: f64,
        gamma: f64,
    },
    Shear {
        gamma: f64,
        a: f64,
        omega: DilatationSpec,
    },
    Strip {
        beta: f64,
        omega: DilatationSpec,
    },
    Conv(Box<MapExpr>, Box<MapExpr>),
}

impl MapExpr {
    pub fn build(&self, order: usize) -> Result<HarmonicMap> {
        match self {
            MapExpr::Identity => Ok(mappings::identity(order)),
            MapExpr::F0 => Ok(mappings::f0(order)),
            MapExpr::Fa { a, gamma } => mappings::f_a_gamma(*a, *gamma, order),
            MapExpr::Shear { gamma, a, omega } => mappings::shear_slanted(*gamma, *a, omega, order),
            MapExpr::Strip { beta, omega } => mappings::strip_map(*beta, omega, order),
            MapExpr::Conv(l, r) => Ok(harmonic_convolve(&l.build(order)?, &r.build(order)?)),
        }
    }
}

impl fmt::Display for MapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapExpr::Identity => write!(f, "identity"),
            MapExpr::F0 => write!(f, "f0"),
            MapExpr::Fa { a, gamma } => write!(f, "fa(a={a},gamma={gamma})"),
            MapExpr::Shear { gamma, a, omega } => write!(f, "shear(gamma={gamma},a={a},{omega})"),
            MapExpr::Strip { beta, omega } => write!(f, "strip(beta={beta},{omega})"),
            MapExpr::Conv(l, r) => write!(f, "conv({l},{r})"),
        }
    }
}

impl FromStr for MapExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser::new(s);
        let m = p.map()?;
        p.end()?;
        Ok(m)
    }
}

/// Parses a dilatation on its own, e.g. `mobius(a=0.5,theta=pi,gamma=0)`.
pub fn parse_dilatation(s: &str) -> Result<DilatationSpec> {
    let mut p = Parser::new(s);
    let d = p.dilatation()?;
    p.end()?;
    Ok(d)
}

/// Evaluates a numeric expression such as `3*pi/4`.
pub fn parse_number(s: &str) -> Result<f64> {
    let mut p = Parser::new(s);
    let v = p.num()?;
    p.end()?;
    Ok(v)
}

fn err(msg: impl Into<String>) -> Error {
    Error::MapSpec(msg.into())
}

enum Arg {
    Key(String, f64),
    Dil(DilatationSpec),
    Map(MapExpr),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
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
            Err(err(format!(
                "expected '{c}' at offset {} in {:?}",
                self.pos, self.src
            )))
        }
    }

    fn end(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(err(format!(
                "unexpected '{c}' at offset {} in {:?}",
                self.pos, self.src
            ))),
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek_raw() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(err(format!(
                "expected a name at offset {start} in {:?}",
                self.src
            )));
        }
        Ok(self.src[start..self.pos].to_string())
    }

    /// Optional parenthesized argument list.
    fn args(&mut self) -> Result<Vec<Arg>> {
        let mut out = Vec::new();
        if !self.eat('(') {
            return Ok(out);
        }
        if self.eat(')') {
            return Ok(out);
        }
        loop {
            let save = self.pos;
            let name = self.ident()?;
            if self.eat('=') {
                out.push(Arg::Key(name, self.num()?));
            } else {
                self.pos = save;
                if matches!(name.as_str(), "mobius" | "monomial" | "reflected") {
                    out.push(Arg::Dil(self.dilatation()?));
                } else {
                    out.push(Arg::Map(self.map()?));
                }
            }
            if self.eat(')') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn map(&mut self) -> Result<MapExpr> {
        let name = self.ident()?;
        let args = self.args()?;
        let mut a = Args::new(&name, args);
        let m = match name.as_str() {
            "identity" => MapExpr::Identity,
            "f0" => MapExpr::F0,
            "fa" => MapExpr::Fa {
                a: a.key("a", 0.0),
                gamma: a.key("gamma", 0.0),
            },
            "shear" => MapExpr::Shear {
                gamma: a.key("gamma", 0.0),
                a: a.key("a", 0.0),
                omega: a.dil()?,
            },
            "strip" => MapExpr::Strip {
                beta: a.key("beta", 0.0),
                omega: a.dil()?,
            },
            "conv" => {
                let l = a.map()?;
                let r = a.map()?;
                MapExpr::Conv(Box::new(l), Box::new(r))
            }
            other => return Err(err(format!("unknown mapping '{other}'"))),
        };
        a.finish()?;
        Ok(m)
    }

    fn dilatation(&mut self) -> Result<DilatationSpec> {
        let name = self.ident()?;
        let args = self.args()?;
        let mut a = Args::new(&name, args);
        let d = match name.as_str() {
            "mobius" => {
                DilatationSpec::mobius(a.key("a", 0.0), a.key("theta", 0.0), a.key("gamma", 0.0))?
            }
            "monomial" => {
                let n = a.key("n", 1.0);
                if n.fract() != 0.0 || !(1.0..=f64::from(u32::MAX)).contains(&n) {
                    return Err(err(format!("n = {n} must be a positive integer")));
                }
                DilatationSpec::monomial(a.key("theta", 0.0), n as u32)?
            }
            "reflected" => DilatationSpec::reflected(a.key("a", 0.0), a.key("gamma", 0.0))?,
            other => return Err(err(format!("unknown dilatation '{other}'"))),
        };
        a.finish()?;
        Ok(d)
    }

    fn num(&mut self) -> Result<f64> {
        let mut v = self.term()?;
        loop {
            if self.eat('+') {
                v += self.term()?;
            } else if self.eat('-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<f64> {
        let mut v = self.factor()?;
        loop {
            if self.eat('*') {
                v *= self.factor()?;
            } else if self.eat('/') {
                v /= self.factor()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn factor(&mut self) -> Result<f64> {
        if self.eat('-') {
            return Ok(-self.factor()?);
        }
        if self.eat('+') {
            return self.factor();
        }
        if self.eat('(') {
            let v = self.num()?;
            self.expect(')')?;
            return Ok(v);
        }
        self.skip_ws();
        let start = self.pos;
        if self.src[start..].starts_with("pi") {
            self.pos += 2;
            return Ok(PI);
        }
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() {
            let c = bytes[self.pos];
            let exp_sign = (c == b'-' || c == b'+')
                && self.pos > start
                && matches!(bytes[self.pos - 1], b'e' | b'E');
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.src[start..self.pos].parse().map_err(|_| {
            err(format!(
                "expected a number at offset {start} in {:?}",
                self.src
            ))
        })
    }
}

/// Argument list consumed by a constructor.
struct Args {
    owner: String,
    keys: Vec<(String, f64)>,
    dils: Vec<DilatationSpec>,
    maps: Vec<MapExpr>,
}

impl Args {
    fn new(owner: &str, args: Vec<Arg>) -> Self {
        let mut a = Args {
            owner: owner.into(),
            keys: Vec::new(),
            dils: Vec::new(),
            maps: Vec::new(),
        };
        for arg in args {
            match arg {
                Arg::Key(k, v) => a.keys.push((k, v)),
                Arg::Dil(d) => a.dils.push(d),
                Arg::Map(m) => a.maps.push(m),
            }
        }
        a.dils.reverse();
        a.maps.reverse();
        a
    }

    fn key(&mut self, name: &str, default: f64) -> f64 {
        match self.keys.iter().position(|(k, _)| k == name) {
            Some(i) => self.keys.remove(i).1,
            None => default,
        }
    }

    fn dil(&mut self) -> Result<DilatationSpec> {
        self.dils
            .pop()
            .ok_or_else(|| err(format!("{} needs a dilatation argument", self.owner)))
    }

    fn map(&mut self) -> Result<MapExpr> {
        self.maps
            .pop()
            .ok_or_else(|| err(format!("{} needs two mapping arguments", self.owner)))
    }

    fn finish(self) -> Result<()> {
        if let Some((k, _)) = self.keys.first() {
            return Err(err(format!("{} does not take '{k}'", self.owner)));
        }
        if !self.dils.is_empty() || !self.maps.is_empty() {
            return Err(err(format!("too many arguments to {}", self.owner)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(parse_number("1.5").unwrap(), 1.5);
        assert_eq!(parse_number("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_number("3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_number("(1-2)*3").unwrap(), -3.0);
        assert_eq!(parse_number("1e-3").unwrap(), 1e-3);
        assert_eq!(parse_number(" 2 - -1 ").unwrap(), 3.0);
        assert!(parse_number("1.2.3").is_err());
        assert!(parse_number("x").is_err());
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn named_maps() {
        assert_eq!("identity".parse::<MapExpr>().unwrap(), MapExpr::Identity);
        assert_eq!(" f0 ".parse::<MapExpr>().unwrap(), MapExpr::F0);
        assert_eq!(
            "fa(gamma=pi, a=0.5)".parse::<MapExpr>().unwrap(),
            MapExpr::Fa { a: 0.5, gamma: PI }
        );
        let m: MapExpr = "conv(f0, shear(gamma=0,a=0.5,mobius(a=0.5,theta=3.14159,gamma=0)))"
            .parse()
            .unwrap();
        let MapExpr::Conv(l, r) = m else { panic!() };
        assert_eq!(*l, MapExpr::F0);
        assert_eq!(
            *r,
            MapExpr::Shear {
                gamma: 0.0,
                a: 0.5,
                omega: DilatationSpec::mobius(0.5, 3.14159, 0.0).unwrap()
            }
        );
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "strip(beta=pi/3, monomial(theta=0.2, n=5))",
            "conv(fa(a=0.25,gamma=1), shear(gamma=1,a=0,reflected(a=0.5,gamma=2)))",
            "conv(identity, conv(f0, f0))",
        ] {
            let m: MapExpr = s.parse().unwrap();
            assert_eq!(m.to_string().parse::<MapExpr>().unwrap(), m);
        }
    }

    #[test]
    fn rejects_bad_input() {
        for s in [
            "",
            "f1",
            "conv(f0)",
            "conv(f0, f0, f0)",
            "shear(gamma=0)",
            "fa(b=1)",
            "fa(a=0.5",
            "strip(beta=1, monomial(n=1.5))",
            "strip(beta=1, monomial(n=0))",
            "f0 f0",
        ] {
            assert!(s.parse::<MapExpr>().is_err(), "{s}");
        }
        assert!(parse_dilatation("mobius(a=2)").is_err());
    }

    #[test]
    fn builds_and_validates() {
        let f = "conv(f0, f0)"
            .parse::<MapExpr>()
            .unwrap()
            .build(16)
            .unwrap();
        assert!((f.h.coeff(3) - num_complex::Complex64::from(4.0)).norm() < 1e-15);
        let bad = "shear(gamma=0, a=0.3, monomial(theta=0, n=1))"
            .parse::<MapExpr>()
            .unwrap();
        assert!(matches!(
            bad.build(16),
            Err(Error::NormalizationMismatch { .. })
        ));
        let strip = "strip(beta=0, monomial(theta=0, n=1))"
            .parse::<MapExpr>()
            .unwrap();
        assert!(strip.build(16).is_err());
    }
}
