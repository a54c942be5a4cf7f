//! Textual capacity specifications.
//!
//! ```text
//! spec       := base ':' distortion [':norm']
//! base       := 'lebesgue:[' num ',' num ']'
//!             | 'lebesgue-simplex:' int
//!             | 'lebesgue-box:' '[' num ',' num ']' ('x' '[' num ',' num ']')*
//!             | 'discrete:{' num ':' num (',' num ':' num)* '}'
//! distortion := 'pow:' num | 'tab:' num (',' num)*
//! num        := decimal literal | 'inf'
//! ```

use std::fmt;

use super::{BaseMeasure, Capacity, Distortion};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected `{token}`")))
        }
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        if self.eat("inf") || self.eat("+inf") {
            return Ok(f64::INFINITY);
        }
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E')))
            .unwrap_or(self.rest().len());
        let text = &self.rest()[..len];
        let value = text
            .parse::<f64>()
            .map_err(|_| Error::parse(start, format!("expected a number, found `{text}`")))?;
        self.pos += len;
        Ok(value)
    }

    fn integer(&mut self) -> Result<usize> {
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest().len());
        let text = &self.rest()[..len];
        let value = text
            .parse::<usize>()
            .map_err(|_| Error::parse(start, format!("expected an integer, found `{text}`")))?;
        self.pos += len;
        Ok(value)
    }

    fn bracket_pair(&mut self) -> Result<(f64, f64)> {
        self.expect("[")?;
        let a = self.number()?;
        self.expect(",")?;
        let b = self.number()?;
        self.expect("]")?;
        Ok((a, b))
    }

    /// Maps a constructor's usage error onto the span that produced it.
    fn at(&self, start: usize, err: Error) -> Error {
        match err {
            Error::Usage(msg) | Error::Domain(msg) => Error::parse(start, msg),
            other => other,
        }
    }
}

pub(super) const BASE_TAGS: &str = "lebesgue, lebesgue-simplex, lebesgue-box, discrete";

pub(super) fn parse_spec(src: &str) -> Result<Capacity> {
    let mut c = Cursor {
        src: src.trim(),
        pos: 0,
    };
    let start = c.pos;
    let base = if c.eat("lebesgue-simplex:") {
        let dim = c.integer()?;
        BaseMeasure::simplex(dim).map_err(|e| c.at(start, e))?
    } else if c.eat("lebesgue-box:") {
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        loop {
            let (a, b) = c.bracket_pair()?;
            lo.push(a);
            hi.push(b);
            if !c.eat("x") {
                break;
            }
        }
        BaseMeasure::boxed(lo, hi).map_err(|e| c.at(start, e))?
    } else if c.eat("lebesgue:") {
        let (a, b) = c.bracket_pair()?;
        BaseMeasure::lebesgue(a, b).map_err(|e| c.at(start, e))?
    } else if c.eat("discrete:") {
        c.expect("{")?;
        let mut atoms = Vec::new();
        loop {
            let x = c.number()?;
            c.expect(":")?;
            let w = c.number()?;
            atoms.push((x, w));
            if !c.eat(",") {
                break;
            }
        }
        c.expect("}")?;
        BaseMeasure::discrete(atoms).map_err(|e| c.at(start, e))?
    } else {
        return Err(Error::parse(
            0,
            format!("unknown base measure; expected one of: {BASE_TAGS}"),
        ));
    };
    c.expect(":")?;
    let dstart = c.pos;
    let distortion = if c.eat("pow:") {
        Distortion::power(c.number()?).map_err(|e| c.at(dstart, e))?
    } else if c.eat("tab:") {
        let mut values = vec![c.number()?];
        while c.eat(",") {
            values.push(c.number()?);
        }
        Distortion::tabulated(values).map_err(|e| c.at(dstart, e))?
    } else {
        return Err(Error::parse(
            c.pos,
            "unknown distortion; expected one of: pow, tab",
        ));
    };
    let normalized = c.eat(":norm");
    if !c.rest().is_empty() {
        return Err(Error::parse(
            c.pos,
            format!("unexpected trailing input `{}`", c.rest()),
        ));
    }
    let built = if normalized {
        Capacity::normalized(base, distortion)
    } else {
        Capacity::new(base, distortion)
    };
    built.map_err(|e| match e {
        Error::Usage(msg) => Error::parse(0, msg),
        other => other,
    })
}

fn num(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{x}")
    }
}

pub(super) fn write_spec(cap: &Capacity, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match cap.base() {
        BaseMeasure::Lebesgue { lo, hi } => write!(f, "lebesgue:[{},{}]", num(*lo), num(*hi))?,
        BaseMeasure::LebesgueSimplex { dim } => write!(f, "lebesgue-simplex:{dim}")?,
        BaseMeasure::LebesgueBox { lo, hi } => {
            let axes: Vec<String> = lo
                .iter()
                .zip(hi)
                .map(|(a, b)| format!("[{},{}]", num(*a), num(*b)))
                .collect();
            write!(f, "lebesgue-box:{}", axes.join("x"))?
        }
        BaseMeasure::Discrete { atoms } => {
            let items: Vec<String> = atoms
                .iter()
                .map(|(x, w)| format!("{}:{}", num(*x), num(*w)))
                .collect();
            write!(f, "discrete:{{{}}}", items.join(","))?
        }
    }
    match cap.distortion() {
        Distortion::Power { alpha } => write!(f, ":pow:{}", num(*alpha))?,
        Distortion::Tabulated { values } => {
            let v: Vec<String> = values.iter().map(|x| num(*x)).collect();
            write!(f, ":tab:{}", v.join(","))?
        }
    }
    if cap.is_normalized() {
        write!(f, ":norm")?;
    }
    Ok(())
}
