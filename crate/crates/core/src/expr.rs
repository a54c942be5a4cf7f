//! Arithmetic expressions over `t` (or `x`) and `t1..tN` (or `x1..xN`).
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | 'pi' | 'e' | var | name '(' expr ')' | '(' expr ')'
//! ```
//! Functions: `exp`, `ln`, `sqrt`, `abs`, `sin`, `cos`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::func::Func;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Call {
    Exp,
    Ln,
    Sqrt,
    Abs,
    Sin,
    Cos,
}

impl Call {
    const ALL: [(&'static str, Call); 7] = [
        ("exp", Call::Exp),
        ("ln", Call::Ln),
        ("log", Call::Ln),
        ("sqrt", Call::Sqrt),
        ("abs", Call::Abs),
        ("sin", Call::Sin),
        ("cos", Call::Cos),
    ];

    fn name(self) -> &'static str {
        Self::ALL
            .iter()
            .find(|(_, c)| *c == self)
            .map(|(n, _)| *n)
            .unwrap_or("?")
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Call::Exp => v.exp(),
            Call::Ln => v.ln(),
            Call::Sqrt => v.sqrt(),
            Call::Abs => v.abs(),
            Call::Sin => v.sin(),
            Call::Cos => v.cos(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    /// Zero-based variable index.
    Var(usize),
    Neg(Box<Node>),
    Bin(char, Box<Node>, Box<Node>),
    Call(Call, Box<Node>),
}

impl Node {
    fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Node::Num(v) => *v,
            Node::Var(i) => x[*i],
            Node::Neg(a) => -a.eval(x),
            Node::Bin(op, a, b) => {
                let (a, b2) = (a.eval(x), b);
                match op {
                    '+' => a + b2.eval(x),
                    '-' => a - b2.eval(x),
                    '*' => a * b2.eval(x),
                    '/' => a / b2.eval(x),
                    _ => match **b2 {
                        Node::Num(p) if p.fract() == 0.0 && p.abs() <= 64.0 => a.powi(p as i32),
                        _ => a.powf(b2.eval(x)),
                    },
                }
            }
            Node::Call(c, a) => c.apply(a.eval(x)),
        }
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Node::Num(_) => None,
            Node::Var(i) => Some(*i),
            Node::Neg(a) | Node::Call(_, a) => a.max_var(),
            Node::Bin(_, a, b) => a.max_var().max(b.max_var()),
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, one_dim: bool) -> fmt::Result {
        match self {
            Node::Num(v) => write!(f, "{v}"),
            Node::Var(i) if one_dim => write!(
                f,
                "t{}",
                if *i == 0 {
                    String::new()
                } else {
                    (i + 1).to_string()
                }
            ),
            Node::Var(i) => write!(f, "t{}", i + 1),
            Node::Neg(a) => {
                write!(f, "(-")?;
                a.write(f, one_dim)?;
                write!(f, ")")
            }
            Node::Bin(op, a, b) => {
                write!(f, "(")?;
                a.write(f, one_dim)?;
                write!(f, "{op}")?;
                b.write(f, one_dim)?;
                write!(f, ")")
            }
            Node::Call(c, a) => {
                write!(f, "{}(", c.name())?;
                a.write(f, one_dim)?;
                write!(f, ")")
            }
        }
    }
}

/// A parsed expression.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    root: Arc<Node>,
    source: String,
}

impl Expression {
    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Parser {
            chars: src.chars().collect(),
            pos: 0,
        };
        let root = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(Error::parse(
                p.pos,
                format!("unexpected '{}'", p.chars[p.pos]),
            ));
        }
        Ok(Self {
            root: Arc::new(fold(root)),
            source: src.to_string(),
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Number of variables referenced (highest index used).
    pub fn arity(&self) -> usize {
        self.root.max_var().map_or(0, |i| i + 1)
    }

    pub fn constant_value(&self) -> Option<f64> {
        match *self.root {
            Node::Num(v) => Some(v),
            _ => None,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.root.eval(x)
    }

    /// A function of `dim` variables; the label is the canonical form.
    pub fn to_func(&self, dim: usize) -> Result<Func> {
        if self.arity() > dim {
            return Err(Error::usage(format!(
                "expression '{}' uses {} variables but the domain has {dim}",
                self.source,
                self.arity()
            )));
        }
        if let Some(c) = self.constant_value() {
            return Ok(Func::constant(dim, c));
        }
        let root = Arc::clone(&self.root);
        let label = self.to_string();
        Ok(Func::multivariate(dim, move |x| root.eval(x)).with_label(label))
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.write(f, self.arity() <= 1)
    }
}

/// Parses `src` into a function of `dim` variables.
pub fn parse_function(src: &str, dim: usize) -> Result<Func> {
    Expression::parse(src)?.to_func(dim)
}

/// Collapses constant subtrees.
fn fold(node: Node) -> Node {
    match node {
        Node::Neg(a) => match fold(*a) {
            Node::Num(v) => Node::Num(-v),
            a => Node::Neg(Box::new(a)),
        },
        Node::Bin(op, a, b) => {
            let (a, b) = (fold(*a), fold(*b));
            match (&a, &b) {
                (Node::Num(_), Node::Num(_)) => {
                    Node::Num(Node::Bin(op, Box::new(a), Box::new(b)).eval(&[]))
                }
                _ => Node::Bin(op, Box::new(a), Box::new(b)),
            }
        }
        Node::Call(c, a) => match fold(*a) {
            Node::Num(v) => Node::Num(c.apply(v)),
            a => Node::Call(c, Box::new(a)),
        },
        leaf => leaf,
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if self.peek() == Some('+') {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Node::Bin('^', Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        let start = match self.peek() {
            None => return Err(Error::parse(self.pos, "unexpected end of expression")),
            Some(_) => self.pos,
        };
        let c = self.chars[start];
        if c == '(' {
            self.pos += 1;
            let inner = self.expr()?;
            return self.close(inner, start);
        }
        if c.is_ascii_digit() || c == '.' {
            return self.number();
        }
        if c.is_ascii_alphabetic() {
            let mut end = start;
            while end < self.chars.len() && self.chars[end].is_ascii_alphabetic() {
                end += 1;
            }
            let name: String = self.chars[start..end].iter().collect();
            self.pos = end;
            if name == "t" || name == "x" {
                let digits_end = (end..self.chars.len())
                    .find(|&i| !self.chars[i].is_ascii_digit())
                    .unwrap_or(self.chars.len());
                if digits_end == end {
                    return Ok(Node::Var(0));
                }
                let idx: usize = self.chars[end..digits_end]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .unwrap_or(0);
                if idx == 0 {
                    return Err(Error::parse(end, "variable indices start at 1"));
                }
                self.pos = digits_end;
                return Ok(Node::Var(idx - 1));
            }
            match name.as_str() {
                "pi" => return Ok(Node::Num(std::f64::consts::PI)),
                "e" => return Ok(Node::Num(std::f64::consts::E)),
                _ => {}
            }
            let call = Call::ALL
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, c)| *c)
                .ok_or_else(|| Error::parse(start, format!("unknown name '{name}'")))?;
            if self.peek() != Some('(') {
                return Err(Error::parse(self.pos, format!("expected '(' after {name}")));
            }
            let open = self.pos;
            self.pos += 1;
            let arg = self.expr()?;
            let arg = self.close(arg, open)?;
            return Ok(Node::Call(call, Box::new(arg)));
        }
        Err(Error::parse(start, format!("unexpected '{c}'")))
    }

    fn close(&mut self, inner: Node, open: usize) -> Result<Node> {
        if self.peek() == Some(')') {
            self.pos += 1;
            Ok(inner)
        } else {
            Err(Error::parse(
                self.pos,
                format!("unclosed '(' opened at {open}"),
            ))
        }
    }

    fn number(&mut self) -> Result<Node> {
        let start = self.pos;
        let n = self.chars.len();
        let mut end = start;
        while end < n && (self.chars[end].is_ascii_digit() || self.chars[end] == '.') {
            end += 1;
        }
        if end < n && (self.chars[end] == 'e' || self.chars[end] == 'E') {
            let mut k = end + 1;
            if k < n && (self.chars[k] == '+' || self.chars[k] == '-') {
                k += 1;
            }
            if k < n && self.chars[k].is_ascii_digit() {
                while k < n && self.chars[k].is_ascii_digit() {
                    k += 1;
                }
                end = k;
            }
        }
        let text: String = self.chars[start..end].iter().collect();
        self.pos = end;
        text.parse::<f64>()
            .map(Node::Num)
            .map_err(|_| Error::parse(start, format!("malformed number '{text}'")))
    }
}
