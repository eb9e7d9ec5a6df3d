//! Closed-form expressions in the single variable `z`.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expression := term (('+' | '-') term)*
//! term       := factor (('*' | '/') factor)*
//! factor     := '-' factor | power
//! power      := atom ('^' factor)?
//! atom       := number | 'z' | fn '(' expression ')' | '(' expression ')'
//! fn         := sin | cos | exp | log | sqrt
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-z^2` is
//! `-(z^2)` while `2^-z` is still accepted.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::jets::{Elementary, Jet};
use crate::DEFAULT_ORDER;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    fn elementary(self) -> Elementary {
        match self {
            Func::Sin => Elementary::Sin,
            Func::Cos => Elementary::Cos,
            Func::Exp => Elementary::Exp,
            Func::Log => Elementary::Log,
            Func::Sqrt => Elementary::Sqrt,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        let mut p = Parser {
            src: text,
            pos: 0,
        };
        let e = p.expression()?;
        p.skip_ws();
        if p.pos < text.len() {
            return Err(p.error(format!("unexpected `{}`", p.rest_char())));
        }
        Ok(e)
    }

    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn binary(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    /// True if the expression does not mention `z`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) => true,
            Expr::Var => false,
            Expr::Neg(e) | Expr::Call(_, e) => e.is_constant(),
            Expr::Binary(_, l, r) => l.is_constant() && r.is_constant(),
        }
    }

    /// Jet of the expression at `z0`, capped at [`DEFAULT_ORDER`].
    pub fn eval_jet(&self, z0: f64, order: usize) -> Result<Jet> {
        Evaluator::default().eval_jet(self, z0, order)
    }

    /// Plain value at `z`.
    pub fn eval(&self, z: f64) -> Result<f64> {
        Ok(self.jet(z, 0)?.value())
    }

    /// Jet evaluation without an order cap, for internal callers that need
    /// more derivatives than user-facing evaluation allows.
    pub(crate) fn jet(&self, z0: f64, order: usize) -> Result<Jet> {
        let out = match self {
            Expr::Num(v) => Jet::constant(z0, *v, order),
            Expr::Var => Jet::variable(z0, order),
            Expr::Neg(e) => -e.jet(z0, order)?,
            Expr::Binary(op, l, r) => {
                let lj = l.jet(z0, order)?;
                match op {
                    BinOp::Add => lj + r.jet(z0, order)?,
                    BinOp::Sub => lj - r.jet(z0, order)?,
                    BinOp::Mul => lj * r.jet(z0, order)?,
                    BinOp::Div => {
                        let rj = r.jet(z0, order)?;
                        if rj.value() == 0.0 {
                            return Err(self.eval_error(z0, "division by zero"));
                        }
                        lj / rj
                    }
                    BinOp::Pow => {
                        let rj = r.jet(z0, order)?;
                        if r.is_constant() {
                            lj.powf(rj.value())
                                .map_err(|e| self.wrap_singular(z0, e))?
                        } else {
                            // x^y = exp(y·log x)
                            let log = lj.ln().map_err(|e| self.wrap_singular(z0, e))?;
                            (rj * log).exp()
                        }
                    }
                }
            }
            Expr::Call(f, arg) => arg
                .jet(z0, order)?
                .elementary(f.elementary())
                .map_err(|e| self.wrap_singular(z0, e))?,
        };
        if !out.is_finite() {
            return Err(self.eval_error(z0, "non-finite result"));
        }
        Ok(out)
    }

    fn eval_error(&self, z0: f64, msg: &str) -> Error {
        Error::Eval {
            node: self.to_string(),
            at: z0,
            message: msg.to_string(),
        }
    }

    fn wrap_singular(&self, z0: f64, e: Error) -> Error {
        match e {
            Error::Singular { what, .. } => self.eval_error(z0, &what),
            other => other,
        }
    }
}

impl FromStr for Expr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Expr> {
        Expr::parse(s)
    }
}

impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Expr {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Expr::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Fully parenthesized output that parses back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Var => write!(f, "z"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

/// Jet evaluation with a configurable order cap.
#[derive(Debug, Clone, Copy)]
pub struct Evaluator {
    pub max_order: usize,
}

impl Default for Evaluator {
    fn default() -> Self {
        Evaluator {
            max_order: DEFAULT_ORDER,
        }
    }
}

impl Evaluator {
    pub fn eval_jet(&self, expr: &Expr, z0: f64, order: usize) -> Result<Jet> {
        if order > self.max_order {
            return Err(Error::contract(format!(
                "order {order} exceeds the evaluation cap {}",
                self.max_order
            )));
        }
        expr.jet(z0, order)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: String) -> Error {
        Error::Parse {
            offset: self.pos,
            message,
        }
    }

    fn rest_char(&self) -> char {
        self.src[self.pos..].chars().next().unwrap_or(' ')
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expression(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some('+') => BinOp::Add,
                Some('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Expr::binary(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Some('*') => BinOp::Mul,
                Some('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Expr::binary(op, lhs, self.factor()?);
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Expr::binary(BinOp::Pow, base, self.factor()?));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input".into())),
            Some('(') => {
                let open = self.pos;
                self.pos += 1;
                let e = self.expression()?;
                if !self.eat(')') {
                    return Err(Error::Parse {
                        offset: open,
                        message: "unbalanced parenthesis".into(),
                    });
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let len = self.src[start..]
                    .find(|c: char| !c.is_ascii_alphanumeric() && c != '_')
                    .unwrap_or(self.src.len() - start);
                let name = &self.src[start..start + len];
                if name == "z" {
                    self.pos += len;
                    return Ok(Expr::Var);
                }
                let Some(func) = Func::from_name(name) else {
                    return Err(self.error(format!("unknown identifier `{name}`")));
                };
                self.pos += len;
                if !self.eat('(') {
                    return Err(self.error(format!("expected `(` after `{name}`")));
                }
                let open = self.pos - 1;
                let arg = self.expression()?;
                if !self.eat(')') {
                    return Err(Error::Parse {
                        offset: open,
                        message: "unbalanced parenthesis".into(),
                    });
                }
                Ok(Expr::call(func, arg))
            }
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut i = start;
        let digits = |i: &mut usize| {
            let s = *i;
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
            *i - s
        };
        let mut n = digits(&mut i);
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            n += digits(&mut i);
        }
        if n == 0 {
            return Err(self.error("malformed number".into()));
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if digits(&mut j) > 0 {
                i = j;
            }
        }
        let text = &self.src[start..i];
        let value: f64 = text
            .parse()
            .map_err(|_| self.error(format!("malformed number `{text}`")))?;
        self.pos = i;
        Ok(Expr::Num(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn p(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    #[test]
    fn parses_basic_forms() {
        assert_eq!(p("z"), Expr::Var);
        assert_eq!(p("exp(z)"), Expr::call(Func::Exp, Expr::Var));
        let expected = Expr::binary(
            BinOp::Sub,
            Expr::binary(
                BinOp::Mul,
                Expr::Num(2.0),
                Expr::binary(BinOp::Pow, Expr::Var, Expr::Num(3.0)),
            ),
            Expr::call(Func::Sin, Expr::Var),
        );
        assert_eq!(p("2*z^3 - sin(z)"), expected);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("-z^2"), Expr::Neg(Box::new(p("z^2"))));
        assert_eq!(p("2^3^2"), p("2^(3^2)"));
        assert_eq!(p("1-2-3"), p("(1-2)-3"));
        assert_eq!(p("8/4/2"), p("(8/4)/2"));
        assert_eq!(p("2^-z"), Expr::binary(BinOp::Pow, Expr::Num(2.0), Expr::Neg(Box::new(Expr::Var))));
        assert_eq!(p(" 1.5e-3 * z "), Expr::binary(BinOp::Mul, Expr::Num(1.5e-3), Expr::Var));
        assert_eq!(p(".5"), Expr::Num(0.5));
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let offset = |s: &str| match Expr::parse(s) {
            Err(Error::Parse { offset, .. }) => offset,
            other => panic!("expected parse error for {s:?}, got {other:?}"),
        };
        assert_eq!(offset("(z + 1"), 0);
        assert_eq!(offset("z + tan(z)"), 4);
        assert_eq!(offset("z )"), 2);
        assert_eq!(offset("2 z"), 2);
        assert_eq!(offset("z +"), 3);
        assert_eq!(offset("x"), 0);
        assert_eq!(offset("sin z"), 4);
    }

    #[test]
    fn jet_examples() {
        assert_eq!(p("z^2").eval_jet(3.0, 2).unwrap().coeffs(), &[9.0, 6.0, 2.0]);
        assert_eq!(p("exp(z)").eval_jet(0.0, 5).unwrap().coeffs(), &[1.0; 6]);
        let g = p("1/(1-z)").eval_jet(0.0, 3).unwrap();
        for (a, b) in g.coeffs().iter().zip([1.0, 1.0, 2.0, 6.0]) {
            assert_relative_eq!(*a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn variable_exponent_uses_exp_log() {
        // z^z at 1: value 1, derivative 1, second derivative 2
        let j = p("z^z").eval_jet(1.0, 2).unwrap();
        assert_relative_eq!(j.d(0), 1.0, epsilon = 1e-14);
        assert_relative_eq!(j.d(1), 1.0, epsilon = 1e-14);
        assert_relative_eq!(j.d(2), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn evaluation_errors_name_the_node() {
        match p("1 + log(z - 1)").eval_jet(0.5, 1) {
            Err(Error::Eval { node, .. }) => assert_eq!(node, "log((z - 1.0))"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(p("1/z").eval_jet(0.0, 1), Err(Error::Eval { .. })));
        assert!(matches!(p("z").eval_jet(0.0, 7), Err(Error::Contract(_))));
        let wide = Evaluator { max_order: 10 };
        assert_eq!(wide.eval_jet(&p("z"), 0.0, 9).unwrap().order(), 9);
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0.1f64..5.0).prop_map(Expr::Num),
            Just(Expr::Var),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinOp::Add, l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinOp::Sub, l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinOp::Mul, l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinOp::Div, l, r)),
                (inner.clone(), 1u8..4).prop_map(|(l, k)| Expr::binary(BinOp::Pow, l, Expr::Num(k as f64))),
                inner.clone().prop_map(|e| Expr::call(Func::Sin, e)),
                inner.clone().prop_map(|e| Expr::call(Func::Cos, e)),
                inner.prop_map(|e| Expr::call(Func::Exp, Expr::binary(BinOp::Mul, Expr::Num(0.1), e))),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_round_trips(e in arb_expr()) {
            let text = e.to_string();
            prop_assert_eq!(Expr::parse(&text).unwrap(), e);
        }

        #[test]
        fn first_derivative_matches_central_difference(e in arb_expr(), z0 in 0.2f64..0.8) {
            let h = 1e-5;
            let (Ok(j), Ok(fp), Ok(fm)) = (e.eval_jet(z0, 1), e.eval(z0 + h), e.eval(z0 - h)) else {
                return Ok(());
            };
            let fd = (fp - fm) / (2.0 * h);
            // skip stiff samples where the difference quotient itself is unreliable
            let curvature = e.jet(z0, 3).map(|j| j.d(3).abs()).unwrap_or(f64::INFINITY);
            prop_assume!(curvature.is_finite() && curvature * h * h < 1e-9 * (1.0 + j.d(1).abs()));
            prop_assume!(j.value().abs() < 1e6);
            prop_assert!((j.d(1) - fd).abs() <= 1e-6 * (1.0 + j.d(1).abs()), "{} vs {}", j.d(1), fd);
        }
    }
}
