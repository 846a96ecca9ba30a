//! A small expression language for coefficient and root functions of a
//! parameter `x` and a sequence index `n`.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' factor)?
//! atom   := NUMBER | IDENT | IDENT '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus and is right-associative. Known
//! identifiers: the variables `x` and `n` and the calls `sqrt`, `abs`,
//! `sin`, `cos`, `exp`, `min`, `max`, `pow`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Abs,
    Sin,
    Cos,
    Exp,
    Min,
    Max,
    Pow,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Min => "min",
            Func::Max => "max",
            Func::Pow => "pow",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Min | Func::Max | Func::Pow => 2,
            _ => 1,
        }
    }

    fn lookup(name: &str) -> Option<Func> {
        Some(match name {
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "min" => Func::Min,
            "max" => Func::Max,
            "pow" => Func::Pow,
            _ => return None,
        })
    }
}

/// Expression tree; every node carries its source byte offset so evaluation
/// errors can point at the offending subexpression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num {
        value: f64,
        offset: usize,
    },
    Var {
        var: Var,
        offset: usize,
    },
    Neg {
        arg: Box<Expr>,
        offset: usize,
    },
    Bin {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
        offset: usize,
    },
    Call {
        func: Func,
        args: Vec<Expr>,
        offset: usize,
    },
}

impl Expr {
    pub fn offset(&self) -> usize {
        match self {
            Expr::Num { offset, .. }
            | Expr::Var { offset, .. }
            | Expr::Neg { offset, .. }
            | Expr::Bin { offset, .. }
            | Expr::Call { offset, .. } => *offset,
        }
    }

    /// True when the expression references the sequence index `n`.
    pub fn uses_n(&self) -> bool {
        match self {
            Expr::Num { .. } => false,
            Expr::Var { var, .. } => *var == Var::N,
            Expr::Neg { arg, .. } => arg.uses_n(),
            Expr::Bin { lhs, rhs, .. } => lhs.uses_n() || rhs.uses_n(),
            Expr::Call { args, .. } => args.iter().any(Expr::uses_n),
        }
    }

    /// Canonical fully parenthesized rendering; reparsing it reproduces the
    /// same tree shape.
    pub fn print(&self) -> String {
        match self {
            Expr::Num { value, .. } => format!("{value}"),
            Expr::Var { var: Var::X, .. } => "x".to_string(),
            Expr::Var { var: Var::N, .. } => "n".to_string(),
            Expr::Neg { arg, .. } => format!("(-{})", arg.print()),
            Expr::Bin { op, lhs, rhs, .. } => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                format!("({} {} {})", lhs.print(), sym, rhs.print())
            }
            Expr::Call { func, args, .. } => {
                let mut s = String::new();
                s.push_str(func.name());
                s.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        s.push_str(", ");
                    }
                    s.push_str(&a.print());
                }
                s.push(')');
                s
            }
        }
    }
}

/// Parse failure with byte offset and expected/found descriptions.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
    pub found: String,
}

impl core::fmt::Display for ParseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "parse error at offset {}: expected {}, found {}",
            self.offset, self.expected, self.found
        )
    }
}

impl core::error::Error for ParseError {}

/// Evaluation failure with the offset of the offending subexpression.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalError {
    pub offset: usize,
    pub message: String,
}

impl core::fmt::Display for EvalError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "evaluation error at offset {}: {}", self.offset, self.message)
    }
}

impl core::error::Error for EvalError {}

// ---------------------------------------------------------------------------
// lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            b'/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            b'^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            b',' => {
                out.push((Tok::Comma, i));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mark = i;
                    i += 1;
                    if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                        i += 1;
                    }
                    if i < bytes.len() && bytes[i].is_ascii_digit() {
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    } else {
                        i = mark; // 'e' belongs to something else
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError {
                    offset: start,
                    expected: "a number".into(),
                    found: format!("'{text}'"),
                })?;
                out.push((Tok::Num(value), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => {
                return Err(ParseError {
                    offset: i,
                    expected: "a token".into(),
                    found: format!("'{}'", &src[i..i + 1]),
                })
            }
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

// ---------------------------------------------------------------------------
// parser
// ---------------------------------------------------------------------------

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, usize) {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        let (tok, offset) = self.peek();
        ParseError {
            offset: *offset,
            expected: expected.into(),
            found: tok.describe(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().0 {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let (_, offset) = self.bump();
            let rhs = self.term()?;
            lhs = Expr::Bin {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                offset,
            };
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek().0 {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            let (_, offset) = self.bump();
            let rhs = self.factor()?;
            lhs = Expr::Bin {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                offset,
            };
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if matches!(self.peek().0, Tok::Minus) {
            let (_, offset) = self.bump();
            let arg = self.factor()?;
            return Ok(Expr::Neg {
                arg: Box::new(arg),
                offset,
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek().0, Tok::Caret) {
            let (_, offset) = self.bump();
            let exponent = self.factor()?; // right-associative
            return Ok(Expr::Bin {
                op: BinOp::Pow,
                lhs: Box::new(base),
                rhs: Box::new(exponent),
                offset,
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().0.clone() {
            Tok::Num(value) => {
                let (_, offset) = self.bump();
                Ok(Expr::Num { value, offset })
            }
            Tok::Ident(name) => {
                let (_, offset) = self.bump();
                if matches!(self.peek().0, Tok::LParen) {
                    let func = Func::lookup(&name).ok_or_else(|| ParseError {
                        offset,
                        expected: "a known function (sqrt, abs, sin, cos, exp, min, max, pow)"
                            .into(),
                        found: format!("'{name}'"),
                    })?;
                    self.bump(); // '('
                    let mut args = vec![self.expr()?];
                    while matches!(self.peek().0, Tok::Comma) {
                        self.bump();
                        args.push(self.expr()?);
                    }
                    if !matches!(self.peek().0, Tok::RParen) {
                        return Err(self.error("')'"));
                    }
                    self.bump();
                    if args.len() != func.arity() {
                        return Err(ParseError {
                            offset,
                            expected: format!(
                                "{} argument(s) for {}",
                                func.arity(),
                                func.name()
                            ),
                            found: format!("{}", args.len()),
                        });
                    }
                    Ok(Expr::Call { func, args, offset })
                } else {
                    let var = match name.as_str() {
                        "x" => Var::X,
                        "n" => Var::N,
                        _ => {
                            return Err(ParseError {
                                offset,
                                expected: "a variable (x or n)".into(),
                                found: format!("'{name}'"),
                            })
                        }
                    };
                    Ok(Expr::Var { var, offset })
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if !matches!(self.peek().0, Tok::RParen) {
                    return Err(self.error("')'"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error("an operand")),
        }
    }
}

/// Parses a source string into an expression tree.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut parser = Parser { toks, pos: 0 };
    let e = parser.expr()?;
    if !matches!(parser.peek().0, Tok::End) {
        return Err(parser.error("end of input"));
    }
    Ok(e)
}

/// Evaluates an expression at `(x, n)` with standard real semantics.
/// Division by zero, square roots of negatives, and non-finite results are
/// reported with the offending subexpression's offset.
pub fn eval_expr(e: &Expr, x: f64, n: f64) -> Result<f64, EvalError> {
    let v = eval_inner(e, x, n)?;
    if !v.is_finite() {
        return Err(EvalError {
            offset: e.offset(),
            message: format!("non-finite result {v}"),
        });
    }
    Ok(v)
}

fn eval_inner(e: &Expr, x: f64, n: f64) -> Result<f64, EvalError> {
    Ok(match e {
        Expr::Num { value, .. } => *value,
        Expr::Var { var: Var::X, .. } => x,
        Expr::Var { var: Var::N, .. } => n,
        Expr::Neg { arg, .. } => -eval_inner(arg, x, n)?,
        Expr::Bin {
            op,
            lhs,
            rhs,
            offset,
        } => {
            let a = eval_inner(lhs, x, n)?;
            let b = eval_inner(rhs, x, n)?;
            let v = match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == 0.0 {
                        return Err(EvalError {
                            offset: *offset,
                            message: "division by zero".into(),
                        });
                    }
                    a / b
                }
                BinOp::Pow => math::powf(a, b),
            };
            if v.is_nan() {
                return Err(EvalError {
                    offset: *offset,
                    message: "undefined result".into(),
                });
            }
            v
        }
        Expr::Call { func, args, offset } => {
            let a = eval_inner(&args[0], x, n)?;
            match func {
                Func::Sqrt => {
                    if a < 0.0 {
                        return Err(EvalError {
                            offset: *offset,
                            message: format!("square root of negative value {a}"),
                        });
                    }
                    math::sqrt(a)
                }
                Func::Abs => math::abs(a),
                Func::Sin => math::sin(a),
                Func::Cos => math::cos(a),
                Func::Exp => math::exp(a),
                Func::Min | Func::Max | Func::Pow => {
                    let b = eval_inner(&args[1], x, n)?;
                    let v = match func {
                        Func::Min => math::min(a, b),
                        Func::Max => math::max(a, b),
                        _ => math::powf(a, b),
                    };
                    if v.is_nan() {
                        return Err(EvalError {
                            offset: *offset,
                            message: "undefined result".into(),
                        });
                    }
                    v
                }
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, x: f64, n: f64) -> f64 {
        eval_expr(&parse(src).unwrap(), x, n).unwrap()
    }

    #[test]
    fn parses_the_reference_family() {
        let e = parse("x^2 + 1/n^2").unwrap();
        match &e {
            Expr::Bin { op: BinOp::Add, lhs, rhs, .. } => {
                assert!(matches!(**lhs, Expr::Bin { op: BinOp::Pow, .. }));
                assert!(matches!(**rhs, Expr::Bin { op: BinOp::Div, .. }));
            }
            other => panic!("unexpected shape {other:?}"),
        }
        assert_eq!(ev("x^2 + 1/n^2", 1.0, 2.0), 1.25);
        let e = parse("sqrt(x^2+1)").unwrap();
        assert!(matches!(e, Expr::Call { func: Func::Sqrt, .. }));
    }

    #[test]
    fn reports_parse_errors_with_offsets() {
        let err = parse("x + * 2").unwrap_err();
        assert_eq!(err.offset, 4);
        assert!(err.expected.contains("operand"));
        assert!(parse("foo(1)").is_err());
        assert!(parse("min(1)").is_err()); // arity
        assert!(parse("y + 1").is_err()); // unknown variable
        assert!(parse("(1 + 2").is_err());
        assert!(parse("1 2").is_err());
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("2+3*4", 0.0, 0.0), 14.0);
        assert_eq!(ev("-2^2", 0.0, 0.0), -4.0);
        assert_eq!(ev("2^-2", 0.0, 0.0), 0.25);
        assert_eq!(ev("2^3^2", 0.0, 0.0), 512.0); // right-associative
        assert_eq!(ev("6/3/2", 0.0, 0.0), 1.0); // '/' is left-associative
        assert_eq!(ev("abs(x)", -3.0, 0.0), 3.0);
    }

    #[test]
    fn eval_errors() {
        let e = parse("sqrt(x)").unwrap();
        assert!(eval_expr(&e, -1.0, 0.0).is_err());
        let e = parse("1/x").unwrap();
        assert!(eval_expr(&e, 0.0, 0.0).is_err());
        let e = parse("exp(x)").unwrap();
        assert!(eval_expr(&e, 1e9, 0.0).is_err()); // overflow to infinity
    }

    #[test]
    fn printer_round_trips() {
        for src in [
            "x^2 + 1/n^2",
            "-(x*n) + min(x, 2)",
            "pow(x, 3) - sqrt(abs(x))/2",
            "2^-3 * cos(x)",
            "1e-3 + x",
        ] {
            let once = parse(src).unwrap().print();
            let twice = parse(&once).unwrap().print();
            assert_eq!(once, twice, "printer not stable for {src}");
        }
    }

    #[test]
    fn uses_n_detection() {
        assert!(parse("1/n^2").unwrap().uses_n());
        assert!(!parse("x^2 + 1").unwrap().uses_n());
    }
}
