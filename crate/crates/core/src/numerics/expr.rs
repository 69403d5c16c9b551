//! Tiny arithmetic expression evaluator for metric perturbation entries.
//!
//! Grammar: `+ - * / ^`, parentheses, unary minus, numeric literals, the
//! variables `x y z r` (with `r = |x|`), constants `pi`, `e`, and one-argument
//! functions `sin cos tan atan exp log sqrt sinh cosh tanh abs`.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    Z,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Atan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
    Abs,
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!(
                "trailing input after expression: {:?}",
                &p.tokens[p.pos..]
            )));
        }
        Ok(e)
    }

    pub fn eval(&self, x: f64, y: f64, z: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(Var::X) => x,
            Expr::Var(Var::Y) => y,
            Expr::Var(Var::Z) => z,
            Expr::Var(Var::R) => (x * x + y * y + z * z).sqrt(),
            Expr::Neg(a) => -a.eval(x, y, z),
            Expr::Add(a, b) => a.eval(x, y, z) + b.eval(x, y, z),
            Expr::Sub(a, b) => a.eval(x, y, z) - b.eval(x, y, z),
            Expr::Mul(a, b) => a.eval(x, y, z) * b.eval(x, y, z),
            Expr::Div(a, b) => a.eval(x, y, z) / b.eval(x, y, z),
            Expr::Pow(a, b) => a.eval(x, y, z).powf(b.eval(x, y, z)),
            Expr::Call(f, a) => {
                let v = a.eval(x, y, z);
                match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Tan => v.tan(),
                    Func::Atan => v.atan(),
                    Func::Exp => v.exp(),
                    Func::Log => v.ln(),
                    Func::Sqrt => v.sqrt(),
                    Func::Sinh => v.sinh(),
                    Func::Cosh => v.cosh(),
                    Func::Tanh => v.tanh(),
                    Func::Abs => v.abs(),
                }
            }
        }
    }
}

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
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let bytes: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_digit()
                        || bytes[i] == '.'
                        || bytes[i] == 'e'
                        || bytes[i] == 'E'
                        || ((bytes[i] == '+' || bytes[i] == '-')
                            && i > start
                            && (bytes[i - 1] == 'e' || bytes[i - 1] == 'E')))
                {
                    i += 1;
                }
                let s: String = bytes[start..i].iter().collect();
                let v: f64 = s
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad number literal '{s}'")))?;
                out.push(Tok::Num(v));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(bytes[start..i].iter().collect()));
            }
            other => return Err(Error::Parse(format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // unary minus binds looser than '^', so -x^2 = -(x^2)
    fn factor(&mut self) -> Result<Expr> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        if let Some(Tok::Plus) = self.peek() {
            self.bump();
            return self.factor();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            // right associative; exponent may carry a unary sign
            let exp = self.factor()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Num(v)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(Error::Parse("expected ')'".into())),
                }
            }
            Some(Tok::Ident(name)) => {
                let func = match name.as_str() {
                    "sin" => Some(Func::Sin),
                    "cos" => Some(Func::Cos),
                    "tan" => Some(Func::Tan),
                    "atan" => Some(Func::Atan),
                    "exp" => Some(Func::Exp),
                    "log" | "ln" => Some(Func::Log),
                    "sqrt" => Some(Func::Sqrt),
                    "sinh" => Some(Func::Sinh),
                    "cosh" => Some(Func::Cosh),
                    "tanh" => Some(Func::Tanh),
                    "abs" => Some(Func::Abs),
                    _ => None,
                };
                if let Some(f) = func {
                    match self.bump() {
                        Some(Tok::LParen) => {
                            let arg = self.expr()?;
                            match self.bump() {
                                Some(Tok::RParen) => Ok(Expr::Call(f, Box::new(arg))),
                                _ => {
                                    Err(Error::Parse("expected ')' after function argument".into()))
                                }
                            }
                        }
                        _ => Err(Error::Parse(format!("function '{name}' needs '('"))),
                    }
                } else {
                    match name.as_str() {
                        "x" => Ok(Expr::Var(Var::X)),
                        "y" => Ok(Expr::Var(Var::Y)),
                        "z" => Ok(Expr::Var(Var::Z)),
                        "r" => Ok(Expr::Var(Var::R)),
                        "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                        "e" => Ok(Expr::Num(std::f64::consts::E)),
                        _ => Err(Error::Parse(format!("unknown identifier '{name}'"))),
                    }
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn parses_and_evaluates() {
        let e = Expr::parse("0.5*x*y/(r^4) + sin(pi*z) - 2e-1").unwrap();
        let (x, y, z) = (1.0, 2.0, 0.5);
        let r = (x * x + y * y + z * z as f64).sqrt();
        let expect = 0.5 * x * y / r.powi(4) + (std::f64::consts::PI * z).sin() - 0.2;
        assert_abs_diff_eq!(e.eval(x, y, z), expect, epsilon = 1e-15);
    }

    #[test]
    fn unary_minus_and_power_precedence() {
        let e = Expr::parse("-x^2").unwrap();
        assert_abs_diff_eq!(e.eval(3.0, 0.0, 0.0), -9.0, epsilon = 1e-15);
        let e = Expr::parse("2^3^2").unwrap(); // right associative: 2^(3^2)
        assert_abs_diff_eq!(e.eval(0.0, 0.0, 0.0), 512.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_garbage() {
        assert!(Expr::parse("x +* y").is_err());
        assert!(Expr::parse("foo(3)").is_err());
        assert!(Expr::parse("(x").is_err());
    }
}
