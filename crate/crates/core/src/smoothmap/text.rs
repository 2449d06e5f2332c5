//! Textual notation for map bodies, used by scenario configs.
//!
//! Grammar (precedence from loosest to tightest):
//!
//! ```text
//! expr    := additive ('@' additive)*          composition, left-assoc
//! additive := mult (('+' | '-') mult)*
//! mult    := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' signed-integer)?        componentwise integer power
//! atom    := number
//!          | 'x' digits                         coordinate, e.g. x0, x1
//!          | func '(' expr ')'                  func: sin cos exp recip norm
//!          | 'mat' '[' row (';' row)* ']' '(' expr ')'
//!          | '(' expr (',' expr)* ')'           parens / tupling
//! ```
//!
//! The parser canonicalizes: a leading scalar literal in a product
//! becomes `Scale`, unary minus becomes `Scale(-1, ·)` (folded into the
//! literal for numbers), and `a - b` becomes `a + (-1)·b`. The printer
//! emits exactly those canonical forms, so `parse ∘ print ∘ parse =
//! parse` on every accepted string. Tangent-lifted bodies are
//! programmatic objects with no textual form.

use crate::error::{Error, Result};
use crate::vecspace::Matrix;

use super::expr::Expr;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Coord(usize),
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semicolon,
    Plus,
    Minus,
    Star,
    Caret,
    At,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' => {
                tokens.push(Token::LParen);
                i += 1;
            }
            ')' => {
                tokens.push(Token::RParen);
                i += 1;
            }
            '[' => {
                tokens.push(Token::LBracket);
                i += 1;
            }
            ']' => {
                tokens.push(Token::RBracket);
                i += 1;
            }
            ',' => {
                tokens.push(Token::Comma);
                i += 1;
            }
            ';' => {
                tokens.push(Token::Semicolon);
                i += 1;
            }
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '@' => {
                tokens.push(Token::At);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                // Exponent part.
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let num = text
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad number literal '{text}'")))?;
                tokens.push(Token::Num(num));
            }
            'x' if i + 1 < chars.len() && chars[i + 1].is_ascii_digit() => {
                let start = i + 1;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let idx = text
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad coordinate index '{text}'")))?;
                tokens.push(Token::Coord(idx));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                tokens.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character '{other}' at byte {i}"
                )))
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Token, ctx: &str) -> Result<()> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            other => Err(Error::Parse(format!(
                "expected {want:?} {ctx}, found {other:?}"
            ))),
        }
    }

    fn parse_expr(&mut self) -> Result<Expr> {
        let mut acc = self.parse_additive()?;
        while self.peek() == Some(&Token::At) {
            self.next();
            let rhs = self.parse_additive()?;
            acc = Expr::Compose(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn parse_additive(&mut self) -> Result<Expr> {
        let mut acc = self.parse_mult()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    let rhs = self.parse_mult()?;
                    acc = acc.add(rhs);
                }
                Some(Token::Minus) => {
                    self.next();
                    let rhs = self.parse_mult()?;
                    acc = acc.sub(rhs);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_mult(&mut self) -> Result<Expr> {
        let mut acc = self.parse_unary()?;
        while self.peek() == Some(&Token::Star) {
            self.next();
            let rhs = self.parse_unary()?;
            // A leading scalar literal acts as a scale, canonically.
            acc = match acc {
                Expr::Const(ref c) if c.dim() == 1 => rhs.scale(c[0]),
                other => other.mul(rhs),
            };
        }
        Ok(acc)
    }

    fn parse_unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Token::Minus) {
            self.next();
            let inner = self.parse_unary()?;
            return Ok(match inner {
                Expr::Const(c) if c.dim() == 1 => Expr::scalar(-c[0]),
                other => other.neg(),
            });
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<Expr> {
        let base = self.parse_atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.next();
            let k = self.parse_signed_int()?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn parse_signed_int(&mut self) -> Result<i32> {
        let negative = if self.peek() == Some(&Token::Minus) {
            self.next();
            true
        } else {
            false
        };
        match self.next() {
            Some(Token::Num(n)) if n.fract() == 0.0 && n.abs() <= i32::MAX as f64 => {
                let k = n as i32;
                Ok(if negative { -k } else { k })
            }
            other => Err(Error::Parse(format!(
                "exponent must be an integer, found {other:?}"
            ))),
        }
    }

    fn parse_atom(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Token::Num(n)) => Ok(Expr::scalar(n)),
            Some(Token::Coord(i)) => Ok(Expr::coord(i)),
            Some(Token::Ident(name)) => match name.as_str() {
                "sin" | "cos" | "exp" | "recip" | "norm" => {
                    self.expect(Token::LParen, &format!("after '{name}'"))?;
                    let arg = self.parse_expr()?;
                    self.expect(Token::RParen, &format!("closing '{name}(...)'"))?;
                    Ok(match name.as_str() {
                        "sin" => arg.sin(),
                        "cos" => arg.cos(),
                        "exp" => arg.exp(),
                        "recip" => arg.recip(),
                        _ => arg.norm(),
                    })
                }
                "mat" => self.parse_matrix_apply(),
                other => Err(Error::Parse(format!("unknown function '{other}'"))),
            },
            Some(Token::LParen) => {
                let first = self.parse_expr()?;
                let mut parts = vec![first];
                while self.peek() == Some(&Token::Comma) {
                    self.next();
                    parts.push(self.parse_expr()?);
                }
                self.expect(Token::RParen, "closing parenthesis")?;
                if parts.len() == 1 {
                    Ok(parts.pop().expect("one element"))
                } else {
                    Ok(Expr::Pair(parts))
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }

    fn parse_matrix_apply(&mut self) -> Result<Expr> {
        self.expect(Token::LBracket, "after 'mat'")?;
        let mut rows: Vec<Vec<f64>> = vec![Vec::new()];
        loop {
            let negative = if self.peek() == Some(&Token::Minus) {
                self.next();
                true
            } else {
                false
            };
            match self.next() {
                Some(Token::Num(n)) => {
                    rows.last_mut()
                        .expect("row exists")
                        .push(if negative { -n } else { n });
                }
                other => {
                    return Err(Error::Parse(format!(
                        "expected matrix entry, found {other:?}"
                    )))
                }
            }
            match self.next() {
                Some(Token::Comma) => {}
                Some(Token::Semicolon) => rows.push(Vec::new()),
                Some(Token::RBracket) => break,
                other => {
                    return Err(Error::Parse(format!(
                        "expected ',', ';' or ']' in matrix, found {other:?}"
                    )))
                }
            }
        }
        let m = Matrix::from_rows(&rows).map_err(|e| Error::Parse(e.to_string()))?;
        self.expect(Token::LParen, "after matrix literal")?;
        let arg = self.parse_expr()?;
        self.expect(Token::RParen, "closing matrix application")?;
        Ok(Expr::linear(m, arg))
    }
}

/// Parse the textual notation into an expression tree.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let tokens = lex(src)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut parser = Parser { tokens, pos: 0 };
    let expr = parser.parse_expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::Parse(format!(
            "trailing input after expression: {:?}",
            &parser.tokens[parser.pos..]
        )));
    }
    Ok(expr)
}

// Printer precedence levels; parenthesize a child whenever its level is
// below what the context requires.
const P_COMPOSE: u8 = 1;
const P_ADD: u8 = 2;
const P_MUL: u8 = 3;
const P_UNARY: u8 = 4;
const P_POWER: u8 = 5;
const P_ATOM: u8 = 6;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Compose(..) => P_COMPOSE,
        Expr::Add(..) => P_ADD,
        Expr::Mul(..) => P_MUL,
        Expr::Scale(c, _) if *c == -1.0 => P_UNARY,
        Expr::Scale(..) => P_MUL,
        Expr::Const(c) if c.dim() == 1 && c[0] < 0.0 => P_UNARY,
        Expr::Pow(..) => P_POWER,
        _ => P_ATOM,
    }
}

fn fmt(e: &Expr, min_level: u8, out: &mut String) -> Result<()> {
    let lv = level(e);
    let parens = lv < min_level;
    if parens {
        out.push('(');
    }
    match e {
        Expr::Const(c) => {
            if c.dim() == 1 {
                out.push_str(&c[0].to_string());
            } else {
                // Multi-component constants have no dedicated literal;
                // they print as a tuple of scalars (semantically equal,
                // structurally a Pair after reparsing).
                out.push('(');
                for (i, x) in c.coords().iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(&x.to_string());
                }
                out.push(')');
            }
        }
        Expr::Proj(idx) => {
            if idx.len() == 1 {
                out.push('x');
                out.push_str(&idx[0].to_string());
            } else {
                out.push('(');
                for (i, ix) in idx.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    out.push('x');
                    out.push_str(&ix.to_string());
                }
                out.push(')');
            }
        }
        Expr::Linear(m, inner) => {
            out.push_str("mat[");
            for i in 0..m.rows() {
                if i > 0 {
                    out.push_str("; ");
                }
                for j in 0..m.cols() {
                    if j > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(&m.get(i, j).to_string());
                }
            }
            out.push_str("](");
            fmt(inner, P_COMPOSE, out)?;
            out.push(')');
        }
        Expr::Add(a, b) => {
            fmt(a, P_ADD, out)?;
            if let Expr::Scale(c, inner) = &**b {
                if *c == -1.0 {
                    out.push_str(" - ");
                    fmt(inner, P_MUL, out)?;
                    if parens {
                        out.push(')');
                    }
                    return Ok(());
                }
            }
            out.push_str(" + ");
            fmt(b, P_MUL, out)?;
        }
        Expr::Scale(c, inner) => {
            if *c == -1.0 {
                out.push('-');
                fmt(inner, P_UNARY, out)?;
            } else {
                out.push_str(&c.to_string());
                out.push_str(" * ");
                fmt(inner, P_UNARY, out)?;
            }
        }
        Expr::Mul(a, b) => {
            fmt(a, P_MUL, out)?;
            out.push_str(" * ");
            fmt(b, P_UNARY, out)?;
        }
        Expr::Pair(parts) => {
            out.push('(');
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                fmt(p, P_COMPOSE, out)?;
            }
            out.push(')');
        }
        Expr::Compose(outer, inner) => {
            fmt(outer, P_COMPOSE, out)?;
            out.push_str(" @ ");
            fmt(inner, P_ADD, out)?;
        }
        Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) | Expr::Recip(a) | Expr::Norm(a) => {
            out.push_str(match e {
                Expr::Sin(_) => "sin",
                Expr::Cos(_) => "cos",
                Expr::Exp(_) => "exp",
                Expr::Recip(_) => "recip",
                _ => "norm",
            });
            out.push('(');
            fmt(a, P_COMPOSE, out)?;
            out.push(')');
        }
        Expr::Pow(a, k) => {
            fmt(a, P_ATOM, out)?;
            out.push('^');
            out.push_str(&k.to_string());
        }
        Expr::Lift(_) => {
            return Err(Error::Parse(
                "tangent-lifted maps have no textual form".into(),
            ))
        }
    }
    if parens {
        out.push(')');
    }
    Ok(())
}

/// Render an expression tree in the textual notation.
pub fn print_expr(e: &Expr) -> Result<String> {
    let mut s = String::new();
    fmt(e, P_COMPOSE, &mut s)?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(src: &str) {
        let once = parse_expr(src).unwrap();
        let printed = print_expr(&once).unwrap();
        let twice = parse_expr(&printed).unwrap_or_else(|e| {
            panic!("printed form '{printed}' of '{src}' failed to reparse: {e}")
        });
        assert_eq!(once, twice, "roundtrip changed '{src}' via '{printed}'");
    }

    #[test]
    fn parses_rotation_field() {
        let e = parse_expr("(x1, -x0)").unwrap();
        assert_eq!(
            e,
            Expr::Pair(vec![Expr::coord(1), Expr::coord(0).neg()])
        );
    }

    #[test]
    fn parses_literals_and_powers() {
        assert_eq!(parse_expr("2.5").unwrap(), Expr::scalar(2.5));
        assert_eq!(parse_expr("-3").unwrap(), Expr::scalar(-3.0));
        assert_eq!(parse_expr("1e-3").unwrap(), Expr::scalar(1e-3));
        assert_eq!(
            parse_expr("x0^-3").unwrap(),
            Expr::coord(0).pow(-3)
        );
    }

    #[test]
    fn scalar_literal_times_expr_is_scale() {
        assert_eq!(parse_expr("2 * x0").unwrap(), Expr::coord(0).scale(2.0));
        assert_eq!(
            parse_expr("x0 * 2").unwrap(),
            Expr::coord(0).mul(Expr::scalar(2.0))
        );
    }

    #[test]
    fn subtraction_is_scaled_add() {
        assert_eq!(
            parse_expr("x0 - x1").unwrap(),
            Expr::coord(0).sub(Expr::coord(1))
        );
    }

    #[test]
    fn composition_chains_left() {
        let e = parse_expr("sin(x0) @ x0^2 @ x1").unwrap();
        assert_eq!(
            e,
            Expr::Compose(
                Box::new(Expr::Compose(
                    Box::new(Expr::coord(0).sin()),
                    Box::new(Expr::coord(0).pow(2)),
                )),
                Box::new(Expr::coord(1)),
            )
        );
    }

    #[test]
    fn matrix_application() {
        let e = parse_expr("mat[1, 2; 3, 4]((x0, x1))").unwrap();
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(
            e,
            Expr::linear(m, Expr::Pair(vec![Expr::coord(0), Expr::coord(1)]))
        );
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_expr("").is_err());
        assert!(parse_expr("x0 +").is_err());
        assert!(parse_expr("frob(x0)").is_err());
        assert!(parse_expr("x0 ? x1").is_err());
        assert!(parse_expr("x0^1.5").is_err());
        assert!(parse_expr("(x0, x1").is_err());
        assert!(parse_expr("x0 x1").is_err());
    }

    #[test]
    fn roundtrip_battery() {
        for src in [
            "(x1, -x0)",
            "2 * x0 + x1 * x2",
            "sin(x0) * cos(x1) - exp(x2)",
            "norm((x0, x1, x2))^-3",
            "recip(norm((x0, x1)))",
            "(x3, x4, x5, -1 * x0, -x1, 0.5 * x2)",
            "mat[0, 1; -1, 0]((x0, x1))",
            "sin(x0) @ x0^2 @ x1 + x0",
            "x0 - -x1",
            "-(x0 + x1)",
            "3 * (x0 * x1)",
            "1e-9 + x0^3 * x0",
            "(x0 + x1) * (x0 - x1)",
            "norm(x0) + 0.001",
        ] {
            roundtrip(src);
        }
    }

    #[test]
    fn parsed_map_evaluates() {
        let f = crate::smoothmap::SmoothMap::parse("(x1, -x0)", 2).unwrap();
        let out = f
            .evaluate(&crate::vecspace::Vector::from(vec![3.0, 4.0]))
            .unwrap();
        assert_eq!(out.coords(), &[4.0, -3.0]);
    }

    #[test]
    fn parse_checks_dimensions() {
        assert!(crate::smoothmap::SmoothMap::parse("x5", 2).is_err());
    }
}
