//! Pratt parser for the expression language.
//!
//! ```text
//! expr   := expr ('+' | '-') expr | expr ('*' | '/') expr
//!         | '-' expr | expr '^' expr | atom
//! atom   := number | coordinate | 'pi' | func '(' expr ')' | '(' expr ')'
//! func   := sin | cos | exp | ln | sqrt
//! ```
//!
//! Binding, tightest first: `^` (right-associative), unary `-`, `* /`, `+ -`.
//! The right operand of `^` must fold to a constant.

use super::ast::{self, Expr, Func, Node};
use super::chart::ChartSpec;
use crate::error::{Error, Result};

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
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn lex(source: &str) -> Result<Vec<Token>> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            tokens.push(Token { tok, offset: start });
            i += 1;
        } else if c.is_ascii_digit() || c == b'.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &source[start..i];
            let value: f64 = text.parse().map_err(|_| Error::Syntax {
                offset: start,
                message: format!("malformed number {text:?}"),
            })?;
            if !value.is_finite() {
                return Err(Error::Syntax { offset: start, message: format!("number {text:?} overflows") });
            }
            tokens.push(Token { tok: Tok::Num(value), offset: start });
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            tokens.push(Token { tok: Tok::Ident(source[start..i].to_string()), offset: start });
        } else {
            let found = source[start..].chars().next().unwrap_or('\0');
            return Err(Error::Lex { offset: start, found });
        }
    }
    tokens.push(Token { tok: Tok::End, offset: source.len() });
    Ok(tokens)
}

const PREFIX_NEG_BP: u8 = 5;

fn infix_binding(tok: &Tok) -> Option<(u8, u8)> {
    match tok {
        Tok::Plus | Tok::Minus => Some((1, 2)),
        Tok::Star | Tok::Slash => Some((3, 4)),
        Tok::Caret => Some((7, 6)),
        _ => None,
    }
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    chart: &'a ChartSpec,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect_rparen(&mut self) -> Result<()> {
        let t = self.next();
        if t.tok == Tok::RParen {
            Ok(())
        } else {
            Err(Error::Syntax { offset: t.offset, message: "expected ')'".into() })
        }
    }

    fn expression(&mut self, min_bp: u8) -> Result<Node> {
        let mut lhs = self.operand()?;
        loop {
            let op = self.peek().clone();
            let Some((lbp, rbp)) = infix_binding(&op.tok) else { break };
            if lbp < min_bp {
                break;
            }
            self.next();
            let rhs_offset = self.peek().offset;
            let rhs = self.expression(rbp)?;
            lhs = match op.tok {
                Tok::Plus => node(Expr::Add(lhs, rhs)),
                Tok::Minus => node(Expr::Sub(lhs, rhs)),
                Tok::Star => node(Expr::Mul(lhs, rhs)),
                Tok::Slash => node(Expr::Div(lhs, rhs)),
                Tok::Caret => {
                    let exponent = self.fold_constant(&rhs).ok_or_else(|| Error::Syntax {
                        offset: rhs_offset,
                        message: "exponent must be a constant".into(),
                    })?;
                    node(Expr::Pow(lhs, exponent))
                }
                _ => unreachable!(),
            };
        }
        Ok(lhs)
    }

    fn fold_constant(&self, e: &Node) -> Option<f64> {
        if e.max_var().is_some() {
            return None;
        }
        e.eval::<f64>(&[], self.chart).ok()
    }

    fn operand(&mut self) -> Result<Node> {
        let t = self.next();
        match t.tok {
            Tok::Num(v) => Ok(ast::constant(v)),
            Tok::Minus => Ok(node(Expr::Neg(self.expression(PREFIX_NEG_BP)?))),
            Tok::LParen => {
                let inner = self.expression(0)?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                if let Some(func) = Func::from_name(&name) {
                    let open = self.next();
                    if open.tok != Tok::LParen {
                        return Err(Error::Syntax {
                            offset: open.offset,
                            message: format!("expected '(' after {name}"),
                        });
                    }
                    let arg = self.expression(0)?;
                    self.expect_rparen()?;
                    Ok(node(Expr::Call(func, arg)))
                } else if name == "pi" {
                    Ok(ast::constant(std::f64::consts::PI))
                } else if let Some(index) = self.chart.index_of(&name) {
                    Ok(ast::var(index))
                } else {
                    Err(Error::UnknownIdentifier { name, offset: t.offset })
                }
            }
            Tok::End => Err(Error::Syntax { offset: t.offset, message: "unexpected end of input".into() }),
            other => Err(Error::Syntax { offset: t.offset, message: format!("expected an operand, found {other:?}") }),
        }
    }
}

fn node(e: Expr) -> Node {
    std::sync::Arc::new(e)
}

/// Parses `source` into an expression over `chart`.
pub fn parse_expr(source: &str, chart: &ChartSpec) -> Result<Node> {
    if source.trim().is_empty() {
        return Err(Error::Syntax { offset: 0, message: "empty expression".into() });
    }
    let tokens = lex(source)?;
    let mut parser = Parser { tokens, pos: 0, chart };
    let e = parser.expression(0)?;
    let trailing = parser.peek();
    if trailing.tok != Tok::End {
        return Err(Error::Syntax {
            offset: trailing.offset,
            message: format!("unexpected {:?}", trailing.tok),
        });
    }
    Ok(e)
}
