//! Tokenizer and precedence-climbing parser for one-variable formulas.

use super::{BinOp, Expr, ExprError, Func};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'0'..=b'9' | b'.' => {
                let start = i;
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
                let lit = &text[start..i];
                let value: f64 = lit.parse().map_err(|_| ExprError::Syntax {
                    offset: start,
                    message: format!("malformed number '{lit}'"),
                })?;
                out.push(Token {
                    tok: Tok::Num(value),
                    offset: start,
                });
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(text[start..i].to_string()),
                    offset: start,
                });
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                out.push(Token {
                    tok: Tok::Op(c as char),
                    offset: i,
                });
                i += 1;
            }
            b'(' => {
                out.push(Token {
                    tok: Tok::LParen,
                    offset: i,
                });
                i += 1;
            }
            b')' => {
                out.push(Token {
                    tok: Tok::RParen,
                    offset: i,
                });
                i += 1;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ExprError::Syntax {
                    offset: i,
                    message: format!("unexpected character '{ch}'"),
                });
            }
        }
    }
    Ok(out)
}

pub(super) struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    len: usize,
    params: &'a [&'a str],
}

const UNARY_PREC: u8 = 3;

fn binary_info(op: char) -> Option<(BinOp, u8, bool)> {
    // (operator, precedence, right associative)
    match op {
        '+' => Some((BinOp::Add, 1, false)),
        '-' => Some((BinOp::Sub, 1, false)),
        '*' => Some((BinOp::Mul, 2, false)),
        '/' => Some((BinOp::Div, 2, false)),
        '^' => Some((BinOp::Pow, 4, true)),
        _ => None,
    }
}

impl<'a> Parser<'a> {
    pub(super) fn new(text: &str, params: &'a [&'a str]) -> Result<Self, ExprError> {
        if text.trim().is_empty() {
            return Err(ExprError::Syntax {
                offset: 0,
                message: "empty formula".into(),
            });
        }
        Ok(Self {
            tokens: tokenize(text)?,
            pos: 0,
            len: text.len(),
            params,
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.len, |t| t.offset)
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    pub(super) fn parse_all(mut self) -> Result<Expr, ExprError> {
        let e = self.parse_expr(0)?;
        if self.pos != self.tokens.len() {
            return self.syntax("unexpected trailing input");
        }
        Ok(e)
    }

    fn parse_expr(&mut self, min_prec: u8) -> Result<Expr, ExprError> {
        let mut lhs = self.parse_unary()?;
        while let Some(Token { tok: Tok::Op(op), .. }) = self.peek() {
            let Some((bin, prec, right)) = binary_info(*op) else {
                break;
            };
            if prec < min_prec {
                break;
            }
            self.pos += 1;
            let rhs = if bin == BinOp::Pow {
                // exponent may carry its own sign: x^-2
                self.parse_pow_rhs()?
            } else {
                self.parse_expr(if right { prec } else { prec + 1 })?
            };
            lhs = Expr::Binary(bin, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_pow_rhs(&mut self) -> Result<Expr, ExprError> {
        if let Some(Token { tok: Tok::Op('-'), .. }) = self.peek() {
            self.pos += 1;
            let inner = self.parse_pow_rhs()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        let base = self.parse_primary()?;
        if let Some(Token { tok: Tok::Op('^'), .. }) = self.peek() {
            self.pos += 1;
            let exp = self.parse_pow_rhs()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn parse_unary(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(Token { tok: Tok::Op('-'), .. }) => {
                self.pos += 1;
                let inner = self.parse_expr_above(UNARY_PREC)?;
                Ok(Expr::Neg(Box::new(inner)))
            }
            Some(Token { tok: Tok::Op('+'), .. }) => {
                self.pos += 1;
                self.parse_expr_above(UNARY_PREC)
            }
            _ => self.parse_primary(),
        }
    }

    /// Operand of a unary sign: binds tighter than `*` but looser than `^`.
    fn parse_expr_above(&mut self, prec: u8) -> Result<Expr, ExprError> {
        self.parse_expr(prec + 1)
    }

    fn parse_primary(&mut self) -> Result<Expr, ExprError> {
        let Some(token) = self.peek().cloned() else {
            return self.syntax("unexpected end of formula");
        };
        self.pos += 1;
        match token.tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::LParen => {
                let e = self.parse_expr(0)?;
                match self.peek() {
                    Some(Token { tok: Tok::RParen, .. }) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => self.syntax("expected ')'"),
                }
            }
            Tok::Ident(name) => self.parse_identifier(name, token.offset),
            Tok::RParen => Err(ExprError::Syntax {
                offset: token.offset,
                message: "unexpected ')'".into(),
            }),
            Tok::Op(c) => Err(ExprError::Syntax {
                offset: token.offset,
                message: format!("unexpected operator '{c}'"),
            }),
        }
    }

    fn parse_identifier(&mut self, name: String, offset: usize) -> Result<Expr, ExprError> {
        if let Some(Token { tok: Tok::LParen, .. }) = self.peek() {
            let Some(func) = Func::from_name(&name) else {
                return Err(ExprError::UnknownIdentifier { name, offset });
            };
            self.pos += 1;
            let arg = self.parse_expr(0)?;
            match self.peek() {
                Some(Token { tok: Tok::RParen, .. }) => self.pos += 1,
                _ => return self.syntax("expected ')' after function argument"),
            }
            return Ok(Expr::Call(func, Box::new(arg)));
        }
        match name.as_str() {
            "x" => Ok(Expr::Var),
            "pi" => Ok(Expr::Pi),
            _ if self.params.contains(&name.as_str()) => Ok(Expr::Param(name)),
            _ => Err(ExprError::UnknownIdentifier { name, offset }),
        }
    }
}
