//! Recursive-descent parser for predicates over `n`.
//!
//! ```text
//! expr   := and ('||' and)*
//! and    := unary ('&&' unary)*
//! unary  := '!' unary | '(' expr ')' | cmp
//! cmp    := arith ('=='|'!='|'<'|'<='|'>'|'>=') arith
//! arith  := term (('+'|'-') term)*
//! term   := atom (('*'|'%') atom)*
//! atom   := 'n' | decimal | '(' arith ')'
//! ```
//!
//! `-` truncates at 0; the right operand of `%` must be a nonzero literal.
//! Columns in errors are 1-based.

use std::fmt;

use crate::setexpr::{Arith, ArithOp, CmpOp, NatSet, PredExpr};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DslError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for DslError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Var,
    Num(u64),
    Arith(ArithOp),
    Cmp(CmpOp),
    And,
    Or,
    Not,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Var => f.write_str("'n'"),
            Tok::Num(v) => write!(f, "'{v}'"),
            Tok::Arith(op) => write!(f, "'{op}'"),
            Tok::Cmp(op) => write!(f, "'{op}'"),
            Tok::And => f.write_str("'&&'"),
            Tok::Or => f.write_str("'||'"),
            Tok::Not => f.write_str("'!'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn err<T>(column: usize, message: impl Into<String>) -> Result<T, DslError> {
    Err(DslError { column, message: message.into() })
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, DslError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        let (tok, width) = match (c, next) {
            (' ' | '\t', _) => {
                i += 1;
                continue;
            }
            ('n', _) => (Tok::Var, 1),
            ('0'..='9', _) => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let Ok(v) = digits.parse() else {
                    return err(col, format!("number {digits} is too large"));
                };
                out.push((Tok::Num(v), col));
                continue;
            }
            ('+', _) => (Tok::Arith(ArithOp::Add), 1),
            ('-', _) => (Tok::Arith(ArithOp::Sub), 1),
            ('*', _) => (Tok::Arith(ArithOp::Mul), 1),
            ('%', _) => (Tok::Arith(ArithOp::Rem), 1),
            ('=', Some('=')) => (Tok::Cmp(CmpOp::Eq), 2),
            ('!', Some('=')) => (Tok::Cmp(CmpOp::Ne), 2),
            ('<', Some('=')) => (Tok::Cmp(CmpOp::Le), 2),
            ('>', Some('=')) => (Tok::Cmp(CmpOp::Ge), 2),
            ('<', _) => (Tok::Cmp(CmpOp::Lt), 1),
            ('>', _) => (Tok::Cmp(CmpOp::Gt), 1),
            ('&', Some('&')) => (Tok::And, 2),
            ('|', Some('|')) => (Tok::Or, 2),
            ('!', _) => (Tok::Not, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            _ => return err(col, format!("unexpected character '{c}'")),
        };
        out.push((tok, col));
        i += width;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Tok {
        self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), DslError> {
        if self.peek() == want {
            self.bump();
            Ok(())
        } else {
            err(self.col(), format!("expected {want}, found {}", self.peek()))
        }
    }

    fn expr(&mut self) -> Result<PredExpr, DslError> {
        let mut left = self.and()?;
        while self.peek() == Tok::Or {
            self.bump();
            left = PredExpr::Or(Box::new(left), Box::new(self.and()?));
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<PredExpr, DslError> {
        let mut left = self.unary()?;
        while self.peek() == Tok::And {
            self.bump();
            left = PredExpr::And(Box::new(left), Box::new(self.unary()?));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<PredExpr, DslError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(PredExpr::Not(Box::new(self.unary()?)))
            }
            Tok::LParen => {
                // `(` opens either a predicate or an arithmetic operand.
                let save = self.pos;
                self.bump();
                let grouped = self.expr().and_then(|e| self.expect(Tok::RParen).map(|_| e));
                match grouped {
                    Ok(e) if !matches!(self.peek(), Tok::Arith(_) | Tok::Cmp(_)) => Ok(e),
                    Ok(_) | Err(_) => {
                        let first = grouped.err();
                        self.pos = save;
                        self.cmp().map_err(|e| match first {
                            Some(f) if f.column > e.column => f,
                            _ => e,
                        })
                    }
                }
            }
            _ => self.cmp(),
        }
    }

    fn cmp(&mut self) -> Result<PredExpr, DslError> {
        let left = self.arith()?;
        let Tok::Cmp(op) = self.peek() else {
            return err(self.col(), format!("expected a comparison, found {}", self.peek()));
        };
        self.bump();
        let right = self.arith()?;
        Ok(PredExpr::Cmp(op, left, right))
    }

    fn arith(&mut self) -> Result<Arith, DslError> {
        let mut left = self.term()?;
        while let Tok::Arith(op @ (ArithOp::Add | ArithOp::Sub)) = self.peek() {
            self.bump();
            left = Arith::Bin(op, Box::new(left), Box::new(self.term()?));
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<Arith, DslError> {
        let mut left = self.atom()?;
        while let Tok::Arith(op @ (ArithOp::Mul | ArithOp::Rem)) = self.peek() {
            self.bump();
            let col = self.col();
            let right = self.atom()?;
            if op == ArithOp::Rem && !matches!(right, Arith::Lit(v) if v != 0) {
                return err(col, "modulus must be a nonzero literal");
            }
            left = Arith::Bin(op, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn atom(&mut self) -> Result<Arith, DslError> {
        let col = self.col();
        match self.bump() {
            Tok::Var => Ok(Arith::Var),
            Tok::Num(v) => Ok(Arith::Lit(v)),
            Tok::LParen => {
                let inner = self.arith()?;
                self.expect(Tok::RParen)?;
                // A parenthesized literal keeps its value as a literal.
                Ok(inner)
            }
            t => err(col, format!("expected 'n', a number or '(', found {t}")),
        }
    }
}

/// Parses the predicate syntax tree.
pub fn parse_pred_expr(text: &str) -> Result<PredExpr, DslError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    if p.peek() != Tok::End {
        return err(p.col(), format!("unexpected {}", p.peek()));
    }
    Ok(e)
}

/// `{n | pred(n)}`.
pub fn parse_predicate(text: &str) -> Result<NatSet, DslError> {
    Ok(NatSet::predicate(parse_pred_expr(text)?))
}
