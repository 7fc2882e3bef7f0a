//! Arithmetic predicates over a single natural variable `n`.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    /// Truncated at zero.
    Sub,
    Mul,
    Rem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arith {
    Var,
    Lit(u64),
    Bin(ArithOp, Box<Arith>, Box<Arith>),
}

/// Boolean predicate over `n`. Evaluation is total: arithmetic saturates,
/// subtraction truncates at 0 and `%` only ever sees nonzero literal divisors
/// (enforced by [`PredExpr::validate`] and the parser).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PredExpr {
    Cmp(CmpOp, Arith, Arith),
    And(Box<PredExpr>, Box<PredExpr>),
    Or(Box<PredExpr>, Box<PredExpr>),
    Not(Box<PredExpr>),
}

impl Arith {
    pub fn eval(&self, n: u64) -> u64 {
        match self {
            Arith::Var => n,
            Arith::Lit(v) => *v,
            Arith::Bin(op, a, b) => {
                let (a, b) = (a.eval(n), b.eval(n));
                match op {
                    ArithOp::Add => a.saturating_add(b),
                    ArithOp::Sub => a.saturating_sub(b),
                    ArithOp::Mul => a.saturating_mul(b),
                    ArithOp::Rem => a.checked_rem(b).unwrap_or(0),
                }
            }
        }
    }

    fn zero_modulus(&self) -> bool {
        match self {
            Arith::Var | Arith::Lit(_) => false,
            Arith::Bin(ArithOp::Rem, a, b) => {
                !matches!(**b, Arith::Lit(v) if v != 0) || a.zero_modulus()
            }
            Arith::Bin(_, a, b) => a.zero_modulus() || b.zero_modulus(),
        }
    }

    fn size(&self) -> usize {
        match self {
            Arith::Var | Arith::Lit(_) => 1,
            Arith::Bin(_, a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl PredExpr {
    pub fn eval(&self, n: u64) -> bool {
        match self {
            PredExpr::Cmp(op, a, b) => {
                let (a, b) = (a.eval(n), b.eval(n));
                match op {
                    CmpOp::Eq => a == b,
                    CmpOp::Ne => a != b,
                    CmpOp::Lt => a < b,
                    CmpOp::Le => a <= b,
                    CmpOp::Gt => a > b,
                    CmpOp::Ge => a >= b,
                }
            }
            PredExpr::And(a, b) => a.eval(n) && b.eval(n),
            PredExpr::Or(a, b) => a.eval(n) || b.eval(n),
            PredExpr::Not(a) => !a.eval(n),
        }
    }

    /// True when every `%` has a nonzero literal right operand.
    pub fn validate(&self) -> bool {
        match self {
            PredExpr::Cmp(_, a, b) => !a.zero_modulus() && !b.zero_modulus(),
            PredExpr::And(a, b) | PredExpr::Or(a, b) => a.validate() && b.validate(),
            PredExpr::Not(a) => a.validate(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            PredExpr::Cmp(_, a, b) => 1 + a.size() + b.size(),
            PredExpr::And(a, b) | PredExpr::Or(a, b) => 1 + a.size() + b.size(),
            PredExpr::Not(a) => 1 + a.size(),
        }
    }
}

impl fmt::Display for ArithOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Rem => "%",
        })
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        })
    }
}

// Printing is fully parenthesized so that it re-parses to the same tree.
impl fmt::Display for Arith {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arith::Var => f.write_str("n"),
            Arith::Lit(v) => write!(f, "{v}"),
            Arith::Bin(op, a, b) => write!(f, "({a} {op} {b})"),
        }
    }
}

impl fmt::Display for PredExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredExpr::Cmp(op, a, b) => write!(f, "{a} {op} {b}"),
            PredExpr::And(a, b) => write!(f, "({a} && {b})"),
            PredExpr::Or(a, b) => write!(f, "({a} || {b})"),
            PredExpr::Not(a) => write!(f, "!({a})"),
        }
    }
}
