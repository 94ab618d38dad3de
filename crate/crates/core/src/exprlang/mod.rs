//! A small expression language for user-supplied generators `phi(x)`.
//!
//! Grammar, lowest to highest precedence:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          right-associative
//! primary := number | 'x' | 'pi' | 'e' | '(' expr ')'
//!          | f '(' expr ')'                f in sin cos abs sqrt ln
//!          | g '(' expr ',' expr ')'       g in min max
//!          | 'ifle' '(' expr ',' expr ',' expr ',' expr ')'
//! ```
//!
//! `ifle(a, b, p, q)` is `p` when `a <= b` and `q` otherwise. Together with
//! `ln` it exists so that every derivative produced by [`Expression::differentiate`]
//! can be printed and parsed back.

mod diff;
mod eval;
mod parse;

use std::fmt;

pub use eval::{DomainErrorKind, EvalError};
pub use parse::{parse, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedConst {
    Pi,
    E,
}

impl NamedConst {
    pub fn value(self) -> f64 {
        match self {
            NamedConst::Pi => std::f64::consts::PI,
            NamedConst::E => std::f64::consts::E,
        }
    }

    fn name(self) -> &'static str {
        match self {
            NamedConst::Pi => "pi",
            NamedConst::E => "e",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Abs,
    Sqrt,
    Ln,
}

impl UnaryOp {
    fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Abs => "abs",
            UnaryOp::Sqrt => "sqrt",
            UnaryOp::Ln => "ln",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Min,
    Max,
}

impl BinaryOp {
    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Pow => "^",
            BinaryOp::Min => "min",
            BinaryOp::Max => "max",
        }
    }
}

/// Expression tree in the single variable `x`. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Const(f64),
    Named(NamedConst),
    Var,
    Unary(UnaryOp, Box<Expression>),
    Binary(BinaryOp, Box<Expression>, Box<Expression>),
    /// `if lhs <= rhs { if_le } else { otherwise }`
    Select {
        lhs: Box<Expression>,
        rhs: Box<Expression>,
        if_le: Box<Expression>,
        otherwise: Box<Expression>,
    },
}

impl Expression {
    pub fn constant(value: f64) -> Self {
        Expression::Const(value)
    }

    pub fn unary(op: UnaryOp, arg: Expression) -> Self {
        Expression::Unary(op, Box::new(arg))
    }

    pub fn binary(op: BinaryOp, lhs: Expression, rhs: Expression) -> Self {
        Expression::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn select(lhs: Expression, rhs: Expression, if_le: Expression, otherwise: Expression) -> Self {
        Expression::Select {
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
            if_le: Box::new(if_le),
            otherwise: Box::new(otherwise),
        }
    }

    /// True when the expression does not mention `x`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expression::Const(_) | Expression::Named(_) => true,
            Expression::Var => false,
            Expression::Unary(_, a) => a.is_constant(),
            Expression::Binary(_, a, b) => a.is_constant() && b.is_constant(),
            Expression::Select {
                lhs,
                rhs,
                if_le,
                otherwise,
            } => lhs.is_constant() && rhs.is_constant() && if_le.is_constant() && otherwise.is_constant(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expression::Const(_) | Expression::Named(_) | Expression::Var => 1,
            Expression::Unary(_, a) => 1 + a.size(),
            Expression::Binary(_, a, b) => 1 + a.size() + b.size(),
            Expression::Select {
                lhs,
                rhs,
                if_le,
                otherwise,
            } => 1 + lhs.size() + rhs.size() + if_le.size() + otherwise.size(),
        }
    }
}

/// Prints a fully parenthesised form that [`parse`] reads back into a tree
/// evaluating with exactly the same floating point operations.
impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Const(v) => {
                if v.is_sign_negative() {
                    write!(f, "(-{:?})", -v)
                } else {
                    write!(f, "{v:?}")
                }
            }
            Expression::Named(c) => f.write_str(c.name()),
            Expression::Var => f.write_str("x"),
            Expression::Unary(UnaryOp::Neg, a) => write!(f, "(-{a})"),
            Expression::Unary(op, a) => write!(f, "{}({a})", op.name()),
            Expression::Binary(op @ (BinaryOp::Min | BinaryOp::Max), a, b) => {
                write!(f, "{}({a}, {b})", op.symbol())
            }
            Expression::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expression::Select {
                lhs,
                rhs,
                if_le,
                otherwise,
            } => write!(f, "ifle({lhs}, {rhs}, {if_le}, {otherwise})"),
        }
    }
}
