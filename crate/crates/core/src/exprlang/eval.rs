use std::fmt;

use thiserror::Error;

use crate::Scalar;

use super::{BinaryOp, Expression, UnaryOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainErrorKind {
    DivisionByZero,
    ZeroToNegativePower,
    SqrtOfNegative,
    LogOfNonPositive,
    /// Any other operation whose result is not a finite real.
    NonFinite,
}

impl fmt::Display for DomainErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainErrorKind::DivisionByZero => "division by zero",
            DomainErrorKind::ZeroToNegativePower => "zero raised to a negative power",
            DomainErrorKind::SqrtOfNegative => "square root of a negative number",
            DomainErrorKind::LogOfNonPositive => "logarithm of a non-positive number",
            DomainErrorKind::NonFinite => "non-finite result",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("{kind} in `{node}` at x = {x}")]
    Domain {
        kind: DomainErrorKind,
        node: String,
        x: f64,
    },
    #[error("evaluation point x = {0} is not finite")]
    NonFiniteInput(f64),
}

impl Expression {
    /// Evaluates the expression at `x`. Literals are converted to `T` on use.
    pub fn evaluate<T: Scalar>(&self, x: T) -> Result<T, EvalError> {
        if !x.is_finite() {
            return Err(EvalError::NonFiniteInput(x.as_f64()));
        }
        self.eval_at(x)
    }

    fn eval_at<T: Scalar>(&self, x: T) -> Result<T, EvalError> {
        let fail = |kind| EvalError::Domain {
            kind,
            node: self.to_string(),
            x: x.as_f64(),
        };
        let value = match self {
            Expression::Const(v) => T::lit(*v),
            Expression::Named(c) => T::lit(c.value()),
            Expression::Var => x,
            Expression::Unary(op, a) => {
                let a = a.eval_at(x)?;
                match op {
                    UnaryOp::Neg => -a,
                    UnaryOp::Sin => a.sin(),
                    UnaryOp::Cos => a.cos(),
                    UnaryOp::Abs => a.abs(),
                    UnaryOp::Sqrt => {
                        if a < T::zero() {
                            return Err(fail(DomainErrorKind::SqrtOfNegative));
                        }
                        a.sqrt()
                    }
                    UnaryOp::Ln => {
                        if a <= T::zero() {
                            return Err(fail(DomainErrorKind::LogOfNonPositive));
                        }
                        a.ln()
                    }
                }
            }
            Expression::Binary(op, a, b) => {
                let a = a.eval_at(x)?;
                let b = b.eval_at(x)?;
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div => {
                        if b == T::zero() {
                            return Err(fail(DomainErrorKind::DivisionByZero));
                        }
                        a / b
                    }
                    BinaryOp::Pow => {
                        if a == T::zero() && b < T::zero() {
                            return Err(fail(DomainErrorKind::ZeroToNegativePower));
                        }
                        a.powf(b)
                    }
                    BinaryOp::Min => a.min(b),
                    BinaryOp::Max => a.max(b),
                }
            }
            Expression::Select {
                lhs,
                rhs,
                if_le,
                otherwise,
            } => {
                if lhs.eval_at(x)? <= rhs.eval_at(x)? {
                    if_le.eval_at(x)?
                } else {
                    otherwise.eval_at(x)?
                }
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(fail(DomainErrorKind::NonFinite))
        }
    }
}
