use super::{BinaryOp, Expression, UnaryOp};

impl Expression {
    /// Symbolic derivative with respect to `x`.
    ///
    /// `min`, `max` and `abs` differentiate piecewise; on the tie set the left
    /// argument's branch is taken (for `abs(a)`, the `a >= 0` branch). The
    /// result is constant-folded but otherwise not simplified.
    pub fn differentiate(&self) -> Expression {
        use Expression as E;
        match self {
            E::Const(_) | E::Named(_) => E::Const(0.0),
            E::Var => E::Const(1.0),
            E::Unary(op, a) => {
                let da = a.differentiate();
                let a = (**a).clone();
                match op {
                    UnaryOp::Neg => neg(da),
                    UnaryOp::Sin => mul(unary(UnaryOp::Cos, a), da),
                    UnaryOp::Cos => mul(neg(unary(UnaryOp::Sin, a)), da),
                    UnaryOp::Abs => select(E::Const(0.0), a, da.clone(), neg(da)),
                    UnaryOp::Sqrt => div(da, mul(E::Const(2.0), unary(UnaryOp::Sqrt, a))),
                    UnaryOp::Ln => div(da, a),
                }
            }
            E::Binary(op, a, b) => {
                let da = a.differentiate();
                let db = b.differentiate();
                let (a, b) = ((**a).clone(), (**b).clone());
                match op {
                    BinaryOp::Add => add(da, db),
                    BinaryOp::Sub => sub(da, db),
                    BinaryOp::Mul => add(mul(da, b.clone()), mul(a, db)),
                    BinaryOp::Div => {
                        if is_zero(&db) {
                            div(da, b)
                        } else {
                            div(sub(mul(da, b.clone()), mul(a, db)), mul(b.clone(), b))
                        }
                    }
                    BinaryOp::Pow => {
                        if b.is_constant() {
                            // b a^(b-1) a'
                            let reduced = sub(b.clone(), E::Const(1.0));
                            mul(mul(b, pow(a, reduced)), da)
                        } else if a.is_constant() {
                            // a^b ln(a) b'
                            mul(mul(pow(a.clone(), b), unary(UnaryOp::Ln, a)), db)
                        } else {
                            // a^b (b' ln a + b a' / a)
                            let tail = add(
                                mul(db, unary(UnaryOp::Ln, a.clone())),
                                div(mul(b.clone(), da), a.clone()),
                            );
                            mul(pow(a, b), tail)
                        }
                    }
                    BinaryOp::Min => select(a, b, da, db),
                    BinaryOp::Max => select(b, a, da, db),
                }
            }
            E::Select {
                lhs,
                rhs,
                if_le,
                otherwise,
            } => select(
                (**lhs).clone(),
                (**rhs).clone(),
                if_le.differentiate(),
                otherwise.differentiate(),
            ),
        }
    }
}

fn literal(e: &Expression) -> Option<f64> {
    match e {
        Expression::Const(v) => Some(*v),
        _ => None,
    }
}

fn is_zero(e: &Expression) -> bool {
    literal(e) == Some(0.0)
}

fn is_one(e: &Expression) -> bool {
    literal(e) == Some(1.0)
}

fn folded(op: BinaryOp, a: &Expression, b: &Expression) -> Option<Expression> {
    let (x, y) = (literal(a)?, literal(b)?);
    let v = match op {
        BinaryOp::Add => x + y,
        BinaryOp::Sub => x - y,
        BinaryOp::Mul => x * y,
        BinaryOp::Div => x / y,
        BinaryOp::Pow => x.powf(y),
        BinaryOp::Min => x.min(y),
        BinaryOp::Max => x.max(y),
    };
    v.is_finite().then_some(Expression::Const(v))
}

fn unary(op: UnaryOp, a: Expression) -> Expression {
    if let Some(x) = literal(&a) {
        let v = match op {
            UnaryOp::Neg => -x,
            UnaryOp::Sin => x.sin(),
            UnaryOp::Cos => x.cos(),
            UnaryOp::Abs => x.abs(),
            UnaryOp::Sqrt => x.sqrt(),
            UnaryOp::Ln => x.ln(),
        };
        if v.is_finite() {
            return Expression::Const(v);
        }
    }
    Expression::unary(op, a)
}

fn neg(a: Expression) -> Expression {
    unary(UnaryOp::Neg, a)
}

fn add(a: Expression, b: Expression) -> Expression {
    if let Some(e) = folded(BinaryOp::Add, &a, &b) {
        return e;
    }
    if is_zero(&a) {
        return b;
    }
    if is_zero(&b) {
        return a;
    }
    Expression::binary(BinaryOp::Add, a, b)
}

fn sub(a: Expression, b: Expression) -> Expression {
    if let Some(e) = folded(BinaryOp::Sub, &a, &b) {
        return e;
    }
    if is_zero(&b) {
        return a;
    }
    if is_zero(&a) {
        return neg(b);
    }
    Expression::binary(BinaryOp::Sub, a, b)
}

fn mul(a: Expression, b: Expression) -> Expression {
    if let Some(e) = folded(BinaryOp::Mul, &a, &b) {
        return e;
    }
    if is_zero(&a) || is_zero(&b) {
        return Expression::Const(0.0);
    }
    if is_one(&a) {
        return b;
    }
    if is_one(&b) {
        return a;
    }
    Expression::binary(BinaryOp::Mul, a, b)
}

fn div(a: Expression, b: Expression) -> Expression {
    if let Some(e) = folded(BinaryOp::Div, &a, &b) {
        return e;
    }
    if is_one(&b) {
        return a;
    }
    if is_zero(&a) && !is_zero(&b) {
        return Expression::Const(0.0);
    }
    Expression::binary(BinaryOp::Div, a, b)
}

fn pow(a: Expression, b: Expression) -> Expression {
    if let Some(e) = folded(BinaryOp::Pow, &a, &b) {
        return e;
    }
    if is_one(&b) {
        return a;
    }
    Expression::binary(BinaryOp::Pow, a, b)
}

fn select(lhs: Expression, rhs: Expression, if_le: Expression, otherwise: Expression) -> Expression {
    if if_le == otherwise {
        return if_le;
    }
    if let (Some(l), Some(r)) = (literal(&lhs), literal(&rhs)) {
        return if l <= r { if_le } else { otherwise };
    }
    Expression::select(lhs, rhs, if_le, otherwise)
}
