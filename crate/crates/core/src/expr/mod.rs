//! One-variable real formulas with exact first and second derivatives.
//!
//! Formulas describe the coefficient `A(x)`, the optional `B(x)` and mass
//! profiles `m(x)`. They are parsed once into an immutable [`Expr`] tree and
//! evaluated either for a plain value or as a [`Jet2`] carrying `f`, `f'`,
//! `f''` by forward-mode propagation.

mod jet;
mod parser;

use std::collections::BTreeMap;
use std::fmt;

pub use jet::Jet2;

/// Late-bound parameter values (e.g. `gamma`).
pub type Bindings = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier '{name}' at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("parameter '{0}' has no bound value")]
    UnboundParameter(String),
    #[error("domain error in '{expr}' at x = {x}: {reason}")]
    Domain {
        expr: String,
        x: f64,
        reason: &'static str,
    },
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
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Sech,
    Exp,
    Log,
    Sqrt,
    Abs,
    Atan,
    Asinh,
    Erf,
}

impl Func {
    pub const ALL: [Func; 14] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Sech,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
        Func::Atan,
        Func::Asinh,
        Func::Erf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Sech => "sech",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Atan => "atan",
            Func::Asinh => "asinh",
            Func::Erf => "erf",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Abstract syntax tree of a formula in the single variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Pi,
    Param(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Parse `text` where `params` lists the identifiers accepted as parameters.
pub fn parse(text: &str, params: &[&str]) -> Result<Expr, ExprError> {
    parser::Parser::new(text, params)?.parse_all()
}

/// Value, first and second derivative of `e` at `x`.
pub fn eval_jet(e: &Expr, x: f64, params: &Bindings) -> Result<Jet2, ExprError> {
    e.jet(x, params)
}

impl std::str::FromStr for Expr {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s, &[])
    }
}

fn is_integer(v: f64) -> bool {
    v.fract() == 0.0 && v.abs() <= i32::MAX as f64
}

impl Expr {
    pub fn depends_on_x(&self) -> bool {
        match self {
            Expr::Var => true,
            Expr::Num(_) | Expr::Pi | Expr::Param(_) => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.depends_on_x(),
            Expr::Binary(_, a, b) => a.depends_on_x() || b.depends_on_x(),
        }
    }

    /// Names of all parameters referenced by the tree.
    pub fn parameters(&self) -> Vec<String> {
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match e {
                Expr::Param(p) if !out.contains(p) => out.push(p.clone()),
                Expr::Neg(a) | Expr::Call(_, a) => walk(a, out),
                Expr::Binary(_, a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    fn domain(&self, x: f64, reason: &'static str) -> ExprError {
        ExprError::Domain {
            expr: self.to_string(),
            x,
            reason,
        }
    }

    /// Plain value at `x`. Overflow is reported as an infinite value, not an error.
    pub fn eval(&self, x: f64, params: &Bindings) -> Result<f64, ExprError> {
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::Var => x,
            Expr::Pi => std::f64::consts::PI,
            Expr::Param(p) => *params
                .get(p)
                .ok_or_else(|| ExprError::UnboundParameter(p.clone()))?,
            Expr::Neg(a) => -a.eval(x, params)?,
            Expr::Binary(op, a, b) => {
                let u = a.eval(x, params)?;
                let v = b.eval(x, params)?;
                match op {
                    BinOp::Add => u + v,
                    BinOp::Sub => u - v,
                    BinOp::Mul => u * v,
                    BinOp::Div => {
                        if v == 0.0 {
                            return Err(self.domain(x, "division by zero"));
                        }
                        u / v
                    }
                    BinOp::Pow => {
                        if !b.depends_on_x() && is_integer(v) {
                            if u == 0.0 && v < 0.0 {
                                return Err(self.domain(x, "zero raised to a negative power"));
                            }
                            u.powi(v as i32)
                        } else {
                            if u <= 0.0 {
                                return Err(self.domain(x, "non-integer power of a non-positive base"));
                            }
                            u.powf(v)
                        }
                    }
                }
            }
            Expr::Call(f, a) => {
                let u = a.eval(x, params)?;
                match f {
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                    Func::Tan => u.tan(),
                    Func::Sinh => u.sinh(),
                    Func::Cosh => u.cosh(),
                    Func::Tanh => u.tanh(),
                    Func::Sech => 1.0 / u.cosh(),
                    Func::Exp => u.exp(),
                    Func::Log => {
                        if u <= 0.0 {
                            return Err(self.domain(x, "logarithm of a non-positive value"));
                        }
                        u.ln()
                    }
                    Func::Sqrt => {
                        if u < 0.0 {
                            return Err(self.domain(x, "square root of a negative value"));
                        }
                        u.sqrt()
                    }
                    Func::Abs => u.abs(),
                    Func::Atan => u.atan(),
                    Func::Asinh => u.asinh(),
                    Func::Erf => libm::erf(u),
                }
            }
        })
    }

    /// Forward-mode evaluation of value, first and second derivative.
    pub fn jet(&self, x: f64, params: &Bindings) -> Result<Jet2, ExprError> {
        Ok(match self {
            Expr::Num(v) => Jet2::constant(*v),
            Expr::Var => Jet2::variable(x),
            Expr::Pi => Jet2::constant(std::f64::consts::PI),
            Expr::Param(p) => Jet2::constant(
                *params
                    .get(p)
                    .ok_or_else(|| ExprError::UnboundParameter(p.clone()))?,
            ),
            Expr::Neg(a) => -a.jet(x, params)?,
            Expr::Binary(op, a, b) => {
                let u = a.jet(x, params)?;
                match op {
                    BinOp::Add => u + b.jet(x, params)?,
                    BinOp::Sub => u - b.jet(x, params)?,
                    BinOp::Mul => u * b.jet(x, params)?,
                    BinOp::Div => {
                        let v = b.jet(x, params)?;
                        if v.value == 0.0 {
                            return Err(self.domain(x, "division by zero"));
                        }
                        u / v
                    }
                    BinOp::Pow => {
                        if !b.depends_on_x() {
                            let p = b.eval(x, params)?;
                            if is_integer(p) {
                                if u.value == 0.0 && p < 0.0 {
                                    return Err(self.domain(x, "zero raised to a negative power"));
                                }
                                u.powi(p as i64)
                            } else {
                                if u.value <= 0.0 {
                                    return Err(self.domain(x, "non-integer power of a non-positive base"));
                                }
                                u.powf(p)
                            }
                        } else {
                            if u.value <= 0.0 {
                                return Err(self.domain(x, "variable power of a non-positive base"));
                            }
                            (b.jet(x, params)? * u.ln()).exp()
                        }
                    }
                }
            }
            Expr::Call(f, a) => {
                let u = a.jet(x, params)?;
                match f {
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                    Func::Tan => u.tan(),
                    Func::Sinh => u.sinh(),
                    Func::Cosh => u.cosh(),
                    Func::Tanh => u.tanh(),
                    Func::Sech => u.sech(),
                    Func::Exp => u.exp(),
                    Func::Log => {
                        if u.value <= 0.0 {
                            return Err(self.domain(x, "logarithm of a non-positive value"));
                        }
                        u.ln()
                    }
                    Func::Sqrt => {
                        if u.value <= 0.0 {
                            return Err(self.domain(x, "square root of a non-positive value has no derivative"));
                        }
                        u.sqrt()
                    }
                    Func::Abs => u.abs(),
                    Func::Atan => u.atan(),
                    Func::Asinh => u.asinh(),
                    Func::Erf => u.erf(),
                }
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Binary(BinOp::Pow, ..) => 4,
            _ => 5,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, paren: bool) -> fmt::Result {
    if paren {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => {
                if v.is_sign_negative() {
                    write!(f, "(-{})", -v)
                } else {
                    write!(f, "{v}")
                }
            }
            Expr::Var => f.write_str("x"),
            Expr::Pi => f.write_str("pi"),
            Expr::Param(p) => f.write_str(p),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_child(f, a, a.precedence() < 3)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Binary(op, a, b) => {
                let p = self.precedence();
                let sym = match op {
                    BinOp::Add => " + ",
                    BinOp::Sub => " - ",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                if *op == BinOp::Pow {
                    write_child(f, a, a.precedence() <= p)?;
                    f.write_str(sym)?;
                    write_child(f, b, b.precedence() < p)
                } else {
                    write_child(f, a, a.precedence() < p)?;
                    f.write_str(sym)?;
                    write_child(f, b, b.precedence() <= p)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(v: f64) -> Box<Expr> {
        Box::new(Expr::Num(v))
    }

    #[test]
    fn parses_rational_profile() {
        let e = parse("1/(1+x^2)", &[]).unwrap();
        let expected = Expr::Binary(
            BinOp::Div,
            num(1.0),
            Box::new(Expr::Binary(
                BinOp::Add,
                num(1.0),
                Box::new(Expr::Binary(BinOp::Pow, Box::new(Expr::Var), num(2.0))),
            )),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn parses_sech_squared() {
        let e = parse("sech(x)^2", &[]).unwrap();
        assert_eq!(
            e,
            Expr::Binary(
                BinOp::Pow,
                Box::new(Expr::Call(Func::Sech, Box::new(Expr::Var))),
                num(2.0)
            )
        );
    }

    #[test]
    fn gamma_family_needs_declared_parameter() {
        assert!(parse("((gamma+x^2)/(1+x^2))^2", &["gamma"]).is_ok());
        match parse("((gamma+x^2)/(1+x^2))^2", &[]) {
            Err(ExprError::UnknownIdentifier { name, offset }) => {
                assert_eq!(name, "gamma");
                assert_eq!(offset, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        let p = |s: &str| parse(s, &[]).unwrap().eval(2.0, &Bindings::new()).unwrap();
        assert_eq!(p("2^3^2"), 512.0);
        assert_eq!(p("-x^2"), -4.0);
        assert_eq!(p("1-2-3"), -4.0);
        assert_eq!(p("8/2/2"), 2.0);
        assert_eq!(p("x^-1"), 0.5);
        assert_eq!(p("2*-x"), -4.0);
        assert_eq!(p("1.5e1 + 2E-1"), 15.2);
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse("1 + * x", &[]) {
            Err(ExprError::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse("sin(x", &[]) {
            Err(ExprError::Syntax { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("x $ 2", &[]), Err(ExprError::Syntax { offset: 2, .. })));
        assert!(matches!(parse("   ", &[]), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse("foo(x)", &[]), Err(ExprError::UnknownIdentifier { .. })));
    }

    #[test]
    fn jet_examples() {
        let b = Bindings::new();
        let j = eval_jet(&parse("x^2", &[]).unwrap(), 3.0, &b).unwrap();
        assert_eq!((j.value, j.d1, j.d2), (9.0, 6.0, 2.0));

        let j = eval_jet(&parse("sqrt(1+x^2)", &[]).unwrap(), 1.0, &b).unwrap();
        assert!((j.value - 2f64.sqrt()).abs() < 1e-15);
        assert!((j.d1 - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((j.d2 - 2f64.powf(-1.5)).abs() < 1e-15);

        let j = eval_jet(&parse("cosh(x)", &[]).unwrap(), 0.0, &b).unwrap();
        assert_eq!((j.value, j.d1, j.d2), (1.0, 0.0, 1.0));
    }

    #[test]
    fn erf_derivative() {
        let j = eval_jet(&parse("erf(x)", &[]).unwrap(), 0.7, &Bindings::new()).unwrap();
        let g = 2.0 * (-0.49f64).exp() / std::f64::consts::PI.sqrt();
        assert!((j.d1 - g).abs() < 1e-15);
        assert!((j.d2 + 1.4 * g).abs() < 1e-15);
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        let b = Bindings::new();
        let e = parse("1 + log(x - 2)", &[]).unwrap();
        match e.jet(1.0, &b) {
            Err(ExprError::Domain { expr, .. }) => assert_eq!(expr, "log(x - 2)"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse("1/x", &[]).unwrap().jet(0.0, &b).is_err());
        assert!(parse("sqrt(x)", &[]).unwrap().eval(-1.0, &b).is_err());
        assert!(parse("x^0.5", &[]).unwrap().jet(-1.0, &b).is_err());
        assert!(parse("x^-2", &[]).unwrap().eval(0.0, &b).is_err());
    }

    #[test]
    fn unbound_parameter_is_an_error() {
        let e = parse("gamma*x", &["gamma"]).unwrap();
        assert_eq!(
            e.eval(1.0, &Bindings::new()),
            Err(ExprError::UnboundParameter("gamma".into()))
        );
        let mut b = Bindings::new();
        b.insert("gamma".into(), 3.0);
        assert_eq!(e.eval(2.0, &b).unwrap(), 6.0);
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "1/(1+x^2)",
            "-(2+x^2)/(4*(1+x^2))",
            "(7-3*cosh(2*x))*sech(x)^4/8",
            "x^-2^3",
            "(x^2)^3",
            "-x^2 - -x",
            "2*(-x)",
            "((gamma+x^2)/(1+x^2))^2",
            "sqrt(pi)/2*erf(x)",
            "1e-7*x + 12345678901234567890",
        ] {
            let e = parse(s, &["gamma"]).unwrap();
            let printed = e.to_string();
            let again = parse(&printed, &["gamma"]).unwrap();
            assert_eq!(e, again, "{s} -> {printed}");
        }
    }
}
