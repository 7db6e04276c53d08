//! Exact scalar expressions on a coordinate chart: multivariate polynomials
//! over big rationals and reduced rational functions of them.
//!
//! Every value is kept in a canonical form (descending graded-lex terms,
//! numerator and denominator coprime, denominator integer-primitive with
//! positive leading coefficient), so structural equality and `is_zero` are
//! exact decision procedures. All downstream classification rests on that.

mod gcd;
mod parse;
mod poly;
mod vars;

use std::fmt;

pub use gcd::poly_gcd;
pub use parse::{parse_expression, ParseError};
pub use poly::{grlex, rat, rat_int, Polynomial, Rat, Term};
pub use vars::Vars;

use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprError {
    DivisionByZero,
    EvalAtPole,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::DivisionByZero => {
                write!(f, "division by an expression that is identically zero")
            }
            ExprError::EvalAtPole => write!(f, "evaluation point lies on a pole of the expression"),
        }
    }
}

impl std::error::Error for ExprError {}

/// Reduced rational function `num / den` on a chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expression {
    num: Polynomial,
    den: Polynomial,
}

impl Expression {
    /// Canonicalize a fraction whose parts are already coprime.
    fn scaled(num: Polynomial, den: Polynomial) -> Expression {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Expression {
                den: Polynomial::one(num.vars()),
                num,
            };
        }
        if let Some(c) = den.as_constant() {
            let num = num.scale(&c.recip());
            return Expression {
                den: Polynomial::one(num.vars()),
                num,
            };
        }
        let c = den.signed_content();
        if c.is_one() {
            Expression { num, den }
        } else {
            let r = c.recip();
            Expression {
                num: num.scale(&r),
                den: den.scale(&r),
            }
        }
    }

    /// Reduce and canonicalize an arbitrary fraction with nonzero denominator.
    fn canonical(num: Polynomial, den: Polynomial) -> Expression {
        if num.is_zero() {
            return Self::scaled(num, Polynomial::one(den.vars()));
        }
        let g = poly_gcd(&num, &den);
        if g.is_one() {
            Self::scaled(num, den)
        } else {
            Self::scaled(num.div_exact(&g), den.div_exact(&g))
        }
    }

    pub fn new(num: Polynomial, den: Polynomial) -> Result<Expression, ExprError> {
        if den.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    pub fn from_poly(num: Polynomial) -> Expression {
        let den = Polynomial::one(num.vars());
        Expression { num, den }
    }

    pub fn zero(vars: &Vars) -> Expression {
        Self::from_poly(Polynomial::zero(vars))
    }

    pub fn one(vars: &Vars) -> Expression {
        Self::from_poly(Polynomial::one(vars))
    }

    pub fn constant(vars: &Vars, c: Rat) -> Expression {
        Self::from_poly(Polynomial::constant(vars, c))
    }

    pub fn int(vars: &Vars, n: i64) -> Expression {
        Self::from_poly(Polynomial::int(vars, n))
    }

    pub fn rational(vars: &Vars, num: i64, den: i64) -> Expression {
        Self::from_poly(Polynomial::constant(vars, rat(num, den)))
    }

    pub fn variable(vars: &Vars, idx: usize) -> Expression {
        Self::from_poly(Polynomial::variable(vars, idx))
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    fn check_vars(&self, rhs: &Expression) {
        assert!(
            self.vars().same(rhs.vars()),
            "expressions on different charts"
        );
    }

    pub fn add(&self, rhs: &Expression) -> Expression {
        self.check_vars(rhs);
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Self::from_poly(self.num.add(&rhs.num));
        }
        if self.den == rhs.den {
            return Self::canonical(self.num.add(&rhs.num), self.den.clone());
        }
        let g = poly_gcd(&self.den, &rhs.den);
        if g.is_one() {
            let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
            if num.is_zero() {
                return Self::zero(self.vars());
            }
            // Coprime denominators: the sum is already reduced.
            return Self::scaled(num, self.den.mul(&rhs.den));
        }
        let b1 = self.den.div_exact(&g);
        let d1 = rhs.den.div_exact(&g);
        let num0 = self.num.mul(&d1).add(&rhs.num.mul(&b1));
        if num0.is_zero() {
            return Self::zero(self.vars());
        }
        // Any common factor of the sum with the new denominator divides g.
        let h = poly_gcd(&num0, &g);
        if h.is_one() {
            Self::scaled(num0, self.den.mul(&d1))
        } else {
            let num = num0.div_exact(&h);
            let den = g.div_exact(&h).mul(&b1).mul(&d1);
            Self::scaled(num, den)
        }
    }

    pub fn neg(&self) -> Expression {
        Expression {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, rhs: &Expression) -> Expression {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Expression) -> Expression {
        self.check_vars(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.vars());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Self::from_poly(self.num.mul(&rhs.num));
        }
        // Cross-cancel before multiplying so the final pair is born reduced.
        let g1 = poly_gcd(&self.num, &rhs.den);
        let g2 = poly_gcd(&rhs.num, &self.den);
        let a = if g1.is_one() {
            self.num.clone()
        } else {
            self.num.div_exact(&g1)
        };
        let d = if g1.is_one() {
            rhs.den.clone()
        } else {
            rhs.den.div_exact(&g1)
        };
        let c = if g2.is_one() {
            rhs.num.clone()
        } else {
            rhs.num.div_exact(&g2)
        };
        let b = if g2.is_one() {
            self.den.clone()
        } else {
            self.den.div_exact(&g2)
        };
        Self::scaled(a.mul(&c), b.mul(&d))
    }

    pub fn div(&self, rhs: &Expression) -> Result<Expression, ExprError> {
        if rhs.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(self.mul(&Self::scaled(rhs.den.clone(), rhs.num.clone())))
    }

    pub fn scale(&self, c: &Rat) -> Expression {
        if c.is_zero() {
            return Self::zero(self.vars());
        }
        Expression {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Expression {
        self.scale(&rat_int(n))
    }

    /// `self^k` with the convention `e^0 = 1`.
    pub fn pow(&self, k: u32) -> Expression {
        if k == 0 {
            return Self::one(self.vars());
        }
        Expression {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
    }

    pub fn differentiate(&self, idx: usize) -> Expression {
        if self.den.is_one() {
            return Self::from_poly(self.num.derivative(idx));
        }
        let dn = self.num.derivative(idx);
        let dd = self.den.derivative(idx);
        if dd.is_zero() {
            return Self::canonical(dn, self.den.clone());
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::canonical(num, self.den.mul(&self.den))
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Rat, ExprError> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(ExprError::EvalAtPole);
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.num.eval_f64(point) / self.den.eval_f64(point)
    }

    /// Rebuild on a larger variable list; `map[i]` is the new index of old
    /// variable `i`.
    pub fn relabel(&self, new_vars: &Vars, map: &[usize]) -> Expression {
        Self::scaled(
            self.num.relabel(new_vars, map),
            self.den.relabel(new_vars, map),
        )
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.terms().len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        // A canonical non-unit denominator is never constant, so it always
        // needs the parentheses to survive a reparse.
        write!(f, "/({})", self.den)
    }
}
