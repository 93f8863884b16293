//! Dense univariate polynomials over [`Rational`].
//!
//! Every polynomial carries a [`Variable`]: the summation index `n`, the
//! centered variable `N = n + r/2`, or the product variable `u = n(n + r)`.
//! Arithmetic refuses to mix frames; moving between them goes through the
//! explicit conversions [`RatPoly::to_centered`], [`RatPoly::to_index`],
//! [`RatPoly::to_u_form`] and [`RatPoly::from_u_form`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{rat, rat_int, Rational, RationalJson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarTag {
    /// `n`
    #[serde(rename = "n")]
    Index,
    /// `N = n + r/2`
    #[serde(rename = "N")]
    Centered,
    /// `u = n(n + r)`
    #[serde(rename = "u")]
    Product,
}

impl VarTag {
    pub fn symbol(self) -> &'static str {
        match self {
            VarTag::Index => "n",
            VarTag::Centered => "N",
            VarTag::Product => "u",
        }
    }
}

/// A variable tag plus the `r` it is centered on. For the `n` frame the `r`
/// is only a label and never blocks arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Variable {
    pub tag: VarTag,
    pub r: usize,
}

impl Variable {
    pub const fn index() -> Self {
        Variable { tag: VarTag::Index, r: 0 }
    }

    pub const fn centered(r: usize) -> Self {
        Variable { tag: VarTag::Centered, r }
    }

    pub const fn product(r: usize) -> Self {
        Variable { tag: VarTag::Product, r }
    }

    fn compatible(self, other: Variable) -> bool {
        self.tag == other.tag && (self.tag == VarTag::Index || self.r == other.r)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tag {
            VarTag::Index => f.write_str("n"),
            t => write!(f, "{}_{}", t.symbol(), self.r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Neither,
}

/// Dense polynomial, `coeffs[k]` multiplying `x^k`. Trailing zeros are
/// always trimmed, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(into = "RatPolyJson", try_from = "RatPolyJson")]
pub struct RatPoly {
    var: Variable,
    coeffs: Vec<Rational>,
}

/// Equal coefficients in compatible frames (the `r` label of `n` is ignored).
impl PartialEq for RatPoly {
    fn eq(&self, other: &Self) -> bool {
        self.var.compatible(other.var) && self.coeffs == other.coeffs
    }
}

impl Eq for RatPoly {}

impl RatPoly {
    pub fn new(var: Variable, mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { var, coeffs }
    }

    pub fn from_ints(var: Variable, coeffs: &[i64]) -> Self {
        Self::new(var, coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn zero(var: Variable) -> Self {
        RatPoly { var, coeffs: Vec::new() }
    }

    pub fn constant(var: Variable, c: Rational) -> Self {
        Self::new(var, vec![c])
    }

    pub fn one(var: Variable) -> Self {
        Self::constant(var, Rational::one())
    }

    /// `c * x^k`
    pub fn monomial(var: Variable, c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(var, coeffs)
    }

    /// The variable itself, `x`.
    pub fn x(var: Variable) -> Self {
        Self::monomial(var, Rational::one(), 1)
    }

    /// `x + c`
    pub fn linear(var: Variable, c: Rational) -> Self {
        Self::new(var, vec![c, Rational::one()])
    }

    pub fn var(&self) -> Variable {
        self.var
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    /// Same coefficients, different variable label.
    pub fn with_var(mut self, var: Variable) -> Self {
        self.var = var;
        self
    }

    /// Indices of the nonzero coefficients, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&k| !self.coeffs[k].is_zero()).collect()
    }

    fn check(&self, other: &RatPoly) -> Result<()> {
        if self.var.compatible(other.var) {
            Ok(())
        } else {
            Err(Error::VariableMismatch { left: self.var, right: other.var })
        }
    }

    pub fn checked_add(&self, other: &RatPoly) -> Result<RatPoly> {
        self.check(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Ok(Self::new(self.var, coeffs))
    }

    pub fn checked_sub(&self, other: &RatPoly) -> Result<RatPoly> {
        self.check(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Ok(Self::new(self.var, coeffs))
    }

    pub fn checked_mul(&self, other: &RatPoly) -> Result<RatPoly> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.var));
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(Self::new(self.var, coeffs))
    }

    pub fn scale(&self, c: &Rational) -> RatPoly {
        Self::new(self.var, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> RatPoly {
        (0..e).fold(Self::one(self.var), |acc, _| &acc * self)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, a| acc * x + a)
    }

    /// `p(x + c)`, expanded.
    pub fn shift(&self, c: &Rational) -> RatPoly {
        let step = Self::linear(self.var, c.clone());
        self.coeffs.iter().rev().fold(Self::zero(self.var), |acc, a| {
            &(&acc * &step) + &Self::constant(self.var, a.clone())
        })
    }

    /// `p(q(x))`; the result lives in `q`'s variable.
    pub fn compose(&self, q: &RatPoly) -> RatPoly {
        self.coeffs.iter().rev().fold(Self::zero(q.var), |acc, a| {
            &(&acc * q) + &Self::constant(q.var, a.clone())
        })
    }

    /// Even iff every odd-index coefficient vanishes, odd iff every
    /// even-index one does. The zero polynomial reports even.
    pub fn parity(&self) -> Parity {
        let vanish = |start: usize| self.coeffs.iter().skip(start).step_by(2).all(Zero::is_zero);
        if vanish(1) {
            Parity::Even
        } else if vanish(0) {
            Parity::Odd
        } else {
            Parity::Neither
        }
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, divisor: &RatPoly) -> Result<(RatPoly, RatPoly)> {
        self.check(divisor)?;
        let d = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let qlen = rem.len().saturating_sub(d);
        let mut quot = vec![Rational::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = &rem[k + d] / &lead;
            if !c.is_zero() {
                for (i, b) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * b;
                }
            }
            quot[k] = c;
        }
        Ok((Self::new(self.var, quot), Self::new(self.var, rem)))
    }

    /// Quotient of a division that must leave no remainder.
    pub fn div_exact(&self, divisor: &RatPoly) -> Result<RatPoly> {
        let (q, r) = self.div_rem(divisor)?;
        match r.degree() {
            None => Ok(q),
            Some(degree) => Err(Error::InexactDivision { degree }),
        }
    }

    /// Rewrite a polynomial in `n` as one in `N = n + r/2`.
    pub fn to_centered(&self, r: usize) -> Result<RatPoly> {
        self.expect_tag(VarTag::Index)?;
        Ok(self.shift(&-rat(r as i64, 2)).with_var(Variable::centered(r)))
    }

    /// Rewrite a polynomial in `N` or `u` back into `n`.
    pub fn to_index(&self) -> Result<RatPoly> {
        let r = self.var.r;
        let target = Variable::index();
        match self.var.tag {
            VarTag::Index => Ok(self.clone()),
            VarTag::Centered => Ok(self.shift(&rat(r as i64, 2)).with_var(target)),
            VarTag::Product => {
                let u = RatPoly::from_ints(target, &[0, r as i64, 1]);
                Ok(self.compose(&u))
            }
        }
    }

    /// Rewrite an even polynomial in `N` as a polynomial in `u = n(n+r)`,
    /// using `N^2 = u + r^2/4`.
    pub fn to_u_form(&self) -> Result<RatPoly> {
        self.expect_tag(VarTag::Centered)?;
        if self.parity() != Parity::Even {
            return Err(Error::NotEven);
        }
        let r = self.var.r;
        let halved: Vec<Rational> = self.coeffs.iter().step_by(2).cloned().collect();
        let quarter = rat((r * r) as i64, 4);
        Ok(Self::new(Variable::product(r), halved).shift(&quarter))
    }

    /// Substitute `u = N^2 - r^2/4`.
    pub fn from_u_form(&self) -> Result<RatPoly> {
        self.expect_tag(VarTag::Product)?;
        let r = self.var.r;
        let var = Variable::centered(r);
        let sq = RatPoly::new(var, vec![-rat((r * r) as i64, 4), Rational::zero(), Rational::one()]);
        Ok(self.compose(&sq))
    }

    fn expect_tag(&self, tag: VarTag) -> Result<()> {
        if self.var.tag == tag {
            Ok(())
        } else {
            Err(Error::WrongVariable {
                expected: Variable { tag, r: self.var.r },
                found: self.var,
            })
        }
    }

    /// LaTeX, descending degree, explicit `\frac`s.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let name = match self.var.tag {
            VarTag::Index => "n".to_string(),
            VarTag::Centered => format!("N_{{{}}}", self.var.r),
            VarTag::Product => "u".to_string(),
        };
        let mut out = String::new();
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let num = c.numer().abs();
            let den = c.denom();
            let power = match k {
                0 => String::new(),
                1 => name.clone(),
                _ => format!("{name}^{{{k}}}"),
            };
            let top = match (num.is_one() && k > 0, power.is_empty()) {
                (true, _) => power,
                (false, true) => num.to_string(),
                (false, false) => format!("{num} {power}"),
            };
            if den.is_one() {
                out.push_str(&top);
            } else {
                out.push_str(&format!("\\frac{{{top}}}{{{den}}}"));
            }
        }
        out
    }

    /// One `degree,numerator,denominator` row per stored coefficient.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,numerator,denominator\n");
        for (k, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{k},{},{}\n", c.numer(), c.denom()));
        }
        out
    }
}

impl fmt::Display for RatPoly {
    /// Descending degree, e.g. `N^4/99 - 35N^2/198 + 7/16`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let name = self.var.tag.symbol();
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let num = c.numer().abs();
            let power = match k {
                0 => String::new(),
                1 => name.to_string(),
                _ => format!("{name}^{k}"),
            };
            if power.is_empty() {
                write!(f, "{num}")?;
            } else if num.is_one() {
                f.write_str(&power)?;
            } else {
                write!(f, "{num}{power}")?;
            }
            if !c.denom().is_one() {
                write!(f, "/{}", c.denom())?;
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&RatPoly> for &RatPoly {
            type Output = RatPoly;
            fn $method(self, rhs: &RatPoly) -> RatPoly {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<RatPoly> for RatPoly {
            type Output = RatPoly;
            fn $method(self, rhs: RatPoly) -> RatPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Mul<&Rational> for &RatPoly {
    type Output = RatPoly;
    fn mul(self, c: &Rational) -> RatPoly {
        self.scale(c)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        self.scale(&-Rational::one())
    }
}

/// Wire form: `{"var": "n"|"N"|"u", "r": int, "coeffs": [["num","den"], ...]}`,
/// ascending degree.
#[derive(Serialize, Deserialize)]
pub struct RatPolyJson {
    pub var: VarTag,
    pub r: usize,
    pub coeffs: Vec<RationalJson>,
}

impl From<RatPoly> for RatPolyJson {
    fn from(p: RatPoly) -> Self {
        RatPolyJson {
            var: p.var.tag,
            r: p.var.r,
            coeffs: p.coeffs.into_iter().map(RationalJson).collect(),
        }
    }
}

impl TryFrom<RatPolyJson> for RatPoly {
    type Error = Error;
    fn try_from(j: RatPolyJson) -> Result<Self> {
        if j.coeffs.last().is_some_and(|c| c.0.is_zero()) {
            return Err(Error::Json("trailing zero coefficient".into()));
        }
        Ok(RatPoly {
            var: Variable { tag: j.var, r: j.r },
            coeffs: j.coeffs.into_iter().map(|c| c.0).collect(),
        })
    }
}
