//! Univariate polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// Coefficients in ascending degree, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        RationalPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn variable() -> Self {
        Self::from_integers(&[0, 1])
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: i64) -> BigRational {
        self.eval(&BigRational::from_integer(x.into()))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Antiderivative vanishing at 0.
    pub fn integral(&self) -> Self {
        let mut out = vec![BigRational::zero()];
        for (i, c) in self.coeffs.iter().enumerate() {
            out.push(c / BigRational::from_integer(BigInt::from(i + 1)));
        }
        Self::new(out)
    }

    /// `∫_a^b p`.
    pub fn definite_integral(&self, a: &BigRational, b: &BigRational) -> BigRational {
        let p = self.integral();
        p.eval(b) - p.eval(a)
    }

    /// The unique polynomial of degree `< points.len()` through the given
    /// points, by Lagrange interpolation.
    pub fn interpolate(points: &[(BigRational, BigRational)]) -> Self {
        let mut total = Self::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = Self::constant(yi.clone());
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    let factor = Self::new(vec![-xj.clone(), BigRational::one()]);
                    basis = &basis * &factor;
                    basis = basis.scale(&(xi - xj).recip());
                }
            }
            total = &total + &basis;
        }
        total
    }

    /// Divide by `(t + a)` when it is a factor.
    fn divide_by_linear(&self, a: &BigInt) -> Option<Self> {
        let root = BigRational::from_integer(-a);
        if !self.eval(&root).is_zero() {
            return None;
        }
        let d = self.degree()?;
        let mut q = vec![BigRational::zero(); d];
        let mut carry = BigRational::zero();
        for k in (1..=d).rev() {
            carry = &self.coeffs[k] + carry * &root;
            q[k - 1] = carry.clone();
        }
        Some(Self::new(q))
    }

    /// `(c/D)`, the integer-root linear factors `t + a` (ascending `a`,
    /// with multiplicity), and the remaining primitive integer factor.
    pub fn factored(&self) -> Option<(BigRational, Vec<BigInt>, Vec<BigInt>)> {
        self.degree()?;
        let denom = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(denom.clone())).to_integer())
            .collect();
        let mut content = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if ints.last().is_some_and(Signed::is_negative) {
            content = -content;
        }
        let scalar = BigRational::new(content.clone(), denom);
        let mut rest = self.scale(&scalar.recip());
        let mut roots = Vec::new();
        loop {
            // integer roots divide the constant term (or are zero)
            let c0 = rest.coeffs[0].to_integer();
            let mut candidates: Vec<BigInt> = if c0.is_zero() {
                vec![BigInt::zero()]
            } else {
                divisors(&c0.abs())
                    .into_iter()
                    .flat_map(|d| [d.clone(), -d])
                    .collect()
            };
            candidates.sort();
            let hit = candidates
                .iter()
                .find_map(|a| rest.divide_by_linear(a).map(|q| (a.clone(), q)));
            match hit {
                Some((a, q)) if rest.degree() > Some(0) => {
                    roots.push(a);
                    rest = q;
                }
                _ => break,
            }
        }
        roots.sort();
        let rest = rest.coeffs.iter().map(|c| c.to_integer()).collect();
        Some((scalar, roots, rest))
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // integer roots of the polynomials here are small; bound the search
    let limit = BigInt::from(10_000);
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d <= n && d <= limit {
        if (n % &d).is_zero() {
            out.push(d.clone());
        }
        d += 1;
    }
    out
}

fn write_terms(f: &mut fmt::Formatter<'_>, coeffs: &[BigRational], var: &str) -> fmt::Result {
    let mut first = true;
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
        let a = c.abs();
        let body = match (k, a.is_one()) {
            (0, _) => a.to_string(),
            (1, true) => var.to_string(),
            (1, false) => format!("{a}{var}"),
            (_, true) => format!("{var}^{k}"),
            (_, false) => format!("{a}{var}^{k}"),
        };
        write!(f, "{sign}{body}")?;
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl RationalPolynomial {
    /// Factored rendering in the variable `var`, e.g.
    /// `(1/30)(n+1)(n+2)(n+3)(n^2+4n+5)`.
    pub fn display_in(&self, var: &str) -> String {
        let Some((scalar, roots, rest)) = self.factored() else {
            return "0".into();
        };
        let rest: Vec<BigRational> = rest.into_iter().map(BigRational::from_integer).collect();
        let trivial_rest = rest.len() == 1 && rest[0].is_one();
        let mut out = String::new();
        if !scalar.is_one() || (roots.is_empty() && trivial_rest) {
            out += &format!("({scalar})");
        }
        for a in &roots {
            if a.is_zero() {
                out += var;
            } else if a.is_negative() {
                out += &format!("({var}-{})", -a);
            } else {
                out += &format!("({var}+{a})");
            }
        }
        if !trivial_rest {
            out += &format!("({})", Terms(&rest, var));
        }
        out
    }
}

struct Terms<'a>(&'a [BigRational], &'a str);

impl fmt::Display for Terms<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.0, self.1)
    }
}

/// Rendering in the variable `n`.
impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("n"))
    }
}

impl Serialize for RationalPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(ToString::to_string))
    }
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(self, o: &RationalPolynomial) -> RationalPolynomial {
        let len = self.coeffs.len().max(o.coeffs.len());
        let z = BigRational::zero();
        RationalPolynomial::new(
            (0..len)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, o: &RationalPolynomial) -> RationalPolynomial {
        self + &o.scale(&-BigRational::one())
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, o: &RationalPolynomial) -> RationalPolynomial {
        if self.is_zero() || o.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPolynomial::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let p = RationalPolynomial::from_integers(&[6, 11, 6, 1]).scale(&BigRational::new(1.into(), 6.into()));
        let pts: Vec<_> = (0..4).map(|n| (q(n), p.eval_int(n))).collect();
        assert_eq!(RationalPolynomial::interpolate(&pts), p);
        assert_eq!(p.to_string(), "(1/6)(n+1)(n+2)(n+3)");
        assert_eq!(p.eval_int(4), q(35));
    }

    #[test]
    fn display_with_irreducible_factor() {
        // (n+1)(n^2+4n+5)/30
        let p = &RationalPolynomial::from_integers(&[1, 1]) * &RationalPolynomial::from_integers(&[5, 4, 1]);
        let p = p.scale(&BigRational::new(1.into(), 30.into()));
        assert_eq!(p.to_string(), "(1/30)(n+1)(n^2+4n+5)");
        assert_eq!(RationalPolynomial::from_integers(&[0, -2, 0, 2]).to_string(), "(2)(n-1)n(n+1)");
        assert_eq!(RationalPolynomial::from_integers(&[3]).to_string(), "(3)");
        assert_eq!(RationalPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn integrals() {
        let p = RationalPolynomial::from_integers(&[0, 6, -6]);
        assert_eq!(p.definite_integral(&q(0), &q(1)), q(1));
        assert_eq!((&p - &p).degree(), None);
    }
}
