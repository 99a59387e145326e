//! Symmetric integer sequences on `{0, …, n}` and the ⋆-product.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error("sequence is empty")]
    Empty,
    #[error("sequences have degrees {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("value at {k} differs from value at {mirror}")]
    NotSymmetric { k: usize, mirror: usize },
    #[error("value at {0} is negative")]
    Negative(usize),
}

/// A function `{0, …, n} → Z` with `f(k) = f(n - k)` and `f >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymmetricSequence {
    values: Vec<BigInt>,
}

impl SymmetricSequence {
    pub fn new(values: Vec<BigInt>) -> Result<Self, SequenceError> {
        if values.is_empty() {
            return Err(SequenceError::Empty);
        }
        let n = values.len() - 1;
        for k in 0..=n {
            if values[k].is_negative() {
                return Err(SequenceError::Negative(k));
            }
            if values[k] != values[n - k] {
                return Err(SequenceError::NotSymmetric { k, mirror: n - k });
            }
        }
        Ok(SymmetricSequence { values })
    }

    pub fn from_u64(values: &[u64]) -> Result<Self, SequenceError> {
        Self::new(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// The constant sequence `1^n`.
    pub fn ones(n: usize) -> Self {
        SymmetricSequence {
            values: vec![BigInt::one(); n + 1],
        }
    }

    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn get(&self, k: usize) -> &BigInt {
        &self.values[k]
    }

    pub fn sum(&self) -> BigInt {
        self.values.iter().sum()
    }
}

impl fmt::Display for SymmetricSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl Serialize for SymmetricSequence {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.values.iter().map(ToString::to_string))
    }
}

fn check_lengths(f: &SymmetricSequence, g: &SymmetricSequence) -> Result<usize, SequenceError> {
    if f.n() != g.n() {
        return Err(SequenceError::LengthMismatch(f.n(), g.n()));
    }
    Ok(f.n())
}

/// `f ⋆ g` by the closed rectangle formula, using stride-2 prefix sums
/// of `g`.
pub fn star(f: &SymmetricSequence, g: &SymmetricSequence) -> Result<SymmetricSequence, SequenceError> {
    let n = check_lengths(f, g)?;
    // prefix[m + 2] = g(m) + g(m - 2) + …
    let mut prefix = vec![BigInt::zero(); n + 3];
    for m in 0..=n {
        prefix[m + 2] = &prefix[m] + &g.values[m];
    }
    // g(lo) + g(lo + 2) + … + g(hi), lo ≡ hi mod 2
    let stride_sum = |lo: usize, hi: usize| &prefix[hi + 2] - &prefix[lo];
    let mut values = vec![BigInt::zero(); n + 1];
    for k in 0..=n / 2 {
        let mut corner = BigInt::zero();
        for i in 0..k {
            corner += &f.values[i] * stride_sum(k - i, k + i);
        }
        let mut middle = BigInt::zero();
        for i in k..=n - k {
            middle += &f.values[i] * stride_sum(i - k, i + k);
        }
        values[k] = corner * 2 + middle;
        values[n - k] = values[k].clone();
    }
    Ok(SymmetricSequence { values })
}

/// `f ⋆ g` straight from the definition: sum `f(x1) g(x2)` over the
/// points `x` of the dilated tetrahedron with even coordinate sum and
/// `x0 = k`.
pub fn star_by_definition(
    f: &SymmetricSequence,
    g: &SymmetricSequence,
) -> Result<SymmetricSequence, SequenceError> {
    let n = check_lengths(f, g)?;
    let mut values = vec![BigInt::zero(); n + 1];
    for (k, out) in values.iter_mut().enumerate() {
        for x1 in 0..=n {
            for x2 in 0..=n {
                let in_tetra = x1 + x2 >= k
                    && k + x2 >= x1
                    && k + x1 >= x2
                    && k + x1 + x2 <= 2 * n
                    && (k + x1 + x2) % 2 == 0;
                if in_tetra {
                    *out += &f.values[x1] * &g.values[x2];
                }
            }
        }
    }
    Ok(SymmetricSequence { values })
}

/// `(1^n)^{⋆r}`, nested to the left.
pub fn star_power(n: usize, r: usize) -> SymmetricSequence {
    let one = SymmetricSequence::ones(n);
    let mut acc = one.clone();
    for _ in 1..r {
        acc = star(&acc, &one).expect("equal lengths");
    }
    acc
}
