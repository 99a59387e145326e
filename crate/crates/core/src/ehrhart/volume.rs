//! Normalized volume distributions `δ^r` on `[0, 1]`, the continuous
//! limits of `(1^n)^{⋆r}` after rescaling.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::polynomial::RationalPolynomial;
use super::sequence::star_power;

/// `δ^r`, stored as its polynomial piece on `[0, 1/2]`; the other half
/// is the mirror image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VolumeDistribution {
    pub r: usize,
    pub piece: RationalPolynomial,
    /// The factor that normalized this piece to total mass 1.
    pub normalization: BigRational,
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

impl VolumeDistribution {
    fn mirror(t: &BigRational) -> BigRational {
        if *t > half() {
            BigRational::one() - t
        } else {
            t.clone()
        }
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.piece.eval(&Self::mirror(t))
    }

    /// Exact evaluation at the binary value of `t`, rounded at the end;
    /// high-degree pieces cancel too much for floating-point Horner.
    pub fn eval_f64(&self, t: f64) -> f64 {
        BigRational::from_float(t)
            .map(|x| self.eval(&x).to_f64().unwrap_or(f64::NAN))
            .unwrap_or(f64::NAN)
    }

    /// `∫_0^1 δ`, exactly.
    pub fn total_mass(&self) -> BigRational {
        self.piece.definite_integral(&BigRational::zero(), &half()) * BigRational::from_integer(2.into())
    }

    /// One step of the recursion: `2∫_0^t s δ(s) ds + t ∫_t^{1-t} δ(s) ds`,
    /// normalized to mass 1.
    fn next(&self) -> VolumeDistribution {
        let p = &self.piece;
        let two = BigRational::from_integer(2.into());
        let weighted = (&RationalPolynomial::variable() * p).integral().scale(&two);
        let antiderivative = p.integral();
        // ∫_t^{1-t} δ = 2 (P(1/2) - P(t)) by symmetry
        let tail = &RationalPolynomial::constant(antiderivative.eval(&half())) - &antiderivative;
        let tail = (&RationalPolynomial::variable() * &tail).scale(&two);
        let raw = &weighted + &tail;
        let mass = raw.definite_integral(&BigRational::zero(), &half()) * &two;
        let normalization = mass.recip();
        VolumeDistribution {
            r: self.r + 1,
            piece: raw.scale(&normalization),
            normalization,
        }
    }

    /// Two-column CSV `t,delta` on `points` equally spaced samples of
    /// `[0, 1]`.
    pub fn csv(&self, points: usize) -> String {
        let mut out = String::from("t,delta\n");
        let steps = points.max(2) - 1;
        for i in 0..=steps {
            let t = BigRational::new(i.into(), steps.into());
            let value = self.eval(&t).to_f64().unwrap_or(f64::NAN);
            let _ = writeln!(out, "{:.6},{value:.9}", i as f64 / steps as f64);
        }
        out
    }
}

/// `δ^r` for `r >= 1`, starting from the uniform `δ^1 = 1`.
pub fn volume_distribution(r: usize) -> VolumeDistribution {
    let mut d = VolumeDistribution {
        r: 1,
        piece: RationalPolynomial::constant(BigRational::one()),
        normalization: BigRational::one(),
    };
    while d.r < r.max(1) {
        d = d.next();
    }
    d
}

/// `max_k |δ^r(k/n) - f(k)(n+1)/Σf|` with `f = (1^n)^{⋆r}`.
pub fn discrete_deviation(r: usize, n: usize) -> f64 {
    let d = volume_distribution(r);
    let f = star_power(n, r);
    let total = f.sum();
    (0..=n)
        .map(|k| {
            let scaled = BigRational::new(f.get(k) * BigInt::from(n + 1), total.clone());
            let exact = d.eval(&BigRational::new(k.into(), n.into()));
            (exact - scaled).to_f64().unwrap_or(f64::INFINITY).abs()
        })
        .fold(0.0, f64::max)
}

/// Gnuplot script overlaying the CSV files written for the given
/// distributions (file names as passed).
pub fn gnuplot_script(files: &[(usize, String)], output: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set terminal pngcairo size 800,600");
    let _ = writeln!(s, "set output '{output}'");
    let _ = writeln!(s, "set xrange [0:1]");
    let _ = writeln!(s, "set key top right");
    let plots: Vec<String> = files
        .iter()
        .map(|(r, f)| format!("'{f}' using 1:2 skip 1 with lines title 'delta^{r}'"))
        .collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}
