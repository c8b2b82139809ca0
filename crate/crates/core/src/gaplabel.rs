//! The stationary dimension group, its state and the frequency module.

use std::fmt;

use dashu_int::IBig;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::rational::{int, ExactRational as Q};

/// The module `c·Z[1/λ]` in normal form: `c > 0` with numerator and
/// denominator coprime to `λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreqModule {
    pub coefficient: Q,
    pub base: i64,
    pub dim: u32,
}

impl fmt::Display for FreqModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.coefficient;
        if c.is_integer() {
            write!(f, "{}·Z[1/{}]", c, self.base)
        } else {
            write!(f, "({})·Z[1/{}]", c, self.base)
        }
    }
}

/// The class `[k, n]` of the direct limit of `Z^r` under `A′ = Aᵀ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitElement {
    pub vector: Vec<IBig>,
    pub level: u32,
}

impl LimitElement {
    pub fn new(vector: Vec<IBig>, level: u32) -> Self {
        LimitElement { vector, level }
    }

    /// The all-ones vector at level 1.
    pub fn order_unit(n: usize) -> Self {
        LimitElement::new(vec![IBig::ONE; n], 1)
    }

    /// `[A′k, n+1]`, the same element one step further in the limit.
    pub fn advance(&self, a: &IntMatrix) -> Result<Self> {
        Ok(LimitElement::new(a.transpose().mul_vec(&self.vector)?, self.level + 1))
    }
}

/// `(1/D)·(1/λ^(n−1))·Σ kᵢ α′ᵢ`.
pub fn state(e: &LimitElement, alpha_prime: &[IBig], d: &IBig, lambda: i64) -> Result<Q> {
    if e.vector.len() != alpha_prime.len() {
        return Err(Error::DimensionMismatch { expected: alpha_prime.len(), got: e.vector.len() });
    }
    let dot: IBig = e.vector.iter().zip(alpha_prime).map(|(k, a)| k * a).sum();
    let scale = Q::from(lambda).pow(e.level as i64 - 1);
    Ok(Q::from(dot) / (Q::from(d.clone()) * scale))
}

fn strip_base(n: &IBig, primes: &[u64]) -> IBig {
    primes.iter().fold(n.clone(), |m, &p| int::strip_factor(&m, p))
}

pub fn gap_module(alpha_prime: &[IBig], d: &IBig, lambda: i64) -> FreqModule {
    let g = alpha_prime.iter().fold(IBig::ZERO, |g, x| int::gcd(&g, x));
    let c = Q::new(g, d.clone()).expect("nonzero denominator");
    let primes = int::prime_factors(lambda.unsigned_abs());
    let num = strip_base(c.numer(), &primes);
    let den = strip_base(&c.denom(), &primes);
    FreqModule { coefficient: Q::new(num, den).expect("nonzero"), base: lambda, dim: 1 }
}

/// `αᵢ / λ^l`, the frequency of class `id` among level-`l` supertiles.
pub fn class_frequency(alpha: &[Q], id: usize, level: u32, lambda: i64) -> Result<Q> {
    let a = alpha.get(id).ok_or(Error::UnknownClass(id))?;
    Ok(a / &Q::from(lambda).pow(level as i64))
}

/// Whether `x ∈ c·Z[1/λ]`.
pub fn membership(x: &Q, m: &FreqModule) -> bool {
    let r = x / &m.coefficient;
    let primes = int::prime_factors(m.base.unsigned_abs());
    strip_base(&r.denom(), &primes) == IBig::ONE
}
