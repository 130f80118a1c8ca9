//! Multiplicative arithmetic functions and divisor-sum convolutions.
//!
//! Everything here is exact. Integers are `i128`/`u64`, fractions are
//! [`Rational`] (`Ratio<i128>`). Factorisation is plain trial division,
//! which is ample for the `n <= 10^7` range this crate works in.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational number used throughout the crate.
pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("table bounds differ: {left} vs {right}")]
    BoundMismatch { left: usize, right: usize },
    #[error("closed form for S_k only exists for k in {{1, 2, 4}}, got k = {0}")]
    UnsupportedK(u64),
}

/// Prime factorisation `n = prod p^e`, primes ascending. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize expects n >= 1");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

fn pow_i128(base: u64, exp: u32) -> i128 {
    (base as i128)
        .checked_pow(exp)
        .expect("divisor power overflows i128")
}

/// `sigma_ell(n) = sum_{d | n} d^ell` for `n >= 1`, and `0` for `n <= 0`.
pub fn sigma(ell: u32, n: i64) -> i128 {
    if n <= 0 {
        return 0;
    }
    factorize(n as u64)
        .into_iter()
        .map(|(p, e)| {
            let pl = pow_i128(p, ell);
            let mut term = 1i128;
            let mut acc = 1i128;
            for _ in 0..e {
                term = term.checked_mul(pl).expect("sigma overflows i128");
                acc += term;
            }
            acc
        })
        .product()
}

/// `sigma_ell(n / d)` when `d` divides `n`, else `0`.
pub fn sigma_scaled(ell: u32, n: u64, d: u64) -> i128 {
    assert!(d >= 1, "sigma_scaled expects d >= 1");
    if n % d == 0 {
        sigma(ell, (n / d) as i64)
    } else {
        0
    }
}

pub fn moebius(n: u64) -> i8 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// `prod_{p | n} (1 - 1/p^2)`, equivalently `sum_{r | n} mu(r) / r^2`.
pub fn local_factor(n: u64) -> Rational {
    factorize(n).into_iter().fold(Rational::one(), |acc, (p, _)| {
        let p2 = (p as i128) * (p as i128);
        acc * Rational::new(p2 - 1, p2)
    })
}

/// Table of `sigma_ell(m)` for `0 <= m <= bound`, filled by a divisor sieve.
#[derive(Debug, Clone)]
pub struct SigmaTable {
    ell: u32,
    values: Vec<i128>,
}

impl SigmaTable {
    pub fn new(ell: u32, bound: usize) -> Self {
        let mut values = vec![0i128; bound + 1];
        for d in 1..=bound {
            let dl = pow_i128(d as u64, ell);
            let mut m = d;
            while m <= bound {
                values[m] += dl;
                m += d;
            }
        }
        SigmaTable { ell, values }
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn bound(&self) -> usize {
        self.values.len() - 1
    }

    /// `sigma_ell(m)`, with the `0 otherwise` convention for `m <= 0`.
    pub fn get(&self, m: i64) -> i128 {
        if m <= 0 {
            0
        } else {
            self.values[m as usize]
        }
    }
}

/// An arithmetic function tabulated on `1..=bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithTable {
    values: Vec<Rational>,
}

impl ArithTable {
    pub fn from_fn(bound: usize, mut f: impl FnMut(u64) -> Rational) -> Self {
        ArithTable {
            values: (1..=bound as u64).map(&mut f).collect(),
        }
    }

    pub fn from_values(values: Vec<Rational>) -> Self {
        ArithTable { values }
    }

    /// The constant function `1`.
    pub fn one(bound: usize) -> Self {
        Self::from_fn(bound, |_| Rational::one())
    }

    /// The identity function `n -> n`.
    pub fn identity(bound: usize) -> Self {
        Self::from_fn(bound, |n| Rational::from_integer(n as i128))
    }

    pub fn moebius(bound: usize) -> Self {
        Self::from_fn(bound, |n| Rational::from_integer(moebius(n) as i128))
    }

    pub fn bound(&self) -> usize {
        self.values.len()
    }

    /// Value at `n`, `1 <= n <= bound`.
    pub fn get(&self, n: u64) -> Rational {
        self.values[(n - 1) as usize]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

/// `(f * g)(n) = sum_{d | n} f(d) g(n/d)` for every `n` up to the common bound.
pub fn dirichlet_convolve(f: &ArithTable, g: &ArithTable) -> Result<ArithTable, ArithError> {
    if f.bound() != g.bound() {
        return Err(ArithError::BoundMismatch {
            left: f.bound(),
            right: g.bound(),
        });
    }
    let n = f.bound();
    let mut out = vec![Rational::zero(); n];
    for d in 1..=n {
        let fd = f.values[d - 1];
        if fd.is_zero() {
            continue;
        }
        let mut m = d;
        let mut q = 1;
        while m <= n {
            out[m - 1] += fd * g.values[q - 1];
            m += d;
            q += 1;
        }
    }
    Ok(ArithTable { values: out })
}

/// `S_k(n) = sum_{k a + b = n, a, b >= 1} sigma_1(a) sigma_1(b)` by direct summation.
pub fn s_direct(k: u64, n: u64) -> i128 {
    assert!(k >= 1, "s_direct expects k >= 1");
    let mut acc = 0i128;
    let mut a = 1u64;
    while k * a < n {
        acc += sigma(1, a as i64) * sigma(1, (n - k * a) as i64);
        a += 1;
    }
    acc
}

/// [`s_direct`] reading `sigma_1` from a precomputed table.
pub fn s_direct_with(sigma1: &SigmaTable, k: u64, n: u64) -> i128 {
    assert_eq!(sigma1.ell(), 1, "s_direct_with needs a sigma_1 table");
    assert!(k >= 1, "s_direct_with expects k >= 1");
    let mut acc = 0i128;
    let mut a = 1u64;
    while k * a < n {
        acc += sigma1.get(a as i64) * sigma1.get((n - k * a) as i64);
        a += 1;
    }
    acc
}

fn frac(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

/// Linearised `S_k(n)` for `k in {1, 2, 4}` as a combination of
/// `sigma_3`, `n sigma_1` and `sigma_1` at `n`, `n/2`, `n/4`.
pub fn s_closed(k: u64, n: u64) -> Result<Rational, ArithError> {
    let s3 = |d: u64| Rational::from_integer(sigma_scaled(3, n, d));
    let s1 = |d: u64| Rational::from_integer(sigma_scaled(1, n, d));
    let nn = Rational::from_integer(n as i128);
    let v = match k {
        1 => frac(5, 12) * s3(1) - nn / 2 * s1(1) + frac(1, 12) * s1(1),
        2 => {
            frac(1, 12) * s3(1) + frac(1, 3) * s3(2) - frac(1, 8) * nn * s1(1)
                - frac(1, 4) * nn * s1(2)
                + frac(1, 24) * s1(1)
                + frac(1, 24) * s1(2)
        }
        4 => {
            frac(1, 48) * s3(1) + frac(1, 16) * s3(2) + frac(1, 3) * s3(4)
                - frac(1, 16) * nn * s1(1)
                - frac(1, 4) * nn * s1(4)
                + frac(1, 24) * s1(1)
                + frac(1, 24) * s1(4)
        }
        other => return Err(ArithError::UnsupportedK(other)),
    };
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn brute_sigma(ell: u32, n: u64) -> i128 {
        (1..=n)
            .filter(|d| n % d == 0)
            .map(|d| (d as i128).pow(ell))
            .sum()
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(1, 1), 1);
        assert_eq!(sigma(1, 6), 12);
        assert_eq!(sigma(3, 5), 126);
        assert_eq!(sigma(1, 0), 0);
        assert_eq!(sigma(2, -4), 0);
        assert_eq!(sigma(0, 12), 6);
    }

    #[test]
    fn sigma_matches_enumeration() {
        for ell in 0..4 {
            for n in 1..300u64 {
                assert_eq!(sigma(ell, n as i64), brute_sigma(ell, n), "ell={ell} n={n}");
            }
        }
    }

    #[test]
    fn sigma_table_matches_sigma() {
        let t = SigmaTable::new(3, 500);
        for n in 0..=500i64 {
            assert_eq!(t.get(n), sigma(3, n));
        }
        assert_eq!(t.get(-3), 0);
    }

    #[test]
    fn sigma_scaled_examples() {
        assert_eq!(sigma_scaled(3, 8, 4), 9);
        assert_eq!(sigma_scaled(1, 5, 2), 0);
        assert_eq!(sigma_scaled(1, 4, 4), 1);
    }

    #[test]
    fn moebius_and_phi_examples() {
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(9), 0);
        assert_eq!(moebius(30), -1);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(5), 4);
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn euler_phi_counts_coprime_residues() {
        for n in 1..400u64 {
            let brute = (1..=n).filter(|&k| k.gcd(&n) == 1).count() as u64;
            assert_eq!(euler_phi(n), brute);
        }
    }

    #[test]
    fn local_factor_examples() {
        assert_eq!(local_factor(1), Rational::one());
        assert_eq!(local_factor(5), Rational::new(24, 25));
        assert_eq!(local_factor(9), Rational::new(8, 9));
    }

    #[test]
    fn local_factor_is_moebius_sum() {
        for n in 1..2000u64 {
            let s: Rational = divisors(n)
                .into_iter()
                .map(|r| Rational::new(moebius(r) as i128, (r * r) as i128))
                .sum();
            assert_eq!(local_factor(n), s);
        }
    }

    #[test]
    fn moebius_sums_to_unit() {
        for n in 1..=10_000u64 {
            let s: i64 = divisors(n).into_iter().map(|d| moebius(d) as i64).sum();
            assert_eq!(s, (n == 1) as i64, "n={n}");
        }
    }

    #[test]
    fn convolution_examples() {
        let one = ArithTable::one(20);
        let id = ArithTable::identity(20);
        let mu = ArithTable::moebius(20);
        let d = dirichlet_convolve(&one, &one).unwrap();
        assert_eq!(d.get(6), Rational::from_integer(4));
        let unit = dirichlet_convolve(&mu, &one).unwrap();
        assert_eq!(unit.get(1), Rational::one());
        assert_eq!(unit.get(12), Rational::zero());
        let s1 = dirichlet_convolve(&one, &id).unwrap();
        assert_eq!(s1.get(6), Rational::from_integer(12));
    }

    #[test]
    fn convolution_rejects_mismatched_bounds() {
        let err = dirichlet_convolve(&ArithTable::one(5), &ArithTable::one(6)).unwrap_err();
        assert_eq!(err, ArithError::BoundMismatch { left: 5, right: 6 });
    }

    #[test]
    fn s_examples() {
        assert_eq!(s_direct(1, 1), 0);
        assert_eq!(s_direct(1, 5), 38);
        assert_eq!(s_direct(4, 5), 1);
        assert_eq!(s_closed(1, 5).unwrap(), Rational::from_integer(38));
        assert_eq!(s_closed(2, 3).unwrap(), Rational::from_integer(1));
        assert_eq!(s_closed(4, 5).unwrap(), Rational::from_integer(1));
        assert_eq!(s_closed(3, 5), Err(ArithError::UnsupportedK(3)));
    }

    #[test]
    fn s_closed_matches_direct_small() {
        let t = SigmaTable::new(1, 600);
        for k in [1, 2, 4] {
            for n in 1..=600 {
                let c = s_closed(k, n).unwrap();
                assert!(c.is_integer());
                assert_eq!(c.to_integer(), s_direct_with(&t, k, n), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn divisors_sorted() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
    }

    proptest! {
        #[test]
        fn sigma_is_multiplicative(m in 1u64..500, n in 1u64..500, ell in 0u32..4) {
            prop_assume!(m.gcd(&n) == 1);
            prop_assert_eq!(sigma(ell, (m * n) as i64), sigma(ell, m as i64) * sigma(ell, n as i64));
        }
    }
}
