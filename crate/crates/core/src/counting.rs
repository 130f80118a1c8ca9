//! Closed-form counts of primitive type A / type B surfaces and the
//! component sums they are assembled from.
//!
//! `n` is odd unless a function says otherwise; the counts have no
//! geometric meaning for even `n`.

use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::arith::{divisors, euler_phi, local_factor, moebius, sigma, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("n = {0} is even; type counts are only defined for odd n")]
    EvenArgument(u64),
    #[error("n must be at least {min}, got {n}")]
    TooSmall { n: u64, min: u64 },
    #[error("{what} produced the non-integral or negative value {value}")]
    NotIntegral { what: &'static str, value: Rational },
}

fn require_odd(n: u64, min: u64) -> Result<(), CountError> {
    if n < min {
        return Err(CountError::TooSmall { n, min });
    }
    if n % 2 == 0 {
        return Err(CountError::EvenArgument(n));
    }
    Ok(())
}

fn to_count(what: &'static str, value: Rational) -> Result<u64, CountError> {
    if !value.is_integer() || value.is_negative() {
        return Err(CountError::NotIntegral { what, value });
    }
    Ok(value.to_integer() as u64)
}

fn q(n: u64) -> Rational {
    Rational::from_integer(n as i128)
}

/// `(3/16)(n-1) n^2 prod_{p|n}(1 - 1/p^2)` for every `n >= 1`, not only odd ones.
pub fn a_primitive_extended(n: u64) -> Rational {
    assert!(n >= 1);
    Rational::new(3, 16) * (q(n) - 1) * q(n) * q(n) * local_factor(n)
}

/// Size of the primitive orbit `A_n`.
pub fn a_primitive(n: u64) -> Result<u64, CountError> {
    require_odd(n, 1)?;
    to_count("a_primitive", a_primitive_extended(n))
}

/// Size of the primitive orbit `B_n` (zero for `n = 1`).
pub fn b_primitive(n: u64) -> Result<u64, CountError> {
    require_odd(n, 1)?;
    if n == 1 {
        return Ok(0);
    }
    let v = Rational::new(3, 16) * (q(n) - 3) * q(n) * q(n) * local_factor(n);
    to_count("b_primitive", v)
}

/// `(3/16)(sigma_3(n) - n sigma_1(n))`: all type A surfaces for odd `n`,
/// a formal rational value for even `n`.
pub fn a_total(n: u64) -> Rational {
    assert!(n >= 1);
    let s3 = sigma(3, n as i64);
    let s1 = sigma(1, n as i64);
    Rational::new(3, 16) * Rational::from_integer(s3 - n as i128 * s1)
}

/// `sum_{d | n} sigma_1(n/d) a^p_d`, with `a^p` extended to even `d`.
pub fn a_total_by_convolution(n: u64) -> Rational {
    divisors(n)
        .into_iter()
        .map(|d| Rational::from_integer(sigma(1, (n / d) as i64)) * a_primitive_extended(d))
        .sum()
}

/// All type B surfaces with `n` squares: `sum_{d | n} sigma_1(n/d) b^p_d`.
pub fn b_total(n: u64) -> Result<u64, CountError> {
    require_odd(n, 1)?;
    let mut acc = 0u64;
    for d in divisors(n) {
        acc += sigma(1, (n / d) as i64) as u64 * b_primitive(d)?;
    }
    Ok(acc)
}

/// Component of the primitive count selected by [`component_count`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    /// All primitive two-cylinder surfaces, both types.
    TwoCylTotal,
    /// Primitive type A two-cylinder surfaces with both heights odd.
    TwoCylOddHeightsA,
    /// Primitive type A two-cylinder surfaces with one even height and one even width.
    TwoCylMixedA,
    /// Primitive type A one-cylinder surfaces.
    OneCylA,
    /// Primitive two-cylinder surfaces with an even height, both types.
    TwoCylEvenHeight,
}

impl ComponentKind {
    pub const ALL: [ComponentKind; 5] = [
        ComponentKind::TwoCylTotal,
        ComponentKind::TwoCylOddHeightsA,
        ComponentKind::TwoCylMixedA,
        ComponentKind::OneCylA,
        ComponentKind::TwoCylEvenHeight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ComponentKind::TwoCylTotal => "two_cyl_total",
            ComponentKind::TwoCylOddHeightsA => "two_cyl_odd_heights_A",
            ComponentKind::TwoCylMixedA => "two_cyl_mixed_A",
            ComponentKind::OneCylA => "one_cyl_A",
            ComponentKind::TwoCylEvenHeight => "two_cyl_even_height",
        }
    }
}

fn half_n_phi(n: u64) -> Rational {
    q(n) * q(euler_phi(n)) / 2
}

/// Closed form of one component of the primitive counts, `n` odd and `>= 3`.
///
/// `TwoCylTotal` carries `+ (n/2) phi(n)`; the variant printed with a minus
/// sign is [`two_cyl_total_as_printed`].
pub fn component_count(kind: ComponentKind, n: u64) -> Result<u64, CountError> {
    require_odd(n, 3)?;
    let p = local_factor(n);
    let nn = q(n);
    let v = match kind {
        ComponentKind::TwoCylTotal => nn * nn * (nn * 5 - 18) / 24 * p + half_n_phi(n),
        ComponentKind::TwoCylOddHeightsA => nn * nn * (nn - 1) / 8 * p,
        ComponentKind::TwoCylMixedA => nn * nn * (nn - 3) / 48 * p,
        ComponentKind::OneCylA => nn * nn * nn / 24 * p,
        ComponentKind::TwoCylEvenHeight => nn * nn * (nn * 2 - 15) / 24 * p + half_n_phi(n),
    };
    to_count(kind.name(), v)
}

/// The two-cylinder total with `- (n/2) phi(n)`, kept to document the sign
/// error it contains (it is `-3` at `n = 5`, where 17 surfaces exist).
pub fn two_cyl_total_as_printed(n: u64) -> Rational {
    let nn = q(n);
    nn * nn * (nn * 5 - 18) / 24 * local_factor(n) - half_n_phi(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountBreakdown {
    pub n: u64,
    pub one_cyl_a: u64,
    pub two_cyl_odd_heights_a: u64,
    pub two_cyl_mixed_a: u64,
    pub total_primitive_a: u64,
}

pub fn breakdown(n: u64) -> Result<CountBreakdown, CountError> {
    let one_cyl_a = component_count(ComponentKind::OneCylA, n)?;
    let two_cyl_odd_heights_a = component_count(ComponentKind::TwoCylOddHeightsA, n)?;
    let two_cyl_mixed_a = component_count(ComponentKind::TwoCylMixedA, n)?;
    Ok(CountBreakdown {
        n,
        one_cyl_a,
        two_cyl_odd_heights_a,
        two_cyl_mixed_a,
        total_primitive_a: one_cyl_a + two_cyl_odd_heights_a + two_cyl_mixed_a,
    })
}

/// Calls `f(h1, u1, h2, u2)` for every positive quadruple with
/// `h1 u1 + h2 u2 = m`, `gcd(h1, h2) = 1` and `u1 < u2`.
fn for_each_coprime_split(m: u64, mut f: impl FnMut(u64, u64, u64, u64)) {
    for h1 in 1..m {
        let mut u1 = 1;
        while h1 * u1 < m {
            let rest = m - h1 * u1;
            for h2 in 1..=rest {
                if rest % h2 == 0 && h1.gcd(&h2) == 1 {
                    let u2 = rest / h2;
                    if u1 < u2 {
                        f(h1, u1, h2, u2);
                    }
                }
            }
            u1 += 1;
        }
    }
}

/// Number of ordered triples of odd positive integers summing to `m`.
fn odd_triples(m: u64) -> u64 {
    if m < 3 || m % 2 == 0 {
        return 0;
    }
    // u_i = 2 v_i + 1 with v_1 + v_2 + v_3 = (m - 3)/2
    let s = (m - 3) / 2;
    (s + 1) * (s + 2) / 2
}

/// Sum of `u1 u2` over coprime heights, both odd, `h1 u1 + h2 u2 = n/r`.
pub fn alpha1(n: u64, r: u64) -> Rational {
    let mut acc = 0u64;
    for_each_coprime_split(n / r, |h1, u1, h2, u2| {
        if h1 % 2 == 1 && h2 % 2 == 1 {
            acc += u1 * u2;
        }
    });
    q(acc)
}

/// Half the sum of `u1 u2` over coprime heights with an even one and
/// widths with an even one, `h1 u1 + h2 u2 = n/r`.
pub fn alpha2(n: u64, r: u64) -> Rational {
    let mut acc = 0u64;
    for_each_coprime_split(n / r, |h1, u1, h2, u2| {
        if (h1 % 2 == 0 || h2 % 2 == 0) && (u1 % 2 == 0 || u2 % 2 == 0) {
            acc += u1 * u2;
        }
    });
    q(acc) / 2
}

/// `(n/3)` times the number of odd triples summing to `n/r`.
pub fn alpha3(n: u64, r: u64) -> Rational {
    q(n) / 3 * q(odd_triples(n / r))
}

/// `sum_{r | n} mu(r) [r alpha1 + r alpha2 + alpha3]`.
pub fn a_primitive_assembled(n: u64) -> Result<u64, CountError> {
    require_odd(n, 1)?;
    let v: Rational = divisors(n)
        .into_iter()
        .map(|r| {
            let mu = moebius(r) as i128;
            if mu == 0 {
                return Rational::zero();
            }
            Rational::from_integer(mu) * (q(r) * alpha1(n, r) + q(r) * alpha2(n, r) + alpha3(n, r))
        })
        .sum();
    to_count("a_primitive_assembled", v)
}

/// Height-primitive type A surfaces: the one-cylinder sum over odd length
/// triples plus the two-cylinder sums over coprime heights.
pub fn a_height_primitive(n: u64) -> Result<u64, CountError> {
    require_odd(n, 1)?;
    let v = q(n) / 3 * q(odd_triples(n)) + alpha1(n, 1) + alpha2(n, 1);
    to_count("a_height_primitive", v)
}

/// `sum_{d | n} mu(d) a^ph_{n/d}`, the Möbius route with unit weights.
pub fn moebius_route_unweighted(n: u64) -> Result<i128, CountError> {
    require_odd(n, 1)?;
    let mut acc = 0i128;
    for d in divisors(n) {
        acc += moebius(d) as i128 * a_height_primitive(n / d)? as i128;
    }
    Ok(acc)
}

/// `sum_{d | n} d mu(d) a^ph_{n/d}`, inverting `a^ph = id * a^p`.
pub fn moebius_route_weighted(n: u64) -> Result<i128, CountError> {
    require_odd(n, 1)?;
    let mut acc = 0i128;
    for d in divisors(n) {
        acc += d as i128 * moebius(d) as i128 * a_height_primitive(n / d)? as i128;
    }
    Ok(acc)
}
