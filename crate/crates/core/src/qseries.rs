//! Truncated q-expansions with exact rational coefficients.
//!
//! A [`QSeries`] of order `N` stores the coefficients of `q^0 .. q^N`.
//! Binary operations require equal orders and never truncate or extend
//! silently.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{Rational, SigmaTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("linear combination needs at least one term")]
    EmptyCombination,
    #[error("invalid Dirichlet character: {0}")]
    InvalidCharacter(String),
    #[error("no weight-4 quasimodular basis catalogued for level {0}")]
    UnknownBasis(u32),
    #[error("fit window {window} is smaller than the basis size {basis}")]
    WindowTooSmall { window: usize, basis: usize },
    #[error("fit window ends at coefficient {end} beyond the truncation order {order}")]
    WindowExceedsOrder { end: usize, order: usize },
    #[error("sampled system has rank {rank} < {needed}: coefficients not determined")]
    RankDeficient { rank: usize, needed: usize },
    #[error("target is not in the span of the basis: first mismatch at q^{index}")]
    NotInSpan { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    /// Builds a series from `coeffs[0..=N]`; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        QSeries { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        QSeries {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn zero(order: usize) -> Self {
        QSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn constant(order: usize, c: Rational) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, Rational::one())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_order(&self, other: &QSeries) -> Result<(), SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn scale(&self, c: Rational) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|x| *x * c).collect(),
        }
    }

    pub fn add(&self, other: &QSeries) -> Result<QSeries, SeriesError> {
        self.check_order(other)?;
        Ok(QSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| *a + *b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &QSeries) -> Result<QSeries, SeriesError> {
        self.add(&other.scale(-Rational::one()))
    }
}

/// Coefficientwise `sum c_i f_i`.
pub fn series_linear(terms: &[(Rational, &QSeries)]) -> Result<QSeries, SeriesError> {
    let (_, first) = terms.first().ok_or(SeriesError::EmptyCombination)?;
    let mut out = QSeries::zero(first.order());
    for (c, f) in terms {
        out.check_order(f)?;
        if c.is_zero() {
            continue;
        }
        for (acc, x) in out.coeffs.iter_mut().zip(&f.coeffs) {
            *acc += *c * *x;
        }
    }
    Ok(out)
}

/// Cauchy product truncated to the common order.
pub fn series_mul(f: &QSeries, g: &QSeries) -> Result<QSeries, SeriesError> {
    f.check_order(g)?;
    let n = f.order();
    let mut out = vec![Rational::zero(); n + 1];
    for (i, a) in f.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in g.coeffs[..=n - i].iter().enumerate() {
            if !b.is_zero() {
                out[i + j] += *a * *b;
            }
        }
    }
    Ok(QSeries { coeffs: out })
}

/// The derivation `D = q d/dq`: the coefficient of `q^n` is multiplied by `n`.
pub fn d_operator(f: &QSeries) -> QSeries {
    QSeries {
        coeffs: f
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| *c * Rational::from_integer(n as i128))
            .collect(),
    }
}

/// `f(z) -> f(kz)`, keeping the truncation order.
pub fn dilate(f: &QSeries, k: usize) -> QSeries {
    assert!(k >= 1, "dilation factor must be positive");
    QSeries::from_fn(f.order(), |n| {
        if n % k == 0 {
            f.coeffs[n / k]
        } else {
            Rational::zero()
        }
    })
}

fn divisor_series(order: usize, ell: u32, constant: i128, scale: i128) -> QSeries {
    let table = SigmaTable::new(ell, order);
    QSeries::from_fn(order, |n| {
        if n == 0 {
            Rational::from_integer(constant)
        } else {
            Rational::from_integer(scale * table.get(n as i64))
        }
    })
}

/// `E_2 = 1 - 24 sum sigma_1(n) q^n`.
pub fn eisenstein_e2(order: usize) -> QSeries {
    divisor_series(order, 1, 1, -24)
}

/// `E_4 = 1 + 240 sum sigma_3(n) q^n`.
pub fn eisenstein_e4(order: usize) -> QSeries {
    divisor_series(order, 3, 1, 240)
}

/// Weight-2 forms `Phi_2 = 2 E_2(2z) - E_2(z)` (level 2) and
/// `Phi_4 = 4/3 E_2(4z) - 1/3 E_2(z)` (level 4).
pub fn phi_form(which: u32, order: usize) -> QSeries {
    let e2 = eisenstein_e2(order);
    let (a, b) = match which {
        2 => (Rational::from_integer(2), Rational::from_integer(-1)),
        4 => (Rational::new(4, 3), Rational::new(-1, 3)),
        other => panic!("phi_form is defined for 2 and 4, got {other}"),
    };
    let dilated = dilate(&e2, which as usize);
    series_linear(&[(a, &dilated), (b, &e2)]).expect("same order by construction")
}

/// `H_k(z) = E_2(z) E_2(kz)`.
pub fn h_series(k: usize, order: usize) -> QSeries {
    let e2 = eisenstein_e2(order);
    series_mul(&e2, &dilate(&e2, k)).expect("same order by construction")
}

/// A real-valued Dirichlet character given by its values on residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    values: Vec<i8>,
}

impl DirichletCharacter {
    /// Validates the table: zero exactly off the unit group, value `1` at `1`,
    /// completely multiplicative on residues.
    pub fn new(modulus: u64, values: Vec<i8>) -> Result<Self, SeriesError> {
        let bad = |msg: &str| Err(SeriesError::InvalidCharacter(msg.to_string()));
        if modulus == 0 {
            return bad("modulus must be positive");
        }
        if values.len() as u64 != modulus {
            return bad("value table length must equal the modulus");
        }
        if values.iter().any(|v| !(-1..=1).contains(v)) {
            return bad("values must lie in {-1, 0, 1}");
        }
        for (r, &v) in values.iter().enumerate() {
            let unit = (r as u64).gcd(&modulus) == 1;
            if unit == (v == 0) {
                return bad("value must vanish exactly on non-units");
            }
        }
        if values[(1 % modulus) as usize] != 1 {
            return bad("value at 1 must be 1");
        }
        for a in 0..modulus {
            for b in 0..modulus {
                let ab = (a * b % modulus) as usize;
                if values[ab] != values[a as usize] * values[b as usize] {
                    return bad("table is not multiplicative");
                }
            }
        }
        Ok(DirichletCharacter { modulus, values })
    }

    /// The principal character modulo `m`.
    pub fn principal(modulus: u64) -> Self {
        assert!(modulus >= 1);
        let values = (0..modulus)
            .map(|r| if r.gcd(&modulus) == 1 { 1 } else { 0 })
            .collect();
        DirichletCharacter { modulus, values }
    }

    /// The unique character modulo 1, equal to 1 everywhere.
    pub fn trivial() -> Self {
        Self::principal(1)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn eval(&self, n: u64) -> i8 {
        self.values[(n % self.modulus) as usize]
    }
}

/// `sum chi(n) c_n q^n`.
pub fn twist(f: &QSeries, chi: &DirichletCharacter) -> QSeries {
    QSeries::from_fn(f.order(), |n| {
        f.coeffs[n] * Rational::from_integer(chi.eval(n as u64) as i128)
    })
}

/// A catalogued basis of weight-4, depth <= 2 quasimodular forms on `Gamma_0(level)`.
#[derive(Debug, Clone)]
pub struct QMBasis {
    level: u32,
    weight: u32,
    elements: Vec<(String, QSeries)>,
}

impl QMBasis {
    /// Level 1: `{E4, DE2}`; level 2: `{E4, E4(2z), DPhi2, DE2}`;
    /// level 4: `{E4, E4(2z), E4(4z), DPhi2, DPhi4, DE2}`.
    pub fn weight4(level: u32, order: usize) -> Result<Self, SeriesError> {
        let e4 = eisenstein_e4(order);
        let de2 = d_operator(&eisenstein_e2(order));
        let named = |name: &str, s: QSeries| (name.to_string(), s);
        let middle = match level {
            1 => vec![],
            2 => vec![
                named("E4(2z)", dilate(&e4, 2)),
                named("DPhi2", d_operator(&phi_form(2, order))),
            ],
            4 => vec![
                named("E4(2z)", dilate(&e4, 2)),
                named("E4(4z)", dilate(&e4, 4)),
                named("DPhi2", d_operator(&phi_form(2, order))),
                named("DPhi4", d_operator(&phi_form(4, order))),
            ],
            other => return Err(SeriesError::UnknownBasis(other)),
        };
        // E4 leads and DE2 closes every catalogued basis
        let mut elements = vec![named("E4", e4)];
        elements.extend(middle);
        elements.push(named("DE2", de2));
        Ok(QMBasis {
            level,
            weight: 4,
            elements,
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn order(&self) -> usize {
        self.elements[0].1.order()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.elements.iter().map(|(n, _)| n.as_str())
    }

    pub fn elements(&self) -> impl Iterator<Item = &QSeries> {
        self.elements.iter().map(|(_, s)| s)
    }

    /// `sum x_i basis_i`.
    pub fn combine(&self, coefficients: &[Rational]) -> Result<QSeries, SeriesError> {
        let terms: Vec<(Rational, &QSeries)> = coefficients
            .iter()
            .copied()
            .zip(self.elements())
            .collect();
        series_linear(&terms)
    }
}

/// Fits `target` in `basis` using coefficients `0..window`, then checks the
/// result on the full truncation order.
pub fn fit_in_basis(
    target: &QSeries,
    basis: &QMBasis,
    window: usize,
) -> Result<Vec<Rational>, SeriesError> {
    fit_in_basis_at(target, basis, 0, window)
}

/// Default fit: window of `basis.len() + 1` coefficients starting at `q^0`.
pub fn fit_default(target: &QSeries, basis: &QMBasis) -> Result<Vec<Rational>, SeriesError> {
    fit_in_basis(target, basis, basis.len() + 1)
}

/// Like [`fit_in_basis`] with the sampled window `start..start + window`.
pub fn fit_in_basis_at(
    target: &QSeries,
    basis: &QMBasis,
    start: usize,
    window: usize,
) -> Result<Vec<Rational>, SeriesError> {
    let m = basis.len();
    if window < m {
        return Err(SeriesError::WindowTooSmall { window, basis: m });
    }
    target.check_order(&basis.elements[0].1)?;
    let order = target.order();
    if start + window > order + 1 {
        return Err(SeriesError::WindowExceedsOrder {
            end: start + window - 1,
            order,
        });
    }

    // augmented rows [basis_0(i) .. basis_{m-1}(i) | target(i)]
    let mut rows: Vec<Vec<Rational>> = (start..start + window)
        .map(|i| {
            basis
                .elements()
                .map(|s| s.coeff(i))
                .chain(core::iter::once(target.coeff(i)))
                .collect()
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(m);
    for col in 0..m {
        let Some(p) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, p);
        let inv = rows[pivot_row][col].recip();
        for x in rows[pivot_row].iter_mut() {
            *x *= inv;
        }
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][col].is_zero() {
                let factor = rows[r][col];
                let pr = rows[pivot_row].clone();
                for (x, y) in rows[r].iter_mut().zip(pr) {
                    *x -= factor * y;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if pivots.len() < m {
        return Err(SeriesError::RankDeficient {
            rank: pivots.len(),
            needed: m,
        });
    }
    let solution: Vec<Rational> = (0..m).map(|r| rows[r][m]).collect();
    let fitted = basis.combine(&solution)?;
    if let Some(index) = (0..=order).find(|&n| fitted.coeff(n) != target.coeff(n)) {
        return Err(SeriesError::NotInSpan { index });
    }
    Ok(solution)
}

/// `(1/1280) (E4 + 10 DE2)`, whose `q^n` coefficient counts type A surfaces.
pub fn type_a_generating_series(order: usize) -> QSeries {
    let e4 = eisenstein_e4(order);
    let de2 = d_operator(&eisenstein_e2(order));
    series_linear(&[
        (Rational::new(1, 1280), &e4),
        (Rational::new(10, 1280), &de2),
    ])
    .expect("same order by construction")
}

/// The level-4 combination `(1/1280)[E4 - 9 E4(2z) + 8 E4(4z) - 15 DPhi2 + 15 DPhi4]`
/// carrying only the odd-index type A counts.
pub fn odd_part_generating_series(order: usize) -> QSeries {
    let basis = QMBasis::weight4(4, order).expect("level 4 is catalogued");
    basis
        .combine(&odd_part_coefficients())
        .expect("same order by construction")
}

/// Coefficients of [`odd_part_generating_series`] in the level-4 basis order
/// `E4, E4(2z), E4(4z), DPhi2, DPhi4, DE2`.
pub fn odd_part_coefficients() -> Vec<Rational> {
    [1, -9, 8, -15, 15, 0]
        .into_iter()
        .map(|c| Rational::new(c, 1280))
        .collect()
}
