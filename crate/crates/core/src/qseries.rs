//! Truncated q-expansions: theta series of positive definite forms by exact
//! lattice enumeration, congruence-restricted lattice sums, the projection
//! operator `P_{m,r}`, dilation `q -> q^k`, and pointwise series arithmetic.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::QuadForm;

/// A dense integer coefficient vector for `sum c[n] q^n`, `0 <= n <= N`.
///
/// Binary operations truncate to the smaller order; the result's `order()`
/// is the effective N.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TruncatedSeries {
    #[serde(rename = "N")]
    order: usize,
    coeffs: Vec<i64>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            order,
            coeffs: vec![0; order + 1],
        }
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        assert!(!coeffs.is_empty(), "need at least the constant term");
        TruncatedSeries {
            order: coeffs.len() - 1,
            coeffs,
        }
    }

    /// Truncation order N.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> i64 {
        self.coeffs[n]
    }

    /// Keep coefficients at indices `r mod m`, zero out the rest.
    pub fn project(&self, m: i64, r: i64) -> Result<TruncatedSeries> {
        if m < 1 {
            return Err(Error::NotPositive {
                what: "projection modulus",
                value: m,
            });
        }
        if r < 0 || r >= m {
            return Err(Error::ResidueOutOfRange {
                residue: r,
                modulus: m,
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, &c)| if n as i64 % m == r { c } else { 0 })
            .collect();
        Ok(TruncatedSeries {
            order: self.order,
            coeffs,
        })
    }

    /// Substitute `q -> q^k`: coefficient at `k*n` becomes `coeff(n)`, order
    /// unchanged.
    pub fn dilate(&self, k: i64) -> Result<TruncatedSeries> {
        if k < 1 {
            return Err(Error::NotPositive {
                what: "dilation factor",
                value: k,
            });
        }
        let k = k as usize;
        let mut coeffs = vec![0; self.order + 1];
        for n in 0..=self.order / k {
            coeffs[k * n] = self.coeffs[n];
        }
        Ok(TruncatedSeries {
            order: self.order,
            coeffs,
        })
    }

    pub fn scale(&self, factor: i64) -> TruncatedSeries {
        TruncatedSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    /// Adds `value` to the constant term.
    pub fn plus_constant(&self, value: i64) -> TruncatedSeries {
        let mut out = self.clone();
        out.coeffs[0] += value;
        out
    }

    /// First index where the two series disagree, up to the smaller order.
    pub fn first_mismatch(&self, other: &TruncatedSeries) -> Option<(usize, i64, i64)> {
        let n = self.order.min(other.order);
        (0..=n).find_map(|i| {
            let (l, r) = (self.coeffs[i], other.coeffs[i]);
            (l != r).then_some((i, l, r))
        })
    }
}

fn pointwise(
    lhs: &TruncatedSeries,
    rhs: &TruncatedSeries,
    op: impl Fn(i64, i64) -> i64,
) -> TruncatedSeries {
    let order = lhs.order.min(rhs.order);
    let coeffs = (0..=order).map(|n| op(lhs.coeffs[n], rhs.coeffs[n])).collect();
    TruncatedSeries { order, coeffs }
}

impl std::ops::Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        pointwise(self, rhs, |a, b| a + b)
    }
}

impl std::ops::Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        pointwise(self, rhs, |a, b| a - b)
    }
}

/// An explicit set of residue pairs `(x mod m, y mod m)` selecting lattice
/// points in a restricted sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResiduePairs {
    modulus: i64,
    pairs: BTreeSet<(i64, i64)>,
}

impl ResiduePairs {
    pub fn new(modulus: i64, pairs: impl IntoIterator<Item = (i64, i64)>) -> Result<Self> {
        if modulus < 1 {
            return Err(Error::NotPositive {
                what: "residue modulus",
                value: modulus,
            });
        }
        let pairs: BTreeSet<_> = pairs
            .into_iter()
            .map(|(x, y)| (x.rem_euclid(modulus), y.rem_euclid(modulus)))
            .collect();
        if pairs.is_empty() {
            return Err(Error::EmptyResidueSet);
        }
        Ok(ResiduePairs { modulus, pairs })
    }

    /// All residue pairs satisfying a predicate.
    pub fn matching(modulus: i64, pred: impl Fn(i64, i64) -> bool) -> Result<Self> {
        let all = (0..modulus).flat_map(|x| (0..modulus).map(move |y| (x, y)));
        ResiduePairs::new(modulus, all.filter(|&(x, y)| pred(x, y)))
    }

    /// Every pair: no restriction.
    pub fn full(modulus: i64) -> Result<Self> {
        ResiduePairs::matching(modulus, |_, _| true)
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        self.pairs
            .contains(&(x.rem_euclid(self.modulus), y.rem_euclid(self.modulus)))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.pairs.iter().copied()
    }
}

/// Theta series of `f` to order N: `coeff[n]` counts integer pairs with
/// `f(x, y) = n`.
///
/// Enumeration is complete by construction: `4a f(x,y) = (2ax+by)^2 + |D|y^2`
/// bounds `|y|` by `sqrt(4aN/|D|)` and, per y, `2ax + by` by the exact
/// integer square root of the remainder.
pub fn theta(f: &QuadForm, order: usize) -> TruncatedSeries {
    theta_filtered(f, order, |_, _| true)
}

/// Theta series counting only lattice points whose residue pair
/// `(x mod m, y mod m)` lies in `pairs`.
pub fn theta_restricted(
    f: &QuadForm,
    order: usize,
    pairs: &ResiduePairs,
) -> Result<TruncatedSeries> {
    Ok(theta_filtered(f, order, |x, y| {
        pairs.contains(
            i64::try_from(x).expect("desk-scale lattice point"),
            i64::try_from(y).expect("desk-scale lattice point"),
        )
    }))
}

fn theta_filtered(f: &QuadForm, order: usize, keep: impl Fn(i128, i128) -> bool) -> TruncatedSeries {
    let mut coeffs = vec![0i64; order + 1];
    let (a, b, c) = (f.a() as i128, f.b() as i128, f.c() as i128);
    let d = 4 * a * c - b * b; // |disc| > 0
    let n = order as i128;
    let ymax = (4 * a * n / d).isqrt();
    for y in -ymax..=ymax {
        let rem = 4 * a * n - d * y * y;
        let s = rem.isqrt();
        // x range solving (2ax + by)^2 <= rem
        let lo = div_ceil(-s - b * y, 2 * a);
        let hi = div_floor(s - b * y, 2 * a);
        for x in lo..=hi {
            if keep(x, y) {
                let v = a * x * x + b * x * y + c * y * y;
                coeffs[v as usize] += 1;
            }
        }
    }
    TruncatedSeries {
        order,
        coeffs,
    }
}

fn div_floor(a: i128, b: i128) -> i128 {
    a.div_euclid(b)
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -(-a).div_euclid(b)
}
