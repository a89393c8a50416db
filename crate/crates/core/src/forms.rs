//! Positive definite binary quadratic forms: reduction, class-group
//! enumeration, Gauss composition, and the invariant-factor decomposition of
//! the class group.
//!
//! A class is always identified by its unique reduced representative, and
//! every list of classes is kept sorted in `(a, b, c)` lexicographic order,
//! so set comparisons and group tables are deterministic.

use serde::{Deserialize, Serialize};

use crate::arith::{ext_gcd, gcd3};
use crate::error::{Error, Result};

/// A binary quadratic form `a x^2 + b xy + c y^2` with `a > 0` and negative
/// discriminant. Construction enforces positive definiteness.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "(i64, i64, i64)", try_from = "(i64, i64, i64)")]
pub struct QuadForm {
    a: i64,
    b: i64,
    c: i64,
}

impl std::fmt::Display for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

impl std::fmt::Debug for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

impl From<QuadForm> for (i64, i64, i64) {
    fn from(f: QuadForm) -> Self {
        (f.a, f.b, f.c)
    }
}

impl TryFrom<(i64, i64, i64)> for QuadForm {
    type Error = Error;
    fn try_from(t: (i64, i64, i64)) -> Result<Self> {
        QuadForm::new(t.0, t.1, t.2)
    }
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let disc = b as i128 * b as i128 - 4 * a as i128 * c as i128;
        if a <= 0 || disc >= 0 {
            return Err(Error::NotPositiveDefinite(a, b, c));
        }
        i64::try_from(disc).map_err(|_| Error::Overflow("discriminant"))?;
        Ok(QuadForm { a, b, c })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    /// `b^2 - 4ac`, negative by construction.
    pub fn discriminant(&self) -> i64 {
        (self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128) as i64
    }

    /// gcd of the three coefficients.
    pub fn content(&self) -> i64 {
        gcd3(self.a, self.b, self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    pub(crate) fn require_primitive(&self) -> Result<()> {
        if self.is_primitive() {
            Ok(())
        } else {
            Err(Error::Imprimitive(self.a, self.b, self.c))
        }
    }

    /// Value `a x^2 + b xy + c y^2` at an integer point.
    pub fn eval(&self, x: i64, y: i64) -> i64 {
        let v = self.a as i128 * x as i128 * x as i128
            + self.b as i128 * x as i128 * y as i128
            + self.c as i128 * y as i128 * y as i128;
        i64::try_from(v).expect("form value overflows i64")
    }

    /// The equivalent form obtained from `(x, y) -> (x + h y, y)`:
    /// `(a, b + 2ah, a h^2 + b h + c)`.
    pub fn translate(&self, h: i64) -> QuadForm {
        QuadForm {
            a: self.a,
            b: self.b + 2 * self.a * h,
            c: self.a * h * h + self.b * h + self.c,
        }
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() < a && a < c))
    }

    /// The unique reduced representative of this form's class.
    pub fn reduce(&self) -> QuadForm {
        let (mut a, mut b, mut c) = (self.a, self.b, self.c);
        loop {
            // bring b into (-a, a]
            let k = (a - b).div_euclid(2 * a);
            (b, c) = (b + 2 * a * k, a * k * k + b * k + c);
            if a > c {
                (a, b, c) = (c, -b, a);
                continue;
            }
            break;
        }
        if a == c && b < 0 {
            b = -b;
        }
        QuadForm { a, b, c }
    }

    /// Class inverse: the reduced representative of `(a, -b, c)`.
    pub fn inverse(&self) -> QuadForm {
        QuadForm {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
        .reduce()
    }
}

/// Whether two forms of the same discriminant lie in the same SL(2,Z) class.
pub fn equivalent(f: &QuadForm, g: &QuadForm) -> Result<bool> {
    if f.discriminant() != g.discriminant() {
        return Err(Error::DiscriminantMismatch {
            left: f.discriminant(),
            right: g.discriminant(),
        });
    }
    Ok(f.reduce() == g.reduce())
}

/// Checks `disc < 0` and `disc = 0 or 1 mod 4`.
pub fn validate_discriminant(disc: i64) -> Result<()> {
    if disc >= 0 || disc.rem_euclid(4) > 1 {
        return Err(Error::InvalidDiscriminant(disc));
    }
    Ok(())
}

/// The principal form: `(1, 0, -disc/4)` or `(1, 1, (1-disc)/4)`.
pub fn principal_form(disc: i64) -> Result<QuadForm> {
    validate_discriminant(disc)?;
    Ok(if disc.rem_euclid(4) == 0 {
        QuadForm {
            a: 1,
            b: 0,
            c: -disc / 4,
        }
    } else {
        QuadForm {
            a: 1,
            b: 1,
            c: (1 - disc) / 4,
        }
    })
}

/// Half the number of automorphs: 3 for disc -3, 2 for -4, 1 below.
pub fn unit_w(disc: i64) -> i64 {
    match disc {
        -3 => 3,
        -4 => 2,
        _ => 1,
    }
}

/// The class group of a negative discriminant: the sorted list of reduced
/// primitive forms, closed under composition and inversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassGroup {
    disc: i64,
    forms: Vec<QuadForm>,
}

impl ClassGroup {
    /// Enumerates all reduced primitive forms of the discriminant: `b` runs
    /// over its parity class up to `sqrt(|disc|/3)` and `(b^2 - disc)/4` is
    /// split into `a * c` with `b <= a <= c`.
    pub fn enumerate(disc: i64) -> Result<Self> {
        validate_discriminant(disc)?;
        let mut forms = Vec::new();
        let bmax = ((-disc) / 3).isqrt();
        for b in 0..=bmax {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let m = (b * b - disc) / 4;
            let mut a = b.max(1);
            while a * a <= m {
                if m % a == 0 {
                    let c = m / a;
                    if gcd3(a, b, c) == 1 {
                        forms.push(QuadForm { a, b, c });
                        if 0 < b && b < a && a < c {
                            forms.push(QuadForm { a, b: -b, c });
                        }
                    }
                }
                a += 1;
            }
        }
        forms.sort();
        Ok(ClassGroup { disc, forms })
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn forms(&self) -> &[QuadForm] {
        &self.forms
    }

    pub fn class_number(&self) -> usize {
        self.forms.len()
    }

    pub fn principal(&self) -> QuadForm {
        principal_form(self.disc).expect("valid by construction")
    }

    /// Index of a reduced form in the canonical ordering.
    pub fn position(&self, f: &QuadForm) -> Option<usize> {
        self.forms.binary_search(f).ok()
    }

    pub fn contains_class_of(&self, f: &QuadForm) -> bool {
        self.position(&f.reduce()).is_some()
    }

    /// Full composition table as indices into `forms()`.
    #[allow(clippy::needless_range_loop)] // symmetric double write needs indices
    pub fn composition_table(&self) -> Result<Vec<Vec<usize>>> {
        let h = self.forms.len();
        let mut table = vec![vec![0usize; h]; h];
        for i in 0..h {
            for j in i..h {
                let fg = compose(&self.forms[i], &self.forms[j])?;
                let k = self
                    .position(&fg)
                    .ok_or(Error::Imprimitive(fg.a, fg.b, fg.c))?;
                table[i][j] = k;
                table[j][i] = k;
            }
        }
        Ok(table)
    }

    /// Invariant factors `d_1 >= d_2 >= ...` (each dividing the previous) of
    /// the class group, computed from the composition table by repeatedly
    /// splitting off a cyclic subgroup of maximal order.
    pub fn group_structure(&self) -> Result<Vec<i64>> {
        let table = self.composition_table()?;
        let e = self
            .position(&self.principal())
            .expect("principal form is reduced and primitive");
        let elements: Vec<usize> = (0..self.forms.len()).collect();
        let op = |x: usize, y: usize| table[x][y];
        Ok(invariant_factors(&elements, e, &op))
    }
}

/// Class number `h(disc)`.
pub fn class_number(disc: i64) -> Result<usize> {
    Ok(ClassGroup::enumerate(disc)?.class_number())
}

fn invariant_factors(
    elements: &[usize],
    identity: usize,
    op: &dyn Fn(usize, usize) -> usize,
) -> Vec<i64> {
    if elements.len() == 1 {
        return Vec::new();
    }
    let order = |g: usize| {
        let mut x = g;
        let mut n = 1i64;
        while x != identity {
            x = op(x, g);
            n += 1;
        }
        n
    };
    let (generator, max_order) = elements
        .iter()
        .map(|&g| (g, order(g)))
        .max_by_key(|&(g, n)| (n, std::cmp::Reverse(g)))
        .expect("nonempty");
    // cyclic subgroup generated by the element of maximal order
    let mut subgroup = vec![identity];
    let mut x = generator;
    while x != identity {
        subgroup.push(x);
        x = op(x, generator);
    }
    // quotient group on coset representatives (minimal member of each coset)
    let mut coset_rep = std::collections::BTreeMap::new();
    for &g in elements {
        let mut coset: Vec<usize> = subgroup.iter().map(|&s| op(g, s)).collect();
        coset.sort_unstable();
        let rep = coset[0];
        for member in coset {
            coset_rep.insert(member, rep);
        }
    }
    let reps: Vec<usize> = {
        let mut v: Vec<usize> = coset_rep.values().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let qop = |x: usize, y: usize| coset_rep[&op(x, y)];
    let qid = coset_rep[&identity];
    let mut factors = vec![max_order];
    factors.extend(invariant_factors(&reps, qid, &qop));
    factors
}

/// Gauss composition of two primitive classes of the same discriminant,
/// returned reduced. This is the extended-Euclid form of Dirichlet
/// composition (Shanks' variant), which also covers the non-concordant case
/// `gcd(a1, a2, (b1+b2)/2) > 1`.
pub fn compose(f: &QuadForm, g: &QuadForm) -> Result<QuadForm> {
    f.require_primitive()?;
    g.require_primitive()?;
    if f.discriminant() != g.discriminant() {
        return Err(Error::DiscriminantMismatch {
            left: f.discriminant(),
            right: g.discriminant(),
        });
    }
    let (f1, f2) = if f.a <= g.a { (f, g) } else { (g, f) };
    let (a1, b1, _c1) = (f1.a, f1.b, f1.c);
    let (a2, b2, c2) = (f2.a, f2.b, f2.c);
    let s = (b1 + b2) / 2;
    let n = b2 - s;
    let (y1, d) = if a2 % a1 == 0 {
        (0, a1)
    } else {
        let (d, u, _) = ext_gcd(a2, a1);
        (u, d)
    };
    let (x2, y2, d1) = if s % d == 0 {
        (0, -1, d)
    } else {
        let (d1, u, v) = ext_gcd(s, d);
        (u, -v, d1)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 as i128 * y2 as i128 * n as i128 - x2 as i128 * c2 as i128)
        .rem_euclid(v1 as i128) as i64;
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3_num = c2 as i128 * d1 as i128 + r as i128 * (b2 as i128 + v2 as i128 * r as i128);
    debug_assert_eq!(c3_num % v1 as i128, 0);
    let c3 = i64::try_from(c3_num / v1 as i128).map_err(|_| Error::Overflow("composition"))?;
    Ok(QuadForm {
        a: a3,
        b: b3,
        c: c3,
    }
    .reduce())
}

/// `f` composed with itself `k` times (k >= 0 gives the principal class at 0).
pub fn power(f: &QuadForm, k: u64) -> Result<QuadForm> {
    let mut acc = principal_form(f.discriminant())?;
    let mut base = f.reduce();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = compose(&acc, &base)?;
        }
        k >>= 1;
        if k > 0 {
            base = compose(&base, &base)?;
        }
    }
    Ok(acc)
}
