//! Lambert-series decompositions for the two genera of discriminant -207 and
//! the resulting representation-number formulas.
//!
//! The -23 / p = 3 constants live in a named bundle so the same machinery can
//! be scripted for other examples of the same shape: a base discriminant
//! whose principal-genus theta has a Dirichlet Lambert expansion, lifted by
//! one prime.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{divisor_sum_twisted, factorize, kronecker};
use crate::error::{Error, Result};
use crate::forms::QuadForm;
use crate::genus::genus_label;
use crate::identities::VerificationReport;
use crate::qseries::{theta, TruncatedSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GenusSide {
    Principal,
    NonPrincipal,
}

/// Weighted class list whose theta series make up one genus total,
/// `sum mult * theta(form)`.
pub type WeightedClasses = Vec<(QuadForm, i64)>;

/// Constants of one Lambert decomposition: the base discriminant and lifting
/// prime, the two characters, the per-genus class lists of `D p^2`, the base
/// principal-genus list of `D`, and the single-class dissection data.
#[derive(Clone, Debug)]
pub struct LambertDecomposition {
    /// Base discriminant (-23).
    pub disc: i64,
    /// Lifting prime (3).
    pub p: i64,
    /// Character of the plain Lambert series `L1` (-23).
    pub chi: i64,
    /// Character of the twisted series `L2` (69).
    pub chi_twist: i64,
    /// Modulus of the twist (3): `L2` coefficients are
    /// `sum_{d|n} (chi_twist/d) ((n/d)/twist)`.
    pub twist_modulus: i64,
    /// Classes and multiplicities of the principal genus of `D p^2`.
    pub principal: WeightedClasses,
    /// Classes and multiplicities of the other genus.
    pub nonprincipal: WeightedClasses,
    /// Classes and multiplicities of the principal genus of `D` itself.
    pub base_genus: WeightedClasses,
    /// Single-class dissections `(lifted class, source class, residue i)`:
    /// `theta(lifted) = theta(source)(q^{p^2}) + P_{p,i} theta(source)`.
    pub class_identities: Vec<(QuadForm, QuadForm, i64)>,
    // gamma signs of the second character sum, one per genus, read off the
    // genus labels at construction
    twist_sign_principal: i64,
    twist_sign_nonprincipal: i64,
}

fn qf(a: i64, b: i64, c: i64) -> QuadForm {
    QuadForm::new(a, b, c).expect("positive definite fixture")
}

impl LambertDecomposition {
    /// The worked example: disc -23 lifted by p = 3 to disc -207.
    pub fn disc207() -> Self {
        let principal = vec![(qf(1, 1, 52), 1), (qf(4, 1, 13), 2)];
        let nonprincipal = vec![(qf(8, 7, 8), 1), (qf(2, 1, 26), 2)];
        let twist_sign = |side: &WeightedClasses| {
            let label = genus_label(&side[0].0).expect("primitive fixture");
            // the (r/3) component: odd primes of -207 ascending are [3, 23]
            label.values()[0] as i64
        };
        LambertDecomposition {
            disc: -23,
            p: 3,
            chi: -23,
            chi_twist: 69,
            twist_modulus: 3,
            twist_sign_principal: twist_sign(&principal),
            twist_sign_nonprincipal: twist_sign(&nonprincipal),
            principal,
            nonprincipal,
            base_genus: vec![(qf(1, 1, 6), 1), (qf(2, 1, 3), 2)],
            class_identities: vec![
                (qf(1, 1, 52), qf(1, 1, 6), 1),
                (qf(8, 7, 8), qf(1, 1, 6), 2),
                (qf(4, 1, 13), qf(2, 1, 3), 1),
                (qf(2, 1, 26), qf(2, 1, 3), 2),
            ],
        }
    }

    pub fn lifted_disc(&self) -> i64 {
        self.disc * self.p * self.p
    }

    /// `A(n)`: coefficient of the plain Lambert series, as a divisor sum.
    pub fn coeff_l1(&self, n: i64) -> Result<i64> {
        divisor_sum_twisted(n, self.chi, 1)
    }

    /// `B(n)`: coefficient of the twisted Lambert series, as a divisor sum.
    pub fn coeff_l2(&self, n: i64) -> Result<i64> {
        divisor_sum_twisted(n, self.chi_twist, self.twist_modulus)
    }

    /// `A(n)` from the prime-power table: 1 on ramified primes, `1 + v` on
    /// split primes, `(1 + (-1)^v)/2` on inert primes.
    pub fn coeff_l1_closed(&self, n: i64) -> Result<i64> {
        if n < 1 {
            return Err(Error::NotPositive {
                what: "coefficient index",
                value: n,
            });
        }
        let mut out = 1i64;
        for (p, v) in factorize(n) {
            out *= match kronecker(self.chi, p)? {
                0 => 1,
                1 => 1 + v as i64,
                _ => (1 + (-1i64).pow(v)) / 2,
            };
            if out == 0 {
                break;
            }
        }
        Ok(out)
    }

    /// `B(n)` from the prime-power table: 0 on the twist prime, `(p/twist)^v`
    /// on ramified primes, `(1+v) (p/twist)^v` on split primes, and the same
    /// even-exponent filter as `A` on inert primes.
    pub fn coeff_l2_closed(&self, n: i64) -> Result<i64> {
        if n < 1 {
            return Err(Error::NotPositive {
                what: "coefficient index",
                value: n,
            });
        }
        let mut out = 1i64;
        for (p, v) in factorize(n) {
            out *= if p == self.twist_modulus {
                0
            } else {
                match kronecker(self.chi, p)? {
                    0 => kronecker(p, self.twist_modulus)?.pow(v),
                    1 => (1 + v as i64) * kronecker(p, self.twist_modulus)?.pow(v),
                    _ => (1 + (-1i64).pow(v)) / 2,
                }
            };
            if out == 0 {
                break;
            }
        }
        Ok(out)
    }

    pub fn l1_series(&self, order: usize) -> Result<TruncatedSeries> {
        lambert_series(self.chi, 1, order)
    }

    pub fn l2_series(&self, order: usize) -> Result<TruncatedSeries> {
        lambert_series(self.chi_twist, self.twist_modulus, order)
    }

    /// `sum mult * theta(form)` over one genus.
    pub fn genus_theta(&self, side: GenusSide, order: usize) -> TruncatedSeries {
        let classes = match side {
            GenusSide::Principal => &self.principal,
            GenusSide::NonPrincipal => &self.nonprincipal,
        };
        let mut out = TruncatedSeries::zero(order);
        for (form, mult) in classes {
            out = &out + &theta(form, order).scale(*mult);
        }
        out
    }

    /// Multiplicative profile of `n` relative to the bundle.
    pub fn profile(&self, n: i64) -> Result<RepProfile> {
        if n < 1 {
            return Err(Error::NotPositive {
                what: "represented value",
                value: n,
            });
        }
        let mut profile = RepProfile {
            twist_exp: 0,
            ramified_exp: 0,
            split: Vec::new(),
            inert: Vec::new(),
            twist_negatives: 0,
            lambda: 1,
        };
        for (p, v) in factorize(n) {
            if p == self.twist_modulus {
                profile.twist_exp = v;
            } else if kronecker(self.chi, p)? == 0 {
                profile.ramified_exp += v;
            } else if kronecker(self.chi, p)? == 1 {
                profile.split.push((p, v));
                profile.lambda *= 1 + v as i64;
                if kronecker(p, self.twist_modulus)? == -1 {
                    profile.twist_negatives += v;
                }
            } else {
                profile.inert.push((p, v));
                profile.lambda *= (1 + (-1i64).pow(v)) / 2;
            }
        }
        Ok(profile)
    }

    /// Total representations of `n` by all classes of one genus of `D p^2`,
    /// via the multiplicative closed form. Writing `a` for the exponent of
    /// the twist prime in `n`: zero at `a = 1`, `2(a-1) Lambda(n)` at
    /// `a >= 2`, and `(1 ± (-1)^{b+t}) Lambda(n)` at `a = 0`.
    pub fn rep_genus(&self, n: i64, side: GenusSide) -> Result<i64> {
        let profile = self.profile(n)?;
        let a = profile.twist_exp;
        Ok(match a {
            0 => {
                let sign = (-1i64).pow(profile.ramified_exp + profile.twist_negatives);
                let numer = match side {
                    GenusSide::Principal => 1 + sign,
                    GenusSide::NonPrincipal => 1 - sign,
                };
                numer * profile.lambda
            }
            1 => 0,
            _ => 2 * (a as i64 - 1) * profile.lambda,
        })
    }

    /// The same totals from the Huard-Kaplan-Williams character sums, as a
    /// `(principal, nonprincipal)` pair: for `n` coprime to 3,
    /// `sum_{mu | n} (-23/mu) ± sum_{mu nu = n} (-3/mu)(69/nu)` with the sign
    /// read off each genus's `(r/3)` character; `2 sum_{mu | n/9} (-23/mu)`
    /// for both when `9 | n`; zero when `3 || n`.
    pub fn rep_genus_character_sums(&self, n: i64) -> Result<(i64, i64)> {
        if n < 1 {
            return Err(Error::NotPositive {
                what: "represented value",
                value: n,
            });
        }
        let p2 = self.p * self.p;
        if n % p2 == 0 {
            let both = 2 * divisor_sum_twisted(n / p2, self.chi, 1)?;
            return Ok((both, both));
        }
        if n % self.p == 0 {
            return Ok((0, 0));
        }
        let plain = divisor_sum_twisted(n, self.chi, 1)?;
        let mut twisted = 0i64;
        let mut mu = 1i64;
        while mu * mu <= n {
            if n % mu == 0 {
                let nu = n / mu;
                twisted += kronecker(-self.twist_modulus, mu)? * kronecker(self.chi_twist, nu)?;
                if mu != nu {
                    twisted +=
                        kronecker(-self.twist_modulus, nu)? * kronecker(self.chi_twist, mu)?;
                }
            }
            mu += 1;
        }
        Ok((
            plain + self.twist_sign_principal * twisted,
            plain + self.twist_sign_nonprincipal * twisted,
        ))
    }

    /// The Dirichlet expansion of the base principal-genus theta:
    /// `sum mult * theta = (sum mult) + 2 L1`.
    pub fn verify_dirichlet(&self, order: usize) -> Result<VerificationReport> {
        let mut lhs = TruncatedSeries::zero(order);
        let mut constant = 0i64;
        for (form, mult) in &self.base_genus {
            lhs = &lhs + &theta(form, order).scale(*mult);
            constant += mult;
        }
        let rhs = self.l1_series(order)?.scale(2).plus_constant(constant);
        Ok(VerificationReport::from_series(
            "dirichlet-L1",
            self.params(order),
            &lhs,
            &rhs,
        ))
    }

    /// The twisted expansion `(P_{p,1} - P_{p,2}) f = 2 L2` of the same base
    /// theta.
    pub fn verify_twist(&self, order: usize) -> Result<VerificationReport> {
        let mut f = TruncatedSeries::zero(order);
        for (form, mult) in &self.base_genus {
            f = &f + &theta(form, order).scale(*mult);
        }
        let lhs = &f.project(self.p, 1)? - &f.project(self.p, 2)?;
        let rhs = self.l2_series(order)?.scale(2);
        Ok(VerificationReport::from_series(
            "twist-L2",
            self.params(order),
            &lhs,
            &rhs,
        ))
    }

    fn params(&self, order: usize) -> BTreeMap<String, String> {
        BTreeMap::from([
            ("disc".into(), self.disc.to_string()),
            ("p".into(), self.p.to_string()),
            ("N".into(), order.to_string()),
        ])
    }

    /// The nine-identity chain tying the genus thetas of `D p^2` to Lambert
    /// series of `D`: the `P_{p,0}` dissection of `L1`, the two Lambert
    /// decompositions, the four single-class dissections, and the two
    /// split-by-genus forms. Needs `order >= 81` so every dilation by
    /// `p^4 = 81` still has room.
    pub fn verify_chain(&self, order: usize) -> Result<Vec<VerificationReport>> {
        if order < 81 {
            return Err(Error::BelowMinimum {
                what: "chain order",
                min: 81,
                value: order as i64,
            });
        }
        let p = self.p;
        let p2 = p * p;
        let mut reports = Vec::new();

        // P_{p,0} L1 = 2 L1(q^p) - L1(q^{p^2})
        let l1 = self.l1_series(order)?;
        let lhs = l1.project(p, 0)?;
        let rhs = &l1.dilate(p)?.scale(2) - &l1.dilate(p2)?;
        reports.push(VerificationReport::from_series(
            "L1-zero-dissection",
            self.params(order),
            &lhs,
            &rhs,
        ));

        // genus theta = const + L1 - 2 L1(q^p) + 3 L1(q^{p^2}) ± L2
        let l2 = self.l2_series(order)?;
        let base = &(&l1 - &l1.dilate(p)?.scale(2)) + &l1.dilate(p2)?.scale(3);
        for (side, name, sign) in [
            (GenusSide::Principal, "principal-lambert", 1i64),
            (GenusSide::NonPrincipal, "nonprincipal-lambert", -1),
        ] {
            let constant: i64 = self.side_classes(side).iter().map(|(_, m)| m).sum();
            let lhs = self.genus_theta(side, order);
            let rhs = (&base + &l2.scale(sign)).plus_constant(constant);
            reports.push(VerificationReport::from_series(
                name,
                self.params(order),
                &lhs,
                &rhs,
            ));
        }

        // theta(class) = theta(source)(q^{p^2}) + P_{p,i} theta(source)
        for (class, source, residue) in &self.class_identities {
            let lhs = theta(class, order);
            let ts = theta(source, order);
            let rhs = &ts.dilate(p2)? + &ts.project(p, *residue)?;
            let mut params = self.params(order);
            params.insert("class".into(), class.to_string());
            params.insert("source".into(), source.to_string());
            params.insert("residue".into(), residue.to_string());
            reports.push(VerificationReport::from_series(
                format!("class-dissection-{class}"),
                params,
                &lhs,
                &rhs,
            ));
        }

        // genus theta = f(q^{p^2}) + P_{p,i} f, with f the base genus theta
        let mut f = TruncatedSeries::zero(order);
        for (form, mult) in &self.base_genus {
            f = &f + &theta(form, order).scale(*mult);
        }
        for (side, name, residue) in [
            (GenusSide::Principal, "principal-split", 1i64),
            (GenusSide::NonPrincipal, "nonprincipal-split", 2),
        ] {
            let lhs = self.genus_theta(side, order);
            let rhs = &f.dilate(p2)? + &f.project(p, residue)?;
            reports.push(VerificationReport::from_series(
                name,
                self.params(order),
                &lhs,
                &rhs,
            ));
        }
        Ok(reports)
    }

    pub fn side_classes(&self, side: GenusSide) -> &WeightedClasses {
        match side {
            GenusSide::Principal => &self.principal,
            GenusSide::NonPrincipal => &self.nonprincipal,
        }
    }
}

/// Truncated expansion of a Lambert series whose n-th coefficient is the
/// twisted divisor sum `sum_{d|n} (chi/d) ((n/d)/psi)`; the constant term is
/// zero. With `psi = 1` this is the plain character divisor sum.
///
/// Sieved over divisors, so the whole expansion costs O(N log N) instead of
/// a divisor enumeration per coefficient.
pub fn lambert_series(chi: i64, psi: i64, order: usize) -> Result<TruncatedSeries> {
    let mut chi_of = vec![0i64; order + 1];
    let mut psi_of = vec![0i64; order + 1];
    for n in 1..=order {
        chi_of[n] = kronecker(chi, n as i64)?;
        psi_of[n] = kronecker(n as i64, psi)?;
    }
    let mut coeffs = vec![0i64; order + 1];
    for d in 1..=order {
        if chi_of[d] == 0 {
            continue;
        }
        for q in 1..=order / d {
            coeffs[d * q] += chi_of[d] * psi_of[q];
        }
    }
    Ok(TruncatedSeries::from_coeffs(coeffs))
}

/// Factorization of `n` relative to a bundle: exponent of the twist prime,
/// total exponent of ramified primes, split and inert parts, the count `t`
/// of split prime factors with `(p/twist) = -1` (with multiplicity), and
/// `Lambda(n)`, zero exactly when some inert exponent is odd.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepProfile {
    pub twist_exp: u32,
    pub ramified_exp: u32,
    pub split: Vec<(i64, u32)>,
    pub inert: Vec<(i64, u32)>,
    pub twist_negatives: u32,
    pub lambda: i64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bundle() -> LambertDecomposition {
        LambertDecomposition::disc207()
    }

    #[test]
    fn l1_fixtures() {
        let b = bundle();
        assert_eq!(b.coeff_l1(1).unwrap(), 1);
        assert_eq!(b.coeff_l1(2).unwrap(), 2);
        for alpha in 1..6u32 {
            assert_eq!(b.coeff_l1(23i64.pow(alpha)).unwrap(), 1);
        }
        // first twelve values
        let got: Vec<i64> = (1..=12).map(|n| b.coeff_l1(n).unwrap()).collect();
        assert_eq!(got, vec![1, 2, 2, 3, 0, 4, 0, 4, 3, 0, 0, 6]);
    }

    #[test]
    fn l2_fixtures() {
        let b = bundle();
        assert_eq!(b.coeff_l2(1).unwrap(), 1);
        for alpha in 1..6u32 {
            assert_eq!(b.coeff_l2(3i64.pow(alpha)).unwrap(), 0);
            assert_eq!(
                b.coeff_l2(23i64.pow(alpha)).unwrap(),
                (-1i64).pow(alpha)
            );
        }
        let got: Vec<i64> = (1..=12).map(|n| b.coeff_l2(n).unwrap()).collect();
        assert_eq!(got, vec![1, -2, 0, 3, 0, 0, 0, -4, 0, 0, 0, 0]);
    }

    #[test]
    fn closed_forms_match_divisor_sums() {
        let b = bundle();
        for n in 1..=5000i64 {
            assert_eq!(b.coeff_l1(n).unwrap(), b.coeff_l1_closed(n).unwrap(), "A({n})");
            assert_eq!(b.coeff_l2(n).unwrap(), b.coeff_l2_closed(n).unwrap(), "B({n})");
        }
    }

    #[test]
    fn sieved_series_matches_per_coefficient_divisor_sums() {
        let b = bundle();
        let l1 = b.l1_series(700).unwrap();
        let l2 = b.l2_series(700).unwrap();
        for n in 1..=700 {
            assert_eq!(l1.coeff(n), b.coeff_l1(n as i64).unwrap(), "A({n})");
            assert_eq!(l2.coeff(n), b.coeff_l2(n as i64).unwrap(), "B({n})");
        }
        assert_eq!(l1.coeff(0), 0);
        assert_eq!(l2.coeff(0), 0);
    }

    #[test]
    fn l2_vanishes_on_twist_multiples() {
        let b = bundle();
        let l2 = b.l2_series(5000).unwrap();
        assert_eq!(
            l2.project(3, 0).unwrap(),
            TruncatedSeries::zero(5000)
        );
    }

    #[test]
    fn twist_signs_from_labels() {
        let b = bundle();
        assert_eq!(b.twist_sign_principal, 1);
        assert_eq!(b.twist_sign_nonprincipal, -1);
    }

    #[test]
    fn dirichlet_and_twist_expansions() {
        let b = bundle();
        assert!(b.verify_dirichlet(500).unwrap().passed());
        assert!(b.verify_twist(500).unwrap().passed());
    }

    #[test]
    fn chain_passes_at_500() {
        let b = bundle();
        let reports = b.verify_chain(500).unwrap();
        assert_eq!(reports.len(), 9);
        for r in &reports {
            assert!(r.passed(), "{}", r.identity);
        }
        assert!(b.verify_chain(80).is_err());
    }

    #[test]
    fn decomposition_constant_terms() {
        let b = bundle();
        // the constant terms of the two genus decompositions
        let principal = b.genus_theta(GenusSide::Principal, 10);
        assert_eq!(principal.coeff(0), 3);
        // coefficient at the twist prime vanishes on both sides
        assert_eq!(principal.coeff(3), 0);
        assert_eq!(b.genus_theta(GenusSide::NonPrincipal, 10).coeff(3), 0);
    }

    #[test]
    fn rep_genus_fixtures() {
        let b = bundle();
        assert_eq!(b.rep_genus(1, GenusSide::Principal).unwrap(), 2);
        assert_eq!(b.rep_genus(1, GenusSide::NonPrincipal).unwrap(), 0);
        assert_eq!(b.rep_genus(3, GenusSide::Principal).unwrap(), 0);
        assert_eq!(b.rep_genus(3, GenusSide::NonPrincipal).unwrap(), 0);
        assert_eq!(b.rep_genus(2, GenusSide::Principal).unwrap(), 0);
        assert_eq!(b.rep_genus(2, GenusSide::NonPrincipal).unwrap(), 4);
        // 9 | n: both genera receive 2 sum_{mu | n/9} (-23/mu)
        assert_eq!(b.rep_genus(9, GenusSide::Principal).unwrap(), 2);
        assert_eq!(b.rep_genus(9, GenusSide::NonPrincipal).unwrap(), 2);
        // 27: the twist exponent keeps growing the count
        assert_eq!(b.rep_genus(27, GenusSide::Principal).unwrap(), 4);
    }

    #[test]
    fn rep_genus_matches_lattice_counts() {
        let b = bundle();
        let order = 600;
        let principal = b.genus_theta(GenusSide::Principal, order);
        let nonprincipal = b.genus_theta(GenusSide::NonPrincipal, order);
        for n in 1..=order as i64 {
            assert_eq!(
                b.rep_genus(n, GenusSide::Principal).unwrap(),
                principal.coeff(n as usize),
                "principal n={n}"
            );
            assert_eq!(
                b.rep_genus(n, GenusSide::NonPrincipal).unwrap(),
                nonprincipal.coeff(n as usize),
                "nonprincipal n={n}"
            );
        }
    }

    #[test]
    fn character_sums_fixtures() {
        let b = bundle();
        assert_eq!(b.rep_genus_character_sums(1).unwrap(), (2, 0));
        assert_eq!(b.rep_genus_character_sums(3).unwrap(), (0, 0));
        assert_eq!(b.rep_genus_character_sums(9).unwrap(), (2, 2));
    }

    #[test]
    fn character_sums_match_closed_form() {
        let b = bundle();
        for n in 1..=2000i64 {
            let (p, np) = b.rep_genus_character_sums(n).unwrap();
            assert_eq!(p, b.rep_genus(n, GenusSide::Principal).unwrap(), "n={n}");
            assert_eq!(np, b.rep_genus(n, GenusSide::NonPrincipal).unwrap(), "n={n}");
        }
    }

    #[test]
    fn profile_fixtures() {
        let b = bundle();
        let p = b.profile(2 * 2 * 23 * 5 * 5).unwrap();
        assert_eq!(p.twist_exp, 0);
        assert_eq!(p.ramified_exp, 1);
        assert_eq!(p.split, vec![(2, 2)]); // (-23/2) = +1
        assert_eq!(p.inert, vec![(5, 2)]); // (-23/5) = -1
        assert_eq!(p.twist_negatives, 2); // (2/3) = -1, multiplicity 2
        assert_eq!(p.lambda, 3);

        let p = b.profile(45).unwrap(); // 3^2 * 5
        assert_eq!(p.twist_exp, 2);
        assert_eq!(p.lambda, 0); // inert 5 to an odd power
    }
}
