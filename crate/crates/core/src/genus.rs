//! Genus theory: assigned characters of a discriminant, character vectors of
//! forms, the genus partition of a class group, and the genus-count ratio
//! between `D` and `D p^2`.
//!
//! Genus membership is decided by evaluating the assigned characters on a
//! represented value coprime to `2D`. Each partition is validated (equal part
//! sizes, power-of-two part count) so a convention slip in the character
//! table surfaces as an error instead of a silent mislabeling.

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, gcd, kronecker};
use crate::error::{Error, Result};
use crate::forms::{validate_discriminant, ClassGroup, QuadForm};
use crate::qseries::theta;

/// Supplementary characters attached to even discriminants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtraChar {
    /// delta(r) = (-1/r), sensitive to r mod 4
    MinusOne,
    /// epsilon(r) = (2/r), sensitive to r mod 8
    Two,
    /// delta*epsilon(r) = (-2/r)
    MinusTwo,
}

impl ExtraChar {
    fn eval(self, r: i64) -> Result<i64> {
        match self {
            ExtraChar::MinusOne => kronecker(-1, r),
            ExtraChar::Two => kronecker(2, r),
            ExtraChar::MinusTwo => kronecker(-2, r),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ExtraChar::MinusOne => "delta",
            ExtraChar::Two => "epsilon",
            ExtraChar::MinusTwo => "delta*epsilon",
        }
    }
}

/// The assigned characters of a discriminant, in declaration order: one
/// `(r/p)` per odd prime `p | D` ascending, then the extra characters for
/// even D keyed on D mod 16 / mod 32.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterSystem {
    disc: i64,
    odd_primes: Vec<i64>,
    extra: Vec<ExtraChar>,
}

impl CharacterSystem {
    pub fn for_discriminant(disc: i64) -> Result<Self> {
        validate_discriminant(disc)?;
        let odd_primes: Vec<i64> = factorize(disc)
            .into_iter()
            .filter_map(|(p, _)| (p != 2).then_some(p))
            .collect();
        let extra = if disc % 2 != 0 {
            Vec::new()
        } else {
            match (disc.rem_euclid(16), disc.rem_euclid(32)) {
                (4, _) => vec![],
                (12, _) => vec![ExtraChar::MinusOne],
                (_, 24) => vec![ExtraChar::MinusTwo],
                (_, 8) => vec![ExtraChar::Two],
                (_, 16) => vec![ExtraChar::MinusOne],
                (_, 0) => vec![ExtraChar::MinusOne, ExtraChar::Two],
                _ => unreachable!("even discriminants are 0 mod 4"),
            }
        };
        Ok(CharacterSystem {
            disc,
            odd_primes,
            extra,
        })
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn odd_primes(&self) -> &[i64] {
        &self.odd_primes
    }

    pub fn extra_chars(&self) -> &[ExtraChar] {
        &self.extra
    }

    pub fn len(&self) -> usize {
        self.odd_primes.len() + self.extra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Character names in declaration order, e.g. `chi3, chi23, delta`.
    pub fn names(&self) -> Vec<String> {
        self.odd_primes
            .iter()
            .map(|p| format!("chi{p}"))
            .chain(self.extra.iter().map(|e| e.name().to_string()))
            .collect()
    }

    /// Evaluate all characters at a value coprime to `2 disc`.
    pub fn evaluate(&self, r: i64) -> Result<GenusLabel> {
        let mut values = Vec::with_capacity(self.len());
        for &p in &self.odd_primes {
            values.push(kronecker(r, p)? as i8);
        }
        for &e in &self.extra {
            values.push(e.eval(r)? as i8);
        }
        debug_assert!(values.iter().all(|&v| v != 0), "value not coprime to 2D");
        Ok(GenusLabel(values))
    }
}

/// A vector of +-1 character values, one per assigned character. Ordered
/// with +1 before -1 componentwise, so the all-plus principal genus sorts
/// first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GenusLabel(Vec<i8>);

impl GenusLabel {
    pub fn values(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl PartialOrd for GenusLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GenusLabel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |v: &[i8]| v.iter().map(|&x| -x).collect::<Vec<_>>();
        key(&self.0).cmp(&key(&other.0))
    }
}

impl std::fmt::Display for GenusLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<&str> = self
            .0
            .iter()
            .map(|&v| if v > 0 { "+1" } else { "-1" })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Smallest `n >= 1` represented by `f` with `gcd(n, modulus) = 1`, found by
/// scanning the theta expansion in growing chunks. Errors past the safety
/// bound `4 disc^2`, which a primitive form can never reach.
pub fn find_represented_coprime(f: &QuadForm, modulus: i64) -> Result<i64> {
    f.require_primitive()?;
    let disc = f.discriminant();
    let bound = 4i64.saturating_mul(disc).saturating_mul(disc).min(1 << 40);
    let mut order = 64usize;
    loop {
        let th = theta(f, order.min(bound as usize));
        for n in 1..=th.order() {
            if th.coeff(n) > 0 && gcd(n as i64, modulus) == 1 {
                return Ok(n as i64);
            }
        }
        if order as i64 >= bound {
            return Err(Error::NoCoprimeValue(f.a(), f.b(), f.c(), modulus, bound));
        }
        order *= 4;
    }
}

/// Character vector of a primitive form, evaluated at its smallest
/// represented value coprime to `2 disc`.
pub fn genus_label(f: &QuadForm) -> Result<GenusLabel> {
    let disc = f.discriminant();
    let r = find_represented_coprime(f, 2 * disc.abs())?;
    CharacterSystem::for_discriminant(disc)?.evaluate(r)
}

/// The genus partition of a class group, genera in canonical label order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusPartition {
    disc: i64,
    system: CharacterSystem,
    genera: Vec<(GenusLabel, Vec<QuadForm>)>,
}

impl GenusPartition {
    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn system(&self) -> &CharacterSystem {
        &self.system
    }

    pub fn genera(&self) -> &[(GenusLabel, Vec<QuadForm>)] {
        &self.genera
    }

    pub fn num_genera(&self) -> usize {
        self.genera.len()
    }

    pub fn label_of(&self, f: &QuadForm) -> Option<&GenusLabel> {
        let r = f.reduce();
        self.genera
            .iter()
            .find(|(_, forms)| forms.contains(&r))
            .map(|(label, _)| label)
    }

    pub fn genus(&self, label: &GenusLabel) -> Option<&[QuadForm]> {
        self.genera
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, forms)| forms.as_slice())
    }
}

/// Partition the class group by character vector. Fails if the parts are not
/// of equal size with a power-of-two count.
pub fn genera(cg: &ClassGroup) -> Result<GenusPartition> {
    let system = CharacterSystem::for_discriminant(cg.disc())?;
    let mut map: std::collections::BTreeMap<GenusLabel, Vec<QuadForm>> = Default::default();
    for f in cg.forms() {
        let r = find_represented_coprime(f, 2 * cg.disc().abs())?;
        map.entry(system.evaluate(r)?).or_default().push(*f);
    }
    let sizes: std::collections::BTreeSet<usize> = map.values().map(Vec::len).collect();
    if sizes.len() != 1 || !map.len().is_power_of_two() {
        return Err(Error::GenusValidation { disc: cg.disc() });
    }
    Ok(GenusPartition {
        disc: cg.disc(),
        system,
        genera: map.into_iter().collect(),
    })
}

/// Number of genera `v(disc)`.
pub fn num_genera(disc: i64) -> Result<usize> {
    Ok(genera(&ClassGroup::enumerate(disc)?)?.num_genera())
}

/// `v(disc p^2) / v(disc)`, computed from the two partitions.
pub fn genus_ratio(disc: i64, p: i64) -> Result<usize> {
    let v = num_genera(disc)?;
    let vp = num_genera(disc * p * p)?;
    debug_assert_eq!(vp % v, 0);
    Ok(vp / v)
}

/// The five-case table for `v(disc p^2) / v(disc)`: 1 when an odd p divides
/// disc, 2 when it does not; for p = 2, keyed on disc mod 32.
pub fn predicted_genus_ratio(disc: i64, p: i64) -> Result<usize> {
    validate_discriminant(disc)?;
    if p != 2 {
        return Ok(if disc % p == 0 { 1 } else { 2 });
    }
    if disc % 2 != 0 {
        return Ok(1);
    }
    Ok(match disc.rem_euclid(32) {
        0 | 12 | 28 => 1,
        4 | 8 | 16 | 20 | 24 => 2,
        _ => unreachable!("even discriminants are 0 mod 4"),
    })
}
