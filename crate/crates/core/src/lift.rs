//! The classical lifting map from classes of discriminant `D` to classes of
//! discriminant `D p^2` (Buell, Chapter 7): the raw list of `p + 1` forms,
//! the closed-form classification of its nonprimitive entries, and the set
//! `Psi_p(f)` of distinct primitive classes it produces.

use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, is_prime, kronecker, sqrt_mod};
use crate::error::{Error, Result};
use crate::forms::QuadForm;
use crate::genus::{genera, GenusLabel};
use crate::ClassGroup;

/// Where an entry of the lift list comes from: the single co-form
/// `(a, bp, c p^2)` or the shift `(a p^2, p(b + 2ah), a h^2 + b h + c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LiftSource {
    CoForm,
    Shift(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftEntry {
    /// Raw, unreduced coefficients.
    pub form: QuadForm,
    pub source: LiftSource,
    /// gcd scan: false exactly when p divides all three coefficients.
    pub primitive: bool,
}

/// The `p + 1` raw forms of discriminant `D p^2` produced from one primitive
/// form of discriminant `D`: the co-form first, then shifts `h = 0 .. p-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftList {
    pub source: QuadForm,
    pub p: i64,
    pub entries: Vec<LiftEntry>,
}

fn require_prime(p: i64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

pub fn lift_list(f: &QuadForm, p: i64) -> Result<LiftList> {
    f.require_primitive()?;
    require_prime(p)?;
    let (a, b, c) = (f.a(), f.b(), f.c());
    let mut entries = Vec::with_capacity(p as usize + 1);
    let coform = QuadForm::new(a, b * p, c * p * p)?;
    entries.push(LiftEntry {
        primitive: coform.is_primitive(),
        form: coform,
        source: LiftSource::CoForm,
    });
    for h in 0..p {
        let shifted = f.translate(h);
        let form = QuadForm::new(a * p * p, p * shifted.b(), shifted.c())?;
        entries.push(LiftEntry {
            primitive: form.is_primitive(),
            form,
            source: LiftSource::Shift(h),
        });
    }
    Ok(LiftList {
        source: *f,
        p,
        entries,
    })
}

/// The case split governing which entries of the lift list are nonprimitive,
/// determined by `p | a` and the Kronecker symbol `(D/p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LiftCase {
    /// p | a, (D/p) = 0: only the co-form.
    RamifiedDividesA,
    /// p does not divide a, (D/p) = 0: one shift, at h = -b/2a.
    RamifiedCoprimeA,
    /// (D/p) = -1: every entry is primitive.
    Inert,
    /// p | a, (D/p) = 1: the co-form and the shift at h = -c/b.
    SplitDividesA,
    /// p does not divide a, (D/p) = 1: the two shifts at (-b ± sqrt(D))/2a.
    SplitCoprimeA,
}

impl std::fmt::Display for LiftCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            LiftCase::RamifiedDividesA => "p|a, (D/p)=0",
            LiftCase::RamifiedCoprimeA => "p∤a, (D/p)=0",
            LiftCase::Inert => "(D/p)=-1",
            LiftCase::SplitDividesA => "p|a, (D/p)=1",
            LiftCase::SplitCoprimeA => "p∤a, (D/p)=1",
        };
        f.write_str(s)
    }
}

/// The predicted nonprimitive entries of a lift list: whether the co-form is
/// nonprimitive and the sorted shift values `h` of nonprimitive shifts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonprimitiveTags {
    pub case: LiftCase,
    pub coform: bool,
    pub shifts: Vec<i64>,
}

impl NonprimitiveTags {
    pub fn count(&self) -> usize {
        self.shifts.len() + usize::from(self.coform)
    }
}

/// Closed-form classification of the nonprimitive entries. For odd `p` the
/// shift values are `h1 = -b/2a` (ramified), `h2 = -c/b` (split, p | a), and
/// `h3, h4 = (-b ± sqrt(D))/2a` (split, p coprime to a), all mod p; for
/// `p = 2` the rule collapses to `h = c mod 2` (and both shifts when split).
pub fn nonprimitive_tags(f: &QuadForm, p: i64) -> Result<NonprimitiveTags> {
    f.require_primitive()?;
    require_prime(p)?;
    let (a, b, c) = (f.a(), f.b(), f.c());
    let disc = f.discriminant();
    let chi = kronecker(disc, p)?;
    let divides_a = a % p == 0;
    let (case, coform, mut shifts) = match (divides_a, chi) {
        (true, 0) => (LiftCase::RamifiedDividesA, true, vec![]),
        (false, 0) => {
            let h1 = if p == 2 {
                c.rem_euclid(2)
            } else {
                ((-b).rem_euclid(p) * inv_mod(2 * a, p)?).rem_euclid(p)
            };
            (LiftCase::RamifiedCoprimeA, false, vec![h1])
        }
        (_, -1) => (LiftCase::Inert, false, vec![]),
        (true, _) => {
            // the same congruence -c/b works at p = 2 (b is odd here)
            let h2 = ((-c).rem_euclid(p) * inv_mod(b, p)?).rem_euclid(p);
            (LiftCase::SplitDividesA, true, vec![h2])
        }
        (false, _) => {
            if p == 2 {
                (LiftCase::SplitCoprimeA, false, vec![0, 1])
            } else {
                let root = sqrt_mod(disc, p)?.expect("(D/p) = 1");
                let inv2a = inv_mod(2 * a, p)?;
                let h3 = ((-b + root).rem_euclid(p) * inv2a).rem_euclid(p);
                let h4 = ((-b - root).rem_euclid(p) * inv2a).rem_euclid(p);
                (LiftCase::SplitCoprimeA, false, vec![h3, h4])
            }
        }
    };
    shifts.sort_unstable();
    Ok(NonprimitiveTags {
        case,
        coform,
        shifts,
    })
}

/// The image of a class under the lifting map: the distinct reduced classes
/// of discriminant `D p^2` coming from the primitive entries of its lift
/// list, sorted canonically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiImage {
    pub source: QuadForm,
    pub p: i64,
    pub classes: Vec<QuadForm>,
}

impl PsiImage {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains(&self, class: &QuadForm) -> bool {
        self.classes.binary_search(class).is_ok()
    }
}

pub fn psi(f: &QuadForm, p: i64) -> Result<PsiImage> {
    let list = lift_list(f, p)?;
    let mut classes: Vec<QuadForm> = list
        .entries
        .iter()
        .filter(|e| e.primitive)
        .map(|e| e.form.reduce())
        .collect();
    classes.sort();
    classes.dedup();
    Ok(PsiImage {
        source: *f,
        p,
        classes,
    })
}

/// The classes of `Psi_p(f)` lying in the genus of `D p^2` with the given
/// character vector (possibly none).
pub fn psi_genus(f: &QuadForm, p: i64, label: &GenusLabel) -> Result<Vec<QuadForm>> {
    let image = psi(f, p)?;
    let lifted = ClassGroup::enumerate(f.discriminant() * p * p)?;
    let partition = genera(&lifted)?;
    Ok(image
        .classes
        .into_iter()
        .filter(|class| partition.label_of(class) == Some(label))
        .collect())
}

/// Whether the images `{Psi_p(f) : f in CL(D)}` are pairwise disjoint, of
/// equal size, and jointly cover `CL(D p^2)`.
pub fn psi_partition_check(disc: i64, p: i64) -> Result<bool> {
    let cl = ClassGroup::enumerate(disc)?;
    let lifted = ClassGroup::enumerate(disc * p * p)?;
    let images: Vec<PsiImage> = cl
        .forms()
        .iter()
        .map(|f| psi(f, p))
        .collect::<Result<_>>()?;
    let sizes: std::collections::BTreeSet<usize> = images.iter().map(PsiImage::len).collect();
    if sizes.len() != 1 {
        return Ok(false);
    }
    let mut union: Vec<QuadForm> = images.iter().flat_map(|im| im.classes.clone()).collect();
    let total = union.len();
    union.sort();
    union.dedup();
    Ok(total == union.len() && union == lifted.forms())
}
