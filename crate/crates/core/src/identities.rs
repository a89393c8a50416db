//! Coefficient-wise verification of the theta-series identities connecting a
//! form of discriminant `D` with its lifted classes of discriminant `D p^2`:
//! the `P_{p,0}` dissection lemma, the full-image identity, and the per-genus
//! refinement. Verifiers return structured pass/fail reports; mismatches are
//! reported, never thrown.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::kronecker;
use crate::error::{Error, Result};
use crate::forms::{unit_w, QuadForm};
use crate::genus::{find_represented_coprime, genera, GenusLabel};
use crate::lift::{lift_list, nonprimitive_tags, psi, LiftCase, LiftSource};
use crate::qseries::{theta, TruncatedSeries};
use crate::{arith::gcd, ClassGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub index: usize,
    pub lhs: i64,
    pub rhs: i64,
}

/// Outcome of one identity check: which identity, at which parameters, and
/// the first discrepant coefficient if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub parameters: BTreeMap<String, String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<Mismatch>,
}

impl VerificationReport {
    pub fn from_series(
        identity: impl Into<String>,
        parameters: BTreeMap<String, String>,
        lhs: &TruncatedSeries,
        rhs: &TruncatedSeries,
    ) -> Self {
        let first_mismatch = lhs
            .first_mismatch(rhs)
            .map(|(index, lhs, rhs)| Mismatch { index, lhs, rhs });
        VerificationReport {
            identity: identity.into(),
            parameters,
            status: if first_mismatch.is_none() {
                Status::Pass
            } else {
                Status::Fail
            },
            first_mismatch,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn base_params(f: &QuadForm, p: i64, order: usize) -> BTreeMap<String, String> {
    BTreeMap::from([
        ("disc".into(), f.discriminant().to_string()),
        ("p".into(), p.to_string()),
        ("form".into(), f.to_string()),
        ("N".into(), order.to_string()),
    ])
}

/// The case split of the `P_{p,0}` dissection for `(f, p)`.
pub fn pp0_case(f: &QuadForm, p: i64) -> Result<LiftCase> {
    Ok(nonprimitive_tags(f, p)?.case)
}

/// Right-hand side of the `P_{p,0}` dissection of `theta(f)`, assembled from
/// the appropriate lift entries:
///
/// - ramified, p | a: the co-form's theta
/// - ramified, p coprime to a: the nonprimitive shift's theta
/// - inert: the dilation `theta(f)(q^{p^2})`
/// - split, p | a: shift + co-form - dilation
/// - split, p coprime to a: both shifts - dilation
pub fn rhs_pp0(f: &QuadForm, p: i64, order: usize) -> Result<(LiftCase, TruncatedSeries)> {
    let tags = nonprimitive_tags(f, p)?;
    let list = lift_list(f, p)?;
    let shift_form = |h: i64| {
        list.entries
            .iter()
            .find(|e| e.source == LiftSource::Shift(h))
            .expect("shift in range")
            .form
    };
    let coform = list.entries[0].form;
    let dilated = theta(f, order).dilate(p * p)?;
    let series = match tags.case {
        LiftCase::RamifiedDividesA => theta(&coform, order),
        LiftCase::RamifiedCoprimeA => theta(&shift_form(tags.shifts[0]), order),
        LiftCase::Inert => dilated,
        LiftCase::SplitDividesA => {
            let shift = theta(&shift_form(tags.shifts[0]), order);
            &(&shift + &theta(&coform, order)) - &dilated
        }
        LiftCase::SplitCoprimeA => {
            let s3 = theta(&shift_form(tags.shifts[0]), order);
            let s4 = theta(&shift_form(tags.shifts[1]), order);
            &(&s3 + &s4) - &dilated
        }
    };
    Ok((tags.case, series))
}

/// Checks `P_{p,0} theta(f) = rhs_pp0(f, p)` coefficient-wise to the given
/// order.
pub fn verify_pp0(f: &QuadForm, p: i64, order: usize) -> Result<VerificationReport> {
    let (case, rhs) = rhs_pp0(f, p, order)?;
    let lhs = theta(f, order).project(p, 0)?;
    let mut params = base_params(f, p, order);
    params.insert("case".into(), case.to_string());
    Ok(VerificationReport::from_series("pp0", params, &lhs, &rhs))
}

/// Checks the full-image identity
/// `w * sum_{A in Psi_p(f)} theta(A)
///  = [p - (D/p)] theta(f)(q^{p^2}) + theta(f) - P_{p,0} theta(f)`.
pub fn verify_main_theorem(f: &QuadForm, p: i64, order: usize) -> Result<VerificationReport> {
    let disc = f.discriminant();
    let image = psi(f, p)?;
    let w = unit_w(disc);
    let mut lhs = TruncatedSeries::zero(order);
    for class in &image.classes {
        lhs = &lhs + &theta(class, order);
    }
    lhs = lhs.scale(w);
    let theta_f = theta(f, order);
    let multiplier = p - kronecker(disc, p)?;
    let rhs = &(&theta_f.dilate(p * p)?.scale(multiplier) + &theta_f)
        - &theta_f.project(p, 0)?;
    let mut params = base_params(f, p, order);
    params.insert("w".into(), w.to_string());
    params.insert("psi".into(), format_classes(&image.classes));
    Ok(VerificationReport::from_series("main", params, &lhs, &rhs))
}

fn format_classes(classes: &[QuadForm]) -> String {
    classes
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// The nonempty genus slices of `Psi_p(f)`, keyed by the canonical labels of
/// `CL(D p^2)`.
pub fn genus_slices(f: &QuadForm, p: i64) -> Result<Vec<(GenusLabel, Vec<QuadForm>)>> {
    let image = psi(f, p)?;
    let lifted = ClassGroup::enumerate(f.discriminant() * p * p)?;
    let partition = genera(&lifted)?;
    let mut slices: Vec<(GenusLabel, Vec<QuadForm>)> = Vec::new();
    for (label, _) in partition.genera() {
        let classes: Vec<QuadForm> = image
            .classes
            .iter()
            .filter(|c| partition.label_of(c) == Some(label))
            .copied()
            .collect();
        if !classes.is_empty() {
            slices.push((label.clone(), classes));
        }
    }
    Ok(slices)
}

/// `t` parameter of the p = 2 genus identity: 2 when `D = 0 mod 16`, else 0
/// for odd D and 1 for even D.
pub fn two_adic_t(disc: i64) -> i64 {
    if disc.rem_euclid(16) == 0 {
        2
    } else if disc % 2 != 0 {
        0
    } else {
        1
    }
}

/// Checks the per-genus identity for the classes of `Psi_p(f)` in the genus
/// labeled `label`. For odd p the right side keeps the projections `P_{p,i}`
/// at residues with `(ri/p) = 1`; for p = 2 it keeps the single projection
/// `P_{2^{t+1}, r}`.
///
/// For p = 2 the slice is additionally required to represent coprime values
/// in one residue class mod `2^{t+1}` only (within the checked order);
/// anything else is an error, not a failed report.
pub fn verify_genus_theorem(
    f: &QuadForm,
    p: i64,
    label: &GenusLabel,
    order: usize,
) -> Result<VerificationReport> {
    let disc = f.discriminant();
    let lifted_disc = disc * p * p;
    let slices = genus_slices(f, p)?;
    let slice = slices
        .iter()
        .find(|(l, _)| l == label)
        .map(|(_, classes)| classes.clone())
        .ok_or(Error::EmptyGenusSlice)?;
    let w = unit_w(disc);
    let r = find_represented_coprime(&slice[0], 2 * lifted_disc.abs())?;

    let mut lhs = TruncatedSeries::zero(order);
    for class in &slice {
        lhs = &lhs + &theta(class, order);
    }
    lhs = lhs.scale(w);

    let theta_f = theta(f, order);
    let mut rhs = theta_f.dilate(p * p)?.scale(w * slice.len() as i64);
    let mut params = base_params(f, p, order);
    params.insert("w".into(), w.to_string());
    params.insert("genus".into(), label.to_string());
    params.insert("r".into(), r.to_string());
    params.insert("slice".into(), format_classes(&slice));

    if p != 2 {
        for i in 1..p {
            if kronecker(r * i, p)? == 1 {
                rhs = &rhs + &theta_f.project(p, i)?;
            }
        }
    } else {
        let t = two_adic_t(disc);
        let modulus = 1i64 << (t + 1);
        let residue = r.rem_euclid(modulus);
        // every coprime value any class of the slice represents must land in
        // this one residue class
        for class in &slice {
            let th = theta(class, order);
            for n in 1..=order {
                if th.coeff(n) > 0 && gcd(n as i64, 2 * lifted_disc.abs()) == 1 {
                    let got = (n as i64).rem_euclid(modulus);
                    if got != residue {
                        return Err(Error::MixedResidues {
                            modulus,
                            first: residue,
                            second: got,
                        });
                    }
                }
            }
        }
        params.insert("t".into(), t.to_string());
        rhs = &rhs + &theta_f.project(modulus, residue)?;
    }
    Ok(VerificationReport::from_series("genus", params, &lhs, &rhs))
}
