//! Printed closed forms for both families, kept apart from the constructors so
//! that they are only ever compared against, never built from.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{build_family_a, build_family_b, FamilyAParams, FamilyBParams, FamilyError};
use crate::exponents::analyze_periodic;
use crate::rational::{int, ExtendedRational, Rational};

/// `(n0 + n1·C)/(d0 + d1·C)`: the shape of every printed exponent formula of
/// the second family once the `A_k` are fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFractional {
    pub n0: Rational,
    pub n1: Rational,
    pub d0: Rational,
    pub d1: Rational,
}

impl LinearFractional {
    fn new(n0: Rational, n1: Rational, d0: Rational, d1: Rational) -> Self {
        LinearFractional { n0, n1, d0, d1 }
    }

    /// Value at `C`; `None` on a zero denominator.
    pub fn eval(&self, c: &Rational) -> Option<Rational> {
        let den = &self.d0 + &self.d1 * c;
        (!den.is_zero()).then(|| (&self.n0 + &self.n1 * c) / den)
    }

    pub fn at_zero(&self) -> Option<Rational> {
        self.eval(&Rational::zero())
    }

    /// Limit as `C → ∞`; `None` when it is infinite or undefined.
    pub fn at_infinity(&self) -> Option<Rational> {
        if !self.d1.is_zero() {
            Some(&self.n1 / &self.d1)
        } else if self.n1.is_zero() {
            self.at_zero()
        } else {
            None
        }
    }
}

fn sum(values: &[Rational]) -> Rational {
    values.iter().fold(Rational::zero(), |acc, v| acc + v)
}

/// `2A_2 + A_3 + … + A_j`
fn doubled_head(p: &FamilyBParams, j: usize) -> Rational {
    p.a(2) + sum(&p.a[1..j])
}

/// Printed formulas for `Ŵ_0, …, Ŵ_{n-1}` (index `d`) as functions of `C`.
pub fn printed_w(p: &FamilyBParams) -> Vec<LinearFractional> {
    let n = p.n;
    let one = Rational::one;
    let zero = Rational::zero;
    let mut out = vec![LinearFractional::new(zero(), zero(), one(), zero()); n];
    out[n - 1] = LinearFractional::new(one() - p.a(2), zero(), p.a(2).clone(), zero());
    for k in 2..n {
        out[n - k] = LinearFractional::new(
            one() - doubled_head(p, k + 1),
            p.a(k).clone(),
            p.a(2).clone(),
            sum(&p.a[1..k]),
        );
    }
    out[0] = LinearFractional::new(
        one() - doubled_head(p, n),
        zero(),
        p.a(2).clone(),
        sum(&p.a[1..n - 1]),
    );
    out
}

/// Printed formulas for `F_1, …, F_n` (index `k-1`) as functions of `C`.
pub fn printed_f(p: &FamilyBParams) -> Vec<LinearFractional> {
    let n = p.n;
    let mut out = vec![LinearFractional::new(
        p.a(1).clone(),
        Rational::zero(),
        Rational::one(),
        Rational::zero(),
    )];
    for k in 2..=n {
        out.push(LinearFractional::new(
            Rational::zero(),
            p.a(k).clone(),
            p.a(1) + Rational::one() - doubled_head(p, k + 1),
            sum(&p.a[1..k]) + p.a(k),
        ));
    }
    out
}

/// Printed division times `q_{6m+1}, …, q_{6m+5}` and `q_{6(m+1)}` for
/// `q_{6m} = q_0`, keyed by their offset. For `n = 2` only the offsets
/// whose formulas make sense there (2, 3, 6) are returned.
pub fn printed_family_a_points(p: &FamilyAParams) -> Vec<(usize, Rational)> {
    let Some(w) = p.omega_hat.as_finite() else {
        return Vec::new();
    };
    let n = int(p.n as i64);
    let e = w - &n;
    let one = Rational::one();
    let c = &one + &p.a * &e;
    let wp1 = w + &one;
    let q0 = &p.q0;
    let mut out = Vec::new();
    if p.n > 2 {
        let n2 = &n - int(2);
        let q1 = (&n2 * &wp1 + (&one - &p.a) * &e) / (&n2 * &wp1) * q0;
        out.push((1, q1));
    }
    out.push((2, ((&n + &one) + (&one + &p.a) * &e) / &wp1 * q0));
    out.push((3, (w + &c * &c) / &wp1 * q0));
    if p.n > 2 {
        out.push((4, (&one + &c * (&n + &p.a * &e)) / &wp1 * q0));
        out.push((5, (&one + int(2) * &p.a * &e + w * &c) / &wp1 * q0));
    }
    out.push((6, &c * q0));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckEntry {
    pub id: String,
    pub derived: ExtendedRational,
    /// `None` when the printed form has a zero denominator at these parameters.
    pub printed: Option<ExtendedRational>,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub family: String,
    /// The derived system passed validation, dilation closure included.
    pub self_consistent: bool,
    pub entries: Vec<CrossCheckEntry>,
}

impl CrossCheckReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &CrossCheckEntry> {
        self.entries.iter().filter(|e| !e.matches)
    }

    pub fn entry(&self, id: &str) -> Option<&CrossCheckEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

fn entry(id: String, derived: ExtendedRational, printed: Option<Rational>) -> CrossCheckEntry {
    let printed = printed.map(ExtendedRational::Finite);
    let matches = printed.as_ref() == Some(&derived);
    CrossCheckEntry {
        id,
        derived,
        printed,
        matches,
    }
}

pub fn crosscheck_family_a(p: &FamilyAParams) -> Result<CrossCheckReport, FamilyError> {
    let sys = build_family_a(p)?;
    let points = sys.division_points();
    // for n = 2 the schedule has no middle block, so offsets 2, 3, 6 sit at indices 1, 2, 3
    let index_of = |offset: usize| {
        if p.n > 2 {
            offset
        } else {
            [0, 0, 1, 2, 0, 0, 3][offset]
        }
    };
    let entries = printed_family_a_points(p)
        .into_iter()
        .map(|(offset, printed)| {
            let derived = ExtendedRational::Finite(points[index_of(offset)].clone());
            let id = if offset == 6 {
                "q_{6(m+1)}".to_string()
            } else {
                format!("q_{{6m+{offset}}}")
            };
            entry(id, derived, Some(printed))
        })
        .collect();
    Ok(CrossCheckReport {
        family: "A".into(),
        self_consistent: sys.validate().valid,
        entries,
    })
}

pub fn crosscheck_family_b(p: &FamilyBParams) -> Result<CrossCheckReport, FamilyError> {
    let sys = build_family_b(p)?;
    let profile = analyze_periodic(&sys)?.profile;
    let mut entries = Vec::new();
    for (d, form) in printed_w(p).iter().enumerate().rev() {
        entries.push(entry(
            format!("W_{d}"),
            profile.omega_hat[d].clone(),
            form.eval(&p.c),
        ));
    }
    for (idx, form) in printed_f(p).iter().enumerate() {
        entries.push(entry(
            format!("F_{}", idx + 1),
            ExtendedRational::Finite(profile.phi_bar[idx].clone()),
            form.eval(&p.c),
        ));
    }
    Ok(CrossCheckReport {
        family: "B".into(),
        self_consistent: sys.validate().valid,
        entries,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum FamilyParams {
    A(FamilyAParams),
    B(FamilyBParams),
}

pub fn crosscheck_printed_formulas(params: &FamilyParams) -> Result<CrossCheckReport, FamilyError> {
    match params {
        FamilyParams::A(p) => crosscheck_family_a(p),
        FamilyParams::B(p) => crosscheck_family_b(p),
    }
}
