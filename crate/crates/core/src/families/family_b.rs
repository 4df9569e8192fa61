use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::FamilyError;
use crate::rational::{format_rational, int, serde_frac, serde_frac_vec, Rational};
use crate::system::{Extension, PLSystem, ScheduleBuilder};

/// Parameters of the dilation family on `[1, C]` with `P(1) = A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyBParams {
    pub n: usize,
    #[serde(with = "serde_frac")]
    pub c: Rational,
    /// `A_1, …, A_{n+1}`
    #[serde(with = "serde_frac_vec")]
    pub a: Vec<Rational>,
}

impl FamilyBParams {
    /// `A_k` for `k` in `1..=n+1`.
    pub fn a(&self, k: usize) -> &Rational {
        &self.a[k - 1]
    }

    /// Builds the full parameter set from the free coordinates
    /// `(C, A_2, …, A_n)`, with `A_1 = A_2` and `A_{n+1}` closing the sum to 1.
    pub fn from_coordinates(coords: &[Rational]) -> Result<Self, FamilyError> {
        if coords.len() < 3 {
            return Err(FamilyError::InvalidParams(format!(
                "need (C, A_2, …, A_n) with n ≥ 3, got {} coordinates",
                coords.len()
            )));
        }
        let n = coords.len();
        let c = coords[0].clone();
        let mut a = vec![coords[1].clone()];
        a.extend(coords[1..].iter().cloned());
        let rest = a.iter().fold(Rational::one(), |acc, v| acc - v);
        a.push(rest);
        Ok(FamilyBParams { n, c, a })
    }

    /// The free coordinates `(C, A_2, …, A_n)`.
    pub fn coordinates(&self) -> Vec<Rational> {
        let mut out = vec![self.c.clone()];
        out.extend(self.a[1..self.n].iter().cloned());
        out
    }

    /// Every inequality of the admissibility conditions that fails, as text.
    pub fn violations(&self) -> Vec<String> {
        let n = self.n;
        let mut out = Vec::new();
        if n < 3 {
            out.push(format!("n = {n} but the family needs n ≥ 3"));
            return out;
        }
        if self.a.len() != n + 1 {
            out.push(format!(
                "A has {} entries, expected {}",
                self.a.len(),
                n + 1
            ));
            return out;
        }
        let f = format_rational;
        if !self.a(1).is_positive() {
            out.push(format!("0 < A_1 fails (A_1 = {})", f(self.a(1))));
        }
        if self.a(1) != self.a(2) {
            out.push(format!(
                "A_1 = A_2 fails ({} vs {})",
                f(self.a(1)),
                f(self.a(2))
            ));
        }
        for k in 2..=n {
            if self.a(k) >= self.a(k + 1) {
                out.push(format!(
                    "A_{k} < A_{} fails ({} vs {})",
                    k + 1,
                    f(self.a(k)),
                    f(self.a(k + 1))
                ));
            }
        }
        let sum = self.a.iter().fold(Rational::zero(), |acc, v| acc + v);
        if !sum.is_one() {
            out.push(format!("sum of A_k is {} instead of 1", f(&sum)));
        }
        if out.iter().any(|s| s.starts_with("0 <")) {
            // the ratio conditions below are meaningless with a nonpositive A_1
            return out;
        }
        for k in 2..n {
            let lower = self.a(k + 1) / self.a(k);
            let upper = self.a(k + 2) / self.a(k);
            if lower >= self.c {
                out.push(format!(
                    "A_{}/A_{k} = {} < C = {} fails",
                    k + 1,
                    f(&lower),
                    f(&self.c)
                ));
            }
            if self.c >= upper {
                out.push(format!(
                    "C = {} < A_{}/A_{k} = {} fails",
                    f(&self.c),
                    k + 2,
                    f(&upper)
                ));
            }
        }
        let top = self.a(n + 1) / self.a(n);
        if top <= Rational::one() {
            out.push(format!("1 < A_{}/A_{n} = {} fails", n + 1, f(&top)));
        }
        if top >= self.c {
            out.push(format!(
                "A_{}/A_{n} = {} < C = {} fails",
                n + 1,
                f(&top),
                f(&self.c)
            ));
        }
        out
    }

    pub fn check(&self) -> Result<(), FamilyError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(FamilyError::ConditionsViolated(v))
        }
    }

    /// Index of the division point `δ_{k,j}` in the built system
    /// (`2 ≤ k ≤ n` with `j ∈ {1, 2}`, or `k = n+1, j = 1`).
    pub fn delta_index(&self, k: usize, j: usize) -> Option<usize> {
        let valid = (2..=self.n).contains(&k) && (j == 1 || j == 2) || (k == self.n + 1 && j == 1);
        valid.then(|| 2 * k + j - 4)
    }
}

/// `C = 3`, `A_1 = A_2 = 2^{-n}`, `A_k = 2^{k-n-2}` for `3 ≤ k ≤ n+1`.
pub fn default_params_b(n: usize) -> Result<FamilyBParams, FamilyError> {
    if n < 3 {
        return Err(FamilyError::InvalidParams(format!(
            "the family needs n ≥ 3, got {n}"
        )));
    }
    let pow2 = |e: usize| Rational::new(1.into(), num_bigint::BigInt::from(1) << e);
    let mut a = vec![pow2(n), pow2(n)];
    for k in 3..=n + 1 {
        a.push(pow2(n + 2 - k));
    }
    Ok(FamilyBParams { n, c: int(3), a })
}

/// Builds the period `[1, C]`. The `2n+1` division points are
/// `1, δ_{2,1}, δ_{2,2}, …, δ_{n,1}, δ_{n,2}, δ_{n+1,1}, C`.
pub fn build_family_b(params: &FamilyBParams) -> Result<PLSystem, FamilyError> {
    params.check()?;
    let n = params.n;
    let c = &params.c;
    let a = |k: usize| params.a(k).clone();
    let mut b = ScheduleBuilder::start(n, Rational::one(), params.a.clone())?;
    b.rise(2, 2, &a(3))?;
    for k in 2..=n {
        // P_k and P_{k+1} climb together at slope 1/2
        b.rise(k, k + 1, &(c * a(k)))?;
        if k < n {
            b.rise(k + 1, k + 1, &a(k + 2))?;
        }
    }
    b.rise(n + 1, n + 1, &(c * a(n + 1)))?;
    b.rise(1, 1, &(c * a(1)))?;
    debug_assert_eq!(b.current_q(), c);
    Ok(b.finish(Extension::Dilation { factor: c.clone() })?)
}
