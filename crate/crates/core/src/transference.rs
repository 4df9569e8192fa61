//! Transference inequalities on exponent profiles, and the slope bound on
//! systems that underlies them.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exponents::ExponentProfile;
use crate::rational::{format_rational, int, ExtendedRational, Rational};
use crate::system::{Extension, PLSystem, SystemError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransferenceError {
    #[error("omega_hat_top = {got} is below n = {n}")]
    BelowMinimum { n: usize, got: ExtendedRational },
    #[error("n must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error(transparent)]
    System(#[from] SystemError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs ≤ rhs`
    Le,
    /// `lhs = rhs`
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub relation: Relation,
    pub holds: bool,
    pub lhs: ExtendedRational,
    pub rhs: ExtendedRational,
    /// `rhs − lhs` for `≤`, `|lhs − rhs|` for `=`. Two infinities give 0;
    /// `None` when the difference is unbounded below (an infinite left side
    /// against a finite right side).
    pub slack: Option<ExtendedRational>,
}

impl CheckOutcome {
    pub fn new(
        name: impl Into<String>,
        relation: Relation,
        lhs: ExtendedRational,
        rhs: ExtendedRational,
    ) -> Self {
        use ExtendedRational::{Finite, Infinity};
        let holds = match relation {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
        };
        let slack = match (&lhs, &rhs) {
            (Finite(l), Finite(r)) => Some(Finite(match relation {
                Relation::Le => r - l,
                Relation::Eq => num_traits::Signed::abs(&(r - l)),
            })),
            (Infinity, Infinity) => Some(Finite(Rational::zero())),
            (Finite(_), Infinity) => Some(Infinity),
            (Infinity, Finite(_)) => match relation {
                Relation::Le => None,
                Relation::Eq => Some(Infinity),
            },
        };
        CheckOutcome {
            name: name.into(),
            relation,
            holds,
            lhs,
            rhs,
            slack,
        }
    }

    /// Holds with nothing to spare.
    pub fn is_binding(&self) -> bool {
        self.holds
            && self
                .slack
                .as_ref()
                .is_some_and(|s| s == &ExtendedRational::Finite(Rational::zero()))
    }
}

/// `(αx + β)/(γx + δ)` at `x`, read as its limit `α/γ` at `x = ∞`.
fn mobius(
    x: &ExtendedRational,
    alpha: Rational,
    beta: Rational,
    gamma: Rational,
    delta: Rational,
) -> ExtendedRational {
    match x {
        ExtendedRational::Finite(v) => {
            let den = &gamma * v + delta;
            if den.is_zero() {
                ExtendedRational::Infinity
            } else {
                ExtendedRational::Finite((alpha * v + beta) / den)
            }
        }
        ExtendedRational::Infinity => {
            if gamma.is_zero() {
                ExtendedRational::Infinity
            } else {
                ExtendedRational::Finite(alpha / gamma)
            }
        }
    }
}

fn german_bounds(n: usize, w: &ExtendedRational) -> (ExtendedRational, ExtendedRational) {
    let nm1 = int(n as i64 - 1);
    let lo = mobius(
        w,
        Rational::one(),
        -Rational::one(),
        nm1.clone(),
        Rational::zero(),
    );
    let hi = mobius(w, Rational::one(), -nm1, Rational::one(), Rational::zero());
    (lo, hi)
}

fn jarnik_bounds(n: usize, w: &ExtendedRational) -> (ExtendedRational, ExtendedRational) {
    let ni = int(n as i64);
    let lo = mobius(
        w,
        Rational::one(),
        Rational::zero(),
        &ni - Rational::one(),
        ni.clone(),
    );
    let hi = mobius(
        w,
        Rational::one(),
        Rational::one() - &ni,
        Rational::zero(),
        ni,
    );
    (lo, hi)
}

/// The interval German's inequalities allow for `ω̂_0` given `ω̂_{n−1}`;
/// `[1/(n−1), 1]` when `ω̂_{n−1} = ∞`.
pub fn german_interval(
    n: usize,
    omega_hat_top: &ExtendedRational,
) -> Result<(Rational, Rational), TransferenceError> {
    if n < 2 {
        return Err(TransferenceError::DimensionTooSmall(n));
    }
    if omega_hat_top < &ExtendedRational::Finite(int(n as i64)) {
        return Err(TransferenceError::BelowMinimum {
            n,
            got: omega_hat_top.clone(),
        });
    }
    let (lo, hi) = german_bounds(n, omega_hat_top);
    Ok((
        lo.as_finite().expect("finite").clone(),
        hi.as_finite().expect("finite").clone(),
    ))
}

/// Every relation between the entries of a profile that holds for all
/// admissible points.
pub fn check_profile(profile: &ExponentProfile) -> Vec<CheckOutcome> {
    let n = profile.n;
    let (hat, ord) = (&profile.omega_hat, &profile.omega);
    let mut out = Vec::new();
    for d in 0..n.saturating_sub(1) {
        out.push(CheckOutcome::new(
            format!("chain omega_hat[{d}] <= omega_hat[{}]", d + 1),
            Relation::Le,
            hat[d].clone(),
            hat[d + 1].clone(),
        ));
        out.push(CheckOutcome::new(
            format!("chain omega[{d}] <= omega[{}]", d + 1),
            Relation::Le,
            ord[d].clone(),
            ord[d + 1].clone(),
        ));
    }
    for d in 0..n {
        out.push(CheckOutcome::new(
            format!("omega_hat[{d}] <= omega[{d}]"),
            Relation::Le,
            hat[d].clone(),
            ord[d].clone(),
        ));
        let bound = Rational::new(((d + 1) as i64).into(), ((n - d) as i64).into());
        out.push(CheckOutcome::new(
            format!("minkowski {}/{} <= omega_hat[{d}]", d + 1, n - d),
            Relation::Le,
            ExtendedRational::Finite(bound),
            hat[d].clone(),
        ));
    }
    if n >= 2 {
        let (top, bottom) = (profile.omega_hat_top(), profile.omega_hat_bottom());
        let (jl, jh) = jarnik_bounds(n, top);
        out.push(CheckOutcome::new(
            "jarnik lower",
            Relation::Le,
            jl,
            bottom.clone(),
        ));
        out.push(CheckOutcome::new(
            "jarnik upper",
            Relation::Le,
            bottom.clone(),
            jh,
        ));
        let (gl, gh) = german_bounds(n, top);
        out.push(CheckOutcome::new(
            "german lower",
            Relation::Le,
            gl,
            bottom.clone(),
        ));
        out.push(CheckOutcome::new(
            "german upper",
            Relation::Le,
            bottom.clone(),
            gh,
        ));
    }
    if n == 2 {
        out.push(CheckOutcome::new(
            "jarnik equality omega_hat[0] + 1/omega_hat[1] = 1",
            Relation::Eq,
            hat[0].add(&hat[1].recip()),
            ExtendedRational::Finite(Rational::one()),
        ));
    }
    out
}

/// One instance of the slope bound: `k < m`, the block just right of `p0`
/// covers `k`, and `p ≥ p0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PenteSample {
    pub k: usize,
    pub m: usize,
    pub p0: Rational,
    pub p: Rational,
}

/// Checks `P_m(p) ≤ max(P_m(p_0), P_k(p_0) + p − p_0)` at one tuple.
pub fn pente_check(sys: &PLSystem, s: &PenteSample) -> Result<CheckOutcome, TransferenceError> {
    let at_p0 = sys.evaluate(&s.p0)?;
    let at_p = sys.evaluate(&s.p)?;
    let climb = &at_p0[s.k - 1] + (&s.p - &s.p0);
    let bound = std::cmp::max(at_p0[s.m - 1].clone(), climb);
    Ok(CheckOutcome::new(
        format!(
            "pente k={} m={} p0={} p={}",
            s.k,
            s.m,
            format_rational(&s.p0),
            format_rational(&s.p)
        ),
        Relation::Le,
        ExtendedRational::Finite(at_p[s.m - 1].clone()),
        ExtendedRational::Finite(bound),
    ))
}

/// Checks that `P_m` is constant on `[p_0, p_0 + P_m(p_0) − P_k(p_0)]`
/// (clipped to the domain). Components never decrease, so comparing the
/// two ends suffices.
pub fn pente_corollary(sys: &PLSystem, s: &PenteSample) -> Result<CheckOutcome, TransferenceError> {
    let at_p0 = sys.evaluate(&s.p0)?;
    let mut end = &s.p0 + (&at_p0[s.m - 1] - &at_p0[s.k - 1]);
    if let Some(limit) = sys.domain_end() {
        end = std::cmp::min(end, limit.clone());
    }
    let at_end = sys.evaluate(&end)?;
    Ok(CheckOutcome::new(
        format!(
            "pente constancy k={} m={} p0={}",
            s.k,
            s.m,
            format_rational(&s.p0)
        ),
        Relation::Eq,
        ExtendedRational::Finite(at_end[s.m - 1].clone()),
        ExtendedRational::Finite(at_p0[s.m - 1].clone()),
    ))
}

const GRID: i64 = 1 << 20;

fn random_between<R: Rng>(rng: &mut R, lo: &Rational, hi: &Rational) -> Rational {
    let t = Rational::new(rng.gen_range(0..=GRID).into(), GRID.into());
    lo + (hi - lo) * t
}

/// Draws `samples` random tuples and checks the bound and its constancy
/// corollary at each, returning both outcomes per tuple. Half of the base
/// points and half of the far points are division points, where the bound
/// tends to be tight. Dilation systems are sampled over two periods.
pub fn pente_verify(
    sys: &PLSystem,
    samples: usize,
    seed: u64,
) -> Result<Vec<CheckOutcome>, TransferenceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (start, end, points) = match sys.extension() {
        Extension::Finite => (
            sys.domain_start().clone(),
            sys.domain_end().expect("finite").clone(),
            sys.division_points().to_vec(),
        ),
        Extension::Dilation { factor } => {
            let pts: Vec<Rational> = sys.unrolled_points(2).into_iter().map(|p| p.q).collect();
            let end = sys.domain_start() * factor * factor;
            (sys.domain_start().clone(), end, pts)
        }
    };
    let top = sys.components();
    let mut out = Vec::with_capacity(2 * samples);
    let mut drawn = 0;
    while drawn < samples {
        let p0 = if rng.gen_bool(0.5) {
            points[rng.gen_range(0..points.len() - 1)].clone()
        } else {
            random_between(&mut rng, &start, &end)
        };
        if p0 >= end {
            continue;
        }
        let block = sys.block_right_of(&p0)?;
        let k = rng.gen_range(block.lo()..=block.hi());
        if k >= top {
            continue;
        }
        let m = rng.gen_range(k + 1..=top);
        let later: Vec<&Rational> = points.iter().filter(|q| **q > p0).collect();
        let p = if !later.is_empty() && rng.gen_bool(0.5) {
            later[rng.gen_range(0..later.len())].clone()
        } else {
            random_between(&mut rng, &p0, &end)
        };
        let s = PenteSample { k, m, p0, p };
        out.push(pente_check(sys, &s)?);
        out.push(pente_corollary(sys, &s)?);
        drawn += 1;
    }
    Ok(out)
}
