use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::FamilyError;
use crate::exponents::{Bound, DeclaredLimit, Ratio};
use crate::rational::{
    format_rational, int, serde_frac, serde_frac_vec, ExtendedRational, Rational,
};
use crate::system::{Extension, PLSystem, ScheduleBuilder};

/// Parameters of the dilation-invariant family with prescribed `ω̂_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyAParams {
    pub n: usize,
    pub omega_hat: ExtendedRational,
    #[serde(with = "serde_frac")]
    pub a: Rational,
    #[serde(with = "serde_frac")]
    pub q0: Rational,
}

impl FamilyAParams {
    pub fn new(
        n: usize,
        omega_hat: ExtendedRational,
        a: Rational,
        q0: Rational,
    ) -> Result<Self, FamilyError> {
        let params = FamilyAParams {
            n,
            omega_hat,
            a,
            q0,
        };
        params.check()?;
        Ok(params)
    }

    pub fn check(&self) -> Result<(), FamilyError> {
        let n = self.n;
        if n < 2 {
            return Err(FamilyError::InvalidParams(format!(
                "n = {n} but the family needs n ≥ 2"
            )));
        }
        if !self.q0.is_positive() {
            return Err(FamilyError::InvalidParams("q0 must be positive".into()));
        }
        check_a(n, &self.a)?;
        if let ExtendedRational::Finite(w) = &self.omega_hat {
            if w < &int(n as i64) {
                return Err(FamilyError::InvalidParams(format!(
                    "omega_hat = {} is below n = {n}",
                    format_rational(w)
                )));
            }
        }
        Ok(())
    }

    /// `C = 1 + a(ω̂ − n)`, or `None` when `ω̂` is infinite.
    pub fn dilation_factor(&self) -> Option<Rational> {
        self.omega_hat
            .as_finite()
            .map(|w| Rational::one() + &self.a * (w - int(self.n as i64)))
    }
}

fn check_a(n: usize, a: &Rational) -> Result<(), FamilyError> {
    if n == 2 {
        if !a.is_one() {
            return Err(FamilyError::InvalidParams(format!(
                "for n = 2 the parameter a must be 1, got {}",
                format_rational(a)
            )));
        }
        return Ok(());
    }
    let lo = Rational::new(1.into(), ((n - 1) as i64).into());
    if a < &lo || a > &Rational::one() {
        return Err(FamilyError::InvalidParams(format!(
            "a = {} lies outside [{}, 1]",
            format_rational(a),
            format_rational(&lo)
        )));
    }
    Ok(())
}

/// Levels `(L, M, T)` of the anchor `(L, L, M, …, M, T)` at the start of a
/// period whose excess over `n` is `e` (that is `ω̂ = n + e`) and whose
/// start time is `q`.
fn anchor_levels(
    n: usize,
    a: &Rational,
    e: &Rational,
    q: &Rational,
) -> (Rational, Rational, Rational) {
    let omega_plus_one = int(n as i64 + 1) + e;
    let l = q / &omega_plus_one;
    let m = if n > 2 {
        let share = (Rational::one() - a) / int(n as i64 - 2);
        (Rational::one() + share * e) * &l
    } else {
        l.clone()
    };
    let t = (Rational::one() + a * e) * &l;
    (l, m, t)
}

fn anchor_vector(n: usize, (l, m, t): &(Rational, Rational, Rational)) -> Vec<Rational> {
    let mut v = vec![l.clone(), l.clone()];
    v.extend(std::iter::repeat_n(m.clone(), n - 2));
    v.push(t.clone());
    v
}

/// One period of the schedule, from anchor `(L, L, M…, T)` to
/// `(T, T, M', …, T')`.
fn push_period(
    b: &mut ScheduleBuilder,
    n: usize,
    cur: &(Rational, Rational, Rational),
    next_m: &Rational,
    next_t: &Rational,
) -> Result<(), FamilyError> {
    let (_, m, t) = cur;
    if n == 2 {
        // no middle components: climber to the top level, top rises, last climber
        b.rise(2, 2, t)?;
        b.rise(3, 3, next_t)?;
        b.rise(1, 1, t)?;
        return Ok(());
    }
    b.rise(2, 2, m)?;
    b.rise(n, n, t)?;
    b.rise(n + 1, n + 1, next_t)?;
    b.rise(2, n - 1, t)?;
    b.rise(3, n, next_m)?;
    b.rise(1, 1, t)?;
    Ok(())
}

/// Builds one fundamental period `[q_0, C q_0]` of the family.
///
/// With `ω̂ = n` every level coincides and the uniform system is returned
/// (with nominal dilation factor 2, since `C = 1` carries no period).
pub fn build_family_a(params: &FamilyAParams) -> Result<PLSystem, FamilyError> {
    params.check()?;
    let n = params.n;
    let Some(c) = params.dilation_factor() else {
        return Err(FamilyError::InvalidParams(
            "omega_hat = inf has no dilation period; use the infinite variant".into(),
        ));
    };
    let e = params.omega_hat.as_finite().expect("finite checked above") - int(n as i64);
    if e.is_zero() {
        return Ok(PLSystem::uniform_dilation(n, params.q0.clone(), int(2))?);
    }
    let cur = anchor_levels(n, &params.a, &e, &params.q0);
    let mut b = ScheduleBuilder::start(n, params.q0.clone(), anchor_vector(n, &cur))?;
    push_period(&mut b, n, &cur, &(&cur.1 * &c), &(&cur.2 * &c))?;
    debug_assert_eq!(b.current_q(), &(&params.q0 * &c));
    Ok(b.finish(Extension::Dilation { factor: c })?)
}

/// A finite stretch of the `ω̂ = ∞` variant together with the known limits of
/// its per-period extrema.
#[derive(Debug, Clone)]
pub struct InfiniteFamilyA {
    pub system: PLSystem,
    pub n: usize,
    pub a: Rational,
    pub limits: Vec<DeclaredLimit>,
}

/// Glues `periods` periods in which period `m` uses `ω̂ = m + n + 1`.
///
/// Continuity at the period ends forces `L_{m+1} = T_m`, which fixes the
/// ratio `q_{6(m+1)}/q_{6m} = (1 + a(m+1))(m+n+3)/(m+n+2)`.
pub fn build_family_a_infinite(
    n: usize,
    a: &Rational,
    q0: &Rational,
    periods: usize,
) -> Result<InfiniteFamilyA, FamilyError> {
    if n < 3 {
        return Err(FamilyError::InvalidParams(format!(
            "the infinite variant needs n ≥ 3, got {n}"
        )));
    }
    check_a(n, a)?;
    if !q0.is_positive() {
        return Err(FamilyError::InvalidParams("q0 must be positive".into()));
    }
    if periods < 2 {
        return Err(FamilyError::InvalidParams(format!(
            "need at least 2 periods, got {periods}"
        )));
    }
    let excess = |m: usize| int(m as i64 + 1);
    let mut q = q0.clone();
    let mut cur = anchor_levels(n, a, &excess(0), &q);
    let mut b = ScheduleBuilder::start(n, q.clone(), anchor_vector(n, &cur))?;
    for m in 0..periods {
        b.mark_period();
        let e = excess(m);
        let ratio = (Rational::one() + a * &e) * int((m + n + 3) as i64) / int((m + n + 2) as i64);
        let next_q = &q * ratio;
        let next = anchor_levels(n, a, &excess(m + 1), &next_q);
        debug_assert_eq!(next.0, cur.2);
        push_period(&mut b, n, &cur, &next.1, &next.2)?;
        if b.current_q() != &next_q {
            return Err(FamilyError::InvalidParams(format!(
                "period {m} closes at {} instead of {}",
                format_rational(b.current_q()),
                format_rational(&next_q)
            )));
        }
        q = next_q;
        cur = next;
    }
    b.mark_period();
    let system = b.finish(Extension::Finite)?;
    let limits = vec![
        DeclaredLimit {
            ratio: Ratio::Component(1),
            bound: Bound::Max,
            value: Rational::zero(),
        },
        DeclaredLimit {
            ratio: Ratio::Component(n + 1),
            bound: Bound::Min,
            value: a / (a + Rational::one()),
        },
    ];
    Ok(InfiniteFamilyA {
        system,
        n,
        a: a.clone(),
        limits,
    })
}

/// Sup-norm gaps between two copies of the family started at `ρ_1` and `ρ_2`,
/// sampled at the period ends `q_{6m} = C^m q_0`, `m = 1..=periods`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivergenceReport {
    #[serde(with = "serde_frac_vec")]
    pub times: Vec<Rational>,
    #[serde(with = "serde_frac_vec")]
    pub gaps: Vec<Rational>,
    /// `gap(m) = (q_{6m}/q_6) gap(1)` for every `m`.
    pub proportional: bool,
}

pub fn shifted_pair_divergence(
    params: &FamilyAParams,
    rho1: &Rational,
    rho2: &Rational,
    periods: usize,
) -> Result<DivergenceReport, FamilyError> {
    let base = build_family_a(params)?;
    let q5 = &base.division_points()[base.last_index() - 1];
    if rho1 < &params.q0 || rho2 > q5 || rho1 > rho2 {
        return Err(FamilyError::InvalidParams(format!(
            "need q0 ≤ rho1 ≤ rho2 ≤ {}",
            format_rational(q5)
        )));
    }
    let c = base
        .dilation_factor()
        .expect("family A is dilation invariant")
        .clone();
    let shifted = |rho: &Rational| {
        build_family_a(&FamilyAParams {
            q0: rho.clone(),
            ..params.clone()
        })
    };
    let (s1, s2) = (shifted(rho1)?, shifted(rho2)?);
    let mut times = Vec::with_capacity(periods);
    let mut gaps = Vec::with_capacity(periods);
    let mut t = params.q0.clone();
    for _ in 0..periods {
        t *= &c;
        let (p1, p2) = (s1.evaluate(&t)?, s2.evaluate(&t)?);
        let gap = p1
            .iter()
            .zip(&p2)
            .map(|(x, y)| (x - y).abs())
            .max()
            .unwrap_or_else(Rational::zero);
        times.push(t.clone());
        gaps.push(gap);
    }
    let proportional = match (times.first(), gaps.first()) {
        (Some(t1), Some(g1)) => times.iter().zip(&gaps).all(|(t, g)| g == &(t / t1 * g1)),
        _ => true,
    };
    Ok(DivergenceReport {
        times,
        gaps,
        proportional,
    })
}
