//! Exponent extraction from systems.
//!
//! On every segment each component and each partial sum has the form
//! `α + β q`, so its ratio to `q` is `β + α/q`: monotone on the segment. The
//! extrema of `P_k(q)/q` and `(P_1 + … + P_k)(q)/q` over any interval are
//! therefore attained at division points (or at the interval ends). For a
//! dilation system the ratios are invariant under `q ↦ Cq`, so the limsup and
//! liminf are the max and min over one fundamental interval.
//!
//! The dictionary used throughout: for `1 ≤ k ≤ n`,
//! `limsup S_k(q)/q = 1/(1 + ω̂_{n-k})` and `liminf S_k(q)/q = 1/(1 + ω_{n-k})`
//! where `S_k = P_1 + … + P_k`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{serde_frac_vec, ExtendedRational, Rational};
use crate::system::{Extension, PLSystem, SystemError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("operation needs a dilation-invariant system")]
    NotPeriodic,
    #[error("fundamental interval has zero length")]
    DegeneratePeriod,
    #[error("P_1 is bounded (P_1(q_0) = 0), exponents are not defined by this dictionary")]
    BoundedFirstComponent,
    #[error("index {k} out of range 1..={max}")]
    IndexOutOfRange { k: usize, max: usize },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error(transparent)]
    System(#[from] SystemError),
}

/// Which ratio function `q ↦ f(q)/q` is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum Ratio {
    /// `(P_1 + … + P_k)(q)/q`
    PartialSum(usize),
    /// `P_d(q)/q`
    Component(usize),
}

/// Exact extrema of one ratio function over a closed interval of division points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioExtrema {
    pub max: Rational,
    pub argmax: Rational,
    pub argmax_index: usize,
    pub min: Rational,
    pub argmin: Rational,
    pub argmin_index: usize,
    /// Number of distinct division times attaining the max.
    pub max_ties: usize,
}

fn ratio_value(values: &[Rational], q: &Rational, ratio: Ratio) -> Rational {
    let numerator = match ratio {
        Ratio::PartialSum(k) => values[..k].iter().fold(Rational::zero(), |acc, v| acc + v),
        Ratio::Component(d) => values[d - 1].clone(),
    };
    numerator / q
}

/// Scans `(index, q, values)` triples in increasing `q`. Ties go to the
/// smallest `q`.
fn scan<'a, I>(points: I, ratio: Ratio) -> Option<RatioExtrema>
where
    I: IntoIterator<Item = (usize, &'a Rational, &'a [Rational])>,
{
    let mut best: Option<RatioExtrema> = None;
    let mut last_max_q: Option<Rational> = None;
    for (index, q, values) in points {
        let r = ratio_value(values, q, ratio);
        match &mut best {
            None => {
                last_max_q = Some(q.clone());
                best = Some(RatioExtrema {
                    max: r.clone(),
                    argmax: q.clone(),
                    argmax_index: index,
                    min: r,
                    argmin: q.clone(),
                    argmin_index: index,
                    max_ties: 1,
                });
            }
            Some(e) => {
                if r > e.max {
                    e.max = r.clone();
                    e.argmax = q.clone();
                    e.argmax_index = index;
                    e.max_ties = 1;
                    last_max_q = Some(q.clone());
                } else if r == e.max && last_max_q.as_ref() != Some(q) {
                    e.max_ties += 1;
                    last_max_q = Some(q.clone());
                }
                if r < e.min {
                    e.min = r;
                    e.argmin = q.clone();
                    e.argmin_index = index;
                }
            }
        }
    }
    best
}

fn check_ratio(sys: &PLSystem, ratio: Ratio) -> Result<(), EngineError> {
    let max = sys.components();
    let k = match ratio {
        Ratio::PartialSum(k) | Ratio::Component(k) => k,
    };
    if k < 1 || k > max {
        return Err(EngineError::IndexOutOfRange { k, max });
    }
    Ok(())
}

fn require_periodic(sys: &PLSystem) -> Result<(), EngineError> {
    let Extension::Dilation { .. } = sys.extension() else {
        return Err(EngineError::NotPeriodic);
    };
    let points = sys.division_points();
    if points[0] == points[sys.last_index()] {
        return Err(EngineError::DegeneratePeriod);
    }
    if sys.anchor(0)[0].is_zero() {
        return Err(EngineError::BoundedFirstComponent);
    }
    Ok(())
}

/// Extrema of an arbitrary ratio over the fundamental interval of a dilation system.
pub fn extrema_periodic(sys: &PLSystem, ratio: Ratio) -> Result<RatioExtrema, EngineError> {
    require_periodic(sys)?;
    check_ratio(sys, ratio)?;
    // q_M is the image of q_0 and carries no new value
    let m = sys.last_index();
    let points = sys.division_points()[..m]
        .iter()
        .zip(sys.anchors())
        .enumerate()
        .map(|(i, (q, a))| (i, q, a.as_slice()));
    Ok(scan(points, ratio).expect("a system has at least two division points"))
}

/// Extrema of `(P_1 + … + P_k)(q)/q` over one period; by dilation invariance
/// these are the limsup and liminf as `q → ∞`.
pub fn ratio_extrema_periodic(sys: &PLSystem, k: usize) -> Result<RatioExtrema, EngineError> {
    extrema_periodic(sys, Ratio::PartialSum(k))
}

/// Exponent profile of a system: `ω̂_d`, `ω_d` for `d = 0..n-1` and
/// `φ̄_d`, `φ̲_d` for `d = 1..n+1` (stored at index `d-1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentProfile {
    pub n: usize,
    pub omega_hat: Vec<ExtendedRational>,
    pub omega: Vec<ExtendedRational>,
    #[serde(with = "serde_frac_vec")]
    pub phi_bar: Vec<Rational>,
    #[serde(with = "serde_frac_vec")]
    pub phi_under: Vec<Rational>,
}

impl ExponentProfile {
    /// Builds a profile from partial-sum extrema (`k = 1..n`) and component
    /// extrema (`d = 1..n+1`), each given as `(max, min)`.
    pub fn from_extrema(
        n: usize,
        partial: &[(Rational, Rational)],
        single: &[(Rational, Rational)],
    ) -> Self {
        debug_assert_eq!(partial.len(), n);
        debug_assert_eq!(single.len(), n + 1);
        let mut omega_hat = vec![ExtendedRational::Infinity; n];
        let mut omega = vec![ExtendedRational::Infinity; n];
        for (idx, (max, min)) in partial.iter().enumerate() {
            let k = idx + 1;
            omega_hat[n - k] = ExtendedRational::exponent_from_ratio(max);
            omega[n - k] = ExtendedRational::exponent_from_ratio(min);
        }
        ExponentProfile {
            n,
            omega_hat,
            omega,
            phi_bar: single.iter().map(|(max, _)| max.clone()).collect(),
            phi_under: single.iter().map(|(_, min)| min.clone()).collect(),
        }
    }

    pub fn omega_hat_bottom(&self) -> &ExtendedRational {
        &self.omega_hat[0]
    }

    pub fn omega_hat_top(&self) -> &ExtendedRational {
        &self.omega_hat[self.n - 1]
    }

    /// `φ̄_d` for `d` in `1..=n+1`.
    pub fn phi_bar(&self, d: usize) -> &Rational {
        &self.phi_bar[d - 1]
    }

    pub fn phi_under(&self, d: usize) -> &Rational {
        &self.phi_under[d - 1]
    }
}

/// Full periodic analysis: profile plus the extrema it was read from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicAnalysis {
    pub profile: ExponentProfile,
    /// Partial sums `k = 1..n` at index `k-1`.
    pub partial: Vec<RatioExtrema>,
    /// Components `d = 1..n+1` at index `d-1`.
    pub single: Vec<RatioExtrema>,
}

impl PeriodicAnalysis {
    /// Components whose max ratio is attained at more than one division time
    /// in a period.
    pub fn non_unique_component_maxima(&self) -> Vec<usize> {
        self.single
            .iter()
            .enumerate()
            .filter(|(_, e)| e.max_ties > 1)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

pub fn analyze_periodic(sys: &PLSystem) -> Result<PeriodicAnalysis, EngineError> {
    require_periodic(sys)?;
    let n = sys.n();
    let partial = (1..=n)
        .map(|k| extrema_periodic(sys, Ratio::PartialSum(k)))
        .collect::<Result<Vec<_>, _>>()?;
    let single = (1..=n + 1)
        .map(|d| extrema_periodic(sys, Ratio::Component(d)))
        .collect::<Result<Vec<_>, _>>()?;
    let pairs = |v: &[RatioExtrema]| {
        v.iter()
            .map(|e| (e.max.clone(), e.min.clone()))
            .collect::<Vec<_>>()
    };
    let profile = ExponentProfile::from_extrema(n, &pairs(&partial), &pairs(&single));
    Ok(PeriodicAnalysis {
        profile,
        partial,
        single,
    })
}

/// Exact exponent profile of a dilation system.
pub fn profile_periodic(sys: &PLSystem) -> Result<ExponentProfile, EngineError> {
    analyze_periodic(sys).map(|a| a.profile)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Constant,
    Increasing,
    Decreasing,
    NonMonotone,
}

pub fn trend(values: &[Rational]) -> Trend {
    let up = values.windows(2).all(|w| w[1] >= w[0]);
    let down = values.windows(2).all(|w| w[1] <= w[0]);
    match (up, down) {
        (true, true) => Trend::Constant,
        (true, false) => Trend::Increasing,
        (false, true) => Trend::Decreasing,
        (false, false) => Trend::NonMonotone,
    }
}

/// Extrema of every ratio over one construction period `[start, end)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodExtrema {
    pub period: usize,
    pub start: Rational,
    pub end: Rational,
    /// `k = 1..n`
    pub partial: Vec<RatioExtrema>,
    /// `d = 1..n+1`
    pub single: Vec<RatioExtrema>,
}

impl PeriodExtrema {
    pub fn extrema(&self, ratio: Ratio) -> &RatioExtrema {
        match ratio {
            Ratio::PartialSum(k) => &self.partial[k - 1],
            Ratio::Component(d) => &self.single[d - 1],
        }
    }

    pub fn profile(&self, n: usize) -> ExponentProfile {
        let pairs = |v: &[RatioExtrema]| {
            v.iter()
                .map(|e| (e.max.clone(), e.min.clone()))
                .collect::<Vec<_>>()
        };
        ExponentProfile::from_extrema(n, &pairs(&self.partial), &pairs(&self.single))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Max,
    Min,
}

/// A limit of a per-period extremum sequence known in closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclaredLimit {
    pub ratio: Ratio,
    pub bound: Bound,
    pub value: Rational,
}

/// Per-period extrema of a system observed on a finite horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledProfile {
    pub n: usize,
    pub periods: Vec<PeriodExtrema>,
}

impl SampledProfile {
    /// Profile read from the last complete period.
    pub fn last(&self) -> ExponentProfile {
        self.periods
            .last()
            .expect("at least two periods")
            .profile(self.n)
    }

    /// The per-period sequence of one extremum.
    pub fn sequence(&self, ratio: Ratio, bound: Bound) -> Vec<Rational> {
        self.periods
            .iter()
            .map(|p| {
                let e = p.extrema(ratio);
                match bound {
                    Bound::Max => e.max.clone(),
                    Bound::Min => e.min.clone(),
                }
            })
            .collect()
    }

    pub fn trend(&self, ratio: Ratio, bound: Bound) -> Trend {
        trend(&self.sequence(ratio, bound))
    }

    /// Last-period profile with declared limits substituted. A limit on
    /// `P_{n+1}/q` is translated through `S_n = q - P_{n+1}`. Since
    /// liminf ≤ limsup, a substituted limit also caps the opposite extremum.
    pub fn with_limits(&self, limits: &[DeclaredLimit]) -> ExponentProfile {
        let n = self.n;
        let last = self.periods.last().expect("at least two periods");
        let mut partial: Vec<Limited> = last.partial.iter().map(Limited::observed).collect();
        let mut single: Vec<Limited> = last.single.iter().map(Limited::observed).collect();
        for limit in limits {
            let value = &limit.value;
            match limit.ratio {
                Ratio::PartialSum(k) if (1..=n).contains(&k) => {
                    partial[k - 1].set(limit.bound, value.clone());
                    if k == 1 {
                        single[0].set(limit.bound, value.clone());
                    }
                }
                Ratio::Component(d) if (1..=n + 1).contains(&d) => {
                    single[d - 1].set(limit.bound, value.clone());
                    if d == 1 {
                        partial[0].set(limit.bound, value.clone());
                    }
                    if d == n + 1 {
                        let flipped = match limit.bound {
                            Bound::Max => Bound::Min,
                            Bound::Min => Bound::Max,
                        };
                        partial[n - 1].set(flipped, Rational::one() - value);
                    }
                }
                _ => {}
            }
        }
        let finish = |v: Vec<Limited>| v.into_iter().map(Limited::resolve).collect::<Vec<_>>();
        ExponentProfile::from_extrema(n, &finish(partial), &finish(single))
    }
}

/// A `(max, min)` pair where either side may be a declared limit.
struct Limited {
    max: Rational,
    min: Rational,
    max_declared: bool,
    min_declared: bool,
}

impl Limited {
    fn observed(e: &RatioExtrema) -> Self {
        Limited {
            max: e.max.clone(),
            min: e.min.clone(),
            max_declared: false,
            min_declared: false,
        }
    }

    fn set(&mut self, bound: Bound, value: Rational) {
        match bound {
            Bound::Max => (self.max, self.max_declared) = (value, true),
            Bound::Min => (self.min, self.min_declared) = (value, true),
        }
    }

    fn resolve(self) -> (Rational, Rational) {
        let Limited {
            mut max,
            mut min,
            max_declared,
            min_declared,
        } = self;
        if min > max {
            if max_declared && !min_declared {
                min = max.clone();
            } else if min_declared && !max_declared {
                max = min.clone();
            }
        }
        (max, min)
    }
}

/// Per-period extrema over the complete periods ending at or before `q_max`.
///
/// Finite systems use their period marks; dilation systems are unrolled, each
/// fundamental interval being one period.
pub fn profile_sampled(sys: &PLSystem, q_max: &Rational) -> Result<SampledProfile, EngineError> {
    let n = sys.n();
    let (points, bounds): (Vec<(Rational, Vec<Rational>)>, Vec<usize>) = match sys.extension() {
        Extension::Finite => {
            let marks = sys.period_marks();
            if marks.len() < 3 {
                return Err(EngineError::InsufficientData(
                    "finite system needs period marks spanning at least two periods".into(),
                ));
            }
            let pts = sys
                .division_points()
                .iter()
                .cloned()
                .zip(sys.anchors().iter().cloned())
                .collect();
            (pts, marks.to_vec())
        }
        Extension::Dilation { factor } => {
            require_periodic(sys)?;
            let m = sys.last_index();
            // enough periods to pass q_max
            let mut periods = 0usize;
            let mut end = sys.division_points()[m].clone();
            while &end <= q_max {
                periods += 1;
                end *= factor;
            }
            let pts = sys
                .unrolled_points(periods)
                .into_iter()
                .map(|p| (p.q, p.values))
                .collect();
            (pts, (0..=periods).map(|p| p * m).collect())
        }
    };

    let mut periods = Vec::new();
    for (period, w) in bounds.windows(2).enumerate() {
        let (lo, hi) = (w[0], w[1]);
        if &points[hi].0 > q_max {
            break;
        }
        let slice = || (lo..hi).map(|i| (i, &points[i].0, points[i].1.as_slice()));
        let partial = (1..=n)
            .map(|k| scan(slice(), Ratio::PartialSum(k)).expect("non-empty period"))
            .collect();
        let single = (1..=n + 1)
            .map(|d| scan(slice(), Ratio::Component(d)).expect("non-empty period"))
            .collect();
        periods.push(PeriodExtrema {
            period,
            start: points[lo].0.clone(),
            end: points[hi].0.clone(),
            partial,
            single,
        });
    }
    if periods.len() < 2 {
        return Err(EngineError::InsufficientData(format!(
            "only {} complete period(s) below q_max",
            periods.len()
        )));
    }
    Ok(SampledProfile { n, periods })
}

/// Projection of a profile consumed by the transference checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChecksInput {
    pub n: usize,
    pub omega_hat_0: ExtendedRational,
    pub omega_hat_top: ExtendedRational,
    pub omega_hat: Vec<ExtendedRational>,
    pub omega: Vec<ExtendedRational>,
}

pub fn profile_to_checks_input(profile: &ExponentProfile) -> ChecksInput {
    ChecksInput {
        n: profile.n,
        omega_hat_0: profile.omega_hat_bottom().clone(),
        omega_hat_top: profile.omega_hat_top().clone(),
        omega_hat: profile.omega_hat.clone(),
        omega: profile.omega.clone(),
    }
}
