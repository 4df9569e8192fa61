//! Brute-force successive minima of the bodies
//! `C_u(Q) = { x : ‖x‖_2 ≤ 1, |x·u| ≤ 1/Q }` with respect to `Z^{n+1}`.
//!
//! The `d`-th minimum is the `d`-th smallest stretch
//! `s(x) = max(‖x‖_2, Q |x·u|)` among linearly independent lattice points, so
//! sorting enumerated points by stretch and selecting greedily gives all
//! minima at once. This is the only floating-point module.

pub mod cf;

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exponents::Trend;
use crate::rational::{from_f64, to_f64};
use crate::system::PLSystem;
pub use cf::{convergent_vectors, ContinuedFraction};

/// Tolerance for stretch comparisons and the unit-norm check.
pub const TIE_TOLERANCE: f64 = 1e-12;
/// Largest supported `n + 1`.
pub const MAX_DIMENSION: usize = 4;
/// Upper limit on `e^q · radius`; beyond it `|x·u|` is lost to rounding.
pub const PRECISION_CAP: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid direction: {0}")]
    InvalidDirection(String),
    #[error("only {found} independent lattice points have stretch at most {limit} (radius {radius}); need {needed}")]
    InsufficientRadius {
        radius: i64,
        limit: f64,
        found: usize,
        needed: usize,
    },
    #[error("e^q · radius = {0:e} exceeds the double-precision cap")]
    PrecisionCap(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: trajectory has {trajectory} components, system has {system}")]
    DimensionMismatch { trajectory: usize, system: usize },
    #[error("system does not cover q = {0}")]
    OutsideSystem(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionVector {
    u: Vec<f64>,
    pub note: String,
}

impl DirectionVector {
    pub fn new(raw: Vec<f64>, note: impl Into<String>) -> Result<Self, OracleError> {
        if raw.len() < 2 || raw.len() > MAX_DIMENSION {
            return Err(OracleError::InvalidDirection(format!(
                "need between 2 and {MAX_DIMENSION} coordinates, got {}",
                raw.len()
            )));
        }
        if raw.iter().any(|v| !v.is_finite()) {
            return Err(OracleError::InvalidDirection(
                "coordinates must be finite".into(),
            ));
        }
        if raw[0] == 0.0 {
            return Err(OracleError::InvalidDirection(
                "first coordinate must be nonzero".into(),
            ));
        }
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        let u: Vec<f64> = raw.iter().map(|v| v / norm).collect();
        debug_assert!((u.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0).abs() < TIE_TOLERANCE);
        Ok(DirectionVector {
            u,
            note: note.into(),
        })
    }

    /// `(1, θ_1, …, θ_n)` normalized.
    pub fn from_thetas(thetas: &[f64]) -> Result<Self, OracleError> {
        let mut raw = vec![1.0];
        raw.extend_from_slice(thetas);
        let note = format!(
            "(1, {})/norm",
            thetas
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        );
        Self::new(raw, note)
    }

    pub fn from_continued_fraction(cf: &ContinuedFraction) -> Result<Self, OracleError> {
        let mut d = Self::from_thetas(&[cf.value()])?;
        d.note = format!("(1, theta)/norm with theta = cf {cf:?}");
        Ok(d)
    }

    /// Either `cf:[a0;a1,...]` or a comma-separated list of decimals (the raw
    /// vector, normalized here).
    pub fn parse(text: &str) -> Result<Self, OracleError> {
        let text = text.trim();
        if let Some(spec) = text.strip_prefix("cf:") {
            return Self::from_continued_fraction(&ContinuedFraction::parse(spec)?);
        }
        let raw = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| OracleError::Parse(format!("not a decimal: {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(raw, format!("{text}/norm"))
    }

    pub fn components(&self) -> &[f64] {
        &self.u
    }

    pub fn dimension(&self) -> usize {
        self.u.len()
    }

    pub fn dot(&self, x: &[i64]) -> f64 {
        x.iter().zip(&self.u).map(|(a, b)| *a as f64 * b).sum()
    }

    pub fn stretch(&self, x: &[i64], q: f64) -> f64 {
        let norm = x.iter().map(|v| (*v as f64).powi(2)).sum::<f64>().sqrt();
        norm.max(q.exp() * self.dot(x).abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimaSample {
    pub q: f64,
    /// `L_d(q) = log λ_d`
    pub l: Vec<f64>,
    pub witnesses: Vec<Vec<i64>>,
    pub radius: i64,
    /// `λ_{n+1} ≤ radius`, so every point of stretch up to `λ_{n+1}` was seen
    /// and the minima are exact.
    pub sufficient: bool,
}

#[derive(Debug, Clone)]
struct Candidate {
    s: f64,
    x: Vec<i64>,
}

fn candidate_order(a: &Candidate, b: &Candidate) -> Ordering {
    a.s.total_cmp(&b.s).then_with(|| a.x.cmp(&b.x))
}

/// First nonzero coordinate positive: one representative of `±x`.
fn is_canonical(x: &[i64]) -> bool {
    x.iter().find(|v| **v != 0).is_some_and(|v| *v > 0)
}

/// Nonzero canonical `x` with `‖x‖_∞ ≤ radius` and `s(x) ≤ limit`. The
/// coordinate with the largest `|u_j|` is solved for, the others scanned.
fn enumerate(u: &DirectionVector, q: f64, radius: i64, limit: f64) -> Vec<Candidate> {
    let dim = u.dimension();
    let comps = u.components();
    let j = (0..dim)
        .max_by(|&a, &b| comps[a].abs().total_cmp(&comps[b].abs()))
        .expect("dimension ≥ 2");
    let big_q = q.exp();
    let slab = limit / big_q;
    let outer: Vec<usize> = (0..dim).filter(|&i| i != j).collect();
    let span = (2 * radius + 1) as usize;
    let first_range: Vec<i64> = (-radius..=radius).collect();

    let mut found: Vec<Candidate> = first_range
        .par_iter()
        .flat_map_iter(|&first| {
            let rest = outer.len() - 1;
            let total = span.pow(rest as u32);
            let mut local = Vec::new();
            let mut x = vec![0i64; dim];
            for code in 0..total {
                x[outer[0]] = first;
                let mut c = code;
                for &i in &outer[1..] {
                    x[i] = (c % span) as i64 - radius;
                    c /= span;
                }
                x[j] = 0;
                let t: f64 = outer.iter().map(|&i| x[i] as f64 * comps[i]).sum();
                let (a, b) = ((-slab - t) / comps[j], (slab - t) / comps[j]);
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                let lo = ((lo - 1e-9).ceil() as i64).max(-radius);
                let hi = ((hi + 1e-9).floor() as i64).min(radius);
                for xj in lo..=hi {
                    x[j] = xj;
                    if !is_canonical(&x) {
                        continue;
                    }
                    let s = u.stretch(&x, q);
                    if s <= limit * (1.0 + TIE_TOLERANCE) {
                        local.push(Candidate { s, x: x.clone() });
                    }
                }
            }
            local
        })
        .collect();
    found.sort_by(candidate_order);
    found
}

/// Incremental row echelon form over the integers.
struct Independence {
    rows: Vec<Vec<i128>>,
}

impl Independence {
    fn new() -> Self {
        Independence { rows: Vec::new() }
    }

    /// Adds `x` if it is independent of the rows so far.
    fn try_add(&mut self, x: &[i64]) -> bool {
        let mut v: Vec<i128> = x.iter().map(|&a| a as i128).collect();
        for row in &self.rows {
            let p = row.iter().position(|&a| a != 0).expect("rows are nonzero");
            if v[p] != 0 {
                let (a, b) = (row[p], v[p]);
                for (vi, ri) in v.iter_mut().zip(row) {
                    *vi = *vi * a - ri * b;
                }
                normalize(&mut v);
            }
        }
        if v.iter().all(|&a| a == 0) {
            return false;
        }
        // keep rows sorted by pivot position so elimination stays triangular
        let p = v.iter().position(|&a| a != 0).expect("nonzero");
        let at = self
            .rows
            .iter()
            .position(|r| r.iter().position(|&a| a != 0).expect("nonzero") > p)
            .unwrap_or(self.rows.len());
        self.rows.insert(at, v);
        true
    }
}

fn normalize(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |g, &a| num_integer::gcd(g, a));
    if g > 1 {
        for a in v.iter_mut() {
            *a /= g;
        }
    }
}

/// Determinant of a square integer matrix (Bareiss elimination).
pub fn integer_determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Successive minima of `C_u(e^q)` from lattice points with `‖x‖_∞ ≤ radius`
/// and stretch at most `radius·√(n+1)`.
pub fn successive_minima(
    u: &DirectionVector,
    q: f64,
    radius: i64,
) -> Result<MinimaSample, OracleError> {
    if radius < 1 {
        return Err(OracleError::InvalidInput(format!(
            "radius must be at least 1, got {radius}"
        )));
    }
    if q.is_nan() || q < 0.0 {
        return Err(OracleError::InvalidInput(format!(
            "q must be nonnegative, got {q}"
        )));
    }
    let scale = q.exp() * radius as f64;
    if scale.is_nan() || scale > PRECISION_CAP {
        return Err(OracleError::PrecisionCap(scale));
    }
    let dim = u.dimension();
    let limit = radius as f64 * (dim as f64).sqrt();
    let candidates = enumerate(u, q, radius, limit);
    let mut basis = Independence::new();
    let mut chosen: Vec<Candidate> = Vec::with_capacity(dim);
    for c in candidates {
        if basis.try_add(&c.x) {
            chosen.push(c);
            if chosen.len() == dim {
                break;
            }
        }
    }
    if chosen.len() < dim {
        return Err(OracleError::InsufficientRadius {
            radius,
            limit,
            found: chosen.len(),
            needed: dim,
        });
    }
    let top = chosen[dim - 1].s;
    Ok(MinimaSample {
        q,
        l: chosen.iter().map(|c| c.s.ln()).collect(),
        witnesses: chosen.into_iter().map(|c| c.x).collect(),
        radius,
        sufficient: top <= radius as f64 * (1.0 + TIE_TOLERANCE),
    })
}

/// Radius policy for trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadiusSchedule {
    Fixed(i64),
    /// Double from `start` until the sample is certified, up to `max`.
    Doubling {
        start: i64,
        max: i64,
    },
}

fn sample_with(
    u: &DirectionVector,
    q: f64,
    schedule: RadiusSchedule,
) -> Result<MinimaSample, OracleError> {
    match schedule {
        RadiusSchedule::Fixed(r) => successive_minima(u, q, r),
        RadiusSchedule::Doubling { start, max } => {
            let mut r = start.max(1);
            loop {
                let attempt = successive_minima(u, q, r);
                let done = matches!(&attempt, Ok(s) if s.sufficient);
                if done || r >= max {
                    return attempt;
                }
                r = (2 * r).min(max);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<MinimaSample>,
    /// Over samples with `q > 0`: extrema of `L_d(q)/q` (index `d-1`).
    pub ratio_max: Vec<f64>,
    pub ratio_min: Vec<f64>,
    /// Extrema of `(L_1 + … + L_k)(q)/q` (index `k-1`).
    pub partial_max: Vec<f64>,
    pub partial_min: Vec<f64>,
}

impl Trajectory {
    pub fn all_sufficient(&self) -> bool {
        self.samples.iter().all(|s| s.sufficient)
    }

    /// `max |Σ_d L_d(q) − q|` over the samples.
    pub fn sum_deviation(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| (s.l.iter().sum::<f64>() - s.q).abs())
            .fold(0.0, f64::max)
    }
}

pub fn trajectory(
    u: &DirectionVector,
    grid: &[f64],
    schedule: RadiusSchedule,
) -> Result<Trajectory, OracleError> {
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(OracleError::InvalidInput(
            "q grid must be strictly increasing".into(),
        ));
    }
    let samples = grid
        .iter()
        .map(|&q| sample_with(u, q, schedule))
        .collect::<Result<Vec<_>, _>>()?;
    let dim = u.dimension();
    let mut t = Trajectory {
        samples,
        ratio_max: vec![f64::NEG_INFINITY; dim],
        ratio_min: vec![f64::INFINITY; dim],
        partial_max: vec![f64::NEG_INFINITY; dim],
        partial_min: vec![f64::INFINITY; dim],
    };
    for s in t.samples.iter().filter(|s| s.q > 0.0) {
        let mut partial = 0.0;
        for d in 0..dim {
            let r = s.l[d] / s.q;
            partial += s.l[d];
            let pr = partial / s.q;
            t.ratio_max[d] = t.ratio_max[d].max(r);
            t.ratio_min[d] = t.ratio_min[d].min(r);
            t.partial_max[d] = t.partial_max[d].max(pr);
            t.partial_min[d] = t.partial_min[d].min(pr);
        }
    }
    Ok(t)
}

/// Evenly spaced grid `0, step, 2·step, …` up to `q_max`.
pub fn uniform_grid(q_max: f64, step: f64) -> Vec<f64> {
    let count = (q_max / step + 1e-9).floor() as usize;
    (0..=count).map(|i| i as f64 * step).collect()
}

/// Frozen regression bounds on `|Σ_d L_d(q) − q|` for `n = 1, 2, 3`.
///
/// Measured on the golden `[1;1,...]` and silver `[1;2,...]` directions
/// (n = 1, up to q = 14), on `(1, 2^{1/3}, 2^{2/3})` and `(1, 1/ρ, 1/ρ²)` with
/// ρ the plastic number (n = 2, up to q = 10) and on
/// `(1, 2^{1/4}, 2^{1/2}, 2^{3/4})` (n = 3, up to q = 8), all on grids of
/// step 1/4. Observed maxima were 0.61, 0.81 and 0.81.
pub const SUM_DEVIATION_BOUND: [f64; 3] = [1.0, 1.25, 1.25];

pub fn sum_deviation_bound(n: usize) -> Option<f64> {
    SUM_DEVIATION_BOUND.get(n.checked_sub(1)?).copied()
}

/// Regression slope above which a deviation sequence is called growing.
pub const GROWTH_SLOPE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationReport {
    pub deviations: Vec<f64>,
    pub sup: f64,
    /// Least-squares slope of deviation against `q`.
    pub slope: f64,
    /// `slope ≤ GROWTH_SLOPE`: qualitative evidence only.
    pub bounded: bool,
    pub trend: Trend,
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return 0.0;
    }
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Sup-norm deviation of the samples from any reference map `q ↦ P(q)`.
pub fn compare_to_reference<F>(
    samples: &[MinimaSample],
    reference: F,
) -> Result<DeviationReport, OracleError>
where
    F: Fn(f64) -> Result<Vec<f64>, OracleError>,
{
    let mut deviations = Vec::with_capacity(samples.len());
    for s in samples {
        let p = reference(s.q)?;
        if p.len() != s.l.len() {
            return Err(OracleError::DimensionMismatch {
                trajectory: s.l.len(),
                system: p.len(),
            });
        }
        deviations.push(
            s.l.iter()
                .zip(&p)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        );
    }
    let qs: Vec<f64> = samples.iter().map(|s| s.q).collect();
    let slope = least_squares_slope(&qs, &deviations);
    let sup = deviations.iter().copied().fold(0.0, f64::max);
    let trend = {
        let up = deviations.windows(2).all(|w| w[1] >= w[0]);
        let down = deviations.windows(2).all(|w| w[1] <= w[0]);
        match (up, down) {
            (true, true) => Trend::Constant,
            (true, false) => Trend::Increasing,
            (false, true) => Trend::Decreasing,
            (false, false) => Trend::NonMonotone,
        }
    };
    Ok(DeviationReport {
        deviations,
        sup,
        slope,
        bounded: slope <= GROWTH_SLOPE,
        trend,
    })
}

pub fn compare_to_system(
    samples: &[MinimaSample],
    system: &PLSystem,
) -> Result<DeviationReport, OracleError> {
    if let Some(s) = samples.first() {
        if s.l.len() != system.components() {
            return Err(OracleError::DimensionMismatch {
                trajectory: s.l.len(),
                system: system.components(),
            });
        }
    }
    compare_to_reference(samples, |q| {
        let exact = from_f64(q).ok_or(OracleError::OutsideSystem(q))?;
        let values = system
            .evaluate(&exact)
            .map_err(|_| OracleError::OutsideSystem(q))?;
        Ok(values.iter().map(to_f64).collect())
    })
}

/// The 2-system traced by a sequence of lattice points with increasing norms
/// `e^{h_0} < e^{h_1} < …`: both components meet at `2h_k`, the upper one
/// climbs to `h_{k+1}` (a switch at `h_k + h_{k+1}`), then the lower one follows.
pub fn two_system_from_levels(levels: &[f64]) -> Result<PLSystem, OracleError> {
    use crate::rational::Rational;
    use crate::system::{Extension, ScheduleBuilder};
    let exact: Vec<Rational> = levels
        .iter()
        .map(|&h| {
            from_f64(h).ok_or_else(|| OracleError::InvalidInput(format!("level {h} is not finite")))
        })
        .collect::<Result<_, _>>()?;
    if exact.len() < 2 || exact.windows(2).any(|w| w[1] <= w[0]) {
        return Err(OracleError::InvalidInput(
            "levels must be strictly increasing, at least two".into(),
        ));
    }
    let h0 = &exact[0];
    let mut b = ScheduleBuilder::start(1, h0 + h0, vec![h0.clone(), h0.clone()])
        .map_err(|e| OracleError::InvalidInput(e.to_string()))?;
    let fail = |e: crate::system::SystemError| OracleError::InvalidInput(e.to_string());
    for next in &exact[1..] {
        b.rise(2, 2, next).map_err(fail)?;
        b.rise(1, 1, next).map_err(fail)?;
    }
    b.finish(Extension::Finite).map_err(fail)
}

/// Levels `log ‖x_k‖` of the convergent vectors of a continued fraction
/// whose norms stay below `e^{h_max}`, plus one beyond so the system covers
/// `[0, 2 h_max]`.
pub fn convergent_levels(cf: &ContinuedFraction, h_max: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for x in convergent_vectors(cf, 200) {
        let h = ((x[0] as f64).powi(2) + (x[1] as f64).powi(2)).sqrt().ln();
        if out.last().is_none_or(|&last| h > last) {
            out.push(h);
        }
        if h > h_max {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_direction_has_constant_first_minimum() {
        let u = DirectionVector::new(vec![1.0, 0.0], "e1").unwrap();
        for q in [0.0, 0.5, 1.5] {
            let s = successive_minima(&u, q, 4).unwrap();
            assert_eq!(s.witnesses[0], vec![0, 1]);
            assert!(s.l[0].abs() < 1e-15);
        }
    }

    #[test]
    fn direction_parsing() {
        let d = DirectionVector::parse("3, 4").unwrap();
        assert!((d.components()[0] - 0.6).abs() < 1e-15);
        assert!(DirectionVector::parse("0, 1").is_err());
        assert!(DirectionVector::parse("1").is_err());
        assert!(DirectionVector::parse("1, 2, 3, 4, 5").is_err());
        assert!(DirectionVector::parse("1, x").is_err());
        let g = DirectionVector::parse("cf:[1;1,...]").unwrap();
        assert_eq!(g.dimension(), 2);
    }

    #[test]
    fn determinant_and_independence() {
        assert_eq!(integer_determinant(&[vec![2, 1], vec![1, 1]]), 1);
        assert_eq!(
            integer_determinant(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 3]]),
            -3
        );
        assert_eq!(integer_determinant(&[vec![1, 2], vec![2, 4]]), 0);
        let mut ind = Independence::new();
        assert!(ind.try_add(&[1, 2, 3]));
        assert!(!ind.try_add(&[2, 4, 6]));
        assert!(ind.try_add(&[0, 1, 0]));
        assert!(!ind.try_add(&[1, 3, 3]));
        assert!(ind.try_add(&[0, 0, 1]));
    }

    #[test]
    fn small_radius_is_reported() {
        let u = DirectionVector::parse("1, 0.7548776662, 0.5698402910, 0.4301597090").unwrap();
        assert!(matches!(
            successive_minima(&u, 12.0, 2),
            Err(OracleError::InsufficientRadius { .. })
        ));
        assert!(matches!(
            successive_minima(&u, 40.0, 2),
            Err(OracleError::PrecisionCap(_))
        ));
        assert!(successive_minima(&u, 1.0, 0).is_err());
    }

    #[test]
    fn level_system_is_valid() {
        let sys = two_system_from_levels(&[0.0, 0.5, 1.25]).unwrap();
        assert!(sys.validate().valid);
        assert_eq!(sys.division_points().len(), 5);
        assert!(two_system_from_levels(&[0.0, 0.0]).is_err());
    }
}
