//! Generalized (n+1)-systems as exact piecewise-linear data.
//!
//! A [`PLSystem`] stores the division points `q_0 ≤ … ≤ q_M`, the sorted value
//! vector at each of them, and the rising block of every segment. Components
//! are kept sorted at all times: when a rising component reaches the level of
//! the next one up, the crossing is materialized as an ordinary division point
//! and the following segment names the new index of the climber.
//!
//! Zero-length segments (`q_i = q_{i+1}`) are allowed. They appear when two
//! division points of a parametric family coincide at the boundary of its
//! parameter range and keep the families index-for-index with their tables.

mod json;
mod schedule;
mod validate;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::{format_rational, Rational};

pub use json::SystemDocument;
pub use schedule::ScheduleBuilder;
pub use validate::{Axiom, ValidationReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("malformed system: {0}")]
    Structure(String),
    #[error("q = {q} lies outside the domain of the system ({domain})")]
    Domain { q: String, domain: String },
    #[error("division point index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("component index {k} out of range 1..={max}")]
    ComponentOutOfRange { k: usize, max: usize },
    #[error("schedule step rejected: {0}")]
    Schedule(String),
}

/// Consecutive components `lo..=hi` (1-based) rising together with slope `1/(hi-lo+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RisingBlock {
    lo: usize,
    hi: usize,
}

impl RisingBlock {
    pub fn new(lo: usize, hi: usize, n: usize) -> Result<Self, SystemError> {
        if lo < 1 || lo > hi || hi > n + 1 {
            return Err(SystemError::Structure(format!(
                "rising block [{lo}, {hi}] is not within 1..={}",
                n + 1
            )));
        }
        Ok(RisingBlock { lo, hi })
    }

    pub fn single(k: usize, n: usize) -> Result<Self, SystemError> {
        Self::new(k, k, n)
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn size(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn slope(&self) -> Rational {
        Rational::new(1.into(), (self.size() as i64).into())
    }

    pub fn covers(&self, k: usize) -> bool {
        self.lo <= k && k <= self.hi
    }
}

/// How the system continues past its last division point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extension {
    /// Defined on `[q_0, q_M]` only.
    Finite,
    /// Self-similar continuation `P(q) = C^m P(q C^{-m})` with `[q_0, q_M]` as
    /// the fundamental interval and `q_M = C q_0`.
    Dilation { factor: Rational },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DivisionPointKind {
    Ordinary,
    Switch,
    Boundary,
}

/// Raw fields of a [`PLSystem`], for callers that need to rebuild a modified copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemParts {
    pub n: usize,
    pub division_points: Vec<Rational>,
    pub anchors: Vec<Vec<Rational>>,
    pub blocks: Vec<RisingBlock>,
    pub extension: Extension,
    /// Indices of division points that open a construction period (plus the
    /// closing index). Empty when the system carries no period structure.
    pub period_marks: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "SystemDocument", into = "SystemDocument")]
pub struct PLSystem {
    n: usize,
    division_points: Vec<Rational>,
    anchors: Vec<Vec<Rational>>,
    blocks: Vec<RisingBlock>,
    extension: Extension,
    period_marks: Vec<usize>,
}

impl PLSystem {
    /// Builds a system after structural checks only; axioms are checked by
    /// [`PLSystem::validate`].
    pub fn from_parts(parts: SystemParts) -> Result<Self, SystemError> {
        let SystemParts {
            n,
            division_points,
            anchors,
            blocks,
            extension,
            period_marks,
        } = parts;
        if n < 1 {
            return Err(SystemError::Structure(
                "dimension n must be at least 1".into(),
            ));
        }
        if division_points.len() < 2 {
            return Err(SystemError::Structure(
                "need at least two division points".into(),
            ));
        }
        if anchors.len() != division_points.len() {
            return Err(SystemError::Structure(format!(
                "{} anchors for {} division points",
                anchors.len(),
                division_points.len()
            )));
        }
        if blocks.len() + 1 != division_points.len() {
            return Err(SystemError::Structure(format!(
                "{} blocks for {} segments",
                blocks.len(),
                division_points.len() - 1
            )));
        }
        if let Some(row) = anchors.iter().position(|a| a.len() != n + 1) {
            return Err(SystemError::Structure(format!(
                "anchor {row} has {} components, expected {}",
                anchors[row].len(),
                n + 1
            )));
        }
        if let Some(b) = blocks
            .iter()
            .find(|b| b.lo < 1 || b.lo > b.hi || b.hi > n + 1)
        {
            return Err(SystemError::Structure(format!(
                "block [{}, {}] out of range",
                b.lo, b.hi
            )));
        }
        if division_points.windows(2).any(|w| w[1] < w[0]) {
            return Err(SystemError::Structure(
                "division points must be nondecreasing".into(),
            ));
        }
        let first = &division_points[0];
        let last = &division_points[division_points.len() - 1];
        if first < &Rational::zero() {
            return Err(SystemError::Structure("q_0 must be nonnegative".into()));
        }
        if first == last {
            return Err(SystemError::Structure("degenerate domain q_0 = q_M".into()));
        }
        if let Extension::Dilation { factor } = &extension {
            if factor <= &Rational::one() {
                return Err(SystemError::Structure(
                    "dilation factor must exceed 1".into(),
                ));
            }
            if first.is_zero() {
                return Err(SystemError::Structure("dilation needs q_0 > 0".into()));
            }
        }
        let m = division_points.len() - 1;
        if period_marks.iter().any(|&i| i > m) || period_marks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SystemError::Structure(
                "period marks must be increasing indices".into(),
            ));
        }
        Ok(PLSystem {
            n,
            division_points,
            anchors,
            blocks,
            extension,
            period_marks,
        })
    }

    pub fn into_parts(self) -> SystemParts {
        SystemParts {
            n: self.n,
            division_points: self.division_points,
            anchors: self.anchors,
            blocks: self.blocks,
            extension: self.extension,
            period_marks: self.period_marks,
        }
    }

    /// All `n+1` components equal to `q/(n+1)` on `[q0, q1]`, one block `[1, n+1]`.
    pub fn uniform(
        n: usize,
        q0: Rational,
        q1: Rational,
        extension: Extension,
    ) -> Result<Self, SystemError> {
        let share = |q: &Rational| vec![q / Rational::from_integer((n as i64 + 1).into()); n + 1];
        Self::from_parts(SystemParts {
            n,
            anchors: vec![share(&q0), share(&q1)],
            division_points: vec![q0, q1],
            blocks: vec![RisingBlock::new(1, n + 1, n)?],
            extension,
            period_marks: Vec::new(),
        })
    }

    /// Uniform system extended by dilation of factor `factor` from `q0`.
    pub fn uniform_dilation(n: usize, q0: Rational, factor: Rational) -> Result<Self, SystemError> {
        let q1 = &q0 * &factor;
        Self::uniform(n, q0, q1, Extension::Dilation { factor })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> usize {
        self.n + 1
    }

    pub fn division_points(&self) -> &[Rational] {
        &self.division_points
    }

    pub fn anchors(&self) -> &[Vec<Rational>] {
        &self.anchors
    }

    pub fn anchor(&self, i: usize) -> &[Rational] {
        &self.anchors[i]
    }

    pub fn blocks(&self) -> &[RisingBlock] {
        &self.blocks
    }

    pub fn extension(&self) -> &Extension {
        &self.extension
    }

    pub fn period_marks(&self) -> &[usize] {
        &self.period_marks
    }

    pub fn dilation_factor(&self) -> Option<&Rational> {
        match &self.extension {
            Extension::Dilation { factor } => Some(factor),
            Extension::Finite => None,
        }
    }

    /// Index `M` of the last division point.
    pub fn last_index(&self) -> usize {
        self.division_points.len() - 1
    }

    pub fn domain_start(&self) -> &Rational {
        &self.division_points[0]
    }

    /// Right end of the domain, `None` for dilation systems.
    pub fn domain_end(&self) -> Option<&Rational> {
        match self.extension {
            Extension::Finite => self.division_points.last(),
            Extension::Dilation { .. } => None,
        }
    }

    pub fn contains(&self, q: &Rational) -> bool {
        q >= self.domain_start() && self.domain_end().is_none_or(|end| q <= end)
    }

    fn domain_error(&self, q: &Rational) -> SystemError {
        let domain = match self.domain_end() {
            Some(end) => format!(
                "[{}, {}]",
                format_rational(self.domain_start()),
                format_rational(end)
            ),
            None => format!("[{}, +inf)", format_rational(self.domain_start())),
        };
        SystemError::Domain {
            q: format_rational(q),
            domain,
        }
    }

    /// `(P_1(q), …, P_{n+1}(q))`, exact.
    pub fn evaluate(&self, q: &Rational) -> Result<Vec<Rational>, SystemError> {
        if !self.contains(q) {
            return Err(self.domain_error(q));
        }
        match &self.extension {
            Extension::Finite => Ok(self.evaluate_fundamental(q)),
            Extension::Dilation { factor } => {
                let end = &self.division_points[self.last_index()];
                let mut reduced = q.clone();
                let mut scale = Rational::one();
                while &reduced >= end {
                    reduced /= factor;
                    scale *= factor;
                }
                let mut values = self.evaluate_fundamental(&reduced);
                if !scale.is_one() {
                    for v in &mut values {
                        *v *= &scale;
                    }
                }
                Ok(values)
            }
        }
    }

    /// Linear interpolation on the stored segments; `q` must lie in `[q_0, q_M]`.
    fn evaluate_fundamental(&self, q: &Rational) -> Vec<Rational> {
        let m = self.last_index();
        // last segment whose left end is <= q
        let seg = self.division_points[..m]
            .partition_point(|p| p <= q)
            .saturating_sub(1);
        let block = self.blocks[seg];
        let mut values = self.anchors[seg].clone();
        let rise = (q - &self.division_points[seg]) * block.slope();
        for v in &mut values[block.lo - 1..block.hi] {
            *v += &rise;
        }
        values
    }

    /// `P_1(q) + … + P_k(q)`.
    pub fn partial_sum(&self, k: usize, q: &Rational) -> Result<Rational, SystemError> {
        if k < 1 || k > self.components() {
            return Err(SystemError::ComponentOutOfRange {
                k,
                max: self.components(),
            });
        }
        let values = self.evaluate(q)?;
        Ok(values
            .iter()
            .take(k)
            .fold(Rational::zero(), |acc, v| acc + v))
    }

    /// Blocks on either side of division point `i`, wrapping across the period
    /// boundary for dilation systems. `None` at the ends of a finite system.
    pub fn adjacent_blocks(
        &self,
        i: usize,
    ) -> Result<Option<(RisingBlock, RisingBlock)>, SystemError> {
        let m = self.last_index();
        if i > m {
            return Err(SystemError::IndexOutOfRange { index: i, max: m });
        }
        if i > 0 && i < m {
            return Ok(Some((self.blocks[i - 1], self.blocks[i])));
        }
        match self.extension {
            Extension::Finite => Ok(None),
            Extension::Dilation { .. } => Ok(Some((self.blocks[m - 1], self.blocks[0]))),
        }
    }

    /// Ordinary when the left block's low index is below the right block's
    /// high index, switch when it is above.
    pub fn classify_division_point(&self, i: usize) -> Result<DivisionPointKind, SystemError> {
        Ok(match self.adjacent_blocks(i)? {
            None => DivisionPointKind::Boundary,
            Some((left, right)) if left.lo > right.hi => DivisionPointKind::Switch,
            Some(_) => DivisionPointKind::Ordinary,
        })
    }

    pub fn validate(&self) -> ValidationReport {
        validate::validate(self)
    }

    /// Division points with their values over `periods` periods of a dilation
    /// system (the whole domain for a finite one), in increasing order. The
    /// closing point of each period is the opening point of the next and is
    /// listed once.
    pub fn unrolled_points(&self, periods: usize) -> Vec<UnrolledPoint> {
        let m = self.last_index();
        let mut out = Vec::new();
        match &self.extension {
            Extension::Finite => {
                for i in 0..=m {
                    out.push(UnrolledPoint {
                        index: i,
                        q: self.division_points[i].clone(),
                        values: self.anchors[i].clone(),
                    });
                }
            }
            Extension::Dilation { factor } => {
                let mut scale = Rational::one();
                for period in 0..periods {
                    for i in 0..m {
                        out.push(UnrolledPoint {
                            index: period * m + i,
                            q: &self.division_points[i] * &scale,
                            values: self.anchors[i].iter().map(|v| v * &scale).collect(),
                        });
                    }
                    scale *= factor;
                }
                if periods > 0 {
                    let last_scale = &scale / factor;
                    out.push(UnrolledPoint {
                        index: periods * m,
                        q: &self.division_points[m] * &last_scale,
                        values: self.anchors[m].iter().map(|v| v * &last_scale).collect(),
                    });
                }
            }
        }
        out
    }

    /// Kind of the `index`-th unrolled point (see [`PLSystem::unrolled_points`]).
    pub fn unrolled_kind(&self, index: usize) -> DivisionPointKind {
        let local = match self.extension {
            Extension::Finite => index,
            Extension::Dilation { .. } => index % self.last_index(),
        };
        self.classify_division_point(local)
            .unwrap_or(DivisionPointKind::Boundary)
    }

    /// The rising block just to the right of `q`, skipping zero-length segments.
    pub fn block_right_of(&self, q: &Rational) -> Result<RisingBlock, SystemError> {
        if !self.contains(q) {
            return Err(self.domain_error(q));
        }
        let m = self.last_index();
        let reduced = match &self.extension {
            Extension::Finite => {
                if q == &self.division_points[m] {
                    return Err(self.domain_error(q));
                }
                q.clone()
            }
            Extension::Dilation { factor } => {
                let mut r = q.clone();
                while r >= self.division_points[m] {
                    r /= factor;
                }
                r
            }
        };
        // rightmost segment of positive length starting at or before q
        let mut seg = self.division_points[..m]
            .partition_point(|p| p <= &reduced)
            .saturating_sub(1);
        while seg + 1 < m && self.division_points[seg + 1] == self.division_points[seg] {
            seg += 1;
        }
        Ok(self.blocks[seg])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnrolledPoint {
    pub index: usize,
    pub q: Rational,
    pub values: Vec<Rational>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn uniform3() -> PLSystem {
        PLSystem::uniform(3, int(1), int(12), Extension::Finite).unwrap()
    }

    #[test]
    fn uniform_evaluates_to_equal_shares() {
        let sys = uniform3();
        assert_eq!(sys.evaluate(&int(8)).unwrap(), vec![int(2); 4]);
        assert_eq!(sys.partial_sum(4, &int(8)).unwrap(), int(8));
        assert!(sys.validate().valid);
    }

    #[test]
    fn domain_errors() {
        let sys = uniform3();
        assert!(matches!(
            sys.evaluate(&rat(1, 2)),
            Err(SystemError::Domain { .. })
        ));
        assert!(matches!(
            sys.evaluate(&int(13)),
            Err(SystemError::Domain { .. })
        ));
        let dil = PLSystem::uniform_dilation(3, int(1), int(2)).unwrap();
        assert!(dil.evaluate(&int(1000)).is_ok());
        assert!(dil.evaluate(&rat(1, 2)).is_err());
    }

    #[test]
    fn partial_sum_rejects_bad_component() {
        let sys = uniform3();
        assert!(matches!(
            sys.partial_sum(5, &int(2)),
            Err(SystemError::ComponentOutOfRange { .. })
        ));
        assert!(sys.partial_sum(0, &int(2)).is_err());
    }

    #[test]
    fn structural_checks() {
        let good = uniform3().into_parts();
        let mut bad = good.clone();
        bad.blocks.clear();
        assert!(PLSystem::from_parts(bad).is_err());
        let mut bad = good.clone();
        bad.division_points = vec![int(3), int(1)];
        assert!(PLSystem::from_parts(bad).is_err());
        let mut bad = good.clone();
        bad.anchors[1].pop();
        assert!(PLSystem::from_parts(bad).is_err());
        let mut bad = good;
        bad.extension = Extension::Dilation { factor: int(1) };
        assert!(PLSystem::from_parts(bad).is_err());
        assert!(RisingBlock::new(2, 1, 3).is_err());
        assert!(RisingBlock::new(1, 5, 3).is_err());
    }

    #[test]
    fn block_slope_is_reciprocal_size() {
        let b = RisingBlock::new(2, 4, 3).unwrap();
        assert_eq!(b.slope(), rat(1, 3));
        assert!(b.covers(3) && !b.covers(1));
    }

    #[test]
    fn finite_endpoints_are_boundary() {
        let sys = uniform3();
        assert_eq!(
            sys.classify_division_point(0).unwrap(),
            DivisionPointKind::Boundary
        );
        assert_eq!(
            sys.classify_division_point(1).unwrap(),
            DivisionPointKind::Boundary
        );
        assert!(matches!(
            sys.classify_division_point(2),
            Err(SystemError::IndexOutOfRange { .. })
        ));
    }
}
