use num_traits::Zero;

use super::{Extension, PLSystem, RisingBlock, SystemError, SystemParts};
use crate::rational::{format_rational, Rational};

/// Builds a system segment by segment from a starting point: each step names a
/// rising block and the level it climbs to, and the time at which that level
/// is reached follows from the slope. Division points are never supplied
/// directly.
#[derive(Debug, Clone)]
pub struct ScheduleBuilder {
    n: usize,
    points: Vec<Rational>,
    anchors: Vec<Vec<Rational>>,
    blocks: Vec<RisingBlock>,
    marks: Vec<usize>,
}

impl ScheduleBuilder {
    pub fn start(n: usize, q0: Rational, anchor: Vec<Rational>) -> Result<Self, SystemError> {
        if anchor.len() != n + 1 {
            return Err(SystemError::Structure(format!(
                "start anchor has {} components, expected {}",
                anchor.len(),
                n + 1
            )));
        }
        Ok(ScheduleBuilder {
            n,
            points: vec![q0],
            anchors: vec![anchor],
            blocks: Vec::new(),
            marks: Vec::new(),
        })
    }

    pub fn current_q(&self) -> &Rational {
        self.points.last().expect("builder always holds a point")
    }

    pub fn current_values(&self) -> &[Rational] {
        self.anchors.last().expect("builder always holds a point")
    }

    pub fn block(&self, lo: usize, hi: usize) -> Result<RisingBlock, SystemError> {
        RisingBlock::new(lo, hi, self.n)
    }

    /// Raises components `lo..=hi` together until they reach `target`.
    ///
    /// The block must start from coinciding values and may not pass the
    /// component just above it; reaching it exactly is allowed.
    pub fn rise(
        &mut self,
        lo: usize,
        hi: usize,
        target: &Rational,
    ) -> Result<&mut Self, SystemError> {
        let block = self.block(lo, hi)?;
        let values = self.current_values().to_vec();
        let level = values[lo - 1].clone();
        if values[lo - 1..hi].iter().any(|v| v != &level) {
            return Err(SystemError::Schedule(format!(
                "components {lo}..={hi} do not coincide"
            )));
        }
        if target < &level {
            return Err(SystemError::Schedule(format!(
                "block [{lo}, {hi}] cannot descend from {} to {}",
                format_rational(&level),
                format_rational(target)
            )));
        }
        if let Some(above) = values.get(hi) {
            if target > above {
                return Err(SystemError::Schedule(format!(
                    "block [{lo}, {hi}] would pass P_{} = {} on its way to {}",
                    hi + 1,
                    format_rational(above),
                    format_rational(target)
                )));
            }
        }
        let duration = (target - &level) * Rational::from_integer((block.size() as i64).into());
        debug_assert!(duration >= Rational::zero());
        let mut next = values;
        for v in &mut next[lo - 1..hi] {
            *v = target.clone();
        }
        let q = self.current_q() + duration;
        self.points.push(q);
        self.anchors.push(next);
        self.blocks.push(block);
        Ok(self)
    }

    /// Records the current point as the start of a construction period.
    pub fn mark_period(&mut self) -> &mut Self {
        let idx = self.points.len() - 1;
        if self.marks.last() != Some(&idx) {
            self.marks.push(idx);
        }
        self
    }

    pub fn finish(self, extension: Extension) -> Result<PLSystem, SystemError> {
        PLSystem::from_parts(SystemParts {
            n: self.n,
            division_points: self.points,
            anchors: self.anchors,
            blocks: self.blocks,
            extension,
            period_marks: self.marks,
        })
    }
}
