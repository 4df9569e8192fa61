//! Axiom checks for [`PLSystem`].
//!
//! Every component is affine on each segment, so a linear constraint that holds
//! at both ends of a segment holds on all of it. Sortedness, nonnegativity and
//! `Σ P_k = q` are therefore checked at division points only, together with the
//! requirement that each segment's advanced end values are still sorted (a
//! rising block never overtakes the component above it inside a segment).

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Extension, PLSystem, RisingBlock};
use crate::rational::{format_rational, serde_frac, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axiom {
    S1,
    S2,
    S3,
    #[serde(rename = "anchor-consistency")]
    AnchorConsistency,
    #[serde(rename = "dilation-consistency")]
    DilationConsistency,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    #[serde(with = "serde_frac")]
    pub q: Rational,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn has(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

struct Collector(Vec<Violation>);

impl Collector {
    fn push(&mut self, axiom: Axiom, q: &Rational, detail: String) {
        self.0.push(Violation {
            axiom,
            q: q.clone(),
            detail,
        });
    }
}

fn fmt_vec(values: &[Rational]) -> String {
    let parts: Vec<String> = values.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

pub(super) fn validate(sys: &PLSystem) -> ValidationReport {
    let mut out = Collector(Vec::new());
    let points = sys.division_points();
    let m = sys.last_index();

    for (q, anchor) in points.iter().zip(sys.anchors()) {
        check_s1(&mut out, q, anchor);
    }

    for seg in 0..m {
        check_segment(&mut out, sys, seg);
    }

    for i in 1..m {
        let (left, right) = (sys.blocks()[i - 1], sys.blocks()[i]);
        check_s3(&mut out, &points[i], sys.anchor(i), left, right, Axiom::S3);
    }

    if let Extension::Dilation { factor } = sys.extension() {
        let expected_end = &points[0] * factor;
        if points[m] != expected_end {
            out.push(
                Axiom::DilationConsistency,
                &points[m],
                format!(
                    "q_M = {} but C·q_0 = {}",
                    format_rational(&points[m]),
                    format_rational(&expected_end)
                ),
            );
        }
        let scaled: Vec<Rational> = sys.anchor(0).iter().map(|v| v * factor).collect();
        if sys.anchor(m) != scaled.as_slice() {
            out.push(
                Axiom::DilationConsistency,
                &points[m],
                format!(
                    "P(q_M) = {} but C·P(q_0) = {}",
                    fmt_vec(sys.anchor(m)),
                    fmt_vec(&scaled)
                ),
            );
        }
        let (left, right) = (sys.blocks()[m - 1], sys.blocks()[0]);
        check_s3(
            &mut out,
            &points[m],
            sys.anchor(m),
            left,
            right,
            Axiom::DilationConsistency,
        );
    }

    let violations = out.0;
    ValidationReport {
        valid: violations.is_empty(),
        violations,
    }
}

fn check_s1(out: &mut Collector, q: &Rational, anchor: &[Rational]) {
    if let Some(v) = anchor.iter().find(|v| v.is_negative()) {
        out.push(
            Axiom::S1,
            q,
            format!("negative component {}", format_rational(v)),
        );
    }
    if let Some(k) = anchor.windows(2).position(|w| w[1] < w[0]) {
        out.push(
            Axiom::S1,
            q,
            format!("P_{} > P_{} in {}", k + 1, k + 2, fmt_vec(anchor)),
        );
    }
    let sum = anchor.iter().fold(Rational::zero(), |acc, v| acc + v);
    if &sum != q {
        out.push(
            Axiom::S1,
            q,
            format!(
                "components sum to {} instead of q = {}",
                format_rational(&sum),
                format_rational(q)
            ),
        );
    }
}

fn check_segment(out: &mut Collector, sys: &PLSystem, seg: usize) {
    let points = sys.division_points();
    let (start, end) = (&points[seg], &points[seg + 1]);
    let block = sys.blocks()[seg];
    let left = sys.anchor(seg);
    let level = &left[block.lo() - 1];
    if left[block.lo() - 1..block.hi()].iter().any(|v| v != level) {
        out.push(
            Axiom::S2,
            start,
            format!(
                "block [{}, {}] does not start from coinciding components in {}",
                block.lo(),
                block.hi(),
                fmt_vec(left)
            ),
        );
    }
    let rise = (end - start) * block.slope();
    let mut advanced = left.to_vec();
    for v in &mut advanced[block.lo() - 1..block.hi()] {
        *v += &rise;
    }
    if advanced.windows(2).any(|w| w[1] < w[0]) {
        out.push(
            Axiom::S2,
            end,
            format!(
                "block [{}, {}] overtakes a constant component on [{}, {}]",
                block.lo(),
                block.hi(),
                format_rational(start),
                format_rational(end)
            ),
        );
    }
    if advanced.as_slice() != sys.anchor(seg + 1) {
        out.push(
            Axiom::AnchorConsistency,
            end,
            format!(
                "stored {} but segment gives {}",
                fmt_vec(sys.anchor(seg + 1)),
                fmt_vec(&advanced)
            ),
        );
    }
}

fn check_s3(
    out: &mut Collector,
    q: &Rational,
    anchor: &[Rational],
    left: RisingBlock,
    right: RisingBlock,
    axiom: Axiom,
) {
    let (r_lo, s_hi) = (left.lo(), right.hi());
    if r_lo < s_hi {
        let level = &anchor[r_lo - 1];
        if anchor[r_lo - 1..s_hi].iter().any(|v| v != level) {
            out.push(
                axiom,
                q,
                format!(
                    "ordinary point needs P_{r_lo} = … = P_{s_hi}, got {}",
                    fmt_vec(anchor)
                ),
            );
        }
    } else if r_lo == s_hi && left != right {
        out.push(
            axiom,
            q,
            format!(
                "left block low index equals right block high index ({r_lo}) at a slope change"
            ),
        );
    }
}
