//! Plot data for combined graphs: CSV tables and a bare SVG rendering.

use std::fmt::Write as _;

use num_traits::Zero;
use thiserror::Error;

use crate::minima::Trajectory;
use crate::rational::{format_rational, to_f64, Rational};
use crate::system::{DivisionPointKind, PLSystem, SystemError};

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("empty plot range [{start}, {end}]")]
    EmptyRange { start: String, end: String },
    #[error(transparent)]
    System(#[from] SystemError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotPoint {
    pub q: Rational,
    pub values: Vec<Rational>,
    /// `None` for range ends that are not division points.
    pub kind: Option<DivisionPointKind>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotData {
    pub n: usize,
    pub points: Vec<PlotPoint>,
}

impl PlotData {
    pub fn markers(&self) -> impl Iterator<Item = (&PlotPoint, DivisionPointKind)> {
        self.points.iter().filter_map(|p| p.kind.map(|k| (p, k)))
    }

    pub fn count(&self, kind: DivisionPointKind) -> usize {
        self.markers().filter(|(_, k)| *k == kind).count()
    }

    /// Polyline of component `d` (1-based) as `(q, P_d(q))`.
    pub fn polyline(&self, d: usize) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .map(|p| (to_f64(&p.q), to_f64(&p.values[d - 1])))
            .collect()
    }
}

/// Vertices of the combined graph on `[start, end]`: both ends plus every
/// division point between them. Each component is linear between vertices.
pub fn plot_data(
    sys: &PLSystem,
    start: &Rational,
    end: &Rational,
) -> Result<PlotData, ExportError> {
    if start >= end {
        return Err(ExportError::EmptyRange {
            start: format_rational(start),
            end: format_rational(end),
        });
    }
    let start_values = sys.evaluate(start)?;
    let end_values = sys.evaluate(end)?;

    let mut periods = 1;
    if let Some(factor) = sys.dilation_factor() {
        let mut reach = sys.division_points()[sys.last_index()].clone();
        while &reach < end {
            reach *= factor;
            periods += 1;
        }
    }

    let mut points = Vec::new();
    let mut start_kind = None;
    let mut end_kind = None;
    for p in sys.unrolled_points(periods) {
        if &p.q == start {
            start_kind.get_or_insert(sys.unrolled_kind(p.index));
        } else if &p.q == end {
            end_kind.get_or_insert(sys.unrolled_kind(p.index));
        } else if &p.q > start && &p.q < end {
            points.push(PlotPoint {
                q: p.q,
                values: p.values,
                kind: Some(sys.unrolled_kind(p.index)),
            });
        }
    }
    points.insert(
        0,
        PlotPoint {
            q: start.clone(),
            values: start_values,
            kind: start_kind,
        },
    );
    points.push(PlotPoint {
        q: end.clone(),
        values: end_values,
        kind: end_kind,
    });
    Ok(PlotData { n: sys.n(), points })
}

/// One period of a dilation system, or the whole domain of a finite one.
pub fn plot_periods(sys: &PLSystem, periods: usize) -> Result<PlotData, ExportError> {
    let start = sys.domain_start().clone();
    let end = match sys.dilation_factor() {
        Some(factor) => {
            let mut end = sys.division_points()[sys.last_index()].clone();
            for _ in 1..periods {
                end *= factor;
            }
            end
        }
        None => sys.division_points()[sys.last_index()].clone(),
    };
    plot_data(sys, &start, &end)
}

fn kind_label(kind: Option<DivisionPointKind>) -> &'static str {
    match kind {
        Some(DivisionPointKind::Ordinary) => "ordinary",
        Some(DivisionPointKind::Switch) => "switch",
        Some(DivisionPointKind::Boundary) => "boundary",
        None => "",
    }
}

/// `q,q_exact,kind,P_1..P_{n+1},S_1..S_n,R_1..R_{n+1}` with `S_k` the partial
/// sums and `R_d = P_d/q`. Decimal columns are for plotting; `q_exact` keys the row.
pub fn plot_csv(data: &PlotData) -> String {
    let c = data.n + 1;
    let mut out = String::from("q,q_exact,kind");
    for d in 1..=c {
        write!(out, ",P_{d}").unwrap();
    }
    for k in 1..c {
        write!(out, ",S_{k}").unwrap();
    }
    for d in 1..=c {
        write!(out, ",R_{d}").unwrap();
    }
    out.push('\n');
    for p in &data.points {
        write!(
            out,
            "{},{},{}",
            to_f64(&p.q),
            format_rational(&p.q),
            kind_label(p.kind)
        )
        .unwrap();
        for v in &p.values {
            write!(out, ",{}", to_f64(v)).unwrap();
        }
        let mut sum = Rational::zero();
        for v in &p.values[..data.n] {
            sum += v;
            write!(out, ",{}", to_f64(&sum)).unwrap();
        }
        for v in &p.values {
            write!(out, ",{}", to_f64(&(v / &p.q))).unwrap();
        }
        out.push('\n');
    }
    out
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 30.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
];

/// Plain line rendering. Division points sit on the combined graph as small
/// circles; switch points are red squares.
pub fn plot_svg(data: &PlotData) -> String {
    let first = &data.points[0];
    let last = &data.points[data.points.len() - 1];
    let (x0, x1) = (to_f64(&first.q), to_f64(&last.q));
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in &data.points {
        for v in &p.values {
            let v = to_f64(v);
            y0 = y0.min(v);
            y1 = y1.max(v);
        }
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#)
        .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for d in 1..=data.n + 1 {
        let pts: Vec<String> = data
            .polyline(d)
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        writeln!(
            out,
            r#"<polyline class="component" data-component="{d}" fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            COLORS[(d - 1) % COLORS.len()],
            pts.join(" ")
        )
        .unwrap();
    }
    for (p, kind) in data.markers() {
        let x = sx(to_f64(&p.q));
        // markers ride on P_1
        let y = sy(to_f64(&p.values[0]));
        match kind {
            DivisionPointKind::Switch => writeln!(
                out,
                r#"<rect class="switch" x="{:.2}" y="{:.2}" width="7" height="7" fill="red"/>"#,
                x - 3.5,
                y - 3.5
            ),
            other => writeln!(
                out,
                r#"<circle class="{}" cx="{x:.2}" cy="{y:.2}" r="3" fill="black"/>"#,
                kind_label(Some(other))
            ),
        }
        .unwrap();
        writeln!(
            out,
            r#"<line class="guide" x1="{x:.2}" y1="{MARGIN}" x2="{x:.2}" y2="{:.2}" stroke="{}" stroke-dasharray="2,3"/>"#,
            HEIGHT - MARGIN,
            if kind == DivisionPointKind::Switch { "red" } else { "#bbbbbb" }
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

/// `q,radius,sufficient,L_1..L_{n+1}`.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let c = traj.samples.first().map_or(0, |s| s.l.len());
    let mut out = String::from("q,radius,sufficient");
    for d in 1..=c {
        write!(out, ",L_{d}").unwrap();
    }
    out.push('\n');
    for s in &traj.samples {
        write!(out, "{},{},{}", s.q, s.radius, s.sufficient).unwrap();
        for l in &s.l {
            write!(out, ",{l}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::system::Extension;

    #[test]
    fn range_checks() {
        let sys = PLSystem::uniform(2, int(1), int(4), Extension::Finite).unwrap();
        assert!(matches!(
            plot_data(&sys, &int(2), &int(2)),
            Err(ExportError::EmptyRange { .. })
        ));
        assert!(matches!(
            plot_data(&sys, &int(2), &int(9)),
            Err(ExportError::System(_))
        ));
        let d = plot_data(&sys, &int(2), &int(3)).unwrap();
        assert_eq!(d.points.len(), 2);
        assert_eq!(d.markers().count(), 0);
    }

    #[test]
    fn csv_columns_line_up() {
        let sys = PLSystem::uniform_dilation(2, int(3), int(2)).unwrap();
        let d = plot_periods(&sys, 2).unwrap();
        let csv = plot_csv(&d);
        let mut lines = csv.lines();
        let header = lines.next().unwrap();
        assert_eq!(header, "q,q_exact,kind,P_1,P_2,P_3,S_1,S_2,R_1,R_2,R_3");
        for line in lines {
            assert_eq!(line.split(',').count(), 11);
        }
        assert_eq!(d.points.last().unwrap().q, int(12));
    }
}
