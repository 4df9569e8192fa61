//! Evidence that the exponents of the second family vary independently: exact
//! finite-difference Jacobians of the parameter-to-exponent maps, and the
//! printed closed forms at their degenerate specializations.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exponents::{analyze_periodic, PeriodicAnalysis};
use crate::families::{build_family_b, printed_f, printed_w, FamilyBParams, FamilyError};
use crate::rational::{
    format_rational, int, serde_frac, serde_frac_matrix, serde_frac_vec, ExtendedRational, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndependenceError {
    #[error("point outside the admissible region: {}", .0.join("; "))]
    Inadmissible(Vec<String>),
    #[error("exponent {0} is infinite at this point")]
    InfiniteExponent(usize),
    #[error("no step keeps every stencil point admissible with unchanged extremum locations after {0} halvings")]
    StencilFailed(usize),
    #[error("zero denominator in printed form {0}")]
    ZeroDenominator(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// Free coordinates `(C, A_2, …, A_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamPoint {
    #[serde(with = "serde_frac_vec")]
    pub coords: Vec<Rational>,
}

impl ParamPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        ParamPoint { coords }
    }

    pub fn from_params(p: &FamilyBParams) -> Self {
        ParamPoint {
            coords: p.coordinates(),
        }
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn to_params(&self) -> Result<FamilyBParams, IndependenceError> {
        let p = FamilyBParams::from_coordinates(&self.coords)?;
        let v = p.violations();
        if !v.is_empty() {
            return Err(IndependenceError::Inadmissible(v));
        }
        Ok(p)
    }

    fn shifted(&self, j: usize, delta: &Rational) -> ParamPoint {
        let mut coords = self.coords.clone();
        coords[j] += delta;
        ParamPoint { coords }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExponentMap {
    /// `(Ŵ_0, …, Ŵ_{n−1})`
    W,
    /// `(F_1, …, F_n)`, the upper limits of `P_k(q)/q`
    F,
}

fn analyze(point: &ParamPoint) -> Result<PeriodicAnalysis, IndependenceError> {
    let sys = build_family_b(&point.to_params()?)?;
    Ok(analyze_periodic(&sys).map_err(FamilyError::from)?)
}

fn values(map: ExponentMap, a: &PeriodicAnalysis) -> Result<Vec<Rational>, IndependenceError> {
    let n = a.profile.n;
    match map {
        ExponentMap::W => a
            .profile
            .omega_hat
            .iter()
            .enumerate()
            .map(|(d, w)| {
                w.as_finite()
                    .cloned()
                    .ok_or(IndependenceError::InfiniteExponent(d))
            })
            .collect(),
        ExponentMap::F => Ok(a.profile.phi_bar[..n].to_vec()),
    }
}

/// Division-point indices at which the extrema feeding `map` are attained.
fn signature(map: ExponentMap, a: &PeriodicAnalysis) -> Vec<usize> {
    let n = a.profile.n;
    match map {
        ExponentMap::W => a.partial.iter().map(|e| e.argmax_index).collect(),
        ExponentMap::F => a.single[..n].iter().map(|e| e.argmax_index).collect(),
    }
}

/// Exponents `Ŵ_0, …, Ŵ_{n−1}` read off the built system.
pub fn eval_w(point: &ParamPoint) -> Result<Vec<ExtendedRational>, IndependenceError> {
    Ok(analyze(point)?.profile.omega_hat)
}

/// Exponents `F_1, …, F_n` read off the built system.
pub fn eval_f(point: &ParamPoint) -> Result<Vec<Rational>, IndependenceError> {
    let a = analyze(point)?;
    values(ExponentMap::F, &a)
}

pub fn eval_map(map: ExponentMap, point: &ParamPoint) -> Result<Vec<Rational>, IndependenceError> {
    values(map, &analyze(point)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub map: ExponentMap,
    pub point: ParamPoint,
    #[serde(with = "serde_frac")]
    pub h: Rational,
    pub halvings: usize,
    /// Row `i` is output `i`, column `j` is coordinate `j`.
    #[serde(with = "serde_frac_matrix")]
    pub jacobian: Vec<Vec<Rational>>,
    pub rank: usize,
    /// Absolute values of the pivots met during elimination.
    #[serde(with = "serde_frac_vec")]
    pub pivots: Vec<Rational>,
}

/// Rank over the rationals by Gaussian elimination, with the pivots used.
pub fn exact_rank(matrix: &[Vec<Rational>]) -> (usize, Vec<Rational>) {
    let mut m: Vec<Vec<Rational>> = matrix.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        // largest pivot keeps the report readable; any nonzero entry is exact
        let Some(p) = (row..rows)
            .filter(|&r| !m[r][col].is_zero())
            .max_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()))
        else {
            continue;
        };
        m.swap(row, p);
        let pivot = m[row][col].clone();
        pivots.push(pivot.abs());
        for r in row + 1..rows {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pivot;
            for c in col..cols {
                let sub = &factor * &m[row][c];
                m[r][c] -= sub;
            }
        }
        row += 1;
    }
    (row, pivots)
}

pub const MAX_HALVINGS: usize = 20;

/// Central-difference Jacobian of `map` at `point` with exact arithmetic.
///
/// The step is halved until every stencil point is admissible and realizes
/// each extremum at the same division point as the center, so that all
/// stencil values come from the same rational function.
pub fn jacobian_rank(
    map: ExponentMap,
    point: &ParamPoint,
    h: &Rational,
) -> Result<RankCertificate, IndependenceError> {
    if !h.is_positive() {
        return Err(IndependenceError::InvalidInput(format!(
            "step h = {} must be positive",
            format_rational(h)
        )));
    }
    let center = analyze(point)?;
    values(map, &center)?;
    let sig = signature(map, &center);
    let dim = point.n();
    let mut h = h.clone();
    for halvings in 0..=MAX_HALVINGS {
        let stencil: Vec<(usize, ParamPoint, ParamPoint)> = (0..dim)
            .map(|j| (j, point.shifted(j, &h), point.shifted(j, &-h.clone())))
            .collect();
        let evaluated: Vec<Option<(Vec<Rational>, Vec<Rational>)>> = stencil
            .par_iter()
            .map(|(_, plus, minus)| {
                let (ap, am) = (analyze(plus).ok()?, analyze(minus).ok()?);
                if signature(map, &ap) != sig || signature(map, &am) != sig {
                    return None;
                }
                Some((values(map, &ap).ok()?, values(map, &am).ok()?))
            })
            .collect();
        if evaluated.iter().all(Option::is_some) {
            let two_h = int(2) * &h;
            let mut jacobian = vec![vec![Rational::zero(); dim]; dim];
            for (j, entry) in evaluated.into_iter().enumerate() {
                let (plus, minus) = entry.expect("checked above");
                for i in 0..dim {
                    jacobian[i][j] = (&plus[i] - &minus[i]) / &two_h;
                }
            }
            let (rank, pivots) = exact_rank(&jacobian);
            return Ok(RankCertificate {
                map,
                point: point.clone(),
                h,
                halvings,
                jacobian,
                rank,
                pivots,
            });
        }
        h /= int(2);
    }
    Err(IndependenceError::StencilFailed(MAX_HALVINGS))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Specialization {
    /// printed `Ŵ` forms at `C = 0`
    WAtZero,
    /// printed `F` forms as `C → ∞`
    FAtInfinity,
}

/// Completes `A_1, …, A_n` with `A_{n+1} = 1 − Σ A_k` after checking
/// positivity and `A_1 = A_2`.
pub fn complete_a_vector(head: &[Rational]) -> Result<Vec<Rational>, IndependenceError> {
    if head.len() < 3 {
        return Err(IndependenceError::InvalidInput(format!(
            "need A_1..A_n with n ≥ 3, got {} values",
            head.len()
        )));
    }
    if head[0] != head[1] {
        return Err(IndependenceError::InvalidInput("A_1 must equal A_2".into()));
    }
    let mut a = head.to_vec();
    let last = head.iter().fold(Rational::one(), |acc, v| acc - v);
    a.push(last);
    if let Some(v) = a.iter().find(|v| !v.is_positive()) {
        return Err(IndependenceError::InvalidInput(format!(
            "A entries must be positive, found {}",
            format_rational(v)
        )));
    }
    Ok(a)
}

/// Printed closed forms of the second family at a degenerate value of `C`.
/// `head` is `A_1, …, A_n`; the last entry is implied by the sum.
pub fn eval_closed_forms_specialized(
    which: Specialization,
    head: &[Rational],
) -> Result<Vec<Rational>, IndependenceError> {
    let a = complete_a_vector(head)?;
    let n = a.len() - 1;
    // C does not enter the coefficients of the printed forms
    let params = FamilyBParams {
        n,
        c: Rational::zero(),
        a,
    };
    match which {
        Specialization::WAtZero => printed_w(&params)
            .iter()
            .enumerate()
            .map(|(d, f)| {
                f.at_zero()
                    .ok_or_else(|| IndependenceError::ZeroDenominator(format!("W_{d}")))
            })
            .collect(),
        Specialization::FAtInfinity => printed_f(&params)
            .iter()
            .enumerate()
            .map(|(i, f)| {
                f.at_infinity()
                    .ok_or_else(|| IndependenceError::ZeroDenominator(format!("F_{}", i + 1)))
            })
            .collect(),
    }
}

/// Admissible points drawn uniformly from a box of half-width `radius`
/// around `center` on a grid of step `radius/1024`.
pub fn random_admissible_points(
    center: &ParamPoint,
    radius: &Rational,
    count: usize,
    seed: u64,
) -> Result<Vec<ParamPoint>, IndependenceError> {
    center.to_params()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        if attempts > 1000 * (count + 1) {
            return Err(IndependenceError::InvalidInput(
                "radius too large to find admissible points".into(),
            ));
        }
        let coords = center
            .coords
            .iter()
            .map(|c| c + radius * Rational::new(rng.gen_range(-1024i64..=1024).into(), 1024.into()))
            .collect();
        let p = ParamPoint::new(coords);
        if p.to_params().is_ok() {
            out.push(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::default_params_b;
    use crate::rational::rat;

    #[test]
    fn rank_of_small_matrices() {
        let m = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(exact_rank(&m).0, 1);
        let id = vec![vec![int(1), int(0)], vec![int(0), rat(1, 3)]];
        let (r, pivots) = exact_rank(&id);
        assert_eq!(r, 2);
        assert_eq!(pivots, vec![int(1), rat(1, 3)]);
        assert_eq!(exact_rank(&[vec![int(0), int(0)]]).0, 0);
    }

    #[test]
    fn default_values() {
        let p = ParamPoint::from_params(&default_params_b(3).unwrap());
        assert_eq!(
            eval_w(&p).unwrap(),
            vec![rat(1, 2), rat(7, 4), int(7)]
                .into_iter()
                .map(ExtendedRational::Finite)
                .collect::<Vec<_>>()
        );
        assert_eq!(eval_f(&p).unwrap(), vec![rat(1, 8), rat(3, 11), rat(3, 8)]);
    }

    #[test]
    fn inadmissible_points_are_rejected() {
        let p = ParamPoint::new(vec![int(2), rat(1, 8), rat(1, 4)]);
        assert!(matches!(
            eval_w(&p),
            Err(IndependenceError::Inadmissible(_))
        ));
        let ok = ParamPoint::new(vec![int(3), rat(1, 8), rat(1, 4)]);
        assert!(jacobian_rank(ExponentMap::W, &ok, &int(0)).is_err());
    }

    #[test]
    fn specializations() {
        let w = eval_closed_forms_specialized(
            Specialization::WAtZero,
            &[rat(1, 8), rat(1, 8), rat(1, 4)],
        )
        .unwrap();
        assert_eq!(w[0], w[1]);
        let f = eval_closed_forms_specialized(
            Specialization::FAtInfinity,
            &[rat(1, 8), rat(1, 8), rat(1, 4)],
        )
        .unwrap();
        assert_eq!(f[1], rat(1, 2));
        assert_eq!(f[2], rat(2, 5));
        assert!(complete_a_vector(&[rat(1, 8), rat(1, 4), rat(1, 4)]).is_err());
        assert!(complete_a_vector(&[rat(1, 2), rat(1, 2), rat(1, 4)]).is_err());
    }

    #[test]
    fn perturbations_are_admissible_and_reproducible() {
        let c = ParamPoint::from_params(&default_params_b(3).unwrap());
        let pts = random_admissible_points(&c, &rat(1, 64), 5, 3).unwrap();
        assert_eq!(
            pts,
            random_admissible_points(&c, &rat(1, 64), 5, 3).unwrap()
        );
        assert!(pts.iter().all(|p| p.to_params().is_ok()));
    }
}
