//! Continued fractions: parsing `[a0; a1, a2, ...]` specs and the convergent
//! vectors that realize the first minimum in dimension two.

use super::OracleError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub a0: i64,
    pub tail: Vec<i64>,
    /// The tail repeats forever.
    pub periodic: bool,
}

impl ContinuedFraction {
    /// Parses `[a0; a1, a2, ...]`. A trailing `...` repeats the listed tail.
    pub fn parse(text: &str) -> Result<Self, OracleError> {
        let bad = || OracleError::Parse(format!("malformed continued fraction {text:?}"));
        let inner = text
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(bad)?;
        let (head, rest) = match inner.split_once(';') {
            Some((h, r)) => (h, r),
            None => (inner, ""),
        };
        let a0 = head.trim().parse::<i64>().map_err(|_| bad())?;
        let mut tail = Vec::new();
        let mut periodic = false;
        for (i, part) in rest.split(',').map(str::trim).enumerate() {
            if part.is_empty() && i == 0 {
                continue;
            }
            if part == "..." {
                periodic = true;
                continue;
            }
            if periodic {
                return Err(bad());
            }
            let a = part.parse::<i64>().map_err(|_| bad())?;
            if a < 1 {
                return Err(OracleError::Parse(format!(
                    "partial quotient {a} must be positive"
                )));
            }
            tail.push(a);
        }
        if periodic && tail.is_empty() {
            return Err(bad());
        }
        Ok(ContinuedFraction { a0, tail, periodic })
    }

    /// Partial quotients after `a0`, at most `count` of them.
    pub fn quotients(&self, count: usize) -> Vec<i64> {
        if self.periodic {
            self.tail.iter().cycle().take(count).copied().collect()
        } else {
            self.tail.iter().take(count).copied().collect()
        }
    }

    /// Convergents `p_k/q_k` for `k = -1, 0, 1, …`, starting with `1/0`,
    /// stopping before the numerators leave `i64`.
    pub fn convergents(&self, count: usize) -> Vec<(i64, i64)> {
        let mut out = vec![(1i64, 0i64), (self.a0, 1)];
        let (mut p0, mut q0, mut p1, mut q1) = (1i128, 0i128, self.a0 as i128, 1i128);
        for a in self.quotients(count) {
            let p2 = a as i128 * p1 + p0;
            let q2 = a as i128 * q1 + q0;
            if p2.abs() > i64::MAX as i128 / 4 || q2 > i64::MAX as i128 / 4 {
                break;
            }
            out.push((p2 as i64, q2 as i64));
            (p0, q0, p1, q1) = (p1, q1, p2, q2);
        }
        out
    }

    /// Value as a double, from the deepest convergent that fits.
    pub fn value(&self) -> f64 {
        let (p, q) = *self.convergents(80).last().expect("at least a0");
        p as f64 / q as f64
    }
}

/// For `u ∝ (1, θ)`, the vectors `(p_k, −q_k)` of the convergents of `θ`.
/// In dimension two the first minimum of every body is attained on one of them.
pub fn convergent_vectors(cf: &ContinuedFraction, count: usize) -> Vec<[i64; 2]> {
    cf.convergents(count)
        .into_iter()
        .map(|(p, q)| if p < 0 { [-p, q] } else { [p, -q] })
        .map(|[a, b]| if a == 0 && b < 0 { [0, -b] } else { [a, b] })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let g = ContinuedFraction::parse("[1;1,1,...]").unwrap();
        assert!(g.periodic);
        assert_eq!(g.quotients(5), vec![1; 5]);
        assert!((g.value() - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
        let r = ContinuedFraction::parse("[0; 2, 3]").unwrap();
        assert_eq!(r.convergents(10), vec![(1, 0), (0, 1), (1, 2), (3, 7)]);
        assert_eq!(
            ContinuedFraction::parse("[3]").unwrap().tail,
            Vec::<i64>::new()
        );
        for bad in ["1;1", "[x;1]", "[1;0]", "[1;...]", "[1;2,...,3]"] {
            assert!(ContinuedFraction::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn golden_convergents_are_fibonacci() {
        let g = ContinuedFraction::parse("[1;1,...]").unwrap();
        let c = g.convergents(6);
        assert_eq!(&c[..6], &[(1, 0), (1, 1), (2, 1), (3, 2), (5, 3), (8, 5)]);
        assert_eq!(convergent_vectors(&g, 2)[2], [2, -1]);
    }
}
