//! Compactly-supported Euler characteristics of one-dimensional stratified
//! spaces and integration of constructible functions.
//!
//! The stratum algebra covers exactly what the conjugacy-class spaces of
//! `S^1` and `O(2)` need: points, intervals, circles, finite sets, and
//! cofinite complements. Positions are exact rationals (fractions of a full
//! turn), so membership tests never involve floating point.
//!
//! chi_c values: point 1, open interval -1, half-open interval 0, closed
//! interval 1, circle 0, finite set its size, cofinite complement
//! `chi_c(whole) - excluded`.

use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};

pub type Rat = Ratio<i64>;

/// Which end of a half-open interval is closed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedEnd {
    Lower,
    Upper,
}

/// A stratum of a one-dimensional stratified space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stratum {
    Point(Rat),
    /// Open interval (lo, hi), lo < hi.
    OpenInterval(Rat, Rat),
    /// Half-open interval with the indicated closed end.
    HalfOpenInterval(Rat, Rat, ClosedEnd),
    /// Closed interval [lo, hi], lo < hi.
    ClosedInterval(Rat, Rat),
    /// A full circle, parameterized by turns in [0, 1).
    Circle,
    /// A finite set of the given size, carrying no geometry.
    FiniteSet(u64),
    /// A whole stratum minus finitely many points.
    CofiniteComplement { whole: Box<Stratum>, excluded: u64 },
}

impl Stratum {
    /// The compactly-supported Euler characteristic.
    pub fn euler_char(&self) -> i64 {
        match self {
            Stratum::Point(_) => 1,
            Stratum::OpenInterval(..) => -1,
            Stratum::HalfOpenInterval(..) => 0,
            Stratum::ClosedInterval(..) => 1,
            Stratum::Circle => 0,
            Stratum::FiniteSet(s) => *s as i64,
            Stratum::CofiniteComplement { whole, excluded } => {
                whole.euler_char() - *excluded as i64
            }
        }
    }

    /// Membership test for the geometric strata. Circle positions are taken
    /// modulo one turn.
    pub fn contains(&self, p: &Rat) -> bool {
        match self {
            Stratum::Point(q) => p == q,
            Stratum::OpenInterval(lo, hi) => {
                let wrapped = *p + Rat::from_integer(1);
                (lo < p && p < hi) || (*lo < wrapped && wrapped < *hi)
            }
            Stratum::HalfOpenInterval(lo, hi, end) => match end {
                ClosedEnd::Lower => lo <= p && p < hi,
                ClosedEnd::Upper => lo < p && p <= hi,
            },
            Stratum::ClosedInterval(lo, hi) => lo <= p && p <= hi,
            Stratum::Circle => Rat::zero() <= *p && *p < Rat::from_integer(1),
            Stratum::FiniteSet(_) | Stratum::CofiniteComplement { .. } => false,
        }
    }
}

/// Sum of chi_c over a list of strata.
pub fn euler_char(strata: &[Stratum]) -> i64 {
    strata.iter().map(Stratum::euler_char).sum()
}

/// An integer-valued constructible function: disjoint strata covering an
/// ambient space, each carrying a value. Coverage is checked through the
/// Euler characteristic: the strata must sum to chi_c of the ambient space.
#[derive(Clone, Debug)]
pub struct ConstructibleFunction {
    ambient_chi: i64,
    pieces: Vec<(Stratum, i64)>,
}

impl ConstructibleFunction {
    pub fn new(ambient: &[Stratum], pieces: Vec<(Stratum, i64)>) -> Result<ConstructibleFunction> {
        let ambient_chi = euler_char(ambient);
        let strata_chi: i64 = pieces.iter().map(|(s, _)| s.euler_char()).sum();
        if strata_chi != ambient_chi {
            return Err(Error::Coverage {
                strata: strata_chi,
                ambient: ambient_chi,
            });
        }
        Ok(ConstructibleFunction {
            ambient_chi,
            pieces,
        })
    }

    pub fn ambient_chi(&self) -> i64 {
        self.ambient_chi
    }

    pub fn pieces(&self) -> &[(Stratum, i64)] {
        &self.pieces
    }
}

/// The integral with respect to the Euler characteristic:
/// `sum over pieces of value * chi_c(stratum)`.
pub fn integrate(f: &ConstructibleFunction) -> i64 {
    f.pieces
        .iter()
        .map(|(s, v)| v * s.euler_char())
        .sum()
}

/// Splits a stratum at finitely many of its points, returning the points and
/// the complementary open pieces; chi_c is preserved. Points must lie in the
/// stratum; duplicates are merged.
pub fn refine_at_points(s: &Stratum, points: &[Rat]) -> Result<Vec<Stratum>> {
    let mut cuts: Vec<Rat> = points.to_vec();
    cuts.sort();
    cuts.dedup();
    if cuts.is_empty() {
        return Ok(vec![s.clone()]);
    }
    for p in &cuts {
        if !s.contains(p) {
            return Err(Error::PointOutside);
        }
    }
    let mut out = Vec::new();
    match s {
        Stratum::Point(_) => {
            out.push(s.clone());
        }
        Stratum::Circle => {
            // m points on the circle leave m open arcs, the last wrapping
            // past a full turn
            for p in &cuts {
                out.push(Stratum::Point(*p));
            }
            let m = cuts.len();
            if m == 1 {
                out.push(Stratum::OpenInterval(cuts[0], cuts[0] + 1));
            } else {
                for i in 0..m {
                    let lo = cuts[i];
                    let hi = if i + 1 < m { cuts[i + 1] } else { cuts[0] + 1 };
                    out.push(Stratum::OpenInterval(lo, hi));
                }
            }
        }
        Stratum::OpenInterval(lo, hi)
        | Stratum::ClosedInterval(lo, hi)
        | Stratum::HalfOpenInterval(lo, hi, _) => {
            let lo_closed = match s {
                Stratum::ClosedInterval(..) => true,
                Stratum::HalfOpenInterval(_, _, ClosedEnd::Lower) => true,
                _ => false,
            };
            let hi_closed = match s {
                Stratum::ClosedInterval(..) => true,
                Stratum::HalfOpenInterval(_, _, ClosedEnd::Upper) => true,
                _ => false,
            };
            // lift cut points given modulo a turn into arcs reaching past it
            let mut cuts: Vec<Rat> = cuts
                .iter()
                .map(|p| if p < lo { *p + 1 } else { *p })
                .collect();
            cuts.sort();
            cuts.dedup();
            for p in &cuts {
                out.push(Stratum::Point(*p));
            }
            // complementary segments, with end styles inherited where the
            // original boundary survives
            let mut nodes = vec![(*lo, lo_closed && !cuts.contains(lo))];
            for p in &cuts {
                nodes.push((*p, false));
            }
            nodes.push((*hi, hi_closed && !cuts.contains(hi)));
            nodes.sort_by(|a, b| a.0.cmp(&b.0));
            nodes.dedup_by(|a, b| a.0 == b.0);
            for w in nodes.windows(2) {
                let (a, a_closed) = w[0];
                let (b, b_closed) = w[1];
                out.push(match (a_closed, b_closed) {
                    (false, false) => Stratum::OpenInterval(a, b),
                    (true, false) => Stratum::HalfOpenInterval(a, b, ClosedEnd::Lower),
                    (false, true) => Stratum::HalfOpenInterval(a, b, ClosedEnd::Upper),
                    (true, true) => Stratum::ClosedInterval(a, b),
                });
            }
        }
        Stratum::FiniteSet(_) | Stratum::CofiniteComplement { .. } => {
            return Err(Error::Unsupported(
                "refinement needs a geometric stratum".into(),
            ));
        }
    }
    debug_assert_eq!(euler_char(&out), s.euler_char(), "refinement must preserve chi");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn chi_values() {
        assert_eq!(Stratum::Circle.euler_char(), 0);
        assert_eq!(Stratum::ClosedInterval(rat(0, 1), rat(1, 2)).euler_char(), 1);
        assert_eq!(Stratum::OpenInterval(rat(0, 1), rat(1, 2)).euler_char(), -1);
        assert_eq!(
            Stratum::HalfOpenInterval(rat(0, 1), rat(1, 2), ClosedEnd::Lower).euler_char(),
            0
        );
        assert_eq!(Stratum::FiniteSet(5).euler_char(), 5);
        assert_eq!(
            Stratum::CofiniteComplement {
                whole: Box::new(Stratum::Circle),
                excluded: 3
            }
            .euler_char(),
            -3
        );
        // open interval plus two endpoints refine a closed interval
        assert_eq!(
            euler_char(&[
                Stratum::OpenInterval(rat(0, 1), rat(1, 1)),
                Stratum::Point(rat(0, 1)),
                Stratum::Point(rat(1, 1)),
            ]),
            1
        );
    }

    #[test]
    fn integrate_examples() {
        // constant 1 on a circle integrates to 0
        let f = ConstructibleFunction::new(&[Stratum::Circle], vec![(Stratum::Circle, 1)]).unwrap();
        assert_eq!(integrate(&f), 0);

        // a point mass of value v on a circle integrates to v
        let pieces = refine_at_points(&Stratum::Circle, &[rat(0, 1)]).unwrap();
        let valued: Vec<(Stratum, i64)> = pieces
            .into_iter()
            .map(|s| match s {
                Stratum::Point(_) => (s, 7),
                other => (other, 0),
            })
            .collect();
        let f = ConstructibleFunction::new(&[Stratum::Circle], valued).unwrap();
        assert_eq!(integrate(&f), 7);

        // value 1 on an open interval, 0 at the endpoints
        let interval = Stratum::ClosedInterval(rat(0, 1), rat(1, 1));
        let pieces = refine_at_points(&interval, &[rat(0, 1), rat(1, 1)]).unwrap();
        let valued: Vec<(Stratum, i64)> = pieces
            .into_iter()
            .map(|s| match s {
                Stratum::OpenInterval(..) => (s, 1),
                other => (other, 0),
            })
            .collect();
        let f = ConstructibleFunction::new(std::slice::from_ref(&interval), valued).unwrap();
        assert_eq!(integrate(&f), -1);
    }

    #[test]
    fn coverage_violation_is_an_error() {
        let r = ConstructibleFunction::new(
            &[Stratum::Circle],
            vec![(Stratum::Point(rat(0, 1)), 1)],
        );
        assert!(matches!(r, Err(Error::Coverage { strata: 1, ambient: 0 })));
    }

    #[test]
    fn refine_circle() {
        let pieces = refine_at_points(
            &Stratum::Circle,
            &[rat(0, 1), rat(1, 3), rat(2, 3)],
        )
        .unwrap();
        let points = pieces
            .iter()
            .filter(|s| matches!(s, Stratum::Point(_)))
            .count();
        let arcs = pieces
            .iter()
            .filter(|s| matches!(s, Stratum::OpenInterval(..)))
            .count();
        assert_eq!((points, arcs), (3, 3));
        assert_eq!(euler_char(&pieces), 0);
    }

    #[test]
    fn refine_closed_interval() {
        let s = Stratum::ClosedInterval(rat(0, 1), rat(1, 2));
        // split at both endpoints and one interior point
        let pieces = refine_at_points(&s, &[rat(0, 1), rat(1, 4), rat(1, 2)]).unwrap();
        let points = pieces.iter().filter(|p| matches!(p, Stratum::Point(_))).count();
        let open = pieces
            .iter()
            .filter(|p| matches!(p, Stratum::OpenInterval(..)))
            .count();
        assert_eq!((points, open), (3, 2));
        assert_eq!(euler_char(&pieces), 1);

        // splitting only at an interior point keeps the half-open ends
        let pieces = refine_at_points(&s, &[rat(1, 4)]).unwrap();
        assert_eq!(euler_char(&pieces), 1);
        assert!(pieces
            .iter()
            .any(|p| matches!(p, Stratum::HalfOpenInterval(..))));
    }

    #[test]
    fn refine_empty_set_of_points_is_identity() {
        let s = Stratum::Circle;
        assert_eq!(refine_at_points(&s, &[]).unwrap(), vec![Stratum::Circle]);
    }

    #[test]
    fn refine_rejects_outside_points() {
        let s = Stratum::OpenInterval(rat(0, 1), rat(1, 2));
        assert!(matches!(
            refine_at_points(&s, &[rat(1, 2)]),
            Err(Error::PointOutside)
        ));
    }
}
