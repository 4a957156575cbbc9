use crate::error::{Error, Result};
use crate::space::{Space, SpacePoint};

const INTEGER_TOL: f64 = 1e-6;

/// Signed step from `a` to `b` on a circle of circumference `c`, wrapped
/// into `(-c/2, c/2]`.
pub(crate) fn wrapped_step(a: f64, b: f64, c: f64) -> f64 {
    let mut d = (b - a).rem_euclid(c);
    if d > c / 2.0 {
        d -= c;
    }
    d
}

/// Number of turns of a closed sequence of circle points.
///
/// Consecutive samples are lifted along the shorter arc; a step of half
/// the circumference or more has no unambiguous lift.
pub fn winding_number(space: &Space, strand: &[SpacePoint]) -> Result<i64> {
    let c = space
        .circumference()
        .ok_or_else(|| Error::InvalidSpace("winding number needs a circle".into()))?;
    let coords = strand
        .iter()
        .map(|p| p.coord().filter(|_| space.accepts(p)).ok_or(Error::SpaceMismatch))
        .collect::<Result<Vec<_>>>()?;
    let mut total = 0.0;
    for w in coords.windows(2) {
        let step = wrapped_step(w[0], w[1], c);
        if step.abs() >= c / 2.0 {
            return Err(Error::AmbiguousLift { step });
        }
        total += step;
    }
    let turns = total / c;
    let k = turns.round();
    if (turns - k).abs() > INTEGER_TOL {
        return Err(Error::OpenLoop(turns));
    }
    Ok(k as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracks::uniform_grid;

    fn strand(space: &Space, m: usize, f: impl Fn(f64) -> f64) -> Vec<SpacePoint> {
        uniform_grid(m).into_iter().map(|t| space.coord(f(t)).unwrap()).collect()
    }

    #[test]
    fn examples() {
        let c = Space::circle(1.0).unwrap();
        assert_eq!(winding_number(&c, &strand(&c, 100, |_| 0.3)).unwrap(), 0);
        assert_eq!(winding_number(&c, &strand(&c, 100, |t| t)).unwrap(), 1);
        assert_eq!(winding_number(&c, &strand(&c, 100, |t| 2.0 * t)).unwrap(), 2);
        assert_eq!(winding_number(&c, &strand(&c, 100, |t| -t)).unwrap(), -1);
    }

    #[test]
    fn other_circumference() {
        let c = Space::circle(2.5).unwrap();
        assert_eq!(winding_number(&c, &strand(&c, 64, |t| -7.5 * t)).unwrap(), -3);
    }

    #[test]
    fn half_turn_steps_are_ambiguous() {
        let c = Space::circle(1.0).unwrap();
        let s = strand(&c, 2, |t| t);
        assert!(matches!(winding_number(&c, &s), Err(Error::AmbiguousLift { .. })));
    }

    #[test]
    fn open_paths_are_rejected() {
        let c = Space::circle(1.0).unwrap();
        let s = strand(&c, 10, |t| 0.3 * t);
        assert!(matches!(winding_number(&c, &s), Err(Error::OpenLoop(_))));
    }
}
