use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ran::{hausdorff_unchecked, Configuration};
use crate::space::Space;

use super::Track;

/// A rectangular grid of configurations indexed by deformation row and time
/// column. A track is a grid with a single row.
pub trait CellGrid: Sync {
    fn space(&self) -> &Space;
    fn s_grid(&self) -> &[f64];
    fn t_grid(&self) -> &[f64];
    fn cell(&self, row: usize, col: usize) -> &Configuration;
}

impl CellGrid for Track {
    fn space(&self) -> &Space {
        &self.space
    }

    fn s_grid(&self) -> &[f64] {
        &[0.0]
    }

    fn t_grid(&self) -> &[f64] {
        &self.times
    }

    fn cell(&self, _row: usize, col: usize) -> &Configuration {
        &self.configs[col]
    }
}

/// Numerical evidence that a grid discretizes a continuous map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    /// Largest Hausdorff distance between grid-adjacent cells.
    pub max_gap: f64,
    /// Largest deformation step (0 for a single row).
    pub ds: f64,
    /// Largest time step.
    pub dt: f64,
    /// Largest ratio of an adjacent gap to its own grid step.
    pub implied_lipschitz: f64,
    pub max_cardinality: usize,
    pub bound: f64,
    /// `max_gap <= bound * max(ds, dt)`.
    pub pass: bool,
}

fn max_step(grid: &[f64]) -> f64 {
    grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

/// Hausdorff gaps between every pair of horizontally or vertically adjacent
/// cells, compared against `bound` per unit of grid step.
///
/// Rows are scanned in parallel; the reductions are maxima, so the report
/// does not depend on the schedule.
pub fn check_continuity<G: CellGrid + ?Sized>(grid: &G, bound: f64) -> ContinuityReport {
    let space = grid.space();
    let s = grid.s_grid();
    let t = grid.t_grid();
    let (gap, lip, card) = (0..s.len())
        .into_par_iter()
        .map(|i| {
            let mut gap: f64 = 0.0;
            let mut lip: f64 = 0.0;
            let mut card = 0usize;
            for j in 0..t.len() {
                let c = grid.cell(i, j);
                card = card.max(c.len());
                if j + 1 < t.len() {
                    let g = hausdorff_unchecked(space, c.points(), grid.cell(i, j + 1).points());
                    gap = gap.max(g);
                    lip = lip.max(g / (t[j + 1] - t[j]));
                }
                if i + 1 < s.len() {
                    let g = hausdorff_unchecked(space, c.points(), grid.cell(i + 1, j).points());
                    gap = gap.max(g);
                    lip = lip.max(g / (s[i + 1] - s[i]));
                }
            }
            (gap, lip, card)
        })
        .reduce(
            || (0.0, 0.0, 0),
            |a, b| (a.0.max(b.0), a.1.max(b.1), a.2.max(b.2)),
        );
    let ds = max_step(s);
    let dt = max_step(t);
    ContinuityReport {
        max_gap: gap,
        ds,
        dt,
        implied_lipschitz: lip,
        max_cardinality: card,
        bound,
        pass: gap <= bound * ds.max(dt),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpacePoint;
    use crate::tracks::{uniform_grid, TrackKind};

    fn circle() -> Space {
        Space::circle(1.0).unwrap()
    }

    fn track(space: &Space, times: Vec<f64>, f: impl Fn(f64) -> f64) -> Track {
        let pts: Vec<Vec<SpacePoint>> = times.iter().map(|&t| vec![space.coord(f(t)).unwrap()]).collect();
        Track::from_points(space.clone(), times, &pts, TrackKind::Path, 1, 1e-9).unwrap()
    }

    #[test]
    fn constant_track_has_no_gaps() {
        let c = circle();
        let t = track(&c, uniform_grid(10), |_| 0.3);
        let r = check_continuity(&t, 1e-6);
        assert_eq!(r.max_gap, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn unit_speed_generator() {
        let c = circle();
        let t = track(&c, uniform_grid(100), |t| t);
        let r = check_continuity(&t, 1.5);
        assert!((r.max_gap - 0.01).abs() < 1e-12);
        assert!((r.dt - 0.01).abs() < 1e-15);
        assert!(r.pass);
        assert!((r.implied_lipschitz - 1.0).abs() < 1e-9);
    }

    #[test]
    fn teleport_fails() {
        let c = circle();
        let t = track(&c, uniform_grid(100), |t| if t < 0.5 { 0.0 } else { 0.4 });
        let r = check_continuity(&t, 1.5);
        assert!((r.max_gap - 0.4).abs() < 1e-12);
        assert!(!r.pass);
    }

    #[test]
    fn refinement_keeps_the_lipschitz_estimate() {
        let c = circle();
        let coarse = track(&c, uniform_grid(32), |t| 0.3 * (6.0 * t).sin());
        let fine = track(&c, uniform_grid(64), |t| 0.3 * (6.0 * t).sin());
        let a = check_continuity(&coarse, 1.0).implied_lipschitz;
        let b = check_continuity(&fine, 1.0).implied_lipschitz;
        assert!(b <= 2.0 * a && a <= 2.0 * b);
    }
}
