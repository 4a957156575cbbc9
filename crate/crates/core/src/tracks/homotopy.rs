use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ran::{dedup_canonical, hausdorff_unchecked, Configuration};
use crate::space::{Space, SpacePoint};

use super::{check_time_grid, CellGrid, Track, TrackKind, ENDPOINT_TOL};

/// A sampled map `[0, 1] x [0, 1] -> Ran(X)`: row `i` is the track at
/// deformation parameter `s_grid[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Homotopy {
    space: Space,
    s_grid: Vec<f64>,
    t_grid: Vec<f64>,
    cells: Vec<Vec<Configuration>>,
    cap: usize,
}

/// Quantities recomputed from the cells of a homotopy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomotopyCertificate {
    pub max_cardinality: usize,
    pub max_adjacent_gap: f64,
    pub implied_lipschitz: f64,
    /// Largest distance between the first and last cell of a row.
    pub endpoint_drift: f64,
    /// Largest distance of a cell in the first or last column from the
    /// cell at `(0, 0)`.
    pub basepoint_drift: f64,
}

fn check_s_grid(s: &[f64]) -> Result<()> {
    if s == [0.0] {
        return Ok(());
    }
    check_time_grid(s).map_err(|_| {
        Error::InvalidTrack("deformation grid must be [0] or increase from 0 to 1".into())
    })
}

impl Homotopy {
    /// Cells are not held to `cap`; use [`Homotopy::certificate`] to compare
    /// the observed cardinality with it.
    pub fn new(
        space: Space,
        s_grid: Vec<f64>,
        t_grid: Vec<f64>,
        cells: Vec<Vec<Configuration>>,
        cap: usize,
    ) -> Result<Homotopy> {
        check_s_grid(&s_grid)?;
        check_time_grid(&t_grid)?;
        if cells.len() != s_grid.len() || cells.iter().any(|r| r.len() != t_grid.len()) {
            return Err(Error::InvalidTrack(format!(
                "cell grid does not match {} x {} sample grid",
                s_grid.len(),
                t_grid.len()
            )));
        }
        let cells = cells
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|c| {
                        if !c.points().iter().all(|p| space.accepts(p)) {
                            return Err(Error::SpaceMismatch);
                        }
                        let k = c.len().max(cap);
                        c.with_cap(k)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Homotopy {
            space,
            s_grid,
            t_grid,
            cells,
            cap,
        })
    }

    /// Evaluate `f(s, t)` on every grid node, merging points closer than
    /// `eps`. Rows are computed in parallel.
    pub fn from_fn<F>(
        space: Space,
        s_grid: Vec<f64>,
        t_grid: Vec<f64>,
        cap: usize,
        eps: f64,
        f: F,
    ) -> Result<Homotopy>
    where
        F: Fn(f64, f64) -> Vec<SpacePoint> + Sync,
    {
        check_s_grid(&s_grid)?;
        check_time_grid(&t_grid)?;
        let cells = s_grid
            .par_iter()
            .map(|&s| {
                t_grid
                    .iter()
                    .map(|&t| {
                        let pts = f(s, t)
                            .into_iter()
                            .map(|p| space.canonical(p))
                            .collect::<Result<Vec<_>>>()?;
                        if pts.is_empty() {
                            return Err(Error::EmptyConfiguration);
                        }
                        Ok(dedup_canonical(&space, &pts, eps))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Homotopy::new(space, s_grid, t_grid, cells, cap)
    }

    /// The one-row homotopy consisting of `track` alone.
    pub fn constant(track: &Track) -> Homotopy {
        Homotopy {
            space: track.space().clone(),
            s_grid: vec![0.0],
            t_grid: track.times().to_vec(),
            cells: vec![track.configs().to_vec()],
            cap: track.cap(),
        }
    }

    /// Every row equal to `track`.
    pub fn identity(track: &Track, s_grid: Vec<f64>) -> Result<Homotopy> {
        check_s_grid(&s_grid)?;
        let cells = vec![track.configs().to_vec(); s_grid.len()];
        Homotopy::new(track.space().clone(), s_grid, track.times().to_vec(), cells, track.cap())
    }

    /// Run the parts one after another in `s`. Each part gets a share of
    /// `[0, 1]` proportional to its number of steps; single-row parts are
    /// absorbed. Time grids must agree and consecutive rows must match
    /// within `tol`.
    pub fn stack(parts: &[Homotopy], tol: f64) -> Result<Homotopy> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("nothing to stack".into()))?;
        for p in parts {
            if p.space != first.space {
                return Err(Error::SpaceMismatch);
            }
            if p.t_grid != first.t_grid {
                return Err(Error::InvalidTrack("stacked homotopies need one time grid".into()));
            }
        }
        for w in parts.windows(2) {
            let a = w[0].cells.last().unwrap();
            let b = &w[1].cells[0];
            let gap = a
                .iter()
                .zip(b)
                .map(|(x, y)| hausdorff_unchecked(&first.space, x.points(), y.points()))
                .fold(0.0, f64::max);
            if gap > tol {
                return Err(Error::EndpointMismatch(format!(
                    "consecutive stages differ by {gap}"
                )));
            }
        }
        let steps: usize = parts.iter().map(|p| p.s_grid.len() - 1).sum();
        let cap = parts.iter().map(|p| p.cap).max().unwrap();
        if steps == 0 {
            let mut out = first.clone();
            out.cap = cap;
            return Ok(out);
        }
        let mut s_grid = vec![0.0];
        let mut cells = vec![first.cells[0].clone()];
        let mut done = 0usize;
        for p in parts {
            let k = p.s_grid.len() - 1;
            for i in 1..=k {
                let local = p.s_grid[i];
                s_grid.push((done as f64 + local * k as f64) / steps as f64);
                cells.push(p.cells[i].clone());
            }
            done += k;
        }
        *s_grid.last_mut().unwrap() = 1.0;
        Homotopy::new(first.space.clone(), s_grid, first.t_grid.clone(), cells, cap)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn s_grid(&self) -> &[f64] {
        &self.s_grid
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn cells(&self) -> &[Vec<Configuration>] {
        &self.cells
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn rows(&self) -> usize {
        self.s_grid.len()
    }

    pub fn with_cap(mut self, cap: usize) -> Homotopy {
        self.cap = cap;
        for c in self.cells.iter_mut().flatten() {
            let k = c.len().max(cap);
            *c = c.clone().with_cap(k).expect("cap covers the cell");
        }
        self
    }

    /// Row `i` as a track; it is a loop when its ends agree.
    pub fn row(&self, i: usize) -> Track {
        let row = &self.cells[i];
        let cap = row.iter().map(|c| c.len()).max().unwrap_or(1).max(self.cap);
        let closed =
            hausdorff_unchecked(&self.space, row[0].points(), row.last().unwrap().points())
                <= ENDPOINT_TOL;
        let kind = if closed { TrackKind::Loop } else { TrackKind::Path };
        Track::new(self.space.clone(), self.t_grid.clone(), row.clone(), kind, cap)
            .expect("homotopy rows are valid tracks")
    }

    pub fn first_row(&self) -> Track {
        self.row(0)
    }

    pub fn last_row(&self) -> Track {
        self.row(self.rows() - 1)
    }

    pub fn max_cardinality(&self) -> usize {
        self.cells.iter().flatten().map(|c| c.len()).max().unwrap_or(0)
    }

    /// Largest distance of any cell in the last row from `target`.
    pub fn target_drift(&self, target: &Configuration) -> f64 {
        self.cells
            .last()
            .unwrap()
            .iter()
            .map(|c| hausdorff_unchecked(&self.space, c.points(), target.points()))
            .fold(0.0, f64::max)
    }

    pub fn certificate(&self) -> HomotopyCertificate {
        let report = super::check_continuity(self, 0.0);
        let base = &self.cells[0][0];
        let (endpoint, basepoint) = self
            .cells
            .par_iter()
            .map(|row| {
                let first = &row[0];
                let last = row.last().unwrap();
                let e = hausdorff_unchecked(&self.space, first.points(), last.points());
                let b = hausdorff_unchecked(&self.space, first.points(), base.points())
                    .max(hausdorff_unchecked(&self.space, last.points(), base.points()));
                (e, b)
            })
            .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
        HomotopyCertificate {
            max_cardinality: report.max_cardinality,
            max_adjacent_gap: report.max_gap,
            implied_lipschitz: report.implied_lipschitz,
            endpoint_drift: endpoint,
            basepoint_drift: basepoint,
        }
    }
}

impl CellGrid for Homotopy {
    fn space(&self) -> &Space {
        &self.space
    }

    fn s_grid(&self) -> &[f64] {
        &self.s_grid
    }

    fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    fn cell(&self, row: usize, col: usize) -> &Configuration {
        &self.cells[row][col]
    }
}
