//! Discretized paths and loops of configurations, strand bundles,
//! homotopy grids and the numerical checks run on them.

mod branch;
mod bundle;
mod continuity;
mod homotopy;
pub(crate) mod winding;

pub use branch::{detect_branch_merge, BranchEvent, EventKind};
pub use bundle::{project, StrandBundle};
pub use continuity::{check_continuity, CellGrid, ContinuityReport};
pub use homotopy::{Homotopy, HomotopyCertificate};
pub use winding::winding_number;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ran::{hausdorff_unchecked, Configuration};
use crate::space::{Space, SpacePoint};

/// Default tolerance for loop closure and endpoint matching.
pub const ENDPOINT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrackKind {
    Path,
    Loop,
}

/// A sampled map `[0, 1] -> Ran_{<=cap}(X)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Track {
    space: Space,
    times: Vec<f64>,
    configs: Vec<Configuration>,
    kind: TrackKind,
    cap: usize,
}

pub(crate) fn check_time_grid(times: &[f64]) -> Result<()> {
    if times.len() < 2 {
        return Err(Error::InvalidTrack("time grid needs at least two samples".into()));
    }
    if times[0] != 0.0 || *times.last().unwrap() != 1.0 {
        return Err(Error::InvalidTrack("time grid must start at 0 and end at 1".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) || times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidTrack("time grid must be strictly increasing".into()));
    }
    Ok(())
}

/// `n + 1` evenly spaced times on `[0, 1]`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n).map(|i| i as f64 / n as f64).collect()
}

impl Track {
    pub fn new(
        space: Space,
        times: Vec<f64>,
        configs: Vec<Configuration>,
        kind: TrackKind,
        cap: usize,
    ) -> Result<Track> {
        Track::with_tolerance(space, times, configs, kind, cap, ENDPOINT_TOL)
    }

    pub fn with_tolerance(
        space: Space,
        times: Vec<f64>,
        configs: Vec<Configuration>,
        kind: TrackKind,
        cap: usize,
        closure_tol: f64,
    ) -> Result<Track> {
        check_time_grid(&times)?;
        if configs.len() != times.len() {
            return Err(Error::InvalidTrack(format!(
                "{} configurations for {} times",
                configs.len(),
                times.len()
            )));
        }
        let configs = configs
            .into_iter()
            .map(|c| {
                if !c.points().iter().all(|p| space.accepts(p)) {
                    return Err(Error::SpaceMismatch);
                }
                c.with_cap(cap)
            })
            .collect::<Result<Vec<_>>>()?;
        if kind == TrackKind::Loop {
            let gap = hausdorff_unchecked(
                &space,
                configs[0].points(),
                configs.last().unwrap().points(),
            );
            if gap > closure_tol {
                return Err(Error::InvalidTrack(format!(
                    "loop does not close: endpoint gap {gap}"
                )));
            }
        }
        Ok(Track {
            space,
            times,
            configs,
            kind,
            cap,
        })
    }

    /// A track from per-sample point lists (merged at `eps`).
    pub fn from_points(
        space: Space,
        times: Vec<f64>,
        points: &[Vec<SpacePoint>],
        kind: TrackKind,
        cap: usize,
        eps: f64,
    ) -> Result<Track> {
        let configs = points
            .iter()
            .map(|ps| crate::ran::dedup(&space, ps, eps))
            .collect::<Result<Vec<_>>>()?;
        Track::new(space, times, configs, kind, cap)
    }

    pub fn constant(space: Space, p: SpacePoint, kind: TrackKind) -> Result<Track> {
        let p = space.canonical(p)?;
        let c = Configuration::singleton(p);
        Track::new(space, vec![0.0, 1.0], vec![c.clone(), c], kind, 1)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn configs(&self) -> &[Configuration] {
        &self.configs
    }

    pub fn kind(&self) -> TrackKind {
        self.kind
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn first(&self) -> &Configuration {
        &self.configs[0]
    }

    pub fn last(&self) -> &Configuration {
        self.configs.last().unwrap()
    }

    pub fn max_cardinality(&self) -> usize {
        self.configs.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    /// Configuration in effect at time `t`: the last sample at or before `t`.
    pub fn sample_at(&self, t: f64) -> &Configuration {
        let idx = self.times.partition_point(|&x| x <= t);
        &self.configs[idx.saturating_sub(1)]
    }

    /// Carry-forward resampling onto another grid.
    pub fn resample(&self, times: &[f64]) -> Result<Track> {
        check_time_grid(times)?;
        let configs = times.iter().map(|&t| self.sample_at(t).clone()).collect();
        Track::new(self.space.clone(), times.to_vec(), configs, self.kind, self.cap)
    }

    /// The same track traversed backwards.
    pub fn reverse(&self) -> Track {
        let times = self.times.iter().rev().map(|t| 1.0 - t).collect();
        let configs = self.configs.iter().rev().cloned().collect();
        Track {
            space: self.space.clone(),
            times,
            configs,
            kind: self.kind,
            cap: self.cap,
        }
    }

    /// Winding number of a singleton track on the circle.
    pub fn winding_number(&self) -> Result<i64> {
        let strand = self
            .configs
            .iter()
            .map(|c| {
                if c.len() == 1 {
                    Ok(c.points()[0])
                } else {
                    Err(Error::InvalidTrack(
                        "winding number needs a single point per sample".into(),
                    ))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        winding_number(&self.space, &strand)
    }
}

fn junction_gap(a: &Configuration, b: &Configuration, space: &Space) -> f64 {
    hausdorff_unchecked(space, a.points(), b.points())
}

/// `a` on `[0, 1/2]` followed by `b` on `[1/2, 1]`.
pub fn concatenate(a: &Track, b: &Track, tol: f64) -> Result<Track> {
    if a.space != b.space {
        return Err(Error::SpaceMismatch);
    }
    let gap = junction_gap(a.last(), b.first(), &a.space);
    if gap > tol {
        return Err(Error::EndpointMismatch(format!(
            "end of the first track is {gap} away from the start of the second"
        )));
    }
    let mut times: Vec<f64> = a.times.iter().map(|t| t / 2.0).collect();
    times.extend(b.times[1..].iter().map(|t| 0.5 + t / 2.0));
    *times.last_mut().unwrap() = 1.0;
    let mut configs = a.configs.clone();
    configs.extend(b.configs[1..].iter().cloned());
    let cap = a.cap.max(b.cap);
    let kind = if junction_gap(&configs[0], configs.last().unwrap(), &a.space) <= tol {
        TrackKind::Loop
    } else {
        TrackKind::Path
    };
    Track::with_tolerance(a.space.clone(), times, configs, kind, cap, tol)
}

/// The loop `gamma * sigma * gamma^{-1}`, based at `gamma(0)`, with each
/// piece given a third of the unit interval.
pub fn conjugate(gamma: &Track, sigma: &Track, tol: f64) -> Result<Track> {
    if gamma.space != sigma.space {
        return Err(Error::SpaceMismatch);
    }
    if sigma.kind != TrackKind::Loop {
        return Err(Error::InvalidTrack("conjugated track must be a loop".into()));
    }
    let gap = junction_gap(gamma.last(), sigma.first(), &gamma.space);
    if gap > tol {
        return Err(Error::EndpointMismatch(format!(
            "path ends {gap} away from the loop's basepoint"
        )));
    }
    let back = gamma.reverse();
    let third = 1.0 / 3.0;
    let mut times: Vec<f64> = gamma.times.iter().map(|t| t * third).collect();
    let mut configs = gamma.configs.clone();
    times.extend(sigma.times[1..].iter().map(|t| third + t * third));
    configs.extend(sigma.configs[1..].iter().cloned());
    times.extend(back.times[1..].iter().map(|t| 2.0 * third + t * third));
    configs.extend(back.configs[1..].iter().cloned());
    *times.last_mut().unwrap() = 1.0;
    let cap = gamma.cap.max(sigma.cap);
    Track::with_tolerance(gamma.space.clone(), times, configs, TrackKind::Loop, cap, tol)
}
