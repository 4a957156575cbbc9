use crate::error::{Error, Result};
use crate::ran::dedup_canonical;
use crate::space::{Space, SpacePoint};

use super::{check_time_grid, Track, TrackKind, ENDPOINT_TOL};

/// `n` coordinate paths sampled on a shared time grid: a sampled map
/// `[0, 1] -> X^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct StrandBundle {
    space: Space,
    times: Vec<f64>,
    strands: Vec<Vec<SpacePoint>>,
}

impl StrandBundle {
    pub fn new(space: Space, times: Vec<f64>, strands: Vec<Vec<SpacePoint>>) -> Result<StrandBundle> {
        check_time_grid(&times)?;
        if strands.is_empty() {
            return Err(Error::InvalidTrack("bundle has no strands".into()));
        }
        let strands = strands
            .into_iter()
            .map(|s| {
                if s.len() != times.len() {
                    return Err(Error::InvalidTrack(format!(
                        "strand has {} samples for {} times",
                        s.len(),
                        times.len()
                    )));
                }
                s.into_iter().map(|p| space.canonical(p)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StrandBundle {
            space,
            times,
            strands,
        })
    }

    /// Sample continuous strands on a grid.
    pub fn from_fn<F>(space: Space, times: Vec<f64>, count: usize, f: F) -> Result<StrandBundle>
    where
        F: Fn(usize, f64) -> SpacePoint,
    {
        let strands = (0..count)
            .map(|j| times.iter().map(|&t| f(j, t)).collect())
            .collect();
        StrandBundle::new(space, times, strands)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn strands(&self) -> &[Vec<SpacePoint>] {
        &self.strands
    }

    pub fn strand_count(&self) -> usize {
        self.strands.len()
    }

    /// Position of strand `j` at time `t`, interpolating along geodesics
    /// between samples.
    pub fn eval_strand(&self, j: usize, t: f64) -> SpacePoint {
        let strand = &self.strands[j];
        if t <= 0.0 {
            return strand[0];
        }
        if t >= 1.0 {
            return *strand.last().unwrap();
        }
        let i = self.times.partition_point(|&x| x <= t).clamp(1, self.times.len() - 1);
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let frac = (t - t0) / (t1 - t0);
        self.space.geodesic(&strand[i - 1], &strand[i], frac)
    }

    /// Positions of every strand at time `t`.
    pub fn eval(&self, t: f64) -> Vec<SpacePoint> {
        (0..self.strands.len()).map(|j| self.eval_strand(j, t)).collect()
    }

    /// The common start/end point of every strand, if there is one.
    pub fn basepoint(&self, tol: f64) -> Option<SpacePoint> {
        let b = self.strands[0][0];
        let ok = self.strands.iter().all(|s| {
            self.space.distance(&s[0], &b) <= tol && self.space.distance(s.last().unwrap(), &b) <= tol
        });
        ok.then_some(b)
    }

    /// Whether strand `j` stays within `tol` of its start.
    pub fn is_constant_strand(&self, j: usize, tol: f64) -> bool {
        let s = &self.strands[j];
        s.iter().all(|p| self.space.distance(p, &s[0]) <= tol)
    }
}

/// Forget the labelling: each sample becomes the set of strand positions.
///
/// The cap of the resulting track is the strand count; it is a loop when the
/// first and last configurations agree.
pub fn project(bundle: &StrandBundle, eps: f64) -> Track {
    let n = bundle.strands.len();
    let configs: Vec<_> = (0..bundle.times.len())
        .map(|i| {
            let pts: Vec<SpacePoint> = bundle.strands.iter().map(|s| s[i]).collect();
            dedup_canonical(&bundle.space, &pts, eps)
        })
        .collect();
    let closed = crate::ran::hausdorff_unchecked(
        &bundle.space,
        configs[0].points(),
        configs.last().unwrap().points(),
    ) <= ENDPOINT_TOL.max(eps);
    let kind = if closed { TrackKind::Loop } else { TrackKind::Path };
    Track::with_tolerance(
        bundle.space.clone(),
        bundle.times.clone(),
        configs,
        kind,
        n,
        ENDPOINT_TOL.max(eps),
    )
    .expect("projection of a valid bundle is a valid track")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracks::uniform_grid;

    fn circle() -> Space {
        Space::circle(1.0).unwrap()
    }

    #[test]
    fn constant_bundle_projects_to_constant_track() {
        let c = circle();
        let b = c.origin();
        let bundle = StrandBundle::from_fn(c.clone(), uniform_grid(16), 3, |_, _| b).unwrap();
        let track = project(&bundle, 1e-9);
        assert!(track.configs().iter().all(|conf| conf.points() == [b]));
        assert_eq!(track.cap(), 3);
        assert_eq!(track.kind(), TrackKind::Loop);
    }

    #[test]
    fn equal_strands_collapse() {
        let c = circle();
        let bundle =
            StrandBundle::from_fn(c.clone(), uniform_grid(64), 2, |_, t| c.coord(t).unwrap()).unwrap();
        let track = project(&bundle, 1e-9);
        assert!(track.configs().iter().all(|conf| conf.len() == 1));
    }

    #[test]
    fn antipodal_strands_stay_distinct() {
        let c = circle();
        let bundle = StrandBundle::from_fn(c.clone(), uniform_grid(64), 2, |j, t| {
            c.coord(t + 0.5 * j as f64).unwrap()
        })
        .unwrap();
        let track = project(&bundle, 1e-9);
        assert!(track.configs().iter().all(|conf| conf.len() == 2));
    }

    #[test]
    fn interpolation_hits_samples_and_midpoints() {
        let c = circle();
        let bundle = StrandBundle::from_fn(c.clone(), uniform_grid(4), 1, |_, t| c.coord(0.8 * t).unwrap()).unwrap();
        assert_eq!(bundle.eval_strand(0, 0.25), bundle.strands()[0][1]);
        let mid = bundle.eval_strand(0, 0.125);
        assert!(c.distance(&mid, &c.coord(0.1).unwrap()) < 1e-12);
    }

    #[test]
    fn ragged_bundles_are_rejected() {
        let c = circle();
        let res = StrandBundle::new(c.clone(), uniform_grid(2), vec![vec![c.origin(); 2]]);
        assert!(res.is_err());
    }
}
