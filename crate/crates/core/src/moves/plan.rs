//! Continuous strand descriptions shared by normalization and the
//! contraction pipeline. Every stage is a closed-form function of `(s, t)`
//! built from the extracted strands, so consecutive stages agree exactly
//! on their common row.

use crate::error::{Error, Result};
use crate::ran::dedup_canonical;
use crate::space::{Space, SpacePoint};
use crate::tracks::winding::wrapped_step;
use crate::tracks::{
    detect_branch_merge, StrandBundle, Track, TrackKind, ENDPOINT_TOL,
};

use super::flow::{extract_strands, max_step};

/// A loop given either as sampled configurations or already split into
/// strands.
#[derive(Clone, Copy, Debug)]
pub enum LoopInput<'a> {
    Track(&'a Track),
    Bundle(&'a StrandBundle),
}

pub(crate) struct Plan {
    pub space: Space,
    pub b: SpacePoint,
    pub raw: StrandBundle,
    pub eps: f64,
    /// Whether the strands have to be pulled to `b` first.
    pub conj: bool,
    /// Strands that leave `b` once conjugated, in ascending order.
    pub moving: Vec<usize>,
    /// Whether moving strands are given disjoint time slots.
    pub separated: bool,
}

fn check_loop(bundle: &StrandBundle, tol: f64) -> Result<()> {
    let space = bundle.space();
    let first: Vec<SpacePoint> = bundle.strands().iter().map(|s| s[0]).collect();
    let last: Vec<SpacePoint> = bundle.strands().iter().map(|s| *s.last().unwrap()).collect();
    let a = dedup_canonical(space, &first, tol);
    let z = dedup_canonical(space, &last, tol);
    let gap = crate::ran::hausdorff_unchecked(space, a.points(), z.points());
    if gap > tol {
        return Err(Error::InvalidTrack(format!("input is not a loop: ends {gap} apart")));
    }
    Ok(())
}

impl Plan {
    pub fn build(
        input: LoopInput<'_>,
        b: SpacePoint,
        eps: f64,
        radius: Option<f64>,
        max_strands: Option<usize>,
        t_grid: &[f64],
    ) -> Result<Plan> {
        let raw = match input {
            LoopInput::Track(track) => {
                if track.kind() != TrackKind::Loop {
                    return Err(Error::InvalidTrack("expected a loop".into()));
                }
                let r = radius.unwrap_or(2.0 * max_step(track));
                extract_strands(track, r, max_strands.unwrap_or(track.cap()))?
            }
            LoopInput::Bundle(bundle) => {
                check_loop(bundle, ENDPOINT_TOL.max(eps))?;
                if let Some(cap) = max_strands {
                    if bundle.strand_count() > cap {
                        return Err(Error::CapExceeded {
                            size: bundle.strand_count(),
                            cap,
                        });
                    }
                }
                bundle.clone()
            }
        };
        let space = raw.space().clone();
        let b = space.canonical(b)?;
        let tol = ENDPOINT_TOL.max(eps);
        let based = raw.strands().iter().all(|s| {
            space.distance(&s[0], &b) <= tol && space.distance(s.last().unwrap(), &b) <= tol
        });
        let mut plan = Plan {
            space,
            b,
            raw,
            eps,
            conj: !based,
            moving: Vec::new(),
            separated: false,
        };
        plan.moving = (0..plan.strand_count())
            .filter(|&j| {
                plan.knots()
                    .iter()
                    .any(|&t| plan.space.distance(&plan.y(j, t), &plan.b) > tol)
            })
            .collect();
        plan.separated = plan.has_foreign_events(t_grid);
        Ok(plan)
    }

    pub fn strand_count(&self) -> usize {
        self.raw.strand_count()
    }

    pub fn x(&self, j: usize, t: f64) -> SpacePoint {
        self.raw.eval_strand(j, t)
    }

    /// Strand `j` of `gamma * sigma * gamma^{-1}` at stage `s`: the first and
    /// last thirds (scaled by `s`) run along geodesics between `b` and the
    /// strand's ends.
    pub fn conj_at(&self, j: usize, s: f64, t: f64) -> SpacePoint {
        if !self.conj {
            return self.x(j, t);
        }
        let a = s / 3.0;
        if a > 0.0 && t <= a {
            let u = t / a;
            self.space.geodesic(&self.b, &self.x(j, 0.0), 1.0 - s + s * u)
        } else if a > 0.0 && t >= 1.0 - a {
            let u = (t - (1.0 - a)) / a;
            self.space.geodesic(&self.b, &self.x(j, 1.0), 1.0 - s * u)
        } else {
            self.x(j, (t - a) / (1.0 - 2.0 * a))
        }
    }

    /// Strand `j` after conjugation.
    pub fn y(&self, j: usize, t: f64) -> SpacePoint {
        self.conj_at(j, 1.0, t)
    }

    /// Times between which every conjugated strand is a single geodesic.
    pub fn knots(&self) -> Vec<f64> {
        let times = self.raw.times();
        if !self.conj {
            return times.to_vec();
        }
        let mut k = vec![0.0];
        k.extend(times.iter().map(|t| (1.0 + t) / 3.0));
        k.push(1.0);
        k
    }

    fn slot_of(&self, j: usize) -> Option<usize> {
        self.moving.iter().position(|&m| m == j)
    }

    /// Time change putting the moving strands into disjoint slots.
    pub fn slot_warp(&self, j: usize, t: f64) -> f64 {
        match (self.separated, self.slot_of(j)) {
            (true, Some(i)) => {
                let k = self.moving.len() as f64;
                (k * t - i as f64).clamp(0.0, 1.0)
            }
            _ => t,
        }
    }

    /// Time change giving strand `j` the window `[j/n, (j+1)/n]`.
    pub fn window_warp(&self, j: usize, t: f64) -> f64 {
        let n = self.strand_count() as f64;
        (n * t - j as f64).clamp(0.0, 1.0)
    }

    /// Whether the slot and window time changes coincide on every moving
    /// strand.
    pub fn warps_agree(&self) -> bool {
        let n = self.strand_count();
        n == 1 || (self.separated && self.moving.len() == n)
    }

    /// Configuration of strand values, merged at `eps`.
    pub fn config(&self, pts: &[SpacePoint]) -> Vec<SpacePoint> {
        dedup_canonical(&self.space, pts, self.eps).points().to_vec()
    }

    /// The conjugated loop sampled on `t_grid`.
    pub fn conjugated_track(&self, t_grid: &[f64]) -> Track {
        let configs = t_grid
            .iter()
            .map(|&t| {
                let pts: Vec<SpacePoint> = (0..self.strand_count()).map(|j| self.y(j, t)).collect();
                dedup_canonical(&self.space, &pts, self.eps)
            })
            .collect();
        Track::with_tolerance(
            self.space.clone(),
            t_grid.to_vec(),
            configs,
            TrackKind::Loop,
            self.strand_count(),
            ENDPOINT_TOL.max(self.eps),
        )
        .expect("conjugated strands close up")
    }

    /// Branch or merge events of the conjugated loop away from `b`.
    fn has_foreign_events(&self, t_grid: &[f64]) -> bool {
        if self.moving.len() < 2 {
            return false;
        }
        let track = self.conjugated_track(t_grid);
        let radius = 2.0 * max_step(&track);
        if radius <= 0.0 {
            return false;
        }
        // Strands drifting apart near b register as events within a couple
        // of radii of it.
        let reach = 2.0 * radius + ENDPOINT_TOL.max(self.eps);
        detect_branch_merge(&track, radius, 1)
            .iter()
            .any(|e| self.space.distance(&e.point, &self.b) > reach)
    }

    /// Split points of the conjugated strand `j` into loops of degree
    /// `±1` on a circle: the first times its lift reaches each whole number
    /// of turns. Returns the breakpoints including 0 and 1.
    pub fn factor_breaks(&self, j: usize) -> Vec<f64> {
        let Some(c) = self.space.circumference() else {
            return vec![0.0, 1.0];
        };
        let b = self.b.coord().expect("circle point");
        let knots = self.knots();
        let mut lift = Vec::with_capacity(knots.len());
        let mut acc = wrapped_step(b, self.y(j, 0.0).coord().unwrap(), c);
        for w in knots.windows(2) {
            lift.push(acc);
            let here = self.y(j, w[0]).coord().unwrap();
            let mid = self.y(j, 0.5 * (w[0] + w[1])).coord().unwrap();
            let end = self.y(j, w[1]).coord().unwrap();
            acc += wrapped_step(here, mid, c) + wrapped_step(mid, end, c);
        }
        lift.push(acc);
        let turns = (acc / c).round() as i64;
        let mut breaks = vec![0.0];
        if turns.abs() > 1 {
            let sign = turns.signum() as f64;
            let mut level = 1;
            let mut k = 0;
            while level < turns.abs() && k + 1 < knots.len() {
                let target = sign * level as f64 * c;
                let (l0, l1) = (lift[k], lift[k + 1]);
                let crosses = if sign > 0.0 {
                    l0 < target && l1 >= target
                } else {
                    l0 > target && l1 <= target
                };
                if crosses {
                    let frac = (target - l0) / (l1 - l0);
                    let tau = knots[k] + frac * (knots[k + 1] - knots[k]);
                    if tau > *breaks.last().unwrap() && tau < 1.0 {
                        breaks.push(tau);
                    }
                    level += 1;
                } else {
                    k += 1;
                }
            }
        }
        breaks.push(1.0);
        breaks
    }
}
