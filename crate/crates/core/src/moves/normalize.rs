use crate::error::Result;
use crate::ran::DEDUP_EPS;
use crate::space::SpacePoint;
use crate::tracks::{uniform_grid, Homotopy, StrandBundle};

use super::plan::{LoopInput, Plan};
use super::stages::{run_stages, Stage};
use super::Resolution;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizeOptions {
    pub resolution: Resolution,
    /// Collision scale for merging strand values.
    pub eps: f64,
    /// Matching radius for strand extraction; twice the largest step of
    /// the track when unset.
    pub radius: Option<f64>,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions {
            resolution: Resolution::new(64, 128),
            eps: DEDUP_EPS,
            radius: None,
        }
    }
}

pub(crate) fn conjugation_stage<'a>(plan: &'a Plan) -> Stage<'a> {
    Stage {
        name: "conjugate".into(),
        f: Box::new(move |s, t| {
            let pts: Vec<SpacePoint> = (0..plan.strand_count()).map(|j| plan.conj_at(j, s, t)).collect();
            plan.config(&pts)
        }),
    }
}

pub(crate) fn separation_stage<'a>(plan: &'a Plan) -> Stage<'a> {
    Stage {
        name: "separate".into(),
        f: Box::new(move |s, t| {
            let pts: Vec<SpacePoint> = (0..plan.strand_count())
                .map(|j| plan.y(j, (1.0 - s) * t + s * plan.slot_warp(j, t)))
                .collect();
            plan.config(&pts)
        }),
    }
}

pub(crate) fn normalization_stages(plan: &Plan) -> Vec<Stage<'_>> {
    let mut stages = Vec::new();
    if plan.conj {
        stages.push(conjugation_stage(plan));
    }
    if plan.separated {
        stages.push(separation_stage(plan));
    }
    stages
}

/// Rewrite a loop as strands that all start and end at `b`.
///
/// The loop is first conjugated by the path that pulls every point of its
/// starting configuration to `b` along geodesics. If strands then still
/// split or join away from `b`, the moving strands are given disjoint time
/// slots so that at most one leaves `b` at a time. Returns the strands
/// sampled on the time grid of the resolution, and the homotopy from the
/// input to their projection. An input that needs neither step comes back
/// unchanged with a one-row homotopy.
pub fn normalize(
    input: LoopInput<'_>,
    b: SpacePoint,
    opts: &NormalizeOptions,
) -> Result<(StrandBundle, Homotopy)> {
    let t_grid = uniform_grid(opts.resolution.cols);
    let plan = Plan::build(input, b, opts.eps, opts.radius, None, &t_grid)?;
    let n = plan.strand_count();
    if !plan.conj && !plan.separated {
        if let LoopInput::Bundle(bundle) = input {
            let h = Homotopy::constant(&crate::tracks::project(bundle, opts.eps));
            return Ok((bundle.clone(), h));
        }
    }
    let stages = normalization_stages(&plan);
    let (h, _) = run_stages(
        &plan.space,
        stages,
        opts.resolution.rows,
        &t_grid,
        n,
        opts.eps,
        || plan.conjugated_track(&t_grid),
    )?;
    let bundle = StrandBundle::from_fn(plan.space.clone(), t_grid.clone(), n, |j, t| {
        plan.y(j, plan.slot_warp(j, t))
    })?;
    Ok((bundle, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Space;
    use crate::tracks::{detect_branch_merge, project, Track, TrackKind};

    fn circle() -> Space {
        Space::circle(1.0).unwrap()
    }

    fn track(space: &Space, m: usize, f: impl Fn(f64) -> Vec<f64>, cap: usize) -> Track {
        let times = uniform_grid(m);
        let pts: Vec<Vec<SpacePoint>> = times
            .iter()
            .map(|&t| f(t).into_iter().map(|x| space.coord(x).unwrap()).collect())
            .collect();
        Track::from_points(space.clone(), times, &pts, TrackKind::Loop, cap, 1e-9).unwrap()
    }

    #[test]
    fn based_bundle_is_returned_unchanged() {
        let c = circle();
        let bundle = StrandBundle::from_fn(c.clone(), uniform_grid(32), 2, |j, t| {
            c.coord((j + 1) as f64 * t).unwrap()
        })
        .unwrap();
        let (out, h) = normalize(LoopInput::Bundle(&bundle), c.origin(), &NormalizeOptions::default()).unwrap();
        assert_eq!(out, bundle);
        assert_eq!(h.rows(), 1);
    }

    #[test]
    fn generator_based_elsewhere_is_conjugated() {
        let c = circle();
        let t = track(&c, 64, |t| vec![0.1 + t], 1);
        let (out, h) = normalize(LoopInput::Track(&t), c.origin(), &NormalizeOptions::default()).unwrap();
        assert_eq!(out.strand_count(), 1);
        assert_eq!(out.basepoint(1e-12), Some(c.origin()));
        let p = project(&out, 1e-9);
        assert_eq!(p.kind(), TrackKind::Loop);
        assert_eq!(p.first().len(), 1);
        assert_eq!(p.winding_number().unwrap(), 1);
        assert!(h.rows() > 1);
        for i in 0..h.rows() {
            assert_eq!(h.row(i).kind(), TrackKind::Loop);
        }
    }

    #[test]
    fn branching_away_from_the_basepoint_is_removed() {
        let c = circle();
        let input = track(
            &c,
            128,
            |t| {
                let h = (t - 0.5).max(0.0).min(1.0 - t);
                vec![0.3 - h, 0.3 + h]
            },
            2,
        );
        let before = detect_branch_merge(&input, 0.02, 1);
        assert!(before.iter().any(|e| c.distance(&e.point, &c.coord(0.3).unwrap()) < 1e-12));
        let (out, _) = normalize(LoopInput::Track(&input), c.origin(), &NormalizeOptions::default()).unwrap();
        assert_eq!(out.strand_count(), 2);
        assert_eq!(out.basepoint(1e-12), Some(c.origin()));
        let p = project(&out, 1e-9);
        let events = detect_branch_merge(&p, 0.02, 1);
        assert!(events.iter().all(|e| e.index == 0 || c.distance(&e.point, &c.origin()) <= 1e-9));
    }

    #[test]
    fn normalizing_twice_changes_nothing() {
        let c = circle();
        let input = track(&c, 64, |t| vec![0.2 + t, 0.7 - t], 2);
        let opts = NormalizeOptions::default();
        let (once, _) = normalize(LoopInput::Track(&input), c.origin(), &opts).unwrap();
        let (twice, h) = normalize(LoopInput::Bundle(&once), c.origin(), &opts).unwrap();
        assert_eq!(twice, once);
        assert_eq!(h.rows(), 1);
    }
}
