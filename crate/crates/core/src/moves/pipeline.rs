use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ran::{hausdorff_unchecked, Configuration, DEDUP_EPS};
use crate::space::SpacePoint;
use crate::tracks::{
    check_continuity, uniform_grid, ContinuityReport, Homotopy, Track, ENDPOINT_TOL,
};

use super::generator::pushforward_cell;
use super::normalize::normalization_stages;
use super::plan::{LoopInput, Plan};
use super::stages::{run_stages, Stage, StageSummary};
use super::Resolution;

/// Default continuity bound, in Hausdorff distance per unit grid step.
pub const DEFAULT_BOUND: f64 = 1000.0;

/// Which statement a contraction certifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PipelineMode {
    /// A loop with at most `n` points per sample, contracted using at most
    /// `n + 2` points.
    Inclusion { n: usize },
    /// A loop with at most `n >= 4` points per sample, contracted without
    /// ever exceeding `n` points.
    SimplyConnected { n: usize },
}

impl PipelineMode {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PipelineMode::Inclusion { n: 0 } => {
                Err(Error::InvalidMode("inclusion needs n >= 1".into()))
            }
            PipelineMode::SimplyConnected { n } if n < 4 => Err(Error::InvalidMode(format!(
                "simply-connected mode needs n >= 4, got {n}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn source_cap(&self) -> usize {
        match *self {
            PipelineMode::Inclusion { n } | PipelineMode::SimplyConnected { n } => n,
        }
    }

    pub fn target_cap(&self) -> usize {
        match *self {
            PipelineMode::Inclusion { n } => n + 2,
            PipelineMode::SimplyConnected { n } => n,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PipelineOptions {
    pub resolution: Resolution,
    pub eps: f64,
    /// Matching radius for strand extraction; twice the largest step of
    /// the track when unset.
    pub radius: Option<f64>,
    /// Continuity bound passed to the continuity check.
    pub bound: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            resolution: Resolution::new(64, 128),
            eps: DEDUP_EPS,
            radius: None,
            bound: DEFAULT_BOUND,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionCertificate {
    pub mode: PipelineMode,
    pub declared_cap: usize,
    pub max_cardinality: usize,
    pub strands: usize,
    pub basepoint: SpacePoint,
    pub continuity: ContinuityReport,
    /// Distance between the input samples and the extracted strands.
    pub source_drift: f64,
    /// Distance of the last row from `{b}`.
    pub target_drift: f64,
    /// Largest gap between the two ends of a row.
    pub loop_drift: f64,
    /// Movement of the first column.
    pub basepoint_drift: f64,
    pub stages: Vec<StageSummary>,
    pub pass: bool,
}

fn staircase_stage<'a>(plan: &'a Plan) -> Stage<'a> {
    Stage {
        name: "staircase".into(),
        f: Box::new(move |s, t| {
            let pts: Vec<SpacePoint> = (0..plan.strand_count())
                .map(|j| plan.y(j, (1.0 - s) * plan.slot_warp(j, t) + s * plan.window_warp(j, t)))
                .collect();
            plan.config(&pts)
        }),
    }
}

/// Contraction of factor `f` of strand `j`, with earlier strands and
/// factors already at `b` and later ones waiting in their windows.
fn contraction_stage<'a>(plan: &'a Plan, j: usize, breaks: Vec<f64>, f: usize) -> Stage<'a> {
    let name = if breaks.len() > 2 {
        format!("contract strand {j} factor {f}")
    } else {
        format!("contract strand {j}")
    };
    Stage {
        name,
        f: Box::new(move |s, t| {
            let n = plan.strand_count();
            let mut pts = Vec::with_capacity(n + 3);
            for l in 0..n {
                if l < j {
                    pts.push(plan.b);
                } else if l > j {
                    pts.push(plan.y(l, plan.window_warp(l, t)));
                } else {
                    let u = plan.window_warp(j, t);
                    let q = (breaks.partition_point(|&x| x <= u).max(1) - 1).min(breaks.len() - 2);
                    if q < f {
                        pts.push(plan.b);
                    } else if q > f {
                        pts.push(plan.y(j, u));
                    } else {
                        let (lo, hi) = (breaks[f], breaks[f + 1]);
                        let theta = ((u - lo) / (hi - lo)).clamp(0.0, 1.0);
                        let loop_f = |x: f64| plan.y(j, lo + x * (hi - lo));
                        pushforward_cell(&loop_f, s, theta, &mut pts);
                    }
                }
            }
            plan.config(&pts)
        }),
    }
}

/// Contract a loop to the constant loop at `b`.
///
/// The loop is split into strands, pulled to `b` and separated where
/// needed, rescheduled so that one strand moves at a time, and then each
/// strand (each degree-one piece, on a circle) is contracted in turn by the
/// three-point contraction. Deformation steps are shared out in proportion
/// to how far each stage moves. Fails with `ModeViolation` when some cell has more
/// points than the mode allows.
pub fn contract_pipeline(
    input: &Track,
    mode: PipelineMode,
    b: SpacePoint,
    opts: &PipelineOptions,
) -> Result<(Homotopy, ContractionCertificate)> {
    mode.validate()?;
    if input.cap() > mode.source_cap() {
        return Err(Error::InvalidMode(format!(
            "input allows {} points per sample, mode expects at most {}",
            input.cap(),
            mode.source_cap()
        )));
    }
    let cap = mode.target_cap();
    let t_grid = uniform_grid(opts.resolution.cols);
    let plan = Plan::build(
        LoopInput::Track(input),
        b,
        opts.eps,
        opts.radius,
        Some(mode.source_cap()),
        &t_grid,
    )?;

    let mut stages = normalization_stages(&plan);
    if !plan.moving.is_empty() && !plan.warps_agree() {
        stages.push(staircase_stage(&plan));
    }
    for &j in &plan.moving {
        let breaks = plan.factor_breaks(j);
        for f in 0..breaks.len() - 1 {
            stages.push(contraction_stage(&plan, j, breaks.clone(), f));
        }
    }
    let (h, summary) = run_stages(
        &plan.space,
        stages,
        opts.resolution.rows,
        &t_grid,
        cap,
        opts.eps,
        || plan.conjugated_track(&t_grid),
    )?;

    let source_drift = input
        .times()
        .iter()
        .zip(input.configs())
        .map(|(&t, c)| {
            let pts: Vec<SpacePoint> = (0..plan.strand_count()).map(|j| plan.x(j, t)).collect();
            hausdorff_unchecked(&plan.space, c.points(), &plan.config(&pts))
        })
        .fold(0.0, f64::max);
    let continuity = check_continuity(&h, opts.bound);
    let hc = h.certificate();
    let target = Configuration::singleton(plan.b);
    let target_drift = h.target_drift(&target);
    let tol = ENDPOINT_TOL.max(opts.eps);
    let max_cardinality = continuity.max_cardinality;
    let pass = max_cardinality <= cap
        && continuity.pass
        && target_drift <= tol
        && hc.endpoint_drift <= tol;
    let cert = ContractionCertificate {
        mode,
        declared_cap: cap,
        max_cardinality,
        strands: plan.strand_count(),
        basepoint: plan.b,
        continuity,
        source_drift,
        target_drift,
        loop_drift: hc.endpoint_drift,
        basepoint_drift: hc.basepoint_drift,
        stages: summary,
        pass,
    };
    if max_cardinality > cap {
        return Err(Error::ModeViolation {
            observed: max_cardinality,
            cap,
        });
    }
    Ok((h, cert))
}
