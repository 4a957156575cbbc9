use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ran::{dedup_canonical, hausdorff_unchecked};
use crate::space::{Space, SpacePoint};
use crate::tracks::{uniform_grid, Homotopy, Track};

/// Deformation steps per stage on the probe grid.
const PROBE_ROWS: usize = 64;
/// Time samples on the probe grid.
const PROBE_COLS: usize = 256;
/// Fraction of the deformation spread evenly whatever the measured motion.
const FLOOR: f64 = 0.05;

pub(crate) type CellFn<'a> = Box<dyn Fn(f64, f64) -> Vec<SpacePoint> + Sync + 'a>;

pub(crate) struct Stage<'a> {
    pub name: String,
    pub f: CellFn<'a>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageSummary {
    pub name: String,
    /// Deformation steps starting inside the stage.
    pub steps: usize,
    pub max_cardinality: usize,
    /// Largest Hausdorff distance between adjacent cells of the stage.
    pub max_gap: f64,
}

/// Largest movement between consecutive probe rows of one stage, for every
/// probe step.
fn probe(space: &Space, stage: &Stage<'_>, eps: f64) -> Vec<f64> {
    let s = uniform_grid(PROBE_ROWS);
    let t = uniform_grid(PROBE_COLS);
    let rows: Vec<Vec<Vec<SpacePoint>>> = s
        .par_iter()
        .map(|&s| {
            t.iter()
                .map(|&t| dedup_canonical(space, &(stage.f)(s, t), eps).points().to_vec())
                .collect()
        })
        .collect();
    rows.windows(2)
        .map(|w| {
            w[0].iter()
                .zip(&w[1])
                .map(|(a, b)| hausdorff_unchecked(space, a, b))
                .fold(0.0, f64::max)
        })
        .collect()
}

/// Piecewise-linear map from the output deformation parameter to the stage
/// parameter `u` in `[0, k]` (stage `floor(u)` at local time `u - floor(u)`)
/// that spreads the probed movement evenly.
struct Schedule {
    /// Cumulative weight at every probe node, normalized to end at 1.
    cum: Vec<f64>,
    stages: usize,
}

impl Schedule {
    fn new(weights: Vec<f64>, stages: usize) -> Schedule {
        let total: f64 = weights.iter().sum();
        let floor = if total > 0.0 {
            FLOOR * total / weights.len() as f64
        } else {
            1.0
        };
        let mut cum = Vec::with_capacity(weights.len() + 1);
        let mut acc = 0.0;
        cum.push(0.0);
        for w in &weights {
            acc += w + floor;
            cum.push(acc);
        }
        for c in &mut cum {
            *c /= acc;
        }
        Schedule { cum, stages }
    }

    fn u(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        if s >= 1.0 {
            return self.stages as f64;
        }
        let i = self.cum.partition_point(|&c| c <= s).clamp(1, self.cum.len() - 1) - 1;
        let (a, b) = (self.cum[i], self.cum[i + 1]);
        let frac = if b > a { (s - a) / (b - a) } else { 0.0 };
        (i as f64 + frac) / PROBE_ROWS as f64
    }
}

fn split(u: f64, stages: usize) -> (usize, f64) {
    let k = (u.floor() as usize).min(stages - 1);
    (k, u - k as f64)
}

/// Evaluate the stages one after another on a single grid of `rows`
/// deformation steps. The deformation parameter is stretched so that rows
/// are spent where the configurations move most, as measured on a fixed
/// probe grid; the result therefore samples the same map at every
/// resolution. With no stages the result is the single row `fallback`.
pub(crate) fn run_stages(
    space: &Space,
    stages: Vec<Stage<'_>>,
    rows: usize,
    t_grid: &[f64],
    cap: usize,
    eps: f64,
    fallback: impl FnOnce() -> Track,
) -> Result<(Homotopy, Vec<StageSummary>)> {
    if stages.is_empty() {
        return Ok((Homotopy::constant(&fallback()).with_cap(cap), Vec::new()));
    }
    let k = stages.len();
    let weights: Vec<f64> = stages.iter().flat_map(|st| probe(space, st, eps)).collect();
    let schedule = Schedule::new(weights, k);
    let h = Homotopy::from_fn(space.clone(), uniform_grid(rows), t_grid.to_vec(), cap, eps, |s, t| {
        let (i, local) = split(schedule.u(s), k);
        (stages[i].f)(local, t)
    })?;

    let mut summary: Vec<StageSummary> = stages
        .iter()
        .map(|st| StageSummary {
            name: st.name.clone(),
            steps: 0,
            max_cardinality: 0,
            max_gap: 0.0,
        })
        .collect();
    let cells = h.cells();
    let s_grid = h.s_grid();
    for (i, row) in cells.iter().enumerate() {
        let (stage, local) = split(schedule.u(s_grid[i]), k);
        // A row on a junction belongs to both neighbours.
        let mut owners = vec![stage];
        if local == 0.0 && stage > 0 {
            owners.push(stage - 1);
        }
        let card = row.iter().map(|c| c.len()).max().unwrap_or(0);
        let t_gap = row
            .windows(2)
            .map(|w| hausdorff_unchecked(space, w[0].points(), w[1].points()))
            .fold(0.0, f64::max);
        for &o in &owners {
            summary[o].max_cardinality = summary[o].max_cardinality.max(card);
            summary[o].max_gap = summary[o].max_gap.max(t_gap);
        }
        if let Some(next) = cells.get(i + 1) {
            let s_gap = row
                .iter()
                .zip(next)
                .map(|(a, b)| hausdorff_unchecked(space, a.points(), b.points()))
                .fold(0.0, f64::max);
            summary[stage].steps += 1;
            summary[stage].max_gap = summary[stage].max_gap.max(s_gap);
        }
    }
    Ok((h, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_follows_the_weights() {
        let mut w = vec![0.0; 2 * PROBE_ROWS];
        for x in &mut w[PROBE_ROWS..] {
            *x = 1.0;
        }
        let sch = Schedule::new(w, 2);
        assert_eq!(sch.u(0.0), 0.0);
        assert_eq!(sch.u(1.0), 2.0);
        // The still first stage gets only its floor share.
        let share = FLOOR / (2.0 * (1.0 + FLOOR));
        assert!((sch.u(share) - 1.0).abs() < 1e-9);
        let mut prev = 0.0;
        for i in 1..=100 {
            let u = sch.u(i as f64 / 100.0);
            assert!(u > prev);
            prev = u;
        }
    }

    #[test]
    fn motionless_stages_are_spread_evenly() {
        let sch = Schedule::new(vec![0.0; 3 * PROBE_ROWS], 3);
        assert!((sch.u(0.5) - 1.5).abs() < 1e-12);
    }
}
