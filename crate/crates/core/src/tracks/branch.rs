use serde::{Deserialize, Serialize};

use crate::ran::Configuration;
use crate::space::{Space, SpacePoint};

use super::Track;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Branch,
    Merge,
}

impl EventKind {
    pub fn swapped(self) -> EventKind {
        match self {
            EventKind::Branch => EventKind::Merge,
            EventKind::Merge => EventKind::Branch,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchEvent {
    /// Index into the track's time grid.
    pub index: usize,
    pub point: SpacePoint,
    pub kind: EventKind,
}

fn ball_count(space: &Space, p: &SpacePoint, radius: f64, c: &Configuration) -> usize {
    c.points().iter().filter(|q| space.distance(p, q) < radius).count()
}

/// Sampled branch and merge points.
///
/// A point `p` of the configuration at index `i` is a branch when the open
/// ball of the given radius around it holds no other point of that
/// configuration but at least two points of some configuration up to
/// `lookahead` samples later. Merges are the same test run backwards.
/// Events come sorted by index, then point, with branches first.
pub fn detect_branch_merge(track: &Track, radius: f64, lookahead: usize) -> Vec<BranchEvent> {
    let space = track.space();
    let configs = track.configs();
    let m = configs.len();
    let mut events = Vec::new();
    for (i, c) in configs.iter().enumerate() {
        for p in c.points() {
            if ball_count(space, p, radius, c) != 1 {
                continue;
            }
            let ahead = (1..=lookahead)
                .take_while(|k| i + k < m)
                .any(|k| ball_count(space, p, radius, &configs[i + k]) >= 2);
            if ahead {
                events.push(BranchEvent { index: i, point: *p, kind: EventKind::Branch });
            }
            let behind = (1..=lookahead)
                .take_while(|&k| k <= i)
                .any(|k| ball_count(space, p, radius, &configs[i - k]) >= 2);
            if behind {
                events.push(BranchEvent { index: i, point: *p, kind: EventKind::Merge });
            }
        }
    }
    events
}
