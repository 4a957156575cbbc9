//! Finite nonempty subsets of a space with a size cap, the Hausdorff metric
//! between them, and the union (codiagonal) map.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::space::{Space, SpacePoint, POINT_TOL};

/// Default collision scale used when forming sets from sampled points.
pub const DEDUP_EPS: f64 = 1e-9;

/// An element of the space of subsets of size at most `cap`.
///
/// Points are canonical, pairwise distinct and sorted by
/// [`SpacePoint::canonical_cmp`].
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    points: Vec<SpacePoint>,
    cap: usize,
}

impl Configuration {
    /// Build a configuration from points that must already be distinct.
    pub fn new(space: &Space, points: Vec<SpacePoint>, cap: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        let mut canon = points
            .into_iter()
            .map(|p| space.canonical(p))
            .collect::<Result<Vec<_>>>()?;
        canon.sort_by(SpacePoint::canonical_cmp);
        for w in canon.windows(2) {
            if space.same_point(&w[0], &w[1]) {
                return Err(Error::InvalidPoint(format!(
                    "duplicate point {:?} in configuration",
                    w[0]
                )));
            }
        }
        if canon.len() > cap {
            return Err(Error::CapExceeded {
                size: canon.len(),
                cap,
            });
        }
        Ok(Configuration { points: canon, cap })
    }

    pub fn singleton(p: SpacePoint) -> Self {
        Configuration {
            points: vec![p],
            cap: 1,
        }
    }

    pub fn points(&self) -> &[SpacePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Same points, different cap.
    pub fn with_cap(mut self, cap: usize) -> Result<Self> {
        if self.points.len() > cap {
            return Err(Error::CapExceeded {
                size: self.points.len(),
                cap,
            });
        }
        self.cap = cap;
        Ok(self)
    }

    pub fn contains(&self, space: &Space, p: &SpacePoint) -> bool {
        self.points.iter().any(|q| space.same_point(p, q))
    }
}

fn check_space(space: &Space, c: &Configuration) -> Result<()> {
    if c.points.iter().all(|p| space.accepts(p)) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// Hausdorff distance between two configurations.
///
/// On the circle and the interval both configurations are sorted, so the
/// nearest neighbour of a point is one of its sorted neighbours (plus the
/// wrap-around extremes on the circle). Graphs use a distance table.
pub fn hausdorff(space: &Space, a: &Configuration, b: &Configuration) -> Result<f64> {
    check_space(space, a)?;
    check_space(space, b)?;
    Ok(hausdorff_unchecked(space, &a.points, &b.points))
}

pub(crate) fn hausdorff_unchecked(space: &Space, a: &[SpacePoint], b: &[SpacePoint]) -> f64 {
    if space.as_graph().is_some() {
        let mut table = vec![0.0; a.len() * b.len()];
        for (i, p) in a.iter().enumerate() {
            for (j, q) in b.iter().enumerate() {
                table[i * b.len() + j] = space.distance(p, q);
            }
        }
        let rows = (0..a.len())
            .map(|i| table[i * b.len()..(i + 1) * b.len()].iter().cloned().fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        let cols = (0..b.len())
            .map(|j| (0..a.len()).map(|i| table[i * b.len() + j]).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        rows.max(cols)
    } else {
        directed_sorted(space, a, b).max(directed_sorted(space, b, a))
    }
}

/// `max_{p in from} min_{q in to} d(p, q)` for sorted coordinate sets.
fn directed_sorted(space: &Space, from: &[SpacePoint], to: &[SpacePoint]) -> f64 {
    let wrap = space.is_circle();
    let mut worst: f64 = 0.0;
    for p in from {
        let idx = to.partition_point(|q| q.canonical_cmp(p) == Ordering::Less);
        let mut best = f64::INFINITY;
        if idx < to.len() {
            best = best.min(space.distance(p, &to[idx]));
        }
        if idx > 0 {
            best = best.min(space.distance(p, &to[idx - 1]));
        }
        if wrap {
            best = best
                .min(space.distance(p, &to[0]))
                .min(space.distance(p, &to[to.len() - 1]));
        }
        worst = worst.max(best);
    }
    worst
}

/// Set union of two configurations, capped at `cap`.
pub fn union(space: &Space, a: &Configuration, b: &Configuration, cap: usize) -> Result<Configuration> {
    check_space(space, a)?;
    check_space(space, b)?;
    let mut points: Vec<SpacePoint> = Vec::with_capacity(a.len() + b.len());
    points.extend_from_slice(&a.points);
    points.extend_from_slice(&b.points);
    let merged = dedup(space, &points, POINT_TOL)?;
    merged.with_cap(cap)
}

/// Greedy left-to-right merge of points closer than `eps`.
///
/// The first point of each cluster survives. The resulting cap is the
/// number of input points.
pub fn dedup(space: &Space, points: &[SpacePoint], eps: f64) -> Result<Configuration> {
    if points.is_empty() {
        return Err(Error::EmptyConfiguration);
    }
    let mut kept: Vec<SpacePoint> = Vec::with_capacity(points.len());
    for p in points {
        let p = space.canonical(*p)?;
        if !kept.iter().any(|q| space.distance(&p, q) <= eps) {
            kept.push(p);
        }
    }
    kept.sort_by(SpacePoint::canonical_cmp);
    Ok(Configuration {
        points: kept,
        cap: points.len(),
    })
}

/// [`dedup`] for points known to be canonical and nonempty.
pub(crate) fn dedup_canonical(space: &Space, points: &[SpacePoint], eps: f64) -> Configuration {
    let mut kept: Vec<SpacePoint> = Vec::with_capacity(points.len());
    for p in points {
        if !kept.iter().any(|q| space.distance(p, q) <= eps) {
            kept.push(*p);
        }
    }
    kept.sort_by(SpacePoint::canonical_cmp);
    Configuration {
        points: kept,
        cap: points.len(),
    }
}
