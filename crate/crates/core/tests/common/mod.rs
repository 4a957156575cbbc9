//! Oracles and generators shared by the integration tests and the
//! acceptance run.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use ranloop::homology::{MetricCloud, PersistencePair};
use ranloop::ran::Configuration;
use ranloop::space::{GraphEdge, Space, SpacePoint};
use ranloop::tracks::{project, uniform_grid, BranchEvent, StrandBundle, Track};

pub fn circle() -> Space {
    Space::circle(1.0).unwrap()
}

/// Two vertices joined by three edges.
pub fn theta() -> Space {
    Space::graph(
        2,
        vec![
            GraphEdge { a: 0, b: 1, length: 1.0 },
            GraphEdge { a: 0, b: 1, length: 1.5 },
            GraphEdge { a: 0, b: 1, length: 2.0 },
        ],
    )
    .unwrap()
}

/// Five edges with dyadic lengths, including a loop edge and a double edge.
pub fn five_edge_graph() -> Space {
    Space::graph(
        4,
        vec![
            GraphEdge { a: 0, b: 1, length: 1.0 },
            GraphEdge { a: 1, b: 2, length: 0.75 },
            GraphEdge { a: 2, b: 0, length: 1.5 },
            GraphEdge { a: 2, b: 3, length: 0.5 },
            GraphEdge { a: 3, b: 3, length: 1.25 },
        ],
    )
    .unwrap()
}

/// Hausdorff distance by exhaustive search.
pub fn brute_hausdorff(space: &Space, a: &[SpacePoint], b: &[SpacePoint]) -> f64 {
    let directed = |x: &[SpacePoint], y: &[SpacePoint]| {
        x.iter()
            .map(|p| y.iter().map(|q| space.distance(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

/// Point distance on a metric graph from Bellman-Ford vertex distances.
pub fn graph_distance(space: &Space, p: &SpacePoint, q: &SpacePoint) -> f64 {
    let g = space.as_graph().unwrap();
    let n = g.vertex_count();
    let edges = g.edges();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (s, row) in d.iter_mut().enumerate() {
        row[s] = 0.0;
        for _ in 0..n {
            for e in edges {
                for (u, v) in [(e.a, e.b), (e.b, e.a)] {
                    if row[u] + e.length < row[v] {
                        row[v] = row[u] + e.length;
                    }
                }
            }
        }
    }
    let (SpacePoint::Edge { edge: e1, t: t1 }, SpacePoint::Edge { edge: e2, t: t2 }) = (*p, *q) else {
        panic!("graph points expected");
    };
    let ends = |e: usize, t: f64| {
        let ed = edges[e];
        [(ed.a, t * ed.length), (ed.b, (1.0 - t) * ed.length)]
    };
    let mut best = f64::INFINITY;
    if e1 == e2 {
        best = (t1 - t2).abs() * edges[e1].length;
    }
    for (x, ox) in ends(e1, t1) {
        for (y, oy) in ends(e2, t2) {
            best = best.min(ox + d[x][y] + oy);
        }
    }
    best
}

pub fn random_config<R: Rng>(space: &Space, max: usize, rng: &mut R) -> Configuration {
    let k = rng.gen_range(1..=max);
    let pts: Vec<SpacePoint> = (0..k).map(|_| space.random_point(rng)).collect();
    ranloop::ran::dedup(space, &pts, 1e-12).unwrap().with_cap(max).unwrap()
}

/// Closed strand visiting `k` random waypoints along geodesics, starting
/// and ending at `start` (or at the first waypoint).
pub fn waypoint_strand<R: Rng>(
    space: &Space,
    times: &[f64],
    start: Option<SpacePoint>,
    rng: &mut R,
) -> Vec<SpacePoint> {
    let k = rng.gen_range(3..6);
    let mut way: Vec<SpacePoint> = (0..k).map(|_| space.random_point(rng)).collect();
    if let Some(b) = start {
        way[0] = b;
    }
    way.push(way[0]);
    times
        .iter()
        .map(|&t| {
            let x = t * k as f64;
            let i = (x.floor() as usize).min(k - 1);
            space.geodesic(&way[i], &way[i + 1], x - i as f64)
        })
        .collect()
}

/// `n` independent closed waypoint strands.
pub fn random_bundle<R: Rng>(space: &Space, n: usize, m: usize, base: Option<SpacePoint>, rng: &mut R) -> StrandBundle {
    let times = uniform_grid(m);
    let strands = (0..n).map(|_| waypoint_strand(space, &times, base, rng)).collect();
    StrandBundle::new(space.clone(), times, strands).unwrap()
}

/// `n` points spread around the circle that rotate into each other's places
/// while wobbling; the strands are permuted by one step.
pub fn rotating_bundle<R: Rng>(space: &Space, n: usize, m: usize, rng: &mut R) -> StrandBundle {
    let c = space.circumference().unwrap();
    let offset: f64 = rng.gen::<f64>() * c;
    let amp: f64 = rng.gen_range(0.0..0.3) * c / n as f64;
    let waves = rng.gen_range(1..4) as f64;
    StrandBundle::from_fn(space.clone(), uniform_grid(m), n, |j, t| {
        let x = offset + c * (j as f64 + t) / n as f64 + amp * (std::f64::consts::TAU * waves * t).sin();
        space.coord(x.rem_euclid(c)).unwrap()
    })
    .unwrap()
}

/// A random loop with at most `n` points per sample.
pub fn random_loop<R: Rng>(space: &Space, n: usize, m: usize, rng: &mut R) -> Track {
    let bundle = if space.is_circle() && n > 1 && rng.gen_bool(0.3) {
        rotating_bundle(space, n, m, rng)
    } else {
        random_bundle(space, n, m, None, rng)
    };
    project(&bundle, 1e-9)
}

/// Strands that start together at one point and fan out, possibly meeting
/// again later.
pub fn branching_track<R: Rng>(rng: &mut R) -> Track {
    let c = circle();
    let n = rng.gen_range(2..5);
    let m = 64 * rng.gen_range(1..4);
    let start: f64 = rng.gen();
    let split: f64 = rng.gen_range(0.1..0.5);
    let speeds: Vec<f64> = (0..n).map(|j| (j as f64 - (n - 1) as f64 / 2.0) * rng.gen_range(0.05..0.15)).collect();
    let bundle = StrandBundle::from_fn(c.clone(), uniform_grid(m), n, |j, t| {
        let h = (t - split).max(0.0).min(1.0 - t);
        c.coord((start + speeds[j] * h).rem_euclid(1.0)).unwrap()
    })
    .unwrap();
    project(&bundle, 1e-9)
}

/// Events of the reversed track predicted from those of the track.
pub fn mirrored(events: &[BranchEvent], len: usize) -> Vec<BranchEvent> {
    let mut out: Vec<BranchEvent> = events
        .iter()
        .map(|e| BranchEvent { index: len - 1 - e.index, point: e.point, kind: e.kind.swapped() })
        .collect();
    sort_events(&mut out);
    out
}

pub fn sort_events(events: &mut [BranchEvent]) {
    events.sort_by(|a, b| {
        a.index.cmp(&b.index).then(a.point.canonical_cmp(&b.point)).then((a.kind as u8).cmp(&(b.kind as u8)))
    });
}

/// Persistence pairs of degrees 0 and 1 by plain left-to-right reduction
/// of the full boundary matrix.
pub fn naive_persistence(cloud: &MetricCloud, max_scale: f64) -> Vec<PersistencePair> {
    let n = cloud.len();
    let mut simplices: Vec<(f64, usize, Vec<usize>)> = (0..n).map(|v| (0.0, 0, vec![v])).collect();
    for i in 0..n {
        for j in i + 1..n {
            let d = cloud.d(i, j);
            if d <= max_scale {
                simplices.push((d, 1, vec![i, j]));
            }
            for k in j + 1..n {
                let f = cloud.d(i, j).max(cloud.d(i, k)).max(cloud.d(j, k));
                if f <= max_scale {
                    simplices.push((f, 2, vec![i, j, k]));
                }
            }
        }
    }
    simplices.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let index: std::collections::HashMap<Vec<usize>, usize> =
        simplices.iter().enumerate().map(|(i, s)| (s.2.clone(), i)).collect();
    let mut columns: Vec<BTreeSet<usize>> = simplices
        .iter()
        .map(|(_, dim, vs)| {
            if *dim == 0 {
                return BTreeSet::new();
            }
            (0..vs.len())
                .map(|drop| {
                    let face: Vec<usize> = vs.iter().enumerate().filter(|(k, _)| *k != drop).map(|(_, &v)| v).collect();
                    index[&face]
                })
                .collect()
        })
        .collect();
    let mut low_owner: std::collections::HashMap<usize, usize> = Default::default();
    let mut paired = vec![false; simplices.len()];
    let mut pairs = Vec::new();
    for j in 0..columns.len() {
        while let Some(&low) = columns[j].iter().next_back() {
            match low_owner.get(&low) {
                Some(&k) => {
                    let other = columns[k].clone();
                    for x in other {
                        if !columns[j].remove(&x) {
                            columns[j].insert(x);
                        }
                    }
                }
                None => {
                    low_owner.insert(low, j);
                    paired[low] = true;
                    paired[j] = true;
                    let dim = simplices[low].1;
                    if dim <= 1 {
                        pairs.push(PersistencePair { dimension: dim, birth: simplices[low].0, death: simplices[j].0 });
                    }
                    break;
                }
            }
        }
    }
    for (i, s) in simplices.iter().enumerate() {
        if !paired[i] && columns[i].is_empty() && s.1 <= 1 {
            pairs.push(PersistencePair { dimension: s.1, birth: s.0, death: f64::INFINITY });
        }
    }
    pairs.sort_by(|a, b| a.dimension.cmp(&b.dimension).then(a.birth.total_cmp(&b.birth)).then(a.death.total_cmp(&b.death)));
    pairs
}

/// A random cloud of at most `max` points: either a Euclidean point set or
/// a random Hausdorff sample, so that ties occur as well.
pub fn random_cloud<R: Rng>(max: usize, rng: &mut R) -> MetricCloud {
    let n = rng.gen_range(1..=max);
    if rng.gen_bool(0.5) {
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|_| ((rng.gen_range(0..8) as f64) / 8.0, (rng.gen_range(0..8) as f64) / 8.0))
            .collect();
        let rows = pts
            .iter()
            .map(|a| pts.iter().map(|b| (a.0 - b.0).abs() + (a.1 - b.1).abs()).collect())
            .collect();
        MetricCloud::from_matrix(rows).unwrap()
    } else {
        ranloop::homology::sample_ran(&circle(), rng.gen_range(1..4), n, rng.gen()).unwrap()
    }
}
