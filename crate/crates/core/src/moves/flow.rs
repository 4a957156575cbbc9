//! Strand extraction: covering every sampled point of a track by the fewest
//! time-monotone chains, via minimum flow with unit lower bounds on a
//! layered graph.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::space::{SpacePoint, POINT_TOL};
use crate::tracks::{StrandBundle, Track};

#[derive(Clone, Copy, Debug)]
struct Edge {
    to: usize,
    cap: i64,
}

/// Residual network for Dinic's algorithm.
struct Network {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Network {
    fn new(n: usize) -> Network {
        Network {
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: i64) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to, cap });
        self.edges.push(Edge { to: from, cap: 0 });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &id in &self.adj[u] {
                let e = self.edges[id];
                if e.cap > 0 && self.level[e.to] < 0 {
                    self.level[e.to] = self.level[u] + 1;
                    queue.push_back(e.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: i64) -> i64 {
        if u == t {
            return pushed;
        }
        while self.iter[u] < self.adj[u].len() {
            let id = self.adj[u][self.iter[u]];
            let e = self.edges[id];
            if e.cap > 0 && self.level[e.to] == self.level[u] + 1 {
                let d = self.dfs(e.to, t, pushed.min(e.cap));
                if d > 0 {
                    self.edges[id].cap -= d;
                    self.edges[id ^ 1].cap += d;
                    return d;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }
}

/// Split a sampled track into strands.
///
/// Points at consecutive samples may be joined when they are at most
/// `radius` apart. Every point must lie on at least one strand; the number
/// of strands is the minimum possible and may not exceed `max_strands`.
/// Where a strand may continue to several points, the nearest one (then the
/// lowest index) is taken.
pub fn extract_strands(track: &Track, radius: f64, max_strands: usize) -> Result<StrandBundle> {
    let space = track.space();
    let configs = track.configs();
    let layers = configs.len();
    let mut offset = Vec::with_capacity(layers + 1);
    let mut total = 0usize;
    for c in configs {
        offset.push(total);
        total += c.len();
    }
    offset.push(total);
    // Node v has an entry 2v and an exit 2v + 1.
    let source = 2 * total;
    let sink = source + 1;
    let super_source = sink + 1;
    let super_sink = super_source + 1;
    let inf = total as i64 + 2;
    let mut net = Network::new(super_sink + 1);
    let mut excess = vec![0i64; super_sink + 1];

    for v in 0..total {
        net.add_edge(2 * v, 2 * v + 1, inf - 1);
        excess[2 * v + 1] += 1;
        excess[2 * v] -= 1;
    }
    for p in 0..configs[0].len() {
        net.add_edge(source, 2 * (offset[0] + p), inf);
    }
    for q in 0..configs[layers - 1].len() {
        net.add_edge(2 * (offset[layers - 1] + q) + 1, sink, inf);
    }
    let mut links: Vec<(usize, usize, usize)> = Vec::new();
    for i in 0..layers - 1 {
        let (a, b) = (&configs[i], &configs[i + 1]);
        let mut any = vec![false; b.len()];
        for (pi, p) in a.points().iter().enumerate() {
            let mut out = false;
            for (qi, q) in b.points().iter().enumerate() {
                if space.distance(p, q) <= radius + POINT_TOL {
                    let u = offset[i] + pi;
                    let w = offset[i + 1] + qi;
                    let id = net.add_edge(2 * u + 1, 2 * w, inf);
                    links.push((id, u, w));
                    out = true;
                    any[qi] = true;
                }
            }
            if !out {
                return Err(Error::AmbiguousBranching(format!(
                    "point {p:?} at sample {i} has no successor within {radius}"
                )));
            }
        }
        if let Some(qi) = any.iter().position(|x| !x) {
            return Err(Error::AmbiguousBranching(format!(
                "point {:?} at sample {} has no predecessor within {radius}",
                b.points()[qi],
                i + 1
            )));
        }
    }
    let back = net.add_edge(sink, source, inf);
    let mut need = 0;
    for (v, &e) in excess.iter().enumerate() {
        if e > 0 {
            net.add_edge(super_source, v, e);
            need += e;
        } else if e < 0 {
            net.add_edge(v, super_sink, -e);
        }
    }
    if net.max_flow(super_source, super_sink) != need {
        return Err(Error::AmbiguousBranching("no strand cover exists".into()));
    }
    let feasible = net.edges[back ^ 1].cap;
    net.edges[back].cap = 0;
    net.edges[back ^ 1].cap = 0;
    let reduced = net.max_flow(sink, source);
    let strands_needed = (feasible - reduced) as usize;
    if strands_needed > max_strands {
        return Err(Error::AmbiguousBranching(format!(
            "{strands_needed} strands needed, at most {max_strands} allowed"
        )));
    }

    // Flow carried by each link, read off the reverse residual capacity.
    let mut next: Vec<Vec<(usize, i64)>> = vec![Vec::new(); total];
    for &(id, u, w) in &links {
        let f = net.edges[id ^ 1].cap;
        if f > 0 {
            next[u].push((w, f));
        }
    }
    let mut start: Vec<i64> = vec![0; configs[0].len()];
    for &id in &net.adj[source] {
        let e = net.edges[id];
        if id % 2 == 0 && e.to < source && e.to / 2 < configs[0].len() {
            start[e.to / 2] = net.edges[id ^ 1].cap;
        }
    }

    let point = |v: usize| -> SpacePoint {
        let i = offset.partition_point(|&o| o <= v) - 1;
        configs[i].points()[v - offset[i]]
    };
    let mut strands = Vec::with_capacity(strands_needed);
    for _ in 0..strands_needed {
        let p0 = start
            .iter()
            .position(|&f| f > 0)
            .expect("flow leaves the source");
        start[p0] -= 1;
        let mut v = offset[0] + p0;
        let mut strand = vec![point(v)];
        for _ in 1..layers {
            let here = point(v);
            let choice = next[v]
                .iter()
                .enumerate()
                .filter(|(_, (_, f))| *f > 0)
                .min_by(|(_, (a, _)), (_, (b, _))| {
                    let da = space.distance(&here, &point(*a));
                    let db = space.distance(&here, &point(*b));
                    da.total_cmp(&db).then(a.cmp(b))
                })
                .map(|(k, _)| k)
                .expect("flow is conserved");
            next[v][choice].1 -= 1;
            v = next[v][choice].0;
            strand.push(point(v));
        }
        strands.push(strand);
    }
    StrandBundle::new(space.clone(), track.times().to_vec(), strands)
}

/// Largest Hausdorff distance between consecutive samples.
pub fn max_step(track: &Track) -> f64 {
    track
        .configs()
        .windows(2)
        .map(|w| crate::ran::hausdorff_unchecked(track.space(), w[0].points(), w[1].points()))
        .fold(0.0, f64::max)
}
