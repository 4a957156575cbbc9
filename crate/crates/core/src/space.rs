//! Geodesic metric spaces that host configurations: the circle, the closed
//! interval and finite metric graphs.
//!
//! Points are stored in a canonical form so that two representations of the
//! same point compare equal: circle coordinates live in `[0, C)`, and graph
//! points sitting on a vertex use the lowest-index incident edge.

use std::cmp::Ordering;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two points closer than this are the same point.
pub const POINT_TOL: f64 = 1e-12;

/// A point of a [`Space`].
///
/// Circles and intervals use a single coordinate; graphs use an edge index
/// and a parameter in `[0, 1]` measured from the edge's first endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpacePoint {
    Coord(f64),
    Edge { edge: usize, t: f64 },
}

impl SpacePoint {
    /// Total order used to sort configurations.
    pub fn canonical_cmp(&self, other: &SpacePoint) -> Ordering {
        match (self, other) {
            (SpacePoint::Coord(a), SpacePoint::Coord(b)) => a.total_cmp(b),
            (SpacePoint::Edge { edge: e1, t: t1 }, SpacePoint::Edge { edge: e2, t: t2 }) => {
                e1.cmp(e2).then(t1.total_cmp(t2))
            }
            (SpacePoint::Coord(_), SpacePoint::Edge { .. }) => Ordering::Less,
            (SpacePoint::Edge { .. }, SpacePoint::Coord(_)) => Ordering::Greater,
        }
    }

    pub fn coord(&self) -> Option<f64> {
        match *self {
            SpacePoint::Coord(x) => Some(x),
            SpacePoint::Edge { .. } => None,
        }
    }
}

/// An edge of a metric graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphEdge {
    pub a: usize,
    pub b: usize,
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricGraph {
    vertices: usize,
    edges: Vec<GraphEdge>,
    /// All-pairs vertex distances, row-major.
    dist: Vec<f64>,
    /// Incident edge indices per vertex, ascending.
    incident: Vec<Vec<usize>>,
}

impl MetricGraph {
    fn new(vertices: usize, edges: Vec<GraphEdge>) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::InvalidSpace("graph has no vertices".into()));
        }
        if edges.is_empty() {
            return Err(Error::InvalidSpace("graph has no edges".into()));
        }
        let mut incident = vec![Vec::new(); vertices];
        for (i, e) in edges.iter().enumerate() {
            if e.a >= vertices || e.b >= vertices {
                return Err(Error::InvalidSpace(format!(
                    "edge {i} references a vertex outside 0..{vertices}"
                )));
            }
            if !(e.length.is_finite() && e.length > 0.0) {
                return Err(Error::InvalidSpace(format!(
                    "edge {i} has non-positive length {}",
                    e.length
                )));
            }
            incident[e.a].push(i);
            if e.b != e.a {
                incident[e.b].push(i);
            }
        }

        // Floyd-Warshall; graphs here are small.
        let n = vertices;
        let mut dist = vec![f64::INFINITY; n * n];
        for v in 0..n {
            dist[v * n + v] = 0.0;
        }
        for e in &edges {
            let (a, b) = (e.a, e.b);
            if e.length < dist[a * n + b] {
                dist[a * n + b] = e.length;
                dist[b * n + a] = e.length;
            }
        }
        for k in 0..n {
            for i in 0..n {
                let dik = dist[i * n + k];
                if dik.is_infinite() {
                    continue;
                }
                for j in 0..n {
                    let via = dik + dist[k * n + j];
                    if via < dist[i * n + j] {
                        dist[i * n + j] = via;
                    }
                }
            }
        }
        if dist.iter().any(|d| d.is_infinite()) {
            return Err(Error::InvalidSpace("graph is not connected".into()));
        }

        Ok(MetricGraph {
            vertices,
            edges,
            dist,
            incident,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn vertex_distance(&self, u: usize, v: usize) -> f64 {
        self.dist[u * self.vertices + v]
    }

    /// Canonical point for a vertex.
    pub fn vertex_point(&self, v: usize) -> SpacePoint {
        let e = self.incident[v][0];
        let t = if self.edges[e].a == v { 0.0 } else { 1.0 };
        SpacePoint::Edge { edge: e, t }
    }

    /// The two ends of the edge carrying a point: `(vertex, offset, parameter of vertex)`.
    fn ends(&self, edge: usize, t: f64) -> [(usize, f64, f64); 2] {
        let e = self.edges[edge];
        [(e.a, t * e.length, 0.0), (e.b, (1.0 - t) * e.length, 1.0)]
    }

    fn distance(&self, a: (usize, f64), b: (usize, f64)) -> f64 {
        // Evaluate in a fixed order so the result is exactly symmetric.
        let ((e1, t1), (e2, t2)) = if (b.0, b.1) < (a.0, a.1) { (b, a) } else { (a, b) };
        let mut best = f64::INFINITY;
        if e1 == e2 {
            best = (t1 - t2).abs() * self.edges[e1].length;
        }
        for (x, ox, _) in self.ends(e1, t1) {
            for (y, oy, _) in self.ends(e2, t2) {
                best = best.min(ox + self.vertex_distance(x, y) + oy);
            }
        }
        best
    }

    /// Lexicographically smallest shortest vertex path from `from` to `to`.
    fn vertex_path(&self, from: usize, to: usize) -> Vec<Segment> {
        let mut path = Vec::new();
        let mut cur = from;
        while cur != to {
            let remaining = self.vertex_distance(cur, to);
            let tol = POINT_TOL * (1.0 + remaining);
            let mut advanced = false;
            for &ei in &self.incident[cur] {
                let e = self.edges[ei];
                if e.a == e.b {
                    continue;
                }
                let (next, from_t, to_t) = if e.a == cur {
                    (e.b, 0.0, 1.0)
                } else {
                    (e.a, 1.0, 0.0)
                };
                if (e.length + self.vertex_distance(next, to) - remaining).abs() <= tol {
                    path.push(Segment {
                        edge: ei,
                        from: from_t,
                        to: to_t,
                    });
                    cur = next;
                    advanced = true;
                    break;
                }
            }
            assert!(advanced, "shortest-path reconstruction stalled");
        }
        path
    }

    fn route(&self, (e1, t1): (usize, f64), (e2, t2): (usize, f64)) -> (f64, Vec<Segment>) {
        let mut candidates: Vec<(f64, Vec<Segment>)> = Vec::with_capacity(5);
        if e1 == e2 {
            candidates.push((
                (t1 - t2).abs() * self.edges[e1].length,
                vec![Segment {
                    edge: e1,
                    from: t1,
                    to: t2,
                }],
            ));
        }
        for (x, ox, tx) in self.ends(e1, t1) {
            for (y, oy, ty) in self.ends(e2, t2) {
                let mut segs = vec![Segment {
                    edge: e1,
                    from: t1,
                    to: tx,
                }];
                segs.extend(self.vertex_path(x, y));
                segs.push(Segment {
                    edge: e2,
                    from: ty,
                    to: t2,
                });
                candidates.push((ox + self.vertex_distance(x, y) + oy, segs));
            }
        }
        let best = candidates
            .iter()
            .map(|c| c.0)
            .fold(f64::INFINITY, f64::min);
        let tol = POINT_TOL * (1.0 + best);
        candidates
            .into_iter()
            .filter(|c| c.0 <= best + tol)
            .min_by(|a, b| {
                let ka = a.1.iter().map(|s| s.edge);
                let kb = b.1.iter().map(|s| s.edge);
                ka.cmp(kb)
            })
            .expect("at least one route")
    }
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    edge: usize,
    from: f64,
    to: f64,
}

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    Circle { circumference: f64 },
    Interval { length: f64 },
    Graph(MetricGraph),
}

/// A compact, path-connected geodesic metric space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceSpec", into = "SpaceSpec")]
pub struct Space(Repr);

/// Serialized form of a [`Space`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpaceSpec {
    Circle { circumference: f64 },
    Interval { length: f64 },
    Graph { vertices: usize, edges: Vec<(usize, usize, f64)> },
}

impl TryFrom<SpaceSpec> for Space {
    type Error = Error;

    fn try_from(spec: SpaceSpec) -> Result<Space> {
        match spec {
            SpaceSpec::Circle { circumference } => Space::circle(circumference),
            SpaceSpec::Interval { length } => Space::interval(length),
            SpaceSpec::Graph { vertices, edges } => Space::graph(
                vertices,
                edges
                    .into_iter()
                    .map(|(a, b, length)| GraphEdge { a, b, length })
                    .collect(),
            ),
        }
    }
}

impl From<Space> for SpaceSpec {
    fn from(space: Space) -> SpaceSpec {
        match space.0 {
            Repr::Circle { circumference } => SpaceSpec::Circle { circumference },
            Repr::Interval { length } => SpaceSpec::Interval { length },
            Repr::Graph(g) => SpaceSpec::Graph {
                vertices: g.vertices,
                edges: g.edges.iter().map(|e| (e.a, e.b, e.length)).collect(),
            },
        }
    }
}

impl std::fmt::Display for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.0 {
            Repr::Circle { circumference } => write!(f, "Circle{{{circumference}}}"),
            Repr::Interval { length } => write!(f, "Interval{{{length}}}"),
            Repr::Graph(g) => write!(f, "MetricGraph{{{} vertices, {} edges}}", g.vertices, g.edges.len()),
        }
    }
}

impl Space {
    pub fn circle(circumference: f64) -> Result<Space> {
        if !(circumference.is_finite() && circumference > 0.0) {
            return Err(Error::InvalidSpace(format!(
                "circumference must be positive, got {circumference}"
            )));
        }
        Ok(Space(Repr::Circle { circumference }))
    }

    pub fn interval(length: f64) -> Result<Space> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidSpace(format!(
                "interval length must be positive, got {length}"
            )));
        }
        Ok(Space(Repr::Interval { length }))
    }

    pub fn graph(vertices: usize, edges: Vec<GraphEdge>) -> Result<Space> {
        MetricGraph::new(vertices, edges).map(|g| Space(Repr::Graph(g)))
    }

    pub fn circumference(&self) -> Option<f64> {
        match self.0 {
            Repr::Circle { circumference } => Some(circumference),
            _ => None,
        }
    }

    pub fn is_circle(&self) -> bool {
        matches!(self.0, Repr::Circle { .. })
    }

    pub fn as_graph(&self) -> Option<&MetricGraph> {
        match &self.0 {
            Repr::Graph(g) => Some(g),
            _ => None,
        }
    }

    pub fn spec(&self) -> SpaceSpec {
        self.clone().into()
    }

    /// Upper bound on the distance between any two points.
    pub fn diameter(&self) -> f64 {
        match &self.0 {
            Repr::Circle { circumference } => circumference / 2.0,
            Repr::Interval { length } => *length,
            Repr::Graph(g) => {
                let max_v = g.dist.iter().cloned().fold(0.0, f64::max);
                let max_e = g.edges.iter().map(|e| e.length).fold(0.0, f64::max);
                max_v + max_e
            }
        }
    }

    /// A convenient default point: coordinate 0, or vertex 0.
    pub fn origin(&self) -> SpacePoint {
        match &self.0 {
            Repr::Circle { .. } | Repr::Interval { .. } => SpacePoint::Coord(0.0),
            Repr::Graph(g) => g.vertex_point(0),
        }
    }

    /// Build a canonical point from a coordinate (circle/interval only).
    pub fn coord(&self, x: f64) -> Result<SpacePoint> {
        self.canonical(SpacePoint::Coord(x))
    }

    /// Build a canonical graph point.
    pub fn edge_point(&self, edge: usize, t: f64) -> Result<SpacePoint> {
        self.canonical(SpacePoint::Edge { edge, t })
    }

    /// Validate a point and return its canonical representative.
    pub fn canonical(&self, p: SpacePoint) -> Result<SpacePoint> {
        match (&self.0, p) {
            (Repr::Circle { circumference }, SpacePoint::Coord(x)) => {
                if !x.is_finite() {
                    return Err(Error::InvalidPoint(format!("non-finite coordinate {x}")));
                }
                let c = *circumference;
                let mut y = x.rem_euclid(c);
                if y >= c || c - y <= POINT_TOL {
                    y = 0.0;
                }
                Ok(SpacePoint::Coord(y))
            }
            (Repr::Interval { length }, SpacePoint::Coord(x)) => {
                if !x.is_finite() || x < -POINT_TOL || x > length + POINT_TOL {
                    return Err(Error::InvalidPoint(format!(
                        "coordinate {x} outside [0, {length}]"
                    )));
                }
                Ok(SpacePoint::Coord(x.clamp(0.0, *length)))
            }
            (Repr::Graph(g), SpacePoint::Edge { edge, t }) => {
                if edge >= g.edges.len() {
                    return Err(Error::InvalidPoint(format!("edge {edge} does not exist")));
                }
                if !(-POINT_TOL..=1.0 + POINT_TOL).contains(&t) {
                    return Err(Error::InvalidPoint(format!("edge parameter {t} outside [0, 1]")));
                }
                let e = g.edges[edge];
                if t * e.length <= POINT_TOL {
                    Ok(g.vertex_point(e.a))
                } else if (1.0 - t) * e.length <= POINT_TOL {
                    Ok(g.vertex_point(e.b))
                } else {
                    Ok(SpacePoint::Edge { edge, t })
                }
            }
            (_, p) => Err(Error::InvalidPoint(format!("{p:?} is not a point of {self}"))),
        }
    }

    /// Whether `p` has the right shape for this space (not full validation).
    pub fn accepts(&self, p: &SpacePoint) -> bool {
        matches!(
            (&self.0, p),
            (Repr::Circle { .. } | Repr::Interval { .. }, SpacePoint::Coord(_))
                | (Repr::Graph(_), SpacePoint::Edge { .. })
        )
    }

    /// Geodesic distance between canonical points.
    ///
    /// Panics if a point does not belong to this space; use [`Space::try_distance`]
    /// for unchecked input.
    pub fn distance(&self, p: &SpacePoint, q: &SpacePoint) -> f64 {
        match (&self.0, p, q) {
            (Repr::Circle { circumference }, SpacePoint::Coord(a), SpacePoint::Coord(b)) => {
                let d = (a - b).abs();
                d.min(circumference - d)
            }
            (Repr::Interval { .. }, SpacePoint::Coord(a), SpacePoint::Coord(b)) => (a - b).abs(),
            (
                Repr::Graph(g),
                SpacePoint::Edge { edge: e1, t: t1 },
                SpacePoint::Edge { edge: e2, t: t2 },
            ) => g.distance((*e1, *t1), (*e2, *t2)),
            _ => panic!("points {p:?}, {q:?} do not belong to {self}"),
        }
    }

    pub fn try_distance(&self, p: &SpacePoint, q: &SpacePoint) -> Result<f64> {
        let p = self.canonical(*p)?;
        let q = self.canonical(*q)?;
        Ok(self.distance(&p, &q))
    }

    pub fn same_point(&self, p: &SpacePoint, q: &SpacePoint) -> bool {
        self.distance(p, q) <= POINT_TOL
    }

    /// Point at fraction `s` along the chosen shortest path from `p` to `q`.
    ///
    /// Ties are broken deterministically: on the circle antipodal pairs move
    /// towards increasing coordinate; on graphs the route with the
    /// lexicographically smallest edge-index sequence wins.
    pub fn geodesic(&self, p: &SpacePoint, q: &SpacePoint, s: f64) -> SpacePoint {
        if s <= 0.0 {
            return *p;
        }
        if s >= 1.0 {
            return *q;
        }
        match (&self.0, p, q) {
            (Repr::Circle { circumference }, SpacePoint::Coord(a), SpacePoint::Coord(b)) => {
                let c = *circumference;
                let fwd = (b - a).rem_euclid(c);
                let half = c / 2.0;
                let x = if fwd <= half + POINT_TOL {
                    a + s * fwd
                } else {
                    a - s * (c - fwd)
                };
                self.canonical(SpacePoint::Coord(x))
                    .expect("finite circle coordinate")
            }
            (Repr::Interval { .. }, SpacePoint::Coord(a), SpacePoint::Coord(b)) => {
                SpacePoint::Coord(a + s * (b - a))
            }
            (
                Repr::Graph(g),
                SpacePoint::Edge { edge: e1, t: t1 },
                SpacePoint::Edge { edge: e2, t: t2 },
            ) => {
                let (total, segs) = g.route((*e1, *t1), (*e2, *t2));
                let mut remaining = s * total;
                for seg in &segs {
                    let len = g.edges[seg.edge].length;
                    let seg_len = (seg.to - seg.from).abs() * len;
                    if remaining <= seg_len {
                        let dir = if seg.to >= seg.from { 1.0 } else { -1.0 };
                        let t = (seg.from + dir * remaining / len).clamp(0.0, 1.0);
                        return self
                            .canonical(SpacePoint::Edge { edge: seg.edge, t })
                            .expect("parameter clamped to [0, 1]");
                    }
                    remaining -= seg_len;
                }
                *q
            }
            _ => panic!("points {p:?}, {q:?} do not belong to {self}"),
        }
    }

    /// Uniformly distributed point (by arc length).
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> SpacePoint {
        match &self.0 {
            Repr::Circle { circumference } => {
                self.canonical(SpacePoint::Coord(rng.gen::<f64>() * circumference))
                    .expect("in range")
            }
            Repr::Interval { length } => SpacePoint::Coord(rng.gen::<f64>() * length),
            Repr::Graph(g) => {
                let total: f64 = g.edges.iter().map(|e| e.length).sum();
                let mut x = rng.gen::<f64>() * total;
                let mut edge = g.edges.len() - 1;
                for (i, e) in g.edges.iter().enumerate() {
                    if x < e.length {
                        edge = i;
                        break;
                    }
                    x -= e.length;
                }
                let t = (x / g.edges[edge].length).clamp(0.0, 1.0);
                self.canonical(SpacePoint::Edge { edge, t }).expect("in range")
            }
        }
    }
}
