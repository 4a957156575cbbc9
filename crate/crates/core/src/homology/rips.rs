use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

use super::MetricCloud;

pub const DEFAULT_SIMPLEX_BUDGET: usize = 5_000_000;

/// Environment variable overriding [`DEFAULT_SIMPLEX_BUDGET`].
pub const BUDGET_ENV: &str = "RAN_SIMPLEX_BUDGET";

/// Simplex budget in effect: the environment override if it parses,
/// otherwise the default.
pub fn simplex_budget() -> usize {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_SIMPLEX_BUDGET)
}

/// A persistence interval. An infinite death is written as `null`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PersistencePair {
    pub dimension: usize,
    pub birth: f64,
    #[serde(serialize_with = "death_out", deserialize_with = "death_in")]
    pub death: f64,
}

fn death_out<S: Serializer>(d: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if d.is_finite() {
        s.serialize_some(d)
    } else {
        s.serialize_none()
    }
}

fn death_in<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

impl PersistencePair {
    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }
}

#[derive(Clone, Copy, Debug)]
struct Edge {
    d: f64,
    u: u32,
    v: u32,
}

impl Edge {
    fn key_cmp(&self, o: &Edge) -> Ordering {
        self.d.total_cmp(&o.d).then((self.u, self.v).cmp(&(o.u, o.v)))
    }
}

/// A triangle with sorted vertices and its filtration value.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Tri {
    d: f64,
    v: [u32; 3],
}

impl Eq for Tri {}

impl PartialOrd for Tri {
    fn partial_cmp(&self, o: &Tri) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Tri {
    fn cmp(&self, o: &Tri) -> Ordering {
        self.d.total_cmp(&o.d).then(self.v.cmp(&o.v))
    }
}

struct Complex<'a> {
    cloud: &'a MetricCloud,
    max_scale: f64,
    edges: Vec<Edge>,
}

impl Complex<'_> {
    fn within(&self, i: usize, j: usize) -> bool {
        self.cloud.d(i, j) <= self.max_scale
    }

    /// Triangles containing edge `e`, in filtration order.
    fn coboundary(&self, e: &Edge, out: &mut Vec<Tri>) {
        out.clear();
        let (u, v) = (e.u as usize, e.v as usize);
        for k in 0..self.cloud.len() {
            if k == u || k == v || !self.within(u, k) || !self.within(v, k) {
                continue;
            }
            let d = e.d.max(self.cloud.d(u, k)).max(self.cloud.d(v, k));
            let mut vs = [e.u, e.v, k as u32];
            vs.sort_unstable();
            out.push(Tri { d, v: vs });
        }
        out.sort_unstable();
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Symmetric difference of two sorted columns.
fn add_sorted(a: &[Tri], b: &[Tri], out: &mut Vec<Tri>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

fn toggle(record: &mut Vec<usize>, other: &[usize]) {
    for &x in other {
        match record.binary_search(&x) {
            Ok(pos) => {
                record.remove(pos);
            }
            Err(pos) => record.insert(pos, x),
        }
    }
}

/// [`rips_persistence_with_budget`] with the budget from [`simplex_budget`].
pub fn rips_persistence_h1(cloud: &MetricCloud, max_scale: f64) -> Result<Vec<PersistencePair>> {
    rips_persistence_with_budget(cloud, max_scale, simplex_budget())
}

/// Persistence pairs in degrees 0 and 1 of the Rips filtration of `cloud`
/// truncated at `max_scale`, over Z/2.
///
/// Simplices are ordered by filtration value, then dimension, then vertex
/// list. Degree 0 uses union-find; degree 1 reduces the coboundary matrix
/// column by column from the latest edge, skipping edges that merge
/// components. Pairs come out sorted by dimension, birth and death, and
/// include zero-length intervals. Fails with `SizeLimit` when the truncated
/// complex has more than `budget` simplices of dimension at most 2.
pub fn rips_persistence_with_budget(
    cloud: &MetricCloud,
    max_scale: f64,
    budget: usize,
) -> Result<Vec<PersistencePair>> {
    if max_scale.is_nan() || max_scale <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "max_scale must be positive, got {max_scale}"
        )));
    }
    let n = cloud.len();
    let within = |i: usize, j: usize| cloud.d(i, j) <= max_scale;
    let (edge_count, tri_count) = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut e = 0usize;
            let mut t = 0usize;
            for j in i + 1..n {
                if !within(i, j) {
                    continue;
                }
                e += 1;
                t += (j + 1..n).filter(|&k| within(i, k) && within(j, k)).count();
            }
            (e, t)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let count = n + edge_count + tri_count;
    if count > budget {
        return Err(Error::SizeLimit { count, budget });
    }

    let mut edges = Vec::with_capacity(edge_count);
    for i in 0..n {
        for j in i + 1..n {
            if within(i, j) {
                edges.push(Edge {
                    d: cloud.d(i, j),
                    u: i as u32,
                    v: j as u32,
                });
            }
        }
    }
    edges.sort_unstable_by(Edge::key_cmp);

    let mut pairs = Vec::new();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut positive = vec![true; edges.len()];
    for (idx, e) in edges.iter().enumerate() {
        let a = find(&mut parent, e.u as usize);
        let b = find(&mut parent, e.v as usize);
        if a != b {
            // The component with the younger (larger) root dies.
            let (old, young) = if a < b { (a, b) } else { (b, a) };
            parent[young] = old;
            positive[idx] = false;
            pairs.push(PersistencePair {
                dimension: 0,
                birth: 0.0,
                death: e.d,
            });
        }
    }
    for v in 0..n {
        if find(&mut parent, v) == v {
            pairs.push(PersistencePair {
                dimension: 0,
                birth: 0.0,
                death: f64::INFINITY,
            });
        }
    }

    let complex = Complex {
        cloud,
        max_scale,
        edges,
    };
    // Pivot triangle -> the set of edges whose coboundaries sum to the
    // reduced column owning it.
    let mut owner: HashMap<[u32; 3], Vec<usize>> = HashMap::new();
    let mut column = Vec::new();
    let mut scratch = Vec::new();
    let mut other = Vec::new();
    for idx in (0..complex.edges.len()).rev() {
        if !positive[idx] {
            continue;
        }
        let e = complex.edges[idx];
        complex.coboundary(&e, &mut column);
        let mut record = vec![idx];
        loop {
            let Some(pivot) = column.first().copied() else {
                pairs.push(PersistencePair {
                    dimension: 1,
                    birth: e.d,
                    death: f64::INFINITY,
                });
                break;
            };
            match owner.get(&pivot.v) {
                None => {
                    pairs.push(PersistencePair {
                        dimension: 1,
                        birth: e.d,
                        death: pivot.d,
                    });
                    owner.insert(pivot.v, record);
                    break;
                }
                Some(rec) => {
                    let rec = rec.clone();
                    for &f in &rec {
                        complex.coboundary(&complex.edges[f], &mut other);
                        add_sorted(&column, &other, &mut scratch);
                        std::mem::swap(&mut column, &mut scratch);
                    }
                    toggle(&mut record, &rec);
                }
            }
        }
    }
    pairs.sort_by(|a, b| {
        a.dimension
            .cmp(&b.dimension)
            .then(a.birth.total_cmp(&b.birth))
            .then(a.death.total_cmp(&b.death))
    });
    Ok(pairs)
}

/// Number of degree-one classes standing clearly above the rest.
///
/// Persistences are sorted in decreasing order `p1 >= p2 >= ...`; the
/// result is the smallest `k` with `p_k > gap_ratio * p_{k+1}`, or 0 when
/// there is none. Only `k` with `gap_ratio * p_k >= p1` are considered, so
/// gaps among short-lived noise do not count. A lone interval has nothing
/// to be compared with and counts as 0.
pub fn long_lived_h1_count(pairs: &[PersistencePair], gap_ratio: f64) -> usize {
    let mut p: Vec<f64> = pairs
        .iter()
        .filter(|x| x.dimension == 1)
        .map(|x| x.persistence())
        .collect();
    p.sort_by(|a, b| b.total_cmp(a));
    let Some(&top) = p.first() else {
        return 0;
    };
    p.windows(2)
        .take_while(|w| gap_ratio * w[0] >= top)
        .position(|w| w[0] > gap_ratio * w[1])
        .map_or(0, |k| k + 1)
}

/// Pairs as a JSON array.
pub fn pairs_to_json(pairs: &[PersistencePair]) -> String {
    serde_json::to_string_pretty(pairs).expect("pairs serialize")
}

/// Pairs as an aligned plain-text table.
pub fn persistence_table(pairs: &[PersistencePair]) -> String {
    let mut out = String::new();
    writeln!(out, "{:>3}  {:>12}  {:>12}  {:>12}", "dim", "birth", "death", "persistence").unwrap();
    for p in pairs {
        let (death, pers) = if p.is_essential() {
            ("inf".to_string(), "inf".to_string())
        } else {
            (format!("{:.6}", p.death), format!("{:.6}", p.persistence()))
        };
        writeln!(out, "{:>3}  {:>12.6}  {:>12}  {:>12}", p.dimension, p.birth, death, pers).unwrap();
    }
    out
}
