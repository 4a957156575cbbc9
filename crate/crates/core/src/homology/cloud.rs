use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ran::{dedup, hausdorff_unchecked, Configuration, DEDUP_EPS};
use crate::space::{Space, SpacePoint};

/// A finite metric space, optionally remembering the configurations its
/// points came from.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricCloud {
    labels: Vec<Configuration>,
    size: usize,
    dist: Vec<f64>,
}

impl MetricCloud {
    /// Cloud from a full distance matrix. The matrix must be square,
    /// symmetric, nonnegative and zero on the diagonal.
    pub fn from_matrix(rows: Vec<Vec<f64>>) -> Result<MetricCloud> {
        let size = rows.len();
        if size == 0 {
            return Err(Error::InvalidArgument("empty distance matrix".into()));
        }
        let mut dist = Vec::with_capacity(size * size);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has {} entries, expected {size}",
                    row.len()
                )));
            }
            dist.extend_from_slice(row);
        }
        let cloud = MetricCloud {
            labels: Vec::new(),
            size,
            dist,
        };
        cloud.check()?;
        Ok(cloud)
    }

    fn check(&self) -> Result<()> {
        for i in 0..self.size {
            if self.d(i, i) != 0.0 {
                return Err(Error::InvalidArgument(format!("nonzero diagonal at {i}")));
            }
            for j in 0..i {
                let d = self.d(i, j);
                if !(d.is_finite() && d >= 0.0) || d != self.d(j, i) {
                    return Err(Error::InvalidArgument(format!(
                        "entries ({i}, {j}) are not a symmetric distance"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn labels(&self) -> &[Configuration] {
        &self.labels
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.size..(i + 1) * self.size]
    }

    /// Largest violation of the triangle inequality (zero for a metric).
    pub fn triangle_defect(&self) -> f64 {
        let n = self.size;
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut worst = 0.0f64;
                for j in 0..n {
                    for k in 0..n {
                        worst = worst.max(self.d(i, k) - self.d(i, j) - self.d(j, k));
                    }
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }

    /// The cloud restricted to `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> MetricCloud {
        let size = indices.len();
        let mut dist = Vec::with_capacity(size * size);
        for &i in indices {
            dist.extend(indices.iter().map(|&j| self.d(i, j)));
        }
        let labels = if self.labels.is_empty() {
            Vec::new()
        } else {
            indices.iter().map(|&i| self.labels[i].clone()).collect()
        };
        MetricCloud { labels, size, dist }
    }

    /// Distance matrix as comma-separated rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.size {
            let row: Vec<String> = self.row(i).iter().map(|d| format!("{d}")).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// `m` random configurations of at most `n` points, with their Hausdorff
/// distance matrix. Each configuration has a size drawn uniformly from
/// `1..=n` and points drawn uniformly by arc length.
pub fn sample_ran(space: &Space, n: usize, m: usize, seed: u64) -> Result<MetricCloud> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("n and m must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = (0..m)
        .map(|_| {
            let k = rng.gen_range(1..=n);
            let pts: Vec<SpacePoint> = (0..k).map(|_| space.random_point(&mut rng)).collect();
            dedup(space, &pts, DEDUP_EPS)?.with_cap(n)
        })
        .collect::<Result<Vec<_>>>()?;
    let dist: Vec<f64> = (0..m * m)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / m, idx % m);
            match i.cmp(&j) {
                std::cmp::Ordering::Equal => 0.0,
                std::cmp::Ordering::Less => {
                    hausdorff_unchecked(space, labels[i].points(), labels[j].points())
                }
                std::cmp::Ordering::Greater => {
                    hausdorff_unchecked(space, labels[j].points(), labels[i].points())
                }
            }
        })
        .collect();
    Ok(MetricCloud {
        labels,
        size: m,
        dist,
    })
}

/// Farthest-point subsample of `k` points. The first point is drawn with
/// `seed`; each later one maximizes the distance to those already chosen
/// (lowest index on ties).
pub fn maxmin_subsample(cloud: &MetricCloud, k: usize, seed: u64) -> MetricCloud {
    let n = cloud.len();
    if k >= n {
        return cloud.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = rng.gen_range(0..n);
    let mut chosen = vec![first];
    let mut near: Vec<f64> = cloud.row(first).to_vec();
    while chosen.len() < k {
        let mut best = 0;
        for i in 1..n {
            if near[i] > near[best] {
                best = i;
            }
        }
        chosen.push(best);
        for (i, d) in near.iter_mut().enumerate() {
            *d = d.min(cloud.d(best, i));
        }
    }
    cloud.subset(&chosen)
}
