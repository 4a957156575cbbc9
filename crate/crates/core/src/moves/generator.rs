//! A based null-homotopy of the degree-one loop of the unit circle inside
//! the space of subsets with at most three points, and its image under a
//! loop `S^1 -> X`.

use crate::error::{Error, Result};
use crate::space::{Space, SpacePoint};
use crate::tracks::{uniform_grid, Homotopy, StrandBundle, ENDPOINT_TOL};

use super::Resolution;

/// Number of consecutive moves the deformation is split into.
const STAGES: usize = 7;

fn lam(x: f64) -> f64 {
    let y = x.rem_euclid(1.0);
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

/// The loop `x -> {x, 0}`.
fn ell(x: f64, out: &mut Vec<f64>) {
    out.push(lam(x));
    out.push(0.0);
}

/// `{x, 0, x}` opened up into `{2x, 0}` then `{0, 2x - 1}`: at `u = 0` the
/// loop `ell`, at `u = 1` the loop `ell` run twice.
fn doubling(u: f64, x: f64, out: &mut Vec<f64>) {
    let a = (1.0 - u) * x + u * (2.0 * x).min(1.0);
    let c = (1.0 - u) * x + u * (2.0 * x - 1.0).max(0.0);
    out.push(lam(a));
    out.push(0.0);
    out.push(lam(c));
}

/// Contraction of `ell` through three moves, `s` in `[0, 3]`.
fn shrink_ell(s: f64, x: f64, out: &mut Vec<f64>) {
    if s <= 1.0 {
        // Append a there-and-back along ell.
        let c = 1.0 - 2.0 * s / 3.0;
        if x <= c {
            ell(x / c, out);
        } else {
            let y = (x - c) / (1.0 - c);
            if y <= 0.5 {
                ell(2.0 * y * s, out);
            } else {
                ell((2.0 - 2.0 * y) * s, out);
            }
        }
    } else if s <= 2.0 {
        // Merge the first two copies of ell into one.
        let u = s - 1.0;
        if x <= 2.0 / 3.0 {
            doubling(1.0 - u, 1.5 * x, out);
        } else {
            ell(3.0 - 3.0 * x, out);
        }
    } else {
        // Pull ell followed by its reverse back to the basepoint.
        let u = s - 2.0;
        if x <= 2.0 / 3.0 {
            ell((1.0 - u) * 1.5 * x, out);
        } else {
            ell((1.0 - u) * (3.0 - 3.0 * x), out);
        }
    }
}

/// Coordinates (on the unit circle) of the configuration at `(s, t)` of
/// the contraction of the degree-one loop.
pub(crate) fn generator_coords(s: f64, t: f64, out: &mut Vec<f64>) {
    out.clear();
    let s = s.clamp(0.0, 1.0);
    let t = t.clamp(0.0, 1.0);
    let scaled = STAGES as f64 * s;
    let stage = (scaled.floor() as usize).min(STAGES - 1);
    let u = scaled - stage as f64;
    match stage {
        0 => {
            // t -> {t} becomes ell run twice.
            let w1 = (1.0 - u) * t + u * (2.0 * t).min(1.0);
            let w2 = (1.0 - u) * t + u * (2.0 * t - 1.0).max(0.0);
            out.push(lam(w1));
            out.push(lam(w2));
        }
        1..=3 => {
            if t <= 0.5 {
                shrink_ell((stage - 1) as f64 + u, 2.0 * t, out);
            } else {
                ell(2.0 * t - 1.0, out);
            }
        }
        _ => {
            if t <= 0.5 {
                out.push(0.0);
            } else {
                shrink_ell((stage - 4) as f64 + u, 2.0 * t - 1.0, out);
            }
        }
    }
}

fn generator_coords_turns(turns: i64, s: f64, t: f64, out: &mut Vec<f64>) {
    if turns < 0 {
        generator_coords(s, 1.0 - t, out)
    } else {
        generator_coords(s, t, out)
    }
}

/// Based null-homotopy of the loop of degree `turns` (which must be `±1`)
/// on the unit circle, with every cell holding at most three points.
pub fn contract_circle_generator(turns: i64, resolution: Resolution) -> Result<Homotopy> {
    if turns.abs() != 1 {
        return Err(Error::UnsupportedDegree(turns));
    }
    let space = Space::circle(1.0).expect("unit circle");
    Homotopy::from_fn(
        space,
        uniform_grid(resolution.rows),
        uniform_grid(resolution.cols),
        3,
        crate::ran::DEDUP_EPS,
        |s, t| {
            let mut xs = Vec::with_capacity(3);
            generator_coords_turns(turns, s, t, &mut xs);
            xs.into_iter().map(SpacePoint::Coord).collect()
        },
    )
}

/// Points of the contraction cell at `(s, t)` carried into `X` by `f`.
pub(crate) fn pushforward_cell<F>(f: &F, s: f64, t: f64, out: &mut Vec<SpacePoint>)
where
    F: Fn(f64) -> SpacePoint + ?Sized,
{
    let mut xs = Vec::with_capacity(3);
    generator_coords(s, t, &mut xs);
    out.extend(xs.into_iter().map(f));
}

/// Contraction of a loop in `X` obtained by applying the loop, read as a map
/// from the unit circle, to every cell of the degree-one contraction.
///
/// The loop is given by samples on `times` and interpolated along
/// geodesics.
pub fn pushforward_contraction(
    space: &Space,
    times: &[f64],
    strand: &[SpacePoint],
    resolution: Resolution,
) -> Result<Homotopy> {
    let bundle = StrandBundle::new(space.clone(), times.to_vec(), vec![strand.to_vec()])?;
    let s = &bundle.strands()[0];
    let gap = space.distance(&s[0], s.last().unwrap());
    if gap > ENDPOINT_TOL {
        return Err(Error::EndpointMismatch(format!(
            "strand is not closed: ends {gap} apart"
        )));
    }
    let f = |theta: f64| bundle.eval_strand(0, theta);
    Homotopy::from_fn(
        space.clone(),
        uniform_grid(resolution.rows),
        uniform_grid(resolution.cols),
        3,
        crate::ran::DEDUP_EPS,
        |s, t| {
            let mut pts = Vec::with_capacity(3);
            pushforward_cell(&f, s, t, &mut pts);
            pts
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ran::{hausdorff, Configuration};

    #[test]
    fn stage_ends_agree() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        let c = Space::circle(1.0).unwrap();
        for k in 1..STAGES {
            let s = k as f64 / STAGES as f64;
            for i in 0..=200 {
                let t = i as f64 / 200.0;
                generator_coords(s - 1e-12, t, &mut a);
                generator_coords(s + 1e-12, t, &mut b);
                let ca = crate::ran::dedup(&c, &a.iter().map(|x| SpacePoint::Coord(*x)).collect::<Vec<_>>(), 1e-9).unwrap();
                let cb = crate::ran::dedup(&c, &b.iter().map(|x| SpacePoint::Coord(*x)).collect::<Vec<_>>(), 1e-9).unwrap();
                assert!(hausdorff(&c, &ca, &cb).unwrap() < 1e-9, "stage {k}, t = {t}");
            }
        }
    }

    #[test]
    fn ends_of_the_contraction() {
        let h = contract_circle_generator(1, Resolution { rows: 14, cols: 64 }).unwrap();
        assert_eq!(h.first_row().winding_number().unwrap(), 1);
        let zero = Configuration::singleton(SpacePoint::Coord(0.0));
        assert!(h.target_drift(&zero) < 1e-12);
        assert_eq!(h.max_cardinality(), 3);
        let back = contract_circle_generator(-1, Resolution { rows: 14, cols: 64 }).unwrap();
        assert_eq!(back.first_row().winding_number().unwrap(), -1);
    }

    #[test]
    fn pushforward_along_the_identity() {
        let c = Space::circle(1.0).unwrap();
        let times = uniform_grid(64);
        let strand: Vec<SpacePoint> = times.iter().map(|&t| c.coord(t.rem_euclid(1.0)).unwrap()).collect();
        let res = Resolution { rows: 21, cols: 64 };
        let h = pushforward_contraction(&c, &times, &strand, res).unwrap();
        let g = contract_circle_generator(1, res).unwrap();
        for (a, b) in h.cells().iter().flatten().zip(g.cells().iter().flatten()) {
            assert!(hausdorff(&c, a, b).unwrap() < 1e-12);
        }

        let still = vec![c.coord(0.3).unwrap(); 65];
        let h = pushforward_contraction(&c, &times, &still, res).unwrap();
        assert!(h.cells().iter().flatten().all(|x| x.points() == [still[0]]));
    }

    #[test]
    fn higher_degree_is_unsupported() {
        assert_eq!(
            contract_circle_generator(2, Resolution { rows: 4, cols: 4 }),
            Err(Error::UnsupportedDegree(2))
        );
    }
}
