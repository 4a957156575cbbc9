use crate::error::{Error, Result};
use crate::tracks::{StrandBundle, ENDPOINT_TOL};

/// Reschedule the strands so they move one at a time.
///
/// With `n` strands, strand `j` (counting from zero) waits at its start
/// until `j/n`, runs its whole course during `[j/n, (j+1)/n]` and then
/// waits at its end. All strands must start and end at one common point.
/// The output is sampled on the input grid copied into each window, so
/// every input sample appears unchanged.
pub fn staircase(bundle: &StrandBundle) -> Result<StrandBundle> {
    let space = bundle.space();
    let strands = bundle.strands();
    let b = strands[0][0];
    for (j, s) in strands.iter().enumerate() {
        for end in [&s[0], s.last().unwrap()] {
            let gap = space.distance(end, &b);
            if gap > ENDPOINT_TOL {
                return Err(Error::EndpointMismatch(format!(
                    "strand {j} has an endpoint {gap} away from the common basepoint"
                )));
            }
        }
    }
    let n = strands.len();
    let times = bundle.times();
    let mut out_times = Vec::with_capacity(n * (times.len() - 1) + 1);
    // (window, sample) for every output time
    let mut index = Vec::with_capacity(out_times.capacity());
    out_times.push(0.0);
    index.push((0usize, 0usize));
    for j in 0..n {
        for (i, &t) in times.iter().enumerate().skip(1) {
            out_times.push((j as f64 + t) / n as f64);
            index.push((j, i));
        }
    }
    *out_times.last_mut().unwrap() = 1.0;
    let last = times.len() - 1;
    let out = strands
        .iter()
        .enumerate()
        .map(|(l, s)| {
            index
                .iter()
                .map(|&(j, i)| match l.cmp(&j) {
                    std::cmp::Ordering::Less => s[last],
                    std::cmp::Ordering::Equal => s[i],
                    std::cmp::Ordering::Greater => s[0],
                })
                .collect()
        })
        .collect();
    StrandBundle::new(space.clone(), out_times, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Space;
    use crate::tracks::{project, uniform_grid};

    fn circle() -> Space {
        Space::circle(1.0).unwrap()
    }

    #[test]
    fn single_strand_is_unchanged() {
        let c = circle();
        let b = StrandBundle::from_fn(c.clone(), uniform_grid(32), 1, |_, t| c.coord(t).unwrap()).unwrap();
        assert_eq!(staircase(&b).unwrap(), b);
    }

    #[test]
    fn generator_and_constant() {
        let c = circle();
        let b = StrandBundle::from_fn(c.clone(), uniform_grid(32), 2, |j, t| {
            c.coord(if j == 0 { t } else { 0.0 }).unwrap()
        })
        .unwrap();
        let st = staircase(&b).unwrap();
        let at = st.eval(0.25);
        assert!(c.distance(&at[0], &c.coord(0.5).unwrap()) < 1e-12);
        assert_eq!(at[1], c.coord(0.0).unwrap());
        assert_eq!(project(&st, 1e-9).max_cardinality(), 2);
    }

    #[test]
    fn mismatched_endpoints_are_rejected() {
        let c = circle();
        let b = StrandBundle::from_fn(c.clone(), uniform_grid(8), 2, |j, t| {
            c.coord(0.1 * j as f64 + t).unwrap()
        })
        .unwrap();
        assert!(matches!(staircase(&b), Err(Error::EndpointMismatch(_))));
    }
}
