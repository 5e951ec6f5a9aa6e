//! Unnormalized Jones polynomial from the Kauffman state sum.

use rayon::prelude::*;

use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::poly::Laurent;
use crate::util::UnionFind;

/// Default crossing ceiling for the 2^n state sum.
pub const DEFAULT_MAX_CROSSINGS: usize = 22;

/// `J(q) = (-1)^{n-} q^{n+ - 2n-} sum_s (-q)^{r(s)} (q + q^{-1})^{loops(s)}`,
/// which equals the graded Euler characteristic of Khovanov homology.
pub fn kauffman_jones(d: &LinkDiagram) -> Result<Laurent> {
    kauffman_jones_with_limit(d, DEFAULT_MAX_CROSSINGS)
}

pub fn kauffman_jones_with_limit(d: &LinkDiagram, max_crossings: usize) -> Result<Laurent> {
    let n = d.crossing_count();
    if n > max_crossings {
        return Err(Error::Guard(format!("state sum over {n} crossings exceeds the limit of {max_crossings}")));
    }
    let table = state_table(d);
    let (npos, nneg) = d.signed_counts();
    let mut sum = Laurent::zero();
    let circle = Laurent::circle();
    for (r, row) in table.iter().enumerate() {
        for (loops, &count) in row.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let sign = if r % 2 == 0 { 1 } else { -1 };
            let term = circle.pow(loops as u32).shift(r as i64).scale(sign * count as i64);
            sum = &sum + &term;
        }
    }
    let sign = if nneg % 2 == 0 { 1 } else { -1 };
    Ok(sum.shift(npos as i64 - 2 * nneg as i64).scale(sign))
}

/// Determinant `|V(-1)|` read off the unnormalized polynomial: divide out
/// the circle and put `q = i` (so `t = q^2 = -1`). `None` if `j` is not a
/// multiple of the circle.
pub fn determinant(j: &Laurent) -> Option<u64> {
    let v = j.div_circle()?;
    let (mut re, mut im) = (0i64, 0i64);
    for (e, c) in v.terms() {
        match e.rem_euclid(4) {
            0 => re += c,
            1 => im += c,
            2 => re -= c,
            _ => im -= c,
        }
    }
    Some(re.unsigned_abs() + im.unsigned_abs())
}

/// `table[r][loops]` = number of states with `r` one-smoothings and
/// `loops` circles.
fn state_table(d: &LinkDiagram) -> Vec<Vec<u64>> {
    let n = d.crossing_count();
    let arcs: Vec<u32> = d.arcs().into_iter().collect();
    let index = |a: u32| arcs.binary_search(&a).expect("arc present");
    let pairs: Vec<[[usize; 2]; 4]> = d
        .crossings()
        .iter()
        .map(|x| {
            let [p, q] = x.smoothing0();
            let [s, t] = x.smoothing1();
            [[index(p.0), index(p.1)], [index(q.0), index(q.1)], [index(s.0), index(s.1)], [index(t.0), index(t.1)]]
        })
        .collect();
    let width = arcs.len() + 1;
    let empty = || vec![vec![0u64; width]; n + 1];
    let states: u64 = 1 << n;
    (0..states)
        .into_par_iter()
        .fold(empty, |mut acc, s| {
            let mut uf = UnionFind::new(arcs.len());
            let mut merges = 0;
            for (k, pr) in pairs.iter().enumerate() {
                let off = if s >> k & 1 == 1 { 2 } else { 0 };
                for e in &pr[off..off + 2] {
                    if uf.union(e[0], e[1]) {
                        merges += 1;
                    }
                }
            }
            let loops = arcs.len() - merges;
            acc[s.count_ones() as usize][loops] += 1;
            acc
        })
        .reduce(empty, |mut a, b| {
            for (ra, rb) in a.iter_mut().zip(b) {
                for (x, y) in ra.iter_mut().zip(rb) {
                    *x += y;
                }
            }
            a
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::io::from_pd;

    fn lt() -> LinkDiagram {
        from_pd("3_1", &[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]).unwrap()
    }

    #[test]
    fn unknot_is_circle() {
        assert_eq!(kauffman_jones(&LinkDiagram::unknot()).unwrap(), Laurent::circle());
    }

    #[test]
    fn right_trefoil() {
        // Euler characteristic of q + q^3 + q^5 t^2 + q^9 t^3
        let j = kauffman_jones(&lt().mirror()).unwrap();
        assert_eq!(j, Laurent::from_terms([(1, 1), (3, 1), (5, 1), (9, -1)]));
        let jl = kauffman_jones(&lt()).unwrap();
        assert_eq!(jl, j.bar());
    }

    #[test]
    fn split_unlink_is_circle_squared() {
        let d = LinkDiagram::unknot().disjoint_union(&LinkDiagram::unknot()).unwrap();
        assert_eq!(kauffman_jones(&d).unwrap(), Laurent::circle().pow(2));
    }

    #[test]
    fn kink_does_not_change_jones() {
        let u = LinkDiagram::unknot();
        for positive in [true, false] {
            let k = u.apply_reidemeister(&crate::diagram::Move::R1 { arc: 1, positive }).unwrap();
            assert_eq!(kauffman_jones(&k).unwrap(), Laurent::circle());
        }
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&kauffman_jones(&lt()).unwrap()), Some(3));
        assert_eq!(determinant(&Laurent::circle()), Some(1));
        let unlink = Laurent::circle().pow(2);
        assert_eq!(determinant(&unlink), Some(0));
        let hopf = crate::diagram::geo::braid_closure("h", 2, &[1, 1]).unwrap();
        assert_eq!(determinant(&kauffman_jones(&hopf).unwrap()), Some(2));
        assert_eq!(determinant(&Laurent::one()), None);
    }

    #[test]
    fn guard_trips() {
        assert!(matches!(kauffman_jones_with_limit(&lt(), 2), Err(Error::Guard(_))));
    }
}
