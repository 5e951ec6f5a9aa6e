//! The cube of resolutions as an explicit chain complex.
//!
//! One generator per (state, labelling of its circles by `1`/`x`). With
//! `lee = true` the Frobenius algebra is deformed to `x^2 = 1`, which adds
//! differential components raising `j` by 4.

use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::util::UnionFind;

/// Hard ceiling on crossings for cube builds.
pub const DEFAULT_MAX_CROSSINGS: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gen {
    pub i: i64,
    pub j: i64,
}

/// Integer chain complex; `diff[g]` lists `(target, coefficient)`.
#[derive(Clone, Debug)]
pub struct CubeComplex {
    pub gens: Vec<Gen>,
    pub diff: Vec<Vec<(usize, i64)>>,
}

struct State {
    /// circle index of each arc slot
    circle_of: Vec<u16>,
    circles: usize,
    offset: usize,
}

pub fn build_cube(d: &LinkDiagram, lee: bool, max_crossings: usize) -> Result<CubeComplex> {
    let n = d.crossing_count();
    if n > max_crossings {
        return Err(Error::Guard(format!("cube of {n} crossings exceeds the limit of {max_crossings}")));
    }
    let arcs: Vec<u32> = d.arcs().into_iter().collect();
    let index = |a: u32| arcs.binary_search(&a).expect("arc present");
    let smoothings: Vec<[[[usize; 2]; 2]; 2]> = d
        .crossings()
        .iter()
        .map(|x| {
            let s0 = x.smoothing0().map(|(a, b)| [index(a), index(b)]);
            let s1 = x.smoothing1().map(|(a, b)| [index(a), index(b)]);
            [s0, s1]
        })
        .collect();
    let (npos, nneg) = d.signed_counts();
    let shift = npos as i64 - 2 * nneg as i64;

    let mut states = Vec::with_capacity(1 << n);
    let mut total = 0usize;
    for s in 0..1usize << n {
        let mut uf = UnionFind::new(arcs.len());
        for (k, sm) in smoothings.iter().enumerate() {
            for e in &sm[s >> k & 1] {
                uf.union(e[0], e[1]);
            }
        }
        // circles numbered by first arc, so numbering is canonical
        let mut id = vec![u16::MAX; arcs.len()];
        let mut circle_of = vec![0u16; arcs.len()];
        let mut circles = 0;
        for a in 0..arcs.len() {
            let r = uf.find(a);
            if id[r] == u16::MAX {
                id[r] = circles as u16;
                circles += 1;
            }
            circle_of[a] = id[r];
        }
        if circles > 24 {
            return Err(Error::Guard(format!("state with {circles} circles")));
        }
        states.push(State { circle_of, circles, offset: total });
        total += 1 << circles;
    }

    let mut gens = Vec::with_capacity(total);
    for (s, st) in states.iter().enumerate() {
        let r = s.count_ones() as i64;
        for mask in 0u32..1 << st.circles {
            let xs = mask.count_ones() as i64;
            let ones = st.circles as i64 - xs;
            gens.push(Gen { i: r - nneg as i64, j: ones - xs + r + shift });
        }
    }

    let mut diff: Vec<Vec<(usize, i64)>> = vec![Vec::new(); total];
    for (s, st) in states.iter().enumerate() {
        for (k, sm) in smoothings.iter().enumerate() {
            if s >> k & 1 == 1 {
                continue;
            }
            let t = s | 1 << k;
            let tt = &states[t];
            let sign = if (s & ((1 << k) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
            // image of every uninvolved circle of s in t
            let [[a, b], [c, _]] = sm[0];
            let l1 = st.circle_of[a] as usize;
            let l2 = st.circle_of[c] as usize;
            let mut rep = vec![usize::MAX; st.circles];
            for (arc, &ci) in st.circle_of.iter().enumerate() {
                if rep[ci as usize] == usize::MAX {
                    rep[ci as usize] = arc;
                }
            }
            let image = |ci: usize| tt.circle_of[rep[ci]] as u32;
            let mut push = |src: usize, mask: u32, coef: i64| diff[src].push((tt.offset + mask as usize, coef * sign));
            for mask in 0u32..1 << st.circles {
                let src = st.offset + mask as usize;
                let mut base = 0u32;
                for ci in 0..st.circles {
                    if ci != l1 && ci != l2 && mask >> ci & 1 == 1 {
                        base |= 1 << image(ci);
                    }
                }
                if l1 != l2 {
                    let m = image(l1);
                    match (mask >> l1 & 1, mask >> l2 & 1) {
                        (0, 0) => push(src, base, 1),
                        (1, 1) => {
                            if lee {
                                push(src, base, 1)
                            }
                        }
                        _ => push(src, base | 1 << m, 1),
                    }
                } else {
                    let pa = tt.circle_of[a] as u32;
                    let pb = tt.circle_of[b] as u32;
                    if mask >> l1 & 1 == 0 {
                        push(src, base | 1 << pa, 1);
                        push(src, base | 1 << pb, 1);
                    } else {
                        push(src, base | 1 << pa | 1 << pb, 1);
                        if lee {
                            push(src, base, 1);
                        }
                    }
                }
            }
        }
    }
    for row in &mut diff {
        row.sort_unstable_by_key(|e| e.0);
    }
    Ok(CubeComplex { gens, diff })
}

impl CubeComplex {
    /// True when the differential squares to zero.
    pub fn squares_to_zero(&self) -> bool {
        let mut acc: std::collections::HashMap<usize, i64> = std::collections::HashMap::new();
        self.diff.iter().all(|row| {
            acc.clear();
            for &(m, c) in row {
                for &(t, e) in &self.diff[m] {
                    *acc.entry(t).or_insert(0) += c * e;
                }
            }
            acc.values().all(|&v| v == 0)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::io::from_pd;

    #[test]
    fn trefoil_cube_is_a_complex() {
        let t = from_pd("3_1", &[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]).unwrap();
        for lee in [false, true] {
            let c = build_cube(&t, lee, 14).unwrap();
            assert!(c.squares_to_zero());
            // 2^3 states with 3,2,2,1,2,1,1,2 circles
            assert_eq!(c.gens.len(), 8 + 3 * 4 + 3 * 2 + 4);
        }
    }

    #[test]
    fn kh_part_preserves_j() {
        let t = from_pd("3_1", &[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]).unwrap();
        let c = build_cube(&t, true, 14).unwrap();
        for (g, row) in c.diff.iter().enumerate() {
            for &(h, _) in row {
                assert_eq!(c.gens[h].i, c.gens[g].i + 1);
                let dj = c.gens[h].j - c.gens[g].j;
                assert!(dj == 0 || dj == 4, "jump {dj}");
            }
        }
    }
}
