//! Diagrams described by unoriented local geometry.
//!
//! Constructions such as cabling and braid closure know where strands go
//! long before they know which way each strand runs. They emit
//! [`GeoCrossing`]s (four labels counterclockwise plus which pair is the
//! under-strand) and a few seeds, and [`orient`] propagates directions along
//! each strand.

use std::collections::HashMap;

use super::{Arc, Crossing, LinkDiagram, NameHints};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeoCrossing {
    pub ccw: [Arc; 4],
    /// Slots 0 and 2 of `ccw` carry the under-strand.
    pub under_even: bool,
}

/// A known direction: the strand at `slot` of `crossing` enters it when
/// `incoming`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Seed {
    pub crossing: usize,
    pub slot: usize,
    pub incoming: bool,
}

/// Orient every crossing by walking strands forward from the seeds.
pub fn orient(crossings: &[GeoCrossing], seeds: &[Seed]) -> Result<Vec<Crossing>> {
    let mut occ: HashMap<Arc, Vec<(usize, usize)>> = HashMap::new();
    for (c, x) in crossings.iter().enumerate() {
        for (s, &a) in x.ccw.iter().enumerate() {
            occ.entry(a).or_default().push((c, s));
        }
    }
    if let Some((a, o)) = occ.iter().find(|(_, o)| o.len() != 2) {
        return Err(Error::InvalidDiagram(format!("arc {a} is used {} times (expected 2)", o.len())));
    }
    let mut dir: Vec<[Option<bool>; 4]> = vec![[None; 4]; crossings.len()];
    for seed in seeds {
        let (mut c, mut s) = (seed.crossing, seed.slot);
        if !seed.incoming {
            let a = crossings[c].ccw[s];
            (c, s) = other_end(&occ[&a], (c, s));
        }
        loop {
            match dir[c][s] {
                Some(true) => break,
                Some(false) => {
                    return Err(Error::Orientation(format!("strand through crossing {c} is seeded both ways")));
                }
                None => {}
            }
            let out = (s + 2) % 4;
            if dir[c][out] == Some(true) {
                return Err(Error::Orientation(format!("strand through crossing {c} is seeded both ways")));
            }
            dir[c][s] = Some(true);
            dir[c][out] = Some(false);
            let a = crossings[c].ccw[out];
            (c, s) = other_end(&occ[&a], (c, out));
        }
    }
    crossings
        .iter()
        .zip(&dir)
        .enumerate()
        .map(|(c, (x, d))| {
            let mut inc = [false; 4];
            for s in 0..4 {
                inc[s] = d[s].ok_or_else(|| Error::Orientation(format!("crossing {c} has an unoriented strand")))?;
            }
            Crossing::from_ccw(x.ccw, x.under_even, inc)
        })
        .collect()
}

fn other_end(occ: &[(usize, usize)], here: (usize, usize)) -> (usize, usize) {
    if occ[0] == here {
        occ[1]
    } else {
        occ[0]
    }
}

/// Orient, assemble and relabel canonically.
pub fn build(
    name: &str,
    crossings: &[GeoCrossing],
    free_loops: Vec<Arc>,
    seeds: &[Seed],
    hints: &NameHints,
) -> Result<LinkDiagram> {
    let xs = orient(crossings, seeds)?;
    Ok(LinkDiagram::assemble(name, xs, free_loops, hints)?.canonicalize())
}

/// Local geometry of a braid generator on lanes `i`, `i + 1` (lanes stacked
/// upwards, strands running left to right). `positive` is the usual
/// right-handed generator. Labels: `[in_i, in_i1, out_i, out_i1]`.
pub fn braid_crossing(positive: bool, [in_lo, in_hi, out_lo, out_hi]: [Arc; 4]) -> GeoCrossing {
    if positive {
        // under strand goes lower-left to upper-right
        GeoCrossing { ccw: [in_lo, out_lo, out_hi, in_hi], under_even: true }
    } else {
        // under strand goes upper-left to lower-right
        GeoCrossing { ccw: [in_hi, in_lo, out_lo, out_hi], under_even: true }
    }
}

/// Closure of a braid on `strands` strands. Generator `k > 0` is the
/// positive crossing of lanes `k - 1` and `k`; `-k` is its inverse. All
/// strands run in the same direction.
pub fn braid_closure(name: &str, strands: usize, word: &[i32]) -> Result<LinkDiagram> {
    braid_closure_named(name, strands, word, &[])
}

/// As [`braid_closure`], naming the component through lane `k` after
/// `lanes[k]` (a component meeting several lanes takes the first name).
pub fn braid_closure_named(name: &str, strands: usize, word: &[i32], lanes: &[&str]) -> Result<LinkDiagram> {
    if strands == 0 {
        return Err(Error::Invalid("a braid needs at least one strand".into()));
    }
    let mut cur: Vec<Arc> = (1..=strands as Arc).collect();
    let mut next = strands as Arc + 1;
    let mut xs: Vec<GeoCrossing> = Vec::new();
    let mut seeds = Vec::new();
    for &g in word {
        let i = g.unsigned_abs() as usize;
        if g == 0 || i >= strands {
            return Err(Error::Invalid(format!("generator {g} out of range for {strands} strands")));
        }
        let (lo, hi) = (i - 1, i);
        let (a, b) = (next, next + 1);
        next += 2;
        let x = braid_crossing(g > 0, [cur[lo], cur[hi], a, b]);
        // the lower incoming lane sits at slot 0 (positive) or 1 (negative)
        seeds.push(Seed { crossing: xs.len(), slot: if g > 0 { 0 } else { 1 }, incoming: true });
        xs.push(x);
        cur[lo] = a;
        cur[hi] = b;
    }
    let close: HashMap<Arc, Arc> = cur.iter().enumerate().map(|(k, &l)| (l, k as Arc + 1)).collect();
    let mut free = Vec::new();
    for (k, &l) in cur.iter().enumerate() {
        if l == k as Arc + 1 {
            free.push(l);
        }
    }
    for x in &mut xs {
        for a in &mut x.ccw {
            if let Some(&to) = close.get(a) {
                if *a != to {
                    *a = to;
                }
            }
        }
    }
    let hints: NameHints = lanes.iter().enumerate().map(|(k, l)| (l.to_string(), vec![k as Arc + 1])).collect();
    build(name, &xs, free, &seeds, &hints)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn braid_trefoils() {
        let rh = braid_closure("t", 2, &[1, 1, 1]).unwrap();
        assert!(rh.is_knot());
        assert_eq!(rh.writhe(), 3);
        let lh = braid_closure("t", 2, &[-1, -1, -1]).unwrap();
        assert_eq!(lh.writhe(), -3);
    }

    #[test]
    fn braid_hopf_and_unlinks() {
        let h = braid_closure("h", 2, &[1, 1]).unwrap();
        assert_eq!(h.component_count(), 2);
        assert_eq!(h.linking_number(0, 1), 1);
        let u = braid_closure("u", 3, &[]).unwrap();
        assert_eq!(u.component_count(), 3);
        let k = braid_closure("k", 3, &[1, -2]).unwrap();
        assert!(k.is_knot());
        assert_eq!(k.crossing_count(), 2);
        let n = braid_closure_named("n", 3, &[1, 1, 2, 2], &["B", "R", "G"]).unwrap();
        let idx = |l| n.component_index(l).unwrap();
        assert_eq!(n.linking_number(idx("B"), idx("R")), 1);
        assert_eq!(n.linking_number(idx("G"), idx("R")), 1);
        assert_eq!(n.linking_number(idx("B"), idx("G")), 0);
    }

    #[test]
    fn conflicting_seeds_are_rejected() {
        let xs = [braid_crossing(true, [1, 2, 2, 1])];
        let seeds = [Seed { crossing: 0, slot: 0, incoming: true }, Seed { crossing: 0, slot: 0, incoming: false }];
        assert!(orient(&xs, &seeds).is_err());
    }
}
