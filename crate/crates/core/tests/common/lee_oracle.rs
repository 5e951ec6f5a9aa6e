//! Independent `s` oracle: builds the Lee complex in degrees -1 and 0 from
//! the crossings alone, forms the canonical generator of the oriented
//! resolution and finds the largest filtration level at which its class
//! has a representative. Dense exact linear algebra; small knots only.

use std::collections::HashMap;

use knotbench::diagram::LinkDiagram;
use num_rational::BigRational;
use num_traits::Zero;

type Q = BigRational;

struct Resolution {
    /// circle index of every arc label
    circle: HashMap<u32, usize>,
    count: usize,
}

fn resolve(d: &LinkDiagram, r: u64) -> Resolution {
    let mut parent: HashMap<u32, u32> = HashMap::new();
    fn find(p: &mut HashMap<u32, u32>, x: u32) -> u32 {
        let y = *p.get(&x).unwrap_or(&x);
        if y == x {
            return x;
        }
        let root = find(p, y);
        p.insert(x, root);
        root
    }
    let join = |p: &mut HashMap<u32, u32>, a: u32, b: u32| {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra != rb {
            p.insert(ra.max(rb), ra.min(rb));
        }
    };
    let mut arcs: Vec<u32> = Vec::new();
    for (k, x) in d.crossings().iter().enumerate() {
        let [a, b, c, e] = x.pd;
        arcs.extend([a, b, c, e]);
        if r >> k & 1 == 0 {
            join(&mut parent, a, b);
            join(&mut parent, c, e);
        } else {
            join(&mut parent, a, e);
            join(&mut parent, b, c);
        }
    }
    arcs.sort_unstable();
    arcs.dedup();
    let mut ids: HashMap<u32, usize> = HashMap::new();
    let mut circle = HashMap::new();
    for a in arcs {
        let root = find(&mut parent, a);
        let n = ids.len();
        let id = *ids.entry(root).or_insert(n);
        circle.insert(a, id);
    }
    Resolution { circle, count: ids.len() }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Generator {
    r: u64,
    /// bit k set: circle k carries `x`, otherwise `1`
    labels: u64,
}

fn q_degree(d: &LinkDiagram, g: &Generator, circles: usize) -> i64 {
    let (np, nm) = signs(d);
    let xs = g.labels.count_ones() as i64;
    let ones = circles as i64 - xs;
    ones - xs + g.r.count_ones() as i64 + np - 2 * nm
}

fn signs(d: &LinkDiagram) -> (i64, i64) {
    let np = d.crossings().iter().filter(|c| c.sign > 0).count() as i64;
    (np, d.crossing_count() as i64 - np)
}

fn generators(d: &LinkDiagram, height: u32) -> Vec<(Generator, i64)> {
    let n = d.crossing_count();
    let mut out = Vec::new();
    for r in 0..(1u64 << n) {
        if r.count_ones() != height {
            continue;
        }
        let res = resolve(d, r);
        for labels in 0..(1u64 << res.count) {
            let g = Generator { r, labels };
            let q = q_degree(d, &g, res.count);
            out.push((g, q));
        }
    }
    out
}

/// Lee differential of one generator, with `t = 1`.
fn differential(d: &LinkDiagram, g: &Generator) -> Vec<(Generator, i64)> {
    let src = resolve(d, g.r);
    let mut out = Vec::new();
    for k in 0..d.crossing_count() {
        if g.r >> k & 1 == 1 {
            continue;
        }
        let sign = if (g.r & ((1u64 << k) - 1)).count_ones().is_multiple_of(2) { 1 } else { -1 };
        let r2 = g.r | 1 << k;
        let tgt = resolve(d, r2);
        let [a, b, c, _] = d.crossings()[k].pd;
        let label = |res: &Resolution, labels: u64, arc: u32| labels >> res.circle[&arc] & 1 == 1;
        // unaffected circles keep their labels
        let mut base = 0u64;
        let (ca, cc) = (src.circle[&a], src.circle[&c]);
        for (&arc, &z) in &tgt.circle {
            let old = src.circle[&arc];
            if old != ca && old != cc && label(&src, g.labels, arc) {
                base |= 1 << z;
            }
        }
        if ca != cc {
            let z = tgt.circle[&a];
            let (u, v) = (label(&src, g.labels, a), label(&src, g.labels, c));
            // 1*1 = 1, 1*x = x, x*x = 1
            let labels = if u ^ v { base | 1 << z } else { base };
            out.push((Generator { r: r2, labels }, sign));
        } else {
            let (z1, z2) = (tgt.circle[&a], tgt.circle[&b]);
            let terms: [(bool, bool); 2] =
                if label(&src, g.labels, a) { [(true, true), (false, false)] } else { [(false, true), (true, false)] };
            for (u, v) in terms {
                let mut labels = base;
                if u {
                    labels |= 1 << z1;
                }
                if v {
                    labels |= 1 << z2;
                }
                out.push((Generator { r: r2, labels }, sign));
            }
        }
    }
    out
}

/// Canonical Lee generator of the oriented resolution: Seifert circles meeting
/// at a crossing get opposite labels `1 + x` and `1 - x`.
fn canonical(d: &LinkDiagram) -> (u64, Vec<(u64, i64)>) {
    let r: u64 = d.crossings().iter().enumerate().filter(|(_, c)| c.sign < 0).map(|(k, _)| 1u64 << k).sum();
    let res = resolve(d, r);
    let mut colour: Vec<Option<bool>> = vec![None; res.count];
    colour[0] = Some(false);
    let mut changed = true;
    while changed {
        changed = false;
        for x in d.crossings() {
            let (p, q) = (res.circle[&x.pd[0]], res.circle[&x.pd[2]]);
            assert_ne!(p, q, "oriented resolution touches itself");
            match (colour[p], colour[q]) {
                (Some(u), None) => {
                    colour[q] = Some(!u);
                    changed = true;
                }
                (None, Some(v)) => {
                    colour[p] = Some(!v);
                    changed = true;
                }
                (Some(u), Some(v)) => assert_ne!(u, v, "Seifert graph is not bipartite"),
                (None, None) => {}
            }
        }
    }
    let mut terms = Vec::new();
    for labels in 0..(1u64 << res.count) {
        let mut coef = 1;
        for (z, col) in colour.iter().enumerate() {
            let is_x = labels >> z & 1 == 1;
            if is_x && col.expect("disconnected diagram") {
                coef = -coef;
            }
        }
        terms.push((labels, coef));
    }
    (r, terms)
}

fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let width = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let f = &rows[i][col] / &pivot;
                for j in col..width {
                    let t = &f * &rows[rank][j];
                    rows[i][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rasmussen invariant of a knot diagram.
pub fn s(d: &LinkDiagram) -> i64 {
    assert!(d.is_knot());
    if d.crossing_count() == 0 {
        return 0;
    }
    let (_, nm) = signs(d);
    let c0 = generators(d, nm as u32);
    let cm1 = if nm > 0 { generators(d, nm as u32 - 1) } else { Vec::new() };
    let index: HashMap<Generator, usize> = c0.iter().enumerate().map(|(i, (g, _))| (g.clone(), i)).collect();
    // columns of d: C^-1 -> C^0, stored as rows for elimination
    let images: Vec<Vec<Q>> = cm1
        .iter()
        .map(|(g, _)| {
            let mut v = vec![Q::zero(); c0.len()];
            for (h, c) in differential(d, g) {
                v[index[&h]] += Q::from_integer(c.into());
            }
            v
        })
        .collect();
    let (r, terms) = canonical(d);
    let mut so = vec![Q::zero(); c0.len()];
    for (labels, c) in terms {
        so[index[&Generator { r, labels }]] = Q::from_integer(c.into());
    }
    let mut levels: Vec<i64> = c0.iter().map(|(_, q)| *q).collect();
    levels.sort_unstable();
    levels.dedup();
    // largest p with s_o in F_p + image: its restriction to levels below p
    // must lie in the span of the restricted images
    let mut best = i64::MIN;
    for &p in &levels {
        let low: Vec<usize> = (0..c0.len()).filter(|&i| c0[i].1 < p).collect();
        let restrict = |v: &Vec<Q>| low.iter().map(|&i| v[i].clone()).collect::<Vec<Q>>();
        let im: Vec<Vec<Q>> = images.iter().map(restrict).collect();
        let mut with = im.clone();
        with.push(restrict(&so));
        if rank(with) == rank(im) {
            best = best.max(p);
        }
    }
    best + 1
}
