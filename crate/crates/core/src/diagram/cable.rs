//! Blackboard cabling of one component, with boxes spliced into the cable.
//!
//! Strands of a cable are indexed by position: position 0 is the rightmost
//! strand with respect to the component's direction of travel, higher
//! positions lie further left. Every crossing of the cabled component turns
//! into a grid of crossings; a box (full twists or an arbitrary tangle) can
//! be inserted on one arc.

use std::collections::{BTreeSet, HashMap};

use super::geo::{self, braid_crossing, GeoCrossing, Seed};
use super::{Arc, LinkDiagram, NameHints};
use crate::error::{Error, Result};

/// A tangle in a disk with `g` strand ends on each side.
///
/// Boundary labels run counterclockwise around the disk:
/// `dep_0, .., dep_{g-1}, arr_{g-1}, .., arr_0`. When the box sits on a
/// cable running left to right, `arr_k` meets the arriving strand at
/// position `k` and `dep_k` the departing one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxTangle {
    pub crossings: Vec<GeoCrossing>,
    pub seeds: Vec<Seed>,
    pub boundary: Vec<Arc>,
    /// Per boundary point: does the strand there run into the box?
    pub inward: Vec<bool>,
}

impl BoxTangle {
    pub fn width(&self) -> usize {
        self.boundary.len() / 2
    }

    pub fn dep(&self, k: usize) -> usize {
        k
    }

    pub fn arr(&self, k: usize) -> usize {
        2 * self.width() - 1 - k
    }

    /// `g` straight strands, all running left to right.
    pub fn identity(g: usize) -> Self {
        Self::braid(g, &[]).expect("empty braid")
    }

    /// Braid box; generator `k > 0` crosses lanes `k - 1` and `k`
    /// positively. Strands run left to right.
    pub fn braid(g: usize, word: &[i32]) -> Result<Self> {
        let mut next: Arc = 1;
        let arr: Vec<Arc> = (0..g)
            .map(|_| {
                next += 1;
                next - 1
            })
            .collect();
        let mut cur = arr.clone();
        let mut crossings = Vec::new();
        let mut seeds = Vec::new();
        for &gen in word {
            let i = gen.unsigned_abs() as usize;
            if gen == 0 || i >= g {
                return Err(Error::Invalid(format!("generator {gen} out of range for {g} strands")));
            }
            let (lo, hi) = (i - 1, i);
            let x = braid_crossing(gen > 0, [cur[lo], cur[hi], next, next + 1]);
            seeds.push(Seed { crossing: crossings.len(), slot: if gen > 0 { 0 } else { 1 }, incoming: true });
            seeds.push(Seed { crossing: crossings.len(), slot: if gen > 0 { 3 } else { 0 }, incoming: true });
            crossings.push(x);
            cur[lo] = next;
            cur[hi] = next + 1;
            next += 2;
        }
        let mut boundary = cur.clone();
        boundary.extend(arr.iter().rev());
        let mut inward = vec![false; g];
        inward.extend(vec![true; g]);
        Ok(BoxTangle { crossings, seeds, boundary, inward })
    }
}

/// Something spliced into the cable.
#[derive(Clone, Copy, Debug)]
pub enum Insert<'a> {
    /// Signed number of full twists of all strands.
    Twist(i64),
    Tangle(&'a BoxTangle),
}

#[derive(Clone, Debug)]
pub struct CableJob<'a> {
    pub comp: usize,
    pub strands: usize,
    /// Arc of `comp` that receives the inserts, in order of travel.
    pub arc: Arc,
    pub inserts: Vec<Insert<'a>>,
    /// Names for the resulting strand components by position; strands
    /// joined by a tangle take the first applicable name.
    pub names: Vec<String>,
}

/// Growable label allocator with merging.
struct Labels {
    parent: Vec<Arc>,
}

impl Labels {
    fn new() -> Self {
        Labels { parent: vec![0] }
    }

    fn fresh(&mut self) -> Arc {
        let l = self.parent.len() as Arc;
        self.parent.push(l);
        l
    }

    fn find(&mut self, mut a: Arc) -> Arc {
        while self.parent[a as usize] != a {
            let up = self.parent[self.parent[a as usize] as usize];
            self.parent[a as usize] = up;
            a = up;
        }
        a
    }

    fn union(&mut self, a: Arc, b: Arc) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi as usize] = lo;
        }
    }
}

/// Cable `job.comp` with `job.strands` blackboard-parallel strands and
/// splice the inserts into arc `job.arc`.
pub fn cable(d: &LinkDiagram, job: &CableJob, name: &str) -> Result<LinkDiagram> {
    Ok(cable_tracked(d, job, name, &[])?.0)
}

/// As [`cable`], also returning the new label of the copy of each arc in
/// `track` at the given strand position (its first segment when the arc
/// carries inserts). Unrelated components only have position 0.
pub fn cable_tracked(
    d: &LinkDiagram,
    job: &CableJob,
    name: &str,
    track: &[(Arc, usize)],
) -> Result<(LinkDiagram, Vec<Arc>)> {
    let n = job.strands;
    if n == 0 {
        return Err(Error::Invalid("a cable needs at least one strand".into()));
    }
    let comp_of = d.arc_components();
    match comp_of.get(&job.arc) {
        Some(&c) if c == job.comp => {}
        _ => return Err(Error::Site(format!("arc {} is not on component {}", job.arc, job.comp))),
    }
    let tangles: Vec<&BoxTangle> = job
        .inserts
        .iter()
        .filter_map(|i| match i {
            Insert::Tangle(t) => Some(*t),
            Insert::Twist(_) => None,
        })
        .collect();
    if tangles.len() > 1 {
        return Err(Error::Invalid("at most one tangle per cable".into()));
    }
    // direction of each strand relative to the component
    let fwd: Vec<bool> = match tangles.first() {
        Some(t) => {
            if t.width() != n {
                return Err(Error::Invalid(format!("tangle of width {} on a {n}-strand cable", t.width())));
            }
            (0..n).map(|k| !t.inward[t.dep(k)]).collect()
        }
        None => vec![true; n],
    };
    let mult = |c: usize| if c == job.comp { n } else { 1 };
    let dir = |c: usize, p: usize| if c == job.comp { fwd[p] } else { true };

    let mut lab = Labels::new();
    let mut tail_lab: HashMap<Arc, Vec<Arc>> = HashMap::new();
    let mut arcs: Vec<Arc> = comp_of.keys().copied().collect();
    arcs.sort_unstable();
    for &e in &arcs {
        let m = mult(comp_of[&e]);
        tail_lab.insert(e, (0..m).map(|_| lab.fresh()).collect());
    }
    let mut head_lab = tail_lab.clone();
    let free: BTreeSet<Arc> = d.free_loops().into_iter().collect();

    let mut xs: Vec<GeoCrossing> = Vec::new();
    let mut seeds: Vec<Seed> = Vec::new();

    // inserts on the chosen arc
    let mut cur = tail_lab[&job.arc].clone();
    let mut lane_fwd = fwd.clone();
    for ins in &job.inserts {
        match *ins {
            Insert::Twist(t) => {
                let mut word = Vec::new();
                for _ in 0..t.unsigned_abs() {
                    for _ in 0..n {
                        for i in 1..n as i32 {
                            word.push(if t > 0 { i } else { -i });
                        }
                    }
                }
                for gen in word {
                    let i = gen.unsigned_abs() as usize;
                    let (lo, hi) = (i - 1, i);
                    let (a, b) = (lab.fresh(), lab.fresh());
                    let c = xs.len();
                    xs.push(braid_crossing(gen > 0, [cur[lo], cur[hi], a, b]));
                    // under strand comes from lo on a positive generator
                    let (under_lane, over_lane) = if gen > 0 { (lo, hi) } else { (hi, lo) };
                    let over_in = if gen > 0 { 3 } else { 1 };
                    seeds.push(Seed { crossing: c, slot: if lane_fwd[under_lane] { 0 } else { 2 }, incoming: true });
                    seeds.push(Seed {
                        crossing: c,
                        slot: if lane_fwd[over_lane] { over_in } else { (over_in + 2) % 4 },
                        incoming: true,
                    });
                    cur[lo] = a;
                    cur[hi] = b;
                    lane_fwd.swap(lo, hi);
                }
            }
            Insert::Tangle(t) => {
                let base = xs.len();
                let mut map: HashMap<Arc, Arc> = HashMap::new();
                let out: Vec<Arc> = (0..n).map(|_| lab.fresh()).collect();
                for k in 0..n {
                    for (pos, global) in [(t.arr(k), cur[k]), (t.dep(k), out[k])] {
                        let local = t.boundary[pos];
                        match map.get(&local) {
                            Some(&g) => lab.union(g, global),
                            None => {
                                map.insert(local, global);
                            }
                        }
                    }
                }
                for x in &t.crossings {
                    let mut ccw = [0; 4];
                    for s in 0..4 {
                        let l = x.ccw[s];
                        ccw[s] = match map.get(&l) {
                            Some(&g) => g,
                            None => {
                                let g = lab.fresh();
                                map.insert(l, g);
                                g
                            }
                        };
                    }
                    xs.push(GeoCrossing { ccw, under_even: x.under_even });
                }
                seeds.extend(t.seeds.iter().map(|s| Seed { crossing: base + s.crossing, ..*s }));
                cur = out;
            }
        }
    }
    if free.contains(&job.arc) {
        let start = tail_lab[&job.arc].clone();
        for k in 0..n {
            lab.union(cur[k], start[k]);
        }
    } else {
        head_lab.insert(job.arc, cur);
    }

    // grid of crossings for every original crossing
    for x in d.crossings() {
        let [s0, s1, s2, s3] = x.pd;
        let (cu, co) = (comp_of[&s0], comp_of[&s1]);
        let (nu, no) = (mult(cu), mult(co));
        let positive = x.sign > 0;
        let (o_in, o_out) = if positive { (s3, s1) } else { (s1, s3) };
        // under strand p meets over strands in order of increasing x
        let qord: Vec<usize> = if positive { (0..no).collect() } else { (0..no).rev().collect() };
        // over strand q meets under strands along its travel (-y when positive)
        let pord: Vec<usize> = if positive { (0..nu).rev().collect() } else { (0..nu).collect() };
        let mut seg_u: Vec<Vec<Arc>> = Vec::with_capacity(nu);
        for p in 0..nu {
            let mut v = vec![head_lab[&s0][p]];
            for _ in 1..no {
                v.push(lab.fresh());
            }
            v.push(tail_lab[&s2][p]);
            seg_u.push(v);
        }
        let mut seg_o: Vec<Vec<Arc>> = Vec::with_capacity(no);
        for q in 0..no {
            let mut v = vec![head_lab[&o_in][q]];
            for _ in 1..nu {
                v.push(lab.fresh());
            }
            v.push(tail_lab[&o_out][q]);
            seg_o.push(v);
        }
        let ku_of: HashMap<usize, usize> = qord.iter().enumerate().map(|(k, &q)| (q, k)).collect();
        let ko_of: HashMap<usize, usize> = pord.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        for p in 0..nu {
            for q in 0..no {
                let (ku, ko) = (ku_of[&q], ko_of[&p]);
                let (o_a, o_b) = (seg_o[q][ko], seg_o[q][ko + 1]);
                let (slot1, slot3) = if positive { (o_b, o_a) } else { (o_a, o_b) };
                let c = xs.len();
                xs.push(GeoCrossing { ccw: [seg_u[p][ku], slot1, seg_u[p][ku + 1], slot3], under_even: true });
                seeds.push(Seed { crossing: c, slot: if dir(cu, p) { 0 } else { 2 }, incoming: true });
                let over_in = if positive { 3 } else { 1 };
                seeds.push(Seed {
                    crossing: c,
                    slot: if dir(co, q) { over_in } else { (over_in + 2) % 4 },
                    incoming: true,
                });
            }
        }
    }

    for x in &mut xs {
        for a in &mut x.ccw {
            *a = lab.find(*a);
        }
    }
    let used: BTreeSet<Arc> = xs.iter().flat_map(|x| x.ccw).collect();
    let mut loops: BTreeSet<Arc> = BTreeSet::new();
    for &e in &free {
        for &l in &tail_lab[&e] {
            let r = lab.find(l);
            if !used.contains(&r) {
                loops.insert(r);
            }
        }
    }

    let mut hints: NameHints = Vec::new();
    for (k, c) in d.components().iter().enumerate() {
        if k == job.comp {
            for (p, nm) in job.names.iter().enumerate().take(n) {
                let l = lab.find(tail_lab[&c.arcs[0]][p]);
                hints.push((nm.clone(), vec![l]));
            }
        } else {
            let l = lab.find(tail_lab[&c.arcs[0]][0]);
            hints.push((c.label.clone(), vec![l]));
        }
    }
    let oriented = geo::orient(&xs, &seeds)?;
    let (out, map) = LinkDiagram::assemble(name, oriented, loops.into_iter().collect(), &hints)?.canonicalize_map();
    let tracked = track
        .iter()
        .map(|&(e, p)| {
            let l = tail_lab
                .get(&e)
                .and_then(|v| v.get(p))
                .ok_or_else(|| Error::Site(format!("no copy {p} of arc {e}")))?;
            Ok(map[&lab.find(*l)])
        })
        .collect::<Result<Vec<Arc>>>()?;
    Ok((out, tracked))
}

impl LinkDiagram {
    /// Replace component `comp` by `strands` blackboard-parallel copies
    /// with `twists` extra full twists. Strand `k` is named `names[k]`.
    pub fn parallel(&self, comp: usize, strands: usize, twists: i64, names: &[String]) -> Result<LinkDiagram> {
        let arc = *self
            .components()
            .get(comp)
            .ok_or_else(|| Error::Site(format!("no component {comp}")))?
            .arcs
            .first()
            .expect("component with arcs");
        let job = CableJob { comp, strands, arc, inserts: vec![Insert::Twist(twists)], names: names.to_vec() };
        cable(self, &job, &self.name)
    }
}
