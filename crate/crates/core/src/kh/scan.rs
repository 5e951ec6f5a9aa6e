//! Scanning computation of Khovanov homology: crossings are added one at a
//! time to a complex over crossingless tangles; closed loops are delooped
//! and every isomorphism entry is cancelled by Gaussian elimination before
//! the next crossing.

use std::collections::BTreeMap;

use log::debug;

use super::cob::{self, ComposeTemplate, GlueTemplate, Mor, PieceKind, Step, SMOOTHING};
use super::{BigradedRanks, KhOptions};
use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::field::{Field, Rational, Ring, F2};
use crate::util::{DetMap, DetSet};

pub const DEFAULT_MAX_OBJECTS: usize = 4_000_000;

/// Boundary points above which cobordism masks would overflow.
const MAX_BOUNDARY: usize = 2 * cob::MAX_CYCLES;

pub fn khovanov_scan_with(d: &LinkDiagram, opts: &KhOptions) -> Result<BigradedRanks> {
    let order = match &opts.order {
        Some(o) => {
            let mut sorted = o.clone();
            sorted.sort_unstable();
            if sorted != (0..d.crossing_count()).collect::<Vec<_>>() {
                return Err(Error::Invalid("crossing order must be a permutation of the crossings".into()));
            }
            o.clone()
        }
        None => greedy_order(d),
    };
    let ranks = match opts.ring {
        Ring::Rational => Scanner::<Rational>::new(d, opts).run(&order)?,
        Ring::F2 => Scanner::<F2>::new(d, opts).run(&order)?,
    };
    Ok(ranks.times_circle(d.free_loops().len()))
}

/// For every slot `4c + p`, the slot at the other end of its arc.
fn slot_partners(d: &LinkDiagram) -> Vec<u32> {
    let mut by_arc: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (c, x) in d.crossings().iter().enumerate() {
        for (p, &a) in x.pd.iter().enumerate() {
            by_arc.entry(a).or_default().push((4 * c + p) as u32);
        }
    }
    let mut partner = vec![0u32; 4 * d.crossing_count()];
    for ends in by_arc.values() {
        partner[ends[0] as usize] = ends[1];
        partner[ends[1] as usize] = ends[0];
    }
    partner
}

/// Greedy insertion order keeping the open boundary small. Every start
/// crossing is tried; the order with the smallest peak boundary (then the
/// smallest total) wins.
pub fn greedy_order(d: &LinkDiagram) -> Vec<usize> {
    let n = d.crossing_count();
    if n == 0 {
        return Vec::new();
    }
    let partner = slot_partners(d);
    let run = |start: usize| -> (usize, usize, Vec<usize>) {
        let mut done = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut size = 0usize;
        let (mut peak, mut total) = (0, 0);
        let delta = |c: usize, done: &[bool]| -> (i64, usize) {
            let mut grow = 0i64;
            let mut touch = 0;
            for p in 0..4 {
                let o = partner[4 * c + p] as usize / 4;
                if o == c {
                    continue;
                }
                if done[o] {
                    grow -= 1;
                    touch += 1;
                } else {
                    grow += 1;
                }
            }
            (grow, touch)
        };
        let mut next = Some(start);
        while let Some(c) = next {
            let (g, _) = delta(c, &done);
            size = (size as i64 + g) as usize;
            done[c] = true;
            order.push(c);
            peak = peak.max(size);
            total += size;
            next = (0..n).filter(|&k| !done[k]).min_by_key(|&k| {
                let (g, t) = delta(k, &done);
                (g, std::cmp::Reverse(t), k)
            });
        }
        (peak, total, order)
    };
    let starts: Vec<usize> = if n <= 400 { (0..n).collect() } else { vec![0] };
    starts.into_iter().map(run).min_by_key(|(peak, total, _)| (*peak, *total)).map(|(_, _, o)| o).expect("nonempty")
}

#[derive(Clone, Copy, Debug)]
struct Obj {
    m: u32,
    q: i64,
    h: i64,
}

#[derive(Default)]
struct Interner {
    ids: DetMap<Vec<u16>, u32>,
    list: Vec<Vec<u16>>,
}

impl Interner {
    fn intern(&mut self, m: Vec<u16>) -> u32 {
        if let Some(&id) = self.ids.get(&m) {
            return id;
        }
        let id = self.list.len() as u32;
        self.list.push(m.clone());
        self.ids.insert(m, id);
        id
    }
}

struct Complex<F: Field> {
    objs: Vec<Obj>,
    alive: Vec<bool>,
    out: Vec<DetMap<u32, Mor<F>>>,
    inc: Vec<DetSet<u32>>,
    live: usize,
}

impl<F: Field> Complex<F> {
    fn new() -> Self {
        Complex { objs: Vec::new(), alive: Vec::new(), out: Vec::new(), inc: Vec::new(), live: 0 }
    }

    fn push(&mut self, o: Obj) -> u32 {
        self.objs.push(o);
        self.alive.push(true);
        self.out.push(DetMap::default());
        self.inc.push(DetSet::default());
        self.live += 1;
        (self.objs.len() - 1) as u32
    }

    fn set(&mut self, x: u32, y: u32, m: Mor<F>) {
        if m.is_empty() {
            self.out[x as usize].remove(&y);
            self.inc[y as usize].remove(&x);
        } else {
            self.out[x as usize].insert(y, m);
            self.inc[y as usize].insert(x);
        }
    }

    fn remove(&mut self, x: u32) {
        let outs: Vec<u32> = self.out[x as usize].keys().copied().collect();
        for u in outs {
            self.inc[u as usize].remove(&x);
        }
        let ins: Vec<u32> = self.inc[x as usize].iter().copied().collect();
        for w in ins {
            self.out[w as usize].remove(&x);
        }
        self.out[x as usize] = DetMap::default();
        self.inc[x as usize] = DetSet::default();
        self.alive[x as usize] = false;
        self.live -= 1;
    }

    fn sorted_out(&self, x: u32) -> Vec<u32> {
        let mut v: Vec<u32> = self.out[x as usize].keys().copied().collect();
        v.sort_unstable();
        v
    }

    fn sorted_in(&self, x: u32) -> Vec<u32> {
        let mut v: Vec<u32> = self.inc[x as usize].iter().copied().collect();
        v.sort_unstable();
        v
    }
}

struct Scanner<'a, F: Field> {
    d: &'a LinkDiagram,
    opts: &'a KhOptions,
    partner: Vec<u32>,
    cx: Complex<F>,
    matchings: Interner,
    compose_cache: DetMap<(u32, u32, u32), ComposeTemplate>,
}

impl<'a, F: Field> Scanner<'a, F> {
    fn new(d: &'a LinkDiagram, opts: &'a KhOptions) -> Self {
        Scanner {
            d,
            opts,
            partner: slot_partners(d),
            cx: Complex::new(),
            matchings: Interner::default(),
            compose_cache: DetMap::default(),
        }
    }

    fn run(mut self, order: &[usize]) -> Result<BigradedRanks> {
        let empty = self.matchings.intern(Vec::new());
        self.cx.push(Obj { m: empty, q: 0, h: 0 });
        let mut boundary: Vec<u32> = Vec::new();
        let mut done = vec![false; self.d.crossing_count()];
        for (k, &c) in order.iter().enumerate() {
            let (step, next_boundary) = self.step_for(c, &boundary, &done);
            if next_boundary.len() > MAX_BOUNDARY {
                return Err(Error::Guard(format!("open boundary of {} points", next_boundary.len())));
            }
            self.add_crossing(c, &step)?;
            if self.opts.verify && !self.squares_to_zero() {
                return Err(Error::Verification(format!("d∘d ≠ 0 after adding crossing {c}")));
            }
            self.eliminate();
            if self.opts.verify && !self.squares_to_zero() {
                return Err(Error::Verification(format!("d∘d ≠ 0 after elimination at crossing {c}")));
            }
            debug!(
                "scan step {}/{}: crossing {c}, boundary {}, objects {}",
                k + 1,
                order.len(),
                next_boundary.len(),
                self.cx.live
            );
            boundary = next_boundary;
            done[c] = true;
        }
        let (npos, nneg) = self.d.signed_counts();
        let qshift = npos as i64 - 2 * nneg as i64;
        let mut ranks = BigradedRanks::new(self.opts.ring);
        for (x, o) in self.cx.objs.iter().enumerate() {
            if !self.cx.alive[x] {
                continue;
            }
            if !self.cx.out[x].is_empty() {
                return Err(Error::Verification("differential survived full elimination".into()));
            }
            ranks.add(o.h - nneg as i64, o.q + qshift, 1);
        }
        Ok(ranks)
    }

    fn step_for(&self, c: usize, boundary: &[u32], done: &[bool]) -> (Step, Vec<u32>) {
        let n_old = boundary.len();
        let pos: DetMap<u32, usize> = boundary.iter().enumerate().map(|(k, &s)| (s, k)).collect();
        let mut glue: Vec<Option<u32>> = vec![None; n_old + 4];
        for p in 0..4 {
            let o = self.partner[4 * c + p];
            let oc = o as usize / 4;
            if oc == c {
                glue[n_old + p] = Some((n_old + o as usize % 4) as u32);
            } else if done[oc] {
                let q = pos[&o];
                glue[n_old + p] = Some(q as u32);
                glue[q] = Some((n_old + p) as u32);
            }
        }
        let mut fresh: Vec<(u32, usize)> = Vec::new();
        for (k, &s) in boundary.iter().enumerate() {
            if glue[k].is_none() {
                fresh.push((s, k));
            }
        }
        for p in 0..4 {
            if glue[n_old + p].is_none() {
                fresh.push(((4 * c + p) as u32, n_old + p));
            }
        }
        fresh.sort_unstable();
        let mut new_pos = vec![None; n_old + 4];
        let mut node_of_new = Vec::with_capacity(fresh.len());
        for (k, &(_, node)) in fresh.iter().enumerate() {
            new_pos[node] = Some(k as u16);
            node_of_new.push(node as u32);
        }
        let next: Vec<u32> = fresh.iter().map(|f| f.0).collect();
        (Step { n_old, glue, new_pos, node_of_new }, next)
    }

    fn add_crossing(&mut self, c: usize, step: &Step) -> Result<()> {
        let old = std::mem::replace(&mut self.cx, Complex::new());
        let old_matchings = std::mem::take(&mut self.matchings);
        self.compose_cache.clear();
        // first new object of each (old object, resolution), with its loop count
        let mut base: Vec<[(u32, u32); 2]> = vec![[(0, 0); 2]; old.objs.len()];
        let mut glued_cache: DetMap<(u32, usize), (u32, u32)> = DetMap::default();
        for (x, o) in old.objs.iter().enumerate() {
            if !old.alive[x] {
                continue;
            }
            for e in 0..2 {
                let (m, loops) = match glued_cache.get(&(o.m, e)) {
                    Some(&v) => v,
                    None => {
                        let g = step.glue_matching(&old_matchings.list[o.m as usize], &SMOOTHING[e]);
                        let v = (self.matchings.intern(g.matching), g.loops.len() as u32);
                        glued_cache.insert((o.m, e), v);
                        v
                    }
                };
                let first = self.cx.objs.len() as u32;
                for mask in 0u32..1 << loops {
                    let q = o.q + e as i64 + loops as i64 - 2 * mask.count_ones() as i64;
                    self.cx.push(Obj { m, q, h: o.h + e as i64 });
                }
                base[x][e] = (first, loops);
                if self.cx.live > self.opts.max_objects {
                    return Err(Error::Guard(format!(
                        "complex exceeds {} objects while adding crossing {c}",
                        self.opts.max_objects
                    )));
                }
            }
        }
        let mut templates: DetMap<(u32, u32, PieceKind), GlueTemplate> = DetMap::default();
        let mut template = |a: u32, b: u32, kind: PieceKind| -> GlueTemplate {
            templates
                .entry((a, b, kind))
                .or_insert_with(|| {
                    GlueTemplate::new(step, &old_matchings.list[a as usize], &old_matchings.list[b as usize], kind)
                })
                .clone()
        };
        for x in 0..old.objs.len() {
            if !old.alive[x] {
                continue;
            }
            let ox = old.objs[x];
            for y in old.sorted_out(x as u32) {
                let phi = &old.out[x][&y];
                let oy = old.objs[y as usize];
                for (e, kind) in [(0, PieceKind::Id0), (1, PieceKind::Id1)] {
                    let t = template(ox.m, oy.m, kind);
                    let (bx, lx) = base[x][e];
                    let (by, ly) = base[y as usize][e];
                    for s in 0..1u32 << lx {
                        for u in 0..1u32 << ly {
                            let r = t.apply(phi, s, u);
                            self.cx.set(bx + s, by + u, r);
                        }
                    }
                }
            }
            let t = template(ox.m, ox.m, PieceKind::Saddle);
            let sign = if ox.h % 2 == 0 { F::one() } else { F::one().neg() };
            let phi = vec![(0, sign)];
            let (b0, l0) = base[x][0];
            let (b1, l1) = base[x][1];
            for s in 0..1u32 << l0 {
                for u in 0..1u32 << l1 {
                    let r = t.apply(&phi, s, u);
                    self.cx.set(b0 + s, b1 + u, r);
                }
            }
        }
        Ok(())
    }

    fn compose(&mut self, w: u32, y: u32, u: u32, beta: &Mor<F>, alpha: &Mor<F>) -> Mor<F> {
        let (mw, my, mu) = (self.cx.objs[w as usize].m, self.cx.objs[y as usize].m, self.cx.objs[u as usize].m);
        if self.compose_cache.len() > 1 << 20 {
            self.compose_cache.clear();
        }
        let list = &self.matchings.list;
        self.compose_cache
            .entry((mw, my, mu))
            .or_insert_with(|| ComposeTemplate::new(&list[mw as usize], &list[my as usize], &list[mu as usize]))
            .compose(beta, alpha)
    }

    /// Scalar of an isomorphism entry, if `x -> y` is one.
    fn iso(&self, x: u32, y: u32) -> Option<F> {
        let (ox, oy) = (self.cx.objs[x as usize], self.cx.objs[y as usize]);
        if ox.m != oy.m || ox.q != oy.q {
            return None;
        }
        let m = self.cx.out[x as usize].get(&y)?;
        debug_assert!(m.len() == 1 && m[0].0 == 0, "degree-0 endomorphism not scalar: {m:?}");
        Some(m[0].1.clone())
    }

    fn eliminate(&mut self) {
        loop {
            let mut cands: Vec<(bool, usize, u32, u32)> = Vec::new();
            for x in 0..self.cx.objs.len() as u32 {
                if !self.cx.alive[x as usize] {
                    continue;
                }
                for y in self.cx.sorted_out(x) {
                    if let Some(c) = self.iso(x, y) {
                        let cost = self.cx.inc[y as usize].len() * self.cx.out[x as usize].len();
                        cands.push((!c.is_unit_sign(), cost, x, y));
                    }
                }
            }
            if cands.is_empty() {
                break;
            }
            cands.sort_unstable();
            for (_, _, x, y) in cands {
                if !self.cx.alive[x as usize] || !self.cx.alive[y as usize] {
                    continue;
                }
                if let Some(c) = self.iso(x, y) {
                    self.cancel(x, y, c);
                }
            }
        }
    }

    /// Gaussian elimination of the isomorphism `c·id: x -> y`.
    fn cancel(&mut self, x: u32, y: u32, c: F) {
        let minus_inv = c.inv().neg();
        let sources: Vec<u32> = self.cx.sorted_in(y).into_iter().filter(|&w| w != x).collect();
        let targets: Vec<u32> = self.cx.sorted_out(x).into_iter().filter(|&u| u != y).collect();
        for &w in &sources {
            let beta = self.cx.out[w as usize][&y].clone();
            for &u in &targets {
                let alpha = self.cx.out[x as usize][&u].clone();
                let prod = self.compose(w, y, u, &beta, &alpha);
                if prod.is_empty() {
                    continue;
                }
                let cur = self.cx.out[w as usize].get(&u).cloned().unwrap_or_default();
                let next = cob::add_scaled(&cur, &minus_inv, &prod);
                self.cx.set(w, u, next);
            }
        }
        self.cx.remove(x);
        self.cx.remove(y);
    }

    fn squares_to_zero(&mut self) -> bool {
        for x in 0..self.cx.objs.len() as u32 {
            if !self.cx.alive[x as usize] {
                continue;
            }
            let mut acc: BTreeMap<u32, Mor<F>> = BTreeMap::new();
            for y in self.cx.sorted_out(x) {
                let f = self.cx.out[x as usize][&y].clone();
                for u in self.cx.sorted_out(y) {
                    let g = self.cx.out[y as usize][&u].clone();
                    let p = self.compose(x, y, u, &f, &g);
                    let e = acc.entry(u).or_default();
                    *e = cob::add_scaled(e, &F::one(), &p);
                }
            }
            if acc.values().any(|m| !m.is_empty()) {
                return false;
            }
        }
        true
    }
}
