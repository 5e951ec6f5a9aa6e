use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Arc, Crossing, LinkDiagram, NameHints};
use crate::error::{Error, Result};
use crate::util::UnionFind;

impl LinkDiagram {
    /// Exchange over and under at every crossing.
    pub fn mirror(&self) -> LinkDiagram {
        let crossings = self.crossings().iter().map(Crossing::mirrored).collect();
        LinkDiagram::from_raw(format!("mirror({})", self.name), crossings, self.components().to_vec())
    }

    /// Switch over and under at crossing `c` only.
    pub fn switch_crossing(&self, c: usize) -> Result<LinkDiagram> {
        if c >= self.crossing_count() {
            return Err(Error::Site(format!("no crossing {c}")));
        }
        let mut crossings = self.crossings().to_vec();
        crossings[c] = crossings[c].mirrored();
        Ok(LinkDiagram::from_raw(self.name.clone(), crossings, self.components().to_vec()))
    }

    /// Reverse the orientation of every component.
    pub fn reverse(&self) -> LinkDiagram {
        let all: Vec<usize> = (0..self.component_count()).collect();
        let mut d = self.reverse_components(&all);
        d.name = format!("reverse({})", self.name);
        d
    }

    /// Reverse the orientation of the listed components only.
    pub fn reverse_components(&self, which: &[usize]) -> LinkDiagram {
        let comp = self.arc_components();
        let flip = |a: &Arc| which.contains(&comp[a]);
        let crossings = self
            .crossings()
            .iter()
            .map(|x| {
                let mut inc = [false; 4];
                for p in 0..4 {
                    inc[p] = x.is_incoming(p) ^ flip(&x.pd[p]);
                }
                Crossing::from_ccw(x.pd, true, inc).expect("reversal keeps strands consistent")
            })
            .collect();
        let components = self
            .components()
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let mut c = c.clone();
                if which.contains(&k) && c.arcs.len() > 1 {
                    c.arcs[1..].reverse();
                }
                c
            })
            .collect();
        LinkDiagram::from_raw(self.name.clone(), crossings, components)
    }

    /// Shift every arc label by `offset`.
    pub fn offset_labels(&self, offset: Arc) -> LinkDiagram {
        let crossings =
            self.crossings().iter().map(|x| Crossing { pd: x.pd.map(|a| a + offset), sign: x.sign }).collect();
        let components = self
            .components()
            .iter()
            .map(|c| super::Component { label: c.label.clone(), arcs: c.arcs.iter().map(|a| a + offset).collect() })
            .collect();
        LinkDiagram::from_raw(self.name.clone(), crossings, components)
    }

    /// Connected sum along arc `a1` of `self` and arc `a2` of `other`.
    /// The merged component keeps `self`'s label; colliding labels from
    /// `other` get a `'` suffix.
    pub fn connected_sum(&self, other: &LinkDiagram, a1: Arc, a2: Arc) -> Result<LinkDiagram> {
        let comp1 = self.arc_components();
        let comp2 = other.arc_components();
        let (&k1, &k2) = match (comp1.get(&a1), comp2.get(&a2)) {
            (Some(k1), Some(k2)) => (k1, k2),
            _ => return Err(Error::Site(format!("arcs {a1}/{a2} are not in the summands"))),
        };
        let offset = self.max_label();
        let o = other.offset_labels(offset);
        let y = a2 + offset;
        let x = a1;
        let free1 = self.free_loops().contains(&x);
        let free2 = o.free_loops().contains(&y);

        let mut crossings: Vec<Crossing> = self.crossings().to_vec();
        let base = crossings.len();
        crossings.extend_from_slice(o.crossings());
        let mut free: Vec<Arc> = self.free_loops().into_iter().chain(o.free_loops()).collect();
        match (free1, free2) {
            (true, _) => free.retain(|&l| l != x),
            (false, true) => free.retain(|&l| l != y),
            (false, false) => {
                let hx = self.arc_ends()[&x].head.expect("arc with crossings");
                let hy = o.arc_ends()[&y].head.expect("arc with crossings");
                crossings[hx.0].pd[hx.1] = y;
                crossings[base + hy.0].pd[hy.1] = x;
            }
        }

        let used: BTreeSet<String> = self.components().iter().map(|c| c.label.clone()).collect();
        let mut hints: NameHints = self.hints();
        if free1 {
            // the merged component is entirely other's
            hints[k1].1 = o.components()[k2].arcs.clone();
        }
        for (k, c) in o.components().iter().enumerate() {
            if k == k2 {
                continue;
            }
            let mut label = c.label.clone();
            while used.contains(&label) {
                label.push('\'');
            }
            hints.push((label, c.arcs.clone()));
        }
        LinkDiagram::assemble(&format!("{}#{}", self.name, other.name), crossings, free, &hints)
    }

    /// Oriented band move joining arcs `x` and `y` through a face that both
    /// bound, running the same way around it. The component through `x`
    /// keeps its label; when the band splits a component, the new piece is
    /// named `split_name`.
    pub fn band_move(&self, x: Arc, y: Arc, split_name: &str) -> Result<LinkDiagram> {
        if x == y {
            return Err(Error::Site(format!("band needs two distinct arcs, got {x} twice")));
        }
        let ends = self.arc_ends();
        let (hx, hy) = match (ends.get(&x).and_then(|e| e.head), ends.get(&y).and_then(|e| e.head)) {
            (Some(hx), Some(hy)) => (hx, hy),
            _ => return Err(Error::Site(format!("arcs {x}, {y} must both meet crossings"))),
        };
        let forward = |e: &super::faces::FaceEdge| !self.crossings()[e.from.0].is_incoming(e.from.1);
        let ok = self.faces().iter().any(|f| {
            let dx: Vec<bool> = f.edges.iter().filter(|e| e.arc == x).map(forward).collect();
            let dy: Vec<bool> = f.edges.iter().filter(|e| e.arc == y).map(forward).collect();
            dx.iter().any(|a| dy.contains(a))
        });
        if !ok {
            return Err(Error::Site(format!("arcs {x} and {y} do not bound a common face with matching orientation")));
        }
        let mut crossings = self.crossings().to_vec();
        crossings[hx.0].pd[hx.1] = y;
        crossings[hy.0].pd[hy.1] = x;
        let comp = self.arc_components();
        let (cx, cy) = (comp[&x], comp[&y]);
        let mut hints: NameHints = Vec::new();
        for (k, c) in self.components().iter().enumerate() {
            if k == cx {
                hints.push((c.label.clone(), vec![x]));
                if cx == cy {
                    hints.push((split_name.to_string(), vec![y]));
                }
            } else if k != cy {
                hints.push((c.label.clone(), c.arcs.clone()));
            }
        }
        LinkDiagram::assemble(&self.name, crossings, self.free_loops(), &hints)
    }

    /// Number of Seifert circles (oriented smoothing of every crossing).
    pub fn seifert_circles(&self) -> usize {
        let labels: Vec<Arc> = self.arcs().into_iter().collect();
        let index: HashMap<Arc, usize> = labels.iter().enumerate().map(|(k, &a)| (a, k)).collect();
        let mut uf = UnionFind::new(labels.len());
        for x in self.crossings() {
            for (a, b) in x.oriented_smoothing() {
                uf.union(index[&a], index[&b]);
            }
        }
        (0..labels.len()).map(|k| uf.find(k)).collect::<BTreeSet<_>>().len()
    }

    /// Genus of the Seifert surface from Seifert's algorithm, an upper
    /// bound for the slice genus.
    pub fn seifert_genus_upper(&self) -> Result<i64> {
        if !self.is_knot() {
            return Err(Error::Invalid(format!(
                "{} has {} components; expected a knot",
                self.name,
                self.component_count()
            )));
        }
        let c = self.crossing_count() as i64;
        let s = self.seifert_circles() as i64;
        Ok((c - s + 1) / 2)
    }

    /// Remove components. Strands of surviving components that crossed a
    /// removed one are merged through the vacated crossing; merged arcs
    /// take the smallest label of the run.
    pub fn delete_components(&self, drop: &[usize]) -> Result<LinkDiagram> {
        if drop.len() >= self.component_count() {
            return Err(Error::Invalid("cannot delete every component".into()));
        }
        let comp = self.arc_components();
        let labels: Vec<Arc> = self.arcs().into_iter().collect();
        let index: HashMap<Arc, usize> = labels.iter().enumerate().map(|(k, &a)| (a, k)).collect();
        let mut uf = UnionFind::new(labels.len());
        let mut kept = Vec::new();
        for x in self.crossings() {
            let under_gone = drop.contains(&comp[&x.pd[0]]);
            let over_gone = drop.contains(&comp[&x.pd[1]]);
            match (under_gone, over_gone) {
                (false, false) => kept.push(*x),
                (true, true) => {}
                (true, false) => {
                    uf.union(index[&x.pd[1]], index[&x.pd[3]]);
                }
                (false, true) => {
                    uf.union(index[&x.pd[0]], index[&x.pd[2]]);
                }
            }
        }
        let mut rep: BTreeMap<usize, Arc> = BTreeMap::new();
        for &a in &labels {
            let r = uf.find(index[&a]);
            let e = rep.entry(r).or_insert(a);
            *e = (*e).min(a);
        }
        let mut map = |a: Arc| rep[&uf.find(index[&a])];
        let crossings: Vec<Crossing> = kept.iter().map(|x| Crossing { pd: x.pd.map(&mut map), sign: x.sign }).collect();
        let used: BTreeSet<Arc> = crossings.iter().flat_map(|x| x.pd).collect();
        let mut free = Vec::new();
        let mut hints: NameHints = Vec::new();
        for (k, c) in self.components().iter().enumerate() {
            if drop.contains(&k) {
                continue;
            }
            let arcs: Vec<Arc> = c.arcs.iter().map(|&a| map(a)).collect();
            if !arcs.iter().any(|a| used.contains(a)) {
                free.push(arcs[0]);
            }
            hints.push((c.label.clone(), arcs));
        }
        LinkDiagram::assemble(&self.name, crossings, free, &hints)
    }

    /// Disjoint union (split diagram) with `other`, relabelled apart.
    pub fn disjoint_union(&self, other: &LinkDiagram) -> Result<LinkDiagram> {
        let o = other.offset_labels(self.max_label());
        let mut crossings = self.crossings().to_vec();
        crossings.extend_from_slice(o.crossings());
        let free: Vec<Arc> = self.free_loops().into_iter().chain(o.free_loops()).collect();
        let used: BTreeSet<String> = self.components().iter().map(|c| c.label.clone()).collect();
        let mut hints = self.hints();
        for c in o.components() {
            let mut label = c.label.clone();
            while used.contains(&label) {
                label.push('\'');
            }
            hints.push((label, c.arcs.clone()));
        }
        LinkDiagram::assemble(&format!("{}+{}", self.name, other.name), crossings, free, &hints)
    }
}
