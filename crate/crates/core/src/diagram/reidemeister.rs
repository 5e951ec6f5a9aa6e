//! Reidemeister moves on PD diagrams. Sites are named by arc labels so a
//! move description stays meaningful across serialization.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{Arc, Crossing, LinkDiagram, NameHints};
use crate::error::{Error, Result};
use crate::util::UnionFind;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    /// Add a kink on `arc`; `positive` picks the sign of the new crossing.
    R1 { arc: Arc, positive: bool },
    /// Remove the kink whose loop is `arc`.
    R1Inverse { arc: Arc },
    /// Push `over` across `under` through a face both bound.
    R2 { over: Arc, under: Arc },
    /// Remove the bigon bounded by the two arcs.
    R2Inverse { arcs: [Arc; 2] },
    /// Slide across the triangle bounded by the three arcs.
    R3 { arcs: [Arc; 3] },
}

impl Move {
    pub fn kind(&self) -> &'static str {
        match self {
            Move::R1 { positive: true, .. } => "R1+",
            Move::R1 { positive: false, .. } => "R1-",
            Move::R1Inverse { .. } => "R1^-1",
            Move::R2 { .. } => "R2",
            Move::R2Inverse { .. } => "R2^-1",
            Move::R3 { .. } => "R3",
        }
    }
}

impl LinkDiagram {
    pub fn apply_reidemeister(&self, mv: &Move) -> Result<LinkDiagram> {
        let out = match mv {
            Move::R1 { arc, positive } => self.r1(*arc, *positive),
            Move::R1Inverse { arc } => self.r1_inverse(*arc),
            Move::R2 { over, under } => self.r2(*over, *under),
            Move::R2Inverse { arcs } => self.r2_inverse(arcs[0], arcs[1]),
            Move::R3 { arcs } => self.r3(*arcs),
        }?;
        debug_assert_eq!(out.component_count(), self.component_count());
        Ok(out)
    }

    /// Every move applicable to this diagram, in a deterministic order.
    /// Used for randomized perturbation.
    pub fn available_moves(&self) -> Vec<Move> {
        let mut out = Vec::new();
        for a in self.arcs() {
            out.push(Move::R1 { arc: a, positive: true });
            out.push(Move::R1 { arc: a, positive: false });
        }
        for x in self.crossings() {
            for p in 0..4 {
                if x.pd[p] == x.pd[(p + 1) % 4] {
                    out.push(Move::R1Inverse { arc: x.pd[p] });
                }
            }
        }
        for f in self.faces() {
            let arcs: Vec<Arc> = f.edges.iter().map(|e| e.arc).collect();
            for i in 0..arcs.len() {
                for j in 0..arcs.len() {
                    if arcs[i] != arcs[j] {
                        out.push(Move::R2 { over: arcs[i], under: arcs[j] });
                    }
                }
            }
            if arcs.len() == 2 && self.r2_inverse(arcs[0], arcs[1]).is_ok() {
                out.push(Move::R2Inverse { arcs: [arcs[0], arcs[1]] });
            }
            if arcs.len() == 3 && self.r3([arcs[0], arcs[1], arcs[2]]).is_ok() {
                out.push(Move::R3 { arcs: [arcs[0], arcs[1], arcs[2]] });
            }
        }
        out.dedup();
        out
    }

    fn r1(&self, x: Arc, positive: bool) -> Result<LinkDiagram> {
        let ends = self.arc_ends();
        let e = ends.get(&x).ok_or_else(|| Error::Site(format!("R1: no arc {x}")))?;
        let n1 = self.max_label() + 1;
        let n2 = n1 + 1;
        let mut crossings = self.crossings().to_vec();
        let mut free = self.free_loops();
        let new = match e.head {
            Some((c, p)) => {
                crossings[c].pd[p] = n2;
                if positive {
                    Crossing::new([x, n2, n1, n1], 1)
                } else {
                    Crossing::new([x, n1, n1, n2], -1)
                }
            }
            None => {
                free.retain(|&l| l != x);
                if positive {
                    Crossing::new([x, x, n1, n1], 1)
                } else {
                    Crossing::new([x, n1, n1, x], -1)
                }
            }
        };
        crossings.push(new);
        LinkDiagram::assemble(&self.name, crossings, free, &self.hints())
    }

    fn r1_inverse(&self, loop_arc: Arc) -> Result<LinkDiagram> {
        let (ci, p) = self
            .crossings()
            .iter()
            .enumerate()
            .find_map(|(ci, x)| (0..4).find(|&p| x.pd[p] == loop_arc && x.pd[(p + 1) % 4] == loop_arc).map(|p| (ci, p)))
            .ok_or_else(|| Error::Site(format!("R1^-1: arc {loop_arc} is not a kink loop")))?;
        let x = self.crossings()[ci];
        let a = x.pd[(p + 2) % 4];
        let b = x.pd[(p + 3) % 4];
        self.remove_crossings(&[ci], &[(a, b)], &[loop_arc])
    }

    fn r2(&self, e1: Arc, e2: Arc) -> Result<LinkDiagram> {
        if e1 == e2 {
            return Err(Error::Site("R2 needs two distinct arcs".into()));
        }
        let faces = self.faces();
        let (f1, f2) = faces
            .iter()
            .find_map(|f| {
                let a = f.edges.iter().find(|e| e.arc == e1)?;
                let b = f.edges.iter().find(|e| e.arc == e2)?;
                Some((*a, *b))
            })
            .ok_or_else(|| Error::Site(format!("R2: arcs {e1} and {e2} share no face")))?;
        let fresh = self.max_label() + 1;
        let (m1, m2, e1b, e2b) = (fresh, fresh + 1, fresh + 2, fresh + 3);
        let mut crossings = self.crossings().to_vec();
        let fwd1 = !crossings[f1.from.0].is_incoming(f1.from.1);
        let fwd2 = !crossings[f2.from.0].is_incoming(f2.from.1);
        crossings[f1.to.0].pd[f1.to.1] = e1b;
        crossings[f2.to.0].pd[f2.to.1] = e2b;
        let p = Crossing::from_ccw([e1, m2, m1, e2b], false, [fwd1, fwd2, !fwd1, !fwd2])?;
        let q = Crossing::from_ccw([e1b, e2, m1, m2], false, [!fwd1, fwd2, fwd1, !fwd2])?;
        crossings.push(p);
        crossings.push(q);
        LinkDiagram::assemble(&self.name, crossings, self.free_loops(), &self.hints())
    }

    fn r2_inverse(&self, m1: Arc, m2: Arc) -> Result<LinkDiagram> {
        let bigon = self
            .faces()
            .into_iter()
            .find(|f| f.len() == 2 && f.contains_arc(m1) && f.contains_arc(m2) && m1 != m2)
            .ok_or_else(|| Error::Site(format!("R2^-1: arcs {m1}, {m2} do not bound a bigon")))?;
        let (cx, cy) = (bigon.edges[0].from.0, bigon.edges[0].to.0);
        if cx == cy {
            return Err(Error::Site("R2^-1: bigon has a single crossing".into()));
        }
        let slot_of = |c: usize, a: Arc| self.crossings()[c].pd.iter().position(|&z| z == a).unwrap();
        let (sx1, sy1) = (slot_of(cx, m1), slot_of(cy, m1));
        let (sx2, sy2) = (slot_of(cx, m2), slot_of(cy, m2));
        let over1 = Crossing::is_over(sx1) && Crossing::is_over(sy1);
        let under1 = !Crossing::is_over(sx1) && !Crossing::is_over(sy1);
        let over2 = Crossing::is_over(sx2) && Crossing::is_over(sy2);
        let under2 = !Crossing::is_over(sx2) && !Crossing::is_over(sy2);
        if !((over1 && under2) || (under1 && over2)) {
            return Err(Error::Site("R2^-1: bigon strands alternate over/under".into()));
        }
        let x = self.crossings()[cx];
        let y = self.crossings()[cy];
        let merges = [(x.pd[(sx1 + 2) % 4], y.pd[(sy1 + 2) % 4]), (x.pd[(sx2 + 2) % 4], y.pd[(sy2 + 2) % 4])];
        self.remove_crossings(&[cx, cy], &merges, &[m1, m2])
    }

    fn r3(&self, arcs: [Arc; 3]) -> Result<LinkDiagram> {
        let set: BTreeSet<Arc> = arcs.iter().copied().collect();
        let tri = self
            .faces()
            .into_iter()
            .find(|f| f.len() == 3 && f.edges.iter().map(|e| e.arc).collect::<BTreeSet<_>>() == set)
            .ok_or_else(|| Error::Site(format!("R3: {arcs:?} do not bound a triangle")))?;
        let cs: BTreeSet<usize> = tri.edges.iter().map(|e| e.from.0).collect();
        if cs.len() != 3 {
            return Err(Error::Site("R3: triangle crossings are not distinct".into()));
        }
        let over_twice = tri.edges.iter().filter(|e| Crossing::is_over(e.from.1) && Crossing::is_over(e.to.1)).count();
        if over_twice == 0 {
            return Err(Error::Site("R3: triangle is cyclic (no strand passes over twice)".into()));
        }
        let mut crossings = self.crossings().to_vec();
        for e in &tri.edges {
            let (c1, p1) = e.from;
            let (c2, p2) = e.to;
            let o1 = self.crossings()[c1].pd[(p1 + 2) % 4];
            let o2 = self.crossings()[c2].pd[(p2 + 2) % 4];
            crossings[c1].pd[(p1 + 2) % 4] = o2;
            crossings[c2].pd[(p2 + 2) % 4] = o1;
        }
        for &c in &cs {
            let [a, b, cc, d] = crossings[c].pd;
            crossings[c].pd = [cc, d, a, b];
        }
        LinkDiagram::assemble(&self.name, crossings, self.free_loops(), &self.hints())
    }

    /// Delete crossings, joining the listed arc pairs and dropping the
    /// listed arcs. Joined arcs take the smallest label of their class.
    pub(crate) fn remove_crossings(
        &self,
        remove: &[usize],
        merges: &[(Arc, Arc)],
        dropped: &[Arc],
    ) -> Result<LinkDiagram> {
        let labels: Vec<Arc> = self.arcs().into_iter().collect();
        let index: HashMap<Arc, usize> = labels.iter().enumerate().map(|(k, &a)| (a, k)).collect();
        let mut uf = UnionFind::new(labels.len());
        for &(a, b) in merges {
            uf.union(index[&a], index[&b]);
        }
        let mut rep: BTreeMap<usize, Arc> = BTreeMap::new();
        for &a in &labels {
            if dropped.contains(&a) {
                continue;
            }
            let r = uf.find(index[&a]);
            let e = rep.entry(r).or_insert(a);
            *e = (*e).min(a);
        }
        let mut map = |a: Arc| rep[&uf.find(index[&a])];
        let crossings: Vec<Crossing> = self
            .crossings()
            .iter()
            .enumerate()
            .filter(|(k, _)| !remove.contains(k))
            .map(|(_, x)| Crossing { pd: x.pd.map(&mut map), sign: x.sign })
            .collect();
        let used: BTreeSet<Arc> = crossings.iter().flat_map(|x| x.pd).collect();
        let mut free: Vec<Arc> = Vec::new();
        let mut hints: NameHints = Vec::new();
        for c in self.components() {
            let mut arcs: Vec<Arc> = Vec::new();
            for &a in &c.arcs {
                if dropped.contains(&a) {
                    continue;
                }
                let m = map(a);
                if !arcs.contains(&m) {
                    arcs.push(m);
                }
            }
            if arcs.iter().all(|a| !used.contains(a)) {
                free.push(arcs[0]);
            }
            hints.push((c.label.clone(), arcs));
        }
        free.sort_unstable();
        free.dedup();
        LinkDiagram::assemble(&self.name, crossings, free, &hints)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::io::from_pd;

    fn trefoil() -> LinkDiagram {
        from_pd("3_1", &[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]).unwrap()
    }

    #[test]
    fn r1_on_unknot() {
        let u = LinkDiagram::unknot();
        let k = u.apply_reidemeister(&Move::R1 { arc: 1, positive: true }).unwrap();
        assert_eq!(k.crossing_count(), 1);
        assert_eq!(k.writhe(), 1);
        assert_eq!(k.component_count(), 1);
        let k2 = u.apply_reidemeister(&Move::R1 { arc: 1, positive: false }).unwrap();
        assert_eq!(k2.writhe(), -1);
        let back = k.apply_reidemeister(&Move::R1Inverse { arc: 2 }).unwrap();
        assert_eq!(back.crossing_count(), 0);
    }

    #[test]
    fn r1_then_inverse_is_identity() {
        let t = trefoil();
        for positive in [true, false] {
            let k = t.apply_reidemeister(&Move::R1 { arc: 3, positive }).unwrap();
            assert!(k.is_planar());
            assert_eq!(k.writhe(), t.writhe() + if positive { 1 } else { -1 });
            let back = k.apply_reidemeister(&Move::R1Inverse { arc: 7 }).unwrap();
            assert_eq!(back, t);
        }
    }

    #[test]
    fn r2_then_inverse_is_identity() {
        let t = trefoil();
        let faces = t.faces();
        let f = &faces[0];
        let (a, b) = (f.edges[0].arc, f.edges[1].arc);
        let r = t.apply_reidemeister(&Move::R2 { over: a, under: b }).unwrap();
        assert_eq!(r.crossing_count(), 5);
        assert_eq!(r.writhe(), t.writhe());
        assert!(r.is_planar());
        let m1 = t.max_label() + 1;
        let m2 = m1 + 1;
        let back = r.apply_reidemeister(&Move::R2Inverse { arcs: [m1, m2] }).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn r3_keeps_planarity_and_writhe() {
        // make a triangle with a strand over twice: R2 then look for R3 sites
        let t = trefoil();
        let mut found = false;
        for mv in t.available_moves() {
            if let Move::R2 { .. } = mv {
                let d = t.apply_reidemeister(&mv).unwrap();
                for m in d.available_moves() {
                    if let Move::R3 { .. } = m {
                        let e = d.apply_reidemeister(&m).unwrap();
                        assert!(e.is_planar());
                        assert_eq!(e.writhe(), d.writhe());
                        assert_ne!(e.crossings(), d.crossings());
                        found = true;
                    }
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn site_mismatch_errors() {
        let t = trefoil();
        assert!(t.apply_reidemeister(&Move::R1Inverse { arc: 1 }).is_err());
        assert!(t.apply_reidemeister(&Move::R2 { over: 1, under: 1 }).is_err());
        assert!(t.apply_reidemeister(&Move::R3 { arcs: [1, 2, 3] }).is_err());
    }
}
