//! Oriented link diagrams in planar-diagram (PD) form.
//!
//! A crossing is a 4-tuple of arc labels listed counterclockwise, starting
//! at the incoming under-strand. The under-strand therefore always runs from
//! slot 0 to slot 2; the over-strand runs 3 -> 1 on a positive crossing and
//! 1 -> 3 on a negative one. Components are stored as arc sequences in the
//! direction of travel; a component without crossings is a single free arc.

pub mod cable;
mod faces;
pub mod geo;
pub mod io;
mod ops;
pub mod reidemeister;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use faces::{Face, FaceEdge};
pub use reidemeister::Move;

/// Arc label.
pub type Arc = u32;

/// A position on a crossing: `(crossing index, slot 0..4)`.
pub type Slot = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub pd: [Arc; 4],
    /// +1 or -1.
    pub sign: i8,
}

impl Crossing {
    pub fn new(pd: [Arc; 4], sign: i8) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        Crossing { pd, sign }
    }

    /// Build a crossing from its four slots in counterclockwise order
    /// starting anywhere. `under_even` says whether slots 0/2 of the given
    /// order form the under-strand; `incoming` flags the strand direction.
    pub fn from_ccw(labels: [Arc; 4], under_even: bool, incoming: [bool; 4]) -> Result<Self> {
        if incoming[0] == incoming[2] || incoming[1] == incoming[3] {
            return Err(Error::Orientation(format!("strand through {labels:?} must enter once and leave once")));
        }
        let under = if under_even { [0, 2] } else { [1, 3] };
        let start = if incoming[under[0]] { under[0] } else { under[1] };
        let rot = |k: usize| (start + k) % 4;
        let pd = [labels[rot(0)], labels[rot(1)], labels[rot(2)], labels[rot(3)]];
        let sign = if incoming[rot(3)] { 1 } else { -1 };
        Ok(Crossing { pd, sign })
    }

    pub fn is_incoming(&self, pos: usize) -> bool {
        match pos {
            0 => true,
            2 => false,
            1 => self.sign < 0,
            3 => self.sign > 0,
            _ => unreachable!("slot out of range"),
        }
    }

    pub fn is_over(pos: usize) -> bool {
        pos % 2 == 1
    }

    /// The same crossing with over and under exchanged.
    pub fn mirrored(&self) -> Self {
        let [a, b, c, d] = self.pd;
        let pd = if self.sign > 0 { [d, a, b, c] } else { [b, c, d, a] };
        Crossing { pd, sign: -self.sign }
    }

    /// The same crossing with both strands reversed.
    pub fn reversed(&self) -> Self {
        let [a, b, c, d] = self.pd;
        Crossing { pd: [c, d, a, b], sign: self.sign }
    }

    /// Arc pairs of the 0-smoothing (the oriented smoothing of a positive crossing).
    pub fn smoothing0(&self) -> [(Arc, Arc); 2] {
        let [a, b, c, d] = self.pd;
        [(a, b), (c, d)]
    }

    pub fn smoothing1(&self) -> [(Arc, Arc); 2] {
        let [a, b, c, d] = self.pd;
        [(a, d), (b, c)]
    }

    /// Smoothing consistent with the orientation.
    pub fn oriented_smoothing(&self) -> [(Arc, Arc); 2] {
        if self.sign > 0 {
            self.smoothing0()
        } else {
            self.smoothing1()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Component {
    pub label: String,
    /// Arcs in the direction of travel.
    pub arcs: Vec<Arc>,
}

/// Where an arc starts and ends. Free loops have no ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcEnds {
    pub tail: Option<Slot>,
    pub head: Option<Slot>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinkDiagram {
    pub name: String,
    crossings: Vec<Crossing>,
    components: Vec<Component>,
}

/// Preferred component names and starting arcs, consumed in order by
/// [`LinkDiagram::assemble`].
pub type NameHints = Vec<(String, Vec<Arc>)>;

impl LinkDiagram {
    /// The 0-crossing unknot.
    pub fn unknot() -> Self {
        Self::assemble("unknot", vec![], vec![1], &vec![("K".into(), vec![1])]).expect("unknot")
    }

    /// Build a diagram from crossings and free loops, recovering components
    /// by traversal. Components matching a hint (by containing one of its
    /// arcs) take its name and start at the first such arc; the rest are
    /// ordered by smallest arc label.
    pub fn assemble(name: &str, crossings: Vec<Crossing>, free_loops: Vec<Arc>, hints: &NameHints) -> Result<Self> {
        let mut occurrences: HashMap<Arc, Vec<Slot>> = HashMap::new();
        for (ci, x) in crossings.iter().enumerate() {
            if x.sign != 1 && x.sign != -1 {
                return Err(Error::InvalidDiagram(format!("crossing {ci} has sign {}", x.sign)));
            }
            for (p, &a) in x.pd.iter().enumerate() {
                occurrences.entry(a).or_default().push((ci, p));
            }
        }
        for (&a, occ) in &occurrences {
            if occ.len() != 2 {
                return Err(Error::InvalidDiagram(format!("arc {a} is used {} times (expected 2)", occ.len())));
            }
        }
        let mut seen_loops = BTreeSet::new();
        for &l in &free_loops {
            if occurrences.contains_key(&l) || !seen_loops.insert(l) {
                return Err(Error::InvalidDiagram(format!("free loop label {l} is already in use")));
            }
        }
        let mut head: HashMap<Arc, Slot> = HashMap::new();
        for (&a, occ) in &occurrences {
            let inc: Vec<bool> = occ.iter().map(|&(c, p)| crossings[c].is_incoming(p)).collect();
            if inc[0] == inc[1] {
                return Err(Error::Orientation(format!(
                    "arc {a} is {} at both ends",
                    if inc[0] { "incoming" } else { "outgoing" }
                )));
            }
            head.insert(a, if inc[0] { occ[0] } else { occ[1] });
        }
        let next = |a: Arc| -> Arc {
            let (c, p) = head[&a];
            crossings[c].pd[(p + 2) % 4]
        };

        let mut cycles: Vec<Vec<Arc>> = Vec::new();
        let mut assigned: BTreeSet<Arc> = BTreeSet::new();
        let all: BTreeSet<Arc> = occurrences.keys().copied().collect();
        for &start in &all {
            if assigned.contains(&start) {
                continue;
            }
            let mut cyc = vec![start];
            assigned.insert(start);
            let mut a = next(start);
            while a != start {
                if !assigned.insert(a) {
                    return Err(Error::Orientation(format!("traversal from arc {start} does not close")));
                }
                cyc.push(a);
                a = next(a);
            }
            cycles.push(cyc);
        }
        for &l in &free_loops {
            cycles.push(vec![l]);
        }

        let mut taken = vec![false; cycles.len()];
        let mut components = Vec::new();
        for (label, arcs) in hints {
            let found = arcs.iter().find_map(|a| {
                cycles.iter().enumerate().find(|(k, c)| !taken[*k] && c.contains(a)).map(|(k, _)| (k, *a))
            });
            if let Some((k, a)) = found {
                taken[k] = true;
                let cyc = &cycles[k];
                let pos = cyc.iter().position(|&x| x == a).unwrap();
                let mut arcs = cyc[pos..].to_vec();
                arcs.extend_from_slice(&cyc[..pos]);
                components.push(Component { label: label.clone(), arcs });
            }
        }
        let mut rest: Vec<&Vec<Arc>> = cycles.iter().enumerate().filter(|(k, _)| !taken[*k]).map(|(_, c)| c).collect();
        rest.sort_by_key(|c| *c.iter().min().unwrap());
        let used: BTreeSet<String> = components.iter().map(|c| c.label.clone()).collect();
        let mut n = 0;
        for cyc in rest {
            let min_pos = cyc.iter().enumerate().min_by_key(|(_, &a)| a).unwrap().0;
            let mut arcs = cyc[min_pos..].to_vec();
            arcs.extend_from_slice(&cyc[..min_pos]);
            let label = loop {
                let cand = if n == 0 && used.is_empty() { "K".to_string() } else { format!("K{n}") };
                n += 1;
                if !used.contains(&cand) {
                    break cand;
                }
            };
            components.push(Component { label, arcs });
        }
        if components.is_empty() {
            return Err(Error::InvalidDiagram("diagram has no components".into()));
        }
        let d = LinkDiagram { name: name.to_string(), crossings, components };
        Ok(d)
    }

    /// Name hints reproducing this diagram's component names and starts.
    pub fn hints(&self) -> NameHints {
        self.components.iter().map(|c| (c.label.clone(), c.arcs.clone())).collect()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn is_knot(&self) -> bool {
        self.components.len() == 1
    }

    pub fn component_index(&self, label: &str) -> Option<usize> {
        self.components.iter().position(|c| c.label == label)
    }

    /// Free loops: components with no crossings.
    pub fn free_loops(&self) -> Vec<Arc> {
        let used: BTreeSet<Arc> = self.crossings.iter().flat_map(|x| x.pd).collect();
        self.components.iter().filter(|c| c.arcs.len() == 1 && !used.contains(&c.arcs[0])).map(|c| c.arcs[0]).collect()
    }

    pub fn arcs(&self) -> BTreeSet<Arc> {
        self.components.iter().flat_map(|c| c.arcs.iter().copied()).collect()
    }

    pub fn max_label(&self) -> Arc {
        self.arcs().into_iter().max().unwrap_or(0)
    }

    /// Component index of every arc.
    pub fn arc_components(&self) -> HashMap<Arc, usize> {
        let mut m = HashMap::new();
        for (k, c) in self.components.iter().enumerate() {
            for &a in &c.arcs {
                m.insert(a, k);
            }
        }
        m
    }

    /// Tail and head slots of every arc.
    pub fn arc_ends(&self) -> HashMap<Arc, ArcEnds> {
        let mut m: HashMap<Arc, ArcEnds> = HashMap::new();
        for c in &self.components {
            for &a in &c.arcs {
                m.insert(a, ArcEnds { tail: None, head: None });
            }
        }
        for (ci, x) in self.crossings.iter().enumerate() {
            for (p, &a) in x.pd.iter().enumerate() {
                let e = m.get_mut(&a).expect("arc without component");
                if x.is_incoming(p) {
                    e.head = Some((ci, p));
                } else {
                    e.tail = Some((ci, p));
                }
            }
        }
        m
    }

    /// Label-to-slots lookup.
    pub fn slot_map(&self) -> HashMap<Arc, Vec<Slot>> {
        let mut m: HashMap<Arc, Vec<Slot>> = HashMap::new();
        for (ci, x) in self.crossings.iter().enumerate() {
            for (p, &a) in x.pd.iter().enumerate() {
                m.entry(a).or_default().push((ci, p));
            }
        }
        m
    }

    /// Components of the two strands at a crossing: `(under, over)`.
    pub fn crossing_components(&self, ci: usize) -> (usize, usize) {
        let comp = self.arc_components();
        let x = &self.crossings[ci];
        (comp[&x.pd[0]], comp[&x.pd[1]])
    }

    /// Per-component writhe and the symmetric linking matrix.
    pub fn writhe_and_linking(&self) -> (Vec<i64>, Vec<Vec<i64>>) {
        let n = self.components.len();
        let comp = self.arc_components();
        let mut writhe = vec![0i64; n];
        let mut twice_lk = vec![vec![0i64; n]; n];
        for x in &self.crossings {
            let (u, o) = (comp[&x.pd[0]], comp[&x.pd[1]]);
            if u == o {
                writhe[u] += x.sign as i64;
            } else {
                twice_lk[u][o] += x.sign as i64;
                twice_lk[o][u] += x.sign as i64;
            }
        }
        let lk = twice_lk
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| {
                        debug_assert!(v % 2 == 0, "odd inter-component crossing count");
                        v / 2
                    })
                    .collect()
            })
            .collect();
        (writhe, lk)
    }

    /// Total writhe.
    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|x| x.sign as i64).sum()
    }

    pub fn signed_counts(&self) -> (usize, usize) {
        let pos = self.crossings.iter().filter(|x| x.sign > 0).count();
        (pos, self.crossings.len() - pos)
    }

    pub fn linking_number(&self, a: usize, b: usize) -> i64 {
        self.writhe_and_linking().1[a][b]
    }

    /// Split pieces: connected components of the crossing/arc incidence
    /// graph, as sets of component indices. Free loops are their own pieces.
    pub fn split_pieces(&self) -> Vec<BTreeSet<usize>> {
        let n = self.components.len();
        let mut uf = crate::util::UnionFind::new(n);
        let comp = self.arc_components();
        for x in &self.crossings {
            uf.union(comp[&x.pd[0]], comp[&x.pd[1]]);
        }
        let mut groups: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for k in 0..n {
            groups.entry(uf.find(k)).or_default().insert(k);
        }
        let mut out: Vec<_> = groups.into_values().collect();
        out.sort();
        out
    }

    /// Re-run full validation (label multiplicities, orientation,
    /// traversal, component partition).
    pub fn validate(&self) -> Result<()> {
        let free = self.free_loops();
        let rebuilt = Self::assemble(&self.name, self.crossings.clone(), free, &self.hints())?;
        if rebuilt.components != self.components {
            return Err(Error::InvalidDiagram("stored components disagree with traversal".into()));
        }
        Ok(())
    }

    /// Rename a component.
    pub fn set_component_label(&mut self, idx: usize, label: &str) {
        self.components[idx].label = label.to_string();
    }

    /// Relabel arcs to 1..=n following component order and direction of
    /// travel. Crossings are reordered by first visit.
    pub fn canonicalize(&self) -> LinkDiagram {
        self.canonicalize_map().0
    }

    /// [`Self::canonicalize`] together with the old-to-new label map.
    pub fn canonicalize_map(&self) -> (LinkDiagram, HashMap<Arc, Arc>) {
        let mut map: HashMap<Arc, Arc> = HashMap::new();
        let mut next = 1;
        for c in &self.components {
            for &a in &c.arcs {
                map.insert(a, next);
                next += 1;
            }
        }
        let ends = self.arc_ends();
        let mut order: Vec<usize> = Vec::new();
        let mut seen = vec![false; self.crossings.len()];
        for c in &self.components {
            for a in &c.arcs {
                if let Some((ci, _)) = ends[a].head {
                    if !seen[ci] {
                        seen[ci] = true;
                        order.push(ci);
                    }
                }
            }
        }
        let crossings = order
            .iter()
            .map(|&ci| {
                let x = self.crossings[ci];
                Crossing { pd: x.pd.map(|a| map[&a]), sign: x.sign }
            })
            .collect();
        let components = self
            .components
            .iter()
            .map(|c| Component { label: c.label.clone(), arcs: c.arcs.iter().map(|a| map[a]).collect() })
            .collect();
        (LinkDiagram { name: self.name.clone(), crossings, components }, map)
    }

    /// Sub-diagram on the given components (all others deleted).
    pub fn sublink(&self, keep: &[usize]) -> Result<LinkDiagram> {
        let drop: Vec<usize> = (0..self.components.len()).filter(|k| !keep.contains(k)).collect();
        self.delete_components(&drop)
    }

    pub(crate) fn from_raw(name: String, crossings: Vec<Crossing>, components: Vec<Component>) -> Self {
        LinkDiagram { name, crossings, components }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn pd(tuples: &[[Arc; 4]]) -> LinkDiagram {
        io::from_pd("test", tuples).unwrap()
    }

    #[test]
    fn unknot_has_one_free_component() {
        let u = LinkDiagram::unknot();
        assert_eq!(u.component_count(), 1);
        assert_eq!(u.crossing_count(), 0);
        assert_eq!(u.free_loops(), vec![1]);
        assert_eq!(u.writhe_and_linking().0, vec![0]);
    }

    #[test]
    fn trefoil_pd_is_one_component() {
        let t = pd(&[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]);
        assert_eq!(t.component_count(), 1);
        assert_eq!(t.components()[0].arcs, vec![1, 2, 3, 4, 5, 6]);
        let (w, lk) = t.writhe_and_linking();
        assert_eq!(w, vec![-3]);
        assert_eq!(lk, vec![vec![0]]);
    }

    #[test]
    fn arc_used_three_times_is_rejected() {
        let err = io::from_pd("bad", &[[1, 1, 2, 1]]).unwrap_err();
        assert!(matches!(err, Error::InvalidDiagram(_)), "{err}");
    }

    #[test]
    fn from_ccw_rotates_to_incoming_under() {
        // under strand north-bound (slot 0 south), over strand west -> east
        let x = Crossing::from_ccw([10, 11, 12, 13], true, [true, false, false, true]).unwrap();
        assert_eq!(x.pd, [10, 11, 12, 13]);
        assert_eq!(x.sign, 1);
        let y = Crossing::from_ccw([10, 11, 12, 13], false, [true, false, false, true]).unwrap();
        assert_eq!(y.pd, [13, 10, 11, 12]);
        assert_eq!(y.sign, -1);
        assert_eq!(x.mirrored(), y);
    }

    #[test]
    fn mirror_and_reverse_crossing_involutions() {
        for sign in [1, -1] {
            let x = Crossing::new([1, 2, 3, 4], sign);
            assert_eq!(x.mirrored().mirrored(), x);
            assert_eq!(x.reversed().reversed(), x);
            assert_eq!(x.reversed().sign, sign);
            assert_eq!(x.mirrored().sign, -sign);
        }
    }
}
