//! Patterns in a solid torus and the satellite operation.
//!
//! A pattern is presented as a two-component diagram: the pattern knot `P`
//! and a round axis `A` (no self-crossings). The solid torus is the
//! complement of `A`; its meridian disk is the disk bounded by `A` that lies
//! above the whole diagram, which `P` meets exactly where it crosses over
//! `A`. Those piercings must be consecutive along `A`. Cutting `P` there
//! gives a box tangle whose left and right ends sit on the two faces of the
//! disk, and the satellite splices that box into a 0-framed cable of the
//! companion.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::diagram::cable::{cable, BoxTangle, CableJob, Insert};
use crate::diagram::geo::{braid_closure, GeoCrossing, Seed};
use crate::diagram::io::KnotFile;
use crate::diagram::{Arc, LinkDiagram};
use crate::error::{Error, Result};

pub const PATTERN_LABEL: &str = "P";
pub const AXIS_LABEL: &str = "A";

#[derive(Clone, Debug, PartialEq)]
pub struct Pattern {
    diagram: LinkDiagram,
    tangle: Option<BoxTangle>,
    w: i64,
    g: usize,
    /// Set by a pattern-bridge certificate, or when the presentation has
    /// geometric winding one.
    pub dualizable: bool,
}

/// Summary written next to pattern files and certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindingNumbers {
    pub w: i64,
    pub g: usize,
}

impl Pattern {
    /// Pattern from a two-component diagram whose axis is labelled
    /// `axis`. The axis is reversed if needed so that `w >= 0`.
    pub fn from_diagram(d: &LinkDiagram, axis: &str) -> Result<Self> {
        if d.component_count() != 2 {
            return Err(Error::Invalid(format!("a pattern has 2 components, got {}", d.component_count())));
        }
        let ai = d.component_index(axis).ok_or_else(|| Error::Invalid(format!("no axis component '{axis}'")))?;
        let pi = 1 - ai;
        let mut d = d.clone();
        if d.linking_number(pi, ai) < 0 {
            d = d.reverse_components(&[ai]);
        }
        d.set_component_label(pi, PATTERN_LABEL);
        d.set_component_label(ai, AXIS_LABEL);
        let w = d.linking_number(pi, ai);
        let (tangle, g) = extract_tangle(&d, pi, ai)?;
        Ok(Pattern { diagram: d, tangle, w, g, dualizable: g == 1 })
    }

    pub fn from_file(f: &KnotFile) -> Result<Self> {
        let axis = f.axis.clone().unwrap_or_else(|| AXIS_LABEL.to_string());
        Self::from_diagram(&f.diagram()?, &axis)
    }

    pub fn to_file(&self) -> KnotFile {
        let mut f = KnotFile::from_diagram(&self.diagram);
        f.axis = Some(AXIS_LABEL.to_string());
        f
    }

    /// Pattern whose cut-open presentation is `t`, drawn inside a round
    /// axis.
    pub fn from_tangle(name: &str, t: &BoxTangle) -> Result<Self> {
        let hopf = hopf_presentation()?;
        let pi = hopf.component_index(PATTERN_LABEL).expect("pattern component");
        let job = CableJob {
            comp: pi,
            strands: t.width(),
            arc: hopf.components()[pi].arcs[0],
            inserts: vec![Insert::Tangle(t)],
            names: vec![PATTERN_LABEL.to_string()],
        };
        let d = cable(&hopf, &job, name)?;
        if d.component_count() != 2 {
            return Err(Error::Invalid("tangle closes up to more than one pattern component".into()));
        }
        Self::from_diagram(&d, AXIS_LABEL)
    }

    /// The identity pattern: the core of the solid torus.
    pub fn core() -> Self {
        Self::from_tangle("core", &BoxTangle::identity(1)).expect("core pattern")
    }

    pub fn diagram(&self) -> &LinkDiagram {
        &self.diagram
    }

    pub fn name(&self) -> &str {
        &self.diagram.name
    }

    pub fn set_name(&mut self, name: &str) {
        self.diagram.name = name.to_string();
    }

    /// `(w, g)`: algebraic winding number and the number of times this
    /// presentation meets the meridian disk.
    pub fn winding_numbers(&self) -> WindingNumbers {
        WindingNumbers { w: self.w, g: self.g }
    }

    fn pattern_index(&self) -> usize {
        self.diagram.component_index(PATTERN_LABEL).expect("pattern component")
    }

    fn axis_index(&self) -> usize {
        1 - self.pattern_index()
    }

    /// `P(U)`: the pattern knot with the axis forgotten.
    pub fn closure(&self) -> Result<LinkDiagram> {
        let mut d = self.diagram.delete_components(&[self.axis_index()])?;
        d.name = format!("{}(U)", self.name());
        Ok(d)
    }
}

fn hopf_presentation() -> Result<LinkDiagram> {
    let mut h = braid_closure("hopf", 2, &[1, 1])?;
    h.set_component_label(0, PATTERN_LABEL);
    h.set_component_label(1, AXIS_LABEL);
    Ok(h)
}

/// Cut the pattern open along the upper spanning disk of the axis.
fn extract_tangle(d: &LinkDiagram, pi: usize, ai: usize) -> Result<(Option<BoxTangle>, usize)> {
    let comp = d.arc_components();
    let ends = d.arc_ends();
    let xs = d.crossings();
    for (ci, x) in xs.iter().enumerate() {
        if comp[&x.pd[0]] == ai && comp[&x.pd[1]] == ai {
            return Err(Error::Invalid(format!("axis crosses itself at crossing {ci}")));
        }
    }
    // crossings met along the axis; the axis is the under-strand exactly
    // when it arrives at slot 0, which is where the pattern pierces the disk
    let seq: Vec<(usize, bool)> =
        d.components()[ai].arcs.iter().filter_map(|a| ends[a].head).map(|(c, s)| (c, s == 0)).collect();
    let g = seq.iter().filter(|s| s.1).count();
    if g == 0 {
        return Ok((None, 0));
    }
    let m = seq.len();
    let start = if g == m { 0 } else { (0..m).find(|&i| seq[i].1 && !seq[(i + m - 1) % m].1).unwrap() };
    if (0..m).any(|k| seq[(start + k) % m].1 != (k < g)) {
        return Err(Error::Invalid(
            "axis not in standard position: the crossings where the pattern passes over the axis must be consecutive along it"
                .into(),
        ));
    }
    let block: Vec<usize> = (0..g).map(|k| seq[(start + k) % m].0).collect();

    // local labels: the pattern's arcs, merged where it passes under the axis
    let mut parent: HashMap<Arc, Arc> = HashMap::new();
    fn find(p: &mut HashMap<Arc, Arc>, a: Arc) -> Arc {
        let mut r = a;
        while let Some(&up) = p.get(&r) {
            if up == r {
                break;
            }
            r = up;
        }
        p.insert(a, r);
        r
    }
    for x in xs {
        if comp[&x.pd[1]] == ai && comp[&x.pd[0]] == pi {
            let (r0, r2) = (find(&mut parent, x.pd[0]), find(&mut parent, x.pd[2]));
            if r0 != r2 {
                parent.insert(r0.max(r2), r0.min(r2));
            }
        }
    }
    let mut crossings = Vec::new();
    let mut seeds = Vec::new();
    for x in xs {
        if comp[&x.pd[0]] == pi && comp[&x.pd[1]] == pi {
            let ccw = x.pd.map(|a| find(&mut parent, a));
            let c = crossings.len();
            crossings.push(GeoCrossing { ccw, under_even: true });
            seeds.push(Seed { crossing: c, slot: 0, incoming: true });
            seeds.push(Seed { crossing: c, slot: if x.sign > 0 { 3 } else { 1 }, incoming: true });
        }
    }
    let mut boundary = Vec::with_capacity(2 * g);
    let mut inward = Vec::with_capacity(2 * g);
    // left of the axis (slot 3) faces the departing side
    for &c in &block {
        boundary.push(find(&mut parent, xs[c].pd[3]));
        inward.push(!xs[c].is_incoming(3));
    }
    for &c in block.iter().rev() {
        boundary.push(find(&mut parent, xs[c].pd[1]));
        inward.push(!xs[c].is_incoming(1));
    }
    Ok((Some(BoxTangle { crossings, seeds, boundary, inward }), g))
}

/// `P(K)` with the 0-framed identification of the solid torus with a
/// neighbourhood of `K`.
pub fn satellite_apply(p: &Pattern, companion: &LinkDiagram) -> Result<LinkDiagram> {
    if !companion.is_knot() {
        return Err(Error::Invalid("the companion must be a knot".into()));
    }
    let name = format!("{}({})", p.name(), companion.name);
    let Some(t) = &p.tangle else {
        let mut d = p.closure()?;
        d.name = name;
        return Ok(d);
    };
    let job = CableJob {
        comp: 0,
        strands: t.width(),
        arc: companion.components()[0].arcs[0],
        inserts: vec![Insert::Twist(-companion.writhe()), Insert::Tangle(t)],
        names: vec!["K".to_string()],
    };
    cable(companion, &job, &name)
}

/// `P̄`: every crossing changed and the pattern reversed.
pub fn pattern_mirror(p: &Pattern) -> Result<Pattern> {
    let d = p.diagram.mirror();
    let d = d.reverse_components(&[p.pattern_index()]);
    let mut out = Pattern::from_diagram(&d, AXIS_LABEL)?;
    out.set_name(&format!("mirror({})", p.name()));
    out.dualizable = p.dualizable;
    Ok(out)
}

/// `outer ∘ inner`, the pattern with `(outer ∘ inner)(K) = outer(inner(K))`.
pub fn pattern_compose(outer: &Pattern, inner: &Pattern) -> Result<Pattern> {
    let name = format!("{}∘{}", outer.name(), inner.name());
    let Some(t) = &outer.tangle else {
        let mut o = outer.clone();
        o.set_name(&name);
        return Ok(o);
    };
    let pi = inner.pattern_index();
    let writhe = inner.diagram.writhe_and_linking().0[pi];
    let job = CableJob {
        comp: pi,
        strands: t.width(),
        arc: inner.diagram.components()[pi].arcs[0],
        inserts: vec![Insert::Twist(-writhe), Insert::Tangle(t)],
        names: vec![PATTERN_LABEL.to_string()],
    };
    let d = cable(&inner.diagram, &job, &name)?;
    let mut out = Pattern::from_diagram(&d, AXIS_LABEL)?;
    out.dualizable = out.dualizable || (outer.dualizable && inner.dualizable);
    Ok(out)
}

/// The `(w, 1)` cable pattern.
pub fn cable_pattern(w: usize) -> Result<Pattern> {
    if w == 0 {
        return Err(Error::Invalid("cable patterns need w >= 1".into()));
    }
    let word: Vec<i32> = (1..w as i32).collect();
    let mut p = Pattern::from_tangle(&format!("cable({w},1)"), &BoxTangle::braid(w, &word)?)?;
    p.set_name(&format!("cable({w},1)"));
    Ok(p)
}

/// The core with `k` tied in locally: geometric winding one and closure `k`.
pub fn local_knot_pattern(k: &LinkDiagram) -> Result<Pattern> {
    if !k.is_knot() {
        return Err(Error::Invalid("local knot must be a knot".into()));
    }
    let core = Pattern::core();
    let pi = core.pattern_index();
    let a1 = core.diagram.components()[pi].arcs[0];
    let a2 = k.components()[0].arcs[0];
    let d = core.diagram.connected_sum(k, a1, a2)?;
    let mut p = Pattern::from_diagram(&d, AXIS_LABEL)?;
    p.set_name(&format!("local({})", k.name));
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::io::from_pd;
    use crate::jones::kauffman_jones;
    use crate::poly::Laurent;

    fn lh() -> LinkDiagram {
        from_pd("3_1", &[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]).unwrap()
    }

    fn j(d: &LinkDiagram) -> Laurent {
        kauffman_jones(d).unwrap()
    }

    #[test]
    fn core_pattern() {
        let c = Pattern::core();
        assert_eq!(c.winding_numbers(), WindingNumbers { w: 1, g: 1 });
        assert!(c.dualizable);
        for k in [lh(), lh().mirror(), LinkDiagram::unknot()] {
            assert_eq!(j(&satellite_apply(&c, &k).unwrap()), j(&k));
        }
    }

    #[test]
    fn cable_windings() {
        for w in 1..=3 {
            let p = cable_pattern(w).unwrap();
            assert_eq!(p.winding_numbers(), WindingNumbers { w: w as i64, g: w });
            // closure of the (w,1) cable is an unknot
            assert_eq!(j(&p.closure().unwrap()), j(&LinkDiagram::unknot()));
        }
        assert_eq!(j(&satellite_apply(&cable_pattern(1).unwrap(), &lh()).unwrap()), j(&lh()));
    }

    #[test]
    fn two_one_cable_of_trefoil_matches_braid() {
        // right-handed trefoil as sigma1^3; doubling each crossing and
        // correcting the blackboard framing gives this 4-braid
        let mut word = Vec::new();
        for _ in 0..3 {
            word.extend([2, 1, 3, 2]);
        }
        word.extend([-1; 5]);
        let oracle = braid_closure("oracle", 4, &word).unwrap();
        let rh = braid_closure("rh", 2, &[1, 1, 1]).unwrap();
        let sat = satellite_apply(&cable_pattern(2).unwrap(), &rh).unwrap();
        assert!(sat.is_knot());
        assert_eq!(j(&sat), j(&oracle));
        // same answer from a different companion diagram
        let sat2 = satellite_apply(&cable_pattern(2).unwrap(), &lh().mirror()).unwrap();
        assert_eq!(j(&sat2), j(&oracle));
    }

    #[test]
    fn unknot_companion_gives_closure() {
        for p in [cable_pattern(2).unwrap(), local_knot_pattern(&lh()).unwrap()] {
            let s = satellite_apply(&p, &LinkDiagram::unknot()).unwrap();
            assert_eq!(j(&s), j(&p.closure().unwrap()));
        }
    }

    #[test]
    fn mirror_is_involution_and_keeps_w() {
        let p = local_knot_pattern(&lh()).unwrap();
        let m = pattern_mirror(&p).unwrap();
        assert_eq!(m.winding_numbers(), p.winding_numbers());
        let mm = pattern_mirror(&m).unwrap();
        assert_eq!(j(&mm.closure().unwrap()), j(&p.closure().unwrap()));
        assert_eq!(j(&m.closure().unwrap()), j(&lh().mirror()));
        let c = pattern_mirror(&Pattern::core()).unwrap();
        assert_eq!(c.winding_numbers(), WindingNumbers { w: 1, g: 1 });
    }

    #[test]
    fn compose_with_core_and_windings() {
        let c2 = cable_pattern(2).unwrap();
        let c3 = cable_pattern(3).unwrap();
        let cc = pattern_compose(&Pattern::core(), &c2).unwrap();
        assert_eq!(cc.winding_numbers(), c2.winding_numbers());
        let six = pattern_compose(&c2, &c3).unwrap();
        assert_eq!(six.winding_numbers().w, 6);
        let local = local_knot_pattern(&lh()).unwrap();
        let lc = pattern_compose(&local, &c2).unwrap();
        assert_eq!(lc.winding_numbers().w, 2);
        // (local ∘ c2)(U) = c2(U) # 3_1 = 3_1
        assert_eq!(j(&lc.closure().unwrap()), j(&lh()));
    }

    #[test]
    fn composition_is_iterated_satellite() {
        let c2 = cable_pattern(2).unwrap();
        let local = local_knot_pattern(&lh().mirror()).unwrap();
        let comp = pattern_compose(&c2, &local).unwrap();
        let k = LinkDiagram::unknot();
        let direct = satellite_apply(&c2, &satellite_apply(&local, &k).unwrap()).unwrap();
        assert_eq!(j(&comp.closure().unwrap()), j(&direct));
    }

    #[test]
    fn file_round_trip() {
        let p = local_knot_pattern(&lh()).unwrap();
        let f = p.to_file();
        let q = Pattern::from_file(&KnotFile::from_json(&f.to_json()).unwrap()).unwrap();
        assert_eq!(q.winding_numbers(), p.winding_numbers());
        assert_eq!(j(&q.closure().unwrap()), j(&p.closure().unwrap()));
    }
}
