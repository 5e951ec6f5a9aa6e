//! Knot-file reading and writing, and the text pretty-printer.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Arc, Crossing, LinkDiagram, NameHints};
use crate::error::{Error, Result};
use crate::util::ParityUnionFind;

/// Decoration of a component in a handle description.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Framing {
    Int(i64),
    Dotted(DottedTag),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DottedTag {
    Dotted,
}

impl Framing {
    pub const DOTTED: Framing = Framing::Dotted(DottedTag::Dotted);

    pub fn is_dotted(&self) -> bool {
        matches!(self, Framing::Dotted(_))
    }

    pub fn integer(&self) -> Option<i64> {
        match self {
            Framing::Int(n) => Some(*n),
            Framing::Dotted(_) => None,
        }
    }
}

/// Explicit orientation data of a knot file.
///
/// `Paths` lists each component's arcs in the direction of travel
/// (parallel to `components`); an arc listed there but absent from `pd` is
/// a crossingless component. A component made of two arcs joining the same
/// two crossings reads the same both ways, so `Paths` cannot orient it;
/// `Bits` always can: one entry per PD arc in ascending label order, 1 when
/// the arc runs from its first occurrence in `pd` to its second.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Orientations {
    Paths(Vec<Vec<Arc>>),
    Bits(Vec<u8>),
}

/// On-disk diagram record (JSON).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnotFile {
    pub name: String,
    pub components: Vec<String>,
    pub pd: Vec<[Arc; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientations: Option<Orientations>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub framings: BTreeMap<String, Framing>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<String>,
}

impl KnotFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("knot file serializes")
    }

    pub fn diagram(&self) -> Result<LinkDiagram> {
        build(&self.name, &self.pd, Some(&self.components), self.orientations.as_ref())
    }

    /// Record for a diagram; orientations are written as paths unless a
    /// component needs bits.
    pub fn from_diagram(d: &LinkDiagram) -> Self {
        let mut f = KnotFile {
            name: d.name.clone(),
            components: d.components().iter().map(|c| c.label.clone()).collect(),
            pd: d.crossings().iter().map(|x| x.pd).collect(),
            orientations: Some(Orientations::Paths(d.components().iter().map(|c| c.arcs.clone()).collect())),
            framings: BTreeMap::new(),
            axis: None,
        };
        if f.diagram().ok().as_ref() != Some(d) {
            f.orientations = Some(Orientations::Bits(orientation_bits(d)));
        }
        f
    }
}

fn orientation_bits(d: &LinkDiagram) -> Vec<u8> {
    let mut first: BTreeMap<Arc, (usize, usize)> = BTreeMap::new();
    for (ci, x) in d.crossings().iter().enumerate() {
        for (p, &a) in x.pd.iter().enumerate() {
            first.entry(a).or_insert((ci, p));
        }
    }
    first.iter().map(|(_, &(c, p))| u8::from(!d.crossings()[c].is_incoming(p))).collect()
}

/// Parse a knot file from JSON text.
pub fn parse_diagram(text: &str) -> Result<LinkDiagram> {
    KnotFile::from_json(text)?.diagram()
}

/// Bare PD text: `PD[X[1,4,2,5], ...]` or `[[1,4,2,5], ...]`.
pub fn parse_pd_text(name: &str, text: &str) -> Result<LinkDiagram> {
    let nums: Vec<Arc> = text
        .split(|c: char| !c.is_ascii_digit())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<Arc>().map_err(|e| Error::Parse(format!("{t}: {e}"))))
        .collect::<Result<_>>()?;
    if !nums.len().is_multiple_of(4) {
        return Err(Error::Parse(format!("{} labels do not form 4-tuples", nums.len())));
    }
    if text.contains('-') {
        return Err(Error::Parse("PD labels must be positive".into()));
    }
    let pd: Vec<[Arc; 4]> = nums.chunks(4).map(|c| [c[0], c[1], c[2], c[3]]).collect();
    if pd.is_empty() {
        let mut u = LinkDiagram::unknot();
        u.name = name.to_string();
        return Ok(u);
    }
    from_pd(name, &pd)
}

/// Diagram from bare PD tuples, orientations inferred.
pub fn from_pd(name: &str, pd: &[[Arc; 4]]) -> Result<LinkDiagram> {
    build(name, pd, None, None)
}

fn build(
    name: &str,
    pd: &[[Arc; 4]],
    names: Option<&[String]>,
    orientations: Option<&Orientations>,
) -> Result<LinkDiagram> {
    let (orient, bits) = match orientations {
        Some(Orientations::Paths(p)) => (Some(p.as_slice()), None),
        Some(Orientations::Bits(b)) => (None, Some(b.as_slice())),
        None => (None, None),
    };
    let n = pd.len();
    let mut occ: HashMap<Arc, Vec<(usize, usize)>> = HashMap::new();
    for (ci, t) in pd.iter().enumerate() {
        for (p, &a) in t.iter().enumerate() {
            if a == 0 {
                return Err(Error::Parse(format!("crossing {ci}: arc label 0 is reserved")));
            }
            occ.entry(a).or_default().push((ci, p));
        }
    }
    for (&a, o) in &occ {
        if o.len() != 2 {
            return Err(Error::InvalidDiagram(format!("arc {a} is used {} times (expected 2)", o.len())));
        }
    }
    if let (Some(names), Some(orient)) = (names, orient) {
        if names.len() != orient.len() {
            return Err(Error::Parse("orientations must parallel components".into()));
        }
    }

    // value(v_c) = 1 iff crossing c is positive; node n is the constant TRUE.
    // head(c,0) = TRUE, head(c,2) = !TRUE, head(c,3) = v_c, head(c,1) = !v_c.
    let lit = |(c, p): (usize, usize)| -> (usize, bool) {
        match p {
            0 => (n, false),
            2 => (n, true),
            3 => (c, false),
            _ => (c, true),
        }
    };
    let mut uf = ParityUnionFind::new(n + 1);
    let mut arcs: Vec<Arc> = occ.keys().copied().collect();
    arcs.sort_unstable();
    for a in &arcs {
        let o = &occ[a];
        let ((x, kx), (y, ky)) = (lit(o[0]), lit(o[1]));
        if !uf.relate(x, y, true ^ kx ^ ky) {
            return Err(Error::Orientation(format!("arc {a} cannot enter and leave consistently")));
        }
    }
    if let Some(bits) = bits {
        if bits.len() != arcs.len() {
            return Err(Error::Parse(format!("{} orientation bits for {} arcs", bits.len(), arcs.len())));
        }
        for (a, &b) in arcs.iter().zip(bits) {
            if b > 1 {
                return Err(Error::Parse(format!("orientation bit for arc {a} is {b}")));
            }
            // occurrences are recorded in crossing-then-slot order
            let (x, kx) = lit(occ[a][usize::from(b)]);
            if !uf.relate(x, n, kx) {
                return Err(Error::Orientation(format!("orientation bit for arc {a} contradicts the PD convention")));
            }
        }
    }
    let mut free_loops = Vec::new();
    if let Some(orient) = orient {
        for seq in orient {
            if seq.is_empty() {
                return Err(Error::Parse("empty component in orientations".into()));
            }
            if seq.len() == 1 && !occ.contains_key(&seq[0]) {
                free_loops.push(seq[0]);
                continue;
            }
            for k in 0..seq.len() {
                let (e, f) = (seq[k], seq[(k + 1) % seq.len()]);
                let cands: Vec<(usize, usize)> = occ
                    .get(&e)
                    .ok_or_else(|| Error::Orientation(format!("arc {e} is not in the PD code")))?
                    .iter()
                    .copied()
                    .filter(|&(c, p)| pd[c][(p + 2) % 4] == f)
                    .collect();
                if cands.len() == 1 {
                    let (c, p) = cands[0];
                    if p % 2 == 1 {
                        let (x, kx) = lit((c, p));
                        // head(c,p) must be true
                        if !uf.relate(x, n, kx) {
                            return Err(Error::Orientation(format!("arc {e} -> {f} contradicts the PD convention")));
                        }
                    } else if p == 2 {
                        return Err(Error::Orientation(format!(
                            "arc {e} -> {f} runs against the under-strand at crossing {c}"
                        )));
                    }
                } else if cands.is_empty() {
                    return Err(Error::Orientation(format!("arcs {e} and {f} are not consecutive")));
                }
            }
        }
    }
    let (troot, tpar) = uf.find(n);
    if orientations.is_some() && (0..n).any(|c| uf.find(c).0 != troot) {
        return Err(Error::Orientation("orientation paths leave a component ambiguous; use orientation bits".into()));
    }
    let mut root_value: HashMap<usize, bool> = HashMap::new();
    // value(root) chosen so TRUE is true.
    root_value.insert(troot, !tpar);
    let mut crossings = Vec::with_capacity(n);
    for (ci, t) in pd.iter().enumerate() {
        let (r, par) = uf.find(ci);
        // unconstrained groups default to a positive first crossing
        let rv = *root_value.entry(r).or_insert(!par);
        let positive = rv ^ par;
        crossings.push(Crossing::new(*t, if positive { 1 } else { -1 }));
    }

    let hints: NameHints = match (names, orient) {
        (Some(names), Some(orient)) => names.iter().cloned().zip(orient.iter().cloned()).collect(),
        _ => Vec::new(),
    };
    if orient.is_none() && pd.is_empty() {
        let k = names.map_or(1, |v| v.len().max(1)) as Arc;
        free_loops = (1..=k).collect();
    }
    let mut d = LinkDiagram::assemble(name, crossings, free_loops, &hints)?;

    if let Some(orient) = orient {
        for (k, seq) in orient.iter().enumerate() {
            let got = &d.components()[k].arcs;
            if got != seq {
                return Err(Error::Orientation(format!(
                    "component {} traverses as {:?}, file lists {:?}",
                    d.components()[k].label,
                    got,
                    seq
                )));
            }
        }
    } else if let Some(names) = names {
        let have = d.component_count();
        if names.len() < have {
            return Err(Error::Parse(format!("{have} components in PD but {} names given", names.len())));
        }
        if names.len() > have {
            // extra names become crossingless components
            let next = d.max_label() + 1;
            let mut loops = d.free_loops();
            loops.extend((next..).take(names.len() - have));
            d = LinkDiagram::assemble(name, d.crossings().to_vec(), loops, &d.hints())?;
        }
        for (k, nm) in names.iter().enumerate() {
            d.set_component_label(k, nm);
        }
    }
    let labels: BTreeSet<&str> = d.components().iter().map(|c| c.label.as_str()).collect();
    if labels.len() != d.component_count() {
        return Err(Error::Parse("component names must be distinct".into()));
    }
    Ok(d)
}

/// Multi-line human-readable rendering of a diagram.
pub fn pretty(d: &LinkDiagram) -> String {
    let mut s = String::new();
    let (pos, neg) = d.signed_counts();
    let _ = writeln!(
        s,
        "{}: {} crossings ({pos}+, {neg}-), {} components",
        d.name,
        d.crossing_count(),
        d.component_count()
    );
    let (w, lk) = d.writhe_and_linking();
    for (k, c) in d.components().iter().enumerate() {
        let _ = writeln!(s, "  {} writhe {} arcs {:?}", c.label, w[k], c.arcs);
    }
    for a in 0..lk.len() {
        for b in a + 1..lk.len() {
            let _ = writeln!(s, "  lk({}, {}) = {}", d.components()[a].label, d.components()[b].label, lk[a][b]);
        }
    }
    for x in d.crossings() {
        let _ = writeln!(s, "  X{:?} {}", x.pd, if x.sign > 0 { "+" } else { "-" });
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn empty_pd_one_component_is_unknot() {
        let f = KnotFile::from_json(r#"{"name":"u","components":["K"],"pd":[]}"#).unwrap();
        let d = f.diagram().unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.components()[0].label, "K");
    }

    #[test]
    fn hopf_link_with_orientations() {
        // both crossings positive
        let text = r#"{"name":"hopf","components":["A","B"],
            "pd":[[1,4,2,3],[2,3,1,4]],"orientations":[0,1,0,1]}"#;
        let d = parse_diagram(text).unwrap();
        assert_eq!(d.component_count(), 2);
        assert!(d.crossings().iter().all(|x| x.sign == 1), "{:?}", d.crossings());
        assert_eq!(d.writhe_and_linking().1[0][1], 1);
        let reversed = r#"{"name":"hopf","components":["A","B"],
            "pd":[[1,4,2,3],[2,3,1,4]],"orientations":[0,1,1,0]}"#;
        let d2 = parse_diagram(reversed).unwrap();
        assert_eq!(d2.writhe_and_linking().1[0][1], -1);
        let f = KnotFile::from_diagram(&d2);
        assert!(matches!(f.orientations, Some(Orientations::Bits(_))));
        assert_eq!(parse_diagram(&f.to_json()).unwrap(), d2);
    }

    #[test]
    fn bad_orientation_rejected() {
        let text = r#"{"name":"t","components":["K"],"pd":[[1,4,2,5],[3,6,4,1],[5,2,6,3]],
            "orientations":[[1,3,2,4,5,6]]}"#;
        assert!(matches!(parse_diagram(text), Err(Error::Orientation(_))));
    }

    #[test]
    fn file_roundtrip() {
        let d = from_pd("t", &[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]).unwrap();
        let f = KnotFile::from_diagram(&d);
        let back = parse_diagram(&f.to_json()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn framings_parse() {
        let text = r#"{"name":"h","components":["R","B"],"pd":[],"framings":{"R":"dotted","B":-2}}"#;
        let f = KnotFile::from_json(text).unwrap();
        assert_eq!(f.framings["R"], Framing::DOTTED);
        assert_eq!(f.framings["B"], Framing::Int(-2));
        assert_eq!(f.diagram().unwrap().component_count(), 2);
    }
}
