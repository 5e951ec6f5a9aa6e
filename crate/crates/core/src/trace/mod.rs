//! Handle descriptions made of dotted circles and framed 2-handles, and a
//! checker for scripted handle moves.

pub mod cert;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diagram::cable::{cable_tracked, CableJob, Insert};
use crate::diagram::io::{Framing, KnotFile};
use crate::diagram::{Arc, LinkDiagram, Move};
use crate::error::{Error, Result};

pub use cert::{
    certify_concordance, derive_trace_pair, pattern_bridge, pattern_bridge_converse, pattern_to_handles, replay,
    Certificate, CertificateKind, SlicenessCertificate,
};

/// A framed link diagram: every component is a dotted circle (1-handle)
/// or carries an integer framing (2-handle).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HandleDescription {
    pub diagram: LinkDiagram,
    pub framings: BTreeMap<String, Framing>,
}

impl HandleDescription {
    pub fn new(diagram: LinkDiagram, framings: BTreeMap<String, Framing>) -> Result<Self> {
        for c in diagram.components() {
            if !framings.contains_key(&c.label) {
                return Err(Error::Invalid(format!("component {} has no framing or dot", c.label)));
            }
        }
        for k in framings.keys() {
            if diagram.component_index(k).is_none() {
                return Err(Error::Invalid(format!("framing given for unknown component {k}")));
            }
        }
        let mut labels: Vec<&str> = diagram.components().iter().map(|c| c.label.as_str()).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("component labels must be distinct".into()));
        }
        Ok(HandleDescription { diagram, framings })
    }

    pub fn from_file(f: &KnotFile) -> Result<Self> {
        Self::new(f.diagram()?, f.framings.clone())
    }

    pub fn to_file(&self) -> KnotFile {
        let mut f = KnotFile::from_diagram(&self.diagram);
        f.framings = self.framings.clone();
        f
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.diagram.component_index(label).ok_or_else(|| Error::Invalid(format!("no component {label}")))
    }

    pub fn framing(&self, label: &str) -> Result<Framing> {
        self.framings.get(label).copied().ok_or_else(|| Error::Invalid(format!("no component {label}")))
    }

    pub fn lk(&self, a: &str, b: &str) -> Result<i64> {
        Ok(self.diagram.linking_number(self.index(a)?, self.index(b)?))
    }

    fn labels(&self) -> Vec<String> {
        self.diagram.components().iter().map(|c| c.label.clone()).collect()
    }

    /// The single component and its framing, if this is a knot trace.
    pub fn as_knot_trace(&self) -> Option<(LinkDiagram, i64)> {
        if !self.diagram.is_knot() {
            return None;
        }
        let f = self.framings.get(&self.diagram.components()[0].label)?.integer()?;
        Some((self.diagram.clone(), f))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "kebab-case")]
pub enum HandleMove {
    /// Slide 2-handle `a` over 2-handle `b`. The band runs from arc
    /// `band[0]` of `a` to the pushoff of arc `band[1]` of `b` through a
    /// face both bound; `sign` = +1 adds `b`, -1 subtracts it.
    Slide { a: String, b: String, sign: i8, band: [Arc; 2] },
    /// Move `a` across the dotted circle `r` by banding it to a 0-framed
    /// parallel of `r`.
    SlideUnder { a: String, r: String, sign: i8, band: [Arc; 2] },
    /// Erase dotted circle `r` with 2-handle `x`.
    Cancel { r: String, x: String },
    /// One Reidemeister move.
    Rmove { step: Move },
    /// Undo bigons and kinks among the listed components (all when empty)
    /// until none are left.
    Reduce {
        #[serde(default)]
        components: Vec<String>,
    },
    /// Oriented band move (changes the link; used for concordance data).
    Band { arcs: [Arc; 2], split_name: Option<String> },
}

impl HandleMove {
    pub fn kind(&self) -> &'static str {
        match self {
            HandleMove::Slide { .. } => "slide",
            HandleMove::SlideUnder { .. } => "slide-under",
            HandleMove::Cancel { .. } => "cancel",
            HandleMove::Rmove { .. } => "rmove",
            HandleMove::Reduce { .. } => "reduce",
            HandleMove::Band { .. } => "band",
        }
    }

    /// Only Reidemeister moves: an isotopy of the whole link.
    pub fn is_isotopy(&self) -> bool {
        matches!(self, HandleMove::Rmove { .. } | HandleMove::Reduce { .. })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveScript {
    #[serde(default)]
    pub name: String,
    pub moves: Vec<HandleMove>,
}

impl MoveScript {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("script serializes")
    }
}

/// Run a script, checking every step. Errors name the failing step.
pub fn run_move_script(h: &HandleDescription, s: &MoveScript) -> Result<HandleDescription> {
    let mut cur = h.clone();
    for (step, mv) in s.moves.iter().enumerate() {
        cur = apply_move(&cur, mv).map_err(|e| match e {
            Error::Move { .. } => e,
            other => Error::Move { step, kind: mv.kind().to_string(), reason: other.to_string() },
        })?;
        cur.diagram.validate().map_err(|e| Error::Move { step, kind: mv.kind().into(), reason: e.to_string() })?;
    }
    Ok(cur)
}

pub fn apply_move(h: &HandleDescription, mv: &HandleMove) -> Result<HandleDescription> {
    match mv {
        HandleMove::Slide { a, b, sign, band } => slide(h, a, b, *sign, *band, false),
        HandleMove::SlideUnder { a, r, sign, band } => slide(h, a, r, *sign, *band, true),
        HandleMove::Cancel { r, x } => cancel(h, r, x),
        HandleMove::Rmove { step } => {
            let d = h.diagram.apply_reidemeister(step)?;
            Ok(HandleDescription { diagram: d.canonicalize(), framings: h.framings.clone() })
        }
        HandleMove::Reduce { components } => reduce(h, components),
        HandleMove::Band { arcs, split_name } => {
            let ia = h
                .diagram
                .arc_components()
                .get(&arcs[0])
                .copied()
                .ok_or_else(|| Error::Site(format!("no arc {}", arcs[0])))?;
            let label = h.diagram.components()[ia].label.clone();
            let split = split_name.clone().unwrap_or_else(|| fresh_label(h, &format!("{label}'")));
            let d = h.diagram.band_move(arcs[0], arcs[1], &split)?.canonicalize();
            let mut framings = BTreeMap::new();
            for c in d.components() {
                let f = h.framings.get(&c.label).copied().unwrap_or(Framing::Int(0));
                framings.insert(c.label.clone(), f);
            }
            HandleDescription::new(d, framings)
        }
    }
}

fn fresh_label(h: &HandleDescription, base: &str) -> String {
    let mut l = base.to_string();
    while h.framings.contains_key(&l) {
        l.push('\'');
    }
    l
}

fn slide(h: &HandleDescription, a: &str, b: &str, sign: i8, band: [Arc; 2], under: bool) -> Result<HandleDescription> {
    if a == b {
        return Err(Error::Invalid("cannot slide a handle over itself".into()));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::Invalid(format!("slide sign must be +1 or -1, got {sign}")));
    }
    let fa = h.framing(a)?.integer().ok_or_else(|| Error::Invalid(format!("{a} is dotted and cannot slide")))?;
    let fb = match (h.framing(b)?, under) {
        (Framing::Int(f), false) => f,
        (Framing::Dotted(_), true) => 0,
        (_, false) => return Err(Error::Invalid(format!("{b} is dotted; use slide-under"))),
        (_, true) => return Err(Error::Invalid(format!("{b} is not a dotted circle"))),
    };
    let (ia, ib) = (h.index(a)?, h.index(b)?);
    let d = &h.diagram;
    let comp = d.arc_components();
    let [x, y] = band;
    if comp.get(&x) != Some(&ia) || comp.get(&y) != Some(&ib) {
        return Err(Error::Site(format!("band arcs must be an arc of {a} and an arc of {b}")));
    }
    // which side of y faces the band, and does the orientation fit
    let forward = |e: &crate::diagram::FaceEdge| !d.crossings()[e.from.0].is_incoming(e.from.1);
    let side = d
        .faces()
        .iter()
        .find_map(|f| {
            let dx: Vec<bool> = f.edges.iter().filter(|e| e.arc == x).map(forward).collect();
            let dy: Vec<bool> = f.edges.iter().filter(|e| e.arc == y).map(forward).collect();
            dy.into_iter().find(|&fy| dx.contains(&(fy ^ (sign < 0))))
        })
        .ok_or_else(|| Error::Site(format!("arcs {x} and {y} share no face where a sign {sign} band fits")))?;
    let (wr, lk0) = d.writhe_and_linking();
    let pushoff = fresh_label(h, &format!("{b}~"));
    // strand 0 is on the right of b, strand 1 on its left; side = face on the left
    let (names, pos) =
        if side { (vec![b.to_string(), pushoff.clone()], 1) } else { (vec![pushoff.clone(), b.to_string()], 0) };
    let twist_arc = d.components()[ib].arcs.iter().copied().find(|&e| e != y).unwrap_or(y);
    let job = CableJob { comp: ib, strands: 2, arc: twist_arc, inserts: vec![Insert::Twist(fb - wr[ib])], names };
    let (mut d2, t) = cable_tracked(d, &job, &d.name, &[(x, 0), (y, pos)])?;
    let ip = d2.component_index(&pushoff).expect("pushoff component");
    if sign < 0 {
        d2 = d2.reverse_components(&[ip]);
    }
    let d3 = d2.band_move(t[0], t[1], &pushoff)?.canonicalize();
    let mut framings = h.framings.clone();
    let wa_new = d3.writhe_and_linking().0[d3.component_index(a).expect("slid component")];
    let recomputed = wa_new + (fa - wr[ia]) + (fb - wr[ib]);
    let new_fa = if under {
        recomputed
    } else {
        let formula = fa + fb + 2 * i64::from(sign) * lk0[ia][ib];
        if formula != recomputed {
            return Err(Error::Verification(format!(
                "slide framing {formula} from the slide rule disagrees with {recomputed} read off the diagram"
            )));
        }
        formula
    };
    framings.insert(a.to_string(), Framing::Int(new_fa));
    let out = HandleDescription::new(d3, framings)?;
    // linking bookkeeping
    let s = i64::from(sign);
    for c in h.labels() {
        for e in h.labels() {
            if c >= e {
                continue;
            }
            let before = h.lk(&c, &e)?;
            let after = out.lk(&c, &e)?;
            let expect = if c == a || e == a {
                let other = if c == a { &e } else { &c };
                let (io, ibb) = (h.index(other)?, ib);
                let extra = if io == ibb {
                    if under {
                        0
                    } else {
                        fb
                    }
                } else {
                    lk0[io][ibb]
                };
                before + s * extra
            } else {
                before
            };
            if after != expect {
                return Err(Error::Verification(format!("lk({c},{e}) is {after} after the slide, expected {expect}")));
            }
        }
    }
    Ok(out)
}

/// Crossings where some other strand passes over (`over = true`) or under
/// component `r`, as `(crossing, other component)`.
fn crossings_with(d: &LinkDiagram, r: usize, over: bool) -> Vec<(usize, usize)> {
    let comp = d.arc_components();
    d.crossings()
        .iter()
        .enumerate()
        .filter_map(|(ci, x)| {
            let (cu, co) = (comp[&x.pd[0]], comp[&x.pd[1]]);
            match (cu == r, co == r) {
                (true, false) if over => Some((ci, co)),
                (false, true) if !over => Some((ci, cu)),
                _ => None,
            }
        })
        .collect()
}

/// True when `r` has no self-crossings.
fn is_round(d: &LinkDiagram, r: usize) -> bool {
    let comp = d.arc_components();
    !d.crossings().iter().any(|x| comp[&x.pd[0]] == r && comp[&x.pd[1]] == r)
}

/// Does component `x` meet one of the two spanning disks of the round
/// component `r` exactly once, and nothing else meets that disk?
fn disk_meets_only(d: &LinkDiagram, r: usize, x: usize) -> bool {
    [true, false].iter().any(|&over| {
        let hits = crossings_with(d, r, over);
        hits.len() == 1 && hits[0].1 == x
    })
}

/// Number of times component `x` passes over / under the round component `r`.
fn passes(d: &LinkDiagram, r: usize, x: usize) -> (usize, usize) {
    let o = crossings_with(d, r, true).iter().filter(|h| h.1 == x).count();
    let u = crossings_with(d, r, false).iter().filter(|h| h.1 == x).count();
    (o, u)
}

fn cancel(h: &HandleDescription, r: &str, x: &str) -> Result<HandleDescription> {
    if !h.framing(r)?.is_dotted() {
        return Err(Error::Invalid(format!("{r} is not a dotted circle")));
    }
    if h.framing(x)?.is_dotted() {
        return Err(Error::Invalid(format!("{x} is a dotted circle, not a 2-handle")));
    }
    let (ir, ix) = (h.index(r)?, h.index(x)?);
    let d = &h.diagram;
    if !is_round(d, ir) {
        return Err(Error::Site(format!("{r} crosses itself")));
    }
    if !disk_meets_only(d, ir, ix) {
        return Err(Error::Site(format!(
            "neither disk bounded by {r} meets {x} once and nothing else (over: {:?}, under: {:?})",
            crossings_with(d, ir, true),
            crossings_with(d, ir, false)
        )));
    }
    let out = d.delete_components(&[ir, ix])?.canonicalize();
    let mut framings = h.framings.clone();
    framings.remove(r);
    framings.remove(x);
    let res = HandleDescription::new(out, framings)?;
    for c in res.labels() {
        for e in res.labels() {
            if c < e && res.lk(&c, &e)? != h.lk(&c, &e)? {
                return Err(Error::Verification(format!("cancelling changed lk({c},{e})")));
            }
        }
    }
    Ok(res)
}

fn reduce(h: &HandleDescription, only: &[String]) -> Result<HandleDescription> {
    let mut d = h.diagram.clone();
    let allowed: Vec<usize> = if only.is_empty() {
        (0..d.component_count()).collect()
    } else {
        only.iter().map(|l| h.index(l)).collect::<Result<_>>()?
    };
    loop {
        let comp = d.arc_components();
        let inside = |arcs: &[Arc]| arcs.iter().all(|a| allowed.contains(&comp[a]));
        let next = d.available_moves().into_iter().find(|m| match m {
            Move::R1Inverse { arc } => inside(&[*arc]),
            Move::R2Inverse { arcs } => inside(arcs),
            _ => false,
        });
        match next {
            Some(m) => d = d.apply_reidemeister(&m)?.canonicalize(),
            None => break,
        }
    }
    HandleDescription::new(d, h.framings.clone())
}

/// Outcome of a hypothesis check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    PassAfterScript,
    Unverified,
    Fail,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::PassAfterScript => "PASS-after-script",
            Verdict::Unverified => "UNVERIFIED",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportItem {
    pub check: String,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub verdict: Verdict,
    pub items: Vec<ReportItem>,
}

impl HypothesisReport {
    fn from_items(items: Vec<ReportItem>) -> Self {
        let verdict = items.iter().map(|i| i.verdict).max_by_key(|v| *v as u8).unwrap_or(Verdict::Pass);
        HypothesisReport { verdict, items }
    }
}

pub const ROLE_B: &str = "B";
pub const ROLE_G: &str = "G";
pub const ROLE_R: &str = "R";

/// Hypotheses for building a pair of knots with the same 0-trace from
/// `B ∪ G ∪ R`: `R` dotted, `B` and `G` 0-framed, `lk(B, G) = 0`, and
/// `R` a meridian of each of `B` and `G`. The meridian conditions are only
/// recognised in round-disk form (`R` without self-crossings, the other
/// component passing over it exactly once or under it exactly once); an
/// isotopy script may be supplied to reach that form.
pub fn check_trace_hypotheses(h: &HandleDescription, isotopy: Option<&MoveScript>) -> Result<HypothesisReport> {
    for role in [ROLE_B, ROLE_G, ROLE_R] {
        h.index(role).map_err(|_| Error::Invalid(format!("missing role {role}")))?;
    }
    let mut items = Vec::new();
    let mut item = |check: &str, ok: bool, fail: Verdict, detail: String| {
        items.push(ReportItem { check: check.into(), verdict: if ok { Verdict::Pass } else { fail }, detail })
    };
    item("R is a dotted circle", h.framing(ROLE_R)?.is_dotted(), Verdict::Fail, format!("{:?}", h.framing(ROLE_R)?));
    for role in [ROLE_B, ROLE_G] {
        let f = h.framing(role)?;
        item(&format!("{role} is 0-framed"), f == Framing::Int(0), Verdict::Fail, format!("{f:?}"));
    }
    if h.diagram.component_count() != 3 {
        item("exactly three components", false, Verdict::Fail, format!("{}", h.diagram.component_count()));
    }
    let lk = h.lk(ROLE_B, ROLE_G)?;
    item("lk(B,G) = 0", lk == 0, Verdict::Fail, format!("lk(B,G) = {lk}"));

    let meridians = |h: &HandleDescription| -> Result<Vec<ReportItem>> {
        let d = &h.diagram;
        let ir = h.index(ROLE_R)?;
        let round = is_round(d, ir);
        let mut out = Vec::new();
        for role in [ROLE_B, ROLE_G] {
            let (o, u) = passes(d, ir, h.index(role)?);
            let ok = round && (o == 1 || u == 1);
            out.push(ReportItem {
                check: format!("{role} ∪ R is {role} with a meridian"),
                verdict: if ok { Verdict::Pass } else { Verdict::Unverified },
                detail: format!("R round: {round}; {role} passes over R {o} times, under {u} times"),
            });
        }
        Ok(out)
    };
    let mut mer = meridians(h)?;
    if let Some(script) = isotopy {
        if mer.iter().any(|i| i.verdict != Verdict::Pass) {
            if !script.moves.iter().all(HandleMove::is_isotopy) {
                return Err(Error::Invalid("the isotopy script may only contain Reidemeister moves".into()));
            }
            let moved = run_move_script(h, script)?;
            mer = meridians(&moved)?;
            for i in &mut mer {
                if i.verdict == Verdict::Pass {
                    i.verdict = Verdict::PassAfterScript;
                }
            }
        }
    }
    items.extend(mer);
    Ok(HypothesisReport::from_items(items))
}

/// Is the sublink on `labels` split in the diagram (no crossing joins the
/// two groups)? A diagram-level test: sufficient, not necessary.
pub fn is_split_pair(h: &HandleDescription, a: &str, b: &str) -> Result<bool> {
    let (ia, ib) = (h.index(a)?, h.index(b)?);
    let keep = [ia.min(ib), ia.max(ib)];
    let sub = h.diagram.sublink(&keep)?;
    let pieces = sub.split_pieces();
    let (sa, sb) = (sub.component_index(a).unwrap(), sub.component_index(b).unwrap());
    Ok(pieces.iter().all(|p| !(p.contains(&sa) && p.contains(&sb))))
}
