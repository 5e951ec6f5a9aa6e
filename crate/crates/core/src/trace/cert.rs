//! Replayable certificates: trace pairs, concordances and the
//! pattern/handle bridge.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{
    check_trace_hypotheses, crossings_with, is_round, is_split_pair, run_move_script, HandleDescription, HandleMove,
    HypothesisReport, MoveScript, ReportItem, Verdict, ROLE_B, ROLE_G, ROLE_R,
};
use crate::diagram::geo::braid_closure;
use crate::diagram::io::{Framing, KnotFile};
use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::jones::kauffman_jones;
use crate::s::s_exact;
use crate::satellite::{Pattern, AXIS_LABEL, PATTERN_LABEL};

/// Knots up to this size get their Jones polynomial and `s` logged.
pub const LOG_MAX_CROSSINGS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    TracePair,
    Concordance,
    PatternBridge,
}

/// Evidence that `G` bounds a disk in the 4-ball, supplied from outside.
/// A ribbon movie (band moves ending in an unlink) is checked; a bare
/// reference is recorded as asserted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlicenessCertificate {
    pub name: String,
    #[serde(default)]
    pub reference: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ribbon_bands: Option<MoveScript>,
}

impl SlicenessCertificate {
    pub fn asserted(name: &str, reference: &str) -> Self {
        SlicenessCertificate { name: name.into(), reference: reference.into(), ribbon_bands: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub inputs: BTreeMap<String, KnotFile>,
    pub inputs_sha256: String,
    pub scripts: BTreeMap<String, MoveScript>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub externals: Vec<SlicenessCertificate>,
    pub outputs: BTreeMap<String, KnotFile>,
    pub report: HypothesisReport,
    /// Some hypothesis was only UNVERIFIED.
    pub tainted: bool,
    pub log: Vec<String>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn output(&self, name: &str) -> Result<LinkDiagram> {
        self.outputs.get(name).ok_or_else(|| Error::Invalid(format!("certificate has no output {name}")))?.diagram()
    }

    fn new(
        kind: CertificateKind,
        inputs: BTreeMap<String, KnotFile>,
        scripts: BTreeMap<String, MoveScript>,
        externals: Vec<SlicenessCertificate>,
        report: HypothesisReport,
    ) -> Self {
        let inputs_sha256 = digest(&inputs, &scripts, &externals);
        let tainted = report.verdict == Verdict::Unverified;
        Certificate {
            kind,
            inputs,
            inputs_sha256,
            scripts,
            externals,
            outputs: BTreeMap::new(),
            report,
            tainted,
            log: Vec::new(),
        }
    }
}

fn digest(
    inputs: &BTreeMap<String, KnotFile>,
    scripts: &BTreeMap<String, MoveScript>,
    ext: &[SlicenessCertificate],
) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(inputs).expect("serializes"));
    h.update(serde_json::to_vec(scripts).expect("serializes"));
    h.update(serde_json::to_vec(ext).expect("serializes"));
    hex::encode(h.finalize())
}

/// Rebuild a certificate from its inputs, scripts and external data and
/// compare byte for byte.
pub fn replay(c: &Certificate) -> Result<Certificate> {
    if digest(&c.inputs, &c.scripts, &c.externals) != c.inputs_sha256 {
        return Err(Error::Verification("inputs digest does not match".into()));
    }
    let h = || -> Result<HandleDescription> {
        HandleDescription::from_file(
            c.inputs.get("h").ok_or_else(|| Error::Invalid("certificate lacks input h".into()))?,
        )
    };
    let script = |k: &str| c.scripts.get(k);
    let need = |k: &str| script(k).ok_or_else(|| Error::Invalid(format!("certificate lacks script {k}")));
    let again = match c.kind {
        CertificateKind::TracePair => derive_trace_pair(&h()?, need("K")?, need("K'")?, script("isotopy"))?,
        CertificateKind::Concordance => {
            let ext =
                c.externals.first().ok_or_else(|| Error::Invalid("certificate lacks the sliceness record".into()))?;
            certify_concordance(&h()?, ext, need("K")?, script("bands"), script("isotopy"))?
        }
        CertificateKind::PatternBridge => match c.inputs.get("pattern") {
            Some(p) => pattern_bridge_converse(&Pattern::from_file(p)?)?,
            None => pattern_bridge(&h()?, need("J")?, script("J*"))?,
        },
    };
    if again.to_json() != c.to_json() {
        return Err(Error::Verification("replay produced a different certificate".into()));
    }
    Ok(again)
}

fn require_hypotheses(h: &HandleDescription, isotopy: Option<&MoveScript>) -> Result<HypothesisReport> {
    let report = check_trace_hypotheses(h, isotopy)?;
    if report.verdict == Verdict::Fail {
        let failed: Vec<String> = report
            .items
            .iter()
            .filter(|i| i.verdict == Verdict::Fail)
            .map(|i| format!("{} ({})", i.check, i.detail))
            .collect();
        return Err(Error::Verification(format!("hypotheses fail: {}", failed.join("; "))));
    }
    Ok(report)
}

/// Run `s` and insist on a single 0-framed knot.
fn knot_trace(h: &HandleDescription, s: &MoveScript, what: &str) -> Result<LinkDiagram> {
    let end = run_move_script(h, s)?;
    match end.as_knot_trace() {
        Some((d, 0)) => Ok(d),
        Some((_, f)) => Err(Error::Verification(format!("script for {what} ends in a {f}-framed knot, not 0-framed"))),
        None => Err(Error::Verification(format!(
            "script for {what} ends with {} components, not a knot trace",
            end.diagram.component_count()
        ))),
    }
}

fn log_jones(log: &mut Vec<String>, name: &str, d: &LinkDiagram) {
    if d.crossing_count() <= LOG_MAX_CROSSINGS {
        match kauffman_jones(d) {
            Ok(j) => log.push(format!("jones({name}) = {j}")),
            Err(e) => log.push(format!("jones({name}) not computed: {e}")),
        }
    } else {
        log.push(format!("jones({name}) skipped: {} crossings", d.crossing_count()));
    }
}

fn knot_file(d: &LinkDiagram, name: &str) -> KnotFile {
    let mut d = d.clone();
    d.name = name.into();
    KnotFile::from_diagram(&d)
}

/// Both knots whose 0-traces are the 4-manifold described by `h`.
pub fn derive_trace_pair(
    h: &HandleDescription,
    script_k: &MoveScript,
    script_kp: &MoveScript,
    isotopy: Option<&MoveScript>,
) -> Result<Certificate> {
    let report = require_hypotheses(h, isotopy)?;
    let k = knot_trace(h, script_k, "K")?;
    let kp = knot_trace(h, script_kp, "K'")?;
    let mut scripts = BTreeMap::from([("K".to_string(), script_k.clone()), ("K'".to_string(), script_kp.clone())]);
    if let Some(s) = isotopy {
        scripts.insert("isotopy".into(), s.clone());
    }
    let mut c = Certificate::new(
        CertificateKind::TracePair,
        BTreeMap::from([("h".to_string(), h.to_file())]),
        scripts,
        Vec::new(),
        report,
    );
    log_jones(&mut c.log, "K", &k);
    log_jones(&mut c.log, "K'", &kp);
    c.outputs.insert("K".into(), knot_file(&k, "K"));
    c.outputs.insert("K'".into(), knot_file(&kp, "K'"));
    Ok(c)
}

/// Check a ribbon movie for a knot: bands, then isotopy down to a
/// crossingless unlink with one more component than there were bands.
fn check_ribbon(g: &LinkDiagram, bands: &MoveScript) -> Result<()> {
    let start =
        HandleDescription::new(g.clone(), BTreeMap::from([(g.components()[0].label.clone(), Framing::Int(0))]))?;
    let mut s = bands.clone();
    s.moves.push(HandleMove::Reduce { components: vec![] });
    let end = run_move_script(&start, &s)?;
    let nb = bands.moves.iter().filter(|m| matches!(m, HandleMove::Band { .. })).count();
    if end.diagram.crossing_count() != 0 || end.diagram.component_count() != nb + 1 {
        return Err(Error::Verification(format!(
            "ribbon movie ends in {} components with {} crossings, expected a {}-component unlink",
            end.diagram.component_count(),
            end.diagram.crossing_count(),
            nb + 1
        )));
    }
    Ok(())
}

/// Certificate that the knot `K` read off `h` by `script_k` is
/// concordant to `B`: needs the trace hypotheses, `B ∪ G` split, and `G`
/// slice.
pub fn certify_concordance(
    h: &HandleDescription,
    sliceness: &SlicenessCertificate,
    script_k: &MoveScript,
    bands: Option<&MoveScript>,
    isotopy: Option<&MoveScript>,
) -> Result<Certificate> {
    let mut report = require_hypotheses(h, isotopy)?;
    if !is_split_pair(h, ROLE_B, ROLE_G)? {
        return Err(Error::Verification("B ∪ G is not split in this diagram; no concordance certificate".into()));
    }
    report.items.push(ReportItem {
        check: "B ∪ G split".into(),
        verdict: Verdict::Pass,
        detail: "diagram-level".into(),
    });
    let g = h.diagram.sublink(&[h.index(ROLE_G)?])?;
    let slice_item = match &sliceness.ribbon_bands {
        Some(movie) => {
            check_ribbon(&g, movie)?;
            ReportItem {
                check: "G slice".into(),
                verdict: Verdict::Pass,
                detail: format!("ribbon movie {}", sliceness.name),
            }
        }
        None => ReportItem {
            check: "G slice".into(),
            verdict: Verdict::Pass,
            detail: format!("asserted by {} ({})", sliceness.name, sliceness.reference),
        },
    };
    report.items.push(slice_item);
    let k = knot_trace(h, script_k, "K")?;

    let mut scripts = BTreeMap::from([("K".to_string(), script_k.clone())]);
    if let Some(s) = isotopy {
        scripts.insert("isotopy".into(), s.clone());
    }
    if let Some(s) = bands {
        scripts.insert("bands".into(), s.clone());
    }
    let mut c = Certificate::new(
        CertificateKind::Concordance,
        BTreeMap::from([("h".to_string(), h.to_file())]),
        scripts,
        vec![sliceness.clone()],
        report,
    );
    let b = h.diagram.sublink(&[h.index(ROLE_B)?])?;
    log_jones(&mut c.log, "K", &k);
    if let Some(s) = bands {
        let start =
            HandleDescription::new(k.clone(), BTreeMap::from([(k.components()[0].label.clone(), Framing::Int(0))]))?;
        let after = run_move_script(&start, s)?;
        c.log.push(format!(
            "band data applied to K: {} components, {} crossings",
            after.diagram.component_count(),
            after.diagram.crossing_count()
        ));
        c.outputs.insert("K-banded".into(), after.to_file());
    }
    // s is a concordance invariant, so s(K) = s(B) whenever both are computable
    if k.crossing_count() <= LOG_MAX_CROSSINGS && b.crossing_count() <= LOG_MAX_CROSSINGS {
        let (sk, sb) = (s_exact(&k)?.exact(), s_exact(&b)?.exact());
        if sk != sb {
            return Err(Error::Verification(format!("s(K) = {sk:?} but s(B) = {sb:?}")));
        }
        c.log.push(format!("s(K) = s(B) = {}", sk.expect("exact")));
    } else {
        c.log.push(format!(
            "s-consistency skipped: K has {} crossings, B has {}",
            k.crossing_count(),
            b.crossing_count()
        ));
    }
    c.outputs.insert("K".into(), knot_file(&k, "K"));
    c.outputs.insert("B".into(), knot_file(&b, "B"));
    Ok(c)
}

/// Normal form for reading off a pattern: `small` is a round circle whose
/// only crossings are two with `R`, so it is a meridian of `R` away from
/// everything else.
fn small_meridian(h: &HandleDescription, small: &str) -> Result<bool> {
    let d = &h.diagram;
    let (is, ir) = (h.index(small)?, h.index(ROLE_R)?);
    let hits: Vec<(usize, usize)> =
        crossings_with(d, is, true).into_iter().chain(crossings_with(d, is, false)).collect();
    Ok(is_round(d, is) && hits.len() == 2 && hits.iter().all(|&(_, o)| o == ir) && d.linking_number(is, ir).abs() == 1)
}

fn read_pattern(h: &HandleDescription, knot: &str, small: &str, name: &str) -> Result<Pattern> {
    if !small_meridian(h, small)? {
        return Err(Error::Verification(format!("{small} is not a small meridian of R at the end of the script")));
    }
    let mut d = h.diagram.sublink(&[h.index(knot)?, h.index(ROLE_R)?])?;
    let (ik, ia) = (d.component_index(knot).expect("kept"), d.component_index(ROLE_R).expect("kept"));
    d.set_component_label(ik, PATTERN_LABEL);
    d.set_component_label(ia, AXIS_LABEL);
    d.name = name.into();
    let mut p = Pattern::from_diagram(&d.canonicalize(), AXIS_LABEL)?;
    p.dualizable = true;
    Ok(p)
}

fn check_bridge_script(s: &MoveScript) -> Result<()> {
    if s.moves.iter().any(|m| matches!(m, HandleMove::Cancel { .. } | HandleMove::Band { .. })) {
        return Err(Error::Invalid("normal-form scripts may only slide and isotope".into()));
    }
    Ok(())
}

/// Dualizable pattern `P` (and `P*` when `script_jstar` is given) from a
/// description satisfying the trace hypotheses. `script_j` must leave `G`
/// as a small meridian of `R`; `P` is then `B` inside the complement of
/// `R`. Symmetrically for `P*` with the roles of `B` and `G` exchanged.
pub fn pattern_bridge(
    h: &HandleDescription,
    script_j: &MoveScript,
    script_jstar: Option<&MoveScript>,
) -> Result<Certificate> {
    let report = require_hypotheses(h, None)?;
    let mut scripts = BTreeMap::from([("J".to_string(), script_j.clone())]);
    check_bridge_script(script_j)?;
    let j = run_move_script(h, script_j)?;
    let p = read_pattern(&j, ROLE_B, ROLE_G, "P")?;
    let mut outs = vec![("P", p)];
    if let Some(s) = script_jstar {
        check_bridge_script(s)?;
        let js = run_move_script(h, s)?;
        outs.push(("P*", read_pattern(&js, ROLE_G, ROLE_B, "P*")?));
        scripts.insert("J*".into(), s.clone());
    }
    let mut c = Certificate::new(
        CertificateKind::PatternBridge,
        BTreeMap::from([("h".to_string(), h.to_file())]),
        scripts,
        Vec::new(),
        report,
    );
    for (name, p) in outs {
        let wn = p.winding_numbers();
        c.log.push(format!("{name}: w = {}, g = {}, dualizable", wn.w, wn.g));
        log_jones(&mut c.log, &format!("{name}(U)"), &p.closure()?);
        c.outputs.insert(name.into(), p.to_file());
    }
    Ok(c)
}

/// Handle description for a pattern meeting a meridian disk of its axis
/// once: `B` = the pattern knot (0-framed), `R` = the axis (dotted), `G` =
/// a small 0-framed meridian of `R`.
pub fn pattern_to_handles(p: &Pattern) -> Result<HandleDescription> {
    if p.winding_numbers().g != 1 {
        return Err(Error::Invalid(format!(
            "pattern meets the meridian disk {} times; a handle description needs a presentation meeting it once",
            p.winding_numbers().g
        )));
    }
    let d = p.diagram();
    let ia = d.component_index(AXIS_LABEL).expect("axis");
    let mut hopf = braid_closure("meridian", 2, &[1, 1])?;
    hopf.set_component_label(0, ROLE_R);
    hopf.set_component_label(1, ROLE_G);
    let r_arc = hopf.components()[0].arcs[0];
    let mut out = d.connected_sum(&hopf, d.components()[ia].arcs[0], r_arc)?;
    let (ip, ia) = (out.component_index(PATTERN_LABEL).expect("P"), out.component_index(AXIS_LABEL).expect("A"));
    out.set_component_label(ip, ROLE_B);
    out.set_component_label(ia, ROLE_R);
    let out = out.canonicalize();
    let framings = BTreeMap::from([
        (ROLE_B.to_string(), Framing::Int(0)),
        (ROLE_G.to_string(), Framing::Int(0)),
        (ROLE_R.to_string(), Framing::DOTTED),
    ]);
    HandleDescription::new(out, framings)
}

/// Converse bridge: the handle description built from `p`, checked, with
/// `P` read back from it.
pub fn pattern_bridge_converse(p: &Pattern) -> Result<Certificate> {
    let h = pattern_to_handles(p)?;
    let back = pattern_bridge(&h, &MoveScript::default(), None)?;
    let mut c = Certificate::new(
        CertificateKind::PatternBridge,
        BTreeMap::from([("pattern".to_string(), p.to_file())]),
        BTreeMap::new(),
        Vec::new(),
        back.report,
    );
    c.outputs.insert("h".into(), h.to_file());
    c.outputs.extend(back.outputs);
    c.log = back.log;
    Ok(c)
}
