//! The bundled corpus: small knots and links with tabulated invariants,
//! handle-description toys, a few patterns, and placeholder slots for
//! diagrams that are only known as pictures.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::diagram::geo::{braid_closure, braid_closure_named};
use crate::diagram::io::{from_pd, Framing, KnotFile};
use crate::diagram::{Arc, LinkDiagram};
use crate::error::{Error, Result};
use crate::jones::{determinant, kauffman_jones};
use crate::kh::{khovanov, poincare_polynomial, KhOptions, Method};
use crate::poly::LaurentPoly2;
use crate::s::{s_candidates, s_exact, CrossingChange};
use crate::satellite::{cable_pattern, local_knot_pattern, Pattern, WindingNumbers};
use crate::trace::{run_move_script, HandleDescription, HandleMove, MoveScript};

/// Environment variable naming a corpus directory to use instead of the
/// built-in one.
pub const CORPUS_ENV: &str = "KNOTBENCH_CORPUS";

/// Chirality and grading convention every stored invariant is expressed in:
/// PD tuples start at the incoming under-strand and run counterclockwise,
/// and the right-handed trefoil has Poincaré polynomial
/// `q + q^3 + q^5t^2 + q^9t^3` (so `s = +2`).
pub const CONVENTION: &str = "pd-ccw/rh-trefoil-positive";

pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sourced<T> {
    pub value: T,
    pub source: String,
}

fn src<T>(value: T, source: &str) -> Sourced<T> {
    Sourced { value, source: source.to_string() }
}

/// How `s` propagates along a family: each unit step of the family
/// parameter applies `per_step` to the previous member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Propagation {
    pub base: String,
    pub per_step: Vec<CrossingChange>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Known {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Sourced<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_candidates: Option<Sourced<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g4: Option<Sourced<i64>>,
    /// Certified upper bounds for the slice genus.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub g4_upper: Vec<Sourced<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub determinant: Option<Sourced<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jones: Option<Sourced<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kh: Option<Sourced<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub winding: Option<WindingNumbers>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub propagation: Option<Propagation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryKind {
    Knot,
    Link,
    Handle,
    Pattern,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub kind: EntryKind,
    /// Knot-file name inside the corpus directory; `None` for a placeholder
    /// whose diagram has not been transcribed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    pub known: Known,
    pub convention: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Move scripts shipped with a handle description, by role (`K`, `K'`).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub scripts: BTreeMap<String, String>,
}

impl CorpusEntry {
    pub fn is_placeholder(&self) -> bool {
        self.file.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct Manifest {
    convention: String,
    entries: Vec<CorpusEntry>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Corpus {
    entries: Vec<CorpusEntry>,
    files: BTreeMap<String, KnotFile>,
    scripts: BTreeMap<String, MoveScript>,
}

/// Published Khovanov polynomial of the ~40-crossing knot `K'_0`, whose
/// diagram is available only as a drawing.
pub const KPRIME0_KH: &str = "q^-1t^-2 + q^3t^-1 + 2q^3 + q^5 + q^5t + q^7t + q^5t^2 + q^7t^2 + q^9t^2 + q^7t^3 + 2q^9t^3 + q^11t^3 + q^9t^4 + q^11t^4 + q^13t^4 + q^13t^5 + q^13t^6 + q^13t^7 + q^15t^7 + q^17t^7 + q^15t^8 + q^17t^8 + q^19t^8 + q^19t^9 + q^17t^10 + q^19t^10 + q^19t^11 + 2q^21t^11 + q^23t^11 + 2q^21t^12 + q^23t^12 + q^25t^12 + q^23t^13 + 2q^25t^13 + q^23t^14 + q^25t^14 + q^27t^14 + 3q^27t^15 + q^29t^15 + q^27t^16 + 2q^31t^16 + q^29t^17 + q^31t^17 + q^29t^18 + q^33t^18 + q^31t^19 + 2q^33t^19 + q^35t^20 + q^37t^20 + q^35t^21 + q^37t^22 + q^39t^22 + q^37t^23 + q^41t^23 + q^41t^24 + q^43t^26 + q^47t^27";

const TAB: &str = "tabulated";
const SEIFERT: &str = "Seifert surface of the stored diagram";
const RIBBON: &str = "ribbon disk";

fn knot(name: &str, d: LinkDiagram, known: Known) -> (CorpusEntry, KnotFile) {
    let mut d = d;
    d.name = name.to_string();
    let mut known = known;
    if let Ok(g) = d.seifert_genus_upper() {
        known.g4_upper.insert(0, src(g, SEIFERT));
    }
    entry(name, EntryKind::Knot, KnotFile::from_diagram(&d), known, None)
}

fn entry(name: &str, kind: EntryKind, file: KnotFile, known: Known, note: Option<&str>) -> (CorpusEntry, KnotFile) {
    (
        CorpusEntry {
            name: name.to_string(),
            kind,
            file: Some(format!("{name}.json")),
            known,
            convention: CONVENTION.to_string(),
            note: note.map(str::to_string),
            scripts: BTreeMap::new(),
        },
        file,
    )
}

fn placeholder(name: &str, kind: EntryKind, known: Known, note: &str) -> CorpusEntry {
    CorpusEntry {
        name: name.to_string(),
        kind,
        file: None,
        known,
        convention: CONVENTION.to_string(),
        note: Some(note.to_string()),
        scripts: BTreeMap::new(),
    }
}

fn basic(s: i64, g4: i64, det: u64) -> Known {
    Known { s: Some(src(s, TAB)), g4: Some(src(g4, TAB)), determinant: Some(src(det, TAB)), ..Known::default() }
}

fn handle(name: &str, word: &[i32], note: &str) -> Result<(CorpusEntry, KnotFile)> {
    let d = braid_closure_named(name, 3, word, &["B", "R", "G"])?;
    let mut f = KnotFile::from_diagram(&d);
    f.framings.insert("B".into(), Framing::Int(0));
    f.framings.insert("G".into(), Framing::Int(0));
    f.framings.insert("R".into(), Framing::DOTTED);
    Ok(entry(name, EntryKind::Handle, f, Known::default(), Some(note)))
}

fn pattern(name: &str, p: Pattern) -> (CorpusEntry, KnotFile) {
    let mut p = p;
    p.set_name(name);
    let known = Known { winding: Some(p.winding_numbers()), ..Known::default() };
    entry(name, EntryKind::Pattern, p.to_file(), known, None)
}

pub fn trefoil_lh() -> LinkDiagram {
    from_pd("trefoil-lh", &[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]).expect("trefoil")
}

pub fn trefoil_rh() -> LinkDiagram {
    let mut d = trefoil_lh().mirror();
    d.name = "trefoil-rh".into();
    d
}

#[allow(clippy::vec_init_then_push)]
fn builtin_entries() -> Result<Vec<(CorpusEntry, Option<KnotFile>)>> {
    let rh = trefoil_rh();
    let lh = trefoil_lh();
    let mut out: Vec<(CorpusEntry, KnotFile)> = Vec::new();

    out.push(knot(
        "unknot",
        LinkDiagram::unknot(),
        Known { kh: Some(src("q^-1 + q".into(), TAB)), jones: Some(src("q^-1 + q".into(), TAB)), ..basic(0, 0, 1) },
    ));
    out.push(knot(
        "trefoil-rh",
        rh.clone(),
        Known {
            kh: Some(src("q + q^3 + q^5t^2 + q^9t^3".into(), TAB)),
            jones: Some(src("q + q^3 + q^5 - q^9".into(), TAB)),
            ..basic(2, 1, 3)
        },
    ));
    out.push(knot(
        "trefoil-lh",
        lh.clone(),
        Known {
            kh: Some(src("q^-9t^-3 + q^-5t^-2 + q^-3 + q^-1".into(), TAB)),
            jones: Some(src("-q^-9 + q^-5 + q^-3 + q^-1".into(), TAB)),
            ..basic(-2, 1, 3)
        },
    ));
    out.push(knot(
        "figure-eight",
        from_pd("figure-eight", &[[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]])?,
        Known { kh: Some(src("q^-5t^-2 + q^-1t^-1 + q^-1 + q + qt + q^5t^2".into(), TAB)), ..basic(0, 1, 5) },
    ));
    out.push(knot("torus-2-5", braid_closure("torus-2-5", 2, &[1; 5])?, basic(4, 2, 5)));
    out.push(knot("torus-2-7", braid_closure("torus-2-7", 2, &[1; 7])?, basic(6, 3, 7)));
    let k52 = from_pd("5_2", &[[1, 5, 2, 4], [3, 9, 4, 8], [5, 1, 6, 10], [7, 3, 8, 2], [9, 7, 10, 6]])?;
    // this PD is drawn with all crossings of one sign
    let s52 = if k52.writhe() > 0 { 2 } else { -2 };
    out.push(knot("5_2", k52, basic(s52, 1, 7)));
    let mut k61 = basic(0, 0, 9);
    k61.g4_upper.push(src(0, RIBBON));
    out.push(knot(
        "6_1",
        from_pd("6_1", &[[1, 4, 2, 5], [7, 10, 8, 11], [3, 9, 4, 8], [9, 3, 10, 2], [5, 12, 6, 1], [11, 6, 12, 7]])?,
        k61,
    ));
    let a = rh.components()[0].arcs[0];
    out.push(knot("granny", rh.connected_sum(&rh, a, a)?, basic(4, 2, 9)));
    let mut sq = basic(0, 0, 9);
    sq.g4_upper.push(src(0, RIBBON));
    out.push(knot("square", rh.connected_sum(&lh, a, lh.components()[0].arcs[0])?, sq));

    let link = |name: &str, d: LinkDiagram, kh: &str, det: u64| {
        let mut d = d;
        d.name = name.to_string();
        let known = Known { kh: Some(src(kh.into(), TAB)), determinant: Some(src(det, TAB)), ..Known::default() };
        entry(name, EntryKind::Link, KnotFile::from_diagram(&d), known, None)
    };
    out.push(link("hopf", braid_closure("hopf", 2, &[1, 1])?, "1 + q^2 + q^4t^2 + q^6t^2", 2));
    out.push(link("unlink-2", braid_closure("unlink-2", 2, &[])?, "q^-2 + 2 + q^2", 0));

    out.push(handle(
        "handle-toy",
        &[1, 1, 2, 2],
        "B and G are meridians of the dotted circle R and are unlinked from each other",
    )?);
    out.push(handle("handle-linked", &[1, 1, 2, 2, 2, 1, 1, -2], "as handle-toy with lk(B,G) = 1")?);
    out.push(handle(
        "handle-nonsplit",
        &[1, 1, 2, 2, 2, 1, 1, -2, 2, -1, -1, -2],
        "as handle-toy with lk(B,G) = 0 but B and G drawn clasped both ways",
    )?);

    let toy = braid_closure_named("handle-trefoil", 3, &[1, 1, 2, 2], &["B", "R", "G"])?;
    let b_arc = toy.components()[toy.component_index("B").expect("B")].arcs[0];
    let mut f = KnotFile::from_diagram(&toy.connected_sum(&rh, b_arc, 1)?.canonicalize());
    f.name = "handle-trefoil".into();
    f.framings = [("B", Framing::Int(0)), ("G", Framing::Int(0)), ("R", Framing::DOTTED)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    out.push(entry(
        "handle-trefoil",
        EntryKind::Handle,
        f,
        Known::default(),
        Some("handle-toy with a right-handed trefoil tied into B"),
    ));

    out.push(pattern("pattern-core", Pattern::core()));
    out.push(pattern("pattern-cable-2", cable_pattern(2)?));
    out.push(pattern("pattern-cable-3", cable_pattern(3)?));
    out.push(pattern("pattern-local-trefoil", local_knot_pattern(&rh)?));

    let mut all: Vec<(CorpusEntry, Option<KnotFile>)> = out.into_iter().map(|(e, f)| (e, Some(f))).collect();
    let published = "published computation";
    let missing = "diagram known only as a drawing; no transcription bundled";
    all.push((
        placeholder(
            "kprime0",
            EntryKind::Knot,
            Known {
                s: Some(src(4, "s-candidates of the published Khovanov polynomial")),
                s_candidates: Some(src(vec![4], published)),
                kh: Some(src(KPRIME0_KH.into(), published)),
                ..Known::default()
            },
            missing,
        ),
        None,
    ));
    all.push((
        placeholder(
            "kprime-m",
            EntryKind::Knot,
            Known {
                propagation: Some(Propagation { base: "kprime0".into(), per_step: vec![CrossingChange::NegToPos] }),
                ..Known::default()
            },
            "family indexed by m <= 0; each decrement of m is one negative-to-positive crossing change in the twist box",
        ),
        None,
    ));
    all.push((
        placeholder(
            "k-m",
            EntryKind::Knot,
            Known {
                s: Some(src(2, "concordant to trefoil-rh")),
                g4: Some(src(1, "concordant to trefoil-rh")),
                ..Known::default()
            },
            "family indexed by m, each concordant to the right-handed trefoil; diagrams not transcribed",
        ),
        None,
    ));
    all.push((
        placeholder(
            "l-m",
            EntryKind::Handle,
            Known::default(),
            "three-component handle description for the k-m / kprime-m family",
        ),
        None,
    ));
    all.push((
        placeholder(
            "p-m",
            EntryKind::Pattern,
            Known { winding: Some(WindingNumbers { w: 1, g: 1 }), ..Known::default() },
            "geometric winding one pattern with p-m(U) = k-m",
        ),
        None,
    ));
    all.push((
        placeholder(
            "kdoubleprime",
            EntryKind::Knot,
            Known { s_candidates: Some(src(vec![4, 6], published)), ..Known::default() },
            missing,
        ),
        None,
    ));
    Ok(all)
}

/// Slide, tidy, cancel: the derivation of one knot of a trace pair. `a`
/// slides over `b` with sign -1 through the band `[x, y]`, then `R` is
/// cancelled against `b`.
fn derivation(name: &str, a: &str, b: &str, band: [Arc; 2]) -> MoveScript {
    MoveScript {
        name: name.into(),
        moves: vec![
            HandleMove::Slide { a: a.into(), b: b.into(), sign: -1, band },
            HandleMove::Reduce { components: vec![] },
            HandleMove::Cancel { r: "R".into(), x: b.into() },
        ],
    }
}

/// Scripts found by trying every band site and kept once they worked.
fn builtin_scripts() -> Vec<(&'static str, &'static str, MoveScript)> {
    let mut out = Vec::new();
    for (entry, k_band, kp_band) in
        [("handle-toy", [1, 8], [7, 2]), ("handle-trefoil", [1, 14], [13, 8]), ("handle-nonsplit", [2, 15], [15, 2])]
    {
        out.push((entry, "K", derivation(&format!("{entry} K"), "B", "G", k_band)));
        out.push((entry, "K'", derivation(&format!("{entry} K'"), "G", "B", kp_band)));
    }
    out
}

fn script_file(entry: &str, role: &str) -> String {
    format!("{entry}.{}.script.json", role.replace('\'', "prime"))
}

impl Corpus {
    pub fn builtin() -> Self {
        let all = builtin_entries().expect("built-in corpus");
        let mut files = BTreeMap::new();
        let mut entries = Vec::new();
        for (e, f) in all {
            if let (Some(name), Some(f)) = (&e.file, f) {
                files.insert(name.clone(), f);
            }
            entries.push(e);
        }
        let mut scripts = BTreeMap::new();
        for (name, role, s) in builtin_scripts() {
            let file = script_file(name, role);
            let e = entries.iter_mut().find(|e| e.name == name).expect("scripted entry");
            e.scripts.insert(role.to_string(), file.clone());
            scripts.insert(file, s);
        }
        Corpus { entries, files, scripts }
    }

    /// Read a corpus directory (a manifest plus one knot file per entry).
    pub fn load(dir: &Path) -> Result<Self> {
        let text = fs::read_to_string(dir.join(MANIFEST))?;
        let m: Manifest = serde_json::from_str(&text)?;
        if m.convention != CONVENTION {
            return Err(Error::Invalid(format!("corpus convention '{}' differs from '{CONVENTION}'", m.convention)));
        }
        let mut files = BTreeMap::new();
        for e in &m.entries {
            if let Some(name) = &e.file {
                let f = KnotFile::from_json(&fs::read_to_string(dir.join(name))?)?;
                files.insert(name.clone(), f);
            }
        }
        let mut scripts = BTreeMap::new();
        for file in m.entries.iter().flat_map(|e| e.scripts.values()) {
            scripts.insert(file.clone(), MoveScript::from_json(&fs::read_to_string(dir.join(file))?)?);
        }
        Ok(Corpus { entries: m.entries, files, scripts })
    }

    /// The directory named by the environment, else the built-in corpus.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CORPUS_ENV) {
            Some(dir) => Self::load(&PathBuf::from(dir)),
            None => Ok(Self::builtin()),
        }
    }

    pub fn export(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let m = Manifest { convention: CONVENTION.to_string(), entries: self.entries.clone() };
        fs::write(dir.join(MANIFEST), serde_json::to_string_pretty(&m)? + "\n")?;
        for (name, f) in &self.files {
            fs::write(dir.join(name), f.to_json() + "\n")?;
        }
        for (name, sc) in &self.scripts {
            fs::write(dir.join(name), sc.to_json() + "\n")?;
        }
        Ok(())
    }

    pub fn entries(&self) -> &[CorpusEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&CorpusEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn knot_file(&self, name: &str) -> Result<&KnotFile> {
        let e = self.get(name).ok_or_else(|| Error::Invalid(format!("no corpus entry '{name}'")))?;
        let file = e
            .file
            .as_ref()
            .ok_or_else(|| Error::Invalid(format!("corpus entry '{name}' is a placeholder without a diagram")))?;
        self.files.get(file).ok_or_else(|| Error::Invalid(format!("corpus file '{file}' missing")))
    }

    /// Script shipped with entry `name` for `role`.
    pub fn script(&self, name: &str, role: &str) -> Result<&MoveScript> {
        let e = self.get(name).ok_or_else(|| Error::Invalid(format!("no corpus entry '{name}'")))?;
        let file = e.scripts.get(role).ok_or_else(|| Error::Invalid(format!("'{name}' ships no {role} script")))?;
        self.scripts.get(file).ok_or_else(|| Error::Invalid(format!("corpus file '{file}' missing")))
    }

    pub fn diagram(&self, name: &str) -> Result<LinkDiagram> {
        self.knot_file(name)?.diagram()
    }

    /// Entries of one kind that carry a diagram.
    pub fn with_diagrams(&self, kind: EntryKind) -> Result<Vec<(&CorpusEntry, LinkDiagram)>> {
        self.entries
            .iter()
            .filter(|e| e.kind == kind && !e.is_placeholder())
            .map(|e| Ok((e, self.diagram(&e.name)?)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub entry: String,
    pub what: String,
    pub ok: bool,
    pub detail: String,
}

/// Recompute what can be recomputed for one entry and compare with the
/// stored values.
pub fn self_check(corpus: &Corpus, e: &CorpusEntry, opts: &KhOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut push = |what: &str, ok: bool, detail: String| {
        out.push(Check { entry: e.name.clone(), what: what.to_string(), ok, detail })
    };
    push("convention", e.convention == CONVENTION, e.convention.clone());
    if let Some(kh) = &e.known.kh {
        match kh.value.parse::<LaurentPoly2>() {
            Ok(p) => push("kh parses", p.to_string() == kh.value, p.to_string()),
            Err(err) => push("kh parses", false, err.to_string()),
        }
    }
    if let (Some(kh), Some(c)) = (&e.known.kh, &e.known.s_candidates) {
        let p: LaurentPoly2 = kh.value.parse().map_err(|x: crate::poly::PolyParseError| Error::Parse(x.to_string()))?;
        let r = crate::kh::BigradedRanks::from_poly(opts.ring, &p);
        let got = s_candidates(&r)?;
        push(
            "s candidates",
            got.value == crate::s::SValue::Candidates(c.value.iter().copied().collect()),
            got.to_string(),
        );
    }
    if e.is_placeholder() {
        return Ok(out);
    }
    let d = corpus.diagram(&e.name)?;
    push("diagram", d.validate().is_ok(), format!("{} crossings", d.crossing_count()));
    match e.kind {
        EntryKind::Knot | EntryKind::Link => {
            let j = kauffman_jones(&d)?;
            if let Some(js) = &e.known.jones {
                push("jones", j.to_string() == js.value, j.to_string());
            }
            if let Some(det) = &e.known.determinant {
                let got = determinant(&j);
                push("determinant", got == Some(det.value), format!("{got:?}"));
            }
            let method = if d.crossing_count() <= 11 { Method::Naive } else { Method::Scan };
            let r = khovanov(&d, &KhOptions { method, ..opts.clone() })?;
            let p = poincare_polynomial(&r);
            push("euler characteristic", p.euler_characteristic() == j, p.to_string());
            if let Some(kh) = &e.known.kh {
                push("kh", p.to_string() == kh.value, p.to_string());
            }
            if e.kind == EntryKind::Knot {
                let s = s_exact(&d)?;
                if let Some(known) = &e.known.s {
                    push("s", s.exact() == Some(known.value), s.to_string());
                }
                let cands = s_candidates(&r)?;
                push("s in candidates", cands.admits(s.exact().unwrap()), cands.to_string());
                for u in &e.known.g4_upper {
                    push(
                        "|s| <= 2 g4 upper",
                        s.min_abs() <= 2 * u.value,
                        format!("{} vs {} ({})", s, u.value, u.source),
                    );
                }
            }
        }
        EntryKind::Pattern => {
            let p = Pattern::from_file(corpus.knot_file(&e.name)?)?;
            if let Some(w) = &e.known.winding {
                push("winding numbers", &p.winding_numbers() == w, format!("{:?}", p.winding_numbers()));
            }
        }
        EntryKind::Handle => {
            let f = corpus.knot_file(&e.name)?;
            let ok = f.components.iter().all(|c| f.framings.contains_key(c));
            push("framings", ok, format!("{:?}", f.framings));
            let h = HandleDescription::from_file(f)?;
            for role in e.scripts.keys() {
                let end = run_move_script(&h, corpus.script(&e.name, role)?)?;
                let knot = end.as_knot_trace();
                push(&format!("{role} script"), matches!(knot, Some((_, 0))), format!("{knot:?}"));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_lookups() {
        let c = Corpus::builtin();
        assert!(c.diagram("trefoil-rh").unwrap().writhe() == 3);
        assert!(c.get("kprime0").unwrap().is_placeholder());
        assert!(c.diagram("kprime0").is_err());
        let h = c.diagram("handle-toy").unwrap();
        assert_eq!(h.component_count(), 3);
        assert!(c.knot_file("nope").is_err());
    }

    #[test]
    fn export_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let c = Corpus::builtin();
        c.export(dir.path()).unwrap();
        assert_eq!(Corpus::load(dir.path()).unwrap(), c);
    }

    #[test]
    fn placeholders_check() {
        let c = Corpus::builtin();
        for name in ["kprime0", "kdoubleprime"] {
            let checks = self_check(&c, c.get(name).unwrap(), &KhOptions::default()).unwrap();
            assert!(checks.iter().all(|k| k.ok), "{checks:?}");
        }
    }
}
