use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use knotbench::concordance::{
    certify_shake_gap, obstruct_homomorphism_additive, obstruct_homomorphism_general, stable_genus_bound,
    stable_genus_for_homomorphism, Quantity, SigmaRegistry,
};
use knotbench::corpus::{self_check, Corpus};
use knotbench::diagram::io::{parse_pd_text, KnotFile};
use knotbench::diagram::LinkDiagram;
use knotbench::error::{Error, Result};
use knotbench::field::Ring;
use knotbench::jones::kauffman_jones;
use knotbench::kh::{khovanov, poincare_polynomial, KhOptions, Method};
use knotbench::s::{s_candidates, s_crossing_bounds, s_exact, CrossingChange};
use knotbench::satellite::{
    cable_pattern, local_knot_pattern, pattern_compose, pattern_mirror, satellite_apply, Pattern,
};
use knotbench::trace::{
    certify_concordance, check_trace_hypotheses, derive_trace_pair, pattern_bridge, pattern_bridge_converse, replay,
    run_move_script, Certificate, HandleDescription, MoveScript, SlicenessCertificate,
};

#[derive(Parser)]
#[command(
    name = "knotbench",
    version,
    about = "Khovanov homology, s-invariants, satellites and handle-move certificates"
)]
struct Cli {
    /// Worker threads for independent inputs (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Khovanov homology ranks as a Poincaré polynomial in q and t.
    Kh {
        inputs: Vec<String>,
        #[command(flatten)]
        kh: KhArgs,
        /// Print the rank table as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Rasmussen s-invariant.
    S {
        input: Option<String>,
        #[arg(long, default_value = "exact")]
        method: SMode,
        /// Known s at the start of a crossing-change path (integer or corpus entry).
        #[arg(long)]
        base: Option<String>,
        /// Crossing changes, e.g. "-+,-+" (negative to positive twice).
        #[arg(long, allow_hyphen_values = true)]
        path: Option<String>,
        #[arg(long, default_value = "q")]
        ring: Ring,
        #[arg(long)]
        max_objects: Option<usize>,
    },
    /// Unnormalized Jones polynomial (graded Euler characteristic of Kh).
    Jones { inputs: Vec<String> },
    /// Satellite P(K) with the 0-framing.
    Satellite {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        companion: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Pattern algebra.
    #[command(subcommand)]
    Pattern(PatternCmd),
    /// Handle descriptions, move scripts and certificates.
    #[command(subcommand)]
    Trace(TraceCmd),
    /// Genus gap and obstruction checks.
    #[command(subcommand)]
    Certify(CertifyCmd),
    /// The bundled corpus.
    #[command(subcommand)]
    Corpus(CorpusCmd),
}

#[derive(Args, Clone)]
struct KhArgs {
    /// Coefficients: q (rationals) or f2.
    #[arg(long, default_value = "q")]
    ring: Ring,
    /// scan or naive.
    #[arg(long, default_value = "scan")]
    method: Method,
    /// Cap on cobordism objects held by the scanning engine.
    #[arg(long)]
    max_objects: Option<usize>,
}

impl KhArgs {
    fn options(&self) -> KhOptions {
        let mut o = KhOptions { ring: self.ring, method: self.method, ..KhOptions::default() };
        if let Some(m) = self.max_objects {
            o.max_objects = m;
        }
        o
    }
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SMode {
    Exact,
    Candidates,
    Propagate,
}

#[derive(Subcommand)]
enum PatternCmd {
    /// Winding numbers (w, g) of a pattern.
    Info { pattern: String },
    /// outer ∘ inner.
    Compose {
        outer: String,
        inner: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Mirror image of a pattern.
    Mirror {
        pattern: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The (w,1) cable pattern.
    Cable {
        w: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The core with a local knot tied in.
    Localknot {
        knot: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum TraceCmd {
    /// Check the trace-pair hypotheses on a handle description.
    Check {
        handles: String,
        #[arg(long)]
        isotopy: Option<String>,
    },
    /// Run a move script and print the resulting handle file.
    Run {
        handles: String,
        script: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Derive the knot pair (K, K') and emit a certificate.
    Derive {
        handles: String,
        /// Script leaving the 0-framed knot K.
        #[arg(long)]
        k: String,
        /// Script leaving the 0-framed knot K'.
        #[arg(long)]
        kprime: String,
        /// R-move script bringing R into round-meridian position.
        #[arg(long)]
        isotopy: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Concordance certificate K ~ B.
    Certify {
        handles: String,
        /// Script leaving the 0-framed knot K.
        #[arg(long)]
        k: String,
        /// Name of the sliceness evidence for G.
        #[arg(long)]
        slice: String,
        /// Where the sliceness of G is established.
        #[arg(long, default_value = "")]
        reference: String,
        /// Ribbon movie for G (band moves to an unlink).
        #[arg(long)]
        ribbon: Option<String>,
        /// Band moves applied to K; the result is recorded as K-banded.
        #[arg(long)]
        bands: Option<String>,
        /// R-move script bringing R into round-meridian position.
        #[arg(long)]
        isotopy: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Dualizable patterns from a handle description, or a handle
    /// description from a pattern.
    Bridge {
        handles: Option<String>,
        /// Script making G a small meridian of R (gives P).
        #[arg(long)]
        j: Option<String>,
        /// Script making B a small meridian of R (gives P*).
        #[arg(long)]
        jstar: Option<String>,
        /// Build the handle description of a geometric-winding-one pattern.
        #[arg(long, conflicts_with_all = ["handles", "j", "jstar"])]
        pattern: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Re-run a certificate and compare byte for byte.
    Replay { certificate: PathBuf },
}

#[derive(Subcommand)]
enum CertifyCmd {
    /// Shake genus gap from a trace-pair certificate.
    Gap {
        pair: PathBuf,
        /// Certified upper bound on the slice genus of K.
        #[arg(long, allow_hyphen_values = true)]
        g4_upper: i64,
        /// s(K').
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
        /// Provenance recorded with both numbers.
        #[arg(long, default_value = "command line")]
        source: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Satellite non-homomorphism check.
    Nothom {
        /// Winding number of the operator.
        #[arg(long, allow_hyphen_values = true)]
        w: i64,
        /// Slice genus of the witness K.
        #[arg(long, allow_hyphen_values = true)]
        g4: i64,
        /// The bound evaluated on P(K).
        #[arg(long, allow_hyphen_values = true)]
        sigma_value: i64,
        /// Registered slice genus bound.
        #[arg(long, default_value = "s/2")]
        sigma: String,
        /// Use the variant for bounds that need not be additive.
        #[arg(long)]
        general: bool,
        /// Satellite dominating the bound, for the general variant.
        #[arg(long)]
        dominating: Option<String>,
        #[arg(long, default_value = "P")]
        operator: String,
        #[arg(long, default_value = "K")]
        witness: String,
    },
    /// Stable genus bound table.
    Stable {
        /// Constant in the genus bound.
        #[arg(long, allow_hyphen_values = true)]
        c: i64,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        /// Compare against the zero (0) or identity (1) operator.
        #[arg(long)]
        w: Option<i64>,
    },
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// Entries with kind and status.
    List,
    /// Recompute stored invariants.
    Check { names: Vec<String> },
    /// Write the corpus directory.
    Export { dir: PathBuf },
}

const CORPUS_PREFIX: &str = "corpus/";

fn corpus() -> Result<Corpus> {
    Corpus::from_env()
}

/// A knot file from `corpus/NAME`, a JSON knot file, or bare PD text.
fn load_file(arg: &str) -> Result<KnotFile> {
    if let Some(name) = arg.strip_prefix(CORPUS_PREFIX) {
        if !Path::new(arg).exists() {
            return corpus()?.knot_file(name).cloned();
        }
    }
    let text = read(arg)?;
    if text.trim_start().starts_with('{') {
        KnotFile::from_json(&text)
    } else {
        let name = Path::new(arg).file_stem().and_then(|s| s.to_str()).unwrap_or("input");
        Ok(KnotFile::from_diagram(&parse_pd_text(name, &text)?))
    }
}

fn load_diagram(arg: &str) -> Result<LinkDiagram> {
    load_file(arg)?.diagram()
}

/// A move script from a file or `corpus/NAME:ROLE`.
fn load_script(arg: &str) -> Result<MoveScript> {
    if let Some(rest) = arg.strip_prefix(CORPUS_PREFIX) {
        if let Some((name, role)) = rest.rsplit_once(':') {
            return corpus()?.script(name, role).cloned();
        }
    }
    MoveScript::from_json(&read(arg)?)
}

fn read(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn opt_script(arg: &Option<String>) -> Result<Option<MoveScript>> {
    arg.as_deref().map(load_script).transpose()
}

fn emit(text: &str, output: &Option<PathBuf>) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn json<T: serde::Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn label(inputs: &[String], i: usize) -> String {
    if inputs.len() > 1 {
        format!("{}: ", inputs[i])
    } else {
        String::new()
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Kh { inputs, kh, json: as_json } => {
            let opts = kh.options();
            let out: Vec<Result<String>> = inputs
                .par_iter()
                .map(|a| {
                    let r = khovanov(&load_diagram(a)?, &opts)?;
                    if as_json {
                        json(&r)
                    } else {
                        Ok(poincare_polynomial(&r).to_string() + "\n")
                    }
                })
                .collect();
            for (i, r) in out.into_iter().enumerate() {
                print!("{}{}", label(&inputs, i), r?);
            }
        }
        Cmd::Jones { inputs } => {
            let out: Vec<Result<String>> =
                inputs.par_iter().map(|a| Ok(kauffman_jones(&load_diagram(a)?)?.to_string())).collect();
            for (i, r) in out.into_iter().enumerate() {
                println!("{}{}", label(&inputs, i), r?);
            }
        }
        Cmd::S { input, method, base, path, ring, max_objects } => {
            let kh = KhArgs { ring, method: Method::Scan, max_objects };
            let res = match method {
                SMode::Exact => s_exact(&load_diagram(input.as_deref().ok_or_else(|| missing("input"))?)?)?,
                SMode::Candidates => {
                    let d = load_diagram(input.as_deref().ok_or_else(|| missing("input"))?)?;
                    s_candidates(&khovanov(&d, &kh.options())?)?
                }
                SMode::Propagate => {
                    let base = base.ok_or_else(|| missing("--base"))?;
                    let known = match base.parse::<i64>() {
                        Ok(v) => v,
                        Err(_) => corpus()?
                            .get(&base)
                            .and_then(|e| e.known.s.as_ref())
                            .map(|s| s.value)
                            .ok_or_else(|| Error::Invalid(format!("no known s for '{base}'")))?,
                    };
                    let steps = parse_path(path.as_deref().unwrap_or(""))?;
                    s_crossing_bounds(known, &steps)
                }
            };
            println!("{res}");
        }
        Cmd::Satellite { pattern, companion, output } => {
            let p = Pattern::from_file(&load_file(&pattern)?)?;
            let d = satellite_apply(&p, &load_diagram(&companion)?)?;
            emit(&(KnotFile::from_diagram(&d).to_json() + "\n"), &output)?;
        }
        Cmd::Pattern(pc) => run_pattern(pc)?,
        Cmd::Trace(tc) => run_trace(tc)?,
        Cmd::Certify(cc) => run_certify(cc)?,
        Cmd::Corpus(cc) => run_corpus(cc)?,
    }
    Ok(())
}

fn missing(what: &str) -> Error {
    Error::Invalid(format!("missing {what}"))
}

fn parse_path(text: &str) -> Result<Vec<CrossingChange>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| match t {
            "-+" => Ok(CrossingChange::NegToPos),
            "+-" => Ok(CrossingChange::PosToNeg),
            other => Err(Error::Parse(format!("crossing change '{other}' (expected -+ or +-)"))),
        })
        .collect()
}

fn run_pattern(pc: PatternCmd) -> Result<()> {
    let pat = |a: &str| -> Result<Pattern> { Pattern::from_file(&load_file(a)?) };
    let (p, output) = match pc {
        PatternCmd::Info { pattern } => {
            print!("{}", json(&pat(&pattern)?.winding_numbers())?);
            return Ok(());
        }
        PatternCmd::Compose { outer, inner, output } => (pattern_compose(&pat(&outer)?, &pat(&inner)?)?, output),
        PatternCmd::Mirror { pattern, output } => (pattern_mirror(&pat(&pattern)?)?, output),
        PatternCmd::Cable { w, output } => (cable_pattern(w)?, output),
        PatternCmd::Localknot { knot, output } => (local_knot_pattern(&load_diagram(&knot)?)?, output),
    };
    emit(&(p.to_file().to_json() + "\n"), &output)
}

fn handles(arg: &str) -> Result<HandleDescription> {
    HandleDescription::from_file(&load_file(arg)?)
}

fn run_trace(tc: TraceCmd) -> Result<()> {
    match tc {
        TraceCmd::Check { handles: h, isotopy } => {
            let r = check_trace_hypotheses(&handles(&h)?, opt_script(&isotopy)?.as_ref())?;
            for i in &r.items {
                println!("{:<18} {} ({})", i.verdict.to_string(), i.check, i.detail);
            }
            println!("{}", r.verdict);
        }
        TraceCmd::Run { handles: h, script, output } => {
            let end = run_move_script(&handles(&h)?, &load_script(&script)?)?;
            emit(&(end.to_file().to_json() + "\n"), &output)?;
        }
        TraceCmd::Derive { handles: h, k, kprime, isotopy, output } => {
            let c = derive_trace_pair(
                &handles(&h)?,
                &load_script(&k)?,
                &load_script(&kprime)?,
                opt_script(&isotopy)?.as_ref(),
            )?;
            emit(&c.to_json(), &output)?;
        }
        TraceCmd::Certify { handles: h, k, slice, reference, ribbon, bands, isotopy, output } => {
            let s = SlicenessCertificate { name: slice, reference, ribbon_bands: opt_script(&ribbon)? };
            let c = certify_concordance(
                &handles(&h)?,
                &s,
                &load_script(&k)?,
                opt_script(&bands)?.as_ref(),
                opt_script(&isotopy)?.as_ref(),
            )?;
            emit(&c.to_json(), &output)?;
        }
        TraceCmd::Bridge { handles: h, j, jstar, pattern, output } => {
            let c = match pattern {
                Some(p) => pattern_bridge_converse(&Pattern::from_file(&load_file(&p)?)?)?,
                None => {
                    let h = h.ok_or_else(|| missing("handle description or --pattern"))?;
                    let j = opt_script(&j)?.unwrap_or_default();
                    pattern_bridge(&handles(&h)?, &j, opt_script(&jstar)?.as_ref())?
                }
            };
            emit(&c.to_json(), &output)?;
        }
        TraceCmd::Replay { certificate } => {
            let c = Certificate::from_json(&read(certificate)?)?;
            replay(&c)?;
            println!("replay ok: {}", c.inputs_sha256);
        }
    }
    Ok(())
}

fn run_certify(cc: CertifyCmd) -> Result<()> {
    match cc {
        CertifyCmd::Gap { pair, g4_upper, s, source, output } => {
            let c = Certificate::from_json(&read(pair)?)?;
            let g = certify_shake_gap(&c, &Quantity::new(g4_upper, &source), &Quantity::new(s, &source))?;
            emit(&json(&g)?, &output)?;
        }
        CertifyCmd::Nothom { w, g4, sigma_value, sigma, general, dominating, operator, witness } => {
            let reg = SigmaRegistry::default();
            let r = if general {
                obstruct_homomorphism_general(
                    &operator,
                    &witness,
                    w,
                    g4,
                    sigma_value,
                    &sigma,
                    dominating.as_deref(),
                    &reg,
                )?
            } else {
                obstruct_homomorphism_additive(&operator, &witness, w, g4, sigma_value, &sigma, &reg)?
            };
            print!("{}", json(&r)?);
        }
        CertifyCmd::Stable { c, n_max, w } => {
            let t = match w {
                Some(w) => stable_genus_for_homomorphism(w, c, n_max)?,
                None => stable_genus_bound(c, n_max)?,
            };
            print!("{}", json(&t)?);
        }
    }
    Ok(())
}

fn run_corpus(cc: CorpusCmd) -> Result<()> {
    let c = corpus()?;
    match cc {
        CorpusCmd::List => {
            for e in c.entries() {
                let status = if e.is_placeholder() { "placeholder" } else { "diagram" };
                println!("{:<24} {:<8} {status}", e.name, format!("{:?}", e.kind).to_lowercase());
            }
        }
        CorpusCmd::Check { names } => {
            let picked: Vec<_> = c.entries().iter().filter(|e| names.is_empty() || names.contains(&e.name)).collect();
            let results: Vec<_> = picked.par_iter().map(|e| self_check(&c, e, &KhOptions::default())).collect();
            let mut bad = 0;
            for r in results {
                for k in r? {
                    if !k.ok {
                        bad += 1;
                    }
                    println!("{} {} {}: {}", if k.ok { "ok  " } else { "FAIL" }, k.entry, k.what, k.detail);
                }
            }
            if bad > 0 {
                return Err(Error::Verification(format!("{bad} corpus check(s) failed")));
            }
        }
        CorpusCmd::Export { dir } => c.export(&dir)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global().expect("thread pool");
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
