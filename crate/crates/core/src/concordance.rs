//! Inequality checkers for genus gaps and satellite non-homomorphism
//! arguments. Every verdict is a function of the numbers stored with it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::CONVENTION;
use crate::error::{Error, Result};
use crate::trace::{replay, Certificate, CertificateKind};

/// An integer with its provenance and chirality convention.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: i64,
    pub source: String,
    pub convention: String,
}

impl Quantity {
    /// A value under the corpus convention.
    pub fn new(value: i64, source: &str) -> Self {
        Quantity { value, source: source.into(), convention: CONVENTION.into() }
    }
}

/// `⌈|s|/2⌉`, the slice genus lower bound from `s`.
pub fn genus_lower_from_s(s: i64) -> i64 {
    (s.abs() + 1) / 2
}

/// The gap fires when `g4_upper(K) < ⌈|s(K')|/2⌉`.
pub fn shake_gap_fires(g4_upper_k: i64, s_kprime: i64) -> bool {
    g4_upper_k < genus_lower_from_s(s_kprime)
}

/// Two knots with the same 0-trace, the first of small slice genus and the
/// second of large: the 0-shake genus of `K'` is at most `g4(K)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShakeGapCertificate {
    pub pair_sha256: String,
    pub g4_upper_k: Quantity,
    pub s_kprime: Quantity,
    pub g4_lower_kprime: i64,
    pub conclusion: String,
}

pub fn certify_shake_gap(
    pair: &Certificate,
    g4_upper_k: &Quantity,
    s_kprime: &Quantity,
) -> Result<ShakeGapCertificate> {
    if pair.kind != CertificateKind::TracePair {
        return Err(Error::Invalid(format!("expected a trace-pair certificate, got {:?}", pair.kind)));
    }
    if pair.tainted {
        return Err(Error::Verification("trace-pair certificate rests on an unverified hypothesis".into()));
    }
    replay(pair)?;
    for (what, q) in [("g4_upper(K)", g4_upper_k), ("s(K')", s_kprime)] {
        if q.convention != CONVENTION {
            return Err(Error::Verification(format!(
                "{what} is stated under convention '{}', not '{CONVENTION}'",
                q.convention
            )));
        }
    }
    if g4_upper_k.value < 0 {
        return Err(Error::Invalid("negative genus bound".into()));
    }
    let lower = genus_lower_from_s(s_kprime.value);
    if !shake_gap_fires(g4_upper_k.value, s_kprime.value) {
        return Err(Error::Verification(format!(
            "no strict gap: g4_upper(K) = {} is not below ceil(|s(K')|/2) = {lower}",
            g4_upper_k.value
        )));
    }
    Ok(ShakeGapCertificate {
        pair_sha256: pair.inputs_sha256.clone(),
        g4_upper_k: g4_upper_k.clone(),
        s_kprime: s_kprime.clone(),
        g4_lower_kprime: lower,
        conclusion: format!("g0_sh(K') <= {} < {lower} <= g4(K')", g4_upper_k.value),
    })
}

/// A slice genus lower bound `σ` known to the checkers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaBound {
    pub name: String,
    /// `σ(K # J) = σ(K) + σ(J)` and `σ <= g4`.
    pub additive: bool,
    /// Satellite operators `J` for which `σ(J(K0)) >= σ(K0)` holds for all
    /// `K0`, as declared by the source.
    pub dominating_satellites: Vec<String>,
    pub source: String,
}

/// The `(w,1)` cable, which dominates `s/2`.
pub const CABLE_W1: &str = "cable(w,1)";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaRegistry {
    bounds: BTreeMap<String, SigmaBound>,
}

impl Default for SigmaRegistry {
    fn default() -> Self {
        let mut r = SigmaRegistry { bounds: BTreeMap::new() };
        r.register(SigmaBound {
            name: "s/2".into(),
            additive: true,
            dominating_satellites: vec![CABLE_W1.into()],
            source: "Rasmussen invariant: concordance homomorphism with |s| <= 2 g4".into(),
        });
        r
    }
}

impl SigmaRegistry {
    pub fn register(&mut self, b: SigmaBound) {
        self.bounds.insert(b.name.clone(), b);
    }

    pub fn get(&self, name: &str) -> Result<&SigmaBound> {
        self.bounds.get(name).ok_or_else(|| Error::Invalid(format!("no slice genus bound '{name}' registered")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObstructionVerdict {
    Obstructed,
    NotObstructed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub operator: String,
    pub w: i64,
    pub witness: String,
    pub sigma: String,
    pub numbers: BTreeMap<String, i64>,
    pub inequality: String,
    pub verdict: ObstructionVerdict,
}

/// A satellite operator with winding number `w` cannot be a homomorphism
/// when `|w|·g4(K) < σ(P(K))` for an additive bound `σ`.
pub fn obstruct_homomorphism_additive(
    operator: &str,
    witness: &str,
    w: i64,
    g4_k: i64,
    sigma_pk: i64,
    sigma: &str,
    reg: &SigmaRegistry,
) -> Result<ObstructionReport> {
    let b = reg.get(sigma)?;
    if !b.additive {
        return Err(Error::Invalid(format!("{sigma} is not registered as additive")));
    }
    if g4_k < 0 {
        return Err(Error::Invalid("negative genus".into()));
    }
    let lhs = w.abs() * g4_k;
    Ok(ObstructionReport {
        operator: operator.into(),
        w,
        witness: witness.into(),
        sigma: sigma.into(),
        numbers: BTreeMap::from([("g4(K)".into(), g4_k), (format!("{sigma}(P(K))"), sigma_pk)]),
        inequality: format!("|w| g4(K) = {lhs} < {sigma_pk} = {sigma}(P(K))"),
        verdict: if lhs < sigma_pk { ObstructionVerdict::Obstructed } else { ObstructionVerdict::NotObstructed },
    })
}

/// Variant for a bound that need not be additive: needs `σ(P(K)) > g4(K)`
/// and a satellite `J` of the same winding number with
/// `σ(J(K0)) >= σ(K0)` for every `K0`. For `w = 1` the identity works; for
/// `w = 0` no such `J` exists.
#[allow(clippy::too_many_arguments)]
pub fn obstruct_homomorphism_general(
    operator: &str,
    witness: &str,
    w: i64,
    g4_k: i64,
    sigma_pk: i64,
    sigma: &str,
    dominating: Option<&str>,
    reg: &SigmaRegistry,
) -> Result<ObstructionReport> {
    let b = reg.get(sigma)?;
    if w == 0 {
        return Err(Error::Invalid(
            "winding number 0: no satellite J can satisfy sigma(J(K0)) >= sigma(K0) for all K0".into(),
        ));
    }
    let hyp = if w == 1 {
        "identity".to_string()
    } else {
        match dominating {
            Some(j) if b.dominating_satellites.iter().any(|d| d == j) => j.to_string(),
            Some(j) => {
                return Err(Error::Invalid(format!("{sigma} has no declared domination by {j}")));
            }
            None => return Err(Error::Invalid("no dominating satellite J declared".into())),
        }
    };
    if g4_k < 0 {
        return Err(Error::Invalid("negative genus".into()));
    }
    Ok(ObstructionReport {
        operator: operator.into(),
        w,
        witness: witness.into(),
        sigma: sigma.into(),
        numbers: BTreeMap::from([("g4(K)".into(), g4_k), (format!("{sigma}(P(K))"), sigma_pk)]),
        inequality: format!("{sigma}(P(K)) = {sigma_pk} > {g4_k} = g4(K), J = {hyp}"),
        verdict: if sigma_pk > g4_k { ObstructionVerdict::Obstructed } else { ObstructionVerdict::NotObstructed },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableRow {
    pub n: u32,
    /// Upper bound on `g4(n·(P(K) - J(K)))`.
    pub g4_bound: i64,
    /// `C/n` as a reduced fraction.
    pub per_n: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StableBoundTable {
    pub constant: i64,
    pub rows: Vec<StableRow>,
    pub estimate_at_n_max: f64,
    pub stable_genus_upper: i64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conclusions: Vec<String>,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Bounds `g4(n(P(K) - J(K))) <= C` for two homomorphisms of equal
/// winding number joined by a genus-`C` annular cobordism, so the stable
/// genus of `P(K) - J(K)` is at most `C/n` for every `n`, hence 0.
pub fn stable_genus_bound(c: i64, n_max: u32) -> Result<StableBoundTable> {
    if c < 0 {
        return Err(Error::Invalid(format!("cobordism genus constant must be >= 0, got {c}")));
    }
    if n_max == 0 {
        return Err(Error::Invalid("n_max must be at least 1".into()));
    }
    let rows = (1..=n_max)
        .map(|n| {
            let g = gcd(c, i64::from(n)).max(1);
            let per_n = if c == 0 { "0".to_string() } else { format!("{}/{}", c / g, i64::from(n) / g) };
            StableRow { n, g4_bound: c, per_n }
        })
        .collect();
    Ok(StableBoundTable {
        constant: c,
        rows,
        estimate_at_n_max: c as f64 / f64::from(n_max),
        stable_genus_upper: 0,
        conclusions: Vec::new(),
    })
}

/// The table for a homomorphism `P` of winding number 0 or 1 compared
/// with the zero or identity operator.
pub fn stable_genus_for_homomorphism(w: i64, c: i64, n_max: u32) -> Result<StableBoundTable> {
    let mut t = stable_genus_bound(c, n_max)?;
    t.conclusions.push(match w {
        0 => "P(K) has stable slice genus 0 for all K (J = zero operator)".into(),
        1 => "P(K) # -K has stable slice genus 0 for all K (J = identity)".into(),
        _ => return Err(Error::Invalid(format!("no reference homomorphism of winding number {w}"))),
    });
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Corpus;
    use crate::trace::{derive_trace_pair, HandleDescription};

    fn toy_pair() -> Certificate {
        let c = Corpus::builtin();
        let h = HandleDescription::from_file(c.knot_file("handle-toy").unwrap()).unwrap();
        derive_trace_pair(&h, c.script("handle-toy", "K").unwrap(), c.script("handle-toy", "K'").unwrap(), None)
            .unwrap()
    }

    #[test]
    fn gap_examples() {
        let pair = toy_pair();
        let g = |v| Quantity::new(v, "test");
        let cert = certify_shake_gap(&pair, &g(1), &g(4)).unwrap();
        assert_eq!(cert.conclusion, "g0_sh(K') <= 1 < 2 <= g4(K')");
        assert!(matches!(certify_shake_gap(&pair, &g(2), &g(4)), Err(Error::Verification(_))));
        let mut other = g(4);
        other.convention = "mirror".into();
        assert!(certify_shake_gap(&pair, &g(1), &other).is_err());
    }

    #[test]
    fn ceil_half() {
        assert_eq!(genus_lower_from_s(4), 2);
        assert_eq!(genus_lower_from_s(-3), 2);
        assert_eq!(genus_lower_from_s(0), 0);
    }

    #[test]
    fn additive_examples() {
        let r = SigmaRegistry::default();
        let v = |w, g, s| obstruct_homomorphism_additive("Q", "K", w, g, s, "s/2", &r).unwrap().verdict;
        assert_eq!(v(1, 1, 2), ObstructionVerdict::Obstructed);
        assert_eq!(v(1, 2, 2), ObstructionVerdict::NotObstructed);
        assert_eq!(v(0, 5, 1), ObstructionVerdict::Obstructed);
        assert!(obstruct_homomorphism_additive("Q", "K", 1, 1, 2, "tau", &r).is_err());
    }

    #[test]
    fn general_examples() {
        let r = SigmaRegistry::default();
        let rep = obstruct_homomorphism_general("Q", "K", 1, 1, 2, "s/2", None, &r).unwrap();
        assert_eq!(rep.verdict, ObstructionVerdict::Obstructed);
        assert!(obstruct_homomorphism_general("Q", "K", 0, 1, 2, "s/2", Some(CABLE_W1), &r).is_err());
        let eq = obstruct_homomorphism_general("Q", "K", 1, 2, 2, "s/2", None, &r).unwrap();
        assert_eq!(eq.verdict, ObstructionVerdict::NotObstructed);
        assert!(obstruct_homomorphism_general("Q", "K", 3, 1, 2, "s/2", None, &r).is_err());
        let c = obstruct_homomorphism_general("Q", "K", 3, 1, 2, "s/2", Some(CABLE_W1), &r).unwrap();
        assert_eq!(c.verdict, ObstructionVerdict::Obstructed);
    }

    #[test]
    fn stable_tables() {
        let t = stable_genus_bound(0, 5).unwrap();
        assert!(t.rows.iter().all(|r| r.g4_bound == 0 && r.per_n == "0"));
        let t = stable_genus_bound(3, 10).unwrap();
        assert!((t.estimate_at_n_max - 0.3).abs() < 1e-12);
        assert_eq!(t.rows[5].per_n, "1/2");
        assert!(stable_genus_bound(-1, 3).is_err());
        let id = stable_genus_for_homomorphism(1, 2, 4).unwrap();
        assert!(id.conclusions[0].contains("# -K"));
        assert!(stable_genus_for_homomorphism(0, 2, 4).unwrap().conclusions[0].starts_with("P(K) has"));
    }
}
