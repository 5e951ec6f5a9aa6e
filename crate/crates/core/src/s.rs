//! Rasmussen's s-invariant: exact value from the Lee complex, candidate
//! sets from Khovanov ranks, crossing-change propagation and slice-genus
//! bookkeeping.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::kh::{cube, BigradedRanks};
use crate::lee;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SMethod {
    ExactLee,
    KhRowCriterion,
    CrossingPropagation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SValue {
    Exact(i64),
    Candidates(BTreeSet<i64>),
    Interval { lower: i64, upper: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SInvariantResult {
    pub value: SValue,
    pub method: SMethod,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SInvariantResult {
    pub fn exact(&self) -> Option<i64> {
        match &self.value {
            SValue::Exact(s) => Some(*s),
            SValue::Candidates(c) if c.len() == 1 => c.iter().next().copied(),
            SValue::Interval { lower, upper } if lower == upper => Some(*lower),
            _ => None,
        }
    }

    /// Whether `s` is consistent with this result.
    pub fn admits(&self, s: i64) -> bool {
        match &self.value {
            SValue::Exact(v) => *v == s,
            SValue::Candidates(c) => c.contains(&s),
            SValue::Interval { lower, upper } => (*lower..=*upper).contains(&s),
        }
    }

    /// Smallest `|s|` consistent with this result.
    pub fn min_abs(&self) -> i64 {
        match &self.value {
            SValue::Exact(v) => v.abs(),
            SValue::Candidates(c) => c.iter().map(|v| v.abs()).min().unwrap_or(0),
            SValue::Interval { lower, upper } => {
                if *lower <= 0 && 0 <= *upper {
                    0
                } else {
                    lower.abs().min(upper.abs())
                }
            }
        }
    }
}

impl std::fmt::Display for SInvariantResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.value {
            SValue::Exact(s) => write!(f, "s = {s}"),
            SValue::Candidates(c) => {
                let v: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "s in {{{}}}", v.join(", "))
            }
            SValue::Interval { lower, upper } => write!(f, "{lower} <= s <= {upper}"),
        }
    }
}

pub fn s_exact(d: &LinkDiagram) -> Result<SInvariantResult> {
    s_exact_with_limit(d, cube::DEFAULT_MAX_CROSSINGS)
}

/// `s` from filtered reduction of the Lee complex: filtration-preserving
/// entries are cancelled first, then the two surviving generators sit at
/// levels `s - 1` and `s + 1`.
pub fn s_exact_with_limit(d: &LinkDiagram, max_crossings: usize) -> Result<SInvariantResult> {
    let (lo, hi) = lee::surviving_levels(d, max_crossings)?;
    Ok(SInvariantResult {
        value: SValue::Exact(lo + 1),
        method: SMethod::ExactLee,
        notes: vec![format!("surviving Lee generators at levels {lo} and {hi}")],
    })
}

/// `{ j : rank Kh^{0,j-1} > 0 and rank Kh^{0,j+1} > 0 }`.
pub fn s_candidates(r: &BigradedRanks) -> Result<SInvariantResult> {
    let row: BTreeSet<i64> = r.entries().iter().filter(|e| e.i == 0 && e.rank > 0).map(|e| e.j).collect();
    let cands: BTreeSet<i64> = row.iter().map(|j| j + 1).filter(|j| row.contains(&(j + 1))).collect();
    if cands.is_empty() {
        return Err(Error::Verification("no s candidates in homological degree 0".into()));
    }
    Ok(SInvariantResult { value: SValue::Candidates(cands), method: SMethod::KhRowCriterion, notes: Vec::new() })
}

/// One crossing change along a path of knots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossingChange {
    /// a positive crossing becomes negative
    #[serde(rename = "+-")]
    PosToNeg,
    /// a negative crossing becomes positive
    #[serde(rename = "-+")]
    NegToPos,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathStep {
    pub change: CrossingChange,
    /// crossing index in the current diagram, when a diagram is tracked
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crossing: Option<usize>,
}

/// Interval for `s` at the end of a path of crossing changes starting from
/// a knot with known `s`, using `s(K-) <= s(K+) <= s(K-) + 2` at each step.
pub fn s_crossing_bounds(known: i64, path: &[CrossingChange]) -> SInvariantResult {
    let (mut lo, mut hi) = (known, known);
    for step in path {
        match step {
            CrossingChange::PosToNeg => lo -= 2,
            CrossingChange::NegToPos => hi += 2,
        }
    }
    SInvariantResult {
        value: SValue::Interval { lower: lo, upper: hi },
        method: SMethod::CrossingPropagation,
        notes: vec![format!("{} crossing change(s) from s = {known}", path.len())],
    }
}

/// Like [`s_crossing_bounds`], checking each step against a diagram that is
/// switched along the way. Returns the bounds and the final diagram.
pub fn s_crossing_bounds_on(
    known: i64,
    base: &LinkDiagram,
    path: &[PathStep],
) -> Result<(SInvariantResult, LinkDiagram)> {
    let mut d = base.clone();
    for (k, step) in path.iter().enumerate() {
        if let Some(c) = step.crossing {
            let x = d.crossings().get(c).ok_or_else(|| Error::Invalid(format!("step {k}: no crossing {c}")))?;
            let expect = match step.change {
                CrossingChange::PosToNeg => 1,
                CrossingChange::NegToPos => -1,
            };
            if x.sign != expect {
                return Err(Error::Invalid(format!(
                    "step {k}: crossing {c} has sign {:+}, the step switches a {} crossing",
                    x.sign,
                    if expect > 0 { "positive" } else { "negative" }
                )));
            }
            d = d.switch_crossing(c)?;
        }
    }
    let changes: Vec<CrossingChange> = path.iter().map(|s| s.change).collect();
    Ok((s_crossing_bounds(known, &changes), d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusBounds {
    pub knot: String,
    pub g4_lower: i64,
    pub g4_upper: Option<i64>,
    pub sources: Vec<String>,
}

/// `g4_lower = ceil(|s| / 2)`; `g4_upper` = the least supplied upper bound.
pub fn g4_bounds(knot: &str, s: Option<&SInvariantResult>, upper_sources: &[(i64, String)]) -> Result<GenusBounds> {
    let mut sources = Vec::new();
    let lower = match s {
        Some(r) => {
            let m = r.min_abs();
            sources.push(format!("lower {}: |s| <= 2 g4 with {r}", (m + 1) / 2));
            (m + 1) / 2
        }
        None => 0,
    };
    let upper = upper_sources.iter().min_by_key(|u| u.0).map(|u| {
        sources.push(format!("upper {}: {}", u.0, u.1));
        u.0
    });
    if let Some(u) = upper {
        if u < 0 {
            return Err(Error::Invalid("negative genus bound".into()));
        }
        if lower > u {
            return Err(Error::Verification(format!("inconsistent bounds for {knot}: lower {lower} > upper {u}")));
        }
    }
    Ok(GenusBounds { knot: knot.to_string(), g4_lower: lower, g4_upper: upper, sources })
}

impl GenusBounds {
    pub fn exact(&self) -> Option<i64> {
        (self.g4_upper == Some(self.g4_lower)).then_some(self.g4_lower)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::io::from_pd;
    use crate::field::Ring;
    use crate::kh::khovanov_naive;

    fn lt() -> LinkDiagram {
        from_pd("3_1", &[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]).unwrap()
    }

    #[test]
    fn exact_values() {
        assert_eq!(s_exact(&LinkDiagram::unknot()).unwrap().value, SValue::Exact(0));
        assert_eq!(s_exact(&lt().mirror()).unwrap().value, SValue::Exact(2));
        assert_eq!(s_exact(&lt()).unwrap().value, SValue::Exact(-2));
        let fig8 = from_pd("4_1", &[[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]]).unwrap();
        assert_eq!(s_exact(&fig8).unwrap().value, SValue::Exact(0));
    }

    #[test]
    fn candidates() {
        let u = khovanov_naive(&LinkDiagram::unknot(), Ring::Rational).unwrap();
        assert_eq!(s_candidates(&u).unwrap().value, SValue::Candidates([0].into()));
        let t = khovanov_naive(&lt().mirror(), Ring::Rational).unwrap();
        assert!(s_candidates(&t).unwrap().admits(2));
        assert!(s_candidates(&BigradedRanks::new(Ring::Rational)).is_err());
    }

    #[test]
    fn propagation() {
        assert_eq!(s_crossing_bounds(3, &[]).value, SValue::Interval { lower: 3, upper: 3 });
        assert_eq!(s_crossing_bounds(2, &[CrossingChange::PosToNeg]).value, SValue::Interval { lower: 0, upper: 2 });
        let r = s_crossing_bounds(4, &[CrossingChange::NegToPos; 3]);
        assert_eq!(r.value, SValue::Interval { lower: 4, upper: 10 });
    }

    #[test]
    fn tracked_path_checks_signs() {
        let rh = lt().mirror();
        let (r, d) =
            s_crossing_bounds_on(2, &rh, &[PathStep { change: CrossingChange::PosToNeg, crossing: Some(0) }]).unwrap();
        assert!(r.admits(0));
        assert_eq!(s_exact(&d).unwrap().value, SValue::Exact(0));
        let bad = s_crossing_bounds_on(2, &rh, &[PathStep { change: CrossingChange::NegToPos, crossing: Some(0) }]);
        assert!(bad.is_err());
    }

    #[test]
    fn genus_bounds() {
        let s4 = SInvariantResult { value: SValue::Exact(4), method: SMethod::ExactLee, notes: vec![] };
        assert_eq!(g4_bounds("k", Some(&s4), &[]).unwrap().g4_lower, 2);
        let s2 = SInvariantResult { value: SValue::Exact(2), method: SMethod::ExactLee, notes: vec![] };
        let b = g4_bounds("3_1", Some(&s2), &[(1, "seifert".into())]).unwrap();
        assert_eq!(b.exact(), Some(1));
        assert!(g4_bounds("x", Some(&s4), &[(1, "bogus".into())]).is_err());
        let s0 = SInvariantResult { value: SValue::Exact(0), method: SMethod::ExactLee, notes: vec![] };
        assert_eq!(g4_bounds("u", Some(&s0), &[(0, "crossingless".into())]).unwrap().exact(), Some(0));
    }
}
