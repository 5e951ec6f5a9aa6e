//! Khovanov homology: rank tables, the naive cube oracle and the scanning
//! engine.

pub mod cob;
pub mod cube;
pub mod scan;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::field::{Field, Rational, Ring, F2};
use crate::linalg::{rank, SparseRow};
use crate::poly::LaurentPoly2;

/// Ranks of `Kh^{i,j}` over a field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RankTable", from = "RankTable")]
pub struct BigradedRanks {
    pub ring: Ring,
    ranks: BTreeMap<(i64, i64), u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RankTable {
    ring: Ring,
    ranks: Vec<RankEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEntry {
    pub i: i64,
    pub j: i64,
    pub rank: u64,
}

impl From<BigradedRanks> for RankTable {
    fn from(r: BigradedRanks) -> Self {
        RankTable { ring: r.ring, ranks: r.entries() }
    }
}

impl From<RankTable> for BigradedRanks {
    fn from(t: RankTable) -> Self {
        let mut r = BigradedRanks::new(t.ring);
        for e in t.ranks {
            r.add(e.i, e.j, e.rank);
        }
        r
    }
}

impl BigradedRanks {
    pub fn new(ring: Ring) -> Self {
        BigradedRanks { ring, ranks: BTreeMap::new() }
    }

    pub fn add(&mut self, i: i64, j: i64, rank: u64) {
        if rank > 0 {
            *self.ranks.entry((i, j)).or_insert(0) += rank;
        }
    }

    pub fn get(&self, i: i64, j: i64) -> u64 {
        self.ranks.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> Vec<RankEntry> {
        self.ranks.iter().map(|(&(i, j), &rank)| RankEntry { i, j, rank }).collect()
    }

    pub fn total_rank(&self) -> u64 {
        self.ranks.values().sum()
    }

    /// Ranks of the mirror image: `(i, j) -> (-i, -j)`.
    pub fn dual(&self) -> BigradedRanks {
        BigradedRanks { ring: self.ring, ranks: self.ranks.iter().map(|(&(i, j), &r)| ((-i, -j), r)).collect() }
    }

    /// Multiply by `q + q^{-1}` (a disjoint crossingless circle).
    pub fn times_circle(&self, times: usize) -> BigradedRanks {
        let mut cur = self.clone();
        for _ in 0..times {
            let mut next = BigradedRanks::new(self.ring);
            for (&(i, j), &r) in &cur.ranks {
                next.add(i, j + 1, r);
                next.add(i, j - 1, r);
            }
            cur = next;
        }
        cur
    }

    pub fn from_poly(ring: Ring, p: &LaurentPoly2) -> Self {
        let mut r = BigradedRanks::new(ring);
        for ((i, j), c) in p.terms() {
            r.add(i, j, c);
        }
        r
    }
}

/// Generating polynomial `sum q^j t^i rank`.
pub fn poincare_polynomial(r: &BigradedRanks) -> LaurentPoly2 {
    let mut p = LaurentPoly2::new();
    for (&(i, j), &c) in &r.ranks {
        p.add_term(i, j, c);
    }
    p
}

impl fmt::Display for BigradedRanks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", poincare_polynomial(self))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Naive,
    #[default]
    Scan,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "naive" => Ok(Method::Naive),
            "scan" => Ok(Method::Scan),
            other => Err(format!("unknown method '{other}' (expected naive or scan)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct KhOptions {
    pub ring: Ring,
    pub method: Method,
    pub max_crossings_naive: usize,
    pub max_objects: usize,
    /// Crossing insertion order for the scan; greedy when `None`.
    pub order: Option<Vec<usize>>,
    /// Check `d∘d = 0` after every scan step.
    pub verify: bool,
}

impl Default for KhOptions {
    fn default() -> Self {
        KhOptions {
            ring: Ring::Rational,
            method: Method::Scan,
            max_crossings_naive: cube::DEFAULT_MAX_CROSSINGS,
            max_objects: scan::DEFAULT_MAX_OBJECTS,
            order: None,
            verify: false,
        }
    }
}

pub fn khovanov(d: &LinkDiagram, opts: &KhOptions) -> Result<BigradedRanks> {
    match opts.method {
        Method::Naive => khovanov_naive_with_limit(d, opts.ring, opts.max_crossings_naive),
        Method::Scan => scan::khovanov_scan_with(d, opts),
    }
}

pub fn khovanov_naive(d: &LinkDiagram, ring: Ring) -> Result<BigradedRanks> {
    khovanov_naive_with_limit(d, ring, cube::DEFAULT_MAX_CROSSINGS)
}

pub fn khovanov_scan(d: &LinkDiagram, ring: Ring) -> Result<BigradedRanks> {
    scan::khovanov_scan_with(d, &KhOptions { ring, ..KhOptions::default() })
}

pub fn khovanov_naive_with_limit(d: &LinkDiagram, ring: Ring, max_crossings: usize) -> Result<BigradedRanks> {
    let c = cube::build_cube(d, false, max_crossings)?;
    debug_assert!(c.squares_to_zero());
    match ring {
        Ring::Rational => homology_ranks::<Rational>(&c, ring),
        Ring::F2 => homology_ranks::<F2>(&c, ring),
    }
}

fn homology_ranks<F: Field>(c: &cube::CubeComplex, ring: Ring) -> Result<BigradedRanks> {
    // generators grouped by bidegree, each with its local index
    let mut groups: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    let mut local = vec![0usize; c.gens.len()];
    for (g, gen) in c.gens.iter().enumerate() {
        let v = groups.entry((gen.i, gen.j)).or_default();
        local[g] = v.len();
        v.push(g);
    }
    let keys: Vec<(i64, i64)> = groups.keys().copied().collect();
    let ranks: HashMap<(i64, i64), usize> = keys
        .par_iter()
        .map(|&(i, j)| {
            let rows: Vec<SparseRow<F>> = groups[&(i, j)]
                .iter()
                .map(|&g| {
                    c.diff[g]
                        .iter()
                        .filter(|(h, _)| c.gens[*h].j == j)
                        .map(|&(h, v)| (local[h], F::from_i64(v)))
                        .filter(|(_, v)| !v.is_zero())
                        .collect::<Vec<_>>()
                })
                .map(|mut r| {
                    r.sort_by_key(|e| e.0);
                    r
                })
                .collect();
            ((i, j), rank(rows))
        })
        .collect();
    let mut out = BigradedRanks::new(ring);
    for (&(i, j), v) in &groups {
        let dim = v.len();
        let out_rank = ranks[&(i, j)];
        let in_rank = ranks.get(&(i - 1, j)).copied().unwrap_or(0);
        let h = dim
            .checked_sub(out_rank + in_rank)
            .ok_or_else(|| Error::Verification(format!("negative homology rank at ({i},{j})")))?;
        out.add(i, j, h as u64);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::io::from_pd;

    fn lt() -> LinkDiagram {
        from_pd("3_1", &[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]).unwrap()
    }

    #[test]
    fn unknot_naive() {
        let r = khovanov_naive(&LinkDiagram::unknot(), Ring::Rational).unwrap();
        assert_eq!(poincare_polynomial(&r).to_string(), "q^-1 + q");
    }

    #[test]
    fn right_trefoil_naive() {
        let r = khovanov_naive(&lt().mirror(), Ring::Rational).unwrap();
        assert_eq!(poincare_polynomial(&r).to_string(), "q + q^3 + q^5t^2 + q^9t^3");
    }

    #[test]
    fn mirror_duality_on_trefoil() {
        let r = khovanov_naive(&lt(), Ring::Rational).unwrap();
        let m = khovanov_naive(&lt().mirror(), Ring::Rational).unwrap();
        assert_eq!(r.dual(), m);
    }

    #[test]
    fn f2_trefoil_sees_torsion() {
        // the Z/2 torsion in Kh(right trefoil) at (2,7) shows up over F2
        let r = khovanov_naive(&lt().mirror(), Ring::F2).unwrap();
        assert_eq!(r.get(2, 7), 1);
        assert_eq!(r.get(3, 7), 1);
    }

    #[test]
    fn rank_table_json_roundtrip() {
        let r = khovanov_naive(&lt(), Ring::Rational).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let back: BigradedRanks = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
