//! The Lee-deformed complex with its quantum filtration, and filtered
//! reduction to the two surviving generators.

use std::collections::BTreeMap;

use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::kh::cube::{self, Gen};
use crate::linalg::{rank, SparseRow};
use crate::util::{DetMap, DetSet};

/// Generators carry homological degree `i` and filtration level `j`;
/// the differential never lowers `j`.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    pub gens: Vec<Gen>,
    pub diff: Vec<Vec<(usize, i64)>>,
}

pub fn lee_complex(d: &LinkDiagram) -> Result<FilteredComplex> {
    lee_complex_with_limit(d, cube::DEFAULT_MAX_CROSSINGS)
}

pub fn lee_complex_with_limit(d: &LinkDiagram, max_crossings: usize) -> Result<FilteredComplex> {
    let c = cube::build_cube(d, true, max_crossings)?;
    Ok(FilteredComplex { gens: c.gens, diff: c.diff })
}

impl FilteredComplex {
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn squares_to_zero(&self) -> bool {
        cube::CubeComplex { gens: self.gens.clone(), diff: self.diff.clone() }.squares_to_zero()
    }

    /// Total rank of homology over the rationals.
    pub fn homology_rank(&self) -> usize {
        let rows: Vec<SparseRow<Rational>> =
            self.diff.iter().map(|r| r.iter().map(|&(t, c)| (t, Rational::from_i64(c))).collect()).collect();
        self.len() - 2 * rank(rows)
    }

    /// Filtration levels of the homology, per homological degree: the
    /// graded pieces of the induced filtration on `H_*`.
    pub fn homology_levels(&self) -> BTreeMap<i64, Vec<i64>> {
        let mut red = Reducer::new(self);
        red.cancel_level_preserving();
        red.persistence_levels()
    }
}

/// Sparse complex over the rationals under Gaussian elimination.
struct Reducer {
    gens: Vec<Gen>,
    alive: Vec<bool>,
    out: Vec<DetMap<u32, Rational>>,
    inc: Vec<DetSet<u32>>,
}

impl Reducer {
    fn new(c: &FilteredComplex) -> Self {
        let n = c.gens.len();
        let mut out = vec![DetMap::default(); n];
        let mut inc = vec![DetSet::default(); n];
        for (g, row) in c.diff.iter().enumerate() {
            for &(t, v) in row {
                if v != 0 {
                    out[g].insert(t as u32, Rational::from_i64(v));
                    inc[t].insert(g as u32);
                }
            }
        }
        Reducer { gens: c.gens.clone(), alive: vec![true; n], out, inc }
    }

    fn set(&mut self, x: u32, y: u32, v: Rational) {
        if v.is_zero() {
            self.out[x as usize].remove(&y);
            self.inc[y as usize].remove(&x);
        } else {
            self.out[x as usize].insert(y, v);
            self.inc[y as usize].insert(x);
        }
    }

    fn kill(&mut self, x: u32) {
        let outs: Vec<u32> = self.out[x as usize].keys().copied().collect();
        for u in outs {
            self.inc[u as usize].remove(&x);
        }
        let ins: Vec<u32> = self.inc[x as usize].iter().copied().collect();
        for w in ins {
            self.out[w as usize].remove(&x);
        }
        self.out[x as usize] = DetMap::default();
        self.inc[x as usize] = DetSet::default();
        self.alive[x as usize] = false;
    }

    /// Cancel `x -> y` (entry `c`). When `j(x) = j(y)` this is a filtered
    /// homotopy equivalence.
    fn cancel(&mut self, x: u32, y: u32, c: Rational) {
        let minus_inv = c.inv().neg();
        let mut sources: Vec<u32> = self.inc[y as usize].iter().copied().filter(|&w| w != x).collect();
        let mut targets: Vec<(u32, Rational)> =
            self.out[x as usize].iter().filter(|(&u, _)| u != y).map(|(&u, v)| (u, v.clone())).collect();
        sources.sort_unstable();
        targets.sort_unstable_by_key(|t| t.0);
        for w in sources {
            let beta = self.out[w as usize][&y].clone();
            let f = beta.mul(&minus_inv);
            for (u, alpha) in &targets {
                let cur = self.out[w as usize].get(u).cloned().unwrap_or_else(Rational::zero);
                self.set(w, *u, cur.add(&f.mul(alpha)));
            }
        }
        self.kill(x);
        self.kill(y);
    }

    fn cancel_level_preserving(&mut self) {
        loop {
            let mut cands: Vec<(bool, usize, u32, u32)> = Vec::new();
            for x in 0..self.gens.len() {
                if !self.alive[x] {
                    continue;
                }
                for (&y, v) in &self.out[x] {
                    if self.gens[y as usize].j == self.gens[x].j {
                        let cost = self.inc[y as usize].len() * self.out[x].len();
                        cands.push((!v.is_unit_sign(), cost, x as u32, y));
                    }
                }
            }
            if cands.is_empty() {
                return;
            }
            cands.sort_unstable();
            for (_, _, x, y) in cands {
                if !self.alive[x as usize] || !self.alive[y as usize] {
                    continue;
                }
                if let Some(v) = self.out[x as usize].get(&y).cloned() {
                    self.cancel(x, y, v);
                }
            }
        }
    }

    /// Persistence over the filtration `F_p = span{j >= p}`: generators are
    /// added in order of decreasing `j`, and the unpaired ones give the
    /// levels of homology classes.
    fn persistence_levels(&self) -> BTreeMap<i64, Vec<i64>> {
        let mut order: Vec<usize> = (0..self.gens.len()).filter(|&g| self.alive[g]).collect();
        order.sort_by_key(|&g| (std::cmp::Reverse(self.gens[g].j), self.gens[g].i, g));
        let time: DetMap<usize, usize> = order.iter().enumerate().map(|(t, &g)| (g, t)).collect();
        let mut columns: Vec<SparseRow<Rational>> = order
            .iter()
            .map(|&g| {
                let mut col: SparseRow<Rational> =
                    self.out[g].iter().map(|(&t, v)| (time[&(t as usize)], v.clone())).collect();
                col.sort_by_key(|e| e.0);
                col
            })
            .collect();
        let mut low_owner: DetMap<usize, usize> = DetMap::default();
        let mut paired = vec![false; order.len()];
        for c in 0..columns.len() {
            while let Some((low, v)) = columns[c].last().cloned() {
                match low_owner.get(&low) {
                    Some(&o) => {
                        let ov = columns[o].last().expect("owner column").1.clone();
                        let f = v.mul(&ov.inv()).neg();
                        columns[c] = crate::linalg::axpy(&columns[c], &f, &columns[o]);
                    }
                    None => {
                        low_owner.insert(low, c);
                        paired[low] = true;
                        paired[c] = true;
                        break;
                    }
                }
            }
        }
        let mut levels: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        for (t, &g) in order.iter().enumerate() {
            if !paired[t] {
                levels.entry(self.gens[g].i).or_default().push(self.gens[g].j);
            }
        }
        for v in levels.values_mut() {
            v.sort_unstable();
        }
        levels
    }
}

/// Levels `(s - 1, s + 1)` of the two surviving generators of a knot.
pub fn surviving_levels(d: &LinkDiagram, max_crossings: usize) -> Result<(i64, i64)> {
    if !d.is_knot() {
        return Err(Error::Invalid("the s-invariant needs a one-component diagram".into()));
    }
    let fc = lee_complex_with_limit(d, max_crossings)?;
    let levels = fc.homology_levels();
    let total: usize = levels.values().map(|v| v.len()).sum();
    let row = levels.get(&0).cloned().unwrap_or_default();
    if total != 2 || row.len() != 2 {
        return Err(Error::Verification(format!("Lee homology has rank {total}, expected 2 in degree 0")));
    }
    if row[1] - row[0] != 2 {
        return Err(Error::Verification(format!("surviving levels {row:?} are not two apart")));
    }
    Ok((row[0], row[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::io::from_pd;

    fn lt() -> LinkDiagram {
        from_pd("3_1", &[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]).unwrap()
    }

    #[test]
    fn unknot_levels() {
        let fc = lee_complex(&LinkDiagram::unknot()).unwrap();
        assert_eq!(fc.homology_rank(), 2);
        assert_eq!(fc.homology_levels()[&0], vec![-1, 1]);
    }

    #[test]
    fn trefoil_lee_rank_two() {
        for d in [lt(), lt().mirror()] {
            let fc = lee_complex(&d).unwrap();
            assert!(fc.squares_to_zero());
            assert_eq!(fc.homology_rank(), 2);
        }
        assert_eq!(surviving_levels(&lt().mirror(), 14).unwrap(), (1, 3));
        assert_eq!(surviving_levels(&lt(), 14).unwrap(), (-3, -1));
    }

    #[test]
    fn hopf_lee_rank_four() {
        let h = from_pd("hopf", &[[1, 4, 2, 3], [2, 3, 1, 4]]).unwrap();
        assert_eq!(lee_complex(&h).unwrap().homology_rank(), 4);
        assert!(surviving_levels(&h, 14).is_err());
    }
}
