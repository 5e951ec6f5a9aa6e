//! Dotted cobordisms between crossingless matchings, in normal form.
//!
//! A matching on `n` boundary points is a partner array. A morphism
//! `a -> b` is a linear combination of basis surfaces: one disk per cycle of
//! `a ∪ b`, each disk carrying at most one dot. Cycles are numbered by their
//! smallest boundary position; a basis surface is the bitmask of dotted
//! disks. Its degree is `#cycles - n/2 - 2 #dots`.
//!
//! Any glued surface is reduced to this basis with the neck-cutting
//! relation, spheres (`S = 0`, dotted `S = 1`), `x^2 = 0` and `T = 2`.

use crate::field::Field;

pub type Mask = u64;
pub const MAX_CYCLES: usize = 64;

/// Sorted by mask, no zero coefficients.
pub type Mor<F> = Vec<(Mask, F)>;

pub fn identity<F: Field>() -> Mor<F> {
    vec![(0, F::one())]
}

/// `a + s * b`
pub fn add_scaled<F: Field>(a: &Mor<F>, s: &F, b: &Mor<F>) -> Mor<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let v = s.mul(&b[j].1);
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = a[i].1.add(&s.mul(&b[j].1));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale<F: Field>(m: &Mor<F>, s: &F) -> Mor<F> {
    m.iter().map(|(k, v)| (*k, v.mul(s))).filter(|(_, v)| !v.is_zero()).collect()
}

/// Cycle index of every boundary position for the closed curves `a ∪ b`.
pub fn cycles(a: &[u16], b: &[u16]) -> (Vec<u16>, usize) {
    let mut id = vec![u16::MAX; a.len()];
    let mut count = 0u16;
    for start in 0..a.len() {
        if id[start] != u16::MAX {
            continue;
        }
        let mut p = start;
        loop {
            id[p] = count;
            let q = a[p] as usize;
            id[q] = count;
            p = b[q] as usize;
            if p == start {
                break;
            }
        }
        count += 1;
    }
    (id, count as usize)
}

/// One connected piece of a glued surface.
#[derive(Clone, Debug, Default)]
pub struct Piece {
    /// output cycles bounding this piece
    pub cycles: Vec<usize>,
    pub genus: i64,
    pub dots: i64,
}

/// Expand a product of connected pieces into the normal-form basis.
pub fn expand<F: Field>(pieces: &[Piece], coef: F) -> Mor<F> {
    let mut terms: Vec<(Mask, F)> = vec![(0, coef)];
    for p in pieces {
        debug_assert!(p.genus >= 0, "negative genus in {p:?}");
        let e = p.dots + p.genus;
        if e >= 2 {
            return Vec::new();
        }
        if e == 1 {
            let all = p.cycles.iter().fold(0, |m, &c| m | 1 << c);
            let mult = F::from_i64(1 << p.genus);
            for t in &mut terms {
                t.0 |= all;
                t.1 = t.1.mul(&mult);
            }
            if mult.is_zero() {
                return Vec::new();
            }
        } else {
            if p.cycles.is_empty() {
                return Vec::new();
            }
            let all = p.cycles.iter().fold(0, |m, &c| m | 1 << c);
            let mut next = Vec::with_capacity(terms.len() * p.cycles.len());
            for (m, v) in &terms {
                for &c in &p.cycles {
                    next.push((m | (all & !(1 << c)), v.clone()));
                }
            }
            terms = next;
        }
    }
    terms.sort_unstable_by_key(|t| t.0);
    terms
}

/// Topology of `g ∘ f` for `f: a -> b`, `g: b -> c`.
#[derive(Clone, Debug)]
pub struct ComposeTemplate {
    ab_comp: Vec<u16>,
    bc_comp: Vec<u16>,
    chi: Vec<i64>,
    comp_cycles: Vec<Vec<usize>>,
}

impl ComposeTemplate {
    pub fn new(a: &[u16], b: &[u16], c: &[u16]) -> Self {
        let (ab, nab) = cycles(a, b);
        let (bc, nbc) = cycles(b, c);
        let (ac, nac) = cycles(a, c);
        let mut uf = crate::util::UnionFind::new(nab + nbc);
        for p in 0..b.len() {
            if p < b[p] as usize {
                uf.union(ab[p] as usize, nab + bc[p] as usize);
            }
        }
        let mut root_id = vec![usize::MAX; nab + nbc];
        let mut comp = vec![0u16; nab + nbc];
        let mut ncomp = 0;
        for d in 0..nab + nbc {
            let r = uf.find(d);
            if root_id[r] == usize::MAX {
                root_id[r] = ncomp;
                ncomp += 1;
            }
            comp[d] = root_id[r] as u16;
        }
        let mut chi = vec![0i64; ncomp];
        for &c in &comp {
            chi[c as usize] += 1;
        }
        for p in 0..b.len() {
            if p < b[p] as usize {
                chi[comp[ab[p] as usize] as usize] -= 1;
            }
        }
        let mut comp_cycles = vec![Vec::new(); ncomp];
        let mut seen = vec![false; nac];
        for p in 0..a.len() {
            let cy = ac[p] as usize;
            if !seen[cy] {
                seen[cy] = true;
                comp_cycles[comp[ab[p] as usize] as usize].push(cy);
            }
        }
        ComposeTemplate { ab_comp: comp[..nab].to_vec(), bc_comp: comp[nab..].to_vec(), chi, comp_cycles }
    }

    pub fn compose<F: Field>(&self, f: &Mor<F>, g: &Mor<F>) -> Mor<F> {
        let mut acc: Mor<F> = Vec::new();
        let n = self.chi.len();
        for (mf, cf) in f {
            for (mg, cg) in g {
                let mut dots = vec![0i64; n];
                for (k, &c) in self.ab_comp.iter().enumerate() {
                    if mf >> k & 1 == 1 {
                        dots[c as usize] += 1;
                    }
                }
                for (k, &c) in self.bc_comp.iter().enumerate() {
                    if mg >> k & 1 == 1 {
                        dots[c as usize] += 1;
                    }
                }
                let pieces: Vec<Piece> = (0..n)
                    .map(|c| {
                        let k = self.comp_cycles[c].len() as i64;
                        Piece { cycles: self.comp_cycles[c].clone(), genus: (2 - k - self.chi[c]) / 2, dots: dots[c] }
                    })
                    .collect();
                let t = expand(&pieces, cf.mul(cg));
                acc = add_scaled(&acc, &F::one(), &t);
            }
        }
        acc
    }
}

/// Gluing data for adding one crossing tangle to the boundary of the
/// current tangle. Nodes `0..n_old` are old boundary positions, nodes
/// `n_old..n_old+4` the crossing's slots.
#[derive(Clone, Debug)]
pub struct Step {
    pub n_old: usize,
    /// node glued to this one, or `None` when it stays on the boundary
    pub glue: Vec<Option<u32>>,
    /// new boundary position of an unglued node
    pub new_pos: Vec<Option<u16>>,
    pub node_of_new: Vec<u32>,
}

/// Local smoothings of a crossing on slots 0..4.
pub const SMOOTHING: [[u8; 4]; 2] = [[1, 0, 3, 2], [3, 2, 1, 0]];

/// Result of gluing a matching to a crossing smoothing: the new matching and
/// the closed loops, each loop given by its smallest node.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Glued {
    pub matching: Vec<u16>,
    pub loops: Vec<u32>,
}

impl Step {
    fn arc(&self, a: &[u16], s: &[u8; 4], v: usize) -> usize {
        if v < self.n_old {
            a[v] as usize
        } else {
            self.n_old + s[v - self.n_old] as usize
        }
    }

    pub fn glue_matching(&self, a: &[u16], s: &[u8; 4]) -> Glued {
        let total = self.n_old + 4;
        let mut seen = vec![false; total];
        let mut matching = vec![0u16; self.node_of_new.len()];
        for (p, &start) in self.node_of_new.iter().enumerate() {
            let start = start as usize;
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut v = self.arc(a, s, start);
            seen[v] = true;
            while self.new_pos[v].is_none() {
                v = self.glue[v].expect("glued node") as usize;
                seen[v] = true;
                v = self.arc(a, s, v);
                seen[v] = true;
            }
            let q = self.new_pos[v].expect("boundary node");
            matching[p] = q;
            matching[q as usize] = p as u16;
        }
        let mut loops = Vec::new();
        for start in 0..total {
            if seen[start] {
                continue;
            }
            loops.push(start as u32);
            let mut v = start;
            loop {
                seen[v] = true;
                let w = self.arc(a, s, v);
                seen[w] = true;
                v = self.glue[w].expect("loop node is glued") as usize;
                if v == start {
                    break;
                }
            }
        }
        Glued { matching, loops }
    }
}

/// Which crossing cobordism is tensored with an old morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PieceKind {
    Id0,
    Id1,
    Saddle,
}

impl PieceKind {
    pub fn ends(self) -> ([u8; 4], [u8; 4]) {
        match self {
            PieceKind::Id0 => (SMOOTHING[0], SMOOTHING[0]),
            PieceKind::Id1 => (SMOOTHING[1], SMOOTHING[1]),
            PieceKind::Saddle => (SMOOTHING[0], SMOOTHING[1]),
        }
    }
}

/// Topology of `φ ⊗ piece` followed by delooping, for `φ: a -> b`.
#[derive(Clone, Debug)]
pub struct GlueTemplate {
    pub top: Glued,
    pub bottom: Glued,
    old_comp: Vec<u16>,
    chi: Vec<i64>,
    comp_cycles: Vec<Vec<usize>>,
    top_loop_comp: Vec<u16>,
    bottom_loop_comp: Vec<u16>,
}

impl GlueTemplate {
    pub fn new(step: &Step, a: &[u16], b: &[u16], kind: PieceKind) -> Self {
        let (s_top, s_bot) = kind.ends();
        let (ab, nab) = cycles(a, b);
        let piece: [u16; 4] = match kind {
            PieceKind::Saddle => [0, 0, 0, 0],
            _ => {
                let s = s_top;
                let mut id = [u16::MAX; 4];
                let mut k = 0;
                for p in 0..4 {
                    if id[p] == u16::MAX {
                        id[p] = k;
                        id[s[p] as usize] = k;
                        k += 1;
                    }
                }
                id
            }
        };
        let npiece = if kind == PieceKind::Saddle { 1 } else { 2 };
        let disk = |v: usize| -> usize {
            if v < step.n_old {
                ab[v] as usize
            } else {
                nab + piece[v - step.n_old] as usize
            }
        };
        let ndisk = nab + npiece;
        let mut uf = crate::util::UnionFind::new(ndisk);
        for (v, g) in step.glue.iter().enumerate() {
            if let Some(w) = g {
                if v < *w as usize {
                    uf.union(disk(v), disk(*w as usize));
                }
            }
        }
        let mut root_id = vec![usize::MAX; ndisk];
        let mut comp = vec![0u16; ndisk];
        let mut ncomp = 0;
        for d in 0..ndisk {
            let r = uf.find(d);
            if root_id[r] == usize::MAX {
                root_id[r] = ncomp;
                ncomp += 1;
            }
            comp[d] = root_id[r] as u16;
        }
        let mut chi = vec![0i64; ncomp];
        for &c in &comp {
            chi[c as usize] += 1;
        }
        for (v, g) in step.glue.iter().enumerate() {
            if let Some(w) = g {
                if v < *w as usize {
                    chi[comp[disk(v)] as usize] -= 1;
                }
            }
        }
        let top = step.glue_matching(a, &s_top);
        let bottom = step.glue_matching(b, &s_bot);
        let (nc, ncount) = cycles(&top.matching, &bottom.matching);
        let mut comp_cycles = vec![Vec::new(); ncomp];
        let mut seen = vec![false; ncount];
        for (p, &node) in step.node_of_new.iter().enumerate() {
            let cy = nc[p] as usize;
            if !seen[cy] {
                seen[cy] = true;
                comp_cycles[comp[disk(node as usize)] as usize].push(cy);
            }
        }
        let top_loop_comp = top.loops.iter().map(|&v| comp[disk(v as usize)]).collect();
        let bottom_loop_comp = bottom.loops.iter().map(|&v| comp[disk(v as usize)]).collect();
        GlueTemplate { top, bottom, old_comp: comp[..nab].to_vec(), chi, comp_cycles, top_loop_comp, bottom_loop_comp }
    }

    /// Component of `φ ⊗ piece` between the delooped summands selected by
    /// `src` and `tgt` (bit set = the `q^{-1}` summand of that loop).
    pub fn apply<F: Field>(&self, phi: &Mor<F>, src: u32, tgt: u32) -> Mor<F> {
        let n = self.chi.len();
        let mut caps = vec![0i64; n];
        let mut cap_dots = vec![0i64; n];
        for (k, &c) in self.top_loop_comp.iter().enumerate() {
            caps[c as usize] += 1;
            // the q^{+1} summand enters through an undotted cup
            if src >> k & 1 == 1 {
                cap_dots[c as usize] += 1;
            }
        }
        for (k, &c) in self.bottom_loop_comp.iter().enumerate() {
            caps[c as usize] += 1;
            // the q^{+1} summand leaves through a dotted cap
            if tgt >> k & 1 == 0 {
                cap_dots[c as usize] += 1;
            }
        }
        let mut acc: Mor<F> = Vec::new();
        for (m, coef) in phi {
            let mut dots = cap_dots.clone();
            for (k, &c) in self.old_comp.iter().enumerate() {
                if m >> k & 1 == 1 {
                    dots[c as usize] += 1;
                }
            }
            let pieces: Vec<Piece> = (0..n)
                .map(|c| {
                    let k = self.comp_cycles[c].len() as i64 + caps[c];
                    Piece { cycles: self.comp_cycles[c].clone(), genus: (2 - k - self.chi[c]) / 2, dots: dots[c] }
                })
                .collect();
            let t = expand(&pieces, coef.clone());
            acc = add_scaled(&acc, &F::one(), &t);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    type M = Mor<Rational>;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn identity_composes_to_identity() {
        let a = [1u16, 0, 3, 2];
        let t = ComposeTemplate::new(&a, &a, &a);
        let id: M = identity();
        assert_eq!(t.compose(&id, &id), id);
    }

    #[test]
    fn saddle_then_saddle_is_dotted_sum() {
        // two saddles on 4 points: a -> b -> a is a tube between the two arcs
        // of a, which neck-cuts into one dot on either side
        let a = [1u16, 0, 3, 2];
        let b = [3u16, 2, 1, 0];
        let t = ComposeTemplate::new(&a, &b, &a);
        let s: M = vec![(0, q(1))];
        let r = t.compose(&s, &s);
        assert_eq!(r, vec![(1, q(1)), (2, q(1))]);
    }

    #[test]
    fn dotted_twice_vanishes() {
        let a = [1u16, 0];
        let t = ComposeTemplate::new(&a, &a, &a);
        let dot: M = vec![(1, q(1))];
        assert!(t.compose(&dot, &dot).is_empty());
        assert_eq!(t.compose(&dot, &identity()), dot);
    }

    #[test]
    fn cycles_are_numbered_by_smallest_point() {
        let a = [1u16, 0, 3, 2];
        let (id, n) = cycles(&a, &a);
        assert_eq!((id, n), (vec![0, 0, 1, 1], 2));
        let b = [3u16, 2, 1, 0];
        assert_eq!(cycles(&a, &b).1, 1);
    }

    #[test]
    fn torus_is_two() {
        let p = Piece { cycles: vec![], genus: 1, dots: 0 };
        assert_eq!(expand(&[p], q(1)), vec![(0, q(2))]);
        let s = Piece { cycles: vec![], genus: 0, dots: 0 };
        assert!(expand::<Rational>(&[s], q(1)).is_empty());
    }
}
