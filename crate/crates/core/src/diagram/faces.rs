use std::collections::HashMap;

use super::{Arc, LinkDiagram, Slot};

/// One side of an arc on the boundary of a face, traversed with the face
/// on the left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FaceEdge {
    pub arc: Arc,
    pub from: Slot,
    pub to: Slot,
}

/// A region of the diagram complement, as its boundary cycle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    pub edges: Vec<FaceEdge>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains_arc(&self, a: Arc) -> bool {
        self.edges.iter().any(|e| e.arc == a)
    }
}

impl LinkDiagram {
    /// Faces of the crossing graph (free loops are ignored). Faces are
    /// sorted by their smallest boundary arc for determinism.
    pub fn faces(&self) -> Vec<Face> {
        let slots = self.slot_map();
        let other_end = |(c, p): Slot| -> Slot {
            let a = self.crossings()[c].pd[p];
            let s = &slots[&a];
            if s[0] == (c, p) {
                s[1]
            } else {
                s[0]
            }
        };
        let mut visited: HashMap<Slot, bool> = HashMap::new();
        let mut faces = Vec::new();
        for c in 0..self.crossing_count() {
            for p in 0..4 {
                if visited.contains_key(&(c, p)) {
                    continue;
                }
                let mut edges = Vec::new();
                let mut dart = (c, p);
                while !visited.contains_key(&dart) {
                    visited.insert(dart, true);
                    let to = other_end(dart);
                    edges.push(FaceEdge { arc: self.crossings()[dart.0].pd[dart.1], from: dart, to });
                    // turn left: next slot clockwise
                    dart = (to.0, (to.1 + 3) % 4);
                }
                faces.push(Face { edges });
            }
        }
        faces.sort_by_key(|f| f.edges.iter().map(|e| e.arc).min());
        faces
    }

    /// Euler-characteristic check: every connected piece with crossings
    /// must satisfy V - E + F = 2.
    pub fn is_planar(&self) -> bool {
        let pieces = self.split_pieces();
        let comp = self.arc_components();
        let mut pieces_with_crossings = 0usize;
        for piece in &pieces {
            let has = self.crossings().iter().any(|x| piece.contains(&comp[&x.pd[0]]));
            if has {
                pieces_with_crossings += 1;
            }
        }
        let v = self.crossing_count() as i64;
        let e = 2 * v;
        let f = self.faces().len() as i64;
        v - e + f == 2 * pieces_with_crossings as i64
    }
}

#[cfg(test)]
mod tests {
    use crate::diagram::io::from_pd;

    #[test]
    fn trefoil_has_five_faces() {
        let t = from_pd("t", &[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]).unwrap();
        let faces = t.faces();
        assert_eq!(faces.len(), 5);
        let mut sizes: Vec<usize> = faces.iter().map(|f| f.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 2, 2, 3, 3]);
        assert!(t.is_planar());
    }

    #[test]
    fn nonplanar_pd_detected() {
        // two crossings glued like a virtual Hopf link
        let d = from_pd("v", &[[1, 3, 2, 4], [2, 4, 1, 3]]).unwrap();
        assert!(!d.is_planar());
    }
}
