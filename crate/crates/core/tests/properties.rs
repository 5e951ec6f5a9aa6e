use knotbench::corpus::{Corpus, EntryKind};
use knotbench::diagram::geo::braid_closure;
use knotbench::diagram::reidemeister::Move;
use knotbench::diagram::LinkDiagram;
use knotbench::error::Error;
use knotbench::field::Ring;
use knotbench::jones::kauffman_jones;
use knotbench::kh::{khovanov_naive, khovanov_scan, poincare_polynomial};
use knotbench::s::s_exact;
use knotbench::satellite::{cable_pattern, pattern_compose, satellite_apply, Pattern};
use knotbench::trace::{apply_move, HandleDescription, HandleMove};
use proptest::prelude::*;

fn corpus_knots() -> Vec<LinkDiagram> {
    Corpus::builtin()
        .with_diagrams(EntryKind::Knot)
        .unwrap()
        .into_iter()
        .filter(|(_, d)| d.crossing_count() <= 7)
        .map(|(_, d)| d)
        .collect()
}

/// Braid closures on three strands with short words, plus the small corpus knots.
fn small_diagram() -> impl Strategy<Value = LinkDiagram> {
    let braid = prop::collection::vec(prop::sample::select(vec![1, -1, 2, -2]), 1..=6)
        .prop_map(|w| braid_closure("braid", 3, &w).unwrap());
    let knot = prop::sample::select(corpus_knots());
    prop_oneof![braid, knot]
}

/// Apply up to `steps.len()` moves, each picked by index among the
/// moves available at that point. Stops growing past `max` crossings.
fn perturb(d: &LinkDiagram, steps: &[usize], max: usize) -> LinkDiagram {
    let mut cur = d.clone();
    for &k in steps {
        let moves: Vec<Move> = cur
            .available_moves()
            .into_iter()
            .filter(|m| match m {
                Move::R1 { .. } => cur.crossing_count() < max,
                Move::R2 { .. } => cur.crossing_count() + 2 <= max,
                _ => true,
            })
            .collect();
        if moves.is_empty() {
            break;
        }
        cur = cur.apply_reidemeister(&moves[k % moves.len()]).unwrap();
        cur.validate().unwrap();
    }
    cur
}

fn steps() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(any::<usize>(), 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn jones_survives_moves(d in small_diagram(), s in steps()) {
        let e = perturb(&d, &s, 10);
        prop_assert_eq!(kauffman_jones(&d).unwrap(), kauffman_jones(&e).unwrap());
    }

    #[test]
    fn kh_survives_moves(d in small_diagram(), s in steps()) {
        let e = perturb(&d, &s, 10);
        prop_assert_eq!(khovanov_scan(&d, Ring::Rational).unwrap(), khovanov_scan(&e, Ring::Rational).unwrap());
    }

    #[test]
    fn scan_matches_naive(d in small_diagram(), s in steps()) {
        let e = perturb(&d, &s, 9);
        for ring in [Ring::Rational, Ring::F2] {
            prop_assert_eq!(khovanov_scan(&e, ring).unwrap(), khovanov_naive(&e, ring).unwrap());
        }
    }

    #[test]
    fn euler_characteristic_is_jones(d in small_diagram()) {
        let kh = khovanov_scan(&d, Ring::Rational).unwrap();
        prop_assert_eq!(poincare_polynomial(&kh).euler_characteristic(), kauffman_jones(&d).unwrap());
    }

    #[test]
    fn mirror_and_reverse_are_involutions(d in small_diagram()) {
        let shape = |x: &LinkDiagram| {
            let c = x.canonicalize();
            (c.crossings().to_vec(), c.components().to_vec())
        };
        prop_assert_eq!(shape(&d.mirror().mirror()), shape(&d));
        prop_assert_eq!(shape(&d.reverse().reverse()), shape(&d));
        d.mirror().validate().unwrap();
        d.reverse().validate().unwrap();
    }

    #[test]
    fn linking_is_symmetric_and_flips_under_mirror(d in small_diagram()) {
        let m = d.mirror();
        let n = d.component_count();
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                prop_assert_eq!(d.linking_number(a, b), d.linking_number(b, a));
                prop_assert_eq!(m.linking_number(a, b), -d.linking_number(a, b));
            }
        }
    }

    #[test]
    fn s_survives_moves(k in prop::sample::select(corpus_knots()), s in steps()) {
        let e = perturb(&k, &s, 9);
        prop_assert_eq!(s_exact(&k).unwrap().exact(), s_exact(&e).unwrap().exact());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    /// Slides on arbitrary band sites either are rejected as not applicable
    /// or pass their own framing and linking checks.
    #[test]
    fn slides_never_break_bookkeeping(
        entry in prop::sample::select(vec!["handle-toy", "handle-trefoil", "handle-nonsplit"]),
        (ai, bi) in (0usize..3, 0usize..3),
        sign in prop::sample::select(vec![1i8, -1]),
        picks in (any::<usize>(), any::<usize>()),
    ) {
        prop_assume!(ai != bi);
        let h = HandleDescription::from_file(Corpus::builtin().knot_file(entry).unwrap()).unwrap();
        let labels = ["B", "G", "R"];
        let (a, b) = (labels[ai], labels[bi]);
        prop_assume!(a != "R" && b != "R");
        let arcs_on = |label: &str| -> Vec<u32> {
            let i = h.index(label).unwrap();
            let comp = h.diagram.arc_components();
            let mut v: Vec<u32> = comp.iter().filter(|(_, c)| **c == i).map(|(a, _)| *a).collect();
            v.sort();
            v
        };
        let (xa, xb) = (arcs_on(a), arcs_on(b));
        let band = [xa[picks.0 % xa.len()], xb[picks.1 % xb.len()]];
        let mv = HandleMove::Slide { a: a.into(), b: b.into(), sign, band };
        match apply_move(&h, &mv) {
            Ok(out) => {
                out.diagram.validate().unwrap();
                let f = |x: &HandleDescription, l: &str| x.framing(l).unwrap().integer();
                let expect = f(&h, a).unwrap() + f(&h, b).unwrap() + 2 * i64::from(sign) * h.lk(a, b).unwrap();
                prop_assert_eq!(f(&out, a), Some(expect));
            }
            Err(Error::Verification(msg)) => prop_assert!(false, "bookkeeping failed: {}", msg),
            Err(_) => {}
        }
    }

    #[test]
    fn windings_multiply_under_composition(p in 1usize..=3, q in 1usize..=3) {
        let (a, b) = (cable_pattern(p).unwrap(), cable_pattern(q).unwrap());
        let c = pattern_compose(&a, &b).unwrap();
        prop_assert_eq!(c.winding_numbers().w, a.winding_numbers().w * b.winding_numbers().w);
        let core = Pattern::core();
        prop_assert!(pattern_compose(&core, &a).unwrap().winding_numbers().g <= a.winding_numbers().g);
    }
}

#[test]
fn satellite_of_unknot_is_closure() {
    let u = LinkDiagram::unknot();
    for p in [Pattern::core(), cable_pattern(2).unwrap(), cable_pattern(3).unwrap()] {
        let sat = satellite_apply(&p, &u).unwrap();
        assert_eq!(kauffman_jones(&sat).unwrap(), kauffman_jones(&p.closure().unwrap()).unwrap());
    }
}

#[test]
fn every_band_site_on_the_toy_is_checked() {
    let h = HandleDescription::from_file(Corpus::builtin().knot_file("handle-toy").unwrap()).unwrap();
    let comp = h.diagram.arc_components();
    let on = |l: &str| {
        let i = h.index(l).unwrap();
        let mut v: Vec<u32> = comp.iter().filter(|(_, c)| **c == i).map(|(a, _)| *a).collect();
        v.sort();
        v
    };
    let mut applied = 0;
    for (a, b) in [("B", "G"), ("G", "B")] {
        for &x in &on(a) {
            for &y in &on(b) {
                for sign in [1i8, -1] {
                    let mv = HandleMove::Slide { a: a.into(), b: b.into(), sign, band: [x, y] };
                    match apply_move(&h, &mv) {
                        Ok(_) => applied += 1,
                        Err(Error::Verification(m)) => panic!("{a} over {b} at [{x},{y}]: {m}"),
                        Err(_) => {}
                    }
                }
            }
        }
    }
    assert!(applied > 0, "no slide applied");
}
