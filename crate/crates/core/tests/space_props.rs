mod common;

use common::*;
use proptest::prelude::*;
use topo_core::enumerate::{canonical_masks, canonicalize, labeled_spaces, relabel_masks};
use topo_core::{FinSpace, PointSet};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn interiors_nest((s, t) in arb_space_and_set(7)) {
        let th = s.theta_interior(t).unwrap();
        let int = s.interior(t).unwrap();
        prop_assert!(th.is_subset(int));
        prop_assert!(int.is_subset(t));
        prop_assert!(s.largest_theta_open(t).unwrap().is_subset(th));
    }

    #[test]
    fn closure_is_a_closure_operator((s, t) in arb_space_and_set(7), extra in any::<u32>()) {
        let c = s.closure(t).unwrap();
        prop_assert!(t.is_subset(c));
        prop_assert_eq!(s.closure(c).unwrap(), c);
        let bigger = t | (PointSet::from_bits(extra) & s.full());
        prop_assert!(c.is_subset(s.closure(bigger).unwrap()));
        prop_assert!(s.is_closed(c));
    }

    #[test]
    fn interior_is_dual_to_closure((s, t) in arb_space_and_set(7)) {
        let x = s.full();
        prop_assert_eq!(s.interior(t).unwrap(), x - s.closure(x - t).unwrap());
    }

    #[test]
    fn operators_match_definitions((s, t) in arb_space_and_set(6)) {
        let full = bits(s.len());
        prop_assert_eq!(s.closure(t).unwrap().bits(), cl_within(&s, full, t.bits()));
        prop_assert_eq!(s.interior(t).unwrap().bits(), int_within(&s, full, t.bits()));
        prop_assert_eq!(s.is_theta_open(t), theta_open_def(&s, full, t.bits()));
    }

    #[test]
    fn relative_operators_agree_with_subspaces((s, a) in arb_space_and_set(7), t in any::<u32>()) {
        prop_assume!(!a.is_empty());
        let t = PointSet::from_bits(t) & a;
        let sub = s.subspace(a).unwrap();
        let tt = s.restrict_set(a, t);
        prop_assert_eq!(s.restrict_set(a, s.closure_within(a, t)), sub.closure(tt).unwrap());
        prop_assert_eq!(s.restrict_set(a, s.interior_within(a, t)), sub.interior(tt).unwrap());
        prop_assert_eq!(s.restrict_set(a, s.theta_interior_within(a, t)), sub.theta_interior(tt).unwrap());
        prop_assert_eq!(s.is_regular_within(a), topo_core::regularity::is_regular(&sub));
    }

    #[test]
    fn largest_theta_open_is_greatest((s, t) in arb_space_and_set(6)) {
        let l = s.largest_theta_open(t).unwrap();
        prop_assert!(s.is_theta_open(l));
        for v in t.subsets() {
            if s.is_theta_open(v) {
                prop_assert!(v.is_subset(l));
            }
        }
    }

    #[test]
    fn json_round_trip(s in arb_space(8)) {
        prop_assert_eq!(FinSpace::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn open_family_round_trip(s in arb_space(6)) {
        let names: Vec<String> = s.names().to_vec();
        let opens: Vec<Vec<String>> = s
            .open_sets()
            .into_iter()
            .map(|o| o.iter().map(|i| names[i].clone()).collect())
            .collect();
        prop_assert_eq!(FinSpace::from_opens(names, &opens).unwrap(), s.clone());
        let mut reference = opens_of(&s);
        reference.sort_unstable();
        let mut got: Vec<u32> = s.open_sets().into_iter().map(PointSet::bits).collect();
        got.sort_unstable();
        prop_assert_eq!(got, reference);
    }

    #[test]
    fn canonical_form_is_a_relabeling_invariant(s in arb_space(6), seed in any::<u64>()) {
        let n = s.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut r = seed;
        for i in (1..n).rev() {
            r = r.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (r >> 33) as usize % (i + 1));
        }
        let moved = FinSpace::from_index_masks(&relabel_masks(s.nbhds(), &perm)).unwrap();
        prop_assert_eq!(canonical_masks(&moved), canonical_masks(&s));
        let c = canonicalize(&s);
        prop_assert_eq!(canonicalize(&c), c);
    }
}

fn opens_of(s: &FinSpace) -> Vec<u32> {
    opens(s)
}

#[test]
fn theta_interior_shortcut_matches_definition_up_to_five_points() {
    let mut checked = 0u64;
    for n in 1..=5 {
        for s in labeled_spaces(n) {
            let full = s.full();
            for a in full.subsets().skip(1) {
                for t in a.subsets() {
                    let by_def = (0..n)
                        .filter(|&x| t.contains(x))
                        .filter(|&x| {
                            rel_opens(&s, a.bits()).into_iter().any(|o| {
                                o >> x & 1 == 1 && cl_within(&s, a.bits(), o) & !t.bits() == 0
                            })
                        })
                        .fold(0u32, |acc, x| acc | 1 << x);
                    assert_eq!(s.theta_interior_within(a, t).bits(), by_def, "{s} A={a:?} S={t:?}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn theta_interior_is_not_idempotent_in_general() {
    // two open points u, v and x, y above them
    let s = FinSpace::from_index_masks(&[0b0001, 0b0010, 0b0101, 0b1011]).unwrap();
    let t = PointSet::from_bits(0b1101);
    let once = s.theta_interior(t).unwrap();
    assert_eq!(once, PointSet::from_bits(0b0101));
    assert_eq!(s.theta_interior(once).unwrap(), PointSet::EMPTY);
    assert_eq!(s.largest_theta_open(t).unwrap(), PointSet::EMPTY);
}
