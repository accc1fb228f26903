use topo_core::enumerate::{
    canonical_masks, enumerate_spaces, homeomorphism_class_count_pairwise, homeomorphism_class_masks,
    homeomorphism_classes_by_canonical_dedup, labeled_masks, labeled_masks_via_open_families, Mode,
};
use topo_core::FinSpace;

#[test]
fn labeled_enumerators_agree() {
    for n in 0..=5 {
        let mut a = labeled_masks(n);
        let b = labeled_masks_via_open_families(n);
        a.sort();
        assert_eq!(a, b, "n = {n}");
    }
}

#[test]
fn labeled_counts() {
    let counts: Vec<usize> = (1..=5).map(|n| labeled_masks(n).len()).collect();
    assert_eq!(counts, vec![1, 4, 29, 355, 6942]);
}

#[test]
fn homeomorphism_routes_agree() {
    let mut counts = Vec::new();
    for n in 1..=5 {
        let labeled = labeled_masks(n);
        let by_extension = homeomorphism_class_masks(n);
        let by_dedup = homeomorphism_classes_by_canonical_dedup(&labeled);
        assert_eq!(by_extension.len(), by_dedup.len(), "n = {n}");
        assert!(by_extension.iter().all(|m| by_dedup.contains(m)));
        if n <= 4 {
            assert_eq!(homeomorphism_class_count_pairwise(&labeled), by_dedup.len());
        }
        counts.push(by_dedup.len());
    }
    assert_eq!(counts, vec![1, 3, 9, 33, 139]);
}

#[test]
fn streams_are_sized_and_canonical() {
    let s = enumerate_spaces(4, Mode::UpToHomeomorphism).unwrap();
    assert_eq!(s.len(), 33);
    for space in s {
        assert_eq!(canonical_masks(&space), space.nbhds().iter().map(|p| p.bits()).collect::<Vec<_>>());
    }
    assert_eq!(enumerate_spaces(3, Mode::Labeled).unwrap().count(), 29);
    assert!(enumerate_spaces(7, Mode::Labeled).is_err());
}

#[test]
fn sierpinski_is_canonical() {
    assert_eq!(canonical_masks(&FinSpace::sierpinski()), vec![0b01, 0b11]);
}
