use pxp_wasm::{largest_subset, level_histogram, sector_table, subset_check, MAX_SITES};

#[test]
fn three_site_table() {
    let t = sector_table(3, true).unwrap();
    let dims: Vec<u64> = t.sectors.iter().map(|s| s.dimension).collect();
    assert_eq!(dims, [4, 1, 1, 1, 1]);
    assert_eq!(t.sectors.iter().map(|s| s.dimension).sum::<u64>(), 8);
    assert!(sector_table(MAX_SITES + 1, true).is_err());
    // open chains have one integral fewer
    assert_eq!(sector_table(4, false).unwrap().sectors[0].signature.width(), 3);
}

#[test]
fn histogram_counts_every_ratio() {
    let h = level_histogram(14, 0, "even", 0.05, 10).unwrap();
    assert_eq!(h.histogram.len(), 10);
    assert_eq!(h.histogram.iter().sum::<usize>(), h.levels_used);
    assert!((0.0..=1.0).contains(&h.mean_r));
    assert!(level_histogram(14, 3, "even", 0.05, 10).is_err());
    assert!(level_histogram(14, 0, "sideways", 0.05, 10).is_err());
}

#[test]
fn consecutive_triple_is_not_strong() {
    let c = subset_check(6, true, "3,1,2").unwrap();
    assert_eq!(c.subset, [1, 2, 3]);
    assert!(c.weak && !c.strong);
    assert_eq!(c.forbidden.as_deref(), Some("101"));
    assert!(c.relation.is_some());
    assert!(!c.maximal_by_inclusion);
    assert!(subset_check(6, true, "1,9").is_err());
}

#[test]
fn even_indices_are_maximal() {
    let c = subset_check(8, true, "2,4,6,8").unwrap();
    assert!(c.strong && c.maximal_by_inclusion);
    assert_eq!(c.extensions.len(), 4);
    assert_eq!(largest_subset(9, true).unwrap(), [1, 2, 4, 5, 7, 8]);
}
