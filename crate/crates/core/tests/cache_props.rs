mod common;

use fusion_core::amenability::kesten_counts;
use fusion_core::cache::PairStore;
use fusion_core::families::AoRules;
use fusion_core::FusionSystem;

#[test]
fn second_run_reads_every_pair_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let first = FusionSystem::new(AoRules::new(3).unwrap()).with_store(PairStore::new(dir.path()));
    let a = kesten_counts(&first, &first.fundamental(), 16).unwrap();
    assert!(first.computed_pairs() > 0);

    let second = FusionSystem::new(AoRules::new(3).unwrap()).with_store(PairStore::new(dir.path()));
    let b = kesten_counts(&second, &second.fundamental(), 16).unwrap();
    assert_eq!(a, b);
    assert_eq!(second.computed_pairs(), 0);

    // A different family never reads those entries.
    let other = FusionSystem::new(AoRules::new(4).unwrap()).with_store(PairStore::new(dir.path()));
    kesten_counts(&other, &other.fundamental(), 4).unwrap();
    assert!(other.computed_pairs() > 0);
}

#[test]
fn unwritable_store_falls_back_to_memory() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, b"x").unwrap();
    let sys = FusionSystem::new(AoRules::new(3).unwrap()).with_store(PairStore::new(&blocker));
    let counts = kesten_counts(&sys, &sys.fundamental(), 6).unwrap();
    let plain = FusionSystem::new(AoRules::new(3).unwrap());
    assert_eq!(counts, kesten_counts(&plain, &plain.fundamental(), 6).unwrap());
}
