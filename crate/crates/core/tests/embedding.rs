use proptest::prelude::*;

use scp_anneal::chimera::{embed_chain_or, embed_complete_bipartite, embed_instance, verify_minor_embedding, Construction, LogicalGraph};
use scp_anneal::ising::spin_count;
use scp_anneal::scp::{gen_random_dummy_free, pair_cover_map};

fn assert_valid(what: &str, built: &Construction) {
    let report = verify_minor_embedding(&built.logical, &built.hardware, &built.embedding);
    assert!(report.is_valid(), "{what}: {report}");
}

#[test]
fn complete_bipartite_up_to_twelve() {
    for p in 1..=12 {
        for q in 1..=12 {
            let built = embed_complete_bipartite(p, q, 4).unwrap();
            assert_valid(&format!("K{p},{q}"), &built);
            assert_eq!(built.hardware.rows(), q.div_ceil(4));
            assert_eq!(built.hardware.cols(), p.div_ceil(4));
            assert_eq!(built.logical, LogicalGraph::complete_bipartite(p, q));
        }
    }
}

#[test]
fn complete_bipartite_other_cells() {
    for c in 1..=6 {
        for (p, q) in [(1, 1), (3, 5), (c + 1, 2 * c), (7, 10)] {
            assert_valid(&format!("K{p},{q} c={c}"), &embed_complete_bipartite(p, q, c).unwrap());
        }
    }
}

#[test]
fn or_chains_up_to_forty() {
    for n in 2..=40 {
        let built = embed_chain_or(n, 4).unwrap();
        assert_valid(&format!("L{n}"), &built);
        assert_eq!(built.logical.num_vertices(), 2 * n - 1);
        assert_eq!(built.hardware.rows(), (2 * n).div_ceil(4));
        assert_eq!(built.hardware.cols(), 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn reduced_instances_embed(n in 1usize..=3, m in 2usize..=5, seed in any::<u64>()) {
        let inst = gen_random_dummy_free(n, m, seed).unwrap();
        let cover = pair_cover_map(&inst);
        prop_assume!(cover.r_all().iter().all(|&r| r > 0));
        let built = embed_instance(&inst, 4).unwrap();
        let report = verify_minor_embedding(&built.logical, &built.hardware, &built.embedding);
        prop_assert!(report.is_valid(), "{}", report);
        prop_assert_eq!(built.logical.num_vertices(), spin_count(&inst));
        let f1: usize = cover.r_all().iter().map(|r| (2 * r).div_ceil(4)).sum();
        prop_assert_eq!(built.hardware.rows(), f1);
        prop_assert_eq!(built.hardware.cols(), (2 * m).div_ceil(4) + 2);
    }
}
