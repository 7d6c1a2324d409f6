//! Randomized cross-validation: every counting path against the independent
//! oracles, on seeded instance streams.

mod common;

use latcount::counter::count;
use latcount::matching::{
    adjacency_matrix, count_b_matchings, count_perfect_matchings,
    count_perfect_matchings_uniform,
};
use latcount::oracle::{
    count_bruteforce, count_dp, enumerate_matchings_bruteforce, OracleConfig,
};
use latcount::partite::{count_partite, find_stable_set};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn sweep_agrees_with_oracles_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x01);
    let cfg = OracleConfig::default();
    for round in 0..60 {
        let inst = common::random_instance(&mut rng);
        let ctx = format!(
            "round {round}: cols {:?}, y {:?}",
            inst.cols(),
            inst.demands()
        );
        let plain = count(&inst, 1).unwrap();
        assert_eq!(plain.count, count_dp(&inst, &cfg).unwrap().count, "dp, {ctx}");
        assert_eq!(
            plain.count,
            count_bruteforce(&inst, &cfg).unwrap().count,
            "brute force, {ctx}"
        );
        let sset = find_stable_set(&inst);
        let partite = count_partite(&inst, &sset, 1).unwrap();
        assert_eq!(plain.count, partite.count, "partite, {ctx}");
        assert_eq!(plain.scaled_coeffs, partite.scaled_coeffs, "partite f̄, {ctx}");
    }
}

#[test]
fn thread_split_is_invisible_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x02);
    for _ in 0..25 {
        let inst = common::random_instance(&mut rng);
        let one = count(&inst, 1).unwrap();
        let five = count(&inst, 5).unwrap();
        assert_eq!(one.count, five.count);
        assert_eq!(one.scaled_coeffs, five.scaled_coeffs);
        assert_eq!(one.trace, five.trace);
    }
}

#[test]
fn matchings_agree_with_enumerator_on_random_hypergraphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x03);
    let cfg = OracleConfig::default();
    for round in 0..40 {
        let h = common::random_hypergraph(&mut rng, false);
        let ctx = format!("round {round}: |V|={}, edges {:?}", h.vertex_count(), h.edges());
        let fast = count_perfect_matchings(&h, 1).unwrap();
        let slow = enumerate_matchings_bruteforce(&h, &cfg).unwrap();
        assert_eq!(fast.count, slow.count, "{ctx}");
        let sizes: Vec<usize> = h.edges().iter().map(Vec::len).collect();
        if sizes.windows(2).all(|w| w[0] == w[1]) {
            let uniform = count_perfect_matchings_uniform(&h, sizes[0], 1).unwrap();
            assert_eq!(uniform.count, slow.count, "uniform, {ctx}");
        }
    }
}

#[test]
fn b_matchings_agree_with_bruteforce_on_random_hypergraphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x04);
    let cfg = OracleConfig::default();
    for round in 0..40 {
        let h = common::random_hypergraph(&mut rng, true);
        let ctx = format!(
            "round {round}: |V|={}, edges {:?}, b {:?}",
            h.vertex_count(),
            h.edges(),
            h.demands()
        );
        let fast = count_b_matchings(&h, 1).unwrap();
        let inst = adjacency_matrix(&h).unwrap();
        let slow = count_bruteforce(&inst, &cfg).unwrap();
        assert_eq!(fast.count, slow.count, "{ctx}");
    }
}
