//! Shared generators for the randomized integration suites. Everything is
//! seeded by the caller, so failures reproduce exactly.

#![allow(dead_code)]

use latcount::counter::Instance;
use latcount::matching::Hypergraph;
use rand::Rng;

/// Random instance with n <= 3, m <= 4, entries in {0,...,3} (no zero
/// columns) and demands in {0,...,5}.
pub fn random_instance<R: Rng>(rng: &mut R) -> Instance {
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=4);
    let mut rows = vec![vec![0i64; m]; n];
    for l in 0..m {
        loop {
            for row in rows.iter_mut() {
                row[l] = rng.gen_range(0..=3);
            }
            if rows.iter().any(|row| row[l] > 0) {
                break;
            }
        }
    }
    let y: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=5)).collect();
    Instance::validate(&rows, &y).expect("generator produces valid instances")
}

fn random_edge<R: Rng>(rng: &mut R, nv: usize) -> Vec<usize> {
    loop {
        let e: Vec<usize> = (0..nv).filter(|_| rng.gen_bool(0.35)).collect();
        if !e.is_empty() {
            return e;
        }
    }
}

/// Random hypergraph with |V| <= 8 and |E| <= 12; duplicate edges are
/// allowed and counted with multiplicity.
pub fn random_hypergraph<R: Rng>(rng: &mut R, demands: bool) -> Hypergraph {
    let nv = rng.gen_range(2..=8);
    let ne = rng.gen_range(1..=12);
    let edges: Vec<Vec<usize>> = (0..ne).map(|_| random_edge(rng, nv)).collect();
    let b = demands.then(|| (0..nv).map(|_| rng.gen_range(0..=2)).collect());
    Hypergraph::new(nv, edges, b, None).expect("generator produces valid hypergraphs")
}

/// Complete bipartite graph K_{q,q} as a b-matching instance with unit
/// demands and the two sides as the partition.
pub fn complete_bipartite(q: usize) -> Hypergraph {
    let edges: Vec<Vec<usize>> = (0..q)
        .flat_map(|i| (0..q).map(move |j| vec![i, q + j]))
        .collect();
    let parts = vec![(0..q).collect(), (q..2 * q).collect()];
    Hypergraph::new(2 * q, edges, Some(vec![1; 2 * q]), Some(parts)).unwrap()
}

/// Vertex-edge incidence instance of a contingency table problem: rows and
/// columns of the table are constraints, cells are variables.
pub fn contingency(row_sums: &[i64], col_sums: &[i64]) -> Instance {
    let (r, c) = (row_sums.len(), col_sums.len());
    let mut rows = vec![vec![0i64; r * c]; r + c];
    for i in 0..r {
        for j in 0..c {
            rows[i][i * c + j] = 1;
            rows[r + j][i * c + j] = 1;
        }
    }
    let y: Vec<i64> = row_sums.iter().chain(col_sums).copied().collect();
    Instance::validate(&rows, &y).unwrap()
}
