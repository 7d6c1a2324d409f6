//! Hypergraph perfect-matching and b-matching counting.
//!
//! With N = 2 the root of unity is -1, so the group-ring sweep collapses to
//! a signed subset sum over U ⊆ V: the number of perfect matchings is the
//! coefficient of t^{|V|} in
//! `(1/2^{|V|}) Σ_U (-1)^{|U|} ∏_F (1 + t^{|F|} (-1)^{|F∩U|})`.
//! Matchings are counted as integer solutions of Ax = 1 on the incidence
//! matrix, so duplicate hyperedges count separately.

use crate::counter::{count, Instance};
use crate::error::{Error, Result};
use crate::partite::{count_partite, find_stable_set, verify_stable_set};
use crate::report::{CountReport, Method};
use crate::Int;
use num_traits::{One, Zero};
use std::time::Instant;

/// Cap on |V| for the 2^{|V|} subset formulas.
pub const SUBSET_SWEEP_VERTEX_CAP: usize = 62;

/// Vertex set {0,...,vertex_count-1} plus a list of hyperedges, an optional
/// demand vector b, and an optional vertex partition.
#[derive(Clone, Debug)]
pub struct Hypergraph {
    vertex_count: usize,
    edges: Vec<Vec<usize>>,
    b: Option<Vec<i64>>,
    partition: Option<Vec<Vec<usize>>>,
}

impl Hypergraph {
    /// Validates edges (nonempty, in-range, no repeated vertex inside an
    /// edge), the demand vector length, and the k-partite condition when a
    /// partition is supplied.
    pub fn new(
        vertex_count: usize,
        edges: Vec<Vec<usize>>,
        b: Option<Vec<i64>>,
        partition: Option<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let mut canonical = Vec::with_capacity(edges.len());
        for (i, edge) in edges.into_iter().enumerate() {
            if edge.is_empty() {
                return Err(Error::InvalidHypergraph(format!("edge {} is empty", i + 1)));
            }
            let mut e = edge;
            e.sort_unstable();
            if let Some(&v) = e.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {} mentions vertex {}, but the graph has {} vertices",
                    i + 1,
                    v + 1,
                    vertex_count
                )));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {} repeats a vertex",
                    i + 1
                )));
            }
            canonical.push(e);
        }
        if let Some(b) = &b {
            if b.len() != vertex_count {
                return Err(Error::DimensionMismatch {
                    got: b.len(),
                    want: vertex_count,
                });
            }
        }
        if let Some(parts) = &partition {
            let mut part_of = vec![usize::MAX; vertex_count];
            for (p, part) in parts.iter().enumerate() {
                for &v in part {
                    if v >= vertex_count {
                        return Err(Error::InvalidHypergraph(format!(
                            "partition part {} mentions vertex {} out of range",
                            p + 1,
                            v + 1
                        )));
                    }
                    if part_of[v] != usize::MAX {
                        return Err(Error::InvalidHypergraph(format!(
                            "vertex {} appears in two partition parts",
                            v + 1
                        )));
                    }
                    part_of[v] = p;
                }
            }
            if part_of.contains(&usize::MAX) {
                return Err(Error::InvalidHypergraph(
                    "partition does not cover every vertex".into(),
                ));
            }
            for (i, edge) in canonical.iter().enumerate() {
                let mut seen = vec![false; parts.len()];
                for &v in edge {
                    if seen[part_of[v]] {
                        return Err(Error::InvalidHypergraph(format!(
                            "edge {} meets partition part {} twice",
                            i + 1,
                            part_of[v] + 1
                        )));
                    }
                    seen[part_of[v]] = true;
                }
            }
        }
        Ok(Self {
            vertex_count,
            edges: canonical,
            b,
            partition,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn demands(&self) -> Option<&[i64]> {
        self.b.as_deref()
    }

    pub fn partition(&self) -> Option<&[Vec<usize>]> {
        self.partition.as_deref()
    }
}

/// 0-1 incidence matrix of the hypergraph as a counting instance, with
/// y = b when present, else the all-one vector.
pub fn adjacency_matrix(h: &Hypergraph) -> Result<Instance> {
    let n = h.vertex_count();
    let mut rows = vec![vec![0i64; h.edges().len()]; n];
    for (l, edge) in h.edges().iter().enumerate() {
        for &v in edge {
            rows[v][l] = 1;
        }
    }
    let y: Vec<i64> = match h.demands() {
        Some(b) => b.to_vec(),
        None => vec![1; n],
    };
    Instance::validate(&rows, &y)
}

fn check_subset_sweep_size(h: &Hypergraph) -> Result<()> {
    if h.vertex_count() > SUBSET_SWEEP_VERTEX_CAP {
        return Err(Error::ResourceLimit {
            needed: h.vertex_count() as u128,
            cap: SUBSET_SWEEP_VERTEX_CAP as u128,
        });
    }
    Ok(())
}

/// Per-vertex incidence lists for the reflected-binary sweep.
fn incidence(h: &Hypergraph) -> Vec<Vec<usize>> {
    let mut inc = vec![Vec::new(); h.vertex_count()];
    for (l, edge) in h.edges().iter().enumerate() {
        for &v in edge {
            inc[v].push(l);
        }
    }
    inc
}

/// Signed contribution sum over a Gray-code range of subsets; `term`
/// receives the per-edge odd/even parities and the sign (-1)^{|U|}.
fn gray_sweep<Tm>(h: &Hypergraph, start: u64, len: u64, mut term: Tm) -> Int
where
    Tm: FnMut(&[bool], bool) -> Int,
{
    let inc = incidence(h);
    let mut total = Int::zero();
    if len == 0 {
        return total;
    }
    let u0 = start ^ (start >> 1);
    let mut parity = vec![false; h.edges().len()];
    let mut popcount_odd = false;
    for (v, inc_v) in inc.iter().enumerate() {
        if u0 >> v & 1 == 1 {
            popcount_odd = !popcount_odd;
            for &l in inc_v {
                parity[l] = !parity[l];
            }
        }
    }
    for g in start..start + len {
        total += term(&parity, popcount_odd);
        if g + 1 < start + len {
            let v = (g + 1).trailing_zeros() as usize;
            popcount_odd = !popcount_odd;
            for &l in &inc[v] {
                parity[l] = !parity[l];
            }
        }
    }
    total
}

fn subset_sweep<Tm>(h: &Hypergraph, threads: usize, term: Tm) -> Int
where
    Tm: Fn(&[bool], bool) -> Int + Sync,
{
    let total: u64 = 1 << h.vertex_count();
    let workers = threads.max(1).min(total.min(512) as usize) as u64;
    if workers <= 1 {
        return gray_sweep(h, 0, total, &term);
    }
    let chunk = total / workers;
    let rem = total % workers;
    let parts: Vec<Int> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        let mut start = 0u64;
        for w in 0..workers {
            let len = chunk + u64::from(w < rem);
            let term_ref = &term;
            handles.push(scope.spawn(move || gray_sweep(h, start, len, term_ref)));
            start += len;
        }
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    parts.into_iter().sum()
}

fn divide_by_power_of_two(total: Int, bits: usize) -> Result<Int> {
    use num_integer::Integer as _;
    let (q, r) = total.div_rem(&(Int::one() << bits));
    if !r.is_zero() || q < Int::zero() {
        return Err(Error::StructuralViolation(
            "subset sum is not a nonnegative multiple of 2^|V|".into(),
        ));
    }
    Ok(q)
}

/// Number of perfect matchings via the 2^{|V|} inclusion-exclusion formula.
pub fn count_perfect_matchings(h: &Hypergraph, threads: usize) -> Result<CountReport> {
    let t0 = Instant::now();
    if h.demands().is_some() {
        return Err(Error::InvalidArgument(
            "perfect matching counting takes a hypergraph without demands".into(),
        ));
    }
    check_subset_sweep_size(h)?;
    let nv = h.vertex_count();
    let sizes: Vec<usize> = h.edges().iter().map(Vec::len).collect();
    let total = subset_sweep(h, threads, |parity, sign_odd| {
        // coefficient of t^{|V|} in ∏ (1 ± t^{|F|}), truncated at |V|
        let mut poly = vec![Int::zero(); nv + 1];
        poly[0] = Int::one();
        for (l, &w) in sizes.iter().enumerate() {
            for k in (0..=nv.saturating_sub(w)).rev() {
                if poly[k].is_zero() {
                    continue;
                }
                let contrib = poly[k].clone();
                if parity[l] {
                    poly[k + w] -= contrib;
                } else {
                    poly[k + w] += contrib;
                }
            }
        }
        if sign_odd {
            -poly[nv].clone()
        } else {
            poly[nv].clone()
        }
    });
    let count = divide_by_power_of_two(total, nv)?;
    let mut report = CountReport::new(count, Method::Matching);
    report.modulus = 2;
    report.degree = nv as u64;
    report.scale = Int::one() << nv;
    report.sweep_terms = 1u128 << nv;
    report.peak_live_values = (threads.max(1) * (nv + 1)) as u64;
    report.elapsed = t0.elapsed();
    Ok(report)
}

/// Closed form for ℓ-uniform hypergraphs: the polynomial product reduces to
/// binomial coefficients in the number of odd-intersection edges.
pub fn count_perfect_matchings_uniform(
    h: &Hypergraph,
    edge_size: usize,
    threads: usize,
) -> Result<CountReport> {
    let t0 = Instant::now();
    if h.demands().is_some() {
        return Err(Error::InvalidArgument(
            "perfect matching counting takes a hypergraph without demands".into(),
        ));
    }
    if edge_size == 0 {
        return Err(Error::InvalidArgument("edge size must be positive".into()));
    }
    if let Some(bad) = h.edges().iter().position(|e| e.len() != edge_size) {
        return Err(Error::InvalidArgument(format!(
            "edge {} has size {}, expected {}",
            bad + 1,
            h.edges()[bad].len(),
            edge_size
        )));
    }
    let nv = h.vertex_count();
    let ne = h.edges().len();
    if !nv.is_multiple_of(edge_size) {
        let mut report = CountReport::new(Int::zero(), Method::Uniform);
        report.elapsed = t0.elapsed();
        return Ok(report);
    }
    check_subset_sweep_size(h)?;
    let picks = nv / edge_size;
    let binom = pascal_table(ne, picks);
    let total = subset_sweep(h, threads, |parity, sign_odd| {
        let odd = parity.iter().filter(|&&p| p).count();
        let even = ne - odd;
        let mut inner = Int::zero();
        for i in 0..=picks.min(odd) {
            if picks - i > even {
                continue;
            }
            let term = &binom[odd][i] * &binom[even][picks - i];
            if i % 2 == 1 {
                inner -= term;
            } else {
                inner += term;
            }
        }
        if sign_odd {
            -inner
        } else {
            inner
        }
    });
    let count = divide_by_power_of_two(total, nv)?;
    let mut report = CountReport::new(count, Method::Uniform);
    report.modulus = 2;
    report.degree = nv as u64;
    report.scale = Int::one() << nv;
    report.sweep_terms = 1u128 << nv;
    report.peak_live_values = ((ne + 1) * (picks + 1)) as u64;
    report.elapsed = t0.elapsed();
    Ok(report)
}

/// table[n][k] = C(n, k), zero for k > n.
fn pascal_table(rows: usize, cols: usize) -> Vec<Vec<Int>> {
    let mut table = vec![vec![Int::zero(); cols + 1]; rows + 1];
    table[0][0] = Int::one();
    for n in 1..=rows {
        table[n][0] = Int::one();
        for k in 1..=cols {
            table[n][k] = table[n - 1][k].clone() + table[n - 1][k - 1].clone();
        }
    }
    table
}

/// Counts perfect b-matchings (multisets of hyperedges covering vertex v
/// exactly b(v) times) by delegating to the partite or plain sweep on the
/// incidence instance.
pub fn count_b_matchings(h: &Hypergraph, threads: usize) -> Result<CountReport> {
    let Some(_) = h.demands() else {
        return Err(Error::InvalidArgument(
            "b-matching counting needs a demand vector".into(),
        ));
    };
    let inst = adjacency_matrix(h)?;
    let sset = match h.partition() {
        Some(parts) => {
            let largest = parts
                .iter()
                .max_by_key(|p| p.len())
                .cloned()
                .unwrap_or_default();
            verify_stable_set(&inst, &largest)?
        }
        None => find_stable_set(&inst),
    };
    if sset.size() == 0 {
        count(&inst, threads)
    } else {
        count_partite(&inst, &sset, threads)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn graph(n: usize, edges: &[(usize, usize)]) -> Hypergraph {
        Hypergraph::new(
            n,
            edges.iter().map(|&(a, b)| vec![a, b]).collect(),
            None,
            None,
        )
        .unwrap()
    }

    pub(crate) fn complete_bipartite(n: usize, b: Option<Vec<i64>>) -> Hypergraph {
        let mut edges = Vec::new();
        for a in 0..n {
            for c in 0..n {
                edges.push(vec![a, n + c]);
            }
        }
        let partition = Some(vec![(0..n).collect(), (n..2 * n).collect()]);
        Hypergraph::new(2 * n, edges, b, partition).unwrap()
    }

    #[test]
    fn adjacency_single_edge() {
        let h = Hypergraph::new(2, vec![vec![0, 1]], None, None).unwrap();
        let inst = adjacency_matrix(&h).unwrap();
        assert_eq!(inst.cols(), &[vec![1, 1]]);
        assert_eq!(inst.demands(), &[1, 1]);
    }

    #[test]
    fn adjacency_with_demands() {
        let h = complete_bipartite(2, Some(vec![2, 2, 2, 2]));
        let inst = adjacency_matrix(&h).unwrap();
        assert_eq!(inst.demands(), &[2, 2, 2, 2]);
        assert_eq!(inst.m(), 4);
    }

    #[test]
    fn empty_edge_rejected() {
        let err = Hypergraph::new(2, vec![vec![]], None, None).unwrap_err();
        assert!(matches!(err, Error::InvalidHypergraph(_)));
    }

    #[test]
    fn partition_validation() {
        // Edge inside one part violates the k-partite condition.
        let err = Hypergraph::new(
            2,
            vec![vec![0, 1]],
            None,
            Some(vec![vec![0, 1]]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidHypergraph(_)));
    }

    #[test]
    fn matchings_single_edge() {
        let h = Hypergraph::new(2, vec![vec![0, 1]], None, None).unwrap();
        assert_eq!(count_perfect_matchings(&h, 1).unwrap().count, Int::from(1));
    }

    #[test]
    fn matchings_triangle() {
        let h = graph(3, &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(count_perfect_matchings(&h, 1).unwrap().count, Int::zero());
    }

    #[test]
    fn matchings_four_cycle() {
        let h = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(count_perfect_matchings(&h, 1).unwrap().count, Int::from(2));
    }

    #[test]
    fn matchings_k33() {
        let h = complete_bipartite(3, None);
        assert_eq!(count_perfect_matchings(&h, 1).unwrap().count, Int::from(6));
    }

    #[test]
    fn matchings_three_uniform() {
        let h = Hypergraph::new(
            6,
            vec![vec![0, 1, 2], vec![3, 4, 5], vec![0, 3, 4]],
            None,
            None,
        )
        .unwrap();
        assert_eq!(count_perfect_matchings(&h, 1).unwrap().count, Int::from(1));
    }

    #[test]
    fn uniform_matches_general() {
        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(
            count_perfect_matchings_uniform(&c4, 2, 1).unwrap().count,
            Int::from(2)
        );
        let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(
            count_perfect_matchings_uniform(&k4, 2, 1).unwrap().count,
            Int::from(3)
        );
        let single = Hypergraph::new(3, vec![vec![0, 1, 2]], None, None).unwrap();
        assert_eq!(
            count_perfect_matchings_uniform(&single, 3, 1).unwrap().count,
            Int::from(1)
        );
    }

    #[test]
    fn uniform_rejects_mixed_sizes() {
        let h = Hypergraph::new(3, vec![vec![0, 1], vec![0, 1, 2]], None, None).unwrap();
        assert!(count_perfect_matchings_uniform(&h, 2, 1).is_err());
    }

    #[test]
    fn uniform_indivisible_vertex_count() {
        let h = Hypergraph::new(5, vec![vec![0, 1], vec![2, 3]], None, None).unwrap();
        assert_eq!(
            count_perfect_matchings_uniform(&h, 2, 1).unwrap().count,
            Int::zero()
        );
    }

    #[test]
    fn b_matchings_examples() {
        let k22 = complete_bipartite(2, Some(vec![2, 2, 2, 2]));
        assert_eq!(count_b_matchings(&k22, 1).unwrap().count, Int::from(3));
        let k33 = complete_bipartite(3, Some(vec![1; 6]));
        assert_eq!(count_b_matchings(&k33, 1).unwrap().count, Int::from(6));
        let edge = Hypergraph::new(2, vec![vec![0, 1]], Some(vec![3, 3]), None).unwrap();
        assert_eq!(count_b_matchings(&edge, 1).unwrap().count, Int::from(1));
    }

    #[test]
    fn duplicate_edges_count_separately() {
        let h = Hypergraph::new(2, vec![vec![0, 1], vec![0, 1]], None, None).unwrap();
        assert_eq!(count_perfect_matchings(&h, 1).unwrap().count, Int::from(2));
    }

    #[test]
    fn thread_counts_agree() {
        let h = complete_bipartite(3, None);
        let one = count_perfect_matchings(&h, 1).unwrap();
        let many = count_perfect_matchings(&h, 8).unwrap();
        assert_eq!(one.count, many.count);
    }
}
