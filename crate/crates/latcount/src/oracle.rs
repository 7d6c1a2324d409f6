//! Independent reference counters used to validate the main algorithm: a
//! table-based DP over the demand box and direct brute-force enumerators.
//! Single-threaded by contract.

use crate::counter::Instance;
use crate::error::{Error, Result};
use crate::matching::{adjacency_matrix, Hypergraph};
use crate::report::{CountReport, Method};
use crate::Int;
use num_traits::{One, Zero};
use std::time::Instant;

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    /// Cap on the DP table size ∏(y_k + 1).
    pub dp_cell_cap: u128,
    /// Cap on brute-force search nodes.
    pub brute_node_cap: u128,
    /// Cap on |V| for the matching enumerator.
    pub match_vertex_cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            dp_cell_cap: 100_000_000,
            brute_node_cap: 100_000_000,
            match_vertex_cap: 20,
        }
    }
}

/// The exponential-space DP: for each column, convolve the table of partial
/// counts over the box 0 <= z <= y. Space is the full ∏(y_k + 1) table; this
/// is the baseline the sweep algorithm improves on.
pub fn count_dp(inst: &Instance, cfg: &OracleConfig) -> Result<CountReport> {
    let t0 = Instant::now();
    if inst.is_infeasible() {
        let mut report = CountReport::new(Int::zero(), Method::Dp);
        report.table_cells = Some(0);
        report.elapsed = t0.elapsed();
        return Ok(report);
    }
    let y: Vec<usize> = inst.demands().iter().map(|&v| v as usize).collect();
    let dims: Vec<usize> = y.iter().map(|&v| v + 1).collect();
    let mut cells: u128 = 1;
    for &dim in &dims {
        cells = cells.checked_mul(dim as u128).ok_or(Error::ResourceLimit {
            needed: u128::MAX,
            cap: cfg.dp_cell_cap,
        })?;
    }
    if cells > cfg.dp_cell_cap {
        return Err(Error::ResourceLimit {
            needed: cells,
            cap: cfg.dp_cell_cap,
        });
    }
    let cells = cells as usize;
    let mut strides = vec![1usize; dims.len()];
    for k in 1..dims.len() {
        strides[k] = strides[k - 1] * dims[k - 1];
    }
    let mut table = vec![Int::zero(); cells];
    table[0] = Int::one();
    for col in inst.cols() {
        let col_offset: usize = col
            .iter()
            .zip(&strides)
            .map(|(&a, &s)| a as usize * s)
            .sum();
        let mut new_table = vec![Int::zero(); cells];
        // Colexicographic walk over the box: coordinate 0 is fastest, which
        // matches ascending flat index.
        let mut z = vec![0usize; dims.len()];
        for flat in 0..cells {
            let mut acc = Int::zero();
            let mut h = 0usize;
            loop {
                if z.iter().zip(col).any(|(&zk, &a)| zk < h * a as usize) {
                    break;
                }
                acc += &table[flat - h * col_offset];
                h += 1;
                if col_offset == 0 {
                    break;
                }
            }
            new_table[flat] = acc;
            let mut pos = 0;
            while pos < dims.len() {
                z[pos] += 1;
                if z[pos] == dims[pos] {
                    z[pos] = 0;
                    pos += 1;
                } else {
                    break;
                }
            }
        }
        table = new_table;
    }
    let count = table[cells - 1].clone();
    let mut report = CountReport::new(count, Method::Dp);
    report.modulus = inst.modulus();
    report.degree = inst.degree();
    report.scale = inst.scale();
    report.table_cells = Some(cells as u128);
    report.peak_live_values = 2 * cells as u64;
    report.elapsed = t0.elapsed();
    Ok(report)
}

struct BruteState<'a> {
    inst: &'a Instance,
    cfg: &'a OracleConfig,
    nodes: u128,
    count: Int,
    solutions: Option<Vec<Vec<u64>>>,
    /// Per column position l: rows with no positive entry in columns l..m.
    uncovered_after: Vec<Vec<usize>>,
    x: Vec<u64>,
}

impl BruteState<'_> {
    fn dfs(&mut self, l: usize, residual: &mut Vec<i64>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cfg.brute_node_cap {
            return Err(Error::ResourceLimit {
                needed: self.nodes,
                cap: self.cfg.brute_node_cap,
            });
        }
        if l == self.inst.m() {
            if residual.iter().all(|&r| r == 0) {
                self.count += 1;
                if let Some(sols) = &mut self.solutions {
                    sols.push(self.x.clone());
                }
            }
            return Ok(());
        }
        // Rows untouched by the remaining columns must already be satisfied.
        if self.uncovered_after[l].iter().any(|&k| residual[k] != 0) {
            return Ok(());
        }
        let col = &self.inst.cols()[l];
        let bound = col
            .iter()
            .zip(residual.iter())
            .filter(|(&a, _)| a > 0)
            .map(|(&a, &r)| (r as u64) / a)
            .min()
            .unwrap_or(0);
        for h in 0..=bound {
            for (k, &a) in col.iter().enumerate() {
                residual[k] -= (h * a) as i64;
            }
            self.x.push(h);
            let result = self.dfs(l + 1, residual);
            self.x.pop();
            for (k, &a) in col.iter().enumerate() {
                residual[k] += (h * a) as i64;
            }
            result?;
        }
        Ok(())
    }
}

/// (count, collected solutions, visited search nodes).
type BruteOutcome = (Int, Option<Vec<Vec<u64>>>, u128);

fn brute_run(inst: &Instance, cfg: &OracleConfig, collect: bool) -> Result<BruteOutcome> {
    if inst.is_infeasible() {
        return Ok((Int::zero(), collect.then(Vec::new), 0));
    }
    let n = inst.n();
    let m = inst.m();
    let mut uncovered_after = vec![Vec::new(); m];
    for (l, slot) in uncovered_after.iter_mut().enumerate() {
        for k in 0..n {
            if !inst.cols()[l..].iter().any(|col| col[k] > 0) {
                slot.push(k);
            }
        }
    }
    let mut state = BruteState {
        inst,
        cfg,
        nodes: 0,
        count: Int::zero(),
        solutions: collect.then(Vec::new),
        uncovered_after,
        x: Vec::new(),
    };
    let mut residual: Vec<i64> = inst.demands().to_vec();
    state.dfs(0, &mut residual)?;
    Ok((state.count, state.solutions, state.nodes))
}

/// Exhaustive depth-first enumeration with residual-demand pruning.
pub fn count_bruteforce(inst: &Instance, cfg: &OracleConfig) -> Result<CountReport> {
    let t0 = Instant::now();
    let (count, _, nodes) = brute_run(inst, cfg, false)?;
    let mut report = CountReport::new(count, Method::Brute);
    report.modulus = inst.modulus();
    report.degree = inst.degree();
    report.scale = inst.scale();
    report.sweep_terms = nodes;
    report.elapsed = t0.elapsed();
    Ok(report)
}

/// All integer points, for golden tests on tiny instances.
pub fn enumerate_points(inst: &Instance, cfg: &OracleConfig) -> Result<Vec<Vec<u64>>> {
    let (_, solutions, _) = brute_run(inst, cfg, true)?;
    Ok(solutions.unwrap_or_default())
}

/// Counts perfect matchings (or b-matchings, via the incidence instance) by
/// covering the lowest uncovered vertex first.
pub fn enumerate_matchings_bruteforce(h: &Hypergraph, cfg: &OracleConfig) -> Result<CountReport> {
    let t0 = Instant::now();
    if h.demands().is_some() {
        let inst = adjacency_matrix(h)?;
        let mut report = count_bruteforce(&inst, cfg)?;
        report.elapsed = t0.elapsed();
        return Ok(report);
    }
    if h.vertex_count() > cfg.match_vertex_cap {
        return Err(Error::ResourceLimit {
            needed: h.vertex_count() as u128,
            cap: cfg.match_vertex_cap as u128,
        });
    }
    let nv = h.vertex_count();
    let masks: Vec<u64> = h
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u64, |m, &v| m | 1 << v))
        .collect();
    fn rec(covered: u64, nv: usize, masks: &[u64]) -> u64 {
        let Some(lowest) = (0..nv).find(|&v| covered >> v & 1 == 0) else {
            return 1;
        };
        let want = 1u64 << lowest;
        masks
            .iter()
            .filter(|&&m| m & want != 0 && m & covered == 0)
            .map(|&m| rec(covered | m, nv, masks))
            .sum()
    }
    let count = rec(0, nv, &masks);
    let mut report = CountReport::new(Int::from(count), Method::Brute);
    report.modulus = 2;
    report.degree = nv as u64;
    report.elapsed = t0.elapsed();
    Ok(report)
}
