//! The main counting algorithm: build per-column truncated factors, sweep
//! j over {0,...,N-1}^n, accumulate the scaled f̄ in the group ring, and
//! reduce it to the integer point count.
//!
//! Working memory is polynomial in (n, m, N): the sweep keeps two
//! (d+1)×N scratch tables and the N accumulator coefficients, never a table
//! indexed by the sweep space itself.

use crate::error::{Error, Result};
use crate::groupring::{reduce_to_count, GroupRingElem, Scalar, TruncPoly};
use crate::report::{CountReport, Method, ReductionStep};
use crate::{GroupRing, Int};
use num_traits::Zero;
use std::time::Instant;

/// A validated pair (A, y) with its derived sweep parameters.
#[derive(Clone, Debug)]
pub struct Instance {
    /// Columns of A, each of length n.
    cols: Vec<Vec<u64>>,
    /// Column sums 1ᵀA_l.
    col_weights: Vec<u64>,
    y: Vec<i64>,
    modulus: usize,
    degree: u64,
    infeasible: bool,
}

impl Instance {
    /// Validates a row-major matrix and demand vector. Negative demands are
    /// accepted and flagged so counting short-circuits to zero; negative
    /// matrix entries and zero columns are rejected.
    pub fn validate(rows: &[Vec<i64>], y: &[i64]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        for row in rows {
            if row.len() != m {
                return Err(Error::RaggedMatrix);
            }
        }
        if y.len() != n {
            return Err(Error::DimensionMismatch { got: y.len(), want: n });
        }
        for (k, row) in rows.iter().enumerate() {
            for (l, &a) in row.iter().enumerate() {
                if a < 0 {
                    return Err(Error::NegativeEntry { row: k + 1, col: l + 1 });
                }
            }
        }
        let cols: Vec<Vec<u64>> = (0..m)
            .map(|l| rows.iter().map(|row| row[l] as u64).collect())
            .collect();
        for (l, col) in cols.iter().enumerate() {
            if col.iter().all(|&a| a == 0) {
                return Err(Error::UnboundedPolytope { col: l + 1 });
            }
        }
        let col_weights = cols.iter().map(|c| c.iter().sum()).collect();
        let infeasible = y.iter().any(|&v| v < 0);
        let (modulus, degree) = if infeasible {
            (1, 0)
        } else {
            let max = y.iter().copied().max().unwrap_or(0) as usize;
            (max + 1, y.iter().map(|&v| v as u64).sum())
        };
        Ok(Self {
            cols,
            col_weights,
            y: y.to_vec(),
            modulus,
            degree,
            infeasible,
        })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn m(&self) -> usize {
        self.cols.len()
    }

    pub fn cols(&self) -> &[Vec<u64>] {
        &self.cols
    }

    pub fn col_weight(&self, l: usize) -> u64 {
        self.col_weights[l]
    }

    pub fn demands(&self) -> &[i64] {
        &self.y
    }

    /// N = ‖y‖∞ + 1.
    pub fn modulus(&self) -> usize {
        self.modulus
    }

    /// d = 1ᵀy.
    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// True when some demand is negative, forcing a zero count.
    pub fn is_infeasible(&self) -> bool {
        self.infeasible
    }

    /// N^n.
    pub fn scale(&self) -> Int {
        Int::from(self.modulus).pow(self.n() as u32)
    }

    /// Number of outer sweep terms, N^n.
    pub fn sweep_size(&self) -> Result<u128> {
        checked_pow(self.modulus as u128, self.n())
    }
}

fn checked_pow(base: u128, exp: usize) -> Result<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base).ok_or(Error::ResourceLimit {
            needed: u128::MAX,
            cap: u128::MAX,
        })?;
    }
    Ok(acc)
}

/// The per-column factor `Σ_h t^{(1ᵀcol)·h} s^{(-jᵀcol·h) mod N}` with
/// h ranging over 0..N and terms of t-degree beyond the bound dropped.
pub fn column_factor<T: Scalar>(
    col: &[u64],
    j: &[u64],
    modulus: usize,
    degree: u64,
) -> Result<TruncPoly<T>> {
    let weight: u64 = col.iter().sum();
    if weight == 0 {
        return Err(Error::InvalidArgument("column weight must be positive".into()));
    }
    if j.len() != col.len() {
        return Err(Error::DimensionMismatch { got: j.len(), want: col.len() });
    }
    let n = modulus as u128;
    let dot: usize = (col
        .iter()
        .zip(j)
        .map(|(&a, &jv)| (a as u128) * (jv as u128) % n)
        .sum::<u128>()
        % n) as usize;
    let mut p = TruncPoly::zero(modulus, degree);
    for h in 0..modulus as u64 {
        let t_deg = weight * h;
        if t_deg > degree {
            break;
        }
        let s_exp = (modulus - (dot as u128 * h as u128 % n) as usize) % modulus;
        p.set_coeff(t_deg, GroupRingElem::monomial(modulus, s_exp));
    }
    Ok(p)
}

/// Adds the single-j contribution `s^{(jᵀy) mod N} · b_j` to `f`, where
/// `b_j` is the t^d coefficient of the product of all column factors.
///
/// This is the direct per-term route; the sweep in [`count`] computes the
/// same contribution through an incremental kernel, and the two are held
/// equal by tests.
pub fn accumulate_term(f: &GroupRing, j: &[u64], inst: &Instance) -> Result<GroupRing> {
    let n_mod = inst.modulus();
    let d = inst.degree();
    if f.modulus() != n_mod {
        return Err(Error::ModulusMismatch(f.modulus(), n_mod));
    }
    let mut product = TruncPoly::one(n_mod, d);
    for col in inst.cols() {
        product = product.mul(&column_factor(col, j, n_mod, d)?)?;
    }
    let b = product.coeff(d);
    let ydot = (j
        .iter()
        .zip(inst.demands())
        .map(|(&jv, &yv)| (jv as u128) * (yv as u128) % n_mod as u128)
        .sum::<u128>()
        % n_mod as u128) as usize;
    f.add(&b.shift(ydot))
}

/// Per-column lookup tables for the sweep: for each residue c = jᵀA_l mod N,
/// the factor's monomial list (t-degree, s-exponent).
struct FactorTable {
    /// lists[l][c] sorted by t-degree.
    lists: Vec<Vec<Vec<(u32, u32)>>>,
    /// cols mod N, indexed [l][k], for incremental dot updates.
    col_residues: Vec<Vec<usize>>,
    y_residues: Vec<usize>,
}

impl FactorTable {
    fn build(inst: &Instance) -> Self {
        let n_mod = inst.modulus();
        let d = inst.degree();
        let lists = inst
            .cols()
            .iter()
            .enumerate()
            .map(|(l, _)| {
                let w = inst.col_weight(l);
                (0..n_mod)
                    .map(|c| {
                        let mut list = Vec::new();
                        for h in 0..n_mod as u64 {
                            let t_deg = w * h;
                            if t_deg > d {
                                break;
                            }
                            let s_exp =
                                (n_mod - (c as u128 * h as u128 % n_mod as u128) as usize) % n_mod;
                            list.push((t_deg as u32, s_exp as u32));
                        }
                        list
                    })
                    .collect()
            })
            .collect();
        let col_residues = inst
            .cols()
            .iter()
            .map(|col| col.iter().map(|&a| (a % n_mod as u64) as usize).collect())
            .collect();
        let y_residues = inst
            .demands()
            .iter()
            .map(|&v| (v.max(0) as u64 % n_mod as u64) as usize)
            .collect();
        Self {
            lists,
            col_residues,
            y_residues,
        }
    }
}

/// Odometer over {0,...,N-1}^n with incrementally maintained residues
/// jᵀA_l mod N and jᵀy mod N. Position 0 is the fastest digit.
struct Odometer {
    digits: Vec<usize>,
    dots: Vec<usize>,
    ydot: usize,
    modulus: usize,
}

impl Odometer {
    fn at(index: u128, inst: &Instance, table: &FactorTable) -> Self {
        let n_mod = inst.modulus();
        let mut digits = vec![0usize; inst.n()];
        let mut idx = index;
        for digit in digits.iter_mut() {
            *digit = (idx % n_mod as u128) as usize;
            idx /= n_mod as u128;
        }
        let dots = table
            .col_residues
            .iter()
            .map(|res| {
                digits
                    .iter()
                    .zip(res)
                    .map(|(&jv, &a)| jv * a % n_mod)
                    .sum::<usize>()
                    % n_mod
            })
            .collect();
        let ydot = digits
            .iter()
            .zip(&table.y_residues)
            .map(|(&jv, &yv)| jv * yv % n_mod)
            .sum::<usize>()
            % n_mod;
        Self {
            digits,
            dots,
            ydot,
            modulus: n_mod,
        }
    }

    fn advance(&mut self, table: &FactorTable) {
        let n_mod = self.modulus;
        for k in 0..self.digits.len() {
            // Both a plain increment and a wrap from N-1 to 0 change every
            // residue by +A_{kl} mod N, since -(N-1)·A ≡ A (mod N).
            for (dot, res) in self.dots.iter_mut().zip(&table.col_residues) {
                *dot = (*dot + res[k]) % n_mod;
            }
            self.ydot = (self.ydot + table.y_residues[k]) % n_mod;
            self.digits[k] += 1;
            if self.digits[k] == n_mod {
                self.digits[k] = 0;
            } else {
                break;
            }
        }
    }
}

/// Scratch buffers for one worker: two dense (d+1)×N tables addressed as
/// k·N + e, with touched-slot lists so clearing is proportional to use.
struct Scratch {
    cur: Vec<Int>,
    nxt: Vec<Int>,
    cur_touched: Vec<u32>,
    nxt_touched: Vec<u32>,
}

impl Scratch {
    fn new(slots: usize) -> Self {
        Self {
            cur: vec![Int::zero(); slots],
            nxt: vec![Int::zero(); slots],
            cur_touched: Vec::new(),
            nxt_touched: Vec::new(),
        }
    }

    fn clear_cur(&mut self) {
        for &ci in &self.cur_touched {
            self.cur[ci as usize].set_zero();
        }
        self.cur_touched.clear();
    }
}

fn sweep_range(inst: &Instance, table: &FactorTable, start: u128, len: u128) -> GroupRing {
    let n_mod = inst.modulus();
    let d = inst.degree() as usize;
    let mut f = GroupRing::zero(n_mod);
    if len == 0 {
        return f;
    }
    let mut odo = Odometer::at(start, inst, table);
    let mut scratch = Scratch::new((d + 1) * n_mod);
    for step in 0..len {
        scratch.cur[0] = Int::from(1);
        scratch.cur_touched.push(0);
        for (l, lists) in table.lists.iter().enumerate() {
            let list = &lists[odo.dots[l]];
            for &ci in &scratch.cur_touched {
                let ci = ci as usize;
                let (k, e) = (ci / n_mod, ci % n_mod);
                for &(dt, ds) in list {
                    let nk = k + dt as usize;
                    if nk > d {
                        break;
                    }
                    let mut ne = e + ds as usize;
                    if ne >= n_mod {
                        ne -= n_mod;
                    }
                    let tgt = nk * n_mod + ne;
                    if scratch.nxt[tgt].is_zero() {
                        scratch.nxt_touched.push(tgt as u32);
                    }
                    scratch.nxt[tgt] += &scratch.cur[ci];
                }
            }
            scratch.clear_cur();
            std::mem::swap(&mut scratch.cur, &mut scratch.nxt);
            std::mem::swap(&mut scratch.cur_touched, &mut scratch.nxt_touched);
        }
        for &ci in &scratch.cur_touched {
            let ci = ci as usize;
            if ci / n_mod == d {
                f.add_monomial_assign(odo.ydot + ci % n_mod, &scratch.cur[ci]);
            }
        }
        scratch.clear_cur();
        if step + 1 < len {
            odo.advance(table);
        }
    }
    f
}

/// Computes the scaled f̄ by sweeping j over {0,...,N-1}^n, split across the
/// requested number of workers. Group-ring addition is associative and
/// commutative, so any partition yields the identical element.
pub(crate) fn sweep_scaled(inst: &Instance, threads: usize) -> Result<GroupRing> {
    let total = inst.sweep_size()?;
    let table = FactorTable::build(inst);
    let workers = threads.clamp(1, total.clamp(1, 512) as usize);
    if workers <= 1 {
        return Ok(sweep_range(inst, &table, 0, total));
    }
    let chunk = total / workers as u128;
    let rem = total % workers as u128;
    let parts: Vec<GroupRing> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        let mut start = 0u128;
        for w in 0..workers {
            let len = chunk + u128::from((w as u128) < rem);
            let table_ref = &table;
            handles.push(scope.spawn(move || sweep_range(inst, table_ref, start, len)));
            start += len;
        }
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut f = GroupRing::zero(inst.modulus());
    for part in &parts {
        f.add_assign_elem(part)?;
    }
    Ok(f)
}

/// Full count of integer points of Ax = y, x >= 0.
pub fn count(inst: &Instance, threads: usize) -> Result<CountReport> {
    let t0 = Instant::now();
    if inst.is_infeasible() {
        let mut report = CountReport::new(Int::zero(), Method::Plain);
        report.elapsed = t0.elapsed();
        return Ok(report);
    }
    let n_mod = inst.modulus();
    let d = inst.degree();
    let f = sweep_scaled(inst, threads)?;
    let scale = inst.scale();
    let reduction = reduce_to_count(&f, &scale)?;
    let workers = threads.max(1) as u64;
    let slots = (d + 1) * n_mod as u64;
    Ok(CountReport {
        count: reduction.count,
        modulus: n_mod,
        degree: d,
        scale,
        method: Method::Plain,
        scaled_coeffs: Some(f.coeffs().to_vec()),
        trace: reduction
            .steps
            .into_iter()
            .map(|(index, subtracted)| ReductionStep { index, subtracted })
            .collect(),
        sweep_terms: inst.sweep_size()?,
        peak_live_values: workers * 2 * slots + (workers + 1) * n_mod as u64,
        table_cells: None,
        elapsed: t0.elapsed(),
    })
}
