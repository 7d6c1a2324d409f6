//! Stable-set factorization of the sweep: with a stable set S of the column
//! support hypergraph, the outer sum shrinks from N^n to N^{n-|S|} terms.

use crate::counter::Instance;
use crate::error::{Error, Result};
use crate::groupring::reduce_to_count;
use crate::report::{CountReport, Method, ReductionStep};
use crate::{GroupRing, Int, Poly};
use num_traits::Zero;
use std::time::Instant;

/// A verified stable set together with the column block assignment:
/// block 0 holds columns whose support misses S, block α > 0 the columns
/// meeting member α.
#[derive(Clone, Debug)]
pub struct StableSet {
    members: Vec<usize>,
    /// Per column: 0 for block 0, α for members[α-1].
    block_of: Vec<usize>,
}

impl StableSet {
    /// Row indices (0-based) in S, sorted.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn block_of(&self) -> &[usize] {
        &self.block_of
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Checks that every column's support meets at most one member of S and
/// returns the block assignment.
pub fn verify_stable_set(inst: &Instance, members: &[usize]) -> Result<StableSet> {
    let n = inst.n();
    let mut sorted: Vec<usize> = members.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if let Some(&v) = sorted.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidArgument(format!(
            "stable set member {} out of range (n = {n})",
            v + 1
        )));
    }
    let mut rank = vec![0usize; n];
    for (i, &v) in sorted.iter().enumerate() {
        rank[v] = i + 1;
    }
    let mut block_of = Vec::with_capacity(inst.m());
    for (l, col) in inst.cols().iter().enumerate() {
        let mut hit: Option<usize> = None;
        for &v in &sorted {
            if col[v] > 0 {
                if let Some(prev) = hit {
                    return Err(Error::NotStable {
                        col: l + 1,
                        a: sorted[prev - 1] + 1,
                        b: v + 1,
                    });
                }
                hit = Some(rank[v]);
            }
        }
        block_of.push(hit.unwrap_or(0));
    }
    Ok(StableSet {
        members: sorted,
        block_of,
    })
}

/// Greedy stable set: scan vertices in increasing degree order (ties broken
/// by smallest index) and add a vertex whenever no column joins it to a
/// current member.
pub fn find_stable_set(inst: &Instance) -> StableSet {
    let n = inst.n();
    let mut degree = vec![0usize; n];
    for col in inst.cols() {
        for (k, &a) in col.iter().enumerate() {
            if a > 0 {
                degree[k] += 1;
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (degree[v], v));
    let mut blocked = vec![false; n];
    let mut members = Vec::new();
    for v in order {
        if blocked[v] {
            continue;
        }
        members.push(v);
        for col in inst.cols() {
            if col[v] > 0 {
                for (k, &a) in col.iter().enumerate() {
                    if a > 0 {
                        blocked[k] = true;
                    }
                }
            }
        }
    }
    verify_stable_set(inst, &members).expect("greedy construction is stable")
}

struct PartiteCtx<'a> {
    inst: &'a Instance,
    sset: &'a StableSet,
    /// Row indices outside S, in increasing order; the j' odometer runs
    /// over these positions.
    free_rows: Vec<usize>,
    /// Columns per block: blocks[0] for block 0, blocks[α] for member α.
    blocks: Vec<Vec<usize>>,
}

impl<'a> PartiteCtx<'a> {
    fn new(inst: &'a Instance, sset: &'a StableSet) -> Self {
        let member_set: Vec<bool> = {
            let mut s = vec![false; inst.n()];
            for &v in sset.members() {
                s[v] = true;
            }
            s
        };
        let free_rows = (0..inst.n()).filter(|&v| !member_set[v]).collect();
        let mut blocks = vec![Vec::new(); sset.size() + 1];
        for (l, &b) in sset.block_of().iter().enumerate() {
            blocks[b].push(l);
        }
        Self {
            inst,
            sset,
            free_rows,
            blocks,
        }
    }
}

/// Factor memo keyed by (column, jᵀA_l mod N); only N distinct residues
/// exist per column. The factor depends on j only through that residue.
struct FactorCache {
    polys: Vec<Option<Poly>>,
    modulus: usize,
}

impl FactorCache {
    fn new(m: usize, modulus: usize) -> Self {
        Self {
            polys: vec![None; m * modulus],
            modulus,
        }
    }

    fn get(&mut self, inst: &Instance, l: usize, residue: usize) -> &Poly {
        let idx = l * self.modulus + residue;
        if self.polys[idx].is_none() {
            let n_mod = self.modulus;
            let d = inst.degree();
            let w = inst.col_weight(l);
            let mut p = Poly::zero(n_mod, d);
            for h in 0..n_mod as u64 {
                let t_deg = w * h;
                if t_deg > d {
                    break;
                }
                let s_exp =
                    (n_mod - (residue as u128 * h as u128 % n_mod as u128) as usize) % n_mod;
                p.set_coeff(
                    t_deg,
                    crate::groupring::GroupRingElem::monomial(n_mod, s_exp),
                );
            }
            self.polys[idx] = Some(p);
        }
        self.polys[idx].as_ref().unwrap()
    }
}

fn partite_range(ctx: &PartiteCtx, start: u128, len: u128) -> Result<GroupRing> {
    let inst = ctx.inst;
    let n_mod = inst.modulus();
    let d = inst.degree();
    let mut f = GroupRing::zero(n_mod);
    if len == 0 {
        return Ok(f);
    }
    let mut cache = FactorCache::new(inst.m(), n_mod);

    // Digits of j' over the free rows, position 0 fastest.
    let nf = ctx.free_rows.len();
    let mut digits = vec![0usize; nf];
    {
        let mut idx = start;
        for digit in digits.iter_mut() {
            *digit = (idx % n_mod as u128) as usize;
            idx /= n_mod as u128;
        }
    }
    let y = inst.demands();
    for step in 0..len {
        // Residues j'ᵀA_l mod N (members contribute zero in j').
        let dots: Vec<usize> = inst
            .cols()
            .iter()
            .map(|col| {
                ctx.free_rows
                    .iter()
                    .zip(&digits)
                    .map(|(&row, &jv)| (col[row] as u128 * jv as u128 % n_mod as u128) as usize)
                    .sum::<usize>()
                    % n_mod
            })
            .collect();
        let mut total = Poly::one(n_mod, d);
        for &l in &ctx.blocks[0] {
            total = total.mul(cache.get(inst, l, dots[l]))?;
        }
        for (alpha, &member) in ctx.sset.members().iter().enumerate() {
            let mut f_alpha = Poly::zero(n_mod, d);
            for j_alpha in 0..n_mod {
                let mut p = Poly::one(n_mod, d);
                for &l in &ctx.blocks[alpha + 1] {
                    let col = &inst.cols()[l];
                    let residue = (dots[l]
                        + (j_alpha as u128 * col[member] as u128 % n_mod as u128) as usize)
                        % n_mod;
                    p = p.mul(cache.get(inst, l, residue))?;
                }
                let s_exp = (j_alpha as u128 * y[member].max(0) as u128 % n_mod as u128) as usize;
                f_alpha.add_assign_poly(&p.mul_monomial(s_exp))?;
            }
            total = total.mul(&f_alpha)?;
        }
        let ydot = ctx
            .free_rows
            .iter()
            .zip(&digits)
            .map(|(&row, &jv)| (y[row].max(0) as u128 * jv as u128 % n_mod as u128) as usize)
            .sum::<usize>()
            % n_mod;
        f.add_assign_elem(&total.coeff(d).shift(ydot))?;
        if step + 1 < len {
            let mut pos = 0;
            while pos < nf {
                digits[pos] += 1;
                if digits[pos] == n_mod {
                    digits[pos] = 0;
                    pos += 1;
                } else {
                    break;
                }
            }
        }
    }
    Ok(f)
}

/// Counts integer points via the factorized sweep over j' in
/// {0,...,N-1}^{n-|S|}. Must agree with the plain sweep exactly, including
/// the pre-reduction scaled coefficients.
pub fn count_partite(inst: &Instance, sset: &StableSet, threads: usize) -> Result<CountReport> {
    let t0 = Instant::now();
    if inst.is_infeasible() {
        let mut report = CountReport::new(Int::zero(), Method::Partite);
        report.elapsed = t0.elapsed();
        return Ok(report);
    }
    let n_mod = inst.modulus();
    let ctx = PartiteCtx::new(inst, sset);
    let total = checked_terms(n_mod, ctx.free_rows.len())?;
    let workers = threads.clamp(1, total.clamp(1, 512) as usize);
    let f = if workers <= 1 {
        partite_range(&ctx, 0, total)?
    } else {
        let chunk = total / workers as u128;
        let rem = total % workers as u128;
        let parts: Vec<Result<GroupRing>> = std::thread::scope(|scope| {
            let mut handles = Vec::new();
            let mut start = 0u128;
            for w in 0..workers {
                let len = chunk + u128::from((w as u128) < rem);
                let ctx_ref = &ctx;
                handles.push(scope.spawn(move || partite_range(ctx_ref, start, len)));
                start += len;
            }
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let mut acc = GroupRing::zero(n_mod);
        for part in parts {
            acc.add_assign_elem(&part?)?;
        }
        acc
    };
    let scale = inst.scale();
    let reduction = reduce_to_count(&f, &scale)?;
    let slots = (inst.degree() + 1) * n_mod as u64;
    Ok(CountReport {
        count: reduction.count,
        modulus: n_mod,
        degree: inst.degree(),
        scale,
        method: Method::Partite,
        scaled_coeffs: Some(f.coeffs().to_vec()),
        trace: reduction
            .steps
            .into_iter()
            .map(|(index, subtracted)| ReductionStep { index, subtracted })
            .collect(),
        sweep_terms: total,
        peak_live_values: (workers as u64) * (sset.size() as u64 + 3) * slots
            + inst.m() as u64 * n_mod as u64 * slots,
        table_cells: None,
        elapsed: t0.elapsed(),
    })
}

fn checked_terms(base: usize, exp: usize) -> Result<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u128).ok_or(Error::ResourceLimit {
            needed: u128::MAX,
            cap: u128::MAX,
        })?;
    }
    Ok(acc)
}
