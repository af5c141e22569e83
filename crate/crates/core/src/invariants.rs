//! The genus-zero invariant by two independent algorithms: exact monomial
//! rewriting against the cone structure, and the wall-crossing recursion
//! over a parameter path from the empty chamber. The rank-one closed form
//! for arbitrary genus lives here as well.

use crate::error::Error;
use crate::lattice::{
    det_abs_in_lattice, dot_rat_int, int_rows_to_rat, rank_rational, rat_pow, solve_rational,
    Int, Rat,
};
use itertools::Itertools;
use crate::poly::MultiPoly;
use crate::residue::{int_to_i64, reduce_alpha0_with, weight_monomial};
use crate::toric::{
    cone_contains, is_regular, path_crossings, wall_reduction, WeightSystem,
};
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

/// An ordered partition of the weight indices into spanning blocks.
pub type BlockPartition = Vec<Vec<usize>>;

/// Degree data of a lattice class: the pairing vector and the expected
/// dimension of the associated evaluation problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeData {
    pub lambda: Vec<Int>,
    pub d: Vec<Int>,
    pub expected_dim: Int,
}

impl DegreeData {
    pub fn new(ws: &WeightSystem, lambda: &[Int]) -> Self {
        DegreeData {
            lambda: lambda.to_vec(),
            d: ws.degrees(lambda),
            expected_dim: ws.expected_dim(lambda),
        }
    }
}

/// A formal rational combination of weight monomials `w^ell`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassCombo {
    pub terms: Vec<(Rat, Vec<u32>)>,
}

impl ClassCombo {
    pub fn monomial(ell: Vec<u32>) -> Self {
        ClassCombo {
            terms: vec![(Rat::one(), ell)],
        }
    }

    pub fn new(terms: Vec<(Rat, Vec<u32>)>) -> Self {
        ClassCombo { terms }
    }

    /// Expand into a polynomial class on the torus Lie algebra.
    pub fn to_poly(&self, ws: &WeightSystem) -> MultiPoly {
        let mut out = MultiPoly::zero(ws.k());
        for (c, ell) in &self.terms {
            out = out.add(&weight_monomial(ws, ell).scale(c));
        }
        out
    }
}

/// Evaluation options: the seed drives every randomized choice (path
/// jitters), the memo cap bounds the rewriting cache.
#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    pub seed: u64,
    pub memo_cap: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            seed: 0,
            memo_cap: 1 << 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Direct,
    Wallcross,
    Checked,
}

/// Enumerate the ordered partitions of the weight indices satisfying the
/// dimension condition, optionally filtered by the per-block degree sums.
/// Blocks are produced in ascending order of their least index, depth
/// first, so the first result is the canonical lexicographic choice.
fn enumerate_partitions(
    ws: &WeightSystem,
    degree_filter: Option<(&[i64], &[u32])>,
    stop_at_first: bool,
) -> Vec<Vec<Vec<usize>>> {
    let k = ws.k();
    let n = ws.n();
    let mut results = Vec::new();
    if k == 0 {
        if n == 0 {
            results.push(vec![]);
        }
        return results;
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut span: Vec<Vec<Rat>> = Vec::new();
    let remaining: Vec<usize> = (0..n).collect();
    recurse_partitions(
        ws,
        degree_filter,
        stop_at_first,
        &remaining,
        &mut span,
        &mut blocks,
        &mut results,
    );
    results
}

fn recurse_partitions(
    ws: &WeightSystem,
    degree_filter: Option<(&[i64], &[u32])>,
    stop_at_first: bool,
    remaining: &[usize],
    span: &mut Vec<Vec<Rat>>,
    blocks: &mut Vec<Vec<usize>>,
    results: &mut Vec<Vec<Vec<usize>>>,
) {
    let k = ws.k();
    let j = blocks.len();
    if j == k {
        if remaining.is_empty() {
            results.push(blocks.clone());
        }
        return;
    }
    if remaining.is_empty() {
        return;
    }
    let base_rank = j;
    // every remaining weight must lie outside the current span
    for &nu in remaining {
        let mut with = span.clone();
        with.push(rat_row(ws.weight(nu)));
        if rank_rational(&with) == base_rank {
            return;
        }
    }
    // group remaining indices into one-dimensional increments over the span
    let mut unassigned: Vec<usize> = remaining.to_vec();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    while let Some(&head) = unassigned.first() {
        let mut with_head = span.clone();
        with_head.push(rat_row(ws.weight(head)));
        let mut class = vec![head];
        let mut rest = Vec::new();
        for &nu in &unassigned[1..] {
            let mut probe = with_head.clone();
            probe.push(rat_row(ws.weight(nu)));
            if rank_rational(&probe) == base_rank + 1 {
                class.push(nu);
            } else {
                rest.push(nu);
            }
        }
        classes.push(class);
        unassigned = rest;
    }
    for class in classes {
        if let Some((d, ell)) = degree_filter {
            let s: i64 = class.iter().map(|&nu| ell[nu] as i64 - d[nu] - 1).sum();
            if s != -1 {
                continue;
            }
        }
        let next_remaining: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|nu| !class.contains(nu))
            .collect();
        let added = class.len();
        for &nu in &class {
            span.push(rat_row(ws.weight(nu)));
        }
        blocks.push(class);
        recurse_partitions(
            ws,
            degree_filter,
            stop_at_first,
            &next_remaining,
            span,
            blocks,
            results,
        );
        blocks.pop();
        for _ in 0..added {
            span.pop();
        }
        if stop_at_first && !results.is_empty() {
            return;
        }
    }
}

fn rat_row(w: &[Int]) -> Vec<Rat> {
    w.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

/// All ordered partitions in the admissible set of `(lambda, ell)`.
pub fn partitions(ws: &WeightSystem, lambda: &[Int], ell: &[u32]) -> Vec<BlockPartition> {
    let d: Vec<i64> = ws.degrees(lambda).iter().map(int_to_i64).collect();
    enumerate_partitions(ws, Some((&d, ell)), false)
}

/// Fast existence test for the admissible set.
pub fn partitions_exist(ws: &WeightSystem, lambda: &[Int], ell: &[u32]) -> bool {
    let d: Vec<i64> = ws.degrees(lambda).iter().map(int_to_i64).collect();
    !enumerate_partitions(ws, Some((&d, ell)), true).is_empty()
}

/// The rewriting complexity measure driving the induction.
pub fn i_index(ws: &WeightSystem, lambda: &[Int], ell: &[u32]) -> i64 {
    let d = ws.degrees(lambda);
    let mut total = 0i64;
    for (nu, &l) in ell.iter().enumerate() {
        let dn = int_to_i64(&d[nu]);
        if dn >= 0 {
            total += (l as i64 - dn - 1).max(0);
        } else {
            total += l as i64;
        }
    }
    total
}

struct DirectCtx<'a> {
    ws: &'a WeightSystem,
    tau: &'a [Rat],
    d: Vec<i64>,
    memo: HashMap<Vec<u32>, (Rat, u64)>,
    touch: u64,
    memo_cap: usize,
}

impl DirectCtx<'_> {
    fn memo_get(&mut self, ell: &[u32]) -> Option<Rat> {
        self.touch += 1;
        let stamp = self.touch;
        self.memo.get_mut(ell).map(|slot| {
            slot.1 = stamp;
            slot.0.clone()
        })
    }

    fn memo_put(&mut self, ell: Vec<u32>, value: Rat) {
        self.touch += 1;
        if self.memo.len() >= self.memo_cap {
            // drop the least recently used half
            let mut stamps: Vec<u64> = self.memo.values().map(|v| v.1).collect();
            stamps.sort_unstable();
            let cutoff = stamps[stamps.len() / 2];
            self.memo.retain(|_, v| v.1 > cutoff);
        }
        self.memo.insert(ell, (value, self.touch));
    }
}

/// Algorithm A: evaluate by the shift identity plus memoized monomial
/// rewriting against the cone structure. Exact; no path choices are made.
pub fn invariant_direct(
    ws: &WeightSystem,
    tau: &[Rat],
    lambda: &[Int],
    alpha: &ClassCombo,
    opts: &EvalOptions,
) -> Result<Rat, Error> {
    if !is_regular(ws, tau) {
        return Err(Error::SingularParameter);
    }
    if ws.k() == 0 {
        // empty system: only the constant class in degree zero survives
        let mut total = Rat::zero();
        for (c, ell) in &alpha.terms {
            if ell.iter().all(|&x| x == 0) {
                total += c.clone();
            }
        }
        return Ok(total);
    }
    let m = int_to_i64(&ws.expected_dim(lambda));
    let d: Vec<i64> = ws.degrees(lambda).iter().map(int_to_i64).collect();

    // shift: lambda' = c * witness, c the least positive integer making
    // every shifted degree at least -1 (the shifted exponents are then
    // automatically nonnegative)
    let zeta = ws.witness().to_vec();
    let zeta_deg: Vec<i64> = ws.degrees(&zeta).iter().map(int_to_i64).collect();
    let mut c_shift = 1i64;
    for (nu, &dn) in d.iter().enumerate() {
        let needed = -1 - dn;
        if needed > 0 {
            let per = zeta_deg[nu];
            debug_assert!(per >= 1);
            c_shift = c_shift.max((needed + per - 1) / per);
        }
    }
    let lambda_shifted: Vec<Int> = lambda
        .iter()
        .zip(&zeta)
        .map(|(l, z)| l + z * Int::from(c_shift))
        .collect();
    let d_shifted: Vec<i64> = ws
        .degrees(&lambda_shifted)
        .iter()
        .map(int_to_i64)
        .collect();
    debug_assert!(d_shifted.iter().all(|&x| x >= -1));
    let dprime: Vec<i64> = d_shifted.iter().zip(&d).map(|(a, b)| a - b).collect();

    let mut ctx = DirectCtx {
        ws,
        tau,
        d: d_shifted,
        memo: HashMap::new(),
        touch: 0,
        memo_cap: opts.memo_cap,
    };
    let mut total = Rat::zero();
    for (coeff, ell) in &alpha.terms {
        assert_eq!(ell.len(), ws.n());
        let deg: i64 = ell.iter().map(|&x| x as i64).sum();
        if deg != m {
            continue;
        }
        let shifted_ell: Vec<u32> = ell
            .iter()
            .zip(&dprime)
            .map(|(&l, &dp)| {
                debug_assert!(dp >= 0);
                l + dp as u32
            })
            .collect();
        total += coeff * rewrite_eval(&mut ctx, shifted_ell)?;
    }
    Ok(total)
}

fn rewrite_eval(ctx: &mut DirectCtx, ell: Vec<u32>) -> Result<Rat, Error> {
    if let Some(v) = ctx.memo_get(&ell) {
        return Ok(v);
    }
    let ws = ctx.ws;
    let k = ws.k();
    let value;
    if ell
        .iter()
        .zip(&ctx.d)
        .all(|(&l, &dn)| (l as i64) <= dn + 1)
    {
        // basis case: at matching degree the slack terms sum to -k, so at
        // most k indices carry slack; fewer than k means some index holds
        // two units and every cascade has a slack-free block, hence zero
        let j_set: Vec<usize> = (0..ws.n())
            .filter(|&nu| (ell[nu] as i64) <= ctx.d[nu])
            .collect();
        value = if j_set.len() == k && cone_contains(ws, &j_set, ctx.tau).is_some() {
            // a regular parameter inside the cone forces independence
            let det = det_abs_in_lattice(
                &j_set.iter().map(|&nu| ws.weight(nu).to_vec()).collect::<Vec<_>>(),
            );
            Rat::new(Int::one(), det)
        } else {
            Rat::zero()
        };
    } else if let Some(expansion) = rewrite_step_with(ws, &ctx.d, &ell) {
        let mut acc = Rat::zero();
        let base_index = i_index_from(&ctx.d, &ell);
        for (c, ell_next) in expansion {
            debug_assert!(i_index_from(&ctx.d, &ell_next) < base_index);
            acc += c * rewrite_eval(ctx, ell_next)?;
        }
        value = acc;
    } else {
        // the slack indices span less than the full dual space: every
        // ordered partition then has a block without slack, whose factors
        // all sit in the numerator, so the residue stage at that block is
        // the residue of a polynomial and the whole cascade vanishes
        value = Rat::zero();
    }
    ctx.memo_put(ell, value.clone());
    Ok(value)
}

fn i_index_from(d: &[i64], ell: &[u32]) -> i64 {
    ell.iter()
        .zip(d)
        .map(|(&l, &dn)| {
            if dn >= 0 {
                (l as i64 - dn - 1).max(0)
            } else {
                l as i64
            }
        })
        .sum()
}

/// One substitution step of the rewriting: expand one factor of the
/// smallest over-degree index over the lexicographically first independent
/// basis of slack indices. `None` on basis-case monomials and when the
/// slack indices do not span the dual space.
///
/// Slack pivots have nonnegative pairing degrees, so adding a unit of
/// exponent to a pivot keeps its rewriting complexity at zero while the
/// over-degree index loses one; the induction measure strictly drops.
pub(crate) fn rewrite_step_with(
    ws: &WeightSystem,
    d: &[i64],
    ell: &[u32],
) -> Option<Vec<(Rat, Vec<u32>)>> {
    let k = ws.k();
    let nu0 = (0..ws.n()).find(|&nu| ell[nu] as i64 > d[nu] + 1)?;
    let slack: Vec<usize> = (0..ws.n())
        .filter(|&nu| (ell[nu] as i64) <= d[nu])
        .collect();
    let pivots = slack.iter().copied().combinations(k).find(|subset| {
        let rows = int_rows_to_rat(
            &subset
                .iter()
                .map(|&nu| ws.weight(nu).to_vec())
                .collect::<Vec<_>>(),
        );
        rank_rational(&rows) == k
    })?;
    // solve w_{nu0} = sum_j coeff_j w_{pivot_j}
    let a: Vec<Vec<Rat>> = (0..k)
        .map(|i| {
            pivots
                .iter()
                .map(|&nu| Rat::from_integer(ws.weight(nu)[i].clone()))
                .collect()
        })
        .collect();
    let b: Vec<Rat> = ws
        .weight(nu0)
        .iter()
        .map(|x| Rat::from_integer(x.clone()))
        .collect();
    let coeffs = solve_rational(&a, &b).expect("pivots form a basis");
    let mut expansion = Vec::new();
    for (j, &nu_j) in pivots.iter().enumerate() {
        if coeffs[j].is_zero() {
            continue;
        }
        let mut ell_next = ell.to_vec();
        ell_next[nu0] -= 1;
        ell_next[nu_j] += 1;
        expansion.push((coeffs[j].clone(), ell_next));
    }
    Some(expansion)
}

/// One-step expansion of the rewriting relation, exposed for conservation
/// checks: the value of the class equals the weighted sum of the values of
/// the expansion.
pub fn rewrite_step(
    ws: &WeightSystem,
    lambda: &[Int],
    ell: &[u32],
) -> Option<Vec<(Rat, Vec<u32>)>> {
    let d: Vec<i64> = ws.degrees(lambda).iter().map(int_to_i64).collect();
    rewrite_step_with(ws, &d, ell)
}

const OUTSIDE_RETRIES: usize = 16;

/// Start point for the wall-crossing path: the negated monotone parameter,
/// jittered while it is singular.
fn outside_start(ws: &WeightSystem, seed: u64) -> Result<Vec<Rat>, Error> {
    let base: Vec<Rat> = ws
        .monotone_tau()
        .iter()
        .map(|x| Rat::from_integer(-x.clone()))
        .collect();
    let all: Vec<usize> = (0..ws.n()).collect();
    for retry in 0..=OUTSIDE_RETRIES {
        let cand: Vec<Rat> = if retry == 0 {
            base.clone()
        } else {
            let mut state = seed
                .wrapping_mul(0x9E3779B97F4A7C15)
                .wrapping_add(0xABCD + retry as u64);
            let mut next = move || {
                state = state.wrapping_add(0x9E3779B97F4A7C15);
                let mut z = state;
                z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
                (z ^ (z >> 31)) % 7
            };
            let prime = 1_000_003i64 + 30 * retry as i64;
            base.iter()
                .map(|x| x + Rat::new(Int::from(next() as i64 - 3), Int::from(prime)))
                .collect()
        };
        if is_regular(ws, &cand) && cone_contains(ws, &all, &cand).is_none() {
            return Ok(cand);
        }
    }
    Err(Error::DegeneratePath)
}

/// Algorithm B: wall-crossing recursion. Evaluates several polynomial
/// classes through one traversal of the crossing tree.
fn eval_wallcross_many(
    ws: &WeightSystem,
    tau: &[Rat],
    lambda: &[Int],
    alphas: &[MultiPoly],
    seed: u64,
) -> Result<Vec<Rat>, Error> {
    if ws.k() == 0 {
        return Ok(alphas.iter().map(MultiPoly::constant_term).collect());
    }
    let mut totals = vec![Rat::zero(); alphas.len()];
    if alphas.iter().all(MultiPoly::is_zero) {
        return Ok(totals);
    }
    let m = int_to_i64(&ws.expected_dim(lambda));
    let gated: Vec<MultiPoly> = alphas
        .iter()
        .map(|a| {
            if m < 0 {
                MultiPoly::zero(ws.k())
            } else {
                a.homogeneous_component(m as u32)
            }
        })
        .collect();
    if gated.iter().all(MultiPoly::is_zero) {
        return Ok(totals);
    }
    let start = outside_start(ws, seed)?;
    let crossings = path_crossings(ws, &start, tau, seed)?;
    for crossing in &crossings {
        let reduction = wall_reduction(ws, &crossing.wall, &crossing.e1, lambda, &crossing.tau0)?;
        let reduced: Vec<MultiPoly> = gated
            .iter()
            .map(|a| reduce_alpha0_with(ws, &reduction, lambda, a))
            .collect::<Result<_, _>>()?;
        let contributions = eval_wallcross_many(
            &reduction.system,
            &reduction.tau0,
            &reduction.lambda0,
            &reduced,
            seed,
        )?;
        for (t, c) in totals.iter_mut().zip(contributions) {
            *t += c;
        }
    }
    Ok(totals)
}

/// Algorithm B entry point on a class combination.
pub fn invariant_wallcross(
    ws: &WeightSystem,
    tau: &[Rat],
    lambda: &[Int],
    alpha: &ClassCombo,
    opts: &EvalOptions,
) -> Result<Rat, Error> {
    if !is_regular(ws, tau) {
        return Err(Error::SingularParameter);
    }
    let poly = alpha.to_poly(ws);
    Ok(eval_wallcross_many(ws, tau, lambda, &[poly], opts.seed)?.remove(0))
}

/// Evaluate a bare polynomial class by the wall-crossing algorithm.
pub fn invariant_wallcross_poly(
    ws: &WeightSystem,
    tau: &[Rat],
    lambda: &[Int],
    alpha: &MultiPoly,
    opts: &EvalOptions,
) -> Result<Rat, Error> {
    if !is_regular(ws, tau) {
        return Err(Error::SingularParameter);
    }
    Ok(eval_wallcross_many(ws, tau, lambda, &[alpha.clone()], opts.seed)?.remove(0))
}

/// Batched wall-crossing evaluation of many monomials, sharing the
/// crossing tree.
pub fn invariant_wallcross_batch(
    ws: &WeightSystem,
    tau: &[Rat],
    lambda: &[Int],
    ells: &[Vec<u32>],
    opts: &EvalOptions,
) -> Result<Vec<Rat>, Error> {
    if !is_regular(ws, tau) {
        return Err(Error::SingularParameter);
    }
    let polys: Vec<MultiPoly> = ells.iter().map(|e| weight_monomial(ws, e)).collect();
    eval_wallcross_many(ws, tau, lambda, &polys, opts.seed)
}

/// Dispatcher over the two algorithms; checked mode runs both and demands
/// exact agreement.
pub fn invariant(
    ws: &WeightSystem,
    tau: &[Rat],
    lambda: &[Int],
    alpha: &ClassCombo,
    mode: Mode,
    opts: &EvalOptions,
) -> Result<Rat, Error> {
    match mode {
        Mode::Direct => invariant_direct(ws, tau, lambda, alpha, opts),
        Mode::Wallcross => invariant_wallcross(ws, tau, lambda, alpha, opts),
        Mode::Checked => {
            let direct = invariant_direct(ws, tau, lambda, alpha, opts)?;
            let wallcross = invariant_wallcross(ws, tau, lambda, alpha, opts)?;
            if direct != wallcross {
                return Err(Error::AlgorithmMismatch {
                    direct: Box::new(direct),
                    wallcross: Box::new(wallcross),
                });
            }
            Ok(direct)
        }
    }
}

/// Closed form for a rank-one action with positive weights, arbitrary
/// genus: `(l_1 + ... + l_n)^g / prod l_nu^{d l_nu + 1 - g}` in the
/// nonempty chamber.
pub fn rank1_genus_invariant(weights: &[u32], d: u32, g: u32) -> Result<Rat, Error> {
    if weights.is_empty() || weights.iter().any(|&l| l == 0) {
        return Err(Error::Parse("weights must be positive integers".into()));
    }
    let m: i64 = weights
        .iter()
        .map(|&l| d as i64 * l as i64 + 1 - g as i64)
        .sum::<i64>()
        + g as i64
        - 1;
    if m < 0 {
        return Err(Error::NegativeExpectedDimension);
    }
    let total: i64 = weights.iter().map(|&l| l as i64).sum();
    let mut value = rat_pow(&Rat::from_integer(Int::from(total)), g as i64);
    for &l in weights {
        let e = d as i64 * l as i64 + 1 - g as i64;
        value /= rat_pow(&Rat::from_integer(Int::from(l)), e);
    }
    Ok(value)
}

/// Report of a single-wall crossing identity check.
#[derive(Debug, Clone)]
pub struct WallcrossReport {
    pub tau0: Vec<Rat>,
    pub tau1: Vec<Rat>,
    pub epsilon: Rat,
    pub e1: Vec<Int>,
    /// True when the supplied direction paired negatively with the stored
    /// wall normal and the normal was flipped to match it.
    pub orientation_flipped: bool,
    pub value_plus: Rat,
    pub value_minus: Rat,
    pub value_reduced: Rat,
    pub pass: bool,
}

/// Verify the crossing identity at one wall: the jump of the invariant
/// across a generic interior wall point equals the reduced invariant of
/// the reduced class. The two sides and the reduced term are computed
/// independently (both sides by the rewriting algorithm, the reduced term
/// by reduction plus the rewriting algorithm on the reduced system).
pub fn wallcross_check(
    ws: &WeightSystem,
    wall: &crate::toric::Wall,
    tau1: &[Rat],
    lambda: &[Int],
    alpha: &ClassCombo,
    opts: &EvalOptions,
) -> Result<WallcrossReport, Error> {
    let pairing = dot_rat_int(tau1, &wall.normal);
    if pairing.is_zero() {
        return Err(Error::DegeneratePath);
    }
    let orientation_flipped = pairing.is_negative();
    let e1: Vec<Int> = if orientation_flipped {
        wall.normal.iter().map(|x| -x.clone()).collect()
    } else {
        wall.normal.clone()
    };

    let walls = crate::toric::enumerate_walls(ws);
    let tau0 = generic_wall_point(ws, wall, &walls, opts.seed)?;

    // epsilon: half the nearest other wall-span crossing along the line,
    // then shrink until both endpoints are regular
    let mut eps = Rat::one();
    for other in &walls {
        if other.normal == wall.normal {
            continue;
        }
        let den = dot_rat_int(tau1, &other.normal);
        if den.is_zero() {
            continue;
        }
        let t = -dot_rat_int(&tau0, &other.normal) / den;
        if !t.is_zero() {
            let abs_t = if t.is_negative() { -t.clone() } else { t.clone() };
            let half = abs_t / Rat::from_integer(Int::from(2));
            if half < eps {
                eps = half;
            }
        }
    }
    let half = Rat::new(Int::one(), Int::from(2));
    let mut shrink = 0;
    loop {
        let plus: Vec<Rat> = tau0.iter().zip(tau1).map(|(a, b)| a + b * &eps).collect();
        let minus: Vec<Rat> = tau0.iter().zip(tau1).map(|(a, b)| a - b * &eps).collect();
        if is_regular(ws, &plus) && is_regular(ws, &minus) {
            break;
        }
        eps = &eps * &half;
        shrink += 1;
        if shrink > 64 {
            return Err(Error::DegeneratePath);
        }
    }
    let tau_plus: Vec<Rat> = tau0.iter().zip(tau1).map(|(a, b)| a + b * &eps).collect();
    let tau_minus: Vec<Rat> = tau0.iter().zip(tau1).map(|(a, b)| a - b * &eps).collect();

    let value_plus = invariant_direct(ws, &tau_plus, lambda, alpha, opts)?;
    let value_minus = invariant_direct(ws, &tau_minus, lambda, alpha, opts)?;

    let reduction = wall_reduction(ws, wall, &e1, lambda, &tau0)?;
    let alpha_poly = alpha.to_poly(ws);
    let alpha0 = reduce_alpha0_with(ws, &reduction, lambda, &alpha_poly)?;
    let value_reduced = if reduction.system.k() == 0 {
        alpha0.constant_term()
    } else {
        let combo = express_in_weight_monomials(&reduction.system, &alpha0)?;
        invariant_direct(
            &reduction.system,
            &reduction.tau0,
            &reduction.lambda0,
            &combo,
            opts,
        )?
    };

    let pass = &value_plus - &value_minus == value_reduced;
    Ok(WallcrossReport {
        tau0,
        tau1: tau1.to_vec(),
        epsilon: eps,
        e1,
        orientation_flipped,
        value_plus,
        value_minus,
        value_reduced,
        pass,
    })
}

/// A generic interior point of the wall cone: regular for the reduced
/// system and in no other wall.
fn generic_wall_point(
    ws: &WeightSystem,
    wall: &crate::toric::Wall,
    walls: &[crate::toric::Wall],
    seed: u64,
) -> Result<Vec<Rat>, Error> {
    let k = ws.k();
    if wall.indices.is_empty() {
        // rank-one wall at the origin
        return Ok(vec![Rat::zero(); k]);
    }
    for retry in 0..=OUTSIDE_RETRIES {
        let mut state = seed
            .wrapping_mul(0x9E3779B97F4A7C15)
            .wrapping_add(0x5EED + retry as u64);
        let mut next = move || {
            state = state.wrapping_add(0x9E3779B97F4A7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
            (z ^ (z >> 31)) % 5
        };
        let mut tau0 = vec![Rat::zero(); k];
        for &nu in &wall.indices {
            let c = if retry == 0 {
                Rat::one()
            } else {
                Rat::one() + Rat::new(Int::from(next() as i64 + 1), Int::from(7 + retry as i64))
            };
            for (t, w) in tau0.iter_mut().zip(ws.weight(nu)) {
                *t += &c * Rat::from_integer(w.clone());
            }
        }
        // in no other wall
        let clean = walls.iter().all(|other| {
            other.normal == wall.normal
                || !dot_rat_int(&tau0, &other.normal).is_zero()
                || cone_contains(ws, &other.indices, &tau0).is_none()
        });
        if !clean {
            continue;
        }
        // regular for the reduced system
        if k >= 2 {
            match wall_reduction(ws, wall, &wall.normal, &vec![Int::zero(); k], &tau0) {
                Ok(_) => return Ok(tau0),
                Err(_) => continue,
            }
        }
        return Ok(tau0);
    }
    Err(Error::DegeneratePath)
}

/// Express a homogeneous polynomial class as a rational combination of
/// weight monomials (possible because the weights span the dual space).
pub fn express_in_weight_monomials(
    ws: &WeightSystem,
    alpha: &MultiPoly,
) -> Result<ClassCombo, Error> {
    if alpha.is_zero() {
        return Ok(ClassCombo::new(vec![]));
    }
    assert!(alpha.is_homogeneous(), "class must be homogeneous");
    let degree = alpha.total_degree().unwrap();
    let k = ws.k();
    let n = ws.n();

    // basis monomials of the polynomial space in k variables
    let poly_basis = exponents_of_degree(k, degree);
    let index_of: HashMap<Vec<u32>, usize> = poly_basis
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();

    let compositions = exponents_of_degree(n, degree);
    let mut columns: Vec<Vec<Rat>> = Vec::with_capacity(compositions.len());
    for ell in &compositions {
        let expanded = weight_monomial(ws, ell);
        let mut col = vec![Rat::zero(); poly_basis.len()];
        for (e, c) in expanded.terms() {
            col[index_of[e]] = c.clone();
        }
        columns.push(col);
    }
    let mut rhs = vec![Rat::zero(); poly_basis.len()];
    for (e, c) in alpha.terms() {
        rhs[index_of[e]] = c.clone();
    }
    let a: Vec<Vec<Rat>> = (0..poly_basis.len())
        .map(|r| columns.iter().map(|col| col[r].clone()).collect())
        .collect();
    let sol = solve_rational(&a, &rhs).ok_or_else(|| {
        Error::ConstructionFailure("weight monomials span every degree".into())
    })?;
    let terms: Vec<(Rat, Vec<u32>)> = sol
        .into_iter()
        .zip(compositions)
        .filter(|(c, _)| !c.is_zero())
        .collect();
    Ok(ClassCombo::new(terms))
}

/// All exponent vectors of the given total degree, ascending
/// lexicographic.
pub fn exponents_of_degree(vars: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if vars == 0 {
        if degree == 0 {
            out.push(vec![]);
        }
        return out;
    }
    let mut current = vec![0u32; vars];
    fill_exponents(&mut out, &mut current, 0, degree);
    out
}

fn fill_exponents(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, pos: usize, left: u32) {
    if pos == current.len() - 1 {
        current[pos] = left;
        out.push(current.clone());
        return;
    }
    for v in 0..=left {
        current[pos] = v;
        fill_exponents(out, current, pos + 1, left - v);
    }
    current[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{ivec, rat, rat_int, rvec};

    fn example_threefold() -> WeightSystem {
        WeightSystem::from_i64(2, &[&[1, 0], &[1, 1], &[0, 1], &[0, 1], &[0, 1]]).unwrap()
    }

    fn opts() -> EvalOptions {
        EvalOptions::default()
    }

    #[test]
    fn partition_examples() {
        let cp2 = WeightSystem::from_i64(1, &[&[1], &[1], &[1]]).unwrap();
        let parts = partitions(&cp2, &ivec(&[1]), &[1, 2, 2]);
        assert_eq!(parts, vec![vec![vec![0, 1, 2]]]);

        let ws = example_threefold();
        assert!(!partitions_exist(&ws, &ivec(&[0, 0]), &[1, 1, 1, 0, 0]));
        let parts = partitions(&ws, &ivec(&[0, 0]), &[3, 0, 0, 0, 0]);
        assert!(!parts.is_empty());
        assert!(parts.contains(&vec![vec![1], vec![0, 2, 3, 4]]));
        for p in &parts {
            assert!(crate::residue::partition_satisfies_dimension(&ws, p));
        }
    }

    #[test]
    fn i_index_examples() {
        let cp2 = WeightSystem::from_i64(1, &[&[1], &[1], &[1]]).unwrap();
        // all ell <= d + 1 with d >= 0
        assert_eq!(i_index(&cp2, &ivec(&[1]), &[2, 2, 1]), 0);
        assert_eq!(i_index(&cp2, &ivec(&[0]), &[2, 0, 0]), 1);
        let wps = WeightSystem::from_i64(1, &[&[1], &[2]]).unwrap();
        assert_eq!(i_index(&wps, &ivec(&[-1]), &[3, 0]), 3);
    }

    #[test]
    fn direct_examples_rank_one() {
        let cp1 = WeightSystem::from_i64(1, &[&[1], &[1]]).unwrap();
        let v = invariant_direct(
            &cp1,
            &rvec(&[1]),
            &ivec(&[1]),
            &ClassCombo::monomial(vec![2, 1]),
            &opts(),
        )
        .unwrap();
        assert_eq!(v, rat_int(1));

        let wps = WeightSystem::from_i64(1, &[&[1], &[2]]).unwrap();
        let v = invariant_direct(
            &wps,
            &rvec(&[1]),
            &ivec(&[0]),
            &ClassCombo::monomial(vec![1, 0]),
            &opts(),
        )
        .unwrap();
        assert_eq!(v, rat(1, 2));

        let wps3 = WeightSystem::from_i64(1, &[&[1], &[2], &[3]]).unwrap();
        let v = invariant_direct(
            &wps3,
            &rvec(&[1]),
            &ivec(&[0]),
            &ClassCombo::monomial(vec![2, 0, 0]),
            &opts(),
        )
        .unwrap();
        assert_eq!(v, rat(1, 6));
    }

    #[test]
    fn direct_examples_threefold() {
        let ws = example_threefold();
        let v = invariant_direct(
            &ws,
            &rvec(&[2, 4]),
            &ivec(&[0, 0]),
            &ClassCombo::monomial(vec![1, 1, 1, 0, 0]),
            &opts(),
        )
        .unwrap();
        assert_eq!(v, Rat::zero());
    }

    #[test]
    fn direct_outside_image_is_zero() {
        let cp1 = WeightSystem::from_i64(1, &[&[1], &[1]]).unwrap();
        let v = invariant_direct(
            &cp1,
            &rvec(&[-1]),
            &ivec(&[1]),
            &ClassCombo::monomial(vec![2, 1]),
            &opts(),
        )
        .unwrap();
        assert_eq!(v, Rat::zero());
    }

    #[test]
    fn wallcross_examples_rank_one() {
        let cp1 = WeightSystem::from_i64(1, &[&[1], &[1]]).unwrap();
        let v = invariant_wallcross(
            &cp1,
            &rvec(&[1]),
            &ivec(&[1]),
            &ClassCombo::monomial(vec![2, 1]),
            &opts(),
        )
        .unwrap();
        assert_eq!(v, rat_int(1));

        let wps = WeightSystem::from_i64(1, &[&[1], &[2]]).unwrap();
        let v = invariant_wallcross(
            &wps,
            &rvec(&[1]),
            &ivec(&[0]),
            &ClassCombo::monomial(vec![1, 0]),
            &opts(),
        )
        .unwrap();
        assert_eq!(v, rat(1, 2));
    }

    #[test]
    fn checked_mode_agreement_threefold() {
        let ws = example_threefold();
        let tau = rvec(&[2, 4]);
        for ell in exponents_of_degree(5, 3) {
            let v = invariant(
                &ws,
                &tau,
                &ivec(&[0, 0]),
                &ClassCombo::monomial(ell.clone()),
                Mode::Checked,
                &opts(),
            )
            .unwrap();
            let w = invariant_direct(
                &ws,
                &tau,
                &ivec(&[0, 0]),
                &ClassCombo::monomial(ell),
                &opts(),
            )
            .unwrap();
            assert_eq!(v, w);
        }
    }

    #[test]
    fn degree_gate() {
        let cp2 = WeightSystem::from_i64(1, &[&[1], &[1], &[1]]).unwrap();
        // |ell| = 3 but m = 5 for lambda = 1
        for mode in [Mode::Direct, Mode::Wallcross] {
            let v = invariant(
                &cp2,
                &rvec(&[1]),
                &ivec(&[1]),
                &ClassCombo::monomial(vec![1, 1, 1]),
                mode,
                &opts(),
            )
            .unwrap();
            assert_eq!(v, Rat::zero());
        }
    }

    #[test]
    fn singular_parameter_rejected() {
        let cp2 = WeightSystem::from_i64(1, &[&[1], &[1], &[1]]).unwrap();
        assert!(matches!(
            invariant_direct(
                &cp2,
                &rvec(&[0]),
                &ivec(&[1]),
                &ClassCombo::monomial(vec![1, 2, 2]),
                &opts()
            ),
            Err(Error::SingularParameter)
        ));
    }

    #[test]
    fn rank1_closed_form_examples() {
        assert_eq!(rank1_genus_invariant(&[1, 1], 1, 0).unwrap(), rat_int(1));
        assert_eq!(rank1_genus_invariant(&[1, 2], 1, 2).unwrap(), rat(9, 2));
        assert_eq!(rank1_genus_invariant(&[1, 2], 0, 0).unwrap(), rat(1, 2));
        // two weights, genus five: 2(1-5) + 5 - 1 < 0
        assert!(matches!(
            rank1_genus_invariant(&[1, 1], 0, 5),
            Err(Error::NegativeExpectedDimension)
        ));
    }

    #[test]
    fn rank1_matches_direct_at_genus_zero() {
        for (weights, d) in [(vec![1u32, 1], 1u32), (vec![1, 2], 0), (vec![1, 2, 3], 0), (vec![2, 3], 1)] {
            let closed = rank1_genus_invariant(&weights, d, 0).unwrap();
            let ws = WeightSystem::new(
                1,
                weights.iter().map(|&l| vec![Int::from(l as i64)]).collect(),
            )
            .unwrap();
            let m = int_to_i64(&ws.expected_dim(&ivec(&[d as i64])));
            assert!(m >= 0);
            // c^m = w_1^m / l_1^m
            let mut ell = vec![0u32; weights.len()];
            ell[0] = m as u32;
            let scale = rat_pow(&rat_int(weights[0] as i64), m).recip();
            let combo = ClassCombo::new(vec![(scale, ell)]);
            let direct = invariant_direct(
                &ws,
                &rvec(&[1]),
                &ivec(&[d as i64]),
                &combo,
                &opts(),
            )
            .unwrap();
            assert_eq!(closed, direct, "weights {:?} d {}", weights, d);
        }
    }

    #[test]
    fn wallcross_check_rank_one() {
        let cp1 = WeightSystem::from_i64(1, &[&[1], &[1]]).unwrap();
        let walls = crate::toric::enumerate_walls(&cp1);
        let report = wallcross_check(
            &cp1,
            &walls[0],
            &rvec(&[1]),
            &ivec(&[1]),
            &ClassCombo::monomial(vec![2, 1]),
            &opts(),
        )
        .unwrap();
        assert!(report.pass);
        assert_eq!(report.value_plus, rat_int(1));
        assert_eq!(report.value_minus, Rat::zero());
        assert_eq!(report.value_reduced, rat_int(1));

        // flipped direction: the identity holds with the normal negated
        let report = wallcross_check(
            &cp1,
            &walls[0],
            &rvec(&[-1]),
            &ivec(&[1]),
            &ClassCombo::monomial(vec![2, 1]),
            &opts(),
        )
        .unwrap();
        assert!(report.pass);
        assert!(report.orientation_flipped);
        assert_eq!(report.value_plus, Rat::zero());
        assert_eq!(report.value_minus, rat_int(1));
        assert_eq!(report.value_reduced, rat_int(-1));
    }

    #[test]
    fn wallcross_check_threefold_walls() {
        let ws = example_threefold();
        let walls = crate::toric::enumerate_walls(&ws);
        let lambda = ivec(&[0, 0]);
        // tau1 transverse to each wall: a weight off the wall
        for wall in &walls {
            let mu = (0..ws.n()).find(|nu| !wall.indices.contains(nu)).unwrap();
            let tau1: Vec<Rat> = ws
                .weight(mu)
                .iter()
                .map(|x| Rat::from_integer(x.clone()))
                .collect();
            for ell in exponents_of_degree(5, 3) {
                let report = wallcross_check(
                    &ws,
                    wall,
                    &tau1,
                    &lambda,
                    &ClassCombo::monomial(ell.clone()),
                    &opts(),
                )
                .unwrap();
                assert!(report.pass, "wall {:?} ell {:?}", wall.indices, ell);
            }
        }
    }

    #[test]
    fn rewriting_conserves_wallcross_value() {
        // one substitution step leaves the wall-crossing value unchanged
        let ws = example_threefold();
        let tau = rvec(&[2, 4]);
        let lambda = ivec(&[1, 0]);
        // m = 5 - 2 + 2 = 5; admissible monomial with an over-degree index
        let ell = vec![0u32, 3, 1, 1, 0];
        let expansion = rewrite_step(&ws, &lambda, &ell);
        let Some(expansion) = expansion else {
            panic!("expected a rewriting step");
        };
        let base = invariant_wallcross(
            &ws,
            &tau,
            &lambda,
            &ClassCombo::monomial(ell),
            &opts(),
        )
        .unwrap();
        let mut acc = Rat::zero();
        for (c, e) in expansion {
            acc += c * invariant_wallcross(&ws, &tau, &lambda, &ClassCombo::monomial(e), &opts())
                .unwrap();
        }
        assert_eq!(acc, base);
    }

    #[test]
    fn express_roundtrip() {
        let ws = example_threefold();
        let alpha = weight_monomial(&ws, &[1, 1, 1, 0, 0]);
        let combo = express_in_weight_monomials(&ws, &alpha).unwrap();
        assert_eq!(combo.to_poly(&ws), alpha);
    }
}
