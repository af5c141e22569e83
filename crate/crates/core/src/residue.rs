//! Residue calculus: residues at infinity of rational functions with
//! linear-form factors, the iterated residue attached to an ordered
//! partition of the weights, its closed form, and the reduced class at a
//! wall.

use crate::error::Error;
use crate::lattice::{adapted_oriented_basis, dot, rat_pow, Int, OrientedBasis, Rat};
use crate::poly::{LinearFactor, MultiPoly};
use crate::toric::{Reduction, Wall, WeightSystem};
use num_traits::{One, Zero};

/// Coefficient of `z^{-1}` in the expansion at infinity of
/// `P * prod (a z + b)^exponent`, where `z` is the last variable of `P`
/// and each `b` is a linear form in the remaining variables.
///
/// Factors with nonnegative exponents are multiplied into the numerator
/// exactly. For numerator degree `p` and total denominator degree `D`
/// each remaining factor is expanded to `p - D + 2` terms: a term of the
/// product has `z`-exponent `p' - D - s` with `p' <= p` and `s >= 0` the
/// series index, so indices beyond `p - D + 1` cannot reach `z^{-1}`.
pub fn residue_at_infinity(
    p: &MultiPoly,
    factors: &[LinearFactor],
) -> Result<MultiPoly, Error> {
    assert!(p.vars() >= 1, "need a residue variable");
    let front = p.vars() - 1;

    let mut numerator = p.clone();
    let mut neg: Vec<&LinearFactor> = Vec::new();
    for f in factors {
        assert!(
            f.b.vars() == front,
            "factor form must omit the residue variable"
        );
        if f.exponent >= 0 {
            // (a z + b)^e as an exact polynomial factor
            let az = MultiPoly::var(front + 1, front).scale(&f.a);
            let lin = az.add(&f.b.extend_vars(1));
            numerator = numerator.mul(&lin.pow(f.exponent as u32));
        } else {
            if f.a.is_zero() {
                return Err(Error::ZeroLeadingCoefficient);
            }
            neg.push(f);
        }
    }

    let parts = numerator.coefficients_in_last_var();
    let Some(&p_max) = parts.keys().max() else {
        return Ok(MultiPoly::zero(front));
    };
    let total_neg: i64 = neg.iter().map(|f| f.exponent).sum();
    let need = p_max as i64 + total_neg + 1;
    if need < 0 {
        return Ok(MultiPoly::zero(front));
    }
    let need = need as usize;

    // series of prod (a z + b)^e = (prod a^e) z^{total_neg} *
    //   prod sum_s binom(e, s) (b/a)^s z^{-s}, truncated at `need`
    let mut series: Vec<MultiPoly> = vec![MultiPoly::one(front)];
    let mut scalar = Rat::one();
    for f in &neg {
        scalar *= rat_pow(&f.a, f.exponent);
        let ratio = f.b.scale(&f.a.clone().recip());
        let mut fac: Vec<MultiPoly> = Vec::with_capacity(need + 1);
        let mut coeff = Rat::one();
        let mut pow = MultiPoly::one(front);
        for s in 0..=need {
            if s > 0 {
                // generalized binomial: binom(e, s) = binom(e, s-1) * (e - s + 1)/s
                let e = Rat::from_integer(Int::from(f.exponent));
                let si = Rat::from_integer(Int::from(s as i64));
                coeff = coeff * (e - (si.clone() - Rat::one())) / si;
                pow = pow.mul(&ratio);
            }
            fac.push(pow.scale(&coeff));
        }
        series = multiply_truncated(&series, &fac, need);
    }

    // collect the z^{-1} coefficient: numerator term z^p times series term
    // z^{total_neg - s} hits -1 at s = p + total_neg + 1
    let mut out = MultiPoly::zero(front);
    for (&p_deg, coeff_poly) in &parts {
        let s = p_deg as i64 + total_neg + 1;
        if s < 0 || s as usize >= series.len() {
            continue;
        }
        out = out.add(&coeff_poly.mul(&series[s as usize]).scale(&scalar));
    }
    Ok(out)
}

fn multiply_truncated(a: &[MultiPoly], b: &[MultiPoly], cap: usize) -> Vec<MultiPoly> {
    let vars = a
        .first()
        .map(MultiPoly::vars)
        .or_else(|| b.first().map(MultiPoly::vars))
        .unwrap_or(0);
    let len = (a.len() + b.len()).saturating_sub(1).min(cap + 1);
    let mut out = vec![MultiPoly::zero(vars); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j > cap || i + j >= len {
                break;
            }
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// Cumulative covector chain of an ordered partition: the `j`-th entry
/// holds the weights of the first `j` blocks.
pub fn partition_chain(ws: &WeightSystem, blocks: &[Vec<usize>]) -> Vec<Vec<Vec<Int>>> {
    let mut chain = Vec::with_capacity(blocks.len());
    let mut acc: Vec<Vec<Int>> = Vec::new();
    for block in blocks {
        for &nu in block {
            acc.push(ws.weight(nu).to_vec());
        }
        chain.push(acc.clone());
    }
    chain
}

/// The iterated residue of a class along an ordered partition satisfying
/// the dimension condition, evaluated in the deterministic adapted basis.
pub fn iterated_residue(
    ws: &WeightSystem,
    blocks: &[Vec<usize>],
    lambda: &[Int],
    alpha: &MultiPoly,
) -> Result<Rat, Error> {
    let chain = partition_chain(ws, blocks);
    let basis = adapted_oriented_basis(&chain).map_err(|_| Error::InvalidPartition)?;
    iterated_residue_with_basis(ws, blocks, lambda, alpha, &basis)
}

/// Same as [`iterated_residue`] with a caller-supplied adapted basis; the
/// value is independent of the admissible choice.
pub fn iterated_residue_with_basis(
    ws: &WeightSystem,
    blocks: &[Vec<usize>],
    lambda: &[Int],
    alpha: &MultiPoly,
    basis: &OrientedBasis,
) -> Result<Rat, Error> {
    let k = ws.k();
    assert_eq!(alpha.vars(), k);
    assert_eq!(blocks.len(), k);
    let d = ws.degrees(lambda);

    // xi = sum_j z_j e_j: substitute into alpha
    let sub: Vec<Vec<Rat>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| Rat::from_integer(basis.vectors[j][i].clone()))
                .collect()
        })
        .collect();
    let mut cur = alpha.substitute_linear(&sub, k);

    for j in (0..k).rev() {
        // factors of block j involve z_j with leading coefficient <w, e_j>
        let mut factors = Vec::new();
        for &nu in &blocks[j] {
            let a = Rat::from_integer(dot(ws.weight(nu), &basis.vectors[j]));
            let b_coeffs: Vec<Rat> = (0..j)
                .map(|i| Rat::from_integer(dot(ws.weight(nu), &basis.vectors[i])))
                .collect();
            let exponent = -(int_to_i64(&d[nu]) + 1);
            factors.push(LinearFactor::new(
                a,
                MultiPoly::linear_form(&b_coeffs),
                exponent,
            ));
        }
        cur = residue_at_infinity(&cur, &factors)?;
    }
    debug_assert_eq!(cur.vars(), 0);
    Ok(cur.constant_term())
}

pub(crate) fn int_to_i64(x: &Int) -> i64 {
    let s = x.to_string();
    s.parse::<i64>().expect("desk-scale integer fits in 64 bits")
}

/// Validate the dimension condition for an ordered partition: the `j`-th
/// cumulative span has dimension exactly `j` and no later weight lies in
/// it.
pub fn partition_satisfies_dimension(ws: &WeightSystem, blocks: &[Vec<usize>]) -> bool {
    let k = ws.k();
    if blocks.len() != k {
        return false;
    }
    let mut seen = vec![false; ws.n()];
    for block in blocks {
        if block.is_empty() {
            return false;
        }
        for &nu in block {
            if nu >= ws.n() || seen[nu] {
                return false;
            }
            seen[nu] = true;
        }
    }
    if !seen.iter().all(|&s| s) {
        return false;
    }
    let chain = partition_chain(ws, blocks);
    for (j, span) in chain.iter().enumerate() {
        let rows = crate::lattice::int_rows_to_rat(span);
        if crate::lattice::rank_rational(&rows) != j + 1 {
            return false;
        }
        // no later weight may lie in the span
        for later in blocks.iter().skip(j + 1) {
            for &nu in later {
                let mut with = span.clone();
                with.push(ws.weight(nu).to_vec());
                if crate::lattice::rank_rational(&crate::lattice::int_rows_to_rat(&with)) == j + 1 {
                    return false;
                }
            }
        }
    }
    true
}

/// Closed form of the iterated residue of a monomial class: the block
/// degree sums must each be `-1`, otherwise the value is zero.
pub fn phi_closed_form(
    ws: &WeightSystem,
    blocks: &[Vec<usize>],
    lambda: &[Int],
    ell: &[u32],
) -> Result<Rat, Error> {
    assert_eq!(ell.len(), ws.n());
    if !partition_satisfies_dimension(ws, blocks) {
        return Err(Error::InvalidPartition);
    }
    let d = ws.degrees(lambda);
    let total: i64 = ell.iter().map(|&x| x as i64).sum();
    let expect = int_to_i64(&ws.expected_dim(lambda));
    if total != expect {
        return Err(Error::DimensionMismatch(format!(
            "class degree {} differs from expected dimension {}",
            total, expect
        )));
    }
    // block degree sums
    for block in blocks {
        let s: i64 = block
            .iter()
            .map(|&nu| ell[nu] as i64 - int_to_i64(&d[nu]) - 1)
            .sum();
        if s != -1 {
            return Ok(Rat::zero());
        }
    }
    let chain = partition_chain(ws, blocks);
    let basis = adapted_oriented_basis(&chain).map_err(|_| Error::InvalidPartition)?;
    let mut value = Rat::one();
    for (j, block) in blocks.iter().enumerate() {
        for &nu in block {
            let a = Rat::from_integer(dot(ws.weight(nu), &basis.vectors[j]));
            let e = ell[nu] as i64 - int_to_i64(&d[nu]) - 1;
            value *= rat_pow(&a, e);
        }
    }
    Ok(value)
}

/// The reduced class at a wall: the residue at infinity of
/// `alpha(xi + z e1) / prod_{nu notin I} <w_nu, xi + z e1>^{d_nu + 1}`
/// written in the lifted coordinates of the reduction.
pub fn reduce_alpha0_with(
    ws: &WeightSystem,
    reduction: &Reduction,
    lambda: &[Int],
    alpha: &MultiPoly,
) -> Result<MultiPoly, Error> {
    let k = ws.k();
    assert_eq!(alpha.vars(), k);
    let d = ws.degrees(lambda);
    let outside: Vec<usize> = (0..ws.n())
        .filter(|nu| !reduction.indices.contains(nu))
        .collect();

    // xi + z e1 with xi = sum_j y_j f_j; variables (y_2..y_k, z), z last
    let new_vars = k; // (k - 1) lifted coordinates plus z
    let sub: Vec<Vec<Rat>> = (0..k)
        .map(|i| {
            let mut row: Vec<Rat> = reduction
                .lift
                .iter()
                .map(|f| Rat::from_integer(f[i].clone()))
                .collect();
            row.push(Rat::from_integer(reduction.e1[i].clone()));
            row
        })
        .collect();
    let substituted = alpha.substitute_linear(&sub, new_vars);

    let mut factors = Vec::new();
    for &nu in &outside {
        let a = Rat::from_integer(dot(ws.weight(nu), &reduction.e1));
        debug_assert!(!a.is_zero(), "weights off the wall pair with the normal");
        let b_coeffs: Vec<Rat> = reduction
            .lift
            .iter()
            .map(|f| Rat::from_integer(dot(ws.weight(nu), f)))
            .collect();
        let exponent = -(int_to_i64(&d[nu]) + 1);
        factors.push(LinearFactor::new(
            a,
            MultiPoly::linear_form(&b_coeffs),
            exponent,
        ));
    }
    residue_at_infinity(&substituted, &factors)
}

/// Spec-shaped entry: builds the deterministic reduction for the signed
/// normal and reduces the class.
pub fn reduce_alpha0(
    ws: &WeightSystem,
    wall: &Wall,
    e1: &[Int],
    lambda: &[Int],
    tau0: &[Rat],
    alpha: &MultiPoly,
) -> Result<MultiPoly, Error> {
    let reduction = crate::toric::wall_reduction(ws, wall, e1, lambda, tau0)?;
    reduce_alpha0_with(ws, &reduction, lambda, alpha)
}

/// Expand a weight monomial `w^ell` into a polynomial class.
pub fn weight_monomial(ws: &WeightSystem, ell: &[u32]) -> MultiPoly {
    assert_eq!(ell.len(), ws.n());
    let k = ws.k();
    let mut out = MultiPoly::one(k);
    for (nu, &e) in ell.iter().enumerate() {
        if e > 0 {
            out = out.mul(&crate::poly::pairing_form(ws.weight(nu)).pow(e));
        }
    }
    out
}
