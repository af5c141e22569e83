//! Codimension-one walls, generic path crossings, and the reduction of the
//! action data at a wall.

use super::{cone_contains, is_regular, WeightSystem};
use crate::error::Error;
use crate::lattice::{
    complete_primitive_to_basis, dot, dot_rat_int, integer_kernel_basis, rank_rational,
    int_rows_to_rat, IntMatrix, Int, Rat,
};
use itertools::Itertools;
use num_traits::{Signed, Zero};

/// A codimension-one wall: the index set of weights spanning it and the
/// primitive normal. The sign of the normal stays unresolved until a
/// crossing direction is given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub indices: Vec<usize>,
    pub normal: Vec<Int>,
}

/// A signed crossing event on a parameter path.
#[derive(Debug, Clone)]
pub struct Crossing {
    pub t: Rat,
    pub wall: Wall,
    pub tau0: Vec<Rat>,
    /// Primitive normal signed so that the path direction pairs positively.
    pub e1: Vec<Int>,
}

/// All candidate walls, deduplicated by their span. For every
/// `(k-1)`-subset of rank `k-1` the wall keeps all weights lying inside
/// the span.
pub fn enumerate_walls(ws: &WeightSystem) -> Vec<Wall> {
    let k = ws.k();
    let n = ws.n();
    if k == 0 {
        return vec![];
    }
    let mut walls: Vec<Wall> = Vec::new();
    for subset in (0..n).combinations(k - 1) {
        let rows: Vec<Vec<Int>> = subset.iter().map(|&nu| ws.weight(nu).to_vec()).collect();
        if rank_rational(&int_rows_to_rat(&rows)) != k - 1 {
            continue;
        }
        let m = if rows.is_empty() {
            IntMatrix::new(0, k, vec![])
        } else {
            IntMatrix::from_rows(&rows)
        };
        let kernel = integer_kernel_basis(&m);
        debug_assert_eq!(kernel.len(), 1);
        let normal = normalize_sign(kernel.into_iter().next().unwrap());
        if walls.iter().any(|w| w.normal == normal) {
            continue;
        }
        let indices: Vec<usize> = (0..n)
            .filter(|&nu| dot(ws.weight(nu), &normal).is_zero())
            .collect();
        walls.push(Wall { indices, normal });
    }
    walls.sort_by(|a, b| a.normal.cmp(&b.normal));
    walls
}

fn normalize_sign(mut v: Vec<Int>) -> Vec<Int> {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    v
}

const JITTER_RETRIES: usize = 16;

const JITTER_PRIMES: [i64; 16] = [
    1_000_000_007,
    1_000_000_009,
    1_000_000_021,
    1_000_000_033,
    1_000_000_087,
    1_000_000_093,
    1_000_000_097,
    1_000_000_103,
    1_000_000_123,
    1_000_000_181,
    1_000_000_207,
    1_000_000_223,
    1_000_000_241,
    1_000_000_271,
    1_000_000_289,
    1_000_000_297,
];

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn jitter_direction(k: usize, seed: u64, retry: usize) -> Vec<Int> {
    let mut state = seed
        .wrapping_mul(0x9E3779B97F4A7C15)
        .wrapping_add(retry as u64);
    let mut v: Vec<Int> = (0..k)
        .map(|_| Int::from((splitmix(&mut state) % 7) as i64 - 3))
        .collect();
    if v.iter().all(|x| x.is_zero()) {
        v[0] = Int::from(1);
    }
    v
}

/// Ordered generic crossings of the open segment from `from` to `to` with
/// the walls of the system. Degenerate intersections trigger a seeded
/// rational jitter of the start point (which must stay regular and outside
/// the moment image), with a bounded retry budget.
pub fn path_crossings(
    ws: &WeightSystem,
    from: &[Rat],
    to: &[Rat],
    seed: u64,
) -> Result<Vec<Crossing>, Error> {
    if !is_regular(ws, from) || !is_regular(ws, to) {
        return Err(Error::SingularParameter);
    }
    let all: Vec<usize> = (0..ws.n()).collect();
    if cone_contains(ws, &all, from).is_some() {
        return Err(Error::NotOutside);
    }
    let walls = enumerate_walls(ws);
    for retry in 0..=JITTER_RETRIES {
        let start = if retry == 0 {
            from.to_vec()
        } else {
            let dir = jitter_direction(ws.k(), seed, retry);
            let p = JITTER_PRIMES[(retry - 1) % JITTER_PRIMES.len()];
            let eps = Rat::new(Int::from(1), Int::from(p));
            let cand: Vec<Rat> = from
                .iter()
                .zip(&dir)
                .map(|(x, d)| x + &eps * Rat::from_integer(d.clone()))
                .collect();
            if !is_regular(ws, &cand) || cone_contains(ws, &all, &cand).is_some() {
                continue;
            }
            cand
        };
        if let Some(crossings) = try_crossings(ws, &walls, &start, to) {
            return Ok(crossings);
        }
    }
    Err(Error::DegeneratePath)
}

/// One crossing sweep; `None` signals a degeneracy that the caller should
/// retry with a jittered start point.
fn try_crossings(
    ws: &WeightSystem,
    walls: &[Wall],
    from: &[Rat],
    to: &[Rat],
) -> Option<Vec<Crossing>> {
    let k = ws.k();
    let delta: Vec<Rat> = to.iter().zip(from).map(|(a, b)| a - b).collect();
    let mut crossings: Vec<Crossing> = Vec::new();
    for wall in walls {
        let den = dot_rat_int(&delta, &wall.normal);
        let num = dot_rat_int(from, &wall.normal);
        if den.is_zero() {
            if num.is_zero() {
                // segment inside the wall span
                return None;
            }
            continue;
        }
        let t = -num / &den;
        if t <= Rat::zero() || t >= Rat::from_integer(Int::from(1)) {
            continue;
        }
        let tau0: Vec<Rat> = from.iter().zip(&delta).map(|(x, d)| x + d * &t).collect();
        if cone_contains(ws, &wall.indices, &tau0).is_none() {
            // crosses the span away from the singular cone
            continue;
        }
        // genericity: the point must lie in no other wall
        for other in walls {
            if other.normal == wall.normal {
                continue;
            }
            if dot_rat_int(&tau0, &other.normal).is_zero()
                && cone_contains(ws, &other.indices, &tau0).is_some()
            {
                return None;
            }
        }
        let e1: Vec<Int> = if den.is_positive() {
            wall.normal.clone()
        } else {
            wall.normal.iter().map(|x| -x.clone()).collect()
        };
        // the crossing point must be regular for the reduced action
        if k >= 2 {
            match reduced_system_at(ws, wall, &e1, &tau0) {
                Some((red_ws, red_tau)) => {
                    if !is_regular(&red_ws, &red_tau) {
                        return None;
                    }
                }
                None => return None,
            }
        }
        crossings.push(Crossing {
            t,
            wall: wall.clone(),
            tau0,
            e1,
        });
    }
    crossings.sort_by(|a, b| a.t.cmp(&b.t));
    Some(crossings)
}

/// The reduced action data at a wall.
#[derive(Debug, Clone)]
pub struct Reduction {
    /// Weight system of the quotient torus acting on the wall coordinates.
    pub system: WeightSystem,
    /// Original indices of the retained coordinates, ascending.
    pub indices: Vec<usize>,
    /// Projection of the class to the reduced lattice.
    pub lambda0: Vec<Int>,
    /// Crossing point in the lifted dual coordinates.
    pub tau0: Vec<Rat>,
    /// Signed primitive normal used for the reduction.
    pub e1: Vec<Int>,
    /// Lifted basis vectors `f_2..f_k`; `(e1, f_2, .., f_k)` is a
    /// positively oriented lattice basis.
    pub lift: Vec<Vec<Int>>,
}

fn reduced_system_at(
    ws: &WeightSystem,
    wall: &Wall,
    e1: &[Int],
    tau0: &[Rat],
) -> Option<(WeightSystem, Vec<Rat>)> {
    let basis = complete_primitive_to_basis(e1).ok()?;
    let lift = &basis[1..];
    let reduced_weights: Vec<Vec<Int>> = wall
        .indices
        .iter()
        .map(|&nu| lift.iter().map(|f| dot(ws.weight(nu), f)).collect())
        .collect();
    let red_ws = WeightSystem::new(ws.k() - 1, reduced_weights).ok()?;
    let red_tau: Vec<Rat> = lift.iter().map(|f| dot_rat_int(tau0, f)).collect();
    Some((red_ws, red_tau))
}

/// Reduce the problem at a wall: quotient lattice with a deterministic
/// positively oriented lift, weights restricted to the wall indices, the
/// class projected, and the crossing point rewritten in lifted
/// coordinates.
pub fn wall_reduction(
    ws: &WeightSystem,
    wall: &Wall,
    e1: &[Int],
    lambda: &[Int],
    tau0: &[Rat],
) -> Result<Reduction, Error> {
    let k = ws.k();
    debug_assert!(wall
        .indices
        .iter()
        .all(|&nu| dot(ws.weight(nu), e1).is_zero()));
    debug_assert!(dot_rat_int(tau0, e1).is_zero());
    if k == 1 {
        return Ok(Reduction {
            system: WeightSystem::new(0, vec![])?,
            indices: wall.indices.clone(),
            lambda0: vec![],
            tau0: vec![],
            e1: e1.to_vec(),
            lift: vec![],
        });
    }
    let basis = complete_primitive_to_basis(e1)?;
    let lift: Vec<Vec<Int>> = basis[1..].to_vec();
    let reduced_weights: Vec<Vec<Int>> = wall
        .indices
        .iter()
        .map(|&nu| lift.iter().map(|f| dot(ws.weight(nu), f)).collect())
        .collect();
    let system = WeightSystem::new(k - 1, reduced_weights)?;
    let red_tau: Vec<Rat> = lift.iter().map(|f| dot_rat_int(tau0, f)).collect();
    if !is_regular(&system, &red_tau) {
        return Err(Error::SingularParameter);
    }
    // coordinates of lambda in the basis (e1, f_2..f_k)
    let a: Vec<Vec<Rat>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| Rat::from_integer(basis[j][i].clone()))
                .collect()
        })
        .collect();
    let b: Vec<Rat> = lambda.iter().map(|x| Rat::from_integer(x.clone())).collect();
    let coords = crate::lattice::solve_rational(&a, &b)
        .expect("lattice basis is invertible");
    let lambda0: Vec<Int> = coords[1..]
        .iter()
        .map(|c| {
            assert!(c.is_integer(), "basis coordinates of a lattice vector");
            c.to_integer()
        })
        .collect();
    Ok(Reduction {
        system,
        indices: wall.indices.clone(),
        lambda0,
        tau0: red_tau,
        e1: e1.to_vec(),
        lift,
    })
}
