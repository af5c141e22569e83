//! The chamber of a regular parameter as a union of hyperplane-arrangement
//! cells, and the effective cone of lattice classes pairing nonnegatively
//! with the whole chamber.

use super::{
    cone_contains, enumerate_walls, is_regular, lambda_tau_sublattice, WeightSystem,
};
use crate::error::Error;
use crate::lattice::{
    dot, dot_rat_int, int_rows_to_rat, integer_kernel_basis, primitive_vector, rank_rational,
    IntMatrix, Int, Rat,
};
use itertools::Itertools;
use num_traits::{Signed, Zero};
use std::collections::{BTreeSet, VecDeque};

/// One full-dimensional closed cell of the wall-span arrangement: its sign
/// vector with respect to the wall normals and the rays generating it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberCell {
    pub signs: Vec<i8>,
    /// Primitive integer covectors spanning the closed cell.
    pub rays: Vec<Vec<Int>>,
}

/// The chamber of a regular parameter together with the effective-cone
/// data derived from it.
#[derive(Debug, Clone)]
pub struct EffectiveConeData {
    /// Basis of the degree-two class lattice of the quotient.
    pub lambda_tau_basis: Vec<Vec<Int>>,
    /// Closed cells whose union is the closure of the chamber.
    pub chamber_cells: Vec<ChamberCell>,
    /// Primitive generators of the rational dual cone of the chamber
    /// inside the class lattice.
    pub eff_generators: Vec<Vec<Int>>,
}

impl EffectiveConeData {
    /// Exact membership test for the effective cone: the class must lie in
    /// the class lattice and pair nonnegatively with every generator of
    /// every chamber cell.
    pub fn contains(&self, lambda: &[Int]) -> bool {
        if !self.in_class_lattice(lambda) {
            return false;
        }
        self.chamber_cells.iter().all(|cell| {
            cell.rays
                .iter()
                .all(|r| !dot(r, lambda).is_negative())
        })
    }

    pub fn in_class_lattice(&self, lambda: &[Int]) -> bool {
        if self.lambda_tau_basis.is_empty() {
            return lambda.iter().all(|x| x.is_zero());
        }
        let k = lambda.len();
        let a: Vec<Vec<Rat>> = (0..k)
            .map(|i| {
                self.lambda_tau_basis
                    .iter()
                    .map(|b| Rat::from_integer(b[i].clone()))
                    .collect()
            })
            .collect();
        let b: Vec<Rat> = lambda.iter().map(|x| Rat::from_integer(x.clone())).collect();
        match crate::lattice::solve_rational(&a, &b) {
            Some(sol) => sol.iter().all(|x| x.is_integer()),
            None => false,
        }
    }
}

fn sign_of(x: &Rat) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn sign_of_int(x: &Int) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Compute the chamber of `tau` by facet-crossing region growth over the
/// arrangement of all wall spans, then the effective cone: membership
/// constraints from all cell generators and the primitive rays of the
/// rational dual cone restricted to the class lattice.
pub fn effective_cone(ws: &WeightSystem, tau: &[Rat]) -> Result<EffectiveConeData, Error> {
    if !is_regular(ws, tau) {
        return Err(Error::SingularParameter);
    }
    let k = ws.k();
    let walls = enumerate_walls(ws);
    let normals: Vec<Vec<Int>> = walls.iter().map(|w| w.normal.clone()).collect();
    let wall_indices: Vec<Vec<usize>> = walls.iter().map(|w| w.indices.clone()).collect();

    // candidate one-dimensional faces of the arrangement
    let rays = arrangement_rays(k, &normals);
    let ray_signs: Vec<Vec<i8>> = rays
        .iter()
        .map(|r| normals.iter().map(|e| sign_of_int(&dot(r, e))).collect())
        .collect();

    let tau_signs: Vec<i8> = normals
        .iter()
        .map(|e| sign_of(&dot_rat_int(tau, e)))
        .collect();

    // all full-dimensional completions of the sign vector of tau
    let zero_slots: Vec<usize> = tau_signs
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == 0)
        .map(|(i, _)| i)
        .collect();
    let mut seeds: Vec<Vec<i8>> = Vec::new();
    for mask in 0..(1u32 << zero_slots.len()) {
        let mut cand = tau_signs.clone();
        for (bit, &slot) in zero_slots.iter().enumerate() {
            cand[slot] = if mask & (1 << bit) != 0 { 1 } else { -1 };
        }
        seeds.push(cand);
    }

    let realize = |signs: &[i8]| -> Option<(Vec<Vec<Int>>, Vec<Rat>)> {
        let compatible: Vec<Vec<Int>> = rays
            .iter()
            .zip(&ray_signs)
            .filter(|(_, rs)| {
                rs.iter()
                    .zip(signs)
                    .all(|(&a, &b)| a == 0 || a == b)
            })
            .map(|(r, _)| r.clone())
            .collect();
        if compatible.is_empty() {
            return None;
        }
        let mut sample = vec![Rat::zero(); k];
        for r in &compatible {
            for (s, x) in sample.iter_mut().zip(r) {
                *s += Rat::from_integer(x.clone());
            }
        }
        let sample_signs: Vec<i8> = normals
            .iter()
            .map(|e| sign_of(&dot_rat_int(&sample, e)))
            .collect();
        if sample_signs == signs {
            Some((compatible, sample))
        } else {
            None
        }
    };

    let mut cells: Vec<ChamberCell> = Vec::new();
    let mut visited: BTreeSet<Vec<i8>> = BTreeSet::new();
    let mut queue: VecDeque<(Vec<i8>, Vec<Vec<Int>>, Vec<Rat>)> = VecDeque::new();
    for seed in seeds {
        if let Some((rays_c, sample)) = realize(&seed) {
            if visited.insert(seed.clone()) {
                queue.push_back((seed, rays_c, sample));
            }
        }
    }
    if queue.is_empty() {
        return Err(Error::SingularParameter);
    }
    while let Some((signs, cell_rays, sample)) = queue.pop_front() {
        for h in 0..normals.len() {
            let mut flipped = signs.clone();
            flipped[h] = -flipped[h];
            if visited.contains(&flipped) {
                continue;
            }
            if let Some((rays_f, sample_f)) = realize(&flipped) {
                // exact crossing point of the segment between the samples
                let a = dot_rat_int(&sample, &normals[h]);
                let b = dot_rat_int(&sample_f, &normals[h]);
                debug_assert!(!(&a - &b).is_zero());
                let t = &a / (&a - &b);
                let x: Vec<Rat> = sample
                    .iter()
                    .zip(&sample_f)
                    .map(|(p, q)| p + (q - p) * &t)
                    .collect();
                debug_assert!(dot_rat_int(&x, &normals[h]).is_zero());
                // the facet is crossable iff its interior misses the wall cone
                if cone_contains(ws, &wall_indices[h], &x).is_none() {
                    visited.insert(flipped.clone());
                    queue.push_back((flipped, rays_f, sample_f));
                }
            }
        }
        cells.push(ChamberCell {
            signs,
            rays: cell_rays,
        });
    }

    let lambda_tau_basis = lambda_tau_for_cone(ws, tau)?;

    // dual cone restricted to the class lattice
    let mut constraint_rays: Vec<Vec<Int>> = Vec::new();
    for cell in &cells {
        for r in &cell.rays {
            if !constraint_rays.contains(r) {
                constraint_rays.push(r.clone());
            }
        }
    }
    constraint_rays.sort();
    let kp = lambda_tau_basis.len();
    let mut eff_generators: Vec<Vec<Int>> = Vec::new();
    if kp > 0 {
        let constraints: Vec<Vec<Int>> = constraint_rays
            .iter()
            .map(|r| {
                lambda_tau_basis
                    .iter()
                    .map(|kappa| dot(r, kappa))
                    .collect()
            })
            .collect();
        for y in extreme_rays_of_inequality_cone(kp, &constraints) {
            let lambda: Vec<Int> = (0..k)
                .map(|i| {
                    y.iter()
                        .zip(&lambda_tau_basis)
                        .map(|(c, kappa)| c * &kappa[i])
                        .sum()
                })
                .collect();
            let lambda = primitive_vector(&lambda)?;
            if !eff_generators.contains(&lambda) {
                eff_generators.push(lambda);
            }
        }
        eff_generators.sort();
    }

    Ok(EffectiveConeData {
        lambda_tau_basis,
        chamber_cells: cells,
        eff_generators,
    })
}

/// Class lattice used by the effective cone; tolerates non-free actions by
/// falling back to the pairing kernel of the vanishing divisors.
fn lambda_tau_for_cone(ws: &WeightSystem, tau: &[Rat]) -> Result<Vec<Vec<Int>>, Error> {
    match lambda_tau_sublattice(ws, tau) {
        Ok(b) => Ok(b),
        Err(Error::NotFree) => {
            let mut vanishing_rows = Vec::new();
            for nu in 0..ws.n() {
                if super::face_nonempty(ws, tau, &[nu])? {
                    continue;
                }
                vanishing_rows.push(ws.weight(nu).to_vec());
            }
            if vanishing_rows.is_empty() {
                return Ok((0..ws.k())
                    .map(|i| {
                        let mut e = vec![Int::zero(); ws.k()];
                        e[i] = Int::from(1);
                        e
                    })
                    .collect());
            }
            Ok(integer_kernel_basis(&IntMatrix::from_rows(&vanishing_rows)))
        }
        Err(e) => Err(e),
    }
}

/// The one-dimensional faces of a central essential arrangement: primitive
/// kernels of `(k-1)`-subsets of normals, both orientations.
fn arrangement_rays(k: usize, normals: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let mut rays: Vec<Vec<Int>> = Vec::new();
    if k == 0 {
        return rays;
    }
    for subset in (0..normals.len()).combinations(k - 1) {
        let rows: Vec<Vec<Int>> = subset.iter().map(|&h| normals[h].clone()).collect();
        if rank_rational(&int_rows_to_rat(&rows)) != k - 1 {
            continue;
        }
        let m = if rows.is_empty() {
            IntMatrix::new(0, k, vec![])
        } else {
            IntMatrix::from_rows(&rows)
        };
        for r in integer_kernel_basis(&m) {
            let neg: Vec<Int> = r.iter().map(|x| -x.clone()).collect();
            for cand in [r, neg] {
                if !rays.contains(&cand) {
                    rays.push(cand);
                }
            }
        }
    }
    rays.sort();
    rays
}

/// Extreme rays of `{y : A y >= 0}` for a pointed cone, by scanning
/// `(d-1)`-subsets of constraint rows.
fn extreme_rays_of_inequality_cone(d: usize, a: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let mut out: Vec<Vec<Int>> = Vec::new();
    if d == 0 {
        return out;
    }
    for subset in (0..a.len()).combinations(d - 1) {
        let rows: Vec<Vec<Int>> = subset.iter().map(|&i| a[i].clone()).collect();
        if rank_rational(&int_rows_to_rat(&rows)) != d - 1 {
            continue;
        }
        let m = if rows.is_empty() {
            IntMatrix::new(0, d, vec![])
        } else {
            IntMatrix::from_rows(&rows)
        };
        for r in integer_kernel_basis(&m) {
            let neg: Vec<Int> = r.iter().map(|x| -x.clone()).collect();
            for cand in [r, neg] {
                if a.iter().all(|row| !dot(row, &cand).is_negative())
                    && !out.contains(&cand)
                {
                    out.push(cand);
                }
            }
        }
    }
    out.sort();
    out
}
