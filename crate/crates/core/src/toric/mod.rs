//! Toric combinatorics: weight systems, cones, walls, chambers, moment
//! polytopes, and the regularity / free-action / monotonicity predicates.

pub mod chamber;
pub mod polytope;
pub mod walls;

pub use chamber::{effective_cone, ChamberCell, EffectiveConeData};
pub use polytope::{moment_polytope, MomentPolytope};
pub use walls::{enumerate_walls, path_crossings, wall_reduction, Crossing, Reduction, Wall};

use crate::error::Error;
use crate::lattice::{
    dot, int_rows_to_rat, integer_kernel_basis, lattice_normal_form, rank_rational,
    solve_rational, IntMatrix, Int, Rat,
};
use itertools::Itertools;
use num_integer::Integer as _;
use num_traits::{Signed, Zero};

/// The torus action data: `n` nonzero integer weight covectors in the dual
/// of a rank-`k` lattice, spanning the dual space, with a proper moment
/// map. Properness is certified at construction time by an integer witness
/// `zeta` with `<w_nu, zeta> >= 1` for every `nu`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    k: usize,
    weights: Vec<Vec<Int>>,
    witness: Vec<Int>,
}

impl WeightSystem {
    pub fn new(k: usize, weights: Vec<Vec<Int>>) -> Result<Self, Error> {
        if k == 0 {
            if !weights.is_empty() {
                return Err(Error::DimensionMismatch(
                    "a rank-zero torus admits no weights".into(),
                ));
            }
            return Ok(WeightSystem { k, weights, witness: vec![] });
        }
        for w in &weights {
            if w.len() != k {
                return Err(Error::DimensionMismatch(format!(
                    "weight of length {} in a rank-{} system",
                    w.len(),
                    k
                )));
            }
            if w.iter().all(|x| x.is_zero()) {
                return Err(Error::ZeroVector);
            }
        }
        if rank_rational(&int_rows_to_rat(&weights)) != k {
            return Err(Error::NotSpanning);
        }
        let witness = properness_witness(k, &weights).ok_or(Error::NotProper)?;
        Ok(WeightSystem { k, weights, witness })
    }

    pub fn from_i64(k: usize, weights: &[&[i64]]) -> Result<Self, Error> {
        Self::new(
            k,
            weights
                .iter()
                .map(|w| w.iter().map(|&x| Int::from(x)).collect())
                .collect(),
        )
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Vec<Int>] {
        &self.weights
    }

    pub fn weight(&self, nu: usize) -> &[Int] {
        &self.weights[nu]
    }

    pub fn witness(&self) -> &[Int] {
        &self.witness
    }

    /// `<w_nu, v>` for an integer vector.
    pub fn pairing(&self, nu: usize, v: &[Int]) -> Int {
        dot(&self.weights[nu], v)
    }

    /// Degree vector `d_nu = <w_nu, lambda>`.
    pub fn degrees(&self, lambda: &[Int]) -> Vec<Int> {
        (0..self.n()).map(|nu| self.pairing(nu, lambda)).collect()
    }

    /// Expected dimension `m = n - k + sum d_nu`; may be negative.
    pub fn expected_dim(&self, lambda: &[Int]) -> Int {
        let sum: Int = self.degrees(lambda).into_iter().sum();
        Int::from(self.n() as i64) - Int::from(self.k as i64) + sum
    }

    /// The monotone parameter `tau = sum_nu w_nu`.
    pub fn monotone_tau(&self) -> Vec<Int> {
        let mut t = vec![Int::zero(); self.k];
        for w in &self.weights {
            for (a, b) in t.iter_mut().zip(w) {
                *a += b;
            }
        }
        t
    }

    pub fn monotone_tau_rat(&self) -> Vec<Rat> {
        self.monotone_tau()
            .into_iter()
            .map(Rat::from_integer)
            .collect()
    }
}

/// Integer half-space witness for properness, by exact vertex enumeration
/// of `{zeta : <w_nu, zeta> >= 1}`. After the rank check the polyhedron is
/// line-free, so it is nonempty iff it has a vertex.
fn properness_witness(k: usize, weights: &[Vec<Int>]) -> Option<Vec<Int>> {
    let n = weights.len();
    if n < k {
        return None;
    }
    for subset in (0..n).combinations(k) {
        let rows: Vec<Vec<Rat>> = subset
            .iter()
            .map(|&nu| {
                weights[nu]
                    .iter()
                    .map(|x| Rat::from_integer(x.clone()))
                    .collect()
            })
            .collect();
        if rank_rational(&rows) != k {
            continue;
        }
        let rhs = vec![Rat::from_integer(Int::from(1)); k];
        let Some(zeta) = solve_rational(&rows, &rhs) else {
            continue;
        };
        let feasible = weights.iter().all(|w| {
            let p: Rat = zeta
                .iter()
                .zip(w)
                .map(|(z, wi)| z * Rat::from_integer(wi.clone()))
                .sum();
            p >= Rat::from_integer(Int::from(1))
        });
        if feasible {
            // scale to an integer vector; pairings only grow
            let lcm = zeta
                .iter()
                .fold(Int::from(1), |acc, q| acc.lcm(q.denom()));
            let scaled: Vec<Int> = zeta
                .iter()
                .map(|q| (q * Rat::from_integer(lcm.clone())).to_integer())
                .collect();
            return Some(scaled);
        }
    }
    None
}

/// Exact membership of `tau` in the cone spanned by the weights indexed by
/// `indices`, with a nonnegative rational certificate over those indices.
/// Caratheodory: it suffices to scan linearly independent subsets of size
/// at most `k`.
pub fn cone_contains(
    ws: &WeightSystem,
    indices: &[usize],
    tau: &[Rat],
) -> Option<Vec<Rat>> {
    let k = ws.k();
    assert_eq!(tau.len(), k);
    if tau.iter().all(|x| x.is_zero()) {
        return Some(vec![Rat::zero(); indices.len()]);
    }
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for size in 1..=k.min(sorted.len()) {
        for subset in sorted.iter().copied().combinations(size) {
            let rows = int_rows_to_rat(
                &subset.iter().map(|&nu| ws.weight(nu).to_vec()).collect::<Vec<_>>(),
            );
            if rank_rational(&rows) != size {
                continue;
            }
            // solve sum_s eta_s w_s = tau: k equations, `size` unknowns
            let a: Vec<Vec<Rat>> = (0..k)
                .map(|i| subset.iter().map(|&nu| rows_entry(ws, nu, i)).collect())
                .collect();
            if let Some(eta) = solve_rational(&a, tau) {
                if eta.iter().all(|x| !x.is_negative()) {
                    let mut cert = vec![Rat::zero(); indices.len()];
                    for (pos, &nu) in subset.iter().enumerate() {
                        let slot = indices.iter().position(|&m| m == nu).unwrap();
                        cert[slot] = eta[pos].clone();
                    }
                    return Some(cert);
                }
            }
        }
    }
    None
}

fn rows_entry(ws: &WeightSystem, nu: usize, i: usize) -> Rat {
    Rat::from_integer(ws.weight(nu)[i].clone())
}

/// True iff `tau` is a regular value: it lies in no cone spanned by at
/// most `k-1` of the weights (the origin counts as the empty cone).
pub fn is_regular(ws: &WeightSystem, tau: &[Rat]) -> bool {
    if tau.iter().all(|x| x.is_zero()) {
        // the origin is the cone of the empty subset
        return ws.k() == 0;
    }
    let n = ws.n();
    let all: Vec<usize> = (0..n).collect();
    for size in 1..ws.k() {
        for subset in all.iter().copied().combinations(size) {
            let rows = int_rows_to_rat(
                &subset.iter().map(|&nu| ws.weight(nu).to_vec()).collect::<Vec<_>>(),
            );
            if rank_rational(&rows) != size {
                continue;
            }
            if cone_contains(ws, &subset, tau).is_some() {
                return false;
            }
        }
    }
    true
}

/// The set of `k`-element index sets `J` with independent weights whose
/// cone contains `tau`. Two parameters in one chamber share this set.
pub fn chamber_fingerprint(
    ws: &WeightSystem,
    tau: &[Rat],
) -> Result<Vec<Vec<usize>>, Error> {
    if !is_regular(ws, tau) {
        return Err(Error::SingularParameter);
    }
    let n = ws.n();
    let mut out = Vec::new();
    for subset in (0..n).combinations(ws.k()) {
        let rows = int_rows_to_rat(
            &subset.iter().map(|&nu| ws.weight(nu).to_vec()).collect::<Vec<_>>(),
        );
        if rank_rational(&rows) != ws.k() {
            continue;
        }
        if cone_contains(ws, &subset, tau).is_some() {
            out.push(subset);
        }
    }
    Ok(out)
}

/// `Delta_I` nonempty iff `tau` lies in the cone of the complementary
/// weights.
pub fn face_nonempty(ws: &WeightSystem, tau: &[Rat], face: &[usize]) -> Result<bool, Error> {
    if !is_regular(ws, tau) {
        return Err(Error::SingularParameter);
    }
    let complement: Vec<usize> = (0..ws.n()).filter(|nu| !face.contains(nu)).collect();
    Ok(cone_contains(ws, &complement, tau).is_some())
}

/// Free action test: every fingerprint basis has determinant plus or
/// minus one.
pub fn acts_freely(ws: &WeightSystem, tau: &[Rat]) -> Result<bool, Error> {
    let fp = chamber_fingerprint(ws, tau)?;
    Ok(fp.iter().all(|subset| {
        let m = IntMatrix::from_rows(
            &subset.iter().map(|&nu| ws.weight(nu).to_vec()).collect::<Vec<_>>(),
        );
        m.det().abs() == Int::from(1)
    }))
}

/// Largest `m` with `tau/m` still a lattice covector, for the monotone
/// parameter: the gcd of the coordinates of `sum_nu w_nu`.
pub fn minimal_chern_number(ws: &WeightSystem) -> Int {
    let tau = ws.monotone_tau();
    let mut g = Int::zero();
    for x in &tau {
        g = g.gcd(x);
    }
    g
}

/// Basis of the sublattice of classes pairing to zero with every weight
/// whose divisor class vanishes on the quotient.
pub fn lambda_tau_sublattice(
    ws: &WeightSystem,
    tau: &[Rat],
) -> Result<Vec<Vec<Int>>, Error> {
    if !is_regular(ws, tau) {
        return Err(Error::SingularParameter);
    }
    if !acts_freely(ws, tau)? {
        return Err(Error::NotFree);
    }
    let mut vanishing_rows = Vec::new();
    for nu in 0..ws.n() {
        if !face_nonempty(ws, tau, &[nu])? {
            vanishing_rows.push(ws.weight(nu).to_vec());
        }
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
    let m = IntMatrix::from_rows(&vanishing_rows);
    Ok(integer_kernel_basis(&m))
}

/// The unique lattice vector pairing to the given degree vector with every
/// weight, when it exists.
pub fn lift_degree_vector(ws: &WeightSystem, d: &[Int]) -> Result<Vec<Int>, Error> {
    if d.len() != ws.n() {
        return Err(Error::DimensionMismatch("degree vector length".into()));
    }
    let a = int_rows_to_rat(&ws.weights().to_vec());
    let b: Vec<Rat> = d.iter().map(|x| Rat::from_integer(x.clone())).collect();
    let sol = solve_rational(&a, &b).ok_or(Error::NoLift)?;
    if !sol.iter().all(|x| x.is_integer()) {
        return Err(Error::NoLift);
    }
    Ok(sol.iter().map(|x| x.to_integer()).collect())
}

/// Solve `sum_nu zeta_nu w_nu = -tau` with the deterministic normal-form
/// gauge (free coordinates pinned through the unimodular transform).
pub fn gauge_solution(ws: &WeightSystem, tau: &[Rat]) -> Vec<Rat> {
    let k = ws.k();
    let n = ws.n();
    // columns are the weights
    let mut m = IntMatrix::zero(k, n);
    for (nu, w) in ws.weights().iter().enumerate() {
        for i in 0..k {
            *m.at_mut(i, nu) = w[i].clone();
        }
    }
    let (rank, h, u) = lattice_normal_form(&m);
    debug_assert_eq!(rank, k);
    // forward substitution on the pivot structure of H
    let mut y = vec![Rat::zero(); n];
    let mut pivot_rows = Vec::with_capacity(rank);
    for c in 0..rank {
        let pr = (0..k).find(|&r| !h.at(r, c).is_zero()).expect("pivot row");
        pivot_rows.push(pr);
    }
    for c in 0..rank {
        let pr = pivot_rows[c];
        let mut acc = -tau[pr].clone();
        for j in 0..c {
            acc -= Rat::from_integer(h.at(pr, j).clone()) * &y[j];
        }
        y[c] = acc / Rat::from_integer(h.at(pr, c).clone());
    }
    (0..n)
        .map(|nu| {
            (0..n)
                .map(|j| Rat::from_integer(u.at(nu, j).clone()) * &y[j])
                .sum()
        })
        .collect()
}
