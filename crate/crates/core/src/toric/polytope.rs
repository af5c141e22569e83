//! Moment polytopes of regular parameters: nonempty faces organized by
//! codimension, support function, dual cones, and vertex-cone membership
//! certificates in the quotient lattice.

use super::{cone_contains, gauge_solution, is_regular, WeightSystem};
use crate::error::Error;
use crate::lattice::{solve_rational, Int, Rat};
use itertools::Itertools;
use num_traits::{Signed, Zero};

/// The image of the residual torus moment map on the quotient: a compact
/// convex polytope cut out by `eta_nu >= zeta_nu` inside the affine
/// subspace `sum eta_nu w_nu = 0`.
#[derive(Debug, Clone)]
pub struct MomentPolytope {
    n: usize,
    k: usize,
    /// Gauge vector with `sum_nu zeta_nu w_nu = -tau`.
    pub zeta: Vec<Rat>,
    /// `faces_by_codim[c]` lists the sorted index sets `I` with `|I| = c`
    /// and nonempty face, ascending lexicographic.
    pub faces_by_codim: Vec<Vec<Vec<usize>>>,
    /// Vertex faces (`|I| = n-k`) with their points in the `eta`
    /// coordinates.
    pub vertex_points: Vec<(Vec<usize>, Vec<Rat>)>,
}

/// Build the moment polytope data of a regular parameter in the moment
/// image.
pub fn moment_polytope(ws: &WeightSystem, tau: &[Rat]) -> Result<MomentPolytope, Error> {
    if !is_regular(ws, tau) {
        return Err(Error::SingularParameter);
    }
    let n = ws.n();
    let k = ws.k();
    let all: Vec<usize> = (0..n).collect();
    if cone_contains(ws, &all, tau).is_none() {
        return Err(Error::EmptyQuotient);
    }
    let zeta = gauge_solution(ws, tau);
    let dim = n - k;

    // level-wise enumeration; nonemptiness is downward closed in the index set
    let mut faces_by_codim: Vec<Vec<Vec<usize>>> = vec![vec![vec![]]];
    for c in 1..=dim {
        let prev: &Vec<Vec<usize>> = &faces_by_codim[c - 1];
        let mut level: Vec<Vec<usize>> = Vec::new();
        for candidate in (0..n).combinations(c) {
            let all_subsets_ok = candidate
                .iter()
                .map(|&skip| {
                    candidate
                        .iter()
                        .copied()
                        .filter(|&x| x != skip)
                        .collect::<Vec<_>>()
                })
                .all(|sub| prev.binary_search(&sub).is_ok());
            if !all_subsets_ok {
                continue;
            }
            let complement: Vec<usize> =
                (0..n).filter(|nu| !candidate.contains(nu)).collect();
            if cone_contains(ws, &complement, tau).is_some() {
                level.push(candidate);
            }
        }
        faces_by_codim.push(level);
    }

    // vertex coordinates: eta agrees with zeta on I and solves the moment
    // identity on the complementary basis
    let mut vertex_points = Vec::new();
    for face in &faces_by_codim[dim] {
        let complement: Vec<usize> = (0..n).filter(|nu| !face.contains(nu)).collect();
        debug_assert_eq!(complement.len(), k);
        // sum_{nu notin I} eta_nu w_nu = -tau - sum_{nu in I} zeta_nu w_nu
        let mut rhs: Vec<Rat> = tau.iter().map(|x| -x.clone()).collect();
        for &nu in face.iter() {
            for (r, wi) in rhs.iter_mut().zip(ws.weight(nu)) {
                *r -= &zeta[nu] * Rat::from_integer(wi.clone());
            }
        }
        let a: Vec<Vec<Rat>> = (0..k)
            .map(|i| {
                complement
                    .iter()
                    .map(|&nu| Rat::from_integer(ws.weight(nu)[i].clone()))
                    .collect()
            })
            .collect();
        let sol = solve_rational(&a, &rhs).expect("vertex system is solvable");
        let mut eta = zeta.clone();
        for (pos, &nu) in complement.iter().enumerate() {
            eta[nu] = &zeta[nu] + &sol[pos];
        }
        for &nu in face.iter() {
            eta[nu] = zeta[nu].clone();
        }
        vertex_points.push((face.clone(), eta));
    }

    Ok(MomentPolytope {
        n,
        k,
        zeta,
        faces_by_codim,
        vertex_points,
    })
}

impl MomentPolytope {
    pub fn dim(&self) -> usize {
        self.n - self.k
    }

    /// Face counts by dimension `0..=dim` (vertices first, the whole
    /// polytope last).
    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.dim())
            .map(|d| self.faces_by_codim[self.dim() - d].len())
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.faces_by_codim[self.dim()].len()
    }

    pub fn face_nonempty(&self, face: &[usize]) -> bool {
        let mut sorted = face.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() >= self.faces_by_codim.len() {
            return false;
        }
        self.faces_by_codim[sorted.len()].binary_search(&sorted).is_ok()
    }

    /// Support function `phi(v) = min over vertices of <eta, v>` for a
    /// representative `v` of a quotient-lattice class.
    pub fn support_function_value(&self, v: &[Int]) -> Result<Rat, Error> {
        assert_eq!(v.len(), self.n);
        self.vertex_points
            .iter()
            .map(|(_, eta)| {
                eta.iter()
                    .zip(v)
                    .map(|(e, x)| e * Rat::from_integer(x.clone()))
                    .sum::<Rat>()
            })
            .min()
            .ok_or(Error::EmptyQuotient)
    }

    /// Generators of the cone dual to a nonempty face: the images of the
    /// standard basis vectors indexed by the face.
    pub fn dual_cone(&self, face: &[usize]) -> Result<Vec<Vec<Int>>, Error> {
        if !self.face_nonempty(face) {
            return Err(Error::EmptyQuotient);
        }
        Ok(face
            .iter()
            .map(|&i| {
                let mut e = vec![Int::zero(); self.n];
                e[i] = Int::from(1);
                e
            })
            .collect())
    }

    /// Some vertex whose dual cone contains the class of `v`, with an
    /// exact nonnegative certificate: `v = sum_{j in J} c_j e_j` modulo
    /// the image of the weight pairing. Returns `(J, c over J, lambda)`.
    pub fn vertex_cone_containing(
        &self,
        ws: &WeightSystem,
        v: &[Int],
    ) -> Result<(Vec<usize>, Vec<Rat>, Vec<Rat>), Error> {
        assert_eq!(v.len(), self.n);
        for (face, _) in &self.vertex_points {
            let complement: Vec<usize> = (0..self.n).filter(|nu| !face.contains(nu)).collect();
            // v_nu = <w_nu, lambda> on the complement
            let a: Vec<Vec<Rat>> = complement
                .iter()
                .map(|&nu| {
                    ws.weight(nu)
                        .iter()
                        .map(|x| Rat::from_integer(x.clone()))
                        .collect()
                })
                .collect();
            let b: Vec<Rat> = complement
                .iter()
                .map(|&nu| Rat::from_integer(v[nu].clone()))
                .collect();
            let Some(lambda) = solve_rational(&a, &b) else {
                continue;
            };
            let coeffs: Vec<Rat> = face
                .iter()
                .map(|&nu| {
                    let pairing: Rat = lambda
                        .iter()
                        .zip(ws.weight(nu))
                        .map(|(l, w)| l * Rat::from_integer(w.clone()))
                        .sum();
                    Rat::from_integer(v[nu].clone()) - pairing
                })
                .collect();
            if coeffs.iter().all(|c| !c.is_negative()) {
                return Ok((face.clone(), coeffs, lambda));
            }
        }
        Err(Error::ConstructionFailure(
            "no vertex cone contains the class".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{ivec, rvec};

    fn example_threefold() -> WeightSystem {
        WeightSystem::from_i64(2, &[&[1, 0], &[1, 1], &[0, 1], &[0, 1], &[0, 1]]).unwrap()
    }

    #[test]
    fn cp2_simplex() {
        let cp2 = WeightSystem::from_i64(1, &[&[1], &[1], &[1]]).unwrap();
        let p = moment_polytope(&cp2, &rvec(&[1])).unwrap();
        assert_eq!(p.f_vector(), vec![3, 3, 1]);
        assert_eq!(p.vertex_count(), 3);
    }

    #[test]
    fn product_square() {
        let p11 = WeightSystem::from_i64(2, &[&[1, 0], &[1, 0], &[0, 1], &[0, 1]]).unwrap();
        let p = moment_polytope(&p11, &rvec(&[2, 2])).unwrap();
        assert_eq!(p.f_vector(), vec![4, 4, 1]);
    }

    #[test]
    fn threefold_polytope() {
        let ws = example_threefold();
        let p = moment_polytope(&ws, &rvec(&[2, 4])).unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.vertex_count(), 6);
        let f = p.f_vector();
        assert_eq!(f, vec![6, 9, 5, 1]);
        // Euler relation of a 3-polytope
        assert_eq!(f[0] as i64 - f[1] as i64 + f[2] as i64, 2);
    }

    #[test]
    fn empty_quotient_rejected() {
        let cp1 = WeightSystem::from_i64(1, &[&[1], &[1]]).unwrap();
        assert!(matches!(
            moment_polytope(&cp1, &rvec(&[-1])),
            Err(Error::EmptyQuotient)
        ));
    }

    #[test]
    fn dual_cone_generators() {
        let cp2 = WeightSystem::from_i64(1, &[&[1], &[1], &[1]]).unwrap();
        let p = moment_polytope(&cp2, &rvec(&[1])).unwrap();
        let gens = p.dual_cone(&[0, 2]).unwrap();
        assert_eq!(gens, vec![ivec(&[1, 0, 0]), ivec(&[0, 0, 1])]);
        assert!(p.dual_cone(&[0, 1, 2]).is_err());
    }

    #[test]
    fn support_function_on_square() {
        let p11 = WeightSystem::from_i64(2, &[&[1, 0], &[1, 0], &[0, 1], &[0, 1]]).unwrap();
        let p = moment_polytope(&p11, &rvec(&[2, 2])).unwrap();
        // phi((1,0,0,0)) = min eta_1 over the four vertices
        let v = ivec(&[1, 0, 0, 0]);
        let expected = p
            .vertex_points
            .iter()
            .map(|(_, eta)| eta[0].clone())
            .min()
            .unwrap();
        assert_eq!(p.support_function_value(&v).unwrap(), expected);
    }

    #[test]
    fn zero_class_in_every_vertex_cone() {
        let cp2 = WeightSystem::from_i64(1, &[&[1], &[1], &[1]]).unwrap();
        let p = moment_polytope(&cp2, &rvec(&[1])).unwrap();
        // e1+e2+e3 is the image of the weight pairing of lambda = 1
        let (face, coeffs, _) = p.vertex_cone_containing(&cp2, &ivec(&[1, 1, 1])).unwrap();
        assert_eq!(face.len(), 2);
        assert!(coeffs.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn threefold_vertex_cone_certificate() {
        let ws = example_threefold();
        let p = moment_polytope(&ws, &rvec(&[2, 4])).unwrap();
        let (face, coeffs, _) = p
            .vertex_cone_containing(&ws, &ivec(&[0, 0, 1, 1, 1]))
            .unwrap();
        assert_eq!(face.len(), 3);
        assert!(coeffs.iter().all(|c| !c.is_negative() && c.is_integer()));
    }
}
