//! Ring presentations of the quotient: the classical presentation from
//! linear relations and minimal nonfaces, the quantum presentation built
//! from primitive collections, degree-two Gromov-Witten evaluation, and
//! exact relation verification through the invariant identities.

use crate::error::Error;
use crate::invariants::{invariant_direct, ClassCombo, EvalOptions};
use crate::lattice::{integer_kernel_basis, IntMatrix, Int, Rat};
use crate::residue::int_to_i64;
use crate::toric::{
    acts_freely, cone_contains, effective_cone, face_nonempty, is_regular, lift_degree_vector,
    minimal_chern_number, moment_polytope, EffectiveConeData, MomentPolytope, WeightSystem,
};
use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A multiplicative relation `u^{d+} = q^lambda u^{d-}` with disjoint
/// supports and the grading exponent of the quantum variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumRelation {
    pub d_plus: Vec<u32>,
    pub d_minus: Vec<u32>,
    pub lambda: Vec<Int>,
    pub q_degree: Int,
}

/// Generators `u_1..u_n` with linear, monomial, and quantum relations.
/// Classical presentations carry no quantum part; quantum presentations
/// list vanishing generators as singleton monomial relations.
#[derive(Debug, Clone, PartialEq)]
pub struct RingPresentation {
    pub n: usize,
    pub linear: Vec<Vec<Int>>,
    pub monomial: Vec<Vec<usize>>,
    pub quantum: Vec<QuantumRelation>,
}

fn kernel_relations(ws: &WeightSystem) -> Vec<Vec<Int>> {
    let k = ws.k();
    let n = ws.n();
    let mut m = IntMatrix::zero(k, n);
    for (nu, w) in ws.weights().iter().enumerate() {
        for i in 0..k {
            *m.at_mut(i, nu) = w[i].clone();
        }
    }
    integer_kernel_basis(&m)
}

/// Minimal index sets with empty moment-polytope face, by level-wise
/// enumeration with hereditary pruning.
pub fn minimal_nonfaces(ws: &WeightSystem, tau: &[Rat]) -> Result<Vec<Vec<usize>>, Error> {
    let n = ws.n();
    let mut minimal: Vec<Vec<usize>> = Vec::new();
    for size in 1..=n {
        for candidate in (0..n).combinations(size) {
            if minimal
                .iter()
                .any(|nf| nf.iter().all(|i| candidate.contains(i)))
            {
                continue;
            }
            if !face_nonempty(ws, tau, &candidate)? {
                minimal.push(candidate);
            }
        }
    }
    minimal.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    Ok(minimal)
}

/// Classical presentation: linear relations from the kernel of the weight
/// map, monomial relations from the minimal nonfaces.
pub fn classical_presentation(
    ws: &WeightSystem,
    tau: &[Rat],
) -> Result<RingPresentation, Error> {
    if !is_regular(ws, tau) {
        return Err(Error::SingularParameter);
    }
    if !acts_freely(ws, tau)? {
        return Err(Error::NotFree);
    }
    let all: Vec<usize> = (0..ws.n()).collect();
    if cone_contains(ws, &all, tau).is_none() {
        return Err(Error::EmptyQuotient);
    }
    Ok(RingPresentation {
        n: ws.n(),
        linear: kernel_relations(ws),
        monomial: minimal_nonfaces(ws, tau)?,
        quantum: vec![],
    })
}

/// Even Betti numbers from the face counts of the moment polytope.
pub fn betti_numbers(ws: &WeightSystem, tau: &[Rat]) -> Result<Vec<Int>, Error> {
    if !is_regular(ws, tau) {
        return Err(Error::SingularParameter);
    }
    if !acts_freely(ws, tau)? {
        return Err(Error::NotFree);
    }
    let p = moment_polytope(ws, tau)?;
    Ok(h_vector(&p))
}

/// Coefficients of `sum_d f_d (t-1)^d` for the face counts by dimension;
/// for a simple polytope these are the even Betti numbers of the quotient.
fn h_vector(p: &MomentPolytope) -> Vec<Int> {
    let dim = p.dim();
    let f = p.f_vector();
    let mut acc = vec![Int::zero(); dim + 1];
    for (d, &count) in f.iter().enumerate() {
        // (t - 1)^d expanded
        let mut pow = vec![Int::zero(); dim + 1];
        pow[0] = Int::one();
        for _ in 0..d {
            let mut next = vec![Int::zero(); dim + 1];
            for (i, c) in pow.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                next[i] -= c;
                if i + 1 <= dim {
                    next[i + 1] += c;
                }
            }
            pow = next;
        }
        for (a, c) in acc.iter_mut().zip(&pow) {
            *a += c * Int::from(count as i64);
        }
    }
    acc
}

/// Elementary symmetric polynomials of the generators, the Chern classes
/// of the quotient tangent bundle.
pub fn chern_classes(ws: &WeightSystem, tau: &[Rat]) -> Result<Vec<ClassCombo>, Error> {
    if !acts_freely(ws, tau)? {
        return Err(Error::NotFree);
    }
    let n = ws.n();
    let dim = n - ws.k();
    let mut out = Vec::with_capacity(dim);
    for j in 1..=dim {
        let terms: Vec<(Rat, Vec<u32>)> = (0..n)
            .combinations(j)
            .map(|subset| {
                let mut ell = vec![0u32; n];
                for nu in subset {
                    ell[nu] = 1;
                }
                (Rat::one(), ell)
            })
            .collect();
        out.push(ClassCombo::new(terms));
    }
    Ok(out)
}

/// True iff the parameter equals the sum of the weights.
pub fn monotone_check(ws: &WeightSystem, tau: &[Rat]) -> bool {
    let mono = ws.monotone_tau();
    tau.len() == mono.len()
        && tau
            .iter()
            .zip(&mono)
            .all(|(t, m)| *t == Rat::from_integer(m.clone()))
}

/// Quantum relation attached to a primitive collection (a minimal nonface
/// with at least two elements) at the monotone parameter: locate the sum
/// of its generators in a vertex cone, build the degree vector, and lift
/// it to the class lattice.
pub fn quantum_relation_for(
    ws: &WeightSystem,
    collection: &[usize],
) -> Result<QuantumRelation, Error> {
    let tau = ws.monotone_tau_rat();
    if !is_regular(ws, &tau) {
        return Err(Error::SingularParameter);
    }
    if !acts_freely(ws, &tau)? {
        return Err(Error::NotFree);
    }
    let n = ws.n();
    let polytope = moment_polytope(ws, &tau)?;
    // validity: empty face, proper subsets nonempty
    if face_nonempty(ws, &tau, collection)? {
        return Err(Error::ConstructionFailure(
            "collection has a nonempty face".into(),
        ));
    }
    for skip in collection {
        let sub: Vec<usize> = collection.iter().copied().filter(|x| x != skip).collect();
        if !face_nonempty(ws, &tau, &sub)? {
            return Err(Error::ConstructionFailure(
                "collection is not minimal".into(),
            ));
        }
    }

    let mut v = vec![Int::zero(); n];
    for &i in collection {
        v[i] = Int::one();
    }
    let (vertex, coeffs, _) = polytope.vertex_cone_containing(ws, &v)?;
    let mut support: Vec<(usize, Int)> = Vec::new();
    for (pos, &j) in vertex.iter().enumerate() {
        let c = &coeffs[pos];
        if !c.is_integer() {
            return Err(Error::ConstructionFailure(
                "vertex certificate must be integral under a free action".into(),
            ));
        }
        let ci = c.to_integer();
        if ci.is_positive() {
            support.push((j, ci));
        }
    }
    let shrunk: Vec<usize> = support.iter().map(|(j, _)| *j).collect();
    if collection.iter().any(|i| shrunk.contains(i)) {
        return Err(Error::ConstructionFailure(
            "collection meets its vertex support".into(),
        ));
    }
    let mut d = vec![Int::zero(); n];
    for &i in collection {
        d[i] = Int::one();
    }
    for (j, c) in &support {
        d[*j] = -c.clone();
    }
    let lambda = lift_degree_vector(ws, &d)?;
    let q_degree: Int = d.iter().sum::<Int>() * Int::from(2);
    let d_plus: Vec<u32> = d
        .iter()
        .map(|x| if x.is_positive() { int_to_i64(x) as u32 } else { 0 })
        .collect();
    let d_minus: Vec<u32> = d
        .iter()
        .map(|x| if x.is_negative() { int_to_i64(&-x.clone()) as u32 } else { 0 })
        .collect();
    Ok(QuantumRelation {
        d_plus,
        d_minus,
        lambda,
        q_degree,
    })
}

/// Quantum presentation at the monotone parameter: linear relations,
/// vanishing generators as singleton monomial relations, and one quantum
/// relation per primitive collection.
pub fn batyrev_presentation(ws: &WeightSystem) -> Result<RingPresentation, Error> {
    let tau = ws.monotone_tau_rat();
    if !is_regular(ws, &tau) {
        return Err(Error::SingularParameter);
    }
    if !acts_freely(ws, &tau)? {
        return Err(Error::NotFree);
    }
    if minimal_chern_number(ws) < Int::from(2) {
        return Err(Error::ChernNumberTooSmall);
    }
    let all: Vec<usize> = (0..ws.n()).collect();
    if cone_contains(ws, &all, &tau).is_none() {
        return Err(Error::EmptyQuotient);
    }
    let nonfaces = minimal_nonfaces(ws, &tau)?;
    let mut monomial = Vec::new();
    let mut quantum = Vec::new();
    for nf in &nonfaces {
        if nf.len() == 1 {
            monomial.push(nf.clone());
        } else {
            quantum.push(quantum_relation_for(ws, nf)?);
        }
    }
    Ok(RingPresentation {
        n: ws.n(),
        linear: kernel_relations(ws),
        monomial,
        quantum,
    })
}

/// The degree-two Gromov-Witten number of the monotone quotient: the
/// invariant of the weight monomial in the given curve class, with the
/// deformation-invariance shortcut outside the effective cone.
pub fn gw_invariant(
    ws: &WeightSystem,
    lambda: &[Int],
    ell: &[u32],
    opts: &EvalOptions,
) -> Result<Rat, Error> {
    let tau = ws.monotone_tau_rat();
    if !is_regular(ws, &tau) {
        return Err(Error::SingularParameter);
    }
    if !acts_freely(ws, &tau)? {
        return Err(Error::NotFree);
    }
    if minimal_chern_number(ws) < Int::from(2) {
        return Err(Error::ChernNumberTooSmall);
    }
    // lambda must pair to zero with every vanishing divisor class
    for nu in 0..ws.n() {
        if !face_nonempty(ws, &tau, &[nu])? && !ws.pairing(nu, lambda).is_zero() {
            return Err(Error::NotInH2);
        }
    }
    let eff = effective_cone(ws, &tau)?;
    if !eff.contains(lambda) {
        #[cfg(debug_assertions)]
        {
            let v = invariant_direct(ws, &tau, lambda, &ClassCombo::monomial(ell.to_vec()), opts)?;
            debug_assert!(v.is_zero(), "invariant vanishes outside the effective cone");
        }
        return Ok(Rat::zero());
    }
    invariant_direct(ws, &tau, lambda, &ClassCombo::monomial(ell.to_vec()), opts)
}

/// Outcome of the randomized exact verification of one quantum relation.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub trials: usize,
    pub passed: usize,
    pub failures: Vec<VerifyFailure>,
}

#[derive(Debug, Clone)]
pub struct VerifyFailure {
    pub lambda_prime: Vec<Int>,
    pub ell: Vec<u32>,
    pub lhs: Rat,
    pub rhs: Rat,
}

/// Check `Phi_{lambda'}(w^{d+ + ell}) = Phi_{lambda' - lambda}(w^{d- + ell})`
/// on seeded random degree-matched instances; exact equality, all
/// counterexamples reported.
pub fn verify_quantum_relation(
    ws: &WeightSystem,
    relation: &QuantumRelation,
    trials: usize,
    opts: &EvalOptions,
) -> Result<VerifyReport, Error> {
    let tau = ws.monotone_tau_rat();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5157_4152);
    let k = ws.k();
    let n = ws.n();
    let d_plus_total: i64 = relation.d_plus.iter().map(|&x| x as i64).sum();
    let mut failures = Vec::new();
    let mut passed = 0usize;
    for _ in 0..trials {
        // degree-matched sample: need m(lambda') - |d+| >= 0
        let mut lambda_prime: Vec<Int> = vec![Int::zero(); k];
        let mut rest = -1i64;
        for _ in 0..64 {
            let cand: Vec<Int> = (0..k).map(|_| Int::from(rng.gen_range(-2..=3))).collect();
            let m = int_to_i64(&ws.expected_dim(&cand));
            if m >= d_plus_total && m - d_plus_total <= 8 {
                lambda_prime = cand;
                rest = m - d_plus_total;
                break;
            }
        }
        if rest < 0 {
            // fall back to the relation class itself plus the witness
            lambda_prime = relation
                .lambda
                .iter()
                .zip(ws.witness())
                .map(|(a, b)| a + b)
                .collect();
            let m = int_to_i64(&ws.expected_dim(&lambda_prime));
            if m < d_plus_total {
                continue;
            }
            rest = m - d_plus_total;
        }
        // random composition of `rest` into n parts
        let mut ell = vec![0u32; n];
        for _ in 0..rest {
            let slot = rng.gen_range(0..n);
            ell[slot] += 1;
        }
        let lhs_ell: Vec<u32> = relation
            .d_plus
            .iter()
            .zip(&ell)
            .map(|(a, b)| a + b)
            .collect();
        let rhs_ell: Vec<u32> = relation
            .d_minus
            .iter()
            .zip(&ell)
            .map(|(a, b)| a + b)
            .collect();
        let lambda_rhs: Vec<Int> = lambda_prime
            .iter()
            .zip(&relation.lambda)
            .map(|(a, b)| a - b)
            .collect();
        let lhs = invariant_direct(ws, &tau, &lambda_prime, &ClassCombo::monomial(lhs_ell.clone()), opts)?;
        let rhs = invariant_direct(ws, &tau, &lambda_rhs, &ClassCombo::monomial(rhs_ell), opts)?;
        if lhs == rhs {
            passed += 1;
        } else {
            failures.push(VerifyFailure {
                lambda_prime: lambda_prime.clone(),
                ell,
                lhs,
                rhs,
            });
        }
    }
    Ok(VerifyReport {
        trials,
        passed,
        failures,
    })
}

/// Canonical column form of the lattice spanned by the given vectors;
/// equal lattices produce identical output.
pub fn lattice_canonical_columns(vectors: &[Vec<Int>], dim: usize) -> Vec<Vec<Int>> {
    if vectors.is_empty() {
        return vec![];
    }
    let mut m = IntMatrix::zero(dim, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        for i in 0..dim {
            *m.at_mut(i, j) = v[i].clone();
        }
    }
    let (rank, h, _) = crate::lattice::lattice_normal_form(&m);
    (0..rank).map(|c| h.col(c)).collect()
}

/// Effective-cone data for external checks on emitted relations.
pub fn relation_effective_data(ws: &WeightSystem) -> Result<EffectiveConeData, Error> {
    effective_cone(ws, &ws.monotone_tau_rat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{ivec, rat_int, rvec};

    fn example_threefold() -> WeightSystem {
        WeightSystem::from_i64(2, &[&[1, 0], &[1, 1], &[0, 1], &[0, 1], &[0, 1]]).unwrap()
    }

    fn cp2() -> WeightSystem {
        WeightSystem::from_i64(1, &[&[1], &[1], &[1]]).unwrap()
    }

    #[test]
    fn classical_cp2() {
        let p = classical_presentation(&cp2(), &rvec(&[1])).unwrap();
        // linear relations span {eta : sum eta = 0}
        let canon = lattice_canonical_columns(&p.linear, 3);
        let expect = lattice_canonical_columns(&[ivec(&[1, -1, 0]), ivec(&[0, 1, -1])], 3);
        assert_eq!(canon, expect);
        assert_eq!(p.monomial, vec![vec![0, 1, 2]]);
        assert!(p.quantum.is_empty());
    }

    #[test]
    fn classical_threefold() {
        let ws = example_threefold();
        let p = classical_presentation(&ws, &rvec(&[2, 4])).unwrap();
        assert_eq!(p.monomial, vec![vec![0, 1], vec![2, 3, 4]]);
        let canon = lattice_canonical_columns(&p.linear, 5);
        let expect = lattice_canonical_columns(
            &[
                ivec(&[-1, 1, -1, 0, 0]),
                ivec(&[0, 0, 1, -1, 0]),
                ivec(&[0, 0, 0, 1, -1]),
            ],
            5,
        );
        assert_eq!(canon, expect);
    }

    #[test]
    fn classical_product() {
        let p11 = WeightSystem::from_i64(2, &[&[1, 0], &[1, 0], &[0, 1], &[0, 1]]).unwrap();
        let p = classical_presentation(&p11, &rvec(&[2, 2])).unwrap();
        assert_eq!(p.monomial, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn betti_examples() {
        assert_eq!(
            betti_numbers(&cp2(), &rvec(&[1])).unwrap(),
            vec![Int::from(1), Int::from(1), Int::from(1)]
        );
        let p11 = WeightSystem::from_i64(2, &[&[1, 0], &[1, 0], &[0, 1], &[0, 1]]).unwrap();
        assert_eq!(
            betti_numbers(&p11, &rvec(&[2, 2])).unwrap(),
            vec![Int::from(1), Int::from(2), Int::from(1)]
        );
        let ws = example_threefold();
        let b = betti_numbers(&ws, &rvec(&[2, 4])).unwrap();
        assert_eq!(b, vec![Int::from(1), Int::from(2), Int::from(2), Int::from(1)]);
        let total: Int = b.iter().sum();
        assert_eq!(total, Int::from(6));
    }

    #[test]
    fn chern_and_monotone() {
        let ws = example_threefold();
        let c = chern_classes(&ws, &rvec(&[2, 4])).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c[0].terms.len(), 5);
        // c1 pairs with a class by the sum of the degrees
        let lambda = ivec(&[1, 0]);
        let d_sum: Int = ws.degrees(&lambda).into_iter().sum();
        assert_eq!(d_sum, Int::from(2));
        assert!(monotone_check(&ws, &rvec(&[2, 4])));
        assert!(!monotone_check(&ws, &rvec(&[2, 3])));
        // CP^2 pairing: c1 sums three degree-one pairings
        let c1 = &chern_classes(&cp2(), &rvec(&[1])).unwrap()[0];
        assert_eq!(c1.terms.len(), 3);
        let d_sum: Int = cp2().degrees(&ivec(&[1])).into_iter().sum();
        assert_eq!(d_sum, Int::from(3));
    }

    #[test]
    fn quantum_relation_cp2() {
        let rel = quantum_relation_for(&cp2(), &[0, 1, 2]).unwrap();
        assert_eq!(rel.d_plus, vec![1, 1, 1]);
        assert_eq!(rel.d_minus, vec![0, 0, 0]);
        assert_eq!(rel.lambda, ivec(&[1]));
        assert_eq!(rel.q_degree, Int::from(6));
    }

    #[test]
    fn quantum_relations_threefold() {
        let ws = example_threefold();
        let rel = quantum_relation_for(&ws, &[0, 1]).unwrap();
        assert_eq!(rel.d_plus, vec![1, 1, 0, 0, 0]);
        assert_eq!(rel.d_minus, vec![0, 0, 0, 0, 0]);
        assert_eq!(rel.lambda, ivec(&[1, 0]));
        assert_eq!(rel.q_degree, Int::from(4));

        let rel = quantum_relation_for(&ws, &[2, 3, 4]).unwrap();
        assert_eq!(rel.d_plus, vec![0, 0, 1, 1, 1]);
        assert_eq!(rel.d_minus, vec![1, 0, 0, 0, 0]);
        assert_eq!(rel.lambda, ivec(&[-1, 1]));
        assert_eq!(rel.q_degree, Int::from(4));
    }

    #[test]
    fn batyrev_threefold_exact() {
        let ws = example_threefold();
        let p = batyrev_presentation(&ws).unwrap();
        assert!(p.monomial.is_empty());
        assert_eq!(p.quantum.len(), 2);
        assert_eq!(p.quantum[0].d_plus, vec![1, 1, 0, 0, 0]);
        assert_eq!(p.quantum[1].d_plus, vec![0, 0, 1, 1, 1]);
        assert_eq!(p.quantum[1].d_minus, vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn batyrev_projective_spaces() {
        for n in 1..=3usize {
            let weights: Vec<Vec<Int>> = (0..=n).map(|_| vec![Int::one()]).collect();
            let ws = WeightSystem::new(1, weights).unwrap();
            let p = batyrev_presentation(&ws).unwrap();
            assert!(p.monomial.is_empty());
            assert_eq!(p.quantum.len(), 1);
            assert_eq!(p.quantum[0].d_plus, vec![1; n + 1]);
            assert_eq!(p.quantum[0].d_minus, vec![0; n + 1]);
            assert_eq!(p.quantum[0].lambda, ivec(&[1]));
            // linear relations identify all generators
            let canon = lattice_canonical_columns(&p.linear, n + 1);
            assert_eq!(canon.len(), n);
        }
    }

    #[test]
    fn batyrev_product() {
        let p11 = WeightSystem::from_i64(2, &[&[1, 0], &[1, 0], &[0, 1], &[0, 1]]).unwrap();
        let p = batyrev_presentation(&p11).unwrap();
        assert_eq!(p.quantum.len(), 2);
        assert_eq!(p.quantum[0].d_plus, vec![1, 1, 0, 0]);
        assert_eq!(p.quantum[0].lambda, ivec(&[1, 0]));
        assert_eq!(p.quantum[1].d_plus, vec![0, 0, 1, 1]);
        assert_eq!(p.quantum[1].lambda, ivec(&[0, 1]));
    }

    #[test]
    fn chern_number_gate() {
        // weights (1), (1): quotient is a point times ... minimal Chern
        // number 2; instead make N = 1: weights (1,0),(0,1),(1,1) has
        // tau = (2,2), gcd 2 -- use (1,0),(0,1) with tau=(1,1), gcd 1
        let ws = WeightSystem::from_i64(2, &[&[1, 0], &[0, 1]]).unwrap();
        assert!(matches!(
            batyrev_presentation(&ws),
            Err(Error::ChernNumberTooSmall)
        ));
    }

    #[test]
    fn gw_examples() {
        let opts = EvalOptions::default();
        assert_eq!(
            gw_invariant(&cp2(), &ivec(&[1]), &[1, 2, 2], &opts).unwrap(),
            rat_int(1)
        );
        assert_eq!(
            gw_invariant(&cp2(), &ivec(&[0]), &[0, 1, 1], &opts).unwrap(),
            rat_int(1)
        );
        // outside the effective cone
        assert_eq!(
            gw_invariant(&cp2(), &ivec(&[-1]), &[0, 0, 0], &opts).unwrap(),
            Rat::zero()
        );
    }

    #[test]
    fn verify_cp2_relation() {
        let rel = quantum_relation_for(&cp2(), &[0, 1, 2]).unwrap();
        let report = verify_quantum_relation(&cp2(), &rel, 25, &EvalOptions::default()).unwrap();
        assert_eq!(report.passed, report.trials);
        assert!(report.failures.is_empty());
    }

    #[test]
    fn corrupted_relation_fails() {
        let ws = example_threefold();
        let mut rel = quantum_relation_for(&ws, &[0, 1]).unwrap();
        // corrupt the class by an effective generator
        rel.lambda[1] += Int::from(1);
        let report = verify_quantum_relation(&ws, &rel, 40, &EvalOptions::default()).unwrap();
        assert!(
            !report.failures.is_empty(),
            "corrupted relation must produce a counterexample"
        );
    }

    #[test]
    fn emitted_relations_satisfy_invariants() {
        let ws = example_threefold();
        let p = batyrev_presentation(&ws).unwrap();
        let eff = relation_effective_data(&ws).unwrap();
        let tau = ws.monotone_tau();
        for rel in &p.quantum {
            // d+ - d- is the pairing vector of lambda
            for nu in 0..ws.n() {
                let diff = rel.d_plus[nu] as i64 - rel.d_minus[nu] as i64;
                assert_eq!(Int::from(diff), ws.pairing(nu, &rel.lambda));
            }
            assert!(eff.contains(&rel.lambda), "relation class is effective");
            // homogeneity: |d+| = |d-| + <tau, lambda>
            let lhs: i64 = rel.d_plus.iter().map(|&x| x as i64).sum();
            let rhs: i64 = rel.d_minus.iter().map(|&x| x as i64).sum();
            let pair: Int = tau
                .iter()
                .zip(&rel.lambda)
                .map(|(t, l)| t * l)
                .sum();
            assert_eq!(Int::from(lhs - rhs), pair);
            assert_eq!(rel.q_degree, pair * Int::from(2));
            // disjoint supports
            for nu in 0..ws.n() {
                assert!(rel.d_plus[nu] == 0 || rel.d_minus[nu] == 0);
            }
        }
    }

    #[test]
    fn minimal_nonfaces_match_bruteforce() {
        // soundness and completeness of the pruned enumeration
        for (ws, tau) in [
            (cp2(), rvec(&[1])),
            (example_threefold(), rvec(&[2, 4])),
            (
                WeightSystem::from_i64(2, &[&[1, 0], &[1, 0], &[0, 1], &[0, 1]]).unwrap(),
                rvec(&[2, 2]),
            ),
        ] {
            let fast = minimal_nonfaces(&ws, &tau).unwrap();
            let n = ws.n();
            let mut brute = Vec::new();
            for size in 1..=n {
                for candidate in (0..n).combinations(size) {
                    if face_nonempty(&ws, &tau, &candidate).unwrap() {
                        continue;
                    }
                    let minimal = candidate.iter().all(|skip| {
                        let sub: Vec<usize> = candidate
                            .iter()
                            .copied()
                            .filter(|x| x != skip)
                            .collect();
                        face_nonempty(&ws, &tau, &sub).unwrap()
                    });
                    if minimal {
                        brute.push(candidate);
                    }
                }
            }
            brute.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then(a.cmp(b)));
            assert_eq!(fast, brute);
        }
    }
}
