//! Dense-exponent multivariate polynomials over exact rationals.
//!
//! These carry the equivariant classes: a polynomial in the coordinates of
//! the torus Lie algebra with respect to the standard lattice basis.

use crate::lattice::{dot_rat, Rat};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A polynomial in `vars` variables; exponent vectors map to nonzero
/// rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MultiPoly {
    pub fn zero(vars: usize) -> Self {
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: Rat) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars], c);
        }
        p
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, Rat::one())
    }

    /// The `i`-th coordinate variable.
    pub fn var(vars: usize, i: usize) -> Self {
        assert!(i < vars);
        let mut e = vec![0u32; vars];
        e[i] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(e, Rat::one());
        p
    }

    /// Homogeneous linear form with the given coefficients.
    pub fn linear_form(coeffs: &[Rat]) -> Self {
        let vars = coeffs.len();
        let mut p = Self::zero(vars);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0u32; vars];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn monomial(vars: usize, exps: &[u32], coeff: Rat) -> Self {
        assert_eq!(exps.len(), vars);
        let mut p = Self::zero(vars);
        if !coeff.is_zero() {
            p.terms.insert(exps.to_vec(), coeff);
        }
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&vec![0u32; self.vars])
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// The part of the polynomial of total degree exactly `d`.
    pub fn homogeneous_component(&self, d: u32) -> Self {
        let mut p = Self::zero(self.vars);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() == d {
                p.terms.insert(e.clone(), c.clone());
            }
        }
        p
    }

    fn insert_term(&mut self, e: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let v = slot.get() + &c;
                if v.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, f: &Rat) -> Self {
        if f.is_zero() {
            return Self::zero(self.vars);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = &*c * f;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut out = Self::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                out = out.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Substitute each variable by a linear form in `new_vars` variables:
    /// `x_i = sum_j matrix[i][j] * y_j`.
    pub fn substitute_linear(&self, matrix: &[Vec<Rat>], new_vars: usize) -> Self {
        assert_eq!(matrix.len(), self.vars);
        for row in matrix {
            assert_eq!(row.len(), new_vars);
        }
        let forms: Vec<MultiPoly> = matrix.iter().map(|r| MultiPoly::linear_form(r)).collect();
        let mut out = Self::zero(new_vars);
        for (e, c) in &self.terms {
            let mut term = Self::constant(new_vars, c.clone());
            for (i, &p) in e.iter().enumerate() {
                if p > 0 {
                    term = term.mul(&forms[i].pow(p));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.vars);
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    t = &t * &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Decompose along the last variable: returns coefficients `P_p` with
    /// `P = sum_p P_p(front vars) * z^p`, indexed by `p`.
    pub fn coefficients_in_last_var(&self) -> BTreeMap<u32, MultiPoly> {
        assert!(self.vars >= 1);
        let front = self.vars - 1;
        let mut out: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let p = e[front];
            let fe = e[..front].to_vec();
            out.entry(p)
                .or_insert_with(|| MultiPoly::zero(front))
                .insert_term(fe, c.clone());
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Reinterpret in `vars + extra` variables (new trailing variables
    /// never occur).
    pub fn extend_vars(&self, extra: usize) -> Self {
        let mut out = Self::zero(self.vars + extra);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.extend(std::iter::repeat(0).take(extra));
            out.terms.insert(e2, c.clone());
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (i, &p) in e.iter().enumerate() {
                if p == 1 {
                    write!(f, "*x{}", i + 1)?;
                } else if p > 1 {
                    write!(f, "*x{}^{}", i + 1, p)?;
                }
            }
        }
        Ok(())
    }
}

/// A factor `(a z + b)^exponent` of a residue integrand: `a` pairs with the
/// residue variable, `b` is a homogeneous linear form in the remaining
/// variables, and the exponent may be negative.
#[derive(Debug, Clone)]
pub struct LinearFactor {
    pub a: Rat,
    pub b: MultiPoly,
    pub exponent: i64,
}

impl LinearFactor {
    pub fn new(a: Rat, b: MultiPoly, exponent: i64) -> Self {
        LinearFactor { a, b, exponent }
    }
}

/// Linear form `<w, xi>` as a polynomial, from an integer covector.
pub fn pairing_form(w: &[crate::lattice::Int]) -> MultiPoly {
    let coeffs: Vec<Rat> = w.iter().map(|x| Rat::from_integer(x.clone())).collect();
    MultiPoly::linear_form(&coeffs)
}

/// Evaluate a linear substitution matrix row `<w, M y>`.
pub fn substituted_pairing(w: &[Rat], matrix_cols: &[Vec<Rat>]) -> Vec<Rat> {
    matrix_cols.iter().map(|col| dot_rat(w, col)).collect()
}
