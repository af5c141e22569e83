//! Arbitrary-precision integer/rational arithmetic and integer-lattice
//! linear algebra. Everything downstream (cones, residues, invariants)
//! is built on the exact routines in this module.

use crate::error::Error;
use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

/// `b^e` for a nonzero rational base and a (possibly negative) exponent.
pub fn rat_pow(base: &Rat, exp: i64) -> Rat {
    if exp == 0 {
        return Rat::one();
    }
    let p = base.pow(exp.unsigned_abs() as i32);
    if exp > 0 {
        p
    } else {
        p.recip()
    }
}

pub fn ivec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn rvec(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rat_int(x)).collect()
}

/// Exact pairing of an integer covector with an integer vector.
pub fn dot(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Pairing of a rational covector with an integer vector.
pub fn dot_rat_int(a: &[Rat], b: &[Int]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| x * Rat::from_integer(y.clone()))
        .sum()
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A dense matrix of arbitrary-precision integers, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Int>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Int>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        IntMatrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Int::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Int>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().cloned());
        }
        IntMatrix { rows: r, cols: c, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Int {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Int {
        &mut self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Int] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Int> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Int::zero();
                for t in 0..self.cols {
                    acc += self.at(i, t) * other.at(t, j);
                }
                *out.at_mut(i, j) = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }

    /// Determinant by exact fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut m: Vec<Vec<Int>> = (0..n).map(|r| self.row(r).to_vec()).collect();
        let mut prev = Int::one();
        let mut sign = 1i32;
        for p in 0..n - 1 {
            if m[p][p].is_zero() {
                let Some(swap) = (p + 1..n).find(|&r| !m[r][p].is_zero()) else {
                    return Int::zero();
                };
                m.swap(p, swap);
                sign = -sign;
            }
            for r in p + 1..n {
                for c in p + 1..n {
                    let num = &m[p][p] * &m[r][c] - &m[r][p] * &m[p][c];
                    let (q, rem) = num.div_rem(&prev);
                    debug_assert!(rem.is_zero());
                    m[r][c] = q;
                }
                m[r][p] = Int::zero();
            }
            prev = m[p][p].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Rank via the column normal form.
    pub fn rank(&self) -> usize {
        lattice_normal_form(self).0
    }
}

/// Column-style Hermite normal form.
///
/// Returns `(rank, H, U)` with `U` unimodular and `M * U = H`. The
/// convention is fixed so tests can be bit-exact: pivot columns come
/// first, each pivot is the first nonzero entry of its column, pivots
/// are positive, pivot rows strictly increase with the column index,
/// entries in a pivot row to the left of the pivot are reduced to lie
/// in `[0, pivot)`, and all columns past the rank are zero.
pub fn lattice_normal_form(m: &IntMatrix) -> (usize, IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = IntMatrix::identity(cols);
    let mut pivot_col = 0usize;

    let col_op_swap = |h: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize| {
        for r in 0..rows {
            let (x, y) = (h.at(r, a).clone(), h.at(r, b).clone());
            *h.at_mut(r, a) = y;
            *h.at_mut(r, b) = x;
        }
        for r in 0..cols {
            let (x, y) = (u.at(r, a).clone(), u.at(r, b).clone());
            *u.at_mut(r, a) = y;
            *u.at_mut(r, b) = x;
        }
    };
    // columns (a, b) <- (x*a + y*b, s*a + t*b); the 2x2 block must be unimodular
    let col_op_2x2 =
        |h: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize, x: &Int, y: &Int, s: &Int, t: &Int| {
            for r in 0..rows {
                let (p, q) = (h.at(r, a).clone(), h.at(r, b).clone());
                *h.at_mut(r, a) = x * &p + y * &q;
                *h.at_mut(r, b) = s * &p + t * &q;
            }
            for r in 0..cols {
                let (p, q) = (u.at(r, a).clone(), u.at(r, b).clone());
                *u.at_mut(r, a) = x * &p + y * &q;
                *u.at_mut(r, b) = s * &p + t * &q;
            }
        };
    let col_addmul = |h: &mut IntMatrix, u: &mut IntMatrix, dst: usize, src: usize, f: &Int| {
        for r in 0..rows {
            let add = h.at(r, src) * f;
            *h.at_mut(r, dst) += add;
        }
        for r in 0..cols {
            let add = u.at(r, src) * f;
            *u.at_mut(r, dst) += add;
        }
    };
    let col_negate = |h: &mut IntMatrix, u: &mut IntMatrix, c: usize| {
        for r in 0..rows {
            let v = -h.at(r, c).clone();
            *h.at_mut(r, c) = v;
        }
        for r in 0..cols {
            let v = -u.at(r, c).clone();
            *u.at_mut(r, c) = v;
        }
    };

    for r in 0..rows {
        if pivot_col == cols {
            break;
        }
        if (pivot_col..cols).all(|c| h.at(r, c).is_zero()) {
            continue;
        }
        // gather gcd of row r into pivot_col by extended-euclid column ops
        for c in pivot_col + 1..cols {
            if h.at(r, c).is_zero() {
                continue;
            }
            if h.at(r, pivot_col).is_zero() {
                col_op_swap(&mut h, &mut u, pivot_col, c);
                continue;
            }
            let a = h.at(r, pivot_col).clone();
            let b = h.at(r, c).clone();
            let eg = a.extended_gcd(&b);
            // (g, x, y) with x*a + y*b = g; kill column c via (b/g, -a/g)
            let bg = &b / &eg.gcd;
            let ag = &a / &eg.gcd;
            col_op_2x2(&mut h, &mut u, pivot_col, c, &eg.x, &eg.y, &bg, &(-ag));
        }
        if h.at(r, pivot_col).is_negative() {
            col_negate(&mut h, &mut u, pivot_col);
        }
        // reduce entries of row r in earlier pivot columns modulo the pivot
        let pivot = h.at(r, pivot_col).clone();
        for c in 0..pivot_col {
            let v = h.at(r, c).clone();
            let q = v.div_floor(&pivot);
            if !q.is_zero() {
                col_addmul(&mut h, &mut u, c, pivot_col, &(-q));
            }
        }
        pivot_col += 1;
    }
    (pivot_col, h, u)
}

/// Basis of the saturated integer kernel `{v : M v = 0}`.
///
/// The columns of the unimodular transform lying over the zero columns of
/// the normal form are automatically a basis of the full kernel lattice.
pub fn integer_kernel_basis(m: &IntMatrix) -> Vec<Vec<Int>> {
    let (rank, _, u) = lattice_normal_form(m);
    (rank..m.cols()).map(|c| u.col(c)).collect()
}

/// Divides a nonzero integer vector by the gcd of its entries.
pub fn primitive_vector(v: &[Int]) -> Result<Vec<Int>, Error> {
    let mut g = Int::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

/// `|det(<w_nu, e_j>)|` of `k` covectors in the standard lattice basis.
/// Zero signals linear dependence.
pub fn det_abs_in_lattice(covectors: &[Vec<Int>]) -> Int {
    let k = covectors.len();
    for v in covectors {
        assert_eq!(v.len(), k, "need exactly k covectors of length k");
    }
    IntMatrix::from_rows(covectors).det().abs()
}

/// An integral basis of the lattice together with its orientation sign
/// relative to the standard basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedBasis {
    pub vectors: Vec<Vec<Int>>,
    pub sign: i8,
}

impl OrientedBasis {
    pub fn det(&self) -> Int {
        IntMatrix::from_rows(&self.vectors).det()
    }
}

/// Solve `A x = b` exactly over the rationals, `A` given by rows.
/// Returns any solution (free variables pinned to zero, deterministic
/// pivot order) or `None` if the system is inconsistent.
pub fn solve_rational(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut v = row.clone();
            v.push(rhs.clone());
            v
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut r = 0usize;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone().recip();
        for j in c..=cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let sub = &m[r][j] * &f;
                    m[i][j] = &m[i][j] - &sub;
                }
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
        if r == rows {
            break;
        }
    }
    // consistency: zero rows must have zero rhs
    for i in r..rows {
        if !m[i][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); cols];
    for c in 0..cols {
        if let Some(p) = pivot_of_col[c] {
            x[c] = m[p][cols].clone();
        }
    }
    // in echelon form with full back-substitution the pivot value is the answer,
    // but free columns interleaved before later pivots still contribute: since
    // free variables are zero, the pivot rows read off directly.
    Some(x)
}

/// Rank of a set of rational covectors.
pub fn rank_rational(rows: &[Vec<Rat>]) -> usize {
    let nrows = rows.len();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut rank = 0usize;
    for c in 0..cols {
        let Some(p) = (rank..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][c].clone().recip();
        for j in c..cols {
            m[rank][j] = &m[rank][j] * &inv;
        }
        for i in 0..nrows {
            if i != rank && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let sub = &m[rank][j] * &f;
                    m[i][j] = &m[i][j] - &sub;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

pub fn int_rows_to_rat(rows: &[Vec<Int>]) -> Vec<Vec<Rat>> {
    rows.iter()
        .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect()
}

/// Exact inverse of a unimodular integer matrix.
fn unimodular_inverse(m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let rows = int_rows_to_rat(&(0..n).map(|r| m.row(r).to_vec()).collect::<Vec<_>>());
    let mut inv_cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[j] = Rat::one();
        let x = solve_rational(&rows, &e).expect("unimodular matrix is invertible");
        inv_cols.push(x);
    }
    let mut out = IntMatrix::zero(n, n);
    for (j, col) in inv_cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            assert!(v.is_integer(), "inverse of a unimodular matrix is integral");
            *out.at_mut(i, j) = v.to_integer();
        }
    }
    out
}

/// Completes a primitive vector to a lattice basis `(v, f_2, ..., f_k)`
/// with determinant +1 (columns in that order). Deterministic.
pub fn complete_primitive_to_basis(v: &[Int]) -> Result<Vec<Vec<Int>>, Error> {
    let k = v.len();
    let prim = primitive_vector(v)?;
    assert_eq!(prim, v, "vector must be primitive");
    // column normal form of the single row v^T: v^T * U = (1, 0, ..., 0)
    let row = IntMatrix::new(1, k, v.to_vec());
    let (rank, h, u) = lattice_normal_form(&row);
    assert_eq!(rank, 1);
    assert!(h.at(0, 0).is_one(), "primitive vector has unit gcd");
    // W = (U^T)^{-1} has first column v
    let ut = {
        let mut t = IntMatrix::zero(k, k);
        for i in 0..k {
            for j in 0..k {
                *t.at_mut(i, j) = u.at(j, i).clone();
            }
        }
        t
    };
    let w = unimodular_inverse(&ut);
    let mut cols: Vec<Vec<Int>> = (0..k).map(|c| w.col(c)).collect();
    debug_assert_eq!(cols[0], v);
    // fix global orientation by flipping the second column if needed
    let det = IntMatrix::from_rows(&transpose(&cols)).det();
    if det == -Int::one() {
        if k >= 2 {
            for x in cols[1].iter_mut() {
                *x = -x.clone();
            }
        } else {
            unreachable!("1x1 unimodular with positive pivot has det 1");
        }
    }
    Ok(cols)
}

fn transpose(cols: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let n = cols.len();
    let m = cols.first().map_or(0, |c| c.len());
    (0..m)
        .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
        .collect()
}

/// Integral basis adapted to an increasing chain of covector spans.
///
/// Input: cumulative covector sets `E_1 ⊂ … ⊂ E_k` with `dim E_j = j`.
/// Output: a positively oriented basis `e_1..e_k` of the lattice such that
/// `e_j, …, e_k` annihilate `E_{j-1}` for every `j ≥ 2`. The residual
/// freedom `e_j ↦ ±e_j + Σ_{i>j} a_ij e_i` is resolved deterministically:
/// each `e_j` is produced by the unit-cofactor completion below and the
/// global orientation is fixed by the sign of `e_1`.
pub fn adapted_oriented_basis(chain: &[Vec<Vec<Int>>]) -> Result<OrientedBasis, Error> {
    let k = chain.len();
    if k == 0 {
        return Err(Error::InvalidChain);
    }
    let dim = chain
        .last()
        .and_then(|s| s.first())
        .map(|v| v.len())
        .ok_or(Error::InvalidChain)?;
    if dim != k {
        return Err(Error::InvalidChain);
    }
    for (j, span) in chain.iter().enumerate() {
        if rank_rational(&int_rows_to_rat(span)) != j + 1 {
            return Err(Error::InvalidChain);
        }
        if j > 0 {
            // chain must be increasing: earlier covectors must sit inside later spans;
            // callers pass cumulative sets so this is a cheap subset check.
            for v in &chain[j - 1] {
                if !span.contains(v) {
                    return Err(Error::InvalidChain);
                }
            }
        }
    }

    // annihilator lattices L_j = {v : <w, v> = 0 for w in E_j}, L_0 = Z^k
    let mut basis_rev: Vec<Vec<Int>> = Vec::with_capacity(k); // e_k, e_{k-1}, ..., e_1
    for j in (1..=k).rev() {
        // L_{j-1}
        let ann: Vec<Vec<Int>> = if j == 1 {
            IntMatrix::identity(k).entries_rows()
        } else {
            integer_kernel_basis(&IntMatrix::from_rows(&chain[j - 2]))
        };
        let rank = ann.len();
        assert_eq!(rank, k - (j - 1), "annihilator rank");
        // coordinates of the already-chosen e_{j+1}..e_k in the ann basis
        let ann_rat = int_rows_to_rat(&transpose(&ann)); // columns = ann basis
        let mut coord_cols: Vec<Vec<Int>> = Vec::new();
        for e in &basis_rev {
            let target: Vec<Rat> = e.iter().map(|x| Rat::from_integer(x.clone())).collect();
            let sol = solve_rational(&ann_rat, &target).expect("chain vectors lie in annihilator");
            let coords: Vec<Int> = sol
                .iter()
                .map(|v| {
                    assert!(v.is_integer(), "saturated sublattice coordinates are integral");
                    v.to_integer()
                })
                .collect();
            coord_cols.push(coords);
        }
        // unit-cofactor completion: find c with det(c, coords...) = 1
        let c = complete_in_lattice(rank, &coord_cols)?;
        let e: Vec<Int> = (0..k)
            .map(|i| {
                (0..rank)
                    .map(|t| &ann[t][i] * &c[t])
                    .sum::<Int>()
            })
            .collect();
        basis_rev.push(e);
    }
    basis_rev.reverse();
    let mut vectors = basis_rev;
    let det = IntMatrix::from_rows(&vectors).det();
    debug_assert!(det.clone().abs().is_one());
    if det.is_negative() {
        for x in vectors[0].iter_mut() {
            *x = -x.clone();
        }
    }
    // the basis rows are e_1..e_k; orientation is det of the matrix whose
    // ROWS are the e_i, equal to det of the column matrix by transpose.
    debug_assert!(IntMatrix::from_rows(&vectors).det().is_one());
    Ok(OrientedBasis { vectors, sign: 1 })
}

impl IntMatrix {
    fn entries_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
}

/// Given columns `c_1..c_{m-1}` spanning a saturated corank-one sublattice
/// of `Z^m`, produce `c` with `det(c, c_1, ..., c_{m-1}) = 1`.
fn complete_in_lattice(m: usize, cols: &[Vec<Int>]) -> Result<Vec<Int>, Error> {
    assert_eq!(cols.len() + 1, m);
    if m == 1 {
        return Ok(vec![Int::one()]);
    }
    // cofactor covector: phi(x) = det(x | cols)
    let mut phi = Vec::with_capacity(m);
    for i in 0..m {
        // minor: delete row i of the m x (m-1) column matrix
        let rows: Vec<Vec<Int>> = (0..m)
            .filter(|&r| r != i)
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        let minor = IntMatrix::from_rows(&rows).det();
        let sgn = if i % 2 == 0 { Int::one() } else { -Int::one() };
        phi.push(sgn * minor);
    }
    // saturation means gcd(phi) = 1; find c with phi(c) = 1
    let c = multi_extended_gcd(&phi)?;
    debug_assert!(dot(&phi, &c).is_one());
    Ok(c)
}

/// Deterministic coefficients `c` with `sum c_i * a_i = gcd(a) = 1`.
fn multi_extended_gcd(a: &[Int]) -> Result<Vec<Int>, Error> {
    let mut g = Int::zero();
    let mut coeffs: Vec<Int> = Vec::with_capacity(a.len());
    for x in a {
        if g.is_zero() {
            if x.is_zero() {
                coeffs.push(Int::zero());
            } else {
                let s = if x.is_negative() { -Int::one() } else { Int::one() };
                g = x.clone().abs();
                coeffs.push(s);
            }
            continue;
        }
        let eg = g.extended_gcd(x);
        for c in coeffs.iter_mut() {
            *c = &*c * &eg.x;
        }
        coeffs.push(eg.y.clone());
        g = eg.gcd;
    }
    if !g.is_one() {
        return Err(Error::ConstructionFailure(
            "expected unit gcd for a saturated sublattice".into(),
        ));
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| ivec(r)).collect::<Vec<_>>())
    }

    #[test]
    fn hnf_identity_and_diagonal_fixed() {
        let id = mat(&[&[1, 0], &[0, 1]]);
        let (rank, h, u) = lattice_normal_form(&id);
        assert_eq!(rank, 2);
        assert_eq!(h, id);
        assert_eq!(u, IntMatrix::identity(2));

        let d = mat(&[&[2, 0], &[0, 3]]);
        let (rank, h, u) = lattice_normal_form(&d);
        assert_eq!(rank, 2);
        assert_eq!(h, d);
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn hnf_row_gcd() {
        let m = mat(&[&[2, 3]]);
        let (rank, h, u) = lattice_normal_form(&m);
        assert_eq!(rank, 1);
        assert_eq!(h, mat(&[&[1, 0]]));
        assert_eq!(m.mul(&u), h);
        assert!(u.det().abs().is_one());
    }

    #[test]
    fn kernel_of_cp2_weights() {
        let m = mat(&[&[1, 1, 1]]);
        let basis = integer_kernel_basis(&m);
        assert_eq!(basis.len(), 2);
        for b in &basis {
            assert!(m.mul_vec(b).iter().all(|x| x.is_zero()));
        }
        // (1,-1,0) and (0,1,-1) must be integer combinations of the basis
        for target in [ivec(&[1, -1, 0]), ivec(&[0, 1, -1])] {
            assert!(in_integer_span(&basis, &target));
        }
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let m = IntMatrix::identity(3);
        assert!(integer_kernel_basis(&m).is_empty());
    }

    #[test]
    fn kernel_of_three_fold_weight_matrix() {
        // weights (1,0),(1,1),(0,1),(0,1),(0,1) as columns of a 2x5 matrix
        let m = mat(&[&[1, 1, 0, 0, 0], &[0, 1, 1, 1, 1]]);
        let basis = integer_kernel_basis(&m);
        assert_eq!(basis.len(), 3);
        for b in &basis {
            assert!(m.mul_vec(b).iter().all(|x| x.is_zero()));
        }
        assert!(in_integer_span(&basis, &ivec(&[1, -1, 1, 0, 0])));
    }

    fn in_integer_span(basis: &[Vec<Int>], v: &[Int]) -> bool {
        if basis.is_empty() {
            return v.iter().all(|x| x.is_zero());
        }
        let cols = int_rows_to_rat(&super::transpose(&basis.to_vec()));
        let rhs: Vec<Rat> = v.iter().map(|x| Rat::from_integer(x.clone())).collect();
        match solve_rational(&cols, &rhs) {
            Some(sol) => {
                // verify: solution must be integral and reproduce v
                if !sol.iter().all(|c| c.is_integer()) {
                    return false;
                }
                let mut acc = vec![Int::zero(); v.len()];
                for (c, b) in sol.iter().zip(basis) {
                    for (a, x) in acc.iter_mut().zip(b) {
                        *a += c.to_integer() * x;
                    }
                }
                acc == v
            }
            None => false,
        }
    }

    #[test]
    fn primitive_vector_examples() {
        assert_eq!(primitive_vector(&ivec(&[2, -4])).unwrap(), ivec(&[1, -2]));
        assert_eq!(primitive_vector(&ivec(&[1, -1])).unwrap(), ivec(&[1, -1]));
        assert_eq!(primitive_vector(&ivec(&[0, 6, 9])).unwrap(), ivec(&[0, 2, 3]));
        assert_eq!(primitive_vector(&ivec(&[0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn det_abs_examples() {
        assert_eq!(det_abs_in_lattice(&[ivec(&[1, 0]), ivec(&[0, 1])]), int(1));
        assert_eq!(det_abs_in_lattice(&[ivec(&[1, 1]), ivec(&[0, 1])]), int(1));
        assert_eq!(det_abs_in_lattice(&[ivec(&[2])]), int(2));
        assert_eq!(det_abs_in_lattice(&[ivec(&[1, 2]), ivec(&[2, 4])]), int(0));
    }

    #[test]
    fn adapted_basis_k1() {
        let chain = vec![vec![ivec(&[1])]];
        let b = adapted_oriented_basis(&chain).unwrap();
        assert_eq!(b.vectors, vec![ivec(&[1])]);
        assert_eq!(b.sign, 1);
    }

    #[test]
    fn adapted_basis_k2() {
        // E_1 = span{(1,1)}, E_2 = R^2
        let chain = vec![
            vec![ivec(&[1, 1])],
            vec![ivec(&[1, 1]), ivec(&[1, 0])],
        ];
        let b = adapted_oriented_basis(&chain).unwrap();
        assert!(b.det().is_one());
        // e_2 annihilates (1,1)
        assert!(dot(&ivec(&[1, 1]), &b.vectors[1]).is_zero());
        let e2 = &b.vectors[1];
        assert!(e2 == &ivec(&[1, -1]) || e2 == &ivec(&[-1, 1]));
    }

    #[test]
    fn adapted_basis_rejects_bad_chain() {
        let chain = vec![vec![ivec(&[1, 0]), ivec(&[0, 1])]];
        assert_eq!(adapted_oriented_basis(&chain), Err(Error::InvalidChain));
    }

    #[test]
    fn complete_primitive_examples() {
        for v in [ivec(&[2, 3]), ivec(&[1, 0]), ivec(&[0, -1]), ivec(&[3, 5, 7])] {
            let cols = complete_primitive_to_basis(&v).unwrap();
            assert_eq!(cols[0], v);
            let det = IntMatrix::from_rows(&super::transpose(&cols)).det();
            assert!(det.is_one());
        }
    }

    proptest! {
        #[test]
        fn hnf_properties(rows in 1usize..4, cols in 1usize..5, seed in any::<u64>()) {
            let mut s = seed;
            let mut next = || {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((s >> 33) % 13) as i64 - 6
            };
            let m = IntMatrix::from_rows(
                &(0..rows).map(|_| (0..cols).map(|_| int(next())).collect()).collect::<Vec<_>>(),
            );
            let (rank, h, u) = lattice_normal_form(&m);
            prop_assert!(u.det().abs().is_one());
            prop_assert_eq!(m.mul(&u), h.clone());
            // zero columns past the rank
            for c in rank..cols {
                for r in 0..rows {
                    prop_assert!(h.at(r, c).is_zero());
                }
            }
            // echelon shape: strictly increasing positive pivots, reduced row entries
            let mut prev_row: Option<usize> = None;
            for c in 0..rank {
                let pr = (0..rows).find(|&r| !h.at(r, c).is_zero()).unwrap();
                if let Some(p) = prev_row {
                    prop_assert!(pr > p);
                }
                prop_assert!(h.at(pr, c).is_positive());
                for c2 in 0..c {
                    prop_assert!(!h.at(pr, c2).is_negative());
                    prop_assert!(h.at(pr, c2) < h.at(pr, c));
                }
                prev_row = Some(pr);
            }
        }

        #[test]
        fn kernel_is_saturated(rows in 1usize..3, cols in 1usize..4, seed in any::<u64>()) {
            let mut s = seed;
            let mut next = || {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((s >> 33) % 7) as i64 - 3
            };
            let m = IntMatrix::from_rows(
                &(0..rows).map(|_| (0..cols).map(|_| int(next())).collect()).collect::<Vec<_>>(),
            );
            let basis = integer_kernel_basis(&m);
            for b in &basis {
                prop_assert!(m.mul_vec(b).iter().all(|x| x.is_zero()));
            }
            // brute-force saturation oracle over a small box
            let bound = 2i64;
            let mut idx = vec![-bound; cols];
            loop {
                let v: Vec<Int> = idx.iter().map(|&x| int(x)).collect();
                if m.mul_vec(&v).iter().all(|x| x.is_zero()) {
                    prop_assert!(in_integer_span(&basis, &v));
                }
                let mut carry = true;
                for slot in idx.iter_mut() {
                    if carry {
                        *slot += 1;
                        if *slot > bound {
                            *slot = -bound;
                        } else {
                            carry = false;
                        }
                    }
                }
                if carry {
                    break;
                }
            }
        }

        #[test]
        fn rational_roundtrip(n in -1000i64..1000, d in 1i64..1000, num2 in -50i64..50, den2 in 1i64..50) {
            let a = rat(n, d);
            let b = rat(num2.max(1), den2);
            prop_assert_eq!((&a / &b) * &b, a);
        }
    }
}
