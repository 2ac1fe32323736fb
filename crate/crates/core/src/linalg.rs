//! Exact rational linear algebra: arbitrary-precision rationals, reduced row
//! echelon form, subspaces as canonical echelon bases, and affine solving.
//!
//! No floating point and no epsilon tolerances anywhere; every comparison is
//! exact. Subspace bases are kept in reduced echelon form at all times, so two
//! subspaces are equal iff their stored bases are identical, and all reported
//! bases are canonical.

use crate::par;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// Exact scalar type for the whole crate.
pub type Rat = BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Reduced fraction `n/d`. Panics on `d = 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical `num/den` rendering used by every JSON report.
pub fn format_rat(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `num/den` (or a bare integer) into a reduced rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.trim().parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rat::new(n, d))
}

/// Sparse vector: `(coordinate, value)` pairs, strictly increasing coordinates,
/// no explicit zeros.
pub type SparseVec = Vec<(usize, Rat)>;

/// Drops zeros and sorts a term list into a valid sparse vector, merging
/// duplicate coordinates.
pub fn sparse_normalize(mut terms: Vec<(usize, Rat)>) -> SparseVec {
    terms.sort_by_key(|t| t.0);
    let mut out: SparseVec = Vec::with_capacity(terms.len());
    for (c, x) in terms {
        match out.last_mut() {
            Some((lc, lx)) if *lc == c => *lx += x,
            _ => out.push((c, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

pub fn sparse_from_dense(v: &[Rat]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn dense_from_sparse(v: &[(usize, Rat)], ambient: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); ambient];
    for (c, x) in v {
        out[*c] = x.clone();
    }
    out
}

/// `v + c * w` as a sorted merge, dropping exact zeros.
pub fn sparse_axpy(v: &[(usize, Rat)], c: &Rat, w: &[(usize, Rat)]) -> SparseVec {
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() && j < w.len() {
        match v[i].0.cmp(&w[j].0) {
            std::cmp::Ordering::Less => {
                out.push(v[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                let x = c * &w[j].1;
                if !x.is_zero() {
                    out.push((w[j].0, x));
                }
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let x = &v[i].1 + c * &w[j].1;
                if !x.is_zero() {
                    out.push((v[i].0, x));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&v[i..]);
    for (cw, x) in &w[j..] {
        let x = c * x;
        if !x.is_zero() {
            out.push((*cw, x));
        }
    }
    out
}

pub fn sparse_sub(v: &[(usize, Rat)], w: &[(usize, Rat)]) -> SparseVec {
    sparse_axpy(v, &-Rat::one(), w)
}

pub fn sparse_scale(v: &[(usize, Rat)], c: &Rat) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, c * x)).collect()
}

#[derive(Debug, Clone, Error, PartialEq, Eq, Serialize)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

fn check_dim(expected: usize, got: usize) -> Result<(), LinalgError> {
    if expected == got {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch { expected, got })
    }
}

fn check_sparse(ambient: usize, v: &[(usize, Rat)]) -> Result<(), LinalgError> {
    match v.last() {
        Some((c, _)) if *c >= ambient => Err(LinalgError::DimensionMismatch { expected: ambient, got: *c + 1 }),
        _ => Ok(()),
    }
}

/// A linear subspace of `Q^ambient`, stored as a reduced-echelon basis keyed by
/// pivot coordinate. Rows are monic at their pivot and zero at every other
/// pivot, so the representation is canonical: equal subspaces compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: BTreeMap<usize, SparseVec>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: BTreeMap::new() }
    }

    /// Echelonizes a batch of sparse vectors. Large batches are periodically
    /// pre-reduced in parallel against the basis built so far.
    pub fn span_sparse(ambient: usize, vecs: Vec<SparseVec>) -> Result<Self, LinalgError> {
        let mut sub = Subspace::zero(ambient);
        sub.absorb(vecs)?;
        Ok(sub)
    }

    /// Dense-vector convenience for [`Subspace::span_sparse`].
    pub fn span(ambient: usize, vecs: &[Vec<Rat>]) -> Result<Self, LinalgError> {
        for v in vecs {
            check_dim(ambient, v.len())?;
        }
        Self::span_sparse(ambient, vecs.iter().map(|v| sparse_from_dense(v)).collect())
    }

    /// Inserts a batch, keeping the echelon invariant. Returns how many vectors
    /// increased the rank.
    pub fn absorb(&mut self, mut pending: Vec<SparseVec>) -> Result<usize, LinalgError> {
        for v in &pending {
            check_sparse(self.ambient, v)?;
        }
        let mut grew = 0;
        // Sweep threshold: once this many insertions happened since the last
        // sweep, reduce the whole backlog in parallel and drop dependents.
        const SWEEP_EVERY: usize = 48;
        let mut since_sweep = 0;
        while !pending.is_empty() {
            if since_sweep >= SWEEP_EVERY && pending.len() > 128 {
                let sub = &*self;
                pending = par::map_vec(pending, |v| sub.reduce_sparse(v));
                pending.retain(|v| !v.is_empty());
                since_sweep = 0;
                continue;
            }
            let v = pending.pop().unwrap();
            if self.insert_sparse(v) {
                grew += 1;
                since_sweep += 1;
            }
        }
        Ok(grew)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    /// Coordinates not used as pivots; they index a basis of the quotient space.
    pub fn complement_coords(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.rows.contains_key(c)).collect()
    }

    pub fn basis_sparse(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }

    pub fn basis_dense(&self) -> Vec<Vec<Rat>> {
        self.rows.values().map(|r| dense_from_sparse(r, self.ambient)).collect()
    }

    /// Fully reduces `v` against the basis; the result is zero iff `v` is a member.
    pub fn reduce_sparse(&self, v: SparseVec) -> SparseVec {
        let mut v = v;
        let mut i = 0;
        while i < v.len() {
            let c = v[i].0;
            if let Some(row) = self.rows.get(&c) {
                let coeff = -v[i].1.clone();
                // `row` starts at its pivot `c`, so entries before position `i`
                // are untouched by the update.
                v = sparse_axpy(&v, &coeff, row);
            } else {
                i += 1;
            }
        }
        v
    }

    pub fn reduce_dense(&self, v: &[Rat]) -> Vec<Rat> {
        dense_from_sparse(&self.reduce_sparse(sparse_from_dense(v)), self.ambient)
    }

    pub fn contains_sparse(&self, v: &[(usize, Rat)]) -> bool {
        self.reduce_sparse(v.to_vec()).is_empty()
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        v.len() == self.ambient && self.contains_sparse(&sparse_from_dense(v))
    }

    /// True iff `u` and `v` lie in the same coset of this subspace.
    pub fn coset_equal(&self, u: &[Rat], v: &[Rat]) -> Result<bool, LinalgError> {
        check_dim(self.ambient, u.len())?;
        check_dim(self.ambient, v.len())?;
        let diff: Vec<Rat> = u.iter().zip(v).map(|(a, b)| a - b).collect();
        Ok(self.contains(&diff))
    }

    /// Inserts one vector; returns true iff the rank grew.
    pub fn insert_sparse(&mut self, v: SparseVec) -> bool {
        let mut v = self.reduce_sparse(v);
        if v.is_empty() {
            return false;
        }
        let pivot = v[0].0;
        let lead = v[0].1.clone();
        if !lead.is_one() {
            for (_, x) in v.iter_mut() {
                *x /= &lead;
            }
        }
        // Restore reducedness: clear the new pivot from every existing row.
        let affected: Vec<usize> = self
            .rows
            .iter()
            .filter(|(_, row)| row.binary_search_by(|t| t.0.cmp(&pivot)).is_ok())
            .map(|(k, _)| *k)
            .collect();
        for k in affected {
            let row = self.rows.get(&k).unwrap();
            let pos = row.binary_search_by(|t| t.0.cmp(&pivot)).unwrap();
            let coeff = -row[pos].1.clone();
            let newrow = sparse_axpy(row, &coeff, &v);
            self.rows.insert(k, newrow);
        }
        self.rows.insert(pivot, v);
        true
    }

    pub fn insert(&mut self, v: &[Rat]) -> Result<bool, LinalgError> {
        check_dim(self.ambient, v.len())?;
        Ok(self.insert_sparse(sparse_from_dense(v)))
    }

    /// Smallest subspace containing both operands.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        check_dim(self.ambient, other.ambient)?;
        let mut out = self.clone();
        for row in other.rows.values() {
            out.insert_sparse(row.clone());
        }
        Ok(out)
    }

    /// Intersection, computed by constraining coefficients of this basis to land
    /// in `other`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        check_dim(self.ambient, other.ambient)?;
        let ours: Vec<&SparseVec> = self.rows.values().collect();
        let k = ours.len();
        if k == 0 {
            return Ok(Subspace::zero(self.ambient));
        }
        // residual(c) = other.reduce(sum c_i u_i) is linear in c; its kernel
        // gives the intersection coefficients.
        let residuals: Vec<SparseVec> = ours.iter().map(|u| other.reduce_sparse((*u).clone())).collect();
        let mut sys = AffineSystem::new(k);
        let mut by_coord: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (i, r) in residuals.iter().enumerate() {
            for (c, x) in r {
                by_coord.entry(*c).or_default().push((i, x.clone()));
            }
        }
        for (_, row) in by_coord {
            sys.push_sparse(row, Rat::zero());
        }
        let sol = solve_affine(&sys);
        let AffineOutcome::Feasible { nullspace, .. } = sol else {
            unreachable!("homogeneous system is always feasible");
        };
        let mut vecs = Vec::new();
        for coeffs in nullspace.rows.values() {
            let mut acc: SparseVec = Vec::new();
            for (i, c) in coeffs {
                acc = sparse_axpy(&acc, c, ours[*i]);
            }
            vecs.push(acc);
        }
        Subspace::span_sparse(self.ambient, vecs)
    }
}

/// Dense rational matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.len());
        for r in &rows {
            check_dim(cols, r.len())?;
        }
        let n = rows.len();
        Ok(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rat) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn row_axpy(&mut self, target: usize, c: &Rat, source: usize) {
        for j in 0..self.cols {
            let x = c * self.at(source, j);
            if !x.is_zero() {
                let cur = self.at(target, j).clone();
                self.set(target, j, cur + x);
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Reduced row echelon form plus rank and pivot columns. Zero rows sink to the
/// bottom; the echelon part is the unique RREF of the input's row space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Rational content of a row slice: gcd of numerators over lcm of denominators
/// of the nonzero entries; zero rows get content 0.
fn row_content(row: &[Rat]) -> Rat {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for x in row {
        if x.is_zero() {
            continue;
        }
        num = num.gcd(&x.numer().abs());
        den = den.lcm(x.denom());
    }
    if num.is_zero() {
        Rat::zero()
    } else {
        Rat::new(num, den)
    }
}

/// Dense reduced row echelon form with deterministic pivoting: first nonzero
/// column, then the smallest row index among candidates of maximal content.
pub fn rref(m: &Matrix) -> Rref {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..a.cols {
        if r == a.rows {
            break;
        }
        let mut best: Option<(usize, Rat)> = None;
        for i in r..a.rows {
            if a.at(i, col).is_zero() {
                continue;
            }
            let content = row_content(a.row(i));
            match &best {
                Some((_, c)) if *c >= content => {}
                _ => best = Some((i, content)),
            }
        }
        let Some((i, _)) = best else { continue };
        a.swap_rows(r, i);
        let lead = a.at(r, col).clone();
        if !lead.is_one() {
            let inv = lead.recip();
            for j in 0..a.cols {
                let x = a.at(r, j).clone();
                a.set(r, j, x * &inv);
            }
        }
        for i in 0..a.rows {
            if i != r && !a.at(i, col).is_zero() {
                let c = -a.at(i, col).clone();
                a.row_axpy(i, &c, r);
            }
        }
        pivots.push(col);
        r += 1;
    }
    Rref { matrix: a, rank: r, pivots }
}

/// Affine system `A x = b` collected row by row.
#[derive(Debug, Clone)]
pub struct AffineSystem {
    cols: usize,
    rows: Vec<SparseVec>,
    rhs: Vec<Rat>,
}

impl AffineSystem {
    pub fn new(cols: usize) -> Self {
        AffineSystem { cols, rows: Vec::new(), rhs: Vec::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn push_sparse(&mut self, row: Vec<(usize, Rat)>, b: Rat) {
        self.rows.push(sparse_normalize(row));
        self.rhs.push(b);
    }

    pub fn push_dense(&mut self, row: &[Rat], b: Rat) -> Result<(), LinalgError> {
        check_dim(self.cols, row.len())?;
        self.rows.push(sparse_from_dense(row));
        self.rhs.push(b);
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AffineOutcome {
    /// The constraints are inconsistent.
    Infeasible,
    /// `particular + nullspace` describes the full solution set.
    Feasible { particular: Vec<Rat>, nullspace: Subspace },
}

/// Solves `A x = b` exactly: echelonizes the augmented rows; a pivot in the
/// rhs column certifies infeasibility, otherwise the particular solution sets
/// every free variable to zero and the nullspace basis is read off per free
/// column.
pub fn solve_affine(sys: &AffineSystem) -> AffineOutcome {
    let n = sys.cols;
    let mut aug = Subspace::zero(n + 1);
    let vecs: Vec<SparseVec> = sys
        .rows
        .iter()
        .zip(&sys.rhs)
        .map(|(row, b)| {
            let mut v = row.clone();
            if !b.is_zero() {
                v.push((n, b.clone()));
            }
            v
        })
        .collect();
    aug.absorb(vecs).expect("augmented rows are in range");
    if aug.rows.contains_key(&n) {
        return AffineOutcome::Infeasible;
    }
    let mut particular = vec![Rat::zero(); n];
    for (p, row) in &aug.rows {
        if let Some((_, b)) = row.iter().find(|(c, _)| *c == n) {
            particular[*p] = b.clone();
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !aug.rows.contains_key(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for q in free {
        let mut v: Vec<(usize, Rat)> = vec![(q, Rat::one())];
        for (p, row) in &aug.rows {
            if let Ok(pos) = row.binary_search_by(|t| t.0.cmp(&q)) {
                v.push((*p, -row[pos].1.clone()));
            }
        }
        basis.push(sparse_normalize(v));
    }
    let nullspace = Subspace::span_sparse(n, basis).expect("nullspace vectors are in range");
    AffineOutcome::Feasible { particular, nullspace }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn formats_and_parses_rationals() {
        assert_eq!(format_rat(&ratio(1, 2)), "1/2");
        assert_eq!(format_rat(&rat(-3)), "-3/1");
        assert_eq!(parse_rat("4/6"), Some(ratio(2, 3)));
        assert_eq!(parse_rat("7"), Some(rat(7)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("x"), None);
    }

    #[test]
    fn rref_identity_is_fixed() {
        let m = Matrix::from_rows(dense(&[&[1, 0], &[0, 1]])).unwrap();
        let r = rref(&m);
        assert_eq!(r.matrix, m);
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn rref_collapses_dependent_rows() {
        let m = Matrix::from_rows(dense(&[&[1, 2], &[2, 4]])).unwrap();
        let r = rref(&m);
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.matrix.row(0), &[rat(1), rat(2)][..]);
        assert_eq!(r.matrix.row(1), &[rat(0), rat(0)][..]);
    }

    #[test]
    fn rref_of_rank3_product_has_rank_3() {
        // 5x3 times 3x5 with full-rank factors: rank exactly 3.
        let a = dense(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[0, 1, 1]]);
        let b = dense(&[&[1, 2, 3, 0, 1], &[0, 1, 4, 2, 0], &[5, 0, 1, 1, 3]]);
        let mut prod = Matrix::zero(5, 5);
        for i in 0..5 {
            for j in 0..5 {
                let mut acc = Rat::zero();
                for k in 0..3 {
                    acc += &a[i][k] * &b[k][j];
                }
                prod.set(i, j, acc);
            }
        }
        assert_eq!(rref(&prod).rank, 3);
    }

    #[test]
    fn subspace_membership_and_canonical_basis() {
        let u = Subspace::span(3, &dense(&[&[1, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(u.dim(), 2);
        assert!(u.contains(&[rat(2), rat(2), rat(5)]));
        assert!(!u.contains(&[rat(1), rat(0), rat(0)]));
        // Same subspace from a different generating set: identical representation.
        let v = Subspace::span(3, &dense(&[&[2, 2, 2], &[0, 0, 7], &[1, 1, 3]])).unwrap();
        assert_eq!(u, v);
    }

    #[test]
    fn subspace_rejects_wrong_ambient() {
        let u = Subspace::span(3, &dense(&[&[1, 0, 0]])).unwrap();
        assert_eq!(
            u.coset_equal(&[rat(1)], &[rat(1), rat(0), rat(0)]),
            Err(LinalgError::DimensionMismatch { expected: 3, got: 1 })
        );
        assert_eq!(
            Subspace::span(2, &dense(&[&[1, 0, 0]])),
            Err(LinalgError::DimensionMismatch { expected: 2, got: 3 })
        );
    }

    #[test]
    fn coset_equality_sees_through_the_subspace() {
        let j = Subspace::span(2, &dense(&[&[1, -1]])).unwrap();
        assert!(j.coset_equal(&[rat(3), rat(0)], &[rat(0), rat(3)]).unwrap());
        assert!(!j.coset_equal(&[rat(1), rat(0)], &[rat(0), rat(2)]).unwrap());
    }

    #[test]
    fn solve_affine_line() {
        // x + y = 1: particular (1, 0), nullspace spanned by (1, -1).
        let mut sys = AffineSystem::new(2);
        sys.push_dense(&[rat(1), rat(1)], rat(1)).unwrap();
        let AffineOutcome::Feasible { particular, nullspace } = solve_affine(&sys) else {
            panic!("feasible system");
        };
        assert_eq!(particular, vec![rat(1), rat(0)]);
        assert_eq!(nullspace, Subspace::span(2, &dense(&[&[1, -1]])).unwrap());
    }

    #[test]
    fn solve_affine_detects_contradiction() {
        let mut sys = AffineSystem::new(1);
        sys.push_dense(&[rat(1)], rat(1)).unwrap();
        sys.push_dense(&[rat(1)], rat(2)).unwrap();
        assert_eq!(solve_affine(&sys), AffineOutcome::Infeasible);
    }

    #[test]
    fn solve_affine_residuals_are_exact() {
        // Mixed-denominator system solved exactly: x/2 + y/3 = 5, x - y = 1/6.
        let mut sys = AffineSystem::new(2);
        sys.push_dense(&[ratio(1, 2), ratio(1, 3)], rat(5)).unwrap();
        sys.push_dense(&[rat(1), rat(-1)], ratio(1, 6)).unwrap();
        let AffineOutcome::Feasible { particular, nullspace } = solve_affine(&sys) else {
            panic!("feasible system");
        };
        assert_eq!(nullspace.dim(), 0);
        assert_eq!(&particular[0] * ratio(1, 2) + &particular[1] * ratio(1, 3), rat(5));
        assert_eq!(&particular[0] - &particular[1], ratio(1, 6));
    }

    #[test]
    fn intersection_and_sum_dimensions() {
        let u = Subspace::span(3, &dense(&[&[1, 0, 0], &[0, 1, 0]])).unwrap();
        let v = Subspace::span(3, &dense(&[&[0, 1, 0], &[0, 0, 1]])).unwrap();
        let meet = u.intersect(&v).unwrap();
        let join = u.sum(&v).unwrap();
        assert_eq!(meet, Subspace::span(3, &dense(&[&[0, 1, 0]])).unwrap());
        assert_eq!(join.dim(), 3);
        assert_eq!(u.dim() + v.dim(), join.dim() + meet.dim());
    }

    #[test]
    fn zero_ambient_subspace_is_workable() {
        let u = Subspace::zero(0);
        assert_eq!(u.dim(), 0);
        assert_eq!(u.codim(), 0);
        assert!(u.contains(&[]));
    }

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-4i64..=4, 1i64..=3).prop_map(|(n, d)| ratio(n, d))
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(small_rat(), rows * cols)
            .prop_map(move |data| Matrix { rows, cols, data })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rref_is_idempotent(m in small_matrix(4, 5)) {
            let first = rref(&m);
            let second = rref(&first.matrix);
            prop_assert_eq!(&second.matrix, &first.matrix);
            prop_assert_eq!(second.rank, first.rank);
            prop_assert_eq!(second.pivots, first.pivots);
        }

        #[test]
        fn rank_nullity_accounting(m in small_matrix(4, 5)) {
            // Solve A x = 0; nullspace dim must complement the rank.
            let r = rref(&m);
            let mut sys = AffineSystem::new(5);
            for i in 0..m.rows {
                sys.push_dense(m.row(i), Rat::zero()).unwrap();
            }
            let AffineOutcome::Feasible { nullspace, .. } = solve_affine(&sys) else {
                return Err(TestCaseError::fail("homogeneous system must be feasible"));
            };
            prop_assert_eq!(nullspace.dim() + r.rank, 5);
            for b in nullspace.basis_dense() {
                for i in 0..m.rows {
                    let dot: Rat = m.row(i).iter().zip(&b).map(|(a, x)| a * x).sum();
                    prop_assert!(dot.is_zero());
                }
            }
        }

        #[test]
        fn modular_law_of_dimensions(
            us in proptest::collection::vec(proptest::collection::vec(small_rat(), 4), 1..4),
            vs in proptest::collection::vec(proptest::collection::vec(small_rat(), 4), 1..4),
        ) {
            let u = Subspace::span(4, &us).unwrap();
            let v = Subspace::span(4, &vs).unwrap();
            let join = u.sum(&v).unwrap();
            let meet = u.intersect(&v).unwrap();
            prop_assert_eq!(u.dim() + v.dim(), join.dim() + meet.dim());
            for b in meet.basis_dense() {
                prop_assert!(u.contains(&b));
                prop_assert!(v.contains(&b));
            }
        }
    }
}
