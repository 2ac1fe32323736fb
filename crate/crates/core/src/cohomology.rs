//! First-cohomology oracle: spaces of module derivations into small test
//! bimodules, cross-checked against diagonal feasibility.
//!
//! A module derivation is a linear `D: A -> X` satisfying the Leibniz rule
//! `D(a b) = a . D(b) + D(a) . b` and commuting with both actions of the
//! auxiliary algebra. `Z` collects all of them, `B` the inner ones
//! `a -> a . x - x . a`, and `h1 = dim(Z) - dim(Z meet B)`.

use crate::algebra::ModuleStructure;
use crate::diagonal::{find_module_diagonal, tensor_setup_for_semigroup, DiagonalError, DiagonalOutcome};
use crate::linalg::{rat, solve_affine, sparse_normalize, AffineOutcome, AffineSystem, SparseVec, Subspace};
use crate::semigroup::FiniteSemigroup;
use crate::Guards;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BimoduleError {
    #[error("malformed bimodule data: {reason}")]
    Malformed { reason: String },
    #[error("bimodule axiom {axiom:?} fails on basis triple {triple:?}")]
    FailsAxiom { axiom: &'static str, triple: (usize, usize, usize) },
}

/// A finite-dimensional space with actions of the algebra and of the
/// auxiliary algebra on both sides, given by columns over the basis.
#[derive(Debug, Clone)]
pub struct TestBimodule {
    pub name: String,
    pub dim: usize,
    a_left: Vec<Vec<SparseVec>>,
    a_right: Vec<Vec<SparseVec>>,
    aux_left: Vec<Vec<SparseVec>>,
    aux_right: Vec<Vec<SparseVec>>,
}

impl TestBimodule {
    /// Wraps raw action columns without checking the axioms; pair with
    /// [`TestBimodule::validate`] unless a failing example is the point.
    pub fn new_unchecked(
        name: impl Into<String>,
        dim: usize,
        a_left: Vec<Vec<SparseVec>>,
        a_right: Vec<Vec<SparseVec>>,
        aux_left: Vec<Vec<SparseVec>>,
        aux_right: Vec<Vec<SparseVec>>,
    ) -> Self {
        TestBimodule { name: name.into(), dim, a_left, a_right, aux_left, aux_right }
    }

    fn shape_ok(&self, m: &ModuleStructure) -> Result<(), BimoduleError> {
        let checks = [
            (&self.a_left, m.algebra.dim(), "algebra left"),
            (&self.a_right, m.algebra.dim(), "algebra right"),
            (&self.aux_left, m.aux.dim(), "aux left"),
            (&self.aux_right, m.aux.dim(), "aux right"),
        ];
        for (cols, outer, what) in checks {
            if cols.len() != outer || cols.iter().any(|c| c.len() != self.dim) {
                return Err(BimoduleError::Malformed {
                    reason: format!("{what} action is not {outer} x {dim}", dim = self.dim),
                });
            }
        }
        Ok(())
    }

    fn act(cols: &[Vec<SparseVec>], op: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut out = Vec::new();
        for (i, c) in op {
            for (w, x) in v {
                for (k, y) in &cols[*i][*w] {
                    out.push((*k, c.clone() * x * y));
                }
            }
        }
        sparse_normalize(out)
    }

    pub fn left(&self, a: &SparseVec, v: &SparseVec) -> SparseVec {
        Self::act(&self.a_left, a, v)
    }

    pub fn right(&self, v: &SparseVec, a: &SparseVec) -> SparseVec {
        Self::act(&self.a_right, a, v)
    }

    pub fn aux_left_act(&self, alpha: &SparseVec, v: &SparseVec) -> SparseVec {
        Self::act(&self.aux_left, alpha, v)
    }

    pub fn aux_right_act(&self, v: &SparseVec, alpha: &SparseVec) -> SparseVec {
        Self::act(&self.aux_right, alpha, v)
    }

    /// Checks every bimodule and compatibility axiom on basis triples and
    /// names the first failure.
    pub fn validate(&self, m: &ModuleStructure) -> Result<(), BimoduleError> {
        self.shape_ok(m)?;
        let d = m.algebra.dim();
        let k = m.aux.dim();
        let unit = |i: usize| vec![(i, rat(1))];
        for i in 0..d {
            for j in 0..d {
                let ab = m.algebra.product_basis(i, j);
                for x in 0..self.dim {
                    let v = unit(x);
                    let fail = |axiom| Err(BimoduleError::FailsAxiom { axiom, triple: (i, j, x) });
                    if Self::act(&self.a_left, ab, &v) != self.left(&unit(i), &self.left(&unit(j), &v)) {
                        return fail("(a b) . x = a . (b . x)");
                    }
                    if Self::act(&self.a_right, ab, &v) != self.right(&self.right(&v, &unit(i)), &unit(j)) {
                        return fail("x . (a b) = (x . a) . b");
                    }
                    if self.right(&self.left(&unit(i), &v), &unit(j))
                        != self.left(&unit(i), &self.right(&v, &unit(j)))
                    {
                        return fail("(a . x) . b = a . (x . b)");
                    }
                }
            }
        }
        for t in 0..k {
            for u in 0..k {
                let tu = m.aux.product_basis(t, u);
                for x in 0..self.dim {
                    let v = unit(x);
                    let fail = |axiom| Err(BimoduleError::FailsAxiom { axiom, triple: (t, u, x) });
                    if Self::act(&self.aux_left, tu, &v)
                        != self.aux_left_act(&unit(t), &self.aux_left_act(&unit(u), &v))
                    {
                        return fail("(alpha beta) . x = alpha . (beta . x)");
                    }
                    if Self::act(&self.aux_right, tu, &v)
                        != self.aux_right_act(&self.aux_right_act(&v, &unit(t)), &unit(u))
                    {
                        return fail("x . (alpha beta) = (x . alpha) . beta");
                    }
                    if self.aux_right_act(&self.aux_left_act(&unit(t), &v), &unit(u))
                        != self.aux_left_act(&unit(t), &self.aux_right_act(&v, &unit(u)))
                    {
                        return fail("(alpha . x) . beta = alpha . (x . beta)");
                    }
                }
            }
        }
        for t in 0..k {
            for i in 0..d {
                for x in 0..self.dim {
                    let v = unit(x);
                    let fail = |axiom| Err(BimoduleError::FailsAxiom { axiom, triple: (t, i, x) });
                    let ta = m.left_on_basis(t, i);
                    let at = m.right_on_basis(t, i);
                    if Self::act(&self.a_left, ta, &v)
                        != self.aux_left_act(&unit(t), &self.left(&unit(i), &v))
                    {
                        return fail("(alpha . a) . x = alpha . (a . x)");
                    }
                    if Self::act(&self.a_right, at, &v)
                        != self.aux_right_act(&self.right(&v, &unit(i)), &unit(t))
                    {
                        return fail("x . (a . alpha) = (x . a) . alpha");
                    }
                    if Self::act(&self.a_left, at, &v)
                        != self.left(&unit(i), &self.aux_right_act(&v, &unit(t)))
                    {
                        return fail("(a . alpha) . x = a . (alpha . x)");
                    }
                    if Self::act(&self.a_right, ta, &v)
                        != self.aux_left_act(&unit(t), &self.right(&v, &unit(i)))
                    {
                        return fail("x . (alpha . a) = (x . alpha) . a");
                    }
                }
            }
        }
        Ok(())
    }
}

/// The derivation space `Z`, inner derivations `B`, and `h1`.
#[derive(Debug, Clone)]
pub struct DerivationSpace {
    pub z: Subspace,
    pub b: Subspace,
    pub dim_z: usize,
    pub dim_b: usize,
    pub h1: usize,
    /// Whether every inner derivation satisfied the derivation constraints
    /// (true for valid bimodules; may fail on unchecked data).
    pub inner_contained: bool,
}

/// Solves the exact linear system for module derivations `D: A -> X`.
/// Unknowns are indexed `w * dim(A) + i` for the coefficient of basis vector
/// `w` of `X` in `D(b_i)`.
pub fn derivation_space(m: &ModuleStructure, x: &TestBimodule) -> DerivationSpace {
    let d = m.algebra.dim();
    let dx = x.dim;
    let unknowns = dx * d;
    let at = |w: usize, i: usize| w * d + i;
    let mut sys = AffineSystem::new(unknowns);
    let mut push_rows = |rows: BTreeMap<usize, SparseVec>| {
        for (_, row) in rows {
            sys.push_sparse(row, rat(0));
        }
    };
    // Leibniz: D(b_i b_j) - b_i . D(b_j) - D(b_i) . b_j = 0, one row per
    // X-coordinate of each basis pair.
    for i in 0..d {
        for j in 0..d {
            let mut rows: BTreeMap<usize, SparseVec> = BTreeMap::new();
            for (k, c) in m.algebra.product_basis(i, j) {
                for w in 0..dx {
                    rows.entry(w).or_default().push((at(w, *k), c.clone()));
                }
            }
            for w in 0..dx {
                for (v, c) in &x.a_left[i][w] {
                    rows.entry(*v).or_default().push((at(w, j), -c.clone()));
                }
                for (v, c) in &x.a_right[j][w] {
                    rows.entry(*v).or_default().push((at(w, i), -c.clone()));
                }
            }
            push_rows(rows);
        }
    }
    // Auxiliary linearity on both sides: D(alpha . a) = alpha . D(a) and
    // D(a . alpha) = D(a) . alpha.
    for t in 0..m.aux.dim() {
        for i in 0..d {
            for (acted, side_cols) in
                [(m.left_on_basis(t, i), &x.aux_left), (m.right_on_basis(t, i), &x.aux_right)]
            {
                let mut rows: BTreeMap<usize, SparseVec> = BTreeMap::new();
                for (k, c) in acted {
                    for w in 0..dx {
                        rows.entry(w).or_default().push((at(w, *k), c.clone()));
                    }
                }
                for w in 0..dx {
                    for (v, c) in &side_cols[t][w] {
                        rows.entry(*v).or_default().push((at(w, i), -c.clone()));
                    }
                }
                push_rows(rows);
            }
        }
    }
    let z = match solve_affine(&sys) {
        AffineOutcome::Feasible { nullspace, .. } => nullspace,
        AffineOutcome::Infeasible => unreachable!("a homogeneous system is always feasible"),
    };
    // Inner derivations: for each basis vector of X, vectorize a -> a.x - x.a.
    let inner: Vec<SparseVec> = (0..dx)
        .map(|w0| {
            let mut entries = Vec::new();
            for i in 0..d {
                for (v, c) in &x.a_left[i][w0] {
                    entries.push((at(*v, i), c.clone()));
                }
                for (v, c) in &x.a_right[i][w0] {
                    entries.push((at(*v, i), -c.clone()));
                }
            }
            sparse_normalize(entries)
        })
        .collect();
    let b = Subspace::span_sparse(unknowns, inner).expect("inner derivations fit the ambient");
    let meet = z.intersect(&b).expect("shared ambient");
    let inner_contained = meet.dim() == b.dim();
    DerivationSpace {
        dim_z: z.dim(),
        dim_b: b.dim(),
        h1: z.dim() - meet.dim(),
        inner_contained,
        z,
        b,
    }
}

fn remap(reduced: SparseVec, positions: &BTreeMap<usize, usize>) -> SparseVec {
    reduced
        .into_iter()
        .map(|(c, v)| (*positions.get(&c).expect("reduced support lies in complement coords"), v))
        .collect()
}

/// The three standard test bimodules: the quotient `A/J` on complement
/// coordinates, the one-dimensional augmentation module, and the doubled
/// quotient `A/J (+) A/J`.
pub fn build_test_bimodules(m: &ModuleStructure, j: &Subspace) -> Vec<TestBimodule> {
    let d = m.algebra.dim();
    let comp = j.complement_coords();
    let positions: BTreeMap<usize, usize> =
        comp.iter().enumerate().map(|(p, c)| (*c, p)).collect();
    let dx = comp.len();
    let cols = |f: &dyn Fn(usize, usize) -> SparseVec, outer: usize| -> Vec<Vec<SparseVec>> {
        (0..outer)
            .map(|i| (0..dx).map(|w| remap(j.reduce_sparse(f(i, w)), &positions)).collect())
            .collect()
    };
    let quotient = TestBimodule::new_unchecked(
        "A/J",
        dx,
        cols(&|i, w| m.algebra.multiply(&m.algebra.basis_vec(i), &vec![(comp[w], rat(1))]), d),
        cols(&|i, w| m.algebra.multiply(&vec![(comp[w], rat(1))], &m.algebra.basis_vec(i)), d),
        cols(&|t, w| m.left_act(&vec![(t, rat(1))], &vec![(comp[w], rat(1))]), m.aux.dim()),
        cols(&|t, w| m.right_act(&vec![(comp[w], rat(1))], &vec![(t, rat(1))]), m.aux.dim()),
    );
    let ones = |outer: usize| -> Vec<Vec<SparseVec>> {
        (0..outer).map(|_| vec![vec![(0usize, rat(1))]]).collect()
    };
    let augmentation = TestBimodule::new_unchecked(
        "augmentation",
        1,
        ones(d),
        ones(d),
        ones(m.aux.dim()),
        ones(m.aux.dim()),
    );
    let double = |cols: &Vec<Vec<SparseVec>>| -> Vec<Vec<SparseVec>> {
        cols.iter()
            .map(|per_basis| {
                let mut out: Vec<SparseVec> = Vec::with_capacity(2 * dx);
                for block in 0..2 {
                    for col in per_basis {
                        out.push(col.iter().map(|(v, c)| (v + block * dx, c.clone())).collect());
                    }
                }
                out
            })
            .collect()
    };
    let doubled = TestBimodule::new_unchecked(
        "A/J (+) A/J",
        2 * dx,
        double(&quotient.a_left),
        double(&quotient.a_right),
        double(&quotient.aux_left),
        double(&quotient.aux_right),
    );
    vec![quotient, augmentation, doubled]
}

#[derive(Debug, Clone, Serialize)]
pub struct BimoduleReport {
    pub name: String,
    pub dim: usize,
    #[serde(rename = "dim_Z")]
    pub dim_z: usize,
    #[serde(rename = "dim_B")]
    pub dim_b: usize,
    pub h1: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CohomologyReport {
    pub semigroup: String,
    pub bimodules: Vec<BimoduleReport>,
    pub diagonal_feasible: bool,
    /// Diagonal feasibility matches vanishing of `h1` across the bimodules.
    pub consistent: bool,
}

/// Runs the derivation oracle over the standard bimodules and compares the
/// outcome with diagonal feasibility.
pub fn cross_check(s: &FiniteSemigroup, guards: &Guards) -> Result<CohomologyReport, DiagonalError> {
    let setup = tensor_setup_for_semigroup(s, guards)?;
    let feasible = matches!(find_module_diagonal(&setup), DiagonalOutcome::Feasible(_));
    let bimodules = build_test_bimodules(&setup.module, &setup.j);
    let mut reports = Vec::with_capacity(bimodules.len());
    for x in &bimodules {
        x.validate(&setup.module).expect("standard test bimodules satisfy the axioms");
        let ds = derivation_space(&setup.module, x);
        assert!(ds.inner_contained, "inner derivations of a valid bimodule are derivations");
        reports.push(BimoduleReport {
            name: x.name.clone(),
            dim: x.dim,
            dim_z: ds.dim_z,
            dim_b: ds.dim_b,
            h1: ds.h1,
        });
    }
    let all_zero = reports.iter().all(|r| r.h1 == 0);
    Ok(CohomologyReport {
        semigroup: s.name().to_string(),
        bimodules: reports,
        diagonal_feasible: feasible,
        consistent: feasible == all_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::StructureAlgebra;
    use crate::diagonal::matrix_instance;
    use crate::linalg::{ratio, Rat};
    use crate::semigroup::corpus;
    use crate::semigroup::partial_perm::symmetric_inverse_monoid;
    use num::Zero;

    #[test]
    fn corpus_members_have_vanishing_h1_and_consistent_reports() {
        for s in [
            corpus::max_semilattice(2).unwrap(),
            corpus::max_semilattice(4).unwrap(),
            corpus::cyclic_group(2).unwrap(),
            corpus::cyclic_group(3).unwrap(),
            corpus::brandt(2).unwrap(),
            corpus::truncated_add_monoid(2).unwrap(),
            corpus::meet_semilattice_nondirected().unwrap(),
            symmetric_inverse_monoid(2).unwrap(),
        ] {
            let r = cross_check(&s, &Guards::default()).unwrap();
            assert!(r.diagonal_feasible, "{}", s.name());
            assert!(r.consistent, "{}", s.name());
            assert_eq!(r.bimodules.len(), 3);
            for b in &r.bimodules {
                assert_eq!(b.h1, 0, "{}: {}", s.name(), b.name);
            }
        }
    }

    #[test]
    fn group_quotient_bimodule_kills_outer_derivations_by_commutativity() {
        let s = corpus::cyclic_group(6).unwrap();
        let r = cross_check(&s, &Guards::default()).unwrap();
        let quot = &r.bimodules[0];
        assert_eq!(quot.dim, 6);
        // Inner derivations vanish in a commutative quotient, so Z itself is 0.
        assert_eq!(quot.dim_b, 0);
        assert_eq!(quot.dim_z, 0);
    }

    #[test]
    fn left_zero_diverges_from_the_cohomological_signal() {
        // h1 vanishes for all three bimodules, yet no diagonal exists: the
        // report surfaces this divergence instead of hiding it.
        let s = corpus::left_zero(2).unwrap();
        let r = cross_check(&s, &Guards::default()).unwrap();
        assert!(!r.diagonal_feasible);
        assert!(r.bimodules.iter().all(|b| b.h1 == 0));
        assert!(!r.consistent);
    }

    #[test]
    fn augmentation_bimodule_is_valid_across_the_corpus() {
        for s in [corpus::brandt(2).unwrap(), corpus::max_semilattice(3).unwrap()] {
            let setup =
                crate::diagonal::tensor_setup_for_semigroup(&s, &Guards::default()).unwrap();
            for x in build_test_bimodules(&setup.module, &setup.j) {
                assert_eq!(x.validate(&setup.module), Ok(()), "{}: {}", s.name(), x.name);
            }
        }
    }

    #[test]
    fn trace_normalized_character_fails_validation_but_still_has_zero_h1() {
        let g =
            StructureAlgebra::new("Q", vec!["1".into()], vec![vec![vec![(0, rat(1))]]]).unwrap();
        let inst = matrix_instance(2, g, 32).unwrap();
        let m = &inst.module;
        let d = m.algebra.dim();
        // One-dimensional module where E_ij acts by its normalized trace on
        // both sides. The trace is not multiplicative, so the left-action
        // axiom must fail on the very first basis pair.
        let chi: Vec<Rat> =
            (0..d).map(|x| if x / 2 == x % 2 { ratio(1, 2) } else { rat(0) }).collect();
        let col = |i: usize| -> Vec<SparseVec> {
            vec![if chi[i].is_zero() { vec![] } else { vec![(0, chi[i].clone())] }]
        };
        let a_cols: Vec<Vec<SparseVec>> = (0..d).map(col).collect();
        let aux_cols = vec![vec![vec![(0, rat(1))]]];
        let x = TestBimodule::new_unchecked(
            "trace-normalized character",
            1,
            a_cols.clone(),
            a_cols,
            aux_cols.clone(),
            aux_cols,
        );
        assert_eq!(
            x.validate(m),
            Err(BimoduleError::FailsAxiom {
                axiom: "(a b) . x = a . (b . x)",
                triple: (0, 0, 0)
            })
        );
        // The derivation system on the unchecked data is still exact.
        let ds = derivation_space(m, &x);
        assert_eq!(ds.dim_z, 0);
        assert_eq!(ds.dim_b, 0);
        assert_eq!(ds.h1, 0);
        assert!(ds.inner_contained);
    }

    #[test]
    fn shape_validation_catches_ragged_actions() {
        let s = corpus::cyclic_group(2).unwrap();
        let setup = crate::diagonal::tensor_setup_for_semigroup(&s, &Guards::default()).unwrap();
        let bad = TestBimodule::new_unchecked(
            "bad",
            1,
            vec![vec![vec![(0, rat(1))]]], // only one algebra column instead of two
            vec![vec![vec![(0, rat(1))]]; 2],
            vec![vec![vec![(0, rat(1))]]],
            vec![vec![vec![(0, rat(1))]]],
        );
        assert!(matches!(
            bad.validate(&setup.module),
            Err(BimoduleError::Malformed { .. })
        ));
    }

    #[test]
    fn inner_derivations_are_derivations_on_a_noncommutative_member() {
        let s = corpus::brandt(2).unwrap();
        let setup = crate::diagonal::tensor_setup_for_semigroup(&s, &Guards::default()).unwrap();
        let bimodules = build_test_bimodules(&setup.module, &setup.j);
        for x in &bimodules {
            let ds = derivation_space(&setup.module, x);
            assert!(ds.inner_contained, "{}", x.name);
            assert!(ds.dim_b <= ds.dim_z);
        }
    }
}
