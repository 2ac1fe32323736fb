//! Finite-dimensional rational algebras given by structure constants, plus
//! the two-sided action of the idempotent subalgebra that makes a semigroup
//! algebra a module algebra: the left action rescales through the constant
//! character, the right action multiplies through.

use crate::linalg::{rat, sparse_normalize, Rat, SparseVec};
use crate::semigroup::{FiniteSemigroup, IdempotentSet};
use num::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("malformed structure constants: {reason}")]
    Malformed { reason: String },
    #[error("product is not associative on basis triple ({i}, {j}, {k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("coefficient algebra is not commutative on basis pair ({i}, {j})")]
    NotCommutative { i: usize, j: usize },
    #[error("coefficient algebra has no identity element")]
    NoIdentity,
}

/// An algebra over the rationals with a fixed basis and sparse structure
/// constants: `basis[i] * basis[j] = sum of product[i][j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureAlgebra {
    name: String,
    basis: Vec<String>,
    product: Vec<Vec<SparseVec>>,
}

impl StructureAlgebra {
    pub fn new(
        name: impl Into<String>,
        basis: Vec<String>,
        product: Vec<Vec<SparseVec>>,
    ) -> Result<Self, AlgebraError> {
        let d = basis.len();
        if product.len() != d || product.iter().any(|row| row.len() != d) {
            return Err(AlgebraError::Malformed {
                reason: format!("product table is not {d} x {d}"),
            });
        }
        for row in &product {
            for cell in row {
                if cell.iter().any(|(k, _)| *k >= d) {
                    return Err(AlgebraError::Malformed {
                        reason: "structure constant index out of range".into(),
                    });
                }
            }
        }
        let a = StructureAlgebra { name: name.into(), basis, product };
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let left = a.multiply(a.product_basis(i, j), &a.basis_vec(k));
                    let right = a.multiply(&a.basis_vec(i), a.product_basis(j, k));
                    if left != right {
                        return Err(AlgebraError::NotAssociative { i, j, k });
                    }
                }
            }
        }
        Ok(a)
    }

    /// The contracted semigroup algebra: basis indexed by elements, products
    /// read off the Cayley table. Associativity is inherited.
    pub fn semigroup_algebra(s: &FiniteSemigroup) -> Self {
        let n = s.len();
        let product = (0..n)
            .map(|i| (0..n).map(|j| vec![(s.mul(i, j), rat(1))]).collect())
            .collect();
        StructureAlgebra {
            name: format!("Q[{}]", s.name()),
            basis: s.labels().to_vec(),
            product,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i]
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis
    }

    pub fn product_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.product[i][j]
    }

    pub fn multiply(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
        for (i, a) in x {
            for (j, b) in y {
                let c = a.clone() * b;
                for (k, s) in &self.product[*i][*j] {
                    let entry = acc.entry(*k).or_insert_with(Rat::zero);
                    *entry += c.clone() * s;
                }
            }
        }
        let flat: SparseVec = acc.into_iter().collect();
        sparse_normalize(flat)
    }

    /// Witness of non-commutativity, if any.
    pub fn commutativity_failure(&self) -> Option<(usize, usize)> {
        let d = self.dim();
        for i in 0..d {
            for j in i + 1..d {
                if self.product[i][j] != self.product[j][i] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// The two-sided identity, found by exact linear solve.
    pub fn identity(&self) -> Option<SparseVec> {
        use crate::linalg::{solve_affine, sparse_from_dense, AffineOutcome, AffineSystem};
        let d = self.dim();
        let mut sys = AffineSystem::new(d);
        for j in 0..d {
            // Coordinate k of u * b_j - b_j and of b_j * u - b_j.
            let mut left: Vec<SparseVec> = vec![Vec::new(); d];
            let mut right: Vec<SparseVec> = vec![Vec::new(); d];
            for i in 0..d {
                for (k, c) in &self.product[i][j] {
                    left[*k].push((i, c.clone()));
                }
                for (k, c) in &self.product[j][i] {
                    right[*k].push((i, c.clone()));
                }
            }
            for (k, (lrow, rrow)) in left.into_iter().zip(right).enumerate() {
                let target = if k == j { rat(1) } else { rat(0) };
                sys.push_sparse(lrow, target.clone());
                sys.push_sparse(rrow, target);
            }
        }
        match solve_affine(&sys) {
            AffineOutcome::Feasible { particular, .. } => Some(sparse_from_dense(&particular)),
            AffineOutcome::Infeasible => None,
        }
    }

    pub fn basis_vec(&self, i: usize) -> SparseVec {
        vec![(i, rat(1))]
    }

    pub fn format_element(&self, x: &SparseVec) -> String {
        if x.is_empty() {
            return "0".to_string();
        }
        x.iter()
            .enumerate()
            .map(|(pos, (i, c))| {
                let lead = if pos == 0 { "" } else { " + " };
                format!("{lead}{}·[{}]", crate::linalg::format_rat(c), self.basis[*i])
            })
            .collect()
    }
}

/// The module structure: `aux` is the idempotent subalgebra, acting on the
/// left through the constant character and on the right by multiplication.
/// `aux_elements[t]` is the semigroup index behind aux basis vector `t`.
#[derive(Debug, Clone)]
pub struct ModuleStructure {
    pub algebra: StructureAlgebra,
    pub aux: StructureAlgebra,
    pub aux_elements: Vec<usize>,
    left: Vec<Vec<SparseVec>>,
    right: Vec<Vec<SparseVec>>,
}

impl ModuleStructure {
    /// Assembles a module structure from explicit action columns:
    /// `left[t][x] = alpha_t . b_x` and `right[t][x] = b_x . alpha_t`.
    pub fn from_parts(
        algebra: StructureAlgebra,
        aux: StructureAlgebra,
        aux_elements: Vec<usize>,
        left: Vec<Vec<SparseVec>>,
        right: Vec<Vec<SparseVec>>,
    ) -> Self {
        let (k, n) = (aux.dim(), algebra.dim());
        for cols in [&left, &right] {
            assert_eq!(cols.len(), k, "one action column set per aux basis vector");
            assert!(cols.iter().all(|c| c.len() == n), "one column per algebra basis vector");
        }
        ModuleStructure { algebra, aux, aux_elements, left, right }
    }

    /// `alpha_t . b_x`: the left action column.
    pub fn left_on_basis(&self, t: usize, x: usize) -> &SparseVec {
        &self.left[t][x]
    }

    /// `b_x . alpha_t`: the right action column.
    pub fn right_on_basis(&self, t: usize, x: usize) -> &SparseVec {
        &self.right[t][x]
    }

    pub fn left_act(&self, alpha: &SparseVec, x: &SparseVec) -> SparseVec {
        self.apply(&self.left, alpha, x)
    }

    pub fn right_act(&self, x: &SparseVec, alpha: &SparseVec) -> SparseVec {
        self.apply(&self.right, alpha, x)
    }

    fn apply(&self, cols: &[Vec<SparseVec>], alpha: &SparseVec, x: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (t, c) in alpha {
            for (i, v) in x {
                for (k, w) in &cols[*t][*i] {
                    acc.push((*k, c.clone() * v * w));
                }
            }
        }
        sparse_normalize(acc)
    }
}

/// Builds the module structure of a semigroup algebra over its idempotents.
pub fn idempotent_actions(s: &FiniteSemigroup, e: &IdempotentSet) -> ModuleStructure {
    let algebra = StructureAlgebra::semigroup_algebra(s);
    let k = e.count();
    let aux_basis: Vec<String> = e.indices.iter().map(|&i| s.label(i).to_string()).collect();
    let aux_product: Vec<Vec<SparseVec>> = e
        .indices
        .iter()
        .map(|&a| {
            e.indices
                .iter()
                .map(|&b| {
                    let p = s.mul(a, b);
                    let t = e.position_of(p).expect("idempotents closed under product");
                    vec![(t, rat(1))]
                })
                .collect()
        })
        .collect();
    let aux = StructureAlgebra {
        name: format!("Q[E({})]", s.name()),
        basis: aux_basis,
        product: aux_product,
    };
    let n = s.len();
    let left = (0..k).map(|_| (0..n).map(|x| vec![(x, rat(1))]).collect()).collect();
    let right = e
        .indices
        .iter()
        .map(|&ei| (0..n).map(|x| vec![(s.mul(x, ei), rat(1))]).collect())
        .collect();
    ModuleStructure { algebra, aux, aux_elements: e.indices.clone(), left, right }
}
