//! Finite semigroups as validated Cayley tables, with optional inverse
//! structure, idempotent analysis, and the natural partial order.

pub mod bicyclic;
pub mod corpus;
pub mod munn;
pub mod partial_perm;

use crate::SizeGuard;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq, Serialize)]
pub enum ValidationError {
    /// Shape problems: non-square table, out-of-range entries, bad star length,
    /// duplicate labels, unknown corpus name.
    #[error("malformed input: {reason}")]
    Malformed { reason: String },
    #[error(transparent)]
    Guard(#[from] SizeGuard),
    /// `(i j) k != i (j k)` at the given element indices.
    #[error("not associative at indices ({i}, {j}, {k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    /// Element `i` has no inverse: no `t` with `i t i = i` and `t i t = t`.
    #[error("element {i} has no inverse")]
    NotInverse { i: usize },
    /// Element `i` has at least two inverses.
    #[error("element {i} has multiple inverses ({t1} and {t2})")]
    InverseNotUnique { i: usize, t1: usize, t2: usize },
    /// A provided star map contradicts the computed unique inverse.
    #[error("provided star of element {i} is {got}, computed inverse is {expected}")]
    StarMismatch { i: usize, expected: usize, got: usize },
}

fn malformed(reason: impl Into<String>) -> ValidationError {
    ValidationError::Malformed { reason: reason.into() }
}

/// A finite semigroup on indices `0..n` with element labels and a flat Cayley
/// table. `star` is present exactly when the inverse axioms were validated
/// (unique `s*` with `s s* s = s` and `s* s s* = s*`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSemigroup {
    name: String,
    elements: Vec<String>,
    table: Vec<usize>,
    star: Option<Vec<usize>>,
}

fn check_shape(elements: &[String], table: &[Vec<usize>]) -> Result<(), ValidationError> {
    let n = elements.len();
    if n == 0 {
        return Err(malformed("empty element list"));
    }
    if table.len() != n {
        return Err(malformed(format!("table has {} rows for {} elements", table.len(), n)));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(malformed(format!("table row {} has {} entries, expected {}", i, row.len(), n)));
        }
        for (j, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(malformed(format!("table entry ({i}, {j}) = {v} is out of range")));
            }
        }
    }
    let mut sorted = elements.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != n {
        return Err(malformed("duplicate element labels"));
    }
    Ok(())
}

fn check_associative(n: usize, table: &[usize]) -> Result<(), ValidationError> {
    for i in 0..n {
        for j in 0..n {
            let ij = table[i * n + j];
            for k in 0..n {
                if table[ij * n + k] != table[i * n + table[j * n + k]] {
                    return Err(ValidationError::NotAssociative { i, j, k });
                }
            }
        }
    }
    Ok(())
}

impl FiniteSemigroup {
    /// Validates a table as an inverse semigroup: associativity plus a unique
    /// inverse for every element. A provided `star` is checked against the
    /// computed inverses; when absent it is inferred.
    pub fn validate_inverse(
        name: impl Into<String>,
        elements: Vec<String>,
        table: Vec<Vec<usize>>,
        star: Option<Vec<usize>>,
        max_size: usize,
    ) -> Result<Self, ValidationError> {
        let s = Self::validate_plain(name, elements, table, max_size)?;
        let n = s.len();
        if let Some(st) = &star {
            if st.len() != n {
                return Err(malformed(format!("star has {} entries for {} elements", st.len(), n)));
            }
            if st.iter().any(|&v| v >= n) {
                return Err(malformed("star entry out of range"));
            }
        }
        let mut computed = Vec::with_capacity(n);
        for i in 0..n {
            let mut found: Option<usize> = None;
            for t in 0..n {
                if s.mul(s.mul(i, t), i) == i && s.mul(s.mul(t, i), t) == t {
                    match found {
                        None => found = Some(t),
                        Some(t1) => return Err(ValidationError::InverseNotUnique { i, t1, t2: t }),
                    }
                }
            }
            match found {
                None => return Err(ValidationError::NotInverse { i }),
                Some(t) => computed.push(t),
            }
        }
        if let Some(st) = &star {
            for i in 0..n {
                if st[i] != computed[i] {
                    return Err(ValidationError::StarMismatch { i, expected: computed[i], got: st[i] });
                }
            }
        }
        Ok(FiniteSemigroup { star: Some(computed), ..s })
    }

    /// Validates associativity only; the result carries no inverse structure.
    pub fn validate_plain(
        name: impl Into<String>,
        elements: Vec<String>,
        table: Vec<Vec<usize>>,
        max_size: usize,
    ) -> Result<Self, ValidationError> {
        check_shape(&elements, &table)?;
        let n = elements.len();
        crate::guard("semigroup", n, max_size.min(crate::VALIDATION_HARD_CAP))?;
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        check_associative(n, &flat)?;
        Ok(FiniteSemigroup { name: name.into(), elements, table: flat, star: None })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i * self.elements.len() + j]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.elements
    }

    pub fn is_inverse(&self) -> bool {
        self.star.is_some()
    }

    pub fn star_of(&self, i: usize) -> Option<usize> {
        self.star.as_ref().map(|s| s[i])
    }

    pub fn star_map(&self) -> Option<&[usize]> {
        self.star.as_deref()
    }

    /// Index of the two-sided identity, when one exists.
    pub fn identity(&self) -> Option<usize> {
        (0..self.len()).find(|&e| (0..self.len()).all(|x| self.mul(e, x) == x && self.mul(x, e) == x))
    }

    pub fn to_cayley(&self) -> CayleyJson {
        let n = self.len();
        CayleyJson {
            name: self.name.clone(),
            elements: self.elements.clone(),
            table: (0..n).map(|i| (0..n).map(|j| self.mul(i, j)).collect()).collect(),
            star: self.star.clone(),
        }
    }
}

/// Cayley-table interchange format. `table` entries are 0-based element
/// indices; `star` is optional and inferred when absent.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CayleyJson {
    pub name: String,
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<Vec<usize>>,
}

impl CayleyJson {
    /// Inverse-validating ingest.
    pub fn into_semigroup(self, max_size: usize) -> Result<FiniteSemigroup, ValidationError> {
        FiniteSemigroup::validate_inverse(self.name, self.elements, self.table, self.star, max_size)
    }

    /// Associativity-only ingest (drops any provided star).
    pub fn into_plain_semigroup(self, max_size: usize) -> Result<FiniteSemigroup, ValidationError> {
        FiniteSemigroup::validate_plain(self.name, self.elements, self.table, max_size)
    }
}

/// Generator interchange format for partial injections: images are 1-based,
/// `null` marks an undefined point.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GeneratorJson {
    pub degree: usize,
    pub generators: Vec<Vec<Option<usize>>>,
}

/// The idempotents of a semigroup (`e = e^2`; for inverse structures also
/// `e = e*`, which is implied and asserted) with their natural partial order
/// `e <= d  iff  e d = e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentSet {
    /// Element indices, ascending.
    pub indices: Vec<usize>,
    /// `leq[a][b]`: whether `indices[a] <= indices[b]` in the natural order.
    pub leq: Vec<Vec<bool>>,
}

impl IdempotentSet {
    pub fn count(&self) -> usize {
        self.indices.len()
    }

    pub fn position_of(&self, element: usize) -> Option<usize> {
        self.indices.binary_search(&element).ok()
    }
}

pub fn idempotents(s: &FiniteSemigroup) -> IdempotentSet {
    let indices: Vec<usize> = (0..s.len()).filter(|&e| s.mul(e, e) == e).collect();
    if let Some(star) = s.star_map() {
        for &e in &indices {
            assert_eq!(star[e], e, "idempotent {e} must be self-inverse");
        }
    }
    let leq = indices
        .iter()
        .map(|&a| indices.iter().map(|&b| s.mul(a, b) == a).collect())
        .collect();
    IdempotentSet { indices, leq }
}

/// Whether every pair of idempotents has a common upper bound in the natural
/// order; the witness is the lexicographically first failing pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Directedness {
    Directed,
    NotDirected { witness: (usize, usize) },
}

pub fn is_upward_directed(s: &FiniteSemigroup, e: &IdempotentSet) -> Directedness {
    for (p, &a) in e.indices.iter().enumerate() {
        for &b in &e.indices[p..] {
            let bounded = e.indices.iter().any(|&g| s.mul(a, g) == a && s.mul(b, g) == b);
            if !bounded {
                return Directedness::NotDirected { witness: (a, b) };
            }
        }
    }
    Directedness::Directed
}
