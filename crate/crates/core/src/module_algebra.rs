//! The idempotent-sandwich ideal J of a semigroup algebra, the element
//! congruence it induces, and the quotient-group analysis used to decide
//! module super-amenability for inverse semigroups with directed idempotents.

use crate::linalg::{rat, sparse_normalize, SparseVec, Subspace};
use crate::semigroup::{
    idempotents, is_upward_directed, Directedness, FiniteSemigroup, IdempotentSet,
};
use crate::{Guards, InternalFinding, SizeGuard};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModuleError {
    #[error(transparent)]
    Guard(#[from] SizeGuard),
    #[error(transparent)]
    Finding(#[from] InternalFinding),
}

/// J = span of all `delta_{s e t} - delta_{s t}` over elements `s, t` and
/// idempotents `e`. Closed under multiplication on both sides, which is what
/// makes the congruence below well defined.
pub fn compute_j_span(s: &FiniteSemigroup, e: &IdempotentSet) -> Subspace {
    let n = s.len();
    let mut j = Subspace::zero(n);
    let rows: Vec<Vec<SparseVec>> = crate::par::map_indices(n, |x| {
        let mut out = Vec::with_capacity(n * e.indices.len());
        for &ei in &e.indices {
            let xe = s.mul(x, ei);
            for t in 0..n {
                let sandwiched = s.mul(xe, t);
                let plain = s.mul(x, t);
                if sandwiched != plain {
                    out.push(sparse_normalize(vec![(plain, rat(-1)), (sandwiched, rat(1))]));
                }
            }
        }
        out
    });
    j.absorb(rows.into_iter().flatten().collect()).expect("rows share the ambient dimension");
    j
}

/// The congruence `s ~ t iff delta_s - delta_t` lies in J, with its class
/// list (ordered by least member) and the induced multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub quotient_table: Vec<Vec<usize>>,
}

pub fn congruence(s: &FiniteSemigroup, j: &Subspace) -> Result<Congruence, InternalFinding> {
    let n = s.len();
    let residues = crate::par::map_indices(n, |x| j.reduce_sparse(vec![(x, rat(1))]));
    let mut key_to_class: BTreeMap<SparseVec, usize> = BTreeMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![0; n];
    for (x, r) in residues.into_iter().enumerate() {
        let next = classes.len();
        let c = *key_to_class.entry(r).or_insert(next);
        if c == next {
            classes.push(Vec::new());
        }
        classes[c].push(x);
        class_of[x] = c;
    }
    let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let quotient_table: Vec<Vec<usize>> = reps
        .iter()
        .map(|&a| reps.iter().map(|&b| class_of[s.mul(a, b)]).collect())
        .collect();
    // J being an ideal makes this automatic; a violation means the J
    // computation itself is broken, so it surfaces as a finding.
    for x in 0..n {
        for y in 0..n {
            let expected = quotient_table[class_of[x]][class_of[y]];
            if class_of[s.mul(x, y)] != expected {
                let (s1, t1) = (reps[class_of[x]], reps[class_of[y]]);
                return Err(InternalFinding::QuotientIllDefined {
                    s: s.label(s1).to_string(),
                    t: s.label(t1).to_string(),
                    s2: s.label(x).to_string(),
                    t2: s.label(y).to_string(),
                });
            }
        }
    }
    Ok(Congruence { classes, class_of, quotient_table })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum GroupFailure {
    NotAssociative { i: usize, j: usize, k: usize },
    NoIdentity,
    NoInverse { class: usize },
}

/// Whether the quotient multiplication is a group, with a witness otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientGroupReport {
    pub is_group: bool,
    pub order: usize,
    pub identity: Option<usize>,
    pub failure: Option<GroupFailure>,
}

pub fn quotient_group_report(c: &Congruence) -> QuotientGroupReport {
    let m = c.classes.len();
    let mul = |a: usize, b: usize| c.quotient_table[a][b];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                if mul(mul(i, j), k) != mul(i, mul(j, k)) {
                    return QuotientGroupReport {
                        is_group: false,
                        order: m,
                        identity: None,
                        failure: Some(GroupFailure::NotAssociative { i, j, k }),
                    };
                }
            }
        }
    }
    let identity = (0..m).find(|&e| (0..m).all(|x| mul(e, x) == x && mul(x, e) == x));
    let Some(e) = identity else {
        return QuotientGroupReport {
            is_group: false,
            order: m,
            identity: None,
            failure: Some(GroupFailure::NoIdentity),
        };
    };
    for x in 0..m {
        if !(0..m).any(|y| mul(x, y) == e && mul(y, x) == e) {
            return QuotientGroupReport {
                is_group: false,
                order: m,
                identity: Some(e),
                failure: Some(GroupFailure::NoInverse { class: x }),
            };
        }
    }
    QuotientGroupReport { is_group: true, order: m, identity: Some(e), failure: None }
}

/// Which decision route applies to a semigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Route {
    /// Inverse, upward directed, and the quotient is a group: module
    /// super-amenability follows.
    #[serde(rename = "quotient_group")]
    QuotientGroup,
    /// The hypotheses fail; the computation reports data without a verdict.
    #[serde(rename = "not_covered")]
    NotCovered,
}

impl Route {
    pub fn tag(&self) -> &'static str {
        match self {
            Route::QuotientGroup => "quotient_group",
            Route::NotCovered => "not_covered",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModuleAnalysis {
    pub idempotents: IdempotentSet,
    pub directedness: Directedness,
    pub j: Subspace,
    pub congruence: Congruence,
    pub group: QuotientGroupReport,
    pub route: Route,
}

impl ModuleAnalysis {
    /// `Some(true)` when the covered criterion certifies module
    /// super-amenability; `None` when no implemented route decides.
    pub fn verdict(&self) -> Option<bool> {
        match self.route {
            Route::QuotientGroup => Some(true),
            Route::NotCovered => None,
        }
    }
}

pub fn analyze(s: &FiniteSemigroup, guards: &Guards) -> Result<ModuleAnalysis, ModuleError> {
    crate::guard("module analysis", s.len(), guards.algebra_max)?;
    let e = idempotents(s);
    let directedness = is_upward_directed(s, &e);
    let j = compute_j_span(s, &e);
    let congruence = congruence(s, &j)?;
    let group = quotient_group_report(&congruence);
    let route = if s.is_inverse() && directedness == Directedness::Directed && group.is_group {
        Route::QuotientGroup
    } else {
        Route::NotCovered
    };
    Ok(ModuleAnalysis { idempotents: e, directedness, j, congruence, group, route })
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum DirectednessJson {
    Flag(bool),
    Witness { witness: [String; 2] },
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientJson {
    pub is_group: bool,
    pub order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity_class: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModuleReport {
    pub semigroup: String,
    pub size: usize,
    pub inverse: bool,
    pub idempotents: Vec<String>,
    pub upward_directed: DirectednessJson,
    #[serde(rename = "J_dim")]
    pub j_dim: usize,
    pub classes: Vec<Vec<String>>,
    pub quotient: QuotientJson,
    pub route: Route,
    pub verdict: Option<bool>,
}

pub fn module_report(s: &FiniteSemigroup, a: &ModuleAnalysis) -> ModuleReport {
    let lbl = |i: &usize| s.label(*i).to_string();
    ModuleReport {
        semigroup: s.name().to_string(),
        size: s.len(),
        inverse: s.is_inverse(),
        idempotents: a.idempotents.indices.iter().map(lbl).collect(),
        upward_directed: match &a.directedness {
            Directedness::Directed => DirectednessJson::Flag(true),
            Directedness::NotDirected { witness: (x, y) } => DirectednessJson::Witness {
                witness: [s.label(*x).to_string(), s.label(*y).to_string()],
            },
        },
        j_dim: a.j.dim(),
        classes: a.congruence.classes.iter().map(|c| c.iter().map(lbl).collect()).collect(),
        quotient: QuotientJson {
            is_group: a.group.is_group,
            order: a.group.order,
            identity_class: a
                .group
                .identity
                .map(|c| a.congruence.classes[c].iter().map(lbl).collect()),
            failure: a.group.failure.as_ref().map(|f| match f {
                GroupFailure::NotAssociative { i, j, k } => {
                    format!("not associative on classes ({i}, {j}, {k})")
                }
                GroupFailure::NoIdentity => "no identity class".to_string(),
                GroupFailure::NoInverse { class } => format!("class {class} has no inverse"),
            }),
        },
        route: a.route,
        verdict: a.verdict(),
    }
}
