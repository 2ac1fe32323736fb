//! Partial injections on `{1..n}` and the symmetric inverse monoids they
//! generate. Composition reads left to right: `x (f g) = g(f(x))`.

use super::{FiniteSemigroup, GeneratorJson, ValidationError};
use crate::SizeGuard;
use std::collections::BTreeSet;

/// A partial injective map on `0..degree` (labels render points 1-based).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialPerm {
    degree: usize,
    images: Vec<Option<usize>>,
}

impl PartialPerm {
    pub fn new(degree: usize, images: Vec<Option<usize>>) -> Result<Self, ValidationError> {
        if images.len() != degree {
            return Err(ValidationError::Malformed {
                reason: format!("partial map lists {} images for degree {}", images.len(), degree),
            });
        }
        let mut seen = vec![false; degree];
        for img in images.iter().flatten() {
            if *img >= degree {
                return Err(ValidationError::Malformed {
                    reason: format!("image {} out of range for degree {}", img + 1, degree),
                });
            }
            if seen[*img] {
                return Err(ValidationError::Malformed {
                    reason: format!("image {} repeated: map is not injective", img + 1),
                });
            }
            seen[*img] = true;
        }
        Ok(PartialPerm { degree, images })
    }

    pub fn identity(degree: usize) -> Self {
        PartialPerm { degree, images: (0..degree).map(Some).collect() }
    }

    pub fn empty(degree: usize) -> Self {
        PartialPerm { degree, images: vec![None; degree] }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.images[x]
    }

    /// `x (self other) = other(self(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        let images = self.images.iter().map(|i| i.and_then(|y| other.images[y])).collect();
        PartialPerm { degree: self.degree, images }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![None; self.degree];
        for (x, img) in self.images.iter().enumerate() {
            if let Some(y) = img {
                images[*y] = Some(x);
            }
        }
        PartialPerm { degree: self.degree, images }
    }

    /// One token per point: its 1-based image, or `-` when undefined.
    pub fn label(&self) -> String {
        let tokens: Vec<String> = self
            .images
            .iter()
            .map(|i| match i {
                Some(y) => (y + 1).to_string(),
                None => "-".to_string(),
            })
            .collect();
        if self.degree <= 9 {
            tokens.concat()
        } else {
            tokens.join(",")
        }
    }
}

fn enumerate_all(degree: usize) -> Vec<PartialPerm> {
    // Depth-first over image choices, `None` before ascending images, so the
    // output is sorted in the derived `Ord`.
    fn go(degree: usize, images: &mut Vec<Option<usize>>, used: &mut Vec<bool>, out: &mut Vec<PartialPerm>) {
        if images.len() == degree {
            out.push(PartialPerm { degree, images: images.clone() });
            return;
        }
        images.push(None);
        go(degree, images, used, out);
        images.pop();
        for y in 0..degree {
            if !used[y] {
                used[y] = true;
                images.push(Some(y));
                go(degree, images, used, out);
                images.pop();
                used[y] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(degree, &mut Vec::new(), &mut vec![false; degree], &mut out);
    out
}

fn assemble(name: String, perms: Vec<PartialPerm>) -> Result<FiniteSemigroup, ValidationError> {
    let index_of = |p: &PartialPerm| perms.binary_search(p).expect("closed under composition");
    let table: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| perms.iter().map(|q| index_of(&p.compose(q))).collect())
        .collect();
    let star: Vec<usize> = perms.iter().map(|p| index_of(&p.inverse())).collect();
    let elements = perms.iter().map(PartialPerm::label).collect();
    // Re-validating from scratch cross-checks the construction, star included.
    FiniteSemigroup::validate_inverse(name, elements, table, Some(star), crate::VALIDATION_HARD_CAP)
}

/// All partial injections on `{1..n}`. Guarded at degree 4 (209 elements).
pub fn symmetric_inverse_monoid(n: usize) -> Result<FiniteSemigroup, ValidationError> {
    if n > 4 {
        return Err(
            SizeGuard { what: "symmetric_inverse_monoid degree".into(), size: n, max: 4 }.into()
        );
    }
    assemble(format!("symmetric_inverse_monoid({n})"), enumerate_all(n))
}

/// Closure of the given partial injections under composition and inversion.
pub fn from_generators(
    name: impl Into<String>,
    degree: usize,
    generators: Vec<PartialPerm>,
    max_size: usize,
) -> Result<FiniteSemigroup, ValidationError> {
    let cap = max_size.min(crate::VALIDATION_HARD_CAP);
    if generators.is_empty() {
        return Err(ValidationError::Malformed { reason: "no generators given".into() });
    }
    for g in &generators {
        if g.degree() != degree {
            return Err(ValidationError::Malformed {
                reason: format!("generator degree {} does not match {}", g.degree(), degree),
            });
        }
    }
    let mut set: BTreeSet<PartialPerm> = BTreeSet::new();
    let mut frontier: Vec<PartialPerm> = Vec::new();
    for g in generators {
        for h in [g.inverse(), g] {
            if set.insert(h.clone()) {
                frontier.push(h);
            }
        }
    }
    while !frontier.is_empty() {
        crate::guard("generated semigroup", set.len(), cap)?;
        let mut next = Vec::new();
        for f in &frontier {
            for g in set.iter().chain(frontier.iter()) {
                for p in [f.compose(g), g.compose(f)] {
                    let inv = p.inverse();
                    for h in [p, inv] {
                        if !set.contains(&h) && !next.contains(&h) {
                            next.push(h);
                        }
                    }
                }
            }
        }
        set.extend(frontier.drain(..));
        next.retain(|p| !set.contains(p));
        next.sort();
        next.dedup();
        frontier = next;
    }
    crate::guard("generated semigroup", set.len(), cap)?;
    assemble(name.into(), set.into_iter().collect())
}

/// Ingests the 1-based generator interchange format.
pub fn from_generator_json(
    spec: GeneratorJson,
    max_size: usize,
) -> Result<FiniteSemigroup, ValidationError> {
    let degree = spec.degree;
    let gens = spec
        .generators
        .into_iter()
        .map(|images| {
            let shifted = images
                .into_iter()
                .map(|i| match i {
                    None => Ok(None),
                    Some(0) => Err(ValidationError::Malformed {
                        reason: "generator images are 1-based; 0 is not a point".into(),
                    }),
                    Some(y) => Ok(Some(y - 1)),
                })
                .collect::<Result<Vec<_>, _>>()?;
            PartialPerm::new(degree, shifted)
        })
        .collect::<Result<Vec<_>, _>>()?;
    from_generators(format!("generated_inverse_semigroup(degree={degree})"), degree, gens, max_size)
}
