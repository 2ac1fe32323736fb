//! Named example semigroups with known structure, used as test fixtures and
//! exposed through the command line by name.

use super::{partial_perm, FiniteSemigroup, ValidationError};

/// Inverse validation when the axioms hold, associativity-only otherwise.
fn inverse_or_plain(
    name: String,
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
) -> Result<FiniteSemigroup, ValidationError> {
    match FiniteSemigroup::validate_inverse(
        name.clone(),
        elements.clone(),
        table.clone(),
        None,
        crate::VALIDATION_HARD_CAP,
    ) {
        Ok(s) => Ok(s),
        Err(ValidationError::NotInverse { .. } | ValidationError::InverseNotUnique { .. }) => {
            FiniteSemigroup::validate_plain(name, elements, table, crate::VALIDATION_HARD_CAP)
        }
        Err(e) => Err(e),
    }
}

/// `{1..k}` under `max`: a chain semilattice with top element `k`.
pub fn max_semilattice(k: usize) -> Result<FiniteSemigroup, ValidationError> {
    if k == 0 {
        return Err(ValidationError::Malformed { reason: "max_semilattice needs k >= 1".into() });
    }
    crate::guard("semigroup", k, crate::VALIDATION_HARD_CAP)?;
    let elements = (1..=k).map(|i| i.to_string()).collect();
    let table = (0..k).map(|i| (0..k).map(|j| i.max(j)).collect()).collect();
    inverse_or_plain(format!("max_semilattice({k})"), elements, table)
}

/// The cyclic group of order `n` with labels `e, g, g^2, ...`.
pub fn cyclic_group(n: usize) -> Result<FiniteSemigroup, ValidationError> {
    if n == 0 {
        return Err(ValidationError::Malformed { reason: "cyclic_group needs n >= 1".into() });
    }
    crate::guard("semigroup", n, crate::VALIDATION_HARD_CAP)?;
    let elements = (0..n)
        .map(|i| match i {
            0 => "e".to_string(),
            1 => "g".to_string(),
            _ => format!("g^{i}"),
        })
        .collect();
    let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    inverse_or_plain(format!("cyclic_group({n})"), elements, table)
}

/// Combinatorial Brandt semigroup: matrix units `(i,j)` over `{1..n}` plus a
/// zero, `(i,j)(k,l) = (i,l)` when `j = k` and `0` otherwise.
pub fn brandt(n: usize) -> Result<FiniteSemigroup, ValidationError> {
    if n == 0 {
        return Err(ValidationError::Malformed { reason: "brandt needs n >= 1".into() });
    }
    let size = n * n + 1;
    crate::guard("semigroup", size, crate::VALIDATION_HARD_CAP)?;
    let zero = n * n;
    let pair = |i: usize, j: usize| i * n + j;
    let mut elements: Vec<String> = Vec::with_capacity(size);
    for i in 1..=n {
        for j in 1..=n {
            elements.push(format!("({i},{j})"));
        }
    }
    elements.push("0".to_string());
    let mut table = vec![vec![zero; size]; size];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                table[pair(i, j)][pair(j, l)] = pair(i, l);
            }
        }
    }
    inverse_or_plain(format!("brandt({n})"), elements, table)
}

/// `{0..k}` under truncated addition `min(s + t, k)`. A monoid with zero
/// element `k`; for `k >= 2` it is not an inverse semigroup.
pub fn truncated_add_monoid(k: usize) -> Result<FiniteSemigroup, ValidationError> {
    crate::guard("semigroup", k + 1, crate::VALIDATION_HARD_CAP)?;
    let elements = (0..=k).map(|i| i.to_string()).collect();
    let table = (0..=k).map(|i| (0..=k).map(|j| (i + j).min(k)).collect()).collect();
    inverse_or_plain(format!("truncated_add_monoid({k})"), elements, table)
}

/// The meet semilattice `{0, e, f}` with `e f = 0`: the smallest example
/// whose idempotents are not upward directed.
pub fn meet_semilattice_nondirected() -> Result<FiniteSemigroup, ValidationError> {
    let elements = vec!["0".to_string(), "e".to_string(), "f".to_string()];
    let table = vec![vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 2]];
    inverse_or_plain("meet_semilattice_nondirected".to_string(), elements, table)
}

/// `x y = x` on `n` points. Not inverse for `n >= 2` (inverses are not
/// unique); useful for exercising rejection and infeasibility paths.
pub fn left_zero(n: usize) -> Result<FiniteSemigroup, ValidationError> {
    if n == 0 {
        return Err(ValidationError::Malformed { reason: "left_zero needs n >= 1".into() });
    }
    crate::guard("semigroup", n, crate::VALIDATION_HARD_CAP)?;
    let elements = (1..=n).map(|i| format!("x{i}")).collect();
    let table = (0..n).map(|i| vec![i; n]).collect();
    inverse_or_plain(format!("left_zero({n})"), elements, table)
}

/// Resolves `name` or `name:arg` to a corpus member, then checks the result
/// against `max_size`.
pub fn by_name(spec: &str, max_size: usize) -> Result<FiniteSemigroup, ValidationError> {
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let parse_arg = |what: &str| -> Result<usize, ValidationError> {
        let raw = arg.ok_or_else(|| ValidationError::Malformed {
            reason: format!("{what} needs a numeric parameter, e.g. {what}:3"),
        })?;
        raw.parse().map_err(|_| ValidationError::Malformed {
            reason: format!("bad parameter {raw:?} for {what}"),
        })
    };
    let no_arg = |what: &str| -> Result<(), ValidationError> {
        match arg {
            None => Ok(()),
            Some(_) => Err(ValidationError::Malformed {
                reason: format!("{what} takes no parameter"),
            }),
        }
    };
    let s = match name {
        "max_semilattice" => max_semilattice(parse_arg(name)?)?,
        "cyclic_group" => cyclic_group(parse_arg(name)?)?,
        "brandt" => brandt(parse_arg(name)?)?,
        "truncated_add_monoid" => truncated_add_monoid(parse_arg(name)?)?,
        "symmetric_inverse_monoid" => partial_perm::symmetric_inverse_monoid(parse_arg(name)?)?,
        "left_zero" => left_zero(parse_arg(name)?)?,
        "meet_semilattice_nondirected" => {
            no_arg(name)?;
            meet_semilattice_nondirected()?
        }
        _ => {
            return Err(ValidationError::Malformed {
                reason: format!(
                    "unknown corpus name {name:?}; known: max_semilattice, cyclic_group, brandt, \
                     truncated_add_monoid, symmetric_inverse_monoid, meet_semilattice_nondirected, \
                     left_zero"
                ),
            })
        }
    };
    crate::guard("semigroup", s.len(), max_size)?;
    Ok(s)
}

/// The fixed battery every full-corpus run works through.
pub fn standard_corpus() -> Vec<FiniteSemigroup> {
    vec![
        max_semilattice(2).unwrap(),
        max_semilattice(4).unwrap(),
        cyclic_group(2).unwrap(),
        cyclic_group(3).unwrap(),
        cyclic_group(6).unwrap(),
        brandt(2).unwrap(),
        truncated_add_monoid(2).unwrap(),
        meet_semilattice_nondirected().unwrap(),
        partial_perm::symmetric_inverse_monoid(2).unwrap(),
        partial_perm::symmetric_inverse_monoid(3).unwrap(),
    ]
}
