//! The bicyclic monoid: pairs `(m, n)` of naturals with
//! `(a, b)(c, d) = (a - b + t, d - c + t)` for `t = max(b, c)`.
//! Infinite, so it is handled by functions rather than a table.

pub type Bicyclic = (u64, u64);

pub fn multiply(x: Bicyclic, y: Bicyclic) -> Bicyclic {
    // t >= x.1 and t >= y.0, so these stay in the naturals.
    let t = x.1.max(y.0);
    (x.0 + t - x.1, y.1 + t - y.0)
}

pub fn star(x: Bicyclic) -> Bicyclic {
    (x.1, x.0)
}

pub fn is_idempotent(x: Bicyclic) -> bool {
    x.0 == x.1
}

/// Natural order: `x <= y` iff `x = e y` for an idempotent `e`.
pub fn leq(x: Bicyclic, y: Bicyclic) -> bool {
    x.0 >= y.0 && group_map(x) == group_map(y)
}

/// Idempotents form a descending chain, so every pair is bounded above.
pub fn upper_bound(e: Bicyclic, f: Bicyclic) -> Option<Bicyclic> {
    if !is_idempotent(e) || !is_idempotent(f) {
        return None;
    }
    let k = e.0.min(f.0);
    Some((k, k))
}

/// The quotient onto the integers under addition: `(m, n) -> m - n`.
pub fn group_map(x: Bicyclic) -> i64 {
    x.0 as i64 - x.1 as i64
}
