//! Corpus battery: the full analysis pipeline over every built-in example,
//! one summary row per member, fanned out in parallel.

use crate::cohomology::cross_check;
use crate::diagonal::DiagonalError;
use crate::module_algebra::{analyze, module_report, ModuleError, ModuleReport};
use crate::par;
use crate::semigroup::corpus::standard_corpus;
use crate::semigroup::FiniteSemigroup;
use crate::Guards;
use serde::Serialize;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BatteryError {
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Diagonal(#[from] DiagonalError),
}

/// One member's results. The tensor-square stages are `None` when the member
/// exceeds the tensor guard.
#[derive(Debug, Clone, Serialize)]
pub struct BatteryRow {
    #[serde(flatten)]
    pub module: ModuleReport,
    pub diagonal_feasible: Option<bool>,
    pub h1_all_zero: Option<bool>,
    pub cohomology_consistent: Option<bool>,
    pub elapsed_ms: u64,
}

/// Runs every stage that fits the guards on one semigroup.
pub fn battery_row(s: &FiniteSemigroup, guards: &Guards) -> Result<BatteryRow, BatteryError> {
    let t0 = Instant::now();
    let analysis = analyze(s, guards)?;
    let module = module_report(s, &analysis);
    let (diagonal_feasible, h1_all_zero, cohomology_consistent) = if s.len() <= guards.tensor_max {
        let cc = cross_check(s, guards)?;
        (
            Some(cc.diagonal_feasible),
            Some(cc.bimodules.iter().all(|b| b.h1 == 0)),
            Some(cc.consistent),
        )
    } else {
        (None, None, None)
    };
    Ok(BatteryRow {
        module,
        diagonal_feasible,
        h1_all_zero,
        cohomology_consistent,
        elapsed_ms: t0.elapsed().as_millis() as u64,
    })
}

/// Runs [`battery_row`] over the whole built-in corpus, sorted by name.
pub fn run_battery(guards: &Guards) -> Result<Vec<BatteryRow>, BatteryError> {
    let mut members = standard_corpus();
    members.sort_by(|a, b| a.name().cmp(b.name()));
    par::map_vec(members, |s| battery_row(&s, guards)).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module_algebra::Route;

    #[test]
    fn battery_covers_the_corpus_with_expected_rows() {
        let rows = run_battery(&Guards::default()).unwrap();
        let names: Vec<&str> = rows.iter().map(|r| r.module.semigroup.as_str()).collect();
        assert_eq!(
            names,
            [
                "brandt(2)",
                "cyclic_group(2)",
                "cyclic_group(3)",
                "cyclic_group(6)",
                "max_semilattice(2)",
                "max_semilattice(4)",
                "meet_semilattice_nondirected",
                "symmetric_inverse_monoid(2)",
                "symmetric_inverse_monoid(3)",
                "truncated_add_monoid(2)",
            ]
        );
        let by_name = |n: &str| rows.iter().find(|r| r.module.semigroup == n).unwrap();

        let b2 = by_name("brandt(2)");
        assert_eq!((b2.module.size, b2.module.j_dim), (5, 4));
        assert_eq!(b2.module.quotient.order, 1);
        assert_eq!(b2.module.route, Route::NotCovered);
        assert_eq!(b2.diagonal_feasible, Some(true));

        let c6 = by_name("cyclic_group(6)");
        assert_eq!((c6.module.j_dim, c6.module.quotient.order), (0, 6));
        assert_eq!(c6.module.verdict, Some(true));
        assert_eq!(c6.cohomology_consistent, Some(true));

        let i2 = by_name("symmetric_inverse_monoid(2)");
        assert_eq!((i2.module.size, i2.module.j_dim), (7, 6));
        assert_eq!(i2.module.route, Route::QuotientGroup);
        assert_eq!(i2.h1_all_zero, Some(true));

        // Too large for the tensor square: analysis only.
        let i3 = by_name("symmetric_inverse_monoid(3)");
        assert_eq!((i3.module.size, i3.module.j_dim), (34, 33));
        assert_eq!(i3.module.quotient.order, 1);
        assert_eq!(i3.module.verdict, Some(true));
        assert_eq!(i3.diagonal_feasible, None);
        assert_eq!(i3.h1_all_zero, None);

        let t2 = by_name("truncated_add_monoid(2)");
        assert!(!t2.module.inverse);
        assert_eq!(t2.module.route, Route::NotCovered);
        assert_eq!(t2.diagonal_feasible, Some(true));
    }

    #[test]
    fn battery_rows_match_between_parallel_and_sequential_execution() {
        let members = [
            crate::semigroup::corpus::brandt(2).unwrap(),
            crate::semigroup::corpus::by_name("symmetric_inverse_monoid:2", 250).unwrap(),
        ];
        let guards = Guards::default();
        for s in &members {
            let a = battery_row(s, &guards).unwrap();
            par::force_sequential(true);
            let b = battery_row(s, &guards);
            par::force_sequential(false);
            let b = b.unwrap();
            assert_eq!(a.module.j_dim, b.module.j_dim);
            assert_eq!(a.module.classes, b.module.classes);
            assert_eq!(a.module.verdict, b.module.verdict);
            assert_eq!(a.diagonal_feasible, b.diagonal_feasible);
            assert_eq!(a.h1_all_zero, b.h1_all_zero);
        }
    }
}
