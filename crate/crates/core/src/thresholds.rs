//! Onset scanning: for a property and a field order, the smallest `m` such
//! that the property holds at every index in `[m, n_max]`.

use rayon::prelude::*;

use crate::count::{count_table_capped, PrimePower};
use crate::error::{domain, Result};
use crate::inequal::{decide, DecideOptions, Method, Property, Verdict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnsetReport {
    pub property: Property,
    pub q: u64,
    pub n_max: u64,
    /// `max(failures) + 1`, or 1 when nothing failed.
    pub onset: u64,
    /// Every failing index in `[1, n_max]`, ascending.
    pub failures: Vec<u64>,
    /// Set when the largest failure lies within 10% of the horizon.
    pub caveat: bool,
    pub exact_decisions: u64,
    pub certified_decisions: u64,
}

/// Whether the last failure sits close enough to the horizon that the onset
/// should not be trusted.
pub fn needs_caveat(failures: &[u64], n_max: u64) -> bool {
    match failures.last() {
        Some(&last) => 10 * (n_max - last.min(n_max)) <= n_max,
        None => false,
    }
}

/// Evaluates `property` at every index in `[1, n_max]`.
pub fn scan_verdicts(
    property: Property,
    q: &PrimePower,
    n_max: u64,
    opts: &DecideOptions,
) -> Result<Vec<Verdict>> {
    if n_max < 1 {
        return Err(domain("scan: n_max must be at least 1"));
    }
    let table = count_table_capped(q, property.reach(n_max), opts.bit_cap)?;
    (1..=n_max)
        .into_par_iter()
        .map(|n| decide(property, &table, n, opts))
        .collect()
}

pub fn scan_onset(
    property: Property,
    q: &PrimePower,
    n_max: u64,
    opts: &DecideOptions,
) -> Result<OnsetReport> {
    if n_max < 2 {
        return Err(domain("scan_onset: n_max must be at least 2"));
    }
    let verdicts = scan_verdicts(property, q, n_max, opts)?;
    Ok(OnsetReport::from_verdicts(property, q.q(), &verdicts))
}

impl OnsetReport {
    /// Assembles a report from the verdicts at `n = 1..=verdicts.len()`.
    pub fn from_verdicts(property: Property, q: u64, verdicts: &[Verdict]) -> Self {
        let n_max = verdicts.len() as u64;
        let failures: Vec<u64> = verdicts
            .iter()
            .zip(1u64..)
            .filter(|(v, _)| !v.holds)
            .map(|(_, n)| n)
            .collect();
        let exact = verdicts.iter().filter(|v| v.method == Method::Exact).count() as u64;
        OnsetReport {
            property,
            q,
            n_max,
            onset: failures.last().map_or(1, |&f| f + 1),
            caveat: needs_caveat(&failures, n_max),
            failures,
            exact_decisions: exact,
            certified_decisions: n_max - exact,
        }
    }
}

/// What the literature predicts for an onset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    Exactly(u64),
    AtMost(u64),
}

impl Expectation {
    pub fn accepts(&self, onset: u64) -> bool {
        match *self {
            Expectation::Exactly(v) => onset == v,
            Expectation::AtMost(v) => onset <= v,
        }
    }
}

/// Conjectured onset of the root-ratio decrease: 14, 8, 6, 6 for
/// q = 2, 3, 4, 5 and 4 beyond.
pub fn remark_onset(q: u64) -> u64 {
    match q {
        2 => 14,
        3 => 8,
        4 | 5 => 6,
        _ => 4,
    }
}

pub fn expected_onset(property: Property, q: u64) -> Expectation {
    match property {
        Property::RootIncreasing => Expectation::Exactly(2),
        Property::RootRatioDecreasing => Expectation::Exactly(remark_onset(q)),
        Property::RatioIncreasing if q >= 9 => Expectation::Exactly(1),
        Property::RatioIncreasing => Expectation::AtMost(19),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemarkRow {
    pub report: OnsetReport,
    pub expected: u64,
    pub matches: bool,
}

/// Root-ratio onsets for each `q`, next to the conjectured values.
/// Mismatches are reported, never hidden.
pub fn remark_table(q_set: &[PrimePower], n_max: u64, opts: &DecideOptions) -> Result<Vec<RemarkRow>> {
    q_set
        .iter()
        .map(|q| {
            let report = scan_onset(Property::RootRatioDecreasing, q, n_max, opts)?;
            let expected = remark_onset(q.q());
            let matches = report.onset == expected;
            Ok(RemarkRow {
                report,
                expected,
                matches,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(q: u64) -> PrimePower {
        PrimePower::new(q).unwrap()
    }

    #[test]
    fn caveat_margin() {
        assert!(!needs_caveat(&[], 100));
        assert!(needs_caveat(&[90], 100));
        assert!(!needs_caveat(&[89], 100));
        assert!(needs_caveat(&[13], 13));
        assert!(!needs_caveat(&[13], 500));
    }

    #[test]
    fn root_ratio_onsets_small_horizon() {
        let o = DecideOptions::default();
        let r = scan_onset(Property::RootRatioDecreasing, &pp(2), 60, &o).unwrap();
        assert_eq!(r.onset, 14);
        assert!(!r.caveat);
        assert_eq!(r.exact_decisions + r.certified_decisions, 60);
        let r = scan_onset(Property::RootRatioDecreasing, &pp(5), 60, &o).unwrap();
        assert_eq!(r.onset, 6);
    }

    #[test]
    fn short_horizon_sets_caveat() {
        let rows = remark_table(&[pp(2)], 13, &DecideOptions::default()).unwrap();
        assert!(rows[0].report.caveat);
        assert!(rows[0].matches);
        assert_eq!(rows[0].report.onset, 14);
    }

    #[test]
    fn prefix_consistency() {
        let o = DecideOptions::default();
        for property in Property::ALL {
            let short = scan_onset(property, &pp(3), 40, &o).unwrap();
            let long = scan_onset(property, &pp(3), 90, &o).unwrap();
            let prefix: Vec<u64> = long.failures.iter().copied().filter(|&n| n <= 40).collect();
            assert_eq!(short.failures, prefix, "{property}");
        }
    }

    #[test]
    fn deterministic_reports() {
        let o = DecideOptions::default();
        let a = scan_onset(Property::RatioIncreasing, &pp(2), 80, &o).unwrap();
        let b = scan_onset(Property::RatioIncreasing, &pp(2), 80, &o).unwrap();
        assert_eq!(a, b);
        assert!(expected_onset(Property::RatioIncreasing, 2).accepts(a.onset));
        assert!(a.failures.contains(&4) && !a.failures.contains(&3));
    }

    #[test]
    fn exact_only_counts_no_certified() {
        let r = scan_onset(Property::RootRatioDecreasing, &pp(3), 30, &DecideOptions::exact_only()).unwrap();
        assert_eq!(r.certified_decisions, 0);
        assert_eq!(r.onset, 8);
    }

    #[test]
    fn n_max_guard() {
        assert!(scan_onset(Property::RootIncreasing, &pp(2), 1, &DecideOptions::default()).is_err());
    }
}
