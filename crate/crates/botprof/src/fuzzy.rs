//! Trapezoidal linguistic variables and the restricted equivalence function.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FuzzyError {
    #[error("trapezoid points must satisfy a <= b <= c <= d, got ({0}, {1}, {2}, {3})")]
    BadTrapezoid(f64, f64, f64, f64),
    #[error("variable `{0}`: duplicate term label `{1}`")]
    DuplicateLabel(String, String),
    #[error("variable `{0}`: has no terms")]
    NoTerms(String),
    #[error("variable `{0}`: no term has positive membership at {1}")]
    CoverageGap(String, f64),
    #[error("variable `{0}`: domain_min {1} must be below domain_max {2}")]
    BadDomain(String, f64, f64),
    #[error("argument {0} outside [0,1]")]
    OutOfUnitInterval(f64),
}

/// A trapezoidal membership function with break points `a <= b <= c <= d`:
/// zero outside `[a, d]`, one on `[b, c]`, linear on the shoulders. A
/// degenerate shoulder (`a == b` or `c == d`) is a step with membership 1 at
/// the shared point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trapezoid {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Trapezoid {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, FuzzyError> {
        if a <= b && b <= c && c <= d {
            Ok(Self { a, b, c, d })
        } else {
            Err(FuzzyError::BadTrapezoid(a, b, c, d))
        }
    }

    pub fn membership(&self, x: f64) -> f64 {
        if x < self.a || x > self.d {
            0.0
        } else if x < self.b {
            (x - self.a) / (self.b - self.a)
        } else if x <= self.c {
            1.0
        } else {
            // here x > c and x <= d, so c < d
            (self.d - x) / (self.d - self.c)
        }
    }
}

/// A named, ordered set of trapezoidal terms over a numeric domain.
/// Construction enforces label uniqueness and domain coverage (every domain
/// value has at least one term with positive membership).
#[derive(Debug, Clone, PartialEq)]
pub struct LinguisticVariable {
    name: String,
    terms: Vec<(String, Trapezoid)>,
    domain_min: f64,
    domain_max: f64,
}

/// The winning term for a raw value: its label, membership degree, and the
/// raw value itself.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzifiedValue {
    pub label: String,
    pub degree: f64,
    pub raw: f64,
}

impl LinguisticVariable {
    pub fn new(
        name: impl Into<String>,
        domain_min: f64,
        domain_max: f64,
        terms: Vec<(String, Trapezoid)>,
    ) -> Result<Self, FuzzyError> {
        let name = name.into();
        if !(domain_min < domain_max) {
            return Err(FuzzyError::BadDomain(name, domain_min, domain_max));
        }
        if terms.is_empty() {
            return Err(FuzzyError::NoTerms(name));
        }
        for (i, (label, _)) in terms.iter().enumerate() {
            if terms[..i].iter().any(|(l, _)| l == label) {
                return Err(FuzzyError::DuplicateLabel(name, label.clone()));
            }
        }
        let clamp = |v: f64| v.clamp(domain_min, domain_max);
        let terms: Vec<(String, Trapezoid)> = terms
            .into_iter()
            .map(|(label, t)| {
                (
                    label,
                    Trapezoid {
                        a: clamp(t.a),
                        b: clamp(t.b),
                        c: clamp(t.c),
                        d: clamp(t.d),
                    },
                )
            })
            .collect();

        let var = Self {
            name,
            terms,
            domain_min,
            domain_max,
        };
        var.check_coverage()?;
        Ok(var)
    }

    /// Coverage check on a dense sample plus every break point.
    fn check_coverage(&self) -> Result<(), FuzzyError> {
        let mut points: Vec<f64> = (0..=1024)
            .map(|i| self.domain_min + (self.domain_max - self.domain_min) * i as f64 / 1024.0)
            .collect();
        for (_, t) in &self.terms {
            points.extend([t.a, t.b, t.c, t.d]);
        }
        for x in points {
            if !self.terms.iter().any(|(_, t)| t.membership(x) > 0.0) {
                return Err(FuzzyError::CoverageGap(self.name.clone(), x));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn terms(&self) -> &[(String, Trapezoid)] {
        &self.terms
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.domain_min, self.domain_max)
    }

    pub fn has_label(&self, label: &str) -> bool {
        self.terms.iter().any(|(l, _)| l == label)
    }

    /// Winner-take-all fuzzification: the term with maximal membership after
    /// clamping `x` into the domain. Ties go to the earliest declared term.
    pub fn fuzzify(&self, x: f64) -> FuzzifiedValue {
        let clamped = x.clamp(self.domain_min, self.domain_max);
        let (label, degree) = self
            .terms
            .iter()
            .map(|(label, t)| (label, t.membership(clamped)))
            .fold(None::<(&String, f64)>, |best, (label, m)| match best {
                Some((_, bm)) if m <= bm => best,
                _ => Some((label, m)),
            })
            .expect("variable has at least one term");
        FuzzifiedValue {
            label: label.clone(),
            degree,
            raw: x,
        }
    }
}

/// The restricted equivalence function `g(x, y) = 1 - |x - y|` on `[0,1]²`.
pub fn ref_g(x: f64, y: f64) -> Result<f64, FuzzyError> {
    for v in [x, y] {
        if !(0.0..=1.0).contains(&v) {
            return Err(FuzzyError::OutOfUnitInterval(v));
        }
    }
    Ok(1.0 - (x - y).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trap(a: f64, b: f64, c: f64, d: f64) -> Trapezoid {
        Trapezoid::new(a, b, c, d).unwrap()
    }

    pub(crate) fn distance_variable() -> LinguisticVariable {
        LinguisticVariable::new(
            "Distance",
            0.0,
            38.0,
            vec![
                ("Close".into(), trap(0.0, 0.0, 4.0, 7.0)),
                ("Normal".into(), trap(6.0, 9.0, 11.0, 14.0)),
                ("Far".into(), trap(13.0, 16.0, 38.0, 38.0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn membership_matches_published_degrees() {
        assert!((trap(13.0, 16.0, 38.0, 38.0).membership(15.26) - 0.7533).abs() < 1e-3);
        assert!((trap(6.0, 9.0, 11.0, 14.0).membership(13.0) - 0.3333).abs() < 1e-3);
        assert!((trap(0.0, 0.0, 768.0, 1280.0).membership(924.0) - 0.6953).abs() < 1e-3);
    }

    #[test]
    fn degenerate_plateau_is_a_step() {
        assert_eq!(trap(5.0, 5.0, 5.0, 5.0).membership(5.0), 1.0);
        assert_eq!(trap(5.0, 5.0, 5.0, 5.0).membership(5.1), 0.0);
        // left step
        assert_eq!(trap(0.0, 0.0, 0.0, 2.0).membership(0.0), 1.0);
        assert_eq!(trap(0.0, 0.0, 0.0, 2.0).membership(1.0), 0.5);
        // right step
        assert_eq!(trap(4.0, 6.0, 380.0, 380.0).membership(380.0), 1.0);
    }

    #[test]
    fn fuzzify_picks_the_maximal_term() {
        let v = distance_variable();
        let f = v.fuzzify(1.41);
        assert_eq!(f.label, "Close");
        assert_eq!(f.degree, 1.0);
        let f = v.fuzzify(13.89);
        assert_eq!(f.label, "Far");
        assert!((f.degree - 0.2967).abs() < 1e-3);
    }

    #[test]
    fn fuzzify_ties_go_to_the_earlier_term() {
        let v = LinguisticVariable::new(
            "V",
            0.0,
            10.0,
            vec![
                ("A".into(), trap(0.0, 0.0, 4.0, 6.0)),
                ("B".into(), trap(4.0, 6.0, 10.0, 10.0)),
            ],
        )
        .unwrap();
        // at x=5 both memberships are 0.5
        assert_eq!(v.fuzzify(5.0).label, "A");
    }

    #[test]
    fn fuzzify_clamps_outside_values() {
        let v = distance_variable();
        let f = v.fuzzify(53.7);
        assert_eq!(f.label, "Far");
        assert_eq!(f.degree, 1.0);
    }

    #[test]
    fn coverage_gap_is_rejected() {
        let err = LinguisticVariable::new(
            "V",
            0.0,
            10.0,
            vec![
                ("A".into(), trap(0.0, 0.0, 2.0, 3.0)),
                ("B".into(), trap(7.0, 8.0, 10.0, 10.0)),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, FuzzyError::CoverageGap(_, _)));
    }

    #[test]
    fn ref_g_published_value() {
        assert!((ref_g(0.240, 0.122).unwrap() - 0.882).abs() < 1e-9);
        assert_eq!(ref_g(0.37, 0.37).unwrap(), 1.0);
        assert_eq!(ref_g(0.0, 1.0).unwrap(), 0.0);
        assert!(ref_g(1.2, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn membership_stays_in_unit_interval(a in 0.0..10.0f64, w1 in 0.0..5.0f64, w2 in 0.0..5.0f64, w3 in 0.0..5.0f64, x in -5.0..25.0f64) {
            let t = trap(a, a + w1, a + w1 + w2, a + w1 + w2 + w3);
            let m = t.membership(x);
            prop_assert!((0.0..=1.0).contains(&m));
        }

        #[test]
        fn membership_monotone_on_shoulders(x in 0.0..20.0f64, y in 0.0..20.0f64) {
            let t = trap(2.0, 8.0, 12.0, 18.0);
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            if hi <= 8.0 {
                prop_assert!(t.membership(lo) <= t.membership(hi));
            }
            if lo >= 12.0 {
                prop_assert!(t.membership(lo) >= t.membership(hi));
            }
        }

        #[test]
        fn fuzzify_degree_is_the_max_membership(x in -5.0..60.0f64) {
            let v = distance_variable();
            let f = v.fuzzify(x);
            let clamped = x.clamp(0.0, 38.0);
            let max = v.terms().iter().map(|(_, t)| t.membership(clamped)).fold(0.0f64, f64::max);
            prop_assert_eq!(f.degree, max);
        }
    }
}
