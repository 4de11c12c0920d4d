use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Stable,
    NotStable,
    /// Some indicator is zero within tolerance and none is clearly negative.
    Boundary,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Stable => "Stable",
            Outcome::NotStable => "NotStable",
            Outcome::Boundary => "Boundary",
        })
    }
}

/// Which decision procedure produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Even leading minors of the rotated `2n × 2n` Hurwitz matrix.
    Theorem1,
    /// Explicit conditions in the polynomial coefficients and `s = cos²(απ/2)`.
    ClosedForm,
    /// Eigenvalue arguments against `απ/2`.
    ArgumentOracle,
    /// Classical Routh-Hurwitz on the `2n`-dimensional integer-order embedding.
    Embedding,
    /// Even leading minors of the generalized Hurwitz matrix of a complex polynomial.
    GeneralizedHurwitz,
    /// Classical Routh-Hurwitz minors of a real polynomial.
    ClassicalHurwitz,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Theorem1 => "theorem1",
            Method::ClosedForm => "closed-form",
            Method::ArgumentOracle => "argument-oracle",
            Method::Embedding => "embedding",
            Method::GeneralizedHurwitz => "generalized-hurwitz",
            Method::ClassicalHurwitz => "classical-hurwitz",
        })
    }
}

/// A stability decision with the indicator values behind it.
///
/// `minors` holds whatever the method compares against zero: `∇_p` for
/// [`Method::Theorem1`], `δ_k` / `Δ_i` for the Hurwitz methods, the closed-form
/// expression values, or the angle margins `|arg λ_j| − απ/2` for the argument oracle.
/// `scales[i]` is the magnitude that `minors[i]` is judged against.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityVerdict {
    pub minors: Vec<f64>,
    pub scales: Vec<f64>,
    pub outcome: Outcome,
    pub method: Method,
    pub boundary_tolerance: f64,
    /// Set when the requested method handed the decision to another one.
    pub delegated_from: Option<Method>,
}

impl StabilityVerdict {
    pub fn new(minors: Vec<f64>, scales: Vec<f64>, tol: f64, method: Method) -> Self {
        let outcome = classify(&minors, &scales, tol);
        Self {
            minors,
            scales,
            outcome,
            method,
            boundary_tolerance: tol,
            delegated_from: None,
        }
    }

    pub fn is_stable(&self) -> bool {
        self.outcome == Outcome::Stable
    }
}

/// Sign classification: any value below `−tol·scale` is `NotStable` (this dominates),
/// otherwise any value within `tol·scale` of zero is `Boundary`, otherwise `Stable`.
pub fn classify(values: &[f64], scales: &[f64], tol: f64) -> Outcome {
    debug_assert_eq!(values.len(), scales.len());
    let mut boundary = false;
    for (v, s) in values.iter().zip(scales) {
        let eps = tol * s;
        if v.is_nan() {
            boundary = true;
        } else if *v < -eps {
            return Outcome::NotStable;
        } else if *v <= eps {
            boundary = true;
        }
    }
    if boundary {
        Outcome::Boundary
    } else {
        Outcome::Stable
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_dominates_boundary() {
        assert_eq!(
            classify(&[0.0, -1.0], &[1.0, 1.0], 1e-9),
            Outcome::NotStable
        );
        assert_eq!(
            classify(&[1e-12, 1.0], &[1.0, 1.0], 1e-9),
            Outcome::Boundary
        );
        assert_eq!(
            classify(&[-1e-12, 1.0], &[1.0, 1.0], 1e-9),
            Outcome::Boundary
        );
        assert_eq!(classify(&[1e-6, 2.0], &[1.0, 1.0], 1e-9), Outcome::Stable);
    }

    #[test]
    fn scale_widens_band() {
        assert_eq!(classify(&[1e-3], &[1e7], 1e-9), Outcome::Boundary);
        assert_eq!(classify(&[1e-3], &[1.0], 1e-9), Outcome::Stable);
    }
}
