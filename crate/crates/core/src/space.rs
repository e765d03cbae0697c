//! Finite sets carrying a nonnegative measure.

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;

use crate::error::MeasureError;
use crate::weight::{Weight, WeightError};

/// A finite labelled set with an exact nonnegative weight on every point.
///
/// Points are identified by their text label. The stored label order is kept
/// for display and for the order of direct-sum components, but two spaces
/// compare equal whenever they assign the same weight to the same labels.
#[derive(Clone)]
pub struct FiniteMeasureSpace {
    labels: Vec<String>,
    weights: Vec<Weight>,
    index: HashMap<String, usize>,
}

impl FiniteMeasureSpace {
    /// Validates labels and weights into a space.
    pub fn new<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        weights: impl IntoIterator<Item = Weight>,
    ) -> Result<Self, MeasureError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let weights: Vec<Weight> = weights.into_iter().collect();
        if labels.len() != weights.len() {
            return Err(MeasureError::LengthMismatch {
                labels: labels.len(),
                weights: weights.len(),
            });
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(MeasureError::DuplicateLabel(label.clone()));
            }
        }
        Ok(FiniteMeasureSpace {
            labels,
            weights,
            index,
        })
    }

    /// Like [`new`](Self::new) but takes signed rationals, rejecting negative ones.
    pub fn from_rationals<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        weights: impl IntoIterator<Item = BigRational>,
    ) -> Result<Self, MeasureError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let raw: Vec<BigRational> = weights.into_iter().collect();
        let mut weights = Vec::with_capacity(raw.len());
        for (i, r) in raw.into_iter().enumerate() {
            match Weight::from_rational(r) {
                Ok(w) => weights.push(w),
                Err(err) => {
                    return Err(MeasureError::NegativeWeight {
                        label: labels.get(i).cloned().unwrap_or_default(),
                        weight: match err {
                            WeightError::Negative(s) => s,
                            other => other.to_string(),
                        },
                    })
                }
            }
        }
        Self::new(labels, weights)
    }

    /// Convenience constructor from label and weight strings such as `"1/2"`.
    pub fn parse(labels: &[&str], weights: &[&str]) -> Result<Self, MeasureError> {
        let mut parsed = Vec::with_capacity(weights.len());
        for (i, text) in weights.iter().enumerate() {
            let label = labels.get(i).copied().unwrap_or_default().to_string();
            match text.parse::<Weight>() {
                Ok(w) => parsed.push(w),
                Err(WeightError::Negative(weight)) => {
                    return Err(MeasureError::NegativeWeight { label, weight })
                }
                Err(err) => {
                    return Err(MeasureError::BadWeight {
                        label,
                        reason: err.to_string(),
                    })
                }
            }
        }
        Self::new(labels.iter().copied(), parsed)
    }

    /// The empty space (zero points, zero mass).
    pub fn empty() -> Self {
        FiniteMeasureSpace {
            labels: Vec::new(),
            weights: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// The one-point space `{*}` carrying `mass`.
    pub fn point(mass: Weight) -> Self {
        Self::new(["*"], [mass]).expect("single label is distinct")
    }

    /// Uniform probability measure on labels `0..n`.
    pub fn uniform(n: usize) -> Self {
        assert!(n >= 1, "uniform space needs at least one point");
        let w = Weight::new(1, n as i64).expect("n >= 1");
        Self::new((0..n).map(|i| i.to_string()), std::iter::repeat_n(w, n))
            .expect("numeric labels are distinct")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Weight)> + '_ {
        self.labels
            .iter()
            .map(String::as_str)
            .zip(self.weights.iter())
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn weight_of(&self, label: &str) -> Option<&Weight> {
        self.index_of(label).map(|i| &self.weights[i])
    }

    /// Exact sum of all weights.
    pub fn total_mass(&self) -> Weight {
        self.weights.iter().sum()
    }

    /// True iff the total mass is exactly one.
    pub fn is_probability(&self) -> bool {
        self.total_mass().is_one()
    }

    /// Splits the space into its total mass and the probability measure it
    /// rescales, so that `mass * normalized == self`.
    pub fn normalize(&self) -> Result<(Weight, FiniteMeasureSpace), MeasureError> {
        let mass = self.total_mass();
        if mass.is_zero() {
            return Err(MeasureError::ZeroTotalMass);
        }
        let weights = self
            .weights
            .iter()
            .map(|w| w.checked_div(&mass).expect("mass is positive"));
        let normalized = FiniteMeasureSpace {
            labels: self.labels.clone(),
            weights: weights.collect(),
            index: self.index.clone(),
        };
        Ok((mass, normalized))
    }

    /// Same labels, new weights. Caller guarantees the length matches.
    pub(crate) fn with_weights(&self, weights: Vec<Weight>) -> FiniteMeasureSpace {
        debug_assert_eq!(weights.len(), self.labels.len());
        FiniteMeasureSpace {
            labels: self.labels.clone(),
            weights,
            index: self.index.clone(),
        }
    }

    /// First label (in `self` order) where the two spaces disagree, if any.
    pub fn first_difference(&self, other: &FiniteMeasureSpace) -> Option<String> {
        for (label, w) in self.iter() {
            match other.weight_of(label) {
                Some(v) if v == w => {}
                _ => return Some(label.to_string()),
            }
        }
        other
            .labels
            .iter()
            .find(|l| self.index_of(l).is_none())
            .cloned()
    }
}

impl PartialEq for FiniteMeasureSpace {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.first_difference(other).is_none()
    }
}

impl Eq for FiniteMeasureSpace {}

impl fmt::Debug for FiniteMeasureSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.iter().map(|(l, w)| (l, w.to_string())))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_half_is_a_probability_space() {
        let p = FiniteMeasureSpace::parse(&["a", "b"], &["1/2", "1/2"]).unwrap();
        assert!(p.is_probability());
        assert_eq!(p.total_mass(), Weight::one());
    }

    #[test]
    fn zero_point_space_is_a_valid_measure() {
        let p = FiniteMeasureSpace::parse(&["a"], &["0"]).unwrap();
        assert!(p.total_mass().is_zero());
        assert!(!p.is_probability());
    }

    #[test]
    fn rejects_duplicate_labels() {
        let err = FiniteMeasureSpace::parse(&["a", "a"], &["1/2", "1/2"]).unwrap_err();
        assert_eq!(err, MeasureError::DuplicateLabel("a".into()));
    }

    #[test]
    fn rejects_negative_weight_and_length_mismatch() {
        let err = FiniteMeasureSpace::parse(&["a", "b"], &["1/2", "-1/2"]).unwrap_err();
        assert!(matches!(err, MeasureError::NegativeWeight { ref label, .. } if label == "b"));
        let err = FiniteMeasureSpace::parse(&["a", "b"], &["1"]).unwrap_err();
        assert_eq!(
            err,
            MeasureError::LengthMismatch {
                labels: 2,
                weights: 1
            }
        );
    }

    #[test]
    fn total_mass_examples() {
        let p = FiniteMeasureSpace::parse(&["a", "b"], &["1", "1"]).unwrap();
        assert_eq!(p.total_mass(), Weight::from_integer(2));
        assert!(FiniteMeasureSpace::empty().total_mass().is_zero());
    }

    #[test]
    fn normalize_examples() {
        let p = FiniteMeasureSpace::parse(&["a", "b"], &["1", "1"]).unwrap();
        let (mass, bar) = p.normalize().unwrap();
        assert_eq!(mass, Weight::from_integer(2));
        assert_eq!(
            bar,
            FiniteMeasureSpace::parse(&["a", "b"], &["1/2", "1/2"]).unwrap()
        );

        let half = FiniteMeasureSpace::parse(&["a", "b"], &["1/2", "1/2"]).unwrap();
        let (mass, bar) = half.normalize().unwrap();
        assert!(mass.is_one());
        assert_eq!(bar, half);

        let zero = FiniteMeasureSpace::parse(&["a", "b"], &["0", "0"]).unwrap();
        assert_eq!(zero.normalize().unwrap_err(), MeasureError::ZeroTotalMass);
    }

    #[test]
    fn equality_ignores_label_order() {
        let p = FiniteMeasureSpace::parse(&["a", "b"], &["1/3", "2/3"]).unwrap();
        let q = FiniteMeasureSpace::parse(&["b", "a"], &["2/3", "1/3"]).unwrap();
        let r = FiniteMeasureSpace::parse(&["x", "y"], &["1/3", "2/3"]).unwrap();
        assert_eq!(p, q);
        assert_ne!(p, r);
        assert_eq!(p.first_difference(&r).as_deref(), Some("a"));
    }
}
