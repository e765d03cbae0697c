//! Measure-preserving maps between finite measure spaces.

use std::collections::HashMap;
use std::fmt;

use crate::error::MeasureError;
use crate::space::FiniteMeasureSpace;
use crate::weight::Weight;

/// A function between finite measure spaces whose pushforward of the domain
/// measure is exactly the codomain measure.
#[derive(Clone)]
pub struct MeasurePreservingMap {
    domain: FiniteMeasureSpace,
    codomain: FiniteMeasureSpace,
    // assignment[i] is the codomain index of domain point i
    assignment: Vec<usize>,
}

impl MeasurePreservingMap {
    /// Validates a label-to-label assignment.
    pub fn new<A, B>(
        domain: FiniteMeasureSpace,
        codomain: FiniteMeasureSpace,
        assignment: impl IntoIterator<Item = (A, B)>,
    ) -> Result<Self, MeasureError>
    where
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut targets: Vec<Option<usize>> = vec![None; domain.len()];
        for (from, to) in assignment {
            let (from, to) = (from.as_ref(), to.as_ref());
            let i = domain
                .index_of(from)
                .ok_or_else(|| MeasureError::UnknownSource(from.to_string()))?;
            let j = codomain
                .index_of(to)
                .ok_or_else(|| MeasureError::TargetNotInCodomain {
                    source_label: from.to_string(),
                    target: to.to_string(),
                })?;
            if let Some(prev) = targets[i] {
                if prev != j {
                    return Err(MeasureError::ConflictingAssignment {
                        source_label: from.to_string(),
                        first: codomain.labels()[prev].clone(),
                        second: to.to_string(),
                    });
                }
            }
            targets[i] = Some(j);
        }
        let mut indices = Vec::with_capacity(targets.len());
        for (i, t) in targets.into_iter().enumerate() {
            indices.push(t.ok_or_else(|| MeasureError::UnmappedPoint(domain.labels()[i].clone()))?);
        }
        Self::from_indices(domain, codomain, indices)
    }

    /// Validates an assignment given as codomain indices, one per domain point.
    pub fn from_indices(
        domain: FiniteMeasureSpace,
        codomain: FiniteMeasureSpace,
        assignment: Vec<usize>,
    ) -> Result<Self, MeasureError> {
        if assignment.len() != domain.len() {
            let missing = domain
                .labels()
                .get(assignment.len())
                .cloned()
                .unwrap_or_default();
            return Err(MeasureError::UnmappedPoint(missing));
        }
        if let Some((i, &j)) = assignment
            .iter()
            .enumerate()
            .find(|(_, &j)| j >= codomain.len())
        {
            return Err(MeasureError::TargetNotInCodomain {
                source_label: domain.labels()[i].clone(),
                target: format!("#{j}"),
            });
        }
        let pushed = pushforward(&domain, codomain.len(), &assignment);
        for (j, (stated, pushed)) in codomain.weights().iter().zip(&pushed).enumerate() {
            if stated != pushed {
                return Err(MeasureError::PushforwardMismatch {
                    label: codomain.labels()[j].clone(),
                    stated: stated.to_string(),
                    pushed: pushed.to_string(),
                });
            }
        }
        Ok(MeasurePreservingMap {
            domain,
            codomain,
            assignment,
        })
    }

    /// Builds the map whose codomain carries the pushforward of `domain`
    /// over the given codomain labels. Labels with no preimage get weight 0.
    pub fn with_pushforward<S: Into<String>>(
        domain: FiniteMeasureSpace,
        codomain_labels: impl IntoIterator<Item = S>,
        assignment: Vec<usize>,
    ) -> Result<Self, MeasureError> {
        let labels: Vec<String> = codomain_labels.into_iter().map(Into::into).collect();
        if let Some((i, &j)) = assignment
            .iter()
            .enumerate()
            .find(|(_, &j)| j >= labels.len())
        {
            return Err(MeasureError::TargetNotInCodomain {
                source_label: domain.labels()[i].clone(),
                target: format!("#{j}"),
            });
        }
        if assignment.len() != domain.len() {
            let missing = domain
                .labels()
                .get(assignment.len())
                .cloned()
                .unwrap_or_default();
            return Err(MeasureError::UnmappedPoint(missing));
        }
        let weights = pushforward(&domain, labels.len(), &assignment);
        let codomain = FiniteMeasureSpace::new(labels, weights)?;
        Ok(MeasurePreservingMap {
            domain,
            codomain,
            assignment,
        })
    }

    pub fn identity(space: &FiniteMeasureSpace) -> Self {
        MeasurePreservingMap {
            domain: space.clone(),
            codomain: space.clone(),
            assignment: (0..space.len()).collect(),
        }
    }

    /// The unique map from `space` to the one-point space `{*}` carrying the
    /// total mass of `space`.
    pub fn terminal(space: &FiniteMeasureSpace) -> Self {
        MeasurePreservingMap {
            domain: space.clone(),
            codomain: FiniteMeasureSpace::point(space.total_mass()),
            assignment: vec![0; space.len()],
        }
    }

    pub fn domain(&self) -> &FiniteMeasureSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteMeasureSpace {
        &self.codomain
    }

    /// Codomain index of each domain point, in domain order.
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Target label of a domain label.
    pub fn image_of(&self, label: &str) -> Option<&str> {
        self.domain
            .index_of(label)
            .map(|i| self.codomain.labels()[self.assignment[i]].as_str())
    }

    /// `(source, target)` label pairs in domain order.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.domain
            .labels()
            .iter()
            .zip(&self.assignment)
            .map(|(l, &j)| (l.as_str(), self.codomain.labels()[j].as_str()))
    }

    /// True iff the underlying function is a bijection of labels.
    pub fn is_bijective(&self) -> bool {
        if self.domain.len() != self.codomain.len() {
            return false;
        }
        let mut hit = vec![false; self.codomain.len()];
        for &j in &self.assignment {
            if std::mem::replace(&mut hit[j], true) {
                return false;
            }
        }
        true
    }

    /// Reassembles the map from validated parts. Used by constructions that
    /// preserve measure by design; debug builds still check.
    pub(crate) fn from_parts_unchecked(
        domain: FiniteMeasureSpace,
        codomain: FiniteMeasureSpace,
        assignment: Vec<usize>,
    ) -> Self {
        debug_assert_eq!(
            pushforward(&domain, codomain.len(), &assignment),
            codomain.weights()
        );
        MeasurePreservingMap {
            domain,
            codomain,
            assignment,
        }
    }
}

/// Exact pushforward weights `q_j = sum of p_i over i with f(i) = j`.
pub(crate) fn pushforward(
    domain: &FiniteMeasureSpace,
    codomain_len: usize,
    assignment: &[usize],
) -> Vec<Weight> {
    let mut out = vec![Weight::zero(); codomain_len];
    for (w, &j) in domain.weights().iter().zip(assignment) {
        if !w.is_zero() {
            out[j] = &out[j] + w;
        }
    }
    out
}

impl PartialEq for MeasurePreservingMap {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain
            && self.codomain == other.codomain
            && self
                .pairs()
                .all(|(from, to)| other.image_of(from) == Some(to))
    }
}

impl Eq for MeasurePreservingMap {}

impl fmt::Debug for MeasurePreservingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: HashMap<&str, &str> = self.pairs().collect();
        f.debug_struct("MeasurePreservingMap")
            .field("domain", &self.domain)
            .field("codomain", &self.codomain)
            .field("assignment", &pairs)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(labels: &[&str], weights: &[&str]) -> FiniteMeasureSpace {
        FiniteMeasureSpace::parse(labels, weights).unwrap()
    }

    #[test]
    fn collapse_of_fair_coin_is_valid() {
        let p = space(&["a", "b"], &["1/2", "1/2"]);
        let q = space(&["c"], &["1"]);
        let f = MeasurePreservingMap::new(p, q, [("a", "c"), ("b", "c")]).unwrap();
        assert!(!f.is_bijective());
        assert_eq!(f.image_of("b"), Some("c"));
    }

    #[test]
    fn collapse_with_wrong_mass_is_rejected() {
        let p = space(&["a", "b"], &["1/2", "1/2"]);
        let q = space(&["c"], &["1/2"]);
        let err = MeasurePreservingMap::new(p, q, [("a", "c"), ("b", "c")]).unwrap_err();
        assert_eq!(
            err,
            MeasureError::PushforwardMismatch {
                label: "c".into(),
                stated: "1/2".into(),
                pushed: "1".into(),
            }
        );
    }

    #[test]
    fn identity_is_valid_and_bijective() {
        let p = space(&["a", "b", "c"], &["1/4", "0", "3"]);
        let id = MeasurePreservingMap::identity(&p);
        let rebuilt = MeasurePreservingMap::new(
            p.clone(),
            p.clone(),
            p.labels().iter().map(|l| (l.clone(), l.clone())),
        )
        .unwrap();
        assert_eq!(id, rebuilt);
        assert!(id.is_bijective());
    }

    #[test]
    fn relabeling_is_bijective() {
        let p = space(&["a", "b"], &["1/3", "2/3"]);
        let q = space(&["x", "y"], &["1/3", "2/3"]);
        let f = MeasurePreservingMap::new(p, q, [("a", "x"), ("b", "y")]).unwrap();
        assert!(f.is_bijective());
    }

    #[test]
    fn unmapped_and_foreign_targets() {
        let p = space(&["a", "b"], &["1/2", "1/2"]);
        let q = space(&["c"], &["1"]);
        assert_eq!(
            MeasurePreservingMap::new(p.clone(), q.clone(), [("a", "c")]).unwrap_err(),
            MeasureError::UnmappedPoint("b".into())
        );
        assert!(matches!(
            MeasurePreservingMap::new(p.clone(), q.clone(), [("a", "c"), ("b", "z")]).unwrap_err(),
            MeasureError::TargetNotInCodomain { .. }
        ));
        assert_eq!(
            MeasurePreservingMap::new(p, q, [("a", "c"), ("b", "c"), ("q", "c")]).unwrap_err(),
            MeasureError::UnknownSource("q".into())
        );
    }

    #[test]
    fn terminal_maps() {
        let half = space(&["a", "b"], &["1/2", "1/2"]);
        let t = MeasurePreservingMap::terminal(&half);
        assert_eq!(t.codomain(), &FiniteMeasureSpace::point(Weight::one()));

        let one = FiniteMeasureSpace::point(Weight::one());
        let t1 = MeasurePreservingMap::terminal(&one);
        assert!(t1.is_bijective());
        assert_eq!(t1, MeasurePreservingMap::identity(&one));

        let two = space(&["a", "b"], &["1", "1"]);
        let t2 = MeasurePreservingMap::terminal(&two);
        assert_eq!(
            t2.codomain(),
            &FiniteMeasureSpace::point(Weight::from_integer(2))
        );
    }

    #[test]
    fn empty_domain_needs_zero_codomain() {
        let empty = FiniteMeasureSpace::empty();
        let zero = space(&["c"], &["0"]);
        assert!(MeasurePreservingMap::new(empty.clone(), zero, Vec::<(&str, &str)>::new()).is_ok());
        let one = space(&["c"], &["1"]);
        assert!(matches!(
            MeasurePreservingMap::new(empty, one, Vec::<(&str, &str)>::new()).unwrap_err(),
            MeasureError::PushforwardMismatch { .. }
        ));
    }

    #[test]
    fn off_by_one_trillionth_is_rejected() {
        let p = space(&["a", "b"], &["1/2", "1/2"]);
        let q = space(&["c"], &["999999999999/1000000000000"]);
        assert!(matches!(
            MeasurePreservingMap::new(p, q, [("a", "c"), ("b", "c")]).unwrap_err(),
            MeasureError::PushforwardMismatch { .. }
        ));
    }
}
