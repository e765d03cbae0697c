//! Composition, direct sums, scaling and convex combinations of spaces and
//! maps.
//!
//! Direct sums relabel component `k`'s point `x` as `"k.x"`. The n-ary forms
//! are primitive, so `(p ⊕ q) ⊕ r` and `p ⊕ q ⊕ r` differ only by a
//! relabelling, never by weights.

use crate::error::CombinatorError;
use crate::map::MeasurePreservingMap;
use crate::space::FiniteMeasureSpace;
use crate::weight::Weight;

/// Nonnegative exact coefficients summing to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexCoefficients(Vec<Weight>);

impl ConvexCoefficients {
    pub fn new(values: Vec<Weight>) -> Result<Self, CombinatorError> {
        let total: Weight = values.iter().sum();
        if !total.is_one() {
            return Err(CombinatorError::NotConvex(format!(
                "coefficients sum to {total}"
            )));
        }
        Ok(ConvexCoefficients(values))
    }

    /// `(λ, 1 - λ)` for `λ ∈ [0, 1]`.
    pub fn binary(lambda: Weight) -> Result<Self, CombinatorError> {
        let rest = lambda
            .complement()
            .ok_or_else(|| CombinatorError::NotConvex(format!("λ = {lambda} exceeds 1")))?;
        Ok(ConvexCoefficients(vec![lambda, rest]))
    }

    pub fn parse(values: &[&str]) -> Result<Self, CombinatorError> {
        let parsed = values
            .iter()
            .map(|s| {
                s.parse::<Weight>()
                    .map_err(|e| CombinatorError::NotConvex(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(parsed)
    }

    pub fn values(&self) -> &[Weight] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `f ∘ g`: apply `g` first, then `f`.
pub fn compose(
    f: &MeasurePreservingMap,
    g: &MeasurePreservingMap,
) -> Result<MeasurePreservingMap, CombinatorError> {
    if let Some(label) = g.codomain().first_difference(f.domain()) {
        return Err(CombinatorError::NotComposable(label));
    }
    let assignment = g
        .assignment()
        .iter()
        .map(|&j| {
            let mid = &g.codomain().labels()[j];
            let k = f.domain().index_of(mid).expect("spaces are equal");
            f.assignment()[k]
        })
        .collect();
    Ok(MeasurePreservingMap::from_parts_unchecked(
        g.domain().clone(),
        f.codomain().clone(),
        assignment,
    ))
}

/// Composes a chain given in application order: `chain[0]` runs first.
pub fn compose_chain(
    chain: &[MeasurePreservingMap],
) -> Result<MeasurePreservingMap, CombinatorError> {
    let (first, rest) = chain
        .split_first()
        .ok_or_else(|| CombinatorError::NotComposable("empty chain".into()))?;
    rest.iter()
        .try_fold(first.clone(), |acc, next| compose(next, &acc))
}

fn prefixed(k: usize, label: &str) -> String {
    format!("{k}.{label}")
}

/// Disjoint union; component `k`'s points are relabelled `"k.<label>"`.
pub fn direct_sum_spaces(spaces: &[FiniteMeasureSpace]) -> FiniteMeasureSpace {
    let mut labels = Vec::new();
    let mut weights = Vec::new();
    for (k, space) in spaces.iter().enumerate() {
        for (label, w) in space.iter() {
            labels.push(prefixed(k, label));
            weights.push(w.clone());
        }
    }
    FiniteMeasureSpace::new(labels, weights).expect("prefixed labels are distinct")
}

/// The map on disjoint unions that restricts to `maps[k]` on component `k`.
pub fn direct_sum_maps(maps: &[MeasurePreservingMap]) -> MeasurePreservingMap {
    let domain = direct_sum_spaces(&maps.iter().map(|m| m.domain().clone()).collect::<Vec<_>>());
    let codomain = direct_sum_spaces(
        &maps
            .iter()
            .map(|m| m.codomain().clone())
            .collect::<Vec<_>>(),
    );
    let mut assignment = Vec::with_capacity(domain.len());
    let mut offset = 0;
    for m in maps {
        assignment.extend(m.assignment().iter().map(|&j| j + offset));
        offset += m.codomain().len();
    }
    MeasurePreservingMap::from_parts_unchecked(domain, codomain, assignment)
}

pub fn scale_space(lambda: &Weight, space: &FiniteMeasureSpace) -> FiniteMeasureSpace {
    space.with_weights(space.weights().iter().map(|w| lambda * w).collect())
}

/// `λf`: same underlying function between the scaled spaces.
pub fn scale_map(lambda: &Weight, map: &MeasurePreservingMap) -> MeasurePreservingMap {
    MeasurePreservingMap::from_parts_unchecked(
        scale_space(lambda, map.domain()),
        scale_space(lambda, map.codomain()),
        map.assignment().to_vec(),
    )
}

/// `⊕ λ_k p(k)`.
pub fn convex_combination_spaces(
    coeffs: &ConvexCoefficients,
    spaces: &[FiniteMeasureSpace],
) -> Result<FiniteMeasureSpace, CombinatorError> {
    check_lengths(coeffs, spaces.len())?;
    let scaled: Vec<_> = coeffs
        .values()
        .iter()
        .zip(spaces)
        .map(|(l, p)| scale_space(l, p))
        .collect();
    Ok(direct_sum_spaces(&scaled))
}

/// `⊕ λ_k f(k)`.
pub fn convex_combination_maps(
    coeffs: &ConvexCoefficients,
    maps: &[MeasurePreservingMap],
) -> Result<MeasurePreservingMap, CombinatorError> {
    check_lengths(coeffs, maps.len())?;
    let scaled: Vec<_> = coeffs
        .values()
        .iter()
        .zip(maps)
        .map(|(l, f)| scale_map(l, f))
        .collect();
    Ok(direct_sum_maps(&scaled))
}

fn check_lengths(coeffs: &ConvexCoefficients, items: usize) -> Result<(), CombinatorError> {
    if coeffs.len() != items {
        return Err(CombinatorError::CoefficientMismatch {
            coefficients: coeffs.len(),
            items,
        });
    }
    Ok(())
}

/// Writes a probability space as `⊕ p_i (1)`: its weights as coefficients and
/// one copy of the one-point probability space per point, in stored order.
pub fn decompose_to_points(
    space: &FiniteMeasureSpace,
) -> Result<(ConvexCoefficients, Vec<FiniteMeasureSpace>), CombinatorError> {
    let mass = space.total_mass();
    if !mass.is_one() {
        return Err(CombinatorError::NotProbability(mass.to_string()));
    }
    let coeffs = ConvexCoefficients(space.weights().to_vec());
    let points = vec![FiniteMeasureSpace::point(Weight::one()); space.len()];
    Ok((coeffs, points))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(labels: &[&str], weights: &[&str]) -> FiniteMeasureSpace {
        FiniteMeasureSpace::parse(labels, weights).unwrap()
    }

    fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    fn coarsen() -> MeasurePreservingMap {
        MeasurePreservingMap::new(
            space(&["a", "b", "c"], &["1/4", "1/4", "1/2"]),
            space(&["x", "y"], &["1/2", "1/2"]),
            [("a", "x"), ("b", "x"), ("c", "y")],
        )
        .unwrap()
    }

    #[test]
    fn compose_two_stage_example() {
        let g = coarsen();
        let f = MeasurePreservingMap::terminal(g.codomain());
        let h = compose(&f, &g).unwrap();
        assert_eq!(h.codomain(), &FiniteMeasureSpace::point(Weight::one()));
        assert!(h.pairs().all(|(_, t)| t == "*"));
        assert_eq!(h, MeasurePreservingMap::terminal(g.domain()));
    }

    #[test]
    fn identity_laws() {
        let g = coarsen();
        assert_eq!(
            compose(&MeasurePreservingMap::identity(g.codomain()), &g).unwrap(),
            g
        );
        assert_eq!(
            compose(&g, &MeasurePreservingMap::identity(g.domain())).unwrap(),
            g
        );
    }

    #[test]
    fn mismatched_maps_do_not_compose() {
        let g = coarsen();
        let f = MeasurePreservingMap::identity(&space(&["x", "y"], &["1/3", "2/3"]));
        assert_eq!(
            compose(&f, &g).unwrap_err(),
            CombinatorError::NotComposable("x".into())
        );
    }

    #[test]
    fn direct_sum_relabels_components() {
        let s = direct_sum_spaces(&[
            space(&["a", "b"], &["1/2", "1/2"]),
            FiniteMeasureSpace::point(Weight::one()),
        ]);
        assert_eq!(s.labels(), ["0.a", "0.b", "1.*"]);
        assert_eq!(s.weights(), [w("1/2"), w("1/2"), w("1")]);

        let p = space(&["a", "b"], &["1", "1"]);
        assert_eq!(
            direct_sum_spaces(&[p.clone(), p.clone()]).total_mass(),
            w("4")
        );

        let with_empty = direct_sum_spaces(&[FiniteMeasureSpace::empty(), p]);
        assert_eq!(with_empty.labels(), ["1.a", "1.b"]);
    }

    #[test]
    fn direct_sum_of_terminals_lands_in_mass_pair() {
        let p = space(&["a", "b"], &["1/2", "1/2"]);
        let q = space(&["a", "b", "c"], &["1", "2", "0"]);
        let sum = direct_sum_maps(&[
            MeasurePreservingMap::terminal(&p),
            MeasurePreservingMap::terminal(&q),
        ]);
        assert_eq!(sum.codomain(), &space(&["0.*", "1.*"], &["1", "3"]));
    }

    #[test]
    fn direct_sum_restricts_to_components() {
        let f = coarsen();
        let other = space(&["u"], &["2"]);
        let sum = direct_sum_maps(&[f.clone(), MeasurePreservingMap::identity(&other)]);
        for (from, to) in f.pairs() {
            assert_eq!(
                sum.image_of(&format!("0.{from}")),
                Some(format!("0.{to}").as_str())
            );
        }
        assert_eq!(sum.image_of("1.u"), Some("1.u"));

        let single = direct_sum_maps(std::slice::from_ref(&f));
        assert_eq!(single.domain().labels(), ["0.a", "0.b", "0.c"]);
    }

    #[test]
    fn scaling() {
        let p = space(&["a", "b"], &["1/2", "1/2"]);
        assert_eq!(scale_space(&w("2"), &p), space(&["a", "b"], &["1", "1"]));
        let f = coarsen();
        assert_eq!(scale_map(&Weight::one(), &f), f);
        let zero = scale_map(&Weight::zero(), &f);
        assert!(zero.domain().total_mass().is_zero());
        assert!(zero.codomain().total_mass().is_zero());
    }

    #[test]
    fn convex_combination_examples() {
        let p = space(&["a", "b"], &["1/2", "1/2"]);
        let one = FiniteMeasureSpace::point(Weight::one());
        let half = ConvexCoefficients::binary(w("1/2")).unwrap();
        let mix = convex_combination_spaces(&half, &[p.clone(), one.clone()]).unwrap();
        assert_eq!(mix.weights(), [w("1/4"), w("1/4"), w("1/2")]);
        assert!(mix.is_probability());

        let degenerate = ConvexCoefficients::parse(&["1", "0"]).unwrap();
        let mix = convex_combination_spaces(&degenerate, &[p.clone(), p.clone()]).unwrap();
        assert_eq!(mix.len(), 4);
        assert!(mix.weights()[2..].iter().all(Weight::is_zero));

        assert!(matches!(
            ConvexCoefficients::parse(&["1/2", "1/3"]),
            Err(CombinatorError::NotConvex(_))
        ));
        assert!(matches!(
            convex_combination_spaces(&half, &[p]),
            Err(CombinatorError::CoefficientMismatch {
                coefficients: 2,
                items: 1
            })
        ));
    }

    #[test]
    fn point_decomposition_reassembles() {
        for (labels, weights) in [
            (vec!["a", "b"], vec!["1/2", "1/2"]),
            (vec!["a"], vec!["1"]),
            (vec!["a", "b"], vec!["1/3", "2/3"]),
        ] {
            let p = space(&labels, &weights);
            let (coeffs, points) = decompose_to_points(&p).unwrap();
            assert_eq!(coeffs.values(), p.weights());
            assert!(points
                .iter()
                .all(|q| q == &FiniteMeasureSpace::point(Weight::one())));
            let rebuilt = convex_combination_spaces(&coeffs, &points).unwrap();
            let relabel = MeasurePreservingMap::from_indices(
                rebuilt.clone(),
                p.clone(),
                (0..p.len()).collect(),
            )
            .unwrap();
            assert!(relabel.is_bijective());
        }
        assert!(matches!(
            decompose_to_points(&space(&["a"], &["2"])),
            Err(CombinatorError::NotProbability(_))
        ));
    }
}
