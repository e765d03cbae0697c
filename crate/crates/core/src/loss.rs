//! Information loss along measure-preserving maps.

use crate::combinators::compose_chain;
use crate::entropy::{tsallis, EntropyOrder};
use crate::error::{CombinatorError, LossError};
use crate::map::MeasurePreservingMap;
use crate::sum::canonical_sum;

/// Entropy differences more negative than this are treated as bugs, not
/// rounding.
pub const NEGATIVE_DUST: f64 = 1e-12;

/// `F(f) = c · (H_α(p) − H_α(q))` for `f : p → q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossFunctional {
    c: f64,
    order: EntropyOrder,
}

impl LossFunctional {
    pub fn new(c: f64, order: EntropyOrder) -> Result<Self, LossError> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(LossError::NegativeConstant(c));
        }
        Ok(LossFunctional { c, order })
    }

    /// `H(p) − H(q)` in nats.
    pub fn shannon() -> Self {
        LossFunctional {
            c: 1.0,
            order: EntropyOrder::shannon(),
        }
    }

    pub fn constant(&self) -> f64 {
        self.c
    }

    pub fn order(&self) -> EntropyOrder {
        self.order
    }

    pub fn loss(&self, map: &MeasurePreservingMap) -> Result<f64, LossError> {
        let before = tsallis(self.order, map.domain()).nats();
        let after = tsallis(self.order, map.codomain()).nats();
        let drop = before - after;
        if drop < -NEGATIVE_DUST {
            return Err(LossError::NegativeLoss(drop));
        }
        Ok(self.c * drop.max(0.0))
    }

    /// `c · Σ_i p_i ln(q_{f(i)} / p_i)`, the conditional entropy of the
    /// domain given the codomain. Points of zero weight contribute nothing.
    /// Only defined for the Shannon order.
    pub fn loss_conditional_form(&self, map: &MeasurePreservingMap) -> Result<f64, LossError> {
        if !self.order.is_one() {
            return Err(LossError::OrderNotOne);
        }
        let codomain = map.codomain().weights();
        let terms = map
            .domain()
            .weights()
            .iter()
            .zip(map.assignment())
            .filter(|(p, _)| !p.is_zero())
            .map(|(p, &j)| {
                let ratio = codomain[j].checked_div(p).expect("p is positive");
                p.to_f64() * ratio.to_f64().ln()
            })
            .collect();
        Ok(self.c * canonical_sum(terms).max(0.0))
    }

    /// Loss at every stage of a chain (in application order) and their sum.
    pub fn pipeline_loss(&self, chain: &[MeasurePreservingMap]) -> Result<PipelineLoss, LossError> {
        for pair in chain.windows(2) {
            if let Some(label) = pair[0].codomain().first_difference(pair[1].domain()) {
                return Err(CombinatorError::NotComposable(label).into());
            }
        }
        let stages = chain
            .iter()
            .map(|m| self.loss(m))
            .collect::<Result<Vec<_>, _>>()?;
        let total = canonical_sum(stages.clone());
        Ok(PipelineLoss { stages, total })
    }

    /// Loss of the composite of a chain, for comparison with the stage sum.
    pub fn composite_loss(&self, chain: &[MeasurePreservingMap]) -> Result<f64, LossError> {
        let composite = compose_chain(chain)?;
        self.loss(&composite)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineLoss {
    pub stages: Vec<f64>,
    pub total: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::FiniteMeasureSpace;
    use std::f64::consts::LN_2;

    fn space(labels: &[&str], weights: &[&str]) -> FiniteMeasureSpace {
        FiniteMeasureSpace::parse(labels, weights).unwrap()
    }

    fn collapse(p: &[&str]) -> MeasurePreservingMap {
        MeasurePreservingMap::new(
            space(&["a", "b"], p),
            space(&["c"], &["1"]),
            [("a", "c"), ("b", "c")],
        )
        .unwrap()
    }

    #[test]
    fn fair_coin_collapse_loses_ln2() {
        let f = LossFunctional::shannon();
        assert!((f.loss(&collapse(&["1/2", "1/2"])).unwrap() - LN_2).abs() < 1e-15);
        assert_eq!(f.loss(&collapse(&["1", "0"])).unwrap(), 0.0);
        let id = MeasurePreservingMap::identity(&space(&["a", "b", "c"], &["1/5", "3/5", "1/5"]));
        assert_eq!(f.loss(&id).unwrap(), 0.0);
    }

    #[test]
    fn conditional_form_examples() {
        let f = LossFunctional::shannon();
        assert!(
            (f.loss_conditional_form(&collapse(&["1/2", "1/2"])).unwrap() - LN_2).abs() < 1e-15
        );
        assert_eq!(
            f.loss_conditional_form(&collapse(&["1", "0"])).unwrap(),
            0.0
        );
        let id = MeasurePreservingMap::identity(&space(&["a", "b"], &["2", "7/3"]));
        assert_eq!(f.loss_conditional_form(&id).unwrap(), 0.0);

        let tsallis2 = LossFunctional::new(1.0, EntropyOrder::new(2.0).unwrap()).unwrap();
        assert_eq!(
            tsallis2.loss_conditional_form(&collapse(&["1/2", "1/2"])),
            Err(LossError::OrderNotOne)
        );
    }

    #[test]
    fn two_stage_pipeline() {
        let g = MeasurePreservingMap::new(
            space(&["a", "b", "c"], &["1/4", "1/4", "1/2"]),
            space(&["x", "y"], &["1/2", "1/2"]),
            [("a", "x"), ("b", "x"), ("c", "y")],
        )
        .unwrap();
        let f = MeasurePreservingMap::terminal(g.codomain());
        let chain = [g, f];
        let result = LossFunctional::shannon().pipeline_loss(&chain).unwrap();
        let h_p = 1.5 * LN_2;
        assert!((result.stages[0] - (h_p - LN_2)).abs() < 1e-15);
        assert!((result.stages[1] - LN_2).abs() < 1e-15);
        assert!((result.total - h_p).abs() < 1e-15);
        let composite = LossFunctional::shannon().composite_loss(&chain).unwrap();
        assert!((composite - result.total).abs() < 1e-12);
    }

    #[test]
    fn pipeline_edge_cases() {
        let p = space(&["a", "b"], &["1/3", "2/3"]);
        let ids = vec![MeasurePreservingMap::identity(&p); 3];
        let result = LossFunctional::shannon().pipeline_loss(&ids).unwrap();
        assert_eq!(result.stages, [0.0, 0.0, 0.0]);

        let single = collapse(&["1/2", "1/2"]);
        let result = LossFunctional::shannon()
            .pipeline_loss(std::slice::from_ref(&single))
            .unwrap();
        assert_eq!(
            result.stages,
            [LossFunctional::shannon().loss(&single).unwrap()]
        );

        let broken = [single.clone(), single];
        assert!(matches!(
            LossFunctional::shannon().pipeline_loss(&broken),
            Err(LossError::Combinator(CombinatorError::NotComposable(_)))
        ));
    }

    #[test]
    fn constant_must_be_nonnegative() {
        assert_eq!(
            LossFunctional::new(-1.0, EntropyOrder::shannon()),
            Err(LossError::NegativeConstant(-1.0))
        );
        assert!(LossFunctional::new(f64::INFINITY, EntropyOrder::shannon()).is_err());
        let f = LossFunctional::new(2.5, EntropyOrder::shannon()).unwrap();
        assert!((f.loss(&collapse(&["1/2", "1/2"])).unwrap() - 2.5 * LN_2).abs() < 1e-15);
    }
}
