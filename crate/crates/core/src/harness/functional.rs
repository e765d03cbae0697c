use crate::entropy::{tsallis, EntropyOrder};
use crate::loss::LossFunctional;
use crate::map::MeasurePreservingMap;

/// Anything that assigns a number to a measure-preserving map.
pub trait MapFunctional: Sync {
    fn name(&self) -> String;

    /// `NaN` signals an evaluation failure; checks count it as a violation.
    fn evaluate(&self, map: &MeasurePreservingMap) -> f64;
}

impl MapFunctional for LossFunctional {
    fn name(&self) -> String {
        format!("loss(c={}, α={})", self.constant(), self.order())
    }

    fn evaluate(&self, map: &MeasurePreservingMap) -> f64 {
        self.loss(map).unwrap_or(f64::NAN)
    }
}

impl<T: MapFunctional + ?Sized> MapFunctional for &T {
    fn name(&self) -> String {
        (**self).name()
    }

    fn evaluate(&self, map: &MeasurePreservingMap) -> f64 {
        (**self).evaluate(map)
    }
}

/// The square of a loss; breaks additivity under composition.
#[derive(Clone, Copy, Debug)]
pub struct SquaredLoss(pub LossFunctional);

impl MapFunctional for SquaredLoss {
    fn name(&self) -> String {
        format!("squared {}", self.0.name())
    }

    fn evaluate(&self, map: &MeasurePreservingMap) -> f64 {
        self.0.evaluate(map).powi(2)
    }
}

/// `1` when the entropy of the domain exceeds a threshold, else `0`.
/// Discontinuous wherever the domain entropy equals the threshold.
#[derive(Clone, Copy, Debug)]
pub struct EntropyThreshold {
    pub order: EntropyOrder,
    pub threshold: f64,
}

impl MapFunctional for EntropyThreshold {
    fn name(&self) -> String {
        format!("indicator(H_{}(p) > {})", self.order, self.threshold)
    }

    fn evaluate(&self, map: &MeasurePreservingMap) -> f64 {
        if tsallis(self.order, map.domain()).nats() > self.threshold {
            1.0
        } else {
            0.0
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroFunctional;

impl MapFunctional for ZeroFunctional {
    fn name(&self) -> String {
        "zero".into()
    }

    fn evaluate(&self, _: &MeasurePreservingMap) -> f64 {
        0.0
    }
}

/// Wraps a closure.
pub struct FnFunctional<F> {
    name: String,
    f: F,
}

impl<F> FnFunctional<F>
where
    F: Fn(&MeasurePreservingMap) -> f64 + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnFunctional {
            name: name.into(),
            f,
        }
    }
}

impl<F> MapFunctional for FnFunctional<F>
where
    F: Fn(&MeasurePreservingMap) -> f64 + Sync,
{
    fn name(&self) -> String {
        self.name.clone()
    }

    fn evaluate(&self, map: &MeasurePreservingMap) -> f64 {
        (self.f)(map)
    }
}
