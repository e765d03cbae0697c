//! Compensated floating-point summation.

use std::ops::AddAssign;

/// Neumaier's variant of Kahan summation: tracks the rounding error of each
/// addition, including when the addend is larger than the running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    err: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.err += (self.sum - t) + x;
        } else {
            self.err += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.err
    }
}

impl AddAssign<f64> for CompensatedSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Sums terms in order of increasing magnitude with compensation. The result
/// depends only on the multiset of terms, not on their order.
pub fn canonical_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(|a, b| a.abs().total_cmp(&b.abs()).then(a.total_cmp(b)));
    terms.into_iter().collect::<CompensatedSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_lost_by_naive_sum() {
        let terms = [1.0, 1e100, 1.0, -1e100];
        let naive: f64 = terms.iter().sum();
        assert_eq!(naive, 0.0);
        assert_eq!(
            terms.iter().copied().collect::<CompensatedSum>().value(),
            2.0
        );
    }

    #[test]
    fn canonical_sum_ignores_order() {
        let a = vec![0.1, 0.2, 0.3, -0.6, 1e-17, 0.7];
        let mut b = a.clone();
        b.reverse();
        assert_eq!(canonical_sum(a).to_bits(), canonical_sum(b).to_bits());
    }

    #[test]
    fn many_tenths() {
        let s: CompensatedSum = std::iter::repeat_n(0.1, 10_000).collect();
        assert!((s.value() - 1000.0).abs() < 1e-12);
    }
}
