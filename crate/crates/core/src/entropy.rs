//! Shannon and Tsallis entropy of finite measures, in nats.
//!
//! For a measure `p` with total mass `M = Σ p_i`:
//!
//! | order | entropy |
//! |---|---|
//! | α = 1 (Shannon) | `M ln M − Σ p_i ln p_i` |
//! | α ≠ 1 (Tsallis) | `(M^α − Σ p_i^α) / (α − 1)` |
//!
//! On probability measures these reduce to `−Σ p_i ln p_i` and
//! `(1 − Σ p_i^α) / (α − 1)`. Both are homogeneous of degree α in the
//! measure. Zero-weight points contribute nothing and a zero-mass measure has
//! entropy 0.
//!
//! Terms are summed in order of increasing magnitude with compensation, so
//! the result depends only on the multiset of weights: relabelling points
//! never changes a computed entropy, not even in the last bit.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::EntropyError;
use crate::space::FiniteMeasureSpace;
use crate::sum::{canonical_sum, CompensatedSum};
use crate::weight::Weight;

/// Largest common denominator accepted by [`faddeev_reconstruct`].
pub const MAX_RECONSTRUCTION_DENOMINATOR: u64 = 10_000_000;

/// Order α of a Tsallis entropy. Order 1 is Shannon entropy and is selected
/// exactly: either via [`EntropyOrder::shannon`], an exact `1` in text, or the
/// float `1.0` itself. Orders merely close to 1 use the Tsallis formula.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyOrder {
    alpha: f64,
    is_one: bool,
}

impl EntropyOrder {
    pub fn shannon() -> Self {
        EntropyOrder {
            alpha: 1.0,
            is_one: true,
        }
    }

    pub fn new(alpha: f64) -> Result<Self, EntropyError> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(EntropyError::InvalidOrder(alpha.to_string()));
        }
        Ok(EntropyOrder {
            alpha,
            is_one: alpha == 1.0,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_one(&self) -> bool {
        self.is_one
    }

    /// `λ^α`, with the α = 1 case returning `λ` untouched.
    pub fn power(&self, lambda: f64) -> f64 {
        if self.is_one {
            lambda
        } else if lambda == 0.0 {
            0.0
        } else {
            lambda.powf(self.alpha)
        }
    }
}

impl Default for EntropyOrder {
    fn default() -> Self {
        Self::shannon()
    }
}

impl fmt::Display for EntropyOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one {
            f.write_str("1")
        } else {
            write!(f, "{}", self.alpha)
        }
    }
}

impl FromStr for EntropyOrder {
    type Err = EntropyError;

    /// Reads `"2"`, `"1/2"`, `"0.5"` exactly; the order is Shannon iff the
    /// text denotes exactly one.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let exact: Weight = s
            .parse()
            .map_err(|_| EntropyError::InvalidOrder(s.to_string()))?;
        if exact.is_zero() {
            return Err(EntropyError::InvalidOrder(s.to_string()));
        }
        if exact.is_one() {
            return Ok(Self::shannon());
        }
        let alpha = exact.to_f64();
        if alpha == 1.0 {
            // not exactly one, but indistinguishable from it as a double
            return Err(EntropyError::InvalidOrder(s.to_string()));
        }
        Self::new(alpha)
    }
}

/// An entropy in nats.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct EntropyValue(f64);

impl EntropyValue {
    pub fn nats(self) -> f64 {
        self.0
    }

    /// Display conversion for Shannon entropy.
    pub fn bits(self) -> f64 {
        self.0 / std::f64::consts::LN_2
    }
}

impl From<EntropyValue> for f64 {
    fn from(v: EntropyValue) -> f64 {
        v.0
    }
}

fn nonnegative(x: f64) -> EntropyValue {
    EntropyValue(if x > 0.0 { x } else { 0.0 })
}

/// `−x ln x` with `0 ln 0 = 0`.
fn neg_x_ln_x(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.ln()
    } else {
        0.0
    }
}

/// Shannon entropy `‖p‖ ln ‖p‖ − Σ p_i ln p_i`.
pub fn shannon(space: &FiniteMeasureSpace) -> EntropyValue {
    let mass = space.total_mass();
    if mass.is_zero() {
        return EntropyValue(0.0);
    }
    let mut terms: Vec<f64> = space
        .weights()
        .iter()
        .filter(|w| !w.is_zero())
        .map(|w| neg_x_ln_x(w.to_f64()))
        .collect();
    if !mass.is_one() {
        terms.push(-neg_x_ln_x(mass.to_f64()));
    }
    nonnegative(canonical_sum(terms))
}

/// Tsallis entropy of order α; Shannon entropy when the order is 1.
pub fn tsallis(order: EntropyOrder, space: &FiniteMeasureSpace) -> EntropyValue {
    if order.is_one() {
        return shannon(space);
    }
    let mass = space.total_mass();
    if mass.is_zero() {
        return EntropyValue(0.0);
    }
    let alpha = order.alpha();
    let mut terms: Vec<f64> = space
        .weights()
        .iter()
        .filter(|w| !w.is_zero())
        .map(|w| -w.to_f64().powf(alpha))
        .collect();
    terms.push(if mass.is_one() {
        1.0
    } else {
        mass.to_f64().powf(alpha)
    });
    nonnegative(canonical_sum(terms) / (alpha - 1.0))
}

/// Entropy of the uniform probability measure on `n` points.
pub fn phi(order: EntropyOrder, n: u64) -> Result<EntropyValue, EntropyError> {
    if n == 0 {
        return Err(EntropyError::ZeroPoints);
    }
    let nf = n as f64;
    let point = 1.0 / nf;
    let value = if order.is_one() {
        nf * neg_x_ln_x(point)
    } else {
        (1.0 - nf * point.powf(order.alpha())) / (order.alpha() - 1.0)
    };
    Ok(nonnegative(value))
}

/// `φ(n+1) − φ(n)` for `n = 1..=upto`. Printed as a diagnostic only; a
/// finite prefix says little about the limit.
pub fn phi_increments(order: EntropyOrder, upto: u64) -> Vec<(u64, f64)> {
    (1..=upto)
        .map(|n| {
            let step = phi(order, n + 1).expect("n + 1 >= 1").nats()
                - phi(order, n).expect("n >= 1").nats();
            (n, step)
        })
        .collect()
}

/// Recovers the Shannon entropy of a rational probability measure from the
/// uniform-measure values `φ` alone.
///
/// Writing `p_i = k_i / N` over the common denominator `N`, the uniform
/// measure on `N` points grouped into blocks of sizes `k_i` gives
/// `φ(N) = H(p) + Σ p_i φ(k_i)`, so `H(p) = φ(N) − Σ p_i φ(k_i)`.
pub fn faddeev_reconstruct(space: &FiniteMeasureSpace) -> Result<EntropyValue, EntropyError> {
    let mass = space.total_mass();
    if !mass.is_one() {
        return Err(EntropyError::NotProbability(mass.to_string()));
    }
    let common = space
        .weights()
        .iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let n = common
        .to_u64()
        .filter(|&n| n <= MAX_RECONSTRUCTION_DENOMINATOR)
        .ok_or_else(|| EntropyError::OversizedDenominator(common.to_string()))?;
    let order = EntropyOrder::shannon();
    let mut total = CompensatedSum::new();
    total += phi(order, n)?.nats();
    for w in space.weights().iter().filter(|w| !w.is_zero()) {
        let k = (w.numer() * (&common / w.denom()))
            .to_u64()
            .expect("block size is at most N");
        total += -(k as f64 / n as f64) * phi(order, k)?.nats();
    }
    Ok(nonnegative(total.value()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn space(weights: &[&str]) -> FiniteMeasureSpace {
        let labels: Vec<String> = (0..weights.len()).map(|i| format!("p{i}")).collect();
        let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
        FiniteMeasureSpace::parse(&labels, weights).unwrap()
    }

    fn order(s: &str) -> EntropyOrder {
        s.parse().unwrap()
    }

    #[test]
    fn phi_increments_shrink() {
        let steps = phi_increments(EntropyOrder::shannon(), 1000);
        assert_eq!(steps.len(), 1000);
        assert!((steps[0].1 - LN_2).abs() < 1e-15);
        assert!(steps[999].1 < 1.1e-3);
    }

    #[test]
    fn order_parsing_is_exact() {
        assert!(order("1").is_one());
        assert!(order("2/2").is_one());
        assert!(order("1.000").is_one());
        assert!("1.0000000000000000001".parse::<EntropyOrder>().is_err());
        assert!(!order("1.000001").is_one());
        assert_eq!(order("1/2").alpha(), 0.5);
        assert!("0".parse::<EntropyOrder>().is_err());
        assert!("-2".parse::<EntropyOrder>().is_err());
        assert!(EntropyOrder::new(f64::NAN).is_err());
        assert!(EntropyOrder::new(1.0).unwrap().is_one());
        assert!(!EntropyOrder::new(1.0 + 1e-6).unwrap().is_one());
    }

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon(&space(&["1/2", "1/2"])).nats(), LN_2);
        assert_eq!(shannon(&space(&["1", "0"])).nats(), 0.0);
        // ‖p‖ H(p̄) for p = (1, 1)
        let h = shannon(&space(&["1", "1"])).nats();
        assert!((h - 2.0 * LN_2).abs() < 1e-15);
        assert!((h - 1.386_294_4).abs() < 1e-7);
        assert_eq!(shannon(&space(&["0", "0"])).nats(), 0.0);
        assert_eq!(shannon(&FiniteMeasureSpace::empty()).nats(), 0.0);
    }

    #[test]
    fn tsallis_examples() {
        assert!((tsallis(order("2"), &space(&["1/2", "1/2"])).nats() - 0.5).abs() < 1e-15);
        assert!((tsallis(order("2"), &space(&["1", "1"])).nats() - 2.0).abs() < 1e-15);
        let p = space(&["1/3", "1/6", "1/2", "0"]);
        assert_eq!(tsallis(order("1"), &p), shannon(&p));
        assert_eq!(tsallis(order("3"), &space(&["0", "0"])).nats(), 0.0);
    }

    #[test]
    fn phi_examples() {
        let one = EntropyOrder::shannon();
        assert!((phi(one, 2).unwrap().nats() - LN_2).abs() < 1e-15);
        let sum = phi(one, 2).unwrap().nats() + phi(one, 3).unwrap().nats();
        assert!((phi(one, 6).unwrap().nats() - sum).abs() < 1e-12);
        assert!((phi(order("2"), 2).unwrap().nats() - 0.5).abs() < 1e-15);
        assert_eq!(phi(one, 1).unwrap().nats(), 0.0);
        assert_eq!(phi(one, 0), Err(EntropyError::ZeroPoints));
    }

    #[test]
    fn reconstruction_examples() {
        let h = faddeev_reconstruct(&space(&["1/2", "1/2"])).unwrap().nats();
        assert!((h - LN_2).abs() < 1e-15);
        let h = faddeev_reconstruct(&space(&["1/3", "2/3"])).unwrap().nats();
        let expected = 3f64.ln() - (2.0 / 3.0) * LN_2;
        assert!((h - expected).abs() < 1e-15);
        assert!((h - 0.636_514_2).abs() < 1e-7);
        assert_eq!(faddeev_reconstruct(&space(&["1"])).unwrap().nats(), 0.0);
        assert!(
            (faddeev_reconstruct(&space(&["1/4", "0", "3/4"]))
                .unwrap()
                .nats()
                - shannon(&space(&["1/4", "3/4"])).nats())
            .abs()
                < 1e-15
        );
    }

    #[test]
    fn reconstruction_errors() {
        assert!(matches!(
            faddeev_reconstruct(&space(&["1/2"])),
            Err(EntropyError::NotProbability(_))
        ));
        assert!(matches!(
            faddeev_reconstruct(&space(&["1/9999991", "9999990/9999991", "0"])).and(
                faddeev_reconstruct(&space(&["1/10000019", "10000018/10000019"]))
            ),
            Err(EntropyError::OversizedDenominator(_))
        ));
    }

    #[test]
    fn relabelling_is_bit_exact() {
        let p = space(&["1/7", "2/7", "3/14", "5/14", "0"]);
        let q = space(&["0", "5/14", "2/7", "3/14", "1/7"]);
        assert_eq!(shannon(&p).nats().to_bits(), shannon(&q).nats().to_bits());
        let a = order("5/2");
        assert_eq!(
            tsallis(a, &p).nats().to_bits(),
            tsallis(a, &q).nats().to_bits()
        );
    }

    #[test]
    fn bits_display_conversion() {
        let h = shannon(&space(&["1/4", "1/4", "1/4", "1/4"]));
        assert!((h.bits() - 2.0).abs() < 1e-15);
    }
}
