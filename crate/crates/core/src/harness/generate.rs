use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::GeneratorConfig;
use crate::map::MeasurePreservingMap;
use crate::space::FiniteMeasureSpace;
use crate::weight::Weight;

/// Which category a generated object lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureKind {
    /// Total mass exactly one.
    Probability,
    /// Any nonnegative measure, weights in `[0, 2]`.
    General,
}

// Roughly one point in eight is given weight zero.
const ZERO_WEIGHT_ODDS: u32 = 8;

/// Random spaces, maps and scalars with exact rational weights whose
/// denominators never exceed the configured bound.
pub struct Generator<'a> {
    config: &'a GeneratorConfig,
    rng: ChaCha8Rng,
}

impl<'a> Generator<'a> {
    /// Generator for the configuration's own seed (trial stream 0).
    pub fn new(config: &'a GeneratorConfig) -> Self {
        Self::for_trial(config, 0)
    }

    pub fn for_trial(config: &'a GeneratorConfig, trial: usize) -> Self {
        Generator {
            config,
            rng: config.rng_for(trial),
        }
    }

    pub(crate) fn from_rng(config: &'a GeneratorConfig, rng: ChaCha8Rng) -> Self {
        Generator { config, rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn size(&mut self) -> usize {
        self.rng.gen_range(1..=self.config.max_points)
    }

    fn denominator(&mut self) -> i64 {
        i64::from(self.rng.gen_range(1..=self.config.denominator_bound))
    }

    fn labels(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    /// A probability space on `x0, x1, …`.
    pub fn prob_space(&mut self) -> FiniteMeasureSpace {
        self.prob_space_labeled("x")
    }

    /// A probability space: one denominator `d` split into integer blocks, so
    /// every weight is a multiple of `1/d`.
    pub fn prob_space_labeled(&mut self, prefix: &str) -> FiniteMeasureSpace {
        let n = self.size();
        let d = self.denominator();
        let mut live: Vec<bool> = (0..n)
            .map(|_| self.rng.gen_range(0..ZERO_WEIGHT_ODDS) != 0)
            .collect();
        if !live.iter().any(|&b| b) {
            let i = self.rng.gen_range(0..n);
            live[i] = true;
        }
        let slots = live.iter().filter(|&&b| b).count();
        let mut cuts: Vec<i64> = (0..slots - 1).map(|_| self.rng.gen_range(0..=d)).collect();
        cuts.push(0);
        cuts.push(d);
        cuts.sort_unstable();
        let mut blocks = cuts.windows(2).map(|w| w[1] - w[0]);
        let weights: Vec<Weight> = live
            .iter()
            .map(|&is_live| {
                let k = if is_live {
                    blocks.next().expect("one block per live point")
                } else {
                    0
                };
                Weight::new(k, d).expect("positive denominator")
            })
            .collect();
        FiniteMeasureSpace::new(Self::labels(prefix, n), weights)
            .expect("generated labels are distinct")
    }

    /// A general finite measure on `x0, x1, …`.
    pub fn space(&mut self) -> FiniteMeasureSpace {
        self.space_labeled("x")
    }

    pub fn space_labeled(&mut self, prefix: &str) -> FiniteMeasureSpace {
        let n = self.size();
        let weights: Vec<Weight> = (0..n)
            .map(|_| {
                if self.rng.gen_range(0..ZERO_WEIGHT_ODDS) == 0 {
                    Weight::zero()
                } else {
                    let d = self.denominator();
                    let k = self.rng.gen_range(1..=2 * d);
                    Weight::new(k, d).expect("positive denominator")
                }
            })
            .collect();
        FiniteMeasureSpace::new(Self::labels(prefix, n), weights)
            .expect("generated labels are distinct")
    }

    pub fn space_of_kind(&mut self, kind: MeasureKind, prefix: &str) -> FiniteMeasureSpace {
        match kind {
            MeasureKind::Probability => self.prob_space_labeled(prefix),
            MeasureKind::General => self.space_labeled(prefix),
        }
    }

    /// A random map out of `domain` onto codomain points `<prefix>0, …`,
    /// whose codomain measure is the exact pushforward.
    pub fn map_from(&mut self, domain: FiniteMeasureSpace, prefix: &str) -> MeasurePreservingMap {
        let m = self.size();
        let assignment = (0..domain.len())
            .map(|_| self.rng.gen_range(0..m))
            .collect();
        MeasurePreservingMap::with_pushforward(domain, Self::labels(prefix, m), assignment)
            .expect("assignment lands in the codomain")
    }

    /// A random map `x* → y*`.
    pub fn map(&mut self, kind: MeasureKind) -> MeasurePreservingMap {
        let domain = self.space_of_kind(kind, "x");
        self.map_from(domain, "y")
    }

    /// A random bijective relabelling of `space` onto `<prefix>0, …`.
    pub fn relabelling(
        &mut self,
        space: &FiniteMeasureSpace,
        prefix: &str,
    ) -> MeasurePreservingMap {
        let n = space.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        MeasurePreservingMap::with_pushforward(space.clone(), Self::labels(prefix, n), perm)
            .expect("permutation lands in the codomain")
    }

    /// λ ∈ [0, 1], hitting both endpoints with probability 1/10 each.
    pub fn unit_scalar(&mut self) -> Weight {
        match self.rng.gen_range(0..10) {
            0 => Weight::zero(),
            1 => Weight::one(),
            _ => {
                let d = self.denominator();
                Weight::new(self.rng.gen_range(0..=d), d).expect("positive denominator")
            }
        }
    }

    /// λ ∈ [0, 4], hitting 0 with probability 1/10.
    pub fn scale_scalar(&mut self) -> Weight {
        if self.rng.gen_range(0..10) == 0 {
            return Weight::zero();
        }
        let d = self.denominator();
        Weight::new(self.rng.gen_range(0..=4 * d), d).expect("positive denominator")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(max_points: usize) -> GeneratorConfig {
        GeneratorConfig::new(max_points, 1000, 100, 7).unwrap()
    }

    #[test]
    fn same_seed_same_objects() {
        let cfg = config(8);
        let mut a = Generator::new(&cfg);
        let mut b = Generator::new(&cfg);
        for _ in 0..50 {
            assert_eq!(a.map(MeasureKind::General), b.map(MeasureKind::General));
            assert_eq!(a.prob_space(), b.prob_space());
            assert_eq!(a.unit_scalar(), b.unit_scalar());
        }
        let mut c = Generator::new(&cfg);
        let other = GeneratorConfig { seed: 8, ..cfg };
        let mut d = Generator::new(&other);
        let same = (0..20).all(|_| c.map(MeasureKind::General) == d.map(MeasureKind::General));
        assert!(!same);
    }

    #[test]
    fn outputs_validate() {
        let cfg = config(8);
        let mut g = Generator::new(&cfg);
        let mut zeros = 0;
        for _ in 0..500 {
            let p = g.prob_space();
            assert!(p.is_probability());
            assert!(p.len() <= 8);
            assert!(p.weights().iter().all(|w| w.denom() <= &1000.into()));
            zeros += p.weights().iter().filter(|w| w.is_zero()).count();
            for kind in [MeasureKind::Probability, MeasureKind::General] {
                let f = g.map(kind);
                let again = MeasurePreservingMap::from_indices(
                    f.domain().clone(),
                    f.codomain().clone(),
                    f.assignment().to_vec(),
                );
                assert_eq!(again.unwrap(), f);
            }
            let lambda = g.unit_scalar();
            assert!(lambda.complement().is_some());
        }
        assert!(zeros > 0, "zero-weight points should occur");
    }

    #[test]
    fn single_point_bound() {
        let cfg = config(1);
        let mut g = Generator::new(&cfg);
        for _ in 0..50 {
            assert_eq!(g.space().len(), 1);
            assert_eq!(g.prob_space().len(), 1);
            let f = g.map(MeasureKind::General);
            assert_eq!((f.domain().len(), f.codomain().len()), (1, 1));
        }
    }

    #[test]
    fn relabelling_is_bijective() {
        let cfg = config(8);
        let mut g = Generator::new(&cfg);
        for _ in 0..50 {
            let p = g.space();
            assert!(g.relabelling(&p, "z").is_bijective());
        }
    }
}
