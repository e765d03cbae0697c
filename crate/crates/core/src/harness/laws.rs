use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::generate::{Generator, MeasureKind};
use super::{
    run_trials, GeneratorConfig, LawReport, MapFunctional, Trial, ABSOLUTE_TOLERANCE,
    PROBE_TOLERANCE, RELATIVE_TOLERANCE,
};
use crate::combinators::{
    compose, convex_combination_maps, convex_combination_spaces, direct_sum_maps, scale_map,
    ConvexCoefficients,
};
use crate::entropy::{faddeev_reconstruct, phi, shannon, tsallis, EntropyOrder};
use crate::format::Document;
use crate::loss::LossFunctional;
use crate::map::MeasurePreservingMap;
use crate::space::FiniteMeasureSpace;
use crate::sum::canonical_sum;
use crate::weight::Weight;

/// Perturbation sizes `n` for the continuity check: `p(n) = (1 − 1/n) p + (1/n) u`.
pub const CONTINUITY_SCHEDULE: [u64; 4] = [100, 1_000, 10_000, 1_000_000];
/// Largest deviation accepted at the last step of the schedule.
pub const CONTINUITY_LIMIT: f64 = 1e-4;
/// Each step may exceed the previous deviation by this factor (plus the
/// absolute tolerance) and still count as decreasing.
pub const CONTINUITY_SLACK: f64 = 1.1;

fn generator<'a>(config: &'a GeneratorConfig, rng: &mut ChaCha8Rng) -> Generator<'a> {
    Generator::from_rng(config, rng.clone())
}

fn mixed_tolerance(lhs: f64, rhs: f64) -> f64 {
    ABSOLUTE_TOLERANCE.max(RELATIVE_TOLERANCE * lhs.abs().max(rhs.abs()))
}

fn deviation(lhs: f64, rhs: f64) -> f64 {
    let d = (lhs - rhs).abs();
    if d.is_nan() {
        f64::INFINITY
    } else {
        d
    }
}

fn witness(want: bool, build: impl FnOnce(&mut Document) -> String) -> Option<String> {
    want.then(|| {
        let mut doc = Document::new();
        let header = build(&mut doc);
        format!("{header}{}", doc.to_canonical_string())
    })
}

/// `F(f ∘ g) = F(f) + F(g)` on composable probability-space maps.
pub fn check_functoriality(functional: &dyn MapFunctional, config: &GeneratorConfig) -> LawReport {
    run_trials(
        format!("functoriality [{}]", functional.name()),
        config.trials,
        ABSOLUTE_TOLERANCE,
        None,
        config,
        |rng, _, want| {
            let mut gen = generator(config, rng);
            let g = gen.map(MeasureKind::Probability);
            let f = gen.map_from(g.codomain().clone(), "z");
            let fg = compose(&f, &g).expect("generated maps compose");
            let lhs = functional.evaluate(&fg);
            let rhs = functional.evaluate(&f) + functional.evaluate(&g);
            Trial {
                deviation: deviation(lhs, rhs),
                allowed: ABSOLUTE_TOLERANCE,
                witness: witness(want, |doc| {
                    doc.push_space("p", g.domain())
                        .push_space("q", g.codomain())
                        .push_space("r", f.codomain())
                        .push_map("g", "p", "q", &g)
                        .push_map("f", "q", "r", &f);
                    format!("# F(f∘g) = {lhs:e}, F(f) + F(g) = {rhs:e}\n")
                }),
            }
        },
    )
}

/// `F(λf ⊕ (1−λ)g) = λ^α F(f) + (1−λ)^α F(g)` on probability-space maps,
/// with α taken from `exponent`.
pub fn check_convex_linearity(
    functional: &dyn MapFunctional,
    exponent: EntropyOrder,
    config: &GeneratorConfig,
) -> LawReport {
    run_trials(
        format!("convex-linearity^{} [{}]", exponent, functional.name()),
        config.trials,
        ABSOLUTE_TOLERANCE,
        None,
        config,
        |rng, _, want| {
            let mut gen = generator(config, rng);
            let f = gen.map(MeasureKind::Probability);
            let g = gen.map(MeasureKind::Probability);
            let lambda = gen.unit_scalar();
            let coeffs = ConvexCoefficients::binary(lambda.clone()).expect("λ ∈ [0, 1]");
            let mix = convex_combination_maps(&coeffs, &[f.clone(), g.clone()])
                .expect("two coefficients, two maps");
            let l = lambda.to_f64();
            let rest = coeffs.values()[1].to_f64();
            let lhs = functional.evaluate(&mix);
            let rhs = exponent.power(l) * functional.evaluate(&f)
                + exponent.power(rest) * functional.evaluate(&g);
            Trial {
                deviation: deviation(lhs, rhs),
                allowed: ABSOLUTE_TOLERANCE,
                witness: witness(want, |doc| {
                    doc.push_map_with_spaces("f", &f)
                        .push_map_with_spaces("g", &g);
                    format!("# λ = {lambda}; F(λf ⊕ (1−λ)g) = {lhs:e}, expected {rhs:e}\n")
                }),
            }
        },
    )
}

/// `F(f ⊕ g) = F(f) + F(g)` on general finite-measure maps.
pub fn check_additivity(functional: &dyn MapFunctional, config: &GeneratorConfig) -> LawReport {
    run_trials(
        format!("additivity [{}]", functional.name()),
        config.trials,
        ABSOLUTE_TOLERANCE,
        Some(RELATIVE_TOLERANCE),
        config,
        |rng, _, want| {
            let mut gen = generator(config, rng);
            let f = gen.map(MeasureKind::General);
            let g = gen.map(MeasureKind::General);
            let sum = direct_sum_maps(&[f.clone(), g.clone()]);
            let lhs = functional.evaluate(&sum);
            let rhs = functional.evaluate(&f) + functional.evaluate(&g);
            Trial {
                deviation: deviation(lhs, rhs),
                allowed: mixed_tolerance(lhs, rhs),
                witness: witness(want, |doc| {
                    doc.push_map_with_spaces("f", &f)
                        .push_map_with_spaces("g", &g);
                    format!("# F(f ⊕ g) = {lhs:e}, F(f) + F(g) = {rhs:e}\n")
                }),
            }
        },
    )
}

/// `F(λf) = λ^α F(f)` for λ ∈ [0, 4] on general finite-measure maps.
pub fn check_homogeneity(
    functional: &dyn MapFunctional,
    exponent: EntropyOrder,
    config: &GeneratorConfig,
) -> LawReport {
    run_trials(
        format!("homogeneity^{} [{}]", exponent, functional.name()),
        config.trials,
        ABSOLUTE_TOLERANCE,
        Some(RELATIVE_TOLERANCE),
        config,
        |rng, _, want| {
            let mut gen = generator(config, rng);
            let f = gen.map(MeasureKind::General);
            let lambda = gen.scale_scalar();
            let scaled = scale_map(&lambda, &f);
            let lhs = functional.evaluate(&scaled);
            let rhs = exponent.power(lambda.to_f64()) * functional.evaluate(&f);
            Trial {
                deviation: deviation(lhs, rhs),
                allowed: mixed_tolerance(lhs, rhs),
                witness: witness(want, |doc| {
                    doc.push_map_with_spaces("f", &f);
                    format!("# λ = {lambda}; F(λf) = {lhs:e}, expected {rhs:e}\n")
                }),
            }
        },
    )
}

/// `H_α(⊕ p_i q(i)) = H_α(p) + Σ p_i^α H_α(q(i))` for probability spaces.
pub fn check_strong_additivity(order: EntropyOrder, config: &GeneratorConfig) -> LawReport {
    run_trials(
        format!("strong-additivity (α={order})"),
        config.trials,
        ABSOLUTE_TOLERANCE,
        None,
        config,
        |rng, _, want| {
            let mut gen = generator(config, rng);
            let p = gen.prob_space_labeled("i");
            let blocks: Vec<FiniteMeasureSpace> = (0..p.len()).map(|_| gen.prob_space()).collect();
            let coeffs = ConvexCoefficients::new(p.weights().to_vec()).expect("p is a probability");
            let mixed = convex_combination_spaces(&coeffs, &blocks).expect("one block per point");
            let lhs = tsallis(order, &mixed).nats();
            let mut terms = vec![tsallis(order, &p).nats()];
            terms.extend(
                p.weights()
                    .iter()
                    .zip(&blocks)
                    .map(|(w, q)| order.power(w.to_f64()) * tsallis(order, q).nats()),
            );
            let rhs = canonical_sum(terms);
            Trial {
                deviation: deviation(lhs, rhs),
                allowed: ABSOLUTE_TOLERANCE,
                witness: witness(want, |doc| {
                    doc.push_space("p", &p);
                    for (i, q) in blocks.iter().enumerate() {
                        doc.push_space(&format!("q{i}"), q);
                    }
                    format!("# lhs = {lhs:e}, rhs = {rhs:e}\n")
                }),
            }
        },
    )
}

/// The grouping rule `H_α((t p_k, (1−t) p_k, …)) = H_α(p) + p_k^α H_α((t, 1−t))`,
/// splitting a randomly chosen point `k`.
pub fn check_faddeev_equation(order: EntropyOrder, config: &GeneratorConfig) -> LawReport {
    run_trials(
        format!("grouping-rule (α={order})"),
        config.trials,
        ABSOLUTE_TOLERANCE,
        None,
        config,
        |rng, _, want| {
            let mut gen = generator(config, rng);
            let p = gen.prob_space();
            let t = gen.unit_scalar();
            let k = gen.rng().gen_range(0..p.len());
            let rest = t.complement().expect("t ∈ [0, 1]");
            let pk = &p.weights()[k];
            let mut labels = Vec::with_capacity(p.len() + 1);
            let mut weights = Vec::with_capacity(p.len() + 1);
            for (i, (label, w)) in p.iter().enumerate() {
                if i == k {
                    labels.push(format!("{label}'"));
                    weights.push(&t * pk);
                    labels.push(format!("{label}''"));
                    weights.push(&rest * pk);
                } else {
                    labels.push(label.to_string());
                    weights.push(w.clone());
                }
            }
            let split = FiniteMeasureSpace::new(labels, weights).expect("fresh labels");
            let pair = FiniteMeasureSpace::new(["t", "1-t"], [t.clone(), rest.clone()])
                .expect("two labels");
            let lhs = tsallis(order, &split).nats();
            let rhs =
                tsallis(order, &p).nats() + order.power(pk.to_f64()) * tsallis(order, &pair).nats();
            Trial {
                deviation: deviation(lhs, rhs),
                allowed: ABSOLUTE_TOLERANCE,
                witness: witness(want, |doc| {
                    doc.push_space("p", &p).push_space("split", &split);
                    format!("# t = {t}, split point index {k}; lhs = {lhs:e}, rhs = {rhs:e}\n")
                }),
            }
        },
    )
}

fn space(labels: &[&str], weights: &[&str]) -> FiniteMeasureSpace {
    FiniteMeasureSpace::parse(labels, weights).expect("anchor spaces are valid")
}

/// Fixed probability-space maps tried before the random ones: the fair and
/// degenerate coin collapses, entropy-ln 2 spaces padded with a zero point,
/// and terminal maps of small uniform spaces.
fn continuity_anchors() -> Vec<MeasurePreservingMap> {
    let point = space(&["c"], &["1"]);
    let collapse = |p: FiniteMeasureSpace| {
        let pairs: Vec<(String, &str)> = p.labels().iter().map(|l| (l.clone(), "c")).collect();
        MeasurePreservingMap::new(p, point.clone(), pairs).expect("collapse preserves mass")
    };
    let mut anchors = vec![
        collapse(space(&["a", "b"], &["1/2", "1/2"])),
        collapse(space(&["a", "b"], &["1", "0"])),
        collapse(space(&["a", "b", "z"], &["1/2", "1/2", "0"])),
        MeasurePreservingMap::new(
            space(&["a", "b", "z"], &["1/2", "1/2", "0"]),
            space(&["c", "d"], &["1", "0"]),
            [("a", "c"), ("b", "c"), ("z", "d")],
        )
        .expect("zero point in its own fibre"),
        MeasurePreservingMap::identity(&space(&["a", "b"], &["1/3", "2/3"])),
    ];
    anchors
        .extend((1..=4).map(|n| MeasurePreservingMap::terminal(&FiniteMeasureSpace::uniform(n))));
    anchors
}

/// `(1 − 1/n) p + (1/n) u` on the same points, `u` uniform, pushed forward
/// along the same function.
fn perturb(map: &MeasurePreservingMap, n: u64) -> MeasurePreservingMap {
    let size = map.domain().len() as i64;
    let keep = Weight::new(n as i64 - 1, n as i64).expect("n >= 1");
    let spread = Weight::new(1, n as i64 * size).expect("nonempty domain");
    let weights = map
        .domain()
        .weights()
        .iter()
        .map(|w| &(&keep * w) + &spread)
        .collect::<Vec<_>>();
    let domain = FiniteMeasureSpace::new(map.domain().labels().to_vec(), weights)
        .expect("same labels as before");
    MeasurePreservingMap::with_pushforward(
        domain,
        map.codomain().labels().to_vec(),
        map.assignment().to_vec(),
    )
    .expect("same function as before")
}

/// Continuity along sequences of maps on a fixed underlying function whose
/// measures converge pointwise. For each target `f`, the deviations
/// `|F(f_n) − F(f)|` over [`CONTINUITY_SCHEDULE`] must shrink (up to
/// [`CONTINUITY_SLACK`]) and end below [`CONTINUITY_LIMIT`]. The reported
/// deviation is the one at the last step.
pub fn check_continuity(functional: &dyn MapFunctional, config: &GeneratorConfig) -> LawReport {
    let anchors = continuity_anchors();
    run_trials(
        format!("continuity [{}]", functional.name()),
        config.trials,
        CONTINUITY_LIMIT,
        None,
        config,
        |rng, k, want| {
            let target = match anchors.get(k) {
                Some(anchor) => anchor.clone(),
                None => generator(config, rng).map(MeasureKind::Probability),
            };
            let at_target = functional.evaluate(&target);
            let devs: Vec<f64> = CONTINUITY_SCHEDULE
                .iter()
                .map(|&n| deviation(functional.evaluate(&perturb(&target, n)), at_target))
                .collect();
            let decreasing = devs
                .windows(2)
                .all(|w| w[1] <= CONTINUITY_SLACK * w[0] + ABSOLUTE_TOLERANCE);
            let last = *devs.last().expect("nonempty schedule");
            Trial {
                deviation: last,
                allowed: if decreasing {
                    CONTINUITY_LIMIT
                } else {
                    f64::NEG_INFINITY
                },
                witness: witness(want, |doc| {
                    doc.push_map_with_spaces("f", &target);
                    let steps: Vec<String> = CONTINUITY_SCHEDULE
                        .iter()
                        .zip(&devs)
                        .map(|(n, d)| format!("n={n}: {d:e}"))
                        .collect();
                    format!("# |F(f_n) − F(f)|: {}\n", steps.join(", "))
                }),
            }
        },
    )
}

/// Result of [`estimate_constant`].
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantEstimate {
    pub c: f64,
    pub report: LawReport,
    /// The probe map `!_{uniform(2)}` gave 0 while some other map did not.
    pub degenerate_probe: bool,
}

/// Reads off `c = F(!_{u₂}) / H_α(u₂)` and then tests `F(f) = c (H_α(p) − H_α(q))`
/// on the terminal maps of uniform spaces with up to 64 points and on random
/// probability-space maps. A pass means no counterexample was found.
pub fn estimate_constant(
    functional: &dyn MapFunctional,
    order: EntropyOrder,
    config: &GeneratorConfig,
) -> ConstantEstimate {
    const UNIFORM_PROBES: usize = 64;
    let u2 = FiniteMeasureSpace::uniform(2);
    let probe = functional.evaluate(&MeasurePreservingMap::terminal(&u2));
    let c = probe / tsallis(order, &u2).nats();
    let report = run_trials(
        format!("constant-recovery (α={order}) [{}]", functional.name()),
        UNIFORM_PROBES + config.trials,
        PROBE_TOLERANCE,
        None,
        config,
        |rng, k, want| {
            let f = if k < UNIFORM_PROBES {
                MeasurePreservingMap::terminal(&FiniteMeasureSpace::uniform(k + 1))
            } else {
                generator(config, rng).map(MeasureKind::Probability)
            };
            let lhs = functional.evaluate(&f);
            let rhs = c * (tsallis(order, f.domain()).nats() - tsallis(order, f.codomain()).nats());
            Trial {
                deviation: deviation(lhs, rhs),
                allowed: PROBE_TOLERANCE,
                witness: witness(want, |doc| {
                    doc.push_map_with_spaces("f", &f);
                    format!("# c = {c:e}; F(f) = {lhs:e}, c·(H(p) − H(q)) = {rhs:e}\n")
                }),
            }
        },
    );
    let degenerate_probe = probe == 0.0 && !report.passed;
    ConstantEstimate {
        c,
        report,
        degenerate_probe,
    }
}

/// Difference form and conditional-entropy form of the Shannon loss agree.
/// Even trials use probability spaces, odd trials general measures.
pub fn check_conditional_equivalence(
    functional: &LossFunctional,
    config: &GeneratorConfig,
) -> LawReport {
    run_trials(
        format!("conditional-form [{}]", functional.name()),
        config.trials,
        ABSOLUTE_TOLERANCE,
        None,
        config,
        |rng, k, want| {
            let kind = if k % 2 == 0 {
                MeasureKind::Probability
            } else {
                MeasureKind::General
            };
            let f = generator(config, rng).map(kind);
            let lhs = functional.loss(&f).unwrap_or(f64::NAN);
            let rhs = functional.loss_conditional_form(&f).unwrap_or(f64::NAN);
            Trial {
                deviation: deviation(lhs, rhs),
                allowed: ABSOLUTE_TOLERANCE,
                witness: witness(want, |doc| {
                    doc.push_map_with_spaces("f", &f);
                    format!("# difference {lhs:e}, conditional {rhs:e}\n")
                }),
            }
        },
    )
}

/// `faddeev_reconstruct(p) = H(p)` on random rational probability spaces.
pub fn check_reconstruction(config: &GeneratorConfig) -> LawReport {
    run_trials(
        "reconstruction-from-phi",
        config.trials,
        ABSOLUTE_TOLERANCE,
        None,
        config,
        |rng, _, want| {
            let p = generator(config, rng).prob_space();
            let lhs = faddeev_reconstruct(&p)
                .map(|v| v.nats())
                .unwrap_or(f64::NAN);
            let rhs = shannon(&p).nats();
            Trial {
                deviation: deviation(lhs, rhs),
                allowed: ABSOLUTE_TOLERANCE,
                witness: witness(want, |doc| {
                    doc.push_space("p", &p);
                    format!("# reconstructed {lhs:e}, shannon {rhs:e}\n")
                }),
            }
        },
    )
}

/// Entropy is unchanged, bit for bit, by relabelling points, and the loss
/// of a relabelling is zero.
pub fn check_bijection_invariance(order: EntropyOrder, config: &GeneratorConfig) -> LawReport {
    let loss = LossFunctional::new(1.0, order).expect("unit constant");
    run_trials(
        format!("bijection-invariance (α={order})"),
        config.trials,
        0.0,
        None,
        config,
        |rng, k, want| {
            let mut gen = generator(config, rng);
            let kind = if k % 2 == 0 {
                MeasureKind::Probability
            } else {
                MeasureKind::General
            };
            let p = gen.space_of_kind(kind, "x");
            let sigma = gen.relabelling(&p, "s");
            let before = tsallis(order, sigma.domain()).nats();
            let after = tsallis(order, sigma.codomain()).nats();
            let lost = loss.loss(&sigma).unwrap_or(f64::NAN);
            let dev = deviation(before, after).max(deviation(lost, 0.0));
            Trial {
                deviation: dev,
                allowed: 0.0,
                witness: witness(want, |doc| {
                    doc.push_map_with_spaces("sigma", &sigma);
                    format!("# H(p) = {before:e}, H(σp) = {after:e}, loss {lost:e}\n")
                }),
            }
        },
    )
}

/// Tsallis entropy of order `1 ± 10⁻⁶` is within `10⁻⁵` of Shannon entropy.
pub fn check_alpha_continuity(config: &GeneratorConfig) -> LawReport {
    const STEP: f64 = 1e-6;
    const LIMIT: f64 = 1e-5;
    let below = EntropyOrder::new(1.0 - STEP).expect("positive");
    let above = EntropyOrder::new(1.0 + STEP).expect("positive");
    run_trials(
        "order-continuity-at-1",
        config.trials,
        LIMIT,
        None,
        config,
        |rng, _, want| {
            let p = generator(config, rng).prob_space();
            let h = shannon(&p).nats();
            let dev = deviation(tsallis(below, &p).nats(), h)
                .max(deviation(tsallis(above, &p).nats(), h));
            Trial {
                deviation: dev,
                allowed: LIMIT,
                witness: witness(want, |doc| {
                    doc.push_space("p", &p);
                    String::new()
                }),
            }
        },
    )
}

/// `φ(nm) = φ(n) + φ(m)` for all `n, m ≤ limit`, Shannon order.
pub fn check_phi_additivity(limit: u64) -> LawReport {
    let config = GeneratorConfig::default();
    let order = EntropyOrder::shannon();
    let l = limit as usize;
    run_trials(
        "phi-additivity",
        l * l,
        ABSOLUTE_TOLERANCE,
        None,
        &config,
        |_, k, want| {
            let (n, m) = ((k / l + 1) as u64, (k % l + 1) as u64);
            let value = |x| phi(order, x).map(|v| v.nats()).unwrap_or(f64::NAN);
            let (lhs, rhs) = (value(n * m), value(n) + value(m));
            Trial {
                deviation: deviation(lhs, rhs),
                allowed: ABSOLUTE_TOLERANCE,
                witness: want.then(|| {
                    format!("# n = {n}, m = {m}: φ(nm) = {lhs:e}, φ(n) + φ(m) = {rhs:e}\n")
                }),
            }
        },
    )
}

/// The entropy of the uniform space on `n ≤ limit` points, summed point by
/// point, matches `ln n` or `(1 − n^{1−α}) / (α − 1)`.
pub fn check_uniform_closed_form(order: EntropyOrder, limit: u64) -> LawReport {
    let config = GeneratorConfig::default();
    run_trials(
        format!("uniform-closed-form (α={order})"),
        limit as usize,
        ABSOLUTE_TOLERANCE,
        None,
        &config,
        |_, k, want| {
            let n = k + 1;
            let computed = tsallis(order, &FiniteMeasureSpace::uniform(n)).nats();
            let nf = n as f64;
            let closed = if order.is_one() {
                nf.ln()
            } else {
                let a = order.alpha();
                (1.0 - nf.powf(1.0 - a)) / (a - 1.0)
            };
            Trial {
                deviation: deviation(computed, closed),
                allowed: ABSOLUTE_TOLERANCE,
                witness: want
                    .then(|| format!("# n = {n}: summed {computed:e}, closed form {closed:e}\n")),
            }
        },
    )
}
