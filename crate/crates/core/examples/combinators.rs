// Composition, direct sums, scaling and convex combinations.
//
// cargo run --example combinators

use std::error::Error;

use infoloss::{
    compose, convex_combination_maps, decompose_to_points, direct_sum_maps, scale_map,
    ConvexCoefficients, FiniteMeasureSpace, MeasurePreservingMap, Weight,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = FiniteMeasureSpace::parse(&["a", "b", "c"], &["1/2", "1/4", "1/4"])?;
    let q = FiniteMeasureSpace::parse(&["x", "y"], &["1/2", "1/2"])?;
    let g = MeasurePreservingMap::new(p.clone(), q.clone(), [("a", "x"), ("b", "y"), ("c", "y")])?;
    let f = MeasurePreservingMap::terminal(&q);

    // f ∘ g: apply g, then f.
    let fg = compose(&f, &g)?;
    println!("f∘g sends a to {}", fg.image_of("a").unwrap_or("?"));
    if let Err(e) = compose(&g, &f) {
        println!("g∘f: {e}");
    }

    // Direct sums relabel component k's points as `k.<label>`.
    let sum = direct_sum_maps(&[g.clone(), f.clone()]);
    println!("g ⊕ f domain: {:?}", sum.domain().labels());
    println!("g ⊕ f total mass {}", sum.domain().total_mass());

    let half = Weight::new(1, 2)?;
    let scaled = scale_map(&half, &g);
    println!("(1/2)·g domain mass {}", scaled.domain().total_mass());

    // λ g ⊕ (1−λ) g', still a map of probability spaces.
    let coin = FiniteMeasureSpace::uniform(2);
    let mix = convex_combination_maps(
        &ConvexCoefficients::parse(&["1/3", "2/3"])?,
        &[g.clone(), MeasurePreservingMap::identity(&coin)],
    )?;
    println!("mixture is probability? {}", mix.domain().is_probability());

    // Every probability space is a convex combination of one-point spaces.
    let (weights, points) = decompose_to_points(&p)?;
    assert_eq!(points.len(), p.len());
    for (w, label) in weights.values().iter().zip(p.labels()) {
        println!("  {w} · point({label})");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
