// Checking the laws on random maps, and watching broken functionals fail.
//
// cargo run --release --example verify_axioms

use std::error::Error;

use infoloss::harness::{
    check_continuity, check_convex_linearity, check_functoriality, estimate_constant,
    EntropyThreshold, FnFunctional, GeneratorConfig, SquaredLoss,
};
use infoloss::{shannon, tsallis, EntropyOrder, FiniteMeasureSpace, LossFunctional};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let config = GeneratorConfig::new(8, 1000, 300, 42)?;
    let order = EntropyOrder::shannon();
    let loss = LossFunctional::new(2.5, order)?;

    for report in [
        check_functoriality(&loss, &config),
        check_convex_linearity(&loss, order, &config),
        check_continuity(&loss, &config),
    ] {
        println!("{}", report.summary());
    }

    // Squaring breaks additivity along composites.
    let squared = check_functoriality(&SquaredLoss(loss), &config);
    println!("{}", squared.summary());
    if let Some(example) = &squared.counterexample {
        println!("{}", example.lines().take(2).collect::<Vec<_>>().join("\n"));
    }

    // A jump at H = ln 2 breaks continuity.
    let jump = EntropyThreshold {
        order,
        threshold: shannon(&FiniteMeasureSpace::uniform(2)).nats(),
    };
    println!("{}", check_continuity(&jump, &config).summary());

    // Recovering the constant of a functional only known as a black box.
    let mystery = FnFunctional::new("mystery", |f| {
        std::f64::consts::PI
            * (tsallis(order, f.domain()).nats() - tsallis(order, f.codomain()).nats())
    });
    let estimate = estimate_constant(&mystery, order, &config);
    println!("c ≈ {:.12}; {}", estimate.c, estimate.report.summary());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
