// The information lost by a map, two ways, and along a pipeline.
//
// cargo run --example information_loss

use std::error::Error;

use infoloss::{EntropyOrder, FiniteMeasureSpace, LossFunctional, MeasurePreservingMap};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let loss = LossFunctional::shannon();

    let fair = FiniteMeasureSpace::parse(&["heads", "tails"], &["1/2", "1/2"])?;
    let certain = FiniteMeasureSpace::parse(&["heads", "tails"], &["1", "0"])?;
    for (name, coin) in [("fair", &fair), ("certain", &certain)] {
        let forget = MeasurePreservingMap::terminal(coin);
        println!(
            "forgetting a {name} coin loses {:.15} nats (conditional form {:.15})",
            loss.loss(&forget)?,
            loss.loss_conditional_form(&forget)?
        );
    }

    // Stage losses add up to the loss of the composite.
    let p = FiniteMeasureSpace::parse(&["a", "b", "c"], &["1/2", "1/4", "1/4"])?;
    let coarsen = MeasurePreservingMap::with_pushforward(p, ["x", "y"], vec![0, 1, 1])?;
    let forget = MeasurePreservingMap::terminal(coarsen.codomain());
    let chain = [coarsen, forget];
    let stages = loss.pipeline_loss(&chain)?;
    println!("stages {:?}, total {:.15}", stages.stages, stages.total);
    println!("composite {:.15}", loss.composite_loss(&chain)?);

    // Other constants and orders.
    let tsallis2 = LossFunctional::new(2.5, "2".parse::<EntropyOrder>()?)?;
    println!(
        "2.5·(H_2(p) − H_2(q)) on the composite: {:.15}",
        tsallis2.composite_loss(&chain)?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
