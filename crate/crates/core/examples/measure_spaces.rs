// Exact finite measures and measure-preserving maps.
//
// cargo run --example measure_spaces

use std::error::Error;

use infoloss::{FiniteMeasureSpace, MeasureError, MeasurePreservingMap, Weight};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // A die with a loaded six.
    let die = FiniteMeasureSpace::parse(
        &["1", "2", "3", "4", "5", "6"],
        &["1/10", "1/10", "1/10", "1/10", "1/10", "1/2"],
    )?;
    println!(
        "total mass {} probability? {}",
        die.total_mass(),
        die.is_probability()
    );

    let parity = FiniteMeasureSpace::parse(&["odd", "even"], &["3/10", "7/10"])?;
    let f = MeasurePreservingMap::new(
        die.clone(),
        parity.clone(),
        [
            ("1", "odd"),
            ("2", "even"),
            ("3", "odd"),
            ("4", "even"),
            ("5", "odd"),
            ("6", "even"),
        ],
    )?;
    println!("6 lands on {}", f.image_of("6").unwrap_or("?"));

    // Letting the library push the measure forward instead of stating it.
    let derived = MeasurePreservingMap::with_pushforward(
        die.clone(),
        ["odd", "even"],
        f.assignment().to_vec(),
    )?;
    assert_eq!(derived, f);

    // Weights are compared exactly: 1/10^12 off is a different measure.
    let almost = FiniteMeasureSpace::parse(
        &["odd", "even"],
        &["300000000001/1000000000000", "699999999999/1000000000000"],
    )?;
    match MeasurePreservingMap::new(
        die.clone(),
        almost,
        f.pairs().map(|(a, b)| (a.to_string(), b.to_string())),
    ) {
        Err(e @ MeasureError::PushforwardMismatch { .. }) => println!("rejected: {e}"),
        other => return Err(format!("expected a mismatch, got {other:?}").into()),
    }

    // General measures and their normalization.
    let counts = FiniteMeasureSpace::parse(&["a", "b", "c"], &["2", "1", "0"])?;
    let (mass, shape) = counts.normalize()?;
    println!(
        "mass {mass}, normalized {:?}",
        shape
            .weights()
            .iter()
            .map(Weight::to_string)
            .collect::<Vec<_>>()
    );

    let terminal = MeasurePreservingMap::terminal(&counts);
    println!(
        "terminal map lands on a point of weight {}",
        terminal.codomain().total_mass()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
