// Shannon and Tsallis entropy, and entropy rebuilt from φ(n).
//
// cargo run --example entropy

use std::error::Error;

use infoloss::{
    faddeev_reconstruct, phi, phi_increments, shannon, tsallis, EntropyOrder, FiniteMeasureSpace,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let coin = FiniteMeasureSpace::uniform(2);
    let h = shannon(&coin);
    println!("H(coin) = {} nats = {} bits", h.nats(), h.bits());

    let p = FiniteMeasureSpace::parse(&["a", "b", "c"], &["1/2", "1/3", "1/6"])?;
    for order in ["1/2", "1", "2", "3"] {
        let alpha: EntropyOrder = order.parse()?;
        println!("H_{alpha}(p) = {:.12}", tsallis(alpha, &p).nats());
    }

    // Entropy of a general measure scales with its mass: ‖p‖ H(p̄).
    let heavy = FiniteMeasureSpace::parse(&["a", "b"], &["2", "2"])?;
    println!("H(2,2) = {:.12}", shannon(&heavy).nats());

    // φ(n) = H(uniform n) determines H on rational distributions.
    let shannon_order = EntropyOrder::shannon();
    println!(
        "φ(6) = {:.12} = φ(2) + φ(3) = {:.12}",
        phi(shannon_order, 6)?.nats(),
        phi(shannon_order, 2)?.nats() + phi(shannon_order, 3)?.nats()
    );
    let rebuilt = faddeev_reconstruct(&p)?;
    println!(
        "rebuilt H(p) = {:.15}, direct {:.15}",
        rebuilt.nats(),
        shannon(&p).nats()
    );

    // φ(n+1) − φ(n) → 0, shown rather than tested.
    for (n, step) in phi_increments(shannon_order, 10_000)
        .into_iter()
        .filter(|(n, _)| [1, 10, 100, 1000, 10_000].contains(n))
    {
        println!("φ({}) − φ({n}) = {step:.3e}", n + 1);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
