// Reading and writing the text format, and loading a pipeline from disk.
//
// cargo run --example file_format

use std::error::Error;
use std::path::Path;

use infoloss::format::{load_pipeline, Document, Scope};
use infoloss::LossFunctional;

const TEXT: &str = "\
# weights may be decimals; they are stored exactly
space p
a 0.5
b 1/4
c 0.25

space q
x ?
y ?

map coarsen : p -> q
a -> x
b -> y
c -> y
";

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let doc = Document::parse(TEXT)?;
    let scope = Scope::from_document(&doc)?;
    // `?` weights are only allowed when the codomain is inferred.
    assert!(scope.map("coarsen", false).is_err());
    let coarsen = scope.map("coarsen", true)?;
    println!(
        "q = {:?}",
        coarsen
            .codomain()
            .weights()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
    );

    let mut out = Document::new();
    out.push_map_with_spaces("coarsen", &coarsen);
    let canonical = out.to_canonical_string();
    print!("{canonical}");
    assert_eq!(
        Document::parse(&canonical)?.to_canonical_string(),
        canonical
    );

    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/two-stage.pipeline");
    let (name, stages) = load_pipeline(&data, false)?;
    let chain: Vec<_> = stages.iter().map(|s| s.map.clone()).collect();
    let total = LossFunctional::shannon().pipeline_loss(&chain)?.total;
    println!("pipeline {name}: {} stages, {total:.15} nats", stages.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
