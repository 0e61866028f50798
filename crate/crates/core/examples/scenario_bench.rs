// Runs every scenario under `fixtures/scenarios` and prints a table.
//
//     cargo run --example scenario_bench

use fmit::compare::CompareOptions;
use fmit::scenarios::run_all;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/scenarios");
    let outcomes = run_all(dir, &CompareOptions::default()).expect("scenario fixtures load");
    println!("{:<26} {:>8} {:>8} {:>4} {:>4} {:>4} {:>4} {:>7}  mode", "scenario", "NF/NR", "NF/NR", "NC", "nm", "rk", "st", "cee");
    for o in &outcomes {
        println!(
            "{:<26} {:>8} {:>8} {:>4} {:>4} {:>4} {:>4} {:>7.4}  {}",
            o.name,
            format!("{}/{}", o.base.features, o.base.relationships),
            format!("{}/{}", o.other.features, o.other.relationships),
            o.conflicts,
            o.name_conflicts,
            o.kind_conflicts,
            o.structural_conflicts,
            o.cee,
            o.mode,
        );
    }
}
