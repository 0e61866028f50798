// The four automatic strategies on a small pair of models, printed as name
// lists and written out as XML next to each other.
//
//     cargo run --example automatic_merge

use fmit::compare::{match_features, DEFAULT_NAME_THRESHOLD};
use fmit::merge::auto_integrate;
use fmit::xml::{parse_str, to_string};

const BASE: &str = include_str!("../fixtures/worked/strategies_base.xml");
const OTHER: &str = include_str!("../fixtures/worked/strategies_other.xml");

fn main() {
    let base = parse_str(BASE).expect("base parses").model;
    let other = parse_str(OTHER).expect("other parses").model;
    let matching = match_features(&base, &other, DEFAULT_NAME_THRESHOLD);

    for out in auto_integrate(&base, &other, &matching).expect("no null strategy involved") {
        println!("{:<14} {:?}", out.strategy, out.ordered_names());
        assert!(out.model.is_well_formed());
    }

    let union = &auto_integrate(&base, &other, &matching).unwrap()[0];
    println!("\n{}", to_string(&union.model));
}
