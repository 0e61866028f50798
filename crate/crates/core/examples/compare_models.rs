// Compares two models from disk and prints the report.
//
//     cargo run --example compare_models [base.xml other.xml]

use fmit::compare::{compare, CompareOptions};
use fmit::merge::detect_conflicts;
use fmit::report::{render_report, ReportInput};
use fmit::xml::parse_xml;

fn load(path: &str) -> fmit::FeatureModel {
    let bytes = std::fs::read(path).unwrap_or_else(|e| panic!("{path}: {e}"));
    parse_xml(&bytes).unwrap_or_else(|e| panic!("{path}: {e}")).model
}

fn main() {
    run(&std::env::args().skip(1).collect::<Vec<_>>());
}

fn run(args: &[String]) {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/worked");
    let (base, other) = match args {
        [a, b] => (load(a), load(b)),
        _ => (load(&format!("{dir}/structural_base.xml")), load(&format!("{dir}/structural_other.xml"))),
    };

    let cmp = compare(&base, &other, &CompareOptions::default());
    for p in &cmp.matching.pairs {
        println!("{:>12} <-> {:<12} {:.4}", base.name_of(p.base), other.name_of(p.other), p.name_score);
    }
    let conflicts = detect_conflicts(&base, &other, &cmp.matching);
    let mut input = ReportInput::new(base.name(), other.name(), &cmp.report, "example");
    input.conflicts = &conflicts;
    print!("{}", render_report(&input).to_text());
}
