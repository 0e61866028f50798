// A semi-automatic session: list the conflicts, decide each one, finalize
// and compare the result against the base again.
//
//     cargo run --example semi_automatic_session

use fmit::compare::CompareOptions;
use fmit::merge::{Choice, ConflictKind, Session};
use fmit::xml::parse_str;

const BASE: &str = include_str!("../fixtures/worked/city_base.xml");
const OTHER: &str = include_str!("../fixtures/worked/city_other.xml");

fn main() {
    let base = parse_str(BASE).unwrap().model;
    let other = parse_str(OTHER).unwrap().model;
    let mut session = Session::start(base, other, CompareOptions::default()).expect("models are well formed");
    println!("cee before: {:.4} ({})", session.report.cee, session.report.recommended_mode);

    for id in session.pending() {
        let c = session.conflict(id).unwrap().clone();
        // take the other model's names, keep the base's relationship kinds
        let choice = if c.kind == ConflictKind::Name { Choice::KeepOther } else { Choice::KeepBase };
        println!("#{} {:<18} {:>10} | {:<10} -> {choice}", c.id, c.kind, c.base_value, c.other_value);
        session.resolve(id, choice).unwrap();
    }

    let merged = session.finalize().unwrap().clone();
    let names: Vec<_> = merged.preorder().into_iter().map(|id| merged.name_of(id)).collect();
    println!("merged: {names:?}");
    println!("cee after:  {:.4}", session.post_report.as_ref().unwrap().cee);
}
