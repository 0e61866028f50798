// Propositional clauses and every valid product of a small model.
//
//     cargo run --example enumerate_configurations

use fmit::logic::{enumerate_configurations, to_propositional, DEFAULT_CONFIGURATION_CAP};
use fmit::FeatureModel;

fn main() {
    let mut b = FeatureModel::builder("Phone");
    let root = b.root();
    b.mandatory(root, "Calls");
    let screen = b.mandatory(root, "Screen");
    b.xor_member(screen, "Basic");
    let colour = b.xor_member(screen, "Colour");
    let media = b.optional(root, "Media");
    let camera = b.or_member(media, "Camera");
    b.or_member(media, "MP3");
    b.requires(camera, colour);
    let model = b.build().expect("well formed");

    println!("clauses:");
    for c in to_propositional(&model).clauses {
        println!("  {c}");
    }

    let configs = enumerate_configurations(&model, DEFAULT_CONFIGURATION_CAP).expect("small model");
    println!("\n{} configurations:", configs.len());
    for c in &configs {
        println!("  {c}");
    }
}
