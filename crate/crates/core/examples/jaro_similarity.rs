// Jaro and Jaro-Winkler scores for a few name pairs, and whether each pair
// clears the default pairing threshold.
//
//     cargo run --example jaro_similarity [a b]

use fmit::compare::{jaro, jaro_winkler, DEFAULT_NAME_THRESHOLD};

fn main() {
    run(&std::env::args().skip(1).collect::<Vec<_>>());
}

fn run(args: &[String]) {
    let pairs: Vec<(String, String)> = match args {
        [a, b] => vec![(a.clone(), b.clone())],
        _ => [
            ("fone", "ofne"),
            ("martha", "marhta"),
            ("Trans", "Transporte"),
            ("Serv", "Serviços"),
            ("Serv", "Serviços Públicos"),
            ("Ligacao", "Ligacoes"),
            ("fone", "Ligação"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect(),
    };
    println!("{:<10} {:<18} {:>7} {:>7}  pairs?", "a", "b", "jaro", "jw");
    for (a, b) in pairs {
        let jw = jaro_winkler(&a, &b);
        println!("{a:<10} {b:<18} {:>7.4} {jw:>7.4}  {}", jaro(&a, &b), jw >= DEFAULT_NAME_THRESHOLD);
    }
}
