// Reads a model, reports parser warnings, writes it back and checks the
// written form reads back to the same structure.
//
//     cargo run --example xml_roundtrip [model.xml]

use fmit::xml::{parse_str, parse_xml, to_string};

const LOOSE: &str = r#"<featureModel>
  <struct>
    <and abstract="true" mandatory="true" name="Car">
      <description>skipped</description>
      <alt mandatory="true" name="Engine">
        <feature name="Electric"/>
        <feature name="Petrol"/>
      </alt>
      <feature name="Radio" colour="red"/>
    </and>
  </struct>
  <constraints>
    <rule><imp><var>Radio</var><var>Electric</var></imp></rule>
  </constraints>
</featureModel>"#;

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}")),
        None => LOOSE.to_owned(),
    };
    if !roundtrip(&text) {
        std::process::exit(1);
    }
}

fn roundtrip(text: &str) -> bool {
    let parsed = match parse_xml(text.as_bytes()) {
        Ok(p) => p,
        Err(failure) => {
            eprintln!("{failure}");
            return false;
        }
    };
    for w in &parsed.warnings {
        println!("{w}");
    }
    let written = to_string(&parsed.model);
    print!("{written}");
    let again = parse_str(&written).expect("writer output parses").model;
    assert!(again.same_structure(&parsed.model));
    assert_eq!(to_string(&again), written);
    println!("round trip ok");
    true
}
