//! Loads a scenario file, classifies it, exports it again and checks the
//! reparsed experiment is identical.
//!
//! cargo run --example scenario_roundtrip -- crates/core/scenarios/stern_gerlach.json

use qcomplement::report::Report;
use qcomplement::scenario::{parse_scenario, ScenarioDocument};

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/mach_zehnder.json").into()
    });
    let bytes = std::fs::read(&path).unwrap_or_else(|e| panic!("cannot read {path}: {e}"));
    let scenario = match parse_scenario(&bytes) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{path}: {e}");
            std::process::exit(2);
        }
    };
    let name = scenario.document.name.as_deref();
    let report =
        Report::full(&scenario.experiment, &scenario.tolerances, name).expect("classifiable");
    print!("{}", report.to_table());

    let exported =
        ScenarioDocument::from_experiment(&scenario.experiment, &scenario.tolerances, name, None);
    let again = parse_scenario(exported.to_json_pretty().as_bytes()).expect("export reparses");
    let report_again =
        Report::full(&again.experiment, &again.tolerances, name).expect("classifiable");
    assert_eq!(again.experiment, scenario.experiment);
    assert_eq!(report_again.to_json(), report.to_json());
    println!("\nexport -> reparse -> reclassify: identical");
}
