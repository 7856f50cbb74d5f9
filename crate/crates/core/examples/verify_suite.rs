//! Run the seeded property suites with a small budget and print one line per
//! property. Pass `--inject-fault` to see how a failure is reported.

use lattice_repr::verify::{run_suite, SuiteConfig};

fn main() {
    let cfg = SuiteConfig {
        seed: 42,
        instances: 50,
        lattice_instances: 30,
        cases: 30,
        inject_fault: std::env::args().any(|a| a == "--inject-fault"),
        ..SuiteConfig::default()
    };
    let r = run_suite(&cfg);
    for l in &r.properties.0 {
        println!("{:<40} {:>7} instances {:>3} failed", l.property, l.instances, l.failed);
    }
    match &r.first_failure {
        None => println!("all {} checks passed", r.total_instances),
        Some(f) => println!("FAILED {f}"),
    }
}
