//! One line per acceptance criterion. Failures are reported, not raised, so
//! the remaining test targets still run; `jones acceptance --check` exits
//! non-zero instead.

use fig8_jones::checks;

fn main() {
    let outcomes = checks::run_all();
    for o in &outcomes {
        println!("{o}");
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("acceptance: {passed}/{} criteria passed", outcomes.len());
}
