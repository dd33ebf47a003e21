use std::process::ExitCode;

use csn_core::selftest::{criteria, run_one, SelftestConfig};

fn main() -> ExitCode {
    let cfg = SelftestConfig::default();
    let mut failed = 0;
    for (n, _) in criteria() {
        let r = run_one(n, &cfg).expect("criterion exists");
        println!("{r} [{:.1}s]", r.elapsed.as_secs_f64());
        for d in &r.details {
            println!("      {d}");
        }
        failed += usize::from(!r.passed);
    }
    println!(
        "{} of {} criteria passed",
        criteria().len() - failed,
        criteria().len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
