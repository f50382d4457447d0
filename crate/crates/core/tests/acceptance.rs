//! Runs every acceptance criterion and prints one line each. Set
//! `VARMAX_SKIP_SLOW=1` to skip the 5-vertex exact survey and the
//! 7-vertex path.

use varmax::acceptance::{run_all, AcceptanceOptions, Status};

fn main() {
    let opts = AcceptanceOptions { skip_slow: std::env::var_os("VARMAX_SKIP_SLOW").is_some(), ..Default::default() };
    let report = run_all(&opts);
    for c in &report.criteria {
        println!("{}", c.line());
        if c.status == Status::Fail || std::env::var_os("VARMAX_VERBOSE").is_some() {
            for d in &c.details {
                println!("    {d}");
            }
        }
    }
    let failed = report.criteria.iter().filter(|c| c.status == Status::Fail).count();
    println!("acceptance: {} criteria, {failed} failed", report.criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
