//! One line per acceptance criterion; run with `--nocapture` to see them.

use frackit_core::verify::{run_checks, Bound};

#[test]
fn acceptance() {
    let reports = run_checks(&[]);
    let mut failed = Vec::new();
    for r in &reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        println!("[{status}] {:>2} {} ({:.1} s)", r.id, r.name, r.elapsed.as_secs_f64());
        match &r.outcome {
            Ok(ms) => {
                for m in ms {
                    let op = match m.bound {
                        Bound::Below => "<",
                        Bound::Above => ">",
                    };
                    println!("         {}: {:.3e} {op} {:.0e}", m.label, m.measured, m.required);
                }
            }
            Err(e) => println!("         error: {e}"),
        }
        if !r.passed() {
            failed.push(r.id);
        }
    }
    assert_eq!(reports.len(), 10);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
