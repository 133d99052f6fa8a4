use frackit_core::verify::{check_ids, run_checks, Bound};

use crate::args::VerifyArgs;
use crate::failure::{CliResult, Failure, EXIT_CHECKS_FAILED};

pub fn run(args: &VerifyArgs) -> CliResult<u8> {
    let known: Vec<u32> = check_ids().map(|(id, _)| id).collect();
    if let Some(bad) = args.only.iter().find(|id| !known.contains(id)) {
        return Err(Failure::Config(format!("--only: no criterion {bad} (known: 1-{})", known.len())));
    }
    println!("{:>2}  {:<36} {:<6} {:>10}  {:>9}  measurement", "id", "criterion", "result", "measured", "required");
    let reports = run_checks(&args.only);
    for r in &reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        match &r.outcome {
            Ok(ms) => {
                for (i, m) in ms.iter().enumerate() {
                    let (id, name, st) = if i == 0 { (r.id.to_string(), r.name, status) } else { (String::new(), "", "") };
                    let op = match m.bound {
                        Bound::Below => "<",
                        Bound::Above => ">",
                    };
                    let mark = if m.passed() { "" } else { "  <-- fails" };
                    println!(
                        "{id:>2}  {name:<36} {st:<6} {:>10.3e}  {op}{:>8.0e}  {}{mark}",
                        m.measured, m.required, m.label
                    );
                }
            }
            Err(e) => println!("{:>2}  {:<36} {status:<6} error: {e}", r.id, r.name),
        }
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    println!("verify: {passed}/{} criteria passed", reports.len());
    Ok(if passed == reports.len() { 0 } else { EXIT_CHECKS_FAILED })
}
