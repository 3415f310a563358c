use senlab_accept::{run_suite, KNOWN_UNATTAINABLE};
use senlab_core::Exec;

#[test]
fn acceptance() {
    let outcomes = run_suite("all", Exec::default()).expect("suite exists");
    for o in &outcomes {
        println!("{}", o.line());
    }
    // a failure is tolerated only if it is one of the documented unattainable checks
    let unexpected: Vec<String> = outcomes
        .iter()
        .flat_map(|o| {
            let mut bad: Vec<String> = o
                .failing()
                .into_iter()
                .filter(|c| !KNOWN_UNATTAINABLE.contains(&(o.index, c.label.as_str())))
                .map(|c| format!("criterion {}: {} ({})", o.index, c.label, c.measured))
                .collect();
            if !o.within_limit() {
                bad.push(format!("criterion {}: runtime {:.3}s over {}s", o.index, o.runtime.as_secs_f64(), o.limit.as_secs_f64()));
            }
            bad
        })
        .collect();
    assert!(unexpected.is_empty(), "unexpected failures:\n{}", unexpected.join("\n"));
}
