use superber::acceptance::{run_criterion, SuiteConfig};

fn criterion(id: u8) {
    let r = run_criterion(id, &SuiteConfig::default());
    println!("{}", r.line());
    assert!(r.passed, "{}", r.line());
}

#[test]
fn criterion_01_worked_example() {
    criterion(1);
}

#[test]
fn criterion_02_expansion_at_zero() {
    criterion(2);
}

#[test]
fn criterion_03_expansion_at_infinity() {
    criterion(3);
}

#[test]
fn criterion_04_recurrences() {
    criterion(4);
}

#[test]
fn criterion_05_annulus_convergence() {
    criterion(5);
}

#[test]
fn criterion_06_region_jumps() {
    criterion(6);
}

#[test]
fn criterion_07_scaling() {
    criterion(7);
}

#[test]
fn criterion_08_forms() {
    criterion(8);
}

#[test]
fn criterion_09_deltas() {
    criterion(9);
}

#[test]
fn criterion_10_fourier() {
    criterion(10);
}
