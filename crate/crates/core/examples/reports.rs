//! Experiment records: JSON round trip and CSV output.

use lattice_llt::diophantine::asymptotic_report;
use lattice_llt::report::ExperimentReport;

fn main() -> lattice_llt::Result<()> {
    let report = asymptotic_report(4, &[16, 32, 64])?;
    let json = report.to_json()?;
    let back = ExperimentReport::from_json(&json)?;
    assert_eq!(back, report);
    println!("{json}");
    print!("{}", report.to_csv());

    let dir = std::env::temp_dir().join("lattice-llt-example");
    std::fs::create_dir_all(&dir)?;
    report.write_json(&dir.join("diophantine.json"))?;
    report.write_csv(&dir.join("diophantine.csv"))?;
    println!("written to {}", dir.display());
    Ok(())
}
