//! (dtau1, dtau2) landscape with CSA; writes landscape.csv.

use c7opt::experiment::*;
use c7opt::harness::{scan_2d, Axis};
use c7opt::sequence::SequenceParams;

fn main() -> Result<(), c7opt::Error> {
    let sys = reference::maleate();
    let cfg = SimConfig { powder: PowderSpec { scheme: PowderKind::Zcw, count: 34, gamma: 1 }, ..SimConfig::default() };
    let base = SequenceParams::c7(reference::ROTOR_FREQ, 31)?;
    let x = Axis::new("tau1", -5.0, 5.0, 11);
    let y = Axis::new("tau2", -5.0, 5.0, 11);
    let g = scan_2d(&x, &y, &base, &sys, &cfg, 1)?;
    for row in g.values.iter().rev() {
        let line: String = row.iter().map(|v| format!("{:>3.0}", v * 100.0)).collect::<Vec<_>>().join(" ");
        println!("{line}");
    }
    std::fs::write("landscape.csv", g.to_csv())?;
    println!("rows: dtau2 from -5 (bottom) to 5 us; columns: dtau1; values in %");
    Ok(())
}
