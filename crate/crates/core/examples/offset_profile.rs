//! Transmitter-offset profile of C7(2,1) without CSA and its FWHM.

use c7opt::experiment::*;
use c7opt::sequence::SequenceParams;

fn main() -> Result<(), c7opt::Error> {
    let sys = reference::maleate();
    let cfg = SimConfig { include_csa: false, powder: PowderSpec { scheme: PowderKind::Zcw, count: 34, gamma: 2 }, ..SimConfig::default() };
    let p = SequenceParams::c7(reference::ROTOR_FREQ, 31)?;
    let offsets: Vec<f64> = (-20..=20).map(|k| f64::from(k) * 1000.0).collect();
    let prof = offset_profile(&p, &sys, &cfg, &offsets)?;
    for (o, e) in &prof {
        println!("{:>8.0} Hz {:.4} {}", o, e, "#".repeat((e * 60.0).max(0.0) as usize));
    }
    match fwhm(&prof) {
        Some(f) => println!("FWHM {:.0} Hz, centre {:.0} Hz", f.width, f.center),
        None => println!("profile does not fall to half height"),
    }
    Ok(())
}
