//! C7(2,1) buildup with and without shielding anisotropy.
//!
//! cargo run --release --example buildup -- [zcw_count] [gamma]

use c7opt::experiment::*;
use c7opt::sequence::SequenceParams;

fn main() -> Result<(), c7opt::Error> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let powder = PowderSpec { scheme: PowderKind::Zcw, count: *args.first().unwrap_or(&89), gamma: *args.get(1).unwrap_or(&2) };
    let sys = reference::maleate();
    let p = SequenceParams::c7(reference::ROTOR_FREQ, 1)?;
    let mut curves = Vec::new();
    for include_csa in [false, true] {
        let cfg = SimConfig { include_csa, powder, ..SimConfig::default() };
        curves.push(buildup_curve(&p, &sys, &cfg, 1..=60)?);
    }
    println!("{:>4} {:>9} {:>8} {:>8}", "n", "tau_ms", "no_csa", "csa");
    for (a, b) in curves[0].iter().zip(&curves[1]).step_by(3) {
        println!("{:>4} {:>9.3} {:>8.4} {:>8.4}", a.n_blocks, a.tau_exc * 1e3, a.efficiency, b.efficiency);
    }
    for (c, label) in curves.iter().zip(["no CSA", "CSA"]) {
        let m = c.iter().max_by(|x, y| x.efficiency.total_cmp(&y.efficiency)).unwrap();
        println!("{label}: max {:.4} at n = {} ({:.3} ms)", m.efficiency, m.n_blocks, m.tau_exc * 1e3);
    }
    Ok(())
}
