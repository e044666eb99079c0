//! Where the buildup maximum sits in (tau1/tau_C, tau_exc) at a few speeds.

use c7opt::experiment::*;
use c7opt::harness::{spinning_speed_study, SpeedStudyBlock};

fn main() -> Result<(), c7opt::Error> {
    let sys = reference::maleate();
    let cfg = SimConfig { powder: PowderSpec { scheme: PowderKind::Zcw, count: 21, gamma: 1 }, ..SimConfig::default() };
    let study = SpeedStudyBlock { speeds_hz: vec![8000.0, 10204.0, 12000.0], ratio_points: 13, ..SpeedStudyBlock::default() };
    let st = spinning_speed_study(&study, &sys, &cfg, 1)?;
    print!("{}", st.to_csv());
    Ok(())
}
