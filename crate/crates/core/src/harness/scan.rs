//! One- and two-dimensional efficiency scans and their CSV form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::experiment::{Experiment, SimConfig};
use crate::sequence::{Param, SequenceParams};
use crate::spin::SpinSystem;
use crate::Error;

/// What an axis varies. Sequence fields other than the block count are
/// offsets from the base value in file units (µs, Hz, degrees); the block
/// count and the transmitter offset (Hz) are absolute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanParam {
    Seq(Param),
    Offset,
}

impl ScanParam {
    pub fn from_name(name: &str) -> Result<ScanParam, Error> {
        if name == "offset" {
            return Ok(ScanParam::Offset);
        }
        Param::from_name(name).map(ScanParam::Seq).map_err(|_| {
            Error::InvalidInput(format!(
                "unknown scan parameter '{name}' (expected tau1, tau2, kappa1, kappa2, phi1, phi2, n_blocks or offset)"
            ))
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            ScanParam::Seq(p) => p.name(),
            ScanParam::Offset => "offset",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            ScanParam::Seq(Param::Tau1 | Param::Tau2) => "us",
            ScanParam::Seq(Param::Phi1 | Param::Phi2) => "deg",
            ScanParam::Seq(Param::NBlocks) => "blocks",
            _ => "hz",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub param: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(param: &str, start: f64, stop: f64, points: usize) -> Axis {
        Axis { param: param.to_string(), start, stop, points }
    }

    pub fn scan_param(&self) -> Result<ScanParam, Error> {
        ScanParam::from_name(&self.param)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let sp = self.scan_param()?;
        if self.points == 0 {
            return Err(Error::InvalidInput(format!("axis '{}' needs at least one point", self.param)));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::InvalidInput(format!("axis '{}' has non-finite limits", self.param)));
        }
        if sp == ScanParam::Seq(Param::NBlocks) {
            for c in self.coords() {
                if c.fract() != 0.0 || c < 1.0 {
                    return Err(Error::InvalidInput(format!("block-count axis hits non-integer or zero value {c}")));
                }
            }
        }
        Ok(())
    }

    /// Evenly spaced coordinates; a single point sits at `start`.
    pub fn coords(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points).map(|i| if i + 1 == self.points { self.stop } else { self.start + i as f64 * h }).collect()
    }
}

/// Efficiencies over one or two axes; `values[iy][ix]`, a single row for 1D.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanGrid {
    pub x: Axis,
    pub y: Option<Axis>,
    pub values: Vec<Vec<f64>>,
}

impl ScanGrid {
    /// Grid maximum as (ix, iy, value).
    pub fn argmax(&self) -> (usize, usize, f64) {
        let mut best = (0, 0, f64::NEG_INFINITY);
        for (iy, row) in self.values.iter().enumerate() {
            for (ix, &v) in row.iter().enumerate() {
                if v > best.2 {
                    best = (ix, iy, v);
                }
            }
        }
        best
    }

    /// CSV with the axis coordinates in the first row/column. Values are
    /// written in shortest round-trip form so re-import is exact.
    pub fn to_csv(&self) -> String {
        let xs = self.x.coords();
        let mut s = String::new();
        match &self.y {
            None => {
                s.push_str(&format!("{},efficiency\n", self.x.param));
                for (x, v) in xs.iter().zip(&self.values[0]) {
                    s.push_str(&format!("{x},{v}\n"));
                }
            }
            Some(y) => {
                s.push_str(&format!("{}\\{}", y.param, self.x.param));
                for x in &xs {
                    s.push_str(&format!(",{x}"));
                }
                s.push('\n');
                for (yv, row) in y.coords().iter().zip(&self.values) {
                    s.push_str(&yv.to_string());
                    for v in row {
                        s.push_str(&format!(",{v}"));
                    }
                    s.push('\n');
                }
            }
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<ScanGrid, Error> {
        let bad = |m: String| Error::InvalidInput(format!("scan CSV: {m}"));
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(format!("bad number '{s}'")));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<&str> = lines.next().ok_or_else(|| bad("empty".into()))?.split(',').collect();
        let axis_from = |name: &str, c: &[f64]| Axis::new(name, c[0], *c.last().unwrap(), c.len());
        if header.len() == 2 && header[1] == "efficiency" {
            let mut xs = Vec::new();
            let mut vs = Vec::new();
            for l in lines {
                let f: Vec<&str> = l.split(',').collect();
                if f.len() != 2 {
                    return Err(bad(format!("expected 2 fields in '{l}'")));
                }
                xs.push(num(f[0])?);
                vs.push(num(f[1])?);
            }
            if xs.is_empty() {
                return Err(bad("no data rows".into()));
            }
            return Ok(ScanGrid { x: axis_from(header[0], &xs), y: None, values: vec![vs] });
        }
        let (yname, xname) = header[0].split_once('\\').ok_or_else(|| bad("corner cell must be 'y\\x'".into()))?;
        let xs = header[1..].iter().map(|s| num(s)).collect::<Result<Vec<_>, _>>()?;
        let mut ys = Vec::new();
        let mut values = Vec::new();
        for l in lines {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != xs.len() + 1 {
                return Err(bad(format!("row has {} fields, expected {}", f.len(), xs.len() + 1)));
            }
            ys.push(num(f[0])?);
            values.push(f[1..].iter().map(|s| num(s)).collect::<Result<Vec<_>, _>>()?);
        }
        if xs.is_empty() || ys.is_empty() {
            return Err(bad("no data".into()));
        }
        Ok(ScanGrid { x: axis_from(xname, &xs), y: Some(axis_from(yname, &ys)), values })
    }
}

fn apply(sp: ScanParam, coord: f64, base: &SequenceParams, p: &mut SequenceParams, offset: &mut f64) {
    match sp {
        ScanParam::Offset => *offset = coord,
        ScanParam::Seq(Param::NBlocks) => Param::NBlocks.set(p, coord),
        ScanParam::Seq(q) => q.set(p, q.get(base) + coord / q.display_scale()),
    }
}

/// Evaluates every cell. When the block count is scanned, the cells along
/// it come from one buildup pass; cells sharing a transmitter offset share
/// one [`Experiment`].
fn evaluate(
    axes: &[(ScanParam, Vec<f64>)],
    base: &SequenceParams,
    sys: &SpinSystem,
    cfg: &SimConfig,
    threads: usize,
) -> Result<Vec<Vec<f64>>, Error> {
    let nx = axes[0].1.len();
    let ny = axes.get(1).map_or(1, |a| a.1.len());
    let nb_axis = axes.iter().position(|a| a.0 == ScanParam::Seq(Param::NBlocks));
    let free: Vec<usize> = (0..axes.len()).filter(|&k| Some(k) != nb_axis).collect();
    let mut experiments: BTreeMap<u64, Experiment> = BTreeMap::new();
    let mut out = vec![vec![f64::NAN; nx]; ny];

    let sizes: Vec<usize> = free.iter().map(|&k| axes[k].1.len()).collect();
    let total: usize = sizes.iter().product();
    for flat in 0..total {
        // idx[k] for every axis; the block-count axis is filled below.
        let mut idx = [0usize; 2];
        let mut rem = flat;
        for (&k, &n) in free.iter().zip(&sizes) {
            idx[k] = rem % n;
            rem /= n;
        }
        let mut p = *base;
        let mut offset = cfg.transmitter_offset;
        for &k in &free {
            apply(axes[k].0, axes[k].1[idx[k]], base, &mut p, &mut offset);
        }
        let key = offset.to_bits();
        if !experiments.contains_key(&key) {
            let c = SimConfig { transmitter_offset: offset, ..cfg.clone() };
            experiments.insert(key, Experiment::new(sys, &c)?.with_threads(threads));
        }
        let exp = &experiments[&key];
        match nb_axis {
            Some(k) => {
                let ns = &axes[k].1;
                let nmax = ns.iter().copied().fold(0.0, f64::max) as u32;
                let curve = exp.buildup(&p, nmax)?;
                for (i, &n) in ns.iter().enumerate() {
                    idx[k] = i;
                    out[idx[1]][idx[0]] = curve[n as usize - 1];
                }
            }
            None => out[idx[1]][idx[0]] = exp.efficiency(&p)?.efficiency,
        }
    }
    if out.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite efficiency in scan".into()));
    }
    Ok(out)
}

/// Efficiency along one axis with everything else at `base`.
pub fn scan_1d(axis: &Axis, base: &SequenceParams, sys: &SpinSystem, cfg: &SimConfig, threads: usize) -> Result<ScanGrid, Error> {
    axis.validate()?;
    let values = evaluate(&[(axis.scan_param()?, axis.coords())], base, sys, cfg, threads)?;
    Ok(ScanGrid { x: axis.clone(), y: None, values })
}

/// Full Cartesian grid over two axes.
pub fn scan_2d(
    x: &Axis,
    y: &Axis,
    base: &SequenceParams,
    sys: &SpinSystem,
    cfg: &SimConfig,
    threads: usize,
) -> Result<ScanGrid, Error> {
    x.validate()?;
    y.validate()?;
    if x.param == y.param {
        return Err(Error::InvalidInput("x and y scan the same parameter".into()));
    }
    let axes = [(x.scan_param()?, x.coords()), (y.scan_param()?, y.coords())];
    let values = evaluate(&axes, base, sys, cfg, threads)?;
    Ok(ScanGrid { x: x.clone(), y: Some(y.clone()), values })
}
