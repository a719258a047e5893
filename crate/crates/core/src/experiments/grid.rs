use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::output::{format_float, Column, Table};
use crate::error::{Error, Result};
use crate::physics::{rad_to_hz, PhysicalConstants, ScenarioConfig};
use crate::shifts::{quantum_shifts, ShiftResult};

/// Field widths × gap ratios at one velocity. `N = 0` is a π-pulse Rabi
/// zone, `N > 0` a π/2-pulse Ramsey pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub constants: PhysicalConstants,
    pub velocity: f64,
    pub l_values: Vec<f64>,
    pub n_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridCell {
    pub l: f64,
    pub n: f64,
    pub shifts: std::result::Result<ShiftResult, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridResult {
    pub spec: GridSpec,
    /// Row-major: `cells[i * n_values.len() + j]` is `(l_values[i], n_values[j])`.
    pub cells: Vec<GridCell>,
}

pub fn run_grid(spec: &GridSpec) -> Result<GridResult> {
    spec.constants.validate()?;
    if spec.l_values.is_empty() || spec.n_values.is_empty() {
        return Err(Error::InvalidConfig(
            "grid needs at least one l and one N".into(),
        ));
    }
    if spec.n_values.iter().any(|&n| !(n >= 0.0)) {
        return Err(Error::InvalidConfig("gap ratios must be >= 0".into()));
    }
    let configs: Vec<(f64, f64, ScenarioConfig)> = spec
        .l_values
        .iter()
        .flat_map(|&l| spec.n_values.iter().map(move |&n| (l, n)))
        .map(|(l, n)| {
            (
                l,
                n,
                ScenarioConfig::clock(spec.constants, spec.velocity, l, n),
            )
        })
        .collect();
    for (_, _, c) in &configs {
        c.validate()?;
    }
    let cells = configs
        .par_iter()
        .map(|&(l, n, c)| GridCell {
            l,
            n,
            shifts: quantum_shifts(&c).map_err(|e| e.to_string()),
        })
        .collect();
    Ok(GridResult {
        spec: spec.clone(),
        cells,
    })
}

impl GridResult {
    pub fn cell(&self, i: usize, j: usize) -> &GridCell {
        &self.cells[i * self.spec.n_values.len() + j]
    }

    pub fn flagged(&self) -> usize {
        self.cells.iter().filter(|c| c.shifts.is_err()).count()
    }

    fn frac(&self, i: usize, j: usize) -> Option<f64> {
        self.cell(i, j)
            .shifts
            .as_ref()
            .ok()
            .map(|s| s.frac_hh.abs())
    }

    /// Whether |Δ_hh|/ω₀ strictly decreases along increasing l (at each N)
    /// and along increasing N (at each l). Flagged cells are skipped.
    pub fn monotone_decreasing(&self) -> (bool, bool) {
        let (nl, nn) = (self.spec.l_values.len(), self.spec.n_values.len());
        let decreasing = |pairs: Vec<(f64, Option<f64>)>| {
            let mut pts: Vec<(f64, f64)> = pairs
                .into_iter()
                .filter_map(|(x, y)| y.map(|y| (x, y)))
                .collect();
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            pts.windows(2).all(|w| w[1].1 < w[0].1)
        };
        let in_l = (0..nn).all(|j| {
            decreasing(
                (0..nl)
                    .map(|i| (self.spec.l_values[i], self.frac(i, j)))
                    .collect(),
            )
        });
        let in_n = (0..nl).all(|i| {
            decreasing(
                (0..nn)
                    .map(|j| (self.spec.n_values[j], self.frac(i, j)))
                    .collect(),
            )
        });
        (in_l, in_n)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(vec![
            Column::new("field_width_m", "m"),
            Column::new("gap_ratio", "1"),
            Column::new("frac_hh_abs", "1"),
            Column::new("frac_hh", "1"),
            Column::new("delta_hh_rad_s", "rad/s"),
            Column::new("delta_hh_hz", "Hz"),
            Column::new("delta_max_rad_s", "rad/s"),
            Column::new("peak_height", "1"),
            Column::new("status", ""),
        ]);
        let c = &self.spec.constants;
        let (in_l, in_n) = self.monotone_decreasing();
        t.meta("kind", "grid");
        t.meta(
            "generator",
            concat!("coldclock ", env!("CARGO_PKG_VERSION")),
        );
        t.meta("hbar_J_s", format_float(c.hbar));
        t.meta("mass_kg", format_float(c.mass));
        t.meta("omega0_rad_s", format_float(c.omega0));
        t.meta("velocity_m_s", format_float(self.spec.velocity));
        t.meta("pulses", "N=0: rabi pi; N>0: ramsey pi/2");
        t.meta(
            "l_values_m",
            self.spec
                .l_values
                .iter()
                .map(|&x| format_float(x))
                .collect::<Vec<_>>()
                .join(" "),
        );
        t.meta(
            "n_values",
            self.spec
                .n_values
                .iter()
                .map(|&x| format_float(x))
                .collect::<Vec<_>>()
                .join(" "),
        );
        t.meta("monotone_decreasing_in_l", in_l);
        t.meta("monotone_decreasing_in_n", in_n);
        t.meta("flagged_cells", self.flagged());
        for cell in &self.cells {
            let s = cell.shifts.as_ref().ok();
            let get = |f: fn(&ShiftResult) -> f64| s.map(f);
            t.push(vec![
                cell.l.into(),
                cell.n.into(),
                get(|s| s.frac_hh.abs()).into(),
                get(|s| s.frac_hh).into(),
                get(|s| s.delta_hh).into(),
                get(|s| rad_to_hz(s.delta_hh)).into(),
                get(|s| s.delta_max).into(),
                get(|s| s.peak_height).into(),
                match &cell.shifts {
                    Ok(_) => "ok".to_string().into(),
                    Err(e) => format!("flagged: {e}").into(),
                },
            ]);
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_decreases_and_rabi_column_matches() {
        let spec = GridSpec {
            constants: PhysicalConstants::cesium(),
            velocity: 0.05,
            l_values: vec![1e-3, 2e-3],
            n_values: vec![0.0, 2.0, 5.0],
        };
        let g = run_grid(&spec).unwrap();
        assert_eq!(g.flagged(), 0);
        assert_eq!(g.monotone_decreasing(), (true, true));
        let rabi = quantum_shifts(&ScenarioConfig::clock(spec.constants, 0.05, 2e-3, 0.0)).unwrap();
        assert_eq!(g.cell(1, 0).shifts.as_ref().unwrap(), &rabi);
        let ratio = g.cell(1, 2).shifts.as_ref().unwrap().delta_hh
            / g.cell(0, 2).shifts.as_ref().unwrap().delta_hh;
        assert!((ratio / 0.25 - 1.0).abs() < 0.2, "{ratio}");
    }

    #[test]
    fn rejects_negative_gap_ratio() {
        let spec = GridSpec {
            constants: PhysicalConstants::cesium(),
            velocity: 0.05,
            l_values: vec![1e-3],
            n_values: vec![-1.0],
        };
        assert!(run_grid(&spec).is_err());
    }
}
