use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::curve::{linspace, ResonanceCurve};
use super::output::{format_float, scenario_metadata, Column, Table};
use crate::error::{Error, Result};
use crate::model::ModelRegistry;
use crate::physics::{rad_to_hz, Geometry, Pulse, ScenarioConfig};
use crate::shifts::{
    analytic_max_shift_rabi, half_height_estimate, half_height_shift, ShiftResult,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    Delta,
    Velocity,
    FieldWidth,
    GapRatio,
}

impl SweepVariable {
    fn column(self) -> Column {
        match self {
            SweepVariable::Delta => Column::new("delta_rad_s", "rad/s"),
            SweepVariable::Velocity => Column::new("velocity_m_s", "m/s"),
            SweepVariable::FieldWidth => Column::new("field_width_m", "m"),
            SweepVariable::GapRatio => Column::new("gap_ratio", "1"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl SweepRange {
    /// A single point is allowed when `min == max`.
    pub fn validate(&self) -> Result<()> {
        let ok = match self.count {
            0 => false,
            1 => self.min == self.max,
            _ => self.min < self.max,
        };
        if !ok || !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "sweep range needs min < max and count >= 2 (or count = 1 with min = max), got {self:?}"
            )));
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return Err(Error::InvalidConfig("log spacing needs min > 0".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Linear => linspace(self.min, self.max, self.count),
            Spacing::Log => linspace(self.min.ln(), self.max.ln(), self.count)
                .into_iter()
                .map(f64::exp)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepOutputs {
    pub quantum_curve: bool,
    pub scl_curve: bool,
    pub max_shift: bool,
    pub hh_shift: bool,
    pub envelopes: bool,
}

impl Default for SweepOutputs {
    fn default() -> Self {
        Self {
            quantum_curve: true,
            scl_curve: true,
            max_shift: true,
            hh_shift: true,
            envelopes: true,
        }
    }
}

fn default_model() -> String {
    "quantum".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub range: SweepRange,
    pub base: ScenarioConfig,
    #[serde(default)]
    pub outputs: SweepOutputs,
    #[serde(default = "default_model")]
    pub model: String,
}

impl SweepSpec {
    pub fn new(variable: SweepVariable, range: SweepRange, base: ScenarioConfig) -> Self {
        Self {
            variable,
            range,
            base,
            outputs: SweepOutputs::default(),
            model: default_model(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.range.validate()?;
        self.base.validate()?;
        if self.variable == SweepVariable::GapRatio && self.base.geometry != Geometry::Ramsey {
            return Err(Error::InvalidConfig(
                "a gap-ratio sweep needs a Ramsey base scenario".into(),
            ));
        }
        for cfg in self.points() {
            cfg.validate()?;
        }
        Ok(())
    }

    /// Scenario at one value of the swept variable. The pulse condition is
    /// re-resolved at each point; a field-width sweep keeps the gap ratio.
    pub fn scenario_at(&self, value: f64) -> ScenarioConfig {
        let mut cfg = self.base;
        match self.variable {
            SweepVariable::Delta => {}
            SweepVariable::Velocity => cfg.velocity = value,
            SweepVariable::FieldWidth => {
                let n = cfg.gap_ratio();
                cfg.field_width = value;
                cfg.gap = n * value;
            }
            SweepVariable::GapRatio => cfg.gap = value * cfg.field_width,
        }
        cfg
    }

    fn points(&self) -> Vec<ScenarioConfig> {
        if self.variable == SweepVariable::Delta {
            return vec![self.base];
        }
        self.range
            .values()
            .into_iter()
            .map(|v| self.scenario_at(v))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub parameter: f64,
    pub config: ScenarioConfig,
    pub shifts: std::result::Result<ShiftResult, String>,
}

impl SweepRow {
    /// Sine-law prediction for π-pulse Rabi points.
    pub fn analytic_max(&self) -> Option<f64> {
        let c = &self.config;
        (c.geometry == Geometry::Rabi && c.pulse == Pulse::PiPulse)
            .then(|| analytic_max_shift_rabi(c.wavenumber(), c.field_width, &c.constants))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftSweep {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

/// Shifts at every point of a velocity, field-width or gap-ratio sweep.
/// Points are independent and evaluated in parallel; row order follows the
/// sweep order.
pub fn run_shift_sweep(spec: &SweepSpec, registry: &ModelRegistry) -> Result<ShiftSweep> {
    if spec.variable == SweepVariable::Delta {
        return Err(Error::InvalidConfig(
            "a detuning sweep produces curves, not shifts".into(),
        ));
    }
    spec.validate()?;
    if !registry.contains(&spec.model) {
        registry.create(&spec.model, &spec.base)?;
    }
    let values = spec.range.values();
    let rows = values
        .par_iter()
        .map(|&value| {
            let config = spec.scenario_at(value);
            let shifts = registry
                .create(&spec.model, &config)
                .and_then(|m| half_height_shift(m.as_ref()))
                .map_err(|e| e.to_string());
            SweepRow {
                parameter: value,
                config,
                shifts,
            }
        })
        .collect();
    Ok(ShiftSweep {
        spec: spec.clone(),
        rows,
    })
}

impl ShiftSweep {
    pub fn flagged(&self) -> usize {
        self.rows.iter().filter(|r| r.shifts.is_err()).count()
    }

    pub fn to_table(&self) -> Table {
        let o = &self.spec.outputs;
        let mut cols = vec![self.spec.variable.column(), Column::new("kl", "1")];
        if o.max_shift {
            cols.extend([
                Column::new("delta_max_rad_s", "rad/s"),
                Column::new("delta_max_hz", "Hz"),
                Column::new("frac_max", "1"),
                Column::new("frac_max_abs", "1"),
            ]);
        }
        if o.envelopes {
            cols.extend([
                Column::new("envelope_rad_s", "rad/s"),
                Column::new("analytic_max_rad_s", "rad/s"),
                Column::new("hh_estimate_rad_s", "rad/s"),
            ]);
        }
        if o.hh_shift {
            cols.extend([
                Column::new("delta_hh_rad_s", "rad/s"),
                Column::new("delta_hh_hz", "Hz"),
                Column::new("frac_hh", "1"),
                Column::new("frac_hh_abs", "1"),
                Column::new("hh_left_rad_s", "rad/s"),
                Column::new("hh_right_rad_s", "rad/s"),
            ]);
        }
        cols.extend([Column::new("peak_height", "1"), Column::new("status", "")]);
        let mut t = Table::new(cols);
        t.meta("kind", "shift_sweep");
        t.meta("model", &self.spec.model);
        t.meta(
            "variable",
            format!("{:?}", self.spec.variable).to_lowercase(),
        );
        t.meta("range_min", format_float(self.spec.range.min));
        t.meta("range_max", format_float(self.spec.range.max));
        t.meta("range_count", self.spec.range.count);
        t.meta(
            "range_spacing",
            format!("{:?}", self.spec.range.spacing).to_lowercase(),
        );
        scenario_metadata(&mut t, &self.spec.base);
        t.meta("flagged_rows", self.flagged());

        for row in &self.rows {
            let c = &row.config;
            let s = row.shifts.as_ref().ok();
            let get = |f: fn(&ShiftResult) -> f64| s.map(f);
            let mut cells = vec![
                row.parameter.into(),
                (c.wavenumber() * c.field_width).into(),
            ];
            if o.max_shift {
                cells.extend([
                    get(|s| s.delta_max).into(),
                    get(|s| rad_to_hz(s.delta_max)).into(),
                    get(|s| s.frac_max).into(),
                    get(|s| s.frac_max.abs()).into(),
                ]);
            }
            if o.envelopes {
                cells.extend([
                    crate::shifts::envelope(c).into(),
                    row.analytic_max().into(),
                    half_height_estimate(c.field_width, &c.constants).into(),
                ]);
            }
            if o.hh_shift {
                cells.extend([
                    get(|s| s.delta_hh).into(),
                    get(|s| rad_to_hz(s.delta_hh)).into(),
                    get(|s| s.frac_hh).into(),
                    get(|s| s.frac_hh.abs()).into(),
                    get(|s| s.hh_left).into(),
                    get(|s| s.hh_right).into(),
                ]);
            }
            cells.push(get(|s| s.peak_height).into());
            cells.push(match &row.shifts {
                Ok(_) => "ok".into(),
                Err(e) => format!("flagged: {e}").into(),
            });
            t.push(cells);
        }
        t
    }
}

/// Any sweep as a table: detuning sweeps give curves, the others shifts.
/// Returns the table and the number of flagged rows.
pub fn run_sweep(spec: &SweepSpec, registry: &ModelRegistry) -> Result<(Table, usize)> {
    if spec.variable != SweepVariable::Delta {
        let sweep = run_shift_sweep(spec, registry)?;
        return Ok((sweep.to_table(), sweep.flagged()));
    }
    spec.validate()?;
    let deltas = spec.range.values();
    let mut curves = Vec::new();
    if spec.outputs.quantum_curve {
        curves.push((
            "p_quantum",
            ResonanceCurve::sample(registry.create(&spec.model, &spec.base)?.as_ref(), &deltas),
        ));
    }
    if spec.outputs.scl_curve {
        curves.push((
            "p_semiclassical",
            ResonanceCurve::sample(
                registry.create("semiclassical", &spec.base)?.as_ref(),
                &deltas,
            ),
        ));
    }
    let mut cols = vec![
        Column::new("delta_rad_s", "rad/s"),
        Column::new("delta_hz", "Hz"),
    ];
    cols.extend(curves.iter().map(|(name, _)| Column::new(name, "1")));
    cols.push(Column::new("status", ""));
    let mut t = Table::new(cols);
    t.meta("kind", "curve");
    t.meta("model", &spec.model);
    scenario_metadata(&mut t, &spec.base);
    let mut flagged = 0;
    for (i, &d) in deltas.iter().enumerate() {
        let mut cells = vec![d.into(), rad_to_hz(d).into()];
        let mut status = "ok".to_string();
        for (_, curve) in &curves {
            cells.push(curve.p12[i].into());
            if let Some((_, r)) = curve.excluded.iter().find(|(j, _)| *j == i) {
                status = format!("excluded: {r}");
            }
        }
        if status != "ok" {
            flagged += 1;
        }
        cells.push(status.into());
        t.push(cells);
    }
    t.meta("excluded", flagged);
    Ok((t, flagged))
}
