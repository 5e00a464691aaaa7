//! Parameter sweeps over `(g, theta)` with deterministic CSV output and
//! JSON run configuration.
//!
//! Rows are emitted in row-major order (`g` outer, `theta` inner), each
//! carrying the four composite phases and, optionally, per-label
//! subsystem phase groups. Phases are exported in units of pi (range
//! `[0, 2)`) unless the config asks for radians. Reals are rendered with
//! 12 significant digits and LF line endings, so rerunning a config
//! reproduces the file byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Deserialize;
use spinphase_core::{
    berry_phase, berry_phase_loop, canonical_branch, circle_distance, subsystem_phases,
    EigenLabel, Error as CoreError, LoopPath, ModelParams, PhaseMethod,
};

/// Grid value substituted for a requested `g = 0` so label-tracked rows
/// and log-scale plots stay well defined; such rows carry a warning.
const G_ZERO_SUBSTITUTE: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("config: {0}")]
    Config(String),
    #[error("i/o on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("sweep point g={g} theta={theta} label={label}: {source}")]
    Point {
        g: f64,
        theta: f64,
        label: usize,
        #[source]
        source: CoreError,
    },
}

impl SweepError {
    /// Config and i/o problems are validation-class; point failures are
    /// computational.
    pub fn is_validation(&self) -> bool {
        match self {
            SweepError::Config(_) | SweepError::Io { .. } => true,
            SweepError::Point { source, .. } => source.is_validation(),
        }
    }
}

fn default_n_points() -> usize {
    LoopPath::DEFAULT_SWEEP
}

fn default_method() -> String {
    "loop".into()
}

/// Flat JSON schema of a sweep run. Unknown keys are rejected;
/// `n_points`, `method`, `include_subsystems` and `radians` are optional.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub g_min: f64,
    pub g_max: f64,
    pub g_steps: usize,
    pub theta_min: f64,
    pub theta_max: f64,
    pub theta_steps: usize,
    pub labels: Vec<usize>,
    #[serde(default = "default_n_points")]
    pub n_points: usize,
    #[serde(default = "default_method")]
    pub method: String,
    #[serde(default)]
    pub include_subsystems: bool,
    /// Export phases in radians (`[0, 2 pi)`) instead of units of pi.
    #[serde(default)]
    pub radians: bool,
    pub output_path: String,
}

impl SweepConfig {
    /// Validates ranges, steps, labels and method.
    pub fn validate(&self) -> Result<(), SweepError> {
        let axis = |name: &str, min: f64, max: f64, steps: usize| {
            if !(min.is_finite() && max.is_finite()) || min > max {
                return Err(SweepError::Config(format!(
                    "{name}: range [{min}, {max}] must be finite and ordered"
                )));
            }
            if steps == 0 || (steps == 1 && min != max) || (steps >= 2 && min == max) {
                return Err(SweepError::Config(format!(
                    "{name}: {steps} step(s) over [{min}, {max}]; a swept axis needs >= 2, \
                     a fixed axis exactly 1"
                )));
            }
            Ok(())
        };
        axis("g", self.g_min, self.g_max, self.g_steps)?;
        axis("theta", self.theta_min, self.theta_max, self.theta_steps)?;
        if self.g_min < 0.0 {
            return Err(SweepError::Config(format!("g_min: must be >= 0, got {}", self.g_min)));
        }
        // theta endpoints must themselves be model-valid
        for (name, v) in [("theta_min", self.theta_min), ("theta_max", self.theta_max)] {
            ModelParams::new(0.0, v)
                .map_err(|e| SweepError::Config(format!("{name}: {e}")))?;
        }
        if self.labels.is_empty() {
            return Err(SweepError::Config("labels: must not be empty".into()));
        }
        let mut seen = [false; 5];
        for &l in &self.labels {
            if !(1..=4).contains(&l) {
                return Err(SweepError::Config(format!("labels: {l} outside 1..=4")));
            }
            if seen[l] {
                return Err(SweepError::Config(format!("labels: {l} listed twice")));
            }
            seen[l] = true;
        }
        LoopPath::new(self.n_points)
            .map_err(|e| SweepError::Config(format!("n_points: {e}")))?;
        parse_method(&self.method)?;
        if self.output_path.is_empty() {
            return Err(SweepError::Config("output_path: must not be empty".into()));
        }
        Ok(())
    }

    fn grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
        if steps == 1 {
            return vec![min];
        }
        (0..steps)
            .map(|k| min + (max - min) * k as f64 / (steps - 1) as f64)
            .collect()
    }

    pub fn g_values(&self) -> Vec<f64> {
        Self::grid(self.g_min, self.g_max, self.g_steps)
    }

    pub fn theta_values(&self) -> Vec<f64> {
        Self::grid(self.theta_min, self.theta_max, self.theta_steps)
    }
}

pub fn parse_method(tag: &str) -> Result<PhaseMethod, SweepError> {
    match tag {
        "loop" => Ok(PhaseMethod::Loop),
        "closed" => Ok(PhaseMethod::ClosedForm),
        "integral" => Ok(PhaseMethod::ConnectionIntegral),
        other => Err(SweepError::Config(format!(
            "method: expected loop|closed|integral, got {other}"
        ))),
    }
}

/// Subsystem phase columns for one label at one grid point, in output
/// units.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsystemColumns {
    pub label: usize,
    pub gamma_sub1: f64,
    pub gamma_sub2: f64,
    pub gamma_sum: f64,
    /// Circle distance between `gamma_sum` and the composite loop phase
    /// on the same path, in output units.
    pub additivity_residual: f64,
}

/// One grid point of a finished sweep, in output units.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub g: f64,
    pub theta: f64,
    pub gamma: [f64; 4],
    pub subsystems: Vec<SubsystemColumns>,
    pub warning: Option<&'static str>,
}

/// Loads and validates a sweep config from a JSON file.
pub fn load_config(path: &Path) -> Result<SweepConfig, SweepError> {
    let text = fs::read_to_string(path).map_err(|source| SweepError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let cfg: SweepConfig =
        serde_json::from_str(&text).map_err(|e| SweepError::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Runs the sweep: rows in row-major order (`g` outer, `theta` inner),
/// deterministic. Any point-level failure aborts with the offending
/// `(g, theta, label)`.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>, SweepError> {
    config.validate()?;
    let method = parse_method(&config.method)?;
    let path = LoopPath::new(config.n_points).expect("validated");
    let unit = if config.radians { 1.0 } else { std::f64::consts::PI };

    let mut rows = Vec::new();
    for &g_req in &config.g_values() {
        let (g, warning) = if g_req == 0.0 {
            (G_ZERO_SUBSTITUTE, Some("g0_substituted"))
        } else {
            (g_req, None)
        };
        for &theta in &config.theta_values() {
            let at = |label: usize, e: CoreError| SweepError::Point { g, theta, label, source: e };
            let params = ModelParams::new(g, theta).map_err(|e| at(0, e))?;

            let mut gamma = [0.0; 4];
            for label in EigenLabel::ALL {
                let r = berry_phase(&params, label, method, &path)
                    .map_err(|e| at(label.index(), e))?;
                gamma[label.index() - 1] = r.value / unit;
            }

            let mut subsystems = Vec::new();
            if config.include_subsystems {
                for &l in &config.labels {
                    let label = EigenLabel::from_index(l).expect("validated");
                    let subs =
                        subsystem_phases(&params, label, &path).map_err(|e| at(l, e))?;
                    let composite =
                        berry_phase_loop(&params, label, &path).map_err(|e| at(l, e))?;
                    let sum = canonical_branch(subs.gamma_sub1.value + subs.gamma_sub2.value);
                    subsystems.push(SubsystemColumns {
                        label: l,
                        gamma_sub1: subs.gamma_sub1.value / unit,
                        gamma_sub2: subs.gamma_sub2.value / unit,
                        gamma_sum: sum / unit,
                        additivity_residual: circle_distance(sum, composite.value) / unit,
                    });
                }
            }

            rows.push(SweepRow { g, theta, gamma, subsystems, warning });
        }
    }
    Ok(rows)
}

/// Renders rows to CSV text: header naming every column, one row per
/// line, 12 significant digits, LF endings.
pub fn render_csv(rows: &[SweepRow]) -> Result<String, SweepError> {
    let first = rows
        .first()
        .ok_or_else(|| SweepError::Config("no rows to write".into()))?;
    let any_warning = rows.iter().any(|r| r.warning.is_some());

    let mut out = String::new();
    out.push_str("g,theta,gamma_1,gamma_2,gamma_3,gamma_4");
    for s in &first.subsystems {
        let l = s.label;
        let _ = write!(
            out,
            ",gamma_sub1_l{l},gamma_sub2_l{l},gamma_sum_l{l},add_residual_l{l}"
        );
    }
    if any_warning {
        out.push_str(",warning");
    }
    out.push('\n');

    for row in rows {
        let _ = write!(out, "{}", fmt_sig(row.g));
        let _ = write!(out, ",{}", fmt_sig(row.theta));
        for v in row.gamma {
            let _ = write!(out, ",{}", fmt_sig(v));
        }
        for s in &row.subsystems {
            let _ = write!(
                out,
                ",{},{},{},{}",
                fmt_sig(s.gamma_sub1),
                fmt_sig(s.gamma_sub2),
                fmt_sig(s.gamma_sum),
                fmt_sig(s.additivity_residual)
            );
        }
        if any_warning {
            out.push(',');
            out.push_str(row.warning.unwrap_or(""));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Writes rows to `path` as CSV. Byte-identical across reruns of the
/// same sweep.
pub fn write_csv(rows: &[SweepRow], path: &Path) -> Result<(), SweepError> {
    let text = render_csv(rows)?;
    fs::write(path, text).map_err(|source| SweepError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// 12 significant digits.
fn fmt_sig(v: f64) -> String {
    format!("{v:.11e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn base_config() -> SweepConfig {
        SweepConfig {
            g_min: 1.0,
            g_max: 1.0,
            g_steps: 1,
            theta_min: PI / 4.0,
            theta_max: PI / 4.0,
            theta_steps: 1,
            labels: vec![1, 2, 3, 4],
            n_points: 256,
            method: "loop".into(),
            include_subsystems: false,
            radians: false,
            output_path: "out.csv".into(),
        }
    }

    #[test]
    fn single_point_matches_direct_calls() {
        let cfg = base_config();
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 1);
        let params = ModelParams::new(1.0, PI / 4.0).unwrap();
        let path = LoopPath::new(256).unwrap();
        for label in EigenLabel::ALL {
            let direct = berry_phase_loop(&params, label, &path).unwrap().value / PI;
            assert_eq!(rows[0].gamma[label.index() - 1], direct);
        }
    }

    #[test]
    fn row_major_order_and_determinism() {
        let mut cfg = base_config();
        cfg.g_min = 0.5;
        cfg.g_max = 1.5;
        cfg.g_steps = 3;
        cfg.theta_min = 0.6;
        cfg.theta_max = 1.2;
        cfg.theta_steps = 2;
        cfg.method = "closed".into();
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 6);
        // g outer, theta inner
        assert_eq!((rows[0].g, rows[0].theta), (0.5, 0.6));
        assert_eq!((rows[1].g, rows[1].theta), (0.5, 1.2));
        assert_eq!((rows[2].g, rows[2].theta), (1.0, 0.6));
        let again = run_sweep(&cfg).unwrap();
        assert_eq!(rows, again);
    }

    #[test]
    fn phases_stay_in_two_pi_units_of_pi() {
        let mut cfg = base_config();
        cfg.g_min = 0.0;
        cfg.g_max = 25.0;
        cfg.g_steps = 6;
        cfg.method = "closed".into();
        let rows = run_sweep(&cfg).unwrap();
        for row in &rows {
            for v in row.gamma {
                assert!((0.0..2.0).contains(&v), "{v}");
            }
        }
        // g = 0 substituted and flagged
        assert_eq!(rows[0].g, 1e-9);
        assert_eq!(rows[0].warning, Some("g0_substituted"));
        // large-g rows hug 0 or 2 (units of pi) at theta = pi/4
        for row in rows.iter().filter(|r| r.g > 20.0) {
            for v in row.gamma {
                assert!(!(0.15..=1.85).contains(&v), "g={} gamma={v}", row.g);
            }
        }
    }

    #[test]
    fn subsystem_sum_tracks_composite() {
        let mut cfg = base_config();
        cfg.include_subsystems = true;
        cfg.n_points = 512;
        let rows = run_sweep(&cfg).unwrap();
        for s in &rows[0].subsystems {
            let composite = rows[0].gamma[s.label - 1];
            let d = (s.gamma_sum - composite).abs().min(2.0 - (s.gamma_sum - composite).abs());
            assert!(d <= 1e-4, "label {}: {d}", s.label);
            assert!(s.additivity_residual <= 1e-4);
        }
    }

    #[test]
    fn csv_shape_and_roundtrip() {
        let cfg = base_config();
        let rows = run_sweep(&cfg).unwrap();
        let text = render_csv(&rows).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "g,theta,gamma_1,gamma_2,gamma_3,gamma_4");
        assert!(!text.contains('\r'));
        // round-trip at rendered precision
        let fields: Vec<f64> = lines[1].split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields[0], 1.0);
        for (k, v) in fields[2..].iter().enumerate() {
            let orig = rows[0].gamma[k];
            assert!((v - orig).abs() <= 1e-11 * orig.abs().max(1.0));
        }
    }

    #[test]
    fn csv_subsystem_header_names_labels() {
        let mut cfg = base_config();
        cfg.include_subsystems = true;
        cfg.labels = vec![1, 3];
        let rows = run_sweep(&cfg).unwrap();
        let text = render_csv(&rows).unwrap();
        let header = text.lines().next().unwrap();
        assert_eq!(
            header,
            "g,theta,gamma_1,gamma_2,gamma_3,gamma_4,\
             gamma_sub1_l1,gamma_sub2_l1,gamma_sum_l1,add_residual_l1,\
             gamma_sub1_l3,gamma_sub2_l3,gamma_sum_l3,add_residual_l3"
        );
    }

    #[test]
    fn config_validation_rejects_bad_axes() {
        let mut cfg = base_config();
        cfg.theta_min = 0.0;
        cfg.theta_max = 0.0;
        assert!(matches!(cfg.validate(), Err(SweepError::Config(_))));

        let mut cfg = base_config();
        cfg.g_steps = 2; // fixed axis with 2 steps
        assert!(cfg.validate().is_err());

        let mut cfg = base_config();
        cfg.labels = vec![5];
        assert!(cfg.validate().is_err());

        let mut cfg = base_config();
        cfg.method = "simpson".into();
        assert!(cfg.validate().is_err());

        let mut cfg = base_config();
        cfg.n_points = 8;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn write_csv_surfaces_path_on_io_failure() {
        let rows = run_sweep(&base_config()).unwrap();
        let err = write_csv(&rows, Path::new("/nonexistent_dir_xyz/out.csv")).unwrap_err();
        assert!(format!("{err}").contains("/nonexistent_dir_xyz/out.csv"));
    }

    #[test]
    fn load_config_parses_minimal_and_rejects_unknown_keys() {
        let dir = std::env::temp_dir();
        let ok = dir.join("spinphase_cfg_ok.json");
        std::fs::write(
            &ok,
            r#"{"g_min": 1.0, "g_max": 1.0, "g_steps": 1,
                "theta_min": 0.6, "theta_max": 1.2, "theta_steps": 2,
                "labels": [1], "output_path": "x.csv"}"#,
        )
        .unwrap();
        let cfg = load_config(&ok).unwrap();
        assert_eq!(cfg.n_points, 256);
        assert_eq!(cfg.method, "loop");
        assert!(!cfg.include_subsystems);

        let bad = dir.join("spinphase_cfg_bad.json");
        std::fs::write(&bad, r#"{"g_min": 0.0, "unknown_knob": 3}"#).unwrap();
        let err = load_config(&bad).unwrap_err();
        assert!(format!("{err}").contains("unknown_knob"));

        let bad_theta = dir.join("spinphase_cfg_badtheta.json");
        std::fs::write(
            &bad_theta,
            r#"{"g_min": 1.0, "g_max": 1.0, "g_steps": 1,
                "theta_min": 0.0, "theta_max": 1.2, "theta_steps": 2,
                "labels": [1], "output_path": "x.csv"}"#,
        )
        .unwrap();
        let err = load_config(&bad_theta).unwrap_err();
        assert!(format!("{err}").contains("theta"));
    }
}
