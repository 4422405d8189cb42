//! Experiment configuration: flat key = value text files with CLI overrides.

use std::collections::BTreeMap;
use std::path::Path;

use netcontrol::error::{Error, Result};

/// Named spectral preset: diagonal shift and pair correlation of the ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: String,
    pub center: f64,
    pub rho: f64,
}

impl Preset {
    pub fn by_name(name: &str) -> Option<Preset> {
        let (center, rho) = match name {
            "blue" => (0.0, 0.0),
            "red" => (-2.0, 0.0),
            "yellow" => (2.0, 0.0),
            "violet" => (0.0, 0.5),
            "green" => (0.0, -0.5),
            "cyan" => (0.0, -0.95),
            _ => return None,
        };
        Some(Preset { name: name.to_string(), center, rho })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    /// Full random matrices across spectral presets, random drivers, W_m metrics.
    Fig2,
    /// Same protocol on sparse ER topologies.
    FigS1,
    /// r_w placement vs random on ER / scale-free digraphs, W_m metrics.
    Fig3,
    /// Oscillator ensembles: modal strategies vs random on W_z metrics.
    Fig4,
    /// Swing-equation grid: damping sweep, finite-horizon W_r metrics.
    Fig5,
}

impl ExperimentKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fig2" => Ok(Self::Fig2),
            "figS1" | "figs1" => Ok(Self::FigS1),
            "fig3" => Ok(Self::Fig3),
            "fig4" => Ok(Self::Fig4),
            "fig5" => Ok(Self::Fig5),
            other => Err(Error::invalid(format!(
                "unknown experiment '{other}' (expected fig2|figS1|fig3|fig4|fig5)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Fig2 => "fig2",
            Self::FigS1 => "figS1",
            Self::Fig3 => "fig3",
            Self::Fig4 => "fig4",
            Self::Fig5 => "fig5",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Full,
    Er,
    Sf,
}

/// Complete description of one experiment sweep.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub n: usize,
    pub m_grid: Vec<usize>,
    /// None = infinite horizon.
    pub t_f: Option<f64>,
    pub realizations: usize,
    pub resamples: usize,
    pub seed: u64,
    pub workers: usize,
    pub presets: Vec<Preset>,
    pub topology: Topology,
    pub edge_prob: f64,
    pub gamma_in: f64,
    pub gamma_out: f64,
    pub strategies: Vec<String>,
    /// Random placements drawn per cell; the cell's random value is their median.
    pub random_sets: usize,
    pub mass_mean: f64,
    pub grounding_mean: f64,
    /// fig5: proportional damping scales to sweep.
    pub damping: Vec<f64>,
    /// fig5: synthetic grid size (used when grid_file is absent).
    pub grid_nodes: usize,
    pub grid_edges: usize,
    pub grid_file: Option<String>,
    pub alg2_literal: bool,
    /// 0 disables the per-cell timeout. When enabled, timed-out cells are
    /// reported as skipped — machine-speed dependent, so reproducibility across
    /// hosts is no longer guaranteed.
    pub cell_timeout_secs: u64,
    pub out: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: ExperimentKind::Fig2,
            n: 100,
            m_grid: vec![10],
            t_f: None,
            realizations: 5,
            resamples: 5,
            seed: 1,
            workers: 1,
            presets: ["violet", "blue", "green", "cyan"]
                .iter()
                .map(|s| Preset::by_name(s).unwrap())
                .collect(),
            topology: Topology::Full,
            edge_prob: 0.05,
            // Studied indegree/outdegree tail exponents (3.14 is not pi).
            #[allow(clippy::approx_constant)]
            gamma_in: 3.14,
            gamma_out: 2.87,
            strategies: vec!["rw".into(), "random".into()],
            random_sets: 11,
            mass_mean: 10.0,
            grounding_mean: 1.0,
            damping: vec![1e-3, 1e-2, 1e-1, 1.0],
            grid_nodes: 236,
            grid_edges: 320,
            grid_file: None,
            alg2_literal: false,
            cell_timeout_secs: 0,
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(Error::Parse {
                line: lineno + 1,
                msg: "expected key = value".into(),
            })?;
            self.set(key.trim(), value.trim()).map_err(|e| Error::Parse {
                line: lineno + 1,
                msg: e.to_string(),
            })?;
        }
        Ok(())
    }

    /// Set one option by key; every config key mirrors a CLI flag.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
        where
            T::Err: std::fmt::Display,
        {
            v.parse()
                .map_err(|e| Error::invalid(format!("bad value for {key}: {e}")))
        }
        match key {
            "experiment" => self.experiment = ExperimentKind::parse(value)?,
            "n" => self.n = num(key, value)?,
            "m" => {
                self.m_grid = value
                    .split(',')
                    .map(|t| num::<usize>("m", t.trim()))
                    .collect::<Result<Vec<_>>>()?;
            }
            "tf" => {
                self.t_f = if value == "infinite" {
                    None
                } else {
                    Some(num(key, value)?)
                };
            }
            "realizations" => self.realizations = num(key, value)?,
            "resamples" => self.resamples = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "workers" => self.workers = num(key, value)?,
            "presets" => {
                self.presets = value
                    .split(',')
                    .map(|t| {
                        let t = t.trim();
                        Preset::by_name(t)
                            .ok_or_else(|| Error::invalid(format!("unknown preset '{t}'")))
                    })
                    .collect::<Result<Vec<_>>>()?;
            }
            k if k.starts_with("preset.") => {
                // preset.NAME = center,rho
                let name = k.trim_start_matches("preset.").to_string();
                let (c, r) = value
                    .split_once(',')
                    .ok_or_else(|| Error::invalid("custom preset needs 'center,rho'"))?;
                let preset = Preset {
                    name,
                    center: num("center", c.trim())?,
                    rho: num("rho", r.trim())?,
                };
                self.presets.retain(|p| p.name != preset.name);
                self.presets.push(preset);
            }
            "topology" => {
                self.topology = match value {
                    "full" => Topology::Full,
                    "er" => Topology::Er,
                    "sf" => Topology::Sf,
                    other => return Err(Error::invalid(format!("unknown topology '{other}'"))),
                };
            }
            "p" => self.edge_prob = num(key, value)?,
            "gamma_in" => self.gamma_in = num(key, value)?,
            "gamma_out" => self.gamma_out = num(key, value)?,
            "strategies" => {
                self.strategies = value.split(',').map(|s| s.trim().to_string()).collect();
            }
            "random_sets" => self.random_sets = num(key, value)?,
            "mass_mean" => self.mass_mean = num(key, value)?,
            "grounding_mean" => self.grounding_mean = num(key, value)?,
            "damping" => {
                self.damping = value
                    .split(',')
                    .map(|t| num::<f64>("damping", t.trim()))
                    .collect::<Result<Vec<_>>>()?;
            }
            "grid_nodes" => self.grid_nodes = num(key, value)?,
            "grid_edges" => self.grid_edges = num(key, value)?,
            "grid_file" => self.grid_file = Some(value.to_string()),
            "alg2_literal" => self.alg2_literal = num(key, value)?,
            "cell_timeout_secs" => self.cell_timeout_secs = num(key, value)?,
            "out" => self.out = Some(value.to_string()),
            other => return Err(Error::invalid(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 || self.resamples == 0 {
            return Err(Error::invalid("realizations and resamples must be >= 1"));
        }
        if self.m_grid.is_empty() {
            return Err(Error::invalid("m grid is empty"));
        }
        for &m in &self.m_grid {
            if m == 0 || m > self.n {
                return Err(Error::invalid(format!("m={m} outside [1, n={}]", self.n)));
            }
        }
        if self.workers == 0 {
            return Err(Error::invalid("workers must be >= 1"));
        }
        if self.strategies.is_empty() {
            return Err(Error::invalid("no strategies configured"));
        }
        Ok(())
    }

    /// Canonical key/value view (used to echo the effective config).
    pub fn describe(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("experiment".into(), self.experiment.name().into());
        m.insert("n".into(), self.n.to_string());
        m.insert(
            "m".into(),
            self.m_grid.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
        );
        m.insert(
            "tf".into(),
            self.t_f.map_or("infinite".into(), |t| t.to_string()),
        );
        m.insert("realizations".into(), self.realizations.to_string());
        m.insert("resamples".into(), self.resamples.to_string());
        m.insert("seed".into(), self.seed.to_string());
        m.insert(
            "presets".into(),
            self.presets
                .iter()
                .map(|p| format!("{}({},{})", p.name, p.center, p.rho))
                .collect::<Vec<_>>()
                .join(","),
        );
        m.insert("strategies".into(), self.strategies.join(","));
        m
    }
}
