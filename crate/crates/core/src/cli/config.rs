use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::norms::MixedNormSpec;
use crate::operators::TrigPoly;

/// Names accepted by the `scenario` key, in listing order.
pub const SCENARIOS: [&str; 6] = ["bump-scaling", "sharpness", "dispersion", "random-sweep", "energy-drift", "invariants"];

/// Variable coefficients for the energy-drift scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableCoefficients {
    pub rho: TrigPoly,
    pub a: Vec<Vec<TrigPoly>>,
}

/// Fully validated scenario parameters with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scenario", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Scenario {
    BumpScaling {
        q: f64,
        lambdas: Vec<f64>,
        nodes_per_lambda: usize,
        tolerance: f64,
        min_r_squared: f64,
    },
    Sharpness {
        p: f64,
        q: f64,
        s_values: Vec<f64>,
        lambdas: Vec<f64>,
        nodes_per_lambda: usize,
        tolerance: f64,
    },
    Dispersion {
        h: f64,
        alpha: f64,
        time_points: usize,
        signs: Vec<Vec<i8>>,
        tolerance: f64,
        stability: f64,
    },
    RandomSweep {
        p: f64,
        q: f64,
        s: f64,
        blocks: Vec<u32>,
        trials: usize,
        signs: Vec<Vec<i8>>,
        max_ratio: f64,
        time_samples: usize,
        rel_tol: f64,
    },
    EnergyDrift {
        signs: Vec<Vec<i8>>,
        s_values: Vec<f64>,
        times: Vec<f64>,
        tolerance: f64,
        cutoff: usize,
        variable: Option<VariableCoefficients>,
    },
    Invariants {
        mc_samples: usize,
        mc_fields: usize,
        translations: usize,
        cutoff: usize,
        tolerance: f64,
    },
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::BumpScaling { .. } => SCENARIOS[0],
            Scenario::Sharpness { .. } => SCENARIOS[1],
            Scenario::Dispersion { .. } => SCENARIOS[2],
            Scenario::RandomSweep { .. } => SCENARIOS[3],
            Scenario::EnergyDrift { .. } => SCENARIOS[4],
            Scenario::Invariants { .. } => SCENARIOS[5],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub seed: u64,
    /// Output directory named in the file; the command line may override it.
    pub out: Option<PathBuf>,
}

/// Every key any scenario understands.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[allow(dead_code)] // read from the raw map before deserializing
    scenario: Option<String>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    p: Option<f64>,
    q: Option<f64>,
    s: Option<f64>,
    s_values: Option<Vec<f64>>,
    lambdas: Option<Vec<f64>>,
    nodes_per_lambda: Option<usize>,
    tolerance: Option<f64>,
    min_r_squared: Option<f64>,
    h: Option<f64>,
    alpha: Option<f64>,
    time_points: Option<usize>,
    stability: Option<f64>,
    signs: Option<Vec<Vec<i8>>>,
    blocks: Option<Vec<u32>>,
    trials: Option<usize>,
    max_ratio: Option<f64>,
    time_samples: Option<usize>,
    rel_tol: Option<f64>,
    times: Option<Vec<f64>>,
    cutoff: Option<usize>,
    variable: Option<VariableCoefficients>,
    mc_samples: Option<usize>,
    mc_fields: Option<usize>,
    translations: Option<usize>,
}

fn allowed_keys(scenario: &str) -> &'static [&'static str] {
    match scenario {
        "bump-scaling" => &["q", "lambdas", "nodes_per_lambda", "tolerance", "min_r_squared"],
        "sharpness" => &["p", "q", "s", "s_values", "lambdas", "nodes_per_lambda", "tolerance"],
        "dispersion" => &["h", "alpha", "time_points", "signs", "tolerance", "stability"],
        "random-sweep" => &["p", "q", "s", "blocks", "trials", "signs", "max_ratio", "time_samples", "rel_tol"],
        "energy-drift" => &["signs", "s_values", "times", "tolerance", "cutoff", "variable"],
        "invariants" => &["mc_samples", "mc_fields", "translations", "cutoff", "tolerance"],
        _ => &[],
    }
}

fn default_lambdas() -> Vec<f64> {
    (3..=8).map(|e| 2f64.powi(e)).collect()
}

struct Checker(Vec<String>);

impl Checker {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.0.push(msg());
        }
    }

    fn exponent(&mut self, name: &str, v: f64) {
        self.check(v.is_infinite() && v > 0.0 || (v.is_finite() && v >= 2.0), || format!("{name} = {v} must be >= 2"));
    }

    fn positive(&mut self, name: &str, v: f64) {
        self.check(v.is_finite() && v > 0.0, || format!("{name} = {v} must be positive"));
    }

    fn scaling_grid(&mut self, name: &str, xs: &[f64]) {
        self.check(xs.len() >= 4, || {
            format!("{name} has {} entries; a log-log fit needs at least 3 and a scaling experiment 4", xs.len())
        });
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(0.0, f64::max);
        self.check(xs.len() < 4 || hi >= 4.0 * lo, || format!("{name} must span at least two octaves"));
        let mut sorted = xs.to_vec();
        sorted.sort_by(f64::total_cmp);
        sorted.dedup();
        self.check(sorted.len() == xs.len(), || format!("{name} has repeated entries"));
    }

    fn sign_patterns(&mut self, signs: &[Vec<i8>]) {
        self.check(!signs.is_empty(), || "signs must list at least one pattern".into());
        for s in signs {
            self.check(!s.is_empty() && s.len() <= 3, || format!("sign pattern {s:?} must have 1 to 3 entries"));
            self.check(s.iter().all(|v| v.abs() == 1), || format!("sign pattern {s:?} may only hold +1 and -1"));
        }
    }
}

/// Parses and validates a configuration document. Syntax errors carry the
/// line and column; semantic errors are collected and reported together.
pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let Value::Object(map) = value else {
        return Err(Error::Parse("configuration must be a JSON object".into()));
    };
    let mut errs = Checker(Vec::new());
    let scenario = match map.get("scenario") {
        Some(Value::String(s)) if SCENARIOS.contains(&s.as_str()) => s.clone(),
        Some(Value::String(s)) => {
            return Err(Error::Config(vec![format!(
                "unknown scenario '{s}'; expected one of {}",
                SCENARIOS.join(", ")
            )]))
        }
        Some(_) => return Err(Error::Config(vec!["scenario must be a string".into()])),
        None => return Err(Error::Config(vec!["missing key 'scenario'".into()])),
    };
    let allowed = allowed_keys(&scenario);
    for key in map.keys() {
        let common = ["scenario", "seed", "out"].contains(&key.as_str());
        if !common && !allowed.contains(&key.as_str()) {
            errs.0.push(format!("key '{key}' is not used by scenario '{scenario}'"));
        }
    }
    let raw: RawConfig = match field_errors(&map) {
        Ok(raw) => raw,
        Err(Error::Config(mut typed)) => {
            errs.0.append(&mut typed);
            return Err(Error::Config(errs.0));
        }
        Err(e) => return Err(e),
    };
    let scenario = build(&scenario, &raw, &mut errs);
    if !errs.0.is_empty() {
        return Err(Error::Config(errs.0));
    }
    Ok(RunConfig {
        scenario: scenario.expect("validated"),
        seed: raw.seed.unwrap_or(0),
        out: raw.out,
    })
}

/// Deserializes field by field so that every ill-typed key is reported.
fn field_errors(map: &Map<String, Value>) -> Result<RawConfig> {
    let mut problems = Vec::new();
    for (k, v) in map {
        let mut single = Map::new();
        single.insert(k.clone(), v.clone());
        if let Err(e) = serde_json::from_value::<RawConfig>(Value::Object(single)) {
            if !e.to_string().contains("unknown field") {
                problems.push(format!("field '{k}': {e}"));
            }
        }
    }
    if !problems.is_empty() {
        return Err(Error::Config(problems));
    }
    let known: Map<String, Value> = map
        .iter()
        .filter(|(k, _)| serde_json::from_value::<RawConfig>(Value::Object(Map::from_iter([((*k).clone(), Value::Null)]))).is_ok())
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    serde_json::from_value(Value::Object(known)).map_err(|e| Error::Parse(e.to_string()))
}

fn build(scenario: &str, r: &RawConfig, c: &mut Checker) -> Option<Scenario> {
    let out = match scenario {
        "bump-scaling" => {
            let q = r.q.unwrap_or(4.0);
            let lambdas = r.lambdas.clone().unwrap_or_else(default_lambdas);
            let nodes = r.nodes_per_lambda.unwrap_or(1024);
            c.check(q.is_finite() && q >= 1.0, || format!("q = {q} must be finite and >= 1"));
            c.scaling_grid("lambdas", &lambdas);
            c.check(lambdas.iter().all(|l| *l >= 1.0), || "lambdas must be >= 1".into());
            c.check(nodes >= crate::experiments::MIN_NODES_PER_LAMBDA, || {
                format!("nodes_per_lambda = {nodes} is below {}", crate::experiments::MIN_NODES_PER_LAMBDA)
            });
            let tolerance = r.tolerance.unwrap_or(0.05);
            c.positive("tolerance", tolerance);
            let min_r_squared = r.min_r_squared.unwrap_or(0.999);
            c.check((0.0..=1.0).contains(&min_r_squared), || "min_r_squared must lie in [0, 1]".into());
            Scenario::BumpScaling {
                q,
                lambdas,
                nodes_per_lambda: nodes,
                tolerance,
                min_r_squared,
            }
        }
        "sharpness" => {
            let p = r.p.unwrap_or(2.0);
            let q = r.q.unwrap_or(3.0);
            c.exponent("p", p);
            c.exponent("q", q);
            c.check(q.is_finite(), || "q must be finite for the stationary family".into());
            let s_values = match (&r.s, &r.s_values) {
                (Some(_), Some(_)) => {
                    c.0.push("give either s or s_values, not both".into());
                    Vec::new()
                }
                (Some(s), None) => vec![*s],
                (None, Some(v)) => v.clone(),
                (None, None) => vec![0.0, 0.25, 0.5],
            };
            c.check(!s_values.is_empty() || r.s.is_some(), || "s_values must not be empty".into());
            for s in &s_values {
                c.check((0.0..=2.0).contains(s), || format!("s = {s} must lie in [0, 2]"));
            }
            let lambdas = r.lambdas.clone().unwrap_or_else(default_lambdas);
            c.scaling_grid("lambdas", &lambdas);
            c.check(lambdas.iter().all(|l| *l >= 1.0), || "lambdas must be >= 1".into());
            let nodes = r.nodes_per_lambda.unwrap_or(1024);
            c.check(nodes >= crate::experiments::MIN_NODES_PER_LAMBDA, || {
                format!("nodes_per_lambda = {nodes} is below {}", crate::experiments::MIN_NODES_PER_LAMBDA)
            });
            let tolerance = r.tolerance.unwrap_or(0.05);
            c.positive("tolerance", tolerance);
            Scenario::Sharpness {
                p,
                q,
                s_values,
                lambdas,
                nodes_per_lambda: nodes,
                tolerance,
            }
        }
        "dispersion" => {
            let h = r.h.unwrap_or(1.0 / 128.0);
            let j = -h.log2();
            c.check(h > 0.0 && j >= 4.0 && (j - j.round()).abs() < 1e-12 && j <= 10.0, || {
                format!("h = {h} must be 2^-j with 4 <= j <= 10")
            });
            let alpha = r.alpha.unwrap_or(0.5);
            c.check(alpha > 0.0 && 4.0 * alpha < std::f64::consts::PI, || {
                format!("alpha = {alpha} must lie in (0, pi/4)")
            });
            let time_points = r.time_points.unwrap_or(21);
            c.check(time_points >= 4, || "time_points must be at least 4".into());
            let signs = r.signs.clone().unwrap_or_else(|| vec![vec![1, -1], vec![1, 1]]);
            c.sign_patterns(&signs);
            c.check(signs.iter().all(|s| s.len() == 2), || "dispersion runs on the two-torus".into());
            let tolerance = r.tolerance.unwrap_or(0.15);
            c.positive("tolerance", tolerance);
            let stability = r.stability.unwrap_or(0.05);
            c.positive("stability", stability);
            Scenario::Dispersion {
                h,
                alpha,
                time_points,
                signs,
                tolerance,
                stability,
            }
        }
        "random-sweep" => {
            let p = r.p.unwrap_or(6.0);
            let q = r.q.unwrap_or(3.0);
            c.exponent("p", p);
            c.exponent("q", q);
            let s = r.s.unwrap_or(1.0 / p);
            c.check(s.is_finite() && s >= 0.0, || format!("s = {s} must be >= 0"));
            let blocks = r.blocks.clone().unwrap_or_else(|| (2..=6).collect());
            let params: Vec<f64> = blocks.iter().map(|j| 2f64.powi(*j as i32)).collect();
            c.scaling_grid("blocks", &params);
            c.check(blocks.iter().all(|j| (1..=8).contains(j)), || "blocks must lie in 1..=8".into());
            let trials = r.trials.unwrap_or(16);
            c.check(trials >= 8, || format!("trials = {trials} must be at least 8"));
            let signs = r.signs.clone().unwrap_or_else(|| vec![vec![1, 1], vec![1, -1]]);
            c.sign_patterns(&signs);
            let max_ratio = r.max_ratio.unwrap_or(2.0);
            c.check(max_ratio >= 1.0, || "max_ratio must be >= 1".into());
            let defaults = MixedNormSpec::new(p, q);
            let time_samples = r.time_samples.unwrap_or(defaults.time_samples);
            c.check(time_samples >= 1, || "time_samples must be positive".into());
            let rel_tol = r.rel_tol.unwrap_or(defaults.rel_tol);
            c.positive("rel_tol", rel_tol);
            Scenario::RandomSweep {
                p,
                q,
                s,
                blocks,
                trials,
                signs,
                max_ratio,
                time_samples,
                rel_tol,
            }
        }
        "energy-drift" => {
            let signs = r.signs.clone().unwrap_or_else(|| vec![vec![1, 1], vec![1, -1]]);
            c.sign_patterns(&signs);
            let s_values = r.s_values.clone().unwrap_or_else(|| vec![0.0, 0.5, 1.0]);
            c.check(!s_values.is_empty(), || "s_values must not be empty".into());
            let times = r.times.clone().unwrap_or_else(|| vec![0.1, 0.5, 1.0]);
            c.check(!times.is_empty() && times.iter().all(|t| t.is_finite()), || "times must be finite and non-empty".into());
            let tolerance = r.tolerance.unwrap_or(1e-12);
            c.positive("tolerance", tolerance);
            let cutoff = r.cutoff.unwrap_or(8);
            c.check(cutoff >= 1, || "cutoff must be at least 1".into());
            if let Some(v) = &r.variable {
                let d = v.a.len();
                if let Err(e) = crate::operators::OperatorSpec::variable_torus(d, v.rho.clone(), v.a.clone()) {
                    c.0.push(format!("variable: {e}"));
                } else {
                    let size = (2 * cutoff + 1).checked_pow(d as u32).unwrap_or(usize::MAX);
                    c.check(size <= crate::operators::MAX_BASIS, || {
                        format!("cutoff {cutoff} in dimension {d} exceeds the basis cap {}", crate::operators::MAX_BASIS)
                    });
                }
            }
            Scenario::EnergyDrift {
                signs,
                s_values,
                times,
                tolerance,
                cutoff,
                variable: r.variable.clone(),
            }
        }
        "invariants" => {
            let mc_samples = r.mc_samples.unwrap_or(1_000_000);
            c.check(mc_samples >= 1000, || "mc_samples must be at least 1000".into());
            let mc_fields = r.mc_fields.unwrap_or(5);
            c.check(mc_fields >= 1, || "mc_fields must be at least 1".into());
            let translations = r.translations.unwrap_or(100);
            c.check(translations >= 1, || "translations must be at least 1".into());
            let cutoff = r.cutoff.unwrap_or(6);
            c.check((1..=10).contains(&cutoff), || "cutoff must lie in 1..=10".into());
            let tolerance = r.tolerance.unwrap_or(1e-10);
            c.positive("tolerance", tolerance);
            Scenario::Invariants {
                mc_samples,
                mc_fields,
                translations,
                cutoff,
                tolerance,
            }
        }
        _ => unreachable!("scenario names are checked first"),
    };
    Some(out)
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config_str(&text)
}

impl RunConfig {
    /// The configuration with every default spelled out; parses back to
    /// the same value.
    pub fn echo(&self) -> Value {
        let mut v = serde_json::to_value(&self.scenario).expect("scenario serializes");
        let map = v.as_object_mut().expect("tagged enum is an object");
        if let Some(Value::Null) = map.get("variable") {
            map.remove("variable");
        }
        map.insert("seed".into(), Value::from(self.seed));
        if let Some(out) = &self.out {
            map.insert("out".into(), Value::from(out.to_string_lossy().into_owned()));
        }
        v
    }
}
