//! Benchmark grid over generator presets, horizons and seeds.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::eval::ObjectiveBreakdown;
use crate::heuristic::{solve_heuristic, HeuristicConfig};
use crate::instgen::presets::preset_config;
use crate::instgen::{generate_instance, GenConfig};
use crate::model::Ward;
use crate::oracle::{enumerate_optimal, OracleLimits};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchConfig {
    pub presets: Vec<String>,
    pub weeks: Vec<usize>,
    pub seeds: Vec<u64>,
    pub jobs: usize,
    /// Run the exact oracle when the instance has at most this many
    /// patient-days.
    pub oracle_patient_days: usize,
    pub oracle_max_nodes: u64,
    /// Report zero wall-clock times so that outputs are reproducible.
    pub no_timestamps: bool,
    pub heuristic: HeuristicConfig,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            presets: vec!["30beds-var1".into(), "30beds-var2".into(), "30beds-var3".into()],
            weeks: vec![2, 4],
            seeds: (0..10).collect(),
            jobs: 1,
            oracle_patient_days: 8,
            oracle_max_nodes: 1_000_000,
            no_timestamps: false,
            heuristic: HeuristicConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRun {
    pub preset: String,
    pub weeks: usize,
    pub seed: u64,
    pub patients: usize,
    pub nurses: usize,
    pub millis: f64,
    pub breakdown: Option<ObjectiveBreakdown>,
    /// Relative gap to the oracle optimum, where the oracle ran.
    pub gap: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub preset: String,
    pub weeks: usize,
    pub runs: usize,
    pub objective_mean: f64,
    pub objective_stdev: f64,
    pub millis_mean: f64,
    pub millis_stdev: f64,
    /// Per-objective means in report order.
    pub objective_means: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuntimeRatio {
    pub preset: String,
    pub short_weeks: usize,
    pub long_weeks: usize,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub runs: Vec<BenchRun>,
    pub summaries: Vec<BenchSummary>,
    pub runtime_ratios: Vec<RuntimeRatio>,
}

/// Mean and sample standard deviation.
pub fn mean_stdev(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn run_one(cfg: &BenchConfig, preset: &str, weeks: usize, seed: u64) -> BenchRun {
    let mut run = BenchRun {
        preset: preset.to_string(),
        weeks,
        seed,
        patients: 0,
        nurses: 0,
        millis: 0.0,
        breakdown: None,
        gap: None,
        error: None,
    };
    let Some(gen) = preset_config(preset) else {
        run.error = Some(format!("unknown preset `{preset}`"));
        return run;
    };
    let gen = GenConfig { weeks, ..gen };
    let ward = match generate_instance(&gen, seed)
        .map_err(|e| e.to_string())
        .and_then(|i| Ward::compile(&i).map_err(|e| e.to_string()))
    {
        Ok(w) => w,
        Err(e) => {
            run.error = Some(e);
            return run;
        }
    };
    run.patients = ward.patients.len();
    run.nurses = ward.nurses.len();
    let start = Instant::now();
    let res = solve_heuristic(&ward, &cfg.heuristic);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    run.millis = if cfg.no_timestamps { 0.0 } else { elapsed };
    match res {
        Ok(h) => {
            let patient_days: usize = ward.patients.iter().map(|p| p.last_day - p.first_day + 1).sum();
            if patient_days <= cfg.oracle_patient_days {
                let limits = OracleLimits { max_nodes: cfg.oracle_max_nodes, ..OracleLimits::default() };
                if let Ok(opt) = enumerate_optimal(&ward, limits) {
                    let best = opt.breakdown.weighted_total;
                    run.gap = Some((h.breakdown.weighted_total - best) / best.abs().max(1e-9));
                }
            }
            run.breakdown = Some(h.breakdown);
        }
        Err(e) => run.error = Some(e.to_string()),
    }
    run
}

pub fn run_bench(cfg: &BenchConfig) -> BenchReport {
    let mut jobs = Vec::new();
    for p in &cfg.presets {
        for &w in &cfg.weeks {
            for &s in &cfg.seeds {
                jobs.push((p.clone(), w, s));
            }
        }
    }
    let results: Mutex<Vec<Option<BenchRun>>> = Mutex::new(vec![None; jobs.len()]);
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..cfg.jobs.max(1).min(jobs.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some((p, w, s)) = jobs.get(i) else { break };
                let run = run_one(cfg, p, *w, *s);
                results.lock().expect("no worker panics while holding the lock")[i] = Some(run);
            });
        }
    });
    let runs: Vec<BenchRun> = results.into_inner().expect("workers joined").into_iter().flatten().collect();
    let summaries = summarize(cfg, &runs);
    let runtime_ratios = ratios(cfg, &summaries);
    BenchReport { runs, summaries, runtime_ratios }
}

fn summarize(cfg: &BenchConfig, runs: &[BenchRun]) -> Vec<BenchSummary> {
    let mut out = Vec::new();
    for p in &cfg.presets {
        for &w in &cfg.weeks {
            let ok: Vec<&BenchRun> =
                runs.iter().filter(|r| &r.preset == p && r.weeks == w && r.breakdown.is_some()).collect();
            if ok.is_empty() {
                continue;
            }
            let totals: Vec<f64> = ok.iter().map(|r| r.breakdown.expect("filtered").weighted_total).collect();
            let millis: Vec<f64> = ok.iter().map(|r| r.millis).collect();
            let (objective_mean, objective_stdev) = mean_stdev(&totals);
            let (millis_mean, millis_stdev) = mean_stdev(&millis);
            let labels = ok[0].breakdown.expect("filtered").rows();
            let objective_means = labels
                .iter()
                .enumerate()
                .map(|(k, (label, _))| {
                    let vals: Vec<f64> = ok.iter().map(|r| r.breakdown.expect("filtered").rows()[k].1).collect();
                    (label.to_string(), mean_stdev(&vals).0)
                })
                .collect();
            out.push(BenchSummary {
                preset: p.clone(),
                weeks: w,
                runs: ok.len(),
                objective_mean,
                objective_stdev,
                millis_mean,
                millis_stdev,
                objective_means,
            });
        }
    }
    out
}

fn ratios(cfg: &BenchConfig, summaries: &[BenchSummary]) -> Vec<RuntimeRatio> {
    let (Some(&short), Some(&long)) = (cfg.weeks.iter().min(), cfg.weeks.iter().max()) else {
        return Vec::new();
    };
    if short == long {
        return Vec::new();
    }
    cfg.presets
        .iter()
        .map(|p| {
            let find = |w| summaries.iter().find(|s| &s.preset == p && s.weeks == w).map(|s| s.millis_mean);
            let ratio = match (find(short), find(long)) {
                (Some(a), Some(b)) if a > 0.0 => Some(b / a),
                _ => None,
            };
            RuntimeRatio { preset: p.clone(), short_weeks: short, long_weeks: long, ratio }
        })
        .collect()
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v}")).unwrap_or_default()
}

impl BenchReport {
    pub fn runs_csv(&self) -> String {
        let mut out = String::from("preset,weeks,seed,patients,nurses,millis");
        for (label, _) in ObjectiveBreakdown::default().rows() {
            let _ = write!(out, ",{}", label.to_lowercase().replace(' ', "_"));
        }
        out.push_str(",gap,error\n");
        for r in &self.runs {
            let _ = write!(out, "{},{},{},{},{},{}", r.preset, r.weeks, r.seed, r.patients, r.nurses, r.millis);
            match &r.breakdown {
                Some(b) => b.rows().iter().for_each(|(_, v)| {
                    let _ = write!(out, ",{v}");
                }),
                None => out.push_str(&",".repeat(ObjectiveBreakdown::default().rows().len())),
            }
            let err = r.error.as_deref().unwrap_or("").replace([',', '\n'], ";");
            let _ = writeln!(out, ",{},{err}", opt(r.gap));
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from("preset,weeks,runs,objective_mean,objective_stdev,millis_mean,millis_stdev\n");
        for s in &self.summaries {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                s.preset, s.weeks, s.runs, s.objective_mean, s.objective_stdev, s.millis_mean, s.millis_stdev
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_sample_stdev() {
        assert_eq!(mean_stdev(&[]), (0.0, 0.0));
        assert_eq!(mean_stdev(&[3.0]), (3.0, 0.0));
        let (m, s) = mean_stdev(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert_eq!(m, 5.0);
        assert!((s - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn empty_seed_list_gives_empty_report() {
        let cfg = BenchConfig { seeds: Vec::new(), ..BenchConfig::default() };
        let rep = run_bench(&cfg);
        assert!(rep.runs.is_empty() && rep.summaries.is_empty());
        assert!(rep.runtime_ratios.iter().all(|r| r.ratio.is_none()));
    }

    #[test]
    fn parallel_runs_match_serial_runs() {
        let base = BenchConfig {
            presets: vec!["realward".into()],
            weeks: vec![1],
            seeds: vec![0, 1, 2],
            no_timestamps: true,
            ..BenchConfig::default()
        };
        let serial = run_bench(&base);
        let parallel = run_bench(&BenchConfig { jobs: 3, ..base });
        assert_eq!(serial, parallel);
        assert_eq!(serial.runs.len(), 3);
        assert_eq!(serial.summaries[0].runs, 3);
        assert_eq!(serial.runs_csv().lines().count(), 4);
    }

    #[test]
    fn unknown_presets_are_recorded() {
        let cfg =
            BenchConfig { presets: vec!["nope".into()], weeks: vec![1], seeds: vec![0], ..BenchConfig::default() };
        let rep = run_bench(&cfg);
        assert!(rep.runs[0].error.as_deref().unwrap().contains("nope"));
    }
}
