//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed; exits nonzero on any failure.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use wardplan::eval::walk_distance;
use wardplan::heuristic::{build_het_matrix, calc_contribution, solve_heuristic, solve_observed, HeuristicConfig};
use wardplan::instgen::presets::preset_config;
use wardplan::instgen::{generate_instance, generate_tiny, sample_profile, sample_workload, GenConfig};
use wardplan::lp::{export_full_mip, export_roster_bip, roster_point, ExportOptions};
use wardplan::model::builder::{one_nurse_per_shift, InstanceBuilder};
use wardplan::model::{Gender, Instance, ObjectiveWeights, ShiftCalendar, WalkWeights};
use wardplan::oracle::mip_point::check_mip_point;
use wardplan::oracle::{enumerate_optimal, OracleLimits};
use wardplan::random::random_assignment;
use wardplan::roster::{check_roster, solve_roster, RosterRequest};
use wardplan::{check_feasibility, eval_total, evaluate, SolveError, Ward};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ward(inst: &Instance) -> Ward {
    Ward::compile(inst).expect("generated instances compile")
}

const TINY_SEEDS: u64 = 50;

fn oracle_equivalence() -> Outcome {
    let mut slowest = Duration::ZERO;
    let mut worst_gap = 0.0f64;
    for seed in 0..TINY_SEEDS {
        let inst = generate_tiny(seed);
        let days = inst.num_days;
        ensure(inst.rooms.len() <= 2 && inst.patients.len() <= 4 && days <= 2 && inst.nurses.len() <= 6, || {
            format!("seed {seed}: tiny instance out of bounds")
        })?;
        let w = ward(&inst);
        let start = Instant::now();
        let opt = enumerate_optimal(&w, OracleLimits::default()).map_err(|e| format!("seed {seed}: oracle {e}"))?;
        let took = start.elapsed();
        slowest = slowest.max(took);
        ensure(took < Duration::from_secs(60), || format!("seed {seed}: oracle took {took:?}"))?;
        let h = solve_heuristic(&w, &HeuristicConfig::default()).map_err(|e| format!("seed {seed}: heuristic {e}"))?;
        let sol = h.solution(&w, "h");
        ensure(check_feasibility(&w, &sol).unwrap().is_feasible(), || format!("seed {seed}: heuristic infeasible"))?;
        let (hv, ov) = (h.breakdown.weighted_total, opt.breakdown.weighted_total);
        ensure(hv >= ov - 1e-9, || format!("seed {seed}: heuristic {hv} below optimum {ov}"))?;
        worst_gap = worst_gap.max(hv - ov);
    }
    Ok(format!("{TINY_SEEDS} instances, slowest oracle {slowest:.2?}, largest heuristic gap {worst_gap:.4}"))
}

fn evaluator_mip_fixed_point() -> Outcome {
    let mut points = 0;
    let mut worst = 0.0f64;
    for seed in 0..TINY_SEEDS {
        let w = ward(&generate_tiny(seed));
        let model = export_full_mip(&w, ExportOptions::default()).map_err(|e| format!("seed {seed}: export {e}"))?;
        for k in 0..20 {
            let sol = random_assignment(&w, 1000 * seed + k).map_err(|e| e.to_string())?.to_solution(&w, "r");
            let ev = eval_total(&w, &sol).map_err(|e| format!("seed {seed}/{k}: {e}"))?;
            let rep = check_mip_point(&w, &model, &sol).map_err(|e| format!("seed {seed}/{k}: {e}"))?;
            ensure(rep.feasible, || format!("seed {seed}/{k}: rows violated {:?}", rep.violated))?;
            let diff = (rep.objective - ev.weighted_total).abs();
            ensure(diff <= 1e-6, || format!("seed {seed}/{k}: mip {} vs eval {}", rep.objective, ev.weighted_total))?;
            worst = worst.max(diff);
            points += 1;
        }
    }
    Ok(format!("{points} points feasible, max |mip - eval| {worst:.1e} (tol 1e-6)"))
}

fn one_shift_walk(circ: f64, star: f64) -> WalkWeights {
    let mut w = WalkWeights::default();
    for s in 1..=3 {
        w.circular.insert(s, circ);
        w.star.insert(s, star);
    }
    w
}

fn walking_formula() -> Outcome {
    let inst = InstanceBuilder::new(1)
        .room("r1", 1, &[])
        .room("r2", 1, &[])
        .station("a")
        .distance("r1", "r2", 10.0)
        .station_distance("a", "r1", 5.0)
        .station_distance("a", "r2", 7.0)
        .nurses(one_nurse_per_shift(1))
        .walk_weights(one_shift_walk(2.0, 1.0))
        .build();
    let hand = walk_distance(&ward(&inst), 1, &[0, 1]);
    ensure(hand == 32.0, || format!("hand example gives {hand}, expected 32"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for case in 0..1000 {
        let rooms = rng.random_range(1..=6usize);
        let stations = rng.random_range(1..=3usize);
        let (circ, star) = (rng.random_range(0.0..3.0), rng.random_range(0.0..3.0));
        let ids: Vec<String> = (0..rooms).map(|i| format!("r{i}")).collect();
        let mut b = InstanceBuilder::new(1).nurses(one_nurse_per_shift(1)).walk_weights(one_shift_walk(circ, star));
        for id in &ids {
            b = b.room(id, 1, &[]);
        }
        for a in 0..stations {
            b = b.station(&format!("a{a}"));
            for id in &ids {
                b = b.station_distance(&format!("a{a}"), id, rng.random_range(1.0..50.0));
            }
        }
        for i in 0..rooms {
            for j in i + 1..rooms {
                b = b.distance(&ids[i], &ids[j], rng.random_range(1.0..50.0));
            }
        }
        let inst = b.build();
        let visited: Vec<usize> = (0..rooms).filter(|_| rng.random_bool(0.6)).collect();
        let got = walk_distance(&ward(&inst), 1, &visited);

        let d = &inst.distances;
        let mut pairs = 0.0;
        for &i in &visited {
            for &j in &visited {
                if i != j {
                    pairs += d.room(&ids[i], &ids[j]).unwrap();
                }
            }
        }
        let mut spokes = 0.0;
        for &i in &visited {
            for a in &inst.additional_rooms {
                spokes += d.additional(&a.id, &ids[i]).unwrap();
            }
        }
        let naive = circ * pairs / 2.0 + star * spokes;
        let err = (got - naive).abs();
        ensure(err <= 1e-9 * naive.abs().max(1.0), || format!("case {case}: {got} vs naive {naive}"))?;
        worst = worst.max(err);
    }
    Ok(format!("hand example 32 exact, 1000 random cases max error {worst:.1e} (tol 1e-9)"))
}

fn heterogeneity_values() -> Outcome {
    let cfg = GenConfig { weeks: 1, room_mix: [2, 4, 1, 0], ..GenConfig::default() };
    let mut pairs = 0usize;
    for seed in 0..10 {
        let inst = generate_instance(&cfg, seed).map_err(|e| e.to_string())?;
        let w = ward(&inst);
        let het = build_het_matrix(&w);
        for (i, p) in inst.patients.iter().enumerate() {
            for (j, q) in inst.patients.iter().enumerate() {
                let expect = if p.dishift == q.dishift { 0.0 } else { (p.dishift.abs_diff(q.dishift) as f64).ln() };
                let (wi, wj) = (w.patient_idx(&p.id).unwrap(), w.patient_idx(&q.id).unwrap());
                let got = het.get(wi, wj);
                ensure(got == expect, || format!("seed {seed}: het({}, {}) = {got}, expected {expect}", p.id, q.id))?;
                pairs += usize::from(i != j);
            }
        }
    }
    Ok(format!("{pairs} ordered pairs over 10 instances match exactly"))
}

fn weight_defaults() -> Outcome {
    let w = ObjectiveWeights::default();
    let got = [
        w.transfers,
        w.inconvenience,
        w.gender,
        w.equipment,
        w.continuity,
        w.skill_load_fair,
        w.nurses_per_room,
        w.walking,
    ];
    let want = [11.0, 1.0, 5.0, 5.0, 1.0, 5.0, 2.0, 0.05];
    ensure(got == want, || format!("defaults {got:?}"))?;
    Ok("(11, 1, 5, 5, 1, 5, 2, 0.05)".into())
}

fn random_request(rng: &mut ChaCha8Rng, k: u64) -> RosterRequest {
    let days = rng.random_range(1..=5usize);
    let nurses = rng.random_range(5..=14usize);
    let skills: Vec<u8> = (0..nurses).map(|_| rng.random_range(1..=3u8)).collect();
    let mut skill_nurses = vec![[0u32; 3]; 3 * days + 1];
    for req in skill_nurses.iter_mut().skip(1) {
        for slot in req.iter_mut() {
            *slot = u32::from(rng.random_bool(0.3)) + u32::from(rng.random_bool(0.1));
        }
        if req.iter().sum::<u32>() == 0 {
            req[1] = 1;
        }
    }
    RosterRequest {
        num_days: days,
        nurse_skills: skills,
        skill_nurses,
        max_shifts: rng.random_range(days.div_ceil(2)..=days),
        seed: Some(k),
        max_nodes: 200_000,
    }
}

fn roster_legality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut solved, mut infeasible, mut budget) = (0, 0, 0);
    for k in 0..100 {
        let req = random_request(&mut rng, k);
        match solve_roster(&req) {
            Ok(roster) => {
                let bad = check_roster(&req, &roster);
                ensure(bad.is_empty(), || format!("request {k}: {bad:?}"))?;
                let model = export_roster_bip(&req);
                let rows = model.violations(&roster_point(&req, &roster), 1e-9);
                ensure(rows.is_empty(), || format!("request {k}: BIP rows violated {rows:?}"))?;
                solved += 1;
            }
            Err(SolveError::RosterInfeasible { .. }) => infeasible += 1,
            Err(SolveError::BudgetExceeded { .. }) => budget += 1,
            Err(e) => return Err(format!("request {k}: unexpected error {e}")),
        }
    }
    // Two level-3 nurses needed on a shift with only one experienced nurse.
    let mut req = RosterRequest::uniform(1, vec![3, 2, 2], [[0, 0, 2], [0, 1, 0], [0, 1, 0]], 1);
    req.max_nodes = 10_000;
    ensure(matches!(solve_roster(&req), Err(SolveError::RosterInfeasible { .. })), || {
        "impossible request was not reported".into()
    })?;
    ensure(solved >= 40, || format!("only {solved} of 100 requests solved"))?;
    Ok(format!("{solved} rosters legal and BIP-feasible, {infeasible} reported infeasible, {budget} over budget"))
}

fn generator_distributions() -> Outcome {
    const N: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut female = 0usize;
    let mut los = [0usize; 5];
    for _ in 0..N {
        let p = sample_profile(&mut rng);
        female += usize::from(p.gender == Gender::F);
        ensure((1..=5).contains(&p.los_days), || format!("los {}", p.los_days))?;
        los[p.los_days - 1] += 1;
        ensure((20..100).contains(&p.age), || format!("age {}", p.age))?;
        let wl = sample_workload(p.age / 10, 3 * p.los_days, &mut rng);
        ensure(wl.iter().all(|x| (1.0..=5.0).contains(x)), || format!("workload out of range {wl:?}"))?;
        ensure(wl.windows(2).all(|w| w[1] <= w[0]), || format!("workload increases {wl:?}"))?;
    }
    let share = female as f64 / N as f64;
    ensure((share - 0.5).abs() <= 0.02, || format!("female share {share}"))?;
    let expect = N as f64 / 5.0;
    let chi2: f64 = los.iter().map(|&o| (o as f64 - expect).powi(2) / expect).sum();
    let critical = ChiSquared::new(4.0).unwrap().inverse_cdf(0.99);
    ensure(chi2 <= critical, || format!("LOS chi-square {chi2:.2} > {critical:.2}"))?;

    let mut skills = [0usize; 3];
    let mut patients = 0usize;
    for name in ["30beds-var1", "30beds-var3", "60beds-var3"] {
        let cfg = preset_config(name).unwrap();
        for seed in 0..4 {
            let inst = generate_instance(&cfg, seed).map_err(|e| e.to_string())?;
            for n in &inst.nurses {
                skills[n.skill as usize - 1] += 1;
            }
            for p in &inst.patients {
                let wl: Vec<f64> = p.workload.values().copied().collect();
                ensure(wl.iter().all(|x| (1.0..=5.0).contains(x)), || format!("{name}/{seed}: workload {wl:?}"))?;
                ensure(wl.windows(2).all(|w| w[1] <= w[0]), || format!("{name}/{seed}: workload {wl:?}"))?;
                patients += 1;
            }
        }
    }
    let total: usize = skills.iter().sum();
    let split = skills.map(|c| c as f64 / total as f64);
    for (got, want) in split.iter().zip([0.2, 0.6, 0.2]) {
        ensure((got - want).abs() <= 0.03, || format!("skill split {split:?} over {total} nurses"))?;
    }
    Ok(format!(
        "female {:.2}%, LOS chi-square {chi2:.2} (crit {critical:.2}), skill split {:.1}/{:.1}/{:.1} over {total} nurses, \
         workloads ok on {N} samples and {patients} generated patients",
        100.0 * share,
        100.0 * split[0],
        100.0 * split[1],
        100.0 * split[2]
    ))
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// Best of three wall-clock runs, in seconds.
fn time_heuristic(w: &Ward) -> Result<f64, String> {
    let mut best = f64::INFINITY;
    for _ in 0..3 {
        let start = Instant::now();
        solve_heuristic(w, &HeuristicConfig::default()).map_err(|e| e.to_string())?;
        best = best.min(start.elapsed().as_secs_f64());
    }
    Ok(best)
}

fn runtime_scaling() -> Outcome {
    let base = preset_config("30beds-var1").unwrap();
    let mut ratios = Vec::new();
    let mut slowest_two = 0.0f64;
    for seed in 0..5 {
        let two = ward(&generate_instance(&GenConfig { weeks: 2, ..base.clone() }, seed).map_err(|e| e.to_string())?);
        let four = ward(&generate_instance(&GenConfig { weeks: 4, ..base.clone() }, seed).map_err(|e| e.to_string())?);
        let (t2, t4) = (time_heuristic(&two)?, time_heuristic(&four)?);
        slowest_two = slowest_two.max(t2);
        ratios.push(t4 / t2);
    }
    let m = median(ratios.clone());
    ensure((1.5..=3.0).contains(&m), || format!("median 4wk/2wk ratio {m:.2} outside [1.5, 3.0] ({ratios:.2?})"))?;
    ensure(slowest_two < 120.0, || format!("2-week preset took {slowest_two:.1} s"))?;
    Ok(format!("median 4wk/2wk ratio {m:.2} in [1.5, 3.0], slowest 2-week run {slowest_two:.3} s (< 120 s)"))
}

fn cli(dir: &Path, args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_wardplan"))
        .args(args)
        .current_dir(dir)
        .output()
        .map_err(|e| format!("spawn: {e}"))?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn cli_determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = tmp.path();
    generate_tiny(11).save(dir.join("tiny.json")).map_err(|e| e.to_string())?;
    let runs: Vec<(&str, Vec<&str>, Vec<&str>)> = vec![
        ("generate", vec!["generate", "--preset", "realward", "--seed", "4", "--out", "inst.json"], vec!["inst.json"]),
        (
            "generate batch",
            vec!["generate", "--preset", "30beds-var3", "--count", "2", "--weeks", "1", "--out", "batch"],
            vec!["batch/30beds-var3-0.json", "batch/30beds-var3-1.json"],
        ),
        (
            "roster",
            vec![
                "roster",
                "--days",
                "7",
                "--per-shift",
                "1:0,2:2,3:1",
                "--auto",
                "--seed",
                "2",
                "--out",
                "roster.json",
            ],
            vec!["roster.json"],
        ),
        ("solve", vec!["solve", "--instance", "inst.json", "--no-timestamps", "--out", "sol.json"], vec!["sol.json"]),
        ("evaluate", vec!["evaluate", "--instance", "inst.json", "--solution", "sol.json"], vec![]),
        (
            "export full",
            vec!["export", "--model", "full", "--instance", "inst.json", "--out", "full.lp"],
            vec!["full.lp"],
        ),
        ("export pra", vec!["export", "--model", "pra", "--instance", "inst.json", "--format", "mps"], vec![]),
        ("export npa", vec!["export", "--model", "npa", "--instance", "inst.json", "--rooms", "sol.json"], vec![]),
        (
            "export roster",
            vec!["export", "--model", "roster", "--days", "3", "--per-shift", "2:1", "--nurses", "4"],
            vec![],
        ),
        ("oracle", vec!["oracle", "--instance", "tiny.json", "--out", "opt.json"], vec!["opt.json"]),
        (
            "bench",
            vec![
                "bench",
                "--preset",
                "realward",
                "--weeks",
                "1",
                "--seeds",
                "2",
                "--jobs",
                "2",
                "--no-timestamps",
                "--out",
                "bench",
            ],
            vec!["bench/runs.csv", "bench/summary.csv", "bench/bench.json"],
        ),
        ("report", vec!["report", "--instance", "inst.json", "--solution", "sol.json"], vec![]),
    ];
    let mut checked = 0;
    for (label, args, files) in &runs {
        let mut seen: Option<Vec<Vec<u8>>> = None;
        for _ in 0..2 {
            let (code, stdout) = cli(dir, args)?;
            ensure(code == 0, || format!("{label}: exit code {code}"))?;
            let mut bytes = vec![stdout];
            for f in files {
                bytes.push(std::fs::read(dir.join(f)).map_err(|e| format!("{label}: {f}: {e}"))?);
            }
            if let Some(prev) = &seen {
                ensure(prev == &bytes, || format!("{label}: outputs differ between runs"))?;
            }
            seen = Some(bytes);
        }
        checked += 1;
    }
    let (code, _) = cli(dir, &["oracle", "--instance", "inst.json", "--max-nodes", "50"])?;
    ensure(code == 3, || format!("budget exit code {code}"))?;
    let (code, _) = cli(dir, &["solve", "--instance", "missing.json"])?;
    ensure(code == 4, || format!("bad-input exit code {code}"))?;
    Ok(format!("{checked} invocations byte-identical across two runs; exit codes 3 and 4 checked"))
}

fn table_consistency() -> Outcome {
    let small = GenConfig { weeks: 1, room_mix: [2, 3, 1, 0], ..GenConfig::default() };
    let mut checked = 0usize;
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let inst =
            if seed < 10 { generate_tiny(seed) } else { generate_instance(&small, seed).map_err(|e| e.to_string())? };
        let w = ward(&inst);
        let mut failure = None;
        solve_observed(&w, &HeuristicConfig::default(), |st, table, het, _| {
            for e in table.entries() {
                let fresh = calc_contribution(&w, st, het, e.patient, table.day(), e.triple, e.room);
                let mut next = st.assignment.clone();
                next.rooms[e.patient][table.day()] = Some(e.room);
                for (s, n) in ShiftCalendar::shifts_of_day(table.day()).into_iter().zip(e.triple) {
                    next.nurses[e.patient][s] = Some(n);
                }
                let het_part =
                    st.occupants[table.day()][e.room].iter().map(|&q| het.get(e.patient, q)).fold(0.0, f64::max);
                let delta = evaluate(&w, &next).weighted_total - evaluate(&w, &st.assignment).weighted_total
                    + w.weights.heterogeneity * het_part;
                let err = (fresh - e.value).abs().max((delta - e.value).abs());
                worst = worst.max(err);
                checked += 1;
                if err > 1e-9 && failure.is_none() {
                    failure = Some(format!("seed {seed}: entry {e:?}, direct {fresh}, evaluator {delta}"));
                }
            }
        })
        .map_err(|e| format!("seed {seed}: {e}"))?;
        if let Some(f) = failure {
            return Err(f);
        }
    }
    Ok(format!("{checked} surviving entries over 20 runs, max error {worst:.1e} (tol 1e-9)"))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("oracle equivalence", oracle_equivalence),
        ("evaluator-MIP fixed point", evaluator_mip_fixed_point),
        ("walking-distance formula", walking_formula),
        ("heterogeneity", heterogeneity_values),
        ("weights conformance", weight_defaults),
        ("roster legality", roster_legality),
        ("generator distributions", generator_distributions),
        ("runtime scaling", runtime_scaling),
        ("determinism", cli_determinism),
        ("contribution-table consistency", table_consistency),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = BTreeMap::new();
    for (k, (name, f)) in criteria.into_iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{secs:.1}s]", k + 1),
            Err(why) => {
                println!("FAIL criterion {} ({name}): {why} [{secs:.1}s]", k + 1);
                failed.insert(k + 1, name);
            }
        }
    }
    if !failed.is_empty() {
        println!("{} criteria failed: {failed:?}", failed.len());
        std::process::exit(1);
    }
}
