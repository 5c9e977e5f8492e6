//! Exhaustive search for tiny instances.
//!
//! Decisions are taken day by day: first a room for every patient present,
//! then a nurse for every patient-shift. Every objective term except the two
//! fairness terms only grows along a branch, so the running cost is a lower
//! bound; fairness is added at the leaves.

pub mod mip_point;

pub use mip_point::{check_mip_point, MipPointReport};

use crate::error::SolveError;
use crate::eval::{evaluate, ObjectiveBreakdown};
use crate::heuristic::{solve_heuristic, HeuristicConfig};
use crate::model::{Assignment, Gender, ShiftCalendar, ShiftKind, Ward};

pub const DEFAULT_ORACLE_NODES: u64 = 10_000_000;
const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_nodes: u64,
    pub prune: bool,
    /// Start from the heuristic's cost as an upper bound.
    pub warm_start: bool,
    /// Recompute every leaf with the evaluator and record the largest gap.
    pub check_leaves: bool,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self { max_nodes: DEFAULT_ORACLE_NODES, prune: true, warm_start: true, check_leaves: false }
    }
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub assignment: Assignment,
    pub breakdown: ObjectiveBreakdown,
    pub nodes: u64,
    pub leaves: u64,
    /// Largest |bookkeeping - evaluator| over checked leaves.
    pub max_leaf_error: f64,
}

#[derive(Clone, Copy)]
enum Decision {
    Room { p: usize, d: usize },
    Nurse { p: usize, s: usize },
}

struct Search<'a> {
    ward: &'a Ward,
    limits: OracleLimits,
    decisions: Vec<Decision>,
    a: Assignment,
    occupants: Vec<Vec<Vec<usize>>>,
    /// Patients per (shift, nurse, room).
    visits: Vec<Vec<Vec<u32>>>,
    load: Vec<Vec<f64>>,
    ever: Vec<Vec<u32>>,
    nodes: u64,
    leaves: u64,
    upper: f64,
    best: Option<(f64, Assignment)>,
    max_leaf_error: f64,
}

/// Sum over ordered pairs of the positive part of the difference.
fn excess_sum(v: &[f64]) -> f64 {
    v.iter().map(|a| v.iter().map(|b| (a - b).max(0.0)).sum::<f64>()).sum()
}

fn spread(ward: &Ward, occ: &[usize]) -> f64 {
    let ages = occ.iter().map(|&q| ward.patients[q].agegroup);
    match (ages.clone().max(), ages.min()) {
        (Some(hi), Some(lo)) => f64::from(hi - lo),
        _ => 0.0,
    }
}

fn mixed(ward: &Ward, occ: &[usize]) -> bool {
    let has = |g| occ.iter().any(|&q| ward.patients[q].gender == g);
    has(Gender::F) && has(Gender::M)
}

impl Search<'_> {
    fn room_cost(&self, p: usize, d: usize, r: usize) -> f64 {
        let w = self.ward;
        let wt = &w.weights;
        let pt = &w.patients[p];
        let mut c = 0.0;
        let prev = if d > pt.first_day { self.a.rooms[p][d - 1] } else { pt.prev_room };
        if prev.is_some_and(|q| q != r) {
            c += wt.transfers;
        }
        let occ = &self.occupants[d][r];
        let mut with = occ.clone();
        with.push(p);
        c += wt.inconvenience * (spread(w, &with) - spread(w, occ));
        if mixed(w, &with) && !mixed(w, occ) {
            c += wt.gender;
        }
        if pt.equipment[d] & !w.rooms[r].equipment != 0 {
            c += wt.equipment;
        }
        c
    }

    fn nurse_cost(&self, p: usize, s: usize, n: usize, r: usize) -> f64 {
        let w = self.ward;
        let wt = &w.weights;
        let pt = &w.patients[p];
        let nurse = &w.nurses[n];
        let mut c = 0.0;
        if !pt.prev_nurse[n] && self.ever[p][n] == 0 {
            c += wt.continuity;
        }
        if ShiftCalendar::kind_of(s) != ShiftKind::Night && pt.skillreq[s] >= 2 && nurse.skill < pt.skillreq[s] {
            c += wt.skill_load_fair;
        }
        let m = nurse.maxload[s];
        let before = self.load[s][n];
        c += wt.skill_load_fair * ((before + pt.wload[s] - m).max(0.0) - (before - m).max(0.0));
        if self.visits[s][n][r] == 0 {
            let mut walk = w.star[s] * w.star_dist[r];
            for (q, &k) in self.visits[s][n].iter().enumerate() {
                if k > 0 {
                    walk += w.circular[s] * w.dist(r, q);
                }
            }
            c += wt.nurses_per_room + wt.walking * walk;
        }
        c
    }

    fn fairness(&self) -> f64 {
        let w = self.ward;
        let mut per_shift = 0.0;
        let mut totals = vec![0.0; w.nurses.len()];
        for s in w.calendar.shifts() {
            let rel: Vec<f64> = w.on_shift[s].iter().map(|&n| self.load[s][n] / w.nurses[n].maxload[s]).collect();
            per_shift += excess_sum(&rel);
            for (&n, r) in w.on_shift[s].iter().zip(&rel) {
                totals[n] += r;
            }
        }
        w.weights.skill_load_fair * (per_shift + excess_sum(&totals))
    }

    fn cutoff(&self, bound: f64) -> bool {
        if !self.limits.prune {
            return false;
        }
        match &self.best {
            Some((best, _)) => bound >= best - EPS,
            None => bound > self.upper + EPS,
        }
    }

    fn dfs(&mut self, k: usize, cost: f64) -> Result<(), SolveError> {
        if k == self.decisions.len() {
            let total = cost + self.fairness();
            self.leaves += 1;
            if self.limits.check_leaves {
                let err = (evaluate(self.ward, &self.a).weighted_total - total).abs();
                self.max_leaf_error = self.max_leaf_error.max(err);
            }
            if self.best.as_ref().is_none_or(|(b, _)| total < b - EPS) {
                self.best = Some((total, self.a.clone()));
            }
            return Ok(());
        }
        match self.decisions[k] {
            Decision::Room { p, d } => {
                for r in 0..self.ward.rooms.len() {
                    if self.occupants[d][r].len() >= self.ward.rooms[r].beds {
                        continue;
                    }
                    self.tick()?;
                    let c = cost + self.room_cost(p, d, r);
                    if self.cutoff(c) {
                        continue;
                    }
                    self.a.rooms[p][d] = Some(r);
                    self.occupants[d][r].push(p);
                    self.dfs(k + 1, c)?;
                    self.occupants[d][r].pop();
                    self.a.rooms[p][d] = None;
                }
            }
            Decision::Nurse { p, s } => {
                let r = self.a.room_at_shift(p, s).expect("rooms are fixed before nurses");
                let wl = self.ward.patients[p].wload[s];
                for i in 0..self.ward.on_shift[s].len() {
                    let n = self.ward.on_shift[s][i];
                    self.tick()?;
                    let c = cost + self.nurse_cost(p, s, n, r);
                    if self.cutoff(c) {
                        continue;
                    }
                    self.a.nurses[p][s] = Some(n);
                    self.load[s][n] += wl;
                    self.visits[s][n][r] += 1;
                    self.ever[p][n] += 1;
                    self.dfs(k + 1, c)?;
                    self.ever[p][n] -= 1;
                    self.visits[s][n][r] -= 1;
                    self.load[s][n] -= wl;
                    self.a.nurses[p][s] = None;
                }
            }
        }
        Ok(())
    }

    fn tick(&mut self) -> Result<(), SolveError> {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            return Err(SolveError::BudgetExceeded { limit: self.limits.max_nodes });
        }
        Ok(())
    }
}

/// Finds a minimum-cost feasible assignment. Among equal costs the first in
/// search order wins (days ascending, rooms then nurses, indices ascending).
pub fn enumerate_optimal(ward: &Ward, limits: OracleLimits) -> Result<OracleResult, SolveError> {
    let mut decisions = Vec::new();
    for d in ward.calendar.days() {
        let present = ward.patients_on_day(d);
        if present.is_empty() {
            continue;
        }
        if present.len() > ward.total_beds() {
            return Err(SolveError::Infeasible {
                day: d,
                reason: format!("{} patients for {} beds", present.len(), ward.total_beds()),
            });
        }
        for s in ShiftCalendar::shifts_of_day(d) {
            if ward.on_shift[s].is_empty() {
                return Err(SolveError::Infeasible { day: d, reason: format!("no nurse on duty for shift {s}") });
            }
        }
        decisions.extend(present.iter().map(|&p| Decision::Room { p, d }));
        for &p in &present {
            decisions.extend(ShiftCalendar::shifts_of_day(d).map(|s| Decision::Nurse { p, s }));
        }
    }
    let upper = if limits.warm_start && limits.prune {
        solve_heuristic(ward, &HeuristicConfig::default()).map_or(f64::INFINITY, |h| h.breakdown.weighted_total)
    } else {
        f64::INFINITY
    };
    let nn = ward.nurses.len();
    let ns = ward.num_shifts();
    let mut search = Search {
        ward,
        limits,
        decisions,
        a: Assignment::empty(ward),
        occupants: vec![vec![Vec::new(); ward.rooms.len()]; ward.num_days() + 1],
        visits: vec![vec![vec![0; ward.rooms.len()]; nn]; ns + 1],
        load: vec![vec![0.0; nn]; ns + 1],
        ever: vec![vec![0; nn]; ward.patients.len()],
        nodes: 0,
        leaves: 0,
        upper,
        best: None,
        max_leaf_error: 0.0,
    };
    search.dfs(0, 0.0)?;
    let (_, assignment) =
        search.best.ok_or(SolveError::Infeasible { day: 0, reason: "no feasible assignment".into() })?;
    Ok(OracleResult {
        breakdown: evaluate(ward, &assignment),
        assignment,
        nodes: search.nodes,
        leaves: search.leaves,
        max_leaf_error: search.max_leaf_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::eval_total;
    use crate::instgen::generate_tiny;
    use crate::model::builder::{one_nurse_per_shift, InstanceBuilder};

    fn ward(inst: &crate::model::Instance) -> Ward {
        Ward::compile(inst).unwrap()
    }

    #[test]
    fn single_assignment() {
        let w = ward(
            &InstanceBuilder::new(1)
                .room("A", 1, &[])
                .station("S")
                .nurses(one_nurse_per_shift(1))
                .patient_with("p1", Gender::F, 40, 1, 3, |_| {})
                .build(),
        );
        let res = enumerate_optimal(&w, OracleLimits::default()).unwrap();
        let sol = res.assignment.to_solution(&w, "t");
        assert_eq!(res.breakdown, eval_total(&w, &sol).unwrap());
        assert_eq!(res.assignment.rooms[0][1], Some(0));
    }

    #[test]
    fn separates_genders_when_single_rooms_exist() {
        let w = ward(
            &InstanceBuilder::new(1)
                .room("A", 1, &[])
                .room("B", 1, &[])
                .room("C", 2, &[])
                .station("S")
                .nurse("e1", 2, &[1], 10.0)
                .nurse("e2", 2, &[1], 10.0)
                .nurse("l1", 2, &[2], 10.0)
                .nurse("l2", 2, &[2], 10.0)
                .nurse("x1", 2, &[3], 10.0)
                .nurse("x2", 2, &[3], 10.0)
                .patient_with("f", Gender::F, 40, 1, 3, |_| {})
                .patient_with("m", Gender::M, 40, 1, 3, |_| {})
                .build(),
        );
        let res = enumerate_optimal(&w, OracleLimits::default()).unwrap();
        assert_eq!(res.breakdown.gender_mix, 0);
        assert_ne!(res.assignment.rooms[0][1], res.assignment.rooms[1][1]);
    }

    #[test]
    fn leaf_bookkeeping_matches_evaluator() {
        for seed in 0..10 {
            let w = ward(&generate_tiny(seed));
            let limits = OracleLimits { prune: false, check_leaves: true, ..OracleLimits::default() };
            let res = enumerate_optimal(&w, limits).unwrap();
            assert!(res.leaves > 0);
            assert!(res.max_leaf_error < 1e-9, "seed {seed}: {}", res.max_leaf_error);
        }
    }

    #[test]
    fn pruning_keeps_the_optimum() {
        for seed in 0..15 {
            let w = ward(&generate_tiny(seed));
            let full = enumerate_optimal(&w, OracleLimits { prune: false, ..OracleLimits::default() }).unwrap();
            let pruned = enumerate_optimal(&w, OracleLimits::default()).unwrap();
            let cold = enumerate_optimal(&w, OracleLimits { warm_start: false, ..OracleLimits::default() }).unwrap();
            assert_eq!(full.assignment, pruned.assignment, "seed {seed}");
            assert_eq!(full.assignment, cold.assignment, "seed {seed}");
            assert!(pruned.nodes <= full.nodes);
        }
    }

    #[test]
    fn budget_is_reported() {
        let w = ward(&generate_tiny(2));
        let limits = OracleLimits { max_nodes: 3, prune: false, ..OracleLimits::default() };
        assert!(matches!(enumerate_optimal(&w, limits), Err(SolveError::BudgetExceeded { limit: 3 })));
    }
}
