//! Greedy day-by-day construction.
//!
//! Days are processed in order. Within a day, every candidate
//! `(patient, room, early/late/night nurse)` gets its marginal cost on the
//! current partial solution; the cheapest candidate is fixed, the table is
//! updated and the loop repeats until all patients of the day are placed.
//! A heterogeneity term on discharge times, used only here, nudges patients
//! with similar discharge shifts into the same room.

pub mod contribution;
pub mod het;
pub mod state;
pub mod table;

use serde::{Deserialize, Serialize};

pub use contribution::{calc_contribution, contribution_terms, Delta};
pub use het::{het_value, Heterogeneity};
pub use state::PartialState;
pub use table::{ContributionTable, Entry};

use crate::error::SolveError;
use crate::eval::{evaluate, ObjectiveBreakdown};
use crate::model::{Assignment, ShiftCalendar, Solution, Ward};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicConfig {
    /// Keep only this many cheapest nurse triples per (patient, room).
    pub max_triples_per_patient: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct HeuristicResult {
    pub assignment: Assignment,
    pub breakdown: ObjectiveBreakdown,
    /// Sum of the contributions of the fixed entries.
    pub greedy_cost: f64,
    /// Heterogeneity part of `greedy_cost`, unweighted.
    pub heterogeneity: f64,
}

impl HeuristicResult {
    pub fn solution(&self, ward: &Ward, instance_ref: &str) -> Solution {
        self.assignment.to_solution(ward, instance_ref)
    }
}

pub fn build_het_matrix(ward: &Ward) -> Heterogeneity {
    Heterogeneity::build(&ward.patients.iter().map(|p| p.dishift).collect::<Vec<_>>())
}

/// Checks that a day can be staffed and bedded.
fn check_day(ward: &Ward, day: usize, count: usize) -> Result<(), SolveError> {
    let beds = ward.total_beds();
    if count > beds {
        return Err(SolveError::Infeasible { day, reason: format!("{count} patients for {beds} beds") });
    }
    for s in ShiftCalendar::shifts_of_day(day) {
        if ward.on_shift[s].is_empty() {
            return Err(SolveError::Infeasible {
                day,
                reason: format!("no nurse on duty for the {} shift {s}", ShiftCalendar::kind_of(s)),
            });
        }
    }
    Ok(())
}

pub fn solve_heuristic(ward: &Ward, cfg: &HeuristicConfig) -> Result<HeuristicResult, SolveError> {
    solve_observed(ward, cfg, |_, _, _, _| {})
}

/// Runs the greedy and calls `observe(state, table, het, chosen)` after
/// every fix, once the table has been updated.
pub fn solve_observed(
    ward: &Ward,
    cfg: &HeuristicConfig,
    mut observe: impl FnMut(&PartialState, &ContributionTable, &Heterogeneity, &Entry),
) -> Result<HeuristicResult, SolveError> {
    let het = build_het_matrix(ward);
    let mut st = PartialState::new(ward);
    let mut greedy_cost = 0.0;
    let mut het_total = 0.0;
    for day in ward.calendar.days() {
        let today = ward.patients_on_day(day);
        if today.is_empty() {
            continue;
        }
        check_day(ward, day, today.len())?;
        let mut table = ContributionTable::build(ward, &st, &het, day, cfg.max_triples_per_patient);
        for _ in 0..today.len() {
            let chosen = table.argmin().ok_or_else(|| SolveError::Infeasible {
                day,
                reason: "no candidate left for an unplaced patient".into(),
            })?;
            het_total += st.occupants[day][chosen.room].iter().map(|&q| het.get(chosen.patient, q)).fold(0.0, f64::max);
            greedy_cost += chosen.value;
            st.fix(ward, chosen.patient, day, chosen.triple, chosen.room);
            table.update(ward, &st, &het, &chosen);
            observe(&st, &table, &het, &chosen);
        }
    }
    let breakdown = evaluate(ward, &st.assignment);
    Ok(HeuristicResult { assignment: st.assignment, breakdown, greedy_cost, heterogeneity: het_total })
}
