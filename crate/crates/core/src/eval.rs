//! Exact scoring of a complete assignment.
//!
//! Auxiliary model quantities (gender flags, age extremes, room visits,
//! violation amounts) are evaluated at their tightest feasible value, which
//! is what a minimizing solver would settle on for a fixed assignment.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, SolveError};
use crate::model::{Assignment, Gender, ObjectiveWeights, ShiftCalendar, Solution, Ward};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveBreakdown {
    pub transfers: u64,
    pub inconvenience: f64,
    pub gender_mix: u64,
    pub equipment_viol: u64,
    pub continuity: u64,
    pub skill_viol: u64,
    pub load_viol: f64,
    pub fairness_shift: f64,
    pub fairness_overall: f64,
    pub nurses_per_room: u64,
    pub walking: f64,
    pub weighted_total: f64,
}

impl ObjectiveBreakdown {
    pub fn weighted(&self, w: &ObjectiveWeights) -> f64 {
        w.transfers * self.transfers as f64
            + w.inconvenience * self.inconvenience
            + w.gender * self.gender_mix as f64
            + w.equipment * self.equipment_viol as f64
            + w.continuity * self.continuity as f64
            + w.skill_load_fair
                * (self.skill_viol as f64 + self.load_viol + self.fairness_shift + self.fairness_overall)
            + w.nurses_per_room * self.nurses_per_room as f64
            + w.walking * self.walking
    }

    /// `(label, value)` rows in objective order, labelled as in reports.
    pub fn rows(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("Transfers", self.transfers as f64),
            ("Inconvenience", self.inconvenience),
            ("Gender mixing", self.gender_mix as f64),
            ("Equipment violation", self.equipment_viol as f64),
            ("Continuity of care", self.continuity as f64),
            ("Skill violations", self.skill_viol as f64),
            ("Excess workload", self.load_viol),
            ("Fairness per shift", self.fairness_shift),
            ("Fairness overall", self.fairness_overall),
            ("Nurses per room", self.nurses_per_room as f64),
            ("Walking distances", self.walking),
            ("Weighted total", self.weighted_total),
        ]
    }

    /// Aligned two-column text table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for (label, value) in self.rows() {
            out.push_str(&format!("{label:<22}{value:>16.4}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HardFamily {
    /// Every in-ward day needs exactly one room.
    RoomAssignment,
    /// Room occupancy within the bed count.
    RoomCapacity,
    /// Every in-ward shift needs exactly one nurse.
    NurseAssignment,
    /// Assigned nurse must be rostered on the shift.
    NurseRoster,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardViolation {
    pub family: HardFamily,
    /// Day for room families, shift for nurse families.
    pub index: usize,
    pub entities: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub violations: Vec<HardViolation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the hard constraints of a solution. Dangling identifiers are a
/// structural error, not an infeasibility.
pub fn check_feasibility(ward: &Ward, sol: &Solution) -> Result<FeasibilityReport, ModelError> {
    let mut out = Vec::new();
    let mut rooms_of: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for e in &sol.room_of {
        let p = ward.patient_idx(&e.patient)?;
        let r = ward.room_idx(&e.room)?;
        rooms_of.entry((p, e.day)).or_default().push(r);
    }
    let mut nurses_of: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for e in &sol.nurse_of {
        let p = ward.patient_idx(&e.patient)?;
        let n = ward.nurse_idx(&e.nurse)?;
        nurses_of.entry((p, e.shift)).or_default().push(n);
    }

    let mut occupancy: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (p, patient) in ward.patients.iter().enumerate() {
        for d in patient.days() {
            match rooms_of.get(&(p, d)).map(Vec::as_slice) {
                None | Some([]) => out.push(HardViolation {
                    family: HardFamily::RoomAssignment,
                    index: d,
                    entities: vec![patient.id.clone()],
                    detail: "no room assigned".into(),
                }),
                Some([r]) => occupancy.entry((*r, d)).or_default().push(p),
                Some(rs) => out.push(HardViolation {
                    family: HardFamily::RoomAssignment,
                    index: d,
                    entities: std::iter::once(patient.id.clone())
                        .chain(rs.iter().map(|&r| ward.rooms[r].id.clone()))
                        .collect(),
                    detail: format!("{} rooms assigned", rs.len()),
                }),
            }
        }
        for s in patient.shifts() {
            match nurses_of.get(&(p, s)).map(Vec::as_slice) {
                None | Some([]) => out.push(HardViolation {
                    family: HardFamily::NurseAssignment,
                    index: s,
                    entities: vec![patient.id.clone()],
                    detail: "no nurse assigned".into(),
                }),
                Some([n]) => {
                    if !ward.nurses[*n].rostered[s] {
                        out.push(HardViolation {
                            family: HardFamily::NurseRoster,
                            index: s,
                            entities: vec![patient.id.clone(), ward.nurses[*n].id.clone()],
                            detail: "nurse not rostered on this shift".into(),
                        });
                    }
                }
                Some(ns) => out.push(HardViolation {
                    family: HardFamily::NurseAssignment,
                    index: s,
                    entities: std::iter::once(patient.id.clone())
                        .chain(ns.iter().map(|&n| ward.nurses[n].id.clone()))
                        .collect(),
                    detail: format!("{} nurses assigned", ns.len()),
                }),
            }
        }
    }
    // assignments outside the stay
    let mut stray: Vec<_> = rooms_of.keys().filter(|(p, d)| !ward.patients[*p].in_ward_day(*d)).copied().collect();
    stray.sort_unstable();
    for (p, d) in stray {
        out.push(HardViolation {
            family: HardFamily::RoomAssignment,
            index: d,
            entities: vec![ward.patients[p].id.clone()],
            detail: "room assigned outside the stay".into(),
        });
    }
    let mut stray: Vec<_> = nurses_of.keys().filter(|(p, s)| !ward.patients[*p].in_ward_shift(*s)).copied().collect();
    stray.sort_unstable();
    for (p, s) in stray {
        out.push(HardViolation {
            family: HardFamily::NurseAssignment,
            index: s,
            entities: vec![ward.patients[p].id.clone()],
            detail: "nurse assigned outside the stay".into(),
        });
    }

    let mut over: Vec<_> = occupancy.into_iter().filter(|((r, _), ps)| ps.len() > ward.rooms[*r].beds).collect();
    over.sort_unstable();
    for ((r, d), ps) in over {
        out.push(HardViolation {
            family: HardFamily::RoomCapacity,
            index: d,
            entities: std::iter::once(ward.rooms[r].id.clone())
                .chain(ps.iter().map(|&p| ward.patients[p].id.clone()))
                .collect(),
            detail: format!("{} patients in {} beds", ps.len(), ward.rooms[r].beds),
        });
    }
    Ok(FeasibilityReport { violations: out })
}

/// Patient occupants of each room per day: `occ[day][room]`.
fn occupants(ward: &Ward, a: &Assignment) -> Vec<Vec<Vec<usize>>> {
    let mut occ = vec![vec![Vec::new(); ward.rooms.len()]; ward.num_days() + 1];
    for (p, patient) in ward.patients.iter().enumerate() {
        for d in patient.days() {
            if let Some(r) = a.room(p, d) {
                occ[d][r].push(p);
            }
        }
    }
    occ
}

/// Rooms each nurse has patients in during each shift: `visits[shift][nurse]`,
/// sorted and deduplicated.
pub fn room_visits(ward: &Ward, a: &Assignment) -> Vec<Vec<Vec<usize>>> {
    let mut v = vec![vec![Vec::new(); ward.nurses.len()]; ward.num_shifts() + 1];
    for (p, patient) in ward.patients.iter().enumerate() {
        for s in patient.shifts() {
            if let (Some(n), Some(r)) = (a.nurse(p, s), a.room_at_shift(p, s)) {
                v[s][n].push(r);
            }
        }
    }
    for per_shift in &mut v {
        for rooms in per_shift {
            rooms.sort_unstable();
            rooms.dedup();
        }
    }
    v
}

/// Assigned workload per nurse and shift: `load[shift][nurse]`.
pub fn nurse_loads(ward: &Ward, a: &Assignment) -> Vec<Vec<f64>> {
    let mut load = vec![vec![0.0; ward.nurses.len()]; ward.num_shifts() + 1];
    for (p, patient) in ward.patients.iter().enumerate() {
        for s in patient.shifts() {
            if let Some(n) = a.nurse(p, s) {
                load[s][n] += patient.wload[s];
            }
        }
    }
    load
}

pub fn eval_transfers(ward: &Ward, a: &Assignment) -> u64 {
    let mut count = 0;
    for (p, patient) in ward.patients.iter().enumerate() {
        if patient.adshift == 0 {
            if let (Some(prev), Some(r)) = (patient.prev_room, a.room(p, 1)) {
                count += u64::from(prev != r);
            }
        }
        for d in patient.first_day..patient.last_day {
            if let (Some(r), Some(q)) = (a.room(p, d), a.room(p, d + 1)) {
                count += u64::from(r != q);
            }
        }
    }
    count
}

pub fn eval_inconvenience(ward: &Ward, a: &Assignment) -> f64 {
    let mut total = 0.0;
    for day_occ in occupants(ward, a).iter().skip(1) {
        for occ in day_occ {
            let groups = occ.iter().map(|&p| ward.patients[p].agegroup);
            if let (Some(max), Some(min)) = (groups.clone().max(), groups.min()) {
                total += f64::from(max - min);
            }
        }
    }
    total
}

pub fn eval_gender_mix(ward: &Ward, a: &Assignment) -> u64 {
    let mut count = 0;
    for day_occ in occupants(ward, a).iter().skip(1) {
        for occ in day_occ {
            let f = occ.iter().any(|&p| ward.patients[p].gender == Gender::F);
            let m = occ.iter().any(|&p| ward.patients[p].gender == Gender::M);
            count += u64::from(f && m);
        }
    }
    count
}

pub fn eval_equipment(ward: &Ward, a: &Assignment) -> u64 {
    let mut count = 0;
    for (p, patient) in ward.patients.iter().enumerate() {
        for d in patient.days() {
            if let Some(r) = a.room(p, d) {
                count += u64::from(patient.equipment[d] & !ward.rooms[r].equipment != 0);
            }
        }
    }
    count
}

pub fn eval_continuity(ward: &Ward, a: &Assignment) -> u64 {
    let mut count = 0;
    for (p, patient) in ward.patients.iter().enumerate() {
        let mut seen = vec![false; ward.nurses.len()];
        for s in patient.shifts() {
            if let Some(n) = a.nurse(p, s) {
                if !seen[n] && !patient.prev_nurse[n] {
                    count += 1;
                }
                seen[n] = true;
            }
        }
    }
    count
}

pub fn eval_skill_violations(ward: &Ward, a: &Assignment) -> u64 {
    let mut count = 0;
    for (p, patient) in ward.patients.iter().enumerate() {
        for s in patient.shifts() {
            let req = patient.skillreq[s];
            if req < 2 || ShiftCalendar::kind_of(s) == crate::model::ShiftKind::Night {
                continue;
            }
            if let Some(n) = a.nurse(p, s) {
                count += u64::from(ward.nurses[n].skill < req);
            }
        }
    }
    count
}

pub fn eval_load_violations(ward: &Ward, a: &Assignment) -> f64 {
    let load = nurse_loads(ward, a);
    let mut total = 0.0;
    for s in ward.calendar.shifts() {
        for &n in &ward.on_shift[s] {
            total += (load[s][n] - ward.nurses[n].maxload[s]).max(0.0);
        }
    }
    total
}

/// Sum over unordered pairs of `|a_i - a_j|`, equal to the sum over ordered
/// pairs of the positive part of the difference.
pub fn pairwise_abs_sum(values: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            total += (values[i] - values[j]).abs();
        }
    }
    total
}

/// Relative loads `rel[shift][nurse]` (0 where not rostered).
pub fn relative_loads(ward: &Ward, a: &Assignment) -> Vec<Vec<f64>> {
    let load = nurse_loads(ward, a);
    let mut rel = vec![vec![0.0; ward.nurses.len()]; ward.num_shifts() + 1];
    for s in ward.calendar.shifts() {
        for &n in &ward.on_shift[s] {
            rel[s][n] = load[s][n] / ward.nurses[n].maxload[s];
        }
    }
    rel
}

/// Returns `(fairness_shift, fairness_overall)`.
pub fn eval_fairness(ward: &Ward, a: &Assignment) -> (f64, f64) {
    let rel = relative_loads(ward, a);
    let mut per_shift = 0.0;
    let mut totals = vec![0.0; ward.nurses.len()];
    for s in ward.calendar.shifts() {
        let vals: Vec<f64> = ward.on_shift[s].iter().map(|&n| rel[s][n]).collect();
        per_shift += pairwise_abs_sum(&vals);
        for &n in &ward.on_shift[s] {
            totals[n] += rel[s][n];
        }
    }
    (per_shift, pairwise_abs_sum(&totals))
}

pub fn eval_nurses_per_room(ward: &Ward, a: &Assignment) -> u64 {
    room_visits(ward, a).iter().flatten().map(|rooms| rooms.len() as u64).sum()
}

/// Walking distance of one nurse-shift visiting `rooms` (distinct).
pub fn walk_distance(ward: &Ward, shift: usize, rooms: &[usize]) -> f64 {
    let mut circ = 0.0;
    for (i, &r) in rooms.iter().enumerate() {
        for &q in &rooms[i + 1..] {
            circ += ward.dist(r, q);
        }
    }
    let star: f64 = rooms.iter().map(|&r| ward.star_dist[r]).sum();
    ward.circular[shift] * circ + ward.star[shift] * star
}

pub fn eval_walking(ward: &Ward, a: &Assignment) -> f64 {
    let visits = room_visits(ward, a);
    let mut total = 0.0;
    for s in ward.calendar.shifts() {
        for &n in &ward.on_shift[s] {
            total += walk_distance(ward, s, &visits[s][n]);
        }
    }
    total
}

/// Scores a complete assignment without checking feasibility.
pub fn evaluate(ward: &Ward, a: &Assignment) -> ObjectiveBreakdown {
    let (fairness_shift, fairness_overall) = eval_fairness(ward, a);
    let mut b = ObjectiveBreakdown {
        transfers: eval_transfers(ward, a),
        inconvenience: eval_inconvenience(ward, a),
        gender_mix: eval_gender_mix(ward, a),
        equipment_viol: eval_equipment(ward, a),
        continuity: eval_continuity(ward, a),
        skill_viol: eval_skill_violations(ward, a),
        load_viol: eval_load_violations(ward, a),
        fairness_shift,
        fairness_overall,
        nurses_per_room: eval_nurses_per_room(ward, a),
        walking: eval_walking(ward, a),
        weighted_total: 0.0,
    };
    b.weighted_total = b.weighted(&ward.weights);
    b
}

/// Checks feasibility, then scores.
pub fn eval_total(ward: &Ward, sol: &Solution) -> Result<ObjectiveBreakdown, SolveError> {
    let report = check_feasibility(ward, sol)?;
    if !report.is_feasible() {
        return Err(SolveError::InfeasibleSolution(report.violations.len()));
    }
    let a = Assignment::from_solution(ward, sol)?;
    Ok(evaluate(ward, &a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builder::{one_nurse_per_shift, InstanceBuilder};
    use crate::model::{Instance, ObjectiveWeights, ShiftCalendar};

    /// Builds an assignment from `(patient, day, room)` and `(patient, shift, nurse)` index triples.
    fn assign(ward: &Ward, rooms: &[(usize, usize, usize)], nurses: &[(usize, usize, usize)]) -> Assignment {
        let mut a = Assignment::empty(ward);
        for &(p, d, r) in rooms {
            a.rooms[p][d] = Some(r);
        }
        for &(p, s, n) in nurses {
            a.nurses[p][s] = Some(n);
        }
        a
    }

    fn full_stay(ward: &Ward, p: usize, room: usize) -> Vec<(usize, usize, usize)> {
        ward.patients[p].days().map(|d| (p, d, room)).collect()
    }

    /// nurse index = shift offset (n1 early, n2 late, n3 night)
    fn default_nurses(ward: &Ward, p: usize) -> Vec<(usize, usize, usize)> {
        ward.patients[p].shifts().map(|s| (p, s, ShiftCalendar::kind_of(s).offset())).collect()
    }

    fn one_room(days: usize, beds: u32) -> InstanceBuilder {
        InstanceBuilder::new(days).room("A", beds, &[]).station("S").nurses(one_nurse_per_shift(days))
    }

    fn ward(inst: &Instance) -> Ward {
        Ward::compile(inst).unwrap()
    }

    #[test]
    fn single_patient_full_stay_is_feasible() {
        let inst = one_room(1, 2).patient_with("p1", Gender::F, 50, 1, 3, |_| {}).build();
        let w = ward(&inst);
        let a = assign(&w, &full_stay(&w, 0, 0), &default_nurses(&w, 0));
        let sol = a.to_solution(&w, "t");
        assert!(check_feasibility(&w, &sol).unwrap().is_feasible());
    }

    #[test]
    fn three_in_two_beds_one_capacity_violation() {
        let mut b = one_room(1, 2);
        for i in 0..3 {
            b = b.patient_with(&format!("p{i}"), Gender::F, 50, 1, 3, |_| {});
        }
        let inst = b.build();
        let w = ward(&inst);
        let rooms: Vec<_> = (0..3).flat_map(|p| full_stay(&w, p, 0)).collect();
        let nurses: Vec<_> = (0..3).flat_map(|p| default_nurses(&w, p)).collect();
        let rep = check_feasibility(&w, &assign(&w, &rooms, &nurses).to_solution(&w, "t")).unwrap();
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].family, HardFamily::RoomCapacity);
    }

    #[test]
    fn unrostered_nurse_is_a_roster_violation() {
        let inst = one_room(1, 2).patient_with("p1", Gender::F, 50, 1, 3, |_| {}).build();
        let w = ward(&inst);
        // late nurse (n2) assigned on the early shift
        let a = assign(&w, &full_stay(&w, 0, 0), &[(0, 1, 1), (0, 2, 1), (0, 3, 2)]);
        let rep = check_feasibility(&w, &a.to_solution(&w, "t")).unwrap();
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].family, HardFamily::NurseRoster);
    }

    #[test]
    fn dangling_ids_are_structural() {
        let inst = one_room(1, 2).patient_with("p1", Gender::F, 50, 1, 3, |_| {}).build();
        let w = ward(&inst);
        let mut sol = assign(&w, &full_stay(&w, 0, 0), &default_nurses(&w, 0)).to_solution(&w, "t");
        sol.room_of[0].room = "nowhere".into();
        assert!(check_feasibility(&w, &sol).is_err());
    }

    #[test]
    fn missing_and_duplicate_assignments() {
        let inst = one_room(1, 2).patient_with("p1", Gender::F, 50, 1, 3, |_| {}).build();
        let w = ward(&inst);
        let mut sol = assign(&w, &full_stay(&w, 0, 0), &default_nurses(&w, 0)).to_solution(&w, "t");
        sol.nurse_of.pop();
        sol.room_of.push(sol.room_of[0].clone());
        let rep = check_feasibility(&w, &sol).unwrap();
        let fams: Vec<_> = rep.violations.iter().map(|v| v.family).collect();
        assert_eq!(fams, vec![HardFamily::RoomAssignment, HardFamily::NurseAssignment]);
    }

    fn two_room_inst(days: usize) -> InstanceBuilder {
        InstanceBuilder::new(days).room("A", 2, &[]).room("B", 2, &[]).station("S").nurses(one_nurse_per_shift(days))
    }

    #[test]
    fn transfers() {
        let inst = two_room_inst(2).patient_with("p1", Gender::F, 50, 1, 6, |_| {}).build();
        let w = ward(&inst);
        assert_eq!(eval_transfers(&w, &assign(&w, &[(0, 1, 0), (0, 2, 0)], &[])), 0);
        assert_eq!(eval_transfers(&w, &assign(&w, &[(0, 1, 0), (0, 2, 1)], &[])), 1);

        let inst = two_room_inst(2).patient_with("p1", Gender::F, 50, 0, 6, |p| p.prev_room = Some("A".into())).build();
        let w = ward(&inst);
        assert_eq!(eval_transfers(&w, &assign(&w, &[(0, 1, 1), (0, 2, 1)], &[])), 1);
    }

    #[test]
    fn inconvenience() {
        let inst = two_room_inst(1)
            .patient_with("p1", Gender::F, 35, 1, 3, |_| {})
            .patient_with("p2", Gender::F, 79, 1, 3, |_| {})
            .build();
        let w = ward(&inst);
        assert_eq!(eval_inconvenience(&w, &assign(&w, &[(0, 1, 0), (1, 1, 0)], &[])), 4.0);
        assert_eq!(eval_inconvenience(&w, &assign(&w, &[(0, 1, 0), (1, 1, 1)], &[])), 0.0);
    }

    #[test]
    fn gender_mix() {
        let inst = two_room_inst(3)
            .patient_with("f1", Gender::F, 35, 1, 9, |_| {})
            .patient_with("f2", Gender::F, 35, 1, 9, |_| {})
            .patient_with("m1", Gender::M, 35, 1, 9, |_| {})
            .build();
        let w = ward(&inst);
        let ff: Vec<_> = (1..=3).flat_map(|d| [(0, d, 0), (1, d, 0), (2, d, 1)]).collect();
        assert_eq!(eval_gender_mix(&w, &assign(&w, &ff, &[])), 0);
        let one_day =
            [(0, 1, 0), (2, 1, 0), (1, 1, 1), (0, 2, 0), (1, 2, 0), (2, 2, 1), (0, 3, 0), (1, 3, 0), (2, 3, 1)];
        assert_eq!(eval_gender_mix(&w, &assign(&w, &one_day, &[])), 1);
        let all: Vec<_> = (1..=3).flat_map(|d| [(0, d, 0), (2, d, 0), (1, d, 1)]).collect();
        assert_eq!(eval_gender_mix(&w, &assign(&w, &all, &[])), 3);
    }

    #[test]
    fn gender_mix_symmetric_under_flip() {
        let mut inst = two_room_inst(1)
            .patient_with("f1", Gender::F, 35, 1, 3, |_| {})
            .patient_with("m1", Gender::M, 35, 1, 3, |_| {})
            .patient_with("m2", Gender::M, 35, 1, 3, |_| {})
            .build();
        let w = ward(&inst);
        let a = assign(&w, &[(0, 1, 0), (1, 1, 0), (2, 1, 1)], &[]);
        let before = eval_gender_mix(&w, &a);
        for p in &mut inst.patients {
            p.gender = p.gender.flipped();
        }
        assert_eq!(eval_gender_mix(&ward(&inst), &a), before);
    }

    #[test]
    fn equipment() {
        let base = || {
            InstanceBuilder::new(2)
                .equipment(&["oxygen", "telemetry"])
                .room("A", 2, &["oxygen", "telemetry"])
                .room("B", 2, &["oxygen"])
                .station("S")
                .nurses(one_nurse_per_shift(2))
        };
        let inst = base()
            .patient_with("p1", Gender::F, 35, 1, 3, |p| {
                p.equipment_req.insert(1, ["oxygen".to_string()].into());
            })
            .build();
        let w = ward(&inst);
        assert_eq!(eval_equipment(&w, &assign(&w, &[(0, 1, 0)], &[])), 0);
        let both = |p: &mut crate::model::Patient| {
            for set in p.equipment_req.values_mut() {
                *set = ["oxygen".to_string(), "telemetry".to_string()].into();
            }
        };
        let inst = base().patient_with("p1", Gender::F, 35, 1, 3, both).build();
        let w = ward(&inst);
        assert_eq!(eval_equipment(&w, &assign(&w, &[(0, 1, 1)], &[])), 1);
        let inst = base().patient_with("p1", Gender::F, 35, 1, 6, both).build();
        let w = ward(&inst);
        assert_eq!(eval_equipment(&w, &assign(&w, &[(0, 1, 1), (0, 2, 1)], &[])), 2);
    }

    fn three_nurse_sets(days: usize) -> InstanceBuilder {
        // n1 early d1+d2, n2 late d1+d2, n3 night d1, n4 night d2
        InstanceBuilder::new(days)
            .room("A", 2, &[])
            .station("S")
            .nurse("n1", 2, &[1, 4], 10.0)
            .nurse("n2", 2, &[2, 5], 10.0)
            .nurse("n3", 2, &[3], 10.0)
            .nurse("n4", 2, &[6], 10.0)
    }

    #[test]
    fn continuity() {
        let inst = three_nurse_sets(2).patient_with("p1", Gender::F, 35, 1, 3, |_| {}).build();
        let w = ward(&inst);
        assert_eq!(eval_continuity(&w, &assign(&w, &[], &[(0, 1, 0), (0, 2, 1), (0, 3, 2)])), 3);

        let inst = three_nurse_sets(2)
            .patient_with("p1", Gender::F, 35, 1, 3, |p| {
                p.prev_nurses = ["n1", "n2", "n3"].iter().map(|s| s.to_string()).collect();
            })
            .build();
        let w = ward(&inst);
        assert_eq!(eval_continuity(&w, &assign(&w, &[], &[(0, 1, 0), (0, 2, 1), (0, 3, 2)])), 0);

        let inst = three_nurse_sets(2).patient_with("p1", Gender::F, 35, 1, 6, |_| {}).build();
        let w = ward(&inst);
        let a = assign(&w, &[], &[(0, 1, 0), (0, 2, 1), (0, 3, 2), (0, 4, 0), (0, 5, 1), (0, 6, 3)]);
        assert_eq!(eval_continuity(&w, &a), 4);
    }

    #[test]
    fn skill_violations() {
        let mk = |req: u8, skill: u8| {
            let inst = InstanceBuilder::new(1)
                .room("A", 2, &[])
                .station("S")
                .nurse("n1", skill, &[1], 10.0)
                .nurse("n2", 3, &[2], 10.0)
                .nurse("n3", 1, &[3], 10.0)
                .patient_with("p1", Gender::F, 35, 1, 3, |p| {
                    p.skillreq.insert(1, req);
                })
                .build();
            let w = ward(&inst);
            eval_skill_violations(&w, &assign(&w, &[], &[(0, 1, 0), (0, 2, 1), (0, 3, 2)]))
        };
        assert_eq!(mk(2, 3), 0);
        assert_eq!(mk(2, 1), 1);
        assert_eq!(mk(1, 1), 0);
    }

    fn loads_inst(wl: &[(usize, f64)]) -> (Ward, Assignment) {
        let mut b = one_room(1, 4);
        for (i, &(s, w)) in wl.iter().enumerate() {
            b = b.patient_with(&format!("p{i}"), Gender::F, 35, 1, 3, |p| {
                p.workload.insert(s, w);
            });
        }
        let inst = b.build();
        let w = ward(&inst);
        let nurses: Vec<_> = (0..wl.len()).flat_map(|p| default_nurses(&w, p)).collect();
        let a = assign(&w, &[], &nurses);
        (w, a)
    }

    #[test]
    fn load_violations() {
        // every other in-stay shift carries workload 1.0
        let (w, a) = loads_inst(&[(1, 9.0)]);
        assert_eq!(eval_load_violations(&w, &a), 0.0);
        let (w, a) = loads_inst(&[(1, 12.0)]);
        assert_eq!(eval_load_violations(&w, &a), 2.0);
        let (w, a) = loads_inst(&[(1, 10.5), (2, 11.25)]);
        // shift 1: 10.5 + 1.0 = 11.5 -> 1.5 ; shift 2: 1.0 + 11.25 -> 2.25
        assert!((eval_load_violations(&w, &a) - 3.75).abs() < 1e-12);
    }

    #[test]
    fn load_excesses_sum_per_shift() {
        let inst = InstanceBuilder::new(1)
            .room("A", 4, &[])
            .station("S")
            .nurse("n1", 2, &[1], 10.0)
            .nurse("n2", 2, &[2], 10.0)
            .nurse("n3", 2, &[3], 10.0)
            .patient_with("p1", Gender::F, 35, 1, 3, |p| {
                p.workload = [(1, 10.5), (2, 11.25), (3, 0.0)].into();
            })
            .build();
        let w = ward(&inst);
        let a = assign(&w, &[], &default_nurses(&w, 0));
        assert!((eval_load_violations(&w, &a) - 1.75).abs() < 1e-12);
    }

    #[test]
    fn fairness() {
        let b = || {
            InstanceBuilder::new(1)
                .room("A", 4, &[])
                .station("S")
                .nurse("e1", 2, &[1], 10.0)
                .nurse("e2", 2, &[1], 10.0)
                .nurse("l", 2, &[2], 10.0)
                .nurse("n", 2, &[3], 10.0)
        };
        let zero_rest = |p: &mut crate::model::Patient, early: f64| {
            p.workload = [(1, early), (2, 0.0), (3, 0.0)].into();
        };
        let inst = b()
            .patient_with("p1", Gender::F, 35, 1, 3, |p| zero_rest(p, 5.0))
            .patient_with("p2", Gender::F, 35, 1, 3, |p| zero_rest(p, 5.0))
            .build();
        let w = ward(&inst);
        let a = assign(&w, &[], &[(0, 1, 0), (1, 1, 1), (0, 2, 2), (1, 2, 2), (0, 3, 3), (1, 3, 3)]);
        assert_eq!(eval_fairness(&w, &a).0, 0.0);

        let inst = b()
            .patient_with("p1", Gender::F, 35, 1, 3, |p| zero_rest(p, 10.0))
            .patient_with("p2", Gender::F, 35, 1, 3, |p| zero_rest(p, 5.0))
            .build();
        let w = ward(&inst);
        let a = assign(&w, &[], &[(0, 1, 0), (1, 1, 1), (0, 2, 2), (1, 2, 2), (0, 3, 3), (1, 3, 3)]);
        assert!((eval_fairness(&w, &a).0 - 0.5).abs() < 1e-12);

        let inst = InstanceBuilder::new(1).room("A", 4, &[]).station("S").nurse("solo", 2, &[1, 2, 3], 10.0);
        // a single nurse cannot legally work three shifts a day; build the ward directly
        let mut inst = inst.patient_with("p1", Gender::F, 35, 1, 3, |_| {}).build();
        inst.nurses[0].shifts = [1].into();
        inst.nurses[0].maxload = [(1, 10.0)].into();
        let w = ward(&inst);
        let a = assign(&w, &[], &[(0, 1, 0)]);
        assert_eq!(eval_fairness(&w, &a), (0.0, 0.0));
    }

    #[test]
    fn nurses_per_room() {
        let inst = two_room_inst(1)
            .nurse("e2", 2, &[1], 10.0)
            .patient_with("p1", Gender::F, 35, 1, 3, |_| {})
            .patient_with("p2", Gender::F, 35, 1, 3, |_| {})
            .build();
        let w = ward(&inst);
        assert_eq!(eval_nurses_per_room(&w, &assign(&w, &[(0, 1, 0), (1, 1, 0)], &[(0, 1, 0), (1, 1, 0)])), 1);
        assert_eq!(eval_nurses_per_room(&w, &assign(&w, &[(0, 1, 0), (1, 1, 0)], &[(0, 1, 0), (1, 1, 3)])), 2);
        let a = assign(&w, &[(0, 1, 0)], &default_nurses(&w, 0));
        assert_eq!(eval_nurses_per_room(&w, &a), 3);
    }

    #[test]
    fn walking_hand_example() {
        let mut ww = crate::model::WalkWeights::default();
        for s in 1..=3 {
            ww.circular.insert(s, if s == 1 { 2.0 } else { 0.0 });
            ww.star.insert(s, if s == 1 { 1.0 } else { 0.0 });
        }
        let inst = InstanceBuilder::new(1)
            .room("r1", 1, &[])
            .room("r2", 1, &[])
            .station("a")
            .distance("r1", "r2", 10.0)
            .station_distance("a", "r1", 5.0)
            .station_distance("a", "r2", 7.0)
            .walk_weights(ww)
            .nurses(one_nurse_per_shift(1))
            .patient_with("p1", Gender::F, 35, 1, 3, |_| {})
            .patient_with("p2", Gender::F, 35, 1, 3, |_| {})
            .build();
        let w = ward(&inst);
        let a = assign(&w, &[(0, 1, 0), (1, 1, 1)], &[(0, 1, 0), (1, 1, 0)]);
        assert_eq!(eval_walking(&w, &a), 32.0);
        // one visited room, star weight 0 on the late shift: no walking
        let a = assign(&w, &[(0, 1, 0)], &[(0, 2, 1)]);
        assert_eq!(eval_walking(&w, &a), 0.0);
        assert_eq!(eval_walking(&w, &Assignment::empty(&w)), 0.0);
    }

    #[test]
    fn weighted_total_examples() {
        let w = ObjectiveWeights::default();
        let b = ObjectiveBreakdown { transfers: 1, ..Default::default() };
        assert_eq!(b.weighted(&w), 11.0);
        let b = ObjectiveBreakdown { gender_mix: 1, equipment_viol: 1, ..Default::default() };
        assert_eq!(b.weighted(&w), 10.0);
    }

    #[test]
    fn empty_ward_scores_zero() {
        let inst = one_room(2, 2).build();
        let w = ward(&inst);
        let b = eval_total(&w, &Assignment::empty(&w).to_solution(&w, "t")).unwrap();
        assert_eq!(b, ObjectiveBreakdown::default());
    }

    #[test]
    fn eval_total_rejects_infeasible() {
        let inst = one_room(1, 2).patient_with("p1", Gender::F, 50, 1, 3, |_| {}).build();
        let w = ward(&inst);
        assert!(matches!(
            eval_total(&w, &Assignment::empty(&w).to_solution(&w, "t")),
            Err(SolveError::InfeasibleSolution(_))
        ));
    }
}
