//! Human-readable plan: room occupancy per day, nurse loads per shift and
//! the objective breakdown.

use std::fmt::Write as _;

use crate::error::ModelError;
use crate::eval::{check_feasibility, evaluate, nurse_loads, FeasibilityReport};
use crate::model::{Assignment, ShiftCalendar, Solution, Ward};

/// Renders a feasible plan, or the list of violations otherwise.
pub fn render_report(ward: &Ward, sol: &Solution) -> Result<String, ModelError> {
    let feas = check_feasibility(ward, sol)?;
    if !feas.is_feasible() {
        return Ok(render_violations(&feas));
    }
    let a = Assignment::from_solution(ward, sol)?;
    let mut out = String::new();
    out.push_str("Room occupancy\n");
    for d in ward.calendar.days() {
        let _ = writeln!(out, "day {d}");
        for (r, room) in ward.rooms.iter().enumerate() {
            let inside: Vec<&str> = ward
                .patients_on_day(d)
                .into_iter()
                .filter(|&p| a.room(p, d) == Some(r))
                .map(|p| ward.patients[p].id.as_str())
                .collect();
            let list = if inside.is_empty() { "-".to_string() } else { inside.join(", ") };
            let _ = writeln!(out, "  {} ({}/{}): [{list}]", room.id, inside.len(), room.beds);
        }
    }
    out.push_str("\nNurse loads\n");
    let loads = nurse_loads(ward, &a);
    for s in ward.calendar.shifts() {
        let _ = writeln!(out, "shift {s} ({})", ShiftCalendar::kind_of(s));
        for &n in &ward.on_shift[s] {
            let (load, max) = (loads[s][n], ward.nurses[n].maxload[s]);
            let _ = write!(out, "  {}: {load:.2} / {max:.2}", ward.nurses[n].id);
            if load > max {
                let _ = write!(out, "  EXCESS {:.2}", load - max);
            }
            out.push('\n');
        }
    }
    out.push_str("\nObjectives\n");
    out.push_str(&evaluate(ward, &a).to_table());
    Ok(out)
}

pub fn render_violations(feas: &FeasibilityReport) -> String {
    let mut out = format!("infeasible: {} hard-constraint violation(s)\n", feas.violations.len());
    for v in &feas.violations {
        let _ = writeln!(out, "  {:?} at {}: {} [{}]", v.family, v.index, v.detail, v.entities.join(", "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builder::InstanceBuilder;
    use crate::model::{Gender, RoomAssignment};

    fn two_in_a() -> (Ward, Assignment) {
        let inst = InstanceBuilder::new(1)
            .room("A", 2, &[])
            .station("S")
            .nurse("n1", 2, &[1], 1.0)
            .nurse("n2", 2, &[2], 10.0)
            .nurse("n3", 2, &[3], 10.0)
            .patient_with("p1", Gender::F, 40, 1, 3, |_| {})
            .patient_with("p2", Gender::F, 40, 1, 3, |_| {})
            .build();
        let w = Ward::compile(&inst).unwrap();
        let mut a = Assignment::empty(&w);
        for p in 0..2 {
            a.rooms[p][1] = Some(0);
            for s in 1..=3 {
                a.nurses[p][s] = Some(s - 1);
            }
        }
        (w, a)
    }

    #[test]
    fn lists_room_members_and_flags_excess() {
        let (w, a) = two_in_a();
        let text = render_report(&w, &a.to_solution(&w, "t")).unwrap();
        assert!(text.contains("  A (2/2): [p1, p2]\n"));
        assert!(text.contains("  n1: 2.00 / 1.00  EXCESS 1.00\n"));
        assert!(!text.contains("n2: 2.00 / 10.00  EXCESS"));
        assert!(text.contains("Gender mixing"));
        assert!(text.contains("Transfers"));
    }

    #[test]
    fn infeasible_plans_print_violations() {
        let (w, a) = two_in_a();
        let mut sol = a.to_solution(&w, "t");
        sol.room_of.retain(|e: &RoomAssignment| e.patient != "p2");
        let text = render_report(&w, &sol).unwrap();
        assert!(text.starts_with("infeasible: "));
    }
}
