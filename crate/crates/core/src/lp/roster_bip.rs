//! Rostering model: minimize assignments subject to per-level coverage,
//! total coverage, a shift budget and rest rules.

use super::model::{Expr, LinearModel, ModelBuilder, Sense};
use crate::model::{ShiftCalendar, ShiftKind};
use crate::roster::{Roster, RosterRequest};

/// Nurse identifiers used in the emitted names (`n1`, `n2`, ...).
pub fn nurse_name(n: usize) -> String {
    format!("n{}", n + 1)
}

pub fn assign_name(n: usize, s: usize) -> String {
    format!("assign({},{s})", nurse_name(n))
}

/// Terms past the horizon are dropped.
pub fn export_roster_bip(req: &RosterRequest) -> LinearModel {
    let nn = req.nurse_skills.len();
    let ns = req.num_shifts();
    let mut b = ModelBuilder::new();
    b.comment("model roster");
    b.comment(format!("nurses {nn} days {} max_shifts {}", req.num_days, req.max_shifts));
    b.comment(format!("vars assign {} = N * 3D", nn * ns));
    let mut assign = vec![Vec::with_capacity(ns + 1); nn];
    for (n, row) in assign.iter_mut().enumerate() {
        row.push(usize::MAX);
        for s in 1..=ns {
            row.push(b.binary(assign_name(n, s)));
        }
    }
    for row in &assign {
        for &v in &row[1..] {
            b.objective(v, 1.0);
        }
    }
    let sum = |terms: &mut dyn Iterator<Item = usize>| {
        let mut e = Expr::new();
        for v in terms {
            e.add(v, 1.0);
        }
        e
    };
    for (n, row) in assign.iter().enumerate() {
        for s in (1..=ns).filter(|&s| ShiftCalendar::kind_of(s) == ShiftKind::Early) {
            let e = sum(&mut (s..=s + 2).map(|t| row[t]));
            b.row(format!("c_one_per_day({},{s})", nurse_name(n)), &e, Sense::Le, 1.0);
        }
    }
    for s in 1..=ns {
        for l in 1..=3u8 {
            let need = req.skill_nurses[s][usize::from(l) - 1];
            let e = sum(&mut (0..nn).filter(|&n| req.nurse_skills[n] >= l).map(|n| assign[n][s]));
            if e.terms.is_empty() && need > 0 {
                b.comment(format!("infeasible: shift {s} needs {need} nurse(s) of skill >= {l}, none exist"));
            }
            b.row(format!("c_skill({s},{l})"), &e, Sense::Ge, f64::from(need));
        }
        let e = sum(&mut (0..nn).map(|n| assign[n][s]));
        b.row(format!("c_total({s})"), &e, Sense::Ge, f64::from(req.total_required(s)));
    }
    for (n, row) in assign.iter().enumerate() {
        let e = sum(&mut row[1..].iter().copied());
        b.row(format!("c_max_shifts({})", nurse_name(n)), &e, Sense::Le, req.max_shifts as f64);
    }
    for (n, row) in assign.iter().enumerate() {
        for s in 1..=ns {
            let (fam, span): (&str, &[usize]) = match ShiftCalendar::kind_of(s) {
                ShiftKind::Night => ("c_after_night", &[0, 1, 2]),
                ShiftKind::Late => ("c_after_late", &[0, 2]),
                ShiftKind::Early => continue,
            };
            let e = sum(&mut span.iter().map(|k| s + k).filter(|&t| t <= ns).map(|t| row[t]));
            b.row(format!("{fam}({},{s})", nurse_name(n)), &e, Sense::Le, 1.0);
        }
    }
    b.finish()
}

/// 0/1 point of a roster in the variable order of [`export_roster_bip`].
pub fn roster_point(req: &RosterRequest, roster: &Roster) -> Vec<f64> {
    let ns = req.num_shifts();
    let mut x = Vec::with_capacity(req.nurse_skills.len() * ns);
    for n in 0..req.nurse_skills.len() {
        for s in 1..=ns {
            x.push(if roster.works(n, s) { 1.0 } else { 0.0 });
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roster::solve_roster;

    #[test]
    fn one_day_three_variables_per_nurse() {
        let req = RosterRequest::uniform(1, vec![2, 2, 2], [[1, 0, 0]; 3], 5);
        let m = export_roster_bip(&req);
        assert_eq!(m.vars.len(), 9);
        assert!(m.vars.iter().filter(|v| v.name.starts_with("assign(n1,")).count() == 3);
    }

    #[test]
    fn rest_rows_couple_the_right_shifts() {
        let req = RosterRequest::uniform(2, vec![2], [[1, 0, 0]; 3], 5);
        let m = export_roster_bip(&req);
        let names = |row: &str| -> Vec<String> {
            m.row(row).unwrap().terms.iter().map(|&(i, _)| m.vars[i].name.clone()).collect()
        };
        assert_eq!(names("c_after_night(n1,3)"), ["assign(n1,3)", "assign(n1,4)", "assign(n1,5)"]);
        assert_eq!(names("c_after_late(n1,2)"), ["assign(n1,2)", "assign(n1,4)"]);
        assert_eq!(names("c_after_night(n1,6)"), ["assign(n1,6)"]);
        assert_eq!(names("c_one_per_day(n1,4)"), ["assign(n1,4)", "assign(n1,5)", "assign(n1,6)"]);
    }

    #[test]
    fn solved_roster_satisfies_every_row() {
        let req = RosterRequest::uniform(7, vec![1, 1, 2, 2, 2, 2, 2, 3, 3, 3], [[1, 1, 1], [1, 1, 0], [1, 0, 1]], 5);
        let roster = solve_roster(&req).unwrap();
        let m = export_roster_bip(&req);
        let x = roster_point(&req, &roster);
        assert!(m.violations(&x, 1e-9).is_empty());
        assert_eq!(m.objective_value(&x), roster.total_assignments() as f64);
    }
}
