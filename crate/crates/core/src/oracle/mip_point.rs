//! Substitutes a solution into an exported integrated model.
//!
//! Auxiliary variables get their tightest feasible values; names are
//! rebuilt here from identifiers, independently of the exporter.

use std::collections::HashMap;

use crate::error::SolveError;
use crate::lp::LinearModel;
use crate::model::{Assignment, Gender, Solution, Ward};

#[derive(Debug, Clone, PartialEq)]
pub struct MipPointReport {
    pub feasible: bool,
    /// Violated rows (and bounds, prefixed `bound`).
    pub violated: Vec<String>,
    pub objective: f64,
}

fn completion(w: &Ward, a: &Assignment) -> HashMap<String, f64> {
    let mut v: HashMap<String, f64> = HashMap::new();
    let b = |c: bool| if c { 1.0 } else { 0.0 };
    let nr = w.rooms.len();
    let room = |p: usize, d: usize, r: usize| b(a.rooms[p][d] == Some(r));

    for (p, pt) in w.patients.iter().enumerate() {
        for d in pt.first_day..=pt.last_day {
            for r in 0..nr {
                v.insert(format!("y({},{},{})", pt.id, w.rooms[r].id, 3 * d - 2), room(p, d, r));
            }
        }
        if pt.adshift == 0 {
            let prev = pt.prev_room.expect("carry-over patient");
            let t = (0..nr).filter(|&r| r != prev).map(|r| room(p, 1, r)).fold(0.0, f64::max);
            v.insert(format!("trans({},0)", pt.id), t);
        }
        for d in pt.first_day..pt.last_day {
            let t = (0..nr).map(|r| room(p, d + 1, r) - room(p, d, r)).fold(0.0, f64::max);
            v.insert(format!("trans({},{})", pt.id, 3 * d), t);
        }
    }
    for d in 1..=w.num_days() {
        let s = 3 * d - 2;
        for r in 0..nr {
            let rid = &w.rooms[r].id;
            let inside: Vec<usize> =
                (0..w.patients.len()).filter(|&p| w.patients[p].in_ward_day(d) && a.rooms[p][d] == Some(r)).collect();
            let f = b(inside.iter().any(|&p| w.patients[p].gender == Gender::F));
            let m = b(inside.iter().any(|&p| w.patients[p].gender == Gender::M));
            v.insert(format!("f_in_room({rid},{s})"), f);
            v.insert(format!("m_in_room({rid},{s})"), m);
            v.insert(format!("vio_gender({rid},{s})"), (f + m - 1.0).max(0.0));
            let ages = inside.iter().map(|&p| f64::from(w.patients[p].agegroup));
            v.insert(format!("agemax({rid},{s})"), ages.clone().fold(0.0, f64::max));
            v.insert(
                format!("agemin({rid},{s})"),
                if inside.is_empty() { 0.0 } else { ages.fold(f64::INFINITY, f64::min) },
            );
        }
    }

    let nn = w.nurses.len();
    let x = |p: usize, s: usize, n: usize| b(a.nurses[p][s] == Some(n));
    let mut rel = vec![vec![0.0; nn]; w.num_shifts() + 1];
    let mut load = vec![vec![0.0; nn]; w.num_shifts() + 1];
    for (p, pt) in w.patients.iter().enumerate() {
        for s in pt.first_shift..=pt.last_shift {
            for n in (0..nn).filter(|&n| w.nurses[n].rostered[s]) {
                v.insert(format!("x({},{},{s})", pt.id, w.nurses[n].id), x(p, s, n));
                load[s][n] += x(p, s, n) * pt.wload[s];
                rel[s][n] += x(p, s, n) * pt.wload[s] / w.nurses[n].maxload[s];
            }
            if s % 3 != 0 && pt.skillreq[s] >= 2 {
                let ok: f64 = (0..nn)
                    .filter(|&n| w.nurses[n].rostered[s] && w.nurses[n].skill >= pt.skillreq[s])
                    .map(|n| x(p, s, n))
                    .sum();
                v.insert(format!("vio_skill({},{s})", pt.id), 1.0 - ok);
            }
        }
        for n in 0..nn {
            let assigned =
                (pt.first_shift..=pt.last_shift).any(|s| w.nurses[n].rostered[s] && a.nurses[p][s] == Some(n));
            v.insert(format!("ever({},{})", pt.id, w.nurses[n].id), b(pt.prev_nurse[n] || assigned));
        }
    }
    let mut total = vec![0.0; nn];
    for s in 1..=w.num_shifts() {
        for n in (0..nn).filter(|&n| w.nurses[n].rostered[s]) {
            let id = &w.nurses[n].id;
            total[n] += rel[s][n];
            v.insert(format!("vio_load({id},{s})"), (load[s][n] - w.nurses[n].maxload[s]).max(0.0));
            for m in (0..nn).filter(|&m| m != n && w.nurses[m].rostered[s]) {
                v.insert(format!("vio_fair({id},{},{s})", w.nurses[m].id), (rel[s][n] - rel[s][m]).max(0.0));
            }
            let mut inr = vec![0.0; nr];
            for (p, pt) in w.patients.iter().enumerate() {
                if pt.in_ward_shift(s) && a.nurses[p][s] == Some(n) {
                    if let Some(r) = a.rooms[p][s.div_ceil(3)] {
                        inr[r] = 1.0;
                    }
                }
            }
            let mut dist = 0.0;
            for r in 0..nr {
                v.insert(format!("in_room({id},{},{s})", w.rooms[r].id), inr[r]);
                dist += w.star[s] * w.star_dist[r] * inr[r];
                for q in (0..nr).filter(|&q| q != r) {
                    let both = (inr[r] + inr[q] - 1.0).max(0.0);
                    v.insert(format!("both({id},{},{},{s})", w.rooms[r].id, w.rooms[q].id), both);
                    dist += 0.5 * w.circular[s] * w.dist(r, q) * both;
                }
            }
            v.insert(format!("dist({id},{s})"), dist);
        }
    }
    for n in 0..nn {
        for m in (0..nn).filter(|&m| m != n) {
            v.insert(format!("vio_fair({},{})", w.nurses[n].id, w.nurses[m].id), (total[n] - total[m]).max(0.0));
        }
    }
    v
}

/// Checks every row of a full model at the solution's tight completion and
/// evaluates the objective.
pub fn check_mip_point(ward: &Ward, model: &LinearModel, sol: &Solution) -> Result<MipPointReport, SolveError> {
    let a = Assignment::from_solution(ward, sol)?;
    let mut values = completion(ward, &a);
    let mut x = Vec::with_capacity(model.vars.len());
    for var in &model.vars {
        let val = values
            .remove(&var.name)
            .ok_or_else(|| SolveError::Mismatch(format!("model variable `{}` has no counterpart", var.name)))?;
        x.push(val);
    }
    if let Some(extra) = values.keys().min() {
        return Err(SolveError::Mismatch(format!("variable `{extra}` is missing from the model")));
    }
    let violated = model.violations(&x, 1e-6);
    Ok(MipPointReport { feasible: violated.is_empty(), violated, objective: model.objective_value(&x) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::eval_total;
    use crate::instgen::generate_tiny;
    use crate::lp::{export_full_mip, export_pra, ExportOptions};
    use crate::random::random_assignment;

    #[test]
    fn random_points_are_feasible_with_matching_objective() {
        for seed in 0..10 {
            let w = Ward::compile(&generate_tiny(seed)).unwrap();
            let m = export_full_mip(&w, ExportOptions::default()).unwrap();
            for k in 0..5 {
                let sol = random_assignment(&w, 100 * seed + k).unwrap().to_solution(&w, "t");
                let rep = check_mip_point(&w, &m, &sol).unwrap();
                assert!(rep.feasible, "seed {seed}/{k}: {:?}", rep.violated);
                let total = eval_total(&w, &sol).unwrap().weighted_total;
                assert!((rep.objective - total).abs() < 1e-6, "seed {seed}/{k}: {} vs {total}", rep.objective);
            }
        }
    }

    #[test]
    fn over_capacity_reports_the_capacity_row() {
        let w = Ward::compile(&generate_tiny(1)).unwrap();
        let m = export_full_mip(&w, ExportOptions::default()).unwrap();
        let mut a = random_assignment(&w, 0).unwrap();
        let d = (1..=w.num_days()).find(|&d| w.patients_on_day(d).len() >= 2);
        let Some(d) = d else { return };
        let r = (0..w.rooms.len()).min_by_key(|&r| w.rooms[r].beds).unwrap();
        for p in w.patients_on_day(d) {
            a.rooms[p][d] = Some(r);
        }
        if w.patients_on_day(d).len() <= w.rooms[r].beds {
            return;
        }
        let rep = check_mip_point(&w, &m, &a.to_solution(&w, "t")).unwrap();
        assert!(!rep.feasible);
        assert!(rep.violated.contains(&format!("c_cap({},{})", w.rooms[r].id, 3 * d - 2)));
    }

    #[test]
    fn partial_models_are_a_mismatch() {
        let w = Ward::compile(&generate_tiny(4)).unwrap();
        let m = export_pra(&w, ExportOptions::default()).unwrap();
        let sol = random_assignment(&w, 1).unwrap().to_solution(&w, "t");
        assert!(matches!(check_mip_point(&w, &m, &sol), Err(SolveError::Mismatch(_))));
    }
}
