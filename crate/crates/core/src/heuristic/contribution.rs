//! Marginal cost of fixing one patient-day, computed directly from the
//! partial state without any caching.

use super::het::Heterogeneity;
use super::state::PartialState;
use crate::eval::walk_distance;
use crate::model::{Gender, ShiftCalendar, Ward};

/// Unweighted marginal deltas of one candidate, one field per objective term.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Delta {
    pub transfers: f64,
    pub inconvenience: f64,
    pub gender: f64,
    pub equipment: f64,
    pub continuity: f64,
    pub skill: f64,
    pub load: f64,
    pub fairness_shift: f64,
    pub fairness_overall: f64,
    pub nurses_per_room: f64,
    pub walking: f64,
    pub heterogeneity: f64,
}

impl Delta {
    pub fn weighted(&self, ward: &Ward) -> f64 {
        let w = &ward.weights;
        w.transfers * self.transfers
            + w.inconvenience * self.inconvenience
            + w.gender * self.gender
            + w.equipment * self.equipment
            + w.continuity * self.continuity
            + w.skill_load_fair * (self.skill + self.load + self.fairness_shift + self.fairness_overall)
            + w.nurses_per_room * self.nurses_per_room
            + w.walking * self.walking
            + w.heterogeneity * self.heterogeneity
    }
}

fn spread(groups: impl Iterator<Item = u32> + Clone) -> f64 {
    match (groups.clone().max(), groups.min()) {
        (Some(a), Some(b)) => f64::from(a - b),
        _ => 0.0,
    }
}

/// Term-by-term deltas of assigning room `r` and nurses `triple` to patient
/// `p` on `day`.
pub fn contribution_terms(
    ward: &Ward,
    st: &PartialState,
    het: &Heterogeneity,
    p: usize,
    day: usize,
    triple: [usize; 3],
    r: usize,
) -> Delta {
    let pt = &ward.patients[p];
    let shifts = ShiftCalendar::shifts_of_day(day);
    let occ = &st.occupants[day][r];
    let mut d = Delta::default();

    if day > pt.first_day {
        d.transfers = f64::from(u8::from(st.assignment.room(p, day - 1) != Some(r)));
    } else if let Some(prev) = pt.prev_room {
        d.transfers = f64::from(u8::from(prev != r));
    }

    let groups = occ.iter().map(|&q| ward.patients[q].agegroup);
    d.inconvenience = spread(groups.clone().chain(std::iter::once(pt.agegroup))) - spread(groups);

    let has = |g: Gender| occ.iter().any(|&q| ward.patients[q].gender == g);
    let mixed_before = has(Gender::F) && has(Gender::M);
    let mixed_after = has(pt.gender.flipped());
    d.gender = f64::from(u8::from(mixed_after && !mixed_before));

    d.equipment = f64::from(u8::from(pt.equipment[day] & !ward.rooms[r].equipment != 0));

    for (k, (&s, &n)) in shifts.iter().zip(&triple).enumerate() {
        if !pt.prev_nurse[n] && !st.ever[p][n] {
            d.continuity += 1.0;
        }
        let req = pt.skillreq[s];
        if k < 2 && req >= 2 && ward.nurses[n].skill < req {
            d.skill += 1.0;
        }
        let m = ward.nurses[n].maxload[s];
        let before = st.load[s][n];
        let after = before + pt.wload[s];
        d.load += (after - m).max(0.0) - (before - m).max(0.0);

        let (rel_old, rel_new) = (before / m, after / m);
        for &j in &ward.on_shift[s] {
            if j != n {
                let rj = st.rel(ward, j, s);
                d.fairness_shift += (rel_new - rj).abs() - (rel_old - rj).abs();
            }
        }

        let visits = &st.visits[s][n];
        if visits.binary_search(&r).is_err() {
            d.nurses_per_room += 1.0;
            let mut with_r = visits.clone();
            with_r.push(r);
            d.walking += walk_distance(ward, s, &with_r) - walk_distance(ward, s, visits);
        }
    }

    // overall fairness over every pair that involves a triple nurse
    let mut totals_new = st.total_rel.clone();
    for (&s, &n) in shifts.iter().zip(&triple) {
        totals_new[n] += pt.wload[s] / ward.nurses[n].maxload[s];
    }
    let in_triple = |n: usize| triple.contains(&n);
    for i in 0..ward.nurses.len() {
        for j in i + 1..ward.nurses.len() {
            if in_triple(i) || in_triple(j) {
                d.fairness_overall += (totals_new[i] - totals_new[j]).abs() - (st.total_rel[i] - st.total_rel[j]).abs();
            }
        }
    }

    d.heterogeneity = occ.iter().map(|&q| het.get(p, q)).fold(0.0, f64::max);
    d
}

/// Weighted marginal cost of one candidate, heterogeneity included.
pub fn calc_contribution(
    ward: &Ward,
    st: &PartialState,
    het: &Heterogeneity,
    p: usize,
    day: usize,
    triple: [usize; 3],
    r: usize,
) -> f64 {
    contribution_terms(ward, st, het, p, day, triple, r).weighted(ward)
}

/// `true` when every nurse of the triple works the matching shift of `day`.
pub fn triple_is_rostered(ward: &Ward, day: usize, triple: [usize; 3]) -> bool {
    triple.iter().zip(ShiftCalendar::shifts_of_day(day)).all(|(&n, s)| ward.nurses[n].rostered[s])
}
