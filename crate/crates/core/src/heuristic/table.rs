//! Contribution table of one day, backed by per-component caches.
//!
//! A candidate `(patient, room, triple)` costs
//!
//! ```text
//! room_part(p, r) + sum_k nurse_part(p, n_k) + sum_k visit_part(n_k, r) + pair_fix(p, triple)
//! ```
//!
//! where the room part holds the transfer, age, gender, equipment and
//! heterogeneity terms, the nurse part the continuity, skill, load and
//! fairness terms of one nurse, and the visit part the room-count and
//! walking terms. Overall fairness is summed per nurse against everyone; the
//! pair fix replaces the three pairs inside the triple by their joint delta.

use super::het::Heterogeneity;
use super::state::PartialState;
use crate::model::{Gender, ShiftCalendar, Ward};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub patient: usize,
    pub room: usize,
    /// Early, late and night nurse.
    pub triple: [usize; 3],
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct ContributionTable {
    day: usize,
    shifts: [usize; 3],
    /// Sorted by identifier.
    patients: Vec<usize>,
    rooms: Vec<usize>,
    /// Rostered nurses per shift of the day.
    staff: [Vec<usize>; 3],
    /// Staff positions, sorted by (early, late, night) nurse identifiers.
    triples: Vec<[usize; 3]>,
    patient_alive: Vec<bool>,
    room_alive: Vec<bool>,
    keep: Option<Vec<bool>>,
    values: Vec<f64>,
    room_part: Vec<f64>,
    nurse_part: [Vec<f64>; 3],
    rel_step: [Vec<f64>; 3],
    visit_part: [Vec<f64>; 3],
}

fn sorted_by_id(mut idx: Vec<usize>, id: impl Fn(usize) -> String) -> Vec<usize> {
    idx.sort_by_key(|&i| id(i));
    idx
}

impl ContributionTable {
    /// Builds the table for `day` from the current state. With `cap`, only
    /// the `cap` cheapest triples per (patient, room) are kept.
    pub fn build(ward: &Ward, st: &PartialState, het: &Heterogeneity, day: usize, cap: Option<usize>) -> Self {
        let shifts = ShiftCalendar::shifts_of_day(day);
        let patients = sorted_by_id(ward.patients_on_day(day), |p| ward.patients[p].id.clone());
        let rooms = sorted_by_id((0..ward.rooms.len()).collect(), |r| ward.rooms[r].id.clone());
        let staff = shifts.map(|s| ward.on_shift[s].clone());
        let mut triples = Vec::with_capacity(staff.iter().map(Vec::len).product());
        for e in 0..staff[0].len() {
            for l in 0..staff[1].len() {
                for n in 0..staff[2].len() {
                    triples.push([e, l, n]);
                }
            }
        }
        triples.sort_by(|a, b| {
            let key = |t: &[usize; 3]| [0, 1, 2].map(|k| ward.nurses[staff[k][t[k]]].id.clone());
            key(a).cmp(&key(b))
        });
        let room_alive = rooms.iter().map(|&r| !st.is_full(ward, r, day)).collect();
        let np = patients.len();
        let mut t = Self {
            day,
            shifts,
            patient_alive: vec![true; np],
            room_alive,
            keep: None,
            values: vec![0.0; np * rooms.len() * triples.len()],
            room_part: vec![0.0; np * rooms.len()],
            nurse_part: [0, 1, 2].map(|k| vec![0.0; np * staff[k].len()]),
            rel_step: [0, 1, 2].map(|k| vec![0.0; np * staff[k].len()]),
            visit_part: [0, 1, 2].map(|k| vec![0.0; staff[k].len() * rooms.len()]),
            patients,
            rooms,
            staff,
            triples,
        };
        t.refresh(ward, st, het);
        if let Some(k) = cap {
            let nt = t.triples.len();
            let mut keep = vec![false; t.values.len()];
            for base in (0..t.values.len()).step_by(nt.max(1)) {
                let mut order: Vec<usize> = (0..nt).collect();
                order.sort_by(|&a, &b| t.values[base + a].total_cmp(&t.values[base + b]).then(a.cmp(&b)));
                for &i in order.iter().take(k) {
                    keep[base + i] = true;
                }
            }
            t.keep = Some(keep);
        }
        t
    }

    pub fn day(&self) -> usize {
        self.day
    }

    fn idx(&self, pi: usize, ri: usize, ti: usize) -> usize {
        (pi * self.rooms.len() + ri) * self.triples.len() + ti
    }

    fn alive(&self, pi: usize, ri: usize, ti: usize) -> bool {
        self.patient_alive[pi] && self.room_alive[ri] && self.keep.as_ref().is_none_or(|k| k[self.idx(pi, ri, ti)])
    }

    fn nurse(&self, k: usize, pos: usize) -> usize {
        self.staff[k][pos]
    }

    /// Recomputes every cache and every live entry from the state.
    fn refresh(&mut self, ward: &Ward, st: &PartialState, het: &Heterogeneity) {
        let w = ward.weights;
        let nr = self.rooms.len();
        for (pi, &p) in self.patients.iter().enumerate() {
            if !self.patient_alive[pi] {
                continue;
            }
            let pt = &ward.patients[p];
            for (ri, &r) in self.rooms.iter().enumerate() {
                if !self.room_alive[ri] {
                    continue;
                }
                let occ = &st.occupants[self.day][r];
                let mut v = 0.0;
                let prev = if self.day > pt.first_day { st.assignment.room(p, self.day - 1) } else { pt.prev_room };
                if prev.is_some_and(|q| q != r) {
                    v += w.transfers;
                }
                if let (Some(lo), Some(hi)) = (
                    occ.iter().map(|&q| ward.patients[q].agegroup).min(),
                    occ.iter().map(|&q| ward.patients[q].agegroup).max(),
                ) {
                    let g = pt.agegroup;
                    v += w.inconvenience * (f64::from(hi.max(g) - lo.min(g)) - f64::from(hi - lo));
                }
                let (mut f, mut m) = (false, false);
                for &q in occ {
                    match ward.patients[q].gender {
                        Gender::F => f = true,
                        Gender::M => m = true,
                    }
                }
                let opposite = match pt.gender {
                    Gender::F => m,
                    Gender::M => f,
                };
                if opposite && !(f && m) {
                    v += w.gender;
                }
                if pt.equipment[self.day] & !ward.rooms[r].equipment != 0 {
                    v += w.equipment;
                }
                let h = occ.iter().map(|&q| het.get(p, q)).fold(0.0, f64::max);
                v += w.heterogeneity * h;
                self.room_part[pi * nr + ri] = v;
            }
            for k in 0..3 {
                let s = self.shifts[k];
                let ns = self.staff[k].len();
                for pos in 0..ns {
                    let n = self.nurse(k, pos);
                    let nurse = &ward.nurses[n];
                    let mut v = 0.0;
                    if !pt.prev_nurse[n] && !st.ever[p][n] {
                        v += w.continuity;
                    }
                    let mut slf = 0.0;
                    let req = pt.skillreq[s];
                    if k < 2 && req >= 2 && nurse.skill < req {
                        slf += 1.0;
                    }
                    let m = nurse.maxload[s];
                    let load = st.load[s][n];
                    slf += (load + pt.wload[s] - m).max(0.0) - (load - m).max(0.0);
                    let step = pt.wload[s] / m;
                    let rel = load / m;
                    for &j in &self.staff[k] {
                        if j != n {
                            let rj = st.rel(ward, j, s);
                            slf += (rel + step - rj).abs() - (rel - rj).abs();
                        }
                    }
                    let rn = st.total_rel[n];
                    for (j, &rj) in st.total_rel.iter().enumerate() {
                        if j != n {
                            slf += (rn + step - rj).abs() - (rn - rj).abs();
                        }
                    }
                    v += w.skill_load_fair * slf;
                    self.nurse_part[k][pi * ns + pos] = v;
                    self.rel_step[k][pi * ns + pos] = step;
                }
            }
        }
        for k in 0..3 {
            let s = self.shifts[k];
            for pos in 0..self.staff[k].len() {
                let n = self.nurse(k, pos);
                let visits = &st.visits[s][n];
                for (ri, &r) in self.rooms.iter().enumerate() {
                    let v = if visits.binary_search(&r).is_ok() {
                        0.0
                    } else {
                        let circ: f64 = visits.iter().map(|&q| ward.dist(r, q)).sum();
                        w.nurses_per_room + w.walking * (ward.circular[s] * circ + ward.star[s] * ward.star_dist[r])
                    };
                    self.visit_part[k][pos * nr + ri] = v;
                }
            }
        }
        for pi in 0..self.patients.len() {
            for ri in 0..nr {
                for ti in 0..self.triples.len() {
                    if self.alive(pi, ri, ti) {
                        let v = self.entry_value(st, pi, ri, ti, w.skill_load_fair);
                        let i = self.idx(pi, ri, ti);
                        self.values[i] = v;
                    }
                }
            }
        }
    }

    fn entry_value(&self, st: &PartialState, pi: usize, ri: usize, ti: usize, w_slf: f64) -> f64 {
        let nr = self.rooms.len();
        let t = self.triples[ti];
        let mut v = self.room_part[pi * nr + ri];
        let mut steps = [0.0; 3];
        let mut totals = [0.0; 3];
        for k in 0..3 {
            let ns = self.staff[k].len();
            v += self.nurse_part[k][pi * ns + t[k]] + self.visit_part[k][t[k] * nr + ri];
            steps[k] = self.rel_step[k][pi * ns + t[k]];
            totals[k] = st.total_rel[self.nurse(k, t[k])];
        }
        let mut fix = 0.0;
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let (ra, rb, da, db) = (totals[a], totals[b], steps[a], steps[b]);
            let joint = (ra + da - rb - db).abs() - (ra - rb).abs();
            let separate = (ra + da - rb).abs() - (ra - rb).abs() + (rb + db - ra).abs() - (rb - ra).abs();
            fix += joint - separate;
        }
        v + w_slf * fix
    }

    fn entry_at(&self, pi: usize, ri: usize, ti: usize) -> Entry {
        let t = self.triples[ti];
        Entry {
            patient: self.patients[pi],
            room: self.rooms[ri],
            triple: [0, 1, 2].map(|k| self.nurse(k, t[k])),
            value: self.values[self.idx(pi, ri, ti)],
        }
    }

    /// Cheapest live entry; ties go to the first in (patient id, room id,
    /// nurse ids) order.
    pub fn argmin(&self) -> Option<Entry> {
        let mut best: Option<(f64, usize, usize, usize)> = None;
        for pi in 0..self.patients.len() {
            if !self.patient_alive[pi] {
                continue;
            }
            for ri in 0..self.rooms.len() {
                if !self.room_alive[ri] {
                    continue;
                }
                for ti in 0..self.triples.len() {
                    if !self.alive(pi, ri, ti) {
                        continue;
                    }
                    let v = self.values[self.idx(pi, ri, ti)];
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, pi, ri, ti));
                    }
                }
            }
        }
        best.map(|(_, pi, ri, ti)| self.entry_at(pi, ri, ti))
    }

    /// Live entries in tie-break order.
    pub fn entries(&self) -> Vec<Entry> {
        let mut out = Vec::new();
        for pi in 0..self.patients.len() {
            for ri in 0..self.rooms.len() {
                for ti in 0..self.triples.len() {
                    if self.alive(pi, ri, ti) {
                        out.push(self.entry_at(pi, ri, ti));
                    }
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.entries().len()
    }

    pub fn is_empty(&self) -> bool {
        self.argmin().is_none()
    }

    /// Applies a fix that `st` already reflects: drops the patient, drops the
    /// room once full, and refreshes the remaining entries. Every entry is
    /// refreshed because overall fairness couples all nurses.
    pub fn update(&mut self, ward: &Ward, st: &PartialState, het: &Heterogeneity, chosen: &Entry) {
        if let Some(pi) = self.patients.iter().position(|&p| p == chosen.patient) {
            self.patient_alive[pi] = false;
        }
        if let Some(ri) = self.rooms.iter().position(|&r| r == chosen.room) {
            if st.is_full(ward, chosen.room, self.day) {
                self.room_alive[ri] = false;
            }
        }
        self.refresh(ward, st, het);
    }
}
