use crate::model::{Assignment, ShiftCalendar, Ward};

/// Assignment prefix built by the greedy, with the running aggregates the
/// contribution rules read.
#[derive(Debug, Clone)]
pub struct PartialState {
    pub assignment: Assignment,
    /// Assigned workload, `load[shift][nurse]`.
    pub load: Vec<Vec<f64>>,
    /// Sum of relative loads over all shifts, per nurse.
    pub total_rel: Vec<f64>,
    /// Rooms with assigned patients, `visits[shift][nurse]`, sorted.
    pub visits: Vec<Vec<Vec<usize>>>,
    /// Nurses assigned so far, `ever[patient][nurse]` (previous nurses excluded).
    pub ever: Vec<Vec<bool>>,
    /// Patients per room and day, `occupants[day][room]`.
    pub occupants: Vec<Vec<Vec<usize>>>,
}

impl PartialState {
    pub fn new(ward: &Ward) -> Self {
        let nn = ward.nurses.len();
        Self {
            assignment: Assignment::empty(ward),
            load: vec![vec![0.0; nn]; ward.num_shifts() + 1],
            total_rel: vec![0.0; nn],
            visits: vec![vec![Vec::new(); nn]; ward.num_shifts() + 1],
            ever: vec![vec![false; nn]; ward.patients.len()],
            occupants: vec![vec![Vec::new(); ward.rooms.len()]; ward.num_days() + 1],
        }
    }

    pub fn rel(&self, ward: &Ward, n: usize, s: usize) -> f64 {
        self.load[s][n] / ward.nurses[n].maxload[s]
    }

    pub fn is_full(&self, ward: &Ward, r: usize, day: usize) -> bool {
        self.occupants[day][r].len() >= ward.rooms[r].beds
    }

    /// Fixes room `r` and the nurse triple (early, late, night) for patient
    /// `p` on `day`.
    pub fn fix(&mut self, ward: &Ward, p: usize, day: usize, triple: [usize; 3], r: usize) {
        self.assignment.rooms[p][day] = Some(r);
        self.occupants[day][r].push(p);
        for (s, &n) in ShiftCalendar::shifts_of_day(day).into_iter().zip(&triple) {
            self.assignment.nurses[p][s] = Some(n);
            let w = ward.patients[p].wload[s];
            self.load[s][n] += w;
            self.total_rel[n] += w / ward.nurses[n].maxload[s];
            if let Err(pos) = self.visits[s][n].binary_search(&r) {
                self.visits[s][n].insert(pos, r);
            }
            self.ever[p][n] = true;
        }
    }
}
