//! Dense, index-based view of an [`Instance`] used by every solver.
//!
//! Entities keep their input order; vectors indexed by shift or day are
//! 1-based (slot 0 unused) so indices read the same as in the model.

use std::collections::HashMap;

use super::calendar::ShiftCalendar;
use super::instance::{Gender, Instance, ObjectiveWeights};
use super::validate::validate_instance;
use crate::error::ModelError;

#[derive(Debug, Clone)]
pub struct WardRoom {
    pub id: String,
    pub beds: usize,
    pub equipment: u64,
}

#[derive(Debug, Clone)]
pub struct WardPatient {
    pub id: String,
    pub gender: Gender,
    pub agegroup: u32,
    pub adshift: usize,
    pub dishift: usize,
    pub first_shift: usize,
    pub last_shift: usize,
    pub first_day: usize,
    pub last_day: usize,
    pub prev_room: Option<usize>,
    /// Indexed by nurse.
    pub prev_nurse: Vec<bool>,
    /// Indexed by shift; 0 outside the stay and on nights.
    pub skillreq: Vec<u8>,
    /// Indexed by shift; 0 outside the stay.
    pub wload: Vec<f64>,
    /// Indexed by day.
    pub equipment: Vec<u64>,
}

impl WardPatient {
    #[inline]
    pub fn in_ward_shift(&self, s: usize) -> bool {
        self.first_shift <= s && s <= self.last_shift
    }

    #[inline]
    pub fn in_ward_day(&self, d: usize) -> bool {
        self.first_day <= d && d <= self.last_day
    }

    pub fn days(&self) -> std::ops::RangeInclusive<usize> {
        self.first_day..=self.last_day
    }

    pub fn shifts(&self) -> std::ops::RangeInclusive<usize> {
        self.first_shift..=self.last_shift
    }
}

#[derive(Debug, Clone)]
pub struct WardNurse {
    pub id: String,
    pub skill: u8,
    /// Indexed by shift.
    pub rostered: Vec<bool>,
    /// Indexed by shift; 0 where not rostered.
    pub maxload: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Ward {
    pub calendar: ShiftCalendar,
    pub rooms: Vec<WardRoom>,
    pub patients: Vec<WardPatient>,
    pub nurses: Vec<WardNurse>,
    room_dist: Vec<f64>,
    /// Sum over additional rooms of the distance to each room.
    pub star_dist: Vec<f64>,
    /// Indexed by shift.
    pub circular: Vec<f64>,
    /// Indexed by shift.
    pub star: Vec<f64>,
    pub weights: ObjectiveWeights,
    /// Nurses rostered on each shift, ascending index.
    pub on_shift: Vec<Vec<usize>>,
    room_index: HashMap<String, usize>,
    patient_index: HashMap<String, usize>,
    nurse_index: HashMap<String, usize>,
}

impl Ward {
    /// Compiles an instance into dense form. Structural violations (schema or
    /// reference) are fatal; capacity and coverage shortfalls are left to the
    /// solvers, which report them per day.
    pub fn compile(inst: &Instance) -> Result<Self, ModelError> {
        let structural: Vec<_> = validate_instance(inst).into_iter().filter(|v| v.kind.is_structural()).collect();
        if !structural.is_empty() {
            return Err(ModelError::Invalid(structural));
        }
        let calendar = inst.calendar()?;
        let ns = calendar.num_shifts();
        let nd = calendar.num_days();

        let equip_bit: HashMap<&str, u64> =
            inst.equipment_types.iter().enumerate().map(|(i, e)| (e.as_str(), 1u64 << i)).collect();
        let mask =
            |set: &std::collections::BTreeSet<String>| set.iter().map(|e| equip_bit[e.as_str()]).fold(0, |a, b| a | b);

        let rooms: Vec<WardRoom> = inst
            .rooms
            .iter()
            .map(|r| WardRoom { id: r.id.clone(), beds: r.num_beds as usize, equipment: mask(&r.equipment) })
            .collect();
        let room_index: HashMap<String, usize> = rooms.iter().enumerate().map(|(i, r)| (r.id.clone(), i)).collect();
        let nurse_index: HashMap<String, usize> =
            inst.nurses.iter().enumerate().map(|(i, n)| (n.id.clone(), i)).collect();

        let nr = rooms.len();
        let mut room_dist = vec![0.0; nr * nr];
        for (i, a) in rooms.iter().enumerate() {
            for (j, b) in rooms.iter().enumerate() {
                room_dist[i * nr + j] = inst.distances.room(&a.id, &b.id).unwrap_or(0.0);
            }
        }
        let star_dist = rooms
            .iter()
            .map(|r| inst.additional_rooms.iter().map(|a| inst.distances.additional(&a.id, &r.id).unwrap_or(0.0)).sum())
            .collect();

        let patients = inst
            .patients
            .iter()
            .map(|p| {
                let stay = p.stay_shifts(&calendar);
                let (first_shift, last_shift) = (*stay.start(), *stay.end());
                let mut skillreq = vec![0u8; ns + 1];
                let mut wload = vec![0.0; ns + 1];
                let mut equipment = vec![0u64; nd + 1];
                for (&s, &l) in &p.skillreq {
                    skillreq[s] = l;
                }
                for (&s, &w) in &p.workload {
                    wload[s] = w;
                }
                for (&s, set) in &p.equipment_req {
                    equipment[ShiftCalendar::day_of(s)] = mask(set);
                }
                let mut prev_nurse = vec![false; inst.nurses.len()];
                for n in &p.prev_nurses {
                    prev_nurse[nurse_index[n]] = true;
                }
                WardPatient {
                    id: p.id.clone(),
                    gender: p.gender,
                    agegroup: p.agegroup(),
                    adshift: p.adshift,
                    dishift: p.dishift,
                    first_shift,
                    last_shift,
                    first_day: ShiftCalendar::day_of(first_shift),
                    last_day: ShiftCalendar::day_of(last_shift),
                    prev_room: p.prev_room.as_ref().map(|r| room_index[r]),
                    prev_nurse,
                    skillreq,
                    wload,
                    equipment,
                }
            })
            .collect::<Vec<_>>();
        let patient_index = patients.iter().enumerate().map(|(i, p)| (p.id.clone(), i)).collect();

        let mut on_shift = vec![Vec::new(); ns + 1];
        let nurses = inst
            .nurses
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let mut rostered = vec![false; ns + 1];
                let mut maxload = vec![0.0; ns + 1];
                for &s in &n.shifts {
                    rostered[s] = true;
                    maxload[s] = n.maxload[&s];
                    on_shift[s].push(i);
                }
                WardNurse { id: n.id.clone(), skill: n.skill, rostered, maxload }
            })
            .collect();

        let per_shift = |map: &std::collections::BTreeMap<usize, f64>| {
            let mut v = vec![0.0; ns + 1];
            for (&s, &w) in map {
                v[s] = w;
            }
            v
        };

        Ok(Ward {
            calendar,
            rooms,
            patients,
            nurses,
            room_dist,
            star_dist,
            circular: per_shift(&inst.walk_weights.circular),
            star: per_shift(&inst.walk_weights.star),
            weights: inst.objective_weights,
            on_shift,
            room_index,
            patient_index,
            nurse_index,
        })
    }

    #[inline]
    pub fn num_days(&self) -> usize {
        self.calendar.num_days()
    }

    #[inline]
    pub fn num_shifts(&self) -> usize {
        self.calendar.num_shifts()
    }

    #[inline]
    pub fn dist(&self, a: usize, b: usize) -> f64 {
        self.room_dist[a * self.rooms.len() + b]
    }

    pub fn room_idx(&self, id: &str) -> Result<usize, ModelError> {
        self.room_index.get(id).copied().ok_or_else(|| ModelError::UnknownId { kind: "room", id: id.into() })
    }

    pub fn patient_idx(&self, id: &str) -> Result<usize, ModelError> {
        self.patient_index.get(id).copied().ok_or_else(|| ModelError::UnknownId { kind: "patient", id: id.into() })
    }

    pub fn nurse_idx(&self, id: &str) -> Result<usize, ModelError> {
        self.nurse_index.get(id).copied().ok_or_else(|| ModelError::UnknownId { kind: "nurse", id: id.into() })
    }

    /// Patients in the ward on `day`, ascending index.
    pub fn patients_on_day(&self, day: usize) -> Vec<usize> {
        (0..self.patients.len()).filter(|&p| self.patients[p].in_ward_day(day)).collect()
    }

    pub fn total_beds(&self) -> usize {
        self.rooms.iter().map(|r| r.beds).sum()
    }
}
