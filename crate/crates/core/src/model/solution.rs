use std::path::Path;

use serde::{Deserialize, Serialize};

use super::instance::SCHEMA_VERSION;
use super::ward::Ward;
use crate::error::ModelError;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RoomAssignment {
    pub patient: String,
    pub day: usize,
    pub room: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NurseAssignment {
    pub patient: String,
    pub shift: usize,
    pub nurse: String,
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

/// Patient-to-room per day and patient-to-nurse per shift, by identifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    #[serde(default)]
    pub instance_ref: String,
    pub room_of: Vec<RoomAssignment>,
    pub nurse_of: Vec<NurseAssignment>,
}

impl Solution {
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ModelError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ModelError> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

/// Dense assignment: `rooms[p][d]` and `nurses[p][s]` with 1-based day and
/// shift slots. Only meaningful for in-ward days/shifts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub rooms: Vec<Vec<Option<usize>>>,
    pub nurses: Vec<Vec<Option<usize>>>,
}

impl Assignment {
    pub fn empty(ward: &Ward) -> Self {
        let np = ward.patients.len();
        Self { rooms: vec![vec![None; ward.num_days() + 1]; np], nurses: vec![vec![None; ward.num_shifts() + 1]; np] }
    }

    #[inline]
    pub fn room(&self, p: usize, day: usize) -> Option<usize> {
        self.rooms[p][day]
    }

    #[inline]
    pub fn nurse(&self, p: usize, shift: usize) -> Option<usize> {
        self.nurses[p][shift]
    }

    /// Room of patient `p` during `shift` (late and night shifts use the
    /// same day's room).
    #[inline]
    pub fn room_at_shift(&self, p: usize, shift: usize) -> Option<usize> {
        self.rooms[p][shift.div_ceil(3)]
    }

    /// Converts to the identifier form. Entries are emitted in patient order,
    /// then by day / shift.
    pub fn to_solution(&self, ward: &Ward, instance_ref: impl Into<String>) -> Solution {
        let mut room_of = Vec::new();
        let mut nurse_of = Vec::new();
        for (p, patient) in ward.patients.iter().enumerate() {
            for d in patient.days() {
                if let Some(r) = self.rooms[p][d] {
                    room_of.push(RoomAssignment {
                        patient: patient.id.clone(),
                        day: d,
                        room: ward.rooms[r].id.clone(),
                    });
                }
            }
            for s in patient.shifts() {
                if let Some(n) = self.nurses[p][s] {
                    nurse_of.push(NurseAssignment {
                        patient: patient.id.clone(),
                        shift: s,
                        nurse: ward.nurses[n].id.clone(),
                    });
                }
            }
        }
        Solution { schema_version: SCHEMA_VERSION, instance_ref: instance_ref.into(), room_of, nurse_of }
    }

    /// Resolves identifiers without checking feasibility. Later duplicates
    /// overwrite earlier ones; use `check_feasibility` to detect them.
    pub fn from_solution(ward: &Ward, sol: &Solution) -> Result<Self, ModelError> {
        let mut a = Self::empty(ward);
        for e in &sol.room_of {
            let p = ward.patient_idx(&e.patient)?;
            let r = ward.room_idx(&e.room)?;
            if e.day == 0 || e.day > ward.num_days() {
                return Err(ModelError::ShiftOutOfRange { shift: e.day, num_shifts: ward.num_days() });
            }
            a.rooms[p][e.day] = Some(r);
        }
        for e in &sol.nurse_of {
            let p = ward.patient_idx(&e.patient)?;
            let n = ward.nurse_idx(&e.nurse)?;
            if e.shift == 0 || e.shift > ward.num_shifts() {
                return Err(ModelError::ShiftOutOfRange { shift: e.shift, num_shifts: ward.num_shifts() });
            }
            a.nurses[p][e.shift] = Some(n);
        }
        Ok(a)
    }
}
