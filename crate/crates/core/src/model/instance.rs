use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::calendar::ShiftCalendar;
use crate::error::ModelError;

pub const SCHEMA_VERSION: u32 = 1;

/// Ages at or above this bound would need a larger big-M in the age rows of
/// the exported model, so they are rejected at validation.
pub const MAX_AGE: u32 = 129;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gender {
    F,
    M,
}

impl Gender {
    pub fn flipped(self) -> Self {
        match self {
            Gender::F => Gender::M,
            Gender::M => Gender::F,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Room {
    pub id: String,
    pub num_beds: u32,
    #[serde(default)]
    pub equipment: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditionalRoom {
    pub id: String,
}

/// Walking distances keyed `from -> to -> distance`. `room_room` is a full
/// room-by-room matrix; `add_room` maps each additional room to every room.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    #[serde(default)]
    pub room_room: BTreeMap<String, BTreeMap<String, f64>>,
    #[serde(default)]
    pub add_room: BTreeMap<String, BTreeMap<String, f64>>,
}

impl DistanceMatrix {
    pub fn room(&self, a: &str, b: &str) -> Option<f64> {
        self.room_room.get(a).and_then(|row| row.get(b)).copied()
    }

    pub fn additional(&self, a: &str, r: &str) -> Option<f64> {
        self.add_room.get(a).and_then(|row| row.get(r)).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Patient {
    pub id: String,
    pub gender: Gender,
    pub age: u32,
    /// 0 for patients carried over from the previous period, else an early shift.
    pub adshift: usize,
    /// A night shift, or `S + 1` when the patient stays past the horizon.
    pub dishift: usize,
    /// Required skill level per in-ward early/late shift (0..=2).
    #[serde(default)]
    pub skillreq: BTreeMap<usize, u8>,
    /// Workload per in-ward shift.
    #[serde(default)]
    pub workload: BTreeMap<usize, f64>,
    /// Desired equipment per in-ward early shift.
    #[serde(default)]
    pub equipment_req: BTreeMap<usize, BTreeSet<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prev_room: Option<String>,
    #[serde(default)]
    pub prev_nurses: BTreeSet<String>,
}

impl Patient {
    pub fn agegroup(&self) -> u32 {
        self.age / 10
    }

    pub fn in_ward(&self, shift: usize) -> bool {
        self.adshift <= shift && shift <= self.dishift
    }

    /// First and last in-ward shift clipped to the calendar.
    pub fn stay_shifts(&self, cal: &ShiftCalendar) -> std::ops::RangeInclusive<usize> {
        self.adshift.max(1)..=self.dishift.min(cal.num_shifts())
    }

    pub fn stay_days(&self, cal: &ShiftCalendar) -> std::ops::RangeInclusive<usize> {
        let s = self.stay_shifts(cal);
        ShiftCalendar::day_of(*s.start())..=ShiftCalendar::day_of(*s.end())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Nurse {
    pub id: String,
    /// 1 = trainee, 2 = regular, 3 = experienced.
    pub skill: u8,
    pub shifts: BTreeSet<usize>,
    pub maxload: BTreeMap<usize, f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WalkWeights {
    pub circular: BTreeMap<usize, f64>,
    pub star: BTreeMap<usize, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ObjectiveWeights {
    pub transfers: f64,
    pub inconvenience: f64,
    pub gender: f64,
    pub equipment: f64,
    pub continuity: f64,
    /// Shared weight of skill violations, excess load and both fairness terms.
    pub skill_load_fair: f64,
    pub nurses_per_room: f64,
    pub walking: f64,
    /// Only used by the greedy heuristic, never part of the evaluated objective.
    pub heterogeneity: f64,
}

impl Default for ObjectiveWeights {
    fn default() -> Self {
        Self {
            transfers: 11.0,
            inconvenience: 1.0,
            gender: 5.0,
            equipment: 5.0,
            continuity: 1.0,
            skill_load_fair: 5.0,
            nurses_per_room: 2.0,
            walking: 0.05,
            heterogeneity: 1.0,
        }
    }
}

impl ObjectiveWeights {
    pub fn as_array(&self) -> [f64; 9] {
        [
            self.transfers,
            self.inconvenience,
            self.gender,
            self.equipment,
            self.continuity,
            self.skill_load_fair,
            self.nurses_per_room,
            self.walking,
            self.heterogeneity,
        ]
    }
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub num_days: usize,
    pub rooms: Vec<Room>,
    #[serde(default)]
    pub additional_rooms: Vec<AdditionalRoom>,
    #[serde(default)]
    pub distances: DistanceMatrix,
    #[serde(default)]
    pub equipment_types: Vec<String>,
    #[serde(default)]
    pub patients: Vec<Patient>,
    #[serde(default)]
    pub nurses: Vec<Nurse>,
    #[serde(default)]
    pub walk_weights: WalkWeights,
    #[serde(default)]
    pub objective_weights: ObjectiveWeights,
}

impl Instance {
    pub fn calendar(&self) -> Result<ShiftCalendar, ModelError> {
        ShiftCalendar::new(self.num_days)
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        // Serialization of plain data with string keys cannot fail.
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ModelError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ModelError> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn total_beds(&self) -> u32 {
        self.rooms.iter().map(|r| r.num_beds).sum()
    }

    /// Patients in the ward during `shift`.
    pub fn in_ward_count(&self, shift: usize) -> usize {
        self.patients.iter().filter(|p| p.in_ward(shift)).count()
    }

    pub fn nurses_on(&self, shift: usize) -> impl Iterator<Item = &Nurse> {
        self.nurses.iter().filter(move |n| n.shifts.contains(&shift))
    }
}
