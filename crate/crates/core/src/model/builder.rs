//! Small programmatic instance builder for fixtures and tests.

use std::collections::{BTreeMap, BTreeSet};

use super::calendar::{ShiftCalendar, ShiftKind};
use super::instance::*;

/// Walk-weight pattern per shift kind: (circular, star).
pub const WALK_PRESET: [(f64, f64); 3] = [(2.0, 1.0), (1.0, 1.0), (0.5, 2.0)];

pub fn walk_weights_preset(num_days: usize) -> WalkWeights {
    let mut w = WalkWeights::default();
    for s in 1..=3 * num_days {
        let (c, st) = WALK_PRESET[ShiftCalendar::kind_of(s).offset()];
        w.circular.insert(s, c);
        w.star.insert(s, st);
    }
    w
}

/// Three nurses `n1`, `n2`, `n3` covering every early, late and night shift
/// respectively, maxload 10.
pub fn one_nurse_per_shift(num_days: usize) -> Vec<Nurse> {
    ShiftKind::ALL
        .iter()
        .enumerate()
        .map(|(i, kind)| {
            let shifts: BTreeSet<usize> = (1..=num_days).map(|d| 3 * d - 2 + kind.offset()).collect();
            Nurse { id: format!("n{}", i + 1), skill: 2, maxload: shifts.iter().map(|&s| (s, 10.0)).collect(), shifts }
        })
        .collect()
}

/// A patient with neutral per-shift data (skill 0, workload 1, no equipment)
/// over the stay `adshift..=dishift`.
pub fn plain_patient(id: &str, gender: Gender, age: u32, adshift: usize, dishift: usize, num_days: usize) -> Patient {
    let cal = ShiftCalendar::new(num_days).expect("num_days >= 1");
    let mut p = Patient {
        id: id.into(),
        gender,
        age,
        adshift,
        dishift,
        skillreq: BTreeMap::new(),
        workload: BTreeMap::new(),
        equipment_req: BTreeMap::new(),
        prev_room: None,
        prev_nurses: BTreeSet::new(),
    };
    for s in p.stay_shifts(&cal) {
        p.workload.insert(s, 1.0);
        match ShiftCalendar::kind_of(s) {
            ShiftKind::Early => {
                p.skillreq.insert(s, 0);
                p.equipment_req.insert(s, BTreeSet::new());
            }
            ShiftKind::Late => {
                p.skillreq.insert(s, 0);
            }
            ShiftKind::Night => {}
        }
    }
    p
}

#[derive(Debug, Clone)]
pub struct InstanceBuilder {
    inst: Instance,
    explicit: BTreeMap<(String, String), f64>,
    explicit_add: BTreeMap<(String, String), f64>,
}

impl InstanceBuilder {
    pub fn new(num_days: usize) -> Self {
        Self {
            inst: Instance {
                schema_version: SCHEMA_VERSION,
                name: None,
                num_days,
                rooms: Vec::new(),
                additional_rooms: Vec::new(),
                distances: DistanceMatrix::default(),
                equipment_types: Vec::new(),
                patients: Vec::new(),
                nurses: Vec::new(),
                walk_weights: walk_weights_preset(num_days),
                objective_weights: ObjectiveWeights::default(),
            },
            explicit: BTreeMap::new(),
            explicit_add: BTreeMap::new(),
        }
    }

    pub fn name(mut self, name: &str) -> Self {
        self.inst.name = Some(name.into());
        self
    }

    pub fn equipment(mut self, types: &[&str]) -> Self {
        self.inst.equipment_types = types.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn room(mut self, id: &str, beds: u32, equipment: &[&str]) -> Self {
        self.inst.rooms.push(Room {
            id: id.into(),
            num_beds: beds,
            equipment: equipment.iter().map(|s| s.to_string()).collect(),
        });
        self
    }

    pub fn station(mut self, id: &str) -> Self {
        self.inst.additional_rooms.push(AdditionalRoom { id: id.into() });
        self
    }

    pub fn distance(mut self, a: &str, b: &str, d: f64) -> Self {
        self.explicit.insert((a.into(), b.into()), d);
        self.explicit.insert((b.into(), a.into()), d);
        self
    }

    pub fn station_distance(mut self, a: &str, r: &str, d: f64) -> Self {
        self.explicit_add.insert((a.into(), r.into()), d);
        self
    }

    pub fn nurse(mut self, id: &str, skill: u8, shifts: &[usize], maxload: f64) -> Self {
        self.inst.nurses.push(Nurse {
            id: id.into(),
            skill,
            shifts: shifts.iter().copied().collect(),
            maxload: shifts.iter().map(|&s| (s, maxload)).collect(),
        });
        self
    }

    pub fn nurses(mut self, nurses: Vec<Nurse>) -> Self {
        self.inst.nurses.extend(nurses);
        self
    }

    pub fn patient(mut self, p: Patient) -> Self {
        self.inst.patients.push(p);
        self
    }

    /// Adds a plain patient and lets the caller adjust it.
    pub fn patient_with(
        mut self,
        id: &str,
        gender: Gender,
        age: u32,
        adshift: usize,
        dishift: usize,
        edit: impl FnOnce(&mut Patient),
    ) -> Self {
        let mut p = plain_patient(id, gender, age, adshift, dishift, self.inst.num_days);
        edit(&mut p);
        self.inst.patients.push(p);
        self
    }

    pub fn weights(mut self, w: ObjectiveWeights) -> Self {
        self.inst.objective_weights = w;
        self
    }

    pub fn walk_weights(mut self, w: WalkWeights) -> Self {
        self.inst.walk_weights = w;
        self
    }

    /// Missing room distances default to a corridor `10 * |i - j|` by room
    /// order; missing station distances to `5 * (i + 1)`.
    pub fn build(mut self) -> Instance {
        let ids: Vec<String> = self.inst.rooms.iter().map(|r| r.id.clone()).collect();
        let mut rr = BTreeMap::new();
        for (i, a) in ids.iter().enumerate() {
            let mut row = BTreeMap::new();
            for (j, b) in ids.iter().enumerate() {
                let d = if i == j {
                    0.0
                } else {
                    self.explicit.get(&(a.clone(), b.clone())).copied().unwrap_or(10.0 * i.abs_diff(j) as f64)
                };
                row.insert(b.clone(), d);
            }
            rr.insert(a.clone(), row);
        }
        let mut ar = BTreeMap::new();
        for a in &self.inst.additional_rooms {
            let row = ids
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let d = self.explicit_add.get(&(a.id.clone(), r.clone())).copied().unwrap_or(5.0 * (i + 1) as f64);
                    (r.clone(), d)
                })
                .collect();
            ar.insert(a.id.clone(), row);
        }
        self.inst.distances = DistanceMatrix { room_room: rr, add_room: ar };
        self.inst
    }
}
