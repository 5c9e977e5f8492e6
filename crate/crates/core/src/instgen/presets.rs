//! Ward layouts and the scenario presets.

use std::collections::{BTreeMap, BTreeSet};

use super::{GenConfig, NurseMode};
use crate::model::builder::walk_weights_preset;
use crate::model::{AdditionalRoom, DistanceMatrix, Instance, ObjectiveWeights, Room, SCHEMA_VERSION};

/// Rooms of the real ward by size: four single, ten double, two triple and
/// one quadruple room.
pub const REAL_WARD_MIX: [usize; 4] = [4, 10, 2, 1];

pub const PRESETS: [&str; 7] =
    ["30beds-var1", "30beds-var2", "30beds-var3", "60beds-var1", "60beds-var2", "60beds-var3", "realward"];

/// Rooms on both sides of one corridor, in mix order (singles first). Room
/// `i` sits at column `i / 2` on side `i % 2`; additional rooms sit at
/// evenly spread columns.
pub fn corridor_layout(
    mix: [usize; 4],
    equipment: &[BTreeSet<String>],
    stations: usize,
) -> (Vec<Room>, Vec<AdditionalRoom>, DistanceMatrix) {
    let beds: Vec<u32> = (0..4).flat_map(|k| std::iter::repeat_n(k as u32 + 1, mix[k])).collect();
    let width = (beds.len() as f64).log10().floor() as usize + 1;
    let rooms: Vec<Room> = beds
        .iter()
        .enumerate()
        .map(|(i, &b)| Room {
            id: format!("r{:0width$}", i + 1, width = width.max(2)),
            num_beds: b,
            equipment: equipment.get(i).cloned().unwrap_or_default(),
        })
        .collect();
    let adds: Vec<AdditionalRoom> = (1..=stations).map(|i| AdditionalRoom { id: format!("station{i}") }).collect();
    let col = |i: usize| (i / 2) as f64;
    let side = |i: usize| i % 2;
    let mut dist = DistanceMatrix::default();
    for (i, a) in rooms.iter().enumerate() {
        let row: BTreeMap<String, f64> = rooms
            .iter()
            .enumerate()
            .map(|(j, b)| {
                let d = if i == j {
                    0.0
                } else {
                    5.0 * (col(i) - col(j)).abs() + if side(i) != side(j) { 3.0 } else { 0.0 }
                };
                (b.id.clone(), d)
            })
            .collect();
        dist.room_room.insert(a.id.clone(), row);
    }
    let columns = beds.len().div_ceil(2) as f64;
    for (k, a) in adds.iter().enumerate() {
        let at = ((k as f64 + 0.5) * columns / stations as f64).floor();
        let row = rooms.iter().enumerate().map(|(i, r)| (r.id.clone(), 5.0 * (col(i) - at).abs() + 2.0)).collect();
        dist.add_room.insert(a.id.clone(), row);
    }
    (rooms, adds, dist)
}

/// The real ward: 17 rooms with 34 beds and one nursing station, with no
/// patients or nurses.
pub fn real_ward_layout(num_days: usize) -> Instance {
    let (rooms, additional_rooms, distances) = corridor_layout(REAL_WARD_MIX, &[], 1);
    Instance {
        schema_version: SCHEMA_VERSION,
        name: Some("realward".into()),
        num_days,
        rooms,
        additional_rooms,
        distances,
        equipment_types: Vec::new(),
        patients: Vec::new(),
        nurses: Vec::new(),
        walk_weights: walk_weights_preset(num_days),
        objective_weights: ObjectiveWeights::default(),
    }
}

/// Generator configuration of a named preset.
pub fn preset_config(name: &str) -> Option<GenConfig> {
    let base = GenConfig { name: Some(name.to_string()), ..GenConfig::default() };
    let thirty = |mix: [usize; 4]| GenConfig { room_mix: mix, ..base.clone() };
    let sixty = |mix: [usize; 4]| GenConfig { room_mix: mix.map(|k| 2 * k), ..base.clone() };
    Some(match name {
        "30beds-var1" => thirty([0, 15, 0, 0]),
        "30beds-var2" => thirty([0, 0, 10, 0]),
        "30beds-var3" => thirty([3, 5, 3, 2]),
        "60beds-var1" => sixty([0, 15, 0, 0]),
        "60beds-var2" => sixty([0, 0, 10, 0]),
        "60beds-var3" => sixty([3, 5, 3, 2]),
        "realward" => GenConfig {
            room_mix: REAL_WARD_MIX,
            days_per_week: 5,
            weeks: 1,
            equipment_types: Vec::new(),
            nurses: NurseMode::Auto,
            ..base
        },
        _ => return None,
    })
}
