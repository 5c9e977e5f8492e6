use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::calendar::{ShiftCalendar, ShiftKind};
use super::instance::{Instance, MAX_AGE, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ViolationKind {
    /// Field shape or value domain.
    Schema,
    /// Dangling or duplicated identifier.
    Reference,
    /// More in-ward patients than beds on some day.
    Capacity,
    /// A shift with patients but no rostered nurse.
    Coverage,
}

impl ViolationKind {
    /// Capacity and coverage problems leave the data usable but the instance
    /// unsolvable; the other kinds make it unusable.
    pub fn is_structural(self) -> bool {
        matches!(self, ViolationKind::Schema | ViolationKind::Reference)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub field: String,
    pub rule: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.rule)
    }
}

struct Report(Vec<Violation>);

impl Report {
    fn push(&mut self, kind: ViolationKind, field: impl Into<String>, rule: impl Into<String>) {
        self.0.push(Violation { kind, field: field.into(), rule: rule.into() });
    }
}

/// Identifiers end up inside solver-model variable names, so they are limited
/// to characters every LP reader accepts.
pub fn is_valid_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

fn finite_nonneg(v: f64) -> bool {
    v.is_finite() && v >= 0.0
}

/// Checks every instance invariant and returns the list of violations. An
/// empty list means the instance is well formed and solvable shift by shift.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    use ViolationKind::*;
    let mut rep = Report(Vec::new());

    if inst.schema_version != SCHEMA_VERSION {
        rep.push(Schema, "schema_version", format!("must be {SCHEMA_VERSION}"));
    }
    let Ok(cal) = inst.calendar() else {
        rep.push(Schema, "num_days", "must be at least 1");
        return rep.0;
    };
    let num_shifts = cal.num_shifts();

    let mut check_ids = |what: &str, ids: Vec<&str>, seen: &mut HashSet<String>| {
        for id in ids {
            if !is_valid_id(id) {
                rep.push(Schema, format!("{what}.{id}"), "id must be non-empty [A-Za-z0-9_.]");
            }
            if !seen.insert(id.to_string()) {
                rep.push(Reference, format!("{what}.{id}"), "duplicate id");
            }
        }
    };
    let mut room_like = HashSet::new();
    check_ids("rooms", inst.rooms.iter().map(|r| r.id.as_str()).collect(), &mut room_like);
    check_ids("additional_rooms", inst.additional_rooms.iter().map(|a| a.id.as_str()).collect(), &mut room_like);
    check_ids("patients", inst.patients.iter().map(|p| p.id.as_str()).collect(), &mut HashSet::new());
    check_ids("nurses", inst.nurses.iter().map(|n| n.id.as_str()).collect(), &mut HashSet::new());
    check_ids("equipment_types", inst.equipment_types.iter().map(|e| e.as_str()).collect(), &mut HashSet::new());

    let rooms: BTreeSet<&str> = inst.rooms.iter().map(|r| r.id.as_str()).collect();
    let nurses: BTreeSet<&str> = inst.nurses.iter().map(|n| n.id.as_str()).collect();
    let equipment: BTreeSet<&str> = inst.equipment_types.iter().map(|e| e.as_str()).collect();

    if inst.rooms.is_empty() {
        rep.push(Schema, "rooms", "at least one room required");
    }
    if equipment.len() > 64 {
        rep.push(Schema, "equipment_types", "at most 64 equipment types supported");
    }
    for room in &inst.rooms {
        if !(1..=4).contains(&room.num_beds) {
            rep.push(Schema, format!("rooms.{}.num_beds", room.id), "must be in 1..=4");
        }
        for e in &room.equipment {
            if !equipment.contains(e.as_str()) {
                rep.push(Reference, format!("rooms.{}.equipment", room.id), format!("unknown equipment `{e}`"));
            }
        }
    }

    // distances
    for a in &inst.rooms {
        for b in &inst.rooms {
            let field = format!("distances.room_room.{}.{}", a.id, b.id);
            match inst.distances.room(&a.id, &b.id) {
                None => rep.push(Schema, field, "missing distance"),
                Some(d) if !finite_nonneg(d) => rep.push(Schema, field, "must be finite and >= 0"),
                Some(d) if a.id == b.id && d != 0.0 => rep.push(Schema, field, "diagonal must be 0"),
                Some(d) => {
                    if let Some(back) = inst.distances.room(&b.id, &a.id) {
                        if back != d {
                            rep.push(Schema, field, "must be symmetric");
                        }
                    }
                }
            }
        }
    }
    for (from, row) in &inst.distances.room_room {
        for to in row.keys() {
            if !rooms.contains(from.as_str()) || !rooms.contains(to.as_str()) {
                rep.push(Reference, format!("distances.room_room.{from}.{to}"), "unknown room");
            }
        }
    }
    for a in &inst.additional_rooms {
        for r in &inst.rooms {
            let field = format!("distances.add_room.{}.{}", a.id, r.id);
            match inst.distances.additional(&a.id, &r.id) {
                None => rep.push(Schema, field, "missing distance"),
                Some(d) if !finite_nonneg(d) => rep.push(Schema, field, "must be finite and >= 0"),
                Some(_) => {}
            }
        }
    }
    let add_ids: BTreeSet<&str> = inst.additional_rooms.iter().map(|a| a.id.as_str()).collect();
    for (from, row) in &inst.distances.add_room {
        for to in row.keys() {
            if !add_ids.contains(from.as_str()) || !rooms.contains(to.as_str()) {
                rep.push(Reference, format!("distances.add_room.{from}.{to}"), "unknown room");
            }
        }
    }

    // patients
    for p in &inst.patients {
        let f = |name: &str| format!("patients.{}.{name}", p.id);
        if p.age > MAX_AGE {
            rep.push(Schema, f("age"), format!("must be <= {MAX_AGE}"));
        }
        let ad_ok =
            p.adshift == 0 || (p.adshift <= num_shifts && ShiftCalendar::kind_of(p.adshift) == ShiftKind::Early);
        if !ad_ok {
            rep.push(Schema, f("adshift"), "must be 0 or an early shift of the horizon");
        }
        let di_ok = p.dishift == num_shifts + 1
            || (p.dishift >= 1 && p.dishift <= num_shifts && ShiftCalendar::kind_of(p.dishift) == ShiftKind::Night);
        if !di_ok {
            rep.push(Schema, f("dishift"), "must be a night shift or S+1");
        }
        if p.adshift >= p.dishift {
            rep.push(Schema, f("dishift"), "must be after adshift");
        }
        match (&p.prev_room, p.adshift == 0) {
            (None, true) => rep.push(Schema, f("prev_room"), "required when adshift = 0"),
            (Some(_), false) => rep.push(Schema, f("prev_room"), "only allowed when adshift = 0"),
            (Some(r), true) if !rooms.contains(r.as_str()) => {
                rep.push(Reference, f("prev_room"), format!("unknown room `{r}`"))
            }
            _ => {}
        }
        for n in &p.prev_nurses {
            if !nurses.contains(n.as_str()) {
                rep.push(Reference, f("prev_nurses"), format!("unknown nurse `{n}`"));
            }
        }
        if !(ad_ok && di_ok && p.adshift < p.dishift) {
            continue;
        }
        let stay = p.stay_shifts(&cal);
        let want_all: BTreeSet<usize> = stay.clone().collect();
        let want_day: BTreeSet<usize> =
            stay.clone().filter(|&s| ShiftCalendar::kind_of(s) != ShiftKind::Night).collect();
        let want_early: BTreeSet<usize> =
            stay.clone().filter(|&s| ShiftCalendar::kind_of(s) == ShiftKind::Early).collect();
        if p.workload.keys().copied().collect::<BTreeSet<_>>() != want_all {
            rep.push(Schema, f("workload"), "must be defined exactly on the in-ward shifts");
        }
        if p.workload.values().any(|&w| !finite_nonneg(w)) {
            rep.push(Schema, f("workload"), "values must be finite and >= 0");
        }
        if p.skillreq.keys().copied().collect::<BTreeSet<_>>() != want_day {
            rep.push(Schema, f("skillreq"), "must be defined exactly on the in-ward early and late shifts");
        }
        if p.skillreq.values().any(|&l| l > 2) {
            rep.push(Schema, f("skillreq"), "levels must be in 0..=2");
        }
        if p.equipment_req.keys().copied().collect::<BTreeSet<_>>() != want_early {
            rep.push(Schema, f("equipment_req"), "must be defined exactly on the in-ward early shifts");
        }
        for set in p.equipment_req.values() {
            for e in set {
                if !equipment.contains(e.as_str()) {
                    rep.push(Reference, f("equipment_req"), format!("unknown equipment `{e}`"));
                }
            }
        }
    }

    // nurses
    for n in &inst.nurses {
        let f = |name: &str| format!("nurses.{}.{name}", n.id);
        if !(1..=3).contains(&n.skill) {
            rep.push(Schema, f("skill"), "must be in 1..=3");
        }
        if n.shifts.iter().any(|&s| s == 0 || s > num_shifts) {
            rep.push(Schema, f("shifts"), "shift outside the horizon");
        }
        let days: Vec<usize> = n.shifts.iter().map(|&s| ShiftCalendar::day_of(s)).collect();
        if days.windows(2).any(|w| w[0] == w[1]) {
            rep.push(Schema, f("shifts"), "at most one shift per day");
        }
        if n.maxload.keys().copied().collect::<BTreeSet<_>>() != n.shifts {
            rep.push(Schema, f("maxload"), "must be defined exactly on the rostered shifts");
        }
        if n.maxload.values().any(|&m| !(m.is_finite() && m > 0.0)) {
            rep.push(Schema, f("maxload"), "values must be finite and > 0");
        }
    }

    // walk weights and objective weights
    for s in cal.shifts() {
        for (name, map) in [("circular", &inst.walk_weights.circular), ("star", &inst.walk_weights.star)] {
            match map.get(&s) {
                None => rep.push(Schema, format!("walk_weights.{name}.{s}"), "missing"),
                Some(&w) if !finite_nonneg(w) => {
                    rep.push(Schema, format!("walk_weights.{name}.{s}"), "must be finite and >= 0")
                }
                _ => {}
            }
        }
    }
    for (name, map) in [("circular", &inst.walk_weights.circular), ("star", &inst.walk_weights.star)] {
        if map.keys().any(|&s| s == 0 || s > num_shifts) {
            rep.push(Schema, format!("walk_weights.{name}"), "shift outside the horizon");
        }
    }
    if inst.objective_weights.as_array().iter().any(|&w| !finite_nonneg(w)) {
        rep.push(Schema, "objective_weights", "all weights must be finite and >= 0");
    }

    // per-shift solvability
    let beds = inst.total_beds() as usize;
    for day in cal.days() {
        let early = ShiftCalendar::early_of_day(day);
        let count = inst.in_ward_count(early);
        if count > beds {
            rep.push(Capacity, format!("day.{day}"), format!("{count} in-ward patients exceed {beds} beds"));
        }
    }
    for s in cal.shifts() {
        if inst.in_ward_count(s) > 0 && inst.nurses_on(s).next().is_none() {
            rep.push(Coverage, format!("shift.{s}"), "patients in ward but no nurse rostered");
        }
    }

    rep.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instgen::presets::real_ward_layout;
    use crate::model::instance::{Gender, Patient};

    fn carry_over(id: &str, prev_room: Option<&str>) -> Patient {
        Patient {
            id: id.into(),
            gender: Gender::F,
            age: 40,
            adshift: 0,
            dishift: 3,
            skillreq: [(1, 0), (2, 0)].into(),
            workload: [(1, 1.0), (2, 1.0), (3, 1.0)].into(),
            equipment_req: [(1, Default::default())].into(),
            prev_room: prev_room.map(Into::into),
            prev_nurses: Default::default(),
        }
    }

    #[test]
    fn real_ward_preset_without_patients_is_clean() {
        let inst = real_ward_layout(5);
        assert_eq!(validate_instance(&inst), vec![]);
    }

    #[test]
    fn missing_prev_room_is_one_violation() {
        let mut inst = real_ward_layout(1);
        inst.nurses = crate::model::test_support::one_nurse_per_shift(1);
        inst.patients.push(carry_over("p1", None));
        let report = validate_instance(&inst);
        assert_eq!(report.len(), 1, "{report:?}");
        assert_eq!(report[0].field, "patients.p1.prev_room");
    }

    #[test]
    fn capacity_violation_on_34_beds() {
        let mut inst = real_ward_layout(1);
        assert_eq!(inst.total_beds(), 4 + 2 * 10 + 3 * 2 + 4);
        inst.nurses = crate::model::test_support::one_nurse_per_shift(1);
        let room = inst.rooms[0].id.clone();
        for i in 0..35 {
            inst.patients.push(carry_over(&format!("p{i}"), Some(&room)));
        }
        let report = validate_instance(&inst);
        assert_eq!(report.len(), 1, "{report:?}");
        assert_eq!(report[0].kind, ViolationKind::Capacity);
    }

    #[test]
    fn bad_age_and_two_shifts_per_day() {
        let mut inst = real_ward_layout(1);
        inst.nurses = crate::model::test_support::one_nurse_per_shift(1);
        inst.nurses[0].shifts.insert(2);
        inst.nurses[0].maxload.insert(2, 10.0);
        let room = inst.rooms[0].id.clone();
        let mut p = carry_over("old", Some(&room));
        p.age = 130;
        inst.patients.push(p);
        let fields: Vec<String> = validate_instance(&inst).into_iter().map(|v| v.field).collect();
        assert!(fields.contains(&"patients.old.age".to_string()));
        assert!(fields.contains(&"nurses.n1.shifts".to_string()));
    }

    #[test]
    fn uncovered_shift_reported() {
        let mut inst = real_ward_layout(1);
        let room = inst.rooms[0].id.clone();
        inst.patients.push(carry_over("p1", Some(&room)));
        let report = validate_instance(&inst);
        assert_eq!(report.len(), 3);
        assert!(report.iter().all(|v| v.kind == ViolationKind::Coverage));
    }
}
