//! Random instance generation.
//!
//! Patients get a uniform age group between 20 and 99 years, a fair coin
//! for gender and a length of stay uniform on 1..=5 days. Admissions are
//! placed day by day until the occupancy target is met. Nurses are rostered
//! with [`crate::roster`], either for a fixed staff size or for the smallest
//! staff that admits a roster.

pub mod presets;
pub mod sample;

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::model::builder::walk_weights_preset;
use crate::model::{
    validate_instance, Gender, Instance, Nurse, ObjectiveWeights, Patient, ShiftCalendar, ShiftKind, ViolationKind,
    SCHEMA_VERSION,
};
use crate::roster::{apportion, automatic_nurse_count, skills_for, solve_roster, RosterRequest};

pub use sample::{sample_equipment, sample_skillreq, sample_workload};

/// Maximum workload per shift by skill level 1, 2, 3.
pub const MAXLOAD_BY_SKILL: [f64; 3] = [10.0, 12.5, 15.0];
pub const MIX_THREE_LEVELS: [f64; 3] = [0.2, 0.6, 0.2];
pub const MIX_TWO_LEVELS: [f64; 3] = [0.2, 0.8, 0.0];
pub const MAX_LOS_DAYS: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NurseMode {
    /// Smallest staff for which a roster exists.
    Auto,
    /// Fixed staff size.
    Manual { count: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenConfig {
    pub name: Option<String>,
    pub num_instances: usize,
    pub weeks: usize,
    pub days_per_week: usize,
    /// Number of rooms with 1, 2, 3 and 4 beds.
    pub room_mix: [usize; 4],
    pub occupancy: f64,
    pub equipment_types: Vec<String>,
    /// 2 or 3.
    pub skill_levels: u8,
    pub additional_rooms: usize,
    pub nurses: NurseMode,
    /// Required nurses per shift kind (early, late, night) and level; derived
    /// from the bed count when absent.
    pub staffing: Option<[[u32; 3]; 3]>,
    pub max_shifts_per_week: usize,
    /// Start with patients carried over from the previous period.
    pub carry_over: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            name: None,
            num_instances: 1,
            weeks: 2,
            days_per_week: 7,
            room_mix: [0, 15, 0, 0],
            occupancy: 0.85,
            equipment_types: vec!["oxygen".into(), "telemetry".into()],
            skill_levels: 3,
            additional_rooms: 1,
            nurses: NurseMode::Auto,
            staffing: None,
            max_shifts_per_week: 5,
            carry_over: true,
        }
    }
}

impl GenConfig {
    pub fn num_days(&self) -> usize {
        self.weeks * self.days_per_week
    }

    pub fn total_beds(&self) -> usize {
        self.room_mix.iter().enumerate().map(|(k, n)| (k + 1) * n).sum()
    }

    pub fn skill_mix(&self) -> [f64; 3] {
        if self.skill_levels == 2 {
            MIX_TWO_LEVELS
        } else {
            MIX_THREE_LEVELS
        }
    }

    /// Per-kind, per-level requirements. Totals follow nurse-to-bed ratios of
    /// 1:6 (early), 1:7 (late) and 1:10 (night).
    pub fn staffing(&self) -> [[u32; 3]; 3] {
        if let Some(s) = self.staffing {
            return s;
        }
        let beds = self.total_beds() as u32;
        [6, 7, 10].map(|ratio| {
            let total = beds.div_ceil(ratio).max(1);
            if self.skill_levels == 2 {
                let regular = total.div_ceil(2);
                [total - regular, regular, 0]
            } else {
                let experienced = 1;
                let regular = (total - experienced) / 2;
                [total - regular - experienced, regular, experienced]
            }
        })
    }

    pub fn check(&self) -> Result<(), SolveError> {
        let bad = |m: &str| Err(SolveError::Config(m.to_string()));
        if self.num_days() == 0 {
            return bad("planning horizon must have at least one day");
        }
        if self.total_beds() == 0 {
            return bad("room mix has no beds");
        }
        if !(self.occupancy > 0.0 && self.occupancy <= 1.0) {
            return bad("occupancy must lie in (0, 1]");
        }
        if self.additional_rooms == 0 {
            return bad("at least one additional room is required");
        }
        if !matches!(self.skill_levels, 2 | 3) {
            return bad("skill_levels must be 2 or 3");
        }
        if self.equipment_types.len() > 64 {
            return bad("at most 64 equipment types");
        }
        if self.max_shifts_per_week == 0 {
            return bad("max_shifts_per_week must be positive");
        }
        Ok(())
    }
}

/// Demographic draw of one patient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatientProfile {
    pub gender: Gender,
    pub age: u32,
    pub los_days: usize,
}

pub fn sample_los(rng: &mut impl Rng) -> usize {
    rng.random_range(1..=MAX_LOS_DAYS)
}

pub fn sample_profile(rng: &mut impl Rng) -> PatientProfile {
    let gender = if rng.random_bool(0.5) { Gender::F } else { Gender::M };
    let group = rng.random_range(2..=9u32);
    let age = 10 * group + rng.random_range(0..10u32);
    PatientProfile { gender, age, los_days: sample_los(rng) }
}

/// Stay of a patient before per-shift data is attached. `first_day == 0`
/// marks a carry-over patient.
struct Stay {
    profile: PatientProfile,
    first_day: usize,
    last_day: usize,
}

fn id_width(n: usize) -> usize {
    (n.max(1) as f64).log10().floor() as usize + 1
}

/// Fills per-shift data (workload, skill, equipment) over the stay.
fn attach_stay_data(p: &mut Patient, cal: &ShiftCalendar, num_types: usize, types: &[String], rng: &mut impl Rng) {
    let shifts: Vec<usize> = p.stay_shifts(cal).collect();
    let wl = sample_workload(p.agegroup(), shifts.len(), rng);
    p.workload = shifts.iter().copied().zip(wl).collect();
    let day_shifts: Vec<usize> =
        shifts.iter().copied().filter(|&s| ShiftCalendar::kind_of(s) != ShiftKind::Night).collect();
    let req = sample_skillreq(day_shifts.len(), rng);
    p.skillreq = day_shifts.into_iter().zip(req).collect();
    let earlies: Vec<usize> =
        shifts.iter().copied().filter(|&s| ShiftCalendar::kind_of(s) == ShiftKind::Early).collect();
    let eq = sample_equipment(num_types, earlies.len(), rng);
    p.equipment_req = earlies
        .into_iter()
        .zip(eq)
        .map(|(s, mask)| (s, (0..num_types).filter(|i| mask & (1 << i) != 0).map(|i| types[i].clone()).collect()))
        .collect();
}

/// Generates one instance. Identical `(cfg, seed)` give identical instances.
pub fn generate_instance(cfg: &GenConfig, seed: u64) -> Result<Instance, SolveError> {
    cfg.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let num_days = cfg.num_days();
    let cal = ShiftCalendar::new(num_days)?;
    let ns = cal.num_shifts();
    let beds = cfg.total_beds();
    let types = &cfg.equipment_types;

    let room_equipment: Vec<BTreeSet<String>> = (0..cfg.room_mix.iter().sum::<usize>())
        .map(|_| types.iter().filter(|_| rng.random_bool(0.5)).cloned().collect())
        .collect();
    let (rooms, additional_rooms, distances) =
        presets::corridor_layout(cfg.room_mix, &room_equipment, cfg.additional_rooms);

    // admissions
    let target = ((cfg.occupancy * beds as f64).round() as usize).clamp(1, beds);
    let mut occ = vec![0usize; num_days + 1];
    let mut stays = Vec::new();
    let occupy = |occ: &mut Vec<usize>, first: usize, last: usize| {
        for o in occ.iter_mut().take(last.min(num_days) + 1).skip(first.max(1)) {
            *o += 1;
        }
    };
    if cfg.carry_over {
        let carried = target - target / 3;
        for _ in 0..carried {
            let profile = sample_profile(&mut rng);
            let last_day = profile.los_days;
            occupy(&mut occ, 1, last_day);
            stays.push(Stay { profile, first_day: 0, last_day });
        }
    }
    for d in 1..=num_days {
        while occ[d] < target {
            let mut profile = sample_profile(&mut rng);
            let mut placed = false;
            for _ in 0..100 {
                let last = (d + profile.los_days - 1).min(num_days);
                if (d..=last).all(|t| occ[t] < beds) {
                    placed = true;
                    break;
                }
                profile.los_days = sample_los(&mut rng);
            }
            if !placed {
                break;
            }
            let last_day = d + profile.los_days - 1;
            occupy(&mut occ, d, last_day);
            stays.push(Stay { profile, first_day: d, last_day });
        }
    }

    // carry-over patients keep their previous room
    let mut prev_free: Vec<usize> = rooms.iter().map(|r| r.num_beds as usize).collect();
    let width = id_width(stays.len());
    let mut patients: Vec<Patient> = Vec::with_capacity(stays.len());
    for (i, st) in stays.iter().enumerate() {
        let adshift = if st.first_day == 0 { 0 } else { ShiftCalendar::early_of_day(st.first_day) };
        let dishift = if st.last_day > num_days { ns + 1 } else { 3 * st.last_day };
        let prev_room = if st.first_day == 0 {
            let open: Vec<usize> = (0..rooms.len()).filter(|&r| prev_free[r] > 0).collect();
            let r = *open.choose(&mut rng).expect("carry-over count is below the bed count");
            prev_free[r] -= 1;
            Some(rooms[r].id.clone())
        } else {
            None
        };
        let mut p = Patient {
            id: format!("p{:0width$}", i + 1),
            gender: st.profile.gender,
            age: st.profile.age,
            adshift,
            dishift,
            skillreq: BTreeMap::new(),
            workload: BTreeMap::new(),
            equipment_req: BTreeMap::new(),
            prev_room,
            prev_nurses: BTreeSet::new(),
        };
        attach_stay_data(&mut p, &cal, types.len(), types, &mut rng);
        patients.push(p);
    }

    // nurses and roster
    let max_shifts = cfg.max_shifts_per_week * cfg.weeks.max(1);
    let mut req = RosterRequest::uniform(num_days, Vec::new(), cfg.staffing(), max_shifts);
    req.seed = Some(rng.random());
    let (skills, roster) = match cfg.nurses {
        NurseMode::Auto => {
            let (_, skills, roster) = automatic_nurse_count(&req, cfg.skill_mix())?;
            (skills, roster)
        }
        NurseMode::Manual { count } => {
            req.nurse_skills = skills_for(apportion(count, cfg.skill_mix()));
            let roster = solve_roster(&req)?;
            (req.nurse_skills.clone(), roster)
        }
    };
    let width = id_width(skills.len());
    let nurses: Vec<Nurse> = skills
        .iter()
        .zip(&roster.shifts)
        .enumerate()
        .map(|(i, (&skill, shifts))| Nurse {
            id: format!("n{:0width$}", i + 1),
            skill,
            shifts: shifts.iter().copied().collect(),
            maxload: shifts.iter().map(|&s| (s, MAXLOAD_BY_SKILL[skill as usize - 1])).collect(),
        })
        .collect();
    for p in patients.iter_mut().filter(|p| p.adshift == 0) {
        let k = rng.random_range(1..=3usize).min(nurses.len());
        p.prev_nurses = nurses.choose_multiple(&mut rng, k).map(|n| n.id.clone()).collect();
    }

    Ok(Instance {
        schema_version: SCHEMA_VERSION,
        name: cfg.name.clone(),
        num_days,
        rooms,
        additional_rooms,
        distances,
        equipment_types: types.clone(),
        patients,
        nurses,
        walk_weights: walk_weights_preset(num_days),
        objective_weights: ObjectiveWeights::default(),
    })
}

/// Generates `cfg.num_instances` instances with seeds `seed, seed + 1, ...`.
pub fn generate_batch(cfg: &GenConfig, seed: u64) -> Result<Vec<Instance>, SolveError> {
    (0..cfg.num_instances as u64).map(|k| generate_instance(cfg, seed.wrapping_add(k))).collect()
}

/// Fraction of bed-days occupied over the horizon.
pub fn realized_occupancy(inst: &Instance) -> f64 {
    let cal = match inst.calendar() {
        Ok(c) => c,
        Err(_) => return 0.0,
    };
    let patient_days: usize = inst.patients.iter().map(|p| p.stay_days(&cal).count()).sum();
    patient_days as f64 / (inst.total_beds() as f64 * cal.num_days() as f64)
}

/// A very small random instance: at most 2 days, 2 rooms, 4 patients and 6
/// nurses, sized for exhaustive search.
pub fn generate_tiny(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let num_days = rng.random_range(1..=2usize);
    let ns = 3 * num_days;
    let num_rooms = rng.random_range(1..=2usize);
    let mut mix = [0usize; 4];
    for _ in 0..num_rooms {
        mix[rng.random_range(0..3usize)] += 1;
    }
    let types = vec!["oxygen".to_string()];
    let equipment: Vec<BTreeSet<String>> = (0..num_rooms)
        .map(|_| if rng.random_bool(0.5) { types.iter().cloned().collect() } else { BTreeSet::new() })
        .collect();
    let (rooms, additional_rooms, mut distances) = presets::corridor_layout(mix, &equipment, 1);
    for a in distances.add_room.values_mut() {
        for d in a.values_mut() {
            *d = f64::from(rng.random_range(1..10u32));
        }
    }
    if rooms.len() == 2 {
        let d = f64::from(rng.random_range(1..20u32));
        let (a, b) = (rooms[0].id.clone(), rooms[1].id.clone());
        distances.room_room.get_mut(&a).unwrap().insert(b.clone(), d);
        distances.room_room.get_mut(&b).unwrap().insert(a, d);
    }
    let beds: usize = rooms.iter().map(|r| r.num_beds as usize).sum();
    let cal = ShiftCalendar::new(num_days).expect("positive day count");

    // nurses: every shift covered, at most one shift per day each
    let num_nurses = rng.random_range(3..=6usize);
    let mut shifts: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); num_nurses];
    for d in 1..=num_days {
        let mut order: Vec<usize> = (0..num_nurses).collect();
        order.shuffle(&mut rng);
        for (k, &n) in order.iter().enumerate() {
            let kind = if k < 3 {
                Some(k)
            } else if rng.random_bool(0.5) {
                Some(rng.random_range(0..3))
            } else {
                None
            };
            if let Some(kind) = kind {
                shifts[n].insert(3 * d - 2 + kind);
            }
        }
    }
    let nurses: Vec<Nurse> = shifts
        .into_iter()
        .enumerate()
        .map(|(i, sh)| {
            let skill = rng.random_range(1..=3u8);
            let maxload = sh.iter().map(|&s| (s, f64::from(rng.random_range(2..=8u32)))).collect();
            Nurse { id: format!("n{}", i + 1), skill, shifts: sh, maxload }
        })
        .collect();

    let num_patients = rng.random_range(1..=4usize);
    let mut occ = vec![0usize; num_days + 1];
    let mut patients = Vec::new();
    for i in 0..num_patients {
        let first = rng.random_range(1..=num_days);
        let last = rng.random_range(first..=num_days + 1);
        if (first..=last.min(num_days)).any(|d| occ[d] >= beds) {
            continue;
        }
        for o in occ.iter_mut().take(last.min(num_days) + 1).skip(first) {
            *o += 1;
        }
        let carry = first == 1 && rng.random_bool(0.3);
        let profile = sample_profile(&mut rng);
        let mut p = Patient {
            id: format!("p{}", i + 1),
            gender: profile.gender,
            age: profile.age,
            adshift: if carry { 0 } else { ShiftCalendar::early_of_day(first) },
            dishift: if last > num_days { ns + 1 } else { 3 * last },
            skillreq: BTreeMap::new(),
            workload: BTreeMap::new(),
            equipment_req: BTreeMap::new(),
            prev_room: carry.then(|| rooms[rng.random_range(0..rooms.len())].id.clone()),
            prev_nurses: BTreeSet::new(),
        };
        attach_stay_data(&mut p, &cal, types.len(), &types, &mut rng);
        if carry || rng.random_bool(0.2) {
            let k = rng.random_range(1..=2usize);
            p.prev_nurses = nurses.choose_multiple(&mut rng, k).map(|n| n.id.clone()).collect();
        }
        patients.push(p);
    }

    Instance {
        schema_version: SCHEMA_VERSION,
        name: Some(format!("tiny-{seed}")),
        num_days,
        rooms,
        additional_rooms,
        distances,
        equipment_types: types,
        patients,
        nurses,
        walk_weights: walk_weights_preset(num_days),
        objective_weights: ObjectiveWeights::default(),
    }
}

/// Completes real admission data that lacks workloads, skill requirements
/// or equipment requests, using the generator's samplers. Values already
/// present are kept. Fails when a shift has patients but no nurse on duty.
pub fn fill_missing_real_data(inst: &Instance, seed: u64) -> Result<Instance, SolveError> {
    let mut out = inst.clone();
    let cal = out.calendar()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for p in &mut out.patients {
        let shifts: Vec<usize> = p.stay_shifts(&cal).collect();
        let wl = sample_workload(p.agegroup(), shifts.len(), &mut rng);
        for (&s, w) in shifts.iter().zip(wl) {
            p.workload.entry(s).or_insert(w);
        }
        let day_shifts: Vec<usize> =
            shifts.iter().copied().filter(|&s| ShiftCalendar::kind_of(s) != ShiftKind::Night).collect();
        let req = sample_skillreq(day_shifts.len(), &mut rng);
        for (&s, l) in day_shifts.iter().zip(req) {
            p.skillreq.entry(s).or_insert(l);
        }
        for s in shifts.iter().copied().filter(|&s| ShiftCalendar::kind_of(s) == ShiftKind::Early) {
            p.equipment_req.entry(s).or_default();
        }
    }
    if let Some(v) = validate_instance(&out).into_iter().find(|v| v.kind == ViolationKind::Coverage) {
        let shift: usize = v.field.trim_start_matches("shift.").parse().unwrap_or(1);
        return Err(SolveError::Infeasible {
            day: ShiftCalendar::day_of(shift),
            reason: format!("no nurse on duty for shift {shift}"),
        });
    }
    Ok(out)
}
