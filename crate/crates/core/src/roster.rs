//! Nurse rostering: assign nurses to shifts so that every shift gets the
//! required number of nurses per skill level while respecting rest rules and
//! a per-nurse shift budget.
//!
//! Rules checked (shift indices are 1-based, three per day):
//! - at most one shift per nurse and day;
//! - per shift and level `l`, at least `skill_nurses(s, l)` nurses of skill `>= l`;
//! - per shift, at least `sum_l skill_nurses(s, l)` nurses in total;
//! - at most `max_shifts` shifts per nurse;
//! - a night shift is not followed by an early or late shift the next day;
//! - a late shift is not followed by an early shift the next day.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::model::{ShiftCalendar, ShiftKind};

pub const DEFAULT_ROSTER_NODES: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RosterRequest {
    pub num_days: usize,
    /// Skill level (1..=3) of each nurse.
    pub nurse_skills: Vec<u8>,
    /// `skill_nurses[s][l - 1]` for shifts `1..=S`; slot 0 is unused.
    pub skill_nurses: Vec<[u32; 3]>,
    pub max_shifts: usize,
    /// Shuffles ties between equally preferred nurses.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_nodes")]
    pub max_nodes: u64,
}

fn default_nodes() -> u64 {
    DEFAULT_ROSTER_NODES
}

impl RosterRequest {
    /// Same per-level requirement on every shift of a kind.
    pub fn uniform(num_days: usize, nurse_skills: Vec<u8>, per_kind: [[u32; 3]; 3], max_shifts: usize) -> Self {
        let mut skill_nurses = vec![[0; 3]; 3 * num_days + 1];
        for (s, req) in skill_nurses.iter_mut().enumerate().skip(1) {
            *req = per_kind[ShiftCalendar::kind_of(s).offset()];
        }
        Self { num_days, nurse_skills, skill_nurses, max_shifts, seed: None, max_nodes: DEFAULT_ROSTER_NODES }
    }

    pub fn num_shifts(&self) -> usize {
        3 * self.num_days
    }

    /// Minimum total number of nurses on shift `s`.
    pub fn total_required(&self, s: usize) -> u32 {
        self.skill_nurses[s].iter().sum()
    }
}

/// Shift sets per nurse, in request order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Roster {
    pub shifts: Vec<Vec<usize>>,
}

impl Roster {
    pub fn total_assignments(&self) -> usize {
        self.shifts.iter().map(Vec::len).sum()
    }

    pub fn works(&self, nurse: usize, shift: usize) -> bool {
        self.shifts[nurse].binary_search(&shift).is_ok()
    }
}

/// Literal rule check; returns one message per violated row.
pub fn check_roster(req: &RosterRequest, roster: &Roster) -> Vec<String> {
    let ns = req.num_shifts();
    let mut out = Vec::new();
    if roster.shifts.len() != req.nurse_skills.len() {
        out.push(format!("roster has {} nurses, request {}", roster.shifts.len(), req.nurse_skills.len()));
        return out;
    }
    let a = |n: usize, s: usize| -> u32 { u32::from(s >= 1 && s <= ns && roster.works(n, s)) };
    for (n, shifts) in roster.shifts.iter().enumerate() {
        if let Some(&s) = shifts.iter().find(|&&s| s == 0 || s > ns) {
            out.push(format!("nurse {n}: shift {s} outside the horizon"));
        }
        for s in (1..=ns).filter(|s| s % 3 == 1) {
            if a(n, s) + a(n, s + 1) + a(n, s + 2) > 1 {
                out.push(format!("one shift per day: nurse {n}, day {}", ShiftCalendar::day_of(s)));
            }
        }
        if shifts.len() > req.max_shifts {
            out.push(format!("max shifts: nurse {n} works {}", shifts.len()));
        }
        for s in (1..=ns).filter(|s| s % 3 == 0) {
            if a(n, s) + a(n, s + 1) + a(n, s + 2) > 1 {
                out.push(format!("night rest: nurse {n}, shift {s}"));
            }
        }
        for s in (1..=ns).filter(|s| s % 3 == 2) {
            if a(n, s) + a(n, s + 2) > 1 {
                out.push(format!("late rest: nurse {n}, shift {s}"));
            }
        }
    }
    for s in 1..=ns {
        for l in 1..=3u8 {
            let have: u32 = (0..roster.shifts.len()).filter(|&n| req.nurse_skills[n] >= l).map(|n| a(n, s)).sum();
            if have < req.skill_nurses[s][l as usize - 1] {
                out.push(format!(
                    "skill coverage: shift {s}, level {l}: {have} < {}",
                    req.skill_nurses[s][l as usize - 1]
                ));
            }
        }
        let total: u32 = (0..roster.shifts.len()).map(|n| a(n, s)).sum();
        if total < req.total_required(s) {
            out.push(format!("total coverage: shift {s}: {total} < {}", req.total_required(s)));
        }
    }
    out
}

/// Search state for the backtracking roster construction.
struct Search<'a> {
    req: &'a RosterRequest,
    /// Shift order: days ascending, within a day night, late, early.
    order: Vec<usize>,
    /// Assigned shift per nurse and day (0 = off).
    day_shift: Vec<Vec<usize>>,
    used: Vec<usize>,
    nodes: u64,
    rng: Option<ChaCha8Rng>,
    /// Deepest failure seen, as `(position in order, level)`.
    failure: Option<(usize, u8)>,
}

impl Search<'_> {
    fn available(&self, n: usize, s: usize) -> bool {
        let d = ShiftCalendar::day_of(s);
        if self.day_shift[n][d] != 0 || self.used[n] >= self.req.max_shifts {
            return false;
        }
        let prev = if d > 1 { self.day_shift[n][d - 1] } else { 0 };
        match ShiftCalendar::kind_of(s) {
            ShiftKind::Early => prev == 0 || ShiftCalendar::kind_of(prev) == ShiftKind::Early,
            ShiftKind::Late => prev == 0 || ShiftCalendar::kind_of(prev) != ShiftKind::Night,
            ShiftKind::Night => true,
        }
    }

    /// Slot classes for shift `s`: the minimum skill of each of the
    /// `total_required` positions, highest first.
    fn slots(&self, s: usize) -> Vec<u8> {
        let [l1, l2, l3] = self.req.skill_nurses[s];
        let total = (l1 + l2 + l3) as usize;
        let mut v = vec![3u8; l3 as usize];
        v.extend(std::iter::repeat_n(2u8, l2.saturating_sub(l3) as usize));
        v.resize(total, 1);
        v
    }

    /// Candidates for shift `s`, most preferred first: lowest sufficient
    /// skill, then most remaining budget, then request order.
    fn candidates(&mut self, s: usize) -> Vec<usize> {
        let mut c: Vec<usize> = (0..self.req.nurse_skills.len()).filter(|&n| self.available(n, s)).collect();
        if let Some(rng) = self.rng.as_mut() {
            c.shuffle(rng);
        }
        c.sort_by_key(|&n| (self.req.nurse_skills[n], std::cmp::Reverse(self.req.max_shifts - self.used[n])));
        c
    }

    fn run(&mut self, pos: usize) -> Result<bool, SolveError> {
        if pos == self.order.len() {
            return Ok(true);
        }
        let s = self.order[pos];
        let slots = self.slots(s);
        let cands = self.candidates(s);
        let mut chosen = Vec::with_capacity(slots.len());
        self.fill(pos, s, &slots, &cands, 0, &mut chosen)
    }

    /// Chooses nurses for slot `k..` of shift `s`. Within one slot class the
    /// chosen candidate positions increase, which removes permutations.
    fn fill(
        &mut self,
        pos: usize,
        s: usize,
        slots: &[u8],
        cands: &[usize],
        k: usize,
        chosen: &mut Vec<usize>,
    ) -> Result<bool, SolveError> {
        self.nodes += 1;
        if self.nodes > self.req.max_nodes {
            return Err(SolveError::BudgetExceeded { limit: self.req.max_nodes });
        }
        if k == slots.len() {
            let d = ShiftCalendar::day_of(s);
            for &n in chosen.iter() {
                self.day_shift[n][d] = s;
                self.used[n] += 1;
            }
            if self.run(pos + 1)? {
                return Ok(true);
            }
            for &n in chosen.iter() {
                self.day_shift[n][d] = 0;
                self.used[n] -= 1;
            }
            return Ok(false);
        }
        let level = slots[k];
        let start = if k > 0 && slots[k - 1] == level {
            chosen.last().and_then(|last| cands.iter().position(|c| c == last)).map_or(0, |i| i + 1)
        } else {
            0
        };
        let mut any = false;
        for i in start..cands.len() {
            let n = cands[i];
            if self.req.nurse_skills[n] < level || chosen.contains(&n) {
                continue;
            }
            any = true;
            chosen.push(n);
            let found = self.fill(pos, s, slots, cands, k + 1, chosen)?;
            chosen.pop();
            if found {
                return Ok(true);
            }
        }
        if !any && self.failure.is_none_or(|(p, _)| pos > p) {
            self.failure = Some((pos, level));
        }
        Ok(false)
    }
}

/// Necessary conditions checked before searching; returns the first shift
/// and level that cannot be covered.
fn quick_infeasibility(req: &RosterRequest) -> Option<(usize, u8)> {
    let count_at_least = |l: u8| req.nurse_skills.iter().filter(|&&k| k >= l).count() as u64;
    for d in 1..=req.num_days {
        let shifts = ShiftCalendar::shifts_of_day(d);
        for l in (1..=3u8).rev() {
            let need_l: u64 = shifts.iter().map(|&s| u64::from(req.skill_nurses[s][l as usize - 1])).sum();
            if need_l > count_at_least(l) {
                return Some((shifts[0], l));
            }
        }
        let total: u64 = shifts.iter().map(|&s| u64::from(req.total_required(s))).sum();
        if total > req.nurse_skills.len() as u64 {
            return Some((shifts[0], 1));
        }
    }
    for l in (1..=3u8).rev() {
        let mut need = 0u64;
        for s in 1..=req.num_shifts() {
            need += u64::from(req.skill_nurses[s][l as usize - 1]);
            if need > count_at_least(l) * req.max_shifts as u64 {
                return Some((s, l));
            }
        }
    }
    let mut need = 0u64;
    for s in 1..=req.num_shifts() {
        need += u64::from(req.total_required(s));
        if need > req.nurse_skills.len() as u64 * req.max_shifts as u64 {
            return Some((s, 1));
        }
    }
    None
}

/// Builds a roster with exactly the required number of nurses per shift,
/// which is the fewest assignments any legal roster can have.
pub fn solve_roster(req: &RosterRequest) -> Result<Roster, SolveError> {
    if req.skill_nurses.len() != req.num_shifts() + 1 {
        return Err(SolveError::Config(format!(
            "skill_nurses has {} entries, expected {}",
            req.skill_nurses.len(),
            req.num_shifts() + 1
        )));
    }
    if let Some(&k) = req.nurse_skills.iter().find(|&&k| !(1..=3).contains(&k)) {
        return Err(SolveError::Config(format!("nurse skill {k} outside 1..=3")));
    }
    if let Some((shift, level)) = quick_infeasibility(req) {
        return Err(SolveError::RosterInfeasible { shift, level });
    }
    let mut order = Vec::with_capacity(req.num_shifts());
    for d in 1..=req.num_days {
        let [e, l, n] = ShiftCalendar::shifts_of_day(d);
        order.extend([n, l, e]);
    }
    let mut search = Search {
        req,
        order,
        day_shift: vec![vec![0; req.num_days + 1]; req.nurse_skills.len()],
        used: vec![0; req.nurse_skills.len()],
        nodes: 0,
        rng: req.seed.map(ChaCha8Rng::seed_from_u64),
        failure: None,
    };
    if search.run(0)? {
        let shifts = search.day_shift.iter().map(|days| days.iter().copied().filter(|&s| s != 0).collect()).collect();
        Ok(Roster { shifts })
    } else {
        let (pos, level) = search.failure.unwrap_or((0, 1));
        Err(SolveError::RosterInfeasible { shift: search.order[pos], level })
    }
}

/// Splits `n` nurses over skill levels 1..=3 by `mix` with largest-remainder
/// rounding (ties go to the lower level).
pub fn apportion(n: usize, mix: [f64; 3]) -> [usize; 3] {
    let quotas = mix.map(|p| p * n as f64);
    let mut counts = quotas.map(|q| q.floor() as usize);
    let mut rest = n - counts.iter().sum::<usize>().min(n);
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| (quotas[b] - quotas[b].floor()).total_cmp(&(quotas[a] - quotas[a].floor())).then(a.cmp(&b)));
    for &i in idx.iter().cycle() {
        if rest == 0 {
            break;
        }
        if mix[i] > 0.0 {
            counts[i] += 1;
            rest -= 1;
        }
    }
    counts
}

/// Skills in nurse order for an apportioned staff: trainees first.
pub fn skills_for(counts: [usize; 3]) -> Vec<u8> {
    (1..=3u8).flat_map(|l| std::iter::repeat_n(l, counts[l as usize - 1])).collect()
}

/// Lower bound on the staff size: total required shift slots divided by the
/// per-nurse budget, rounded up.
pub fn staff_lower_bound(req: &RosterRequest) -> usize {
    let slots: u64 = (1..=req.num_shifts()).map(|s| u64::from(req.total_required(s))).sum();
    (slots as usize).div_ceil(req.max_shifts.max(1))
}

/// Grows the staff from the lower bound until a roster exists. The nurse
/// list in `template` is ignored; skills come from `mix`.
pub fn automatic_nurse_count(template: &RosterRequest, mix: [f64; 3]) -> Result<(usize, Vec<u8>, Roster), SolveError> {
    let total: f64 = mix.iter().sum();
    if (total - 1.0).abs() > 1e-9 || mix.iter().any(|p| *p < 0.0) {
        return Err(SolveError::Config(format!("skill mix {mix:?} must be nonnegative and sum to 1")));
    }
    let lb = staff_lower_bound(template);
    if lb == 0 {
        return Ok((0, Vec::new(), Roster { shifts: Vec::new() }));
    }
    let mut last = None;
    for n in lb..=10 * lb {
        let mut req = template.clone();
        req.nurse_skills = skills_for(apportion(n, mix));
        match solve_roster(&req) {
            Ok(roster) => return Ok((n, req.nurse_skills, roster)),
            Err(e @ (SolveError::RosterInfeasible { .. } | SolveError::BudgetExceeded { .. })) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(SolveError::Config(format!(
        "no roster with up to {} nurses (last attempt: {})",
        10 * lb,
        last.map(|e| e.to_string()).unwrap_or_default()
    )))
}
