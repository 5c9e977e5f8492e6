//! Emission of the integrated model and of its room (PRA) and nurse (NPA)
//! parts.
//!
//! Room variables live on early shifts; late and night shifts read the room
//! of the same day. Every variable is nonnegative; binaries are bounded by 1.

use super::model::{Expr, LinearModel, ModelBuilder, Sense};
use crate::error::SolveError;
use crate::model::{Assignment, Gender, ShiftCalendar, ShiftKind, Ward};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Full,
    Pra,
    Npa,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Full => "full",
            ModelKind::Pra => "pra",
            ModelKind::Npa => "npa",
        }
    }

    fn rooms(self) -> bool {
        matches!(self, ModelKind::Full | ModelKind::Pra)
    }

    fn nurses(self) -> bool {
        matches!(self, ModelKind::Full | ModelKind::Npa)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExportOptions {
    /// Emit the redundant `agemin <= agemax` rows.
    pub age_order_rows: bool,
}

impl Default for ExportOptions {
    fn default() -> Self {
        Self { age_order_rows: true }
    }
}

/// Smallest valid big-M for the age rows: 12, raised when an age group
/// exceeds it.
pub fn age_big_m(ward: &Ward) -> f64 {
    f64::from(ward.patients.iter().map(|p| p.agegroup).max().unwrap_or(0).max(12))
}

fn early(day: usize) -> usize {
    ShiftCalendar::early_of_day(day)
}

/// Variable and row names shared by the exporters.
pub mod names {
    pub fn y(p: &str, r: &str, s: usize) -> String {
        format!("y({p},{r},{s})")
    }
    pub fn x(p: &str, n: &str, s: usize) -> String {
        format!("x({p},{n},{s})")
    }
    pub fn trans(p: &str, s: usize) -> String {
        format!("trans({p},{s})")
    }
    pub fn room_shift(family: &str, r: &str, s: usize) -> String {
        format!("{family}({r},{s})")
    }
    pub fn vio_skill(p: &str, s: usize) -> String {
        format!("vio_skill({p},{s})")
    }
    pub fn ever(p: &str, n: &str) -> String {
        format!("ever({p},{n})")
    }
    pub fn vio_load(n: &str, s: usize) -> String {
        format!("vio_load({n},{s})")
    }
    pub fn vio_fair_shift(n: &str, m: &str, s: usize) -> String {
        format!("vio_fair({n},{m},{s})")
    }
    pub fn vio_fair(n: &str, m: &str) -> String {
        format!("vio_fair({n},{m})")
    }
    pub fn in_room(n: &str, r: &str, s: usize) -> String {
        format!("in_room({n},{r},{s})")
    }
    pub fn both(n: &str, r: &str, q: &str, s: usize) -> String {
        format!("both({n},{r},{q},{s})")
    }
    pub fn dist(n: &str, s: usize) -> String {
        format!("dist({n},{s})")
    }
}

/// Room part as seen by the nurse rows: a variable or a fixed 0/1.
#[derive(Clone, Copy)]
enum YRef {
    Var(usize),
    Fixed(f64),
}

struct Emitter<'a> {
    ward: &'a Ward,
    opts: ExportOptions,
    b: ModelBuilder,
    /// `y[p][d][r]`.
    y: Vec<Vec<Vec<YRef>>>,
    /// `x[p][s][n]`.
    x: Vec<Vec<Vec<Option<usize>>>>,
    in_room: Vec<Vec<Vec<Option<usize>>>>,
}

fn check_staffed(ward: &Ward) -> Result<(), SolveError> {
    for p in &ward.patients {
        for s in p.shifts() {
            if ward.on_shift[s].is_empty() {
                return Err(SolveError::Infeasible {
                    day: ShiftCalendar::day_of(s),
                    reason: format!("patient {} has no rostered nurse on shift {s}", p.id),
                });
            }
        }
    }
    Ok(())
}

/// Checks a fixed room plan: one room per in-ward day and no room over
/// capacity. Returns the number of violations.
pub fn room_plan_violations(ward: &Ward, rooms: &Assignment) -> usize {
    let mut bad = 0;
    for d in ward.calendar.days() {
        let mut occ = vec![0usize; ward.rooms.len()];
        for (p, pt) in ward.patients.iter().enumerate() {
            if pt.in_ward_day(d) {
                match rooms.room(p, d) {
                    Some(r) if r < ward.rooms.len() => occ[r] += 1,
                    _ => bad += 1,
                }
            }
        }
        bad += occ.iter().zip(&ward.rooms).filter(|(&o, r)| o > r.beds).count();
    }
    bad
}

impl<'a> Emitter<'a> {
    fn new(ward: &'a Ward, opts: ExportOptions) -> Self {
        Self { ward, opts, b: ModelBuilder::new(), y: Vec::new(), x: Vec::new(), in_room: Vec::new() }
    }

    fn rid(&self, r: usize) -> &'a str {
        &self.ward.rooms[r].id
    }

    fn nid(&self, n: usize) -> &'a str {
        &self.ward.nurses[n].id
    }

    fn room_vars(&mut self, fixed: Option<&Assignment>) {
        let w = self.ward;
        let nr = w.rooms.len();
        self.y = vec![vec![Vec::new(); w.num_days() + 1]; w.patients.len()];
        for (p, pt) in w.patients.iter().enumerate() {
            for d in pt.days() {
                self.y[p][d] = (0..nr)
                    .map(|r| match fixed {
                        Some(a) => YRef::Fixed(if a.room(p, d) == Some(r) { 1.0 } else { 0.0 }),
                        None => YRef::Var(self.b.binary(names::y(&pt.id, self.rid(r), early(d)))),
                    })
                    .collect();
            }
        }
    }

    fn yvar(&self, p: usize, d: usize, r: usize) -> usize {
        match self.y[p][d][r] {
            YRef::Var(i) => i,
            YRef::Fixed(_) => unreachable!("room rows need room variables"),
        }
    }

    fn room_part(&mut self) {
        let w = self.ward;
        let wt = w.weights;
        let nr = w.rooms.len();
        let big_m = age_big_m(w);
        let mut trans = vec![Vec::new(); w.patients.len()];
        for (p, pt) in w.patients.iter().enumerate() {
            if pt.adshift == 0 {
                trans[p].push((0, self.b.binary(names::trans(&pt.id, 0))));
            }
            for d in pt.first_day..pt.last_day {
                trans[p].push((d, self.b.binary(names::trans(&pt.id, 3 * d))));
            }
        }
        let mut per_room = Vec::new();
        for d in w.calendar.days() {
            for r in 0..nr {
                let s = early(d);
                let rid = self.rid(r);
                let f = self.b.binary(names::room_shift("f_in_room", rid, s));
                let m = self.b.binary(names::room_shift("m_in_room", rid, s));
                let g = self.b.binary(names::room_shift("vio_gender", rid, s));
                let amax = self.b.continuous(names::room_shift("agemax", rid, s));
                let amin = self.b.continuous(names::room_shift("agemin", rid, s));
                per_room.push((d, r, f, m, g, amax, amin));
            }
        }

        for ts in &trans {
            for &(_, t) in ts {
                self.b.objective(t, wt.transfers);
            }
        }
        for &(_, _, _, _, g, amax, amin) in &per_room {
            self.b.objective(amax, wt.inconvenience);
            self.b.objective(amin, -wt.inconvenience);
            self.b.objective(g, wt.gender);
        }
        for (p, pt) in w.patients.iter().enumerate() {
            for d in pt.days() {
                for r in 0..nr {
                    if pt.equipment[d] & !w.rooms[r].equipment != 0 {
                        let y = self.yvar(p, d, r);
                        self.b.objective(y, wt.equipment);
                    }
                }
            }
        }

        for (p, pt) in w.patients.iter().enumerate() {
            for d in pt.days() {
                let mut e = Expr::new();
                for r in 0..nr {
                    e.add(self.yvar(p, d, r), 1.0);
                }
                self.b.row(format!("c_room({},{})", pt.id, early(d)), &e, Sense::Eq, 1.0);
            }
        }
        for &(d, r, f, m, g, amax, amin) in &per_room {
            let s = early(d);
            let rid = self.rid(r);
            let present: Vec<usize> = (0..w.patients.len()).filter(|&p| w.patients[p].in_ward_day(d)).collect();
            let mut cap = Expr::new();
            for &p in &present {
                cap.add(self.yvar(p, d, r), 1.0);
            }
            self.b.row(format!("c_cap({rid},{s})"), &cap, Sense::Le, w.rooms[r].beds as f64);
            for &p in &present {
                let pt = &w.patients[p];
                let (fam, ind) = match pt.gender {
                    Gender::F => ("c_female", f),
                    Gender::M => ("c_male", m),
                };
                let mut e = Expr::new();
                e.add(self.yvar(p, d, r), 1.0).add(ind, -1.0);
                self.b.row(format!("{fam}({},{rid},{s})", pt.id), &e, Sense::Le, 0.0);
            }
            let mut e = Expr::new();
            e.add(f, 1.0).add(m, 1.0).add(g, -1.0);
            self.b.row(format!("c_gender({rid},{s})"), &e, Sense::Le, 1.0);

            for &p in &present {
                let pt = &w.patients[p];
                let ag = f64::from(pt.agegroup);
                let y = self.yvar(p, d, r);
                let mut e = Expr::new();
                e.add(amax, 1.0).add(y, -ag);
                self.b.row(format!("c_agemax({},{rid},{s})", pt.id), &e, Sense::Ge, 0.0);
                let mut e = Expr::new();
                e.add(amin, 1.0).add(y, big_m);
                self.b.row(format!("c_agemin({},{rid},{s})", pt.id), &e, Sense::Le, ag + big_m);
            }
            let mut e = Expr::new();
            e.add(amin, 1.0);
            for &p in &present {
                e.add(self.yvar(p, d, r), -big_m);
            }
            self.b.row(format!("c_agemin_empty({rid},{s})"), &e, Sense::Le, 0.0);
            if self.opts.age_order_rows {
                let mut e = Expr::new();
                e.add(amin, 1.0).add(amax, -1.0);
                self.b.row(format!("c_age_order({rid},{s})"), &e, Sense::Le, 0.0);
            }
        }

        for (p, pt) in w.patients.iter().enumerate() {
            for &(d, t) in &trans[p] {
                if d == 0 {
                    let prev = pt.prev_room.expect("validated: carry-over patients have a previous room");
                    for r in (0..nr).filter(|&r| r != prev) {
                        let mut e = Expr::new();
                        e.add(self.yvar(p, 1, r), 1.0).add(t, -1.0);
                        self.b.row(format!("c_trans0({},{})", pt.id, self.rid(r)), &e, Sense::Le, 0.0);
                    }
                } else {
                    for r in 0..nr {
                        let mut e = Expr::new();
                        e.add(self.yvar(p, d + 1, r), 1.0).add(self.yvar(p, d, r), -1.0).add(t, -1.0);
                        self.b.row(format!("c_trans({},{},{})", pt.id, self.rid(r), 3 * d), &e, Sense::Le, 0.0);
                    }
                }
            }
        }
    }

    fn nurse_part(&mut self) {
        let w = self.ward;
        let wt = w.weights;
        let (np, nn, nr) = (w.patients.len(), w.nurses.len(), w.rooms.len());
        let ns = w.num_shifts();

        self.x = vec![vec![Vec::new(); ns + 1]; np];
        for (p, pt) in w.patients.iter().enumerate() {
            for s in pt.shifts() {
                let mut row = vec![None; nn];
                for &n in &w.on_shift[s] {
                    row[n] = Some(self.b.binary(names::x(&pt.id, self.nid(n), s)));
                }
                self.x[p][s] = row;
            }
        }
        let mut vio_skill = Vec::new();
        for (p, pt) in w.patients.iter().enumerate() {
            for s in pt.shifts() {
                if ShiftCalendar::kind_of(s) != ShiftKind::Night && pt.skillreq[s] >= 2 {
                    vio_skill.push((p, s, self.b.binary(names::vio_skill(&pt.id, s))));
                }
            }
        }
        let mut ever = vec![Vec::with_capacity(nn); np];
        for (p, pt) in w.patients.iter().enumerate() {
            for n in 0..nn {
                ever[p].push(self.b.binary(names::ever(&pt.id, self.nid(n))));
            }
        }
        let mut vio_load = vec![vec![None; nn]; ns + 1];
        for n in 0..nn {
            for s in w.calendar.shifts().filter(|&s| w.nurses[n].rostered[s]) {
                vio_load[s][n] = Some(self.b.continuous(names::vio_load(self.nid(n), s)));
            }
        }
        let mut fair_shift = Vec::new();
        for s in w.calendar.shifts() {
            for &n in &w.on_shift[s] {
                for &m in w.on_shift[s].iter().filter(|&&m| m != n) {
                    fair_shift.push((s, n, m, self.b.continuous(names::vio_fair_shift(self.nid(n), self.nid(m), s))));
                }
            }
        }
        let mut fair_all = Vec::new();
        for n in 0..nn {
            for m in (0..nn).filter(|&m| m != n) {
                fair_all.push((n, m, self.b.continuous(names::vio_fair(self.nid(n), self.nid(m)))));
            }
        }
        self.in_room = vec![vec![Vec::new(); nn]; ns + 1];
        let mut both = Vec::new();
        let mut dist = Vec::new();
        for n in 0..nn {
            for s in w.calendar.shifts().filter(|&s| w.nurses[n].rostered[s]) {
                self.in_room[s][n] =
                    (0..nr).map(|r| Some(self.b.binary(names::in_room(self.nid(n), self.rid(r), s)))).collect();
            }
        }
        for n in 0..nn {
            for s in w.calendar.shifts().filter(|&s| w.nurses[n].rostered[s]) {
                for r in 0..nr {
                    for q in (0..nr).filter(|&q| q != r) {
                        let v = self.b.binary(names::both(self.nid(n), self.rid(r), self.rid(q), s));
                        both.push((n, s, r, q, v));
                    }
                }
            }
        }
        for n in 0..nn {
            for s in w.calendar.shifts().filter(|&s| w.nurses[n].rostered[s]) {
                dist.push((n, s, self.b.continuous(names::dist(self.nid(n), s))));
            }
        }

        for (p, pt) in w.patients.iter().enumerate() {
            for n in (0..nn).filter(|&n| !pt.prev_nurse[n]) {
                self.b.objective(ever[p][n], wt.continuity);
            }
        }
        for &(_, _, v) in &vio_skill {
            self.b.objective(v, wt.skill_load_fair);
        }
        for v in vio_load.iter().flatten().flatten() {
            self.b.objective(*v, wt.skill_load_fair);
        }
        for &(_, _, v) in &fair_all {
            self.b.objective(v, wt.skill_load_fair);
        }
        for &(_, _, _, v) in &fair_shift {
            self.b.objective(v, wt.skill_load_fair);
        }
        for v in self.in_room.iter().flatten().flatten().flatten() {
            self.b.objective(*v, wt.nurses_per_room);
        }
        for &(_, _, v) in &dist {
            self.b.objective(v, wt.walking);
        }

        for (p, pt) in w.patients.iter().enumerate() {
            for s in pt.shifts() {
                let mut e = Expr::new();
                for v in self.x[p][s].iter().flatten() {
                    e.add(*v, 1.0);
                }
                self.b.row(format!("c_nurse({},{s})", pt.id), &e, Sense::Eq, 1.0);
            }
        }
        for &(p, s, v) in &vio_skill {
            let pt = &w.patients[p];
            let mut e = Expr::new();
            for (n, x) in self.x[p][s].iter().enumerate() {
                if let Some(x) = x {
                    if w.nurses[n].skill >= pt.skillreq[s] {
                        e.add(*x, 1.0);
                    }
                }
            }
            e.add(v, 1.0);
            self.b.row(format!("c_skill({},{s})", pt.id), &e, Sense::Eq, 1.0);
        }
        for (p, pt) in w.patients.iter().enumerate() {
            for s in pt.shifts() {
                for (n, x) in self.x[p][s].iter().enumerate() {
                    if let Some(x) = x {
                        let mut e = Expr::new();
                        e.add(*x, 1.0).add(ever[p][n], -1.0);
                        self.b.row(format!("c_ever({},{},{s})", pt.id, self.nid(n)), &e, Sense::Le, 0.0);
                    }
                }
            }
        }
        for (p, pt) in w.patients.iter().enumerate() {
            for n in 0..nn {
                let mut e = Expr::new();
                e.add(ever[p][n], 1.0);
                if pt.prev_nurse[n] {
                    self.b.row(format!("c_ever_prev({},{})", pt.id, self.nid(n)), &e, Sense::Eq, 1.0);
                } else {
                    for s in pt.shifts() {
                        if let Some(x) = self.x[p][s][n] {
                            e.add(x, -1.0);
                        }
                    }
                    self.b.row(format!("c_ever_lb({},{})", pt.id, self.nid(n)), &e, Sense::Le, 0.0);
                }
            }
        }

        // relative load expression of nurse n on shift s
        let rel = |this: &Self, n: usize, s: usize, sign: f64, e: &mut Expr| {
            for (p, pt) in w.patients.iter().enumerate() {
                if pt.in_ward_shift(s) {
                    if let Some(x) = this.x[p][s][n] {
                        e.add(x, sign * pt.wload[s] / w.nurses[n].maxload[s]);
                    }
                }
            }
        };
        for n in 0..nn {
            for s in w.calendar.shifts().filter(|&s| w.nurses[n].rostered[s]) {
                let mut e = Expr::new();
                for (p, pt) in w.patients.iter().enumerate() {
                    if pt.in_ward_shift(s) {
                        if let Some(x) = self.x[p][s][n] {
                            e.add(x, pt.wload[s]);
                        }
                    }
                }
                e.add(vio_load[s][n].expect("rostered"), -1.0);
                self.b.row(format!("c_load({},{s})", self.nid(n)), &e, Sense::Le, w.nurses[n].maxload[s]);
            }
        }
        for &(s, n, m, v) in &fair_shift {
            let mut e = Expr::new();
            rel(self, n, s, 1.0, &mut e);
            rel(self, m, s, -1.0, &mut e);
            e.add(v, -1.0);
            self.b.row(format!("c_fair({},{},{s})", self.nid(n), self.nid(m)), &e, Sense::Le, 0.0);
        }
        for &(n, m, v) in &fair_all {
            let mut e = Expr::new();
            for s in w.calendar.shifts() {
                if w.nurses[n].rostered[s] {
                    rel(self, n, s, 1.0, &mut e);
                }
                if w.nurses[m].rostered[s] {
                    rel(self, m, s, -1.0, &mut e);
                }
            }
            e.add(v, -1.0);
            self.b.row(format!("c_fair_all({},{})", self.nid(n), self.nid(m)), &e, Sense::Le, 0.0);
        }

        for (p, pt) in w.patients.iter().enumerate() {
            for s in pt.shifts() {
                let d = ShiftCalendar::day_of(s);
                for (n, x) in self.x[p][s].iter().enumerate() {
                    let Some(x) = *x else { continue };
                    for r in 0..nr {
                        let ir = self.in_room[s][n][r].expect("rostered");
                        let mut e = Expr::new();
                        e.add(x, 1.0).add(ir, -1.0).add_const(-1.0);
                        let name = format!("c_in_room({},{},{},{s})", pt.id, self.nid(n), self.rid(r));
                        match self.y[p][d][r] {
                            YRef::Var(y) => {
                                e.add(y, 1.0);
                                self.b.row(name, &e, Sense::Le, 0.0);
                            }
                            YRef::Fixed(c) => {
                                e.add_const(c);
                                self.b.row_unless_implied(name, &e, Sense::Le, 0.0);
                            }
                        }
                    }
                }
            }
        }
        for &(n, s, r, q, v) in &both {
            let mut e = Expr::new();
            e.add(self.in_room[s][n][r].expect("rostered"), 1.0);
            e.add(self.in_room[s][n][q].expect("rostered"), 1.0);
            e.add(v, -1.0);
            let name = format!("c_both({},{},{},{s})", self.nid(n), self.rid(r), self.rid(q));
            self.b.row(name, &e, Sense::Le, 1.0);
        }
        let both_at = |n: usize, s: usize, r: usize, q: usize| -> usize {
            let base = both.partition_point(|&(bn, bs, ..)| (bn, bs) < (n, s));
            let k = base + r * (nr - 1) + if q < r { q } else { q - 1 };
            debug_assert_eq!((both[k].0, both[k].1, both[k].2, both[k].3), (n, s, r, q));
            both[k].4
        };
        for &(n, s, v) in &dist {
            let mut e = Expr::new();
            e.add(v, 1.0);
            for r in 0..nr {
                for q in (0..nr).filter(|&q| q != r) {
                    e.add(both_at(n, s, r, q), -0.5 * w.circular[s] * w.dist(r, q));
                }
                e.add(self.in_room[s][n][r].expect("rostered"), -w.star[s] * w.star_dist[r]);
            }
            self.b.row(format!("c_dist({},{s})", self.nid(n)), &e, Sense::Eq, 0.0);
        }
    }
}

/// Closed-form variable and row counts per family.
/// `(family, count)` pairs.
pub type FamilyCounts = Vec<(String, usize)>;

pub fn expected_counts(ward: &Ward, kind: ModelKind, opts: ExportOptions) -> (FamilyCounts, FamilyCounts) {
    let w = ward;
    let (np, nn, nr, nd) = (w.patients.len(), w.nurses.len(), w.rooms.len(), w.num_days());
    let pd: usize = w.patients.iter().map(|p| p.last_day - p.first_day + 1).sum();
    let pd_f: usize = w.patients.iter().filter(|p| p.gender == Gender::F).map(|p| p.last_day - p.first_day + 1).sum();
    let carry = w.patients.iter().filter(|p| p.adshift == 0).count();
    let occupied_days = w.calendar.days().filter(|&d| w.patients.iter().any(|p| p.in_ward_day(d))).count();
    let x: usize = w.patients.iter().map(|p| p.shifts().map(|s| w.on_shift[s].len()).sum::<usize>()).sum();
    let skill =
        w.patients.iter().map(|p| p.shifts().filter(|&s| s % 3 != 0 && p.skillreq[s] >= 2).count()).sum::<usize>();
    let nurse_shifts: usize = w.calendar.shifts().map(|s| w.on_shift[s].len()).sum();
    let pairs_shift: usize =
        w.calendar.shifts().map(|s| w.on_shift[s].len() * w.on_shift[s].len().saturating_sub(1)).sum();
    let prev: usize = w.patients.iter().map(|p| p.prev_nurse.iter().filter(|&&b| b).count()).sum();
    let pair_all = nn * nn.saturating_sub(1);
    let both = nr * nr.saturating_sub(1) * nurse_shifts;

    let mut vars = Vec::new();
    let mut rows = Vec::new();
    let mut v = |k: &str, c: usize| vars.push((k.to_string(), c));
    if kind.rooms() {
        v("y", nr * pd);
        v("trans", pd - np + carry);
        for k in ["f_in_room", "m_in_room", "vio_gender", "agemax", "agemin"] {
            v(k, nr * nd);
        }
    }
    if kind.nurses() {
        v("x", x);
        v("vio_skill", skill);
        v("ever", np * nn);
        v("vio_load", nurse_shifts);
        v("vio_fair", pairs_shift + pair_all);
        v("in_room", nr * nurse_shifts);
        v("both", both);
        v("dist", nurse_shifts);
    }
    let mut r = |k: &str, c: usize| rows.push((k.to_string(), c));
    if kind.rooms() {
        r("c_room", pd);
        r("c_cap", nr * occupied_days);
        r("c_female", nr * pd_f);
        r("c_male", nr * (pd - pd_f));
        r("c_gender", nr * nd);
        r("c_trans", nr * (pd - np));
        r("c_trans0", nr.saturating_sub(1) * carry);
        r("c_agemax", nr * pd);
        r("c_agemin", nr * pd);
        r("c_agemin_empty", nr * nd);
        if opts.age_order_rows {
            r("c_age_order", nr * nd);
        }
    }
    if kind.nurses() {
        r("c_nurse", 3 * pd);
        r("c_skill", skill);
        r("c_ever", x);
        r("c_ever_prev", prev);
        r("c_ever_lb", np * nn - prev);
        r("c_load", nurse_shifts);
        r("c_fair", pairs_shift);
        r("c_fair_all", pair_all);
        // with fixed rooms only the occupied room yields a binding row
        r("c_in_room", if kind == ModelKind::Npa { x } else { nr * x });
        r("c_both", both);
        r("c_dist", nurse_shifts);
    }
    vars.retain(|(_, c)| *c > 0);
    rows.retain(|(_, c)| *c > 0);
    (vars, rows)
}

fn header(b: &mut ModelBuilder, ward: &Ward, kind: ModelKind, opts: ExportOptions) {
    let w = ward.weights;
    b.comment(format!("model {}", kind.name()));
    b.comment(format!(
        "patients {} rooms {} nurses {} days {}",
        ward.patients.len(),
        ward.rooms.len(),
        ward.nurses.len(),
        ward.num_days()
    ));
    if kind.rooms() {
        b.comment(format!(
            "weights transfers {} inconvenience {} gender {} equipment {}",
            w.transfers, w.inconvenience, w.gender, w.equipment
        ));
        b.comment(format!("age big-M {}", age_big_m(ward)));
    }
    if kind.nurses() {
        b.comment(format!(
            "weights continuity {} skill_load_fair {} nurses_per_room {} walking {}",
            w.continuity, w.skill_load_fair, w.nurses_per_room, w.walking
        ));
    }
    b.comment("counts: PD patient-days, D days, R rooms, N nurses, NS nurse-shifts, X patient-nurse-shift pairs");
    let (vars, rows) = expected_counts(ward, kind, opts);
    for (k, c) in vars {
        b.comment(format!("vars {k} {c} = {}", formula(&k, kind)));
    }
    for (k, c) in rows {
        b.comment(format!("rows {k} {c} = {}", formula(&k, kind)));
    }
}

fn formula(family: &str, kind: ModelKind) -> &'static str {
    match family {
        "y" | "c_agemax" | "c_agemin" => "R * PD",
        "trans" => "PD - P + carry-over patients",
        "f_in_room" | "m_in_room" | "vio_gender" | "agemax" | "agemin" | "c_gender" | "c_agemin_empty"
        | "c_age_order" => "R * D",
        "x" | "c_ever" => "X",
        "vio_skill" | "c_skill" => "non-night patient-shifts with skill requirement >= 2",
        "ever" => "P * N",
        "vio_load" | "dist" | "c_load" | "c_dist" => "NS",
        "vio_fair" => "sum_s |N(s)| (|N(s)| - 1) + N (N - 1)",
        "in_room" => "R * NS",
        "both" | "c_both" => "R (R - 1) NS",
        "c_room" => "PD",
        "c_cap" => "R * days with patients",
        "c_female" => "R * female patient-days",
        "c_male" => "R * male patient-days",
        "c_trans" => "R * (PD - P)",
        "c_trans0" => "(R - 1) * carry-over patients",
        "c_nurse" => "3 PD",
        "c_ever_prev" => "previous-nurse pairs",
        "c_ever_lb" => "P * N - previous-nurse pairs",
        "c_fair" => "sum_s |N(s)| (|N(s)| - 1)",
        "c_fair_all" => "N (N - 1)",
        "c_in_room" if kind == ModelKind::Npa => "X",
        "c_in_room" => "R * X",
        _ => "?",
    }
}

fn emit(
    ward: &Ward,
    kind: ModelKind,
    fixed: Option<&Assignment>,
    opts: ExportOptions,
) -> Result<LinearModel, SolveError> {
    if kind.nurses() {
        check_staffed(ward)?;
    }
    let mut e = Emitter::new(ward, opts);
    header(&mut e.b, ward, kind, opts);
    e.room_vars(fixed);
    if kind.rooms() {
        e.room_part();
    }
    if kind.nurses() {
        e.nurse_part();
    }
    Ok(e.b.finish())
}

pub fn export_full_mip(ward: &Ward, opts: ExportOptions) -> Result<LinearModel, SolveError> {
    emit(ward, ModelKind::Full, None, opts)
}

pub fn export_pra(ward: &Ward, opts: ExportOptions) -> Result<LinearModel, SolveError> {
    emit(ward, ModelKind::Pra, None, opts)
}

/// Nurse part with the room plan fixed. Room indicators become constants.
pub fn export_npa(ward: &Ward, rooms: &Assignment, opts: ExportOptions) -> Result<LinearModel, SolveError> {
    let bad = room_plan_violations(ward, rooms);
    if bad > 0 {
        return Err(SolveError::InfeasibleSolution(bad));
    }
    emit(ward, ModelKind::Npa, Some(rooms), opts)
}
