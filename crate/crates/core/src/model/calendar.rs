use serde::{Deserialize, Serialize};

use crate::error::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftKind {
    Early,
    Late,
    Night,
}

impl ShiftKind {
    /// Offset of this shift within its day (0, 1 or 2).
    pub fn offset(self) -> usize {
        match self {
            ShiftKind::Early => 0,
            ShiftKind::Late => 1,
            ShiftKind::Night => 2,
        }
    }

    pub const ALL: [ShiftKind; 3] = [ShiftKind::Early, ShiftKind::Late, ShiftKind::Night];
}

impl std::fmt::Display for ShiftKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ShiftKind::Early => "early",
            ShiftKind::Late => "late",
            ShiftKind::Night => "night",
        })
    }
}

/// Chronological shift numbering: day `d` owns shifts `3d-2` (early),
/// `3d-1` (late) and `3d` (night). Shift indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftCalendar {
    num_days: usize,
}

impl ShiftCalendar {
    pub fn new(num_days: usize) -> Result<Self, ModelError> {
        if num_days == 0 {
            return Err(ModelError::EmptyCalendar);
        }
        Ok(Self { num_days })
    }

    #[inline]
    pub fn num_days(&self) -> usize {
        self.num_days
    }

    #[inline]
    pub fn num_shifts(&self) -> usize {
        3 * self.num_days
    }

    pub fn shift_type(&self, shift: usize) -> Result<ShiftKind, ModelError> {
        if shift == 0 || shift > self.num_shifts() {
            return Err(ModelError::ShiftOutOfRange { shift, num_shifts: self.num_shifts() });
        }
        Ok(Self::kind_of(shift))
    }

    /// Kind of a shift index without range checking. Index 0 (the last shift
    /// of the previous period) is a night shift.
    #[inline]
    pub fn kind_of(shift: usize) -> ShiftKind {
        match shift % 3 {
            1 => ShiftKind::Early,
            2 => ShiftKind::Late,
            _ => ShiftKind::Night,
        }
    }

    #[inline]
    pub fn day_of(shift: usize) -> usize {
        shift.div_ceil(3)
    }

    #[inline]
    pub fn shifts_of_day(day: usize) -> [usize; 3] {
        [3 * day - 2, 3 * day - 1, 3 * day]
    }

    #[inline]
    pub fn early_of_day(day: usize) -> usize {
        3 * day - 2
    }

    pub fn days(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.num_days
    }

    pub fn shifts(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.num_shifts()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_types() {
        let cal = ShiftCalendar::new(2).unwrap();
        assert_eq!(cal.shift_type(1).unwrap(), ShiftKind::Early);
        assert_eq!(cal.shift_type(6).unwrap(), ShiftKind::Night);
        assert_eq!(cal.shift_type(5).unwrap(), ShiftKind::Late);
        assert!(cal.shift_type(0).is_err());
        assert!(cal.shift_type(7).is_err());
    }

    #[test]
    fn empty_calendar_rejected() {
        assert!(ShiftCalendar::new(0).is_err());
    }

    #[test]
    fn day_round_trip() {
        for d in 1..=60 {
            let [e, l, n] = ShiftCalendar::shifts_of_day(d);
            assert_eq!((ShiftCalendar::day_of(e), ShiftCalendar::day_of(l), ShiftCalendar::day_of(n)), (d, d, d));
            assert_eq!(ShiftCalendar::kind_of(e), ShiftKind::Early);
            assert_eq!(ShiftCalendar::kind_of(l), ShiftKind::Late);
            assert_eq!(ShiftCalendar::kind_of(n), ShiftKind::Night);
        }
    }
}
