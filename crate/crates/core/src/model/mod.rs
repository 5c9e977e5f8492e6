//! Domain types, shift-calendar arithmetic, validation and the JSON formats.

pub mod builder;
pub mod calendar;
pub mod instance;
pub mod solution;
pub mod validate;
pub mod ward;

pub use calendar::{ShiftCalendar, ShiftKind};
pub use instance::{
    AdditionalRoom, DistanceMatrix, Gender, Instance, Nurse, ObjectiveWeights, Patient, Room, WalkWeights,
    SCHEMA_VERSION,
};
pub use solution::{Assignment, NurseAssignment, RoomAssignment, Solution};
pub use validate::{validate_instance, Violation, ViolationKind};
pub use ward::Ward;


/// `true` iff the patient occupies a bed during `shift`.
pub fn in_ward(p: &Patient, shift: usize) -> bool {
    p.in_ward(shift)
}
