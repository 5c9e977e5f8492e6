//! Linear model emission in LP and MPS text formats.

pub mod format;
pub mod iprnpa;
pub mod model;
pub mod roster_bip;

pub use format::{parse_lp, write_lp, write_mps, ParseError};
pub use iprnpa::{expected_counts, export_full_mip, export_npa, export_pra, ExportOptions, ModelKind};
pub use model::{LinearModel, Row, Sense, VarKind, Variable};
pub use roster_bip::{export_roster_bip, roster_point};
