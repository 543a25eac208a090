//! Constrained rewriting codes: block partition, WWL differential, WOM-based
//! time schedules and the two dilution wrappers.

mod dilute;
mod space;
mod time;
mod trivial;
pub mod wom;

pub use dilute::{DiluteSpace, DiluteTime};
pub use space::SpaceCode;
pub use time::{Slot, TimeCode, TimePCode};
pub use trivial::TrivialCode;
pub use wom::{rs_wom, BitPerWrite, TableWom, WomCode};
