//! Centralized (index-coding) view: one server holding everything, clients
//! with side information, and the quantities defined on that view.

mod alpha;
mod scheme;
mod side_info;
mod tightness;

pub use alpha::{alpha_exact, alpha_is_average_check, gain, AlphaResult, AverageCheck, ALPHA_CLIENT_CAP, AVERAGE_CLIENT_CAP};
pub use scheme::{clique_cover_scheme, verify_scheme, CliqueMember, CodedSend, TransmissionScheme, UncodedSend};
pub use side_info::{SideInfoClass, SideInfoInstance};
pub use tightness::{tightness_check, Tightness};
