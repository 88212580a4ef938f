//! Lifecycle benchmarking for NFV MANO systems.
//!
//! Measures on-boarding (OPD), deployment (DPD) and run-time decision (ROD)
//! delays plus a quality-of-decision score, against either a live
//! orchestrator over HTTP or the deterministic simulator in [`mano`] and
//! [`nfvi`]. [`campaign`] ties it together; see `examples/` for each piece
//! in isolation.

pub mod descriptor;
pub mod kpi;
pub mod nfvi;
pub mod mano;
pub mod drivers;
pub mod campaign;
