//! Verification engine for congruences between ratios of successive critical
//! values of Rankin-Selberg L-functions, with the supporting exact algebra:
//! quadratic number fields, modular form q-expansions, double cosets over
//! `Q_p` and local intertwining constants.

pub mod exactnum;
pub mod forms;
pub mod ingest;
pub mod congruence;
pub mod rankin;
pub mod lvalue;
pub mod ratio;
pub mod coset;
pub mod localint;
