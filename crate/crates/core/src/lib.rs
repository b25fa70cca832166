//! Staff scheduling for call centers where working performance evolves under
//! emotional stress.
//!
//! The crate models short-term performance as a double-Gaussian curve driven
//! by skill and five emotional states, assesses those states from workload
//! factors with TSK neuro-fuzzy networks, evaluates candidate schedules with a
//! minute-resolution discrete-event simulation of request arrivals, queueing,
//! and abandonment, and optimizes combined long-/short-term schedules with a
//! memetic algorithm whose neighborhood-search operators are chosen by a small
//! deep Q-network.
//!
//! Module map:
//!
//! * [`perf`] — performance curves (skill + emotional state → curve, curve → value at time t)
//! * [`nfn`] — TSK networks, emotion and impairment assessors, online RLS training
//! * [`instance`] — problem-instance model, validation, JSON IO, synthetic generator
//! * [`schedule`] — the assignment grid (one job type or rest per employee-hour)
//! * [`sim`] — the discrete-event evaluator and static constraint checks
//! * [`dqn`] — the operator-selection Q-network with experience replay
//! * [`optim`] — initialization, mutation, neighborhood search, repair, the main loop
//! * [`bench`] — trial harness, rank-sum test, box-plot style reporting

// pub mod bench;
pub mod defaults;
mod error;
pub mod dqn;
pub mod instance;
pub mod io;
pub mod nfn;
pub mod optim;
pub mod perf;
pub mod rng;
pub mod schedule;
pub mod sim;

pub use error::{Error, Result};
