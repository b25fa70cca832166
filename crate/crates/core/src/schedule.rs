//! The decision variable: one assignment code per employee-hour.
//!
//! A cell holds either rest or a single job type, so "at most one job type
//! per employee-hour" holds by construction. Codes are stored as bytes:
//! 0 = rest, otherwise `1 + category·2 + class` (which caps categories at
//! 127 — far beyond call-center scale).

use serde::{Deserialize, Serialize};

use crate::instance::JobType;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assignment {
    Rest,
    Job(JobType),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Schedule {
    m: usize,
    days: usize,
    /// `m × days × 24` codes.
    codes: Vec<u8>,
}

impl Schedule {
    /// An all-rest schedule.
    pub fn rest(m: usize, days: usize) -> Self {
        Self { m, days, codes: vec![0; m * days * 24] }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn days(&self) -> usize {
        self.days
    }

    #[inline]
    fn idx(&self, i: usize, d: usize, h: usize) -> usize {
        debug_assert!(i < self.m && d < self.days && h < 24);
        (i * self.days + d) * 24 + h
    }

    #[inline]
    pub fn get(&self, i: usize, d: usize, h: usize) -> Assignment {
        decode(self.codes[self.idx(i, d, h)])
    }

    #[inline]
    pub fn set(&mut self, i: usize, d: usize, h: usize, a: Assignment) {
        let idx = self.idx(i, d, h);
        self.codes[idx] = encode(a);
    }

    #[inline]
    pub fn is_working(&self, i: usize, d: usize, h: usize) -> bool {
        self.codes[self.idx(i, d, h)] != 0
    }

    /// Assigned hours of employee `i` on day `d`.
    pub fn daily_hours(&self, i: usize, d: usize) -> u32 {
        let base = (i * self.days + d) * 24;
        self.codes[base..base + 24].iter().filter(|&&c| c != 0).count() as u32
    }

    /// True if employee `i` works at least one hour on day `d`.
    pub fn works_on(&self, i: usize, d: usize) -> bool {
        let base = (i * self.days + d) * 24;
        self.codes[base..base + 24].iter().any(|&c| c != 0)
    }

    /// Number of days on which employee `i` works at least one hour.
    pub fn working_days(&self, i: usize) -> u32 {
        (0..self.days).filter(|&d| self.works_on(i, d)).count() as u32
    }

    /// Total assigned hours of employee `i` over the horizon.
    pub fn total_hours(&self, i: usize) -> u32 {
        (0..self.days).map(|d| self.daily_hours(i, d)).sum()
    }

    /// Assigned hours of `i` in the 31-day window starting at `d`.
    pub fn window_hours(&self, i: usize, d: usize) -> u32 {
        let end = (d + 31).min(self.days);
        (d..end).map(|dd| self.daily_hours(i, dd)).sum()
    }

    /// Clears every assignment of employee `i` on day `d`, returning the
    /// released `(hour, job)` pairs in hour order.
    pub fn clear_day(&mut self, i: usize, d: usize) -> Vec<(usize, JobType)> {
        let mut released = Vec::new();
        for h in 0..24 {
            if let Assignment::Job(job) = self.get(i, d, h) {
                released.push((h, job));
                self.set(i, d, h, Assignment::Rest);
            }
        }
        released
    }

    /// The job types assigned on day `d` for employee `i`, in hour order.
    pub fn day_assignments(&self, i: usize, d: usize) -> Vec<(usize, JobType)> {
        (0..24)
            .filter_map(|h| match self.get(i, d, h) {
                Assignment::Job(job) => Some((h, job)),
                Assignment::Rest => None,
            })
            .collect()
    }
}

#[inline]
fn encode(a: Assignment) -> u8 {
    match a {
        Assignment::Rest => 0,
        Assignment::Job(j) => 1 + (j.category * 2 + j.class) as u8,
    }
}

#[inline]
fn decode(code: u8) -> Assignment {
    if code == 0 {
        Assignment::Rest
    } else {
        let v = (code - 1) as usize;
        Assignment::Job(JobType { category: v / 2, class: v % 2 })
    }
}
