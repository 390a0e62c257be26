//! Digital-object abstraction over resource copies: per-copy availability
//! calendars with a booking API, and same-kind copy collaboration through a
//! registry.
//!
//! Intervals are half-open `[lo, hi)`, so back-to-back bookings such as
//! `[0, 10)` and `[10, 20)` do not conflict.

use crate::model::{Money, Scenario, Time, Workload};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Half-open time interval `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Time,
    pub hi: Time,
}

impl Interval {
    /// Panics if `lo >= hi`; intervals are always nonempty.
    pub fn new(lo: Time, hi: Time) -> Self {
        assert!(lo < hi, "interval [{lo}, {hi}) is empty");
        Self { lo, hi }
    }

    pub fn len(&self) -> Time {
        self.hi - self.lo
    }

    pub fn contains(&self, other: Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: Interval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum BookingError {
    #[error("cancel of [{lo}, {hi}) does not match a booked span on this copy")]
    CancelNotBooked { lo: Time, hi: Time },
    #[error("unknown kind {kind_id} in scenario {scenario}")]
    UnknownKind { scenario: &'static str, kind_id: usize },
    #[error("unknown copy {copy_index} of kind {kind_id} in scenario {scenario}")]
    UnknownCopy {
        scenario: &'static str,
        kind_id: usize,
        copy_index: usize,
    },
}

/// Result of a booking attempt. Refusal is a value, not an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BookOutcome {
    Booked,
    Refused,
}

/// Result of a same-kind collaboration attempt across copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollaborateOutcome {
    BookedAt { copy_index: usize },
    Refused,
}

/// Free calendar of one copy: disjoint, sorted, nonempty half-open intervals
/// within the copy's `[up, down)` span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvailabilityTimeline {
    free: Vec<Interval>,
    up: Time,
    down: Time,
}

impl AvailabilityTimeline {
    pub fn new(up: Time, down: Time) -> Self {
        Self {
            free: vec![Interval::new(up, down)],
            up,
            down,
        }
    }

    pub fn free_intervals(&self) -> &[Interval] {
        &self.free
    }

    pub fn initial_span(&self) -> Time {
        self.down - self.up
    }

    pub fn free_total(&self) -> Time {
        self.free.iter().map(Interval::len).sum()
    }

    /// Books `interval` if some single free interval contains it, splitting
    /// that interval; otherwise leaves the calendar unchanged.
    pub fn try_book(&mut self, interval: Interval) -> BookOutcome {
        // Only the rightmost free interval starting at or before interval.lo
        // can contain it.
        let idx = self.free.partition_point(|f| f.lo <= interval.lo);
        if idx == 0 {
            return BookOutcome::Refused;
        }
        let host = self.free[idx - 1];
        if !host.contains(interval) {
            return BookOutcome::Refused;
        }
        let mut replacement = Vec::with_capacity(2);
        if host.lo < interval.lo {
            replacement.push(Interval::new(host.lo, interval.lo));
        }
        if interval.hi < host.hi {
            replacement.push(Interval::new(interval.hi, host.hi));
        }
        self.free.splice(idx - 1..idx, replacement);
        BookOutcome::Booked
    }

    /// Returns a previously booked `interval` to the free set, coalescing
    /// with adjacent free intervals.
    pub fn cancel(&mut self, interval: Interval) -> Result<(), BookingError> {
        let not_booked = || BookingError::CancelNotBooked {
            lo: interval.lo,
            hi: interval.hi,
        };
        if interval.lo < self.up || interval.hi > self.down {
            return Err(not_booked());
        }
        let idx = self.free.partition_point(|f| f.hi <= interval.lo);
        // Every free interval at idx and beyond ends after interval.lo; the
        // first of them must not start before interval.hi.
        if idx < self.free.len() && self.free[idx].lo < interval.hi {
            return Err(not_booked());
        }
        let mut lo = interval.lo;
        let mut hi = interval.hi;
        let mut remove = idx..idx;
        if idx > 0 && self.free[idx - 1].hi == interval.lo {
            lo = self.free[idx - 1].lo;
            remove.start = idx - 1;
        }
        if idx < self.free.len() && self.free[idx].lo == interval.hi {
            hi = self.free[idx].hi;
            remove.end = idx + 1;
        }
        self.free.splice(remove, [Interval::new(lo, hi)]);
        Ok(())
    }
}

/// One bookable resource copy behind the uniform digital-object API.
#[derive(Debug, Clone)]
pub struct DigitalObject {
    pub kind_id: usize,
    pub scenario: Scenario,
    pub copy_index: usize,
    timeline: AvailabilityTimeline,
    cost_rate: Money,
    booked: Time,
}

impl DigitalObject {
    pub fn new(
        kind_id: usize,
        scenario: Scenario,
        copy_index: usize,
        up: Time,
        down: Time,
        cost_rate: Money,
    ) -> Self {
        Self {
            kind_id,
            scenario,
            copy_index,
            timeline: AvailabilityTimeline::new(up, down),
            cost_rate,
            booked: 0,
        }
    }

    /// Current free intervals of this copy.
    pub fn show_availability(&self) -> &[Interval] {
        self.timeline.free_intervals()
    }

    /// Cost per unit of utilised time; equal across copies of the same kind
    /// in the same scenario.
    pub fn show_utilisation_cost(&self) -> Money {
        self.cost_rate
    }

    pub fn try_book(&mut self, interval: Interval) -> BookOutcome {
        let outcome = self.timeline.try_book(interval);
        if outcome == BookOutcome::Booked {
            self.booked += interval.len();
        }
        outcome
    }

    pub fn cancel_booking(&mut self, interval: Interval) -> Result<(), BookingError> {
        self.timeline.cancel(interval)?;
        self.booked -= interval.len();
        Ok(())
    }

    pub fn booked_time(&self) -> Time {
        self.booked
    }

    pub fn initial_span(&self) -> Time {
        self.timeline.initial_span()
    }

    pub fn timeline(&self) -> &AvailabilityTimeline {
        &self.timeline
    }
}

/// All digital objects of a workload, keyed by (scenario, kind, copy).
/// Single-threaded mutable state; clone the registry for independent
/// evaluations.
#[derive(Debug, Clone)]
pub struct DoRegistry {
    // objects[scenario][kind_id][copy_index]
    rich: Vec<Vec<DigitalObject>>,
    scarce: Vec<Vec<DigitalObject>>,
}

impl DoRegistry {
    /// Builds a fresh registry with every copy fully available.
    pub fn from_workload(workload: &Workload) -> Self {
        let build = |scenario: Scenario| {
            workload
                .kinds
                .iter()
                .map(|kind| {
                    let res = kind.per_scenario.get(scenario);
                    res.copies
                        .iter()
                        .enumerate()
                        .map(|(copy_index, spec)| {
                            DigitalObject::new(
                                kind.kind_id,
                                scenario,
                                copy_index,
                                spec.up,
                                spec.down,
                                res.cost_rate,
                            )
                        })
                        .collect()
                })
                .collect()
        };
        Self {
            rich: build(Scenario::Rich),
            scarce: build(Scenario::Scarce),
        }
    }

    fn kinds(&self, scenario: Scenario) -> &Vec<Vec<DigitalObject>> {
        match scenario {
            Scenario::Rich => &self.rich,
            Scenario::Scarce => &self.scarce,
        }
    }

    fn kinds_mut(&mut self, scenario: Scenario) -> &mut Vec<Vec<DigitalObject>> {
        match scenario {
            Scenario::Rich => &mut self.rich,
            Scenario::Scarce => &mut self.scarce,
        }
    }

    pub fn object(
        &self,
        scenario: Scenario,
        kind_id: usize,
        copy_index: usize,
    ) -> Option<&DigitalObject> {
        self.kinds(scenario).get(kind_id)?.get(copy_index)
    }

    pub fn objects(&self) -> impl Iterator<Item = &DigitalObject> {
        self.rich.iter().chain(self.scarce.iter()).flatten()
    }

    /// Tries copies of `(scenario, kind_id)` in ascending copy order and
    /// books on the first that accepts.
    pub fn collaborate_book(
        &mut self,
        scenario: Scenario,
        kind_id: usize,
        interval: Interval,
    ) -> Result<CollaborateOutcome, BookingError> {
        let copies = self
            .kinds_mut(scenario)
            .get_mut(kind_id)
            .ok_or(BookingError::UnknownKind {
                scenario: scenario.name(),
                kind_id,
            })?;
        for (copy_index, object) in copies.iter_mut().enumerate() {
            if object.try_book(interval) == BookOutcome::Booked {
                return Ok(CollaborateOutcome::BookedAt { copy_index });
            }
        }
        Ok(CollaborateOutcome::Refused)
    }

    pub fn cancel_booking(
        &mut self,
        scenario: Scenario,
        kind_id: usize,
        copy_index: usize,
        interval: Interval,
    ) -> Result<(), BookingError> {
        let object = self
            .kinds_mut(scenario)
            .get_mut(kind_id)
            .and_then(|copies| copies.get_mut(copy_index))
            .ok_or(BookingError::UnknownCopy {
                scenario: scenario.name(),
                kind_id,
                copy_index,
            })?;
        object.cancel_booking(interval)
    }

    /// Total booked time across every copy of both scenarios.
    pub fn total_booked(&self) -> Time {
        self.objects().map(DigitalObject::booked_time).sum()
    }

    /// Total initial span across every copy of both scenarios.
    pub fn total_span(&self) -> Time {
        self.objects().map(DigitalObject::initial_span).sum()
    }
}
