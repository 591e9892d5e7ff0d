//! Timed environmental stimuli: attractant projections and illumination
//! masks scheduled against the step counter.

use crate::error::{Error, Result};
use crate::Cell;

#[derive(Debug, Clone)]
pub enum StimulusKind {
    /// Point attractant deposits at explicit sites.
    AttractantPoints(Vec<Cell>),
    /// Attractant projected over a whole pattern of cells.
    AttractantPattern(Vec<Cell>),
    /// Illuminate everything except the rectangle `[x0, x1) x [y0, y1)`.
    Illumination { x0: i32, y0: i32, x1: i32, y1: i32 },
}

#[derive(Debug, Clone)]
pub struct StimulusEvent {
    pub start: u64,
    /// Steps the stimulus stays active; at least one.
    pub duration: u64,
    pub kind: StimulusKind,
    /// Concentration added per site per step (attractant kinds only).
    pub magnitude: f64,
}

impl StimulusEvent {
    pub fn active_at(&self, step: u64) -> bool {
        step >= self.start && step < self.start + self.duration
    }

    pub fn expired_at(&self, step: u64) -> bool {
        step >= self.start + self.duration
    }
}

/// Ordered schedule of stimulus events.
#[derive(Debug, Clone, Default)]
pub struct StimulusProgram {
    events: Vec<StimulusEvent>,
}

impl StimulusProgram {
    pub fn new(events: Vec<StimulusEvent>) -> Result<Self> {
        let mut program = StimulusProgram::default();
        for e in events {
            program.push(e)?;
        }
        Ok(program)
    }

    /// Append an event; events must be pushed in start order.
    pub fn push(&mut self, event: StimulusEvent) -> Result<()> {
        if event.duration < 1 {
            return Err(Error::config("stimulus duration must be at least one step"));
        }
        if let Some(last) = self.events.last() {
            if event.start < last.start {
                return Err(Error::config("stimulus events must be time-ordered"));
            }
        }
        self.events.push(event);
        Ok(())
    }

    pub fn active<'a>(&'a self, step: u64) -> impl Iterator<Item = &'a StimulusEvent> {
        self.events.iter().filter(move |e| e.active_at(step))
    }

    /// Drop events that can never fire again.
    pub fn discard_expired(&mut self, step: u64) {
        self.events.retain(|e| !e.expired_at(step));
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn activation_window_is_half_open() {
        let e = StimulusEvent {
            start: 10,
            duration: 5,
            kind: StimulusKind::AttractantPoints(vec![(0, 0)]),
            magnitude: 1.0,
        };
        assert!(!e.active_at(9));
        assert!(e.active_at(10));
        assert!(e.active_at(14));
        assert!(!e.active_at(15));
    }

    #[test]
    fn events_must_be_ordered_and_nonzero() {
        let mk = |start| StimulusEvent {
            start,
            duration: 1,
            kind: StimulusKind::AttractantPoints(vec![]),
            magnitude: 0.0,
        };
        let mut p = StimulusProgram::default();
        p.push(mk(5)).unwrap();
        assert!(p.push(mk(3)).is_err());
        let zero = StimulusEvent {
            duration: 0,
            ..mk(9)
        };
        assert!(p.push(zero).is_err());
    }

    #[test]
    fn expired_events_are_discarded() {
        let mut p = StimulusProgram::default();
        for start in [0u64, 10, 20] {
            p.push(StimulusEvent {
                start,
                duration: 5,
                kind: StimulusKind::AttractantPoints(vec![]),
                magnitude: 1.0,
            })
            .unwrap();
        }
        p.discard_expired(16);
        assert_eq!(p.len(), 1);
    }
}
