//! Sampling schedules. A poller's frequency must divide 1000 so its period
//! is a whole number of simulated milliseconds; samples fire at every
//! multiple of the period. Frequencies above the 20 Hz tick rate yield
//! several samples per tick, all reading the same committed tick snapshot
//! (sample-and-hold) with advancing timestamps.

use crate::world::TICK_MS;

/// A poller's sampling schedule: one sample per `period_ms` of simulated
/// time, phase-locked to the epoch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cadence {
    period_ms: u64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CadenceError {
    #[error("poller frequency must be at least 1 Hz")]
    Zero,
    #[error(
        "frequency {0} Hz does not divide evenly into milliseconds: 1000 mod frequency_hz must be 0"
    )]
    NotDivisor(u32),
}

/// Schedule for a polling frequency under the fixed 20 Hz tick rate.
pub fn cadence_for(frequency_hz: u32) -> Result<Cadence, CadenceError> {
    if frequency_hz == 0 {
        return Err(CadenceError::Zero);
    }
    if 1000 % frequency_hz != 0 {
        return Err(CadenceError::NotDivisor(frequency_hz));
    }
    Ok(Cadence { period_ms: (1000 / frequency_hz) as u64 })
}

impl Cadence {
    pub fn period_ms(&self) -> u64 {
        self.period_ms
    }

    /// Sample instants (simulated ms since epoch) that fall inside the given
    /// tick's window `[tick*50, (tick+1)*50)`.
    pub fn instants_in_tick(&self, tick: u64) -> impl Iterator<Item = u64> {
        let period = self.period_ms;
        let window_start = tick * TICK_MS;
        let window_end = window_start + TICK_MS;
        let first = window_start.div_ceil(period) * period;
        (0..).map(move |k| first + k * period).take_while(move |t| *t < window_end)
    }

    /// Tick whose committed snapshot a sample at `instant_ms` reads.
    pub fn game_tick_of(instant_ms: u64) -> u64 {
        instant_ms / TICK_MS
    }
}
