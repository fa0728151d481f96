//! Civil clock instants and the time-navigation primitives built on them:
//! snapping, stepping, representative days and the 9 point-in-time matrix.
//!
//! All times are civil clock time at the site with a fixed UTC offset taken
//! from the [`Site`](crate::scene::Site); there is no daylight saving.

use std::fmt;

use chrono::{Datelike, Duration, NaiveDate, NaiveDateTime, NaiveTime, Timelike};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::num::Real;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TimeError {
    #[error("month {0} out of range 1..=12")]
    Month(u32),
    #[error("day {day} does not exist in {year}-{month:02}")]
    Day { year: i32, month: u32, day: u32 },
    #[error("hour {0} out of range 0..24")]
    Hour(u32),
    #[error("minute {0} out of range 0..60")]
    Minute(u32),
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}

impl TimeError {
    /// Name of the offending field, for structured error replies.
    pub fn field(&self) -> &'static str {
        match self {
            TimeError::Month(_) => "month",
            TimeError::Day { .. } => "day",
            TimeError::Hour(_) => "hour",
            TimeError::Minute(_) => "minute",
            TimeError::Parse { what, .. } => what,
        }
    }
}

/// Valid Gregorian date and clock time, minute resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInstant", into = "RawInstant")]
pub struct CivilInstant(NaiveDateTime);

#[derive(Serialize, Deserialize)]
struct RawInstant {
    year: i32,
    month: u32,
    day: u32,
    hour: u32,
    minute: u32,
}

impl TryFrom<RawInstant> for CivilInstant {
    type Error = TimeError;
    fn try_from(r: RawInstant) -> Result<Self, TimeError> {
        CivilInstant::new(r.year, r.month, r.day, r.hour, r.minute)
    }
}

impl From<CivilInstant> for RawInstant {
    fn from(t: CivilInstant) -> Self {
        RawInstant { year: t.year(), month: t.month(), day: t.day(), hour: t.hour(), minute: t.minute() }
    }
}

impl CivilInstant {
    pub fn new(year: i32, month: u32, day: u32, hour: u32, minute: u32) -> Result<Self, TimeError> {
        if !(1..=12).contains(&month) {
            return Err(TimeError::Month(month));
        }
        if hour >= 24 {
            return Err(TimeError::Hour(hour));
        }
        if minute >= 60 {
            return Err(TimeError::Minute(minute));
        }
        let date = NaiveDate::from_ymd_opt(year, month, day).ok_or(TimeError::Day { year, month, day })?;
        let time = NaiveTime::from_hms_opt(hour, minute, 0).expect("checked above");
        Ok(Self(date.and_time(time)))
    }

    pub fn from_date(date: NaiveDate, hour: u32, minute: u32) -> Result<Self, TimeError> {
        Self::new(date.year(), date.month(), date.day(), hour, minute)
    }

    /// Parses `YYYY-MM-DD` and `HH:MM`.
    pub fn parse(date: &str, time: &str) -> Result<Self, TimeError> {
        let bad = |what, input: &str| TimeError::Parse { what, input: input.to_owned() };
        let d: Vec<&str> = date.trim().split('-').collect();
        let (year, month, day) = match d.as_slice() {
            [y, m, d] => (
                y.parse().map_err(|_| bad("year", date))?,
                m.parse().map_err(|_| bad("month", date))?,
                d.parse().map_err(|_| bad("day", date))?,
            ),
            _ => return Err(bad("date", date)),
        };
        let (hour, minute) = match time.trim().split_once(':') {
            Some((h, m)) => (h.parse().map_err(|_| bad("hour", time))?, m.parse().map_err(|_| bad("minute", time))?),
            None => return Err(bad("time", time)),
        };
        Self::new(year, month, day, hour, minute)
    }

    pub fn year(&self) -> i32 {
        self.0.year()
    }
    pub fn month(&self) -> u32 {
        self.0.month()
    }
    pub fn day(&self) -> u32 {
        self.0.day()
    }
    pub fn hour(&self) -> u32 {
        self.0.hour()
    }
    pub fn minute(&self) -> u32 {
        self.0.minute()
    }

    pub fn date(&self) -> NaiveDate {
        self.0.date()
    }

    /// Clock time as fractional hours since local midnight.
    pub fn hours<T: Real>(&self) -> T {
        T::lit(self.hour() as f64 + self.minute() as f64 / 60.0)
    }

    pub fn add_minutes(self, minutes: i64) -> Self {
        Self(self.0 + Duration::minutes(minutes))
    }

    pub fn add_days(self, days: i64) -> Self {
        Self(self.0 + Duration::days(days))
    }

    fn with_date(self, date: NaiveDate) -> Self {
        Self(date.and_time(self.0.time()))
    }

    fn with_clock(self, hour: u32) -> Self {
        Self(self.0.date().and_hms_opt(hour, 0, 0).expect("hour < 24"))
    }
}

impl fmt::Display for CivilInstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.format("%Y-%m-%d %H:%M"))
    }
}

/// Which components of the clock snap to preferred values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SnapMode {
    /// Whole hours.
    Hour,
    /// The 21st of a month.
    Day,
    Both,
    #[default]
    Off,
}

impl SnapMode {
    fn snaps_hour(self) -> bool {
        matches!(self, SnapMode::Hour | SnapMode::Both)
    }
    fn snaps_day(self) -> bool {
        matches!(self, SnapMode::Day | SnapMode::Both)
    }
}

impl std::str::FromStr for SnapMode {
    type Err = TimeError;
    fn from_str(s: &str) -> Result<Self, TimeError> {
        match s {
            "hour" => Ok(SnapMode::Hour),
            "day" => Ok(SnapMode::Day),
            "both" => Ok(SnapMode::Both),
            "off" => Ok(SnapMode::Off),
            _ => Err(TimeError::Parse { what: "snap mode", input: s.to_owned() }),
        }
    }
}

pub const SNAP_DAY: u32 = 21;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rounding {
    Nearest,
    Up,
    Down,
}

impl Rounding {
    fn from_sign(n: i64) -> Self {
        match n.signum() {
            1 => Rounding::Up,
            -1 => Rounding::Down,
            _ => Rounding::Nearest,
        }
    }
}

fn round_clock(t: CivilInstant, how: Rounding) -> CivilInstant {
    let m = t.minute();
    if m == 0 {
        return t;
    }
    let up = match how {
        Rounding::Nearest => m >= 30,
        Rounding::Up => true,
        Rounding::Down => false,
    };
    let base = t.with_clock(t.hour());
    if up {
        base.add_minutes(60)
    } else {
        base
    }
}

fn twenty_first(year: i32, month: i32) -> NaiveDate {
    let y = year + (month - 1).div_euclid(12);
    let m = (month - 1).rem_euclid(12) + 1;
    NaiveDate::from_ymd_opt(y, m as u32, SNAP_DAY).expect("every month has a 21st")
}

fn snap_date(d: NaiveDate, how: Rounding) -> NaiveDate {
    let (y, m) = (d.year(), d.month() as i32);
    if d.day() == SNAP_DAY {
        return d;
    }
    let before = if d.day() > SNAP_DAY { twenty_first(y, m) } else { twenty_first(y, m - 1) };
    let after = if d.day() > SNAP_DAY { twenty_first(y, m + 1) } else { twenty_first(y, m) };
    match how {
        Rounding::Up => after,
        Rounding::Down => before,
        Rounding::Nearest => {
            let back = (d - before).num_days();
            let ahead = (after - d).num_days();
            if back < ahead {
                before
            } else {
                after
            }
        }
    }
}

fn snap_with(t: CivilInstant, mode: SnapMode, clock: Rounding, date: Rounding) -> CivilInstant {
    // Clock first: rounding can carry into the next day, and the date snap
    // must see the carried date for the result to be a fixed point.
    let t = if mode.snaps_hour() { round_clock(t, clock) } else { t };
    if mode.snaps_day() {
        t.with_date(snap_date(t.date(), date))
    } else {
        t
    }
}

/// Snaps to the nearest whole hour (half past rounds up) and/or the 21st of
/// the nearest month (ties go to the later month).
pub fn snap_time(t: CivilInstant, mode: SnapMode) -> CivilInstant {
    snap_with(t, mode, Rounding::Nearest, Rounding::Nearest)
}

/// A joystick-style move along one time axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeStep {
    /// Clock time changes, date follows on wrap.
    Hour(i64),
    /// Date changes, clock time is kept.
    Day(i64),
}

/// Applies a step, then the snap mode. Snapping rounds in the direction of
/// travel, so a forward step never lands behind its start.
pub fn step_time(t: CivilInstant, step: TimeStep, mode: SnapMode) -> CivilInstant {
    let (moved, n) = match step {
        TimeStep::Hour(n) => (t.add_minutes(60 * n), n),
        TimeStep::Day(n) => (t.add_days(n), n),
    };
    let dir = Rounding::from_sign(n);
    snap_with(moved, mode, dir, dir)
}

/// Representative day per month for sun-path arcs, as `(month, day)`.
///
/// The strict list has no April entry; the default list adds April 20 so
/// every month has an arc.
pub fn representative_days(strict: bool) -> Vec<(u32, u32)> {
    let mut days = vec![
        (1, 21),
        (2, 18),
        (3, 20),
        (4, 20),
        (5, 21),
        (6, 21),
        (7, 21),
        (8, 23),
        (9, 22),
        (10, 22),
        (11, 21),
        (12, 22),
    ];
    if strict {
        days.retain(|&(m, _)| m != 4);
    }
    days
}

pub const NINE_POINT_DAYS: [(u32, u32); 3] = [(6, 21), (3, 20), (12, 22)];
pub const NINE_POINT_HOURS: [u32; 3] = [9, 12, 15];

/// Solstices and equinox at 09:00, 12:00 and 15:00, ordered by day then hour.
pub fn nine_point_matrix(year: i32) -> Vec<CivilInstant> {
    NINE_POINT_DAYS
        .iter()
        .flat_map(|&(m, d)| {
            NINE_POINT_HOURS.iter().map(move |&h| CivilInstant::new(year, m, d, h, 0).expect("fixed valid dates"))
        })
        .collect()
}
