//! Restricted iCalendar ingestion and recurrence expansion.
//!
//! The accepted dialect is the slice plain appointment exports actually
//! use: VEVENT blocks with DTSTART, DTEND and SUMMARY, optional UID, STATUS
//! and LOCATION, and RRULE limited to FREQ (DAILY, WEEKLY, MONTHLY),
//! INTERVAL, BYDAY, COUNT and UNTIL. Anything else inside a block is
//! ignored; an RRULE outside the subset rejects its block with a
//! diagnostic. TZID parameters are carried as opaque labels: the whole
//! calendar is assumed to live in one timezone, and all time comparisons
//! are naive.

use crate::error::{Diagnostic, Error};
use chrono::{Datelike, Duration, NaiveDate, NaiveDateTime, NaiveTime, Weekday};
use std::fmt;

pub fn weekday_name(day: Weekday) -> &'static str {
    match day {
        Weekday::Mon => "Monday",
        Weekday::Tue => "Tuesday",
        Weekday::Wed => "Wednesday",
        Weekday::Thu => "Thursday",
        Weekday::Fri => "Friday",
        Weekday::Sat => "Saturday",
        Weekday::Sun => "Sunday",
    }
}

pub fn weekday_code(day: Weekday) -> &'static str {
    match day {
        Weekday::Mon => "MO",
        Weekday::Tue => "TU",
        Weekday::Wed => "WE",
        Weekday::Thu => "TH",
        Weekday::Fri => "FR",
        Weekday::Sat => "SA",
        Weekday::Sun => "SU",
    }
}

pub fn weekday_from_code(code: &str) -> Option<Weekday> {
    match code.to_ascii_uppercase().as_str() {
        "MO" => Some(Weekday::Mon),
        "TU" => Some(Weekday::Tue),
        "WE" => Some(Weekday::Wed),
        "TH" => Some(Weekday::Thu),
        "FR" => Some(Weekday::Fri),
        "SA" => Some(Weekday::Sat),
        "SU" => Some(Weekday::Sun),
        _ => None,
    }
}

/// Monday of the week containing `date`. Weeks run Monday through Sunday.
pub fn monday_of(date: NaiveDate) -> NaiveDate {
    date - Duration::days(date.weekday().num_days_from_monday() as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frequency {
    Daily,
    Weekly,
    Monthly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecurrenceBound {
    /// Total number of occurrences, counted from the event's own start.
    Count(u32),
    /// Last admissible occurrence date, inclusive.
    Until(NaiveDate),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceSpec {
    pub frequency: Frequency,
    pub interval: u32,
    /// Sorted Monday-first and deduplicated.
    pub by_day: Option<Vec<Weekday>>,
    pub bound: Option<RecurrenceBound>,
}

impl RecurrenceSpec {
    pub fn weekly(interval: u32, by_day: Option<Vec<Weekday>>) -> RecurrenceSpec {
        RecurrenceSpec { frequency: Frequency::Weekly, interval, by_day: by_day.map(canonical_days), bound: None }
    }
}

fn canonical_days(mut days: Vec<Weekday>) -> Vec<Weekday> {
    days.sort_by_key(|d| d.num_days_from_monday());
    days.dedup();
    days
}

/// A naive local date-time plus the opaque timezone label it was written in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventTime {
    pub datetime: NaiveDateTime,
    pub tzid: Option<String>,
}

impl EventTime {
    pub fn naive(datetime: NaiveDateTime) -> EventTime {
        EventTime { datetime, tzid: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EventType {
    Recurring,
    NonRecurring,
}

impl fmt::Display for EventType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventType::Recurring => "Recurring",
            EventType::NonRecurring => "NonRecurring",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CalendarEvent {
    pub uid: String,
    pub name: String,
    pub start: EventTime,
    pub end: EventTime,
    pub recurrence: Option<RecurrenceSpec>,
    pub status: String,
    pub location: Option<String>,
}

impl CalendarEvent {
    pub fn event_type(&self) -> EventType {
        if self.recurrence.is_some() {
            EventType::Recurring
        } else {
            EventType::NonRecurring
        }
    }

    /// Daily time span of one occurrence. Events that cross midnight are
    /// truncated to their start day.
    pub fn occurrence_times(&self) -> (NaiveTime, NaiveTime) {
        let start = self.start.datetime;
        let end = self.end.datetime;
        if end.date() > start.date() {
            (start.time(), NaiveTime::from_hms_opt(23, 59, 59).unwrap())
        } else {
            (start.time(), end.time())
        }
    }
}

/// One dated occurrence of an event. The span is closed-open:
/// `[start_time, end_time)` on `date`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventOccurrence {
    pub event_uid: String,
    pub date: NaiveDate,
    pub start_time: NaiveTime,
    pub end_time: NaiveTime,
    pub event_type: EventType,
}

impl EventOccurrence {
    pub fn sort_key(&self) -> (NaiveDate, NaiveTime, NaiveTime, &str) {
        (self.date, self.start_time, self.end_time, &self.event_uid)
    }

    pub fn span(&self) -> (NaiveDateTime, NaiveDateTime) {
        (self.date.and_time(self.start_time), self.date.and_time(self.end_time))
    }
}

/// Closed date range, both ends inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DateRange {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl DateRange {
    pub fn new(start: NaiveDate, end: NaiveDate) -> DateRange {
        DateRange { start, end }
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.start <= date && date <= self.end
    }

    /// Parses `"2016-06-01..2016-06-30"`. The range must not be inverted.
    pub fn parse(text: &str) -> Result<DateRange, Error> {
        let (a, b) = text
            .split_once("..")
            .ok_or_else(|| Error::Config(format!("window `{text}` must look like YYYY-MM-DD..YYYY-MM-DD")))?;
        let parse = |s: &str| {
            NaiveDate::parse_from_str(s.trim(), "%Y-%m-%d")
                .map_err(|_| Error::Config(format!("`{}` is not a YYYY-MM-DD date", s.trim())))
        };
        let (start, end) = (parse(a)?, parse(b)?);
        if start > end {
            return Err(Error::InvalidWindow { start, end });
        }
        Ok(DateRange { start, end })
    }
}

impl fmt::Display for DateRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Default)]
pub struct ParsedCalendar {
    pub events: Vec<CalendarEvent>,
    pub diagnostics: Vec<Diagnostic>,
}

struct RawProp {
    name: String,
    params: Vec<(String, String)>,
    value: String,
    line: usize,
}

impl RawProp {
    fn param(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// Unfolds continuation lines (leading space or tab) and keeps the 1-based
/// physical line each logical line started on.
fn unfold_lines(text: &str) -> Vec<(usize, String)> {
    let mut out: Vec<(usize, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if let Some(rest) = line.strip_prefix(' ').or_else(|| line.strip_prefix('\t')) {
            if let Some((_, prev)) = out.last_mut() {
                prev.push_str(rest);
                continue;
            }
        }
        out.push((i + 1, line.to_string()));
    }
    out
}

fn parse_property(line: &str, line_no: usize) -> Option<RawProp> {
    let (head, value) = line.split_once(':')?;
    let mut segments = head.split(';');
    let name = segments.next()?.trim().to_ascii_uppercase();
    if name.is_empty() {
        return None;
    }
    let params = segments
        .filter_map(|seg| {
            let (k, v) = seg.split_once('=')?;
            Some((k.trim().to_ascii_uppercase(), v.trim().to_string()))
        })
        .collect();
    Some(RawProp { name, params, value: value.to_string(), line: line_no })
}

/// Parses `YYYYMMDDTHHMMSS` with an optional trailing `Z`.
fn parse_ics_datetime(value: &str) -> Result<(NaiveDateTime, bool), String> {
    let (body, utc) = match value.strip_suffix(['Z', 'z']) {
        Some(b) => (b, true),
        None => (value, false),
    };
    NaiveDateTime::parse_from_str(body, "%Y%m%dT%H%M%S")
        .map(|dt| (dt, utc))
        .map_err(|_| format!("`{value}` is not a YYYYMMDDTHHMMSS date-time"))
}

fn parse_rrule(value: &str) -> Result<RecurrenceSpec, String> {
    let mut frequency = None;
    let mut interval = 1u32;
    let mut by_day: Option<Vec<Weekday>> = None;
    let mut count: Option<u32> = None;
    let mut until: Option<NaiveDate> = None;
    for part in value.split(';').filter(|p| !p.is_empty()) {
        let (key, val) = part.split_once('=').ok_or_else(|| format!("malformed RRULE part `{part}`"))?;
        match key.to_ascii_uppercase().as_str() {
            "FREQ" => {
                frequency = Some(match val.to_ascii_uppercase().as_str() {
                    "DAILY" => Frequency::Daily,
                    "WEEKLY" => Frequency::Weekly,
                    "MONTHLY" => Frequency::Monthly,
                    other => return Err(format!("unsupported recurrence frequency `{other}`")),
                });
            }
            "INTERVAL" => {
                interval = val
                    .parse::<u32>()
                    .ok()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| format!("INTERVAL `{val}` must be a positive integer"))?;
            }
            "BYDAY" => {
                let days: Option<Vec<Weekday>> = val.split(',').map(weekday_from_code).collect();
                let days = days.ok_or_else(|| format!("BYDAY `{val}` must be a comma list of MO..SU codes"))?;
                by_day = Some(canonical_days(days));
            }
            "COUNT" => {
                count = Some(
                    val.parse::<u32>()
                        .ok()
                        .filter(|&n| n >= 1)
                        .ok_or_else(|| format!("COUNT `{val}` must be a positive integer"))?,
                );
            }
            "UNTIL" => {
                let date = if val.len() == 8 {
                    NaiveDate::parse_from_str(val, "%Y%m%d").ok()
                } else {
                    parse_ics_datetime(val).ok().map(|(dt, _)| dt.date())
                };
                until = Some(date.ok_or_else(|| format!("UNTIL `{val}` is not a date"))?);
            }
            other => return Err(format!("unsupported recurrence part `{other}`")),
        }
    }
    let frequency = frequency.ok_or_else(|| "RRULE has no FREQ".to_string())?;
    if count.is_some() && until.is_some() {
        return Err("RRULE must not carry both COUNT and UNTIL".to_string());
    }
    let bound = count.map(RecurrenceBound::Count).or(until.map(RecurrenceBound::Until));
    Ok(RecurrenceSpec { frequency, interval, by_day, bound })
}

fn build_event(begin_line: usize, props: &[RawProp], block_no: usize) -> Result<CalendarEvent, Diagnostic> {
    let find = |name: &str| props.iter().find(|p| p.name == name);
    let required = |name: &'static str| {
        find(name).ok_or_else(|| Diagnostic::error(begin_line, format!("VEVENT is missing required property {name}")))
    };

    let parse_time = |prop: &RawProp| -> Result<EventTime, Diagnostic> {
        let (datetime, utc) = parse_ics_datetime(prop.value.trim())
            .map_err(|msg| Diagnostic::error(prop.line, format!("{}: {msg}", prop.name)))?;
        let tzid = prop.param("TZID").map(str::to_string).or(if utc { Some("UTC".to_string()) } else { None });
        Ok(EventTime { datetime, tzid })
    };

    let start = parse_time(required("DTSTART")?)?;
    let end = parse_time(required("DTEND")?)?;
    let summary_prop = required("SUMMARY")?;
    let name = summary_prop.value.trim().to_string();
    if name.is_empty() {
        return Err(Diagnostic::error(summary_prop.line, "SUMMARY is empty"));
    }

    if end.datetime <= start.datetime {
        return Err(Diagnostic::error(begin_line, "DTEND must be strictly after DTSTART"));
    }

    let recurrence = match find("RRULE") {
        Some(prop) => {
            Some(parse_rrule(prop.value.trim()).map_err(|msg| Diagnostic::error(prop.line, format!("RRULE: {msg}")))?)
        }
        None => None,
    };

    let event = CalendarEvent {
        uid: find("UID").map(|p| p.value.trim().to_string()).filter(|u| !u.is_empty()).unwrap_or_else(|| format!("event-{block_no}")),
        name,
        start,
        end,
        recurrence,
        status: find("STATUS").map(|p| p.value.trim().to_string()).unwrap_or_default(),
        location: find("LOCATION").map(|p| p.value.trim().to_string()).filter(|l| !l.is_empty()),
    };
    let (occ_start, occ_end) = event.occurrence_times();
    if occ_start >= occ_end {
        return Err(Diagnostic::error(begin_line, "event truncates to an empty daily span"));
    }
    Ok(event)
}

/// Parses a calendar, collecting every well-formed VEVENT in the supported
/// subset. Malformed blocks are skipped with an error diagnostic; lines
/// outside VEVENT blocks (VCALENDAR wrappers, timezone definitions) are
/// ignored.
pub fn parse_icalendar(text: &str) -> ParsedCalendar {
    let mut events = Vec::new();
    let mut diagnostics = Vec::new();
    let mut block: Option<(usize, Vec<RawProp>)> = None;
    let mut block_no = 0usize;

    for (line_no, line) in unfold_lines(text) {
        if line.trim().is_empty() {
            continue;
        }
        if line.eq_ignore_ascii_case("BEGIN:VEVENT") {
            if let Some((begin, _)) = block.take() {
                diagnostics.push(Diagnostic::error(begin, "VEVENT has no END:VEVENT"));
            }
            block_no += 1;
            block = Some((line_no, Vec::new()));
            continue;
        }
        if line.eq_ignore_ascii_case("END:VEVENT") {
            match block.take() {
                Some((begin, props)) => match build_event(begin, &props, block_no) {
                    Ok(event) => events.push(event),
                    Err(diag) => diagnostics.push(diag),
                },
                None => diagnostics.push(Diagnostic::error(line_no, "END:VEVENT without matching BEGIN:VEVENT")),
            }
            continue;
        }
        if let Some((_, props)) = &mut block {
            match parse_property(&line, line_no) {
                Some(prop) => props.push(prop),
                None => diagnostics.push(Diagnostic::error(line_no, format!("unparseable content line `{line}`"))),
            }
        }
    }
    if let Some((begin, _)) = block {
        diagnostics.push(Diagnostic::error(begin, "VEVENT has no END:VEVENT"));
    }
    ParsedCalendar { events, diagnostics }
}

struct CountBudget(Option<u32>);

impl CountBudget {
    /// False once the occurrence budget is exhausted. Occurrences are
    /// counted from the event's own start, not from the window.
    fn take(&mut self) -> bool {
        match &mut self.0 {
            None => true,
            Some(0) => false,
            Some(n) => {
                *n -= 1;
                true
            }
        }
    }
}

/// Expands one event into its dated occurrences inside `window`, in
/// ascending date order.
pub fn expand_occurrences(event: &CalendarEvent, window: DateRange) -> Result<Vec<EventOccurrence>, Error> {
    if window.start > window.end {
        return Err(Error::InvalidWindow { start: window.start, end: window.end });
    }
    let start_date = event.start.datetime.date();
    let (start_time, end_time) = event.occurrence_times();
    let make = |date: NaiveDate| EventOccurrence {
        event_uid: event.uid.clone(),
        date,
        start_time,
        end_time,
        event_type: event.event_type(),
    };

    let Some(spec) = &event.recurrence else {
        return Ok(if window.contains(start_date) { vec![make(start_date)] } else { Vec::new() });
    };

    let until = match spec.bound {
        Some(RecurrenceBound::Until(d)) => Some(d),
        _ => None,
    };
    let mut budget = CountBudget(match spec.bound {
        Some(RecurrenceBound::Count(n)) => Some(n),
        _ => None,
    });
    // Nothing can fall after this date, so generation stops there.
    let last = until.map_or(window.end, |u| u.min(window.end));
    let mut out = Vec::new();

    match spec.frequency {
        Frequency::Daily => {
            let mut date = start_date;
            while date <= last {
                let on_cycle = spec.by_day.as_ref().map_or(true, |days| days.contains(&date.weekday()));
                if on_cycle {
                    if !budget.take() {
                        break;
                    }
                    if date >= window.start {
                        out.push(make(date));
                    }
                }
                date += Duration::days(spec.interval as i64);
            }
        }
        Frequency::Weekly => {
            let days = spec.by_day.clone().unwrap_or_else(|| vec![start_date.weekday()]);
            let anchor = monday_of(start_date);
            let mut week = 0i64;
            'weeks: loop {
                let week_start = anchor + Duration::days(7 * week);
                if week_start > last {
                    break;
                }
                for &day in &days {
                    let date = week_start + Duration::days(day.num_days_from_monday() as i64);
                    if date < start_date {
                        continue;
                    }
                    if date > last {
                        break 'weeks;
                    }
                    if !budget.take() {
                        break 'weeks;
                    }
                    if date >= window.start {
                        out.push(make(date));
                    }
                }
                week += spec.interval as i64;
            }
        }
        Frequency::Monthly => {
            let mut step = 0u32;
            'months: loop {
                let (year, month) = add_months(start_date.year(), start_date.month(), step * spec.interval);
                let month_first = match NaiveDate::from_ymd_opt(year, month, 1) {
                    Some(d) => d,
                    None => break,
                };
                if month_first > last {
                    break;
                }
                let dates: Vec<NaiveDate> = match &spec.by_day {
                    Some(days) => dates_of_month(year, month).filter(|d| days.contains(&d.weekday())).collect(),
                    None => NaiveDate::from_ymd_opt(year, month, start_date.day()).into_iter().collect(),
                };
                for date in dates {
                    if date < start_date {
                        continue;
                    }
                    if date > last {
                        break 'months;
                    }
                    if !budget.take() {
                        break 'months;
                    }
                    if date >= window.start {
                        out.push(make(date));
                    }
                }
                step += 1;
            }
        }
    }
    debug_assert!(out.windows(2).all(|w| w[0].date < w[1].date));
    Ok(out)
}

fn add_months(year: i32, month: u32, delta: u32) -> (i32, u32) {
    let total = (year as i64) * 12 + (month as i64 - 1) + delta as i64;
    ((total.div_euclid(12)) as i32, (total.rem_euclid(12) + 1) as u32)
}

fn dates_of_month(year: i32, month: u32) -> impl Iterator<Item = NaiveDate> {
    (1..=31).filter_map(move |day| NaiveDate::from_ymd_opt(year, month, day))
}

/// Expands every event and returns all occurrences sorted by time.
pub fn expand_all(events: &[CalendarEvent], window: DateRange) -> Result<Vec<EventOccurrence>, Error> {
    let mut out = Vec::new();
    for event in events {
        out.extend(expand_occurrences(event, window)?);
    }
    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(out)
}

fn format_ics_datetime(t: &EventTime) -> String {
    t.datetime.format("%Y%m%dT%H%M%S").to_string()
}

fn push_time_prop(lines: &mut Vec<String>, name: &str, t: &EventTime) {
    match t.tzid.as_deref() {
        Some("UTC") => lines.push(format!("{name}:{}Z", format_ics_datetime(t))),
        Some(tzid) => lines.push(format!("{name};TZID={tzid}:{}", format_ics_datetime(t))),
        None => lines.push(format!("{name}:{}", format_ics_datetime(t))),
    }
}

fn format_rrule(spec: &RecurrenceSpec) -> String {
    let mut s = format!(
        "FREQ={}",
        match spec.frequency {
            Frequency::Daily => "DAILY",
            Frequency::Weekly => "WEEKLY",
            Frequency::Monthly => "MONTHLY",
        }
    );
    if spec.interval > 1 {
        s.push_str(&format!(";INTERVAL={}", spec.interval));
    }
    if let Some(days) = &spec.by_day {
        let codes: Vec<&str> = days.iter().map(|&d| weekday_code(d)).collect();
        s.push_str(&format!(";BYDAY={}", codes.join(",")));
    }
    match spec.bound {
        Some(RecurrenceBound::Count(n)) => s.push_str(&format!(";COUNT={n}")),
        Some(RecurrenceBound::Until(d)) => s.push_str(&format!(";UNTIL={}", d.format("%Y%m%d"))),
        None => {}
    }
    s
}

/// Serializes events back to the supported subset, CRLF-terminated. A seed,
/// when given, is recorded as a calendar-level X-SEED property so generated
/// files carry their own provenance.
pub fn write_ics(events: &[CalendarEvent], seed: Option<u64>) -> String {
    let mut lines = vec!["BEGIN:VCALENDAR".to_string(), "VERSION:2.0".to_string(), "PRODID:-//calbehav//EN".to_string()];
    if let Some(seed) = seed {
        lines.push(format!("X-SEED:{seed}"));
    }
    for event in events {
        lines.push("BEGIN:VEVENT".to_string());
        lines.push(format!("UID:{}", event.uid));
        lines.push(format!("SUMMARY:{}", event.name));
        push_time_prop(&mut lines, "DTSTART", &event.start);
        push_time_prop(&mut lines, "DTEND", &event.end);
        if let Some(spec) = &event.recurrence {
            lines.push(format!("RRULE:{}", format_rrule(spec)));
        }
        if !event.status.is_empty() {
            lines.push(format!("STATUS:{}", event.status));
        }
        if let Some(location) = &event.location {
            lines.push(format!("LOCATION:{location}"));
        }
        lines.push("END:VEVENT".to_string());
    }
    lines.push("END:VCALENDAR".to_string());
    let mut out = lines.join("\r\n");
    out.push_str("\r\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Severity;

    fn date(y: i32, m: u32, d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, d).unwrap()
    }

    fn june_2016() -> DateRange {
        DateRange::new(date(2016, 6, 1), date(2016, 6, 30))
    }

    const BIWEEKLY_THURSDAY: &str = "BEGIN:VCALENDAR\r\nVERSION:2.0\r\nPRODID:-//Example//EN\r\nBEGIN:VEVENT\r\nDTSTART;TZID=Australia/Sydney:20160602T080000\r\nDTEND;TZID=Australia/Sydney:20160602T090000\r\nRRULE:FREQ=WEEKLY;INTERVAL=2;BYDAY=TH\r\nDTSTAMP:20160601T000000Z\r\nUID:meeting-001@example.org\r\nCREATED:20160520T091823Z\r\nDESCRIPTION:\r\nLAST-MODIFIED:20160601T000000Z\r\nLOCATION:\r\nSEQUENCE:0\r\nSTATUS:CONFIRMED\r\nSUMMARY:Meeting\r\nTRANSP:OPAQUE\r\nEND:VEVENT\r\nEND:VCALENDAR\r\n";

    #[test]
    fn parses_biweekly_thursday_event() {
        let parsed = parse_icalendar(BIWEEKLY_THURSDAY);
        assert!(parsed.diagnostics.is_empty(), "{:?}", parsed.diagnostics);
        assert_eq!(parsed.events.len(), 1);
        let ev = &parsed.events[0];
        assert_eq!(ev.uid, "meeting-001@example.org");
        assert_eq!(ev.name, "Meeting");
        assert_eq!(ev.status, "CONFIRMED");
        assert_eq!(ev.location, None); // empty LOCATION collapses to none
        assert_eq!(ev.start.datetime, date(2016, 6, 2).and_hms_opt(8, 0, 0).unwrap());
        assert_eq!(ev.start.tzid.as_deref(), Some("Australia/Sydney"));
        assert_eq!(ev.end.datetime, date(2016, 6, 2).and_hms_opt(9, 0, 0).unwrap());
        let spec = ev.recurrence.as_ref().unwrap();
        assert_eq!(spec.frequency, Frequency::Weekly);
        assert_eq!(spec.interval, 2);
        assert_eq!(spec.by_day, Some(vec![Weekday::Thu]));
        assert_eq!(spec.bound, None);
        assert_eq!(ev.event_type(), EventType::Recurring);
    }

    #[test]
    fn biweekly_thursday_expands_to_three_june_dates() {
        // Hand enumeration of June 2016: Thursdays fall on the 2nd, 9th,
        // 16th, 23rd and 30th; every second week from the 2nd keeps the
        // 2nd, 16th and 30th.
        let parsed = parse_icalendar(BIWEEKLY_THURSDAY);
        let occ = expand_occurrences(&parsed.events[0], june_2016()).unwrap();
        let dates: Vec<NaiveDate> = occ.iter().map(|o| o.date).collect();
        assert_eq!(dates, vec![date(2016, 6, 2), date(2016, 6, 16), date(2016, 6, 30)]);
        for o in &occ {
            assert_eq!(o.start_time, NaiveTime::from_hms_opt(8, 0, 0).unwrap());
            assert_eq!(o.end_time, NaiveTime::from_hms_opt(9, 0, 0).unwrap());
            assert_eq!(o.event_type, EventType::Recurring);
        }
    }

    #[test]
    fn empty_input_yields_nothing() {
        let parsed = parse_icalendar("");
        assert!(parsed.events.is_empty());
        assert!(parsed.diagnostics.is_empty());
    }

    #[test]
    fn classifies_recurring_and_one_off_events() {
        let text = "BEGIN:VEVENT\nUID:a\nSUMMARY:Standup\nDTSTART:20160606T093000\nDTEND:20160606T094500\nRRULE:FREQ=DAILY\nEND:VEVENT\nBEGIN:VEVENT\nUID:b\nSUMMARY:Dentist\nDTSTART:20160607T110000\nDTEND:20160607T114500\nEND:VEVENT\n";
        let parsed = parse_icalendar(text);
        assert!(parsed.diagnostics.is_empty());
        assert_eq!(parsed.events[0].event_type(), EventType::Recurring);
        assert_eq!(parsed.events[1].event_type(), EventType::NonRecurring);
    }

    #[test]
    fn unfolds_continuation_lines() {
        let text = "BEGIN:VEVENT\r\nUID:folded\r\nSUMMARY:Quarterly\r\n  planning\r\nDTSTART:20160606T100000\r\nDTEND:20160606T110000\r\nEND:VEVENT\r\n";
        let parsed = parse_icalendar(text);
        assert!(parsed.diagnostics.is_empty(), "{:?}", parsed.diagnostics);
        // One fold marker space is consumed; the rest of the content stays.
        assert_eq!(parsed.events[0].name, "Quarterly planning");
    }

    #[test]
    fn missing_dtend_rejects_block_but_keeps_others() {
        let text = "BEGIN:VEVENT\nUID:bad\nSUMMARY:Broken\nDTSTART:20160606T100000\nEND:VEVENT\nBEGIN:VEVENT\nUID:good\nSUMMARY:Fine\nDTSTART:20160607T100000\nDTEND:20160607T110000\nEND:VEVENT\n";
        let parsed = parse_icalendar(text);
        assert_eq!(parsed.events.len(), 1);
        assert_eq!(parsed.events[0].uid, "good");
        assert_eq!(parsed.diagnostics.len(), 1);
        let diag = &parsed.diagnostics[0];
        assert_eq!(diag.severity, Severity::Error);
        assert_eq!(diag.line, 1);
        assert!(diag.message.contains("DTEND"), "{diag}");
    }

    #[test]
    fn missing_end_vevent_is_diagnosed() {
        let text = "BEGIN:VEVENT\nUID:x\nSUMMARY:Open\nDTSTART:20160606T100000\nDTEND:20160606T110000\n";
        let parsed = parse_icalendar(text);
        assert!(parsed.events.is_empty());
        assert_eq!(parsed.diagnostics.len(), 1);
        assert!(parsed.diagnostics[0].message.contains("END:VEVENT"));
    }

    #[test]
    fn unsupported_frequency_rejects_block() {
        let text = "BEGIN:VEVENT\nUID:x\nSUMMARY:Yearly\nDTSTART:20160606T100000\nDTEND:20160606T110000\nRRULE:FREQ=YEARLY\nEND:VEVENT\n";
        let parsed = parse_icalendar(text);
        assert!(parsed.events.is_empty());
        assert!(parsed.diagnostics[0].message.contains("YEARLY"));
    }

    #[test]
    fn unsupported_rrule_part_rejects_block() {
        let text = "BEGIN:VEVENT\nUID:x\nSUMMARY:Odd\nDTSTART:20160606T100000\nDTEND:20160606T110000\nRRULE:FREQ=WEEKLY;BYSETPOS=1\nEND:VEVENT\n";
        let parsed = parse_icalendar(text);
        assert!(parsed.events.is_empty());
        assert!(parsed.diagnostics[0].message.contains("BYSETPOS"));
    }

    #[test]
    fn empty_summary_rejects_block() {
        let text = "BEGIN:VEVENT\nUID:x\nSUMMARY:   \nDTSTART:20160606T100000\nDTEND:20160606T110000\nEND:VEVENT\n";
        let parsed = parse_icalendar(text);
        assert!(parsed.events.is_empty());
        assert!(parsed.diagnostics[0].message.contains("SUMMARY"));
    }

    #[test]
    fn inverted_times_reject_block() {
        let text = "BEGIN:VEVENT\nUID:x\nSUMMARY:Backwards\nDTSTART:20160606T110000\nDTEND:20160606T100000\nEND:VEVENT\n";
        let parsed = parse_icalendar(text);
        assert!(parsed.events.is_empty());
        assert!(parsed.diagnostics[0].message.contains("DTEND"));
    }

    #[test]
    fn missing_uid_gets_stable_synthetic_uid() {
        let text = "BEGIN:VEVENT\nSUMMARY:NoUid\nDTSTART:20160606T100000\nDTEND:20160606T110000\nEND:VEVENT\n";
        let parsed = parse_icalendar(text);
        assert_eq!(parsed.events[0].uid, "event-1");
    }

    #[test]
    fn one_off_respects_window() {
        let text = "BEGIN:VEVENT\nUID:x\nSUMMARY:Dinner\nDTSTART:20160715T190000\nDTEND:20160715T210000\nEND:VEVENT\n";
        let ev = &parse_icalendar(text).events[0];
        assert!(expand_occurrences(ev, june_2016()).unwrap().is_empty());
        let july = DateRange::new(date(2016, 7, 1), date(2016, 7, 31));
        let occ = expand_occurrences(ev, july).unwrap();
        assert_eq!(occ.len(), 1);
        assert_eq!(occ[0].date, date(2016, 7, 15));
        assert_eq!(occ[0].event_type, EventType::NonRecurring);
    }

    #[test]
    fn daily_count_and_interval() {
        let text = "BEGIN:VEVENT\nUID:x\nSUMMARY:Pills\nDTSTART:20160601T080000\nDTEND:20160601T081000\nRRULE:FREQ=DAILY;COUNT=3\nEND:VEVENT\n";
        let ev = &parse_icalendar(text).events[0];
        let occ = expand_occurrences(ev, june_2016()).unwrap();
        let dates: Vec<NaiveDate> = occ.iter().map(|o| o.date).collect();
        assert_eq!(dates, vec![date(2016, 6, 1), date(2016, 6, 2), date(2016, 6, 3)]);

        let text = "BEGIN:VEVENT\nUID:x\nSUMMARY:Walk\nDTSTART:20160601T080000\nDTEND:20160601T083000\nRRULE:FREQ=DAILY;INTERVAL=10\nEND:VEVENT\n";
        let ev = &parse_icalendar(text).events[0];
        let dates: Vec<NaiveDate> = expand_occurrences(ev, june_2016()).unwrap().iter().map(|o| o.date).collect();
        assert_eq!(dates, vec![date(2016, 6, 1), date(2016, 6, 11), date(2016, 6, 21)]);
    }

    #[test]
    fn count_is_consumed_before_the_window_opens() {
        // Four daily occurrences starting May 30: the first two land before
        // the window and still consume the budget, leaving June 1 and 2.
        let text = "BEGIN:VEVENT\nUID:x\nSUMMARY:Course\nDTSTART:20160530T080000\nDTEND:20160530T090000\nRRULE:FREQ=DAILY;COUNT=4\nEND:VEVENT\n";
        let ev = &parse_icalendar(text).events[0];
        let dates: Vec<NaiveDate> = expand_occurrences(ev, june_2016()).unwrap().iter().map(|o| o.date).collect();
        assert_eq!(dates, vec![date(2016, 6, 1), date(2016, 6, 2)]);
    }

    #[test]
    fn until_is_inclusive() {
        let text = "BEGIN:VEVENT\nUID:x\nSUMMARY:Series\nDTSTART:20160601T080000\nDTEND:20160601T090000\nRRULE:FREQ=DAILY;UNTIL=20160603\nEND:VEVENT\n";
        let ev = &parse_icalendar(text).events[0];
        let dates: Vec<NaiveDate> = expand_occurrences(ev, june_2016()).unwrap().iter().map(|o| o.date).collect();
        assert_eq!(dates, vec![date(2016, 6, 1), date(2016, 6, 2), date(2016, 6, 3)]);
    }

    #[test]
    fn weekly_without_byday_recurs_on_start_weekday() {
        let text = "BEGIN:VEVENT\nUID:x\nSUMMARY:Gym\nDTSTART:20160603T170000\nDTEND:20160603T180000\nRRULE:FREQ=WEEKLY\nEND:VEVENT\n";
        let ev = &parse_icalendar(text).events[0];
        let dates: Vec<NaiveDate> = expand_occurrences(ev, june_2016()).unwrap().iter().map(|o| o.date).collect();
        // June 3 2016 is a Friday.
        assert_eq!(dates, vec![date(2016, 6, 3), date(2016, 6, 10), date(2016, 6, 17), date(2016, 6, 24)]);
    }

    #[test]
    fn weekly_multi_byday_skips_days_before_start() {
        // Starts on a Thursday with BYDAY=MO,TH: the Monday of the start
        // week precedes DTSTART and must not appear.
        let text = "BEGIN:VEVENT\nUID:x\nSUMMARY:Tutoring\nDTSTART:20160602T150000\nDTEND:20160602T160000\nRRULE:FREQ=WEEKLY;BYDAY=MO,TH;COUNT=4\nEND:VEVENT\n";
        let ev = &parse_icalendar(text).events[0];
        let dates: Vec<NaiveDate> = expand_occurrences(ev, june_2016()).unwrap().iter().map(|o| o.date).collect();
        assert_eq!(dates, vec![date(2016, 6, 2), date(2016, 6, 6), date(2016, 6, 9), date(2016, 6, 13)]);
    }

    #[test]
    fn monthly_on_the_31st_skips_short_months() {
        let text = "BEGIN:VEVENT\nUID:x\nSUMMARY:Rent\nDTSTART:20160131T090000\nDTEND:20160131T091500\nRRULE:FREQ=MONTHLY\nEND:VEVENT\n";
        let ev = &parse_icalendar(text).events[0];
        let window = DateRange::new(date(2016, 1, 1), date(2016, 6, 30));
        let dates: Vec<NaiveDate> = expand_occurrences(ev, window).unwrap().iter().map(|o| o.date).collect();
        assert_eq!(dates, vec![date(2016, 1, 31), date(2016, 3, 31), date(2016, 5, 31)]);
    }

    #[test]
    fn monthly_byday_enumerates_matching_weekdays() {
        let text = "BEGIN:VEVENT\nUID:x\nSUMMARY:Clinic\nDTSTART:20160603T100000\nDTEND:20160603T110000\nRRULE:FREQ=MONTHLY;BYDAY=FR;COUNT=6\nEND:VEVENT\n";
        let ev = &parse_icalendar(text).events[0];
        let window = DateRange::new(date(2016, 6, 1), date(2016, 7, 31));
        let dates: Vec<NaiveDate> = expand_occurrences(ev, window).unwrap().iter().map(|o| o.date).collect();
        // All Fridays of June from the 3rd (4 of them), then two in July.
        assert_eq!(
            dates,
            vec![date(2016, 6, 3), date(2016, 6, 10), date(2016, 6, 17), date(2016, 6, 24), date(2016, 7, 1), date(2016, 7, 8)]
        );
    }

    #[test]
    fn multi_day_event_truncates_to_start_day() {
        let text = "BEGIN:VEVENT\nUID:x\nSUMMARY:Retreat\nDTSTART:20160610T180000\nDTEND:20160612T100000\nEND:VEVENT\n";
        let ev = &parse_icalendar(text).events[0];
        let occ = expand_occurrences(ev, june_2016()).unwrap();
        assert_eq!(occ.len(), 1);
        assert_eq!(occ[0].date, date(2016, 6, 10));
        assert_eq!(occ[0].start_time, NaiveTime::from_hms_opt(18, 0, 0).unwrap());
        assert_eq!(occ[0].end_time, NaiveTime::from_hms_opt(23, 59, 59).unwrap());
    }

    #[test]
    fn inverted_window_is_rejected() {
        let parsed = parse_icalendar(BIWEEKLY_THURSDAY);
        let window = DateRange::new(date(2016, 6, 30), date(2016, 6, 1));
        assert!(matches!(expand_occurrences(&parsed.events[0], window), Err(Error::InvalidWindow { .. })));
    }

    #[test]
    fn window_parse() {
        let w = DateRange::parse("2016-06-01..2016-06-30").unwrap();
        assert_eq!(w, june_2016());
        assert!(DateRange::parse("2016-06-30..2016-06-01").is_err());
        assert!(DateRange::parse("2016-06-01").is_err());
        assert!(DateRange::parse("junk..2016-06-01").is_err());
    }

    #[test]
    fn emitted_calendar_reparses_identically() {
        let text = "BEGIN:VEVENT\nUID:x\nSUMMARY:Seminar\nDTSTART;TZID=Australia/Sydney:20160602T130000\nDTEND;TZID=Australia/Sydney:20160602T150000\nRRULE:FREQ=WEEKLY;INTERVAL=2;BYDAY=TH;COUNT=9\nSTATUS:CONFIRMED\nLOCATION:Room 7\nEND:VEVENT\nBEGIN:VEVENT\nUID:y\nSUMMARY:Dentist\nDTSTART:20160609T110000Z\nDTEND:20160609T114500Z\nEND:VEVENT\n";
        let first = parse_icalendar(text);
        assert!(first.diagnostics.is_empty());
        let emitted = write_ics(&first.events, Some(42));
        assert!(emitted.contains("X-SEED:42"));
        let second = parse_icalendar(&emitted);
        assert!(second.diagnostics.is_empty(), "{:?}", second.diagnostics);
        assert_eq!(first.events, second.events);
        // Emitting the reparsed events is byte-stable.
        assert_eq!(emitted, write_ics(&second.events, Some(42)));
    }
}
