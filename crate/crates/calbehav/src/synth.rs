//! Seeded synthetic bundles: a calendar, a call log, a relationship table,
//! and a truth file recording every generated call's context and behavior.
//!
//! Bundles come from three places: a JSON user profile driven by a seeded
//! RNG, the canned `demo` bundle with hand-picked counts, and a ten-user
//! cohort of heterogeneous profiles for method comparison.

use crate::calendar::{
    expand_all, weekday_code, weekday_from_code, write_ics, CalendarEvent, DateRange, EventTime,
    Frequency, RecurrenceBound, RecurrenceSpec,
};
use crate::error::Error;
use crate::phonelog::{CallBehavior, CallType, RelationshipMap, TIMESTAMP_FORMAT};
use crate::rng::SplitMix64;
use chrono::{Datelike, Duration, NaiveDate, NaiveDateTime, NaiveTime};
use serde::Deserialize;
use serde_json::{json, Value};
use std::path::Path;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecurrenceTemplate {
    pub frequency: String,
    #[serde(default = "default_interval")]
    pub interval: u32,
    pub by_day: Option<Vec<String>>,
    pub count: Option<u32>,
    pub until: Option<String>,
}

fn default_interval() -> u32 {
    1
}

impl RecurrenceTemplate {
    fn to_spec(&self) -> Result<RecurrenceSpec, Error> {
        let frequency = match self.frequency.as_str() {
            "daily" => Frequency::Daily,
            "weekly" => Frequency::Weekly,
            "monthly" => Frequency::Monthly,
            other => {
                return Err(Error::Profile(format!(
                    "recurrence frequency must be daily, weekly, or monthly, got `{other}`"
                )))
            }
        };
        if self.interval == 0 {
            return Err(Error::Profile(String::from("recurrence interval must be at least 1")));
        }
        let by_day = match &self.by_day {
            None => None,
            Some(codes) => {
                let mut days = Vec::new();
                for code in codes {
                    days.push(weekday_from_code(code).ok_or_else(|| {
                        Error::Profile(format!("`{code}` is not a weekday code (MO..SU)"))
                    })?);
                }
                Some(days)
            }
        };
        let bound = match (self.count, &self.until) {
            (Some(_), Some(_)) => {
                return Err(Error::Profile(String::from(
                    "recurrence may bound by count or until, not both",
                )))
            }
            (Some(0), None) => {
                return Err(Error::Profile(String::from("recurrence count must be at least 1")))
            }
            (Some(n), None) => Some(RecurrenceBound::Count(n)),
            (None, Some(text)) => Some(RecurrenceBound::Until(parse_date(text)?)),
            (None, None) => None,
        };
        let mut spec = RecurrenceSpec::weekly(self.interval, by_day);
        spec.frequency = frequency;
        spec.bound = bound;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventTemplate {
    pub name: String,
    /// First occurrence date, `YYYY-MM-DD`.
    pub date: String,
    /// `HH:MM`, same-day.
    pub start_time: String,
    pub end_time: String,
    #[serde(default)]
    pub recurrence: Option<RecurrenceTemplate>,
}

fn parse_date(text: &str) -> Result<NaiveDate, Error> {
    NaiveDate::parse_from_str(text, "%Y-%m-%d")
        .map_err(|_| Error::Profile(format!("`{text}` is not a YYYY-MM-DD date")))
}

fn parse_time(text: &str) -> Result<NaiveTime, Error> {
    NaiveTime::parse_from_str(text, "%H:%M")
        .map_err(|_| Error::Profile(format!("`{text}` is not an HH:MM time")))
}

impl EventTemplate {
    fn materialize(&self, uid: String) -> Result<CalendarEvent, Error> {
        if self.name.trim().is_empty() {
            return Err(Error::Profile(String::from("event name must not be empty")));
        }
        let date = parse_date(&self.date)?;
        let start = parse_time(&self.start_time)?;
        let end = parse_time(&self.end_time)?;
        if end <= start {
            return Err(Error::Profile(format!(
                "event `{}` must end after it starts ({} vs {})",
                self.name, self.start_time, self.end_time
            )));
        }
        Ok(CalendarEvent {
            uid,
            name: self.name.trim().to_string(),
            start: EventTime::naive(date.and_time(start)),
            end: EventTime::naive(date.and_time(end)),
            recurrence: self.recurrence.as_ref().map(|r| r.to_spec()).transpose()?,
            status: String::from("CONFIRMED"),
            location: None,
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Contact {
    pub name: String,
    pub relationship: String,
}

/// Which generated calls a policy row applies to. Unset fields match
/// anything; an entirely unset matcher is a catch-all.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyMatch {
    pub event_name: Option<String>,
    /// `Recurring` or `NonRecurring`.
    pub event_type: Option<String>,
    pub relationship: Option<String>,
    /// Weekday code `MO`..`SU` of the occurrence date.
    pub weekday: Option<String>,
}

impl PolicyMatch {
    pub fn is_catch_all(&self) -> bool {
        self.event_name.is_none()
            && self.event_type.is_none()
            && self.relationship.is_none()
            && self.weekday.is_none()
    }

    fn applies(&self, event_name: &str, event_type: &str, relationship: &str, weekday: &str) -> bool {
        self.event_name.as_deref().map_or(true, |v| v == event_name)
            && self.event_type.as_deref().map_or(true, |v| v == event_type)
            && self.relationship.as_deref().map_or(true, |v| v == relationship)
            && self.weekday.as_deref().map_or(true, |v| v == weekday)
    }
}

/// One behavior mixture; rows are tried top to bottom and the first match
/// wins.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyRule {
    #[serde(rename = "match", default)]
    pub when: PolicyMatch,
    pub accept: f64,
    pub reject: f64,
    pub missed: f64,
}

impl PolicyRule {
    fn sample(&self, u: f64) -> CallBehavior {
        if u < self.accept {
            CallBehavior::Accept
        } else if u < self.accept + self.reject {
            CallBehavior::Reject
        } else {
            CallBehavior::Missed
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserProfile {
    pub seed: u64,
    /// Expected incoming calls per event occurrence.
    pub call_rate: f64,
    /// Probability of flipping each sampled behavior to another class.
    #[serde(default)]
    pub noise: f64,
    pub events: Vec<EventTemplate>,
    pub contacts: Vec<Contact>,
    pub behavior_policy: Vec<PolicyRule>,
}

impl UserProfile {
    pub fn from_json(text: &str) -> Result<UserProfile, Error> {
        let profile: UserProfile = serde_json::from_str(text)?;
        profile.validate()?;
        Ok(profile)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.events.is_empty() {
            return Err(Error::Profile(String::from("profile has no events")));
        }
        if self.contacts.is_empty() {
            return Err(Error::Profile(String::from("profile has no contacts")));
        }
        let mut names: Vec<&str> = self.contacts.iter().map(|c| c.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Profile(String::from("contact names must be unique")));
        }
        if !(self.call_rate >= 0.0 && self.call_rate.is_finite()) {
            return Err(Error::Profile(String::from("call_rate must be a finite non-negative number")));
        }
        if !(0.0..=1.0).contains(&self.noise) {
            return Err(Error::Profile(String::from("noise must lie in [0, 1]")));
        }
        if self.behavior_policy.is_empty() {
            return Err(Error::Profile(String::from("behavior_policy has no rows")));
        }
        for (i, row) in self.behavior_policy.iter().enumerate() {
            for p in [row.accept, row.reject, row.missed] {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::Profile(format!(
                        "policy row {} has a probability outside [0, 1]",
                        i + 1
                    )));
                }
            }
            let sum = row.accept + row.reject + row.missed;
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::Profile(format!(
                    "policy row {} probabilities sum to {sum}, expected 1",
                    i + 1
                )));
            }
            if let Some(t) = &row.when.event_type {
                if t != "Recurring" && t != "NonRecurring" {
                    return Err(Error::Profile(format!(
                        "policy row {} event_type must be Recurring or NonRecurring",
                        i + 1
                    )));
                }
            }
            if let Some(code) = &row.when.weekday {
                if weekday_from_code(code).is_none() {
                    return Err(Error::Profile(format!(
                        "policy row {} weekday `{code}` is not MO..SU",
                        i + 1
                    )));
                }
            }
        }
        let last = self.behavior_policy.last().expect("non-empty");
        if !last.when.is_catch_all() {
            return Err(Error::Profile(String::from(
                "the last policy row must be a catch-all (empty match)",
            )));
        }
        for template in &self.events {
            template.materialize(String::from("probe"))?;
        }
        Ok(())
    }
}

pub const BUNDLE_CALENDAR: &str = "calendar.ics";
pub const BUNDLE_CALLS: &str = "calls.csv";
pub const BUNDLE_RELATIONSHIPS: &str = "relationships.csv";
pub const BUNDLE_TRUTH: &str = "truth.json";

/// One user's generated dataset, as file contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    pub calendar_ics: String,
    pub calls_csv: String,
    pub relationships_csv: String,
    pub truth_json: String,
}

impl Bundle {
    pub fn write_to_dir(&self, dir: &Path) -> Result<(), Error> {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
        let write = |name: &str, contents: &str| {
            std::fs::write(dir.join(name), contents)
                .map_err(|e| Error::io(format!("writing {}", dir.join(name).display()), e))
        };
        write(BUNDLE_CALENDAR, &self.calendar_ics)?;
        write(BUNDLE_CALLS, &self.calls_csv)?;
        write(BUNDLE_RELATIONSHIPS, &self.relationships_csv)?;
        write(BUNDLE_TRUTH, &self.truth_json)?;
        Ok(())
    }
}

struct GeneratedCall {
    timestamp: NaiveDateTime,
    call_type: CallType,
    duration_sec: u32,
    contact: String,
    truth: Value,
}

fn calls_csv_header() -> String {
    String::from("timestamp,call_type,duration_sec,contact\n")
}

fn call_row(timestamp: NaiveDateTime, call_type: CallType, duration_sec: u32, contact: &str) -> String {
    format!(
        "{},{},{},{}\n",
        timestamp.format(TIMESTAMP_FORMAT),
        call_type.as_str(),
        duration_sec,
        contact
    )
}

fn truth_row(
    timestamp: NaiveDateTime,
    contact: &str,
    event_uid: &str,
    event_name: &str,
    event_type: &str,
    day_time: &str,
    relationship: &str,
    behavior: CallBehavior,
) -> Value {
    json!({
        "timestamp": timestamp.format(TIMESTAMP_FORMAT).to_string(),
        "contact": contact,
        "event_uid": event_uid,
        "event_name": event_name,
        "event_type": event_type,
        "day_time": day_time,
        "relationship": relationship,
        "behavior": behavior.as_str(),
    })
}

fn truth_json(seed: Value, span: DateRange, instances: Vec<Value>) -> String {
    let mut text = serde_json::to_string_pretty(&json!({
        "seed": seed,
        "span": span.to_string(),
        "instances": instances,
    }))
    .expect("truth serializes");
    text.push('\n');
    text
}

fn day_time_label(date: NaiveDate, start: NaiveTime, end: NaiveTime) -> String {
    crate::mapping::DayTime { weekday: date.weekday(), start, end }.to_string()
}

/// Expands the profile's events over `span` and synthesizes calls with the
/// profile's own RNG stream, so a (profile, span) pair always produces the
/// identical bundle.
pub fn generate_bundle(profile: &UserProfile, span: DateRange) -> Result<Bundle, Error> {
    profile.validate()?;
    let events: Vec<CalendarEvent> = profile
        .events
        .iter()
        .enumerate()
        .map(|(i, template)| template.materialize(format!("ev-{:02}", i + 1)))
        .collect::<Result<_, _>>()?;
    let occurrences = expand_all(&events, span)?;

    // Overlapping occurrences would hand one call two contexts and make
    // the recorded truth ambiguous; reject the profile instead.
    let mut reach: Option<(chrono::NaiveDate, chrono::NaiveTime, &str)> = None;
    for occurrence in &occurrences {
        if let Some((date, end, uid)) = reach {
            if date == occurrence.date && occurrence.start_time < end {
                return Err(Error::Profile(format!(
                    "occurrences of {uid} and {} overlap on {}",
                    occurrence.event_uid, occurrence.date
                )));
            }
        }
        let extends = match reach {
            Some((date, end, _)) => date != occurrence.date || occurrence.end_time > end,
            None => true,
        };
        if extends {
            reach = Some((occurrence.date, occurrence.end_time, &occurrence.event_uid));
        }
    }

    let mut rng = SplitMix64::new(profile.seed);
    let mut calls: Vec<GeneratedCall> = Vec::new();

    for occurrence in &occurrences {
        let event = events
            .iter()
            .find(|e| e.uid == occurrence.event_uid)
            .expect("occurrence uid refers to a materialized event");
        let count = if profile.call_rate < 1.0 {
            usize::from(rng.unit_f64() < profile.call_rate)
        } else {
            // Uniform on [1, 2*round(rate)-1]: every occurrence gets at
            // least one call and whole-number rates keep their mean.
            1 + rng.below(2 * profile.call_rate.round() as u64 - 1) as usize
        };
        let (start, end) = occurrence.span();
        let span_secs = (end - start).num_seconds() as u64;
        let weekday = weekday_code(occurrence.date.weekday());
        let event_type = occurrence.event_type.to_string();
        let day_time = day_time_label(occurrence.date, occurrence.start_time, occurrence.end_time);

        let mut batch: Vec<GeneratedCall> = Vec::new();
        for _ in 0..count {
            let timestamp = start + Duration::seconds(rng.below(span_secs) as i64);
            let contact = &profile.contacts[rng.below(profile.contacts.len() as u64) as usize];
            let row = profile
                .behavior_policy
                .iter()
                .find(|rule| {
                    rule.when.applies(&event.name, &event_type, &contact.relationship, weekday)
                })
                .expect("validated policies end in a catch-all");
            let mut behavior = row.sample(rng.unit_f64());
            if rng.unit_f64() < profile.noise {
                let others: Vec<CallBehavior> =
                    CallBehavior::ALL.iter().copied().filter(|b| *b != behavior).collect();
                behavior = others[rng.below(2) as usize];
            }
            let (call_type, duration_sec) = match behavior {
                CallBehavior::Accept => (CallType::Incoming, 15 + rng.below(585) as u32),
                CallBehavior::Reject => (CallType::Incoming, 0),
                CallBehavior::Missed => (CallType::Missed, 0),
            };
            batch.push(GeneratedCall {
                timestamp,
                call_type,
                duration_sec,
                contact: contact.name.clone(),
                truth: truth_row(
                    timestamp,
                    &contact.name,
                    &occurrence.event_uid,
                    &event.name,
                    &event_type,
                    &day_time,
                    &contact.relationship,
                    behavior,
                ),
            });
        }
        batch.sort_by_key(|call| call.timestamp);
        calls.extend(batch);
    }

    calls.sort_by_key(|call| call.timestamp);
    let mut calls_csv = calls_csv_header();
    let mut instances = Vec::with_capacity(calls.len());
    for call in calls {
        calls_csv.push_str(&call_row(call.timestamp, call.call_type, call.duration_sec, &call.contact));
        instances.push(call.truth);
    }

    let relationships = RelationshipMap::from_pairs(
        profile.contacts.iter().map(|c| (c.name.clone(), c.relationship.clone())),
    );

    Ok(Bundle {
        calendar_ics: write_ics(&events, Some(profile.seed)),
        calls_csv,
        relationships_csv: relationships.to_csv(),
        truth_json: truth_json(json!(profile.seed), span, instances),
    })
}

/// The window the demo bundle's calls span.
pub fn demo_window() -> DateRange {
    DateRange::new(
        NaiveDate::from_ymd_opt(2016, 6, 2).unwrap(),
        NaiveDate::from_ymd_opt(2016, 8, 25).unwrap(),
    )
}

fn demo_events() -> Vec<CalendarEvent> {
    use chrono::Weekday::{Mon, Thu, Tue};
    let d = |y, m, day| NaiveDate::from_ymd_opt(y, m, day).unwrap();
    let at = |date: NaiveDate, h, min| EventTime::naive(date.and_hms_opt(h, min, 0).unwrap());
    let weekly = |interval, day| Some(RecurrenceSpec::weekly(interval, Some(vec![day])));
    vec![
        CalendarEvent {
            uid: String::from("demo-lecture"),
            name: String::from("Lecture"),
            start: at(d(2016, 6, 6), 10, 0),
            end: at(d(2016, 6, 6), 12, 0),
            recurrence: weekly(1, Mon),
            status: String::from("CONFIRMED"),
            location: None,
        },
        CalendarEvent {
            uid: String::from("demo-meeting"),
            name: String::from("Meeting"),
            start: at(d(2016, 6, 7), 14, 0),
            end: at(d(2016, 6, 7), 15, 0),
            recurrence: weekly(1, Tue),
            status: String::from("CONFIRMED"),
            location: None,
        },
        CalendarEvent {
            uid: String::from("demo-seminar"),
            name: String::from("Seminar"),
            start: at(d(2016, 6, 2), 13, 0),
            end: at(d(2016, 6, 2), 15, 0),
            recurrence: weekly(2, Thu),
            status: String::from("CONFIRMED"),
            location: None,
        },
        CalendarEvent {
            uid: String::from("demo-oneoff-1"),
            name: String::from("Seminar"),
            start: at(d(2016, 6, 9), 13, 0),
            end: at(d(2016, 6, 9), 15, 0),
            recurrence: None,
            status: String::from("CONFIRMED"),
            location: None,
        },
        CalendarEvent {
            uid: String::from("demo-oneoff-2"),
            name: String::from("Seminar"),
            start: at(d(2016, 7, 7), 13, 0),
            end: at(d(2016, 7, 7), 15, 0),
            recurrence: None,
            status: String::from("CONFIRMED"),
            location: None,
        },
    ]
}

fn demo_relationships() -> RelationshipMap {
    RelationshipMap::from_pairs([
        ("B01", "boss"),
        ("C01", "colleague"),
        ("C02", "colleague"),
        ("F01", "friend"),
        ("F02", "friend"),
        ("F03", "friend"),
        ("R01", "cousin"),
        ("R02", "neighbor"),
        ("R03", "uncle"),
        ("R04", "aunt"),
        ("R05", "sister"),
        ("R06", "brother"),
        ("R07", "mentor"),
        ("R08", "plumber"),
        ("R09", "dentist"),
    ])
}

/// A fixed, unseeded bundle whose mining outcome is known in closed form:
/// five rules at the default thresholds, one of them with a two-test
/// antecedent, plus one redundant branch and several support-pruned ones.
pub fn demo_bundle() -> Bundle {
    let d = |y, m, day| NaiveDate::from_ymd_opt(y, m, day).unwrap();
    let t = |h, min| NaiveTime::from_hms_opt(h, min, 0).unwrap();
    let relationships = demo_relationships();
    let mut calls: Vec<GeneratedCall> = Vec::new();
    let mut push = |date: NaiveDate,
                    time: NaiveTime,
                    call_type: CallType,
                    duration_sec: u32,
                    contact: &str,
                    event: Option<(&str, &str, &str, NaiveTime, NaiveTime)>| {
        let timestamp = date.and_time(time);
        let truth = match event {
            None => Value::Null,
            Some((uid, name, event_type, start, end)) => {
                let behavior = match call_type {
                    CallType::Incoming if duration_sec == 0 => CallBehavior::Reject,
                    CallType::Incoming => CallBehavior::Accept,
                    CallType::Missed => CallBehavior::Missed,
                    CallType::Outgoing => unreachable!("outgoing calls are never in-event truth"),
                };
                truth_row(
                    timestamp,
                    contact,
                    uid,
                    name,
                    event_type,
                    &day_time_label(date, start, end),
                    relationships.resolve(contact),
                    behavior,
                )
            }
        };
        calls.push(GeneratedCall { timestamp, call_type, duration_sec, contact: contact.to_string(), truth });
    };

    // Lecture, 10 Mondays, two rejected calls each: a unanimous rule with
    // support 20.
    let lecture = ("demo-lecture", "Lecture", "Recurring", t(10, 0), t(12, 0));
    for week in 0..10u32 {
        let date = d(2016, 6, 6) + Duration::weeks(week as i64);
        let (first, second) = if week % 2 == 0 { ("F01", "F02") } else { ("F02", "F01") };
        push(date, t(10, 17), CallType::Incoming, 0, first, Some(lecture));
        push(date, t(11, 5), CallType::Incoming, 0, second, Some(lecture));
    }

    // Meeting, 10 Tuesdays with four call slots each. The boss's three
    // accepted calls make a small unanimous branch; the colleagues' mix of
    // three accepts and seventeen rejects lands exactly on the parent's
    // 85% confidence, so that branch is redundant; every other relationship
    // stays under the support floor.
    let meeting = ("demo-meeting", "Meeting", "Recurring", t(14, 0), t(15, 0));
    let slots = [t(14, 5), t(14, 18), t(14, 31), t(14, 44)];
    let boss_durations = [60, 90, 120];
    let colleague_durations = [45, 75, 105];
    let colleague_accept_contacts = ["C01", "C02", "C01"];
    let reject_cycle = [
        "R01", "R01", "R02", "R02", "R03", "R03", "R04", "R04", "R05", "R05", "R06", "R06",
        "R07", "R07", "R08", "R08", "R09",
    ];
    let mut reject_slot = 0usize;
    let mut colleague_rejects = 0usize;
    let mut other_rejects = 0usize;
    for week in 0..10u32 {
        let date = d(2016, 6, 7) + Duration::weeks(week as i64);
        for (slot_idx, &slot) in slots.iter().enumerate() {
            if week % 4 == 0 && slot_idx == 0 {
                push(date, slot, CallType::Incoming, boss_durations[week as usize / 4], "B01", Some(meeting));
            } else if week % 4 == 1 && slot_idx == 1 {
                let pick = week as usize / 4;
                push(date, slot, CallType::Incoming, colleague_durations[pick], colleague_accept_contacts[pick], Some(meeting));
            } else if reject_slot % 2 == 0 {
                let contact = ["C01", "C02"][colleague_rejects % 2];
                colleague_rejects += 1;
                reject_slot += 1;
                push(date, slot, CallType::Incoming, 0, contact, Some(meeting));
            } else {
                let contact = reject_cycle[other_rejects];
                other_rejects += 1;
                reject_slot += 1;
                push(date, slot, CallType::Incoming, 0, contact, Some(meeting));
            }
        }
    }

    // Recurring seminar, seven alternating Thursdays, 25 calls: 23 accepts,
    // one reject, one missed, for a 92% branch.
    let seminar = ("demo-seminar", "Seminar", "Recurring", t(13, 0), t(15, 0));
    let seminar_slots = [t(13, 10), t(13, 35), t(14, 0), t(14, 25)];
    let per_thursday = [4, 4, 4, 4, 3, 3, 3];
    let friends = ["F01", "F02", "F03"];
    let mut g = 0usize;
    for (thursday, &count) in per_thursday.iter().enumerate() {
        let date = d(2016, 6, 2) + Duration::weeks(2 * thursday as i64);
        for slot in 0..count {
            let contact = friends[g % 3];
            match g {
                5 => push(date, seminar_slots[slot], CallType::Incoming, 0, contact, Some(seminar)),
                14 => push(date, seminar_slots[slot], CallType::Missed, 0, contact, Some(seminar)),
                _ => push(date, seminar_slots[slot], CallType::Incoming, 40 + 10 * g as u32, contact, Some(seminar)),
            }
            g += 1;
        }
    }

    // Two one-off seminars, ten calls each: 19 missed and a single accept,
    // for a 95% branch under the same event name but the other event type.
    for (day_idx, date) in [d(2016, 6, 9), d(2016, 7, 7)].into_iter().enumerate() {
        let uid = if day_idx == 0 { "demo-oneoff-1" } else { "demo-oneoff-2" };
        let oneoff = (uid, "Seminar", "NonRecurring", t(13, 0), t(15, 0));
        for i in 0..10usize {
            let time = t(13, 5) + Duration::minutes(11 * i as i64);
            let contact = friends[(day_idx * 10 + i) % 3];
            if day_idx == 0 && i == 3 {
                push(date, time, CallType::Incoming, 70, contact, Some(oneoff));
            } else {
                push(date, time, CallType::Missed, 0, contact, Some(oneoff));
            }
        }
    }

    // Calls no mapping should keep: outgoing ones, and incoming calls
    // outside every event.
    push(d(2016, 6, 5), t(9, 0), CallType::Outgoing, 120, "C01", None);
    push(d(2016, 7, 10), t(18, 30), CallType::Outgoing, 0, "F01", None);
    push(d(2016, 6, 4), t(16, 0), CallType::Incoming, 30, "B01", None);
    push(d(2016, 8, 14), t(11, 0), CallType::Incoming, 0, "X99", None);

    calls.sort_by_key(|call| call.timestamp);
    let mut calls_csv = calls_csv_header();
    let mut instances = Vec::new();
    for call in calls {
        calls_csv.push_str(&call_row(call.timestamp, call.call_type, call.duration_sec, &call.contact));
        if call.truth != Value::Null {
            instances.push(call.truth);
        }
    }

    Bundle {
        calendar_ics: write_ics(&demo_events(), None),
        calls_csv,
        relationships_csv: relationships.to_csv(),
        truth_json: truth_json(Value::Null, demo_window(), instances),
    }
}

/// The window every cohort bundle is generated over: 25 calendar weeks.
pub fn demo_cohort_window() -> DateRange {
    DateRange::new(
        NaiveDate::from_ymd_opt(2015, 1, 5).unwrap(),
        NaiveDate::from_ymd_opt(2015, 6, 28).unwrap(),
    )
}

fn weekly_template(name: &str, day: &str, start: &str, end: &str) -> EventTemplate {
    // First occurrence in the cohort window's opening week.
    let date = match day {
        "MO" => "2015-01-05",
        "TU" => "2015-01-06",
        "WE" => "2015-01-07",
        "TH" => "2015-01-08",
        "FR" => "2015-01-09",
        "SA" => "2015-01-10",
        "SU" => "2015-01-11",
        other => panic!("bad weekday code {other}"),
    };
    EventTemplate {
        name: name.to_string(),
        date: date.to_string(),
        start_time: start.to_string(),
        end_time: end.to_string(),
        recurrence: Some(RecurrenceTemplate {
            frequency: String::from("weekly"),
            interval: 1,
            by_day: Some(vec![day.to_string()]),
            count: None,
            until: None,
        }),
    }
}

fn oneoff_template(name: &str, date: &str, start: &str, end: &str) -> EventTemplate {
    EventTemplate {
        name: name.to_string(),
        date: date.to_string(),
        start_time: start.to_string(),
        end_time: end.to_string(),
        recurrence: None,
    }
}

fn contact(name: &str, relationship: &str) -> Contact {
    Contact { name: name.to_string(), relationship: relationship.to_string() }
}

fn policy(when: PolicyMatch, accept: f64, reject: f64, missed: f64) -> PolicyRule {
    PolicyRule { when, accept, reject, missed }
}

fn match_relationship(value: &str) -> PolicyMatch {
    PolicyMatch { relationship: Some(value.to_string()), ..PolicyMatch::default() }
}

fn match_event_name(value: &str) -> PolicyMatch {
    PolicyMatch { event_name: Some(value.to_string()), ..PolicyMatch::default() }
}

fn match_weekday(code: &str) -> PolicyMatch {
    PolicyMatch { weekday: Some(code.to_string()), ..PolicyMatch::default() }
}

fn catch_all(accept: f64, reject: f64, missed: f64) -> PolicyRule {
    policy(PolicyMatch::default(), accept, reject, missed)
}

/// Ten labeled profiles with distinct habits: keyword-sounding events that
/// get answered, quiet events with made-up names, relationship-driven
/// users, and one user whose behavior depends on the weekday slot alone.
pub fn demo_cohort() -> Vec<(String, UserProfile)> {
    let mut cohort = Vec::new();
    let mut add = |id: &str, profile: UserProfile| cohort.push((id.to_string(), profile));

    add("u01", UserProfile {
        seed: 1001,
        call_rate: 2.0,
        noise: 0.02,
        events: vec![
            weekly_template("Standup", "MO", "09:00", "09:30"),
            weekly_template("Sync", "WE", "14:00", "15:00"),
            weekly_template("Gym", "FR", "18:00", "19:00"),
        ],
        contacts: vec![
            contact("A01", "mother"),
            contact("A02", "colleague"),
            contact("A03", "colleague"),
            contact("A04", "friend"),
        ],
        behavior_policy: vec![
            policy(match_relationship("mother"), 0.98, 0.01, 0.01),
            policy(match_event_name("Gym"), 0.02, 0.03, 0.95),
            catch_all(0.05, 0.90, 0.05),
        ],
    });

    add("u02", UserProfile {
        seed: 1002,
        call_rate: 2.0,
        noise: 0.01,
        events: vec![
            weekly_template("Lecture", "TU", "10:00", "12:00"),
            weekly_template("Seminar", "TH", "13:00", "15:00"),
            weekly_template("Meeting", "MO", "15:00", "16:00"),
        ],
        contacts: vec![
            contact("P01", "friend"),
            contact("P02", "family"),
            contact("P03", "colleague"),
        ],
        behavior_policy: vec![catch_all(0.97, 0.02, 0.01)],
    });

    add("u03", UserProfile {
        seed: 1003,
        call_rate: 2.0,
        noise: 0.01,
        events: vec![
            weekly_template("Gaming", "TU", "20:00", "22:00"),
            weekly_template("Movie", "FR", "20:00", "23:00"),
            weekly_template("Jog", "SU", "08:00", "09:00"),
        ],
        contacts: vec![
            contact("K01", "friend"),
            contact("K02", "friend"),
            contact("K03", "sister"),
        ],
        behavior_policy: vec![catch_all(0.05, 0.03, 0.92)],
    });

    add("u04", UserProfile {
        seed: 1004,
        call_rate: 2.0,
        noise: 0.01,
        events: vec![
            weekly_template("Work", "MO", "09:00", "12:00"),
            weekly_template("Work", "TU", "09:00", "12:00"),
            weekly_template("Work", "WE", "09:00", "12:00"),
            weekly_template("Work", "TH", "09:00", "12:00"),
            weekly_template("Work", "FR", "09:00", "12:00"),
        ],
        contacts: vec![
            contact("B01", "boss"),
            contact("M01", "family"),
            contact("M02", "family"),
            contact("S01", "stranger"),
            contact("S02", "stranger"),
        ],
        behavior_policy: vec![
            policy(match_relationship("boss"), 0.97, 0.02, 0.01),
            policy(match_relationship("family"), 0.02, 0.02, 0.96),
            policy(match_relationship("stranger"), 0.01, 0.98, 0.01),
            catch_all(0.01, 0.01, 0.98),
        ],
    });

    add("u05", UserProfile {
        seed: 1005,
        call_rate: 2.0,
        noise: 0.01,
        events: vec![
            weekly_template("Yoga", "WE", "07:00", "08:00"),
            weekly_template("Spin", "SA", "14:00", "15:00"),
            oneoff_template("Brunch", "2015-01-17", "11:00", "12:30"),
            oneoff_template("Brunch", "2015-02-14", "11:00", "12:30"),
            oneoff_template("Brunch", "2015-03-14", "11:00", "12:30"),
            oneoff_template("Brunch", "2015-04-11", "11:00", "12:30"),
            oneoff_template("Brunch", "2015-05-09", "11:00", "12:30"),
            oneoff_template("Brunch", "2015-06-06", "11:00", "12:30"),
            oneoff_template("Hike", "2015-01-31", "08:00", "11:00"),
            oneoff_template("Hike", "2015-02-28", "08:00", "11:00"),
            oneoff_template("Hike", "2015-03-28", "08:00", "11:00"),
            oneoff_template("Hike", "2015-04-25", "08:00", "11:00"),
            oneoff_template("Hike", "2015-05-23", "08:00", "11:00"),
            oneoff_template("Hike", "2015-06-20", "08:00", "11:00"),
        ],
        contacts: vec![contact("G01", "friend"), contact("G02", "friend")],
        behavior_policy: vec![
            policy(
                PolicyMatch { event_type: Some(String::from("Recurring")), ..PolicyMatch::default() },
                0.02,
                0.97,
                0.01,
            ),
            catch_all(0.96, 0.02, 0.02),
        ],
    });

    add("u06", UserProfile {
        seed: 1006,
        call_rate: 2.0,
        noise: 0.01,
        events: vec![
            weekly_template("Standup", "MO", "09:00", "09:15"),
            weekly_template("Standup", "TH", "16:00", "16:15"),
            weekly_template("Planning", "TU", "11:00", "11:30"),
        ],
        contacts: vec![contact("C01", "colleague"), contact("C02", "colleague")],
        behavior_policy: vec![
            policy(match_weekday("MO"), 0.02, 0.97, 0.01),
            policy(match_weekday("TH"), 0.96, 0.02, 0.02),
            catch_all(0.02, 0.97, 0.01),
        ],
    });

    add("u07", UserProfile {
        seed: 1007,
        call_rate: 2.0,
        noise: 0.01,
        events: vec![
            weekly_template("Meeting", "MO", "10:00", "11:00"),
            weekly_template("Meeting", "WE", "10:00", "11:00"),
            weekly_template("Review", "FR", "14:00", "15:00"),
        ],
        contacts: vec![
            contact("B01", "boss"),
            contact("C01", "colleague"),
            contact("C02", "colleague"),
            contact("F01", "friend"),
        ],
        behavior_policy: vec![
            policy(match_relationship("boss"), 0.98, 0.01, 0.01),
            catch_all(0.03, 0.95, 0.02),
        ],
    });

    add("u08", UserProfile {
        seed: 1008,
        call_rate: 2.0,
        noise: 0.01,
        events: vec![
            weekly_template("Busy", "MO", "13:00", "14:00"),
            weekly_template("Busy", "TU", "13:00", "14:00"),
            weekly_template("Busy", "WE", "13:00", "14:00"),
            weekly_template("Busy", "TH", "13:00", "14:00"),
            weekly_template("Busy", "FR", "13:00", "14:00"),
            weekly_template("Lunch", "SA", "12:00", "13:00"),
        ],
        contacts: vec![contact("X01", "friend"), contact("X02", "family")],
        behavior_policy: vec![
            policy(match_event_name("Busy"), 0.01, 0.98, 0.01),
            catch_all(0.97, 0.02, 0.01),
        ],
    });

    add("u09", UserProfile {
        seed: 1009,
        call_rate: 2.0,
        noise: 0.01,
        events: vec![
            weekly_template("Brunch", "SU", "11:00", "13:00"),
            weekly_template("Church", "SU", "09:00", "10:30"),
            weekly_template("Shift", "SA", "08:00", "16:00"),
        ],
        contacts: vec![contact("H01", "family"), contact("H02", "friend")],
        behavior_policy: vec![
            policy(match_event_name("Brunch"), 0.96, 0.02, 0.02),
            policy(match_event_name("Church"), 0.02, 0.03, 0.95),
            catch_all(0.03, 0.95, 0.02),
        ],
    });

    add("u10", UserProfile {
        seed: 1010,
        call_rate: 2.0,
        noise: 0.01,
        events: vec![
            weekly_template("Class", "MO", "18:00", "20:00"),
            weekly_template("Class", "WE", "18:00", "20:00"),
            weekly_template("Study", "TU", "19:00", "21:00"),
        ],
        contacts: vec![
            contact("F01", "friend"),
            contact("F02", "friend"),
            contact("M01", "family"),
            contact("S01", "stranger"),
        ],
        behavior_policy: vec![
            policy(match_relationship("friend"), 0.96, 0.02, 0.02),
            catch_all(0.02, 0.06, 0.92),
        ],
    });

    cohort
}
