//! Temporal event-behavior mapping: joins calendar occurrences with
//! classified calls and emits the labeled context vectors everything
//! downstream consumes.

use crate::calendar::{weekday_name, CalendarEvent, EventOccurrence, EventType};
use crate::phonelog::{classify_behavior, CallBehavior, CallRecord, RelationshipMap, TIMESTAMP_FORMAT};
use chrono::{Datelike, NaiveDateTime, NaiveTime};
use std::collections::BTreeMap;
use std::fmt;

/// Weekday plus daily span, rendered `Monday[10:00-12:00]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DayTime {
    pub weekday: chrono::Weekday,
    pub start: NaiveTime,
    pub end: NaiveTime,
}

impl DayTime {
    fn key(&self) -> (u32, NaiveTime, NaiveTime) {
        (self.weekday.num_days_from_monday(), self.start, self.end)
    }
}

impl PartialOrd for DayTime {
    fn partial_cmp(&self, other: &DayTime) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DayTime {
    fn cmp(&self, other: &DayTime) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for DayTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}-{}]", weekday_name(self.weekday), self.start.format("%H:%M"), self.end.format("%H:%M"))
    }
}

/// The four context attributes a rule antecedent can test, in the fixed
/// order that breaks exact information-gain ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ContextAttribute {
    EventName,
    EventType,
    DayTime,
    Relationship,
}

impl ContextAttribute {
    pub const ALL: [ContextAttribute; 4] =
        [ContextAttribute::EventName, ContextAttribute::EventType, ContextAttribute::DayTime, ContextAttribute::Relationship];

    pub fn as_str(&self) -> &'static str {
        match self {
            ContextAttribute::EventName => "event_name",
            ContextAttribute::EventType => "event_type",
            ContextAttribute::DayTime => "day_time",
            ContextAttribute::Relationship => "relationship",
        }
    }
}

impl fmt::Display for ContextAttribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContextVector {
    pub event_name: String,
    pub event_type: EventType,
    pub day_time: DayTime,
    pub relationship: String,
}

impl ContextVector {
    /// Canonical string value of one attribute; these strings are what rule
    /// antecedents store and test.
    pub fn value(&self, attribute: ContextAttribute) -> String {
        match attribute {
            ContextAttribute::EventName => self.event_name.clone(),
            ContextAttribute::EventType => self.event_type.to_string(),
            ContextAttribute::DayTime => self.day_time.to_string(),
            ContextAttribute::Relationship => self.relationship.clone(),
        }
    }

    pub fn satisfies(&self, antecedent: &[(ContextAttribute, String)]) -> bool {
        antecedent.iter().all(|(attribute, value)| self.value(*attribute) == *value)
    }
}

/// One unit of behavioral evidence: the context a call rang in, and what
/// the user did with it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventBehaviorInstance {
    pub context: ContextVector,
    pub behavior: CallBehavior,
    pub source_timestamp: NaiveDateTime,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifiedCall {
    pub record: CallRecord,
    pub behavior: CallBehavior,
}

/// Drops records that carry no behavioral evidence (outgoing calls) and
/// labels the rest.
pub fn classify_calls(records: &[CallRecord]) -> Vec<ClassifiedCall> {
    records
        .iter()
        .filter_map(|record| classify_behavior(record).map(|behavior| ClassifiedCall { record: record.clone(), behavior }))
        .collect()
}

pub fn build_context_vector(
    occurrence: &EventOccurrence,
    event: &CalendarEvent,
    call: &CallRecord,
    relationships: &RelationshipMap,
) -> ContextVector {
    ContextVector {
        event_name: event.name.clone(),
        event_type: occurrence.event_type,
        day_time: DayTime { weekday: occurrence.date.weekday(), start: occurrence.start_time, end: occurrence.end_time },
        relationship: relationships.resolve(&call.contact).to_string(),
    }
}

/// Joins occurrences and calls by temporal containment. A call belongs to
/// an occurrence when its ring timestamp lies in the closed-open span
/// `[start, end)`; a call inside several overlapping occurrences yields one
/// instance per occurrence. Output is ordered by occurrence, then by call
/// timestamp within each occurrence.
pub fn map_events_to_behavior(
    occurrences: &[EventOccurrence],
    events: &[CalendarEvent],
    calls: &[ClassifiedCall],
    relationships: &RelationshipMap,
) -> Vec<EventBehaviorInstance> {
    let index: BTreeMap<&str, &CalendarEvent> = events.iter().map(|e| (e.uid.as_str(), e)).collect();
    let mut sorted_occurrences: Vec<&EventOccurrence> = occurrences.iter().collect();
    sorted_occurrences.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    let mut sorted_calls: Vec<&ClassifiedCall> = calls.iter().collect();
    sorted_calls.sort_by_key(|c| c.record.timestamp); // stable

    let mut out = Vec::new();
    for occurrence in sorted_occurrences {
        let Some(event) = index.get(occurrence.event_uid.as_str()) else {
            debug_assert!(false, "occurrence references unknown event {}", occurrence.event_uid);
            continue;
        };
        let (span_start, span_end) = occurrence.span();
        let first = sorted_calls.partition_point(|c| c.record.timestamp < span_start);
        for call in &sorted_calls[first..] {
            if call.record.timestamp >= span_end {
                break;
            }
            out.push(EventBehaviorInstance {
                context: build_context_vector(occurrence, event, &call.record, relationships),
                behavior: call.behavior,
                source_timestamp: call.record.timestamp,
            });
        }
    }
    out
}

/// Debug export of the instance list as CSV.
pub fn instances_to_csv(instances: &[EventBehaviorInstance]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["event_name", "event_type", "day_time", "relationship", "behavior", "timestamp"]).unwrap();
    for inst in instances {
        writer
            .write_record([
                inst.context.event_name.as_str(),
                &inst.context.event_type.to_string(),
                &inst.context.day_time.to_string(),
                inst.context.relationship.as_str(),
                inst.behavior.as_str(),
                &inst.source_timestamp.format(TIMESTAMP_FORMAT).to_string(),
            ])
            .unwrap();
    }
    String::from_utf8(writer.into_inner().unwrap()).unwrap()
}
