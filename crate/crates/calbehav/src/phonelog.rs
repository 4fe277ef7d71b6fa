//! Phone call log ingestion, behavior classification, and the
//! contact-to-relationship map.

use crate::error::{Diagnostic, Error};
use chrono::NaiveDateTime;
use std::collections::BTreeMap;
use std::fmt;

pub const TIMESTAMP_FORMAT: &str = "%Y-%m-%d %H:%M:%S";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CallType {
    Incoming,
    Outgoing,
    Missed,
}

impl CallType {
    pub fn parse(text: &str) -> Option<CallType> {
        match text.trim().to_ascii_lowercase().as_str() {
            "incoming" => Some(CallType::Incoming),
            "outgoing" => Some(CallType::Outgoing),
            "missed" => Some(CallType::Missed),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CallType::Incoming => "incoming",
            CallType::Outgoing => "outgoing",
            CallType::Missed => "missed",
        }
    }
}

/// How the user handled (or failed to handle) an incoming call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CallBehavior {
    Accept,
    Reject,
    Missed,
}

impl CallBehavior {
    pub const ALL: [CallBehavior; 3] = [CallBehavior::Accept, CallBehavior::Reject, CallBehavior::Missed];
    /// Order used to break ties between equal behavior counts. Rejecting is
    /// the conservative reading of mixed evidence for interruption handling.
    pub const DOMINANCE_ORDER: [CallBehavior; 3] = [CallBehavior::Reject, CallBehavior::Accept, CallBehavior::Missed];

    pub fn as_str(&self) -> &'static str {
        match self {
            CallBehavior::Accept => "Accept",
            CallBehavior::Reject => "Reject",
            CallBehavior::Missed => "Missed",
        }
    }

    pub fn parse(text: &str) -> Option<CallBehavior> {
        match text.trim().to_ascii_lowercase().as_str() {
            "accept" => Some(CallBehavior::Accept),
            "reject" => Some(CallBehavior::Reject),
            "missed" => Some(CallBehavior::Missed),
            _ => None,
        }
    }
}

impl fmt::Display for CallBehavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallRecord {
    pub timestamp: NaiveDateTime,
    pub call_type: CallType,
    pub duration_sec: u32,
    pub contact: String,
}

/// Zero-duration incoming calls were declined; anything longer was taken.
/// Missed calls stand on their own, and outgoing calls carry no evidence
/// about how the user treats interruptions.
pub fn classify_behavior(record: &CallRecord) -> Option<CallBehavior> {
    match record.call_type {
        CallType::Incoming if record.duration_sec == 0 => Some(CallBehavior::Reject),
        CallType::Incoming => Some(CallBehavior::Accept),
        CallType::Missed => Some(CallBehavior::Missed),
        CallType::Outgoing => None,
    }
}

#[derive(Debug, Default)]
pub struct ParsedCallLog {
    /// Sorted ascending by timestamp; rows with equal timestamps (including
    /// exact duplicates) keep their input order.
    pub records: Vec<CallRecord>,
    pub diagnostics: Vec<Diagnostic>,
    pub skipped: usize,
}

/// Parses the four-column call log CSV: `timestamp,call_type,duration_sec,
/// contact`. A missing column is fatal; a malformed row is skipped and
/// counted. A missed call carrying a nonzero duration is contradictory:
/// the type wins, the duration is recorded as zero, and a warning is kept.
pub fn parse_call_log(text: &str) -> Result<ParsedCallLog, Error> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let col = |name: &'static str| headers.iter().position(|h| h.trim() == name).ok_or(Error::MissingColumn(name));
    let (c_ts, c_type, c_dur, c_contact) = (col("timestamp")?, col("call_type")?, col("duration_sec")?, col("contact")?);

    let mut log = ParsedCallLog::default();
    for row in reader.records() {
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
                log.diagnostics.push(Diagnostic::error(line, format!("unreadable row: {e}")));
                log.skipped += 1;
                continue;
            }
        };
        let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
        let reject = |message: String, log: &mut ParsedCallLog| {
            log.diagnostics.push(Diagnostic::error(line, message));
            log.skipped += 1;
        };
        let field = |idx: usize| row.get(idx).unwrap_or("").trim();

        let timestamp = match NaiveDateTime::parse_from_str(field(c_ts), TIMESTAMP_FORMAT) {
            Ok(ts) => ts,
            Err(_) => {
                reject(format!("`{}` is not a `YYYY-MM-DD hh:mm:ss` timestamp", field(c_ts)), &mut log);
                continue;
            }
        };
        let call_type = match CallType::parse(field(c_type)) {
            Some(t) => t,
            None => {
                reject(format!("`{}` is not one of incoming/outgoing/missed", field(c_type)), &mut log);
                continue;
            }
        };
        let mut duration_sec = match field(c_dur).parse::<u32>() {
            Ok(d) => d,
            Err(_) => {
                reject(format!("`{}` is not a non-negative duration in seconds", field(c_dur)), &mut log);
                continue;
            }
        };
        if call_type == CallType::Missed && duration_sec > 0 {
            log.diagnostics.push(Diagnostic::warning(
                line,
                format!("missed call with nonzero duration {duration_sec}s; keeping the type and zeroing the duration"),
            ));
            duration_sec = 0;
        }
        log.records.push(CallRecord { timestamp, call_type, duration_sec, contact: field(c_contact).to_string() });
    }
    log.records.sort_by_key(|r| r.timestamp); // stable
    Ok(log)
}

pub const UNKNOWN_RELATIONSHIP: &str = "unknown";

/// Contact identifier to relationship label. Unmapped contacts resolve to
/// `"unknown"`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationshipMap {
    entries: BTreeMap<String, String>,
}

impl RelationshipMap {
    pub fn from_pairs<I, A, B>(pairs: I) -> RelationshipMap
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        RelationshipMap { entries: pairs.into_iter().map(|(a, b)| (a.into(), b.into())).collect() }
    }

    /// Parses the two-column CSV `contact,relationship`. Later rows for the
    /// same contact override earlier ones.
    pub fn parse_csv(text: &str) -> Result<(RelationshipMap, Vec<Diagnostic>), Error> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        let col = |name: &'static str| headers.iter().position(|h| h.trim() == name).ok_or(Error::MissingColumn(name));
        let (c_contact, c_rel) = (col("contact")?, col("relationship")?);
        let mut map = RelationshipMap::default();
        let mut diagnostics = Vec::new();
        for row in reader.records() {
            let row = match row {
                Ok(r) => r,
                Err(e) => {
                    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
                    diagnostics.push(Diagnostic::error(line, format!("unreadable row: {e}")));
                    continue;
                }
            };
            let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
            let contact = row.get(c_contact).unwrap_or("").trim();
            let relationship = row.get(c_rel).unwrap_or("").trim();
            if contact.is_empty() || relationship.is_empty() {
                diagnostics.push(Diagnostic::error(line, "contact and relationship must both be non-empty"));
                continue;
            }
            map.entries.insert(contact.to_string(), relationship.to_string());
        }
        Ok((map, diagnostics))
    }

    pub fn resolve(&self, contact: &str) -> &str {
        self.entries.get(contact).map(String::as_str).unwrap_or(UNKNOWN_RELATIONSHIP)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("contact,relationship\n");
        for (contact, relationship) in &self.entries {
            out.push_str(contact);
            out.push(',');
            out.push_str(relationship);
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Severity;
    use chrono::NaiveDate;

    fn ts(s: &str) -> NaiveDateTime {
        NaiveDateTime::parse_from_str(s, TIMESTAMP_FORMAT).unwrap()
    }

    #[test]
    fn parses_a_plain_row() {
        let log = parse_call_log("timestamp,call_type,duration_sec,contact\n2016-09-10 19:38:20,incoming,0,C17\n").unwrap();
        assert!(log.diagnostics.is_empty());
        assert_eq!(log.skipped, 0);
        assert_eq!(
            log.records,
            vec![CallRecord {
                timestamp: NaiveDate::from_ymd_opt(2016, 9, 10).unwrap().and_hms_opt(19, 38, 20).unwrap(),
                call_type: CallType::Incoming,
                duration_sec: 0,
                contact: "C17".to_string(),
            }]
        );
    }

    #[test]
    fn header_only_gives_empty_log() {
        let log = parse_call_log("timestamp,call_type,duration_sec,contact\n").unwrap();
        assert!(log.records.is_empty());
        assert!(log.diagnostics.is_empty());
    }

    #[test]
    fn missing_column_is_fatal() {
        let err = parse_call_log("timestamp,call_type,contact\n").unwrap_err();
        assert!(matches!(err, Error::MissingColumn("duration_sec")));
    }

    #[test]
    fn rows_are_sorted_and_duplicates_preserved() {
        let text = "timestamp,call_type,duration_sec,contact\n\
            2016-09-10 19:38:20,incoming,0,C17\n\
            2016-09-10 08:00:00,missed,0,A01\n\
            2016-09-10 19:38:20,incoming,0,C17\n\
            2016-09-09 23:59:59,outgoing,45,B02\n\
            2016-09-10 12:30:00,incoming,88,A01\n";
        let log = parse_call_log(text).unwrap();
        let stamps: Vec<NaiveDateTime> = log.records.iter().map(|r| r.timestamp).collect();
        assert_eq!(
            stamps,
            vec![
                ts("2016-09-09 23:59:59"),
                ts("2016-09-10 08:00:00"),
                ts("2016-09-10 12:30:00"),
                ts("2016-09-10 19:38:20"),
                ts("2016-09-10 19:38:20"),
            ]
        );
        assert_eq!(log.records.len(), 5);
    }

    #[test]
    fn malformed_rows_are_skipped_with_line_numbers() {
        let text = "timestamp,call_type,duration_sec,contact\n\
            not-a-time,incoming,0,C17\n\
            2016-09-10 10:00:00,faxed,0,C17\n\
            2016-09-10 10:00:00,incoming,minus,C17\n\
            2016-09-10 10:00:00,incoming,30,C17\n";
        let log = parse_call_log(text).unwrap();
        assert_eq!(log.records.len(), 1);
        assert_eq!(log.skipped, 3);
        let lines: Vec<usize> = log.diagnostics.iter().map(|d| d.line).collect();
        assert_eq!(lines, vec![2, 3, 4]);
        assert!(log.diagnostics.iter().all(|d| d.severity == Severity::Error));
    }

    #[test]
    fn missed_with_duration_keeps_type_and_warns() {
        let text = "timestamp,call_type,duration_sec,contact\n2016-09-10 10:00:00,missed,25,C17\n";
        let log = parse_call_log(text).unwrap();
        assert_eq!(log.skipped, 0);
        assert_eq!(log.records[0].call_type, CallType::Missed);
        assert_eq!(log.records[0].duration_sec, 0);
        assert_eq!(log.diagnostics.len(), 1);
        assert_eq!(log.diagnostics[0].severity, Severity::Warning);
    }

    #[test]
    fn classification_matches_duration_semantics() {
        let record = |call_type, duration_sec| CallRecord {
            timestamp: ts("2016-09-10 10:00:00"),
            call_type,
            duration_sec,
            contact: "X".to_string(),
        };
        assert_eq!(classify_behavior(&record(CallType::Incoming, 0)), Some(CallBehavior::Reject));
        assert_eq!(classify_behavior(&record(CallType::Incoming, 1)), Some(CallBehavior::Accept));
        assert_eq!(classify_behavior(&record(CallType::Incoming, 3600)), Some(CallBehavior::Accept));
        assert_eq!(classify_behavior(&record(CallType::Missed, 0)), Some(CallBehavior::Missed));
        assert_eq!(classify_behavior(&record(CallType::Outgoing, 0)), None);
        assert_eq!(classify_behavior(&record(CallType::Outgoing, 500)), None);
    }

    #[test]
    fn relationship_lookup_and_fallback() {
        let text = "contact,relationship\nM01,mother\nB01,boss\nC01,colleague\nC02,colleague\nF01,friend\nF02,friend\nS01,sister\nU01,uncle\nN01,neighbor\nD01,dentist\n";
        let (map, diagnostics) = RelationshipMap::parse_csv(text).unwrap();
        assert!(diagnostics.is_empty());
        assert_eq!(map.len(), 10);
        assert_eq!(map.resolve("M01"), "mother");
        assert_eq!(map.resolve("C02"), "colleague");
        assert_eq!(map.resolve("D01"), "dentist");
        assert_eq!(map.resolve("nobody"), UNKNOWN_RELATIONSHIP);
        assert_eq!(map.resolve(""), UNKNOWN_RELATIONSHIP);
    }

    #[test]
    fn relationship_later_rows_override() {
        let (map, _) = RelationshipMap::parse_csv("contact,relationship\nA,friend\nA,boss\n").unwrap();
        assert_eq!(map.resolve("A"), "boss");
    }

    #[test]
    fn relationship_blank_fields_are_diagnosed() {
        let (map, diagnostics) = RelationshipMap::parse_csv("contact,relationship\n,friend\nB,\nC,cousin\n").unwrap();
        assert_eq!(map.len(), 1);
        assert_eq!(diagnostics.len(), 2);
        assert_eq!(map.resolve("C"), "cousin");
    }
}
