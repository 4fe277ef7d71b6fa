//! Two static predictors used as comparison points for the mined rules.
//!
//! Neither looks at the user's history. The first only asks whether the call
//! arrived inside any calendar event; the second additionally matches the
//! event name against a fixed keyword table.

use crate::error::Error;
use crate::mapping::ContextVector;
use crate::phonelog::CallBehavior;
use serde_json::Value;
use std::collections::BTreeMap;

/// Calls inside any event are predicted Reject, calls outside Accept.
pub fn event_existence_predict(context: Option<&ContextVector>) -> CallBehavior {
    match context {
        Some(_) => CallBehavior::Reject,
        None => CallBehavior::Accept,
    }
}

/// Case-insensitive event-name keyword table with a fallback behavior.
#[derive(Debug, Clone)]
pub struct KeywordRuleTable {
    keywords: BTreeMap<String, CallBehavior>,
    default: CallBehavior,
}

impl KeywordRuleTable {
    /// Keys are folded to lowercase; the same keyword twice is a caller bug
    /// worth surfacing rather than silently last-wins.
    pub fn new(
        entries: impl IntoIterator<Item = (String, CallBehavior)>,
        default: CallBehavior,
    ) -> Result<Self, Error> {
        let mut keywords = BTreeMap::new();
        for (keyword, behavior) in entries {
            let folded = keyword.trim().to_lowercase();
            if folded.is_empty() {
                return Err(Error::Config(String::from("keyword table contains an empty keyword")));
            }
            if keywords.insert(folded.clone(), behavior).is_some() {
                return Err(Error::DuplicateKeyword(folded));
            }
        }
        Ok(KeywordRuleTable { keywords, default })
    }

    /// Busy-sounding event names reject, everything else accepts.
    pub fn default_table() -> Self {
        let busy = ["meeting", "lecture", "seminar", "appointment", "class"];
        KeywordRuleTable::new(
            busy.iter().map(|k| (k.to_string(), CallBehavior::Reject)),
            CallBehavior::Accept,
        )
        .expect("built-in table has no duplicates")
    }

    /// `{"keywords": {"standup": "Reject", ...}, "default": "Accept"}`
    pub fn from_json(value: &Value) -> Result<Self, Error> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Config(String::from("keyword table must be a JSON object")))?;
        for key in obj.keys() {
            if key != "keywords" && key != "default" {
                return Err(Error::Config(format!("unknown keyword-table field `{key}`")));
            }
        }
        let default = match obj.get("default") {
            None => CallBehavior::Accept,
            Some(Value::String(s)) => CallBehavior::parse(s)
                .ok_or_else(|| Error::Config(format!("unknown behavior `{s}` in keyword table")))?,
            Some(_) => return Err(Error::Config(String::from("`default` must be a behavior name"))),
        };
        let mut entries = Vec::new();
        if let Some(kw) = obj.get("keywords") {
            let map = kw.as_object().ok_or_else(|| {
                Error::Config(String::from("`keywords` must map event names to behaviors"))
            })?;
            for (keyword, behavior) in map {
                let name = behavior.as_str().ok_or_else(|| {
                    Error::Config(format!("behavior for `{keyword}` must be a string"))
                })?;
                let parsed = CallBehavior::parse(name).ok_or_else(|| {
                    Error::Config(format!("unknown behavior `{name}` for keyword `{keyword}`"))
                })?;
                entries.push((keyword.clone(), parsed));
            }
        }
        KeywordRuleTable::new(entries, default)
    }

    /// First keyword contained in the folded event name wins; keywords are
    /// probed in lexicographic order so overlapping tables stay predictable.
    pub fn lookup(&self, event_name: &str) -> CallBehavior {
        let folded = event_name.to_lowercase();
        for (keyword, behavior) in &self.keywords {
            if folded.contains(keyword.as_str()) {
                return *behavior;
            }
        }
        self.default
    }

    pub fn len(&self) -> usize {
        self.keywords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keywords.is_empty()
    }
}

/// Keyword prediction over an optional event context: outside any event the
/// table's default applies, inside one the event name is consulted.
pub fn keyword_predict(table: &KeywordRuleTable, context: Option<&ContextVector>) -> CallBehavior {
    match context {
        Some(ctx) => table.lookup(&ctx.event_name),
        None => CallBehavior::Accept,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calendar::EventType;
    use chrono::Weekday;
    use serde_json::json;

    fn ctx(name: &str) -> ContextVector {
        crate::miner::gain::tests::make_instance(
            name,
            EventType::Recurring,
            Weekday::Mon,
            10,
            "friend",
            CallBehavior::Accept,
        )
        .context
    }

    #[test]
    fn existence_predictor_only_checks_presence() {
        assert_eq!(event_existence_predict(Some(&ctx("Anything"))), CallBehavior::Reject);
        assert_eq!(event_existence_predict(None), CallBehavior::Accept);
    }

    #[test]
    fn default_table_rejects_busy_names_case_insensitively() {
        let table = KeywordRuleTable::default_table();
        assert_eq!(keyword_predict(&table, Some(&ctx("Team MEETING"))), CallBehavior::Reject);
        assert_eq!(keyword_predict(&table, Some(&ctx("lecture 101"))), CallBehavior::Reject);
        assert_eq!(keyword_predict(&table, Some(&ctx("Lunch"))), CallBehavior::Accept);
        assert_eq!(keyword_predict(&table, None), CallBehavior::Accept);
    }

    #[test]
    fn substring_matching_uses_lexicographic_probe_order() {
        let table = KeywordRuleTable::new(
            [
                ("class".to_string(), CallBehavior::Reject),
                ("classified briefing".to_string(), CallBehavior::Missed),
            ],
            CallBehavior::Accept,
        )
        .unwrap();
        // Both keywords are substrings; "class" sorts first and wins.
        assert_eq!(table.lookup("Classified Briefing"), CallBehavior::Reject);
    }

    #[test]
    fn duplicate_keywords_are_rejected() {
        let err = KeywordRuleTable::new(
            [
                ("Standup".to_string(), CallBehavior::Reject),
                ("standup".to_string(), CallBehavior::Accept),
            ],
            CallBehavior::Accept,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateKeyword(ref k) if k == "standup"));
    }

    #[test]
    fn json_table_round_trip() {
        let table = KeywordRuleTable::from_json(&json!({
            "keywords": {"gym": "Missed", "review": "Reject"},
            "default": "Accept",
        }))
        .unwrap();
        assert_eq!(table.len(), 2);
        assert_eq!(table.lookup("Design Review"), CallBehavior::Reject);
        assert_eq!(table.lookup("Gym"), CallBehavior::Missed);
        assert_eq!(table.lookup("Picnic"), CallBehavior::Accept);
    }

    #[test]
    fn json_table_rejects_unknown_fields_and_bad_behaviors() {
        assert!(KeywordRuleTable::from_json(&json!({"keyword": {}})).is_err());
        assert!(KeywordRuleTable::from_json(&json!({"keywords": {"a": "Dodge"}})).is_err());
        assert!(KeywordRuleTable::from_json(&json!({"default": 3})).is_err());
        assert!(KeywordRuleTable::from_json(&json!([])).is_err());
    }
}
