//! Prediction quality measurement: rule matching, error/coverage counting,
//! seeded k-fold cross-validation, method comparison, and the confidence
//! threshold sweep.

use crate::baselines::{event_existence_predict, keyword_predict, KeywordRuleTable};
use crate::config::{DEFAULT_FOLDS, DEFAULT_MIN_CONFIDENCE, DEFAULT_MIN_SUPPORT, DEFAULT_SEED};
use crate::error::Error;
use crate::mapping::{ContextVector, EventBehaviorInstance};
use crate::miner::{build_agt, extract_rules, BehavioralRule, PrecedenceMode};
use crate::phonelog::CallBehavior;
use crate::ratio::Ratio;
use crate::rng::SplitMix64;
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write as _;

pub const METHOD_MINED: &str = "calbehav";
pub const METHOD_EVENT_EXISTENCE: &str = "event-existence";
pub const METHOD_KEYWORD: &str = "keyword";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    pub min_confidence: Ratio,
    pub min_support: usize,
    pub precedence: PrecedenceMode,
    pub folds: usize,
    pub seed: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            min_confidence: Ratio::parse_decimal(DEFAULT_MIN_CONFIDENCE)
                .expect("default threshold parses"),
            min_support: DEFAULT_MIN_SUPPORT,
            precedence: PrecedenceMode::Global,
            folds: DEFAULT_FOLDS,
            seed: DEFAULT_SEED,
        }
    }
}

/// The most specific applicable rule: largest antecedent, then highest
/// confidence, then highest support. A full tie keeps the earliest rule, so
/// a fixed rule list always answers the same way.
pub fn match_rule<'r>(
    rules: &'r [BehavioralRule],
    context: &ContextVector,
) -> Option<&'r BehavioralRule> {
    let mut best: Option<(&BehavioralRule, (usize, Ratio, usize))> = None;
    for rule in rules {
        if !rule.matches(context) {
            continue;
        }
        let key = (rule.antecedent.len(), rule.confidence, rule.support_count);
        match best {
            Some((_, best_key)) if key <= best_key => {}
            _ => best = Some((rule, key)),
        }
    }
    best.map(|(rule, _)| rule)
}

/// Counts from scoring a rule set against labeled instances. Error rate is
/// defined over the matched instances only; instances no rule covers are
/// counted, not guessed at.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ErrorRateReport {
    pub matched: usize,
    pub incorrect: usize,
    pub uncovered: usize,
}

impl ErrorRateReport {
    pub fn total(&self) -> usize {
        self.matched + self.uncovered
    }

    pub fn error_rate(&self) -> Option<f64> {
        (self.matched > 0).then(|| self.incorrect as f64 / self.matched as f64)
    }

    /// A fold where nothing matched predicted nothing wrong.
    pub fn error_rate_or_zero(&self) -> f64 {
        self.error_rate().unwrap_or(0.0)
    }

    pub fn uncovered_rate(&self) -> f64 {
        if self.total() == 0 {
            0.0
        } else {
            self.uncovered as f64 / self.total() as f64
        }
    }
}

/// Scores `predict` over `instances`; `None` predictions count as uncovered.
pub fn score_predictions(
    instances: &[EventBehaviorInstance],
    mut predict: impl FnMut(&EventBehaviorInstance) -> Option<CallBehavior>,
) -> ErrorRateReport {
    let mut report = ErrorRateReport::default();
    for instance in instances {
        match predict(instance) {
            None => report.uncovered += 1,
            Some(prediction) => {
                report.matched += 1;
                if prediction != instance.behavior {
                    report.incorrect += 1;
                }
            }
        }
    }
    report
}

pub fn evaluate_rules(
    rules: &[BehavioralRule],
    instances: &[EventBehaviorInstance],
) -> ErrorRateReport {
    score_predictions(instances, |instance| {
        match_rule(rules, &instance.context).map(|rule| rule.consequent)
    })
}

/// Share of instances at least one rule covers, in [0, 1].
pub fn rule_coverage(rules: &[BehavioralRule], instances: &[EventBehaviorInstance]) -> f64 {
    if instances.is_empty() {
        return 0.0;
    }
    let report = evaluate_rules(rules, instances);
    report.matched as f64 / instances.len() as f64
}

/// Accuracy over the covered instances; `None` when nothing is covered.
pub fn rule_accuracy(
    rules: &[BehavioralRule],
    instances: &[EventBehaviorInstance],
) -> Option<f64> {
    let report = evaluate_rules(rules, instances);
    if report.matched == 0 {
        return None;
    }
    Some((report.matched - report.incorrect) as f64 / report.matched as f64)
}

/// Seeded shuffle of `0..n` cut into `k` contiguous slices; slice `i` is
/// `[i*n/k, (i+1)*n/k)`, so sizes differ by at most one and every index
/// appears exactly once.
pub fn partition_folds(n: usize, k: usize, seed: u64) -> Vec<Vec<usize>> {
    assert!(k >= 1, "at least one fold");
    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = SplitMix64::new(seed);
    rng.shuffle(&mut indices);
    (0..k)
        .map(|i| indices[i * n / k..(i + 1) * n / k].to_vec())
        .collect()
}

#[derive(Debug, Clone)]
pub struct FoldOutcome {
    pub report: ErrorRateReport,
    pub rule_count: usize,
}

/// Trains on everything outside each fold and scores on the fold itself.
/// `train` reports how many rules (or static entries) the model holds.
pub fn run_folds<M>(
    instances: &[EventBehaviorInstance],
    folds: &[Vec<usize>],
    mut train: impl FnMut(&[EventBehaviorInstance]) -> (M, usize),
    mut predict: impl FnMut(&M, &EventBehaviorInstance) -> Option<CallBehavior>,
) -> Vec<FoldOutcome> {
    folds
        .iter()
        .map(|fold| {
            let held_out: std::collections::BTreeSet<usize> = fold.iter().copied().collect();
            let training: Vec<EventBehaviorInstance> = instances
                .iter()
                .enumerate()
                .filter(|(i, _)| !held_out.contains(i))
                .map(|(_, instance)| instance.clone())
                .collect();
            let (model, rule_count) = train(&training);
            let test: Vec<EventBehaviorInstance> =
                fold.iter().map(|&i| instances[i].clone()).collect();
            let report = score_predictions(&test, |instance| predict(&model, instance));
            FoldOutcome { report, rule_count }
        })
        .collect()
}

/// Per-rule tallies against the full dataset, for the written report.
#[derive(Debug, Clone, Serialize)]
pub struct RuleReport {
    pub antecedent: String,
    pub consequent: String,
    pub support_count: usize,
    pub confidence_ratio: String,
    pub confidence_pct: u32,
    pub matched: usize,
    pub correct: usize,
}

/// One method's cross-validated quality figures. `error_rate` and
/// `uncovered_rate` are means over folds.
#[derive(Debug, Clone, Serialize)]
pub struct MetricsReport {
    pub method: String,
    pub rule_count: usize,
    pub error_rate: f64,
    pub uncovered_rate: f64,
    pub fold_errors: Vec<f64>,
    pub fold_uncovered: Vec<f64>,
    pub fold_rule_counts: Vec<usize>,
    pub per_rule: Vec<RuleReport>,
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

impl MetricsReport {
    fn from_folds(method: &str, rule_count: usize, outcomes: &[FoldOutcome]) -> Self {
        let fold_errors: Vec<f64> =
            outcomes.iter().map(|o| o.report.error_rate_or_zero()).collect();
        let fold_uncovered: Vec<f64> =
            outcomes.iter().map(|o| o.report.uncovered_rate()).collect();
        MetricsReport {
            method: method.to_string(),
            rule_count,
            error_rate: mean(&fold_errors),
            uncovered_rate: mean(&fold_uncovered),
            fold_errors,
            fold_uncovered,
            fold_rule_counts: outcomes.iter().map(|o| o.rule_count).collect(),
            per_rule: Vec::new(),
        }
    }

    pub fn accuracy(&self) -> f64 {
        1.0 - self.error_rate
    }
}

fn mine(
    instances: &[EventBehaviorInstance],
    options: &EvalOptions,
) -> Vec<BehavioralRule> {
    if instances.is_empty() {
        return Vec::new();
    }
    let root = build_agt(instances, options.min_confidence, options.min_support, options.precedence);
    extract_rules(&root, options.min_confidence)
}

fn per_rule_reports(
    rules: &[BehavioralRule],
    instances: &[EventBehaviorInstance],
) -> Vec<RuleReport> {
    rules
        .iter()
        .map(|rule| {
            let mut matched = 0;
            let mut correct = 0;
            for instance in instances {
                if rule.matches(&instance.context) {
                    matched += 1;
                    if instance.behavior == rule.consequent {
                        correct += 1;
                    }
                }
            }
            RuleReport {
                antecedent: rule.render_antecedent(),
                consequent: rule.consequent.to_string(),
                support_count: rule.support_count,
                confidence_ratio: rule.confidence.to_string(),
                confidence_pct: rule.confidence.percent(),
                matched,
                correct,
            }
        })
        .collect()
}

fn check_fold_size(instances: &[EventBehaviorInstance], folds: usize) -> Result<(), Error> {
    if instances.len() < folds {
        return Err(Error::TooFewInstances { folds, have: instances.len() });
    }
    Ok(())
}

/// Cross-validates the miner alone.
pub fn k_fold_cv(
    instances: &[EventBehaviorInstance],
    options: &EvalOptions,
) -> Result<MetricsReport, Error> {
    check_fold_size(instances, options.folds)?;
    let folds = partition_folds(instances.len(), options.folds, options.seed);
    let outcomes = run_folds(
        instances,
        &folds,
        |training| {
            let rules = mine(training, options);
            let count = rules.len();
            (rules, count)
        },
        |rules, instance| match_rule(rules, &instance.context).map(|rule| rule.consequent),
    );
    let full_rules = mine(instances, options);
    let mut report = MetricsReport::from_folds(METHOD_MINED, full_rules.len(), &outcomes);
    report.per_rule = per_rule_reports(&full_rules, instances);
    Ok(report)
}

/// Cross-validates the miner and both static baselines over the same fold
/// partition, so the three reports are directly comparable.
pub fn compare_methods(
    instances: &[EventBehaviorInstance],
    options: &EvalOptions,
    table: &KeywordRuleTable,
) -> Result<Vec<MetricsReport>, Error> {
    check_fold_size(instances, options.folds)?;
    let folds = partition_folds(instances.len(), options.folds, options.seed);

    let mined_outcomes = run_folds(
        instances,
        &folds,
        |training| {
            let rules = mine(training, options);
            let count = rules.len();
            (rules, count)
        },
        |rules, instance| match_rule(rules, &instance.context).map(|rule| rule.consequent),
    );
    let full_rules = mine(instances, options);
    let mut mined = MetricsReport::from_folds(METHOD_MINED, full_rules.len(), &mined_outcomes);
    mined.per_rule = per_rule_reports(&full_rules, instances);

    // The baselines ignore their training split; the shared folds still
    // matter because the error means run over the same test slices.
    let existence_outcomes = run_folds(
        instances,
        &folds,
        |_| ((), 1),
        |_, instance| Some(event_existence_predict(Some(&instance.context))),
    );
    let existence = MetricsReport::from_folds(METHOD_EVENT_EXISTENCE, 1, &existence_outcomes);

    let keyword_outcomes = run_folds(
        instances,
        &folds,
        |_| ((), table.len() + 1),
        |_, instance| Some(keyword_predict(table, Some(&instance.context))),
    );
    let keyword = MetricsReport::from_folds(METHOD_KEYWORD, table.len() + 1, &keyword_outcomes);

    Ok(vec![mined, existence, keyword])
}

/// One sampled confidence threshold: how many rules survive, how much of
/// the data they cover, and how accurate the covered predictions are.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub min_confidence_pct: u32,
    pub rule_count: usize,
    pub coverage_pct: f64,
    pub accuracy_pct: Option<f64>,
}

/// Mines the full dataset once per threshold.
pub fn threshold_sweep(
    instances: &[EventBehaviorInstance],
    options: &EvalOptions,
    thresholds: &[Ratio],
) -> Vec<SweepPoint> {
    thresholds
        .iter()
        .map(|&threshold| {
            let point_options = EvalOptions { min_confidence: threshold, ..*options };
            let rules = mine(instances, &point_options);
            SweepPoint {
                min_confidence_pct: threshold.percent(),
                rule_count: rules.len(),
                coverage_pct: rule_coverage(&rules, instances) * 100.0,
                accuracy_pct: rule_accuracy(&rules, instances).map(|a| a * 100.0),
            }
        })
        .collect()
}

/// Thresholds 50% to 100% in 5-point steps.
pub fn default_sweep_thresholds() -> Vec<Ratio> {
    (10..=20).map(|t| Ratio::new(t * 5, 100)).collect()
}

/// Two whitespace-separated tables (coverage, accuracy) against threshold,
/// ready for plotting. Thresholds with no covered instance are left out of
/// the accuracy table.
pub fn sweep_plot_files(points: &[SweepPoint]) -> (String, String) {
    let mut coverage = String::from("# min_confidence_pct coverage_pct rule_count\n");
    let mut accuracy = String::from("# min_confidence_pct accuracy_pct rule_count\n");
    for point in points {
        let _ = writeln!(
            coverage,
            "{} {:.2} {}",
            point.min_confidence_pct, point.coverage_pct, point.rule_count
        );
        if let Some(pct) = point.accuracy_pct {
            let _ = writeln!(
                accuracy,
                "{} {:.2} {}",
                point.min_confidence_pct, pct, point.rule_count
            );
        }
    }
    (coverage, accuracy)
}

pub fn reports_to_json(user: &str, reports: &[MetricsReport]) -> Value {
    json!({
        "user": user,
        "methods": reports,
    })
}

/// Flat per-fold table plus a `mean` row per method.
pub fn reports_to_csv(user: &str, reports: &[MetricsReport]) -> String {
    let mut out = String::from("user,method,fold,error_pct,uncovered_pct,rule_count\n");
    for report in reports {
        for (i, error) in report.fold_errors.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{:.2},{:.2},{}",
                user,
                report.method,
                i + 1,
                error * 100.0,
                report.fold_uncovered[i] * 100.0,
                report.fold_rule_counts[i],
            );
        }
        let _ = writeln!(
            out,
            "{},{},mean,{:.2},{:.2},{}",
            user,
            report.method,
            report.error_rate * 100.0,
            report.uncovered_rate * 100.0,
            report.rule_count,
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calendar::EventType;
    use crate::mapping::ContextAttribute;
    use crate::miner::gain::tests::make_instance;
    use chrono::Weekday;

    fn rule(
        antecedent: Vec<(ContextAttribute, String)>,
        consequent: CallBehavior,
        support: usize,
        confidence: Ratio,
    ) -> BehavioralRule {
        BehavioralRule { antecedent, consequent, support_count: support, confidence }
    }

    fn name_is(value: &str) -> (ContextAttribute, String) {
        (ContextAttribute::EventName, value.to_string())
    }

    fn relationship_is(value: &str) -> (ContextAttribute, String) {
        (ContextAttribute::Relationship, value.to_string())
    }

    #[test]
    fn match_prefers_specific_then_confident_then_supported() {
        let meeting = make_instance(
            "Meeting",
            EventType::Recurring,
            Weekday::Tue,
            14,
            "boss",
            CallBehavior::Accept,
        );
        let rules = vec![
            rule(vec![name_is("Meeting")], CallBehavior::Reject, 40, Ratio::ONE),
            rule(
                vec![name_is("Meeting"), relationship_is("boss")],
                CallBehavior::Accept,
                3,
                Ratio::new(9, 10),
            ),
        ];
        // The two-test rule beats the one-test rule despite lower confidence
        // and support.
        let hit = match_rule(&rules, &meeting.context).unwrap();
        assert_eq!(hit.consequent, CallBehavior::Accept);

        let same_len = vec![
            rule(vec![name_is("Meeting")], CallBehavior::Reject, 10, Ratio::new(8, 10)),
            rule(vec![relationship_is("boss")], CallBehavior::Accept, 10, Ratio::new(9, 10)),
        ];
        assert_eq!(
            match_rule(&same_len, &meeting.context).unwrap().consequent,
            CallBehavior::Accept
        );

        let same_conf = vec![
            rule(vec![name_is("Meeting")], CallBehavior::Reject, 5, Ratio::new(9, 10)),
            rule(vec![relationship_is("boss")], CallBehavior::Accept, 12, Ratio::new(9, 10)),
        ];
        assert_eq!(
            match_rule(&same_conf, &meeting.context).unwrap().consequent,
            CallBehavior::Accept
        );

        // Full tie: first rule in the list wins, every time.
        let tied = vec![
            rule(vec![name_is("Meeting")], CallBehavior::Reject, 5, Ratio::new(9, 10)),
            rule(vec![relationship_is("boss")], CallBehavior::Accept, 5, Ratio::new(18, 20)),
        ];
        assert_eq!(match_rule(&tied, &meeting.context).unwrap().consequent, CallBehavior::Reject);
    }

    #[test]
    fn match_returns_none_when_nothing_applies() {
        let lunch = make_instance(
            "Lunch",
            EventType::NonRecurring,
            Weekday::Wed,
            12,
            "friend",
            CallBehavior::Accept,
        );
        let rules = vec![rule(vec![name_is("Meeting")], CallBehavior::Reject, 4, Ratio::ONE)];
        assert!(match_rule(&rules, &lunch.context).is_none());
    }

    #[test]
    fn error_rate_ignores_uncovered_instances() {
        let mut instances = Vec::new();
        for behavior in [CallBehavior::Reject, CallBehavior::Reject, CallBehavior::Accept] {
            instances.push(make_instance(
                "Meeting",
                EventType::Recurring,
                Weekday::Tue,
                14,
                "boss",
                behavior,
            ));
        }
        instances.push(make_instance(
            "Lunch",
            EventType::NonRecurring,
            Weekday::Wed,
            12,
            "friend",
            CallBehavior::Accept,
        ));
        let rules = vec![rule(vec![name_is("Meeting")], CallBehavior::Reject, 3, Ratio::ONE)];
        let report = evaluate_rules(&rules, &instances);
        assert_eq!(report.matched, 3);
        assert_eq!(report.incorrect, 1);
        assert_eq!(report.uncovered, 1);
        assert_eq!(report.error_rate(), Some(1.0 / 3.0));
        assert_eq!(report.uncovered_rate(), 0.25);
        assert_eq!(rule_coverage(&rules, &instances), 0.75);
        assert_eq!(rule_accuracy(&rules, &instances), Some(2.0 / 3.0));
    }

    #[test]
    fn empty_rule_set_covers_nothing_and_errs_nothing() {
        let instances = vec![make_instance(
            "Meeting",
            EventType::Recurring,
            Weekday::Tue,
            14,
            "boss",
            CallBehavior::Accept,
        )];
        let report = evaluate_rules(&[], &instances);
        assert_eq!(report.matched, 0);
        assert_eq!(report.uncovered, 1);
        assert_eq!(report.error_rate(), None);
        assert_eq!(report.error_rate_or_zero(), 0.0);
        assert_eq!(rule_accuracy(&[], &instances), None);
    }

    #[test]
    fn folds_partition_every_index_exactly_once() {
        for (n, k) in [(10, 5), (11, 5), (23, 7), (5, 5)] {
            let folds = partition_folds(n, k, 99);
            assert_eq!(folds.len(), k);
            let mut seen: Vec<usize> = folds.iter().flatten().copied().collect();
            seen.sort_unstable();
            assert_eq!(seen, (0..n).collect::<Vec<_>>(), "n={n} k={k}");
            for (i, fold) in folds.iter().enumerate() {
                assert_eq!(fold.len(), (i + 1) * n / k - i * n / k);
            }
        }
        assert_eq!(partition_folds(12, 4, 7), partition_folds(12, 4, 7));
        assert_ne!(partition_folds(12, 4, 7), partition_folds(12, 4, 8));
    }

    #[test]
    fn cv_rejects_datasets_smaller_than_the_fold_count() {
        let instances = vec![
            make_instance("A", EventType::Recurring, Weekday::Mon, 9, "friend", CallBehavior::Accept);
            3
        ];
        let options = EvalOptions { folds: 5, ..EvalOptions::default() };
        assert!(matches!(
            k_fold_cv(&instances, &options),
            Err(Error::TooFewInstances { folds: 5, have: 3 })
        ));
    }

    #[test]
    fn perfectly_regular_data_cross_validates_cleanly() {
        // 40 instances, two event names with unanimous behaviors: every
        // training split re-learns both rules, so CV error is zero.
        let mut instances = Vec::new();
        for _ in 0..20 {
            instances.push(make_instance(
                "Meeting",
                EventType::Recurring,
                Weekday::Tue,
                14,
                "colleague",
                CallBehavior::Reject,
            ));
            instances.push(make_instance(
                "Brunch",
                EventType::NonRecurring,
                Weekday::Sun,
                11,
                "friend",
                CallBehavior::Accept,
            ));
        }
        let report = k_fold_cv(&instances, &EvalOptions::default()).unwrap();
        assert_eq!(report.method, METHOD_MINED);
        assert_eq!(report.rule_count, 2);
        assert_eq!(report.fold_errors, vec![0.0; 5]);
        assert_eq!(report.error_rate, 0.0);
        assert_eq!(report.uncovered_rate, 0.0);
        assert_eq!(report.per_rule.len(), 2);
        assert!(report.per_rule.iter().all(|r| r.matched == 20 && r.correct == 20));
    }

    #[test]
    fn comparison_shares_folds_and_orders_methods() {
        let mut instances = Vec::new();
        for _ in 0..10 {
            instances.push(make_instance(
                "Meeting",
                EventType::Recurring,
                Weekday::Tue,
                14,
                "colleague",
                CallBehavior::Reject,
            ));
            instances.push(make_instance(
                "Gym",
                EventType::Recurring,
                Weekday::Wed,
                18,
                "friend",
                CallBehavior::Missed,
            ));
        }
        let table = KeywordRuleTable::default_table();
        let reports =
            compare_methods(&instances, &EvalOptions::default(), &table).unwrap();
        let methods: Vec<&str> = reports.iter().map(|r| r.method.as_str()).collect();
        assert_eq!(methods, vec![METHOD_MINED, METHOD_EVENT_EXISTENCE, METHOD_KEYWORD]);

        // The miner learns both names; the existence baseline wrongly
        // rejects the gym calls; the keyword baseline wrongly accepts them.
        assert_eq!(reports[0].error_rate, 0.0);
        assert!((reports[1].error_rate - 0.5).abs() < 1e-9);
        assert!((reports[2].error_rate - 0.5).abs() < 1e-9);
        // Baselines always answer.
        assert_eq!(reports[1].uncovered_rate, 0.0);
        assert_eq!(reports[2].uncovered_rate, 0.0);
    }

    #[test]
    fn sweep_tightening_never_grows_the_rule_list() {
        let mut instances = Vec::new();
        for i in 0..30 {
            instances.push(make_instance(
                "Meeting",
                EventType::Recurring,
                Weekday::Tue,
                14,
                if i % 2 == 0 { "boss" } else { "colleague" },
                if i % 5 == 0 { CallBehavior::Accept } else { CallBehavior::Reject },
            ));
            instances.push(make_instance(
                "Brunch",
                EventType::NonRecurring,
                Weekday::Sun,
                11,
                "friend",
                if i % 10 == 0 { CallBehavior::Missed } else { CallBehavior::Accept },
            ));
        }
        let points = threshold_sweep(
            &instances,
            &EvalOptions::default(),
            &default_sweep_thresholds(),
        );
        assert_eq!(points.len(), 11);
        assert_eq!(points.first().unwrap().min_confidence_pct, 50);
        assert_eq!(points.last().unwrap().min_confidence_pct, 100);
        for pair in points.windows(2) {
            assert!(
                pair[1].rule_count <= pair[0].rule_count,
                "rule count must shrink as the threshold rises: {pair:?}"
            );
            assert!(pair[1].coverage_pct <= pair[0].coverage_pct + 1e-9);
        }
        let (coverage, accuracy) = sweep_plot_files(&points);
        assert!(coverage.starts_with("# min_confidence_pct coverage_pct rule_count\n"));
        assert_eq!(coverage.lines().count(), 12);
        assert!(accuracy.lines().count() <= 12);
    }

    #[test]
    fn csv_report_has_fold_rows_and_mean_rows() {
        let mut instances = Vec::new();
        for _ in 0..10 {
            instances.push(make_instance(
                "Meeting",
                EventType::Recurring,
                Weekday::Tue,
                14,
                "colleague",
                CallBehavior::Reject,
            ));
            instances.push(make_instance(
                "Brunch",
                EventType::NonRecurring,
                Weekday::Sun,
                11,
                "friend",
                CallBehavior::Accept,
            ));
        }
        let table = KeywordRuleTable::default_table();
        let reports = compare_methods(&instances, &EvalOptions::default(), &table).unwrap();
        let csv = reports_to_csv("u01", &reports);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "user,method,fold,error_pct,uncovered_pct,rule_count");
        // 3 methods x (5 folds + 1 mean row).
        assert_eq!(lines.len(), 1 + 3 * 6);
        assert_eq!(lines[6], "u01,calbehav,mean,0.00,0.00,2");
        assert!(lines[1].starts_with("u01,calbehav,1,"));
        let json = reports_to_json("u01", &reports);
        assert_eq!(json["user"], "u01");
        assert_eq!(json["methods"].as_array().unwrap().len(), 3);
    }
}
