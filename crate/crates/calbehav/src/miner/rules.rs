//! Reading rules off the tree, plus the human and JSON renderings.

use super::tree::AgtNode;
use crate::mapping::{ContextAttribute, ContextVector};
use crate::phonelog::CallBehavior;
use crate::ratio::Ratio;
use serde_json::{json, Value};

/// One mined rule: if every antecedent test matches the call's context, the
/// user is predicted to handle it with `consequent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehavioralRule {
    pub antecedent: Vec<(ContextAttribute, String)>,
    pub consequent: CallBehavior,
    pub support_count: usize,
    pub confidence: Ratio,
}

impl BehavioralRule {
    pub fn matches(&self, context: &ContextVector) -> bool {
        context.satisfies(&self.antecedent)
    }

    pub fn render_antecedent(&self) -> String {
        self.antecedent
            .iter()
            .map(|(attribute, value)| format!("{}={}", attribute.as_str(), value))
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn render(&self) -> String {
        format!(
            "{} => {} ({}, {}%)",
            self.render_antecedent(),
            self.consequent,
            self.confidence,
            self.confidence.percent()
        )
    }
}

/// Collects every non-root, non-redundant node whose confidence reaches
/// `min_confidence`, ordered by descending confidence, then descending
/// support, then antecedent. The per-path support pruning and redundancy
/// marking already happened while the tree was built.
pub fn extract_rules(root: &AgtNode, min_confidence: Ratio) -> Vec<BehavioralRule> {
    let mut rules: Vec<BehavioralRule> = root
        .walk()
        .into_iter()
        .filter(|node| !node.is_root() && !node.redundant && node.confidence >= min_confidence)
        .map(|node| BehavioralRule {
            antecedent: node.context_path.clone(),
            consequent: node.dominant,
            support_count: node.support_count,
            confidence: node.confidence,
        })
        .collect();
    rules.sort_by(|a, b| {
        b.confidence
            .cmp(&a.confidence)
            .then_with(|| b.support_count.cmp(&a.support_count))
            .then_with(|| a.antecedent.cmp(&b.antecedent))
    });
    rules
}

/// Indented text dump of the whole tree, redundant nodes marked.
pub fn render_tree(root: &AgtNode) -> String {
    fn render(node: &AgtNode, depth: usize, out: &mut String) {
        let label = match node.context_path.last() {
            None => "(all instances)".to_string(),
            Some((attribute, value)) => format!("{}={}", attribute.as_str(), value),
        };
        let [accept, reject, missed] = node.distribution.counts();
        out.push_str(&format!(
            "{}{} [A:{} R:{} M:{}] => {} ({}, {}%){}\n",
            "  ".repeat(depth),
            label,
            accept,
            reject,
            missed,
            node.dominant,
            node.confidence,
            node.confidence.percent(),
            if node.redundant { " REDUNDANT" } else { "" },
        ));
        for child in &node.children {
            render(child, depth + 1, out);
        }
    }
    let mut out = String::new();
    render(root, 0, &mut out);
    out
}

/// JSON array of rules in their extraction order.
pub fn rules_to_json(rules: &[BehavioralRule]) -> Value {
    Value::Array(
        rules
            .iter()
            .map(|rule| {
                json!({
                    "antecedent": rule
                        .antecedent
                        .iter()
                        .map(|(attribute, value)| json!({"attribute": attribute.as_str(), "value": value}))
                        .collect::<Vec<_>>(),
                    "consequent": rule.consequent.as_str(),
                    "support_count": rule.support_count,
                    "confidence_ratio": rule.confidence.to_string(),
                    "confidence_pct": rule.confidence.percent(),
                })
            })
            .collect(),
    )
}
