//! Entropy and information-gain ranking of context attributes.

use super::tree::BehaviorDistribution;
use crate::mapping::{ContextAttribute, EventBehaviorInstance};
use std::collections::BTreeMap;

impl BehaviorDistribution {
    /// Shannon entropy in bits of this distribution. Absent classes
    /// contribute zero; a pure distribution has entropy exactly 0.0 and an
    /// even two-class split exactly 1.0.
    pub fn entropy(&self) -> f64 {
        let total = self.total();
        assert!(total > 0, "entropy of an empty distribution");
        let total = total as f64;
        self.counts()
            .into_iter()
            .filter(|&c| c > 0)
            .map(|c| {
                let p = c as f64 / total;
                -p * p.log2()
            })
            .sum()
    }
}

/// Entropy of the behavior mix across `instances`. Panics on empty input.
pub fn entropy(instances: &[EventBehaviorInstance]) -> f64 {
    assert!(!instances.is_empty(), "entropy of an empty instance list");
    let all: Vec<usize> = (0..instances.len()).collect();
    distribution_of(instances, &all).entropy()
}

pub(super) fn distribution_of(instances: &[EventBehaviorInstance], idx: &[usize]) -> BehaviorDistribution {
    let mut dist = BehaviorDistribution::default();
    for &i in idx {
        dist.add(instances[i].behavior);
    }
    dist
}

pub(super) fn group_by_value(
    instances: &[EventBehaviorInstance],
    idx: &[usize],
    attribute: ContextAttribute,
) -> BTreeMap<String, Vec<usize>> {
    let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for &i in idx {
        groups.entry(instances[i].context.value(attribute)).or_default().push(i);
    }
    groups
}

pub(super) fn information_gain_of(instances: &[EventBehaviorInstance], idx: &[usize], attribute: ContextAttribute) -> f64 {
    let base = distribution_of(instances, idx).entropy();
    let mut parts: Vec<BehaviorDistribution> = group_by_value(instances, idx, attribute)
        .into_values()
        .map(|sub| distribution_of(instances, &sub))
        .collect();
    // Summing in a canonical order makes the gain a function of the
    // partition alone: two attributes that split the instances identically
    // get bit-identical gains, so exact ties are detected reliably.
    parts.sort_by_key(|d| d.counts());
    let total = idx.len() as f64;
    let conditional: f64 = parts.iter().map(|d| (d.total() as f64 / total) * d.entropy()).sum();
    (base - conditional).max(0.0)
}

/// Information gain of splitting `instances` on `attribute`. Always
/// non-negative; exactly zero when the attribute is constant. Panics on
/// empty input.
pub fn information_gain(attribute: ContextAttribute, instances: &[EventBehaviorInstance]) -> f64 {
    assert!(!instances.is_empty(), "information gain over an empty instance list");
    let all: Vec<usize> = (0..instances.len()).collect();
    information_gain_of(instances, &all, attribute)
}

pub(super) fn rank_of(instances: &[EventBehaviorInstance], idx: &[usize], candidates: &[ContextAttribute]) -> Vec<ContextAttribute> {
    let mut ranked: Vec<(ContextAttribute, f64)> =
        candidates.iter().map(|&a| (a, information_gain_of(instances, idx, a))).collect();
    // Stable sort: exact ties keep the fixed attribute order.
    ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("information gain is never NaN"));
    ranked.into_iter().map(|(a, _)| a).collect()
}

/// All four attributes ordered by descending information gain; exact ties
/// fall back to the fixed order event_name, event_type, day_time,
/// relationship. Panics on empty input.
pub fn rank_contexts(instances: &[EventBehaviorInstance]) -> Vec<ContextAttribute> {
    assert!(!instances.is_empty(), "ranking over an empty instance list");
    let all: Vec<usize> = (0..instances.len()).collect();
    rank_of(instances, &all, &ContextAttribute::ALL)
}
