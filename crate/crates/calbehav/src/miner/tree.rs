//! The association generation tree itself.

use super::gain;
use crate::mapping::{ContextAttribute, EventBehaviorInstance};
use crate::phonelog::CallBehavior;
use crate::ratio::Ratio;

/// Per-class behavior counts of one node's instance subset.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BehaviorDistribution {
    accept: usize,
    reject: usize,
    missed: usize,
}

impl BehaviorDistribution {
    pub fn new(accept: usize, reject: usize, missed: usize) -> BehaviorDistribution {
        BehaviorDistribution { accept, reject, missed }
    }

    pub fn add(&mut self, behavior: CallBehavior) {
        match behavior {
            CallBehavior::Accept => self.accept += 1,
            CallBehavior::Reject => self.reject += 1,
            CallBehavior::Missed => self.missed += 1,
        }
    }

    pub fn count(&self, behavior: CallBehavior) -> usize {
        match behavior {
            CallBehavior::Accept => self.accept,
            CallBehavior::Reject => self.reject,
            CallBehavior::Missed => self.missed,
        }
    }

    /// Counts in the fixed class order Accept, Reject, Missed.
    pub fn counts(&self) -> [usize; 3] {
        [self.accept, self.reject, self.missed]
    }

    pub fn total(&self) -> usize {
        self.accept + self.reject + self.missed
    }

    /// Dominant class and its exact share of the total. Equal counts break
    /// toward Reject, then Accept, then Missed. Panics on an empty
    /// distribution.
    pub fn dominant(&self) -> (CallBehavior, Ratio) {
        let total = self.total();
        assert!(total > 0, "dominant behavior of an empty distribution");
        let mut best = CallBehavior::DOMINANCE_ORDER[0];
        for &candidate in &CallBehavior::DOMINANCE_ORDER[1..] {
            if self.count(candidate) > self.count(best) {
                best = candidate;
            }
        }
        (best, Ratio::new(self.count(best) as u64, total as u64))
    }
}

/// Dominant behavior of a distribution with the tie order documented on
/// [`BehaviorDistribution::dominant`].
pub fn dominant_behavior(distribution: &BehaviorDistribution) -> (CallBehavior, Ratio) {
    distribution.dominant()
}

/// Whether a node picks its split attribute from the root's global ranking
/// or re-ranks the remaining attributes on its own instance subset. The two
/// modes only differ when a subset reshuffles relative gains; `Global` is
/// the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrecedenceMode {
    #[default]
    Global,
    PerNode,
}

#[derive(Debug, Clone)]
pub struct AgtNode {
    /// Attribute tests from the root down to this node, one per level.
    pub context_path: Vec<(ContextAttribute, String)>,
    pub distribution: BehaviorDistribution,
    pub dominant: CallBehavior,
    /// Exact share of `dominant` in the node's subset, unreduced:
    /// dominant count over support count.
    pub confidence: Ratio,
    pub support_count: usize,
    /// True when some proper non-root ancestor already predicts the same
    /// behavior at qualifying confidence at least as high as this node's.
    pub redundant: bool,
    pub children: Vec<AgtNode>,
}

impl AgtNode {
    pub fn is_root(&self) -> bool {
        self.context_path.is_empty()
    }

    /// Nodes in depth-first order, root included.
    pub fn walk(&self) -> Vec<&AgtNode> {
        let mut out = vec![self];
        for child in &self.children {
            out.extend(child.walk());
        }
        out
    }
}

/// Grows the association generation tree for `instances`.
///
/// `min_confidence` must be in (0, 1]; it only feeds the redundancy test
/// here (the same threshold filters rules on extraction). `min_support` is
/// the minimum subset size a child needs to be created at all. Panics on an
/// empty instance list or out-of-range parameters; the result is fully
/// deterministic for a given input list, independent of instance order.
pub fn build_agt(
    instances: &[EventBehaviorInstance],
    min_confidence: Ratio,
    min_support: usize,
    mode: PrecedenceMode,
) -> AgtNode {
    assert!(!instances.is_empty(), "mining needs at least one instance");
    assert!(
        min_confidence > Ratio::ZERO && min_confidence <= Ratio::ONE,
        "min_confidence must be in (0, 1], got {min_confidence}"
    );
    assert!(min_support >= 1, "min_support must be at least 1");

    let all: Vec<usize> = (0..instances.len()).collect();
    let global_rank = gain::rank_of(instances, &all, &ContextAttribute::ALL);
    let mut root = make_node(instances, Vec::new(), &all, &[], min_confidence);
    let mut ancestors = Vec::new();
    grow(&mut root, instances, &all, &ContextAttribute::ALL, &global_rank, min_confidence, min_support, mode, &mut ancestors);
    root
}

fn make_node(
    instances: &[EventBehaviorInstance],
    context_path: Vec<(ContextAttribute, String)>,
    idx: &[usize],
    ancestors: &[(CallBehavior, Ratio)],
    min_confidence: Ratio,
) -> AgtNode {
    let distribution = gain::distribution_of(instances, idx);
    let (dominant, confidence) = distribution.dominant();
    let redundant = ancestors
        .iter()
        .any(|&(behavior, ancestor_confidence)| {
            behavior == dominant && ancestor_confidence >= min_confidence && confidence <= ancestor_confidence
        });
    AgtNode { context_path, distribution, dominant, confidence, support_count: idx.len(), redundant, children: Vec::new() }
}

#[allow(clippy::too_many_arguments)]
fn grow(
    node: &mut AgtNode,
    instances: &[EventBehaviorInstance],
    idx: &[usize],
    unused: &[ContextAttribute],
    global_rank: &[ContextAttribute],
    min_confidence: Ratio,
    min_support: usize,
    mode: PrecedenceMode,
    ancestors: &mut Vec<(CallBehavior, Ratio)>,
) {
    // A unanimous node has nothing left to explain.
    if node.confidence.is_one() {
        return;
    }
    // Attributes constant within this subset cannot split it; they are
    // skipped, not consumed, so deeper levels may still use them if they
    // start varying again (they cannot, subsets only shrink, but skipping
    // keeps paths free of degenerate tests).
    let candidates: Vec<ContextAttribute> = unused
        .iter()
        .copied()
        .filter(|&a| gain::group_by_value(instances, idx, a).len() >= 2)
        .collect();
    if candidates.is_empty() {
        return;
    }
    let chosen = match mode {
        PrecedenceMode::Global => global_rank
            .iter()
            .copied()
            .find(|a| candidates.contains(a))
            .expect("candidates are a subset of the global ranking"),
        PrecedenceMode::PerNode => gain::rank_of(instances, idx, &candidates)[0],
    };

    let mut entries: Vec<(String, Vec<usize>)> = gain::group_by_value(instances, idx, chosen)
        .into_iter()
        .filter(|(_, sub)| sub.len() >= min_support)
        .collect();
    // Larger branches first; equal sizes alphabetically.
    entries.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then_with(|| a.0.cmp(&b.0)));

    let remaining: Vec<ContextAttribute> = unused.iter().copied().filter(|&a| a != chosen).collect();
    if !node.is_root() {
        ancestors.push((node.dominant, node.confidence));
    }
    for (value, sub) in entries {
        let mut path = node.context_path.clone();
        path.push((chosen, value));
        let mut child = make_node(instances, path, &sub, ancestors, min_confidence);
        grow(&mut child, instances, &sub, &remaining, global_rank, min_confidence, min_support, mode, ancestors);
        node.children.push(child);
    }
    if !node.is_root() {
        ancestors.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calendar::EventType;
    use chrono::Weekday;

    fn instance(name: &str, event_type: EventType, weekday: Weekday, hour: u32, relationship: &str, behavior: CallBehavior) -> EventBehaviorInstance {
        crate::miner::gain::tests::make_instance(name, event_type, weekday, hour, relationship, behavior)
    }

    fn repeat(
        out: &mut Vec<EventBehaviorInstance>,
        n: usize,
        name: &str,
        event_type: EventType,
        weekday: Weekday,
        hour: u32,
        relationship: &str,
        behavior: CallBehavior,
    ) {
        for _ in 0..n {
            out.push(instance(name, event_type, weekday, hour, relationship, behavior));
        }
    }

    fn threshold(s: &str) -> Ratio {
        Ratio::parse_decimal(s).unwrap()
    }

    #[test]
    fn dominance_ties_break_reject_then_accept_then_missed() {
        assert_eq!(BehaviorDistribution::new(5, 5, 0).dominant().0, CallBehavior::Reject);
        assert_eq!(BehaviorDistribution::new(4, 4, 4).dominant().0, CallBehavior::Reject);
        assert_eq!(BehaviorDistribution::new(3, 0, 3).dominant().0, CallBehavior::Accept);
        assert_eq!(BehaviorDistribution::new(0, 2, 2).dominant().0, CallBehavior::Reject);
        assert_eq!(BehaviorDistribution::new(0, 0, 9).dominant().0, CallBehavior::Missed);
        let (b, c) = BehaviorDistribution::new(10, 85, 5).dominant();
        assert_eq!(b, CallBehavior::Reject);
        assert_eq!(c, Ratio::new(85, 100));
    }

    #[test]
    fn single_instance_dataset_is_a_pure_root() {
        let data = vec![instance("X", EventType::Recurring, Weekday::Mon, 9, "friend", CallBehavior::Accept)];
        let root = build_agt(&data, threshold("0.8"), 1, PrecedenceMode::Global);
        assert!(root.is_root());
        assert!(root.confidence.is_one());
        assert!(root.children.is_empty());
        assert!(!root.redundant);
        assert_eq!(root.support_count, 1);
    }

    #[test]
    fn pure_root_is_never_elaborated() {
        let mut data = Vec::new();
        repeat(&mut data, 4, "A", EventType::Recurring, Weekday::Mon, 9, "friend", CallBehavior::Reject);
        repeat(&mut data, 4, "B", EventType::NonRecurring, Weekday::Tue, 9, "boss", CallBehavior::Reject);
        let root = build_agt(&data, threshold("0.8"), 1, PrecedenceMode::Global);
        assert!(root.children.is_empty());
    }

    #[test]
    fn support_prunes_values_before_nodes_exist() {
        let mut data = Vec::new();
        repeat(&mut data, 6, "Big", EventType::Recurring, Weekday::Mon, 9, "friend", CallBehavior::Reject);
        repeat(&mut data, 2, "Small", EventType::NonRecurring, Weekday::Tue, 9, "friend", CallBehavior::Accept);
        let root = build_agt(&data, threshold("0.8"), 3, PrecedenceMode::Global);
        assert_eq!(root.children.len(), 1, "the 2-instance value must not become a node");
        assert_eq!(root.children[0].context_path.last().unwrap().1, "Big");
        assert_eq!(root.children[0].support_count, 6);
    }

    #[test]
    fn equal_confidence_child_with_same_dominant_is_redundant() {
        // Root splits on event_name (colleagues appear under both names, so
        // relationship separates poorly). Under "Meeting" (17R/3A, 85%) the
        // value "colleague" repeats Reject at 14/17 < 85%: it does not
        // improve on a qualifying ancestor, so it is redundant.
        let mut data = Vec::new();
        repeat(&mut data, 14, "Meeting", EventType::Recurring, Weekday::Tue, 14, "colleague", CallBehavior::Reject);
        repeat(&mut data, 3, "Meeting", EventType::Recurring, Weekday::Tue, 14, "colleague", CallBehavior::Accept);
        repeat(&mut data, 3, "Meeting", EventType::Recurring, Weekday::Tue, 14, "cousin", CallBehavior::Reject);
        repeat(&mut data, 10, "Lecture", EventType::Recurring, Weekday::Mon, 10, "colleague", CallBehavior::Accept);
        repeat(&mut data, 10, "Lecture", EventType::Recurring, Weekday::Mon, 10, "friend", CallBehavior::Accept);
        let root = build_agt(&data, threshold("0.8"), 3, PrecedenceMode::Global);
        let meeting = root.children.iter().find(|c| c.context_path.last().unwrap().1 == "Meeting").unwrap();
        assert_eq!(meeting.context_path[0].0, ContextAttribute::EventName);
        assert_eq!(meeting.confidence, Ratio::new(17, 20));
        assert!(!meeting.redundant, "first level has no non-root ancestors");
        let colleague = meeting.children.iter().find(|c| c.context_path.last().unwrap().1 == "colleague").unwrap();
        assert_eq!(colleague.confidence, Ratio::new(14, 17));
        assert!(colleague.confidence <= meeting.confidence);
        assert!(colleague.redundant);
        // The cousin branch is pure Reject at 3/3 = 100% > 85%: it improves
        // on the ancestor and must not be flagged.
        let cousin = meeting.children.iter().find(|c| c.context_path.last().unwrap().1 == "cousin").unwrap();
        assert!(!cousin.redundant);
        assert!(cousin.confidence.is_one());
    }

    #[test]
    fn below_threshold_ancestors_do_not_cause_redundancy() {
        // Parent at 60% Reject does not qualify at a 0.8 threshold, so a
        // 55% Reject child underneath it stays unflagged.
        let mut data = Vec::new();
        repeat(&mut data, 6, "A", EventType::Recurring, Weekday::Mon, 9, "x", CallBehavior::Reject);
        repeat(&mut data, 4, "A", EventType::Recurring, Weekday::Mon, 9, "y", CallBehavior::Accept);
        repeat(&mut data, 5, "B", EventType::NonRecurring, Weekday::Tue, 9, "x", CallBehavior::Accept);
        repeat(&mut data, 5, "B", EventType::NonRecurring, Weekday::Tue, 9, "y", CallBehavior::Missed);
        let root = build_agt(&data, threshold("0.8"), 1, PrecedenceMode::Global);
        for node in root.walk() {
            assert!(!node.redundant, "nothing qualifies at 0.8 here: {:?}", node.context_path);
        }
    }

    #[test]
    fn children_are_ordered_by_size_then_value() {
        let mut data = Vec::new();
        repeat(&mut data, 3, "Beta", EventType::Recurring, Weekday::Mon, 9, "x", CallBehavior::Reject);
        repeat(&mut data, 3, "Alpha", EventType::NonRecurring, Weekday::Tue, 10, "x", CallBehavior::Accept);
        repeat(&mut data, 5, "Gamma", EventType::Recurring, Weekday::Wed, 11, "x", CallBehavior::Missed);
        let root = build_agt(&data, threshold("0.8"), 1, PrecedenceMode::Global);
        let order: Vec<&str> = root.children.iter().map(|c| c.context_path.last().unwrap().1.as_str()).collect();
        assert_eq!(order, vec!["Gamma", "Alpha", "Beta"]);
    }

    #[test]
    fn constant_attributes_are_skipped_not_consumed() {
        // Within "Meeting" every instance shares day_time and event_type,
        // so the Meeting node must split directly on relationship, giving
        // two-element paths instead of burning levels on constant tests.
        let mut data = Vec::new();
        repeat(&mut data, 9, "Meeting", EventType::Recurring, Weekday::Tue, 14, "colleague", CallBehavior::Reject);
        repeat(&mut data, 3, "Meeting", EventType::Recurring, Weekday::Tue, 14, "boss", CallBehavior::Accept);
        repeat(&mut data, 6, "Lecture", EventType::Recurring, Weekday::Mon, 10, "colleague", CallBehavior::Accept);
        repeat(&mut data, 6, "Lecture", EventType::Recurring, Weekday::Mon, 10, "friend", CallBehavior::Accept);
        let root = build_agt(&data, threshold("0.8"), 3, PrecedenceMode::Global);
        let meeting = root.children.iter().find(|c| c.context_path.last().unwrap().1 == "Meeting").unwrap();
        assert_eq!(meeting.context_path[0].0, ContextAttribute::EventName);
        let boss = meeting.children.iter().find(|c| c.context_path.last().unwrap().1 == "boss").unwrap();
        assert_eq!(boss.context_path.len(), 2);
        assert_eq!(boss.context_path[1].0, ContextAttribute::Relationship);
        assert!(boss.confidence.is_one());
    }

    #[test]
    fn result_is_independent_of_instance_order() {
        let mut data = Vec::new();
        repeat(&mut data, 7, "A", EventType::Recurring, Weekday::Mon, 9, "x", CallBehavior::Reject);
        repeat(&mut data, 4, "A", EventType::Recurring, Weekday::Mon, 9, "y", CallBehavior::Accept);
        repeat(&mut data, 6, "B", EventType::NonRecurring, Weekday::Tue, 10, "x", CallBehavior::Missed);
        repeat(&mut data, 3, "B", EventType::NonRecurring, Weekday::Tue, 10, "y", CallBehavior::Accept);
        let forward = build_agt(&data, threshold("0.6"), 2, PrecedenceMode::Global);
        let mut reversed_data = data.clone();
        reversed_data.reverse();
        let reversed = build_agt(&reversed_data, threshold("0.6"), 2, PrecedenceMode::Global);
        let shape = |root: &AgtNode| {
            root.walk()
                .iter()
                .map(|n| (n.context_path.clone(), n.distribution.counts(), n.redundant))
                .collect::<Vec<_>>()
        };
        assert_eq!(shape(&forward), shape(&reversed));
    }
}
