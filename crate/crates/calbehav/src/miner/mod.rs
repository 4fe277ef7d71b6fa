//! Association-generation-tree rule mining over event-behavior instances.
//!
//! Attributes are ranked by information gain and the tree is grown one
//! attribute per level in that order of precedence. Each node holds the
//! exact behavior distribution of the instances matching its path; a node
//! whose dominant behavior is unanimous is not elaborated further, values
//! with too little support never become nodes, and a node that repeats a
//! qualifying ancestor's dominant behavior without exceeding its confidence
//! is flagged redundant. Rules are read off the remaining qualifying nodes.

pub(crate) mod gain;
mod rules;
mod tree;

pub use gain::{entropy, information_gain, rank_contexts};
pub use rules::{extract_rules, render_tree, rules_to_json, BehavioralRule};
pub use tree::{build_agt, dominant_behavior, AgtNode, BehaviorDistribution, PrecedenceMode};
