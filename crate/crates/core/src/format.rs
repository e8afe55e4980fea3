//! JSON instance files.
//!
//! ```json
//! {
//!   "num_candidates": 2,
//!   "preferred": 1,
//!   "rule": "majority",
//!   "tiebreak": [0, 1],
//!   "voters": [{"ranking": [0, 1], "cost": {"kind": "identity"}}],
//!   "arcs": [{"from": 0, "to": 1, "weight": {"num": 1, "den": 2}}],
//!   "budget": 1,
//!   "metadata": {"source": "ds", "params": {"k": 1}, "supporter_threshold": 3},
//!   "tree_decomposition": [{"bag": [0, 1], "children": []}]
//! }
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dp::decomposition::TreeDecomposition;
use crate::election::{CostFamily, CostFunction, InfluenceArc, InfluenceNetwork, Instance, PreferenceProfile, Rule, Weight};
use crate::error::{Error, Result};
use crate::reductions::ReductionRecord;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub num_candidates: usize,
    pub preferred: usize,
    pub rule: Rule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tiebreak: Option<Vec<usize>>,
    pub voters: Vec<VoterEntry>,
    #[serde(default)]
    pub arcs: Vec<ArcEntry>,
    pub budget: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree_decomposition: Option<Vec<DecompositionNode>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VoterEntry {
    pub ranking: Vec<usize>,
    #[serde(default = "identity_cost")]
    pub cost: CostEntry,
}

fn identity_cost() -> CostEntry {
    CostEntry::Identity
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CostEntry {
    Identity,
    Linear { coefficient: u64 },
    Table { values: Vec<u64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcEntry {
    pub from: usize,
    pub to: usize,
    pub weight: WeightEntry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightEntry {
    pub num: u64,
    pub den: u64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, Value>,
    /// Threshold mode: the preferred candidate needs this many supporters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supporter_threshold: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionNode {
    pub bag: Vec<usize>,
    #[serde(default)]
    pub children: Vec<usize>,
}

impl From<&CostFunction> for CostEntry {
    fn from(f: &CostFunction) -> Self {
        match f {
            CostFunction::Identity => CostEntry::Identity,
            CostFunction::Linear(b) => CostEntry::Linear { coefficient: *b },
            CostFunction::Table(values) => CostEntry::Table { values: values.clone() },
        }
    }
}

impl From<&CostEntry> for CostFunction {
    fn from(e: &CostEntry) -> Self {
        match e {
            CostEntry::Identity => CostFunction::Identity,
            CostEntry::Linear { coefficient } => CostFunction::Linear(*coefficient),
            CostEntry::Table { values } => CostFunction::Table(values.clone()),
        }
    }
}

impl InstanceDocument {
    pub fn from_instance(instance: &Instance) -> Self {
        let n = instance.num_voters();
        let default_order: Vec<usize> = (0..instance.num_candidates()).collect();
        let metadata = instance.supporter_threshold().map(|t| Metadata {
            supporter_threshold: Some(t),
            ..Metadata::default()
        });
        InstanceDocument {
            num_candidates: instance.num_candidates(),
            preferred: instance.preferred(),
            rule: instance.rule(),
            tiebreak: (instance.tiebreak() != default_order.as_slice()).then(|| instance.tiebreak().to_vec()),
            voters: (0..n)
                .map(|i| VoterEntry {
                    ranking: instance.profile().ranking(i).to_vec(),
                    cost: instance.costs().get(i).into(),
                })
                .collect(),
            arcs: instance
                .network()
                .arcs()
                .iter()
                .map(|a| ArcEntry {
                    from: a.from,
                    to: a.to,
                    weight: WeightEntry {
                        num: a.weight.num(),
                        den: a.weight.den(),
                    },
                })
                .collect(),
            budget: instance.budget(),
            metadata,
            tree_decomposition: None,
        }
    }

    /// The instance plus a metadata block naming the source problem.
    pub fn from_record(record: &ReductionRecord) -> Self {
        let mut doc = InstanceDocument::from_instance(&record.instance);
        doc.metadata = Some(Metadata {
            source: Some(record.source.tag().to_string()),
            params: record.params.clone(),
            supporter_threshold: record.instance.supporter_threshold(),
        });
        doc
    }

    pub fn with_decomposition(mut self, dec: &TreeDecomposition) -> Self {
        self.tree_decomposition = Some(
            dec.to_children()
                .into_iter()
                .map(|(bag, children)| DecompositionNode { bag, children })
                .collect(),
        );
        self
    }

    /// Rebuilds the instance, re-checking every invariant.
    pub fn to_instance(&self) -> Result<Instance> {
        let n = self.voters.len();
        let profile = PreferenceProfile::new(self.voters.iter().map(|v| v.ranking.clone()).collect());
        let costs = CostFamily::new(self.voters.iter().map(|v| CostFunction::from(&v.cost)).collect());
        let arcs = self
            .arcs
            .iter()
            .map(|a| {
                Ok(InfluenceArc {
                    from: a.from,
                    to: a.to,
                    weight: Weight::new(a.weight.num, a.weight.den)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let network = InfluenceNetwork::new(n, arcs)?;
        let mut instance = Instance::new(
            self.num_candidates,
            self.preferred,
            profile,
            network,
            costs,
            self.budget,
            self.rule,
        )?;
        if let Some(order) = &self.tiebreak {
            instance = instance.with_tiebreak(order.clone())?;
        }
        let threshold = self.metadata.as_ref().and_then(|m| m.supporter_threshold);
        if let Some(t) = threshold {
            if t > n {
                return Err(Error::InvalidInstance(format!("supporter threshold {t} exceeds {n} voters")));
            }
        }
        Ok(instance.with_supporter_threshold(threshold))
    }

    /// The embedded decomposition, validated against the support graph.
    pub fn decomposition(&self) -> Result<Option<TreeDecomposition>> {
        let Some(nodes) = &self.tree_decomposition else {
            return Ok(None);
        };
        let dec = TreeDecomposition::from_children(nodes.iter().map(|d| (d.bag.clone(), d.children.clone())).collect());
        let instance = self.to_instance()?;
        dec.validate(&instance.network().support_graph())?;
        Ok(Some(dec))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Pretty-printed JSON with a trailing newline. Deterministic.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        InstanceDocument::from_json(&text)
    }
}

/// A standalone decomposition file: a JSON list of `{bag, children}` nodes,
/// or an object with a `tree_decomposition` field.
pub fn parse_decomposition(text: &str) -> Result<TreeDecomposition> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum File {
        Nodes(Vec<DecompositionNode>),
        Wrapped { tree_decomposition: Vec<DecompositionNode> },
    }
    let nodes = match serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))? {
        File::Nodes(nodes) | File::Wrapped { tree_decomposition: nodes } => nodes,
    };
    Ok(TreeDecomposition::from_children(nodes.into_iter().map(|d| (d.bag, d.children)).collect()))
}

/// Serializes an instance as a JSON document.
pub fn to_json(instance: &Instance) -> String {
    InstanceDocument::from_instance(instance).to_json()
}

/// Parses and validates a JSON document.
pub fn from_json(text: &str) -> Result<Instance> {
    InstanceDocument::from_json(text)?.to_instance()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::reductions::reduce_ds_to_sbon_complete;

    fn sample() -> Instance {
        Instance::new(
            3,
            2,
            PreferenceProfile::new(vec![vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]]),
            InfluenceNetwork::new(
                3,
                vec![InfluenceArc {
                    from: 0,
                    to: 2,
                    weight: Weight::new(1, 2).unwrap(),
                }],
            )
            .unwrap(),
            CostFamily::new(vec![
                CostFunction::Identity,
                CostFunction::Linear(3),
                CostFunction::Table(vec![0, 4, 9]),
            ]),
            5,
            Rule::Plurality,
        )
        .unwrap()
        .with_tiebreak(vec![2, 1, 0])
        .unwrap()
    }

    #[test]
    fn round_trip() {
        let inst = sample();
        let text = to_json(&inst);
        assert_eq!(from_json(&text).unwrap(), inst);
        assert!(text.contains("\"den\": 2"));
    }

    #[test]
    fn record_keeps_metadata_and_weights() {
        let rec = reduce_ds_to_sbon_complete(&Graph::path(3), 2).unwrap();
        let doc = InstanceDocument::from_record(&rec);
        let back = InstanceDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back.metadata.as_ref().unwrap().source.as_deref(), Some("ds-complete"));
        assert_eq!(back.to_instance().unwrap(), rec.instance);
        assert!(doc.to_json().contains("\"den\": 4"));
    }

    #[test]
    fn threshold_in_metadata() {
        let text = r#"{"num_candidates": 2, "preferred": 1, "rule": "majority",
            "voters": [{"ranking": [0, 1]}, {"ranking": [1, 0], "cost": {"kind": "linear", "coefficient": 2}}],
            "budget": 0, "metadata": {"supporter_threshold": 1}}"#;
        let inst = from_json(text).unwrap();
        assert_eq!(inst.supporter_threshold(), Some(1));
        assert!(inst.verify(&crate::election::ShiftVector::zeros(2)));
        assert_eq!(from_json(&to_json(&inst)).unwrap(), inst);
    }

    #[test]
    fn bad_documents() {
        assert!(matches!(from_json("{"), Err(Error::Parse(_))));
        let zero_den = r#"{"num_candidates": 2, "preferred": 1, "rule": "majority",
            "voters": [{"ranking": [0, 1]}, {"ranking": [0, 1]}],
            "arcs": [{"from": 0, "to": 1, "weight": {"num": 1, "den": 0}}], "budget": 0}"#;
        assert!(from_json(zero_den).is_err());
        let bad_rank = r#"{"num_candidates": 2, "preferred": 1, "rule": "majority",
            "voters": [{"ranking": [0, 0]}], "budget": 0}"#;
        assert!(from_json(bad_rank).is_err());
    }

    #[test]
    fn decomposition_is_validated() {
        let inst = Instance::new(
            2,
            1,
            PreferenceProfile::new(vec![vec![0, 1]; 3]),
            InfluenceNetwork::from_undirected(&Graph::path(3), Weight::ONE),
            CostFamily::identity(3),
            1,
            Rule::Majority,
        )
        .unwrap();
        let good = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let doc = InstanceDocument::from_instance(&inst).with_decomposition(&good);
        let back = InstanceDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back.decomposition().unwrap().unwrap().width(), 1);

        let mut bad = back.clone();
        bad.tree_decomposition = Some(vec![DecompositionNode {
            bag: vec![0, 1],
            children: vec![],
        }]);
        assert!(bad.decomposition().is_err());
        assert_eq!(parse_decomposition("[{\"bag\": [0, 1], \"children\": [1]}, {\"bag\": [1, 2]}]").unwrap().num_nodes(), 2);
    }
}
