//! Declarative computational-perception network.
//!
//! A perception (CP) is either *base* — its antecedents are metric channels
//! fuzzified through a linguistic variable — or *inductive* — its antecedents
//! are other perceptions. Per tick, each perception looks up the rule keyed
//! by the winning labels of its antecedents; the firing degree is the
//! arithmetic mean of the antecedent degrees. Firings are accumulated per
//! label over the whole session (degree sums and counts), from which
//! percentage vectors and few/several/many quantifiers are derived.
//!
//! Networks are declared in a JSON configuration file with two sections:
//! `variables` (terms with four trapezoid points each) and `cps` (labels,
//! antecedent sources, rule table). The shipped `default-network.json`
//! reproduces the six perceptions Situation, Attitude, Movement, Ability,
//! Skill and Resources.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fuzzy::{FuzzyError, LinguisticVariable, Trapezoid};
use crate::metrics::MetricVector;

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("configuration is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("duplicate perception `{0}`")]
    DuplicateCp(String),
    #[error("perception `{0}`: duplicate label `{1}`")]
    DuplicateCpLabel(String, String),
    #[error("perception `{0}` has no labels")]
    NoLabels(String),
    #[error("perception `{0}` has no antecedents")]
    NoAntecedents(String),
    #[error("perception `{cp}`: antecedent {index} references unknown variable `{variable}`")]
    UnknownVariable {
        cp: String,
        index: usize,
        variable: String,
    },
    #[error("perception `{cp}`: antecedent {index} references unknown metric `{metric}`")]
    UnknownMetric {
        cp: String,
        index: usize,
        metric: String,
    },
    #[error("perception `{cp}`: antecedent {index} references unknown perception `{child}`")]
    UnknownChildCp {
        cp: String,
        index: usize,
        child: String,
    },
    #[error("perception `{cp}`: rule {rule} has {got} antecedent labels, expected {expected}")]
    RuleArity {
        cp: String,
        rule: usize,
        got: usize,
        expected: usize,
    },
    #[error("perception `{cp}`: rule {rule} uses unknown label `{label}` at position {position}")]
    UnknownRuleLabel {
        cp: String,
        rule: usize,
        position: usize,
        label: String,
    },
    #[error("perception `{cp}`: rule {rule} has unknown consequent `{label}`")]
    UnknownConsequent {
        cp: String,
        rule: usize,
        label: String,
    },
    #[error("perception `{cp}`: rules {first} and {second} share the antecedent tuple {tuple:?}")]
    DuplicateRule {
        cp: String,
        first: usize,
        second: usize,
        tuple: Vec<String>,
    },
    #[error("perception dependency cycle involving `{0}`")]
    Cycle(String),
    #[error("arity mismatch evaluating `{cp}`: got {got} antecedent values, expected {expected}")]
    EvalArity {
        cp: String,
        got: usize,
        expected: usize,
    },
    #[error("no firings for CP `{0}`")]
    ZeroTotal(String),
    #[error("perception `{cp}` has no label `{label}`")]
    NoSuchLabel { cp: String, label: String },
    #[error("label `{label}` of `{cp}` never fired")]
    ZeroCount { cp: String, label: String },
    #[error("quantifier argument {0} outside [0,1]")]
    QuantifierDomain(f64),
    #[error("session has no metric vectors")]
    EmptySession,
}

/// The metric channels a base perception can read from a [`MetricVector`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKey {
    ProtectionNearestOpponent,
    DistancePlayerNearestOpponent,
    DistancePlayerNearestReward,
    DistanceNearestOpponentNearestReward,
    Energy,
    Time,
    Iterations,
    Memory,
}

impl MetricKey {
    pub fn extract(self, m: &MetricVector) -> f64 {
        match self {
            MetricKey::ProtectionNearestOpponent => {
                m.protection[m.nearest_opponent_index] as f64
            }
            MetricKey::DistancePlayerNearestOpponent => {
                m.dist_player_opponent[m.nearest_opponent_index]
            }
            MetricKey::DistancePlayerNearestReward => m.dist_player_nearest_reward,
            MetricKey::DistanceNearestOpponentNearestReward => {
                m.dist_nearest_opponent_nearest_reward
            }
            MetricKey::Energy => m.energy,
            MetricKey::Time => m.time_ms as f64,
            MetricKey::Iterations => m.iterations as f64,
            MetricKey::Memory => m.memory_bytes as f64,
        }
    }
}

/// One antecedent of a perception: a fuzzified metric channel (base case) or
/// another perception (inductive case).
#[derive(Debug, Clone, PartialEq)]
pub enum AntecedentSource {
    Metric { metric: MetricKey, variable: String },
    Cp(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CpDefinition {
    pub name: String,
    pub labels: Vec<String>,
    pub antecedents: Vec<AntecedentSource>,
    rules: Vec<(Vec<String>, String)>,
    rule_index: HashMap<Vec<String>, usize>,
}

/// One rule firing: the consequent label and the mean antecedent degree.
#[derive(Debug, Clone, PartialEq)]
pub struct CpFiring {
    pub cp_name: String,
    pub label: String,
    pub degree: f64,
    pub tick: u64,
}

impl CpDefinition {
    pub fn rules(&self) -> &[(Vec<String>, String)] {
        &self.rules
    }

    /// Looks up the rule keyed by the antecedent labels. Returns `None` when
    /// no rule covers the tuple (the caller counts uncovered tuples); the
    /// firing degree is the arithmetic mean of the antecedent degrees.
    pub fn evaluate(
        &self,
        antecedent_values: &[(&str, f64)],
        tick: u64,
    ) -> Result<Option<CpFiring>, NetworkError> {
        if antecedent_values.len() != self.antecedents.len() {
            return Err(NetworkError::EvalArity {
                cp: self.name.clone(),
                got: antecedent_values.len(),
                expected: self.antecedents.len(),
            });
        }
        let key: Vec<String> = antecedent_values
            .iter()
            .map(|(label, _)| label.to_string())
            .collect();
        let Some(&rule) = self.rule_index.get(&key) else {
            return Ok(None);
        };
        let degree = antecedent_values.iter().map(|(_, d)| d).sum::<f64>()
            / antecedent_values.len() as f64;
        Ok(Some(CpFiring {
            cp_name: self.name.clone(),
            label: self.rules[rule].1.clone(),
            degree,
            tick,
        }))
    }
}

/// Per-label accumulated firing degrees over a session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaCp {
    pub cp_name: String,
    pub labels: Vec<String>,
    pub sums: Vec<f64>,
    #[serde(default)]
    pub counts: Vec<u64>,
}

/// A stored set of sigma accumulations, loadable in place of a trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaFixture {
    pub subject_id: String,
    pub sigmas: Vec<SigmaCp>,
}

impl SigmaFixture {
    pub fn from_json(json: &str) -> Result<Self, NetworkError> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn sigma_map(&self) -> BTreeMap<String, SigmaCp> {
        self.sigmas
            .iter()
            .map(|s| (s.cp_name.clone(), s.clone()))
            .collect()
    }
}

impl SigmaCp {
    pub fn new(cp_name: &str, labels: &[String]) -> Self {
        Self {
            cp_name: cp_name.to_string(),
            labels: labels.to_vec(),
            sums: vec![0.0; labels.len()],
            counts: vec![0; labels.len()],
        }
    }

    pub fn add_firing(&mut self, label: &str, degree: f64) {
        if let Some(i) = self.labels.iter().position(|l| l == label) {
            self.sums[i] += degree;
            self.counts[i] += 1;
        }
    }

    pub fn total(&self) -> f64 {
        self.sums.iter().sum()
    }

    /// `p_i = sum_i / Σ_j sum_j`, label order preserved.
    pub fn percentages(&self) -> Result<PercentageVector, NetworkError> {
        let total = self.total();
        if total <= 0.0 {
            return Err(NetworkError::ZeroTotal(self.cp_name.clone()));
        }
        Ok(PercentageVector {
            labels: self.labels.clone(),
            values: self.sums.iter().map(|s| s / total).collect(),
        })
    }

    /// Mean firing degree of one label: `α = (β_1 + … + β_N) / N`.
    pub fn label_average(&self, label: &str) -> Result<f64, NetworkError> {
        let i = self
            .labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| NetworkError::NoSuchLabel {
                cp: self.cp_name.clone(),
                label: label.to_string(),
            })?;
        if self.counts.get(i).copied().unwrap_or(0) == 0 {
            return Err(NetworkError::ZeroCount {
                cp: self.cp_name.clone(),
                label: label.to_string(),
            });
        }
        Ok(self.sums[i] / self.counts[i] as f64)
    }
}

/// An ordered `(label, p_i)` vector with `Σ p_i = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PercentageVector {
    pub labels: Vec<String>,
    pub values: Vec<f64>,
}

impl PercentageVector {
    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.labels
            .iter()
            .map(String::as_str)
            .zip(self.values.iter().copied())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Few,
    Several,
    Many,
}

impl Quantifier {
    pub fn word(self) -> &'static str {
        match self {
            Quantifier::Few => "few",
            Quantifier::Several => "several",
            Quantifier::Many => "many",
        }
    }
}

/// Maps a percentage to a quantity word: few on `[0, 1/3)`, several on
/// `[1/3, 2/3)`, many on `[2/3, 1]`.
pub fn quantifier(p: f64) -> Result<Quantifier, NetworkError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(NetworkError::QuantifierDomain(p));
    }
    Ok(if p < 1.0 / 3.0 {
        Quantifier::Few
    } else if p < 2.0 / 3.0 {
        Quantifier::Several
    } else {
        Quantifier::Many
    })
}

/// Result of accumulating a whole session.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionResult {
    pub sigmas: BTreeMap<String, SigmaCp>,
    /// Per perception: ticks where no rule covered the antecedent label
    /// tuple (or a child perception had not fired).
    pub uncovered: BTreeMap<String, u64>,
    pub ticks: usize,
}

// ---------------------------------------------------------------------------
// Configuration file schema
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
struct NetworkConfig {
    variables: Vec<VariableConfig>,
    cps: Vec<CpConfig>,
}

#[derive(Debug, Deserialize)]
struct VariableConfig {
    name: String,
    domain: [f64; 2],
    terms: Vec<TermConfig>,
}

#[derive(Debug, Deserialize)]
struct TermConfig {
    label: String,
    points: [f64; 4],
}

#[derive(Debug, Deserialize)]
struct CpConfig {
    name: String,
    labels: Vec<String>,
    antecedents: Vec<AntecedentConfig>,
    rules: Vec<RuleConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum AntecedentConfig {
    Metric { metric: String, variable: String },
    Cp { cp: String },
}

#[derive(Debug, Deserialize)]
struct RuleConfig {
    when: Vec<String>,
    then: String,
}

#[derive(Debug, Clone)]
pub struct CpNetwork {
    variables: HashMap<String, LinguisticVariable>,
    cps: Vec<CpDefinition>,
    /// Indices into `cps` such that every perception appears after all of
    /// its children.
    topo_order: Vec<usize>,
}

impl CpNetwork {
    /// The shipped network: six perceptions with the published rule tables.
    pub fn default_network() -> Self {
        Self::load(crate::DEFAULT_NETWORK_JSON)
            .expect("embedded default network configuration is valid")
    }

    /// Parses and fully validates a network configuration.
    pub fn load(config: &str) -> Result<Self, NetworkError> {
        let config: NetworkConfig = serde_json::from_str(config)?;

        let mut variables = HashMap::new();
        for v in config.variables {
            let terms = v
                .terms
                .into_iter()
                .map(|t| {
                    Trapezoid::new(t.points[0], t.points[1], t.points[2], t.points[3])
                        .map(|trap| (t.label, trap))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let name = v.name.clone();
            let var = LinguisticVariable::new(v.name, v.domain[0], v.domain[1], terms)?;
            if variables.insert(name.clone(), var).is_some() {
                return Err(NetworkError::DuplicateVariable(name));
            }
        }

        let cp_names: Vec<String> = config.cps.iter().map(|c| c.name.clone()).collect();
        for (i, name) in cp_names.iter().enumerate() {
            if cp_names[..i].contains(name) {
                return Err(NetworkError::DuplicateCp(name.clone()));
            }
        }
        let cp_labels: HashMap<&str, &[String]> = config
            .cps
            .iter()
            .map(|c| (c.name.as_str(), c.labels.as_slice()))
            .collect();

        let mut cps = Vec::new();
        for c in &config.cps {
            if c.labels.is_empty() {
                return Err(NetworkError::NoLabels(c.name.clone()));
            }
            for (i, l) in c.labels.iter().enumerate() {
                if c.labels[..i].contains(l) {
                    return Err(NetworkError::DuplicateCpLabel(c.name.clone(), l.clone()));
                }
            }
            if c.antecedents.is_empty() {
                return Err(NetworkError::NoAntecedents(c.name.clone()));
            }

            // Resolve antecedents and collect the label set admissible at
            // each antecedent position.
            let mut antecedents = Vec::new();
            let mut position_labels: Vec<Vec<String>> = Vec::new();
            for (index, a) in c.antecedents.iter().enumerate() {
                match a {
                    AntecedentConfig::Metric { metric, variable } => {
                        let key: MetricKey =
                            serde_json::from_value(serde_json::Value::String(metric.clone()))
                                .map_err(|_| NetworkError::UnknownMetric {
                                    cp: c.name.clone(),
                                    index,
                                    metric: metric.clone(),
                                })?;
                        let var = variables.get(variable).ok_or_else(|| {
                            NetworkError::UnknownVariable {
                                cp: c.name.clone(),
                                index,
                                variable: variable.clone(),
                            }
                        })?;
                        position_labels
                            .push(var.terms().iter().map(|(l, _)| l.clone()).collect());
                        antecedents.push(AntecedentSource::Metric {
                            metric: key,
                            variable: variable.clone(),
                        });
                    }
                    AntecedentConfig::Cp { cp } => {
                        let labels = cp_labels.get(cp.as_str()).ok_or_else(|| {
                            NetworkError::UnknownChildCp {
                                cp: c.name.clone(),
                                index,
                                child: cp.clone(),
                            }
                        })?;
                        position_labels.push(labels.to_vec());
                        antecedents.push(AntecedentSource::Cp(cp.clone()));
                    }
                }
            }

            let mut rules = Vec::new();
            let mut rule_index: HashMap<Vec<String>, usize> = HashMap::new();
            for (r, rule) in c.rules.iter().enumerate() {
                if rule.when.len() != antecedents.len() {
                    return Err(NetworkError::RuleArity {
                        cp: c.name.clone(),
                        rule: r,
                        got: rule.when.len(),
                        expected: antecedents.len(),
                    });
                }
                for (position, label) in rule.when.iter().enumerate() {
                    if !position_labels[position].contains(label) {
                        return Err(NetworkError::UnknownRuleLabel {
                            cp: c.name.clone(),
                            rule: r,
                            position,
                            label: label.clone(),
                        });
                    }
                }
                if !c.labels.contains(&rule.then) {
                    return Err(NetworkError::UnknownConsequent {
                        cp: c.name.clone(),
                        rule: r,
                        label: rule.then.clone(),
                    });
                }
                if let Some(&first) = rule_index.get(&rule.when) {
                    return Err(NetworkError::DuplicateRule {
                        cp: c.name.clone(),
                        first,
                        second: r,
                        tuple: rule.when.clone(),
                    });
                }
                rule_index.insert(rule.when.clone(), rules.len());
                rules.push((rule.when.clone(), rule.then.clone()));
            }

            cps.push(CpDefinition {
                name: c.name.clone(),
                labels: c.labels.clone(),
                antecedents,
                rules,
                rule_index,
            });
        }

        let topo_order = topological_order(&cps)?;
        Ok(Self {
            variables,
            cps,
            topo_order,
        })
    }

    pub fn variables(&self) -> &HashMap<String, LinguisticVariable> {
        &self.variables
    }

    pub fn cps(&self) -> &[CpDefinition] {
        &self.cps
    }

    pub fn cp(&self, name: &str) -> Option<&CpDefinition> {
        self.cps.iter().find(|c| c.name == name)
    }

    /// Evaluates the network over a session: per tick, fuzzifies the base
    /// inputs, fires the perceptions in dependency order, and accumulates
    /// every firing into its label's sigma.
    pub fn run_session(&self, metrics: &[MetricVector]) -> Result<SessionResult, NetworkError> {
        if metrics.is_empty() {
            return Err(NetworkError::EmptySession);
        }
        let mut sigmas: BTreeMap<String, SigmaCp> = self
            .cps
            .iter()
            .map(|c| (c.name.clone(), SigmaCp::new(&c.name, &c.labels)))
            .collect();
        let mut uncovered: BTreeMap<String, u64> =
            self.cps.iter().map(|c| (c.name.clone(), 0)).collect();

        for (tick, m) in metrics.iter().enumerate() {
            let tick = tick as u64;
            let mut firings: HashMap<&str, CpFiring> = HashMap::new();
            for &i in &self.topo_order {
                let def = &self.cps[i];
                let mut values: Vec<(String, f64)> = Vec::with_capacity(def.antecedents.len());
                let mut available = true;
                for a in &def.antecedents {
                    match a {
                        AntecedentSource::Metric { metric, variable } => {
                            let fv = self.variables[variable].fuzzify(metric.extract(m));
                            values.push((fv.label, fv.degree));
                        }
                        AntecedentSource::Cp(child) => match firings.get(child.as_str()) {
                            Some(f) => values.push((f.label.clone(), f.degree)),
                            None => {
                                available = false;
                                break;
                            }
                        },
                    }
                }
                if !available {
                    *uncovered.get_mut(&def.name).unwrap() += 1;
                    continue;
                }
                let borrowed: Vec<(&str, f64)> =
                    values.iter().map(|(l, d)| (l.as_str(), *d)).collect();
                match def.evaluate(&borrowed, tick)? {
                    Some(firing) => {
                        sigmas
                            .get_mut(&def.name)
                            .unwrap()
                            .add_firing(&firing.label, firing.degree);
                        firings.insert(def.name.as_str(), firing);
                    }
                    None => *uncovered.get_mut(&def.name).unwrap() += 1,
                }
            }
        }

        Ok(SessionResult {
            sigmas,
            uncovered,
            ticks: metrics.len(),
        })
    }
}

fn topological_order(cps: &[CpDefinition]) -> Result<Vec<usize>, NetworkError> {
    let index: HashMap<&str, usize> = cps
        .iter()
        .enumerate()
        .map(|(i, c)| (c.name.as_str(), i))
        .collect();
    let mut state = vec![0u8; cps.len()]; // 0 unvisited, 1 visiting, 2 done
    let mut order = Vec::with_capacity(cps.len());

    fn visit(
        i: usize,
        cps: &[CpDefinition],
        index: &HashMap<&str, usize>,
        state: &mut [u8],
        order: &mut Vec<usize>,
    ) -> Result<(), NetworkError> {
        match state[i] {
            2 => return Ok(()),
            1 => return Err(NetworkError::Cycle(cps[i].name.clone())),
            _ => {}
        }
        state[i] = 1;
        for a in &cps[i].antecedents {
            if let AntecedentSource::Cp(child) = a {
                visit(index[child.as_str()], cps, index, state, order)?;
            }
        }
        state[i] = 2;
        order.push(i);
        Ok(())
    }

    for i in 0..cps.len() {
        visit(i, cps, &index, &mut state, &mut order)?;
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_network_has_the_six_perceptions() {
        let net = CpNetwork::default_network();
        let names: Vec<&str> = net.cps().iter().map(|c| c.name.as_str()).collect();
        assert_eq!(
            names,
            ["Situation", "Attitude", "Movement", "Ability", "Skill", "Resources"]
        );
    }

    #[test]
    fn published_rule_firings() {
        let net = CpNetwork::default_network();
        let fire = |cp: &str, vals: &[(&str, f64)]| {
            net.cp(cp)
                .unwrap()
                .evaluate(vals, 0)
                .unwrap()
                .unwrap_or_else(|| panic!("no rule fired for {cp} {vals:?}"))
        };
        let f = fire("Situation", &[("Low", 0.5), ("Close", 1.0), ("High", 1.0)]);
        assert_eq!(f.label, "Dangerous");
        assert!((f.degree - 0.8333).abs() < 1e-3);

        let f = fire("Attitude", &[("Far", 0.29), ("Normal", 0.33), ("High", 1.0)]);
        assert_eq!(f.label, "Cautious");
        assert!((f.degree - 0.54).abs() < 1e-3);

        let f = fire("Ability", &[("Cautious", 0.54), ("Bad", 0.91), ("Small", 1.0)]);
        assert_eq!(f.label, "Dummy");
        assert!((f.degree - 0.8166).abs() < 1e-3);
    }

    #[test]
    fn uncovered_tuple_yields_no_firing() {
        let net = CpNetwork::default_network();
        // Protection=High with Distance=Normal and Energy=Low has no rule.
        let out = net
            .cp("Situation")
            .unwrap()
            .evaluate(&[("High", 1.0), ("Normal", 1.0), ("Low", 1.0)], 0)
            .unwrap();
        assert!(out.is_none());
    }

    #[test]
    fn evaluate_rejects_wrong_arity() {
        let net = CpNetwork::default_network();
        let err = net
            .cp("Situation")
            .unwrap()
            .evaluate(&[("Low", 0.5)], 0)
            .unwrap_err();
        assert!(matches!(err, NetworkError::EvalArity { .. }));
    }

    #[test]
    fn unknown_rule_label_is_rejected() {
        let config = r#"{
            "variables": [
                {"name": "V", "domain": [0, 10], "terms": [
                    {"label": "LOW", "points": [0, 0, 5, 10]},
                    {"label": "HIGH", "points": [5, 10, 10, 10]}
                ]}
            ],
            "cps": [
                {"name": "X", "labels": ["A"],
                 "antecedents": [{"metric": "energy", "variable": "V"}],
                 "rules": [{"when": ["BOGUS"], "then": "A"}]}
            ]
        }"#;
        match CpNetwork::load(config) {
            Err(NetworkError::UnknownRuleLabel { cp, rule, label, .. }) => {
                assert_eq!(cp, "X");
                assert_eq!(rule, 0);
                assert_eq!(label, "BOGUS");
            }
            other => panic!("expected UnknownRuleLabel, got {other:?}"),
        }
    }

    #[test]
    fn self_dependency_is_a_cycle() {
        let config = r#"{
            "variables": [],
            "cps": [
                {"name": "X", "labels": ["A"],
                 "antecedents": [{"cp": "X"}],
                 "rules": [{"when": ["A"], "then": "A"}]}
            ]
        }"#;
        match CpNetwork::load(config) {
            Err(NetworkError::Cycle(name)) => assert_eq!(name, "X"),
            other => panic!("expected Cycle, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_rule_tuple_is_rejected() {
        let config = r#"{
            "variables": [
                {"name": "V", "domain": [0, 10], "terms": [
                    {"label": "LOW", "points": [0, 0, 10, 10]}
                ]}
            ],
            "cps": [
                {"name": "X", "labels": ["A", "B"],
                 "antecedents": [{"metric": "energy", "variable": "V"}],
                 "rules": [{"when": ["LOW"], "then": "A"}, {"when": ["LOW"], "then": "B"}]}
            ]
        }"#;
        assert!(matches!(
            CpNetwork::load(config),
            Err(NetworkError::DuplicateRule { .. })
        ));
    }

    #[test]
    fn percentages_match_published_vectors() {
        let human = SigmaCp {
            cp_name: "Attitude".into(),
            labels: vec!["Wise".into(), "Brave".into(), "Cautious".into(), "Passive".into()],
            sums: vec![122.35, 289.0, 87.59, 8.75],
            counts: vec![],
        };
        let p = human.percentages().unwrap();
        let expected = [0.2410, 0.5692, 0.1725, 0.0172];
        for (got, want) in p.values.iter().zip(expected) {
            assert!((got - want).abs() < 5e-4, "{got} vs {want}");
        }
        assert!((p.values.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn single_nonzero_label_gets_full_percentage() {
        let s = SigmaCp {
            cp_name: "X".into(),
            labels: vec!["A".into(), "B".into()],
            sums: vec![0.0, 3.5],
            counts: vec![],
        };
        assert_eq!(s.percentages().unwrap().values, vec![0.0, 1.0]);
    }

    #[test]
    fn zero_total_is_an_error() {
        let s = SigmaCp::new("X", &["A".to_string()]);
        assert!(matches!(s.percentages(), Err(NetworkError::ZeroTotal(_))));
    }

    #[test]
    fn label_average_divides_by_count() {
        let mut s = SigmaCp::new("Situation", &["Safe".to_string()]);
        s.add_firing("Safe", 0.8);
        s.add_firing("Safe", 0.7);
        assert!((s.label_average("Safe").unwrap() - 0.75).abs() < 1e-12);
        let empty = SigmaCp::new("Situation", &["Safe".to_string()]);
        assert!(matches!(
            empty.label_average("Safe"),
            Err(NetworkError::ZeroCount { .. })
        ));
    }

    #[test]
    fn quantifier_boundaries() {
        assert_eq!(quantifier(0.709).unwrap(), Quantifier::Many);
        assert_eq!(quantifier(0.5).unwrap(), Quantifier::Several);
        assert_eq!(quantifier(1.0 / 3.0).unwrap(), Quantifier::Several);
        assert_eq!(quantifier(2.0 / 3.0).unwrap(), Quantifier::Many);
        assert_eq!(quantifier(0.0).unwrap(), Quantifier::Few);
        assert!(quantifier(1.2).is_err());
    }

    #[test]
    fn constructed_session_accumulates_firings() {
        // Three ticks that all fire Attitude=(Brave, 1.0): player and nearest
        // opponent both on top of the nearest reward.
        let m = MetricVector {
            dist_player_opponent: vec![1.0],
            dist_player_nearest_reward: 1.0,
            dist_nearest_opponent_nearest_reward: 1.0,
            protection: vec![0],
            energy: 17.0,
            time_ms: 0,
            reward_captured: false,
            iterations: 42,
            memory_bytes: 924,
            nearest_opponent_index: 0,
            nearest_reward_index: 0,
        };
        let mut ticks = vec![m.clone(), m.clone(), m];
        for (i, t) in ticks.iter_mut().enumerate() {
            t.time_ms = i as u64 * 1000;
        }
        let net = CpNetwork::default_network();
        let out = net.run_session(&ticks).unwrap();
        let attitude = &out.sigmas["Attitude"];
        let brave = attitude.labels.iter().position(|l| l == "Brave").unwrap();
        assert_eq!(attitude.counts[brave], 3);
        assert!((attitude.sums[brave] - 3.0).abs() < 1e-12);
    }
}
