//! Behavior-profile report generation.
//!
//! Each perception's session percentages select one of four sentence cases:
//!
//! 1. one label above 2/3 — a dominant pattern;
//! 2. exactly one label above 1/3;
//! 3. two or more labels above 1/3 — the top two are named;
//! 4. no label above 1/3 — no particular pattern.
//!
//! Sentences are realized from user-overridable templates with `$degree`
//! (quantifier word) and `$value` (label word) placeholders. Realization is
//! fully deterministic: identical sigma accumulations produce byte-identical
//! reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{quantifier, NetworkError, PercentageVector, SessionResult, SigmaCp};

/// Fixed report order for the six perceptions.
pub const PROFILE_CP_ORDER: [&str; 6] =
    ["Attitude", "Situation", "Movement", "Ability", "Skill", "Resources"];

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("profile is missing perception `{0}`")]
    MissingCp(String),
    #[error("no sentence templates for perception `{0}`")]
    MissingTemplates(String),
    #[error("perception `{cp}`: no template for case {case}")]
    MissingCase { cp: String, case: u8 },
    #[error("perception `{cp}` case {case}: placeholder left unsubstituted in `{sentence}`")]
    Unsubstituted {
        cp: String,
        case: u8,
        sentence: String,
    },
    #[error("case {case} needs {expected} bindings, got {got}")]
    BindingArity { case: u8, expected: usize, got: usize },
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("template file is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Sentence templates: per perception, one template for each of the four
/// cases.
#[derive(Debug, Clone)]
pub struct TemplateSet {
    templates: BTreeMap<String, [String; 4]>,
}

impl TemplateSet {
    pub fn default_templates() -> Self {
        Self::from_json(crate::DEFAULT_TEMPLATES_JSON)
            .expect("embedded default templates are valid")
    }

    /// Parses a template file: JSON keyed by perception name, then by case
    /// number `"1"`..`"4"`.
    pub fn from_json(json: &str) -> Result<Self, ReportError> {
        let raw: BTreeMap<String, BTreeMap<String, String>> = serde_json::from_str(json)?;
        let mut templates = BTreeMap::new();
        for (cp, cases) in raw {
            let mut set: [String; 4] = Default::default();
            for case in 1..=4u8 {
                set[case as usize - 1] = cases
                    .get(&case.to_string())
                    .ok_or_else(|| ReportError::MissingCase {
                        cp: cp.clone(),
                        case,
                    })?
                    .clone();
            }
            templates.insert(cp, set);
        }
        Ok(Self { templates })
    }

    pub fn template(&self, cp: &str, case: u8) -> Result<&str, ReportError> {
        let set = self
            .templates
            .get(cp)
            .ok_or_else(|| ReportError::MissingTemplates(cp.to_string()))?;
        set.get(case as usize - 1)
            .map(String::as_str)
            .ok_or(ReportError::MissingCase {
                cp: cp.to_string(),
                case,
            })
    }
}

/// Outcome of case selection: the case number and the bound labels with
/// their percentages, strongest first.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseSelection {
    pub case: u8,
    /// `(label index, percentage)` pairs; two entries for case 3, one for
    /// cases 1 and 2, none for case 4.
    pub bindings: Vec<(usize, f64)>,
}

/// Applies the four-case rules to a percentage vector. Ties between equal
/// percentages resolve by declaration order.
pub fn select_case(p: &PercentageVector) -> CaseSelection {
    let mut order: Vec<usize> = (0..p.values.len()).collect();
    // stable sort keeps declaration order on ties
    order.sort_by(|&a, &b| p.values[b].partial_cmp(&p.values[a]).unwrap());

    let top = order[0];
    if p.values[top] > 2.0 / 3.0 {
        return CaseSelection {
            case: 1,
            bindings: vec![(top, p.values[top])],
        };
    }
    let above: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| p.values[i] > 1.0 / 3.0)
        .collect();
    match above.len() {
        0 => CaseSelection {
            case: 4,
            bindings: vec![],
        },
        1 => CaseSelection {
            case: 2,
            bindings: vec![(above[0], p.values[above[0]])],
        },
        _ => CaseSelection {
            case: 3,
            bindings: above[..2].iter().map(|&i| (i, p.values[i])).collect(),
        },
    }
}

/// Turns a label identifier into its sentence word: lowercased, underscores
/// become spaces.
pub fn label_word(label: &str) -> String {
    label.to_lowercase().replace('_', " ")
}

/// Substitutes `$degree`/`$value` (and the `_1`/`_2` variants for case 3)
/// into the template for `case`, resolves `a/an`, and capitalizes the first
/// letter. `bindings` are `(quantifier word, label word)` pairs.
pub fn realize_sentence(
    templates: &TemplateSet,
    cp: &str,
    case: u8,
    bindings: &[(String, String)],
) -> Result<String, ReportError> {
    let expected = match case {
        1 | 2 => 1,
        3 => 2,
        _ => 0,
    };
    if bindings.len() != expected {
        return Err(ReportError::BindingArity {
            case,
            expected,
            got: bindings.len(),
        });
    }

    let mut sentence = templates.template(cp, case)?.to_string();
    if case == 3 {
        sentence = sentence
            .replace("$degree_1", &bindings[0].0)
            .replace("$value_1", &bindings[0].1)
            .replace("$degree_2", &bindings[1].0)
            .replace("$value_2", &bindings[1].1);
    } else if expected == 1 {
        sentence = sentence
            .replace("$degree", &bindings[0].0)
            .replace("$value", &bindings[0].1);
    }
    if sentence.contains('$') {
        return Err(ReportError::Unsubstituted {
            cp: cp.to_string(),
            case,
            sentence,
        });
    }
    sentence = fix_articles(&sentence);
    let mut chars = sentence.chars();
    if let Some(first) = chars.next() {
        sentence = first.to_uppercase().collect::<String>() + chars.as_str();
    }
    Ok(sentence)
}

// "a/an word" -> "an word" before a vowel, "a word" otherwise.
fn fix_articles(sentence: &str) -> String {
    let mut out = String::with_capacity(sentence.len());
    let mut rest = sentence;
    while let Some(at) = rest.find("a/an ") {
        out.push_str(&rest[..at]);
        let after = &rest[at + 5..];
        let vowel = after
            .chars()
            .next()
            .map(|c| "aeiouAEIOU".contains(c))
            .unwrap_or(false);
        out.push_str(if vowel { "an " } else { "a " });
        rest = after;
    }
    out.push_str(rest);
    out
}

/// One perception's slice of the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CpSummary {
    pub name: String,
    pub labels: Vec<String>,
    pub percentages: Vec<f64>,
    pub case: u8,
    /// Quantifier words of the bound labels, strongest first.
    pub quantifiers: Vec<String>,
    /// Bound label words, strongest first.
    pub values: Vec<String>,
    pub sentence: String,
    /// True when the perception never fired during the session.
    #[serde(default)]
    pub no_data: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SessionStats {
    pub ticks: usize,
    pub uncovered: BTreeMap<String, u64>,
}

/// The full report: six sentences in fixed order plus the structured data
/// they were realized from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BehaviorProfile {
    pub subject_id: String,
    pub cps: Vec<CpSummary>,
    pub stats: SessionStats,
}

impl BehaviorProfile {
    pub fn cp(&self, name: &str) -> Option<&CpSummary> {
        self.cps.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("Behavior profile: {}\n\n", self.subject_id);
        for cp in &self.cps {
            out.push_str(&format!("  {}\n", cp.sentence));
        }
        out.push_str(&format!("\nTicks: {}\n", self.stats.ticks));
        if !self.stats.uncovered.is_empty() {
            let parts: Vec<String> = self
                .stats
                .uncovered
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            out.push_str(&format!("Uncovered rule tuples: {}\n", parts.join(", ")));
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("# Behavior profile: {}\n\n", self.subject_id);
        for cp in &self.cps {
            out.push_str(&format!("- **{}**: {}\n", cp.name, cp.sentence));
        }
        out.push_str("\n| Perception | Percentages |\n|---|---|\n");
        for cp in &self.cps {
            let pcts: Vec<String> = cp
                .labels
                .iter()
                .zip(&cp.percentages)
                .map(|(l, p)| format!("{} {:.1}%", label_word(l), p * 100.0))
                .collect();
            out.push_str(&format!("| {} | {} |\n", cp.name, pcts.join(", ")));
        }
        out.push_str(&format!("\nTicks: {}\n", self.stats.ticks));
        out
    }
}

/// Builds the six-sentence profile from accumulated sigmas. All six
/// perceptions must be present; a perception that never fired gets its
/// case-4 sentence and a no-data marker.
pub fn generate_profile(
    sigmas: &BTreeMap<String, SigmaCp>,
    subject_id: &str,
    templates: &TemplateSet,
    stats: SessionStats,
) -> Result<BehaviorProfile, ReportError> {
    let mut cps = Vec::with_capacity(PROFILE_CP_ORDER.len());
    for name in PROFILE_CP_ORDER {
        let sigma = sigmas
            .get(name)
            .ok_or_else(|| ReportError::MissingCp(name.to_string()))?;
        cps.push(summarize_cp(sigma, templates)?);
    }
    Ok(BehaviorProfile {
        subject_id: subject_id.to_string(),
        cps,
        stats,
    })
}

fn summarize_cp(sigma: &SigmaCp, templates: &TemplateSet) -> Result<CpSummary, ReportError> {
    if sigma.total() <= 0.0 {
        let sentence = realize_sentence(templates, &sigma.cp_name, 4, &[])?;
        return Ok(CpSummary {
            name: sigma.cp_name.clone(),
            labels: sigma.labels.clone(),
            percentages: vec![0.0; sigma.labels.len()],
            case: 4,
            quantifiers: vec![],
            values: vec![],
            sentence,
            no_data: true,
        });
    }
    let p = sigma.percentages()?;
    let selection = select_case(&p);
    let mut quantifiers = Vec::new();
    let mut values = Vec::new();
    let mut bindings = Vec::new();
    for &(idx, pct) in &selection.bindings {
        let q = quantifier(pct)?.word().to_string();
        let v = label_word(&p.labels[idx]);
        quantifiers.push(q.clone());
        values.push(v.clone());
        bindings.push((q, v));
    }
    let sentence = realize_sentence(templates, &sigma.cp_name, selection.case, &bindings)?;
    Ok(CpSummary {
        name: sigma.cp_name.clone(),
        labels: p.labels,
        percentages: p.values,
        case: selection.case,
        quantifiers,
        values,
        sentence,
        no_data: false,
    })
}

/// Convenience wrapper over [`generate_profile`] for a freshly evaluated
/// session.
pub fn profile_from_session(
    session: &SessionResult,
    subject_id: &str,
    templates: &TemplateSet,
) -> Result<BehaviorProfile, ReportError> {
    generate_profile(
        &session.sigmas,
        subject_id,
        templates,
        SessionStats {
            ticks: session.ticks,
            uncovered: session.uncovered.clone(),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(labels: &[&str], values: &[f64]) -> PercentageVector {
        PercentageVector {
            labels: labels.iter().map(|s| s.to_string()).collect(),
            values: values.to_vec(),
        }
    }

    #[test]
    fn case_selection_rules() {
        let s = select_case(&pv(&["w", "b", "c", "p"], &[0.122, 0.709, 0.097, 0.075]));
        assert_eq!(s.case, 1);
        assert_eq!(s.bindings[0].0, 1);

        let s = select_case(&pv(&["a", "b", "c", "d"], &[0.40, 0.35, 0.15, 0.10]));
        assert_eq!(s.case, 3);
        assert_eq!(s.bindings.iter().map(|b| b.0).collect::<Vec<_>>(), vec![0, 1]);

        let s = select_case(&pv(&["a", "b", "c", "d"], &[0.30, 0.25, 0.25, 0.20]));
        assert_eq!(s.case, 4);

        let s = select_case(&pv(&["a", "b"], &[0.6, 0.4]));
        assert_eq!(s.case, 3);

        let s = select_case(&pv(&["a", "b", "c"], &[0.5, 0.3, 0.2]));
        assert_eq!(s.case, 2);
    }

    #[test]
    fn realizes_published_sentences() {
        let t = TemplateSet::default_templates();
        let s = realize_sentence(
            &t,
            "Attitude",
            2,
            &[("several".into(), "brave".into())],
        )
        .unwrap();
        assert_eq!(s, "The bot showed several brave attitudes.");

        let s = realize_sentence(&t, "Situation", 1, &[("many".into(), "safe".into())]).unwrap();
        assert_eq!(s, "Definitely, many situations were safe.");

        let s = realize_sentence(&t, "Attitude", 4, &[]).unwrap();
        assert_eq!(
            s,
            "The bot does not show a particular attitude during the play session."
        );
    }

    #[test]
    fn article_agrees_with_the_label() {
        let t = TemplateSet::default_templates();
        let s = realize_sentence(&t, "Ability", 2, &[("several".into(), "expert".into())]).unwrap();
        assert!(s.contains("an expert"), "{s}");
        let s = realize_sentence(&t, "Ability", 2, &[("several".into(), "dummy".into())]).unwrap();
        assert!(s.contains("a dummy"), "{s}");
    }

    #[test]
    fn binding_arity_is_checked() {
        let t = TemplateSet::default_templates();
        assert!(matches!(
            realize_sentence(&t, "Attitude", 2, &[]),
            Err(ReportError::BindingArity { .. })
        ));
    }

    #[test]
    fn all_zero_sigmas_give_case_four_everywhere() {
        let net = crate::network::CpNetwork::default_network();
        let sigmas: BTreeMap<String, SigmaCp> = net
            .cps()
            .iter()
            .map(|c| (c.name.clone(), SigmaCp::new(&c.name, &c.labels)))
            .collect();
        let t = TemplateSet::default_templates();
        let profile =
            generate_profile(&sigmas, "empty", &t, SessionStats::default()).unwrap();
        assert_eq!(profile.cps.len(), 6);
        for cp in &profile.cps {
            assert_eq!(cp.case, 4);
            assert!(cp.no_data);
            assert!(!cp.sentence.contains('$'));
        }
    }

    #[test]
    fn missing_cp_is_an_error() {
        let t = TemplateSet::default_templates();
        let sigmas = BTreeMap::new();
        assert!(matches!(
            generate_profile(&sigmas, "x", &t, SessionStats::default()),
            Err(ReportError::MissingCp(_))
        ));
    }

    #[test]
    fn label_words_are_lowercased_and_unscored() {
        assert_eq!(label_word("Very_Skilled"), "very skilled");
        assert_eq!(label_word("Brave"), "brave");
    }
}
