//! Profile similarity and the final 1–7 grade.
//!
//! Two behavior profiles are compared per perception by averaging the
//! restricted equivalence `g(p_i, q_i) = 1 - |p_i - q_i|` over the label
//! percentages. The final grade adds the six per-perception similarities to
//! a minimum score.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fuzzy::{ref_g, FuzzyError};
use crate::network::PercentageVector;
use crate::report::{BehaviorProfile, PROFILE_CP_ORDER};

#[derive(Debug, Error)]
pub enum CompareError {
    #[error("profiles disagree on `{cp}`: labels {left:?} vs {right:?}")]
    LabelMismatch {
        cp: String,
        left: Vec<String>,
        right: Vec<String>,
    },
    #[error("profile `{subject}` is missing perception `{cp}`")]
    MissingCp { subject: String, cp: String },
    #[error("perception `{cp}`: percentages sum to {sum}, expected 1")]
    NotNormalized { cp: String, sum: f64 },
    #[error("perception `{cp}`: {labels} labels but {values} percentages")]
    LengthMismatch {
        cp: String,
        labels: usize,
        values: usize,
    },
    #[error("grade scale [{min}, {max}] cannot hold g_min {g_min} plus six similarities")]
    BadGradeConfig { g_min: f64, min: f64, max: f64 },
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error("profile is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelRef {
    pub label: String,
    #[serde(rename = "ref")]
    pub ref_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CpSimilarity {
    pub name: String,
    pub similarity: f64,
    pub per_label_ref: Vec<LabelRef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityBreakdown {
    pub per_cp: Vec<CpSimilarity>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradeConfig {
    pub g_min: f64,
    pub scale_min: f64,
    pub scale_max: f64,
}

impl Default for GradeConfig {
    fn default() -> Self {
        Self {
            g_min: 1.0,
            scale_min: 1.0,
            scale_max: 7.0,
        }
    }
}

impl GradeConfig {
    pub fn validate(&self) -> Result<(), CompareError> {
        if self.g_min + 6.0 <= self.scale_max + 1e-12 {
            Ok(())
        } else {
            Err(CompareError::BadGradeConfig {
                g_min: self.g_min,
                min: self.scale_min,
                max: self.scale_max,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grade {
    pub fg: f64,
    /// `fg` rounded half-up to one decimal, for display.
    pub rounded: f64,
    pub per_cp: Vec<CpSimilarity>,
}

/// Mean restricted equivalence over the labels of two percentage vectors of
/// the same perception.
pub fn s_ref(p: &PercentageVector, q: &PercentageVector) -> Result<f64, CompareError> {
    if p.labels != q.labels {
        return Err(CompareError::LabelMismatch {
            cp: String::new(),
            left: p.labels.clone(),
            right: q.labels.clone(),
        });
    }
    let refs = per_label_refs(p, q)?;
    Ok(refs.iter().map(|r| r.ref_value).sum::<f64>() / refs.len() as f64)
}

fn per_label_refs(
    p: &PercentageVector,
    q: &PercentageVector,
) -> Result<Vec<LabelRef>, CompareError> {
    p.labels
        .iter()
        .zip(p.values.iter().zip(&q.values))
        .map(|(label, (&pv, &qv))| {
            Ok(LabelRef {
                label: label.clone(),
                ref_value: ref_g(pv, qv)?,
            })
        })
        .collect()
}

fn percentage_vector_of(
    profile: &BehaviorProfile,
    cp: &str,
) -> Result<PercentageVector, CompareError> {
    let summary = profile.cp(cp).ok_or_else(|| CompareError::MissingCp {
        subject: profile.subject_id.clone(),
        cp: cp.to_string(),
    })?;
    Ok(PercentageVector {
        labels: summary.labels.clone(),
        values: summary.percentages.clone(),
    })
}

/// Per-perception similarities between two profiles, in report order.
pub fn similarity_breakdown(
    a: &BehaviorProfile,
    b: &BehaviorProfile,
) -> Result<SimilarityBreakdown, CompareError> {
    let mut per_cp = Vec::with_capacity(PROFILE_CP_ORDER.len());
    for cp in PROFILE_CP_ORDER {
        let p = percentage_vector_of(a, cp)?;
        let q = percentage_vector_of(b, cp)?;
        if p.labels != q.labels {
            return Err(CompareError::LabelMismatch {
                cp: cp.to_string(),
                left: p.labels,
                right: q.labels,
            });
        }
        let per_label_ref = per_label_refs(&p, &q)?;
        let similarity =
            per_label_ref.iter().map(|r| r.ref_value).sum::<f64>() / per_label_ref.len() as f64;
        per_cp.push(CpSimilarity {
            name: cp.to_string(),
            similarity,
            per_label_ref,
        });
    }
    Ok(SimilarityBreakdown { per_cp })
}

/// `FG = g_min + Σ` of the six per-perception similarities.
pub fn final_grade(
    human: &BehaviorProfile,
    bot: &BehaviorProfile,
    cfg: &GradeConfig,
) -> Result<Grade, CompareError> {
    cfg.validate()?;
    let breakdown = similarity_breakdown(human, bot)?;
    let fg = cfg.g_min + breakdown.per_cp.iter().map(|c| c.similarity).sum::<f64>();
    Ok(Grade {
        fg,
        rounded: (fg * 10.0).round() / 10.0,
        per_cp: breakdown.per_cp,
    })
}

/// Loads a profile in the report JSON schema for use as a comparison
/// baseline. Percentage vectors must sum to 1 within ±0.01 (stored fixtures
/// may be rounded) and are renormalized exactly.
pub fn load_reference_profile(json: &str) -> Result<BehaviorProfile, CompareError> {
    let mut profile: BehaviorProfile = serde_json::from_str(json)?;
    for cp in PROFILE_CP_ORDER {
        if profile.cp(cp).is_none() {
            return Err(CompareError::MissingCp {
                subject: profile.subject_id.clone(),
                cp: cp.to_string(),
            });
        }
    }
    for summary in &mut profile.cps {
        if summary.labels.len() != summary.percentages.len() {
            return Err(CompareError::LengthMismatch {
                cp: summary.name.clone(),
                labels: summary.labels.len(),
                values: summary.percentages.len(),
            });
        }
        if summary.no_data {
            continue;
        }
        let sum: f64 = summary.percentages.iter().sum();
        if (sum - 1.0).abs() > 0.01 {
            return Err(CompareError::NotNormalized {
                cp: summary.name.clone(),
                sum,
            });
        }
        // already-normalized vectors are kept bit-for-bit so loading is
        // idempotent
        if (sum - 1.0).abs() > 1e-9 {
            for v in &mut summary.percentages {
                *v /= sum;
            }
        }
    }
    Ok(profile)
}
