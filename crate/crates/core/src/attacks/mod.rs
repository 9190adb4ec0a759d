//! Black-box adversarial text perturbations.
//!
//! All six attacks target the spam keywords collected in a [`Thesaurus`]
//! (EDA excepted, which perturbs whole messages at the word level). Results
//! carry an edit list that replays exactly onto the original text, so
//! downstream tooling can verify that nothing outside the matched spans
//! changed.

mod perturb;
mod tables;
mod thesaurus;

pub use perturb::{
    attack_charswap, attack_eda, attack_homograph, attack_hybrid, attack_paraphrase,
    attack_spacing,
};
pub use tables::{HomoglyphTable, LeetTable, SynonymLexicon};
pub use thesaurus::{
    build_thesaurus, match_keywords, KeywordMatch, Thesaurus, DEFAULT_THESAURUS_SIZE,
};

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AttackError {
    #[error("thesaurus requires a spam-only corpus, found {label} record {id}")]
    NonSpamRecord { id: String, label: String },
    #[error("thesaurus source produced no tokens")]
    EmptyTokenStream,
    #[error("attack {kind} requires the {resource} resource")]
    MissingResource {
        kind: &'static str,
        resource: &'static str,
    },
    #[error("eda_rate must be in (0,1], got {0}")]
    InvalidRate(f64),
    #[error("charswap has no enabled operations")]
    NoCharswapOps,
    #[error("{path}:{line}: {reason}")]
    Parse {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// The six attack families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttackKind {
    Paraphrase,
    Eda,
    Homograph,
    Spacing,
    Charswap,
    Hybrid,
}

impl AttackKind {
    /// Column order used by the robustness report tables.
    pub const REPORT_ORDER: [AttackKind; 6] = [
        AttackKind::Paraphrase,
        AttackKind::Eda,
        AttackKind::Homograph,
        AttackKind::Spacing,
        AttackKind::Charswap,
        AttackKind::Hybrid,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AttackKind::Paraphrase => "paraphrase",
            AttackKind::Eda => "eda",
            AttackKind::Homograph => "homograph",
            AttackKind::Spacing => "spacing",
            AttackKind::Charswap => "charswap",
            AttackKind::Hybrid => "hybrid",
        }
    }

    pub fn parse(token: &str) -> Option<Self> {
        match token {
            "paraphrase" | "paraphrasing" => Some(AttackKind::Paraphrase),
            "eda" => Some(AttackKind::Eda),
            "homograph" | "punycode" => Some(AttackKind::Homograph),
            "spacing" => Some(AttackKind::Spacing),
            "charswap" => Some(AttackKind::Charswap),
            "hybrid" => Some(AttackKind::Hybrid),
            _ => None,
        }
    }

    /// Display name matching the report column headers.
    pub fn column_name(self) -> &'static str {
        match self {
            AttackKind::Paraphrase => "Paraphrasing",
            AttackKind::Eda => "EDA",
            AttackKind::Homograph => "Homograph",
            AttackKind::Spacing => "Spacing",
            AttackKind::Charswap => "Charswap",
            AttackKind::Hybrid => "Hybrid",
        }
    }
}

/// Character operations available to the charswap attack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CharswapOp {
    Substitute,
    Delete,
    Insert,
    Swap,
}

impl CharswapOp {
    pub const ALL: [CharswapOp; 4] = [
        CharswapOp::Substitute,
        CharswapOp::Delete,
        CharswapOp::Insert,
        CharswapOp::Swap,
    ];
}

/// Word operations available to the EDA attack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdaOp {
    Delete,
    Swap,
    Replace,
    Insert,
}

impl EdaOp {
    pub const ALL: [EdaOp; 4] = [EdaOp::Delete, EdaOp::Swap, EdaOp::Replace, EdaOp::Insert];
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttackConfig {
    pub kind: AttackKind,
    pub seed: u64,
    /// EDA perturbation rate alpha in (0,1].
    pub eda_rate: f64,
    /// Fixed EDA operation; None draws one per message from the seed.
    pub eda_op: Option<EdaOp>,
    pub charswap_ops: BTreeSet<CharswapOp>,
}

impl AttackConfig {
    pub fn new(kind: AttackKind, seed: u64) -> Self {
        Self {
            kind,
            seed,
            eda_rate: 0.1,
            eda_op: None,
            charswap_ops: CharswapOp::ALL.into_iter().collect(),
        }
    }
}

/// Operation tag recorded on each edit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EditOp {
    Spacing,
    Charswap,
    Homograph,
    Paraphrase,
    Hybrid,
    Eda,
}

/// One replacement of a byte span of the original text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edit {
    /// Byte offset of the span start in the original.
    pub start: usize,
    /// Byte offset one past the span end.
    pub end: usize,
    pub op: EditOp,
    pub replacement: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackResult {
    pub original: String,
    pub perturbed: String,
    /// Non-overlapping, ordered; replaying them onto `original` reproduces
    /// `perturbed` exactly.
    pub edits: Vec<Edit>,
    pub matched_keyword_count: usize,
    /// Matched spans the attack could not change (no mappable characters,
    /// no lexicon entry, span too short).
    pub unperturbable_spans: usize,
}

impl AttackResult {
    pub(crate) fn identity(text: &str, matched: usize, unperturbable: usize) -> Self {
        Self {
            original: text.to_string(),
            perturbed: text.to_string(),
            edits: Vec::new(),
            matched_keyword_count: matched,
            unperturbable_spans: unperturbable,
        }
    }

    /// Apply the edit list to the original text.
    pub fn replay_edits(&self) -> String {
        let mut out = String::with_capacity(self.original.len() + 16);
        let mut cursor = 0;
        for edit in &self.edits {
            assert!(edit.start >= cursor, "edits must be ordered and disjoint");
            out.push_str(&self.original[cursor..edit.start]);
            out.push_str(&edit.replacement);
            cursor = edit.end;
        }
        out.push_str(&self.original[cursor..]);
        out
    }
}

/// Resource bundle for [`apply_attack`]; only what the chosen kind needs has
/// to be present.
#[derive(Debug, Clone, Default)]
pub struct AttackResources {
    pub thesaurus: Option<Thesaurus>,
    pub lexicon: Option<SynonymLexicon>,
    pub homoglyphs: Option<HomoglyphTable>,
    pub leet: Option<LeetTable>,
}

/// Dispatch to the attack selected by `cfg.kind`, checking resources first.
pub fn apply_attack(
    text: &str,
    cfg: &AttackConfig,
    resources: &AttackResources,
) -> Result<AttackResult, AttackError> {
    let kind = cfg.kind.as_str();
    let thesaurus = || {
        resources.thesaurus.as_ref().ok_or(AttackError::MissingResource {
            kind: cfg.kind.as_str(),
            resource: "thesaurus",
        })
    };
    match cfg.kind {
        AttackKind::Spacing => Ok(attack_spacing(text, thesaurus()?)),
        AttackKind::Charswap => attack_charswap(text, thesaurus()?, cfg.seed, &cfg.charswap_ops),
        AttackKind::Homograph => {
            let table = resources.homoglyphs.as_ref().ok_or(AttackError::MissingResource {
                kind,
                resource: "homoglyph table",
            })?;
            Ok(attack_homograph(text, thesaurus()?, table))
        }
        AttackKind::Paraphrase => {
            let lexicon = resources.lexicon.as_ref().ok_or(AttackError::MissingResource {
                kind,
                resource: "synonym lexicon",
            })?;
            Ok(attack_paraphrase(text, thesaurus()?, lexicon))
        }
        AttackKind::Hybrid => {
            let leet = resources.leet.as_ref().ok_or(AttackError::MissingResource {
                kind,
                resource: "leet table",
            })?;
            Ok(attack_hybrid(text, thesaurus()?, leet))
        }
        AttackKind::Eda => attack_eda(text, cfg, resources.lexicon.as_ref()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paraphrase_without_lexicon_is_a_config_error() {
        let thesaurus = Thesaurus::from_ranked(vec![("payment".into(), 3)], 10);
        let resources = AttackResources {
            thesaurus: Some(thesaurus),
            ..Default::default()
        };
        let cfg = AttackConfig::new(AttackKind::Paraphrase, 1);
        assert!(matches!(
            apply_attack("the payment is due", &cfg, &resources),
            Err(AttackError::MissingResource { .. })
        ));
    }

    #[test]
    fn replay_reproduces_perturbed_text() {
        let thesaurus = Thesaurus::from_ranked(
            vec![("payment".into(), 3), ("click".into(), 2)],
            10,
        );
        let resources = AttackResources {
            thesaurus: Some(thesaurus),
            leet: Some(LeetTable::bundled()),
            ..Default::default()
        };
        for kind in [AttackKind::Spacing, AttackKind::Hybrid] {
            let cfg = AttackConfig::new(kind, 7);
            let result =
                apply_attack("Send the Payment now, then Click here", &cfg, &resources).unwrap();
            assert_eq!(result.replay_edits(), result.perturbed);
        }
    }
}
