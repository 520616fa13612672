//! Tokenization rules and the preprocessing fingerprint.
//!
//! Every token stream and frequency table carries a [`ConfigFingerprint`]
//! derived from the preprocessing that produced it. Merging tables built
//! under different configurations is refused, which keeps corpora from
//! silently mixing incompatible pipelines.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Rules applied when turning raw text into tokens.
///
/// Defaults: case-fold everything, treat apostrophes and hyphens as word
/// characters when flanked by letters on both sides, reject any candidate
/// containing a digit, and NFC-normalize before scanning.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TokenizationRules {
    /// Lowercase every token so case variants collapse to one count.
    pub fold_case: bool,
    /// Keep apostrophes (' and U+2019) that sit between two letters.
    pub allow_apostrophe: bool,
    /// Keep hyphens that sit between two letters.
    pub allow_hyphen: bool,
    /// Apply Unicode canonical composition (NFC) before tokenizing.
    pub nfc_normalize: bool,
}

impl Default for TokenizationRules {
    fn default() -> Self {
        TokenizationRules {
            fold_case: true,
            allow_apostrophe: true,
            allow_hyphen: true,
            nfc_normalize: true,
        }
    }
}

impl TokenizationRules {
    /// Load rules from a TOML file; missing keys fall back to the defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })
    }
}

/// Short stable hash of the preprocessing configuration that produced a
/// stream or table.
///
/// Derived from SHA-256 so it is identical across platforms and runs;
/// content-changing pipeline stages extend it via [`ConfigFingerprint::chain`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfigFingerprint(String);

impl ConfigFingerprint {
    /// Fingerprint of a tokenization rule set.
    pub fn of_rules(rules: &TokenizationRules) -> Self {
        let canonical =
            serde_json::to_string(rules).expect("tokenization rules always serialize");
        Self::from_material("rules", &canonical)
    }

    /// Fingerprint for synthetic streams, keyed by generator parameters.
    pub fn synthetic(label: &str, params: &str) -> Self {
        Self::from_material(label, params)
    }

    /// Extend the fingerprint with a content-changing pipeline stage.
    pub fn chain(&self, stage: &str, detail: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(self.0.as_bytes());
        hasher.update(b"\x1f");
        hasher.update(stage.as_bytes());
        hasher.update(b"\x1f");
        hasher.update(detail.as_bytes());
        let digest = hasher.finalize();
        ConfigFingerprint(hex_prefix(&digest))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn from_material(label: &str, material: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(label.as_bytes());
        hasher.update(b"\x1f");
        hasher.update(material.as_bytes());
        let digest = hasher.finalize();
        ConfigFingerprint(hex_prefix(&digest))
    }
}

impl fmt::Display for ConfigFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn hex_prefix(digest: &[u8]) -> String {
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Hex SHA-256 of a byte slice, used for dictionary/lexicon content hashes
/// and download verification.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_rules_fingerprint_is_stable() {
        let a = ConfigFingerprint::of_rules(&TokenizationRules::default());
        let b = ConfigFingerprint::of_rules(&TokenizationRules::default());
        assert_eq!(a, b);
        assert_eq!(a.as_str().len(), 16);
    }

    #[test]
    fn rule_change_changes_fingerprint() {
        let base = ConfigFingerprint::of_rules(&TokenizationRules::default());
        let other = ConfigFingerprint::of_rules(&TokenizationRules {
            fold_case: false,
            ..TokenizationRules::default()
        });
        assert_ne!(base, other);
    }

    #[test]
    fn chain_depends_on_stage_and_detail() {
        let base = ConfigFingerprint::of_rules(&TokenizationRules::default());
        assert_ne!(base.chain("dict", "a"), base.chain("dict", "b"));
        assert_ne!(base.chain("dict", "a"), base.chain("lemma", "a"));
        assert_eq!(base.chain("dict", "a"), base.chain("dict", "a"));
    }

    #[test]
    fn rules_toml_roundtrip_with_partial_file() {
        let parsed: TokenizationRules = toml::from_str("fold_case = false\n").unwrap();
        assert!(!parsed.fold_case);
        assert!(parsed.allow_hyphen);
    }

    #[test]
    fn rules_load_from_file_and_reject_garbage() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rules.toml");
        std::fs::write(&path, "allow_hyphen = false\nnfc_normalize = true\n").unwrap();
        let rules = TokenizationRules::from_file(&path).unwrap();
        assert!(!rules.allow_hyphen);
        assert!(rules.fold_case);

        std::fs::write(&path, "fold_case = \"maybe\"\n").unwrap();
        assert!(matches!(
            TokenizationRules::from_file(&path).unwrap_err(),
            Error::Parse { .. }
        ));
    }
}
