//! Labeling rules: eight deterministic matchers that suggest, never assign,
//! a spam label. Suggestions are advisory because the final call in corpus
//! curation is manual.

use super::SmsRecord;
use regex::Regex;
use std::collections::BTreeSet;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    Rule1,
    Rule2,
    Rule3,
    Rule4,
    Rule5,
    Rule6,
    Rule7,
    Rule8,
}

impl RuleId {
    pub const ALL: [RuleId; 8] = [
        RuleId::Rule1,
        RuleId::Rule2,
        RuleId::Rule3,
        RuleId::Rule4,
        RuleId::Rule5,
        RuleId::Rule6,
        RuleId::Rule7,
        RuleId::Rule8,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::Rule1 => "rule1",
            RuleId::Rule2 => "rule2",
            RuleId::Rule3 => "rule3",
            RuleId::Rule4 => "rule4",
            RuleId::Rule5 => "rule5",
            RuleId::Rule6 => "rule6",
            RuleId::Rule7 => "rule7",
            RuleId::Rule8 => "rule8",
        }
    }
}

/// One advisory labeling rule. A rule fires when any of its whole-word
/// lexemes, normalized phrases, or regex pattern matches.
pub struct LabelingRule {
    pub id: RuleId,
    pub description: &'static str,
    words: &'static [&'static str],
    phrases: &'static [&'static str],
    pattern: Option<&'static Regex>,
}

impl LabelingRule {
    fn matches(&self, raw: &str, normalized: &str, tokens: &BTreeSet<String>) -> bool {
        if self.words.iter().any(|w| tokens.contains(*w)) {
            return true;
        }
        if self.phrases.iter().any(|p| normalized.contains(p)) {
            return true;
        }
        if let Some(pattern) = self.pattern {
            if pattern.is_match(raw) {
                return true;
            }
        }
        false
    }
}

fn url_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"(?i)(?:https?://|www\.)\S+|\b[a-z0-9-]+\.(?:com|net|org|info|io|co|uk|au|biz|xyz)\b")
            .expect("valid url pattern")
    })
}

fn email_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"(?i)\b[a-z0-9._%+-]+@[a-z0-9.-]+\.[a-z]{2,}\b").expect("valid email pattern")
    })
}

fn phone_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    // At least seven digits allowing spaces, dots, dashes, parentheses.
    RE.get_or_init(|| Regex::new(r"\+?\d(?:[\s().-]?\d){6,}").expect("valid phone pattern"))
}

/// The eight bundled rules, in order.
pub fn default_rules() -> Vec<LabelingRule> {
    vec![
        LabelingRule {
            id: RuleId::Rule1,
            description: "Promotional or advertising content",
            words: &[
                "free", "offer", "offers", "win", "won", "winner", "prize", "prizes",
                "discount", "sale", "promo", "promotion", "congratulations", "bonus",
                "voucher", "exclusive", "subscribe", "jackpot",
            ],
            phrases: &["limited time", "special deal"],
            pattern: None,
        },
        LabelingRule {
            id: RuleId::Rule2,
            description: "Contains a link to visit or tap",
            words: &[],
            phrases: &[],
            pattern: Some(url_pattern()),
        },
        LabelingRule {
            id: RuleId::Rule3,
            description: "Asks for contact by email",
            words: &[],
            phrases: &[],
            pattern: Some(email_pattern()),
        },
        LabelingRule {
            id: RuleId::Rule4,
            description: "Asks to call back a contact number",
            words: &[],
            phrases: &[],
            pattern: Some(phone_pattern()),
        },
        LabelingRule {
            id: RuleId::Rule5,
            description: "Asks for personal or sensitive information",
            words: &["password", "passcode", "pin", "ssn", "cvv", "login", "username"],
            phrases: &[
                "bank details",
                "account number",
                "card number",
                "personal details",
                "social security",
                "date of birth",
                "verify your identity",
                "security code",
            ],
            pattern: None,
        },
        LabelingRule {
            id: RuleId::Rule6,
            description: "Requests or references a payment",
            words: &[
                "payment", "pay", "paid", "cash", "fee", "fees", "invoice", "refund",
                "deposit", "transfer", "money", "billing",
            ],
            phrases: &[],
            pattern: None,
        },
        LabelingRule {
            id: RuleId::Rule7,
            description: "Asks to forward or circulate the message",
            words: &["circulate"],
            phrases: &[
                "forward this",
                "forward the message",
                "please forward",
                "share this",
                "send this to",
                "pass this on",
            ],
            pattern: None,
        },
        LabelingRule {
            id: RuleId::Rule8,
            description: "Asks to download or install a file",
            words: &["download", "install", "apk"],
            phrases: &[],
            pattern: None,
        },
    ]
}

/// All rules whose matcher fires on the record text. Advisory only; never
/// touches `record.label`.
pub fn suggest_labels(record: &SmsRecord, rules: &[LabelingRule]) -> BTreeSet<RuleId> {
    let normalized = normalize(&record.text);
    let tokens: BTreeSet<String> = normalized.split_whitespace().map(str::to_string).collect();
    rules
        .iter()
        .filter(|rule| rule.matches(&record.text, &normalized, &tokens))
        .map(|rule| rule.id)
        .collect()
}

/// Lowercase with every non-alphanumeric run collapsed to a single space.
fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut last_space = true;
    for c in text.to_lowercase().chars() {
        if c.is_alphanumeric() {
            out.push(c);
            last_space = false;
        } else if !last_space {
            out.push(' ');
            last_space = true;
        }
    }
    if out.ends_with(' ') {
        out.pop();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Label;

    fn suggest(text: &str) -> BTreeSet<RuleId> {
        let record = SmsRecord::new("t", text, Label::Unlabeled, "t");
        suggest_labels(&record, &default_rules())
    }

    #[test]
    fn there_are_exactly_eight_rules() {
        assert_eq!(default_rules().len(), 8);
        let ids: BTreeSet<RuleId> = default_rules().iter().map(|r| r.id).collect();
        assert_eq!(ids.len(), 8);
    }

    #[test]
    fn url_fires_rule2_only() {
        assert_eq!(suggest("Click https://xxx.info/covid/"), BTreeSet::from([RuleId::Rule2]));
    }

    #[test]
    fn phone_and_payment_fire_together() {
        assert_eq!(
            suggest("call me back on 0400 000 000 to claim your payment"),
            BTreeSet::from([RuleId::Rule4, RuleId::Rule6])
        );
    }

    #[test]
    fn plain_chat_fires_nothing() {
        assert_eq!(suggest("see you at dinner tonight"), BTreeSet::new());
    }

    #[test]
    fn email_fires_rule3() {
        let fired = suggest("please email support@example.com to update your details");
        assert!(fired.contains(&RuleId::Rule3));
    }

    #[test]
    fn short_numbers_do_not_fire_the_phone_rule() {
        assert!(!suggest("you may get a $750 payment").contains(&RuleId::Rule4));
        assert!(suggest("txt WIN to 82277 now").contains(&RuleId::Rule1));
    }

    #[test]
    fn download_and_forward_rules() {
        assert!(suggest("download the new app today").contains(&RuleId::Rule8));
        assert!(suggest("please forward this to ten friends").contains(&RuleId::Rule7));
    }

    #[test]
    fn suggestions_are_pure() {
        let record = SmsRecord::new("t", "WIN a FREE prize, call 0800 123 456", Label::Unlabeled, "t");
        let rules = default_rules();
        let a = suggest_labels(&record, &rules);
        let b = suggest_labels(&record, &rules);
        assert_eq!(a, b);
        assert_eq!(record.label, Label::Unlabeled);
    }
}
