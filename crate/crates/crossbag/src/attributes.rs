//! Column role specifications for tabular input.
//!
//! An attribute string assigns one role per input column: `n` name, `t` time,
//! `c` class label, `r` remove, `0` text, and digits `1`-`9` a numeric feature
//! class. A bracketed repetition `X[m]` expands to `m` copies of role `X`,
//! so `nt1[3]` reads as name, time, then three columns of feature class 1.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnRole {
    Name,
    Time,
    Label,
    Remove,
    Text,
    /// Numeric feature class 1..=9. All columns of one class form one vector.
    Numeric(u8),
}

impl ColumnRole {
    fn from_char(c: char) -> Option<ColumnRole> {
        match c {
            'n' => Some(ColumnRole::Name),
            't' => Some(ColumnRole::Time),
            'c' => Some(ColumnRole::Label),
            'r' => Some(ColumnRole::Remove),
            '0' => Some(ColumnRole::Text),
            '1'..='9' => Some(ColumnRole::Numeric(c as u8 - b'0')),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeSpec {
    roles: Vec<ColumnRole>,
}

impl AttributeSpec {
    /// Build a spec from explicit roles, enforcing the structural invariants:
    /// at most one name, time, and label column, and at least one text or
    /// numeric column.
    pub fn new(roles: Vec<ColumnRole>) -> Result<AttributeSpec> {
        let count = |r: ColumnRole| roles.iter().filter(|&&x| x == r).count();
        if count(ColumnRole::Name) > 1 {
            return Err(Error::data("attribute spec declares more than one name column"));
        }
        if count(ColumnRole::Time) > 1 {
            return Err(Error::data("attribute spec declares more than one time column"));
        }
        if count(ColumnRole::Label) > 1 {
            return Err(Error::data("attribute spec declares more than one label column"));
        }
        let has_features = roles
            .iter()
            .any(|r| matches!(r, ColumnRole::Text | ColumnRole::Numeric(_)));
        if !has_features {
            return Err(Error::data(
                "attribute spec declares no text or numeric feature column",
            ));
        }
        Ok(AttributeSpec { roles })
    }

    /// Parse an attribute string such as `ncr0` or `nt1[3]`.
    pub fn parse(spec: &str) -> Result<AttributeSpec> {
        if spec.is_empty() {
            return Err(Error::data("attribute spec is empty"));
        }
        let chars: Vec<char> = spec.chars().collect();
        let mut roles = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let role = ColumnRole::from_char(c).ok_or_else(|| {
                Error::data(format!(
                    "attribute spec: unknown character '{c}' at position {}",
                    i + 1
                ))
            })?;
            i += 1;
            let mut repeat = 1usize;
            if i < chars.len() && chars[i] == '[' {
                let close = chars[i..].iter().position(|&c| c == ']').ok_or_else(|| {
                    Error::data(format!(
                        "attribute spec: unclosed '[' at position {}",
                        i + 1
                    ))
                })?;
                let digits: String = chars[i + 1..i + close].iter().collect();
                repeat = digits.parse().map_err(|_| {
                    Error::data(format!(
                        "attribute spec: invalid repetition count '{digits}' at position {}",
                        i + 2
                    ))
                })?;
                if repeat == 0 {
                    return Err(Error::data(format!(
                        "attribute spec: repetition count must be positive at position {}",
                        i + 2
                    )));
                }
                i += close + 1;
            }
            roles.extend(std::iter::repeat_n(role, repeat));
        }
        AttributeSpec::new(roles)
    }

    /// Default layout when no spec is given: first column name, second time,
    /// every remaining column numeric feature class 1. This matches the usual
    /// frame-level descriptor CSV layout (`name;frameTime;feat...`).
    pub fn default_for_columns(column_count: usize) -> Result<AttributeSpec> {
        if column_count < 3 {
            return Err(Error::data(format!(
                "input has {column_count} columns; the default attribute layout \
                 (name;time;features...) needs at least 3 — use -attributes"
            )));
        }
        let mut roles = vec![ColumnRole::Name, ColumnRole::Time];
        roles.extend(std::iter::repeat_n(ColumnRole::Numeric(1), column_count - 2));
        AttributeSpec::new(roles)
    }

    pub fn roles(&self) -> &[ColumnRole] {
        &self.roles
    }

    pub fn column_count(&self) -> usize {
        self.roles.len()
    }

    pub fn has_name(&self) -> bool {
        self.roles.contains(&ColumnRole::Name)
    }

    pub fn has_time(&self) -> bool {
        self.roles.contains(&ColumnRole::Time)
    }

    pub fn has_label(&self) -> bool {
        self.roles.contains(&ColumnRole::Label)
    }

    pub fn has_text(&self) -> bool {
        self.roles.contains(&ColumnRole::Text)
    }

    /// Numeric feature classes in ascending order.
    pub fn numeric_classes(&self) -> Vec<u8> {
        let mut classes: Vec<u8> = self
            .roles
            .iter()
            .filter_map(|r| match r {
                ColumnRole::Numeric(k) => Some(*k),
                _ => None,
            })
            .collect();
        classes.sort_unstable();
        classes.dedup();
        classes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ncr0() {
        let spec = AttributeSpec::parse("ncr0").unwrap();
        assert_eq!(
            spec.roles(),
            &[
                ColumnRole::Name,
                ColumnRole::Label,
                ColumnRole::Remove,
                ColumnRole::Text
            ]
        );
    }

    #[test]
    fn empty_spec_rejected() {
        assert!(AttributeSpec::parse("").is_err());
    }

    #[test]
    fn repetition_expands() {
        let spec = AttributeSpec::parse("nt1[3]").unwrap();
        assert_eq!(
            spec.roles(),
            &[
                ColumnRole::Name,
                ColumnRole::Time,
                ColumnRole::Numeric(1),
                ColumnRole::Numeric(1),
                ColumnRole::Numeric(1)
            ]
        );
    }

    #[test]
    fn unknown_character_names_position() {
        let err = AttributeSpec::parse("nx1").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("'x'"), "{msg}");
        assert!(msg.contains("position 2"), "{msg}");
    }

    #[test]
    fn duplicate_name_rejected() {
        assert!(AttributeSpec::parse("nn1").is_err());
    }

    #[test]
    fn duplicate_time_and_label_rejected() {
        assert!(AttributeSpec::parse("tt1").is_err());
        assert!(AttributeSpec::parse("cc1").is_err());
    }

    #[test]
    fn requires_a_feature_column() {
        assert!(AttributeSpec::parse("ntc").is_err());
        assert!(AttributeSpec::parse("r").is_err());
    }

    #[test]
    fn multi_digit_repetition() {
        let spec = AttributeSpec::parse("n1[12]").unwrap();
        assert_eq!(spec.column_count(), 13);
    }

    #[test]
    fn unclosed_bracket_rejected() {
        assert!(AttributeSpec::parse("n1[3").is_err());
        assert!(AttributeSpec::parse("n1[]").is_err());
        assert!(AttributeSpec::parse("n1[0]").is_err());
    }

    #[test]
    fn default_layout() {
        let spec = AttributeSpec::default_for_columns(15).unwrap();
        assert_eq!(spec.column_count(), 15);
        assert!(spec.has_name() && spec.has_time());
        assert_eq!(spec.numeric_classes(), vec![1]);
        assert!(AttributeSpec::default_for_columns(2).is_err());
    }

    #[test]
    fn numeric_classes_sorted_and_deduped() {
        let spec = AttributeSpec::parse("n212").unwrap();
        assert_eq!(spec.numeric_classes(), vec![1, 2]);
    }
}
