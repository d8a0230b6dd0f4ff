use std::fmt;
use std::sync::Arc;

use crate::{CiError, Result};

/// Bitmask over the variables of a ground set (bit `i` = variable `i`).
pub type VarSet = u32;

pub const MAX_GROUND: usize = 12;

/// Ordered list of distinct variable labels. Variable `i` is `names[i]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroundSet {
    names: Vec<String>,
}

fn valid_label(s: &str) -> bool {
    !s.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '|' | '#' | ',' | ';' | ':' | '='))
        && s != "-"
}

impl GroundSet {
    pub fn new<I, S>(names: I) -> Result<GroundSet>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_GROUND {
            return Err(CiError::GroundTooLarge(names.len()));
        }
        for (k, n) in names.iter().enumerate() {
            if !valid_label(n) {
                return Err(CiError::InvalidLabel(n.clone()));
            }
            if names[..k].contains(n) {
                return Err(CiError::DuplicateLabel(n.clone()));
            }
        }
        Ok(GroundSet { names })
    }

    /// Ground set `a, b, c, ...` of size `n`.
    pub fn standard(n: usize) -> GroundSet {
        assert!(n <= MAX_GROUND);
        GroundSet {
            names: (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect(),
        }
    }

    pub fn shared(self) -> Arc<GroundSet> {
        Arc::new(self)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn all(&self) -> VarSet {
        ((1u64 << self.len()) - 1) as VarSet
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.names.iter().position(|n| n == label)
    }

    pub fn var(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| CiError::UnknownVariable(label.to_string()))
    }

    pub fn set_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<VarSet> {
        labels
            .iter()
            .try_fold(0, |m, l| Ok(m | 1 << self.var(l.as_ref())?))
    }

    /// Parses a variable set written as labels separated by commas or
    /// whitespace, `-` or the empty string for ∅. When every label is a single
    /// character, concatenation such as `bd` is accepted too.
    pub fn parse_set(&self, text: &str) -> Result<VarSet> {
        let t = text.trim();
        if t.is_empty() || t == "-" {
            return Ok(0);
        }
        let parts: Vec<&str> = t
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .collect();
        if parts.len() == 1 && self.index_of(parts[0]).is_none() {
            let single = self.names.iter().all(|n| n.chars().count() == 1);
            if single {
                let chars: Vec<String> = parts[0].chars().map(String::from).collect();
                return self.set_of(&chars);
            }
        }
        self.set_of(&parts)
    }

    pub fn labels_of(&self, set: VarSet) -> Vec<&str> {
        (0..self.len())
            .filter(|&i| set >> i & 1 == 1)
            .map(|i| self.names[i].as_str())
            .collect()
    }

    /// Compact rendering: labels concatenated when all are single characters,
    /// comma-separated otherwise; `∅` is rendered as `-`.
    pub fn format_set(&self, set: VarSet) -> String {
        let labels = self.labels_of(set);
        if labels.is_empty() {
            return "-".into();
        }
        if labels.iter().all(|l| l.chars().count() == 1) {
            labels.concat()
        } else {
            labels.join(",")
        }
    }

    /// The ground set restricted to `set`, labels in the original order.
    pub fn restrict(&self, set: VarSet) -> GroundSet {
        GroundSet {
            names: self.labels_of(set).into_iter().map(String::from).collect(),
        }
    }

    /// `base` followed by as many primes as needed to avoid every label in
    /// `taken`.
    pub fn fresh_label(base: &str, taken: &[String]) -> String {
        let mut s = format!("{base}'");
        while taken.contains(&s) {
            s.push('\'');
        }
        s
    }

    /// Appends labels, failing on collisions.
    pub fn extended<I, S>(&self, extra: I) -> Result<GroundSet>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        GroundSet::new(
            self.names
                .iter()
                .cloned()
                .chain(extra.into_iter().map(Into::into)),
        )
    }

    pub fn is_subset_of(&self, other: &GroundSet) -> bool {
        self.names.iter().all(|n| other.index_of(n).is_some())
    }
}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroundSet({})", self.names.join(" "))
    }
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.names.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_labels() {
        assert!(matches!(GroundSet::new(["a", "a"]), Err(CiError::DuplicateLabel(_))));
        assert!(matches!(GroundSet::new(["a b"]), Err(CiError::InvalidLabel(_))));
        assert!(matches!(GroundSet::new([""]), Err(CiError::InvalidLabel(_))));
        assert!(GroundSet::new((0..13).map(|i| format!("x{i}"))).is_err());
    }

    #[test]
    fn set_parsing() {
        let g = GroundSet::standard(4);
        assert_eq!(g.parse_set("b,d").unwrap(), 0b1010);
        assert_eq!(g.parse_set("bd").unwrap(), 0b1010);
        assert_eq!(g.parse_set("-").unwrap(), 0);
        assert_eq!(g.format_set(0b1010), "bd");
        assert!(g.parse_set("bz").is_err());
        let h = GroundSet::new(["x1", "x2"]).unwrap();
        assert_eq!(h.parse_set("x1 x2").unwrap(), 3);
        assert_eq!(h.format_set(3), "x1,x2");
    }

    #[test]
    fn fresh_labels() {
        let taken = vec!["a".to_string(), "a'".to_string()];
        assert_eq!(GroundSet::fresh_label("a", &taken), "a''");
        assert_eq!(GroundSet::fresh_label("b", &taken), "b'");
    }
}
