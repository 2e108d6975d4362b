use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Name of the Nagata indeterminate.
pub const NAGATA_VAR: &str = "t";

/// Chart variables are named `y1..yn`; user variables may not look like that.
pub const CHART_PREFIX: char = 'y';

/// Ordered list of distinct variable names shared by all polynomials of a ring.
///
/// `t`, when present, is always the last variable. Names beginning with `_`
/// are reserved for auxiliary variables introduced by the ideal engine and
/// can never come out of the parser.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarTable {
    names: Vec<String>,
}

impl fmt::Debug for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(", "))
    }
}

impl fmt::Display for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[{}]", self.names.join(","))
    }
}

pub fn is_chart_name(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next() == Some(CHART_PREFIX)
        && chars.next().is_some_and(|c| c.is_ascii_digit())
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

fn is_aux(name: &str) -> bool {
    name.len() > 1 && name.starts_with('_') && is_identifier(&name[1..])
}

impl VarTable {
    /// Table for a user-declared ground ring. Rejects reserved chart names;
    /// `t` is allowed only in last position.
    pub fn user<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>> {
        for n in names {
            let n = n.as_ref();
            if !is_identifier(n) {
                return Err(Error::usage(format!("`{n}` is not a valid variable name")));
            }
            if is_chart_name(n) {
                return Err(Error::usage(format!(
                    "`{n}` collides with the reserved chart-variable prefix"
                )));
            }
        }
        Self::new(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    /// Unchecked-prefix constructor used for chart and auxiliary tables.
    pub fn new(names: Vec<String>) -> Result<Arc<Self>> {
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) && !is_aux(n) {
                return Err(Error::usage(format!("`{n}` is not a valid variable name")));
            }
            if names[..i].contains(n) {
                return Err(Error::usage(format!("duplicate variable `{n}`")));
            }
            if n == NAGATA_VAR && i + 1 != names.len() {
                return Err(Error::usage("the Nagata variable `t` must be the last variable"));
            }
        }
        Ok(Arc::new(VarTable { names }))
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

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn t_index(&self) -> Option<usize> {
        match self.names.last() {
            Some(n) if n == NAGATA_VAR => Some(self.names.len() - 1),
            _ => None,
        }
    }

    pub fn has_t(&self) -> bool {
        self.t_index().is_some()
    }

    /// Same table with `t` appended if it is missing.
    pub fn with_t(self: &Arc<Self>) -> Arc<Self> {
        if self.has_t() {
            return self.clone();
        }
        let mut names = self.names.clone();
        names.push(NAGATA_VAR.to_string());
        Arc::new(VarTable { names })
    }

    /// Same table with `t` removed if present.
    pub fn without_t(self: &Arc<Self>) -> Arc<Self> {
        if !self.has_t() {
            return self.clone();
        }
        let mut names = self.names.clone();
        names.pop();
        Arc::new(VarTable { names })
    }

    /// Prepend auxiliary variables `_name`; they are the first (largest) variables.
    pub fn with_aux(&self, aux: &[&str]) -> Arc<Self> {
        let mut names: Vec<String> = aux.iter().map(|a| format!("_{a}")).collect();
        for n in &names {
            assert!(!self.names.contains(n), "auxiliary variable {n} already present");
        }
        names.extend(self.names.iter().cloned());
        Arc::new(VarTable { names })
    }
}

pub(crate) fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
