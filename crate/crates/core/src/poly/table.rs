//! Named formal variables shared by polynomials and series.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VarKind {
    Holomorphic,
    Conjugate,
    MapSymbol,
    DerivativeSymbol,
    Parameter,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    /// Index of the formal conjugate partner, if any. Symmetric.
    pub partner: Option<usize>,
}

/// Ordered variable alphabet. Index order is the monomial order used for
/// printing (graded lex, earlier variables more significant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableTable {
    vars: Vec<Variable>,
    index: HashMap<String, usize>,
}

pub type Table = Arc<VariableTable>;

impl VariableTable {
    pub fn builder() -> TableBuilder {
        TableBuilder::default()
    }

    /// Plain table of parameters (no conjugates).
    pub fn plain<S: AsRef<str>>(names: &[S]) -> Table {
        let mut b = Self::builder();
        for n in names {
            b = b.var(n.as_ref(), VarKind::Parameter);
        }
        b.build().expect("plain table with duplicate names")
    }

    /// `z1..zn, zb1..zbn` with the natural pairing.
    pub fn complex(n: usize) -> Table {
        Self::complex_named(n, "z", "zb")
    }

    pub fn complex_named(n: usize, hol: &str, conj: &str) -> Table {
        let mut b = Self::builder();
        for i in 1..=n {
            b = b.var(&format!("{hol}{i}"), VarKind::Holomorphic);
        }
        for i in 1..=n {
            b = b.conjugate(&format!("{conj}{i}"), &format!("{hol}{i}"));
        }
        b.build().expect("complex table")
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn var(&self, i: usize) -> &Variable {
        &self.vars[i]
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vars[i].name
    }

    pub fn names(&self) -> Vec<String> {
        self.vars.iter().map(|v| v.name.clone()).collect()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.position(name)
            .ok_or_else(|| Error::MalformedTable(format!("no variable named `{name}`")))
    }

    pub fn partner(&self, i: usize) -> Option<usize> {
        self.vars[i].partner
    }

    /// New table keeping only the listed variables (in the given order).
    /// Pairings survive only when both partners are kept.
    pub fn subset(&self, keep: &[usize]) -> Table {
        let mut b = Self::builder();
        for &i in keep {
            let v = &self.vars[i];
            b = b.var(&v.name, v.kind);
        }
        let mut t = b.build().expect("subset of a valid table");
        let tm = Arc::get_mut(&mut t).expect("fresh table");
        for (new_i, &old_i) in keep.iter().enumerate() {
            if let Some(p) = self.vars[old_i].partner {
                if let Some(new_p) = keep.iter().position(|&k| k == p) {
                    tm.vars[new_i].partner = Some(new_p);
                }
            }
        }
        t
    }

    /// Index map from `self` into `other`, by name. Fails on a missing name.
    pub fn map_into(&self, other: &VariableTable) -> Result<Vec<usize>> {
        self.vars
            .iter()
            .map(|v| {
                other.position(&v.name).ok_or_else(|| {
                    Error::TableMismatch(format!("variable `{}` missing from target table", v.name))
                })
            })
            .collect()
    }
}

#[derive(Default)]
pub struct TableBuilder {
    vars: Vec<Variable>,
    pairs: Vec<(String, String)>,
}

impl TableBuilder {
    pub fn var(mut self, name: &str, kind: VarKind) -> Self {
        self.vars.push(Variable { name: name.to_string(), kind, partner: None });
        self
    }

    /// Adds a conjugate variable paired with an already-added (or later-added) partner.
    pub fn conjugate(mut self, name: &str, partner: &str) -> Self {
        self.vars.push(Variable { name: name.to_string(), kind: VarKind::Conjugate, partner: None });
        self.pairs.push((name.to_string(), partner.to_string()));
        self
    }

    pub fn build(self) -> Result<Table> {
        let mut index = HashMap::new();
        for (i, v) in self.vars.iter().enumerate() {
            if v.name.is_empty() {
                return Err(Error::MalformedTable("empty variable name".into()));
            }
            if index.insert(v.name.clone(), i).is_some() {
                return Err(Error::MalformedTable(format!("duplicate variable `{}`", v.name)));
            }
        }
        let mut vars = self.vars;
        for (c, p) in &self.pairs {
            let ci = index[c];
            let pi = *index
                .get(p)
                .ok_or_else(|| Error::MalformedTable(format!("conjugate `{c}` has no partner `{p}`")))?;
            if ci == pi || vars[pi].partner.is_some() || vars[ci].partner.is_some() {
                return Err(Error::MalformedTable(format!("bad pairing `{c}` <-> `{p}`")));
            }
            vars[ci].partner = Some(pi);
            vars[pi].partner = Some(ci);
        }
        Ok(Arc::new(VariableTable { vars, index }))
    }
}

pub fn same_table(a: &Table, b: &Table) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
