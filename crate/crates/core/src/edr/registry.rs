// SPDX-License-Identifier: Apache-2.0

use super::{Branciard, EdrError, Heisenberg, Ozawa, StrongBranciard, UncertaintyRelation};

/// Ordered, name-keyed collection of relations.
pub struct RelationRegistry {
    entries: Vec<Box<dyn UncertaintyRelation>>,
}

impl RelationRegistry {
    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    pub fn register(&mut self, relation: Box<dyn UncertaintyRelation>) -> Result<(), EdrError> {
        if self.get(relation.name()).is_some() {
            return Err(EdrError::DuplicateRelation(relation.name().to_string()));
        }
        self.entries.push(relation);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&dyn UncertaintyRelation> {
        self.entries
            .iter()
            .find(|r| r.name() == name)
            .map(|r| r.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|r| r.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn UncertaintyRelation> {
        self.entries.iter().map(|r| r.as_ref())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// A registry holding the named default relations, in the given order.
    pub fn select<S: AsRef<str>>(names: &[S]) -> Result<Self, EdrError> {
        let mut out = Self::empty();
        for name in names {
            let name = name.as_ref();
            out.register(default_relation(name).ok_or_else(|| EdrError::UnknownRelation(name.into()))?)?;
        }
        Ok(out)
    }
}

fn default_relation(name: &str) -> Option<Box<dyn UncertaintyRelation>> {
    Some(match name {
        "heisenberg" => Box::new(Heisenberg),
        "ozawa" => Box::new(Ozawa),
        "branciard" => Box::new(Branciard),
        "strong_branciard" => Box::new(StrongBranciard),
        _ => return None,
    })
}

impl Default for RelationRegistry {
    fn default() -> Self {
        Self::select(&["heisenberg", "ozawa", "branciard", "strong_branciard"])
            .expect("built-in relations")
    }
}

impl std::fmt::Debug for RelationRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}
