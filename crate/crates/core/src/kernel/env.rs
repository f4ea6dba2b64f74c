use indexmap::IndexMap;

use super::term::{Name, Term};

#[derive(Clone, Debug, PartialEq)]
pub struct Definition {
    pub ty: Term,
    pub body: Term,
}

/// Checked global definitions in the order they were introduced.
#[derive(Clone, Debug, Default)]
pub struct GlobalEnv {
    defs: IndexMap<Name, Definition>,
}

impl GlobalEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&Definition> {
        self.defs.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.defs.contains_key(name)
    }

    /// Adds a definition; returns `false` and leaves the environment alone
    /// when the name is taken.
    pub fn insert(&mut self, name: impl Into<Name>, ty: Term, body: Term) -> bool {
        let name = name.into();
        if self.defs.contains_key(&name) {
            return false;
        }
        self.defs.insert(name, Definition { ty, body });
        true
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Definition)> {
        self.defs.iter().map(|(n, d)| (n.as_str(), d))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.defs.keys().map(String::as_str)
    }
}
