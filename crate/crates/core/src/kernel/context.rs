use super::term::{Name, Term};

/// Ordered telescope of local variable typings; the last entry is `Var(0)`.
#[derive(Clone, Debug, Default)]
pub struct Context {
    entries: Vec<(Name, Term)>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Type of `Var(index)`, shifted into the current context.
    pub fn lookup(&self, index: usize) -> Option<Term> {
        let pos = self.entries.len().checked_sub(index + 1)?;
        Some(self.entries[pos].1.shift(index as isize + 1, 0))
    }

    pub fn name(&self, index: usize) -> Option<&str> {
        let pos = self.entries.len().checked_sub(index + 1)?;
        Some(&self.entries[pos].0)
    }

    pub fn push(&mut self, name: impl Into<Name>, ty: Term) {
        self.entries.push((name.into(), ty));
    }

    pub fn pop(&mut self) {
        self.entries.pop();
    }

    pub fn extended(&self, name: impl Into<Name>, ty: Term) -> Context {
        let mut ctx = self.clone();
        ctx.push(name, ty);
        ctx
    }

    /// Binder names, outermost first.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }
}
