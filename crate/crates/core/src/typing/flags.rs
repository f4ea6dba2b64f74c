use crate::reduce::DEFAULT_FUEL;

/// Strength of the eliminator for co-inductive families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CofixElim {
    /// The return predicate may depend on the matched term. Unsound with
    /// respect to equality.
    Dependent,
    /// The return predicate must not mention the matched term.
    Weak,
}

/// Feature switches, fixed for a whole checking session.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Flags {
    pub impredicative_set: bool,
    pub cofix_elim: CofixElim,
    /// Allows `Σ^f` in `Prop` with an index type in `Type`.
    pub singleton_proper_index: bool,
    pub eta: bool,
    pub fuel: u64,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            impredicative_set: false,
            cofix_elim: CofixElim::Weak,
            singleton_proper_index: true,
            eta: true,
            fuel: DEFAULT_FUEL,
        }
    }
}

/// Names accepted by `#flag name on|off`.
pub const FLAG_NAMES: [&str; 4] =
    ["impredicative-set", "cofix-dep-elim", "singleton-proper-index", "eta"];

impl Flags {
    /// Sets a flag by its pragma name; `false` if the name is unknown.
    pub fn set(&mut self, name: &str, on: bool) -> bool {
        match name {
            "impredicative-set" => self.impredicative_set = on,
            "cofix-dep-elim" => {
                self.cofix_elim = if on { CofixElim::Dependent } else { CofixElim::Weak }
            }
            "singleton-proper-index" => self.singleton_proper_index = on,
            "eta" => self.eta = on,
            _ => return false,
        }
        true
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        Some(match name {
            "impredicative-set" => self.impredicative_set,
            "cofix-dep-elim" => self.cofix_elim == CofixElim::Dependent,
            "singleton-proper-index" => self.singleton_proper_index,
            "eta" => self.eta,
            _ => return None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pragma_names_round_trip() {
        let mut f = Flags::default();
        for name in FLAG_NAMES {
            let before = f.get(name).unwrap();
            assert!(f.set(name, !before));
            assert_eq!(f.get(name), Some(!before));
        }
        assert!(!f.set("nonsense", true));
    }
}
