//! Identifiers with a numeric disambiguator.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

/// A name drawn from an unbounded supply: a base string plus a
/// disambiguating counter. `x` and `x#1` share a base but are distinct.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ident {
    name: Arc<str>,
    id: u32,
}

impl Ident {
    pub fn new(name: &str) -> Self {
        Ident {
            name: Arc::from(name),
            id: 0,
        }
    }

    pub fn with_id(name: &str, id: u32) -> Self {
        Ident {
            name: Arc::from(name),
            id,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    /// Same base name, different disambiguator.
    pub fn renumber(&self, id: u32) -> Self {
        Ident {
            name: self.name.clone(),
            id,
        }
    }

    /// Parses the printed form `name` or `name#id`.
    pub fn parse(text: &str) -> Self {
        if let Some((base, num)) = text.rsplit_once('#') {
            if !base.is_empty() && !num.is_empty() && num.bytes().all(|b| b.is_ascii_digit()) {
                if let Ok(id) = num.parse::<u32>() {
                    return Ident::with_id(base, id);
                }
            }
        }
        Ident::new(text)
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.id == 0 {
            write!(f, "{}", self.name)
        } else {
            write!(f, "{}#{}", self.name, self.id)
        }
    }
}

impl fmt::Debug for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<&str> for Ident {
    fn from(s: &str) -> Self {
        Ident::parse(s)
    }
}

/// Returns `base` itself when it is not in `avoid`, otherwise the first
/// renumbering of it that is. Deterministic in `(base, avoid)`.
pub fn fresh_ident(base: &Ident, avoid: &HashSet<Ident>) -> Ident {
    if !avoid.contains(base) {
        return base.clone();
    }
    let mut id = base.id.max(1);
    loop {
        let candidate = base.renumber(id);
        if !avoid.contains(&candidate) {
            return candidate;
        }
        id += 1;
    }
}
