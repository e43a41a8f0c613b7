//! Interned polynomial variables.
//!
//! A `VarId` is a handle into a process-global symbol table. Each name is
//! registered once, together with a Laurent flag that decides whether the
//! variable may carry negative exponents. Registering the same name twice
//! with conflicting flags is a programming error and panics.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use once_cell::sync::Lazy;

struct Interner {
    by_name: HashMap<String, u32>,
    names: Vec<String>,
    laurent: Vec<bool>,
}

static INTERNER: Lazy<RwLock<Interner>> = Lazy::new(|| {
    RwLock::new(Interner {
        by_name: HashMap::new(),
        names: Vec::new(),
        laurent: Vec::new(),
    })
});

/// Handle to an interned variable symbol.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(u32);

impl VarId {
    /// Intern `name` as an ordinary variable (non-negative exponents only).
    pub fn new(name: &str) -> VarId {
        Self::intern(name, false)
    }

    /// Intern `name` as a Laurent variable (negative exponents allowed).
    pub fn laurent(name: &str) -> VarId {
        Self::intern(name, true)
    }

    fn intern(name: &str, laurent: bool) -> VarId {
        {
            let t = INTERNER.read().unwrap();
            if let Some(&id) = t.by_name.get(name) {
                assert_eq!(
                    t.laurent[id as usize], laurent,
                    "variable `{name}` already registered with a different Laurent flag"
                );
                return VarId(id);
            }
        }
        let mut t = INTERNER.write().unwrap();
        if let Some(&id) = t.by_name.get(name) {
            assert_eq!(t.laurent[id as usize], laurent);
            return VarId(id);
        }
        let id = t.names.len() as u32;
        t.by_name.insert(name.to_string(), id);
        t.names.push(name.to_string());
        t.laurent.push(laurent);
        VarId(id)
    }

    pub fn name(&self) -> String {
        INTERNER.read().unwrap().names[self.0 as usize].clone()
    }

    pub fn is_laurent(&self) -> bool {
        INTERNER.read().unwrap().laurent[self.0 as usize]
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarId({})", self.name())
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}
