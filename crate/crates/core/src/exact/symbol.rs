use std::collections::HashMap;
use std::fmt;
use std::sync::{LazyLock, RwLock};

/// Interned variable name. The interning index doubles as the variable's rank
/// in the lexicographic monomial order (lower index = more significant).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub(crate) u32);

struct Table {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

/// Symbols that every run uses are interned up front so their order (and
/// hence every canonical text form) does not depend on which code path
/// happened to touch them first.
const PRESEEDED: &[&str] = &[
    "t", "k1", "k2", "k3", "kappa1", "kappa2", "lambda", "mu", "nu", "Z", "a11", "a12", "a13",
    "a21", "a22", "a23", "a31", "a32", "a33",
];

static TABLE: LazyLock<RwLock<Table>> = LazyLock::new(|| {
    let mut table = Table {
        names: Vec::new(),
        index: HashMap::new(),
    };
    for name in PRESEEDED {
        let id = table.names.len() as u32;
        table.names.push((*name).to_string());
        table.index.insert((*name).to_string(), id);
    }
    RwLock::new(table)
});

impl Symbol {
    pub fn new(name: &str) -> Symbol {
        if let Some(&id) = TABLE.read().expect("symbol table poisoned").index.get(name) {
            return Symbol(id);
        }
        let mut table = TABLE.write().expect("symbol table poisoned");
        if let Some(&id) = table.index.get(name) {
            return Symbol(id);
        }
        let id = table.names.len() as u32;
        table.names.push(name.to_string());
        table.index.insert(name.to_string(), id);
        Symbol(id)
    }

    /// Existing symbol with this name, without interning a new one.
    pub fn lookup(name: &str) -> Option<Symbol> {
        TABLE
            .read()
            .expect("symbol table poisoned")
            .index
            .get(name)
            .map(|&id| Symbol(id))
    }

    pub fn name(&self) -> String {
        TABLE.read().expect("symbol table poisoned").names[self.0 as usize].clone()
    }

    /// Matrix-entry variable `a{i}{j}` (1-based indices).
    pub fn matrix_entry(i: usize, j: usize) -> Symbol {
        Symbol::new(&format!("a{i}{j}"))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}
