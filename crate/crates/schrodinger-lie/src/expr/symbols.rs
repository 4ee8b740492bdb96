use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

use super::Expr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Codomain {
    Real,
    Complex,
}

/// Declared function symbol; arity 0 means an unknown constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionSymbol {
    pub name: String,
    pub arity: usize,
    pub codomain: Codomain,
}

/// Sampling hints for a symbol's surrogate.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SymbolHint {
    /// Amplitude multiplier of the trigonometric surrogate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    /// Range for the real part of an arity-0 constant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[f64; 2]>,
}

/// One entry of a declarations file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Declaration {
    pub name: String,
    pub arity: usize,
    pub codomain: Codomain,
    #[serde(flatten)]
    pub hint: SymbolHint,
}

/// Function symbols and macro definitions visible to the parser.
#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    syms: BTreeMap<String, Arc<FunctionSymbol>>,
    hints: BTreeMap<String, SymbolHint>,
    defs: BTreeMap<String, Expr>,
}

const RESERVED: &[&str] = &[
    "t", "i", "pi", "psi", "conj", "exp", "cos", "sin", "ln", "sgn", "atan2", "inv", "d",
];

pub(crate) fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name)
        || name.starts_with("psi_")
        || (name.len() > 1
            && name.starts_with('x')
            && name[1..].chars().all(|c| c.is_ascii_digit()))
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, name: &str, arity: usize, codomain: Codomain) -> Arc<FunctionSymbol> {
        self.declare_hinted(name, arity, codomain, SymbolHint::default())
    }

    pub fn declare_hinted(
        &mut self,
        name: &str,
        arity: usize,
        codomain: Codomain,
        hint: SymbolHint,
    ) -> Arc<FunctionSymbol> {
        assert!(!is_reserved(name), "reserved identifier {name}");
        let sym = Arc::new(FunctionSymbol { name: name.to_string(), arity, codomain });
        if let Some(prev) = self.syms.get(name) {
            assert_eq!(**prev, *sym, "conflicting redeclaration of {name}");
        }
        self.syms.insert(name.to_string(), sym.clone());
        if hint != SymbolHint::default() {
            self.hints.insert(name.to_string(), hint);
        }
        sym
    }

    pub fn declare_all(&mut self, decls: &[Declaration]) {
        for d in decls {
            self.declare_hinted(&d.name, d.arity, d.codomain, d.hint.clone());
        }
    }

    /// Parses a JSON list of `{name, arity, codomain}` records.
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let decls: Vec<Declaration> = serde_json::from_str(text)?;
        let mut t = SymbolTable::new();
        t.declare_all(&decls);
        Ok(t)
    }

    /// Registers a named subexpression that the parser expands in place.
    pub fn define(&mut self, name: &str, e: Expr) {
        assert!(!is_reserved(name), "reserved identifier {name}");
        self.defs.insert(name.to_string(), e);
    }

    pub fn get(&self, name: &str) -> Option<&Arc<FunctionSymbol>> {
        self.syms.get(name)
    }

    pub fn definition(&self, name: &str) -> Option<&Expr> {
        self.defs.get(name)
    }

    pub fn hint(&self, name: &str) -> Option<&SymbolHint> {
        self.hints.get(name)
    }

    pub fn hints(&self) -> &BTreeMap<String, SymbolHint> {
        &self.hints
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Arc<FunctionSymbol>> {
        self.syms.values()
    }

    /// Shorthand: `sym("U")` applied to `args`.
    pub fn call(&self, name: &str, args: Vec<Expr>) -> Expr {
        let s = self.get(name).unwrap_or_else(|| panic!("undeclared symbol {name}"));
        Expr::func(s, args)
    }

    /// Value of an arity-0 symbol.
    pub fn param(&self, name: &str) -> Expr {
        self.call(name, vec![])
    }
}
