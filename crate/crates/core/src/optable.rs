//! Operator table and dialect flags.
//!
//! Both are plain values: applying an `op/3` directive returns a new table
//! and leaves the old one untouched, so a table snapshot can be shared
//! across files that are analysed concurrently.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Specifier {
    Xfx,
    Xfy,
    Yfx,
    Fy,
    Fx,
    Xf,
    Yf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpClass {
    Prefix,
    Infix,
    Postfix,
}

impl Specifier {
    pub fn class(self) -> OpClass {
        match self {
            Specifier::Fy | Specifier::Fx => OpClass::Prefix,
            Specifier::Xfx | Specifier::Xfy | Specifier::Yfx => OpClass::Infix,
            Specifier::Xf | Specifier::Yf => OpClass::Postfix,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Specifier::Xfx => "xfx",
            Specifier::Xfy => "xfy",
            Specifier::Yfx => "yfx",
            Specifier::Fy => "fy",
            Specifier::Fx => "fx",
            Specifier::Xf => "xf",
            Specifier::Yf => "yf",
        }
    }

    /// Maximum priorities of the (left, right) argument for an operator of
    /// priority `p`. Prefix operators only use `right`, postfix only `left`.
    pub fn arg_max(self, p: u16) -> (u16, u16) {
        let strict = p.saturating_sub(1);
        match self {
            Specifier::Xfx => (strict, strict),
            Specifier::Xfy => (strict, p),
            Specifier::Yfx => (p, strict),
            Specifier::Fy => (0, p),
            Specifier::Fx => (0, strict),
            Specifier::Xf => (strict, 0),
            Specifier::Yf => (p, 0),
        }
    }
}

impl fmt::Display for Specifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Specifier {
    type Err = OpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "xfx" => Specifier::Xfx,
            "xfy" => Specifier::Xfy,
            "yfx" => Specifier::Yfx,
            "fy" => Specifier::Fy,
            "fx" => Specifier::Fx,
            "xf" => Specifier::Xf,
            "yf" => Specifier::Yf,
            other => return Err(OpError::InvalidSpecifier(other.to_string())),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct OpDef {
    pub name: String,
    pub priority: u16,
    pub specifier: Specifier,
}

impl OpDef {
    pub fn new(name: impl Into<String>, priority: u16, specifier: Specifier) -> Self {
        Self {
            name: name.into(),
            priority,
            specifier,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpError {
    #[error("operator priority {0} outside 0..1200")]
    PriorityOutOfRange(i64),
    #[error("invalid operator specifier `{0}`")]
    InvalidSpecifier(String),
    #[error("operator `{0}` cannot be modified")]
    Protected(String),
    #[error("`{0}` cannot be both an infix and a postfix operator")]
    InfixPostfixClash(String),
    #[error("`|` may only be an infix operator with priority of at least 1001")]
    BarRestriction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Iso,
    Swi,
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "iso" => Ok(Profile::Iso),
            "swi" => Ok(Profile::Swi),
            other => Err(format!(
                "unknown dialect profile `{other}` (expected iso or swi)"
            )),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Iso => "iso",
            Profile::Swi => "swi",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown dialect flag `{0}`")]
pub struct UnknownFlag(pub String);

/// Switches for syntax outside the ISO standard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DialectOptions {
    pub dicts: bool,
    pub allow_compounds_with_zero_arguments: bool,
    pub allow_arg_precedence_geq_1000: bool,
    pub allow_operator_as_operand: bool,
    pub allow_integer_exponential_notation: bool,
    pub digit_groups: bool,
    pub shebang: bool,
    pub unicode_character_escape: bool,
    pub missing_closing_backslash: bool,
    pub single_quote_char_constant: bool,
    pub tab_in_quotes: bool,
    pub nested_block_comments: bool,
    pub deduce_operators: bool,
}

macro_rules! flag_registry {
    ($($name:ident),* $(,)?) => {
        impl DialectOptions {
            /// Every flag name accepted by [`DialectOptions::set`].
            pub const FLAGS: &'static [&'static str] = &[$(stringify!($name)),*];

            pub fn get(&self, flag: &str) -> Result<bool, UnknownFlag> {
                match flag {
                    $(stringify!($name) => Ok(self.$name),)*
                    other => Err(UnknownFlag(other.to_string())),
                }
            }

            pub fn set(&mut self, flag: &str, value: bool) -> Result<(), UnknownFlag> {
                match flag {
                    $(stringify!($name) => self.$name = value,)*
                    other => return Err(UnknownFlag(other.to_string())),
                }
                Ok(())
            }

            fn all(value: bool) -> Self {
                Self { $($name: value),* }
            }
        }
    };
}

flag_registry!(
    dicts,
    allow_compounds_with_zero_arguments,
    allow_arg_precedence_geq_1000,
    allow_operator_as_operand,
    allow_integer_exponential_notation,
    digit_groups,
    shebang,
    unicode_character_escape,
    missing_closing_backslash,
    single_quote_char_constant,
    tab_in_quotes,
    nested_block_comments,
    deduce_operators,
);

impl DialectOptions {
    pub fn iso() -> Self {
        Self::all(false)
    }

    pub fn swi() -> Self {
        Self {
            deduce_operators: false,
            ..Self::all(true)
        }
    }

    pub fn profile(profile: Profile) -> Self {
        match profile {
            Profile::Iso => Self::iso(),
            Profile::Swi => Self::swi(),
        }
    }

    pub fn with(mut self, flag: &str, value: bool) -> Result<Self, UnknownFlag> {
        self.set(flag, value)?;
        Ok(self)
    }
}

impl Default for DialectOptions {
    fn default() -> Self {
        Self::swi()
    }
}

/// Operator definitions keyed by name. A name has at most one prefix
/// definition and at most one infix-or-postfix definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorTable {
    prefix: BTreeMap<String, OpDef>,
    infix_postfix: BTreeMap<String, OpDef>,
}

const ISO_OPS: &[(u16, Specifier, &[&str])] = &[
    (1200, Specifier::Xfx, &[":-", "-->"]),
    (1200, Specifier::Fx, &[":-", "?-"]),
    (1100, Specifier::Xfy, &[";"]),
    (1050, Specifier::Xfy, &["->"]),
    (1000, Specifier::Xfy, &[","]),
    (900, Specifier::Fy, &["\\+"]),
    (
        700,
        Specifier::Xfx,
        &[
            "=", "\\=", "==", "\\==", "@<", "@>", "@=<", "@>=", "=..", "is", "=:=", "=\\=", "<",
            ">", "=<", ">=",
        ],
    ),
    (500, Specifier::Yfx, &["+", "-", "/\\", "\\/"]),
    (
        400,
        Specifier::Yfx,
        &["*", "/", "//", "rem", "mod", "div", "<<", ">>"],
    ),
    (200, Specifier::Xfx, &["**"]),
    (200, Specifier::Xfy, &["^"]),
    (200, Specifier::Fy, &["-", "+", "\\"]),
];

const SWI_EXTRA_OPS: &[(u16, Specifier, &[&str])] = &[
    (1200, Specifier::Xfx, &["=>"]),
    (
        1150,
        Specifier::Fx,
        &[
            "dynamic",
            "discontiguous",
            "initialization",
            "meta_predicate",
            "module_transparent",
            "multifile",
            "public",
            "thread_local",
            "table",
        ],
    ),
    (1100, Specifier::Xfy, &["|"]),
    (1050, Specifier::Xfy, &["*->"]),
    (990, Specifier::Xfx, &[":="]),
    (700, Specifier::Xfx, &["=@=", "\\=@=", "as", ">:<", ":<"]),
    (200, Specifier::Xfy, &[":"]),
    (500, Specifier::Yfx, &["xor"]),
    (500, Specifier::Fx, &["?"]),
    (400, Specifier::Yfx, &["rdiv", "divmod"]),
    (1, Specifier::Fx, &["$"]),
];

impl OperatorTable {
    pub fn empty() -> Self {
        Self {
            prefix: BTreeMap::new(),
            infix_postfix: BTreeMap::new(),
        }
    }

    pub fn default_table(profile: Profile) -> Self {
        let mut table = Self::empty();
        let mut load = |ops: &[(u16, Specifier, &[&str])]| {
            for &(priority, spec, names) in ops {
                for &name in names {
                    table.insert(OpDef::new(name, priority, spec));
                }
            }
        };
        load(ISO_OPS);
        if profile == Profile::Swi {
            load(SWI_EXTRA_OPS);
        }
        table
    }

    fn insert(&mut self, def: OpDef) {
        let slot = match def.specifier.class() {
            OpClass::Prefix => &mut self.prefix,
            _ => &mut self.infix_postfix,
        };
        slot.insert(def.name.clone(), def);
    }

    pub fn prefix(&self, name: &str) -> Option<&OpDef> {
        self.prefix.get(name)
    }

    pub fn infix(&self, name: &str) -> Option<&OpDef> {
        self.infix_postfix
            .get(name)
            .filter(|d| d.specifier.class() == OpClass::Infix)
    }

    pub fn postfix(&self, name: &str) -> Option<&OpDef> {
        self.infix_postfix
            .get(name)
            .filter(|d| d.specifier.class() == OpClass::Postfix)
    }

    pub fn is_op(&self, name: &str) -> bool {
        self.prefix.contains_key(name) || self.infix_postfix.contains_key(name)
    }

    /// All definitions for `name`, prefix first.
    pub fn lookup(&self, name: &str) -> Vec<&OpDef> {
        self.prefix
            .get(name)
            .into_iter()
            .chain(self.infix_postfix.get(name))
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &OpDef> {
        self.prefix.values().chain(self.infix_postfix.values())
    }

    /// Applies `op(Priority, Specifier, Names)` with an already typed specifier.
    pub fn apply_op(
        &self,
        priority: u16,
        spec: Specifier,
        names: &[&str],
    ) -> Result<Self, OpError> {
        if priority > 1200 {
            return Err(OpError::PriorityOutOfRange(priority as i64));
        }
        let mut next = self.clone();
        for &name in names {
            next.apply_one(priority, spec, name)?;
        }
        Ok(next)
    }

    /// Applies an `op/3` directive given in its raw form.
    pub fn apply_op_directive(
        &self,
        priority: i64,
        specifier: &str,
        names: &[&str],
    ) -> Result<Self, OpError> {
        if !(0..=1200).contains(&priority) {
            return Err(OpError::PriorityOutOfRange(priority));
        }
        let spec: Specifier = specifier.parse()?;
        self.apply_op(priority as u16, spec, names)
    }

    fn apply_one(&mut self, priority: u16, spec: Specifier, name: &str) -> Result<(), OpError> {
        if matches!(name, "," | "[]" | "{}") {
            return Err(OpError::Protected(name.to_string()));
        }
        if name == "|" && priority > 0 && (spec.class() != OpClass::Infix || priority < 1001) {
            return Err(OpError::BarRestriction);
        }
        let class = spec.class();
        if class == OpClass::Prefix {
            if priority == 0 {
                self.prefix.remove(name);
            } else {
                self.prefix
                    .insert(name.to_string(), OpDef::new(name, priority, spec));
            }
            return Ok(());
        }
        let existing = self.infix_postfix.get(name).map(|d| d.specifier.class());
        if priority == 0 {
            if existing == Some(class) {
                self.infix_postfix.remove(name);
            }
            return Ok(());
        }
        if matches!(existing, Some(c) if c != class) {
            return Err(OpError::InfixPostfixClash(name.to_string()));
        }
        self.infix_postfix
            .insert(name.to_string(), OpDef::new(name, priority, spec));
        Ok(())
    }
}

impl Default for OperatorTable {
    fn default() -> Self {
        Self::default_table(Profile::Swi)
    }
}
