//! Brute-force reader for operator expressions: tries every bracketing and
//! keeps the ones that satisfy the priority constraints of the ISO table.
//!
//! Input tokens are separated by single spaces, so no lexer is involved.
//! Parentheses are their own tokens.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use prolint_core::ast::{term_to_ast, Ast};
use prolint_core::lexer::tokenize;
use prolint_core::optable::{DialectOptions, OperatorTable, Profile};
use prolint_core::parser::parse_term;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf(String),
    Op(String, Vec<Tree>),
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf(s) => f.write_str(s),
            Tree::Op(op, args) => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

// The standard table, transcribed independently of the library.
const INFIX: &[(&str, u16, &str)] = &[
    (":-", 1200, "xfx"),
    ("-->", 1200, "xfx"),
    (";", 1100, "xfy"),
    ("->", 1050, "xfy"),
    (",", 1000, "xfy"),
    ("=", 700, "xfx"),
    ("\\=", 700, "xfx"),
    ("==", 700, "xfx"),
    ("\\==", 700, "xfx"),
    ("@<", 700, "xfx"),
    ("@>", 700, "xfx"),
    ("@=<", 700, "xfx"),
    ("@>=", 700, "xfx"),
    ("=..", 700, "xfx"),
    ("is", 700, "xfx"),
    ("=:=", 700, "xfx"),
    ("=\\=", 700, "xfx"),
    ("<", 700, "xfx"),
    (">", 700, "xfx"),
    ("=<", 700, "xfx"),
    (">=", 700, "xfx"),
    ("+", 500, "yfx"),
    ("-", 500, "yfx"),
    ("/\\", 500, "yfx"),
    ("\\/", 500, "yfx"),
    ("*", 400, "yfx"),
    ("/", 400, "yfx"),
    ("//", 400, "yfx"),
    ("rem", 400, "yfx"),
    ("mod", 400, "yfx"),
    ("div", 400, "yfx"),
    ("<<", 400, "yfx"),
    (">>", 400, "yfx"),
    ("**", 200, "xfx"),
    ("^", 200, "xfy"),
];

const PREFIX: &[(&str, u16, &str)] = &[
    (":-", 1200, "fx"),
    ("?-", 1200, "fx"),
    ("\\+", 900, "fy"),
    ("-", 200, "fy"),
    ("+", 200, "fy"),
    ("\\", 200, "fy"),
];

fn infix(name: &str) -> Option<(u16, u16, u16)> {
    INFIX.iter().find(|(n, _, _)| *n == name).map(|&(_, p, t)| match t {
        "xfx" => (p, p - 1, p - 1),
        "xfy" => (p, p - 1, p),
        _ => (p, p, p - 1),
    })
}

fn prefix(name: &str) -> Option<(u16, u16)> {
    PREFIX
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|&(_, p, t)| (p, if t == "fy" { p } else { p - 1 }))
}

fn is_op(name: &str) -> bool {
    infix(name).is_some() || prefix(name).is_some()
}

struct Reader<'a> {
    toks: Vec<&'a str>,
    memo: HashMap<(usize, usize), Vec<(Tree, u16)>>,
}

impl Reader<'_> {
    /// Every reading of `toks[i..j]` with its priority.
    fn readings(&mut self, i: usize, j: usize) -> Vec<(Tree, u16)> {
        if let Some(r) = self.memo.get(&(i, j)) {
            return r.clone();
        }
        let mut out: BTreeSet<(Tree, u16)> = BTreeSet::new();
        if j == i + 1 {
            let t = self.toks[i];
            // `,` is punctuation; only the quoted form is an atom.
            if !matches!(t, "(" | ")" | ",") {
                // A bare operator atom has priority 1201 and needs brackets.
                out.insert((Tree::Leaf(t.to_string()), if is_op(t) { 1201 } else { 0 }));
            }
        }
        if j >= i + 3 && self.toks[i] == "(" && self.toks[j - 1] == ")" {
            for (t, p) in self.readings(i + 1, j - 1) {
                if p <= 1200 || matches!(t, Tree::Leaf(_)) {
                    out.insert((t, 0));
                }
            }
        }
        for k in i + 1..j.saturating_sub(1) {
            if let Some((p, lmax, rmax)) = infix(self.toks[k]) {
                let left = self.readings(i, k);
                if left.is_empty() {
                    continue;
                }
                let right = self.readings(k + 1, j);
                for (l, lp) in &left {
                    for (r, rp) in &right {
                        if *lp <= lmax && *rp <= rmax {
                            out.insert((Tree::Op(self.toks[k].to_string(), vec![l.clone(), r.clone()]), p));
                        }
                    }
                }
            }
        }
        if j > i + 1 {
            if let Some((p, amax)) = prefix(self.toks[i]) {
                for (a, ap) in self.readings(i + 1, j) {
                    if ap <= amax {
                        out.insert((Tree::Op(self.toks[i].to_string(), vec![a]), p));
                    }
                }
            }
        }
        let out: Vec<(Tree, u16)> = out.into_iter().collect();
        self.memo.insert((i, j), out.clone());
        out
    }
}

/// All distinct readings of a space-separated expression at priority 1200.
pub fn brute_force(expr: &str) -> Vec<Tree> {
    let toks: Vec<&str> = expr.split(' ').filter(|t| !t.is_empty()).collect();
    let n = toks.len();
    let mut r = Reader {
        toks,
        memo: HashMap::new(),
    };
    // A bare operator atom may stand as a whole term, just not as an operand.
    let mut trees: Vec<Tree> = r
        .readings(0, n)
        .into_iter()
        .filter(|(t, p)| *p <= 1200 || matches!(t, Tree::Leaf(_)))
        .map(|(t, _)| t)
        .collect();
    trees.dedup();
    trees
}

fn to_tree(ast: &Ast) -> Tree {
    match ast {
        Ast::Infix { op, left, right, .. } => Tree::Op(op.clone(), vec![to_tree(left), to_tree(right)]),
        Ast::Prefix { op, arg, .. } => Tree::Op(op.clone(), vec![to_tree(arg)]),
        Ast::Atom(a) => Tree::Leaf(a.clone()),
        Ast::Variable(v) => Tree::Leaf(v.clone()),
        Ast::Integer { literal, .. } => Tree::Leaf(literal.clone()),
        other => Tree::Leaf(format!("<{}>", other.to_term_string())),
    }
}

/// The library's reading of `expr` under the iso profile.
pub fn library_reading(expr: &str) -> Option<Tree> {
    let d = DialectOptions::iso();
    let table = OperatorTable::default_table(Profile::Iso);
    let stream = tokenize(expr, &d).ok()?;
    let (node, rest) = parse_term(&stream.tokens, 1200, &table, &d).ok()?;
    rest.is_empty().then(|| to_tree(&term_to_ast(&node)))
}

/// Hand-picked expressions mixing priorities and associativities.
pub const EXPRESSIONS: &[&str] = &[
    "1 + 2 * 3",
    "1 * 2 + 3",
    "1 - 2 - 3",
    "a :- b ; c -> d",
    "2 ^ 3 ^ 4",
    "2 ** 3 ** 4",
    "a = b = c",
    "- a + b",
    "- - a",
    "\\+ a , b",
    "a , b ; c",
    "a ; b , c",
    "a -> b ; c",
    "a -> b -> c",
    "a = b + c * d - e",
    "X is 1 + 2 * 3 mod 4",
    "a =.. b",
    "a :- b , c ; d -> e",
    "a --> b , c",
    ":- a",
    "?- a , b",
    "( 1 + 2 ) * 3",
    "1 * ( 2 + 3 )",
    "a - ( b - c )",
    "( a :- b ) , c",
    "\\+ \\+ a",
    "- 1 + 2",
    "a * b / c // d",
    "a / b * c",
    "a mod b mod c",
    "a rem b * c",
    "1 << 2 + 3",
    "a /\\ b \\/ c",
    "a =:= b + 1",
    "a >= b , c",
    "a @< b ; c",
    "\\ a + b",
    "- \\ a",
    "a ^ - b",
    "a * - b",
    "a - - b",
    "a = \\+ b",
    "a , b , c",
    "a ; b ; c",
    "a -> b ; c -> d ; e",
    "a :- b :- c",
    "- - - a",
    "1 + 2 + 3 + 4",
    "1 * 2 + 3 * 4",
    "a = b , c = d",
    "X is Y - Z - W",
    "a :- \\+ b , c",
    "a ** b * c",
    "a ^ b ** c",
    "- a ^ b",
    "a = ( b , c )",
    "( a , b ) = c",
    "a ; ( b ; c )",
    "( a ; b ) ; c",
    "a div b + c",
    "X = - ( 1 )",
    "a :- ( b :- c )",
    "f = :-",
    "- + a",
];
