#![allow(dead_code)]

pub mod oracle;

use operad_gb::poly::Polynomial;
use operad_gb::{builtin, complete, CompletionOptions, Encoding, GroebnerBasis, Presentation};

/// Rewrites the `x`/`y`/`z` generator letters of reference shuffle relations
/// into this crate's names (`mul`, `mul'`, `bra`).
pub fn from_letters(text: &str) -> String {
    let mut out = String::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if chars.peek() == Some(&'(') {
            match c {
                'x' => out.push_str("mul"),
                'y' => out.push_str("mul'"),
                'z' => out.push_str("bra"),
                _ => out.push(c),
            }
        } else {
            out.push(c);
        }
    }
    out
}

pub fn letters_poly(text: &str, enc: &Encoding) -> Polynomial {
    Polynomial::parse(&from_letters(text), enc.alphabet(), None).unwrap_or_else(|e| panic!("{text}: {e}"))
}

/// `lead -> tail` as the relation `lead - tail`.
pub fn rule_relation(rule: &str, enc: &Encoding) -> Polynomial {
    let (lead, tail) = rule.split_once("->").unwrap();
    letters_poly(lead.trim(), enc).sub(&letters_poly(tail.trim(), enc)).unwrap()
}

pub fn setup(name: &str) -> (Presentation, Encoding) {
    let p = builtin(name).unwrap();
    let enc = p.encoding(None).unwrap();
    (p, enc)
}

pub fn basis(name: &str, max_arity: usize, workers: usize) -> (Presentation, Encoding, GroebnerBasis) {
    let (p, enc) = setup(name);
    let rels = p.relations(&enc).unwrap();
    let b = complete(enc.alphabet(), &rels, CompletionOptions { max_arity, workers }).unwrap();
    (p, enc, b)
}

/// Reference rules of the Com-GD basis through arity 4, in x/z letters.
pub const COM_GD_RULES: [&str; 12] = [
    "x(x(1 3) 2) -> x(1 x(2 3))",
    "x(x(1 2) 3) -> x(1 x(2 3))",
    "z(x(1 2) 3) -> 2 x(z(1 3) 2) - z(1 x(2 3))",
    "x(z(1 2) 3) -> x(z(1 3) 2) - x(1 z(2 3))",
    "z(z(1 2) 3) -> z(z(1 3) 2) + z(1 z(2 3))",
    "z(x(1 3) 2) -> 2 x(z(1 3) 2) - z(1 x(2 3)) - 2 x(1 z(2 3))",
    "x(z(1 4) z(2 3)) -> x(z(1 3) z(2 4)) - x(z(1 z(3 4)) 2) + x(1 z(2 z(3 4)))",
    "x(z(1 3) x(2 4)) -> z(1 x(2 x(3 4))) + 3 x(1 x(z(2 4) 3)) - 2 x(1 z(2 x(3 4))) - 2 x(1 x(2 z(3 4)))",
    "x(z(1 4) x(2 3)) -> z(1 x(2 x(3 4))) + 3 x(1 x(z(2 4) 3)) - 2 x(1 z(2 x(3 4))) - x(1 x(2 z(3 4)))",
    "x(z(1 x(3 4)) 2) -> z(1 x(2 x(3 4))) + 2 x(1 x(z(2 4) 3)) - x(1 z(2 x(3 4))) - x(1 x(2 z(3 4)))",
    "z(z(1 4) x(2 3)) -> z(z(1 x(3 4)) 2) - 2 x(z(1 3) z(2 4)) + z(1 x(z(2 4) 3)) + z(1 z(2 x(3 4))) + 2 x(1 z(z(2 4) 3))",
    "z(z(1 3) x(2 4)) -> z(z(1 x(3 4)) 2) - 2 x(z(1 3) z(2 4)) + 2 x(z(1 z(3 4)) 2) + z(1 x(z(2 4) 3)) + z(1 z(2 x(3 4))) - z(1 x(2 z(3 4))) + 2 x(1 z(z(2 4) 3))",
];

/// The commutative GD identity in shuffle form, three relations.
pub const COM_GD_SHUFFLED: [&str; 3] = [
    "z(1 x(2 3)) + z(x(1 2) 3) - x(z(1 2) 3) - x(1 z(2 3)) - x(z(1 3) 2)",
    "-z(x(1 3) 2) + z(x(1 2) 3) + x(z(1 2) 3) - x(z(1 3) 2) - x(1 z(2 3))",
    "-x(z(1 2) 3) + z(1 x(2 3)) + z(x(1 3) 2) - x(z(1 3) 2) + x(1 z(2 3))",
];

/// Shuffled associativity with `y(1 2) = x(2 1)`.
pub const AS_SHUFFLED: [&str; 6] = [
    "x(x(1 2) 3) - x(1 x(2 3))",
    "x(y(1 2) 3) - y(x(1 3) 2)",
    "x(x(1 3) 2) - x(1 y(2 3))",
    "x(y(1 3) 2) - y(x(1 2) 3)",
    "y(1 x(2 3)) - y(y(1 3) 2)",
    "y(1 y(2 3)) - y(y(1 2) 3)",
];

pub const LIE_SHUFFLED: &str = "z(z(1 2) 3) - z(1 z(2 3)) - z(z(1 3) 2)";
