//! Formulas: syntax tree, parser, printer, model checking and Scott normal form.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::perm::{Element, NeighborhoodType, Valuation, ValuedPermutation};

/// The two variables of the logic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::X => Var::Y,
            Var::Y => Var::X,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::X => "x",
            Var::Y => "y",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// `p(v)`
    Pred(String, Var),
    /// `a -> b`: `b` sits in the column right after `a`.
    SuccR(Var, Var),
    /// `a |> b`: `b` sits in the row right after `a`.
    SuccD(Var, Var),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

impl Formula {
    pub fn pred(p: &str, v: Var) -> Formula {
        Formula::Atom(Atom::Pred(p.to_string(), v))
    }
    pub fn succ_r(a: Var, b: Var) -> Formula {
        Formula::Atom(Atom::SuccR(a, b))
    }
    pub fn succ_d(a: Var, b: Var) -> Formula {
        Formula::Atom(Atom::SuccD(a, b))
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn exists(v: Var, f: Formula) -> Formula {
        Formula::Exists(v, Box::new(f))
    }
    pub fn forall(v: Var, f: Formula) -> Formula {
        Formula::Forall(v, Box::new(f))
    }

    /// Left-nested conjunction; `True` when empty.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out, &BTreeSet::new());
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Var>, bound: &BTreeSet<Var>) {
        let mut add = |v: &Var| {
            if !bound.contains(v) {
                out.insert(*v);
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(Atom::Pred(_, v)) => add(v),
            Formula::Atom(Atom::SuccR(a, b)) | Formula::Atom(Atom::SuccD(a, b)) => {
                add(a);
                add(b);
            }
            Formula::Not(f) => f.collect_free(out, bound),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(out, bound);
                b.collect_free(out, bound);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                let mut inner = bound.clone();
                inner.insert(*v);
                f.collect_free(out, &inner);
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    /// Propositional letters occurring in the formula.
    pub fn letters(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(Atom::Pred(p, _)) => {
                out.insert(p.clone());
            }
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.collect_letters(out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_letters(out);
                b.collect_letters(out);
            }
            _ => {}
        }
    }

    /// Nesting depth; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 0,
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.depth(),
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Exchange `x` and `y` everywhere, bound occurrences included.
    pub fn swap_vars(&self) -> Formula {
        let s = |v: &Var| v.other();
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(Atom::Pred(p, v)) => Formula::Atom(Atom::Pred(p.clone(), s(v))),
            Formula::Atom(Atom::SuccR(a, b)) => Formula::Atom(Atom::SuccR(s(a), s(b))),
            Formula::Atom(Atom::SuccD(a, b)) => Formula::Atom(Atom::SuccD(s(a), s(b))),
            Formula::Not(f) => Formula::not(f.swap_vars()),
            Formula::And(a, b) => Formula::and(a.swap_vars(), b.swap_vars()),
            Formula::Or(a, b) => Formula::or(a.swap_vars(), b.swap_vars()),
            Formula::Exists(v, f) => Formula::exists(s(v), f.swap_vars()),
            Formula::Forall(v, f) => Formula::forall(s(v), f.swap_vars()),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Exists(..) | Formula::Forall(..) => 0,
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Not(_) => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Operands below `min` precedence get parentheses. Quantifiers inside
        // any connective are always parenthesized.
        fn go(g: &Formula, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let paren = g.prec() < min;
            if paren {
                f.write_str("(")?;
            }
            match g {
                Formula::True => f.write_str("true")?,
                Formula::False => f.write_str("false")?,
                Formula::Atom(Atom::Pred(p, v)) => write!(f, "{p}({v})")?,
                Formula::Atom(Atom::SuccR(a, b)) => write!(f, "{a} -> {b}")?,
                Formula::Atom(Atom::SuccD(a, b)) => write!(f, "{a} |> {b}")?,
                Formula::Not(h) => {
                    f.write_str("!")?;
                    go(h, 3, f)?;
                }
                Formula::And(a, b) => {
                    go(a, 2, f)?;
                    f.write_str(" & ")?;
                    go(b, 3, f)?;
                }
                Formula::Or(a, b) => {
                    go(a, 1, f)?;
                    f.write_str(" | ")?;
                    go(b, 2, f)?;
                }
                Formula::Exists(v, h) => {
                    write!(f, "exists {v}. ")?;
                    go(h, 0, f)?;
                }
                Formula::Forall(v, h) => {
                    write!(f, "forall {v}. ")?;
                    go(h, 0, f)?;
                }
            }
            if paren {
                f.write_str(")")?;
            }
            Ok(())
        }
        go(self, 0, f)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Dot,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Down,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(text: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut adv = 1;
        let tok = match c {
            '\n' => {
                line += 1;
                col = 0;
                None
            }
            c if c.is_whitespace() => None,
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '.' => Some(Tok::Dot),
            '!' => Some(Tok::Bang),
            '&' => Some(Tok::Amp),
            '|' if chars.get(i + 1) == Some(&'>') => {
                adv = 2;
                Some(Tok::Down)
            }
            '|' => Some(Tok::Pipe),
            '-' if chars.get(i + 1) == Some(&'>') => {
                adv = 2;
                Some(Tok::Arrow)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i + adv < chars.len() && (chars[i + adv].is_ascii_alphanumeric() || chars[i + adv] == '_') {
                    adv += 1;
                }
                Some(Tok::Ident(chars[start..start + adv].iter().collect()))
            }
            other => return Err(Error::parse(line, col, format!("unexpected character {other:?}"))),
        };
        if let Some(t) = tok {
            toks.push((t, l0, c0));
        }
        i += adv;
        col += adv;
    }
    toks.push((Tok::End, line, col));
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }
    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }
    fn here(&self) -> (usize, usize) {
        let (_, l, c) = self.toks[self.pos];
        (l, c)
    }
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (l, c) = self.here();
        Err(Error::parse(l, c, msg))
    }
    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }
    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.next();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }
    fn var(&mut self) -> Result<Var> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "x" => {
                self.next();
                Ok(Var::X)
            }
            Tok::Ident(s) if s == "y" => {
                self.next();
                Ok(Var::Y)
            }
            Tok::Ident(s) => self.err(format!("variable {s} is not allowed, only x and y")),
            _ => self.err("expected a variable"),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut left = self.conj()?;
        while *self.peek() == Tok::Pipe {
            self.next();
            left = Formula::or(left, self.conj()?);
        }
        Ok(left)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.next();
            left = Formula::and(left, self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Bang => {
                self.next();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.next();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(kw) if kw == "forall" || kw == "exists" => {
                self.next();
                let v = self.var()?;
                self.expect(Tok::Dot, "`.` after quantified variable")?;
                let body = self.formula()?;
                Ok(if kw == "forall" { Formula::forall(v, body) } else { Formula::exists(v, body) })
            }
            Tok::Ident(kw) if kw == "true" => {
                self.next();
                Ok(Formula::True)
            }
            Tok::Ident(kw) if kw == "false" => {
                self.next();
                Ok(Formula::False)
            }
            Tok::Ident(name) => {
                if *self.peek2() == Tok::LParen {
                    self.next();
                    self.next();
                    let v = self.var()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(Formula::pred(&name, v));
                }
                let a = self.var()?;
                let op = self.next();
                let b = self.var()?;
                match op {
                    Tok::Arrow => Ok(Formula::succ_r(a, b)),
                    Tok::Down => Ok(Formula::succ_d(a, b)),
                    _ => self.err("expected `->` or `|>`"),
                }
            }
            Tok::End => self.err("unexpected end of input"),
            _ => self.err("expected a formula"),
        }
    }
}

/// Parse the `.fo` surface syntax.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut lx = lex(text)?;
    let f = lx.formula()?;
    if *lx.peek() != Tok::End {
        return lx.err("trailing input");
    }
    Ok(f)
}

/// Partial map from variables to elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub x: Option<Element>,
    pub y: Option<Element>,
}

impl Assignment {
    pub fn get(&self, v: Var) -> Option<Element> {
        match v {
            Var::X => self.x,
            Var::Y => self.y,
        }
    }
    pub fn with(mut self, v: Var, e: Element) -> Self {
        match v {
            Var::X => self.x = Some(e),
            Var::Y => self.y = Some(e),
        }
        self
    }
}

/// Truth of `f` in `m` under `mu`.
pub fn eval_formula(m: &ValuedPermutation, f: &Formula, mu: &Assignment) -> Result<bool> {
    for v in f.free_vars() {
        match mu.get(v) {
            None => return Err(Error::Unbound(v.to_string())),
            Some(e) if !m.perm().contains(e) => return Err(Error::NotAnElement(e.0, e.1)),
            _ => {}
        }
    }
    Ok(eval(m, f, mu))
}

fn eval(m: &ValuedPermutation, f: &Formula, mu: &Assignment) -> bool {
    let get = |v: &Var| mu.get(*v).expect("free variables checked");
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(Atom::Pred(p, v)) => m.at_row(get(v).0).contains(p),
        Formula::Atom(Atom::SuccR(a, b)) => get(b).1 == get(a).1 + 1,
        Formula::Atom(Atom::SuccD(a, b)) => get(b).0 == get(a).0 + 1,
        Formula::Not(g) => !eval(m, g, mu),
        Formula::And(a, b) => eval(m, a, mu) && eval(m, b, mu),
        Formula::Or(a, b) => eval(m, a, mu) || eval(m, b, mu),
        Formula::Exists(v, g) => m.perm().elements().any(|e| eval(m, g, &mu.with(*v, e))),
        Formula::Forall(v, g) => m.perm().elements().all(|e| eval(m, g, &mu.with(*v, e))),
    }
}

/// Two valuations and the neighborhood type from the `x` element to the `y` element.
#[derive(Clone, Copy, Debug)]
pub struct AtomContext<'a> {
    pub s: &'a Valuation,
    pub t: NeighborhoodType,
    pub s2: &'a Valuation,
}

/// Truth of a quantifier-free `psi` given only the valuations of `x` and `y`
/// and their relative position. Quantified subformulas evaluate to false.
pub fn atomic_sat(ctx: &AtomContext<'_>, psi: &Formula) -> bool {
    use NeighborhoodType::*;
    let val = |v: &Var| match v {
        Var::X => ctx.s,
        Var::Y => ctx.s2,
    };
    let t = ctx.t;
    match psi {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(Atom::Pred(p, v)) => val(v).contains(p),
        Formula::Atom(Atom::SuccR(a, b)) => match (a, b) {
            (Var::X, Var::Y) => matches!(t, NE | E | SE),
            (Var::Y, Var::X) => matches!(t, NW | W | SW),
            _ => false,
        },
        Formula::Atom(Atom::SuccD(a, b)) => match (a, b) {
            (Var::X, Var::Y) => matches!(t, SW | S | SE),
            (Var::Y, Var::X) => matches!(t, NW | N | NE),
            _ => false,
        },
        Formula::Not(g) => !atomic_sat(ctx, g),
        Formula::And(a, b) => atomic_sat(ctx, a) && atomic_sat(ctx, b),
        Formula::Or(a, b) => atomic_sat(ctx, a) || atomic_sat(ctx, b),
        Formula::Exists(..) | Formula::Forall(..) => false,
    }
}

/// Whether a fresh letter stands for a universal or an existential subformula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quant {
    Forall,
    Exists,
}

/// `letter(x)` holds iff `quant y. matrix(x, y)` holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub letter: String,
    pub quant: Quant,
    pub matrix: Formula,
}

/// `∀x∀y chi ∧ ⋀ ∀x∃y psi_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfFormula {
    pub chi: Formula,
    pub psis: Vec<Formula>,
    /// Original letters plus fresh ones.
    pub vocabulary: BTreeSet<String>,
    /// Meaning of each fresh letter, innermost first.
    pub definitions: Vec<Definition>,
}

impl SnfFormula {
    /// The normal form as an ordinary closed formula.
    pub fn to_formula(&self) -> Formula {
        let mut parts = vec![Formula::forall(Var::X, Formula::forall(Var::Y, self.chi.clone()))];
        for p in &self.psis {
            parts.push(Formula::forall(Var::X, Formula::exists(Var::Y, p.clone())));
        }
        Formula::conj(parts)
    }

    pub fn fresh_letters(&self) -> BTreeSet<String> {
        self.definitions.iter().map(|d| d.letter.clone()).collect()
    }

    /// Give every fresh letter its intended meaning in `m`.
    pub fn expand(&self, m: &ValuedPermutation) -> ValuedPermutation {
        let mut cur = m.map_valuations(|v| {
            let mut v = v.clone();
            for d in &self.definitions {
                v.remove(&d.letter);
            }
            v
        });
        for d in &self.definitions {
            let q = match d.quant {
                Quant::Forall => Formula::forall(Var::Y, d.matrix.clone()),
                Quant::Exists => Formula::exists(Var::Y, d.matrix.clone()),
            };
            let holds: Vec<bool> =
                cur.perm().elements().map(|e| eval(&cur, &q, &Assignment::default().with(Var::X, e))).collect();
            cur = ValuedPermutation::new(
                cur.perm().clone(),
                cur.sigma()
                    .iter()
                    .zip(holds)
                    .map(|(v, h)| {
                        let mut v = v.clone();
                        if h {
                            v.insert(&d.letter);
                        }
                        v
                    })
                    .collect(),
            )
            .expect("same size");
        }
        cur
    }
}

impl fmt::Display for SnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "chi: {}", self.chi)?;
        for (i, p) in self.psis.iter().enumerate() {
            writeln!(f, "psi{i}: {p}")?;
        }
        for d in &self.definitions {
            let q = match d.quant {
                Quant::Forall => "forall",
                Quant::Exists => "exists",
            };
            writeln!(f, "def {}(x) <-> {q} y. {}", d.letter, d.matrix)?;
        }
        Ok(())
    }
}

struct SnfBuilder {
    used: BTreeSet<String>,
    next: usize,
    chi: Vec<Formula>,
    psis: Vec<Formula>,
    defs: Vec<Definition>,
}

impl SnfBuilder {
    fn fresh(&mut self) -> String {
        loop {
            let name = format!("_snf{}", self.next);
            self.next += 1;
            if !self.used.contains(&name) {
                return name;
            }
        }
    }

    /// Replace every quantified subformula by a fresh letter, bottom up.
    fn flatten(&mut self, f: &Formula) -> Formula {
        match f {
            Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
            Formula::Not(g) => Formula::not(self.flatten(g)),
            Formula::And(a, b) => Formula::and(self.flatten(a), self.flatten(b)),
            Formula::Or(a, b) => Formula::or(self.flatten(a), self.flatten(b)),
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let quant = if matches!(f, Formula::Forall(..)) { Quant::Forall } else { Quant::Exists };
                let body = self.flatten(g);
                self.name(quant, *v, body)
            }
        }
    }

    /// Introduce a letter for `quant v. body` with `body` quantifier-free.
    fn name(&mut self, quant: Quant, v: Var, body: Formula) -> Formula {
        // bring into the shape `Q y. body(x, y)`
        let body = if v == Var::X { body.swap_vars() } else { body };
        let p = self.fresh();
        let px = Formula::pred(&p, Var::X);
        match quant {
            Quant::Forall => {
                self.chi.push(Formula::or(Formula::not(px.clone()), body.clone()));
                self.psis.push(Formula::or(px, Formula::not(body.clone())));
            }
            Quant::Exists => {
                self.psis.push(Formula::or(Formula::not(px.clone()), body.clone()));
                self.chi.push(Formula::or(px, Formula::not(body.clone())));
            }
        }
        self.defs.push(Definition { letter: p.clone(), quant, matrix: body });
        Formula::pred(&p, v.other())
    }

    fn conjunct(&mut self, f: &Formula) {
        let only = |g: &Formula, v: Var| g.free_vars().iter().all(|w| *w == v);
        match f {
            Formula::And(a, b) => {
                self.conjunct(a);
                self.conjunct(b);
            }
            Formula::Forall(v, g) => match &**g {
                Formula::Forall(w, h) if w != v => {
                    let h = self.flatten(h);
                    self.chi.push(h);
                }
                Formula::Exists(w, h) if w != v => {
                    let h = self.flatten(h);
                    self.psis.push(if *v == Var::X { h } else { h.swap_vars() });
                }
                _ => {
                    let h = self.flatten(g);
                    if only(&h, *v) {
                        self.chi.push(if *v == Var::X { h } else { h.swap_vars() });
                    } else {
                        let top = self.name(Quant::Forall, *v, h);
                        self.chi.push(top);
                    }
                }
            },
            Formula::Exists(v, g) => {
                let h = self.flatten(g);
                if only(&h, *v) {
                    self.psis.push(if *v == Var::Y { h } else { h.swap_vars() });
                } else {
                    let top = self.name(Quant::Exists, *v, h);
                    self.chi.push(top);
                }
            }
            _ => {
                let h = self.flatten(f);
                self.chi.push(h);
            }
        }
    }
}

/// Scott normal form by renaming quantified subformulas with fresh unary letters.
pub fn to_snf(f: &Formula) -> Result<SnfFormula> {
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(Error::NotClosed(v.to_string()));
    }
    let mut b = SnfBuilder { used: f.letters(), next: 0, chi: Vec::new(), psis: Vec::new(), defs: Vec::new() };
    b.conjunct(f);
    let mut vocabulary = f.letters();
    vocabulary.extend(b.defs.iter().map(|d| d.letter.clone()));
    let chi = Formula::conj(b.chi.into_iter().filter(|c| *c != Formula::True));
    Ok(SnfFormula { chi, psis: b.psis, vocabulary, definitions: b.defs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;
    use proptest::prelude::*;

    fn running_formula() -> Formula {
        parse_formula("forall x. forall y. !((x -> y) & (y |> x) & p(x))").unwrap()
    }

    #[test]
    fn parses_basic_forms() {
        assert_eq!(parse_formula("forall x. p(x)").unwrap(), Formula::forall(Var::X, Formula::pred("p", Var::X)));
        let f = running_formula();
        let expected = Formula::forall(
            Var::X,
            Formula::forall(
                Var::Y,
                Formula::not(Formula::and(
                    Formula::and(Formula::succ_r(Var::X, Var::Y), Formula::succ_d(Var::Y, Var::X)),
                    Formula::pred("p", Var::X),
                )),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn rejects_other_variables_with_position() {
        match parse_formula("forall z. p(z)") {
            Err(Error::Parse { line: 1, col: 8, msg }) => assert!(msg.contains('z')),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_formula("p(x) &").is_err());
        assert!(parse_formula("x -> z").is_err());
        assert!(parse_formula("p(x) q(x)").is_err());
    }

    #[test]
    fn precedence() {
        let f = parse_formula("!p(x) | q(x) & r(x)").unwrap();
        assert_eq!(
            f,
            Formula::or(
                Formula::not(Formula::pred("p", Var::X)),
                Formula::and(Formula::pred("q", Var::X), Formula::pred("r", Var::X))
            )
        );
    }

    fn running_model() -> ValuedPermutation {
        let p = Permutation::from_elements(&[(4, 1), (2, 2), (1, 3), (3, 4)]).unwrap();
        ValuedPermutation::new(
            p,
            vec![Valuation::of(&["p", "q"]), Valuation::of(&["q"]), Valuation::of(&["q", "r"]), Valuation::of(&["p"])],
        )
        .unwrap()
    }

    #[test]
    fn running_model_satisfies_formula() {
        assert!(eval_formula(&running_model(), &running_formula(), &Assignment::default()).unwrap());
        assert!(eval_formula(&running_model(), &Formula::True, &Assignment::default()).unwrap());
        let single = ValuedPermutation::new(Permutation::identity(1), vec![Valuation::of(&["p"])]).unwrap();
        let f = parse_formula("exists x. exists y. x -> y").unwrap();
        assert!(!eval_formula(&single, &f, &Assignment::default()).unwrap());
        assert!(eval_formula(&single, &Formula::pred("p", Var::X), &Assignment::default()).is_err());
    }

    #[test]
    fn atomic_examples() {
        let psi = parse_formula("x -> y & (a(x) | !b(y))").unwrap();
        let b = Valuation::of(&["b"]);
        let ac = Valuation::of(&["a", "c"]);
        assert!(atomic_sat(&AtomContext { s: &b, t: NeighborhoodType::NE, s2: &ac }, &psi));
        let a = Valuation::of(&["a"]);
        let ab = Valuation::of(&["a", "b"]);
        assert!(!atomic_sat(&AtomContext { s: &a, t: NeighborhoodType::S, s2: &ab }, &psi));
        let succ = Formula::succ_r(Var::X, Var::Y);
        assert!(!atomic_sat(&AtomContext { s: &a, t: NeighborhoodType::Same, s2: &a }, &succ));
    }

    #[test]
    fn snf_shapes() {
        let s = to_snf(&parse_formula("forall x. exists y. x -> y").unwrap()).unwrap();
        assert_eq!(s.chi, Formula::True);
        assert_eq!(s.psis, vec![Formula::succ_r(Var::X, Var::Y)]);
        assert!(s.definitions.is_empty());

        let s = to_snf(&parse_formula("exists x. p(x)").unwrap()).unwrap();
        assert_eq!(s.psis, vec![Formula::pred("p", Var::Y)]);
        assert_eq!(s.chi, Formula::True);

        let s = to_snf(&running_formula()).unwrap();
        assert_eq!(s.chi, parse_formula("!((x -> y) & (y |> x) & p(x))").unwrap());
        assert!(s.psis.is_empty());

        assert!(matches!(to_snf(&Formula::pred("p", Var::X)), Err(Error::NotClosed(_))));
    }

    #[test]
    fn snf_nested_uses_fresh_letters() {
        let f = parse_formula("forall x. (p(x) | exists y. (x |> y & forall x. q(x)))").unwrap();
        let s = to_snf(&f).unwrap();
        assert!(!s.definitions.is_empty());
        assert!(s.chi.is_quantifier_free());
        assert!(s.psis.iter().all(|p| p.is_quantifier_free()));
        assert!(s.vocabulary.contains("_snf0"));
    }

    #[test]
    fn fresh_names_avoid_user_letters() {
        let f = parse_formula("forall x. (_snf0(x) | exists x. q(x) & exists y. x -> y)").unwrap();
        let s = to_snf(&f).unwrap();
        assert!(s.definitions.iter().all(|d| d.letter != "_snf0"));
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let var = prop_oneof![Just(Var::X), Just(Var::Y)];
        let leaf = prop_oneof![
            (prop_oneof![Just("p"), Just("q")], var.clone()).prop_map(|(p, v)| Formula::pred(p, v)),
            (var.clone(), var.clone()).prop_map(|(a, b)| Formula::succ_r(a, b)),
            (var.clone(), var.clone()).prop_map(|(a, b)| Formula::succ_d(a, b)),
            Just(Formula::True),
        ];
        leaf.prop_recursive(4, 24, 2, move |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (var.clone(), inner.clone()).prop_map(|(v, f)| Formula::exists(v, f)),
                (var.clone(), inner).prop_map(|(v, f)| Formula::forall(v, f)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(f in arb_formula()) {
            let text = f.to_string();
            prop_assert_eq!(parse_formula(&text).unwrap(), f);
        }

        #[test]
        fn snf_matrices_are_quantifier_free(f in arb_formula()) {
            let closed = Formula::forall(Var::X, Formula::forall(Var::Y, f));
            let s = to_snf(&closed).unwrap();
            prop_assert!(s.chi.is_quantifier_free());
            for p in &s.psis {
                prop_assert!(p.is_quantifier_free());
            }
        }
    }
}
