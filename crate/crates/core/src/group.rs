//! Symbolic lower bounds on the obstructor dimension of group expressions,
//! with derivation trees and the resulting action-dimension statements.
//!
//! Grammar (`><` binds looser than `x` and associates to the right):
//!
//! ```text
//! semi    := product ( ("><" | "⋊") semi )?
//! product := power ( ("x" | "×") power )*
//! power   := primary ( "^" INT )?
//! primary := "(" semi ")" | atom ( "[" item ("," item)* "]" )?
//! atom    := "1" | "Z" | "F" INT | name
//! item    := "obdim>=" (INT | "inf") | flag
//! ```
//!
//! A bare `name` must carry brackets.

use std::fmt;
use std::ops::Add;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A lower bound: a non-negative integer or unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    Finite(u64),
    Unbounded,
}

impl Add for Bound {
    type Output = Bound;

    fn add(self, rhs: Bound) -> Bound {
        match (self, rhs) {
            (Bound::Finite(a), Bound::Finite(b)) => Bound::Finite(a.saturating_add(b)),
            _ => Bound::Unbounded,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(n) => write!(f, "{n}"),
            Bound::Unbounded => f.write_str("inf"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bound::Finite(n) => s.serialize_u64(*n),
            Bound::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Flags {
    pub weakly_convex: bool,
    pub hyperbolic: bool,
    pub cat0: bool,
    pub semi_hyperbolic: bool,
    pub torsion_free: bool,
}

impl Flags {
    const NAMES: [&'static str; 5] = ["weakly_convex", "hyperbolic", "cat0", "semi_hyperbolic", "torsion_free"];

    fn set(&mut self, name: &str) -> bool {
        let slot = match name {
            "weakly_convex" => &mut self.weakly_convex,
            "hyperbolic" => &mut self.hyperbolic,
            "cat0" => &mut self.cat0,
            "semi_hyperbolic" => &mut self.semi_hyperbolic,
            "torsion_free" => &mut self.torsion_free,
            _ => return false,
        };
        *slot = true;
        true
    }

    fn as_list(&self) -> Vec<&'static str> {
        let values = [self.weakly_convex, self.hyperbolic, self.cat0, self.semi_hyperbolic, self.torsion_free];
        Self::NAMES
            .iter()
            .zip(values)
            .filter(|(_, on)| *on)
            .map(|(n, _)| *n)
            .collect()
    }

    /// Hyperbolic, CAT(0) and semi-hyperbolic groups are weakly convex.
    pub fn implies_weakly_convex(&self) -> bool {
        self.weakly_convex || self.hyperbolic || self.cat0 || self.semi_hyperbolic
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupExpr {
    Finite,
    /// The infinite cyclic group; stands for any 2-ended group.
    Z,
    FreeGroup(u32),
    Asserted { name: String, bound: Bound, flags: Flags },
    /// A built-in atom with extra assertions attached, as in `F3[obdim>=2,weakly_convex]`.
    Annotated { base: Box<GroupExpr>, bound: Option<Bound>, flags: Flags },
    DirectProduct(Vec<GroupExpr>),
    /// `normal ⋊ quotient`; always split.
    Semidirect { normal: Box<GroupExpr>, quotient: Box<GroupExpr> },
}

fn write_annotation(f: &mut fmt::Formatter<'_>, bound: Option<Bound>, flags: &Flags) -> fmt::Result {
    let mut items: Vec<String> = bound.map(|b| format!("obdim>={b}")).into_iter().collect();
    items.extend(flags.as_list().into_iter().map(String::from));
    if items.is_empty() {
        Ok(())
    } else {
        write!(f, "[{}]", items.join(","))
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Finite => f.write_str("1"),
            GroupExpr::Z => f.write_str("Z"),
            GroupExpr::FreeGroup(k) => write!(f, "F{k}"),
            GroupExpr::Asserted { name, bound, flags } => {
                f.write_str(name)?;
                write_annotation(f, Some(*bound), flags)
            }
            GroupExpr::Annotated { base, bound, flags } => {
                write!(f, "{base}")?;
                write_annotation(f, *bound, flags)
            }
            GroupExpr::DirectProduct(factors) => {
                for (i, g) in factors.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" x ")?;
                    }
                    match g {
                        GroupExpr::DirectProduct(_) | GroupExpr::Semidirect { .. } => write!(f, "({g})")?,
                        _ => write!(f, "{g}")?,
                    }
                }
                Ok(())
            }
            GroupExpr::Semidirect { normal, quotient } => {
                match **normal {
                    GroupExpr::Semidirect { .. } => write!(f, "({normal})")?,
                    _ => write!(f, "{normal}")?,
                }
                write!(f, " >< {quotient}")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    FiniteGroup,
    TwoEnded,
    FreeGroup,
    Assertion,
    DirectProduct,
    Semidirect,
    SubgroupMonotonicity,
}

impl Rule {
    pub fn statement(&self) -> &'static str {
        match self {
            Rule::FiniteGroup => "obdim = 0 for finite groups",
            Rule::TwoEnded => "obdim = 1 for 2-ended groups",
            Rule::FreeGroup => {
                "obdim >= 2 for non-abelian free groups (three points in the Cantor-set boundary)"
            }
            Rule::Assertion => "asserted by the user, not checked",
            Rule::DirectProduct => "obdim(A x B) >= obdim(A) + obdim(B)",
            Rule::Semidirect => "obdim(H >< Q) >= obdim(H) + obdim(Q) when H is weakly convex",
            Rule::SubgroupMonotonicity => "obdim(G) >= obdim(G') for every subgroup G' of G",
        }
    }
}

/// One rule application; premises are the derivations it consumes.
#[derive(Clone, Debug, Serialize)]
pub struct Derivation {
    pub group: String,
    pub rule: Rule,
    pub rule_statement: &'static str,
    pub bound: Bound,
    pub weakly_convex: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<Derivation>,
}

impl Derivation {
    fn node(group: &GroupExpr, rule: Rule, bound: Bound, weakly_convex: bool, premises: Vec<Derivation>) -> Self {
        Derivation {
            group: group.to_string(),
            rule,
            rule_statement: rule.statement(),
            bound,
            weakly_convex,
            diagnostics: Vec::new(),
            premises,
        }
    }

    /// Every diagnostic in the tree, outermost first.
    pub fn all_diagnostics(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self.diagnostics.iter().map(String::as_str).collect();
        for p in &self.premises {
            out.extend(p.all_diagnostics());
        }
        out
    }

    /// Whether the semidirect rule was refused somewhere in the tree.
    pub fn semidirect_refused(&self) -> bool {
        self.rule == Rule::SubgroupMonotonicity || self.premises.iter().any(Derivation::semidirect_refused)
    }

    pub fn explain(&self) -> String {
        let mut out = String::new();
        self.explain_into(0, &mut out);
        out
    }

    fn explain_into(&self, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        out.push_str(&format!(
            "{pad}obdim({}) >= {}  [{:?}: {}]\n",
            self.group, self.bound, self.rule, self.rule_statement
        ));
        for d in &self.diagnostics {
            out.push_str(&format!("{pad}  ! {d}\n"));
        }
        for p in &self.premises {
            p.explain_into(depth + 1, out);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("derivation serializes")
    }
}

/// Derives the largest lower bound the rule set supports.
pub fn obdim_lower_bound(expr: &GroupExpr) -> Derivation {
    match expr {
        GroupExpr::Finite => Derivation::node(expr, Rule::FiniteGroup, Bound::Finite(0), true, vec![]),
        GroupExpr::Z => Derivation::node(expr, Rule::TwoEnded, Bound::Finite(1), true, vec![]),
        GroupExpr::FreeGroup(_) => Derivation::node(expr, Rule::FreeGroup, Bound::Finite(2), true, vec![]),
        GroupExpr::Asserted { bound, flags, .. } => {
            Derivation::node(expr, Rule::Assertion, *bound, flags.implies_weakly_convex(), vec![])
        }
        GroupExpr::Annotated { base, bound, flags } => {
            let inner = obdim_lower_bound(base);
            let b = bound.map_or(inner.bound, |b| b.max(inner.bound));
            let wc = inner.weakly_convex || flags.implies_weakly_convex();
            Derivation::node(expr, Rule::Assertion, b, wc, vec![inner])
        }
        GroupExpr::DirectProduct(factors) => {
            let premises: Vec<Derivation> = factors.iter().map(obdim_lower_bound).collect();
            let bound = premises.iter().fold(Bound::Finite(0), |acc, d| acc + d.bound);
            let wc = premises.iter().all(|d| d.weakly_convex);
            Derivation::node(expr, Rule::DirectProduct, bound, wc, premises)
        }
        GroupExpr::Semidirect { normal, quotient } => {
            let h = obdim_lower_bound(normal);
            let q = obdim_lower_bound(quotient);
            if h.weakly_convex {
                let bound = h.bound + q.bound;
                Derivation::node(expr, Rule::Semidirect, bound, false, vec![h, q])
            } else {
                let bound = h.bound.max(q.bound);
                let mut d = Derivation::node(expr, Rule::SubgroupMonotonicity, bound, false, vec![h, q]);
                d.diagnostics.push(format!(
                    "semidirect rule not applicable: normal factor `{normal}` is not known to be \
                     weakly convex; the sum of the bounds is not derivable, falling back to the \
                     larger factor bound"
                ));
                d
            }
        }
    }
}

/// Optional data for the advisory upper bound.
#[derive(Clone, Copy, Debug, Default)]
pub struct Advisory {
    pub gdim: Option<u64>,
    pub torsion_free: bool,
}

/// What the derived bound says about proper actions on contractible manifolds.
pub fn actdim_statement(d: &Derivation, advisory: &Advisory) -> String {
    let g = &d.group;
    let mut text = match d.bound {
        Bound::Finite(0) => format!(
            "obdim({g}) >= 0: no restriction on properly discontinuous actions follows (vacuous)."
        ),
        Bound::Finite(b) => format!(
            "actdim({g}) >= obdim({g}) >= {b}: {g} cannot act properly discontinuously on any \
             contractible manifold of dimension < {b}; in particular not on R^{}.",
            b - 1
        ),
        Bound::Unbounded => format!(
            "obdim({g}) is unbounded: {g} cannot act properly discontinuously on any contractible \
             manifold of finite dimension."
        ),
    };
    if let Some(gdim) = advisory.gdim {
        if advisory.torsion_free {
            text.push_str(&format!(
                "\nadvisory (not certified): a torsion-free group of geometric dimension {gdim} \
                 acts properly on a contractible manifold of dimension {}, so actdim({g}) <= {}.",
                2 * gdim,
                2 * gdim
            ));
        } else {
            text.push_str(
                "\nadvisory withheld: actdim <= 2 gdim is only known for torsion-free groups; \
                 assert torsion-freeness to see it.",
            );
        }
    }
    text
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Times,
    Semi,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Ge,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let (tok, len) = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '×' => (Tok::Times, 1),
            '⋊' => (Tok::Semi, 1),
            '>' if chars.get(i + 1) == Some(&'<') => (Tok::Semi, 2),
            '>' if chars.get(i + 1) == Some(&'=') => (Tok::Ge, 2),
            '^' => (Tok::Caret, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '[' => (Tok::LBracket, 1),
            ']' => (Tok::RBracket, 1),
            ',' => (Tok::Comma, 1),
            c if c.is_ascii_digit() => {
                let len = chars[i..].iter().take_while(|c| c.is_ascii_digit()).count();
                let s: String = chars[i..i + len].iter().collect();
                let n = s.parse().map_err(|_| Error::parse(col, "integer too large"))?;
                (Tok::Int(n), len)
            }
            c if c.is_alphabetic() || c == '_' => {
                let len = chars[i..]
                    .iter()
                    .take_while(|c| c.is_alphanumeric() || **c == '_')
                    .count();
                let s: String = chars[i..i + len].iter().collect();
                if s == "x" {
                    (Tok::Times, 1)
                } else {
                    (Tok::Ident(s), len)
                }
            }
            other => return Err(Error::parse(col, format!("unexpected character '{other}'"))),
        };
        out.push((tok, col));
        i += len;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, c)| *c)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(Error::parse(self.col(), format!("expected {what}")))
        }
    }

    fn semi(&mut self) -> Result<GroupExpr> {
        let normal = self.product()?;
        if self.eat(&Tok::Semi) {
            let quotient = self.semi()?;
            Ok(GroupExpr::Semidirect {
                normal: Box::new(normal),
                quotient: Box::new(quotient),
            })
        } else {
            Ok(normal)
        }
    }

    fn product(&mut self) -> Result<GroupExpr> {
        let mut factors = vec![self.power()?];
        while self.eat(&Tok::Times) {
            factors.push(self.power()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            GroupExpr::DirectProduct(factors)
        })
    }

    fn power(&mut self) -> Result<GroupExpr> {
        let base = self.primary()?;
        if self.eat(&Tok::Caret) {
            let col = self.col();
            match self.peek() {
                Some(Tok::Int(n)) if *n >= 1 => {
                    let n = *n as usize;
                    self.pos += 1;
                    if n > 4096 {
                        return Err(Error::parse(col, "exponent too large"));
                    }
                    return Ok(if n == 1 { base } else { GroupExpr::DirectProduct(vec![base; n]) });
                }
                _ => return Err(Error::parse(col, "expected a positive exponent")),
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<GroupExpr> {
        let col = self.col();
        let atom = match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.semi()?;
                self.expect(Tok::RParen, "')'")?;
                return Ok(inner);
            }
            Some(Tok::Int(1)) => {
                self.pos += 1;
                Some(GroupExpr::Finite)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match builtin(&name, col)? {
                    Some(atom) => Some(atom),
                    None => {
                        if self.peek() != Some(&Tok::LBracket) {
                            return Err(Error::parse(
                                col,
                                format!(
                                    "unknown group `{name}`; named groups need an annotation like {name}[obdim>=N]"
                                ),
                            ));
                        }
                        let (bound, flags) = self.annotation()?;
                        return Ok(GroupExpr::Asserted {
                            name,
                            bound: bound.unwrap_or(Bound::Finite(0)),
                            flags,
                        });
                    }
                }
            }
            _ => None,
        };
        let Some(atom) = atom else {
            return Err(Error::parse(col, "expected a group"));
        };
        if self.peek() != Some(&Tok::LBracket) {
            return Ok(atom);
        }
        let (bound, flags) = self.annotation()?;
        Ok(GroupExpr::Annotated {
            base: Box::new(atom),
            bound,
            flags,
        })
    }

    fn annotation(&mut self) -> Result<(Option<Bound>, Flags)> {
        self.expect(Tok::LBracket, "'['")?;
        let mut bound = None;
        let mut flags = Flags::default();
        loop {
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Ident(ref s)) if s == "obdim" => {
                    self.pos += 1;
                    self.expect(Tok::Ge, "'>='")?;
                    let col = self.col();
                    let b = match self.peek().cloned() {
                        Some(Tok::Int(n)) => Bound::Finite(n),
                        Some(Tok::Ident(ref s)) if s == "inf" => Bound::Unbounded,
                        _ => return Err(Error::parse(col, "expected an integer or 'inf'")),
                    };
                    self.pos += 1;
                    if bound.replace(b).is_some() {
                        return Err(Error::parse(col, "obdim bound given twice"));
                    }
                }
                Some(Tok::Ident(s)) => {
                    if !flags.set(&s) {
                        return Err(Error::parse(
                            col,
                            format!("unknown flag `{s}` (expected one of {})", Flags::NAMES.join(", ")),
                        ));
                    }
                    self.pos += 1;
                }
                _ => return Err(Error::parse(col, "expected 'obdim>=N' or a flag")),
            }
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RBracket, "']'")?;
        Ok((bound, flags))
    }
}

fn builtin(name: &str, col: usize) -> Result<Option<GroupExpr>> {
    if name == "Z" {
        return Ok(Some(GroupExpr::Z));
    }
    if let Some(rank) = name.strip_prefix('F') {
        if !rank.is_empty() && rank.chars().all(|c| c.is_ascii_digit()) {
            return match rank.parse::<u32>() {
                Ok(k) if k >= 2 => Ok(Some(GroupExpr::FreeGroup(k))),
                _ => Err(Error::parse(col, "free group rank must be at least 2 (write Z for rank 1)")),
            };
        }
    }
    Ok(None)
}

/// Parses a group expression.
pub fn parse(text: &str) -> Result<GroupExpr> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.chars().count() + 1,
    };
    let e = p.semi()?;
    if p.pos < p.toks.len() {
        return Err(Error::parse(p.col(), "unexpected trailing input"));
    }
    Ok(e)
}

/// Parses `text` and derives its bound.
pub fn group_bound(text: &str) -> Result<Derivation> {
    Ok(obdim_lower_bound(&parse(text)?))
}

/// `P_n` as `F_{n-1} >< (F_{n-2} >< (... >< Z))`, with `P_2 = Z`.
pub fn pure_braid_expr(n: u32) -> String {
    assert!(n >= 2, "pure braid groups start at n = 2");
    let mut e = "Z".to_string();
    for k in 2..n {
        e = format!("F{k}[weakly_convex] >< ({e})");
    }
    e
}

/// The `F2^(2n-4) >< F2` subgroup of `Out(F_n)`, n >= 3.
pub fn out_fn_witness_expr(n: u32) -> String {
    assert!(n >= 3, "the witness needs n >= 3");
    format!("F2^{} >< F2", 2 * n - 4)
}
