//! A small first-order evaluator over finite structures with unary and
//! binary relations, and the formula family that reads a successor relation
//! off a walk encoding.
//!
//! Formula text uses s-expressions:
//!
//! ```text
//! f ::= true | false
//!     | (rel NAME v v) | (un NAME v) | (eq v v)
//!     | (not f) | (and f ...) | (or f ...) | (implies f f)
//!     | (exists v f) | (forall v f)
//! ```
//!
//! `(and)` is true and `(or)` is false. Names and variables are any tokens
//! without whitespace or parentheses.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Var = Arc<str>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Rel(Arc<str>, Var, Var),
    Un(Arc<str>, Var),
    Eq(Var, Var),
    Not(Arc<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
    Exists(Var, Arc<Formula>),
    Forall(Var, Arc<Formula>),
}

pub fn var(name: &str) -> Var {
    Arc::from(name)
}

impl Formula {
    pub fn rel(name: &str, x: &Var, y: &Var) -> Self {
        Formula::Rel(Arc::from(name), x.clone(), y.clone())
    }

    pub fn un(name: &str, x: &Var) -> Self {
        Formula::Un(Arc::from(name), x.clone())
    }

    pub fn eq(x: &Var, y: &Var) -> Self {
        Formula::Eq(x.clone(), y.clone())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Arc::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Arc::new(a), Arc::new(b))
    }

    pub fn exists(v: &Var, f: Formula) -> Self {
        Formula::Exists(v.clone(), Arc::new(f))
    }

    pub fn forall(v: &Var, f: Formula) -> Self {
        Formula::Forall(v.clone(), Arc::new(f))
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let mut see = |v: &Var, bound: &Vec<Var>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Rel(_, x, y) | Formula::Eq(x, y) => {
                see(x, bound);
                see(y, bound);
            }
            Formula::Un(_, x) => see(x, bound),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_free(bound, out);
                }
            }
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Rel(..) | Formula::Un(..) | Formula::Eq(..) => 1,
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.size(),
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(Formula::size).sum::<usize>(),
            Formula::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Rel(..) | Formula::Un(..) | Formula::Eq(..) => 0,
            Formula::Not(f) => f.quantifier_depth(),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_depth(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::quantifier_depth).max().unwrap_or(0),
            Formula::Implies(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
        }
    }

    /// Replaces binary atoms for which `f` returns a formula. The replacement
    /// is used as is, so it must not capture variables bound above the atom.
    pub fn replace_atoms(&self, f: &mut dyn FnMut(&str, &Var, &Var) -> Option<Formula>) -> Formula {
        match self {
            Formula::Rel(name, x, y) => f(name, x, y).unwrap_or_else(|| self.clone()),
            Formula::True | Formula::False | Formula::Un(..) | Formula::Eq(..) => self.clone(),
            Formula::Not(g) => Formula::not(g.replace_atoms(f)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.replace_atoms(f)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.replace_atoms(f)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.replace_atoms(f), b.replace_atoms(f)),
            Formula::Exists(v, g) => Formula::exists(v, g.replace_atoms(f)),
            Formula::Forall(v, g) => Formula::forall(v, g.replace_atoms(f)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(out, "true"),
            Formula::False => write!(out, "false"),
            Formula::Rel(r, x, y) => write!(out, "(rel {r} {x} {y})"),
            Formula::Un(p, x) => write!(out, "(un {p} {x})"),
            Formula::Eq(x, y) => write!(out, "(eq {x} {y})"),
            Formula::Not(f) => write!(out, "(not {f})"),
            Formula::And(fs) | Formula::Or(fs) => {
                write!(out, "({}", if matches!(self, Formula::And(_)) { "and" } else { "or" })?;
                for f in fs {
                    write!(out, " {f}")?;
                }
                write!(out, ")")
            }
            Formula::Implies(a, b) => write!(out, "(implies {a} {b})"),
            Formula::Exists(v, f) => write!(out, "(exists {v} {f})"),
            Formula::Forall(v, f) => write!(out, "(forall {v} {f})"),
        }
    }
}

enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn tokenize(text: &str) -> Vec<String> {
    text.replace('(', " ( ")
        .replace(')', " ) ")
        .split_whitespace()
        .map(str::to_owned)
        .collect()
}

fn read_sexp(tokens: &[String], pos: &mut usize) -> Result<Sexp> {
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| Error::Formula("unexpected end of formula".into()))?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos).map(String::as_str) {
                    Some(")") => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(read_sexp(tokens, pos)?),
                    None => return Err(Error::Formula("missing ')'".into())),
                }
            }
        }
        ")" => Err(Error::Formula(format!("unexpected ')' at token {}", *pos - 1))),
        _ => Ok(Sexp::Atom(tok.clone())),
    }
}

fn atom(s: &Sexp, what: &str) -> Result<Var> {
    match s {
        Sexp::Atom(a) => Ok(Arc::from(a.as_str())),
        Sexp::List(_) => Err(Error::Formula(format!("expected {what}, found a list"))),
    }
}

fn to_formula(s: &Sexp) -> Result<Formula> {
    let items = match s {
        Sexp::Atom(a) if a == "true" => return Ok(Formula::True),
        Sexp::Atom(a) if a == "false" => return Ok(Formula::False),
        Sexp::Atom(a) => return Err(Error::Formula(format!("unexpected token '{a}'"))),
        Sexp::List(items) => items,
    };
    let head = match items.first() {
        Some(Sexp::Atom(h)) => h.as_str(),
        _ => return Err(Error::Formula("a list must start with an operator".into())),
    };
    let args = &items[1..];
    let arity = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::Formula(format!("'{head}' takes {n} arguments, got {}", args.len())))
        }
    };
    Ok(match head {
        "rel" => {
            arity(3)?;
            Formula::Rel(atom(&args[0], "relation name")?, atom(&args[1], "variable")?, atom(&args[2], "variable")?)
        }
        "un" => {
            arity(2)?;
            Formula::Un(atom(&args[0], "relation name")?, atom(&args[1], "variable")?)
        }
        "eq" => {
            arity(2)?;
            Formula::Eq(atom(&args[0], "variable")?, atom(&args[1], "variable")?)
        }
        "not" => {
            arity(1)?;
            Formula::not(to_formula(&args[0])?)
        }
        "and" => Formula::And(args.iter().map(to_formula).collect::<Result<_>>()?),
        "or" => Formula::Or(args.iter().map(to_formula).collect::<Result<_>>()?),
        "implies" => {
            arity(2)?;
            Formula::implies(to_formula(&args[0])?, to_formula(&args[1])?)
        }
        "exists" | "forall" => {
            arity(2)?;
            let v = atom(&args[0], "variable")?;
            let body = to_formula(&args[1])?;
            if head == "exists" {
                Formula::exists(&v, body)
            } else {
                Formula::forall(&v, body)
            }
        }
        other => return Err(Error::Formula(format!("unknown operator '{other}'"))),
    })
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let tokens = tokenize(text);
    let mut pos = 0;
    let s = read_sexp(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(Error::Formula(format!("trailing input after token {pos}")));
    }
    to_formula(&s)
}

/// A finite structure on `0..size` with named unary and binary relations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FOStructure {
    pub size: usize,
    pub binary: BTreeMap<String, BTreeSet<(usize, usize)>>,
    pub unary: BTreeMap<String, BTreeSet<usize>>,
}

impl FOStructure {
    pub fn new(size: usize) -> Self {
        FOStructure {
            size,
            ..Default::default()
        }
    }

    pub fn add_binary(&mut self, name: &str, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<()> {
        let set = self.binary.entry(name.to_owned()).or_default();
        for (a, b) in pairs {
            if a >= self.size || b >= self.size {
                return Err(Error::InvalidInput(format!(
                    "({a},{b}) in {name} lies outside a universe of size {}",
                    self.size
                )));
            }
            set.insert((a, b));
        }
        Ok(())
    }

    pub fn add_unary(&mut self, name: &str, elems: impl IntoIterator<Item = usize>) -> Result<()> {
        let set = self.unary.entry(name.to_owned()).or_default();
        for a in elems {
            if a >= self.size {
                return Err(Error::InvalidInput(format!(
                    "{a} in {name} lies outside a universe of size {}",
                    self.size
                )));
            }
            set.insert(a);
        }
        Ok(())
    }
}

/// Formula with relation names and variables resolved to indices.
enum Node {
    Const(bool),
    Rel(usize, usize, usize),
    Un(usize, usize),
    Eq(usize, usize),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Implies(Box<Node>, Box<Node>),
    Exists(usize, Box<Node>),
    Forall(usize, Box<Node>),
}

struct Compiler<'a> {
    bin: Vec<&'a BTreeSet<(usize, usize)>>,
    bin_index: HashMap<&'a str, usize>,
    un: Vec<&'a BTreeSet<usize>>,
    un_index: HashMap<&'a str, usize>,
    scope: Vec<(Var, usize)>,
    slots: usize,
}

impl<'a> Compiler<'a> {
    fn new(s: &'a FOStructure) -> Self {
        let mut c = Compiler {
            bin: Vec::new(),
            bin_index: HashMap::new(),
            un: Vec::new(),
            un_index: HashMap::new(),
            scope: Vec::new(),
            slots: 0,
        };
        for (name, set) in &s.binary {
            c.bin_index.insert(name.as_str(), c.bin.len());
            c.bin.push(set);
        }
        for (name, set) in &s.unary {
            c.un_index.insert(name.as_str(), c.un.len());
            c.un.push(set);
        }
        c
    }

    fn bind(&mut self, v: &Var) -> usize {
        let slot = self.slots;
        self.slots += 1;
        self.scope.push((v.clone(), slot));
        slot
    }

    fn lookup(&self, v: &Var) -> Result<usize> {
        self.scope
            .iter()
            .rev()
            .find(|(name, _)| name == v)
            .map(|&(_, slot)| slot)
            .ok_or_else(|| Error::Formula(format!("unbound variable '{v}'")))
    }

    fn compile(&mut self, f: &Formula) -> Result<Node> {
        Ok(match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Rel(r, x, y) => {
                let idx = *self
                    .bin_index
                    .get(&**r)
                    .ok_or_else(|| Error::Formula(format!("unknown binary relation '{r}'")))?;
                Node::Rel(idx, self.lookup(x)?, self.lookup(y)?)
            }
            Formula::Un(p, x) => {
                let idx = *self
                    .un_index
                    .get(&**p)
                    .ok_or_else(|| Error::Formula(format!("unknown unary relation '{p}'")))?;
                Node::Un(idx, self.lookup(x)?)
            }
            Formula::Eq(x, y) => Node::Eq(self.lookup(x)?, self.lookup(y)?),
            Formula::Not(g) => Node::Not(Box::new(self.compile(g)?)),
            Formula::And(gs) => Node::And(gs.iter().map(|g| self.compile(g)).collect::<Result<_>>()?),
            Formula::Or(gs) => Node::Or(gs.iter().map(|g| self.compile(g)).collect::<Result<_>>()?),
            Formula::Implies(a, b) => Node::Implies(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let slot = self.bind(v);
                let body = self.compile(g)?;
                self.scope.pop();
                if matches!(f, Formula::Exists(..)) {
                    Node::Exists(slot, Box::new(body))
                } else {
                    Node::Forall(slot, Box::new(body))
                }
            }
        })
    }
}

struct Eval<'a> {
    size: usize,
    bin: &'a [&'a BTreeSet<(usize, usize)>],
    un: &'a [&'a BTreeSet<usize>],
}

impl Eval<'_> {
    fn eval(&self, node: &Node, env: &mut [usize]) -> bool {
        match node {
            Node::Const(b) => *b,
            Node::Rel(r, x, y) => self.bin[*r].contains(&(env[*x], env[*y])),
            Node::Un(p, x) => self.un[*p].contains(&env[*x]),
            Node::Eq(x, y) => env[*x] == env[*y],
            Node::Not(g) => !self.eval(g, env),
            Node::And(gs) => gs.iter().all(|g| self.eval(g, env)),
            Node::Or(gs) => gs.iter().any(|g| self.eval(g, env)),
            Node::Implies(a, b) => !self.eval(a, env) || self.eval(b, env),
            Node::Exists(slot, g) => (0..self.size).any(|a| {
                env[*slot] = a;
                self.eval(g, env)
            }),
            Node::Forall(slot, g) => (0..self.size).all(|a| {
                env[*slot] = a;
                self.eval(g, env)
            }),
        }
    }
}

/// Tarskian truth of `f` under `assignment`, which must cover the free variables.
pub fn evaluate(s: &FOStructure, f: &Formula, assignment: &[(Var, usize)]) -> Result<bool> {
    let mut c = Compiler::new(s);
    let mut env = Vec::new();
    for (v, a) in assignment {
        if *a >= s.size {
            return Err(Error::Formula(format!("'{v}' is assigned {a}, outside the universe")));
        }
        c.bind(v);
        env.push(*a);
    }
    let node = c.compile(f)?;
    env.resize(c.slots, 0);
    let e = Eval {
        size: s.size,
        bin: &c.bin,
        un: &c.un,
    };
    Ok(e.eval(&node, &mut env))
}

/// `{(a, b) : s ⊨ f[x := a, y := b]}`. Free variables must be among `x`, `y`.
pub fn define_relation(s: &FOStructure, f: &Formula) -> Result<BTreeSet<(usize, usize)>> {
    let x = var("x");
    let y = var("y");
    if let Some(v) = f.free_vars().into_iter().find(|v| *v != x && *v != y) {
        return Err(Error::Formula(format!(
            "defining formula may only use free variables x and y, found '{v}'"
        )));
    }
    let mut c = Compiler::new(s);
    let sx = c.bind(&x);
    let sy = c.bind(&y);
    let node = c.compile(f)?;
    let mut env = vec![0; c.slots];
    let e = Eval {
        size: s.size,
        bin: &c.bin,
        un: &c.un,
    };
    let mut out = BTreeSet::new();
    for a in 0..s.size {
        for b in 0..s.size {
            env[sx] = a;
            env[sy] = b;
            if e.eval(&node, &mut env) {
                out.insert((a, b));
            }
        }
    }
    Ok(out)
}

/// Name of the step relation `E_ab`.
pub fn e_name(a: usize, b: usize) -> String {
    if a < 10 && b < 10 {
        format!("E{a}{b}")
    } else {
        format!("E{a},{b}")
    }
}

pub fn p_name(a: usize) -> String {
    format!("P{a}")
}

/// Builds the formulas of one reduction level `j` (from a `j`-walk to a
/// `(j-1)`-walk) with fresh bound variables.
struct LevelBuilder<'a> {
    j: usize,
    fresh: &'a mut usize,
}

impl LevelBuilder<'_> {
    fn fresh(&mut self, stem: &str) -> Var {
        *self.fresh += 1;
        Arc::from(format!("{stem}_{}", self.fresh).as_str())
    }

    fn e(&self, a: usize, b: usize, x: &Var, y: &Var) -> Formula {
        Formula::rel(&e_name(a, b), x, y)
    }

    /// `x` has a `j`-th visit. The first disjunction looks at the step out of
    /// that visit; the second at the step into it, which also covers a final
    /// visit at the end of the walk.
    fn j_times(&mut self, x: &Var) -> Formula {
        let j = self.j;
        let mut parts = Vec::with_capacity(2 * j);
        for a in 1..=j {
            let y = self.fresh("y");
            parts.push(Formula::exists(&y, self.e(j, a, x, &y)));
        }
        for a in 1..=j {
            let y = self.fresh("y");
            parts.push(Formula::exists(&y, self.e(a, j, &y, x)));
        }
        Formula::Or(parts)
    }

    fn jump(&mut self, a: usize, x: &Var) -> Formula {
        let j = self.j;
        let p = Formula::un(&p_name(j), x);
        if a + 1 == j {
            Formula::And(vec![self.j_times(x), Formula::not(p)])
        } else if a == j {
            Formula::And(vec![self.j_times(x), p])
        } else {
            Formula::False
        }
    }

    fn stay(a: usize, b: usize, x: &Var, y: &Var) -> Formula {
        if a == b {
            Formula::eq(x, y)
        } else {
            Formula::False
        }
    }

    fn next(&mut self, r: usize, a: usize, b: usize, x: &Var, y: &Var) -> Formula {
        if r == 0 {
            return Self::stay(a, b, x, y);
        }
        let z = self.fresh("z");
        let mut steps = Vec::with_capacity(self.j);
        for c in 1..=self.j {
            steps.push(Formula::And(vec![self.e(a, c, x, &z), self.next(r - 1, c, b, &z, y)]));
        }
        Formula::And(vec![
            Formula::implies(Formula::not(self.jump(a, x)), Self::stay(a, b, x, y)),
            Formula::implies(self.jump(a, x), Formula::exists(&z, Formula::Or(steps))),
        ])
    }

    /// `∃z ∨_c (E_{from,c} x z ∧ reach(c, z, y))`, where `reach` is `next^(2)`
    /// into visit `b`, or into `j-1` or `j` when `b = j - 1`.
    fn step_then_next(&mut self, from: usize, b: usize, x: &Var, y: &Var) -> Formula {
        let j = self.j;
        let z = self.fresh("z");
        let mut steps = Vec::with_capacity(j);
        for c in 1..=j {
            let reach = if b + 1 == j {
                Formula::Or(vec![self.next(2, c, j - 1, &z, y), self.next(2, c, j, &z, y)])
            } else {
                self.next(2, c, b, &z, y)
            };
            steps.push(Formula::And(vec![self.e(from, c, x, &z), reach]));
        }
        Formula::exists(&z, Formula::Or(steps))
    }

    /// `φ_{E,a,b}(x, y)` defining `E_ab` of the reduced walk.
    fn phi_e(&mut self, a: usize, b: usize, x: &Var, y: &Var) -> Formula {
        let j = self.j;
        if a + 1 < j {
            return self.step_then_next(a, b, x, y);
        }
        let stay = self.step_then_next(j - 1, b, x, y);
        let jumped = self.step_then_next(j, b, x, y);
        Formula::And(vec![
            Formula::implies(Formula::not(self.jump(j - 1, x)), stay),
            Formula::implies(self.jump(j - 1, x), jumped),
        ])
    }
}

/// The named formulas for a `k`-walk, all over free variables `x` (and `y`).
#[derive(Debug, Clone)]
pub struct PhiFamily {
    pub k: usize,
    pub formulas: BTreeMap<String, Formula>,
    pub succ: Formula,
}

pub fn build_phi_family(k: usize) -> Result<PhiFamily> {
    if k == 0 {
        return Err(Error::InvalidInput("walks need k >= 1".into()));
    }
    let x = var("x");
    let y = var("y");
    let mut fresh = 0usize;
    let mut formulas = BTreeMap::new();
    if k >= 2 {
        let mut lb = LevelBuilder { j: k, fresh: &mut fresh };
        formulas.insert(format!("{k}-times"), lb.j_times(&x));
        for a in 1..=k {
            formulas.insert(format!("jump,{a}"), lb.jump(a, &x));
        }
        for r in 0..=2 {
            for a in 1..=k {
                for b in 1..=k {
                    formulas.insert(format!("next{r},{a},{b}"), lb.next(r, a, b, &x, &y));
                }
            }
        }
        for a in 1..k {
            for b in 1..k {
                formulas.insert(format!("E,{a},{b}"), lb.phi_e(a, b, &x, &y));
            }
        }
    }
    let succ = succ_formula(k, &mut fresh);
    formulas.insert("succ".into(), succ.clone());
    Ok(PhiFamily { k, formulas, succ })
}

/// `E_11(x, y)` with every level's step atoms replaced by that level's
/// defining formula, from level 2 up to `k`.
fn succ_formula(k: usize, fresh: &mut usize) -> Formula {
    let mut f = Formula::rel(&e_name(1, 1), &var("x"), &var("y"));
    for j in 2..=k {
        let mut lb = LevelBuilder { j, fresh: &mut *fresh };
        f = f.replace_atoms(&mut |name, u, v| {
            let (a, b) = parse_e_name(name)?;
            Some(lb.phi_e(a, b, u, v))
        });
    }
    f
}

fn parse_e_name(name: &str) -> Option<(usize, usize)> {
    let rest = name.strip_prefix('E')?;
    if let Some((a, b)) = rest.split_once(',') {
        return Some((a.parse().ok()?, b.parse().ok()?));
    }
    let bytes = rest.as_bytes();
    if bytes.len() == 2 && bytes.iter().all(u8::is_ascii_digit) {
        Some(((bytes[0] - b'0') as usize, (bytes[1] - b'0') as usize))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point() -> FOStructure {
        let mut s = FOStructure::new(2);
        s.add_binary("E", [(0, 1)]).unwrap();
        s
    }

    #[test]
    fn evaluate_examples() {
        let s = two_point();
        assert!(evaluate(&s, &Formula::True, &[]).unwrap());
        let f = parse_formula("(exists y (rel E x y))").unwrap();
        assert!(evaluate(&s, &f, &[(var("x"), 0)]).unwrap());
        assert!(!evaluate(&s, &f, &[(var("x"), 1)]).unwrap());
        let taut = parse_formula("(forall x (forall y (or (eq x y) (not (eq x y)))))").unwrap();
        assert!(evaluate(&s, &taut, &[]).unwrap());
    }

    #[test]
    fn evaluation_errors() {
        let s = two_point();
        let f = parse_formula("(rel E x y)").unwrap();
        assert!(matches!(evaluate(&s, &f, &[(var("x"), 0)]), Err(Error::Formula(_))));
        let g = parse_formula("(exists y (rel F x y))").unwrap();
        assert!(evaluate(&s, &g, &[(var("x"), 0)]).is_err());
    }

    #[test]
    fn define_examples() {
        let mut s = FOStructure::new(3);
        s.add_binary("E", [(0, 1), (1, 2)]).unwrap();
        let e = define_relation(&s, &parse_formula("(rel E x y)").unwrap()).unwrap();
        assert_eq!(e, BTreeSet::from([(0, 1), (1, 2)]));
        let t = define_relation(&s, &parse_formula("(rel E y x)").unwrap()).unwrap();
        assert_eq!(t, BTreeSet::from([(1, 0), (2, 1)]));
        assert!(define_relation(&s, &parse_formula("(rel E x z)").unwrap()).is_err());
    }

    #[test]
    fn shadowing_respects_scope() {
        let s = two_point();
        // inner x is rebound; outer x stays 1
        let f = parse_formula("(and (exists x (rel E x y)) (eq x y))").unwrap();
        assert!(evaluate(&s, &f, &[(var("x"), 1), (var("y"), 1)]).unwrap());
    }

    #[test]
    fn print_parse_roundtrip() {
        let text = "(exists y (and (rel E11 x y) (not (un P2 x))))";
        let f = parse_formula(text).unwrap();
        assert_eq!(f.to_string(), text);
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        assert!(parse_formula("(and true").is_err());
        assert!(parse_formula("(frob x)").is_err());
        assert!(parse_formula("true false").is_err());
    }

    /// Printed form with the numeric suffixes of fresh variables removed.
    fn strip_fresh(f: &Formula) -> String {
        let mut out = String::new();
        let mut after_underscore = false;
        for ch in f.to_string().chars() {
            if ch == '_' {
                after_underscore = true;
            } else if !(after_underscore && ch.is_ascii_digit()) {
                after_underscore = false;
                out.push(ch);
            }
        }
        out
    }

    #[test]
    fn family_shapes() {
        let one = build_phi_family(1).unwrap();
        assert_eq!(one.succ.to_string(), "(rel E11 x y)");
        let two = build_phi_family(2).unwrap();
        let jump1 = &two.formulas["jump,1"];
        match jump1 {
            Formula::And(parts) => {
                assert_eq!(strip_fresh(&parts[0]), strip_fresh(&two.formulas["2-times"]));
                assert_eq!(parts[1].to_string(), "(not (un P2 x))");
            }
            other => panic!("unexpected shape {other}"),
        }
        assert_eq!(two.formulas["next0,1,1"].to_string(), "(eq x y)");
        assert_eq!(two.formulas["next0,1,2"], Formula::False);
        let three = build_phi_family(3).unwrap();
        assert_eq!(three.formulas["jump,1"], Formula::False);
        assert_eq!(three.succ.free_vars(), BTreeSet::from([var("x"), var("y")]));
    }

    #[test]
    fn e_names_roundtrip() {
        assert_eq!(parse_e_name(&e_name(2, 3)), Some((2, 3)));
        assert_eq!(parse_e_name(&e_name(12, 3)), Some((12, 3)));
        assert_eq!(parse_e_name("Edge"), None);
    }
}
