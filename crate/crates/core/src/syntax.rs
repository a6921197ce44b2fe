//! Syntax of hybrid knowledge bases: Herbrand terms with function symbols,
//! atoms and normal rules on the program side, ALC concepts and axioms on
//! the ontology side.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::KbError;

/// An interned name. Cloning is a reference-count bump; equality, hashing
/// and ordering are by string content.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Variables start with an uppercase letter or an underscore.
    pub fn is_variable_name(name: &str) -> bool {
        name.starts_with(|c: char| c.is_ascii_uppercase() || c == '_')
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl Borrow<str> for Symbol {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A Herbrand term.
///
/// The derived order puts constants before function terms before
/// variables; within a kind, terms compare by name and then argument-wise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(Symbol),
    Func(Symbol, Vec<Term>),
    Var(Symbol),
}

impl Term {
    pub fn constant(name: &str) -> Self {
        Term::Const(Symbol::new(name))
    }

    pub fn var(name: &str) -> Self {
        Term::Var(Symbol::new(name))
    }

    pub fn func(name: &str, args: Vec<Term>) -> Self {
        Term::Func(Symbol::new(name), args)
    }

    /// Nesting depth of function applications: 0 for constants and
    /// variables, one more than the deepest argument otherwise.
    pub fn depth(&self) -> usize {
        match self {
            Term::Const(_) | Term::Var(_) => 0,
            Term::Func(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Const(_) => true,
            Term::Var(_) => false,
            Term::Func(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<Symbol>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Const(_) => {}
            Term::Func(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub(crate) fn collect_symbols(
        &self,
        constants: &mut BTreeSet<Symbol>,
        functions: &mut BTreeSet<(Symbol, usize)>,
    ) {
        match self {
            Term::Const(c) => {
                constants.insert(c.clone());
            }
            Term::Var(_) => {}
            Term::Func(f, args) => {
                functions.insert((f.clone(), args.len()));
                for a in args {
                    a.collect_symbols(constants, functions);
                }
            }
        }
    }

    /// Applies a substitution. Unbound variables are left in place.
    pub fn substitute(&self, subst: &BTreeMap<Symbol, Term>) -> Term {
        match self {
            Term::Var(v) => subst.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Const(_) => self.clone(),
            Term::Func(f, args) => {
                Term::Func(f.clone(), args.iter().map(|a| a.substitute(subst)).collect())
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) | Term::Var(c) => write!(f, "{c}"),
            Term::Func(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A predicate applied to terms. Arity is the length of `args`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub predicate: Symbol,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: &str, args: Vec<Term>) -> Self {
        Atom { predicate: Symbol::new(predicate), args }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    /// Deepest argument term; 0 for propositional atoms.
    pub fn depth(&self) -> usize {
        self.args.iter().map(Term::depth).max().unwrap_or(0)
    }

    pub fn substitute(&self, subst: &BTreeMap<Symbol, Term>) -> Atom {
        Atom {
            predicate: self.predicate.clone(),
            args: self.args.iter().map(|a| a.substitute(subst)).collect(),
        }
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<Symbol>) {
        self.args.iter().for_each(|a| a.collect_vars(out));
    }
}

/// Total order on atoms: predicate name, then arity, then arguments.
pub fn canonical_order(a: &Atom, b: &Atom) -> Ordering {
    a.predicate
        .cmp(&b.predicate)
        .then(a.args.len().cmp(&b.args.len()))
        .then_with(|| a.args.cmp(&b.args))
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        canonical_order(self, other)
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// `head :- pos_1, ..., pos_n, not neg_1, ..., not neg_m.`
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Rule {
    pub head: Atom,
    pub positive: Vec<Atom>,
    pub negative: Vec<Atom>,
}

impl Rule {
    pub fn new(head: Atom, positive: Vec<Atom>, negative: Vec<Atom>) -> Self {
        Rule { head, positive, negative }
    }

    pub fn fact(head: Atom) -> Self {
        Rule::new(head, Vec::new(), Vec::new())
    }

    pub fn is_fact(&self) -> bool {
        self.positive.is_empty() && self.negative.is_empty()
    }

    /// Variables in order of first occurrence (head, positive body, negative body).
    pub fn variables(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.head.collect_vars(&mut out);
        self.positive.iter().for_each(|a| a.collect_vars(&mut out));
        self.negative.iter().for_each(|a| a.collect_vars(&mut out));
        out
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        std::iter::once(&self.head).chain(&self.positive).chain(&self.negative)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.is_fact() {
            f.write_str(" :- ")?;
            let lits = self
                .positive
                .iter()
                .map(|a| a.to_string())
                .chain(self.negative.iter().map(|a| format!("not {a}")));
            for (i, l) in lits.enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                f.write_str(&l)?;
            }
        }
        f.write_str(".")
    }
}

/// ALC concept expressions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Concept {
    Top,
    Bottom,
    Atomic(Symbol),
    Not(Box<Concept>),
    And(Box<Concept>, Box<Concept>),
    Or(Box<Concept>, Box<Concept>),
    Exists(Symbol, Box<Concept>),
    Forall(Symbol, Box<Concept>),
}

impl Concept {
    pub fn atomic(name: &str) -> Self {
        Concept::Atomic(Symbol::new(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Concept) -> Self {
        Concept::Not(Box::new(c))
    }

    pub fn and(a: Concept, b: Concept) -> Self {
        Concept::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Concept, b: Concept) -> Self {
        Concept::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(role: &str, c: Concept) -> Self {
        Concept::Exists(Symbol::new(role), Box::new(c))
    }

    pub fn forall(role: &str, c: Concept) -> Self {
        Concept::Forall(Symbol::new(role), Box::new(c))
    }

    pub(crate) fn collect_names(&self, concepts: &mut BTreeSet<Symbol>, roles: &mut BTreeSet<Symbol>) {
        match self {
            Concept::Top | Concept::Bottom => {}
            Concept::Atomic(a) => {
                concepts.insert(a.clone());
            }
            Concept::Not(c) => c.collect_names(concepts, roles),
            Concept::And(a, b) | Concept::Or(a, b) => {
                a.collect_names(concepts, roles);
                b.collect_names(concepts, roles);
            }
            Concept::Exists(r, c) | Concept::Forall(r, c) => {
                roles.insert(r.clone());
                c.collect_names(concepts, roles);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Concept::Or(..) => 0,
            Concept::And(..) => 1,
            Concept::Exists(..) | Concept::Forall(..) => 2,
            _ => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.precedence();
        // Quantifiers extend as far right as possible, so they are wrapped
        // whenever anything could follow them.
        let wrap = p < min || (p == 2 && min > 0);
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Concept::Top => f.write_str("top")?,
            Concept::Bottom => f.write_str("bot")?,
            Concept::Atomic(a) => write!(f, "{a}")?,
            Concept::Not(c) => {
                f.write_str("not ")?;
                c.fmt_prec(f, 3)?;
            }
            Concept::And(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" and ")?;
                b.fmt_prec(f, 2)?;
            }
            Concept::Or(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" or ")?;
                b.fmt_prec(f, 1)?;
            }
            Concept::Exists(r, c) => {
                write!(f, "exists {r}. ")?;
                c.fmt_prec(f, 0)?;
            }
            Concept::Forall(r, c) => {
                write!(f, "forall {r}. ")?;
                c.fmt_prec(f, 0)?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Axiom {
    /// `sub ⊑ sup`
    Inclusion { sub: Concept, sup: Concept },
    /// `individual : concept`
    ConceptAssertion { individual: Term, concept: Concept },
    /// `(subject, object) : role`
    RoleAssertion { subject: Term, object: Term, role: Symbol },
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::Inclusion { sub, sup } => {
                sub.fmt_prec(f, 1)?;
                f.write_str(" subClassOf ")?;
                sup.fmt_prec(f, 1)?;
            }
            Axiom::ConceptAssertion { individual, concept } => {
                write!(f, "{individual} : {concept}")?;
            }
            Axiom::RoleAssertion { subject, object, role } => {
                write!(f, "({subject}, {object}) : {role}")?;
            }
        }
        f.write_str(".")
    }
}

/// Names occurring in a knowledge base.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Signature {
    pub constants: BTreeSet<Symbol>,
    pub functions: BTreeSet<(Symbol, usize)>,
    pub predicates: BTreeMap<Symbol, usize>,
    pub concepts: BTreeSet<Symbol>,
    pub roles: BTreeSet<Symbol>,
}

impl Signature {
    /// A predicate is a DL-predicate when it names an ontology concept
    /// (arity 1) or role (arity 2).
    pub fn is_dl_predicate(&self, name: &str) -> bool {
        self.concepts.contains(name) || self.roles.contains(name)
    }

    pub fn dl_predicates(&self) -> impl Iterator<Item = &Symbol> {
        self.predicates.keys().filter(|p| self.is_dl_predicate(p.as_str()))
    }

    pub fn is_function_free(&self) -> bool {
        self.functions.is_empty()
    }
}

/// A hybrid knowledge base: an ALC ontology together with a normal program.
#[derive(Clone, Debug)]
pub struct HybridKb {
    ontology: Vec<Axiom>,
    program: Vec<Rule>,
    signature: Signature,
}

impl PartialEq for HybridKb {
    fn eq(&self, other: &Self) -> bool {
        self.ontology == other.ontology && self.program == other.program
    }
}

impl Eq for HybridKb {}

impl HybridKb {
    /// Builds a knowledge base and derives its signature.
    ///
    /// Fails when a predicate occurs with two arities, when a name is used
    /// both as a concept and as a role, when a DL-predicate is used in the
    /// program with the wrong arity, or when an assertion names a
    /// non-ground individual.
    pub fn new(ontology: Vec<Axiom>, program: Vec<Rule>) -> Result<Self, KbError> {
        let mut sig = Signature::default();
        for ax in &ontology {
            match ax {
                Axiom::Inclusion { sub, sup } => {
                    sub.collect_names(&mut sig.concepts, &mut sig.roles);
                    sup.collect_names(&mut sig.concepts, &mut sig.roles);
                }
                Axiom::ConceptAssertion { individual, concept } => {
                    if !individual.is_ground() {
                        return Err(KbError::NonGroundIndividual(individual.to_string()));
                    }
                    individual.collect_symbols(&mut sig.constants, &mut sig.functions);
                    concept.collect_names(&mut sig.concepts, &mut sig.roles);
                }
                Axiom::RoleAssertion { subject, object, role } => {
                    for t in [subject, object] {
                        if !t.is_ground() {
                            return Err(KbError::NonGroundIndividual(t.to_string()));
                        }
                        t.collect_symbols(&mut sig.constants, &mut sig.functions);
                    }
                    sig.roles.insert(role.clone());
                }
            }
        }
        if let Some(name) = sig.concepts.intersection(&sig.roles).next() {
            return Err(KbError::ConceptRoleClash(name.to_string()));
        }
        for rule in &program {
            for atom in rule.atoms() {
                let arity = atom.arity();
                match sig.predicates.get(&atom.predicate) {
                    Some(&known) if known != arity => {
                        return Err(KbError::ArityClash {
                            predicate: atom.predicate.to_string(),
                            first: known,
                            second: arity,
                        });
                    }
                    Some(_) => {}
                    None => {
                        sig.predicates.insert(atom.predicate.clone(), arity);
                    }
                }
                let expected = if sig.concepts.contains(&atom.predicate) {
                    Some(1)
                } else if sig.roles.contains(&atom.predicate) {
                    Some(2)
                } else {
                    None
                };
                if let Some(expected) = expected {
                    if expected != arity {
                        return Err(KbError::DlArityClash {
                            predicate: atom.predicate.to_string(),
                            expected,
                            found: arity,
                        });
                    }
                }
                for t in &atom.args {
                    t.collect_symbols(&mut sig.constants, &mut sig.functions);
                }
            }
        }
        Ok(HybridKb { ontology, program, signature: sig })
    }

    pub fn empty() -> Self {
        HybridKb { ontology: Vec::new(), program: Vec::new(), signature: Signature::default() }
    }

    pub fn ontology(&self) -> &[Axiom] {
        &self.ontology
    }

    pub fn program(&self) -> &[Rule] {
        &self.program
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn is_dl_atom(&self, atom: &Atom) -> bool {
        self.signature.is_dl_predicate(atom.predicate.as_str())
    }

    pub fn is_function_free(&self) -> bool {
        self.signature.is_function_free()
    }
}

/// Prints the knowledge base in the textual HKB format.
impl fmt::Display for HybridKb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.ontology.is_empty() {
            writeln!(f, "#ontology.")?;
            for ax in &self.ontology {
                writeln!(f, "{ax}")?;
            }
        }
        if !self.program.is_empty() {
            writeln!(f, "#program.")?;
            for r in &self.program {
                writeln!(f, "{r}")?;
            }
        }
        Ok(())
    }
}
