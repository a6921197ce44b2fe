//! Reader for the textual HKB format.
//!
//! ```text
//! % comment
//! #ontology.
//! exists mutation. top subClassOf mutated.
//! t : exists mutation. top.
//! (a, b) : r.
//! #program.
//! virus(t).
//! sc(X, 0) :- virus(X).
//! safe(X) :- virus(X), not sc(X, s(s(0))).
//! ```
//!
//! Statements before the first directive belong to the program section.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use crate::syntax::{Atom, Axiom, Concept, HybridKb, Rule, Symbol, Term};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SourceSpan {
    pub file: Arc<str>,
    /// 1-based line of the first character.
    pub line: usize,
    /// 1-based columns on `line`.
    pub columns: Range<usize>,
    /// Byte range in the input.
    pub offsets: Range<usize>,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.columns.start)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
    pub span: Option<SourceSpan>,
}

impl Diagnostic {
    fn error(code: &'static str, message: impl Into<String>, span: SourceSpan) -> Self {
        Diagnostic { severity: Severity::Error, code, message: message.into(), span: Some(span) }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(span) = &self.span {
            write!(f, "{span}: ")?;
        }
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{}]: {}", self.code, self.message)
    }
}

pub mod codes {
    pub const SYNTAX: &str = "E001";
    pub const ARITY: &str = "E002";
    pub const DIRECTIVE: &str = "E003";
    pub const LEXICAL: &str = "E004";
    pub const INDIVIDUAL: &str = "E005";
    pub const NAME_CLASH: &str = "E006";
    pub const DL_SAFETY: &str = "W001";
}

/// A parsed knowledge base together with the source location of every
/// axiom and rule.
#[derive(Clone, Debug)]
pub struct SourceKb {
    pub kb: HybridKb,
    pub axiom_spans: Vec<SourceSpan>,
    pub rule_spans: Vec<SourceSpan>,
}

impl SourceKb {
    /// DL-safety warnings located at the offending rules.
    pub fn dl_safety_warnings(&self) -> Vec<Diagnostic> {
        dl_safety_violations(&self.kb)
            .map(|(idx, diag)| Diagnostic { span: self.rule_spans.get(idx).cloned(), ..diag })
            .collect()
    }
}

/// Parses `text` with `<input>` as file name.
pub fn parse_kb(text: &str) -> Result<SourceKb, Vec<Diagnostic>> {
    parse_kb_named("<input>", text)
}

pub fn parse_kb_named(file: &str, text: &str) -> Result<SourceKb, Vec<Diagnostic>> {
    let file: Arc<str> = Arc::from(file);
    let tokens = Lexer::new(text, file.clone()).run()?;
    Parser::new(tokens, text.len(), file).run()
}

/// Parses a single ground or non-ground atom such as `sc(t, s(0))`.
pub fn parse_atom(text: &str) -> Result<Atom, Vec<Diagnostic>> {
    let file: Arc<str> = Arc::from("<atom>");
    let tokens = Lexer::new(text, file.clone()).run()?;
    let mut p = Parser::new(tokens, text.len(), file);
    let atom = p.atom().map_err(|d| vec![d])?;
    if !p.at(&Tok::Eof) {
        let span = p.span();
        return Err(vec![Diagnostic::error(codes::SYNTAX, "trailing input after atom", span)]);
    }
    Ok(atom)
}

/// One warning per rule in which some variable has no occurrence in a
/// positive non-DL body atom. Empty iff the knowledge base is DL-safe.
pub fn validate_dl_safety(kb: &HybridKb) -> Vec<Diagnostic> {
    dl_safety_violations(kb).map(|(_, d)| d).collect()
}

fn dl_safety_violations(kb: &HybridKb) -> impl Iterator<Item = (usize, Diagnostic)> + '_ {
    kb.program().iter().enumerate().filter_map(|(idx, rule)| {
        let mut covered = Vec::new();
        for atom in rule.positive.iter().filter(|a| !kb.is_dl_atom(a)) {
            atom.collect_vars(&mut covered);
        }
        let unsafe_vars: Vec<String> = rule
            .variables()
            .into_iter()
            .filter(|v| !covered.contains(v))
            .map(|v| v.to_string())
            .collect();
        if unsafe_vars.is_empty() {
            return None;
        }
        let noun = if unsafe_vars.len() == 1 { "variable" } else { "variables" };
        Some((
            idx,
            Diagnostic {
                severity: Severity::Warning,
                code: codes::DL_SAFETY,
                message: format!(
                    "rule `{rule}` is not DL-safe: {noun} {} not in a positive non-DL body atom",
                    unsafe_vars.join(", ")
                ),
                span: None,
            },
        ))
    })
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Directive(String),
    LParen,
    RParen,
    Comma,
    Dot,
    If,
    Colon,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Directive(s) => write!(f, "`#{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::If => f.write_str("`:-`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

struct Lexer<'a> {
    text: &'a str,
    file: Arc<str>,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, file: Arc<str>) -> Self {
        Lexer { text, file, pos: 0, line: 1, col: 1 }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn span_from(&self, start: usize, line: usize, col: usize) -> SourceSpan {
        let end_col = if self.line == line { self.col } else { col + 1 };
        SourceSpan { file: self.file.clone(), line, columns: col..end_col, offsets: start..self.pos }
    }

    fn run(mut self) -> Result<Vec<Token>, Vec<Diagnostic>> {
        let mut out = Vec::new();
        let mut errors = Vec::new();
        loop {
            while let Some(c) = self.peek() {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '%' {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                } else {
                    break;
                }
            }
            let (start, line, col) = (self.pos, self.line, self.col);
            let Some(c) = self.bump() else {
                out.push(Token { tok: Tok::Eof, span: self.span_from(start, line, col) });
                break;
            };
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                ':' => {
                    if self.peek() == Some('-') {
                        self.bump();
                        Tok::If
                    } else {
                        Tok::Colon
                    }
                }
                '#' => Tok::Directive(self.word()),
                c if c.is_alphanumeric() || c == '_' => {
                    let mut w = c.to_string();
                    w.push_str(&self.word());
                    Tok::Ident(w)
                }
                other => {
                    errors.push(Diagnostic::error(
                        codes::LEXICAL,
                        format!("unexpected character `{other}`"),
                        self.span_from(start, line, col),
                    ));
                    continue;
                }
            };
            out.push(Token { tok, span: self.span_from(start, line, col) });
        }
        if errors.is_empty() {
            Ok(out)
        } else {
            Err(errors)
        }
    }

    fn word(&mut self) -> String {
        let mut w = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' {
                w.push(c);
                self.bump();
            } else {
                break;
            }
        }
        w
    }
}

const CONCEPT_KEYWORDS: &[&str] = &["top", "bot", "not", "and", "or", "exists", "forall", "subClassOf"];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Program,
    Ontology,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    text_len: usize,
    file: Arc<str>,
    section: Section,
    axioms: Vec<Axiom>,
    axiom_spans: Vec<SourceSpan>,
    rules: Vec<Rule>,
    rule_spans: Vec<SourceSpan>,
    /// First occurrence of each predicate in the program.
    predicates: BTreeMap<String, (usize, SourceSpan)>,
    atom_uses: Vec<(String, usize, SourceSpan)>,
    diagnostics: Vec<Diagnostic>,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn new(tokens: Vec<Token>, text_len: usize, file: Arc<str>) -> Self {
        Parser {
            tokens,
            pos: 0,
            text_len,
            file,
            section: Section::Program,
            axioms: Vec::new(),
            axiom_spans: Vec::new(),
            rules: Vec::new(),
            rule_spans: Vec::new(),
            predicates: BTreeMap::new(),
            atom_uses: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn span(&self) -> SourceSpan {
        self.tokens[self.pos].span.clone()
    }

    fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> PResult<Token> {
        if *self.peek() == t {
            Ok(self.advance())
        } else {
            Err(self.unexpected(&format!("{t}")))
        }
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        Diagnostic::error(
            codes::SYNTAX,
            format!("expected {wanted}, found {}", self.peek()),
            self.span(),
        )
    }

    fn join(&self, start: &SourceSpan) -> SourceSpan {
        let prev = &self.tokens[self.pos.saturating_sub(1)].span;
        let end = prev.offsets.end.max(start.offsets.end);
        let columns = if prev.line == start.line {
            start.columns.start..prev.columns.end.max(start.columns.end)
        } else {
            start.columns.clone()
        };
        SourceSpan { file: start.file.clone(), line: start.line, columns, offsets: start.offsets.start..end }
    }

    fn run(mut self) -> Result<SourceKb, Vec<Diagnostic>> {
        while !self.at(&Tok::Eof) {
            let result = match self.peek().clone() {
                Tok::Directive(name) => self.directive(&name),
                _ => match self.section {
                    Section::Program => self.rule(),
                    Section::Ontology => self.axiom(),
                },
            };
            if let Err(d) = result {
                self.diagnostics.push(d);
                self.recover();
            }
        }
        self.check_names();
        if !self.diagnostics.is_empty() {
            return Err(self.diagnostics);
        }
        let whole = SourceSpan {
            file: self.file.clone(),
            line: 1,
            columns: 1..2,
            offsets: 0..self.text_len,
        };
        match HybridKb::new(self.axioms, self.rules) {
            Ok(kb) => Ok(SourceKb { kb, axiom_spans: self.axiom_spans, rule_spans: self.rule_spans }),
            Err(e) => Err(vec![Diagnostic::error(codes::NAME_CLASH, e.to_string(), whole)]),
        }
    }

    /// Skips to just past the next `.` that ends a line.
    fn recover(&mut self) {
        loop {
            match self.peek() {
                Tok::Eof => return,
                Tok::Dot => {
                    let line = self.span().line;
                    self.advance();
                    if self.at(&Tok::Eof) || self.span().line != line {
                        return;
                    }
                }
                _ => {
                    self.advance();
                }
            }
        }
    }

    fn directive(&mut self, name: &str) -> PResult<()> {
        let tok = self.advance();
        self.section = match name {
            "program" => Section::Program,
            "ontology" => Section::Ontology,
            other => {
                return Err(Diagnostic::error(
                    codes::DIRECTIVE,
                    format!("unknown directive `#{other}`"),
                    tok.span,
                ))
            }
        };
        self.expect(Tok::Dot)?;
        Ok(())
    }

    fn rule(&mut self) -> PResult<()> {
        let start = self.span();
        let head = self.atom()?;
        let (mut positive, mut negative) = (Vec::new(), Vec::new());
        if self.at(&Tok::If) {
            self.advance();
            loop {
                if self.at_keyword("not") && matches!(self.peek_at(1), Tok::Ident(_)) {
                    self.advance();
                    negative.push(self.atom()?);
                } else {
                    positive.push(self.atom()?);
                }
                if self.at(&Tok::Comma) {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::Dot)?;
        self.rules.push(Rule::new(head, positive, negative));
        self.rule_spans.push(self.join(&start));
        Ok(())
    }

    fn atom(&mut self) -> PResult<Atom> {
        let start = self.span();
        let name = match self.peek().clone() {
            Tok::Ident(name)
                if name.starts_with(|c: char| c.is_lowercase()) && name != "not" =>
            {
                self.advance();
                name
            }
            _ => return Err(self.unexpected("a predicate name (lowercase identifier)")),
        };
        let mut args = Vec::new();
        if self.at(&Tok::LParen) {
            self.advance();
            args = self.term_list()?;
        }
        let span = self.join(&start);
        match self.predicates.get(&name) {
            Some((arity, first)) if *arity != args.len() => {
                return Err(Diagnostic::error(
                    codes::ARITY,
                    format!(
                        "predicate `{name}` used with arity {} here but with arity {arity} at {first}",
                        args.len()
                    ),
                    span,
                ));
            }
            Some(_) => {}
            None => {
                self.predicates.insert(name.clone(), (args.len(), span.clone()));
            }
        }
        self.atom_uses.push((name.clone(), args.len(), span));
        Ok(Atom::new(&name, args))
    }

    fn term_list(&mut self) -> PResult<Vec<Term>> {
        let mut args = vec![self.term()?];
        while self.at(&Tok::Comma) {
            self.advance();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    fn term(&mut self) -> PResult<Term> {
        let name = match self.peek().clone() {
            Tok::Ident(name) => {
                self.advance();
                name
            }
            _ => return Err(self.unexpected("a term")),
        };
        if Symbol::is_variable_name(&name) {
            return Ok(Term::Var(Symbol::new(&name)));
        }
        if self.at(&Tok::LParen) {
            self.advance();
            let args = self.term_list()?;
            return Ok(Term::Func(Symbol::new(&name), args));
        }
        Ok(Term::Const(Symbol::new(&name)))
    }

    fn individual(&mut self) -> PResult<Term> {
        let span = self.span();
        let t = self.term()?;
        if !t.is_ground() {
            return Err(Diagnostic::error(
                codes::INDIVIDUAL,
                format!("individual `{t}` must be a ground term"),
                self.join(&span),
            ));
        }
        Ok(t)
    }

    fn axiom(&mut self) -> PResult<()> {
        let start = self.span();
        let axiom = if self.at(&Tok::LParen) && self.looks_like_role_assertion() {
            self.advance();
            let subject = self.individual()?;
            self.expect(Tok::Comma)?;
            let object = self.individual()?;
            self.expect(Tok::RParen)?;
            self.expect(Tok::Colon)?;
            let role = self.name("a role name")?;
            Axiom::RoleAssertion { subject, object, role }
        } else if self.looks_like_concept_assertion() {
            let individual = self.individual()?;
            self.expect(Tok::Colon)?;
            let concept = self.concept()?;
            Axiom::ConceptAssertion { individual, concept }
        } else {
            let sub = self.concept()?;
            if !self.at_keyword("subClassOf") {
                return Err(self.unexpected("`subClassOf`"));
            }
            self.advance();
            let sup = self.concept()?;
            Axiom::Inclusion { sub, sup }
        };
        self.expect(Tok::Dot)?;
        self.axioms.push(axiom);
        self.axiom_spans.push(self.join(&start));
        Ok(())
    }

    /// `( term ,` starts a role assertion; anything else after `(` is a
    /// parenthesised concept.
    fn looks_like_role_assertion(&self) -> bool {
        let mut depth = 0usize;
        let mut k = 1;
        loop {
            match self.peek_at(k) {
                Tok::LParen => depth += 1,
                Tok::RParen if depth == 0 => return false,
                Tok::RParen => depth -= 1,
                Tok::Comma if depth == 0 => return true,
                Tok::Ident(s) if depth == 0 && CONCEPT_KEYWORDS.contains(&s.as_str()) => {
                    return false
                }
                Tok::Eof | Tok::Dot | Tok::Colon | Tok::If | Tok::Directive(_) => return false,
                _ => {}
            }
            k += 1;
        }
    }

    fn looks_like_concept_assertion(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) if !CONCEPT_KEYWORDS.contains(&s.as_str()) => {
                matches!(self.peek_at(1), Tok::Colon | Tok::LParen)
            }
            _ => false,
        }
    }

    fn name(&mut self, what: &str) -> PResult<Symbol> {
        match self.peek().clone() {
            Tok::Ident(s) if !CONCEPT_KEYWORDS.contains(&s.as_str()) => {
                self.advance();
                Ok(Symbol::new(&s))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn concept(&mut self) -> PResult<Concept> {
        let mut c = self.conjunction()?;
        while self.at_keyword("or") {
            self.advance();
            let rhs = self.conjunction()?;
            c = Concept::or(c, rhs);
        }
        Ok(c)
    }

    fn conjunction(&mut self) -> PResult<Concept> {
        let mut c = self.unary()?;
        while self.at_keyword("and") {
            self.advance();
            let rhs = self.unary()?;
            c = Concept::and(c, rhs);
        }
        Ok(c)
    }

    fn unary(&mut self) -> PResult<Concept> {
        let Tok::Ident(word) = self.peek().clone() else {
            if self.at(&Tok::LParen) {
                self.advance();
                let c = self.concept()?;
                self.expect(Tok::RParen)?;
                return Ok(c);
            }
            return Err(self.unexpected("a concept"));
        };
        match word.as_str() {
            "not" => {
                self.advance();
                Ok(Concept::not(self.unary()?))
            }
            "exists" | "forall" => {
                self.advance();
                let role = self.name("a role name")?;
                self.expect(Tok::Dot)?;
                let body = self.concept()?;
                Ok(if word == "exists" {
                    Concept::Exists(role, Box::new(body))
                } else {
                    Concept::Forall(role, Box::new(body))
                })
            }
            "top" => {
                self.advance();
                Ok(Concept::Top)
            }
            "bot" => {
                self.advance();
                Ok(Concept::Bottom)
            }
            "and" | "or" | "subClassOf" => Err(self.unexpected("a concept")),
            _ => {
                self.advance();
                Ok(Concept::Atomic(Symbol::new(&word)))
            }
        }
    }

    /// Name-level checks that need the whole file: concept/role clashes
    /// and program atoms whose arity contradicts their ontology role.
    fn check_names(&mut self) {
        let mut concepts = std::collections::BTreeSet::new();
        let mut roles = std::collections::BTreeSet::new();
        for ax in &self.axioms {
            match ax {
                Axiom::Inclusion { sub, sup } => {
                    sub.collect_names(&mut concepts, &mut roles);
                    sup.collect_names(&mut concepts, &mut roles);
                }
                Axiom::ConceptAssertion { concept, .. } => concept.collect_names(&mut concepts, &mut roles),
                Axiom::RoleAssertion { role, .. } => {
                    roles.insert(role.clone());
                }
            }
        }
        for (ax, span) in self.axioms.iter().zip(&self.axiom_spans) {
            let mut c = std::collections::BTreeSet::new();
            let mut r = std::collections::BTreeSet::new();
            match ax {
                Axiom::Inclusion { sub, sup } => {
                    sub.collect_names(&mut c, &mut r);
                    sup.collect_names(&mut c, &mut r);
                }
                Axiom::ConceptAssertion { concept, .. } => concept.collect_names(&mut c, &mut r),
                Axiom::RoleAssertion { role, .. } => {
                    r.insert(role.clone());
                }
            }
            if let Some(name) = c.iter().find(|n| roles.contains(*n)).or(r.iter().find(|n| concepts.contains(*n))) {
                self.diagnostics.push(Diagnostic::error(
                    codes::NAME_CLASH,
                    format!("`{name}` is used both as a concept and as a role"),
                    span.clone(),
                ));
                return;
            }
        }
        for (name, arity, span) in &self.atom_uses {
            let expected = if concepts.contains(name.as_str()) {
                1
            } else if roles.contains(name.as_str()) {
                2
            } else {
                continue;
            };
            if *arity != expected {
                self.diagnostics.push(Diagnostic::error(
                    codes::ARITY,
                    format!("`{name}` is an ontology name of arity {expected} but is used with arity {arity}"),
                    span.clone(),
                ));
                return;
            }
        }
    }
}
