//! Concrete syntax for WHILE programs.
//!
//! ```text
//! program := "vars" ident ("," ident)* ";" com
//! com     := stmt (";" stmt)*                        (left-associative Seq)
//! stmt    := "skip"
//!          | ident ":=" exp
//!          | "if" "(" exp "==" "0" ")" "{" com "}" "else" "{" com "}"
//!          | "while" "(" exp "!=" "0" ")" ["decr" exp] "{" com "}"
//! exp     := term (("+"|"-") term)*
//! term    := atom ("*" atom)*
//! atom    := integer | ident | "lt" "(" exp "," exp ")" | "(" exp ")" | "-" atom
//! ```
//!
//! `;` is parsed left-associatively, so `a; b; c` is `Seq(Seq(a, b), c)`.
//! Sub-command lookup (hybrid typechecking) matches on exact AST equality,
//! so a trusted prefix `a; b` of `a; b; c` is a subtree under this grouping.

use std::fmt;

use super::ast::{Com, Exp, Program, Store, VarSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UndeclaredVariable(String),
    DuplicateDeclaration(String),
}

/// A parse failure with 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(msg) => {
                write!(f, "parse error at {}:{}: {}", self.line, self.col, msg)
            }
            ParseErrorKind::UndeclaredVariable(name) => write!(
                f,
                "undeclared variable `{}` at {}:{}",
                name, self.line, self.col
            ),
            ParseErrorKind::DuplicateDeclaration(name) => write!(
                f,
                "duplicate declaration of `{}` at {}:{}",
                name, self.line, self.col
            ),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Punct(&'static str),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            kind: ParseErrorKind::Syntax(msg.into()),
            line: self.line,
            col: self.col,
        }
    }

    fn bump(&mut self) -> u8 {
        let b = self.src[self.pos];
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        b
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn tokenize(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace() {
                self.bump();
                continue;
            }
            let (line, col) = (self.line, self.col);
            let tok = match b {
                b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                    let start = self.pos;
                    while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_')
                    {
                        self.bump();
                    }
                    let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    Tok::Ident(word.to_string())
                }
                b'0'..=b'9' => {
                    let start = self.pos;
                    while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                        self.bump();
                    }
                    let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    let v: i64 = digits
                        .parse()
                        .map_err(|_| self.error(format!("integer literal `{digits}` overflows")))?;
                    Tok::Int(v)
                }
                b':' => {
                    self.bump();
                    if self.peek() == Some(b'=') {
                        self.bump();
                        Tok::Punct(":=")
                    } else {
                        return Err(self.error("expected `=` after `:`"));
                    }
                }
                b'=' => {
                    self.bump();
                    if self.peek() == Some(b'=') {
                        self.bump();
                        Tok::Punct("==")
                    } else {
                        return Err(self.error("expected `==`"));
                    }
                }
                b'!' => {
                    self.bump();
                    if self.peek() == Some(b'=') {
                        self.bump();
                        Tok::Punct("!=")
                    } else {
                        return Err(self.error("expected `=` after `!`"));
                    }
                }
                b'+' | b'-' | b'*' | b'(' | b')' | b'{' | b'}' | b',' | b';' => {
                    self.bump();
                    match b {
                        b'+' => Tok::Punct("+"),
                        b'-' => Tok::Punct("-"),
                        b'*' => Tok::Punct("*"),
                        b'(' => Tok::Punct("("),
                        b')' => Tok::Punct(")"),
                        b'{' => Tok::Punct("{"),
                        b'}' => Tok::Punct("}"),
                        b',' => Tok::Punct(","),
                        _ => Tok::Punct(";"),
                    }
                }
                other => {
                    return Err(self.error(format!("unexpected character `{}`", other as char)))
                }
            };
            out.push(Spanned { tok, line, col });
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    vars: Vec<String>,
    end_line: usize,
    end_col: usize,
}

impl Parser {
    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(s) => (s.line, s.col),
            None => (self.end_line, self.end_col),
        }
    }

    fn error_at(&self, kind: ParseErrorKind) -> ParseError {
        let (line, col) = self.here();
        ParseError { kind, line, col }
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        self.error_at(ParseErrorKind::Syntax(msg.into()))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn eat_punct(&mut self, p: &'static str) -> bool {
        if self.peek() == Some(&Tok::Punct(p)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &'static str) -> Result<(), ParseError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{p}`")))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(w)) if w == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.error("expected identifier")),
        }
    }

    fn check_declared(&self, name: &str) -> Result<(), ParseError> {
        if self.vars.iter().any(|v| v == name) {
            Ok(())
        } else {
            Err(self.error_at(ParseErrorKind::UndeclaredVariable(name.to_string())))
        }
    }

    fn parse_program(&mut self) -> Result<Program, ParseError> {
        if !self.eat_keyword("vars") {
            return Err(self.error("expected `vars`"));
        }
        loop {
            let name = self.expect_ident()?;
            if is_keyword(&name) {
                return Err(self.error(format!("`{name}` is a reserved word")));
            }
            if self.vars.contains(&name) {
                return Err(self.error_at(ParseErrorKind::DuplicateDeclaration(name)));
            }
            self.vars.push(name);
            if !self.eat_punct(",") {
                break;
            }
        }
        self.expect_punct(";")?;
        let body = self.parse_com()?;
        if self.pos != self.toks.len() {
            return Err(self.error("trailing input after program"));
        }
        let vars = VarSet::new(std::mem::take(&mut self.vars)).expect("duplicates checked");
        Program::new(vars, body).map_err(|v| self.error_at(ParseErrorKind::UndeclaredVariable(v)))
    }

    fn parse_com(&mut self) -> Result<Com, ParseError> {
        let mut acc = self.parse_stmt()?;
        while self.eat_punct(";") {
            let next = self.parse_stmt()?;
            acc = Com::seq(acc, next);
        }
        Ok(acc)
    }

    fn parse_stmt(&mut self) -> Result<Com, ParseError> {
        if self.eat_keyword("skip") {
            return Ok(Com::Skip);
        }
        if self.eat_keyword("if") {
            self.expect_punct("(")?;
            let guard = self.parse_exp()?;
            self.expect_punct("==")?;
            self.expect_zero()?;
            self.expect_punct(")")?;
            self.expect_punct("{")?;
            let then_branch = self.parse_com()?;
            self.expect_punct("}")?;
            if !self.eat_keyword("else") {
                return Err(self.error("expected `else`"));
            }
            self.expect_punct("{")?;
            let else_branch = self.parse_com()?;
            self.expect_punct("}")?;
            return Ok(Com::if_zero(guard, then_branch, else_branch));
        }
        if self.eat_keyword("while") {
            self.expect_punct("(")?;
            let guard = self.parse_exp()?;
            self.expect_punct("!=")?;
            self.expect_zero()?;
            self.expect_punct(")")?;
            let metric = if self.eat_keyword("decr") {
                Some(self.parse_exp()?)
            } else {
                None
            };
            self.expect_punct("{")?;
            let body = self.parse_com()?;
            self.expect_punct("}")?;
            return Ok(Com::while_nonzero(guard, body, metric));
        }
        // assignment
        let name = self.expect_ident()?;
        if is_keyword(&name) {
            return Err(self.error(format!("unexpected keyword `{name}`")));
        }
        self.check_declared(&name)?;
        self.expect_punct(":=")?;
        let rhs = self.parse_exp()?;
        Ok(Com::assign(name, rhs))
    }

    fn expect_zero(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Int(0)) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error("expected `0`")),
        }
    }

    fn parse_exp(&mut self) -> Result<Exp, ParseError> {
        let mut acc = self.parse_term()?;
        loop {
            if self.eat_punct("+") {
                let rhs = self.parse_term()?;
                acc = Exp::add(acc, rhs);
            } else if self.eat_punct("-") {
                let rhs = self.parse_term()?;
                acc = Exp::sub(acc, rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    fn parse_term(&mut self) -> Result<Exp, ParseError> {
        let mut acc = self.parse_atom()?;
        while self.eat_punct("*") {
            let rhs = self.parse_atom()?;
            acc = Exp::mul(acc, rhs);
        }
        Ok(acc)
    }

    fn parse_atom(&mut self) -> Result<Exp, ParseError> {
        if self.eat_punct("(") {
            let e = self.parse_exp()?;
            self.expect_punct(")")?;
            return Ok(e);
        }
        if self.eat_punct("-") {
            // negative literal or negated atom, encoded as 0 - e
            if let Some(Tok::Int(v)) = self.peek() {
                let v = *v;
                self.pos += 1;
                return Ok(Exp::lit(v.checked_neg().ok_or_else(|| {
                    self.error("integer literal overflows")
                })?));
            }
            let inner = self.parse_atom()?;
            return Ok(Exp::sub(Exp::lit(0), inner));
        }
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(Exp::lit(v))
            }
            Some(Tok::Ident(w)) if w == "lt" => {
                self.pos += 1;
                self.expect_punct("(")?;
                let l = self.parse_exp()?;
                self.expect_punct(",")?;
                let r = self.parse_exp()?;
                self.expect_punct(")")?;
                Ok(Exp::lt(l, r))
            }
            Some(Tok::Ident(w)) => {
                if is_keyword(w) {
                    return Err(self.error(format!("unexpected keyword `{w}`")));
                }
                let name = w.clone();
                self.pos += 1;
                self.check_declared(&name)?;
                Ok(Exp::var(name))
            }
            _ => Err(self.error("expected expression")),
        }
    }
}

fn is_keyword(w: &str) -> bool {
    matches!(w, "vars" | "skip" | "if" | "else" | "while" | "decr" | "lt")
}

/// Parses a full program: `vars x,y; <com>`.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let toks = Lexer::new(text).tokenize()?;
    let (end_line, end_col) = toks
        .last()
        .map(|s| (s.line, s.col + 1))
        .unwrap_or((1, 1));
    let mut p = Parser {
        toks,
        pos: 0,
        vars: Vec::new(),
        end_line,
        end_col,
    };
    p.parse_program()
}

/// Parses a bare command in the scope of an existing variable set.
pub fn parse_com_with_vars(text: &str, vars: &VarSet) -> Result<Com, ParseError> {
    let toks = Lexer::new(text).tokenize()?;
    let (end_line, end_col) = toks
        .last()
        .map(|s| (s.line, s.col + 1))
        .unwrap_or((1, 1));
    let mut p = Parser {
        toks,
        pos: 0,
        vars: vars.names().map(|s| s.to_string()).collect(),
        end_line,
        end_col,
    };
    let com = p.parse_com()?;
    if p.pos != p.toks.len() {
        return Err(p.error("trailing input after command"));
    }
    Ok(com)
}

/// Parses a bare expression in the scope of an existing variable set.
pub fn parse_exp_with_vars(text: &str, vars: &VarSet) -> Result<Exp, ParseError> {
    let toks = Lexer::new(text).tokenize()?;
    let (end_line, end_col) = toks
        .last()
        .map(|s| (s.line, s.col + 1))
        .unwrap_or((1, 1));
    let mut p = Parser {
        toks,
        pos: 0,
        vars: vars.names().map(|s| s.to_string()).collect(),
        end_line,
        end_col,
    };
    let e = p.parse_exp()?;
    if p.pos != p.toks.len() {
        return Err(p.error("trailing input after expression"));
    }
    Ok(e)
}

/// Parses the CLI store literal format `x=1,y=-2`. Unmentioned declared
/// variables default to 0; unknown names are rejected.
pub fn parse_store_literal(text: &str, program: &Program) -> Result<Store, ParseError> {
    let mut store = Store::zeroed(std::sync::Arc::clone(&program.vars));
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(store);
    }
    for (i, part) in trimmed.split(',').enumerate() {
        let mut halves = part.splitn(2, '=');
        let name = halves.next().unwrap_or("").trim();
        let value = halves.next().ok_or(ParseError {
            kind: ParseErrorKind::Syntax(format!("expected `name=value` in `{part}`")),
            line: 1,
            col: i + 1,
        })?;
        let v: i64 = value.trim().parse().map_err(|_| ParseError {
            kind: ParseErrorKind::Syntax(format!("bad integer `{}`", value.trim())),
            line: 1,
            col: i + 1,
        })?;
        if !store.set(name, v) {
            return Err(ParseError {
                kind: ParseErrorKind::UndeclaredVariable(name.to_string()),
                line: 1,
                col: i + 1,
            });
        }
    }
    Ok(store)
}
