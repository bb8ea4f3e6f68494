//! A minimal s-expression reader shared by the proof-script and
//! sampling-program file formats.
//!
//! Atoms are bare words (including `:keywords` and integers) or
//! double-quoted strings; lists are parenthesized. `;` starts a comment
//! running to end of line.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    /// Bare atom, e.g. `rwhile`, `:phi`, `42`.
    Atom(String),
    /// Double-quoted string with `\"` and `\\` escapes.
    Str(String),
    List(Vec<Sexp>),
}

impl Sexp {
    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(items) => Some(items),
            _ => None,
        }
    }

    /// Text content of either an atom or a string.
    pub fn text(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a) => Some(a),
            Sexp::Str(s) => Some(s),
            Sexp::List(_) => None,
        }
    }

    pub fn int(&self) -> Option<i64> {
        self.atom()?.parse().ok()
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(a) => write!(f, "{a}"),
            Sexp::Str(s) => write!(f, "{:?}", s),
            Sexp::List(items) => {
                write!(f, "(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("s-expression error at {line}:{col}: {message}")]
pub struct SexpError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

struct Reader<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Reader<'a> {
    fn error(&self, message: impl Into<String>) -> SexpError {
        SexpError {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn skip_trivia(&mut self) {
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace() {
                self.bump();
            } else if b == b';' {
                while let Some(c) = self.bump() {
                    if c == b'\n' {
                        break;
                    }
                }
            } else {
                return;
            }
        }
    }

    fn read(&mut self) -> Result<Sexp, SexpError> {
        self.skip_trivia();
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.peek() {
                        None => return Err(self.error("unclosed `(`")),
                        Some(b')') => {
                            self.bump();
                            return Ok(Sexp::List(items));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(b')') => Err(self.error("unexpected `)`")),
            Some(b'"') => {
                self.bump();
                let mut out = String::new();
                loop {
                    match self.bump() {
                        None => return Err(self.error("unterminated string")),
                        Some(b'"') => return Ok(Sexp::Str(out)),
                        Some(b'\\') => match self.bump() {
                            Some(b'"') => out.push('"'),
                            Some(b'\\') => out.push('\\'),
                            Some(b'n') => out.push('\n'),
                            _ => return Err(self.error("bad escape in string")),
                        },
                        Some(b) => out.push(b as char),
                    }
                }
            }
            Some(_) => {
                let start = self.pos;
                while let Some(b) = self.peek() {
                    if b.is_ascii_whitespace() || b == b'(' || b == b')' || b == b'"' || b == b';'
                    {
                        break;
                    }
                    self.bump();
                }
                let word = std::str::from_utf8(&self.src[start..self.pos])
                    .map_err(|_| self.error("non-utf8 atom"))?;
                Ok(Sexp::Atom(word.to_string()))
            }
        }
    }
}

/// Parses one s-expression, requiring nothing but trivia after it.
pub fn parse_one(src: &str) -> Result<Sexp, SexpError> {
    let mut r = Reader {
        src: src.as_bytes(),
        pos: 0,
        line: 1,
        col: 1,
    };
    let e = r.read()?;
    r.skip_trivia();
    if r.peek().is_some() {
        return Err(r.error("trailing input after s-expression"));
    }
    Ok(e)
}
