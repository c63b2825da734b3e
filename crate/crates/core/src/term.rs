//! Minimal reader and writer for the Prolog-style terms used by the training
//! file, the LVP dump, token facts and ULR files.
//!
//! Supported syntax: atoms (bare or single-quoted), integers and decimals,
//! compound terms, lists, and the two infix operators `=` and `+` (`+` binds
//! tighter). Variables and other operators are not needed by any of the
//! formats and are rejected.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Atom(String),
    Int(i64),
    Float(f64),
    Compound(String, Vec<Term>),
    List(Vec<Term>),
}

impl Term {
    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Term::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Term::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Term]> {
        match self {
            Term::List(items) => Some(items),
            _ => None,
        }
    }

    /// `(functor, args)` of a compound term with the given arity.
    pub fn as_compound(&self, functor: &str, arity: usize) -> Option<&[Term]> {
        match self {
            Term::Compound(f, args) if f == functor && args.len() == arity => Some(args),
            _ => None,
        }
    }

    /// Atom or number rendered as text. Lemmas like `80` come back as text.
    pub fn as_text(&self) -> Option<String> {
        match self {
            Term::Atom(a) => Some(a.clone()),
            Term::Int(i) => Some(i.to_string()),
            Term::Float(f) => Some(f.to_string()),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Atom(a) => f.write_str(&atom(a)),
            Term::Int(i) => write!(f, "{i}"),
            Term::Float(x) => write!(f, "{x}"),
            Term::Compound(name, args) => {
                write!(f, "{}(", atom(name))?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Term::List(items) => {
                f.write_str("[")?;
                for (i, a) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str("]")
            }
        }
    }
}

fn is_bare_atom(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Renders `s` as an atom, quoting only when required.
pub fn atom(s: &str) -> String {
    if is_bare_atom(s) {
        s.to_string()
    } else {
        quoted(s)
    }
}

/// Renders `s` as a single-quoted atom unconditionally.
pub fn quoted(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('\'');
    for c in s.chars() {
        match c {
            '\'' => out.push_str("\\'"),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('\'');
    out
}

/// Parses one clause: a term followed by a terminating period.
pub fn parse_clause(src: &str) -> Result<Term> {
    let mut p = Parser { chars: src.char_indices().peekable(), src };
    let t = p.term()?;
    p.skip_ws();
    p.expect('.')?;
    p.skip_ws();
    if let Some(&(i, c)) = p.chars.peek() {
        return Err(p.err(format!("trailing input `{c}` at offset {i}")));
    }
    Ok(t)
}

/// Splits `src` into clauses, skipping blank lines and `%` comments. Clauses
/// may span lines. Returns each term with the 1-based line it starts on.
pub fn parse_clauses(src: &str) -> Result<Vec<(usize, Term)>> {
    let mut out = Vec::new();
    let mut buf = String::new();
    let mut start = 0;
    for (n, line) in src.lines().enumerate() {
        let trimmed = line.trim();
        if buf.is_empty() && (trimmed.is_empty() || trimmed.starts_with('%')) {
            continue;
        }
        if buf.is_empty() {
            start = n + 1;
        } else {
            buf.push(' ');
        }
        buf.push_str(trimmed);
        if ends_clause(&buf) {
            let t = parse_clause(&buf).map_err(|e| match e {
                Error::Syntax { message, .. } => Error::Syntax { line: start, message },
                other => other,
            })?;
            out.push((start, t));
            buf.clear();
        }
    }
    if !buf.is_empty() {
        return Err(Error::Syntax { line: start, message: "unterminated clause".into() });
    }
    Ok(out)
}

/// True when `s` ends with a period outside any quoted atom.
fn ends_clause(s: &str) -> bool {
    let mut in_quote = false;
    let mut escaped = false;
    let mut last = None;
    for c in s.chars() {
        if in_quote {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '\'' {
                in_quote = false;
            }
        } else if c == '\'' {
            in_quote = true;
        }
        if !c.is_whitespace() {
            last = Some((c, in_quote));
        }
    }
    matches!(last, Some(('.', false)))
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, message: String) -> Error {
        Error::Syntax { line: 1, message }
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some((_, c)) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().map(|&(_, c)| c)
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.chars.next();
                Ok(())
            }
            Some(c) => Err(self.err(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.err(format!("expected `{want}`, found end of input"))),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let lhs = self.sum()?;
        if self.peek() == Some('=') {
            self.chars.next();
            let rhs = self.sum()?;
            return Ok(Term::Compound("=".into(), vec![lhs, rhs]));
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> Result<Term> {
        let mut lhs = self.primary()?;
        while self.peek() == Some('+') {
            self.chars.next();
            let rhs = self.primary()?;
            lhs = Term::Compound("+".into(), vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Term> {
        match self.peek() {
            Some('[') => {
                self.chars.next();
                let items = self.args(']')?;
                Ok(Term::List(items))
            }
            Some('\'') => {
                let name = self.quoted_atom()?;
                self.maybe_compound(name)
            }
            Some(c) if c.is_ascii_digit() || c == '-' => self.number(),
            Some(c) if c.is_ascii_lowercase() => {
                let name = self.bare_atom();
                self.maybe_compound(name)
            }
            Some(c) => Err(self.err(format!("unexpected `{c}`"))),
            None => Err(self.err("unexpected end of input".into())),
        }
    }

    fn maybe_compound(&mut self, name: String) -> Result<Term> {
        // no whitespace allowed between functor and `(`
        if matches!(self.chars.peek(), Some((_, '('))) {
            self.chars.next();
            let args = self.args(')')?;
            if args.is_empty() {
                return Err(self.err(format!("compound `{name}` has no arguments")));
            }
            Ok(Term::Compound(name, args))
        } else {
            Ok(Term::Atom(name))
        }
    }

    fn args(&mut self, close: char) -> Result<Vec<Term>> {
        let mut items = Vec::new();
        if self.peek() == Some(close) {
            self.chars.next();
            return Ok(items);
        }
        loop {
            items.push(self.term()?);
            match self.peek() {
                Some(',') => {
                    self.chars.next();
                }
                Some(c) if c == close => {
                    self.chars.next();
                    return Ok(items);
                }
                Some(c) => return Err(self.err(format!("expected `,` or `{close}`, found `{c}`"))),
                None => return Err(self.err(format!("missing `{close}`"))),
            }
        }
    }

    fn bare_atom(&mut self) -> String {
        let mut s = String::new();
        while let Some(&(_, c)) = self.chars.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        s
    }

    fn quoted_atom(&mut self) -> Result<String> {
        self.chars.next(); // opening quote
        let mut s = String::new();
        loop {
            match self.chars.next() {
                Some((_, '\\')) => match self.chars.next() {
                    Some((_, 'n')) => s.push('\n'),
                    Some((_, c)) => s.push(c),
                    None => break,
                },
                Some((_, '\'')) => {
                    // doubled quote is an escaped quote
                    if matches!(self.chars.peek(), Some((_, '\''))) {
                        self.chars.next();
                        s.push('\'');
                    } else {
                        return Ok(s);
                    }
                }
                Some((_, c)) => s.push(c),
                None => break,
            }
        }
        Err(self.err("unterminated quoted atom".into()))
    }

    fn number(&mut self) -> Result<Term> {
        let start = self.chars.peek().map(|&(i, _)| i).unwrap_or(0);
        let mut end = start;
        let mut first = true;
        while let Some(&(i, c)) = self.chars.peek() {
            let ok = c.is_ascii_digit() || (first && c == '-');
            // a period is part of the number only when a digit follows
            let decimal = c == '.' && self.src[i + 1..].starts_with(|d: char| d.is_ascii_digit());
            if ok || decimal {
                end = i + c.len_utf8();
                self.chars.next();
                first = false;
            } else {
                break;
            }
        }
        let text = &self.src[start..end];
        if text.contains('.') {
            text.parse().map(Term::Float).map_err(|_| self.err(format!("bad number `{text}`")))
        } else {
            text.parse().map(Term::Int).map_err(|_| self.err(format!("bad number `{text}`")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_training_term() {
        let t = parse_clause(
            "train('Mary buys a car','Commerce_buy','LUIndex'=2,\
             ['Buyer'=1+required,'Goods'=4+required],[[purchase,verb],[acquire,verb]]).",
        )
        .unwrap();
        let args = t.as_compound("train", 5).unwrap();
        assert_eq!(args[0].as_atom(), Some("Mary buys a car"));
        let lu = args[2].as_compound("=", 2).unwrap();
        assert_eq!(lu[1].as_int(), Some(2));
        let roles = args[3].as_list().unwrap();
        let buyer = roles[0].as_compound("=", 2).unwrap();
        let plus = buyer[1].as_compound("+", 2).unwrap();
        assert_eq!(plus[0].as_int(), Some(1));
        assert_eq!(plus[1].as_atom(), Some("required"));
    }

    #[test]
    fn atoms_quote_only_when_needed() {
        assert_eq!(atom("mary"), "mary");
        assert_eq!(atom("s_person"), "s_person");
        assert_eq!(atom("Commerce_buy"), "'Commerce_buy'");
        assert_eq!(atom("nsubj:pass"), "'nsubj:pass'");
        assert_eq!(atom("it's"), "'it\\'s'");
        assert_eq!(atom("80"), "'80'");
    }

    #[test]
    fn display_round_trips() {
        let src = "ulr(fid_1,'Commerce_buy',[role(rid_1,'Buyer',mary,'bn:00046516n')]).";
        let t = parse_clause(src).unwrap();
        assert_eq!(format!("{t}."), src);
    }

    #[test]
    fn multi_line_clauses_and_comments() {
        let src = "% header\nfoo(a,\n    b).\n\nbar('x. y').\n";
        let clauses = parse_clauses(src).unwrap();
        assert_eq!(clauses.len(), 2);
        assert_eq!(clauses[0].0, 2);
        assert_eq!(clauses[1].1, Term::Compound("bar".into(), vec![Term::Atom("x. y".into())]));
    }

    #[test]
    fn reports_unterminated() {
        assert!(parse_clauses("foo(a").is_err());
        assert!(parse_clause("foo(a) bar.").is_err());
    }

    #[test]
    fn numbers() {
        assert_eq!(
            parse_clause("f(-3, 0.25).").unwrap(),
            Term::Compound("f".into(), vec![Term::Int(-3), Term::Float(0.25)])
        );
    }
}
