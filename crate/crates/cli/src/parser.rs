//! Line-oriented parser for `.hcov` model files.
//!
//! Grammar (one directive per line, `#` starts a comment):
//!
//! ```text
//! system petri|msr
//! places p q r                    # petri
//! events e1 e2                    # petri
//! logmode word|bag                # petri
//! trans t1: pre p, p -> post q emit e1
//! enum msg { req ack }            # msr
//! pred c1/1 ok/0 h(msg, ag, id)   # msr
//! rule r1: c1(X), a1(_) -> c1(X), a2(X), ha(X) where true
//! init: c1(1), hc(1), a1(2)       # msr (repeatable); petri: init: p:1, q
//! target conflict: [hc(A), hi(A)] : {}
//! target covq: marking q:1 ; history word ht ht
//! ```
//!
//! Identifiers starting with an uppercase letter are variables, `_` is
//! a fresh anonymous variable, lowercase identifiers are symbols.
//! Constraints are comma-joined `X < Y` / `X = Y` atoms (or `true`);
//! `Y > X` is accepted for `X < Y`.

use std::fmt;

use thiserror::Error;

use crate::model::{
    EnumDecl, HistorySpec, InitDecl, ModelFile, ModelKind, PredDecl, PredSig, RawAtom,
    RawConstraintAtom, RawTerm, RuleDecl, TargetBody, TargetDecl, TransDecl,
};
use hcov_core::history::LogMode;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(i64),
    Colon,
    Semi,
    Comma,
    Arrow,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Slash,
    Lt,
    Gt,
    Eq,
    Underscore,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Num(n) => write!(f, "{n}"),
            Tok::Colon => write!(f, ":"),
            Tok::Semi => write!(f, ";"),
            Tok::Comma => write!(f, ","),
            Tok::Arrow => write!(f, "->"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::LBrace => write!(f, "{{"),
            Tok::RBrace => write!(f, "}}"),
            Tok::LBracket => write!(f, "["),
            Tok::RBracket => write!(f, "]"),
            Tok::Slash => write!(f, "/"),
            Tok::Lt => write!(f, "<"),
            Tok::Gt => write!(f, ">"),
            Tok::Eq => write!(f, "="),
            Tok::Underscore => write!(f, "_"),
        }
    }
}

fn tokenize(line: &str, line_no: usize) -> Result<Vec<Tok>, ParseError> {
    let mut out = Vec::new();
    let bytes: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            '#' => break,
            c if c.is_whitespace() => i += 1,
            ':' => {
                out.push(Tok::Colon);
                i += 1;
            }
            ';' => {
                out.push(Tok::Semi);
                i += 1;
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '{' => {
                out.push(Tok::LBrace);
                i += 1;
            }
            '}' => {
                out.push(Tok::RBrace);
                i += 1;
            }
            '[' => {
                out.push(Tok::LBracket);
                i += 1;
            }
            ']' => {
                out.push(Tok::RBracket);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '<' => {
                out.push(Tok::Lt);
                i += 1;
            }
            '>' => {
                out.push(Tok::Gt);
                i += 1;
            }
            '=' => {
                out.push(Tok::Eq);
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&'>') {
                    out.push(Tok::Arrow);
                    i += 2;
                } else if bytes.get(i + 1).is_some_and(|c| c.is_ascii_digit()) {
                    let mut j = i + 1;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    let text: String = bytes[i..j].iter().collect();
                    out.push(Tok::Num(text.parse().map_err(|_| ParseError {
                        line: line_no,
                        message: format!("bad number {text}"),
                    })?));
                    i = j;
                } else {
                    return Err(ParseError {
                        line: line_no,
                        message: "stray '-'".into(),
                    });
                }
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let text: String = bytes[i..j].iter().collect();
                out.push(Tok::Num(text.parse().map_err(|_| ParseError {
                    line: line_no,
                    message: format!("bad number {text}"),
                })?));
                i = j;
            }
            '_' if !bytes
                .get(i + 1)
                .is_some_and(|c| c.is_alphanumeric() || *c == '_') =>
            {
                out.push(Tok::Underscore);
                i += 1;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_alphanumeric() || bytes[j] == '_') {
                    j += 1;
                }
                out.push(Tok::Ident(bytes[i..j].iter().collect()));
                i = j;
            }
            other => {
                return Err(ParseError {
                    line: line_no,
                    message: format!("unexpected character {other:?}"),
                });
            }
        }
    }
    Ok(out)
}

/// Cursor over one line's tokens.
struct Cur<'a> {
    toks: &'a [Tok],
    pos: usize,
    line: usize,
}

impl<'a> Cur<'a> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(ParseError {
                line: self.line,
                message: format!("expected '{want}', found '{t}'"),
            }),
            None => Err(ParseError {
                line: self.line,
                message: format!("expected '{want}' at end of line"),
            }),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            Some(t) => Err(ParseError {
                line: self.line,
                message: format!("expected {what}, found '{t}'"),
            }),
            None => Err(ParseError {
                line: self.line,
                message: format!("expected {what} at end of line"),
            }),
        }
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expect_done(&self) -> Result<(), ParseError> {
        if self.done() {
            Ok(())
        } else {
            Err(ParseError {
                line: self.line,
                message: format!("unexpected trailing '{}'", self.toks[self.pos]),
            })
        }
    }
}

fn is_var_name(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_uppercase())
}

/// `name` or `name(term, ...)`.
fn parse_atom(cur: &mut Cur) -> Result<RawAtom, ParseError> {
    let pred = cur.ident("a predicate name")?;
    let mut args = Vec::new();
    if cur.peek() == Some(&Tok::LParen) {
        cur.next();
        loop {
            match cur.next() {
                Some(Tok::Ident(s)) => {
                    if is_var_name(&s) {
                        args.push(RawTerm::Var(s));
                    } else {
                        args.push(RawTerm::Sym(s));
                    }
                }
                Some(Tok::Underscore) => args.push(RawTerm::Wildcard),
                Some(Tok::Num(n)) => args.push(RawTerm::Num(n)),
                Some(t) => {
                    return Err(cur.err(format!("expected an argument, found '{t}'")));
                }
                None => return Err(cur.err("unterminated argument list")),
            }
            match cur.next() {
                Some(Tok::Comma) => continue,
                Some(Tok::RParen) => break,
                Some(t) => {
                    return Err(cur.err(format!("expected ',' or ')', found '{t}'")));
                }
                None => return Err(cur.err("unterminated argument list")),
            }
        }
    }
    Ok(RawAtom { pred, args })
}

/// Comma-separated atoms, stopping before `stop` (which is not
/// consumed). The list may be empty if the stopper comes first.
fn parse_atom_list(cur: &mut Cur, stop: &[Tok]) -> Result<Vec<RawAtom>, ParseError> {
    let mut out = Vec::new();
    loop {
        match cur.peek() {
            None => break,
            Some(t) if stop.contains(t) => break,
            _ => {}
        }
        out.push(parse_atom(cur)?);
        if cur.peek() == Some(&Tok::Comma) {
            cur.next();
        } else {
            break;
        }
    }
    Ok(out)
}

/// `true` or comma-joined `X < Y` / `X = Y` / `Y > X` atoms.
fn parse_constraint_atoms(
    cur: &mut Cur,
    stop: &[Tok],
) -> Result<Vec<RawConstraintAtom>, ParseError> {
    let mut out = Vec::new();
    if let Some(Tok::Ident(s)) = cur.peek() {
        if s == "true" {
            cur.next();
            return Ok(out);
        }
    }
    loop {
        match cur.peek() {
            None => break,
            Some(t) if stop.contains(t) => break,
            _ => {}
        }
        let x = cur.ident("a variable")?;
        if !is_var_name(&x) {
            return Err(cur.err(format!("constraint variables start uppercase: {x}")));
        }
        let op = cur.next();
        let y = cur.ident("a variable")?;
        if !is_var_name(&y) {
            return Err(cur.err(format!("constraint variables start uppercase: {y}")));
        }
        match op {
            Some(Tok::Lt) => out.push(RawConstraintAtom::Lt(x, y)),
            Some(Tok::Gt) => out.push(RawConstraintAtom::Lt(y, x)),
            Some(Tok::Eq) => out.push(RawConstraintAtom::Eq(x, y)),
            Some(t) => return Err(cur.err(format!("expected '<', '>' or '=', found '{t}'"))),
            None => return Err(cur.err("dangling constraint")),
        }
        if cur.peek() == Some(&Tok::Comma) {
            cur.next();
        } else {
            break;
        }
    }
    Ok(out)
}

/// `p:2, q` style pairs; a bare symbol counts once.
fn parse_count_pairs(cur: &mut Cur, stop: &[Tok]) -> Result<Vec<(String, u32)>, ParseError> {
    let mut out = Vec::new();
    loop {
        match cur.peek() {
            None => break,
            Some(t) if stop.contains(t) => break,
            _ => {}
        }
        let name = cur.ident("a symbol")?;
        let mut count = 1u32;
        if cur.peek() == Some(&Tok::Colon) {
            cur.next();
            match cur.next() {
                Some(Tok::Num(n)) if n >= 0 => count = n as u32,
                Some(t) => {
                    return Err(cur.err(format!("expected a count, found '{t}'")));
                }
                None => return Err(cur.err("expected a count")),
            }
        }
        out.push((name, count));
        // pairs are comma- or space-separated
        if cur.peek() == Some(&Tok::Comma) {
            cur.next();
        }
    }
    Ok(out)
}

pub fn parse_model(text: &str) -> Result<ModelFile, ParseError> {
    let mut kind: Option<ModelKind> = None;
    let mut model = ModelFile {
        kind: ModelKind::Msr,
        places: vec![],
        events: vec![],
        log_mode: None,
        enums: vec![],
        preds: vec![],
        transitions: vec![],
        rules: vec![],
        inits: vec![],
        targets: vec![],
    };
    let mut saw_any = false;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let toks = tokenize(raw_line, line_no)?;
        if toks.is_empty() {
            continue;
        }
        saw_any = true;
        let mut cur = Cur {
            toks: &toks,
            pos: 0,
            line: line_no,
        };
        let head = cur.ident("a directive")?;
        if kind.is_none() && head != "system" {
            return Err(cur.err("the first directive must be 'system petri' or 'system msr'"));
        }
        match head.as_str() {
            "system" => {
                if kind.is_some() {
                    return Err(cur.err("duplicate 'system' directive"));
                }
                let which = cur.ident("'petri' or 'msr'")?;
                cur.expect_done()?;
                let k = match which.as_str() {
                    "petri" => ModelKind::Petri,
                    "msr" => ModelKind::Msr,
                    other => return Err(cur.err(format!("unknown system kind {other}"))),
                };
                kind = Some(k);
                model.kind = k;
            }
            "places" => {
                while !cur.done() {
                    model.places.push(cur.ident("a place name")?);
                }
            }
            "events" => {
                while !cur.done() {
                    model.events.push(cur.ident("an event name")?);
                }
            }
            "logmode" => {
                let mode = cur.ident("'word' or 'bag'")?;
                cur.expect_done()?;
                model.log_mode = Some(match mode.as_str() {
                    "word" => LogMode::Word,
                    "bag" => LogMode::Bag,
                    other => return Err(cur.err(format!("unknown log mode {other}"))),
                });
            }
            "enum" => {
                let name = cur.ident("an enum name")?;
                cur.expect(Tok::LBrace)?;
                let mut values = Vec::new();
                loop {
                    match cur.next() {
                        Some(Tok::Ident(v)) => values.push(v),
                        Some(Tok::RBrace) => break,
                        Some(t) => {
                            return Err(cur.err(format!("expected a value or '}}', found '{t}'")));
                        }
                        None => return Err(cur.err("unterminated enum")),
                    }
                }
                cur.expect_done()?;
                model.enums.push(EnumDecl { name, values });
            }
            "pred" => {
                while !cur.done() {
                    let name = cur.ident("a predicate name")?;
                    match cur.next() {
                        Some(Tok::Slash) => match cur.next() {
                            Some(Tok::Num(n)) if n >= 0 => model.preds.push(PredDecl {
                                name,
                                sig: PredSig::Arity(n as usize),
                            }),
                            _ => return Err(cur.err("expected an arity after '/'")),
                        },
                        Some(Tok::LParen) => {
                            let mut types = Vec::new();
                            loop {
                                match cur.next() {
                                    Some(Tok::Ident(t)) => types.push(t),
                                    Some(t) => {
                                        return Err(
                                            cur.err(format!("expected a type, found '{t}'"))
                                        );
                                    }
                                    None => return Err(cur.err("unterminated signature")),
                                }
                                match cur.next() {
                                    Some(Tok::Comma) => continue,
                                    Some(Tok::RParen) => break,
                                    Some(t) => {
                                        return Err(
                                            cur.err(format!("expected ',' or ')', found '{t}'"))
                                        );
                                    }
                                    None => return Err(cur.err("unterminated signature")),
                                }
                            }
                            model.preds.push(PredDecl {
                                name,
                                sig: PredSig::Typed(types),
                            });
                        }
                        _ => {
                            return Err(
                                cur.err("predicate declarations are name/arity or name(types)")
                            )
                        }
                    }
                }
            }
            "trans" => {
                let name = cur.ident("a transition name")?;
                cur.expect(Tok::Colon)?;
                let kw = cur.ident("'pre'")?;
                if kw != "pre" {
                    return Err(cur.err("expected 'pre'"));
                }
                let mut pre = Vec::new();
                while !matches!(cur.peek(), Some(Tok::Arrow) | None) {
                    pre.push(cur.ident("a place")?);
                    if cur.peek() == Some(&Tok::Comma) {
                        cur.next();
                    }
                }
                cur.expect(Tok::Arrow)?;
                let kw = cur.ident("'post'")?;
                if kw != "post" {
                    return Err(cur.err("expected 'post'"));
                }
                let mut post = Vec::new();
                loop {
                    match cur.peek() {
                        Some(Tok::Ident(s)) if s == "emit" => break,
                        None => break,
                        _ => {}
                    }
                    post.push(cur.ident("a place")?);
                    if cur.peek() == Some(&Tok::Comma) {
                        cur.next();
                    }
                }
                let kw = cur.ident("'emit'")?;
                if kw != "emit" {
                    return Err(cur.err("expected 'emit'"));
                }
                let event = cur.ident("an event")?;
                cur.expect_done()?;
                model.transitions.push(TransDecl {
                    name,
                    pre,
                    post,
                    event,
                });
            }
            "rule" => {
                let name = match cur.next() {
                    Some(Tok::Ident(s)) => s,
                    Some(Tok::Num(n)) => n.to_string(),
                    _ => return Err(cur.err("expected a rule name")),
                };
                cur.expect(Tok::Colon)?;
                let lhs = parse_atom_list(&mut cur, &[Tok::Arrow])?;
                cur.expect(Tok::Arrow)?;
                let rhs = {
                    // atoms up to the 'where' keyword or end of line
                    let mut atoms = Vec::new();
                    loop {
                        match cur.peek() {
                            Some(Tok::Ident(s)) if s == "where" => break,
                            None => break,
                            _ => {}
                        }
                        atoms.push(parse_atom(&mut cur)?);
                        if cur.peek() == Some(&Tok::Comma) {
                            cur.next();
                        } else {
                            break;
                        }
                    }
                    atoms
                };
                let constraint = match cur.peek() {
                    Some(Tok::Ident(s)) if s == "where" => {
                        cur.next();
                        parse_constraint_atoms(&mut cur, &[])?
                    }
                    None => Vec::new(),
                    Some(t) => {
                        let t = t.clone();
                        return Err(
                            cur.err(format!("expected 'where' or end of line, found '{t}'"))
                        );
                    }
                };
                cur.expect_done()?;
                model.rules.push(RuleDecl {
                    name,
                    lhs,
                    rhs,
                    constraint,
                });
            }
            "init" => {
                cur.expect(Tok::Colon)?;
                match kind {
                    Some(ModelKind::Petri) => {
                        let pairs = parse_count_pairs(&mut cur, &[])?;
                        cur.expect_done()?;
                        model.inits.push(InitDecl::Marking(pairs));
                    }
                    Some(ModelKind::Msr) => {
                        let atoms = parse_atom_list(&mut cur, &[])?;
                        cur.expect_done()?;
                        model.inits.push(InitDecl::Atoms(atoms));
                    }
                    None => unreachable!("system comes first"),
                }
            }
            "target" => {
                let name = cur.ident("a target name")?;
                cur.expect(Tok::Colon)?;
                match cur.peek() {
                    Some(Tok::LBracket) => {
                        cur.next();
                        let atoms = parse_atom_list(&mut cur, &[Tok::RBracket])?;
                        cur.expect(Tok::RBracket)?;
                        cur.expect(Tok::Colon)?;
                        cur.expect(Tok::LBrace)?;
                        let constraint = parse_constraint_atoms(&mut cur, &[Tok::RBrace])?;
                        cur.expect(Tok::RBrace)?;
                        cur.expect_done()?;
                        model.targets.push(TargetDecl {
                            name,
                            body: TargetBody::Msr { atoms, constraint },
                        });
                    }
                    Some(Tok::Ident(s)) if s == "marking" => {
                        cur.next();
                        let marking = parse_count_pairs(&mut cur, &[Tok::Semi])?;
                        let history = if cur.peek() == Some(&Tok::Semi) {
                            cur.next();
                            let kw = cur.ident("'history'")?;
                            if kw != "history" {
                                return Err(cur.err("expected 'history'"));
                            }
                            let mode = cur.ident("'word' or 'bag'")?;
                            match mode.as_str() {
                                "word" => {
                                    let mut events = Vec::new();
                                    while !cur.done() {
                                        events.push(cur.ident("an event")?);
                                    }
                                    Some(HistorySpec::Word(events))
                                }
                                "bag" => {
                                    let pairs = parse_count_pairs(&mut cur, &[])?;
                                    Some(HistorySpec::Bag(pairs))
                                }
                                other => {
                                    return Err(cur.err(format!("unknown history mode {other}")))
                                }
                            }
                        } else {
                            None
                        };
                        cur.expect_done()?;
                        model.targets.push(TargetDecl {
                            name,
                            body: TargetBody::Petri { marking, history },
                        });
                    }
                    _ => {
                        return Err(cur.err("targets are '[atoms] : {constraint}' or 'marking ...'"))
                    }
                }
            }
            other => return Err(cur.err(format!("unknown directive {other}"))),
        }
    }
    if !saw_any {
        return Err(ParseError {
            line: 1,
            message: "empty model file".into(),
        });
    }
    if kind.is_none() {
        return Err(ParseError {
            line: 1,
            message: "missing 'system' directive".into(),
        });
    }
    Ok(model)
}
