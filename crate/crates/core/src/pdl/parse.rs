//! Recursive-descent parser for the cheat-sheet format.
//!
//! ```text
//! pdl      := header rule* "else" "->" strategy
//! header   := "params" ":" ident ("," ident)*
//! rule     := "if" cond ("and" cond)* "->" strategy
//! cond     := expr cmp expr
//! strategy := action | "{" action ":" weight ("," action ":" weight)* "}"
//! weight   := expr | "rest"
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use super::expr::{BinOp, CmpOp, Comparison, Expr, Func};
use super::{ParamStrategy, Pdl, PdlError, Rule, Weight};

const KEYWORDS: &[&str] = &["params", "if", "and", "else", "rest", "abs", "floor", "ceil"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Colon,
    Comma,
    Arrow,
    Cmp(CmpOp),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(v) => format!("number {v}"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Cmp(op) => format!("`{}`", op.symbol()),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> PdlError {
    PdlError::Syntax { line, col, message: message.into() }
}

fn lex(src: &str) -> Result<Vec<Spanned>, PdlError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                advance(1, &mut i, &mut col);
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    advance(1, &mut i, &mut col);
                }
                continue;
            }
            _ => {}
        }
        let peek = chars.get(i + 1).copied();
        let tok = match c {
            '+' => {
                advance(1, &mut i, &mut col);
                Tok::Plus
            }
            '-' if peek == Some('>') => {
                advance(2, &mut i, &mut col);
                Tok::Arrow
            }
            '-' => {
                advance(1, &mut i, &mut col);
                Tok::Minus
            }
            '*' => {
                advance(1, &mut i, &mut col);
                Tok::Star
            }
            '/' => {
                advance(1, &mut i, &mut col);
                Tok::Slash
            }
            '(' => {
                advance(1, &mut i, &mut col);
                Tok::LParen
            }
            ')' => {
                advance(1, &mut i, &mut col);
                Tok::RParen
            }
            '{' => {
                advance(1, &mut i, &mut col);
                Tok::LBrace
            }
            '}' => {
                advance(1, &mut i, &mut col);
                Tok::RBrace
            }
            ':' => {
                advance(1, &mut i, &mut col);
                Tok::Colon
            }
            ',' => {
                advance(1, &mut i, &mut col);
                Tok::Comma
            }
            '<' | '>' | '=' | '!' => {
                let op = match (c, peek) {
                    ('<', Some('=')) => Some((CmpOp::Le, 2)),
                    ('>', Some('=')) => Some((CmpOp::Ge, 2)),
                    ('=', Some('=')) => Some((CmpOp::Eq, 2)),
                    ('!', Some('=')) => Some((CmpOp::Ne, 2)),
                    ('<', _) => Some((CmpOp::Lt, 1)),
                    ('>', _) => Some((CmpOp::Gt, 1)),
                    _ => None,
                };
                let Some((op, n)) = op else {
                    return Err(syntax(line, col, format!("unexpected character `{c}`")));
                };
                advance(n, &mut i, &mut col);
                Tok::Cmp(op)
            }
            c if c.is_ascii_digit() || (c == '.' && peek.is_some_and(|p| p.is_ascii_digit())) => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    advance(1, &mut i, &mut col);
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        while j < chars.len() && chars[j].is_ascii_digit() {
                            j += 1;
                        }
                        let n = j - i;
                        advance(n, &mut i, &mut col);
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let v: f64 =
                    text.parse().map_err(|_| syntax(start_line, start_col, format!("malformed number `{text}`")))?;
                if !v.is_finite() {
                    return Err(syntax(start_line, start_col, format!("number `{text}` is out of range")));
                }
                Tok::Num(v)
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    advance(1, &mut i, &mut col);
                }
                Tok::Ident(chars[start..i].iter().collect())
            }
            other => return Err(syntax(line, col, format!("unexpected character `{other}`"))),
        };
        out.push(Spanned { tok, line: start_line, col: start_col });
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    params: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, expected: &str) -> PdlError {
        let t = self.peek();
        syntax(t.line, t.col, format!("expected {expected}, found {}", t.tok.describe()))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Spanned, PdlError> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            Err(self.error_here(what))
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), PdlError> {
        if self.at_keyword(kw) {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(&format!("`{kw}`")))
        }
    }

    /// A non-keyword identifier.
    fn name(&mut self, what: &str) -> Result<(String, usize, usize), PdlError> {
        match &self.peek().tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let t = self.next();
                let Tok::Ident(s) = t.tok else { unreachable!() };
                Ok((s, t.line, t.col))
            }
            _ => Err(self.error_here(what)),
        }
    }

    fn pdl(&mut self) -> Result<Pdl, PdlError> {
        self.expect_keyword("params")?;
        self.expect(Tok::Colon, "`:`")?;
        loop {
            let (p, line, col) = self.name("a parameter name")?;
            if self.params.contains(&p) {
                return Err(syntax(line, col, format!("parameter `{p}` declared twice")));
            }
            self.params.push(p);
            if self.peek().tok == Tok::Comma {
                self.next();
            } else {
                break;
            }
        }
        let mut rules = Vec::new();
        while self.at_keyword("if") {
            self.next();
            let mut conditions = vec![self.condition()?];
            while self.at_keyword("and") {
                self.next();
                conditions.push(self.condition()?);
            }
            self.expect(Tok::Arrow, "`->`")?;
            let strategy = self.strategy()?;
            rules.push(Rule { conditions, strategy });
        }
        if !self.at_keyword("else") {
            return Err(self.error_here("`if` or `else`"));
        }
        self.next();
        self.expect(Tok::Arrow, "`->`")?;
        let default = self.strategy()?;
        if self.peek().tok != Tok::Eof {
            return Err(self.error_here("end of input after the `else` rule"));
        }
        Pdl::new(std::mem::take(&mut self.params), rules, default)
    }

    fn condition(&mut self) -> Result<Comparison, PdlError> {
        let lhs = self.expr()?;
        let op = match self.peek().tok {
            Tok::Cmp(op) => {
                self.next();
                op
            }
            _ => return Err(self.error_here("a comparison operator")),
        };
        let rhs = self.expr()?;
        Ok(Comparison::new(lhs, op, rhs))
    }

    fn strategy(&mut self) -> Result<ParamStrategy, PdlError> {
        if self.peek().tok != Tok::LBrace {
            let (a, _, _) = self.name("an action or `{`")?;
            return Ok(ParamStrategy::pure(a));
        }
        self.next();
        let mut entries: Vec<(String, Weight)> = Vec::new();
        let mut has_rest = false;
        loop {
            let (action, line, col) = self.name("an action name")?;
            if entries.iter().any(|(a, _)| *a == action) {
                return Err(PdlError::DuplicateAction { action, line, col });
            }
            self.expect(Tok::Colon, "`:`")?;
            let weight = if self.at_keyword("rest") {
                let t = self.next();
                if has_rest {
                    return Err(PdlError::MultipleRest { line: t.line, col: t.col });
                }
                has_rest = true;
                Weight::Rest
            } else {
                Weight::Expr(self.expr()?)
            };
            entries.push((action, weight));
            match self.peek().tok {
                Tok::Comma => {
                    self.next();
                }
                Tok::RBrace => {
                    self.next();
                    break;
                }
                _ => return Err(self.error_here("`,` or `}`")),
            }
        }
        ParamStrategy::mixed(entries)
    }

    fn expr(&mut self) -> Result<Expr, PdlError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            lhs = Expr::bin(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr, PdlError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.next();
            lhs = Expr::bin(op, lhs, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<Expr, PdlError> {
        if self.peek().tok == Tok::Minus {
            self.next();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, PdlError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Num(v) => {
                self.next();
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(ref name) => {
                if let Some(f) = Func::from_name(name) {
                    self.next();
                    self.expect(Tok::LParen, &format!("`(` after `{name}`"))?;
                    let e = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(Expr::call(f, e));
                }
                if KEYWORDS.contains(&name.as_str()) {
                    return Err(self.error_here("an expression"));
                }
                if !self.params.contains(name) {
                    return Err(PdlError::UndeclaredParam { name: name.clone(), line: t.line, col: t.col });
                }
                self.next();
                Ok(Expr::Param(name.clone()))
            }
            _ => Err(self.error_here("an expression")),
        }
    }
}

/// Parses cheat-sheet text into a decision list.
pub fn parse_pdl(text: &str) -> Result<Pdl, PdlError> {
    let toks = lex(text)?;
    Parser { toks, pos: 0, params: Vec::new() }.pdl()
}
