//! Surface syntax for successor-theory formulas.
//!
//! ```text
//! formula  := implies
//! implies  := or ( "->" implies )?
//! or       := and ( "|" and )*
//! and      := unary ( "&" unary )*
//! unary    := "~" unary | ("forall" | "exists") name "." formula | primary
//! primary  := "(" formula ")" | "false" | "true" | term ("=" | "!=") term
//! term     := name | name "+" nat | nat | nat "+" name
//! ```
//!
//! A quantifier body extends as far right as possible. `true` is `~false`,
//! `a != b` is `~(a = b)` and `~p` is `p -> false`. The numeral `k` is `k`
//! successors of zero and `x + k` is `k` successors of `x`. Binders compile
//! to de Bruijn indices: the innermost binder is index 0 and the free
//! variable at position `i` is index `depth + i`.

use std::fmt;

use thiserror::Error;

use crate::error::Error;
use crate::formula::{mk_not, Formula, Kind};
use crate::sn::{Base, SnAtom, SnTerm};

/// Deepest formula tree the parser will build.
pub const MAX_NESTING: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unbound variable `{name}` at offset {pos}")]
    Unbound { name: String, pos: usize },

    #[error("numeral at offset {pos} exceeds {max}", max = u32::MAX)]
    NumeralTooLarge { pos: usize },

    #[error("formula nesting exceeds {MAX_NESTING} levels at offset {pos}")]
    TooDeep { pos: usize },

    #[error("free variable `{0}` listed twice")]
    DuplicateFree(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Nat(u64),
    LParen,
    RParen,
    Dot,
    Plus,
    Eq,
    Neq,
    Arrow,
    Pipe,
    Amp,
    Tilde,
    Forall,
    Exists,
    False,
    True,
    End,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "`{s}`"),
            Token::Nat(n) => write!(f, "`{n}`"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
            Token::Dot => f.write_str("`.`"),
            Token::Plus => f.write_str("`+`"),
            Token::Eq => f.write_str("`=`"),
            Token::Neq => f.write_str("`!=`"),
            Token::Arrow => f.write_str("`->`"),
            Token::Pipe => f.write_str("`|`"),
            Token::Amp => f.write_str("`&`"),
            Token::Tilde => f.write_str("`~`"),
            Token::Forall => f.write_str("`forall`"),
            Token::Exists => f.write_str("`exists`"),
            Token::False => f.write_str("`false`"),
            Token::True => f.write_str("`true`"),
            Token::End => f.write_str("end of input"),
        }
    }
}

fn syntax(pos: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_ascii_whitespace() {
            chars.next();
            continue;
        }
        let single = match c {
            '(' => Some(Token::LParen),
            ')' => Some(Token::RParen),
            '.' => Some(Token::Dot),
            '+' => Some(Token::Plus),
            '=' => Some(Token::Eq),
            '|' => Some(Token::Pipe),
            '&' => Some(Token::Amp),
            '~' => Some(Token::Tilde),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            out.push((tok, pos));
            continue;
        }
        match c {
            '!' | '-' => {
                chars.next();
                let (want, tok) = if c == '!' {
                    ('=', Token::Neq)
                } else {
                    ('>', Token::Arrow)
                };
                match chars.next() {
                    Some((_, d)) if d == want => out.push((tok, pos)),
                    _ => return Err(syntax(pos, format!("expected `{c}{want}`"))),
                }
            }
            '0'..='9' => {
                let mut end = pos;
                while let Some(&(i, d)) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    end = i + 1;
                    chars.next();
                }
                let n: u64 = text[pos..end]
                    .parse()
                    .ok()
                    .filter(|&n| n <= u32::MAX as u64)
                    .ok_or(ParseError::NumeralTooLarge { pos })?;
                out.push((Token::Nat(n), pos));
            }
            c if is_ident_start(c) => {
                let mut end = pos;
                while let Some(&(i, d)) = chars.peek() {
                    if !is_ident_char(d) {
                        break;
                    }
                    end = i + d.len_utf8();
                    chars.next();
                }
                let word = &text[pos..end];
                let tok = match word {
                    "forall" => Token::Forall,
                    "exists" => Token::Exists,
                    "false" => Token::False,
                    "true" => Token::True,
                    _ => Token::Ident(word.to_string()),
                };
                out.push((tok, pos));
            }
            other => return Err(syntax(pos, format!("unexpected character {other:?}"))),
        }
    }
    out.push((Token::End, text.len()));
    Ok(out)
}

/// A term with its variable still named.
#[derive(Debug, Clone)]
struct NamedTerm {
    var: Option<(String, usize)>,
    shift: u64,
}

/// Formula with named variables, as written.
#[derive(Debug, Clone)]
enum Surface {
    False,
    Eq(NamedTerm, NamedTerm),
    Not(Box<Surface>),
    Or(Box<Surface>, Box<Surface>),
    And(Box<Surface>, Box<Surface>),
    Implies(Box<Surface>, Box<Surface>),
    Exists(String, Box<Surface>),
    Forall(String, Box<Surface>),
}

/// A parsed subformula with the height of its tree.
type Parsed = (Surface, usize);

struct Parser {
    tokens: Vec<(Token, usize)>,
    at: usize,
    /// Recursion depth of the parser itself.
    depth: usize,
}

fn node(pos: usize, height: usize, s: Surface) -> Result<Parsed, ParseError> {
    if height > MAX_NESTING {
        return Err(ParseError::TooDeep { pos });
    }
    Ok((s, height))
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.at].0
    }

    fn pos(&self) -> usize {
        self.tokens[self.at].1
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.at].0.clone();
        if tok != Token::End {
            self.at += 1;
        }
        tok
    }

    fn expect(&mut self, want: Token) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(
                self.pos(),
                format!("expected {want}, found {}", self.peek()),
            ))
        }
    }

    fn descend(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(ParseError::TooDeep { pos: self.pos() });
        }
        Ok(())
    }

    fn formula(&mut self) -> Result<Parsed, ParseError> {
        self.descend()?;
        // Operator precedence: `->` (right-associative) < `|` < `&`.
        fn prec(t: &Token) -> Option<u8> {
            match t {
                Token::Arrow => Some(1),
                Token::Pipe => Some(2),
                Token::Amp => Some(3),
                _ => None,
            }
        }
        fn reduce(operands: &mut Vec<Parsed>, op: Token, pos: usize) -> Result<(), ParseError> {
            let (rhs, rh) = operands.pop().expect("operand stack underflow");
            let (lhs, lh) = operands.pop().expect("operand stack underflow");
            let (l, r) = (Box::new(lhs), Box::new(rhs));
            let s = match op {
                Token::Arrow => Surface::Implies(l, r),
                Token::Pipe => Surface::Or(l, r),
                _ => Surface::And(l, r),
            };
            operands.push(node(pos, lh.max(rh) + 1, s)?);
            Ok(())
        }

        let mut operands = vec![self.unary()?];
        let mut operators: Vec<(Token, u8, usize)> = Vec::new();
        while let Some(p) = prec(self.peek()) {
            let pos = self.pos();
            let op = self.bump();
            while let Some(&(_, top, _)) = operators.last() {
                if top > p || (top == p && p != 1) {
                    let (op, _, pos) = operators.pop().expect("checked above");
                    reduce(&mut operands, op, pos)?;
                } else {
                    break;
                }
            }
            operators.push((op, p, pos));
            operands.push(self.unary()?);
        }
        while let Some((op, _, pos)) = operators.pop() {
            reduce(&mut operands, op, pos)?;
        }
        self.depth -= 1;
        Ok(operands.pop().expect("one operand remains"))
    }

    fn unary(&mut self) -> Result<Parsed, ParseError> {
        let mut negations = Vec::new();
        while *self.peek() == Token::Tilde {
            negations.push(self.pos());
            self.bump();
        }
        let pos = self.pos();
        let mut out = match self.peek() {
            Token::Forall | Token::Exists => {
                let universal = self.bump() == Token::Forall;
                let name = match self.bump() {
                    Token::Ident(name) => name,
                    other => {
                        return Err(syntax(
                            self.tokens[self.at.saturating_sub(1)].1,
                            format!("expected a variable name, found {other}"),
                        ))
                    }
                };
                self.expect(Token::Dot)?;
                let (body, h) = self.formula()?;
                let body = Box::new(body);
                let s = if universal {
                    Surface::Forall(name, body)
                } else {
                    Surface::Exists(name, body)
                };
                node(pos, h + 1, s)?
            }
            _ => self.primary()?,
        };
        while let Some(pos) = negations.pop() {
            let (inner, h) = out;
            out = node(pos, h + 1, Surface::Not(Box::new(inner)))?;
        }
        Ok(out)
    }

    fn primary(&mut self) -> Result<Parsed, ParseError> {
        let pos = self.pos();
        match self.peek() {
            Token::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            Token::False => {
                self.bump();
                Ok((Surface::False, 1))
            }
            Token::True => {
                self.bump();
                Ok((Surface::Not(Box::new(Surface::False)), 2))
            }
            _ => {
                let lhs = self.term()?;
                let negated = match self.bump() {
                    Token::Eq => false,
                    Token::Neq => true,
                    other => {
                        return Err(syntax(
                            self.tokens[self.at.saturating_sub(1)].1,
                            format!("expected `=` or `!=`, found {other}"),
                        ))
                    }
                };
                let rhs = self.term()?;
                let atom = Surface::Eq(lhs, rhs);
                if negated {
                    node(pos, 2, Surface::Not(Box::new(atom)))
                } else {
                    Ok((atom, 1))
                }
            }
        }
    }

    fn term(&mut self) -> Result<NamedTerm, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Token::Ident(name) => {
                let shift = if *self.peek() == Token::Plus {
                    self.bump();
                    self.nat()?
                } else {
                    0
                };
                Ok(NamedTerm {
                    var: Some((name, pos)),
                    shift,
                })
            }
            Token::Nat(n) => {
                if *self.peek() == Token::Plus {
                    self.bump();
                    let var_pos = self.pos();
                    match self.bump() {
                        Token::Ident(name) => Ok(NamedTerm {
                            var: Some((name, var_pos)),
                            shift: n,
                        }),
                        other => Err(syntax(
                            var_pos,
                            format!("expected a variable name, found {other}"),
                        )),
                    }
                } else {
                    Ok(NamedTerm {
                        var: None,
                        shift: n,
                    })
                }
            }
            other => Err(syntax(pos, format!("expected a formula, found {other}"))),
        }
    }

    fn nat(&mut self) -> Result<u64, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Token::Nat(n) => Ok(n),
            other => Err(syntax(pos, format!("expected a numeral, found {other}"))),
        }
    }
}

fn parse_surface(text: &str) -> Result<Surface, ParseError> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        at: 0,
        depth: 0,
    };
    let (formula, _) = parser.formula()?;
    if *parser.peek() != Token::End {
        return Err(syntax(
            parser.pos(),
            format!("unexpected {} after formula", parser.peek()),
        ));
    }
    Ok(formula)
}

fn collect_free(s: &Surface, bound: &mut Vec<String>, out: &mut Vec<String>) {
    let mut term = |t: &NamedTerm, bound: &Vec<String>| {
        if let Some((name, _)) = &t.var {
            if !bound.contains(name) && !out.contains(name) {
                out.push(name.clone());
            }
        }
    };
    match s {
        Surface::False => {}
        Surface::Eq(l, r) => {
            term(l, bound);
            term(r, bound);
        }
        Surface::Not(f) => collect_free(f, bound, out),
        Surface::Or(l, r) | Surface::And(l, r) | Surface::Implies(l, r) => {
            collect_free(l, bound, out);
            collect_free(r, bound, out);
        }
        Surface::Exists(name, body) | Surface::Forall(name, body) => {
            bound.push(name.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
    }
}

fn compile(
    s: &Surface,
    bound: &mut Vec<String>,
    free: &[String],
) -> Result<Formula<SnAtom>, ParseError> {
    let arity = bound.len() + free.len();
    Ok(match s {
        Surface::False => Formula::falsum(arity),
        Surface::Eq(l, r) => {
            let atom = SnAtom::new(resolve(l, bound, free)?, resolve(r, bound, free)?);
            Formula::atom(arity, atom).expect("resolved indices are below the arity")
        }
        Surface::Not(f) => mk_not(compile(f, bound, free)?),
        Surface::Or(l, r) => Formula::or(compile(l, bound, free)?, compile(r, bound, free)?),
        Surface::And(l, r) => Formula::and(compile(l, bound, free)?, compile(r, bound, free)?),
        Surface::Implies(l, r) => {
            Formula::implies(compile(l, bound, free)?, compile(r, bound, free)?)
        }
        Surface::Exists(name, body) | Surface::Forall(name, body) => {
            bound.push(name.clone());
            let body = compile(body, bound, free);
            bound.pop();
            let body = body?;
            if matches!(s, Surface::Exists(..)) {
                Formula::exists(body)
            } else {
                Formula::forall(body)
            }
        }
    })
}

fn resolve(t: &NamedTerm, bound: &[String], free: &[String]) -> Result<SnTerm, ParseError> {
    let Some((name, pos)) = &t.var else {
        return Ok(SnTerm::zero(t.shift));
    };
    let index = match bound.iter().rposition(|b| b == name) {
        Some(i) => bound.len() - 1 - i,
        None => match free.iter().position(|f| f == name) {
            Some(i) => bound.len() + i,
            None => {
                return Err(ParseError::Unbound {
                    name: name.clone(),
                    pos: *pos,
                })
            }
        },
    };
    Ok(SnTerm::var(index, t.shift))
}

/// Parses `text` with the given free variables, in environment order.
pub fn parse<S: AsRef<str>>(text: &str, free_vars: &[S]) -> Result<Formula<SnAtom>, ParseError> {
    let free: Vec<String> = free_vars.iter().map(|s| s.as_ref().to_string()).collect();
    for (i, name) in free.iter().enumerate() {
        if free[..i].contains(name) {
            return Err(ParseError::DuplicateFree(name.clone()));
        }
    }
    compile(&parse_surface(text)?, &mut Vec::new(), &free)
}

/// Parses `text`, taking its free variables in order of first occurrence.
pub fn parse_auto(text: &str) -> Result<(Formula<SnAtom>, Vec<String>), ParseError> {
    let surface = parse_surface(text)?;
    let free = free_variables_of(&surface);
    let formula = compile(&surface, &mut Vec::new(), &free)?;
    Ok((formula, free))
}

/// Free variable names of `text` in order of first occurrence.
pub fn free_variables(text: &str) -> Result<Vec<String>, ParseError> {
    Ok(free_variables_of(&parse_surface(text)?))
}

fn free_variables_of(s: &Surface) -> Vec<String> {
    let mut out = Vec::new();
    collect_free(s, &mut Vec::new(), &mut out);
    out
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(is_ident_start)
        && chars.all(is_ident_char)
        && !matches!(name, "forall" | "exists" | "false" | "true")
}

/// Renders `formula` in the surface syntax, naming index `depth + i` after
/// `free_names[i]`. Bound variables are named `x0`, `x1`, ... skipping
/// names already in scope. Every operand of a binary connective is
/// parenthesized, so the output parses back to the same formula.
pub fn pretty<S: AsRef<str>>(formula: &Formula<SnAtom>, free_names: &[S]) -> Result<String, Error> {
    if free_names.len() != formula.arity() {
        return Err(Error::NameCount {
            expected: formula.arity(),
            found: free_names.len(),
        });
    }
    let free: Vec<String> = free_names.iter().map(|s| s.as_ref().to_string()).collect();
    let mut printer = Printer {
        free,
        bound: Vec::new(),
        out: String::new(),
    };
    printer.formula(formula);
    Ok(printer.out)
}

struct Printer {
    free: Vec<String>,
    bound: Vec<String>,
    out: String,
}

impl Printer {
    fn name(&self, index: usize) -> &str {
        if index < self.bound.len() {
            &self.bound[self.bound.len() - 1 - index]
        } else {
            &self.free[index - self.bound.len()]
        }
    }

    fn term(&mut self, t: &SnTerm) {
        let text = match (t.base, t.shift) {
            (Base::Zero, k) => k.to_string(),
            (Base::Var(i), 0) => self.name(i).to_string(),
            (Base::Var(i), k) => format!("{}+{k}", self.name(i)),
        };
        self.out.push_str(&text);
    }

    fn fresh(&self) -> String {
        (0..)
            .map(|n| format!("x{n}"))
            .find(|c| !self.free.contains(c) && !self.bound.contains(c))
            .expect("unbounded name supply")
    }

    fn wrapped(&mut self, f: &Formula<SnAtom>) {
        if matches!(f.kind(), Kind::False) {
            self.out.push_str("false");
        } else {
            self.out.push('(');
            self.formula(f);
            self.out.push(')');
        }
    }

    fn binary(&mut self, l: &Formula<SnAtom>, op: &str, r: &Formula<SnAtom>) {
        self.wrapped(l);
        self.out.push_str(op);
        self.wrapped(r);
    }

    fn formula(&mut self, f: &Formula<SnAtom>) {
        match f.kind() {
            Kind::False => self.out.push_str("false"),
            Kind::Atom(a) => {
                self.term(&a.lhs);
                self.out.push_str(" = ");
                self.term(&a.rhs);
            }
            Kind::Implies(l, r) if matches!(r.kind(), Kind::False) => {
                self.out.push('~');
                self.wrapped(l);
            }
            Kind::Implies(l, r) => self.binary(l, " -> ", r),
            Kind::Or(l, r) => self.binary(l, " | ", r),
            Kind::And(l, r) => self.binary(l, " & ", r),
            Kind::Exists(body) | Kind::Forall(body) => {
                let name = self.fresh();
                let word = if matches!(f.kind(), Kind::Exists(_)) {
                    "exists"
                } else {
                    "forall"
                };
                self.out.push_str(&format!("{word} {name}. "));
                self.bound.push(name);
                self.formula(body);
                self.bound.pop();
            }
        }
    }
}
