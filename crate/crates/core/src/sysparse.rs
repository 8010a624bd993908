//! Text format for polynomial systems (`.psys`) and the JSON documents used
//! for triangular systems and decomposition trees.
//!
//! One polynomial per line, `#` starts a comment, and an optional
//! `vars: a < b < c` line declares the variable ordering. Without a
//! declaration only `x<digits>` names are accepted and they are ordered by
//! their numeric suffix. Multiplication may be implicit before a variable or
//! an opening parenthesis, so `(x2+2)x3` is `(x2+2)*x3`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::CoefficientField;
use crate::poly::{Polynomial, Var};
use crate::wang::{Branch, DecompNode, DecompTree, PivotStrategy, TriangularSystem};

/// An ordered variable list together with a list of polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    pub vars: Vec<String>,
    pub polys: Vec<Polynomial>,
    pub field: CoefficientField,
}

impl PolySystem {
    pub fn new(vars: Vec<String>, polys: Vec<Polynomial>, field: CoefficientField) -> Self {
        PolySystem { vars, polys, field }
    }

    /// A system over `x1 < ... < xn`.
    pub fn with_default_names(n: usize, polys: Vec<Polynomial>, field: CoefficientField) -> Self {
        PolySystem::new(default_names(n), polys, field)
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var(&self, name: &str) -> Option<Var> {
        self.vars
            .iter()
            .position(|v| v == name)
            .map(|i| Var(i as u32 + 1))
    }

    pub fn var_name(&self, v: Var) -> String {
        v.name(Some(&self.vars))
    }

    pub fn render_poly(&self, p: &Polynomial) -> String {
        p.render(&self.vars)
    }

    /// The same system with every coefficient mapped into `F_p`; zero images
    /// are dropped.
    pub fn reduce_mod_p(&self, p: u32) -> Result<PolySystem> {
        let polys = self
            .polys
            .iter()
            .map(|f| f.reduce_mod_p(p))
            .filter(|r| !matches!(r, Ok(f) if f.is_zero()))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolySystem::new(
            self.vars.clone(),
            polys,
            CoefficientField::prime(p as u64)?,
        ))
    }

    /// Text form accepted by [`parse_system_in`].
    pub fn render(&self) -> String {
        let mut out = format!("vars: {}\n", self.vars.join(" < "));
        for p in &self.polys {
            out.push_str(&self.render_poly(p));
            out.push('\n');
        }
        out
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseOutput {
    pub system: PolySystem,
    /// Non-fatal diagnostics such as dropped zero polynomials.
    pub warnings: Vec<String>,
}

/// Parses a system with rational coefficients.
pub fn parse_system(text: &str) -> Result<PolySystem> {
    parse_system_in(text, CoefficientField::Rationals)
}

pub fn parse_system_in(text: &str, field: CoefficientField) -> Result<PolySystem> {
    parse_system_detailed(text, field).map(|o| o.system)
}

pub fn parse_system_detailed(text: &str, field: CoefficientField) -> Result<ParseOutput> {
    let mut declared: Option<Vec<String>> = None;
    let mut lines: Vec<(usize, Vec<Token>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("vars:") {
            if declared.is_some() || !lines.is_empty() {
                return Err(syntax(
                    line_no,
                    content.len() - trimmed.len() + 1,
                    "the vars: line must come first and appear once",
                ));
            }
            declared = Some(parse_ordering(rest, line_no)?);
            continue;
        }
        let tokens = tokenize(content, line_no)?;
        if !tokens.is_empty() {
            lines.push((line_no, tokens));
        }
    }

    let vars = match declared {
        Some(v) => v,
        None => infer_ordering(&lines)?,
    };
    let lookup: HashMap<&str, Var> = vars
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), Var(i as u32 + 1)))
        .collect();

    let mut polys = Vec::new();
    let mut warnings = Vec::new();
    for (line_no, tokens) in &lines {
        let mut parser = Parser {
            tokens,
            pos: 0,
            line: *line_no,
            field,
            vars: &lookup,
        };
        let poly = parser.parse_line()?;
        if poly.is_zero() {
            warnings.push(format!("line {line_no}: zero polynomial dropped"));
        } else {
            polys.push(poly);
        }
    }
    Ok(ParseOutput {
        system: PolySystem::new(vars, polys, field),
        warnings,
    })
}

/// Parses one polynomial. Names must be `x<k>` with `k >= 1`, mapped to `x_k`.
pub fn parse_polynomial(text: &str, field: CoefficientField) -> Result<Polynomial> {
    let tokens = tokenize(text, 1)?;
    let mut max = 0u32;
    for t in &tokens {
        if let Tok::Ident(name) = &t.tok {
            match numeric_suffix(name) {
                Some(k) if k >= 1 && k <= u32::MAX as u64 => max = max.max(k as u32),
                _ => return Err(syntax(1, t.column, &format!("unexpected variable `{name}`"))),
            }
        }
    }
    parse_polynomial_with(text, field, &default_names(max as usize))
}

/// Parses one polynomial over a fixed variable list.
pub fn parse_polynomial_with(
    text: &str,
    field: CoefficientField,
    vars: &[String],
) -> Result<Polynomial> {
    let tokens = tokenize(text, 1)?;
    let lookup: HashMap<&str, Var> = vars
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), Var(i as u32 + 1)))
        .collect();
    if tokens.is_empty() {
        return Err(syntax(1, 1, "empty polynomial"));
    }
    Parser {
        tokens: &tokens,
        pos: 0,
        line: 1,
        field,
        vars: &lookup,
    }
    .parse_line()
}

fn syntax(line: usize, column: usize, message: &str) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.to_string(),
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn numeric_suffix(name: &str) -> Option<u64> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

fn parse_ordering(rest: &str, line: usize) -> Result<Vec<String>> {
    let mut vars: Vec<String> = Vec::new();
    for piece in rest.split(['<', ',']) {
        let name = piece.trim();
        if name.is_empty() {
            continue;
        }
        if !is_identifier(name) {
            return Err(syntax(line, 1, &format!("invalid variable name `{name}`")));
        }
        if vars.iter().any(|v| v == name) {
            return Err(Error::DuplicateVariable(name.to_string()));
        }
        vars.push(name.to_string());
    }
    Ok(vars)
}

fn infer_ordering(lines: &[(usize, Vec<Token>)]) -> Result<Vec<String>> {
    let mut seen: Vec<(u64, String)> = Vec::new();
    for (line, tokens) in lines {
        for t in tokens {
            if let Tok::Ident(name) = &t.tok {
                let Some(k) = numeric_suffix(name) else {
                    return Err(Error::UnknownVariable {
                        name: name.clone(),
                        line: *line,
                        column: t.column,
                    });
                };
                if !seen.iter().any(|(_, n)| n == name) {
                    seen.push((k, name.clone()));
                }
            }
        }
    }
    seen.sort();
    Ok(seen.into_iter().map(|(_, n)| n).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    column: usize,
}

fn tokenize(line: &str, line_no: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, column });
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Num(digits.parse().expect("ascii digits")),
                column,
            });
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                column,
            });
        } else {
            return Err(syntax(line_no, column, &format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    line: usize,
    field: CoefficientField,
    vars: &'a HashMap<&'a str, Var>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|t| t.column)
            .or_else(|| self.tokens.last().map(|t| t.column + 1))
            .unwrap_or(1)
    }

    fn error(&self, message: &str) -> Error {
        syntax(self.line, self.column(), message)
    }

    fn parse_line(&mut self) -> Result<Polynomial> {
        let p = self.expr()?;
        if self.pos < self.tokens.len() {
            return Err(self.error("unexpected token"));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let negate = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let Some(Tok::Num(n)) = self.peek().cloned() else {
                        return Err(self.error("expected an integer after `/`"));
                    };
                    if n.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                    let inv = BigRational::new(1.into(), n);
                    let c = self
                        .field
                        .from_rational(&inv)
                        .map_err(|e| self.error(&e.to_string()))?;
                    self.pos += 1;
                    acc = acc.scale(&c);
                }
                Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.primary()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let Some(Tok::Num(n)) = self.peek().cloned() else {
                return Err(self.error("expected an exponent after `^`"));
            };
            let e: u32 = n
                .try_into()
                .map_err(|_| self.error("exponent out of range"))?;
            self.pos += 1;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let c = self
                    .field
                    .from_rational(&BigRational::from_integer(n))
                    .expect("integers map into every field");
                Ok(Polynomial::constant(self.field, c))
            }
            Some(Tok::Ident(name)) => {
                let Some(&v) = self.vars.get(name.as_str()) else {
                    return Err(Error::UnknownVariable {
                        name,
                        line: self.line,
                        column: self.column(),
                    });
                };
                self.pos += 1;
                Ok(Polynomial::variable(self.field, v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error("expected a number, variable or `(`")),
        }
    }
}

// ---------------------------------------------------------------------------
// JSON documents

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDoc {
    #[serde(rename = "T")]
    pub t: Vec<String>,
    #[serde(rename = "U")]
    pub u: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leaf: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: usize,
    pub parent: Option<usize>,
    pub branch: String,
    pub level: usize,
    #[serde(rename = "P")]
    pub p: Vec<String>,
    #[serde(rename = "Q")]
    pub q: Vec<String>,
    pub leaf: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDoc {
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pivot: Option<String>,
    pub nodes: Vec<NodeDoc>,
    pub systems: Vec<SystemDoc>,
}

fn render_all(polys: &[Polynomial], vars: &[String]) -> Vec<String> {
    polys.iter().map(|p| p.render(vars)).collect()
}

fn parse_all(texts: &[String], field: CoefficientField, vars: &[String]) -> Result<Vec<Polynomial>> {
    texts
        .iter()
        .map(|t| parse_polynomial_with(t, field, vars))
        .collect()
}

pub fn triangular_system_doc(ts: &TriangularSystem, vars: &[String]) -> SystemDoc {
    SystemDoc {
        t: render_all(&ts.t, vars),
        u: render_all(&ts.u, vars),
        leaf: None,
    }
}

pub fn render_triangular_system(ts: &TriangularSystem, vars: &[String]) -> String {
    serde_json::to_string_pretty(&triangular_system_doc(ts, vars)).expect("serializable")
}

pub fn tree_doc(tree: &DecompTree) -> TreeDoc {
    let vars = &tree.vars;
    TreeDoc {
        vars: vars.clone(),
        field: Some(tree.field.to_string()),
        pivot: Some(tree.strategy.to_string()),
        nodes: tree
            .nodes
            .iter()
            .map(|n| NodeDoc {
                id: n.id,
                parent: n.parent,
                branch: n.branch.as_str().to_string(),
                level: n.level,
                p: render_all(&n.p, vars),
                q: render_all(&n.q, vars),
                leaf: n.leaf,
            })
            .collect(),
        systems: tree
            .outputs
            .iter()
            .map(|o| SystemDoc {
                leaf: Some(o.leaf),
                ..triangular_system_doc(&o.system, vars)
            })
            .collect(),
    }
}

/// Serializes a decomposition tree to its JSON document.
pub fn render_tree(tree: &DecompTree) -> String {
    serde_json::to_string_pretty(&tree_doc(tree)).expect("serializable")
}

/// Reads a decomposition tree back. `field` is used when the document does
/// not name one.
pub fn parse_tree(text: &str, field: CoefficientField) -> Result<DecompTree> {
    let doc: TreeDoc =
        serde_json::from_str(text).map_err(|e| Error::BadDocument(e.to_string()))?;
    let field = match &doc.field {
        Some(f) => CoefficientField::parse(f)?,
        None => field,
    };
    let strategy = match &doc.pivot {
        Some(s) => s.parse()?,
        None => PivotStrategy::First,
    };
    let vars = doc.vars.clone();
    let mut nodes = Vec::with_capacity(doc.nodes.len());
    for (i, n) in doc.nodes.iter().enumerate() {
        if n.id != i {
            return Err(Error::BadDocument(format!("node ids must be 0..n, got {}", n.id)));
        }
        let branch = Branch::parse(&n.branch)
            .ok_or_else(|| Error::BadDocument(format!("unknown branch `{}`", n.branch)))?;
        nodes.push(DecompNode {
            id: n.id,
            parent: n.parent,
            branch,
            level: n.level,
            p: parse_all(&n.p, field, &vars)?,
            q: parse_all(&n.q, field, &vars)?,
            leaf: n.leaf,
        });
    }
    let mut outputs = Vec::with_capacity(doc.systems.len());
    for s in &doc.systems {
        outputs.push(crate::wang::EmittedSystem {
            leaf: s.leaf.unwrap_or(usize::MAX),
            system: TriangularSystem {
                t: parse_all(&s.t, field, &vars)?,
                u: parse_all(&s.u, field, &vars)?,
            },
        });
    }
    Ok(DecompTree {
        vars,
        field,
        strategy,
        nodes,
        outputs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: CoefficientField = CoefficientField::Rationals;

    #[test]
    fn declared_ordering() {
        let s = parse_system("vars: x1 < x2\nx2 + x1").unwrap();
        assert_eq!(s.vars, vec!["x1", "x2"]);
        assert_eq!(s.polys.len(), 1);
        assert_eq!(s.render_poly(&s.polys[0]), "x2 + x1");
    }

    #[test]
    fn implicit_multiplication_system() {
        let s = parse_system("x2+x1+2\n(x2+2)x3+x1\n(x3+x2)x4+x3-1\nx4+x2").unwrap();
        assert_eq!(s.vars, vec!["x1", "x2", "x3", "x4"]);
        assert_eq!(s.polys.len(), 4);
        assert_eq!(s.render_poly(&s.polys[1]), "x2*x3 + 2*x3 + x1");
        assert_eq!(s.render_poly(&s.polys[2]), "x3*x4 + x2*x4 + x3 - 1");
    }

    #[test]
    fn double_plus_is_a_syntax_error() {
        let err = parse_system("x1 + + x2").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 1,
                column: 6,
                message: "expected a number, variable or `(`".into()
            }
        );
    }

    #[test]
    fn other_diagnostics() {
        assert!(matches!(
            parse_system("vars: x1 < x2\nx3"),
            Err(Error::UnknownVariable { .. })
        ));
        assert_eq!(
            parse_system("vars: a < b < a\na"),
            Err(Error::DuplicateVariable("a".into()))
        );
        assert!(matches!(
            parse_system("y + x1"),
            Err(Error::UnknownVariable { .. })
        ));
        assert!(matches!(parse_system("x1 2"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_system("x1 / 0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_system("(x1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_system("x1 $"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_system("x1^"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn zero_lines_are_dropped_with_warning() {
        let out = parse_system_detailed("x1 - x1\nx1 + 1 # note\n\n", Q).unwrap();
        assert_eq!(out.system.polys.len(), 1);
        assert_eq!(out.warnings.len(), 1);
    }

    #[test]
    fn custom_names_and_rationals() {
        let s = parse_system("vars: b < a\n1/2 a b - a/3 + 2").unwrap();
        assert_eq!(s.render_poly(&s.polys[0]), "1/2*b*a - 1/3*a + 2");
        let again = parse_system(&s.render()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn prime_field_parsing() {
        let f5 = CoefficientField::Prime(5);
        let s = parse_system_in("x1 - 1\n1/2 x2", f5).unwrap();
        assert_eq!(s.render_poly(&s.polys[0]), "x1 + 4");
        assert_eq!(s.render_poly(&s.polys[1]), "3*x2");
        assert!(parse_system_in("x1/5", f5).is_err());
    }

    #[test]
    fn inferred_order_uses_numeric_suffix() {
        let s = parse_system("x10 + x2\nx9").unwrap();
        assert_eq!(s.vars, vec!["x2", "x9", "x10"]);
    }
}
