//! Reading and writing polynomial-system description files.
//!
//! The format is line-oriented: a header declaring the ring, then one
//! polynomial per line. `#` starts a comment. Example:
//!
//! ```text
//! ring x, y over zp(30011)
//! x + y^2 - 1
//! x*y - 1
//! ```
//!
//! A `ring ... over complex` header selects floating-point coefficients,
//! in which case decimal literals are also accepted. Expressions use
//! `+ - * ^` and parentheses; multiplication is always explicit and `^`
//! takes a positive integer exponent.

use crate::field::PrimeField;
use crate::poly::{CoeffField, CoeffSpec, ComplexCoeffs, Monomial, PolyC, PolyZp, Polynomial, Ring};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Lex,
    Syntax,
    Semantic,
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{kind:?} error at line {line}, col {col}: {msg}")]
pub struct ParseError {
    pub kind: ErrorKind,
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    fn new(kind: ErrorKind, line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError {
            kind,
            line,
            col,
            msg: msg.into(),
        }
    }
}

/// A parsed system: ring metadata plus the equation list.
#[derive(Debug, Clone, PartialEq)]
pub struct System<C: CoeffField> {
    pub name: Option<String>,
    pub ring: Ring,
    pub field: C,
    pub equations: Vec<Polynomial<C>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SystemFile {
    Zp(System<PrimeField>),
    Complex(System<ComplexCoeffs>),
}

impl SystemFile {
    pub fn ring(&self) -> &Ring {
        match self {
            SystemFile::Zp(s) => &s.ring,
            SystemFile::Complex(s) => &s.ring,
        }
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            SystemFile::Zp(s) => s.name.as_deref(),
            SystemFile::Complex(s) => s.name.as_deref(),
        }
    }

    pub fn num_equations(&self) -> usize {
        match self {
            SystemFile::Zp(s) => s.equations.len(),
            SystemFile::Complex(s) => s.equations.len(),
        }
    }
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(String),
    Float(f64),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    col: usize,
}

fn lex_line(line: &str, line_no: usize) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' | '\r' => {
                i += 1;
            }
            '#' => break,
            '+' => {
                out.push(Spanned { tok: Tok::Plus, col });
                i += 1;
            }
            '-' => {
                out.push(Spanned { tok: Tok::Minus, col });
                i += 1;
            }
            '*' => {
                out.push(Spanned { tok: Tok::Star, col });
                i += 1;
            }
            '^' => {
                out.push(Spanned { tok: Tok::Caret, col });
                i += 1;
            }
            '(' => {
                out.push(Spanned { tok: Tok::LParen, col });
                i += 1;
            }
            ')' => {
                out.push(Spanned { tok: Tok::RParen, col });
                i += 1;
            }
            ',' => {
                out.push(Spanned { tok: Tok::Comma, col });
                i += 1;
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let mut is_float = false;
                if i < chars.len() && chars[i] == '.' {
                    is_float = true;
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        is_float = true;
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text: String = chars[start..i].iter().collect();
                if is_float {
                    let v: f64 = text.parse().map_err(|_| {
                        ParseError::new(ErrorKind::Lex, line_no, col, format!("bad number {text}"))
                    })?;
                    out.push(Spanned {
                        tok: Tok::Float(v),
                        col,
                    });
                } else {
                    out.push(Spanned {
                        tok: Tok::Int(text),
                        col,
                    });
                }
            }
            _ if c.is_ascii_alphabetic() => {
                let start = i;
                i += 1;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    col,
                });
            }
            _ => {
                return Err(ParseError::new(
                    ErrorKind::Lex,
                    line_no,
                    col,
                    format!("unexpected character {c:?}"),
                ));
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Coefficient hooks for the two ring kinds

pub trait FileCoeff: CoeffField {
    /// Integer literal, reduced into the field.
    fn lit_int(&self, digits: &str) -> Self::Elem;
    /// Decimal literal; only complex rings accept these.
    fn lit_float(&self, v: f64) -> Option<Self::Elem>;
    fn fmt_term(&self, c: &Self::Elem, mono: &str) -> (bool, String);
}

impl FileCoeff for PrimeField {
    fn lit_int(&self, digits: &str) -> u32 {
        let p = self.modulus() as u64;
        let mut v: u64 = 0;
        for d in digits.bytes() {
            v = (v * 10 + (d - b'0') as u64) % p;
        }
        v as u32
    }

    fn lit_float(&self, _v: f64) -> Option<u32> {
        None
    }

    fn fmt_term(&self, c: &u32, mono: &str) -> (bool, String) {
        // Canonical representatives are nonnegative; no sign handling.
        if mono == "1" {
            (false, format!("{c}"))
        } else if *c == 1 {
            (false, mono.to_string())
        } else {
            (false, format!("{c}*{mono}"))
        }
    }
}

impl FileCoeff for ComplexCoeffs {
    fn lit_int(&self, digits: &str) -> Complex64 {
        Complex64::new(digits.parse::<f64>().unwrap_or(f64::INFINITY), 0.0)
    }

    fn lit_float(&self, v: f64) -> Option<Complex64> {
        Some(Complex64::new(v, 0.0))
    }

    fn fmt_term(&self, c: &Complex64, mono: &str) -> (bool, String) {
        assert_eq!(c.im, 0.0, "cannot serialize non-real coefficient");
        let neg = c.re.is_sign_negative();
        let a = c.re.abs();
        let body = if mono == "1" {
            format!("{a:?}")
        } else if a == 1.0 {
            mono.to_string()
        } else {
            format!("{a:?}*{mono}")
        };
        (neg, body)
    }
}

// ---------------------------------------------------------------------------
// Parser

struct ExprParser<'a, C: FileCoeff> {
    toks: &'a [Spanned],
    pos: usize,
    line_no: usize,
    field: C,
    ring: &'a Ring,
}

impl<'a, C: FileCoeff> ExprParser<'a, C> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|s| s.col)
            .unwrap_or_else(|| self.toks.last().map(|s| s.col + 1).unwrap_or(1))
    }

    fn bump(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn err(&self, kind: ErrorKind, msg: impl Into<String>) -> ParseError {
        ParseError::new(kind, self.line_no, self.col(), msg)
    }

    fn parse_expr(&mut self) -> Result<Polynomial<C>, ParseError> {
        let mut acc = self.parse_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.parse_term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.parse_term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Polynomial<C>, ParseError> {
        let mut acc = self.parse_factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            acc = acc.mul(&self.parse_factor()?);
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Polynomial<C>, ParseError> {
        let mut negate = false;
        while matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            negate = !negate;
        }
        let p = self.parse_primary()?;
        Ok(if negate { p.neg() } else { p })
    }

    fn parse_primary(&mut self) -> Result<Polynomial<C>, ParseError> {
        let base = self.parse_atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let col = self.col();
            match self.bump().map(|s| s.tok) {
                Some(Tok::Int(d)) => {
                    let e: u32 = d.parse().map_err(|_| {
                        ParseError::new(
                            ErrorKind::Semantic,
                            self.line_no,
                            col,
                            format!("exponent {d} too large"),
                        )
                    })?;
                    if e == 0 {
                        return Err(ParseError::new(
                            ErrorKind::Semantic,
                            self.line_no,
                            col,
                            "exponent must be positive",
                        ));
                    }
                    Ok(base.pow(e))
                }
                _ => Err(ParseError::new(
                    ErrorKind::Syntax,
                    self.line_no,
                    col,
                    "expected integer exponent after ^",
                )),
            }
        } else {
            Ok(base)
        }
    }

    fn parse_atom(&mut self) -> Result<Polynomial<C>, ParseError> {
        let col = self.col();
        match self.bump().map(|s| s.tok) {
            Some(Tok::Int(d)) => Ok(Polynomial::constant(
                self.field.clone(),
                self.ring.nvars(),
                self.field.lit_int(&d),
            )),
            Some(Tok::Float(v)) => match self.field.lit_float(v) {
                Some(c) => Ok(Polynomial::constant(
                    self.field.clone(),
                    self.ring.nvars(),
                    c,
                )),
                None => Err(ParseError::new(
                    ErrorKind::Semantic,
                    self.line_no,
                    col,
                    "decimal literals are only allowed over complex",
                )),
            },
            Some(Tok::Ident(name)) => match self.ring.var_index(&name) {
                Some(i) => Ok(Polynomial::var(
                    self.field.clone(),
                    self.ring.nvars(),
                    i,
                )),
                None => Err(ParseError::new(
                    ErrorKind::Semantic,
                    self.line_no,
                    col,
                    format!("undeclared variable {name}"),
                )),
            },
            Some(Tok::LParen) => {
                let inner = self.parse_expr()?;
                match self.bump().map(|s| s.tok) {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(ParseError::new(
                        ErrorKind::Syntax,
                        self.line_no,
                        col,
                        "unclosed parenthesis",
                    )),
                }
            }
            _ => Err(self.err(ErrorKind::Syntax, "expected literal, variable, or (")),
        }
    }
}

fn parse_equation<C: FileCoeff>(
    toks: &[Spanned],
    line_no: usize,
    field: C,
    ring: &Ring,
) -> Result<Polynomial<C>, ParseError> {
    let mut p = ExprParser {
        toks,
        pos: 0,
        line_no,
        field,
        ring,
    };
    let poly = p.parse_expr()?;
    if p.pos != toks.len() {
        return Err(p.err(ErrorKind::Syntax, "expected operator or end of line"));
    }
    Ok(poly)
}

struct Header {
    names: Vec<String>,
    coeff: CoeffSpec,
}

fn parse_header(toks: &[Spanned], line_no: usize) -> Result<Header, ParseError> {
    let mut pos = 0;
    let expect_ident = |pos: &mut usize, what: &str| -> Result<(String, usize), ParseError> {
        match toks.get(*pos) {
            Some(Spanned {
                tok: Tok::Ident(s),
                col,
            }) => {
                *pos += 1;
                Ok((s.clone(), *col))
            }
            other => Err(ParseError::new(
                ErrorKind::Syntax,
                line_no,
                other.map(|s| s.col).unwrap_or(1),
                format!("expected {what}"),
            )),
        }
    };
    let (kw, col) = expect_ident(&mut pos, "ring keyword")?;
    if kw != "ring" {
        return Err(ParseError::new(
            ErrorKind::Syntax,
            line_no,
            col,
            "file must start with a ring declaration",
        ));
    }
    let mut names = Vec::new();
    loop {
        let (name, col) = expect_ident(&mut pos, "variable name")?;
        if name == "over" {
            return Err(ParseError::new(
                ErrorKind::Syntax,
                line_no,
                col,
                "expected variable name",
            ));
        }
        if names.contains(&name) {
            return Err(ParseError::new(
                ErrorKind::Semantic,
                line_no,
                col,
                format!("duplicate variable {name}"),
            ));
        }
        names.push(name);
        match toks.get(pos).map(|s| &s.tok) {
            Some(Tok::Comma) => {
                pos += 1;
            }
            _ => break,
        }
    }
    let (kw, col) = expect_ident(&mut pos, "over keyword")?;
    if kw != "over" {
        return Err(ParseError::new(
            ErrorKind::Syntax,
            line_no,
            col,
            "expected `over`",
        ));
    }
    let (domain, dcol) = expect_ident(&mut pos, "coefficient domain")?;
    let coeff = match domain.as_str() {
        "complex" => CoeffSpec::Complex,
        "zp" => {
            match (
                toks.get(pos).map(|s| &s.tok),
                toks.get(pos + 1),
                toks.get(pos + 2).map(|s| &s.tok),
            ) {
                (Some(Tok::LParen), Some(sp), Some(Tok::RParen)) => {
                    if let Tok::Int(d) = &sp.tok {
                        let p: u64 = d.parse().map_err(|_| {
                            ParseError::new(
                                ErrorKind::Semantic,
                                line_no,
                                sp.col,
                                format!("modulus {d} too large"),
                            )
                        })?;
                        PrimeField::new(p).map_err(|e| {
                            ParseError::new(ErrorKind::Semantic, line_no, sp.col, e.to_string())
                        })?;
                        pos += 3;
                        CoeffSpec::Zp(p as u32)
                    } else {
                        return Err(ParseError::new(
                            ErrorKind::Syntax,
                            line_no,
                            sp.col,
                            "expected integer modulus",
                        ));
                    }
                }
                _ => {
                    return Err(ParseError::new(
                        ErrorKind::Syntax,
                        line_no,
                        dcol,
                        "expected zp(<prime>)",
                    ));
                }
            }
        }
        other => {
            return Err(ParseError::new(
                ErrorKind::Syntax,
                line_no,
                dcol,
                format!("unknown coefficient domain {other}"),
            ));
        }
    };
    if pos != toks.len() {
        return Err(ParseError::new(
            ErrorKind::Syntax,
            line_no,
            toks[pos].col,
            "trailing tokens after ring declaration",
        ));
    }
    Ok(Header { names, coeff })
}

/// Parses a complete `.sys` file.
pub fn parse_system(text: &str) -> Result<SystemFile, ParseError> {
    let mut name = None;
    let mut header: Option<(Header, usize)> = None;
    let mut body: Vec<(usize, Vec<Spanned>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim_start();
        if header.is_none() && name.is_none() {
            if let Some(rest) = trimmed.strip_prefix("# name:") {
                name = Some(rest.trim().to_string());
                continue;
            }
        }
        let toks = lex_line(raw, line_no)?;
        if toks.is_empty() {
            continue;
        }
        if header.is_none() {
            header = Some((parse_header(&toks, line_no)?, line_no));
        } else {
            body.push((line_no, toks));
        }
    }

    let (header, hline) = header.ok_or_else(|| {
        ParseError::new(ErrorKind::Syntax, 1, 1, "empty file: expected ring declaration")
    })?;
    if body.is_empty() {
        return Err(ParseError::new(
            ErrorKind::Semantic,
            hline,
            1,
            "system has no equations",
        ));
    }

    let ring = Ring::new(header.names, header.coeff.clone());
    match header.coeff {
        CoeffSpec::Zp(p) => {
            let field = PrimeField::new(p as u64).expect("validated above");
            let equations = body
                .into_iter()
                .map(|(ln, toks)| parse_equation(&toks, ln, field, &ring))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SystemFile::Zp(System {
                name,
                ring,
                field,
                equations,
            }))
        }
        CoeffSpec::Complex => {
            let equations = body
                .into_iter()
                .map(|(ln, toks)| parse_equation(&toks, ln, ComplexCoeffs, &ring))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SystemFile::Complex(System {
                name,
                ring,
                field: ComplexCoeffs,
                equations,
            }))
        }
    }
}

// ---------------------------------------------------------------------------
// Formatter

/// Renders one polynomial in the file's expression syntax with terms in
/// canonical (descending internal) order.
pub fn format_polynomial<C: FileCoeff>(p: &Polynomial<C>, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let field = p.field().clone();
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let (neg, body) = field.fmt_term(c, &m.format(names));
        if i == 0 {
            if neg {
                out.push_str("-");
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

fn format_generic<C: FileCoeff>(s: &System<C>, domain: &str) -> String {
    let mut out = String::new();
    if let Some(name) = &s.name {
        out.push_str(&format!("# name: {name}\n"));
    }
    out.push_str(&format!("ring {} over {}\n", s.ring.var_names.join(", "), domain));
    for eq in &s.equations {
        out.push_str(&format_polynomial(eq, &s.ring.var_names));
        out.push('\n');
    }
    out
}

/// Canonical text form; `parse_system(format_system(s))` reproduces `s`.
pub fn format_system(sys: &SystemFile) -> String {
    match sys {
        SystemFile::Zp(s) => format_generic(s, &format!("zp({})", s.field.modulus())),
        SystemFile::Complex(s) => format_generic(s, "complex"),
    }
}

/// Convenience used by tests and the CLI: format a Z_p polynomial.
pub fn format_zp(p: &PolyZp, names: &[String]) -> String {
    format_polynomial(p, names)
}

/// Convenience: format a complex-coefficient polynomial.
pub fn format_c(p: &PolyC, names: &[String]) -> String {
    format_polynomial(p, names)
}

/// Parses a single monomial such as `x^2*y` or `1` against a name list.
/// Used by the template file reader.
pub fn parse_monomial(text: &str, names: &[String]) -> Option<Monomial> {
    let mut exps = vec![0u16; names.len()];
    let t = text.trim();
    if t == "1" {
        return Some(Monomial::from_exps(&exps));
    }
    for factor in t.split('*') {
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => (n.trim(), e.trim().parse::<u16>().ok()?),
            None => (factor.trim(), 1),
        };
        let idx = names.iter().position(|n| n == name)?;
        if exp == 0 {
            return None;
        }
        exps[idx] = exps[idx].checked_add(exp)?;
    }
    Some(Monomial::from_exps(&exps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyZp;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub const TOY: &str = "ring x, y over zp(30011)\nx + y^2 - 1\nx*y - 1\n";

    #[test]
    fn parses_toy_system() {
        let sys = parse_system(TOY).unwrap();
        assert_eq!(sys.ring().nvars(), 2);
        assert_eq!(sys.num_equations(), 2);
        let SystemFile::Zp(s) = sys else { panic!() };
        // x + y^2 - 1 with -1 folded to p-1.
        assert_eq!(s.equations[0].coeff_of(&Monomial::from_exps(&[0, 0])), 30010);
        assert_eq!(s.equations[0].coeff_of(&Monomial::from_exps(&[0, 2])), 1);
        assert_eq!(s.equations[1].coeff_of(&Monomial::from_exps(&[1, 1])), 1);
    }

    #[test]
    fn nonprime_modulus_is_semantic_error() {
        let err = parse_system("ring x over zp(4)\nx\n").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Semantic);
        assert_eq!(err.line, 1);
    }

    #[test]
    fn undeclared_variable_is_semantic_error() {
        let err = parse_system("ring x over zp(7)\nx + z\n").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Semantic);
        assert_eq!(err.line, 2);
        assert!(err.msg.contains('z'));
    }

    #[test]
    fn zero_exponent_rejected() {
        let err = parse_system("ring x over zp(7)\nx^0\n").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Semantic);
    }

    #[test]
    fn lexer_error_carries_position() {
        let err = parse_system("ring x over zp(7)\nx + $\n").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Lex);
        assert_eq!((err.line, err.col), (2, 5));
    }

    #[test]
    fn no_equations_rejected() {
        let err = parse_system("ring x over zp(7)\n").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Semantic);
    }

    #[test]
    fn negative_literals_fold() {
        let sys = parse_system("ring x over zp(7)\n-3*x - -2\n").unwrap();
        let SystemFile::Zp(s) = sys else { panic!() };
        assert_eq!(s.equations[0].coeff_of(&Monomial::from_exps(&[1])), 4);
        assert_eq!(s.equations[0].coeff_of(&Monomial::from_exps(&[0])), 2);
    }

    #[test]
    fn format_sorts_terms_and_round_trips_toy() {
        let sys = parse_system(TOY).unwrap();
        let text = format_system(&sys);
        assert_eq!(
            text,
            "ring x, y over zp(30011)\ny^2 + x + 30010\nx*y + 30010\n"
        );
        assert_eq!(parse_system(&text).unwrap(), sys);
    }

    #[test]
    fn zero_polynomial_formats_as_zero() {
        let f = PrimeField::new(7).unwrap();
        let z = PolyZp::zero(f, 1);
        assert_eq!(format_zp(&z, &["x".to_string()]), "0");
    }

    #[test]
    fn float_literals_only_over_complex() {
        assert!(parse_system("ring x over complex\n1.5*x - 0.25\n").is_ok());
        let err = parse_system("ring x over zp(7)\n1.5*x\n").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Semantic);
    }

    #[test]
    fn name_comment_round_trips() {
        let text = "# name: demo\nring x over zp(7)\nx + 1\n";
        let sys = parse_system(text).unwrap();
        assert_eq!(sys.name(), Some("demo"));
        assert_eq!(format_system(&sys), text);
    }

    fn random_system(rng: &mut ChaCha8Rng) -> SystemFile {
        let nvars = rng.gen_range(1..4);
        let names: Vec<String> = (0..nvars).map(|i| format!("v{i}")).collect();
        let zp = rng.gen_bool(0.6);
        let neqs = rng.gen_range(1..4);
        if zp {
            let field = PrimeField::default_field();
            let ring = Ring::new(names, CoeffSpec::Zp(field.modulus()));
            let equations = (0..neqs)
                .map(|_| {
                    let terms: Vec<(Monomial, u32)> = (0..rng.gen_range(1..6))
                        .map(|_| {
                            let exps: Vec<u16> =
                                (0..nvars).map(|_| rng.gen_range(0..4)).collect();
                            (Monomial::from_exps(&exps), field.rand_elem(rng))
                        })
                        .collect();
                    PolyZp::from_terms(field, nvars, terms)
                })
                .collect();
            SystemFile::Zp(System {
                name: None,
                ring,
                field,
                equations,
            })
        } else {
            let ring = Ring::new(names, CoeffSpec::Complex);
            let equations = (0..neqs)
                .map(|_| {
                    let terms: Vec<(Monomial, Complex64)> = (0..rng.gen_range(1..6))
                        .map(|_| {
                            let exps: Vec<u16> =
                                (0..nvars).map(|_| rng.gen_range(0..4)).collect();
                            (
                                Monomial::from_exps(&exps),
                                Complex64::new(rng.gen_range(-10.0..10.0), 0.0),
                            )
                        })
                        .collect();
                    PolyC::from_terms(ComplexCoeffs, nvars, terms)
                })
                .collect();
            SystemFile::Complex(System {
                name: None,
                ring,
                field: ComplexCoeffs,
                equations,
            })
        }
    }

    #[test]
    fn round_trip_on_random_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut nonempty = 0;
        for _ in 0..100 {
            let sys = random_system(&mut rng);
            // A randomly cancelled-to-zero equation still round-trips as "0".
            let text = format_system(&sys);
            let back = parse_system(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
            assert_eq!(back, sys, "round trip failed for:\n{text}");
            if sys.num_equations() > 0 {
                nonempty += 1;
            }
        }
        assert_eq!(nonempty, 100);
    }

    #[test]
    fn parse_monomial_round_trip() {
        let names = vec!["x".to_string(), "y".to_string()];
        for exps in [[0u16, 0], [1, 0], [2, 3], [0, 7]] {
            let m = Monomial::from_exps(&exps);
            assert_eq!(parse_monomial(&m.format(&names), &names), Some(m));
        }
        assert_eq!(parse_monomial("z", &names), None);
    }
}
