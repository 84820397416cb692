//! Polynomial input syntax.
//!
//! Two forms are accepted:
//!
//! * coefficient lists in ascending order, `[-6, 11, -6, 1]`, whose entries
//!   may be complex literals such as `2-0.5i`;
//! * expressions such as `3x^2y - 1.5y^4 + 2` or `(x^2-4)^2 + (y^2-9)^2`,
//!   with `+ - *`, non-negative integer powers, parentheses and implicit
//!   multiplication. `z` is a synonym for `x`, and `i` is the imaginary unit.
//!
//! Whitespace is ignored and the Unicode minus sign is read as `-`.

use std::collections::BTreeMap;
use std::fmt;

use polyroots::{BivarPoly, Complex64, ComplexPoly, Poly, RealPoly};

/// Largest exponent accepted after `^`.
const MAX_POWER: u32 = 1000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based, counted in characters.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// What the text turned out to describe.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedPoly {
    Real(RealPoly),
    Complex(ComplexPoly),
    Bivar(BivarPoly),
}

impl ParsedPoly {
    pub fn kind(&self) -> &'static str {
        match self {
            ParsedPoly::Real(_) => "real univariate",
            ParsedPoly::Complex(_) => "complex univariate",
            ParsedPoly::Bivar(_) => "bivariate",
        }
    }

    pub fn into_real(self) -> Result<RealPoly, String> {
        match self {
            ParsedPoly::Real(p) => Ok(p),
            other => Err(format!("expected a real polynomial in x, got a {} one", other.kind())),
        }
    }

    pub fn into_complex(self) -> Result<ComplexPoly, String> {
        match self {
            ParsedPoly::Real(p) => Ok(p.to_complex()),
            ParsedPoly::Complex(p) => Ok(p),
            other => Err(format!("expected a polynomial in z, got a {} one", other.kind())),
        }
    }

    pub fn into_bivar(self) -> Result<BivarPoly, String> {
        match self {
            ParsedPoly::Real(p) => Ok(BivarPoly::from_x_poly(&p)),
            ParsedPoly::Bivar(p) => Ok(p),
            other => Err(format!(
                "expected a real polynomial in x and y, got a {} one",
                other.kind()
            )),
        }
    }
}

pub fn parse_poly(text: &str) -> Result<ParsedPoly, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        saw_i: false,
        end: text.chars().count() + 1,
    };
    let sparse = if parser.peek() == Some(&Tok::LBracket) {
        parser.list()?
    } else {
        parser.expr()?
    };
    if let Some((_, col)) = parser.tokens.get(parser.pos) {
        return Err(ParseError {
            column: *col,
            message: "unexpected input after the polynomial".into(),
        });
    }
    classify(sparse, parser.saw_i)
}

/// A constant such as `2`, `-1.5` or `3-4i`, for `--at`-style arguments.
pub fn parse_complex(text: &str) -> Result<Complex64, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        saw_i: false,
        end: text.chars().count() + 1,
    };
    let start = parser.column();
    let sparse = parser.expr()?;
    if let Some((_, col)) = parser.tokens.get(parser.pos) {
        return Err(ParseError {
            column: *col,
            message: "unexpected input after the number".into(),
        });
    }
    constant_of(&sparse).ok_or(ParseError {
        column: start,
        message: "expected a number, not a polynomial".into(),
    })
}

/// Canonical sparse-term text, highest total degree first. `parse_poly`
/// reads it back to the same coefficients.
pub fn render(p: &ParsedPoly) -> String {
    let (terms, complex): (Vec<Term>, bool) = match p {
        ParsedPoly::Real(p) => (
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(i, &c)| ((i, 0), Complex64::new(c, 0.0)))
                .collect(),
            false,
        ),
        ParsedPoly::Complex(p) => (p.coeffs().iter().enumerate().map(|(i, &c)| ((i, 0), c)).collect(), true),
        ParsedPoly::Bivar(p) => (
            p.terms()
                .into_iter()
                .map(|(i, j, c)| ((i, j), Complex64::new(c, 0.0)))
                .collect(),
            false,
        ),
    };
    let var = if complex { "z" } else { "x" };
    let mut terms: Vec<_> = terms
        .into_iter()
        .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
        .collect();
    terms.sort_by_key(|&((i, j), _)| (std::cmp::Reverse(i + j), std::cmp::Reverse(i)));
    if terms.is_empty() {
        return if complex { "(0+0i)".into() } else { "0".into() };
    }
    let mut out = String::new();
    for (k, &((i, j), c)) in terms.iter().enumerate() {
        let mut monomial = String::new();
        for (name, e) in [(var, i), ("y", j)] {
            match e {
                0 => {}
                1 => monomial.push_str(name),
                _ => monomial.push_str(&format!("{name}^{e}")),
            }
        }
        if complex {
            let im = if c.im < 0.0 || (c.im == 0.0 && c.im.is_sign_negative()) {
                format!("-{}i", -c.im)
            } else {
                format!("+{}i", c.im)
            };
            if k > 0 {
                out.push_str(" + ");
            }
            out.push_str(&format!("({}{im}){monomial}", c.re));
            continue;
        }
        let (sign, mag) = if c.re < 0.0 { ("-", -c.re) } else { ("+", c.re) };
        match (k, sign) {
            (0, "-") => out.push('-'),
            (0, _) => {}
            (_, s) => out.push_str(&format!(" {s} ")),
        }
        if mag != 1.0 || monomial.is_empty() {
            out.push_str(&mag.to_string());
        }
        out.push_str(&monomial);
    }
    out
}

type Sparse = BTreeMap<(u32, u32), Complex64>;
type Term = ((usize, usize), Complex64);

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    X,
    Y,
    I,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let col = k + 1;
        let c = chars[k];
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            'x' | 'X' | 'z' | 'Z' => Some(Tok::X),
            'y' | 'Y' => Some(Tok::Y),
            'i' => Some(Tok::I),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_digit() || chars[k] == '.') {
                k += 1;
            }
            // An exponent only when digits follow, so `2e` stays an error
            // rather than silently swallowing a character.
            if k < chars.len() && (chars[k] == 'e' || chars[k] == 'E') {
                let mut j = k + 1;
                if j < chars.len() && matches!(chars[j], '+' | '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    k = j;
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                }
            }
            let literal: String = chars[start..k].iter().collect();
            let value: f64 = literal.parse().map_err(|_| ParseError {
                column: col,
                message: format!("malformed number `{literal}`"),
            })?;
            out.push((Tok::Num(value), col));
            continue;
        }
        return Err(ParseError {
            column: col,
            message: format!("unexpected character `{c}`"),
        });
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    saw_i: bool,
    /// Column reported for errors at end of input.
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |&(_, c)| c)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            column: self.column(),
            message: message.into(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn list(&mut self) -> Result<Sparse, ParseError> {
        self.pos += 1;
        let mut out = Sparse::new();
        let mut k = 0u32;
        loop {
            let col = self.column();
            let item = self.expr()?;
            let c = constant_of(&item).ok_or(ParseError {
                column: col,
                message: "list entries must be numbers".into(),
            })?;
            if c != Complex64::new(0.0, 0.0) {
                out.insert((k, 0), c);
            }
            k += 1;
            if self.eat(&Tok::RBracket) {
                return Ok(out);
            }
            if !self.eat(&Tok::Comma) {
                return self.error("expected `,` or `]`");
            }
        }
    }

    fn expr(&mut self) -> Result<Sparse, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = add(&acc, &self.term()?, 1.0);
            } else if self.eat(&Tok::Minus) {
                acc = add(&acc, &self.term()?, -1.0);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Sparse, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = mul(&acc, &self.factor()?);
            } else if matches!(self.peek(), Some(Tok::X | Tok::Y | Tok::I | Tok::LParen)) {
                // Not before a number: `x 2` and `1 2` are more likely typos.
                acc = mul(&acc, &self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Sparse, ParseError> {
        if self.eat(&Tok::Minus) {
            return Ok(scale(&self.factor()?, -1.0));
        }
        if self.eat(&Tok::Plus) {
            return self.factor();
        }
        let base = self.atom()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let col = self.column();
        let e = match self.tokens.get(self.pos) {
            Some((Tok::Num(v), _)) => *v,
            _ => return self.error("expected an exponent after `^`"),
        };
        self.pos += 1;
        if e.fract() != 0.0 || e < 0.0 || e > MAX_POWER as f64 {
            return Err(ParseError {
                column: col,
                message: format!("exponent must be an integer between 0 and {MAX_POWER}"),
            });
        }
        Ok(power(&base, e as u32))
    }

    fn atom(&mut self) -> Result<Sparse, ParseError> {
        let Some((tok, _)) = self.tokens.get(self.pos).cloned() else {
            return self.error("unexpected end of input");
        };
        let monomial = |i, j, c| Sparse::from([((i, j), c)]);
        let one = Complex64::new(1.0, 0.0);
        let out = match tok {
            Tok::Num(v) => monomial(0, 0, Complex64::new(v, 0.0)),
            Tok::X => monomial(1, 0, one),
            Tok::Y => monomial(0, 1, one),
            Tok::I => {
                self.saw_i = true;
                monomial(0, 0, Complex64::new(0.0, 1.0))
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return self.error("expected `)`");
                }
                return Ok(inner);
            }
            _ => return self.error("expected a number, variable or `(`"),
        };
        self.pos += 1;
        Ok(out)
    }
}

fn constant_of(p: &Sparse) -> Option<Complex64> {
    if p.iter().any(|(&k, c)| k != (0, 0) && *c != Complex64::new(0.0, 0.0)) {
        return None;
    }
    Some(p.get(&(0, 0)).copied().unwrap_or_default())
}

fn add(a: &Sparse, b: &Sparse, sign: f64) -> Sparse {
    let mut out = a.clone();
    for (&k, &c) in b {
        *out.entry(k).or_default() += c * sign;
    }
    out
}

fn scale(a: &Sparse, s: f64) -> Sparse {
    a.iter().map(|(&k, &c)| (k, c * s)).collect()
}

fn mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (&(i1, j1), &c1) in a {
        for (&(i2, j2), &c2) in b {
            *out.entry((i1 + i2, j1 + j2)).or_default() += c1 * c2;
        }
    }
    out
}

fn power(base: &Sparse, e: u32) -> Sparse {
    let mut out = Sparse::from([((0, 0), Complex64::new(1.0, 0.0))]);
    for _ in 0..e {
        out = mul(&out, base);
    }
    out
}

fn classify(sparse: Sparse, saw_i: bool) -> Result<ParsedPoly, ParseError> {
    let sparse: Sparse = sparse
        .into_iter()
        .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
        .collect();
    let uses_y = sparse.keys().any(|&(_, j)| j > 0);
    let complex = saw_i || sparse.values().any(|c| c.im != 0.0);
    if uses_y && complex {
        return Err(ParseError {
            column: 1,
            message: "complex coefficients are only supported in polynomials of one variable".into(),
        });
    }
    let deg_x = sparse.keys().map(|&(i, _)| i as usize).max().unwrap_or(0);
    if uses_y {
        let deg_y = sparse.keys().map(|&(_, j)| j as usize).max().unwrap_or(0);
        let mut grid = vec![vec![0.0; deg_y + 1]; deg_x + 1];
        for ((i, j), c) in sparse {
            grid[i as usize][j as usize] = c.re;
        }
        return Ok(ParsedPoly::Bivar(BivarPoly::new(grid)));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); deg_x + 1];
    for ((i, _), c) in sparse {
        coeffs[i as usize] = c;
    }
    if complex {
        Ok(ParsedPoly::Complex(Poly::new(coeffs)))
    } else {
        Ok(ParsedPoly::Real(Poly::new(coeffs.into_iter().map(|c| c.re).collect())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(text: &str) -> Vec<f64> {
        parse_poly(text).unwrap().into_real().unwrap().coeffs().to_vec()
    }

    #[test]
    fn coefficient_list() {
        assert_eq!(real("[\u{2212}6, 11, \u{2212}6, 1]"), vec![-6.0, 11.0, -6.0, 1.0]);
        assert_eq!(real(" [ 1.5e1 , -2E-1 ] "), vec![15.0, -0.2]);
    }

    #[test]
    fn complex_list() {
        let ParsedPoly::Complex(p) = parse_poly("[1+0i, 0+1i]").unwrap() else {
            panic!()
        };
        assert_eq!(p.coeffs(), &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]);
        let ParsedPoly::Complex(p) = parse_poly("[2-0.5i, 3i, -i]").unwrap() else {
            panic!()
        };
        assert_eq!(p.coeff(0), Complex64::new(2.0, -0.5));
        assert_eq!(p.coeff(2), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn sparse_terms() {
        let ParsedPoly::Bivar(p) = parse_poly("x^2 - y^2").unwrap() else {
            panic!()
        };
        assert_eq!(p.terms(), vec![(0, 2, -1.0), (2, 0, 1.0)]);
        let ParsedPoly::Bivar(p) = parse_poly("3x^2y - 1.5y^4 + 2").unwrap() else {
            panic!()
        };
        assert_eq!(p.coeff(2, 1), 3.0);
        assert_eq!(p.coeff(0, 4), -1.5);
        assert_eq!(p.coeff(0, 0), 2.0);
    }

    #[test]
    fn grouping_and_powers() {
        assert_eq!(real("(x-1)(x-2)(x-3)"), vec![-6.0, 11.0, -6.0, 1.0]);
        assert_eq!(real("2*(x+1)^2"), vec![2.0, 4.0, 2.0]);
        assert_eq!(real("-x^2"), vec![0.0, 0.0, -1.0]);
        let ParsedPoly::Bivar(p) = parse_poly("(x^2-4)^2+(y^2-9)^2").unwrap() else {
            panic!()
        };
        assert_eq!(p.coeff(4, 0), 1.0);
        assert_eq!(p.coeff(0, 0), 97.0);
    }

    #[test]
    fn z_and_i() {
        let ParsedPoly::Complex(p) = parse_poly("z^2 + (1-2i)z + i").unwrap() else {
            panic!()
        };
        assert_eq!(
            p.coeffs(),
            &[
                Complex64::new(0.0, 1.0),
                Complex64::new(1.0, -2.0),
                Complex64::new(1.0, 0.0)
            ]
        );
    }

    #[test]
    fn errors_carry_columns() {
        let col = |t: &str| parse_poly(t).unwrap_err().column;
        assert_eq!(col("x + $"), 5);
        assert_eq!(col("x^"), 3);
        assert_eq!(col("(x + 1"), 7);
        assert_eq!(col("[1, x]"), 5);
        assert_eq!(col("x^1.5"), 3);
        assert_eq!(col("[1 2]"), 4);
        assert_eq!(col("x 2"), 3);
        assert_eq!(col("x y )"), 5);
        assert_eq!(col("iy"), 1);
        assert_eq!(col(""), 1);
    }

    #[test]
    fn constants() {
        assert_eq!(parse_complex("3-4i").unwrap(), Complex64::new(3.0, -4.0));
        assert_eq!(parse_complex("\u{2212}2").unwrap(), Complex64::new(-2.0, 0.0));
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn render_reads_well() {
        assert_eq!(render(&parse_poly("[-6, 11, -6, 1]").unwrap()), "x^3 - 6x^2 + 11x - 6");
        assert_eq!(
            render(&parse_poly("3x^2y - 1.5y^4 + 2").unwrap()),
            "-1.5y^4 + 3x^2y + 2"
        );
        assert_eq!(render(&parse_poly("[1+0i, 0+1i]").unwrap()), "(0+1i)z + (1+0i)");
        assert_eq!(render(&parse_poly("[0]").unwrap()), "0");
    }
}
