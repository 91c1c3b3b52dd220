//! Text parsers: s-expression concepts and line-oriented TBox files.
//!
//! Concept grammar: `top | bot | NAME | (and C C) | (some ROLE C) |
//! (btw C C)`. TBox lines: `natural A, B`, `intra r`, `ci C <= D`,
//! `ana C1 : C2 :: D1 : D2`, `sana ...`, `nonempty C`; `#` starts a
//! comment. Naturalness of analogy assertions and `btw` children is
//! checked against the declarations collected from the whole file.

use crate::concept::{Concept, Declarations};
use crate::error::ParseError;
use crate::tbox::{AnalogyAssertion, Statement, TBox};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Colon,
    DColon,
    Le,
    Ident(String),
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

type Spanned = (Tok, usize, usize);

impl<'a> Lexer<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Lexer { chars: text.chars().peekable(), line, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<(Vec<Spanned>, (usize, usize)), ParseError> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            let (line, col) = (self.line, self.col);
            match c {
                ' ' | '\t' | '\r' | '\n' => {
                    self.bump();
                }
                '#' => {
                    while let Some(&c) = self.chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                '(' => {
                    self.bump();
                    out.push((Tok::LParen, line, col));
                }
                ')' => {
                    self.bump();
                    out.push((Tok::RParen, line, col));
                }
                ':' => {
                    self.bump();
                    if self.chars.peek() == Some(&':') {
                        self.bump();
                        out.push((Tok::DColon, line, col));
                    } else {
                        out.push((Tok::Colon, line, col));
                    }
                }
                '<' => {
                    self.bump();
                    if self.chars.peek() == Some(&'=') {
                        self.bump();
                        out.push((Tok::Le, line, col));
                    } else {
                        return Err(ParseError::new(line, col, "expected `<=`"));
                    }
                }
                c if c.is_alphanumeric() || c == '_' || c == '\'' || c == '-' || c == '.' => {
                    let mut ident = String::new();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_alphanumeric() || c == '_' || c == '\'' || c == '-' || c == '.' {
                            ident.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    out.push((Tok::Ident(ident), line, col));
                }
                other => {
                    return Err(ParseError::new(line, col, format!("unexpected `{other}`")));
                }
            }
        }
        Ok((out, (self.line, self.col)))
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn new(text: &str, line: usize) -> Result<Self, ParseError> {
        let (toks, end) = Lexer::new(text, line).tokens()?;
        Ok(Parser { toks, pos: 0, end })
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|&(_, l, c)| (l, c)).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        let (line, col) = self.here();
        match self.next() {
            Some(t) if *t == tok => Ok(()),
            _ => Err(ParseError::new(line, col, format!("expected {what}"))),
        }
    }

    fn concept(&mut self) -> Result<Concept, ParseError> {
        let (line, col) = self.here();
        match self.next().cloned() {
            Some(Tok::Ident(name)) => match name.as_str() {
                "top" => Ok(Concept::Top),
                "bot" => Ok(Concept::Bot),
                "and" | "some" | "btw" => Err(ParseError::new(
                    line,
                    col,
                    format!("`{name}` must appear in parentheses"),
                )),
                _ => Ok(Concept::Atom(name)),
            },
            Some(Tok::LParen) => {
                let (hline, hcol) = self.here();
                let head = match self.next().cloned() {
                    Some(Tok::Ident(h)) => h,
                    _ => {
                        return Err(ParseError::new(
                            hline,
                            hcol,
                            "expected `and`, `some` or `btw`",
                        ))
                    }
                };
                let out = match head.as_str() {
                    "and" => Concept::and(self.concept()?, self.concept()?),
                    "btw" => Concept::between(self.concept()?, self.concept()?),
                    "some" => {
                        let (rline, rcol) = self.here();
                        let role = match self.next().cloned() {
                            Some(Tok::Ident(r)) => r,
                            _ => return Err(ParseError::new(rline, rcol, "expected role name")),
                        };
                        Concept::exists(role, self.concept()?)
                    }
                    other => {
                        return Err(ParseError::new(
                            hline,
                            hcol,
                            format!("unknown constructor `{other}`"),
                        ))
                    }
                };
                self.expect(Tok::RParen, "`)`")?;
                Ok(out)
            }
            _ => Err(ParseError::new(line, col, "expected a concept")),
        }
    }

    fn done(&mut self) -> Result<(), ParseError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            let (line, col) = self.here();
            Err(ParseError::new(line, col, "trailing input"))
        }
    }
}

/// Parses a single concept expression.
pub fn parse_concept(text: &str) -> Result<Concept, ParseError> {
    let mut p = Parser::new(text, 1)?;
    let c = p.concept()?;
    p.done()?;
    Ok(c)
}

/// Parses a concept and checks its well-formedness (natural `btw`
/// children) against the given declarations.
pub fn parse_concept_checked(text: &str, decls: &Declarations) -> Result<Concept, ParseError> {
    let c = parse_concept(text)?;
    c.check_well_formed(decls)
        .map_err(|e| ParseError::new(1, 1, e.to_string()))?;
    Ok(c)
}

/// Parses the `C1 : C2 :: D1 : D2` quadruple form; well-formedness is
/// checked against the declarations, naturalness is not.
pub fn parse_quad(text: &str, decls: &Declarations) -> Result<[Concept; 4], ParseError> {
    let mut p = Parser::new(text, 1)?;
    let quad = quad(&mut p)?;
    p.done()?;
    for c in &quad {
        c.check_well_formed(decls)
            .map_err(|e| ParseError::new(1, 1, e.to_string()))?;
    }
    Ok(quad)
}

fn quad(p: &mut Parser) -> Result<[Concept; 4], ParseError> {
    let c1 = p.concept()?;
    p.expect(Tok::Colon, "`:`")?;
    let c2 = p.concept()?;
    p.expect(Tok::DColon, "`::`")?;
    let d1 = p.concept()?;
    p.expect(Tok::Colon, "`:`")?;
    let d2 = p.concept()?;
    Ok([c1, c2, d1, d2])
}

/// Parses one semantic statement line (`ci`, `ana`, `sana` or `nonempty`,
/// keyword included) against already collected declarations.
pub fn parse_statement(
    line: &str,
    line_no: usize,
    decls: &Declarations,
) -> Result<Statement, ParseError> {
    let line = line.split('#').next().unwrap_or("").trim();
    let Some((kw, rest)) = split_keyword(line) else {
        return Err(ParseError::new(line_no, 1, "expected a statement"));
    };
    match kw {
        "ci" => {
            let mut p = Parser::new(rest, line_no)?;
            let lhs = p.concept()?;
            p.expect(Tok::Le, "`<=`")?;
            let rhs = p.concept()?;
            p.done()?;
            for c in [&lhs, &rhs] {
                c.check_well_formed(decls)
                    .map_err(|e| ParseError::new(line_no, 1, e.to_string()))?;
            }
            Ok(Statement::Inclusion(lhs, rhs))
        }
        "ana" | "sana" => {
            let mut p = Parser::new(rest, line_no)?;
            let [c1, c2, d1, d2] = quad(&mut p)?;
            p.done()?;
            for c in [&c1, &c2, &d1, &d2] {
                c.check_well_formed(decls)
                    .map_err(|e| ParseError::new(line_no, 1, e.to_string()))?;
                if !c.is_natural(decls) {
                    return Err(ParseError::new(
                        line_no,
                        1,
                        format!("analogy assertions require natural concepts; `{c}` is not natural"),
                    ));
                }
            }
            Ok(Statement::Analogy(AnalogyAssertion {
                strict: kw == "sana",
                c1,
                c2,
                d1,
                d2,
            }))
        }
        "nonempty" => {
            let mut p = Parser::new(rest, line_no)?;
            let c = p.concept()?;
            p.done()?;
            c.check_well_formed(decls)
                .map_err(|e| ParseError::new(line_no, 1, e.to_string()))?;
            Ok(Statement::NonEmpty(c))
        }
        other => Err(ParseError::new(
            line_no,
            1,
            format!("unknown statement keyword `{other}`"),
        )),
    }
}

/// Parses a TBox file. Declarations may appear anywhere; the naturalness of
/// analogy assertions and `btw` children is checked against all of them.
pub fn parse_tbox(text: &str) -> Result<TBox, ParseError> {
    // First pass: collect declarations.
    let mut decls = Declarations::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        let Some((kw, rest)) = split_keyword(line) else { continue };
        if kw == "natural" || kw == "intra" {
            for name in rest.split(',') {
                let name = name.trim();
                if name.is_empty() {
                    return Err(ParseError::new(line_no, 1, format!("empty name in `{kw}` line")));
                }
                if kw == "natural" {
                    decls.natural_atoms.insert(name.to_string());
                } else {
                    decls.intra_roles.insert(name.to_string());
                }
            }
        }
    }

    let mut statements = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        let Some((kw, rest)) = split_keyword(line) else { continue };
        match kw {
            "natural" => {
                for name in rest.split(',') {
                    statements.push(Statement::Natural(name.trim().to_string()));
                }
            }
            "intra" => {
                for name in rest.split(',') {
                    statements.push(Statement::Intra(name.trim().to_string()));
                }
            }
            _ => statements.push(parse_statement(line, line_no, &decls)?),
        }
    }
    Ok(TBox { statements })
}

/// Renders a TBox in the line-oriented format; `parse_tbox` round-trips it.
pub fn print_tbox(tbox: &TBox) -> String {
    let mut out = String::new();
    for st in &tbox.statements {
        out.push_str(&st.to_string());
        out.push('\n');
    }
    out
}

fn split_keyword(line: &str) -> Option<(&str, &str)> {
    if line.is_empty() {
        return None;
    }
    match line.find(char::is_whitespace) {
        Some(i) => Some((&line[..i], line[i..].trim_start())),
        None => Some((line, "")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_basic_concepts() {
        assert_eq!(parse_concept("top").unwrap(), Concept::Top);
        assert_eq!(parse_concept("bot").unwrap(), Concept::Bot);
        assert_eq!(
            parse_concept("(and Young Cat)").unwrap(),
            Concept::and(Concept::atom("Young"), Concept::atom("Cat"))
        );
        assert_eq!(
            parse_concept("(some specifies (btw A B))").unwrap(),
            Concept::exists("specifies", Concept::between(Concept::atom("A"), Concept::atom("B")))
        );
    }

    #[test]
    fn concept_round_trip() {
        for text in [
            "top",
            "bot",
            "Cat",
            "(and Young Cat)",
            "(some r (and A (btw B C)))",
        ] {
            let c = parse_concept(text).unwrap();
            assert_eq!(c.to_string(), text);
            assert_eq!(parse_concept(&c.to_string()).unwrap(), c);
        }
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_concept("(and Young").unwrap_err();
        assert_eq!(err.line, 1);
        assert_eq!(err.column, 11);
        let err = parse_concept("(nope A B)").unwrap_err();
        assert_eq!(err.column, 2);
    }

    #[test]
    fn tbox_round_trip() {
        let text = "\
natural Cat
natural Wolf
intra specifies
ci (and Young Cat) <= Cute
ana Cat : Cat :: Wolf : Wolf
sana Cat : Cat :: Wolf : Wolf
nonempty (and Cat Wolf)
";
        let tbox = parse_tbox(text).unwrap();
        assert_eq!(print_tbox(&tbox), text);
        assert_eq!(parse_tbox(&print_tbox(&tbox)).unwrap(), tbox);
    }

    #[test]
    fn assertions_require_natural_concepts() {
        let err = parse_tbox("natural Cat\nana Cat : Cat :: Dog : Dog\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("Dog"));
    }

    #[test]
    fn btw_children_must_be_natural() {
        let err = parse_tbox("natural A\nci D <= (btw A X)\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("X"));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let tbox = parse_tbox("# header\n\nci bot <= top # trailing\n").unwrap();
        assert_eq!(tbox.statements, vec![Statement::Inclusion(Concept::Bot, Concept::Top)]);
    }
}
