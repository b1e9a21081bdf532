//! Lexer and parser for the rule fragment used by environment files and
//! question programs: facts, normal rules, integrity constraints, choice
//! heads of the form `1{a : b}1`, and `#count` aggregates.

use std::collections::HashMap;
use std::fmt;

use super::DslError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Sym(String),
    Int(i64),
    Range(i64, i64),
    Anon,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Sym(v) => f.write_str(v),
            Term::Int(i) => write!(f, "{i}"),
            Term::Range(a, b) => write!(f, "{a}..{b}"),
            Term::Anon => f.write_str("_"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            write_joined(f, &self.args, ", ")?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Aggregate {
    pub vars: Vec<Term>,
    pub conds: Vec<Literal>,
    pub op: CmpOp,
    pub bound: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Literal {
    Pos(Atom),
    Neg(Atom),
    Cmp(Term, CmpOp, Term),
    Count(Aggregate),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Pos(a) => write!(f, "{a}"),
            Literal::Neg(a) => write!(f, "not {a}"),
            Literal::Cmp(l, op, r) => write!(f, "{l}{}{r}", op.symbol()),
            Literal::Count(agg) => {
                f.write_str("#count{")?;
                write_joined(f, &agg.vars, ", ")?;
                f.write_str(": ")?;
                write_joined(f, &agg.conds, ", ")?;
                write!(f, "}} {} {}", agg.op.symbol(), agg.bound)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Head {
    /// Integrity constraint (empty head).
    None,
    Atom(Atom),
    Choice {
        lo: i64,
        atom: Atom,
        cond: Vec<Atom>,
        hi: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub head: Head,
    pub body: Vec<Literal>,
    /// First and last source line (1-based) the statement spans.
    pub lines: (usize, usize),
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.head {
            Head::None => {}
            Head::Atom(a) => write!(f, "{a}")?,
            Head::Choice { lo, atom, cond, hi } => {
                write!(f, "{lo}{{{atom}")?;
                if !cond.is_empty() {
                    f.write_str(" : ")?;
                    write_joined(f, cond, ", ")?;
                }
                write!(f, "}}{hi}")?;
            }
        }
        if !self.body.is_empty() {
            if self.head != Head::None {
                f.write_str(" ")?;
            }
            f.write_str(":- ")?;
            write_joined(f, &self.body, ", ")?;
        }
        f.write_str(".")
    }
}

fn write_joined<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    items: &[T],
    sep: &str,
) -> fmt::Result {
    for (i, it) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{it}")?;
    }
    Ok(())
}

impl Rule {
    /// Rendering with variables renamed by first occurrence, used to
    /// compare rules up to variable naming.
    pub fn canonical(&self) -> String {
        let mut names = HashMap::new();
        let mut renamed = self.clone();
        let mut rename = |t: &mut Term| {
            if let Term::Var(v) = t {
                let next = names.len();
                let n = names.entry(v.clone()).or_insert(next);
                *v = format!("V{n}");
            }
        };
        fn visit_atom(a: &mut Atom, f: &mut dyn FnMut(&mut Term)) {
            a.args.iter_mut().for_each(f);
        }
        fn visit_lit(l: &mut Literal, f: &mut dyn FnMut(&mut Term)) {
            match l {
                Literal::Pos(a) | Literal::Neg(a) => visit_atom(a, f),
                Literal::Cmp(a, _, b) => {
                    f(a);
                    f(b);
                }
                Literal::Count(agg) => {
                    agg.vars.iter_mut().for_each(&mut *f);
                    for c in &mut agg.conds {
                        visit_lit(c, f);
                    }
                }
            }
        }
        match &mut renamed.head {
            Head::None => {}
            Head::Atom(a) => visit_atom(a, &mut rename),
            Head::Choice { atom, cond, .. } => {
                visit_atom(atom, &mut rename);
                for c in cond {
                    visit_atom(c, &mut rename);
                }
            }
        }
        for l in &mut renamed.body {
            visit_lit(l, &mut rename);
        }
        renamed.lines = (0, 0);
        renamed.to_string()
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    Int(i64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    If,
    Dot,
    DotDot,
    Op(CmpOp),
    Count,
    Not,
    Underscore,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Var(s) => write!(f, "`{s}`"),
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::If => f.write_str("`:-`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::DotDot => f.write_str("`..`"),
            Tok::Op(op) => write!(f, "`{}`", op.symbol()),
            Tok::Count => f.write_str("`#count`"),
            Tok::Not => f.write_str("`not`"),
            Tok::Underscore => f.write_str("`_`"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, DslError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, message: String| DslError::Syntax { line, col, message };
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut push = |tok, len: usize, i: &mut usize, col: &mut usize| {
            out.push(Spanned {
                tok,
                line: start_line,
                col: start_col,
            });
            *i += len;
            *col += len;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '{' => push(Tok::LBrace, 1, &mut i, &mut col),
            '}' => push(Tok::RBrace, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            ':' if chars.get(i + 1) == Some(&'-') => push(Tok::If, 2, &mut i, &mut col),
            ':' => push(Tok::Colon, 1, &mut i, &mut col),
            '.' if chars.get(i + 1) == Some(&'.') => push(Tok::DotDot, 2, &mut i, &mut col),
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            '!' if chars.get(i + 1) == Some(&'=') => push(Tok::Op(CmpOp::Ne), 2, &mut i, &mut col),
            '<' if chars.get(i + 1) == Some(&'=') => push(Tok::Op(CmpOp::Le), 2, &mut i, &mut col),
            '>' if chars.get(i + 1) == Some(&'=') => push(Tok::Op(CmpOp::Ge), 2, &mut i, &mut col),
            '<' => push(Tok::Op(CmpOp::Lt), 1, &mut i, &mut col),
            '>' => push(Tok::Op(CmpOp::Gt), 1, &mut i, &mut col),
            '=' => push(Tok::Op(CmpOp::Eq), 1, &mut i, &mut col),
            '#' => {
                let word: String = chars[i + 1..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric())
                    .collect();
                if word != "count" {
                    return Err(err(line, col, format!("unsupported directive `#{word}`")));
                }
                push(Tok::Count, 1 + word.len(), &mut i, &mut col);
            }
            '-' | '0'..='9' => {
                let neg = c == '-';
                let digits: String = chars[i + usize::from(neg)..]
                    .iter()
                    .take_while(|c| c.is_ascii_digit())
                    .collect();
                if digits.is_empty() {
                    return Err(err(line, col, "expected digits after `-`".into()));
                }
                let value: i64 = digits
                    .parse()
                    .map_err(|_| err(line, col, format!("integer `{digits}` out of range")))?;
                let len = digits.len() + usize::from(neg);
                push(
                    Tok::Int(if neg { -value } else { value }),
                    len,
                    &mut i,
                    &mut col,
                );
            }
            c if c.is_alphabetic() || c == '_' => {
                let word: String = chars[i..]
                    .iter()
                    .take_while(|c| c.is_alphanumeric() || **c == '_')
                    .collect();
                let len = word.chars().count();
                let tok = if word == "_" {
                    Tok::Underscore
                } else if word == "not" {
                    Tok::Not
                } else if c.is_uppercase() || c == '_' {
                    Tok::Var(word)
                } else {
                    Tok::Ident(word)
                };
                push(tok, len, &mut i, &mut col);
            }
            other => return Err(err(line, col, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    eof: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|s| (s.line, s.col))
            .unwrap_or(self.eof)
    }

    fn error(&self, message: impl Into<String>) -> DslError {
        let (line, col) = self.here();
        DslError::Syntax {
            line,
            col,
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> DslError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {t}")),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), DslError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64, DslError> {
        match self.peek() {
            Some(Tok::Int(i)) => {
                let i = *i;
                self.pos += 1;
                Ok(i)
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn term(&mut self) -> Result<Term, DslError> {
        match self.peek().cloned() {
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(Term::Var(v))
            }
            Some(Tok::Underscore) => {
                self.pos += 1;
                Ok(Term::Anon)
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Term::Sym(s))
            }
            Some(Tok::Int(a)) => {
                self.pos += 1;
                if self.eat(&Tok::DotDot) {
                    let b = self.int()?;
                    Ok(Term::Range(a, b))
                } else {
                    Ok(Term::Int(a))
                }
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn atom(&mut self) -> Result<Atom, DslError> {
        let pred = match self.bump() {
            Some(Tok::Ident(s)) => s,
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("a predicate name"));
            }
        };
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                args.push(self.term()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RParen)?;
        }
        Ok(Atom { pred, args })
    }

    fn cmp_op(&mut self) -> Result<CmpOp, DslError> {
        match self.peek() {
            Some(Tok::Op(op)) => {
                let op = *op;
                self.pos += 1;
                Ok(op)
            }
            _ => Err(self.unexpected("a comparison operator")),
        }
    }

    fn literal(&mut self) -> Result<Literal, DslError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Literal::Neg(self.atom()?))
            }
            Some(Tok::Count) => {
                self.pos += 1;
                self.expect(Tok::LBrace)?;
                let mut vars = Vec::new();
                loop {
                    vars.push(self.term()?);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::Colon)?;
                let mut conds = Vec::new();
                loop {
                    conds.push(self.literal()?);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::RBrace)?;
                let op = self.cmp_op()?;
                let bound = self.int()?;
                Ok(Literal::Count(Aggregate {
                    vars,
                    conds,
                    op,
                    bound,
                }))
            }
            Some(Tok::Ident(_))
                if self.peek2() != Some(&Tok::LParen)
                    && matches!(self.peek2(), Some(Tok::Op(_))) =>
            {
                self.comparison()
            }
            Some(Tok::Ident(_)) => Ok(Literal::Pos(self.atom()?)),
            Some(Tok::Var(_)) | Some(Tok::Int(_)) | Some(Tok::Underscore) => self.comparison(),
            _ => Err(self.unexpected("a literal")),
        }
    }

    fn comparison(&mut self) -> Result<Literal, DslError> {
        let l = self.term()?;
        let op = self.cmp_op()?;
        let r = self.term()?;
        Ok(Literal::Cmp(l, op, r))
    }

    fn body(&mut self) -> Result<Vec<Literal>, DslError> {
        let mut body = Vec::new();
        loop {
            body.push(self.literal()?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(body)
    }

    fn statement(&mut self) -> Result<Rule, DslError> {
        let (first, _) = self.here();
        let head = match self.peek() {
            Some(Tok::If) => Head::None,
            Some(Tok::Int(_)) if self.peek2() == Some(&Tok::LBrace) => {
                let lo = self.int()?;
                self.expect(Tok::LBrace)?;
                let atom = self.atom()?;
                let mut cond = Vec::new();
                if self.eat(&Tok::Colon) {
                    loop {
                        cond.push(self.atom()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrace)?;
                let hi = self.int()?;
                Head::Choice { lo, atom, cond, hi }
            }
            _ => Head::Atom(self.atom()?),
        };
        let body = if self.eat(&Tok::If) {
            self.body()?
        } else {
            Vec::new()
        };
        let last = self.here().0;
        self.expect(Tok::Dot)?;
        Ok(Rule {
            head,
            body,
            lines: (first, last),
        })
    }
}

/// Parses a program into its statements.
pub fn parse_program(src: &str) -> Result<Vec<Rule>, DslError> {
    let toks = lex(src)?;
    let line_count = src.lines().count().max(1);
    let mut p = Parser {
        toks,
        pos: 0,
        eof: (line_count, src.lines().last().map_or(1, |l| l.len() + 1)),
    };
    let mut rules = Vec::new();
    while p.peek().is_some() {
        rules.push(p.statement()?);
    }
    Ok(rules)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integrity_constraint() {
        let rules =
            parse_program(":- object(X), at(X, 0), not hasProperty(X, color, red).").unwrap();
        assert_eq!(rules.len(), 1);
        assert_eq!(rules[0].head, Head::None);
        assert_eq!(rules[0].body.len(), 3);
        assert!(matches!(&rules[0].body[2], Literal::Neg(a) if a.pred == "hasProperty"));
    }

    #[test]
    fn parses_aggregate_and_range() {
        let src = "object(0..4).\n:- #count{X1, X2: sameProperty(X1, X2, color),\n object(X1), object(X2),\n at(X1, 0), at(X2, 3)} >= 2.";
        let rules = parse_program(src).unwrap();
        assert_eq!(
            rules[0].head,
            Head::Atom(Atom {
                pred: "object".into(),
                args: vec![Term::Range(0, 4)]
            })
        );
        assert_eq!(rules[1].lines, (2, 4));
        match &rules[1].body[0] {
            Literal::Count(agg) => {
                assert_eq!(agg.vars.len(), 2);
                assert_eq!(agg.conds.len(), 5);
                assert_eq!(agg.op, CmpOp::Ge);
                assert_eq!(agg.bound, 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parses_choice_head_and_comments() {
        let src = "% comment\n1{hasProperty(X, color, V) : property(color, V)}1 :- object(X).";
        let rules = parse_program(src).unwrap();
        assert!(
            matches!(&rules[0].head, Head::Choice { lo: 1, hi: 1, cond, .. } if cond.len() == 1)
        );
        assert_eq!(rules[0].lines, (2, 2));
    }

    #[test]
    fn inequality_without_spaces() {
        let rules = parse_program("q :- p(X), p(Y), X!=Y.").unwrap();
        assert!(matches!(&rules[0].body[2], Literal::Cmp(_, CmpOp::Ne, _)));
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_program("p(X).\n:- q(X) r(X).").unwrap_err();
        match err {
            DslError::Syntax { line, col, .. } => assert_eq!((line, col), (2, 9)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn canonical_ignores_variable_names() {
        let a = parse_program("left_R(R1, R2) :- right_R(R2, R1).").unwrap();
        let b = parse_program("left_R(A,B):-right_R(B,A).").unwrap();
        assert_eq!(a[0].canonical(), b[0].canonical());
    }

    #[test]
    fn display_reparses() {
        let src = ":- #count{X: hasProperty(X, size, small), object(X), at(X, 1)} != 2.";
        let r = &parse_program(src).unwrap()[0];
        assert_eq!(r.to_string(), src);
    }
}
