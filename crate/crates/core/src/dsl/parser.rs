use super::ast::{BinOp, FuzzyExpr, FuzzyVar, Func, ScalarExpr};
use super::lexer::{tokenize, Tok, Token};
use crate::error::{Error, Result, Span};

pub(crate) struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

fn join(a: Span, b: Span) -> Span {
    Span {
        start: a.start,
        end: b.end,
        line: a.line,
        column: a.column,
    }
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self> {
        Ok(Self {
            tokens: tokenize(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        &self.tokens[(self.pos + ahead).min(self.tokens.len() - 1)].tok
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> Error {
        let t = self.peek();
        Error::Syntax {
            line: t.span.line,
            column: t.span.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.describe(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Span> {
        if self.peek().tok == tok {
            Ok(self.next().span)
        } else {
            Err(self.error(&[&tok.describe()]))
        }
    }

    pub(crate) fn finish(&self) -> Result<()> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(&["operator", "end of input"]))
        }
    }

    // expr = term { ("+" | "-") term }
    pub(crate) fn scalar(&mut self) -> Result<ScalarExpr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.term()?;
            let span = join(lhs.span(), rhs.span());
            lhs = ScalarExpr::Bin {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                span,
            };
        }
    }

    // term = unary { ("*" | "/") unary }
    fn term(&mut self) -> Result<ScalarExpr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.unary()?;
            let span = join(lhs.span(), rhs.span());
            lhs = ScalarExpr::Bin {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                span,
            };
        }
    }

    // unary = "-" unary | primary
    fn unary(&mut self) -> Result<ScalarExpr> {
        if self.peek().tok == Tok::Minus {
            let start = self.next().span;
            let expr = self.unary()?;
            let span = join(start, expr.span());
            return Ok(ScalarExpr::Neg {
                expr: Box::new(expr),
                span,
            });
        }
        self.primary()
    }

    // primary = number | ident | ident "(" args ")" | "(" expr ")"
    fn primary(&mut self) -> Result<ScalarExpr> {
        match self.peek().tok.clone() {
            Tok::Num(value) => {
                let span = self.next().span;
                Ok(ScalarExpr::Num { value, span })
            }
            Tok::Ident(name) => {
                if *self.peek_at(1) == Tok::LParen {
                    let Some(func) = Func::from_name(&name) else {
                        let names: Vec<&str> = Func::ALL.iter().map(|f| f.name()).collect();
                        return Err(self.error(&names));
                    };
                    let start = self.next().span;
                    self.next();
                    let (args, end) = self.scalar_args(func.arity())?;
                    return Ok(ScalarExpr::Call {
                        func,
                        args,
                        span: join(start, end),
                    });
                }
                let span = self.next().span;
                Ok(ScalarExpr::Var { name, span })
            }
            Tok::LParen => {
                self.next();
                let e = self.scalar()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => Err(self.error(&["number", "identifier", "'('", "'-'"])),
        }
    }

    /// Parses `n` comma-separated scalar arguments and the closing parenthesis.
    fn scalar_args(&mut self, n: usize) -> Result<(Vec<ScalarExpr>, Span)> {
        let mut args = Vec::with_capacity(n);
        for i in 0..n {
            if i > 0 {
                self.expect(Tok::Comma)?;
            }
            args.push(self.scalar()?);
        }
        let end = self.expect(Tok::RParen)?;
        Ok((args, end))
    }

    // fexpr = fterm { ("fadd" | "ghsub") fterm }
    pub(crate) fn fuzzy(&mut self) -> Result<FuzzyExpr> {
        let mut lhs = self.fterm()?;
        loop {
            let is_add = match &self.peek().tok {
                Tok::Ident(s) if s == "fadd" => true,
                Tok::Ident(s) if s == "ghsub" => false,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.fterm()?;
            let span = join(lhs.span(), rhs.span());
            let (lhs_b, rhs_b) = (Box::new(lhs), Box::new(rhs));
            lhs = if is_add {
                FuzzyExpr::Add {
                    lhs: lhs_b,
                    rhs: rhs_b,
                    span,
                }
            } else {
                FuzzyExpr::GhSub {
                    lhs: lhs_b,
                    rhs: rhs_b,
                    span,
                }
            };
        }
    }

    fn fterm(&mut self) -> Result<FuzzyExpr> {
        const EXPECTED: &[&str] = &[
            "u", "u_k", "lam", "tri", "trap", "crisp", "fadd", "ghsub", "smul", "circminus", "number", "'('",
        ];
        let tok = self.peek().clone();
        match tok.tok {
            Tok::Num(value) => {
                self.next();
                Ok(FuzzyExpr::Crisp {
                    value: ScalarExpr::Num { value, span: tok.span },
                    span: tok.span,
                })
            }
            Tok::LParen => {
                self.next();
                let e = self.fuzzy()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if let Some(var) = FuzzyVar::from_name(&name) {
                    self.next();
                    let mut span = tok.span;
                    let mut index = None;
                    if self.peek().tok == Tok::LBracket {
                        self.next();
                        match self.peek().tok {
                            Tok::Num(j) if j >= 0.0 && j.fract() == 0.0 => {
                                self.next();
                                index = Some(j as usize);
                            }
                            _ => return Err(self.error(&["component index"])),
                        }
                        span = join(span, self.expect(Tok::RBracket)?);
                    }
                    return Ok(FuzzyExpr::Var { var, index, span });
                }
                if !matches!(name.as_str(), "tri" | "trap" | "crisp" | "fadd" | "ghsub" | "smul" | "circminus") {
                    return Err(self.error(EXPECTED));
                }
                self.next();
                self.expect(Tok::LParen)?;
                let start = tok.span;
                Ok(match name.as_str() {
                    "tri" => {
                        let (a, end) = self.scalar_args(3)?;
                        let [a, b, c]: [ScalarExpr; 3] = a.try_into().expect("three arguments");
                        FuzzyExpr::Tri {
                            args: Box::new([a, b, c]),
                            span: join(start, end),
                        }
                    }
                    "trap" => {
                        let (a, end) = self.scalar_args(4)?;
                        let [a, b, c, d]: [ScalarExpr; 4] = a.try_into().expect("four arguments");
                        FuzzyExpr::Trap {
                            args: Box::new([a, b, c, d]),
                            span: join(start, end),
                        }
                    }
                    "crisp" => {
                        let (mut a, end) = self.scalar_args(1)?;
                        FuzzyExpr::Crisp {
                            value: a.remove(0),
                            span: join(start, end),
                        }
                    }
                    "smul" => {
                        let k = self.scalar()?;
                        self.expect(Tok::Comma)?;
                        let expr = Box::new(self.fuzzy()?);
                        let end = self.expect(Tok::RParen)?;
                        FuzzyExpr::Smul {
                            k,
                            expr,
                            span: join(start, end),
                        }
                    }
                    "circminus" => {
                        let expr = Box::new(self.fuzzy()?);
                        let end = self.expect(Tok::RParen)?;
                        FuzzyExpr::CircMinus {
                            expr,
                            span: join(start, end),
                        }
                    }
                    op => {
                        let lhs = Box::new(self.fuzzy()?);
                        self.expect(Tok::Comma)?;
                        let rhs = Box::new(self.fuzzy()?);
                        let span = join(start, self.expect(Tok::RParen)?);
                        if op == "fadd" {
                            FuzzyExpr::Add { lhs, rhs, span }
                        } else {
                            FuzzyExpr::GhSub { lhs, rhs, span }
                        }
                    }
                })
            }
            _ => Err(self.error(EXPECTED)),
        }
    }
}
