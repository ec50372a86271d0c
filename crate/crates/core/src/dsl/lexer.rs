use crate::error::{Error, Result, Span};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
    LBracket,
    RBracket,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Num(x) => format!("number {x}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

struct Cursor<'s> {
    src: &'s str,
    pos: usize,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn eat_digits(&mut self) -> usize {
        let mut n = 0;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            n += 1;
        }
        n
    }
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut cur = Cursor {
        src,
        pos: 0,
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    loop {
        while cur.peek().is_some_and(char::is_whitespace) {
            cur.bump();
        }
        let (start, line, column) = (cur.pos, cur.line, cur.column);
        let span = |cur: &Cursor| Span {
            start,
            end: cur.pos,
            line,
            column,
        };
        let Some(c) = cur.peek() else {
            out.push(Token {
                tok: Tok::Eof,
                span: span(&cur),
            });
            return Ok(out);
        };
        let tok = if c.is_ascii_digit() {
            cur.eat_digits();
            if cur.peek() == Some('.') {
                cur.bump();
                if cur.eat_digits() == 0 {
                    return Err(syntax(&cur, "digit after '.'"));
                }
            }
            if matches!(cur.peek(), Some('e' | 'E')) {
                cur.bump();
                if matches!(cur.peek(), Some('+' | '-')) {
                    cur.bump();
                }
                if cur.eat_digits() == 0 {
                    return Err(syntax(&cur, "exponent digits"));
                }
            }
            let text = &src[start..cur.pos];
            Tok::Num(text.parse().map_err(|_| syntax(&cur, "number"))?)
        } else if c.is_ascii_alphabetic() || c == '_' {
            while cur.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                cur.bump();
            }
            Tok::Ident(src[start..cur.pos].to_string())
        } else {
            cur.bump();
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                other => {
                    return Err(Error::Syntax {
                        line,
                        column,
                        expected: vec!["number".into(), "identifier".into(), "operator".into()],
                        found: format!("'{other}'"),
                    })
                }
            }
        };
        out.push(Token { tok, span: span(&cur) });
    }
}

fn syntax(cur: &Cursor, expected: &str) -> Error {
    Error::Syntax {
        line: cur.line,
        column: cur.column,
        expected: vec![expected.into()],
        found: cur.peek().map_or("end of input".into(), |c| format!("'{c}'")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn numbers_and_identifiers() {
        assert_eq!(
            kinds("1.5e-3*w_k"),
            vec![Tok::Num(1.5e-3), Tok::Star, Tok::Ident("w_k".into()), Tok::Eof]
        );
        assert_eq!(kinds("  "), vec![Tok::Eof]);
    }

    #[test]
    fn positions_track_lines() {
        let toks = tokenize("r +\n  v").unwrap();
        assert_eq!((toks[2].span.line, toks[2].span.column), (2, 3));
    }

    #[test]
    fn rejects_bad_characters_and_numbers() {
        assert!(matches!(tokenize("r # v"), Err(Error::Syntax { column: 3, .. })));
        assert!(tokenize("1.").is_err());
        assert!(tokenize("2e+").is_err());
    }
}
