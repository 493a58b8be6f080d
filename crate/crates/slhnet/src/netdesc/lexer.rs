use super::ast::{Diagnostic, Loc};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Number(f64),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Semi,
    Plus,
    Minus,
    Star,
    Slash,
    Eq,
    Cascade,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Number(v) => format!("number {v}"),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Semi => "';'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Eq => "'='".into(),
            Tok::Cascade => "'<|'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub loc: Loc,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { chars: text.chars().peekable(), line: 1, col: 1 }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
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

    fn loc(&self) -> Loc {
        Loc::new(self.line, self.col)
    }
}

/// Tokenize the whole input; the token stream always ends with Eof.
pub fn lex(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut cur = Cursor::new(text);
    let mut out = Vec::new();
    loop {
        while let Some(c) = cur.peek() {
            if c == '#' {
                while let Some(c2) = cur.peek() {
                    if c2 == '\n' {
                        break;
                    }
                    cur.bump();
                }
            } else if c.is_whitespace() {
                cur.bump();
            } else {
                break;
            }
        }
        let loc = cur.loc();
        let Some(c) = cur.peek() else {
            out.push(Token { tok: Tok::Eof, loc });
            return Ok(out);
        };
        let tok = match c {
            '{' => {
                cur.bump();
                Tok::LBrace
            }
            '}' => {
                cur.bump();
                Tok::RBrace
            }
            '[' => {
                cur.bump();
                Tok::LBracket
            }
            ']' => {
                cur.bump();
                Tok::RBracket
            }
            '(' => {
                cur.bump();
                Tok::LParen
            }
            ')' => {
                cur.bump();
                Tok::RParen
            }
            ',' => {
                cur.bump();
                Tok::Comma
            }
            ';' => {
                cur.bump();
                Tok::Semi
            }
            '+' => {
                cur.bump();
                Tok::Plus
            }
            '-' => {
                cur.bump();
                Tok::Minus
            }
            '*' => {
                cur.bump();
                Tok::Star
            }
            '/' => {
                cur.bump();
                Tok::Slash
            }
            '=' => {
                cur.bump();
                Tok::Eq
            }
            '\u{25c1}' => {
                // The cascade triangle; '<|' is the ASCII spelling below.
                cur.bump();
                Tok::Cascade
            }
            '<' => {
                cur.bump();
                if cur.peek() == Some('|') {
                    cur.bump();
                    Tok::Cascade
                } else {
                    return Err(Diagnostic::new(loc, "expected '|' after '<'"));
                }
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(d) = cur.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        cur.bump();
                    } else {
                        break;
                    }
                }
                if cur.peek() == Some('.') {
                    s.push('.');
                    cur.bump();
                    if !cur.peek().is_some_and(|d| d.is_ascii_digit()) {
                        return Err(Diagnostic::new(loc, "expected digits after decimal point"));
                    }
                    while let Some(d) = cur.peek() {
                        if d.is_ascii_digit() {
                            s.push(d);
                            cur.bump();
                        } else {
                            break;
                        }
                    }
                }
                if matches!(cur.peek(), Some('e') | Some('E')) {
                    s.push('e');
                    cur.bump();
                    if matches!(cur.peek(), Some('+') | Some('-')) {
                        s.push(cur.bump().expect("peeked sign"));
                    }
                    if !cur.peek().is_some_and(|d| d.is_ascii_digit()) {
                        return Err(Diagnostic::new(loc, "expected digits in exponent"));
                    }
                    while let Some(d) = cur.peek() {
                        if d.is_ascii_digit() {
                            s.push(d);
                            cur.bump();
                        } else {
                            break;
                        }
                    }
                }
                match s.parse::<f64>() {
                    Ok(v) if v.is_finite() => Tok::Number(v),
                    _ => return Err(Diagnostic::new(loc, format!("invalid number literal '{s}'"))),
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(d) = cur.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        cur.bump();
                    } else {
                        break;
                    }
                }
                Tok::Ident(s)
            }
            other => {
                return Err(Diagnostic::new(loc, format!("unexpected character '{other}'")));
            }
        };
        out.push(Token { tok, loc });
    }
}
