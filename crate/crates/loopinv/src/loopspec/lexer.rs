use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(String),
    // punctuation and operators
    Semi,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Assign, // :=
    Plus,
    Minus,
    Star,
    Slash,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    Ne,
    AndAnd,
    OrOr,
    Arrow, // ->
    Bang,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {col}: {msg}")]
pub struct LexError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

/// Tokenize program text. `#` starts a comment running to end of line.
pub fn lex(src: &str) -> Result<Vec<Token>, LexError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();

    macro_rules! tok {
        ($t:expr, $l:expr, $c:expr) => {
            out.push(Token {
                tok: $t,
                line: $l,
                col: $c,
            })
        };
    }

    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            '#' => {
                while let Some(&c2) = chars.peek() {
                    bump(&mut chars);
                    if c2 == '\n' {
                        break;
                    }
                }
            }
            c if c.is_whitespace() => {
                bump(&mut chars);
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while matches!(chars.peek(), Some(&c2) if c2.is_ascii_alphanumeric() || c2 == '_')
                {
                    s.push(bump(&mut chars));
                }
                tok!(Tok::Ident(s), tl, tc);
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while matches!(chars.peek(), Some(&c2) if c2.is_ascii_digit()) {
                    s.push(bump(&mut chars));
                }
                tok!(Tok::Int(s), tl, tc);
            }
            ';' => {
                bump(&mut chars);
                tok!(Tok::Semi, tl, tc);
            }
            ',' => {
                bump(&mut chars);
                tok!(Tok::Comma, tl, tc);
            }
            '(' => {
                bump(&mut chars);
                tok!(Tok::LParen, tl, tc);
            }
            ')' => {
                bump(&mut chars);
                tok!(Tok::RParen, tl, tc);
            }
            '{' => {
                bump(&mut chars);
                tok!(Tok::LBrace, tl, tc);
            }
            '}' => {
                bump(&mut chars);
                tok!(Tok::RBrace, tl, tc);
            }
            '[' => {
                bump(&mut chars);
                tok!(Tok::LBracket, tl, tc);
            }
            ']' => {
                bump(&mut chars);
                tok!(Tok::RBracket, tl, tc);
            }
            '+' => {
                bump(&mut chars);
                tok!(Tok::Plus, tl, tc);
            }
            '*' => {
                bump(&mut chars);
                tok!(Tok::Star, tl, tc);
            }
            '/' => {
                bump(&mut chars);
                tok!(Tok::Slash, tl, tc);
            }
            '-' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    tok!(Tok::Arrow, tl, tc);
                } else {
                    tok!(Tok::Minus, tl, tc);
                }
            }
            ':' => {
                bump(&mut chars);
                if chars.peek() == Some(&'=') {
                    bump(&mut chars);
                    tok!(Tok::Assign, tl, tc);
                } else {
                    return Err(LexError {
                        line: tl,
                        col: tc,
                        msg: "expected `:=`".into(),
                    });
                }
            }
            '<' => {
                bump(&mut chars);
                if chars.peek() == Some(&'=') {
                    bump(&mut chars);
                    tok!(Tok::Le, tl, tc);
                } else {
                    tok!(Tok::Lt, tl, tc);
                }
            }
            '>' => {
                bump(&mut chars);
                if chars.peek() == Some(&'=') {
                    bump(&mut chars);
                    tok!(Tok::Ge, tl, tc);
                } else {
                    tok!(Tok::Gt, tl, tc);
                }
            }
            '=' => {
                bump(&mut chars);
                if chars.peek() == Some(&'=') {
                    bump(&mut chars);
                    tok!(Tok::EqEq, tl, tc);
                } else {
                    return Err(LexError {
                        line: tl,
                        col: tc,
                        msg: "expected `==` (assignment is `:=`)".into(),
                    });
                }
            }
            '!' => {
                bump(&mut chars);
                if chars.peek() == Some(&'=') {
                    bump(&mut chars);
                    tok!(Tok::Ne, tl, tc);
                } else {
                    tok!(Tok::Bang, tl, tc);
                }
            }
            '&' => {
                bump(&mut chars);
                if chars.peek() == Some(&'&') {
                    bump(&mut chars);
                    tok!(Tok::AndAnd, tl, tc);
                } else {
                    return Err(LexError {
                        line: tl,
                        col: tc,
                        msg: "expected `&&`".into(),
                    });
                }
            }
            '|' => {
                bump(&mut chars);
                if chars.peek() == Some(&'|') {
                    bump(&mut chars);
                    tok!(Tok::OrOr, tl, tc);
                } else {
                    return Err(LexError {
                        line: tl,
                        col: tc,
                        msg: "expected `||`".into(),
                    });
                }
            }
            other => {
                return Err(LexError {
                    line: tl,
                    col: tc,
                    msg: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(out)
}
