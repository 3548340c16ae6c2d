//! Tokenizer for the expression syntax.
//!
//! Produces a flat token list with byte offsets so the parser can report
//! positions. Whitespace separates tokens and is otherwise insignificant.
//! Two-character operators (`!=`, `||`, `&&`) are matched greedily; `data` is
//! a reserved word, every other identifier is a label.

use super::ParseError;

/// One lexical token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    LAngle,
    RAngle,
    Underscore,
    Caret,
    Slash,
    Pipe,
    PipePipe,
    Amp,
    AmpAmp,
    Star,
    Bang,
    BangEq,
    Tilde,
    Eq,
    Comma,
    /// The reserved word `data`.
    Data,
    /// An edge label / identifier.
    Label(String),
    /// A double-quoted string literal (already unescaped).
    Str(String),
    /// A natural number (only legal inside `{n,m}` bounds).
    Nat(u32),
}

impl Tok {
    /// Human-readable token name for error messages.
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::LParen => "'('".to_string(),
            Tok::RParen => "')'".to_string(),
            Tok::LBracket => "'['".to_string(),
            Tok::RBracket => "']'".to_string(),
            Tok::LBrace => "'{'".to_string(),
            Tok::RBrace => "'}'".to_string(),
            Tok::LAngle => "'<'".to_string(),
            Tok::RAngle => "'>'".to_string(),
            Tok::Underscore => "'_'".to_string(),
            Tok::Caret => "'^'".to_string(),
            Tok::Slash => "'/'".to_string(),
            Tok::Pipe => "'|'".to_string(),
            Tok::PipePipe => "'||'".to_string(),
            Tok::Amp => "'&'".to_string(),
            Tok::AmpAmp => "'&&'".to_string(),
            Tok::Star => "'*'".to_string(),
            Tok::Bang => "'!'".to_string(),
            Tok::BangEq => "'!='".to_string(),
            Tok::Tilde => "'~'".to_string(),
            Tok::Eq => "'='".to_string(),
            Tok::Comma => "','".to_string(),
            Tok::Data => "'data'".to_string(),
            Tok::Label(l) => format!("label {l:?}"),
            Tok::Str(_) => "string literal".to_string(),
            Tok::Nat(n) => format!("number {n}"),
        }
    }
}

/// Tokenizes `src`, returning tokens paired with their starting byte offset.
pub(crate) fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
            }
            b'(' => {
                out.push((Tok::LParen, start));
                i += 1;
            }
            b')' => {
                out.push((Tok::RParen, start));
                i += 1;
            }
            b'[' => {
                out.push((Tok::LBracket, start));
                i += 1;
            }
            b']' => {
                out.push((Tok::RBracket, start));
                i += 1;
            }
            b'{' => {
                out.push((Tok::LBrace, start));
                i += 1;
            }
            b'}' => {
                out.push((Tok::RBrace, start));
                i += 1;
            }
            b'<' => {
                out.push((Tok::LAngle, start));
                i += 1;
            }
            b'>' => {
                out.push((Tok::RAngle, start));
                i += 1;
            }
            b'^' => {
                out.push((Tok::Caret, start));
                i += 1;
            }
            b'/' => {
                out.push((Tok::Slash, start));
                i += 1;
            }
            b'*' => {
                out.push((Tok::Star, start));
                i += 1;
            }
            b'~' => {
                out.push((Tok::Tilde, start));
                i += 1;
            }
            b'=' => {
                out.push((Tok::Eq, start));
                i += 1;
            }
            b',' => {
                out.push((Tok::Comma, start));
                i += 1;
            }
            b'|' => {
                if bytes.get(i + 1) == Some(&b'|') {
                    out.push((Tok::PipePipe, start));
                    i += 2;
                } else {
                    out.push((Tok::Pipe, start));
                    i += 1;
                }
            }
            b'&' => {
                if bytes.get(i + 1) == Some(&b'&') {
                    out.push((Tok::AmpAmp, start));
                    i += 2;
                } else {
                    out.push((Tok::Amp, start));
                    i += 1;
                }
            }
            b'!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    out.push((Tok::BangEq, start));
                    i += 2;
                } else {
                    out.push((Tok::Bang, start));
                    i += 1;
                }
            }
            b'"' => {
                let (s, next) = lex_string(src, i)?;
                out.push((Tok::Str(s), start));
                i = next;
            }
            b'0'..=b'9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let text = &src[i..j];
                let n = text.parse::<u32>().map_err(|_| ParseError::Syntax {
                    position: start,
                    message: format!("number {text} is out of range"),
                })?;
                out.push((Tok::Nat(n), start));
                i = j;
            }
            b'A'..=b'Z' | b'a'..=b'z' | b'_' => {
                let mut j = i + 1;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                let word = &src[i..j];
                let tok = if word == "_" {
                    Tok::Underscore
                } else if word == "data" {
                    Tok::Data
                } else {
                    Tok::Label(word.to_string())
                };
                out.push((tok, start));
                i = j;
            }
            _ => {
                return Err(ParseError::Syntax {
                    position: start,
                    message: format!(
                        "unexpected character {:?}",
                        src[start..].chars().next().unwrap()
                    ),
                });
            }
        }
    }
    Ok(out)
}

/// Lexes a double-quoted string starting at byte `open` (which holds `"`).
/// Recognized escapes: `\"` and `\\`. Returns the unescaped contents and the
/// index just past the closing quote.
fn lex_string(src: &str, open: usize) -> Result<(String, usize), ParseError> {
    let bytes = src.as_bytes();
    let mut i = open + 1;
    let mut out = String::new();
    while i < bytes.len() {
        match bytes[i] {
            b'"' => return Ok((out, i + 1)),
            b'\\' => match bytes.get(i + 1) {
                Some(b'"') => {
                    out.push('"');
                    i += 2;
                }
                Some(b'\\') => {
                    out.push('\\');
                    i += 2;
                }
                _ => {
                    return Err(ParseError::Syntax {
                        position: i,
                        message: "invalid escape in string literal (use \\\" or \\\\)".to_string(),
                    })
                }
            },
            _ => {
                // Step over one full UTF-8 character.
                let c = src[i..].chars().next().unwrap();
                out.push(c);
                i += c.len_utf8();
            }
        }
    }
    Err(ParseError::Syntax {
        position: open,
        message: "unterminated string literal".to_string(),
    })
}
