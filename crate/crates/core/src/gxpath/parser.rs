//! Recursive-descent parser for path and node expressions.
//!
//! Operator precedence, loosest to tightest:
//!
//! | level   | path syntax          | node syntax |
//! |---------|----------------------|-------------|
//! | 1       | `p \| q` union       | `a \|\| b` disjunction |
//! | 2       | `p & q` intersection | `a && b` conjunction |
//! | 3       | `p/q` composition    | unary: `~a`, `data (!)= "c"`, `<...>` |
//! | 4       | `p*`, `p{n,m}`       |             |
//! | atoms   | `()`, `_`, `a`, `^a`, `[phi]`, `!atom`, `(p)` | `(a)` |
//!
//! All binary operators are left-associative. `!` applies to a single atom;
//! `~` applies to a single unary node expression.

use super::ast::{NodeExpr, PathExpr};
use super::lexer::{tokenize, Tok};
use super::ParseError;

/// Parses a complete path expression.
pub fn parse_path(src: &str) -> Result<PathExpr, ParseError> {
    let mut p = Parser::new(src)?;
    let expr = p.path()?;
    p.expect_end()?;
    Ok(expr)
}

/// Parses a complete node expression.
pub fn parse_node(src: &str) -> Result<NodeExpr, ParseError> {
    let mut p = Parser::new(src)?;
    let expr = p.node()?;
    p.expect_end()?;
    Ok(expr)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
            end: src.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|&(_, at)| at)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    /// Consumes the next token if it equals `t`.
    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected {}", t.describe())))
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(ParseError::Syntax {
                position: self.here(),
                message: format!("expected end of input, found {}", t.describe()),
            }),
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let found = match self.peek() {
            Some(t) => t.describe(),
            None => "end of input".to_string(),
        };
        ParseError::Syntax {
            position: self.here(),
            message: format!("{wanted}, found {found}"),
        }
    }

    // path := inter ('|' inter)*
    fn path(&mut self) -> Result<PathExpr, ParseError> {
        let mut expr = self.inter()?;
        while self.eat(&Tok::Pipe) {
            let rhs = self.inter()?;
            expr = PathExpr::Union(Box::new(expr), Box::new(rhs));
        }
        Ok(expr)
    }

    // inter := concat ('&' concat)*
    fn inter(&mut self) -> Result<PathExpr, ParseError> {
        let mut expr = self.concat()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.concat()?;
            expr = PathExpr::Intersect(Box::new(expr), Box::new(rhs));
        }
        Ok(expr)
    }

    // concat := postfix ('/' postfix)*
    fn concat(&mut self) -> Result<PathExpr, ParseError> {
        let mut expr = self.postfix()?;
        while self.eat(&Tok::Slash) {
            let rhs = self.postfix()?;
            expr = PathExpr::Concat(Box::new(expr), Box::new(rhs));
        }
        Ok(expr)
    }

    // postfix := atom ('*' | '{' NAT ',' NAT '}')*
    fn postfix(&mut self) -> Result<PathExpr, ParseError> {
        let mut expr = self.atom()?;
        loop {
            if self.eat(&Tok::Star) {
                expr = PathExpr::Star(Box::new(expr));
            } else if self.peek() == Some(&Tok::LBrace) {
                let at = self.here();
                self.bump();
                let n = self.nat()?;
                self.expect(&Tok::Comma)?;
                let m = self.nat()?;
                self.expect(&Tok::RBrace)?;
                if n > m {
                    return Err(ParseError::RepeatBounds { n, m, position: at });
                }
                expr = PathExpr::Repeat(Box::new(expr), n, m);
            } else {
                break;
            }
        }
        Ok(expr)
    }

    fn nat(&mut self) -> Result<u32, ParseError> {
        match self.peek() {
            Some(Tok::Nat(n)) => {
                let n = *n;
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected("expected a repetition bound")),
        }
    }

    // atom := '()' | '_' | LABEL | '^' LABEL | '[' node ']' | '!' atom | '(' path ')'
    fn atom(&mut self) -> Result<PathExpr, ParseError> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.bump();
                if self.eat(&Tok::RParen) {
                    return Ok(PathExpr::Epsilon);
                }
                let inner = self.path()?;
                self.expect(&Tok::RParen)?;
                Ok(inner)
            }
            Some(Tok::Underscore) => {
                self.bump();
                Ok(PathExpr::Wildcard)
            }
            Some(Tok::Label(_)) => {
                let Some(Tok::Label(l)) = self.bump() else {
                    unreachable!()
                };
                Ok(PathExpr::Forward(l))
            }
            Some(Tok::Caret) => {
                self.bump();
                match self.bump() {
                    Some(Tok::Label(l)) => Ok(PathExpr::Backward(l)),
                    _ => {
                        self.pos -= 1;
                        Err(self.unexpected("expected a label after '^'"))
                    }
                }
            }
            Some(Tok::LBracket) => {
                self.bump();
                let phi = self.node()?;
                self.expect(&Tok::RBracket)?;
                Ok(PathExpr::NodeTest(Box::new(phi)))
            }
            Some(Tok::Bang) => {
                self.bump();
                let inner = self.atom()?;
                Ok(PathExpr::Complement(Box::new(inner)))
            }
            _ => Err(self.unexpected("expected a path expression")),
        }
    }

    // node := nand ('||' nand)*
    fn node(&mut self) -> Result<NodeExpr, ParseError> {
        let mut expr = self.nand()?;
        while self.eat(&Tok::PipePipe) {
            let rhs = self.nand()?;
            expr = NodeExpr::Or(Box::new(expr), Box::new(rhs));
        }
        Ok(expr)
    }

    // nand := nunary ('&&' nunary)*
    fn nand(&mut self) -> Result<NodeExpr, ParseError> {
        let mut expr = self.nunary()?;
        while self.eat(&Tok::AmpAmp) {
            let rhs = self.nunary()?;
            expr = NodeExpr::And(Box::new(expr), Box::new(rhs));
        }
        Ok(expr)
    }

    // nunary := '~' nunary | 'data' '=' STRING | 'data' '!=' STRING
    //         | '<' path '>' | '<' path '=' path '>' | '<' path '!=' path '>'
    //         | '(' node ')'
    fn nunary(&mut self) -> Result<NodeExpr, ParseError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.bump();
                let inner = self.nunary()?;
                Ok(NodeExpr::Not(Box::new(inner)))
            }
            Some(Tok::Data) => {
                self.bump();
                let negated = if self.eat(&Tok::Eq) {
                    false
                } else if self.eat(&Tok::BangEq) {
                    true
                } else {
                    return Err(self.unexpected("expected '=' or '!=' after 'data'"));
                };
                match self.bump() {
                    Some(Tok::Str(s)) => Ok(if negated {
                        NodeExpr::DataNeq(s)
                    } else {
                        NodeExpr::DataEq(s)
                    }),
                    _ => {
                        self.pos -= 1;
                        Err(self.unexpected("expected a string literal"))
                    }
                }
            }
            Some(Tok::LAngle) => {
                self.bump();
                let first = self.path()?;
                if self.eat(&Tok::RAngle) {
                    return Ok(NodeExpr::HasPath(Box::new(first)));
                }
                let negated = if self.eat(&Tok::Eq) {
                    false
                } else if self.eat(&Tok::BangEq) {
                    true
                } else {
                    return Err(self.unexpected("expected '>', '=' or '!=' in path test"));
                };
                let second = self.path()?;
                self.expect(&Tok::RAngle)?;
                Ok(if negated {
                    NodeExpr::NeqTest(Box::new(first), Box::new(second))
                } else {
                    NodeExpr::EqTest(Box::new(first), Box::new(second))
                })
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.node()?;
                self.expect(&Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.unexpected("expected a node expression")),
        }
    }
}
