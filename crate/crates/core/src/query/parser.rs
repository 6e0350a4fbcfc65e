use crate::error::QueryError;

use super::QueryExpr;

/// Words from the wider class-expression syntax that this query language
/// does not support.
const UNSUPPORTED: &[&str] = &["or", "not", "only", "min", "max", "exactly", "that", "inverse", "self", "Self"];

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Word(String),
    Str(String),
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, QueryError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, ch)) = chars.peek() {
        match ch {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                out.push((pos, Token::Open));
            }
            ')' => {
                chars.next();
                out.push((pos, Token::Close));
            }
            '"' => {
                chars.next();
                let mut literal = String::new();
                loop {
                    match chars.next() {
                        Some((_, '"')) => break,
                        Some((_, '\\')) => match chars.next() {
                            Some((_, c @ ('"' | '\\'))) => literal.push(c),
                            Some((p, c)) => {
                                return Err(QueryError::Syntax {
                                    position: p,
                                    message: format!("unknown escape `\\{c}`"),
                                })
                            }
                            None => break,
                        },
                        Some((_, c)) => literal.push(c),
                        None => {
                            return Err(QueryError::Syntax { position: pos, message: "unterminated string".into() })
                        }
                    }
                }
                out.push((pos, Token::Str(literal)));
            }
            c if is_name_char(c) => {
                let mut word = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if !is_name_char(c) {
                        break;
                    }
                    word.push(c);
                    chars.next();
                }
                out.push((pos, Token::Word(word)));
            }
            c => return Err(QueryError::Syntax { position: pos, message: format!("unexpected character `{c}`") }),
        }
    }
    Ok(out)
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | ':' | '.' | '-')
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    at: usize,
    end: usize,
    /// Depth of enclosing `hasAttribute some` restrictions.
    attribute_depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn error(&self, message: impl Into<String>) -> QueryError {
        QueryError::Syntax { position: self.position(), message: message.into() }
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expect_word(&mut self, word: &str) -> Result<(), QueryError> {
        match self.peek() {
            Some(Token::Word(w)) if w == word => {
                self.at += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected `{word}`"))),
        }
    }

    fn expr(&mut self) -> Result<QueryExpr, QueryError> {
        let mut items = Vec::new();
        push_flat(&mut items, self.term()?);
        while matches!(self.peek(), Some(Token::Word(w)) if w == "and") {
            self.at += 1;
            push_flat(&mut items, self.term()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { QueryExpr::And(items) })
    }

    fn term(&mut self) -> Result<QueryExpr, QueryError> {
        let position = self.position();
        match self.next() {
            Some(Token::Open) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::Close) => Ok(inner),
                    _ => {
                        self.at -= 1;
                        Err(self.error("expected `)`"))
                    }
                }
            }
            Some(Token::Word(w)) => match w.as_str() {
                "hasAssociation" => {
                    self.expect_word("some")?;
                    Ok(QueryExpr::has_association(self.term()?))
                }
                "hasAttribute" => {
                    self.expect_word("some")?;
                    self.attribute_depth += 1;
                    let filler = self.term();
                    self.attribute_depth -= 1;
                    Ok(QueryExpr::has_attribute(filler?))
                }
                "hasValue" => {
                    if self.attribute_depth == 0 {
                        return Err(QueryError::Syntax {
                            position,
                            message: "`hasValue` must appear inside `hasAttribute some`".into(),
                        });
                    }
                    self.expect_word("value")?;
                    match self.next() {
                        Some(Token::Str(s)) => Ok(QueryExpr::HasValue(s)),
                        _ => {
                            self.at -= 1;
                            Err(self.error("expected a quoted string"))
                        }
                    }
                }
                "and" | "some" | "value" => {
                    Err(QueryError::Syntax { position, message: format!("expected a term, found `{w}`") })
                }
                word if UNSUPPORTED.contains(&word) => Err(QueryError::UnknownKeyword { position, word: w }),
                _ => Ok(QueryExpr::Concept(w)),
            },
            Some(Token::Str(_)) => Err(QueryError::Syntax { position, message: "unexpected string literal".into() }),
            Some(Token::Close) => Err(QueryError::Syntax { position, message: "unexpected `)`".into() }),
            None => Err(QueryError::Syntax { position, message: "unexpected end of query".into() }),
        }
    }
}

fn push_flat(items: &mut Vec<QueryExpr>, e: QueryExpr) {
    match e {
        QueryExpr::And(inner) => items.extend(inner),
        other => items.push(other),
    }
}

/// Parses query text.
///
/// ```text
/// expr    := term ('and' term)*
/// term    := Name | 'hasAssociation some' term | 'hasAttribute some' term
///          | 'hasValue value' STRING | '(' expr ')'
/// ```
///
/// Parenthesized conjunctions are flattened into the enclosing one. Error
/// positions are byte offsets into `text`.
pub fn parse_query(text: &str) -> Result<QueryExpr, QueryError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, at: 0, end: text.len(), attribute_depth: 0 };
    let expr = p.expr()?;
    match p.peek() {
        None => Ok(expr),
        Some(Token::Word(w)) if UNSUPPORTED.contains(&w.as_str()) => {
            Err(QueryError::UnknownKeyword { position: p.position(), word: w.clone() })
        }
        Some(_) => Err(p.error("expected `and` or end of query")),
    }
}
