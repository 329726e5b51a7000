use std::sync::Arc;

use super::{BoolPoly, Monomial, PolyError, Result, VariableContext};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Zero,
    One,
    Plus,
    Star,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
        } else if c == '+' {
            tokens.push((start, Token::Plus));
            i += 1;
        } else if c == '*' {
            tokens.push((start, Token::Star));
            i += 1;
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            let tok = match lit.as_str() {
                "0" => Token::Zero,
                "1" => Token::One,
                _ => {
                    return Err(PolyError::SyntaxError {
                        position: start,
                        message: format!("literal `{lit}` is not 0 or 1"),
                    })
                }
            };
            tokens.push((start, tok));
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            tokens.push((start, Token::Ident(chars[start..i].iter().collect())));
        } else {
            return Err(PolyError::SyntaxError {
                position: start,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(tokens)
}

/// Splits a juxtaposed name such as `x1x2` into context variables, preferring
/// longer names first.
fn segment(word: &str, ctx: &VariableContext) -> Option<Monomial> {
    if word.is_empty() {
        return Some(Monomial::ONE);
    }
    let mut names: Vec<(usize, &str)> = ctx.names().iter().map(String::as_str).enumerate().collect();
    names.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(&b.0)));
    for (idx, name) in names {
        if let Some(rest) = word.strip_prefix(name) {
            if let Some(m) = segment(rest, ctx) {
                return Some(m.mul(Monomial::var(idx)));
            }
        }
    }
    None
}

fn resolve(word: &str, position: usize, ctx: &VariableContext) -> Result<Monomial> {
    if let Some(idx) = ctx.index_of(word) {
        return Ok(Monomial::var(idx));
    }
    segment(word, ctx).ok_or_else(|| PolyError::UnknownVariable {
        name: word.to_string(),
        position,
    })
}

/// Parses a sum (`+`) of products (`*`) of variable names and the literals
/// `0` and `1` into algebraic normal form. A product whose name is not in the
/// context but is a concatenation of context names (`x1x2`) is accepted.
pub fn parse_poly(text: &str, ctx: &Arc<VariableContext>) -> Result<BoolPoly> {
    let tokens = tokenize(text)?;
    let end = text.chars().count();
    if tokens.is_empty() {
        return Err(PolyError::SyntaxError {
            position: 0,
            message: "empty polynomial".to_string(),
        });
    }

    let mut poly = BoolPoly::zero(ctx.clone());
    let mut pos = 0;
    loop {
        // product := factor ('*' factor)*
        let mut mono = Some(Monomial::ONE);
        loop {
            let (at, tok) = tokens.get(pos).cloned().ok_or(PolyError::SyntaxError {
                position: end,
                message: "expected a variable or literal".to_string(),
            })?;
            match tok {
                Token::Ident(word) => {
                    let m = resolve(&word, at, ctx)?;
                    mono = mono.map(|acc| acc.mul(m));
                }
                Token::One => {}
                Token::Zero => mono = None,
                Token::Plus | Token::Star => {
                    return Err(PolyError::SyntaxError {
                        position: at,
                        message: "expected a variable or literal".to_string(),
                    })
                }
            }
            pos += 1;
            match tokens.get(pos) {
                Some((_, Token::Star)) => pos += 1,
                _ => break,
            }
        }
        if let Some(m) = mono {
            poly.toggle(m);
        }
        match tokens.get(pos) {
            None => break,
            Some((_, Token::Plus)) => pos += 1,
            Some((at, _)) => {
                return Err(PolyError::SyntaxError {
                    position: *at,
                    message: "expected `+` or `*`".to_string(),
                })
            }
        }
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx2() -> Arc<VariableContext> {
        Arc::new(VariableContext::numbered(2).unwrap())
    }

    #[test]
    fn idempotency_and_cancellation() {
        let ctx = ctx2();
        assert_eq!(parse_poly("x1*x1 + 0", &ctx).unwrap(), BoolPoly::var(ctx.clone(), 0));
        assert!(parse_poly("x1 + x1", &ctx).unwrap().is_zero());
        let f = parse_poly("x1*x2 + x1", &ctx).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.contains(Monomial::from_vars([0, 1])));
        assert!(f.contains(Monomial::var(0)));
    }

    #[test]
    fn juxtaposition_and_whitespace() {
        let ctx = ctx2();
        assert_eq!(parse_poly("x1x2", &ctx).unwrap(), parse_poly("x1 * x2", &ctx).unwrap());
        assert_eq!(parse_poly("  1+x2 ", &ctx).unwrap().len(), 2);
        assert!(parse_poly("x1 * 0 * x2", &ctx).unwrap().is_zero());
    }

    #[test]
    fn errors_carry_positions() {
        let ctx = ctx2();
        assert_eq!(
            parse_poly("x1 + y", &ctx),
            Err(PolyError::UnknownVariable { name: "y".into(), position: 5 })
        );
        assert!(matches!(parse_poly("x1 + ", &ctx), Err(PolyError::SyntaxError { position: 5, .. })));
        assert!(matches!(parse_poly("x1 x2", &ctx), Err(PolyError::SyntaxError { position: 3, .. })));
        assert!(matches!(parse_poly("2", &ctx), Err(PolyError::SyntaxError { position: 0, .. })));
        assert!(matches!(parse_poly("", &ctx), Err(PolyError::SyntaxError { .. })));
        assert!(matches!(parse_poly("x1 - x2", &ctx), Err(PolyError::SyntaxError { position: 3, .. })));
    }
}
