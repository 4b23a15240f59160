//! Right-to-left token rendering: `f(g(3))` with `g` applied first is
//! rendered `["f<f>", "f<g>", "3"]`.

use crate::error::{Error, Result};
use crate::fnalg::{Expression, FunctionId, Symbol};

pub fn function_token(f: FunctionId) -> String {
    format!("f{}", f.0)
}

pub fn symbol_token(s: Symbol) -> String {
    s.0.to_string()
}

/// Function tokens in reverse application order, then the input symbol.
pub fn render_tokens(expr: &Expression) -> Vec<String> {
    expr.functions
        .iter()
        .rev()
        .map(|&f| function_token(f))
        .chain(std::iter::once(symbol_token(expr.input)))
        .collect()
}

/// Canonical decimal (no sign, no leading zeros).
fn decimal(s: &str) -> Option<u32> {
    let canonical = !s.is_empty()
        && s.bytes().all(|b| b.is_ascii_digit())
        && (s == "0" || !s.starts_with('0'));
    if canonical {
        s.parse().ok()
    } else {
        None
    }
}

enum Token {
    Function(FunctionId),
    Symbol(Symbol),
}

fn classify(tok: &str, num_functions: usize, num_symbols: usize) -> Result<Token> {
    if let Some(rest) = tok.strip_prefix('f') {
        return match decimal(rest) {
            Some(id) if (id as usize) < num_functions => Ok(Token::Function(FunctionId(id))),
            _ => Err(Error::Tokens(format!("unknown function token {tok:?}"))),
        };
    }
    match decimal(tok) {
        Some(s) if (s as usize) < num_symbols => Ok(Token::Symbol(Symbol(s))),
        _ => Err(Error::Tokens(format!("unknown token {tok:?}"))),
    }
}

/// Inverse of [`render_tokens`] over a vocabulary of `num_functions`
/// function tokens and `num_symbols` symbol tokens.
pub fn parse_tokens_with<S: AsRef<str>>(
    tokens: &[S],
    num_functions: usize,
    num_symbols: usize,
) -> Result<Expression> {
    let Some((last, funcs)) = tokens.split_last() else {
        return Err(Error::Tokens("empty token list".into()));
    };
    let input = match classify(last.as_ref(), num_functions, num_symbols)? {
        Token::Symbol(s) => s,
        Token::Function(_) => {
            return Err(Error::Tokens("the last token must be the input symbol".into()))
        }
    };
    if funcs.is_empty() {
        return Err(Error::Tokens("no function tokens before the input symbol".into()));
    }
    let mut functions = Vec::with_capacity(funcs.len());
    for (pos, tok) in funcs.iter().enumerate().rev() {
        match classify(tok.as_ref(), num_functions, num_symbols)? {
            Token::Function(f) => functions.push(f),
            Token::Symbol(_) => {
                return Err(Error::Tokens(format!(
                    "symbol token {:?} at position {pos}; only the final token may be a symbol",
                    tok.as_ref()
                )))
            }
        }
    }
    Ok(Expression::new(input, functions))
}
