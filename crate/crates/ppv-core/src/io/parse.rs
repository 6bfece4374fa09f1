//! Recursive-descent parser for rational expressions in x and the declared
//! parameters, with positioned errors, and exact evaluation into K.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::ratfunc::RatFunc;

/// Expression tree. Pow exponents are integer literals only.
#[derive(Clone, Debug, PartialEq)]
pub enum ExprAst {
    Number(BigRational),
    Var(String),
    Neg(Box<ExprAst>),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at position {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Token::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Token::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Token::Star));
                i += 1;
            }
            '/' => {
                out.push((i, Token::Slash));
                i += 1;
            }
            '^' => {
                out.push((i, Token::Caret));
                i += 1;
            }
            '(' => {
                out.push((i, Token::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Token::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let num: BigInt = text[start..i].parse().expect("digits parse");
                out.push((start, Token::Number(num)));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Token::Ident(text[start..i].to_string())));
            }
            _ => {
                return Err(ParseError {
                    position: i,
                    message: format!("unexpected character '{c}'"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    names: &'a [String],
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(usize, Token)> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<(usize, Token)> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some((_, Token::Plus)) => {
                    self.next();
                    let rhs = self.term()?;
                    acc = ExprAst::Add(Box::new(acc), Box::new(rhs));
                }
                Some((_, Token::Minus)) => {
                    self.next();
                    let rhs = self.term()?;
                    acc = ExprAst::Sub(Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some((_, Token::Star)) => {
                    self.next();
                    let rhs = self.unary()?;
                    acc = ExprAst::Mul(Box::new(acc), Box::new(rhs));
                }
                Some((_, Token::Slash)) => {
                    self.next();
                    let rhs = self.unary()?;
                    acc = ExprAst::Div(Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<ExprAst, ParseError> {
        if let Some((_, Token::Minus)) = self.peek() {
            self.next();
            let inner = self.unary()?;
            return Ok(ExprAst::Neg(Box::new(inner)));
        }
        self.pow()
    }

    fn pow(&mut self) -> Result<ExprAst, ParseError> {
        let base = self.atom()?;
        if let Some((_, Token::Caret)) = self.peek() {
            self.next();
            let pos = self.here();
            // optional sign on the exponent literal
            let mut sign = 1i64;
            if let Some((_, Token::Minus)) = self.peek() {
                self.next();
                sign = -1;
            }
            match self.next() {
                Some((_, Token::Number(n))) => {
                    let e: i64 = match TryInto::<i64>::try_into(n) {
                        Ok(e) => e,
                        Err(_) => {
                            return Err(ParseError {
                                position: pos,
                                message: "exponent too large".to_string(),
                            })
                        }
                    };
                    return Ok(ExprAst::Pow(Box::new(base), sign * e));
                }
                _ => {
                    return Err(ParseError {
                        position: pos,
                        message: "non-integer exponent".to_string(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExprAst, ParseError> {
        let pos = self.here();
        match self.next() {
            Some((_, Token::Number(n))) => Ok(ExprAst::Number(BigRational::from_integer(n))),
            Some((p, Token::Ident(name))) => {
                if name == "x" || self.names.contains(&name) {
                    Ok(ExprAst::Var(name))
                } else {
                    Err(ParseError {
                        position: p,
                        message: format!("unknown identifier '{name}'"),
                    })
                }
            }
            Some((_, Token::LParen)) => {
                let inner = self.expr()?;
                match self.next() {
                    Some((_, Token::RParen)) => Ok(inner),
                    other => Err(ParseError {
                        position: other.map(|(p, _)| p).unwrap_or(self.end),
                        message: "expected ')'".to_string(),
                    }),
                }
            }
            other => Err(ParseError {
                position: other.map(|(p, _)| p).unwrap_or(pos),
                message: "expected a number, identifier or '('".to_string(),
            }),
        }
    }
}

/// Parses an expression over x and the declared parameter names.
pub fn parse_expr(text: &str, params: &[String]) -> Result<ExprAst, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        names: params,
        end: text.len(),
    };
    let e = p.expr()?;
    if let Some((pos, _)) = p.peek() {
        return Err(ParseError {
            position: *pos,
            message: "trailing input".to_string(),
        });
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalError {
    pub message: String,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for EvalError {}

/// Evaluates the tree into a canonical rational function; the parameter
/// index of each name is its position in `params`.
pub fn eval_expr(ast: &ExprAst, params: &[String]) -> Result<RatFunc, EvalError> {
    match ast {
        ExprAst::Number(q) => Ok(RatFunc::scalar(
            crate::algebra::scalar::ParamScalar::from_rational(q.clone()),
        )),
        ExprAst::Var(name) => {
            if name == "x" {
                Ok(RatFunc::x())
            } else {
                let j = params
                    .iter()
                    .position(|p| p == name)
                    .ok_or_else(|| EvalError {
                        message: format!("unknown identifier '{name}'"),
                    })?;
                Ok(RatFunc::param(j))
            }
        }
        ExprAst::Neg(a) => Ok(-&eval_expr(a, params)?),
        ExprAst::Add(a, b) => Ok(&eval_expr(a, params)? + &eval_expr(b, params)?),
        ExprAst::Sub(a, b) => Ok(&eval_expr(a, params)? - &eval_expr(b, params)?),
        ExprAst::Mul(a, b) => Ok(&eval_expr(a, params)? * &eval_expr(b, params)?),
        ExprAst::Div(a, b) => {
            let d = eval_expr(b, params)?;
            eval_expr(a, params)?.checked_div(&d).map_err(|_| EvalError {
                message: "division by the zero rational function".to_string(),
            })
        }
        ExprAst::Pow(a, e) => {
            let base = eval_expr(a, params)?;
            if *e < 0 && base.is_zero() {
                return Err(EvalError {
                    message: "division by the zero rational function".to_string(),
                });
            }
            Ok(base.pow(*e))
        }
    }
}

/// Convenience: parse and evaluate in one step.
pub fn parse_ratfunc(text: &str, params: &[String]) -> Result<RatFunc, String> {
    let ast = parse_expr(text, params).map_err(|e| e.to_string())?;
    eval_expr(&ast, params).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::xpoly::xpoly_int;

    fn params2() -> Vec<String> {
        vec!["t1".to_string(), "t2".to_string()]
    }

    #[test]
    fn worked_example_u_parses() {
        let u = parse_ratfunc("t1/x + (t1-t2)/(x-1)", &params2()).unwrap();
        let t1 = RatFunc::param(0);
        let t2 = RatFunc::param(1);
        let x = RatFunc::x();
        let one = RatFunc::one();
        let expect = &(&t1 / &x) + &(&(&t1 - &t2) / &(&x - &one));
        assert_eq!(u, expect);
    }

    #[test]
    fn power_and_sub() {
        let ast = parse_expr("x^2 - 1", &params2()).unwrap();
        assert_eq!(
            ast,
            ExprAst::Sub(
                Box::new(ExprAst::Pow(Box::new(ExprAst::Var("x".into())), 2)),
                Box::new(ExprAst::Number(num_rational::BigRational::from_integer(
                    1.into()
                )))
            )
        );
    }

    #[test]
    fn non_integer_exponent_is_rejected() {
        let err = parse_expr("x^t1", &params2()).unwrap_err();
        assert!(err.message.contains("non-integer exponent"));
        assert_eq!(err.position, 2);
    }

    #[test]
    fn unknown_identifier_is_positioned() {
        let err = parse_expr("x + y", &params2()).unwrap_err();
        assert_eq!(err.position, 4);
        assert!(err.message.contains("unknown identifier"));
    }

    #[test]
    fn eval_cancels() {
        let f = parse_ratfunc("(x-1)*(x+1)/(x-1)", &params2()).unwrap();
        assert_eq!(f, RatFunc::from_poly(xpoly_int(&[1, 1])));
    }

    #[test]
    fn division_by_zero_function() {
        let err = parse_ratfunc("1/(x-x)", &params2()).unwrap_err();
        assert!(err.contains("division by the zero rational function"));
    }

    #[test]
    fn fraction_literal_via_div() {
        let f = parse_ratfunc("3/4", &params2()).unwrap();
        let expect = RatFunc::scalar(crate::algebra::scalar::ParamScalar::from_rational(
            num_rational::BigRational::new(3.into(), 4.into()),
        ));
        assert_eq!(f, expect);
    }

    #[test]
    fn negative_exponent() {
        let f = parse_ratfunc("x^-2", &params2()).unwrap();
        assert_eq!(
            f,
            RatFunc::new(xpoly_int(&[1]), xpoly_int(&[0, 0, 1])).unwrap()
        );
    }
}
