use super::{BinOp, Expr, Func};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at column {column}: expected {expected}, found {found}")]
    Syntax {
        column: usize,
        expected: &'static str,
        found: String,
    },
    #[error("unknown identifier '{name}' at column {column}")]
    UnknownIdentifier { column: usize, name: String },
    #[error("exponent at column {column} must be a constant")]
    NonConstantExponent { column: usize },
    #[error("invalid number '{text}' at column {column}")]
    BadNumber { column: usize, text: String },
}

impl ParseError {
    /// One-based column of the offending token.
    pub fn column(&self) -> usize {
        match self {
            ParseError::Syntax { column, .. }
            | ParseError::UnknownIdentifier { column, .. }
            | ParseError::NonConstantExponent { column }
            | ParseError::BadNumber { column, .. } => *column,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Op(c) => format!("'{c}'"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && matches!(chars[i], 'e' | 'E') {
                let mut j = i + 1;
                if j < chars.len() && matches!(chars[j], '+' | '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let lexeme: String = chars[start..i].iter().collect();
            let value = lexeme.parse::<f64>().map_err(|_| ParseError::BadNumber {
                column,
                text: lexeme.clone(),
            })?;
            out.push((Tok::Num(value), column));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), column));
        } else {
            let tok = match c {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => {
                    return Err(ParseError::Syntax {
                        column,
                        expected: "an expression token",
                        found: format!("'{c}'"),
                    })
                }
            };
            out.push((tok, column));
            i += 1;
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, expected: &'static str) -> ParseError {
        ParseError::Syntax {
            column: self.column(),
            expected,
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(Expr::Unary(Func::Neg, Box::new(self.unary()?)))
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let column = self.column();
        let exponent = self.unary()?;
        if exponent.depends_on_t() {
            return Err(ParseError::NonConstantExponent { column });
        }
        let value = exponent.eval_raw(0.0);
        if !value.is_finite() {
            return Err(ParseError::Syntax {
                column,
                expected: "a finite constant exponent",
                found: exponent.to_string(),
            });
        }
        Ok(Expr::Pow(Box::new(base), value))
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let column = self.column();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "t" => Ok(Expr::Var),
                    "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                    _ => {
                        let func = Func::from_name(&name)
                            .ok_or(ParseError::UnknownIdentifier { column, name })?;
                        self.expect(Tok::LParen, "'(' after function name")?;
                        let arg = self.expr()?;
                        self.expect(Tok::RParen, "')'")?;
                        Ok(Expr::Unary(func, Box::new(arg)))
                    }
                }
            }
            _ => Err(self.error("a number, 't', a function or '('")),
        }
    }
}

/// Parses an infix expression in `t`.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut parser = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let e = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(parser.error("an operator or end of input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pow(e: Expr, p: f64) -> Expr {
        Expr::Pow(Box::new(e), p)
    }

    #[test]
    fn variable_and_shapes() {
        assert_eq!(parse("t").unwrap(), Expr::Var);
        assert_eq!(
            parse("sin(t)^2").unwrap(),
            pow(Expr::Unary(Func::Sin, Box::new(Expr::Var)), 2.0)
        );
    }

    #[test]
    fn precedence_and_associativity() {
        // unary minus binds looser than ^
        assert_eq!(
            parse("-t^2").unwrap(),
            Expr::Unary(Func::Neg, Box::new(pow(Expr::Var, 2.0)))
        );
        // ^ is right-associative: 2^3^2 = 2^9
        assert_eq!(parse("2^3^2").unwrap(), pow(Expr::Const(2.0), 9.0));
        assert_eq!(parse("8-3-2").unwrap().eval(0.0).unwrap(), 3.0);
        assert_eq!(parse("8/4/2").unwrap().eval(0.0).unwrap(), 1.0);
        assert_eq!(parse("1+2*3").unwrap().eval(0.0).unwrap(), 7.0);
        assert_eq!(parse("t^-2").unwrap(), pow(Expr::Var, -2.0));
        assert_eq!(parse("t^(1/2)").unwrap(), pow(Expr::Var, 0.5));
    }

    #[test]
    fn numbers_and_constants() {
        assert_eq!(parse("1e-3").unwrap(), Expr::Const(1e-3));
        assert_eq!(parse("2.5E+2").unwrap(), Expr::Const(250.0));
        assert_eq!(parse(".5").unwrap(), Expr::Const(0.5));
        assert_eq!(parse("pi").unwrap(), Expr::Const(std::f64::consts::PI));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse("sin(t").unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                column: 6,
                expected: "')'",
                found: "end of input".into()
            }
        );
        assert_eq!(parse("1 + * t").unwrap_err().column(), 5);
        assert_eq!(parse("t t").unwrap_err().column(), 3);
        assert!(matches!(
            parse("2 # 3").unwrap_err(),
            ParseError::Syntax { column: 3, .. }
        ));
        assert!(matches!(parse("1..2").unwrap_err(), ParseError::BadNumber { .. }));
    }

    #[test]
    fn unknown_identifiers_and_exponents() {
        assert_eq!(
            parse("1 + cosh(t)").unwrap_err(),
            ParseError::UnknownIdentifier {
                column: 5,
                name: "cosh".into()
            }
        );
        assert_eq!(
            parse("x + 1").unwrap_err(),
            ParseError::UnknownIdentifier {
                column: 1,
                name: "x".into()
            }
        );
        assert_eq!(
            parse("2^t").unwrap_err(),
            ParseError::NonConstantExponent { column: 3 }
        );
    }
}
