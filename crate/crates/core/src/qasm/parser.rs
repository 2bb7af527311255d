use super::ast::{parse_error, BinOp, Expr, Func, GateCall, GateDef, Operand, ParseResult, Program, Span, Statement, StmtKind};
use super::lexer::{tokenize, Tok, Token};
use crate::error::Error;

/// Parses OpenQASM 2.0 source into a [`Program`].
pub fn parse(source: &str) -> ParseResult<Program> {
    let tokens = tokenize(source)?;
    Parser { tokens, pos: 0 }.program()
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn span(&self) -> Span {
        let t = &self.tokens[self.pos];
        Span { line: t.line, col: t.col }
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.pos].tok.clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        tok
    }

    fn unexpected(&self, expected: &str) -> Error {
        parse_error(self.span(), format!("expected {expected}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> ParseResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn ident(&mut self) -> ParseResult<String> {
        match self.peek() {
            Tok::Ident(_) => match self.bump() {
                Tok::Ident(s) => Ok(s),
                _ => unreachable!(),
            },
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn int(&mut self) -> ParseResult<usize> {
        match *self.peek() {
            Tok::Int(n) => {
                self.bump();
                usize::try_from(n).map_err(|_| parse_error(self.span(), "integer too large"))
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn is_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    fn program(mut self) -> ParseResult<Program> {
        let mut version = None;
        if self.is_ident("OPENQASM") {
            let span = self.span();
            self.bump();
            let v = match self.bump() {
                Tok::Real(x) => format!("{x:?}"),
                Tok::Int(n) => n.to_string(),
                _ => return Err(parse_error(span, "expected a version number after OPENQASM")),
            };
            if !v.starts_with("2.") && v != "2" {
                return Err(Error::UnsupportedFeature {
                    construct: format!("OPENQASM {v}"),
                    line: span.line,
                    col: span.col,
                });
            }
            self.expect(Tok::Semi, "`;`")?;
            version = Some(v);
        }
        let mut statements = Vec::new();
        while *self.peek() != Tok::Eof {
            statements.push(self.statement()?);
        }
        Ok(Program { version, statements })
    }

    fn statement(&mut self) -> ParseResult<Statement> {
        let span = self.span();
        let word = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.unexpected("a statement")),
        };
        let kind = match word.as_str() {
            "if" | "reset" | "opaque" => {
                return Err(Error::UnsupportedFeature {
                    construct: word,
                    line: span.line,
                    col: span.col,
                })
            }
            "OPENQASM" => return Err(parse_error(span, "OPENQASM header must come first")),
            "include" => {
                self.bump();
                let path = match self.bump() {
                    Tok::Str(s) => s,
                    _ => return Err(parse_error(span, "expected a quoted file name after include")),
                };
                self.expect(Tok::Semi, "`;`")?;
                StmtKind::Include(path)
            }
            "qreg" | "creg" => {
                self.bump();
                let name = self.ident()?;
                self.expect(Tok::LBracket, "`[`")?;
                let size = self.int()?;
                self.expect(Tok::RBracket, "`]`")?;
                self.expect(Tok::Semi, "`;`")?;
                if size == 0 {
                    return Err(parse_error(span, format!("register `{name}` has size 0")));
                }
                if word == "qreg" {
                    StmtKind::QReg { name, size }
                } else {
                    StmtKind::CReg { name, size }
                }
            }
            "gate" => StmtKind::GateDef(self.gate_def()?),
            "barrier" => {
                self.bump();
                let args = self.operands()?;
                self.expect(Tok::Semi, "`;`")?;
                StmtKind::Barrier(args)
            }
            "measure" => {
                self.bump();
                let qubit = self.operand()?;
                self.expect(Tok::Arrow, "`->`")?;
                let clbit = self.operand()?;
                self.expect(Tok::Semi, "`;`")?;
                StmtKind::Measure { qubit, clbit }
            }
            _ => StmtKind::Gate(self.gate_call(&[])?),
        };
        Ok(Statement { kind, span })
    }

    fn gate_def(&mut self) -> ParseResult<GateDef> {
        let span = self.span();
        self.bump();
        let name = self.ident()?;
        let mut params = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            if *self.peek() != Tok::RParen {
                params = self.ident_list()?;
            }
            self.expect(Tok::RParen, "`)`")?;
        }
        let qubits = self.ident_list()?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut body = Vec::new();
        while *self.peek() != Tok::RBrace {
            let s = self.span();
            if *self.peek() == Tok::Eof {
                return Err(parse_error(span, format!("unterminated body of gate `{name}`")));
            }
            let kind = if self.is_ident("barrier") {
                self.bump();
                let args = self.operands()?;
                self.expect(Tok::Semi, "`;`")?;
                StmtKind::Barrier(args)
            } else {
                match self.peek() {
                    Tok::Ident(w) if matches!(w.as_str(), "measure" | "reset" | "if" | "gate" | "opaque" | "qreg" | "creg") => {
                        return Err(parse_error(s, format!("`{w}` is not allowed inside a gate body")))
                    }
                    _ => {}
                }
                let call = self.gate_call(&params)?;
                if call.name == name {
                    return Err(parse_error(s, format!("gate `{name}` refers to itself")));
                }
                StmtKind::Gate(call)
            };
            for arg in body_args(&kind) {
                if arg.index.is_some() || !qubits.contains(&arg.name) {
                    return Err(parse_error(s, format!("`{arg}` is not a qubit argument of gate `{name}`")));
                }
            }
            body.push(Statement { kind, span: s });
        }
        self.bump();
        Ok(GateDef { name, params, qubits, body })
    }

    fn ident_list(&mut self) -> ParseResult<Vec<String>> {
        let mut out = vec![self.ident()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.ident()?);
        }
        Ok(out)
    }

    fn gate_call(&mut self, formals: &[String]) -> ParseResult<GateCall> {
        let name = self.ident()?;
        let mut params = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            if *self.peek() != Tok::RParen {
                params.push(self.expr(formals)?);
                while *self.peek() == Tok::Comma {
                    self.bump();
                    params.push(self.expr(formals)?);
                }
            }
            self.expect(Tok::RParen, "`)`")?;
        }
        let args = self.operands()?;
        self.expect(Tok::Semi, "`;`")?;
        Ok(GateCall { name, params, args })
    }

    fn operands(&mut self) -> ParseResult<Vec<Operand>> {
        let mut out = vec![self.operand()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.operand()?);
        }
        Ok(out)
    }

    fn operand(&mut self) -> ParseResult<Operand> {
        let name = self.ident()?;
        let index = if *self.peek() == Tok::LBracket {
            self.bump();
            let i = self.int()?;
            self.expect(Tok::RBracket, "`]`")?;
            Some(i)
        } else {
            None
        };
        Ok(Operand { name, index })
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self, formals: &[String]) -> ParseResult<Expr> {
        let mut lhs = self.term(formals)?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term(formals)?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self, formals: &[String]) -> ParseResult<Expr> {
        let mut lhs = self.unary(formals)?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary(formals)?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    // unary := '-' unary | power
    fn unary(&mut self, formals: &[String]) -> ParseResult<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary(formals)?)));
        }
        self.power(formals)
    }

    // power := primary ('^' unary)?
    fn power(&mut self, formals: &[String]) -> ParseResult<Expr> {
        let base = self.primary(formals)?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exp = self.unary(formals)?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self, formals: &[String]) -> ParseResult<Expr> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Num(n as f64))
            }
            Tok::Real(x) => {
                self.bump();
                Ok(Expr::Num(x))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr(formals)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                if name == "pi" {
                    return Ok(Expr::Pi);
                }
                if let Some(func) = Func::from_name(&name) {
                    if *self.peek() == Tok::LParen {
                        self.bump();
                        let e = self.expr(formals)?;
                        self.expect(Tok::RParen, "`)`")?;
                        return Ok(Expr::Call(func, Box::new(e)));
                    }
                }
                if formals.contains(&name) {
                    Ok(Expr::Param(name))
                } else {
                    Err(parse_error(span, format!("unknown parameter `{name}`")))
                }
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}

fn body_args(kind: &StmtKind) -> &[Operand] {
    match kind {
        StmtKind::Gate(call) => &call.args,
        StmtKind::Barrier(args) => args,
        _ => &[],
    }
}
