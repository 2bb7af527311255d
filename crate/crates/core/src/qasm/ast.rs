//! Syntax tree for the supported OpenQASM 2.0 subset, and its printer.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }
}

/// Angle expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Pi,
    /// Formal parameter of an enclosing gate definition.
    Param(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Evaluates with `lookup` resolving formal parameters.
    pub fn eval(&self, lookup: &dyn Fn(&str) -> Option<f64>) -> std::result::Result<f64, String> {
        let v = match self {
            Expr::Num(x) => *x,
            Expr::Pi => std::f64::consts::PI,
            Expr::Param(name) => lookup(name).ok_or_else(|| format!("unknown parameter `{name}`"))?,
            Expr::Neg(e) => -e.eval(lookup)?,
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.eval(lookup)?, b.eval(lookup)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, e) => {
                let x = e.eval(lookup)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Tan => x.tan(),
                    Func::Exp => x.exp(),
                    Func::Ln => x.ln(),
                    Func::Sqrt => x.sqrt(),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("expression `{self}` is not finite"))
        }
    }

    /// Evaluates an expression with no free parameters.
    pub fn eval_const(&self) -> std::result::Result<f64, String> {
        self.eval(&|_| None)
    }
}

/// `name` or `name[index]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operand {
    pub name: String,
    pub index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateCall {
    pub name: String,
    pub params: Vec<Expr>,
    pub args: Vec<Operand>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateDef {
    pub name: String,
    pub params: Vec<String>,
    pub qubits: Vec<String>,
    /// Gate calls and barriers over the formal qubits.
    pub body: Vec<Statement>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    Include(String),
    QReg { name: String, size: usize },
    CReg { name: String, size: usize },
    Gate(GateCall),
    Barrier(Vec<Operand>),
    Measure { qubit: Operand, clbit: Operand },
    GateDef(GateDef),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    pub kind: StmtKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    /// Version from the `OPENQASM x.y;` header, if present.
    pub version: Option<String>,
    pub statements: Vec<Statement>,
}

impl Program {
    /// Statement kinds without source positions, for structural comparison.
    pub fn kinds(&self) -> Vec<&StmtKind> {
        self.statements.iter().map(|s| &s.kind).collect()
    }
}

pub(crate) fn parse_error(span: Span, message: impl Into<String>) -> Error {
    Error::Parse {
        line: span.line,
        col: span.col,
        message: message.into(),
    }
}

pub(crate) type ParseResult<T> = Result<T>;

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) => write!(f, "{x}"),
            Expr::Pi => f.write_str("pi"),
            Expr::Param(p) => f.write_str(p),
            Expr::Neg(e) => write!(f, "-({e})"),
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{}[{i}]", self.name),
            None => f.write_str(&self.name),
        }
    }
}

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for GateCall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.params.is_empty() {
            write!(f, "({})", join(&self.params, ", "))?;
        }
        write!(f, " {};", join(&self.args, ", "))
    }
}

impl fmt::Display for StmtKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StmtKind::Include(path) => write!(f, "include \"{path}\";"),
            StmtKind::QReg { name, size } => write!(f, "qreg {name}[{size}];"),
            StmtKind::CReg { name, size } => write!(f, "creg {name}[{size}];"),
            StmtKind::Gate(call) => write!(f, "{call}"),
            StmtKind::Barrier(args) => write!(f, "barrier {};", join(args, ", ")),
            StmtKind::Measure { qubit, clbit } => write!(f, "measure {qubit} -> {clbit};"),
            StmtKind::GateDef(def) => {
                write!(f, "gate {}", def.name)?;
                if !def.params.is_empty() {
                    write!(f, "({})", def.params.join(", "))?;
                }
                write!(f, " {} {{", def.qubits.join(", "))?;
                for stmt in &def.body {
                    write!(f, " {}", stmt.kind)?;
                }
                f.write_str(" }")
            }
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = &self.version {
            writeln!(f, "OPENQASM {v};")?;
        }
        for stmt in &self.statements {
            writeln!(f, "{}", stmt.kind)?;
        }
        Ok(())
    }
}
