use std::collections::HashMap;

use super::ast::{parse_error, GateDef, Operand, Program, Span, Statement, StmtKind};
use super::qelib1::builtin_defs;
use crate::error::{Error, Result};
use crate::gates::{Circuit, GateKind, GateOp};

/// Lowers a parsed program into a flat [`Circuit`] of catalog gates.
///
/// Registers are concatenated in declaration order, register-wide operands
/// are broadcast, and user and library gate definitions are inlined.
/// Measurements must all come after the last gate.
pub fn lower(program: &Program) -> Result<Circuit> {
    let mut l = Lowerer::default();
    for stmt in &program.statements {
        l.statement(stmt)?;
    }
    if l.n_qubits == 0 {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            message: "program declares no qubits".into(),
        });
    }
    Ok(Circuit {
        n_qubits: l.n_qubits,
        ops: l.ops,
        creg_size: l.n_clbits,
    })
}

#[derive(Debug, Clone)]
struct Register {
    offset: usize,
    size: usize,
}

#[derive(Default)]
struct Lowerer {
    qregs: HashMap<String, Register>,
    cregs: HashMap<String, Register>,
    defs: HashMap<String, GateDef>,
    n_qubits: usize,
    n_clbits: usize,
    ops: Vec<GateOp>,
    measured: bool,
}

fn resolve(regs: &HashMap<String, Register>, op: &Operand, span: Span, what: &str) -> Result<Vec<usize>> {
    let reg = regs
        .get(&op.name)
        .ok_or_else(|| parse_error(span, format!("unknown {what} register `{}`", op.name)))?;
    match op.index {
        Some(i) if i >= reg.size => Err(parse_error(
            span,
            format!("index {i} out of range for `{}[{}]`", op.name, reg.size),
        )),
        Some(i) => Ok(vec![reg.offset + i]),
        None => Ok((reg.offset..reg.offset + reg.size).collect()),
    }
}

/// Expands register-wide operands into one operand list per broadcast step.
fn broadcast(lists: &[Vec<usize>], whole: &[bool], span: Span) -> Result<Vec<Vec<usize>>> {
    let mut width = None;
    for (list, &w) in lists.iter().zip(whole) {
        if w {
            match width {
                None => width = Some(list.len()),
                Some(n) if n != list.len() => {
                    return Err(parse_error(span, "registers in a broadcast have different sizes"))
                }
                _ => {}
            }
        }
    }
    let steps = width.unwrap_or(1);
    Ok((0..steps)
        .map(|i| {
            lists
                .iter()
                .zip(whole)
                .map(|(list, &w)| if w { list[i] } else { list[0] })
                .collect()
        })
        .collect())
}

impl Lowerer {
    fn statement(&mut self, stmt: &Statement) -> Result<()> {
        let span = stmt.span;
        match &stmt.kind {
            StmtKind::Include(_) => {}
            StmtKind::QReg { name, size } => {
                if self.qregs.contains_key(name) || self.cregs.contains_key(name) {
                    return Err(parse_error(span, format!("register `{name}` already declared")));
                }
                self.qregs.insert(name.clone(), Register { offset: self.n_qubits, size: *size });
                self.n_qubits += size;
            }
            StmtKind::CReg { name, size } => {
                if self.qregs.contains_key(name) || self.cregs.contains_key(name) {
                    return Err(parse_error(span, format!("register `{name}` already declared")));
                }
                self.cregs.insert(name.clone(), Register { offset: self.n_clbits, size: *size });
                self.n_clbits += size;
            }
            StmtKind::GateDef(def) => {
                if self.defs.contains_key(&def.name) || GateKind::from_name(&def.name).is_some() {
                    return Err(parse_error(span, format!("gate `{}` already defined", def.name)));
                }
                self.defs.insert(def.name.clone(), def.clone());
            }
            StmtKind::Barrier(args) => {
                let mut qubits = Vec::new();
                for a in args {
                    for q in resolve(&self.qregs, a, span, "quantum")? {
                        if !qubits.contains(&q) {
                            qubits.push(q);
                        }
                    }
                }
                self.ops.push(GateOp::new(GateKind::Barrier, &qubits, &[]));
            }
            StmtKind::Measure { qubit, clbit } => {
                let qs = resolve(&self.qregs, qubit, span, "quantum")?;
                let cs = resolve(&self.cregs, clbit, span, "classical")?;
                if qs.len() != cs.len() {
                    return Err(parse_error(span, "measure operands have different sizes"));
                }
                for (q, c) in qs.into_iter().zip(cs) {
                    self.ops.push(GateOp::measure(q, c));
                }
                self.measured = true;
            }
            StmtKind::Gate(call) => {
                if self.measured {
                    return Err(Error::UnsupportedFeature {
                        construct: "non-terminal measure".into(),
                        line: span.line,
                        col: span.col,
                    });
                }
                let params = call
                    .params
                    .iter()
                    .map(|e| e.eval_const().map_err(|m| parse_error(span, m)))
                    .collect::<Result<Vec<f64>>>()?;
                let lists = call
                    .args
                    .iter()
                    .map(|a| resolve(&self.qregs, a, span, "quantum"))
                    .collect::<Result<Vec<_>>>()?;
                let whole: Vec<bool> = call.args.iter().map(|a| a.index.is_none()).collect();
                let mut stack = Vec::new();
                for qubits in broadcast(&lists, &whole, span)? {
                    self.expand(&call.name, &params, &qubits, span, &mut stack)?;
                }
            }
        }
        Ok(())
    }

    fn expand(&mut self, name: &str, params: &[f64], qubits: &[usize], span: Span, stack: &mut Vec<String>) -> Result<()> {
        let name = match name {
            "U" => "u3",
            "CX" => "cx",
            other => other,
        };
        if let Some(kind) = GateKind::from_name(name).filter(|k| k.is_unitary()) {
            let op = GateOp::new(kind, qubits, params);
            op.validate(self.n_qubits).map_err(|e| parse_error(span, e.to_string()))?;
            self.ops.push(op);
            return Ok(());
        }
        let def = match self.defs.get(name).or_else(|| builtin_defs().get(name)) {
            Some(def) => def.clone(),
            None => return Err(Error::UnsupportedGate(name.to_string())),
        };
        if def.params.len() != params.len() || def.qubits.len() != qubits.len() {
            return Err(parse_error(
                span,
                format!(
                    "gate `{name}` takes {} parameters and {} qubits, got {} and {}",
                    def.params.len(),
                    def.qubits.len(),
                    params.len(),
                    qubits.len()
                ),
            ));
        }
        if stack.iter().any(|s| s == name) {
            return Err(parse_error(span, format!("recursive definition of gate `{name}`")));
        }
        stack.push(name.to_string());
        let env: HashMap<&str, f64> = def.params.iter().map(String::as_str).zip(params.iter().copied()).collect();
        let lookup = |p: &str| env.get(p).copied();
        let qmap: HashMap<&str, usize> = def.qubits.iter().map(String::as_str).zip(qubits.iter().copied()).collect();
        for stmt in &def.body {
            match &stmt.kind {
                StmtKind::Gate(call) => {
                    let vals = call
                        .params
                        .iter()
                        .map(|e| e.eval(&lookup).map_err(|m| parse_error(span, m)))
                        .collect::<Result<Vec<f64>>>()?;
                    let qs: Vec<usize> = call.args.iter().map(|a| qmap[a.name.as_str()]).collect();
                    self.expand(&call.name, &vals, &qs, span, stack)?;
                }
                StmtKind::Barrier(args) => {
                    let qs: Vec<usize> = args.iter().map(|a| qmap[a.name.as_str()]).collect();
                    self.ops.push(GateOp::new(GateKind::Barrier, &qs, &[]));
                }
                _ => unreachable!("parser only admits gate calls and barriers in bodies"),
            }
        }
        stack.pop();
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qasm::load;

    fn kinds(c: &Circuit) -> Vec<&'static str> {
        c.ops.iter().map(|op| op.kind.name()).collect()
    }

    #[test]
    fn ghz_style_file() {
        let c = load(
            "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[4];\ncreg c[4];\n\
             h q[0];\ncx q[0],q[1];\ncx q[1],q[2];\ncx q[2],q[3];\n",
        )
        .unwrap();
        assert_eq!(c.n_qubits, 4);
        assert_eq!(c.creg_size, 4);
        assert_eq!(c.ops.len(), 4);
    }

    #[test]
    fn broadcast_over_register() {
        let c = load("qreg q[3]; h q;").unwrap();
        assert_eq!(kinds(&c), vec!["h", "h", "h"]);
        let qs: Vec<usize> = c.ops.iter().map(|op| op.qubits[0]).collect();
        assert_eq!(qs, vec![0, 1, 2]);
        let c = load("qreg a[2]; qreg b[2]; cx a,b; cx a[0],b;").unwrap();
        let pairs: Vec<Vec<usize>> = c.ops.iter().map(|op| op.qubits.clone()).collect();
        assert_eq!(pairs, vec![vec![0, 2], vec![1, 3], vec![0, 2], vec![0, 3]]);
        assert!(load("qreg a[2]; qreg b[3]; cx a,b;").is_err());
    }

    #[test]
    fn user_macro_inlined() {
        let c = load(
            "qreg q[3];\ngate majority a,b,c { cx c,b; cx c,a; ccx a,b,c; }\nmajority q[0],q[1],q[2];",
        )
        .unwrap();
        assert_eq!(kinds(&c), vec!["cx", "cx", "ccx"]);
        assert_eq!(c.ops[0].qubits, vec![2, 1]);
        assert_eq!(c.ops[1].qubits, vec![2, 0]);
        assert_eq!(c.ops[2].qubits, vec![0, 1, 2]);
    }

    #[test]
    fn nested_params() {
        let c = load("qreg q[2]; gate g(t) a,b { crz(2*t) a,b; } g(pi/4) q[1],q[0];").unwrap();
        assert_eq!(kinds(&c), vec!["rz", "cx", "rz", "cx"]);
        assert!((c.ops[0].params[0] - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!((c.ops[2].params[0] + std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert_eq!(c.ops[1].qubits, vec![1, 0]);
    }

    #[test]
    fn uppercase_builtins() {
        let c = load("qreg q[2]; U(0.1,0.2,0.3) q[0]; CX q[0],q[1];").unwrap();
        assert_eq!(kinds(&c), vec!["u3", "cx"]);
    }

    #[test]
    fn registers_concatenate() {
        let c = load("qreg a[2]; qreg b[1]; creg c[2]; creg d[1]; x b[0]; measure a[1] -> d[0];").unwrap();
        assert_eq!(c.n_qubits, 3);
        assert_eq!(c.ops[0].qubits, vec![2]);
        assert_eq!(c.ops[1].clbits, vec![2]);
    }

    #[test]
    fn measure_must_be_terminal() {
        let err = load("qreg q[1]; creg c[1]; measure q -> c;\nx q[0];").unwrap_err();
        assert_eq!(
            err,
            Error::UnsupportedFeature { construct: "non-terminal measure".into(), line: 2, col: 1 }
        );
        assert!(load("qreg q[2]; creg c[2]; h q[0]; measure q -> c; barrier q;").is_ok());
    }

    #[test]
    fn unknown_gate() {
        assert_eq!(load("qreg q[1]; foo q[0];"), Err(Error::UnsupportedGate("foo".into())));
        assert_eq!(load("qreg q[4]; c3x q[0],q[1],q[2],q[3];"), Err(Error::UnsupportedGate("c3x".into())));
    }

    #[test]
    fn resolution_errors() {
        assert!(matches!(load("qreg q[2]; h q[2];"), Err(Error::Parse { .. })));
        assert!(matches!(load("qreg q[2]; h r[0];"), Err(Error::Parse { .. })));
        assert!(matches!(load("qreg q[2]; rx q[0];"), Err(Error::Parse { .. })));
        assert!(matches!(load("qreg q[2]; cx q[0],q[0];"), Err(Error::Parse { .. })));
        assert!(matches!(load("qreg q[2]; qreg q[1];"), Err(Error::Parse { .. })));
        assert!(matches!(load("creg c[2];"), Err(Error::Parse { .. })));
        assert!(matches!(load("gate h a { x a; }"), Err(Error::Parse { .. })));
    }

    #[test]
    fn mutual_recursion_detected() {
        // b is undefined when a is declared, then defined in terms of a.
        let err = load("qreg q[1]; gate a x { b x; } gate b x { a x; } a q[0];").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err:?}");
    }

    #[test]
    fn deterministic_lowering() {
        let src = "qreg q[3]; h q; cu1(pi/8) q[0],q[2]; cswap q[0],q[1],q[2];";
        assert_eq!(load(src).unwrap(), load(src).unwrap());
        assert_eq!(load(src).unwrap().ops.len(), 3 + 5 + 3);
    }
}
