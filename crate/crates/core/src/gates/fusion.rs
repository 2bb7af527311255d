use super::Placement;
use crate::scalar::Scalar;

/// Greedy left-to-right fusion of adjacent placements over the same span.
/// The later gate multiplies from the left: `m = m_next * m_acc`.
pub fn fuse_pass<T: Scalar>(placements: Vec<Placement<T>>, enabled: bool) -> Vec<Placement<T>> {
    if !enabled {
        return placements;
    }
    let mut out: Vec<Placement<T>> = Vec::with_capacity(placements.len());
    for p in placements {
        match out.last_mut() {
            Some(acc) if acc.same_span(&p) => {
                acc.m = p.m.matmul(&acc.m).expect("same span implies same dimension");
                acc.label = format!("{}+{}", acc.label, p.label);
                acc.local = None;
            }
            _ => out.push(p),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diaq::DiaqMatrix;
    use crate::gates::{compile, Circuit, GateKind, GateOp};

    fn circuit(n: usize, ops: &[(GateKind, &[usize])]) -> Circuit {
        let mut c = Circuit::new(n);
        for (k, qs) in ops {
            c.push(GateOp::new(*k, qs, &[])).unwrap();
        }
        c
    }

    #[test]
    fn z_twice_fuses_to_identity() {
        let c = circuit(2, &[(GateKind::Z, &[0]), (GateKind::Z, &[0])]);
        let fused = fuse_pass(compile::<f64>(&c, 14).unwrap(), true);
        assert_eq!(fused.len(), 1);
        assert_eq!(fused[0].m, DiaqMatrix::identity(2));
        assert_eq!(fused[0].label, "z+z");
        assert!(fused[0].local.is_none());
    }

    #[test]
    fn disabled_is_identity() {
        let c = circuit(2, &[(GateKind::Z, &[0]), (GateKind::Z, &[0])]);
        let ps = compile::<f64>(&c, 14).unwrap();
        assert_eq!(fuse_pass(ps.clone(), false), ps);
    }

    #[test]
    fn ghz_has_nothing_to_fuse() {
        let c = circuit(
            4,
            &[(GateKind::H, &[0]), (GateKind::Cx, &[0, 1]), (GateKind::Cx, &[1, 2]), (GateKind::Cx, &[2, 3])],
        );
        let ps = compile::<f64>(&c, 14).unwrap();
        assert_eq!(fuse_pass(ps, true).len(), 4);
    }

    #[test]
    fn later_gate_multiplies_from_left() {
        // S then H on one qubit: fused matrix must be H*S, not S*H.
        let c = circuit(1, &[(GateKind::S, &[0]), (GateKind::H, &[0])]);
        let fused = fuse_pass(compile::<f64>(&c, 14).unwrap(), true);
        let ps = compile::<f64>(&c, 14).unwrap();
        let expected = ps[1].m.to_dense().matmul(&ps[0].m.to_dense()).unwrap();
        assert!(fused[0].m.to_dense().max_diff(&expected) < 1e-15);
    }

    #[test]
    fn runs_of_three_fuse_greedily() {
        let c = circuit(
            2,
            &[(GateKind::H, &[1]), (GateKind::T, &[1]), (GateKind::H, &[1]), (GateKind::X, &[0]), (GateKind::Y, &[0])],
        );
        let fused = fuse_pass(compile::<f64>(&c, 14).unwrap(), true);
        let labels: Vec<&str> = fused.iter().map(|p| p.label.as_str()).collect();
        assert_eq!(labels, vec!["h+t+h", "x+y"]);
    }
}
