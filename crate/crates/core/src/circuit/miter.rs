use crate::error::{Error, Result};

use super::{Circuit, CircuitBuilder, GateKind};

/// How per-output difference signals are combined in a multi-output miter.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Reduction {
    /// Fires when any output pair differs (plain equivalence).
    Or,
    /// Fires only when every output pair differs.
    And,
}

/// Copies `c` into `b`, prefixing its gate names, and returns the signal of
/// its output.
fn embed(b: &mut CircuitBuilder, c: &Circuit, prefix: &str, inputs: &[usize]) -> Result<usize> {
    let mut map = vec![usize::MAX; c.num_signals()];
    map[..c.num_inputs()].copy_from_slice(inputs);
    for g in c.gates() {
        let fanins: Vec<usize> = g.fanins.iter().map(|&s| map[s]).collect();
        map[g.out] = b.gate(format!("{prefix}{}", c.signal_name(g.out)), g.kind, &fanins)?;
    }
    Ok(map[c.output_signal()])
}

/// Single-output miter `z = XOR(z1, z2)`; it is constant 0 iff `m1` and `m2`
/// compute the same function. Gate names get `m1.`/`m2.` prefixes.
pub fn build_miter(m1: &Circuit, m2: &Circuit) -> Result<Circuit> {
    build_multi_miter(&[(m1.clone(), m2.clone())], Reduction::Or)
}

/// Miter over several output pairs. Each pair `(a, b)` is a single-output
/// cone of the two compared designs over the same inputs; the pairwise XORs
/// are reduced with `reduction`.
pub fn build_multi_miter(pairs: &[(Circuit, Circuit)], reduction: Reduction) -> Result<Circuit> {
    let (first, _) = pairs
        .first()
        .ok_or_else(|| Error::InvalidCircuit("miter needs at least one pair".into()))?;
    let names = first.input_names();
    for (a, b) in pairs {
        if a.input_names() != names || b.input_names() != names {
            return Err(Error::InputMismatch);
        }
    }
    let label = if pairs.len() == 1 {
        format!("miter_{}_{}", pairs[0].0.name(), pairs[0].1.name())
    } else {
        format!("miter_{}", pairs.len())
    };
    let mut b = CircuitBuilder::new(label);
    let inputs: Vec<usize> = names.iter().map(|n| b.input(n.clone())).collect::<Result<_>>()?;
    let mut diffs = Vec::new();
    for (k, (l, r)) in pairs.iter().enumerate() {
        let (pl, pr, dn) = if pairs.len() == 1 {
            ("m1.".to_string(), "m2.".to_string(), "z".to_string())
        } else {
            (format!("m1.{k}."), format!("m2.{k}."), format!("d{k}"))
        };
        let zl = embed(&mut b, l, &pl, &inputs)?;
        let zr = embed(&mut b, r, &pr, &inputs)?;
        diffs.push(b.gate(dn, GateKind::Xor, &[zl, zr])?);
    }
    let out = if diffs.len() == 1 {
        diffs[0]
    } else {
        let kind = match reduction {
            Reduction::Or => GateKind::Or,
            Reduction::And => GateKind::And,
        };
        b.gate("z", kind, &diffs)?
    };
    b.build(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_netlist;
    use crate::cnf::Bits;

    fn all_zero(n: &Circuit) -> bool {
        (0..1u64 << n.num_inputs()).all(|k| !n.eval(&Bits::from_index(n.num_inputs(), k)))
    }

    #[test]
    fn distributivity_miter_matches_reference_shape() {
        let m1 = parse_netlist("INPUT x1\nINPUT x2\nINPUT x3\ny1 = OR(x1, x2)\ny2 = AND(y1, x3)\nOUTPUT y2\n").unwrap();
        let m2 = parse_netlist(
            "INPUT x1\nINPUT x2\nINPUT x3\ny3 = AND(x1, x3)\ny4 = AND(x2, x3)\ny5 = OR(y3, y4)\nOUTPUT y5\n",
        )
        .unwrap();
        let n = build_miter(&m1, &m2).unwrap();
        assert_eq!(n.num_gates(), 6);
        let kinds: Vec<GateKind> = n.gates().iter().map(|g| g.kind).collect();
        use GateKind::*;
        assert_eq!(kinds, [Or, And, And, And, Or, Xor]);
        assert!(all_zero(&n));
    }

    #[test]
    fn inequivalent_pair() {
        let a = parse_netlist("INPUT x1\nz = BUF(x1)\nOUTPUT z\n").unwrap();
        let b = parse_netlist("INPUT x1\nz = NOT(x1)\nOUTPUT z\n").unwrap();
        let n = build_miter(&a, &b).unwrap();
        assert!(n.eval(&"0".parse().unwrap()));
        assert!(n.eval(&"1".parse().unwrap()));
        assert!(all_zero(&build_miter(&a, &a).unwrap()));
    }

    #[test]
    fn input_mismatch() {
        let a = parse_netlist("INPUT x1\nz = BUF(x1)\nOUTPUT z\n").unwrap();
        let b = parse_netlist("INPUT x2\nz = BUF(x2)\nOUTPUT z\n").unwrap();
        assert!(matches!(build_miter(&a, &b), Err(Error::InputMismatch)));
    }

    #[test]
    fn and_reduction_requires_all_outputs_to_differ() {
        let id = parse_netlist("INPUT a\nINPUT b\nz = BUF(a)\nOUTPUT z\n").unwrap();
        let inv = parse_netlist("INPUT a\nINPUT b\nz = NOT(a)\nOUTPUT z\n").unwrap();
        let idb = parse_netlist("INPUT a\nINPUT b\nz = BUF(b)\nOUTPUT z\n").unwrap();
        let pairs = [(id.clone(), inv), (idb.clone(), idb)];
        assert!(all_zero(&build_multi_miter(&pairs, Reduction::And).unwrap()));
        assert!(!all_zero(&build_multi_miter(&pairs, Reduction::Or).unwrap()));
    }
}
