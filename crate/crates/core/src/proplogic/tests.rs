use super::cnf::*;
use super::*;
use crate::qbf::{Qbf, QuantBlock};

fn atoms(pairs: &[(&str, bool)]) -> Assignment {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[test]
fn eval_basics() {
    let contradiction = Formula::parse("x1 & !x1").unwrap();
    assert!(!eval_formula(&contradiction, &atoms(&[("x1", true)])).unwrap());
    assert!(!eval_formula(&contradiction, &atoms(&[("x1", false)])).unwrap());

    let iff = Formula::parse("x1 <-> x2").unwrap();
    assert!(eval_formula(&iff, &atoms(&[("x1", true), ("x2", true)])).unwrap());

    let clause = Formula::parse("x1 | x2 | x3").unwrap();
    assert!(eval_formula(&clause, &atoms(&[("x1", false), ("x2", false), ("x3", true)])).unwrap());
}

#[test]
fn eval_reports_missing_atoms() {
    let f = Formula::parse("x1 & x2").unwrap();
    assert_eq!(
        eval_formula(&f, &atoms(&[("x1", true)])),
        Err(FormulaError::MissingAtom("x2".to_string()))
    );
}

#[test]
fn brute_sat_returns_lexicographic_first() {
    assert_eq!(brute_sat(&Formula::True).unwrap(), Some(Assignment::new()));
    assert_eq!(brute_sat(&Formula::parse("x1 & !x1").unwrap()).unwrap(), None);
    // first satisfying assignment in all-false-first order
    let f = Formula::parse("x1 <-> !x2").unwrap();
    assert_eq!(
        brute_sat(&f).unwrap(),
        Some(atoms(&[("x1", false), ("x2", true)]))
    );
}

#[test]
fn brute_sat_cap() {
    let wide = Formula::and((0..25).map(|i| Formula::atom(format!("a{i}"))).collect());
    assert!(matches!(brute_sat(&wide), Err(FormulaError::CapExceeded { .. })));
}

#[test]
fn qbf_brute_valid_anchors() {
    let valid = Qbf::new(
        vec![QuantBlock::forall(vec!["x1".into()]), QuantBlock::exists(vec!["y1".into()])],
        Formula::parse("x1 <-> y1").unwrap(),
    )
    .unwrap();
    assert!(qbf_brute_valid(&valid).unwrap());

    // four-branch expansion flips the verdict when the prefix swaps
    let invalid = Qbf::new(
        vec![QuantBlock::exists(vec!["x1".into()]), QuantBlock::forall(vec!["y1".into()])],
        Formula::parse("x1 <-> y1").unwrap(),
    )
    .unwrap();
    assert!(!qbf_brute_valid(&invalid).unwrap());

    let trivial = Qbf::new(vec![], Formula::True).unwrap();
    assert!(qbf_brute_valid(&trivial).unwrap());
}

#[test]
fn qbf_expansion_matches_definition_on_small_formulas() {
    // forall X. E is the conjunction over assignments, exists the disjunction
    let matrix = Formula::parse("x1 & (x2 | x3)").unwrap();
    let all = Qbf::new(
        vec![QuantBlock::forall(vec!["x1".into(), "x2".into(), "x3".into()])],
        matrix.clone(),
    )
    .unwrap();
    let any = Qbf::new(
        vec![QuantBlock::exists(vec!["x1".into(), "x2".into(), "x3".into()])],
        matrix.clone(),
    )
    .unwrap();
    let names = ["x1", "x2", "x3"];
    let mut conj = true;
    let mut disj = false;
    for word in 0u8..8 {
        let a = atoms(&[
            (names[0], word & 4 != 0),
            (names[1], word & 2 != 0),
            (names[2], word & 1 != 0),
        ]);
        let value = eval_formula(&matrix, &a).unwrap();
        conj &= value;
        disj |= value;
    }
    assert_eq!(qbf_brute_valid(&all).unwrap(), conj);
    assert_eq!(qbf_brute_valid(&any).unwrap(), disj);
}

#[test]
fn parser_precedence_and_associativity() {
    let f = Formula::parse("!a & b | c -> d <-> e").unwrap();
    // (( (!a & b) | c ) -> d) <-> e
    let expected = Formula::iff(
        Formula::implies(
            Formula::or(vec![
                Formula::and(vec![Formula::not(Formula::atom("a")), Formula::atom("b")]),
                Formula::atom("c"),
            ]),
            Formula::atom("d"),
        ),
        Formula::atom("e"),
    );
    assert_eq!(f, expected);

    // arrows associate to the right
    let chain = Formula::parse("a -> b -> c").unwrap();
    assert_eq!(
        chain,
        Formula::implies(Formula::atom("a"), Formula::implies(Formula::atom("b"), Formula::atom("c")))
    );
}

#[test]
fn display_round_trips() {
    for text in [
        "x1 & !x1",
        "(a | b) & c",
        "a -> b -> c",
        "!(a <-> b)",
        "true | false",
        "a & b & c | d",
    ] {
        let f = Formula::parse(text).unwrap();
        let rendered = f.to_string();
        assert_eq!(Formula::parse(&rendered).unwrap(), f, "through `{rendered}`");
    }
}

// ---------------------------------------------------------------------------
// 3CNF encoding
// ---------------------------------------------------------------------------

#[test]
fn literal_layout_anchor() {
    // r=2, c=1: index bit then sign bit, sign 1 = positive; the clause
    // (x1 | x1 | x1) is 010101
    let enc = Cnf3Encoding::new(2, 1);
    assert_eq!(enc.total_bits(), 6);
    let lit = Literal { var: 0, positive: true };
    let cnf = Cnf3 { num_vars: 2, clauses: vec![[lit, lit, lit]] };
    let bits = enc.encode(&cnf).unwrap();
    let rendered: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
    assert_eq!(rendered, "010101");
    assert_eq!(enc.decode(&bits).unwrap(), cnf);
}

#[test]
fn all_zero_bits_decode_to_negated_first_variable() {
    // decode oracle applied to the all-zero string: index 0, sign 0
    let enc = Cnf3Encoding::new(2, 1);
    let cnf = enc.decode(&vec![false; 6]).unwrap();
    let lit = Literal { var: 0, positive: false };
    assert_eq!(cnf, Cnf3 { num_vars: 2, clauses: vec![[lit, lit, lit]] });
}

#[test]
fn decode_encode_identity_exhaustive_small() {
    // every bit string decodes, and encoding a decoded formula restores
    // the canonical bit string whenever indices were in range
    for (r, c) in [(1usize, 1usize), (2, 1), (2, 2), (3, 1)] {
        let enc = Cnf3Encoding::new(r, c);
        let m = enc.total_bits();
        if m > 18 {
            continue;
        }
        for word in 0u128..1 << m {
            let bits = enc.formula_bits(word).unwrap();
            let cnf = enc.decode(&bits).unwrap();
            let re = enc.decode(&enc.encode(&cnf).unwrap()).unwrap();
            assert_eq!(re, cnf, "({r},{c}) word {word}");
        }
    }
}

#[test]
fn wrapped_indices_decode_totally() {
    // r=3 leaves index pattern 3 out of range; it wraps to variable 1
    let enc = Cnf3Encoding::new(3, 1);
    let mut bits = vec![false; enc.total_bits()];
    bits[0] = true;
    bits[1] = true; // index bits 11 = 3 -> wraps to var 0
    bits[2] = true; // positive
    let cnf = enc.decode(&bits).unwrap();
    assert_eq!(cnf.clauses[0][0], Literal { var: 0, positive: true });
}

#[test]
fn eval_circuit_matches_formula_evaluation() {
    let enc = Cnf3Encoding::new(2, 1);
    let circuit = cnf_eval_circuit(&enc);
    assert_eq!(circuit.num_inputs(), enc.total_bits() + 2);
    assert_eq!(circuit.num_outputs(), 1);

    // the anchor pair: F = (x1 | x1 | x1) under x1=1 and x1=0
    let lit = Literal { var: 0, positive: true };
    let cnf = Cnf3 { num_vars: 2, clauses: vec![[lit, lit, lit]] };
    let formula_bits = enc.encode(&cnf).unwrap();
    for (x1, expected) in [(true, true), (false, false)] {
        let mut input = formula_bits.clone();
        input.push(x1);
        input.push(false);
        assert_eq!(circuit.evaluate(&input).unwrap()[0], expected);
    }
}

#[test]
fn eval_circuit_agrees_exhaustively() {
    for (r, c) in [(2usize, 1usize), (2, 2)] {
        assert!(cnf_circuit_agrees(&Cnf3Encoding::new(r, c)).unwrap(), "({r},{c})");
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    fn arb_literal(r: usize) -> impl Strategy<Value = Literal> {
        (0..r, any::<bool>()).prop_map(|(var, positive)| Literal { var, positive })
    }

    fn arb_cnf(r: usize, c: usize) -> impl Strategy<Value = Cnf3> {
        proptest::collection::vec(
            (arb_literal(r), arb_literal(r), arb_literal(r)).prop_map(|(a, b, d)| [a, b, d]),
            c,
        )
        .prop_map(move |clauses| Cnf3 { num_vars: r, clauses })
    }

    proptest! {
        #[test]
        fn encode_decode_round_trip(cnf in (1usize..4, 1usize..3).prop_flat_map(|(r, c)| arb_cnf(r, c))) {
            let enc = Cnf3Encoding::new(cnf.num_vars, cnf.clauses.len());
            let bits = enc.encode(&cnf).unwrap();
            prop_assert_eq!(bits.len(), enc.total_bits());
            prop_assert_eq!(enc.decode(&bits).unwrap(), cnf);
        }

        #[test]
        fn formula_view_matches_direct_eval(
            cnf in arb_cnf(3, 2),
            model in proptest::collection::vec(any::<bool>(), 3),
        ) {
            let formula = cnf.to_formula();
            let assignment = model_assignment(&model);
            prop_assert_eq!(
                eval_formula(&formula, &assignment).unwrap(),
                cnf.eval(&model).unwrap()
            );
        }
    }
}
