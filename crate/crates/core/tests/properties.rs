use proptest::prelude::*;

use superber::grassmann::ratio;
use superber::supermatrix::SuperMatrix;
use superber::{deltas, json, random, GrassmannElement, Parity, SuperPolynomial, Variable, VariableTable};

const G: u8 = 4;

fn element() -> impl Strategy<Value = GrassmannElement> {
    prop::collection::vec((0u32..(1 << G), -6i64..=6, 1i64..=4), 0..5).prop_map(|terms| {
        let mut e = GrassmannElement::zero(G);
        for (mask, num, den) in terms {
            let gens = GrassmannElement::mask_indices(mask);
            e = &e + &GrassmannElement::from_terms(G, [(gens, ratio(num, den))]).unwrap();
        }
        e
    })
}

fn invertible() -> impl Strategy<Value = GrassmannElement> {
    (element(), 1i64..=5).prop_map(|(e, b)| &(&e - &GrassmannElement::scalar(G, e.body())) + &GrassmannElement::from_int(G, b))
}

proptest! {
    #[test]
    fn grassmann_ring_axioms(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        let (ae, ao) = a.parity_split();
        let (be, _) = b.parity_split();
        prop_assert_eq!(&ae * &b, &b * &ae);
        prop_assert_eq!(&ao * &be, &be * &ao);
    }

    #[test]
    fn odd_elements_anticommute(a in element(), b in element()) {
        let (_, ao) = a.parity_split();
        let (_, bo) = b.parity_split();
        prop_assert_eq!(&ao * &bo, -&(&bo * &ao));
        prop_assert!((&ao * &ao).is_zero());
    }

    #[test]
    fn inverse_is_two_sided(a in invertible()) {
        let inv = a.inv().unwrap();
        prop_assert!((&a * &inv).is_one());
        prop_assert!((&inv * &a).is_one());
    }

    #[test]
    fn grassmann_json_round_trip(a in element()) {
        let v = json::grassmann_to_json(&a);
        prop_assert_eq!(json::grassmann_from_json(&v, G).unwrap(), a);
    }

    #[test]
    fn leibniz_rule_for_left_derivatives(
        e1 in prop::collection::vec(0i32..=2, 4),
        e2 in prop::collection::vec(0i32..=2, 4),
        var in 0usize..4,
    ) {
        let table = VariableTable::new(vec![
            Variable::even("t"),
            Variable::odd("a"),
            Variable::odd("b"),
            Variable::even("s"),
        ]).unwrap();
        let clip = |e: &[i32]| -> Vec<i32> { e.iter().enumerate().map(|(i, &x)| if i == 1 || i == 2 { x.min(1) } else { x }).collect() };
        let f = SuperPolynomial::monomial(&table, clip(&e1), GrassmannElement::one(0)).unwrap();
        let g = SuperPolynomial::monomial(&table, clip(&e2), GrassmannElement::from_int(0, 3)).unwrap();
        let v_odd = table.var(var).parity == Parity::Odd;
        let f_odd = f.parity() == Some(Parity::Odd);
        let left = (&f * &g).lderiv_at(var);
        let second = &f * &g.lderiv_at(var);
        let right = &(&f.lderiv_at(var) * &g) + &(if v_odd && f_odd { -&second } else { second });
        prop_assert_eq!(left, right);
    }

    #[test]
    fn ber_is_multiplicative(seed in any::<u64>(), dims in 0usize..4) {
        let (n, m) = [(1, 1), (2, 1), (1, 2), (2, 2)][dims];
        let mut rng = random::rng(seed);
        let a = random::even_invertible(&mut rng, n, m, 3).unwrap();
        let b = random::even_invertible(&mut rng, n, m, 3).unwrap();
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.ber().unwrap(), &a.ber().unwrap() * &b.ber().unwrap());
        let back = SuperMatrix::new(n, m, json::matrix_to_json(&ab)["entries"].as_array().unwrap().iter().map(|r| {
            r.as_array().unwrap().iter().map(|e| json::grassmann_from_json(e, 3).unwrap()).collect()
        }).collect(), &GrassmannElement::zero(3)).unwrap();
        prop_assert_eq!(back, ab);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn delta_factors_compose(seed in any::<u64>(), dims in 0usize..3) {
        let (n, m) = [(1, 1), (0, 2), (1, 2)][dims];
        let mut rng = random::rng(seed);
        let t1 = random::even_invertible(&mut rng, n, m, 2).unwrap();
        let t2 = random::even_invertible(&mut rng, n, m, 2).unwrap();
        let (f1, _) = deltas::delta_as_ber_basis(&t1).unwrap();
        let (f2, _) = deltas::delta_as_ber_basis(&t2).unwrap();
        let (f12, ber) = deltas::delta_as_ber_basis(&t1.mul(&t2).unwrap()).unwrap();
        prop_assert_eq!(&f12, &(&f1 * &f2));
        prop_assert_eq!(f12, ber);
    }

    #[test]
    fn spectrum_json_round_trip(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let s = random::spectrum(&mut rng, 3, 3, 4).unwrap();
        let back = json::spectrum_from_json(&json::spectrum_to_json(&s)).unwrap();
        prop_assert_eq!(back.x(), s.x());
        prop_assert_eq!(back.y(), s.y());
    }
}

#[test]
fn polynomial_json_round_trip() {
    let f = superber::vzforms::ber_witness(3, 1).unwrap();
    let back = json::form_from_json(&json::form_to_json(&f)).unwrap();
    assert_eq!(back.l, f.l);
}
