use superber::grassmann::Parity;
use superber::supermatrix::SuperMatrix;
use superber::{random, GrassmannElement, SuperPolynomial, Variable, VariableTable};

#[test]
fn identity_returns_rhs() {
    let g = 2;
    let z = GrassmannElement::zero(g);
    let id = SuperMatrix::identity(1, 1, &z);
    let b = vec![GrassmannElement::from_int(g, 3), GrassmannElement::generator(g, 1).unwrap()];
    assert_eq!(id.cramer_solve(&b).unwrap(), b);
}

#[test]
fn symbolic_one_one_system() {
    let table = VariableTable::new(vec![
        Variable::even("L"),
        Variable::laurent("x11"),
        Variable::odd("x1h"),
        Variable::odd("xh1"),
        Variable::laurent("xhh"),
    ])
    .unwrap();
    let v = |name: &str| SuperPolynomial::var(&table, 0, name).unwrap();
    let zero = SuperPolynomial::zero(&table, 0);
    let m = SuperMatrix::new(
        1,
        1,
        vec![vec![v("x11"), v("x1h")], vec![v("xh1"), v("xhh")]],
        &zero,
    )
    .unwrap();
    let x = m.cramer_solve(&[v("L"), zero.clone()]).unwrap();
    let schur = &v("x11") - &(&(&v("x1h") * &v("xhh").inverse().unwrap()) * &v("xh1"));
    assert_eq!(x[0], &v("L") * &schur.inverse().unwrap());
    let want = -&(&(&v("xh1") * &v("L")) * &(&v("xhh") * &v("x11")).inverse().unwrap());
    assert_eq!(x[1], want);
    assert_eq!(m.apply(&x).unwrap(), vec![v("L"), zero]);
}

#[test]
fn random_systems_have_zero_residual() {
    let mut rng = random::rng(11);
    for (n, m) in [(2, 1), (1, 1), (1, 2), (2, 2)] {
        for _ in 0..5 {
            let g = 4;
            let t = random::even_invertible(&mut rng, n, m, g).unwrap();
            // even vector, odd vector, and rows drawn from either pattern
            for pattern in 0..3 {
                let b: Vec<GrassmannElement> = (0..n + m)
                    .map(|i| {
                        let p = if i < n { Parity::Even } else { Parity::Odd };
                        let flip = pattern == 1 || (pattern == 2 && i % 2 == 1);
                        let p = if flip { p.flip() } else { p };
                        let body = if p == Parity::Even { GrassmannElement::from_int(g, i as i64 + 1) } else { GrassmannElement::zero(g) };
                        &body + &random::soul(&mut rng, g, p)
                    })
                    .collect();
                let x = t.cramer_solve(&b).unwrap();
                assert_eq!(t.apply(&x).unwrap(), b, "{n}|{m} pattern {pattern}");
            }
        }
    }
}
