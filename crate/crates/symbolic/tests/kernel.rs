use num_rational::BigRational;
use proptest::prelude::*;
use soliton_symbolic::atom::N_ATOMS;
use soliton_symbolic::poly::{rat, Monomial, ONE_MONOMIAL};
use soliton_symbolic::{eliminate_sqrt, Atom, Poly, RatFn, SymbolicError};

fn p(s: &str) -> Poly {
    s.parse().unwrap()
}

fn rf(s: &str) -> RatFn {
    s.parse().unwrap()
}

#[test]
fn arithmetic_examples() {
    assert!((p("(f1+g1)^2") - p("f1^2+2*f1*g1+g1^2")).is_zero());
    assert_eq!(rf("(f1^2-1)/(f1-1)"), rf("f1+1"));
    assert_eq!(p("1+f1^2+h1^2").len(), 3);
}

#[test]
fn derivation_examples() {
    assert_eq!(p("f1*g1").derive_x().unwrap(), p("f2*g1"));
    assert_eq!(rf("1/(1+f1^2+h1^2)").derive_x().unwrap(), rf("-(2*f1*f2+2*h1*h2)/(1+f1^2+h1^2)^2"));
    assert!(p("f1^2+g1^2").derive_x().unwrap().derive_y().unwrap().is_zero());
    assert_eq!(p("g3*f").derive_y().unwrap(), p("g4*f"));
    assert_eq!(p("f4").derive_x(), Err(SymbolicError::OrderOverflow(Atom::F4)));
    assert_eq!(p("q_1").derive_y(), Err(SymbolicError::OrderOverflow(Atom::QPrime)));
    assert_eq!(p("p^2").derive_x().unwrap(), p("2*p*p_1*f1"));
    assert_eq!(p("x^3+v1*c").derive_x().unwrap(), p("3*x^2"));
}

#[test]
fn substitution_examples() {
    let eq3 = p("(1+g1^2)*f2+(1+f1^2)*g2-2*(1+f1^2+g1^2)*(-v1*f1-v2*g1+v3)");
    let cyl = eq3.substitute_poly(Atom::F1, &Poly::zero());
    assert_eq!(cyl, p("(1+g1^2)*f2+g2-2*(1+g1^2)*(-v2*g1+v3)"));
    let even = p("c2+(c2+2)*f1^2+(c2-2)*h1^4");
    let reduced = even.substitute_power(Atom::H1, 2, &p("m0+m1*f1^2"));
    assert!(!reduced.atoms().contains(&Atom::H1));
    assert_eq!(reduced, p("c2+(c2+2)*f1^2+(c2-2)*(m0+m1*f1^2)^2"));
}

#[test]
fn collect_example() {
    let parts = p("v1*g1*f1^4+g1*f1^2").collect(Atom::F1);
    let expected = [p("0"), p("0"), p("g1"), p("0"), p("v1*g1")];
    assert_eq!(parts, expected);
}

#[test]
fn eliminate_sqrt_examples() {
    assert_eq!(eliminate_sqrt(&rf("1"), &rf("1"), &rf("f1")), rf("1-f1"));
    assert!(eliminate_sqrt(&rf("f1"), &rf("1"), &rf("f1^2")).is_zero());
}

#[test]
fn exact_division() {
    let q = p("1+f1^2+h1^2");
    assert_eq!((p("f1-c") * &q).div_exact(&q).unwrap(), p("f1-c"));
    assert_eq!(p("f1^2+1").div_exact(&p("f1")), Err(SymbolicError::NotExact));
    assert_eq!(p("f1").div_exact(&Poly::zero()), Err(SymbolicError::DivisionByZero));
    assert_eq!(RatFn::new(p("1"), Poly::zero()).unwrap_err(), SymbolicError::DivisionByZero);
}

#[test]
fn content_and_ratio() {
    assert_eq!(p("6*f1+4*g1").content(), rat(2));
    assert_eq!(p("6*f1+4*g1").ratio_to(&p("3*f1+2*g1")), Some(rat(2)));
    assert_eq!(p("6*f1+4*g1").ratio_to(&p("3*f1+g1")), None);
}

#[test]
fn parse_errors() {
    assert!(matches!("f1 +".parse::<Poly>(), Err(SymbolicError::Parse { .. })));
    assert!(matches!("zz".parse::<Poly>(), Err(SymbolicError::Parse { offset: 0, .. })));
    assert!(matches!("(f1".parse::<Poly>(), Err(SymbolicError::Parse { .. })));
    assert!(matches!("1/f1".parse::<Poly>(), Err(SymbolicError::NotPolynomial(_))));
    assert_eq!(p("-f1^2"), -p("f1^2"));
}

const ATOMS: [Atom; 8] = [Atom::F, Atom::F1, Atom::F2, Atom::G, Atom::G1, Atom::H1, Atom::V1, Atom::C];

fn poly_strategy() -> impl Strategy<Value = Poly> {
    let term = (prop::collection::vec(0u16..3, ATOMS.len()), -5i64..=5);
    prop::collection::vec(term, 0..6).prop_map(|terms| {
        Poly::from_terms(terms.into_iter().map(|(exps, c)| {
            let mut m: Monomial = ONE_MONOMIAL;
            for (a, e) in ATOMS.iter().zip(exps) {
                m[a.index()] = e;
            }
            (m, rat(c))
        }))
    })
}

fn nonzero_poly() -> impl Strategy<Value = Poly> {
    poly_strategy().prop_filter("nonzero", |q| !q.is_zero())
}

fn values_strategy() -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec((-20i64..=20, 1i64..=7), N_ATOMS)
        .prop_map(|v| v.into_iter().map(|(n, d)| BigRational::new(n.into(), d.into())).collect())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, max_global_rejects: 100_000, ..ProptestConfig::default() })]

    #[test]
    fn leibniz(a in poly_strategy(), b in poly_strategy()) {
        for derive in [Poly::derive_x, Poly::derive_y] {
            let lhs = derive(&(&a * &b)).unwrap();
            let rhs = derive(&a).unwrap() * &b + &a * derive(&b).unwrap();
            prop_assert!((lhs - rhs).is_zero());
        }
    }

    #[test]
    fn derivations_commute(a in poly_strategy(), b in nonzero_poly()) {
        let xy = a.derive_x().unwrap().derive_y().unwrap();
        let yx = a.derive_y().unwrap().derive_x().unwrap();
        prop_assert_eq!(xy, yx);
        let r = RatFn::new(a, b).unwrap();
        prop_assert_eq!(r.derive_x().unwrap().derive_y().unwrap(), r.derive_y().unwrap().derive_x().unwrap());
    }

    #[test]
    fn separated_sum_has_zero_mixed_derivative(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        let only = |q: &Poly, keep: &[Atom]| {
            let mut out = q.clone();
            for at in ATOMS.iter().filter(|at| !keep.contains(at)) {
                out = out.substitute_poly(*at, &Poly::int(2));
            }
            out
        };
        let f_part = only(&a, &[Atom::F, Atom::F1, Atom::F2, Atom::H1]);
        let g_part = only(&b, &[Atom::G, Atom::G1]);
        let den = only(&c, &[Atom::G1]) + Poly::int(1000);
        let sum = &RatFn::from(f_part) + &RatFn::new(g_part, den).unwrap();
        prop_assert!(sum.derive_x().unwrap().derive_y().unwrap().is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly_strategy(), b in poly_strategy(), r in poly_strategy(), vals in values_strategy()) {
        let ev = |q: &Poly| q.eval(&|at: Atom| vals[at.index()].clone());
        prop_assert_eq!(ev(&(&a + &b)), ev(&a) + ev(&b));
        prop_assert_eq!(ev(&(&a * &b)), ev(&a) * ev(&b));
        let sub = a.substitute_poly(Atom::F1, &r);
        let rv = ev(&r);
        let shifted = a.eval(&|at: Atom| if at == Atom::F1 { rv.clone() } else { vals[at.index()].clone() });
        prop_assert_eq!(ev(&sub), shifted);
    }

    #[test]
    fn rational_substitution_is_a_homomorphism(a in poly_strategy(), b in nonzero_poly(), n in poly_strategy(), d in nonzero_poly(), vals in values_strategy()) {
        let at_vals = |at: Atom| vals[at.index()].clone();
        let (rv_num, rv_den) = (n.eval(&at_vals), d.eval(&at_vals));
        prop_assume!(rv_den != rat(0));
        let repl = RatFn::new(n, d).unwrap();
        let rv = rv_num / rv_den;
        let shifted = |at: Atom| if at == Atom::H1 { rv.clone() } else { vals[at.index()].clone() };
        prop_assume!(b.eval(&shifted) != rat(0));
        let r = RatFn::new(a, b).unwrap();
        let sub = r.substitute(Atom::H1, &repl).unwrap();
        prop_assume!(sub.denom().eval(&at_vals) != rat(0));
        prop_assert_eq!(sub.eval(&at_vals).unwrap(), r.eval(&shifted).unwrap());
    }

    #[test]
    fn display_parses_back(a in poly_strategy()) {
        prop_assert_eq!(a.to_string().parse::<Poly>().unwrap(), a);
    }

    #[test]
    fn exact_division_inverts_multiplication(a in poly_strategy(), b in nonzero_poly()) {
        prop_assert_eq!((&a * &b).div_exact(&b).unwrap(), a);
    }
}
