use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::SeedableRng;
use stablecsa::field::{parse_element, FieldError, MultiPoly, RatFunc, RootSet, SpecializationMap, TowerElement, Var, DEFAULT_PRIME};

#[derive(Clone, Debug)]
enum Expr {
    Int(i64),
    I,
    Var(Var),
    Root(u16),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Division by `v + k`, never zero.
    Div(Box<Expr>, Var, i64),
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-3i64..=3).prop_map(Expr::Int),
        Just(Expr::I),
        prop::sample::select(vec![Var::X(1), Var::Y(1), Var::X(2), Var::Y(2)]).prop_map(Expr::Var),
        (1u16..=2).prop_map(Expr::Root),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner, prop::sample::select(vec![Var::X(1), Var::Y(1), Var::Y(2)]), -2i64..=2)
                .prop_map(|(a, v, k)| Expr::Div(Box::new(a), v, k)),
        ]
    })
}

fn eval(e: &Expr) -> TowerElement {
    match e {
        Expr::Int(n) => TowerElement::from_int(*n),
        Expr::I => TowerElement::i(),
        Expr::Var(v) => TowerElement::var(*v),
        Expr::Root(l) => TowerElement::sqrt_x(*l),
        Expr::Add(a, b) => eval(a) + eval(b),
        Expr::Sub(a, b) => eval(a) - eval(b),
        Expr::Mul(a, b) => eval(a) * eval(b),
        Expr::Div(a, v, k) => eval(a).div(&(TowerElement::var(*v) + TowerElement::from_int(*k))).unwrap(),
    }
}

/// The same expression with every sum and product commuted.
fn commuted(e: &Expr) -> Expr {
    match e {
        Expr::Add(a, b) => Expr::Add(Box::new(commuted(b)), Box::new(commuted(a))),
        Expr::Mul(a, b) => Expr::Mul(Box::new(commuted(b)), Box::new(commuted(a))),
        Expr::Sub(a, b) => Expr::Sub(Box::new(commuted(a)), Box::new(commuted(b))),
        Expr::Div(a, v, k) => Expr::Div(Box::new(commuted(a)), *v, *k),
        other => other.clone(),
    }
}

/// `sum_S N_S sqrt(x_S) / D` with no cancellation ever performed.
#[derive(Clone, Debug)]
struct Unreduced {
    num: BTreeMap<u32, MultiPoly>,
    den: MultiPoly,
}

impl Unreduced {
    fn poly(p: MultiPoly) -> Self {
        Unreduced { num: BTreeMap::from([(0, p)]), den: MultiPoly::one() }
    }

    fn scale_num(&self, p: &MultiPoly) -> BTreeMap<u32, MultiPoly> {
        self.num.iter().map(|(s, n)| (*s, n * p)).collect()
    }

    fn add(&self, o: &Self, sign: i64) -> Self {
        let mut num = self.scale_num(&o.den);
        for (s, n) in o.scale_num(&self.den) {
            let e = num.entry(s).or_insert_with(MultiPoly::zero);
            *e = &*e + &(&n * &MultiPoly::from_int(sign));
        }
        Unreduced { num, den: &self.den * &o.den }
    }

    fn mul(&self, o: &Self) -> Self {
        let mut num: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (s, a) in &self.num {
            for (t, b) in &o.num {
                let both = RootSet(s & t).x_monomial();
                let e = num.entry(s ^ t).or_insert_with(MultiPoly::zero);
                *e = &*e + &(a * b).mul_monomial(&both);
            }
        }
        Unreduced { num, den: &self.den * &o.den }
    }

    fn is_zero(&self) -> bool {
        self.num.values().all(|p| p.is_zero())
    }
}

fn oracle(e: &Expr) -> Unreduced {
    match e {
        Expr::Int(n) => Unreduced::poly(MultiPoly::from_int(*n)),
        Expr::I => Unreduced::poly(MultiPoly::constant(stablecsa::field::BaseScalar::i())),
        Expr::Var(v) => Unreduced::poly(MultiPoly::var(*v)),
        Expr::Root(l) => Unreduced { num: BTreeMap::from([(1 << (l - 1), MultiPoly::one())]), den: MultiPoly::one() },
        Expr::Add(a, b) => oracle(a).add(&oracle(b), 1),
        Expr::Sub(a, b) => oracle(a).add(&oracle(b), -1),
        Expr::Mul(a, b) => oracle(a).mul(&oracle(b)),
        Expr::Div(a, v, k) => {
            let mut u = oracle(a);
            u.den = &u.den * &(&MultiPoly::var(*v) + &MultiPoly::from_int(*k));
            u
        }
    }
}

fn renormalized(a: &TowerElement) -> TowerElement {
    a.slots().fold(TowerElement::zero(), |acc, (s, c)| {
        acc + TowerElement::with_slot(s, RatFunc::new(c.num().clone(), c.den().clone()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn ring_axioms(a in expr(), b in expr(), c in expr()) {
        let (a, b, c) = (eval(&a), eval(&b), eval(&c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(renormalized(&a), a.clone());
        prop_assert_eq!(parse_element(&a.to_string()).unwrap(), a.clone());
        prop_assert!(a.num_slots() <= 4);
        prop_assert!(a.root_support().0 & !0b11 == 0);
    }

    #[test]
    fn specialization_is_a_homomorphism(a in expr(), b in expr(), seed in any::<u64>()) {
        let (a, b) = (eval(&a), eval(&b));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let map = SpecializationMap::sample(DEFAULT_PRIME, 2, &mut rng).unwrap();
        let fp = map.field();
        let vals = (map.specialize(&a), map.specialize(&b), map.specialize(&(&a * &b)), map.specialize(&(&a + &b)));
        match vals {
            (Ok(sa), Ok(sb), Ok(sab), Ok(ssum)) => {
                prop_assert_eq!(sab, fp.mul(sa, sb));
                prop_assert_eq!(ssum, fp.add(sa, sb));
            }
            (Err(FieldError::DenominatorVanishes), ..) | (_, Err(FieldError::DenominatorVanishes), ..) => {}
            other => prop_assert!(false, "unexpected specialization failure {:?}", other),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn is_zero_matches_unreduced_expansion(x in expr(), y in expr(), same in any::<bool>()) {
        let e = Expr::Sub(Box::new(x.clone()), Box::new(if same { commuted(&x) } else { y }));
        prop_assert_eq!(eval(&e).is_zero(), oracle(&e).is_zero());
        if same {
            prop_assert!(eval(&e).is_zero());
        }
    }
}

#[test]
fn inverse_with_three_roots() {
    let a = parse_element("1 + sqrt(x1) + sqrt(x2) + sqrt(x3)").unwrap();
    let inv = a.inv().unwrap();
    assert!((&a * &inv).is_one());
    assert!(inv.num_slots() <= 8);
}
