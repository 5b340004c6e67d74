use infoprove::rational::{qr, Q};
use infoprove::syntax::{parse, Atom, Block, Constraint, Expr, Quants, Rel, Statement, Term};
use proptest::prelude::*;

const RVS: [&str; 5] = ["X", "Y", "Z1", "W_2", "V'"];
const REALS: [&str; 3] = ["R", "R0", "Rate"];

fn names(pool: &'static [&'static str], mask: u8) -> Vec<String> {
    pool.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, n)| n.to_string())
        .collect()
}

fn nonempty(pool: Vec<String>) -> impl Strategy<Value = Vec<String>> {
    proptest::sample::subsequence(pool.clone(), 1..=pool.len().min(3))
}

fn atom(rvs: Vec<String>, reals: Vec<String>) -> BoxedStrategy<Atom> {
    let mut options: Vec<BoxedStrategy<Atom>> = vec![Just(Atom::One).boxed()];
    if !rvs.is_empty() {
        let r = rvs.clone();
        options.push(
            (nonempty(r.clone()), proptest::sample::subsequence(r, 0..=1))
                .prop_map(|(a, c)| Atom::H(a, c))
                .boxed(),
        );
        let r = rvs.clone();
        options.push(
            (
                nonempty(r.clone()),
                nonempty(r.clone()),
                proptest::sample::subsequence(r.clone(), 0..=r.len().min(2)),
            )
                .prop_map(|(a, b, c)| Atom::I(a, b, c))
                .boxed(),
        );
    }
    if !reals.is_empty() {
        options.push(proptest::sample::select(reals).prop_map(Atom::Real).boxed());
    }
    proptest::strategy::Union::new(options).boxed()
}

fn coeff() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| qr(n, d))
}

fn expr(rvs: Vec<String>, reals: Vec<String>) -> impl Strategy<Value = Expr> {
    proptest::collection::vec(
        (coeff(), atom(rvs, reals)).prop_map(|(coeff, atom)| Term { coeff, atom }),
        1..4,
    )
    .prop_map(|terms| Expr { terms })
}

fn constraints(rvs: Vec<String>, reals: Vec<String>) -> impl Strategy<Value = Vec<Constraint>> {
    let rel = prop_oneof![Just(Rel::Le), Just(Rel::Ge), Just(Rel::Eq)];
    proptest::collection::vec(
        (expr(rvs.clone(), reals.clone()), rel, expr(rvs, reals))
            .prop_map(|(lhs, rel, rhs)| Constraint { lhs, rel, rhs }),
        0..3,
    )
}

fn statement() -> impl Strategy<Value = Statement> {
    (any::<u8>(), any::<u8>(), any::<bool>(), any::<bool>()).prop_flat_map(
        |(rmask, qmask, with_premise, with_exists)| {
            let all_rvs = names(&RVS, rmask & 0x1f);
            let all_reals = names(&REALS, qmask & 0x7);
            let split_r = all_rvs.len() / 2;
            let split_q = all_reals.len() / 2;
            let forall = Quants {
                rvs: all_rvs[..split_r].to_vec(),
                reals: all_reals[..split_q].to_vec(),
            };
            let exists = Quants {
                rvs: all_rvs[split_r..].to_vec(),
                reals: all_reals[split_q..].to_vec(),
            };
            let (inner_rvs, inner_reals) = if with_exists {
                (all_rvs.clone(), all_reals.clone())
            } else {
                (forall.rvs.clone(), forall.reals.clone())
            };
            (
                constraints(forall.rvs.clone(), forall.reals.clone()),
                constraints(inner_rvs, inner_reals),
            )
                .prop_map(move |(p, b)| Statement {
                    forall: Some(forall.clone()),
                    premise: with_premise.then_some(p),
                    body: Block {
                        exists: with_exists.then(|| exists.clone()),
                        constraints: b,
                    },
                })
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_parse_round_trip(st in statement()) {
        let text = st.to_string();
        let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(&back, &st);
        prop_assert_eq!(back.to_string(), text);
    }
}
