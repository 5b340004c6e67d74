mod common;

use std::collections::BTreeMap;

use common::{projected, value};
use infoprove::entropy::{EntropyExpr, VarContext};
use infoprove::model::Eip;
use infoprove::rational::{q, qr};
use infoprove::region::fourier_motzkin;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn fm_matches_point_projection() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let base = VarContext::new(&["X"], &["A", "B"]).unwrap();
    let mut checked = 0;
    let mut inside = 0;
    for _ in 0..8 {
        let m = rng.gen_range(3..=8);
        let rows: Vec<EntropyExpr> = (0..m)
            .map(|_| {
                let mut r = EntropyExpr::constant_term(q(rng.gen_range(-4..=4)));
                for v in ["A", "B", "T"] {
                    r.add_real(v, q(rng.gen_range(-3..=3)));
                }
                r
            })
            .collect();
        let p = Eip::new(base.clone(), vec![], vec!["T".into()], rows.clone()).unwrap();
        let out = fourier_motzkin(&p, "T").unwrap();
        assert!(out.exist_reals.is_empty());
        for _ in 0..200 {
            let mut at = BTreeMap::new();
            at.insert("A", qr(rng.gen_range(-40..=40), 8));
            at.insert("B", qr(rng.gen_range(-40..=40), 8));
            let want = projected(&rows, &at);
            let got = out.rows.iter().all(|r| !value(r, &at).is_negative());
            assert_eq!(got, want, "rows {rows:?} at {at:?}");
            checked += 1;
            inside += want as usize;
        }
    }
    assert!(checked >= 1000);
    assert!(inside > 0 && inside < checked);
}
