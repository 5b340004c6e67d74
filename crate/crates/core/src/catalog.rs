//! Ready-made statements used by the demos and the test suites.

use crate::entropy::{EntropyExpr, VarContext};
use crate::error::Result;
use crate::model::{le, past_future_converse_context, zero, Eii};
use crate::rational::q;

fn sum(terms: &[EntropyExpr]) -> EntropyExpr {
    terms.iter().fold(EntropyExpr::zero(), |a, t| &a + t)
}

/// Wyner common information is superadditive on independent pairs:
/// given `V`, the auxiliaries `U1 = U2 = V` work.
pub fn wyner_superadditive() -> Result<Eii> {
    let base = VarContext::rvs(&["X1", "X2", "Y1", "Y2", "V"])?;
    let full = VarContext::rvs(&["X1", "X2", "Y1", "Y2", "V", "U1", "U2"])?;
    let mut premise = Vec::new();
    premise.extend(zero(&full.i(&["X1", "Y1"], &["X2", "Y2"], &[])?));
    premise.extend(zero(&full.i(&["X1", "X2"], &["Y1", "Y2"], &["V"])?));
    let mut cons = Vec::new();
    cons.extend(zero(&full.i(&["X1"], &["Y1"], &["U1"])?));
    cons.extend(zero(&full.i(&["X2"], &["Y2"], &["U2"])?));
    cons.push(le(
        &sum(&[
            full.i(&["U1"], &["X1", "Y1"], &[])?,
            full.i(&["U2"], &["X2", "Y2"], &[])?,
        ]),
        &full.i(&["V"], &["X1", "X2", "Y1", "Y2"], &[])?,
    ));
    Eii::new(base, vec!["U1".into(), "U2".into()], premise, cons)
}

/// The converse direction: `V = (U1, U2)`.
pub fn wyner_subadditive() -> Result<Eii> {
    let base = VarContext::rvs(&["X1", "X2", "Y1", "Y2", "U1", "U2"])?;
    let full = VarContext::rvs(&["X1", "X2", "Y1", "Y2", "U1", "U2", "V"])?;
    let mut premise = Vec::new();
    premise.extend(zero(&full.i(
        &["X1", "Y1", "U1"],
        &["X2", "Y2", "U2"],
        &[],
    )?));
    premise.extend(zero(&full.i(&["X1"], &["Y1"], &["U1"])?));
    premise.extend(zero(&full.i(&["X2"], &["Y2"], &["U2"])?));
    let mut cons = Vec::new();
    cons.extend(zero(&full.i(&["X1", "X2"], &["Y1", "Y2"], &["V"])?));
    cons.push(le(
        &full.i(&["V"], &["X1", "X2", "Y1", "Y2"], &[])?,
        &sum(&[
            full.i(&["U1"], &["X1", "Y1"], &[])?,
            full.i(&["U2"], &["X2", "Y2"], &[])?,
        ]),
    ));
    Eii::new(base, vec!["V".into()], premise, cons)
}

/// `2I(C;D) <= I(A;B) + I(A;C,D) + 3I(C;D|A) + I(C;D|B)`.
pub fn zhang_yeung() -> Result<Eii> {
    let ctx = VarContext::rvs(&["A", "B", "C", "D"])?;
    let lhs = ctx.i(&["C"], &["D"], &[])?.scale(&q(2));
    let rhs = sum(&[
        ctx.i(&["A"], &["B"], &[])?,
        ctx.i(&["A"], &["C", "D"], &[])?,
        ctx.i(&["C"], &["D"], &["A"])?.scale(&q(3)),
        ctx.i(&["C"], &["D"], &["B"])?,
    ]);
    Eii::cii(ctx, vec![], vec![le(&lhs, &rhs)])
}

/// `forall X,Y exists U: H(U) <= H(X), H(U) <= H(Y), H(X)+H(Y) <= H(U)+H(X,Y)`.
/// `U = X` works when `H(X) <= H(Y)`, `U = Y` otherwise.
pub fn two_branch() -> Result<Eii> {
    let full = VarContext::rvs(&["X", "Y", "U"])?;
    let h = |v: &[&str]| full.h(v, &[]);
    let cons = vec![
        le(&h(&["U"])?, &h(&["X"])?),
        le(&h(&["U"])?, &h(&["Y"])?),
        le(
            &sum(&[h(&["X"])?, h(&["Y"])?]),
            &sum(&[h(&["U"])?, h(&["X", "Y"])?]),
        ),
    ];
    Eii::new(
        VarContext::rvs(&["X", "Y"])?,
        vec!["U".into()],
        vec![],
        cons,
    )
}

/// Single-letter converse for the Gelfand-Pinsker channel with message
/// `M`, state `S`, input `X`, output `Y` and rate `R`, written with
/// present/past/future groups. Expected auxiliary: `U = (M, Y_past, S_fut)`.
pub fn gelfand_pinsker_converse() -> Result<Eii> {
    let (ctx, csiszar) = past_future_converse_context(&["S", "Y"], &["M"])?;
    let (ctx, _) = ctx.extend(&["X_now"])?;
    let base = ctx.with_reals(&["R"])?;
    let (full, _) = base.extend(&["U"])?;
    let mut premise = csiszar;
    premise.extend(zero(&full.i(&["M"], &["S_now", "S_past", "S_fut"], &[])?));
    premise.extend(zero(&full.i(&["S_now"], &["S_past", "S_fut"], &[])?));
    premise.extend(zero(
        &full.h(&["X_now"], &["M", "S_now", "S_past", "S_fut"])?,
    ));
    premise.extend(zero(&full.i(
        &["M", "S_past", "S_fut", "Y_past", "Y_fut"],
        &["Y_now"],
        &["X_now", "S_now"],
    )?));
    premise.push(le(
        &EntropyExpr::real("R"),
        &full.i(&["M"], &["Y_now"], &["Y_past"])?,
    ));
    let mut cons = vec![le(
        &EntropyExpr::real("R"),
        &(&full.i(&["U"], &["Y_now"], &[])? - &full.i(&["U"], &["S_now"], &[])?),
    )];
    cons.extend(zero(&full.i(&["U"], &["Y_now"], &["X_now", "S_now"])?));
    Eii::new(base, vec!["U".into()], premise, cons)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(wyner_superadditive().unwrap().n(), 5);
        assert_eq!(wyner_subadditive().unwrap().l(), 1);
        assert_eq!(zhang_yeung().unwrap().consequence.len(), 1);
        let gp = gelfand_pinsker_converse().unwrap();
        assert_eq!((gp.n(), gp.l()), (8, 1));
        assert_eq!(gp.base.real_names(), ["R".to_string()]);
    }
}
