//! Property tests for the expression language: printer round trips,
//! structural determinism, and value agreement between a tree and its
//! printed form.

use hypcore::expr::{eval_expr, parse, BinOp, Expr, Func, Var};
use proptest::prelude::*;

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0.0_f64..100.0).prop_map(|v| Expr::Num {
            value: (v * 8.0).round() / 8.0, // dyadic literals print exactly
            offset: 0
        }),
        Just(Expr::Var {
            var: Var::X,
            offset: 0
        }),
        Just(Expr::Var {
            var: Var::N,
            offset: 0
        }),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone(), prop_oneof![
                Just(BinOp::Add),
                Just(BinOp::Sub),
                Just(BinOp::Mul),
                Just(BinOp::Div),
            ])
                .prop_map(|(lhs, rhs, op)| Expr::Bin {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                    offset: 0
                }),
            inner.clone().prop_map(|arg| Expr::Neg {
                arg: Box::new(arg),
                offset: 0
            }),
            inner.clone().prop_map(|arg| Expr::Call {
                func: Func::Abs,
                args: vec![arg],
                offset: 0
            }),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Call {
                func: Func::Min,
                args: vec![a, b],
                offset: 0
            }),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Call {
                func: Func::Max,
                args: vec![a, b],
                offset: 0
            }),
        ]
    })
}

proptest! {
    #[test]
    fn printer_reparse_is_stable(e in arb_expr()) {
        let once = e.print();
        let parsed = parse(&once).unwrap();
        prop_assert_eq!(parsed.print(), once);
    }

    #[test]
    fn printed_tree_evaluates_identically(e in arb_expr(), x in -3.0_f64..3.0, n in 1.0_f64..16.0) {
        let reparsed = parse(&e.print()).unwrap();
        let a = eval_expr(&e, x, n);
        let b = eval_expr(&reparsed, x, n);
        match (a, b) {
            (Ok(va), Ok(vb)) => prop_assert_eq!(va, vb),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "diverging outcomes {:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn parsing_is_deterministic(e in arb_expr()) {
        let src = e.print();
        prop_assert_eq!(parse(&src).unwrap(), parse(&src).unwrap());
    }
}
