use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use cram::coeffs::{parse_set_json, set_to_json, truncate_set, Convention};
use cram::matexp::{vector_from_json, vector_to_json, DenseMatrix};
use cram::ratfun::{compare_sets, eval_complex, eval_real, roundtrip_set};
use cram::xprec::{arith, ArithOp};
use cram::{builtin_set, CoefficientSet, XComplex, XReal};

fn rational(lit: &str) -> BigRational {
    let (mant, exp) = match lit.find(['e', 'E']) {
        Some(i) => (&lit[..i], lit[i + 1..].parse::<i64>().unwrap()),
        None => (lit, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let digits = BigInt::from_str(&format!("{int}{frac}")).unwrap();
    let scale = exp - frac.len() as i64;
    let q = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(BigInt::from(10), scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(BigInt::from(10), (-scale) as usize))
    };
    if neg {
        -q
    } else {
        q
    }
}

fn literal() -> impl Strategy<Value = String> {
    (any::<bool>(), 1u8..10, proptest::collection::vec(0u8..10, 39), -30i32..30).prop_map(|(neg, lead, rest, e)| {
        let tail: String = rest.iter().map(|d| char::from(b'0' + d)).collect();
        format!("{}{}.{}e{}", if neg { "-" } else { "" }, lead, tail, e)
    })
}

fn op() -> impl Strategy<Value = ArithOp> {
    prop_oneof![Just(ArithOp::Add), Just(ArithOp::Sub), Just(ArithOp::Mul), Just(ArithOp::Div)]
}

fn toy_set() -> impl Strategy<Value = CoefficientSet> {
    (-3.0f64..3.0, 0.5f64..2.0, -3.0f64..3.0, 3.0f64..6.0, -2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0, 0.1f64..2.0)
        .prop_map(|(r1, i1, r2, i2, a, b, c, a0)| {
            let f = |v: f64| XReal::from_f64(v, 50).unwrap();
            CoefficientSet::new(
                4,
                f(a0),
                vec![XComplex::new(f(r1), f(i1)), XComplex::new(f(r2), f(i2))],
                vec![XComplex::new(f(a), f(b)), XComplex::new(f(c), f(a))],
                "toy",
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arithmetic_matches_rationals(a in literal(), b in literal(), op in op()) {
        let got = arith(op, &XReal::parse(&a, 40).unwrap(), &XReal::parse(&b, 40).unwrap()).unwrap();
        let (qa, qb) = (rational(&a), rational(&b));
        let exact = match op {
            ArithOp::Add => &qa + &qb,
            ArithOp::Sub => &qa - &qb,
            ArithOp::Mul => &qa * &qb,
            ArithOp::Div => &qa / &qb,
        };
        let diff = (rational(&got.to_exact_string()) - &exact).abs();
        let limit = BigRational::new(BigInt::from(1), num_traits::pow(BigInt::from(10), 39));
        prop_assert!(exact.is_zero() && diff.is_zero() || diff <= limit * exact.abs());
    }

    #[test]
    fn exp_is_additive(a in -40.0f64..40.0, b in -40.0f64..40.0) {
        let xa = XReal::from_f64(a, 50).unwrap();
        let xb = XReal::from_f64(b, 50).unwrap();
        let lhs = (&xa + &xb).exp().unwrap();
        let rhs = xa.exp().unwrap() * xb.exp().unwrap();
        let rel = ((&lhs - &rhs) / lhs.clone()).abs();
        prop_assert!(rel.is_zero() || rel.log10_abs() < -46.0);
    }

    #[test]
    fn truncation_is_idempotent(d in 1usize..=20, k in prop_oneof![Just(14usize), Just(16)]) {
        let s = builtin_set(k).unwrap();
        let once = truncate_set(&s, d).unwrap();
        let twice = truncate_set(&once, d).unwrap();
        prop_assert_eq!(once.poles, twice.poles);
        prop_assert_eq!(once.residues, twice.residues);
        prop_assert_eq!(once.alpha0, twice.alpha0);
    }

    #[test]
    fn conjugate_symmetry(re in -20.0f64..5.0, im in 0.05f64..20.0) {
        let s = builtin_set(14).unwrap();
        let z = XComplex::new(XReal::from_f64(re, 64).unwrap(), XReal::from_f64(im, 64).unwrap());
        if let (Ok(a), Ok(b)) = (eval_complex(&s, &z), eval_complex(&s, &z.conj())) {
            let gap = (&a.conj() - &b).abs();
            // terms are O(1) while r can be tiny, so the bound is absolute
            prop_assert!(gap.is_zero() || gap.log10_abs() < -55.0);
        }
    }

    #[test]
    fn real_axis_value_is_real(x in -1e3f64..0.0) {
        let s = builtin_set(16).unwrap();
        let xr = XReal::from_f64(x, 64).unwrap();
        let c = eval_complex(&s, &XComplex::from_real(xr.clone())).unwrap();
        prop_assert!(c.im.is_zero() || c.im.log10_abs() < -60.0);
        let d = (&c.re - &eval_real(&s, &xr).unwrap()).abs();
        prop_assert!(d.is_zero() || d.log10_abs() < -58.0);
    }

    #[test]
    fn residues_recovered_from_polynomials(set in toy_set()) {
        let (back, _, _) = roundtrip_set(&set, 50).unwrap();
        for e in compare_sets(&back, &set, 50) {
            prop_assert!(e.agreeing_digits >= 30, "{} {}", e.name, e.agreeing_digits);
        }
    }

    #[test]
    fn set_json_round_trip(set in toy_set()) {
        let text = set_to_json(&set).to_string();
        let back = parse_set_json(&text, 50, Convention::Standard);
        // toy sets may fail the alpha0 level warning but never error
        let back = back.unwrap().set;
        prop_assert_eq!(back.poles, set.poles);
        prop_assert_eq!(back.residues, set.residues);
        prop_assert_eq!(back.alpha0, set.alpha0);
    }

    #[test]
    fn matrix_and_vector_json_round_trip(vals in proptest::collection::vec(-1e6f64..1e6, 9)) {
        let xs: Vec<XReal> = vals.iter().map(|v| XReal::from_f64(*v, 40).unwrap()).collect();
        let m = DenseMatrix::new(3, xs.clone()).unwrap();
        prop_assert_eq!(DenseMatrix::from_json(&m.to_json(), 40).unwrap(), m);
        prop_assert_eq!(vector_from_json(&vector_to_json(&xs), 40).unwrap(), xs);
    }
}
