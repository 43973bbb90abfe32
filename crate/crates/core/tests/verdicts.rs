use agr_core::asymptotics::{agr_compare, rank_difficulty, CompareOptions, Limit, Verdict};
use agr_core::coeff::{Coeff, ConstValue};
use agr_core::expr::parse;
use agr_core::granularity::Mode;

fn cmp(f: &str, h: &str, opts: CompareOptions) -> agr_core::asymptotics::ComparisonResult {
    agr_compare(&parse(f).unwrap(), &parse(h).unwrap(), opts).unwrap()
}

fn d() -> CompareOptions {
    CompareOptions::new(Mode::Discrete)
}

#[test]
fn golden_table() {
    let rows: [(&str, &str, CompareOptions, Verdict); 8] = [
        ("x^x", "g^x", d(), Verdict::Harder),
        ("(g*x)^x", "x^x", d(), Verdict::Equivalent),
        ("g^(x^n)", "g^x", d().with_k(2), Verdict::Equivalent),
        ("x^n", "g^x", d(), Verdict::EasierOrEquivalent),
        ("x^n + x + 1", "x^n", d().with_k(0), Verdict::Harder),
        ("g^(g1^x)", "g^x", d().with_k(2), Verdict::EquivalentOrNoSolution),
        ("x^n*g^x", "g^x", d(), Verdict::Equivalent),
        ("x*g^x", "g^x", d(), Verdict::Equivalent),
    ];
    for (f, h, o, want) in rows {
        assert_eq!(cmp(f, h, o).verdict, want, "{f} vs {h}");
    }
}

#[test]
fn continuous_chain() {
    let fs: Vec<_> = ["x", "-1/x", "x^n", "g^x", "x^x"].iter().map(|s| parse(s).unwrap()).collect();
    let opts = CompareOptions::new(Mode::Continuous).derivative().with_k(1);
    let ranked = rank_difficulty(&fs, opts).unwrap();
    assert_eq!(ranked.len(), 5);
    for (class, e) in ranked.iter().zip(&fs) {
        assert_eq!(class, &vec![e.clone()]);
    }
}

#[test]
fn limit_objects() {
    let r = cmp("g^(x^n)", "g^x", d().with_k(2));
    assert_eq!(r.limit.limit, Limit::Const(ConstValue::coeff(Coeff::n())));
    let r = cmp("x^n*g^x", "g^x", d());
    assert_eq!(
        r.limit.limit,
        Limit::ConstInterval { lo: ConstValue::one(), hi: ConstValue::coeff(&Coeff::n() + &Coeff::one()) }
    );
    let r = cmp("x*g^x", "g^x", d());
    assert_eq!(r.limit.limit, Limit::ConstInterval { lo: ConstValue::one(), hi: ConstValue::int(2) });
    let r = cmp("g^(g1^x)", "g^x", d().with_k(2));
    assert_eq!(r.limit.limit, Limit::OscConstInf(ConstValue::one()));
    let r = cmp("x^n", "g^x", d());
    assert_eq!(r.limit.limit, Limit::OscZeroConst(ConstValue::coeff(Coeff::n())));
}

#[test]
fn equivalent_class_at_k2() {
    let fs = vec![parse("g^x").unwrap(), parse("g^(x^n)").unwrap()];
    assert_eq!(rank_difficulty(&fs, d().with_k(2)).unwrap().len(), 1);
    assert_eq!(rank_difficulty(&fs[..1], d()).unwrap(), vec![vec![fs[0].clone()]]);
}
