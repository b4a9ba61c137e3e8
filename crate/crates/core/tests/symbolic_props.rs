use proptest::prelude::*;
use relsem::gen::{case_rng, statement_and_model, GenConfig};
use relsem::symbolic::{check_soundness, parse_model, parse_statement, render, unfold};
use relsem::universe::parse_universe;

fn soundness(decls: &str, stmt: &str, model: &str) -> (bool, bool) {
    let u = parse_universe("sort A = {0,1,2}\nsort B = {0,1}\nsort I = {0,1}\nevents a b").unwrap();
    let (d, s) = parse_statement(&format!("{decls}\n{stmt}")).unwrap();
    let m = parse_model(model, &d, &u).unwrap();
    check_soundness(&s, &m).unwrap()
}

#[test]
fn worked_examples() {
    assert_eq!(soundness("rel X : A", "X <= X", "X = {(1)}"), (true, true));
    assert_eq!(
        soundness("rel X Y : A*B", "X + Y == Y + X", "X = {(0,1)}\nY = {(2,0),(0,1)}"),
        (true, true)
    );
    assert_eq!(
        soundness("rel R : A*B\nrel S : B*A", "(0,2) in R;S", "R = {(0,1)}\nS = {(1,2)}"),
        (true, true)
    );
    assert_eq!(soundness("rel X Y : A", "X == Y", "X = {(1)}\nY = {(2)}"), (false, false));
    assert_eq!(
        soundness(
            "rel R S : A*trace*A",
            "(0,[a,b],2) in R;S",
            "R = {(0,[a],1)}\nS = {(1,[b],2)}"
        ),
        (true, true)
    );
}

#[test]
fn associativity_goal() {
    let (_, s) = parse_statement(
        "rel R1 : A*B\nrel R2 : B*C\nrel R3 : C*D\n(R1;R2);R3 == R1;(R2;R3)",
    )
    .unwrap();
    let shown = render(&unfold(&s).unwrap());
    let goal = "forall a d, (exists c : C, (exists b : B, (a, b) ∈ R1 /\\ (b, c) ∈ R2) /\\ \
                (c, d) ∈ R3) <-> (exists b : B, (a, b) ∈ R1 /\\ (exists c : C, (b, c) ∈ R2 /\\ \
                (c, d) ∈ R3))";
    assert_eq!(shown, goal);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn unfolding_is_sound(seed in any::<u64>()) {
        let mut rng = case_rng(seed, 0, 0);
        let (s, m) = statement_and_model(&mut rng, &GenConfig::default(), 3);
        let (direct, unfolded) = check_soundness(&s, &m).unwrap();
        prop_assert_eq!(direct, unfolded, "{}", s);
    }

    #[test]
    fn unfolding_is_linear(seed in any::<u64>()) {
        let mut rng = case_rng(seed, 1, 0);
        let (s, _) = statement_and_model(&mut rng, &GenConfig::default(), 3);
        let f = unfold(&s).unwrap();
        let nodes = s.to_string().split_whitespace().count();
        prop_assert!(f.size() <= 12 * (nodes + 1), "{} -> {}", s, render(&f));
    }
}
