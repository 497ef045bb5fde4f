use rigidcx::cli::*;
use rigidcx::exactlin::BaseRing;
use rigidcx::Error;

const Q: BaseRing = BaseRing::Rationals;

fn one(text: &str, verb: &str) -> Report {
    let mut r = run_text(text, Some(verb), Q, &RunOptions::default()).unwrap();
    assert_eq!(r.len(), 1);
    r.remove(0)
}

#[test]
fn parses_declarations_and_jobs() {
    let text = "# comment\nring A = QQ[x] / (x^2);\nring Z6 = ZZ[] / (6);\nring K = QQ[];\nmap f : K -> A = ();\nsq A over QQ module A;\nrigid-exists A;\n";
    let jobs = parse_input(text, Q).unwrap();
    let verbs: Vec<&str> = jobs.iter().map(|j| j.verb.as_str()).collect();
    assert_eq!(verbs, ["sq", "rigid-exists"]);
    assert_eq!(jobs[0].line, 6);
}

#[test]
fn undefined_symbols_are_located() {
    match parse_input("ring A = QQ[x];\nsq B over QQ module A;", Q) {
        Err(Error::Parse { line, column, message }) => {
            assert_eq!((line, column), (2, 4));
            assert!(message.contains("undefined symbol B"), "{message}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn unknown_verbs_are_rejected() {
    assert!(matches!(parse_input("ring A = QQ[x];\nfrobnicate A;", Q), Err(Error::Parse { line: 2, .. })));
}

#[test]
fn polynomial_errors_point_into_the_line() {
    match parse_input("ring A = QQ[x] / (x^2 +* 1);", Q) {
        Err(Error::Parse { line: 1, column, .. }) => assert!(column > 18, "{column}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn squaring_dual_numbers_gives_dimension_two() {
    let r = one("ring A = QQ[x] / (x^2);\nsq A over QQ module A window -2 1;", "sq");
    assert!(r.passes());
    assert!(r.render().contains("0 | dim 2"), "{}", r.render());
}

#[test]
fn degrees_outside_the_guarantee_are_undetermined() {
    let r = one("ring A = QQ[x] / (x^2);\nsq A over QQ module A bound 2 window -3 0;", "sq");
    assert!(!r.passes());
    assert!(!r.undetermined().is_empty());
}

#[test]
fn rigid_existence_passes_for_dual_numbers() {
    let r = one("ring A = QQ[x] / (x^2);\nrigid-exists A;", "rigid-exists");
    assert!(r.passes(), "{}", r.render());
}

#[test]
fn zero_rigidifier_fails_at_a_named_degree() {
    let r = one("ring A = QQ[x] / (x^2);\nverify-rigid A rho zero;", "verify-rigid");
    assert!(!r.passes());
    assert_eq!(r.get("failing degrees"), Some("0"));
}

#[test]
fn integer_quotients_agree_with_the_oracle() {
    let r = one("ring Z2 = ZZ[] / (2);\noracle sq Z2 over ZZ module Z2;", "oracle");
    assert!(r.passes(), "{}", r.render());
    assert!(r.render().contains("-1 | Z/2"));
}

#[test]
fn smith_form_checks() {
    let r = one("matrix S = [[2,4],[6,8]];\nsnf S;", "snf");
    assert!(r.passes());
    assert_eq!(r.get("invariant factors"), Some("2 4"));
}

#[test]
fn etale_map_reports_the_idempotent() {
    let r = one("ring B = QQ[x] / (x^2 - 1);\netale B;", "etale");
    assert!(r.passes(), "{}", r.render());
    assert_eq!(r.checks().len(), 5);
}

#[test]
fn reports_are_deterministic() {
    let text = "ring A = QQ[x,y] / (y^2 - x^3);\nring P = QQ[x,y];\ngroebner A;\nkoszul P (x, y);\nrigid-exists A;";
    let a: Vec<String> = run_text(text, None, Q, &RunOptions::default()).unwrap().iter().map(|r| r.render()).collect();
    let b: Vec<String> = run_text(text, None, Q, &RunOptions::default()).unwrap().iter().map(|r| r.render()).collect();
    assert_eq!(a, b);
}

#[test]
fn selecting_an_absent_verb_is_an_error() {
    assert!(run_text("ring A = QQ[x];", Some("sq"), Q, &RunOptions::default()).is_err());
}

fn binary(args: &[&str]) -> std::process::Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_rigidcx")).args(args).output().unwrap()
}

#[test]
fn binary_exit_codes_follow_the_checks() {
    let program = "ring A = QQ[x] / (x^2);\nrigid-exists A;\nverify-rigid A rho zero;";
    let ok = binary(&["rigid-exists", "-e", program]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).ends_with("status: pass\n"));
    assert_eq!(binary(&["verify-rigid", "-e", program]).status.code(), Some(1));
    let bad = binary(&["sq", "-e", "sq B over QQ module B;"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("line 1, column 4"));
}

#[test]
fn binary_accepts_a_negative_window() {
    let out = binary(&["sq", "-e", "ring A = QQ[x] / (x^2);\nsq A over QQ module A;", "--window", "-2", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("-2 | dim 0") && text.contains("0 | dim 2"), "{text}");
}

proptest::proptest! {
    #[test]
    fn snf_jobs_pass_their_checks(rows in proptest::collection::vec(proptest::collection::vec(-20i64..=20, 3), 1..4)) {
        let text = format!(
            "matrix S = [{}];\nsnf S;\noracle snf S;",
            rows.iter().map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))).collect::<Vec<_>>().join(",")
        );
        for r in run_text(&text, None, Q, &RunOptions::default()).unwrap() {
            proptest::prop_assert!(r.passes(), "{}", r.render());
        }
    }
}
