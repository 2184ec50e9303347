use proptest::prelude::*;

use crisp_cli::syntax::{Command, Item};
use crisp_cli::{exit_code, parse_script, run, ParseError, RunOptions, Status};

fn corpus(stem: &str) -> String {
    std::fs::read_to_string(crisp_cli::corpus_dir().join(format!("{stem}.crisp"))).unwrap()
}

#[test]
fn parse_examples() {
    let s = parse_script("ring A = QQ[x]; map f : A -> A = [x -> x]; check crisp f;").unwrap();
    assert_eq!(s.items.len(), 3);

    match parse_script("ring A = QQ[x]; ideal I = (x*y);") {
        Err(ParseError::UndefinedName { name, line, col }) => {
            assert_eq!(name, "y");
            assert_eq!((line, col), (1, 30));
        }
        other => panic!("{other:?}"),
    }

    let s = parse_script(&corpus("trivial_extension")).unwrap();
    assert_eq!(s.declarations(), 9);
}

#[test]
fn parse_errors_carry_positions() {
    let e = parse_script("ring A = QQ[x];\nring A = QQ[y];").unwrap_err();
    assert!(matches!(e, ParseError::Redefinition { line: 2, col: 6, .. }), "{e:?}");
    let e = parse_script("ring A = QQ[x];\ncheck crisp f;").unwrap_err();
    assert!(matches!(e, ParseError::UndefinedName { line: 2, col: 13, .. }), "{e:?}");
    let e = parse_script("ring A = QQ[x]\nring B = QQ[y];").unwrap_err();
    assert!(matches!(e, ParseError::Syntax { line: 2, .. }), "{e:?}");
    let e = parse_script("ring A = QQ[x]; ring B = Fp<4>[y];").unwrap_err();
    assert!(matches!(e, ParseError::Syntax { .. }), "{e:?}");
    let e = parse_script("ring A = QQ[x]; ring B = QQ[y]; map f : A -> B = [x -> x];").unwrap_err();
    assert!(matches!(e, ParseError::UndefinedName { ref name, .. } if name == "x"), "{e:?}");
    let e = parse_script("ring A = QQ[x]; map f : A -> A = [];").unwrap_err();
    assert!(matches!(e, ParseError::Syntax { .. }), "{e:?}");
    assert!(e.to_string().starts_with("1:"));
}

#[test]
fn run_examples() {
    let opts = RunOptions::default();
    assert!(run(&parse_script("").unwrap(), &opts).is_empty());

    let reports = run(&parse_script(&corpus("trivial_extension")).unwrap(), &opts);
    assert!(reports.iter().any(|r| r.kind == "check_crisp" && r.result["verdict"] == "Crisp"));
    assert!(reports.iter().any(|r| r.kind == "check_flat" && r.result["result"] == "NotFlat"));
    assert_eq!(exit_code(&reports), 0);

    let reports = run(&parse_script(&corpus("localization")).unwrap(), &opts);
    let v = &reports[0].result;
    assert_eq!(v["verdict"], "NotCrisp");
    assert_eq!(v["witness"]["kind"], "ModuleWitness");
    assert_eq!(v["witness"]["evidence"]["module"]["relation_columns"], serde_json::json!([["x"]]));
}

#[test]
fn engine_errors_are_per_command() {
    let src = "ring A = QQ[x]; ring B = QQ[x, y]; map p : A -> B = [x -> x];\n\
               check sheaf p;\ncheck crisp p;";
    let reports = run(&parse_script(src).unwrap(), &RunOptions::default());
    assert_eq!(reports.len(), 2);
    assert!(matches!(reports[0].status, Status::Error(_)));
    assert_eq!(reports[1].status, Status::Ok);
    assert_eq!(exit_code(&reports), 1);
}

#[test]
fn corpus_round_trips() {
    for path in crisp_cli::corpus_files() {
        let text = std::fs::read_to_string(&path).unwrap();
        let s = parse_script(&text).unwrap();
        let again = parse_script(&s.to_string()).unwrap();
        assert_eq!(s, again, "{}", path.display());
        assert_eq!(s.to_string(), again.to_string());
    }
}

#[test]
fn corpus_runs_cleanly() {
    let opts = RunOptions::default();
    for path in crisp_cli::corpus_files() {
        let s = parse_script(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let reports = run(&s, &opts);
        assert_eq!(exit_code(&reports), 0, "{}: {:?}", path.display(), reports.iter().find(|r| r.status != Status::Ok));
        let commands = s.items.iter().filter(|i| matches!(i, Item::Command(_))).count();
        assert_eq!(reports.len(), commands);
    }
}

#[test]
fn budget_clause_overrides_flags() {
    let s = parse_script("ring A = QQ[x]; map f : A -> A = [x -> x]; check crisp f budget rank 1 time 50;").unwrap();
    match &s.items[2] {
        Item::Command(Command::CheckCrisp { budget, .. }) => {
            assert_eq!(budget.rank, Some(1));
            assert_eq!(budget.time_ms, Some(50));
            assert_eq!(budget.degree, None);
        }
        other => panic!("{other:?}"),
    }
    let reports = run(&s, &RunOptions::default());
    assert_eq!(reports[0].result["budget"]["max_rank"], 1);
}

fn poly(vars: &[&str], terms: &[(i64, Vec<u32>)]) -> String {
    let mut out = String::new();
    for (k, (c, exps)) in terms.iter().enumerate() {
        let mono: Vec<String> = vars
            .iter()
            .zip(exps)
            .filter(|(_, e)| **e > 0)
            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        let body = if mono.is_empty() {
            c.abs().to_string()
        } else if c.abs() == 1 {
            mono.join("*")
        } else {
            format!("{}*{}", c.abs(), mono.join("*"))
        };
        match (k, *c < 0) {
            (0, true) => out.push_str(&format!("-{body}")),
            (0, false) => out.push_str(&body),
            (_, true) => out.push_str(&format!(" - {body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
        }
    }
    out
}

fn poly_in(nvars: usize) -> impl Strategy<Value = Vec<(i64, Vec<u32>)>> {
    proptest::collection::vec(
        (
            prop_oneof![-3i64..=-1, 1i64..=3],
            proptest::collection::vec(0u32..3, nvars),
        ),
        1..4,
    )
}

const VARS: &[&str] = &["x", "y", "z"];

fn script_text() -> impl Strategy<Value = String> {
    (
        1usize..=3,
        prop_oneof![Just("QQ"), Just("Fp<2>"), Just("Fp<5>")],
        poly_in(3),
        poly_in(3),
        poly_in(3),
        any::<bool>(),
        0usize..4,
    )
        .prop_map(|(n, field, rel, img, gen, cover, cmd)| {
            let vars = &VARS[..n];
            let v = vars.join(", ");
            let rel = poly(vars, &rel);
            let img = poly(vars, &img);
            let gen = poly(vars, &gen);
            let images: Vec<String> = vars
                .iter()
                .enumerate()
                .map(|(i, x)| if i == 0 { format!("{x} -> {img}") } else { format!("{x} -> {x}") })
                .collect();
            let mut s = format!(
                "ring A = {field}[{v}];\nring B = A / ({rel});\nideal I in A = ({gen}, {});\n\
                 map f : A -> B = [{}];\nmap g : A -> A = [{}];\nmap h : A -> C = product {{f, g}};\n\
                 module M = coker A^2 <- A^1 [[{gen}], [{}]];\nprime p in A = ({}) assert_prime;\n",
                vars[0],
                images.join(", "),
                vars.iter().map(|x| format!("{x} -> {x}")).collect::<Vec<_>>().join(", "),
                vars[0],
                vars[0],
            );
            if cover {
                s.push_str(&format!("cover U on A = {{f, B}} zariski ({gen});\ncheck cover U;\n"));
            }
            s.push_str(match cmd {
                0 => "check crisp f budget degree 2 candidates 10;\n",
                1 => "descend flat g M;\n",
                2 => "certify ff g free (1);\nrefute h;\n",
                _ => "probe stalk g at p;\ncheck equalizer f M;\n",
            });
            s
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn pretty_print_round_trips(text in script_text()) {
        let s = parse_script(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        let printed = s.to_string();
        let again = parse_script(&printed).map_err(|e| TestCaseError::fail(format!("{e}\n{printed}")))?;
        prop_assert_eq!(&s, &again);
        prop_assert_eq!(printed, again.to_string());
    }
}
