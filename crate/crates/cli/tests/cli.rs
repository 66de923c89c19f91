use std::process::Command as Process;

use ncycle::families::{index2_binomial, BinomialParams};
use ncycle::{Elem, FieldCtx, IndexForm};
use ncycle_cli::job::{FamilyArgs, FieldArgs, Param, RRange, SearchArgs, VerifyArgs};
use ncycle_cli::{run, Command, Format, JobSpec, Status};
use proptest::prelude::*;
use serde_json::Value;

fn exec(args: &[&str]) -> (Status, Vec<Value>) {
    let mut all = args.to_vec();
    all.extend(["--format", "jsonl"]);
    let job = JobSpec::parse_args(all).expect("flags");
    let mut out = Vec::new();
    let status = match run(&job, &mut out) {
        Ok(s) => s,
        Err(e) => e.status(),
    };
    let text = String::from_utf8(out).unwrap();
    (status, text.lines().map(|l| serde_json::from_str(l).expect("json line")).collect())
}

fn binary(args: &[&str]) -> (i32, String, String) {
    let out = Process::new(env!("CARGO_BIN_EXE_ncycle")).args(args).output().expect("spawn");
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn verify_examples() {
    let (status, recs) = exec(&["verify", "--field", "3^6", "--poly", "x^521+x^417+x^105+x", "--n", "3"]);
    assert_eq!(status, Status::Verified);
    assert_eq!(recs[0]["min_order"], 3);
    assert_eq!(recs[0]["oracle"]["mode"], "full");
    assert_eq!(recs[0]["cycles"]["1"].as_u64().unwrap() + 3 * recs[0]["cycles"]["3"].as_u64().unwrap(), 729);

    let (status, recs) = exec(&["verify", "--field", "2^12", "--poly", "x^2458+x^1639+x", "--n", "3"]);
    assert_eq!(status, Status::Verified);
    assert_eq!(recs[0]["criterion"]["passed"], true);

    let (status, recs) = exec(&["verify", "--field", "7", "--poly", "x^2", "--n", "2"]);
    assert_eq!(status, Status::Rejected);
    assert_eq!(recs[0]["permutation"], false);
}

#[test]
fn record_fields_embed_field_data() {
    let (_, recs) = exec(&["verify", "--field", "2^4", "--modulus", "1,0,0,1,1", "--poly", "x^7", "--n", "2"]);
    let r = &recs[0];
    for key in ["field", "modulus", "beta", "poly", "index_form", "n", "criterion", "oracle"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert_eq!(r["modulus"], "1,0,0,1,1");
    assert_eq!(r["index_form"]["r"], 7);
}

#[test]
fn exit_codes_from_binary() {
    let (code, out, _) = binary(&["verify", "--field", "7", "--poly", "x^2", "--n", "2"]);
    assert_eq!(code, 1);
    assert!(out.contains("not a permutation"));
    let (code, _, err) = binary(&["verify", "--field", "7", "--poly", "x^^2", "--n", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("parse error"));
    assert_eq!(binary(&["verify", "--field", "6", "--poly", "x", "--n", "1"]).0, 2);
    assert_eq!(binary(&["verify", "--field", "7", "--n", "1"]).0, 2);
    assert_eq!(binary(&["search", "--field", "13", "--ell", "3", "--n", "2", "--budget", "50"]).0, 3);
    assert_eq!(binary(&["family", "--family", "even-q-tri", "--param", "q=64", "--param", "a=26"]).0, 0);
    assert_eq!(binary(&["--help"]).0, 0);
}

#[test]
fn family_examples() {
    let (status, recs) = exec(&["family", "--family", "even-q-tri", "--param", "q=64", "--param", "a=26"]);
    assert_eq!(status, Status::Verified);
    assert_eq!(recs[0]["poly"], "x^2458 + x^1639 + x");
    assert_eq!(recs[0]["oracle"]["passed"], true);

    let (status, recs) = exec(&["family", "--family", "v-tri", "--param", "q=64", "--param", "a=35", "--param", "v=61"]);
    assert_eq!(status, Status::Verified);
    assert_eq!(recs[0]["poly"], "x^2206 + x^316 + x");

    let (status, recs) = exec(&["family", "--family", "char3-quad", "--param", "q=3"]);
    assert_eq!(status, Status::Verified);
    assert_eq!(recs[0]["h"], "x^20 + x^16 + x^4 + 1");
    assert_eq!(recs[0]["poly"], "x^521 + x^417 + x^105 + x");
    let note = recs[1]["note"].as_str().unwrap();
    assert!(note.contains("x^313") && note.contains("same function: false"), "{note}");
}

#[test]
fn family_preconditions_name_the_failure() {
    let job = JobSpec::parse_args(["family", "--family", "even-q-tri", "--param", "q=64", "--param", "a=1"]).unwrap();
    let err = run(&job, &mut Vec::new()).unwrap_err();
    assert_eq!(err.status(), Status::Rejected);
    assert!(err.to_string().contains("5a"), "{err}");

    let job = JobSpec::parse_args(["family", "--family", "v-tri", "--param", "q=64", "--param", "a=35", "--param", "v=2"])
        .unwrap();
    let err = run(&job, &mut Vec::new()).unwrap_err();
    assert!(err.to_string().contains("v^3 = 1"), "{err}");

    // unknown parameter and wrong field are input errors
    let (status, _) = exec(&["family", "--family", "even-q-tri", "--param", "q=64", "--param", "z=1"]);
    assert_eq!(status, Status::InputError);
    let (status, _) = exec(&["family", "--family", "char3-quad", "--field", "3^5"]);
    assert_eq!(status, Status::InputError);
}

#[test]
fn low_index_families() {
    let (status, recs) =
        exec(&["family", "--family", "idx2-binomial", "--field", "7", "--param", "a=2", "--param", "b=4", "--param", "r=1"]);
    assert_eq!(status, Status::Verified);
    assert_eq!(recs[0]["poly"], "6*x^4 + 3*x");
    assert_eq!(recs[0]["cycles"], serde_json::json!({"1": 1, "3": 2}));
    assert_eq!(recs[0]["shape"], "identity");

    let (status, recs) = exec(&[
        "family", "--family", "idx3-trinomial", "--field", "7", "--param", "a=1", "--param", "b=2", "--param", "c=4",
    ]);
    assert_eq!(status, Status::Rejected);
    assert_eq!(recs[0]["family_verdict"], false);

    let (status, recs) = exec(&["family", "--family", "lift-even-q", "--param", "q=4", "--param", "a=1"]);
    assert_eq!(status, Status::Verified);
    assert_eq!(recs[0]["field"], "2^8");
    assert!(recs[1]["note"].as_str().unwrap().ends_with("true"));
}

#[test]
fn lifted_char3_uses_subgroup_mode() {
    let (status, recs) = exec(&["family", "--family", "lift-char3"]);
    assert_eq!(status, Status::Verified);
    assert_eq!(recs[0]["oracle"]["mode"], "subgroup");
    assert_eq!(recs[0]["index_form"]["s"], 532171);
}

#[test]
fn search_monomial_involutions() {
    let (status, recs) = exec(&["search", "--field", "7", "--ell", "1", "--n", "2"]);
    assert_eq!(status, Status::Verified);
    let monic: Vec<u64> = recs
        .iter()
        .filter(|r| r.get("index_form").is_some_and(|f| f["h"] == serde_json::json!([1])))
        .map(|r| r["index_form"]["r"].as_u64().unwrap())
        .collect();
    assert_eq!(monic, [1, 5]);
    assert_eq!(recs.last().unwrap()["summary"]["complete"], true);
}

#[test]
fn search_index2_matches_binomial_verdicts() {
    let ctx = FieldCtx::new(7, 1, None).unwrap();
    let (_, recs) = exec(&["search", "--field", "7", "--ell", "2", "--n", "3", "--r-range", "1..1"]);
    let mut hits = Vec::new();
    for rec in recs.iter().filter(|r| r.get("poly").is_some()) {
        let f = &rec["index_form"];
        let h: Vec<Elem> = f["h"].as_array().unwrap().iter().map(|c| Elem(c.as_u64().unwrap())).collect();
        let form = IndexForm::new(1, 3, h, &ctx).unwrap();
        let sub = ctx.unity_subgroup(2).unwrap();
        let vals = form.h_values(&sub, &ctx);
        hits.push((vals[0], vals[1]));
    }
    let mut expected = Vec::new();
    for a in ctx.elements().skip(1) {
        for b in ctx.elements().skip(1) {
            let out = index2_binomial(&BinomialParams { a, b, r: 1, n: 3 }, &ctx).unwrap();
            if out.passed {
                expected.push((a, b));
            }
        }
    }
    hits.sort();
    expected.sort();
    assert_eq!(hits, expected);
    assert_eq!(hits.len(), 9);
}

#[test]
fn search_gf13_index3_involutions_have_involutive_g() {
    let ctx = FieldCtx::new(13, 1, None).unwrap();
    let (status, recs) = exec(&["search", "--field", "13", "--ell", "3", "--n", "2", "--r-range", "1..5"]);
    assert_eq!(status, Status::Verified);
    let hits: Vec<&Value> = recs.iter().filter(|r| r.get("poly").is_some()).collect();
    assert!(!hits.is_empty());
    for rec in hits {
        let f = &rec["index_form"];
        let h: Vec<Elem> = f["h"].as_array().unwrap().iter().map(|c| Elem(c.as_u64().unwrap())).collect();
        let form = IndexForm::new(f["r"].as_u64().unwrap(), 4, h, &ctx).unwrap();
        let g = ncycle::criteria::induced_g(&form, &ctx).unwrap();
        let sub = ctx.unity_subgroup(3).unwrap();
        for (i, &y) in sub.elements().iter().enumerate() {
            let gy = g[sub.index_of(y).unwrap() as usize];
            let ggy = g[sub.index_of(gy).unwrap() as usize];
            assert_eq!(ggy, sub.elem(i as u64));
        }
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["search", "--field", "13", "--ell", "2", "--n", "4", "--format", "jsonl"];
    let (c1, a, _) = binary(&args);
    let (c2, b, _) = binary(&args);
    let (c3, c, _) = binary(&[&args[..], &["--threads", "1"]].concat());
    assert_eq!((c1, c2, c3), (0, 0, 0));
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn construct_and_info() {
    let (status, recs) = exec(&["construct", "--field", "13", "--sigma", "1,2,0", "--mvec", "0,1,3", "--r", "1", "--n", "3"]);
    assert_eq!(status, Status::Verified);
    assert_eq!(recs[0]["valid"], true);
    assert_eq!(recs[0]["min_order"], 3);

    let (status, recs) = exec(&["construct", "--field", "13", "--sigma", "1,2,0", "--mvec", "0,1,2", "--r", "1", "--n", "3"]);
    assert_eq!(status, Status::Rejected);
    assert_eq!(recs[0]["valid"], false);

    let (status, recs) = exec(&["info", "--field", "2^12"]);
    assert_eq!(status, Status::Verified);
    assert_eq!(recs[0]["order"], 4096);
    assert!(recs[0]["indices"].as_array().unwrap().contains(&serde_json::json!(65)));
}

fn field_args() -> impl Strategy<Value = FieldArgs> {
    (prop::sample::select(vec!["7", "2^12", "3^6"]), prop::option::of("[0-9](,[0-9]){1,4}"))
        .prop_map(|(f, m)| FieldArgs { field: f.to_string(), modulus: m })
}

fn job() -> impl Strategy<Value = JobSpec> {
    let format = prop::sample::select(vec![Format::Text, Format::Jsonl]);
    let verify = (field_args(), "x\\^[0-9]{1,3}( \\+ [0-9]\\*x)?", 1u32..10)
        .prop_map(|(field, poly, n)| Command::Verify(VerifyArgs { field, poly, n }));
    let family = (
        prop::sample::select(vec!["char3-quad", "v-tri", "idx3-trinomial"]),
        prop::collection::vec(("[a-z]", 0u64..100).prop_map(|(k, v)| Param { key: k, value: v.to_string() }), 0..4),
        prop::option::of(Just("13".to_string())),
        prop::option::of(1u32..5),
    )
        .prop_map(|(name, params, field, n)| {
            Command::Family(FamilyArgs { family: name.to_string(), params, field, modulus: None, n })
        });
    let search = (field_args(), 1u64..10, 1u32..5, prop::option::of((0u64..5, 5u64..20)), prop::option::of(1u64..1000))
        .prop_map(|(field, ell, n, r, budget)| {
            Command::Search(SearchArgs {
                field,
                ell,
                n,
                r_range: r.map(|(start, end)| RRange { start, end }),
                budget,
                threads: None,
            })
        });
    (prop_oneof![verify, family, search, field_args().prop_map(Command::Info)], format)
        .prop_map(|(command, format)| JobSpec { command, format })
}

proptest! {
    #[test]
    fn job_spec_round_trips(spec in job()) {
        let again = JobSpec::parse_args(spec.to_args()).unwrap();
        prop_assert_eq!(again, spec);
    }
}
