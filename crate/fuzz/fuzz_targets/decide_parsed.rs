#![no_main]

use libfuzzer_sys::fuzz_target;
use qelim::sn::oracle_decide;
use qelim::{check_evidence, parse_auto, Engine, Error, SnTheory};

fuzz_target!(|data: &[u8]| {
    if data.len() > 256 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok((f, names)) = parse_auto(text) else {
        return;
    };
    if f.quantifier_depth() > 3 {
        return;
    }
    let env: Vec<u64> = (0..names.len() as u64).map(|i| i * 3).collect();
    let engine = Engine::new(SnTheory)
        .with_product_limit(2_000)
        .with_literal_limit(20_000);
    let decision = match engine.decide(&f, &env) {
        Ok(d) => d,
        Err(Error::DnfLimit { .. } | Error::EliminationLimit { .. } | Error::Overflow(_)) => return,
        Err(e) => panic!("decide failed on {text:?}: {e}"),
    };
    assert!(
        check_evidence(&decision, &f, &env),
        "evidence fails to check for {text:?}"
    );
    match oracle_decide(&f, &env) {
        Ok(expected) => assert_eq!(decision.is_yes(), expected, "oracle disagrees on {text:?}"),
        Err(Error::OracleBudget { .. } | Error::Overflow(_)) => {}
        Err(e) => panic!("oracle failed on {text:?}: {e}"),
    }
});
