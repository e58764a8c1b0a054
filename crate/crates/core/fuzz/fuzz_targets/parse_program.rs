#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(program) = xasp::syntax::parse_program(data) else {
        return;
    };
    let _ = xasp::syntax::safety_check(&program);
    let _ = xasp::engine::stratify(&program);
});
