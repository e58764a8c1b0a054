#![no_main]

use libfuzzer_sys::fuzz_target;
use xasp::render::program_to_source;
use xasp::syntax::parse_program;

fuzz_target!(|data: &str| {
    let Ok(program) = parse_program(data) else {
        return;
    };
    let printed = program_to_source(&program);
    let reparsed = parse_program(&printed).expect("printed program parses");
    assert_eq!(reparsed, program);
});
