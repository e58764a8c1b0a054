#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(atom) = xasp::syntax::parse_atom(data) {
        assert_eq!(xasp::syntax::parse_atom(&atom.to_string()), Ok(atom));
    }
    if let Ok(atom) = xasp::engine::GroundAtom::parse(data) {
        assert_eq!(xasp::engine::GroundAtom::parse(&atom.to_string()), Ok(atom));
    }
});
