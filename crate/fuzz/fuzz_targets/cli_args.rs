#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Whitespace-split the input into an argv-like token stream; parsing
    // must never panic, and accepted invocations must resolve cleanly.
    if let Ok(text) = std::str::from_utf8(data) {
        let args: Vec<String> = text.split_whitespace().map(str::to_string).collect();
        if let Ok(invocation) = lgsim_cli::parse_args(&args) {
            let _ = invocation.overrides.into_config();
        }
    }
});
