#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // The config parser must reject, never panic, on arbitrary text; a
    // successfully parsed file must also survive resolution into a full
    // configuration.
    let text = String::from_utf8_lossy(data);
    if let Ok(partial) = lgsim_cli::parse_config_text(&text) {
        let _ = partial.into_config();
    }
});
