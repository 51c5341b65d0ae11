//! Fuzzes the full run-config parser: arbitrary bytes must never panic, and
//! an accepted config must re-serialize and re-parse.

#![no_main]

use libfuzzer_sys::fuzz_target;

use fermi_charts::config::RunConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = RunConfig::from_json_str(text) {
        let json = serde_json::to_string(&config).expect("accepted configs serialize");
        RunConfig::from_json_str(&json).expect("serialized configs parse back");
    }
});
