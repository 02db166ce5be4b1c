#![no_main]

use libfuzzer_sys::fuzz_target;
use walshsum_cli::config::{echo, parse_config, Command};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for command in [Command::Lemmas, Command::KernelNorms, Command::Bounds, Command::Corpus] {
        if let Ok(settings) = parse_config(text, command) {
            // the echoed section must read back to the same settings
            let again = parse_config(&echo(command, &settings), command).unwrap();
            assert_eq!(again, settings);
        }
    }
});
