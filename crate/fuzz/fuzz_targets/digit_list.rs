#![no_main]

use digit_moments::{parse_digit_list, DigitSet};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(digits) = parse_digit_list(text) {
        assert!(!digits.is_empty());
        // round trip through the canonical form
        let joined: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
        assert_eq!(parse_digit_list(&joined.join(",")).unwrap(), digits);
        for base in [2u32, 3, 10, 16] {
            let _ = DigitSet::new(base, &digits);
        }
    }
});
