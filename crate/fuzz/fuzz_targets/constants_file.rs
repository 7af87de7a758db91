#![no_main]

use digit_moments::dirichlet::KempnerConstantsStore;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(store) = KempnerConstantsStore::parse(text) {
        // whatever parses must be retrievable under its own key
        for c in store.iter() {
            assert!(store.get(c.base, &c.digits).is_some());
            assert!(c.error >= 0.0);
        }
    }
});
