#![no_main]

use libfuzzer_sys::fuzz_target;
use timelink::BitString;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = text.parse::<BitString>() {
        let shown = x.to_string();
        assert_eq!(shown.parse::<BitString>().unwrap(), x);
        assert_eq!(x.count_ones() + x.count_zeros(), x.len());
    }
});
