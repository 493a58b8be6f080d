#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = slhnet::netdesc::parse(text) {
        // Anything accepted must survive a canonical round trip.
        let canon = slhnet::netdesc::serialize(&doc);
        let doc2 = slhnet::netdesc::parse(&canon).expect("canonical form must reparse");
        assert!(doc.structurally_equal(&doc2), "round trip changed the document");
    }
});
