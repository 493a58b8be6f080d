#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = slhnet::netdesc::parse(text) else { return };
    // Cap the grid and matrix sizes so one input cannot request an
    // unbounded amount of instantiation work.
    let grid: usize = doc.params.values().map(|p| p.grid_points.max(1)).product();
    if grid > 64 {
        return;
    }
    if doc.components.values().any(|c| c.n_modes > 4 || c.n_channels > 4) {
        return;
    }
    let _ = slhnet::netdesc::instantiate(&doc);
});
