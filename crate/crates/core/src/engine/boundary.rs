/// Whole-sample symmetric extension: `-1 → 1`, `size → size - 2`.
///
/// Periodic with period `2·(size - 1)`, so any index maps into
/// `0..size`. A single-sample axis maps everything to 0.
pub fn extend(index: i64, size: usize) -> usize {
    assert!(size >= 1, "extend needs a non-empty axis");
    if size == 1 {
        return 0;
    }
    let period = 2 * (size as i64 - 1);
    let r = index.rem_euclid(period);
    if r < size as i64 {
        r as usize
    } else {
        (period - r) as usize
    }
}

/// Reflects a polyphase index: sample `2q + parity` of an axis holding
/// `count` samples of each phase. Symmetric extension preserves parity, so
/// the result indexes the same phase.
pub(crate) fn reflect_phase(q: i64, parity: usize, count: usize) -> usize {
    extend(2 * q + parity as i64, 2 * count) / 2
}
