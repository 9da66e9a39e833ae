/// Growable bit array over the nonnegative integers.
///
/// Storage doubles on growth. Reads past the allocation return `false`.
#[derive(Debug, Clone, Default)]
pub(crate) struct CoverageSieve {
    words: Vec<u64>,
}

impl CoverageSieve {
    pub(crate) fn new() -> Self {
        CoverageSieve { words: Vec::new() }
    }

    /// Makes bits `0..=bit` addressable without exceeding `cap_bytes`.
    pub(crate) fn reserve_through(&mut self, bit: u64, cap_bytes: usize) -> Result<(), String> {
        let needed = (bit / 64 + 1) as usize;
        if needed <= self.words.len() {
            return Ok(());
        }
        let doubled = (self.words.len() * 2).max(needed).max(16);
        let max_words = cap_bytes / 8;
        if needed > max_words {
            return Err(format!(
                "sieve needs {} bytes, cap is {cap_bytes}",
                needed * 8
            ));
        }
        self.words.resize(doubled.min(max_words), 0);
        Ok(())
    }

    #[inline]
    pub(crate) fn set(&mut self, bit: u64) {
        self.words[(bit >> 6) as usize] |= 1 << (bit & 63);
    }

    #[inline]
    pub(crate) fn get(&self, bit: u64) -> bool {
        self.words
            .get((bit >> 6) as usize)
            .is_some_and(|w| w >> (bit & 63) & 1 == 1)
    }

    /// Smallest clear bit strictly greater than `after`.
    pub(crate) fn next_clear_after(&self, after: u64) -> u64 {
        let start = after + 1;
        let mut idx = (start >> 6) as usize;
        if idx >= self.words.len() {
            return start;
        }
        // Treat bits below `start` in the first word as set.
        let mut word = self.words[idx] | ((1u64 << (start & 63)) - 1);
        loop {
            if word != u64::MAX {
                return ((idx as u64) << 6) + (!word).trailing_zeros() as u64;
            }
            idx += 1;
            if idx >= self.words.len() {
                return (idx as u64) << 6;
            }
            word = self.words[idx];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_and_scan() {
        let mut s = CoverageSieve::new();
        s.reserve_through(200, usize::MAX).unwrap();
        for b in [0, 1, 2, 63, 64, 65, 130] {
            s.set(b);
        }
        assert!(s.get(64) && !s.get(3) && !s.get(10_000));
        assert_eq!(s.next_clear_after(0), 3);
        assert_eq!(s.next_clear_after(62), 66);
        assert_eq!(s.next_clear_after(129), 131);
        for b in 0..256 {
            s.set(b);
        }
        assert_eq!(s.next_clear_after(5), 256);
    }

    #[test]
    fn cap_is_enforced() {
        let mut s = CoverageSieve::new();
        assert!(s.reserve_through(8 * 64 - 1, 64).is_ok());
        assert!(s.reserve_through(8 * 64, 64).is_err());
    }
}
