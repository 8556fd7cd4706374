use super::{LinearSketch, SketchError};

/// Net number of live keys.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CounterSketch {
    pub count: i64,
}

impl CounterSketch {
    pub fn new() -> Self {
        Self::default()
    }
}

impl LinearSketch for CounterSketch {
    fn update(&mut self, _key: u64, delta: i64) {
        self.count += delta;
    }

    fn merge_from(&mut self, other: &Self) -> Result<(), SketchError> {
        self.count += other.count;
        Ok(())
    }

    fn is_zero(&self) -> bool {
        self.count == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_net_updates() {
        let mut c = CounterSketch::new();
        for k in [3, 8, 11] {
            c.update(k, 1);
        }
        assert_eq!(c.count, 3);
        c.update(8, -1);
        assert_eq!(c.count, 2);
    }
}
