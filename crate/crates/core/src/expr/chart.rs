use crate::error::{Error, Result};

/// Which fibre coordinates a chart carries next to `t` and `x1..xn`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChartKind {
    /// `(t, x1..xn, v1..vn)`: first-order kinematical states.
    Velocity,
    /// `(t, x1..xn, p1..pn)`: phase space.
    Momentum,
    /// `(t, x1..xn)`: extended configuration space, the base of contact fields.
    Configuration,
}

/// A local coordinate chart of dimension `n`.
///
/// Coordinates are laid out as `[t, x1..xn, fibre1..fibren]`; the fibre block
/// is absent on a configuration chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChartSpec {
    dimension: usize,
    kind: ChartKind,
}

impl ChartSpec {
    pub fn new(dimension: usize, kind: ChartKind) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidArgument("chart dimension must be at least 1".into()));
        }
        Ok(Self { dimension, kind })
    }

    /// Velocity chart of dimension `n`. Panics if `n == 0`.
    pub fn velocity(n: usize) -> Self {
        Self::new(n, ChartKind::Velocity).expect("positive dimension")
    }

    /// Momentum chart of dimension `n`. Panics if `n == 0`.
    pub fn momentum(n: usize) -> Self {
        Self::new(n, ChartKind::Momentum).expect("positive dimension")
    }

    /// Configuration chart of dimension `n`. Panics if `n == 0`.
    pub fn configuration(n: usize) -> Self {
        Self::new(n, ChartKind::Configuration).expect("positive dimension")
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn kind(&self) -> ChartKind {
        self.kind
    }

    /// Number of coordinates: `2n + 1`, or `n + 1` on a configuration chart.
    pub fn len(&self) -> usize {
        match self.kind {
            ChartKind::Configuration => self.dimension + 1,
            _ => 2 * self.dimension + 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time_index(&self) -> usize {
        0
    }

    /// Index of `x(i+1)`.
    pub fn x_index(&self, i: usize) -> usize {
        assert!(i < self.dimension, "x index out of range");
        1 + i
    }

    /// Index of `v(i+1)` or `p(i+1)`. Panics on a configuration chart.
    pub fn fiber_index(&self, i: usize) -> usize {
        assert!(self.kind != ChartKind::Configuration, "configuration chart has no fibre");
        assert!(i < self.dimension, "fibre index out of range");
        1 + self.dimension + i
    }

    fn fiber_prefix(&self) -> Option<char> {
        match self.kind {
            ChartKind::Velocity => Some('v'),
            ChartKind::Momentum => Some('p'),
            ChartKind::Configuration => None,
        }
    }

    pub fn coordinate_name(&self, index: usize) -> String {
        let n = self.dimension;
        match index {
            0 => "t".to_string(),
            i if i <= n => format!("x{i}"),
            i if i < self.len() => format!("{}{}", self.fiber_prefix().unwrap(), i - n),
            _ => panic!("coordinate index {index} out of range for chart of length {}", self.len()),
        }
    }

    pub fn coordinate_names(&self) -> Vec<String> {
        (0..self.len()).map(|i| self.coordinate_name(i)).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        if name == "t" {
            return Some(0);
        }
        let mut chars = name.chars();
        let head = chars.next()?;
        let digits = chars.as_str();
        if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let k: usize = digits.parse().ok()?;
        if k == 0 || k > self.dimension {
            return None;
        }
        if head == 'x' {
            Some(k)
        } else if Some(head) == self.fiber_prefix() {
            Some(self.dimension + k)
        } else {
            None
        }
    }

    /// Same dimension, configuration kind.
    pub fn base(&self) -> ChartSpec {
        ChartSpec { dimension: self.dimension, kind: ChartKind::Configuration }
    }
}
