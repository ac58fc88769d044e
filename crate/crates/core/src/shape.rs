//! Row-major multi-index bookkeeping shared by tables, indeterminates and
//! flattenings. The last coordinate varies fastest.

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Shape {
    cards: Vec<usize>,
    strides: Vec<usize>,
    len: usize,
}

impl Shape {
    pub fn new(cards: Vec<usize>) -> Self {
        let mut strides = vec![0; cards.len()];
        let mut acc = 1usize;
        for (stride, &card) in strides.iter_mut().zip(&cards).rev() {
            *stride = acc;
            acc *= card;
        }
        Self {
            cards,
            strides,
            len: acc,
        }
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn ndim(&self) -> usize {
        self.cards.len()
    }

    /// Number of cells, the product of the cardinalities (1 for an empty shape).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Linear id of `index`; `None` if the rank or a coordinate is out of range.
    pub fn linear(&self, index: &[usize]) -> Option<usize> {
        if index.len() != self.cards.len() {
            return None;
        }
        let mut id = 0;
        for ((&i, &card), &stride) in index.iter().zip(&self.cards).zip(&self.strides) {
            if i >= card {
                return None;
            }
            id += i * stride;
        }
        Some(id)
    }

    pub fn unravel(&self, mut id: usize) -> Vec<usize> {
        debug_assert!(id < self.len);
        self.strides
            .iter()
            .map(|&stride| {
                let i = id / stride;
                id %= stride;
                i
            })
            .collect()
    }

    /// All multi-indices in linear order.
    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.len).map(move |id| self.unravel(id))
    }
}
