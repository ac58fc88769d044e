use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{NetworkSpec, ParameterAssignment};
use crate::error::{Error, Result};
use crate::scalar::{float_to_rational, Mode, Scalar};
use crate::shape::Shape;
use crate::FORMAT_TAG;

/// Dense probability table over named discrete coordinates, row-major.
///
/// Used both for the full joint `θ_x` and for the observable table `θ_x'`;
/// the two differ only in which nodes index them.
#[derive(Debug, Clone, PartialEq)]
pub struct Table<T> {
    names: Vec<String>,
    shape: Shape,
    cells: Vec<T>,
}

pub type JointTable<T> = Table<T>;
pub type ObservableTable<T> = Table<T>;

#[derive(Serialize, Deserialize)]
struct TableDoc {
    format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mode: Option<Mode>,
    cards: Vec<usize>,
    observed: Vec<String>,
    cells: Vec<Value>,
}

impl<T: Scalar> Table<T> {
    /// Checked constructor: nonnegative cells with unit mass.
    pub fn new(names: Vec<String>, cards: Vec<usize>, cells: Vec<T>) -> Result<Self> {
        let table = Self::from_parts(names, cards, cells)?;
        if table.cells.iter().any(|c| *c < T::zero()) {
            return Err(Error::Table("negative cell".into()));
        }
        let mass = table.mass();
        if !mass.near(&T::one()) {
            return Err(Error::Table(format!("cells sum to {mass:?}, expected 1")));
        }
        Ok(table)
    }

    /// Shape-checked only; no simplex invariants.
    pub fn from_parts(names: Vec<String>, cards: Vec<usize>, cells: Vec<T>) -> Result<Self> {
        if names.len() != cards.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} names for {} coordinates",
                names.len(),
                cards.len()
            )));
        }
        let shape = Shape::new(cards);
        if cells.len() != shape.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} cells, shape {:?} needs {}",
                cells.len(),
                shape.cards(),
                shape.len()
            )));
        }
        Ok(Self { names, shape, cells })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn cards(&self) -> &[usize] {
        self.shape.cards()
    }

    pub fn cells(&self) -> &[T] {
        &self.cells
    }

    pub fn get(&self, index: &[usize]) -> Option<&T> {
        self.shape.linear(index).map(|id| &self.cells[id])
    }

    pub fn mass(&self) -> T {
        self.cells.iter().fold(T::zero(), |acc, c| acc + c.clone())
    }

    /// Univariate marginal along `axis`.
    pub fn marginal(&self, axis: usize) -> Vec<T> {
        let mut out = vec![T::zero(); self.shape.cards()[axis]];
        for (id, cell) in self.cells.iter().enumerate() {
            let i = (id / self.shape.strides()[axis]) % self.shape.cards()[axis];
            out[i] = out[i].clone() + cell.clone();
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Table<U> {
        Table {
            names: self.names.clone(),
            shape: self.shape.clone(),
            cells: self.cells.iter().map(f).collect(),
        }
    }

    pub fn to_float(&self) -> Table<f64> {
        self.map(Scalar::to_f64)
    }

    /// Outer product of univariate distributions.
    pub fn product(names: Vec<String>, marginals: &[Vec<T>]) -> Result<Self> {
        let cards = marginals.iter().map(Vec::len).collect::<Vec<_>>();
        let shape = Shape::new(cards.clone());
        let cells = shape
            .indices()
            .map(|idx| {
                idx.iter()
                    .zip(marginals)
                    .fold(T::one(), |acc, (&i, m)| acc * m[i].clone())
            })
            .collect();
        Self::new(names, cards, cells)
    }

    /// A uniform draw from the simplex (normalized standard exponentials),
    /// deterministic in `seed`. In rational mode the float draws are converted
    /// exactly before normalizing, so the mass is exactly one.
    pub fn random_simplex(names: Vec<String>, cards: Vec<usize>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n: usize = cards.iter().product();
        let draws: Vec<BigRational> = (0..n)
            .map(|_| {
                let u: f64 = rng.gen();
                let e = -(1.0 - u).ln();
                // ln(1 - u) is finite for u in [0, 1); e = 0 only when u = 0
                float_to_rational(e.max(f64::MIN_POSITIVE)).expect("finite draw")
            })
            .collect();
        let total = draws.iter().fold(BigRational::zero(), |acc, d| acc + d);
        let cells = draws.iter().map(|d| T::from_rational(&(d / &total))).collect();
        Self {
            names,
            shape: Shape::new(cards),
            cells,
        }
    }

    pub fn to_json(&self) -> String {
        let doc = TableDoc {
            format: FORMAT_TAG.to_string(),
            mode: Some(T::MODE),
            cards: self.shape.cards().to_vec(),
            observed: self.names.clone(),
            cells: self.cells.iter().map(Scalar::to_json).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("table serialization cannot fail")
    }
}

impl Table<f64> {
    /// `(1 − eps)·self + eps·other`, cellwise.
    pub fn mix(&self, other: &Table<f64>, eps: f64) -> Result<Table<f64>> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch("mixing tables of different shapes".into()));
        }
        Ok(Table {
            names: self.names.clone(),
            shape: self.shape.clone(),
            cells: self
                .cells
                .iter()
                .zip(&other.cells)
                .map(|(a, b)| (1.0 - eps) * a + eps * b)
                .collect(),
        })
    }
}

/// A table read from JSON in whichever mode it was written.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyTable {
    Rational(Table<BigRational>),
    Float(Table<f64>),
}

impl AnyTable {
    /// Parses a table document. The `mode` field wins; without it, string
    /// cells mean rational mode.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: TableDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.format != FORMAT_TAG {
            return Err(Error::Format(doc.format));
        }
        let mode = doc.mode.unwrap_or_else(|| {
            if doc.cells.iter().any(Value::is_string) {
                Mode::Rational
            } else {
                Mode::Float
            }
        });
        fn cells<T: Scalar>(raw: &[Value]) -> Result<Vec<T>> {
            raw.iter().map(T::from_json).collect()
        }
        Ok(match mode {
            Mode::Rational => AnyTable::Rational(Table::new(doc.observed, doc.cards, cells(&doc.cells)?)?),
            Mode::Float => AnyTable::Float(Table::new(doc.observed, doc.cards, cells(&doc.cells)?)?),
        })
    }

    pub fn mode(&self) -> Mode {
        match self {
            AnyTable::Rational(_) => Mode::Rational,
            AnyTable::Float(_) => Mode::Float,
        }
    }

    pub fn cards(&self) -> &[usize] {
        match self {
            AnyTable::Rational(t) => t.cards(),
            AnyTable::Float(t) => t.cards(),
        }
    }

    pub fn to_float(&self) -> Table<f64> {
        match self {
            AnyTable::Rational(t) => t.to_float(),
            AnyTable::Float(t) => t.clone(),
        }
    }

    /// Exact rational view; float cells convert to their exact binary values.
    pub fn to_rational(&self) -> Table<BigRational> {
        match self {
            AnyTable::Rational(t) => t.clone(),
            AnyTable::Float(t) => t.map(|&c| float_to_rational(c).unwrap_or_else(|_| BigRational::zero())),
        }
    }
}

/// `θ_x = ∏_i w[i][pa config of x][x_i]` over the full state space.
pub fn forward_map<T: Scalar>(net: &NetworkSpec, params: &ParameterAssignment<T>) -> JointTable<T> {
    let shape = net.full_shape();
    let cells = shape
        .indices()
        .map(|x| {
            (0..net.len()).fold(T::one(), |acc, i| {
                acc * params.get(i, net.parent_config(i, &x), x[i]).clone()
            })
        })
        .collect();
    Table {
        names: net.nodes().iter().map(|n| n.name.clone()).collect(),
        shape,
        cells,
    }
}

/// Sums out the coordinates listed in `hidden_positions`.
pub fn marginalize<T: Scalar>(table: &JointTable<T>, hidden_positions: &[usize]) -> Result<ObservableTable<T>> {
    let ndim = table.shape.ndim();
    if let Some(bad) = hidden_positions.iter().find(|&&h| h >= ndim) {
        return Err(Error::ShapeMismatch(format!(
            "position {bad} out of range for {ndim} coordinates"
        )));
    }
    let keep: Vec<usize> = (0..ndim).filter(|p| !hidden_positions.contains(p)).collect();
    let cards: Vec<usize> = keep.iter().map(|&p| table.shape.cards()[p]).collect();
    let out_shape = Shape::new(cards);
    let mut cells = vec![T::zero(); out_shape.len()];
    for (id, cell) in table.cells.iter().enumerate() {
        let full = table.shape.unravel(id);
        let mut target = 0;
        for (&p, &stride) in keep.iter().zip(out_shape.strides()) {
            target += full[p] * stride;
        }
        cells[target] = cells[target].clone() + cell.clone();
    }
    Ok(Table {
        names: keep.iter().map(|&p| table.names[p].clone()).collect(),
        shape: out_shape,
        cells,
    })
}

/// `marginalize(forward_map(net, params), hidden(net))`.
pub fn observable_distribution<T: Scalar>(net: &NetworkSpec, params: &ParameterAssignment<T>) -> ObservableTable<T> {
    marginalize(&forward_map(net, params), &net.hidden()).expect("hidden positions come from the network")
}
