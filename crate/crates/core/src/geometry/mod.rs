//! Charts, dense tensor fields, and the metric with its exact inverse.
//!
//! Components are stored densely in row-major order; a rank-r field on an
//! n-dimensional chart holds n^r expressions. Slot bookkeeping is by
//! position, with an explicit covariant/contravariant valence per slot.

mod metric;

use std::fmt;

pub use metric::MetricField;

use crate::expr::{parse_expression, Expression, ParseError, Rat, Vars};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeomError {
    BadCoordinateName(String),
    DimensionMismatch { expected: usize, got: usize },
    NotSymmetric { i: usize, j: usize },
    SingularMetric,
    ProbeOnPole,
    DegenerateAtProbe,
    NotLorentzian { negative_directions: usize },
}

impl fmt::Display for GeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeomError::BadCoordinateName(n) => write!(f, "bad coordinate name {n:?}"),
            GeomError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            GeomError::NotSymmetric { i, j } => {
                write!(f, "metric components ({i},{j}) and ({j},{i}) differ")
            }
            GeomError::SingularMetric => write!(f, "metric determinant is identically zero"),
            GeomError::ProbeOnPole => write!(f, "a metric component has a pole at the probe point"),
            GeomError::DegenerateAtProbe => {
                write!(f, "metric is numerically degenerate at the probe point")
            }
            GeomError::NotLorentzian { negative_directions } => write!(
                f,
                "metric is not Lorentzian at the probe point ({negative_directions} negative directions)"
            ),
        }
    }
}

impl std::error::Error for GeomError {}

/// Coordinate chart: an ordered list of named coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    vars: Vars,
}

impl Chart {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Chart, GeomError> {
        if names.is_empty() {
            return Err(GeomError::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        for n in names {
            let n = n.as_ref();
            let mut chars = n.chars();
            let head_ok = chars
                .next()
                .map_or(false, |c| c.is_ascii_alphabetic() || c == '_');
            if !head_ok || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(GeomError::BadCoordinateName(n.to_string()));
            }
        }
        for (i, a) in names.iter().enumerate() {
            for b in &names[..i] {
                if a.as_ref() == b.as_ref() {
                    return Err(GeomError::BadCoordinateName(a.as_ref().to_string()));
                }
            }
        }
        Ok(Chart {
            vars: Vars::new(names.iter().map(|s| s.as_ref().to_string())),
        })
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn coord_name(&self, i: usize) -> &str {
        self.vars.name(i)
    }

    pub fn var(&self, i: usize) -> Expression {
        Expression::variable(&self.vars, i)
    }

    pub fn zero(&self) -> Expression {
        Expression::zero(&self.vars)
    }

    pub fn one(&self) -> Expression {
        Expression::one(&self.vars)
    }

    pub fn int(&self, n: i64) -> Expression {
        Expression::int(&self.vars, n)
    }

    pub fn rational(&self, num: i64, den: i64) -> Expression {
        Expression::rational(&self.vars, num, den)
    }

    pub fn parse(&self, src: &str) -> Result<Expression, ParseError> {
        parse_expression(src, &self.vars)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotKind {
    Covariant,
    Contravariant,
}

impl SlotKind {
    pub fn flip(self) -> SlotKind {
        match self {
            SlotKind::Covariant => SlotKind::Contravariant,
            SlotKind::Contravariant => SlotKind::Covariant,
        }
    }
}

pub use SlotKind::{Contravariant, Covariant};

/// Visit every multi-index of the given rank in row-major order.
pub fn for_each_index(dim: usize, rank: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; rank];
    loop {
        f(&idx);
        let mut k = rank;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < dim {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Dense tensor field on a chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorField {
    chart: Chart,
    valence: Vec<SlotKind>,
    comps: Vec<Expression>,
}

impl TensorField {
    pub fn from_fn(
        chart: &Chart,
        valence: &[SlotKind],
        mut f: impl FnMut(&[usize]) -> Expression,
    ) -> TensorField {
        let n = chart.dim();
        let mut comps = Vec::with_capacity(n.pow(valence.len() as u32));
        for_each_index(n, valence.len(), |idx| comps.push(f(idx)));
        TensorField {
            chart: chart.clone(),
            valence: valence.to_vec(),
            comps,
        }
    }

    pub fn zero(chart: &Chart, valence: &[SlotKind]) -> TensorField {
        let n = chart.dim();
        let comps = vec![chart.zero(); n.pow(valence.len() as u32)];
        TensorField {
            chart: chart.clone(),
            valence: valence.to_vec(),
            comps,
        }
    }

    /// Build from a prefilled row-major component vector.
    pub(crate) fn from_components(
        chart: &Chart,
        valence: &[SlotKind],
        comps: Vec<Expression>,
    ) -> TensorField {
        assert_eq!(comps.len(), chart.dim().pow(valence.len() as u32));
        TensorField {
            chart: chart.clone(),
            valence: valence.to_vec(),
            comps,
        }
    }

    pub fn scalar(chart: &Chart, value: Expression) -> TensorField {
        TensorField {
            chart: chart.clone(),
            valence: Vec::new(),
            comps: vec![value],
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn rank(&self) -> usize {
        self.valence.len()
    }

    pub fn valence(&self) -> &[SlotKind] {
        &self.valence
    }

    fn flat(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        let n = self.chart.dim();
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < n);
            acc * n + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> &Expression {
        &self.comps[self.flat(idx)]
    }

    pub fn as_scalar(&self) -> &Expression {
        assert_eq!(self.rank(), 0, "not a scalar field");
        &self.comps[0]
    }

    pub fn components(&self) -> &[Expression] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Expression::is_zero)
    }

    /// First nonzero component in row-major index order, if any.
    pub fn first_nonzero(&self) -> Option<(Vec<usize>, &Expression)> {
        let n = self.chart.dim();
        let rank = self.rank();
        let pos = self.comps.iter().position(|c| !c.is_zero())?;
        let mut idx = vec![0usize; rank];
        let mut rem = pos;
        for k in (0..rank).rev() {
            idx[k] = rem % n;
            rem /= n;
        }
        Some((idx, &self.comps[pos]))
    }

    fn check_same_shape(&self, rhs: &TensorField) {
        assert_eq!(self.chart, rhs.chart, "tensors on different charts");
        assert_eq!(self.valence, rhs.valence, "tensor valence mismatch");
    }

    pub fn add(&self, rhs: &TensorField) -> TensorField {
        self.check_same_shape(rhs);
        let comps = self
            .comps
            .iter()
            .zip(&rhs.comps)
            .map(|(a, b)| a.add(b))
            .collect();
        TensorField {
            chart: self.chart.clone(),
            valence: self.valence.clone(),
            comps,
        }
    }

    pub fn sub(&self, rhs: &TensorField) -> TensorField {
        self.check_same_shape(rhs);
        let comps = self
            .comps
            .iter()
            .zip(&rhs.comps)
            .map(|(a, b)| a.sub(b))
            .collect();
        TensorField {
            chart: self.chart.clone(),
            valence: self.valence.clone(),
            comps,
        }
    }

    pub fn neg(&self) -> TensorField {
        let comps = self.comps.iter().map(Expression::neg).collect();
        TensorField {
            chart: self.chart.clone(),
            valence: self.valence.clone(),
            comps,
        }
    }

    pub fn scale(&self, factor: &Expression) -> TensorField {
        let comps = self.comps.iter().map(|c| c.mul(factor)).collect();
        TensorField {
            chart: self.chart.clone(),
            valence: self.valence.clone(),
            comps,
        }
    }

    pub fn scale_int(&self, n: i64) -> TensorField {
        self.scale(&self.chart.int(n))
    }

    /// Outer product; the right factor's slots follow the left's.
    pub fn outer(&self, rhs: &TensorField) -> TensorField {
        assert_eq!(self.chart, rhs.chart, "tensors on different charts");
        let mut valence = self.valence.clone();
        valence.extend_from_slice(&rhs.valence);
        let mut comps = Vec::with_capacity(self.comps.len() * rhs.comps.len());
        for a in &self.comps {
            for b in &rhs.comps {
                comps.push(a.mul(b));
            }
        }
        TensorField {
            chart: self.chart.clone(),
            valence,
            comps,
        }
    }

    /// Natural contraction of two slots of opposite valence.
    pub fn contract(&self, a: usize, b: usize) -> TensorField {
        assert!(a != b, "cannot contract a slot with itself");
        assert!(
            self.valence[a] != self.valence[b],
            "contraction requires opposite valences; mediate same-valence pairs through the metric"
        );
        let (lo, hi) = (a.min(b), a.max(b));
        let n = self.chart.dim();
        let mut valence = self.valence.clone();
        valence.remove(hi);
        valence.remove(lo);
        TensorField::from_fn(&self.chart, &valence, |idx| {
            let mut full = vec![0usize; self.rank()];
            let mut src = idx.iter();
            for (pos, slot) in full.iter_mut().enumerate() {
                if pos != lo && pos != hi {
                    *slot = *src.next().unwrap();
                }
            }
            let mut acc = self.chart.zero();
            for rho in 0..n {
                full[lo] = rho;
                full[hi] = rho;
                let c = self.get(&full);
                if !c.is_zero() {
                    acc = acc.add(c);
                }
            }
            acc
        })
    }

    /// Swap two slots.
    pub fn swap_slots(&self, a: usize, b: usize) -> TensorField {
        if a == b {
            return self.clone();
        }
        let mut valence = self.valence.clone();
        valence.swap(a, b);
        TensorField::from_fn(&self.chart, &valence, |idx| {
            let mut src = idx.to_vec();
            src.swap(a, b);
            self.get(&src).clone()
        })
    }

    fn permute_sum(&self, slots: &[usize], signed: bool) -> TensorField {
        for w in slots.windows(2) {
            assert!(w[0] < w[1], "slot list must be strictly increasing");
        }
        let kind = self.valence[slots[0]];
        assert!(
            slots.iter().all(|&s| self.valence[s] == kind),
            "cannot mix valences in a symmetrization group"
        );
        let k = slots.len();
        let perms = signed_permutations(k);
        let factorial: i64 = (1..=k as i64).product();
        let weight = Expression::rational(self.chart.vars(), 1, factorial);
        TensorField::from_fn(&self.chart, &self.valence, |idx| {
            let mut acc = self.chart.zero();
            let mut src = idx.to_vec();
            for (perm, odd) in &perms {
                for (slot_pos, &p) in perm.iter().enumerate() {
                    src[slots[slot_pos]] = idx[slots[p]];
                }
                let c = self.get(&src);
                if c.is_zero() {
                    continue;
                }
                acc = if signed && *odd {
                    acc.sub(c)
                } else {
                    acc.add(c)
                };
            }
            acc.mul(&weight)
        })
    }

    /// Symmetrize over the given strictly increasing slot positions, with the
    /// conventional 1/k! weight.
    pub fn symmetrize(&self, slots: &[usize]) -> TensorField {
        self.permute_sum(slots, false)
    }

    /// Antisymmetrize over the given strictly increasing slot positions, with
    /// the conventional 1/k! weight.
    pub fn antisymmetrize(&self, slots: &[usize]) -> TensorField {
        self.permute_sum(slots, true)
    }

    /// Coordinate partial derivative, prepending one covariant slot.
    pub fn partial_derivative(&self) -> TensorField {
        let mut valence = vec![Covariant];
        valence.extend_from_slice(&self.valence);
        TensorField::from_fn(&self.chart, &valence, |idx| {
            self.get(&idx[1..]).differentiate(idx[0])
        })
    }

    /// Exact evaluation of all components at a rational point, row-major.
    pub fn eval_at(&self, point: &[Rat]) -> Result<Vec<Rat>, GeomError> {
        self.comps
            .iter()
            .map(|c| c.eval(point).map_err(|_| GeomError::ProbeOnPole))
            .collect()
    }
}

/// All permutations of 0..k, each tagged with whether it is odd.
fn signed_permutations(k: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, bool)>) {
        if rest.is_empty() {
            let mut inversions = 0usize;
            for i in 0..prefix.len() {
                for j in i + 1..prefix.len() {
                    if prefix[i] > prefix[j] {
                        inversions += 1;
                    }
                }
            }
            out.push((prefix.clone(), inversions % 2 == 1));
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            prefix.push(v);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..k).collect(), &mut out);
    out
}

/// Covariant derivative with the given connection coefficients
/// (valence `[Contravariant, Covariant, Covariant]`, symmetric in the lower
/// pair). The derivative index becomes the new leading covariant slot.
pub fn covariant_derivative(t: &TensorField, gamma: &TensorField) -> TensorField {
    assert_eq!(gamma.valence(), &[Contravariant, Covariant, Covariant]);
    assert_eq!(
        t.chart(),
        gamma.chart(),
        "tensor and connection on different charts"
    );
    let n = t.chart().dim();
    let mut valence = vec![Covariant];
    valence.extend_from_slice(t.valence());
    if t.is_zero() {
        return TensorField::zero(t.chart(), &valence);
    }
    let chart = t.chart().clone();
    TensorField::from_fn(&chart, &valence, |idx| {
        let mu = idx[0];
        let inner = &idx[1..];
        let mut acc = t.get(inner).differentiate(mu);
        let mut scratch = inner.to_vec();
        for (k, &kind) in t.valence().iter().enumerate() {
            let a = inner[k];
            for rho in 0..n {
                scratch[k] = rho;
                let tc = t.get(&scratch);
                if tc.is_zero() {
                    continue;
                }
                let g = match kind {
                    Contravariant => gamma.get(&[a, mu, rho]),
                    Covariant => gamma.get(&[rho, mu, a]),
                };
                if g.is_zero() {
                    continue;
                }
                let term = g.mul(tc);
                acc = match kind {
                    Contravariant => acc.add(&term),
                    Covariant => acc.sub(&term),
                };
            }
            scratch[k] = a;
        }
        acc
    })
}

#[cfg(test)]
mod tests;
