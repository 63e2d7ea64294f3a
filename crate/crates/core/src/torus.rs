//! Torus data model and the independent verifier.
//!
//! A torus is a Cartesian product of cycles; a [`Walk`] is a start vertex
//! plus a sequence of signed dimension steps. The verifier checks
//! Hamiltonicity and measures run length from first principles: it never
//! trusts facts supplied by the construction that produced the walk.
//!
//! Run length is the largest `r` such that every window of `r` consecutive
//! steps contains at most one step per dimension; it is computed from the
//! minimum cyclic (or linear, for open walks) gap between same-dimension
//! occurrences. The generalization counting up to `j` steps per dimension is
//! [`j_variance_word`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A product of cycles: one size and one directedness flag per dimension.
///
/// Sizes are at least 2 and there is at least one dimension. A directed
/// dimension admits only forward (+1) steps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusSpec {
    sizes: Vec<usize>,
    directed: Vec<bool>,
}

impl TorusSpec {
    pub fn new(sizes: Vec<usize>, directed: Vec<bool>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidTorus("at least one dimension required".into()));
        }
        if sizes.len() != directed.len() {
            return Err(Error::InvalidTorus(format!(
                "{} sizes but {} directedness flags",
                sizes.len(),
                directed.len()
            )));
        }
        if let Some(&bad) = sizes.iter().find(|&&s| s < 2) {
            return Err(Error::InvalidTorus(format!("dimension size {bad} < 2")));
        }
        Ok(Self { sizes, directed })
    }

    /// An undirected torus with the given sizes.
    pub fn undirected(sizes: Vec<usize>) -> Result<Self> {
        let n = sizes.len();
        Self::new(sizes, vec![false; n])
    }

    /// A torus with every dimension directed.
    pub fn fully_directed(sizes: Vec<usize>) -> Result<Self> {
        let n = sizes.len();
        Self::new(sizes, vec![true; n])
    }

    /// Number of dimensions `k`.
    pub fn dim_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size(&self, dim: usize) -> usize {
        self.sizes[dim]
    }

    pub fn directed_flags(&self) -> &[bool] {
        &self.directed
    }

    pub fn is_directed(&self, dim: usize) -> bool {
        self.directed[dim]
    }

    /// Total number of vertices, i.e. the product of all sizes.
    pub fn vertex_count(&self) -> usize {
        self.sizes.iter().product()
    }

    /// Concatenation of two tori into one with the dimensions of `self`
    /// followed by the dimensions of `other`.
    pub fn concat(&self, other: &TorusSpec) -> TorusSpec {
        let mut sizes = self.sizes.clone();
        sizes.extend_from_slice(&other.sizes);
        let mut directed = self.directed.clone();
        directed.extend_from_slice(&other.directed);
        TorusSpec { sizes, directed }
    }

    /// Appends one extra cycle dimension of size `m`.
    pub fn with_extra_dim(&self, m: usize, dir: bool) -> Result<TorusSpec> {
        let mut sizes = self.sizes.clone();
        sizes.push(m);
        let mut directed = self.directed.clone();
        directed.push(dir);
        TorusSpec::new(sizes, directed)
    }

    /// Mixed-radix rank of a coordinate tuple. Internal: vertex identity is
    /// the coordinate tuple, not this rank.
    pub(crate) fn index_of(&self, coords: &[usize]) -> usize {
        let mut idx = 0;
        for (c, s) in coords.iter().zip(&self.sizes) {
            idx = idx * s + c;
        }
        idx
    }
}

/// A vertex of a torus, identified by its coordinate tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    coords: Vec<usize>,
}

impl Vertex {
    pub fn new(coords: Vec<usize>) -> Self {
        Self { coords }
    }

    /// The all-zero vertex of `spec`.
    pub fn origin(spec: &TorusSpec) -> Self {
        Self { coords: vec![0; spec.dim_count()] }
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    fn check(&self, spec: &TorusSpec) -> Result<()> {
        if self.coords.len() != spec.dim_count() {
            return Err(Error::InvalidTorus(format!(
                "vertex has {} coordinates on a {}-dimensional torus",
                self.coords.len(),
                spec.dim_count()
            )));
        }
        for (dim, (&c, &s)) in self.coords.iter().zip(spec.sizes()).enumerate() {
            if c >= s {
                return Err(Error::CoordinateOutOfRange { dim, coord: c, size: s });
            }
        }
        Ok(())
    }
}

impl From<Vec<usize>> for Vertex {
    fn from(coords: Vec<usize>) -> Self {
        Self::new(coords)
    }
}

/// One edge traversal: a dimension index and a direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub dim: usize,
    pub sign: i8,
}

impl Step {
    pub fn forward(dim: usize) -> Self {
        Self { dim, sign: 1 }
    }

    pub fn backward(dim: usize) -> Self {
        Self { dim, sign: -1 }
    }
}

/// A walk on a torus: a start vertex plus an ordered list of steps.
///
/// Construction validates well-formedness: coordinates in range, step
/// dimensions in range, signs respecting directedness, and — for walks
/// declared closed — that the trace returns to the start vertex. Defects
/// beyond well-formedness (revisits, missed vertices) are the verifier's
/// business, not the constructor's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    torus: TorusSpec,
    start: Vertex,
    steps: Vec<Step>,
    closed: bool,
}

/// What the verifier found. `is_hamiltonian` implies `is_closed`, no
/// duplicate vertex, and `missing_count == 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub is_closed: bool,
    pub is_hamiltonian: bool,
    pub run_length: usize,
    pub duplicate_vertex: Option<Vertex>,
    pub missing_count: usize,
}

impl Walk {
    pub fn new(torus: TorusSpec, start: Vertex, steps: Vec<Step>, closed: bool) -> Result<Self> {
        start.check(&torus)?;
        let k = torus.dim_count();
        for step in &steps {
            if step.dim >= k {
                return Err(Error::DimensionOutOfRange { dim: step.dim, dims: k });
            }
            if step.sign != 1 && step.sign != -1 {
                return Err(Error::InvalidStepSign { sign: step.sign });
            }
            if torus.is_directed(step.dim) && step.sign == -1 {
                return Err(Error::DirectedViolation { dim: step.dim });
            }
        }
        let walk = Self { torus, start, steps, closed };
        if closed {
            let mut coords = walk.start.coords().to_vec();
            for step in &walk.steps {
                advance(&mut coords, step, &walk.torus);
            }
            if coords != walk.start.coords() {
                return Err(Error::NotClosed);
            }
        }
        Ok(walk)
    }

    pub fn torus(&self) -> &TorusSpec {
        &self.torus
    }

    pub fn start(&self) -> &Vertex {
        &self.start
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// The sequence of dimension indices traversed, ignoring signs.
    pub fn dim_word(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.dim).collect()
    }

    /// The vertex sequence: element 0 is the start, element `t + 1` is
    /// element `t` advanced by step `t`. Has `step_count() + 1` elements;
    /// for closed walks the last equals the first.
    pub fn trace(&self) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut coords = self.start.coords().to_vec();
        out.push(self.start.clone());
        for step in &self.steps {
            advance(&mut coords, step, &self.torus);
            out.push(Vertex::new(coords.clone()));
        }
        out
    }

    /// Full independent check: closedness, Hamiltonicity (exactly `|G|`
    /// steps visiting each vertex exactly once), and measured run length.
    /// Defects are reported, never raised.
    pub fn verify(&self) -> VerifyReport {
        let n = self.torus.vertex_count();
        let trace = self.trace();
        // For closed walks the final vertex repeats the start by
        // construction; skip it so it does not count as a duplicate.
        let visit_count = if self.closed { trace.len() - 1 } else { trace.len() };
        let mut seen = vec![false; n];
        let mut duplicate_vertex = None;
        let mut distinct = 0usize;
        for v in &trace[..visit_count] {
            let idx = self.torus.index_of(v.coords());
            if seen[idx] {
                if duplicate_vertex.is_none() {
                    duplicate_vertex = Some(v.clone());
                }
            } else {
                seen[idx] = true;
                distinct += 1;
            }
        }
        let missing_count = n - distinct;
        let is_hamiltonian = self.closed
            && self.steps.len() == n
            && duplicate_vertex.is_none()
            && missing_count == 0;
        VerifyReport {
            is_closed: self.closed,
            is_hamiltonian,
            run_length: self.run_length(),
            duplicate_vertex,
            missing_count,
        }
    }

    /// Maximum `r` such that every window of `r` consecutive steps contains
    /// at most one step per dimension. Cyclic windows for closed walks,
    /// linear for open ones; capped at the step count.
    pub fn run_length(&self) -> usize {
        run_length_word(&self.dim_word(), self.closed)
    }

    /// Maximum `r` such that every window of `r` consecutive steps contains
    /// at most `j` steps per dimension. `j_variance(1)` equals `run_length`.
    pub fn j_variance(&self, j: usize) -> usize {
        j_variance_word(&self.dim_word(), self.closed, j)
    }

    /// Mirrors the walk about the mid-line of `dim`: the start coordinate
    /// maps to `size - 1 - c` and every step in `dim` flips sign. Preserves
    /// Hamiltonicity and run length.
    pub fn reflect(&self, dim: usize) -> Result<Walk> {
        let k = self.torus.dim_count();
        if dim >= k {
            return Err(Error::DimensionOutOfRange { dim, dims: k });
        }
        if self.torus.is_directed(dim) {
            return Err(Error::DirectedViolation { dim });
        }
        let mut coords = self.start.coords().to_vec();
        coords[dim] = self.torus.size(dim) - 1 - coords[dim];
        let steps = self
            .steps
            .iter()
            .map(|s| if s.dim == dim { Step { dim: s.dim, sign: -s.sign } } else { *s })
            .collect();
        Walk::new(self.torus.clone(), Vertex::new(coords), steps, self.closed)
    }

    /// Shifts the start coordinate of `dim` by `amount` modulo the size.
    /// Steps are unchanged; Hamiltonicity and run length are preserved.
    pub fn translate(&self, dim: usize, amount: i64) -> Result<Walk> {
        let k = self.torus.dim_count();
        if dim >= k {
            return Err(Error::DimensionOutOfRange { dim, dims: k });
        }
        let size = self.torus.size(dim) as i64;
        let mut coords = self.start.coords().to_vec();
        coords[dim] = (coords[dim] as i64 + amount).rem_euclid(size) as usize;
        Walk::new(self.torus.clone(), Vertex::new(coords), self.steps.clone(), self.closed)
    }
}

pub(crate) fn advance(coords: &mut [usize], step: &Step, spec: &TorusSpec) {
    let size = spec.size(step.dim);
    let c = coords[step.dim];
    coords[step.dim] = if step.sign >= 0 {
        if c + 1 == size {
            0
        } else {
            c + 1
        }
    } else if c == 0 {
        size - 1
    } else {
        c - 1
    };
}

/// Run length of a dimension word: the minimum gap between consecutive
/// same-dimension occurrences (cyclic for closed words), capped at the word
/// length. Dimensions occurring at most once contribute the cap. Returns 0
/// for the empty word.
pub fn run_length_word(word: &[usize], closed: bool) -> usize {
    j_variance_word(word, closed, 1)
}

/// `j`-variance of a dimension word: the largest `r` such that every window
/// of `r` consecutive positions (cyclic if `closed`) holds at most `j`
/// occurrences of each dimension. Equals the minimum, over dimensions with
/// more than `j` occurrences, of the span covered by `j + 1` consecutive
/// occurrences, minus one; capped at the word length.
pub fn j_variance_word(word: &[usize], closed: bool, j: usize) -> usize {
    let n = word.len();
    if n == 0 {
        return 0;
    }
    assert!(j >= 1, "j-variance requires j >= 1");
    let dims = word.iter().copied().max().unwrap() + 1;
    let mut positions: Vec<Vec<usize>> = vec![Vec::new(); dims];
    for (i, &d) in word.iter().enumerate() {
        positions[d].push(i);
    }
    let mut best = n;
    for pos in positions.iter().filter(|p| p.len() > j) {
        let t = pos.len();
        if closed {
            for i in 0..t {
                let a = pos[i];
                let (wrapped, b) = if i + j < t { (false, pos[i + j]) } else { (true, pos[i + j - t]) };
                let span = if wrapped { b + n - a } else { b - a };
                best = best.min(span);
            }
        } else {
            for i in 0..t - j {
                best = best.min(pos[i + j] - pos[i]);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn undirected(sizes: &[usize]) -> TorusSpec {
        TorusSpec::undirected(sizes.to_vec()).unwrap()
    }

    fn walk(sizes: &[usize], steps: Vec<Step>, closed: bool) -> Walk {
        let spec = undirected(sizes);
        let start = Vertex::origin(&spec);
        Walk::new(spec, start, steps, closed).unwrap()
    }

    /// The 4-step alternating cycle on the 2x2 torus.
    fn square_cycle() -> Walk {
        walk(
            &[2, 2],
            vec![Step::forward(0), Step::forward(1), Step::forward(0), Step::forward(1)],
            true,
        )
    }

    /// Literal all-windows oracle, independent of the gap-based computation.
    fn naive_window_variance(word: &[usize], closed: bool, j: usize) -> usize {
        let n = word.len();
        let dims = word.iter().copied().max().map_or(1, |d| d + 1);
        'outer: for r in (1..=n).rev() {
            let starts: Vec<usize> = if closed { (0..n).collect() } else { (0..=n - r).collect() };
            for s in starts {
                let mut counts = vec![0usize; dims];
                for t in 0..r {
                    let d = word[(s + t) % n];
                    counts[d] += 1;
                    if counts[d] > j {
                        continue 'outer;
                    }
                }
            }
            return r;
        }
        0
    }

    #[test]
    fn trace_square_cycle() {
        let w = square_cycle();
        let coords: Vec<Vec<usize>> = w.trace().iter().map(|v| v.coords().to_vec()).collect();
        assert_eq!(
            coords,
            vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1], vec![0, 0]]
        );
    }

    #[test]
    fn trace_size_two_wraparound() {
        let w = walk(&[2, 2], vec![Step::forward(0), Step::forward(0)], true);
        let coords: Vec<Vec<usize>> = w.trace().iter().map(|v| v.coords().to_vec()).collect();
        assert_eq!(coords, vec![vec![0, 0], vec![1, 0], vec![0, 0]]);
    }

    #[test]
    fn trace_interleaved_4x2() {
        let steps: Vec<Step> =
            (0..4).flat_map(|_| [Step::forward(0), Step::forward(1)]).collect();
        let w = walk(&[4, 2], steps, true);
        let trace = w.trace();
        assert_eq!(trace.len(), 9);
        assert_eq!(trace[0], trace[8]);
        let mut seen: Vec<Vec<usize>> = trace[..8].iter().map(|v| v.coords().to_vec()).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 8, "closed trace must visit all 8 vertices");
    }

    #[test]
    fn directed_dimension_rejects_backward_steps() {
        let spec = TorusSpec::fully_directed(vec![3]).unwrap();
        let start = Vertex::origin(&spec);
        let err = Walk::new(spec, start, vec![Step::backward(0)], false).unwrap_err();
        assert!(matches!(err, Error::DirectedViolation { dim: 0 }));
    }

    #[test]
    fn closed_walk_must_return_to_start() {
        let spec = undirected(&[3, 3]);
        let start = Vertex::origin(&spec);
        let err = Walk::new(spec, start, vec![Step::forward(0)], true).unwrap_err();
        assert!(matches!(err, Error::NotClosed));
    }

    #[test]
    fn verify_square_cycle_is_hamiltonian() {
        let report = square_cycle().verify();
        assert!(report.is_closed);
        assert!(report.is_hamiltonian);
        assert_eq!(report.run_length, 2);
        assert_eq!(report.duplicate_vertex, None);
        assert_eq!(report.missing_count, 0);
    }

    #[test]
    fn verify_short_cycle_is_not_hamiltonian() {
        let w = walk(&[2, 2], vec![Step::forward(0), Step::forward(0)], true);
        let report = w.verify();
        assert!(report.is_closed);
        assert!(!report.is_hamiltonian);
        assert_eq!(report.missing_count, 2);
    }

    #[test]
    fn verify_reports_duplicate_vertex() {
        // Nine closed steps on [3,3] that revisit the start column.
        let steps = vec![
            Step::forward(0),
            Step::forward(0),
            Step::forward(0),
            Step::forward(1),
            Step::forward(1),
            Step::forward(1),
            Step::forward(0),
            Step::forward(0),
            Step::forward(0),
        ];
        let w = walk(&[3, 3], steps, true);
        let report = w.verify();
        assert!(!report.is_hamiltonian);
        assert_eq!(report.duplicate_vertex, Some(Vertex::new(vec![0, 0])));
    }

    #[test]
    fn run_length_examples() {
        assert_eq!(run_length_word(&[0, 1, 0, 1], true), 2);
        assert_eq!(run_length_word(&[0, 0, 1], true), 1);
        // Minimum same-dimension cyclic gap is 4 (checked against the naive
        // all-windows oracle below as well).
        assert_eq!(run_length_word(&[2, 3, 4, 0, 2, 3, 4, 1], true), 4);
        assert_eq!(naive_window_variance(&[2, 3, 4, 0, 2, 3, 4, 1], true, 1), 4);
    }

    #[test]
    fn run_length_open_vs_closed() {
        // Open walks use linear windows: the wrap-around pair does not count.
        assert_eq!(run_length_word(&[0, 1, 0], true), 1);
        assert_eq!(run_length_word(&[0, 1, 0], false), 2);
    }

    #[test]
    fn j_variance_examples() {
        assert_eq!(j_variance_word(&[0, 1, 0, 1], true, 2), 4);
        assert_eq!(j_variance_word(&[0, 0, 1], true, 2), 3);
        let w = square_cycle();
        assert_eq!(w.j_variance(1), w.run_length());
    }

    #[test]
    fn run_length_matches_naive_on_exhaustive_small_words() {
        // All words of length <= 6 over 2 dimensions, both closed and open.
        for n in 1..=6usize {
            for code in 0..(1usize << n) {
                let word: Vec<usize> = (0..n).map(|i| (code >> i) & 1).collect();
                for closed in [false, true] {
                    assert_eq!(
                        run_length_word(&word, closed),
                        naive_window_variance(&word, closed, 1),
                        "word {word:?} closed={closed}"
                    );
                }
            }
        }
    }

    #[test]
    fn reflect_preserves_verification() {
        let w = square_cycle();
        let r = w.reflect(0).unwrap();
        let report = r.verify();
        assert!(report.is_hamiltonian);
        assert_eq!(report.run_length, 2);
        // Reflecting twice restores the original trace set.
        let rr = r.reflect(0).unwrap();
        let mut a: Vec<Vec<usize>> = w.trace().iter().map(|v| v.coords().to_vec()).collect();
        let mut b: Vec<Vec<usize>> = rr.trace().iter().map(|v| v.coords().to_vec()).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn reflect_directed_dimension_fails() {
        let spec = TorusSpec::fully_directed(vec![4]).unwrap();
        let start = Vertex::origin(&spec);
        let w = Walk::new(spec, start, vec![Step::forward(0); 4], true).unwrap();
        assert!(matches!(w.reflect(0), Err(Error::DirectedViolation { dim: 0 })));
    }

    #[test]
    fn translate_full_turn_is_identity() {
        let w = square_cycle();
        let t = w.translate(0, 2).unwrap();
        assert_eq!(w.trace(), t.trace());
        let t = w.translate(1, -1).unwrap();
        assert!(t.verify().is_hamiltonian);
        assert_eq!(t.run_length(), w.run_length());
    }

    proptest! {
        #[test]
        fn gap_based_variance_matches_naive(
            word in prop::collection::vec(0usize..4, 1..40),
            closed in any::<bool>(),
            j in 1usize..4,
        ) {
            prop_assert_eq!(
                j_variance_word(&word, closed, j),
                naive_window_variance(&word, closed, j)
            );
        }

        #[test]
        fn j_variance_monotone_and_capped(
            word in prop::collection::vec(0usize..4, 1..40),
            closed in any::<bool>(),
        ) {
            let mut prev = 0usize;
            for j in 1..=5 {
                let v = j_variance_word(&word, closed, j);
                prop_assert!(v >= prev);
                prop_assert!(v <= word.len());
                prev = v;
            }
        }

        #[test]
        fn reflect_translate_preserve_hamiltonicity(dim in 0usize..2, amount in -5i64..5) {
            let w = super::tests::square_cycle();
            let r = w.reflect(dim).unwrap().translate(dim, amount).unwrap();
            let report = r.verify();
            prop_assert!(report.is_hamiltonian);
            prop_assert_eq!(report.run_length, w.run_length());
        }
    }
}
