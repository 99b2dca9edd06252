//! Dirichlet eigenpairs of the negative Laplacian on boxes (0,L1)x...x(0,Ld),
//! d in {1, 2}, analysis/synthesis between uniform interior grids and the sine
//! eigenbasis, and coefficient-decay diagnostics.
//!
//! Eigenfunctions are L2-orthonormalized products of sines,
//! v_k(x) = prod_a sqrt(2/L_a) sin(k_a pi x_a / L_a), with eigenvalues
//! lambda_k = sum_a (k_a pi / L_a)^2. On a uniform interior grid with n nodes
//! per axis the discrete sine transform reproduces band-limited functions
//! exactly, which keeps the analyze/synthesize round trip crisp.

use std::io::{BufRead, Write};

use crate::{Error, Result};

/// Box domain (0, L1) x ... x (0, Ld), d in {1, 2}.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain {
    lengths: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lengths: &[f64]) -> Result<Self> {
        if lengths.is_empty() || lengths.len() > 2 {
            return Err(Error::Precondition(format!(
                "domain dimension must be 1 or 2, got {}",
                lengths.len()
            )));
        }
        if lengths.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
            return Err(Error::Precondition(format!(
                "all side lengths must be positive and finite, got {lengths:?}"
            )));
        }
        Ok(Self {
            lengths: lengths.to_vec(),
        })
    }

    pub fn interval(length: f64) -> Result<Self> {
        Self::new(&[length])
    }

    pub fn rectangle(lx: f64, ly: f64) -> Result<Self> {
        Self::new(&[lx, ly])
    }

    pub fn dim(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    /// lambda_k = sum_a (k_a pi / L_a)^2, strictly positive.
    pub fn eigenvalue(&self, k: &ModeIndex) -> f64 {
        debug_assert_eq!(k.dim(), self.dim());
        k.components()
            .iter()
            .zip(&self.lengths)
            .map(|(&ka, &la)| {
                let w = ka as f64 * std::f64::consts::PI / la;
                w * w
            })
            .sum()
    }

    /// Orthonormal eigenfunction value at a point of the closed box.
    pub fn eigenfunction_at(&self, k: &ModeIndex, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::Precondition(format!(
                "point dimension {} does not match domain dimension {}",
                x.len(),
                self.dim()
            )));
        }
        let mut v = 1.0;
        for ((&xa, &la), &ka) in x.iter().zip(&self.lengths).zip(k.components()) {
            if !(0.0..=la).contains(&xa) {
                return Err(Error::Domain(format!(
                    "point coordinate {xa} outside [0, {la}]"
                )));
            }
            v *= (2.0 / la).sqrt() * (ka as f64 * std::f64::consts::PI * xa / la).sin();
        }
        Ok(v)
    }
}

/// Per-axis positive mode indices: (k) in 1-D, (k1, k2) in 2-D.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeIndex(Vec<usize>);

impl ModeIndex {
    pub fn new(components: &[usize]) -> Result<Self> {
        if components.is_empty() || components.len() > 2 {
            return Err(Error::Precondition(format!(
                "mode index must have 1 or 2 components, got {}",
                components.len()
            )));
        }
        if components.iter().any(|&c| c == 0) {
            return Err(Error::Precondition(
                "mode index components must be >= 1".into(),
            ));
        }
        Ok(Self(components.to_vec()))
    }

    pub fn d1(k: usize) -> Self {
        Self::new(&[k]).expect("positive 1-D index")
    }

    pub fn d2(k1: usize, k2: usize) -> Self {
        Self::new(&[k1, k2]).expect("positive 2-D index")
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[usize] {
        &self.0
    }
}

impl std::fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join("-"))
    }
}

/// Coefficient sequence of a function in the Dirichlet sine eigenbasis,
/// flattened by ascending eigenvalue with lexicographic tie-break.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoeffs {
    domain: BoxDomain,
    counts: Vec<usize>,
    order: Vec<ModeIndex>,
    values: Vec<f64>,
}

/// Deterministic mode ordering: ascending eigenvalue, ties by lexicographic
/// index.
pub fn mode_order(domain: &BoxDomain, counts: &[usize]) -> Result<Vec<ModeIndex>> {
    if counts.len() != domain.dim() {
        return Err(Error::Precondition(format!(
            "counts dimension {} does not match domain dimension {}",
            counts.len(),
            domain.dim()
        )));
    }
    if counts.iter().any(|&c| c == 0) {
        return Err(Error::Precondition("mode counts must be >= 1".into()));
    }
    let mut order = Vec::with_capacity(counts.iter().product());
    match counts {
        [k] => {
            for i in 1..=*k {
                order.push(ModeIndex::d1(i));
            }
        }
        [k1, k2] => {
            for i in 1..=*k1 {
                for j in 1..=*k2 {
                    order.push(ModeIndex::d2(i, j));
                }
            }
        }
        _ => unreachable!(),
    }
    order.sort_by(|a, b| {
        let (la, lb) = (domain.eigenvalue(a), domain.eigenvalue(b));
        la.partial_cmp(&lb).unwrap().then_with(|| a.cmp(b))
    });
    Ok(order)
}

impl SpectralCoeffs {
    pub fn zeros(domain: BoxDomain, counts: &[usize]) -> Result<Self> {
        let order = mode_order(&domain, counts)?;
        let n = order.len();
        Ok(Self {
            domain,
            counts: counts.to_vec(),
            order,
            values: vec![0.0; n],
        })
    }

    /// Builds coefficients from a per-mode map evaluated in sorted order.
    pub fn from_fn(
        domain: BoxDomain,
        counts: &[usize],
        mut f: impl FnMut(&ModeIndex) -> f64,
    ) -> Result<Self> {
        let mut c = Self::zeros(domain, counts)?;
        for (i, k) in c.order.iter().enumerate() {
            c.values[i] = f(k);
        }
        Ok(c)
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn order(&self) -> &[ModeIndex] {
        &self.order
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.order.iter().map(|k| self.domain.eigenvalue(k)).collect()
    }

    /// Position of a mode in the flattened ordering.
    pub fn position(&self, k: &ModeIndex) -> Option<usize> {
        self.order.iter().position(|m| m == k)
    }

    pub fn get(&self, k: &ModeIndex) -> Option<f64> {
        self.position(k).map(|i| self.values[i])
    }

    pub fn set(&mut self, k: &ModeIndex, v: f64) -> Result<()> {
        match self.position(k) {
            Some(i) => {
                self.values[i] = v;
                Ok(())
            }
            None => Err(Error::Precondition(format!("mode {k} not retained"))),
        }
    }

    pub fn l2_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Samples of a function on the uniform interior grid of a box; boundary
/// values are implicitly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    domain: BoxDomain,
    nodes: Vec<usize>,
    values: Vec<f64>, // row-major, axis 0 outermost
}

impl GridFunction {
    pub fn zeros(domain: BoxDomain, nodes: &[usize]) -> Result<Self> {
        if nodes.len() != domain.dim() {
            return Err(Error::Precondition(format!(
                "nodes dimension {} does not match domain dimension {}",
                nodes.len(),
                domain.dim()
            )));
        }
        if nodes.iter().any(|&n| n == 0) {
            return Err(Error::Precondition("node counts must be >= 1".into()));
        }
        let total = nodes.iter().product();
        Ok(Self {
            domain,
            nodes: nodes.to_vec(),
            values: vec![0.0; total],
        })
    }

    pub fn from_values(domain: BoxDomain, nodes: &[usize], values: Vec<f64>) -> Result<Self> {
        let mut g = Self::zeros(domain, nodes)?;
        if values.len() != g.values.len() {
            return Err(Error::Precondition(format!(
                "expected {} samples, got {}",
                g.values.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Precondition("grid samples must be finite".into()));
        }
        g.values = values;
        Ok(g)
    }

    /// Samples `f` at the interior grid nodes.
    pub fn sample(
        domain: BoxDomain,
        nodes: &[usize],
        f: impl Fn(&[f64]) -> f64,
    ) -> Result<Self> {
        let mut g = Self::zeros(domain, nodes)?;
        match g.nodes.as_slice() {
            [n] => {
                let n = *n;
                for i in 0..n {
                    let x = g.coord(0, i);
                    g.values[i] = f(&[x]);
                }
            }
            [n1, n2] => {
                let (n1, n2) = (*n1, *n2);
                for i in 0..n1 {
                    let x = g.coord(0, i);
                    for j in 0..n2 {
                        let y = g.coord(1, j);
                        g.values[i * n2 + j] = f(&[x, y]);
                    }
                }
            }
            _ => unreachable!(),
        }
        if g.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Precondition("sampled values must be finite".into()));
        }
        Ok(g)
    }

    /// Interior node coordinate: x_i = (i+1) L / (n+1).
    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        let l = self.domain.lengths()[axis];
        let n = self.nodes[axis];
        (i + 1) as f64 * l / (n + 1) as f64
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Discrete L2 norm: trapezoid quadrature with zero boundary, which on
    /// the uniform interior grid is the plain scaled sum of squares.
    pub fn l2_norm(&self) -> f64 {
        let cell: f64 = self
            .nodes
            .iter()
            .zip(self.domain.lengths())
            .map(|(&n, &l)| l / (n + 1) as f64)
            .product();
        (self.values.iter().map(|v| v * v).sum::<f64>() * cell).sqrt()
    }

    /// Writes the on-disk CSV form: header row, axis coordinates then value,
    /// row-major over the tensor grid, LF line ends.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        match self.domain.dim() {
            1 => {
                w.write_all(b"x,value\n")?;
                for i in 0..self.nodes[0] {
                    writeln!(w, "{:.17e},{:.17e}", self.coord(0, i), self.values[i])?;
                }
            }
            2 => {
                w.write_all(b"x,y,value\n")?;
                let n2 = self.nodes[1];
                for i in 0..self.nodes[0] {
                    for j in 0..n2 {
                        writeln!(
                            w,
                            "{:.17e},{:.17e},{:.17e}",
                            self.coord(0, i),
                            self.coord(1, j),
                            self.values[i * n2 + j]
                        )?;
                    }
                }
            }
            _ => unreachable!(),
        }
        Ok(())
    }

    /// Reads the CSV form back. The domain is reconstructed from the uniform
    /// coordinates (first interior node = grid spacing).
    pub fn read_csv<R: BufRead>(r: &mut R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Precondition("empty CSV".into()))?
            .map_err(|e| Error::Precondition(format!("CSV read error: {e}")))?;
        let dim = match header.trim() {
            "x,value" => 1,
            "x,y,value" => 2,
            h => {
                return Err(Error::Precondition(format!(
                    "unrecognized grid CSV header: {h}"
                )))
            }
        };
        let mut coords: Vec<Vec<f64>> = vec![Vec::new(); dim];
        let mut values = Vec::new();
        for line in lines {
            let line = line.map_err(|e| Error::Precondition(format!("CSV read error: {e}")))?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != dim + 1 {
                return Err(Error::Precondition(format!(
                    "expected {} fields, got {}",
                    dim + 1,
                    fields.len()
                )));
            }
            for (a, field) in fields[..dim].iter().enumerate() {
                let x: f64 = field
                    .trim()
                    .parse()
                    .map_err(|e| Error::Precondition(format!("bad coordinate: {e}")))?;
                coords[a].push(x);
            }
            values.push(
                fields[dim]
                    .trim()
                    .parse()
                    .map_err(|e| Error::Precondition(format!("bad value: {e}")))?,
            );
        }
        if values.is_empty() {
            return Err(Error::Precondition("grid CSV has no rows".into()));
        }
        // per-axis sorted unique coordinates
        let mut axes: Vec<Vec<f64>> = Vec::with_capacity(dim);
        for c in &coords {
            let mut u = c.clone();
            u.sort_by(|a, b| a.partial_cmp(b).unwrap());
            u.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * a.abs().max(1.0));
            axes.push(u);
        }
        let nodes: Vec<usize> = axes.iter().map(|a| a.len()).collect();
        if nodes.iter().product::<usize>() != values.len() {
            return Err(Error::Precondition(
                "grid CSV rows do not form a full tensor grid".into(),
            ));
        }
        let lengths: Vec<f64> = axes
            .iter()
            .map(|a| {
                let h = a[0];
                a[a.len() - 1] + h
            })
            .collect();
        let domain = BoxDomain::new(&lengths)?;
        GridFunction::from_values(domain, &nodes, values)
    }
}

// ---------------------------------------------------------------------------
// analysis / synthesis
// ---------------------------------------------------------------------------

/// sin((i+1)(k+1) pi / (n+1)) table, k rows of n entries each.
fn sine_table(count: usize, nodes: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(count * nodes);
    let denom = (nodes + 1) as f64;
    for k in 1..=count {
        for i in 1..=nodes {
            t.push((k as f64 * i as f64 * std::f64::consts::PI / denom).sin());
        }
    }
    t
}

/// Projects grid samples onto the retained eigenbasis: c_k approximates
/// (h, v_k). Exact for inputs band-limited to the grid's resolvable modes.
pub fn analyze(h: &GridFunction, counts: &[usize]) -> Result<SpectralCoeffs> {
    if counts.len() != h.domain().dim() {
        return Err(Error::Precondition(format!(
            "counts dimension {} does not match grid dimension {}",
            counts.len(),
            h.domain().dim()
        )));
    }
    for (a, (&c, &n)) in counts.iter().zip(h.nodes()).enumerate() {
        if c > n {
            return Err(Error::Precondition(format!(
                "axis {a}: {c} modes exceed {n} grid nodes (aliasing)"
            )));
        }
    }
    let domain = h.domain().clone();
    let facs: Vec<f64> = domain
        .lengths()
        .iter()
        .zip(h.nodes())
        .map(|(&l, &n)| (2.0 * l).sqrt() / (n + 1) as f64)
        .collect();
    let mut out = SpectralCoeffs::zeros(domain, counts)?;
    match (counts, h.nodes()) {
        ([k], [n]) => {
            let table = sine_table(*k, *n);
            let mut tensor = vec![0.0; *k];
            for (ki, tv) in tensor.iter_mut().enumerate() {
                let row = &table[ki * n..(ki + 1) * n];
                *tv = facs[0]
                    * row
                        .iter()
                        .zip(h.values())
                        .map(|(s, v)| s * v)
                        .sum::<f64>();
            }
            scatter_sorted(&mut out, &tensor);
        }
        ([k1, k2], [n1, n2]) => {
            let t1 = sine_table(*k1, *n1);
            let t2 = sine_table(*k2, *n2);
            // transform axis 1 first: a[i1][q2]
            let mut mid = vec![0.0; n1 * k2];
            for i1 in 0..*n1 {
                let row = &h.values()[i1 * n2..(i1 + 1) * n2];
                for q2 in 0..*k2 {
                    let srow = &t2[q2 * n2..(q2 + 1) * n2];
                    mid[i1 * k2 + q2] =
                        facs[1] * srow.iter().zip(row).map(|(s, v)| s * v).sum::<f64>();
                }
            }
            let mut tensor = vec![0.0; k1 * k2];
            for q1 in 0..*k1 {
                let srow = &t1[q1 * n1..(q1 + 1) * n1];
                for q2 in 0..*k2 {
                    tensor[q1 * k2 + q2] = facs[0]
                        * (0..*n1).map(|i1| srow[i1] * mid[i1 * k2 + q2]).sum::<f64>();
                }
            }
            scatter_sorted(&mut out, &tensor);
        }
        _ => unreachable!(),
    }
    Ok(out)
}

/// Pointwise sum of the retained modes at the interior grid nodes.
pub fn synthesize(c: &SpectralCoeffs, nodes: &[usize]) -> Result<GridFunction> {
    let domain = c.domain().clone();
    let mut out = GridFunction::zeros(domain.clone(), nodes)?;
    let facs: Vec<f64> = domain.lengths().iter().map(|&l| (2.0 / l).sqrt()).collect();
    // gather sorted coefficients back into tensor layout
    let tensor = gather_sorted(c);
    match (c.counts(), nodes) {
        ([k], [n]) => {
            let table = sine_table(*k, *n);
            for i in 0..*n {
                let mut s = 0.0;
                for (ki, tv) in tensor.iter().enumerate() {
                    if *tv != 0.0 {
                        s += tv * table[ki * n + i];
                    }
                }
                out.values_mut()[i] = facs[0] * s;
            }
        }
        ([k1, k2], [n1, n2]) => {
            let t1 = sine_table(*k1, *n1);
            let t2 = sine_table(*k2, *n2);
            // expand axis 0 first: mid[i1][q2]
            let mut mid = vec![0.0; n1 * k2];
            for q1 in 0..*k1 {
                let row = &tensor[q1 * k2..(q1 + 1) * k2];
                if row.iter().all(|v| *v == 0.0) {
                    continue;
                }
                let srow = &t1[q1 * n1..(q1 + 1) * n1];
                for i1 in 0..*n1 {
                    let w = srow[i1];
                    for q2 in 0..*k2 {
                        mid[i1 * k2 + q2] += w * row[q2];
                    }
                }
            }
            for i1 in 0..*n1 {
                let mrow = &mid[i1 * k2..(i1 + 1) * k2];
                for i2 in 0..*n2 {
                    let mut s = 0.0;
                    for q2 in 0..*k2 {
                        if mrow[q2] != 0.0 {
                            s += mrow[q2] * t2[q2 * n2 + i2];
                        }
                    }
                    out.values_mut()[i1 * n2 + i2] = facs[0] * facs[1] * s;
                }
            }
        }
        _ => unreachable!(),
    }
    Ok(out)
}

fn scatter_sorted(out: &mut SpectralCoeffs, tensor: &[f64]) {
    let counts = out.counts.clone();
    for (pos, k) in out.order.iter().enumerate() {
        let ti = tensor_index(k, &counts);
        out.values[pos] = tensor[ti];
    }
}

fn gather_sorted(c: &SpectralCoeffs) -> Vec<f64> {
    let mut tensor = vec![0.0; c.counts().iter().product()];
    for (pos, k) in c.order().iter().enumerate() {
        tensor[tensor_index(k, c.counts())] = c.values()[pos];
    }
    tensor
}

fn tensor_index(k: &ModeIndex, counts: &[usize]) -> usize {
    match (k.components(), counts) {
        ([a], [_]) => a - 1,
        ([a, b], [_, k2]) => (a - 1) * k2 + (b - 1),
        _ => unreachable!(),
    }
}

// ---------------------------------------------------------------------------
// decay diagnostics
// ---------------------------------------------------------------------------

/// Advisory verdict on whether sum lambda_k^tau |c_k|^2 looks summable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayVerdict {
    PlausiblyConvergent,
    DivergentLooking,
}

/// Partial sums S_m = sum_{k<=m} lambda_k^tau |c_k|^2 and the tail slope of
/// log S_m against log m. The verdict is advisory and never blocks a solver.
#[derive(Debug, Clone)]
pub struct DecayReport {
    pub tau: f64,
    pub partial_sums: Vec<f64>,
    pub tail_slope: f64,
    pub flatten_rate: f64,
    pub verdict: DecayVerdict,
}

/// Default slope below which the partial-sum tail counts as flattening.
pub const DEFAULT_FLATTEN_RATE: f64 = 0.25;

pub fn decay_diagnostic(c: &SpectralCoeffs, tau: f64) -> Result<DecayReport> {
    decay_diagnostic_with_rate(c, tau, DEFAULT_FLATTEN_RATE)
}

pub fn decay_diagnostic_with_rate(
    c: &SpectralCoeffs,
    tau: f64,
    flatten_rate: f64,
) -> Result<DecayReport> {
    if !(tau > 0.0) {
        return Err(Error::Precondition(format!("tau must be positive, got {tau}")));
    }
    let eigs = c.eigenvalues();
    let mut partial_sums = Vec::with_capacity(c.len());
    let mut s = 0.0;
    for (lam, v) in eigs.iter().zip(c.values()) {
        s += lam.powf(tau) * v * v;
        partial_sums.push(s);
    }
    let m = partial_sums.len();
    let tail_slope = if m >= 4 {
        let hi = partial_sums[m - 1].max(f64::MIN_POSITIVE);
        let lo = partial_sums[m / 2 - 1].max(f64::MIN_POSITIVE);
        (hi.ln() - lo.ln()) / ((m as f64).ln() - (m as f64 / 2.0).ln())
    } else {
        0.0
    };
    let verdict = if tail_slope < flatten_rate {
        DecayVerdict::PlausiblyConvergent
    } else {
        DecayVerdict::DivergentLooking
    };
    Ok(DecayReport {
        tau,
        partial_sums,
        tail_slope,
        flatten_rate,
        verdict,
    })
}
