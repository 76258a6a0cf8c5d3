use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::analysis::ctmc::Ctmc;
use crate::analysis::linalg::DenseMatrix;
use crate::error::{Error, Result};
use crate::net::Marking;
use crate::scalar::Scalar;

/// Largest chain handed to the dense solver by default.
pub const DEFAULT_STATE_CAP: usize = 5_000;

#[derive(Debug, Clone)]
pub struct SteadyState<R> {
    pub states: Vec<Marking>,
    pub probabilities: Vec<R>,
    /// `E[tokens at p] = Σ_i π(i) m_i(p)`.
    pub expected_tokens: Vec<R>,
    /// `‖πQ‖∞` of the returned vector.
    pub residual: R,
}

impl<R: Scalar> SteadyState<R> {
    pub fn probability_of(&self, m: &Marking) -> Option<R> {
        self.states.iter().position(|s| s == m).map(|i| self.probabilities[i])
    }
}

/// Tolerance on `‖πQ‖∞`, relative to the largest generator entry.
fn residual_tolerance<R: Scalar>() -> f64 {
    if R::pivot_tolerance().is_zero() {
        0.0
    } else if R::pivot_tolerance().to_f64_lossy() > 1e-9 {
        1e-4
    } else {
        1e-9
    }
}

/// Number of closed communicating classes of the chain.
pub fn closed_classes<R: Scalar>(ctmc: &Ctmc<R>) -> usize {
    let mut g = DiGraph::<(), ()>::with_capacity(ctmc.len(), 0);
    let nodes: Vec<_> = (0..ctmc.len()).map(|_| g.add_node(())).collect();
    for (i, row) in ctmc.rates.iter().enumerate() {
        for (&j, r) in row {
            if !r.is_zero() {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let components = tarjan_scc(&g);
    let mut component_of = vec![0usize; ctmc.len()];
    for (c, members) in components.iter().enumerate() {
        for ix in members {
            component_of[ix.index()] = c;
        }
    }
    components
        .iter()
        .enumerate()
        .filter(|(c, members)| {
            members.iter().all(|ix| {
                ctmc.rates[ix.index()]
                    .iter()
                    .all(|(&j, r)| r.is_zero() || component_of[j] == *c)
            })
        })
        .count()
}

pub fn steady_state<R: Scalar>(ctmc: &Ctmc<R>) -> Result<SteadyState<R>> {
    steady_state_with_cap(ctmc, DEFAULT_STATE_CAP)
}

/// Solves `πQ = 0`, `Σπ = 1` by a dense solve with partial pivoting.
///
/// The chain must have exactly one closed communicating class; transient
/// states get probability zero.
pub fn steady_state_with_cap<R: Scalar>(ctmc: &Ctmc<R>, cap: usize) -> Result<SteadyState<R>> {
    let n = ctmc.len();
    if n == 0 {
        return Err(Error::NoTangibleState);
    }
    if n > cap {
        return Err(Error::StateCapExceeded { states: n, cap });
    }
    let classes = closed_classes(ctmc);
    if classes != 1 {
        return Err(Error::NonErgodic(classes));
    }

    // Q^T π = 0 with the last equation replaced by normalization.
    let q = ctmc.generator();
    let mut a = DenseMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            a[(j, i)] = q[(i, j)];
        }
    }
    for i in 0..n {
        a[(n - 1, i)] = R::one();
    }
    let mut rhs = vec![vec![R::zero()]; n];
    rhs[n - 1][0] = R::one();
    let solved = a.solve(rhs)?;
    let mut pi: Vec<R> = solved.into_iter().map(|row| row[0]).collect();

    let scale = (0..n).map(|i| ctmc.exit_rate(i).to_f64_lossy()).fold(1.0, f64::max);
    let tol = residual_tolerance::<R>() * scale;
    for p in &mut pi {
        if *p < R::zero() {
            if p.abs().to_f64_lossy() > tol {
                return Err(Error::Residual(p.abs().to_f64_lossy()));
            }
            *p = R::zero();
        }
    }
    let total = pi.iter().fold(R::zero(), |acc, p| acc + *p);
    for p in &mut pi {
        *p = *p / total;
    }

    let mut residual = R::zero();
    for j in 0..n {
        let r = (0..n).fold(R::zero(), |acc, i| acc + pi[i] * q[(i, j)]).abs();
        if r > residual {
            residual = r;
        }
    }
    if residual.to_f64_lossy() > tol {
        return Err(Error::Residual(residual.to_f64_lossy()));
    }

    let places = ctmc.states.first().map_or(0, Marking::len);
    let expected_tokens = (0..places)
        .map(|p| {
            ctmc.states
                .iter()
                .zip(&pi)
                .fold(R::zero(), |acc, (m, &prob)| acc + prob * R::from_u64(m[p]).expect("token count fits scalar"))
        })
        .collect();

    Ok(SteadyState { states: ctmc.states.clone(), probabilities: pi, expected_tokens, residual })
}
