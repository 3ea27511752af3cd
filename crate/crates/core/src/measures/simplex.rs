//! Network simplex for the dense transportation problem
//!
//! ```text
//! min sum_ij c_ij f_ij   s.t.  sum_j f_ij = a_i,  sum_i f_ij = b_j,  f >= 0
//! ```
//!
//! The basis is a spanning tree of the bipartite row/column graph with
//! `m + n - 1` cells (degenerate zero-flow cells included). Entering cells
//! are priced with the node potentials (Dantzig rule); after a run of
//! degenerate pivots the solver switches to Bland's smallest-index rule until
//! progress resumes, which rules out cycling.

const DEGENERATE_RUN: usize = 50;

#[derive(Debug, Clone)]
pub(crate) struct Solution {
    /// `(i, j, flow)` for every basic cell with positive flow.
    pub flows: Vec<(usize, usize, f64)>,
}

pub(crate) fn solve(supply: &[f64], demand: &[f64], cost: &[f64]) -> Solution {
    let (m, n) = (supply.len(), demand.len());
    debug_assert_eq!(cost.len(), m * n);
    let mut s = Simplex::new(supply, demand, cost);
    s.run();
    let flows = s
        .basis
        .iter()
        .filter_map(|&c| {
            let f = s.flow[c];
            (f > 0.0).then_some((c / n, c % n, f))
        })
        .collect();
    Solution { flows }
}

struct Simplex<'a> {
    m: usize,
    n: usize,
    cost: &'a [f64],
    flow: Vec<f64>,
    in_basis: Vec<bool>,
    basis: Vec<usize>,
    tol: f64,
}

impl<'a> Simplex<'a> {
    fn new(supply: &[f64], demand: &[f64], cost: &'a [f64]) -> Self {
        let (m, n) = (supply.len(), demand.len());
        let scale = cost.iter().fold(0.0f64, |a, c| a.max(c.abs()));
        let mut s = Simplex {
            m,
            n,
            cost,
            flow: vec![0.0; m * n],
            in_basis: vec![false; m * n],
            basis: Vec::with_capacity(m + n - 1),
            tol: 1e-12 * scale.max(1.0),
        };
        s.northwest_corner(supply, demand);
        s
    }

    /// Initial basic feasible tree; every step adds one cell and retires one
    /// row or column, so exactly `m + n - 1` cells are produced.
    fn northwest_corner(&mut self, supply: &[f64], demand: &[f64]) {
        let total_a: f64 = supply.iter().sum();
        let total_b: f64 = demand.iter().sum();
        let mut ra = supply.to_vec();
        // rescale so that both sides carry identical totals
        let mut rb: Vec<f64> = demand.iter().map(|b| b * total_a / total_b).collect();
        let (mut i, mut j) = (0, 0);
        loop {
            let x = ra[i].min(rb[j]).max(0.0);
            let c = i * self.n + j;
            self.flow[c] = x;
            self.in_basis[c] = true;
            self.basis.push(c);
            ra[i] -= x;
            rb[j] -= x;
            let row_done = ra[i] <= rb[j];
            if i + 1 == self.m && j + 1 == self.n {
                break;
            }
            if (row_done && i + 1 < self.m) || j + 1 == self.n {
                i += 1;
            } else {
                j += 1;
            }
        }
    }

    fn run(&mut self) -> usize {
        let nodes = self.m + self.n;
        let mut pivots = 0;
        let mut degenerate = 0;
        let max_pivots = 100 * nodes * nodes + 1000;
        while pivots < max_pivots {
            let (u, v) = self.potentials();
            let bland = degenerate >= DEGENERATE_RUN;
            let Some(entering) = self.price(&u, &v, bland) else {
                break;
            };
            let moved = self.pivot(entering, bland);
            pivots += 1;
            if moved > 0.0 {
                degenerate = 0;
            } else {
                degenerate += 1;
            }
        }
        pivots
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.m + self.n];
        for &c in &self.basis {
            let (i, j) = (c / self.n, c % self.n);
            adj[i].push((self.m + j, c));
            adj[self.m + j].push((i, c));
        }
        adj
    }

    /// Duals with `u_0 = 0` and `u_i + v_j = c_ij` on basic cells.
    fn potentials(&self) -> (Vec<f64>, Vec<f64>) {
        let adj = self.adjacency();
        let mut pot = vec![f64::NAN; self.m + self.n];
        pot[0] = 0.0;
        let mut stack = vec![0usize];
        while let Some(a) = stack.pop() {
            for &(b, c) in &adj[a] {
                if pot[b].is_nan() {
                    pot[b] = self.cost[c] - pot[a];
                    stack.push(b);
                }
            }
        }
        let v = pot.split_off(self.m);
        (pot, v)
    }

    fn price(&self, u: &[f64], v: &[f64], bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.m {
            for j in 0..self.n {
                let c = i * self.n + j;
                if self.in_basis[c] {
                    continue;
                }
                let r = self.cost[c] - u[i] - v[j];
                if r < -self.tol {
                    if bland {
                        return Some(c);
                    }
                    if best.is_none_or(|(_, br)| r < br) {
                        best = Some((c, r));
                    }
                }
            }
        }
        best.map(|(c, _)| c)
    }

    /// Pivots `entering` into the basis; returns the flow moved around the
    /// cycle.
    fn pivot(&mut self, entering: usize, bland: bool) -> f64 {
        let (ie, je) = (entering / self.n, entering % self.n);
        let cycle = self.tree_path(ie, self.m + je);
        // cycle[k] with k even gets -theta; the entering cell gets +theta
        let mut leaving = None;
        let mut theta = f64::INFINITY;
        for (k, &c) in cycle.iter().enumerate() {
            if k % 2 == 0 {
                let f = self.flow[c];
                let better = f < theta || (bland && f == theta && leaving.is_some_and(|l| c < l));
                if better {
                    theta = f;
                    leaving = Some(c);
                }
            }
        }
        let leaving = leaving.expect("cycle always contains a decreasing cell");
        let theta = theta.max(0.0);
        for (k, &c) in cycle.iter().enumerate() {
            if k % 2 == 0 {
                self.flow[c] = (self.flow[c] - theta).max(0.0);
            } else {
                self.flow[c] += theta;
            }
        }
        self.flow[entering] = theta;
        self.flow[leaving] = 0.0;
        self.in_basis[leaving] = false;
        self.in_basis[entering] = true;
        let pos = self.basis.iter().position(|&c| c == leaving).expect("leaving cell is basic");
        self.basis[pos] = entering;
        theta
    }

    /// Basic cells on the tree path from column node `to` back to row node
    /// `from`, in order starting at `to`.
    fn tree_path(&self, from: usize, to: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.m + self.n];
        let mut seen = vec![false; self.m + self.n];
        seen[from] = true;
        let mut stack = vec![from];
        while let Some(a) = stack.pop() {
            if a == to {
                break;
            }
            for &(b, c) in &adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    parent[b] = Some((a, c));
                    stack.push(b);
                }
            }
        }
        let mut path = Vec::new();
        let mut node = to;
        while node != from {
            let (prev, c) = parent[node].expect("basis is a spanning tree");
            path.push(c);
            node = prev;
        }
        path
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(sol: &Solution, cost: &[f64], n: usize) -> f64 {
        sol.flows.iter().map(|&(i, j, f)| f * cost[i * n + j]).sum()
    }

    #[test]
    fn textbook_instance() {
        // supplies 20, 30, 25; demands 10, 35, 30; known optimum 280
        let supply = [20.0, 30.0, 25.0];
        let demand = [10.0, 35.0, 30.0];
        let cost = [8.0, 6.0, 10.0, 9.0, 12.0, 13.0, 14.0, 9.0, 16.0];
        let sol = solve(&supply, &demand, &cost);
        let mut best = f64::INFINITY;
        // brute force over the two free cells of the 3x3 polytope
        for f00 in 0..=10 {
            for f01 in 0..=20 - f00 {
                for f10 in 0..=(10 - f00).min(30) {
                    let f20 = 10 - f00 - f10;
                    let f02 = 20 - f00 - f01;
                    for f11 in 0..=(30 - f10) {
                        let f12 = 30 - f10 - f11;
                        let f21 = 35 - f01 - f11;
                        let f22 = 30 - f02 - f12;
                        if f21 < 0 || f22 < 0 || f20 + f21 + f22 != 25 {
                            continue;
                        }
                        let f = [f00, f01, f02, f10, f11, f12, f20, f21, f22];
                        let c: f64 = f.iter().zip(&cost).map(|(a, b)| *a as f64 * b).sum();
                        best = best.min(c);
                    }
                }
            }
        }
        assert_eq!(total(&sol, &cost, 3), best);
    }

    #[test]
    fn marginals_are_respected() {
        let supply = [0.1, 0.2, 0.3, 0.4];
        let demand = [0.25, 0.25, 0.5];
        let cost: Vec<f64> = (0..12).map(|k| ((k * 7 % 5) as f64) + 0.1 * k as f64).collect();
        let sol = solve(&supply, &demand, &cost);
        let mut rows = [0.0; 4];
        let mut cols = [0.0; 3];
        for &(i, j, f) in &sol.flows {
            rows[i] += f;
            cols[j] += f;
        }
        for (r, a) in rows.iter().zip(&supply) {
            assert!((r - a).abs() < 1e-12);
        }
        for (c, b) in cols.iter().zip(&demand) {
            assert!((c - b).abs() < 1e-12);
        }
    }

    #[test]
    fn single_row_and_column() {
        let sol = solve(&[1.0], &[0.5, 0.5], &[1.0, 3.0]);
        assert_eq!(total(&sol, &[1.0, 3.0], 2), 2.0);
        let sol = solve(&[1.0], &[1.0], &[4.0]);
        assert_eq!(sol.flows, vec![(0, 0, 1.0)]);
    }

    #[test]
    fn degenerate_uniform_instances_terminate() {
        let n = 12;
        let w = vec![1.0 / n as f64; n];
        // many ties
        let cost: Vec<f64> = (0..n * n).map(|k| ((k / n + k % n) % 3) as f64).collect();
        let sol = solve(&w, &w, &cost);
        assert!(total(&sol, &cost, n).abs() < 1e-12);
    }
}
