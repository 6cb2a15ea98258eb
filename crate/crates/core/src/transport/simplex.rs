//! Transportation simplex on a dense `m × n` cost matrix.
//!
//! Starts from a least-cost basis and pivots with Bland's rule:
//! the entering cell is the first row-major cell with negative reduced cost,
//! the leaving cell the first row-major minus-cell attaining the minimum flow.

use crate::{Error, Result};

/// Basic cells of an optimal vertex as `(i, j, flow)`, zero-flow cells included.
pub fn solve(supply: &[f64], demand: &[f64], cost: &[f64]) -> Result<Vec<(usize, usize, f64)>> {
    let (m, n) = (supply.len(), demand.len());
    if m == 0 || n == 0 || cost.len() != m * n {
        return Err(Error::Malformed("transport problem with inconsistent sizes".into()));
    }
    let mut basis = least_cost(supply, demand, cost);
    let scale = cost.iter().fold(1.0_f64, |a, c| a.max(c.abs()));
    let eps = 1e-12 * scale;
    let max_pivots = 50 * m * n + 1000;

    let mut u = vec![0.0; m];
    let mut v = vec![0.0; n];
    let mut adj = vec![Vec::with_capacity(4); m + n];
    for _ in 0..max_pivots {
        adjacency(m, &basis, &mut adj);
        potentials(m, n, cost, &basis, &adj, &mut u, &mut v);
        let Some((ei, ej)) = entering(n, cost, &u, &v, eps) else {
            return Ok(basis);
        };
        let path = tree_path(m, &basis, &adj, ei, m + ej);

        let mut theta = f64::INFINITY;
        let mut leave: Option<usize> = None;
        for (pos, &b) in path.iter().enumerate() {
            if pos % 2 == 0 {
                let (i, j, f) = basis[b];
                let better = match leave {
                    None => true,
                    Some(l) => f < theta || (f == theta && i * n + j < basis[l].0 * n + basis[l].1),
                };
                if better {
                    theta = f;
                    leave = Some(b);
                }
            }
        }
        let leave = leave.ok_or_else(|| Error::Malformed("degenerate pivot cycle".into()))?;
        for (pos, &b) in path.iter().enumerate() {
            if pos % 2 == 0 {
                basis[b].2 = (basis[b].2 - theta).max(0.0);
            } else {
                basis[b].2 += theta;
            }
        }
        basis[leave] = (ei, ej, theta);
    }
    Err(Error::NonConvergence {
        iterations: max_pivots,
        residual: f64::NAN,
    })
}

/// First row-major cell with reduced cost below `−eps`.
fn entering(n: usize, cost: &[f64], u: &[f64], v: &[f64], eps: f64) -> Option<(usize, usize)> {
    for (i, (row, ui)) in cost.chunks_exact(n).zip(u).enumerate() {
        if let Some(j) = row.iter().zip(v).position(|(c, vj)| c - ui - vj < -eps) {
            return Some((i, j));
        }
    }
    None
}

/// Least-cost starting basis: cells are filled in increasing cost order
/// (ties row-major) and each fill retires one row or column, so the `m + n − 1`
/// filled cells form a spanning tree.
fn least_cost(supply: &[f64], demand: &[f64], cost: &[f64]) -> Vec<(usize, usize, f64)> {
    let (m, n) = (supply.len(), demand.len());
    let mut a = supply.to_vec();
    let mut b = demand.to_vec();
    let mut order: Vec<usize> = (0..m * n).collect();
    order.sort_by(|&x, &y| cost[x].total_cmp(&cost[y]).then(x.cmp(&y)));
    let mut row_open = vec![true; m];
    let mut col_open = vec![true; n];
    let (mut rows_left, mut cols_left) = (m, n);
    let mut basis = Vec::with_capacity(m + n - 1);
    for k in order {
        let (i, j) = (k / n, k % n);
        if !(row_open[i] && col_open[j]) {
            continue;
        }
        let x = a[i].min(b[j]).max(0.0);
        basis.push((i, j, x));
        a[i] -= x;
        b[j] -= x;
        if rows_left == 1 && cols_left == 1 {
            break;
        }
        let retire_row = if rows_left == 1 {
            false
        } else if cols_left == 1 {
            true
        } else {
            a[i] <= b[j]
        };
        if retire_row {
            row_open[i] = false;
            rows_left -= 1;
        } else {
            col_open[j] = false;
            cols_left -= 1;
        }
    }
    basis
}

/// Per node (rows `0..m`, columns `m..m+n`), the incident basic cell indices.
fn adjacency(m: usize, basis: &[(usize, usize, f64)], adj: &mut [Vec<usize>]) {
    adj.iter_mut().for_each(Vec::clear);
    for (k, &(i, j, _)) in basis.iter().enumerate() {
        adj[i].push(k);
        adj[m + j].push(k);
    }
}

fn other_end(m: usize, cell: (usize, usize, f64), node: usize) -> usize {
    if node < m {
        m + cell.1
    } else {
        cell.0
    }
}

fn potentials(
    m: usize,
    n: usize,
    cost: &[f64],
    basis: &[(usize, usize, f64)],
    adj: &[Vec<usize>],
    u: &mut [f64],
    v: &mut [f64],
) {
    let mut seen = vec![false; m + n];
    let mut stack = vec![0usize];
    seen[0] = true;
    u[0] = 0.0;
    while let Some(node) = stack.pop() {
        for &k in &adj[node] {
            let (i, j, _) = basis[k];
            let next = other_end(m, basis[k], node);
            if seen[next] {
                continue;
            }
            seen[next] = true;
            if next < m {
                u[i] = cost[i * n + j] - v[j];
            } else {
                v[j] = cost[i * n + j] - u[i];
            }
            stack.push(next);
        }
    }
}

/// Basic cells along the tree path from node `from` to node `to`, in order.
fn tree_path(m: usize, basis: &[(usize, usize, f64)], adj: &[Vec<usize>], from: usize, to: usize) -> Vec<usize> {
    let mut via: Vec<Option<usize>> = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    let mut queue = std::collections::VecDeque::from([from]);
    seen[from] = true;
    while let Some(node) = queue.pop_front() {
        if node == to {
            break;
        }
        for &k in &adj[node] {
            let next = other_end(m, basis[k], node);
            if !seen[next] {
                seen[next] = true;
                via[next] = Some(k);
                queue.push_back(next);
            }
        }
    }
    let mut path = Vec::new();
    let mut node = to;
    while node != from {
        let k = via[node].expect("basis is a spanning tree");
        path.push(k);
        node = other_end(m, basis[k], node);
    }
    path.reverse();
    path
}
