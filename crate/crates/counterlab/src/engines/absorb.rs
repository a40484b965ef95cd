//! Exact absorption analysis of one round.
//!
//! The reachable configuration graph is explored breadth-first, cut at every
//! return to the initial configuration (a restart). Absorption probabilities
//! into accept / reject / restart are then solved exactly: strongly connected
//! components are processed in reverse topological order, each one by
//! rational Gaussian elimination. Loops that can never escape contribute
//! trapped mass; configurations beyond the exploration cap contribute
//! unresolved mass, which keeps the report a certified bound rather than a
//! point estimate.

use std::collections::BTreeMap;

use crate::exactmath::Rational;

use super::report::RoundReport;
use super::system::{Child, System};
use super::EngineError;

#[derive(Clone, Debug)]
pub struct AbsorbOptions {
    /// Maximum number of distinct configurations to explore.
    pub max_configs: usize,
    /// Optional breadth-first depth cap. Configurations first reached beyond
    /// it become unresolved mass; useful when an adversarial stream makes the
    /// graph infinite but the mass at depth d decays geometrically.
    pub max_depth: Option<u64>,
}

impl Default for AbsorbOptions {
    fn default() -> Self {
        AbsorbOptions {
            max_configs: 200_000,
            max_depth: None,
        }
    }
}

impl AbsorbOptions {
    pub fn depth(max_depth: u64) -> Self {
        AbsorbOptions {
            max_depth: Some(max_depth),
            ..AbsorbOptions::default()
        }
    }
}

const ACC: usize = 0;
const REJ: usize = 1;
const RES: usize = 2;
const UNR: usize = 3;

#[derive(Clone, Copy, Debug)]
enum Edge {
    Bucket(usize),
    Node(usize),
}

/// Exact per-round absorption probabilities from the initial configuration.
pub fn round_absorption<S: System>(
    sys: &S,
    opts: &AbsorbOptions,
) -> Result<RoundReport, EngineError> {
    let initial = sys.initial();

    // breadth-first exploration with deterministic node ids
    let mut ids: BTreeMap<S::Config, usize> = BTreeMap::new();
    let mut order: Vec<S::Config> = Vec::new();
    let mut depth: Vec<u64> = Vec::new();
    let mut edges: Vec<Vec<(Rational, Edge)>> = Vec::new();
    ids.insert(initial.clone(), 0);
    order.push(initial.clone());
    depth.push(0);
    let mut frontier = 0usize;
    while frontier < order.len() {
        let c = order[frontier].clone();
        let d = depth[frontier];
        let mut out = Vec::new();
        for (p, child) in sys.step(&c)? {
            let e = match child {
                Child::Accept => Edge::Bucket(ACC),
                Child::Reject => Edge::Bucket(REJ),
                Child::Config(c2) => {
                    if c2 == initial {
                        Edge::Bucket(RES)
                    } else if let Some(&id) = ids.get(&c2) {
                        Edge::Node(id)
                    } else if order.len() >= opts.max_configs
                        || opts.max_depth.is_some_and(|cap| d + 1 > cap)
                    {
                        Edge::Bucket(UNR)
                    } else {
                        let id = order.len();
                        ids.insert(c2.clone(), id);
                        order.push(c2);
                        depth.push(d + 1);
                        Edge::Node(id)
                    }
                }
            };
            out.push((p, e));
        }
        edges.push(out);
        frontier += 1;
    }
    let n = order.len();
    drop(ids);
    drop(order);

    // strongly connected components, reverse topological order
    let sccs = tarjan(n, &edges);

    // absorption vector per node: [accept, reject, restart, unresolved]
    let mut solved: Vec<Option<[Rational; 4]>> = vec![None; n];
    for scc in &sccs {
        solve_scc(scc, &edges, &mut solved)?;
    }

    let x = solved[0].clone().expect("initial node solved");
    let total: Rational = x.iter().sum();
    let trapped = Rational::one() - total;
    Ok(RoundReport {
        accept: x[ACC].clone(),
        reject: x[REJ].clone(),
        restart: x[RES].clone(),
        trapped,
        unresolved: x[UNR].clone(),
    })
}

/// Iterative Tarjan SCC; components are emitted sinks-first, which is exactly
/// the order the solver needs.
fn tarjan(n: usize, edges: &[Vec<(Rational, Edge)>]) -> Vec<Vec<usize>> {
    #[derive(Clone, Copy)]
    struct NodeState {
        index: usize,
        lowlink: usize,
        on_stack: bool,
        visited: bool,
    }
    let mut st = vec![
        NodeState {
            index: 0,
            lowlink: 0,
            on_stack: false,
            visited: false,
        };
        n
    ];
    let mut counter = 0usize;
    let mut stack: Vec<usize> = Vec::new();
    let mut sccs: Vec<Vec<usize>> = Vec::new();
    // explicit DFS: (node, next child index)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if st[root].visited {
            continue;
        }
        call.push((root, 0));
        'frames: while let Some(&(v, ci)) = call.last() {
            if ci == 0 {
                st[v].visited = true;
                st[v].index = counter;
                st[v].lowlink = counter;
                counter += 1;
                st[v].on_stack = true;
                stack.push(v);
            }
            let mut i = ci;
            while i < edges[v].len() {
                let e = edges[v][i].1;
                i += 1;
                if let Edge::Node(w) = e {
                    if !st[w].visited {
                        call.last_mut().unwrap().1 = i;
                        call.push((w, 0));
                        continue 'frames;
                    } else if st[w].on_stack {
                        st[v].lowlink = st[v].lowlink.min(st[w].index);
                    }
                }
            }
            // finished v
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                let low = st[v].lowlink;
                st[parent].lowlink = st[parent].lowlink.min(low);
            }
            if st[v].lowlink == st[v].index {
                let mut comp = Vec::new();
                while let Some(w) = stack.pop() {
                    st[w].on_stack = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                sccs.push(comp);
            }
        }
    }
    sccs
}

fn solve_scc(
    scc: &[usize],
    edges: &[Vec<(Rational, Edge)>],
    solved: &mut Vec<Option<[Rational; 4]>>,
) -> Result<(), EngineError> {
    let m = scc.len();
    let pos: BTreeMap<usize, usize> = scc.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    // constant term per node: direct absorption plus edges into solved nodes
    let zero = || [
        Rational::zero(),
        Rational::zero(),
        Rational::zero(),
        Rational::zero(),
    ];
    let mut b: Vec<[Rational; 4]> = vec![zero(); m];
    // inner[i] = list of (j, weight) for edges that stay inside the SCC
    let mut inner: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); m];
    let mut any_escape = false;
    for (i, &v) in scc.iter().enumerate() {
        for (p, e) in &edges[v] {
            match e {
                Edge::Bucket(k) => {
                    b[i][*k] += p;
                    any_escape = true;
                }
                Edge::Node(w) => {
                    if let Some(&j) = pos.get(w) {
                        inner[i].push((j, p.clone()));
                    } else {
                        let xw = solved[*w].as_ref().expect("reverse topological order");
                        for k in 0..4 {
                            b[i][k] += &(p * &xw[k]);
                        }
                        any_escape = true;
                    }
                }
            }
        }
    }

    if !any_escape {
        // closed recurrent class: never absorbs, all mass trapped
        for &v in scc {
            solved[v] = Some(zero());
        }
        return Ok(());
    }

    if m == 1 && inner[0].is_empty() {
        solved[scc[0]] = Some(b.remove(0));
        return Ok(());
    }

    // solve (I - T) X = B by Gauss-Jordan over the rationals
    let mut a: Vec<Vec<Rational>> = vec![vec![Rational::zero(); m]; m];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    for (i, ins) in inner.iter().enumerate() {
        for (j, p) in ins {
            a[i][*j] -= p;
        }
    }
    for col in 0..m {
        let pivot = (col..m)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(EngineError::SolverSingular)?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip().expect("pivot nonzero");
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for x in b[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for cc in 0..m {
                let t = &f * &a[col][cc];
                a[r][cc] -= &t;
            }
            for k in 0..4 {
                let t = &f * &b[col][k];
                b[r][k] -= &t;
            }
        }
    }
    for (i, &v) in scc.iter().enumerate() {
        solved[v] = Some(b[i].clone());
    }
    Ok(())
}
