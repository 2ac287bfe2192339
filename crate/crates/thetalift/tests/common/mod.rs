//! A brute-force search for minimal-degree joint highest weight vectors in
//! polynomials on 2n × m matrices, for the compact pair (O(2n), gl(m)).
//!
//! Coordinates: the form on each column is Σ_a u_a·v_a, so the torus of
//! so(2n) gives u_{aj} weight +e_a and v_{aj} weight −e_a. A polynomial of
//! so(2n)-weight ν and gl(m)-weight λ killed by the Laplacians and by all
//! raising operators is a joint highest weight vector of the harmonics.

#![allow(dead_code)]

use std::collections::BTreeMap;
use thetalift::matrix::Matrix;
use thetalift::Rational;

type Mono = Vec<u8>;

/// One term c·x_mul·∂_{d1}∂_{d2}…
#[derive(Clone)]
struct Term {
    c: i64,
    mul: Option<usize>,
    diff: Vec<usize>,
}

type Op = Vec<Term>;

pub struct Harmonics {
    n: usize,
    m: usize,
}

impl Harmonics {
    pub fn new(n: usize, m: usize) -> Self {
        Harmonics { n, m }
    }

    fn u(&self, a: usize, j: usize) -> usize {
        a * self.m + j
    }

    fn v(&self, a: usize, j: usize) -> usize {
        (self.n + a) * self.m + j
    }

    fn nvars(&self) -> usize {
        2 * self.n * self.m
    }

    fn laplacians(&self) -> Vec<Op> {
        let mut out = Vec::new();
        for j in 0..self.m {
            for l in j..self.m {
                let mut op = Vec::new();
                for a in 0..self.n {
                    op.push(Term { c: 1, mul: None, diff: vec![self.u(a, j), self.v(a, l)] });
                    op.push(Term { c: 1, mul: None, diff: vec![self.v(a, j), self.u(a, l)] });
                }
                out.push(op);
            }
        }
        out
    }

    /// Raising operators for e_a − e_b and e_a + e_b (a < b), acting on
    /// every column.
    fn so_raising(&self) -> Vec<Op> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                let mut diff = Vec::new();
                let mut sum = Vec::new();
                for j in 0..self.m {
                    diff.push(Term { c: 1, mul: Some(self.u(a, j)), diff: vec![self.u(b, j)] });
                    diff.push(Term { c: -1, mul: Some(self.v(b, j)), diff: vec![self.v(a, j)] });
                    sum.push(Term { c: 1, mul: Some(self.u(a, j)), diff: vec![self.v(b, j)] });
                    sum.push(Term { c: -1, mul: Some(self.u(b, j)), diff: vec![self.v(a, j)] });
                }
                out.push(diff);
                out.push(sum);
            }
        }
        out
    }

    fn gl_raising(&self) -> Vec<Op> {
        let mut out = Vec::new();
        for j in 0..self.m {
            for l in j + 1..self.m {
                let mut op = Vec::new();
                for a in 0..self.n {
                    op.push(Term { c: 1, mul: Some(self.u(a, j)), diff: vec![self.u(a, l)] });
                    op.push(Term { c: 1, mul: Some(self.v(a, j)), diff: vec![self.v(a, l)] });
                }
                out.push(op);
            }
        }
        out
    }

    fn so_weight(&self, e: &[u8]) -> Vec<i64> {
        (0..self.n)
            .map(|a| (0..self.m).map(|j| e[self.u(a, j)] as i64 - e[self.v(a, j)] as i64).sum())
            .collect()
    }

    fn gl_weight(&self, e: &[u8]) -> Vec<i64> {
        (0..self.m)
            .map(|j| (0..self.n).map(|a| e[self.u(a, j)] as i64 + e[self.v(a, j)] as i64).sum())
            .collect()
    }

    fn monomials(&self, d: usize) -> Vec<Mono> {
        let nv = self.nvars();
        let mut out = Vec::new();
        let mut cur = vec![0u8; nv];
        fn rec(i: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Mono>) {
            if i + 1 == cur.len() {
                cur[i] = left as u8;
                out.push(cur.clone());
                return;
            }
            for k in 0..=left {
                cur[i] = k as u8;
                rec(i + 1, left - k, cur, out);
            }
            cur[i] = 0;
        }
        rec(0, d, &mut cur, &mut out);
        out
    }

    /// The reflection u_{n,j} ↔ v_{n,j}, an element of O(2n)
    /// outside SO(2n).
    fn reflect(&self, e: &[u8]) -> Mono {
        let mut f = e.to_vec();
        for j in 0..self.m {
            f.swap(self.u(self.n - 1, j), self.v(self.n - 1, j));
        }
        f
    }

    /// gl(m) highest weights λ of minimal degree ≤ `max_degree` carrying a
    /// joint highest weight vector of so(2n)-weight ν. With ν_n = 0 the
    /// reflection must act by `sign`; otherwise `sign` is ignored.
    pub fn minimal_types(&self, nu: &[i64], sign: i64, max_degree: usize) -> Option<(usize, Vec<Vec<i64>>)> {
        assert_eq!(nu.len(), self.n);
        let mut ops = self.laplacians();
        ops.extend(self.so_raising());
        ops.extend(self.gl_raising());
        for d in 0..=max_degree {
            let mut by_gl: BTreeMap<Vec<i64>, Vec<Mono>> = BTreeMap::new();
            for e in self.monomials(d) {
                if self.so_weight(&e) == nu {
                    by_gl.entry(self.gl_weight(&e)).or_default().push(e);
                }
            }
            let mut found = Vec::new();
            for (lambda, basis) in by_gl.into_iter().rev() {
                if lambda.windows(2).any(|w| w[0] < w[1]) {
                    continue;
                }
                let hw = self.kernel(&basis, &ops);
                if hw.is_empty() {
                    continue;
                }
                let ok = if nu[self.n - 1] == 0 { self.has_eigenvector(&basis, &hw, sign) } else { true };
                if ok {
                    found.push(lambda);
                }
            }
            if !found.is_empty() {
                return Some((d, found));
            }
        }
        None
    }

    fn kernel(&self, basis: &[Mono], ops: &[Op]) -> Vec<Vec<Rational>> {
        let mut rows: BTreeMap<(usize, Mono), Vec<Rational>> = BTreeMap::new();
        for (col, e) in basis.iter().enumerate() {
            for (k, op) in ops.iter().enumerate() {
                for (mono, c) in apply(op, e) {
                    let row = rows.entry((k, mono)).or_insert_with(|| vec![Rational::from_integer(0.into()); basis.len()]);
                    row[col] += c;
                }
            }
        }
        if rows.is_empty() {
            return (0..basis.len())
                .map(|i| (0..basis.len()).map(|j| Rational::from_integer(((i == j) as i64).into())).collect())
                .collect();
        }
        let rows: Vec<Vec<Rational>> = rows.into_values().collect();
        Matrix::from_rows(rows).nullspace()
    }

    /// Whether some f in span(hw) has R·f = sign·f.
    fn has_eigenvector(&self, basis: &[Mono], hw: &[Vec<Rational>], sign: i64) -> bool {
        let index: BTreeMap<&Mono, usize> = basis.iter().enumerate().map(|(i, e)| (e, i)).collect();
        // Columns: (R − sign)·h for each h in hw, in monomial coordinates.
        let cols: Vec<Vec<Rational>> = hw
            .iter()
            .map(|h| {
                let mut out = vec![Rational::from_integer(0.into()); basis.len()];
                for (i, c) in h.iter().enumerate() {
                    let j = index[&self.reflect(&basis[i])];
                    out[j] += c.clone();
                    out[i] -= c.clone() * Rational::from_integer(sign.into());
                }
                out
            })
            .collect();
        let m = Matrix::from_fn(basis.len(), hw.len(), |r, c| cols[c][r].clone());
        !m.nullspace().is_empty()
    }
}

fn apply(op: &Op, e: &[u8]) -> Vec<(Mono, Rational)> {
    let mut out = Vec::new();
    'terms: for t in op {
        let mut f = e.to_vec();
        let mut c = t.c;
        for &d in &t.diff {
            if f[d] == 0 {
                continue 'terms;
            }
            c *= f[d] as i64;
            f[d] -= 1;
        }
        if let Some(x) = t.mul {
            f[x] += 1;
        }
        out.push((f, Rational::from_integer(c.into())));
    }
    out
}

/// Partitions of length `len` (trailing zeros allowed) with entries ≤ `max`.
pub fn partitions(len: usize, max: i64) -> Vec<Vec<i64>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=max {
        for mut rest in partitions(len - 1, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
