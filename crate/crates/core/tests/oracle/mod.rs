//! Dense reference implementation used as a test oracle.
//!
//! Shares no code with the library: its own model reader, exterior algebra
//! signs, operator construction and naive Gauss-Jordan elimination. Forms of
//! degree `k` are coordinate vectors over increasing index lists in
//! lexicographic order; operators are dense row-major matrices.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

pub type Q = BigRational;
pub type Matrix = Vec<Vec<Q>>;

fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

// ---- dense linear algebra ---------------------------------------------------

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Q::zero(); cols]; rows]
}

pub fn identity(size: usize) -> Matrix {
    let mut m = zeros(size, size);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    m
}

pub fn mul(a: &Matrix, b: &Matrix, inner: usize, cols: usize) -> Matrix {
    let mut out = zeros(a.len(), cols);
    for (i, row) in a.iter().enumerate() {
        for (t, x) in row.iter().enumerate().take(inner) {
            if x.is_zero() {
                continue;
            }
            for j in 0..cols {
                if !b[t][j].is_zero() {
                    out[i][j] += x * &b[t][j];
                }
            }
        }
    }
    out
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &Matrix, cols: usize) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..cols {
                    let delta = &f * &a[row][c];
                    a[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    (a, pivots)
}

pub fn rank(m: &Matrix, cols: usize) -> usize {
    rref(m, cols).1.len()
}

/// Columns of a `rows x cols` matrix given as a list of column vectors.
pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Matrix {
    let mut m = zeros(rows, columns.len());
    for (j, c) in columns.iter().enumerate() {
        for i in 0..rows {
            m[i][j] = c[i].clone();
        }
    }
    m
}

pub fn columns(m: &Matrix, cols: usize) -> Vec<Vec<Q>> {
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Basis of the null space, as column vectors.
pub fn kernel(m: &Matrix, cols: usize) -> Vec<Vec<Q>> {
    let (r, pivots) = rref(m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[i][f].clone();
            }
            v
        })
        .collect()
}

/// Pivot columns of `m`: a basis of its column space.
pub fn image(m: &Matrix, cols: usize) -> Vec<Vec<Q>> {
    let (_, pivots) = rref(m, cols);
    let all = columns(m, cols);
    pivots.into_iter().map(|p| all[p].clone()).collect()
}

pub fn span_dim(rows: usize, vectors: &[Vec<Q>]) -> usize {
    rank(&from_columns(rows, vectors), vectors.len())
}

/// `dim(U cap V) = dim U + dim V - dim(U + V)` for spanning sets.
pub fn intersection_dim(rows: usize, u: &[Vec<Q>], v: &[Vec<Q>]) -> usize {
    let both: Vec<Vec<Q>> = u.iter().chain(v).cloned().collect();
    span_dim(rows, u) + span_dim(rows, v) - span_dim(rows, &both)
}

pub fn inverse(m: &Matrix) -> Matrix {
    let n = m.len();
    let augmented: Matrix = m
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let (r, pivots) = rref(&augmented, 2 * n);
    assert_eq!(pivots, (0..n).collect::<Vec<_>>(), "matrix is singular");
    r.into_iter().map(|row| row[n..].to_vec()).collect()
}

fn stack(top: &Matrix, bottom: &Matrix) -> Matrix {
    top.iter().chain(bottom).cloned().collect()
}

// ---- exterior algebra -------------------------------------------------------

type Mono = Vec<usize>;

/// Sorts a list of distinct indices; `None` on a repeat, else the permutation sign.
fn normalize(mut v: Mono) -> Option<(Q, Mono)> {
    let mut inversions = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] == v[j] {
                return None;
            }
            if v[i] > v[j] {
                inversions += 1;
            }
        }
    }
    v.sort_unstable();
    Some((if inversions % 2 == 0 { Q::one() } else { -Q::one() }, v))
}

fn combinations(m: usize, k: usize) -> Vec<Mono> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=m {
        for rest in combinations(m, k - 1) {
            if rest.first().is_none_or(|&r| r > first) {
                let mut v = vec![first];
                v.extend(rest);
                out.push(v);
            }
        }
    }
    out.sort();
    out
}

pub struct Oracle {
    pub name: String,
    pub n: usize,
    bases: Vec<Vec<Mono>>,
    index: Vec<HashMap<Mono, usize>>,
    /// `d e^i` as `(a, b, c)` terms of `c e^a ^ e^b`.
    de: Vec<Vec<(usize, usize, Q)>>,
    omega: Vec<(usize, usize, Q)>,
    d: Vec<Matrix>,
    l: Vec<Matrix>,
    lam: Vec<Matrix>,
}

fn read_terms(v: &Value) -> Vec<(usize, usize, Q)> {
    match v {
        Value::String(s) => {
            let mut terms = Vec::new();
            let mut sign = 1;
            let mut digits = Vec::new();
            let mut flush = |digits: &mut Vec<usize>, sign: i64| {
                if digits.len() == 2 {
                    terms.push((digits[0], digits[1], q(sign)));
                } else {
                    assert!(digits.is_empty() || digits == &[0], "bad shorthand {s}");
                }
                digits.clear();
            };
            for ch in s.chars().filter(|c| !c.is_whitespace()) {
                match ch {
                    '+' | '-' => {
                        flush(&mut digits, sign);
                        sign = if ch == '-' { -1 } else { 1 };
                    }
                    c => digits.push(c.to_digit(10).expect("digit") as usize),
                }
            }
            flush(&mut digits, sign);
            terms
        }
        Value::Array(items) => items
            .iter()
            .map(|t| {
                let t = t.as_array().expect("triple");
                let c = match &t[2] {
                    Value::Number(x) => q(x.as_i64().expect("integer")),
                    Value::String(s) => {
                        let (a, b) = s.split_once('/').unwrap_or((s, "1"));
                        Q::new(a.trim().parse().unwrap(), b.trim().parse().unwrap())
                    }
                    other => panic!("bad coefficient {other}"),
                };
                (t[0].as_u64().unwrap() as usize, t[1].as_u64().unwrap() as usize, c)
            })
            .collect(),
        other => panic!("bad term list {other}"),
    }
}

impl Oracle {
    pub fn from_json(text: &str) -> Self {
        let v: Value = serde_json::from_str(text).expect("model json");
        let n = v["n"].as_u64().expect("n") as usize;
        let m = 2 * n;
        let mut de = vec![Vec::new(); m + 1];
        if let Some(map) = v["differential"].as_object() {
            for (key, terms) in map {
                de[key.parse::<usize>().unwrap()] = read_terms(terms);
            }
        }
        let bases: Vec<Vec<Mono>> = (0..=m).map(|k| combinations(m, k)).collect();
        let index = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, mono)| (mono.clone(), i)).collect())
            .collect();
        let mut oracle = Oracle {
            name: v["name"].as_str().unwrap_or("").to_string(),
            n,
            bases,
            index,
            de,
            omega: read_terms(&v["omega"]),
            d: Vec::new(),
            l: Vec::new(),
            lam: Vec::new(),
        };
        oracle.d = (0..=m).map(|k| oracle.build_d(k)).collect();
        oracle.l = (0..=m).map(|k| oracle.build_l(k)).collect();
        oracle.lam = oracle.build_lambda();
        oracle
    }

    pub fn dim(&self, k: usize) -> usize {
        self.bases[k].len()
    }

    fn top(&self) -> usize {
        2 * self.n
    }

    fn add(&self, out: &mut [Q], k: usize, mono: Mono, c: Q) {
        if let Some((sign, sorted)) = normalize(mono) {
            out[self.index[k][&sorted]] += sign * c;
        }
    }

    /// Column-by-column matrix of a map `Omega^from -> Omega^to` given on monomials.
    fn matrix_of(&self, from: usize, to: usize, f: impl Fn(&Mono, &mut [Q])) -> Matrix {
        let cols: Vec<Vec<Q>> = self.bases[from]
            .iter()
            .map(|mono| {
                let mut v = vec![Q::zero(); self.dim(to)];
                f(mono, &mut v);
                v
            })
            .collect();
        from_columns(self.dim(to), &cols)
    }

    fn build_d(&self, k: usize) -> Matrix {
        if k == self.top() {
            return zeros(0, self.dim(k));
        }
        self.matrix_of(k, k + 1, |mono, out| {
            for (pos, &i) in mono.iter().enumerate() {
                let sign = if pos % 2 == 0 { q(1) } else { q(-1) };
                for (a, b, c) in &self.de[i] {
                    let mut word = mono[..pos].to_vec();
                    word.extend([*a, *b]);
                    word.extend_from_slice(&mono[pos + 1..]);
                    self.add(out, k + 1, word, &sign * c);
                }
            }
        })
    }

    fn build_l(&self, k: usize) -> Matrix {
        if k + 2 > self.top() {
            return zeros(0, self.dim(k));
        }
        self.matrix_of(k, k + 2, |mono, out| {
            for (a, b, c) in &self.omega {
                let mut word = mono.clone();
                word.extend([*a, *b]);
                self.add(out, k + 2, word, c.clone());
            }
        })
    }

    /// `sum_{i<j} s pi^{ij} iota_i iota_j` with `pi` the inverse of the
    /// matrix of omega and the sign `s` fixed by `[Lambda, L] = H`.
    fn build_lambda(&self) -> Vec<Matrix> {
        let m = self.top();
        let mut w = zeros(m, m);
        for (a, b, c) in &self.omega {
            w[a - 1][b - 1] = c.clone();
            w[b - 1][a - 1] = -c.clone();
        }
        let pi = inverse(&w);
        let interior = |i: usize, mono: &Mono| -> Option<(Q, Mono)> {
            let pos = mono.iter().position(|&x| x == i)?;
            let mut rest = mono.clone();
            rest.remove(pos);
            Some((if pos % 2 == 0 { q(1) } else { q(-1) }, rest))
        };
        let raw: Vec<Matrix> = (0..=m)
            .map(|k| {
                if k < 2 {
                    return zeros(0, self.dim(k));
                }
                self.matrix_of(k, k - 2, |mono, out| {
                    for i in 1..=m {
                        for j in i + 1..=m {
                            let c = &pi[i - 1][j - 1];
                            if c.is_zero() {
                                continue;
                            }
                            // iota_i iota_j: apply iota_j first.
                            let Some((s1, once)) = interior(j, mono) else { continue };
                            let Some((s2, twice)) = interior(i, &once) else { continue };
                            out[self.index[k - 2][&twice]] += s1 * s2 * c;
                        }
                    }
                })
            })
            .collect();
        for sign in [q(1), q(-1)] {
            let lam: Vec<Matrix> = raw
                .iter()
                .map(|mat| mat.iter().map(|r| r.iter().map(|x| x * &sign).collect()).collect())
                .collect();
            if self.satisfies_sl2(&lam) {
                return lam;
            }
        }
        panic!("no normalization of Lambda satisfies [Lambda, L] = H on {}", self.name);
    }

    fn satisfies_sl2(&self, lam: &[Matrix]) -> bool {
        let n = self.n as i64;
        (0..=self.top()).all(|k| {
            let dk = self.dim(k);
            let mut comm = zeros(dk, dk);
            if k + 2 <= self.top() {
                let up_down = mul(&lam[k + 2], &self.l[k], self.dim(k + 2), dk);
                for (i, row) in up_down.into_iter().enumerate() {
                    for (j, x) in row.into_iter().enumerate() {
                        comm[i][j] += x;
                    }
                }
            }
            if k >= 2 {
                let down_up = mul(&self.l[k - 2], &lam[k], self.dim(k - 2), dk);
                for (i, row) in down_up.into_iter().enumerate() {
                    for (j, x) in row.into_iter().enumerate() {
                        comm[i][j] -= x;
                    }
                }
            }
            let h = q(n - k as i64);
            (0..dk).all(|i| (0..dk).all(|j| comm[i][j] == if i == j { h.clone() } else { Q::zero() }))
        })
    }

    // ---- composite operators ------------------------------------------------

    /// `L^j: Omega^k -> Omega^{k+2j}` (zero map past the top degree).
    pub fn l_power(&self, k: usize, j: usize) -> Matrix {
        let mut acc = identity(self.dim(k));
        for step in 0..j {
            let deg = k + 2 * step;
            if deg + 2 > self.top() {
                return zeros(0, self.dim(k));
            }
            acc = mul(&self.l[deg], &acc, self.dim(deg), self.dim(k));
        }
        acc
    }

    /// `Lambda^j: Omega^k -> Omega^{k-2j}`, or `None` when `k < 2j` (the zero map to nothing).
    pub fn lambda_power(&self, k: usize, j: usize) -> Option<Matrix> {
        if k < 2 * j {
            return None;
        }
        let mut acc = identity(self.dim(k));
        for step in 0..j {
            let deg = k - 2 * step;
            acc = mul(&self.lam[deg], &acc, self.dim(deg), self.dim(k));
        }
        Some(acc)
    }

    /// `ker Lambda^{p+1}` on `Omega^k`: the `p`-filtered forms.
    pub fn filtered(&self, p: usize, k: usize) -> Vec<Vec<Q>> {
        match self.lambda_power(k, p + 1) {
            Some(m) => kernel(&m, self.dim(k)),
            None => columns(&identity(self.dim(k)), self.dim(k)),
        }
    }

    /// `(Pi^p, L^{-(p+1)})` on `Omega^k` from `a = Pi^p a + L^{p+1} b` with
    /// `Lambda^{p+1} Pi^p a = 0` and `b in im Lambda^{p+1}`.
    pub fn split(&self, p: usize, k: usize) -> (Matrix, Matrix) {
        let dk = self.dim(k);
        let kept = self.filtered(p, k);
        let (lifted, sources) = if k >= 2 * p + 2 {
            let low = k - 2 * p - 2;
            let lam = self.lambda_power(k, p + 1).expect("degree allows it");
            let sources = image(&lam, dk);
            let lp = self.l_power(low, p + 1);
            let lifted: Vec<Vec<Q>> = sources
                .iter()
                .map(|v| columns(&mul(&lp, &from_columns(self.dim(low), std::slice::from_ref(v)), self.dim(low), 1), 1).remove(0))
                .collect();
            (lifted, (low, sources))
        } else {
            (Vec::new(), (0, Vec::new()))
        };
        let all: Vec<Vec<Q>> = kept.iter().chain(&lifted).cloned().collect();
        assert_eq!(all.len(), dk, "Lefschetz splitting has the wrong dimension");
        let coords = inverse(&from_columns(dk, &all));
        let pi = mul(&from_columns(dk, &kept), &coords[..kept.len()].to_vec(), kept.len(), dk);
        let (low, sources) = sources;
        let l_inv = if sources.is_empty() {
            zeros(if k >= 2 * p + 2 { self.dim(low) } else { 0 }, dk)
        } else {
            mul(&from_columns(self.dim(low), &sources), &coords[kept.len()..].to_vec(), sources.len(), dk)
        };
        (pi, l_inv)
    }

    /// `*_r` on `Omega^k`, landing in `Omega^{2n-k}`.
    pub fn star(&self, k: usize) -> Matrix {
        if k <= self.n {
            self.l_power(k, self.n - k)
        } else {
            self.split(k - self.n - 1, k).1
        }
    }

    pub fn d(&self, k: usize) -> &Matrix {
        &self.d[k]
    }

    /// `d^Lambda = d Lambda - Lambda d` on `Omega^k`, landing in `Omega^{k-1}`.
    pub fn d_lambda(&self, k: usize) -> Matrix {
        let dk = self.dim(k);
        if k == 0 {
            return zeros(0, dk);
        }
        let mut out = zeros(self.dim(k - 1), dk);
        if k >= 2 {
            let a = mul(&self.d[k - 2], &self.lam[k], self.dim(k - 2), dk);
            for (i, row) in a.into_iter().enumerate() {
                for (j, x) in row.into_iter().enumerate() {
                    out[i][j] += x;
                }
            }
        }
        if k + 1 >= 2 && k < self.top() {
            let b = mul(&self.lam[k + 1], &self.d[k], self.dim(k + 1), dk);
            for (i, row) in b.into_iter().enumerate() {
                for (j, x) in row.into_iter().enumerate() {
                    out[i][j] -= x;
                }
            }
        }
        out
    }

    /// `dd^Lambda: Omega^k -> Omega^k`.
    pub fn dd_lambda(&self, k: usize) -> Matrix {
        if k == 0 {
            return zeros(self.dim(0), self.dim(0));
        }
        mul(&self.d[k - 1], &self.d_lambda(k), self.dim(k - 1), self.dim(k))
    }

    // ---- cohomology dimensions ----------------------------------------------

    pub fn betti(&self) -> Vec<usize> {
        (0..=self.top())
            .map(|k| {
                let dk = self.dim(k);
                let nullity = dk - rank(&self.d[k], dk);
                let incoming = if k == 0 { 0 } else { rank(&self.d[k - 1], self.dim(k - 1)) };
                nullity - incoming
            })
            .collect()
    }

    fn form_degree(&self, p: usize, c: usize) -> usize {
        c.min(2 * self.n + 2 * p + 1 - c)
    }

    /// Ambient matrix of the filtered differential `d_c`.
    pub fn filtered_differential(&self, p: usize, c: usize) -> Matrix {
        let n = self.n;
        let j = self.form_degree(p, c);
        let dj = self.dim(j);
        if c < n + p {
            let (pi, _) = self.split(p, j + 1);
            mul(&pi, &self.d[j], self.dim(j + 1), dj)
        } else if c == n + p && j == self.top() {
            zeros(self.dim(j), dj)
        } else if c == n + p {
            let first = &self.d[j];
            let (_, l_inv) = self.split(p, j + 1);
            let low = j + 1 - 2 * p - 2;
            let mut m = mul(&l_inv, first, self.dim(j + 1), dj);
            m = mul(&self.d[low], &m, self.dim(low), dj);
            mul(&self.star(low + 1), &m, self.dim(low + 1), dj)
        } else {
            let s1 = self.star(j);
            let up = 2 * n - j;
            let m = mul(&self.d[up], &s1, self.dim(up), dj);
            mul(&self.star(up + 1), &m, self.dim(up + 1), dj)
        }
    }

    /// `dim F^pH^c` for `c = 0..=2n+2p+1`, asserting `d^2 = 0` and that each
    /// differential preserves the filtered subspaces.
    pub fn filtered_cohomology(&self, p: usize) -> Vec<usize> {
        let top = 2 * self.n + 2 * p + 1;
        let spaces: Vec<Vec<Vec<Q>>> = (0..=top).map(|c| self.filtered(p, self.form_degree(p, c))).collect();
        let restricted: Vec<(Matrix, usize)> = (0..top)
            .map(|c| {
                let j = self.form_degree(p, c);
                let d = self.filtered_differential(p, c);
                let m = mul(&d, &from_columns(self.dim(j), &spaces[c]), self.dim(j), spaces[c].len());
                let target = self.form_degree(p, c + 1);
                let image = columns(&m, spaces[c].len());
                assert_eq!(
                    intersection_dim(self.dim(target), &image, &spaces[c + 1]),
                    span_dim(self.dim(target), &image),
                    "d_{c} leaves F_p"
                );
                (m, spaces[c].len())
            })
            .collect();
        for c in 0..top.saturating_sub(1) {
            let (m, cols) = &restricted[c];
            let next = self.filtered_differential(p, c + 1);
            let j = self.form_degree(p, c + 1);
            let composite = mul(&next, m, self.dim(j), *cols);
            assert!(composite.iter().flatten().all(Zero::is_zero), "d^2 != 0 at {c}");
        }
        (0..=top)
            .map(|c| {
                let out = if c < top { rank(&restricted[c].0, restricted[c].1) } else { 0 };
                let inc = if c > 0 { rank(&restricted[c - 1].0, restricted[c - 1].1) } else { 0 };
                spaces[c].len() - out - inc
            })
            .collect()
    }

    pub fn h_d_plus_dlambda(&self) -> Vec<usize> {
        (0..=self.top())
            .map(|k| {
                let dk = self.dim(k);
                let both = stack(&self.d[k], &self.d_lambda(k));
                dk - rank(&both, dk) - rank(&self.dd_lambda(k), dk)
            })
            .collect()
    }

    fn exact_plus_coexact(&self, k: usize) -> Vec<Vec<Q>> {
        let mut gens = Vec::new();
        if k > 0 {
            gens.extend(columns(&self.d[k - 1], self.dim(k - 1)));
        }
        if k < self.top() {
            gens.extend(columns(&self.d_lambda(k + 1), self.dim(k + 1)));
        }
        gens
    }

    pub fn h_ddlambda(&self) -> Vec<usize> {
        (0..=self.top())
            .map(|k| {
                let dk = self.dim(k);
                let nullity = dk - rank(&self.dd_lambda(k), dk);
                nullity - span_dim(dk, &self.exact_plus_coexact(k))
            })
            .collect()
    }

    fn primitive(&self, k: usize) -> Vec<Vec<Q>> {
        self.filtered(0, k)
    }

    /// `(ker d cap P^k) / (im dd^Lambda cap P^k)`.
    pub fn ph_d_plus_dlambda(&self) -> Vec<usize> {
        (0..=self.n)
            .map(|k| {
                let dk = self.dim(k);
                let prim = self.primitive(k);
                let closed = intersection_dim(dk, &kernel(&self.d[k], dk), &prim);
                let exact = intersection_dim(dk, &columns(&self.dd_lambda(k), dk), &prim);
                closed - exact
            })
            .collect()
    }

    /// `(ker dd^Lambda cap P^k) / ((im d + im d^Lambda) cap P^k)`.
    pub fn ph_ddlambda(&self) -> Vec<usize> {
        (0..=self.n)
            .map(|k| {
                let dk = self.dim(k);
                let prim = self.primitive(k);
                let closed = intersection_dim(dk, &kernel(&self.dd_lambda(k), dk), &prim);
                let exact = intersection_dim(dk, &self.exact_plus_coexact(k), &prim);
                closed - exact
            })
            .collect()
    }

    /// Sum of the primitive dimensions `sum_r dim PH^{k-2r}` per degree.
    pub fn lefschetz_sums(&self, prim: &[usize]) -> Vec<usize> {
        let n = self.n;
        (0..=2 * n)
            .map(|k| {
                let lo = k.saturating_sub(n);
                (lo..=k / 2).map(|r| prim[k - 2 * r]).sum()
            })
            .collect()
    }
}
