//! Smith normal form over `Z`, with unimodular transforms and the integer
//! solvers built on top of it (kernels, lattice membership, mixed
//! integer/rational systems).

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::{IntMat, RatMat};
use crate::{Int, Rat};

/// Which transform matrices to accumulate. Skipping the row transforms on a
/// tall matrix avoids an `rows x rows` dense accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct SnfOptions {
    pub want_u: bool,
    pub want_u_inv: bool,
    pub want_v: bool,
    pub want_v_inv: bool,
}

impl SnfOptions {
    pub fn all() -> Self {
        SnfOptions {
            want_u: true,
            want_u_inv: true,
            want_v: true,
            want_v_inv: true,
        }
    }
}

/// Result of `U * M * V = D` with `D` diagonal, `d_1 | d_2 | ...`, and
/// `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    rows: usize,
    cols: usize,
    /// Nonnegative diagonal entries, length `min(rows, cols)`.
    pub diag: Vec<Int>,
    pub rank: usize,
    pub u: Option<IntMat>,
    pub u_inv: Option<IntMat>,
    pub v: Option<IntMat>,
    pub v_inv: Option<IntMat>,
}

impl SmithDecomposition {
    pub fn diag_matrix(&self) -> IntMat {
        let mut d = IntMat::zeros(self.rows, self.cols);
        for (i, x) in self.diag.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }

    /// Nontrivial invariant factors (absolute value > 1).
    pub fn torsion_divisors(&self) -> Vec<Int> {
        self.diag
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect()
    }
}

struct Work {
    m: IntMat,
    u: Option<IntMat>,
    u_inv: Option<IntMat>,
    v: Option<IntMat>,
    v_inv: Option<IntMat>,
}

impl Work {
    fn row_swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.m.cols() {
            let x = self.m[(a, j)].clone();
            self.m[(a, j)] = self.m[(b, j)].clone();
            self.m[(b, j)] = x;
        }
        if let Some(u) = &mut self.u {
            for j in 0..u.cols() {
                let x = u[(a, j)].clone();
                u[(a, j)] = u[(b, j)].clone();
                u[(b, j)] = x;
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for i in 0..ui.rows() {
                let x = ui[(i, a)].clone();
                ui[(i, a)] = ui[(i, b)].clone();
                ui[(i, b)] = x;
            }
        }
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.m.rows() {
            let x = self.m[(i, a)].clone();
            self.m[(i, a)] = self.m[(i, b)].clone();
            self.m[(i, b)] = x;
        }
        if let Some(v) = &mut self.v {
            for i in 0..v.rows() {
                let x = v[(i, a)].clone();
                v[(i, a)] = v[(i, b)].clone();
                v[(i, b)] = x;
            }
        }
        if let Some(vi) = &mut self.v_inv {
            for j in 0..vi.cols() {
                let x = vi[(a, j)].clone();
                vi[(a, j)] = vi[(b, j)].clone();
                vi[(b, j)] = x;
            }
        }
    }

    /// row[dst] += c * row[src]
    fn row_add(&mut self, dst: usize, src: usize, c: &Int) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.m.cols() {
            if !self.m[(src, j)].is_zero() {
                let t = c.clone() * self.m[(src, j)].clone();
                self.m[(dst, j)] += t;
            }
        }
        if let Some(u) = &mut self.u {
            for j in 0..u.cols() {
                if !u[(src, j)].is_zero() {
                    let t = c.clone() * u[(src, j)].clone();
                    u[(dst, j)] += t;
                }
            }
        }
        if let Some(ui) = &mut self.u_inv {
            // right-multiply by inverse: col[src] -= c * col[dst]
            for i in 0..ui.rows() {
                if !ui[(i, dst)].is_zero() {
                    let t = c.clone() * ui[(i, dst)].clone();
                    ui[(i, src)] -= t;
                }
            }
        }
    }

    /// col[dst] += c * col[src]
    fn col_add(&mut self, dst: usize, src: usize, c: &Int) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.m.rows() {
            if !self.m[(i, src)].is_zero() {
                let t = c.clone() * self.m[(i, src)].clone();
                self.m[(i, dst)] += t;
            }
        }
        if let Some(v) = &mut self.v {
            for i in 0..v.rows() {
                if !v[(i, src)].is_zero() {
                    let t = c.clone() * v[(i, src)].clone();
                    v[(i, dst)] += t;
                }
            }
        }
        if let Some(vi) = &mut self.v_inv {
            // left-multiply by inverse: row[src] -= c * row[dst]
            for j in 0..vi.cols() {
                if !vi[(dst, j)].is_zero() {
                    let t = c.clone() * vi[(dst, j)].clone();
                    vi[(src, j)] -= t;
                }
            }
        }
    }

    fn row_negate(&mut self, r: usize) {
        for j in 0..self.m.cols() {
            let x = -self.m[(r, j)].clone();
            self.m[(r, j)] = x;
        }
        if let Some(u) = &mut self.u {
            for j in 0..u.cols() {
                let x = -u[(r, j)].clone();
                u[(r, j)] = x;
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for i in 0..ui.rows() {
                let x = -ui[(i, r)].clone();
                ui[(i, r)] = x;
            }
        }
    }
}

/// Smallest-magnitude nonzero entry of the trailing block, if any.
fn find_pivot(m: &IntMat, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, Int)> = None;
    for i in k..m.rows() {
        for j in k..m.cols() {
            let x = &m[(i, j)];
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            match &best {
                Some((_, _, b)) if *b <= a => {}
                _ => {
                    if a.is_one() {
                        return Some((i, j));
                    }
                    best = Some((i, j, a));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

pub fn smith_with(m: &IntMat, opts: SnfOptions) -> SmithDecomposition {
    if let Some(dec) = fast::smith_i128(m, opts) {
        debug_assert!(check_postconditions(m, &dec));
        return dec;
    }
    smith_bigint(m, opts)
}

fn smith_bigint(m: &IntMat, opts: SnfOptions) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        m: m.clone(),
        u: (opts.want_u).then(|| IntMat::identity(rows)),
        u_inv: (opts.want_u_inv).then(|| IntMat::identity(rows)),
        v: (opts.want_v).then(|| IntMat::identity(cols)),
        v_inv: (opts.want_v_inv).then(|| IntMat::identity(cols)),
    };
    let n = rows.min(cols);
    let mut rank = 0;
    for k in 0..n {
        'pivot: while let Some((pi, pj)) = find_pivot(&w.m, k) {
            w.row_swap(k, pi);
            w.col_swap(k, pj);
            if w.m[(k, k)].is_negative() {
                w.row_negate(k);
            }
            // clear below and to the right of the pivot by euclidean steps
            let mut clean = true;
            for i in k + 1..rows {
                if !w.m[(i, k)].is_zero() {
                    let q = w.m[(i, k)].div_floor(&w.m[(k, k)]);
                    w.row_add(i, k, &-q);
                    if !w.m[(i, k)].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue 'pivot;
            }
            for j in k + 1..cols {
                if !w.m[(k, j)].is_zero() {
                    let q = w.m[(k, j)].div_floor(&w.m[(k, k)]);
                    w.col_add(j, k, &-q);
                    if !w.m[(k, j)].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue 'pivot;
            }
            // pivot isolated; enforce divisibility of the trailing block
            // (vacuous for unit pivots)
            let p = w.m[(k, k)].clone();
            if !p.is_one() {
                for i in k + 1..rows {
                    for j in k + 1..cols {
                        if !(w.m[(i, j)].clone() % &p).is_zero() {
                            w.row_add(k, i, &Int::one());
                            continue 'pivot;
                        }
                    }
                }
            }
            rank += 1;
            break;
        }
        if w.m[(k, k)].is_zero() {
            break;
        }
    }
    let diag: Vec<Int> = (0..n).map(|i| w.m[(i, i)].clone()).collect();
    let dec = SmithDecomposition {
        rows,
        cols,
        diag,
        rank,
        u: w.u,
        u_inv: w.u_inv,
        v: w.v,
        v_inv: w.v_inv,
    };
    debug_assert!(check_postconditions(m, &dec));
    dec
}

/// `U * m * V = D` with the divisibility chain; the contract of the public
/// smith operation.
pub fn smith_normal_form(m: &IntMat) -> (IntMat, IntMat, IntMat) {
    let dec = smith_with(m, SnfOptions::all());
    (
        dec.diag_matrix(),
        dec.u.clone().expect("u requested"),
        dec.v.clone().expect("v requested"),
    )
}

#[cfg(debug_assertions)]
fn check_postconditions(m: &IntMat, dec: &SmithDecomposition) -> bool {
    // divisibility chain is always cheap to check
    for i in 1..dec.diag.len() {
        if !dec.diag[i - 1].is_zero() {
            assert!(
                (dec.diag[i].clone() % &dec.diag[i - 1]).is_zero(),
                "divisibility chain broken"
            );
        } else {
            assert!(dec.diag[i].is_zero(), "zero before nonzero divisor");
        }
    }
    // full product check only at desk scale
    if m.rows() * m.cols() <= 40_000 {
        if let (Some(u), Some(v)) = (&dec.u, &dec.v) {
            assert_eq!(u.mul(m).mul(v), dec.diag_matrix(), "U*M*V != D");
        }
        if let (Some(u), Some(ui)) = (&dec.u, &dec.u_inv) {
            assert_eq!(u.mul(ui), IntMat::identity(m.rows()), "U*U^-1 != I");
        }
        if let (Some(v), Some(vi)) = (&dec.v, &dec.v_inv) {
            assert_eq!(v.mul(vi), IntMat::identity(m.cols()), "V*V^-1 != I");
        }
    }
    true
}

#[cfg(not(debug_assertions))]
fn check_postconditions(_m: &IntMat, _dec: &SmithDecomposition) -> bool {
    true
}

/// Machine-word Smith normal form with overflow checking; bails out to the
/// arbitrary-precision path on any overflow. All arithmetic is `i128` with
/// `checked_*` operations, so a `Some` result is exact.
mod fast {
    use super::{SmithDecomposition, SnfOptions};
    use crate::matrix::IntMat;
    use crate::Int;
    use num_traits::ToPrimitive;

    struct FlatMat {
        rows: usize,
        cols: usize,
        data: Vec<i128>,
    }

    impl FlatMat {
        fn identity(n: usize) -> FlatMat {
            let mut data = vec![0; n * n];
            for i in 0..n {
                data[i * n + i] = 1;
            }
            FlatMat {
                rows: n,
                cols: n,
                data,
            }
        }

        #[inline]
        fn at(&self, i: usize, j: usize) -> i128 {
            self.data[i * self.cols + j]
        }

        #[inline]
        fn set(&mut self, i: usize, j: usize, v: i128) {
            self.data[i * self.cols + j] = v;
        }

        fn to_int(&self) -> IntMat {
            IntMat::from_fn(self.rows, self.cols, |i, j| Int::from(self.at(i, j)))
        }
    }

    struct Work {
        m: FlatMat,
        /// nonzero entries per row of `m`, kept exact through every mutation
        row_nnz: Vec<usize>,
        u: Option<FlatMat>,
        u_inv: Option<FlatMat>,
        v: Option<FlatMat>,
        v_inv: Option<FlatMat>,
    }

    macro_rules! chk {
        ($e:expr) => {
            match $e {
                Some(v) => v,
                None => return None,
            }
        };
    }

    impl Work {
        #[inline]
        fn put(&mut self, i: usize, j: usize, v: i128) {
            let old = self.m.at(i, j);
            if old == 0 && v != 0 {
                self.row_nnz[i] += 1;
            } else if old != 0 && v == 0 {
                self.row_nnz[i] -= 1;
            }
            self.m.set(i, j, v);
        }

        fn row_swap(&mut self, a: usize, b: usize) {
            if a == b {
                return;
            }
            self.row_nnz.swap(a, b);
            for j in 0..self.m.cols {
                let x = self.m.at(a, j);
                self.m.set(a, j, self.m.at(b, j));
                self.m.set(b, j, x);
            }
            if let Some(u) = &mut self.u {
                for j in 0..u.cols {
                    let x = u.at(a, j);
                    u.set(a, j, u.at(b, j));
                    u.set(b, j, x);
                }
            }
            if let Some(ui) = &mut self.u_inv {
                for i in 0..ui.rows {
                    let x = ui.at(i, a);
                    ui.set(i, a, ui.at(i, b));
                    ui.set(i, b, x);
                }
            }
        }

        fn col_swap(&mut self, a: usize, b: usize) {
            if a == b {
                return;
            }
            for i in 0..self.m.rows {
                let x = self.m.at(i, a);
                self.m.set(i, a, self.m.at(i, b));
                self.m.set(i, b, x);
            }
            if let Some(v) = &mut self.v {
                for i in 0..v.rows {
                    let x = v.at(i, a);
                    v.set(i, a, v.at(i, b));
                    v.set(i, b, x);
                }
            }
            if let Some(vi) = &mut self.v_inv {
                for j in 0..vi.cols {
                    let x = vi.at(a, j);
                    vi.set(a, j, vi.at(b, j));
                    vi.set(b, j, x);
                }
            }
        }

        fn row_add(&mut self, dst: usize, src: usize, c: i128) -> Option<()> {
            if c == 0 {
                return Some(());
            }
            for j in 0..self.m.cols {
                let s = self.m.at(src, j);
                if s != 0 {
                    let t = chk!(c.checked_mul(s));
                    let v = chk!(self.m.at(dst, j).checked_add(t));
                    self.put(dst, j, v);
                }
            }
            if let Some(u) = &mut self.u {
                for j in 0..u.cols {
                    let s = u.at(src, j);
                    if s != 0 {
                        let t = chk!(c.checked_mul(s));
                        let v = chk!(u.at(dst, j).checked_add(t));
                        u.set(dst, j, v);
                    }
                }
            }
            if let Some(ui) = &mut self.u_inv {
                for i in 0..ui.rows {
                    let d = ui.at(i, dst);
                    if d != 0 {
                        let t = chk!(c.checked_mul(d));
                        let v = chk!(ui.at(i, src).checked_sub(t));
                        ui.set(i, src, v);
                    }
                }
            }
            Some(())
        }

        fn col_add(&mut self, dst: usize, src: usize, c: i128) -> Option<()> {
            if c == 0 {
                return Some(());
            }
            for i in 0..self.m.rows {
                let s = self.m.at(i, src);
                if s != 0 {
                    let t = chk!(c.checked_mul(s));
                    let v = chk!(self.m.at(i, dst).checked_add(t));
                    self.put(i, dst, v);
                }
            }
            if let Some(v) = &mut self.v {
                for i in 0..v.rows {
                    let s = v.at(i, src);
                    if s != 0 {
                        let t = chk!(c.checked_mul(s));
                        let val = chk!(v.at(i, dst).checked_add(t));
                        v.set(i, dst, val);
                    }
                }
            }
            if let Some(vi) = &mut self.v_inv {
                for j in 0..vi.cols {
                    let d = vi.at(dst, j);
                    if d != 0 {
                        let t = chk!(c.checked_mul(d));
                        let val = chk!(vi.at(src, j).checked_sub(t));
                        vi.set(src, j, val);
                    }
                }
            }
            Some(())
        }

        fn row_negate(&mut self, r: usize) -> Option<()> {
            for j in 0..self.m.cols {
                let v = chk!(self.m.at(r, j).checked_neg());
                self.m.set(r, j, v);
            }
            if let Some(u) = &mut self.u {
                for j in 0..u.cols {
                    let v = chk!(u.at(r, j).checked_neg());
                    u.set(r, j, v);
                }
            }
            if let Some(ui) = &mut self.u_inv {
                for i in 0..ui.rows {
                    let v = chk!(ui.at(i, r).checked_neg());
                    ui.set(i, r, v);
                }
            }
            Some(())
        }
    }

    fn find_pivot(m: &FlatMat, row_nnz: &[usize], k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, i128)> = None;
        for i in k..m.rows {
            if row_nnz[i] == 0 {
                continue;
            }
            let row = &m.data[i * m.cols..(i + 1) * m.cols];
            for (j, &x) in row.iter().enumerate().skip(k) {
                if x == 0 {
                    continue;
                }
                let a = x.unsigned_abs();
                if a == 1 {
                    return Some((i, j));
                }
                match &best {
                    Some((_, _, b)) if (*b as u128) <= a => {}
                    _ => best = Some((i, j, a as i128)),
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    pub(super) fn smith_i128(m: &IntMat, opts: SnfOptions) -> Option<SmithDecomposition> {
        let (rows, cols) = (m.rows(), m.cols());
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(m[(i, j)].to_i128()?);
            }
        }
        let row_nnz: Vec<usize> = (0..rows)
            .map(|i| {
                data[i * cols..(i + 1) * cols]
                    .iter()
                    .filter(|&&x| x != 0)
                    .count()
            })
            .collect();
        let mut w = Work {
            m: FlatMat { rows, cols, data },
            row_nnz,
            u: opts.want_u.then(|| FlatMat::identity(rows)),
            u_inv: opts.want_u_inv.then(|| FlatMat::identity(rows)),
            v: opts.want_v.then(|| FlatMat::identity(cols)),
            v_inv: opts.want_v_inv.then(|| FlatMat::identity(cols)),
        };
        let n = rows.min(cols);
        let mut rank = 0;
        for k in 0..n {
            'pivot: while let Some((pi, pj)) = find_pivot(&w.m, &w.row_nnz, k) {
                w.row_swap(k, pi);
                w.col_swap(k, pj);
                if w.m.at(k, k) < 0 {
                    w.row_negate(k)?;
                }
                let mut clean = true;
                for i in k + 1..rows {
                    let x = w.m.at(i, k);
                    if x != 0 {
                        let q = x.div_euclid(w.m.at(k, k));
                        w.row_add(i, k, q.checked_neg()?)?;
                        if w.m.at(i, k) != 0 {
                            clean = false;
                        }
                    }
                }
                if !clean {
                    continue 'pivot;
                }
                for j in k + 1..cols {
                    let x = w.m.at(k, j);
                    if x != 0 {
                        let q = x.div_euclid(w.m.at(k, k));
                        w.col_add(j, k, q.checked_neg()?)?;
                        if w.m.at(k, j) != 0 {
                            clean = false;
                        }
                    }
                }
                if !clean {
                    continue 'pivot;
                }
                let p = w.m.at(k, k);
                if p != 1 {
                    for i in k + 1..rows {
                        if w.row_nnz[i] == 0 {
                            continue;
                        }
                        for j in k + 1..cols {
                            if w.m.at(i, j) % p != 0 {
                                w.row_add(k, i, 1)?;
                                continue 'pivot;
                            }
                        }
                    }
                }
                rank += 1;
                break;
            }
            if w.m.at(k, k) == 0 {
                break;
            }
        }
        let diag: Vec<Int> = (0..n).map(|i| Int::from(w.m.at(i, i))).collect();
        Some(SmithDecomposition {
            rows,
            cols,
            diag,
            rank,
            u: w.u.map(|x| x.to_int()),
            u_inv: w.u_inv.map(|x| x.to_int()),
            v: w.v.map(|x| x.to_int()),
            v_inv: w.v_inv.map(|x| x.to_int()),
        })
    }
}

/// Basis of `{x : m x = 0}` as columns. The kernel of an integer matrix is a
/// saturated sublattice, so this basis extends to a basis of the ambient
/// lattice and integer coordinates in it are unique.
pub fn kernel_int(m: &IntMat) -> IntMat {
    let dec = smith_with(
        m,
        SnfOptions {
            want_v: true,
            ..Default::default()
        },
    );
    let v = dec.v.unwrap();
    let idx: Vec<usize> = (dec.rank..m.cols()).collect();
    v.select_cols(&idx)
}

/// One integer solution of `m x = t`, if any.
pub fn solve_int(m: &IntMat, t: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(m.rows(), t.len());
    let dec = smith_with(
        m,
        SnfOptions {
            want_u: true,
            want_v: true,
            ..Default::default()
        },
    );
    let u = dec.u.unwrap();
    let v = dec.v.unwrap();
    let s = u.mul_vec(t);
    let mut y = vec![Int::zero(); m.cols()];
    for i in 0..m.rows().min(m.cols()) {
        if !dec.diag[i].is_zero() {
            let (q, r) = s[i].div_rem(&dec.diag[i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    for (i, si) in s.iter().enumerate() {
        let covered = i < dec.diag.len() && !dec.diag[i].is_zero();
        if !covered && !si.is_zero() {
            return None;
        }
    }
    Some(v.mul_vec(&y))
}

/// Is `v` in the lattice spanned by the columns of `gens`?
pub fn lattice_contains(gens: &IntMat, v: &[Int]) -> bool {
    solve_int(gens, v).is_some()
}

/// Basis (as columns) of the lattice spanned by the columns of `gens`.
pub fn lattice_basis(gens: &IntMat) -> IntMat {
    if gens.cols() == 0 {
        return IntMat::zeros(gens.rows(), 0);
    }
    let dec = smith_with(
        gens,
        SnfOptions {
            want_u_inv: true,
            ..Default::default()
        },
    );
    let ui = dec.u_inv.unwrap();
    let mut cols = Vec::new();
    for (i, d) in dec.diag.iter().enumerate() {
        if !d.is_zero() {
            cols.push(
                (0..gens.rows())
                    .map(|r| ui[(r, i)].clone() * d.clone())
                    .collect::<Vec<_>>(),
            );
        }
    }
    let mut out = IntMat::zeros(gens.rows(), cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            out[(i, j)] = x.clone();
        }
    }
    out
}

/// Solve `az * xz + aq * xq = t` with `xz` integral and `xq` rational.
///
/// This is the workhorse behind coboundary decisions in mixed integral /
/// rational cones: eliminate the rational unknowns by passing to the left
/// annihilator of `aq`, solve the remaining system over `Z`, then back-solve
/// the rational part.
pub fn mixed_solve(az: &IntMat, aq: &RatMat, t: &[Rat]) -> Option<(Vec<Int>, Vec<Rat>)> {
    let n = t.len();
    assert_eq!(az.rows(), n);
    assert_eq!(aq.rows(), n);
    // rows spanning { y : y^T aq = 0 }
    let left_kernel = aq.transpose().kernel_basis().transpose();
    // project: left_kernel * az * xz = left_kernel * t, an integer-constrained system
    let proj_a = left_kernel.mul(&az.to_rat());
    let proj_t = left_kernel.mul(&RatMat::column(t.to_vec()));
    // scale each row to integers
    let mut rows_a: Vec<Vec<Int>> = Vec::new();
    let mut rhs: Vec<Int> = Vec::new();
    for i in 0..proj_a.rows() {
        let mut row: Vec<Rat> = (0..proj_a.cols()).map(|j| proj_a[(i, j)].clone()).collect();
        row.push(proj_t[(i, 0)].clone());
        let (ints, _) = crate::matrix::clear_denominators(&row);
        let (r, last) = ints.split_at(ints.len() - 1);
        rows_a.push(r.to_vec());
        rhs.push(last[0].clone());
    }
    let sys = if rows_a.is_empty() {
        IntMat::zeros(0, az.cols())
    } else {
        IntMat::from_rows(rows_a)
    };
    let xz = solve_int(&sys, &rhs)?;
    // residual must be in the rational column span of aq
    let az_xz = az.to_rat().mul(&RatMat::column(
        xz.iter().map(|x| Rat::from(x.clone())).collect(),
    ));
    let resid: Vec<Rat> = (0..n)
        .map(|i| t[i].clone() - az_xz[(i, 0)].clone())
        .collect();
    let xq = if aq.cols() == 0 {
        if resid.iter().all(|x| x.is_zero()) {
            vec![]
        } else {
            return None;
        }
    } else {
        let sol = aq.solve(&RatMat::column(resid))?;
        sol.col_vec(0)
    };
    Some((xz, xq))
}
