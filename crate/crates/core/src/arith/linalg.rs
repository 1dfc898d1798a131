//! Exact linear algebra over ℚ on row-major matrices.

use rug::Rational;

pub type QVec = Vec<Rational>;
pub type QMat = Vec<QVec>;

pub fn zeros(rows: usize, cols: usize) -> QMat {
    vec![vec![Rational::new(); cols]; rows]
}

pub fn identity(n: usize) -> QMat {
    (0..n).map(|i| (0..n).map(|j| Rational::from((i == j) as i32)).collect()).collect()
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(|x| *x == 0)
}

/// Reduced row echelon form and its pivot columns.
pub fn rref(m: &QMat) -> (QMat, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        let inv = Rational::from(a[r][c].recip_ref());
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= Rational::from(&f * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(m: &QMat) -> usize {
    rref(m).1.len()
}

/// Basis of { x : x·m = 0 }, i.e. the left kernel of the rows of `m`.
///
/// Rows of `m` are images of basis vectors, so the result spans the
/// combinations of basis vectors that map to zero.
pub fn left_kernel(m: &QMat) -> QMat {
    let width = m.first().map_or(0, |r| r.len());
    kernel(&transpose(m, width), m.len())
}

/// Basis of { x ∈ ℚ^cols : m·x = 0 }.
pub fn kernel(m: &QMat, cols: usize) -> QMat {
    let (r, pivots) = rref(m);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![Rational::new(); cols];
            v[f] = Rational::from(1);
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = Rational::from(-&r[i][f]);
            }
            v
        })
        .collect()
}

/// Transpose of a matrix with `cols` columns (needed when `m` is empty).
pub fn transpose(m: &QMat, cols: usize) -> QMat {
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Coefficients `x` with `x·basis = v`, if `v` lies in the row space.
pub fn coords_in(basis: &QMat, v: &[Rational]) -> Option<QVec> {
    let k = basis.len();
    let n = v.len();
    let aug: QMat = (0..n)
        .map(|j| {
            let mut row: QVec = basis.iter().map(|b| b[j].clone()).collect();
            row.push(v[j].clone());
            row
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![Rational::new(); k];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r[i][k].clone();
    }
    Some(x)
}

pub fn vec_mat(v: &[Rational], m: &QMat) -> QVec {
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![Rational::new(); cols];
    for (x, row) in v.iter().zip(m) {
        if *x == 0 {
            continue;
        }
        for (o, y) in out.iter_mut().zip(row) {
            *o += Rational::from(x * y);
        }
    }
    out
}

pub fn mat_vec(m: &QMat, v: &[Rational]) -> QVec {
    m.iter()
        .map(|row| {
            let mut s = Rational::new();
            for (a, b) in row.iter().zip(v) {
                s += Rational::from(a * b);
            }
            s
        })
        .collect()
}

/// Standard basis vectors completing the row space of `sub` to all of ℚⁿ,
/// chosen at the non-pivot columns of its echelon form.
pub fn echelon_complement(sub: &QMat, n: usize) -> QMat {
    let (_, pivots) = rref(sub);
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|c| {
            let mut v = vec![Rational::new(); n];
            v[c] = Rational::from(1);
            v
        })
        .collect()
}

/// Does `v` lie in the row space of `m`?
pub fn in_span(m: &QMat, v: &[Rational]) -> bool {
    let mut ext = m.clone();
    ext.push(v.to_vec());
    rank(&ext) == rank(m)
}
