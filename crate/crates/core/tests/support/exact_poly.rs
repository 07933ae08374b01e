//! Exact integer-polynomial oracle for scalar transfer functions, fully
//! independent of the library's recurrence: determinants and adjugates of
//! `sI - A` by cofactor expansion over integer polynomials.

pub type IntPoly = Vec<i128>;

pub fn poly_add(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let n = a.len().max(b.len());
    let mut out = vec![0i128; n];
    for (i, &c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] += c;
    }
    out
}

pub fn poly_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_scale(a: &IntPoly, c: i128) -> IntPoly {
    a.iter().map(|&x| c * x).collect()
}

pub fn poly_trim(mut a: IntPoly) -> IntPoly {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

/// Determinant of a square matrix of integer polynomials by Laplace
/// expansion along the first row.
pub fn det_poly(m: &[Vec<IntPoly>]) -> IntPoly {
    let n = m.len();
    if n == 0 {
        return vec![1];
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc: IntPoly = vec![0];
    for j in 0..n {
        let minor: Vec<Vec<IntPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = poly_mul(&m[0][j], &det_poly(&minor));
        let signed = if j % 2 == 0 {
            term
        } else {
            poly_scale(&term, -1)
        };
        acc = poly_add(&acc, &signed);
    }
    acc
}

/// `sI - A` as a matrix of integer polynomials in `s`.
pub fn s_i_minus_a(a: &[Vec<i128>]) -> Vec<Vec<IntPoly>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        vec![-a[i][j], 1]
                    } else {
                        vec![-a[i][j]]
                    }
                })
                .collect()
        })
        .collect()
}

/// Adjugate entry (j, i) is the (i, j) cofactor.
pub fn adjugate_poly(m: &[Vec<IntPoly>]) -> Vec<Vec<IntPoly>> {
    let n = m.len();
    if n == 0 {
        return vec![];
    }
    if n == 1 {
        return vec![vec![vec![1]]];
    }
    let mut adj = vec![vec![vec![0i128]; n]; n];
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<IntPoly>> = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, p)| p.clone())
                        .collect()
                })
                .collect();
            let cof = det_poly(&minor);
            adj[j][i] = if (i + j) % 2 == 0 {
                cof
            } else {
                poly_scale(&cof, -1)
            };
        }
    }
    adj
}

/// Exact numerator and denominator (ascending, raw form) of the scalar
/// transfer function of an integer realization:
/// `den = det(sI - A)`, `num = C adj(sI - A) B + d * den`.
pub fn exact_scalar_rational(
    a: &[Vec<i128>],
    b: &[i128],
    c: &[i128],
    d: i128,
) -> (IntPoly, IntPoly) {
    let si_a = s_i_minus_a(a);
    let den = poly_trim(det_poly(&si_a));
    let adj = adjugate_poly(&si_a);
    let n = a.len();
    let mut num: IntPoly = vec![0];
    for i in 0..n {
        for j in 0..n {
            num = poly_add(&num, &poly_scale(&adj[i][j], c[i] * b[j]));
        }
    }
    num = poly_add(&num, &poly_scale(&den, d));
    (poly_trim(num), den)
}

/// Pull integer blocks out of a system matrix known to hold integer data.
pub fn integer_blocks(sm: &posreal::SystemMatrix) -> (Vec<Vec<i128>>, Vec<i128>, Vec<i128>, i128) {
    let re = sm.partition();
    let n = re.state_dim();
    assert_eq!(re.output_dim(), 1, "oracle handles scalar outputs");
    let as_int = |x: num_complex::Complex64| -> i128 {
        assert!(
            x.im == 0.0 && x.re.fract() == 0.0,
            "non-integer fixture entry"
        );
        x.re as i128
    };
    let a: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| as_int(re.a[(i, j)])).collect())
        .collect();
    let b: Vec<i128> = (0..n).map(|i| as_int(re.b[(i, 0)])).collect();
    let c: Vec<i128> = (0..n).map(|j| as_int(re.c[(0, j)])).collect();
    let d = as_int(re.d[(0, 0)]);
    (a, b, c, d)
}
