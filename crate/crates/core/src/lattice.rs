//! Small exact integer and rational linear algebra.

use num_integer::Integer;
use num_rational::Ratio;

pub type Q = Ratio<i64>;

/// Basis of the rational nullspace of `rows` (each of length `n`), one vector
/// per free column of the reduced row echelon form.
pub fn nullspace(rows: &[Vec<i64>], n: usize) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| Q::from_integer(x)).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != Q::from_integer(0)) else {
            continue;
        };
        m.swap(r, p);
        let pv = m[r][c];
        for x in m[r].iter_mut() {
            *x /= pv;
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != Q::from_integer(0) {
                let f = m[i][c];
                for j in 0..n {
                    let sub = f * m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![Q::from_integer(0); n];
            v[f] = Q::from_integer(1);
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -m[i][f];
            }
            v
        })
        .collect()
}

/// Scales a rational vector to the primitive integer vector on its ray.
pub fn primitive(v: &[Q]) -> Vec<i64> {
    let den = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (x * den).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, x| acc.gcd(x));
    if g == 0 {
        ints
    } else {
        ints.into_iter().map(|x| x / g).collect()
    }
}

/// Basis of the integer kernel `{x in Z^n : A x = 0}` by unimodular column
/// reduction. The basis spans the full (saturated) kernel lattice.
pub fn integer_kernel(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i64>> = rows.to_vec();
    // u records the column operations: columns of A * u are the current columns
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut lead = 0;
    for row in 0..a.len() {
        if lead == n {
            break;
        }
        // gcd-eliminate entries lead+1.. of this row into column `lead`
        loop {
            let nz: Vec<usize> = (lead..n).filter(|&j| a[row][j] != 0).collect();
            if nz.len() <= 1 {
                if let Some(&j) = nz.first() {
                    swap_cols(&mut a, &mut u, lead, j);
                    lead += 1;
                }
                break;
            }
            let pivot = *nz.iter().min_by_key(|&&j| a[row][j].abs()).unwrap();
            swap_cols(&mut a, &mut u, lead, pivot);
            for j in lead + 1..n {
                let q = Integer::div_floor(&a[row][j], &a[row][lead]);
                if q != 0 {
                    for r in a.iter_mut() {
                        r[j] -= q * r[lead];
                    }
                    for r in u.iter_mut() {
                        r[j] -= q * r[lead];
                    }
                }
            }
        }
    }
    (lead..n).map(|j| u.iter().map(|r| r[j]).collect()).collect()
}

fn swap_cols(a: &mut [Vec<i64>], u: &mut [Vec<i64>], i: usize, j: usize) {
    if i != j {
        for r in a.iter_mut() {
            r.swap(i, j);
        }
        for r in u.iter_mut() {
            r.swap(i, j);
        }
    }
}

/// Gaussian elimination over `Z/2`: one solution of `A x = b`, if any.
pub fn solve_mod2(rows: &[Vec<u8>], rhs: &[u8], n: usize) -> Option<Vec<u8>> {
    let mut m: Vec<Vec<u8>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| r.iter().map(|x| x & 1).chain([b & 1]).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] == 1) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] == 1 {
                let pr = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pr) {
                    *x ^= y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| row[n] == 1) {
        return None;
    }
    let mut x = vec![0; n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][n];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(rows: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
        rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    #[test]
    fn nullspace_of_switch_system() {
        let ns = nullspace(&[vec![1, -1, -1]], 3);
        assert_eq!(ns.len(), 2);
        assert_eq!(primitive(&ns[0]), vec![1, 1, 0]);
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // kernel of (2 4) is spanned by (2, -1), not (4, -2)
        let k = integer_kernel(&[vec![2, 4]], 2);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![2, 1]);
        let a = vec![vec![1, 1, 0, -2], vec![0, 3, 3, 6]];
        let k = integer_kernel(&a, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(mul(&a, v), vec![0, 0]);
        }
        // saturation: the 2x2 minors of the basis have gcd 1
        let mut g = 0i64;
        for i in 0..4 {
            for j in i + 1..4 {
                g = g.gcd(&(k[0][i] * k[1][j] - k[0][j] * k[1][i]));
            }
        }
        assert_eq!(g, 1);
    }

    #[test]
    fn mod2_solve() {
        let x = solve_mod2(&[vec![1, 1, 0], vec![0, 1, 1]], &[1, 0], 3).unwrap();
        assert_eq!((x[0] ^ x[1], x[1] ^ x[2]), (1, 0));
        assert!(solve_mod2(&[vec![1, 1], vec![1, 1]], &[0, 1], 2).is_none());
    }
}
