//! Arbitrary-precision integer and rational linear algebra.
//!
//! Everything here is exact: determinants and ranks come from Bareiss
//! fraction-free elimination, homology data from a gcd-pivoting Smith
//! normal form, and feasibility questions from Fourier–Motzkin
//! elimination over the rationals. No floating point anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Parse "p" or "p/q" into a rational. Rejects zero denominators.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), Some(q.trim())),
        None => (s, None),
    };
    let p: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational {s:?}")))?;
    let q: BigInt = match den {
        Some(q) => q
            .parse()
            .map_err(|_| Error::Parse(format!("invalid rational {s:?}")))?,
        None => BigInt::one(),
    };
    if q.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(p, q))
}

/// Render a rational as "p" or "p/q".
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Dense integer matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Self {
            rows,
            cols,
            entries: entries.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Stack `extra` rows below the matrix. Used for rank comparisons
    /// of the form rank([A; v]) vs rank(A).
    pub fn stack_rows(&self, extra: &[Vec<BigInt>]) -> Result<IntMatrix> {
        let mut rows: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).clone()).collect())
            .collect();
        for row in extra {
            if row.len() != self.cols {
                return Err(Error::Dimension(format!(
                    "stacked row has length {}, matrix has {} columns",
                    row.len(),
                    self.cols
                )));
            }
            rows.push(row.clone());
        }
        IntMatrix::from_rows(rows)
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let mut sign = 1i64;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    // exact division: Bareiss guarantees prev divides this
                    let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        Ok(if sign < 0 { -det } else { det })
    }

    /// Rank over the rationals, by fraction-free elimination with row
    /// and column pivoting. Intermediate entries are minors of the
    /// input, so this suits the small matrices it is used on; for the
    /// larger near-unimodular boundary matrices the Smith normal form
    /// is the cheaper route to a rank.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let mut rank = 0;
        let mut prev = BigInt::one();
        while rank < self.rows && rank < self.cols {
            let pivot = (rank..self.rows)
                .flat_map(|i| (rank..self.cols).map(move |j| (i, j)))
                .find(|&(i, j)| !m[i][j].is_zero());
            let Some((pi, pj)) = pivot else { break };
            m.swap(rank, pi);
            if pj != rank {
                for row in m.iter_mut() {
                    row.swap(rank, pj);
                }
            }
            for i in rank + 1..self.rows {
                for j in rank + 1..self.cols {
                    let num = &m[rank][rank] * &m[i][j] - &m[i][rank] * &m[rank][j];
                    m[i][j] = num / &prev;
                }
                m[i][rank] = BigInt::zero();
            }
            prev = m[rank][rank].clone();
            rank += 1;
        }
        rank
    }

    /// Nonzero invariant factors d1 | d2 | ... | dk of the Smith normal
    /// form, each positive, k = rank. Pivoting always selects the
    /// nonzero entry of smallest absolute value.
    pub fn smith_normal_form(&self) -> Vec<BigInt> {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let mut factors = Vec::new();
        let mut t = 0;
        'outer: while t < self.rows && t < self.cols {
            // smallest-|value| nonzero pivot in the trailing submatrix;
            // a unit entry is always minimal, so take the first one seen
            let mut pivot: Option<(usize, usize)> = None;
            'search: for i in t..self.rows {
                for j in t..self.cols {
                    if m[i][j].is_zero() {
                        continue;
                    }
                    if m[i][j].abs().is_one() {
                        pivot = Some((i, j));
                        break 'search;
                    }
                    match pivot {
                        Some((pi, pj)) if m[pi][pj].abs() <= m[i][j].abs() => {}
                        _ => pivot = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            m.swap(t, pi);
            if pj != t {
                for row in m.iter_mut() {
                    row.swap(t, pj);
                }
            }

            // clear row and column t; restart on any nonzero remainder,
            // which strictly shrinks the pivot
            for i in t + 1..self.rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                for j in t..self.cols {
                    let v = &m[i][j] - &q * &m[t][j];
                    m[i][j] = v;
                }
                if !m[i][t].is_zero() {
                    continue 'outer;
                }
            }
            for j in t + 1..self.cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                for row in m.iter_mut().skip(t) {
                    let v = &row[j] - &q * &row[t];
                    row[j] = v;
                }
                if !m[t][j].is_zero() {
                    continue 'outer;
                }
            }

            // divisibility: the pivot must divide the whole submatrix
            // (trivially true for a unit pivot)
            if !m[t][t].abs().is_one() {
                for i in t + 1..self.rows {
                    for j in t + 1..self.cols {
                        if !(&m[i][j] % &m[t][t]).is_zero() {
                            let extra: Vec<BigInt> = m[i].clone();
                            for (jj, v) in extra.into_iter().enumerate() {
                                let s = &m[t][jj] + v;
                                m[t][jj] = s;
                            }
                            continue 'outer;
                        }
                    }
                }
            }
            factors.push(m[t][t].abs());
            t += 1;
        }
        factors
    }
}

/// Exact solution of a square rational system, or `None` when singular.
pub fn solve_rational(a: &[Vec<Rational>], b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::Dimension("coefficient matrix is not square".into()));
    }
    if b.len() != n {
        return Err(Error::Dimension(format!(
            "matrix is {n}x{n} but right-hand side has length {}",
            b.len()
        )));
    }
    let mut m: Vec<Vec<Rational>> = a.to_vec();
    let mut rhs: Vec<Rational> = b.to_vec();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Ok(None);
        };
        m.swap(k, p);
        rhs.swap(k, p);
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let factor = &m[i][k] / &pivot;
            for j in k..n {
                let v = &m[i][j] - &factor * &m[k][j];
                m[i][j] = v;
            }
            let v = &rhs[i] - &factor * &rhs[k];
            rhs[i] = v;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k].clone();
        for j in k + 1..n {
            acc -= &m[k][j] * &x[j];
        }
        x[k] = acc / &m[k][k];
    }
    Ok(Some(x))
}

/// One inequality `sum(coeffs[i] * x[i]) + constant >= 0`.
type Inequality = (Vec<Rational>, Rational);

/// Fourier–Motzkin feasibility of a system of weak linear inequalities.
fn fourier_motzkin_feasible(mut system: Vec<Inequality>, nvars: usize) -> bool {
    for var in (0..nvars).rev() {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut keep = Vec::new();
        for (coeffs, c) in system {
            match coeffs[var].numer().sign() {
                num_bigint::Sign::Plus => pos.push((coeffs, c)),
                num_bigint::Sign::Minus => neg.push((coeffs, c)),
                num_bigint::Sign::NoSign => keep.push((coeffs, c)),
            }
        }
        for (pc, pk) in &pos {
            for (nc, nk) in &neg {
                // positive combination cancelling the eliminated variable
                let a = pc[var].clone();
                let b = -nc[var].clone();
                let coeffs: Vec<Rational> = (0..var)
                    .map(|j| &b * &pc[j] + &a * &nc[j])
                    .collect();
                let c = &b * pk + &a * nk;
                keep.push((coeffs, c));
            }
        }
        for (coeffs, _) in keep.iter_mut() {
            coeffs.truncate(var);
        }
        system = keep;
    }
    system.iter().all(|(_, c)| !c.is_negative())
}

/// True iff the only solution of `<a_i, x> >= 0` for all i is x = 0,
/// i.e. the vectors positively span R^dim. Decided exactly by 2*dim
/// Fourier–Motzkin feasibility checks, one per slice x_k = ±1 of the cone.
pub fn positively_spans(normals: &[Vec<BigInt>], dim: usize) -> Result<bool> {
    for v in normals {
        if v.len() != dim {
            return Err(Error::Dimension(format!(
                "vector of length {} in dimension {dim}",
                v.len()
            )));
        }
    }
    let base: Vec<Inequality> = normals
        .iter()
        .map(|v| {
            (
                v.iter().map(|c| Rational::from(c.clone())).collect(),
                Rational::zero(),
            )
        })
        .collect();
    for k in 0..dim {
        for sign in [1i64, -1] {
            let mut system = base.clone();
            // s*x_k = 1 as a pair of inequalities
            let mut up = vec![Rational::zero(); dim];
            up[k] = Rational::from(BigInt::from(sign));
            let mut down = vec![Rational::zero(); dim];
            down[k] = Rational::from(BigInt::from(-sign));
            system.push((up, Rational::from(BigInt::from(-1))));
            system.push((down, Rational::from(BigInt::one())));
            if fourier_motzkin_feasible(system, dim) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// gcd of a slice of integers; zero for an empty slice or all zeros.
pub fn vec_gcd(values: &[BigInt]) -> BigInt {
    values
        .iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rat(p: i64, q: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    /// Cofactor-expansion determinant, the independent oracle.
    fn det_cofactor(m: &IntMatrix) -> BigInt {
        let n = m.rows();
        if n == 0 {
            return BigInt::one();
        }
        if n == 1 {
            return m.at(0, 0).clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            if m.at(0, j).is_zero() {
                continue;
            }
            let mut sub = IntMatrix::zeros(n - 1, n - 1);
            for i in 1..n {
                let mut cc = 0;
                for c in 0..n {
                    if c == j {
                        continue;
                    }
                    sub.set(i - 1, cc, m.at(i, c).clone());
                    cc += 1;
                }
            }
            let term = m.at(0, j) * det_cofactor(&sub);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    /// gcd of all k x k minors, the brute-force oracle for SNF products.
    fn minor_gcd(m: &IntMatrix, k: usize) -> BigInt {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            let mut cur = Vec::new();
            fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if cur.len() == k {
                    out.push(cur.clone());
                    return;
                }
                for i in start..n {
                    cur.push(i);
                    rec(i + 1, n, k, cur, out);
                    cur.pop();
                }
            }
            rec(0, n, k, &mut cur, &mut out);
            out
        }
        let mut g = BigInt::zero();
        for rs in subsets(m.rows(), k) {
            for cs in subsets(m.cols(), k) {
                let mut sub = IntMatrix::zeros(k, k);
                for (i, &r) in rs.iter().enumerate() {
                    for (j, &c) in cs.iter().enumerate() {
                        sub.set(i, j, m.at(r, c).clone());
                    }
                }
                g = g.gcd(&det_cofactor(&sub));
            }
        }
        g
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(
            IntMatrix::from_i64(2, 2, &[1, 0, 0, 1]).determinant().unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            IntMatrix::from_i64(2, 2, &[0, 1, -1, 0]).determinant().unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            IntMatrix::from_i64(2, 2, &[1, 0, -1, -2]).determinant().unwrap(),
            BigInt::from(-2)
        );
    }

    #[test]
    fn determinant_rejects_non_square() {
        assert!(IntMatrix::from_i64(2, 3, &[1, 0, 0, 1, 2, 3])
            .determinant()
            .is_err());
    }

    #[test]
    fn determinant_matches_cofactor_oracle() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..400 {
            let n = rng.gen_range(1..=4);
            let entries: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-6..=6)).collect();
            let m = IntMatrix::from_i64(n, n, &entries);
            assert_eq!(m.determinant().unwrap(), det_cofactor(&m));
        }
    }

    #[test]
    fn solve_examples() {
        let id = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]];
        let b = vec![rat(3, 1), rat(5, 2)];
        assert_eq!(solve_rational(&id, &b).unwrap().unwrap(), b);

        let a = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(1, 1), rat(1, 1)]];
        let b = vec![rat(1, 1), rat(2, 1)];
        assert_eq!(
            solve_rational(&a, &b).unwrap().unwrap(),
            vec![rat(1, 1), rat(1, 1)]
        );

        let a = vec![vec![rat(1, 1), rat(1, 1)], vec![rat(2, 1), rat(2, 1)]];
        let b = vec![rat(0, 1), rat(0, 1)];
        assert!(solve_rational(&a, &b).unwrap().is_none());
    }

    #[test]
    fn solve_dimension_error() {
        let a = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]];
        assert!(solve_rational(&a, &[rat(1, 1)]).is_err());
    }

    #[test]
    fn solve_roundtrip_random() {
        let mut rng = StdRng::seed_from_u64(7);
        let mut done = 0;
        while done < 200 {
            let n = rng.gen_range(1..=4);
            let a: Vec<Vec<Rational>> = (0..n)
                .map(|_| (0..n).map(|_| rat(rng.gen_range(-5..=5), 1)).collect())
                .collect();
            let x: Vec<Rational> = (0..n)
                .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
                .collect();
            let b: Vec<Rational> = (0..n)
                .map(|i| (0..n).map(|j| &a[i][j] * &x[j]).sum())
                .collect();
            if let Some(sol) = solve_rational(&a, &b).unwrap() {
                assert_eq!(sol, x);
                done += 1;
            }
        }
    }

    #[test]
    fn smith_examples() {
        assert!(IntMatrix::zeros(3, 2).smith_normal_form().is_empty());
        assert_eq!(
            IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]).smith_normal_form(),
            vec![BigInt::from(1), BigInt::from(6)]
        );
        assert_eq!(
            IntMatrix::from_i64(2, 2, &[1, 0, 0, 1]).smith_normal_form(),
            vec![BigInt::from(1), BigInt::from(1)]
        );
    }

    #[test]
    fn smith_divisibility_and_minor_gcd_oracle() {
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..500 {
            let r = rng.gen_range(1..=3);
            let c = rng.gen_range(1..=3);
            let entries: Vec<i64> = (0..r * c).map(|_| rng.gen_range(-8..=8)).collect();
            let m = IntMatrix::from_i64(r, c, &entries);
            let factors = m.smith_normal_form();
            assert_eq!(factors.len(), m.rank());
            for w in factors.windows(2) {
                assert!((&w[1] % &w[0]).is_zero(), "{w:?} not a divisibility chain");
            }
            // product of the first k factors equals the gcd of k x k minors
            let mut prod = BigInt::one();
            for (k, d) in factors.iter().enumerate() {
                prod *= d;
                assert_eq!(prod, minor_gcd(&m, k + 1));
            }
        }
    }

    #[test]
    fn positively_spans_examples() {
        let cross = vec![
            vec![BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(-1), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(-1)],
        ];
        assert!(positively_spans(&cross, 2).unwrap());

        let halfplane = vec![
            vec![BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(1)],
        ];
        assert!(!positively_spans(&halfplane, 2).unwrap());

        let triangle = vec![
            vec![BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(-1), BigInt::from(-1)],
        ];
        assert!(positively_spans(&triangle, 2).unwrap());
    }

    #[test]
    fn rational_io() {
        assert_eq!(parse_rational("3").unwrap(), rat(3, 1));
        assert_eq!(parse_rational("-5/2").unwrap(), rat(-5, 2));
        assert_eq!(parse_rational("4/2").unwrap(), rat(2, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(-5, 2)), "-5/2");
        assert_eq!(format_rational(&rat(6, 3)), "2");
    }

    #[test]
    fn rank_basics() {
        assert_eq!(IntMatrix::from_i64(2, 2, &[1, 2, 2, 4]).rank(), 1);
        assert_eq!(IntMatrix::from_i64(3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, 1]).rank(), 3);
        assert_eq!(IntMatrix::zeros(3, 4).rank(), 0);
    }
}
