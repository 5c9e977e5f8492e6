/// Discharge-time dissimilarity between patients: `ln |dishift(p) - dishift(q)|`,
/// zero for equal discharge shifts (and, since `ln 1 = 0`, for adjacent ones).
#[derive(Debug, Clone, PartialEq)]
pub struct Heterogeneity {
    n: usize,
    /// Strict upper triangle, row-major.
    upper: Vec<f64>,
}

pub fn het_value(dishift_a: usize, dishift_b: usize) -> f64 {
    if dishift_a == dishift_b {
        0.0
    } else {
        (dishift_a.abs_diff(dishift_b) as f64).ln()
    }
}

impl Heterogeneity {
    pub fn build(dishifts: &[usize]) -> Self {
        let n = dishifts.len();
        let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                upper.push(het_value(dishifts[i], dishifts[j]));
            }
        }
        Self { n, upper }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, p: usize, q: usize) -> f64 {
        if p == q {
            return 0.0;
        }
        let (i, j) = if p < q { (p, q) } else { (q, p) };
        // rows 0..i hold (n-1) + (n-2) + ... + (n-i) entries
        let row_start = i * (2 * self.n - i - 1) / 2;
        self.upper[row_start + (j - i - 1)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(het_value(6, 6), 0.0);
        assert!((het_value(3, 6) - 3f64.ln()).abs() < 1e-15);
        assert_eq!(het_value(6, 7), 0.0);
    }

    #[test]
    fn lookup_is_symmetric_and_matches_formula() {
        let d = [3, 9, 12, 3, 31, 6];
        let h = Heterogeneity::build(&d);
        for p in 0..d.len() {
            for q in 0..d.len() {
                assert_eq!(h.get(p, q), h.get(q, p));
                let want = if p == q { 0.0 } else { het_value(d[p], d[q]) };
                assert_eq!(h.get(p, q), want);
            }
        }
    }
}
