use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    /// `None` is unbounded above.
    pub upper: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }

    /// Whether `lhs sense rhs` holds within `tol`.
    pub fn holds(self, lhs: f64, rhs: f64, tol: f64) -> bool {
        match self {
            Sense::Le => lhs <= rhs + tol,
            Sense::Ge => lhs + tol >= rhs,
            Sense::Eq => (lhs - rhs).abs() <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    /// `(variable index, coefficient)`, no duplicates, no zeros.
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// A minimization model over named variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearModel {
    /// Free-text header lines, written as comments.
    pub comments: Vec<String>,
    pub vars: Vec<Variable>,
    pub objective: Vec<(usize, f64)>,
    pub rows: Vec<Row>,
}

/// Name prefix before the index list, e.g. `y` for `y(p1,r01,1)`.
pub fn family(name: &str) -> &str {
    name.split('(').next().unwrap_or(name)
}

impl LinearModel {
    pub fn var_index(&self) -> HashMap<&str, usize> {
        self.vars.iter().enumerate().map(|(i, v)| (v.name.as_str(), i)).collect()
    }

    pub fn var(&self, name: &str) -> Option<&Variable> {
        self.vars.iter().find(|v| v.name == name)
    }

    pub fn row(&self, name: &str) -> Option<&Row> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn var_families(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for v in &self.vars {
            *m.entry(family(&v.name).to_string()).or_default() += 1;
        }
        m
    }

    pub fn row_families(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for r in &self.rows {
            *m.entry(family(&r.name).to_string()).or_default() += 1;
        }
        m
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().map(|&(i, c)| c * x[i]).sum()
    }

    pub fn activity(&self, row: &Row, x: &[f64]) -> f64 {
        row.terms.iter().map(|&(i, c)| c * x[i]).sum()
    }

    /// Names of rows and bounds violated by `x`, beyond a tolerance scaled by
    /// the right-hand side.
    pub fn violations(&self, x: &[f64], tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        for (v, &val) in self.vars.iter().zip(x) {
            let int_ok = v.kind == VarKind::Continuous || (val - val.round()).abs() <= tol;
            if val < v.lower - tol || v.upper.is_some_and(|u| val > u + tol) || !int_ok {
                out.push(format!("bound {}", v.name));
            }
        }
        for r in &self.rows {
            let t = tol * r.rhs.abs().max(1.0);
            if !r.sense.holds(self.activity(r, x), r.rhs, t) {
                out.push(r.name.clone());
            }
        }
        out
    }
}

/// Linear expression with a constant, used while assembling rows.
#[derive(Debug, Clone, Default)]
pub struct Expr {
    pub terms: Vec<(usize, f64)>,
    pub constant: f64,
}

impl Expr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, var: usize, coef: f64) -> &mut Self {
        self.terms.push((var, coef));
        self
    }

    pub fn add_const(&mut self, c: f64) -> &mut Self {
        self.constant += c;
        self
    }
}

/// Incremental construction with name lookup and duplicate merging.
#[derive(Debug, Default)]
pub struct ModelBuilder {
    model: LinearModel,
    index: HashMap<String, usize>,
    obj_pos: HashMap<usize, usize>,
}

impl ModelBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.model.comments.push(line.into());
    }

    fn add_var(&mut self, name: String, kind: VarKind, upper: Option<f64>) -> usize {
        assert!(!self.index.contains_key(&name), "duplicate variable {name}");
        let i = self.model.vars.len();
        self.index.insert(name.clone(), i);
        self.model.vars.push(Variable { name, kind, lower: 0.0, upper });
        i
    }

    pub fn binary(&mut self, name: String) -> usize {
        self.add_var(name, VarKind::Binary, Some(1.0))
    }

    pub fn continuous(&mut self, name: String) -> usize {
        self.add_var(name, VarKind::Continuous, None)
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn objective(&mut self, var: usize, coef: f64) {
        if let Some(&pos) = self.obj_pos.get(&var) {
            self.model.objective[pos].1 += coef;
        } else {
            self.obj_pos.insert(var, self.model.objective.len());
            self.model.objective.push((var, coef));
        }
    }

    /// Adds `expr sense rhs`, moving the constant to the right-hand side.
    /// Rows without variables are skipped; returns whether the row was added.
    pub fn row(&mut self, name: String, expr: &Expr, sense: Sense, rhs: f64) -> bool {
        let terms = merge(&expr.terms);
        if terms.is_empty() {
            return false;
        }
        self.model.rows.push(Row { name, terms, sense, rhs: rhs - expr.constant });
        true
    }

    /// Like [`row`](Self::row), but also skips rows every point within the
    /// variable bounds satisfies.
    pub fn row_unless_implied(&mut self, name: String, expr: &Expr, sense: Sense, rhs: f64) -> bool {
        let terms = merge(&expr.terms);
        let rhs = rhs - expr.constant;
        let (mut lo, mut hi) = (0.0, 0.0);
        for &(i, c) in &terms {
            let v = &self.model.vars[i];
            let (a, b) = (c * v.lower, v.upper.map_or(f64::INFINITY * c.signum(), |u| c * u));
            lo += a.min(b);
            hi += a.max(b);
        }
        let implied = match sense {
            Sense::Le => hi <= rhs,
            Sense::Ge => lo >= rhs,
            Sense::Eq => false,
        };
        if implied || terms.is_empty() {
            return false;
        }
        self.model.rows.push(Row { name, terms, sense, rhs });
        true
    }

    pub fn finish(mut self) -> LinearModel {
        self.model.objective.retain(|&(_, c)| c != 0.0);
        self.model
    }
}

fn merge(terms: &[(usize, f64)]) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(terms.len());
    let mut pos: HashMap<usize, usize> = HashMap::new();
    for &(i, c) in terms {
        if let Some(&k) = pos.get(&i) {
            out[k].1 += c;
        } else {
            pos.insert(i, out.len());
            out.push((i, c));
        }
    }
    out.retain(|&(_, c)| c != 0.0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_merge_duplicates_and_fold_constants() {
        let mut b = ModelBuilder::new();
        let x = b.binary("x(1)".into());
        let y = b.binary("y(1)".into());
        let mut e = Expr::new();
        e.add(x, 1.0).add(y, 2.0).add(x, 1.0).add_const(3.0);
        assert!(b.row("c(1)".into(), &e, Sense::Le, 5.0));
        let m = b.finish();
        assert_eq!(m.rows[0].terms, vec![(x, 2.0), (y, 2.0)]);
        assert_eq!(m.rows[0].rhs, 2.0);
    }

    #[test]
    fn empty_and_implied_rows_are_skipped() {
        let mut b = ModelBuilder::new();
        let x = b.binary("x".into());
        assert!(!b.row("empty".into(), &Expr::new(), Sense::Le, 1.0));
        let mut e = Expr::new();
        e.add(x, 1.0).add_const(-1.0);
        assert!(!b.row_unless_implied("vacuous".into(), &e, Sense::Le, 0.0));
        assert!(b.row_unless_implied("binding".into(), &e, Sense::Ge, 0.0));
        assert_eq!(b.finish().rows.len(), 1);
    }

    #[test]
    fn families_group_by_prefix() {
        let mut b = ModelBuilder::new();
        b.binary("y(p,r,1)".into());
        b.binary("y(p,r,4)".into());
        b.continuous("dist(n,1)".into());
        let m = b.finish();
        assert_eq!(m.var_families().get("y"), Some(&2));
        assert_eq!(family("dist(n,1)"), "dist");
    }
}
