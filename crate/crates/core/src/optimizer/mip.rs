//! The optimal-scheme integer program.
//!
//! Variables (all indices 1-based, `s` search, `i` iteration, `j` piece,
//! `l` trie level, `d` error count, `q` mismatch pattern):
//!
//! - `x_s_i_j` binary: piece `j` is searched at iteration `i`
//! - `tp_s_i_j`, `tm_s_i_j` binary: positive/negative part of the change in
//!   "searched so far" between pieces `j - 1` and `j` (`i = 2..P-1`, `j = 1..P+1`)
//! - `zl_s_l_d`, `zu_s_l_d` binary: `d` is above the lower / below the upper
//!   bound at level `l`
//! - `lam_q_s` binary: search `s` covers pattern `q`
//! - `L_s_i`, `U_s_i` integer: the search's bounds
//! - `n_s_l_d` continuous: trie edges at level `l` with `d` errors
//!
//! Pieces must have equal length `m = R / P`.

use std::fmt::Write as _;

use super::{OptimizeError, ProblemSpec};
use crate::scheme::{covers, enumerate_mismatch_patterns, MismatchPattern, SearchScheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Integer,
    Continuous,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

/// `sum(coef * var) sense rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub name: String,
    pub terms: Vec<(i128, usize)>,
    pub sense: Sense,
    pub rhs: i128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MipOptions {
    /// Mirror and search-order symmetry rows.
    pub symmetry: bool,
    /// Rows restricting late iterations to the read's ends.
    pub strengthen: bool,
    /// Refuse models with more variables than this.
    pub max_variables: u128,
}

impl Default for MipOptions {
    fn default() -> Self {
        MipOptions {
            symmetry: true,
            strengthen: true,
            max_variables: 5_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MipModel {
    pub spec: ProblemSpec,
    pub patterns: Vec<MismatchPattern>,
    pub variables: Vec<Variable>,
    pub rows: Vec<Row>,
    /// All objective coefficients are 1.
    pub objective: Vec<usize>,
    index: Indexer,
}

/// Variable index arithmetic; every family is a dense block.
#[derive(Debug, Clone)]
struct Indexer {
    s: usize,
    p: usize,
    r: usize,
    k: usize,
    x: usize,
    tp: usize,
    tm: usize,
    zu: usize,
    zl: usize,
    lam: usize,
    lo: usize,
    up: usize,
    n: usize,
    end: usize,
}

impl Indexer {
    fn new(s: usize, p: usize, r: usize, k: usize, q: usize) -> Self {
        let t = p.saturating_sub(2) * (p + 1);
        let x = 0;
        let tp = x + s * p * p;
        let tm = tp + s * t;
        let zu = tm + s * t;
        let zl = zu + s * r * (k + 1);
        let lam = zl + s * r * (k + 1);
        let lo = lam + q * s;
        let up = lo + s * p;
        let n = up + s * p;
        let end = n + s * r * (k + 1);
        Indexer {
            s,
            p,
            r,
            k,
            x,
            tp,
            tm,
            zu,
            zl,
            lam,
            lo,
            up,
            n,
            end,
        }
    }
    fn x(&self, s: usize, i: usize, j: usize) -> usize {
        self.x + ((s - 1) * self.p + (i - 1)) * self.p + (j - 1)
    }
    fn t(&self, base: usize, s: usize, i: usize, j: usize) -> usize {
        base + ((s - 1) * (self.p - 2) + (i - 2)) * (self.p + 1) + (j - 1)
    }
    fn z(&self, base: usize, s: usize, l: usize, d: usize) -> usize {
        base + ((s - 1) * self.r + (l - 1)) * (self.k + 1) + d
    }
    fn lam(&self, q: usize, s: usize) -> usize {
        self.lam + (q - 1) * self.s + (s - 1)
    }
    fn bound(&self, base: usize, s: usize, i: usize) -> usize {
        base + (s - 1) * self.p + (i - 1)
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

struct RowBuilder {
    rows: Vec<Row>,
}

impl RowBuilder {
    fn push(&mut self, name: String, terms: Vec<(i128, usize)>, sense: Sense, rhs: i128) {
        let mut merged: Vec<(i128, usize)> = Vec::with_capacity(terms.len());
        for (c, v) in terms {
            match merged.iter_mut().find(|(_, w)| *w == v) {
                Some(t) => t.0 += c,
                None => merged.push((c, v)),
            }
        }
        merged.retain(|&(c, _)| c != 0);
        self.rows.push(Row {
            name,
            terms: merged,
            sense,
            rhs,
        });
    }
}

/// Builds the model for `spec`.
pub fn build_mip(spec: &ProblemSpec, options: &MipOptions) -> Result<MipModel, OptimizeError> {
    spec.validate()?;
    let (s_bar, p, r, k) = (spec.max_searches, spec.pieces, spec.read_len, spec.max_errors as usize);
    if r % p != 0 {
        return Err(OptimizeError::UnequalPieces { read_len: r, pieces: p });
    }
    let m = r / p;
    let patterns = enumerate_mismatch_patterns(spec.max_errors, &vec![m; p]);
    let q_count = patterns.len();
    for (what, count) in [
        ("|M| * S", (q_count * s_bar) as u128),
        ("R * (K + 1) * S", (r * (k + 1) * s_bar) as u128),
    ] {
        if count > options.max_variables {
            return Err(OptimizeError::TooLarge {
                what,
                count,
                budget: options.max_variables,
            });
        }
    }
    let ix = Indexer::new(s_bar, p, r, k, q_count);
    if ix.end as u128 > options.max_variables {
        return Err(OptimizeError::TooLarge {
            what: "variables",
            count: ix.end as u128,
            budget: options.max_variables,
        });
    }

    let mut variables = Vec::with_capacity(ix.end);
    let mut var = |name: String, kind: VarKind| variables.push(Variable { name, kind });
    for s in 1..=s_bar {
        for i in 1..=p {
            for j in 1..=p {
                var(format!("x_{s}_{i}_{j}"), VarKind::Binary);
            }
        }
    }
    for prefix in ["tp", "tm"] {
        for s in 1..=s_bar {
            for i in 2..p {
                for j in 1..=p + 1 {
                    var(format!("{prefix}_{s}_{i}_{j}"), VarKind::Binary);
                }
            }
        }
    }
    for prefix in ["zu", "zl"] {
        for s in 1..=s_bar {
            for l in 1..=r {
                for d in 0..=k {
                    var(format!("{prefix}_{s}_{l}_{d}"), VarKind::Binary);
                }
            }
        }
    }
    for q in 1..=q_count {
        for s in 1..=s_bar {
            var(format!("lam_{q}_{s}"), VarKind::Binary);
        }
    }
    for prefix in ["L", "U"] {
        for s in 1..=s_bar {
            for i in 1..=p {
                var(format!("{prefix}_{s}_{i}"), VarKind::Integer);
            }
        }
    }
    for s in 1..=s_bar {
        for l in 1..=r {
            for d in 0..=k {
                var(format!("n_{s}_{l}_{d}"), VarKind::Continuous);
            }
        }
    }
    debug_assert_eq!(variables.len(), ix.end);

    let mut rb = RowBuilder { rows: Vec::new() };
    let (ki, ri) = (k as i128, r as i128);
    for s in 1..=s_bar {
        // each piece searched once, each iteration searches one piece
        for j in 1..=p {
            rb.push(
                format!("assign_piece_{s}_{j}"),
                (1..=p).map(|i| (1, ix.x(s, i, j))).collect(),
                Sense::Eq,
                1,
            );
        }
        for i in 1..=p {
            rb.push(
                format!("assign_iter_{s}_{i}"),
                (1..=p).map(|j| (1, ix.x(s, i, j))).collect(),
                Sense::Eq,
                1,
            );
        }
        // connectivity
        for i in 2..p {
            for j in 1..=p + 1 {
                let mut terms = Vec::new();
                for h in 1..=i {
                    if j <= p {
                        terms.push((1, ix.x(s, h, j)));
                    }
                    if j >= 2 {
                        terms.push((-1, ix.x(s, h, j - 1)));
                    }
                }
                terms.push((-1, ix.t(ix.tp, s, i, j)));
                terms.push((1, ix.t(ix.tm, s, i, j)));
                rb.push(format!("conn_{s}_{i}_{j}"), terms, Sense::Eq, 0);
            }
            let terms = (1..=p + 1)
                .flat_map(|j| [(1, ix.t(ix.tp, s, i, j)), (1, ix.t(ix.tm, s, i, j))])
                .collect();
            rb.push(format!("conn_sum_{s}_{i}"), terms, Sense::Eq, 2);
        }
        // edge counts
        for l in 1..=r {
            let it = l.div_ceil(m);
            for d in 0..=k {
                let (li, di) = (l as i128, d as i128);
                // d - (L - m*it + l) + 1 <= (R + 1) zl
                rb.push(
                    format!("n_low_{s}_{l}_{d}"),
                    vec![(-1, ix.bound(ix.lo, s, it)), (-(ri + 1), ix.z(ix.zl, s, l, d))],
                    Sense::Le,
                    -di - (m * it) as i128 + li - 1,
                );
                // U + 1 - d <= (K + 1) zu
                rb.push(
                    format!("n_up_{s}_{l}_{d}"),
                    vec![(1, ix.bound(ix.up, s, it)), (-(ki + 1), ix.z(ix.zu, s, l, d))],
                    Sense::Le,
                    di - 1,
                );
                // C(l,d)(sigma-1)^d (zu + zl - 2) <= n_l_d - n_{l-1}_d - (sigma-1) n_{l-1}_{d-1}
                let big = (binomial(l as u128, d as u128) * u128::from(spec.sigma - 1).pow(d as u32)) as i128;
                let mut terms = vec![
                    (1, ix.z(ix.n, s, l, d)),
                    (-big, ix.z(ix.zu, s, l, d)),
                    (-big, ix.z(ix.zl, s, l, d)),
                ];
                let mut rhs = -2 * big;
                let mism = i128::from(spec.sigma - 1);
                if l == 1 {
                    // n_0_0 = 1, n_0_d = 0 otherwise
                    if d == 0 {
                        rhs += 1;
                    }
                    if d == 1 {
                        rhs += mism;
                    }
                } else {
                    terms.push((-1, ix.z(ix.n, s, l - 1, d)));
                    if d >= 1 {
                        terms.push((-mism, ix.z(ix.n, s, l - 1, d - 1)));
                    }
                }
                rb.push(format!("n_rec_{s}_{l}_{d}"), terms, Sense::Ge, rhs);
            }
        }
        // monotone bounds
        for i in 1..p {
            rb.push(
                format!("mono_L_{s}_{i}"),
                vec![(1, ix.bound(ix.lo, s, i)), (-1, ix.bound(ix.lo, s, i + 1))],
                Sense::Le,
                0,
            );
            rb.push(
                format!("mono_U_{s}_{i}"),
                vec![(1, ix.bound(ix.up, s, i)), (-1, ix.bound(ix.up, s, i + 1))],
                Sense::Le,
                0,
            );
        }
        // coverage
        for (qi, pat) in patterns.iter().enumerate() {
            let q = qi + 1;
            for i in 1..=p {
                let mut errs: Vec<(i128, usize)> = Vec::new();
                for h in 1..=i {
                    for j in 1..=p {
                        let a = i128::from(pat.counts[j - 1]);
                        if a != 0 {
                            errs.push((a, ix.x(s, h, j)));
                        }
                    }
                }
                // L + K(lam - 1) <= errs
                let mut low = vec![(1, ix.bound(ix.lo, s, i)), (ki, ix.lam(q, s))];
                low.extend(errs.iter().map(|&(a, v)| (-a, v)));
                rb.push(format!("cov_low_{q}_{s}_{i}"), low, Sense::Le, ki);
                // errs <= U + K(1 - lam)
                let mut high = errs.clone();
                high.push((-1, ix.bound(ix.up, s, i)));
                high.push((ki, ix.lam(q, s)));
                rb.push(format!("cov_up_{q}_{s}_{i}"), high, Sense::Le, ki);
            }
        }
    }
    for q in 1..=q_count {
        rb.push(
            format!("covered_{q}"),
            (1..=s_bar).map(|s| (1, ix.lam(q, s))).collect(),
            Sense::Ge,
            1,
        );
    }
    if options.symmetry {
        rb.push("mirror".to_string(), vec![(1, ix.x(1, p, p))], Sense::Eq, 1);
        for s in 1..=s_bar {
            for j in 2..=p {
                // sum_{t>=s} sum_{k<j} x_t_1_k <= (S - s + 1)(1 - x_s_1_j)
                let width = (s_bar - s + 1) as i128;
                let mut terms: Vec<(i128, usize)> = (s..=s_bar)
                    .flat_map(|t| (1..j).map(move |kk| (t, kk)))
                    .map(|(t, kk)| (1, ix.x(t, 1, kk)))
                    .collect();
                terms.push((width, ix.x(s, 1, j)));
                rb.push(format!("order_{s}_{j}"), terms, Sense::Le, width);
            }
        }
    }
    if options.strengthen {
        for s in 1..=s_bar {
            for i in p.div_ceil(2) + 1..=p {
                let terms = (1..=p - i + 1).chain(i..=p).map(|j| (1, ix.x(s, i, j))).collect();
                rb.push(format!("ends_{s}_{i}"), terms, Sense::Eq, 1);
            }
        }
    }

    let objective = (0..s_bar * r * (k + 1)).map(|o| ix.n + o).collect();
    Ok(MipModel {
        spec: *spec,
        patterns,
        variables,
        rows: rb.rows,
        objective,
        index: ix,
    })
}

impl MipModel {
    pub fn num_binaries(&self) -> usize {
        self.variables.iter().filter(|v| v.kind == VarKind::Binary).count()
    }

    pub fn num_integers(&self) -> usize {
        self.variables.iter().filter(|v| v.kind == VarKind::Integer).count()
    }

    /// The assignment describing `scheme`, which must have exactly `S`
    /// non-empty searches over `P` pieces with bounds capped at `K`.
    pub fn assignment(&self, scheme: &SearchScheme) -> Option<Vec<i128>> {
        let ix = &self.index;
        let (p, r, k) = (ix.p, ix.r, ix.k);
        if scheme.searches.len() != ix.s || scheme.num_pieces != p {
            return None;
        }
        let m = r / p;
        let mism = i128::from(self.spec.sigma - 1);
        let mut v = vec![0i128; ix.end];
        for (si, search) in scheme.searches.iter().enumerate() {
            let s = si + 1;
            let lower: Vec<i128> = search.lower.iter().map(|&b| i128::from(b.min(k as u32))).collect();
            let upper: Vec<i128> = search.upper.iter().map(|&b| i128::from(b.min(k as u32))).collect();
            for (i0, &j) in search.pi.iter().enumerate() {
                v[ix.x(s, i0 + 1, j)] = 1;
                v[ix.bound(ix.lo, s, i0 + 1)] = lower[i0];
                v[ix.bound(ix.up, s, i0 + 1)] = upper[i0];
            }
            for i in 2..p {
                let done = |j: usize| i128::from(j >= 1 && j <= p && search.pi[..i].contains(&j));
                for j in 1..=p + 1 {
                    let diff = done(j) - done(j - 1);
                    v[ix.t(ix.tp, s, i, j)] = diff.max(0);
                    v[ix.t(ix.tm, s, i, j)] = (-diff).max(0);
                }
            }
            let mut prev = vec![0i128; k + 1];
            prev[0] = 1;
            for l in 1..=r {
                let it = l.div_ceil(m);
                let mut row = vec![0i128; k + 1];
                for d in 0..=k {
                    let zl = d as i128 >= lower[it - 1] - (m * it) as i128 + l as i128;
                    let zu = d as i128 <= upper[it - 1];
                    v[ix.z(ix.zl, s, l, d)] = i128::from(zl);
                    v[ix.z(ix.zu, s, l, d)] = i128::from(zu);
                    if zl && zu {
                        row[d] = prev[d] + if d > 0 { mism * prev[d - 1] } else { 0 };
                    }
                    v[ix.z(ix.n, s, l, d)] = row[d];
                }
                prev = row;
            }
            for (qi, pat) in self.patterns.iter().enumerate() {
                v[ix.lam(qi + 1, s)] = i128::from(covers(search, pat));
            }
        }
        Some(v)
    }

    /// Names of the rows violated by `values`.
    pub fn violations(&self, values: &[i128]) -> Vec<String> {
        self.rows
            .iter()
            .filter(|row| {
                let lhs: i128 = row.terms.iter().map(|&(c, v)| c * values[v]).sum();
                match row.sense {
                    Sense::Le => lhs > row.rhs,
                    Sense::Ge => lhs < row.rhs,
                    Sense::Eq => lhs != row.rhs,
                }
            })
            .map(|row| row.name.clone())
            .collect()
    }

    pub fn objective_value(&self, values: &[i128]) -> i128 {
        self.objective.iter().map(|&v| values[v]).sum()
    }
}

const TERMS_PER_LINE: usize = 8;

fn write_terms(out: &mut String, terms: &[(i128, usize)], vars: &[Variable]) {
    for (n, &(c, v)) in terms.iter().enumerate() {
        if n > 0 && n % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if c < 0 { "-" } else { "+" };
        if n == 0 && c >= 0 {
            out.push(' ');
        } else {
            let _ = write!(out, " {sign} ");
        }
        let a = c.abs();
        if a != 1 {
            let _ = write!(out, "{a} ");
        }
        out.push_str(&vars[v].name);
    }
}

/// Renders the model in the CPLEX LP file format.
pub fn export_lp(model: &MipModel) -> String {
    let spec = &model.spec;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "\\ optimal search scheme: K={} R={} P={} S={} sigma={}",
        spec.max_errors, spec.read_len, spec.pieces, spec.max_searches, spec.sigma
    );
    out.push_str("Minimize\n obj:");
    let obj: Vec<(i128, usize)> = model.objective.iter().map(|&v| (1, v)).collect();
    write_terms(&mut out, &obj, &model.variables);
    out.push_str("\nSubject To\n");
    for row in &model.rows {
        let _ = write!(out, " {}:", row.name);
        if row.terms.is_empty() {
            // keep the row; an empty left side is written as 0 times the first variable
            let _ = write!(out, " 0 {}", model.variables[0].name);
        }
        write_terms(&mut out, &row.terms, &model.variables);
        let op = match row.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        let _ = writeln!(out, " {op} {}", row.rhs);
    }
    out.push_str("Bounds\n");
    for v in &model.variables {
        if v.kind != VarKind::Binary {
            let _ = writeln!(out, " {} >= 0", v.name);
        }
    }
    for (header, kind) in [("General", VarKind::Integer), ("Binary", VarKind::Binary)] {
        let _ = writeln!(out, "{header}");
        let names: Vec<&str> = model
            .variables
            .iter()
            .filter(|v| v.kind == kind)
            .map(|v| v.name.as_str())
            .collect();
        for chunk in names.chunks(TERMS_PER_LINE) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::builtin;

    fn spec(k: u32, r: usize, p: usize, s: usize, sigma: u32) -> ProblemSpec {
        ProblemSpec::new(k, r, p, s, sigma).unwrap()
    }

    #[test]
    fn variable_counts() {
        let model = build_mip(&spec(2, 6, 3, 3, 2), &MipOptions::default()).unwrap();
        let lam = model.variables.iter().filter(|v| v.name.starts_with("lam_")).count();
        assert_eq!(lam, 30);
        let (s, p, r, k, q) = (3, 3, 6, 3, 10);
        assert_eq!(
            model.variables.len(),
            s * p * p + 2 * s * (p - 2) * (p + 1) + 2 * s * r * k + q * s + 2 * s * p + s * r * k
        );
        let mirror: Vec<_> = model.rows.iter().filter(|r| r.name == "mirror").collect();
        assert_eq!(mirror.len(), 1);
        assert_eq!(mirror[0].terms.len(), 1);
        assert_eq!(model.variables[mirror[0].terms[0].1].name, "x_1_3_3");
    }

    #[test]
    fn optimal_scheme_satisfies_every_row() {
        let model = build_mip(&spec(2, 6, 3, 3, 2), &MipOptions::default()).unwrap();
        // canonical order sorts searches by first piece and puts (123,..) first
        let scheme = builtin("opt_k2_p3").unwrap().canonicalized();
        let values = model.assignment(&scheme).unwrap();
        assert_eq!(model.violations(&values), Vec::<String>::new());
        assert_eq!(model.objective_value(&values), 59);
    }

    #[test]
    fn uncovered_pattern_breaks_coverage() {
        let model = build_mip(&spec(2, 6, 3, 1, 2), &MipOptions::default()).unwrap();
        let scheme = SearchScheme::from_compact(2, 3, &["123,000,012"]).unwrap();
        let values = model.assignment(&scheme).unwrap();
        let bad = model.violations(&values);
        assert!(bad.iter().any(|r| r.starts_with("covered_")), "{bad:?}");
    }

    #[test]
    fn zero_errors_forces_one_edge_per_level() {
        let model = build_mip(&spec(0, 4, 2, 2, 4), &MipOptions::default()).unwrap();
        let scheme = SearchScheme::from_compact(0, 2, &["12,00,00", "21,00,00"]).unwrap();
        let values = model.assignment(&scheme).unwrap();
        assert_eq!(model.violations(&values), Vec::<String>::new());
        assert_eq!(model.objective_value(&values), 2 * 4);
    }

    #[test]
    fn export_is_deterministic() {
        let s = spec(1, 4, 2, 2, 2);
        let a = export_lp(&build_mip(&s, &MipOptions::default()).unwrap());
        let b = export_lp(&build_mip(&s, &MipOptions::default()).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with("\\ optimal search scheme"));
        assert!(a.contains("\nBinary\n"));
    }

    #[test]
    fn rejects_unequal_pieces_and_huge_models() {
        assert!(matches!(
            build_mip(&spec(1, 5, 2, 2, 2), &MipOptions::default()),
            Err(OptimizeError::UnequalPieces { .. })
        ));
        let small = MipOptions {
            max_variables: 10,
            ..Default::default()
        };
        assert!(matches!(
            build_mip(&spec(1, 4, 2, 2, 2), &small),
            Err(OptimizeError::TooLarge { .. })
        ));
    }
}
