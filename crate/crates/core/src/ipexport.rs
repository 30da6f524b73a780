//! The balanced anticoloring integer program and an LP-format writer.
//!
//! Variables, in this order: `theta`, `b`, `w`, then `x_i_j` (black) and
//! `y_i_j` (white) for every cell in row-major order.
//!
//! ```text
//! max  theta
//! s.t. theta - b <= 0                                  (minB)
//!      theta - w <= 0                                  (minW)
//!      sum x - b  = 0                                  (balB)
//!      sum y - w  = 0                                  (balW)
//!      sum_{(s,r) in N[i,j]} y_s_r + |N[i,j]| x_i_j <= |N[i,j]|   (nbhd_i_j)
//! ```
//!
//! `N[i,j]` is the closed neighbourhood, so `y_i_j` appears in its own row
//! and black and white can never share a cell.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use crate::board::{BoardSpec, Cell, Piece};
use crate::coloring::Coloring;
use crate::error::{Error, Result};

const TERMS_PER_LINE: usize = 8;
const NAMES_PER_LINE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Integer,
    Binary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: i64,
    /// `None` means unbounded above.
    pub upper: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    /// `(coefficient, variable index)`, in emission order.
    pub terms: Vec<(i64, usize)>,
    pub sense: Sense,
    pub rhs: i64,
}

impl Constraint {
    fn holds(&self, values: &[i64]) -> bool {
        let lhs: i64 = self.terms.iter().map(|&(c, v)| c * values[v]).sum();
        match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Eq => lhs == self.rhs,
            Sense::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpModel {
    pub spec: BoardSpec,
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    /// Index of the maximized variable.
    pub objective: usize,
}

pub const THETA: usize = 0;
pub const B: usize = 1;
pub const W: usize = 2;

impl IpModel {
    pub fn x(&self, cell: Cell) -> usize {
        3 + self.spec.index(cell)
    }

    pub fn y(&self, cell: Cell) -> usize {
        3 + self.spec.area() + self.spec.index(cell)
    }

    /// Pins `b`, turning the balanced model into the fixed-black variant.
    pub fn fix_b(mut self, b: usize) -> Self {
        self.variables[B].lower = b as i64;
        self.variables[B].upper = Some(b as i64);
        self
    }

    /// Names of the constraints `values` violates, bounds and integrality
    /// included.
    pub fn violations(&self, values: &[i64]) -> Vec<String> {
        assert_eq!(values.len(), self.variables.len(), "one value per variable");
        let mut out = Vec::new();
        for (v, &x) in self.variables.iter().zip(values) {
            let in_bounds = x >= v.lower && v.upper.is_none_or(|u| x <= u);
            let binary_ok = v.kind != VarKind::Binary || x == 0 || x == 1;
            if !in_bounds || !binary_ok {
                out.push(format!("bound:{}", v.name));
            }
        }
        out.extend(self.constraints.iter().filter(|c| !c.holds(values)).map(|c| c.name.clone()));
        out
    }

    pub fn is_feasible(&self, values: &[i64]) -> bool {
        self.violations(values).is_empty()
    }

    /// The 0/1 point of a coloring, with `theta = min(b, w)`.
    pub fn point_of(&self, c: &Coloring) -> Vec<i64> {
        let mut values = vec![0i64; self.variables.len()];
        let (b, w) = (c.black().len() as i64, c.white().len() as i64);
        values[THETA] = b.min(w);
        values[B] = b;
        values[W] = w;
        for cell in c.black().iter() {
            values[self.x(cell)] = 1;
        }
        for cell in c.white().iter() {
            values[self.y(cell)] = 1;
        }
        values
    }

    /// Reads a coloring back from the binaries of a point.
    pub fn decode(&self, values: &[i64]) -> Result<Coloring> {
        let mut black = self.spec.empty_set();
        let mut white = self.spec.empty_set();
        for cell in self.spec.cells() {
            if values[self.x(cell)] == 1 {
                black.insert(cell)?;
            }
            if values[self.y(cell)] == 1 {
                white.insert(cell)?;
            }
        }
        Coloring::new(self.spec, black, white)
    }
}

pub fn build_ip(spec: &BoardSpec) -> IpModel {
    let cells = spec.area() as i64;
    let mut variables = vec![
        Variable { name: "theta".into(), kind: VarKind::Continuous, lower: 0, upper: None },
        Variable { name: "b".into(), kind: VarKind::Integer, lower: 0, upper: Some(cells) },
        Variable { name: "w".into(), kind: VarKind::Integer, lower: 0, upper: Some(cells) },
    ];
    for prefix in ["x", "y"] {
        variables.extend(spec.cells().map(|c| Variable {
            name: format!("{prefix}_{}_{}", c.row, c.col),
            kind: VarKind::Binary,
            lower: 0,
            upper: Some(1),
        }));
    }
    let mut model = IpModel { spec: *spec, variables, constraints: Vec::new(), objective: THETA };

    let xs: Vec<(i64, usize)> = spec.cells().map(|c| (1, model.x(c))).collect();
    let ys: Vec<(i64, usize)> = spec.cells().map(|c| (1, model.y(c))).collect();
    let mut constraints = vec![
        Constraint { name: "minB".into(), terms: vec![(1, THETA), (-1, B)], sense: Sense::Le, rhs: 0 },
        Constraint { name: "minW".into(), terms: vec![(1, THETA), (-1, W)], sense: Sense::Le, rhs: 0 },
        Constraint { name: "balB".into(), terms: [xs, vec![(-1, B)]].concat(), sense: Sense::Eq, rhs: 0 },
        Constraint { name: "balW".into(), terms: [ys, vec![(-1, W)]].concat(), sense: Sense::Eq, rhs: 0 },
    ];
    for cell in spec.cells() {
        let hood = spec.closed_neighborhood(cell).expect("in bounds");
        let size = hood.len() as i64;
        let mut terms: Vec<(i64, usize)> = hood.iter().map(|c| (1, model.y(c))).collect();
        terms.push((size, model.x(cell)));
        constraints.push(Constraint {
            name: format!("nbhd_{}_{}", cell.row, cell.col),
            terms,
            sense: Sense::Le,
            rhs: size,
        });
    }
    model.constraints = constraints;
    model
}

fn write_terms(out: &mut String, model: &IpModel, terms: &[(i64, usize)]) {
    for (i, &(coef, var)) in terms.iter().enumerate() {
        if i > 0 && i % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let name = &model.variables[var].name;
        let sign = if coef < 0 { "-" } else { "+" };
        let magnitude = coef.abs();
        if i == 0 {
            if coef < 0 {
                out.push_str("- ");
            }
        } else {
            write!(out, " {sign} ").expect("write to string");
        }
        if magnitude != 1 {
            write!(out, "{magnitude} ").expect("write to string");
        }
        out.push_str(name);
    }
}

fn write_names<'a>(out: &mut String, names: impl Iterator<Item = &'a str>) {
    let names: Vec<&str> = names.collect();
    for chunk in names.chunks(NAMES_PER_LINE) {
        writeln!(out, " {}", chunk.join(" ")).expect("write to string");
    }
}

/// CPLEX-LP text for `model`. Deterministic: the same model always yields
/// the same bytes.
pub fn write_lp(model: &IpModel) -> String {
    let spec = &model.spec;
    let mut out = String::new();
    writeln!(out, "\\ balanced black-and-white anticoloring").expect("write to string");
    writeln!(out, "\\ board {} {} {}", spec.rows(), spec.cols(), spec.piece()).expect("write to string");
    out.push_str("Maximize\n obj: ");
    out.push_str(&model.variables[model.objective].name);
    out.push_str("\nSubject To\n");
    for c in &model.constraints {
        write!(out, " {}: ", c.name).expect("write to string");
        write_terms(&mut out, model, &c.terms);
        writeln!(out, " {} {}", c.sense, c.rhs).expect("write to string");
    }
    out.push_str("Bounds\n");
    for v in model.variables.iter().filter(|v| v.kind != VarKind::Binary) {
        match v.upper {
            Some(u) if u == v.lower => writeln!(out, " {} = {}", v.name, u),
            Some(u) => writeln!(out, " {} <= {} <= {}", v.lower, v.name, u),
            None => writeln!(out, " {} >= {}", v.name, v.lower),
        }
        .expect("write to string");
    }
    out.push_str("Generals\n");
    write_names(&mut out, model.variables.iter().filter(|v| v.kind == VarKind::Integer).map(|v| v.name.as_str()));
    out.push_str("Binaries\n");
    write_names(&mut out, model.variables.iter().filter(|v| v.kind == VarKind::Binary).map(|v| v.name.as_str()));
    out.push_str("End\n");
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Generals,
    Binaries,
    End,
}

/// Parses text produced by [`write_lp`] back into a model. Only the subset of
/// the LP format the writer emits is understood.
pub fn parse_lp(text: &str) -> Result<IpModel> {
    let mut spec: Option<BoardSpec> = None;
    let mut model: Option<IpModel> = None;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut section = Section::Preamble;
    let mut pending: Option<(usize, String)> = None;
    let mut objective = None;
    let mut constraints = Vec::new();
    let mut kinds_seen: Vec<(usize, VarKind)> = Vec::new();

    let err = |line: usize, reason: String| Error::Lp { line, reason };

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        if let Some(comment) = raw.strip_prefix('\\') {
            let mut words = comment.split_whitespace();
            if words.next() == Some("board") {
                let fields: Vec<&str> = words.collect();
                let [m, n, piece] = fields[..] else {
                    return Err(err(lineno, "board comment needs rows, cols and piece".into()));
                };
                let m = m.parse().map_err(|_| err(lineno, format!("bad row count `{m}`")))?;
                let n = n.parse().map_err(|_| err(lineno, format!("bad column count `{n}`")))?;
                let piece: Piece = piece.parse().map_err(|e: String| err(lineno, e))?;
                let s = BoardSpec::new(m, n, piece)?;
                let template = build_ip(&s);
                index = template.variables.iter().enumerate().map(|(k, v)| (v.name.clone(), k)).collect();
                model = Some(template);
                spec = Some(s);
            }
            continue;
        }
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let keyword = match line.to_ascii_lowercase().as_str() {
            "maximize" => Some(Section::Objective),
            "subject to" => Some(Section::Constraints),
            "bounds" => Some(Section::Bounds),
            "generals" => Some(Section::Generals),
            "binaries" => Some(Section::Binaries),
            "end" => Some(Section::End),
            _ => None,
        };
        if let Some(next) = keyword {
            if let Some((at, body)) = pending.take() {
                constraints.push(parse_constraint(&index, at, &body)?);
            }
            section = next;
            continue;
        }
        if spec.is_none() {
            return Err(err(lineno, "missing `\\ board m n piece` comment before the model".into()));
        }
        let var =
            |name: &str| index.get(name).copied().ok_or_else(|| err(lineno, format!("unknown variable `{name}`")));
        match section {
            Section::Preamble | Section::End => return Err(err(lineno, format!("unexpected `{line}`"))),
            Section::Objective => {
                let name = line.split_once(':').map_or(line, |(_, rest)| rest).trim();
                objective = Some(var(name)?);
            }
            Section::Constraints => {
                if line.contains(':') {
                    if let Some((at, body)) = pending.take() {
                        constraints.push(parse_constraint(&index, at, &body)?);
                    }
                    pending = Some((lineno, line.to_string()));
                } else if let Some((_, body)) = pending.as_mut() {
                    body.push(' ');
                    body.push_str(line);
                } else {
                    return Err(err(lineno, "continuation without a constraint".into()));
                }
            }
            Section::Bounds => {
                let model = model.as_mut().expect("board seen");
                let parts: Vec<&str> = line.split_whitespace().collect();
                let num = |s: &str| s.parse::<i64>().map_err(|_| err(lineno, format!("bad bound `{s}`")));
                match parts[..] {
                    [lo, "<=", name, "<=", hi] => {
                        let v = var(name)?;
                        model.variables[v].lower = num(lo)?;
                        model.variables[v].upper = Some(num(hi)?);
                    }
                    [name, "=", value] => {
                        let v = var(name)?;
                        let value = num(value)?;
                        model.variables[v].lower = value;
                        model.variables[v].upper = Some(value);
                    }
                    [name, ">=", lo] => {
                        let v = var(name)?;
                        model.variables[v].lower = num(lo)?;
                        model.variables[v].upper = None;
                    }
                    _ => return Err(err(lineno, format!("unsupported bound `{line}`"))),
                }
            }
            Section::Generals | Section::Binaries => {
                let kind = if section == Section::Generals { VarKind::Integer } else { VarKind::Binary };
                for name in line.split_whitespace() {
                    kinds_seen.push((var(name)?, kind));
                }
            }
        }
    }
    if section != Section::End {
        return Err(err(text.lines().count(), "missing `End`".into()));
    }
    let mut model = model.ok_or_else(|| err(1, "missing board comment".into()))?;
    for v in model.variables.iter_mut() {
        v.kind = VarKind::Continuous;
    }
    for (v, kind) in kinds_seen {
        model.variables[v].kind = kind;
    }
    model.objective = objective.ok_or_else(|| err(1, "missing objective".into()))?;
    model.constraints = constraints;
    Ok(model)
}

fn parse_constraint(index: &HashMap<String, usize>, line: usize, body: &str) -> Result<Constraint> {
    let err = |reason: String| Error::Lp { line, reason };
    let (name, expr) = body.split_once(':').ok_or_else(|| err("constraint without a name".into()))?;
    let tokens: Vec<&str> = expr.split_whitespace().collect();
    let op_at = tokens
        .iter()
        .position(|t| matches!(*t, "<=" | ">=" | "="))
        .ok_or_else(|| err("constraint without a relation".into()))?;
    let sense = match tokens[op_at] {
        "<=" => Sense::Le,
        ">=" => Sense::Ge,
        _ => Sense::Eq,
    };
    let [rhs] = tokens[op_at + 1..] else {
        return Err(err("expected a single right-hand side".into()));
    };
    let rhs = rhs.parse().map_err(|_| err(format!("bad right-hand side `{rhs}`")))?;

    let mut terms = Vec::new();
    let mut sign = 1i64;
    let mut coef: Option<i64> = None;
    for tok in &tokens[..op_at] {
        match *tok {
            "+" => sign = 1,
            "-" => sign = -1,
            t if t.chars().all(|ch| ch.is_ascii_digit()) => {
                coef = Some(t.parse().map_err(|_| err(format!("bad coefficient `{t}`")))?);
            }
            t => {
                let v = *index.get(t).ok_or_else(|| err(format!("unknown variable `{t}`")))?;
                terms.push((sign * coef.take().unwrap_or(1), v));
                sign = 1;
            }
        }
    }
    Ok(Constraint { name: name.trim().to_string(), terms, sense, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_follow_the_board() {
        let m = build_ip(&BoardSpec::knight(2, 3).unwrap());
        assert_eq!((m.variables.len(), m.constraints.len()), (15, 10));
        let m = build_ip(&BoardSpec::knight(8, 8).unwrap());
        assert_eq!((m.variables.len(), m.constraints.len()), (131, 68));
    }

    #[test]
    fn edgeless_board_has_singleton_neighbourhoods() {
        let spec = BoardSpec::knight(1, 2).unwrap();
        let m = build_ip(&spec);
        let rows: Vec<_> = m.constraints.iter().filter(|c| c.name.starts_with("nbhd")).collect();
        assert_eq!(rows.len(), 2);
        for c in rows {
            assert_eq!(c.rhs, 1);
            assert_eq!(c.terms.len(), 2);
        }
    }

    #[test]
    fn neighbourhood_row_text() {
        let spec = BoardSpec::knight(2, 3).unwrap();
        let text = write_lp(&build_ip(&spec));
        assert!(text.contains(" nbhd_1_1: y_1_1 + y_2_3 + 2 x_1_1 <= 2\n"), "{text}");
        assert!(text.contains(" minB: theta - b <= 0\n"));
        assert_eq!(text.matches("nbhd_").count(), 6);
        assert!(text.ends_with("End\n"));
    }

    #[test]
    fn text_is_deterministic_and_reparses() {
        for (m, n) in [(2, 3), (5, 5), (8, 8)] {
            let model = build_ip(&BoardSpec::knight(m, n).unwrap());
            let text = write_lp(&model);
            assert_eq!(text, write_lp(&model));
            assert_eq!(parse_lp(&text).unwrap(), model);
        }
        let fixed = build_ip(&BoardSpec::knight(3, 7).unwrap()).fix_b(8);
        let text = write_lp(&fixed);
        assert!(text.contains(" b = 8\n"));
        assert_eq!(parse_lp(&text).unwrap(), fixed);
    }

    #[test]
    fn parser_reports_problems() {
        assert!(parse_lp("Maximize\n obj: theta\nEnd\n").is_err());
        let good = write_lp(&build_ip(&BoardSpec::knight(2, 2).unwrap()));
        assert!(parse_lp(&good.replace("End\n", "")).is_err());
        assert!(parse_lp(&good.replace("x_1_1 x_1_2", "x_1_1 q_9")).is_err());
        assert!(parse_lp(&good.replace("<= 0", "<= zero")).is_err());
    }

    #[test]
    fn coloring_points_are_feasible() {
        let spec = BoardSpec::knight(3, 3).unwrap();
        let model = build_ip(&spec);
        let c = Coloring::new(spec, spec.set_of([(1, 1), (2, 2)]).unwrap(), spec.set_of([(1, 2), (1, 3)]).unwrap())
            .unwrap();
        assert!(c.verify().valid);
        let point = model.point_of(&c);
        assert!(model.is_feasible(&point), "{:?}", model.violations(&point));
        assert_eq!(model.decode(&point).unwrap(), c);

        let bad = Coloring::new(spec, spec.set_of([(1, 1)]).unwrap(), spec.set_of([(2, 3)]).unwrap()).unwrap();
        assert_eq!(model.violations(&model.point_of(&bad)), vec!["nbhd_1_1".to_string()]);
    }

    #[test]
    fn overlap_breaks_own_row() {
        let spec = BoardSpec::knight(1, 2).unwrap();
        let model = build_ip(&spec);
        let mut point = vec![0; model.variables.len()];
        point[model.x(Cell::new(1, 1))] = 1;
        point[model.y(Cell::new(1, 1))] = 1;
        point[B] = 1;
        point[W] = 1;
        assert_eq!(model.violations(&point), vec!["nbhd_1_1".to_string()]);
    }
}
