//! Plain-text model files.
//!
//! Rule sets read like `IF a <= 2.5 AND b = 3 THEN 1` with a closing
//! `DEFAULT 0` line. PCA and ARD dumps write every float with 17
//! significant digits, so they parse back bit for bit.

use std::fmt::Write as _;
use std::str::FromStr;

use ripfs_core::ard::{ArdHyperparams, ArdModel, CycleLog, MlpNetwork};
use ripfs_core::data::{Attribute, AttributeKind};
use ripfs_core::linalg::Matrix;
use ripfs_core::pca::PcaModel;
use ripfs_core::pipeline::{PipelineKind, Selector, TrainedPipeline};
use ripfs_core::ripper::{Condition, Predicate, Rule, RuleSet};

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { line, message: message.into() })
}

/// 17 significant digits.
fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn floats(vs: &[f64]) -> String {
    vs.iter().map(|&v| float(v)).collect::<Vec<_>>().join(" ")
}

fn parse_list<T: FromStr>(text: &str, line: usize) -> Result<Vec<T>, FormatError> {
    text.split_whitespace().map(|t| t.parse().or_else(|_| err(line, format!("cannot parse `{t}`")))).collect()
}

/// Line cursor over a text body, tracking 1-based line numbers.
struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    at: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str, first_line: usize) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (first_line + i, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        Lines { lines, at: 0 }
    }

    fn last_line(&self) -> usize {
        self.lines.last().map_or(0, |l| l.0)
    }

    fn next(&mut self) -> Result<(usize, &'a str), FormatError> {
        let l = self.lines.get(self.at).copied();
        self.at += 1;
        l.map_or_else(|| err(self.last_line(), "unexpected end of input"), Ok)
    }

    fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.at).map(|l| l.1)
    }

    /// Next line, which must start with `key`; returns the rest.
    fn field(&mut self, key: &str) -> Result<(usize, &'a str), FormatError> {
        let (n, l) = self.next()?;
        match l.strip_prefix(key) {
            Some(rest) if rest.is_empty() || rest.starts_with(char::is_whitespace) => Ok((n, rest.trim())),
            _ => err(n, format!("expected `{key}`, found `{l}`")),
        }
    }

    fn floats(&mut self, key: &str, len: usize) -> Result<Vec<f64>, FormatError> {
        let (n, rest) = self.field(key)?;
        let v: Vec<f64> = parse_list(rest, n)?;
        if v.len() != len {
            return err(n, format!("`{key}` needs {len} values, found {}", v.len()));
        }
        Ok(v)
    }

    fn scalar<T: FromStr>(&mut self, key: &str) -> Result<T, FormatError> {
        let (n, rest) = self.field(key)?;
        rest.parse().or_else(|_| err(n, format!("bad `{key}` value `{rest}`")))
    }

    fn matrix(&mut self, key: &str, rows: usize, cols: usize) -> Result<Matrix, FormatError> {
        let (n, rest) = self.field(key)?;
        if !rest.is_empty() {
            return err(n, format!("`{key}` takes no inline values"));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let (n, l) = self.next()?;
            let row: Vec<f64> = parse_list(l, n)?;
            if row.len() != cols {
                return err(n, format!("matrix row needs {cols} values, found {}", row.len()));
            }
            data.extend(row);
        }
        Ok(Matrix::from_vec(rows, cols, data).expect("dimensions checked"))
    }
}

fn check_name(name: &str) -> Result<(), FormatError> {
    let reserved = ["IF", "AND", "THEN", "DEFAULT", "TRUE"];
    if name.is_empty() || name.contains(char::is_whitespace) || reserved.contains(&name) {
        return err(0, format!("attribute name `{name}` cannot be written in a rule"));
    }
    Ok(())
}

/// Rule set text; `schema` names the attributes its conditions index.
pub fn write_ruleset(rs: &RuleSet, schema: &[Attribute]) -> Result<String, FormatError> {
    let mut out = String::new();
    for rule in &rs.rules {
        let conds: Vec<String> = if rule.conditions.is_empty() {
            vec!["TRUE".into()]
        } else {
            rule.conditions
                .iter()
                .map(|c| {
                    let attr = schema.get(c.attribute).ok_or(FormatError {
                        line: 0,
                        message: format!("condition on attribute {} outside the schema", c.attribute),
                    })?;
                    check_name(&attr.name)?;
                    Ok(match c.predicate {
                        Predicate::Equals(v) => format!("{} = {v}", attr.name),
                        Predicate::LessOrEqual(t) => format!("{} <= {t:?}", attr.name),
                        Predicate::GreaterOrEqual(t) => format!("{} >= {t:?}", attr.name),
                    })
                })
                .collect::<Result<_, FormatError>>()?
        };
        writeln!(out, "IF {} THEN {}", conds.join(" AND "), rule.target).unwrap();
    }
    writeln!(out, "DEFAULT {}", rs.default_class).unwrap();
    Ok(out)
}

fn parse_class(tok: &str, line: usize) -> Result<u8, FormatError> {
    match tok {
        "0" => Ok(0),
        "1" => Ok(1),
        _ => err(line, format!("class must be 0 or 1, found `{tok}`")),
    }
}

fn parse_ruleset_lines(lines: &mut Lines, schema: &[Attribute]) -> Result<RuleSet, FormatError> {
    let mut rules = Vec::new();
    loop {
        let (n, l) = lines.next()?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            ["DEFAULT", class] => return Ok(RuleSet { rules, default_class: parse_class(class, n)? }),
            ["IF", rest @ ..] => {
                let (body, tail) = match rest {
                    [body @ .., "THEN", class] => (body, *class),
                    _ => return err(n, "rule must end with `THEN <class>`"),
                };
                let mut conditions = Vec::new();
                if body != ["TRUE"] {
                    for (k, cond) in body.split(|t| *t == "AND").enumerate() {
                        let [name, op, value] = cond else {
                            return err(n, format!("condition {} is not `name op value`", k + 1));
                        };
                        let attribute = schema
                            .iter()
                            .position(|a| a.name == *name)
                            .ok_or(FormatError { line: n, message: format!("unknown attribute `{name}`") })?;
                        let bad = || FormatError { line: n, message: format!("bad value `{value}`") };
                        let predicate = match *op {
                            "=" => Predicate::Equals(value.parse().map_err(|_| bad())?),
                            "<=" => Predicate::LessOrEqual(value.parse().map_err(|_| bad())?),
                            ">=" => Predicate::GreaterOrEqual(value.parse().map_err(|_| bad())?),
                            _ => return err(n, format!("unknown operator `{op}`")),
                        };
                        conditions.push(Condition::new(attribute, predicate));
                    }
                }
                rules.push(Rule { conditions, target: parse_class(tail, n)? });
            }
            _ => return err(n, format!("expected `IF ...` or `DEFAULT <class>`, found `{l}`")),
        }
    }
}

pub fn parse_ruleset(text: &str, schema: &[Attribute]) -> Result<RuleSet, FormatError> {
    let mut lines = Lines::new(text, 1);
    let rs = parse_ruleset_lines(&mut lines, schema)?;
    if let Some(extra) = lines.peek() {
        return err(lines.last_line(), format!("text after DEFAULT line: `{extra}`"));
    }
    Ok(rs)
}

pub fn write_pca(model: &PcaModel) -> String {
    let m = model.dimension();
    let mut out = String::new();
    writeln!(out, "dimension {m}").unwrap();
    writeln!(out, "retained {}", model.retained).unwrap();
    writeln!(out, "means {}", floats(&model.means)).unwrap();
    writeln!(out, "scales {}", floats(&model.scales)).unwrap();
    writeln!(out, "eigenvalues {}", floats(&model.eigenvalues)).unwrap();
    writeln!(out, "eigenvectors").unwrap();
    for j in 0..m {
        writeln!(out, "{}", floats(model.eigenvectors.row(j))).unwrap();
    }
    out
}

fn parse_pca_lines(lines: &mut Lines) -> Result<PcaModel, FormatError> {
    let m: usize = lines.scalar("dimension")?;
    let retained: usize = lines.scalar("retained")?;
    if retained == 0 || retained > m {
        return err(lines.last_line(), format!("retained {retained} outside 1..={m}"));
    }
    Ok(PcaModel {
        means: lines.floats("means", m)?,
        scales: lines.floats("scales", m)?,
        eigenvalues: lines.floats("eigenvalues", m)?,
        eigenvectors: lines.matrix("eigenvectors", m, m)?,
        retained,
    })
}

pub fn parse_pca(text: &str) -> Result<PcaModel, FormatError> {
    parse_pca_lines(&mut Lines::new(text, 1))
}

/// One ARD block: attribute indices, weights, alphas, relevance and the
/// Hessian-inverse diagonal.
pub fn write_ard(models: &[ArdModel]) -> String {
    let mut out = String::new();
    writeln!(out, "blocks {}", models.len()).unwrap();
    for (b, m) in models.iter().enumerate() {
        let net = &m.network;
        writeln!(out, "block {b}").unwrap();
        let attrs: Vec<String> = m.attributes.iter().map(usize::to_string).collect();
        writeln!(out, "attributes {}", attrs.join(" ")).unwrap();
        writeln!(out, "n_hidden {}", net.n_hidden()).unwrap();
        writeln!(out, "ridge_used {}", m.ridge_used).unwrap();
        writeln!(out, "alphas {}", floats(&m.hyperparams.alphas)).unwrap();
        writeln!(out, "relevance {}", floats(&m.relevance)).unwrap();
        writeln!(out, "hessian_diag_inverse {}", floats(&m.hessian_diag_inverse)).unwrap();
        writeln!(out, "w_hidden").unwrap();
        for j in 0..net.n_hidden() {
            writeln!(out, "{}", floats(net.w_hidden.row(j))).unwrap();
        }
        writeln!(out, "w_out {}", floats(&net.w_out)).unwrap();
    }
    out
}

fn parse_ard_lines(lines: &mut Lines) -> Result<Vec<ArdModel>, FormatError> {
    let n_blocks: usize = lines.scalar("blocks")?;
    let mut models = Vec::with_capacity(n_blocks);
    for b in 0..n_blocks {
        let (n, idx) = lines.field("block")?;
        if idx != b.to_string() {
            return err(n, format!("expected block {b}, found `{idx}`"));
        }
        let (n, rest) = lines.field("attributes")?;
        let attributes: Vec<usize> = parse_list(rest, n)?;
        let n_in = attributes.len();
        let n_hidden: usize = lines.scalar("n_hidden")?;
        let ridge_used: bool = lines.scalar("ridge_used")?;
        let alphas = lines.floats("alphas", n_in + 1)?;
        let relevance = lines.floats("relevance", n_in)?;
        let mut network = MlpNetwork::zeros(n_in, n_hidden);
        let hessian_diag_inverse = lines.floats("hessian_diag_inverse", network.n_params())?;
        network.w_hidden = lines.matrix("w_hidden", n_hidden, n_in + 1)?;
        network.w_out = lines.floats("w_out", n_hidden + 1)?;
        let hyperparams = ArdHyperparams { alphas, ..ArdHyperparams::per_input(&network, 1.0) };
        models.push(ArdModel { attributes, network, hyperparams, relevance, hessian_diag_inverse, ridge_used });
    }
    Ok(models)
}

pub fn parse_ard(text: &str) -> Result<Vec<ArdModel>, FormatError> {
    parse_ard_lines(&mut Lines::new(text, 1))
}

/// One line per evidence cycle.
pub fn write_ard_log(log: &[CycleLog]) -> String {
    let mut out = String::new();
    for c in log {
        let list = |v: &[f64]| v.iter().map(|&x| float(x)).collect::<Vec<_>>().join(",");
        writeln!(
            out,
            "block={} cycle={} objective={} alphas={} gammas={}",
            c.block,
            c.cycle,
            float(c.objective),
            list(&c.alphas),
            list(&c.gammas)
        )
        .unwrap();
    }
    out
}

/// A whole trained pipeline: kind, input schema, selector state and rules.
pub fn write_pipeline(p: &TrainedPipeline) -> Result<String, FormatError> {
    let mut out = String::new();
    writeln!(out, "kind {}", p.kind).unwrap();
    writeln!(out, "schema {}", p.input_schema.len()).unwrap();
    for a in &p.input_schema {
        check_name(&a.name)?;
        match a.kind {
            AttributeKind::Continuous => writeln!(out, "{} continuous", a.name).unwrap(),
            AttributeKind::Categorical => {
                let codes: Vec<String> = a.categories.iter().map(i64::to_string).collect();
                writeln!(out, "{} categorical {}", a.name, codes.join(" ")).unwrap();
            }
        }
    }
    let rule_schema: Vec<Attribute> = match &p.selector {
        Selector::None => {
            writeln!(out, "selector none").unwrap();
            p.input_schema.clone()
        }
        Selector::Attributes(keep) => {
            if let Some(&j) = keep.iter().find(|&&j| j >= p.input_schema.len()) {
                return err(0, format!("retained attribute {j} outside the schema"));
            }
            let idx: Vec<String> = keep.iter().map(usize::to_string).collect();
            writeln!(out, "selector attributes {}", idx.join(" ")).unwrap();
            keep.iter().map(|&j| p.input_schema[j].clone()).collect()
        }
        Selector::Pca(model) => {
            writeln!(out, "selector pca").unwrap();
            out.push_str(&write_pca(model));
            model.component_names().into_iter().map(Attribute::continuous).collect()
        }
    };
    writeln!(out, "rules").unwrap();
    out.push_str(&write_ruleset(&p.ruleset, &rule_schema)?);
    Ok(out)
}

pub fn parse_pipeline(text: &str) -> Result<TrainedPipeline, FormatError> {
    let mut lines = Lines::new(text, 1);
    let (n, kind) = lines.field("kind")?;
    let kind = PipelineKind::parse(kind).ok_or(FormatError { line: n, message: format!("unknown kind `{kind}`") })?;
    let m: usize = lines.scalar("schema")?;
    let mut input_schema = Vec::with_capacity(m);
    for _ in 0..m {
        let (n, l) = lines.next()?;
        input_schema.push(match l.split_whitespace().collect::<Vec<_>>().as_slice() {
            [name, "continuous"] => Attribute::continuous(*name),
            [name, "categorical", codes @ ..] => {
                Attribute { categories: parse_list(&codes.join(" "), n)?, ..Attribute::categorical(*name) }
            }
            _ => return err(n, format!("expected `name kind`, found `{l}`")),
        });
    }
    let (n, sel) = lines.field("selector")?;
    let (selector, rule_schema) = match sel.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["none"] => (Selector::None, input_schema.clone()),
        ["attributes", idx @ ..] => {
            let keep: Vec<usize> = parse_list(&idx.join(" "), n)?;
            if keep.iter().any(|&j| j >= m) {
                return err(n, "retained attribute index outside the schema");
            }
            let schema = keep.iter().map(|&j| input_schema[j].clone()).collect();
            (Selector::Attributes(keep), schema)
        }
        ["pca"] => {
            let model = parse_pca_lines(&mut lines)?;
            if model.dimension() != m {
                return err(n, "PCA dimension does not match the schema");
            }
            let schema = model.component_names().into_iter().map(Attribute::continuous).collect();
            (Selector::Pca(model), schema)
        }
        _ => return err(n, format!("unknown selector `{sel}`")),
    };
    lines.field("rules")?;
    let ruleset = parse_ruleset_lines(&mut lines, &rule_schema)?;
    let expected = match kind {
        PipelineKind::RipperOnly => matches!(selector, Selector::None),
        PipelineKind::PcaRip => matches!(selector, Selector::Pca(_)),
        PipelineKind::ArdRip => matches!(selector, Selector::Attributes(_)),
    };
    if !expected {
        return err(n, format!("selector does not fit a {kind} pipeline"));
    }
    Ok(TrainedPipeline { kind, input_schema, selector, ruleset, dropped_rows: 0, ard: None })
}
