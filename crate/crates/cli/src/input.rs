//! Metric definition files: a line-oriented sectioned format with `[chart]`,
//! `[metric]`, `[zoo]`, `[zoo.block]`, and `[options]` sections. A file
//! carries exactly one metric source: an explicit lower-triangular component
//! table or a named zoo family with inline parameters.

use std::fmt;

use ricci::geometry::GeomError;
use ricci::zoo::{self, ZooBlock, ZooError};
use ricci::{Chart, Expression, MetricField, Rat};

#[derive(Debug)]
pub struct InputError {
    pub line: Option<usize>,
    pub message: String,
}

impl InputError {
    fn at(line: usize, message: impl Into<String>) -> InputError {
        InputError {
            line: Some(line),
            message: message.into(),
        }
    }

    fn whole(message: impl Into<String>) -> InputError {
        InputError {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for InputError {}

impl From<ZooError> for InputError {
    fn from(e: ZooError) -> Self {
        InputError::whole(e.to_string())
    }
}

impl From<GeomError> for InputError {
    fn from(e: GeomError) -> Self {
        InputError::whole(e.to_string())
    }
}

/// Options resolved from the `[options]` section; command-line flags
/// override these, and these override the built-in defaults.
#[derive(Clone, Debug, Default)]
pub struct FileOptions {
    pub kmax: Option<u32>,
    pub probe: Option<Vec<Rat>>,
    pub seed: Option<u64>,
    pub samples: Option<u32>,
}

/// A parsed and constructed metric plus its file-level options. `probe` on
/// the options is the evaluation point for pointwise work (Segre types,
/// dominance sampling); explicit metrics also use it as the signature-check
/// point at construction.
pub struct LoadedMetric {
    pub metric: MetricField,
    pub options: FileOptions,
    /// Origin-avoiding evaluation point used when no probe is given.
    pub default_probe: Vec<Rat>,
}

// ---------------------------------------------------------------------------
// Raw line model.

#[derive(Clone, Copy)]
enum Section {
    None,
    Chart,
    Metric,
    Zoo,
    ZooBlock,
    Options,
}

#[derive(Default)]
struct RawZoo {
    line: usize,
    family: Option<(usize, String)>,
    n: Option<(usize, usize)>,
    k: Option<(usize, Rat)>,
    h: Option<(usize, String)>,
    w: Vec<(usize, usize, String)>,
    gt: Vec<(usize, usize, usize, String)>,
    a: Vec<(usize, usize, usize, String)>,
    extra: Option<(usize, Vec<String>)>,
}

#[derive(Default)]
struct RawBlock {
    line: usize,
    family: Option<(usize, String)>,
    coords: Option<(usize, Vec<String>)>,
    lorentzian: Option<(usize, bool)>,
    k: Option<(usize, Rat)>,
    a: Vec<(usize, usize, usize, String)>,
}

#[derive(Default)]
struct RawFile {
    chart: Option<(usize, Vec<String>)>,
    metric: Vec<(usize, usize, usize, String)>,
    zoo: Option<RawZoo>,
    blocks: Vec<RawBlock>,
    options: FileOptions,
}

/// Strip a `#` comment, ignoring `#` inside a double-quoted value.
fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

fn split_names(value: &str) -> Vec<String> {
    value
        .split([',', ' ', '\t'])
        .filter(|s| !s.is_empty())
        .map(|s| s.to_string())
        .collect()
}

/// `g[0][1]` -> ("g", [0, 1]). None when the key has no index part.
fn parse_indexed(key: &str) -> Option<(&str, Vec<usize>)> {
    let open = key.find('[')?;
    let name = &key[..open];
    let mut idx = Vec::new();
    let mut rest = &key[open..];
    while !rest.is_empty() {
        if !rest.starts_with('[') {
            return None;
        }
        let close = rest.find(']')?;
        idx.push(rest[1..close].parse().ok()?);
        rest = &rest[close + 1..];
    }
    Some((name, idx))
}

fn unquote(line: usize, value: &str) -> Result<String, InputError> {
    let v = value.trim();
    if v.len() >= 2 && v.starts_with('"') && v.ends_with('"') {
        Ok(v[1..v.len() - 1].to_string())
    } else {
        Err(InputError::at(
            line,
            format!("expected a double-quoted expression, got `{v}`"),
        ))
    }
}

fn parse_rat(line: usize, value: &str) -> Result<Rat, InputError> {
    value
        .trim()
        .parse::<Rat>()
        .map_err(|e| InputError::at(line, format!("bad rational `{}`: {e}", value.trim())))
}

fn parse_num<T: std::str::FromStr>(line: usize, value: &str, what: &str) -> Result<T, InputError> {
    value
        .trim()
        .parse::<T>()
        .map_err(|_| InputError::at(line, format!("bad {what} `{}`", value.trim())))
}

fn two_indices(line: usize, name: &str, idx: &[usize]) -> Result<(usize, usize), InputError> {
    if idx.len() == 2 {
        Ok((idx[0], idx[1]))
    } else {
        Err(InputError::at(line, format!("{name} needs two indices")))
    }
}

fn parse_raw(text: &str) -> Result<RawFile, InputError> {
    let mut raw = RawFile::default();
    let mut section = Section::None;
    for (num, line) in text.lines().enumerate() {
        let num = num + 1;
        let line = strip_comment(line).trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            if !line.ends_with(']') {
                return Err(InputError::at(num, "unterminated section header"));
            }
            section = match &line[1..line.len() - 1] {
                "chart" => Section::Chart,
                "metric" => Section::Metric,
                "options" => Section::Options,
                "zoo" => {
                    if raw.zoo.is_some() {
                        return Err(InputError::at(num, "duplicate [zoo] section"));
                    }
                    raw.zoo = Some(RawZoo {
                        line: num,
                        ..RawZoo::default()
                    });
                    Section::Zoo
                }
                "zoo.block" => {
                    raw.blocks.push(RawBlock {
                        line: num,
                        ..RawBlock::default()
                    });
                    Section::ZooBlock
                }
                other => {
                    return Err(InputError::at(num, format!("unknown section [{other}]")));
                }
            };
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(InputError::at(num, "expected `key = value`"));
        };
        let key = line[..eq].trim();
        let value = line[eq + 1..].trim();
        match section {
            Section::None => {
                return Err(InputError::at(num, "entry before any section header"));
            }
            Section::Chart => match key {
                "coords" => raw.chart = Some((num, split_names(value))),
                _ => return Err(InputError::at(num, format!("unknown chart key `{key}`"))),
            },
            Section::Metric => match parse_indexed(key) {
                Some(("g", idx)) => {
                    let (i, j) = two_indices(num, "g", &idx)?;
                    raw.metric.push((num, i, j, unquote(num, value)?));
                }
                _ => return Err(InputError::at(num, format!("unknown metric key `{key}`"))),
            },
            Section::Zoo => {
                let z = raw.zoo.as_mut().expect("zoo section open");
                match parse_indexed(key) {
                    Some(("a", idx)) => {
                        let (i, j) = two_indices(num, "a", &idx)?;
                        z.a.push((num, i, j, unquote(num, value)?));
                        continue;
                    }
                    Some(("w", idx)) if idx.len() == 1 => {
                        z.w.push((num, idx[0], unquote(num, value)?));
                        continue;
                    }
                    Some(("gt", idx)) => {
                        let (i, j) = two_indices(num, "gt", &idx)?;
                        z.gt.push((num, i, j, unquote(num, value)?));
                        continue;
                    }
                    Some(_) => {
                        return Err(InputError::at(num, format!("unknown zoo key `{key}`")));
                    }
                    None => {}
                }
                match key {
                    "family" => z.family = Some((num, value.to_string())),
                    "n" => z.n = Some((num, parse_num(num, value, "dimension")?)),
                    "k" => z.k = Some((num, parse_rat(num, value)?)),
                    "h" => z.h = Some((num, unquote(num, value)?)),
                    "extra" => z.extra = Some((num, split_names(value))),
                    _ => return Err(InputError::at(num, format!("unknown zoo key `{key}`"))),
                }
            }
            Section::ZooBlock => {
                let b = raw.blocks.last_mut().expect("block section open");
                if let Some(("a", idx)) = parse_indexed(key) {
                    let (i, j) = two_indices(num, "a", &idx)?;
                    b.a.push((num, i, j, unquote(num, value)?));
                    continue;
                }
                match key {
                    "family" => b.family = Some((num, value.to_string())),
                    "coords" => b.coords = Some((num, split_names(value))),
                    "signature" => {
                        let l = match value {
                            "lorentzian" => true,
                            "riemannian" => false,
                            other => {
                                return Err(InputError::at(
                                    num,
                                    format!("signature must be lorentzian or riemannian, got `{other}`"),
                                ));
                            }
                        };
                        b.lorentzian = Some((num, l));
                    }
                    "k" => b.k = Some((num, parse_rat(num, value)?)),
                    _ => return Err(InputError::at(num, format!("unknown block key `{key}`"))),
                }
            }
            Section::Options => match key {
                "kmax" => raw.options.kmax = Some(parse_num(num, value, "kmax")?),
                "seed" => raw.options.seed = Some(parse_num(num, value, "seed")?),
                "samples" => raw.options.samples = Some(parse_num(num, value, "sample count")?),
                "probe" => {
                    let mut pt = Vec::new();
                    for part in value.split(',') {
                        pt.push(parse_rat(num, part)?);
                    }
                    raw.options.probe = Some(pt);
                }
                _ => return Err(InputError::at(num, format!("unknown option `{key}`"))),
            },
        }
    }
    Ok(raw)
}

// ---------------------------------------------------------------------------
// Construction.

/// Fill an n-by-n symmetric expression matrix from sparse `(line, i, j,
/// src)` entries. Missing cells fall back to `base`; giving both halves of a
/// mirror pair is allowed only when they agree.
fn fill_symmetric(
    n: usize,
    entries: &[(usize, usize, usize, String)],
    chart: &Chart,
    base: impl Fn(usize, usize) -> Expression,
    what: &str,
) -> Result<Vec<Vec<Expression>>, InputError> {
    let mut given: Vec<Vec<Option<(usize, Expression)>>> = vec![vec![None; n]; n];
    for (line, i, j, src) in entries {
        if *i >= n || *j >= n {
            return Err(InputError::at(
                *line,
                format!("{what}[{i}][{j}] is out of range for size {n}"),
            ));
        }
        let e = chart
            .parse(src)
            .map_err(|e| InputError::at(*line, format!("{what}[{i}][{j}]: {e}")))?;
        if given[*i][*j].is_some() {
            return Err(InputError::at(*line, format!("duplicate {what}[{i}][{j}]")));
        }
        given[*i][*j] = Some((*line, e));
    }
    let mut rows = vec![vec![chart.zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            rows[i][j] = match (&given[i][j], &given[j][i]) {
                (Some((line, a)), Some((_, b))) if i != j => {
                    if a != b {
                        return Err(InputError::at(
                            *line,
                            format!("{what}[{i}][{j}] and {what}[{j}][{i}] differ"),
                        ));
                    }
                    a.clone()
                }
                (Some((_, a)), _) => a.clone(),
                (None, Some((_, b))) => b.clone(),
                (None, None) => base(i, j),
            };
        }
    }
    Ok(rows)
}

fn origin_probe(n: usize) -> Vec<Rat> {
    vec![Rat::from(0.into()); n]
}

/// Origin-avoiding evaluation preset: coordinate i probes at 1/(i+2).
fn preset_probe(n: usize) -> Vec<Rat> {
    (0..n).map(|i| Rat::new(1.into(), (i as i64 + 2).into())).collect()
}

fn build_block(b: &RawBlock) -> Result<ZooBlock, InputError> {
    let (fline, family) = b
        .family
        .as_ref()
        .ok_or_else(|| InputError::at(b.line, "block needs a family"))?;
    let (_, names) = b
        .coords
        .as_ref()
        .ok_or_else(|| InputError::at(b.line, "block needs coords"))?;
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    match family.as_str() {
        "flat" => {
            let (_, lorentzian) = b
                .lorentzian
                .ok_or_else(|| InputError::at(b.line, "flat block needs a signature"))?;
            Ok(zoo::block_flat(&refs, lorentzian)?)
        }
        "constant_curvature" => {
            let (_, lorentzian) = b
                .lorentzian
                .ok_or_else(|| InputError::at(b.line, "constant_curvature block needs a signature"))?;
            let (_, k) = b
                .k
                .as_ref()
                .ok_or_else(|| InputError::at(b.line, "constant_curvature block needs k"))?;
            Ok(zoo::block_constant_curvature(&refs, k, lorentzian)?)
        }
        "plane_wave" => {
            let chart = Chart::new(&refs)?;
            let n = chart.dim();
            if n < 3 {
                return Err(InputError::at(b.line, "plane_wave block needs at least 3 coords"));
            }
            let a = fill_symmetric(n - 2, &b.a, &chart, |_, _| chart.zero(), "a")?;
            Ok(zoo::block_plane_wave(&chart, &a)?)
        }
        other => Err(InputError::at(*fline, format!("unknown block family `{other}`"))),
    }
}

fn build_zoo(z: &RawZoo, blocks: &[RawBlock]) -> Result<zoo::ZooMetric, InputError> {
    let (fline, family) = z
        .family
        .as_ref()
        .ok_or_else(|| InputError::at(z.line, "zoo section needs a family"))?;
    let dim = |what: &str| {
        z.n.map(|(_, n)| n)
            .ok_or_else(|| InputError::at(z.line, format!("{what} needs n")))
    };
    let no_blocks = |what: &str| {
        if blocks.is_empty() {
            Ok(())
        } else {
            Err(InputError::at(
                blocks[0].line,
                format!("{what} takes no [zoo.block] sections"),
            ))
        }
    };
    match family.as_str() {
        "flat" => {
            no_blocks("flat")?;
            Ok(zoo::flat(dim("flat")?)?)
        }
        "constant_curvature" => {
            no_blocks("constant_curvature")?;
            let (_, k) = z
                .k
                .as_ref()
                .ok_or_else(|| InputError::at(z.line, "constant_curvature needs k"))?;
            Ok(zoo::constant_curvature(dim("constant_curvature")?, k)?)
        }
        "brinkmann" => {
            no_blocks("brinkmann")?;
            let n = dim("brinkmann")?;
            let chart = zoo::brinkmann_chart(n)?;
            let m = n.saturating_sub(2);
            let h = match &z.h {
                Some((line, src)) => chart
                    .parse(src)
                    .map_err(|e| InputError::at(*line, format!("h: {e}")))?,
                None => chart.zero(),
            };
            let mut w = vec![chart.zero(); m];
            for (line, i, src) in &z.w {
                if *i >= m {
                    return Err(InputError::at(*line, format!("w[{i}] is out of range")));
                }
                w[*i] = chart
                    .parse(src)
                    .map_err(|e| InputError::at(*line, format!("w[{i}]: {e}")))?;
            }
            let gt = fill_symmetric(
                m,
                &z.gt,
                &chart,
                |i, j| if i == j { chart.one() } else { chart.zero() },
                "gt",
            )?;
            Ok(zoo::brinkmann(&chart, &h, &w, &gt)?)
        }
        "plane_wave" => {
            no_blocks("plane_wave")?;
            let n = dim("plane_wave")?;
            let chart = zoo::brinkmann_chart(n)?;
            let a = fill_symmetric(n.saturating_sub(2), &z.a, &chart, |_, _| chart.zero(), "a")?;
            Ok(zoo::plane_wave(&chart, &a)?)
        }
        "product" => {
            if blocks.is_empty() {
                return Err(InputError::at(z.line, "product needs [zoo.block] sections"));
            }
            let built: Vec<ZooBlock> =
                blocks.iter().map(build_block).collect::<Result<_, _>>()?;
            Ok(zoo::product(built)?)
        }
        "flat_extension" => {
            if blocks.len() != 1 {
                return Err(InputError::at(
                    z.line,
                    "flat_extension needs exactly one [zoo.block] section",
                ));
            }
            let (_, extra) = z
                .extra
                .as_ref()
                .ok_or_else(|| InputError::at(z.line, "flat_extension needs extra coords"))?;
            let refs: Vec<&str> = extra.iter().map(String::as_str).collect();
            Ok(zoo::flat_extension(build_block(&blocks[0])?, &refs)?)
        }
        other => Err(InputError::at(*fline, format!("unknown zoo family `{other}`"))),
    }
}

pub fn load(text: &str) -> Result<LoadedMetric, InputError> {
    let raw = parse_raw(text)?;
    match (&raw.zoo, raw.metric.is_empty()) {
        (Some(_), false) => {
            return Err(InputError::whole(
                "a file carries either a [metric] table or a [zoo] family, not both",
            ));
        }
        (None, true) => {
            return Err(InputError::whole(
                "no metric source: add a [metric] table or a [zoo] family",
            ));
        }
        _ => {}
    }

    let (metric, default_probe) = if let Some(z) = &raw.zoo {
        let built = build_zoo(z, &raw.blocks)?;
        if let Some((line, names)) = &raw.chart {
            let chart = built.metric.chart();
            let actual: Vec<&str> = (0..chart.dim()).map(|i| chart.coord_name(i)).collect();
            if names.iter().map(String::as_str).ne(actual.iter().copied()) {
                return Err(InputError::at(
                    *line,
                    format!(
                        "chart section does not match the family's chart ({})",
                        actual.join(", ")
                    ),
                ));
            }
        }
        let n = built.metric.dim();
        (built.metric, preset_probe(n))
    } else {
        if !raw.blocks.is_empty() {
            return Err(InputError::at(
                raw.blocks[0].line,
                "[zoo.block] without a [zoo] section",
            ));
        }
        let (line, names) = raw
            .chart
            .as_ref()
            .ok_or_else(|| InputError::whole("an explicit metric needs a [chart] section"))?;
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let chart = Chart::new(&refs).map_err(|e| InputError::at(*line, e.to_string()))?;
        let n = chart.dim();
        let rows = fill_symmetric(n, &raw.metric, &chart, |_, _| chart.zero(), "g")?;
        let probe = match &raw.options.probe {
            Some(p) => p.clone(),
            None => origin_probe(n),
        };
        if probe.len() != n {
            return Err(InputError::whole(format!(
                "probe has {} components for a {n}-dimensional chart",
                probe.len()
            )));
        }
        let metric = MetricField::new(&chart, &rows, &probe)?;
        let default = probe.clone();
        (metric, default)
    };

    if let Some(p) = &raw.options.probe {
        if p.len() != metric.dim() {
            return Err(InputError::whole(format!(
                "probe has {} components for a {}-dimensional chart",
                p.len(),
                metric.dim()
            )));
        }
    }

    Ok(LoadedMetric {
        metric,
        options: raw.options,
        default_probe,
    })
}

/// Emit a metric as an explicit component table that `load` accepts.
/// Re-ingesting the result reconstructs the same chart, components, and
/// signature probe.
pub fn emit_explicit(metric: &MetricField) -> String {
    let chart = metric.chart();
    let n = metric.dim();
    let names: Vec<&str> = (0..n).map(|i| chart.coord_name(i)).collect();
    let mut out = String::new();
    out.push_str("[chart]\n");
    out.push_str(&format!("coords = {}\n\n", names.join(", ")));
    out.push_str("[metric]\n");
    for i in 0..n {
        for j in 0..=i {
            let e = metric.component(i, j);
            if !e.is_zero() {
                out.push_str(&format!("g[{i}][{j}] = \"{e}\"\n"));
            }
        }
    }
    out.push_str("\n[options]\n");
    let probe: Vec<String> = metric.probe().iter().map(|r| r.to_string()).collect();
    out.push_str(&format!("probe = {}\n", probe.join(", ")));
    out
}
