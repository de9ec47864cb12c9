//! Single-pass line sampling over files or standard input.
//!
//! Lines are the sampling unit and are treated as raw bytes terminated by
//! LF (a final unterminated line is accepted); selected lines are written
//! back byte-identical, LF-terminated. UTF-8 validity is only required of
//! the weight column.
//!
//! Totals declared up front (`--total` / `--total-weight`) dispatch to a
//! sequential method and lines are emitted online in stream order;
//! otherwise a reservoir method runs and the sample is emitted after the
//! input ends, in unspecified order unless `--stable` keeps input order.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::PathBuf;

use crate::error::SampleError;
use crate::method::{Method, ReservoirMethod, SequentialMethod};
use crate::reservoir::ReservoirSampler;
use crate::rng::StreamRng;
use crate::sequential::{SequentialSampler, WeightedSequentialSampler};

/// Parsed sampling configuration, independent of the argument parser.
#[derive(Debug, Clone)]
pub struct CliConfig {
    /// Input paths; empty (or "-") means standard input.
    pub inputs: Vec<PathBuf>,
    pub k: usize,
    /// Explicit method override; defaults follow the mode.
    pub method: Option<Method>,
    pub replace: bool,
    /// 1-based column holding the weight; enables weighted sampling.
    pub weight_field: Option<usize>,
    pub delimiter: u8,
    /// Declared element count (sequential dispatch).
    pub total: Option<u64>,
    /// Declared total weight (sequential dispatch, weighted).
    pub total_weight: Option<f64>,
    pub seed: u64,
    /// Pass the first line through untouched and exclude it from
    /// sampling (first line of every input; only the first is emitted).
    pub header: bool,
    /// Emit reservoir samples in input order.
    pub stable: bool,
}

/// CLI failure modes, each with its documented exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit 1.
    Io(String),
    /// Exit 2: a weight column failed to parse as a positive real.
    Weight { location: String, message: String },
    /// Exit 2: inconsistent flags.
    Usage(String),
    /// Exit 3: the stream ended short of the declared total.
    Truncated(String),
    /// Exit 4: weighted sequential sampling without replacement.
    Impossible,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Weight { .. } | CliError::Usage(_) => 2,
            CliError::Truncated(_) => 3,
            CliError::Impossible => 4,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Io(m) => m.clone(),
            CliError::Weight { location, message } => format!("{location}: {message}"),
            CliError::Usage(m) => m.clone(),
            CliError::Truncated(m) => m.clone(),
            CliError::Impossible => SampleError::WeightedSequentialWithoutReplacement.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Plan {
    Reservoir(ReservoirMethod),
    SequentialCount(SequentialMethod),
    SequentialWeight,
}

fn default_method(weighted: bool, replace: bool, sequential: bool) -> Method {
    if sequential {
        Method::Sequential(match (weighted, replace) {
            (false, false) => SequentialMethod::AlgD,
            (false, true) => SequentialMethod::AlgOrdSwr,
            (true, true) => SequentialMethod::AlgOrdWswr,
            (true, false) => unreachable!("rejected before dispatch"),
        })
    } else {
        Method::Reservoir(match (weighted, replace) {
            (false, false) => ReservoirMethod::AlgL,
            (false, true) => ReservoirMethod::AlgRswrSkip,
            (true, false) => ReservoirMethod::AlgAExpJ,
            (true, true) => ReservoirMethod::AlgWrswrSkip,
        })
    }
}

fn plan(config: &CliConfig) -> Result<Plan, CliError> {
    let weighted = config.weight_field.is_some();
    let sequential = config.total.is_some() || config.total_weight.is_some();

    if weighted && sequential && !config.replace {
        return Err(CliError::Impossible);
    }
    if config.total_weight.is_some() && !weighted {
        return Err(CliError::Usage(
            "--total-weight requires --weight-field".into(),
        ));
    }
    if config.total.is_some() && weighted && config.replace {
        return Err(CliError::Usage(
            "weighted sequential sampling needs --total-weight, not --total".into(),
        ));
    }

    let method = config
        .method
        .unwrap_or_else(|| default_method(weighted, config.replace, sequential));
    if method.weighted() != weighted {
        return Err(CliError::Usage(format!(
            "method {} is {}weighted but --weight-field is {}set",
            method.name(),
            if method.weighted() { "" } else { "un" },
            if weighted { "" } else { "not " },
        )));
    }
    if method.with_replacement() != config.replace {
        return Err(CliError::Usage(format!(
            "method {} samples {} replacement; --replace disagrees",
            method.name(),
            if method.with_replacement() {
                "with"
            } else {
                "without"
            },
        )));
    }
    match (method, sequential) {
        (Method::Reservoir(m), false) => Ok(Plan::Reservoir(m)),
        (Method::Sequential(SequentialMethod::AlgOrdWswr), true) => Ok(Plan::SequentialWeight),
        (Method::Sequential(m), true) => Ok(Plan::SequentialCount(m)),
        (Method::Reservoir(m), true) => Err(CliError::Usage(format!(
            "{} is a reservoir method; drop --total/--total-weight",
            m.name()
        ))),
        (Method::Sequential(m), false) => Err(CliError::Usage(format!(
            "{} needs a declared --total{}",
            m.name(),
            if m.weighted() { "-weight" } else { "" }
        ))),
    }
}

/// Byte-line reader over the concatenated inputs with header handling
/// and per-file line accounting for diagnostics.
struct LineReader {
    inputs: Vec<PathBuf>,
    next_input: usize,
    current: Option<BufReader<Box<dyn Read>>>,
    label: String,
    line_no: u64,
    header: bool,
    first_file: bool,
}

impl LineReader {
    fn new(inputs: &[PathBuf], header: bool) -> Self {
        Self {
            inputs: inputs.to_vec(),
            next_input: 0,
            current: None,
            label: String::new(),
            line_no: 0,
            header,
            first_file: true,
        }
    }

    fn location(&self) -> String {
        format!("{}:{}", self.label, self.line_no)
    }

    fn open_next(&mut self) -> Result<bool, CliError> {
        if self.inputs.is_empty() {
            if self.next_input > 0 {
                return Ok(false);
            }
            self.next_input = 1;
            self.label = "<stdin>".into();
            self.current = Some(BufReader::new(Box::new(std::io::stdin()) as Box<dyn Read>));
        } else {
            let Some(path) = self.inputs.get(self.next_input) else {
                return Ok(false);
            };
            self.next_input += 1;
            if path.as_os_str() == "-" {
                self.label = "<stdin>".into();
                self.current = Some(BufReader::new(Box::new(std::io::stdin()) as Box<dyn Read>));
            } else {
                let file = File::open(path)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                self.label = path.display().to_string();
                self.current = Some(BufReader::new(Box::new(file) as Box<dyn Read>));
            }
        }
        self.line_no = 0;
        Ok(true)
    }

    /// Next data line (headers resolved); `Ok(None)` at end of all inputs.
    /// A header line of the first file is returned via `pending_header`
    /// by `run` before sampling starts.
    fn next_line(&mut self) -> Result<Option<Vec<u8>>, CliError> {
        loop {
            if self.current.is_none() && !self.open_next()? {
                return Ok(None);
            }
            let reader = self.current.as_mut().expect("opened above");
            let mut line = Vec::new();
            let n = reader
                .read_until(b'\n', &mut line)
                .map_err(|e| CliError::Io(format!("{}: {e}", self.label)))?;
            if n == 0 {
                self.current = None;
                self.first_file = false;
                continue;
            }
            self.line_no += 1;
            if line.last() == Some(&b'\n') {
                line.pop();
            }
            if self.header && self.line_no == 1 {
                // Subsequent files drop their header; the first file's is
                // emitted by `run` before sampling.
                if self.first_file {
                    self.first_file = false;
                    return Ok(Some(line));
                }
                continue;
            }
            return Ok(Some(line));
        }
    }
}

fn parse_weight(
    line: &[u8],
    field: usize,
    delimiter: u8,
    location: String,
) -> Result<f64, CliError> {
    let bytes = line
        .split(|&b| b == delimiter)
        .nth(field - 1)
        .ok_or_else(|| CliError::Weight {
            location: location.clone(),
            message: format!("line has no field {field}"),
        })?;
    let text = std::str::from_utf8(bytes).map_err(|_| CliError::Weight {
        location: location.clone(),
        message: format!("weight field {field} is not valid UTF-8"),
    })?;
    let weight: f64 = text.trim().parse().map_err(|_| CliError::Weight {
        location: location.clone(),
        message: format!("cannot parse weight field {field} from `{text}`"),
    })?;
    if !(weight.is_finite() && weight > 0.0) {
        return Err(CliError::Weight {
            location,
            message: format!("weight must be positive and finite (got {weight})"),
        });
    }
    Ok(weight)
}

/// Run one sampling invocation, writing selected lines to `out`.
pub fn run(config: &CliConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let plan = plan(config)?;
    let mut reader = LineReader::new(&config.inputs, config.header);
    let io_err = |e: std::io::Error| CliError::Io(format!("write: {e}"));

    if config.header {
        if let Some(header_line) = reader.next_line()? {
            out.write_all(&header_line).map_err(io_err)?;
            out.write_all(b"\n").map_err(io_err)?;
        }
    }

    let rng = StreamRng::new(config.seed);
    match plan {
        Plan::Reservoir(method) => run_reservoir(config, method, reader, rng, out),
        Plan::SequentialCount(method) => run_sequential_count(config, method, reader, rng, out),
        Plan::SequentialWeight => run_sequential_weight(config, reader, rng, out),
    }?;
    out.flush().map_err(io_err)
}

fn map_setup_error(e: SampleError) -> CliError {
    match e {
        SampleError::WeightedSequentialWithoutReplacement => CliError::Impossible,
        other => CliError::Usage(other.to_string()),
    }
}

fn emit(out: &mut dyn Write, line: &[u8], times: u64) -> Result<(), CliError> {
    for _ in 0..times {
        out.write_all(line)
            .and_then(|_| out.write_all(b"\n"))
            .map_err(|e| CliError::Io(format!("write: {e}")))?;
    }
    Ok(())
}

fn run_reservoir(
    config: &CliConfig,
    method: ReservoirMethod,
    mut reader: LineReader,
    rng: StreamRng,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    // The stable flag tags each line with its input index, costing one
    // u64 per slot, and restores input order at the end.
    let mut sampler: ReservoirSampler<(u64, Vec<u8>)> =
        ReservoirSampler::new(method, config.k, rng).map_err(map_setup_error)?;
    let mut index = 0u64;
    while let Some(line) = reader.next_line()? {
        let result = match config.weight_field {
            Some(field) => {
                let w = parse_weight(&line, field, config.delimiter, reader.location())?;
                sampler.fit_weighted((index, line), w)
            }
            None => sampler.fit((index, line)),
        };
        result.map_err(|e| CliError::Usage(e.to_string()))?;
        index += 1;
    }
    let mut items = sampler.value().items;
    if config.stable {
        items.sort_by_key(|(i, _)| *i);
    }
    for (_, line) in &items {
        emit(out, line, 1)?;
    }
    Ok(())
}

/// Stream adapter feeding the sequential samplers; I/O and parse errors
/// terminate the stream and park the error for the caller, who reports
/// it in preference to the truncation the sampler will then see.
struct LineIter<'a> {
    reader: &'a mut LineReader,
    error: &'a std::cell::RefCell<Option<CliError>>,
}

impl Iterator for LineIter<'_> {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        match self.reader.next_line() {
            Ok(item) => item,
            Err(e) => {
                *self.error.borrow_mut() = Some(e);
                None
            }
        }
    }
}

fn run_sequential_count(
    config: &CliConfig,
    method: SequentialMethod,
    mut reader: LineReader,
    rng: StreamRng,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let total = config.total.expect("plan guarantees --total");
    let parked = std::cell::RefCell::new(None);
    let lines = LineIter {
        reader: &mut reader,
        error: &parked,
    };
    let sampler = SequentialSampler::new(method, config.k as u64, total, lines, rng)
        .map_err(map_setup_error)?;
    for emission in sampler {
        match emission {
            Ok(e) => emit(out, &e.item, e.multiplicity)?,
            Err(trunc) => {
                let parked = parked.borrow_mut().take();
                return Err(parked.unwrap_or(CliError::Truncated(trunc.to_string())));
            }
        }
    }
    match parked.into_inner() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

struct WeightedLineIter<'a> {
    reader: &'a mut LineReader,
    field: usize,
    delimiter: u8,
    error: &'a std::cell::RefCell<Option<CliError>>,
}

impl Iterator for WeightedLineIter<'_> {
    type Item = (Vec<u8>, f64);

    fn next(&mut self) -> Option<(Vec<u8>, f64)> {
        let line = match self.reader.next_line() {
            Ok(Some(line)) => line,
            Ok(None) => return None,
            Err(e) => {
                *self.error.borrow_mut() = Some(e);
                return None;
            }
        };
        match parse_weight(&line, self.field, self.delimiter, self.reader.location()) {
            Ok(w) => Some((line, w)),
            Err(e) => {
                *self.error.borrow_mut() = Some(e);
                None
            }
        }
    }
}

fn run_sequential_weight(
    config: &CliConfig,
    mut reader: LineReader,
    rng: StreamRng,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let total = config.total_weight.expect("plan guarantees --total-weight");
    let field = config.weight_field.expect("plan guarantees --weight-field");
    let parked = std::cell::RefCell::new(None);
    let pairs = WeightedLineIter {
        reader: &mut reader,
        field,
        delimiter: config.delimiter,
        error: &parked,
    };
    let sampler = WeightedSequentialSampler::new(config.k as u64, total, pairs, rng)
        .map_err(map_setup_error)?;
    for emission in sampler {
        match emission {
            Ok(e) => emit(out, &e.item, e.multiplicity)?,
            Err(trunc) => {
                let parked = parked.borrow_mut().take();
                return Err(parked.unwrap_or(CliError::Truncated(trunc.to_string())));
            }
        }
    }
    match parked.into_inner() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
