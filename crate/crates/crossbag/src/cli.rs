//! Command line contract and pipeline wiring.
//!
//! All options use single-dash names and may appear in any order. A run is
//! either in train mode (learn codebooks, optionally store them with -B) or
//! in apply mode (-b loads a stored codebook; learning flags are rejected,
//! and scaling plus TF weighting come from the codebook file). Exit codes:
//! 0 success, 1 usage error, 2 data/format error, 3 internal error.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::attributes::AttributeSpec;
use crate::bagging::{
    bag_windows, build_dictionary, segment_windows, tokenize, QuantizationConfig, TextConfig,
    WindowingConfig,
};
use crate::codebook::{
    build_svq, generate, generate_supervised, Codebook, GenerationMethod, NumericCodebook,
    KMEANS_DEFAULT_MAX_ITERS,
};
use crate::dataset::{Bag, Dataset, LabelTable};
use crate::error::{Error, Result};
use crate::io::csv::read_csv_auto;
use crate::io::{
    load_codebook, read_arff, read_arff_with_spec, read_labels, save_codebook, split_fields,
    write_bags, OutputFormat,
};
use crate::metrics::{ccc, unweighted_accuracy, weighted_accuracy};
use crate::postprocess::{apply_idf, apply_log_tf, fit_idf, normalize_bag, WeightingState};
use crate::preprocess::{apply_scaling, filter_activity, fit_scaling, ScalingMode};
use crate::rng::{self, RngStream};

/// Every option the run mode recognizes; the help text lists exactly these.
pub const RUN_FLAGS: &[&str] = &[
    "-i",
    "-o",
    "-l",
    "-attributes",
    "-t",
    "-standardizeInput",
    "-normalizeInput",
    "-activity",
    "-size",
    "-c",
    "-supervised",
    "-svq",
    "-seed",
    "-B",
    "-b",
    "-a",
    "-gaussian",
    "-log",
    "-idf",
    "-norm",
    "-nGram",
    "-nCharGram",
    "-minTermFreq",
    "-maxTermFreq",
    "-h",
];

pub const DEFAULT_CODEBOOK_SIZE: usize = 500;
pub const DEFAULT_GAUSSIAN_SIGMA: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ActivityFilter {
    pub feature_class: u8,
    pub dim: usize,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub output: PathBuf,
    pub labels: Option<PathBuf>,
    pub attributes: Option<AttributeSpec>,
    pub windowing: Option<WindowingConfig>,
    pub scaling: ScalingMode,
    pub activity: Option<ActivityFilter>,
    pub codebook_size: usize,
    pub method: GenerationMethod,
    pub supervised: bool,
    /// (block count, per-block codebook size); the top stage uses -size.
    pub svq: Option<(usize, usize)>,
    pub seed: u64,
    pub codebook_out: Option<PathBuf>,
    pub codebook_in: Option<PathBuf>,
    pub quantization: QuantizationConfig,
    pub text: TextConfig,
    pub log_tf: bool,
    pub idf: bool,
    pub normalize_bags: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Help,
    Run(Box<RunConfig>),
    Eval { gold: PathBuf, pred: PathBuf },
}

struct ArgCursor {
    args: Vec<String>,
    pos: usize,
}

impl ArgCursor {
    fn value(&mut self, flag: &str) -> Result<String> {
        let v = self
            .args
            .get(self.pos)
            .ok_or_else(|| Error::usage(format!("option {flag} needs a value")))?
            .clone();
        self.pos += 1;
        Ok(v)
    }

    fn parsed<T: std::str::FromStr>(&mut self, flag: &str, what: &str) -> Result<T> {
        let v = self.value(flag)?;
        v.parse()
            .map_err(|_| Error::usage(format!("option {flag}: invalid {what} \"{v}\"")))
    }

    /// Consume the next token as an f64 only when it parses as one.
    fn optional_f64(&mut self) -> Option<f64> {
        let v = self.args.get(self.pos)?.parse().ok()?;
        self.pos += 1;
        Some(v)
    }
}

/// Parse command line arguments (without the program name). Option order
/// never matters; no arguments or -h anywhere yields the help command.
pub fn parse_args(args: &[String]) -> Result<Command> {
    if args.is_empty() || args.iter().any(|a| a == "-h") {
        return Ok(Command::Help);
    }
    if args[0] == "eval" {
        if args.len() != 3 {
            return Err(Error::usage(
                "eval needs exactly two files: eval <gold-file> <prediction-file>",
            ));
        }
        return Ok(Command::Eval {
            gold: PathBuf::from(&args[1]),
            pred: PathBuf::from(&args[2]),
        });
    }

    let mut cursor = ArgCursor {
        args: args.to_vec(),
        pos: 0,
    };
    let mut seen: Vec<String> = Vec::new();

    let mut input = None;
    let mut output = None;
    let mut labels = None;
    let mut attributes = None;
    let mut windowing = None;
    let mut scaling = ScalingMode::None;
    let mut activity = None;
    let mut codebook_size = None;
    let mut method = None;
    let mut supervised = false;
    let mut svq = None;
    let mut seed = 0u64;
    let mut codebook_out = None;
    let mut codebook_in = None;
    let mut num_assignments = 1usize;
    let mut gaussian_sigma = None;
    let mut text = TextConfig::default();
    let mut log_tf = false;
    let mut idf = false;
    let mut normalize_bags = false;

    while cursor.pos < cursor.args.len() {
        let flag = cursor.args[cursor.pos].clone();
        cursor.pos += 1;
        if seen.contains(&flag) {
            return Err(Error::usage(format!("option {flag} given more than once")));
        }
        seen.push(flag.clone());
        match flag.as_str() {
            "-i" => input = Some(PathBuf::from(cursor.value(&flag)?)),
            "-o" => output = Some(PathBuf::from(cursor.value(&flag)?)),
            "-l" => labels = Some(PathBuf::from(cursor.value(&flag)?)),
            "-attributes" => {
                let spec = cursor.value(&flag)?;
                attributes =
                    Some(AttributeSpec::parse(&spec).map_err(|e| Error::usage(e.to_string()))?);
            }
            "-t" => {
                let width: f64 = cursor.parsed(&flag, "window width")?;
                let hop: f64 = cursor.parsed(&flag, "hop size")?;
                windowing = Some(
                    WindowingConfig::new(width, hop).map_err(|e| Error::usage(e.to_string()))?,
                );
            }
            "-standardizeInput" => {
                if scaling == ScalingMode::Normalize {
                    return Err(Error::usage(
                        "-standardizeInput conflicts with -normalizeInput",
                    ));
                }
                scaling = ScalingMode::Standardize;
            }
            "-normalizeInput" => {
                if scaling == ScalingMode::Standardize {
                    return Err(Error::usage(
                        "-standardizeInput conflicts with -normalizeInput",
                    ));
                }
                scaling = ScalingMode::Normalize;
            }
            "-activity" => {
                let feature_class: u8 = cursor.parsed(&flag, "feature class")?;
                let dim: usize = cursor.parsed(&flag, "dimension index")?;
                let threshold: f64 = cursor.parsed(&flag, "threshold")?;
                if !(1..=9).contains(&feature_class) {
                    return Err(Error::usage(format!(
                        "option -activity: feature class must be 1..9, got {feature_class}"
                    )));
                }
                activity = Some(ActivityFilter {
                    feature_class,
                    dim,
                    threshold,
                });
            }
            "-size" => codebook_size = Some(cursor.parsed(&flag, "codebook size")?),
            "-c" => {
                let name = cursor.value(&flag)?;
                method = Some(name.parse::<GenerationMethod>().map_err(|_| {
                    Error::usage(format!(
                        "option -c: unknown method \"{name}\" \
                         (use random, random++, kmeans, or kmeans++)"
                    ))
                })?);
            }
            "-supervised" => supervised = true,
            "-svq" => {
                let blocks: usize = cursor.parsed(&flag, "block count")?;
                let block_size: usize = cursor.parsed(&flag, "block codebook size")?;
                svq = Some((blocks, block_size));
            }
            "-seed" => seed = cursor.parsed(&flag, "seed")?,
            "-B" => codebook_out = Some(PathBuf::from(cursor.value(&flag)?)),
            "-b" => codebook_in = Some(PathBuf::from(cursor.value(&flag)?)),
            "-a" => num_assignments = cursor.parsed(&flag, "assignment count")?,
            "-gaussian" => {
                let sigma = cursor.optional_f64().unwrap_or(DEFAULT_GAUSSIAN_SIGMA);
                if !(sigma.is_finite() && sigma > 0.0) {
                    return Err(Error::usage(format!(
                        "option -gaussian: sigma must be positive, got {sigma}"
                    )));
                }
                gaussian_sigma = Some(sigma);
            }
            "-log" => log_tf = true,
            "-idf" => idf = true,
            "-norm" => normalize_bags = true,
            "-nGram" => text.n_gram = cursor.parsed(&flag, "n-gram order")?,
            "-nCharGram" => text.n_char_gram = cursor.parsed(&flag, "character gram size")?,
            "-minTermFreq" => text.min_term_freq = cursor.parsed(&flag, "term frequency")?,
            "-maxTermFreq" => text.max_term_freq = cursor.parsed(&flag, "term frequency")?,
            _ => {
                return Err(Error::usage(format!(
                    "unknown option \"{flag}\"; run with -h for the option list"
                )))
            }
        }
    }

    let input = input.ok_or_else(|| Error::usage("missing required option -i <input-file>"))?;
    let output = output.ok_or_else(|| Error::usage("missing required option -o <output-file>"))?;
    if codebook_in.is_some() {
        if codebook_out.is_some() {
            return Err(Error::usage(
                "-b (load codebook) conflicts with -B (store codebook)",
            ));
        }
        for (present, name) in [
            (codebook_size.is_some(), "-size"),
            (method.is_some(), "-c"),
            (supervised, "-supervised"),
            (svq.is_some(), "-svq"),
        ] {
            if present {
                return Err(Error::usage(format!(
                    "{name} learns a codebook and conflicts with -b (apply mode)"
                )));
            }
        }
    }
    if supervised && svq.is_some() {
        return Err(Error::usage("-supervised cannot be combined with -svq"));
    }
    if windowing.is_some() && labels.is_none() {
        return Err(Error::usage(
            "windowed bagging (-t) requires a labels file (-l)",
        ));
    }
    if num_assignments == 0 {
        return Err(Error::usage(
            "option -a: assignment count must be at least 1",
        ));
    }
    if text.n_gram == 0 {
        return Err(Error::usage("option -nGram: order must be at least 1"));
    }
    if text.min_term_freq > text.max_term_freq {
        return Err(Error::usage(format!(
            "-minTermFreq {} exceeds -maxTermFreq {}",
            text.min_term_freq, text.max_term_freq
        )));
    }

    Ok(Command::Run(Box::new(RunConfig {
        input,
        output,
        labels,
        attributes,
        windowing,
        scaling,
        activity,
        codebook_size: codebook_size.unwrap_or(DEFAULT_CODEBOOK_SIZE),
        method: method.unwrap_or(GenerationMethod::RandomPp),
        supervised,
        svq,
        seed,
        codebook_out,
        codebook_in,
        quantization: QuantizationConfig {
            num_assignments,
            gaussian_sigma,
        },
        text,
        log_tf,
        idf,
        normalize_bags,
    })))
}

pub fn help_text() -> String {
    let mut s = String::new();
    s.push_str("crossbag - crossmodal bag-of-words feature extraction\n");
    s.push('\n');
    s.push_str("Converts frame-level numeric descriptors and/or text into fixed-length\n");
    s.push_str("term-frequency histograms over learned codebooks and dictionaries.\n");
    s.push('\n');
    s.push_str("USAGE\n");
    s.push_str("  crossbag [options]\n");
    s.push_str("  crossbag eval <gold-file> <prediction-file>\n");
    s.push('\n');
    s.push_str("FILES\n");
    s.push_str("  -i <file>            input data: .csv (semicolon-separated) or .arff\n");
    s.push_str("  -o <file>            output bags; format by extension: .arff, .csv, .libsvm\n");
    s.push_str("  -l <file>            labels: name;time;label rows (or name;label without -t)\n");
    s.push_str("  -attributes <spec>   one role per input column: n name, t time, c label,\n");
    s.push_str("                       r remove, 0 text, 1-9 numeric feature class; X[m]\n");
    s.push_str("                       repeats X m times. Default: name, time, rest class 1.\n");
    s.push('\n');
    s.push_str("PREPROCESSING\n");
    s.push_str("  -t <width> <hop>     segment into windows of <width> s centered on the\n");
    s.push_str("                       hop grid k*<hop>; each center needs a labels entry\n");
    s.push_str("  -standardizeInput    scale features to mean 0, standard deviation 1\n");
    s.push_str("  -normalizeInput      scale features to min 0, max 1\n");
    s.push_str("  -activity <class> <dim> <threshold>\n");
    s.push_str("                       drop frames whose raw value at (class, dim) is\n");
    s.push_str("                       below <threshold>, before scaling is fitted\n");
    s.push('\n');
    s.push_str("CODEBOOK (train mode)\n");
    s.push_str(&format!(
        "  -size <n>            codebook words per feature class (default {DEFAULT_CODEBOOK_SIZE});\n"
    ));
    s.push_str("                       with -supervised: words per label class; with -svq:\n");
    s.push_str("                       size of the top-stage codebook\n");
    s.push_str("  -c <method>          random | random++ | kmeans | kmeans++ (default random++)\n");
    s.push_str("  -supervised          learn one codebook per label value and concatenate\n");
    s.push_str("  -svq <B> <s>         split vector quantization: B blocks, s words each\n");
    s.push_str("  -seed <n>            random seed (default 0)\n");
    s.push_str("  -B <file>            store the learned codebook (with scaling and\n");
    s.push_str("                       TF-weighting settings) after the run\n");
    s.push_str("  -b <file>            apply a stored codebook; scaling and TF weighting\n");
    s.push_str("                       come from the file; -a, -gaussian, -nGram,\n");
    s.push_str("                       -nCharGram, -t, -norm must be restated\n");
    s.push('\n');
    s.push_str("BAGGING\n");
    s.push_str("  -a <n>               assign each frame to its n closest words (default 1)\n");
    s.push_str("  -gaussian [sigma]    weight assignments by exp(-d^2/(2 sigma^2))\n");
    s.push_str(&format!(
        "                       (default sigma {DEFAULT_GAUSSIAN_SIGMA})\n"
    ));
    s.push_str("  -nGram <n>           emit word m-grams for m = 1..n (default 1)\n");
    s.push_str("  -nCharGram <n>       also emit character n-grams within tokens (off by default)\n");
    s.push_str("  -minTermFreq <n>     drop dictionary terms rarer than n (default 1)\n");
    s.push_str("  -maxTermFreq <n>     drop dictionary terms more frequent than n\n");
    s.push('\n');
    s.push_str("POSTPROCESSING\n");
    s.push_str("  -log                 logarithmic TF weighting: log10(TF + 1)\n");
    s.push_str("  -idf                 inverse document frequency weighting: TF * log10(N/DF)\n");
    s.push_str("  -norm                normalize each sub-bag to unit L1 mass\n");
    s.push('\n');
    s.push_str("OTHER\n");
    s.push_str("  -h                   print this help and exit\n");
    s.push('\n');
    s.push_str("eval prints n, ccc (when both files are numeric), wa, and ua computed\n");
    s.push_str("from the last semicolon-separated field of each line in the two files.\n");
    s
}

/// Train mode: learn scaling, codebooks, and the text dictionary.
fn train_bundle(cfg: &RunConfig, ds: &Dataset) -> Result<(Dataset, Codebook)> {
    let scaling = fit_scaling(ds, cfg.scaling).map_err(|e| e.in_stage("scaling"))?;
    let ds = apply_scaling(ds, &scaling).map_err(|e| e.in_stage("scaling"))?;

    let streams = RngStream::new(cfg.seed);
    let mut numeric: BTreeMap<u8, NumericCodebook> = BTreeMap::new();
    for &class in ds.dims().keys() {
        let cb = if let Some((blocks, block_size)) = cfg.svq {
            let vectors = ds.class_vectors(class);
            NumericCodebook::Svq(
                build_svq(
                    class,
                    &vectors,
                    blocks,
                    block_size,
                    cfg.codebook_size,
                    cfg.method,
                    KMEANS_DEFAULT_MAX_ITERS,
                    &streams,
                )
                .map_err(|e| e.in_stage("codebook"))?,
            )
        } else if cfg.supervised {
            NumericCodebook::Flat(
                generate_supervised(
                    &ds,
                    class,
                    cfg.codebook_size,
                    cfg.method,
                    KMEANS_DEFAULT_MAX_ITERS,
                    &streams,
                )
                .map_err(|e| e.in_stage("codebook"))?,
            )
        } else {
            let vectors = ds.class_vectors(class);
            let mut class_rng = streams.stream(rng::class_stream(class));
            NumericCodebook::Flat(
                generate(
                    class,
                    &vectors,
                    cfg.codebook_size,
                    cfg.method,
                    KMEANS_DEFAULT_MAX_ITERS,
                    &mut class_rng,
                )
                .map_err(|e| e.in_stage("codebook"))?,
            )
        };
        numeric.insert(class, cb);
    }

    let dictionary = if ds.has_text() {
        let corpus: Vec<Vec<String>> = ds
            .frames()
            .iter()
            .map(|f| tokenize(f.text.as_deref().unwrap_or(""), &cfg.text))
            .collect();
        Some(build_dictionary(&corpus, &cfg.text).map_err(|e| e.in_stage("dictionary"))?)
    } else {
        None
    };

    Ok((
        ds,
        Codebook {
            scaling,
            numeric,
            dictionary,
            weighting: WeightingState {
                log_flag: cfg.log_tf,
                idf_flag: cfg.idf,
                df: Vec::new(),
                n: 0,
            },
            text_settings: cfg.text.clone(),
        },
    ))
}

/// Apply mode: load the stored bundle and check it against the input layout.
fn load_bundle(cfg: &RunConfig, ds: &Dataset) -> Result<(Dataset, Codebook)> {
    let path = cfg.codebook_in.as_ref().expect("apply mode");
    let bundle = load_codebook(path).map_err(|e| e.in_stage("codebook"))?;

    for (&class, cb) in &bundle.numeric {
        match ds.dims().get(&class) {
            None => {
                return Err(Error::data(format!(
                    "codebook: trained with feature class {class} but the input \
                     does not declare it"
                )))
            }
            Some(&dims) if dims != cb.input_dim() => {
                return Err(Error::data(format!(
                    "codebook: feature class {class} was trained on {} dims but \
                     the input has {dims}",
                    cb.input_dim()
                )))
            }
            _ => {}
        }
    }
    for &class in ds.dims().keys() {
        if !bundle.numeric.contains_key(&class) {
            return Err(Error::data(format!(
                "codebook: input declares feature class {class} but the codebook \
                 does not cover it"
            )));
        }
    }
    if ds.has_text() && bundle.dictionary.is_none() {
        return Err(Error::data(
            "codebook: input has a text column but the codebook contains no dictionary",
        ));
    }
    if !ds.has_text() && bundle.dictionary.is_some() {
        return Err(Error::data(
            "codebook: the codebook contains a dictionary but the input has no text column",
        ));
    }

    if cfg.log_tf || cfg.idf || cfg.scaling != ScalingMode::None {
        eprintln!(
            "note: -log/-idf/-standardizeInput/-normalizeInput are taken from \
             the codebook file in apply mode"
        );
    }
    let ds = apply_scaling(ds, &bundle.scaling).map_err(|e| e.in_stage("scaling"))?;
    Ok((ds, bundle))
}

fn read_input(cfg: &RunConfig) -> Result<Dataset> {
    let is_arff = cfg
        .input
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("arff"));
    if is_arff {
        match &cfg.attributes {
            Some(spec) => read_arff_with_spec(&cfg.input, spec),
            None => Ok(read_arff(&cfg.input)?.0),
        }
    } else {
        read_csv_auto(&cfg.input, cfg.attributes.as_ref())
    }
}

/// Execute one full run: read, preprocess, learn or load, bag, weight,
/// normalize, write, and store the codebook when requested. The output file
/// is only created after every stage has succeeded.
pub fn run_pipeline(cfg: &RunConfig) -> Result<()> {
    let format = OutputFormat::from_path(&cfg.output)?;
    let ds = read_input(cfg).map_err(|e| e.in_stage("input"))?;

    let labels = match &cfg.labels {
        Some(path) => read_labels(path).map_err(|e| e.in_stage("labels"))?,
        None => LabelTable::new(),
    };

    let ds = match &cfg.activity {
        Some(f) => filter_activity(&ds, f.feature_class, f.dim, f.threshold)
            .map_err(|e| e.in_stage("activity"))?,
        None => ds,
    };

    let (ds, mut bundle) = if cfg.codebook_in.is_some() {
        load_bundle(cfg, &ds)?
    } else {
        train_bundle(cfg, &ds)?
    };

    let windows = segment_windows(&ds, cfg.windowing.as_ref(), &labels)
        .map_err(|e| e.in_stage("windowing"))?;

    let mut bags = bag_windows(
        &ds,
        &windows,
        &bundle.numeric,
        &cfg.quantization,
        bundle.dictionary.as_ref(),
        &cfg.text,
    )
    .map_err(|e| e.in_stage("bagging"))?;

    apply_weighting(cfg, &mut bundle, &mut bags).map_err(|e| e.in_stage("weighting"))?;

    if cfg.normalize_bags {
        let layout = bundle.layout();
        for bag in &mut bags {
            normalize_bag(&mut bag.tf, &layout).map_err(|e| e.in_stage("normalization"))?;
        }
    }

    write_bags(&bags, format, &cfg.output).map_err(|e| e.in_stage("output"))?;

    if cfg.codebook_in.is_none() {
        if let Some(path) = &cfg.codebook_out {
            save_codebook(&bundle, path).map_err(|e| e.in_stage("codebook"))?;
        }
    }
    Ok(())
}

fn apply_weighting(cfg: &RunConfig, bundle: &mut Codebook, bags: &mut [Bag]) -> Result<()> {
    if cfg.codebook_in.is_none() {
        // Train mode: flags come from the command line; IDF statistics are
        // fitted on the training bags and stored in the bundle.
        if cfg.log_tf {
            for bag in bags.iter_mut() {
                apply_log_tf(&mut bag.tf)?;
            }
        }
        if cfg.idf {
            let fitted = fit_idf(bags)?;
            bundle.weighting.df = fitted.df;
            bundle.weighting.n = fitted.n;
            for bag in bags.iter_mut() {
                apply_idf(&mut bag.tf, &bundle.weighting)?;
            }
        }
    } else {
        // Apply mode: the codebook file dictates the weighting.
        if bundle.weighting.log_flag {
            for bag in bags.iter_mut() {
                apply_log_tf(&mut bag.tf)?;
            }
        }
        if bundle.weighting.idf_flag {
            for bag in bags.iter_mut() {
                apply_idf(&mut bag.tf, &bundle.weighting)?;
            }
        }
    }
    Ok(())
}

/// Read the last semicolon-separated field of every non-empty line.
fn read_eval_column(path: &Path) -> Result<Vec<String>> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut values = Vec::new();
    for raw in content.lines() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.is_empty() {
            continue;
        }
        let fields = split_fields(line, ';')?;
        values.push(fields.last().unwrap().trim().to_string());
    }
    Ok(values)
}

/// Compare two prediction files and print n, ccc (for numeric series), wa,
/// and ua.
pub fn run_eval(gold_path: &Path, pred_path: &Path, out: &mut impl std::io::Write) -> Result<()> {
    let gold = read_eval_column(gold_path)?;
    let pred = read_eval_column(pred_path)?;
    if gold.len() != pred.len() {
        return Err(Error::data(format!(
            "eval: {} has {} values but {} has {}",
            gold_path.display(),
            gold.len(),
            pred_path.display(),
            pred.len()
        )));
    }
    let write_err = |e: std::io::Error| Error::io(Path::new("<stdout>"), e);
    writeln!(out, "n {}", gold.len()).map_err(write_err)?;
    let gold_nums: Option<Vec<f64>> = gold.iter().map(|s| s.parse().ok()).collect();
    let pred_nums: Option<Vec<f64>> = pred.iter().map(|s| s.parse().ok()).collect();
    if let (Some(g), Some(p)) = (gold_nums, pred_nums) {
        writeln!(out, "ccc {}", ccc(&g, &p)?).map_err(write_err)?;
    }
    writeln!(out, "wa {}", weighted_accuracy(&gold, &pred)?).map_err(write_err)?;
    writeln!(out, "ua {}", unweighted_accuracy(&gold, &pred)?).map_err(write_err)?;
    Ok(())
}

/// Entry point used by the binary: parse, run, report, and map errors to
/// exit codes.
pub fn main_with_args(args: Vec<String>) -> i32 {
    match parse_args(&args) {
        Ok(Command::Help) => {
            print!("{}", help_text());
            0
        }
        Ok(Command::Run(cfg)) => match run_pipeline(&cfg) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Ok(Command::Eval { gold, pred }) => {
            let mut stdout = std::io::stdout();
            match run_eval(&gold, &pred, &mut stdout) {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("run with -h for the option list");
            e.exit_code()
        }
    }
}
