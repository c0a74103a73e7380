use std::fs::{self, File};
use std::io::{BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::json;

use docpara_core::cleaning::LanguageProfile;
use docpara_core::corpus_tools::{
    compute_stats, length_distribution, read_records, render_histogram, render_stats_table,
    render_table, split_corpus, write_records, FunnelReport,
};
use docpara_core::evaluation::contrastive::PRONOUN_CLASSES;
use docpara_core::evaluation::{
    accuracy_by_location, contrastive_score, paired_bootstrap, read_instances, read_scores,
    segment_stats, tokenize_simple, tokenize_whitespace, Accuracy, BleuReport,
};
use docpara_core::ingest::open_input;
use docpara_core::paragraph_alignment::FunnelCounters;
use docpara_core::pipeline::{configure_workers, run_extract};
use docpara_core::PipelineConfig;

use crate::{
    BleuArgs, BootstrapArgs, Cli, Command, ContraproArgs, ExtractArgs, Format, FunnelArgs,
    LangidTrainArgs, SplitArgs, StatsArgs, Tokenize, UsageError,
};

pub fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(UsageError("--workers must be at least 1".into()).into());
        }
        configure_workers(n).map_err(UsageError)?;
    }
    let f = cli.format;
    match cli.command {
        Command::Extract(a) => extract(a, f),
        Command::Stats(a) => stats(a, f),
        Command::Funnel(a) => funnel(a, f),
        Command::Split(a) => split(a, f),
        Command::Bleu(a) => bleu(a, f),
        Command::Bootstrap(a) => bootstrap(a, f),
        Command::Contrapro(a) => contrapro(a, f),
        Command::LangidTrain(a) => langid_train(a),
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn open(path: &Path) -> Result<Box<dyn BufRead + Send>> {
    open_input(path).with_context(|| format!("cannot open {}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn load_config(path: Option<&Path>) -> Result<PipelineConfig> {
    let mut cfg = PipelineConfig::default();
    if let Some(p) = path {
        let text = fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
        cfg.apply_file(&text)
            .map_err(|e| UsageError(format!("{}: {e}", p.display())))?;
    }
    Ok(cfg)
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn extract(a: ExtractArgs, format: Format) -> Result<()> {
    let mut cfg = load_config(a.config.as_deref())?;
    let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
    let flags = [
        ("mode", a.mode.clone()),
        ("on_error", a.on_error.clone()),
        ("min_words", a.min_words.map(|v| v.to_string())),
        (
            "overlap_threshold",
            a.overlap_threshold.map(|v| v.to_string()),
        ),
        ("overlap_method", a.overlap_method.clone()),
        ("expected_src_lang", a.src_lang.clone()),
        ("expected_tgt_lang", a.tgt_lang.clone()),
        ("profiles_dir", path(&a.profiles_dir)),
        ("abbreviations_dir", path(&a.abbreviations_dir)),
    ];
    let mut sets: Vec<(String, String)> = flags
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
        .collect();
    for o in &a.overrides {
        let (k, v) = o
            .split_once('=')
            .ok_or_else(|| UsageError(format!("--set expects KEY=VALUE, got {o:?}")))?;
        sets.push((k.to_string(), v.to_string()));
    }
    for (k, v) in &sets {
        cfg.set(k, v).map_err(|e| UsageError(e.to_string()))?;
    }
    cfg.validate().map_err(|e| UsageError(e.to_string()))?;

    let out = create(&a.out)?;
    let manifest = run_extract(&cfg, &a.docs, &a.alignments, out)?;
    let manifest_path = a
        .manifest
        .unwrap_or_else(|| with_suffix(&a.out, ".manifest.json"));
    let mut mf = create(&manifest_path)?;
    serde_json::to_writer_pretty(&mut mf, &manifest)?;
    mf.write_all(b"\n")?;
    mf.flush()?;
    log::info!(
        "wrote {} records to {}",
        manifest.output.records,
        a.out.display()
    );
    print_funnel(&manifest.counters, a.detailed, format)
}

fn print_funnel(counters: &FunnelCounters, detailed: bool, format: Format) -> Result<()> {
    let report = if detailed {
        FunnelReport::detailed(counters)
    } else {
        FunnelReport::summary(counters)
    };
    match format {
        Format::Table => print!("{}", report.render()),
        Format::Json => print_json(&report)?,
    }
    Ok(())
}

fn funnel(a: FunnelArgs, format: Format) -> Result<()> {
    let text = fs::read_to_string(&a.manifest)
        .with_context(|| format!("cannot read {}", a.manifest.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let counters: FunnelCounters = serde_json::from_value(
        value
            .get("counters")
            .cloned()
            .context("manifest has no counters")?,
    )?;
    print_funnel(&counters, a.detailed, format)
}

fn stats(a: StatsArgs, format: Format) -> Result<()> {
    let mut rows = Vec::new();
    let mut all = Vec::new();
    for p in &a.inputs {
        let recs = read_records(open(p)?).with_context(|| p.display().to_string())?;
        let name = p
            .file_stem()
            .map(|s| s.to_string_lossy().trim_end_matches(".jsonl").to_string())
            .unwrap_or_default();
        rows.push((name, compute_stats(&recs)));
        all.extend(recs);
    }
    let hist = length_distribution(&all).ok();
    match format {
        Format::Table => {
            print!("{}", render_stats_table(&rows, &a.src_lang, &a.tgt_lang));
            if let Some(h) = &hist {
                println!();
                print!("{}", render_histogram(h));
            }
        }
        Format::Json => {
            let corpora: Vec<_> = rows
                .iter()
                .map(|(name, s)| json!({"name": name, "stats": s}))
                .collect();
            print_json(&json!({"corpora": corpora, "length_distribution": hist}))?;
        }
    }
    Ok(())
}

fn split(a: SplitArgs, format: Format) -> Result<()> {
    let cfg = load_config(a.config.as_deref())?;
    let dev = a.dev.unwrap_or(cfg.dev_count);
    let test = a.test.unwrap_or(cfg.test_count);
    let seed = a.seed.unwrap_or(cfg.seed);
    let recs = read_records(open(&a.input)?).with_context(|| a.input.display().to_string())?;
    let parts = split_corpus(recs, dev, test, seed)?;
    fs::create_dir_all(&a.out_dir)
        .with_context(|| format!("cannot create {}", a.out_dir.display()))?;
    let named = [
        ("train", &parts.train),
        ("dev", &parts.dev),
        ("test", &parts.test),
    ];
    for (name, recs) in named {
        write_records(
            create(&a.out_dir.join(format!("{name}.jsonl")))?,
            recs.iter(),
        )?;
    }
    match format {
        Format::Table => print!(
            "{}",
            render_table(
                Some(vec!["Split".into(), "Paragraphs".into()]),
                named
                    .iter()
                    .map(|(n, r)| vec![n.to_string(), r.len().to_string()])
                    .collect(),
            )
        ),
        Format::Json => print_json(&json!({
            "seed": seed,
            "train": parts.train.len(),
            "dev": parts.dev.len(),
            "test": parts.test.len(),
        }))?,
    }
    Ok(())
}

fn read_segments(path: &Path, tokenize: Tokenize) -> Result<Vec<Vec<String>>> {
    let tok = match tokenize {
        Tokenize::None => tokenize_whitespace,
        Tokenize::Simple => tokenize_simple,
    };
    open(path)?
        .lines()
        .map(|l| Ok(tok(&l.with_context(|| path.display().to_string())?)))
        .collect()
}

fn render_bleu(r: &BleuReport) -> String {
    let p: Vec<String> = r
        .precisions
        .iter()
        .map(|p| format!("{:.1}", 100.0 * p))
        .collect();
    format!(
        "BLEU = {:.2} {} (BP = {:.3} hyp_len = {} ref_len = {})\n",
        r.score,
        p.join("/"),
        r.brevity_penalty,
        r.hyp_len,
        r.ref_len
    )
}

fn bleu(a: BleuArgs, format: Format) -> Result<()> {
    let hyp = read_segments(&a.hyp, a.tokenize)?;
    let refs = read_segments(&a.reference, a.tokenize)?;
    let report: BleuReport = docpara_core::evaluation::bleu(&hyp, &refs)?;
    match format {
        Format::Table => print!("{}", render_bleu(&report)),
        Format::Json => print_json(&report)?,
    }
    Ok(())
}

fn bootstrap(a: BootstrapArgs, format: Format) -> Result<()> {
    let refs = read_segments(&a.reference, a.tokenize)?;
    let stats_a = segment_stats(&read_segments(&a.hyp_a, a.tokenize)?, &refs)?;
    let stats_b = segment_stats(&read_segments(&a.hyp_b, a.tokenize)?, &refs)?;
    let r = paired_bootstrap(&stats_a, &stats_b, a.resamples, a.seed)?;
    match format {
        Format::Table => print!(
            "{}",
            render_table(
                None,
                vec![
                    vec!["BLEU A".into(), format!("{:.2}", r.bleu_a)],
                    vec!["BLEU B".into(), format!("{:.2}", r.bleu_b)],
                    vec!["p-value".into(), format!("{:.4}", r.p_value)],
                    vec!["resamples".into(), r.n_resamples.to_string()],
                    vec!["seed".into(), r.seed.to_string()],
                ],
            )
        ),
        Format::Json => print_json(&r)?,
    }
    Ok(())
}

fn contrapro(a: ContraproArgs, format: Format) -> Result<()> {
    let instances = read_instances(open(&a.instances)?)?;
    let scores = read_scores(open(&a.scores)?)?;
    let report = contrastive_score(&instances, &scores)?;
    let location = accuracy_by_location(&instances, &scores)?;
    match format {
        Format::Table => {
            let classes: Vec<(&str, &Accuracy)> = PRONOUN_CLASSES
                .iter()
                .filter_map(|&c| report.by_class.get(c).map(|a| (c, a)))
                .collect();
            let mut header = vec!["Total".to_string()];
            header.extend(classes.iter().map(|(c, _)| c.to_string()));
            let mut row = vec![report.total.display()];
            row.extend(classes.iter().map(|(_, acc)| acc.display()));
            print!("{}", render_table(Some(header), vec![row]));
            println!();
            print!(
                "{}",
                render_table(
                    Some(vec!["Inside".into(), "Outside".into()]),
                    vec![vec![location.inside.display(), location.outside.display()]],
                )
            );
        }
        Format::Json => print_json(&json!({"pronoun": report, "location": location}))?,
    }
    Ok(())
}

fn langid_train(a: LangidTrainArgs) -> Result<()> {
    let sample = fs::read_to_string(&a.sample)
        .with_context(|| format!("cannot read {}", a.sample.display()))?;
    let profile = LanguageProfile::train(&a.lang, &sample)?;
    fs::write(&a.out, profile.to_tsv())
        .with_context(|| format!("cannot write {}", a.out.display()))?;
    Ok(())
}
