mod cli;
mod render;

use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::Parser;
use serde::Serialize;
use thiserror::Error;

use spanforge::catalog::{self, GroupSpec, GraphSpec, PosetSpec};
use spanforge::interchange::{self, CategoryFile, FunctorFile};
use spanforge::{
    build_span_category, canonicalize, check_category_laws, classic_equivalence,
    find_f_pullbacks, find_pullbacks, has_pullbacks, is_pullback, is_span_tight,
    preserves_pullbacks, Budget, CheckReport, Cospan, FiniteCategory, Functor, LawConfig,
    LawMode, PairRecord, Span, SpanCategory,
};

use cli::{Cli, Command, ComposeArgs, GenCommand, LawArgs, Mode, PullbackArgs};

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] spanforge::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_budget() => 3,
            CliError::Core(spanforge::Error::NotSpanTight(_))
            | CliError::Core(spanforge::Error::NoFPullback { .. }) => 1,
            _ => 2,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// What a command prints, and whether its answer was affirmative.
struct Outcome {
    verdict: bool,
    human: String,
    json: String,
}

impl Outcome {
    fn report(r: &CheckReport) -> Outcome {
        Outcome {
            verdict: r.verdict,
            human: render::report(r),
            json: interchange::to_json(r),
        }
    }

    fn data<T: Serialize>(verdict: bool, human: String, value: &T) -> Outcome {
        Outcome {
            verdict,
            human,
            json: interchange::to_json(value),
        }
    }
}

fn pair(literal: &str) -> CliResult<(&str, &str)> {
    literal
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("expected LEFT,RIGHT but got `{literal}`")))
}

fn span_arg(cat: &FiniteCategory, literal: &str) -> CliResult<Span> {
    let (l, r) = pair(literal)?;
    Ok(Span::by_names(cat, l, r)?)
}

fn cospan_arg(cat: &FiniteCategory, literal: &str) -> CliResult<Cospan> {
    let (l, r) = pair(literal)?;
    Ok(Cospan::by_names(cat, l, r)?)
}

fn load_category(path: &Path) -> CliResult<Arc<FiniteCategory>> {
    Ok(Arc::new(interchange::load_category(path)?))
}

fn load_functor(path: &Path) -> CliResult<Functor> {
    Ok(interchange::load_functor(path)?)
}

fn is_functor_file(path: &Path) -> CliResult<bool> {
    let text = std::fs::read_to_string(path).map_err(|source| spanforge::Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| spanforge::Error::Parse {
        path: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok(value.get("object_map").is_some())
}

fn read_spec<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|source| spanforge::Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Core(spanforge::Error::Parse {
            path: path.display().to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    })
}

fn validate(path: &Path) -> CliResult<Outcome> {
    #[derive(Serialize)]
    struct Valid<'a> {
        valid: bool,
        kind: &'a str,
        name: &'a str,
        objects: usize,
        morphisms: usize,
    }
    if is_functor_file(path)? {
        let f = load_functor(path)?;
        let human = format!(
            "functor {}: valid ({} -> {})\n",
            f.name(),
            f.source().name(),
            f.target().name()
        );
        let v = Valid {
            valid: true,
            kind: "functor",
            name: f.name(),
            objects: f.source().object_count(),
            morphisms: f.source().morphism_count(),
        };
        return Ok(Outcome::data(true, human, &v));
    }
    let cat = load_category(path)?;
    let human = format!(
        "category {}: valid ({} objects, {} morphisms)\n",
        cat.name(),
        cat.object_count(),
        cat.morphism_count()
    );
    let v = Valid {
        valid: true,
        kind: "category",
        name: cat.name(),
        objects: cat.object_count(),
        morphisms: cat.morphism_count(),
    };
    Ok(Outcome::data(true, human, &v))
}

fn span_category(f: Functor, force: bool, budget: &Budget) -> CliResult<SpanCategory> {
    if force {
        Ok(SpanCategory::build_unchecked(f, budget)?)
    } else {
        Ok(build_span_category(f, budget)?)
    }
}

fn compose(args: &ComposeArgs, budget: &Budget) -> CliResult<Outcome> {
    if let (Some(first), Some(then)) = (&args.first, &args.then) {
        #[derive(Serialize)]
        struct Composite<'a> {
            first: &'a str,
            then: &'a str,
            equals: &'a str,
        }
        let cat = load_category(&args.file)?;
        let h = cat.compose(cat.resolve_morphism(first)?, cat.resolve_morphism(then)?)?;
        let equals = cat.mor_name(h);
        let human = format!("{then} ∘ {first} = {equals}\n");
        return Ok(Outcome::data(true, human, &Composite { first, then, equals }));
    }
    let (Some(s1), Some(s2)) = (&args.span1, &args.span2) else {
        return Err(CliError::Usage(
            "compose needs --first/--then or --span1/--span2".into(),
        ));
    };
    #[derive(Serialize)]
    struct SpanComposite {
        outer: PairRecord,
        inner: PairRecord,
        f_pullback: PairRecord,
        composite: PairRecord,
        class: PairRecord,
    }
    let sc = span_category(load_functor(&args.file)?, args.force, budget)?;
    let cat = sc.base();
    let (s, q) = (span_arg(cat, s1)?, span_arg(cat, s2)?);
    let composite = sc.compose_spans(s, q)?;
    let p = sc.f_pullbacks(Cospan {
        left: s.right,
        right: q.left,
    })?[0];
    let class = canonicalize(cat, composite);
    let out = SpanComposite {
        outer: PairRecord::span(cat, s),
        inner: PairRecord::span(cat, q),
        f_pullback: PairRecord::span(cat, p),
        composite: PairRecord::span(cat, composite),
        class: PairRecord::span(cat, class),
    };
    let human = format!(
        "[S]∘[Q] along P\n  {}\n  {}\n  {}\n  composite {}\n  canonical {}\n",
        render::span('S', &out.outer),
        render::span('Q', &out.inner),
        render::span('P', &out.f_pullback),
        render::span('R', &out.composite),
        render::span('R', &out.class),
    );
    Ok(Outcome::data(true, human, &out))
}

fn hom(path: &Path, from: &str, to: &str) -> CliResult<Outcome> {
    #[derive(Serialize)]
    struct Hom<'a> {
        from: &'a str,
        to: &'a str,
        morphisms: Vec<&'a str>,
    }
    let cat = load_category(path)?;
    let (a, b) = (cat.resolve_object(from)?, cat.resolve_object(to)?);
    let morphisms: Vec<&str> = cat.hom(a, b).iter().map(|&m| cat.mor_name(m)).collect();
    let mut human = format!("hom({from}, {to}): {} morphism(s)\n", morphisms.len());
    for m in &morphisms {
        human.push_str(&format!("  {m}\n"));
    }
    let out = Outcome::data(true, human, &Hom { from, to, morphisms });
    Ok(out)
}

fn invert(path: &Path, name: &str) -> CliResult<Outcome> {
    #[derive(Serialize)]
    struct Inverse<'a> {
        morphism: &'a str,
        inverse: Option<&'a str>,
    }
    let cat = load_category(path)?;
    let f = cat.resolve_morphism(name)?;
    let inverse = cat.inverse(f).map(|g| cat.mor_name(g));
    let human = match inverse {
        Some(g) => format!("{name}^-1 = {g}\n"),
        None => format!("{name} is not an isomorphism\n"),
    };
    Ok(Outcome::data(
        inverse.is_some(),
        human,
        &Inverse {
            morphism: name,
            inverse,
        },
    ))
}

#[derive(Serialize)]
struct SpanList {
    subject: String,
    cospan: PairRecord,
    spans: Vec<PairRecord>,
}

fn span_list(title: &str, cat: &FiniteCategory, subject: &str, c: Cospan, spans: &[Span]) -> Outcome {
    let list = SpanList {
        subject: subject.to_owned(),
        cospan: PairRecord::cospan(cat, c),
        spans: spans.iter().map(|&s| PairRecord::span(cat, s)).collect(),
    };
    let mut human = format!("{title} of\n  {}\n", render::cospan(&list.cospan));
    if list.spans.is_empty() {
        human.push_str("  none\n");
    }
    for s in &list.spans {
        human.push_str(&format!("  {}\n", render::span('S', s)));
    }
    Outcome::data(!spans.is_empty(), human, &list)
}

fn pullback(args: &PullbackArgs, budget: &Budget) -> CliResult<Outcome> {
    let cat = load_category(&args.category)?;
    let c = cospan_arg(&cat, &args.cospan)?;
    if let Some(s) = &args.span {
        let s = span_arg(&cat, s)?;
        return Ok(Outcome::report(&is_pullback(&cat, s, c, budget)?));
    }
    let pbs = find_pullbacks(&cat, c, budget)?;
    if args.canonical {
        let canon: Vec<Span> = pbs.first().map(|&p| canonicalize(&cat, p)).into_iter().collect();
        return Ok(span_list("canonical pullback", &cat, cat.name(), c, &canon));
    }
    Ok(span_list("pullbacks", &cat, cat.name(), c, &pbs))
}

fn check_laws(args: &LawArgs, budget: &Budget) -> CliResult<Outcome> {
    let sc = span_category(load_functor(&args.functor)?, args.force, budget)?;
    let config = LawConfig {
        mode: match args.mode {
            Mode::Exhaustive => LawMode::Exhaustive,
            Mode::Sampled => LawMode::Sampled,
        },
        samples: args.samples,
        seed: args.seed,
        triple_threshold: args.triple_threshold,
    };
    Ok(Outcome::report(&check_category_laws(&sc, &config, budget)?))
}

fn write_generated(output: Option<&Path>, text: String) -> CliResult<Outcome> {
    match output {
        Some(path) => {
            std::fs::write(path, &text).map_err(|source| CliError::Write {
                path: path.display().to_string(),
                source,
            })?;
            let human = format!("wrote {}\n", path.display());
            Ok(Outcome {
                verdict: true,
                json: interchange::to_json(&serde_json::json!({ "wrote": path.display().to_string() })),
                human,
            })
        }
        None => Ok(Outcome {
            verdict: true,
            human: text.clone(),
            json: text,
        }),
    }
}

fn functor_json(f: &Functor, source: &Path, target: &Path) -> String {
    interchange::to_json(&FunctorFile::from_functor(
        f,
        &source.display().to_string(),
        &target.display().to_string(),
    ))
}

fn generate(what: &GenCommand, output: Option<&Path>) -> CliResult<Outcome> {
    let category = |cat: FiniteCategory| interchange::to_json(&CategoryFile::from_category(&cat));
    let text = match what {
        GenCommand::Finset { max_size } => category(catalog::gen_finset(*max_size)?),
        GenCommand::Finsurj { sizes } => category(catalog::gen_finsurj(sizes)?),
        GenCommand::Fintop { max_points } => category(catalog::gen_fintop(*max_points)?),
        GenCommand::Poset { relation } => {
            category(catalog::gen_poset(&read_spec::<PosetSpec>(relation)?)?)
        }
        GenCommand::Group { table } => {
            category(catalog::gen_group(&read_spec::<GroupSpec>(table)?)?)
        }
        GenCommand::Free {
            graph,
            max_path_len,
        } => category(catalog::gen_free(&read_spec::<GraphSpec>(graph)?, *max_path_len)?),
        GenCommand::Hom { base, cat, target } => {
            let c = load_category(cat)?;
            let b = c.resolve_object(base)?;
            let f = catalog::gen_hom_functor(c, b, load_category(target)?)?;
            functor_json(&f, cat, target)
        }
        GenCommand::Inclusion { name, sub, sup } => {
            let name = name
                .clone()
                .unwrap_or_else(|| format!("{}->{}", file_stem(sub), file_stem(sup)));
            let f = catalog::gen_inclusion_by_name(name, load_category(sub)?, load_category(sup)?)?;
            functor_json(&f, sub, sup)
        }
        GenCommand::Forgetful { top, set } => {
            let f = catalog::gen_forgetful(load_category(top)?, load_category(set)?)?;
            functor_json(&f, top, set)
        }
    };
    write_generated(output, text)
}

fn file_stem(p: &Path) -> String {
    p.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn run(cli: &Cli, budget: &Budget) -> CliResult<Outcome> {
    match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Compose(args) => compose(args, budget),
        Command::Hom { category, from, to } => hom(category, from, to),
        Command::Invert { category, morphism } => invert(category, morphism),
        Command::Pullback(args) => pullback(args, budget),
        Command::HasPullbacks { category } => {
            let cat = load_category(category)?;
            Ok(Outcome::report(&has_pullbacks(&cat, budget)?))
        }
        Command::Preserves { functor } => {
            Ok(Outcome::report(&preserves_pullbacks(&load_functor(functor)?, budget)?))
        }
        Command::Fpullback { functor, cospan } => {
            let f = load_functor(functor)?;
            let c = cospan_arg(f.source(), cospan)?;
            let found = find_f_pullbacks(&f, c, budget)?;
            Ok(span_list("F-pullbacks", f.source(), f.name(), c, &found))
        }
        Command::SpanTight { functor } => {
            Ok(Outcome::report(&is_span_tight(&load_functor(functor)?, budget)?))
        }
        Command::CheckLaws(args) => check_laws(args, budget),
        Command::ClassicEquiv { category } => {
            Ok(Outcome::report(&classic_equivalence(load_category(category)?, budget)?))
        }
        Command::Gen { what, output } => generate(what, output.as_deref()),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Compose(_) => "compose",
        Command::Hom { .. } => "hom",
        Command::Invert { .. } => "invert",
        Command::Pullback(_) => "pullback",
        Command::HasPullbacks { .. } => "has-pullbacks",
        Command::Preserves { .. } => "preserves",
        Command::Fpullback { .. } => "fpullback",
        Command::SpanTight { .. } => "span-tight",
        Command::CheckLaws(_) => "check-laws",
        Command::ClassicEquiv { .. } => "classic-equiv",
        Command::Gen { .. } => "gen",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = match cli.budget {
        Some(n) => Ok(Budget::with_candidates(n)),
        None => Budget::from_env(),
    };
    let result = budget
        .map_err(CliError::from)
        .and_then(|budget| run(&cli, &budget));
    match result {
        Ok(outcome) => {
            print!("{}", if cli.json { &outcome.json } else { &outcome.human });
            ExitCode::from(if outcome.verdict { 0 } else { 1 })
        }
        Err(err) => {
            let code = err.exit_code();
            match (&err, cli.json) {
                (CliError::Core(spanforge::Error::NotSpanTight(r)), json) => {
                    let r = r.as_ref();
                    print!("{}", if json { interchange::to_json(r) } else { render::report(r) });
                }
                (CliError::Core(spanforge::Error::Invalid(r)), true) => {
                    print!("{}", interchange::to_json(&serde_json::json!({ "valid": false, "report": r })));
                }
                (CliError::Core(e), true) if e.is_budget() => {
                    let r = CheckReport::budget_exceeded(
                        command_name(&cli.command),
                        "",
                        e.to_string(),
                    );
                    print!("{}", interchange::to_json(&r));
                }
                _ => {}
            }
            eprintln!("spanforge: {err}");
            ExitCode::from(code)
        }
    }
}
