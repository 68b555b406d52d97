use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "spanforge", version, about = "Pullbacks, span tightness and generalized span categories on finite categories")]
pub struct Cli {
    /// Emit the machine-readable report instead of the human summary.
    #[arg(long, global = true)]
    pub json: bool,

    /// Cap on candidate spans per query (overrides SPANFORGE_BUDGET).
    #[arg(long, global = true, value_name = "N")]
    pub budget: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a category or functor file.
    Validate { file: PathBuf },

    /// Compose two morphisms of a category, or two spans along an F-pullback.
    Compose(ComposeArgs),

    /// List hom(A, B).
    Hom {
        category: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },

    /// Inverse of a morphism, if it is an isomorphism.
    Invert {
        category: PathBuf,
        #[arg(long)]
        morphism: String,
    },

    /// Pullbacks of a cospan, or whether a given span is one.
    Pullback(PullbackArgs),

    /// Does every cospan have a pullback, unique up to span isomorphism?
    HasPullbacks { category: PathBuf },

    /// Does the functor send pullbacks to pullbacks?
    Preserves { functor: PathBuf },

    /// F-pullbacks of a cospan in the functor's source.
    Fpullback {
        functor: PathBuf,
        #[arg(long, value_name = "L,R")]
        cospan: String,
    },

    /// Decide span tightness of a functor.
    SpanTight { functor: PathBuf },

    /// Verify the category laws of Span(C, F).
    CheckLaws(LawArgs),

    /// Compare Span(C, Id) with the classical span category.
    ClassicEquiv { category: PathBuf },

    /// Generate a catalog category or functor.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
        /// Write to this file instead of standard output.
        #[arg(short = 'o', long, global = true)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    /// A category file (with --first/--then) or a functor file (with --span1/--span2).
    pub file: PathBuf,
    #[arg(long, requires = "then", conflicts_with_all = ["span1", "span2"])]
    pub first: Option<String>,
    #[arg(long, requires = "first")]
    pub then: Option<String>,
    /// Outer span S in [S]∘[Q].
    #[arg(long, value_name = "L,R", requires = "span2")]
    pub span1: Option<String>,
    /// Inner span Q in [S]∘[Q].
    #[arg(long, value_name = "L,R", requires = "span1")]
    pub span2: Option<String>,
    /// Compose even if the functor is not span tight.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct PullbackArgs {
    pub category: PathBuf,
    #[arg(long, value_name = "L,R")]
    pub cospan: String,
    /// List every pullback (the default).
    #[arg(long, conflicts_with_all = ["canonical", "span"])]
    pub all: bool,
    /// Only the canonical representative of the pullback class.
    #[arg(long, conflicts_with = "span")]
    pub canonical: bool,
    /// Check whether this span is a pullback of the cospan.
    #[arg(long, value_name = "L,R")]
    pub span: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Args)]
pub struct LawArgs {
    pub functor: PathBuf,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: Mode,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Required in sampled mode.
    #[arg(long, required_if_eq("mode", "sampled"))]
    pub seed: Option<u64>,
    /// Triples above which associativity is sampled even in exhaustive mode.
    #[arg(long, default_value_t = 50_000)]
    pub triple_threshold: usize,
    /// Check a functor that is not span tight anyway, reporting where composition breaks.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// All functions between S0..S{max}.
    Finset {
        #[arg(long)]
        max_size: usize,
    },
    /// Surjections between the listed sizes.
    Finsurj {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
    },
    /// All topologies on up to N points and continuous maps.
    Fintop {
        #[arg(long)]
        max_points: usize,
    },
    /// Poset from a JSON file {"name", "elements", "relation": [[x, y], ...]}.
    Poset {
        #[arg(long)]
        relation: PathBuf,
    },
    /// Group from a JSON file {"name", "elements", "table"}.
    Group {
        #[arg(long)]
        table: PathBuf,
    },
    /// Free category on an acyclic graph {"name", "vertices", "edges": [{"id", "src", "tgt"}]}.
    Free {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_path_len: usize,
    },
    /// Hom(B, -) from a category into a finset category.
    Hom {
        #[arg(long)]
        base: String,
        #[arg(long)]
        cat: PathBuf,
        #[arg(long)]
        target: PathBuf,
    },
    /// Inclusion matching objects and morphisms by name.
    Inclusion {
        /// Functor name (defaults to `<sub>-><super>` from the file names).
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        sub: PathBuf,
        #[arg(long = "super")]
        sup: PathBuf,
    },
    /// Forgetful functor from a fintop category to a finset category.
    Forgetful {
        #[arg(long)]
        top: PathBuf,
        #[arg(long)]
        set: PathBuf,
    },
}
