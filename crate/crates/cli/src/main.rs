use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thuemorse::algebra::{Algebra, Element, Mode, Ring, ZeroVerdict};
use thuemorse::characters::{self, ExactQ, Kernel, Witness};
use thuemorse::dynamics::{self, RationalMap, RenderConfig};
use thuemorse::group::{self, Order, Verdict, WreathRecursion};
use thuemorse::verify::{self, Check, Outcome};
use thuemorse::words::{self, Alphabet, GroupWord};
use thuemorse::Error;

#[derive(Parser)]
#[command(
    name = "thuemorse",
    version,
    about = "Thue-Morse self-similar groups, algebras and characters"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Alphabet size.
    #[arg(long, global = true, default_value_t = 2)]
    q: usize,
    /// Coefficient ring: Q, Z or Fp:<p>.
    #[arg(long, global = true, default_value = "Q")]
    ring: String,
    /// A: free algebra on positive letters; B: group ring.
    #[arg(long, global = true, default_value = "B")]
    mode: String,
    /// Class cap for character closures.
    #[arg(long, global = true, default_value_t = characters::DEFAULT_CLASS_CAP)]
    cap_classes: usize,
    /// State cap for the word problem.
    #[arg(long, global = true, default_value_t = group::DEFAULT_STATE_CAP)]
    cap_states: usize,
    /// Depth for portraits, profiles and zero tests.
    #[arg(long, global = true, default_value_t = 8)]
    depth: usize,
    /// Emit JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Thue-Morse words and substitutions.
    #[command(subcommand)]
    Word(WordCmd),
    /// The self-similar group.
    #[command(subcommand)]
    Group(GroupCmd),
    /// The algebra and its matrix recursion.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Self-similar characters.
    #[command(subcommand)]
    Char(CharCmd),
    /// Julia set rendering.
    #[command(subcommand)]
    Julia(JuliaCmd),
    /// Replay the regression suites.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum WordCmd {
    /// First n letters of the infinite Thue-Morse word.
    Prefix { n: usize },
    /// Apply the substitution to a word.
    Subst {
        word: String,
        #[arg(long, default_value_t = 1)]
        times: usize,
    },
    /// Shift every letter index.
    Gamma {
        word: String,
        #[arg(long, default_value_t = 1)]
        shift: i64,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Sections and first-level permutation.
    Decompose { word: String },
    /// Image of a vertex, given as digits ("010") or a list ("0,1,0").
    Act { word: String, vertex: String },
    /// Section at a vertex.
    Section { word: String, vertex: String },
    /// Decide whether a word is trivial.
    Trivial { word: String },
    /// Decide whether two words are equal.
    Equal { left: String, right: String },
    /// Order of an element.
    Order {
        word: String,
        #[arg(long, default_value_t = 64)]
        max: u64,
    },
    /// Nucleus of the group.
    Nucleus {
        #[arg(long, default_value_t = 1000)]
        cap: usize,
    },
    /// Nontrivial sections per level up to --depth.
    Bounded { word: String },
    /// Permutation portrait up to --depth.
    Portrait { word: String },
    /// A shortest vertex moved by the word.
    Moved { word: String },
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// The q x q decomposition of an element.
    Phi {
        #[arg(allow_hyphen_values = true)]
        element: String,
    },
    /// Zero test in the quotient, up to --depth levels.
    Zero {
        #[arg(allow_hyphen_values = true)]
        element: String,
    },
    /// The involution (mode B).
    Star {
        #[arg(allow_hyphen_values = true)]
        element: String,
    },
    /// theta(s0) + x1 theta(s1) + ... + x1^{q-1} theta(s{q-1}).
    Sigma { elements: Vec<String> },
    /// Level n of the family generated by sigma from the base elements.
    Omega {
        n: usize,
        #[arg(long, default_value_t = 2)]
        kmax: u32,
        #[arg(long, default_value_t = 100)]
        size_cap: usize,
    },
    /// Levels until every entry is linear, up to --depth.
    Cdepth {
        #[arg(allow_hyphen_values = true)]
        element: String,
    },
    /// Largest row and column support per level up to --depth.
    Rcbound {
        #[arg(allow_hyphen_values = true)]
        element: String,
    },
}

#[derive(Subcommand)]
enum CharCmd {
    /// The spread character.
    Spread {
        #[arg(allow_hyphen_values = true)]
        element: String,
        /// Expand two levels before solving.
        #[arg(long)]
        expanded: bool,
    },
    /// Character with a given kernel on the algebra.
    Kernel {
        #[arg(allow_hyphen_values = true)]
        element: String,
        /// "identity", "ones" or rows like "1,0;0,1".
        #[arg(long, default_value = "identity")]
        kernel: String,
    },
    /// Character with a given kernel on the group.
    Group {
        word: String,
        #[arg(long, default_value = "identity")]
        kernel: String,
    },
    /// Entries of phi^k that are multiples of 1, x0 or x1.
    Count {
        #[arg(allow_hyphen_values = true)]
        element: String,
        k: usize,
    },
    /// q^k chi_s - count across a range of k.
    Growth {
        #[arg(allow_hyphen_values = true)]
        element: String,
        k_min: usize,
        k_max: usize,
    },
    /// Additivity of the spread character under sigma.
    Additivity { elements: Vec<String> },
    /// Search for an element with a given spread value.
    Witness {
        target: String,
        #[arg(long, default_value_t = 400)]
        budget: usize,
    },
}

#[derive(Subcommand)]
enum JuliaCmd {
    /// Render a point cloud to a binary graymap.
    Render {
        /// z2, f2, f3, f4 or f5.
        #[arg(long, default_value = "f2")]
        preset: String,
        #[arg(long, default_value = "julia.pgm")]
        out: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        points: usize,
        /// "center_re,center_im,width".
        #[arg(long, default_value = "1,0,4")]
        viewport: String,
        /// "WIDTHxHEIGHT" in pixels.
        #[arg(long, default_value = "400x400")]
        size: String,
        #[arg(long, default_value_t = 200)]
        burn_in: usize,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Every acceptance criterion.
    All,
    /// Splitting of substituted words.
    LemmaTm {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// Exact spread values of the power family.
    LemmaInfinitesimal {
        #[arg(long, default_value_t = 5)]
        kmax: u32,
    },
    /// Additivity under sigma.
    LemmaAdditive {
        #[arg(long, default_value_t = 2)]
        kmax: u32,
        #[arg(long, default_value_t = 20)]
        tuples: usize,
    },
    /// Word problem, nucleus and algebra relations.
    Presentation,
    /// Growth constant and counting performance.
    Counting {
        #[arg(long, default_value_t = 3)]
        k_min: usize,
        #[arg(long, default_value_t = 6)]
        k_max: usize,
    },
}

/// What a command produced.
struct Report {
    text: String,
    json: Value,
    outcome: Outcome,
}

impl Report {
    fn ok(text: impl Into<String>, json: Value) -> Self {
        Report {
            text: text.into(),
            json,
            outcome: Outcome::Pass,
        }
    }
}

struct Ctx {
    q: Alphabet,
    ring: Ring,
    mode: Mode,
    g: Global,
}

type Res<T> = Result<T, Error>;

impl Ctx {
    fn algebra(&self) -> Algebra {
        Algebra::new(self.q, self.mode, self.ring)
    }

    fn recursion(&self) -> WreathRecursion {
        WreathRecursion::thue_morse(self.q)
    }

    fn word(&self, s: &str) -> Res<GroupWord> {
        GroupWord::parse_for(s, self.q.size())
    }

    fn vertex(&self, s: &str) -> Res<Vec<usize>> {
        let digits: Vec<&str> = if s.contains(',') {
            s.split(',').collect()
        } else {
            s.split("").filter(|d| !d.is_empty()).collect()
        };
        digits
            .into_iter()
            .map(|d| {
                d.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&a| a < self.q.size())
                    .ok_or_else(|| Error::InvalidArgument(format!("bad vertex letter {d:?}")))
            })
            .collect()
    }
}

fn verdict_report(v: Verdict, extra: Value) -> Report {
    let mut json = json!({ "verdict": v.to_string() });
    if let (Some(obj), Value::Object(more)) = (json.as_object_mut(), extra) {
        obj.extend(more);
    }
    Report {
        text: v.to_string(),
        json,
        outcome: match v {
            Verdict::Unknown { .. } => Outcome::Inconclusive,
            _ => Outcome::Pass,
        },
    }
}

fn run_word(ctx: &Ctx, cmd: WordCmd) -> Res<Report> {
    let q = ctx.q;
    Ok(match cmd {
        WordCmd::Prefix { n } => {
            let w = words::tm_prefix(q, n);
            let text = if q.size() <= 10 {
                w.0.iter().map(|d| d.to_string()).collect::<String>()
            } else {
                w.0.iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            Report::ok(text, json!({ "q": q.size(), "n": n, "letters": w.0 }))
        }
        WordCmd::Subst { word, times } => {
            let mut w = ctx.word(&word)?;
            for _ in 0..times {
                w = words::theta(&w, q)?;
            }
            Report::ok(
                w.to_string(),
                json!({ "word": w.to_string(), "length": w.len() }),
            )
        }
        WordCmd::Gamma { word, shift } => {
            let w = words::gamma(&ctx.word(&word)?, shift, q);
            Report::ok(w.to_string(), json!({ "word": w.to_string() }))
        }
    })
}

fn run_group(ctx: &Ctx, cmd: GroupCmd) -> Res<Report> {
    let r = ctx.recursion();
    let cap = ctx.g.cap_states;
    Ok(match cmd {
        GroupCmd::Decompose { word } => {
            let d = r.decompose(&ctx.word(&word)?)?;
            Report::ok(d.to_string(), d.to_json())
        }
        GroupCmd::Act { word, vertex } => {
            let v = r.act(&ctx.word(&word)?, &ctx.vertex(&vertex)?);
            let text: String = v
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(if ctx.q.size() <= 10 { "" } else { "," });
            Report::ok(text, json!({ "image": v }))
        }
        GroupCmd::Section { word, vertex } => {
            let s = words::free_reduce(&r.section(&ctx.word(&word)?, &ctx.vertex(&vertex)?));
            Report::ok(s.to_string(), json!({ "section": s.to_string() }))
        }
        GroupCmd::Trivial { word } => {
            verdict_report(group::is_trivial(&r, &ctx.word(&word)?, cap)?, json!({}))
        }
        GroupCmd::Equal { left, right } => verdict_report(
            group::equal(&r, &ctx.word(&left)?, &ctx.word(&right)?, cap)?,
            json!({}),
        ),
        GroupCmd::Order { word, max } => match group::order_of(&r, &ctx.word(&word)?, max, cap)? {
            Order::Finite(n) => Report::ok(n.to_string(), json!({ "order": n })),
            Order::Unknown { cap } => Report {
                text: format!("unknown(cap={cap})"),
                json: json!({ "order": null, "cap": cap }),
                outcome: Outcome::Inconclusive,
            },
        },
        GroupCmd::Nucleus { cap: class_cap } => {
            let n = group::nucleus(&r, class_cap, cap)?;
            let elems: Vec<String> = n.elements.iter().map(|w| w.to_string()).collect();
            Report {
                text: format!(
                    "{{{}}}{}",
                    elems.join(", "),
                    if n.closed { "" } else { " (not closed)" }
                ),
                json: json!({ "elements": elems, "closed": n.closed }),
                outcome: if n.closed {
                    Outcome::Pass
                } else {
                    Outcome::Inconclusive
                },
            }
        }
        GroupCmd::Bounded { word } => {
            let p = group::boundedness_profile(&r, &ctx.word(&word)?, ctx.g.depth, cap)?;
            let p: Vec<String> = p.iter().map(|c| c.to_string()).collect();
            Report::ok(p.join(" "), json!({ "profile": p }))
        }
        GroupCmd::Portrait { word } => {
            let p = r.portrait(&ctx.word(&word)?, ctx.g.depth);
            Report::ok(
                serde_json::to_string_pretty(&p.to_json()).unwrap_or_default(),
                p.to_json(),
            )
        }
        GroupCmd::Moved { word } => match group::moved_vertex(&r, &ctx.word(&word)?, ctx.g.depth) {
            Some(v) => Report::ok(
                v.iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                json!({ "vertex": v }),
            ),
            None => Report {
                text: format!("no moved vertex up to depth {}", ctx.g.depth),
                json: json!({ "vertex": null, "depth": ctx.g.depth }),
                outcome: Outcome::Inconclusive,
            },
        },
    })
}

fn element_json(alg: &Algebra, e: &Element) -> Value {
    let mut v = alg.to_json(e);
    v["element"] = json!(e.to_string());
    v
}

fn run_algebra(ctx: &Ctx, cmd: AlgebraCmd) -> Res<Report> {
    let alg = ctx.algebra();
    Ok(match cmd {
        AlgebraCmd::Phi { element } => {
            let m = alg.phi(&alg.parse(&element)?);
            Report::ok(m.to_string().trim_end(), json!({ "matrix": m.to_json() }))
        }
        AlgebraCmd::Zero { element } => {
            let v = alg.is_zero(&alg.parse(&element)?, ctx.g.depth);
            let json = match &v {
                ZeroVerdict::Zero { depth } => json!({ "verdict": "zero", "depth": depth }),
                ZeroVerdict::NonZero {
                    depth,
                    row,
                    col,
                    scalar,
                } => json!({
                    "verdict": "nonzero", "depth": depth, "row": row, "col": col, "scalar": scalar.to_string()
                }),
                ZeroVerdict::Unknown { cap } => json!({ "verdict": "unknown", "cap": cap }),
            };
            Report {
                text: v.to_string(),
                json,
                outcome: if matches!(v, ZeroVerdict::Unknown { .. }) {
                    Outcome::Inconclusive
                } else {
                    Outcome::Pass
                },
            }
        }
        AlgebraCmd::Star { element } => {
            let e = alg.star(&alg.parse(&element)?)?;
            Report::ok(e.to_string(), element_json(&alg, &e))
        }
        AlgebraCmd::Sigma { elements } => {
            let parts = elements
                .iter()
                .map(|s| alg.parse(s))
                .collect::<Res<Vec<_>>>()?;
            let e = alg.sigma(&parts)?;
            Report::ok(e.to_string(), element_json(&alg, &e))
        }
        AlgebraCmd::Omega { n, kmax, size_cap } => {
            let list = alg.omega(n, kmax, size_cap)?;
            let strs: Vec<String> = list.iter().map(|e| e.to_string()).collect();
            Report::ok(strs.join("\n"), json!({ "level": n, "elements": strs }))
        }
        AlgebraCmd::Cdepth { element } => {
            match alg.contraction_depth(&alg.parse(&element)?, ctx.g.depth) {
                Some(d) => Report::ok(d.to_string(), json!({ "depth": d })),
                None => Report {
                    text: format!("unknown(cap={})", ctx.g.depth),
                    json: json!({ "depth": null, "cap": ctx.g.depth }),
                    outcome: Outcome::Inconclusive,
                },
            }
        }
        AlgebraCmd::Rcbound { element } => {
            let p = alg.row_col_bound_profile(&alg.parse(&element)?, ctx.g.depth);
            let text = p
                .iter()
                .map(|(r, c)| format!("{r}/{c}"))
                .collect::<Vec<_>>()
                .join(" ");
            Report::ok(
                text,
                json!({ "rows": p.iter().map(|x| x.0).collect::<Vec<_>>(), "cols": p.iter().map(|x| x.1).collect::<Vec<_>>() }),
            )
        }
    })
}

fn run_char(ctx: &Ctx, cmd: CharCmd) -> Res<Report> {
    let alg = ctx.algebra();
    let q = ctx.q.size();
    let cap = ctx.g.cap_classes;
    Ok(match cmd {
        CharCmd::Spread { element, expanded } => {
            let e = alg.parse(&element)?;
            let v = if expanded {
                characters::spread_char_expanded(&alg, &e, cap)?
            } else {
                characters::spread_char(&alg, &e, cap)?
            };
            Report::ok(v.value.render(q), v.to_json(q))
        }
        CharCmd::Kernel { element, kernel } => {
            let k = Kernel::parse(&kernel, q)?;
            let v = characters::algebra_char(&alg, &alg.parse(&element)?, &k, cap)?;
            let mut json = v.to_json(q);
            json["positive_semidefinite"] = json!(k.is_positive_semidefinite());
            Report::ok(v.value.render(q), json)
        }
        CharCmd::Group { word, kernel } => {
            let k = Kernel::parse(&kernel, q)?;
            let v = characters::group_char(
                &ctx.recursion(),
                &ctx.word(&word)?,
                &k,
                cap,
                ctx.g.cap_states,
            )?;
            Report::ok(v.value.render(q), v.to_json(q))
        }
        CharCmd::Count { element, k } => {
            let c = characters::count_l(&alg, &alg.parse(&element)?, k, cap)?;
            Report {
                text: c.count.to_string(),
                json: json!({ "count": c.count.to_string(), "classes": c.classes, "undecided": c.undecided }),
                outcome: if c.undecided == 0 {
                    Outcome::Pass
                } else {
                    Outcome::Inconclusive
                },
            }
        }
        CharCmd::Growth {
            element,
            k_min,
            k_max,
        } => {
            let g = characters::growth_constant(&alg, &alg.parse(&element)?, k_min, k_max, cap)?;
            let rows: Vec<String> = g
                .differences
                .iter()
                .map(|(k, d)| format!("k={k}: {d}"))
                .collect();
            Report::ok(
                format!(
                    "{}\nC = {} ({})",
                    rows.join("\n"),
                    g.constant,
                    if g.stable { "stable" } else { "not stable" }
                ),
                json!({
                    "chi": g.chi.render(q),
                    "C": g.constant.to_string(),
                    "stable": g.stable,
                    "differences": g.differences.iter().map(|(k, d)| json!({"k": k, "value": d.to_string()})).collect::<Vec<_>>(),
                }),
            )
        }
        CharCmd::Additivity { elements } => {
            let parts = elements
                .iter()
                .map(|s| alg.parse(s))
                .collect::<Res<Vec<_>>>()?;
            let rep = characters::additivity_check(&alg, &parts, cap)?;
            let comps: Vec<String> = rep.components.iter().map(|v| v.render(q)).collect();
            Report {
                text: format!(
                    "sigma: {}  sum: {} = {}  {}\ndiagonal: {:?}\ngamma-invariant: {:?}",
                    rep.lhs.render(q),
                    comps.join(" + "),
                    rep.rhs.render(q),
                    if rep.additive { "equal" } else { "DIFFERENT" },
                    rep.diagonal,
                    rep.gamma_invariant
                ),
                json: json!({
                    "lhs": rep.lhs.render(q),
                    "components": comps,
                    "rhs": rep.rhs.render(q),
                    "additive": rep.additive,
                    "diagonal": rep.diagonal,
                    "gamma_invariant": rep.gamma_invariant,
                }),
                outcome: if rep.holds() {
                    Outcome::Pass
                } else {
                    Outcome::Fail
                },
            }
        }
        CharCmd::Witness { target, budget } => {
            let t = ExactQ::parse(&target)?;
            match characters::theorem_witness(&alg, &t, budget, cap)? {
                Witness::Found { element, value, .. } => Report::ok(
                    element.to_string(),
                    json!({ "found": true, "element": element.to_string(), "value": value.render(q) }),
                ),
                Witness::NotFound {
                    frontier,
                    evaluations,
                } => {
                    let f: Vec<String> = frontier.iter().map(|v| v.render(q)).collect();
                    Report {
                        text: format!(
                            "not found ({evaluations} evaluations; block values {})",
                            f.join(", ")
                        ),
                        json: json!({ "found": false, "frontier": f, "evaluations": evaluations }),
                        outcome: Outcome::Inconclusive,
                    }
                }
            }
        }
    })
}

fn parse_pair<T: std::str::FromStr>(s: &str, sep: char, what: &str) -> Res<Vec<T>> {
    s.split(sep)
        .map(|p| p.trim().parse::<T>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Error::InvalidArgument(format!("bad {what} {s:?}")))
}

fn run_julia(ctx: &Ctx, cmd: JuliaCmd) -> Res<Report> {
    let JuliaCmd::Render {
        preset,
        out,
        points,
        viewport,
        size,
        burn_in,
    } = cmd;
    let f = RationalMap::preset(&preset)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown preset {preset:?}")))?;
    let vp: Vec<f64> = parse_pair(&viewport, ',', "viewport")?;
    let px: Vec<usize> = parse_pair(&size, 'x', "size")?;
    if vp.len() != 3 || px.len() != 2 {
        return Err(Error::InvalidArgument(
            "viewport is re,im,width and size is WxH".into(),
        ));
    }
    let cfg = RenderConfig {
        center: dynamics::Complex::new(vp[0], vp[1]),
        width: vp[2],
        pixels_x: px[0],
        pixels_y: px[1],
        points,
        burn_in,
        seed: ctx.g.seed,
    };
    cfg.validate()?;
    let sample = dynamics::julia_points(&f, &cfg)?;
    let img = dynamics::render(&sample.points, &cfg)?;
    let file = File::create(&out)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", out.display())))?;
    dynamics::write_pgm(&img, BufWriter::new(file))
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(Report::ok(
        format!(
            "wrote {} ({}x{}, {} points, {} dark pixels, {} skipped, max residual {:e})",
            out.display(),
            img.width,
            img.height,
            sample.points.len(),
            img.dark_pixels(),
            sample.skipped,
            sample.max_residual
        ),
        json!({
            "file": out.display().to_string(),
            "points": sample.points.len(),
            "dark_pixels": img.dark_pixels(),
            "skipped": sample.skipped,
            "max_residual": sample.max_residual,
        }),
    ))
}

fn checks_report(checks: Vec<Check>) -> Report {
    let outcome = verify::overall(&checks);
    Report {
        text: checks
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("\n"),
        json: json!({
            "outcome": outcome.to_string(),
            "checks": checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        }),
        outcome,
    }
}

fn run_verify(ctx: &Ctx, cmd: VerifyCmd) -> Res<Report> {
    let q = ctx.q.size();
    let seed = ctx.g.seed;
    Ok(checks_report(match cmd {
        VerifyCmd::All => verify::acceptance(),
        VerifyCmd::LemmaTm { samples, max_len } => {
            vec![verify::lemma_tm(q, samples, max_len, seed)]
        }
        VerifyCmd::LemmaInfinitesimal { kmax } => verify::lemma_infinitesimal(q, kmax),
        VerifyCmd::LemmaAdditive { kmax, tuples } => {
            vec![verify::lemma_additive(q, kmax, tuples, seed)]
        }
        VerifyCmd::Presentation => verify::presentation(q),
        VerifyCmd::Counting { k_min, k_max } => {
            vec![verify::counting(
                q,
                k_min,
                k_max,
                20,
                Duration::from_secs(5),
            )]
        }
    }))
}

fn exit_for(outcome: Outcome) -> ExitCode {
    ExitCode::from(outcome.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let json_out = cli.global.json;
    let setup = || -> Res<Ctx> {
        Ok(Ctx {
            q: Alphabet::new(cli.global.q)?,
            ring: Ring::parse(&cli.global.ring)?,
            mode: Mode::parse(&cli.global.mode)?,
            g: cli.global,
        })
    };
    let result = setup().and_then(|ctx| match cli.command {
        Command::Word(c) => run_word(&ctx, c),
        Command::Group(c) => run_group(&ctx, c),
        Command::Algebra(c) => run_algebra(&ctx, c),
        Command::Char(c) => run_char(&ctx, c),
        Command::Julia(c) => run_julia(&ctx, c),
        Command::Verify(c) => run_verify(&ctx, c),
    });
    match result {
        Ok(report) => {
            if json_out {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.json).unwrap_or_default()
                );
            } else {
                println!("{}", report.text);
            }
            exit_for(report.outcome)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::Parse { .. }) {
                eprintln!("words: x0 x1^-1, (x0 x1)^3, [x0, x1]; elements: 2*x0 x1 - 1 + x1^-1 x0");
            }
            exit_for(match e {
                Error::Inconclusive { .. } => Outcome::Inconclusive,
                _ => Outcome::Fail,
            })
        }
    }
}
