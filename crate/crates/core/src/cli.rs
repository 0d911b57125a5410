//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when an operator rejects its inputs
//! (divisibility, admissibility, ...), 2 on usage or syntax errors.

use clap::{Parser, Subcommand};

use crate::algebra::{self, GapRule};
use crate::analysis;
use crate::error::{Error, Result};
use crate::inttuple::{IntTuple, Tuple};
use crate::layout::{Layout, Tiler};
use crate::stride::StrideElem;

pub fn parse_layout(text: &str) -> Result<Layout> {
    text.parse()
}

/// Canonical text; `parse_layout(&format_layout(l)) == l`.
pub fn format_layout(l: &Layout) -> String {
    l.to_string()
}

fn cell(v: &StrideElem, axes: usize) -> String {
    match v {
        StrideElem::Int(0) if axes > 0 => cell(&StrideElem::Coord(vec![0]), axes),
        StrideElem::Int(x) => x.to_string(),
        StrideElem::Xor(x) => x.to_string(),
        StrideElem::Coord(c) => {
            let mut c = c.clone();
            c.resize(axes.max(c.len()), 0);
            let parts: Vec<String> = c.iter().map(i64::to_string).collect();
            format!("({})", parts.join(","))
        }
    }
}

fn grid(rows: i64, cols: i64, at: impl Fn(i64, i64) -> Result<StrideElem>, axes: usize) -> Result<String> {
    let mut cells = Vec::with_capacity((rows * cols) as usize);
    for r in 0..rows {
        for c in 0..cols {
            cells.push(cell(&at(r, c)?, axes));
        }
    }
    let w = cells.iter().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for r in 0..rows as usize {
        let line: Vec<String> =
            cells[r * cols as usize..(r + 1) * cols as usize].iter().map(|s| format!("{s:>w$}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Ok(out)
}

/// Grid of a rank-2 layout: rows index mode 0, columns mode 1.
pub fn render_2d(l: &Layout) -> Result<String> {
    if l.shape().is_leaf() || l.rank() != 2 {
        return Err(Error::Structure(format!("rendering a grid needs a rank-2 layout, got {l}")));
    }
    let (m, n) = (l.mode(0)?.size(), l.mode(1)?.size());
    let at = |r, c| l.eval(&Tuple::List(vec![Tuple::Leaf(r), Tuple::Leaf(c)]));
    grid(m, n, at, l.coord_axes())
}

/// Rank-1 layouts render as a single row, rank-2 as a grid.
pub fn render(l: &Layout) -> Result<String> {
    if l.shape().is_leaf() || l.rank() == 1 {
        grid(1, l.size(), |_, c| l.eval_index(c), l.coord_axes())
    } else {
        render_2d(l)
    }
}

#[derive(Parser, Debug)]
#[command(name = "shapestride", version, about = "Evaluate and transform shape:stride layouts")]
struct Cli {
    /// Also print the result as a 1-D or 2-D table.
    #[arg(long, global = true)]
    render: bool,
    /// Size complement gaps by floor division (the default).
    #[arg(long, global = true)]
    relaxed_complement: bool,
    /// Reject layouts whose complement gaps do not divide exactly.
    #[arg(long, global = true, conflicts_with = "relaxed_complement")]
    strict_complement: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate a layout at a coordinate or integral index.
    Eval { layout: String, coord: String },
    /// Print a layout in canonical form.
    Print { layout: String },
    Coalesce { layout: String },
    /// A ∘ B; a bracketed B (`[4:1,8:2]`) composes mode by mode.
    Compose { a: String, b: String },
    /// Complement, optionally against an explicit bound (one per axis for coordinate layouts).
    Complement { layout: String, target: Option<String> },
    /// Right inverse.
    Rinv { layout: String },
    /// Left inverse.
    Linv { layout: String },
    Divide { a: String, b: String },
    ZippedDivide { a: String, tiler: String },
    Product { a: String, b: String },
    BlockedProduct { a: String, b: String },
    RakedProduct { a: String, b: String },
    /// Widest common vector between two layouts of equal size.
    Vectorize { a: String, b: String },
    /// Coordinates of `a` that produce the offsets of `t`.
    Locate { a: String, t: String },
    LinearForm { layout: String },
    /// Layout chain reproducing a table `f(0)=0, f(1), ...` (comma or space separated).
    Chain {
        #[arg(allow_negative_numbers = true, num_args = 1..)]
        values: Vec<String>,
    },
}

/// Exit status and captured output of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Failure split by exit code: bad input text versus rejected operands.
enum Fail {
    Usage(Error),
    Domain(Error),
}

fn usage<T>(r: Result<T>) -> std::result::Result<T, Fail> {
    r.map_err(Fail::Usage)
}

fn domain<T>(r: Result<T>) -> std::result::Result<T, Fail> {
    r.map_err(Fail::Domain)
}

/// Run one command; `argv` excludes the program name.
pub fn run_command<S: AsRef<str>>(argv: &[S]) -> Output {
    let args = std::iter::once("shapestride").chain(argv.iter().map(AsRef::as_ref));
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code: 2, stdout: String::new(), stderr: text }
            } else {
                Output { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok(stdout) => Output { code: 0, stdout, stderr: String::new() },
        Err(Fail::Usage(e)) => Output { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
        Err(Fail::Domain(e)) => Output { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn layout_result(l: &Layout, render: bool) -> std::result::Result<String, Fail> {
    let mut out = format!("{l}\n");
    if render {
        out.push_str(&usage(crate::cli::render(l))?);
    }
    Ok(out)
}

fn execute(cli: &Cli) -> std::result::Result<String, Fail> {
    let rule = if cli.strict_complement { GapRule::Exact } else { GapRule::Floor };
    let lay = |s: &str| usage(parse_layout(s));
    let done = |l: Result<Layout>| layout_result(&domain(l)?, cli.render);
    match &cli.cmd {
        Cmd::Eval { layout, coord } => {
            let l = lay(layout)?;
            let c: IntTuple = usage(coord.parse())?;
            let v = domain(l.eval(&c))?;
            Ok(format!("{}\n", cell(&v, l.coord_axes())))
        }
        Cmd::Print { layout } => layout_result(&lay(layout)?, cli.render),
        Cmd::Coalesce { layout } => layout_result(&lay(layout)?.coalesce(), cli.render),
        Cmd::Compose { a, b } => {
            let a = lay(a)?;
            if b.trim_start().starts_with('[') {
                let t: Tiler = usage(b.parse())?;
                done(algebra::compose_by_mode(&a, &t))
            } else {
                done(algebra::compose(&a, &lay(b)?))
            }
        }
        Cmd::Complement { layout, target } => {
            let l = lay(layout)?;
            let t: Option<IntTuple> = target.as_deref().map(str::parse).transpose().map_err(Fail::Usage)?;
            done(algebra::complement_with(&l, t.as_ref(), rule))
        }
        Cmd::Rinv { layout } => done(algebra::right_inverse(&lay(layout)?)),
        Cmd::Linv { layout } => done(algebra::left_inverse(&lay(layout)?)),
        Cmd::Divide { a, b } => done(algebra::logical_divide_with(&lay(a)?, &lay(b)?, rule)),
        Cmd::ZippedDivide { a, tiler } => {
            let t: Tiler = usage(tiler.parse())?;
            done(algebra::zipped_divide_with(&lay(a)?, &t, rule))
        }
        Cmd::Product { a, b } => done(algebra::logical_product_with(&lay(a)?, &lay(b)?, rule)),
        Cmd::BlockedProduct { a, b } => done(algebra::blocked_product(&lay(a)?, &lay(b)?)),
        Cmd::RakedProduct { a, b } => done(algebra::raked_product(&lay(a)?, &lay(b)?)),
        Cmd::Vectorize { a, b } => Ok(format!("{}\n", domain(analysis::max_common_vector(&lay(a)?, &lay(b)?))?)),
        Cmd::Locate { a, t } => done(analysis::locate_offsets(&lay(a)?, &lay(t)?)),
        Cmd::LinearForm { layout } => Ok(format!("{}\n", domain(analysis::linear_form(&lay(layout)?))?)),
        Cmd::Chain { values } => {
            let joined = values.join(",");
            let f = joined
                .split(|c: char| c == ',' || c.is_whitespace() || c == '[' || c == ']')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<i64>().map_err(|_| Fail::Usage(Error::Syntax { offset: 0, msg: format!("bad table entry '{s}'") }))
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let chain = domain(analysis::function_to_chain(&f))?;
            let text: Vec<String> = chain.iter().map(Layout::to_string).collect();
            Ok(format!("{}\n", text.join(" ∘ ")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Output {
        run_command(args)
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(format_layout(&parse_layout("(4,(4,3)):(f1,(f5,f16))").unwrap()), "(4,(4,3)):(f1,(f5,f16))");
        assert!(matches!(parse_layout("(4,8):(1)"), Err(Error::Structure(_))));
        assert_eq!(format_layout(&parse_layout("(2,3):(0,1)").unwrap()), "(2,3):(0,1)");
    }

    #[test]
    fn grids() {
        let g = render_2d(&parse_layout("(4,8):(1,4)").unwrap()).unwrap();
        let first: Vec<&str> = g.lines().map(|r| r.split_whitespace().next().unwrap()).collect();
        assert_eq!(first, ["0", "1", "2", "3"]);
        let g = render_2d(&parse_layout("(2,3):(e0,e1)").unwrap()).unwrap();
        assert_eq!(g, "(0,0) (0,1) (0,2)\n(1,0) (1,1) (1,2)\n");
        assert!(render_2d(&parse_layout("8:1").unwrap()).is_err());
        assert_eq!(render(&parse_layout("4:3").unwrap()).unwrap(), "0 3 6 9\n");
    }

    #[test]
    fn commands() {
        let o = run(&["compose", "(4,6,8,10):(2,3,5,7)", "6:12"]);
        assert_eq!((o.code, o.stdout.as_str()), (0, "(2,3):(9,5)\n"));
        let o = run(&["compose", "(4,6,8):(2,3,5)", "6:3"]);
        assert_eq!(o.code, 1);
        assert!(o.stderr.contains("stride divisibility condition"));
        let o = run(&["vectorize", "(4,4):(1,4)", "((2,2),4):((1,8),2)"]);
        assert_eq!(o.stdout, "2\n");
        assert_eq!(run(&["coalesce", "(2,(1,6)):(1,(6,2))"]).stdout, "12:1\n");
        assert_eq!(run(&["compose", "(8,16):(1,8)", "[4:2,8:2]"]).stdout, "(4,8):(2,16)\n");
        assert_eq!(run(&["complement", "(3,4):(4,1)", "24"]).stdout, "2:12\n");
        assert_eq!(run(&["--strict-complement", "complement", "(4,8):(1,5)"]).code, 1);
        assert_eq!(run(&["--relaxed-complement", "complement", "(4,8):(1,5)"]).stdout, "1:40\n");
        assert_eq!(run(&["eval", "(4,8):(e0,e1)", "9"]).stdout, "(1,2)\n");
        assert_eq!(run(&["linear-form", "(4,4):(f1,f5)"]).stdout, "[[1 0 1 0],[0 1 0 1],[0 0 1 0],[0 0 0 1]]\n");
        assert_eq!(run(&["chain", "0,7,3,5"]).stdout, "(2,2,2):(7,3,5) ∘ (3,1):(1,4)\n");
        assert_eq!(run(&["chain", "0", "-2"]).stdout, "2:-2\n");
        assert_eq!(run(&["zipped-divide", "(8,16):(20,1)", "[4:1,8:2]"]).stdout, "((4,8),(2,2)):((20,2),(80,1))\n");
        assert_eq!(run(&["locate", "(128,512):(16384,1)", "(1,128):(1,16384)"]).stdout, "(1,128):(0,1)\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(&["compose", "(4,8):(1,x)", "2:1"]).code, 2);
        assert_eq!(run(&["frobnicate"]).code, 2);
        assert_eq!(run(&[] as &[&str]).code, 2);
        assert_eq!(run(&["--render", "print", "8:1"]).code, 0);
        assert_eq!(run(&["--render", "print", "(2,2,2):(1,2,4)"]).code, 2);
        assert_eq!(run(&["linv", "(2,2):(f1,f1)"]).code, 1);
        assert_eq!(run(&["--help"]).code, 0);
        let o = run(&["compose", "(4,8):(1,x)", "2:1"]);
        assert!(o.stderr.contains("byte 9"), "{}", o.stderr);
    }

    #[test]
    fn rendered_products() {
        let o = run(&["--render", "blocked-product", "(3,4):(4,1)", "(2,5):(1,2)"]);
        let rows: Vec<Vec<i64>> =
            o.stdout.lines().skip(1).map(|r| r.split_whitespace().map(|x| x.parse().unwrap()).collect()).collect();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0].len(), 20);
        assert_eq!(rows[0][4], 24);
    }
}
