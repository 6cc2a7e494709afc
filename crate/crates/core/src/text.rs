//! Line-oriented text formats.
//!
//! Blank lines and lines starting with `#` are ignored everywhere. A
//! semiring token is a builtin name or a reference to a table file,
//! resolved by the caller-supplied resolver.
//!
//! ```text
//! semiring table            semiring <builtin>
//! elements a b c
//! zero a
//! one c
//! add                       (|E| rows of |E| labels)
//! mul                       (likewise)
//!
//! vec <semiring> <labels...> : <values...>
//!
//! kernel <semiring>
//! rows <labels...>
//! cols <labels...>
//! <|rows| lines of |cols| values>
//!
//! module <semiring> dim <n>
//! <one tuple per line>
//!
//! points
//! <tuple> ; <tuple> ; ...   (one component per factor)
//!
//! polymap <semiring>
//! factors <n_1> ... <n_m>   (full cubes K^{n_α})
//! codomain <n>              (the full cube K^n)
//! map <tuple> ; ... -> <tuple>
//! ```

use crate::error::{Error, Result};
use crate::exttensor::module::require_finite;
use crate::exttensor::{ExtTensor, FinSemimodule, PolyMapTable, ProductPoint, TensorSpace, Tuple};
use crate::freemod::{FreeVector, IndexSet, Label};
use crate::kernelop::Kernel;
use crate::semiring::{FiniteTable, Semiring};

/// Maps a semiring token to a semiring.
pub type Resolver<'a> = &'a dyn Fn(&str) -> Result<Semiring>;

/// Resolves builtin names only.
pub fn builtin_resolver(token: &str) -> Result<Semiring> {
    Semiring::builtin(token)
        .ok_or_else(|| Error::Unsupported(format!("unknown semiring `{token}`")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Semiring,
    Vector,
    Kernel,
    Module,
    Points,
    Polymap,
}

/// Numbered, comment-free, non-blank lines.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#')).then(|| (i + 1, l.split_whitespace().collect()))
    })
}

fn wrap(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse { .. } => e,
        other => Error::parse(line, other.to_string()),
    }
}

/// The kind named by the first keyword.
pub fn detect_kind(text: &str) -> Result<FileKind> {
    let (line, toks) = lines(text)
        .next()
        .ok_or_else(|| Error::parse(0, "empty file"))?;
    Ok(match toks[0] {
        "semiring" => FileKind::Semiring,
        "vec" => FileKind::Vector,
        "kernel" => FileKind::Kernel,
        "module" => FileKind::Module,
        "points" => FileKind::Points,
        "polymap" => FileKind::Polymap,
        other => return Err(Error::parse(line, format!("unknown file kind `{other}`"))),
    })
}

fn parse_usize(line: usize, tok: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected a count, found `{tok}`")))
}

/// Parses a semiring file.
pub fn parse_semiring(text: &str, resolve: Resolver) -> Result<Semiring> {
    let mut it = lines(text).peekable();
    let (line, head) = it.next().ok_or_else(|| Error::parse(0, "empty file"))?;
    if head.len() != 2 || head[0] != "semiring" {
        return Err(Error::parse(line, "expected `semiring table` or `semiring <name>`"));
    }
    if head[1] != "table" {
        if let Some((l, _)) = it.next() {
            return Err(Error::parse(l, "unexpected content after a builtin semiring"));
        }
        return resolve(head[1]).map_err(wrap(line));
    }
    let mut name = None;
    let mut labels: Option<Vec<String>> = None;
    let mut zero = None;
    let mut one = None;
    let mut add = None;
    let mut mul = None;
    while let Some((line, toks)) = it.next() {
        let need_labels = || {
            labels
                .clone()
                .ok_or_else(|| Error::parse(line, "`elements` must come first"))
        };
        let lookup = |ls: &[String], tok: &str| {
            ls.iter()
                .position(|l| l == tok)
                .ok_or_else(|| Error::parse(line, format!("unknown element `{tok}`")))
        };
        match toks[0] {
            "name" if toks.len() == 2 => name = Some(toks[1].to_string()),
            "elements" if toks.len() >= 2 => {
                labels = Some(toks[1..].iter().map(|s| s.to_string()).collect())
            }
            "zero" | "one" if toks.len() == 2 => {
                let ls = need_labels()?;
                let v = lookup(&ls, toks[1])?;
                if toks[0] == "zero" {
                    zero = Some(v);
                } else {
                    one = Some(v);
                }
            }
            "add" | "mul" if toks.len() == 1 => {
                let ls = need_labels()?;
                let mut rows = Vec::with_capacity(ls.len());
                for _ in 0..ls.len() {
                    let (l, row) = it
                        .next()
                        .ok_or_else(|| Error::parse(line, format!("{} table is truncated", toks[0])))?;
                    if row.len() != ls.len() {
                        return Err(Error::parse(l, format!("expected {} entries", ls.len())));
                    }
                    rows.push(
                        row.iter()
                            .map(|t| {
                                ls.iter()
                                    .position(|x| x == t)
                                    .ok_or_else(|| Error::parse(l, format!("unknown element `{t}`")))
                            })
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
                if toks[0] == "add" {
                    add = Some(rows);
                } else {
                    mul = Some(rows);
                }
            }
            other => return Err(Error::parse(line, format!("unexpected `{other}`"))),
        }
    }
    let missing = |what: &str| Error::parse(0, format!("missing `{what}`"));
    let t = FiniteTable::new(
        labels.ok_or_else(|| missing("elements"))?,
        add.ok_or_else(|| missing("add"))?,
        mul.ok_or_else(|| missing("mul"))?,
        zero.ok_or_else(|| missing("zero"))?,
        one.ok_or_else(|| missing("one"))?,
    )
    .map_err(wrap(0))?;
    Ok(Semiring::table(match name {
        Some(n) => t.with_name(n),
        None => t,
    }))
}

/// Writes a table file for any finite semiring.
pub fn format_semiring_table(k: &Semiring) -> Result<String> {
    let t = FiniteTable::from_semiring(k)?;
    let els = k.elements().expect("finite");
    let f = |e| k.format_elem(e);
    let mut out = format!("semiring table\nname {}\nelements {}\n", k.name(), t.labels().join(" "));
    out.push_str(&format!("zero {}\none {}\n", f(k.zero()), f(k.one())));
    for (what, op) in [("add", 0), ("mul", 1)] {
        out.push_str(what);
        out.push('\n');
        for &a in &els {
            let row: Vec<String> = els
                .iter()
                .map(|&b| f(if op == 0 { k.join(a, b) } else { k.times(a, b).expect("finite") }))
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    Ok(out)
}

/// `a|b|c` reads as the right-nested product label `(a, (b, c))`.
fn label_of(tok: &str) -> Label {
    let mut parts = tok.rsplit('|').map(Label::name);
    let last = parts.next().expect("rsplit yields at least one part");
    parts.fold(last, |acc, p| Label::pair(p, acc))
}

pub fn parse_vector(text: &str, resolve: Resolver) -> Result<FreeVector> {
    let mut it = lines(text);
    let (line, toks) = it.next().ok_or_else(|| Error::parse(0, "empty file"))?;
    if toks[0] != "vec" || toks.len() < 3 {
        return Err(Error::parse(line, "expected `vec <semiring> <labels...> : <values...>`"));
    }
    if let Some((l, _)) = it.next() {
        return Err(Error::parse(l, "a vector file holds one line"));
    }
    let k = resolve(toks[1]).map_err(wrap(line))?;
    let colon = toks
        .iter()
        .position(|&t| t == ":")
        .ok_or_else(|| Error::parse(line, "missing `:`"))?;
    let labels: Vec<Label> = toks[2..colon].iter().map(|t| label_of(t)).collect();
    let values = toks[colon + 1..]
        .iter()
        .map(|t| k.parse_elem(t))
        .collect::<Result<Vec<_>>>()
        .map_err(wrap(line))?;
    let index = IndexSet::new(labels).map_err(wrap(line))?;
    FreeVector::new(index, k, values).map_err(wrap(line))
}

pub fn format_vector(v: &FreeVector) -> String {
    let labels: Vec<String> = v.index().labels().iter().map(|l| l.to_string()).collect();
    let values: Vec<String> = v.coeffs().iter().map(|&e| v.semiring().format_elem(e)).collect();
    let mut head = format!("vec {}", v.semiring().name());
    if !labels.is_empty() {
        head.push(' ');
        head.push_str(&labels.join(" "));
    }
    head.push_str(" :");
    if !values.is_empty() {
        head.push(' ');
        head.push_str(&values.join(" "));
    }
    head.push('\n');
    head
}

pub fn parse_kernel(text: &str, resolve: Resolver) -> Result<Kernel> {
    let mut it = lines(text);
    let (line, head) = it.next().ok_or_else(|| Error::parse(0, "empty file"))?;
    if head.len() != 2 || head[0] != "kernel" {
        return Err(Error::parse(line, "expected `kernel <semiring>`"));
    }
    let k = resolve(head[1]).map_err(wrap(line))?;
    let mut section = |key: &str| -> Result<(usize, IndexSet)> {
        let (l, toks) = it
            .next()
            .ok_or_else(|| Error::parse(line, format!("missing `{key}`")))?;
        if toks[0] != key {
            return Err(Error::parse(l, format!("expected `{key}`")));
        }
        let ix = IndexSet::new(toks[1..].iter().map(|t| label_of(t)).collect()).map_err(wrap(l))?;
        Ok((l, ix))
    };
    let (_, rows) = section("rows")?;
    let (cols_line, cols) = section("cols")?;
    let mut entries = Vec::with_capacity(rows.len() * cols.len());
    let mut last = cols_line;
    for _ in 0..rows.len() {
        let (l, toks) = it
            .next()
            .ok_or_else(|| Error::parse(last, format!("expected {} rows", rows.len())))?;
        if toks.len() != cols.len() {
            return Err(Error::parse(l, format!("expected {} values", cols.len())));
        }
        for t in toks {
            entries.push(k.parse_elem(t).map_err(wrap(l))?);
        }
        last = l;
    }
    if let Some((l, _)) = it.next() {
        return Err(Error::parse(l, "unexpected extra row"));
    }
    Kernel::new(rows, cols, k, entries).map_err(wrap(line))
}

pub fn format_kernel(m: &Kernel) -> String {
    let k = m.semiring();
    let join_labels = |ix: &IndexSet| {
        ix.labels()
            .iter()
            .map(|l| format!(" {l}"))
            .collect::<String>()
    };
    let mut out = format!(
        "kernel {}\nrows{}\ncols{}\n",
        k.name(),
        join_labels(m.rows()),
        join_labels(m.cols())
    );
    for x in 0..m.rows().len() {
        let row: Vec<String> = (0..m.cols().len()).map(|y| k.format_elem(m.get(x, y))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn parse_tuple(k: &Semiring, line: usize, toks: &[&str]) -> Result<Tuple> {
    toks.iter()
        .map(|t| k.parse_elem(t))
        .collect::<Result<Vec<_>>>()
        .map_err(wrap(line))
}

pub fn parse_module(text: &str, resolve: Resolver) -> Result<FinSemimodule> {
    let mut it = lines(text);
    let (line, head) = it.next().ok_or_else(|| Error::parse(0, "empty file"))?;
    if head.len() != 4 || head[0] != "module" || head[2] != "dim" {
        return Err(Error::parse(line, "expected `module <semiring> dim <n>`"));
    }
    let k = resolve(head[1]).map_err(wrap(line))?;
    require_finite(&k)?;
    let dim = parse_usize(line, head[3])?;
    let mut elements = Vec::new();
    for (l, toks) in it {
        if toks.len() != dim {
            return Err(Error::parse(l, format!("expected {dim} components")));
        }
        elements.push(parse_tuple(&k, l, &toks)?);
    }
    FinSemimodule::new(k, dim, elements).map_err(wrap(line))
}

fn split_components<'a>(toks: &[&'a str]) -> Vec<Vec<&'a str>> {
    toks.split(|&t| t == ";").map(|c| c.to_vec()).collect()
}

/// Parses a points file against the given factors.
pub fn parse_points(text: &str, factors: &[FinSemimodule]) -> Result<Vec<ProductPoint>> {
    let mut it = lines(text);
    let (line, head) = it.next().ok_or_else(|| Error::parse(0, "empty file"))?;
    if head != ["points"] {
        return Err(Error::parse(line, "expected `points`"));
    }
    let mut out = Vec::new();
    for (l, toks) in it {
        let comps = split_components(&toks);
        if comps.len() != factors.len() {
            return Err(Error::parse(
                l,
                format!("expected {} components separated by `;`", factors.len()),
            ));
        }
        let mut p = Vec::with_capacity(comps.len());
        for (c, f) in comps.iter().zip(factors) {
            if c.len() != f.dim() {
                return Err(Error::parse(l, format!("expected {} values per component", f.dim())));
            }
            p.push(parse_tuple(f.semiring(), l, c)?);
        }
        out.push(p);
    }
    Ok(out)
}

/// `count <n>` followed by the points in lexicographic order.
pub fn format_points(t: &ExtTensor) -> String {
    let s = t.space();
    let mut out = format!("count {}\n", t.len());
    for id in t.points().iter() {
        out.push_str(&s.format_point(id));
        out.push('\n');
    }
    out
}

pub fn parse_polymap(text: &str, resolve: Resolver) -> Result<PolyMapTable> {
    let mut it = lines(text);
    let (line, head) = it.next().ok_or_else(|| Error::parse(0, "empty file"))?;
    if head.len() != 2 || head[0] != "polymap" {
        return Err(Error::parse(line, "expected `polymap <semiring>`"));
    }
    let k = resolve(head[1]).map_err(wrap(line))?;
    require_finite(&k)?;
    let (fl, ftoks) = it.next().ok_or_else(|| Error::parse(line, "missing `factors`"))?;
    if ftoks[0] != "factors" || ftoks.len() < 2 {
        return Err(Error::parse(fl, "expected `factors <n_1> ... <n_m>`"));
    }
    let dims = ftoks[1..]
        .iter()
        .map(|t| parse_usize(fl, t))
        .collect::<Result<Vec<_>>>()?;
    let (cl, ctoks) = it.next().ok_or_else(|| Error::parse(fl, "missing `codomain`"))?;
    if ctoks.len() != 2 || ctoks[0] != "codomain" {
        return Err(Error::parse(cl, "expected `codomain <n>`"));
    }
    let cdim = parse_usize(cl, ctoks[1])?;
    let factors = dims
        .iter()
        .map(|&d| FinSemimodule::full_cube(k.clone(), d))
        .collect::<Result<Vec<_>>>()
        .map_err(wrap(fl))?;
    let codomain = FinSemimodule::full_cube(k.clone(), cdim).map_err(wrap(cl))?;
    let space = TensorSpace::new(factors.clone()).map_err(wrap(fl))?;
    let mut values: Vec<Option<Tuple>> = vec![None; space.size()];
    for (l, toks) in it {
        if toks[0] != "map" {
            return Err(Error::parse(l, "expected `map <tuple> ; ... -> <tuple>`"));
        }
        let arrow = toks
            .iter()
            .position(|&t| t == "->")
            .ok_or_else(|| Error::parse(l, "missing `->`"))?;
        let point_text = format!("points\n{}", toks[1..arrow].join(" "));
        let point = parse_points(&point_text, &factors)
            .map_err(|_| Error::parse(l, "malformed point"))?
            .pop()
            .ok_or_else(|| Error::parse(l, "missing point"))?;
        let w = parse_tuple(&k, l, &toks[arrow + 1..])?;
        if w.len() != cdim {
            return Err(Error::parse(l, format!("expected {cdim} codomain values")));
        }
        let id = space.point_id(&point).map_err(wrap(l))?;
        if values[id].replace(w).is_some() {
            return Err(Error::parse(l, "point mapped twice"));
        }
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| Error::parse(0, format!("no value for [{}]", space.format_point(i))))
        })
        .collect::<Result<Vec<_>>>()?;
    PolyMapTable::new(&space, codomain, &values).map_err(wrap(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::Elem;

    const CHAIN3: &str = "\
semiring table
name c3
elements lo mid hi
zero lo
one hi
add
lo mid hi
mid mid hi
hi hi hi
mul
lo lo lo
lo mid mid
lo mid hi
";

    #[test]
    fn table_round_trip() {
        let k = parse_semiring(CHAIN3, &builtin_resolver).unwrap();
        assert_eq!(k.name(), "c3");
        assert!(k.validate().passed());
        let again = parse_semiring(&format_semiring_table(&k).unwrap(), &builtin_resolver).unwrap();
        assert_eq!(again, k);
        let c = parse_semiring(&format_semiring_table(&Semiring::Chain(3)).unwrap(), &builtin_resolver)
            .unwrap();
        assert!(c.validate().passed());
    }

    #[test]
    fn builtin_semiring_file() {
        assert_eq!(
            parse_semiring("# c\nsemiring chain:4\n", &builtin_resolver).unwrap(),
            Semiring::Chain(4)
        );
    }

    #[test]
    fn malformed_inputs_are_parse_errors() {
        for bad in [
            "",
            "semiring table\nelements a b\nzero a\none b\nadd\na b\n",
            "semiring table\nzero a\n",
            "semiring nope\n",
        ] {
            assert!(matches!(parse_semiring(bad, &builtin_resolver), Err(Error::Parse { .. })), "{bad:?}");
        }
        assert!(matches!(
            parse_vector("vec rmax a b : 1 zz\n", &builtin_resolver),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_kernel("kernel rmax\nrows a\ncols b c\n1\n", &builtin_resolver),
            Err(Error::Parse { line: 4, .. })
        ));
    }

    #[test]
    fn vector_and_kernel_round_trip() {
        let v = parse_vector("vec rmax a b : -inf 2.5\n", &builtin_resolver).unwrap();
        assert_eq!(v.coeffs(), &[Elem::NEG_INF, Elem::real(2.5)]);
        assert_eq!(format_vector(&v), "vec rmax a b : -inf 2.5\n");
        let text = "kernel rmax\nrows x y\ncols p q\n1 2\n3 4\n";
        let m = parse_kernel(text, &builtin_resolver).unwrap();
        assert_eq!(format_kernel(&m), text);
    }

    #[test]
    fn module_and_points() {
        let m = parse_module("module boolean dim 2\n0 0\n1 0\n0 1\n1 1\n", &builtin_resolver).unwrap();
        assert!(m.validate().passed());
        let pts = parse_points("points\n1 0 ; 0 1\n", &[m.clone(), m.clone()]).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(parse_points("points\n1 0 0 1\n", &[m.clone(), m]).is_err());
    }

    #[test]
    fn polymap_file() {
        let text = "polymap boolean\nfactors 1 1\ncodomain 1\n\
                    map 0 ; 0 -> 0\nmap 0 ; 1 -> 0\nmap 1 ; 0 -> 0\nmap 1 ; 1 -> 1\n";
        let f = parse_polymap(text, &builtin_resolver).unwrap();
        assert!(f.validate().passed());
        let missing = "polymap boolean\nfactors 1\ncodomain 1\nmap 0 -> 0\n";
        assert!(matches!(parse_polymap(missing, &builtin_resolver), Err(Error::Parse { .. })));
    }
}
