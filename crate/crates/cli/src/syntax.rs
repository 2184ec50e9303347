//! The `.crisp` script language: parser and pretty-printer.

use std::collections::HashMap;
use std::fmt;

use crisp_core::algebra::expr::{parse_expr_at, Expr};
use crisp_core::algebra::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    Syntax { line: usize, col: usize, message: String },
    UndefinedName { line: usize, col: usize, name: String },
    Redefinition { line: usize, col: usize, name: String },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, col, .. }
            | ParseError::UndefinedName { line, col, .. }
            | ParseError::Redefinition { line, col, .. } => (*line, *col),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { line, col, message } => write!(f, "{line}:{col}: syntax error: {message}"),
            ParseError::UndefinedName { line, col, name } => write!(f, "{line}:{col}: undefined name `{name}`"),
            ParseError::Redefinition { line, col, name } => write!(f, "{line}:{col}: `{name}` is already defined"),
        }
    }
}

impl std::error::Error for ParseError {}

/// A polynomial expression. Equality ignores source positions.
#[derive(Clone, Debug)]
pub struct Ex(pub Expr);

impl PartialEq for Ex {
    fn eq(&self, other: &Ex) -> bool {
        self.0.same_as(&other.0)
    }
}

impl fmt::Display for Ex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum IdealRef {
    Named(String),
    Gens(Vec<Ex>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decl {
    Ring { name: String, field: Field, vars: Vec<String> },
    Quotient { name: String, base: String, ideal: IdealRef },
    Ideal { name: String, ring: Option<String>, gens: Vec<Ex> },
    Map { name: String, source: String, target: String, images: Vec<(String, Ex)> },
    /// `A → ∏ B_i` over the given maps out of `A`; declares the ring `target` too.
    Product { name: String, source: String, target: String, factors: Vec<String> },
    /// `coker A^rank <- A^cols`, matrix given by rows.
    Module { name: String, ring: String, rank: usize, cols: usize, rows: Vec<Vec<Ex>> },
    Prime { name: String, ring: String, gens: Vec<Ex> },
    Cover { name: String, ring: String, pieces: Vec<String>, zariski: Option<Vec<Ex>> },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BudgetOverride {
    pub rank: Option<usize>,
    pub degree: Option<u32>,
    pub candidates: Option<usize>,
    pub time_ms: Option<u64>,
}

impl BudgetOverride {
    pub fn is_empty(&self) -> bool {
        *self == BudgetOverride::default()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FfSpec {
    Zariski(Vec<Ex>),
    Free(Vec<Ex>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Prop {
    /// A tag without arguments, by its script keyword.
    Plain(String),
    Rank(usize),
    SmoothAt(String),
}

pub const PLAIN_PROPS: &[&str] = &[
    "finitely_generated",
    "finitely_presented",
    "flat",
    "projective",
    "finite",
    "finite_type",
    "finite_presentation",
    "integral",
    "unramified",
    "etale",
];

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    CheckCrisp { map: String, budget: BudgetOverride },
    CheckEqualizer { map: String, module: String },
    CheckFlat { map: String },
    CheckCover { cover: String },
    CheckSheaf { map: String },
    CertifySplit { map: String, via: Option<String> },
    CertifyFf { map: String, hint: FfSpec },
    Refute { map: String },
    Descend { prop: Prop, map: String, subject: String },
    ProbeStalk { map: String, prime: String },
    ReportJson { path: String },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Decl(Decl),
    Command(Command),
}

#[derive(Clone, Debug, Default)]
pub struct Script {
    pub items: Vec<Item>,
    /// `(line, col)` of each item.
    pub positions: Vec<(usize, usize)>,
}

impl PartialEq for Script {
    fn eq(&self, other: &Script) -> bool {
        self.items == other.items
    }
}

impl Script {
    pub fn declarations(&self) -> usize {
        self.items.iter().filter(|i| matches!(i, Item::Decl(_))).count()
    }

    pub fn commands(&self) -> usize {
        self.items.len() - self.declarations()
    }
}

#[derive(Clone, Debug)]
enum Sym {
    /// Variables, unknown for product rings until run time.
    Ring(Option<Vec<String>>),
    Ideal(String),
    Map(String, String),
    Module(String),
    Prime(String),
    Cover,
}

impl Sym {
    fn kind(&self) -> &'static str {
        match self {
            Sym::Ring(_) => "ring",
            Sym::Ideal(_) => "ideal",
            Sym::Map(..) => "map",
            Sym::Module(_) => "module",
            Sym::Prime(_) => "prime",
            Sym::Cover => "cover",
        }
    }
}

type PResult<T> = Result<T, ParseError>;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    symbols: HashMap<String, Sym>,
    last_ring: Option<String>,
}

fn is_ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_' || c == b'\''
}

pub fn parse_script(text: &str) -> PResult<Script> {
    let mut p = Parser {
        src: text,
        pos: 0,
        symbols: HashMap::new(),
        last_ring: None,
    };
    let mut script = Script::default();
    loop {
        p.skip_ws();
        if p.pos >= p.src.len() {
            return Ok(script);
        }
        script.positions.push(p.line_col(p.pos));
        let item = p.item()?;
        script.items.push(item);
    }
}

impl<'a> Parser<'a> {
    fn line_col(&self, pos: usize) -> (usize, usize) {
        let before = &self.src[..pos.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rfind('\n').map_or(before.chars().count(), |i| before[i + 1..].chars().count()) + 1;
        (line, col)
    }

    fn syntax<T>(&self, pos: usize, message: impl Into<String>) -> PResult<T> {
        let (line, col) = self.line_col(pos);
        Err(ParseError::Syntax {
            line,
            col,
            message: message.into(),
        })
    }

    fn undefined<T>(&self, pos: usize, name: &str) -> PResult<T> {
        let (line, col) = self.line_col(pos);
        Err(ParseError::UndefinedName {
            line,
            col,
            name: name.to_string(),
        })
    }

    fn bytes(&self) -> &'a [u8] {
        self.src.as_bytes()
    }

    fn skip_ws(&mut self) {
        loop {
            while self.pos < self.src.len() && self.bytes()[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.bytes().get(self.pos) == Some(&b'#') {
                while self.pos < self.src.len() && self.bytes()[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                return;
            }
        }
    }

    fn at(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if !self.src[self.pos..].starts_with(tok) {
            return false;
        }
        let end = self.pos + tok.len();
        let word = tok.bytes().all(is_ident_char);
        !(word && self.bytes().get(end).is_some_and(|&c| is_ident_char(c)))
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.at(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> PResult<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            let found = self.describe_next();
            self.syntax(self.pos, format!("expected `{tok}`, found {found}"))
        }
    }

    fn describe_next(&mut self) -> String {
        self.skip_ws();
        match self.src[self.pos..].chars().next() {
            None => "end of input".into(),
            Some(c) => format!("`{c}`"),
        }
    }

    fn ident(&mut self) -> PResult<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        if !self.bytes().get(start).is_some_and(|&c| is_ident_start(c)) {
            let found = self.describe_next();
            return self.syntax(start, format!("expected a name, found {found}"));
        }
        let mut end = start + 1;
        while self.bytes().get(end).is_some_and(|&c| is_ident_char(c)) {
            end += 1;
        }
        self.pos = end;
        Ok((self.src[start..end].to_string(), start))
    }

    fn number(&mut self) -> PResult<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes().get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        match self.src[start..self.pos].parse() {
            Ok(n) => Ok(n),
            Err(_) => {
                self.pos = start;
                let found = self.describe_next();
                self.syntax(start, format!("expected a number, found {found}"))
            }
        }
    }

    fn string(&mut self) -> PResult<String> {
        self.skip_ws();
        let start = self.pos;
        if self.bytes().get(start) != Some(&b'"') {
            let found = self.describe_next();
            return self.syntax(start, format!("expected a quoted path, found {found}"));
        }
        match self.src[start + 1..].find(['"', '\n']) {
            Some(i) if self.bytes()[start + 1 + i] == b'"' => {
                self.pos = start + i + 2;
                Ok(self.src[start + 1..start + 1 + i].to_string())
            }
            _ => self.syntax(start, "unterminated string"),
        }
    }

    fn fresh(&mut self) -> PResult<(String, usize)> {
        let (name, pos) = self.ident()?;
        if self.symbols.contains_key(&name) {
            let (line, col) = self.line_col(pos);
            return Err(ParseError::Redefinition { line, col, name });
        }
        Ok((name, pos))
    }

    fn lookup(&mut self, kind: &str) -> PResult<(String, Sym)> {
        let (name, pos) = self.ident()?;
        match self.symbols.get(&name) {
            None => self.undefined(pos, &name),
            Some(s) if kind.split('|').any(|k| k == s.kind()) => Ok((name, s.clone())),
            Some(s) => self.syntax(pos, format!("`{name}` is a {}, expected a {}", s.kind(), kind.replace('|', " or "))),
        }
    }

    fn ring_vars(&self, ring: &str) -> Option<Vec<String>> {
        match self.symbols.get(ring) {
            Some(Sym::Ring(v)) => v.clone(),
            _ => Some(Vec::new()),
        }
    }

    fn expr(&mut self, vars: &Option<Vec<String>>) -> PResult<Ex> {
        self.skip_ws();
        match parse_expr_at(self.src, self.pos) {
            Ok((e, end)) => {
                if let Some((name, pos)) = vars.as_ref().and_then(|v| unknown_var(&e, v)) {
                    return self.undefined(pos, &name);
                }
                self.pos = end;
                Ok(Ex(e))
            }
            Err(e) => self.syntax(e.pos, e.message),
        }
    }

    /// `( e, ... )`, possibly empty.
    fn expr_list(&mut self, vars: &Option<Vec<String>>) -> PResult<Vec<Ex>> {
        self.expect("(")?;
        let mut out = Vec::new();
        if self.eat(")") {
            return Ok(out);
        }
        loop {
            out.push(self.expr(vars)?);
            if self.eat(")") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn name_list(&mut self, open: &str, close: &str, kind: &str) -> PResult<Vec<(String, Sym)>> {
        self.expect(open)?;
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.lookup(kind)?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn item(&mut self) -> PResult<Item> {
        let (kw, pos) = self.ident()?;
        let item = match kw.as_str() {
            "ring" => Item::Decl(self.ring()?),
            "ideal" => Item::Decl(self.ideal()?),
            "map" => Item::Decl(self.map()?),
            "module" => Item::Decl(self.module()?),
            "prime" => Item::Decl(self.prime()?),
            "cover" => Item::Decl(self.cover()?),
            "check" => Item::Command(self.check()?),
            "certify" => Item::Command(self.certify()?),
            "refute" => Item::Command(Command::Refute { map: self.lookup("map")?.0 }),
            "descend" => Item::Command(self.descend()?),
            "probe" => {
                self.expect("stalk")?;
                let (map, msym) = self.lookup("map")?;
                self.expect("at")?;
                self.skip_ws();
                let at = self.pos;
                let (prime, psym) = self.lookup("prime")?;
                if let (Sym::Map(_, target), Sym::Prime(ring)) = (&msym, &psym) {
                    if ring != target {
                        return self.syntax(at, format!("`{prime}` is not a prime of `{target}`"));
                    }
                }
                Item::Command(Command::ProbeStalk { map, prime })
            }
            "report" => {
                self.expect("json")?;
                Item::Command(Command::ReportJson { path: self.string()? })
            }
            other => return self.syntax(pos, format!("unknown statement `{other}`")),
        };
        self.expect(";")?;
        Ok(item)
    }

    fn field(&mut self) -> PResult<Field> {
        let (name, pos) = self.ident()?;
        match name.as_str() {
            "QQ" => Ok(Field::Rationals),
            "Fp" => {
                self.expect("<")?;
                let at = self.pos;
                let p = self.number()?;
                self.expect(">")?;
                match u32::try_from(p).ok().and_then(|p| Field::prime(p).ok()) {
                    Some(f) => Ok(f),
                    None => self.syntax(at, format!("{p} is not a supported prime")),
                }
            }
            _ => self.syntax(pos, format!("expected QQ, Fp<p> or a ring name, found `{name}`")),
        }
    }

    fn ring(&mut self) -> PResult<Decl> {
        let (name, _) = self.fresh()?;
        self.expect("=")?;
        self.skip_ws();
        let save = self.pos;
        let (word, _) = self.ident()?;
        let decl = if word != "QQ" && word != "Fp" {
            self.pos = save;
            let (base, sym) = self.lookup("ring")?;
            let Sym::Ring(vars) = sym else { unreachable!() };
            self.expect("/")?;
            let ideal = if self.at("(") {
                IdealRef::Gens(self.expr_list(&vars)?)
            } else {
                let (iname, pos) = self.ident()?;
                match self.symbols.get(&iname) {
                    Some(Sym::Ideal(r)) if *r == base => IdealRef::Named(iname),
                    Some(Sym::Ideal(r)) => return self.syntax(pos, format!("ideal `{iname}` lives in `{r}`, not `{base}`")),
                    Some(s) => return self.syntax(pos, format!("`{iname}` is a {}, expected an ideal", s.kind())),
                    None => return self.undefined(pos, &iname),
                }
            };
            self.symbols.insert(name.clone(), Sym::Ring(vars));
            Decl::Quotient { name, base, ideal }
        } else {
            self.pos = save;
            let field = self.field()?;
            self.expect("[")?;
            let mut vars: Vec<String> = Vec::new();
            if !self.eat("]") {
                loop {
                    let (v, pos) = self.ident()?;
                    if vars.contains(&v) {
                        return self.syntax(pos, format!("variable `{v}` listed twice"));
                    }
                    vars.push(v);
                    if self.eat("]") {
                        break;
                    }
                    self.expect(",")?;
                }
            }
            self.symbols.insert(name.clone(), Sym::Ring(Some(vars.clone())));
            Decl::Ring { name, field, vars }
        };
        self.last_ring = Some(match &decl {
            Decl::Ring { name, .. } | Decl::Quotient { name, .. } => name.clone(),
            _ => unreachable!(),
        });
        Ok(decl)
    }

    fn ideal(&mut self) -> PResult<Decl> {
        let (name, pos) = self.fresh()?;
        let ring = if self.eat("in") { Some(self.lookup("ring")?.0) } else { None };
        let Some(r) = ring.clone().or_else(|| self.last_ring.clone()) else {
            return self.syntax(pos, "no ring declared before this ideal");
        };
        self.expect("=")?;
        let gens = self.expr_list(&self.ring_vars(&r))?;
        self.symbols.insert(name.clone(), Sym::Ideal(r));
        Ok(Decl::Ideal { name, ring, gens })
    }

    fn map(&mut self) -> PResult<Decl> {
        let (name, pos) = self.fresh()?;
        self.expect(":")?;
        let (source, _) = self.lookup("ring")?;
        self.expect("->")?;
        self.skip_ws();
        let tpos = self.pos;
        let (target, _) = self.ident()?;
        self.expect("=")?;
        if self.eat("product") {
            if self.symbols.contains_key(&target) {
                let (line, col) = self.line_col(tpos);
                return Err(ParseError::Redefinition { line, col, name: target });
            }
            let at = self.pos;
            let factors = self.name_list("{", "}", "map")?;
            if factors.is_empty() {
                return self.syntax(at, "a product needs at least one factor");
            }
            for (f, sym) in &factors {
                if let Sym::Map(s, _) = sym {
                    if *s != source {
                        return self.syntax(at, format!("`{f}` does not start at `{source}`"));
                    }
                }
            }
            self.symbols.insert(target.clone(), Sym::Ring(None));
            self.symbols.insert(name.clone(), Sym::Map(source.clone(), target.clone()));
            return Ok(Decl::Product {
                name,
                source,
                target,
                factors: factors.into_iter().map(|(f, _)| f).collect(),
            });
        }
        match self.symbols.get(&target) {
            Some(Sym::Ring(_)) => {}
            Some(s) => return self.syntax(tpos, format!("`{target}` is a {}, expected a ring", s.kind())),
            None => return self.undefined(tpos, &target),
        }
        self.expect("[")?;
        let svars = self.ring_vars(&source).unwrap_or_default();
        let tvars = self.ring_vars(&target);
        let mut images: Vec<(String, Ex)> = Vec::new();
        if !self.eat("]") {
            loop {
                let (v, vpos) = self.ident()?;
                if !svars.contains(&v) {
                    return self.undefined(vpos, &v);
                }
                if images.iter().any(|(w, _)| *w == v) {
                    return self.syntax(vpos, format!("`{v}` is assigned twice"));
                }
                self.expect("->")?;
                images.push((v, self.expr(&tvars)?));
                if self.eat("]") {
                    break;
                }
                self.expect(",")?;
            }
        }
        if let Some(v) = svars.iter().find(|v| !images.iter().any(|(w, _)| w == *v)) {
            return self.syntax(pos, format!("map `{name}` gives no image for `{v}`"));
        }
        self.symbols.insert(name.clone(), Sym::Map(source.clone(), target.clone()));
        Ok(Decl::Map {
            name,
            source,
            target,
            images,
        })
    }

    fn module(&mut self) -> PResult<Decl> {
        let (name, _) = self.fresh()?;
        self.expect("=")?;
        self.expect("coker")?;
        let (ring, _) = self.lookup("ring")?;
        self.expect("^")?;
        let rank = self.number()? as usize;
        self.expect("<-")?;
        let (again, pos) = self.ident()?;
        if again != ring {
            return self.syntax(pos, format!("expected `{ring}`, found `{again}`"));
        }
        self.expect("^")?;
        let cols = self.number()? as usize;
        let vars = self.ring_vars(&ring);
        self.expect("[")?;
        let mut rows = Vec::new();
        if !self.eat("]") {
            loop {
                let at = self.pos;
                self.expect("[")?;
                let mut row = Vec::new();
                if !self.eat("]") {
                    loop {
                        row.push(self.expr(&vars)?);
                        if self.eat("]") {
                            break;
                        }
                        self.expect(",")?;
                    }
                }
                if row.len() != cols {
                    return self.syntax(at, format!("row has {} entries, expected {cols}", row.len()));
                }
                rows.push(row);
                if self.eat("]") {
                    break;
                }
                self.expect(",")?;
            }
        }
        if cols > 0 && rows.len() != rank {
            return self.syntax(self.pos, format!("matrix has {} rows, expected {rank}", rows.len()));
        }
        rows.retain(|r| !r.is_empty());
        self.symbols.insert(name.clone(), Sym::Module(ring.clone()));
        Ok(Decl::Module {
            name,
            ring,
            rank,
            cols,
            rows,
        })
    }

    fn prime(&mut self) -> PResult<Decl> {
        let (name, _) = self.fresh()?;
        self.expect("in")?;
        let (ring, _) = self.lookup("ring")?;
        self.expect("=")?;
        let gens = self.expr_list(&self.ring_vars(&ring))?;
        self.expect("assert_prime")?;
        self.symbols.insert(name.clone(), Sym::Prime(ring.clone()));
        Ok(Decl::Prime { name, ring, gens })
    }

    fn cover(&mut self) -> PResult<Decl> {
        let (name, _) = self.fresh()?;
        self.expect("on")?;
        let (ring, _) = self.lookup("ring")?;
        self.expect("=")?;
        let at = self.pos;
        let pieces = self.name_list("{", "}", "map|ring")?;
        if pieces.is_empty() {
            return self.syntax(at, "a cover needs at least one piece");
        }
        for (piece, sym) in &pieces {
            if let Sym::Map(s, _) = sym {
                if *s != ring {
                    return self.syntax(at, format!("piece `{piece}` does not start at `{ring}`"));
                }
            }
        }
        let zariski = if self.eat("zariski") {
            Some(self.expr_list(&self.ring_vars(&ring))?)
        } else {
            None
        };
        self.symbols.insert(name.clone(), Sym::Cover);
        Ok(Decl::Cover {
            name,
            ring,
            pieces: pieces.into_iter().map(|(n, _)| n).collect(),
            zariski,
        })
    }

    fn check(&mut self) -> PResult<Command> {
        let (what, pos) = self.ident()?;
        Ok(match what.as_str() {
            "crisp" => {
                let map = self.lookup("map")?.0;
                let mut budget = BudgetOverride::default();
                if self.eat("budget") {
                    loop {
                        if self.eat("rank") {
                            budget.rank = Some(self.number()? as usize);
                        } else if self.eat("degree") {
                            budget.degree = Some(self.number()? as u32);
                        } else if self.eat("candidates") {
                            budget.candidates = Some(self.number()? as usize);
                        } else if self.eat("time") {
                            budget.time_ms = Some(self.number()?);
                        } else {
                            break;
                        }
                    }
                    if budget.is_empty() {
                        return self.syntax(self.pos, "expected rank, degree, candidates or time");
                    }
                }
                Command::CheckCrisp { map, budget }
            }
            "equalizer" => {
                let (map, sym) = self.lookup("map")?;
                let Sym::Map(source, _) = sym else { unreachable!() };
                let at = self.pos;
                let (module, msym) = self.lookup("module")?;
                let Sym::Module(r) = msym else { unreachable!() };
                if r != source {
                    return self.syntax(at, format!("module `{module}` is not over `{source}`"));
                }
                Command::CheckEqualizer { map, module }
            }
            "flat" => Command::CheckFlat { map: self.lookup("map")?.0 },
            "cover" => Command::CheckCover { cover: self.lookup("cover")?.0 },
            "sheaf" => Command::CheckSheaf { map: self.lookup("map")?.0 },
            other => return self.syntax(pos, format!("unknown check `{other}`")),
        })
    }

    fn certify(&mut self) -> PResult<Command> {
        let (what, pos) = self.ident()?;
        match what.as_str() {
            "split" => {
                let (map, sym) = self.lookup("map")?;
                let via = if self.eat("via") {
                    let at = self.pos;
                    let (psi, psym) = self.lookup("map")?;
                    if let (Sym::Map(s, t), Sym::Map(ps, pt)) = (&sym, &psym) {
                        if ps != t || pt != s {
                            return self.syntax(at, format!("`{psi}` does not go from `{t}` to `{s}`"));
                        }
                    }
                    Some(psi)
                } else {
                    None
                };
                Ok(Command::CertifySplit { map, via })
            }
            "ff" => {
                let (map, sym) = self.lookup("map")?;
                let Sym::Map(source, target) = sym else { unreachable!() };
                let hint = if self.eat("zariski") {
                    FfSpec::Zariski(self.expr_list(&self.ring_vars(&source))?)
                } else if self.eat("free") {
                    FfSpec::Free(self.expr_list(&self.ring_vars(&target))?)
                } else {
                    let found = self.describe_next();
                    return self.syntax(self.pos, format!("expected `zariski` or `free`, found {found}"));
                };
                Ok(Command::CertifyFf { map, hint })
            }
            other => self.syntax(pos, format!("unknown certificate kind `{other}`")),
        }
    }

    fn descend(&mut self) -> PResult<Command> {
        let mut prime_ring = None;
        let (tag, pos) = self.ident()?;
        let prop = match tag.as_str() {
            "rank" => {
                self.expect("(")?;
                let r = self.number()? as usize;
                self.expect(")")?;
                Prop::Rank(r)
            }
            "smooth_at" => {
                self.expect("(")?;
                self.skip_ws();
                let at = self.pos;
                let (p, psym) = self.lookup("prime")?;
                self.expect(")")?;
                if let Sym::Prime(r) = psym {
                    prime_ring = Some((r, at));
                }
                Prop::SmoothAt(p)
            }
            t if PLAIN_PROPS.contains(&t) => Prop::Plain(tag),
            _ => return self.syntax(pos, format!("unknown property `{tag}`")),
        };
        let (map, sym) = self.lookup("map")?;
        let Sym::Map(source, _) = sym else { unreachable!() };
        if let Some((r, at)) = prime_ring {
            if r != source {
                return self.syntax(at, format!("the prime is not in `{source}`"));
            }
        }
        let at = self.pos;
        let (subject, ssym) = self.lookup("module|map")?;
        let base = match ssym {
            Sym::Module(r) | Sym::Map(r, _) => r,
            _ => unreachable!(),
        };
        if base != source {
            return self.syntax(at, format!("`{subject}` is not over `{source}`"));
        }
        Ok(Command::Descend { prop, map, subject })
    }
}

fn unknown_var(e: &Expr, vars: &[String]) -> Option<(String, usize)> {
    match e {
        Expr::Var(v, pos) if !vars.contains(v) => Some((v.clone(), *pos)),
        Expr::Int(_) | Expr::Frac(..) | Expr::Var(..) => None,
        Expr::Neg(a) | Expr::Pow(a, _) => unknown_var(a, vars),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => unknown_var(a, vars).or_else(|| unknown_var(b, vars)),
    }
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for IdealRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealRef::Named(n) => write!(f, "{n}"),
            IdealRef::Gens(g) => write!(f, "({})", join(g)),
        }
    }
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decl::Ring { name, field, vars } => write!(f, "ring {name} = {field}[{}];", vars.join(", ")),
            Decl::Quotient { name, base, ideal } => write!(f, "ring {name} = {base} / {ideal};"),
            Decl::Ideal { name, ring, gens } => match ring {
                Some(r) => write!(f, "ideal {name} in {r} = ({});", join(gens)),
                None => write!(f, "ideal {name} = ({});", join(gens)),
            },
            Decl::Map {
                name,
                source,
                target,
                images,
            } => {
                let imgs: Vec<String> = images.iter().map(|(v, e)| format!("{v} -> {e}")).collect();
                write!(f, "map {name} : {source} -> {target} = [{}];", imgs.join(", "))
            }
            Decl::Module {
                name,
                ring,
                rank,
                cols,
                rows,
            } => {
                let rows: Vec<String> = rows.iter().map(|r| format!("[{}]", join(r))).collect();
                write!(f, "module {name} = coker {ring}^{rank} <- {ring}^{cols} [{}];", rows.join(", "))
            }
            Decl::Product {
                name,
                source,
                target,
                factors,
            } => write!(f, "map {name} : {source} -> {target} = product {{{}}};", factors.join(", ")),
            Decl::Prime { name, ring, gens } => write!(f, "prime {name} in {ring} = ({}) assert_prime;", join(gens)),
            Decl::Cover {
                name,
                ring,
                pieces,
                zariski,
            } => {
                write!(f, "cover {name} on {ring} = {{{}}}", pieces.join(", "))?;
                if let Some(z) = zariski {
                    write!(f, " zariski ({})", join(z))?;
                }
                write!(f, ";")
            }
        }
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prop::Plain(t) => write!(f, "{t}"),
            Prop::Rank(r) => write!(f, "rank({r})"),
            Prop::SmoothAt(p) => write!(f, "smooth_at({p})"),
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::CheckCrisp { map, budget } => {
                write!(f, "check crisp {map}")?;
                if !budget.is_empty() {
                    write!(f, " budget")?;
                    if let Some(r) = budget.rank {
                        write!(f, " rank {r}")?;
                    }
                    if let Some(d) = budget.degree {
                        write!(f, " degree {d}")?;
                    }
                    if let Some(c) = budget.candidates {
                        write!(f, " candidates {c}")?;
                    }
                    if let Some(t) = budget.time_ms {
                        write!(f, " time {t}")?;
                    }
                }
                write!(f, ";")
            }
            Command::CheckEqualizer { map, module } => write!(f, "check equalizer {map} {module};"),
            Command::CheckFlat { map } => write!(f, "check flat {map};"),
            Command::CheckCover { cover } => write!(f, "check cover {cover};"),
            Command::CheckSheaf { map } => write!(f, "check sheaf {map};"),
            Command::CertifySplit { map, via } => match via {
                Some(v) => write!(f, "certify split {map} via {v};"),
                None => write!(f, "certify split {map};"),
            },
            Command::CertifyFf { map, hint } => match hint {
                FfSpec::Zariski(fs) => write!(f, "certify ff {map} zariski ({});", join(fs)),
                FfSpec::Free(es) => write!(f, "certify ff {map} free ({});", join(es)),
            },
            Command::Refute { map } => write!(f, "refute {map};"),
            Command::Descend { prop, map, subject } => write!(f, "descend {prop} {map} {subject};"),
            Command::ProbeStalk { map, prime } => write!(f, "probe stalk {map} at {prime};"),
            Command::ReportJson { path } => write!(f, "report json \"{path}\";"),
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Decl(d) => write!(f, "{d}"),
            Item::Command(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            writeln!(f, "{item}")?;
        }
        Ok(())
    }
}
