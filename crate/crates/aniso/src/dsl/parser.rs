//! Recursive-descent parser for query files.
//!
//! ```text
//! SPACE   := SCALE '^{' SEXPR (',' WEIGHTS)? '}' '_' PEXPR ('_' QEXPR)? '(' DOMAIN (';' TARGET)? ')'
//!          | 'L_' PEXPR '(' ... ')' | 'C0(' ... ')' | ALIAS
//! SEXPR   := TERM (('+' | '-') TERM)*      TERM := INT ('/' INT)? | INT '/' INT? 'p'
//! DOMAIN  := 'R^' INT | 'R^{' INT ('x' INT)* '}' | ALIAS ('x' ALIAS)*
//! ```

use aniso_core::multiply::MultInstance;
use aniso_core::{AffineExpr, Anisotropy, MultSignature, Rational, Scale, SpaceDescr, TargetSpace};

use super::ast::{Env, Method, Problem, Query, QueryLine, TestFn};
use super::DslError;

/// One line of a query file after parsing.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    Declaration,
    Query(QueryLine),
}

enum OptVal {
    Rat(Rational),
    Tuple(Vec<Rational>),
    Word(String),
}

type Opts = Vec<(String, OptVal, usize)>;

struct Parser<'a> {
    src: Vec<char>,
    pos: usize,
    line: usize,
    env: &'a Env,
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Parser<'a> {
    fn new(text: &str, line: usize, env: &'a Env) -> Self {
        Parser { src: text.chars().collect(), pos: 0, line, env }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, DslError> {
        Err(DslError::Syntax { line: self.line, col: self.col(), msg: msg.into() })
    }

    fn syntax_at<T>(&self, col: usize, msg: impl Into<String>) -> Result<T, DslError> {
        Err(DslError::Syntax { line: self.line, col, msg: msg.into() })
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn starts_with(&self, s: &str) -> bool {
        let chars: Vec<char> = s.chars().collect();
        self.src.len() >= self.pos + chars.len() && self.src[self.pos..self.pos + chars.len()] == chars[..]
    }

    fn eat(&mut self, s: &str) -> bool {
        self.ws();
        if self.starts_with(s) {
            self.pos += s.chars().count();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), DslError> {
        if self.eat(s) {
            Ok(())
        } else {
            let found = self.src.get(self.pos).map(|c| format!("`{}`", c)).unwrap_or_else(|| "end of line".into());
            self.syntax(format!("expected `{}`, found {}", s, found))
        }
    }

    /// Consumes `kw` when it is followed by a non-identifier character.
    fn keyword(&mut self, kw: &str) -> bool {
        self.ws();
        if !self.starts_with(kw) {
            return false;
        }
        let next = self.src.get(self.pos + kw.len()).copied();
        if next.is_some_and(|c| c.is_ascii_alphanumeric()) {
            return false;
        }
        self.pos += kw.len();
        true
    }

    fn ident(&mut self) -> Option<String> {
        self.ws();
        let start = self.pos;
        if !self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphabetic() || *c == '_') {
            return None;
        }
        while self.src.get(self.pos).copied().is_some_and(is_ident) {
            self.pos += 1;
        }
        Some(self.src[start..self.pos].iter().collect())
    }

    fn int(&mut self) -> Result<u64, DslError> {
        self.ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.syntax("expected an integer");
        }
        let text: String = self.src[start..self.pos].iter().collect();
        text.parse().or_else(|_| self.syntax_at(start + 1, format!("integer `{}` out of range", text)))
    }

    fn rational(&mut self) -> Result<Rational, DslError> {
        self.ws();
        let neg = self.eat("-");
        let num = self.int()? as i64;
        let mut value = Rational::integer(num);
        if self.src.get(self.pos) == Some(&'/') {
            self.pos += 1;
            let col = self.col();
            let den = self.int()?;
            if den == 0 {
                return self.syntax_at(col, "zero denominator");
            }
            value = Rational::new(num, den as i64);
        }
        Ok(if neg { -value } else { value })
    }

    fn rational_tuple(&mut self) -> Result<Vec<Rational>, DslError> {
        self.expect("(")?;
        let mut out = vec![self.rational()?];
        while self.eat(",") {
            out.push(self.rational()?);
        }
        self.expect(")")?;
        Ok(out)
    }

    fn opts(&mut self) -> Result<Opts, DslError> {
        let mut out = Vec::new();
        if !self.eat("(") {
            return Ok(out);
        }
        if self.eat(")") {
            return Ok(out);
        }
        loop {
            self.ws();
            let col = self.col();
            let Some(key) = self.ident() else { return self.syntax("expected an option name") };
            if !self.eat("=") {
                out.push((key, OptVal::Word(String::new()), col));
            } else {
                let val = match self.peek() {
                    Some('(') => OptVal::Tuple(self.rational_tuple()?),
                    Some(c) if c.is_ascii_digit() || c == '-' => OptVal::Rat(self.rational()?),
                    _ => match self.ident() {
                        Some(w) => OptVal::Word(w),
                        None => return self.syntax("expected an option value"),
                    },
                };
                out.push((key, val, col));
            }
            if self.eat(")") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn end(&mut self) -> Result<(), DslError> {
        if self.at_end() {
            Ok(())
        } else {
            self.syntax(format!("unexpected `{}`", self.src[self.pos]))
        }
    }

    // ---- spaces ----

    fn literal_scale(&self) -> Option<(Scale, usize)> {
        let next = |k: usize| self.src.get(self.pos + k).copied();
        if self.starts_with("C0") && matches!(next(2), Some('(' | '^')) {
            return Some((Scale::C0, 2));
        }
        let scale = match next(0)? {
            'B' => Scale::B,
            'H' => Scale::H,
            'W' => Scale::W,
            'L' => Scale::L,
            _ => return None,
        };
        matches!(next(1), Some('^' | '_')).then_some((scale, 1))
    }

    fn space(&mut self) -> Result<SpaceDescr, DslError> {
        self.ws();
        if let Some((scale, len)) = self.literal_scale() {
            self.pos += len;
            return self.space_literal(scale);
        }
        let col = self.col();
        match self.ident() {
            Some(name) => match self.env.spaces.get(&name) {
                Some(sp) => Ok(sp.clone()),
                None => Err(DslError::UnknownAlias { line: self.line, col, name }),
            },
            None => self.syntax("expected a space"),
        }
    }

    fn space_literal(&mut self, scale: Scale) -> Result<SpaceDescr, DslError> {
        let mut s = AffineExpr::zero();
        let mut weights = None;
        if self.src.get(self.pos) == Some(&'^') {
            self.pos += 1;
            self.expect("{")?;
            let col = self.col();
            let start = self.pos;
            while self.src.get(self.pos).is_some_and(|c| *c != ',' && *c != '}') {
                self.pos += 1;
            }
            let text: String = self.src[start..self.pos].iter().collect();
            s = parse_sexpr(&text).map_err(|msg| DslError::MalformedExponent { line: self.line, col, msg })?;
            if self.eat(",") {
                let w = self.rational_tuple_ints()?;
                weights = Some(w);
            }
            self.expect("}")?;
            if matches!(scale, Scale::L | Scale::C0) && s != AffineExpr::zero() {
                return Err(DslError::MalformedExponent { line: self.line, col, msg: format!("{} carries no smoothness", scale) });
            }
        } else if !matches!(scale, Scale::L | Scale::C0) {
            return self.syntax(format!("{} needs a smoothness exponent `^{{...}}`", scale));
        }
        let mut x = AffineExpr::zero();
        let mut y = None;
        if scale != Scale::C0 {
            if self.src.get(self.pos) != Some(&'_') {
                return self.syntax("expected `_` before the integrability exponent");
            }
            self.pos += 1;
            x = self.pexpr()?;
            if self.src.get(self.pos) == Some(&'_') {
                let col = self.col();
                self.pos += 1;
                if scale != Scale::B {
                    return Err(DslError::MalformedExponent { line: self.line, col, msg: "only B carries a micro-scale exponent q".into() });
                }
                let q = self.pexpr()?;
                y = if q == AffineExpr::var() {
                    None
                } else {
                    Some(q.as_constant().cloned().expect("q is constant or p"))
                };
            }
        }
        self.expect("(")?;
        let (dims, label, dcol) = self.domain()?;
        let weights = weights.unwrap_or_else(|| vec![1; dims.len()]);
        let aniso = Anisotropy::new(dims, weights).or_else(|e| self.syntax_at(dcol, e.to_string()))?;
        let target = if self.eat(";") { self.target_ref()? } else { TargetSpace::scalar() };
        self.expect(")")?;
        Ok(SpaceDescr::new(scale, s, x, aniso).with_y(y).with_target(target).with_domain(&label))
    }

    fn rational_tuple_ints(&mut self) -> Result<Vec<u32>, DslError> {
        self.expect("(")?;
        let mut out = vec![self.int()? as u32];
        while self.eat(",") {
            out.push(self.int()? as u32);
        }
        self.expect(")")?;
        Ok(out)
    }

    /// `p`, `inf` or a rational exponent; returns `1/p` as an affine expression.
    fn pexpr(&mut self) -> Result<AffineExpr, DslError> {
        let col = self.col();
        if self.keyword("p") {
            return Ok(AffineExpr::var());
        }
        if self.keyword("inf") {
            return Ok(AffineExpr::zero());
        }
        if !self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            return Err(DslError::MalformedExponent { line: self.line, col, msg: "expected `p`, `inf` or a rational exponent".into() });
        }
        let v = self.rational()?;
        match v.recip() {
            Some(x) => Ok(AffineExpr::constant(x)),
            None => Err(DslError::MalformedExponent { line: self.line, col, msg: "exponent 0".into() }),
        }
    }

    fn domain(&mut self) -> Result<(Vec<u32>, String, usize), DslError> {
        self.ws();
        let col = self.col();
        if self.eat("R^") {
            let dims = if self.eat("{") {
                let mut d = vec![self.int()? as u32];
                while self.eat("x") {
                    d.push(self.int()? as u32);
                }
                self.expect("}")?;
                d
            } else {
                vec![self.int()? as u32]
            };
            let label = if dims.len() == 1 {
                format!("R^{}", dims[0])
            } else {
                format!("R^{{{}}}", dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x"))
            };
            return Ok((dims, label, col));
        }
        let Some(name) = self.ident() else { return self.syntax("expected a domain") };
        if let Some(d) = self.env.domains.get(&name) {
            return Ok((d.clone(), name, col));
        }
        let mut dims = Vec::new();
        for part in name.split('x') {
            match self.env.domains.get(part) {
                Some(d) if !part.is_empty() => dims.extend(d),
                _ => return Err(DslError::UnknownAlias { line: self.line, col, name: if part.is_empty() { name.clone() } else { part.into() } }),
            }
        }
        Ok((dims, name, col))
    }

    /// Raw text up to the closing parenthesis at depth zero.
    fn balanced_text(&mut self, stops: &[char]) -> String {
        self.ws();
        let start = self.pos;
        let mut depth = 0usize;
        while let Some(&c) = self.src.get(self.pos) {
            if depth == 0 && (c == ')' || stops.contains(&c)) {
                break;
            }
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            self.pos += 1;
        }
        self.src[start..self.pos].iter().collect::<String>().trim().to_string()
    }

    fn target_ref(&mut self) -> Result<TargetSpace, DslError> {
        self.ws();
        let col = self.col();
        let name = self.balanced_text(&[]);
        self.env.target(&name).ok_or(DslError::UnknownAlias { line: self.line, col, name })
    }

    // ---- queries ----

    fn product(&mut self) -> Result<Vec<SpaceDescr>, DslError> {
        let mut out = vec![self.space()?];
        while self.eat("*") {
            out.push(self.space()?);
        }
        Ok(out)
    }

    fn instance(&self, factors: Vec<SpaceDescr>, target: SpaceDescr) -> Result<MultInstance, DslError> {
        match self.env.signature_for(&factors, &target) {
            Some(sig) => MultInstance::with_signature(factors, target, sig).map_err(|e| DslError::Invalid { line: self.line, msg: e.to_string() }),
            None => Ok(MultInstance::new(factors, target)),
        }
    }

    fn body(&mut self) -> Result<Query, DslError> {
        self.ws();
        let col = self.col();
        if self.keyword("index") {
            return Ok(Query::Index(self.space()?));
        }
        if self.keyword("algebra") {
            return Ok(Query::Algebra(self.space()?));
        }
        if self.keyword("multiplier") {
            let opts = self.opts()?;
            let mut ell = None;
            for (k, v, c) in opts {
                match (k.as_str(), v) {
                    ("ell", OptVal::Rat(r)) if r.is_integer() && r.is_positive() => ell = r.to_i64().map(|v| v as usize),
                    _ => return self.syntax_at(c, format!("unknown multiplier option `{}`", k)),
                }
            }
            let Some(ell) = ell else { return self.syntax_at(col, "multiplier needs `(ell=N)`") };
            let factors = self.product()?;
            self.expect("->")?;
            let target = self.space()?;
            return Ok(Query::Multiplier { inst: self.instance(factors, target)?, ell });
        }
        if self.keyword("nemytskij") {
            let (mut radius, mut vanishing) = (Rational::one(), true);
            for (k, v, c) in self.opts()? {
                match (k.as_str(), v) {
                    ("r", OptVal::Rat(r)) => radius = r,
                    ("vanishing", OptVal::Word(w)) if w == "yes" || w == "no" => vanishing = w == "yes",
                    _ => return self.syntax_at(c, format!("unknown nemytskij option `{}`", k)),
                }
            }
            let mut args = vec![self.space()?];
            while self.eat(",") {
                args.push(self.space()?);
            }
            self.expect("->")?;
            let target = self.space()?;
            return Ok(Query::Nemytskij { args, target, radius, vanishing });
        }
        if self.keyword("interp") {
            let complex = if self.keyword("complex") {
                true
            } else if self.keyword("real") {
                false
            } else {
                return self.syntax("expected `complex` or `real`");
            };
            let (mut theta, mut q) = (None, None);
            for (k, v, c) in self.opts()? {
                match (k.as_str(), v) {
                    ("theta", OptVal::Rat(t)) => theta = Some(t),
                    ("q", OptVal::Word(w)) if !complex && w == "p" => q = None,
                    ("q", OptVal::Word(w)) if !complex && w == "inf" => q = Some(Rational::zero()),
                    ("q", OptVal::Rat(v)) if !complex && v.is_positive() => q = v.recip(),
                    _ => return self.syntax_at(c, format!("unknown interp option `{}`", k)),
                }
            }
            let Some(theta) = theta else { return self.syntax_at(col, "interp needs `theta=...`") };
            let a = self.space()?;
            self.expect(",")?;
            let b = self.space()?;
            let method = if complex { Method::Complex } else { Method::Real(q) };
            return Ok(Query::Interp { method, theta, a, b });
        }
        if self.keyword("realize") || self.keyword("minimize") {
            let realize = self.src[col - 1] == 'r';
            let (mut sigma, mut pi, mut rho, mut n) = (None, None, None, None);
            for (k, v, c) in self.opts()? {
                match (k.as_str(), v) {
                    ("sigma", OptVal::Tuple(t)) => sigma = Some(t),
                    ("pi", OptVal::Tuple(t)) => pi = Some(t),
                    ("rho", OptVal::Rat(r)) if realize => rho = Some(r),
                    ("n", OptVal::Rat(r)) if !realize && r.is_integer() && !r.is_negative() => n = r.to_i64().map(|v| v as u32),
                    _ => return self.syntax_at(c, format!("unknown option `{}`", k)),
                }
            }
            let (Some(sigma), Some(pi)) = (sigma, pi) else { return self.syntax_at(col, "`sigma=(...)` and `pi=(...)` are required") };
            return if realize {
                match rho {
                    Some(rho) => Ok(Query::Realize { sigma, pi, rho }),
                    None => self.syntax_at(col, "realize needs `rho=...`"),
                }
            } else {
                match n {
                    Some(n) => Ok(Query::Minimize { sigma, pi, n }),
                    None => self.syntax_at(col, "minimize needs `n=...`"),
                }
            };
        }
        if self.keyword("seminorm") {
            let func = self.test_fn()?;
            if !self.keyword("in") {
                return self.syntax("expected `in`");
            }
            let space = self.space()?;
            return Ok(Query::Seminorm { func, space });
        }
        if self.keyword("app") {
            let problem = if self.keyword("stefan") {
                Problem::Stefan
            } else if self.keyword("nvs") {
                Problem::Nvs
            } else {
                return self.syntax("expected `stefan` or `nvs`");
            };
            let mut n = None;
            for (k, v, c) in self.opts()? {
                match (k.as_str(), v) {
                    ("n", OptVal::Rat(r)) if r.is_integer() && r >= Rational::integer(2) => n = r.to_i64().map(|v| v as u32),
                    _ => return self.syntax_at(c, format!("unknown app option `{}` (n must be >= 2)", k)),
                }
            }
            let Some(n) = n else { return self.syntax_at(col, "app needs `(n=N)`") };
            return Ok(Query::App { problem, n });
        }
        let factors = self.product()?;
        self.expect("->")?;
        let target = self.space()?;
        if factors.len() == 1 {
            let src = factors.into_iter().next().expect("one factor");
            Ok(Query::Embed { src, dst: target })
        } else {
            Ok(Query::Mult(self.instance(factors, target)?))
        }
    }

    fn test_fn(&mut self) -> Result<TestFn, DslError> {
        self.ws();
        let col = self.col();
        if !self.keyword("gaussian") {
            return self.syntax("expected a test function `gaussian(...)`");
        }
        let mut f = TestFn::default();
        for (k, v, c) in self.opts()? {
            match (k.as_str(), v) {
                ("width", OptVal::Rat(w)) => f.widths = vec![w],
                ("width", OptVal::Tuple(w)) => f.widths = w,
                ("amp", OptVal::Rat(a)) => f.amplitude = a,
                ("freq", OptVal::Rat(a)) => f.frequency = a,
                ("phase", OptVal::Rat(a)) => f.phase = a,
                ("ppw", OptVal::Rat(a)) if a.is_integer() && a.is_positive() => f.ppw = a.to_i64().unwrap_or(16) as u32,
                _ => return self.syntax_at(c, format!("unknown gaussian option `{}`", k)),
            }
        }
        if f.widths.iter().any(|w| !w.is_positive()) {
            return self.syntax_at(col, "widths must be positive");
        }
        Ok(f)
    }

    fn query_line(&mut self) -> Result<QueryLine, DslError> {
        let mut at_p = None;
        if self.keyword("at") {
            if !self.keyword("p") {
                return self.syntax("expected `p` after `at`");
            }
            self.expect("=")?;
            let col = self.col();
            let p = self.rational()?;
            if p < Rational::one() {
                return Err(DslError::MalformedExponent { line: self.line, col, msg: format!("p = {} is below 1", p) });
            }
            self.expect(":")?;
            at_p = Some(p);
        }
        let query = if self.keyword("solve") {
            let col = self.col();
            if !self.keyword("p") {
                return self.syntax("expected `p` after `solve`");
            }
            self.expect(":")?;
            if at_p.is_some() {
                return self.syntax_at(col, "`solve p` cannot be combined with `at p`");
            }
            let inner = self.body()?;
            if !inner.is_decision() {
                return self.syntax_at(col, format!("`solve p` does not apply to {} queries", inner.kind()));
            }
            Query::SolveP(Box::new(inner))
        } else {
            self.body()?
        };
        self.expect("?")?;
        self.end()?;
        Ok(QueryLine { at_p, query })
    }

    fn declaration(&mut self, env: &mut Env) -> Result<bool, DslError> {
        if self.keyword("let") {
            let col = self.col();
            let Some(name) = self.ident() else { return self.syntax("expected a name") };
            self.expect("=")?;
            let save = self.pos;
            let dims = if self.peek() == Some('(') {
                Some(self.rational_tuple_ints()?)
            } else if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                Some(vec![self.int()? as u32])
            } else {
                None
            };
            match dims {
                Some(d) if self.at_end() => {
                    if d.contains(&0) {
                        return self.syntax_at(col, "dimensions must be positive");
                    }
                    if name.contains('x') {
                        return self.syntax_at(col, "domain alias names may not contain `x`");
                    }
                    env.domains.insert(name, d);
                }
                _ => {
                    self.pos = save;
                    let sp = self.space()?;
                    self.end()?;
                    env.spaces.insert(name, sp);
                }
            }
            return Ok(true);
        }
        if self.keyword("target") {
            let name = self.balanced_text(&[':']);
            if name.is_empty() {
                return self.syntax("expected a target name");
            }
            self.expect(":")?;
            let mut flags = [false; 4];
            loop {
                let col = self.col();
                match self.ident().as_deref() {
                    Some("umd") => flags[0] = true,
                    Some("alpha") => flags[1] = true,
                    Some("algebra") => flags[2] = true,
                    Some("unital") => flags[3] = true,
                    Some("none") => {}
                    _ => return self.syntax_at(col, "expected one of umd, alpha, algebra, unital, none"),
                }
                if !self.eat(",") {
                    break;
                }
            }
            self.end()?;
            let t = TargetSpace::new(&name, flags[0], flags[1], flags[2], flags[3]).or_else(|e| self.syntax(e.to_string()))?;
            env.targets.insert(name, t);
            return Ok(true);
        }
        if self.keyword("signature") {
            let rest: String = self.src[self.pos..].iter().collect();
            let Some((lhs, rhs)) = rest.split_once("->") else { return self.syntax("expected `->` in signature") };
            let col = self.col();
            let lookup = |n: &str| env.target(n.trim()).ok_or(DslError::UnknownAlias { line: self.line, col, name: n.trim().into() });
            let factors = lhs.split('*').map(lookup).collect::<Result<Vec<_>, _>>()?;
            let result = lookup(rhs)?;
            env.signatures.push(MultSignature::registered(factors, result));
            return Ok(true);
        }
        Ok(false)
    }
}

/// `SEXPR` as an affine function of `x = 1/p`.
pub fn parse_sexpr(text: &str) -> Result<AffineExpr, String> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err("empty exponent".into());
    }
    let mut i = 0;
    let mut out = AffineExpr::zero();
    let read_int = |i: &mut usize| -> Result<i64, String> {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        if start == *i {
            return Err(format!("expected a number at offset {}", start));
        }
        chars[start..*i].iter().collect::<String>().parse().map_err(|_| "number out of range".to_string())
    };
    let mut first = true;
    while i < chars.len() {
        let sign = match chars[i] {
            '+' if !first => {
                i += 1;
                1
            }
            '-' => {
                i += 1;
                -1
            }
            _ if first => 1,
            c => return Err(format!("unexpected `{}`", c)),
        };
        first = false;
        if i < chars.len() && chars[i] == 'p' {
            return Err("p may only appear as 1/p".into());
        }
        let num = read_int(&mut i)?;
        if i < chars.len() && chars[i] == '/' {
            i += 1;
            if i < chars.len() && chars[i] == 'p' {
                i += 1;
                out.slope += &Rational::integer(sign * num);
                continue;
            }
            let den = read_int(&mut i)?;
            if den == 0 {
                return Err("zero denominator".into());
            }
            let term = Rational::new(sign * num, den);
            if i < chars.len() && chars[i] == 'p' {
                i += 1;
                out.slope += &term;
            } else {
                out.constant += &term;
            }
        } else {
            if i < chars.len() && chars[i] == 'p' {
                return Err("p may only appear as 1/p".into());
            }
            out.constant += &Rational::integer(sign * num);
        }
    }
    Ok(out)
}

/// Strips a `#` comment.
fn code(line: &str) -> &str {
    line.split_once('#').map_or(line, |(c, _)| c)
}

/// Parses one line, updating `env` on declarations.
pub fn parse_line(env: &mut Env, text: &str, line: usize) -> Result<Option<Stmt>, DslError> {
    let text = code(text);
    if text.trim().is_empty() {
        return Ok(None);
    }
    let snapshot = env.clone();
    let mut p = Parser::new(text, line, &snapshot);
    if p.declaration(env)? {
        return Ok(Some(Stmt::Declaration));
    }
    let mut p = Parser::new(text, line, env);
    Ok(Some(Stmt::Query(p.query_line()?)))
}

/// Parses a whole file; declarations apply to the lines below them.
pub fn parse_program(env: &mut Env, src: &str) -> Result<Vec<(usize, QueryLine)>, DslError> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        if let Some(Stmt::Query(q)) = parse_line(env, line, i + 1)? {
            out.push((i + 1, q));
        }
    }
    Ok(out)
}

/// Parses a single query against `env`.
pub fn parse_query(env: &Env, text: &str) -> Result<QueryLine, DslError> {
    let mut p = Parser::new(code(text), 1, env);
    p.query_line()
}
