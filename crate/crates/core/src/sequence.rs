//! Scalar sequences k ↦ value used as algorithm parameters (αₖ, βₖ, γₖ,
//! aₖ, bₖ, φₖ).

use std::fmt;
use std::sync::{Arc, Mutex};

type SeqFn = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

enum Inner {
    Const(f64),
    /// (k + r)/r
    Rational(f64),
    /// α₀ = 1, α_{k+1} = (1 + √(1 + 4αₖ²))/2, memoized.
    Fista(Mutex<Vec<f64>>),
    /// Rational rule on even k, FISTA rule applied to α_{k−1} on odd k.
    Alternating(f64),
    /// Explicit values; indices past the end repeat the last entry.
    Table(Arc<Vec<f64>>),
    Func(SeqFn),
}

pub struct Sequence(Inner);

impl Sequence {
    pub fn constant(c: f64) -> Self {
        Sequence(Inner::Const(c))
    }

    /// αₖ = (k + r)/r, so σ_{k+1} = (αₖ − 1)/α_{k+1} = k/(k + r + 1).
    pub fn rational(r: f64) -> Self {
        Sequence(Inner::Rational(r))
    }

    pub fn fista() -> Self {
        Sequence(Inner::Fista(Mutex::new(vec![1.0])))
    }

    /// The two-rule sequence: (k + r)/r for even k and
    /// (1 + √(1 + 4α²_{k−1}))/2 for odd k, with α₀ = 1.
    pub fn alternating(r: f64) -> Self {
        Sequence(Inner::Alternating(r))
    }

    pub fn table(values: Vec<f64>) -> Self {
        assert!(!values.is_empty(), "table sequence needs at least one value");
        Sequence(Inner::Table(Arc::new(values)))
    }

    pub fn from_fn(f: impl Fn(usize) -> f64 + Send + Sync + 'static) -> Self {
        Sequence(Inner::Func(Arc::new(f)))
    }

    pub fn at(&self, k: usize) -> f64 {
        match &self.0 {
            Inner::Const(c) => *c,
            Inner::Rational(r) => (k as f64 + r) / r,
            Inner::Fista(memo) => {
                let mut t = memo.lock().unwrap_or_else(|e| e.into_inner());
                while t.len() <= k {
                    let a = *t.last().unwrap();
                    t.push(fista_next(a));
                }
                t[k]
            }
            Inner::Alternating(r) => {
                if k % 2 == 0 {
                    (k as f64 + r) / r
                } else {
                    fista_next((k as f64 - 1.0 + r) / r)
                }
            }
            Inner::Table(v) => v[k.min(v.len() - 1)],
            Inner::Func(f) => f(k),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.0, Inner::Const(_))
    }
}

pub(crate) fn fista_next(a: f64) -> f64 {
    (1.0 + (1.0 + 4.0 * a * a).sqrt()) / 2.0
}

/// σ_{k+1} = (αₖ − 1)/α_{k+1}.
pub fn sigma_next(alpha: &Sequence, k: usize) -> f64 {
    (alpha.at(k) - 1.0) / alpha.at(k + 1)
}

impl Clone for Sequence {
    fn clone(&self) -> Self {
        Sequence(match &self.0 {
            Inner::Const(c) => Inner::Const(*c),
            Inner::Rational(r) => Inner::Rational(*r),
            Inner::Fista(m) => Inner::Fista(Mutex::new(m.lock().unwrap_or_else(|e| e.into_inner()).clone())),
            Inner::Alternating(r) => Inner::Alternating(*r),
            Inner::Table(v) => Inner::Table(v.clone()),
            Inner::Func(f) => Inner::Func(f.clone()),
        })
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Sequence {
    /// Config-grammar form: `1.5`, `rational:2`, `fista`, `alternating:4`,
    /// `table:1,2,3`; derived sequences print as `<fn>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Inner::Const(c) => write!(f, "{c:?}"),
            Inner::Rational(r) => write!(f, "rational:{r:?}"),
            Inner::Fista(_) => write!(f, "fista"),
            Inner::Alternating(r) => write!(f, "alternating:{r:?}"),
            Inner::Table(v) => {
                let parts: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
                write!(f, "table:{}", parts.join(","))
            }
            Inner::Func(_) => write!(f, "<fn>"),
        }
    }
}

impl std::str::FromStr for Sequence {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad number `{t}`"));
        if s == "fista" {
            return Ok(Sequence::fista());
        }
        if let Some(r) = s.strip_prefix("rational:") {
            return Ok(Sequence::rational(num(r)?));
        }
        if let Some(r) = s.strip_prefix("alternating:") {
            return Ok(Sequence::alternating(num(r)?));
        }
        if let Some(list) = s.strip_prefix("table:") {
            let v = list.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
            return Ok(Sequence::table(v));
        }
        Ok(Sequence::constant(num(s)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_sigma() {
        let a = Sequence::rational(2.0);
        for k in 0..50 {
            let expected = k as f64 / (k as f64 + 3.0);
            assert!((sigma_next(&a, k) - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn fista_equality() {
        let a = Sequence::fista();
        for k in 0..1000 {
            let (ak, an) = (a.at(k), a.at(k + 1));
            assert!((an * (an - 1.0) - ak * ak).abs() <= 1e-12 * ak * ak);
        }
    }

    #[test]
    fn alternating_matches_rules() {
        let a = Sequence::alternating(4.0);
        assert_eq!(a.at(0), 1.0);
        assert_eq!(a.at(2), 1.5);
        assert_eq!(a.at(3), fista_next(1.5));
    }

    #[test]
    fn parse_round_trip() {
        for s in ["1.5", "rational:2.0", "fista", "alternating:4.0", "table:1.0,2.0"] {
            let seq: Sequence = s.parse().unwrap();
            assert_eq!(seq.to_string(), s);
        }
    }
}
