//! Generator names, word parsing and canonical word formatting.
//!
//! Words are generator names with optional integer exponents, separated by
//! whitespace or `*`: `a b^-1 c^2`. A run of names written without
//! separators (`xyxy`, `e1e2`) is split by longest match. `1` is the
//! identity.

use super::{unitriangular, GroupElement, GroupSpec, RadixFraction};
use crate::error::{Error, Result};

const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";

fn letter(i: usize) -> String {
    (LETTERS[i] as char).to_string()
}

impl GroupSpec {
    /// The named generators of the presentation, in canonical print order.
    pub fn generators(self) -> Vec<(String, GroupElement)> {
        use GroupElement as E;
        match self {
            GroupSpec::FreeAbelian(d) => (0..d as usize)
                .map(|i| {
                    let mut v = vec![0; d as usize];
                    v[i] = 1;
                    let name = if d <= 3 { letter(i) } else { format!("e{}", i + 1) };
                    (name, E::Abelian(v))
                })
                .collect(),
            GroupSpec::Heisenberg(n) => {
                let len = 2 * n as usize + 1;
                let mut out = Vec::new();
                for i in 0..n as usize {
                    for (slot, base) in [(2 * i, "a"), (2 * i + 1, "b")] {
                        let mut v = vec![0; len];
                        v[slot] = 1;
                        let name = if n == 1 {
                            base.to_string()
                        } else {
                            format!("{base}{}", i + 1)
                        };
                        out.push((name, E::Heisenberg(v)));
                    }
                }
                let mut c = vec![0; len];
                c[len - 1] = 1;
                out.push(("c".to_string(), E::Heisenberg(c)));
                out
            }
            GroupSpec::Unitriangular(n) => {
                let d = n as usize + 2;
                let mut out = Vec::new();
                for i in 0..d {
                    for j in i + 1..d {
                        let mut v = vec![0; unitriangular::entry_count(n)];
                        v[unitriangular::index(n, i, j)] = 1;
                        let name = if d <= 9 {
                            format!("a{}{}", i + 1, j + 1)
                        } else {
                            format!("a{}_{}", i + 1, j + 1)
                        };
                        out.push((name, E::Unitriangular(v)));
                    }
                }
                out
            }
            GroupSpec::FreeGroup(r) => (0..r as usize)
                .map(|i| {
                    let name = if r <= 26 { letter(i) } else { format!("a{}", i + 1) };
                    (name, E::Free(vec![i as i32 + 1]))
                })
                .collect(),
            GroupSpec::BaumslagSolitar(_) => vec![
                (
                    "a".into(),
                    E::BaumslagSolitar { t: 1, r: RadixFraction::zero() },
                ),
                (
                    "b".into(),
                    E::BaumslagSolitar { t: 0, r: RadixFraction::integer(1) },
                ),
            ],
            GroupSpec::WreathZmodK(k) => {
                let mut lamps = vec![0; k as usize];
                lamps[0] = 1;
                vec![
                    ("a".into(), E::WreathZmodK { lamps, rotor: 0 }),
                    (
                        "b".into(),
                        E::WreathZmodK { lamps: vec![0; k as usize], rotor: 1 % k },
                    ),
                ]
            }
            GroupSpec::WreathZ => vec![
                ("a".into(), E::WreathZ { lamps: vec![(0, 1)], rotor: 0 }),
                ("b".into(), E::WreathZ { lamps: vec![], rotor: 1 }),
            ],
            GroupSpec::FreeProductCyclic(_) => vec![
                ("x".into(), E::FreeProductCyclic(vec![(0, 1)])),
                ("y".into(), E::FreeProductCyclic(vec![(1, 1)])),
            ],
            GroupSpec::FreeTimesCyclic(k) => {
                let mut out: Vec<_> = (0..k as i32)
                    .map(|i| {
                        (
                            format!("a{}", i + 1),
                            E::FreeTimesCyclic { word: vec![i + 1], rotor: 0 },
                        )
                    })
                    .collect();
                out.push((
                    "b".into(),
                    E::FreeTimesCyclic { word: vec![], rotor: 1 % k },
                ));
                out
            }
        }
    }

    /// Names accepted besides the canonical ones.
    fn aliases(self) -> Vec<(String, GroupElement)> {
        let gens = self.generators();
        let mut out = Vec::new();
        match self {
            GroupSpec::FreeAbelian(d) => {
                for (i, (_, g)) in gens.iter().enumerate() {
                    out.push((format!("e{}", i + 1), g.clone()));
                    if (i as u32) < d.min(26) {
                        out.push((letter(i), g.clone()));
                    }
                }
            }
            GroupSpec::Heisenberg(n) => {
                if n > 1 {
                    out.push(("a".into(), gens[0].1.clone()));
                    out.push(("b".into(), gens[1].1.clone()));
                } else {
                    out.push(("a1".into(), gens[0].1.clone()));
                    out.push(("b1".into(), gens[1].1.clone()));
                }
            }
            GroupSpec::Unitriangular(n) => {
                let d = n as usize + 2;
                let mut idx = 0;
                for i in 0..d {
                    for j in i + 1..d {
                        out.push((format!("a{}_{}", i + 1, j + 1), gens[idx].1.clone()));
                        if i == 0 && j == d - 1 {
                            out.push(("c".into(), gens[idx].1.clone()));
                        }
                        idx += 1;
                    }
                }
            }
            GroupSpec::FreeGroup(_) => {
                for (i, (_, g)) in gens.iter().enumerate() {
                    out.push((format!("a{}", i + 1), g.clone()));
                }
            }
            _ => {}
        }
        out
    }

    fn name_table(self) -> Vec<(String, GroupElement)> {
        let mut table = self.generators();
        for (name, g) in self.aliases() {
            if !table.iter().any(|(n, _)| *n == name) {
                table.push((name, g));
            }
        }
        table
    }

    pub fn generator(self, name: &str) -> Option<GroupElement> {
        self.name_table()
            .into_iter()
            .find(|(n, _)| n == name)
            .map(|(_, g)| g)
    }

    /// The positive generating set S used for balls and orders by default.
    pub fn default_generators(self) -> Vec<GroupElement> {
        let named = |w: &str| self.parse_word(w).expect("built-in generator word");
        match self {
            GroupSpec::FreeAbelian(_) | GroupSpec::FreeGroup(_) | GroupSpec::BaumslagSolitar(_) => {
                self.generators().into_iter().map(|(_, g)| g).collect()
            }
            GroupSpec::Heisenberg(_) => {
                let mut gens: Vec<_> = self.generators().into_iter().map(|(_, g)| g).collect();
                gens.pop(); // drop c
                gens
            }
            GroupSpec::Unitriangular(_) => {
                self.generators().into_iter().map(|(_, g)| g).collect()
            }
            GroupSpec::WreathZmodK(_) | GroupSpec::WreathZ => vec![named("a"), named("a b")],
            GroupSpec::FreeProductCyclic(_) => vec![named("x y"), named("x^2 y^2")],
            GroupSpec::FreeTimesCyclic(k) => {
                let mut gens: Vec<_> = (1..=k).map(|i| named(&format!("a{i}"))).collect();
                gens.push(named("a1 b"));
                gens
            }
        }
    }

    /// Splits an identifier that may be several generator names run together.
    pub(crate) fn split_identifier(self, ident: &str) -> Result<Vec<GroupElement>> {
        let table = self.name_table();
        if let Some((_, g)) = table.iter().find(|(n, _)| n == ident) {
            return Ok(vec![g.clone()]);
        }
        let mut out = Vec::new();
        let mut rest = ident;
        while !rest.is_empty() {
            let best = table
                .iter()
                .filter(|(n, _)| rest.starts_with(n.as_str()))
                .max_by_key(|(n, _)| n.len())
                .ok_or_else(|| {
                    Error::parse(format!("unknown generator `{ident}` for {self}"))
                })?;
            out.push(best.1.clone());
            rest = &rest[best.0.len()..];
        }
        Ok(out)
    }

    /// Parses a word such as `a b^-1 c^2`.
    pub fn parse_word(self, text: &str) -> Result<GroupElement> {
        let mut acc = self.identity();
        for token in text
            .split(|c: char| c.is_whitespace() || c == '*' || c == '·')
            .filter(|t| !t.is_empty())
        {
            let (base, exp) = match token.split_once('^') {
                Some((b, e)) => {
                    let e = e.trim_matches(|c| c == '(' || c == ')' || c == '{' || c == '}');
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::parse(format!("bad exponent in `{token}`")))?;
                    (b, e)
                }
                None => (token, 1),
            };
            if base == "1" {
                continue;
            }
            let parts = self.split_identifier(base)?;
            let last = parts.len() - 1;
            for (i, g) in parts.iter().enumerate() {
                let e = if i == last { exp } else { 1 };
                acc = self.mul(&acc, &self.pow(g, e));
            }
        }
        Ok(acc)
    }

    /// Canonical word for `g`; `parse_word` inverts it.
    pub fn format_element(self, g: &GroupElement) -> String {
        let names: Vec<String> = self.generators().into_iter().map(|(n, _)| n).collect();
        let mut factors: Vec<(String, i64)> = Vec::new();
        let mut push = |name: &str, e: i64| {
            if e == 0 {
                return;
            }
            match factors.last_mut() {
                Some(last) if last.0 == name => last.1 += e,
                _ => factors.push((name.to_string(), e)),
            }
            if factors.last().is_some_and(|l| l.1 == 0) {
                factors.pop();
            }
        };
        use GroupElement as E;
        match (self, g) {
            (_, E::Abelian(v)) | (_, E::Heisenberg(v)) => {
                for (name, &e) in names.iter().zip(v) {
                    push(name, e);
                }
            }
            (GroupSpec::Unitriangular(n), E::Unitriangular(v)) => {
                for (i, j, t) in unitriangular::elementary_factors(n, v) {
                    let slot = unitriangular::index(n, i, j);
                    push(&names[slot], t);
                }
            }
            (_, E::Free(w)) => {
                for &l in w {
                    push(&names[l.unsigned_abs() as usize - 1], l.signum() as i64);
                }
            }
            (_, E::BaumslagSolitar { t, r }) => {
                // x ↦ nᵗx + r is a^{-e} b^{num} a^{e+t} when r = num / n^e
                let e = r.exp as i64;
                push("a", -e);
                push("b", r.num as i64);
                push("a", e + t);
            }
            (_, E::WreathZmodK { lamps, rotor }) => {
                let mut pos = 0i64;
                for (i, &v) in lamps.iter().enumerate() {
                    if v != 0 {
                        push("b", i as i64 - pos);
                        push("a", v);
                        pos = i as i64;
                    }
                }
                push("b", *rotor as i64 - pos);
            }
            (_, E::WreathZ { lamps, rotor }) => {
                let mut pos = 0i64;
                for &(p, v) in lamps {
                    push("b", p - pos);
                    push("a", v);
                    pos = p;
                }
                push("b", rotor - pos);
            }
            (_, E::FreeProductCyclic(s)) => {
                for &(f, e) in s {
                    push(if f == 0 { "x" } else { "y" }, e as i64);
                }
            }
            (_, E::FreeTimesCyclic { word, rotor }) => {
                for &l in word {
                    push(&names[l.unsigned_abs() as usize - 1], l.signum() as i64);
                }
                push("b", *rotor as i64);
            }
            _ => panic!("element family does not match {self}: {g:?}"),
        }
        if factors.is_empty() {
            return "1".into();
        }
        factors
            .iter()
            .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_parse_with_exponents_and_runs() {
        let f2 = GroupSpec::FreeGroup(2);
        assert_eq!(f2.parse_word("a b^-1").unwrap(), GroupElement::Free(vec![1, -2]));
        assert_eq!(f2.parse_word("ab^2").unwrap(), GroupElement::Free(vec![1, 2, 2]));
        assert_eq!(f2.parse_word("1").unwrap(), f2.identity());
        assert_eq!(f2.parse_word("").unwrap(), f2.identity());
        assert!(f2.parse_word("q").is_err());
        assert!(f2.parse_word("a^x").is_err());

        let fp = GroupSpec::FreeProductCyclic(3);
        assert_eq!(
            fp.parse_word("xyxy").unwrap(),
            GroupElement::FreeProductCyclic(vec![(0, 1), (1, 1), (0, 1), (1, 1)])
        );
        let z5 = GroupSpec::FreeAbelian(5);
        assert_eq!(z5.parse_word("e1e2").unwrap(), GroupElement::Abelian(vec![1, 1, 0, 0, 0]));
        assert_eq!(z5.parse_word("e").unwrap(), GroupElement::Abelian(vec![0, 0, 0, 0, 1]));
    }

    #[test]
    fn formatting_round_trips() {
        let specs = [
            GroupSpec::FreeAbelian(2),
            GroupSpec::FreeAbelian(5),
            GroupSpec::Heisenberg(1),
            GroupSpec::Heisenberg(2),
            GroupSpec::Unitriangular(1),
            GroupSpec::Unitriangular(2),
            GroupSpec::FreeGroup(3),
            GroupSpec::BaumslagSolitar(2),
            GroupSpec::BaumslagSolitar(3),
            GroupSpec::WreathZmodK(3),
            GroupSpec::WreathZ,
            GroupSpec::FreeProductCyclic(4),
            GroupSpec::FreeTimesCyclic(3),
        ];
        for spec in specs {
            let ball = crate::group::enumerate_ball(spec, &spec.default_generators(), 3).unwrap();
            for g in ball {
                let text = spec.format_element(&g);
                assert_eq!(spec.parse_word(&text).unwrap(), g, "{spec}: `{text}`");
            }
        }
    }
}
