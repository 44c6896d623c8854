//! The family mini-language: terms joined by `+`.
//!
//! - `farey:N` curves of Farey level at most `N`
//! - `arcs:N` the same curves together with their dual arcs
//! - `iter:p/q:K` the orbit of slope `p/q` under `--map`, `k = −K..K`

use teich::mcg::MappingClass;
use teich::metrics::{farey_family, iterate_family, TorusFamily};
use teich::torus::Slope;

pub fn parse(spec: &str, map: Option<&MappingClass>) -> Result<TorusFamily, String> {
    let mut out: Option<TorusFamily> = None;
    for term in spec.split('+').map(str::trim) {
        let fam = parse_term(term, map)?;
        out = Some(match out {
            Some(acc) => acc.union(&fam),
            None => fam,
        });
    }
    out.ok_or_else(|| "empty family specification".into())
}

fn parse_term(term: &str, map: Option<&MappingClass>) -> Result<TorusFamily, String> {
    let level = |s: &str| {
        s.parse::<u32>()
            .map_err(|e| format!("bad level {s:?} in {term:?}: {e}"))
    };
    let (kind, rest) = term
        .split_once(':')
        .ok_or_else(|| format!("family term {term:?} lacks ':'"))?;
    match kind {
        "farey" => farey_family(level(rest)?).map_err(|e| e.to_string()),
        "arcs" => farey_family(level(rest)?)
            .map(|f| f.with_dual_arcs())
            .map_err(|e| e.to_string()),
        "iter" => {
            let map = map.ok_or("iter: terms need --map")?;
            let (slope, k) = rest
                .rsplit_once(':')
                .ok_or_else(|| format!("expected iter:p/q:K, got {term:?}"))?;
            let base: Slope = slope.parse().map_err(|e| format!("{e}"))?;
            iterate_family(map, base, level(k)?).map_err(|e| e.to_string())
        }
        _ => Err(format!("unknown family kind {kind:?}; expected farey, arcs or iter")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unions() {
        let f = parse("farey:2+arcs:1", None).unwrap();
        assert_eq!(f.len(), farey_family(2).unwrap().len() + farey_family(1).unwrap().len());
        assert!(f.has_arcs());
        let cat: MappingClass = "[[2,1],[1,1]]".parse().unwrap();
        let g = parse("iter:1/0:2", Some(&cat)).unwrap();
        assert_eq!(g.len(), 5);
    }

    #[test]
    fn errors() {
        assert!(parse("farey", None).is_err());
        assert!(parse("farey:x", None).is_err());
        assert!(parse("iter:1/0:2", None).is_err());
        assert!(parse("hex:3", None).is_err());
    }
}
