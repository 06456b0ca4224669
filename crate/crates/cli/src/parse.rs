//! Text forms accepted on the command line.

use ptmoments::scalar::parse_exact;
use ptmoments::{Error, ExactScalar, Permutation, Result, SetPartition};

pub fn exact(s: &str) -> Result<ExactScalar> {
    parse_exact(s).ok_or_else(|| Error::InvalidParameter(format!("cannot read {s:?} as an exact number")))
}

pub fn exact_list(s: &str) -> Result<Vec<ExactScalar>> {
    s.split(',').map(exact).collect()
}

/// 1-based cycle notation: `"(1,2,3)(4,5)"`, `"(123)(45)"` or `"id"`.
pub fn permutation(p: usize, s: &str) -> Result<Permutation> {
    let s = s.trim();
    if s.is_empty() || s == "id" || s == "()" {
        return Ok(Permutation::identity(p));
    }
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let open = rest.strip_prefix('(').ok_or_else(|| bad_perm(s))?;
        let close = open.find(')').ok_or_else(|| bad_perm(s))?;
        let body = &open[..close];
        let cycle: Vec<usize> = if body.contains(',') {
            body.split(',').map(|t| t.trim().parse().map_err(|_| bad_perm(s))).collect::<Result<_>>()?
        } else {
            body.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| bad_perm(s))).collect::<Result<_>>()?
        };
        cycles.push(cycle);
        rest = open[close + 1..].trim_start();
    }
    let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
    Permutation::from_cycles(p, &refs)
}

fn bad_perm(s: &str) -> Error {
    Error::InvalidPermutation(format!("{s:?} is not cycle notation like (1,2,3)(4,5)"))
}

/// `"{{1},{2,3,6},{4,5}}"`; the degree defaults to the largest label.
pub fn partition(s: &str, p: Option<usize>) -> Result<SetPartition> {
    let bad = || Error::InvalidPartition(format!("{s:?} is not of the form {{{{1}},{{2,3}}}}"));
    let inner = s.trim().strip_prefix('{').and_then(|t| t.strip_suffix('}')).ok_or_else(bad)?;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let open = rest.strip_prefix('{').ok_or_else(bad)?;
        let close = open.find('}').ok_or_else(bad)?;
        let block = open[..close]
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        blocks.push(block);
        rest = open[close + 1..].trim_start().trim_start_matches(',').trim_start();
    }
    let degree = p.unwrap_or_else(|| blocks.iter().flatten().copied().max().unwrap_or(0));
    let refs: Vec<&[usize]> = blocks.iter().map(|b| b.as_slice()).collect();
    SetPartition::from_one_based(degree, &refs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations() {
        let a = permutation(3, "(123)").unwrap();
        assert_eq!(a.to_string(), "(123)");
        assert_eq!(permutation(5, "(1,2)(3,5)").unwrap(), permutation(5, "(12)(35)").unwrap());
        assert_eq!(permutation(4, "id").unwrap(), Permutation::identity(4));
        assert!(permutation(3, "(124)").is_err());
        assert!(permutation(3, "12").is_err());
    }

    #[test]
    fn partitions() {
        let t = partition("{{1},{2,3,6},{4,5}}", None).unwrap();
        assert_eq!(t.to_string(), "{{1},{2,3,6},{4,5}}");
        assert_eq!(partition("{{2,1}}", Some(2)).unwrap().degree(), 2);
        assert!(partition("{1,2}", None).is_err());
    }

    #[test]
    fn numbers() {
        assert_eq!(exact("3/6").unwrap(), exact("0.5").unwrap());
        assert!(exact("x").is_err());
        assert_eq!(exact_list("1,2/3").unwrap().len(), 2);
    }
}
