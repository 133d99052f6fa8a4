use crate::error::{Error, Result};

/// Default cap on the number of compositions returned in one call.
pub const DEFAULT_COMPOSITION_BOUND: usize = 1_000_000;

/// A weak composition (r_1, …, r_m) of l with its multinomial coefficient
/// l!/∏ r_μ!.
#[derive(Debug, Clone, PartialEq)]
pub struct Composition {
    pub parts: Vec<u32>,
    pub weight: f64,
}

/// C(l + m − 1, m − 1) as a float (may be huge).
pub fn composition_count(l: u32, m: u32) -> f64 {
    if m == 0 {
        return if l == 0 { 1.0 } else { 0.0 };
    }
    let mut c = 1.0;
    for i in 1..m {
        c *= (l as f64 + i as f64) / i as f64;
    }
    c.round()
}

/// All weak compositions of `l` into `m` parts, first part descending:
/// (2,0), (1,1), (0,2) for l = 2, m = 2.
pub fn enumerate_compositions(l: u32, m: u32) -> Result<Vec<Composition>> {
    enumerate_compositions_bounded(l, m, DEFAULT_COMPOSITION_BOUND)
}

pub fn enumerate_compositions_bounded(l: u32, m: u32, bound: usize) -> Result<Vec<Composition>> {
    if m == 0 {
        return Err(Error::invalid("m", "must be >= 1"));
    }
    let count = composition_count(l, m);
    if count > bound as f64 {
        return Err(Error::TooManyCompositions { count, bound });
    }
    let ln_fact = |k: u32| (1..=k).map(|i| (i as f64).ln()).sum::<f64>();
    let ln_l = ln_fact(l);
    let mut out = Vec::with_capacity(count as usize);
    let mut parts = vec![0u32; m as usize];
    fill(&mut parts, 0, l, &mut |p| {
        let ln_w = ln_l - p.iter().map(|&r| ln_fact(r)).sum::<f64>();
        out.push(Composition {
            parts: p.to_vec(),
            weight: ln_w.exp().round(),
        });
    });
    Ok(out)
}

fn fill(parts: &mut [u32], pos: usize, remaining: u32, emit: &mut dyn FnMut(&[u32])) {
    if pos == parts.len() - 1 {
        parts[pos] = remaining;
        emit(parts);
        return;
    }
    for r in (0..=remaining).rev() {
        parts[pos] = r;
        fill(parts, pos + 1, remaining - r, emit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_row() {
        let c = enumerate_compositions(2, 2).unwrap();
        let got: Vec<(Vec<u32>, f64)> = c.into_iter().map(|c| (c.parts, c.weight)).collect();
        assert_eq!(
            got,
            vec![(vec![2, 0], 1.0), (vec![1, 1], 2.0), (vec![0, 2], 1.0)]
        );
    }

    #[test]
    fn empty_sum() {
        let c = enumerate_compositions(0, 3).unwrap();
        assert_eq!(c, vec![Composition { parts: vec![0, 0, 0], weight: 1.0 }]);
    }

    #[test]
    fn multinomial_total() {
        let c = enumerate_compositions(3, 3).unwrap();
        assert_eq!(c.len(), 10);
        assert_eq!(c.iter().map(|c| c.weight).sum::<f64>(), 27.0);
        for l in 0..8 {
            for m in 1..5 {
                let c = enumerate_compositions(l, m).unwrap();
                assert_eq!(c.len() as f64, composition_count(l, m));
                assert_eq!(c.iter().map(|c| c.weight).sum::<f64>(), (m as f64).powi(l as i32));
                assert!(c.iter().all(|c| c.parts.iter().sum::<u32>() == l));
            }
        }
    }

    #[test]
    fn bound_is_enforced() {
        assert!(matches!(
            enumerate_compositions_bounded(30, 6, 1000),
            Err(Error::TooManyCompositions { .. })
        ));
        assert!(enumerate_compositions(1, 0).is_err());
    }
}
