use num_integer::binomial;
use serde::Serialize;

/// Known data about `P` feeding the inequality ladder.
#[derive(Clone, Debug)]
pub struct InequalityInput {
    /// `h*_0..h*_d`.
    pub hstar: Vec<u64>,
    pub idp: bool,
    pub reflexive: bool,
    /// Height bound for the generators of the interior of the cone.
    pub j: Option<u32>,
    /// `dim (A/ℓA)^i` for `i = 0..`, when measured.
    pub quotient_dims: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inequality {
    pub name: String,
    pub applicable: bool,
    pub holds: bool,
}

fn entry(name: &str, applicable: bool, holds: bool) -> Inequality {
    Inequality { name: name.into(), applicable, holds: !applicable || holds }
}

/// `n^{<i>}`: shift every binomial of the `i`-binomial expansion of `n` up by one.
fn macaulay_bound(mut n: u64, i: u64) -> u64 {
    let mut out = 0;
    let mut k = i;
    while n > 0 && k > 0 {
        let mut a = k;
        while binomial(a + 1, k) <= n {
            a += 1;
        }
        n -= binomial(a, k);
        out += binomial(a + 1, k + 1);
        k -= 1;
    }
    out
}

/// Macaulay's criterion for `(1, g_1, g_2, …)`.
pub fn is_m_vector(g: &[i64]) -> bool {
    if g.iter().any(|&x| x < 0) {
        return false;
    }
    if g.first().is_some_and(|&g0| g0 != 1) {
        return false;
    }
    (1..g.len().saturating_sub(1)).all(|i| g[i + 1] as u64 <= macaulay_bound(g[i] as u64, i as u64))
}

/// Every applicable inequality on `h*`; inapplicable ones are listed as holding.
pub fn hstar_inequality_report(input: &InequalityInput) -> Vec<Inequality> {
    let h: Vec<i64> = input.hstar.iter().map(|&x| x as i64).collect();
    let d = h.len() - 1;
    let at = |k: usize| h.get(k).copied().unwrap_or(0);
    let s = h.iter().rposition(|&x| x != 0).unwrap_or(0);
    let idp = input.idp;
    let gor = input.idp && input.reflexive;
    let mut out = vec![entry("h0-is-one", true, h[0] == 1), entry("nonnegative", true, h.iter().all(|&x| x >= 0))];

    let partial = (0..=s).all(|k| (0..=k).map(at).sum::<i64>() <= (0..=k).map(|i| at(s - i)).sum::<i64>());
    out.push(entry("domain-partial-sums", true, partial));

    let lo = d.div_ceil(2);
    out.push(entry("second-half-decreasing", idp, (lo..=d).all(|k| at(k) >= at(k + 1))));
    out.push(entry("dominates-complement", idp, (0..=d.div_ceil(2)).all(|k| at(k) >= at(d + 1 - k))));

    let level = input.j.filter(|&j| idp && j as usize <= d + 1);
    let (ok_inc, ok_cmp) = match level {
        Some(j) => {
            let r = d + 1 - j as usize;
            let inc = (0..r.div_ceil(2)).all(|k| at(k) <= at(k + 1));
            let cmp = (0..=r / 2).all(|k| at(k) <= at(r - k));
            (inc, cmp)
        }
        None => (true, true),
    };
    out.push(entry("initial-increasing", level.is_some(), ok_inc));
    out.push(entry("bounded-by-level-complement", level.is_some(), ok_cmp));

    out.push(entry("palindromic", input.reflexive, (0..=d).all(|k| at(k) == at(d - k))));
    let peak = h.iter().enumerate().max_by_key(|(i, &x)| (x, std::cmp::Reverse(*i))).map_or(0, |(i, _)| i);
    let unimodal = (0..peak).all(|k| at(k) <= at(k + 1)) && (peak..d).all(|k| at(k) >= at(k + 1));
    out.push(entry("unimodal", gor, unimodal));

    let diffs: Vec<i64> = std::iter::once(1).chain((1..=d / 2).map(|i| at(i) - at(i - 1))).collect();
    out.push(entry("m-vector", gor, is_m_vector(&diffs)));
    if let Some(q) = &input.quotient_dims {
        let ok = (1..=d / 2).all(|i| q.get(i).map(|&x| x as i64) == Some((at(i) - at(i - 1)).max(0)));
        out.push(entry("quotient-hilbert-function", gor, ok));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(h: &[u64], idp: bool, reflexive: bool, j: Option<u32>) -> InequalityInput {
        InequalityInput { hstar: h.to_vec(), idp, reflexive, j, quotient_dims: None }
    }

    #[test]
    fn macaulay() {
        assert_eq!(macaulay_bound(3, 1), 6);
        assert_eq!(macaulay_bound(4, 2), 5);
        assert!(is_m_vector(&[1, 3, 6, 10]));
        assert!(!is_m_vector(&[1, 2, 4]));
        assert!(is_m_vector(&[1, 22]));
    }

    #[test]
    fn ladder() {
        assert!(hstar_inequality_report(&input(&[1, 23, 23, 1], true, true, Some(1))).iter().all(|i| i.holds));
        assert!(hstar_inequality_report(&input(&[1, 6, 1], true, true, Some(1))).iter().all(|i| i.holds));
        let reeve = hstar_inequality_report(&input(&[1, 0, 1, 0], false, false, None));
        assert!(reeve.iter().all(|i| i.holds));
        assert!(reeve.iter().filter(|i| i.applicable).count() == 3);
        let forced = hstar_inequality_report(&input(&[1, 0, 1, 0], true, true, None));
        assert!(forced.iter().any(|i| !i.holds));
    }
}
