use std::collections::BTreeMap;

use super::{check_budget, common_cells, point_label, require_char, tuples, IdentityError, IdentityReport};
use crate::algebra::{Element, Theta};
use crate::geometry::{intlin, LatticePoint};
use crate::scalar::FiniteField;
use crate::volume::VolumeFunctional;

/// One surviving summand of the char-2 identity.
#[derive(Clone, Debug)]
pub struct ParsevalTerm<F> {
    pub beta: Vec<usize>,
    /// `α + Σβ` at height `2(d+1)`.
    pub sum: LatticePoint,
    pub weight: F,
    pub value: F,
}

/// Summands `vol(x_{(α+β)/2})² θ^β` over ordered tuples `β` of height-1
/// elements sharing a cell with `α`, where the half point exists.
pub fn parseval_char2_terms<F: FiniteField>(
    vf: &VolumeFunctional<F>,
    theta: &Theta<F>,
    alpha: usize,
) -> Result<Vec<ParsevalTerm<F>>, IdentityError> {
    let cx = &vf.space.complex;
    let top = vf.degree();
    let (l1, lt) = (cx.layer(1), cx.layer(top));
    check_budget((l1.len() as u64).saturating_pow(top))?;
    let mut out = Vec::new();
    for beta in tuples(l1.len(), top as usize) {
        if common_cells(cx, lt.cells[alpha], &beta).0 == 0 {
            continue;
        }
        let weight = beta.iter().enumerate().fold(F::one(), |acc, (i, &b)| acc * *theta.entry(i, b));
        let sum = beta.iter().fold(lt.points[alpha].clone(), |acc, &b| intlin::add(&acc, &l1.points[b]));
        let Some(half) = cx.half_point(&sum, 2 * top)? else { continue };
        let v = vf.value(half);
        out.push(ParsevalTerm { beta, sum, weight, value: v * v * weight });
    }
    Ok(out)
}

/// `vol(x_α) = Σ_β vol(x_{(α+β)/2})² θ^β` in characteristic 2. The right side
/// is summed per tuple and again grouped by `Σβ`; both sums must agree.
pub fn check_parseval_char2<F: FiniteField>(
    vf: &VolumeFunctional<F>,
    theta: &Theta<F>,
    alpha: usize,
) -> Result<IdentityReport, IdentityError> {
    require_char::<F>(2)?;
    let cx = &vf.space.complex;
    let top = vf.degree();
    let terms = parseval_char2_terms(vf, theta, alpha)?;
    let ungrouped = terms.iter().fold(F::zero(), |acc, t| acc + t.value);

    let mut groups: BTreeMap<&LatticePoint, F> = BTreeMap::new();
    for t in &terms {
        let w = groups.entry(&t.sum).or_insert_with(F::zero);
        *w = *w + t.weight;
    }
    let mut grouped = F::zero();
    for (sum, w) in groups {
        let half = cx.half_point(sum, 2 * top)?.expect("grouped sums come from surviving terms");
        let v = vf.value(half);
        grouped = grouped + v * v * w;
    }
    let instance = format!("{} alpha={}", vf.space.describe(), point_label(cx, top, alpha));
    let mut report = IdentityReport::from_values("parseval", instance, vf.value(alpha), ungrouped);
    if grouped != ungrouped {
        report.pass = false;
        report.right = format!("{} (grouped {})", ungrouped.to_hex(), grouped.to_hex());
    }
    Ok(report)
}

/// All nonnegative vectors of length `n` with entry sum `total`.
pub fn row_compositions(n: usize, total: u32) -> Vec<Vec<u32>> {
    fn go(n: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=total).rev() {
            prefix.push(e);
            go(n, total - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(n, total, &mut Vec::new(), &mut out);
    out
}

fn factorial<F: FiniteField>(e: u32) -> F {
    (2..=e).fold(F::one(), |acc, k| acc * F::from_int(k as i64))
}

/// `vol(x_α) = Σ_β vol(x_{(α+β)/p})^p θ^β / β!` with `β` ranging over
/// `(d+1) × #points` matrices whose rows sum to `p − 1`.
pub fn check_parseval_char_p<F: FiniteField>(
    vf: &VolumeFunctional<F>,
    theta: &Theta<F>,
    alpha: usize,
) -> Result<IdentityReport, IdentityError> {
    let p = F::CHARACTERISTIC as u32;
    let cx = &vf.space.complex;
    let top = vf.degree();
    let (l1, lt) = (cx.layer(1), cx.layer(top));
    let rows = row_compositions(l1.len(), p - 1);
    check_budget((rows.len() as u64).saturating_pow(top))?;

    // Per-row weight, support and point sum.
    let per_row: Vec<Vec<(F, Vec<usize>, LatticePoint)>> = (0..top as usize)
        .map(|i| {
            rows.iter()
                .map(|r| {
                    let mut w = F::one();
                    let mut support = Vec::new();
                    let mut sum = vec![0; cx.ambient_dim()];
                    for (j, &e) in r.iter().enumerate() {
                        if e == 0 {
                            continue;
                        }
                        w = w * theta.entry(i, j).pow(e as u128) * factorial::<F>(e).inverse().unwrap();
                        support.push(j);
                        sum = intlin::add(&sum, &l1.points[j].iter().map(|c| c * e as i64).collect::<Vec<_>>());
                    }
                    (w, support, sum)
                })
                .collect()
        })
        .collect();

    let mut rhs = F::zero();
    for choice in tuples(rows.len(), top as usize) {
        let support: Vec<usize> = choice.iter().enumerate().flat_map(|(i, &c)| per_row[i][c].1.clone()).collect();
        if common_cells(cx, lt.cells[alpha], &support).0 == 0 {
            continue;
        }
        let weight = choice.iter().enumerate().fold(F::one(), |acc, (i, &c)| acc * per_row[i][c].0);
        if weight.is_zero() {
            continue;
        }
        let sum = choice.iter().enumerate().fold(lt.points[alpha].clone(), |acc, (i, &c)| intlin::add(&acc, &per_row[i][c].2));
        let Some(root) = cx.divide_point(&sum, p * top, p)? else { continue };
        rhs = rhs + vf.value(root).pow(p as u128) * weight;
    }
    let instance = format!("{} p={p} alpha={}", vf.space.describe(), point_label(cx, top, alpha));
    Ok(IdentityReport::from_values("parseval-p", instance, vf.value(alpha), rhs))
}

/// `vol(x_σ u²) = Σ_β vol(u · x_{(σ+β)/2})² θ^β` in characteristic 2, for
/// `u` of degree `(d+1−|σ|)/2` in the module, or in the ring when `Σσ` is an
/// interior element.
pub fn check_parseval_general<F: FiniteField>(
    vf: &VolumeFunctional<F>,
    theta: &Theta<F>,
    sigma: &[usize],
    u: &Element<F>,
) -> Result<IdentityReport, IdentityError> {
    require_char::<F>(2)?;
    let cx = &vf.space.complex;
    let top = vf.degree();
    let s = sigma.len() as u32;
    if s > top || !(top - s).is_multiple_of(2) {
        return Err(IdentityError::Parity(format!("d+1 = {top} and |σ| = {s} differ by an odd number")));
    }
    let k = (top - s) / 2;
    if u.height != k {
        return Err(IdentityError::NotAdmissible(format!("u has degree {}, expected {k}", u.height)));
    }
    let l1 = cx.layer(1);
    let x_sigma = sigma.iter().fold(Element::one(cx), |acc, &p| acc.mul(&Element::monomial(1, p), cx));
    let sigma_interior = x_sigma.terms.iter().all(|(i, _)| vf.space.contains(s, *i)) && !x_sigma.is_zero();
    let u_in_module = u.terms.iter().all(|(i, _)| vf.space.contains(k, *i));
    if !(u_in_module || sigma_interior) {
        return Err(IdentityError::NotAdmissible("u leaves the module and Σσ is not interior".into()));
    }
    let lhs = vf.volume_of(&x_sigma.mul(&u.mul(u, cx), cx))?;

    check_budget((l1.len() as u64).saturating_pow(top))?;
    let sigma_sum = sigma.iter().fold(vec![0; cx.ambient_dim()], |acc, &p| intlin::add(&acc, &l1.points[p]));
    let everywhere = crate::complex::CellSet(u64::MAX);
    let mut rhs = F::zero();
    for beta in tuples(l1.len(), top as usize) {
        let all: Vec<usize> = sigma.iter().chain(&beta).copied().collect();
        if common_cells(cx, everywhere, &all).0 == 0 {
            continue;
        }
        let weight = beta.iter().enumerate().fold(F::one(), |acc, (i, &b)| acc * *theta.entry(i, b));
        if weight.is_zero() {
            continue;
        }
        let sum = beta.iter().fold(sigma_sum.clone(), |acc, &b| intlin::add(&acc, &l1.points[b]));
        let Some(half) = cx.half_point(&sum, s + top)? else { continue };
        let v = vf.volume_of(&u.mul(&Element::monomial((s + top) / 2, half), cx))?;
        rhs = rhs + v * v * weight;
    }
    let labels: Vec<String> = sigma.iter().map(|&p| point_label(cx, 1, p)).collect();
    let instance = format!("{} sigma=[{}] deg(u)={k} terms(u)={}", vf.space.describe(), labels.join(" "), u.terms.len());
    Ok(IdentityReport::from_values("parseval-general", instance, lhs, rhs))
}
