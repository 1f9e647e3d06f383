use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{Jet, JetCtx, KSeries};
use crate::arith::{HSeries, Mono, Rational};
use crate::deform::ASeries;

/// Reduced row echelon form over ℚ; returns pivot columns.
fn rref(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Rational::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..rows[i].len() {
                    let v = &rows[r][k] * &f;
                    rows[i][k] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Coefficients `c_j ∈ k[[h]]` with `target = Σ c_j·cand_j` on every `e^β`
/// with `|β| ≤ d`, exact at order `N`; `None` if the target is not in the span.
/// Free directions are fixed to zero.
pub fn express_in_span(ctx: &JetCtx, target: &Jet, cands: &[Jet]) -> Option<Vec<KSeries>> {
    let betas = ctx.indices();
    let tv: Vec<ASeries> = betas.iter().map(|b| ctx.value(target, b)).collect();
    let cv: Vec<Vec<ASeries>> = cands.iter().map(|c| betas.iter().map(|b| ctx.value(c, b)).collect()).collect();
    solve_series(&tv, &cv)
}

/// `target = Σ_j c_j cand_j` entrywise over `A_h`, solved order by order for
/// scalars `c_j ∈ k[[h]]` with the order-0 candidate matrix.
pub fn solve_series(tv: &[ASeries], cv: &[Vec<ASeries>]) -> Option<Vec<KSeries>> {
    let Some(n) = tv.first().map(|t| t.order()) else { return Some(vec![KSeries::zero(0, &Rational::zero()); cv.len()]) };
    let r = cv.len();

    // rows indexed by (entry, x-monomial)
    let mut keys: BTreeMap<(usize, Mono), usize> = BTreeMap::new();
    let note = |bi: usize, a: &ASeries, keys: &mut BTreeMap<(usize, Mono), usize>| {
        for ak in a.coeffs() {
            for (g, _) in ak.terms() {
                let len = keys.len();
                keys.entry((bi, g.clone())).or_insert(len);
            }
        }
    };
    for bi in 0..tv.len() {
        note(bi, &tv[bi], &mut keys);
        for c in cv {
            note(bi, &c[bi], &mut keys);
        }
    }
    let nrows = keys.len();
    let coef = |a: &ASeries, k: usize, g: &Mono| a.coeff(k).coeff(g);

    let mut sol: Vec<Vec<Rational>> = vec![Vec::with_capacity(n + 1); r];
    for k in 0..=n {
        // augmented [M | rhs] with M from order-0 candidate values
        let mut rows = vec![vec![Rational::zero(); r + 1]; nrows];
        for ((bi, g), &row) in &keys {
            for j in 0..r {
                rows[row][j] = coef(&cv[j][*bi], 0, g);
            }
            let mut rhs = coef(&tv[*bi], k, g);
            for i in 0..k {
                for j in 0..r {
                    if !sol[j][i].is_zero() {
                        rhs -= &sol[j][i] * coef(&cv[j][*bi], k - i, g);
                    }
                }
            }
            rows[row][r] = rhs;
        }
        let piv = rref(&mut rows, r + 1);
        if piv.contains(&r) {
            return None;
        }
        let mut ck = vec![Rational::zero(); r];
        for (i, &c) in piv.iter().enumerate() {
            ck[c] = rows[i][r].clone();
        }
        for j in 0..r {
            sol[j].push(ck[j].clone());
        }
    }
    Some(sol.into_iter().map(HSeries::from_coeffs).collect())
}
