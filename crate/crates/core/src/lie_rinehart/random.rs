//! Seeded families of valid Lie-Rinehart algebras, built by transporting
//! known structures along random changes of basis, plus corruptions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LieRinehartSpec;
use crate::arith::{int, monos_up_to, CPoly};

fn small_poly(rng: &mut ChaCha8Rng, p: usize, max_deg: u32) -> CPoly {
    let mut f = CPoly::zero(p);
    for m in monos_up_to(p, max_deg) {
        if rng.random_bool(0.4) {
            f.add_term(m, &int(rng.random_range(-2..=2)));
        }
    }
    f
}

/// Inverse of a unitriangular matrix (upper, ones on the diagonal).
fn unitriangular_inverse(a: &[Vec<CPoly>], p: usize) -> Vec<Vec<CPoly>> {
    let n = a.len();
    let mut inv = vec![vec![CPoly::zero(p); n]; n];
    for i in (0..n).rev() {
        inv[i][i] = CPoly::one(p);
        for j in i + 1..n {
            // (A · inv)[i][j] = 0  ⇒  inv[i][j] = −Σ_{i<k≤j} A[i][k] inv[k][j]
            let mut s = CPoly::zero(p);
            for k in i + 1..=j {
                s.add_assign(&(&a[i][k] * &inv[k][j]));
            }
            inv[i][j] = -&s;
        }
    }
    inv
}

fn random_unitriangular(rng: &mut ChaCha8Rng, n: usize, p: usize, max_deg: u32) -> Vec<Vec<CPoly>> {
    let mut a = vec![vec![CPoly::zero(p); n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = CPoly::one(p);
        for entry in row.iter_mut().skip(i + 1) {
            *entry = small_poly(rng, p, max_deg);
        }
    }
    a
}

/// New basis `e'_i = Σ_j P_ij e_j`; the bracket is re-expressed through the
/// section bracket of the old structure and `P⁻¹`.
fn transport(old: &LieRinehartSpec, pmat: &[Vec<CPoly>]) -> LieRinehartSpec {
    let (p, m) = (old.p, old.m);
    let inv = unitriangular_inverse(pmat, p);
    let mut s = LieRinehartSpec::new(p, m);
    for i in 0..m {
        for v in 0..p {
            let mut w = CPoly::zero(p);
            for j in 0..m {
                w.add_assign(&(&pmat[i][j] * &old.anchor_row(j)[v]));
            }
            s.set_anchor(i, v, w);
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            let b = old.bracket(&pmat[i], &pmat[j]);
            let mut c = vec![CPoly::zero(p); m];
            for (l, bl) in b.iter().enumerate() {
                if bl.is_zero() {
                    continue;
                }
                for (k, ck) in c.iter_mut().enumerate() {
                    ck.add_assign(&(bl * &inv[l][k]));
                }
            }
            s.set_bracket(i, j, c).expect("in range");
        }
    }
    s
}

fn constant_structure(p: usize, m: usize, table: &[(usize, usize, &[(usize, i64)])]) -> LieRinehartSpec {
    let mut s = LieRinehartSpec::new(p, m);
    for &(i, j, entries) in table {
        let mut v = vec![CPoly::zero(p); m];
        for &(k, c) in entries {
            v[k] = CPoly::constant(p, int(c));
        }
        s.set_bracket(i, j, v).expect("in range");
    }
    s
}

/// A valid spec drawn from one of three families, selected by `seed % 3`:
/// gauge-transformed `Der(ℚ[x1,x2])`, an `sl2` action algebroid on `ℚ[x]`,
/// and a transported zero-anchor Lie algebra over `ℚ[x]`.
pub fn random_valid_spec(seed: u64) -> LieRinehartSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match seed % 3 {
        0 => {
            let base = LieRinehartSpec::derivations(2);
            let pm = random_unitriangular(&mut rng, 2, 2, 1);
            transport(&base, &pm)
        }
        1 => {
            // ∂, x∂, x²∂ acting on ℚ[x]
            let mut base = constant_structure(1, 3, &[(0, 1, &[(0, 1)]), (0, 2, &[(1, 2)]), (1, 2, &[(2, 1)])]);
            base.set_anchor(0, 0, CPoly::one(1));
            base.set_anchor(1, 0, CPoly::var(1, 0));
            base.set_anchor(2, 0, CPoly::parse("x1^2", 1).unwrap());
            let pm = random_unitriangular(&mut rng, 3, 1, 0);
            transport(&base, &pm)
        }
        _ => {
            let base = match rng.random_range(0..3) {
                0 => constant_structure(1, 2, &[(0, 1, &[(0, 1)])]),
                1 => constant_structure(1, 3, &[(0, 1, &[(2, 1)])]),
                _ => constant_structure(1, 3, &[(0, 1, &[(0, 2)]), (0, 2, &[(2, -2)]), (1, 2, &[(1, 1)])]),
            };
            let pm = random_unitriangular(&mut rng, base.m, 1, 1);
            transport(&base, &pm)
        }
    }
}

/// The first perturbation (bracket term `x1·e_k` added to `[e_i,e_j]`, or
/// `x1²∂/∂x1` added to `ω(e_i)`) that makes `spec` invalid, with a label.
pub fn corrupt(spec: &LieRinehartSpec) -> Option<(String, LieRinehartSpec)> {
    let (p, m) = (spec.p, spec.m);
    let bump = if p == 0 { CPoly::one(0) } else { CPoly::var(p, 0) };
    let mut candidates = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in 0..m {
                let mut s = spec.clone();
                let mut v = s.bracket_basis(i, j);
                v[k] = &v[k] + &bump;
                s.set_bracket(i, j, v).expect("in range");
                candidates.push((format!("[{},{}] += {}*{}", s.names[i], s.names[j], bump, s.names[k]), s));
            }
        }
    }
    if p > 0 {
        let sq = &bump * &bump;
        for i in 0..m {
            let mut s = spec.clone();
            let w = &s.anchor_row(i)[0] + &sq;
            s.set_anchor(i, 0, w);
            candidates.push((format!("omega({}) += {}*d/dx1", s.names[i], sq), s));
        }
    }
    candidates.into_iter().find(|(_, s)| !super::lr_validate(s).passed())
}

/// Rank 3 over ℚ with `[e1,e2] = e3`, `[e2,e3] = e1`, `[e1,e3] = e1`.
pub fn jacobi_violating_spec() -> LieRinehartSpec {
    constant_structure(0, 3, &[(0, 1, &[(2, 1)]), (1, 2, &[(0, 1)]), (0, 2, &[(0, 1)])])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_rinehart::lr_validate;

    #[test]
    fn random_specs_validate() {
        for seed in 0..12 {
            let s = random_valid_spec(seed);
            let r = lr_validate(&s);
            assert!(r.passed(), "seed {seed}: {r}");
        }
    }

    #[test]
    fn random_specs_are_deterministic() {
        assert_eq!(random_valid_spec(7), random_valid_spec(7));
    }

    #[test]
    fn gauge_transform_is_nontrivial() {
        let nontrivial = (0..30).step_by(3).any(|seed| random_valid_spec(seed).bracket_entries().next().is_some());
        assert!(nontrivial);
    }

    #[test]
    fn corruptions_fail_with_witness() {
        for seed in 0..9 {
            let (label, s) = corrupt(&random_valid_spec(seed)).expect("some corruption breaks validity");
            let r = lr_validate(&s);
            assert!(r.problems().iter().all(|c| c.witness.is_some()), "seed {seed} {label}");
        }
    }

    #[test]
    fn unitriangular_inverse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_unitriangular(&mut rng, 3, 2, 1);
        let inv = unitriangular_inverse(&a, 2);
        for i in 0..3 {
            for j in 0..3 {
                let mut s = CPoly::zero(2);
                for k in 0..3 {
                    s.add_assign(&(&a[i][k] * &inv[k][j]));
                }
                assert_eq!(s, if i == j { CPoly::one(2) } else { CPoly::zero(2) });
            }
        }
    }
}
