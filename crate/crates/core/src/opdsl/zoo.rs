//! Named operators.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::opcore::multiindex::{multi_indices_of_order, MultiIndex};
use crate::opcore::scalar::{rat, ratio, Rational};
use crate::opcore::{Operator, OperatorError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZooError {
    #[error("unknown builtin `{0}`")]
    UnknownId(String),
    #[error("builtin `{id}` does not take parameter `{param}`")]
    UnknownParam { id: String, param: String },
    #[error("invalid parameters for `{id}`: {reason}")]
    InvalidParams { id: String, reason: String },
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

pub const BUILTIN_IDS: [&str; 7] = ["grad_k", "sym_grad", "dev_sym_grad", "laplacian", "delbar", "A_kn", "B_kn"];

/// Largest n and k accepted by the builders.
pub const MAX_DIMENSION: i64 = 8;
pub const MAX_ORDER: i64 = 6;

/// Builtin by id with integer parameters `n`, `N`, `k` (each optional, per builtin).
pub fn zoo(id: &str, params: &BTreeMap<String, i64>) -> Result<Operator, ZooError> {
    let allowed: &[&str] = match id {
        "grad_k" => &["k", "n", "N"],
        "sym_grad" | "dev_sym_grad" => &["n"],
        "laplacian" => &["n", "N"],
        "delbar" => &["n"],
        "A_kn" => &["k", "n", "N"],
        "B_kn" => &["k", "n", "N"],
        _ => return Err(ZooError::UnknownId(id.to_string())),
    };
    if let Some(p) = params.keys().find(|p| !allowed.contains(&p.as_str())) {
        return Err(ZooError::UnknownParam { id: id.into(), param: p.clone() });
    }
    let bad = |reason: &str| ZooError::InvalidParams { id: id.into(), reason: reason.into() };
    let get = |key: &str, default: i64| params.get(key).copied().unwrap_or(default);
    let n = get("n", 2);
    if !(2..=MAX_DIMENSION).contains(&n) {
        return Err(bad("n must lie in 2..=8"));
    }
    let n = n as usize;
    let order = |default: i64, min: i64| -> Result<u32, ZooError> {
        let k = get("k", default);
        if k < min || k > MAX_ORDER {
            return Err(bad(&format!("k must lie in {min}..={MAX_ORDER}")));
        }
        Ok(k as u32)
    };
    let dim = |default: i64, min: i64| -> Result<usize, ZooError> {
        let v = get("N", default);
        if v < min || v > 16 {
            return Err(bad(&format!("N must lie in {min}..=16")));
        }
        Ok(v as usize)
    };
    match id {
        "grad_k" => Ok(grad_k(n, dim(1, 1)?, order(1, 1)?)?),
        "sym_grad" => Ok(sym_grad(n)?),
        "dev_sym_grad" => Ok(dev_sym_grad(n)?),
        "laplacian" => Ok(laplacian(n, dim(1, 1)?)?),
        "delbar" => {
            if n != 2 {
                return Err(bad("delbar is defined for n = 2"));
            }
            Ok(delbar()?)
        }
        "A_kn" => Ok(a_kn(order(1, 1)?, n, dim(n as i64, 2)?)?),
        "B_kn" => {
            if get("N", 1) != 1 {
                return Err(bad("B_kn acts on scalar fields (N = 1)"));
            }
            Ok(b_kn(order(2, 2)?, n)?)
        }
        _ => unreachable!(),
    }
}

/// |β| = l in descending lexicographic order, so ∂₁ comes first.
pub fn tensor_indices(n: usize, l: u32) -> Vec<MultiIndex> {
    let mut b = multi_indices_of_order(n, l);
    b.reverse();
    b
}

/// ∇^k on ℝ^N-valued maps; rows (i, β), |β| = k, i outer.
pub fn grad_k(n: usize, dim_v: usize, k: u32) -> Result<Operator, OperatorError> {
    let betas = tensor_indices(n, k);
    let entries = (0..dim_v).flat_map(|i| {
        let betas = &betas;
        betas.iter().enumerate().map(move |(b, beta)| (i * betas.len() + b, i, beta.clone(), rat(1)))
    });
    Operator::from_entries(n, dim_v, dim_v * betas.len(), k, entries.collect::<Vec<_>>())
}

fn sym_index(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// ℰu = (∇u + ∇uᵀ)/2, upper-triangular components (i ≤ j) in row-major order.
pub fn sym_grad(n: usize) -> Result<Operator, OperatorError> {
    let mut entries = Vec::new();
    for (row, (i, j)) in sym_index(n).into_iter().enumerate() {
        // (ℰu)_{ij} = (∂_j u_i + ∂_i u_j)/2
        entries.push((row, i, MultiIndex::unit(n, j), ratio(1, 2)));
        entries.push((row, j, MultiIndex::unit(n, i), ratio(1, 2)));
    }
    Operator::from_entries(n, n, entries.len() / 2, 1, entries)
}

/// ℰ^D u = ℰu − (div u / n) I, components: off-diagonal i < j, then diagonal i = 1..n−1.
///
/// The last diagonal entry is minus the sum of the others and is left out.
pub fn dev_sym_grad(n: usize) -> Result<Operator, OperatorError> {
    let mut entries: Vec<(usize, usize, MultiIndex, Rational)> = Vec::new();
    let mut row = 0;
    for i in 0..n {
        for j in i + 1..n {
            entries.push((row, i, MultiIndex::unit(n, j), ratio(1, 2)));
            entries.push((row, j, MultiIndex::unit(n, i), ratio(1, 2)));
            row += 1;
        }
    }
    for i in 0..n - 1 {
        entries.push((row, i, MultiIndex::unit(n, i), rat(1)));
        for l in 0..n {
            entries.push((row, l, MultiIndex::unit(n, l), ratio(-1, n as i64)));
        }
        row += 1;
    }
    Operator::from_entries(n, n, row, 1, entries)
}

/// Δ acting componentwise on ℝ^N.
pub fn laplacian(n: usize, dim_v: usize) -> Result<Operator, OperatorError> {
    let entries = (0..dim_v).flat_map(|i| (0..n).map(move |j| (i, i, MultiIndex::unit(n, j).add(&MultiIndex::unit(n, j)), rat(1))));
    Operator::from_entries(n, dim_v, dim_v, 2, entries.collect::<Vec<_>>())
}

/// ∂̄ ≅ (∂₁u₁ − ∂₂u₂, ∂₂u₁ + ∂₁u₂).
pub fn delbar() -> Result<Operator, OperatorError> {
    Operator::from_entries(
        2,
        2,
        2,
        1,
        [
            (0, 0, MultiIndex::unit(2, 0), rat(1)),
            (0, 1, MultiIndex::unit(2, 1), rat(-1)),
            (1, 0, MultiIndex::unit(2, 1), rat(1)),
            (1, 1, MultiIndex::unit(2, 0), rat(1)),
        ],
    )
}

/// 𝔸_{1,n}: the ∂̄ pair on (u₁, u₂) plus every ∂_j u_i with (i, j) ∉ {1,2}².
///
/// Extra components: i ≥ 3 (all j), then i ∈ {1, 2} with j ≥ 3.
fn a_1n(n: usize, dim_v: usize) -> Result<Operator, OperatorError> {
    let mut entries = vec![
        (0, 0, MultiIndex::unit(n, 0), rat(1)),
        (0, 1, MultiIndex::unit(n, 1), rat(-1)),
        (1, 0, MultiIndex::unit(n, 1), rat(1)),
        (1, 1, MultiIndex::unit(n, 0), rat(1)),
    ];
    let mut pairs: Vec<(usize, usize)> = (2..dim_v).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    pairs.extend((0..2).flat_map(|i| (2..n).map(move |j| (i, j))));
    for (row, (i, j)) in pairs.iter().enumerate() {
        entries.push((row + 2, *i, MultiIndex::unit(n, *j), rat(1)));
    }
    Operator::from_entries(n, dim_v, pairs.len() + 2, 1, entries)
}

/// 𝔸_{k,n} = ∇^{k−1} 𝔸_{1,n}.
pub fn a_kn(k: u32, n: usize, dim_v: usize) -> Result<Operator, OperatorError> {
    Ok(compose_grad(&a_1n(n, dim_v)?, k - 1))
}

/// 𝔹_{k,n} = ∇^{k−2}(∂₁² + ∂₂², ∂_j² for j ≥ 3), scalar.
pub fn b_kn(k: u32, n: usize) -> Result<Operator, OperatorError> {
    let sq = |j: usize| MultiIndex::unit(n, j).add(&MultiIndex::unit(n, j));
    let mut entries = vec![(0, 0, sq(0), rat(1)), (0, 0, sq(1), rat(1))];
    for j in 2..n {
        entries.push((j - 1, 0, sq(j), rat(1)));
    }
    let base = Operator::from_entries(n, 1, n - 1, 2, entries)?;
    Ok(compose_grad(&base, k - 2))
}

/// ∇^l ∘ 𝔸; rows (r, β) with |β| = l, r outer, each β listed once.
pub fn compose_grad(op: &Operator, l: u32) -> Operator {
    if l == 0 {
        return op.clone();
    }
    let n = op.n();
    let betas = tensor_indices(n, l);
    let mut entries = Vec::new();
    for (alpha, a) in op.terms() {
        for r in 0..op.dim_w() {
            for (b, beta) in betas.iter().enumerate() {
                for c in 0..op.dim_v() {
                    let v = a.get(r, c);
                    if !num_traits::Zero::is_zero(v) {
                        entries.push((r * betas.len() + b, c, alpha.add(beta), v.clone()));
                    }
                }
            }
        }
    }
    Operator::from_entries(n, op.dim_v(), op.dim_w() * betas.len(), op.order() + l, entries)
        .expect("composition of a valid operator")
}
