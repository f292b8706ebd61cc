//! The computer-algebra side of every check: build `J_{K_m,G}`, then read off dimension,
//! Betti numbers and ideal identities.

use bei_core::cutsets::cut_point_sets;
use bei_core::{Graph, Label};
use serde::{Deserialize, Serialize};

use crate::dimension::monomial_dim;
use crate::error::{AlgebraError, Result};
use crate::field::PrimeField;
use crate::groebner::{groebner_basis, ideal_equal, ideal_intersection, initial_ideal, GbCaps};
use crate::ideal::{build_ideal_generators, build_pt_ideal, dense_ring, Ideal};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Polynomial;
use crate::resolution::{resolve, ResCaps, Resolution};
use crate::ring::RingContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCaps {
    /// Largest `m·|V|` for Gröbner-basis work.
    pub gb_vars: usize,
    pub gb: GbCaps,
    pub res: ResCaps,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps { gb_vars: 24, gb: GbCaps::default(), res: ResCaps::default() }
    }
}

fn check_gb_cap(g: &Graph, m: u32, caps: &OracleCaps) -> Result<()> {
    let vars = m as usize * g.num_vertices();
    if vars > caps.gb_vars {
        Err(AlgebraError::ResourceCap { what: "Gröbner variables", limit: caps.gb_vars })
    } else {
        Ok(())
    }
}

/// `J_{K_m,G}` in the ring of the densely relabelled graph.
pub fn binomial_edge_ideal<F: PrimeField>(g: &Graph, m: u32) -> Result<Ideal<F>> {
    let (dense, _, ring) = dense_ring(g, m, F::CHARACTERISTIC)?;
    build_ideal_generators(&dense, &ring)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimReport {
    pub dim: u32,
    pub gb_size: usize,
    pub squarefree_initial: bool,
}

/// `dim S/J` via the initial ideal of a degrevlex Gröbner basis.
pub fn oracle_dim<F: PrimeField>(g: &Graph, m: u32, caps: &OracleCaps) -> Result<DimReport> {
    oracle_dim_in::<F>(g, m, MonomialOrder::Degrevlex, caps)
}

pub fn oracle_dim_in<F: PrimeField>(
    g: &Graph,
    m: u32,
    order: MonomialOrder,
    caps: &OracleCaps,
) -> Result<DimReport> {
    check_gb_cap(g, m, caps)?;
    let (dense, _, ring) = dense_ring(g, m, F::CHARACTERISTIC)?;
    let j = build_ideal_generators::<F>(&dense, &ring.with_order(order))?;
    let gb = groebner_basis(&j, &caps.gb)?;
    let init = initial_ideal(&gb);
    Ok(DimReport {
        dim: monomial_dim(&init).expect("J is a proper ideal"),
        gb_size: gb.generators.len(),
        squarefree_initial: init.generators.iter().all(|p| p.lm().is_squarefree()),
    })
}

pub fn oracle_resolution<F: PrimeField>(g: &Graph, m: u32, caps: &OracleCaps) -> Result<Resolution> {
    resolve(&binomial_edge_ideal::<F>(g, m)?, &caps.res)
}

/// `J = ∩_{T ∈ C(G)} P_T`, checked by comparing reduced Gröbner bases.
pub fn verify_decomposition<F: PrimeField>(g: &Graph, m: u32, caps: &OracleCaps) -> Result<bool> {
    check_gb_cap(g, m, caps)?;
    let (dense, _, ring) = dense_ring(g, m, F::CHARACTERISTIC)?;
    let j = build_ideal_generators::<F>(&dense, &ring)?;
    let family = cut_point_sets(&dense)?;
    let mut acc: Option<Ideal<F>> = None;
    for cs in &family.sets {
        let p = build_pt_ideal::<F>(&dense, &cs.set, &ring)?;
        acc = Some(match acc {
            None => p,
            Some(a) => ideal_intersection(&a, &p, &caps.gb)?,
        });
    }
    ideal_equal(&j, &acc.expect("the empty set is always in C(G)"), &caps.gb)
}

/// `J_G = J_{G_v} ∩ ((x_{iv} : i ∈ [m]) + J_{G \ v})` for a vertex `v` of `G`.
pub fn verify_exactseq<F: PrimeField>(g: &Graph, v: Label, m: u32, caps: &OracleCaps) -> Result<bool> {
    check_gb_cap(g, m, caps)?;
    let (dense, map, ring) = dense_ring(g, m, F::CHARACTERISTIC)?;
    let dv = map.iter().position(|&x| x == v).ok_or(bei_core::Error::UnknownVertex(v))? as u32 + 1;
    let j = build_ideal_generators::<F>(&dense, &ring)?;
    let jv = build_ideal_generators::<F>(&dense.saturate_neighborhood(dv)?, &ring)?;
    let mut rest = build_ideal_generators::<F>(&dense.delete_vertex(dv)?, &ring)?;
    for i in 1..=m {
        rest.generators.push(Polynomial::monomial(Monomial::var(ring.var(i, dv)), F::one()));
    }
    ideal_equal(&j, &ideal_intersection(&jv, &rest, &caps.gb)?, &caps.gb)
}

/// A ring for ad-hoc ideals over the grid of `g`.
pub fn ring_for(g: &Graph, m: u32, characteristic: u32) -> Result<RingContext> {
    Ok(dense_ring(g, m, characteristic)?.2)
}
